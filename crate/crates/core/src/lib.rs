//! Finite category theory by exhaustive computation: table categories,
//! set-valued functors, limits and Kan extensions, adjunctions, a small
//! typed λ-calculus, and a checkable language for commutative diagrams.

pub mod adjunction;
pub mod cat;
pub mod config;
pub mod diagram;
pub mod error;
pub mod finset;
pub mod formats;
pub mod kan;
mod par;
pub mod report;
pub mod term;
pub mod yoneda;

pub use config::EnumConfig;
pub use error::{Error, Result};
pub use report::{CheckReport, Obligation, Witness};
