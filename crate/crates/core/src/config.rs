/// Knobs shared by every enumerating operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    /// Upper bound on any single enumeration (candidate maps, search nodes,
    /// quantifier extensions). Exceeding it is an error, never a truncation.
    pub cap: u64,
    /// Use the rayon pool when the `parallel` feature is compiled in.
    /// Results are identical either way.
    pub parallel: bool,
}

pub const DEFAULT_CAP: u64 = 1_000_000;

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            cap: DEFAULT_CAP,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

impl EnumConfig {
    pub fn with_cap(cap: u64) -> Self {
        EnumConfig {
            cap,
            ..Self::default()
        }
    }

    pub fn sequential(self) -> Self {
        EnumConfig {
            parallel: false,
            ..self
        }
    }

    pub fn parallel(self) -> Self {
        EnumConfig {
            parallel: true,
            ..self
        }
    }
}
