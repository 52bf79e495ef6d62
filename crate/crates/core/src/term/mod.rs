//! Simply typed λ-calculus with binary products and typed constants.

mod brute;
mod infer;
mod parse;
mod reduce;
mod sig;

pub use brute::brute_force_inhabitants;
pub use infer::{curry_howard_translate, infer_inhabitants, is_normal, type_of};
pub use parse::{parse_term, parse_type};
pub use reduce::{one_step_reductions, reduction_graph, GraphReport, ReductionGraph};
pub use sig::{Builtin, DeltaRule, Pattern, Signature};

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ty {
    Atom(String),
    Arrow(Arc<Ty>, Arc<Ty>),
    Prod(Arc<Ty>, Arc<Ty>),
}

impl Ty {
    pub fn atom(name: impl Into<String>) -> Ty {
        Ty::Atom(name.into())
    }

    pub fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Arc::new(a), Arc::new(b))
    }

    pub fn prod(a: Ty, b: Ty) -> Ty {
        Ty::Prod(Arc::new(a), Arc::new(b))
    }

    /// Height of the type tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Ty::Atom(_) => 0,
            Ty::Arrow(a, b) | Ty::Prod(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// All subterms, including `self`.
    pub fn subformulas(&self, out: &mut BTreeSet<Ty>) {
        if out.insert(self.clone()) {
            if let Ty::Arrow(a, b) | Ty::Prod(a, b) = self {
                a.subformulas(out);
                b.subformulas(out);
            }
        }
    }

    /// Display with `×`, `→` and typographic primes.
    pub fn pretty(&self) -> String {
        self.render("×", "→", true)
    }

    fn render(&self, times: &str, to: &str, typographic: bool) -> String {
        match self {
            Ty::Atom(a) if typographic => a.replace('\'', "′"),
            Ty::Atom(a) => a.clone(),
            Ty::Arrow(a, b) => {
                let l = a.render(times, to, typographic);
                let l = if matches!(**a, Ty::Arrow(..)) {
                    format!("({l})")
                } else {
                    l
                };
                let sep = if typographic {
                    to.to_string()
                } else {
                    format!(" {to} ")
                };
                format!("{l}{sep}{}", b.render(times, to, typographic))
            }
            Ty::Prod(a, b) => {
                let wrap = |t: &Ty, right: bool| {
                    let s = t.render(times, to, typographic);
                    match t {
                        Ty::Arrow(..) => format!("({s})"),
                        Ty::Prod(..) if right => format!("({s})"),
                        _ => s,
                    }
                };
                format!("{}{times}{}", wrap(a, false), wrap(b, true))
            }
        }
    }
}

/// ASCII rendering accepted by [`parse_type`].
impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("*", "->", false))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tm {
    Var(String),
    Lam(String, Ty, Arc<Tm>),
    App(Arc<Tm>, Arc<Tm>),
    Pair(Arc<Tm>, Arc<Tm>),
    Proj1(Arc<Tm>),
    Proj2(Arc<Tm>),
    Const(String),
}

impl Tm {
    pub fn var(x: impl Into<String>) -> Tm {
        Tm::Var(x.into())
    }

    pub fn lam(x: impl Into<String>, ty: Ty, body: Tm) -> Tm {
        Tm::Lam(x.into(), ty, Arc::new(body))
    }

    pub fn app(f: Tm, a: Tm) -> Tm {
        Tm::App(Arc::new(f), Arc::new(a))
    }

    pub fn pair(a: Tm, b: Tm) -> Tm {
        Tm::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn proj1(t: Tm) -> Tm {
        Tm::Proj1(Arc::new(t))
    }

    pub fn proj2(t: Tm) -> Tm {
        Tm::Proj2(Arc::new(t))
    }

    pub fn constant(c: impl Into<String>) -> Tm {
        Tm::Const(c.into())
    }

    pub fn numeral(n: u64) -> Tm {
        Tm::Const(n.to_string())
    }

    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            Tm::Const(c) => c.parse().ok(),
            _ => None,
        }
    }

    /// Tree depth: variables and constants 1, every other node one more than
    /// its deepest child (binder types do not count).
    pub fn depth(&self) -> usize {
        match self {
            Tm::Var(_) | Tm::Const(_) => 1,
            Tm::Lam(_, _, b) | Tm::Proj1(b) | Tm::Proj2(b) => 1 + b.depth(),
            Tm::App(a, b) | Tm::Pair(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn lambda_count(&self) -> usize {
        match self {
            Tm::Var(_) | Tm::Const(_) => 0,
            Tm::Lam(_, _, b) => 1 + b.lambda_count(),
            Tm::Proj1(b) | Tm::Proj2(b) => b.lambda_count(),
            Tm::App(a, b) | Tm::Pair(a, b) => a.lambda_count() + b.lambda_count(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Tm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Tm::Const(_) => {}
            Tm::Lam(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Tm::Proj1(b) | Tm::Proj2(b) => b.collect_free(bound, out),
            Tm::App(a, b) | Tm::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
        }
    }

    /// Capture-avoiding `self[x := s]`.
    pub fn subst(&self, x: &str, s: &Tm) -> Tm {
        match self {
            Tm::Var(y) if y == x => s.clone(),
            Tm::Var(_) | Tm::Const(_) => self.clone(),
            Tm::Lam(y, ty, b) => {
                if y == x {
                    return self.clone();
                }
                let fv = s.free_vars();
                if fv.contains(y) {
                    let mut avoid = fv;
                    avoid.extend(b.free_vars());
                    avoid.insert(x.to_string());
                    let z = fresh_name(y, &avoid);
                    let renamed = b.subst(y, &Tm::Var(z.clone()));
                    Tm::lam(z, ty.clone(), renamed.subst(x, s))
                } else {
                    Tm::lam(y.clone(), ty.clone(), b.subst(x, s))
                }
            }
            Tm::App(a, b) => Tm::app(a.subst(x, s), b.subst(x, s)),
            Tm::Pair(a, b) => Tm::pair(a.subst(x, s), b.subst(x, s)),
            Tm::Proj1(b) => Tm::proj1(b.subst(x, s)),
            Tm::Proj2(b) => Tm::proj2(b.subst(x, s)),
        }
    }

    /// Name-free rendering: bound variables become `#k` (distance to the
    /// binder). Two terms are α-equivalent iff these strings are equal.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        self.canon(&mut Vec::new(), &mut out);
        out
    }

    fn canon(&self, bound: &mut Vec<String>, out: &mut String) {
        match self {
            Tm::Var(x) => match bound.iter().rev().position(|b| b == x) {
                Some(k) => out.push_str(&format!("#{k}")),
                None => out.push_str(x),
            },
            Tm::Const(c) => out.push_str(c),
            Tm::Lam(x, ty, b) => {
                out.push_str(&format!("(λ:{ty}. "));
                bound.push(x.clone());
                b.canon(bound, out);
                bound.pop();
                out.push(')');
            }
            Tm::App(a, b) => {
                out.push('(');
                a.canon(bound, out);
                out.push(' ');
                b.canon(bound, out);
                out.push(')');
            }
            Tm::Pair(a, b) => {
                out.push('<');
                a.canon(bound, out);
                out.push_str(", ");
                b.canon(bound, out);
                out.push('>');
            }
            Tm::Proj1(b) | Tm::Proj2(b) => {
                out.push_str(if matches!(self, Tm::Proj1(_)) {
                    "(p1 "
                } else {
                    "(p2 "
                });
                b.canon(bound, out);
                out.push(')');
            }
        }
    }

    pub fn alpha_eq(&self, other: &Tm) -> bool {
        self.canonical() == other.canonical()
    }

    /// Untyped mathematical rendering: `λp.(f(π p), π′ p)`.
    pub fn pretty(&self) -> String {
        match self {
            Tm::Var(x) | Tm::Const(x) => x.replace('\'', "′"),
            Tm::Lam(x, _, b) => format!("λ{}.{}", x.replace('\'', "′"), b.pretty()),
            Tm::App(a, b) => {
                let head = match &**a {
                    Tm::Lam(..) | Tm::Proj1(_) | Tm::Proj2(_) => format!("({})", a.pretty()),
                    _ => a.pretty(),
                };
                let arg = b.pretty();
                if matches!(**b, Tm::Pair(..)) {
                    format!("{head}{arg}")
                } else {
                    format!("{head}({arg})")
                }
            }
            Tm::Pair(a, b) => format!("({}, {})", a.pretty(), b.pretty()),
            Tm::Proj1(b) | Tm::Proj2(b) => {
                let op = if matches!(self, Tm::Proj1(_)) {
                    "π"
                } else {
                    "π′"
                };
                match &**b {
                    Tm::Var(_) | Tm::Const(_) | Tm::Pair(..) => format!("{op} {}", b.pretty()),
                    _ => format!("{op}({})", b.pretty()),
                }
            }
        }
    }

    fn fmt_prec(&self, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // prec 0: anywhere; 1: function position; 2: argument position
        match self {
            Tm::Var(x) | Tm::Const(x) => f.write_str(x),
            Tm::Pair(a, b) => {
                f.write_str("(")?;
                a.fmt_prec(0, f)?;
                f.write_str(", ")?;
                b.fmt_prec(0, f)?;
                f.write_str(")")
            }
            Tm::Lam(x, ty, b) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                write!(f, "\\{x}:{ty}. ")?;
                b.fmt_prec(0, f)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Tm::App(..) | Tm::Proj1(_) | Tm::Proj2(_) => {
                if prec > 1 {
                    f.write_str("(")?;
                }
                match self {
                    Tm::App(a, b) => {
                        a.fmt_prec(1, f)?;
                        f.write_str(" ")?;
                        b.fmt_prec(2, f)?;
                    }
                    Tm::Proj1(b) => {
                        f.write_str("p1 ")?;
                        b.fmt_prec(2, f)?;
                    }
                    Tm::Proj2(b) => {
                        f.write_str("p2 ")?;
                        b.fmt_prec(2, f)?;
                    }
                    _ => unreachable!(),
                }
                if prec > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// ASCII rendering accepted by [`parse_term`].
impl fmt::Display for Tm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(0, f)
    }
}

pub(crate) fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_rendering() {
        let a = Ty::atom("A'");
        let b = Ty::atom("B");
        let t = Ty::arrow(
            Ty::prod(a.clone(), b.clone()),
            Ty::prod(Ty::atom("A"), b.clone()),
        );
        assert_eq!(t.to_string(), "A'*B -> A*B");
        assert_eq!(t.pretty(), "A′×B→A×B");
        let nested = Ty::arrow(Ty::arrow(a.clone(), b.clone()), b.clone());
        assert_eq!(nested.to_string(), "(A' -> B) -> B");
        assert_eq!(
            Ty::prod(a.clone(), Ty::prod(b.clone(), b.clone())).to_string(),
            "A'*(B*B)"
        );
        assert_eq!(t.depth(), 2);
    }

    #[test]
    fn substitution_avoids_capture() {
        // (\y. x y)[x := y] must not capture
        let t = Tm::lam("y", Ty::atom("A"), Tm::app(Tm::var("x"), Tm::var("y")));
        let r = t.subst("x", &Tm::var("y"));
        assert_eq!(r.free_vars(), BTreeSet::from(["y".to_string()]));
        assert_eq!(r.canonical(), "(λ:A. (y #0))");
    }

    #[test]
    fn alpha_equivalence() {
        let a = Tm::lam("x", Ty::atom("A"), Tm::var("x"));
        let b = Tm::lam("z", Ty::atom("A"), Tm::var("z"));
        assert!(a.alpha_eq(&b));
        assert_ne!(a, b);
    }

    #[test]
    fn pretty_matches_math_style() {
        let p = || Tm::var("p");
        let t = Tm::lam(
            "p",
            Ty::prod(Ty::atom("A'"), Ty::atom("B")),
            Tm::pair(Tm::app(Tm::var("f"), Tm::proj1(p())), Tm::proj2(p())),
        );
        assert_eq!(t.pretty(), "λp.(f(π p), π′ p)");
        assert_eq!(t.to_string(), "\\p:A'*B. (f (p1 p), p2 p)");
        assert_eq!(t.depth(), 5);
    }
}
