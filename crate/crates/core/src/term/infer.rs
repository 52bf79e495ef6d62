use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::{Signature, Tm, Ty};
use crate::error::{Error, Result};

/// Type of `t` under `ctx` (later entries shadow earlier ones).
pub fn type_of(ctx: &[(String, Ty)], sig: &Signature, t: &Tm) -> Result<Ty> {
    let mut scope: Vec<(String, Ty)> = ctx.to_vec();
    infer(&mut scope, sig, t)
}

fn infer(scope: &mut Vec<(String, Ty)>, sig: &Signature, t: &Tm) -> Result<Ty> {
    match t {
        Tm::Var(x) => scope
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, ty)| ty.clone())
            .ok_or_else(|| Error::IllTyped(format!("unbound variable {x}"))),
        Tm::Const(c) => sig
            .const_type(c)
            .cloned()
            .ok_or_else(|| Error::IllTyped(format!("undeclared constant {c}"))),
        Tm::Lam(x, a, b) => {
            scope.push((x.clone(), a.clone()));
            let bt = infer(scope, sig, b);
            scope.pop();
            Ok(Ty::arrow(a.clone(), bt?))
        }
        Tm::App(f, a) => {
            let ft = infer(scope, sig, f)?;
            let at = infer(scope, sig, a)?;
            match ft {
                Ty::Arrow(dom, cod) if *dom == at => Ok((*cod).clone()),
                Ty::Arrow(dom, _) => Err(Error::IllTyped(format!(
                    "{f} expects {dom} but {a} has type {at}"
                ))),
                other => Err(Error::IllTyped(format!(
                    "{f} has type {other}, not a function type"
                ))),
            }
        }
        Tm::Pair(a, b) => Ok(Ty::prod(infer(scope, sig, a)?, infer(scope, sig, b)?)),
        Tm::Proj1(p) | Tm::Proj2(p) => match infer(scope, sig, p)? {
            Ty::Prod(a, b) => Ok(if matches!(t, Tm::Proj1(_)) {
                (*a).clone()
            } else {
                (*b).clone()
            }),
            other => Err(Error::IllTyped(format!(
                "{p} has type {other}, not a product"
            ))),
        },
    }
}

/// No β-redex and no projection of a pair anywhere in `t`.
pub fn is_normal(t: &Tm) -> bool {
    match t {
        Tm::Var(_) | Tm::Const(_) => true,
        Tm::App(f, a) => !matches!(**f, Tm::Lam(..)) && is_normal(f) && is_normal(a),
        Tm::Proj1(p) | Tm::Proj2(p) => !matches!(**p, Tm::Pair(..)) && is_normal(p),
        Tm::Lam(_, _, b) => is_normal(b),
        Tm::Pair(a, b) => is_normal(a) && is_normal(b),
    }
}

type Ctx = Vec<(String, Ty)>;

#[derive(Default)]
struct Search {
    memo: HashMap<(Ctx, Ty, usize), Arc<Vec<Tm>>>,
}

impl Search {
    fn gen(&mut self, ctx: &Ctx, goal: &Ty, d: usize) -> Arc<Vec<Tm>> {
        if d == 0 {
            return Arc::new(Vec::new());
        }
        let key = (ctx.clone(), goal.clone(), d);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut out = Vec::new();
        match goal {
            Ty::Arrow(a, b) => {
                let x = binder_name(a, ctx);
                let mut inner = ctx.clone();
                inner.push((x.clone(), (**a).clone()));
                for body in self.gen(&inner, b, d - 1).iter() {
                    out.push(Tm::lam(x.clone(), (**a).clone(), body.clone()));
                }
            }
            Ty::Prod(a, b) => {
                let ls = self.gen(ctx, a, d - 1);
                let rs = self.gen(ctx, b, d - 1);
                for l in ls.iter() {
                    for r in rs.iter() {
                        out.push(Tm::pair(l.clone(), r.clone()));
                    }
                }
            }
            Ty::Atom(_) => {}
        }
        for (h, ty) in ctx.clone() {
            self.spine(ctx, Tm::Var(h), 1, &ty, goal, d, &mut out);
        }
        let out = Arc::new(out);
        self.memo.insert(key, out.clone());
        out
    }

    /// Extends the neutral term `r : ty` (of depth `dr`) by eliminations.
    #[allow(clippy::too_many_arguments)]
    fn spine(
        &mut self,
        ctx: &Ctx,
        r: Tm,
        dr: usize,
        ty: &Ty,
        goal: &Ty,
        d: usize,
        out: &mut Vec<Tm>,
    ) {
        if ty == goal {
            out.push(r.clone());
        }
        if dr >= d {
            return;
        }
        match ty {
            Ty::Arrow(a, b) => {
                for arg in self.gen(ctx, a, d - 1).iter() {
                    let nd = 1 + dr.max(arg.depth());
                    self.spine(ctx, Tm::app(r.clone(), arg.clone()), nd, b, goal, d, out);
                }
            }
            Ty::Prod(a, b) => {
                self.spine(ctx, Tm::proj1(r.clone()), dr + 1, a, goal, d, out);
                self.spine(ctx, Tm::proj2(r), dr + 1, b, goal, d, out);
            }
            Ty::Atom(_) => {}
        }
    }
}

/// Conventional names: `p, q, …` for pairs, `f, g, …` for functions,
/// `x, y, …` otherwise; never shadows a name already in scope.
fn binder_name(ty: &Ty, ctx: &Ctx) -> String {
    let pool: &[&str] = match ty {
        Ty::Prod(..) => &["p", "q", "r", "s"],
        Ty::Arrow(..) => &["f", "g", "h", "k"],
        Ty::Atom(_) => &["x", "y", "z", "w", "u", "v"],
    };
    let taken: BTreeSet<&str> = ctx.iter().map(|(n, _)| n.as_str()).collect();
    pool.iter()
        .map(|s| s.to_string())
        .chain((1..).map(|i| format!("{}{i}", pool[0])))
        .find(|n| !taken.contains(n.as_str()))
        .expect("unbounded")
}

/// Every β-normal term of type `goal` under `ctx` with tree depth at most
/// `depth`, found by goal-directed search: introduction forms for arrow and
/// product goals, plus elimination spines headed by hypotheses.
///
/// Results are distinct up to α-equivalence and ordered by number of λs,
/// then printed length, then text; the first one is the canonical choice
/// when a single witness is wanted.
pub fn infer_inhabitants(ctx: &[(String, Ty)], goal: &Ty, depth: usize) -> Vec<Tm> {
    let ctx: Ctx = dedup_scope(ctx);
    let mut search = Search::default();
    let found = search.gen(&ctx, goal, depth);
    let mut seen = BTreeSet::new();
    let mut out: Vec<Tm> = found
        .iter()
        .filter(|t| seen.insert(t.canonical()))
        .cloned()
        .collect();
    out.sort_by_cached_key(|t| {
        let s = t.to_string();
        (t.lambda_count(), s.chars().count(), s)
    });
    out
}

/// Keeps the last binding of each name, in order of that binding.
fn dedup_scope(ctx: &[(String, Ty)]) -> Ctx {
    let mut out: Ctx = Vec::new();
    for (n, t) in ctx {
        out.retain(|(m, _)| m != n);
        out.push((n.clone(), t.clone()));
    }
    out
}

/// Reads a type as a proposition: atoms become letters `P, Q, R, …` in order
/// of first appearance (hypotheses first), `→` stays, `×` becomes `∧`.
pub fn curry_howard_translate(goal: &Ty, ctx: &[(String, Ty)]) -> String {
    let mut letters = BTreeMap::new();
    for (_, t) in ctx {
        assign_letters(t, &mut letters);
    }
    assign_letters(goal, &mut letters);
    let main = prop_top(goal, &letters);
    if ctx.is_empty() {
        main
    } else {
        let hyps: Vec<String> = ctx.iter().map(|(_, t)| prop_nested(t, &letters)).collect();
        format!("{main} from {}", hyps.join(", "))
    }
}

fn assign_letters(t: &Ty, letters: &mut BTreeMap<String, String>) {
    match t {
        Ty::Atom(a) => {
            if !letters.contains_key(a) {
                let n = letters.len();
                const ALPHA: [&str; 11] = ["P", "Q", "R", "S", "T", "U", "V", "W", "X", "Y", "Z"];
                let name = if n < ALPHA.len() {
                    ALPHA[n].to_string()
                } else {
                    format!("{}{}", ALPHA[n % ALPHA.len()], n / ALPHA.len())
                };
                letters.insert(a.clone(), name);
            }
        }
        Ty::Arrow(a, b) | Ty::Prod(a, b) => {
            assign_letters(a, letters);
            assign_letters(b, letters);
        }
    }
}

fn prop_top(t: &Ty, letters: &BTreeMap<String, String>) -> String {
    match t {
        Ty::Arrow(a, b) => {
            let l = prop_nested(a, letters);
            let l = if matches!(**a, Ty::Arrow(..)) {
                format!("({l})")
            } else {
                l
            };
            format!("{l} → {}", prop_top(b, letters))
        }
        _ => prop_nested(t, letters),
    }
}

fn prop_nested(t: &Ty, letters: &BTreeMap<String, String>) -> String {
    match t {
        Ty::Atom(a) => letters[a].clone(),
        Ty::Arrow(a, b) => {
            let l = prop_nested(a, letters);
            let l = if matches!(**a, Ty::Arrow(..)) {
                format!("({l})")
            } else {
                l
            };
            format!("{l}→{}", prop_nested(b, letters))
        }
        Ty::Prod(a, b) => {
            let wrap = |x: &Ty, right: bool| {
                let s = prop_nested(x, letters);
                match x {
                    Ty::Arrow(..) => format!("({s})"),
                    Ty::Prod(..) if right => format!("({s})"),
                    _ => s,
                }
            };
            format!("{}∧{}", wrap(a, false), wrap(b, true))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_type;

    fn ty(s: &str) -> Ty {
        parse_type(s).unwrap()
    }

    #[test]
    fn identity_is_the_only_small_inhabitant() {
        let r = infer_inhabitants(&[], &ty("A -> A"), 3);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].pretty(), "λx.x");
        assert!(infer_inhabitants(&[], &ty("A -> B"), 6).is_empty());
    }

    #[test]
    fn functorial_action_on_products() {
        let ctx = vec![("f".to_string(), ty("A' -> A"))];
        let r = infer_inhabitants(&ctx, &ty("A' * B -> A * B"), 6);
        assert!(r.iter().any(|t| t.pretty() == "λp.(f(π p), π′ p)"), "{r:?}");
        for t in &r {
            assert_eq!(
                type_of(&ctx, &Signature::default(), t).unwrap(),
                ty("A' * B -> A * B")
            );
            assert!(is_normal(t));
        }
    }

    #[test]
    fn not_only_eta_long() {
        let ctx = vec![("f".to_string(), ty("A -> A"))];
        let r: Vec<String> = infer_inhabitants(&ctx, &ty("A -> A"), 3)
            .iter()
            .map(Tm::to_string)
            .collect();
        assert_eq!(r, ["f", "\\x:A. x", "\\x:A. f x"]);
    }

    #[test]
    fn propositions() {
        let ctx = vec![("f".to_string(), ty("A' -> A"))];
        assert_eq!(
            curry_howard_translate(&ty("A'*B -> A*B"), &ctx),
            "P∧R → Q∧R from P→Q"
        );
        assert_eq!(curry_howard_translate(&ty("A"), &[]), "P");
        assert_eq!(
            curry_howard_translate(&ty("(A -> B) * A -> B"), &[]),
            "(P→Q)∧P → Q"
        );
        assert_eq!(
            curry_howard_translate(&ty("(A -> B) -> A -> B"), &[]),
            "(P→Q) → P → Q"
        );
    }

    #[test]
    fn typing_errors() {
        let sig = Signature::default();
        let t = Tm::app(Tm::var("x"), Tm::var("x"));
        assert!(type_of(&[("x".into(), ty("A"))], &sig, &t).is_err());
        assert!(type_of(&[], &sig, &Tm::var("y")).is_err());
    }
}
