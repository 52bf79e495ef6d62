//! Reference enumerator for inhabitation: builds every well-typed term
//! bottom-up by depth and filters, sharing no code with the goal-directed
//! search beyond the type representation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::Ty;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Lam,
    Pair,
    Other,
}

#[derive(Debug, Clone)]
struct Cand {
    /// Same name-free notation as `Tm::canonical`.
    key: String,
    ty: Ty,
    shape: Shape,
}

struct Enumerator<'a> {
    free: &'a [(String, Ty)],
    /// Subterm types allowed by the subformula property of normal terms.
    allowed: BTreeSet<Ty>,
    memo: HashMap<(Vec<Ty>, usize), Arc<Vec<Cand>>>,
}

impl Enumerator<'_> {
    fn level(&mut self, bound: &[Ty], d: usize) -> Arc<Vec<Cand>> {
        if d == 0 {
            return Arc::new(Vec::new());
        }
        let key = (bound.to_vec(), d);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut out: BTreeMap<String, Cand> = BTreeMap::new();
        let mut add = |c: Cand, allowed: &BTreeSet<Ty>| {
            if allowed.contains(&c.ty) {
                out.entry(c.key.clone()).or_insert(c);
            }
        };
        for (k, ty) in bound.iter().rev().enumerate() {
            add(
                Cand {
                    key: format!("#{k}"),
                    ty: ty.clone(),
                    shape: Shape::Other,
                },
                &self.allowed,
            );
        }
        for (name, ty) in self.free {
            add(
                Cand {
                    key: name.clone(),
                    ty: ty.clone(),
                    shape: Shape::Other,
                },
                &self.allowed,
            );
        }
        if d > 1 {
            let below = self.level(bound, d - 1);
            for a in below.iter() {
                if let (Ty::Prod(l, r), false) = (&a.ty, a.shape == Shape::Pair) {
                    add(
                        Cand {
                            key: format!("(p1 {})", a.key),
                            ty: (**l).clone(),
                            shape: Shape::Other,
                        },
                        &self.allowed,
                    );
                    add(
                        Cand {
                            key: format!("(p2 {})", a.key),
                            ty: (**r).clone(),
                            shape: Shape::Other,
                        },
                        &self.allowed,
                    );
                }
                for b in below.iter() {
                    let pair_ty = Ty::prod(a.ty.clone(), b.ty.clone());
                    add(
                        Cand {
                            key: format!("<{}, {}>", a.key, b.key),
                            ty: pair_ty,
                            shape: Shape::Pair,
                        },
                        &self.allowed,
                    );
                    if let Ty::Arrow(x, y) = &a.ty {
                        if **x == b.ty && a.shape != Shape::Lam {
                            add(
                                Cand {
                                    key: format!("({} {})", a.key, b.key),
                                    ty: (**y).clone(),
                                    shape: Shape::Other,
                                },
                                &self.allowed,
                            );
                        }
                    }
                }
            }
            let binder_types: Vec<Ty> = self.allowed.iter().cloned().collect();
            for a in binder_types {
                let mut inner = bound.to_vec();
                inner.push(a.clone());
                for body in self.level(&inner, d - 1).iter() {
                    let ty = Ty::arrow(a.clone(), body.ty.clone());
                    add(
                        Cand {
                            key: format!("(λ:{a}. {})", body.key),
                            ty,
                            shape: Shape::Lam,
                        },
                        &self.allowed,
                    );
                }
            }
        }
        let res = Arc::new(out.into_values().collect::<Vec<_>>());
        self.memo.insert(key, res.clone());
        res
    }
}

/// Canonical (name-free) forms of all β-normal terms of type `goal` under
/// `ctx` with depth at most `depth`, sorted.
pub fn brute_force_inhabitants(ctx: &[(String, Ty)], goal: &Ty, depth: usize) -> Vec<String> {
    let mut free: Vec<(String, Ty)> = Vec::new();
    for (n, t) in ctx {
        free.retain(|(m, _)| m != n);
        free.push((n.clone(), t.clone()));
    }
    let mut allowed = BTreeSet::new();
    goal.subformulas(&mut allowed);
    for (_, t) in &free {
        t.subformulas(&mut allowed);
    }
    let mut e = Enumerator {
        free: &free,
        allowed,
        memo: HashMap::new(),
    };
    let all = e.level(&[], depth);
    let mut keys: Vec<String> = all
        .iter()
        .filter(|c| &c.ty == goal)
        .map(|c| c.key.clone())
        .collect();
    keys.sort();
    keys
}
