use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::functor::{FunctorMap, OBL_TYPING};
use super::{Functor, SetFunctor};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Witness};

pub const OBL_SQCOND: &str = "sqcond";

/// A family of components `α_X : F X → G X`, one per source object.
///
/// Equality and order only look at the components: values are meant to be
/// compared within a single hom-set `Nat(F, G)`.
#[derive(Debug, Clone)]
pub struct Nat<F: FunctorMap> {
    source: Arc<F>,
    target: Arc<F>,
    components: BTreeMap<String, F::Mor>,
}

pub type NatTrans = Nat<Functor>;
pub type SetNatTrans = Nat<SetFunctor>;

impl<F: FunctorMap> Nat<F> {
    pub fn new(
        source: Arc<F>,
        target: Arc<F>,
        components: BTreeMap<String, F::Mor>,
    ) -> Result<Self> {
        if source.source() != target.source() {
            return Err(Error::Mismatch(
                "functors have different source categories".into(),
            ));
        }
        if let Some(x) = source
            .source()
            .objects()
            .find(|x| !components.contains_key(*x))
        {
            return Err(Error::MalformedMap(format!("no component given at {x}")));
        }
        if let Some(x) = components.keys().find(|x| !source.source().has_object(x)) {
            return Err(Error::MalformedMap(format!(
                "component given at unknown object {x}"
            )));
        }
        Ok(Nat {
            source,
            target,
            components,
        })
    }

    pub fn identity(f: Arc<F>) -> Self {
        let components = f
            .source()
            .objects()
            .map(|x| {
                let fx = f.on_object(x).expect("total");
                (x.clone(), f.target_identity(fx).expect("identity exists"))
            })
            .collect();
        Nat {
            source: f.clone(),
            target: f,
            components,
        }
    }

    pub fn source_functor(&self) -> &Arc<F> {
        &self.source
    }

    pub fn target_functor(&self) -> &Arc<F> {
        &self.target
    }

    pub fn component(&self, x: &str) -> &F::Mor {
        &self.components[x]
    }

    pub fn components(&self) -> &BTreeMap<String, F::Mor> {
        &self.components
    }

    pub fn with_component(&self, x: &str, value: F::Mor) -> Result<Self> {
        let mut components = self.components.clone();
        components.insert(x.to_string(), value);
        Nat::new(self.source.clone(), self.target.clone(), components)
    }

    /// `next ∘ self`, componentwise.
    pub fn then(&self, next: &Nat<F>) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|(x, a)| {
                self.source
                    .target_compose(&next.components[x], a)
                    .map(|c| (x.clone(), c))
                    .ok_or_else(|| Error::Mismatch(format!("components at {x} do not compose")))
            })
            .collect::<Result<_>>()?;
        Ok(Nat {
            source: self.source.clone(),
            target: next.target.clone(),
            components,
        })
    }
}

impl<F: FunctorMap> PartialEq for Nat<F> {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl<F: FunctorMap> Eq for Nat<F> {}

impl<F: FunctorMap> PartialOrd for Nat<F>
where
    F::Mor: Ord,
{
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: FunctorMap> Ord for Nat<F>
where
    F::Mor: Ord,
{
    fn cmp(&self, other: &Self) -> Ordering {
        self.components.cmp(&other.components)
    }
}

impl<F: FunctorMap> fmt::Display for Nat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(x, a)| format!("{x}: {a}"))
            .collect();
        write!(f, "<{}>", parts.join("; "))
    }
}

/// Component typing and the naturality square for every source morphism.
pub fn validate_nattrans<F: FunctorMap>(alpha: &Nat<F>) -> CheckReport {
    let (fun_f, fun_g) = (&*alpha.source, &*alpha.target);
    let src = fun_f.source();
    let mut report = CheckReport::new("natural transformation");

    let mut typing = report.check(OBL_TYPING);
    for x in src.objects() {
        let a = &alpha.components[x];
        let want = (fun_f.on_object(x).cloned(), fun_g.on_object(x).cloned());
        let ok = matches!((fun_f.target_ends(a), want), (Some((d, c)), (Some(wd), Some(wc))) if d == wd && c == wc);
        typing.instance(ok, || {
            Witness::new(
                [x.as_str()],
                format!("component {a} does not go F({x}) -> G({x})"),
            )
        });
    }
    let typed = !typing.failed();

    let mut sq = report.check(OBL_SQCOND);
    if typed {
        for (m, arr) in src.morphisms() {
            let lhs = fun_f.target_compose(
                fun_g.on_morphism(m).expect("total"),
                &alpha.components[&arr.dom],
            );
            let rhs = fun_f.target_compose(
                &alpha.components[&arr.cod],
                fun_f.on_morphism(m).expect("total"),
            );
            sq.instance(lhs.is_some() && lhs == rhs, || {
                let show = |v: &Option<F::Mor>| {
                    v.as_ref()
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "undefined".into())
                };
                Witness::new(
                    [m.as_str()],
                    format!(
                        "G({m}) . α_{} = {} but α_{} . F({m}) = {}",
                        arr.dom,
                        show(&lhs),
                        arr.cod,
                        show(&rhs)
                    ),
                )
            });
        }
    }
    report
}
