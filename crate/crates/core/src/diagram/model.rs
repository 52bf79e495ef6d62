//! Interpretations of diagram layers and functors, read from `.model` files:
//!
//! ```text
//! layer LA = cat monoid.fincat
//! layer LS = finset {a,b} ; {c}
//! functor R = r.fun
//! bind A = *
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::cat::{FinCat, FunctorVal};
use crate::config::EnumConfig;
use crate::error::{Error, Result};
use crate::finset::{enumerate_maps, parse_map, parse_set, split_top_level, FinSetMap, FinSetObj};
use crate::formats::{load_fincat, load_functor, parent, read, resolve};

/// What a layer is interpreted as.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerCat {
    Table(Arc<FinCat>),
    /// Finite sets; quantified nodes range over `carriers`.
    FinSet {
        carriers: Option<Vec<FinSetObj>>,
    },
}

/// The value of a node or arrow under an assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Val {
    Obj(String),
    Mor(String),
    Set(FinSetObj),
    Map(FinSetMap),
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Obj(s) | Val::Mor(s) => f.write_str(s),
            Val::Set(s) => write!(f, "{s}"),
            Val::Map(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    pub layers: BTreeMap<String, LayerCat>,
    pub functors: BTreeMap<String, FunctorVal>,
    /// Raw values for unquantified elements, read against their layer when
    /// a diagram is evaluated.
    pub bindings: BTreeMap<String, String>,
}

impl Model {
    pub fn parse(text: &str, base: &Path) -> Result<Model> {
        let mut m = Model::default();
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, value) = line.split_once('=').ok_or_else(|| {
                Error::parse(n, 1, format!("expected `kind id = value`, got `{line}`"))
            })?;
            let value = value.trim();
            let mut words = head.split_whitespace();
            let (Some(kind), Some(id), None) = (words.next(), words.next(), words.next()) else {
                return Err(Error::parse(
                    n,
                    1,
                    format!("expected `kind id = value`, got `{line}`"),
                ));
            };
            let at = |e: Error| match e {
                Error::Io { .. } | Error::Parse { .. } => e,
                other => Error::parse(n, 1, other.to_string()),
            };
            let fresh = match kind {
                "layer" => {
                    let cat = if let Some(path) = value.strip_prefix("cat ") {
                        LayerCat::Table(Arc::new(
                            load_fincat(&resolve(base, path.trim())).map_err(at)?,
                        ))
                    } else if let Some(rest) = value.strip_prefix("finset") {
                        let rest = rest.trim();
                        let carriers = if rest.is_empty() {
                            None
                        } else {
                            let sets: Result<Vec<_>> = split_top_level(rest, ";")
                                .into_iter()
                                .map(|s| parse_set(s.trim()))
                                .collect();
                            Some(sets.map_err(at)?)
                        };
                        LayerCat::FinSet { carriers }
                    } else {
                        return Err(Error::parse(
                            n,
                            1,
                            format!("layer value must be `cat <path>` or `finset`, got `{value}`"),
                        ));
                    };
                    m.layers.insert(id.to_string(), cat).is_none()
                }
                "functor" => {
                    let f = load_functor(&resolve(base, value)).map_err(at)?;
                    m.functors.insert(id.to_string(), f).is_none()
                }
                "bind" => m
                    .bindings
                    .insert(id.to_string(), value.to_string())
                    .is_none(),
                other => return Err(Error::parse(n, 1, format!("unknown model entry `{other}`"))),
            };
            if !fresh {
                return Err(Error::parse(n, 1, format!("{kind} {id} given twice")));
            }
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Model> {
        Model::parse(&read(path)?, parent(path))
    }

    pub fn layer(&self, id: &str) -> Result<&LayerCat> {
        self.layers
            .get(id)
            .ok_or_else(|| Error::Model(format!("layer {id} has no interpretation")))
    }

    pub fn functor(&self, id: &str) -> Result<&FunctorVal> {
        self.functors
            .get(id)
            .ok_or_else(|| Error::Model(format!("functor {id} has no interpretation")))
    }

    /// Objects a quantified node ranges over, in sorted order.
    pub fn objects(&self, layer: &str) -> Result<Vec<Val>> {
        match self.layer(layer)? {
            LayerCat::Table(c) => Ok(c.objects().map(|x| Val::Obj(x.clone())).collect()),
            LayerCat::FinSet { carriers: Some(cs) } => {
                Ok(cs.iter().cloned().map(Val::Set).collect())
            }
            LayerCat::FinSet { carriers: None } => Err(Error::Model(format!(
                "layer {layer} is finset without listed carriers to quantify over"
            ))),
        }
    }

    /// Morphisms `src → dst` a quantified arrow ranges over: the identity
    /// first when there is one, then the rest in sorted order.
    pub fn arrows(&self, layer: &str, src: &Val, dst: &Val, cfg: &EnumConfig) -> Result<Vec<Val>> {
        match (self.layer(layer)?, src, dst) {
            (LayerCat::Table(c), Val::Obj(a), Val::Obj(b)) => {
                let mut hom: Vec<&String> = c.hom(a, b).iter().collect();
                hom.sort_by_key(|m| !c.is_identity(m));
                Ok(hom.into_iter().map(|m| Val::Mor(m.clone())).collect())
            }
            (LayerCat::FinSet { .. }, Val::Set(x), Val::Set(y)) => {
                let mut maps = enumerate_maps(x, y, cfg)?;
                if x == y {
                    let id = FinSetMap::identity(x);
                    maps.retain(|m| *m != id);
                    maps.insert(0, id);
                }
                Ok(maps.into_iter().map(Val::Map).collect())
            }
            _ => Err(Error::Model(format!(
                "{src} and {dst} are not objects of layer {layer}"
            ))),
        }
    }

    pub fn is_object(&self, layer: &str, v: &Val) -> Result<bool> {
        Ok(match (self.layer(layer)?, v) {
            (LayerCat::Table(c), Val::Obj(x)) => c.has_object(x),
            (LayerCat::FinSet { .. }, Val::Set(_)) => true,
            _ => false,
        })
    }

    /// Domain and codomain of a morphism value, if it is one in `layer`.
    pub fn ends(&self, layer: &str, v: &Val) -> Result<Option<(Val, Val)>> {
        Ok(match (self.layer(layer)?, v) {
            (LayerCat::Table(c), Val::Mor(m)) => c
                .arrow(m)
                .map(|a| (Val::Obj(a.dom.clone()), Val::Obj(a.cod.clone()))),
            (LayerCat::FinSet { .. }, Val::Map(f)) => {
                Some((Val::Set(f.dom().clone()), Val::Set(f.cod().clone())))
            }
            _ => None,
        })
    }

    pub fn identity(&self, layer: &str, x: &Val) -> Result<Val> {
        match (self.layer(layer)?, x) {
            (LayerCat::Table(c), Val::Obj(a)) => c
                .identity(a)
                .map(|m| Val::Mor(m.to_string()))
                .ok_or_else(|| Error::Model(format!("{a} is not an object of layer {layer}"))),
            (LayerCat::FinSet { .. }, Val::Set(s)) => Ok(Val::Map(FinSetMap::identity(s))),
            _ => Err(Error::Model(format!(
                "{x} is not an object of layer {layer}"
            ))),
        }
    }

    /// `g ∘ f`.
    pub fn compose(&self, layer: &str, g: &Val, f: &Val) -> Result<Val> {
        let fail = || Error::Model(format!("cannot compose {g} after {f} in layer {layer}"));
        match (self.layer(layer)?, g, f) {
            (LayerCat::Table(c), Val::Mor(g), Val::Mor(f)) => c
                .compose(g, f)
                .map(|h| Val::Mor(h.to_string()))
                .ok_or_else(fail),
            (LayerCat::FinSet { .. }, Val::Map(g), Val::Map(f)) => {
                g.after(f).map(Val::Map).map_err(|_| fail())
            }
            _ => Err(fail()),
        }
    }

    /// The two-sided inverse of `m`, if it is an isomorphism.
    pub fn inverse(&self, layer: &str, m: &Val) -> Result<Option<Val>> {
        let Some((a, b)) = self.ends(layer, m)? else {
            return Ok(None);
        };
        match (self.layer(layer)?, m) {
            (LayerCat::Table(c), Val::Mor(m)) => {
                let (Val::Obj(a), Val::Obj(b)) = (&a, &b) else {
                    unreachable!("table ends are objects")
                };
                let inv = c.hom(b, a).iter().find(|n| {
                    c.compose(n, m).is_some_and(|x| c.is_identity(x))
                        && c.compose(m, n).is_some_and(|x| c.is_identity(x))
                });
                Ok(inv.map(|n| Val::Mor(n.clone())))
            }
            (LayerCat::FinSet { .. }, Val::Map(f)) if f.is_bijection() => {
                let table = f
                    .table()
                    .iter()
                    .map(|(x, y)| (y.clone(), x.clone()))
                    .collect();
                Ok(Some(Val::Map(FinSetMap::new(
                    f.cod().clone(),
                    f.dom().clone(),
                    table,
                )?)))
            }
            _ => Ok(None),
        }
    }

    /// The image of `v` under the functor interpreting `functor`.
    pub fn apply(&self, functor: &str, v: &Val) -> Result<Val> {
        let fail = || Error::Model(format!("functor {functor} is not defined on {v}"));
        match (self.functor(functor)?, v) {
            (FunctorVal::Table(f), Val::Obj(x)) if f.source_cat().has_object(x) => {
                Ok(Val::Obj(f.ob(x).to_string()))
            }
            (FunctorVal::Table(f), Val::Mor(m)) if f.source_cat().has_morphism(m) => {
                Ok(Val::Mor(f.mor(m).to_string()))
            }
            (FunctorVal::Set(f), Val::Obj(x)) if f.source_cat().has_object(x) => {
                Ok(Val::Set(f.ob(x).clone()))
            }
            (FunctorVal::Set(f), Val::Mor(m)) if f.source_cat().has_morphism(m) => {
                Ok(Val::Map(f.mor(m).clone()))
            }
            _ => Err(fail()),
        }
    }

    /// Reads a bound value: an object (or set literal) for a node, a
    /// morphism (or map literal between `ends`) for an arrow.
    pub fn read_value(&self, layer: &str, text: &str, ends: Option<(&Val, &Val)>) -> Result<Val> {
        let bad = |what: &str| Error::Model(format!("`{text}` is not {what} of layer {layer}"));
        match (self.layer(layer)?, ends) {
            (LayerCat::Table(c), None) => {
                if c.has_object(text) {
                    Ok(Val::Obj(text.to_string()))
                } else {
                    Err(bad("an object"))
                }
            }
            (LayerCat::Table(c), Some(_)) => {
                if c.has_morphism(text) {
                    Ok(Val::Mor(text.to_string()))
                } else {
                    Err(bad("a morphism"))
                }
            }
            (LayerCat::FinSet { .. }, None) => parse_set(text).map(Val::Set),
            (LayerCat::FinSet { .. }, Some((Val::Set(x), Val::Set(y)))) => {
                parse_map(text, x, y).map(Val::Map)
            }
            (LayerCat::FinSet { .. }, Some(_)) => Err(bad("a map")),
        }
    }
}
