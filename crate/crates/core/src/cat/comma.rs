use std::collections::BTreeMap;
use std::sync::Arc;

use super::{FinCat, Functor, SetFunctor};
use crate::config::EnumConfig;
use crate::error::{Error, Result};
use crate::finset::{enumerate_maps, FinSetObj};

/// Which side the fixed object sits on in `comma_under_object`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `(B ↓ f)`: objects `(A, ϕ : B → fA)`.
    Under,
    /// `(f ↓ B)`: objects `(A, ϕ : fA → B)`.
    Over,
}

/// A comma category together with its forgetful functor.
#[derive(Debug, Clone)]
pub struct CommaCat {
    pub cat: Arc<FinCat>,
    /// Projection to the underlying category.
    pub forget: Functor,
    base: BTreeMap<String, String>,
    tag: BTreeMap<String, String>,
}

impl CommaCat {
    pub fn object_id(base: &str, tag: &str) -> String {
        format!("({base},{tag})")
    }

    fn morphism_id(u: &str, src: (&str, &str), dst: (&str, &str)) -> String {
        format!("({u} | {},{} → {},{})", src.0, src.1, dst.0, dst.1)
    }

    /// Underlying object of a comma object.
    pub fn base(&self, id: &str) -> &str {
        &self.base[id]
    }

    /// The arrow (or map encoding) carried by a comma object.
    pub fn tag(&self, id: &str) -> &str {
        &self.tag[id]
    }

    /// Looks up the comma object over `base` carrying `tag`.
    pub fn find(&self, base: &str, tag: &str) -> Option<String> {
        let id = Self::object_id(base, tag);
        self.base.contains_key(&id).then_some(id)
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// Assembles the table from `(base, tag)` objects and a test deciding
    /// which underlying morphisms form commuting triangles.
    fn build(
        source: &Arc<FinCat>,
        objects: Vec<(String, String)>,
        commutes: impl Fn(&str, &str, &str) -> bool,
    ) -> Result<CommaCat> {
        let mut base = BTreeMap::new();
        let mut tag = BTreeMap::new();
        for (b, t) in &objects {
            let id = Self::object_id(b, t);
            base.insert(id.clone(), b.clone());
            tag.insert(id, t.clone());
        }

        // morphism id -> (underlying morphism, src id, dst id)
        let mut mors: BTreeMap<String, (String, String, String)> = BTreeMap::new();
        for (b1, t1) in &objects {
            for (b2, t2) in &objects {
                for u in source.hom(b1, b2) {
                    if commutes(u, t1, t2) {
                        let id = Self::morphism_id(u, (b1, t1), (b2, t2));
                        mors.insert(
                            id,
                            (u.clone(), Self::object_id(b1, t1), Self::object_id(b2, t2)),
                        );
                    }
                }
            }
        }

        let mut by_ends: BTreeMap<(&str, &str, &str), &str> = BTreeMap::new();
        for (id, (u, s, d)) in &mors {
            by_ends.insert((u.as_str(), s.as_str(), d.as_str()), id.as_str());
        }
        let mut identity = BTreeMap::new();
        for (id, b) in &base {
            let idb = source.identity(b).expect("source identity");
            let m = by_ends
                .get(&(idb, id.as_str(), id.as_str()))
                .ok_or_else(|| Error::Malformed(format!("identity triangle fails at {id}")))?;
            identity.insert(id.clone(), m.to_string());
        }
        let mut compose = BTreeMap::new();
        for (gid, (g, gs, gd)) in &mors {
            for (fid, (f, fs, fd)) in &mors {
                if fd != gs {
                    continue;
                }
                let h = source.compose(g, f).expect("source composition total");
                let hid = by_ends.get(&(h, fs.as_str(), gd.as_str())).ok_or_else(|| {
                    Error::Malformed(format!("composite {g} . {f} leaves the comma category"))
                })?;
                compose.insert((gid.clone(), fid.clone()), hid.to_string());
            }
        }

        let morphism_list: Vec<(String, String, String)> = mors
            .iter()
            .map(|(id, (_, s, d))| (id.clone(), s.clone(), d.clone()))
            .collect();
        let cat = Arc::new(FinCat::new(
            base.keys().cloned(),
            morphism_list,
            identity,
            compose,
        )?);
        let forget_objects = base.clone();
        let forget_morphisms = mors
            .iter()
            .map(|(id, (u, _, _))| (id.clone(), u.clone()))
            .collect();
        let forget = Functor::new(
            cat.clone(),
            source.clone(),
            forget_objects,
            forget_morphisms,
        )?;
        Ok(CommaCat {
            cat,
            forget,
            base,
            tag,
        })
    }
}

/// `(A ↓ R)` for a finite set `A` and a set-valued `R`: objects are pairs
/// `(C, η : A → R C)`, morphisms are the `f : C → D` with `R f ∘ η = g`.
pub fn comma_object_over_functor(
    a: &FinSetObj,
    r: &SetFunctor,
    cfg: &EnumConfig,
) -> Result<CommaCat> {
    let source = r.source_cat();
    let mut objects = Vec::new();
    let mut maps = BTreeMap::new();
    for c in source.objects() {
        for eta in enumerate_maps(a, r.ob(c), cfg)? {
            let t = eta.encode().to_string();
            maps.insert((c.clone(), t.clone()), eta);
            objects.push((c.clone(), t));
        }
    }
    let dom_of = |t: &str| maps.iter().find(|((_, tt), _)| tt == t).map(|(_, m)| m);
    CommaCat::build(source, objects.clone(), |f, t1, t2| {
        let (Some(eta), Some(g)) = (dom_of(t1), dom_of(t2)) else {
            return false;
        };
        r.mor(f).after(eta).map(|c| &c == g).unwrap_or(false)
    })
}

/// `(B ↓ f)` or `(f ↓ B)` for a functor between table categories, with the
/// forgetful functor to the source of `f`.
pub fn comma_under_object(b: &str, f: &Functor, orientation: Orientation) -> Result<CommaCat> {
    let target = f.target_cat();
    if !target.has_object(b) {
        return Err(Error::NotInSource(format!("{b} (target of the functor)")));
    }
    let source = f.source_cat();
    let mut objects = Vec::new();
    for a in source.objects() {
        let fa = f.ob(a);
        let arrows = match orientation {
            Orientation::Under => target.hom(b, fa),
            Orientation::Over => target.hom(fa, b),
        };
        objects.extend(arrows.iter().map(|phi| (a.clone(), phi.clone())));
    }
    CommaCat::build(source, objects, |u, phi, phi2| {
        let fu = f.mor(u);
        match orientation {
            Orientation::Under => target.compose(fu, phi) == Some(phi2),
            Orientation::Over => target.compose(phi2, fu) == Some(phi),
        }
    })
}
