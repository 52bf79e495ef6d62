use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::FinCat;
use crate::error::{Error, Result};
use crate::finset::{FinSetMap, FinSetObj};
use crate::report::{CheckReport, Witness};

pub const OBL_TYPING: &str = "typing";
pub const OBL_RESPIDS: &str = "respids";
pub const OBL_RESPCOMP: &str = "respcomp";

/// Either a table category or the (large) category of finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatRef {
    Table(Arc<FinCat>),
    FinSet,
}

/// Object and morphism actions of a functor out of a table category, plus
/// the target-side operations needed to state its laws.
pub trait FunctorMap {
    type Obj: Clone + PartialEq + fmt::Debug + fmt::Display;
    type Mor: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn source(&self) -> &FinCat;
    fn on_object(&self, x: &str) -> Option<&Self::Obj>;
    fn on_morphism(&self, m: &str) -> Option<&Self::Mor>;
    fn target_ends(&self, m: &Self::Mor) -> Option<(Self::Obj, Self::Obj)>;
    fn target_identity(&self, x: &Self::Obj) -> Option<Self::Mor>;
    fn target_compose(&self, g: &Self::Mor, f: &Self::Mor) -> Option<Self::Mor>;
}

/// A functor between table categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    objects: BTreeMap<String, String>,
    morphisms: BTreeMap<String, String>,
}

impl Functor {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: BTreeMap<String, String>,
        morphisms: BTreeMap<String, String>,
    ) -> Result<Functor> {
        check_total(&source, objects.keys(), morphisms.keys())?;
        if let Some((x, y)) = objects.iter().find(|(_, y)| !target.has_object(y)) {
            return Err(Error::MalformedMap(format!(
                "object {x} goes to {y}, not an object of the target"
            )));
        }
        if let Some((m, n)) = morphisms.iter().find(|(_, n)| !target.has_morphism(n)) {
            return Err(Error::MalformedMap(format!(
                "morphism {m} goes to {n}, not a morphism of the target"
            )));
        }
        Ok(Functor {
            source,
            target,
            objects,
            morphisms,
        })
    }

    /// Object map only; identities go to identities and every other
    /// morphism must be listed.
    pub fn with_implicit_identities(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: BTreeMap<String, String>,
        mut morphisms: BTreeMap<String, String>,
    ) -> Result<Functor> {
        for (x, id) in source.identities() {
            if morphisms.contains_key(id) {
                continue;
            }
            let Some(fx) = objects.get(x) else { continue };
            let Some(fid) = target.identity(fx) else {
                continue;
            };
            morphisms.insert(id.clone(), fid.to_string());
        }
        Functor::new(source, target, objects, morphisms)
    }

    pub fn identity(c: Arc<FinCat>) -> Functor {
        let objects = c.objects().map(|x| (x.clone(), x.clone())).collect();
        let morphisms = c.morphism_names().map(|m| (m.clone(), m.clone())).collect();
        Functor {
            source: c.clone(),
            target: c,
            objects,
            morphisms,
        }
    }

    /// The inclusion of a full subcategory, or any object-injective inclusion
    /// whose morphism names agree with the ambient category.
    pub fn inclusion(sub: Arc<FinCat>, ambient: Arc<FinCat>) -> Result<Functor> {
        let objects = sub.objects().map(|x| (x.clone(), x.clone())).collect();
        let morphisms = sub
            .morphism_names()
            .map(|m| (m.clone(), m.clone()))
            .collect();
        Functor::new(sub, ambient, objects, morphisms)
    }

    pub fn source_cat(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target_cat(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn ob(&self, x: &str) -> &str {
        &self.objects[x]
    }

    pub fn mor(&self, m: &str) -> &str {
        &self.morphisms[m]
    }

    pub fn object_map(&self) -> &BTreeMap<String, String> {
        &self.objects
    }

    pub fn morphism_map(&self) -> &BTreeMap<String, String> {
        &self.morphisms
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Functor) -> Result<Functor> {
        if !same_cat(&self.target, &next.source) {
            return Err(Error::Mismatch(
                "target of the first functor is not the source of the second".into(),
            ));
        }
        let objects = self
            .objects
            .iter()
            .map(|(x, y)| (x.clone(), next.ob(y).to_string()))
            .collect();
        let morphisms = self
            .morphisms
            .iter()
            .map(|(m, n)| (m.clone(), next.mor(n).to_string()))
            .collect();
        Ok(Functor {
            source: self.source.clone(),
            target: next.target.clone(),
            objects,
            morphisms,
        })
    }

    /// The same maps read between opposite categories.
    pub fn opposite(&self) -> Functor {
        Functor {
            source: Arc::new(super::opposite(&self.source)),
            target: Arc::new(super::opposite(&self.target)),
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
        }
    }

    /// Reuses already-built opposite categories so that table equality
    /// between results is cheap to establish.
    pub fn opposite_between(&self, source_op: Arc<FinCat>, target_op: Arc<FinCat>) -> Functor {
        Functor {
            source: source_op,
            target: target_op,
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
        }
    }

    pub fn with_morphism(&self, m: &str, value: &str) -> Result<Functor> {
        let mut morphisms = self.morphisms.clone();
        morphisms.insert(m.to_string(), value.to_string());
        Functor::new(
            self.source.clone(),
            self.target.clone(),
            self.objects.clone(),
            morphisms,
        )
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.objects.values().all(|y| seen.insert(y))
    }

    /// Every `Hom(a, a') → Hom(fa, fa')` is a bijection.
    pub fn full_and_faithful_witness(&self) -> Option<Witness> {
        for a in self.source.objects() {
            for b in self.source.objects() {
                let src = self.source.hom(a, b);
                let tgt = self.target.hom(self.ob(a), self.ob(b));
                let image: std::collections::BTreeSet<&str> =
                    src.iter().map(|m| self.mor(m)).collect();
                if image.len() != src.len() {
                    return Some(Witness::new(
                        [a.as_str(), b.as_str()],
                        "not faithful on this hom-set",
                    ));
                }
                if image.len() != tgt.len() {
                    return Some(Witness::new(
                        [a.as_str(), b.as_str()],
                        format!(
                            "not full: {} of {} target morphisms hit",
                            image.len(),
                            tgt.len()
                        ),
                    ));
                }
            }
        }
        None
    }
}

/// A functor from a table category into finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunctor {
    source: Arc<FinCat>,
    objects: BTreeMap<String, FinSetObj>,
    morphisms: BTreeMap<String, FinSetMap>,
}

impl SetFunctor {
    pub fn new(
        source: Arc<FinCat>,
        objects: BTreeMap<String, FinSetObj>,
        morphisms: BTreeMap<String, FinSetMap>,
    ) -> Result<SetFunctor> {
        check_total(&source, objects.keys(), morphisms.keys())?;
        Ok(SetFunctor {
            source,
            objects,
            morphisms,
        })
    }

    /// Identities go to identity maps unless listed.
    pub fn with_implicit_identities(
        source: Arc<FinCat>,
        objects: BTreeMap<String, FinSetObj>,
        mut morphisms: BTreeMap<String, FinSetMap>,
    ) -> Result<SetFunctor> {
        for (x, id) in source.identities() {
            if let (false, Some(set)) = (morphisms.contains_key(id), objects.get(x)) {
                morphisms.insert(id.clone(), FinSetMap::identity(set));
            }
        }
        SetFunctor::new(source, objects, morphisms)
    }

    /// The functor constant at `set`.
    pub fn constant(source: Arc<FinCat>, set: &FinSetObj) -> SetFunctor {
        let objects = source.objects().map(|x| (x.clone(), set.clone())).collect();
        let morphisms = source
            .morphism_names()
            .map(|m| (m.clone(), FinSetMap::identity(set)))
            .collect();
        SetFunctor {
            source,
            objects,
            morphisms,
        }
    }

    pub fn source_cat(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn ob(&self, x: &str) -> &FinSetObj {
        &self.objects[x]
    }

    pub fn mor(&self, m: &str) -> &FinSetMap {
        &self.morphisms[m]
    }

    pub fn object_map(&self) -> &BTreeMap<String, FinSetObj> {
        &self.objects
    }

    pub fn morphism_map(&self) -> &BTreeMap<String, FinSetMap> {
        &self.morphisms
    }

    /// `self ∘ f`: restriction along a table functor.
    pub fn precompose(&self, f: &Functor) -> Result<SetFunctor> {
        if !same_cat(f.target_cat(), &self.source) {
            return Err(Error::Mismatch(
                "functor lands outside the source of the set-valued functor".into(),
            ));
        }
        let objects = f
            .object_map()
            .iter()
            .map(|(x, y)| (x.clone(), self.ob(y).clone()))
            .collect();
        let morphisms = f
            .morphism_map()
            .iter()
            .map(|(m, n)| (m.clone(), self.mor(n).clone()))
            .collect();
        Ok(SetFunctor {
            source: f.source_cat().clone(),
            objects,
            morphisms,
        })
    }

    pub fn with_morphism(&self, m: &str, value: FinSetMap) -> Result<SetFunctor> {
        let mut morphisms = self.morphisms.clone();
        morphisms.insert(m.to_string(), value);
        SetFunctor::new(self.source.clone(), self.objects.clone(), morphisms)
    }

    pub fn with_object(&self, x: &str, value: FinSetObj) -> Result<SetFunctor> {
        let mut objects = self.objects.clone();
        objects.insert(x.to_string(), value);
        SetFunctor::new(self.source.clone(), objects, self.morphisms.clone())
    }

    /// Total number of elements over all objects.
    pub fn total_size(&self) -> usize {
        self.objects.values().map(FinSetObj::len).sum()
    }
}

impl fmt::Display for SetFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, s) in &self.objects {
            writeln!(f, "  {x} |-> {s}")?;
        }
        for (m, map) in &self.morphisms {
            if !self.source.is_identity(m) {
                writeln!(f, "  {m} |-> {map}")?;
            }
        }
        Ok(())
    }
}

/// A functor value as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorVal {
    Table(Functor),
    Set(SetFunctor),
}

impl FunctorVal {
    pub fn source_cat(&self) -> &Arc<FinCat> {
        match self {
            FunctorVal::Table(f) => f.source_cat(),
            FunctorVal::Set(f) => f.source_cat(),
        }
    }

    pub fn target(&self) -> CatRef {
        match self {
            FunctorVal::Table(f) => CatRef::Table(f.target_cat().clone()),
            FunctorVal::Set(_) => CatRef::FinSet,
        }
    }

    pub fn validate(&self) -> CheckReport {
        match self {
            FunctorVal::Table(f) => validate_functor(f),
            FunctorVal::Set(f) => validate_functor(f),
        }
    }
}

fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn check_total<'a>(
    source: &FinCat,
    objects: impl Iterator<Item = &'a String> + Clone,
    morphisms: impl Iterator<Item = &'a String> + Clone,
) -> Result<()> {
    let objs: std::collections::BTreeSet<&String> = objects.collect();
    let mors: std::collections::BTreeSet<&String> = morphisms.collect();
    if let Some(x) = source.objects().find(|x| !objs.contains(x)) {
        return Err(Error::MalformedMap(format!(
            "no image given for object {x}"
        )));
    }
    if let Some(m) = source.morphism_names().find(|m| !mors.contains(m)) {
        return Err(Error::MalformedMap(format!(
            "no image given for morphism {m}"
        )));
    }
    if let Some(x) = objs.iter().find(|x| !source.has_object(x)) {
        return Err(Error::MalformedMap(format!(
            "image given for unknown object {x}"
        )));
    }
    if let Some(m) = mors.iter().find(|m| !source.has_morphism(m)) {
        return Err(Error::MalformedMap(format!(
            "image given for unknown morphism {m}"
        )));
    }
    Ok(())
}

impl FunctorMap for Functor {
    type Obj = String;
    type Mor = String;

    fn source(&self) -> &FinCat {
        &self.source
    }
    fn on_object(&self, x: &str) -> Option<&String> {
        self.objects.get(x)
    }
    fn on_morphism(&self, m: &str) -> Option<&String> {
        self.morphisms.get(m)
    }
    fn target_ends(&self, m: &String) -> Option<(String, String)> {
        let a = self.target.arrow(m)?;
        Some((a.dom.clone(), a.cod.clone()))
    }
    fn target_identity(&self, x: &String) -> Option<String> {
        self.target.identity(x).map(str::to_string)
    }
    fn target_compose(&self, g: &String, f: &String) -> Option<String> {
        self.target.compose(g, f).map(str::to_string)
    }
}

impl FunctorMap for SetFunctor {
    type Obj = FinSetObj;
    type Mor = FinSetMap;

    fn source(&self) -> &FinCat {
        &self.source
    }
    fn on_object(&self, x: &str) -> Option<&FinSetObj> {
        self.objects.get(x)
    }
    fn on_morphism(&self, m: &str) -> Option<&FinSetMap> {
        self.morphisms.get(m)
    }
    fn target_ends(&self, m: &FinSetMap) -> Option<(FinSetObj, FinSetObj)> {
        Some((m.dom().clone(), m.cod().clone()))
    }
    fn target_identity(&self, x: &FinSetObj) -> Option<FinSetMap> {
        Some(FinSetMap::identity(x))
    }
    fn target_compose(&self, g: &FinSetMap, f: &FinSetMap) -> Option<FinSetMap> {
        g.after(f).ok()
    }
}

/// Checks typing, identity preservation and composition preservation by
/// enumerating every morphism and composable pair of the source.
pub fn validate_functor<F: FunctorMap>(f: &F) -> CheckReport {
    let src = f.source();
    let mut report = CheckReport::new("functor");

    let mut typing = report.check(OBL_TYPING);
    for (m, a) in src.morphisms() {
        let img = f.on_morphism(m).expect("total by construction");
        let want = (f.on_object(&a.dom).cloned(), f.on_object(&a.cod).cloned());
        let got = f.target_ends(img);
        let ok =
            matches!((&got, &want), (Some((d, c)), (Some(wd), Some(wc))) if d == wd && c == wc);
        typing.instance(ok, || {
            Witness::new(
                [m.as_str()],
                format!("F({m}) = {img} does not go F({}) -> F({})", a.dom, a.cod),
            )
        });
    }

    let mut ids = report.check(OBL_RESPIDS);
    for (x, id) in src.identities() {
        let img = f.on_morphism(id).expect("total");
        let want = f.on_object(x).and_then(|fx| f.target_identity(fx));
        ids.instance(want.as_ref() == Some(img), || {
            Witness::new(
                [x.as_str(), id.as_str()],
                format!("F({id}) = {img} is not an identity"),
            )
        });
    }

    let mut comp = report.check(OBL_RESPCOMP);
    for (g, fm) in src.composable_pairs() {
        let Some(h) = src.compose(g, fm) else {
            continue;
        };
        let lhs = f.on_morphism(h).expect("total");
        let rhs = f.target_compose(
            f.on_morphism(g).expect("total"),
            f.on_morphism(fm).expect("total"),
        );
        comp.instance(rhs.as_ref() == Some(lhs), || {
            Witness::new(
                [g.as_str(), fm.as_str()],
                format!(
                    "F({h}) = {lhs} but F({g}) . F({fm}) = {}",
                    rhs.map(|r| r.to_string())
                        .unwrap_or_else(|| "undefined".into())
                ),
            )
        });
    }
    report
}

/// `G ∘ F`. Composing after a functor that lands in finite sets is an error.
pub fn compose_functors(g: &FunctorVal, f: &FunctorVal) -> Result<FunctorVal> {
    let FunctorVal::Table(f) = f else {
        return Err(Error::Mismatch(
            "cannot compose after a functor into finite sets".into(),
        ));
    };
    match g {
        FunctorVal::Table(g) => f.then(g).map(FunctorVal::Table),
        FunctorVal::Set(g) => g.precompose(f).map(FunctorVal::Set),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeItem {
    Object(String),
    Morphism(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImageItem<O, M> {
    Object(O),
    /// Image morphism with its domain and codomain in the target.
    Morphism {
        dom: O,
        cod: O,
        value: M,
    },
}

impl<O: fmt::Display, M: fmt::Display> fmt::Display for ImageItem<O, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImageItem::Object(o) => write!(f, "{o}"),
            ImageItem::Morphism { dom, cod, value } => write!(f, "({dom} -> {cod}, {value})"),
        }
    }
}

/// Item-by-item image of a diagram drawn in the source.
pub fn functor_image_of_diagram<F: FunctorMap>(
    f: &F,
    shape: &[ShapeItem],
) -> Result<Vec<ImageItem<F::Obj, F::Mor>>> {
    shape
        .iter()
        .map(|item| match item {
            ShapeItem::Object(x) => f
                .on_object(x)
                .cloned()
                .map(ImageItem::Object)
                .ok_or_else(|| Error::NotInSource(x.clone())),
            ShapeItem::Morphism(m) => {
                let a = f
                    .source()
                    .arrow(m)
                    .ok_or_else(|| Error::NotInSource(m.clone()))?;
                Ok(ImageItem::Morphism {
                    dom: f.on_object(&a.dom).expect("total").clone(),
                    cod: f.on_object(&a.cod).expect("total").clone(),
                    value: f.on_morphism(m).expect("total").clone(),
                })
            }
        })
        .collect()
}
