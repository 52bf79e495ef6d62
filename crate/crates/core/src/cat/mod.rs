//! Finite categories given by explicit tables, with exhaustive law checks.

mod comma;
mod functor;
mod nat;

pub use comma::{comma_object_over_functor, comma_under_object, CommaCat, Orientation};
pub use functor::{
    compose_functors, functor_image_of_diagram, validate_functor, CatRef, Functor, FunctorMap,
    FunctorVal, ImageItem, SetFunctor, ShapeItem, OBL_RESPCOMP, OBL_RESPIDS, OBL_TYPING,
};
pub use nat::{validate_nattrans, Nat, NatTrans, SetNatTrans, OBL_SQCOND};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::report::{CheckReport, Witness};

pub const OBL_COHERENCE: &str = "dom/cod coherence";
pub const OBL_TOTALITY: &str = "composition totality";
pub const OBL_ASSOC: &str = "associativity";
pub const OBL_IDL: &str = "left identity";
pub const OBL_IDR: &str = "right identity";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub dom: String,
    pub cod: String,
}

/// A finite category as tables. Identifiers are case-sensitive tokens and
/// every listing is sorted.
///
/// Construction only checks that tables reference existing identifiers; the
/// category laws are checked by [`validate_category`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCat {
    objects: BTreeSet<String>,
    morphisms: BTreeMap<String, Arrow>,
    identity: BTreeMap<String, String>,
    /// `(g, f) ↦ g ∘ f`
    compose: BTreeMap<(String, String), String>,
    hom: BTreeMap<(String, String), Vec<String>>,
}

impl FinCat {
    pub fn new<O, M>(
        objects: O,
        morphisms: M,
        identity: BTreeMap<String, String>,
        compose: BTreeMap<(String, String), String>,
    ) -> Result<FinCat>
    where
        O: IntoIterator<Item = String>,
        M: IntoIterator<Item = (String, String, String)>,
    {
        let objects: BTreeSet<String> = objects.into_iter().collect();
        let mut table = BTreeMap::new();
        for (name, dom, cod) in morphisms {
            for end in [&dom, &cod] {
                if !objects.contains(end) {
                    return Err(Error::Malformed(format!(
                        "morphism {name} mentions unknown object {end}"
                    )));
                }
            }
            if table.insert(name.clone(), Arrow { dom, cod }).is_some() {
                return Err(Error::Malformed(format!("morphism {name} declared twice")));
            }
        }
        for x in &objects {
            match identity.get(x) {
                None => return Err(Error::Malformed(format!("object {x} has no identity"))),
                Some(m) if !table.contains_key(m) => {
                    return Err(Error::Malformed(format!(
                        "identity of {x} is unknown morphism {m}"
                    )))
                }
                Some(_) => {}
            }
        }
        if let Some(x) = identity.keys().find(|x| !objects.contains(*x)) {
            return Err(Error::Malformed(format!(
                "identity given for unknown object {x}"
            )));
        }
        for ((g, f), h) in &compose {
            for m in [g, f, h] {
                if !table.contains_key(m) {
                    return Err(Error::Malformed(format!(
                        "composition entry {g} . {f} = {h} mentions unknown morphism {m}"
                    )));
                }
            }
        }
        let mut hom: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
        for (name, a) in &table {
            hom.entry((a.dom.clone(), a.cod.clone()))
                .or_default()
                .push(name.clone());
        }
        Ok(FinCat {
            objects,
            morphisms: table,
            identity,
            compose,
            hom,
        })
    }

    /// Builds a category whose identities are named `id_<obj>` and whose
    /// identity composites are filled in unless `compose` already lists them.
    pub fn with_implicit_identities<O, M>(
        objects: O,
        morphisms: M,
        compose: BTreeMap<(String, String), String>,
    ) -> Result<FinCat>
    where
        O: IntoIterator<Item = String>,
        M: IntoIterator<Item = (String, String, String)>,
    {
        let objects: Vec<String> = objects.into_iter().collect();
        let mut morphisms: Vec<(String, String, String)> = morphisms.into_iter().collect();
        let mut identity = BTreeMap::new();
        for x in &objects {
            let id = format!("id_{x}");
            identity.insert(x.clone(), id.clone());
            if !morphisms.iter().any(|(n, _, _)| n == &id) {
                morphisms.push((id, x.clone(), x.clone()));
            }
        }
        let mut compose = compose;
        for (name, dom, cod) in &morphisms {
            let (Some(id_dom), Some(id_cod)) = (identity.get(dom), identity.get(cod)) else {
                continue;
            };
            compose
                .entry((name.clone(), id_dom.clone()))
                .or_insert_with(|| name.clone());
            compose
                .entry((id_cod.clone(), name.clone()))
                .or_insert_with(|| name.clone());
        }
        FinCat::new(objects, morphisms, identity, compose)
    }

    /// The discrete category on the given objects.
    pub fn discrete<I: IntoIterator<Item = String>>(objects: I) -> FinCat {
        FinCat::with_implicit_identities(objects, Vec::new(), BTreeMap::new())
            .expect("discrete tables are well formed")
    }

    pub fn objects(&self) -> impl Iterator<Item = &String> + Clone {
        self.objects.iter()
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn has_object(&self, x: &str) -> bool {
        self.objects.contains(x)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = (&String, &Arrow)> + Clone {
        self.morphisms.iter()
    }

    pub fn morphism_names(&self) -> impl Iterator<Item = &String> + Clone {
        self.morphisms.keys()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn has_morphism(&self, m: &str) -> bool {
        self.morphisms.contains_key(m)
    }

    pub fn arrow(&self, m: &str) -> Option<&Arrow> {
        self.morphisms.get(m)
    }

    pub fn dom(&self, m: &str) -> Option<&str> {
        self.morphisms.get(m).map(|a| a.dom.as_str())
    }

    pub fn cod(&self, m: &str) -> Option<&str> {
        self.morphisms.get(m).map(|a| a.cod.as_str())
    }

    pub fn identity(&self, x: &str) -> Option<&str> {
        self.identity.get(x).map(String::as_str)
    }

    pub fn identities(&self) -> &BTreeMap<String, String> {
        &self.identity
    }

    pub fn is_identity(&self, m: &str) -> bool {
        self.dom(m).and_then(|x| self.identity(x)) == Some(m)
    }

    /// `g ∘ f` from the table.
    pub fn compose(&self, g: &str, f: &str) -> Option<&str> {
        self.compose
            .get(&(g.to_string(), f.to_string()))
            .map(String::as_str)
    }

    pub fn composition_table(&self) -> &BTreeMap<(String, String), String> {
        &self.compose
    }

    /// Composes a path given in traversal order (first arrow first).
    pub fn compose_path<'a, I>(&self, path: I) -> Option<String>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut acc: Option<String> = None;
        for m in path {
            acc = Some(match acc {
                None => m.to_string(),
                Some(f) => self.compose(m, &f)?.to_string(),
            });
        }
        acc
    }

    pub fn hom(&self, a: &str, b: &str) -> &[String] {
        self.hom
            .get(&(a.to_string(), b.to_string()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// All `(g, f)` with `cod f = dom g`, sorted by `(g, f)`.
    pub fn composable_pairs(&self) -> Vec<(&String, &String)> {
        let mut out = Vec::new();
        for (g, ga) in &self.morphisms {
            for (f, fa) in &self.morphisms {
                if fa.cod == ga.dom {
                    out.push((g, f));
                }
            }
        }
        out
    }

    /// Returns a copy whose table sends `g ∘ f` to `h`.
    pub fn with_composite(&self, g: &str, f: &str, h: &str) -> Result<FinCat> {
        let mut compose = self.compose.clone();
        compose.insert((g.to_string(), f.to_string()), h.to_string());
        FinCat::new(
            self.objects.iter().cloned(),
            self.morphisms
                .iter()
                .map(|(n, a)| (n.clone(), a.dom.clone(), a.cod.clone())),
            self.identity.clone(),
            compose,
        )
    }

    /// Full subcategory on the given objects.
    pub fn full_subcategory<'a, I>(&self, objects: I) -> Result<FinCat>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let keep: BTreeSet<String> = objects.into_iter().map(str::to_string).collect();
        if let Some(x) = keep.iter().find(|x| !self.objects.contains(*x)) {
            return Err(Error::NotInSource(x.clone()));
        }
        let morphisms: Vec<_> = self
            .morphisms
            .iter()
            .filter(|(_, a)| keep.contains(&a.dom) && keep.contains(&a.cod))
            .map(|(n, a)| (n.clone(), a.dom.clone(), a.cod.clone()))
            .collect();
        let names: BTreeSet<&String> = morphisms.iter().map(|(n, _, _)| n).collect();
        let compose = self
            .compose
            .iter()
            .filter(|((g, f), _)| names.contains(g) && names.contains(f))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let identity = self
            .identity
            .iter()
            .filter(|(x, _)| keep.contains(*x))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        FinCat::new(keep, morphisms, identity, compose)
    }
}

/// Exhaustively checks the category laws.
pub fn validate_category(c: &FinCat) -> CheckReport {
    let mut report = CheckReport::new("category");

    let mut coh = report.check(OBL_COHERENCE);
    for (x, id) in &c.identity {
        let a = &c.morphisms[id];
        coh.instance(a.dom == *x && a.cod == *x, || {
            Witness::new(
                [x.as_str(), id.as_str()],
                format!("identity of {x} is {id} : {} -> {}", a.dom, a.cod),
            )
        });
    }
    for ((g, f), h) in &c.compose {
        let (ga, fa, ha) = (&c.morphisms[g], &c.morphisms[f], &c.morphisms[h]);
        let ok = fa.cod == ga.dom && ha.dom == fa.dom && ha.cod == ga.cod;
        coh.instance(ok, || {
            Witness::new(
                [g.as_str(), f.as_str(), h.as_str()],
                format!(
                    "{g} . {f} = {h} but {f} : {} -> {}, {g} : {} -> {}, {h} : {} -> {}",
                    fa.dom, fa.cod, ga.dom, ga.cod, ha.dom, ha.cod
                ),
            )
        });
    }

    let pairs = c.composable_pairs();
    let mut tot = report.check(OBL_TOTALITY);
    for (g, f) in &pairs {
        tot.instance(c.compose(g, f).is_some(), || {
            Witness::new([g.as_str(), f.as_str()], format!("{g} . {f} is missing"))
        });
    }
    for (g, f) in c.compose.keys() {
        let ok = c.morphisms[f].cod == c.morphisms[g].dom;
        tot.instance(ok, || {
            Witness::new(
                [g.as_str(), f.as_str()],
                format!("{g} . {f} is listed but not composable"),
            )
        });
    }

    let mut assoc = report.check(OBL_ASSOC);
    for (g, f) in &pairs {
        let Some(gf) = c.compose(g, f) else { continue };
        for (h, ha) in &c.morphisms {
            if ha.dom != c.morphisms[*g].cod {
                continue;
            }
            let left = c.compose(h, gf);
            let right = c.compose(h, g).and_then(|hg| c.compose(hg, f));
            assoc.instance(left.is_some() && left == right, || {
                Witness::new(
                    [h.as_str(), g.as_str(), f.as_str()],
                    format!(
                        "({h} . {g}) . {f} = {} but {h} . ({g} . {f}) = {}",
                        right.unwrap_or("undefined"),
                        left.unwrap_or("undefined")
                    ),
                )
            });
        }
    }

    let mut idl = report.check(OBL_IDL);
    for (f, a) in &c.morphisms {
        let id = &c.identity[&a.cod];
        let got = c.compose(id, f);
        idl.instance(got == Some(f.as_str()), || {
            Witness::new(
                [id.as_str(), f.as_str()],
                format!("{id} . {f} = {}", got.unwrap_or("undefined")),
            )
        });
    }
    let mut idr = report.check(OBL_IDR);
    for (f, a) in &c.morphisms {
        let id = &c.identity[&a.dom];
        let got = c.compose(f, id);
        idr.instance(got == Some(f.as_str()), || {
            Witness::new(
                [f.as_str(), id.as_str()],
                format!("{f} . {id} = {}", got.unwrap_or("undefined")),
            )
        });
    }
    report
}

/// The preorder generated by `covers`, with one morphism `a<b` per strict
/// relation and identities `id_a`.
#[allow(clippy::needless_range_loop)]
pub fn preorder_from_covers<O, C>(objects: O, covers: C) -> Result<FinCat>
where
    O: IntoIterator<Item = String>,
    C: IntoIterator<Item = (String, String)>,
{
    let objects: Vec<String> = objects
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&str, usize> = objects
        .iter()
        .enumerate()
        .map(|(i, x)| (x.as_str(), i))
        .collect();
    let n = objects.len();
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in covers {
        let (Some(&i), Some(&j)) = (index.get(a.as_str()), index.get(b.as_str())) else {
            return Err(Error::Malformed(format!(
                "cover {a} < {b} mentions an unknown object"
            )));
        };
        le[i][j] = true;
    }
    // Floyd–Warshall closure
    for k in 0..n {
        for i in 0..n {
            if le[i][k] {
                for j in 0..n {
                    if le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if le[i][j] && le[j][i] {
                return Err(Error::Cycle(objects[i].clone(), objects[j].clone()));
            }
        }
    }
    let name = |i: usize, j: usize| {
        if i == j {
            format!("id_{}", objects[i])
        } else {
            format!("{}<{}", objects[i], objects[j])
        }
    };
    let mut morphisms = Vec::new();
    let mut identity = BTreeMap::new();
    let mut compose = BTreeMap::new();
    for i in 0..n {
        identity.insert(objects[i].clone(), name(i, i));
        for j in 0..n {
            if !le[i][j] {
                continue;
            }
            morphisms.push((name(i, j), objects[i].clone(), objects[j].clone()));
            for k in 0..n {
                if le[j][k] {
                    compose.insert((name(j, k), name(i, j)), name(i, k));
                }
            }
        }
    }
    FinCat::new(objects.iter().cloned(), morphisms, identity, compose)
}

/// Same identifiers with dom/cod swapped and composition reversed.
pub fn opposite(c: &FinCat) -> FinCat {
    let morphisms = c
        .morphisms
        .iter()
        .map(|(n, a)| (n.clone(), a.cod.clone(), a.dom.clone()));
    let compose = c
        .compose
        .iter()
        .map(|((g, f), h)| ((f.clone(), g.clone()), h.clone()))
        .collect();
    FinCat::new(
        c.objects.iter().cloned(),
        morphisms,
        c.identity.clone(),
        compose,
    )
    .expect("opposite of well-formed tables is well formed")
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn s(x: &str) -> String {
        x.to_string()
    }

    pub fn kite() -> FinCat {
        preorder_from_covers(
            ["1", "2", "3", "4", "5"].map(s),
            [("1", "2"), ("1", "3"), ("2", "4"), ("3", "4"), ("4", "5")].map(|(a, b)| (s(a), s(b))),
        )
        .unwrap()
    }

    pub fn chain(n: usize) -> FinCat {
        let objs: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let covers: Vec<_> = (1..n)
            .map(|i| ((i - 1).to_string(), i.to_string()))
            .collect();
        preorder_from_covers(objs, covers).unwrap()
    }

    /// The six-element poset with `1 < 2 < 4 < 6` and `1 < 3 < 5 < 6`, and
    /// the inclusion of its full subposet on `{2, 3, 4, 5}`.
    pub fn geo() -> (std::sync::Arc<FinCat>, Functor) {
        let b = preorder_from_covers(
            ["1", "2", "3", "4", "5", "6"].map(s),
            [
                ("1", "2"),
                ("1", "3"),
                ("2", "4"),
                ("3", "5"),
                ("4", "6"),
                ("5", "6"),
            ]
            .map(|(a, b)| (s(a), s(b))),
        )
        .unwrap();
        let a = std::sync::Arc::new(b.full_subcategory(["2", "3", "4", "5"]).unwrap());
        let b = std::sync::Arc::new(b);
        (b.clone(), Functor::inclusion(a, b).unwrap())
    }

    /// One object `*`, morphisms `id_*` and `e` with `e . e = e`.
    pub fn idempotent_monoid() -> FinCat {
        let mut compose = BTreeMap::new();
        compose.insert((s("e"), s("e")), s("e"));
        FinCat::with_implicit_identities([s("*")], [(s("e"), s("*"), s("*"))], compose).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn one_object_category_passes() {
        let c = FinCat::discrete([s("*")]);
        assert!(validate_category(&c).passed());
        assert_eq!(c.morphism_count(), 1);
    }

    #[test]
    fn kite_has_fourteen_morphisms_and_passes() {
        let k = kite();
        // 5 identities + 9 strict relations of the reflexive-transitive closure
        assert_eq!(k.morphism_count(), 14);
        let r = validate_category(&k);
        assert!(r.passed(), "{r}");
        assert!(r.obligation(OBL_ASSOC).unwrap().checked > 0);
    }

    #[test]
    fn redirected_composite_breaks_coherence() {
        let k = kite().with_composite("4<5", "1<4", "id_1").unwrap();
        let r = validate_category(&k);
        let w = r
            .obligation(OBL_COHERENCE)
            .unwrap()
            .witness
            .clone()
            .unwrap();
        assert_eq!(w.items, ["4<5", "1<4", "id_1"]);
    }

    #[test]
    fn dangling_identifier_is_malformed() {
        let mut compose = BTreeMap::new();
        compose.insert((s("u"), s("v")), s("w"));
        let err = FinCat::with_implicit_identities([s("a")], [(s("u"), s("a"), s("a"))], compose)
            .unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
        let err =
            FinCat::with_implicit_identities([s("a")], [(s("u"), s("a"), s("b"))], BTreeMap::new())
                .unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
    }

    #[test]
    fn preorder_single_object_and_cycle() {
        let c = preorder_from_covers([s("a")], []).unwrap();
        assert_eq!(c.morphism_count(), 1);
        let err = preorder_from_covers([s("a"), s("b")], [(s("a"), s("b")), (s("b"), s("a"))])
            .unwrap_err();
        assert_eq!(err, Error::Cycle(s("a"), s("b")));
    }

    #[test]
    fn opposite_of_interval() {
        let c = chain(2);
        let op = opposite(&c);
        assert_eq!(op.dom("0<1"), Some("1"));
        assert_eq!(op.cod("0<1"), Some("0"));
        assert_eq!(op.hom("1", "0"), ["0<1"]);
    }

    #[test]
    fn opposite_is_involution_and_preserves_hom_counts() {
        let k = kite();
        assert_eq!(opposite(&opposite(&k)), k);
        assert_eq!(opposite(&k).hom("4", "1").len(), k.hom("1", "4").len());
        assert_eq!(k.hom("1", "4").len(), 1);
    }

    #[test]
    fn non_associative_table_is_caught() {
        let mut compose = BTreeMap::new();
        for (g, f, h) in [
            ("a", "a", "b"),
            ("a", "b", "a"),
            ("b", "a", "b"),
            ("b", "b", "b"),
        ] {
            compose.insert((s(g), s(f)), s(h));
        }
        let c = FinCat::with_implicit_identities(
            [s("*")],
            [(s("a"), s("*"), s("*")), (s("b"), s("*"), s("*"))],
            compose,
        )
        .unwrap();
        let r = validate_category(&c);
        assert!(r.obligation(OBL_COHERENCE).unwrap().passed());
        let w = r.obligation(OBL_ASSOC).unwrap().witness.clone().unwrap();
        // replay
        let (h, g, f) = (&w.items[0], &w.items[1], &w.items[2]);
        let left = c.compose(h, c.compose(g, f).unwrap());
        let right = c.compose(c.compose(h, g).unwrap(), f);
        assert_ne!(left, right);
    }

    #[test]
    fn missing_composite_fails_totality() {
        let c = FinCat::with_implicit_identities(
            [s("a"), s("b"), s("c")],
            [(s("u"), s("a"), s("b")), (s("v"), s("b"), s("c"))],
            BTreeMap::new(),
        )
        .unwrap();
        let r = validate_category(&c);
        let w = r.obligation(OBL_TOTALITY).unwrap().witness.clone().unwrap();
        assert_eq!(w.items, ["v", "u"]);
    }

    #[test]
    fn full_subcategory_of_kite() {
        let sub = kite().full_subcategory(["2", "4", "5"]).unwrap();
        assert_eq!(sub.morphism_count(), 6);
        assert!(validate_category(&sub).passed());
    }
}
