//! Hom-functors, the Yoneda correspondence between elements and natural
//! transformations, universal arrows and representability, all checked by
//! enumeration over finite data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::cat::{validate_nattrans, FinCat, Functor, SetFunctor, SetNatTrans};
use crate::config::EnumConfig;
use crate::error::{Error, Result};
use crate::finset::{
    enumerate_maps, enumerate_nattrans_finset, parse_map, Atom, FinSetMap, FinSetObj,
};
use crate::report::{CheckReport, Witness};

fn mor_atom(m: &str) -> Atom {
    Atom::parse(m)
}

/// `B(C, −)`: each object goes to its hom-set from `C`, each morphism to
/// postcomposition.
pub fn hom_cov_functor(b: &Arc<FinCat>, c: &str) -> Result<SetFunctor> {
    if !b.has_object(c) {
        return Err(Error::NotInSource(c.to_string()));
    }
    let objects: BTreeMap<String, FinSetObj> = b
        .objects()
        .map(|d| (d.clone(), b.hom(c, d).iter().map(|m| mor_atom(m)).collect()))
        .collect();
    let mut morphisms = BTreeMap::new();
    for (g, a) in b.morphisms() {
        let table = b
            .hom(c, &a.dom)
            .iter()
            .map(|f| (mor_atom(f), mor_atom(b.compose(g, f).expect("composable"))))
            .collect();
        morphisms.insert(
            g.clone(),
            FinSetMap::new(objects[&a.dom].clone(), objects[&a.cod].clone(), table)?,
        );
    }
    SetFunctor::new(b.clone(), objects, morphisms)
}

/// `Set(A, R−)`: each object goes to the maps `A → R D` (as their canonical
/// encodings), each morphism to postcomposition with its `R`-image.
pub fn hom_set_functor_ar(a: &FinSetObj, r: &SetFunctor, cfg: &EnumConfig) -> Result<SetFunctor> {
    let src = r.source_cat();
    let mut maps: BTreeMap<String, Vec<FinSetMap>> = BTreeMap::new();
    for d in src.objects() {
        maps.insert(d.clone(), enumerate_maps(a, r.ob(d), cfg)?);
    }
    let objects: BTreeMap<String, FinSetObj> = maps
        .iter()
        .map(|(d, ms)| (d.clone(), ms.iter().map(FinSetMap::encode).collect()))
        .collect();
    let mut morphisms = BTreeMap::new();
    for (g, arr) in src.morphisms() {
        let table = maps[&arr.dom]
            .iter()
            .map(|h| Ok((h.encode(), r.mor(g).after(h)?.encode())))
            .collect::<Result<_>>()?;
        morphisms.insert(
            g.clone(),
            FinSetMap::new(objects[&arr.dom].clone(), objects[&arr.cod].clone(), table)?,
        );
    }
    SetFunctor::new(src.clone(), objects, morphisms)
}

/// The data `(B, R, A, C)` of the basic Yoneda situation, with both
/// hom-functors precomputed.
#[derive(Debug, Clone)]
pub struct Y0Instance {
    pub b: Arc<FinCat>,
    pub r: Arc<SetFunctor>,
    pub a: FinSetObj,
    pub c: String,
    /// `B(C, −)`
    pub hom_c: Arc<SetFunctor>,
    /// `Set(A, R−)`
    pub hom_ar: Arc<SetFunctor>,
}

impl Y0Instance {
    pub fn new(r: Arc<SetFunctor>, a: FinSetObj, c: &str, cfg: &EnumConfig) -> Result<Y0Instance> {
        let b = r.source_cat().clone();
        let hom_c = Arc::new(hom_cov_functor(&b, c)?);
        let hom_ar = Arc::new(hom_set_functor_ar(&a, &r, cfg)?);
        Ok(Y0Instance {
            b,
            r,
            a,
            c: c.to_string(),
            hom_c,
            hom_ar,
        })
    }

    /// All candidate `η : A → R C`.
    pub fn etas(&self, cfg: &EnumConfig) -> Result<Vec<FinSetMap>> {
        enumerate_maps(&self.a, self.r.ob(&self.c), cfg)
    }

    /// `T_D(f) = R f ∘ η`.
    pub fn t_from_eta(&self, eta: &FinSetMap) -> Result<SetNatTrans> {
        if eta.dom() != &self.a || eta.cod() != self.r.ob(&self.c) {
            return Err(Error::Mismatch(format!(
                "η must go {} -> {}",
                self.a,
                self.r.ob(&self.c)
            )));
        }
        let mut comps = BTreeMap::new();
        for d in self.b.objects() {
            let table = self
                .b
                .hom(&self.c, d)
                .iter()
                .map(|f| Ok((mor_atom(f), self.r.mor(f).after(eta)?.encode())))
                .collect::<Result<_>>()?;
            comps.insert(
                d.clone(),
                FinSetMap::new(self.hom_c.ob(d).clone(), self.hom_ar.ob(d).clone(), table)?,
            );
        }
        SetNatTrans::new(self.hom_c.clone(), self.hom_ar.clone(), comps)
    }

    /// `η_T = T_C(id_C)`, decoded back into a map.
    pub fn eta_from_t(&self, t: &SetNatTrans) -> Result<FinSetMap> {
        let id = self.b.identity(&self.c).expect("object has an identity");
        let enc = t.component(&self.c).apply(&mor_atom(id)).ok_or_else(|| {
            Error::Mismatch("component at C is not defined on the identity".into())
        })?;
        parse_map(&enc.to_string(), &self.a, self.r.ob(&self.c))
    }
}

pub const OBL_ETA_ROUNDTRIP: &str = "eta -> T -> eta";
pub const OBL_T_ROUNDTRIP: &str = "T -> eta -> T";
pub const OBL_COUNT: &str = "|Nat| = |Set(A, RC)|";

/// Both round trips, quantified over every `η` and every enumerated `T`.
pub fn check_yoneda_roundtrips(inst: &Y0Instance, cfg: &EnumConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("Yoneda round trips at {}", inst.c));
    let etas = inst.etas(cfg)?;
    let ts = enumerate_nattrans_finset(&inst.hom_c, &inst.hom_ar, cfg)?;

    let mut ob = report.check(OBL_ETA_ROUNDTRIP);
    for eta in &etas {
        let t = inst.t_from_eta(eta)?;
        let natural = validate_nattrans(&t).passed();
        let back = inst.eta_from_t(&t)?;
        ob.instance(natural && &back == eta, || {
            Witness::new(
                [eta.to_string()],
                format!("came back as {back} (T natural: {natural})"),
            )
        });
    }
    let mut ob = report.check(OBL_T_ROUNDTRIP);
    for t in &ts {
        let eta = inst.eta_from_t(t)?;
        let back = inst.t_from_eta(&eta)?;
        ob.instance(&back == t, || {
            Witness::new([t.to_string()], format!("came back as {back}"))
        });
    }
    let mut ob = report.check(OBL_COUNT);
    ob.instance(ts.len() == etas.len(), || {
        Witness::new(
            [inst.c.as_str()],
            format!("{} transformations but {} maps", ts.len(), etas.len()),
        )
    });
    Ok(report)
}

/// One `(B′, g)` instance of the universal property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalRow {
    pub object: String,
    pub g: String,
    /// Every `f : C → B′` with `R f ∘ η = g`.
    pub factorizations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalCheck {
    pub rows: Vec<UniversalRow>,
}

impl UniversalCheck {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.factorizations.len() == 1)
    }

    pub fn first_failure(&self) -> Option<&UniversalRow> {
        self.rows.iter().find(|r| r.factorizations.len() != 1)
    }

    /// The unique factorization of `g` through `B′`, when it exists.
    pub fn factor(&self, object: &str, g: &str) -> Option<&str> {
        self.rows
            .iter()
            .find(|r| r.object == object && r.g == g && r.factorizations.len() == 1)
            .map(|r| r.factorizations[0].as_str())
    }
}

impl fmt::Display for UniversalCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}",
            if self.holds() {
                "universal"
            } else {
                "not universal"
            }
        )?;
        for r in &self.rows {
            let fs = if r.factorizations.is_empty() {
                "none".to_string()
            } else {
                r.factorizations.join(", ")
            };
            writeln!(f, "  {} {}: {fs}", r.object, r.g)?;
        }
        Ok(())
    }
}

/// Universality of `η : A → R C` for a set-valued `R`.
pub fn is_universal_arrow(
    r: &SetFunctor,
    a: &FinSetObj,
    c: &str,
    eta: &FinSetMap,
    cfg: &EnumConfig,
) -> Result<UniversalCheck> {
    let b = r.source_cat();
    let mut rows = Vec::new();
    for b2 in b.objects() {
        for g in enumerate_maps(a, r.ob(b2), cfg)? {
            let factorizations = b
                .hom(c, b2)
                .iter()
                .filter(|f| r.mor(f).after(eta).ok().as_ref() == Some(&g))
                .cloned()
                .collect();
            rows.push(UniversalRow {
                object: b2.clone(),
                g: g.to_string(),
                factorizations,
            });
        }
    }
    Ok(UniversalCheck { rows })
}

/// Universality of `η : A → R C` for a functor between table categories.
pub fn is_universal_arrow_table(
    r: &Functor,
    a: &str,
    c: &str,
    eta: &str,
) -> Result<UniversalCheck> {
    let (b, tgt) = (r.source_cat(), r.target_cat());
    if tgt.dom(eta) != Some(a) || tgt.cod(eta) != Some(r.ob(c)) {
        return Err(Error::Mismatch(format!("{eta} does not go {a} -> R({c})")));
    }
    let mut rows = Vec::new();
    for b2 in b.objects() {
        for g in tgt.hom(a, r.ob(b2)) {
            let factorizations = b
                .hom(c, b2)
                .iter()
                .filter(|f| tgt.compose(r.mor(f), eta) == Some(g.as_str()))
                .cloned()
                .collect();
            rows.push(UniversalRow {
                object: b2.clone(),
                g: g.clone(),
                factorizations,
            });
        }
    }
    Ok(UniversalCheck { rows })
}

/// `T_x` with `T_x,D(f) = R f (x)`, from `B(C, −)` to `R`.
pub fn element_to_nat(
    hom_c: &Arc<SetFunctor>,
    r: &Arc<SetFunctor>,
    c: &str,
    x: &Atom,
) -> Result<SetNatTrans> {
    let b = r.source_cat();
    let mut comps = BTreeMap::new();
    for d in b.objects() {
        let table = b
            .hom(c, d)
            .iter()
            .map(|f| {
                let y = r
                    .mor(f)
                    .apply(x)
                    .ok_or_else(|| Error::Mismatch(format!("{x} is not in R({c})")))?;
                Ok((mor_atom(f), y.clone()))
            })
            .collect::<Result<_>>()?;
        comps.insert(
            d.clone(),
            FinSetMap::new(hom_c.ob(d).clone(), r.ob(d).clone(), table)?,
        );
    }
    SetNatTrans::new(hom_c.clone(), r.clone(), comps)
}

pub const OBL_Y1_NATURAL: &str = "each T_x natural";
pub const OBL_Y1_INJECTIVE: &str = "injective";
pub const OBL_Y1_SURJECTIVE: &str = "surjective";

/// The correspondence `R C ≅ Nat(B(C, −), R)` as a table, with a report
/// comparing it against brute-force enumeration of the right-hand side.
pub fn yoneda_bijection_y1(
    r: &Arc<SetFunctor>,
    c: &str,
    cfg: &EnumConfig,
) -> Result<(BTreeMap<Atom, SetNatTrans>, CheckReport)> {
    let hom_c = Arc::new(hom_cov_functor(r.source_cat(), c)?);
    let mut table = BTreeMap::new();
    for x in r.ob(c).iter() {
        table.insert(x.clone(), element_to_nat(&hom_c, r, c, x)?);
    }
    let all = enumerate_nattrans_finset(&hom_c, r, cfg)?;
    let mut report = CheckReport::new(format!("Yoneda correspondence at {c}"));

    let mut ob = report.check(OBL_Y1_NATURAL);
    for (x, t) in &table {
        let rep = validate_nattrans(t);
        ob.instance(rep.passed(), || {
            Witness::new([x.to_string()], "T_x fails the square condition")
        });
    }
    let mut ob = report.check(OBL_Y1_INJECTIVE);
    let mut seen: BTreeMap<&SetNatTrans, &Atom> = BTreeMap::new();
    for (x, t) in &table {
        let clash = seen.insert(t, x);
        ob.instance(clash.is_none(), || {
            Witness::new(
                [
                    x.to_string(),
                    clash.map(|y| y.to_string()).unwrap_or_default(),
                ],
                "same transformation",
            )
        });
    }
    let image: BTreeSet<&SetNatTrans> = table.values().collect();
    let mut ob = report.check(OBL_Y1_SURJECTIVE);
    for t in &all {
        ob.instance(image.contains(t), || {
            Witness::new([t.to_string()], "not of the form T_x")
        });
    }
    Ok((table, report))
}

/// `g ↦ g ∘ f`, from `B(C, −)` to `B(B, −)` for `f : B → C`.
pub fn yoneda_embedding(b: &Arc<FinCat>, f: &str) -> Result<SetNatTrans> {
    let arr = b
        .arrow(f)
        .ok_or_else(|| Error::NotInSource(f.to_string()))?;
    let from = Arc::new(hom_cov_functor(b, &arr.cod)?);
    let to = Arc::new(hom_cov_functor(b, &arr.dom)?);
    let mut comps = BTreeMap::new();
    for d in b.objects() {
        let table = b
            .hom(&arr.cod, d)
            .iter()
            .map(|g| (mor_atom(g), mor_atom(b.compose(g, f).expect("composable"))))
            .collect();
        comps.insert(
            d.clone(),
            FinSetMap::new(from.ob(d).clone(), to.ob(d).clone(), table)?,
        );
    }
    SetNatTrans::new(from, to, comps)
}

/// `T ↦ T_C(id_C)` for `T : B(C, −) ⇒ B(B, −)`.
pub fn embedding_inverse(b: &FinCat, c: &str, t: &SetNatTrans) -> Option<String> {
    let id = b.identity(c)?;
    t.component(c).apply(&mor_atom(id)).map(|a| a.to_string())
}

pub const OBL_REP_NATURAL: &str = "T' natural";
pub const OBL_REP_ISO: &str = "T' natural isomorphism";
pub const OBL_REP_UNIVERSAL: &str = "T'_C(id_C) universal element";
pub const OBL_REP_AGREE: &str = "criteria agree";

fn natural_iso(t: &SetNatTrans) -> Option<String> {
    t.components()
        .iter()
        .find(|(_, m)| !m.is_bijection())
        .map(|(x, _)| x.clone())
}

fn point_map(x: &Atom, into: &FinSetObj) -> Result<FinSetMap> {
    FinSetMap::constant(&FinSetObj::point(), into, x)
}

/// Whether `T′ : B(C, −) ⇒ R` is a representation, judged both as a natural
/// isomorphism and through universality of its element `T′_C(id_C)`; the two
/// judgements must agree.
pub fn check_representation(
    r: &Arc<SetFunctor>,
    c: &str,
    t: &SetNatTrans,
    cfg: &EnumConfig,
) -> Result<CheckReport> {
    let b = r.source_cat();
    let mut report = CheckReport::new(format!("representation at {c}"));
    let natural = validate_nattrans(t);
    let mut ob = report.check(OBL_REP_NATURAL);
    ob.instance(natural.passed(), || {
        natural
            .first_failure()
            .and_then(|o| o.witness.clone())
            .expect("failure has witness")
    });

    let iso_fail = natural_iso(t);
    let mut ob = report.check(OBL_REP_ISO);
    ob.instance(iso_fail.is_none(), || {
        Witness::new(
            [iso_fail.clone().unwrap_or_default()],
            "component is not a bijection",
        )
    });

    let id = b
        .identity(c)
        .ok_or_else(|| Error::NotInSource(c.to_string()))?;
    let x = t
        .component(c)
        .apply(&mor_atom(id))
        .cloned()
        .ok_or_else(|| Error::Mismatch("T' is undefined on the identity".into()))?;
    let eta = point_map(&x, r.ob(c))?;
    let univ = is_universal_arrow(r, &FinSetObj::point(), c, &eta, cfg)?;
    let mut ob = report.check(OBL_REP_UNIVERSAL);
    ob.instance(univ.holds(), || {
        let row = univ.first_failure().expect("not universal");
        Witness::new(
            [x.to_string(), row.object.clone(), row.g.clone()],
            format!("{} factorizations", row.factorizations.len()),
        )
    });

    let mut ob = report.check(OBL_REP_AGREE);
    let iso = natural.passed() && iso_fail.is_none();
    ob.instance(iso == univ.holds(), || {
        Witness::new(
            [x.to_string()],
            format!("natural iso: {iso}, universal: {}", univ.holds()),
        )
    });
    Ok(report)
}

/// Agreement of the two representability criteria at one element; returns
/// `(universal, natural iso)`.
pub fn representability_criteria(
    r: &Arc<SetFunctor>,
    c: &str,
    x: &Atom,
    cfg: &EnumConfig,
) -> Result<(bool, bool)> {
    let hom_c = Arc::new(hom_cov_functor(r.source_cat(), c)?);
    let t = element_to_nat(&hom_c, r, c, x)?;
    let univ = is_universal_arrow(r, &FinSetObj::point(), c, &point_map(x, r.ob(c))?, cfg)?.holds();
    let iso = validate_nattrans(&t).passed() && natural_iso(&t).is_none();
    Ok((univ, iso))
}

/// Least `(C, x)` with `x ∈ R C` universal, with its transformation.
pub fn find_representation(
    r: &Arc<SetFunctor>,
    cfg: &EnumConfig,
) -> Result<Option<(String, Atom, SetNatTrans)>> {
    let b = r.source_cat();
    for c in b.objects() {
        for x in r.ob(c).iter() {
            let eta = point_map(x, r.ob(c))?;
            if is_universal_arrow(r, &FinSetObj::point(), c, &eta, cfg)?.holds() {
                let hom_c = Arc::new(hom_cov_functor(b, c)?);
                return Ok(Some((
                    c.clone(),
                    x.clone(),
                    element_to_nat(&hom_c, r, c, x)?,
                )));
            }
        }
    }
    Ok(None)
}
