//! Restriction along a functor and its two adjoints, computed pointwise by
//! (co)limits over comma categories.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::cat::{
    comma_under_object, validate_functor, CommaCat, FinCat, Functor, Orientation, SetFunctor,
    SetNatTrans,
};
use crate::config::EnumConfig;
use crate::error::{Error, Result};
use crate::finset::{
    colimit_finset, encode_tuple, enumerate_maps, enumerate_nattrans_finset, limit_finset, Atom,
    Cocone, Cone, FinSetMap, FinSetObj,
};
use crate::report::{CheckReport, Witness};

/// `f^* G = G ∘ f`.
pub fn precompose_functor(f: &Functor, g: &SetFunctor) -> Result<SetFunctor> {
    g.precompose(f)
}

/// `f_* H` with the limit cone it was built from at every object.
#[derive(Debug, Clone)]
pub struct RightKan {
    pub functor: SetFunctor,
    /// `(B ↓ f)` for each object `B`.
    pub commas: BTreeMap<String, CommaCat>,
    pub cones: BTreeMap<String, Cone>,
}

/// `f^! G` with the colimit cocone it was built from at every object.
#[derive(Debug, Clone)]
pub struct LeftKan {
    pub functor: SetFunctor,
    /// `(f ↓ B)` for each object `B`.
    pub commas: BTreeMap<String, CommaCat>,
    pub cocones: BTreeMap<String, Cocone>,
}

fn check_source(f: &Functor, h: &SetFunctor) -> Result<()> {
    if **f.source_cat() != **h.source_cat() {
        return Err(Error::Mismatch(
            "the set-valued functor is not defined on the source of f".into(),
        ));
    }
    Ok(())
}

/// `(f_* H)(B) = lim over (B ↓ f) of H ∘ U`. A morphism `b : B → B′` sends a
/// family `x` to `y` with `y_(A, ϕ′) = x_(A, ϕ′ ∘ b)`.
pub fn right_kan(f: &Functor, h: &SetFunctor, cfg: &EnumConfig) -> Result<RightKan> {
    check_source(f, h)?;
    let b = f.target_cat();
    let mut commas = BTreeMap::new();
    let mut cones = BTreeMap::new();
    for y in b.objects() {
        let comma = comma_under_object(y, f, Orientation::Under)?;
        let cone = limit_finset(&h.precompose(&comma.forget)?, cfg)?;
        commas.insert(y.clone(), comma);
        cones.insert(y.clone(), cone);
    }
    let objects: BTreeMap<String, FinSetObj> = cones
        .iter()
        .map(|(y, c)| (y.clone(), c.apex.clone()))
        .collect();
    let mut morphisms = BTreeMap::new();
    for (m, arr) in b.morphisms() {
        let (src, dst) = (&commas[&arr.dom], &commas[&arr.cod]);
        let mut table = BTreeMap::new();
        for (elt, family) in &cones[&arr.dom].families {
            let mut image = BTreeMap::new();
            for id in dst.cat.objects() {
                let phi = b.compose(dst.tag(id), m).expect("composable");
                let at = src
                    .find(dst.base(id), phi)
                    .expect("precomposed arrow lies in the comma category");
                image.insert(id.clone(), family[&at].clone());
            }
            table.insert(elt.clone(), encode_tuple(&image));
        }
        morphisms.insert(
            m.clone(),
            FinSetMap::new(objects[&arr.dom].clone(), objects[&arr.cod].clone(), table)?,
        );
    }
    let functor = SetFunctor::new(b.clone(), objects, morphisms)?;
    Ok(RightKan {
        functor,
        commas,
        cones,
    })
}

/// `(f^! G)(B) = colim over (f ↓ B) of G ∘ U`. A morphism `b : B → B′` sends
/// the class of `((A, ϕ), x)` to the class of `((A, b ∘ ϕ), x)`.
pub fn left_kan(f: &Functor, g: &SetFunctor, cfg: &EnumConfig) -> Result<LeftKan> {
    check_source(f, g)?;
    let b = f.target_cat();
    let mut commas = BTreeMap::new();
    let mut cocones = BTreeMap::new();
    for y in b.objects() {
        let comma = comma_under_object(y, f, Orientation::Over)?;
        let cocone = colimit_finset(&g.precompose(&comma.forget)?, cfg)?;
        commas.insert(y.clone(), comma);
        cocones.insert(y.clone(), cocone);
    }
    let objects: BTreeMap<String, FinSetObj> = cocones
        .iter()
        .map(|(y, c)| (y.clone(), c.apex.clone()))
        .collect();
    let mut morphisms = BTreeMap::new();
    for (m, arr) in b.morphisms() {
        let (src, dst) = (&commas[&arr.dom], &cocones[&arr.cod]);
        let dst_comma = &commas[&arr.cod];
        let mut table = BTreeMap::new();
        for (class, (j, x)) in &cocones[&arr.dom].representatives {
            let phi = b.compose(m, src.tag(j)).expect("composable");
            let at = dst_comma
                .find(src.base(j), phi)
                .expect("postcomposed arrow lies in the comma category");
            let image = dst.legs[&at].apply(x).expect("leg is total").clone();
            table.insert(class.clone(), image);
        }
        morphisms.insert(
            m.clone(),
            FinSetMap::new(objects[&arr.dom].clone(), objects[&arr.cod].clone(), table)?,
        );
    }
    let functor = SetFunctor::new(b.clone(), objects, morphisms)?;
    Ok(LeftKan {
        functor,
        commas,
        cocones,
    })
}

type Components = BTreeMap<String, FinSetMap>;

fn components_of(ts: &[SetNatTrans]) -> BTreeSet<Components> {
    ts.iter().map(|t| t.components().clone()).collect()
}

/// Checks that a transposition is a bijection between two enumerated hom sets.
fn transposition_is_bijective(
    from: &[SetNatTrans],
    to: &BTreeSet<Components>,
    transpose: impl Fn(&SetNatTrans) -> Option<Components>,
) -> std::result::Result<(), String> {
    let mut image = BTreeSet::new();
    for t in from {
        let Some(c) = transpose(t) else {
            return Err(format!("the transpose of {t} is not well defined"));
        };
        if !to.contains(&c) {
            return Err(format!("the transpose of {t} is not in the other hom set"));
        }
        if !image.insert(c) {
            return Err(format!("two transformations share the transpose of {t}"));
        }
    }
    if image.len() != to.len() {
        return Err(format!(
            "only {} of {} transformations are hit",
            image.len(),
            to.len()
        ));
    }
    Ok(())
}

pub const OBL_LEFT_COUNT: &str = "f^! -| f^*: hom-set sizes";
pub const OBL_LEFT_TRANSPOSE: &str = "f^! -| f^*: transposition is a bijection";
pub const OBL_RIGHT_COUNT: &str = "f^* -| f_*: hom-set sizes";
pub const OBL_RIGHT_TRANSPOSE: &str = "f^* -| f_*: transposition is a bijection";

/// For every `G′` on the source of `f` and `G` on its target, checks
/// `|Nat(f^! G′, G)| = |Nat(G′, f^* G)|` and `|Nat(f^* G, G′)| = |Nat(G, f_* G′)|`,
/// and that the transposition through the unit of each adjunction is a
/// bijection between the enumerated sets.
pub fn check_kan_adjointness(
    f: &Functor,
    on_source: &[SetFunctor],
    on_target: &[SetFunctor],
    cfg: &EnumConfig,
) -> Result<CheckReport> {
    check_kan_adjointness_with(
        f,
        on_source,
        on_target,
        |g| Ok(left_kan(f, g, cfg)?.functor),
        |h| Ok(right_kan(f, h, cfg)?.functor),
        cfg,
    )
}

/// As [`check_kan_adjointness`], with the two extension functors supplied by
/// the caller. The transpositions still use the units of the canonical
/// constructions, so a tampered extension is caught either by a size
/// mismatch or by an ill-defined transpose.
pub fn check_kan_adjointness_with(
    f: &Functor,
    on_source: &[SetFunctor],
    on_target: &[SetFunctor],
    left: impl Fn(&SetFunctor) -> Result<SetFunctor>,
    right: impl Fn(&SetFunctor) -> Result<SetFunctor>,
    cfg: &EnumConfig,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("Kan adjunctions");
    let b = f.target_cat();
    let mut left_counts = Vec::new();
    let mut left_bij = Vec::new();
    let mut right_counts = Vec::new();
    let mut right_bij = Vec::new();
    for (i, gs) in on_source.iter().enumerate() {
        let lan = Arc::new(left(gs)?);
        let reference = left_kan(f, gs, cfg)?;
        let ran = Arc::new(right(gs)?);
        let ran_commas: BTreeMap<String, CommaCat> = b
            .objects()
            .map(|y| Ok((y.clone(), comma_under_object(y, f, Orientation::Under)?)))
            .collect::<Result<_>>()?;
        let gs_arc = Arc::new(gs.clone());
        for (j, gt) in on_target.iter().enumerate() {
            let label = [format!("G'#{i}"), format!("G#{j}")];
            let gt_arc = Arc::new(gt.clone());
            let restricted = Arc::new(precompose_functor(f, gt)?);

            // f^! ⊣ f^*: α ↦ α♯ with (α♯)_a(x) = α_{fa}([(a, id_fa) : x])
            let lhs = enumerate_nattrans_finset(&lan, &gt_arc, cfg)?;
            let rhs = enumerate_nattrans_finset(&gs_arc, &restricted, cfg)?;
            left_counts.push((label.clone(), lhs.len(), rhs.len()));
            let targets = components_of(&rhs);
            let res = transposition_is_bijective(&lhs, &targets, |alpha| {
                let mut comps = Components::new();
                for a in gs.source_cat().objects() {
                    let fa = f.ob(a);
                    let at = reference.commas[fa].find(a, b.identity(fa)?)?;
                    let leg = &reference.cocones[fa].legs[&at];
                    let mut table = BTreeMap::new();
                    for x in gs.ob(a).iter() {
                        table.insert(x.clone(), alpha.component(fa).apply(leg.apply(x)?)?.clone());
                    }
                    comps.insert(
                        a.clone(),
                        FinSetMap::new(gs.ob(a).clone(), gt.ob(fa).clone(), table).ok()?,
                    );
                }
                Some(comps)
            });
            left_bij.push((label.clone(), res));

            // f^* ⊣ f_*: β ↦ β♭ with (β♭)_B(y) = (β_A(G(ϕ)(y)))_(A, ϕ)
            let lhs = enumerate_nattrans_finset(&restricted, &gs_arc, cfg)?;
            let rhs = enumerate_nattrans_finset(&gt_arc, &ran, cfg)?;
            right_counts.push((label.clone(), lhs.len(), rhs.len()));
            let targets = components_of(&rhs);
            let res = transposition_is_bijective(&lhs, &targets, |beta| {
                let mut comps = Components::new();
                for y in b.objects() {
                    let comma = &ran_commas[y];
                    let mut table = BTreeMap::new();
                    for e in gt.ob(y).iter() {
                        let mut family = BTreeMap::new();
                        for id in comma.cat.objects() {
                            let moved = gt.mor(comma.tag(id)).apply(e)?;
                            family.insert(
                                id.clone(),
                                beta.component(comma.base(id)).apply(moved)?.clone(),
                            );
                        }
                        table.insert(e.clone(), encode_tuple(&family));
                    }
                    comps.insert(
                        y.clone(),
                        FinSetMap::new(gt.ob(y).clone(), ran.ob(y).clone(), table).ok()?,
                    );
                }
                Some(comps)
            });
            right_bij.push((label, res));
        }
    }

    for (name, counts, hom) in [
        (
            OBL_LEFT_COUNT,
            &left_counts,
            "|Nat(f^!G', G)| = {l} but |Nat(G', f^*G)| = {r}",
        ),
        (
            OBL_RIGHT_COUNT,
            &right_counts,
            "|Nat(f^*G, G')| = {l} but |Nat(G, f_*G')| = {r}",
        ),
    ] {
        let mut ob = report.check(name);
        for (label, l, r) in counts {
            ob.instance(l == r, || {
                Witness::new(
                    label.clone(),
                    hom.replace("{l}", &l.to_string())
                        .replace("{r}", &r.to_string()),
                )
            });
        }
    }
    for (name, results) in [
        (OBL_LEFT_TRANSPOSE, &left_bij),
        (OBL_RIGHT_TRANSPOSE, &right_bij),
    ] {
        let mut ob = report.check(name);
        for (label, res) in results {
            ob.instance(res.is_ok(), || {
                Witness::new(label.clone(), res.clone().unwrap_err())
            });
        }
    }
    Ok(report)
}

pub const OBL_FULLY_FAITHFUL: &str = "f is full and faithful";
pub const OBL_COUNIT_NAT: &str = "counit natural";

/// For a full and faithful `f`, checks that every counit component
/// `(f^* f_* H)(a) → H(a)` is a bijection, one obligation per object.
/// The counit component is the limit projection at `(a, id_fa)`.
pub fn counit_inclusion_check(
    f: &Functor,
    h: &SetFunctor,
    cfg: &EnumConfig,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("counit f^* f_* H => H");
    match f.full_and_faithful_witness() {
        Some(w) => {
            report.push_fail(OBL_FULLY_FAITHFUL, w);
            return Ok(report);
        }
        None => report.push_pass(OBL_FULLY_FAITHFUL, f.source_cat().object_count().pow(2)),
    }
    let ran = right_kan(f, h, cfg)?;
    let a_cat = f.source_cat();
    let mut counit = BTreeMap::new();
    for a in a_cat.objects() {
        let fa = f.ob(a);
        let id = f.target_cat().identity(fa).expect("identity");
        let at = ran.commas[fa]
            .find(a, id)
            .expect("(a, id) is a comma object");
        let leg = ran.cones[fa].legs[&at].clone();
        let mut ob = report.check(format!("counit iso at {a}"));
        ob.instance(leg.is_bijection(), || {
            Witness::new(
                [a.as_str()],
                format!("{} -> {} is not a bijection", leg.dom(), leg.cod()),
            )
        });
        counit.insert(a.clone(), leg);
    }
    let mut ob = report.check(OBL_COUNIT_NAT);
    for (m, arr) in a_cat.morphisms() {
        let lhs = h.mor(m).after(&counit[&arr.dom]);
        let rhs = counit[&arr.cod].after(ran.functor.mor(f.mor(m)));
        ob.instance(lhs.is_ok() && lhs == rhs, || {
            Witness::new([m.as_str()], "H(m) . ε ≠ ε . f_*H(fm)")
        });
    }
    Ok(report)
}

/// Every functor `C → Set` whose value sets are `{0, …, k−1}` with `k ≤ max`,
/// by brute force over sizes and morphism tables. Used to sample
/// presheaves for the adjointness checks.
pub fn small_set_functors(
    c: &Arc<FinCat>,
    max: usize,
    cfg: &EnumConfig,
) -> Result<Vec<SetFunctor>> {
    let objs: Vec<&String> = c.objects().collect();
    let mors: Vec<(&String, &String, &String)> = c
        .morphisms()
        .filter(|(m, _)| !c.is_identity(m))
        .map(|(m, a)| (m, &a.dom, &a.cod))
        .collect();
    let carrier = |k: usize| FinSetObj::new((0..k as i64).map(Atom::from));
    let mut out = Vec::new();
    let mut sizes = vec![0usize; objs.len()];
    loop {
        let objects: BTreeMap<String, FinSetObj> = objs
            .iter()
            .zip(&sizes)
            .map(|(x, k)| ((*x).clone(), carrier(*k)))
            .collect();
        let choices: Vec<Vec<FinSetMap>> = mors
            .iter()
            .map(|(_, d, t)| enumerate_maps(&objects[*d], &objects[*t], cfg))
            .collect::<Result<_>>()?;
        let mut idx = vec![0usize; choices.len()];
        if choices.iter().all(|c| !c.is_empty()) {
            loop {
                if out.len() as u64 >= cfg.cap {
                    return Err(Error::CapExceeded {
                        what: "set-valued functors".into(),
                        needed: format!("more than {}", cfg.cap),
                        cap: cfg.cap,
                    });
                }
                let morphisms: BTreeMap<String, FinSetMap> = mors
                    .iter()
                    .enumerate()
                    .map(|(k, (m, _, _))| ((*m).clone(), choices[k][idx[k]].clone()))
                    .collect();
                let g =
                    SetFunctor::with_implicit_identities(c.clone(), objects.clone(), morphisms)?;
                if validate_functor(&g).passed() {
                    out.push(g);
                }
                if !advance(&mut idx, &choices.iter().map(Vec::len).collect::<Vec<_>>()) {
                    break;
                }
            }
        }
        if !advance(&mut sizes, &vec![max + 1; objs.len()]) {
            break;
        }
    }
    Ok(out)
}

/// Odometer step; false once every digit has wrapped.
fn advance(idx: &mut [usize], radix: &[usize]) -> bool {
    for (d, r) in idx.iter_mut().zip(radix) {
        *d += 1;
        if *d < *r {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::fixtures::*;
    use crate::finset::parse_set;

    fn cfg() -> EnumConfig {
        EnumConfig::default()
    }

    /// A functor on A whose two maps are neither injective nor surjective.
    fn h_on_a(a: &Arc<FinCat>) -> SetFunctor {
        let set = |t: &str| parse_set(t).unwrap();
        let objects = BTreeMap::from([
            (s("2"), set("{a, b}")),
            (s("3"), set("{c}")),
            (s("4"), set("{x, y}")),
            (s("5"), set("{z, w}")),
        ]);
        let map = |d: &str, c: &str, pairs: &[(&str, &str)]| {
            let table = pairs
                .iter()
                .map(|(x, y)| (Atom::parse(x), Atom::parse(y)))
                .collect();
            FinSetMap::new(set(d), set(c), table).unwrap()
        };
        let morphisms = BTreeMap::from([
            (s("2<4"), map("{a, b}", "{x, y}", &[("a", "x"), ("b", "x")])),
            (s("3<5"), map("{c}", "{z, w}", &[("c", "w")])),
        ]);
        SetFunctor::with_implicit_identities(a.clone(), objects, morphisms).unwrap()
    }

    #[test]
    fn right_kan_values() {
        let (_, f) = geo();
        let h = h_on_a(f.source_cat());
        let ran = right_kan(&f, &h, &cfg()).unwrap();
        assert!(validate_functor(&ran.functor).passed());
        // no arrows out of 6 into A: the empty limit
        assert_eq!(ran.functor.ob("6").len(), 1);
        // (1 ↓ f) has initial objects 2 and 3: H2 × H3
        assert_eq!(ran.functor.ob("1").len(), 2);
        for a in ["2", "3", "4", "5"] {
            assert_eq!(ran.functor.ob(a).len(), h.ob(a).len());
        }
    }

    #[test]
    fn left_kan_values() {
        let (_, f) = geo();
        let g = h_on_a(f.source_cat());
        let lan = left_kan(&f, &g, &cfg()).unwrap();
        assert!(validate_functor(&lan.functor).passed());
        assert!(lan.functor.ob("1").is_empty());
        assert_eq!(lan.functor.ob("6").len(), g.ob("4").len() + g.ob("5").len());
    }

    #[test]
    fn counit_is_iso_for_inclusion() {
        let (_, f) = geo();
        let rep = counit_inclusion_check(&f, &h_on_a(f.source_cat()), &cfg()).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.obligations.len(), 6);
    }

    #[test]
    fn counit_check_refuses_non_full_functor() {
        // the discrete category on {0, 1} inside 0 < 1 misses hom(0, 1)
        let d = Arc::new(FinCat::discrete([s("0"), s("1")]));
        let f = Functor::inclusion(d.clone(), Arc::new(chain(2))).unwrap();
        let h = SetFunctor::constant(d, &FinSetObj::point());
        let rep = counit_inclusion_check(&f, &h, &cfg()).unwrap();
        assert!(!rep.obligation(OBL_FULLY_FAITHFUL).unwrap().passed());
    }

    #[test]
    fn adjointness_on_small_samples() {
        let (b, f) = geo();
        let a = f.source_cat();
        let mut on_source = small_set_functors(a, 1, &cfg()).unwrap();
        on_source.push(h_on_a(a));
        let on_target = vec![
            SetFunctor::constant(b.clone(), &FinSetObj::empty()),
            SetFunctor::constant(b.clone(), &FinSetObj::point()),
            SetFunctor::constant(b.clone(), &parse_set("{0, 1}").unwrap()),
            right_kan(&f, &h_on_a(a), &cfg()).unwrap().functor,
        ];
        let rep = check_kan_adjointness(&f, &on_source, &on_target, &cfg()).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn small_functor_count_on_a_chain() {
        // sizes (s, t) with t^s maps: 1+1+1 + 0+1+2 + 0+1+4
        let c = Arc::new(chain(2));
        assert_eq!(small_set_functors(&c, 2, &cfg()).unwrap().len(), 11);
    }
}
