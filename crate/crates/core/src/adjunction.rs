//! Adjunctions between table categories: transposition tables, the full
//! law check, and reconstruction of an adjunction from partial data.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cat::{opposite, validate_functor, FinCat, Functor};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Witness};
use crate::yoneda::is_universal_arrow_table;

/// `(A, B) ↦ (morphism ↦ transpose)`.
pub type TransposeTable = BTreeMap<(String, String), BTreeMap<String, String>>;

/// `L ⊣ R` with `L : A → B`, `R : B → A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionVal {
    pub l: Functor,
    pub r: Functor,
    /// `η_A : A → R L A`
    pub unit: BTreeMap<String, String>,
    /// `ε_B : L R B → B`
    pub counit: BTreeMap<String, String>,
    /// `h : A → R B` ↦ `h♭ : L A → B`
    pub flat: TransposeTable,
    /// `g : L A → B` ↦ `g♯ : A → R B`
    pub sharp: TransposeTable,
}

/// Which family of universal arrows is supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Per object `A`: `(L A, η_A)`, with `R` given.
    Unit,
    /// Per object `B`: `(R B, ε_B)`, with `L` given.
    Counit,
}

fn check_boundaries(l: &Functor, r: &Functor) -> Result<(Arc<FinCat>, Arc<FinCat>)> {
    let (a, b) = (l.source_cat().clone(), l.target_cat().clone());
    if **r.source_cat() != *b || **r.target_cat() != *a {
        return Err(Error::Mismatch(
            "L and R do not go between the same two categories".into(),
        ));
    }
    Ok((a, b))
}

fn comp(c: &FinCat, g: &str, f: &str) -> Result<String> {
    c.compose(g, f)
        .map(str::to_string)
        .ok_or_else(|| Error::Mismatch(format!("{g} . {f} is not defined")))
}

/// `h♭ = ε_B ∘ L h` and `g♯ = R g ∘ η_A` over every pair of objects.
pub fn flats_and_sharps(
    l: &Functor,
    r: &Functor,
    unit: &BTreeMap<String, String>,
    counit: &BTreeMap<String, String>,
) -> Result<(TransposeTable, TransposeTable)> {
    let (a, b) = check_boundaries(l, r)?;
    let mut flat = TransposeTable::new();
    let mut sharp = TransposeTable::new();
    for x in a.objects() {
        let eta = unit
            .get(x)
            .ok_or_else(|| Error::MalformedMap(format!("no unit component at {x}")))?;
        for y in b.objects() {
            let eps = counit
                .get(y)
                .ok_or_else(|| Error::MalformedMap(format!("no counit component at {y}")))?;
            let mut fl = BTreeMap::new();
            for h in a.hom(x, r.ob(y)) {
                fl.insert(h.clone(), comp(&b, eps, l.mor(h))?);
            }
            let mut sh = BTreeMap::new();
            for g in b.hom(l.ob(x), y) {
                sh.insert(g.clone(), comp(&a, r.mor(g), eta)?);
            }
            flat.insert((x.clone(), y.clone()), fl);
            sharp.insert((x.clone(), y.clone()), sh);
        }
    }
    Ok((flat, sharp))
}

impl AdjunctionVal {
    /// From `(L, R, η, ε)`; the transposition tables are computed.
    pub fn from_unit_counit(
        l: Functor,
        r: Functor,
        unit: BTreeMap<String, String>,
        counit: BTreeMap<String, String>,
    ) -> Result<AdjunctionVal> {
        let (flat, sharp) = flats_and_sharps(&l, &r, &unit, &counit)?;
        Ok(AdjunctionVal {
            l,
            r,
            unit,
            counit,
            flat,
            sharp,
        })
    }

    /// From `(L, R, η)`: each `ε_B` is the factorization of `id_{RB}` through
    /// the universal arrow `η_{RB}`.
    pub fn from_unit(
        l: Functor,
        r: Functor,
        unit: BTreeMap<String, String>,
    ) -> Result<AdjunctionVal> {
        let (_, b) = check_boundaries(&l, &r)?;
        let mut counit = BTreeMap::new();
        for y in b.objects() {
            let ry = r.ob(y);
            let eta = unit
                .get(ry)
                .ok_or_else(|| Error::MalformedMap(format!("no unit component at {ry}")))?;
            let check = is_universal_arrow_table(&r, ry, l.ob(ry), eta)?;
            let id = r.target_cat().identity(ry).expect("identity");
            let u = check
                .factor(y, id)
                .ok_or_else(|| not_universal(ry, &check))?;
            counit.insert(y.clone(), u.to_string());
        }
        AdjunctionVal::from_unit_counit(l, r, unit, counit)
    }

    /// From `(L, R, ε)`, dually.
    pub fn from_counit(
        l: Functor,
        r: Functor,
        counit: BTreeMap<String, String>,
    ) -> Result<AdjunctionVal> {
        let op = AdjunctionVal::from_unit(
            r.opposite_between(
                Arc::new(opposite(r.source_cat())),
                Arc::new(opposite(r.target_cat())),
            ),
            l.opposite_between(
                Arc::new(opposite(l.source_cat())),
                Arc::new(opposite(l.target_cat())),
            ),
            counit,
        )?;
        AdjunctionVal::from_unit_counit(l, r, op.counit, op.unit)
    }

    /// The dual adjunction `R^op ⊣ L^op`.
    fn dual(&self) -> AdjunctionVal {
        let a_op = Arc::new(opposite(self.l.source_cat()));
        let b_op = Arc::new(opposite(self.l.target_cat()));
        let swap = |t: &TransposeTable| {
            t.iter()
                .map(|((x, y), m)| ((y.clone(), x.clone()), m.clone()))
                .collect()
        };
        AdjunctionVal {
            l: self.r.opposite_between(b_op.clone(), a_op.clone()),
            r: self.l.opposite_between(a_op, b_op),
            unit: self.counit.clone(),
            counit: self.unit.clone(),
            flat: swap(&self.sharp),
            sharp: swap(&self.flat),
        }
    }
}

fn not_universal(object: &str, check: &crate::yoneda::UniversalCheck) -> Error {
    let row = check.first_failure().expect("failure exists");
    Error::NotUniversal {
        object: object.to_string(),
        detail: format!(
            "g = {} into R({}) has {} factorizations",
            row.g,
            row.object,
            row.factorizations.len()
        ),
    }
}

/// Builds the whole adjunction from one family of universal arrows.
///
/// With [`Side::Unit`], `functor` is `R : B → A` and `data[A] = (L A, η_A)`;
/// `L` on a morphism `f : A′ → A` is the unique `u` with
/// `R u ∘ η_{A′} = η_A ∘ f`, `♭` is read off the same factorizations, and
/// `ε_B = (id_{RB})♭`. With [`Side::Counit`], `functor` is `L` and
/// `data[B] = (R B, ε_B)`; the construction runs in the opposite categories.
pub fn adjunction_from_universal_arrows(
    functor: &Functor,
    data: &BTreeMap<String, (String, String)>,
    side: Side,
) -> Result<AdjunctionVal> {
    match side {
        Side::Unit => from_units(functor, data),
        Side::Counit => {
            let l = functor;
            let l_op = l.opposite_between(
                Arc::new(opposite(l.source_cat())),
                Arc::new(opposite(l.target_cat())),
            );
            Ok(from_units(&l_op, data)?.dual())
        }
    }
}

fn from_units(r: &Functor, data: &BTreeMap<String, (String, String)>) -> Result<AdjunctionVal> {
    let (b, a) = (r.source_cat().clone(), r.target_cat().clone());
    let mut checks = BTreeMap::new();
    for x in a.objects() {
        let (lx, eta) = data
            .get(x)
            .ok_or_else(|| Error::MalformedMap(format!("no universal arrow given at {x}")))?;
        if !b.has_object(lx) {
            return Err(Error::NotInSource(lx.clone()));
        }
        let check = is_universal_arrow_table(r, x, lx, eta)?;
        if !check.holds() {
            return Err(not_universal(x, &check));
        }
        checks.insert(x.clone(), check);
    }

    let l_objects: BTreeMap<String, String> = data
        .iter()
        .map(|(x, (lx, _))| (x.clone(), lx.clone()))
        .collect();
    let mut l_morphisms = BTreeMap::new();
    for (f, arr) in a.morphisms() {
        let (x2, x) = (&arr.dom, &arr.cod);
        let target = comp(&a, &data[x].1, f)?;
        let u = checks[x2].factor(&data[x].0, &target).expect("universal");
        l_morphisms.insert(f.clone(), u.to_string());
    }
    let l = Functor::new(a.clone(), b.clone(), l_objects, l_morphisms)?;
    let unit: BTreeMap<String, String> = data
        .iter()
        .map(|(x, (_, e))| (x.clone(), e.clone()))
        .collect();

    let mut counit = BTreeMap::new();
    for y in b.objects() {
        let ry = r.ob(y);
        let id = a.identity(ry).expect("identity");
        counit.insert(
            y.clone(),
            checks[ry].factor(y, id).expect("universal").to_string(),
        );
    }

    let mut flat = TransposeTable::new();
    let mut sharp = TransposeTable::new();
    for x in a.objects() {
        for y in b.objects() {
            let fl = a
                .hom(x, r.ob(y))
                .iter()
                .map(|h| {
                    (
                        h.clone(),
                        checks[x].factor(y, h).expect("universal").to_string(),
                    )
                })
                .collect();
            let sh = b
                .hom(l.ob(x), y)
                .iter()
                .map(|g| Ok((g.clone(), comp(&a, r.mor(g), &unit[x])?)))
                .collect::<Result<_>>()?;
            flat.insert((x.clone(), y.clone()), fl);
            sharp.insert((x.clone(), y.clone()), sh);
        }
    }
    Ok(AdjunctionVal {
        l,
        r: r.clone(),
        unit,
        counit,
        flat,
        sharp,
    })
}

pub const OBL_UNIT_TYPING: &str = "unit typing";
pub const OBL_COUNIT_TYPING: &str = "counit typing";
pub const OBL_UNIT_NAT: &str = "unit naturality";
pub const OBL_COUNIT_NAT: &str = "counit naturality";
pub const OBL_FLAT_SHARP: &str = "flat . sharp = id";
pub const OBL_SHARP_FLAT: &str = "sharp . flat = id";
pub const OBL_FLAT_NAT: &str = "flat naturality";
pub const OBL_SHARP_NAT: &str = "sharp naturality";
pub const OBL_TRIANGLE_L: &str = "triangle (eps L) . (L eta) = id";
pub const OBL_TRIANGLE_R: &str = "triangle (R eps) . (eta R) = id";
pub const OBL_FLAT_DEF: &str = "flat = eps . L(-)";
pub const OBL_SHARP_DEF: &str = "sharp = R(-) . eta";

/// Every law of an adjunction, exhaustively: functor laws of `L` and `R`,
/// typing and naturality of `η` and `ε`, mutual inverseness and naturality
/// of `♭`/`♯`, both triangle identities, and the defining equations of the
/// stored transposition tables.
pub fn verify_adjunction(adj: &AdjunctionVal) -> CheckReport {
    let mut report = CheckReport::new("adjunction");
    report.absorb("L ", validate_functor(&adj.l));
    report.absorb("R ", validate_functor(&adj.r));
    let (l, r) = (&adj.l, &adj.r);
    let (a, b) = (l.source_cat().clone(), l.target_cat().clone());
    let get = |t: &TransposeTable, x: &str, y: &str, m: &str| -> Option<String> {
        t.get(&(x.to_string(), y.to_string()))
            .and_then(|row| row.get(m))
            .cloned()
    };

    let mut ob = report.check(OBL_UNIT_TYPING);
    for x in a.objects() {
        let e = adj.unit.get(x);
        let ok = e.is_some_and(|e| a.dom(e) == Some(x) && a.cod(e) == Some(r.ob(l.ob(x))));
        ob.instance(ok, || {
            Witness::new([x.as_str()], format!("η_{x} does not go {x} -> RL{x}"))
        });
    }
    let unit_ok = !ob.failed();
    let mut ob = report.check(OBL_COUNIT_TYPING);
    for y in b.objects() {
        let e = adj.counit.get(y);
        let ok = e.is_some_and(|e| b.dom(e) == Some(l.ob(r.ob(y))) && b.cod(e) == Some(y));
        ob.instance(ok, || {
            Witness::new([y.as_str()], format!("ε_{y} does not go LR{y} -> {y}"))
        });
    }
    let counit_ok = !ob.failed();

    if unit_ok {
        let mut ob = report.check(OBL_UNIT_NAT);
        for (f, arr) in a.morphisms() {
            let lhs = a.compose(r.mor(l.mor(f)), &adj.unit[&arr.dom]);
            let rhs = a.compose(&adj.unit[&arr.cod], f);
            ob.instance(lhs.is_some() && lhs == rhs, || {
                Witness::new([f.as_str()], "RL f . η ≠ η . f")
            });
        }
    }
    if counit_ok {
        let mut ob = report.check(OBL_COUNIT_NAT);
        for (k, arr) in b.morphisms() {
            let lhs = b.compose(k, &adj.counit[&arr.dom]);
            let rhs = b.compose(&adj.counit[&arr.cod], l.mor(r.mor(k)));
            ob.instance(lhs.is_some() && lhs == rhs, || {
                Witness::new([k.as_str()], "k . ε ≠ ε . LR k")
            });
        }
    }

    let mut fs = report.check(OBL_FLAT_SHARP);
    for x in a.objects() {
        for y in b.objects() {
            for g in b.hom(l.ob(x), y) {
                let back = get(&adj.sharp, x, y, g).and_then(|s| get(&adj.flat, x, y, &s));
                fs.instance(back.as_deref() == Some(g.as_str()), || {
                    Witness::new(
                        [x.as_str(), y.as_str(), g.as_str()],
                        format!("(g♯)♭ = {}", back.as_deref().unwrap_or("undefined")),
                    )
                });
            }
        }
    }
    let mut sf = report.check(OBL_SHARP_FLAT);
    for x in a.objects() {
        for y in b.objects() {
            for h in a.hom(x, r.ob(y)) {
                let back = get(&adj.flat, x, y, h).and_then(|s| get(&adj.sharp, x, y, &s));
                sf.instance(back.as_deref() == Some(h.as_str()), || {
                    Witness::new(
                        [x.as_str(), y.as_str(), h.as_str()],
                        format!("(h♭)♯ = {}", back.as_deref().unwrap_or("undefined")),
                    )
                });
            }
        }
    }

    // (R k ∘ h ∘ f)♭ = k ∘ h♭ ∘ L f for f : A′ → A, h : A → R B, k : B → B′
    let mut fnat = report.check(OBL_FLAT_NAT);
    let mut snat_cases = Vec::new();
    for (f, fa) in a.morphisms() {
        for (k, ka) in b.morphisms() {
            let (x2, x, y, y2) = (&fa.dom, &fa.cod, &ka.dom, &ka.cod);
            for h in a.hom(x, r.ob(y)) {
                let lhs = a
                    .compose(h, f)
                    .and_then(|hf| a.compose(r.mor(k), hf))
                    .and_then(|m| get(&adj.flat, x2, y2, m));
                let rhs = get(&adj.flat, x, y, h)
                    .and_then(|hb| b.compose(&hb, l.mor(f)).map(str::to_string))
                    .and_then(|m| b.compose(k, &m).map(str::to_string));
                fnat.instance(lhs.is_some() && lhs == rhs, || {
                    Witness::new(
                        [f.as_str(), h.as_str(), k.as_str()],
                        format!("{lhs:?} vs {rhs:?}"),
                    )
                });
            }
            for g in b.hom(l.ob(x), y) {
                snat_cases.push((f, k, x2, x, y, y2, g));
            }
        }
    }
    // (k ∘ g ∘ L f)♯ = R k ∘ g♯ ∘ f for g : L A → B
    let mut snat = report.check(OBL_SHARP_NAT);
    for (f, k, x2, x, y, y2, g) in snat_cases {
        let lhs = b
            .compose(g, l.mor(f))
            .and_then(|gf| b.compose(k, gf))
            .and_then(|m| get(&adj.sharp, x2, y2, m));
        let rhs = get(&adj.sharp, x, y, g)
            .and_then(|gs| a.compose(&gs, f).map(str::to_string))
            .and_then(|m| a.compose(r.mor(k), &m).map(str::to_string));
        snat.instance(lhs.is_some() && lhs == rhs, || {
            Witness::new(
                [f.as_str(), g.as_str(), k.as_str()],
                format!("{lhs:?} vs {rhs:?}"),
            )
        });
    }

    if unit_ok && counit_ok {
        let mut tl = report.check(OBL_TRIANGLE_L);
        for x in a.objects() {
            let got = b.compose(&adj.counit[l.ob(x)], l.mor(&adj.unit[x]));
            let id = b.identity(l.ob(x));
            tl.instance(got.is_some() && got == id, || {
                Witness::new(
                    [x.as_str()],
                    format!("ε_L{x} . Lη_{x} = {}", got.unwrap_or("undefined")),
                )
            });
        }
        let mut tr = report.check(OBL_TRIANGLE_R);
        for y in b.objects() {
            let got = a.compose(r.mor(&adj.counit[y]), &adj.unit[r.ob(y)]);
            let id = a.identity(r.ob(y));
            tr.instance(got.is_some() && got == id, || {
                Witness::new(
                    [y.as_str()],
                    format!("Rε_{y} . η_R{y} = {}", got.unwrap_or("undefined")),
                )
            });
        }

        let mut fd = report.check(OBL_FLAT_DEF);
        for x in a.objects() {
            for y in b.objects() {
                for h in a.hom(x, r.ob(y)) {
                    let want = b.compose(&adj.counit[y], l.mor(h)).map(str::to_string);
                    let got = get(&adj.flat, x, y, h);
                    fd.instance(want.is_some() && want == got, || {
                        Witness::new(
                            [x.as_str(), y.as_str(), h.as_str()],
                            format!("stored {got:?}, ε . L h = {want:?}"),
                        )
                    });
                }
            }
        }
        let mut sd = report.check(OBL_SHARP_DEF);
        for x in a.objects() {
            for y in b.objects() {
                for g in b.hom(l.ob(x), y) {
                    let want = a.compose(r.mor(g), &adj.unit[x]).map(str::to_string);
                    let got = get(&adj.sharp, x, y, g);
                    sd.instance(want.is_some() && want == got, || {
                        Witness::new(
                            [x.as_str(), y.as_str(), g.as_str()],
                            format!("stored {got:?}, R g . η = {want:?}"),
                        )
                    });
                }
            }
        }
    }
    report
}

impl fmt::Display for AdjunctionVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "L on objects:")?;
        for (x, y) in self.l.object_map() {
            writeln!(f, "  {x} |-> {y}")?;
        }
        writeln!(f, "L on morphisms:")?;
        for (m, n) in self.l.morphism_map() {
            writeln!(f, "  {m} |-> {n}")?;
        }
        writeln!(f, "unit:")?;
        for (x, e) in &self.unit {
            writeln!(f, "  {x}: {e}")?;
        }
        writeln!(f, "counit:")?;
        for (y, e) in &self.counit {
            writeln!(f, "  {y}: {e}")?;
        }
        writeln!(f, "flat:")?;
        for ((x, y), row) in &self.flat {
            for (h, hb) in row {
                writeln!(f, "  ({x}, {y}) {h} |-> {hb}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::fixtures::*;

    fn galois() -> (Functor, Functor) {
        let p = Arc::new(chain(2));
        let q = Arc::new(chain(3));
        let incl = Functor::inclusion(p.clone(), q.clone()).unwrap();
        let objects = [("0", "0"), ("1", "1"), ("2", "1")]
            .map(|(a, b)| (s(a), s(b)))
            .into_iter()
            .collect();
        let morphisms = [("0<1", "0<1"), ("0<2", "0<1"), ("1<2", "id_1")]
            .map(|(a, b)| (s(a), s(b)))
            .into_iter()
            .collect();
        let trunc = Functor::with_implicit_identities(q, p, objects, morphisms).unwrap();
        (incl, trunc)
    }

    fn galois_data() -> BTreeMap<String, (String, String)> {
        [("0", "0", "id_0"), ("1", "1", "id_1")]
            .map(|(a, b, c)| (s(a), (s(b), s(c))))
            .into_iter()
            .collect()
    }

    #[test]
    fn identity_adjunction() {
        let c = Arc::new(kite());
        let id = Functor::identity(c.clone());
        let ids: BTreeMap<String, String> = c.identities().clone();
        let adj = AdjunctionVal::from_unit_counit(id.clone(), id, ids.clone(), ids).unwrap();
        assert!(verify_adjunction(&adj).passed());
        assert!(adj
            .flat
            .values()
            .all(|row| row.iter().all(|(h, hb)| h == hb)));
    }

    #[test]
    fn galois_reconstruction() {
        let (incl, trunc) = galois();
        let adj = adjunction_from_universal_arrows(&trunc, &galois_data(), Side::Unit).unwrap();
        assert_eq!(adj.l, incl);
        let rep = verify_adjunction(&adj);
        assert!(rep.passed(), "{rep}");
        let from_unit =
            AdjunctionVal::from_unit(incl.clone(), trunc.clone(), adj.unit.clone()).unwrap();
        assert_eq!(from_unit.counit, adj.counit);
        let from_counit = AdjunctionVal::from_counit(incl, trunc, adj.counit.clone()).unwrap();
        assert_eq!(from_counit.unit, adj.unit);
        assert!(verify_adjunction(&from_counit).passed());
    }

    #[test]
    fn galois_from_counits() {
        let (incl, trunc) = galois();
        let reference =
            adjunction_from_universal_arrows(&trunc, &galois_data(), Side::Unit).unwrap();
        let data = reference
            .counit
            .iter()
            .map(|(y, e)| (y.clone(), (trunc.ob(y).to_string(), e.clone())))
            .collect();
        let adj = adjunction_from_universal_arrows(&incl, &data, Side::Counit).unwrap();
        assert_eq!(adj.r, trunc);
        assert_eq!(adj, reference);
    }

    #[test]
    fn non_universal_data_names_the_object() {
        let (_, trunc) = galois();
        let mut data = galois_data();
        // 0 ↦ (1, 0<1) is not universal: g = id_0 cannot factor
        data.insert(s("0"), (s("1"), s("0<1")));
        match adjunction_from_universal_arrows(&trunc, &data, Side::Unit) {
            Err(Error::NotUniversal { object, .. }) => assert_eq!(object, "0"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn perturbed_counit_breaks_triangles() {
        let m = Arc::new(idempotent_monoid());
        let id = Functor::identity(m.clone());
        let unit = BTreeMap::from([(s("*"), s("id_*"))]);
        let counit = BTreeMap::from([(s("*"), s("e"))]);
        let adj = AdjunctionVal::from_unit_counit(id.clone(), id, unit, counit).unwrap();
        let rep = verify_adjunction(&adj);
        assert!(!rep.obligation(OBL_TRIANGLE_L).unwrap().passed());
        assert_eq!(
            rep.obligation(OBL_TRIANGLE_L)
                .unwrap()
                .witness
                .as_ref()
                .unwrap()
                .items,
            ["*"]
        );
    }
}
