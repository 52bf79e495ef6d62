use std::collections::BTreeMap;

use super::{Atom, FinSetMap, FinSetObj};
use crate::cat::SetFunctor;
use crate::config::EnumConfig;
use crate::error::{Error, Result};

/// Limit of a set-valued diagram: the compatible families, with projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex: FinSetObj,
    pub legs: BTreeMap<String, FinSetMap>,
    /// Decoded coordinates of every apex element.
    pub families: BTreeMap<Atom, BTreeMap<String, Atom>>,
}

/// Colimit of a set-valued diagram: classes of tagged elements, with injections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocone {
    pub apex: FinSetObj,
    pub legs: BTreeMap<String, FinSetMap>,
    /// Least tagged representative of every class.
    pub representatives: BTreeMap<Atom, (String, Atom)>,
}

pub fn encode_tuple(family: &BTreeMap<String, Atom>) -> Atom {
    let parts: Vec<String> = family.iter().map(|(j, x)| format!("{j}={x}")).collect();
    Atom::sym(format!("({})", parts.join(", ")))
}

pub fn encode_class(j: &str, x: &Atom) -> Atom {
    Atom::sym(format!("[{j}:{x}]"))
}

/// Backtracking over objects in sorted order; a morphism's constraint is
/// checked as soon as both of its ends are assigned.
pub fn limit_finset(d: &SetFunctor, cfg: &EnumConfig) -> Result<Cone> {
    let j = d.source_cat();
    let objs: Vec<&String> = j.objects().collect();
    let pos: BTreeMap<&str, usize> = objs
        .iter()
        .enumerate()
        .map(|(i, x)| (x.as_str(), i))
        .collect();
    // constraints[i]: morphisms whose later endpoint is objs[i]
    let mut constraints: Vec<Vec<(usize, usize, &FinSetMap)>> = vec![Vec::new(); objs.len()];
    for (m, a) in j.morphisms() {
        let (s, t) = (pos[a.dom.as_str()], pos[a.cod.as_str()]);
        constraints[s.max(t)].push((s, t, d.mor(m)));
    }

    let carriers: Vec<Vec<&Atom>> = objs.iter().map(|x| d.ob(x).iter().collect()).collect();
    let mut families = Vec::new();
    let mut current: Vec<&Atom> = Vec::with_capacity(objs.len());
    let mut nodes = 0u64;
    fn go<'a>(
        i: usize,
        carriers: &[Vec<&'a Atom>],
        constraints: &[Vec<(usize, usize, &FinSetMap)>],
        current: &mut Vec<&'a Atom>,
        out: &mut Vec<Vec<&'a Atom>>,
        nodes: &mut u64,
        cap: u64,
    ) -> Result<()> {
        if i == carriers.len() {
            out.push(current.clone());
            return Ok(());
        }
        for &x in &carriers[i] {
            *nodes += 1;
            if *nodes > cap {
                return Err(Error::CapExceeded {
                    what: "limit search".into(),
                    needed: format!("more than {cap} partial families"),
                    cap,
                });
            }
            current.push(x);
            let ok = constraints[i]
                .iter()
                .all(|&(s, t, map)| map.apply(current[s]) == Some(current[t]));
            if ok {
                go(i + 1, carriers, constraints, current, out, nodes, cap)?;
            }
            current.pop();
        }
        Ok(())
    }
    go(
        0,
        &carriers,
        &constraints,
        &mut current,
        &mut families,
        &mut nodes,
        cfg.cap,
    )?;

    let mut decoded = BTreeMap::new();
    for fam in families {
        let family: BTreeMap<String, Atom> = objs
            .iter()
            .zip(fam)
            .map(|(x, a)| ((*x).clone(), a.clone()))
            .collect();
        decoded.insert(encode_tuple(&family), family);
    }
    let apex = FinSetObj::new(decoded.keys().cloned());
    let legs = objs
        .iter()
        .map(|x| {
            let table = decoded
                .iter()
                .map(|(t, fam)| (t.clone(), fam[*x].clone()))
                .collect();
            let leg =
                FinSetMap::new(apex.clone(), d.ob(x).clone(), table).expect("projection is total");
            ((*x).clone(), leg)
        })
        .collect();
    Ok(Cone {
        apex,
        legs,
        families: decoded,
    })
}

/// Union-find over the tagged disjoint union; each class is named by its
/// least `(object, element)` pair.
pub fn colimit_finset(d: &SetFunctor, _cfg: &EnumConfig) -> Result<Cocone> {
    let j = d.source_cat();
    let mut tagged: Vec<(String, Atom)> = Vec::new();
    for x in j.objects() {
        tagged.extend(d.ob(x).iter().map(|a| (x.clone(), a.clone())));
    }
    tagged.sort();
    let index: BTreeMap<(String, Atom), usize> = tagged
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    let mut parent: Vec<usize> = (0..tagged.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (m, a) in j.morphisms() {
        for (x, y) in d.mor(m).table() {
            let p = find(&mut parent, index[&(a.dom.clone(), x.clone())]);
            let q = find(&mut parent, index[&(a.cod.clone(), y.clone())]);
            // the smaller index is the smaller tagged pair
            let (lo, hi) = if p < q { (p, q) } else { (q, p) };
            parent[hi] = lo;
        }
    }

    let mut representatives = BTreeMap::new();
    let mut class_of = Vec::with_capacity(tagged.len());
    for i in 0..tagged.len() {
        let r = find(&mut parent, i);
        let (rj, rx) = &tagged[r];
        let name = encode_class(rj, rx);
        representatives.insert(name.clone(), (rj.clone(), rx.clone()));
        class_of.push(name);
    }
    let apex = FinSetObj::new(representatives.keys().cloned());
    let mut tables: BTreeMap<String, BTreeMap<Atom, Atom>> =
        j.objects().map(|x| (x.clone(), BTreeMap::new())).collect();
    for (i, (x, a)) in tagged.iter().enumerate() {
        tables
            .get_mut(x)
            .expect("object")
            .insert(a.clone(), class_of[i].clone());
    }
    let legs = tables
        .into_iter()
        .map(|(x, table)| {
            let leg =
                FinSetMap::new(d.ob(&x).clone(), apex.clone(), table).expect("injection is total");
            (x, leg)
        })
        .collect();
    Ok(Cocone {
        apex,
        legs,
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::fixtures::*;
    use crate::cat::FinCat;
    use crate::finset::enumerate_maps;
    use std::sync::Arc;

    fn set(xs: &[i64]) -> FinSetObj {
        FinSetObj::new(xs.iter().map(|&x| Atom::from(x)))
    }

    fn discrete_two() -> SetFunctor {
        let j = Arc::new(FinCat::discrete([s("j"), s("k")]));
        let objects = [
            (s("j"), FinSetObj::new([Atom::sym("x")])),
            (s("k"), set(&[0, 1])),
        ]
        .into_iter()
        .collect();
        SetFunctor::with_implicit_identities(j, objects, BTreeMap::new()).unwrap()
    }

    #[test]
    fn empty_diagram() {
        let d = SetFunctor::constant(Arc::new(FinCat::discrete(Vec::<String>::new())), &set(&[1]));
        let lim = limit_finset(&d, &EnumConfig::default()).unwrap();
        assert_eq!(lim.apex.to_string(), "{()}");
        let colim = colimit_finset(&d, &EnumConfig::default()).unwrap();
        assert!(colim.apex.is_empty());
    }

    #[test]
    fn discrete_limit_is_product_and_colimit_is_sum() {
        let d = discrete_two();
        let lim = limit_finset(&d, &EnumConfig::default()).unwrap();
        assert_eq!(lim.apex.len(), 2);
        assert!(lim.apex.contains(&Atom::sym("(j=x, k=0)")));
        let colim = colimit_finset(&d, &EnumConfig::default()).unwrap();
        assert_eq!(colim.apex.len(), 3);
    }

    /// Chain `0 → 1` with a non-injective map: the colimit identifies along
    /// it and the limit is indexed by the source.
    fn chain_diagram() -> SetFunctor {
        let c = Arc::new(chain(2));
        let objects: BTreeMap<_, _> = [(s("0"), set(&[1, 2, 3])), (s("1"), set(&[7, 8]))]
            .into_iter()
            .collect();
        let m = FinSetMap::new(
            set(&[1, 2, 3]),
            set(&[7, 8]),
            [(1, 7), (2, 7), (3, 8)]
                .into_iter()
                .map(|(a, b)| (Atom::from(a), Atom::from(b)))
                .collect(),
        )
        .unwrap();
        SetFunctor::with_implicit_identities(c, objects, [(s("0<1"), m)].into_iter().collect())
            .unwrap()
    }

    #[test]
    fn chain_limit_and_colimit() {
        let d = chain_diagram();
        let lim = limit_finset(&d, &EnumConfig::default()).unwrap();
        assert_eq!(lim.apex.len(), 3);
        let colim = colimit_finset(&d, &EnumConfig::default()).unwrap();
        assert_eq!(colim.apex.to_string(), "{[0:1],[0:3]}");
    }

    #[test]
    fn limit_universal_on_small_cones() {
        let d = chain_diagram();
        let lim = limit_finset(&d, &EnumConfig::default()).unwrap();
        let cfg = EnumConfig::default();
        for n in 0..=2 {
            let apex = set(&(0..n).collect::<Vec<_>>());
            // a cone is its leg at 0; the leg at 1 is forced
            for leg0 in enumerate_maps(&apex, d.ob("0"), &cfg).unwrap() {
                let leg1 = d.mor("0<1").after(&leg0).unwrap();
                let mediating = enumerate_maps(&apex, &lim.apex, &cfg)
                    .unwrap()
                    .into_iter()
                    .filter(|u| {
                        lim.legs["0"].after(u).unwrap() == leg0
                            && lim.legs["1"].after(u).unwrap() == leg1
                    })
                    .count();
                assert_eq!(mediating, 1);
            }
        }
    }

    #[test]
    fn cap_is_reported() {
        let d = discrete_two();
        let err = limit_finset(&d, &EnumConfig::with_cap(1)).unwrap_err();
        assert!(err.is_cap());
    }
}
