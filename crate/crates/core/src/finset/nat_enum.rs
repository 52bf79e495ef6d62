use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use super::{enumerate_maps, FinSetMap};
use crate::cat::{validate_nattrans, SetFunctor, SetNatTrans};
use crate::config::EnumConfig;
use crate::error::{Error, Result};
use crate::par;

struct Search<'a> {
    objs: Vec<&'a String>,
    candidates: Vec<Vec<FinSetMap>>,
    /// `squares[i]`: `(dom index, cod index, F m, G m)` for morphisms whose
    /// later endpoint in search order is `objs[i]`.
    squares: Vec<Vec<(usize, usize, &'a FinSetMap, &'a FinSetMap)>>,
    nodes: AtomicU64,
    cap: u64,
}

impl Search<'_> {
    fn square_ok(&self, i: usize, chosen: &[&FinSetMap]) -> bool {
        self.squares[i].iter().all(|&(s, t, fm, gm)| {
            // G m ∘ α_s = α_t ∘ F m, pointwise on F s
            fm.table().iter().all(|(a, fa)| {
                let left = chosen[s].apply(a).and_then(|x| gm.apply(x));
                left.is_some() && left == chosen[t].apply(fa)
            })
        })
    }

    fn bump(&self) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) + 1 > self.cap {
            return Err(Error::CapExceeded {
                what: "natural transformation search".into(),
                needed: format!("more than {} partial families", self.cap),
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn go<'s>(
        &'s self,
        i: usize,
        chosen: &mut Vec<&'s FinSetMap>,
        out: &mut Vec<Vec<&'s FinSetMap>>,
    ) -> Result<()> {
        if i == self.objs.len() {
            out.push(chosen.clone());
            return Ok(());
        }
        for cand in &self.candidates[i] {
            self.bump()?;
            chosen.push(cand);
            if self.square_ok(i, chosen) {
                self.go(i + 1, chosen, out)?;
            }
            chosen.pop();
        }
        Ok(())
    }
}

fn candidate_lists<'a>(
    f: &'a SetFunctor,
    g: &SetFunctor,
    cfg: &EnumConfig,
) -> Result<(Vec<&'a String>, Vec<Vec<FinSetMap>>)> {
    if f.source_cat() != g.source_cat() {
        return Err(Error::Mismatch("functors have different sources".into()));
    }
    let objs: Vec<&String> = f.source_cat().objects().collect();
    let candidates = objs
        .iter()
        .map(|x| enumerate_maps(f.ob(x), g.ob(x), cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok((objs, candidates))
}

fn assemble(
    f: &Arc<SetFunctor>,
    g: &Arc<SetFunctor>,
    objs: &[&String],
    comps: Vec<&FinSetMap>,
) -> SetNatTrans {
    let components: BTreeMap<String, FinSetMap> = objs
        .iter()
        .zip(comps)
        .map(|(x, m)| ((*x).clone(), m.clone()))
        .collect();
    SetNatTrans::new(f.clone(), g.clone(), components).expect("one component per object")
}

/// All natural transformations `F ⇒ G`, by depth-first search over objects
/// with the square condition checked as soon as both corners are fixed.
/// The top level is split across threads when `cfg.parallel` is set.
pub fn enumerate_nattrans_finset(
    f: &Arc<SetFunctor>,
    g: &Arc<SetFunctor>,
    cfg: &EnumConfig,
) -> Result<Vec<SetNatTrans>> {
    let (objs, candidates) = candidate_lists(f, g, cfg)?;
    let pos: BTreeMap<&str, usize> = objs
        .iter()
        .enumerate()
        .map(|(i, x)| (x.as_str(), i))
        .collect();
    let src = f.source_cat();
    let mut squares = vec![Vec::new(); objs.len()];
    for (m, a) in src.morphisms() {
        let (s, t) = (pos[a.dom.as_str()], pos[a.cod.as_str()]);
        squares[s.max(t)].push((s, t, f.mor(m), g.mor(m)));
    }
    let search = Search {
        objs: objs.clone(),
        candidates,
        squares,
        nodes: AtomicU64::new(0),
        cap: cfg.cap,
    };

    let mut found: Vec<SetNatTrans> = if objs.is_empty() {
        vec![assemble(f, g, &objs, Vec::new())]
    } else {
        let firsts: Vec<&FinSetMap> = search.candidates[0].iter().collect();
        let branches = par::map_vec(
            firsts,
            cfg.parallel,
            |first| -> Result<Vec<Vec<&FinSetMap>>> {
                search.bump()?;
                let mut out = Vec::new();
                let mut chosen = vec![first];
                if search.square_ok(0, &chosen) {
                    search.go(1, &mut chosen, &mut out)?;
                }
                Ok(out)
            },
        );
        let mut all = Vec::new();
        for b in branches {
            all.extend(b?.into_iter().map(|comps| assemble(f, g, &objs, comps)));
        }
        all
    };
    found.sort();
    Ok(found)
}

/// Reference implementation: every family in the full product of component
/// candidates, kept when the law check passes.
pub fn enumerate_nattrans_product(
    f: &Arc<SetFunctor>,
    g: &Arc<SetFunctor>,
    cfg: &EnumConfig,
) -> Result<Vec<SetNatTrans>> {
    let (objs, candidates) = candidate_lists(f, g, cfg)?;
    let total = candidates
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64));
    match total {
        Some(t) if t <= cfg.cap => {}
        _ => {
            let sizes: Vec<String> = candidates.iter().map(|c| c.len().to_string()).collect();
            return Err(Error::CapExceeded {
                what: "component product".into(),
                needed: sizes.join("*"),
                cap: cfg.cap,
            });
        }
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; objs.len()];
    if candidates.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        let comps: Vec<&FinSetMap> = idx
            .iter()
            .enumerate()
            .map(|(i, &k)| &candidates[i][k])
            .collect();
        let t = assemble(f, g, &objs, comps);
        if validate_nattrans(&t).passed() {
            out.push(t);
        }
        // odometer, last object fastest
        let mut i = objs.len();
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < candidates[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::fixtures::*;
    use crate::finset::{Atom, FinSetObj};

    #[test]
    fn constant_singletons_have_one() {
        let k = Arc::new(kite());
        let p = Arc::new(SetFunctor::constant(k, &FinSetObj::point()));
        let all = enumerate_nattrans_finset(&p, &p, &EnumConfig::default()).unwrap();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn empty_values_force_empty_components() {
        let c = Arc::new(chain(2));
        let two = FinSetObj::new([Atom::from(0), Atom::from(1)]);
        let f = Arc::new(SetFunctor::constant(c.clone(), &FinSetObj::empty()));
        let g = Arc::new(SetFunctor::constant(c, &two));
        let all = enumerate_nattrans_finset(&f, &g, &EnumConfig::default()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(
            all,
            enumerate_nattrans_product(&f, &g, &EnumConfig::default()).unwrap()
        );
    }

    #[test]
    fn search_agrees_with_product_both_modes() {
        let c = Arc::new(chain(3));
        let two = FinSetObj::new([Atom::from(0), Atom::from(1)]);
        let f = Arc::new(SetFunctor::constant(c.clone(), &two));
        let g = Arc::new(SetFunctor::constant(c, &two));
        let oracle = enumerate_nattrans_product(&f, &g, &EnumConfig::default()).unwrap();
        // constant functors: a natural family is one map used everywhere
        assert_eq!(oracle.len(), 4);
        for cfg in [
            EnumConfig::default().sequential(),
            EnumConfig::default().parallel(),
        ] {
            assert_eq!(enumerate_nattrans_finset(&f, &g, &cfg).unwrap(), oracle);
        }
    }

    #[test]
    fn cap_error_is_identical_across_modes() {
        let c = Arc::new(chain(3));
        let two = FinSetObj::new([Atom::from(0), Atom::from(1)]);
        let f = Arc::new(SetFunctor::constant(c, &two));
        for cfg in [
            EnumConfig::with_cap(5).sequential(),
            EnumConfig::with_cap(5).parallel(),
        ] {
            assert!(enumerate_nattrans_finset(&f, &f, &cfg)
                .unwrap_err()
                .is_cap());
        }
    }
}
