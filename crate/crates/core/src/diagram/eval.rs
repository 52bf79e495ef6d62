use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use super::stages::{annotated_stages, extract_stages, Stage};
use super::{ArrowKind, Diagram, Element, Model, Quant, Val};
use crate::config::EnumConfig;
use crate::error::{Error, Result};
use crate::par::map_vec;
use crate::report::{CheckReport, Witness};

pub const OBL_TYPING: &str = "typing";
pub const OBL_MAPSTO: &str = "functor images";
pub const OBL_BIJ: &str = "isomorphisms";
pub const OBL_COMMUTES: &str = "commutativity";

type Assignment = BTreeMap<String, Val>;

/// Nodes, `->` arrows and `<->` arrows between nodes carry values;
/// `|->` arrows and correspondences between arrows do not.
fn carries_value(d: &Diagram, e: Element<'_>) -> bool {
    match e {
        Element::Node(_) => true,
        Element::Arrow(a) => match a.kind {
            ArrowKind::Hom => true,
            ArrowKind::MapsTo => false,
            ArrowKind::Bij => matches!(d.element(&a.src), Some(Element::Node(_))),
        },
    }
}

fn valued<'a>(d: &'a Diagram) -> impl Iterator<Item = Element<'a>> {
    d.elements().filter(move |e| carries_value(d, *e))
}

fn layer<'a>(d: &'a Diagram, id: &str) -> &'a str {
    d.layer_of(id).expect("validated diagram")
}

/// Fills in whatever can be read from bindings or computed through `|->`
/// arrows; returns the ids still without a value.
fn fill(d: &Diagram, m: &Model, vals: &mut Assignment, bind: bool) -> Result<Vec<String>> {
    loop {
        let mut progress = false;
        for e in valued(d) {
            let id = e.id();
            if vals.contains_key(id) {
                continue;
            }
            let l = layer(d, id);
            let value = match (bind.then(|| m.bindings.get(id)).flatten(), e) {
                (Some(text), Element::Node(_)) => Some(m.read_value(l, text, None)?),
                (Some(text), Element::Arrow(a)) => match (vals.get(&a.src), vals.get(&a.dst)) {
                    (Some(x), Some(y)) => Some(m.read_value(l, text, Some((x, y)))?),
                    _ => None,
                },
                (None, _) => match d.definer(id) {
                    Some(def) => match vals.get(&def.src) {
                        Some(v) => {
                            let f = d.mapsto_functor(def).ok_or_else(|| {
                                Error::Model(format!(
                                    "cannot tell which functor {} applies",
                                    def.id
                                ))
                            })?;
                            Some(m.apply(&f.id, v)?)
                        }
                        None => None,
                    },
                    None => None,
                },
            };
            if let Some(v) = value {
                vals.insert(id.to_string(), v);
                progress = true;
            }
        }
        if !progress {
            return Ok(valued(d)
                .map(|e| e.id())
                .filter(|id| !vals.contains_key(*id))
                .map(str::to_string)
                .collect());
        }
    }
}

fn complete(d: &Diagram, m: &Model, vals: &mut Assignment, bind: bool) -> Result<()> {
    let missing = fill(d, m, vals, bind)?;
    if let Some(id) = missing
        .iter()
        .find(|id| d.definer(id).is_none() && !(bind && m.bindings.contains_key(*id)))
    {
        return Err(Error::Unassigned(id.clone()));
    }
    match missing.first() {
        Some(id) => Err(Error::CyclicLayer(id.clone())),
        None => Ok(()),
    }
}

struct Edge<'a> {
    from: &'a str,
    to: &'a str,
    id: &'a str,
    val: Val,
}

pub(super) type PathsByEnds<'a> = BTreeMap<(&'a str, &'a str), Vec<Vec<usize>>>;

/// Every path without repeated nodes (a path may return to its start),
/// grouped by endpoints.
pub(super) fn simple_paths<'a>(edges: &[(&'a str, &'a str)], cap: u64) -> Result<PathsByEnds<'a>> {
    let mut out: BTreeMap<(&str, &str), Vec<Vec<usize>>> = BTreeMap::new();
    let mut count = 0u64;
    let starts: std::collections::BTreeSet<&str> = edges.iter().map(|e| e.0).collect();
    for start in starts {
        let mut stack: Vec<(Vec<usize>, Vec<&str>)> = vec![(Vec::new(), vec![start])];
        while let Some((path, seen)) = stack.pop() {
            let here = *seen.last().expect("non-empty");
            if here == start && !path.is_empty() {
                continue;
            }
            for (i, &(_, to)) in edges.iter().enumerate().filter(|(_, e)| e.0 == here) {
                if seen[1..].contains(&to) {
                    continue;
                }
                count += 1;
                if count > cap {
                    return Err(Error::CapExceeded {
                        what: "diagram paths".into(),
                        needed: format!(">{cap}"),
                        cap,
                    });
                }
                let mut p = path.clone();
                p.push(i);
                out.entry((start, to)).or_default().push(p.clone());
                let mut s = seen.clone();
                s.push(to);
                stack.push((p, s));
            }
        }
    }
    for paths in out.values_mut() {
        paths.sort();
    }
    Ok(out)
}

fn report(d: &Diagram, m: &Model, vals: &Assignment, cfg: &EnumConfig) -> Result<CheckReport> {
    let mut rep = CheckReport::new("diagram");
    {
        let mut ob = rep.check(OBL_TYPING);
        for e in valued(d) {
            let l = layer(d, e.id());
            let v = &vals[e.id()];
            let (ok, want) = match e {
                Element::Node(_) => (m.is_object(l, v)?, format!("an object of {l}")),
                Element::Arrow(a) => {
                    let want = (vals[&a.src].clone(), vals[&a.dst].clone());
                    (
                        m.ends(l, v)?.as_ref() == Some(&want),
                        format!("a morphism {} -> {}", want.0, want.1),
                    )
                }
            };
            ob.instance(ok, || Witness::new([e.id()], format!("{v} is not {want}")));
        }
        if ob.failed() {
            return Ok(rep);
        }
    }
    {
        let mut ob = rep.check(OBL_MAPSTO);
        for a in d.arrows().filter(|a| a.kind == ArrowKind::MapsTo) {
            let (Some(x), Some(y)) = (vals.get(&a.src), vals.get(&a.dst)) else {
                continue;
            };
            let f = d.mapsto_functor(a).ok_or_else(|| {
                Error::Model(format!("cannot tell which functor {} applies", a.id))
            })?;
            let image = m.apply(&f.id, x)?;
            ob.instance(image == *y, || {
                Witness::new([a.id.as_str()], format!("{}({x}) = {image}, not {y}", f.id))
            });
        }
    }
    let mut inverses = BTreeMap::new();
    {
        let mut ob = rep.check(OBL_BIJ);
        for a in d.arrows().filter(|a| a.kind == ArrowKind::Bij) {
            let Some(v) = vals.get(&a.id) else { continue };
            let inv = m.inverse(layer(d, &a.id), v)?;
            ob.instance(inv.is_some(), || {
                Witness::new([a.id.as_str()], format!("{v} has no inverse"))
            });
            if let Some(inv) = inv {
                inverses.insert(a.id.as_str(), inv);
            }
        }
    }
    let mut ob = rep.check(OBL_COMMUTES);
    let exempt: Vec<(&[String], &[String])> = d
        .noncommutes()
        .map(|n| (&n.left[..], &n.right[..]))
        .collect();
    for l in d.layers() {
        let mut edges = Vec::new();
        for a in d
            .arrows()
            .filter(|a| a.kind != ArrowKind::MapsTo && vals.contains_key(&a.id))
        {
            if layer(d, &a.id) != l.id {
                continue;
            }
            edges.push(Edge {
                from: &a.src,
                to: &a.dst,
                id: &a.id,
                val: vals[&a.id].clone(),
            });
            if let Some(inv) = inverses.get(a.id.as_str()) {
                edges.push(Edge {
                    from: &a.dst,
                    to: &a.src,
                    id: &a.id,
                    val: inv.clone(),
                });
            }
        }
        let ends: Vec<(&str, &str)> = edges.iter().map(|e| (e.from, e.to)).collect();
        for paths in simple_paths(&ends, cfg.cap)?.values() {
            let mut composites = Vec::with_capacity(paths.len());
            for p in paths {
                let mut acc = edges[p[0]].val.clone();
                for &i in &p[1..] {
                    acc = m.compose(&l.id, &edges[i].val, &acc)?;
                }
                let ids: Vec<String> = p.iter().map(|&i| edges[i].id.to_string()).collect();
                composites.push((ids, acc));
            }
            for i in 0..composites.len() {
                for j in i + 1..composites.len() {
                    let (pi, vi) = &composites[i];
                    let (pj, vj) = &composites[j];
                    if exempt.iter().any(|(x, y)| {
                        (*x == &pi[..] && *y == &pj[..]) || (*x == &pj[..] && *y == &pi[..])
                    }) {
                        continue;
                    }
                    ob.instance(vi == vj, || {
                        Witness::new([pi.join("."), pj.join(".")], format!("{vi} ≠ {vj}"))
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// Checks a fully bound diagram against a model: values are well typed,
/// `|->` targets are functor images, `<->` arrows are invertible, and any
/// two distinct simple paths with the same ends compose to the same
/// morphism, except for pairs declared with `noncommute`.
pub fn check_commutativity(d: &Diagram, m: &Model, cfg: &EnumConfig) -> Result<CheckReport> {
    d.validate()?;
    let mut vals = Assignment::new();
    complete(d, m, &mut vals, true)?;
    report(d, m, &vals, cfg)
}

/// Result of evaluating a quantified diagram in a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalOutcome {
    pub holds: bool,
    pub trace: Vec<String>,
    /// For a failing statement, the outermost universally bound choices
    /// that refute it, as `(label, value)`.
    pub counterexample: Option<Vec<(String, String)>>,
}

struct Verdict {
    holds: bool,
    counterexample: Option<Vec<(String, String)>>,
}

struct Search<'a> {
    m: &'a Model,
    stages: Vec<Stage>,
    labels: BTreeMap<String, String>,
    bound: Vec<Vec<String>>,
    cfg: EnumConfig,
    visited: AtomicU64,
}

type Extension = (Vec<(String, String)>, Assignment);

impl Search<'_> {
    fn tick(&self) -> Result<()> {
        let n = self.visited.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.cfg.cap {
            let cap = self.cfg.cap;
            return Err(Error::CapExceeded {
                what: "quantifier extensions".into(),
                needed: format!(">{cap}"),
                cap,
            });
        }
        Ok(())
    }

    /// Commuting extensions of `vals` to stage `k`, in enumeration order.
    fn extensions(&self, k: usize, vals: &Assignment) -> Result<Vec<Extension>> {
        let mut out = Vec::new();
        self.extend(k, 0, vals.clone(), Vec::new(), &mut out)?;
        Ok(out)
    }

    fn extend(
        &self,
        k: usize,
        idx: usize,
        mut vals: Assignment,
        chosen: Vec<(String, String)>,
        out: &mut Vec<Extension>,
    ) -> Result<()> {
        let d = &self.stages[k].diagram;
        if idx == self.bound[k].len() {
            complete(d, self.m, &mut vals, true)?;
            if report(d, self.m, &vals, &self.cfg)?.passed() {
                out.push((chosen, vals));
            }
            return Ok(());
        }
        fill(d, self.m, &mut vals, true)?;
        let id = &self.bound[k][idx];
        let l = layer(d, id);
        let candidates = match d.element(id).expect("bound element") {
            Element::Node(_) => self.m.objects(l)?,
            Element::Arrow(a) => {
                let (Some(x), Some(y)) = (vals.get(&a.src), vals.get(&a.dst)) else {
                    return Err(Error::Unassigned(if vals.contains_key(&a.src) {
                        a.dst.clone()
                    } else {
                        a.src.clone()
                    }));
                };
                self.m.arrows(l, x, y, &self.cfg)?
            }
        };
        for v in candidates {
            self.tick()?;
            let mut next = vals.clone();
            let mut c = chosen.clone();
            c.push((self.labels[id].clone(), v.to_string()));
            next.insert(id.clone(), v);
            self.extend(k, idx + 1, next, c, out)?;
        }
        Ok(())
    }

    fn eval(&self, k: usize, vals: &Assignment) -> Result<Verdict> {
        if k == self.stages.len() {
            return Ok(Verdict {
                holds: true,
                counterexample: None,
            });
        }
        let quant = self.stages[k].quant.expect("quantified stage");
        let exts = self.extensions(k, vals)?;
        let results: Vec<(Vec<(String, String)>, Verdict)> = if k == 1 {
            // the outermost stage is scanned in full so both modes do the same work
            let verdicts = map_vec(exts, self.cfg.parallel, |(chosen, v)| {
                self.eval(k + 1, &v).map(|r| (chosen, r))
            });
            verdicts.into_iter().collect::<Result<_>>()?
        } else {
            let mut done = Vec::new();
            let mut successes = 0;
            for (chosen, v) in exts {
                let r = self.eval(k + 1, &v)?;
                successes += usize::from(r.holds);
                let stop = match quant {
                    Quant::Forall => !r.holds,
                    Quant::Exists => r.holds,
                    Quant::ExistsUniq => successes > 1,
                };
                done.push((chosen, r));
                if stop {
                    break;
                }
            }
            done
        };
        Ok(match quant {
            Quant::Forall => match results.into_iter().find(|r| !r.1.holds) {
                None => Verdict {
                    holds: true,
                    counterexample: None,
                },
                Some((mut chosen, r)) => {
                    chosen.extend(r.counterexample.unwrap_or_default());
                    Verdict {
                        holds: false,
                        counterexample: Some(chosen),
                    }
                }
            },
            Quant::Exists => Verdict {
                holds: results.iter().any(|r| r.1.holds),
                counterexample: None,
            },
            Quant::ExistsUniq => {
                let mut winners = results.into_iter().filter(|r| r.1.holds);
                let first = winners.next();
                match (first, winners.next()) {
                    (Some(_), None) => Verdict {
                        holds: true,
                        counterexample: None,
                    },
                    (None, _) => Verdict {
                        holds: false,
                        counterexample: None,
                    },
                    (Some(_), Some((second, _))) => Verdict {
                        holds: false,
                        counterexample: Some(second),
                    },
                }
            }
        })
    }
}

/// Decides a quantified diagram in a finite model. The unquantified part
/// is bound from the model and must commute; then each stage in turn
/// ranges over the commuting ways of choosing its new nodes and arrows
/// (objects in sorted order, identities before other morphisms).
pub fn evaluate_quantified(d: &Diagram, m: &Model, cfg: &EnumConfig) -> Result<EvalOutcome> {
    let stages = extract_stages(d)?;
    let ann = annotated_stages(d)?;
    if let Some(id) = ann.keys().find(|id| m.bindings.contains_key(*id)) {
        return Err(Error::Model(format!(
            "{id} is quantified and cannot be bound"
        )));
    }
    let base = &stages[0].diagram;
    let mut vals = Assignment::new();
    complete(base, m, &mut vals, true)?;
    let ctx = report(base, m, &vals, cfg)?;
    if !ctx.passed() {
        return Err(Error::Model(format!(
            "the unquantified part does not hold in the model:\n{ctx}"
        )));
    }
    let checked: usize = ctx.obligations.iter().map(|o| o.checked).sum();
    let mut trace = vec![format!("stage 0: context holds ({checked} checks)")];
    let bound = stages
        .iter()
        .map(|s| {
            let mut ids: Vec<&String> = s.added.iter().filter(|id| ann.contains_key(*id)).collect();
            ids.sort_by_key(|id| matches!(d.element(id), Some(Element::Arrow(_))));
            ids.into_iter().cloned().collect()
        })
        .collect();
    let labels = d
        .labels()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let search = Search {
        m,
        stages,
        labels,
        bound,
        cfg: *cfg,
        visited: AtomicU64::new(0),
    };
    let verdict = if search.stages.len() == 1 {
        Verdict {
            holds: true,
            counterexample: None,
        }
    } else {
        search.eval(1, &vals)?
    };
    for s in &search.stages[1..] {
        let names: Vec<&str> = search.bound[s.index]
            .iter()
            .map(|id| search.labels[id].as_str())
            .collect();
        trace.push(format!(
            "stage {} {}: {}",
            s.index,
            s.quant.expect("quantified"),
            names.join(", ")
        ));
    }
    trace.push(format!(
        "{} candidate choices examined",
        search.visited.load(Ordering::Relaxed)
    ));
    trace.push(if verdict.holds {
        "holds".into()
    } else {
        "fails".into()
    });
    Ok(EvalOutcome {
        holds: verdict.holds,
        trace,
        counterexample: verdict.counterexample,
    })
}
