use std::collections::{BTreeMap, BTreeSet};

use super::eval::simple_paths;
use super::stages::{annotated_stages, effective_stages};
use super::{ArrowKind, Diagram, Element, Item, Quant};
use crate::error::{Error, Result};

const PATH_CAP: u64 = 100_000;

/// Declaration indices in definition-before-use order; ties go to the
/// earlier declaration.
fn topological(d: &Diagram) -> Result<Vec<usize>> {
    let index: BTreeMap<&str, usize> = d
        .items
        .iter()
        .enumerate()
        .filter_map(|(i, item)| match item {
            Item::Layer(l) => Some((l.id.as_str(), i)),
            Item::Functor(f) => Some((f.id.as_str(), i)),
            Item::Node(n) => Some((n.id.as_str(), i)),
            Item::Arrow(a) => Some((a.id.as_str(), i)),
            _ => None,
        })
        .collect();
    let deps = |item: &Item| -> Vec<usize> {
        let mut ids: Vec<&str> = match item {
            Item::Functor(f) => vec![&f.src, &f.dst],
            Item::Node(n) => vec![&n.layer],
            Item::Arrow(a) if a.kind == ArrowKind::MapsTo => vec![&a.src],
            Item::Arrow(a) => vec![&a.src, &a.dst],
            _ => vec![],
        };
        let own = match item {
            Item::Node(n) => Some(n.id.as_str()),
            Item::Arrow(a) => Some(a.id.as_str()),
            _ => None,
        };
        if let Some(def) = own.and_then(|id| d.definer(id)) {
            ids.push(&def.id);
        }
        if let Item::Arrow(a) = item {
            if a.kind == ArrowKind::MapsTo {
                if let Some(f) = d.mapsto_functor(a) {
                    ids.push(&f.id);
                }
            }
        }
        ids.into_iter()
            .filter_map(|id| index.get(id).copied())
            .collect()
    };
    let nodes: Vec<usize> = index.values().copied().collect();
    let mut indegree: BTreeMap<usize, usize> = nodes.iter().map(|&i| (i, 0)).collect();
    let mut users: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in &nodes {
        for dep in deps(&d.items[i]) {
            *indegree.get_mut(&i).expect("node") += 1;
            users.entry(dep).or_default().push(i);
        }
    }
    let mut ready: BTreeSet<usize> = indegree
        .iter()
        .filter(|(_, &n)| n == 0)
        .map(|(&i, _)| i)
        .collect();
    let mut out = Vec::with_capacity(nodes.len());
    while let Some(i) = ready.pop_first() {
        out.push(i);
        for &u in users.get(&i).map(Vec::as_slice).unwrap_or(&[]) {
            let n = indegree.get_mut(&u).expect("node");
            *n -= 1;
            if *n == 0 {
                ready.insert(u);
            }
        }
    }
    if out.len() < nodes.len() {
        let stuck = nodes.iter().find(|i| !out.contains(i)).expect("stuck item");
        let name = index
            .iter()
            .find(|(_, &i)| i == *stuck)
            .map(|(n, _)| n.to_string())
            .unwrap_or_default();
        return Err(Error::CyclicLayer(name));
    }
    Ok(out)
}

/// The typing line for one declaration, if it gets one.
fn typing(d: &Diagram, item: &Item) -> Option<String> {
    let cat = |layer: &str| {
        d.layer(layer)
            .map(|l| l.category.clone())
            .unwrap_or_default()
    };
    let label = |id: &str| {
        d.labels()
            .get(id)
            .map(|s| s.to_string())
            .unwrap_or_else(|| id.to_string())
    };
    match item {
        Item::Layer(l) if l.functor_category().is_none() => {
            Some(format!("{} is a category", l.category))
        }
        Item::Functor(f) => Some(format!("{} : {} → {}", f.label, cat(&f.src), cat(&f.dst))),
        Item::Node(n) if d.definer(&n.id).is_none() => {
            let layer = d.layer(&n.layer)?;
            Some(match layer.functor_category() {
                Some((x, y)) => format!("{} : {x} → {y}", n.label),
                None => format!("{} ∈ {}", n.label, layer.category),
            })
        }
        Item::Arrow(a) if d.definer(&a.id).is_none() => match (a.kind, d.element(&a.src)) {
            (ArrowKind::Hom, _) => Some(format!(
                "{} : {} → {}",
                a.label,
                label(&a.src),
                label(&a.dst)
            )),
            (ArrowKind::Bij, Some(Element::Node(_))) => Some(format!(
                "{} : {} ↔ {}",
                a.label,
                label(&a.src),
                label(&a.dst)
            )),
            _ => None,
        },
        _ => None,
    }
}

fn item_id(item: &Item) -> Option<&str> {
    match item {
        Item::Node(n) => Some(&n.id),
        Item::Arrow(a) => Some(&a.id),
        _ => None,
    }
}

/// Equations stated by a diagram: classes of two or more parallel paths
/// linked by pairs that are not exempted, as sets of id paths plus text.
fn equations(d: &Diagram) -> Result<Vec<(BTreeSet<Vec<String>>, String)>> {
    let exempt: Vec<(&[String], &[String])> = d
        .noncommutes()
        .map(|n| (&n.left[..], &n.right[..]))
        .collect();
    let mut out = Vec::new();
    for l in d.layers() {
        let mut edges: Vec<(&str, &str, String, String)> = Vec::new();
        for a in d.arrows().filter(|a| a.kind != ArrowKind::MapsTo) {
            if !matches!(d.element(&a.src), Some(Element::Node(_)))
                || d.layer_of(&a.id) != Some(&l.id)
            {
                continue;
            }
            edges.push((&a.src, &a.dst, a.id.clone(), a.label.clone()));
            if a.kind == ArrowKind::Bij {
                edges.push((&a.dst, &a.src, a.id.clone(), format!("{}⁻¹", a.label)));
            }
        }
        let ends: Vec<(&str, &str)> = edges.iter().map(|e| (e.0, e.1)).collect();
        for paths in simple_paths(&ends, PATH_CAP)?.values() {
            let ids: Vec<Vec<String>> = paths
                .iter()
                .map(|p| p.iter().map(|&i| edges[i].2.clone()).collect())
                .collect();
            let mut class: Vec<usize> = (0..paths.len()).collect();
            let find = |class: &mut Vec<usize>, mut x: usize| {
                while class[x] != x {
                    x = class[x];
                }
                x
            };
            for i in 0..paths.len() {
                for j in i + 1..paths.len() {
                    let (pi, pj) = (&ids[i][..], &ids[j][..]);
                    if exempt
                        .iter()
                        .any(|(x, y)| (*x == pi && *y == pj) || (*x == pj && *y == pi))
                    {
                        continue;
                    }
                    let (ri, rj) = (find(&mut class, i), find(&mut class, j));
                    if ri != rj {
                        class[rj.max(ri)] = ri.min(rj);
                    }
                }
            }
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for i in 0..paths.len() {
                let r = find(&mut class, i);
                groups.entry(r).or_default().push(i);
            }
            for mut members in groups.into_values().filter(|g| g.len() > 1) {
                members.sort_by_key(|&i| std::cmp::Reverse(paths[i].len()));
                let text: Vec<String> = members
                    .iter()
                    .map(|&i| {
                        paths[i]
                            .iter()
                            .rev()
                            .map(|&e| edges[e].3.as_str())
                            .collect::<Vec<_>>()
                            .join(" ∘ ")
                    })
                    .collect();
                let set = members.iter().map(|&i| ids[i].clone()).collect();
                out.push((set, text.join(" = ")));
            }
        }
    }
    Ok(out)
}

/// Lines for the items introduced at one stage, with definitions placed
/// right after what they define.
fn stage_lines(d: &Diagram, order: &[usize], keep: impl Fn(&Item) -> bool) -> Vec<String> {
    let mut lines = Vec::new();
    for &i in order {
        let item = &d.items[i];
        if !keep(item) {
            continue;
        }
        lines.extend(typing(d, item));
        if let Some(id) = item_id(item) {
            lines.extend(
                d.defs()
                    .filter(|df| df.target == id)
                    .map(|df| format!("{} := {}", df.name, df.body)),
            );
        }
    }
    lines
}

/// Reads a diagram as a statement: the unquantified part becomes a
/// context of typings and definitions, each quantifier stage a clause,
/// and the paths that must agree become equations.
pub fn elaborate_context(d: &Diagram) -> Result<Vec<String>> {
    d.validate()?;
    for a in d.arrows().filter(|a| a.kind == ArrowKind::MapsTo) {
        if d.mapsto_functor(a).is_none() {
            return Err(Error::Malformed(format!(
                "arrow {}: no functor declared between its layers",
                a.id
            )));
        }
    }
    let ann = annotated_stages(d)?;
    let eff = effective_stages(d)?;
    let order = topological(d)?;
    let max = ann.values().map(|v| v.1).max().unwrap_or(0);
    let stage_of = |item: &Item| item_id(item).map_or(0, |id| eff[id]);

    let mut seen_eqs: BTreeSet<BTreeSet<Vec<String>>> = BTreeSet::new();
    let mut new_equations = |k: usize| -> Result<Vec<String>> {
        let mut sub = d.clone();
        sub.items.retain(|item| match item {
            Item::NonCommute(_) | Item::Layer(_) => true,
            other => stage_of(other) <= k,
        });
        sub.items.retain(|item| match item {
            Item::NonCommute(nc) => nc.left.iter().chain(&nc.right).all(|id| eff[id] <= k),
            _ => true,
        });
        let mut fresh = Vec::new();
        for (set, text) in equations(&sub)? {
            if seen_eqs.insert(set) {
                fresh.push(text);
            }
        }
        Ok(fresh)
    };

    let mut blocks: Vec<Vec<String>> = Vec::new();
    let mut context = stage_lines(d, &order, |item| stage_of(item) == 0);
    context.extend(new_equations(0)?);
    let context_len = context.len();
    let mut out: Vec<String> = context.into_iter().map(|l| format!("{l},")).collect();
    if max > 0 && context_len > 0 {
        out[0] = format!("In a context where: {}", out[0]);
    }
    for k in 1..=max {
        let quant = ann
            .values()
            .find(|v| v.1 == k)
            .map(|v| v.0)
            .expect("contiguous stages");
        let items = stage_lines(d, &order, |item| stage_of(item) == k);
        let eqs = new_equations(k)?;
        let phrase = match quant {
            Quant::Forall => "for all ",
            Quant::Exists => "there exists ",
            Quant::ExistsUniq => "there exists a unique ",
        };
        let mut block = Vec::new();
        let n = items.len();
        for (i, line) in items.into_iter().enumerate() {
            let prefix = if i == 0 { phrase } else { "" };
            let end = match (i + 1 == n, eqs.is_empty()) {
                (false, _) => " and",
                (true, true) => ",",
                (true, false) => " such that",
            };
            block.push(format!("{prefix}{line}{end}"));
        }
        block.extend(eqs.into_iter().map(|e| format!("{e},")));
        blocks.push(block);
    }
    out.extend(blocks.into_iter().flatten());
    if let Some(last) = out.last_mut() {
        if let Some(stripped) = last.strip_suffix(',') {
            *last = format!("{stripped}.");
        }
    }
    Ok(out)
}
