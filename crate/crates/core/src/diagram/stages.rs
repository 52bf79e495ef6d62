use std::collections::{BTreeMap, BTreeSet};

use super::{ArrowKind, Diagram, Element, Item, Quant};
use crate::error::{Error, Result};

/// One quantifier stage: the subdiagram of everything available once the
/// first `index` quantifiers have been introduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub index: usize,
    /// `None` for stage 0, the unquantified context.
    pub quant: Option<Quant>,
    pub diagram: Diagram,
    /// Nodes and arrows first present at this stage, in declaration order.
    pub added: Vec<String>,
}

/// Stage numbers of annotated elements. Unnumbered annotations are allowed
/// only when none is numbered: a bare ∀ is stage 1 and a bare ∃! stage 2.
pub(crate) fn annotated_stages(d: &Diagram) -> Result<BTreeMap<String, (Quant, usize)>> {
    let anns: Vec<_> = d
        .elements()
        .filter_map(|e| e.ann().map(|a| (e.id(), a)))
        .collect();
    let numbered = anns.iter().filter(|(_, a)| a.stage.is_some()).count();
    if numbered != 0 && numbered != anns.len() {
        return Err(Error::Stage(
            "stage numbers must be given on every annotation or on none".into(),
        ));
    }
    let mut out = BTreeMap::new();
    for (id, a) in anns {
        let k = match (a.stage, a.quant) {
            (Some(k), _) => k,
            (None, Quant::Forall) => 1,
            (None, Quant::ExistsUniq) => 2,
            (None, Quant::Exists) => {
                return Err(Error::Stage(format!(
                    "{id}: a bare ∃ has no default stage; number it"
                )));
            }
        };
        out.insert(id.to_string(), (a.quant, k));
    }
    let used: BTreeSet<usize> = out.values().map(|v| v.1).collect();
    if let Some(&max) = used.iter().next_back() {
        if let Some(gap) = (1..=max).find(|k| !used.contains(k)) {
            return Err(Error::Stage(format!(
                "stage {gap} is empty but stage {max} is used"
            )));
        }
    }
    for k in used {
        let qs: BTreeSet<Quant> = out.values().filter(|v| v.1 == k).map(|v| v.0).collect();
        if qs.len() > 1 {
            let list: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
            return Err(Error::Stage(format!(
                "stage {k} mixes quantifiers {}",
                list.join(" and ")
            )));
        }
    }
    Ok(out)
}

/// What an element needs before it can exist: endpoints for arrows, the
/// source of a `|->`, and the `|->` arrow defining an image.
fn dependencies<'a>(d: &'a Diagram, e: Element<'a>) -> Vec<&'a str> {
    let mut deps = Vec::new();
    if let Some(def) = d.definer(e.id()) {
        deps.push(def.id.as_str());
    }
    if let Element::Arrow(a) = e {
        deps.push(&a.src);
        if a.kind != ArrowKind::MapsTo {
            deps.push(&a.dst);
        }
    }
    deps
}

/// The stage at which every node and arrow becomes available.
pub(crate) fn effective_stages(d: &Diagram) -> Result<BTreeMap<String, usize>> {
    let ann = annotated_stages(d)?;
    let mut eff: BTreeMap<String, usize> = d
        .elements()
        .map(|e| (e.id().to_string(), ann.get(e.id()).map_or(0, |v| v.1)))
        .collect();
    loop {
        let mut changed = false;
        for e in d.elements() {
            let need = dependencies(d, e)
                .into_iter()
                .map(|x| eff[x])
                .max()
                .unwrap_or(0);
            let cur = eff.get_mut(e.id()).expect("element");
            if need > *cur {
                *cur = need;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for (id, (q, k)) in &ann {
        if eff[id] > *k {
            return Err(Error::Stage(format!(
                "{id} is annotated {q}{k} but depends on something introduced at stage {}",
                eff[id]
            )));
        }
    }
    Ok(eff)
}

fn item_stage(item: &Item, eff: &BTreeMap<String, usize>) -> usize {
    let of = |id: &String| eff.get(id).copied().unwrap_or(0);
    match item {
        Item::Node(n) => of(&n.id),
        Item::Arrow(a) => of(&a.id),
        Item::NonCommute(nc) => nc.left.iter().chain(&nc.right).map(of).max().unwrap_or(0),
        Item::Def(df) => of(&df.target),
        Item::Layer(_) | Item::Functor(_) | Item::Macro(_) | Item::Use(_) => 0,
    }
}

/// Splits an annotated diagram into its nested stages. Stage `k` holds
/// every item available once quantifiers up to `k` are bound; the last
/// stage is the whole diagram.
pub fn extract_stages(d: &Diagram) -> Result<Vec<Stage>> {
    d.validate()?;
    let ann = annotated_stages(d)?;
    let eff = effective_stages(d)?;
    let max = ann.values().map(|v| v.1).max().unwrap_or(0);
    let mut out = Vec::with_capacity(max + 1);
    for k in 0..=max {
        let items = d
            .items
            .iter()
            .filter(|i| item_stage(i, &eff) <= k)
            .cloned()
            .collect();
        let added = d
            .elements()
            .map(|e| e.id())
            .filter(|id| eff[*id] == k)
            .map(str::to_string)
            .collect();
        let quant = ann.values().find(|v| v.1 == k).map(|v| v.0);
        out.push(Stage {
            index: k,
            quant,
            diagram: Diagram { items },
            added,
        });
    }
    Ok(out)
}
