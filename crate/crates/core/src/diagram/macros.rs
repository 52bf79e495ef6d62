use std::collections::{BTreeMap, BTreeSet};

use super::stages::annotated_stages;
use super::{
    Arrow, ArrowKind, Def, Diagram, Element, Item, Macro, MacroUse, Node, NonCommute, StageAnn,
};
use crate::error::{Error, Result};

fn host_ids(d: &Diagram) -> BTreeSet<String> {
    d.items
        .iter()
        .filter_map(|i| match i {
            Item::Layer(l) => Some(l.id.clone()),
            Item::Functor(f) => Some(f.id.clone()),
            Item::Node(n) => Some(n.id.clone()),
            Item::Arrow(a) => Some(a.id.clone()),
            _ => None,
        })
        .collect()
}

fn check_args(d: &Diagram, m: &Macro, u: &MacroUse) -> Result<()> {
    if u.args.len() != m.params.len() {
        return Err(Error::Mismatch(format!(
            "{} takes {} arguments, {} given",
            m.name,
            m.params.len(),
            u.args.len()
        )));
    }
    for (p, a) in m.params.iter().zip(&u.args) {
        let param = m.body.element(p).expect("validated macro");
        let arg = d
            .element(a)
            .ok_or_else(|| Error::Mismatch(format!("{}: unknown argument {a}", m.name)))?;
        let same_kind = matches!(
            (param, arg),
            (Element::Node(_), Element::Node(_)) | (Element::Arrow(_), Element::Arrow(_))
        );
        if !same_kind {
            return Err(Error::Mismatch(format!(
                "{}: parameter {p} and argument {a} differ in kind",
                m.name
            )));
        }
        let param_layer = m.body.layer_of(p).unwrap_or_default();
        let arg_layer = d.layer_of(a).unwrap_or_default();
        if param_layer != arg_layer {
            return Err(Error::Mismatch(format!(
                "{}: parameter {p} lives in {param_layer}, argument {a} in {arg_layer}",
                m.name
            )));
        }
    }
    Ok(())
}

/// The body of `m` instantiated at `u`: parameters replaced by arguments,
/// other elements renamed apart, stages moved after `shift`.
fn instantiate(
    d: &Diagram,
    m: &Macro,
    u: &MacroUse,
    taken: &mut BTreeSet<String>,
    shift: usize,
) -> Result<Vec<Item>> {
    let stages = annotated_stages(&m.body)?;
    let mut rename: BTreeMap<String, String> = m
        .params
        .iter()
        .cloned()
        .zip(u.args.iter().cloned())
        .collect();
    for e in m.body.elements() {
        if rename.contains_key(e.id()) {
            continue;
        }
        let mut k = 1;
        while taken.contains(&format!("{}_{k}", e.id())) {
            k += 1;
        }
        let fresh = format!("{}_{k}", e.id());
        taken.insert(fresh.clone());
        rename.insert(e.id().to_string(), fresh);
    }
    let host_labels: BTreeMap<&str, &str> = d
        .elements()
        .filter(|e| !matches!(e, Element::Arrow(a) if a.kind == ArrowKind::MapsTo))
        .map(|e| (e.label(), e.id()))
        .collect();
    let r = |id: &String| rename.get(id).cloned().unwrap_or_else(|| id.clone());
    let ann = |id: &str, a: Option<StageAnn>| {
        a.map(|a| StageAnn {
            quant: a.quant,
            stage: Some(stages[id].1 + shift),
        })
    };
    let mut out = Vec::new();
    for item in &m.body.items {
        if let Some(id) = match item {
            Item::Node(n) => Some(&n.id),
            Item::Arrow(a) => Some(&a.id),
            _ => None,
        } {
            if m.params.contains(id) {
                continue;
            }
            // `|->` labels name functors, which are shared with the host
            let names_functor = matches!(item, Item::Arrow(a) if a.kind == ArrowKind::MapsTo);
            let label = m.body.element(id).expect("element").label();
            if let (false, Some(other)) = (names_functor, host_labels.get(label)) {
                return Err(Error::NameCapture {
                    macro_name: m.name.clone(),
                    detail: format!("{id} would be labelled {label}, already the label of {other}"),
                });
            }
        }
        out.push(match item {
            Item::Node(n) => Item::Node(Node {
                id: r(&n.id),
                layer: n.layer.clone(),
                label: n.label.clone(),
                ann: ann(&n.id, n.ann),
            }),
            Item::Arrow(a) => Item::Arrow(Arrow {
                id: r(&a.id),
                kind: a.kind,
                src: r(&a.src),
                dst: r(&a.dst),
                label: a.label.clone(),
                ann: ann(&a.id, a.ann),
            }),
            Item::NonCommute(nc) => Item::NonCommute(NonCommute {
                left: nc.left.iter().map(r).collect(),
                right: nc.right.iter().map(r).collect(),
            }),
            Item::Def(df) => Item::Def(Def {
                target: r(&df.target),
                name: df.name.clone(),
                body: df.body.clone(),
            }),
            Item::Layer(_) | Item::Functor(_) | Item::Macro(_) | Item::Use(_) => continue,
        });
    }
    Ok(out)
}

/// Replaces every `use name(...)` by the macro body, with parameters bound
/// to the arguments, the other elements given fresh ids and the macro's
/// stages renumbered after the host's last stage. The definition stays.
pub fn expand_annotation(d: &Diagram, name: &str) -> Result<Diagram> {
    let m = d
        .macros()
        .find(|m| m.name == name)
        .ok_or_else(|| Error::UndefinedMacro(name.to_string()))?;
    let shift = annotated_stages(d)?
        .values()
        .map(|v| v.1)
        .max()
        .unwrap_or(0);
    let mut taken = host_ids(d);
    let mut items = Vec::with_capacity(d.items.len());
    for item in &d.items {
        match item {
            Item::Use(u) if u.name == name => {
                check_args(d, m, u)?;
                items.extend(instantiate(d, m, u, &mut taken, shift)?);
            }
            other => items.push(other.clone()),
        }
    }
    let out = Diagram { items };
    out.validate()?;
    Ok(out)
}
