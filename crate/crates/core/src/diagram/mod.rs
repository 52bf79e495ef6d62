//! A textual language for commutative diagrams with layers, functor arrows,
//! quantifier stages and annotation macros.
//!
//! ```text
//! layer LA in "𝐀"
//! layer LB in "𝐁"
//! functor R : LB -> LA "R"
//! node A : LA "A"
//! node B : LB "B"
//! node RB : LA "RB"
//! arrow mB : B |-> RB "R"
//! arrow eta : A -> RB "η"
//! node B2 : LB "B′" @forall(1)
//! ```
//!
//! `->` arrows are morphisms inside one layer, `|->` arrows apply a declared
//! functor to a node or arrow, and `<->` arrows are isomorphisms (between
//! two nodes of a layer) or correspondences (between two arrows).

mod context;
mod eval;
mod macros;
mod model;
mod parse;
mod print;
mod stages;

pub use context::elaborate_context;
pub use eval::{
    check_commutativity, evaluate_quantified, EvalOutcome, OBL_BIJ, OBL_COMMUTES, OBL_MAPSTO,
};
pub use macros::expand_annotation;
pub use model::{LayerCat, Model, Val};
pub use parse::parse_diagram;
pub use print::{print_diagram, render_diagram};
pub use stages::{extract_stages, Stage};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quant {
    Forall,
    Exists,
    ExistsUniq,
}

impl Quant {
    pub fn keyword(self) -> &'static str {
        match self {
            Quant::Forall => "forall",
            Quant::Exists => "exists",
            Quant::ExistsUniq => "existsuniq",
        }
    }
}

impl fmt::Display for Quant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quant::Forall => "∀",
            Quant::Exists => "∃",
            Quant::ExistsUniq => "∃!",
        })
    }
}

/// `@forall(1)`; a missing number is filled in by the bare-quantifier rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageAnn {
    pub quant: Quant,
    pub stage: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowKind {
    Hom,
    MapsTo,
    Bij,
}

impl ArrowKind {
    pub fn token(self) -> &'static str {
        match self {
            ArrowKind::Hom => "->",
            ArrowKind::MapsTo => "|->",
            ArrowKind::Bij => "<->",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub id: String,
    pub category: String,
}

impl Layer {
    /// `[𝐁, 𝐒𝐞𝐭]`-style layers hold functors and natural transformations.
    pub fn functor_category(&self) -> Option<(&str, &str)> {
        let inner = self.category.strip_prefix('[')?.strip_suffix(']')?;
        let (a, b) = inner.split_once(',')?;
        Some((a.trim(), b.trim()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorDecl {
    pub id: String,
    pub src: String,
    pub dst: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub layer: String,
    pub label: String,
    pub ann: Option<StageAnn>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub kind: ArrowKind,
    pub src: String,
    pub dst: String,
    pub label: String,
    pub ann: Option<StageAnn>,
}

/// Two paths (arrow ids in traversal order) exempt from commuting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonCommute {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

/// `def target "name" := "body"`: a definition shown with its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Def {
    pub target: String,
    pub name: String,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Macro {
    pub name: String,
    pub params: Vec<String>,
    pub body: Diagram,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroUse {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Layer(Layer),
    Functor(FunctorDecl),
    Node(Node),
    Arrow(Arrow),
    NonCommute(NonCommute),
    Def(Def),
    Macro(Macro),
    Use(MacroUse),
}

/// A parsed diagram: its declarations in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagram {
    pub items: Vec<Item>,
}

/// A node or an arrow.
#[derive(Debug, Clone, Copy)]
pub enum Element<'a> {
    Node(&'a Node),
    Arrow(&'a Arrow),
}

impl<'a> Element<'a> {
    pub fn id(&self) -> &'a str {
        match self {
            Element::Node(n) => &n.id,
            Element::Arrow(a) => &a.id,
        }
    }

    pub fn label(&self) -> &'a str {
        match self {
            Element::Node(n) => &n.label,
            Element::Arrow(a) => &a.label,
        }
    }

    pub fn ann(&self) -> Option<StageAnn> {
        match self {
            Element::Node(n) => n.ann,
            Element::Arrow(a) => a.ann,
        }
    }
}

impl Diagram {
    pub fn layers(&self) -> impl Iterator<Item = &Layer> {
        self.items.iter().filter_map(|i| match i {
            Item::Layer(l) => Some(l),
            _ => None,
        })
    }

    pub fn functors(&self) -> impl Iterator<Item = &FunctorDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Functor(f) => Some(f),
            _ => None,
        })
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.items.iter().filter_map(|i| match i {
            Item::Node(n) => Some(n),
            _ => None,
        })
    }

    pub fn arrows(&self) -> impl Iterator<Item = &Arrow> {
        self.items.iter().filter_map(|i| match i {
            Item::Arrow(a) => Some(a),
            _ => None,
        })
    }

    pub fn noncommutes(&self) -> impl Iterator<Item = &NonCommute> {
        self.items.iter().filter_map(|i| match i {
            Item::NonCommute(n) => Some(n),
            _ => None,
        })
    }

    pub fn defs(&self) -> impl Iterator<Item = &Def> {
        self.items.iter().filter_map(|i| match i {
            Item::Def(d) => Some(d),
            _ => None,
        })
    }

    pub fn macros(&self) -> impl Iterator<Item = &Macro> {
        self.items.iter().filter_map(|i| match i {
            Item::Macro(m) => Some(m),
            _ => None,
        })
    }

    pub fn layer(&self, id: &str) -> Option<&Layer> {
        self.layers().find(|l| l.id == id)
    }

    pub fn functor(&self, id: &str) -> Option<&FunctorDecl> {
        self.functors().find(|f| f.id == id)
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes().find(|n| n.id == id)
    }

    pub fn arrow(&self, id: &str) -> Option<&Arrow> {
        self.arrows().find(|a| a.id == id)
    }

    pub fn element(&self, id: &str) -> Option<Element<'_>> {
        self.node(id)
            .map(Element::Node)
            .or_else(|| self.arrow(id).map(Element::Arrow))
    }

    pub fn elements(&self) -> impl Iterator<Item = Element<'_>> {
        self.items.iter().filter_map(|i| match i {
            Item::Node(n) => Some(Element::Node(n)),
            Item::Arrow(a) => Some(Element::Arrow(a)),
            _ => None,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The layer an element lives in; for an arrow, the layer of its source.
    pub fn layer_of(&self, id: &str) -> Option<&str> {
        match self.element(id)? {
            Element::Node(n) => Some(&n.layer),
            Element::Arrow(a) => self.layer_of(&a.src),
        }
    }

    /// The `|->` arrow defining `id`, if `id` is the image of something
    /// under a functor.
    pub fn definer(&self, id: &str) -> Option<&Arrow> {
        self.arrows()
            .find(|a| a.kind == ArrowKind::MapsTo && a.dst == id)
    }

    /// The functor declaration a `|->` arrow applies: the one named by its
    /// label, or the only functor between the two layers.
    pub fn mapsto_functor(&self, a: &Arrow) -> Option<&FunctorDecl> {
        if let Some(f) = self.functor(&a.label) {
            return Some(f);
        }
        let (src, dst) = (self.layer_of(&a.src)?, self.layer_of(&a.dst)?);
        let mut candidates = self.functors().filter(|f| f.src == src && f.dst == dst);
        let first = candidates.next()?;
        candidates.next().is_none().then_some(first)
    }

    /// Checks the structural invariants: unique ids, existing references,
    /// hom arrows inside one layer, well-formed `|->` and `<->` arrows, no
    /// stage annotations on `|->` or `<->` arrows, and well-formed macros.
    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for item in &self.items {
            let id = match item {
                Item::Layer(l) => &l.id,
                Item::Functor(f) => &f.id,
                Item::Node(n) => &n.id,
                Item::Arrow(a) => &a.id,
                _ => continue,
            };
            if !ids.insert(id.as_str()) {
                return Err(Error::Malformed(format!("{id} is declared twice")));
            }
        }
        for f in self.functors() {
            for l in [&f.src, &f.dst] {
                if self.layer(l).is_none() {
                    return Err(Error::Malformed(format!(
                        "functor {} refers to unknown layer {l}",
                        f.id
                    )));
                }
            }
        }
        for n in self.nodes() {
            if self.layer(&n.layer).is_none() {
                return Err(Error::Malformed(format!(
                    "node {} is in unknown layer {}",
                    n.id, n.layer
                )));
            }
        }
        for a in self.arrows() {
            self.validate_arrow(a)?;
        }
        for nc in self.noncommutes() {
            for id in nc.left.iter().chain(&nc.right) {
                if self.arrow(id).is_none() {
                    return Err(Error::Malformed(format!(
                        "noncommute path names unknown arrow {id}"
                    )));
                }
            }
        }
        for d in self.defs() {
            if self.element(&d.target).is_none() {
                return Err(Error::Malformed(format!(
                    "definition {} is attached to unknown {}",
                    d.name, d.target
                )));
            }
        }
        let mut names = BTreeSet::new();
        for m in self.macros() {
            if !names.insert(m.name.as_str()) {
                return Err(Error::Malformed(format!(
                    "macro {} is defined twice",
                    m.name
                )));
            }
            for p in &m.params {
                if m.body.element(p).is_none() {
                    return Err(Error::Malformed(format!(
                        "macro {} parameter {p} is not in its body",
                        m.name
                    )));
                }
            }
            let mut host_layers = self.clone();
            host_layers
                .items
                .retain(|i| matches!(i, Item::Layer(_) | Item::Functor(_)));
            host_layers.items.extend(
                m.body
                    .items
                    .iter()
                    .filter(|i| !matches!(i, Item::Layer(_) | Item::Functor(_)))
                    .cloned(),
            );
            host_layers.validate()?;
        }
        Ok(())
    }

    fn validate_arrow(&self, a: &Arrow) -> Result<()> {
        let bad = |msg: String| Err(Error::Malformed(format!("arrow {}: {msg}", a.id)));
        let (src, dst) = (self.element(&a.src), self.element(&a.dst));
        let (Some(src), Some(dst)) = (src, dst) else {
            let missing = if self.element(&a.src).is_none() {
                &a.src
            } else {
                &a.dst
            };
            return bad(format!("unknown endpoint {missing}"));
        };
        match a.kind {
            ArrowKind::Hom => {
                let (Element::Node(s), Element::Node(d)) = (src, dst) else {
                    return bad("-> arrows join two nodes".into());
                };
                if s.layer != d.layer {
                    return bad(format!(
                        "-> arrows stay in one layer, not {} to {}",
                        s.layer, d.layer
                    ));
                }
            }
            ArrowKind::Bij => {
                if a.ann.is_some() {
                    return bad("<-> arrows cannot carry stage annotations".into());
                }
                match (src, dst) {
                    (Element::Node(s), Element::Node(d)) if s.layer != d.layer => {
                        return bad("<-> between nodes stays in one layer".into());
                    }
                    (Element::Node(_), Element::Arrow(_))
                    | (Element::Arrow(_), Element::Node(_)) => {
                        return bad("<-> joins two nodes or two arrows".into());
                    }
                    _ => {}
                }
            }
            ArrowKind::MapsTo => {
                if a.ann.is_some() {
                    return bad("|-> arrows cannot carry stage annotations".into());
                }
                if matches!(src, Element::Node(_)) != matches!(dst, Element::Node(_)) {
                    return bad("|-> joins two nodes or two arrows".into());
                }
                if self
                    .arrows()
                    .filter(|b| b.kind == ArrowKind::MapsTo && b.dst == a.dst)
                    .count()
                    > 1
                {
                    return bad(format!("{} is the target of two |-> arrows", a.dst));
                }
            }
        }
        Ok(())
    }

    /// The same diagram with every stage annotation removed.
    pub fn erase_annotations(&self) -> Diagram {
        let items = self
            .items
            .iter()
            .map(|i| match i {
                Item::Node(n) => Item::Node(Node {
                    ann: None,
                    ..n.clone()
                }),
                Item::Arrow(a) => Item::Arrow(Arrow {
                    ann: None,
                    ..a.clone()
                }),
                other => other.clone(),
            })
            .collect();
        Diagram { items }
    }

    /// Labels of all nodes and arrows, keyed by id.
    pub fn labels(&self) -> BTreeMap<&str, &str> {
        self.elements().map(|e| (e.id(), e.label())).collect()
    }
}

#[cfg(test)]
mod tests;
