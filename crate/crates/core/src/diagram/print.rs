use std::fmt::Write as _;

use super::{Diagram, Element, Item, StageAnn};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn ann(a: &Option<StageAnn>) -> String {
    match a {
        None => String::new(),
        Some(StageAnn { quant, stage: None }) => format!(" @{}", quant.keyword()),
        Some(StageAnn {
            quant,
            stage: Some(k),
        }) => format!(" @{}({k})", quant.keyword()),
    }
}

fn print_items(items: &[Item], indent: &str, out: &mut String) {
    for item in items {
        out.push_str(indent);
        match item {
            Item::Layer(l) => writeln!(out, "layer {} in {}", l.id, quote(&l.category)),
            Item::Functor(f) => writeln!(
                out,
                "functor {} : {} -> {} {}",
                f.id,
                f.src,
                f.dst,
                quote(&f.label)
            ),
            Item::Node(n) => writeln!(
                out,
                "node {} : {} {}{}",
                n.id,
                n.layer,
                quote(&n.label),
                ann(&n.ann)
            ),
            Item::Arrow(a) => writeln!(
                out,
                "arrow {} : {} {} {} {}{}",
                a.id,
                a.src,
                a.kind.token(),
                a.dst,
                quote(&a.label),
                ann(&a.ann)
            ),
            Item::NonCommute(nc) => writeln!(
                out,
                "noncommute {} ; {}",
                nc.left.join("."),
                nc.right.join(".")
            ),
            Item::Def(d) => writeln!(
                out,
                "def {} {} := {}",
                d.target,
                quote(&d.name),
                quote(&d.body)
            ),
            Item::Use(u) => writeln!(out, "use {}({})", u.name, u.args.join(", ")),
            Item::Macro(m) => {
                let _ = writeln!(out, "macro {}({}) := {{", m.name, m.params.join(", "));
                print_items(&m.body.items, &format!("{indent}  "), out);
                writeln!(out, "{indent}}}")
            }
        }
        .expect("writing to a String");
    }
}

/// Canonical text for a diagram; `parse_diagram` reads it back unchanged.
pub fn print_diagram(d: &Diagram) -> String {
    let mut out = String::new();
    print_items(&d.items, "", &mut out);
    out
}

fn short_ann(a: Option<StageAnn>) -> String {
    match a {
        None => String::new(),
        Some(StageAnn { quant, stage: None }) => format!("{quant} "),
        Some(StageAnn {
            quant,
            stage: Some(k),
        }) => format!("{quant}{k} "),
    }
}

/// A layered overview as a comment block (one column per layer, then the
/// arrows), followed by the canonical text. Comments are ignored by the
/// parser, so the result parses to the same diagram.
pub fn render_diagram(d: &Diagram) -> String {
    let columns: Vec<(String, Vec<String>)> = d
        .layers()
        .map(|l| {
            let cells = d
                .nodes()
                .filter(|n| n.layer == l.id)
                .map(|n| format!("{}{}", short_ann(n.ann), n.label))
                .collect();
            (l.category.clone(), cells)
        })
        .collect();
    let width = |s: &str| s.chars().count();
    let widths: Vec<usize> = columns
        .iter()
        .map(|(h, cells)| {
            cells
                .iter()
                .map(|c| width(c))
                .chain([width(h)])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let rows = columns.iter().map(|c| c.1.len()).max().unwrap_or(0);
    let mut out = String::new();
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - width(c))))
            .collect();
        format!("# {}", padded.join(" | ")).trim_end().to_string()
    };
    if !columns.is_empty() {
        out.push_str(&line(columns.iter().map(|c| c.0.as_str()).collect()));
        out.push('\n');
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        let _ = writeln!(out, "# {}", rule.join("-+-"));
        for r in 0..rows {
            out.push_str(&line(
                columns
                    .iter()
                    .map(|c| c.1.get(r).map(String::as_str).unwrap_or(""))
                    .collect(),
            ));
            out.push('\n');
        }
    }
    let labels = d.labels();
    let mut any_arrow = false;
    for a in d.arrows() {
        if !any_arrow {
            out.push_str("#\n");
            any_arrow = true;
        }
        let end = |id: &str| labels.get(id).copied().unwrap_or(id).to_string();
        let kind = match d.element(&a.src) {
            Some(Element::Arrow(_)) if a.kind.token() == "<->" => "<=>",
            _ => a.kind.token(),
        };
        let _ = writeln!(
            out,
            "# {}{} : {} {kind} {}",
            short_ann(a.ann),
            a.label,
            end(&a.src),
            end(&a.dst)
        );
    }
    if !out.is_empty() {
        out.push('\n');
    }
    out.push_str(&print_diagram(d));
    out
}
