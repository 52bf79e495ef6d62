use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use diagcat::adjunction::{
    adjunction_from_universal_arrows, verify_adjunction, AdjunctionVal, Side,
};
use diagcat::cat::{validate_category, validate_nattrans};
use diagcat::diagram::{
    check_commutativity, elaborate_context, evaluate_quantified, expand_annotation, extract_stages,
    parse_diagram, render_diagram, ArrowKind, Diagram, Model,
};
use diagcat::finset::split_top_level;
use diagcat::formats::{
    load_adj, load_fincat, load_functor, load_nattrans, load_set_functor, load_table_functor,
    load_yon, NatVal,
};
use diagcat::kan::{check_kan_adjointness, counit_inclusion_check, left_kan, right_kan};
use diagcat::term::{
    curry_howard_translate, infer_inhabitants, parse_type, reduction_graph, Signature, Ty,
};
use diagcat::yoneda::{check_yoneda_roundtrips, is_universal_arrow, Y0Instance};
use diagcat::{EnumConfig, Error, Result};

use crate::{AdjAction, Cli, Command, Format};

/// What a command prints, and whether its checks passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn new(text: impl Into<String>, passed: bool) -> Self {
        Outcome {
            text: text.into(),
            passed,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn load_diagram(path: &Path) -> Result<Diagram> {
    parse_diagram(&read(path)?)
}

fn lines(v: Vec<String>) -> String {
    v.into_iter().map(|l| l + "\n").collect()
}

/// `{f: A' -> A, x: B}` as a typing context.
pub fn parse_context(src: &str) -> Result<Vec<(String, Ty)>> {
    let inner = src.trim();
    let inner = inner
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(inner)
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(inner, ",")
        .into_iter()
        .map(|entry| {
            let (x, ty) = entry.split_once(':').ok_or_else(|| {
                Error::parse(
                    1,
                    1,
                    format!("expected `name: type`, got `{}`", entry.trim()),
                )
            })?;
            Ok((x.trim().to_string(), parse_type(ty)?))
        })
        .collect()
}

fn stages_text(d: &Diagram) -> Result<String> {
    let stages = extract_stages(d)?;
    let mut out = String::new();
    let labels = d.labels();
    let quantified = stages.iter().filter(|s| s.quant.is_some()).count();
    writeln!(out, "{quantified} quantifier stage(s)").unwrap();
    for s in &stages {
        let added: Vec<&str> = s
            .added
            .iter()
            .map(|id| labels.get(id.as_str()).copied().unwrap_or(id))
            .collect();
        let head = match s.quant {
            None => format!("stage {} (context)", s.index),
            Some(q) => format!("stage {} {q}", s.index),
        };
        let objects = s.diagram.nodes().count();
        let arrows = s
            .diagram
            .arrows()
            .filter(|a| a.kind != ArrowKind::MapsTo)
            .count();
        writeln!(
            out,
            "{head}: {}",
            if added.is_empty() {
                "-".to_string()
            } else {
                added.join(", ")
            }
        )
        .unwrap();
        writeln!(out, "  SQ{}: {objects} objects, {arrows} arrows", s.index).unwrap();
    }
    Ok(out)
}

fn eval(d: &Diagram, model: &Path, cfg: &EnumConfig) -> Result<Outcome> {
    let m = Model::load(model)?;
    if extract_stages(d)?.len() == 1 {
        let report = check_commutativity(d, &m, cfg)?;
        return Ok(Outcome::new(report.to_string(), report.passed()));
    }
    let out = evaluate_quantified(d, &m, cfg)?;
    let mut text = lines(out.trace.clone());
    if let Some(cx) = &out.counterexample {
        let cx: Vec<String> = cx.iter().map(|(l, v)| format!("{l} = {v}")).collect();
        writeln!(text, "counterexample: {}", cx.join(", ")).unwrap();
    }
    Ok(Outcome::new(text, out.holds))
}

fn kan(
    f: &Path,
    h: &Path,
    sources: &[impl AsRef<Path>],
    targets: &[impl AsRef<Path>],
    cfg: &EnumConfig,
) -> Result<Outcome> {
    let f = load_table_functor(f)?;
    let h = load_set_functor(h)?;
    let mut text = String::new();
    let ran = right_kan(&f, &h, cfg)?.functor;
    let lan = left_kan(&f, &h, cfg)?.functor;
    for b in f.target_cat().objects() {
        writeln!(text, "(f_* H)({b}) = {}", ran.ob(b)).unwrap();
    }
    for b in f.target_cat().objects() {
        writeln!(text, "(f^! H)({b}) = {}", lan.ob(b)).unwrap();
    }
    let counit = counit_inclusion_check(&f, &h, cfg)?;
    let mut passed = counit.passed();
    text.push_str(&counit.to_string());
    if !targets.is_empty() {
        let mut on_source = vec![h];
        for s in sources {
            on_source.push(load_set_functor(s.as_ref())?);
        }
        let on_target = targets
            .iter()
            .map(|t| load_set_functor(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let report = check_kan_adjointness(&f, &on_source, &on_target, cfg)?;
        passed &= report.passed();
        text.push_str(&report.to_string());
    }
    Ok(Outcome::new(text, passed))
}

fn adj(action: AdjAction, path: &Path) -> Result<Outcome> {
    let m = load_adj(path)?;
    let adj = match action {
        AdjAction::Verify => {
            let missing = |what: &str| Error::Malformed(format!("{}: no {what}", path.display()));
            AdjunctionVal::from_unit_counit(
                m.left.ok_or_else(|| missing("left functor"))?,
                m.right.ok_or_else(|| missing("right functor"))?,
                m.unit.ok_or_else(|| missing("unit"))?,
                m.counit.ok_or_else(|| missing("counit"))?,
            )?
        }
        AdjAction::Build => {
            let (side, data) = m.universal.ok_or_else(|| {
                Error::Malformed(format!("{}: no universal arrows", path.display()))
            })?;
            let functor = match side {
                Side::Unit => m.right,
                Side::Counit => m.left,
            }
            .ok_or_else(|| {
                Error::Malformed(format!("{}: the given functor is missing", path.display()))
            })?;
            adjunction_from_universal_arrows(&functor, &data, side)?
        }
    };
    let report = verify_adjunction(&adj);
    let text = match action {
        AdjAction::Verify => report.to_string(),
        AdjAction::Build => format!("{adj}{report}"),
    };
    Ok(Outcome::new(text, report.passed()))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    execute(&cli.command, cli.format, &cli.config())
}

pub fn execute(command: &Command, format: Format, cfg: &EnumConfig) -> Result<Outcome> {
    match command {
        Command::CheckCat { file } => {
            let r = validate_category(&load_fincat(file)?);
            Ok(Outcome::new(r.to_string(), r.passed()))
        }
        Command::CheckFun { file } => {
            let r = load_functor(file)?.validate();
            Ok(Outcome::new(r.to_string(), r.passed()))
        }
        Command::CheckNt { file } => {
            let r = match load_nattrans(file)? {
                NatVal::Table(n) => validate_nattrans(&n),
                NatVal::Set(n) => validate_nattrans(&n),
            };
            Ok(Outcome::new(r.to_string(), r.passed()))
        }
        Command::Stages { file } => {
            let d = load_diagram(file)?;
            let mut text = stages_text(&d)?;
            if format == Format::Context {
                text.push_str(&lines(elaborate_context(&d)?));
            }
            Ok(Outcome::new(text, true))
        }
        Command::Eval { file, model } => {
            let d = load_diagram(file)?;
            let mut out = eval(&d, model, cfg)?;
            if format == Format::Context {
                out.text = lines(elaborate_context(&d)?) + &out.text;
            }
            Ok(out)
        }
        Command::Context { file, expand } => {
            let mut d = load_diagram(file)?;
            if let Some(name) = expand {
                d = expand_annotation(&d, name)?;
            }
            Ok(Outcome::new(lines(elaborate_context(&d)?), true))
        }
        Command::Render { file } => Ok(Outcome::new(render_diagram(&load_diagram(file)?), true)),
        Command::Infer {
            context,
            goal,
            depth,
        } => {
            let ctx = parse_context(context)?;
            let goal = parse_type(goal)?;
            let found = infer_inhabitants(&ctx, &goal, *depth);
            let mut text = format!("proposition: {}\n", curry_howard_translate(&goal, &ctx));
            for t in &found {
                writeln!(text, "{}", t.pretty()).unwrap();
            }
            if found.is_empty() {
                writeln!(text, "no normal inhabitant up to depth {depth}").unwrap();
            }
            Ok(Outcome::new(text, !found.is_empty()))
        }
        Command::Reduce { term, sig } => {
            let sig = Signature::parse(&read(sig)?)?;
            let t = sig.term(term)?;
            let (graph, report) = reduction_graph(&t, &sig, cfg)?;
            let text = match format {
                Format::Graph => graph.to_dot(),
                _ => report.to_string(),
            };
            Ok(Outcome::new(text, report.passed()))
        }
        Command::Yoneda { file } => {
            let y = load_yon(file)?;
            let inst = Y0Instance::new(Arc::clone(&y.functor), y.set.clone(), &y.object, cfg)?;
            let report = check_yoneda_roundtrips(&inst, cfg)?;
            let mut text = report.to_string();
            if let Some(eta) = &y.eta {
                let u = is_universal_arrow(&y.functor, &y.set, &y.object, eta, cfg)?;
                writeln!(
                    text,
                    "eta = {eta} is {}universal",
                    if u.holds() { "" } else { "not " }
                )
                .unwrap();
            }
            Ok(Outcome::new(text, report.passed()))
        }
        Command::Kan {
            functor,
            values,
            sources,
            targets,
        } => kan(functor, values, sources, targets, cfg),
        Command::Adj { action, manifest } => adj(*action, manifest),
        Command::Examples { corpus } => crate::corpus::run_manifest(corpus.as_deref(), cfg),
    }
}
