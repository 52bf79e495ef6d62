//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use diagcat::adjunction::{adjunction_from_universal_arrows, verify_adjunction, AdjunctionVal};
use diagcat::adjunction::{
    OBL_FLAT_NAT, OBL_FLAT_SHARP, OBL_SHARP_FLAT, OBL_TRIANGLE_L, OBL_TRIANGLE_R,
};
use diagcat::cat::SetFunctor;
use diagcat::diagram::{extract_stages, parse_diagram, ArrowKind, Quant};
use diagcat::finset::{enumerate_nattrans_finset, enumerate_nattrans_product, FinSetObj};
use diagcat::formats::{load_adj, load_fincat, load_set_functor, load_table_functor};
use diagcat::kan::{check_kan_adjointness, counit_inclusion_check, left_kan, right_kan};
use diagcat::term::{brute_force_inhabitants, infer_inhabitants, parse_type, Ty};
use diagcat::yoneda::{check_yoneda_roundtrips, hom_cov_functor, Y0Instance};
use diagcat::{CheckReport, EnumConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn file(rel: &str) -> PathBuf {
    corpus().join(rel)
}

struct Run {
    code: i32,
    stdout: String,
    elapsed: Duration,
}

fn diagcat(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_diagcat"))
        .args(args)
        .current_dir(corpus())
        .output()
        .expect("diagcat runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        elapsed: start.elapsed(),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_passed(r: &CheckReport, names: &[&str]) -> Result<(), String> {
    for n in names {
        let ob = r
            .obligation(n)
            .ok_or_else(|| format!("{}: no obligation `{n}`", r.subject))?;
        ensure(ob.passed() && ob.checked > 0, || {
            format!("{}: `{n}` failed or checked nothing", r.subject)
        })?;
    }
    ensure(r.passed(), || r.to_string())
}

const LAWFUL: &[(&str, &str)] = &[
    ("check-cat", "kite.fincat"),
    ("check-cat", "chain2.fincat"),
    ("check-cat", "idem_monoid.fincat"),
    ("check-cat", "parallel.fincat"),
    ("check-cat", "galois/P.fincat"),
    ("check-cat", "galois/Q.fincat"),
    ("check-cat", "geo/A.fincat"),
    ("check-cat", "geo/B.fincat"),
    ("check-fun", "kite_F.fun"),
    ("check-fun", "chain2_F.fun"),
    ("check-fun", "chain2_swap.fun"),
    ("check-fun", "idem_monoid_id.fun"),
    ("check-fun", "galois/incl.fun"),
    ("check-fun", "galois/trunc.fun"),
    ("check-fun", "geo/f.fun"),
    ("check-fun", "geo/G.fun"),
    ("check-fun", "geo/H.fun"),
    ("check-fun", "geo/K.fun"),
    ("check-fun", "geo/L.fun"),
    ("check-nt", "kite_F_id.nt"),
    ("check-nt", "chain2_swap.nt"),
];

const MUTANTS: &[(&str, &str, &str)] = &[
    (
        "check-cat",
        "mutations/totality.fincat",
        "composition totality",
    ),
    (
        "check-cat",
        "mutations/associativity.fincat",
        "associativity",
    ),
    (
        "check-cat",
        "mutations/left_identity.fincat",
        "left identity",
    ),
    ("check-fun", "mutations/typing.fun", "typing"),
    ("check-fun", "mutations/respids.fun", "respids"),
    ("check-fun", "mutations/respcomp.fun", "respcomp"),
    ("check-nt", "mutations/sqcond.nt", "sqcond"),
];

fn law_suite() -> Outcome {
    for (cmd, f) in LAWFUL {
        let r = diagcat(&[cmd, f]);
        ensure(r.code == 0, || {
            format!("{cmd} {f} exited {}:\n{}", r.code, r.stdout)
        })?;
    }
    for (cmd, f, law) in MUTANTS {
        let r = diagcat(&[cmd, f]);
        ensure(r.code == 1, || format!("{cmd} {f} exited {}", r.code))?;
        let marker = format!("[FAIL] {law} witness (");
        let line = r
            .stdout
            .lines()
            .find(|l| l.contains(&marker))
            .ok_or_else(|| format!("{f}: no `{law}` witness"))?;
        ensure(!line.contains("witness ():"), || {
            format!("{f}: empty witness")
        })?;
    }
    Ok(format!(
        "{} lawful fixtures pass, {} mutants fail with witnesses",
        LAWFUL.len(),
        MUTANTS.len()
    ))
}

fn inhabitants(out: &str) -> Vec<&str> {
    out.lines()
        .filter(|l| !l.starts_with("proposition:"))
        .collect()
}

fn term_inference() -> Outcome {
    let r = diagcat(&["infer", "{f: A'->A}", "A'*B -> A*B", "--depth", "6"]);
    ensure(r.code == 0, || format!("infer exited {}", r.code))?;
    ensure(
        inhabitants(&r.stdout).contains(&"λp.(f(π p), π′ p)"),
        || r.stdout.clone(),
    )?;
    ensure(r.elapsed < Duration::from_secs(1), || {
        format!("took {:?}", r.elapsed)
    })?;
    let id = diagcat(&["infer", "{}", "A -> A"]);
    ensure(inhabitants(&id.stdout) == ["λx.x"], || id.stdout.clone())?;
    Ok(format!("found in {:?}; A -> A has exactly λx.x", r.elapsed))
}

fn reduction() -> Outcome {
    let r = diagcat(&["reduce", "g (add 2 3)", "--sig", "arith.sig"]);
    ensure(r.code == 0, || {
        format!("reduce exited {}:\n{}", r.code, r.stdout)
    })?;
    for want in [
        "terminating: yes",
        "unique normal form: yes",
        "locally confluent on graph: yes",
        "normal forms: 29\n",
    ] {
        ensure(r.stdout.contains(want), || {
            format!("missing `{}`:\n{}", want.trim(), r.stdout)
        })?;
    }
    let dot = diagcat(&[
        "reduce",
        "g (add 2 3)",
        "--sig",
        "arith.sig",
        "--format",
        "graph",
    ]);
    let nodes = dot.stdout.lines().filter(|l| l.contains("[label=")).count();
    Ok(format!("{nodes} terms, every path ends in 29"))
}

fn quantifier_stages() -> Outcome {
    let d =
        parse_diagram(&std::fs::read_to_string(file("equalizer.diag")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let stages = extract_stages(&d).map_err(|e| e.to_string())?;
    let quants: Vec<Quant> = stages.iter().filter_map(|s| s.quant).collect();
    ensure(
        quants
            == [
                Quant::Forall,
                Quant::Exists,
                Quant::Forall,
                Quant::ExistsUniq,
            ],
        || format!("{quants:?}"),
    )?;
    let size = |k: usize| {
        let d = &stages[k].diagram;
        (
            d.nodes().count(),
            d.arrows().filter(|a| a.kind != ArrowKind::MapsTo).count(),
        )
    };
    ensure(size(0) == (0, 0), || format!("SQ0 = {:?}", size(0)))?;
    ensure(size(1) == (2, 2), || format!("SQ1 = {:?}", size(1)))?;
    let yes = diagcat(&[
        "eval",
        "equalizer.diag",
        "--model",
        "equalizer_chain2.model",
    ]);
    ensure(yes.code == 0, || {
        format!("chain2: exit {}\n{}", yes.code, yes.stdout)
    })?;
    let no = diagcat(&[
        "eval",
        "equalizer.diag",
        "--model",
        "equalizer_monoid.model",
    ]);
    ensure(no.code == 1, || format!("monoid: exit {}", no.code))?;
    let cx = no
        .stdout
        .lines()
        .find(|l| l.starts_with("counterexample:"))
        .ok_or("no counterexample")?;
    Ok(format!(
        "∀∃∀∃!, SQ0 empty, SQ1 = 2+2; chain2 holds, monoid {cx}"
    ))
}

fn yoneda() -> Outcome {
    let cfg = EnumConfig::default();
    let kite = Arc::new(load_fincat(&file("kite.fincat")).map_err(|e| e.to_string())?);
    let f = Arc::new(load_set_functor(&file("kite_F.fun")).map_err(|e| e.to_string())?);
    let mut total = 0;
    for c in kite.objects() {
        let hom = Arc::new(hom_cov_functor(&kite, c).map_err(|e| e.to_string())?);
        let brute = enumerate_nattrans_product(&hom, &f, &cfg).map_err(|e| e.to_string())?;
        ensure(brute.len() == f.ob(c).len(), || {
            format!("|Nat(K({c},-), F)| = {} ≠ {}", brute.len(), f.ob(c).len())
        })?;
        for a in [
            FinSetObj::point(),
            diagcat::finset::parse_set("{p,q}").unwrap(),
        ] {
            let inst = Y0Instance::new(Arc::clone(&f), a, c, &cfg).map_err(|e| e.to_string())?;
            let r = check_yoneda_roundtrips(&inst, &cfg).map_err(|e| e.to_string())?;
            all_passed(
                &r,
                &[
                    diagcat::yoneda::OBL_ETA_ROUNDTRIP,
                    diagcat::yoneda::OBL_T_ROUNDTRIP,
                ],
            )?;
            total += r.obligations.iter().map(|o| o.checked).sum::<usize>();
        }
        let r = diagcat(&["yoneda", &format!("kite_yoneda_{c}.yon")]);
        ensure(r.code == 0, || r.stdout.clone())?;
    }
    Ok(format!(
        "{} objects, {total} round-trip instances",
        kite.object_count()
    ))
}

fn adjoint_triple() -> Outcome {
    let cfg = EnumConfig::default();
    let load = |n: &str| load_set_functor(&file(n)).map_err(|e| e.to_string());
    let f = load_table_functor(&file("geo/f.fun")).map_err(|e| e.to_string())?;
    let (g, h, k, l) = (
        load("geo/G.fun")?,
        load("geo/H.fun")?,
        load("geo/K.fun")?,
        load("geo/L.fun")?,
    );
    let small = |s: &SetFunctor| s.object_map().values().all(|x| x.len() <= 2);
    ensure([&g, &h, &k, &l].into_iter().all(small), || {
        "a value set has more than 2 elements".into()
    })?;
    let r = check_kan_adjointness(&f, &[g.clone(), h.clone()], &[k, l], &cfg)
        .map_err(|e| e.to_string())?;
    ensure(r.passed() && r.obligations.len() == 4, || r.to_string())?;
    let ran = right_kan(&f, &h, &cfg).map_err(|e| e.to_string())?.functor;
    ensure(ran.ob("6").len() == 1, || {
        format!("(f_*H)(6) = {}", ran.ob("6"))
    })?;
    let lan = left_kan(&f, &g, &cfg).map_err(|e| e.to_string())?.functor;
    ensure(lan.ob("1").is_empty(), || {
        format!("(f^!G)(1) = {}", lan.ob("1"))
    })?;
    let counit = counit_inclusion_check(&f, &h, &cfg).map_err(|e| e.to_string())?;
    let isos: Vec<_> = counit
        .obligations
        .iter()
        .filter(|o| o.name.starts_with("counit iso at"))
        .collect();
    ensure(
        counit.passed() && isos.len() == f.source_cat().object_count() && isos.len() == 4,
        || counit.to_string(),
    )?;
    Ok("hom counts and transpositions agree; (f_*H)(6) = 1 element, (f^!G)(1) = ∅, counit iso at 4 objects".into())
}

fn big_theorem() -> Outcome {
    let reference = load_adj(&file("galois/galois.adj")).map_err(|e| e.to_string())?;
    let reference = AdjunctionVal::from_unit_counit(
        reference.left.unwrap(),
        reference.right.unwrap(),
        reference.unit.unwrap(),
        reference.counit.unwrap(),
    )
    .map_err(|e| e.to_string())?;
    let names = [
        OBL_FLAT_SHARP,
        OBL_SHARP_FLAT,
        OBL_FLAT_NAT,
        OBL_TRIANGLE_L,
        OBL_TRIANGLE_R,
    ];
    for manifest in ["galois/galois_units.adj", "galois/galois_counits.adj"] {
        let m = load_adj(&file(manifest)).map_err(|e| e.to_string())?;
        let (side, data) = m.universal.clone().ok_or("no universal arrows")?;
        let given = match side {
            diagcat::adjunction::Side::Unit => m.right.unwrap(),
            diagcat::adjunction::Side::Counit => m.left.unwrap(),
        };
        let built =
            adjunction_from_universal_arrows(&given, &data, side).map_err(|e| e.to_string())?;
        ensure(built == reference, || {
            format!("{manifest} rebuilt a different adjunction:\n{built}")
        })?;
        all_passed(&verify_adjunction(&built), &names)?;
        let r = diagcat(&["adj", "build", manifest]);
        ensure(r.code == 0, || r.stdout.clone())?;
    }
    let bad = diagcat(&["adj", "verify", "galois/perturbed.adj"]);
    ensure(
        bad.code == 1 && bad.stdout.contains("[FAIL] triangle"),
        || bad.stdout.clone(),
    )?;
    Ok(
        "units and counits both rebuild inclusion ⊣ truncation; perturbed counit breaks a triangle"
            .into(),
    )
}

fn golden_contexts() -> Outcome {
    let mut sizes = Vec::new();
    for (diag, golden) in [
        ("univ_arrow.diag", "univ_arrow.context"),
        ("y0.diag", "y0.context"),
    ] {
        let want = std::fs::read_to_string(file(golden)).map_err(|e| e.to_string())?;
        let r = diagcat(&["context", diag]);
        ensure(r.code == 0 && r.stdout == want, || {
            format!("{diag} differs from {golden}:\n{}", r.stdout)
        })?;
        sizes.push(format!("{golden} ({} lines)", want.lines().count()));
    }
    Ok(sizes.join(", "))
}

fn goals() -> Vec<Ty> {
    let mut level = vec![Ty::atom("A"), Ty::atom("B")];
    for _ in 0..2 {
        let mut next = vec![Ty::atom("A"), Ty::atom("B")];
        for a in &level {
            for b in &level {
                next.push(Ty::arrow(a.clone(), b.clone()));
                next.push(Ty::prod(a.clone(), b.clone()));
            }
        }
        level = next;
    }
    level
}

fn oracles() -> Outcome {
    let t = |s: &str| parse_type(s).unwrap();
    let contexts: Vec<Vec<(String, Ty)>> = vec![
        vec![],
        vec![("f".into(), t("A -> B"))],
        vec![("p".into(), t("A * B")), ("g".into(), t("B -> A"))],
    ];
    let mut goals_checked = 0;
    for ctx in &contexts {
        for goal in goals() {
            for depth in 1..=4 {
                let ours: BTreeSet<String> = infer_inhabitants(ctx, &goal, depth)
                    .iter()
                    .map(|t| t.canonical())
                    .collect();
                let brute: BTreeSet<String> = brute_force_inhabitants(ctx, &goal, depth)
                    .into_iter()
                    .collect();
                ensure(ours == brute, || {
                    format!("{goal} at depth {depth}: {ours:?} vs {brute:?}")
                })?;
                goals_checked += 1;
            }
        }
    }

    let cfg = EnumConfig::default();
    let load = |n: &str| Arc::new(load_set_functor(&file(n)).unwrap());
    let kite = Arc::new(load_fincat(&file("kite.fincat")).unwrap());
    let mut kite_family = vec![load("kite_F.fun")];
    for c in kite.objects() {
        kite_family.push(Arc::new(hom_cov_functor(&kite, c).unwrap()));
    }
    let families = [
        kite_family,
        vec![load("chain2_F.fun"), load("chain2_swap.fun")],
        vec![load("geo/G.fun"), load("geo/H.fun")],
        vec![load("geo/K.fun"), load("geo/L.fun")],
    ];
    let mut pairs = 0;
    for family in &families {
        for x in family {
            for y in family {
                let fast = enumerate_nattrans_finset(x, y, &cfg).map_err(|e| e.to_string())?;
                let slow = enumerate_nattrans_product(x, y, &cfg).map_err(|e| e.to_string())?;
                ensure(fast == slow, || {
                    format!("{} vs {} transformations", fast.len(), slow.len())
                })?;
                let seq = enumerate_nattrans_finset(x, y, &cfg.sequential())
                    .map_err(|e| e.to_string())?;
                ensure(seq == fast, || {
                    "sequential and parallel enumeration differ".into()
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{goals_checked} search problems, {pairs} functor pairs"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("law suite", law_suite),
        ("term inference", term_inference),
        ("reduction graph", reduction),
        ("quantifier stages", quantifier_stages),
        ("Yoneda", yoneda),
        ("adjoint triple", adjoint_triple),
        ("adjunction from universal arrows", big_theorem),
        ("golden contexts", golden_contexts),
        ("oracle equivalence", oracles),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass in {:?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
