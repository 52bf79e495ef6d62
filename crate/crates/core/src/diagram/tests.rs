use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::cat::fixtures::{chain, idempotent_monoid};
use crate::cat::{FinCat, Functor, FunctorVal};
use crate::config::EnumConfig;
use crate::error::Error;

pub(crate) const UNIVERSAL: &str = r#"
layer LA in "𝐀"
layer LB in "𝐁"
functor R : LB -> LA "R"
node A : LA "A"
node B : LB "B"
node RB : LA "RB"
arrow mB : B |-> RB "R"
arrow eta : A -> RB "η"
node B2 : LB "B′" @forall(1)
node RB2 : LA "RB′"
arrow mB2 : B2 |-> RB2 "R"
arrow g : A -> RB2 "g" @forall(1)
arrow f : B -> B2 "f" @existsuniq(2)
arrow Rf : RB -> RB2 "Rf"
arrow mf : f |-> Rf "R"
"#;

const EQUALIZER: &str = r#"
layer L in "𝐂"
node A : L "A" @forall(1)
node B : L "B" @forall(1)
arrow f : A -> B "f" @forall(1)
arrow g : A -> B "g" @forall(1)
noncommute f ; g
node E : L "E" @exists(2)
arrow e : E -> A "e" @exists(2)
node X : L "X" @forall(3)
arrow x : X -> A "x" @forall(3)
arrow u : X -> E "u" @existsuniq(4)
"#;

const TRIANGLE: &str = r#"
layer L in "𝐂"
node a : L "a"
node b : L "b"
node c : L "c"
arrow p : a -> b "p"
arrow q : b -> c "q"
arrow r : a -> c "r"
"#;

fn table_model(layer: &str, c: FinCat) -> Model {
    let mut m = Model::default();
    m.layers
        .insert(layer.to_string(), LayerCat::Table(Arc::new(c)));
    m
}

fn bind(m: &mut Model, pairs: &[(&str, &str)]) {
    for (k, v) in pairs {
        m.bindings.insert(k.to_string(), v.to_string());
    }
}

#[test]
fn print_then_parse_is_identity() {
    for text in [UNIVERSAL, EQUALIZER, TRIANGLE] {
        let d = parse_diagram(text).unwrap();
        assert_eq!(parse_diagram(&print_diagram(&d)).unwrap(), d);
        assert_eq!(parse_diagram(&render_diagram(&d)).unwrap(), d);
    }
}

#[test]
fn labels_with_quotes_survive_printing() {
    let d = parse_diagram("layer L in \"C\"\nnode a : L \"say \\\"hi\\\" \\\\\"\n").unwrap();
    assert_eq!(d.node("a").unwrap().label, "say \"hi\" \\");
    assert_eq!(parse_diagram(&print_diagram(&d)).unwrap(), d);
}

#[test]
fn unknown_arrow_kind_is_reported_at_its_column() {
    let err =
        parse_diagram("layer L in \"C\"\nnode a : L \"a\"\narrow f : a => a \"f\"\n").unwrap_err();
    match err {
        Error::Parse { line, col, msg } => {
            assert_eq!((line, col), (3, 13));
            assert!(msg.contains("arrow kind"), "{msg}");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn dangling_endpoint_is_located() {
    let err =
        parse_diagram("layer L in \"C\"\nnode a : L \"a\"\narrow f : a -> zz \"f\"\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
}

#[test]
fn universal_arrow_has_three_stages() {
    let d = parse_diagram(UNIVERSAL).unwrap();
    let st = extract_stages(&d).unwrap();
    assert_eq!(st.len(), 3);
    assert_eq!(st[0].added, ["A", "B", "RB", "mB", "eta"]);
    assert_eq!(st[1].quant, Some(Quant::Forall));
    assert_eq!(st[1].added, ["B2", "RB2", "mB2", "g"]);
    assert_eq!(st[2].quant, Some(Quant::ExistsUniq));
    assert_eq!(st[2].added, ["f", "Rf", "mf"]);
    assert_eq!(st[2].diagram, d);
}

#[test]
fn bare_quantifiers_follow_the_default_numbering() {
    let bare = UNIVERSAL
        .replace("@forall(1)", "@forall")
        .replace("@existsuniq(2)", "@existsuniq");
    let a = extract_stages(&parse_diagram(&bare).unwrap()).unwrap();
    let b = extract_stages(&parse_diagram(UNIVERSAL).unwrap()).unwrap();
    let adds = |s: &[Stage]| s.iter().map(|x| x.added.clone()).collect::<Vec<_>>();
    assert_eq!(adds(&a), adds(&b));
    let mixed = UNIVERSAL.replace("@existsuniq(2)", "@existsuniq");
    assert!(matches!(
        extract_stages(&parse_diagram(&mixed).unwrap()),
        Err(Error::Stage(_))
    ));
}

#[test]
fn stage_gaps_and_early_dependencies_are_rejected() {
    let gap = UNIVERSAL.replace("@existsuniq(2)", "@existsuniq(3)");
    assert!(matches!(
        extract_stages(&parse_diagram(&gap).unwrap()),
        Err(Error::Stage(_))
    ));
    // g needs RB′, which only exists from stage 2 on
    let early = UNIVERSAL
        .replace("\"B′\" @forall(1)", "\"B′\" @forall(2)")
        .replace("@existsuniq(2)", "@existsuniq(3)");
    let err = extract_stages(&parse_diagram(&early).unwrap()).unwrap_err();
    assert!(
        matches!(err, Error::Stage(ref m) if m.starts_with('g')),
        "{err:?}"
    );
}

#[test]
fn universal_context_listing() {
    let d = parse_diagram(UNIVERSAL).unwrap();
    let lines = elaborate_context(&d).unwrap();
    assert_eq!(
        lines,
        [
            "In a context where: 𝐀 is a category,",
            "𝐁 is a category,",
            "R : 𝐁 → 𝐀,",
            "A ∈ 𝐀,",
            "B ∈ 𝐁,",
            "η : A → RB,",
            "for all B′ ∈ 𝐁 and",
            "g : A → RB′,",
            "there exists a unique f : B → B′ such that",
            "Rf ∘ η = g.",
        ]
    );
}

#[test]
fn empty_diagram_has_empty_context() {
    assert!(elaborate_context(&Diagram::default()).unwrap().is_empty());
}

#[test]
fn definitions_follow_their_targets() {
    let d = parse_diagram(
        "layer L in \"𝐂\"\nnode a : L \"a\"\ndef a \"a₀\" := \"λx. x\"\nnode b : L \"b\"\narrow h : a -> b \"h\"\n",
    )
    .unwrap();
    assert_eq!(
        elaborate_context(&d).unwrap(),
        [
            "𝐂 is a category,",
            "a ∈ 𝐂,",
            "a₀ := λx. x,",
            "b ∈ 𝐂,",
            "h : a → b."
        ]
    );
}

#[test]
fn triangle_commutes_iff_diagonal_is_the_composite() {
    let d = parse_diagram(TRIANGLE).unwrap();
    let mut m = table_model("L", chain(3));
    bind(
        &mut m,
        &[
            ("a", "0"),
            ("b", "1"),
            ("c", "2"),
            ("p", "0<1"),
            ("q", "1<2"),
            ("r", "0<2"),
        ],
    );
    let cfg = EnumConfig::default();
    let rep = check_commutativity(&d, &m, &cfg).unwrap();
    assert!(rep.passed(), "{rep}");
    assert_eq!(rep.obligation(OBL_COMMUTES).unwrap().checked, 1);

    let mut m = table_model("L", idempotent_monoid());
    bind(
        &mut m,
        &[
            ("a", "*"),
            ("b", "*"),
            ("c", "*"),
            ("p", "e"),
            ("q", "e"),
            ("r", "id_*"),
        ],
    );
    let rep = check_commutativity(&d, &m, &cfg).unwrap();
    let w = rep
        .obligation(OBL_COMMUTES)
        .unwrap()
        .witness
        .clone()
        .unwrap();
    assert_eq!(w.items, ["p.q", "r"]);
}

#[test]
fn noncommute_pairs_are_exempt() {
    let text = format!("{TRIANGLE}noncommute p.q ; r\n");
    let d = parse_diagram(&text).unwrap();
    let mut m = table_model("L", idempotent_monoid());
    bind(
        &mut m,
        &[
            ("a", "*"),
            ("b", "*"),
            ("c", "*"),
            ("p", "e"),
            ("q", "e"),
            ("r", "id_*"),
        ],
    );
    let rep = check_commutativity(&d, &m, &EnumConfig::default()).unwrap();
    assert!(rep.passed(), "{rep}");
    assert_eq!(rep.obligation(OBL_COMMUTES).unwrap().checked, 0);
}

#[test]
fn missing_binding_is_unassigned() {
    let d = parse_diagram(TRIANGLE).unwrap();
    let mut m = table_model("L", chain(3));
    bind(
        &mut m,
        &[
            ("a", "0"),
            ("b", "1"),
            ("c", "2"),
            ("p", "0<1"),
            ("q", "1<2"),
        ],
    );
    assert!(
        matches!(check_commutativity(&d, &m, &EnumConfig::default()), Err(Error::Unassigned(id)) if id == "r")
    );
}

#[test]
fn mapsto_cycle_is_reported() {
    let text = "layer L in \"C\"\nlayer M in \"D\"\nfunctor F : L -> M \"F\"\nfunctor G : M -> L \"G\"\n\
                node a : L \"a\"\nnode b : M \"b\"\narrow fa : a |-> b \"F\"\narrow gb : b |-> a \"G\"\n";
    let d = parse_diagram(text).unwrap();
    let mut m = table_model("L", chain(1));
    m.layers
        .insert("M".into(), LayerCat::Table(Arc::new(chain(1))));
    let id = Functor::identity(Arc::new(chain(1)));
    m.functors.insert("F".into(), FunctorVal::Table(id.clone()));
    m.functors.insert("G".into(), FunctorVal::Table(id));
    assert!(matches!(
        check_commutativity(&d, &m, &EnumConfig::default()),
        Err(Error::CyclicLayer(_))
    ));
}

#[test]
fn equalizers_exist_in_a_chain_but_not_in_the_idempotent_monoid() {
    let d = parse_diagram(EQUALIZER).unwrap();
    let cfg = EnumConfig::default();
    let out = evaluate_quantified(&d, &table_model("L", chain(2)), &cfg).unwrap();
    assert!(out.holds, "{:?}", out.trace);

    let out = evaluate_quantified(&d, &table_model("L", idempotent_monoid()), &cfg).unwrap();
    assert!(!out.holds);
    let cx: BTreeMap<String, String> = out.counterexample.unwrap().into_iter().collect();
    assert_eq!(cx["f"], "id_*");
    assert_eq!(cx["g"], "e");
}

#[test]
fn evaluation_is_the_same_sequentially_and_in_parallel() {
    let d = parse_diagram(EQUALIZER).unwrap();
    let m = table_model("L", idempotent_monoid());
    let a = evaluate_quantified(&d, &m, &EnumConfig::default().sequential()).unwrap();
    let b = evaluate_quantified(&d, &m, &EnumConfig::default().parallel()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn evaluation_respects_the_cap() {
    let d = parse_diagram(EQUALIZER).unwrap();
    let err =
        evaluate_quantified(&d, &table_model("L", chain(3)), &EnumConfig::with_cap(5)).unwrap_err();
    assert!(err.is_cap(), "{err:?}");
}

#[test]
fn universal_arrow_holds_for_an_identity_functor() {
    let d = parse_diagram(UNIVERSAL).unwrap();
    let c = Arc::new(chain(2));
    let mut m = table_model("LA", (*c).clone());
    m.layers.insert("LB".into(), LayerCat::Table(c.clone()));
    m.functors
        .insert("R".into(), FunctorVal::Table(Functor::identity(c)));
    bind(&mut m, &[("A", "0"), ("B", "0"), ("eta", "id_0")]);
    assert!(
        evaluate_quantified(&d, &m, &EnumConfig::default())
            .unwrap()
            .holds
    );
    // 0 → 1 is not universal from 0: nothing maps back to 0
    bind(&mut m, &[("B", "1"), ("eta", "0<1")]);
    assert!(
        !evaluate_quantified(&d, &m, &EnumConfig::default())
            .unwrap()
            .holds
    );
}

const UNIV_MACRO: &str = r#"
layer LA in "𝐀"
layer LB in "𝐁"
functor R : LB -> LA "R"
macro univ(A, C, RC, eta) := {
  node A : LA "A"
  node C : LB "C"
  node RC : LA "RC"
  arrow eta : A -> RC "η"
  node D : LB "B′" @forall(1)
  node RD : LA "RB′"
  arrow mD : D |-> RD "R"
  arrow g : A -> RD "g" @forall(1)
  arrow f : C -> D "f" @existsuniq(2)
  arrow Rf : RC -> RD "Rf"
  arrow mf : f |-> Rf "R"
}
node A : LA "A"
node B : LB "B"
node RB : LA "RB"
arrow mB : B |-> RB "R"
arrow eta : A -> RB "η"
use univ(A, B, RB, eta)
"#;

#[test]
fn macro_expansion_reproduces_the_universal_arrow_statement() {
    let d = parse_diagram(UNIV_MACRO).unwrap();
    let e = expand_annotation(&d, "univ").unwrap();
    assert!(e.arrow("g_1").is_some());
    assert_eq!(e.arrow("f_1").unwrap().src, "B");
    let expected = elaborate_context(&parse_diagram(UNIVERSAL).unwrap()).unwrap();
    assert_eq!(elaborate_context(&e).unwrap(), expected);
}

#[test]
fn macro_errors() {
    let d = parse_diagram(UNIV_MACRO).unwrap();
    assert!(matches!(
        expand_annotation(&d, "nope"),
        Err(Error::UndefinedMacro(_))
    ));
    let swapped = UNIV_MACRO.replace("use univ(A, B, RB, eta)", "use univ(B, A, RB, eta)");
    assert!(matches!(
        expand_annotation(&parse_diagram(&swapped).unwrap(), "univ"),
        Err(Error::Mismatch(_))
    ));
    let captured = UNIV_MACRO.replace("node B : LB \"B\"", "node B : LB \"B′\"");
    assert!(matches!(
        expand_annotation(&parse_diagram(&captured).unwrap(), "univ"),
        Err(Error::NameCapture { .. })
    ));
}

#[test]
fn unused_macro_changes_nothing() {
    let text = UNIV_MACRO.replace("use univ(A, B, RB, eta)\n", "");
    let d = parse_diagram(&text).unwrap();
    assert_eq!(expand_annotation(&d, "univ").unwrap(), d);
}

#[test]
fn macro_stages_come_after_the_host() {
    let text = UNIV_MACRO.replace(
        "node A : LA \"A\"\nnode B",
        "node A : LA \"A\"\nnode Z : LB \"Z\" @forall(1)\nnode B",
    );
    let e = expand_annotation(&parse_diagram(&text).unwrap(), "univ").unwrap();
    assert_eq!(e.node("D_1").unwrap().ann.unwrap().stage, Some(2));
    assert_eq!(e.arrow("f_1").unwrap().ann.unwrap().stage, Some(3));
    assert_eq!(extract_stages(&e).unwrap().len(), 4);
}
