use std::collections::BTreeSet;

use diagcat::term::{
    brute_force_inhabitants, infer_inhabitants, is_normal, parse_type, type_of, Signature, Ty,
};

/// Every type over `{A, B}` with at most two nested constructors.
fn goals() -> Vec<Ty> {
    let mut level: Vec<Ty> = vec![Ty::atom("A"), Ty::atom("B")];
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

fn contexts() -> Vec<Vec<(String, Ty)>> {
    let t = |s: &str| parse_type(s).unwrap();
    vec![
        vec![],
        vec![("a".into(), t("A"))],
        vec![("f".into(), t("A -> B"))],
        vec![("p".into(), t("A * B")), ("g".into(), t("B -> A"))],
    ]
}

#[test]
fn goal_count() {
    assert_eq!(goals().len(), 202);
}

#[test]
fn search_matches_bottom_up_enumeration() {
    let sig = Signature::default();
    for ctx in contexts() {
        for goal in goals() {
            for depth in 1..=4 {
                let found = infer_inhabitants(&ctx, &goal, depth);
                for t in &found {
                    assert_eq!(type_of(&ctx, &sig, t).unwrap(), goal);
                    assert!(is_normal(t));
                    assert!(t.depth() <= depth);
                }
                let ours: BTreeSet<String> = found.iter().map(|t| t.canonical()).collect();
                assert_eq!(ours.len(), found.len(), "duplicates for {goal}");
                let oracle: BTreeSet<String> = brute_force_inhabitants(&ctx, &goal, depth)
                    .into_iter()
                    .collect();
                assert_eq!(ours, oracle, "goal {goal}, depth {depth}, ctx {ctx:?}");
            }
        }
    }
}
