use std::collections::BTreeSet;
use std::sync::Arc;

use diagcat::cat::{preorder_from_covers, validate_category, FinCat};
use diagcat::diagram::{parse_diagram, print_diagram, render_diagram};
use diagcat::finset::{
    enumerate_maps, enumerate_nattrans_finset, enumerate_nattrans_product, map_count, Atom,
    FinSetObj,
};
use diagcat::kan::small_set_functors;
use diagcat::yoneda::hom_cov_functor;
use diagcat::EnumConfig;
use proptest::prelude::*;

fn set(n: usize) -> FinSetObj {
    FinSetObj::new((0..n as i64).map(Atom::from))
}

/// A preorder on `0..n` from covers `i < j` with `i < j` numerically.
fn preorder() -> impl Strategy<Value = FinCat> {
    (1usize..=4).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let k = pairs.len();
        proptest::collection::vec(any::<bool>(), k).prop_map(move |keep| {
            let covers = pairs
                .iter()
                .zip(&keep)
                .filter(|(_, &b)| b)
                .map(|(&(i, j), _)| (i.to_string(), j.to_string()));
            preorder_from_covers((0..n).map(|i| i.to_string()), covers).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn maps_are_all_distinct_and_counted(x in 0usize..4, y in 0usize..4) {
        let maps = enumerate_maps(&set(x), &set(y), &EnumConfig::default()).unwrap();
        prop_assert_eq!(maps.len() as u64, map_count(&set(x), &set(y)).unwrap());
        let distinct: BTreeSet<_> = maps.iter().collect();
        prop_assert_eq!(distinct.len(), maps.len());
    }

    #[test]
    fn preorders_are_categories(c in preorder()) {
        let r = validate_category(&c);
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn nat_search_agrees_with_product_filter(c in preorder(), i in 0usize..64, j in 0usize..64) {
        let cfg = EnumConfig::default();
        let c = Arc::new(c);
        let mut functors: Vec<_> = small_set_functors(&c, 2, &cfg).unwrap().into_iter().map(Arc::new).collect();
        functors.extend(c.objects().map(|x| Arc::new(hom_cov_functor(&c, x).unwrap())));
        let (f, g) = (&functors[i % functors.len()], &functors[j % functors.len()]);
        let fast = enumerate_nattrans_finset(f, g, &cfg).unwrap();
        prop_assert_eq!(&fast, &enumerate_nattrans_product(f, g, &cfg).unwrap());
        prop_assert_eq!(&fast, &enumerate_nattrans_finset(f, g, &cfg.sequential()).unwrap());
    }
}

fn label() -> impl Strategy<Value = String> {
    proptest::string::string_regex(r#"[A-Za-z0-9 ′₀𝐀∘"\\−]{1,6}"#).unwrap()
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Source text of a random well-formed diagram: one or two layers, nodes,
/// and hom arrows between nodes of the same layer, some annotated ∀.
fn diagram_text() -> impl Strategy<Value = String> {
    (
        proptest::collection::vec((0usize..2, label(), any::<bool>()), 1..5),
        proptest::collection::vec((0usize..8, 0usize..8, label(), any::<bool>()), 0..5),
        label(),
    )
        .prop_map(|(nodes, arrows, cat)| {
            let mut text = format!("layer L0 in {}\nlayer L1 in \"𝐁\"\n", quote(&cat));
            for (i, (layer, l, q)) in nodes.iter().enumerate() {
                let ann = if *q { " @forall" } else { "" };
                text += &format!("node n{i} : L{layer} {}{ann}\n", quote(l));
            }
            for (k, (s, t, l, q)) in arrows.iter().enumerate() {
                let (s, t) = (s % nodes.len(), t % nodes.len());
                if nodes[s].0 != nodes[t].0 {
                    continue;
                }
                let ann = if *q { " @forall" } else { "" };
                text += &format!("arrow a{k} : n{s} -> n{t} {}{ann}\n", quote(l));
            }
            text
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_round_trips(text in diagram_text()) {
        let d = parse_diagram(&text).unwrap();
        prop_assert_eq!(&parse_diagram(&print_diagram(&d)).unwrap(), &d);
        prop_assert_eq!(&parse_diagram(&render_diagram(&d)).unwrap(), &d);
    }
}
