use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::sig::Pattern;
use super::{type_of, Signature, Tm, Ty};
use crate::config::EnumConfig;
use crate::error::Result;
use crate::par;

fn is_value(t: &Tm) -> bool {
    matches!(t, Tm::Const(_))
}

/// Head and arguments of an application spine.
fn spine(t: &Tm) -> (&Tm, Vec<&Tm>) {
    let mut args = Vec::new();
    let mut head = t;
    while let Tm::App(f, a) = head {
        args.push(&**a);
        head = f;
    }
    args.reverse();
    (head, args)
}

fn delta(t: &Tm, sig: &Signature, out: &mut Vec<Tm>) {
    let (Tm::Const(c), args) = spine(t) else {
        return;
    };
    if args.is_empty() {
        return;
    }
    for rule in sig
        .rules
        .iter()
        .filter(|r| &r.head == c && r.params.len() == args.len())
    {
        if rule.needs_values() && !args.iter().all(|a| is_value(a)) {
            continue;
        }
        let matched = rule.params.iter().zip(&args).all(|(p, a)| match p {
            Pattern::Var(_) => true,
            Pattern::Lit(l) => matches!(a, Tm::Const(k) if k == l),
        });
        if matched {
            let mut rhs = rule.rhs.clone();
            for (p, a) in rule.params.iter().zip(&args) {
                if let Pattern::Var(v) = p {
                    rhs = rhs.subst(v, a);
                }
            }
            out.push(rhs);
        }
    }
    if let (Some(op), [a, b]) = (sig.builtins.get(c), args.as_slice()) {
        if let (Some(x), Some(y)) = (a.as_numeral(), b.as_numeral()) {
            if let Some(r) = op.apply(x, y) {
                out.push(Tm::numeral(r));
            }
        }
    }
}

fn contract_all(t: &Tm, sig: &Signature, out: &mut Vec<Tm>) {
    match t {
        Tm::App(f, a) => {
            if let Tm::Lam(x, _, b) = &**f {
                out.push(b.subst(x, a));
            }
        }
        Tm::Proj1(p) => {
            if let Tm::Pair(a, _) = &**p {
                out.push((**a).clone());
            }
        }
        Tm::Proj2(p) => {
            if let Tm::Pair(_, b) = &**p {
                out.push((**b).clone());
            }
        }
        _ => {}
    }
    delta(t, sig, out);

    let mut sub = Vec::new();
    match t {
        Tm::Var(_) | Tm::Const(_) => {}
        Tm::Lam(x, ty, b) => {
            contract_all(b, sig, &mut sub);
            out.extend(sub.drain(..).map(|b| Tm::lam(x.clone(), ty.clone(), b)));
        }
        Tm::App(f, a) | Tm::Pair(f, a) => {
            let pair = matches!(t, Tm::Pair(..));
            let rebuild = |l: Tm, r: Tm| if pair { Tm::pair(l, r) } else { Tm::app(l, r) };
            contract_all(f, sig, &mut sub);
            out.extend(sub.drain(..).map(|l| rebuild(l, (**a).clone())));
            contract_all(a, sig, &mut sub);
            out.extend(sub.drain(..).map(|r| rebuild((**f).clone(), r)));
        }
        Tm::Proj1(p) => {
            contract_all(p, sig, &mut sub);
            out.extend(sub.drain(..).map(Tm::proj1));
        }
        Tm::Proj2(p) => {
            contract_all(p, sig, &mut sub);
            out.extend(sub.drain(..).map(Tm::proj2));
        }
    }
}

fn successors(t: &Tm, sig: &Signature) -> Vec<Tm> {
    let mut out = Vec::new();
    contract_all(t, sig, &mut out);
    let mut seen = BTreeSet::new();
    out.retain(|s| seen.insert(s.canonical()));
    out.sort_by_cached_key(Tm::canonical);
    out
}

/// Every term reachable by contracting exactly one β, projection or δ redex
/// of the closed term `t`, up to α-equivalence, sorted.
pub fn one_step_reductions(t: &Tm, sig: &Signature) -> Result<Vec<Tm>> {
    type_of(&[], sig, t)?;
    Ok(successors(t, sig))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionGraph {
    /// Canonical key ↦ representative term.
    pub nodes: BTreeMap<String, Tm>,
    pub edges: BTreeSet<(String, String)>,
    pub root: String,
    /// Expanded nodes without successors.
    pub normal_forms: BTreeSet<String>,
    /// False when the node cap stopped the closure early.
    pub complete: bool,
}

/// Properties of a reduction graph; `None` means undetermined because the
/// graph is incomplete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphReport {
    pub complete: bool,
    pub terminating: Option<bool>,
    pub unique_nf: Option<bool>,
    pub locally_confluent_on_graph: Option<bool>,
    pub subject_reduction: bool,
    pub normal_forms: Vec<String>,
}

impl GraphReport {
    pub fn passed(&self) -> bool {
        self.complete
            && self.terminating == Some(true)
            && self.unique_nf == Some(true)
            && self.locally_confluent_on_graph == Some(true)
            && self.subject_reduction
    }
}

impl fmt::Display for GraphReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |b: Option<bool>| match b {
            Some(true) => "yes",
            Some(false) => "no",
            None => "unknown (graph truncated)",
        };
        writeln!(f, "complete: {}", if self.complete { "yes" } else { "no" })?;
        writeln!(f, "terminating: {}", show(self.terminating))?;
        writeln!(f, "unique normal form: {}", show(self.unique_nf))?;
        writeln!(
            f,
            "locally confluent on graph: {}",
            show(self.locally_confluent_on_graph)
        )?;
        writeln!(
            f,
            "subject reduction: {}",
            if self.subject_reduction { "yes" } else { "no" }
        )?;
        writeln!(f, "normal forms: {}", self.normal_forms.join(", "))
    }
}

impl ReductionGraph {
    pub fn successors<'a>(&'a self, key: &str) -> impl Iterator<Item = &'a str> + 'a {
        let key = key.to_string();
        self.edges
            .range((key.clone(), String::new())..)
            .take_while(move |(s, _)| *s == key)
            .map(|(_, t)| t.as_str())
    }

    fn reachable(&self, from: &str) -> BTreeSet<&str> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![from];
        while let Some(n) = stack.pop() {
            if let Some((k, _)) = self.nodes.get_key_value(n) {
                if seen.insert(k.as_str()) {
                    stack.extend(self.successors(n));
                }
            }
        }
        seen
    }

    fn has_cycle(&self) -> bool {
        // 0 unvisited, 1 on stack, 2 done
        let mut color: BTreeMap<&str, u8> = self.nodes.keys().map(|k| (k.as_str(), 0)).collect();
        for start in self.nodes.keys() {
            if color[start.as_str()] != 0 {
                continue;
            }
            let mut stack: Vec<(&str, Vec<&str>)> = vec![(start, self.successors(start).collect())];
            color.insert(start, 1);
            while let Some((node, rest)) = stack.last_mut() {
                match rest.pop() {
                    Some(next) => match color[next] {
                        1 => return true,
                        0 => {
                            color.insert(next, 1);
                            let succ = self.successors(next).collect();
                            stack.push((next, succ));
                        }
                        _ => {}
                    },
                    None => {
                        color.insert(node, 2);
                        stack.pop();
                    }
                }
            }
        }
        false
    }

    fn locally_confluent(&self) -> bool {
        let mut reach: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for n in self.nodes.keys() {
            let succ: Vec<&str> = self.successors(n).collect();
            for (i, b) in succ.iter().enumerate() {
                for c in &succ[i + 1..] {
                    let rb = reach.entry(b).or_insert_with(|| self.reachable(b)).clone();
                    let rc = reach.entry(c).or_insert_with(|| self.reachable(c));
                    if rb.is_disjoint(rc) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Graphviz text; node ids follow the sorted canonical keys, normal forms
    /// are drawn with a double border.
    pub fn to_dot(&self) -> String {
        let ids: BTreeMap<&str, usize> = self
            .nodes
            .keys()
            .enumerate()
            .map(|(i, k)| (k.as_str(), i))
            .collect();
        let mut s = String::from("digraph reductions {\n");
        for (k, t) in &self.nodes {
            let label = t.to_string().replace('\\', "\\\\").replace('"', "\\\"");
            let mut attrs = format!("label=\"{label}\"");
            if self.normal_forms.contains(k) {
                attrs.push_str(", peripheries=2");
            }
            if *k == self.root {
                attrs.push_str(", style=bold");
            }
            s.push_str(&format!("  n{} [{attrs}];\n", ids[k.as_str()]));
        }
        for (a, b) in &self.edges {
            s.push_str(&format!(
                "  n{} -> n{};\n",
                ids[a.as_str()],
                ids[b.as_str()]
            ));
        }
        s.push_str("}\n");
        s
    }
}

/// Closure of `one_step_reductions` from `t`, breadth first, stopping once
/// `cfg.cap` nodes are known. Each level's frontier is expanded in parallel
/// when enabled; the merged result is independent of scheduling.
pub fn reduction_graph(
    t: &Tm,
    sig: &Signature,
    cfg: &EnumConfig,
) -> Result<(ReductionGraph, GraphReport)> {
    let root_ty: Ty = type_of(&[], sig, t)?;
    let root = t.canonical();
    let mut nodes = BTreeMap::from([(root.clone(), t.clone())]);
    let mut edges = BTreeSet::new();
    let mut expanded = BTreeSet::new();
    let mut subject_reduction = true;
    let mut frontier = vec![root.clone()];
    let mut complete = true;

    while !frontier.is_empty() {
        let work: Vec<(String, Tm)> = frontier
            .iter()
            .map(|k| (k.clone(), nodes[k].clone()))
            .collect();
        let results = par::map_vec(work, cfg.parallel, |(k, term)| {
            let succ: Vec<(String, Tm, bool)> = successors(&term, sig)
                .into_iter()
                .map(|s| {
                    let typed = type_of(&[], sig, &s)
                        .map(|ty| ty == root_ty)
                        .unwrap_or(false);
                    (s.canonical(), s, typed)
                })
                .collect();
            (k, succ)
        });
        let mut next = BTreeSet::new();
        'merge: for (k, succ) in results {
            for (sk, _, _) in &succ {
                if !nodes.contains_key(sk)
                    && !next.contains(sk)
                    && nodes.len() + next.len() >= cfg.cap as usize
                {
                    complete = false;
                    break 'merge;
                }
                if !nodes.contains_key(sk) {
                    next.insert(sk.clone());
                }
            }
            expanded.insert(k.clone());
            for (sk, s, typed) in succ {
                subject_reduction &= typed;
                edges.insert((k.clone(), sk.clone()));
                nodes.entry(sk).or_insert(s);
            }
        }
        if !complete {
            break;
        }
        frontier = next.into_iter().collect();
    }

    let normal_forms: BTreeSet<String> = expanded
        .iter()
        .filter(|k| !edges.iter().any(|(a, _)| a == *k))
        .cloned()
        .collect();
    let graph = ReductionGraph {
        nodes,
        edges,
        root,
        normal_forms,
        complete,
    };
    let known = |v: bool| complete.then_some(v);
    let report = GraphReport {
        complete,
        terminating: known(!graph.has_cycle()),
        unique_nf: known(graph.normal_forms.len() == 1),
        locally_confluent_on_graph: known(graph.locally_confluent()),
        subject_reduction,
        normal_forms: graph
            .normal_forms
            .iter()
            .map(|k| graph.nodes[k].to_string())
            .collect(),
    };
    Ok((graph, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arith() -> Signature {
        Signature::parse(
            "numerals : N
             add : N -> N -> N
             mul : N -> N -> N
             builtin add = +
             builtin mul = *
             g : N -> N
             rule g(a) = add (mul a a) 4
             sqrt : N -> N
             rule sqrt(4) = 2",
        )
        .unwrap()
    }

    #[test]
    fn projection_and_literal_rules() {
        let sig = arith();
        let t = sig.term("p1 (1, 2)").unwrap();
        assert_eq!(one_step_reductions(&t, &sig).unwrap(), vec![Tm::numeral(1)]);
        let t = sig.term("sqrt 4").unwrap();
        assert_eq!(one_step_reductions(&t, &sig).unwrap(), vec![Tm::numeral(2)]);
        let t = sig.term("sqrt (add 2 2)").unwrap();
        let r: Vec<String> = one_step_reductions(&t, &sig)
            .unwrap()
            .iter()
            .map(Tm::to_string)
            .collect();
        assert_eq!(r, ["sqrt 4"]);
    }

    #[test]
    fn call_with_unevaluated_argument_branches() {
        let sig = arith();
        let t = sig.term("g (add 2 3)").unwrap();
        let r: BTreeSet<String> = one_step_reductions(&t, &sig)
            .unwrap()
            .iter()
            .map(Tm::to_string)
            .collect();
        assert_eq!(
            r,
            BTreeSet::from([
                "g 5".to_string(),
                "add (mul (add 2 3) (add 2 3)) 4".to_string()
            ])
        );
    }

    #[test]
    fn graph_converges_to_29() {
        let sig = arith();
        let t = sig.term("g (add 2 3)").unwrap();
        for cfg in [
            EnumConfig::default().sequential(),
            EnumConfig::default().parallel(),
        ] {
            let (g, rep) = reduction_graph(&t, &sig, &cfg).unwrap();
            assert!(rep.passed(), "{rep}");
            assert_eq!(rep.normal_forms, ["29"]);
            assert!(g.to_dot().contains("label=\"29\", peripheries=2"));
        }
    }

    #[test]
    fn numeral_is_its_own_graph() {
        let sig = arith();
        let (g, rep) = reduction_graph(&Tm::numeral(7), &sig, &EnumConfig::default()).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert_eq!(rep.normal_forms, ["7"]);
    }

    #[test]
    fn duplication_rejoins() {
        let sig = arith();
        let t = sig.term("(\\x:N. (x, x)) (p1 (1, 2))").unwrap();
        let (_, rep) = reduction_graph(&t, &sig, &EnumConfig::default()).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.normal_forms, ["(1, 1)"]);
    }

    #[test]
    fn truncation_is_reported() {
        let sig = arith();
        let t = sig.term("g (add 2 3)").unwrap();
        let (g, rep) = reduction_graph(&t, &sig, &EnumConfig::with_cap(2)).unwrap();
        assert!(!g.complete);
        assert_eq!(rep.unique_nf, None);
        assert!(!rep.passed());
    }

    #[test]
    fn ill_typed_input_is_rejected() {
        let sig = arith();
        let t = sig.term("g g").unwrap();
        assert!(one_step_reductions(&t, &sig).is_err());
    }
}
