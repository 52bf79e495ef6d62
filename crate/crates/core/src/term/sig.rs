use std::collections::{BTreeMap, BTreeSet};

use super::{parse_term, parse_type, type_of, Tm, Ty};
use crate::error::{Error, Result};
use crate::finset::split_top_level;

/// Argument pattern of a δ-rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    /// Binds any argument.
    Var(String),
    /// Matches a numeral or constant exactly.
    Lit(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaRule {
    pub head: String,
    pub params: Vec<Pattern>,
    pub rhs: Tm,
}

impl DeltaRule {
    /// Rules with a literal pattern only fire on values.
    pub fn needs_values(&self) -> bool {
        self.params.iter().any(|p| matches!(p, Pattern::Lit(_)))
    }
}

/// Binary arithmetic on numerals; `-` is truncated at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Add,
    Mul,
    Sub,
}

impl Builtin {
    pub fn apply(self, a: u64, b: u64) -> Option<u64> {
        match self {
            Builtin::Add => a.checked_add(b),
            Builtin::Mul => a.checked_mul(b),
            Builtin::Sub => Some(a.saturating_sub(b)),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub consts: BTreeMap<String, Ty>,
    /// Type of every numeral literal, if numerals are enabled.
    pub numerals: Option<Ty>,
    pub rules: Vec<DeltaRule>,
    pub builtins: BTreeMap<String, Builtin>,
}

impl Signature {
    pub fn const_type(&self, c: &str) -> Option<&Ty> {
        if c.chars().all(|d| d.is_ascii_digit()) {
            self.numerals.as_ref()
        } else {
            self.consts.get(c)
        }
    }

    /// Free variables naming declared constants become constants.
    pub fn resolve(&self, t: &Tm) -> Tm {
        self.resolve_under(t, &mut Vec::new())
    }

    fn resolve_under(&self, t: &Tm, bound: &mut Vec<String>) -> Tm {
        match t {
            Tm::Var(x) if !bound.contains(x) && self.consts.contains_key(x) => Tm::Const(x.clone()),
            Tm::Var(_) | Tm::Const(_) => t.clone(),
            Tm::Lam(x, ty, b) => {
                bound.push(x.clone());
                let b = self.resolve_under(b, bound);
                bound.pop();
                Tm::lam(x.clone(), ty.clone(), b)
            }
            Tm::App(a, b) => Tm::app(self.resolve_under(a, bound), self.resolve_under(b, bound)),
            Tm::Pair(a, b) => Tm::pair(self.resolve_under(a, bound), self.resolve_under(b, bound)),
            Tm::Proj1(b) => Tm::proj1(self.resolve_under(b, bound)),
            Tm::Proj2(b) => Tm::proj2(self.resolve_under(b, bound)),
        }
    }

    /// Parses and resolves a term against this signature.
    pub fn term(&self, src: &str) -> Result<Tm> {
        parse_term(src).map(|t| self.resolve(&t))
    }

    /// Line format: `name : T`, `numerals : T`, `builtin name = +|*|-`,
    /// `rule f(x, 4) = t`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Signature> {
        let mut sig = Signature::default();
        let mut raw_rules = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::parse(line_no, 1, msg);
            if let Some(rest) = line.strip_prefix("rule ") {
                raw_rules.push((line_no, rest.to_string()));
            } else if let Some(rest) = line.strip_prefix("builtin ") {
                let (name, op) = rest
                    .split_once('=')
                    .ok_or_else(|| err("expected 'builtin name = op'".into()))?;
                let op = match op.trim() {
                    "+" => Builtin::Add,
                    "*" => Builtin::Mul,
                    "-" => Builtin::Sub,
                    other => return Err(err(format!("unknown builtin operation {other}"))),
                };
                sig.builtins.insert(name.trim().to_string(), op);
            } else if let Some((name, ty)) = line.split_once(':') {
                let ty = parse_type(ty.trim()).map_err(|e| shift(e, line_no))?;
                match name.trim() {
                    "numerals" => sig.numerals = Some(ty),
                    n if is_ident(n) => {
                        sig.consts.insert(n.to_string(), ty);
                    }
                    n => return Err(err(format!("bad constant name {n:?}"))),
                }
            } else {
                return Err(err(format!("unrecognized line: {line}")));
            }
        }
        for name in sig.builtins.keys() {
            if !sig.consts.contains_key(name) {
                return Err(Error::parse(
                    0,
                    0,
                    format!("builtin {name} has no declared type"),
                ));
            }
        }
        for (line_no, src) in raw_rules {
            let rule = sig.parse_rule(&src).map_err(|e| shift(e, line_no))?;
            sig.rules.push(rule);
        }
        Ok(sig)
    }

    fn parse_rule(&self, src: &str) -> Result<DeltaRule> {
        let bad = |m: &str| Error::parse(1, 1, m.to_string());
        let (lhs, rhs) = src
            .split_once('=')
            .ok_or_else(|| bad("expected 'rule f(args) = term'"))?;
        let lhs = lhs.trim();
        let open = lhs
            .find('(')
            .ok_or_else(|| bad("expected '(' after the rule head"))?;
        let head = lhs[..open].trim().to_string();
        let inner = lhs[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| bad("expected ')' closing the arguments"))?;
        let head_ty = self
            .consts
            .get(&head)
            .ok_or_else(|| bad(&format!("rule head {head} is not declared")))?;

        let mut params = Vec::new();
        let mut arg_tys = Vec::new();
        let mut ty = head_ty.clone();
        for p in split_top_level(inner, ",")
            .into_iter()
            .map(str::trim)
            .filter(|p| !p.is_empty())
        {
            let Ty::Arrow(a, b) = ty else {
                return Err(bad(&format!("{head} takes fewer arguments")));
            };
            let pat = if p.chars().all(|c| c.is_ascii_digit()) || self.consts.contains_key(p) {
                Pattern::Lit(p.to_string())
            } else if is_ident(p) {
                Pattern::Var(p.to_string())
            } else {
                return Err(bad(&format!("bad pattern {p}")));
            };
            arg_tys.push((pat.clone(), (*a).clone()));
            params.push(pat);
            ty = (*b).clone();
        }
        let vars: BTreeSet<&str> = params
            .iter()
            .filter_map(|p| {
                if let Pattern::Var(v) = p {
                    Some(v.as_str())
                } else {
                    None
                }
            })
            .collect();
        if vars.len()
            != params
                .iter()
                .filter(|p| matches!(p, Pattern::Var(_)))
                .count()
        {
            return Err(bad("repeated pattern variable"));
        }

        let rhs = self.term(rhs.trim())?;
        let mut ctx = Vec::new();
        for (pat, a) in &arg_tys {
            match pat {
                Pattern::Var(v) => ctx.push((v.clone(), a.clone())),
                Pattern::Lit(l) => {
                    if self.const_type(l) != Some(a) {
                        return Err(bad(&format!("literal {l} does not have type {a}")));
                    }
                }
            }
        }
        // pattern variables shadow constants
        let rhs = unresolve(&rhs, &vars);
        let got = type_of(&ctx, self, &rhs)?;
        if got != ty {
            return Err(Error::IllTyped(format!(
                "rule for {head} returns {got}, expected {ty}"
            )));
        }
        Ok(DeltaRule { head, params, rhs })
    }
}

fn unresolve(t: &Tm, vars: &BTreeSet<&str>) -> Tm {
    match t {
        Tm::Const(c) if vars.contains(c.as_str()) => Tm::Var(c.clone()),
        Tm::Var(_) | Tm::Const(_) => t.clone(),
        Tm::Lam(x, ty, b) => Tm::lam(x.clone(), ty.clone(), unresolve(b, vars)),
        Tm::App(a, b) => Tm::app(unresolve(a, vars), unresolve(b, vars)),
        Tm::Pair(a, b) => Tm::pair(unresolve(a, vars), unresolve(b, vars)),
        Tm::Proj1(b) => Tm::proj1(unresolve(b, vars)),
        Tm::Proj2(b) => Tm::proj2(unresolve(b, vars)),
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_')
        && cs.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn shift(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { col, msg, .. } => Error::Parse { line, col, msg },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ARITH: &str = "
        numerals : N
        add : N -> N -> N
        mul : N -> N -> N
        builtin add = +
        builtin mul = *
        g : N -> N
        rule g(a) = add (mul a a) 4
        sqrt : N -> N
        rule sqrt(4) = 2
    ";

    #[test]
    fn parses_arith() {
        let sig = Signature::parse(ARITH).unwrap();
        assert_eq!(sig.rules.len(), 2);
        assert!(!sig.rules[0].needs_values());
        assert!(sig.rules[1].needs_values());
        assert_eq!(sig.term("g (add 2 3)").unwrap().to_string(), "g (add 2 3)");
        assert!(matches!(sig.term("g").unwrap(), Tm::Const(_)));
    }

    #[test]
    fn rejects_ill_typed_rule() {
        let src = "numerals : N\nh : N -> N\nrule h(a) = h";
        assert!(matches!(Signature::parse(src), Err(Error::IllTyped(_))));
    }

    #[test]
    fn reports_line_of_bad_type() {
        match Signature::parse("numerals : N\nf : N ->") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
