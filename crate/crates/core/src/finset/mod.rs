//! The ambient category of finite sets.
//!
//! Elements are [`Atom`]s: integers or opaque tokens. Constructions that need
//! structured elements (limit tuples, colimit classes, encoded maps) produce
//! canonical tokens, so element equality is always token equality.

mod limits;
mod nat_enum;

pub use limits::{colimit_finset, encode_class, encode_tuple, limit_finset, Cocone, Cone};
pub use nat_enum::{enumerate_nattrans_finset, enumerate_nattrans_product};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::config::EnumConfig;
use crate::error::{Error, Result};

/// A finite-set element. Integers sort before tokens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Int(i64),
    Sym(String),
}

impl Atom {
    /// Reads a token, preferring the integer reading.
    pub fn parse(token: &str) -> Atom {
        match token.parse::<i64>() {
            Ok(n) => Atom::Int(n),
            Err(_) => Atom::Sym(token.to_string()),
        }
    }

    pub fn sym(s: impl Into<String>) -> Atom {
        Atom::Sym(s.into())
    }
}

impl From<i64> for Atom {
    fn from(n: i64) -> Self {
        Atom::Int(n)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::parse(s)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Int(n) => write!(f, "{n}"),
            Atom::Sym(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSetObj(BTreeSet<Atom>);

impl FinSetObj {
    pub fn new<I: IntoIterator<Item = Atom>>(atoms: I) -> Self {
        FinSetObj(atoms.into_iter().collect())
    }

    pub fn empty() -> Self {
        FinSetObj::default()
    }

    /// The one-point set `{*}`.
    pub fn point() -> Self {
        FinSetObj::new([Atom::sym("*")])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.0.contains(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter()
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.0
    }
}

impl FromIterator<Atom> for FinSetObj {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        FinSetObj(iter.into_iter().collect())
    }
}

impl fmt::Display for FinSetObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// A total function between finite sets, stored as its element table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSetMap {
    dom: FinSetObj,
    cod: FinSetObj,
    table: BTreeMap<Atom, Atom>,
}

impl FinSetMap {
    pub fn new(dom: FinSetObj, cod: FinSetObj, table: BTreeMap<Atom, Atom>) -> Result<Self> {
        if table.len() != dom.len() || !dom.iter().all(|a| table.contains_key(a)) {
            return Err(Error::MalformedMap(format!(
                "table keys do not match the domain {dom}"
            )));
        }
        if let Some((a, b)) = table.iter().find(|(_, b)| !cod.contains(b)) {
            return Err(Error::MalformedMap(format!(
                "{a} goes to {b}, which is not in {cod}"
            )));
        }
        Ok(FinSetMap { dom, cod, table })
    }

    pub fn identity(set: &FinSetObj) -> Self {
        let table = set.iter().map(|a| (a.clone(), a.clone())).collect();
        FinSetMap {
            dom: set.clone(),
            cod: set.clone(),
            table,
        }
    }

    /// The constant map onto `value`; `value` must lie in `cod` unless `dom` is empty.
    pub fn constant(dom: &FinSetObj, cod: &FinSetObj, value: &Atom) -> Result<Self> {
        let table = dom.iter().map(|a| (a.clone(), value.clone())).collect();
        FinSetMap::new(dom.clone(), cod.clone(), table)
    }

    pub fn dom(&self) -> &FinSetObj {
        &self.dom
    }

    pub fn cod(&self) -> &FinSetObj {
        &self.cod
    }

    pub fn table(&self) -> &BTreeMap<Atom, Atom> {
        &self.table
    }

    pub fn apply(&self, a: &Atom) -> Option<&Atom> {
        self.table.get(a)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &FinSetMap) -> Result<FinSetMap> {
        if first.cod != self.dom {
            return Err(Error::Mismatch(format!(
                "cannot compose: codomain {} is not domain {}",
                first.cod, self.dom
            )));
        }
        let table = first
            .table
            .iter()
            .map(|(a, b)| (a.clone(), self.table[b].clone()))
            .collect();
        Ok(FinSetMap {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            table,
        })
    }

    pub fn is_bijection(&self) -> bool {
        self.dom.len() == self.cod.len()
            && self.table.values().collect::<BTreeSet<_>>().len() == self.dom.len()
    }

    /// Canonical token `{a->x, b->y}` used when a map has to be an element.
    pub fn encode(&self) -> Atom {
        Atom::Sym(self.to_string())
    }

    /// Replaces one table entry. Used to build negative controls.
    pub fn with_entry(&self, a: Atom, b: Atom) -> Result<FinSetMap> {
        let mut table = self.table.clone();
        table.insert(a, b);
        FinSetMap::new(self.dom.clone(), self.cod.clone(), table)
    }
}

impl fmt::Display for FinSetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        f.write_str("}")
    }
}

/// `|Y|^|X|`, or `None` on overflow.
pub fn map_count(x: &FinSetObj, y: &FinSetObj) -> Option<u64> {
    (y.len() as u64).checked_pow(u32::try_from(x.len()).ok()?)
}

/// All total maps `X → Y` in lexicographic order (first element of `X` most
/// significant, values in the sorted order of `Y`).
pub fn enumerate_maps(x: &FinSetObj, y: &FinSetObj, cfg: &EnumConfig) -> Result<Vec<FinSetMap>> {
    let needed = map_count(x, y);
    match needed {
        Some(n) if n <= cfg.cap => {}
        _ => {
            return Err(Error::CapExceeded {
                what: format!("maps {x} -> {y}"),
                needed: format!("{}^{}", y.len(), x.len()),
                cap: cfg.cap,
            })
        }
    }
    let dom: Vec<&Atom> = x.iter().collect();
    let cod: Vec<&Atom> = y.iter().collect();
    if !dom.is_empty() && cod.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(needed.unwrap_or(0) as usize);
    let mut digits = vec![0usize; dom.len()];
    loop {
        let table = dom
            .iter()
            .zip(&digits)
            .map(|(a, &i)| ((*a).clone(), cod[i].clone()))
            .collect();
        out.push(FinSetMap {
            dom: x.clone(),
            cod: y.clone(),
            table,
        });
        // odometer, last position least significant
        let mut pos = dom.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < cod.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Splits `s` at top-level occurrences of `sep`, ignoring separators nested
/// inside `()`, `{}` or `[]`.
pub fn split_top_level<'a>(s: &'a str, sep: &str) -> Vec<&'a str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'{' | b'[' => depth += 1,
            b')' | b'}' | b']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && s[i..].starts_with(sep) {
            parts.push(&s[start..i]);
            i += sep.len();
            start = i;
            continue;
        }
        i += 1;
    }
    parts.push(&s[start..]);
    parts
}

fn strip_braces(s: &str) -> Option<&str> {
    let s = s.trim();
    s.strip_prefix('{')?.strip_suffix('}')
}

/// Parses `{a,b,c}`. Elements may themselves be bracketed encodings.
pub fn parse_set(s: &str) -> Result<FinSetObj> {
    let inner = strip_braces(s)
        .ok_or_else(|| Error::MalformedMap(format!("expected a set literal, got `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(FinSetObj::empty());
    }
    let mut atoms = BTreeSet::new();
    for part in split_top_level(inner, ",") {
        let tok = part.trim();
        if tok.is_empty() {
            return Err(Error::MalformedMap(format!("empty element in `{s}`")));
        }
        if !atoms.insert(Atom::parse(tok)) {
            return Err(Error::MalformedMap(format!(
                "duplicate element {tok} in `{s}`"
            )));
        }
    }
    Ok(FinSetObj(atoms))
}

/// Parses a map table `{a->x, b->y}` between the given sets.
pub fn parse_map(s: &str, dom: &FinSetObj, cod: &FinSetObj) -> Result<FinSetMap> {
    let inner = strip_braces(s)
        .ok_or_else(|| Error::MalformedMap(format!("expected a map literal, got `{s}`")))?;
    let mut table = BTreeMap::new();
    if !inner.trim().is_empty() {
        for part in split_top_level(inner, ",") {
            let pair = split_top_level(part, "->");
            if pair.len() != 2 {
                return Err(Error::MalformedMap(format!(
                    "expected `a->b`, got `{}`",
                    part.trim()
                )));
            }
            let (a, b) = (Atom::parse(pair[0].trim()), Atom::parse(pair[1].trim()));
            if table.insert(a.clone(), b).is_some() {
                return Err(Error::MalformedMap(format!("{a} mapped twice in `{s}`")));
            }
        }
    }
    FinSetMap::new(dom.clone(), cod.clone(), table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[&str]) -> FinSetObj {
        xs.iter().map(|x| Atom::parse(x)).collect()
    }

    #[test]
    fn empty_domain_has_one_map() {
        let maps =
            enumerate_maps(&FinSetObj::empty(), &set(&["a"]), &EnumConfig::default()).unwrap();
        assert_eq!(maps.len(), 1);
        assert!(maps[0].table().is_empty());
    }

    #[test]
    fn two_to_three_gives_nine_in_order() {
        let maps = enumerate_maps(
            &set(&["a", "b"]),
            &set(&["x", "y", "z"]),
            &EnumConfig::default(),
        )
        .unwrap();
        assert_eq!(maps.len(), 9);
        assert_eq!(maps[0].to_string(), "{a->x, b->x}");
        assert_eq!(maps[1].to_string(), "{a->x, b->y}");
        assert_eq!(maps[8].to_string(), "{a->z, b->z}");
        assert!(maps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn nonempty_into_empty_has_none() {
        let maps =
            enumerate_maps(&set(&["a"]), &FinSetObj::empty(), &EnumConfig::default()).unwrap();
        assert!(maps.is_empty());
    }

    #[test]
    fn cap_is_an_error() {
        let err = enumerate_maps(
            &set(&["a", "b", "c"]),
            &set(&["x", "y"]),
            &EnumConfig::with_cap(7),
        )
        .unwrap_err();
        assert!(err.is_cap());
        assert!(err.to_string().contains("2^3"));
    }

    #[test]
    fn ints_sort_numerically_before_tokens() {
        let s = set(&["10", "2", "b", "a"]);
        assert_eq!(s.to_string(), "{2,10,a,b}");
    }

    #[test]
    fn nested_literals_parse() {
        let s = parse_set("{{*->24}, {*->25}}").unwrap();
        assert_eq!(s.len(), 2);
        let dom = set(&["*"]);
        let m = parse_map("{*->24}", &dom, &set(&["24", "25"])).unwrap();
        assert_eq!(m.encode(), Atom::sym("{*->24}"));
    }

    #[test]
    fn malformed_maps_rejected() {
        let dom = set(&["a", "b"]);
        let cod = set(&["x"]);
        assert!(parse_map("{a->x}", &dom, &cod).is_err());
        assert!(parse_map("{a->x, b->y}", &dom, &cod).is_err());
        assert!(parse_set("{a,a}").is_err());
    }

    #[test]
    fn composition_and_bijection() {
        let a = set(&["1", "2"]);
        let b = set(&["x", "y"]);
        let f = parse_map("{1->y, 2->x}", &a, &b).unwrap();
        let g = parse_map("{x->2, y->1}", &b, &a).unwrap();
        assert_eq!(g.after(&f).unwrap(), FinSetMap::identity(&a));
        assert!(f.is_bijection());
        assert!(f.after(&f).is_err());
    }
}
