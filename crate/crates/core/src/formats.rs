//! Text formats for fixtures: `.fincat`, `.fun`, `.nt`, `.adj` and `.yon`.
//!
//! All of them are line based. `#` starts a comment, a line `name:` opens a
//! section, and `key: value` sets a header. Paths inside a file are
//! resolved relative to that file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::adjunction::Side;
use crate::cat::{
    preorder_from_covers, FinCat, Functor, FunctorVal, NatTrans, SetFunctor, SetNatTrans,
};
use crate::error::{Error, Result};
use crate::finset::{parse_map, parse_set, FinSetMap, FinSetObj};

/// One parsed file: headers with values and sections with their lines.
#[derive(Debug, Default)]
struct Sections {
    headers: BTreeMap<String, (usize, String)>,
    sections: BTreeMap<String, Vec<(usize, String)>>,
}

impl Sections {
    fn parse(text: &str, header_names: &[&str], section_names: &[&str]) -> Result<Sections> {
        let mut out = Sections::default();
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((key, value)) = line.split_once(':') {
                let key = key.trim();
                if value.trim().is_empty() && section_names.contains(&key) {
                    if out.sections.insert(key.to_string(), Vec::new()).is_some() {
                        return Err(Error::parse(
                            line_no,
                            1,
                            format!("section {key} appears twice"),
                        ));
                    }
                    current = Some(key.to_string());
                    continue;
                }
                if header_names.contains(&key) {
                    out.headers
                        .insert(key.to_string(), (line_no, value.trim().to_string()));
                    continue;
                }
            }
            match &current {
                Some(sec) => out
                    .sections
                    .get_mut(sec)
                    .expect("open section")
                    .push((line_no, line.to_string())),
                None => {
                    return Err(Error::parse(
                        line_no,
                        1,
                        format!("line outside any section: {line}"),
                    ))
                }
            }
        }
        Ok(out)
    }

    fn header(&self, key: &str) -> Result<&(usize, String)> {
        self.headers
            .get(key)
            .ok_or_else(|| Error::parse(1, 1, format!("missing header `{key}:`")))
    }

    fn section(&self, name: &str) -> &[(usize, String)] {
        self.sections.get(name).map(Vec::as_slice).unwrap_or(&[])
    }
}

pub(crate) fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

pub(crate) fn resolve(base: &Path, rel: &str) -> PathBuf {
    base.join(rel)
}

fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } | Error::Io { .. } => e,
        other => Error::parse(line, 1, other.to_string()),
    }
}

/// Splits `lhs |-> rhs`.
fn mapsto(line_no: usize, line: &str) -> Result<(String, String)> {
    let (l, r) = line
        .split_once("|->")
        .ok_or_else(|| Error::parse(line_no, 1, format!("expected `x |-> value`, got `{line}`")))?;
    Ok((l.trim().to_string(), r.trim().to_string()))
}

/// Parses a `.fincat` table. Identities are named `id_<obj>` and need not
/// be listed, nor need their composites. A `preorder:` section of covers
/// `a < b` replaces `morphisms:` and `compose:`.
pub fn parse_fincat(text: &str) -> Result<FinCat> {
    let s = Sections::parse(text, &[], &["objects", "morphisms", "compose", "preorder"])?;
    let mut objects = Vec::new();
    for (_, line) in s.section("objects") {
        objects.extend(line.split_whitespace().map(str::to_string));
    }
    if s.sections.contains_key("preorder") {
        if s.sections.contains_key("morphisms") || s.sections.contains_key("compose") {
            return Err(Error::parse(
                1,
                1,
                "a preorder: section excludes morphisms: and compose:",
            ));
        }
        let mut covers = Vec::new();
        for (n, line) in s.section("preorder") {
            let (a, b) = line
                .split_once('<')
                .ok_or_else(|| Error::parse(*n, 1, format!("expected `a < b`, got `{line}`")))?;
            let (a, b) = (a.trim().to_string(), b.trim().to_string());
            for x in [&a, &b] {
                if !objects.contains(x) {
                    objects.push(x.clone());
                }
            }
            covers.push((a, b));
        }
        return preorder_from_covers(objects, covers);
    }
    let mut morphisms = Vec::new();
    for (n, line) in s.section("morphisms") {
        let (name, ends) = line.split_once(':').ok_or_else(|| {
            Error::parse(*n, 1, format!("expected `name : dom -> cod`, got `{line}`"))
        })?;
        let (d, c) = ends.split_once("->").ok_or_else(|| {
            Error::parse(
                *n,
                1,
                format!("expected `dom -> cod`, got `{}`", ends.trim()),
            )
        })?;
        morphisms.push((
            name.trim().to_string(),
            d.trim().to_string(),
            c.trim().to_string(),
        ));
    }
    let mut compose = BTreeMap::new();
    for (n, line) in s.section("compose") {
        let bad = || Error::parse(*n, 1, format!("expected `g . f = h`, got `{line}`"));
        let (lhs, h) = line.split_once('=').ok_or_else(bad)?;
        let (g, f) = lhs.split_once(" . ").ok_or_else(bad)?;
        let key = (g.trim().to_string(), f.trim().to_string());
        if compose.insert(key, h.trim().to_string()).is_some() {
            return Err(Error::parse(
                *n,
                1,
                format!("composite {} . {} given twice", g.trim(), f.trim()),
            ));
        }
    }
    FinCat::with_implicit_identities(objects, morphisms, compose)
}

pub fn load_fincat(path: &Path) -> Result<FinCat> {
    parse_fincat(&read(path)?)
}

pub(crate) fn parent(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

/// Parses a `.fun` file. `target: finset` makes a set-valued functor whose
/// objects map to `{a,b}` literals and morphisms to `{a->x}` tables;
/// otherwise the target is another `.fincat`. Identities are implicit.
pub fn parse_functor(text: &str, base: &Path) -> Result<FunctorVal> {
    let s = Sections::parse(text, &["source", "target"], &["objects", "morphisms"])?;
    let (src_line, src) = s.header("source")?;
    let source = Arc::new(load_fincat(&resolve(base, src)).map_err(|e| at_line(*src_line, e))?);
    let (tgt_line, tgt) = s.header("target")?;
    let mut objects = BTreeMap::new();
    for (n, line) in s.section("objects") {
        let (x, v) = mapsto(*n, line)?;
        if objects.insert(x.clone(), (*n, v)).is_some() {
            return Err(Error::parse(*n, 1, format!("object {x} mapped twice")));
        }
    }
    let mut morphisms = BTreeMap::new();
    for (n, line) in s.section("morphisms") {
        let (m, v) = mapsto(*n, line)?;
        if morphisms.insert(m.clone(), (*n, v)).is_some() {
            return Err(Error::parse(*n, 1, format!("morphism {m} mapped twice")));
        }
    }
    if tgt == "finset" {
        let mut obj_vals = BTreeMap::new();
        for (x, (n, v)) in &objects {
            obj_vals.insert(x.clone(), parse_set(v).map_err(|e| at_line(*n, e))?);
        }
        let mut mor_vals = BTreeMap::new();
        for (m, (n, v)) in &morphisms {
            let arrow = source.arrow(m).ok_or_else(|| {
                Error::parse(*n, 1, format!("{m} is not a morphism of the source"))
            })?;
            let (Some(d), Some(c)) = (obj_vals.get(&arrow.dom), obj_vals.get(&arrow.cod)) else {
                return Err(Error::parse(
                    *n,
                    1,
                    format!("the ends of {m} have no value"),
                ));
            };
            mor_vals.insert(m.clone(), parse_map(v, d, c).map_err(|e| at_line(*n, e))?);
        }
        let f = SetFunctor::with_implicit_identities(source, obj_vals, mor_vals)
            .map_err(|e| at_line(1, e))?;
        Ok(FunctorVal::Set(f))
    } else {
        let target = Arc::new(load_fincat(&resolve(base, tgt)).map_err(|e| at_line(*tgt_line, e))?);
        let objects = objects.into_iter().map(|(k, (_, v))| (k, v)).collect();
        let morphisms = morphisms.into_iter().map(|(k, (_, v))| (k, v)).collect();
        let f = Functor::with_implicit_identities(source, target, objects, morphisms)
            .map_err(|e| at_line(1, e))?;
        Ok(FunctorVal::Table(f))
    }
}

pub fn load_functor(path: &Path) -> Result<FunctorVal> {
    parse_functor(&read(path)?, parent(path))
}

pub fn load_set_functor(path: &Path) -> Result<SetFunctor> {
    match load_functor(path)? {
        FunctorVal::Set(f) => Ok(f),
        FunctorVal::Table(_) => Err(Error::Mismatch(format!(
            "{} is not set-valued",
            path.display()
        ))),
    }
}

pub fn load_table_functor(path: &Path) -> Result<Functor> {
    match load_functor(path)? {
        FunctorVal::Table(f) => Ok(f),
        FunctorVal::Set(_) => Err(Error::Mismatch(format!("{} is set-valued", path.display()))),
    }
}

/// A natural transformation read from a `.nt` file.
#[derive(Debug, Clone)]
pub enum NatVal {
    Table(NatTrans),
    Set(SetNatTrans),
}

/// `.nt`: headers `source:` and `target:` naming `.fun` files, and a
/// `components:` section of `X |-> value` lines.
pub fn parse_nattrans(text: &str, base: &Path) -> Result<NatVal> {
    let s = Sections::parse(text, &["source", "target"], &["components"])?;
    let (sl, src) = s.header("source")?;
    let (tl, tgt) = s.header("target")?;
    let f = load_functor(&resolve(base, src)).map_err(|e| at_line(*sl, e))?;
    let g = load_functor(&resolve(base, tgt)).map_err(|e| at_line(*tl, e))?;
    let mut raw = BTreeMap::new();
    for (n, line) in s.section("components") {
        let (x, v) = mapsto(*n, line)?;
        raw.insert(x, (*n, v));
    }
    match (f, g) {
        (FunctorVal::Table(f), FunctorVal::Table(g)) => {
            let comps = raw.into_iter().map(|(k, (_, v))| (k, v)).collect();
            Ok(NatVal::Table(NatTrans::new(
                Arc::new(f),
                Arc::new(g),
                comps,
            )?))
        }
        (FunctorVal::Set(f), FunctorVal::Set(g)) => {
            let mut comps = BTreeMap::new();
            for (x, (n, v)) in raw {
                if !f.source_cat().has_object(&x) {
                    return Err(Error::parse(
                        n,
                        1,
                        format!("{x} is not an object of the source"),
                    ));
                }
                comps.insert(
                    x.clone(),
                    parse_map(&v, f.ob(&x), g.ob(&x)).map_err(|e| at_line(n, e))?,
                );
            }
            Ok(NatVal::Set(SetNatTrans::new(
                Arc::new(f),
                Arc::new(g),
                comps,
            )?))
        }
        _ => Err(Error::Mismatch(
            "source and target functors have different kinds of target".into(),
        )),
    }
}

pub fn load_nattrans(path: &Path) -> Result<NatVal> {
    parse_nattrans(&read(path)?, parent(path))
}

/// Which side the arrows are for, and `X ↦ (object, morphism)`.
pub type UniversalArrows = (Side, BTreeMap<String, (String, String)>);

/// An `.adj` manifest: the two functors, and either unit and counit tables
/// (for verification) or one family of universal arrows (for building).
#[derive(Debug, Clone)]
pub struct AdjManifest {
    pub left: Option<Functor>,
    pub right: Option<Functor>,
    pub unit: Option<BTreeMap<String, String>>,
    pub counit: Option<BTreeMap<String, String>>,
    /// `universal: unit` or `universal: counit` header, with `arrows:` lines
    /// `X |-> object, morphism`.
    pub universal: Option<UniversalArrows>,
}

pub fn parse_adj(text: &str, base: &Path) -> Result<AdjManifest> {
    let s = Sections::parse(
        text,
        &["left", "right", "universal"],
        &["unit", "counit", "arrows"],
    )?;
    let load = |key: &str| -> Result<Option<Functor>> {
        match s.headers.get(key) {
            Some((n, p)) => Ok(Some(
                load_table_functor(&resolve(base, p)).map_err(|e| at_line(*n, e))?,
            )),
            None => Ok(None),
        }
    };
    let table = |name: &str| -> Result<Option<BTreeMap<String, String>>> {
        if !s.sections.contains_key(name) {
            return Ok(None);
        }
        s.section(name)
            .iter()
            .map(|(n, l)| mapsto(*n, l))
            .collect::<Result<_>>()
            .map(Some)
    };
    let universal = match s.headers.get("universal") {
        None => None,
        Some((n, side)) => {
            let side = match side.as_str() {
                "unit" => Side::Unit,
                "counit" => Side::Counit,
                other => {
                    return Err(Error::parse(
                        *n,
                        1,
                        format!("universal must be unit or counit, got {other}"),
                    ))
                }
            };
            let mut data = BTreeMap::new();
            for (n, line) in s.section("arrows") {
                let (x, v) = mapsto(*n, line)?;
                let (o, m) = v.split_once(',').ok_or_else(|| {
                    Error::parse(*n, 1, format!("expected `object, morphism`, got `{v}`"))
                })?;
                data.insert(x, (o.trim().to_string(), m.trim().to_string()));
            }
            Some((side, data))
        }
    };
    Ok(AdjManifest {
        left: load("left")?,
        right: load("right")?,
        unit: table("unit")?,
        counit: table("counit")?,
        universal,
    })
}

pub fn load_adj(path: &Path) -> Result<AdjManifest> {
    parse_adj(&read(path)?, parent(path))
}

/// A `.yon` fixture: a set-valued functor, an object `C`, a finite set `A`,
/// and optionally `η : A → R C`.
#[derive(Debug, Clone)]
pub struct YonedaFixture {
    pub functor: Arc<SetFunctor>,
    pub object: String,
    pub set: FinSetObj,
    pub eta: Option<FinSetMap>,
}

pub fn parse_yon(text: &str, base: &Path) -> Result<YonedaFixture> {
    let s = Sections::parse(text, &["functor", "object", "set", "eta"], &[])?;
    let (fl, f) = s.header("functor")?;
    let functor = Arc::new(load_set_functor(&resolve(base, f)).map_err(|e| at_line(*fl, e))?);
    let (ol, object) = s.header("object")?;
    if !functor.source_cat().has_object(object) {
        return Err(Error::parse(
            *ol,
            1,
            format!("{object} is not an object of the source"),
        ));
    }
    let set = match s.headers.get("set") {
        Some((n, v)) => parse_set(v).map_err(|e| at_line(*n, e))?,
        None => FinSetObj::point(),
    };
    let eta = match s.headers.get("eta") {
        Some((n, v)) => Some(parse_map(v, &set, functor.ob(object)).map_err(|e| at_line(*n, e))?),
        None => None,
    };
    Ok(YonedaFixture {
        functor,
        object: object.clone(),
        set,
        eta,
    })
}

pub fn load_yon(path: &Path) -> Result<YonedaFixture> {
    parse_yon(&read(path)?, parent(path))
}
