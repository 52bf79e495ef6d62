use super::{
    Arrow, ArrowKind, Def, Diagram, FunctorDecl, Item, Layer, Macro, MacroUse, Node, NonCommute,
    Quant, StageAnn,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Num(usize),
    Sym(&'static str),
    /// A run of arrow-like characters that is not a known symbol.
    Other(String),
}

const SYMBOLS: [&str; 13] = [
    "|->", "<->", "->", ":=", ":", ";", ".", "{", "}", "(", ")", ",", "@",
];

pub(super) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '′'
}

fn lex(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err(Error::parse(line_no, col, "unterminated string")),
                    Some('"') => break,
                    Some('\\') => {
                        match chars.get(i + 1) {
                            Some(&e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(Error::parse(line_no, i + 1, "bad escape in string")),
                        }
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push((Tok::Str(s), col));
            continue;
        }
        if let Some(sym) = SYMBOLS
            .iter()
            .find(|s| chars[i..].iter().take(s.len()).copied().eq(s.chars()))
        {
            out.push((Tok::Sym(sym), col));
            i += sym.chars().count();
            continue;
        }
        if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = if word.chars().all(|c| c.is_ascii_digit()) {
                Tok::Num(
                    word.parse()
                        .map_err(|_| Error::parse(line_no, col, "number too large"))?,
                )
            } else {
                Tok::Ident(word)
            };
            out.push((tok, col));
            continue;
        }
        if "-<>|=~".contains(c) {
            let start = i;
            while i < chars.len() && "-<>|=~".contains(chars[i]) {
                i += 1;
            }
            out.push((Tok::Other(chars[start..i].iter().collect()), col));
            continue;
        }
        return Err(Error::parse(
            line_no,
            col,
            format!("unexpected character {c:?}"),
        ));
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col(), msg)
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    /// Identifiers and bare numbers both serve as names.
    fn name(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(n.to_string())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn string(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.err(format!("expected quoted {what}"))),
        }
    }

    fn sym(&mut self, s: &'static str) -> Result<()> {
        if self.peek() == Some(&Tok::Sym(s)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn keyword(&mut self, k: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == k => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{k}`"))),
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            Err(self.err("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn annotation(&mut self) -> Result<Option<StageAnn>> {
        if self.peek() != Some(&Tok::Sym("@")) {
            return Ok(None);
        }
        self.pos += 1;
        let quant = match self.next() {
            Some(Tok::Ident(k)) if k == "forall" => Quant::Forall,
            Some(Tok::Ident(k)) if k == "exists" => Quant::Exists,
            Some(Tok::Ident(k)) if k == "existsuniq" => Quant::ExistsUniq,
            _ => {
                self.pos -= 1;
                return Err(self.err("expected forall, exists or existsuniq"));
            }
        };
        let stage = if self.peek() == Some(&Tok::Sym("(")) {
            self.pos += 1;
            let n = match self.next() {
                Some(Tok::Num(n)) if *n > 0 => *n,
                _ => {
                    self.pos -= 1;
                    return Err(self.err("expected a positive stage number"));
                }
            };
            self.sym(")")?;
            Some(n)
        } else {
            None
        };
        Ok(Some(StageAnn { quant, stage }))
    }

    fn path(&mut self) -> Result<Vec<String>> {
        let mut ids = vec![self.name("arrow id")?];
        while self.peek() == Some(&Tok::Sym(".")) {
            self.pos += 1;
            ids.push(self.name("arrow id")?);
        }
        Ok(ids)
    }

    fn name_list(&mut self) -> Result<Vec<String>> {
        self.sym("(")?;
        let mut out = Vec::new();
        if self.peek() != Some(&Tok::Sym(")")) {
            out.push(self.name("name")?);
            while self.peek() == Some(&Tok::Sym(",")) {
                self.pos += 1;
                out.push(self.name("name")?);
            }
        }
        self.sym(")")?;
        Ok(out)
    }
}

/// Parses one line (already lexed). Returns `Some(header)` for the opening
/// line of a macro, whose body follows on later lines.
fn parse_line(c: &mut Cursor<'_>) -> Result<Option<Item>> {
    let kw = match c.peek() {
        None => return Ok(None),
        Some(Tok::Ident(k)) => k.clone(),
        Some(_) => return Err(c.err("expected a declaration keyword")),
    };
    c.pos += 1;
    let item = match kw.as_str() {
        "layer" => {
            let id = c.name("layer id")?;
            c.keyword("in")?;
            let category = match c.peek() {
                Some(Tok::Str(_)) => c.string("category name")?,
                _ => c.name("category name")?,
            };
            Item::Layer(Layer { id, category })
        }
        "functor" => {
            let id = c.name("functor id")?;
            c.sym(":")?;
            let src = c.name("layer id")?;
            c.sym("->")?;
            let dst = c.name("layer id")?;
            let label = c.string("label")?;
            Item::Functor(FunctorDecl {
                id,
                src,
                dst,
                label,
            })
        }
        "node" => {
            let id = c.name("node id")?;
            c.sym(":")?;
            let layer = c.name("layer id")?;
            let label = c.string("label")?;
            let ann = c.annotation()?;
            Item::Node(Node {
                id,
                layer,
                label,
                ann,
            })
        }
        "arrow" => {
            let id = c.name("arrow id")?;
            c.sym(":")?;
            let src = c.name("source")?;
            let kind = match c.next() {
                Some(Tok::Sym("->")) => ArrowKind::Hom,
                Some(Tok::Sym("|->")) => ArrowKind::MapsTo,
                Some(Tok::Sym("<->")) => ArrowKind::Bij,
                _ => {
                    c.pos -= 1;
                    return Err(c.err("unknown arrow kind; use ->, |-> or <->"));
                }
            };
            let dst = c.name("target")?;
            let label = c.string("label")?;
            let ann = c.annotation()?;
            Item::Arrow(Arrow {
                id,
                kind,
                src,
                dst,
                label,
                ann,
            })
        }
        "noncommute" => {
            let left = c.path()?;
            c.sym(";")?;
            let right = c.path()?;
            Item::NonCommute(NonCommute { left, right })
        }
        "def" => {
            let target = c.name("element id")?;
            let name = c.string("name")?;
            c.sym(":=")?;
            let body = c.string("body")?;
            Item::Def(Def { target, name, body })
        }
        "use" => {
            let name = c.name("macro name")?;
            let args = c.name_list()?;
            Item::Use(MacroUse { name, args })
        }
        "macro" => {
            let name = c.name("macro name")?;
            let params = c.name_list()?;
            c.sym(":=")?;
            c.sym("{")?;
            c.done()?;
            return Ok(Some(Item::Macro(Macro {
                name,
                params,
                body: Diagram::default(),
            })));
        }
        other => {
            c.pos -= 1;
            return Err(c.err(format!("unknown declaration `{other}`")));
        }
    };
    c.done()?;
    Ok(Some(item))
}

/// Parses `.diag` text and checks the structural invariants.
pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let mut items = Vec::new();
    let mut open: Option<(usize, Macro)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let toks = lex(raw, line_no)?;
        if toks.is_empty() {
            continue;
        }
        if open.is_some() && toks.len() == 1 && toks[0].0 == Tok::Sym("}") {
            let (_, m) = open.take().expect("open macro");
            items.push(Item::Macro(m));
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line: line_no,
            end_col: raw.chars().count() + 1,
        };
        let item = parse_line(&mut cur)?.expect("non-empty line");
        match (&mut open, item) {
            (Some(_), Item::Macro(_)) => {
                return Err(Error::parse(line_no, toks[0].1, "macros do not nest"))
            }
            (Some((_, m)), item) => m.body.items.push(item),
            (None, Item::Macro(m)) => open = Some((line_no, m)),
            (None, item) => items.push(item),
        }
    }
    if let Some((line, m)) = open {
        return Err(Error::parse(
            line,
            1,
            format!("macro {} is not closed", m.name),
        ));
    }
    let d = Diagram { items };
    d.validate().map_err(|e| match e {
        Error::Malformed(msg) => Error::parse(locate(text, &msg), 1, msg),
        other => other,
    })?;
    Ok(d)
}

/// Best-effort line for a structural error: the first line mentioning the
/// first identifier named in the message.
fn locate(text: &str, msg: &str) -> usize {
    let words: Vec<&str> = msg
        .split(|c: char| !is_ident_char(c))
        .filter(|w| !w.is_empty())
        .collect();
    for w in words.iter().skip(1) {
        for (i, line) in text.lines().enumerate() {
            if line.split(|c: char| !is_ident_char(c)).any(|t| t == *w) {
                return i + 1;
            }
        }
    }
    1
}
