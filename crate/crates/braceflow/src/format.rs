//! Line-oriented text formats for pre-Lie rings and braces.
//!
//! ```text
//! # a.b = 7ab on Z/7^5
//! prelie v1
//! p 7
//! factors 5
//! sc 1 1 -> 7 1
//! ```
//!
//! `sc j k -> c_1 l_1 c_2 l_2 ...` sets `g_j . g_k = sum c_i g_{l_i}`;
//! `sc j k -> 0` is accepted for a zero constant. Pairs without an `sc`
//! line are zero. A brace document has the same header with kind `brace`
//! and one of three bodies:
//!
//! * `trivial` (`a o b = a + b`),
//! * `flows` followed by `sc` lines (the group of flows of that ring),
//! * Cayley rows `(a) ∘ (b) = (c)` for every pair, `o` accepted for `∘`.
//!
//! Blank lines and `#` comments are ignored. Coordinates must be canonical
//! residues.

use std::fmt::Write as _;

use braceflow_core::flows::flows_brace;
use braceflow_core::{Brace, Element, PGroup, PreLieRing};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        source: braceflow_core::Error,
    },

    #[error("expected a {expected} document, found {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// A pre-Lie ring given by its structure constants (`constants[j * r + k]`
/// is `g_j . g_k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreLieDoc {
    pub group: PGroup,
    pub constants: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BraceBody {
    Trivial,
    Flows(Vec<Element>),
    /// Row-major element indices, as in [`Brace::from_table`].
    Cayley(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraceDoc {
    pub group: PGroup,
    pub body: BraceBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    PreLie(PreLieDoc),
    Brace(BraceDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::PreLie(_) => "prelie",
            Document::Brace(_) => "brace",
        }
    }

    pub fn group(&self) -> &PGroup {
        match self {
            Document::PreLie(d) => &d.group,
            Document::Brace(d) => &d.group,
        }
    }

    pub fn into_prelie(self) -> Result<PreLieDoc, FormatError> {
        match self {
            Document::PreLie(d) => Ok(d),
            other => Err(FormatError::WrongKind {
                expected: "prelie",
                found: other.kind(),
            }),
        }
    }

    /// The brace described by the document; a pre-Lie document stands for
    /// its group of flows.
    pub fn to_brace(&self) -> braceflow_core::Result<Brace> {
        match self {
            Document::PreLie(d) => flows_brace(&d.ring()?),
            Document::Brace(d) => d.brace(),
        }
    }
}

impl PreLieDoc {
    pub fn ring(&self) -> braceflow_core::Result<PreLieRing> {
        PreLieRing::from_constants(&self.group, self.constants.clone())
    }

    pub fn from_ring(ring: &PreLieRing) -> Self {
        Self {
            group: ring.group().clone(),
            constants: ring.structure_constants(),
        }
    }
}

impl BraceDoc {
    pub fn brace(&self) -> braceflow_core::Result<Brace> {
        match &self.body {
            BraceBody::Trivial => Ok(Brace::trivial(&self.group)),
            BraceBody::Flows(c) => {
                flows_brace(&PreLieRing::from_constants(&self.group, c.clone())?)
            }
            BraceBody::Cayley(t) => Brace::from_table(&self.group, t.clone()),
        }
    }

    /// Cayley rows for every pair of `b`.
    pub fn cayley(b: &Brace) -> Self {
        let g = b.group();
        let all: Vec<Element> = g.elements().collect();
        let table = match b.table() {
            Some(t) => t.to_vec(),
            None => all
                .iter()
                .flat_map(|x| all.iter().map(move |y| (x, y)))
                .map(|(x, y)| g.index_of(&b.circ(x, y)) as u32)
                .collect(),
        };
        Self {
            group: g.clone(),
            body: BraceBody::Cayley(table),
        }
    }
}

/// Significant lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let l = raw.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_int<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, FormatError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected {what}, found '{tok}'")))
}

struct Header {
    kind: &'static str,
    group: PGroup,
}

fn parse_header<'a, I>(it: &mut I) -> Result<Header, FormatError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (ln, l) = it.next().ok_or_else(|| syntax(0, "empty document"))?;
    let kind = match l.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["prelie", "v1"] => "prelie",
        ["brace", "v1"] => "brace",
        _ => {
            return Err(syntax(
                ln,
                format!("expected 'prelie v1' or 'brace v1', found '{l}'"),
            ))
        }
    };
    let (ln, l) = it.next().ok_or_else(|| syntax(ln, "missing 'p' line"))?;
    let p: u64 = match l.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["p", v] => parse_int(ln, v, "a prime")?,
        _ => return Err(syntax(ln, format!("expected 'p <prime>', found '{l}'"))),
    };
    let (ln, l) = it
        .next()
        .ok_or_else(|| syntax(ln, "missing 'factors' line"))?;
    let mut toks = l.split_whitespace();
    if toks.next() != Some("factors") {
        return Err(syntax(
            ln,
            format!("expected 'factors <e_1> ...', found '{l}'"),
        ));
    }
    let factors = toks
        .map(|t| parse_int::<u32>(ln, t, "an exponent"))
        .collect::<Result<Vec<_>, _>>()?;
    let group = if factors.is_empty() {
        PGroup::trivial(p)
    } else {
        PGroup::new(p, &factors)
    }
    .map_err(|source| FormatError::Invalid { line: ln, source })?;
    Ok(Header { kind, group })
}

/// Parses `sc j k -> ...` into `(j, k, value)`, 0-based.
fn parse_sc(ln: usize, l: &str, g: &PGroup) -> Result<(usize, usize, Element), FormatError> {
    let toks: Vec<&str> = l.split_whitespace().collect();
    let r = g.rank();
    if toks.len() < 5 || toks[0] != "sc" || toks[3] != "->" {
        return Err(syntax(
            ln,
            format!("expected 'sc j k -> coeff l ...', found '{l}'"),
        ));
    }
    let index = |t: &str| -> Result<usize, FormatError> {
        let i: usize = parse_int(ln, t, "a generator index")?;
        if i == 0 || i > r {
            return Err(syntax(ln, format!("generator index {i} outside 1..={r}")));
        }
        Ok(i - 1)
    };
    let (j, k) = (index(toks[1])?, index(toks[2])?);
    let rhs = &toks[4..];
    let mut coords = vec![0u64; r];
    if rhs != ["0"] {
        if rhs.len() % 2 != 0 {
            return Err(syntax(ln, "right-hand side must be 'coeff l' pairs"));
        }
        let mut seen = vec![false; r];
        for pair in rhs.chunks(2) {
            let c: u64 = parse_int(ln, pair[0], "a coefficient")?;
            let l = index(pair[1])?;
            if std::mem::replace(&mut seen[l], true) {
                return Err(syntax(ln, format!("generator {} repeated", l + 1)));
            }
            if c >= g.moduli()[l] {
                return Err(syntax(
                    ln,
                    format!(
                        "coefficient {c} of g{} is not canonical mod {}",
                        l + 1,
                        g.moduli()[l]
                    ),
                ));
            }
            coords[l] = c;
        }
    }
    Ok((j, k, Element::new(coords)))
}

fn parse_constants<'a, I>(it: I, g: &PGroup) -> Result<(Vec<Element>, usize), FormatError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let r = g.rank();
    let mut consts = vec![g.zero(); r * r];
    let mut set = vec![None; r * r];
    let mut last = 0;
    for (ln, l) in it {
        let (j, k, c) = parse_sc(ln, l, g)?;
        if let Some(prev) = set[j * r + k].replace(ln) {
            return Err(syntax(
                ln,
                format!("sc {} {} already given on line {prev}", j + 1, k + 1),
            ));
        }
        consts[j * r + k] = c;
        last = ln;
    }
    // torsion compatibility, reported against the offending line
    if let Err(source) = PreLieRing::from_constants(g, consts.clone()) {
        let line = match source {
            braceflow_core::Error::Torsion { j, k, .. } => {
                set[(j - 1) * r + (k - 1)].unwrap_or(last)
            }
            _ => last,
        };
        return Err(FormatError::Invalid { line, source });
    }
    Ok((consts, last))
}

fn parse_element(ln: usize, tok: &str, g: &PGroup) -> Result<Element, FormatError> {
    let inner = tok
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| syntax(ln, format!("expected '(c1,...,cr)', found '{tok}'")))?;
    let coords = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|c| parse_int::<u64>(ln, c.trim(), "a coordinate"))
            .collect::<Result<Vec<_>, _>>()?
    };
    let e = Element::new(coords);
    g.check(&e)
        .map_err(|source| FormatError::Invalid { line: ln, source })?;
    Ok(e)
}

/// `(a) ∘ (b) = (c)`; whitespace inside the parentheses is allowed.
fn parse_row(ln: usize, l: &str, g: &PGroup) -> Result<(Element, Element, Element), FormatError> {
    let bad = || syntax(ln, format!("expected '(a) ∘ (b) = (c)', found '{l}'"));
    let (lhs, rhs) = l.split_once('=').ok_or_else(bad)?;
    let close = lhs.find(')').ok_or_else(bad)?;
    let (a, rest) = lhs.split_at(close + 1);
    let b = rest.trim_start();
    let b = b
        .strip_prefix('∘')
        .or_else(|| b.strip_prefix('o'))
        .ok_or_else(bad)?;
    let squash = |s: &str| s.split_whitespace().collect::<String>();
    Ok((
        parse_element(ln, &squash(a), g)?,
        parse_element(ln, &squash(b), g)?,
        parse_element(ln, &squash(rhs), g)?,
    ))
}

fn parse_cayley<'a, I>(it: I, g: &PGroup, header_line: usize) -> Result<Vec<u32>, FormatError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    if !g.is_enumerable() || g.order() > u32::MAX as u64 {
        return Err(FormatError::Invalid {
            line: header_line,
            source: braceflow_core::Error::TooLarge(g.order()),
        });
    }
    let n = g.order() as usize;
    let mut table = vec![u32::MAX; n * n];
    let mut last = header_line;
    for (ln, l) in it {
        let (a, b, c) = parse_row(ln, l, g)?;
        let slot = &mut table[g.index_of(&a) as usize * n + g.index_of(&b) as usize];
        if *slot != u32::MAX {
            return Err(syntax(ln, format!("{a} ∘ {b} given twice")));
        }
        *slot = g.index_of(&c) as u32;
        last = ln;
    }
    if let Some(pos) = table.iter().position(|&v| v == u32::MAX) {
        let (a, b) = (
            g.element_at((pos / n) as u64),
            g.element_at((pos % n) as u64),
        );
        return Err(syntax(last, format!("missing row for {a} ∘ {b}")));
    }
    Ok(table)
}

pub fn parse(text: &str) -> Result<Document, FormatError> {
    let mut it = lines(text).peekable();
    let Header { kind, group } = parse_header(&mut it)?;
    if kind == "prelie" {
        let (constants, _) = parse_constants(it, &group)?;
        return Ok(Document::PreLie(PreLieDoc { group, constants }));
    }
    let body = match it.peek().copied() {
        None => return Err(syntax(0, "brace document has no body")),
        Some((_, "trivial")) => {
            it.next();
            if let Some((ln, l)) = it.next() {
                return Err(syntax(ln, format!("unexpected '{l}' after 'trivial'")));
            }
            BraceBody::Trivial
        }
        Some((_, "flows")) => {
            it.next();
            BraceBody::Flows(parse_constants(it, &group)?.0)
        }
        Some((ln, _)) => BraceBody::Cayley(parse_cayley(it, &group, ln)?),
    };
    Ok(Document::Brace(BraceDoc { group, body }))
}

fn write_header(out: &mut String, kind: &str, g: &PGroup, comments: &[&str]) {
    for c in comments {
        if c.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {c}");
        }
    }
    let _ = writeln!(out, "{kind} v1");
    let _ = writeln!(out, "p {}", g.p());
    out.push_str("factors");
    for e in g.factors() {
        let _ = write!(out, " {e}");
    }
    out.push('\n');
}

fn write_constants(out: &mut String, g: &PGroup, consts: &[Element]) {
    let r = g.rank();
    for (idx, c) in consts.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let _ = write!(out, "sc {} {} ->", idx / r + 1, idx % r + 1);
        for (l, v) in c.coords().iter().enumerate().filter(|(_, v)| **v != 0) {
            let _ = write!(out, " {v} {}", l + 1);
        }
        out.push('\n');
    }
}

/// Canonical text: `sc` lines in row-major order, zero constants omitted,
/// Cayley rows in element order. Each comment becomes a leading `#` line.
pub fn serialize(doc: &Document, comments: &[&str]) -> String {
    let mut out = String::new();
    match doc {
        Document::PreLie(d) => {
            write_header(&mut out, "prelie", &d.group, comments);
            write_constants(&mut out, &d.group, &d.constants);
        }
        Document::Brace(d) => {
            let g = &d.group;
            write_header(&mut out, "brace", g, comments);
            match &d.body {
                BraceBody::Trivial => out.push_str("trivial\n"),
                BraceBody::Flows(c) => {
                    out.push_str("flows\n");
                    write_constants(&mut out, g, c);
                }
                BraceBody::Cayley(t) => {
                    let all: Vec<Element> = g.elements().collect();
                    let n = all.len();
                    for (i, v) in t.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "{} ∘ {} = {}",
                            all[i / n],
                            all[i % n],
                            all[*v as usize]
                        );
                    }
                }
            }
        }
    }
    out
}
