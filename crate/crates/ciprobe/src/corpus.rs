//! The line-oriented corpus format.
//!
//! ```text
//! # comment
//! entry m2_xy
//! field Q                 # or: field Fp 7
//! ring x, y
//! ideal x^2, x*y, y^2
//! bounds hdeg=5 intdeg=12 reslen=8
//! expect ci=false h1zero=false conormalfree=false lenstra=trivial
//! ```
//!
//! `field` defaults to `Q` and `bounds` to the defaults below. Optional
//! frozen data: `expect deviations=3,2,3,6,11`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use ciprobe_core::exactalg::{parse_poly_list, FieldSpec, PolyRing};
use ciprobe_core::groebner::Ideal;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub hdeg: u32,
    pub intdeg: u32,
    pub reslen: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { hdeg: 5, intdeg: 12, reslen: 8 }
    }
}

impl Bounds {
    /// Applies `key=value` pairs (space or comma separated) on top of `self`.
    pub fn with_overrides(mut self, text: &str) -> std::result::Result<Self, (usize, String)> {
        for (off, tok) in tokens(text) {
            let (k, v) = tok.split_once('=').ok_or((off, format!("expected key=value, got `{tok}`")))?;
            let n: u64 = v.parse().map_err(|_| (off, format!("`{v}` is not a number")))?;
            match k {
                "hdeg" => self.hdeg = n as u32,
                "intdeg" => self.intdeg = n as u32,
                "reslen" => self.reslen = n as usize,
                _ => return Err((off, format!("unknown bound `{k}`"))),
            }
        }
        if self.hdeg < 2 {
            return Err((0, "hdeg must be at least 2".into()));
        }
        Ok(self)
    }
}

impl std::fmt::Display for Bounds {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "hdeg={} intdeg={} reslen={}", self.hdeg, self.intdeg, self.reslen)
    }
}

/// Whitespace/comma separated tokens with their byte offsets.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        let sep = c.is_whitespace() || c == ',';
        match (sep, start) {
            (true, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LenstraGolden {
    Trivial,
    Nontrivial,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectations {
    pub ci: Option<bool>,
    pub h1zero: Option<bool>,
    pub conormalfree: Option<bool>,
    pub lenstra: Option<LenstraGolden>,
    pub deviations: Option<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub ideal: Ideal,
    pub bounds: Bounds,
    pub expect: Expectations,
    /// Line of the `entry` keyword.
    pub line: usize,
}

impl CorpusEntry {
    pub fn ring(&self) -> &Arc<PolyRing> {
        self.ideal.ring()
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.ideal.generators().iter().map(|g| g.to_string()).collect()
    }

    /// Canonical text, used for cache keys.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "entry {}\nfield {}\nring {}\nideal {}\nbounds {}\nexpect {:?}\n",
            self.name,
            self.field,
            self.vars.join(", "),
            self.generator_strings().join(", "),
            self.bounds,
            self.expect
        );
        s
    }

    /// Builds an ad-hoc entry from command-line pieces.
    pub fn from_parts(name: &str, field: &str, ring: &str, ideal: &str, bounds: Bounds) -> Result<Self> {
        let text = format!("entry {name}\nfield {field}\nring {ring}\nideal {ideal}\nbounds {bounds}\n");
        // Report positions relative to the piece the user typed.
        let mut v = parse_corpus(&text).map_err(|e| match e {
            HarnessError::Parse { line, column, message } => {
                let (flag, prefix) = match line {
                    2 => ("--field", "field ".len()),
                    3 => ("--ring", "ring ".len()),
                    4 => ("--ideal", "ideal ".len()),
                    _ => ("--bounds", "bounds ".len()),
                };
                HarnessError::Usage(format!("{flag}, column {}: {message}", column.saturating_sub(prefix).max(1)))
            }
            other => other,
        })?;
        Ok(v.remove(0))
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Parse { line, column, message: message.into() }
}

#[derive(Default)]
struct Partial {
    name: String,
    line: usize,
    field: Option<FieldSpec>,
    vars: Option<Vec<String>>,
    ideal: Option<Ideal>,
    bounds: Option<Bounds>,
    expect: Expectations,
}

impl Partial {
    fn finish(self) -> Result<CorpusEntry> {
        let ideal = self.ideal.ok_or_else(|| err(self.line, 1, format!("entry `{}` has no ideal line", self.name)))?;
        let e = &self.expect;
        if e.ci == Some(true) && (e.h1zero == Some(false) || e.conormalfree == Some(false)) {
            return Err(err(self.line, 1, format!("entry `{}`: ci=true requires h1zero and conormalfree", self.name)));
        }
        Ok(CorpusEntry {
            name: self.name,
            field: self.field.unwrap_or(FieldSpec::Rationals),
            vars: self.vars.unwrap_or_default(),
            ideal,
            bounds: self.bounds.unwrap_or_default(),
            expect: self.expect,
            line: self.line,
        })
    }
}

fn parse_field(text: &str, line: usize, col: usize) -> Result<FieldSpec> {
    let t: Vec<&str> = text.split_whitespace().collect();
    match t.as_slice() {
        ["Q"] | ["QQ"] => Ok(FieldSpec::Rationals),
        ["Fp", p] => {
            let p: u64 = p.parse().map_err(|_| err(line, col, format!("`{p}` is not a number")))?;
            FieldSpec::new_prime(p).map_err(|e| err(line, col, e.to_string()))
        }
        [f] if f.starts_with('F') && f[1..].parse::<u64>().is_ok() => {
            FieldSpec::new_prime(f[1..].parse().unwrap()).map_err(|e| err(line, col, e.to_string()))
        }
        _ => Err(err(line, col, format!("unknown field `{text}`; use `Q` or `Fp <p>`"))),
    }
}

fn parse_bool(v: &str, line: usize, col: usize) -> Result<bool> {
    match v {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        _ => Err(err(line, col, format!("`{v}` is not a boolean"))),
    }
}

fn parse_expect(text: &str, base: usize, line: usize, e: &mut Expectations) -> Result<()> {
    for (off, tok) in text.split_whitespace().map(|t| (t.as_ptr() as usize - text.as_ptr() as usize, t)) {
        let col = base + off;
        let (k, v) = tok.split_once('=').ok_or_else(|| err(line, col, format!("expected key=value, got `{tok}`")))?;
        match k {
            "ci" => e.ci = Some(parse_bool(v, line, col)?),
            "h1zero" => e.h1zero = Some(parse_bool(v, line, col)?),
            "conormalfree" => e.conormalfree = Some(parse_bool(v, line, col)?),
            "lenstra" => {
                e.lenstra = Some(match v {
                    "trivial" => LenstraGolden::Trivial,
                    "nontrivial" => LenstraGolden::Nontrivial,
                    _ => return Err(err(line, col, format!("lenstra must be trivial or nontrivial, got `{v}`"))),
                })
            }
            "deviations" => {
                let d: std::result::Result<Vec<usize>, _> = v.split(',').map(str::parse).collect();
                e.deviations = Some(d.map_err(|_| err(line, col, format!("bad deviation list `{v}`")))?);
            }
            _ => return Err(err(line, col, format!("unknown expectation `{k}`"))),
        }
    }
    Ok(())
}

pub fn parse_corpus(src: &str) -> Result<Vec<CorpusEntry>> {
    let mut out: Vec<CorpusEntry> = Vec::new();
    let mut names = BTreeSet::new();
    let mut cur: Option<Partial> = None;
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap();
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = body.len() - trimmed.len();
        let (kw, rest) = match trimmed.find(char::is_whitespace) {
            Some(i) => (&trimmed[..i], &trimmed[i..]),
            None => (trimmed, ""),
        };
        let arg_off = indent + kw.len() + (rest.len() - rest.trim_start().len());
        let arg = rest.trim();
        let col = arg_off + 1;
        if kw == "entry" {
            if let Some(p) = cur.take() {
                out.push(p.finish()?);
            }
            if arg.is_empty() || arg.contains(char::is_whitespace) {
                return Err(err(line, col, "entry needs a single-word name"));
            }
            if !names.insert(arg.to_string()) {
                return Err(err(line, col, format!("duplicate entry name `{arg}`")));
            }
            cur = Some(Partial { name: arg.to_string(), line, ..Default::default() });
            continue;
        }
        let p = cur.as_mut().ok_or_else(|| err(line, indent + 1, format!("`{kw}` before any entry line")))?;
        match kw {
            "field" => {
                if p.vars.is_some() {
                    return Err(err(line, indent + 1, "field must precede ring"));
                }
                p.field = Some(parse_field(arg, line, col)?);
            }
            "ring" => {
                let vars: Vec<String> = arg.split(',').map(|v| v.trim().to_string()).collect();
                if vars.iter().any(String::is_empty) {
                    return Err(err(line, col, "empty variable name in ring"));
                }
                PolyRing::new(&vars, p.field.unwrap_or(FieldSpec::Rationals)).map_err(|e| err(line, col, e.to_string()))?;
                p.vars = Some(vars);
            }
            "ideal" => {
                let vars = p.vars.as_ref().ok_or_else(|| err(line, indent + 1, "ideal before ring"))?;
                let ring = PolyRing::new(vars, p.field.unwrap_or(FieldSpec::Rationals))?;
                let gens = parse_poly_list(&ring, arg).map_err(|e| match e {
                    ciprobe_core::Error::Parse { column, message, .. } => err(line, arg_off + column, message),
                    e => err(line, col, e.to_string()),
                })?;
                p.ideal = Some(Ideal::new(&ring, gens).map_err(|e| err(line, col, e.to_string()))?);
            }
            "bounds" => {
                p.bounds = Some(Bounds::default().with_overrides(arg).map_err(|(o, m)| err(line, col + o, m))?);
            }
            "expect" => parse_expect(arg, col, line, &mut p.expect)?,
            _ => return Err(err(line, indent + 1, format!("unknown keyword `{kw}`"))),
        }
    }
    if let Some(p) = cur.take() {
        out.push(p.finish()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_an_entry() {
        let c =
            parse_corpus("# c\nentry a\nfield Fp 7\nring x, y\nideal x^2, xy\nbounds intdeg=10\nexpect ci=false deviations=2,1\n").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].field, FieldSpec::PrimeField(7));
        assert_eq!(c[0].bounds, Bounds { hdeg: 5, intdeg: 10, reslen: 8 });
        assert_eq!(c[0].expect.deviations, Some(vec![2, 1]));
        assert_eq!(c[0].generator_strings(), vec!["x^2", "x*y"]);
    }

    #[test]
    fn empty_corpus() {
        assert!(parse_corpus("# nothing\n\n").unwrap().is_empty());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_corpus("entry a\nring x, y\nideal x^2, x + w\n").unwrap_err();
        match e {
            HarnessError::Parse { line, column, .. } => assert_eq!((line, column), (3, 16)),
            e => panic!("{e}"),
        }
        let e = parse_corpus("entry a\nring x\n  nonsense 3\n").unwrap_err();
        assert!(matches!(e, HarnessError::Parse { line: 3, column: 3, .. }));
        let e = parse_corpus("entry a\nring x\nideal x\nexpect ci=true h1zero=false\n").unwrap_err();
        assert!(matches!(e, HarnessError::Parse { line: 1, .. }));
        let e = parse_corpus("entry a\nring x\nideal x^2 + x\n").unwrap_err();
        assert!(matches!(e, HarnessError::Parse { line: 3, column: 7, .. }));
    }
}
