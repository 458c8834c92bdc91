//! Suite specification files: `key = value` lines, `#` comments, bracketed
//! lists. Unknown keys and bad values are reported with line and column.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;
use wres_core::operator_library::Family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    Identities,
    Parametrix,
    Cases,
    Psi,
    Lichnerowicz,
    Interior,
    Convention,
    Oracle,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::Identities,
        CheckKind::Parametrix,
        CheckKind::Cases,
        CheckKind::Psi,
        CheckKind::Lichnerowicz,
        CheckKind::Interior,
        CheckKind::Convention,
        CheckKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Identities => "identities",
            CheckKind::Parametrix => "parametrix",
            CheckKind::Cases => "cases",
            CheckKind::Psi => "psi",
            CheckKind::Lichnerowicz => "lichnerowicz",
            CheckKind::Interior => "interior",
            CheckKind::Convention => "convention",
            CheckKind::Oracle => "oracle",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            CheckKind::Identities => "Clifford trace identities, half-plane projections, cancellations",
            CheckKind::Parametrix => "order -1 and -2 parametrix symbols against closed forms",
            CheckKind::Cases => "the five boundary cases for each family",
            CheckKind::Psi => "sum of the boundary cases",
            CheckKind::Lichnerowicz => "Laplace-type data of the twisted squares against the stated formulas",
            CheckKind::Interior => "interior residue integrands tr(s/6 + E)",
            CheckKind::Convention => "both sign readings of E for the Bochner-form square",
            CheckKind::Oracle => "random exact matrix substitution of the symbolic identities",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        CheckKind::ALL.into_iter().find(|c| c.name() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteSpec {
    pub families: Vec<Family>,
    pub checks: BTreeSet<CheckKind>,
    pub oracle_rank: usize,
    pub oracle_seeds: u64,
    pub seed: u64,
    pub output: OutputFormat,
}

impl Default for SuiteSpec {
    fn default() -> Self {
        SuiteSpec {
            families: vec![Family::Dirac, Family::Signature],
            checks: CheckKind::ALL.into_iter().collect(),
            oracle_rank: 2,
            oracle_seeds: 100,
            seed: 0,
            output: OutputFormat::Json,
        }
    }
}

pub const KEYS: [&str; 6] = ["family", "checks", "oracle_rank", "oracle_seeds", "seed", "output"];
const FAMILIES: [&str; 3] = ["dirac", "signature", "both"];
const OUTPUTS: [&str; 3] = ["json", "markdown", "md"];
pub const MAX_ORACLE_RANK: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}{}", suggestion.as_ref().map(|s| format!(" (did you mean `{}`?)", s)).unwrap_or_default())]
pub struct SpecError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
    pub suggestion: Option<String>,
}

fn suggest(word: &str, options: &[&str]) -> Option<String> {
    options
        .iter()
        .map(|o| (strsim::levenshtein(word, o), *o))
        .filter(|(d, o)| *d <= 2.max(o.len() / 3))
        .min()
        .map(|(_, o)| o.to_string())
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, col: usize, msg: impl Into<String>, suggestion: Option<String>) -> SpecError {
        SpecError { line: self.no, col, msg: msg.into(), suggestion }
    }
}

/// Column (1-based, in characters) of byte offset `b` in `s`.
fn col_of(s: &str, b: usize) -> usize {
    s[..b].chars().count() + 1
}

/// Items of a bracketed list with their byte offsets.
fn list_items<'a>(l: &Line<'a>, start: usize) -> Result<Vec<(usize, &'a str)>, SpecError> {
    let v = &l.text[start..];
    let close = match v.find(']') {
        Some(c) => c,
        None => return Err(l.err(col_of(l.text, start), "unterminated list, expected `]`", None)),
    };
    if !v[close + 1..].trim().is_empty() {
        return Err(l.err(col_of(l.text, start + close + 1), "unexpected text after `]`", None));
    }
    let inner = &v[1..close];
    let mut out = Vec::new();
    let mut off = start + 1;
    if inner.trim().is_empty() {
        return Ok(out);
    }
    for part in inner.split(',') {
        let lead = part.len() - part.trim_start().len();
        let item = part.trim();
        if item.is_empty() {
            return Err(l.err(col_of(l.text, off + lead), "empty list item", None));
        }
        if item.contains(char::is_whitespace) {
            return Err(l.err(col_of(l.text, off + lead), "list items must be separated by `,`", None));
        }
        out.push((off + lead, item));
        off += part.len() + 1;
    }
    Ok(out)
}

fn parse_uint(l: &Line, at: usize, v: &str) -> Result<u64, SpecError> {
    v.parse::<u64>().map_err(|_| l.err(col_of(l.text, at), format!("expected an unsigned integer, found `{}`", v), None))
}

pub fn parse_spec(text: &str) -> Result<SuiteSpec, SpecError> {
    let mut spec = SuiteSpec::default();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let l = Line { no: i + 1, text: body };
        if body.trim().is_empty() {
            continue;
        }
        let kstart = body.len() - body.trim_start().len();
        let eq = match body.find('=') {
            Some(e) => e,
            None => return Err(l.err(col_of(body, kstart), "expected `key = value`", None)),
        };
        let key = body[..eq].trim();
        if key.is_empty() {
            return Err(l.err(col_of(body, kstart), "missing key before `=`", None));
        }
        let Some(&key) = KEYS.iter().find(|k| **k == key) else {
            return Err(l.err(col_of(body, kstart), format!("unknown key `{}`", key), suggest(key, &KEYS)));
        };
        if !seen.insert(key) {
            return Err(l.err(col_of(body, kstart), format!("duplicate key `{}`", key), None));
        }
        let rest = &body[eq + 1..];
        let vstart = eq + 1 + (rest.len() - rest.trim_start().len());
        let value = rest.trim();
        if value.is_empty() {
            return Err(l.err(col_of(body, eq + 1), format!("missing value for `{}`", key), None));
        }
        let is_list = value.starts_with('[');
        if key != "checks" && is_list {
            return Err(l.err(col_of(body, vstart), format!("`{}` takes a single value, not a list", key), None));
        }
        match key {
            "family" => {
                spec.families = match value {
                    "dirac" => vec![Family::Dirac],
                    "signature" => vec![Family::Signature],
                    "both" => vec![Family::Dirac, Family::Signature],
                    _ => {
                        return Err(l.err(
                            col_of(body, vstart),
                            format!("unknown family `{}`, expected one of dirac, signature, both", value),
                            suggest(value, &FAMILIES),
                        ))
                    }
                }
            }
            "checks" => {
                if !is_list {
                    return Err(l.err(col_of(body, vstart), "`checks` takes a bracketed list, e.g. [cases, psi]", None));
                }
                let names: Vec<&str> = CheckKind::ALL.iter().map(|c| c.name()).collect();
                let mut set = BTreeSet::new();
                for (at, item) in list_items(&l, vstart)? {
                    let c = item.parse::<CheckKind>().map_err(|_| {
                        l.err(col_of(body, at), format!("unknown check `{}`", item), suggest(item, &names))
                    })?;
                    set.insert(c);
                }
                spec.checks = set;
            }
            "oracle_rank" => {
                let r = parse_uint(&l, vstart, value)? as usize;
                if r == 0 || r > MAX_ORACLE_RANK {
                    return Err(l.err(col_of(body, vstart), format!("oracle_rank must be in 1..={}", MAX_ORACLE_RANK), None));
                }
                spec.oracle_rank = r;
            }
            "oracle_seeds" => {
                let n = parse_uint(&l, vstart, value)?;
                if n == 0 {
                    return Err(l.err(col_of(body, vstart), "oracle_seeds must be positive", None));
                }
                spec.oracle_seeds = n;
            }
            "seed" => spec.seed = parse_uint(&l, vstart, value)?,
            "output" => {
                spec.output = value.parse().map_err(|_| {
                    l.err(col_of(body, vstart), format!("unknown output `{}`, expected json or markdown", value), suggest(value, &OUTPUTS))
                })?
            }
            _ => unreachable!(),
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_and_checks() {
        let s = parse_spec("family = dirac\nchecks = [cases, psi]").unwrap();
        assert_eq!(s.families, vec![Family::Dirac]);
        assert_eq!(s.checks, [CheckKind::Cases, CheckKind::Psi].into_iter().collect());
    }

    #[test]
    fn empty_is_default() {
        assert_eq!(parse_spec("").unwrap(), SuiteSpec::default());
        assert_eq!(parse_spec("# only a comment\n\n").unwrap(), SuiteSpec::default());
    }

    #[test]
    fn misspelt_family() {
        let e = parse_spec("family = diracc").unwrap_err();
        assert_eq!((e.line, e.col), (1, 10));
        assert_eq!(e.suggestion.as_deref(), Some("dirac"));
    }

    #[test]
    fn unknown_key() {
        let e = parse_spec("seed = 1\n  chekcs = [psi]").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        assert_eq!(e.suggestion.as_deref(), Some("checks"));
    }

    #[test]
    fn malformed_lists() {
        let e = parse_spec("checks = [cases, psi").unwrap_err();
        assert!(e.msg.contains("unterminated"));
        let e = parse_spec("checks = [cases,, psi]").unwrap_err();
        assert_eq!(e.col, 17);
        let e = parse_spec("checks = [cases, psy]").unwrap_err();
        assert_eq!((e.col, e.suggestion.as_deref()), (18, Some("psi")));
    }

    #[test]
    fn numbers_and_comments() {
        let s = parse_spec("seed = 7 # fixed\noracle_rank = 3\noutput = markdown").unwrap();
        assert_eq!((s.seed, s.oracle_rank, s.output), (7, 3, OutputFormat::Markdown));
        assert!(parse_spec("oracle_rank = 0").is_err());
        assert!(parse_spec("seed = -1").is_err());
        assert!(parse_spec("seed = 1\nseed = 2").is_err());
    }
}
