//! Free noncommutative algebra of twist endomorphisms on the auxiliary bundle
//! `F`, its adjoint involution, and the formal cyclic trace `TrF`.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scalar_core::{GaussRational, ScalarExpr, SparseMat};

/// Maximum nesting depth of [`FAtom::Der`].
pub const MAX_DER_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("derivative nesting deeper than {MAX_DER_DEPTH}")]
    DerTooDeep,
    #[error("curvature atom with equal indices is zero")]
    DegenerateCurvature,
    #[error("unassigned atom {0}")]
    Unassigned(String),
    #[error("dimension mismatch: atom {atom} has size {got}, expected {expected}")]
    DimensionMismatch { atom: String, got: usize, expected: usize },
    #[error("at column {col}: {msg}")]
    Parse { col: usize, msg: String },
}

/// Generators of the twist algebra. Frame indices run over `1..=4`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FAtom {
    Phi(u8),
    PhiStar(u8),
    SigmaF(u8),
    SigmaFe(u8),
    OmegaF(u8),
    OmegaFStar(u8),
    RF(u8, u8),
    RFe(u8, u8),
    Der(u8, Box<FAtom>),
}

impl FAtom {
    /// Curvature atom normalised to `i < j`; returns the sign absorbed.
    pub fn rf(i: u8, j: u8) -> Result<(i32, FAtom), CoeffError> {
        Self::curv(i, j, FAtom::RF)
    }

    pub fn rfe(i: u8, j: u8) -> Result<(i32, FAtom), CoeffError> {
        Self::curv(i, j, FAtom::RFe)
    }

    fn curv(i: u8, j: u8, f: fn(u8, u8) -> FAtom) -> Result<(i32, FAtom), CoeffError> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Ok((1, f(i, j))),
            std::cmp::Ordering::Greater => Ok((-1, f(j, i))),
            std::cmp::Ordering::Equal => Err(CoeffError::DegenerateCurvature),
        }
    }

    /// `D[k]{a}`, the derivative of `a` along `e_k`.
    pub fn der(k: u8, a: FAtom) -> Result<FAtom, CoeffError> {
        if a.depth() >= MAX_DER_DEPTH {
            return Err(CoeffError::DerTooDeep);
        }
        Ok(FAtom::Der(k, Box::new(a)))
    }

    pub fn depth(&self) -> usize {
        match self {
            FAtom::Der(_, a) => 1 + a.depth(),
            _ => 0,
        }
    }

    /// `a* = sign * atom`.
    pub fn star(&self) -> (i32, FAtom) {
        match self {
            FAtom::Phi(j) => (1, FAtom::PhiStar(*j)),
            FAtom::PhiStar(j) => (1, FAtom::Phi(*j)),
            FAtom::OmegaF(j) => (1, FAtom::OmegaFStar(*j)),
            FAtom::OmegaFStar(j) => (1, FAtom::OmegaF(*j)),
            FAtom::SigmaF(_) | FAtom::SigmaFe(_) | FAtom::RF(..) | FAtom::RFe(..) => (-1, self.clone()),
            FAtom::Der(k, a) => {
                let (s, b) = a.star();
                (s, FAtom::Der(*k, Box::new(b)))
            }
        }
    }

    /// True for atoms defined as the adjoint of a partner.
    fn is_starred(&self) -> bool {
        match self {
            FAtom::PhiStar(_) | FAtom::OmegaFStar(_) => true,
            FAtom::Der(_, a) => a.is_starred(),
            _ => false,
        }
    }
}

impl fmt::Display for FAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FAtom::Phi(j) => write!(f, "Phi[{}]", j),
            FAtom::PhiStar(j) => write!(f, "PhiStar[{}]", j),
            FAtom::SigmaF(j) => write!(f, "SigmaF[{}]", j),
            FAtom::SigmaFe(j) => write!(f, "SigmaFe[{}]", j),
            FAtom::OmegaF(j) => write!(f, "OmegaF[{}]", j),
            FAtom::OmegaFStar(j) => write!(f, "OmegaFStar[{}]", j),
            FAtom::RF(i, j) => write!(f, "RF[{},{}]", i, j),
            FAtom::RFe(i, j) => write!(f, "RFe[{},{}]", i, j),
            FAtom::Der(k, a) => write!(f, "D[{}]{{{}}}", k, a),
        }
    }
}

impl fmt::Debug for FAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A word in the free algebra; the empty word is the identity on `F`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FWord(pub Vec<FAtom>);

impl FWord {
    pub fn empty() -> Self {
        FWord(Vec::new())
    }

    pub fn atom(a: FAtom) -> Self {
        FWord(vec![a])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &FWord) -> FWord {
        let mut v = self.0.clone();
        v.extend(o.0.iter().cloned());
        FWord(v)
    }

    /// Reversed word of starred atoms, with the accumulated sign.
    pub fn adjoint(&self) -> (i32, FWord) {
        let mut sign = 1;
        let mut v = Vec::with_capacity(self.0.len());
        for a in self.0.iter().rev() {
            let (s, b) = a.star();
            sign *= s;
            v.push(b);
        }
        (sign, FWord(v))
    }

    /// Leibniz rule for the derivative along `e_k`.
    pub fn der(&self, k: u8) -> Result<Vec<FWord>, CoeffError> {
        let mut out = Vec::with_capacity(self.0.len());
        for p in 0..self.0.len() {
            let mut v = self.0.clone();
            v[p] = FAtom::der(k, v[p].clone())?;
            out.push(FWord(v));
        }
        Ok(out)
    }

    /// Lexicographically least cyclic rotation.
    pub fn cyclic_canonical(&self) -> FWord {
        let n = self.0.len();
        let mut best = self.0.clone();
        for r in 1..n {
            let mut cand = self.0[r..].to_vec();
            cand.extend_from_slice(&self.0[..r]);
            if cand < best {
                best = cand;
            }
        }
        FWord(best)
    }

    pub fn parse(s: &str) -> Result<FWord, CoeffError> {
        let cs: Vec<char> = s.chars().collect();
        let mut p = WordParser { cs: &cs, pos: 0 };
        p.skip_ws();
        if p.pos == cs.len() {
            return Err(p.err("empty word"));
        }
        if p.peek() == Some('1') {
            p.pos += 1;
            p.skip_ws();
            if p.pos != cs.len() {
                return Err(p.err("trailing input"));
            }
            return Ok(FWord::empty());
        }
        let mut atoms = vec![p.atom()?];
        loop {
            p.skip_ws();
            match p.peek() {
                None => break,
                Some('*') => {
                    p.pos += 1;
                    p.skip_ws();
                    atoms.push(p.atom()?);
                }
                Some(_) => return Err(p.err("expected `*` between atoms")),
            }
        }
        Ok(FWord(atoms))
    }
}

struct WordParser<'a> {
    cs: &'a [char],
    pos: usize,
}

impl WordParser<'_> {
    fn peek(&self) -> Option<char> {
        self.cs.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> CoeffError {
        CoeffError::Parse { col: self.pos + 1, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.peek().map_or(false, char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<(), CoeffError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c)))
        }
    }

    fn index(&mut self) -> Result<u8, CoeffError> {
        let st = self.pos;
        while self.peek().map_or(false, |c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let lit: String = self.cs[st..self.pos].iter().collect();
        match lit.parse::<u8>() {
            Ok(v) if (1..=4).contains(&v) => Ok(v),
            _ => {
                self.pos = st;
                Err(self.err("expected a frame index in 1..=4"))
            }
        }
    }

    fn atom(&mut self) -> Result<FAtom, CoeffError> {
        let st = self.pos;
        while self.peek().map_or(false, |c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        let name: String = self.cs[st..self.pos].iter().collect();
        self.expect('[')?;
        let i = self.index()?;
        let two = matches!(name.as_str(), "RF" | "RFe");
        let j = if two {
            self.expect(',')?;
            Some(self.index()?)
        } else {
            None
        };
        self.expect(']')?;
        let a = match (name.as_str(), j) {
            ("Phi", None) => FAtom::Phi(i),
            ("PhiStar", None) => FAtom::PhiStar(i),
            ("SigmaF", None) => FAtom::SigmaF(i),
            ("SigmaFe", None) => FAtom::SigmaFe(i),
            ("OmegaF", None) => FAtom::OmegaF(i),
            ("OmegaFStar", None) => FAtom::OmegaFStar(i),
            ("RF", Some(j)) if i < j => FAtom::RF(i, j),
            ("RFe", Some(j)) if i < j => FAtom::RFe(i, j),
            ("RF" | "RFe", Some(_)) => {
                return Err(CoeffError::Parse { col: st + 1, msg: "curvature indices must satisfy i < j".into() })
            }
            ("D", None) => {
                self.expect('{')?;
                let inner = self.atom()?;
                self.expect('}')?;
                return FAtom::der(i, inner).map_err(|e| CoeffError::Parse { col: st + 1, msg: e.to_string() });
            }
            _ => return Err(CoeffError::Parse { col: st + 1, msg: format!("unknown atom `{}`", name) }),
        };
        Ok(a)
    }
}

impl fmt::Display for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Linear combination of words with commuting-symbol coefficients.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct FLin(pub BTreeMap<FWord, ScalarExpr>);

impl FLin {
    pub fn word(w: FWord) -> Self {
        FLin::default().plus(w, &ScalarExpr::one())
    }

    pub fn plus(mut self, w: FWord, c: &ScalarExpr) -> Self {
        let e = self.0.entry(w.clone()).or_default();
        *e = e.add(c);
        if e.is_zero() {
            self.0.remove(&w);
        }
        self
    }
}

/// Multiset of cyclically normalised trace atoms, sorted.
pub type TraceKey = Vec<FWord>;

pub fn trace_key(words: impl IntoIterator<Item = FWord>) -> TraceKey {
    let mut k: Vec<FWord> = words.into_iter().map(|w| w.cyclic_canonical()).collect();
    k.sort();
    k
}

/// Linear combination of products of `TrF[...]` atoms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TraceExpr(BTreeMap<TraceKey, ScalarExpr>);

impl TraceExpr {
    pub fn zero() -> Self {
        TraceExpr::default()
    }

    /// `c * TrF[w]`.
    pub fn tr(w: FWord, c: ScalarExpr) -> Self {
        TraceExpr::zero().plus(trace_key([w]), &c)
    }

    /// `c * dimF`.
    pub fn dim_f(c: ScalarExpr) -> Self {
        TraceExpr::tr(FWord::empty(), c)
    }

    pub fn plus(mut self, k: TraceKey, c: &ScalarExpr) -> Self {
        self.add_term(k, c);
        self
    }

    pub fn add_term(&mut self, k: TraceKey, c: &ScalarExpr) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(k.clone()).or_default();
        *e = e.add(c);
        if e.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TraceKey, &ScalarExpr)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &TraceExpr) -> TraceExpr {
        let mut out = self.clone();
        for (k, c) in &o.0 {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> TraceExpr {
        TraceExpr(self.0.iter().map(|(k, c)| (k.clone(), c.neg())).collect())
    }

    pub fn sub(&self, o: &TraceExpr) -> TraceExpr {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &ScalarExpr) -> TraceExpr {
        let mut out = TraceExpr::zero();
        for (k, c) in &self.0 {
            out.add_term(k.clone(), &c.mul(s));
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> TraceExpr {
        let mut out = TraceExpr::zero();
        for (k, c) in &self.0 {
            out.add_term(k.clone(), &f(c));
        }
        out
    }

    pub fn substitute(&self, asg: &Assignment) -> Result<ScalarExpr, CoeffError> {
        let mut out = ScalarExpr::zero();
        for (k, c) in &self.0 {
            let mut v = GaussRational::one();
            for w in k {
                v = &v * &asg.eval_word(w)?.trace();
            }
            out = out.add(&c.scale(&v));
        }
        Ok(out)
    }
}

/// `TrF` of a linear combination of words.
pub fn trace_f(p: &FLin) -> TraceExpr {
    let mut out = TraceExpr::zero();
    for (w, c) in &p.0 {
        out.add_term(trace_key([w.clone()]), c);
    }
    out
}

impl fmt::Display for TraceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.0 {
            let tr: Vec<String> = k
                .iter()
                .map(|w| if w.is_empty() { "dimF".to_string() } else { format!("TrF[{}]", w) })
                .collect();
            let tr = tr.join("*");
            let cs = c.to_string();
            let single = c.terms().count() == 1;
            let t = if tr.is_empty() {
                if single { cs } else { format!("({})", cs) }
            } else if cs == "1" {
                tr
            } else if cs == "-1" {
                format!("-{}", tr)
            } else if single && !cs.starts_with('(') {
                format!("{}*{}", cs, tr)
            } else {
                format!("({})*{}", cs, tr)
            };
            if !first && !t.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{}", t)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for TraceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Exact matrices bound to atoms, for the numeric oracle.
#[derive(Clone, Debug)]
pub enum Assignment {
    /// Entries drawn from `{-2..2} + {-2..2}i`, deterministic in `(seed, atom)`.
    Random { k: usize, seed: u64 },
    /// Explicit bindings; starred atoms default to the adjoint of their partner.
    Explicit { k: usize, map: BTreeMap<FAtom, SparseMat<GaussRational>> },
}

impl Assignment {
    pub fn random(k: usize, seed: u64) -> Self {
        Assignment::Random { k, seed }
    }

    pub fn explicit(k: usize, map: BTreeMap<FAtom, SparseMat<GaussRational>>) -> Result<Self, CoeffError> {
        for (a, m) in &map {
            if m.dim() != k {
                return Err(CoeffError::DimensionMismatch { atom: a.to_string(), got: m.dim(), expected: k });
            }
        }
        Ok(Assignment::Explicit { k, map })
    }

    pub fn rank(&self) -> usize {
        match self {
            Assignment::Random { k, .. } | Assignment::Explicit { k, .. } => *k,
        }
    }

    pub fn value(&self, a: &FAtom) -> Result<SparseMat<GaussRational>, CoeffError> {
        if let Assignment::Explicit { map, .. } = self {
            if let Some(m) = map.get(a) {
                return Ok(m.clone());
            }
        }
        let (s, partner) = a.star();
        let sg = GaussRational::int(s as i64);
        if a.is_starred() {
            return Ok(self.value(&partner)?.conj_transpose().scale(&sg));
        }
        match self {
            Assignment::Explicit { .. } => Err(CoeffError::Unassigned(a.to_string())),
            Assignment::Random { k, seed } => {
                let base = random_matrix(*k, *seed, a);
                if partner == *a {
                    Ok(base.add(&base.conj_transpose().scale(&sg)))
                } else {
                    Ok(base)
                }
            }
        }
    }

    pub fn eval_word(&self, w: &FWord) -> Result<SparseMat<GaussRational>, CoeffError> {
        let mut acc = SparseMat::identity(self.rank());
        for a in &w.0 {
            acc = acc.mul(&self.value(a)?);
        }
        Ok(acc)
    }
}

fn random_matrix(k: usize, seed: u64, a: &FAtom) -> SparseMat<GaussRational> {
    // FNV-1a over the canonical text keeps draws independent of query order.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in a.to_string().bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h);
    let rows = (0..k)
        .map(|_| {
            (0..k)
                .map(|_| GaussRational::from_ints(rng.gen_range(-2..=2), rng.gen_range(-2..=2)))
                .collect()
        })
        .collect();
    SparseMat::from_dense(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_example() {
        let w = FWord(vec![FAtom::Phi(1), FAtom::SigmaF(2)]);
        let (s, a) = w.adjoint();
        assert_eq!(s, -1);
        assert_eq!(a, FWord(vec![FAtom::SigmaF(2), FAtom::PhiStar(1)]));
    }

    #[test]
    fn curvature_normalisation() {
        assert_eq!(FAtom::rf(3, 1).unwrap(), (-1, FAtom::RF(1, 3)));
        assert!(FAtom::rf(2, 2).is_err());
    }

    #[test]
    fn der_depth_limit() {
        let a = FAtom::der(4, FAtom::der(1, FAtom::Phi(1)).unwrap()).unwrap();
        assert!(FAtom::der(2, a).is_err());
    }

    #[test]
    fn trace_display() {
        let t = TraceExpr::dim_f(ScalarExpr::one()).add(&TraceExpr::tr(FWord::atom(FAtom::Phi(4)), ScalarExpr::one()));
        assert_eq!(t.to_string(), "dimF+TrF[Phi[4]]");
    }

    #[test]
    fn word_parse_round_trip() {
        for s in ["1", "Phi[1]*PhiStar[2]", "D[4]{D[1]{OmegaFStar[3]}}*RF[1,2]"] {
            let w = FWord::parse(s).unwrap();
            assert_eq!(w.to_string(), s);
        }
        assert!(FWord::parse("Phi[5]").is_err());
        assert!(FWord::parse("Psi[1]").is_err());
    }

    #[test]
    fn starred_random_is_adjoint() {
        let asg = Assignment::random(2, 7);
        let p = asg.value(&FAtom::Phi(2)).unwrap();
        assert_eq!(asg.value(&FAtom::PhiStar(2)).unwrap(), p.conj_transpose());
        let s = asg.value(&FAtom::SigmaF(1)).unwrap();
        assert_eq!(s.conj_transpose(), s.neg());
    }
}
