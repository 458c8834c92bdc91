//! Boundary symbols at the point `x0` with `|ξ'| = 1`: sums of
//! (rational function of `xin`) ⊗ (ξ' monomial) ⊗ (Clifford matrix) ⊗ (F word)
//! ⊗ (commuting monomial).
//!
//! The collar metric is `(1/h(x_n)) g_boundary + dx_n^2`. At `x0` the normal
//! derivative acts by
//! * `∂_{x_n} |ξ|^2 = hp0` (on the unit cosphere),
//! * `∂_{x_n} c(ξ') = (hp0/2) c(ξ')`, `∂_{x_n} c(dx_n) = 0`,
//! * `∂_{x_n} a = D[4]{a}` on twist atoms.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::clifford_models::{CliffordModel, Mat};
use crate::coeff_algebra::{trace_key, CoeffError, FWord, TraceExpr, TraceKey};
use crate::scalar_core::{GaussRational, Mono, RatFuncXi, ScalarExpr, SparseMat, Sym};

pub type RMat = SparseMat<RatFuncXi>;

/// Highest cosphere moment degree supported.
pub const MOMENT_MAX_DEGREE: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("model mismatch: {0} vs {1}")]
    ModelMismatch(usize, usize),
    #[error("x_n derivative undefined: {0}")]
    XnRule(String),
    #[error("moment table exhausted at degree {0}")]
    MomentTable(u32),
    #[error("not a constant: {0}")]
    NotConstant(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Exponents of `ξ1, ξ2, ξ3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct XiMono(pub [u8; 3]);

impl XiMono {
    pub fn one() -> Self {
        XiMono::default()
    }

    /// `ξ_i`, `i` in `1..=3`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i - 1] = 1;
        XiMono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &XiMono) -> XiMono {
        XiMono([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    /// Integral over the unit sphere in R^3 divided by `Omega`.
    pub fn moment(&self) -> Result<GaussRational, SymbolError> {
        let d = self.degree();
        if d > MOMENT_MAX_DEGREE {
            return Err(SymbolError::MomentTable(d));
        }
        if self.0.iter().any(|e| e % 2 == 1) {
            return Ok(GaussRational::zero());
        }
        let dfact = |e: u8| -> i64 { (1..e as i64).step_by(2).product::<i64>().max(1) };
        let num: i64 = self.0.iter().map(|&e| dfact(e)).product();
        let den: i64 = (0..d as i64 / 2).map(|k| 3 + 2 * k).product();
        Ok(GaussRational::frac(num, den))
    }
}

impl fmt::Display for XiMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..3)
            .filter(|&k| self.0[k] > 0)
            .map(|k| if self.0[k] == 1 { format!("xi{}", k + 1) } else { format!("xi{}^{}", k + 1, self.0[k]) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Debug for XiMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct SymKey {
    pub xi: XiMono,
    pub word: FWord,
    pub mono: Mono,
}

impl SymKey {
    fn mul(&self, o: &SymKey) -> SymKey {
        SymKey { xi: self.xi.mul(&o.xi), word: self.word.mul(&o.word), mono: self.mono.mul(&o.mono) }
    }
}

pub fn lift(m: &Mat) -> RMat {
    m.map(|a| RatFuncXi::constant(a.clone()))
}

#[derive(Clone, PartialEq, Eq)]
pub struct SymbolExpr {
    dim: usize,
    terms: BTreeMap<SymKey, RMat>,
}

impl SymbolExpr {
    pub fn zero(dim: usize) -> Self {
        SymbolExpr { dim, terms: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self::term(SymKey::default(), SparseMat::identity(dim))
    }

    pub fn term(key: SymKey, m: RMat) -> Self {
        let mut out = Self::zero(m.dim());
        out.add_term(key, &m);
        out
    }

    /// `m ⊗ w`.
    pub fn tensor(m: &Mat, w: FWord) -> Self {
        Self::term(SymKey { word: w, ..Default::default() }, lift(m))
    }

    pub fn matrix(m: &Mat) -> Self {
        Self::tensor(m, FWord::empty())
    }

    /// `r(xin) · Id`.
    pub fn scalar(dim: usize, r: RatFuncXi) -> Self {
        Self::term(SymKey::default(), SparseMat::diag(dim, r))
    }

    pub fn c_xi_prime(model: &CliffordModel) -> Self {
        let mut out = Self::zero(model.rep_dim());
        for i in 1..=3 {
            out.add_term(SymKey { xi: XiMono::var(i), ..Default::default() }, &lift(model.c(i)));
        }
        out
    }

    pub fn c_dxn(model: &CliffordModel) -> Self {
        Self::matrix(model.c(4))
    }

    /// `c(ξ) = c(ξ') + xin c(dx_n)`.
    pub fn c_xi(model: &CliffordModel) -> Self {
        Self::c_xi_prime(model).add(&Self::c_dxn(model).scale_rat(&RatFuncXi::x()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymKey, &RMat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: SymKey, m: &RMat) {
        assert_eq!(m.dim(), self.dim, "model mismatch");
        if m.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = x.add(m);
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, m.clone());
            }
        }
    }

    pub fn add(&self, o: &SymbolExpr) -> SymbolExpr {
        let mut out = self.clone();
        for (k, m) in &o.terms {
            out.add_term(k.clone(), m);
        }
        out
    }

    pub fn neg(&self) -> SymbolExpr {
        SymbolExpr { dim: self.dim, terms: self.terms.iter().map(|(k, m)| (k.clone(), m.neg())).collect() }
    }

    pub fn sub(&self, o: &SymbolExpr) -> SymbolExpr {
        self.add(&o.neg())
    }

    pub fn try_mul(&self, o: &SymbolExpr) -> Result<SymbolExpr, SymbolError> {
        if self.dim != o.dim {
            return Err(SymbolError::ModelMismatch(self.dim, o.dim));
        }
        let mut out = Self::zero(self.dim);
        for (k1, m1) in &self.terms {
            for (k2, m2) in &o.terms {
                out.add_term(k1.mul(k2), &m1.mul(m2));
            }
        }
        Ok(out)
    }

    /// Product; panics on model mismatch.
    pub fn mul(&self, o: &SymbolExpr) -> SymbolExpr {
        self.try_mul(o).expect("model mismatch")
    }

    pub fn scale(&self, a: &GaussRational) -> SymbolExpr {
        self.scale_rat(&RatFuncXi::constant(a.clone()))
    }

    pub fn scale_rat(&self, r: &RatFuncXi) -> SymbolExpr {
        let mut out = Self::zero(self.dim);
        for (k, m) in &self.terms {
            out.add_term(k.clone(), &m.scale(r));
        }
        out
    }

    /// Multiplies every term by the commuting monomial `c * m`.
    pub fn times(&self, c: &GaussRational, m: &Mono) -> SymbolExpr {
        let r = RatFuncXi::constant(c.clone());
        let mut out = Self::zero(self.dim);
        for (k, x) in &self.terms {
            out.add_term(SymKey { mono: k.mono.mul(m), ..k.clone() }, &x.scale(&r));
        }
        out
    }

    /// Multiplies by a commuting scalar expression.
    pub fn times_scalar(&self, s: &ScalarExpr) -> SymbolExpr {
        let mut out = Self::zero(self.dim);
        for (m, c) in s.terms() {
            out = out.add(&self.times(c, m));
        }
        out
    }

    /// Keeps the terms accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(&SymKey) -> bool) -> SymbolExpr {
        SymbolExpr {
            dim: self.dim,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, m)| (k.clone(), m.clone())).collect(),
        }
    }

    /// Applies `f` entrywise to the rational-function factors.
    pub fn map_entries(&self, f: impl Fn(&RatFuncXi) -> RatFuncXi) -> SymbolExpr {
        let mut out = Self::zero(self.dim);
        for (k, m) in &self.terms {
            out.add_term(k.clone(), &m.map(&f));
        }
        out
    }

    pub fn try_map_entries<E>(&self, f: impl Fn(&RatFuncXi) -> Result<RatFuncXi, E>) -> Result<SymbolExpr, E> {
        let mut out = Self::zero(self.dim);
        for (k, m) in &self.terms {
            let mut nm = SparseMat::zero(self.dim);
            for ((i, j), a) in m.entries() {
                nm.add_at(*i, *j, &f(a)?);
            }
            out.add_term(k.clone(), &nm);
        }
        Ok(out)
    }

    pub fn d_xi_n(&self) -> SymbolExpr {
        self.map_entries(RatFuncXi::derivative)
    }

    /// Normal derivative at `x0`. Must be applied before any on-sphere
    /// reduction, since the ξ' degree encodes the number of `c(ξ')` factors.
    pub fn d_x_n(&self) -> Result<SymbolExpr, SymbolError> {
        let mut out = Self::zero(self.dim);
        let hp0 = Mono::sym(Sym::Hp0);
        for (k, m) in &self.terms {
            let dk = SymKey { mono: k.mono.mul(&hp0), ..k.clone() };
            let deg = k.xi.degree();
            if deg > 0 {
                out.add_term(dk.clone(), &m.scale(&RatFuncXi::constant(GaussRational::frac(deg as i64, 2))));
            }
            let mut dm = SparseMat::zero(self.dim);
            for ((i, j), r) in m.entries() {
                let q = r.q_power().map_err(SymbolError::XnRule)?;
                if q > 0 {
                    let v = r.mul(&RatFuncXi::inv_q(1)).scale(&GaussRational::int(-(q as i64)));
                    dm.add_at(*i, *j, &v);
                }
            }
            out.add_term(dk, &dm);
            for w in k.word.der(4)? {
                out.add_term(SymKey { word: w, ..k.clone() }, m);
            }
        }
        Ok(out)
    }

    /// Tangential derivative `∂_{x_j}`, `j < 4`, at `x0`: the geometric
    /// factors are stationary there, so only twist atoms contribute.
    pub fn d_x_tangential(&self, j: u8) -> Result<SymbolExpr, SymbolError> {
        assert!((1..=3).contains(&j), "tangential direction {} outside 1..=3", j);
        self.der_words(j)
    }

    /// Leibniz derivative `D[j]` acting on the word factors only.
    pub fn der_words(&self, j: u8) -> Result<SymbolExpr, SymbolError> {
        let mut out = Self::zero(self.dim);
        for (k, m) in &self.terms {
            for w in k.word.der(j)? {
                out.add_term(SymKey { word: w, ..k.clone() }, m);
            }
        }
        Ok(out)
    }

    /// Rewrites `ξ3^2 = 1 - ξ1^2 - ξ2^2` until every `ξ3` exponent is at most 1.
    pub fn on_sphere(&self) -> SymbolExpr {
        let mut out = Self::zero(self.dim);
        let mut stack: Vec<(SymKey, RMat)> = self.terms.iter().map(|(k, m)| (k.clone(), m.clone())).collect();
        while let Some((k, m)) = stack.pop() {
            if k.xi.0[2] < 2 {
                out.add_term(k, &m);
                continue;
            }
            let mut base = k.xi;
            base.0[2] -= 2;
            stack.push((SymKey { xi: base, ..k.clone() }, m.clone()));
            for v in 0..2 {
                let mut e = base;
                e.0[v] += 2;
                stack.push((SymKey { xi: e, ..k.clone() }, m.neg()));
            }
        }
        out
    }

    /// Conjugate transpose on matrices, adjoint on words.
    pub fn adjoint(&self) -> SymbolExpr {
        let mut out = Self::zero(self.dim);
        for (k, m) in &self.terms {
            let (s, w) = k.word.adjoint();
            let mut t = SparseMat::zero(self.dim);
            for ((i, j), a) in m.entries() {
                let v = a.conj();
                t.add_at(*j, *i, &if s < 0 { v.neg() } else { v });
            }
            out.add_term(SymKey { word: w, ..k.clone() }, &t);
        }
        out
    }

    /// `tr_{S ⊗ F}`: matrix trace times `TrF` of the word.
    pub fn trace_total(&self) -> TraceIntegrand {
        let mut out = TraceIntegrand::default();
        for (k, m) in &self.terms {
            out.add_term(k.xi, trace_key([k.word.clone()]), k.mono.clone(), &m.trace());
        }
        out
    }

    /// Matrix coefficient of each term; every entry must be constant.
    pub fn constant_parts(&self) -> Result<Vec<(SymKey, Mat)>, SymbolError> {
        self.terms
            .iter()
            .map(|(k, m)| {
                let mut c = SparseMat::zero(self.dim);
                for ((i, j), a) in m.entries() {
                    let v = a.as_constant().ok_or_else(|| SymbolError::NotConstant(a.to_string()))?;
                    c.add_at(*i, *j, &v);
                }
                Ok((k.clone(), c))
            })
            .collect()
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, m) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let ents: Vec<String> = m.entries().map(|((i, j), a)| format!("{},{}:{}", i, j, a)).collect();
            write!(f, "<{}|{}|{}>{{{}}}", k.xi, k.mono, k.word, ents.join("; "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Image of a symbol under the total trace.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TraceIntegrand {
    terms: BTreeMap<(XiMono, TraceKey, Mono), RatFuncXi>,
}

impl TraceIntegrand {
    pub fn add_term(&mut self, xi: XiMono, tk: TraceKey, mono: Mono, r: &RatFuncXi) {
        if r.is_zero() {
            return;
        }
        let key = (xi, tk, mono);
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = x.add(r);
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, r.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(XiMono, TraceKey, Mono), &RatFuncXi)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &TraceIntegrand) -> TraceIntegrand {
        let mut out = self.clone();
        for ((x, t, m), r) in &o.terms {
            out.add_term(*x, t.clone(), m.clone(), r);
        }
        out
    }

    /// Applies `f` to each rational factor, multiplying the monomial by `extra`.
    pub fn try_map<E>(
        &self,
        extra: &Mono,
        f: impl Fn(&RatFuncXi) -> Result<RatFuncXi, E>,
    ) -> Result<TraceIntegrand, E> {
        let mut out = TraceIntegrand::default();
        for ((x, t, m), r) in &self.terms {
            out.add_term(*x, t.clone(), m.mul(extra), &f(r)?);
        }
        Ok(out)
    }

    /// Replaces each ξ' monomial by its cosphere moment times `Omega`.
    pub fn sphere_integrate(&self) -> Result<TraceIntegrand, SymbolError> {
        let mut out = TraceIntegrand::default();
        let om = Mono::sym(Sym::Omega);
        for ((x, t, m), r) in &self.terms {
            let w = x.moment()?;
            out.add_term(XiMono::one(), t.clone(), m.mul(&om), &r.scale(&w));
        }
        Ok(out)
    }

    /// Collapses to a trace expression once ξ has been integrated out.
    pub fn to_trace_expr(&self) -> Result<TraceExpr, SymbolError> {
        let mut out = TraceExpr::zero();
        for ((x, t, m), r) in &self.terms {
            if *x != XiMono::one() {
                return Err(SymbolError::NotConstant(format!("{} remains", x)));
            }
            let c = r.as_constant().ok_or_else(|| SymbolError::NotConstant(r.to_string()))?;
            out.add_term(t.clone(), &ScalarExpr::term(c, m.clone()));
        }
        Ok(out)
    }
}

impl fmt::Display for TraceIntegrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((x, t, m), r) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let tr: Vec<String> = t.iter().map(|w| format!("TrF[{}]", w)).collect();
            write!(f, "<{}|{}|{}>({})", x, m, tr.join("*"), r)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TraceIntegrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        assert_eq!(XiMono([1, 0, 0]).moment().unwrap(), GaussRational::zero());
        assert_eq!(XiMono([2, 0, 0]).moment().unwrap(), GaussRational::frac(1, 3));
        assert_eq!(XiMono([4, 0, 0]).moment().unwrap(), GaussRational::frac(1, 5));
        assert_eq!(XiMono([2, 2, 0]).moment().unwrap(), GaussRational::frac(1, 15));
        assert!(XiMono([2, 2, 2]).moment().is_err());
    }

    #[test]
    fn leading_symbol_inverse() {
        let m = CliffordModel::spin();
        let s1 = SymbolExpr::c_xi(&m).scale(&GaussRational::i());
        let sm1 = s1.scale_rat(&RatFuncXi::inv_q(1));
        assert_eq!(s1.mul(&sm1).on_sphere(), SymbolExpr::identity(4));
    }
}
