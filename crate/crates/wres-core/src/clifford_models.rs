//! Exact matrix models of the Clifford action in dimension four.
//!
//! Both models satisfy `c(e_i)c(e_j) + c(e_j)c(e_i) = -2 δ_ij`. The signature
//! model acts on `Λ*(R^4)` with `c = ε - ι` and `ĉ = ε + ι`.

use std::fmt;

use thiserror::Error;

use crate::scalar_core::{GaussRational, SparseMat};

pub type Mat = SparseMat<GaussRational>;

pub const N: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("{0} model has no {1} generators")]
    Unsupported(ModelKind, &'static str),
    #[error("generator index {0} outside 1..=4")]
    BadIndex(usize),
    #[error("matrix of size {got} used with {model} model of size {expected}")]
    Size { model: ModelKind, got: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Spin4,
    Signature4,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Spin4 => write!(f, "spin4"),
            ModelKind::Signature4 => write!(f, "signature4"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordModel {
    kind: ModelKind,
    dim: usize,
    c: Vec<Mat>,
    chat: Option<Vec<Mat>>,
    eps: Option<Vec<Mat>>,
    iota: Option<Vec<Mat>>,
}

fn g(re: i64, im: i64) -> GaussRational {
    GaussRational::from_ints(re, im)
}

fn pauli() -> [Mat; 4] {
    let o = || g(0, 0);
    [
        Mat::identity(2),
        Mat::from_dense(vec![vec![o(), g(1, 0)], vec![g(1, 0), o()]]),
        Mat::from_dense(vec![vec![o(), g(0, -1)], vec![g(0, 1), o()]]),
        Mat::from_dense(vec![vec![g(1, 0), o()], vec![o(), g(-1, 0)]]),
    ]
}

impl CliffordModel {
    pub fn spin() -> Self {
        let [id, x, y, z] = pauli();
        let gammas = [x.kron(&id), y.kron(&id), z.kron(&x), z.kron(&y)];
        let c = gammas.iter().map(|m| m.scale(&GaussRational::i())).collect();
        let m = CliffordModel { kind: ModelKind::Spin4, dim: 4, c, chat: None, eps: None, iota: None };
        m.check_relations();
        m
    }

    pub fn signature() -> Self {
        let dim = 1 << N;
        let mut eps = Vec::with_capacity(N);
        let mut iota = Vec::with_capacity(N);
        for j in 0..N {
            let mut e = Mat::zero(dim);
            let mut i = Mat::zero(dim);
            for s in 0..dim {
                let below = (s & ((1 << j) - 1)).count_ones();
                let sign = g(if below % 2 == 0 { 1 } else { -1 }, 0);
                if s & (1 << j) == 0 {
                    e.add_at(s | (1 << j), s, &sign);
                } else {
                    i.add_at(s & !(1 << j), s, &sign);
                }
            }
            eps.push(e);
            iota.push(i);
        }
        let c = (0..N).map(|j| eps[j].sub(&iota[j])).collect();
        let chat = (0..N).map(|j| eps[j].add(&iota[j])).collect();
        let m = CliffordModel {
            kind: ModelKind::Signature4,
            dim,
            c,
            chat: Some(chat),
            eps: Some(eps),
            iota: Some(iota),
        };
        m.check_relations();
        m
    }

    pub fn build(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Spin4 => Self::spin(),
            ModelKind::Signature4 => Self::signature(),
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn rep_dim(&self) -> usize {
        self.dim
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(self.dim)
    }

    fn pick<'a>(&self, v: &'a [Mat], i: usize) -> &'a Mat {
        assert!((1..=N).contains(&i), "generator index {} outside 1..=4", i);
        &v[i - 1]
    }

    /// `c(e_i)`, `i` in `1..=4`; `c(e_4) = c(dx_n)`.
    pub fn c(&self, i: usize) -> &Mat {
        self.pick(&self.c, i)
    }

    pub fn chat(&self, i: usize) -> Result<&Mat, CliffordError> {
        if !(1..=N).contains(&i) {
            return Err(CliffordError::BadIndex(i));
        }
        let v = self.chat.as_ref().ok_or(CliffordError::Unsupported(self.kind, "cohat"))?;
        Ok(self.pick(v, i))
    }

    pub fn eps(&self, i: usize) -> Result<&Mat, CliffordError> {
        let v = self.eps.as_ref().ok_or(CliffordError::Unsupported(self.kind, "exterior"))?;
        if !(1..=N).contains(&i) {
            return Err(CliffordError::BadIndex(i));
        }
        Ok(self.pick(v, i))
    }

    pub fn iota(&self, i: usize) -> Result<&Mat, CliffordError> {
        let v = self.iota.as_ref().ok_or(CliffordError::Unsupported(self.kind, "interior"))?;
        if !(1..=N).contains(&i) {
            return Err(CliffordError::BadIndex(i));
        }
        Ok(self.pick(v, i))
    }

    pub fn trace_rep(&self, m: &Mat) -> Result<GaussRational, CliffordError> {
        if m.dim() != self.dim {
            return Err(CliffordError::Size { model: self.kind, got: m.dim(), expected: self.dim });
        }
        Ok(m.trace())
    }

    /// Trace restricted to `Λ^deg`; basis vectors are subsets as bitmasks.
    pub fn trace_degree(&self, m: &Mat, deg: usize) -> Result<GaussRational, CliffordError> {
        if self.kind != ModelKind::Signature4 {
            return Err(CliffordError::Unsupported(self.kind, "form-degree"));
        }
        self.trace_rep(m)?;
        let mut t = GaussRational::zero();
        for s in (0..self.dim).filter(|s: &usize| s.count_ones() as usize == deg) {
            t += &m.get(s, s);
        }
        Ok(t)
    }

    fn check_relations(&self) {
        let id = self.identity();
        for i in 1..=N {
            for j in 1..=N {
                let d = if i == j { 2 } else { 0 };
                assert_eq!(self.c(i).anticommutator(self.c(j)), id.scale(&g(-d, 0)));
                if let Some(ch) = &self.chat {
                    assert_eq!(ch[i - 1].anticommutator(&ch[j - 1]), id.scale(&g(d, 0)));
                    assert!(self.c(i).anticommutator(&ch[j - 1]).is_zero());
                }
            }
        }
        if let (Some(e), Some(io)) = (&self.eps, &self.iota) {
            for j in 0..N {
                assert_eq!(e[j].anticommutator(&io[j]), id);
                assert!(e[j].mul(&e[j]).is_zero() && io[j].mul(&io[j]).is_zero());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_entries_are_units() {
        let m = CliffordModel::spin();
        for i in 1..=4 {
            for (_, a) in m.c(i).entries() {
                assert!([g(1, 0), g(-1, 0), g(0, 1), g(0, -1)].contains(a));
            }
        }
        assert!(m.chat(1).is_err());
    }

    #[test]
    fn traces() {
        let s = CliffordModel::spin();
        assert_eq!(s.trace_rep(&s.c(4).mul(s.c(4))).unwrap(), g(-4, 0));
        let l = CliffordModel::signature();
        assert_eq!(l.trace_rep(&l.c(4).mul(l.c(4))).unwrap(), g(-16, 0));
        assert_eq!(l.trace_rep(&l.identity()).unwrap(), g(16, 0));
    }
}
