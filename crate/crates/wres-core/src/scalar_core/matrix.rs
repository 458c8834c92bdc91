use std::collections::BTreeMap;
use std::fmt;

use super::{GaussRational, RatFuncXi};

/// Minimal ring interface for matrix entries.
pub trait Ring: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Ring for GaussRational {
    fn zero() -> Self {
        GaussRational::zero()
    }
    fn one() -> Self {
        GaussRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussRational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Ring for RatFuncXi {
    fn zero() -> Self {
        RatFuncXi::zero()
    }
    fn one() -> Self {
        RatFuncXi::one()
    }
    fn is_zero(&self) -> bool {
        RatFuncXi::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFuncXi::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFuncXi::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFuncXi::neg(self)
    }
}

/// Sparse square matrix; zero entries are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseMat<T> {
    n: usize,
    e: BTreeMap<(usize, usize), T>,
}

impl<T: Ring> SparseMat<T> {
    pub fn zero(n: usize) -> Self {
        SparseMat { n, e: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(n, T::one())
    }

    pub fn diag(n: usize, a: T) -> Self {
        let mut m = Self::zero(n);
        for k in 0..n {
            m.add_at(k, k, &a);
        }
        m
    }

    pub fn from_dense(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let mut m = Self::zero(n);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, a) in row.into_iter().enumerate() {
                m.add_at(i, j, &a);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.e.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &T)> {
        self.e.iter()
    }

    pub fn nnz(&self) -> usize {
        self.e.len()
    }

    pub fn add_at(&mut self, i: usize, j: usize, a: &T) {
        if a.is_zero() {
            return;
        }
        match self.e.get_mut(&(i, j)) {
            Some(x) => {
                *x = x.add(a);
                if x.is_zero() {
                    self.e.remove(&(i, j));
                }
            }
            None => {
                self.e.insert((i, j), a.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.e.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let mut out = self.clone();
        for ((i, j), a) in &o.e {
            out.add_at(*i, *j, a);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let mut out = Self::zero(self.n);
        for ((i, k), a) in &self.e {
            for ((_, j), b) in o.e.range((*k, 0)..(*k + 1, 0)) {
                out.add_at(*i, *j, &a.mul(b));
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(self.n);
        for ((i, j), a) in &self.e {
            out.add_at(*i, *j, &a.mul(s));
        }
        out
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> SparseMat<U> {
        let mut out = SparseMat::zero(self.n);
        for ((i, j), a) in &self.e {
            out.add_at(*i, *j, &f(a));
        }
        out
    }

    pub fn trace(&self) -> T {
        let mut acc = T::zero();
        for k in 0..self.n {
            if let Some(a) = self.e.get(&(k, k)) {
                acc = acc.add(a);
            }
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        SparseMat { n: self.n, e: self.e.iter().map(|((i, j), a)| ((*j, *i), a.clone())).collect() }
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.n * o.n);
        for ((i, j), a) in &self.e {
            for ((k, l), b) in &o.e {
                out.add_at(i * o.n + k, j * o.n + l, &a.mul(b));
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn anticommutator(&self, o: &Self) -> Self {
        self.mul(o).add(&o.mul(self))
    }
}

impl SparseMat<GaussRational> {
    pub fn conj_transpose(&self) -> Self {
        SparseMat { n: self.n, e: self.e.iter().map(|((i, j), a)| ((*j, *i), a.conj())).collect() }
    }
}

impl<T: Ring> fmt::Display for SparseMat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<T: Ring> fmt::Debug for SparseMat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_and_trace() {
        let a: SparseMat<GaussRational> =
            SparseMat::from_dense(vec![vec![1.into(), 2.into()], vec![0.into(), GaussRational::i()]]);
        let b = SparseMat::identity(3);
        assert_eq!(a.kron(&b).trace(), &a.trace() * &GaussRational::int(3));
        assert_eq!(a.mul(&SparseMat::identity(2)), a);
    }
}
