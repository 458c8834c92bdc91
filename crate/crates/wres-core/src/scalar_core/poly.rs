use std::fmt;

use super::GaussRational;

/// Dense univariate polynomial in `xin` over Q(i); `c[k]` is the coefficient
/// of `xin^k`. Trailing zeros are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    c: Vec<GaussRational>,
}

impl Poly {
    pub fn new(mut c: Vec<GaussRational>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(GaussRational::one())
    }

    pub fn constant(a: GaussRational) -> Self {
        Poly::new(vec![a])
    }

    /// The variable `xin`.
    pub fn x() -> Self {
        Poly::new(vec![GaussRational::zero(), GaussRational::one()])
    }

    /// `xin - p`.
    pub fn linear(p: &GaussRational) -> Self {
        Poly::new(vec![-p, GaussRational::one()])
    }

    /// `1 + xin^2`.
    pub fn one_plus_x2() -> Self {
        Poly::new(vec![GaussRational::one(), GaussRational::zero(), GaussRational::one()])
    }

    pub fn coeffs(&self) -> &[GaussRational] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> GaussRational {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> GaussRational {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &GaussRational) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|x| x * a).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GaussRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn divrem(&self, d: &Poly) -> Option<(Poly, Poly)> {
        let dd = d.degree()?;
        let inv = d.lead().inv()?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut q = vec![GaussRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = &r[k + dd] * &inv;
            if t.is_zero() {
                continue;
            }
            for (j, dc) in d.c.iter().enumerate() {
                r[k + j] -= &(&t * dc);
            }
            q[k] = t;
        }
        r.truncate(dd);
        Some((Poly::new(q), Poly::new(r)))
    }

    pub fn monic(&self) -> Poly {
        match self.lead().inv() {
            Some(inv) => self.scale(&inv),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * &GaussRational::int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &GaussRational) -> GaussRational {
        let mut acc = GaussRational::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    }

    /// Coefficients of `p(x0 + t)` as a polynomial in `t`.
    pub fn taylor_shift(&self, x0: &GaussRational) -> Poly {
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let t = &c[k + 1] * x0;
                c[k] += &t;
            }
        }
        Poly::new(c)
    }

    pub fn conj(&self) -> Poly {
        Poly { c: self.c.iter().map(|x| x.conj()).collect() }
    }

    /// Multiplicity of `p` as a root.
    pub fn root_multiplicity(&self, p: &GaussRational) -> u32 {
        let lin = Poly::linear(p);
        let mut cur = self.clone();
        let mut m = 0;
        while !cur.is_zero() {
            let (q, r) = cur.divrem(&lin).expect("nonzero divisor");
            if !r.is_zero() {
                break;
            }
            cur = q;
            m += 1;
        }
        m
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.c.len()).rev() {
            let a = &self.c[k];
            if a.is_zero() {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "xin".to_string(),
                _ => format!("xin^{}", k),
            };
            let term = if k == 0 {
                if a.is_compound() && !first {
                    format!("({})", a)
                } else {
                    a.to_string()
                }
            } else if a.is_one() {
                var
            } else if (-a).is_one() {
                format!("-{}", var)
            } else if a.is_compound() {
                format!("({})*{}", a, var)
            } else {
                format!("{}*{}", a, var)
            };
            if !first && !term.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{}", term)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussRational {
        GaussRational::from_ints(re, im)
    }

    #[test]
    fn divrem_recombines() {
        let a = Poly::new(vec![g(1, 2), g(0, 0), g(3, -1), g(1, 0)]);
        let d = Poly::new(vec![g(0, 1), g(2, 0)]);
        let (q, r) = a.divrem(&d).unwrap();
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let p = Poly::linear(&GaussRational::i());
        let a = p.mul(&Poly::linear(&g(2, 0)));
        let b = p.mul(&Poly::linear(&g(0, -3)));
        assert_eq!(a.gcd(&b), p);
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let a = Poly::new(vec![g(1, 0), g(-2, 1), g(0, 3), g(5, 0)]);
        let x0 = g(1, -1);
        let s = a.taylor_shift(&x0);
        assert_eq!(s.coeff(0), a.eval(&x0));
        assert_eq!(s.coeff(1), a.derivative().eval(&x0));
    }

    #[test]
    fn display() {
        let a = Poly::new(vec![g(1, 1), g(0, -1), g(2, 0)]);
        assert_eq!(a.to_string(), "2*xin^2-i*xin+(1+i)");
        assert_eq!(Poly::one_plus_x2().to_string(), "xin^2+1");
    }
}
