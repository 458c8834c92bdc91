use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{GaussRational, Poly, ScalarError};

/// Reduced rational function `num/den` in `xin` with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatFuncXi {
    num: Poly,
    den: Poly,
}

/// `r = poly + sum over poles p, k >= 1 of parts[p][k-1] / (xin - p)^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractions {
    pub poly: Poly,
    pub parts: Vec<(GaussRational, Vec<GaussRational>)>,
}

impl RatFuncXi {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFuncXi::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.divrem(&g).unwrap().0, den.divrem(&g).unwrap().0)
            }
        };
        let inv = den.lead().inv().expect("nonzero denominator");
        RatFuncXi { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero() -> Self {
        RatFuncXi { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFuncXi::constant(GaussRational::one())
    }

    pub fn constant(a: GaussRational) -> Self {
        RatFuncXi { num: Poly::constant(a), den: Poly::one() }
    }

    pub fn poly(p: Poly) -> Self {
        RatFuncXi { num: p, den: Poly::one() }
    }

    pub fn x() -> Self {
        RatFuncXi::poly(Poly::x())
    }

    /// `1/(1 + xin^2)^k`.
    pub fn inv_q(k: u32) -> Self {
        RatFuncXi { num: Poly::one(), den: Poly::one_plus_x2().pow(k) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value if this is a constant.
    pub fn as_constant(&self) -> Option<GaussRational> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatFuncXi) -> RatFuncXi {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let a = self.den.divrem(&g).unwrap().0;
        let b = o.den.divrem(&g).unwrap().0;
        Self::reduce(self.num.mul(&b).add(&o.num.mul(&a)), a.mul(&o.den))
    }

    pub fn neg(&self) -> RatFuncXi {
        RatFuncXi { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFuncXi) -> RatFuncXi {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFuncXi) -> RatFuncXi {
        if self.is_zero() || o.is_zero() {
            return RatFuncXi::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFuncXi::poly(self.num.mul(&o.num));
        }
        Self::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, a: &GaussRational) -> RatFuncXi {
        if a.is_zero() {
            return RatFuncXi::zero();
        }
        RatFuncXi { num: self.num.scale(a), den: self.den.clone() }
    }

    pub fn div(&self, o: &RatFuncXi) -> Result<RatFuncXi, ScalarError> {
        if o.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    /// Derivative with respect to `xin`.
    pub fn derivative(&self) -> RatFuncXi {
        if self.den.is_one() {
            return RatFuncXi::poly(self.num.derivative());
        }
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::reduce(n, self.den.mul(&self.den))
    }

    /// Complex conjugation of coefficients (`xin` is real).
    pub fn conj(&self) -> RatFuncXi {
        RatFuncXi { num: self.num.conj(), den: self.den.conj() }
    }

    /// The exponent `k` of `(1 + xin^2)^k` in the denominator. Errors when the
    /// powers of `xin - i` and `xin + i` differ.
    pub fn q_power(&self) -> Result<u32, String> {
        let a = self.den.root_multiplicity(&GaussRational::i());
        let b = self.den.root_multiplicity(&-GaussRational::i());
        if a != b {
            return Err(format!("unbalanced (xin-i)^{} (xin+i)^{} in {}", a, b, self));
        }
        Ok(a)
    }

    /// Poles with multiplicities, ordered by (im, re).
    pub fn poles(&self) -> Result<Vec<(GaussRational, u32)>, ScalarError> {
        let mut cur = self.den.clone();
        let mut out = Vec::new();
        while cur.degree().unwrap_or(0) > 0 {
            let p = find_root(&cur).ok_or_else(|| ScalarError::PoleNotInQi(cur.to_string()))?;
            let lin = Poly::linear(&p);
            let mut m = 0;
            loop {
                let (q, r) = cur.divrem(&lin).unwrap();
                if !r.is_zero() {
                    break;
                }
                cur = q;
                m += 1;
            }
            out.push((p, m));
        }
        out.sort_by(|a, b| (a.0.im(), a.0.re()).cmp(&(b.0.im(), b.0.re())));
        Ok(out)
    }

    pub fn partial_fractions(&self) -> Result<PartialFractions, ScalarError> {
        let poles = self.poles()?;
        let (poly, rem) = self.num.divrem(&self.den).unwrap();
        let mut parts = Vec::with_capacity(poles.len());
        for (p, m) in &poles {
            let lin_m = Poly::linear(p).pow(*m);
            let cof = self.den.divrem(&lin_m).unwrap().0;
            let r = rem.taylor_shift(p);
            let s = cof.taylor_shift(p);
            let s0inv = s.coeff(0).inv().expect("pole multiplicity exhausted");
            let mut g: Vec<GaussRational> = Vec::with_capacity(*m as usize);
            for k in 0..*m as usize {
                let mut acc = r.coeff(k);
                for j in 1..=k {
                    acc -= &(&s.coeff(j) * &g[k - j]);
                }
                g.push(&acc * &s0inv);
            }
            // g[k] multiplies (xin-p)^(k-m), i.e. order m-k.
            let coeffs: Vec<GaussRational> = (1..=*m as usize).map(|ord| g[*m as usize - ord].clone()).collect();
            parts.push((p.clone(), coeffs));
        }
        Ok(PartialFractions { poly, parts })
    }
}

impl PartialFractions {
    pub fn recombine(&self) -> RatFuncXi {
        let mut acc = RatFuncXi::poly(self.poly.clone());
        for (p, cs) in &self.parts {
            for (k, c) in cs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let den = Poly::linear(p).pow(k as u32 + 1);
                acc = acc.add(&RatFuncXi::reduce(Poly::constant(c.clone()), den));
            }
        }
        acc
    }

    /// Sum of principal parts at poles selected by `keep`.
    pub fn principal_sum(&self, keep: impl Fn(&GaussRational) -> bool) -> RatFuncXi {
        let sub = PartialFractions {
            poly: Poly::zero(),
            parts: self.parts.iter().filter(|(p, _)| keep(p)).cloned().collect(),
        };
        sub.recombine()
    }
}

/// A root in Q(i) of `p`, if one exists.
fn find_root(p: &Poly) -> Option<GaussRational> {
    if p.coeff(0).is_zero() {
        return Some(GaussRational::zero());
    }
    for (re, im) in [(0, 1), (0, -1), (0, 2), (0, -2), (1, 0), (-1, 0), (0, 3), (0, -3)] {
        let z = GaussRational::from_ints(re, im);
        if p.eval(&z).is_zero() {
            return Some(z);
        }
    }
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(&c.denom_lcm());
    }
    let scaled: Vec<(i128, i128)> = p
        .coeffs()
        .iter()
        .map(|c| {
            let (a, b) = (c * &GaussRational::real(l.clone().into())).as_gauss_int()?;
            Some((a.to_i128()?, b.to_i128()?))
        })
        .collect::<Option<_>>()?;
    let us = gauss_divisors(scaled[0])?;
    let vs = gauss_divisors(*scaled.last()?)?;
    for v in &vs {
        let vg = GaussRational::from_ints(v.0 as i64, v.1 as i64);
        for u in &us {
            let z = &GaussRational::from_ints(u.0 as i64, u.1 as i64) / &vg;
            if p.eval(&z).is_zero() {
                return Some(z);
            }
        }
    }
    None
}

const DIVISOR_NORM_LIMIT: i128 = 1 << 40;

/// All Gaussian-integer divisors of `z` (every associate included).
fn gauss_divisors(z: (i128, i128)) -> Option<Vec<(i128, i128)>> {
    let n = z.0 * z.0 + z.1 * z.1;
    if n == 0 || n > DIVISOR_NORM_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut m = 1i128;
    while m * m <= n {
        if n % m == 0 {
            for d in [m, n / m] {
                push_norm_divisors(d, z, &mut out);
                if m * m == n {
                    break;
                }
            }
        }
        m += 1;
    }
    out.sort();
    out.dedup();
    Some(out)
}

fn push_norm_divisors(d: i128, z: (i128, i128), out: &mut Vec<(i128, i128)>) {
    let mut x = 0i128;
    while x * x <= d {
        let rest = d - x * x;
        let y = isqrt(rest);
        if y * y == rest {
            for (a, b) in [(x, y), (-x, y), (x, -y), (-x, -y), (y, x), (-y, x), (y, -x), (-y, -x)] {
                // z / (a+bi) = z (a-bi) / d
                let re = z.0 * a + z.1 * b;
                let im = z.1 * a - z.0 * b;
                if re % d == 0 && im % d == 0 {
                    out.push((a, b));
                }
            }
        }
        x += 1;
    }
}

fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

impl fmt::Display for RatFuncXi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFuncXi {
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
    fn normalize_cancels_common_factor() {
        let r = RatFuncXi::new(Poly::one_plus_x2(), Poly::linear(&-GaussRational::i())).unwrap();
        assert_eq!(r, RatFuncXi::poly(Poly::linear(&GaussRational::i())));
    }

    #[test]
    fn normalize_monic() {
        let r = RatFuncXi::new(Poly::constant(g(2, 0)), Poly::new(vec![g(0, 2), g(2, 0)])).unwrap();
        assert_eq!(r.num(), &Poly::one());
        assert_eq!(r.den(), &Poly::linear(&g(0, -1)));
    }

    #[test]
    fn zero_denominator() {
        assert_eq!(RatFuncXi::new(Poly::one(), Poly::zero()), Err(ScalarError::ZeroDenominator));
    }

    #[test]
    fn poles_of_q_squared() {
        let r = RatFuncXi::inv_q(2);
        assert_eq!(r.poles().unwrap(), vec![(g(0, -1), 2), (g(0, 1), 2)]);
    }

    #[test]
    fn irrational_pole() {
        let r = RatFuncXi::new(Poly::one(), Poly::new(vec![g(-2, 0), g(0, 0), g(1, 0)])).unwrap();
        assert!(matches!(r.poles(), Err(ScalarError::PoleNotInQi(_))));
    }

    #[test]
    fn general_root_search() {
        let p = Poly::linear(&GaussRational::new(
            num_rational::BigRational::new(3.into(), 2.into()),
            num_rational::BigRational::new((-5).into(), 3.into()),
        ));
        let den = p.mul(&Poly::linear(&g(4, 7)));
        let r = RatFuncXi::new(Poly::one(), den).unwrap();
        assert_eq!(r.poles().unwrap().len(), 2);
    }

    #[test]
    fn partial_fractions_of_inv_q() {
        let pf = RatFuncXi::inv_q(1).partial_fractions().unwrap();
        let half_over_i = GaussRational::frac(1, 2) * GaussRational::i().inv().unwrap();
        assert_eq!(pf.parts, vec![(g(0, -1), vec![-&half_over_i]), (g(0, 1), vec![half_over_i])]);
        assert!(pf.poly.is_zero());
    }

    #[test]
    fn polynomial_has_no_parts() {
        let r = RatFuncXi::poly(Poly::linear(&g(-1, 0)));
        let pf = r.partial_fractions().unwrap();
        assert!(pf.parts.is_empty());
        assert_eq!(pf.poly, Poly::linear(&g(-1, 0)));
    }
}
