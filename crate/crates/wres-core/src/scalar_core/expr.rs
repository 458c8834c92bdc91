use std::collections::BTreeMap;
use std::fmt;

use super::GaussRational;

/// Commuting formal symbols.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sym {
    Pi,
    /// Normal derivative h'(0) of the collar metric factor.
    Hp0,
    /// Volume of the unit cosphere in the tangential covariables.
    Omega,
    /// Scalar curvature.
    S,
    /// Formal dimension, specialised on demand.
    N,
    /// Sectional curvature component <R(e_i,e_j)e_i,e_j> with i < j.
    K(u8, u8),
}

impl Sym {
    pub fn name(&self) -> String {
        match self {
            Sym::Pi => "pi".into(),
            Sym::Hp0 => "hp0".into(),
            Sym::Omega => "Omega".into(),
            Sym::S => "s".into(),
            Sym::N => "n".into(),
            Sym::K(i, j) => format!("K[{},{}]", i, j),
        }
    }
}

/// Monomial in commuting symbols, stored as symbol -> positive exponent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(BTreeMap<Sym, u32>);

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn sym(s: Sym) -> Self {
        Mono::one().with(s, 1)
    }

    pub fn with(mut self, s: Sym, e: u32) -> Self {
        if e > 0 {
            *self.0.entry(s).or_insert(0) += e;
        }
        self
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, s: Sym) -> u32 {
        self.0.get(&s).copied().unwrap_or(0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut out = self.clone();
        for (s, e) in &o.0 {
            out = out.with(*s, *e);
        }
        out
    }

    pub fn without(&self, s: Sym) -> Mono {
        let mut out = self.clone();
        out.0.remove(&s);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &u32)> {
        self.0.iter()
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| if *e == 1 { s.name() } else { format!("{}^{}", s.name(), e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Polynomial over Q(i) in commuting symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ScalarExpr(BTreeMap<Mono, GaussRational>);

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr::default()
    }

    pub fn one() -> Self {
        ScalarExpr::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        ScalarExpr::term(c, Mono::one())
    }

    pub fn term(c: GaussRational, m: Mono) -> Self {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert(m, c);
        }
        ScalarExpr(map)
    }

    pub fn sym(s: Sym) -> Self {
        ScalarExpr::term(GaussRational::one(), Mono::sym(s))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GaussRational)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &Mono) -> GaussRational {
        self.0.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Mono, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(m.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn add(&self, o: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        for (m, c) in &o.0 {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> ScalarExpr {
        ScalarExpr(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn sub(&self, o: &ScalarExpr) -> ScalarExpr {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: &GaussRational) -> ScalarExpr {
        if a.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr(self.0.iter().map(|(m, c)| (m.clone(), c * a)).collect())
    }

    pub fn mul_mono(&self, m: &Mono) -> ScalarExpr {
        ScalarExpr(self.0.iter().map(|(k, c)| (k.mul(m), c.clone())).collect())
    }

    pub fn mul(&self, o: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &o.0 {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    /// Replaces `s` by the constant `v`.
    pub fn subst(&self, s: Sym, v: &GaussRational) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (m, c) in &self.0 {
            let e = m.exp(s);
            out.add_term(m.without(s), &(c * &v.pow(e)));
        }
        out
    }

    pub fn as_constant(&self) -> Option<GaussRational> {
        match self.0.len() {
            0 => Some(GaussRational::zero()),
            1 => self.0.get(&Mono::one()).cloned(),
            _ => None,
        }
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.0 {
            let t = if m.is_one() {
                if c.is_compound() {
                    format!("({})", c)
                } else {
                    c.to_string()
                }
            } else if c.is_one() {
                m.to_string()
            } else if (-c).is_one() {
                format!("-{}", m)
            } else if c.is_compound() {
                format!("({})*{}", c, m)
            } else {
                format!("{}*{}", c, m)
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

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_commutes_and_prints() {
        let a = ScalarExpr::sym(Sym::Pi).scale(&GaussRational::frac(-3, 8));
        let b = ScalarExpr::sym(Sym::Hp0).mul(&ScalarExpr::sym(Sym::Omega));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b).to_string(), "-3/8*pi*hp0*Omega");
    }

    #[test]
    fn cancellation_prunes() {
        let a = ScalarExpr::sym(Sym::S);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn substitution() {
        let a = ScalarExpr::sym(Sym::N).scale(&GaussRational::frac(1, 16));
        assert_eq!(a.subst(Sym::N, &GaussRational::int(4)).as_constant(), Some(GaussRational::frac(1, 4)));
    }
}
