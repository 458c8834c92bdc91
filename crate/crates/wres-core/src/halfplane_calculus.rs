//! Half-line projection `π⁺`, the contour functional `π'`, and integration over
//! the real `xin` line, all by exact partial fractions.

use thiserror::Error;

use crate::scalar_core::{GaussRational, Mono, RatFuncXi, ScalarError, Sym};
use crate::symbol_algebra::{SymbolExpr, TraceIntegrand};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HalfPlaneError {
    #[error("symbol not in H: real pole in {0}")]
    NotInH(String),
    #[error("divergent line integral: {0}")]
    Divergent(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlaneDecomposition {
    /// Principal parts at poles with positive imaginary part.
    pub plus_part: RatFuncXi,
    /// Lower-half principal parts plus the polynomial part.
    pub minus_part: RatFuncXi,
}

fn upper_parts(r: &RatFuncXi) -> Result<Vec<(GaussRational, Vec<GaussRational>)>, HalfPlaneError> {
    let pf = r.partial_fractions()?;
    if pf.parts.iter().any(|(p, _)| p.im_sign() == 0) {
        return Err(HalfPlaneError::NotInH(r.to_string()));
    }
    Ok(pf.parts.into_iter().filter(|(p, _)| p.im_sign() > 0).collect())
}

pub fn decompose(r: &RatFuncXi) -> Result<HalfPlaneDecomposition, HalfPlaneError> {
    let pf = r.partial_fractions()?;
    if pf.parts.iter().any(|(p, _)| p.im_sign() == 0) {
        return Err(HalfPlaneError::NotInH(r.to_string()));
    }
    let plus_part = pf.principal_sum(|p| p.im_sign() > 0);
    let minus_part = r.sub(&plus_part);
    Ok(HalfPlaneDecomposition { plus_part, minus_part })
}

pub fn pi_plus_rat(r: &RatFuncXi) -> Result<RatFuncXi, HalfPlaneError> {
    if r.is_polynomial() {
        return Ok(RatFuncXi::zero());
    }
    Ok(decompose(r)?.plus_part)
}

/// Entrywise `π⁺`.
pub fn pi_plus(a: &SymbolExpr) -> Result<SymbolExpr, HalfPlaneError> {
    a.try_map_entries(pi_plus_rat)
}

/// `∂_{xin} π⁺ a`.
pub fn pi_plus_then_d_xi_n(a: &SymbolExpr) -> Result<SymbolExpr, HalfPlaneError> {
    Ok(pi_plus(a)?.d_xi_n())
}

/// `π⁺ ∂_{x_n} a`, the order used whenever a normal x-derivative meets `π⁺`.
pub fn d_x_n_then_pi_plus(a: &SymbolExpr) -> Result<SymbolExpr, String> {
    let d = a.d_x_n().map_err(|e| e.to_string())?;
    pi_plus(&d).map_err(|e| e.to_string())
}

/// `∫_R r dxin / π`, i.e. `2i` times the sum of upper-half residues.
pub fn integrate_rat(r: &RatFuncXi) -> Result<GaussRational, HalfPlaneError> {
    if r.is_zero() {
        return Ok(GaussRational::zero());
    }
    let dn = r.num().degree().unwrap_or(0);
    let dd = r.den().degree().unwrap_or(0);
    if dd < dn + 2 {
        return Err(HalfPlaneError::Divergent(r.to_string()));
    }
    let mut res = GaussRational::zero();
    for (_, cs) in upper_parts(r)? {
        res += &cs[0];
    }
    Ok(&res * &GaussRational::from_ints(0, 2))
}

/// Integrates every rational factor over `R`, multiplying in the symbol `pi`.
pub fn integrate_xi_n(t: &TraceIntegrand) -> Result<TraceIntegrand, HalfPlaneError> {
    t.try_map(&Mono::sym(Sym::Pi), |r| Ok(RatFuncXi::constant(integrate_rat(r)?)))
}

/// `π' r = (1/2π) ∮ r` over a counterclockwise contour around the upper poles.
pub fn pi_prime(r: &RatFuncXi) -> Result<GaussRational, HalfPlaneError> {
    if r.is_polynomial() {
        return Ok(GaussRational::zero());
    }
    let mut res = GaussRational::zero();
    for (_, cs) in upper_parts(r)? {
        res += &cs[0];
    }
    Ok(&res * &GaussRational::i())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_core::parse_ratfunc;

    fn r(s: &str) -> RatFuncXi {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn classical_integral() {
        assert_eq!(integrate_rat(&r("1/(1+xin^2)")).unwrap(), GaussRational::one());
        assert!(matches!(integrate_rat(&r("xin/(1+xin^2)")), Err(HalfPlaneError::Divergent(_))));
        assert!(matches!(integrate_rat(&r("1/(xin^2-1)^2")), Err(HalfPlaneError::NotInH(_))));
    }

    #[test]
    fn third_order_pole() {
        let v = integrate_rat(&r("1/((xin-i)^2*(xin+i)^3)")).unwrap();
        assert_eq!(v, GaussRational::frac(-3, 8) * GaussRational::i());
    }

    #[test]
    fn lower_pole_projects_to_zero() {
        assert!(pi_plus_rat(&r("1/(xin+i)")).unwrap().is_zero());
        assert!(pi_plus_rat(&r("xin^2+3")).unwrap().is_zero());
    }

    #[test]
    fn pi_prime_values() {
        assert_eq!(pi_prime(&r("1/(xin-i)")).unwrap(), GaussRational::i());
        assert!(pi_prime(&r("1/(xin-i)^2")).unwrap().is_zero());
        assert!(pi_prime(&r("xin^3")).unwrap().is_zero());
    }
}
