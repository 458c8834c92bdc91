//! The boundary term of the residue of `π⁺(D*)^{-1} ∘ π⁺D^{-1}` in dimension
//! four: five cases indexed by symbol orders and derivative counts.
//!
//! Each case integrand is
//! `∂_{x_n}^j ∂_{ξ'}^α ∂_{ξ_n}^k π⁺σ_r(left) × ∂_{x'}^α ∂_{ξ_n}^{j+1} ∂_{x_n}^k σ_l(right)`
//! traced over the bundle, integrated over `ξ_n ∈ R` and the unit cosphere.

use std::fmt;

use thiserror::Error;

use crate::coeff_algebra::{FAtom, FWord, TraceExpr};
use crate::halfplane_calculus::{integrate_xi_n, pi_plus, HalfPlaneError};
use crate::operator_library::{build_operator, parametrix, Family, OperatorError, OperatorSpec, ParametrixSymbols};
use crate::scalar_core::{GaussRational, Mono, ScalarExpr, Sym};
use crate::symbol_algebra::{SymbolError, SymbolExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundaryError {
    #[error("dimension {0} unsupported: boundary cases are implemented for n = 4")]
    Unsupported(usize),
    #[error("tangential x-derivative factor is nonzero, ξ' derivatives are not implemented: {0}")]
    Tangential(String),
    #[error("case value not of the form pi*Omega*(...): {0}")]
    NotHomogeneous(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    HalfPlane(#[from] HalfPlaneError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    AI,
    AII,
    AIII,
    B,
    C,
}

impl CaseId {
    pub fn label(self) -> &'static str {
        match self {
            CaseId::AI => "a(I)",
            CaseId::AII => "a(II)",
            CaseId::AIII => "a(III)",
            CaseId::B => "b",
            CaseId::C => "c",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaseIndex {
    pub id: CaseId,
    pub r: i32,
    pub l: i32,
    pub k: u32,
    pub j: u32,
    pub alpha: u32,
}

impl CaseIndex {
    /// `(-i)^{|α|+j+k+1} / (α! (j+k+1)!)`.
    pub fn prefactor(&self) -> GaussRational {
        self.prefactor_with_exponent(self.alpha + self.j + self.k + 1)
    }

    /// The same with exponent `|α|+j+k+l`, `l` being the right symbol order.
    pub fn prefactor_l_exponent(&self) -> GaussRational {
        let e = self.alpha as i64 + self.j as i64 + self.k as i64 + self.l as i64;
        self.prefactor_with_exponent(e.rem_euclid(4) as u32)
    }

    fn prefactor_with_exponent(&self, e: u32) -> GaussRational {
        let fact: i64 = (1..=(self.j + self.k + 1) as i64).product();
        &(-GaussRational::i()).pow(e % 4) * &GaussRational::frac(1, fact)
    }
}

/// Admissible indices: `-r - l + k + j + |α| = n - 1` with `r, l ∈ {-1, -2}`.
pub fn enumerate_cases(n: usize) -> Result<Vec<CaseIndex>, BoundaryError> {
    if n != 4 {
        return Err(BoundaryError::Unsupported(n));
    }
    let target = n as i32 - 1;
    let mut out = Vec::new();
    for (r, l) in [(-1, -1), (-2, -1), (-1, -2)] {
        let rest = target + r + l;
        for alpha in 0..=rest.max(0) as u32 {
            for j in 0..=rest.max(0) as u32 {
                for k in 0..=rest.max(0) as u32 {
                    if (alpha + j + k) as i32 != rest {
                        continue;
                    }
                    let id = match (r, l, alpha, j, k) {
                        (-1, -1, 1, 0, 0) => CaseId::AI,
                        (-1, -1, 0, 1, 0) => CaseId::AII,
                        (-1, -1, 0, 0, 1) => CaseId::AIII,
                        (-2, -1, 0, 0, 0) => CaseId::B,
                        (-1, -2, 0, 0, 0) => CaseId::C,
                        _ => unreachable!("depth -2 truncation admits five cases"),
                    };
                    out.push(CaseIndex { id, r, l, k, j, alpha });
                }
            }
        }
    }
    out.sort_by_key(|c| c.id);
    Ok(out)
}

pub fn case(id: CaseId) -> CaseIndex {
    enumerate_cases(4).unwrap().into_iter().find(|c| c.id == id).unwrap()
}

fn order(p: &ParametrixSymbols, r: i32) -> &SymbolExpr {
    if r == -1 {
        &p.sigma_m1
    } else {
        &p.sigma_m2
    }
}

fn times(mut s: SymbolExpr, n: u32, f: impl Fn(&SymbolExpr) -> Result<SymbolExpr, BoundaryError>) -> Result<SymbolExpr, BoundaryError> {
    for _ in 0..n {
        s = f(&s)?;
    }
    Ok(s)
}

/// Case value from given left (starred operator) and right symbols.
pub fn case_value(c: &CaseIndex, left: &ParametrixSymbols, right: &ParametrixSymbols) -> Result<TraceExpr, BoundaryError> {
    let mut r = order(right, c.l).clone();
    r = times(r, c.k, |s| Ok(s.d_x_n()?))?;
    r = times(r, c.j + 1, |s| Ok(s.d_xi_n()))?;
    if c.alpha > 0 {
        for i in 1..=3u8 {
            let t = r.d_x_tangential(i)?;
            if !t.is_zero() {
                return Err(BoundaryError::Tangential(t.to_string()));
            }
        }
        return Ok(TraceExpr::zero());
    }
    let mut l = order(left, c.r).clone();
    l = times(l, c.j, |s| Ok(s.d_x_n()?))?;
    l = pi_plus(&l)?;
    l = times(l, c.k, |s| Ok(s.d_xi_n()))?;
    let t = l.mul(&r).trace_total();
    let t = integrate_xi_n(&t)?.sphere_integrate()?;
    let v = t.to_trace_expr()?;
    Ok(v.scale(&ScalarExpr::constant(c.prefactor())))
}

#[derive(Clone, Debug)]
pub struct BoundaryCaseResult {
    pub case: CaseIndex,
    pub family: Family,
    pub value: TraceExpr,
    pub expected: TraceExpr,
    pub matches: bool,
    pub flags: Vec<String>,
}

pub fn pi_omega() -> Mono {
    Mono::sym(Sym::Pi).with(Sym::Omega, 1)
}

fn po(c: GaussRational, extra: &[Sym]) -> ScalarExpr {
    let mut m = pi_omega();
    for s in extra {
        m = m.with(*s, 1);
    }
    ScalarExpr::term(c, m)
}

fn tr(a: FAtom, c: GaussRational) -> TraceExpr {
    TraceExpr::tr(FWord::atom(a), po(c, &[]))
}

/// Reference value of each case.
pub fn expected_case(id: CaseId, family: Family) -> TraceExpr {
    let f = GaussRational::frac;
    let dim = |c: GaussRational| TraceExpr::dim_f(po(c, &[Sym::Hp0]));
    match (family, id) {
        (_, CaseId::AI) => TraceExpr::zero(),
        (Family::Dirac, CaseId::AII) => dim(f(-3, 8)),
        (Family::Dirac, CaseId::AIII) => dim(f(3, 8)),
        (Family::Dirac, CaseId::B) => dim(f(9, 8))
            .add(&tr(FAtom::SigmaF(4), f(-1, 1)))
            .add(&tr(FAtom::PhiStar(4), f(1, 1))),
        (Family::Dirac, CaseId::C) => dim(f(-9, 8))
            .add(&tr(FAtom::SigmaF(4), f(1, 1)))
            .add(&tr(FAtom::Phi(4), f(1, 1))),
        (Family::Signature, CaseId::AII) => dim(f(-3, 2)),
        (Family::Signature, CaseId::AIII) => dim(f(3, 2)),
        (Family::Signature, CaseId::B) => dim(f(9, 2)).add(&tr(FAtom::SigmaFe(4), f(-4, 1))),
        (Family::Signature, CaseId::C) => dim(f(-9, 2)).add(&tr(FAtom::SigmaFe(4), f(4, 1))),
    }
}

pub fn expected_psi(family: Family) -> TraceExpr {
    match family {
        Family::Dirac => tr(FAtom::PhiStar(4), GaussRational::one()).add(&tr(FAtom::Phi(4), GaussRational::one())),
        Family::Signature => TraceExpr::zero(),
    }
}

/// The case-b twist term as literally typeset, with a free index `j`.
pub const CASE_B_LITERAL_TWIST: &str = "-1/4*Tr(id⊗(SigmaF[n]-PhiStar[j]))*pi*Omega";

pub fn case_flags(id: CaseId, family: Family) -> Vec<String> {
    let mut v = Vec::new();
    if family == Family::Dirac && id == CaseId::B {
        v.push(format!("index-typo: reference trace term reads {} with a stray j; computed with j = n", CASE_B_LITERAL_TWIST));
    }
    v
}

/// Both parametrices for a family: `(starred, plain)`.
pub fn family_parametrices(family: Family) -> Result<(ParametrixSymbols, ParametrixSymbols), BoundaryError> {
    Ok((parametrix(&build_operator(family, true))?, parametrix(&build_operator(family, false))?))
}

pub fn check_homogeneous(v: &TraceExpr) -> Result<(), BoundaryError> {
    for (_, c) in v.terms() {
        for (m, _) in c.terms() {
            if m.exp(Sym::Pi) != 1 || m.exp(Sym::Omega) != 1 {
                return Err(BoundaryError::NotHomogeneous(v.to_string()));
            }
        }
    }
    Ok(())
}

pub fn evaluate_case_with(
    c: &CaseIndex,
    family: Family,
    left: &ParametrixSymbols,
    right: &ParametrixSymbols,
) -> Result<BoundaryCaseResult, BoundaryError> {
    let value = case_value(c, left, right)?;
    check_homogeneous(&value)?;
    let expected = expected_case(c.id, family);
    Ok(BoundaryCaseResult {
        case: *c,
        family,
        matches: value == expected,
        value,
        expected,
        flags: case_flags(c.id, family),
    })
}

pub fn evaluate_case(c: &CaseIndex, family: Family) -> Result<BoundaryCaseResult, BoundaryError> {
    let (l, r) = family_parametrices(family)?;
    evaluate_case_with(c, family, &l, &r)
}

/// All five cases for a family.
pub fn evaluate_all(family: Family) -> Result<Vec<BoundaryCaseResult>, BoundaryError> {
    let (l, r) = family_parametrices(family)?;
    enumerate_cases(4)?.iter().map(|c| evaluate_case_with(c, family, &l, &r)).collect()
}

pub fn psi_total(family: Family) -> Result<TraceExpr, BoundaryError> {
    Ok(evaluate_all(family)?.iter().fold(TraceExpr::zero(), |acc, r| acc.add(&r.value)))
}

/// Case b or c evaluated with the order -2 symbol split into its geometric
/// part and the part linear in the twist. Returns `(geometric, twist)`.
pub fn split_case(id: CaseId, family: Family) -> Result<(TraceExpr, TraceExpr), BoundaryError> {
    let c = case(id);
    let star = build_operator(family, true);
    let plain = build_operator(family, false);
    let geom_only = |s: &OperatorSpec| -> Result<ParametrixSymbols, BoundaryError> {
        let z = SymbolExpr::zero(s.model.rep_dim());
        Ok(parametrix(&s.with_sigma0(s.sigma0_geom.clone(), z))?)
    };
    let twist_only = |s: &OperatorSpec| -> ParametrixSymbols {
        let cxi = SymbolExpr::c_xi(&s.model);
        let m2 = cxi.mul(&s.sigma0_twist).mul(&cxi).scale_rat(&crate::scalar_core::RatFuncXi::inv_q(2)).on_sphere();
        ParametrixSymbols { sigma_m1: crate::operator_library::sigma_m1(&s.model), sigma_m2: m2 }
    };
    let full_l = parametrix(&star)?;
    let full_r = parametrix(&plain)?;
    match id {
        CaseId::B => Ok((case_value(&c, &geom_only(&star)?, &full_r)?, case_value(&c, &twist_only(&star), &full_r)?)),
        CaseId::C => Ok((case_value(&c, &full_l, &geom_only(&plain)?)?, case_value(&c, &full_l, &twist_only(&plain))?)),
        _ => Ok((case_value(&c, &full_l, &full_r)?, TraceExpr::zero())),
    }
}

/// Residue statement: interior integrand with prefactor and boundary term.
#[derive(Clone, Debug)]
pub struct WresReport {
    pub family: Family,
    pub interior_prefactor: ScalarExpr,
    pub interior_integrand: TraceExpr,
    pub boundary: TraceExpr,
}

impl WresReport {
    pub fn statement(&self) -> String {
        let b = if self.boundary.is_zero() {
            String::new()
        } else {
            format!(" + ∫_{{∂M}} [{}] dx'", self.boundary)
        };
        format!("Wres = ∫_M ({}) * [{}] dvol{}", self.interior_prefactor, self.interior_integrand, b)
    }
}

/// `(2π)^{n/2}/(n/2-2)!` at `n = 4`.
pub fn interior_prefactor() -> ScalarExpr {
    ScalarExpr::term(GaussRational::int(4), Mono::one().with(Sym::Pi, 2))
}

pub fn wres_boundary_report(family: Family, interior_integrand: TraceExpr) -> Result<WresReport, BoundaryError> {
    Ok(WresReport { family, interior_prefactor: interior_prefactor(), interior_integrand, boundary: psi_total(family)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_cases() {
        let cs = enumerate_cases(4).unwrap();
        assert_eq!(cs.len(), 5);
        assert!(enumerate_cases(3).is_err());
    }

    #[test]
    fn prefactors() {
        let i = GaussRational::i();
        let want = [GaussRational::int(-1), GaussRational::frac(-1, 2), GaussRational::frac(-1, 2), -&i, -&i];
        let got: Vec<_> = enumerate_cases(4).unwrap().iter().map(|c| c.prefactor()).collect();
        assert_eq!(got, want);
    }
}
