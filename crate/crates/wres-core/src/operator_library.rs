//! The twisted Dirac and twisted signature operators at a boundary point:
//! order-one and order-zero symbols, and the parametrix symbols to order -2.

use std::fmt;

use thiserror::Error;

use crate::clifford_models::{CliffordModel, Mat, ModelKind, N};
use crate::coeff_algebra::{FAtom, FWord};
use crate::scalar_core::{GaussRational, Mono, RatFuncXi, Sym};
use crate::symbol_algebra::{SymbolError, SymbolExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("composition residual at order {order} is nonzero: {residual}")]
    Residual { order: i32, residual: String },
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Dirac,
    Signature,
}

impl Family {
    pub fn model_kind(self) -> ModelKind {
        match self {
            Family::Dirac => ModelKind::Spin4,
            Family::Signature => ModelKind::Signature4,
        }
    }

    pub fn model(self) -> CliffordModel {
        CliffordModel::build(self.model_kind())
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Dirac => "dirac",
            Family::Signature => "signature",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// `g([ẽ_a, ẽ_b], ẽ_c)` at `x0` as a multiple of `hp0`, for the collar frame
/// `ẽ_i = √h e_i`, `ẽ_n = ∂_n`: `[ẽ_i, ẽ_n] = -(hp0/2) ẽ_i`.
fn structure_constant(a: usize, b: usize, c: usize) -> GaussRational {
    let half = GaussRational::frac(1, 2);
    if a < N && b == N && c == a {
        -half
    } else if a == N && b < N && c == b {
        half
    } else {
        GaussRational::zero()
    }
}

/// `g(∇_{ẽ_a} ẽ_b, ẽ_c)` from the Koszul formula, as a multiple of `hp0`.
pub fn levi_civita(a: usize, b: usize, c: usize) -> GaussRational {
    let s = &(&structure_constant(a, b, c) - &structure_constant(a, c, b)) - &structure_constant(b, c, a);
    &s * &GaussRational::frac(1, 2)
}

/// Connection part of `σ0` at `x0`: `Σ_a c_a · ¼ Σ_{b,c} Γ_{a;bc} (c_b c_c - κ ĉ_b ĉ_c)`
/// with `κ = 1` on forms and `0` on spinors.
pub fn frame_connection_sigma0(family: Family, model: &CliffordModel) -> SymbolExpr {
    let mut acc = Mat::zero(model.rep_dim());
    for a in 1..=N {
        let mut conn = Mat::zero(model.rep_dim());
        for b in 1..=N {
            for c in 1..=N {
                let g = levi_civita(a, b, c);
                if g.is_zero() {
                    continue;
                }
                let mut m = model.c(b).mul(model.c(c));
                if family == Family::Signature {
                    m = m.sub(&model.chat(b).unwrap().mul(model.chat(c).unwrap()));
                }
                conn = conn.add(&m.scale(&(&g * &GaussRational::frac(1, 4))));
            }
        }
        acc = acc.add(&model.c(a).mul(&conn));
    }
    SymbolExpr::matrix(&acc).times(&GaussRational::one(), &Mono::sym(Sym::Hp0))
}

/// Displayed geometric part of the signature `σ0`:
/// `-(3/4) hp0 c(dx_n) + ¼ hp0 Σ_{i<n} c(e_i) ĉ(e_n) ĉ(e_i)`.
pub fn displayed_alpha0(model: &CliffordModel) -> SymbolExpr {
    let mut m = model.c(N).scale(&GaussRational::frac(-3, 4));
    if let Ok(chn) = model.chat(N) {
        for i in 1..N {
            let t = model.c(i).mul(chn).mul(model.chat(i).unwrap());
            m = m.add(&t.scale(&GaussRational::frac(1, 4)));
        }
    }
    SymbolExpr::matrix(&m).times(&GaussRational::one(), &Mono::sym(Sym::Hp0))
}

/// `Σ_j m_j ⊗ w_j`.
pub fn clifford_sum(model: &CliffordModel, gens: impl Fn(usize) -> Mat, atom: impl Fn(u8) -> FAtom) -> SymbolExpr {
    let mut out = SymbolExpr::zero(model.rep_dim());
    for j in 1..=N {
        out = out.add(&SymbolExpr::tensor(&gens(j), FWord::atom(atom(j as u8))));
    }
    out
}

/// Twist part of `σ0`.
///
/// Dirac: `Σ c_j (σ^F_j + Φ_j)`, starred `Σ c_j (σ^F_j - Φ*_j)`.
/// Signature: `Σ c_i σ^{F,e}_i - ½ Σ ĉ_i ω_i`, starred with `ω*`.
pub fn twist_sigma0(family: Family, model: &CliffordModel, star: bool) -> SymbolExpr {
    let c = |j: usize| model.c(j).clone();
    match family {
        Family::Dirac => {
            let sig = clifford_sum(model, c, FAtom::SigmaF);
            if star {
                sig.sub(&clifford_sum(model, c, FAtom::PhiStar))
            } else {
                sig.add(&clifford_sum(model, c, FAtom::Phi))
            }
        }
        Family::Signature => {
            let ch = |j: usize| model.chat(j).expect("signature model").clone();
            let sig = clifford_sum(model, c, FAtom::SigmaFe);
            let om = if star {
                clifford_sum(model, ch, FAtom::OmegaFStar)
            } else {
                clifford_sum(model, ch, FAtom::OmegaF)
            };
            sig.sub(&om.scale(&GaussRational::frac(1, 2)))
        }
    }
}

#[derive(Clone, Debug)]
pub struct OperatorSpec {
    pub family: Family,
    pub star: bool,
    pub model: CliffordModel,
    /// `σ1 = i c(ξ)`.
    pub sigma1: SymbolExpr,
    pub sigma0_geom: SymbolExpr,
    pub sigma0_twist: SymbolExpr,
}

impl OperatorSpec {
    pub fn new(family: Family, star: bool, model: CliffordModel, sigma0_geom: SymbolExpr, sigma0_twist: SymbolExpr) -> Self {
        let sigma1 = SymbolExpr::c_xi(&model).scale(&GaussRational::i());
        OperatorSpec { family, star, model, sigma1, sigma0_geom, sigma0_twist }
    }

    pub fn sigma0(&self) -> SymbolExpr {
        self.sigma0_geom.add(&self.sigma0_twist)
    }

    /// Same operator with the order-zero parts replaced.
    pub fn with_sigma0(&self, geom: SymbolExpr, twist: SymbolExpr) -> Self {
        OperatorSpec { sigma0_geom: geom, sigma0_twist: twist, ..self.clone() }
    }
}

pub fn build_operator(family: Family, star: bool) -> OperatorSpec {
    build_operator_in(family, star, family.model())
}

pub fn build_operator_in(family: Family, star: bool, model: CliffordModel) -> OperatorSpec {
    let geom = frame_connection_sigma0(family, &model);
    let twist = twist_sigma0(family, &model, star);
    OperatorSpec::new(family, star, model, geom, twist)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametrixSymbols {
    pub sigma_m1: SymbolExpr,
    pub sigma_m2: SymbolExpr,
}

/// `i c(ξ)/|ξ|^2`.
pub fn sigma_m1(model: &CliffordModel) -> SymbolExpr {
    SymbolExpr::c_xi(model).scale(&GaussRational::i()).scale_rat(&RatFuncXi::inv_q(1))
}

/// Parametrix by the composition formula at `x0`; only the normal
/// x-derivative of `σ_{-1}` survives there. Both composition residuals are
/// checked after on-sphere reduction.
pub fn parametrix(spec: &OperatorSpec) -> Result<ParametrixSymbols, OperatorError> {
    let dim = spec.model.rep_dim();
    let q1 = sigma_m1(&spec.model);
    let s0 = spec.sigma0();
    let r0 = spec.sigma1.mul(&q1).on_sphere().sub(&SymbolExpr::identity(dim));
    if !r0.is_zero() {
        return Err(OperatorError::Residual { order: 0, residual: r0.to_string() });
    }
    let dq1 = q1.d_x_n()?.scale(&-GaussRational::i());
    let inner = s0.mul(&q1).add(&spec.sigma1.d_xi_n().mul(&dq1));
    let q2 = q1.mul(&inner).neg().on_sphere();
    let r1 = spec.sigma1.mul(&q2).add(&inner).on_sphere();
    if !r1.is_zero() {
        return Err(OperatorError::Residual { order: -1, residual: r1.to_string() });
    }
    Ok(ParametrixSymbols { sigma_m1: q1, sigma_m2: q2 })
}

/// Closed form `c(ξ)σ0c(ξ)/|ξ|^4 + c(ξ)/|ξ|^6 c(dx_n)[∂_{x_n}c(ξ')|ξ|^2 - c(ξ) hp0]`.
pub fn displayed_sigma_m2(spec: &OperatorSpec) -> Result<SymbolExpr, OperatorError> {
    let m = &spec.model;
    let cxi = SymbolExpr::c_xi(m);
    let dcp = SymbolExpr::c_xi_prime(m).d_x_n()?;
    let q = SymbolExpr::scalar(m.rep_dim(), RatFuncXi::poly(crate::scalar_core::Poly::one_plus_x2()));
    let first = cxi.mul(&spec.sigma0()).mul(&cxi).scale_rat(&RatFuncXi::inv_q(2));
    let bracket = dcp.mul(&q).sub(&cxi.times(&GaussRational::one(), &Mono::sym(Sym::Hp0)));
    let second = cxi.mul(&SymbolExpr::c_dxn(m)).mul(&bracket).scale_rat(&RatFuncXi::inv_q(3));
    Ok(first.add(&second).on_sphere())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_geometric_sigma0() {
        let m = CliffordModel::spin();
        let s = frame_connection_sigma0(Family::Dirac, &m);
        let want = SymbolExpr::matrix(m.c(4))
            .times(&GaussRational::frac(-3, 4), &Mono::sym(Sym::Hp0));
        assert_eq!(s, want);
    }

    #[test]
    fn signature_geometric_sigma0_matches_alpha0() {
        let m = CliffordModel::signature();
        assert_eq!(frame_connection_sigma0(Family::Signature, &m), displayed_alpha0(&m));
    }

    #[test]
    fn parametrix_closed_form() {
        for fam in [Family::Dirac, Family::Signature] {
            for star in [false, true] {
                let spec = build_operator(fam, star);
                let p = parametrix(&spec).unwrap();
                assert_eq!(p.sigma_m2, displayed_sigma_m2(&spec).unwrap());
            }
        }
    }
}
