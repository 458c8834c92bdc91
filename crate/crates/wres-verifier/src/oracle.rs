//! Exact matrix substitution: every twist atom becomes a random `k×k`
//! Gaussian-rational matrix and symbolic results are compared as matrices.
//!
//! The Laplace-type data is also rebuilt here from plain matrices, without the
//! differential-operator algebra of the engine, as an independent check.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use wres_core::clifford_models::{CliffordModel, N};
use wres_core::coeff_algebra::{Assignment, CoeffError, FAtom, FWord};
use wres_core::operator_library::Family;
use wres_core::scalar_core::{GaussRational, Mono, RatFuncXi, ScalarExpr, SparseMat, Sym};
use wres_core::symbol_algebra::{SymbolExpr, XiMono};

pub type Mat = SparseMat<GaussRational>;

fn accumulate(out: &mut Mat, m: &Mat, w: &Mat) {
    let k = w.dim();
    for (&(i, j), a) in m.entries() {
        for (&(p, q), b) in w.entries() {
            out.add_at(i * k + p, j * k + q, &(a * b));
        }
    }
}

fn eval_with(
    x: &SymbolExpr,
    asg: &Assignment,
    entry: impl Fn(&RatFuncXi) -> GaussRational,
) -> Result<BTreeMap<(XiMono, Mono), Mat>, CoeffError> {
    // Terms sharing a Clifford matrix are summed on the twist side first.
    let mut grouped: BTreeMap<(XiMono, Mono), HashMap<&SparseMat<RatFuncXi>, Mat>> = BTreeMap::new();
    let mut words: HashMap<&FWord, Mat> = HashMap::new();
    for (k, m) in x.terms() {
        let w = match words.get(&k.word) {
            Some(w) => w.clone(),
            None => {
                let w = asg.eval_word(&k.word)?;
                words.insert(&k.word, w.clone());
                w
            }
        };
        let g = grouped.entry((k.xi, k.mono.clone())).or_default();
        match g.get_mut(m) {
            Some(v) => *v = v.add(&w),
            None => {
                g.insert(m, w);
            }
        }
    }
    let dim = x.dim() * asg.rank();
    let mut out = BTreeMap::new();
    for (key, g) in grouped {
        let mut acc = Mat::zero(dim);
        for (m, w) in g {
            accumulate(&mut acc, &m.map(&entry), &w);
        }
        if !acc.is_zero() {
            out.insert(key, acc);
        }
    }
    Ok(out)
}

/// `Σ m ⊗ w` evaluated at a real point `xi_n`, grouped by ξ' monomial and
/// commuting monomial.
///
/// Symbol denominators are powers of `ξ_n ± i`, so any real point is regular.
pub fn eval_symbol_at(
    x: &SymbolExpr,
    asg: &Assignment,
    xi_n: &GaussRational,
) -> Result<BTreeMap<(XiMono, Mono), Mat>, CoeffError> {
    eval_with(x, asg, |r| &r.num().eval(xi_n) / &r.den().eval(xi_n))
}

/// Like [`eval_symbol_at`] for ξ-free expressions with constant entries.
pub fn eval_constant(x: &SymbolExpr, asg: &Assignment) -> Result<BTreeMap<Mono, Mat>, CoeffError> {
    let out = eval_with(x, asg, |r| r.as_constant().expect("constant entry"))?;
    Ok(out
        .into_iter()
        .map(|((xi, mono), m)| {
            assert_eq!(xi, XiMono::one(), "ξ-dependent expression");
            (mono, m)
        })
        .collect())
}

/// Real evaluation point for seed index `i`.
pub fn xi_point(i: u64) -> GaussRational {
    GaussRational::frac((i % 11) as i64 - 5, 3)
}

/// Numeric `ω_j` and `E = E_0 + s E_s` of a twisted square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericLaplace {
    pub omega: Vec<Mat>,
    pub e0: Mat,
    pub es: Mat,
}

impl NumericLaplace {
    pub fn as_map(&self) -> BTreeMap<Mono, Mat> {
        let mut m = BTreeMap::new();
        for (k, v) in [(Mono::one(), &self.e0), (Mono::sym(Sym::S), &self.es)] {
            if !v.is_zero() {
                m.insert(k, v.clone());
            }
        }
        m
    }

    /// `tr(s/6 + E)` as a polynomial in `s`.
    pub fn interior_trace(&self) -> ScalarExpr {
        let id_tr = GaussRational::int(self.e0.dim() as i64);
        let s = &(&id_tr * &GaussRational::frac(1, 6)) + &self.es.trace();
        ScalarExpr::constant(self.e0.trace()).add(&ScalarExpr::term(s, Mono::sym(Sym::S)))
    }
}

/// `Σ m ⊗ A` with Clifford factor `m` and twist factor `A`, kept factored so
/// that products never touch the full Kronecker matrices.
#[derive(Clone, Debug, Default)]
struct Tensor {
    terms: HashMap<Mat, Mat>,
}

impl Tensor {
    fn pure(m: Mat, a: Mat) -> Tensor {
        let mut t = Tensor::default();
        t.push(m, a);
        t
    }

    fn push(&mut self, m: Mat, a: Mat) {
        if m.is_zero() || a.is_zero() {
            return;
        }
        let neg = m.neg();
        if let Some(v) = self.terms.get_mut(&neg) {
            *v = v.sub(&a);
            if v.is_zero() {
                self.terms.remove(&neg);
            }
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.add(&a);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, a);
            }
        }
    }

    fn add(&self, o: &Tensor) -> Tensor {
        let mut out = self.clone();
        for (m, a) in &o.terms {
            out.push(m.clone(), a.clone());
        }
        out
    }

    fn scale(&self, c: &GaussRational) -> Tensor {
        Tensor { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.scale(c))).collect() }
    }

    fn sub(&self, o: &Tensor) -> Tensor {
        self.add(&o.scale(&GaussRational::int(-1)))
    }

    fn mul(&self, o: &Tensor) -> Tensor {
        let mut out = Tensor::default();
        for (m, a) in &self.terms {
            for (n, b) in &o.terms {
                out.push(m.mul(n), a.mul(b));
            }
        }
        out
    }

    fn full(&self, cl_dim: usize, rank: usize) -> Mat {
        let mut out = Mat::zero(cl_dim * rank);
        for (m, a) in &self.terms {
            accumulate(&mut out, m, a);
        }
        out
    }
}

struct Ctx<'a> {
    model: CliffordModel,
    asg: &'a Assignment,
    id_f: Mat,
    cache: RefCell<HashMap<FAtom, Mat>>,
}

impl Ctx<'_> {
    fn cl(&self, m: &Mat) -> Tensor {
        Tensor::pure(m.clone(), self.id_f.clone())
    }

    fn c(&self, j: usize) -> Tensor {
        self.cl(self.model.c(j))
    }

    fn value(&self, a: FAtom) -> Result<Mat, CoeffError> {
        if let Some(v) = self.cache.borrow().get(&a) {
            return Ok(v.clone());
        }
        let v = self.asg.value(&a)?;
        self.cache.borrow_mut().insert(a, v.clone());
        Ok(v)
    }

    fn atom(&self, a: FAtom) -> Result<Tensor, CoeffError> {
        Ok(Tensor::pure(self.model.identity(), self.value(a)?))
    }

    fn gen_sum(&self, g: impl Fn(usize) -> Mat, a: impl Fn(u8) -> FAtom) -> Result<Tensor, CoeffError> {
        let mut out = Tensor::default();
        for k in 1..=N {
            out.push(g(k), self.value(a(k as u8))?);
        }
        Ok(out)
    }

    fn der(j: u8, f: fn(u8) -> FAtom) -> impl Fn(u8) -> FAtom {
        move |k| FAtom::der(j, f(k)).expect("depth one")
    }
}

fn half(m: &Tensor) -> Tensor {
    m.scale(&GaussRational::frac(1, 2))
}

/// Laplace data of the twisted square from matrices, at `x0`.
///
/// The untwisted square contributes `-Σ ∂^2 - 2Σ S_j ∂_j - Σ(∂_j S_j + S_j^2)
/// + s/4 + ½ Σ R_ij c_i c_j`; the twist pieces are expanded by hand.
pub fn numeric_laplace(family: Family, asg: &Assignment) -> Result<NumericLaplace, CoeffError> {
    let ctx = Ctx { model: family.model(), asg, id_f: Mat::identity(asg.rank()), cache: RefCell::default() };
    let cl_dim = ctx.model.rep_dim();
    let (sig, curv): (fn(u8) -> FAtom, fn(u8, u8) -> Result<(i32, FAtom), CoeffError>) = match family {
        Family::Dirac => (FAtom::SigmaF, FAtom::rf),
        Family::Signature => (FAtom::SigmaFe, FAtom::rfe),
    };
    let s: Vec<Tensor> = (1..=N).map(|j| ctx.atom(sig(j as u8))).collect::<Result<_, _>>()?;
    let ds: Vec<Tensor> = (1..=N).map(|j| ctx.atom(FAtom::der(j as u8, sig(j as u8)).unwrap())).collect::<Result<_, _>>()?;
    let mut rcc = Tensor::default();
    for i in 1..=N {
        for j in 1..=N {
            if i != j {
                let (sg, a) = curv(i as u8, j as u8)?;
                let t = ctx.atom(a)?.mul(&ctx.c(i)).mul(&ctx.c(j));
                rcc = rcc.add(&t.scale(&GaussRational::frac(sg as i64, 2)));
            }
        }
    }
    let c: Vec<Tensor> = (1..=N).map(|j| ctx.c(j)).collect();
    // A^j and B of P = -(Σ ∂^2 + A^j ∂_j + B); dlin[j] = ∂_j of the twist part of ω_j.
    let mut a_coef = Vec::new();
    let mut dlin = Vec::new();
    let mut b = Tensor::default();
    for j in 0..N {
        b = b.add(&ds[j]).add(&s[j].mul(&s[j]));
    }
    b = b.sub(&rcc);
    match family {
        Family::Dirac => {
            let cg = |k: usize| ctx.model.c(k).clone();
            let p = ctx.gen_sum(cg, FAtom::Phi)?;
            let ps = ctx.gen_sum(cg, FAtom::PhiStar)?;
            for j in 0..N {
                let jj = j as u8 + 1;
                let dp = ctx.gen_sum(cg, Ctx::der(jj, FAtom::Phi))?;
                let dps = ctx.gen_sum(cg, Ctx::der(jj, FAtom::PhiStar))?;
                a_coef.push(s[j].scale(&GaussRational::int(2)).add(&ps.mul(&c[j])).sub(&c[j].mul(&p)));
                b = b.sub(&c[j].mul(&dp.add(&s[j].mul(&p)))).add(&ps.mul(&c[j]).mul(&s[j]));
                dlin.push(half(&dps.mul(&c[j]).sub(&c[j].mul(&dp))));
            }
            b = b.add(&ps.mul(&p));
        }
        Family::Signature => {
            let hg = |k: usize| ctx.model.chat(k).expect("form model").clone();
            let w = ctx.gen_sum(hg, FAtom::OmegaF)?;
            let ws = ctx.gen_sum(hg, FAtom::OmegaFStar)?;
            for j in 0..N {
                let jj = j as u8 + 1;
                let dw = ctx.gen_sum(hg, Ctx::der(jj, FAtom::OmegaF))?;
                let dws = ctx.gen_sum(hg, Ctx::der(jj, FAtom::OmegaFStar))?;
                a_coef.push(s[j].scale(&GaussRational::int(2)).add(&half(&ws.mul(&c[j]).add(&c[j].mul(&w)))));
                b = b.add(&half(&ws.mul(&c[j]).mul(&s[j]))).add(&half(&c[j].mul(&dw.add(&s[j].mul(&w)))));
                dlin.push(dws.mul(&c[j]).add(&c[j].mul(&dw)).scale(&GaussRational::frac(1, 4)));
            }
            b = b.sub(&ws.mul(&w).scale(&GaussRational::frac(1, 4)));
        }
    }
    let omega: Vec<Tensor> = a_coef.iter().map(half).collect();
    let mut e0 = b;
    for j in 0..N {
        e0 = e0.sub(&ds[j]).sub(&dlin[j]).sub(&omega[j].mul(&omega[j]));
    }
    let dim = cl_dim * asg.rank();
    let es = Mat::identity(dim).scale(&GaussRational::frac(-1, 4));
    Ok(NumericLaplace {
        omega: omega.iter().map(|w| w.full(cl_dim, asg.rank())).collect(),
        e0: e0.full(cl_dim, asg.rank()),
        es,
    })
}

/// Rank-`k` random assignment for seed `base + i`.
pub fn assignment(k: usize, base: u64, i: u64) -> Assignment {
    Assignment::random(k, base.wrapping_add(i))
}
