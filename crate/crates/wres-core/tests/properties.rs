use proptest::prelude::*;
use wres_core::clifford_models::{CliffordModel, N};
use wres_core::coeff_algebra::{trace_f, Assignment, FAtom, FLin, FWord, TraceExpr};
use wres_core::halfplane_calculus::pi_plus_rat;
use wres_core::{GaussRational, Poly, RatFuncXi, ScalarExpr};

fn gauss() -> impl Strategy<Value = GaussRational> {
    (-9i64..10, 1i64..6, -9i64..10, 1i64..6)
        .prop_map(|(a, b, c, d)| &GaussRational::frac(a, b) + &(&GaussRational::i() * &GaussRational::frac(c, d)))
}

/// `p / ((x - i)^a (x + i)^b)` with a small numerator.
fn ratfunc() -> impl Strategy<Value = RatFuncXi> {
    (prop::collection::vec(gauss(), 0..4), 0u32..3, 0u32..3).prop_map(|(c, a, b)| {
        let den = Poly::linear(&GaussRational::i()).pow(a).mul(&Poly::linear(&-GaussRational::i()).pow(b));
        RatFuncXi::new(Poly::new(c), den).unwrap()
    })
}

fn atom() -> impl Strategy<Value = FAtom> {
    (0u8..4, 1u8..=4).prop_map(|(k, j)| match k {
        0 => FAtom::Phi(j),
        1 => FAtom::PhiStar(j),
        2 => FAtom::SigmaF(j),
        _ => FAtom::OmegaF(j),
    })
}

fn word(atoms: &[FAtom]) -> FWord {
    FWord(atoms.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_field_axioms(a in gauss(), b in gauss(), c in gauss()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), GaussRational::one());
        }
    }

    #[test]
    fn partial_fractions_recombine(r in ratfunc()) {
        prop_assert_eq!(r.partial_fractions().unwrap().recombine(), r);
    }

    #[test]
    fn product_rule(f in ratfunc(), g in ratfunc()) {
        let lhs = f.mul(&g).derivative();
        let rhs = f.derivative().mul(&g).add(&f.mul(&g.derivative()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_rule(f in ratfunc(), g in ratfunc()) {
        prop_assume!(!g.is_zero());
        let lhs = f.div(&g).unwrap().derivative();
        let rhs = f.derivative().mul(&g).sub(&f.mul(&g.derivative())).div(&g.mul(&g)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pi_plus_is_a_projection(r in ratfunc(), s in ratfunc()) {
        let p = pi_plus_rat(&r).unwrap();
        prop_assert_eq!(pi_plus_rat(&p).unwrap(), p.clone());
        prop_assert!(pi_plus_rat(&r.sub(&p)).unwrap().is_zero());
        let sum = pi_plus_rat(&r.add(&s)).unwrap();
        prop_assert_eq!(sum, p.add(&pi_plus_rat(&s).unwrap()));
    }

    #[test]
    fn trace_is_cyclic(atoms in prop::collection::vec(atom(), 1..5), k in 0usize..5) {
        let mut rot = atoms.clone();
        rot.rotate_left(k % atoms.len());
        prop_assert_eq!(trace_f(&FLin::word(word(&atoms))), trace_f(&FLin::word(word(&rot))));
    }

    #[test]
    fn trace_substitution_is_matrix_trace(atoms in prop::collection::vec(atom(), 0..4), seed in 0u64..1000) {
        let asg = Assignment::random(2, seed);
        let w = word(&atoms);
        let direct = ScalarExpr::constant(asg.eval_word(&w).unwrap().trace());
        prop_assert_eq!(TraceExpr::tr(w, ScalarExpr::one()).substitute(&asg).unwrap(), direct);
    }
}

#[test]
fn clifford_relations() {
    let two = GaussRational::int(2);
    for model in [CliffordModel::spin(), CliffordModel::signature()] {
        let id = model.identity();
        for i in 1..=N {
            for j in 1..=N {
                let ac = model.c(i).anticommutator(model.c(j));
                let want = if i == j { id.scale(&-two.clone()) } else { id.scale(&GaussRational::zero()) };
                assert_eq!(ac, want, "c{} c{}", i, j);
            }
        }
    }
    let m = CliffordModel::signature();
    let id = m.identity();
    for i in 1..=N {
        for j in 1..=N {
            let hh = m.chat(i).unwrap().anticommutator(m.chat(j).unwrap());
            assert_eq!(hh, if i == j { id.scale(&two) } else { id.scale(&GaussRational::zero()) });
            assert!(m.chat(i).unwrap().anticommutator(m.c(j)).is_zero());
        }
    }
}

#[test]
fn model_traces() {
    let s = CliffordModel::spin();
    let g = CliffordModel::signature();
    assert_eq!(s.trace_rep(&s.c(N).mul(s.c(N))).unwrap(), GaussRational::int(-4));
    assert_eq!(g.trace_rep(&g.c(N).mul(g.c(N))).unwrap(), GaussRational::int(-16));
    for i in 1..=N {
        for j in 1..=N {
            assert!(g.trace_rep(&g.chat(i).unwrap().mul(g.c(j))).unwrap().is_zero());
        }
    }
}
