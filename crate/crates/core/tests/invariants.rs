use std::sync::Arc;

use evalrep_core::linalg::{matrix_kernel, span_closure, stacked_rank, OperatorMatrix, SubmoduleBasis};
use evalrep_core::{
    EvaluationModule, Generator, ModuleVector, Op, Representation, SchnizerModule, Sign,
    WeightVector,
};
use evalrep_cyclotomic::{Backend, ExactBackend, RootOrder};
use proptest::prelude::*;

fn backend(l: i64) -> ExactBackend {
    ExactBackend::new(RootOrder::new(l).unwrap())
}

fn vector(b: &ExactBackend, dim: usize, entries: &[(usize, i64, i64)]) -> ModuleVector<<ExactBackend as Backend>::Scalar> {
    let mut v = ModuleVector::zero();
    for &(r, c, k) in entries {
        v.add_term(b, r % dim, &b.mul(&b.from_int(c), &b.eps_pow_int(k)));
    }
    v
}

fn entries() -> impl Strategy<Value = Vec<(usize, i64, i64)>> {
    prop::collection::vec((0usize..64, -3i64..4, 0i64..3), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectral_scaling(lam in prop::collection::vec(0i64..3, 2), p in 0i64..3, q in 0i64..3, c in 1i64..4, plus in any::<bool>()) {
        let b = backend(3);
        let base = Arc::new(SchnizerModule::distinguished(b.clone(), &WeightVector::new(lam)).unwrap());
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let a = b.eps_pow_int(p);
        let k = b.mul(&b.from_int(c), &b.eps_pow_int(q));
        let one = EvaluationModule::new(base.clone(), sign, a.clone()).unwrap();
        let two = EvaluationModule::new(base, sign, b.mul(&a, &k)).unwrap();
        let kinv = b.inv(&k).unwrap();
        for r in 0..one.dim() {
            let v = ModuleVector::basis(&b, r);
            let e = one.apply_generator(Generator::E(0), &v).unwrap().scale(&b, &k);
            let f = one.apply_generator(Generator::F(0), &v).unwrap().scale(&b, &kinv);
            prop_assert_eq!(two.apply_generator(Generator::E(0), &v).unwrap(), e);
            prop_assert_eq!(two.apply_generator(Generator::F(0), &v).unwrap(), f);
            for g in [Generator::E(1), Generator::F(2), Generator::K(0)] {
                prop_assert_eq!(two.apply_generator(g, &v).unwrap(), one.apply_generator(g, &v).unwrap());
            }
        }
    }

    #[test]
    fn rank_nullity(dim in 1usize..9, cols in prop::collection::vec(entries(), 8), extra in prop::collection::vec(entries(), 8)) {
        let b = backend(5);
        let mats: Vec<_> = [cols, extra]
            .iter()
            .map(|cs| OperatorMatrix {
                dim,
                cols: (0..dim).map(|j| vector(&b, dim, &cs[j])).collect(),
            })
            .collect();
        let kernel = matrix_kernel(&b, dim, &mats).unwrap();
        prop_assert_eq!(stacked_rank(&b, &mats).unwrap() + kernel.dim(), dim);
        for v in kernel.vectors() {
            for m in &mats {
                let mut img = ModuleVector::zero();
                for (j, x) in v.iter() {
                    img.axpy(&b, x, &m.cols[j]);
                }
                prop_assert!(img.is_zero());
            }
        }
    }

    #[test]
    fn elimination_round_trip(gens in prop::collection::vec(entries(), 1..6), coeffs in prop::collection::vec(-3i64..4, 6)) {
        let b = backend(3);
        let vs: Vec<_> = gens.iter().map(|e| vector(&b, 16, e)).collect();
        let sub = SubmoduleBasis::from_vectors(&b, 16, vs.iter()).unwrap();
        let mut w = ModuleVector::zero();
        for (v, &c) in vs.iter().zip(&coeffs) {
            w.axpy(&b, &b.from_int(c), v);
            prop_assert!(sub.contains(&b, v));
        }
        let coords = sub.coordinates(&b, &w).unwrap();
        let mut back = ModuleVector::zero();
        for (x, u) in coords.iter().zip(sub.vectors()) {
            back.axpy(&b, x, u);
        }
        prop_assert_eq!(back, w);
        prop_assert!(sub.dim() <= vs.len());
    }

    #[test]
    fn closure_is_idempotent(lam in prop::collection::vec(0i64..3, 2), start in entries()) {
        let b = backend(3);
        let m = SchnizerModule::distinguished(b.clone(), &WeightVector::new(lam)).unwrap();
        let v = vector(&b, m.dim(), &start);
        let ops: Vec<Op<_>> = Generator::all(2, false).into_iter().map(Op::gen).collect();
        let once = span_closure(&m, &[v], &ops).unwrap();
        let seeds: Vec<_> = once.vectors().cloned().collect();
        let twice = span_closure(&m, &seeds, &ops).unwrap();
        prop_assert!(once.same_span(&b, &twice));
        for u in &seeds {
            for op in &ops {
                prop_assert!(once.contains(&b, &op.apply(&m, u).unwrap()));
            }
        }
    }
}
