use std::sync::Arc;

use evalrep_core::affine::{theta_closed, theta_full_closed, theta_ops};
use evalrep_core::{
    BSubscript, DescentKind, ELambdaTerm, EvaluationModule, Generator, ModuleParams,
    ModuleVector, Representation, SchnizerModule, Sign, WeightVector,
};
use evalrep_cyclotomic::{Backend, BigRational, ExactBackend, RootOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn backend(l: i64) -> ExactBackend {
    ExactBackend::new(RootOrder::new(l).unwrap())
}

fn random_module(n: usize, l: i64, rng: &mut ChaCha8Rng) -> SchnizerModule<ExactBackend> {
    let b = backend(l);
    let big_n = n * (n + 1) / 2;
    let a = (0..big_n)
        .map(|_| {
            let k = rng.gen_range(0..l);
            let c = rng.gen_range(1..4);
            b.mul(&b.eps_pow_int(k), &b.from_int(c))
        })
        .collect();
    let bv = (0..big_n)
        .map(|_| BigRational::from_integer(rng.gen_range(-3..4).into()))
        .collect();
    let lam = (0..n)
        .map(|_| BigRational::from_integer(rng.gen_range(-2..(l + 2)).into()))
        .collect();
    SchnizerModule::new(ModuleParams::new(b, n, a, bv, lam).unwrap()).unwrap()
}

fn sample(dim: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if dim <= 250 {
        (0..dim).collect()
    } else {
        (0..120).map(|_| rng.gen_range(0..dim)).collect()
    }
}

#[test]
fn theta_closed_forms_equal_bracket_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for &(n, l) in &[(2, 3), (2, 5), (3, 3)] {
        for _ in 0..3 {
            let m = random_module(n, l, &mut rng);
            let b = m.backend().clone();
            for i in 1..=n {
                let (e, f) = theta_ops(&b, i);
                for r in sample(m.dim(), &mut rng) {
                    let v = ModuleVector::basis(&b, r);
                    let fv = f.apply(&m, &v).unwrap();
                    let ev = e.apply(&m, &v).unwrap();
                    assert_eq!(theta_closed(&m, i, DescentKind::F, ELambdaTerm::RESOLVED, &v).unwrap(), fv);
                    assert_eq!(theta_closed(&m, i, DescentKind::E, ELambdaTerm::RESOLVED, &v).unwrap(), ev);
                    if i == n {
                        assert_eq!(theta_full_closed(&m, DescentKind::F, &v).unwrap(), fv);
                        assert_eq!(theta_full_closed(&m, DescentKind::E, &v).unwrap(), ev);
                    }
                }
            }
        }
    }
}

#[test]
fn e_theta_with_lambda_term_disagrees() {
    let m = SchnizerModule::distinguished(backend(3), &WeightVector::new(vec![1, 1])).unwrap();
    let b = m.backend().clone();
    let (e, _) = theta_ops(&b, 2);
    let differs = (0..m.dim()).any(|r| {
        let v = ModuleVector::basis(&b, r);
        theta_closed(&m, 2, DescentKind::E, ELambdaTerm::With, &v).unwrap() != e.apply(&m, &v).unwrap()
    });
    assert!(differs);
}

#[test]
fn e0_f0_closed_forms_equal_bracket_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(n, l) in &[(2, 3), (2, 5), (3, 3)] {
        for _ in 0..3 {
            let m = Arc::new(random_module(n, l, &mut rng));
            let b = m.backend().clone();
            for sign in Sign::both() {
                let a = b.mul(&b.eps_pow_int(rng.gen_range(0..l)), &b.from_int(rng.gen_range(1..4)));
                let ev = EvaluationModule::new(m.clone(), sign, a).unwrap();
                for r in sample(ev.dim(), &mut rng) {
                    let v = ModuleVector::basis(&b, r);
                    let e0 = ev.apply_generator(Generator::E(0), &v).unwrap();
                    let f0 = ev.apply_generator(Generator::F(0), &v).unwrap();
                    assert_eq!(ev.ev_zero_closed(true, BSubscript::RESOLVED, &v).unwrap(), e0, "E_0 {sign} n={n} l={l} r={r}");
                    assert_eq!(ev.ev_zero_closed(false, BSubscript::RESOLVED, &v).unwrap(), f0, "F_0 {sign} n={n} l={l} r={r}");
                }
            }
        }
    }
}
