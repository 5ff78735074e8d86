use std::sync::Arc;

use evalrep_core::analysis::{verify_relations, Level};
use evalrep_core::{EvaluationModule, SchnizerModule, Sign, WeightVector};
use evalrep_cyclotomic::{Backend, ExactBackend, RootOrder};

#[test]
fn evaluation_modules_satisfy_affine_relations() {
    let b = ExactBackend::new(RootOrder::new(3).unwrap());
    for lam in [vec![1, 1], vec![2, 0], vec![0, 2]] {
        let m = Arc::new(SchnizerModule::distinguished(b.clone(), &WeightVector::new(lam.clone())).unwrap());
        for sign in Sign::both() {
            for a in [b.one(), b.eps_pow_int(1)] {
                let ev = EvaluationModule::new(m.clone(), sign, a).unwrap();
                let res = verify_relations(&ev, Level::Affine).unwrap();
                let bad: Vec<_> = res.iter().filter(|r| !r.passed()).collect();
                assert!(bad.is_empty(), "lambda={lam:?} sign={sign}: {bad:#?}");
            }
        }
    }
}
