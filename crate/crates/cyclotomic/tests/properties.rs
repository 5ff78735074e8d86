use evalrep_cyclotomic::{
    Backend, BigRational, CycScalar, CyclotomicField, ExactBackend, FloatBackend, RootOrder,
};
use num_bigint::BigInt;
use proptest::prelude::*;

const ORDERS: [i64; 6] = [3, 5, 7, 9, 11, 15];

fn field(l: i64) -> CyclotomicField {
    CyclotomicField::with_order(l).unwrap()
}

fn scalar(l: i64, raw: &[(i64, i64)]) -> CycScalar {
    let coeffs: Vec<BigRational> = raw
        .iter()
        .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
        .collect();
    field(l).from_coeffs(&coeffs)
}

fn arb_raw() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..20, 1i64..6), 1..16)
}

fn arb_order() -> impl Strategy<Value = i64> {
    prop::sample::select(ORDERS.to_vec())
}

proptest! {
    #[test]
    fn ring_axioms(l in arb_order(), x in arb_raw(), y in arb_raw(), z in arb_raw()) {
        let (a, b, c) = (scalar(l, &x), scalar(l, &y), scalar(l, &z));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert!((&a - &a).is_zero());
        prop_assert!((&a + (-&a)).is_zero());
    }

    #[test]
    fn inverses(l in arb_order(), x in arb_raw()) {
        let a = scalar(l, &x);
        prop_assume!(!a.is_zero());
        prop_assert!((a.inv().unwrap() * &a).is_one());
    }

    #[test]
    fn eps_pow_is_a_homomorphism(
        l in arb_order(),
        p1 in -50i64..50,
        q1 in 1i64..40,
        p2 in -50i64..50,
        q2 in 1i64..40,
    ) {
        let k = field(l);
        let ok = |q: i64| num_integer::gcd(q, l) == 1;
        prop_assume!(ok(q1) && ok(q2));
        let e1 = BigRational::new(p1.into(), q1.into());
        let e2 = BigRational::new(p2.into(), q2.into());
        let lhs = k.eps_pow(&(&e1 + &e2)).unwrap();
        let rhs = k.eps_pow(&e1).unwrap() * k.eps_pow(&e2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fractional_power_root(l in arb_order(), p in -50i64..50, q in 1i64..40) {
        prop_assume!(num_integer::gcd(q, l) == 1);
        let k = field(l);
        let root = k.eps_pow(&BigRational::new(p.into(), q.into())).unwrap();
        prop_assert_eq!(root.pow(q).unwrap(), k.eps_pow_int(p));
    }

    #[test]
    fn rejects_shared_denominator(l in arb_order(), p in 1i64..50) {
        let q = if l == 15 { 5 } else { l };
        prop_assume!(num_integer::gcd(p, q) == 1);
        prop_assert!(field(l).eps_pow(&BigRational::new(p.into(), q.into())).is_err());
    }

    #[test]
    fn json_round_trip(l in arb_order(), x in arb_raw()) {
        let a = scalar(l, &x);
        let s = serde_json::to_string(&a).unwrap();
        let b: CycScalar = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(serde_json::to_string(&b).unwrap(), s);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn float_agrees_with_exact(l in arb_order(), x in arb_raw(), y in arb_raw(), q in 1i64..40, p in -30i64..30) {
        let order = RootOrder::new(l).unwrap();
        let ex = ExactBackend::new(order);
        let fl = FloatBackend::new(order, 1e-10);
        let (a, b) = (scalar(l, &x), scalar(l, &y));
        let (fa, fb) = (a.to_complex(), b.to_complex());
        prop_assert!(fl.scalar_eq(&(&a + &b).to_complex(), &fl.add(&fa, &fb)));
        prop_assert!(fl.scalar_eq(&(&a - &b).to_complex(), &fl.sub(&fa, &fb)));
        prop_assert!(fl.scalar_eq(&(&a * &b).to_complex(), &fl.mul(&fa, &fb)));
        prop_assert!(fl.scalar_eq(&(-&a).to_complex(), &fl.neg(&fa)));
        if !a.is_zero() {
            prop_assert!(fl.scalar_eq(&a.inv().unwrap().to_complex(), &fl.inv(&fa).unwrap()));
        }
        let r = BigRational::new(p.into(), q.into());
        prop_assert!(fl.scalar_eq(&ex.from_rational(&r).to_complex(), &fl.from_rational(&r)));
        prop_assert!(fl.scalar_eq(&ex.eps_pow_int(p).to_complex(), &fl.eps_pow_int(p)));
        prop_assert!(fl.scalar_eq(&ex.q_int_int(p).to_complex(), &fl.q_int_int(p)));
    }
}

#[test]
fn q_integer_identity() {
    for l in ORDERS {
        let k = field(l);
        for r in -10..=10 {
            for s in -10..=10 {
                let lhs = k.q_int(r) * k.q_int(s + 1) - k.q_int(r + 1) * k.q_int(s);
                assert_eq!(lhs, k.q_int(r - s), "l={l} r={r} s={s}");
            }
        }
    }
}

#[test]
fn cyclotomic_degrees() {
    let phi = |l: i64| field(l).degree();
    assert_eq!(phi(3), 2);
    assert_eq!(phi(9), 6);
    assert_eq!(phi(15), 8);
}
