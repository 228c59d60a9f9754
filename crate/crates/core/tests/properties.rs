use std::collections::BTreeSet;

use pisot_spectra::attractor::{approximate, membership, IfsSpec, MembershipStatus, DEFAULT_STATE_BUDGET};
use pisot_spectra::localconfig::{child, RadiusTest};
use pisot_spectra::spectrum::{generate_ball, generate_degree, DEFAULT_DEGREE_CAP};
use pisot_spectra::{delone_cases, Alphabet, BaseSpec, CyclotomicInt, Order};
use proptest::prelude::*;

const ORDERS: [u32; 8] = [5, 7, 8, 9, 10, 12, 14, 18];

fn case_strategy() -> impl Strategy<Value = (BaseSpec, Alphabet)> {
    (0usize..8).prop_map(|i| {
        let b = delone_cases().swap_remove(i);
        let a = Alphabet::polygonal(b.order);
        (b, a)
    })
}

fn element(order: u32) -> impl Strategy<Value = CyclotomicInt> {
    let o = Order::new(order).unwrap();
    prop::collection::vec(-50i64..50, o.degree()).prop_map(move |c| CyclotomicInt::from_coeffs(o, &c).unwrap())
}

fn pair() -> impl Strategy<Value = (CyclotomicInt, CyclotomicInt, CyclotomicInt)> {
    prop::sample::select(ORDERS.to_vec()).prop_flat_map(|n| (element(n), element(n), element(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws((x, y, z) in pair()) {
        prop_assert_eq!((x + y) * z, x * z + y * z);
        prop_assert_eq!(x * (y * z), (x * y) * z);
        prop_assert_eq!(x * y, y * x);
        prop_assert_eq!(x - x, CyclotomicInt::zero(x.order()));
        let e = (x * y).embed() - x.embed() * y.embed();
        prop_assert!(e.norm() <= 1e-9 * (1.0 + (x * y).embed().norm()));
    }

    #[test]
    fn galois_is_a_homomorphism((x, y, _z) in pair()) {
        let n = x.order().get();
        for k in x.order().units() {
            prop_assert_eq!((x * y).galois_unchecked(k), x.galois_unchecked(k) * y.galois_unchecked(k));
        }
        prop_assert_eq!(x.galois_unchecked(n - 1), x.conj());
    }

    #[test]
    fn exact_signs_agree_with_floats((x, _y, _z) in pair()) {
        let z = x.embed();
        if z.re.abs() > 1e-9 {
            prop_assert_eq!(x.real_sign(), z.re.partial_cmp(&0.0).unwrap());
        }
        if z.im.abs() > 1e-9 {
            prop_assert_eq!(x.imag_sign(), z.im.partial_cmp(&0.0).unwrap());
        }
    }

    #[test]
    fn rotation_permutes_ball((b, a) in case_strategy(), r in 1.0f64..4.0) {
        let p = generate_ball(&b, &a, r).unwrap();
        let rotated: BTreeSet<CyclotomicInt> = p.points.iter().map(CyclotomicInt::rotate).collect();
        let original: BTreeSet<CyclotomicInt> = p.points.iter().copied().collect();
        prop_assert_eq!(rotated, original);
    }

    #[test]
    fn restriction_is_monotone((b, a) in case_strategy(), r in 1.0f64..3.0, dr in 0.0f64..1.5) {
        let small = generate_ball(&b, &a, r).unwrap();
        let large = generate_ball(&b, &a, r + dr).unwrap();
        prop_assert!(small.points.iter().all(|x| large.contains(x)));
        prop_assert_eq!(large.restrict(r).unwrap().points, small.points);
    }
}

#[test]
fn degree_sets_nest_and_recurse() {
    for b in delone_cases() {
        let a = Alphabet::polygonal(b.order);
        let top = if b.value() < 2.0 { 5 } else { 3 };
        let mut prev = generate_degree(&b, &a, 0, DEFAULT_DEGREE_CAP).unwrap();
        for n in 1..=top {
            let cur = generate_degree(&b, &a, n, DEFAULT_DEGREE_CAP).unwrap();
            assert!(prev.points.iter().all(|x| cur.contains(x)), "{} n={n}", b.case_id());
            let via: BTreeSet<CyclotomicInt> =
                prev.points.iter().flat_map(|&x| a.digits().iter().map(move |&d| b.beta * x + d)).collect();
            let cur_set: BTreeSet<CyclotomicInt> = cur.points.iter().copied().collect();
            assert_eq!(via, cur_set, "{} n={n}", b.case_id());
            prev = cur;
        }
    }
}

#[test]
fn attractor_levels_are_self_similar() {
    for (name, order, k) in [("tau", 10, 3), ("delta", 8, 3), ("tau", 5, 2), ("lambda", 7, 2)] {
        let b = BaseSpec::lookup(name, order).unwrap();
        let a = Alphabet::polygonal(b.order);
        let spec = IfsSpec::conjugate(&b, &a, k).unwrap();
        let gamma = spec.contraction_exact.unwrap();
        let top = if b.degree() == 3 { 4 } else { 6 };
        let mut prev = approximate(&spec, 0, 10_000_000).unwrap();
        for d in 1..=top {
            let cur = approximate(&spec, d, 10_000_000).unwrap();
            let via: BTreeSet<CyclotomicInt> =
                prev.points.iter().flat_map(|&x| a.digits().iter().map(move |&q| gamma * x + q)).collect();
            assert_eq!(via, cur.points.iter().copied().collect::<BTreeSet<_>>(), "{name}{order} depth {d}");
            prev = cur;
        }
    }
}

#[test]
fn certificates_replay() {
    for (name, order) in [("tau", 10), ("tau2", 10), ("delta", 8), ("tau", 5)] {
        let b = BaseSpec::lookup(name, order).unwrap();
        let a = Alphabet::polygonal(b.order);
        let spec = IfsSpec::conjugate(&b, &a, b.sigma()).unwrap();
        let patch = generate_ball(&b, &a, 4.0).unwrap();
        for x in &patch.points {
            let m = membership(&spec, x, DEFAULT_STATE_BUDGET).unwrap();
            assert_eq!(m.status, MembershipStatus::Inside, "{name}{order} {x}");
            let value = m.replay(&spec).expect("certificate");
            let target = spec.view(x).embed();
            assert!((value - target).norm() <= 1e-10, "{name}{order} {x}: {value} vs {target}");
        }
    }
}

#[test]
fn children_match_patch_extraction() {
    for (name, order) in [("delta", 8), ("tau2", 10), ("tau", 10), ("tau", 5)] {
        let b = BaseSpec::lookup(name, order).unwrap();
        let a = Alphabet::polygonal(b.order);
        let t = RadiusTest::new(&b, &a).unwrap();
        let r = t.radius();
        let inner = 2.0;
        let outer = b.value() * (inner + r) + 1.0 + r + 0.5;
        let patch = generate_ball(&b, &a, outer).unwrap();
        let lc = |x: CyclotomicInt| -> Vec<CyclotomicInt> {
            let mut v: Vec<CyclotomicInt> = patch.points.iter().map(|&y| y - x).filter(|d| t.inside(d)).collect();
            v.sort();
            v
        };
        for &z in patch.restrict(inner).unwrap().points.iter() {
            let lz = lc(z);
            for (i, &d) in a.digits().iter().enumerate() {
                assert_eq!(child(&lz, b.beta, a.digits(), i, &t), lc(b.beta * z + d), "{name}{order}");
            }
        }
    }
}
