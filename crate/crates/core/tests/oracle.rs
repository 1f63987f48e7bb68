//! Cross-checks of the normal-form product against the action oracle.

mod support;

use std::sync::Arc;

use daggerhyp::{
    ExactScalar, FieldCtx, Flavor, PadicConfig, Scalar, WeylOperator, Window,
};
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{act, monomial, ops_agree_by_action, polys_equal};

fn ctx3() -> Arc<FieldCtx> {
    PadicConfig::new(3, 3, 16).unwrap().context().unwrap()
}

fn random_op(
    ctx: &Arc<FieldCtx>,
    rng: &mut ChaCha8Rng,
    flavor: Flavor,
    window: Window,
) -> WeylOperator<ExactScalar> {
    let mut op = WeylOperator::zero(ctx, flavor, window);
    let lmin = if flavor == Flavor::B1 { -3 } else { 0 };
    for _ in 0..4 {
        let l = rng.random_range(lmin..=3i64);
        let k = rng.random_range(0..=3u32);
        let r = BigRational::new(
            BigInt::from(rng.random_range(-9..=9i64)),
            BigInt::from(rng.random_range(1..=6i64)),
        );
        op.insert_term(l, k, ExactScalar::from_rational(ctx, &r));
    }
    op
}

#[test]
fn product_matches_composed_action() {
    let ctx = ctx3();
    let window = Window::new(20, 20);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0eac1e);
    for trial in 0..120 {
        let flavor = if trial % 2 == 0 { Flavor::A1 } else { Flavor::B1 };
        let p = random_op(&ctx, &mut rng, flavor, window);
        let q = random_op(&ctx, &mut rng, flavor, window);
        let pq = p.mul(&q);
        assert!(!pq.truncated);
        for t in 0..=8i64 {
            let t = if flavor == Flavor::B1 { t - 4 } else { t };
            let x_t = monomial(&ctx, t);
            let direct = act(&pq, &x_t);
            let composed = act(&p, &act(&q, &x_t));
            assert!(
                polys_equal(&direct, &composed),
                "trial {trial}: (PQ)(x^{t}) != P(Q(x^{t}))"
            );
        }
    }
}

#[test]
fn commutation_normal_form_frozen_values() {
    // d^[2] x^3 = x^3 d^[2] + C(3,1) x^2 d^[1] + C(3,2) x d^[0] ... cut by
    // divided-power order: sum_j C(3,j) x^(3-j) d^[2-j].
    let ctx = ctx3();
    let window = Window::new(8, 8);
    let mut dd = WeylOperator::zero(&ctx, Flavor::A1, window);
    dd.insert_term(0, 2, ExactScalar::one(&ctx));
    let mut x3 = WeylOperator::zero(&ctx, Flavor::A1, window);
    x3.insert_term(3, 0, ExactScalar::one(&ctx));
    let product = dd.mul(&x3);

    let mut expected = WeylOperator::zero(&ctx, Flavor::A1, window);
    expected.insert_term(3, 2, ExactScalar::one(&ctx));
    expected.insert_term(2, 1, ExactScalar::from_i64(&ctx, 3));
    expected.insert_term(1, 0, ExactScalar::from_i64(&ctx, 3));
    assert!(ops_agree_by_action(&product, &expected, 8));
    assert_eq!(
        product.sub(&expected).zeroness(),
        daggerhyp::Zeroness::Zero
    );
}

#[test]
fn action_distinguishes_unequal_operators() {
    let ctx = ctx3();
    let window = Window::new(8, 8);
    let mut a = WeylOperator::zero(&ctx, Flavor::A1, window);
    a.insert_term(1, 1, ExactScalar::one(&ctx));
    let mut b = WeylOperator::zero(&ctx, Flavor::A1, window);
    b.insert_term(1, 1, ExactScalar::one(&ctx));
    b.insert_term(0, 2, ExactScalar::from_i64(&ctx, 5));
    assert!(!ops_agree_by_action(&a, &b, 8));
}

#[test]
fn laurent_action_uses_generalized_binomials() {
    // d^[2](x^-1) = C(-1,2) x^-3 = x^-3.
    let ctx = ctx3();
    let window = Window::new(8, 8);
    let mut dd = WeylOperator::zero(&ctx, Flavor::B1, window);
    dd.insert_term(0, 2, ExactScalar::one(&ctx));
    let image = act(&dd, &monomial(&ctx, -1));
    let mut expected = monomial(&ctx, -3);
    expected.insert(-3, ExactScalar::one(&ctx));
    assert!(polys_equal(&image, &expected));
}
