//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible with --nocapture; encoded in test names
//! otherwise). Tolerances and sample sizes are pinned here.

mod support;

use std::sync::Arc;
use std::time::{Duration, Instant};

use daggerhyp::{
    chain_verify, decay_fit, decompose, diagnose, factorial_meets_bound, fourier_identity_check,
    fuzz_solver_residual, fuzz_valuation_bounds, injectivity_witness, inversion_identity_check,
    kummer_identity_check, radius_estimate, solve_x_inverse, DigitStream, ExactScalar, FieldCtx,
    Flavor, HypParams, IdentityStatus, LiouvilleDiagnosis, PadicConfig, PadicParameter,
    PadicScalar, PiVariant, Scalar, SolveOptions, SubstitutionRule, Valuation, WeylOperator,
    Window, Zeroness,
};
use num::rational::Ratio;
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::ops_agree_by_action;

const SEED: u64 = 0x5eed_ac; // shared base seed for all randomized criteria

fn finish(id: u32, name: &str, ok: bool, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    let within = elapsed <= budget;
    println!(
        "criterion_{id:02} {name}: {} ({:.2}s / budget {:.0}s)",
        if ok && within { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(ok, "criterion_{id:02} {name} failed");
    assert!(
        within,
        "criterion_{id:02} {name} overran budget: {elapsed:?}"
    );
}

fn ctx(p: u64, prec: u32) -> Arc<FieldCtx> {
    PadicConfig::new(p, p, prec).unwrap().context().unwrap()
}

fn random_op(
    ctx: &Arc<FieldCtx>,
    rng: &mut ChaCha8Rng,
    window: Window,
) -> WeylOperator<ExactScalar> {
    let mut op = WeylOperator::zero(ctx, Flavor::A1, window);
    for _ in 0..3 {
        let l = rng.random_range(0..=3i64);
        let k = rng.random_range(0..=3u32);
        let r = BigRational::new(
            BigInt::from(rng.random_range(-9..=9i64)),
            BigInt::from(rng.random_range(1..=6i64)),
        );
        op.insert_term(l, k, ExactScalar::from_rational(ctx, &r));
    }
    op
}

/// All multisets of the given size drawn from the pool.
fn multisets<T: Clone>(pool: &[T], size: usize) -> Vec<Vec<T>> {
    fn rec<T: Clone>(pool: &[T], size: usize, start: usize, acc: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if size == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..pool.len() {
            acc.push(pool[i].clone());
            rec(pool, size - 1, i, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(pool, size, 0, &mut Vec::new(), &mut out);
    out
}

#[test]
fn criterion_01_ring_axioms_and_commutation() {
    let started = Instant::now();
    let ctx3 = ctx(3, 16);
    let window = Window::new(24, 24);

    let mut d = WeylOperator::zero(&ctx3, Flavor::A1, window);
    d.insert_term(0, 1, ExactScalar::one(&ctx3));
    let mut x = WeylOperator::zero(&ctx3, Flavor::A1, window);
    x.insert_term(1, 0, ExactScalar::one(&ctx3));
    let one = WeylOperator::one(&ctx3, Flavor::A1, window);
    let commutator = d.mul(&x).sub(&x.mul(&d));
    let mut ok = commutator.sub(&one).zeroness() == Zeroness::Zero;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..500 {
        let p = random_op(&ctx3, &mut rng, window);
        let q = random_op(&ctx3, &mut rng, window);
        let r = random_op(&ctx3, &mut rng, window);
        let left = p.mul(&q).mul(&r);
        let right = p.mul(&q.mul(&r));
        if left.truncated || right.truncated {
            ok = false;
            break;
        }
        if left.sub(&right).zeroness() != Zeroness::Zero {
            ok = false;
            break;
        }
    }
    finish(1, "ring-axioms", ok, started, Duration::from_secs(10));
}

#[test]
fn criterion_02_fourier_automorphism() {
    let started = Instant::now();
    let ctx3 = ctx(3, 16);
    let window = Window::new(24, 24);
    let mut ok = true;

    for variant in [PiVariant::Standard, PiVariant::Flipped] {
        let fourier = SubstitutionRule::Fourier {
            variant,
            inverse: false,
        };
        let fourier_inv = SubstitutionRule::Fourier {
            variant,
            inverse: true,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
        for _ in 0..100 {
            let p = random_op(&ctx3, &mut rng, window);
            let q = random_op(&ctx3, &mut rng, window);
            let lhs = daggerhyp::apply_substitution(&p.mul(&q), &fourier).unwrap();
            let rhs = daggerhyp::apply_substitution(&p, &fourier)
                .unwrap()
                .mul(&daggerhyp::apply_substitution(&q, &fourier).unwrap());
            if lhs.truncated || rhs.truncated || lhs.sub(&rhs).zeroness() != Zeroness::Zero {
                ok = false;
            }
            let back = daggerhyp::apply_substitution(
                &daggerhyp::apply_substitution(&p, &fourier).unwrap(),
                &fourier_inv,
            )
            .unwrap();
            if back.sub(&p).zeroness() != Zeroness::Zero {
                ok = false;
            }
        }

        // theta = x d maps to -theta - 1, exactly.
        let mut theta = WeylOperator::zero(&ctx3, Flavor::A1, window);
        theta.insert_term(1, 1, ExactScalar::one(&ctx3));
        let image = daggerhyp::apply_substitution(&theta, &fourier).unwrap();
        let mut expected = WeylOperator::zero(&ctx3, Flavor::A1, window);
        expected.insert_term(1, 1, ExactScalar::from_i64(&ctx3, -1));
        expected.insert_term(0, 0, ExactScalar::from_i64(&ctx3, -1));
        if image.sub(&expected).zeroness() != Zeroness::Zero {
            ok = false;
        }
        if !ops_agree_by_action(&image, &expected, 8) {
            ok = false;
        }
    }
    finish(2, "fourier-automorphism", ok, started, Duration::from_secs(10));
}

#[test]
fn criterion_03_twist_identities_exhaustive_grid() {
    let started = Instant::now();
    let pool: Vec<PadicParameter> = [
        (0i64, 1i64),
        (1, 2),
        (-1, 2),
        (1, 3),
        (-1, 3),
        (1, 5),
    ]
    .iter()
    .map(|&(n, d)| PadicParameter::rational_i64(n, d))
    .collect();
    let window = Window::new(10, 10);
    let mut checks = 0usize;
    let mut ok = true;

    for p in [3u64, 5] {
        let cx = ctx(p, 16);
        for m in 0..=3usize {
            for n in 0..=(3 - m) {
                for alpha in multisets(&pool, m) {
                    for beta in multisets(&pool, n) {
                        let params = HypParams::new(alpha.clone(), beta.clone());
                        let inv =
                            inversion_identity_check::<ExactScalar>(&cx, &params, window).unwrap();
                        checks += 1;
                        let unit_matches = match (&inv.unit, &inv.predicted_unit) {
                            (Some(u), Some(pu)) => u.sub(pu).is_exact_zero(),
                            _ => false,
                        };
                        if inv.status != IdentityStatus::Verified || !unit_matches {
                            ok = false;
                        }
                        for gamma in &pool {
                            let kum = kummer_identity_check::<ExactScalar>(
                                &cx, &params, gamma, Flavor::A1, window,
                            )
                            .unwrap();
                            checks += 1;
                            if kum.status != IdentityStatus::Verified {
                                ok = false;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checks > 5000, "grid unexpectedly small: {checks}");
    finish(3, "twist-identities", ok, started, Duration::from_secs(30));
}

#[test]
fn criterion_04_fourier_hypergeometric_identity() {
    let started = Instant::now();
    let extra_alpha: Vec<PadicParameter> = [(1i64, 2i64), (1, 3), (-1, 3)]
        .iter()
        .map(|&(n, d)| PadicParameter::rational_i64(n, d))
        .collect();
    let beta_pool: Vec<PadicParameter> = [(1i64, 5i64), (2, 5), (-1, 5)]
        .iter()
        .map(|&(n, d)| PadicParameter::rational_i64(n, d))
        .collect();
    let window = Window::new(12, 12);
    let mut ok = true;

    for p in [3u64, 5] {
        let cx = ctx(p, 16);
        for m in 1..=3usize {
            for n in 0..=(3 - m) {
                for extras in multisets(&extra_alpha, m - 1) {
                    for beta in multisets(&beta_pool, n) {
                        let mut alpha = vec![PadicParameter::rational_i64(0, 1)];
                        alpha.extend(extras.iter().cloned());
                        let params = HypParams::new(alpha, beta.clone());
                        let rep =
                            fourier_identity_check::<ExactScalar>(&cx, &params, window).unwrap();
                        if rep.status != IdentityStatus::Verified || rep.shift != Some(0) {
                            ok = false;
                        }
                    }
                }
            }
        }

        // End-to-end: decompose to rank one and verify every step.
        let half = PadicParameter::rational_i64(1, 2);
        let third = PadicParameter::rational_i64(1, 3);
        let fifth = PadicParameter::rational_i64(-1, 5);
        let targets = [
            HypParams::new(vec![half.clone()], vec![]),
            HypParams::new(vec![], vec![third.clone()]),
            HypParams::new(vec![half.clone()], vec![third.clone()]),
            HypParams::new(vec![half.clone(), fifth.clone()], vec![third.clone()]),
        ];
        for target in &targets {
            let chain = decompose(p, target, 64).unwrap();
            let report = chain_verify::<ExactScalar>(&cx, &chain, window).unwrap();
            if !report.passes() {
                ok = false;
            }
        }
    }
    finish(
        4,
        "fourier-hypergeometric",
        ok,
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_05_valuation_lemma_and_legendre() {
    let started = Instant::now();
    let fuzz = fuzz_valuation_bounds(1000, SEED ^ 5);
    let mut ok = fuzz.passed();
    for p in [2u64, 3, 5, 7, 11] {
        for m in 1..=1_000_000u64 {
            if !factorial_meets_bound(p, m) {
                ok = false;
                break;
            }
        }
    }
    finish(5, "valuation-lemma", ok, started, Duration::from_secs(30));
}

#[test]
fn criterion_06_radius_proposition() {
    let started = Instant::now();
    const HORIZON: u64 = 512;
    const SLACK: f64 = 0.95;
    // Denominators coprime to p keep the parameter p-integral.
    let dens: [(u64, [i64; 5]); 3] = [
        (2, [3, 5, 7, 9, 11]),
        (3, [2, 4, 5, 7, 8]),
        (5, [2, 3, 4, 6, 7]),
    ];
    let mut ok = true;
    for (p, ds) in dens {
        let floor = SLACK * (p as f64).powf(-1.0 / (p as f64 - 1.0));
        let mut count = 0;
        'outer: for d in ds {
            for n in [1i64, 2, -1, 5, 7] {
                if n.rem_euclid(d) == 0 {
                    continue;
                }
                let alpha = PadicParameter::rational_i64(n, d);
                match diagnose(p, &alpha, 64) {
                    Ok(LiouvilleDiagnosis::NonLiouvilleCertified { .. }) => {}
                    _ => {
                        ok = false;
                        continue;
                    }
                }
                let est = radius_estimate(p, &alpha, HORIZON).unwrap();
                if !est.exact || est.radius < floor {
                    println!(
                        "  radius failure p={p} alpha={n}/{d}: {} < {floor}",
                        est.radius
                    );
                    ok = false;
                }
                count += 1;
                if count == 20 {
                    break 'outer;
                }
            }
        }
        if count < 20 {
            ok = false;
        }
    }
    finish(6, "radius-floor", ok, started, Duration::from_secs(30));
}

#[test]
fn criterion_07_solver_residual_and_decay() {
    let started = Instant::now();
    const PRECISION: u32 = 20;
    const LEN: usize = 20;
    let mut ok = fuzz_solver_residual(100, SEED ^ 7).passed();

    // Float mode: residual indistinguishable from zero down to at least
    // PRECISION pi-digits, i.e. valuation >= PRECISION * v(pi).
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    for _ in 0..100 {
        let p = [3u64, 5, 7][rng.random_range(0..3)];
        let cx = ctx(p, PRECISION);
        let mk = |rng: &mut ChaCha8Rng| loop {
            let d = rng.random_range(2..=9i64);
            if d as u64 % p == 0 {
                continue;
            }
            let n = rng.random_range(-20..=20i64);
            if n.rem_euclid(d) == 0 {
                continue;
            }
            return PadicParameter::rational_i64(n, d);
        };
        let m = rng.random_range(0..=2usize);
        let n = rng.random_range(0..=2usize);
        let params = HypParams::new(
            (0..m).map(|_| mk(&mut rng)).collect(),
            (0..n).map(|_| mk(&mut rng)).collect(),
        );
        // Source decays like a dagger element: v(c_k) = 2k * v(pi).
        let c: Vec<PadicScalar> = (0..LEN)
            .map(|k| {
                let r = BigRational::new(
                    BigInt::from(rng.random_range(-9..=9i64)),
                    BigInt::from(rng.random_range(1..=6i64)),
                );
                PadicScalar::from_rational(&cx, &r).mul(&PadicScalar::pi_pow(&cx, 2 * k as i64))
            })
            .collect();
        let rep = match solve_x_inverse(&cx, &params, &c, &SolveOptions::default()) {
            Ok(rep) => rep,
            Err(e) => {
                println!("  solve failed: {e}");
                ok = false;
                continue;
            }
        };
        let need = Ratio::new(PRECISION as i64, p as i64 - 1);
        for r in &rep.residual {
            match r.zeroness() {
                Zeroness::NonZero => ok = false,
                Zeroness::Zero => {}
                Zeroness::Indeterminate => {
                    if let Valuation::Finite(v) = r.valuation().lower() {
                        if v < need {
                            println!("  residual floor {v} below {need} at p={p}");
                            ok = false;
                        }
                    }
                }
            }
        }
        let fit = decay_fit(&rep.d, rep.l0, Ratio::new(1, 2));
        if !fit.pass {
            println!("  decay fit failed at p={p}");
            ok = false;
        }
    }
    finish(7, "solver-residual", ok, started, Duration::from_secs(120));
}

#[test]
fn criterion_08_injectivity_witness() {
    let started = Instant::now();
    let mut ok = true;
    let pool = [(1i64, 2i64), (1, 4), (-1, 2), (1, 5), (2, 5), (-1, 5), (3, 4)];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    for set in 0..20 {
        let p = [3u64, 5, 7][set % 3];
        let m = rng.random_range(0..=2usize);
        let n = rng.random_range(0..=2usize);
        if m + n == 0 {
            continue;
        }
        // Parameters must be p-integral: the witness lives in Z_p.
        let draw = |rng: &mut ChaCha8Rng| loop {
            let (a, b) = pool[rng.random_range(0..pool.len())];
            if b as u64 % p != 0 {
                return PadicParameter::rational_i64(a, b);
            }
        };
        let params = HypParams::new(
            (0..m).map(|_| draw(&mut rng)).collect(),
            (0..n).map(|_| draw(&mut rng)).collect(),
        );
        let rep = injectivity_witness(p, &params, 0, 300, Ratio::new(1, 2), 6).unwrap();
        if !rep.passes() {
            println!("  no divergence for {params} at p={p}");
            ok = false;
        }
    }

    // A zero seed propagates to the zero sequence under the kernel
    // recurrence u_{k+1} = u_k * A(k) / (pifac * B(k)).
    let cx = ctx(3, 16);
    let params = HypParams::new(
        vec![PadicParameter::rational_i64(1, 2)],
        vec![PadicParameter::rational_i64(1, 5)],
    );
    let pifac = ExactScalar::pi_pow(&cx, 0).mul_rational(&BigRational::from_integer(
        BigInt::from(params.sigma(3)),
    ));
    let mut u = ExactScalar::zero(&cx);
    for k in 0..50i64 {
        let a = ExactScalar::from_i64(&cx, k)
            .sub(&ExactScalar::from_param(&cx, &params.alpha[0]).unwrap());
        let b = ExactScalar::from_i64(&cx, k)
            .sub(&ExactScalar::from_param(&cx, &params.beta[0]).unwrap());
        u = u.mul(&a).div(&pifac.mul(&b)).unwrap();
        if !u.is_exact_zero() {
            ok = false;
        }
    }
    finish(8, "injectivity-witness", ok, started, Duration::from_secs(30));
}

#[test]
fn criterion_09_liouville_exemplar() {
    let started = Instant::now();
    let mut ok = true;

    // alpha = sum p^(a_i) with a_(i+1) = p^(a_i): the canonical obstruction.
    for p in [2u64, 3] {
        let mut exps = vec![1u64];
        loop {
            let last = *exps.last().unwrap();
            let next = (p as f64).powf(last as f64);
            if next > 60.0 {
                break;
            }
            exps.push(next as u64);
        }
        let horizon = 64usize;
        let mut digits = vec![0u32; horizon];
        for &e in &exps {
            digits[e as usize] = 1;
        }
        let tower = PadicParameter::Stream(DigitStream::new(p, digits).unwrap());
        match diagnose(p, &tower, 512) {
            Ok(LiouvilleDiagnosis::LiouvilleWitnessed { .. }) => {}
            other => {
                println!("  tower at p={p} not witnessed: {other:?}");
                ok = false;
            }
        }
    }

    // Every rational parameter used across the suite certifies.
    for p in [2u64, 3, 5, 7] {
        for (n, d) in [
            (1i64, 2i64),
            (-1, 2),
            (1, 3),
            (-1, 3),
            (1, 5),
            (2, 5),
            (7, 3),
            (-19, 7),
        ] {
            if d as u64 % p == 0 || n.rem_euclid(d) == 0 {
                continue;
            }
            let prm = PadicParameter::rational_i64(n, d);
            match diagnose(p, &prm, 128) {
                Ok(LiouvilleDiagnosis::NonLiouvilleCertified { .. }) => {}
                other => {
                    println!("  {n}/{d} at p={p}: {other:?}");
                    ok = false;
                }
            }
        }
    }
    finish(9, "liouville-exemplar", ok, started, Duration::from_secs(10));
}
