//! Acceptance gate: one test per criterion, each printing a single
//! `[PASS] criterion N` line and enforcing its stated tolerance and runtime
//! budget. Tolerances are pinned here, not read from configuration.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use entlab::hull::{
    c_A_ratio, diag_set, hull_entropy_bounds_upto, l02_lower, steinwart_m, steinwart_upper,
    AlphaList, SteinwartParams, WeightPreset,
};
use entlab::kernel::{
    kernel_q_integral, kernel_q_integral_quadrature, sandwich_check, KernelMode, KernelSpec,
    SANDWICH_TOL,
};
use entlab::metricspace::{
    entropy_numbers, exact_cover, greedy_cover, packing_lower, CoverMethod, Norm, PointCloud,
};
use entlab::operator::{
    net_lower_kernel_atoms, net_lower_kernel_atoms_dyadic, net_lower_means, net_lower_rademacher,
    rate_oracle, rieli_bound, semigroup_check, shift_modulus_check_with, singular_values,
    DiscretizedOperator, OpKernel, RateQuery, Rl06Decay,
};
use entlab::rates::RateFormula;
use entlab::seqspace::{lh1_check, lh2_check, lh2_proof_constant, MonotoneSeq};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

const VO: KernelMode = KernelMode::Volterra;
const WS: KernelMode = KernelMode::WeaklySingular;

fn budget(criterion: u32, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "criterion {criterion}: runtime budget exceeded ({elapsed:?} >= {limit:?})"
    );
}

/// Least-squares slope of `y` on `x`.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[test]
fn criterion_01_interval_entropy() {
    let t0 = Instant::now();
    let points: Vec<Vec<f64>> = (0..1001).map(|i| vec![i as f64 / 1000.0]).collect();
    let cloud = PointCloud::new(points, Norm::Inf).unwrap();
    let eps = entropy_numbers(&cloud, 10, CoverMethod::Exact).unwrap();
    let mut worst = 0.0f64;
    for n in 1..=10usize {
        let dev = (eps[n - 1] - 0.5 / n as f64).abs();
        worst = worst.max(dev);
        assert!(
            dev <= 1e-3,
            "criterion 1: eps_{n} = {} is not (2n)^-1 = {} within 1e-3",
            eps[n - 1],
            0.5 / n as f64
        );
    }
    budget(1, t0, Duration::from_secs(1));
    println!(
        "[PASS] criterion 1 (interval entropy): eps_n = (2n)^-1 +- {worst:.2e} for n <= 10 \
         in {:?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_02_covering_ordering() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(1402);
    let norms = [Norm::P(1.0), Norm::P(2.0), Norm::Inf];
    let mut worst_ratio = 0.0f64;
    for trial in 0..200usize {
        let size = rng.random_range(2..=20usize);
        let dim = rng.random_range(1..=4usize);
        let norm = norms[trial % 3];
        let points: Vec<Vec<f64>> = (0..size)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let cloud = PointCloud::new(points, norm).unwrap();
        let spread = cloud
            .distance_set()
            .into_iter()
            .fold(0.0f64, f64::max);
        let eps = spread * rng.random_range(0.15..0.85);
        let pack = packing_lower(&cloud, eps).unwrap().count;
        let exact = exact_cover(&cloud, eps).unwrap().count;
        let greedy = greedy_cover(&cloud, eps).unwrap().count;
        assert!(
            pack <= exact && exact <= greedy,
            "criterion 2: trial {trial} violates packing <= exact <= greedy \
             ({pack} / {exact} / {greedy} at eps = {eps})"
        );
        let ratio = greedy as f64 / exact as f64;
        worst_ratio = worst_ratio.max(ratio);
        assert!(
            ratio <= (size as f64).ln() + 1.0,
            "criterion 2: trial {trial} greedy/exact = {ratio} exceeds ln|A|+1"
        );
    }
    budget(2, t0, Duration::from_secs(30));
    println!(
        "[PASS] criterion 2 (covering ordering): 200 clouds, zero violations, \
         worst greedy/exact = {worst_ratio:.3} in {:?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_03_le02_sandwich() {
    let t0 = Instant::now();
    assert_eq!(SANDWICH_TOL, 1e-4, "criterion 3: sandwich tolerance moved off 1e-4");
    let grid: Vec<f64> = (0..33).map(|i| i as f64 / 32.0).collect();
    let qs = [4.0 / 3.0, 2.0, 4.0];
    let mut checked = 0usize;
    let mut rejected = 0usize;
    for mode in [VO, WS] {
        for &q in &qs {
            let mut specs: Vec<(String, Result<KernelSpec, entlab::Error>)> = Vec::new();
            for &tau in &[0.125, 0.25, 0.375] {
                specs.push((format!("POWER({tau})"), KernelSpec::power(tau, mode)));
            }
            for &beta in &[0.75, 1.0, 2.0] {
                // The bracket is a theorem for non-increasing kernels only,
                // and x^{-1/q} (c0 - ln x)^{-beta} turns increasing near 1
                // once beta > c0/q, so keep c0 at the monotone boundary.
                specs.push((
                    format!("LOGPOWER(1/q, {beta})"),
                    KernelSpec::log_power(1.0 / q, beta, beta * q, mode),
                ));
            }
            for (label, spec) in specs {
                let spec = spec.unwrap();
                // POWER needs q tau < 1 and the critical log form needs
                // beta q > 1; outside that k^q is not integrable and the
                // bracket must be refused, not faked.
                let integrable = kernel_q_integral(&spec, q, 0.5).is_ok();
                if !integrable {
                    let err = sandwich_check(&spec, q, 0.25, 0.75);
                    assert!(
                        err.is_err(),
                        "criterion 3: {label} q = {q} has divergent q-integral but \
                         sandwich_check returned a value"
                    );
                    rejected += 1;
                    continue;
                }
                for (i, &s) in grid.iter().enumerate() {
                    for &t in &grid[i + 1..] {
                        let check = sandwich_check(&spec, q, s, t).unwrap();
                        assert!(
                            check.passed,
                            "criterion 3: {label} q = {q} {mode:?} failed at (s, t) = \
                             ({s}, {t}): d = {}, bracket [{}, {}]",
                            check.d, check.lower, check.upper
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    // POWER tau q >= 1 at (1/4, 4) and (3/8, 4); LOGPOWER beta q = 1 at
    // (3/4, 4/3). Each appears once per mode.
    assert_eq!(rejected, 6, "criterion 3: expected exactly 3 divergent combos per mode");
    budget(3, t0, Duration::from_secs(60));
    println!(
        "[PASS] criterion 3 (le02 sandwich): {checked} bracket checks passed at tol 1e-4, \
         {rejected} divergent combos refused, in {:?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_04_closed_forms_vs_quadrature() {
    let t0 = Instant::now();
    let specs = [
        KernelSpec::power(0.3, VO).unwrap(),
        KernelSpec::log_power(0.5, 1.5, 1.0, VO).unwrap(),
    ];
    let q = 2.0;
    let mut worst = 0.0f64;
    for spec in &specs {
        for i in 0..100 {
            // 100 log-spaced radii across five decades up to r = 1.
            let r = 10f64.powf(-5.0 * (1.0 - i as f64 / 99.0));
            let closed = kernel_q_integral(spec, q, r).unwrap();
            let quad = kernel_q_integral_quadrature(spec, q, r, 1e-9).unwrap();
            let rel = (closed - quad).abs() / quad;
            worst = worst.max(rel);
            assert!(
                rel <= 1e-6,
                "criterion 4: {} at r = {r}: closed {closed} vs quadrature {quad} \
                 (rel {rel:.2e})",
                spec.family.name()
            );
        }
    }
    println!(
        "[PASS] criterion 4 (closed forms vs quadrature): 200 radii, worst rel dev \
         {worst:.2e} <= 1e-6, in {:?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_05_riemann_liouville() {
    let t0 = Instant::now();

    let semi = semigroup_check(0.5, 0.5, &[1.0], 256).unwrap();
    assert!(semi <= 1e-6, "criterion 5: semigroup defect {semi} > 1e-6");

    // Monomial identity: T_alpha t^k = Gamma(k+1)/Gamma(k+1+alpha) t^{k+alpha},
    // sup-relative on the grid.
    let mut worst_mono = 0.0f64;
    for &alpha in &[0.25, 0.5, 1.0, 1.5] {
        let op = DiscretizedOperator::new(OpKernel::RiemannLiouville { alpha }, 512).unwrap();
        let grid = op.grid();
        for k in 0..=4u32 {
            let f: Vec<f64> = grid.iter().map(|t| t.powi(k as i32)).collect();
            let tf = op.apply(&f).unwrap();
            let scale = libm::tgamma(k as f64 + 1.0) / libm::tgamma(k as f64 + 1.0 + alpha);
            let exact: Vec<f64> = grid.iter().map(|t| scale * t.powf(k as f64 + alpha)).collect();
            let sup_err = tf
                .iter()
                .zip(&exact)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            let sup_ref = exact.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let rel = sup_err / sup_ref;
            worst_mono = worst_mono.max(rel);
            assert!(
                rel <= 1e-6,
                "criterion 5: monomial k = {k}, alpha = {alpha}: sup-relative error {rel:.2e}"
            );
        }
    }

    // Shift-modulus bound on the equivalent convolution form of R_{3/4}.
    let spec = KernelSpec::power(0.25, VO).unwrap();
    let op = DiscretizedOperator::new(OpKernel::Convolution(spec), 129).unwrap();
    let grid = op.grid();
    let mut rng = ChaCha20Rng::seed_from_u64(2026);
    for _ in 0..100 {
        let coef: Vec<(f64, f64)> = (0..5)
            .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let f: Vec<f64> = grid
            .iter()
            .map(|t| {
                coef.iter()
                    .enumerate()
                    .map(|(j, (a, b))| {
                        let w = (j + 1) as f64 * PI * t;
                        a * w.cos() + b * w.sin()
                    })
                    .sum()
            })
            .collect();
        for p in [1.0, 2.0, f64::INFINITY] {
            for j in 1..=6u32 {
                let delta = 0.5f64.powi(j as i32);
                let check = shift_modulus_check_with(&op, p, delta, &f).unwrap();
                assert!(
                    check.passed,
                    "criterion 5: shift bound failed at p = {p}, delta = {delta}: \
                     lhs {} > rhs {}",
                    check.lhs, check.rhs
                );
            }
        }
    }
    println!(
        "[PASS] criterion 5 (fractional integration): semigroup defect {semi:.2e}, worst \
         monomial rel {worst_mono:.2e}, 1800 shift checks, in {:?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_06_spectral_rate() {
    let t0 = Instant::now();

    // Decay exponent of the singular values, read off dyadic-ish samples.
    // The continuous spectrum sits at 1/((n - 1/2) pi) for alpha = 1, so the
    // regression abscissa is log(n - 1/2), not log n.
    let samples = [4usize, 6, 9, 13, 19, 28];
    let mut fitted = Vec::new();
    for &alpha in &[0.5, 1.0] {
        let op = DiscretizedOperator::new(OpKernel::RiemannLiouville { alpha }, 256).unwrap();
        let sv = singular_values(&op).unwrap();
        let xs: Vec<f64> = samples.iter().map(|&n| (n as f64 - 0.5).ln()).collect();
        let ys: Vec<f64> = samples.iter().map(|&n| sv.value(n).ln()).collect();
        let exponent = -slope(&xs, &ys);
        fitted.push(exponent);
        assert!(
            (exponent - alpha).abs() <= 0.05,
            "criterion 6: fitted exponent {exponent} not within {alpha} +- 0.05"
        );
    }

    // rieli domination: fit the constant on n <= 8, then the bound must stay
    // above every computed singular value through n = 32.
    let spec = KernelSpec::power(0.25, VO).unwrap();
    let op = DiscretizedOperator::new(OpKernel::RiemannLiouville { alpha: 0.75 }, 256).unwrap();
    let sv = singular_values(&op).unwrap();
    let mut c = 0.0f64;
    for n in 1..=8u64 {
        c = c.max(sv.value(n as usize) / rieli_bound(&spec, 2.0, n, 1.0).unwrap());
    }
    let c = 1.02 * c;
    for n in 1..=32u64 {
        let bound = rieli_bound(&spec, 2.0, n, c).unwrap();
        let s = sv.value(n as usize);
        assert!(
            s <= bound,
            "criterion 6: rieli bound {bound} < s_{n} = {s} (fitted c = {c})"
        );
    }
    println!(
        "[PASS] criterion 6 (spectral rate): exponents {:.4} / {:.4} within +-0.05, rieli \
         constant {c:.4} dominates s_n for n <= 32, in {:?}",
        fitted[0],
        fitted[1],
        t0.elapsed()
    );
}

/// The dyadic-index lower bounds of one net family against a rate-table
/// upper formula: the constant is fitted on indices <= 32 and the domination
/// must persist to n = 2^10 within a 1.25 slack.
fn net_dominated_by(bounds: &[(u64, f64)], formula: &RateFormula, label: &str) {
    let mut c = 0.0f64;
    for &(n, b) in bounds.iter().filter(|(n, _)| *n <= 32) {
        c = c.max(b / formula.eval(n));
    }
    assert!(c.is_finite() && c > 0.0, "criterion 7: {label}: degenerate fitted constant");
    for &(n, b) in bounds {
        let upper = 1.25 * c * formula.eval(n);
        assert!(
            b <= upper,
            "criterion 7: {label}: net lower bound {b} exceeds fitted upper {upper} at n = {n}"
        );
    }
}

#[test]
fn criterion_07_net_lower_bounds() {
    let t0 = Instant::now();

    // Hand-derived example values, closed forms to 1e-10.
    let tol = 1e-10;
    let pw_half = KernelSpec::power(0.5, VO).unwrap();
    let b = net_lower_rademacher(&pw_half, 4).unwrap();
    assert!((b.separation - 2.0).abs() <= tol, "rademacher(1/2, n=4) separation {}", b.separation);
    assert!((b.bound() - 1.0).abs() <= tol);
    assert_eq!(b.entropy_index(), Some(15));

    let pw = KernelSpec::power(0.25, VO).unwrap();
    let b = net_lower_rademacher(&pw, 1).unwrap();
    assert!((b.bound() - 4.0 / 3.0).abs() <= tol, "rademacher(1/4, n=1) bound {}", b.bound());

    let b = net_lower_kernel_atoms(&pw, 2.0, 4).unwrap();
    assert!((b.separation - 1.0).abs() <= tol, "atoms(1/4, m=4) separation {}", b.separation);
    assert!((b.log2_cardinality - 2.0).abs() <= tol);
    assert_eq!(b.entropy_index(), Some(3));

    let lp = KernelSpec::log_power(0.5, 1.0, 1.0, VO).unwrap();
    let b = net_lower_kernel_atoms(&lp, 2.0, 20).unwrap();
    let expect = (1.0 + 20f64.ln()).powf(-0.5);
    assert!((b.separation - expect).abs() <= tol, "atoms(log, m=20) separation {}", b.separation);

    let b = net_lower_means(&pw, 2.0, 4).unwrap();
    assert!((b.separation - FRAC_1_SQRT_2).abs() <= tol, "means(m=4) separation {}", b.separation);
    assert!((b.log2_cardinality - 2.0).abs() <= tol);

    let b = net_lower_means(&pw, 2.0, 16).unwrap();
    assert!(
        (b.separation - 0.3535533905932738).abs() <= tol,
        "means(m=16) separation {}",
        b.separation
    );
    assert!((b.log2_cardinality - 8.0).abs() <= tol);

    // Domination by the matching upper-rate regimes. The sign net with n
    // blocks certifies e_n >= bound (2^{n-1} <= 2^n - 1); the dyadic atom
    // net places its bound at entropy index 2^{n-1} directly.
    let p1 = rate_oracle(&RateQuery::Th04 {
        p: 2.0,
        tau: 0.25,
        beta: 0.0,
        gamma: 0.0,
        slack: None,
    })
    .unwrap();
    assert_eq!((p1.case_index, p1.formula.p0), (1, 0.75));
    let bounds: Vec<(u64, f64)> = (1..=1024)
        .map(|n| (n, net_lower_rademacher(&pw, n).unwrap().bound()))
        .collect();
    net_dominated_by(&bounds, &p1.formula, "subcritical power vs sign net");

    let p2 = rate_oracle(&RateQuery::Th04 {
        p: 2.0,
        tau: 0.5,
        beta: 0.75,
        gamma: 0.0,
        slack: None,
    })
    .unwrap();
    assert_eq!((p2.case_index, p2.formula.p0), (2, 0.25));
    let lp2 = KernelSpec::log_power(0.5, 0.75, 1.0, VO).unwrap();
    let bounds: Vec<(u64, f64)> = (1..=1024)
        .map(|n| (n, net_lower_kernel_atoms_dyadic(&lp2, 2.0, n).unwrap().bound()))
        .collect();
    net_dominated_by(&bounds, &p2.formula, "critical log vs dyadic atoms");

    let p6 = rate_oracle(&RateQuery::Th04 {
        p: 2.0,
        tau: 0.5,
        beta: 0.5,
        gamma: 1.0,
        slack: None,
    })
    .unwrap();
    assert_eq!((p6.case_index, p6.formula.q0), (6, 0.5));
    let dl = KernelSpec::double_log(0.5, 0.5, 1.0, 1.0, VO).unwrap();
    let bounds: Vec<(u64, f64)> = (1..=1024)
        .map(|n| (n, net_lower_kernel_atoms_dyadic(&dl, 2.0, n).unwrap().bound()))
        .collect();
    net_dominated_by(&bounds, &p6.formula, "doubly critical vs dyadic atoms");

    println!(
        "[PASS] criterion 7 (net lower bounds): example values exact to 1e-10, three regimes \
         dominated through n = 2^10, in {:?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_08_hardy_suite() {
    let t0 = Instant::now();
    let param_sets = [(1.0f64, 2.0f64), (1.0, 4.0), (2.0, 3.0)];
    let alphas = [-1.0f64, 0.0, 1.0];
    let len = 64usize;

    let draw = |rng: &mut ChaCha20Rng| -> MonotoneSeq {
        // Sorted uniforms under a random power envelope: slowly varying
        // tails and fast-decay tails both appear.
        let d: f64 = rng.random_range(0.0..2.0);
        let mut v: Vec<f64> = (0..len).map(|_| rng.random_range(1e-3..1.0)).collect();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let v = v
            .into_iter()
            .enumerate()
            .map(|(i, x)| x * ((i + 1) as f64).powf(-d))
            .collect();
        MonotoneSeq::new(v).unwrap()
    };

    for &(t, r) in &param_sets {
        for &alpha in &alphas {
            // One fitted constant per parameter set: calibrate the sum form
            // on its own draw, then hold a fresh sample under it.
            let mut cal = ChaCha20Rng::seed_from_u64(13);
            let mut c1 = 0.0f64;
            for _ in 0..1000 {
                let sigma = draw(&mut cal);
                c1 = c1.max(lh1_check(&sigma, t, r, r, alpha, len).unwrap().ratio);
            }
            let c1 = 1.25 * c1;
            let c2 = lh2_proof_constant(t, r, alpha, len).unwrap().powf(1.0 / t);

            let mut rng = ChaCha20Rng::seed_from_u64(8 + (t + r + alpha) as u64);
            for trial in 0..1000 {
                let sigma = draw(&mut rng);
                let h1 = lh1_check(&sigma, t, r, r, alpha, len).unwrap();
                assert!(
                    h1.ratio >= 1.0 - 1e-9 && h1.ratio <= c1,
                    "criterion 8: lh1 ratio {} outside [1, {c1}] at (t, r, alpha) = \
                     ({t}, {r}, {alpha}), trial {trial}",
                    h1.ratio
                );
                let h2 = lh2_check(&sigma, t, r, alpha, len).unwrap();
                assert!(
                    h2.ratio >= 1.0 - 1e-9 && h2.ratio <= c2 * (1.0 + 1e-12),
                    "criterion 8: lh2 ratio {} exceeds proof constant {c2} at \
                     (t, r, alpha) = ({t}, {r}, {alpha}), trial {trial}",
                    h2.ratio
                );
            }
        }
    }

    // The quoted 1.0417 for sigma = 1/k, (t, r, alpha) = (1, 2, 0) is the
    // n = 4 term of the sup enumeration, 2 * (H_4 / 4) = 25/24; the sup
    // itself sits at n = 2 with value 1.5/sqrt(2).
    let sigma = MonotoneSeq::from_fn(len, |k| 1.0 / k as f64).unwrap();
    let h4: f64 = (1..=4).map(|k| 1.0 / k as f64).sum();
    let term4 = 4f64.powf(0.5) * (h4 / 4.0);
    assert!(
        (term4 - 1.0417).abs() <= 1e-3,
        "criterion 8: n = 4 enumeration term {term4} does not reproduce 1.0417"
    );
    let h2 = lh2_check(&sigma, 1.0, 2.0, 0.0, len).unwrap();
    assert!(
        (h2.ratio - 1.5 * FRAC_1_SQRT_2).abs() <= 1e-12,
        "criterion 8: lh2 sup ratio {} is not 1.5/sqrt(2)",
        h2.ratio
    );
    assert_eq!(h2.argmax_lhs, 2);

    println!(
        "[PASS] criterion 8 (hardy suite): 9000 sequences per form within fitted/proof \
         constants, quoted term 1.0417 reproduced (sup 1.06066 at n = 2), in {:?}",
        t0.elapsed()
    );
}

/// log2 of a big integer: top 53 bits plus the discarded shift.
fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        (x.to_u64_digits().first().copied().unwrap_or(0) as f64).log2()
    } else {
        let shift = bits - 53;
        let top = x >> shift;
        (top.to_u64_digits()[0] as f64).log2() + shift as f64
    }
}

/// Doubling index by exact integer arithmetic, for any alpha size:
/// `log2(2^{k+2} a_k / 2^n + 3) = log2(2^{k+2} a_k + 3 * 2^n) - n`.
fn m_bigint(alphas: &[BigUint], n: usize) -> u64 {
    let mut sum = 0.0f64;
    for k in 2..=n {
        let num = (alphas[k - 1].clone() << (k + 2)) + (BigUint::from(3u32) << n);
        sum += 2f64.powi((n + 2 - k) as i32) * (log2_big(&num) - n as f64);
    }
    sum.floor() as u64 + 2
}

/// The two-term bound recomputed directly from its published formula, with
/// the doubling index supplied by the big-integer oracle.
fn bound_oracle(data: &MonotoneSeq, p: f64, t: f64, alphas: &[f64], m: u64) -> f64 {
    let pp = p / (p - 1.0);
    let n = alphas.len();
    let len = data.len();
    let look = |idx: f64| {
        if idx <= len as f64 {
            data.value(idx.floor() as usize)
        } else {
            data.value(len)
        }
    };
    let mf = m as f64;
    let cap = mf.powf(1.0 + t / pp).min(alphas[0]);
    let mut sup = 0.0f64;
    for i in 1..=(cap.floor() as usize).min(len) {
        sup = sup.max((i as f64).powf(1.0 / t) * data.value(i));
    }
    if cap > len as f64 {
        sup = sup.max(cap.floor().powf(1.0 / t) * data.value(len));
    }
    let first = mf.powf(-1.0 / t - 1.0 / pp) * sup;
    let mut power_sum = 0.0f64;
    for k in 1..=n {
        let inner: f64 = (k..=n).map(|i| look(alphas[i - 1].max(1.0))).sum();
        power_sum += (2f64.powf(k as f64 / pp) * inner).powf(p);
    }
    first + 23.0 * 2f64.powf(-(n as f64) / pp) * power_sum.powf(1.0 / p)
}

#[test]
fn criterion_09_steinwart_m_formula() {
    let t0 = Instant::now();
    let params = |alphas: AlphaList| SteinwartParams {
        p: 2.0,
        t: 1.0,
        c_t: 1.0,
        tau_p: 1.0,
        alphas,
    };
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());

    // The frozen hand-evaluated case.
    let data = MonotoneSeq::from_fn(16, |k| 1.0 / k as f64).unwrap();
    let b = steinwart_upper(&data, &params(AlphaList::Exact(vec![1, 2])), 2).unwrap();
    assert_eq!(b.m, 15, "criterion 9: m for n = 2, alpha = (1, 2) is {}", b.m);

    // Exact lists against their log2-space form and the big-integer oracle.
    // Power-of-two alphas round-trip log2 exactly, so the two evaluation
    // paths must agree to float noise; the oracle pins m itself.
    let cases: Vec<(usize, Vec<u64>, usize)> = vec![
        (2, vec![1, 2], 16),
        (2, vec![5, 1000], 16),
        (3, vec![4, 32, 1024], 16),
        (4, vec![3, 11, 38, 200], 64),
        (4, vec![8, 64, 512, 4096], 16),
    ];
    for (n, alphas, data_len) in cases {
        let data = MonotoneSeq::from_fn(data_len, |k| 1.0 / k as f64).unwrap();
        let p_exact = params(AlphaList::Exact(alphas.clone()));
        let big: Vec<BigUint> = alphas.iter().map(|&a| BigUint::from(a)).collect();
        let oracle_m = m_bigint(&big, n);
        let lib = steinwart_upper(&data, &p_exact, n).unwrap();
        assert_eq!(lib.m, oracle_m, "criterion 9: m mismatch for alphas {alphas:?}");
        let alphas_f: Vec<f64> = alphas.iter().map(|&a| a as f64).collect();
        let oracle = bound_oracle(&data, 2.0, 1.0, &alphas_f, oracle_m);
        assert!(
            rel(lib.bound, oracle) <= 1e-9,
            "criterion 9: bound {} vs oracle {} for alphas {alphas:?}",
            lib.bound,
            oracle
        );
        let log2s: Vec<f64> = alphas.iter().map(|&a| (a as f64).log2()).collect();
        let via_logs = steinwart_upper(&data, &params(AlphaList::Log2(log2s)), n).unwrap();
        assert_eq!(via_logs.m, oracle_m, "criterion 9: log-space m for alphas {alphas:?}");
        if alphas.iter().all(|a| a.is_power_of_two() || *a as usize > data_len) {
            assert!(
                rel(via_logs.bound, lib.bound) <= 1e-9,
                "criterion 9: log-space bound {} vs exact {} for alphas {alphas:?}",
                via_logs.bound,
                lib.bound
            );
        }
    }

    // The doubling-schedule inputs alpha_k = floor(2^{n 2^{a(k-1)}}), a = 3/4.
    for n in [2usize, 3, 4] {
        let alphas: Vec<u64> = (0..n)
            .map(|k| 2f64.powf(n as f64 * 2f64.powf(0.75 * k as f64)).floor() as u64)
            .collect();
        let data = MonotoneSeq::from_fn(8, |k| 1.0 / k as f64).unwrap();
        let big: Vec<BigUint> = alphas.iter().map(|&a| BigUint::from(a)).collect();
        let oracle_m = m_bigint(&big, n);
        let lib = steinwart_upper(&data, &params(AlphaList::Exact(alphas.clone())), n).unwrap();
        assert_eq!(lib.m, oracle_m, "criterion 9: schedule m at n = {n}");
        let alphas_f: Vec<f64> = alphas.iter().map(|&a| a as f64).collect();
        let oracle = bound_oracle(&data, 2.0, 1.0, &alphas_f, oracle_m);
        assert!(rel(lib.bound, oracle) <= 1e-9, "criterion 9: schedule bound at n = {n}");
    }

    // Alphas far beyond u64: only the log2-space path can express them; the
    // oracle works from shifted big integers.
    let data = MonotoneSeq::from_fn(64, |k| 1.0 / k as f64).unwrap();
    let exps = [70u64, 140, 210, 280];
    let big: Vec<BigUint> = exps.iter().map(|&e| BigUint::from(1u32) << e).collect();
    let oracle_m = m_bigint(&big, 4);
    let log2s: Vec<f64> = exps.iter().map(|&e| e as f64).collect();
    let lib = steinwart_upper(&data, &params(AlphaList::Log2(log2s)), 4).unwrap();
    assert_eq!(lib.m, oracle_m, "criterion 9: huge-alpha m");
    let alphas_f: Vec<f64> = exps.iter().map(|&e| 2f64.powi(e as i32)).collect();
    let oracle = bound_oracle(&data, 2.0, 1.0, &alphas_f, oracle_m);
    assert!(
        rel(lib.bound, oracle) <= 1e-9,
        "criterion 9: huge-alpha bound {} vs oracle {}",
        lib.bound,
        oracle
    );

    // alpha_2 = 2^{10^6}: the log-space m is linear in log2(alpha).
    let big = vec![BigUint::from(4u32), BigUint::from(1u32) << 1_000_000u32];
    let oracle_m = m_bigint(&big, 2);
    let m = steinwart_m(&params(AlphaList::Log2(vec![2.0, 1e6])), 2).unwrap();
    assert_eq!(m, 4_000_010);
    assert_eq!(m, oracle_m, "criterion 9: 2^1e6 m vs big-integer oracle");
    let lib = steinwart_upper(&data, &params(AlphaList::Log2(vec![2.0, 1e6])), 2).unwrap();
    let oracle = bound_oracle(&data, 2.0, 1.0, &[4.0, f64::INFINITY], oracle_m);
    assert!(rel(lib.bound, oracle) <= 1e-9, "criterion 9: 2^1e6 bound vs oracle");

    println!(
        "[PASS] criterion 9 (doubling index): m = 15 frozen case, log-space bound within \
         1e-9 of the big-integer oracle for n <= 4 up to alpha = 2^1e6, in {:?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_10_hull_pipeline() {
    let t0 = Instant::now();
    let sigma = MonotoneSeq::from_fn(64, |k| 1.0 / k as f64).unwrap();
    let spec = diag_set(&sigma, 2.0, 6).unwrap();

    // Mesh 0.05 needs the cap raised: the dim-6 lattice net holds 6.8M
    // points against the 1M default.
    let coarse = hull_entropy_bounds_upto(&spec, 0.1, 8, 10_000_000).unwrap();
    let fine = hull_entropy_bounds_upto(&spec, 0.05, 8, 10_000_000).unwrap();
    for table in [&coarse, &fine] {
        for row in &table.rows {
            assert!(
                row.lower <= row.upper,
                "criterion 10: bracket inverted at n = {}, mesh {}: {} > {}",
                row.n,
                table.mesh,
                row.lower,
                row.upper
            );
        }
    }

    for n in 1..=2usize {
        let low = l02_lower(&sigma, 2.0, n, 1.0).unwrap().value;
        for table in [&coarse, &fine] {
            let cap = table.rows[n - 1].upper + table.delta;
            assert!(
                low <= cap,
                "criterion 10: l02 lower {low} exceeds upper + delta = {cap} at n = {n}, \
                 mesh {}",
                table.mesh
            );
        }
    }

    // TT03 ratio from the full pipeline, stable under mesh refinement. The
    // mesh-converging entropy estimate is the net covering radius (the row
    // upper minus the lattice slack); the slack itself halves with the mesh
    // and would swamp the stability comparison.
    let gens = spec.generator_cloud().unwrap();
    let eps = entropy_numbers(&gens, 8, CoverMethod::Exact).unwrap();
    let rhs = MonotoneSeq::new(eps).unwrap();
    let c_a = c_A_ratio(&spec).unwrap();
    let preset = WeightPreset::Tt03 { r: 4.0, s: 2.0, alpha: 0.0 };
    let mut ratios = Vec::new();
    for table in [&coarse, &fine] {
        let radii: Vec<f64> = table.rows.iter().map(|r| r.upper - table.delta).collect();
        let lhs = MonotoneSeq::new(radii).unwrap();
        let ratio = entlab::hull::finite_inequality_check(&lhs, &rhs, preset, 8, c_a).unwrap();
        assert!(ratio.is_finite() && ratio > 0.0, "criterion 10: TT03 ratio {ratio}");
        ratios.push(ratio);
    }
    let drift = (ratios[0] - ratios[1]).abs() / ratios[1];
    assert!(
        drift < 0.10,
        "criterion 10: TT03 ratio drifts {:.1}% between meshes ({} vs {})",
        drift * 100.0,
        ratios[0],
        ratios[1]
    );

    budget(10, t0, Duration::from_secs(300));
    println!(
        "[PASS] criterion 10 (hull pipeline): brackets consistent at meshes 0.1/0.05 \
         ({} / {} net points), l02 below upper + delta, TT03 ratio {:.4} with {:.2}% mesh \
         drift, in {:?}",
        coarse.net_len,
        fine.net_len,
        ratios[1],
        drift * 100.0,
        t0.elapsed()
    );
}

#[test]
fn criterion_11_rate_oracle_totality() {
    let t0 = Instant::now();
    let th04 = |tau, beta, gamma, slack| RateQuery::Th04 { p: 2.0, tau, beta, gamma, slack };
    let entkh = |tau, beta, gamma| RateQuery::Entkh { tau, beta, gamma };
    // One parameter record per printed case row; exponents verbatim.
    let records: Vec<(RateQuery, usize, f64, f64, f64)> = vec![
        (RateQuery::Th02 { p: 2.0, tau: 0.3, beta: 0.0 }, 1, 0.7, 0.0, 0.0),
        (RateQuery::Th02 { p: 2.0, tau: 0.5, beta: 0.8 }, 2, 0.3, 0.0, 0.0),
        (RateQuery::Th02 { p: 2.0, tau: 0.5, beta: 2.0 }, 3, 0.5, 1.0, 0.0),
        (RateQuery::Th02 { p: 2.0, tau: 0.5, beta: 1.0 }, 4, 0.5, -1.0, 0.0),
        (th04(0.2, -1.0, 2.0, None), 1, 0.8, -1.0, 2.0),
        (th04(0.5, 0.75, -0.5, None), 2, 0.25, -0.5, 0.0),
        (th04(0.5, 1.5, 0.5, None), 3, 0.5, 0.5, 0.5),
        (th04(0.5, 1.0, 0.5, None), 4, 0.5, -0.5, 0.0),
        (th04(0.5, 1.0, 1.5, Some(0.01)), 5, 0.5, -0.01, 0.0),
        (th04(0.5, 0.5, 1.0, None), 6, 0.0, 0.5, 0.0),
        (entkh(0.25, 1.0, -2.0), 1, 0.75, 1.0, -2.0),
        (entkh(0.5, 0.75, 0.25), 2, 0.25, 0.25, 0.0),
        (entkh(0.5, 2.0, 1.0), 3, 0.5, 1.0, 1.0),
        (entkh(0.5, 1.0, 0.5), 4, 0.5, -0.5, 0.0),
        (entkh(0.5, 1.0, 1.0), 5, 0.5, 0.0, -1.0),
        (entkh(0.5, 1.0, 2.5), 6, 0.5, 0.0, 1.5),
        (entkh(0.5, 0.5, 1.5), 7, 0.0, 1.0, 0.0),
        (RateQuery::Entkh2 { tau: 0.3, beta: 0.5, gamma: 2.0 }, 1, 0.7, 0.5, 2.0),
        (RateQuery::Entkh2 { tau: 0.5, beta: 1.5, gamma: -1.0 }, 2, 0.5, 1.0, -1.0),
        (RateQuery::Entkh2 { tau: 0.5, beta: 0.5, gamma: 1.0 }, 3, 0.5, 0.0, 0.5),
        (RateQuery::Rl03 { p: 1.0, q: f64::INFINITY, alpha: 1.5 }, 1, 1.5, 0.0, 0.0),
        (RateQuery::Rl05 { p: 2.0, alpha: 1.0, delta: 2.0, theta: -1.0 }, 1, 1.5, 0.5, 0.0),
        (
            RateQuery::Rl06 { beta: 0.75, decay: Rl06Decay::Polynomial { delta: 1.0 } },
            1,
            0.25,
            0.0,
            0.0,
        ),
        (
            RateQuery::Rl06 { beta: 1.0, decay: Rl06Decay::Polynomial { delta: 2.0 } },
            2,
            0.5,
            -1.0,
            0.0,
        ),
        (
            RateQuery::Rl06 { beta: 2.0, decay: Rl06Decay::Polynomial { delta: 1.5 } },
            3,
            0.5,
            1.0,
            0.0,
        ),
        (
            RateQuery::Rl06 { beta: 1.0, decay: Rl06Decay::Exponential { delta: 2.0 } },
            4,
            1.5,
            0.0,
            0.0,
        ),
    ];

    let mut seen: std::collections::BTreeMap<(&str, usize), usize> = Default::default();
    for (query, case, p0, q0, r0) in &records {
        let a = rate_oracle(query).unwrap();
        assert_eq!(a.case_index, *case, "criterion 11: {query:?} resolved to case {}", a.case_index);
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
        assert!(
            close(a.formula.p0, *p0) && close(a.formula.q0, *q0) && close(a.formula.r0, *r0),
            "criterion 11: {query:?} exponents ({}, {}, {}) != ({p0}, {q0}, {r0})",
            a.formula.p0,
            a.formula.q0,
            a.formula.r0
        );
        *seen.entry((a.table, a.case_index)).or_insert(0) += 1;
    }
    let expected: &[(&str, usize)] =
        &[("TH02", 4), ("TH04", 6), ("ENTKH", 7), ("ENTKH2", 3), ("RL03", 1), ("RL05", 1), ("RL06", 4)];
    for &(table, cases) in expected {
        for case in 1..=cases {
            assert_eq!(
                seen.get(&(table, case)),
                Some(&1),
                "criterion 11: {table} case {case} not reached by exactly one record"
            );
        }
    }
    assert_eq!(seen.values().sum::<usize>(), records.len());

    // The auxiliary-exponent tables.
    let a = rate_oracle(&RateQuery::Thsv { p: 2.0, tau: 0.25 }).unwrap();
    assert_eq!((a.formula.p0, a.aux_exponent), (0.75, Some(3.0)));
    let a = rate_oracle(&RateQuery::Rl04I { p: 2.0, rho: 1.0, gamma: 0.5 }).unwrap();
    assert_eq!((a.formula.p0, a.formula.q0, a.aux_exponent), (1.5, 0.5, Some(1.5)));

    // Off-table parameters must name the nearest regime, not guess one.
    let err = rate_oracle(&th04(0.5, 0.3, 0.0, None)).unwrap_err();
    assert!(err.to_string().contains("beta"), "criterion 11: {err}");
    let err = rate_oracle(&RateQuery::Rl03 { p: 1.0, q: f64::INFINITY, alpha: 0.5 }).unwrap_err();
    assert!(err.to_string().contains("max(1/p - 1/q, 0)"), "criterion 11: {err}");
    assert!(rate_oracle(&th04(0.5, 1.0, 1.5, None)).is_err());
    assert!(rate_oracle(&RateQuery::Rl05 { p: 2.0, alpha: 1.0, delta: 1.0, theta: 0.5 }).is_err());
    assert!(rate_oracle(&entkh(0.5, 0.5, 0.25)).is_err());
    assert!(
        rate_oracle(&RateQuery::Rl06 { beta: 0.4, decay: Rl06Decay::Polynomial { delta: 1.0 } })
            .is_err()
    );

    println!(
        "[PASS] criterion 11 (rate oracle totality): 26 case rows each reached exactly once \
         with verbatim exponents, 6 regime mismatches refused, in {:?}",
        t0.elapsed()
    );
}
