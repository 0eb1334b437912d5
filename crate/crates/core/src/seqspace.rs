//! Generalized Lorentz sequence-space functionals and Hardy-type inequalities.
//!
//! All logarithms in this module are binary. The central objects are the
//! weighted functionals behind the spaces `l_{r,s,alpha}`: a non-increasing
//! sequence belongs to the space when the functional computed here stays
//! bounded as the truncation grows.

use crate::error::{require_finite, require_pos, Error, Result};

/// Binary logarithm, the convention for every weight in this module.
#[inline]
pub fn log2(x: f64) -> f64 {
    x.log2()
}

/// Second index of a Lorentz space: a finite exponent or the sup form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SIndex {
    Finite(f64),
    Infinity,
}

impl SIndex {
    pub fn finite(self) -> Option<f64> {
        match self {
            SIndex::Finite(s) => Some(s),
            SIndex::Infinity => None,
        }
    }
}

impl std::fmt::Display for SIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SIndex::Finite(s) => write!(f, "{s}"),
            SIndex::Infinity => write!(f, "inf"),
        }
    }
}

/// Parameter triple `(r, s, alpha)` of a generalized Lorentz space.
///
/// Requires `0 < r < inf` and `s` positive (possibly infinite); `alpha` is any
/// finite real.
#[derive(Debug, Clone, Copy)]
pub struct LorentzParams {
    pub r: f64,
    pub s: SIndex,
    pub alpha: f64,
}

impl LorentzParams {
    pub fn new(r: f64, s: SIndex, alpha: f64) -> Result<Self> {
        require_pos(r, "r")?;
        if let SIndex::Finite(s) = s {
            require_pos(s, "s")?;
        }
        require_finite(alpha, "alpha")?;
        Ok(LorentzParams { r, s, alpha })
    }
}

/// Non-negative, non-increasing sequence (tolerance 1e-12 on construction).
#[derive(Debug, Clone)]
pub struct MonotoneSeq(Vec<f64>);

impl MonotoneSeq {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::validation("MonotoneSeq: empty sequence"));
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::validation(format!(
                    "MonotoneSeq: entry {} is {v}, must be finite and >= 0",
                    i + 1
                )));
            }
            if i > 0 && v > values[i - 1] + 1e-12 {
                return Err(Error::validation(format!(
                    "MonotoneSeq: increases at index {} ({} -> {v})",
                    i + 1,
                    values[i - 1]
                )));
            }
        }
        Ok(MonotoneSeq(values))
    }

    /// Builds `(f(1), .., f(n))`, validating monotonicity of the result.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        MonotoneSeq::new((1..=n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// 1-based access.
    pub fn value(&self, n: usize) -> f64 {
        self.0[n - 1]
    }
}

/// A covering profile: breakpoints `(epsilon_i, count_i)` with radii strictly
/// decreasing and counts strictly increasing, `count_1 >= 1`.
///
/// The profile encodes the step function `N(eps) = count_i` on
/// `[eps_i, eps_{i-1})`, with `N = count_1` for `eps >= eps_1`; the metric
/// entropy is `H(eps) = log2 N(eps)`.
#[derive(Debug, Clone)]
pub struct EntropyProfile {
    breakpoints: Vec<(f64, u64)>,
}

impl EntropyProfile {
    pub fn new(breakpoints: Vec<(f64, u64)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::validation("EntropyProfile: no breakpoints"));
        }
        for (i, &(eps, count)) in breakpoints.iter().enumerate() {
            if !eps.is_finite() || eps <= 0.0 {
                return Err(Error::validation(format!(
                    "EntropyProfile: epsilon at breakpoint {} must be finite and > 0",
                    i + 1
                )));
            }
            if count < 1 {
                return Err(Error::validation("EntropyProfile: count must be >= 1"));
            }
            if i > 0 {
                let (prev_eps, prev_count) = breakpoints[i - 1];
                if eps >= prev_eps {
                    return Err(Error::validation(format!(
                        "EntropyProfile: radii must strictly decrease (breakpoint {})",
                        i + 1
                    )));
                }
                if count <= prev_count {
                    return Err(Error::validation(format!(
                        "EntropyProfile: counts must strictly increase (breakpoint {})",
                        i + 1
                    )));
                }
            }
        }
        Ok(EntropyProfile { breakpoints })
    }

    pub fn breakpoints(&self) -> &[(f64, u64)] {
        &self.breakpoints
    }
}

/// Truncated Lorentz functional of a sequence.
///
/// Finite `s`: `sum_{n<=N} (log2(n+1))^{-alpha*s} n^{s/r-1} xi_n^s`
/// (the s-th power sum; the membership test only needs its boundedness).
/// `s = inf`: `sup_{n<=N} (log2(n+1))^{-alpha} n^{1/r} xi_n`.
pub fn lorentz_functional(seq: &MonotoneSeq, params: &LorentzParams, n_max: usize) -> Result<f64> {
    if n_max < 1 || n_max > seq.len() {
        return Err(Error::validation(format!(
            "n_max must be in 1..={}, got {n_max}",
            seq.len()
        )));
    }
    let LorentzParams { r, s, alpha } = *params;
    let value = match s {
        SIndex::Finite(s) => (1..=n_max)
            .map(|n| {
                let nf = n as f64;
                log2(nf + 1.0).powf(-alpha * s) * nf.powf(s / r - 1.0) * seq.value(n).powf(s)
            })
            .sum(),
        SIndex::Infinity => (1..=n_max)
            .map(|n| {
                let nf = n as f64;
                log2(nf + 1.0).powf(-alpha) * nf.powf(1.0 / r) * seq.value(n)
            })
            .fold(0.0, f64::max),
    };
    if !value.is_finite() {
        return Err(Error::numeric("lorentz_functional overflowed"));
    }
    Ok(value)
}

/// Dyadic subsequence `(xi_1, xi_2, xi_4, xi_8, ...)` as far as the input reaches.
pub fn dyadic_subsequence(seq: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut idx = 1usize;
    while idx <= seq.len() {
        out.push(seq[idx - 1]);
        match idx.checked_mul(2) {
            Some(next) => idx = next,
            None => break,
        }
    }
    out
}

/// Lorentz functional of a covering profile, by exact Stieltjes summation.
///
/// Finite `s`: integrates `(log2(2+H))^{-alpha*s} H^{s/r}` against `d(eps^s)`
/// over the known radius range, piece by constancy piece, truncating below the
/// smallest breakpoint. `s = inf`: the weighted sup over pieces.
pub fn profile_functional(profile: &EntropyProfile, params: &LorentzParams) -> Result<f64> {
    let LorentzParams { r, s, alpha } = *params;
    let bp = profile.breakpoints();
    let value = match s {
        SIndex::Finite(s) => bp
            .windows(2)
            .map(|w| {
                let (eps_hi, _) = w[0];
                let (eps_lo, count) = w[1];
                let h = log2(count as f64);
                log2(2.0 + h).powf(-alpha * s) * h.powf(s / r) * (eps_hi.powf(s) - eps_lo.powf(s))
            })
            .sum(),
        SIndex::Infinity => bp
            .windows(2)
            .map(|w| {
                let (eps_hi, _) = w[0];
                let (_, count) = w[1];
                let h = log2(count as f64);
                eps_hi * log2(2.0 + h).powf(-alpha) * h.powf(1.0 / r)
            })
            .fold(0.0, f64::max),
    };
    if !value.is_finite() {
        return Err(Error::numeric("profile_functional overflowed"));
    }
    Ok(value)
}

/// Result of a two-sided inequality check: left side, right side, their ratio,
/// and the index where the left side peaked (sup forms) or 0 (sum forms).
#[derive(Debug, Clone, Copy)]
pub struct HardyCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub argmax_lhs: usize,
}

fn hardy_params(t: f64, r: f64, alpha: f64, n_max: usize, len: usize) -> Result<()> {
    require_pos(t, "t")?;
    require_pos(r, "r")?;
    require_finite(alpha, "alpha")?;
    if t >= r {
        return Err(Error::validation(format!("need 0 < t < r, got t={t}, r={r}")));
    }
    if n_max < 1 || n_max > len {
        return Err(Error::validation(format!(
            "n_max must be in 1..={len}, got {n_max}"
        )));
    }
    Ok(())
}

/// Weighted-sum Hardy inequality check (finite exponent form).
///
/// `lhs = sum_{n<=N} (log2(n+1))^alpha n^{s/r-1} ((1/n) sum_{k<=n} sigma_k^t)^{s/t}`,
/// `rhs` is the same weighted sum of `sigma_n^s`. For non-increasing input the
/// running means dominate the entries, so `ratio >= 1`; the inequality asserts
/// it stays bounded by a constant depending only on `(t, r, s, alpha)`.
pub fn lh1_check(
    sigma: &MonotoneSeq,
    t: f64,
    r: f64,
    s: f64,
    alpha: f64,
    n_max: usize,
) -> Result<HardyCheck> {
    hardy_params(t, r, alpha, n_max, sigma.len())?;
    require_pos(s, "s")?;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    let mut power_sum = 0.0;
    for n in 1..=n_max {
        power_sum += sigma.value(n).powf(t);
        let nf = n as f64;
        let w = log2(nf + 1.0).powf(alpha) * nf.powf(s / r - 1.0);
        lhs += w * (power_sum / nf).powf(s / t);
        rhs += w * sigma.value(n).powf(s);
    }
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::numeric("lh1_check overflowed"));
    }
    Ok(HardyCheck { lhs, rhs, ratio: lhs / rhs, argmax_lhs: 0 })
}

/// Weighted-sup Hardy inequality check (the `s = inf` form).
///
/// `lhs = sup_{n<=N} (log2(n+1))^alpha n^{1/r} ((1/n) sum_{k<=n} sigma_k^t)^{1/t}`,
/// `rhs = sup_{k<=N} (log2(k+1))^alpha k^{1/r} sigma_k`.
pub fn lh2_check(
    sigma: &MonotoneSeq,
    t: f64,
    r: f64,
    alpha: f64,
    n_max: usize,
) -> Result<HardyCheck> {
    hardy_params(t, r, alpha, n_max, sigma.len())?;
    let mut lhs = 0.0f64;
    let mut rhs = 0.0f64;
    let mut argmax = 1usize;
    let mut power_sum = 0.0f64;
    for n in 1..=n_max {
        power_sum += sigma.value(n).powf(t);
        let nf = n as f64;
        let w = log2(nf + 1.0).powf(alpha);
        let term = w * nf.powf(1.0 / r) * (power_sum / nf).powf(1.0 / t);
        if term > lhs {
            lhs = term;
            argmax = n;
        }
        rhs = rhs.max(w * nf.powf(1.0 / r) * sigma.value(n));
    }
    if !lhs.is_finite() || !rhs.is_finite() || rhs == 0.0 {
        return Err(Error::numeric("lh2_check: degenerate or overflowed sides"));
    }
    Ok(HardyCheck { lhs, rhs, ratio: lhs / rhs, argmax_lhs: argmax })
}

/// Enumerates the constant from the sup-form Hardy lemma's proof:
/// `sup_{n<=N} sum_{k<=n} (log2(k+1))^{-alpha*t} k^{-t/r}
///          / ((log2(n+1))^{-alpha*t} n^{1-t/r})`.
///
/// The lemma then holds with constant `c^{1/t}`. Finite for `t < r` since the
/// sum grows like its last-term envelope.
pub fn lh2_proof_constant(t: f64, r: f64, alpha: f64, n_max: usize) -> Result<f64> {
    require_pos(t, "t")?;
    require_pos(r, "r")?;
    require_finite(alpha, "alpha")?;
    if t >= r {
        return Err(Error::validation(format!("need 0 < t < r, got t={t}, r={r}")));
    }
    if n_max < 1 {
        return Err(Error::validation("n_max must be >= 1"));
    }
    let mut sum = 0.0;
    let mut best: f64 = 0.0;
    for n in 1..=n_max {
        let nf = n as f64;
        sum += log2(nf + 1.0).powf(-alpha * t) * nf.powf(-t / r);
        let envelope = log2(nf + 1.0).powf(-alpha * t) * nf.powf(1.0 - t / r);
        best = best.max(sum / envelope);
    }
    if !best.is_finite() {
        return Err(Error::numeric("lh2_proof_constant overflowed"));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn harmonic(n: usize) -> MonotoneSeq {
        MonotoneSeq::from_fn(n, |k| 1.0 / k as f64).unwrap()
    }

    #[test]
    fn monotone_seq_validates() {
        assert!(MonotoneSeq::new(vec![]).is_err());
        assert!(MonotoneSeq::new(vec![1.0, -0.1]).is_err());
        assert!(MonotoneSeq::new(vec![0.5, 0.6]).is_err());
        assert!(MonotoneSeq::new(vec![1.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn lorentz_sup_form_flat_sequence() {
        // xi = (1,1,1,1), r = 2, s = inf, alpha = 0: sup n^{1/2} = 2 at n = 4.
        let seq = MonotoneSeq::new(vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let p = LorentzParams::new(2.0, SIndex::Infinity, 0.0).unwrap();
        assert_relative_eq!(lorentz_functional(&seq, &p, 4).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn lorentz_sum_form_is_plain_sum_at_unit_params() {
        // r = s = 1, alpha = 0 reduces to the plain sum of entries.
        let seq = MonotoneSeq::new(vec![0.5, 0.25]).unwrap();
        let p = LorentzParams::new(1.0, SIndex::Finite(1.0), 0.0).unwrap();
        assert_relative_eq!(lorentz_functional(&seq, &p, 2).unwrap(), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn lorentz_monotone_in_alpha() {
        // Larger alpha shrinks every weight (log2(n+1) >= 1), so the functional
        // cannot grow.
        let seq = harmonic(64);
        for &(r, s) in &[(0.5, SIndex::Finite(1.0)), (2.0, SIndex::Finite(3.0)), (1.5, SIndex::Infinity)] {
            let lo = LorentzParams::new(r, s, -1.0).unwrap();
            let mid = LorentzParams::new(r, s, 0.0).unwrap();
            let hi = LorentzParams::new(r, s, 1.5).unwrap();
            let f_lo = lorentz_functional(&seq, &lo, 64).unwrap();
            let f_mid = lorentz_functional(&seq, &mid, 64).unwrap();
            let f_hi = lorentz_functional(&seq, &hi, 64).unwrap();
            assert!(f_lo >= f_mid && f_mid >= f_hi);
        }
    }

    #[test]
    fn dyadic_subsequence_picks_powers_of_two() {
        let seq: Vec<f64> = (1..=16).map(|k| 1.0 / k as f64).collect();
        let dy = dyadic_subsequence(&seq);
        assert_eq!(dy, vec![1.0, 0.5, 0.25, 0.125, 0.0625]);
    }

    #[test]
    fn profile_functional_single_piece() {
        // One constancy piece at H = 1 over [0.25, 0.5): integral of dε is 0.25.
        let profile = EntropyProfile::new(vec![(0.5, 1), (0.25, 2)]).unwrap();
        let p = LorentzParams::new(1.0, SIndex::Finite(1.0), 0.0).unwrap();
        assert_relative_eq!(profile_functional(&profile, &p).unwrap(), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn profile_functional_weighted_piece() {
        // H = 3 over [0.1, 0.2), weight H^{1/2}: sqrt(3) * 0.1.
        let profile = EntropyProfile::new(vec![(0.2, 1), (0.1, 8)]).unwrap();
        let p = LorentzParams::new(2.0, SIndex::Finite(1.0), 0.0).unwrap();
        assert_relative_eq!(
            profile_functional(&profile, &p).unwrap(),
            3f64.sqrt() * 0.1,
            epsilon = 1e-12
        );
    }

    #[test]
    fn profile_functional_trivial_profile_is_zero() {
        let profile = EntropyProfile::new(vec![(1.0, 1)]).unwrap();
        let p = LorentzParams::new(1.0, SIndex::Finite(1.0), 0.0).unwrap();
        assert_eq!(profile_functional(&profile, &p).unwrap(), 0.0);
        let sup = LorentzParams::new(1.0, SIndex::Infinity, 0.0).unwrap();
        assert_eq!(profile_functional(&profile, &sup).unwrap(), 0.0);
    }

    #[test]
    fn profile_validation() {
        assert!(EntropyProfile::new(vec![(0.5, 1), (0.6, 2)]).is_err());
        assert!(EntropyProfile::new(vec![(0.5, 2), (0.4, 2)]).is_err());
        assert!(EntropyProfile::new(vec![(0.5, 0)]).is_err());
    }

    // Oracle for the small Hardy checks: direct hand arithmetic.
    #[test]
    fn lh1_tiny_case_matches_hand_sum() {
        // sigma = (1, 1/2), t = 1, r = 2, s = 2, alpha = 0, N = 2.
        // lhs = 1^2 + (1.5/2)^2 = 1.5625; rhs = 1 + 0.25 = 1.25.
        let check = lh1_check(&harmonic(2), 1.0, 2.0, 2.0, 0.0, 2).unwrap();
        assert_relative_eq!(check.lhs, 1.5625, epsilon = 1e-12);
        assert_relative_eq!(check.rhs, 1.25, epsilon = 1e-12);
        assert_relative_eq!(check.ratio, 1.25, epsilon = 1e-12);
    }

    #[test]
    fn lh1_harmonic_large_n_ratio_bounded() {
        // Enumeration oracle: ratio -> (sum H_n^2/n^2)/(sum n^{-2}) ~ 2.796, well
        // under the asserted bound 8.
        let check = lh1_check(&harmonic(10_000), 1.0, 2.0, 2.0, 0.0, 10_000).unwrap();
        assert!(check.ratio >= 1.0 && check.ratio <= 8.0, "ratio = {}", check.ratio);
        assert_relative_eq!(check.ratio, 2.789422418230262, epsilon = 1e-9);
    }

    // Enumeration oracle for the sup-form check on sigma_k = 1/k: the left side
    // is H_n / sqrt(n), maximized at n = 2 (H_2/sqrt(2) = 1.06066.. beats
    // H_4/sqrt(4) = 1.04166.. and every later term).
    #[test]
    fn lh2_harmonic_sup_location_and_value() {
        let check = lh2_check(&harmonic(10_000), 1.0, 2.0, 0.0, 10_000).unwrap();
        assert_eq!(check.argmax_lhs, 2);
        assert_relative_eq!(check.lhs, 1.5 / 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(check.rhs, 1.0, epsilon = 1e-12);
        assert_relative_eq!(check.ratio, 1.0606601717798212, epsilon = 1e-12);
        // The n = 4 term is H_4 / 2 = 25/24: the commonly quoted ~1.0417 value
        // is this term, not the sup.
        let h4 = 1.0 + 0.5 + 1.0 / 3.0 + 0.25;
        assert_relative_eq!(h4 / 2.0, 1.0416666666666667, epsilon = 1e-12);
    }

    #[test]
    fn hardy_ratio_at_least_one_for_monotone_input() {
        // Running means of a non-increasing sequence dominate the entries.
        for seq in [
            harmonic(100),
            MonotoneSeq::from_fn(100, |k| 0.5f64.powi(k as i32)).unwrap(),
            MonotoneSeq::from_fn(100, |k| if k < 50 { 1.0 } else { 0.01 }).unwrap(),
        ] {
            let c1 = lh1_check(&seq, 1.0, 3.0, 2.0, 0.5, 100).unwrap();
            let c2 = lh2_check(&seq, 2.0, 3.0, -0.5, 100).unwrap();
            assert!(c1.ratio >= 1.0 - 1e-12);
            assert!(c2.ratio >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn lh2_proof_constant_small_cases() {
        // t = 1, r = 2, alpha = 0: sup_n (sum k^{-1/2}) / n^{1/2}.
        // n = 1 gives 1; n = 2 gives (1 + 0.7071)/1.4142 = 1.2071; grows toward 2.
        let c = lh2_proof_constant(1.0, 2.0, 0.0, 1).unwrap();
        assert_relative_eq!(c, 1.0, epsilon = 1e-12);
        let c = lh2_proof_constant(1.0, 2.0, 0.0, 2).unwrap();
        assert_relative_eq!(c, (1.0 + 0.5f64.sqrt()) / 2f64.sqrt(), epsilon = 1e-12);
        let c = lh2_proof_constant(1.0, 2.0, 0.0, 1_000_000).unwrap();
        assert!(c < 2.0, "partial sums of k^{{-1/2}} stay under 2 sqrt(n): {c}");
    }

    #[test]
    fn lh2_bounded_by_proof_constant() {
        // The lemma's proof gives ratio <= c^{1/t}; spot-check on stress shapes.
        let (t, r, alpha) = (1.0, 2.0, 0.5);
        let c = lh2_proof_constant(t, r, alpha, 100_000).unwrap().powf(1.0 / t);
        for seq in [
            harmonic(5000),
            MonotoneSeq::from_fn(5000, |k| (k as f64).powf(-0.6)).unwrap(),
            MonotoneSeq::from_fn(5000, |k| 0.9f64.powi(k as i32)).unwrap(),
        ] {
            let check = lh2_check(&seq, t, r, alpha, 5000).unwrap();
            assert!(check.ratio <= c * (1.0 + 1e-9), "{} > {}", check.ratio, c);
        }
    }

    #[test]
    fn parameter_validation() {
        let seq = harmonic(4);
        assert!(lh1_check(&seq, 2.0, 1.0, 1.0, 0.0, 4).is_err()); // t >= r
        assert!(lh2_check(&seq, 1.0, 2.0, 0.0, 5).is_err()); // n_max too large
        assert!(LorentzParams::new(0.0, SIndex::Infinity, 0.0).is_err());
        assert!(LorentzParams::new(1.0, SIndex::Finite(-1.0), 0.0).is_err());
    }
}
