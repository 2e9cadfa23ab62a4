//! Band calibration: the Miller–Siegmund approximation for the maximum of a
//! normalised Brownian bridge, exact small-k exceedance probabilities for the
//! first few plot values, and empirical band positions on the time axis.

use crate::data::RiskPath;
use crate::error::{NlhError, Result};
use crate::real::Real;
use crate::special::{chi_square_cdf, chi_square_sf, normal_pdf};

/// Probability that max |W⁰(u)|/√(u(1−u)) over [b1, b2] exceeds `m`:
/// Pr ≈ 4φ(m)/m + φ(m)(m − 1/m)·log(c₂/c₁) with cᵢ = bᵢ/(1−bᵢ).
///
/// The approximation degrades for m ≤ 1; callers should warn there.
pub fn max_band_exceedance<R: Real>(b1: R, b2: R, m: R) -> Result<R> {
    if !(R::zero() < b1 && b1 < b2 && b2 < R::one()) {
        return Err(NlhError::InvalidBandFractions {
            b1: b1.to_f64().unwrap_or(f64::NAN),
            b2: b2.to_f64().unwrap_or(f64::NAN),
        });
    }
    let c1 = b1 / (R::one() - b1);
    let c2 = b2 / (R::one() - b2);
    let pdf = normal_pdf(m);
    Ok(R::of(4.0) * pdf / m + pdf * (m - R::one() / m) * (c2 / c1).ln())
}

/// Exceedance probability of |NLH| over `threshold` at the k-th event time
/// for the uncensored constant-rate model: the limit there is
/// √k(1 − V̄_k)/V̄_k^{1/2} with V̄_k = χ²_{2k}/(2k).
pub fn early_exceedance_prob<R: Real>(k: usize, threshold: R) -> R {
    let kf = R::of_usize(k);
    let c2 = threshold * threshold;
    if threshold <= R::zero() {
        return R::one();
    }
    // |√k(1−v)/√v| > c  ⇔  k v² − (2k + c²) v + k > 0
    let b = R::two() * kf + c2;
    let disc = (b * b - R::of(4.0) * kf * kf).sqrt();
    let v_lo = (b - disc) / (R::two() * kf);
    let v_hi = (b + disc) / (R::two() * kf);
    let dof = R::two() * kf;
    chi_square_cdf(dof * v_lo, dof) + chi_square_sf(dof * v_hi, dof)
}

/// Invert the empirical exposure fraction p̂(t) = ∫₀ᵗ Y ds / ∫₀^τ Y ds at the
/// band fractions (b1, b2), by piecewise-linear inversion over the at-risk
/// segments.
pub fn empirical_band_positions<R: Real>(path: &RiskPath<R>, b1: R, b2: R) -> Result<(R, R)> {
    if b1 < R::zero() || b2 > R::one() || b1 > b2 {
        return Err(NlhError::InvalidBandFractions {
            b1: b1.to_f64().unwrap_or(f64::NAN),
            b2: b2.to_f64().unwrap_or(f64::NAN),
        });
    }
    let total: R = path
        .segments()
        .iter()
        .map(|s| R::of(s.at_risk as f64) * (s.end - s.start))
        .sum();
    let invert = |b: R| -> R {
        if b <= R::zero() {
            return R::zero();
        }
        let target = b * total;
        let mut acc = R::zero();
        for seg in path.segments() {
            let y = R::of(seg.at_risk as f64);
            let gain = y * (seg.end - seg.start);
            if acc + gain >= target && y > R::zero() {
                return seg.start + (target - acc) / y;
            }
            acc += gain;
        }
        path.tau()
    };
    Ok((invert(b1), invert(b2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{build_risk_path, SurvivalSample};
    use approx::assert_relative_eq;

    #[test]
    fn miller_siegmund_worked_numbers() {
        // over the empirical 10%–90% band, a ±1.96 crossing happens with
        // probability ≈ 0.49, and 3.05 is the upper 5% point
        let p: f64 = max_band_exceedance(0.1, 0.9, 1.96).unwrap();
        assert!((p - 0.49).abs() < 0.01, "p = {p}");
        let p: f64 = max_band_exceedance(0.1, 0.9, 3.05).unwrap();
        assert!((p - 0.05).abs() < 0.005, "p = {p}");
    }

    #[test]
    fn band_symmetry() {
        let a: f64 = max_band_exceedance(0.2, 0.7, 2.2).unwrap();
        let b: f64 = max_band_exceedance(0.3, 0.8, 2.2).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-13);
    }

    #[test]
    fn invalid_band_fractions_are_rejected() {
        assert!(max_band_exceedance(0.0, 0.9, 2.0f64).is_err());
        assert!(max_band_exceedance(0.5, 0.4, 2.0f64).is_err());
        assert!(max_band_exceedance(0.1, 1.0, 2.0f64).is_err());
    }

    #[test]
    fn early_exceedance_published_values() {
        let expect = [0.165, 0.111, 0.092, 0.081, 0.075];
        for (k, &e) in expect.iter().enumerate() {
            let p: f64 = early_exceedance_prob(k + 1, 1.96);
            assert!((p - e).abs() < 1e-3, "k = {}, p = {p}", k + 1);
        }
    }

    #[test]
    fn early_exceedance_limits() {
        // k → ∞ recovers the two-sided normal level 0.05
        let p: f64 = early_exceedance_prob(1_000_000, 1.96);
        assert!((p - 0.05).abs() < 5e-4, "p = {p}");
        // threshold → 0 exhausts the distribution
        let p: f64 = early_exceedance_prob(3, 1e-9);
        assert!(p > 0.999999);
    }

    #[test]
    fn band_positions_uniform_risk() {
        // Y ≡ n on (0, 1]: p(t) = t
        let s = SurvivalSample::from_times(&[1.0, 1.0, 1.0], &[true; 3]).unwrap();
        let path = build_risk_path(&s).unwrap();
        let (a1, a2) = empirical_band_positions(&path, 0.1, 0.9).unwrap();
        assert_relative_eq!(a1, 0.1, max_relative = 1e-13);
        assert_relative_eq!(a2, 0.9, max_relative = 1e-13);
        let (z, _) = empirical_band_positions(&path, 0.0, 0.9).unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn band_positions_with_halving_risk() {
        // Y = 2 on (0, 0.5], Y = 1 on (0.5, 1]: exposure 1.0+0.5;
        // p(t) kinks at 0.5, pushing the upper position right
        let s = SurvivalSample::from_times(&[0.5, 1.0], &[true, true]).unwrap();
        let path = build_risk_path(&s).unwrap();
        let (a1, a2) = empirical_band_positions(&path, 0.2, 0.9).unwrap();
        // p(a1) = 0.2: 2·a1 = 0.3 → a1 = 0.15
        assert_relative_eq!(a1, 0.15, max_relative = 1e-13);
        // p(a2) = 0.9: 1.0 + (a2 − 0.5) = 1.35 → a2 = 0.85
        assert_relative_eq!(a2, 0.85, max_relative = 1e-13);
    }
}
