//! Simple gamma-frailty model: individual constant rates mixed by a gamma
//! distribution give the population hazard h = θ/(1 + βs), with logarithmic
//! cumulative hazard.

use crate::data::SurvivalSample;
use crate::linalg::SymMat;
use crate::real::Real;

use super::{exponential_rate, HazardModel};

/// Simple frailty family, parameters (θ, β) with θ > 0 and β > −ε.
///
/// The natural region is β ≥ 0; it is expanded by ε = 1/(2·max exit time) so
/// that β = 0 is an interior point and the fitted curves keep their normal
/// calibration there.
#[derive(Debug, Clone, Copy)]
pub struct SimpleFrailty<R> {
    beta_floor: R,
}

impl<R: Real> SimpleFrailty<R> {
    /// `eps` ≥ 0: admissible region is β > −eps.
    pub fn new(eps: R) -> Self {
        SimpleFrailty { beta_floor: eps }
    }

    /// Floor ε = 1/(2·max exit time).
    pub fn for_sample(sample: &SurvivalSample<R>) -> Self {
        let m = sample.max_exit();
        SimpleFrailty {
            beta_floor: R::one() / (R::two() * m),
        }
    }

    pub fn beta_floor(&self) -> R {
        self.beta_floor
    }
}

impl<R: Real> Default for SimpleFrailty<R> {
    fn default() -> Self {
        SimpleFrailty::new(R::zero())
    }
}

/// ∫₀ᵗ s/(1+βs)² ds = {βt/(1+βt) − ln(1+βt)}/β², stable through β = 0.
pub(crate) fn frailty_d<R: Real>(t: R, beta: R) -> R {
    let x = beta * t;
    if x.abs() < R::of(0.2) {
        // Σ_{k≥2} (−1)^{k+1} (1 − 1/k) β^{k−2} t^k
        let mut pow = t * t; // β^{k−2} t^k, sign handled separately
        let mut sign = -R::one();
        let mut sum = R::zero();
        for k in 2..40 {
            let coeff = R::one() - R::one() / R::of_usize(k);
            let piece = sign * coeff * pow;
            sum += piece;
            if piece.abs() < sum.abs().max(R::min_positive_value()) * R::epsilon() {
                break;
            }
            pow = pow * beta * t;
            sign = -sign;
        }
        sum
    } else {
        (x / (R::one() + x) - x.ln_1p()) / (beta * beta)
    }
}

/// ∫₀ᵗ s²/(1+βs)³ ds = {ln(1+x) + 2/(1+x) − (1+x)^{-2}/2 − 3/2}/β³ with x = βt.
fn frailty_e<R: Real>(t: R, beta: R) -> R {
    let x = beta * t;
    if x.abs() < R::of(0.2) {
        // Σ_{k≥3} (−1)^k {2 − 1/k − (k+1)/2} β^{k−3} t^k
        let mut pow = t * t * t;
        let mut sign = -R::one(); // (−1)^3
        let mut sum = R::zero();
        for k in 3..50 {
            let kf = R::of_usize(k);
            let coeff = R::two() - R::one() / kf - (kf + R::one()) * R::half();
            let piece = sign * coeff * pow;
            sum += piece;
            if piece.abs() < sum.abs().max(R::min_positive_value()) * R::epsilon() {
                break;
            }
            pow = pow * beta * t;
            sign = -sign;
        }
        sum
    } else {
        let one = R::one();
        let b1 = one + x;
        (x.ln_1p() + R::two() / b1 - R::half() / (b1 * b1) - R::of(1.5)) / (beta * beta * beta)
    }
}

impl<R: Real> HazardModel<R> for SimpleFrailty<R> {
    fn name(&self) -> String {
        "frailty".into()
    }

    fn dim(&self) -> usize {
        2
    }

    fn param_names(&self) -> Vec<String> {
        vec!["theta".into(), "beta".into()]
    }

    fn admissible(&self, theta: &[R]) -> bool {
        theta.len() == 2
            && theta[0] > R::zero()
            && theta[0].is_finite()
            && theta[1] > -self.beta_floor
            && theta[1].is_finite()
    }

    fn hazard(&self, s: R, theta: &[R]) -> R {
        theta[0] / (R::one() + theta[1] * s)
    }

    fn cum_hazard(&self, t: R, theta: &[R]) -> R {
        let (th, be) = (theta[0], theta[1]);
        if be == R::zero() {
            th * t
        } else {
            th * (be * t).ln_1p() / be
        }
    }

    fn score(&self, s: R, theta: &[R]) -> Vec<R> {
        vec![R::one() / theta[0], -s / (R::one() + theta[1] * s)]
    }

    fn cum_score(&self, t: R, theta: &[R]) -> Vec<R> {
        let (th, be) = (theta[0], theta[1]);
        vec![self.cum_hazard(t, theta) / th, th * frailty_d(t, be)]
    }

    fn has_closed_form_variance(&self) -> bool {
        true
    }

    fn info_integral(&self, t: R, theta: &[R]) -> SymMat<R> {
        let (th, be) = (theta[0], theta[1]);
        let mut m = SymMat::zeros(2);
        m.set(0, 0, self.cum_hazard(t, theta) / (th * th));
        m.set(0, 1, frailty_d(t, be));
        m.set(1, 1, th * frailty_e(t, be));
        m
    }

    fn to_internal(&self, theta: &[R]) -> Vec<R> {
        vec![theta[0].ln(), (theta[1] + self.beta_floor).ln()]
    }

    fn from_internal(&self, eta: &[R]) -> Vec<R> {
        vec![eta[0].exp(), eta[1].exp() - self.beta_floor]
    }

    fn inverse_cum_hazard(&self, e: R, theta: &[R]) -> Option<R> {
        let (th, be) = (theta[0], theta[1]);
        if be == R::zero() {
            return Some(e / th);
        }
        Some((be * e / th).exp_m1() / be)
    }

    fn initial_params(&self, sample: &SurvivalSample<R>) -> Vec<R> {
        let eps = if self.beta_floor > R::zero() {
            self.beta_floor
        } else {
            R::one() / (R::two() * sample.max_exit())
        };
        vec![exponential_rate(sample), eps * R::half()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn beta_zero_limit_is_exponential() {
        let m = SimpleFrailty::new(0.5);
        assert_relative_eq!(m.cum_hazard(3.0, &[2.0, 0.0]), 6.0, max_relative = 1e-15);
        let cs: Vec<f64> = m.cum_score(3.0, &[2.0, 0.0]);
        assert_relative_eq!(cs[0], 3.0, max_relative = 1e-15);
        assert_relative_eq!(cs[1], -2.0 * 9.0 / 2.0, max_relative = 1e-14); // -θt²/2 at β=0
    }

    #[test]
    fn handbook_values() {
        let m = SimpleFrailty::new(0.0);
        assert_relative_eq!(
            m.cum_hazard(1.0, &[2.0, 1.0]),
            2.0 * 2.0f64.ln(),
            max_relative = 1e-15
        );
        // ∂H/∂β at (2,1), t = 1: θ{βt/(1+βt) − ln(1+βt)}/β² = 2(1/2 − ln 2)
        let cs: Vec<f64> = m.cum_score(1.0, &[2.0, 1.0]);
        assert_relative_eq!(cs[1], 2.0 * (0.5 - 2.0f64.ln()), max_relative = 1e-13);
    }

    #[test]
    fn series_matches_direct_at_crossover() {
        for &(t, b) in &[(0.19f64, 1.0f64), (0.21, 1.0), (2.0, 0.099), (2.0, 0.101)] {
            let x = b * t;
            let d_direct = (x / (1.0 + x) - x.ln_1p()) / (b * b);
            assert_relative_eq!(frailty_d(t, b), d_direct, max_relative = 1e-10);
            let e_direct =
                (x.ln_1p() + 2.0 / (1.0 + x) - 0.5 / ((1.0 + x) * (1.0 + x)) - 1.5) / (b * b * b);
            assert_relative_eq!(frailty_e(t, b), e_direct, max_relative = 1e-8);
        }
    }

    #[test]
    fn expanded_region_floor() {
        let s = SurvivalSample::from_times(&[1.0, 2.0, 4.0], &[true, true, true]).unwrap();
        let m = SimpleFrailty::for_sample(&s);
        assert_relative_eq!(m.beta_floor(), 1.0 / 8.0, max_relative = 1e-15);
        assert!(HazardModel::<f64>::admissible(&m, &[1.0, -0.1]));
        assert!(!HazardModel::<f64>::admissible(&m, &[1.0, -0.2]));
    }
}
