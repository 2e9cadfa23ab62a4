//! Weibull hazard: h = θβ s^{β-1}, H = θ t^β.

use crate::data::SurvivalSample;
use crate::linalg::SymMat;
use crate::real::Real;

use super::{exponential_rate, HazardModel};

/// Weibull family, parameters (θ, β), both positive.
#[derive(Debug, Clone, Copy, Default)]
pub struct Weibull;

impl<R: Real> HazardModel<R> for Weibull {
    fn name(&self) -> String {
        "weibull".into()
    }

    fn dim(&self) -> usize {
        2
    }

    fn param_names(&self) -> Vec<String> {
        vec!["theta".into(), "beta".into()]
    }

    fn admissible(&self, theta: &[R]) -> bool {
        theta.len() == 2
            && theta.iter().all(|&x| x > R::zero() && x.is_finite())
    }

    fn hazard(&self, s: R, theta: &[R]) -> R {
        let (th, be) = (theta[0], theta[1]);
        th * be * s.powf(be - R::one())
    }

    fn cum_hazard(&self, t: R, theta: &[R]) -> R {
        if t <= R::zero() {
            return R::zero();
        }
        theta[0] * t.powf(theta[1])
    }

    fn score(&self, s: R, theta: &[R]) -> Vec<R> {
        // never evaluated at s = 0; event times are positive
        vec![R::one() / theta[0], R::one() / theta[1] + s.ln()]
    }

    fn cum_score(&self, t: R, theta: &[R]) -> Vec<R> {
        if t <= R::zero() {
            return vec![R::zero(); 2];
        }
        let tb = t.powf(theta[1]);
        vec![tb, theta[0] * tb * t.ln()]
    }

    fn has_closed_form_variance(&self) -> bool {
        true
    }

    fn info_integral(&self, t: R, theta: &[R]) -> SymMat<R> {
        let mut m = SymMat::zeros(2);
        if t <= R::zero() {
            return m;
        }
        let (th, be) = (theta[0], theta[1]);
        let tb = t.powf(be);
        let log_tb = be * t.ln();
        m.set(0, 0, tb / th);
        m.set(0, 1, tb * t.ln());
        m.set(1, 1, th / (be * be) * tb * (R::one() + log_tb * log_tb));
        m
    }

    fn to_internal(&self, theta: &[R]) -> Vec<R> {
        vec![theta[0].ln(), theta[1].ln()]
    }

    fn from_internal(&self, eta: &[R]) -> Vec<R> {
        vec![eta[0].exp(), eta[1].exp()]
    }

    fn inverse_cum_hazard(&self, e: R, theta: &[R]) -> Option<R> {
        Some((e / theta[0]).powf(R::one() / theta[1]))
    }

    fn initial_params(&self, sample: &SurvivalSample<R>) -> Vec<R> {
        vec![exponential_rate(sample), R::one()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::quad::adaptive_simpson;

    #[test]
    fn beta_one_reduces_to_exponential() {
        let m = Weibull;
        for &s in &[0.2, 1.0, 4.5] {
            assert_relative_eq!(m.hazard(s, &[3.0, 1.0]), 3.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn hazard_matches_power_form() {
        // (θ, β) = (10, 1.3): h(s) = 13 s^{0.3}
        let m = Weibull;
        for &s in &[0.1f64, 0.5, 2.0] {
            assert_relative_eq!(
                m.hazard(s, &[10.0, 1.3]),
                13.0 * s.powf(0.3),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn cum_hazard_cross_checked_by_quadrature() {
        let m = Weibull;
        let th = [10.0, 1.3];
        let direct = m.cum_hazard(2.0, &th);
        assert_relative_eq!(direct, 10.0 * 2.0f64.powf(1.3), max_relative = 1e-14);
        assert_relative_eq!(direct, 24.62288826689832, max_relative = 1e-3);
        let quad = adaptive_simpson(&|s| m.hazard(s, &th), 1e-12, 2.0, 1e-11);
        assert_relative_eq!(direct, quad, max_relative = 1e-8);
    }
}
