//! Constant-rate model: h = θ, H = θt.

use crate::data::SurvivalSample;
use crate::linalg::SymMat;
use crate::real::Real;

use super::{exponential_rate, HazardModel};

/// The constant hazard rate family, p = 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Exponential;

impl<R: Real> HazardModel<R> for Exponential {
    fn name(&self) -> String {
        "exponential".into()
    }

    fn dim(&self) -> usize {
        1
    }

    fn param_names(&self) -> Vec<String> {
        vec!["theta".into()]
    }

    fn admissible(&self, theta: &[R]) -> bool {
        theta.len() == 1 && theta[0] > R::zero() && theta[0].is_finite()
    }

    fn hazard(&self, _s: R, theta: &[R]) -> R {
        theta[0]
    }

    fn cum_hazard(&self, t: R, theta: &[R]) -> R {
        theta[0] * t
    }

    fn score(&self, _s: R, theta: &[R]) -> Vec<R> {
        vec![R::one() / theta[0]]
    }

    fn cum_score(&self, t: R, _theta: &[R]) -> Vec<R> {
        vec![t]
    }

    fn has_closed_form_variance(&self) -> bool {
        true
    }

    fn info_integral(&self, t: R, theta: &[R]) -> SymMat<R> {
        // ∫ (1/θ²) θ ds = t/θ
        let mut m = SymMat::zeros(1);
        m.set(0, 0, t / theta[0]);
        m
    }

    fn to_internal(&self, theta: &[R]) -> Vec<R> {
        vec![theta[0].ln()]
    }

    fn from_internal(&self, eta: &[R]) -> Vec<R> {
        vec![eta[0].exp()]
    }

    fn constant_rate(&self, theta: &[R]) -> Option<R> {
        Some(theta[0])
    }

    fn inverse_cum_hazard(&self, e: R, theta: &[R]) -> Option<R> {
        Some(e / theta[0])
    }

    fn initial_params(&self, sample: &SurvivalSample<R>) -> Vec<R> {
        vec![exponential_rate(sample)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let m = Exponential;
        let th = [2.0f64];
        assert_eq!(m.hazard(0.7, &th), 2.0);
        assert_eq!(m.cum_hazard(3.0, &th), 6.0);
        assert_eq!(m.score(1.0, &th), vec![0.5]);
        assert_eq!(m.cum_score(3.0, &th), vec![3.0]);
        assert_eq!(m.constant_rate(&th), Some(2.0));
    }
}
