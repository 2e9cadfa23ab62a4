//! Gompertz hazard: h = θ e^{βs}, H = θ(e^{βt} − 1)/β; β may take any sign
//! and β = 0 reduces to the constant rate.

use crate::data::{build_risk_path, nelson_aalen, SurvivalSample};
use crate::linalg::SymMat;
use crate::real::Real;

use super::{exponential_rate, HazardModel};

/// Gompertz family, parameters (θ, β) with θ > 0 and β real.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gompertz;

/// ∫₀ᵗ e^{βs} ds, stable through β = 0.
fn exp_int<R: Real>(t: R, beta: R) -> R {
    if beta == R::zero() {
        t
    } else {
        (beta * t).exp_m1() / beta
    }
}

/// ∫₀ᵗ s e^{βs} ds = {(βt − 1)e^{βt} + 1}/β², by series for small |βt|.
pub(crate) fn exp_int_s<R: Real>(t: R, beta: R) -> R {
    let x = beta * t;
    if x.abs() < R::half() {
        // Σ_m β^m t^{m+2} / (m! (m+2))
        let mut term = t * t; // β^m t^{m+2}/m!
        let mut sum = term * R::half();
        for m in 1..30 {
            term = term * beta * t / R::of_usize(m);
            let piece = term / R::of_usize(m + 2);
            sum += piece;
            if piece.abs() < sum.abs() * R::epsilon() {
                break;
            }
        }
        sum
    } else {
        ((x - R::one()) * x.exp() + R::one()) / (beta * beta)
    }
}

/// ∫₀ᵗ s² e^{βs} ds = {((βt)² − 2βt + 2)e^{βt} − 2}/β³, by series for small |βt|.
fn exp_int_s2<R: Real>(t: R, beta: R) -> R {
    let x = beta * t;
    if x.abs() < R::half() {
        // Σ_m β^m t^{m+3} / (m! (m+3))
        let mut term = t * t * t;
        let mut sum = term / R::of(3.0);
        for m in 1..30 {
            term = term * beta * t / R::of_usize(m);
            let piece = term / R::of_usize(m + 3);
            sum += piece;
            if piece.abs() < sum.abs() * R::epsilon() {
                break;
            }
        }
        sum
    } else {
        (((x - R::two()) * x + R::two()) * x.exp() - R::two()) / (beta * beta * beta)
    }
}

impl<R: Real> HazardModel<R> for Gompertz {
    fn name(&self) -> String {
        "gompertz".into()
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
            && theta[1].is_finite()
    }

    fn hazard(&self, s: R, theta: &[R]) -> R {
        theta[0] * (theta[1] * s).exp()
    }

    fn cum_hazard(&self, t: R, theta: &[R]) -> R {
        theta[0] * exp_int(t, theta[1])
    }

    fn score(&self, s: R, theta: &[R]) -> Vec<R> {
        vec![R::one() / theta[0], s]
    }

    fn cum_score(&self, t: R, theta: &[R]) -> Vec<R> {
        vec![exp_int(t, theta[1]), theta[0] * exp_int_s(t, theta[1])]
    }

    fn has_closed_form_variance(&self) -> bool {
        true
    }

    fn info_integral(&self, t: R, theta: &[R]) -> SymMat<R> {
        let (th, be) = (theta[0], theta[1]);
        let mut m = SymMat::zeros(2);
        m.set(0, 0, exp_int(t, be) / th);
        m.set(0, 1, exp_int_s(t, be));
        m.set(1, 1, th * exp_int_s2(t, be));
        m
    }

    fn to_internal(&self, theta: &[R]) -> Vec<R> {
        vec![theta[0].ln(), theta[1]]
    }

    fn from_internal(&self, eta: &[R]) -> Vec<R> {
        vec![eta[0].exp(), eta[1]]
    }

    fn inverse_cum_hazard(&self, e: R, theta: &[R]) -> Option<R> {
        let (th, be) = (theta[0], theta[1]);
        if be == R::zero() {
            return Some(e / th);
        }
        let arg = be * e / th;
        if arg <= R::of(-1.0) {
            // bounded cumulative hazard: the event never happens
            return Some(R::infinity());
        }
        Some(arg.ln_1p() / be)
    }

    fn initial_params(&self, sample: &SurvivalSample<R>) -> Vec<R> {
        // Sign-seed β from the correlation of log Nelson–Aalen increments
        // with time; magnitude 0.1.
        let theta0 = exponential_rate(sample);
        let mut beta0 = R::of(0.1);
        if let Ok(path) = build_risk_path(sample) {
            let na = nelson_aalen(&path);
            let times = na.cum_hazard.knots();
            let jumps = na.cum_hazard.jumps();
            if times.len() >= 3 {
                let m = R::of_usize(times.len());
                let mean_t = times.iter().copied().sum::<R>() / m;
                let logs: Vec<R> = jumps.iter().map(|&j| j.ln()).collect();
                let mean_l = logs.iter().copied().sum::<R>() / m;
                let cov: R = times
                    .iter()
                    .zip(logs.iter())
                    .map(|(&t, &l)| (t - mean_t) * (l - mean_l))
                    .sum();
                if cov < R::zero() {
                    beta0 = -beta0;
                }
            }
        }
        vec![theta0, beta0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn beta_zero_limit_is_exponential() {
        let m = Gompertz;
        assert_relative_eq!(m.cum_hazard(3.0, &[2.0, 0.0]), 6.0, max_relative = 1e-15);
        let cs: Vec<f64> = m.cum_score(3.0, &[2.0, 0.0]);
        assert_relative_eq!(cs[0], 3.0, max_relative = 1e-15);
        assert_relative_eq!(cs[1], 2.0 * 9.0 / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn unit_parameters() {
        let m = Gompertz;
        assert_relative_eq!(
            m.cum_hazard(1.0, &[1.0, 1.0]),
            std::f64::consts::E - 1.0,
            max_relative = 1e-15
        );
        // ∂H/∂β at (1,1): {(β−1)e^β + 1}/β² = 1
        let cs: Vec<f64> = m.cum_score(1.0, &[1.0, 1.0]);
        assert_relative_eq!(cs[1], 1.0, max_relative = 1e-14);
    }

    #[test]
    fn series_and_direct_forms_agree_at_the_crossover() {
        for &(t, b) in &[(0.49f64, 1.0f64), (0.51, 1.0), (5.0, 0.1), (5.2, 0.1)] {
            let direct = ((b * t - 1.0) * (b * t).exp() + 1.0) / (b * b);
            assert_relative_eq!(exp_int_s(t, b), direct, max_relative = 1e-12);
            let direct2 = (((b * t - 2.0) * b * t + 2.0) * (b * t).exp() - 2.0) / (b * b * b);
            assert_relative_eq!(exp_int_s2(t, b), direct2, max_relative = 1e-11);
        }
    }

    #[test]
    fn negative_beta_bounded_hazard_inversion() {
        let m = Gompertz;
        let th = [1.0, -2.0];
        // H(∞) = θ/|β| = 0.5; draws above that never happen
        let t: f64 = m.inverse_cum_hazard(0.4, &th).unwrap();
        assert_relative_eq!(m.cum_hazard(t, &th), 0.4, max_relative = 1e-12);
        assert!(m.inverse_cum_hazard(0.6, &th).unwrap().is_infinite());
    }
}
