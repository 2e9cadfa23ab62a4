//! Gamma hazard model with density {θ^α/Γ(α)} t^{α-1} e^{-θt}; the hazard and
//! its parameter derivatives run through the incomplete gamma integral and
//! its log-weighted relative.

use crate::data::SurvivalSample;
use crate::quad::adaptive_simpson;
use crate::real::Real;
use crate::special::{digamma, ln_gamma, log_weighted_reg_gamma, reg_lower_gamma, reg_upper_gamma};

use super::{exponential_rate, fd_cum_score, HazardModel};

/// Gamma family, parameters (α, θ), both positive. The cumulative-hazard
/// gradient has no closed form and is approximated by central finite
/// differences; the nonparametric variance flavor is the recommended default.
#[derive(Debug, Clone, Copy, Default)]
pub struct GammaHazard;

/// Survival function 1 − F0(θt, α), kept in the upper-tail representation.
fn survival<R: Real>(x: R, alpha: R) -> R {
    reg_upper_gamma(x, alpha)
}

/// E[ln U | U > x] − ln x style tail ratio:
/// ∫ₓ^∞ ln u · u^{α-1} e^{-u} du / ∫ₓ^∞ u^{α-1} e^{-u} du, for x ≥ 10.
/// The common factor x^{α-1} e^{-x} is cancelled analytically so the ratio
/// stays finite far in the tail.
fn log_tail_ratio<R: Real>(x: R, alpha: R) -> R {
    let horizon = R::of(90.0) + R::of(10.0) * alpha.max(R::one()).ln();
    let weight = move |v: R| ((alpha - R::one()) * (R::one() + v / x).ln() - v).exp();
    let num = adaptive_simpson(&|v: R| (x + v).ln() * weight(v), R::zero(), horizon, R::of(1e-13));
    let den = adaptive_simpson(&weight, R::zero(), horizon, R::of(1e-13));
    num / den
}

impl<R: Real> HazardModel<R> for GammaHazard {
    fn name(&self) -> String {
        "gamma".into()
    }

    fn dim(&self) -> usize {
        2
    }

    fn param_names(&self) -> Vec<String> {
        vec!["alpha".into(), "theta".into()]
    }

    fn admissible(&self, theta: &[R]) -> bool {
        theta.len() == 2 && theta.iter().all(|&x| x > R::zero() && x.is_finite())
    }

    fn hazard(&self, s: R, theta: &[R]) -> R {
        let (alpha, th) = (theta[0], theta[1]);
        let x = th * s;
        let log_density =
            alpha * th.ln() + (alpha - R::one()) * s.ln() - x - ln_gamma(alpha);
        log_density.exp() / survival(x, alpha)
    }

    fn cum_hazard(&self, t: R, theta: &[R]) -> R {
        if t <= R::zero() {
            return R::zero();
        }
        let (alpha, th) = (theta[0], theta[1]);
        let q = survival(th * t, alpha);
        if q <= R::zero() {
            // beyond support precision: F0 has saturated at 1
            return R::infinity();
        }
        -q.ln()
    }

    fn score(&self, s: R, theta: &[R]) -> Vec<R> {
        let (alpha, th) = (theta[0], theta[1]);
        let x = th * s;
        let q = survival(x, alpha);
        let psi_alpha = if x <= R::of(10.0) {
            let f0 = reg_lower_gamma(x, alpha);
            let f0_star = log_weighted_reg_gamma(x, alpha);
            let dg = digamma(alpha);
            x.ln() - dg + (f0_star - dg * f0) / q
        } else {
            // complementary form: ln(θs) − tail ratio; exact cancellation of
            // the ψ(α) terms keeps this stable when 1 − F0 is tiny
            x.ln() - log_tail_ratio(x, alpha)
        };
        // ψ_θ = (α − θs)/θ + {1 − F0}⁻¹ θ⁻¹ (θs)^α e^{-θs} / Γ(α)
        let log_tail_term = alpha * x.ln() - x - ln_gamma(alpha) - q.ln();
        let psi_theta = (alpha - x) / th + log_tail_term.exp() / th;
        vec![psi_alpha, psi_theta]
    }

    fn cum_score(&self, t: R, theta: &[R]) -> Vec<R> {
        fd_cum_score(self, t, theta)
    }

    fn has_closed_form_variance(&self) -> bool {
        false
    }

    fn to_internal(&self, theta: &[R]) -> Vec<R> {
        vec![theta[0].ln(), theta[1].ln()]
    }

    fn from_internal(&self, eta: &[R]) -> Vec<R> {
        vec![eta[0].exp(), eta[1].exp()]
    }

    fn initial_params(&self, sample: &SurvivalSample<R>) -> Vec<R> {
        // moment matching on uncensored exits
        let times: Vec<R> = sample
            .subjects()
            .iter()
            .filter(|s| s.status && s.exit_time <= sample.tau())
            .map(|s| s.exit_time)
            .collect();
        if times.len() >= 3 {
            let n = R::of_usize(times.len());
            let mean = times.iter().copied().sum::<R>() / n;
            let var = times
                .iter()
                .map(|&t| (t - mean) * (t - mean))
                .sum::<R>()
                / (n - R::one());
            if var > R::zero() && mean > R::zero() {
                return vec![mean * mean / var, mean / var];
            }
        }
        vec![R::one(), exponential_rate(sample)]
    }
}
