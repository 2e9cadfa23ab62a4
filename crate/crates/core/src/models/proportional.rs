//! Proportional class h(s, θ, β) = θ·h₀(s, β): a positive level θ times a
//! baseline shape, the form behind the one-dimensional profile likelihood.

use std::sync::Arc;

use crate::data::SurvivalSample;
use crate::linalg::SymMat;
use crate::real::Real;

use super::{exponential_rate, info_integral_by_quadrature, HazardModel};

/// A baseline shape family h₀(s, β) with its own (possibly empty) parameter.
pub trait BaselineFamily<R: Real>: Send + Sync {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn admissible(&self, beta: &[R]) -> bool;
    fn h0(&self, s: R, beta: &[R]) -> R;
    fn cum_h0(&self, t: R, beta: &[R]) -> R;
    /// ∂ log h₀/∂β.
    fn score0(&self, s: R, beta: &[R]) -> Vec<R>;
    /// ∂H₀/∂β.
    fn cum_h0_grad(&self, t: R, beta: &[R]) -> Vec<R>;
    fn to_internal(&self, beta: &[R]) -> Vec<R>;
    fn from_internal(&self, eta: &[R]) -> Vec<R>;
    /// ∫₀ᵗ ψ₀ψ₀ᵀ h₀ ds when a closed form exists.
    fn info0(&self, _t: R, _beta: &[R]) -> Option<SymMat<R>> {
        None
    }
    fn initial_beta(&self, _sample: &SurvivalSample<R>) -> Vec<R> {
        vec![R::one(); self.dim()]
    }
}

/// Weibull shape baseline h₀(s, β) = β s^{β-1}, H₀ = t^β.
#[derive(Debug, Clone, Copy, Default)]
pub struct WeibullBaseline;

impl<R: Real> BaselineFamily<R> for WeibullBaseline {
    fn name(&self) -> String {
        "weibull-shape".into()
    }

    fn dim(&self) -> usize {
        1
    }

    fn admissible(&self, beta: &[R]) -> bool {
        beta.len() == 1 && beta[0] > R::zero() && beta[0].is_finite()
    }

    fn h0(&self, s: R, beta: &[R]) -> R {
        beta[0] * s.powf(beta[0] - R::one())
    }

    fn cum_h0(&self, t: R, beta: &[R]) -> R {
        if t <= R::zero() {
            R::zero()
        } else {
            t.powf(beta[0])
        }
    }

    fn score0(&self, s: R, beta: &[R]) -> Vec<R> {
        vec![R::one() / beta[0] + s.ln()]
    }

    fn cum_h0_grad(&self, t: R, beta: &[R]) -> Vec<R> {
        if t <= R::zero() {
            vec![R::zero()]
        } else {
            vec![t.powf(beta[0]) * t.ln()]
        }
    }

    fn to_internal(&self, beta: &[R]) -> Vec<R> {
        vec![beta[0].ln()]
    }

    fn from_internal(&self, eta: &[R]) -> Vec<R> {
        vec![eta[0].exp()]
    }

    fn info0(&self, t: R, beta: &[R]) -> Option<SymMat<R>> {
        if t <= R::zero() {
            return Some(SymMat::zeros(1));
        }
        let be = beta[0];
        let tb = t.powf(be);
        let log_tb = be * t.ln();
        let mut m = SymMat::zeros(1);
        m.set(0, 0, tb * (R::one() + log_tb * log_tb) / (be * be));
        Some(m)
    }
}

/// A baseline with no free shape parameter (proportional to a known hazard).
pub struct FixedBaseline<R> {
    h0: Arc<dyn Fn(R) -> R + Send + Sync>,
    cum_h0: Arc<dyn Fn(R) -> R + Send + Sync>,
}

impl<R: Real> FixedBaseline<R> {
    pub fn new(
        h0: impl Fn(R) -> R + Send + Sync + 'static,
        cum_h0: impl Fn(R) -> R + Send + Sync + 'static,
    ) -> Self {
        FixedBaseline {
            h0: Arc::new(h0),
            cum_h0: Arc::new(cum_h0),
        }
    }
}

impl<R: Real> BaselineFamily<R> for FixedBaseline<R> {
    fn name(&self) -> String {
        "fixed-shape".into()
    }

    fn dim(&self) -> usize {
        0
    }

    fn admissible(&self, beta: &[R]) -> bool {
        beta.is_empty()
    }

    fn h0(&self, s: R, _beta: &[R]) -> R {
        (self.h0)(s)
    }

    fn cum_h0(&self, t: R, _beta: &[R]) -> R {
        (self.cum_h0)(t)
    }

    fn score0(&self, _s: R, _beta: &[R]) -> Vec<R> {
        Vec::new()
    }

    fn cum_h0_grad(&self, _t: R, _beta: &[R]) -> Vec<R> {
        Vec::new()
    }

    fn to_internal(&self, _beta: &[R]) -> Vec<R> {
        Vec::new()
    }

    fn from_internal(&self, _eta: &[R]) -> Vec<R> {
        Vec::new()
    }

    fn info0(&self, _t: R, _beta: &[R]) -> Option<SymMat<R>> {
        Some(SymMat::zeros(0))
    }
}

/// Proportional model θ·h₀(s, β); parameters (θ, β…), ψ₁ = 1/θ always.
pub struct ProportionalModel<R> {
    baseline: Arc<dyn BaselineFamily<R>>,
}

impl<R: Real> ProportionalModel<R> {
    pub fn new(baseline: Arc<dyn BaselineFamily<R>>) -> Self {
        ProportionalModel { baseline }
    }

    pub fn weibull() -> Self {
        ProportionalModel::new(Arc::new(WeibullBaseline))
    }

    pub fn baseline(&self) -> &Arc<dyn BaselineFamily<R>> {
        &self.baseline
    }
}

impl<R: Real> HazardModel<R> for ProportionalModel<R> {
    fn name(&self) -> String {
        format!("proportional[{}]", self.baseline.name())
    }

    fn dim(&self) -> usize {
        1 + self.baseline.dim()
    }

    fn param_names(&self) -> Vec<String> {
        let mut names = vec!["theta".to_string()];
        for i in 0..self.baseline.dim() {
            names.push(format!("beta{}", i + 1));
        }
        names
    }

    fn admissible(&self, theta: &[R]) -> bool {
        theta.len() == self.dim()
            && theta[0] > R::zero()
            && theta[0].is_finite()
            && self.baseline.admissible(&theta[1..])
    }

    fn hazard(&self, s: R, theta: &[R]) -> R {
        theta[0] * self.baseline.h0(s, &theta[1..])
    }

    fn cum_hazard(&self, t: R, theta: &[R]) -> R {
        theta[0] * self.baseline.cum_h0(t, &theta[1..])
    }

    fn score(&self, s: R, theta: &[R]) -> Vec<R> {
        let mut psi = vec![R::one() / theta[0]];
        psi.extend(self.baseline.score0(s, &theta[1..]));
        psi
    }

    fn cum_score(&self, t: R, theta: &[R]) -> Vec<R> {
        let mut g = vec![self.baseline.cum_h0(t, &theta[1..])];
        for d in self.baseline.cum_h0_grad(t, &theta[1..]) {
            g.push(theta[0] * d);
        }
        g
    }

    fn has_closed_form_variance(&self) -> bool {
        false
    }

    fn info_integral(&self, t: R, theta: &[R]) -> SymMat<R> {
        // ψ₁ = 1/θ couples the first row to H and H*: I₁₁ = H/θ²,
        // I₁ⱼ = H₀*_{j}; the baseline block needs its own integrals.
        match self.baseline.info0(t, &theta[1..]) {
            Some(block) => {
                let p = self.dim();
                let mut m = SymMat::zeros(p);
                let th = theta[0];
                m.set(0, 0, self.cum_hazard(t, theta) / (th * th));
                let grad = self.baseline.cum_h0_grad(t, &theta[1..]);
                for (j, g) in grad.iter().enumerate() {
                    m.set(0, 1 + j, *g);
                }
                for i in 0..block.dim() {
                    for j in i..block.dim() {
                        m.set(1 + i, 1 + j, th * block.get(i, j));
                    }
                }
                m
            }
            None => info_integral_by_quadrature(self, t, theta),
        }
    }

    fn to_internal(&self, theta: &[R]) -> Vec<R> {
        let mut eta = vec![theta[0].ln()];
        eta.extend(self.baseline.to_internal(&theta[1..]));
        eta
    }

    fn from_internal(&self, eta: &[R]) -> Vec<R> {
        let mut theta = vec![eta[0].exp()];
        theta.extend(self.baseline.from_internal(&eta[1..]));
        theta
    }

    fn initial_params(&self, sample: &SurvivalSample<R>) -> Vec<R> {
        let mut theta = vec![exponential_rate(sample)];
        theta.extend(self.baseline.initial_beta(sample));
        theta
    }
}
