//! Compound Poisson frailty: individual intensities Z·λ(t) with Z following
//! Aalen's compound Poisson law give population hazard
//! h(t) = λ(t)/{1 + (δ/α)Λ(t)}^α, with an explicit cumulative hazard and a
//! logarithmic branch at α = 1.

use std::sync::Arc;

use crate::data::SurvivalSample;
use crate::real::Real;

use super::{exponential_rate, fd_cum_score, fd_score, HazardModel};

/// Power-law intensity with a configurable onset: λ(t) = a(t − t₀)^k for
/// t > t₀, zero before. Parameters (a, k) with a > 0 and k > −1.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawStart<R> {
    pub onset: R,
}

impl<R: Real> PowerLawStart<R> {
    pub fn new(onset: R) -> Self {
        PowerLawStart { onset }
    }
}

impl<R: Real> HazardModel<R> for PowerLawStart<R> {
    fn name(&self) -> String {
        "powerlaw".into()
    }

    fn dim(&self) -> usize {
        2
    }

    fn param_names(&self) -> Vec<String> {
        vec!["a".into(), "k".into()]
    }

    fn admissible(&self, theta: &[R]) -> bool {
        theta.len() == 2
            && theta[0] > R::zero()
            && theta[0].is_finite()
            && theta[1] > -R::one()
            && theta[1].is_finite()
    }

    fn hazard(&self, s: R, theta: &[R]) -> R {
        let w = s - self.onset;
        if w <= R::zero() {
            return R::zero();
        }
        theta[0] * w.powf(theta[1])
    }

    fn cum_hazard(&self, t: R, theta: &[R]) -> R {
        let w = t - self.onset;
        if w <= R::zero() {
            return R::zero();
        }
        theta[0] * w.powf(theta[1] + R::one()) / (theta[1] + R::one())
    }

    fn score(&self, s: R, theta: &[R]) -> Vec<R> {
        let w = s - self.onset;
        vec![R::one() / theta[0], w.ln()]
    }

    fn cum_score(&self, t: R, theta: &[R]) -> Vec<R> {
        let w = t - self.onset;
        if w <= R::zero() {
            return vec![R::zero(); 2];
        }
        let cum = self.cum_hazard(t, theta);
        vec![
            cum / theta[0],
            cum * (w.ln() - R::one() / (theta[1] + R::one())),
        ]
    }

    fn has_closed_form_variance(&self) -> bool {
        false
    }

    fn to_internal(&self, theta: &[R]) -> Vec<R> {
        vec![theta[0].ln(), (theta[1] + R::one()).ln()]
    }

    fn from_internal(&self, eta: &[R]) -> Vec<R> {
        vec![eta[0].exp(), eta[1].exp() - R::one()]
    }

    fn initial_params(&self, sample: &SurvivalSample<R>) -> Vec<R> {
        vec![exponential_rate(sample), R::half()]
    }
}

enum CpfBase<R> {
    /// Analytic parameter derivatives.
    PowerLaw(PowerLawStart<R>),
    /// Finite-difference parameter derivatives.
    Generic(Arc<dyn HazardModel<R>>),
}

/// Compound Poisson frailty over a base intensity family; extended parameter
/// vector is (base parameters…, α, δ) with α, δ > 0.
pub struct CompoundPoissonFrailty<R> {
    base: CpfBase<R>,
}

impl<R: Real> CompoundPoissonFrailty<R> {
    /// Frailty over the power-law-start intensity; derivatives are analytic.
    pub fn power_law(onset: R) -> Self {
        CompoundPoissonFrailty {
            base: CpfBase::PowerLaw(PowerLawStart::new(onset)),
        }
    }

    /// Frailty over an arbitrary base family; derivatives by finite
    /// differences.
    pub fn new(base: Arc<dyn HazardModel<R>>) -> Self {
        CompoundPoissonFrailty {
            base: CpfBase::Generic(base),
        }
    }

    fn base_dim(&self) -> usize {
        match &self.base {
            CpfBase::PowerLaw(_) => 2,
            CpfBase::Generic(m) => m.dim(),
        }
    }

    fn split<'a>(&self, theta: &'a [R]) -> (&'a [R], R, R) {
        let b = self.base_dim();
        (&theta[..b], theta[b], theta[b + 1])
    }

    fn lambda(&self, s: R, base_params: &[R]) -> R {
        match &self.base {
            CpfBase::PowerLaw(p) => p.hazard(s, base_params),
            CpfBase::Generic(m) => m.hazard(s, base_params),
        }
    }

    fn big_lambda(&self, t: R, base_params: &[R]) -> R {
        match &self.base {
            CpfBase::PowerLaw(p) => p.cum_hazard(t, base_params),
            CpfBase::Generic(m) => m.cum_hazard(t, base_params),
        }
    }
}

/// expm1(x)/x, continuous through 0.
fn expm1_over_x<R: Real>(x: R) -> R {
    if x == R::zero() {
        R::one()
    } else {
        x.exp_m1() / x
    }
}

impl<R: Real> HazardModel<R> for CompoundPoissonFrailty<R> {
    fn name(&self) -> String {
        "cpfrailty".into()
    }

    fn dim(&self) -> usize {
        self.base_dim() + 2
    }

    fn param_names(&self) -> Vec<String> {
        let mut names = match &self.base {
            CpfBase::PowerLaw(p) => HazardModel::<R>::param_names(p),
            CpfBase::Generic(m) => m.param_names(),
        };
        names.push("alpha".into());
        names.push("delta".into());
        names
    }

    fn admissible(&self, theta: &[R]) -> bool {
        if theta.len() != self.dim() {
            return false;
        }
        let (bp, alpha, delta) = self.split(theta);
        let base_ok = match &self.base {
            CpfBase::PowerLaw(p) => p.admissible(bp),
            CpfBase::Generic(m) => m.admissible(bp),
        };
        base_ok
            && alpha > R::zero()
            && delta > R::zero()
            && alpha.is_finite()
            && delta.is_finite()
    }

    fn hazard(&self, s: R, theta: &[R]) -> R {
        let (bp, alpha, delta) = self.split(theta);
        let b = R::one() + delta / alpha * self.big_lambda(s, bp);
        self.lambda(s, bp) * (-alpha * b.ln()).exp()
    }

    fn cum_hazard(&self, t: R, theta: &[R]) -> R {
        let (bp, alpha, delta) = self.split(theta);
        let lam = self.big_lambda(t, bp);
        let ln_b = (delta / alpha * lam).ln_1p();
        if (alpha - R::one()).abs() < R::of(1e-8) {
            ln_b / delta
        } else {
            // (α/(α−1)) δ⁻¹ {1 − B^{1−α}}, written through expm1 for stability
            alpha / delta * ln_b * expm1_over_x((R::one() - alpha) * ln_b)
        }
    }

    fn score(&self, s: R, theta: &[R]) -> Vec<R> {
        match &self.base {
            CpfBase::PowerLaw(p) => {
                let (bp, alpha, delta) = self.split(theta);
                let (a, k) = (bp[0], bp[1]);
                let w = s - p.onset;
                let lam = self.big_lambda(s, bp);
                let b = R::one() + delta / alpha * lam;
                let lam_k = lam * (w.ln() - R::one() / (k + R::one()));
                vec![
                    (R::one() - delta * lam / b) / a,
                    w.ln() - delta * lam_k / b,
                    -b.ln() + delta * lam / (alpha * b),
                    -lam / b,
                ]
            }
            CpfBase::Generic(_) => fd_score(self, s, theta),
        }
    }

    fn cum_score(&self, t: R, theta: &[R]) -> Vec<R> {
        match &self.base {
            CpfBase::PowerLaw(p) => {
                let (bp, alpha, delta) = self.split(theta);
                let (a, k) = (bp[0], bp[1]);
                let w = t - p.onset;
                if w <= R::zero() {
                    return vec![R::zero(); 4];
                }
                let lam = self.big_lambda(t, bp);
                let b = R::one() + delta / alpha * lam;
                let b_pow = (-alpha * b.ln()).exp(); // B^{-α}
                let lam_k = lam * (w.ln() - R::one() / (k + R::one()));
                let h_cum = self.cum_hazard(t, theta);
                let d_alpha = if (alpha - R::one()).abs() >= R::of(1e-3) {
                    let am1 = alpha - R::one();
                    let b_pow1 = (-am1 * b.ln()).exp(); // B^{1-α}
                    -(R::one() - b_pow1) / (delta * am1 * am1)
                        + alpha / (delta * am1) * b_pow1 * b.ln()
                        - b_pow * lam / alpha
                } else {
                    // α-derivative degenerates near the logarithmic branch
                    let rel = R::of(1e-5);
                    let step = rel * alpha.max(R::of(1e-3));
                    let mut up = theta.to_vec();
                    let mut dn = theta.to_vec();
                    up[2] += step;
                    dn[2] -= step;
                    (self.cum_hazard(t, &up) - self.cum_hazard(t, &dn)) / (R::two() * step)
                };
                vec![
                    b_pow * lam / a,
                    b_pow * lam_k,
                    d_alpha,
                    (lam * b_pow - h_cum) / delta,
                ]
            }
            CpfBase::Generic(_) => fd_cum_score(self, t, theta),
        }
    }

    fn has_closed_form_variance(&self) -> bool {
        false
    }

    fn to_internal(&self, theta: &[R]) -> Vec<R> {
        let (bp, alpha, delta) = self.split(theta);
        let mut eta = match &self.base {
            CpfBase::PowerLaw(p) => p.to_internal(bp),
            CpfBase::Generic(m) => m.to_internal(bp),
        };
        eta.push(alpha.ln());
        eta.push(delta.ln());
        eta
    }

    fn from_internal(&self, eta: &[R]) -> Vec<R> {
        let b = self.base_dim();
        let mut theta = match &self.base {
            CpfBase::PowerLaw(p) => p.from_internal(&eta[..b]),
            CpfBase::Generic(m) => m.from_internal(&eta[..b]),
        };
        theta.push(eta[b].exp());
        theta.push(eta[b + 1].exp());
        theta
    }

    fn initial_params(&self, sample: &SurvivalSample<R>) -> Vec<R> {
        let mut theta = match &self.base {
            CpfBase::PowerLaw(p) => p.initial_params(sample),
            CpfBase::Generic(m) => m.initial_params(sample),
        };
        theta.push(R::of(1.5));
        theta.push(R::half());
        theta
    }
}
