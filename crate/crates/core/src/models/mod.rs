//! Parametric hazard families: hazard, cumulative hazard, log-hazard score,
//! cumulative-hazard gradient, and the information integrals behind the
//! parametric variance estimates.

use std::sync::Arc;

use crate::data::SurvivalSample;
use crate::error::{NlhError, Result};
use crate::linalg::SymMat;
use crate::quad::{adaptive_simpson, gauss_legendre_16};
use crate::real::Real;

mod compound;
mod exponential;
mod fixed;
mod frailty;
mod gamma;
mod gompertz;
mod proportional;
mod weibull;

pub use compound::{CompoundPoissonFrailty, PowerLawStart};
pub use exponential::Exponential;
pub use fixed::FixedModel;
pub use frailty::SimpleFrailty;
pub use gamma::GammaHazard;
pub use gompertz::Gompertz;
pub use proportional::{BaselineFamily, FixedBaseline, ProportionalModel, WeibullBaseline};
pub use weibull::Weibull;

/// A parametric hazard-rate family h(s, θ) on the observation window.
///
/// Implementations are pure value objects: every method is reentrant and
/// side-effect free, so models can be shared across threads.
pub trait HazardModel<R: Real>: Send + Sync {
    /// Short identifier used in metadata and the command line.
    fn name(&self) -> String;

    /// Parameter dimension p (0 for a fully specified hazard).
    fn dim(&self) -> usize;

    /// Human-readable parameter names, length `dim()`.
    fn param_names(&self) -> Vec<String>;

    /// Whether θ lies in the admissible region.
    fn admissible(&self, theta: &[R]) -> bool;

    /// Hazard rate h(s, θ); only evaluated at s > 0.
    fn hazard(&self, s: R, theta: &[R]) -> R;

    /// Cumulative hazard H(t, θ) = ∫₀ᵗ h(s, θ) ds, with H(0, θ) = 0.
    fn cum_hazard(&self, t: R, theta: &[R]) -> R;

    /// Score ψ(s, θ) = ∂ log h/∂θ, a p-vector.
    fn score(&self, s: R, theta: &[R]) -> Vec<R>;

    /// H*(t, θ) = ∂H/∂θ = ∫₀ᵗ h ψ ds, a p-vector.
    fn cum_score(&self, t: R, theta: &[R]) -> Vec<R>;

    /// Whether the information integrals ∫ ψψᵀ h ds have closed forms. When
    /// `false` the parametric variance route integrates numerically and the
    /// nonparametric variance flavor is the recommended default.
    fn has_closed_form_variance(&self) -> bool;

    /// Information integral I(t, θ) = ∫₀ᵗ ψ(s,θ)ψ(s,θ)ᵀ h(s,θ) ds.
    ///
    /// The default integrates numerically; families with explicit
    /// antiderivatives override it.
    fn info_integral(&self, t: R, theta: &[R]) -> SymMat<R> {
        info_integral_by_quadrature(self, t, theta)
    }

    /// Map θ to the unconstrained internal coordinates used by the optimizer
    /// (logs of positivity-constrained parameters).
    fn to_internal(&self, theta: &[R]) -> Vec<R>;

    /// Inverse of [`Self::to_internal`].
    fn from_internal(&self, eta: &[R]) -> Vec<R>;

    /// `Some(θ)` when the family is the constant-rate model. Lets the curve
    /// engine use exact antiderivatives for deterministic Type C weights.
    fn constant_rate(&self, _theta: &[R]) -> Option<R> {
        None
    }

    /// Closed-form solution t of H(t, θ) = e when available; used by the
    /// simulation lab. `None` falls back to numeric inversion.
    fn inverse_cum_hazard(&self, _e: R, _theta: &[R]) -> Option<R> {
        None
    }

    /// Starting point for maximum-likelihood iteration, derived from simple
    /// sample summaries.
    fn initial_params(&self, sample: &SurvivalSample<R>) -> Vec<R>;
}

/// Validate a parameter vector against a model.
pub fn check_params<R: Real>(model: &dyn HazardModel<R>, theta: &[R]) -> Result<()> {
    if theta.len() != model.dim() {
        return Err(NlhError::ParamLength {
            expected: model.dim(),
            got: theta.len(),
        });
    }
    if !model.admissible(theta) {
        return Err(NlhError::InadmissibleParams {
            model: model.name(),
        });
    }
    Ok(())
}

/// Exponential closed-form rate Σδ / Σ(t − v), the seed for every family.
pub fn exponential_rate<R: Real>(sample: &SurvivalSample<R>) -> R {
    let events = R::of_usize(sample.event_count());
    let exposure = sample.total_exposure();
    if exposure > R::zero() && events > R::zero() {
        events / exposure
    } else {
        R::one()
    }
}

/// ∫₀ᵗ ψψᵀ h ds by adaptive quadrature, entry by entry. The lower limit is
/// nudged off 0 because scores may diverge logarithmically there.
pub fn info_integral_by_quadrature<R: Real, M: HazardModel<R> + ?Sized>(
    model: &M,
    t: R,
    theta: &[R],
) -> SymMat<R> {
    let p = model.dim();
    let mut out = SymMat::zeros(p);
    if p == 0 || t <= R::zero() {
        return out;
    }
    let lo = t * R::of(1e-14);
    for i in 0..p {
        for j in i..p {
            let f = |s: R| {
                let psi = model.score(s, theta);
                psi[i] * psi[j] * model.hazard(s, theta)
            };
            let rough = gauss_legendre_16(&f, lo, t).abs();
            let tol = (rough + R::one()) * R::of(1e-12);
            out.set(i, j, adaptive_simpson(&f, lo, t, tol));
        }
    }
    out
}

/// Central finite-difference approximation of ∂H/∂θ, used by families
/// without closed-form cumulative-hazard gradients (relative step 1e-5).
pub fn fd_cum_score<R: Real, M: HazardModel<R> + ?Sized>(
    model: &M,
    t: R,
    theta: &[R],
) -> Vec<R> {
    let rel = R::of(1e-5);
    (0..theta.len())
        .map(|i| {
            let step = rel * theta[i].abs().max(R::of(1e-3));
            let mut up = theta.to_vec();
            let mut dn = theta.to_vec();
            up[i] += step;
            dn[i] -= step;
            (model.cum_hazard(t, &up) - model.cum_hazard(t, &dn)) / (R::two() * step)
        })
        .collect()
}

/// Central finite-difference approximation of ∂ log h/∂θ.
pub fn fd_score<R: Real, M: HazardModel<R> + ?Sized>(model: &M, s: R, theta: &[R]) -> Vec<R> {
    let rel = R::of(1e-5);
    (0..theta.len())
        .map(|i| {
            let step = rel * theta[i].abs().max(R::of(1e-3));
            let mut up = theta.to_vec();
            let mut dn = theta.to_vec();
            up[i] += step;
            dn[i] -= step;
            (model.hazard(s, &up).ln() - model.hazard(s, &dn).ln()) / (R::two() * step)
        })
        .collect()
}

/// Numeric solution of H(t, θ) = e by bracketing and bisection/Newton.
pub fn invert_cum_hazard<R: Real, M: HazardModel<R> + ?Sized>(
    model: &M,
    e: R,
    theta: &[R],
) -> R {
    if let Some(t) = model.inverse_cum_hazard(e, theta) {
        return t;
    }
    // bracket
    let mut hi = R::one();
    let mut lo = R::zero();
    for _ in 0..400 {
        if model.cum_hazard(hi, theta) >= e {
            break;
        }
        lo = hi;
        hi = hi * R::two();
    }
    if model.cum_hazard(hi, theta) < e {
        return R::infinity();
    }
    // bisection; 80 halvings take the bracket below any useful resolution
    for _ in 0..80 {
        let mid = (lo + hi) * R::half();
        if mid == lo || mid == hi {
            break;
        }
        if model.cum_hazard(mid, theta) < e {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * R::half()
}

/// Construct a model by its command-line identifier. The frailty family
/// derives its admissible-region floor from the sample when one is supplied.
pub fn by_id<R: Real>(
    id: &str,
    sample: Option<&SurvivalSample<R>>,
) -> Result<Arc<dyn HazardModel<R>>> {
    match id {
        "exponential" => Ok(Arc::new(Exponential)),
        "weibull" => Ok(Arc::new(Weibull)),
        "gompertz" => Ok(Arc::new(Gompertz)),
        "frailty" => Ok(match sample {
            Some(s) => Arc::new(SimpleFrailty::for_sample(s)),
            None => Arc::new(SimpleFrailty::new(R::zero())),
        }),
        "gamma" => Ok(Arc::new(GammaHazard)),
        "cpfrailty" => Ok(Arc::new(CompoundPoissonFrailty::power_law(R::zero()))),
        other => Err(NlhError::Parse(format!(
            "unknown model id `{other}` (expected exponential|weibull|gompertz|frailty|gamma|cpfrailty|fixed:<file>)"
        ))),
    }
}
