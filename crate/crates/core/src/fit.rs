//! Maximum-likelihood fitting of hazard models on censored/truncated data:
//! safeguarded Newton iteration on the log parametrization, the profile
//! likelihood for the proportional class, both variance estimators, and the
//! subinterval (windowed) estimator.

use crate::data::SurvivalSample;
use crate::error::{NlhError, Result};
use crate::linalg::{solve_damped, SymMat};
use crate::models::{check_params, exponential_rate, HazardModel, ProportionalModel};
use crate::real::Real;

/// Which plug-in variance estimate backs a covariance or curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceFlavor {
    /// Model integrals evaluated at the estimate (closed form or quadrature).
    Parametric,
    /// Finite sums over observed events with dN/Y plug-ins.
    Nonparametric,
}

impl VarianceFlavor {
    pub fn label(&self) -> &'static str {
        match self {
            VarianceFlavor::Parametric => "parametric",
            VarianceFlavor::Nonparametric => "nonparametric",
        }
    }
}

/// Subinterval `[a, b]` of the time axis used by the windowed estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightWindow<R> {
    pub a: R,
    pub b: R,
}

impl<R: Real> WeightWindow<R> {
    pub fn new(a: R, b: R) -> Result<Self> {
        if a < R::zero() || !(a < b) {
            return Err(NlhError::InvalidWindow {
                a: a.to_f64().unwrap_or(f64::NAN),
                b: b.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(WeightWindow { a, b })
    }
}

/// Result of a maximum-likelihood fit.
#[derive(Debug, Clone)]
pub struct FitResult<R> {
    pub model: String,
    pub param_names: Vec<String>,
    pub theta: Vec<R>,
    pub loglik: R,
    /// Parametric information estimate (2.4-style per-subject integrals).
    pub sigma_pm: SymMat<R>,
    /// Nonparametric information estimate (event sums).
    pub sigma_np: SymMat<R>,
    /// Σ̂⁻¹/n for the recorded flavor.
    pub cov: SymMat<R>,
    pub cov_flavor: VarianceFlavor,
    pub std_errors: Vec<R>,
    pub iterations: usize,
    pub converged: bool,
    pub grad_norm: R,
    pub warnings: Vec<String>,
}

impl<R: Real> FitResult<R> {
    pub fn std_error(&self, i: usize) -> R {
        self.std_errors[i]
    }
}

/// Log-likelihood Σ_j {δ_j log h(t_j, θ) − (H(t_j, θ) − H(v_j, θ))}, with
/// exits capped at tau and delayed entry subtracting H at the entry age.
pub fn log_likelihood<R: Real>(
    model: &dyn HazardModel<R>,
    theta: &[R],
    sample: &SurvivalSample<R>,
) -> Result<R> {
    check_params(model, theta)?;
    Ok(log_likelihood_unchecked(model, theta, sample))
}

fn log_likelihood_unchecked<R: Real>(
    model: &dyn HazardModel<R>,
    theta: &[R],
    sample: &SurvivalSample<R>,
) -> R {
    let mut acc = R::zero();
    for s in sample.subjects() {
        if s.entry_time >= sample.tau() {
            continue;
        }
        let (exit, status) = sample.effective_exit(s);
        if status {
            acc += model.hazard(exit, theta).ln();
        }
        acc -= model.cum_hazard(exit, theta);
        if s.entry_time > R::zero() {
            acc += model.cum_hazard(s.entry_time, theta);
        }
    }
    acc
}

/// Analytic score Σ_j {δ_j ψ(t_j) − (H*(t_j) − H*(v_j))} in natural
/// coordinates.
fn score_vector<R: Real>(
    model: &dyn HazardModel<R>,
    theta: &[R],
    sample: &SurvivalSample<R>,
) -> Vec<R> {
    let p = model.dim();
    let mut g = vec![R::zero(); p];
    for s in sample.subjects() {
        if s.entry_time >= sample.tau() {
            continue;
        }
        let (exit, status) = sample.effective_exit(s);
        if status {
            for (gi, si) in g.iter_mut().zip(model.score(exit, theta)) {
                *gi += si;
            }
        }
        for (gi, hi) in g.iter_mut().zip(model.cum_score(exit, theta)) {
            *gi -= hi;
        }
        if s.entry_time > R::zero() {
            for (gi, hi) in g.iter_mut().zip(model.cum_score(s.entry_time, theta)) {
                *gi += hi;
            }
        }
    }
    g
}

/// Parametric information estimate Σ̂ = n⁻¹ Σ_j {I(t_j, θ̂) − I(v_j, θ̂)}
/// with I(t) = ∫₀ᵗ ψψᵀ h ds.
pub fn sigma_parametric<R: Real>(
    model: &dyn HazardModel<R>,
    theta: &[R],
    sample: &SurvivalSample<R>,
) -> SymMat<R> {
    let p = model.dim();
    let mut out = SymMat::zeros(p);
    for s in sample.subjects() {
        if s.entry_time >= sample.tau() {
            continue;
        }
        let (exit, _) = sample.effective_exit(s);
        out.add_assign(&model.info_integral(exit, theta));
        if s.entry_time > R::zero() {
            let at_entry = model.info_integral(s.entry_time, theta);
            out.add_assign(&{
                let mut neg = at_entry;
                neg.scale(-R::one());
                neg
            });
        }
    }
    out.scale(R::one() / R::of_usize(sample.n()));
    out
}

/// Nonparametric information estimate Σ̂ = n⁻¹ Σ ψ(t_j, θ̂)ψ(t_j, θ̂)ᵀ δ_j.
pub fn sigma_nonparametric<R: Real>(
    model: &dyn HazardModel<R>,
    theta: &[R],
    sample: &SurvivalSample<R>,
) -> SymMat<R> {
    let p = model.dim();
    let mut out = SymMat::zeros(p);
    for s in sample.subjects() {
        let (exit, status) = sample.effective_exit(s);
        if status && s.entry_time < sample.tau() {
            out.add_scaled_outer(&model.score(exit, theta), R::one());
        }
    }
    out.scale(R::one() / R::of_usize(sample.n()));
    out
}

/// Options for [`fit_ml_with`].
#[derive(Debug, Clone, Default)]
pub struct FitOptions<R> {
    /// Starting point in natural coordinates; model-derived when `None`.
    pub init: Option<Vec<R>>,
    /// Per-parameter mask: `Some(v)` pins that parameter at `v`.
    pub fixed: Vec<Option<R>>,
}

/// Maximum-likelihood fit with model-derived initialization.
pub fn fit_ml<R: Real>(
    model: &dyn HazardModel<R>,
    sample: &SurvivalSample<R>,
    init: Option<Vec<R>>,
) -> Result<FitResult<R>> {
    fit_ml_with(
        model,
        sample,
        FitOptions {
            init,
            fixed: Vec::new(),
        },
    )
}

/// Maximum-likelihood fit with optional fixed-parameter masks.
pub fn fit_ml_with<R: Real>(
    model: &dyn HazardModel<R>,
    sample: &SurvivalSample<R>,
    options: FitOptions<R>,
) -> Result<FitResult<R>> {
    let events = sample.event_count();
    if events == 0 {
        return Err(NlhError::NoEvents);
    }
    let p = model.dim();
    let mut warnings = Vec::new();
    if p >= 2 && events < p {
        warnings.push(format!(
            "only {events} events for {p} parameters; estimates will be unstable"
        ));
    }
    if p >= 2 && events < 2 && options.fixed.iter().flatten().count() + 2 <= p {
        return Err(NlhError::DegenerateFit(
            "a multi-parameter family cannot be identified from a single event".into(),
        ));
    }

    // Constant-rate closed form: θ̂ = Σδ / Σ(t − v).
    let is_constant_rate = p == 1 && model.constant_rate(&[R::one()]) == Some(R::one());
    if is_constant_rate && options.fixed.iter().flatten().count() == 0 {
        let theta = vec![exponential_rate(sample)];
        let loglik = log_likelihood_unchecked(model, &theta, sample);
        let g = score_vector(model, &theta, sample);
        return finalize_fit(model, sample, theta, loglik, 0, true, g, warnings);
    }

    let init = match options.init {
        Some(v) => {
            check_params(model, &v)?;
            v
        }
        None => model.initial_params(sample),
    };
    let mut fixed = options.fixed;
    fixed.resize(p, None);
    let mut start = init;
    for (k, f) in fixed.iter().enumerate() {
        if let Some(v) = f {
            start[k] = *v;
        }
    }
    check_params(model, &start)?;
    if !log_likelihood_unchecked(model, &start, sample).is_finite() {
        return Err(NlhError::ModelDomain {
            model: model.name(),
            what: "log-likelihood is not finite at the starting point".into(),
        });
    }

    newton_drive(model, sample, start, &fixed, warnings)
}

/// Jacobian dθ/dη of the internal-coordinate map, by central differences
/// (the maps are smooth coordinate-wise transforms).
fn internal_jacobian<R: Real>(model: &dyn HazardModel<R>, eta: &[R]) -> Vec<Vec<R>> {
    let p = eta.len();
    let mut jac = vec![vec![R::zero(); p]; p]; // jac[k][i] = ∂θ_k/∂η_i
    for i in 0..p {
        let h = R::of(1e-6) * eta[i].abs().max(R::one());
        let mut up = eta.to_vec();
        let mut dn = eta.to_vec();
        up[i] += h;
        dn[i] -= h;
        let tu = model.from_internal(&up);
        let td = model.from_internal(&dn);
        for k in 0..p {
            jac[k][i] = (tu[k] - td[k]) / (R::two() * h);
        }
    }
    jac
}

fn internal_gradient<R: Real>(
    model: &dyn HazardModel<R>,
    sample: &SurvivalSample<R>,
    eta: &[R],
    fixed: &[Option<R>],
) -> Vec<R> {
    let theta = apply_mask(model, eta, fixed);
    let g_nat = score_vector(model, &theta, sample);
    let jac = internal_jacobian(model, eta);
    let p = eta.len();
    (0..p)
        .map(|i| {
            if fixed[i].is_some() {
                R::zero()
            } else {
                (0..p).map(|k| g_nat[k] * jac[k][i]).sum()
            }
        })
        .collect()
}

fn apply_mask<R: Real>(model: &dyn HazardModel<R>, eta: &[R], fixed: &[Option<R>]) -> Vec<R> {
    let mut theta = model.from_internal(eta);
    for (k, f) in fixed.iter().enumerate() {
        if let Some(v) = f {
            theta[k] = *v;
        }
    }
    theta
}

#[allow(clippy::too_many_arguments)]
fn newton_drive<R: Real>(
    model: &dyn HazardModel<R>,
    sample: &SurvivalSample<R>,
    start: Vec<R>,
    fixed: &[Option<R>],
    warnings: Vec<String>,
) -> Result<FitResult<R>> {
    let p = model.dim();
    let max_iter = 100usize;
    let max_halvings = 30usize;
    let tol = R::of(1e-8);

    let objective = |eta: &[R]| -> R {
        let theta = apply_mask(model, eta, fixed);
        if !model.admissible(&theta) {
            return R::neg_infinity();
        }
        log_likelihood_unchecked(model, &theta, sample)
    };

    let mut eta = model.to_internal(&start);
    let mut ll = objective(&eta);
    let mut iterations = 0usize;
    let mut converged = false;
    let mut grad = internal_gradient(model, sample, &eta, fixed);

    for iter in 0..max_iter {
        iterations = iter;
        let gmax = grad.iter().fold(R::zero(), |a, &g| a.max(g.abs()));
        if gmax < tol * ll.abs().max(R::one()) {
            converged = true;
            break;
        }
        // Hessian of the log-likelihood by central differences of the
        // analytic gradient.
        let mut hess = SymMat::zeros(p);
        for j in 0..p {
            if fixed[j].is_some() {
                hess.set(j, j, -R::one());
                continue;
            }
            let h = R::of(1e-5) * eta[j].abs().max(R::one());
            let mut up = eta.clone();
            let mut dn = eta.clone();
            up[j] += h;
            dn[j] -= h;
            let gu = internal_gradient(model, sample, &up, fixed);
            let gd = internal_gradient(model, sample, &dn, fixed);
            for i in 0..=j {
                let v = (gu[i] - gd[i]) / (R::two() * h);
                let prev = hess.get(i, j);
                if prev == R::zero() || i == j {
                    hess.set(i, j, v);
                } else {
                    hess.set(i, j, (prev + v) * R::half());
                }
            }
            for i in (j + 1)..p {
                let v = (gu[i] - gd[i]) / (R::two() * h);
                hess.set(j, i, v);
            }
        }
        // maximize: step solves (−H) d = g
        let mut neg_h = hess;
        neg_h.scale(-R::one());
        let step = match solve_damped(&neg_h, &grad) {
            Some(d) => d,
            None => break,
        };
        let mut lambda = R::one();
        let mut accepted = false;
        for _ in 0..max_halvings {
            let trial: Vec<R> = eta
                .iter()
                .zip(step.iter())
                .map(|(&e, &d)| e + lambda * d)
                .collect();
            if trial.iter().any(|x| x.abs() > R::of(35.0)) {
                lambda = lambda * R::half();
                continue;
            }
            let trial_ll = objective(&trial);
            if trial_ll.is_finite() && trial_ll > ll - R::of(1e-13) * ll.abs().max(R::one()) {
                eta = trial;
                ll = trial_ll;
                accepted = true;
                break;
            }
            lambda = lambda * R::half();
        }
        if !accepted {
            break;
        }
        grad = internal_gradient(model, sample, &eta, fixed);
    }
    if !converged {
        let gmax = grad.iter().fold(R::zero(), |a, &g| a.max(g.abs()));
        converged = gmax < tol * ll.abs().max(R::one());
    }
    if eta.iter().any(|x| x.abs() > R::of(34.0)) {
        return Err(NlhError::DegenerateFit(
            "parameter escaped to the boundary; likelihood appears unbounded".into(),
        ));
    }

    let theta = apply_mask(model, &eta, fixed);
    let gmax = grad.iter().fold(R::zero(), |a, &g| a.max(g.abs()));
    finalize_fit(
        model,
        sample,
        theta,
        ll,
        iterations,
        converged,
        vec![gmax],
        warnings,
    )
}

#[allow(clippy::too_many_arguments)]
fn finalize_fit<R: Real>(
    model: &dyn HazardModel<R>,
    sample: &SurvivalSample<R>,
    theta: Vec<R>,
    loglik: R,
    iterations: usize,
    converged: bool,
    grad: Vec<R>,
    warnings: Vec<String>,
) -> Result<FitResult<R>> {
    let sigma_pm = sigma_parametric(model, &theta, sample);
    let sigma_np = sigma_nonparametric(model, &theta, sample);
    let flavor = if model.has_closed_form_variance() {
        VarianceFlavor::Parametric
    } else {
        VarianceFlavor::Nonparametric
    };
    let sigma = match flavor {
        VarianceFlavor::Parametric => &sigma_pm,
        VarianceFlavor::Nonparametric => &sigma_np,
    };
    let mut cov = sigma.inverse().ok_or(NlhError::SingularInformation)?;
    cov.scale(R::one() / R::of_usize(sample.n()));
    let std_errors = cov.diag().iter().map(|&v| v.max(R::zero()).sqrt()).collect();
    let grad_norm = grad.iter().fold(R::zero(), |a, &g| a.max(g.abs()));
    Ok(FitResult {
        model: model.name(),
        param_names: model.param_names(),
        theta,
        loglik,
        sigma_pm,
        sigma_np,
        cov,
        cov_flavor: flavor,
        std_errors,
        iterations,
        converged,
        grad_norm,
        warnings,
    })
}

/// Profile-likelihood fit for the proportional class h = θ h₀(s, β):
/// θ̂(β) = N(τ)/Σ_j {H₀(t_j, β) − H₀(v_j, β)} closed-form, and a
/// golden-section search with parabolic refinement over the scalar β.
pub fn fit_profile<R: Real>(
    model: &ProportionalModel<R>,
    sample: &SurvivalSample<R>,
) -> Result<FitResult<R>> {
    let events = sample.event_count();
    if events == 0 {
        return Err(NlhError::NoEvents);
    }
    let baseline = model.baseline().clone();
    let base_dim = baseline.dim();
    if base_dim > 1 {
        return Err(NlhError::DegenerateFit(
            "profile search requires a scalar shape parameter".into(),
        ));
    }

    // degenerate: all events tied at a single time
    let mut event_times: Vec<R> = sample
        .subjects()
        .iter()
        .filter(|s| s.status && s.exit_time <= sample.tau())
        .map(|s| s.exit_time)
        .collect();
    event_times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if base_dim == 1 && event_times.first() == event_times.last() {
        return Err(NlhError::DegenerateFit(
            "all events tie at a single time; the shape direction is unbounded".into(),
        ));
    }

    let n_events = R::of_usize(events);
    let theta_of_beta = |beta: &[R]| -> R {
        let exposure: R = sample
            .subjects()
            .iter()
            .filter(|s| s.entry_time < sample.tau())
            .map(|s| {
                let (exit, _) = sample.effective_exit(s);
                baseline.cum_h0(exit, beta)
                    - if s.entry_time > R::zero() {
                        baseline.cum_h0(s.entry_time, beta)
                    } else {
                        R::zero()
                    }
            })
            .sum();
        n_events / exposure
    };

    if base_dim == 0 {
        let theta = vec![theta_of_beta(&[])];
        let ll = log_likelihood_unchecked(model, &theta, sample);
        return finalize_fit(model, sample, theta, ll, 0, true, vec![R::zero()], Vec::new());
    }

    let profile = |eta_beta: R| -> R {
        let beta = baseline.from_internal(&[eta_beta]);
        if !baseline.admissible(&beta) {
            return R::neg_infinity();
        }
        let theta = theta_of_beta(&beta);
        if !(theta > R::zero()) || !theta.is_finite() {
            return R::neg_infinity();
        }
        let params = [theta, beta[0]];
        log_likelihood_unchecked(model, &params, sample)
    };

    // coarse bracket over the internal shape coordinate, then golden section
    let grid: Vec<R> = (-15..=15).map(|k| R::of(k as f64 * 0.25)).collect();
    let mut best = 0usize;
    let mut best_val = R::neg_infinity();
    for (i, &x) in grid.iter().enumerate() {
        let v = profile(x);
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(grid.len() - 1)];
    if lo == hi {
        lo = lo - R::one();
        hi = hi + R::one();
    }
    let phi = R::of(0.618_033_988_749_894_8);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = profile(x1);
    let mut f2 = profile(x2);
    for _ in 0..90 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = profile(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = profile(x1);
        }
        if (hi - lo).abs() < R::of(1e-12) {
            break;
        }
    }
    let mut eta_beta = if f1 > f2 { x1 } else { x2 };
    // one parabolic polish step through three nearby points
    let h = R::of(1e-6);
    let (fm, f0, fp) = (
        profile(eta_beta - h),
        profile(eta_beta),
        profile(eta_beta + h),
    );
    let denom = fm - R::two() * f0 + fp;
    if denom < R::zero() {
        let shift = (fm - fp) / (R::two() * denom) * h;
        if shift.abs() < R::one() && profile(eta_beta + shift) >= f0 {
            eta_beta = eta_beta + shift;
        }
    }

    let beta = baseline.from_internal(&[eta_beta]);
    let theta = theta_of_beta(&beta);
    let params = vec![theta, beta[0]];
    let ll = log_likelihood_unchecked(model, &params, sample);
    let g = score_vector(model, &params, sample);
    let gmax = g.iter().fold(R::zero(), |a, &x| a.max(x.abs()));
    finalize_fit(model, sample, params, ll, 0, true, vec![gmax], Vec::new())
}

/// A windowed fit: estimates using only `[a, b]`-information, plus the
/// window information matrix Σ_[a,b] = J_w (for the indicator weight the
/// second moment K_w coincides with J_w).
#[derive(Debug, Clone)]
pub struct WindowFit<R> {
    pub fit: FitResult<R>,
    pub window: WeightWindow<R>,
    pub j_w: SymMat<R>,
    pub k_w: SymMat<R>,
}

/// Maximum weighted likelihood with the indicator weight of `[a, b]`: events
/// inside the window, exposure truncated to it.
pub fn fit_window<R: Real>(
    model: &dyn HazardModel<R>,
    sample: &SurvivalSample<R>,
    window: WeightWindow<R>,
) -> Result<WindowFit<R>> {
    let restricted = restrict_sample(sample, window)?;
    let mut fit = fit_ml(model, &restricted, None)?;
    fit.model = model.name();
    // J_w = n⁻¹ Σ_j ∫ over the windowed exposure of ψψᵀ h ds, with the
    // ORIGINAL sample size n
    let scale = R::of_usize(restricted.n()) / R::of_usize(sample.n());
    let mut j_w = sigma_parametric(model, &fit.theta, &restricted);
    j_w.scale(scale);
    let k_w = j_w.clone();
    Ok(WindowFit {
        fit,
        window,
        j_w,
        k_w,
    })
}

/// Clip a sample to the window: subjects contribute exposure on
/// (max(v, a), min(t, b)] and events only when a < t ≤ b.
fn restrict_sample<R: Real>(
    sample: &SurvivalSample<R>,
    window: WeightWindow<R>,
) -> Result<SurvivalSample<R>> {
    let (a, b) = (window.a, window.b);
    let mut subjects = Vec::new();
    for s in sample.subjects() {
        let (exit, status) = sample.effective_exit(s);
        let lo = s.entry_time.max(a);
        let hi = exit.min(b);
        if hi <= lo {
            continue;
        }
        let in_window = exit > a && exit <= b;
        subjects.push(crate::data::Subject {
            exit_time: hi,
            status: status && in_window,
            entry_time: lo,
            covariates: s.covariates.clone(),
        });
    }
    if subjects.is_empty() || !subjects.iter().any(|s| s.status) {
        return Err(NlhError::InvalidWindow {
            a: a.to_f64().unwrap_or(f64::NAN),
            b: b.to_f64().unwrap_or(f64::NAN),
        });
    }
    SurvivalSample::with_tau(subjects, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Subject;
    use crate::models::{Exponential, Gompertz, SimpleFrailty, Weibull};
    use approx::assert_relative_eq;

    fn sample(times: &[f64], status: &[bool]) -> SurvivalSample<f64> {
        SurvivalSample::from_times(times, status).unwrap()
    }

    #[test]
    fn log_likelihood_hand_values() {
        let s = sample(&[1.0, 2.0, 3.0], &[true; 3]);
        let ll = log_likelihood(&Exponential, &[0.5], &s).unwrap();
        assert_relative_eq!(ll, 3.0 * 0.5f64.ln() - 0.5 * 6.0, max_relative = 1e-14);

        // adding a censored subject at t = 2 subtracts 0.5·2
        let s2 = sample(&[1.0, 2.0, 3.0, 2.0], &[true, true, true, false]);
        let ll2 = log_likelihood(&Exponential, &[0.5], &s2).unwrap();
        assert_relative_eq!(ll2, ll - 1.0, max_relative = 1e-13);

        // delayed entry v = 1, exit 2, event, θ = 1
        let s3 = SurvivalSample::new(vec![Subject::with_entry(2.0, true, 1.0)]).unwrap();
        let ll3 = log_likelihood(&Exponential, &[1.0], &s3).unwrap();
        assert_relative_eq!(ll3, -1.0, max_relative = 1e-14);
    }

    #[test]
    fn inadmissible_parameters_error_rather_than_clamp() {
        let s = sample(&[1.0], &[true]);
        assert!(log_likelihood(&Exponential, &[-1.0], &s).is_err());
        assert!(log_likelihood(&Weibull, &[1.0, 0.0], &s).is_err());
    }

    #[test]
    fn exponential_closed_form_fit() {
        let s = sample(&[1.0, 2.0, 3.0], &[true; 3]);
        let f = fit_ml(&Exponential, &s, None).unwrap();
        assert_relative_eq!(f.theta[0], 0.5, max_relative = 1e-15);
        // σ̂² = n⁻¹(Σt)²/Σδ = 4 = 1/θ̂² for uncensored data
        assert_relative_eq!(f.sigma_pm.get(0, 0), 4.0, max_relative = 1e-13);
        assert_relative_eq!(f.sigma_np.get(0, 0), 4.0, max_relative = 1e-13);
        assert_relative_eq!(f.sigma_pm.get(0, 0), 1.0 / (0.5f64 * 0.5), max_relative = 1e-13);
        assert!(f.converged);

        let s = sample(&[1.0, 2.0, 3.0], &[true, false, true]);
        let f = fit_ml(&Exponential, &s, None).unwrap();
        assert_relative_eq!(f.theta[0], 2.0 / 6.0, max_relative = 1e-15);
        // both Σ̂ flavors agree for the constant-rate model
        assert_relative_eq!(
            f.sigma_pm.get(0, 0),
            f.sigma_np.get(0, 0),
            max_relative = 1e-12
        );
        assert_relative_eq!(f.sigma_pm.get(0, 0), 36.0 / 3.0 / 2.0, max_relative = 1e-13);
    }

    #[test]
    fn weibull_sigma_hand_data() {
        // t = [1, 2], θ̂ = 1, β̂ = 1: Σ̂₁₁ = (1 + 2)/2 = 1.5
        let s = sample(&[1.0, 2.0], &[true, true]);
        let m = sigma_parametric(&Weibull, &[1.0, 1.0], &s);
        assert_relative_eq!(m.get(0, 0), 1.5, max_relative = 1e-13);
    }

    #[test]
    fn gompertz_info_quadrature_cross_check() {
        let s = sample(&[0.4, 1.1, 2.3, 0.9], &[true, true, false, true]);
        let theta = [0.8, 0.4];
        let closed = sigma_parametric(&Gompertz, &theta, &s);
        let quad = {
            let mut out = SymMat::zeros(2);
            for su in s.subjects() {
                out.add_assign(&crate::models::info_integral_by_quadrature(
                    &Gompertz,
                    su.exit_time,
                    &theta,
                ));
            }
            out.scale(0.25);
            out
        };
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(closed.get(i, j), quad.get(i, j), max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn score_is_zero_at_the_optimum() {
        let s = sample(
            &[0.3, 0.7, 1.2, 1.9, 2.5, 0.4, 1.1, 0.8, 2.2, 1.6],
            &[true, true, false, true, true, true, false, true, true, true],
        );
        let f = fit_ml(&Weibull, &s, None).unwrap();
        assert!(f.converged);
        let g = score_vector(&Weibull, &f.theta, &s);
        for gi in g {
            assert!(gi.abs() < 1e-6 * s.n() as f64, "score {gi} too large");
        }
    }

    #[test]
    fn profile_and_joint_newton_agree() {
        let s = sample(
            &[0.31, 0.74, 1.21, 1.93, 2.52, 0.44, 1.13, 0.82, 2.24, 1.61, 0.55, 3.01],
            &[
                true, true, false, true, true, true, false, true, true, true, true, true,
            ],
        );
        let joint = fit_ml(&Weibull, &s, None).unwrap();
        let prof = fit_profile(&crate::models::ProportionalModel::weibull(), &s).unwrap();
        assert_relative_eq!(joint.theta[0], prof.theta[0], max_relative = 1e-5);
        assert_relative_eq!(joint.theta[1], prof.theta[1], max_relative = 1e-5);
    }

    #[test]
    fn profile_detects_tied_event_degeneracy() {
        let s = sample(&[1.0, 1.0, 1.0, 2.0], &[true, true, true, false]);
        let err = fit_profile(&crate::models::ProportionalModel::weibull(), &s).unwrap_err();
        assert!(matches!(err, NlhError::DegenerateFit(_)));
    }

    #[test]
    fn single_event_weibull_is_degenerate() {
        let s = sample(&[1.0, 2.0], &[true, false]);
        let err = fit_ml(&Weibull, &s, None).unwrap_err();
        assert!(matches!(err, NlhError::DegenerateFit(_)));
    }

    #[test]
    fn windowed_constant_hazard_closed_form() {
        // events at 1, 2, 3, window [1.5, 3]: θ̃ = 2/(2·0.5 + 1·1) = 1
        let s = sample(&[1.0, 2.0, 3.0], &[true; 3]);
        let w = fit_window(&Exponential, &s, WeightWindow::new(1.5, 3.0).unwrap()).unwrap();
        assert_relative_eq!(w.fit.theta[0], 1.0, max_relative = 1e-14);
        // K_w = J_w for the indicator weight
        assert_relative_eq!(
            w.j_w.get(0, 0),
            w.k_w.get(0, 0),
            max_relative = 1e-15
        );
    }

    #[test]
    fn full_window_reproduces_the_plain_fit() {
        let s = sample(&[0.4, 1.0, 2.0, 3.0], &[true, true, false, true]);
        let plain = fit_ml(&Exponential, &s, None).unwrap();
        let w = fit_window(&Exponential, &s, WeightWindow::new(0.0, 3.0).unwrap()).unwrap();
        assert_relative_eq!(plain.theta[0], w.fit.theta[0], max_relative = 1e-14);
    }

    #[test]
    fn reparametrization_invariance_of_the_optimum() {
        let s = sample(
            &[0.3, 0.7, 1.2, 1.9, 2.5, 0.4, 1.1, 0.8, 2.2, 1.6, 0.9, 1.4],
            &[true; 12],
        );
        let a = fit_ml(&Weibull, &s, Some(vec![0.3, 0.6])).unwrap();
        let b = fit_ml(&Weibull, &s, Some(vec![2.0, 1.8])).unwrap();
        assert_relative_eq!(a.theta[0], b.theta[0], max_relative = 1e-6);
        assert_relative_eq!(a.theta[1], b.theta[1], max_relative = 1e-6);
    }

    #[test]
    fn frailty_fit_runs_inside_expanded_region() {
        let s = sample(
            &[0.2, 0.5, 0.9, 1.5, 2.4, 3.4, 0.7, 1.1, 1.8, 2.9],
            &[true; 10],
        );
        let m = SimpleFrailty::for_sample(&s);
        let f = fit_ml(&m, &s, None).unwrap();
        assert!(f.converged);
        assert!(f.theta[1] > -m.beta_floor());
    }
}
