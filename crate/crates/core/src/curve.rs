//! Normalised local hazard curves: for a fitted model, D_n(t) compares the
//! Nelson–Aalen increments with the model's, κ̂(t) estimates the local
//! standard deviation, and NLH = D_n/κ̂ is approximately standard normal at
//! each event time when the model holds.
//!
//! Every variance estimate here has the form
//! S_uu(t) − S_uv(t)ᵀ Σ̂⁻¹ S_uv(t) with all three pieces accumulated against
//! the same plug-in measure, which keeps κ̂² nonnegative up to roundoff (a
//! generalized Cauchy–Schwarz inequality).

use std::sync::Arc;

use crate::data::{build_risk_path, RiskPath, SurvivalSample};
use crate::error::{NlhError, Result};
use crate::fit::{FitResult, VarianceFlavor, WindowFit};
use crate::linalg::{Cholesky, SymMat};
use crate::models::{FixedModel, HazardModel};
use crate::quad::{adaptive_simpson, gauss_legendre_16};
use crate::real::Real;

/// Relative floor under which κ̂ is considered numerically zero and the NLH
/// value undefined: κ̂ ≤ 1e-8·√(leading term).
const KAPPA_FLOOR_REL: f64 = 1e-8;

/// A deterministic Type C weight: its value, and exact antiderivatives of G
/// and G² when available (required for the parametric variance flavor).
pub struct DeterministicWeight<R> {
    pub value: Box<dyn Fn(R) -> R + Send + Sync>,
    /// Exact ∫_a^b G(s) ds.
    pub integral: Option<Box<dyn Fn(R, R) -> R + Send + Sync>>,
    /// Exact ∫_a^b G(s)² ds.
    pub square_integral: Option<Box<dyn Fn(R, R) -> R + Send + Sync>>,
}

impl<R: Real> DeterministicWeight<R> {
    /// G ≡ 1; Type C with this weight reproduces Type B.
    pub fn unit() -> Self {
        DeterministicWeight {
            value: Box::new(|_| R::one()),
            integral: Some(Box::new(|a, b| b - a)),
            square_integral: Some(Box::new(|a, b| b - a)),
        }
    }
}

/// Weight function G_n for Type C plots.
pub enum GWeight<R> {
    /// G(s) = log s − φ̂, the tailor-made weight against Weibull departures
    /// from the constant rate; φ̂ = ∫Y log s ds / ∫Y ds.
    LogMinusPhiHat,
    /// G(s) = 1 − θ̂s, the optimal weight against gamma-frailty departures
    /// from the constant rate.
    OneMinusThetaS,
    /// A supplied deterministic weight.
    Deterministic(Arc<DeterministicWeight<R>>),
    /// The optimal weight against a neighbouring family with extension score
    /// φ(s, θ): G(s) = φ(s,θ̂) − ψ(s,θ̂)ᵀ Σ̂_pm⁻¹ ∫₀^τ ŷ φ ψ h du.
    OptimalAgainst(Arc<dyn Fn(R, &[R]) -> R + Send + Sync>),
}

impl<R: Real> GWeight<R> {
    fn label(&self) -> &'static str {
        match self {
            GWeight::LogMinusPhiHat => "log",
            GWeight::OneMinusThetaS => "frailty",
            GWeight::Deterministic(_) => "deterministic",
            GWeight::OptimalAgainst(_) => "optimal",
        }
    }
}

/// Plot type: the weight K_n(s) in the hazard comparison integral.
pub enum PlotType<R> {
    /// K_n = 1: cumulative-hazard comparison.
    A,
    /// K_n = Y/n: observed versus expected event counts.
    B,
    /// K_n = (Y/n)·G_n: directional weights.
    C(GWeight<R>),
}

impl<R: Real> PlotType<R> {
    pub fn label(&self) -> String {
        match self {
            PlotType::A => "A".into(),
            PlotType::B => "B".into(),
            PlotType::C(w) => format!("C[{}]", w.label()),
        }
    }
}

/// Curve metadata carried along with the numbers.
#[derive(Debug, Clone)]
pub struct CurveMeta<R> {
    pub model: String,
    pub theta: Vec<R>,
    pub plot_type: String,
    pub flavor: VarianceFlavor,
    /// Set when the parametric flavor was requested but had to fall back to
    /// the nonparametric one (no exact antiderivatives for the weight).
    pub flavor_auto_switched: bool,
    pub window: Option<(R, R)>,
    pub band_level: R,
    pub n: usize,
}

/// A normalised local hazard curve evaluated at the event times in scope.
#[derive(Debug, Clone)]
pub struct NlhCurve<R> {
    pub times: Vec<R>,
    pub d_n: Vec<R>,
    /// κ̂ after flooring at zero.
    pub kappa: Vec<R>,
    /// Raw κ̂² before flooring; may be a tiny negative from roundoff.
    pub kappa_sq: Vec<R>,
    /// D_n/κ̂ where defined, NaN elsewhere.
    pub nlh: Vec<R>,
    pub defined: Vec<bool>,
    pub meta: CurveMeta<R>,
}

impl<R: Real> NlhCurve<R> {
    /// Linear interpolation of the NLH values across defined points
    /// (curves are computed at event times and interpolated for display).
    pub fn interp(&self, t: R) -> Option<R> {
        let pts: Vec<(R, R)> = self
            .times
            .iter()
            .zip(self.nlh.iter())
            .zip(self.defined.iter())
            .filter(|&(_, &d)| d)
            .map(|((&u, &v), _)| (u, v))
            .collect();
        if pts.is_empty() || t < pts[0].0 || t > pts[pts.len() - 1].0 {
            return None;
        }
        let k = pts.partition_point(|&(u, _)| u <= t);
        if k == 0 {
            return Some(pts[0].1);
        }
        if k == pts.len() {
            return Some(pts[pts.len() - 1].1);
        }
        let (u0, v0) = pts[k - 1];
        let (u1, v1) = pts[k];
        if u1 == u0 {
            return Some(v0);
        }
        Some(v0 + (v1 - v0) * (t - u0) / (u1 - u0))
    }

    /// Maximum |NLH| over defined points with a ≤ t ≤ b.
    pub fn max_abs_between(&self, a: R, b: R) -> Option<R> {
        let mut best: Option<R> = None;
        for i in 0..self.times.len() {
            if self.defined[i] && self.times[i] >= a && self.times[i] <= b {
                let v = self.nlh[i].abs();
                best = Some(best.map_or(v, |m: R| m.max(v)));
            }
        }
        best
    }
}

struct ResolvedWeight<'a, R> {
    value: Box<dyn Fn(R) -> R + 'a>,
    integral: Option<Box<dyn Fn(R, R) -> R + 'a>>,
    square_integral: Option<Box<dyn Fn(R, R) -> R + 'a>>,
}

/// φ̂ = ∫₀^τ Y log s ds / ∫₀^τ Y ds, by exact gap antiderivatives.
pub fn log_weight_centering<R: Real>(path: &RiskPath<R>) -> R {
    let anti = |s: R| {
        if s <= R::zero() {
            R::zero()
        } else {
            s * s.ln() - s
        }
    };
    let mut num = R::zero();
    let mut den = R::zero();
    for seg in path.segments() {
        let y = R::of(seg.at_risk as f64);
        num += y * (anti(seg.end) - anti(seg.start));
        den += y * (seg.end - seg.start);
    }
    num / den
}

fn resolve_weight<'a, R: Real>(
    weight: &'a GWeight<R>,
    model: &'a dyn HazardModel<R>,
    theta: &'a [R],
    path: &RiskPath<R>,
    sigma_pm: &SymMat<R>,
) -> Result<ResolvedWeight<'a, R>> {
    match weight {
        GWeight::LogMinusPhiHat => {
            let phi_hat = log_weight_centering(path);
            let anti = move |s: R| {
                if s <= R::zero() {
                    R::zero()
                } else {
                    s * s.ln() - s - phi_hat * s
                }
            };
            let anti_sq = move |s: R| {
                if s <= R::zero() {
                    R::zero()
                } else {
                    let l = s.ln();
                    s * l * l - R::two() * s * l + R::two() * s
                        - R::two() * phi_hat * (s * l - s)
                        + phi_hat * phi_hat * s
                }
            };
            Ok(ResolvedWeight {
                value: Box::new(move |s: R| s.ln() - phi_hat),
                integral: Some(Box::new(move |a, b| anti(b) - anti(a))),
                square_integral: Some(Box::new(move |a, b| anti_sq(b) - anti_sq(a))),
            })
        }
        GWeight::OneMinusThetaS => {
            let rate = theta[0];
            Ok(ResolvedWeight {
                value: Box::new(move |s: R| R::one() - rate * s),
                integral: Some(Box::new(move |a, b| {
                    (b - a) - rate * (b * b - a * a) * R::half()
                })),
                square_integral: Some(Box::new(move |a, b| {
                    (b - a) - rate * (b * b - a * a)
                        + rate * rate * (b * b * b - a * a * a) / R::of(3.0)
                })),
            })
        }
        GWeight::Deterministic(w) => {
            let w = Arc::clone(w);
            let w2 = Arc::clone(&w);
            let w3 = Arc::clone(&w);
            Ok(ResolvedWeight {
                value: Box::new(move |s| (w.value)(s)),
                integral: if w2.integral.is_some() {
                    Some(Box::new(move |a, b| (w2.integral.as_ref().unwrap())(a, b)))
                } else {
                    None
                },
                square_integral: if w3.square_integral.is_some() {
                    Some(Box::new(move |a, b| {
                        (w3.square_integral.as_ref().unwrap())(a, b)
                    }))
                } else {
                    None
                },
            })
        }
        GWeight::OptimalAgainst(phi) => {
            // c = ∫₀^τ ŷ φ ψ h du over the at-risk segments
            let p = model.dim();
            let n = R::of_usize(path.n());
            let mut c = vec![R::zero(); p];
            for seg in path.segments() {
                if seg.at_risk == 0 {
                    continue;
                }
                let y = R::of(seg.at_risk as f64) / n;
                for k in 0..p {
                    let f = |s: R| {
                        phi(s, theta) * model.score(s, theta)[k] * model.hazard(s, theta)
                    };
                    let lo = seg.start.max(seg.end * R::of(1e-12));
                    c[k] += y * gauss_legendre_16(&f, lo, seg.end);
                }
            }
            let corr = sigma_pm
                .cholesky()
                .ok_or(NlhError::SingularInformation)?
                .solve(&c);
            let phi = Arc::clone(phi);
            Ok(ResolvedWeight {
                value: Box::new(move |s: R| {
                    let psi = model.score(s, theta);
                    let mut dot = R::zero();
                    for k in 0..psi.len() {
                        dot += psi[k] * corr[k];
                    }
                    phi(s, theta) - dot
                }),
                integral: None,
                square_integral: None,
            })
        }
    }
}

/// ∫_a^b G(s) h(s,θ) ds on one gap: exact when the model has constant rate
/// and the weight an antiderivative, numeric otherwise.
fn gap_weight_hazard<R: Real>(
    model: &dyn HazardModel<R>,
    theta: &[R],
    w: &ResolvedWeight<R>,
    a: R,
    b: R,
) -> R {
    if let (Some(rate), Some(int)) = (model.constant_rate(theta), w.integral.as_ref()) {
        return rate * int(a, b);
    }
    let f = |s: R| (w.value)(s) * model.hazard(s, theta);
    let lo = a.max(b * R::of(1e-12));
    let rough = gauss_legendre_16(&f, lo, b).abs();
    adaptive_simpson(&f, lo, b, (rough + R::one()) * R::of(1e-12))
}

enum Kind<'a, R> {
    A,
    B,
    C(ResolvedWeight<'a, R>),
}

struct EngineInput<'a, R> {
    model: &'a dyn HazardModel<R>,
    theta: &'a [R],
    path: &'a RiskPath<R>,
    /// Sample size for the √n scalings (the original n for windowed curves).
    n: usize,
    /// Flavor-consistent information estimate over the full window.
    sigma: Option<&'a SymMat<R>>,
    flavor: VarianceFlavor,
    /// Lower limit of all integrals (window start; 0 for plain curves).
    start: R,
}

/// Shared accumulation engine for all curve types and flavors.
fn build_curve<R: Real>(input: EngineInput<R>, kind: Kind<R>, meta: CurveMeta<R>) -> Result<NlhCurve<R>> {
    let EngineInput {
        model,
        theta,
        path,
        n,
        sigma,
        flavor,
        start,
    } = input;
    let p = model.dim();
    let nf = R::of_usize(n);
    let sqrt_n = nf.sqrt();
    let chol: Option<Cholesky<R>> = match sigma {
        Some(s) => Some(s.cholesky().ok_or(NlhError::SingularInformation)?),
        None => None,
    };

    let m = path.event_times().len();
    let mut times = Vec::with_capacity(m);
    let mut d_out = Vec::with_capacity(m);
    let mut kappa_sq_out = Vec::with_capacity(m);
    let mut leading_out = Vec::with_capacity(m);

    let mut d = R::zero();
    let mut s_uu = R::zero();
    let mut s_uv = vec![R::zero(); p];
    let mut ev = 0usize;

    for seg in path.segments() {
        if ev >= m {
            break;
        }
        let a = seg.start.max(start);
        let b = seg.end;
        if b <= start {
            continue;
        }
        let y = R::of(seg.at_risk as f64);
        if b > a {
            // drift and parametric variance pieces over the gap (a, b]
            let dh = model.cum_hazard(b, theta) - model.cum_hazard(a, theta);
            match &kind {
                Kind::A => {
                    d -= sqrt_n * dh;
                    if flavor == VarianceFlavor::Parametric {
                        if seg.at_risk > 0 {
                            s_uu += nf / y * dh;
                        } else if dh > R::zero() {
                            s_uu = R::infinity();
                        }
                        let hs_b = model.cum_score(b, theta);
                        let hs_a = model.cum_score(a, theta);
                        for k in 0..p {
                            s_uv[k] += hs_b[k] - hs_a[k];
                        }
                    }
                }
                Kind::B => {
                    d -= y / sqrt_n * dh;
                    if flavor == VarianceFlavor::Parametric {
                        s_uu += y / nf * dh;
                        let hs_b = model.cum_score(b, theta);
                        let hs_a = model.cum_score(a, theta);
                        for k in 0..p {
                            s_uv[k] += y / nf * (hs_b[k] - hs_a[k]);
                        }
                    }
                }
                Kind::C(w) => {
                    if seg.at_risk > 0 {
                        let gh = gap_weight_hazard(model, theta, w, a, b);
                        d -= y / sqrt_n * gh;
                        if flavor == VarianceFlavor::Parametric {
                            // exact-only path; resolve_flavor() has verified this
                            let rate = model.constant_rate(theta).expect("checked");
                            let g2 = (w.square_integral.as_ref().expect("checked"))(a, b);
                            s_uu += y / nf * rate * g2;
                            // ∫ G ψ h = ψ·θ·∫G with constant ψ = 1/θ
                            let g1 = (w.integral.as_ref().expect("checked"))(a, b);
                            if p > 0 {
                                s_uv[0] += y / nf * g1;
                            }
                        }
                    }
                }
            }
        }
        // event point at the right end of the segment
        if ev < m && path.event_times()[ev] == seg.end {
            let u = seg.end;
            let dn = R::of(path.events()[ev] as f64);
            let y_ev = R::of(path.at_risk()[ev] as f64);
            match &kind {
                Kind::A => {
                    d += sqrt_n * dn / y_ev;
                    if flavor == VarianceFlavor::Nonparametric {
                        s_uu += nf * dn / (y_ev * y_ev);
                        let psi = model.score(u, theta);
                        for k in 0..p {
                            s_uv[k] += psi[k] * dn / y_ev;
                        }
                    }
                }
                Kind::B => {
                    d += dn / sqrt_n;
                    if flavor == VarianceFlavor::Nonparametric {
                        s_uu += dn / nf;
                        let psi = model.score(u, theta);
                        for k in 0..p {
                            s_uv[k] += psi[k] * dn / nf;
                        }
                    }
                }
                Kind::C(w) => {
                    let g = (w.value)(u);
                    d += g * dn / sqrt_n;
                    if flavor == VarianceFlavor::Nonparametric {
                        s_uu += g * g * dn / nf;
                        let psi = model.score(u, theta);
                        for k in 0..p {
                            s_uv[k] += g * psi[k] * dn / nf;
                        }
                    }
                }
            }
            let correction = match &chol {
                Some(ch) if p > 0 => ch.quad_form_inv(&s_uv),
                _ => R::zero(),
            };
            times.push(u);
            d_out.push(d);
            kappa_sq_out.push(s_uu - correction);
            leading_out.push(s_uu);
            ev += 1;
        }
    }

    // floor and definedness: κ̂ must clear 1e-8·√(leading term)
    let mut kappa = Vec::with_capacity(m);
    let mut nlh = Vec::with_capacity(m);
    let mut defined = Vec::with_capacity(m);
    for (i, &ks) in kappa_sq_out.iter().enumerate() {
        let floor_sq = R::of(KAPPA_FLOOR_REL * KAPPA_FLOOR_REL) * leading_out[i].abs();
        let ok = ks.is_finite() && ks > floor_sq && ks > R::zero();
        let k = if ks > R::zero() && ks.is_finite() {
            ks.sqrt()
        } else {
            R::zero()
        };
        kappa.push(k);
        defined.push(ok);
        nlh.push(if ok { d_out[i] / k } else { R::nan() });
    }

    Ok(NlhCurve {
        times,
        d_n: d_out,
        kappa,
        kappa_sq: kappa_sq_out,
        nlh,
        defined,
        meta,
    })
}

fn require_converged<R: Real>(fit: &FitResult<R>) -> Result<()> {
    if !fit.converged {
        return Err(NlhError::DegenerateFit(
            "curve construction requires a converged fit".into(),
        ));
    }
    Ok(())
}

/// Default flavor: parametric when the model has closed-form variance
/// integrals, nonparametric otherwise.
pub fn default_flavor<R: Real>(model: &dyn HazardModel<R>) -> VarianceFlavor {
    if model.has_closed_form_variance() {
        VarianceFlavor::Parametric
    } else {
        VarianceFlavor::Nonparametric
    }
}

/// NLH curve of the requested type for a fitted model.
pub fn curve<R: Real>(
    model: &dyn HazardModel<R>,
    fit: &FitResult<R>,
    sample: &SurvivalSample<R>,
    plot: PlotType<R>,
    flavor: Option<VarianceFlavor>,
) -> Result<NlhCurve<R>> {
    require_converged(fit)?;
    let path = build_risk_path(sample)?;
    curve_on_path(model, &fit.theta, fit, &path, plot, flavor, None)
}

/// Type A curve: D_n = √n{Ĥ(t) − H(t, θ̂)}.
pub fn curve_type_a<R: Real>(
    model: &dyn HazardModel<R>,
    fit: &FitResult<R>,
    sample: &SurvivalSample<R>,
    flavor: Option<VarianceFlavor>,
) -> Result<NlhCurve<R>> {
    curve(model, fit, sample, PlotType::A, flavor)
}

/// Type B curve: D_n = n^{-1/2}{N(t) − Σ_j (H(t_j∧t) − H(v_j∧t))}.
pub fn curve_type_b<R: Real>(
    model: &dyn HazardModel<R>,
    fit: &FitResult<R>,
    sample: &SurvivalSample<R>,
    flavor: Option<VarianceFlavor>,
) -> Result<NlhCurve<R>> {
    curve(model, fit, sample, PlotType::B, flavor)
}

/// Type C curve with weight G_n.
pub fn curve_type_c<R: Real>(
    model: &dyn HazardModel<R>,
    fit: &FitResult<R>,
    sample: &SurvivalSample<R>,
    weight: GWeight<R>,
) -> Result<NlhCurve<R>> {
    curve(model, fit, sample, PlotType::C(weight), None)
}

fn curve_on_path<R: Real>(
    model: &dyn HazardModel<R>,
    theta: &[R],
    fit: &FitResult<R>,
    path: &RiskPath<R>,
    plot: PlotType<R>,
    flavor: Option<VarianceFlavor>,
    window: Option<(R, R, &SymMat<R>, usize)>,
) -> Result<NlhCurve<R>> {
    let requested = flavor.unwrap_or_else(|| default_flavor(model));
    let plot_label = plot.label();

    // the parametric flavor for Type C needs exact gap antiderivatives of
    // G·h and G²·h; otherwise fall back to the nonparametric flavor
    let (kind, eff_flavor, switched) = match plot {
        PlotType::A => (Kind::A, requested, false),
        PlotType::B => (Kind::B, requested, false),
        PlotType::C(ref w) => {
            let resolved = resolve_weight(w, model, theta, path, &fit.sigma_pm)?;
            let exact_ok = model.constant_rate(theta).is_some()
                && resolved.integral.is_some()
                && resolved.square_integral.is_some();
            let f = if requested == VarianceFlavor::Parametric && !exact_ok {
                VarianceFlavor::Nonparametric
            } else {
                requested
            };
            (Kind::C(resolved), f, f != requested)
        }
    };

    let sigma = match eff_flavor {
        VarianceFlavor::Parametric => &fit.sigma_pm,
        VarianceFlavor::Nonparametric => &fit.sigma_np,
    };
    let (start, sigma_ref, n) = match window {
        Some((a, _b, s, n0)) => (a, s, n0),
        None => (R::zero(), sigma, path.n()),
    };

    let meta = CurveMeta {
        model: model.name(),
        theta: theta.to_vec(),
        plot_type: plot_label,
        flavor: eff_flavor,
        flavor_auto_switched: switched,
        window: window.map(|(a, b, _, _)| (a, b)),
        band_level: R::of(1.96),
        n,
    };
    build_curve(
        EngineInput {
            model,
            theta,
            path,
            n,
            sigma: if model.dim() > 0 { Some(sigma_ref) } else { None },
            flavor: eff_flavor,
            start,
        },
        kind,
        meta,
    )
}

/// Curve against a fully specified hazard: the Σ̂-correction term is absent
/// and the limit is time-transformed normalised Brownian motion.
pub fn curve_fixed<R: Real>(
    model: &FixedModel<R>,
    sample: &SurvivalSample<R>,
    plot: PlotType<R>,
    flavor: Option<VarianceFlavor>,
) -> Result<NlhCurve<R>> {
    let path = build_risk_path(sample)?;
    let requested = flavor.unwrap_or(VarianceFlavor::Parametric);
    let plot_label = plot.label();
    let kind = match plot {
        PlotType::A => Kind::A,
        PlotType::B => Kind::B,
        PlotType::C(ref w) => Kind::C(resolve_weight(
            w,
            model,
            &[],
            &path,
            &SymMat::zeros(0),
        )?),
    };
    // Type C parametric against a fixed hazard still needs exact square
    // integrals; fall back when absent
    let eff_flavor = match (&kind, requested) {
        (Kind::C(w), VarianceFlavor::Parametric)
            if HazardModel::<R>::constant_rate(model, &[]).is_none()
                || w.square_integral.is_none() =>
        {
            VarianceFlavor::Nonparametric
        }
        _ => requested,
    };
    let meta = CurveMeta {
        model: model.name(),
        theta: Vec::new(),
        plot_type: plot_label,
        flavor: eff_flavor,
        flavor_auto_switched: eff_flavor != requested,
        window: None,
        band_level: R::of(1.96),
        n: path.n(),
    };
    build_curve(
        EngineInput {
            model,
            theta: &[],
            path: &path,
            n: path.n(),
            sigma: None,
            flavor: eff_flavor,
            start: R::zero(),
        },
        kind,
        meta,
    )
}

/// Windowed curve on `[a, b]`: integrals start at `a`, the correction uses
/// Σ_[a,b] from the windowed fit, and points are the event times inside the
/// window.
pub fn curve_windowed<R: Real>(
    model: &dyn HazardModel<R>,
    wfit: &WindowFit<R>,
    sample: &SurvivalSample<R>,
    plot: PlotType<R>,
) -> Result<NlhCurve<R>> {
    require_converged(&wfit.fit)?;
    let (a, b) = (wfit.window.a, wfit.window.b);
    // clip subjects to the window so the risk path covers (a, b] exactly
    let mut clipped = Vec::new();
    for s in sample.subjects() {
        let (exit, status) = sample.effective_exit(s);
        let lo = s.entry_time.max(a);
        let hi = exit.min(b);
        if hi <= lo {
            continue;
        }
        clipped.push(crate::data::Subject {
            exit_time: hi,
            status: status && exit > a && exit <= b,
            entry_time: lo,
            covariates: Vec::new(),
        });
    }
    let restricted = SurvivalSample::with_tau(clipped, b)?;
    let path = build_risk_path(&restricted)?;
    curve_on_path(
        model,
        &wfit.fit.theta,
        &wfit.fit,
        &path,
        plot,
        Some(VarianceFlavor::Parametric),
        Some((a, b, &wfit.j_w, sample.n())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::SurvivalSample;
    use crate::fit::{fit_ml, fit_window, WeightWindow};
    use crate::models::Exponential;
    use approx::assert_relative_eq;

    fn sample(times: &[f64], status: &[bool]) -> SurvivalSample<f64> {
        SurvivalSample::from_times(times, status).unwrap()
    }

    fn demo_sample() -> SurvivalSample<f64> {
        sample(
            &[0.31, 0.74, 1.21, 1.93, 2.52, 0.44, 1.13, 0.82, 2.24, 1.61],
            &[true, true, false, true, true, true, false, true, true, true],
        )
    }

    #[test]
    fn type_b_vanishes_at_the_end_for_the_ml_fit() {
        let s = demo_sample();
        let f = fit_ml(&Exponential, &s, None).unwrap();
        let c = curve_type_b(&Exponential, &f, &s, None).unwrap();
        let last = *c.d_n.last().unwrap();
        assert!(last.abs() < 1e-10 * (s.n() as f64).sqrt(), "D_B(τ) = {last}");
    }

    #[test]
    fn type_c_with_unit_weight_equals_type_b() {
        let s = demo_sample();
        let f = fit_ml(&Exponential, &s, None).unwrap();
        let b = curve_type_b(&Exponential, &f, &s, Some(VarianceFlavor::Parametric)).unwrap();
        let c = curve_type_c(
            &Exponential,
            &f,
            &s,
            GWeight::Deterministic(Arc::new(DeterministicWeight::unit())),
        )
        .unwrap();
        for i in 0..b.times.len() {
            assert_relative_eq!(b.d_n[i], c.d_n[i], max_relative = 1e-12, epsilon = 1e-12);
            assert_relative_eq!(
                b.kappa_sq[i],
                c.kappa_sq[i],
                max_relative = 1e-12,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn log_weight_centering_value() {
        // times {1, e}: φ̂ = (Σ t ln t − t)/Σ t = −1/(1 + e)
        let s = sample(&[1.0, std::f64::consts::E], &[true, true]);
        let path = build_risk_path(&s).unwrap();
        let phi = log_weight_centering(&path);
        assert_relative_eq!(
            phi,
            -1.0 / (1.0 + std::f64::consts::E),
            max_relative = 1e-13
        );
    }

    #[test]
    fn fixed_model_single_event_hand_computation() {
        // one subject, event at 0.5, h0 = 1: D(0.5) = 1/1 − 0.5 = 0.5,
        // κ² = 0.5, NLH = 0.5/√0.5
        let s = sample(&[0.5], &[true]);
        let m = FixedModel::constant(1.0);
        let c = curve_fixed(&m, &s, PlotType::A, None).unwrap();
        assert_relative_eq!(c.d_n[0], 0.5, max_relative = 1e-13);
        assert_relative_eq!(c.kappa_sq[0], 0.5, max_relative = 1e-13);
        assert_relative_eq!(c.nlh[0], 0.5 / 0.5f64.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn windowed_full_range_matches_plain_curve() {
        let s = demo_sample();
        let f = fit_ml(&Exponential, &s, None).unwrap();
        let plain = curve_type_a(&Exponential, &f, &s, Some(VarianceFlavor::Parametric)).unwrap();
        let wf = fit_window(&Exponential, &s, WeightWindow::new(0.0, s.tau()).unwrap()).unwrap();
        let win = curve_windowed(&Exponential, &wf, &s, PlotType::A).unwrap();
        assert_eq!(plain.times.len(), win.times.len());
        for i in 0..plain.times.len() {
            assert_relative_eq!(plain.d_n[i], win.d_n[i], max_relative = 1e-10, epsilon = 1e-12);
            assert_relative_eq!(
                plain.kappa_sq[i],
                win.kappa_sq[i],
                max_relative = 1e-10,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn exponential_type_a_matches_the_explicit_display() {
        // κ̂_A²(t) = θ̂{∫₀ᵗ n/Y ds − (n/N)θ̂ t²} for the constant model
        let s = demo_sample();
        let f = fit_ml(&Exponential, &s, None).unwrap();
        let th = f.theta[0];
        let path = build_risk_path(&s).unwrap();
        let c = curve_type_a(&Exponential, &f, &s, Some(VarianceFlavor::Parametric)).unwrap();
        let n = s.n() as f64;
        let events: f64 = path.events().iter().sum::<u32>() as f64;
        for (i, &t) in c.times.iter().enumerate() {
            let inv_y =
                crate::data::step_integral(&path, |a, b, y| (b - a) * n / y as f64, t).unwrap();
            let expect = th * (inv_y - n / events * th * t * t);
            assert_relative_eq!(c.kappa_sq[i], expect, max_relative = 1e-10, epsilon = 1e-12);
        }
    }
}
