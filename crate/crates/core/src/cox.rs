//! Parametric Cox regression with constant baseline: subject j has hazard
//! θ·exp(βᵀz_j). The log-likelihood is concave in (log θ, β), the information
//! blocks are explicit, and Types A and B of the NLH construction carry over
//! with covariate-weighted risk averages.

use crate::curve::{CurveMeta, NlhCurve};
use crate::data::{build_risk_path, RiskPath, SurvivalSample};
use crate::error::{NlhError, Result};
use crate::fit::VarianceFlavor;
use crate::linalg::SymMat;
use crate::real::Real;

/// Fitted parametric Cox model with constant baseline.
#[derive(Debug, Clone)]
pub struct CoxFit<R> {
    /// Baseline rate θ̂ > 0.
    pub theta: R,
    /// Covariate coefficients β̂.
    pub beta: Vec<R>,
    /// Information estimate assembled from the block displays.
    pub sigma: SymMat<R>,
    /// Σ̂⁻¹/n.
    pub cov: SymMat<R>,
    pub std_errors: Vec<R>,
    pub loglik: R,
    pub iterations: usize,
    pub converged: bool,
    pub grad_norm: R,
}

/// Indices with nonzero diagonal information, and the corresponding
/// submatrix. Coordinates outside the set carry no information at all.
fn active_submatrix<R: Real>(sigma: &SymMat<R>) -> (Vec<usize>, SymMat<R>) {
    let active: Vec<usize> = (0..sigma.dim())
        .filter(|&i| sigma.get(i, i) > R::zero())
        .collect();
    let mut sub = SymMat::zeros(active.len());
    for (ai, &i) in active.iter().enumerate() {
        for (aj, &j) in active.iter().enumerate() {
            if aj >= ai {
                sub.set(ai, aj, sigma.get(i, j));
            }
        }
    }
    (active, sub)
}

fn exposures<R: Real>(sample: &SurvivalSample<R>) -> Vec<(R, bool, R)> {
    // (exposure, status, entry) with exits capped at tau
    sample
        .subjects()
        .iter()
        .filter(|s| s.entry_time < sample.tau())
        .map(|s| {
            let (exit, status) = sample.effective_exit(s);
            (exit - s.entry_time, status, s.entry_time)
        })
        .collect()
}

/// Maximum likelihood for the constant-baseline Cox model, by Newton
/// iteration on (log θ, β); this is the log-linear event-count fit with
/// exposure offsets.
pub fn fit_cox_exponential<R: Real>(sample: &SurvivalSample<R>) -> Result<CoxFit<R>> {
    let pz = sample.covariate_dim();
    if pz == 0 {
        return Err(NlhError::MissingCovariates);
    }
    if sample.event_count() == 0 {
        return Err(NlhError::NoEvents);
    }
    let n = sample.n();
    let p = 1 + pz;
    let exps = exposures(sample);

    // design rows x_j = (1, z_j), weights w_j = exposure
    let features: Vec<Vec<R>> = sample
        .subjects()
        .iter()
        .filter(|s| s.entry_time < sample.tau())
        .map(|s| {
            let mut x = Vec::with_capacity(p);
            x.push(R::one());
            x.extend_from_slice(&s.covariates);
            x
        })
        .collect();

    let events = R::of_usize(sample.event_count());
    let total_exposure: R = exps.iter().map(|&(w, _, _)| w).sum();
    let mut coef = vec![R::zero(); p];
    coef[0] = (events / total_exposure).ln();

    let loglik = |c: &[R]| -> R {
        features
            .iter()
            .zip(exps.iter())
            .map(|(x, &(w, status, _))| {
                let lin: R = x.iter().zip(c.iter()).map(|(&a, &b)| a * b).sum();
                let mut v = -lin.exp() * w;
                if status {
                    v += lin;
                }
                v
            })
            .sum()
    };

    let mut ll = loglik(&coef);
    let mut converged = false;
    let mut iterations = 0;
    let mut grad_norm = R::zero();
    for iter in 0..60 {
        iterations = iter;
        let mut g = vec![R::zero(); p];
        let mut h = SymMat::zeros(p);
        for (x, &(w, status, _)) in features.iter().zip(exps.iter()) {
            let lin: R = x.iter().zip(coef.iter()).map(|(&a, &b)| a * b).sum();
            let mu = lin.exp() * w;
            for i in 0..p {
                g[i] += (if status { x[i] } else { R::zero() }) - mu * x[i];
            }
            h.add_scaled_outer(x, mu);
        }
        grad_norm = g.iter().fold(R::zero(), |a, &v| a.max(v.abs()));
        if grad_norm < R::of(1e-11) * ll.abs().max(R::one()) {
            converged = true;
            break;
        }
        // a damped solve survives flat directions (constant covariates);
        // true separation shows up as non-convergence diagnostics
        let step = match crate::linalg::solve_damped(&h, &g) {
            Some(d) => d,
            None => break,
        };
        let mut lambda = R::one();
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<R> = coef
                .iter()
                .zip(step.iter())
                .map(|(&c, &d)| c + lambda * d)
                .collect();
            let t_ll = loglik(&trial);
            if t_ll.is_finite() && t_ll >= ll - R::of(1e-14) * ll.abs().max(R::one()) {
                coef = trial;
                ll = t_ll;
                accepted = true;
                break;
            }
            lambda = lambda * R::half();
        }
        if !accepted {
            break;
        }
    }

    let theta = coef[0].exp();
    let beta = coef[1..].to_vec();

    // §4 information blocks with exposures
    let mut sigma = SymMat::zeros(p);
    let nf = R::of_usize(n);
    for (x, &(w, _, _)) in features.iter().zip(exps.iter()) {
        let zb: R = x[1..]
            .iter()
            .zip(beta.iter())
            .map(|(&a, &b)| a * b)
            .sum();
        let e = zb.exp() * w;
        sigma.add_at(0, 0, e / theta);
        for i in 0..pz {
            sigma.add_at(0, 1 + i, x[1 + i] * e);
            for j in i..pz {
                let v = theta * x[1 + i] * x[1 + j] * e;
                sigma.add_at(1 + i, 1 + j, v);
            }
        }
    }
    sigma.scale(R::one() / nf);

    // Invert over the informative coordinates only: a covariate with no
    // variation contributes an exactly-zero block (its direction carries no
    // information and infinite standard error), which happens in the
    // reduction to the covariate-free exponential model.
    let (active, sub) = active_submatrix(&sigma);
    let sub_inv = sub.inverse().ok_or(NlhError::SingularInformation)?;
    let mut cov = SymMat::zeros(p);
    for (ai, &i) in active.iter().enumerate() {
        for (aj, &j) in active.iter().enumerate() {
            if j >= i {
                cov.set(i, j, sub_inv.get(ai, aj) / nf);
            }
        }
    }
    let std_errors = (0..p)
        .map(|i| {
            if active.contains(&i) {
                cov.get(i, i).max(R::zero()).sqrt()
            } else {
                R::infinity()
            }
        })
        .collect();

    Ok(CoxFit {
        theta,
        beta,
        sigma,
        cov,
        std_errors,
        loglik: ll,
        iterations,
        converged,
        grad_norm,
    })
}

/// Piecewise-constant covariate-weighted risk averages over the at-risk
/// segments: R(s,β) = n⁻¹ΣY_j e^{βᵀz_j}, R₁ = n⁻¹ΣY_j z_j e^{βᵀz_j}, and
/// E = R₁/R, a convex combination of the covariates at risk.
pub struct RiskAverages<R> {
    /// Per risk-path segment.
    pub r0: Vec<R>,
    pub r1: Vec<Vec<R>>,
}

pub fn risk_averages<R: Real>(
    sample: &SurvivalSample<R>,
    path: &RiskPath<R>,
    beta: &[R],
) -> RiskAverages<R> {
    let n = R::of_usize(sample.n());
    let pz = sample.covariate_dim();
    let mut r0 = Vec::with_capacity(path.segments().len());
    let mut r1 = Vec::with_capacity(path.segments().len());
    for seg in path.segments() {
        let mut s0 = R::zero();
        let mut s1 = vec![R::zero(); pz];
        for s in sample.subjects() {
            let (exit, _) = sample.effective_exit(s);
            if exit >= seg.end && s.entry_time <= seg.start {
                let zb: R = s
                    .covariates
                    .iter()
                    .zip(beta.iter())
                    .map(|(&a, &b)| a * b)
                    .sum();
                let e = zb.exp();
                s0 += e;
                for k in 0..pz {
                    s1[k] += s.covariates[k] * e;
                }
            }
        }
        r0.push(s0 / n);
        r1.push(s1.into_iter().map(|v| v / n).collect());
    }
    RiskAverages { r0, r1 }
}

enum CoxKind {
    A,
    B,
}

fn cox_curve<R: Real>(
    fit: &CoxFit<R>,
    sample: &SurvivalSample<R>,
    kind: CoxKind,
) -> Result<NlhCurve<R>> {
    if !fit.converged {
        return Err(NlhError::DegenerateFit(
            "curve construction requires a converged fit".into(),
        ));
    }
    let path = build_risk_path(sample)?;
    let averages = risk_averages(sample, &path, &fit.beta);
    let n = path.n();
    let nf = R::of_usize(n);
    let sqrt_n = nf.sqrt();
    let theta = fit.theta;
    let pz = sample.covariate_dim();
    let p = 1 + pz;
    let (active, sub) = active_submatrix(&fit.sigma);
    let chol = sub.cholesky().ok_or(NlhError::SingularInformation)?;
    let quad = |c: &[R]| -> R {
        let sub_c: Vec<R> = active.iter().map(|&i| c[i]).collect();
        chol.quad_form_inv(&sub_c)
    };

    let m = path.event_times().len();
    let mut times = Vec::with_capacity(m);
    let mut d_out = Vec::with_capacity(m);
    let mut kappa_sq_out = Vec::with_capacity(m);
    let mut leading = Vec::with_capacity(m);

    let mut d = R::zero();
    let mut s_uu = R::zero();
    let mut c_vec = vec![R::zero(); p];
    let mut ev = 0usize;

    for (si, seg) in path.segments().iter().enumerate() {
        if ev >= m {
            break;
        }
        let dt = seg.end - seg.start;
        let r = averages.r0[si];
        match kind {
            CoxKind::A => {
                // D −= √n θ̂ dt;  S_uu += θ̂/R dt;  C = (t, ∫E θ̂ ds)
                d -= sqrt_n * theta * dt;
                if r > R::zero() {
                    s_uu += theta / r * dt;
                    c_vec[0] += dt;
                    for k in 0..pz {
                        c_vec[1 + k] += averages.r1[si][k] / r * theta * dt;
                    }
                } else {
                    c_vec[0] += dt;
                }
            }
            CoxKind::B => {
                d -= sqrt_n * r * theta * dt;
                s_uu += r * theta * dt;
                c_vec[0] += r * dt;
                for k in 0..pz {
                    c_vec[1 + k] += averages.r1[si][k] * theta * dt;
                }
            }
        }
        if path.event_times()[ev] == seg.end {
            let dn = R::of(path.events()[ev] as f64);
            match kind {
                CoxKind::A => {
                    // dĤ = dN / (n R)
                    if r > R::zero() {
                        d += sqrt_n * dn / (nf * r);
                    }
                }
                CoxKind::B => {
                    d += dn / sqrt_n;
                }
            }
            times.push(seg.end);
            d_out.push(d);
            kappa_sq_out.push(s_uu - quad(&c_vec));
            leading.push(s_uu);
            ev += 1;
        }
    }

    let mut kappa = Vec::with_capacity(m);
    let mut nlh = Vec::with_capacity(m);
    let mut defined = Vec::with_capacity(m);
    for (i, &ks) in kappa_sq_out.iter().enumerate() {
        let floor_sq = R::of(1e-16) * leading[i].abs();
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

    let mut theta_all = vec![fit.theta];
    theta_all.extend_from_slice(&fit.beta);
    Ok(NlhCurve {
        times,
        d_n: d_out,
        kappa,
        kappa_sq: kappa_sq_out,
        nlh,
        defined,
        meta: CurveMeta {
            model: "cox-exponential".into(),
            theta: theta_all,
            plot_type: match kind {
                CoxKind::A => "A".into(),
                CoxKind::B => "B".into(),
            },
            flavor: VarianceFlavor::Parametric,
            flavor_auto_switched: false,
            window: None,
            band_level: R::of(1.96),
            n,
        },
    })
}

/// Type A curve from the covariate-adjusted Nelson–Aalen estimate
/// Ĥ(t) = ∫ dN / Σ Y_j e^{β̂ᵀz_j} against the constant baseline θ̂t.
pub fn cox_curve_type_a<R: Real>(
    fit: &CoxFit<R>,
    sample: &SurvivalSample<R>,
) -> Result<NlhCurve<R>> {
    cox_curve(fit, sample, CoxKind::A)
}

/// Type B curve: observed versus expected event counts under the regression
/// model.
pub fn cox_curve_type_b<R: Real>(
    fit: &CoxFit<R>,
    sample: &SurvivalSample<R>,
) -> Result<NlhCurve<R>> {
    cox_curve(fit, sample, CoxKind::B)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Subject;
    use crate::fit::fit_ml;
    use crate::models::Exponential;
    use approx::assert_relative_eq;

    fn two_group_sample() -> SurvivalSample<f64> {
        // group z = 0: two events, exposure 2; group z = 1: two events, exposure 1
        SurvivalSample::new(vec![
            Subject::with_covariates(1.0, true, vec![0.0]),
            Subject::with_covariates(1.0, true, vec![0.0]),
            Subject::with_covariates(0.5, true, vec![1.0]),
            Subject::with_covariates(0.5, true, vec![1.0]),
        ])
        .unwrap()
    }

    #[test]
    fn binary_covariate_closed_form() {
        let f = fit_cox_exponential(&two_group_sample()).unwrap();
        assert!(f.converged);
        assert_relative_eq!(f.theta, 1.0, epsilon = 1e-10);
        assert_relative_eq!(f.beta[0], 2.0f64.ln(), epsilon = 1e-10);
    }

    #[test]
    fn zero_covariates_reduce_to_the_plain_exponential() {
        let times = [0.4, 1.0, 2.0, 3.0, 0.7];
        let status = [true, true, false, true, true];
        let subjects: Vec<Subject<f64>> = times
            .iter()
            .zip(status.iter())
            .map(|(&t, &d)| Subject::with_covariates(t, d, vec![0.0]))
            .collect();
        let s = SurvivalSample::new(subjects).unwrap();
        let f = fit_cox_exponential(&s).unwrap();
        let plain = SurvivalSample::from_times(&times, &status).unwrap();
        let e = fit_ml(&Exponential, &plain, None).unwrap();
        assert_relative_eq!(f.theta, e.theta[0], max_relative = 1e-9);

        // with β̂ ≈ 0 the cox curves equal the homogeneous exponential curves
        let ca = cox_curve_type_a(&f, &s).unwrap();
        let ea = crate::curve::curve_type_a(
            &Exponential,
            &e,
            &plain,
            Some(VarianceFlavor::Parametric),
        )
        .unwrap();
        for i in 0..ca.times.len() {
            assert_relative_eq!(ca.d_n[i], ea.d_n[i], max_relative = 1e-7, epsilon = 1e-9);
            assert_relative_eq!(
                ca.kappa_sq[i],
                ea.kappa_sq[i],
                max_relative = 1e-6,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn type_b_score_identity_at_the_end() {
        let s = two_group_sample();
        let f = fit_cox_exponential(&s).unwrap();
        let c = cox_curve_type_b(&f, &s).unwrap();
        assert!(c.d_n.last().unwrap().abs() < 1e-9);
    }

    #[test]
    fn sigma_matches_negative_hessian() {
        // Σ̂ blocks equal n⁻¹·(−Hessian) at the optimum for this model
        let s = SurvivalSample::new(vec![
            Subject::with_covariates(0.9, true, vec![0.0, 1.0]),
            Subject::with_covariates(1.7, true, vec![1.0, 0.0]),
            Subject::with_covariates(2.3, false, vec![1.0, 1.0]),
            Subject::with_covariates(0.6, true, vec![0.0, 0.0]),
            Subject::with_covariates(1.1, true, vec![0.5, 0.2]),
        ])
        .unwrap();
        let f = fit_cox_exponential(&s).unwrap();
        // finite-difference Hessian of ℓ wrt (θ, β), scaled by −1/n
        let n = s.n() as f64;
        let ll = |theta: f64, beta: &[f64]| -> f64 {
            s.subjects()
                .iter()
                .map(|su| {
                    let zb: f64 = su
                        .covariates
                        .iter()
                        .zip(beta.iter())
                        .map(|(&a, &b)| a * b)
                        .sum();
                    let lin = theta.ln() + zb;
                    (if su.status { lin } else { 0.0 }) - lin.exp() * su.exit_time
                })
                .sum()
        };
        let p = 3;
        let x0 = [f.theta, f.beta[0], f.beta[1]];
        let eval = |x: &[f64]| ll(x[0], &x[1..]);
        let h = 1e-5;
        for i in 0..p {
            for j in 0..p {
                let mut xpp = x0.to_vec();
                let mut xpm = x0.to_vec();
                let mut xmp = x0.to_vec();
                let mut xmm = x0.to_vec();
                xpp[i] += h;
                xpp[j] += h;
                xpm[i] += h;
                xpm[j] -= h;
                xmp[i] -= h;
                xmp[j] += h;
                xmm[i] -= h;
                xmm[j] -= h;
                let hij =
                    (eval(&xpp) - eval(&xpm) - eval(&xmp) + eval(&xmm)) / (4.0 * h * h);
                assert_relative_eq!(
                    f.sigma.get(i, j),
                    -hij / n,
                    max_relative = 2e-4,
                    epsilon = 1e-7
                );
            }
        }
    }

    #[test]
    fn risk_average_is_in_the_covariate_hull() {
        let s = two_group_sample();
        let path = build_risk_path(&s).unwrap();
        let f = fit_cox_exponential(&s).unwrap();
        let av = risk_averages(&s, &path, &f.beta);
        for (i, seg) in path.segments().iter().enumerate() {
            if seg.at_risk > 0 {
                let e = av.r1[i][0] / av.r0[i];
                assert!((0.0..=1.0).contains(&e));
            }
        }
    }
}
