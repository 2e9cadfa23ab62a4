//! Fully specified hazard (p = 0): compare a sample against an established
//! norm h₀ rather than a fitted family.

use std::sync::Arc;

use crate::data::SurvivalSample;
use crate::error::{NlhError, Result};
use crate::linalg::SymMat;
use crate::real::Real;

use super::HazardModel;

type HazardFn<R> = Arc<dyn Fn(R) -> R + Send + Sync>;

enum Inner<R> {
    Analytic { hazard: HazardFn<R>, cum: HazardFn<R> },
    /// (t, H₀(t)) pairs; H₀ linearly interpolated, hazard piecewise constant.
    Table { times: Vec<R>, cum: Vec<R> },
}

/// A fixed hazard with no free parameters.
pub struct FixedModel<R> {
    inner: Inner<R>,
}

impl<R: Real> FixedModel<R> {
    /// From a hazard and its exact antiderivative (cumulative hazard).
    pub fn from_fns(
        hazard: impl Fn(R) -> R + Send + Sync + 'static,
        cum: impl Fn(R) -> R + Send + Sync + 'static,
    ) -> Self {
        FixedModel {
            inner: Inner::Analytic {
                hazard: Arc::new(hazard),
                cum: Arc::new(cum),
            },
        }
    }

    /// Constant rate h₀.
    pub fn constant(rate: R) -> Self {
        Self::from_fns(move |_| rate, move |t| rate * t)
    }

    /// A previously fitted model frozen at its estimate.
    pub fn from_fitted(model: Arc<dyn HazardModel<R>>, theta: Vec<R>) -> Self {
        let m2 = Arc::clone(&model);
        let t2 = theta.clone();
        Self::from_fns(
            move |s| model.hazard(s, &theta),
            move |t| m2.cum_hazard(t, &t2),
        )
    }

    /// From tabulated (t, H₀(t)) pairs with strictly increasing times and
    /// nondecreasing H₀. An implicit (0, 0) anchor is added when absent;
    /// beyond the last point H₀ continues with the final slope.
    pub fn from_table(mut times: Vec<R>, mut cum: Vec<R>) -> Result<Self> {
        if times.len() != cum.len() || times.is_empty() {
            return Err(NlhError::Parse(
                "fixed-hazard table needs matching, nonempty time/value columns".into(),
            ));
        }
        if times[0] > R::zero() {
            times.insert(0, R::zero());
            cum.insert(0, R::zero());
        }
        let increasing = times.windows(2).all(|w| w[0] < w[1]);
        let monotone = cum.windows(2).all(|w| w[0] <= w[1]);
        if !increasing || !monotone || times[0] < R::zero() {
            return Err(NlhError::Parse(
                "fixed-hazard table must have increasing times and nondecreasing H0".into(),
            ));
        }
        Ok(FixedModel {
            inner: Inner::Table { times, cum },
        })
    }
}

fn table_cum<R: Real>(times: &[R], cum: &[R], t: R) -> R {
    if t <= times[0] || times.len() == 1 {
        return cum[0];
    }
    let k = times.partition_point(|&x| x < t).min(times.len() - 1);
    let (i, j) = (k - 1, k);
    let slope = (cum[j] - cum[i]) / (times[j] - times[i]);
    if t >= *times.last().unwrap() {
        let last = times.len() - 1;
        let slope_end = if last >= 1 {
            (cum[last] - cum[last - 1]) / (times[last] - times[last - 1])
        } else {
            R::zero()
        };
        return cum[last] + slope_end * (t - times[last]);
    }
    cum[i] + slope * (t - times[i])
}

impl<R: Real> HazardModel<R> for FixedModel<R> {
    fn name(&self) -> String {
        "fixed".into()
    }

    fn dim(&self) -> usize {
        0
    }

    fn param_names(&self) -> Vec<String> {
        Vec::new()
    }

    fn admissible(&self, theta: &[R]) -> bool {
        theta.is_empty()
    }

    fn hazard(&self, s: R, _theta: &[R]) -> R {
        match &self.inner {
            Inner::Analytic { hazard, .. } => hazard(s),
            Inner::Table { times, cum } => {
                let eps = R::of(1e-9) * (R::one() + s.abs());
                (table_cum(times, cum, s + eps) - table_cum(times, cum, s - eps))
                    / (R::two() * eps)
            }
        }
    }

    fn cum_hazard(&self, t: R, _theta: &[R]) -> R {
        if t <= R::zero() {
            return R::zero();
        }
        match &self.inner {
            Inner::Analytic { cum, .. } => cum(t),
            Inner::Table { times, cum } => table_cum(times, cum, t),
        }
    }

    fn score(&self, _s: R, _theta: &[R]) -> Vec<R> {
        Vec::new()
    }

    fn cum_score(&self, _t: R, _theta: &[R]) -> Vec<R> {
        Vec::new()
    }

    fn has_closed_form_variance(&self) -> bool {
        true
    }

    fn info_integral(&self, _t: R, _theta: &[R]) -> SymMat<R> {
        SymMat::zeros(0)
    }

    fn to_internal(&self, _theta: &[R]) -> Vec<R> {
        Vec::new()
    }

    fn from_internal(&self, _eta: &[R]) -> Vec<R> {
        Vec::new()
    }

    fn initial_params(&self, _sample: &SurvivalSample<R>) -> Vec<R> {
        Vec::new()
    }
}
