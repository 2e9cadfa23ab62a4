//! Censored/truncated survival samples, risk paths, step-function integrals,
//! Nelson–Aalen estimation, kernel hazard smoothing, and grouping to
//! time-discrete tables.
//!
//! All types are immutable after construction and safe to share across
//! threads; queries never mutate.

use serde::{Deserialize, Serialize};

use crate::error::{NlhError, Result};
use crate::real::Real;

/// One subject: exit time, event indicator, optional delayed entry, optional
/// covariates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subject<R> {
    pub exit_time: R,
    /// `true` = event observed, `false` = right-censored.
    pub status: bool,
    /// Delayed-entry (left-truncation) time; 0 for the classical case.
    pub entry_time: R,
    /// Fixed covariate vector; empty when the study has none.
    pub covariates: Vec<R>,
}

impl<R: Real> Subject<R> {
    pub fn new(exit_time: R, status: bool) -> Self {
        Subject {
            exit_time,
            status,
            entry_time: R::zero(),
            covariates: Vec::new(),
        }
    }

    pub fn with_entry(exit_time: R, status: bool, entry_time: R) -> Self {
        Subject {
            exit_time,
            status,
            entry_time,
            covariates: Vec::new(),
        }
    }

    pub fn with_covariates(exit_time: R, status: bool, covariates: Vec<R>) -> Self {
        Subject {
            exit_time,
            status,
            entry_time: R::zero(),
            covariates,
        }
    }
}

/// A validated sample of subjects observed over the window `(0, tau]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurvivalSample<R> {
    subjects: Vec<Subject<R>>,
    tau: R,
    covariate_dim: usize,
}

impl<R: Real> SurvivalSample<R> {
    /// Build a sample with `tau` = the largest exit time.
    pub fn new(subjects: Vec<Subject<R>>) -> Result<Self> {
        let tau = subjects
            .iter()
            .map(|s| s.exit_time)
            .fold(R::zero(), R::max);
        Self::with_tau(subjects, tau)
    }

    pub fn with_tau(subjects: Vec<Subject<R>>, tau: R) -> Result<Self> {
        if subjects.is_empty() {
            return Err(NlhError::EmptySample);
        }
        if !(tau > R::zero()) || !tau.is_finite() {
            return Err(NlhError::InvalidWindowEnd);
        }
        let covariate_dim = subjects[0].covariates.len();
        for (index, s) in subjects.iter().enumerate() {
            let ok = s.exit_time.is_finite()
                && s.entry_time.is_finite()
                && s.entry_time >= R::zero()
                && s.exit_time > s.entry_time;
            if !ok {
                return Err(NlhError::InvalidSubjectTimes {
                    index,
                    entry: s.entry_time.to_f64().unwrap_or(f64::NAN),
                    exit: s.exit_time.to_f64().unwrap_or(f64::NAN),
                });
            }
            if s.covariates.len() != covariate_dim {
                return Err(NlhError::CovariateDimensionMismatch {
                    index,
                    expected: covariate_dim,
                    got: s.covariates.len(),
                });
            }
        }
        Ok(SurvivalSample {
            subjects,
            tau,
            covariate_dim,
        })
    }

    pub fn from_times(times: &[R], status: &[bool]) -> Result<Self> {
        assert_eq!(times.len(), status.len());
        Self::new(
            times
                .iter()
                .zip(status.iter())
                .map(|(&t, &d)| Subject::new(t, d))
                .collect(),
        )
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.subjects.len()
    }

    #[inline]
    pub fn tau(&self) -> R {
        self.tau
    }

    #[inline]
    pub fn subjects(&self) -> &[Subject<R>] {
        &self.subjects
    }

    #[inline]
    pub fn covariate_dim(&self) -> usize {
        self.covariate_dim
    }

    /// Exit capped at tau; an event exactly at tau is kept (closed window),
    /// everything beyond tau is treated as censored at tau.
    pub fn effective_exit(&self, s: &Subject<R>) -> (R, bool) {
        if s.exit_time <= self.tau {
            (s.exit_time, s.status)
        } else {
            (self.tau, false)
        }
    }

    pub fn event_count(&self) -> usize {
        self.subjects
            .iter()
            .filter(|s| s.status && s.exit_time <= self.tau)
            .count()
    }

    /// Total time at risk Σ (exit − entry), capped at tau.
    pub fn total_exposure(&self) -> R {
        self.subjects
            .iter()
            .filter(|s| s.entry_time < self.tau)
            .map(|s| s.exit_time.min(self.tau) - s.entry_time)
            .sum()
    }

    pub fn max_exit(&self) -> R {
        self.subjects
            .iter()
            .map(|s| s.exit_time)
            .fold(R::zero(), R::max)
    }
}

/// A maximal interval `(start, end]` on which the at-risk count is constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<R> {
    pub start: R,
    pub end: R,
    pub at_risk: u32,
}

/// The discretized counting/at-risk processes of a sample: distinct event
/// times with at-risk and event counts, plus the full piecewise-constant
/// at-risk trajectory over `(0, tau]`.
#[derive(Debug, Clone)]
pub struct RiskPath<R> {
    n: usize,
    tau: R,
    event_times: Vec<R>,
    at_risk: Vec<u32>,
    events: Vec<u32>,
    segments: Vec<Segment<R>>,
}

impl<R: Real> RiskPath<R> {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn tau(&self) -> R {
        self.tau
    }

    /// Distinct event times u_1 < … < u_m.
    #[inline]
    pub fn event_times(&self) -> &[R] {
        &self.event_times
    }

    /// Y(u_i), evaluated left-continuously.
    #[inline]
    pub fn at_risk(&self) -> &[u32] {
        &self.at_risk
    }

    /// ΔN(u_i) ≥ 1.
    #[inline]
    pub fn events(&self) -> &[u32] {
        &self.events
    }

    /// Piecewise-constant at-risk segments covering `(0, tau]`.
    #[inline]
    pub fn segments(&self) -> &[Segment<R>] {
        &self.segments
    }

    pub fn total_events(&self) -> u32 {
        self.events.iter().sum()
    }

    /// Y(t), left-continuous: the at-risk count just before `t`.
    pub fn at_risk_at(&self, t: R) -> u32 {
        for seg in &self.segments {
            if t > seg.start && t <= seg.end {
                return seg.at_risk;
            }
        }
        0
    }
}

/// Build the risk path of a sample: Y(u) = #{j : exit_j ≥ u > entry_j},
/// ΔN(u) = #{j : exit_j = u, status_j = 1}; tied event times merge into one
/// knot with summed ΔN.
pub fn build_risk_path<R: Real>(sample: &SurvivalSample<R>) -> Result<RiskPath<R>> {
    let tau = sample.tau();
    let mut exits: Vec<(R, bool)> = Vec::with_capacity(sample.n());
    let mut entries: Vec<R> = Vec::new();
    for s in sample.subjects() {
        if s.entry_time >= tau {
            continue;
        }
        exits.push(sample.effective_exit(s));
        if s.entry_time > R::zero() {
            entries.push(s.entry_time);
        }
    }
    if exits.is_empty() {
        return Err(NlhError::EmptySample);
    }

    // Breakpoints where Y can change: entries, exits, and tau itself.
    let mut breaks: Vec<R> = exits.iter().map(|&(t, _)| t).collect();
    breaks.extend(entries.iter().copied());
    breaks.push(tau);
    breaks.retain(|&t| t > R::zero() && t <= tau);
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("times are finite"));
    breaks.dedup();

    // Y on (prev, b] = #{entries ≤ prev} − #{exits ≤ prev}  (entry 0 counted).
    let mut sorted_entries = entries.clone();
    sorted_entries.sort_by(|a, b| a.partial_cmp(b).expect("times are finite"));
    let mut sorted_exits: Vec<R> = exits.iter().map(|&(t, _)| t).collect();
    sorted_exits.sort_by(|a, b| a.partial_cmp(b).expect("times are finite"));
    let zero_entries = exits.len() - sorted_entries.len();

    let mut segments = Vec::with_capacity(breaks.len());
    let mut prev = R::zero();
    let mut entry_idx = 0usize;
    let mut exit_idx = 0usize;
    for &b in &breaks {
        while entry_idx < sorted_entries.len() && sorted_entries[entry_idx] <= prev {
            entry_idx += 1;
        }
        while exit_idx < sorted_exits.len() && sorted_exits[exit_idx] <= prev {
            exit_idx += 1;
        }
        let y = (zero_entries + entry_idx) as u32 - exit_idx as u32;
        segments.push(Segment {
            start: prev,
            end: b,
            at_risk: y,
        });
        prev = b;
    }

    // Distinct event times with summed ΔN.
    let mut event_exits: Vec<R> = exits
        .iter()
        .filter(|&&(_, d)| d)
        .map(|&(t, _)| t)
        .collect();
    if event_exits.is_empty() {
        return Err(NlhError::NoEvents);
    }
    event_exits.sort_by(|a, b| a.partial_cmp(b).expect("times are finite"));
    let mut event_times: Vec<R> = Vec::new();
    let mut events: Vec<u32> = Vec::new();
    for t in event_exits {
        if event_times.last() == Some(&t) {
            *events.last_mut().unwrap() += 1;
        } else {
            event_times.push(t);
            events.push(1);
        }
    }

    let mut at_risk = Vec::with_capacity(event_times.len());
    let mut seg_idx = 0usize;
    for &u in &event_times {
        while segments[seg_idx].end < u {
            seg_idx += 1;
        }
        at_risk.push(segments[seg_idx].at_risk);
    }

    for (i, &u) in event_times.iter().enumerate() {
        debug_assert!(at_risk[i] >= events[i], "ΔN({u}) exceeds Y({u})");
    }

    Ok(RiskPath {
        n: sample.n(),
        tau,
        event_times,
        at_risk,
        events,
        segments,
    })
}

/// Right-continuous step function; value before the first knot is 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCurve<R> {
    knots: Vec<R>,
    values: Vec<R>,
}

impl<R: Real> StepCurve<R> {
    pub fn new(knots: Vec<R>, values: Vec<R>) -> Self {
        assert_eq!(knots.len(), values.len());
        debug_assert!(knots.windows(2).all(|w| w[0] < w[1]));
        StepCurve { knots, values }
    }

    /// Build from jump sizes: value at knot i = Σ_{k ≤ i} jumps[k].
    pub fn from_jumps(knots: Vec<R>, jumps: &[R]) -> Self {
        let mut acc = R::zero();
        let values = jumps
            .iter()
            .map(|&j| {
                acc += j;
                acc
            })
            .collect();
        StepCurve { knots, values }
    }

    #[inline]
    pub fn knots(&self) -> &[R] {
        &self.knots
    }

    #[inline]
    pub fn values(&self) -> &[R] {
        &self.values
    }

    /// Value at the largest knot ≤ t, or 0 when t precedes all knots.
    pub fn eval(&self, t: R) -> R {
        match self.knots.partition_point(|&k| k <= t) {
            0 => R::zero(),
            i => self.values[i - 1],
        }
    }

    /// Jump sizes at the knots.
    pub fn jumps(&self) -> Vec<R> {
        let mut prev = R::zero();
        self.values
            .iter()
            .map(|&v| {
                let j = v - prev;
                prev = v;
                j
            })
            .collect()
    }
}

/// Nelson–Aalen estimate with its variance accumulator Σ ΔN/Y².
#[derive(Debug, Clone)]
pub struct NelsonAalen<R> {
    pub cum_hazard: StepCurve<R>,
    pub variance: StepCurve<R>,
}

/// Nelson–Aalen estimator Ĥ(t) = Σ_{u_i ≤ t} ΔN(u_i)/Y(u_i), and the usual
/// variance accumulator Σ ΔN/Y².
pub fn nelson_aalen<R: Real>(path: &RiskPath<R>) -> NelsonAalen<R> {
    let mut jumps = Vec::with_capacity(path.event_times.len());
    let mut var_jumps = Vec::with_capacity(path.event_times.len());
    for i in 0..path.event_times.len() {
        let dn = R::of(path.events[i] as f64);
        let y = R::of(path.at_risk[i] as f64);
        jumps.push(dn / y);
        var_jumps.push(dn / (y * y));
    }
    NelsonAalen {
        cum_hazard: StepCurve::from_jumps(path.event_times.clone(), &jumps),
        variance: StepCurve::from_jumps(path.event_times.clone(), &var_jumps),
    }
}

/// Integrate `g(s, Y(s))` over `(0, t]` given an exact antiderivative of `g`
/// on each interval where Y is constant. The evaluator receives
/// `(gap_start, gap_end, at_risk)` and must return the integral over that gap.
///
/// Beyond tau the at-risk count is 0.
pub fn step_integral<R: Real, F>(path: &RiskPath<R>, gap_integral: F, t: R) -> Result<R>
where
    F: Fn(R, R, u32) -> R,
{
    if t < R::zero() {
        return Err(NlhError::NegativeTime(t.to_f64().unwrap_or(f64::NAN)));
    }
    let mut acc = R::zero();
    for seg in &path.segments {
        if seg.start >= t {
            return Ok(acc);
        }
        let hi = seg.end.min(t);
        acc += gap_integral(seg.start, hi, seg.at_risk);
    }
    if t > path.tau {
        acc += gap_integral(path.tau, t, 0);
    }
    Ok(acc)
}

/// The quartic kernel (15/8)(1 − 4z²)² on [−1/2, 1/2]: a symmetric unimodal
/// density with K and K′ vanishing at the boundary.
pub fn quartic_kernel<R: Real>(z: R) -> R {
    if z.abs() > R::half() {
        return R::zero();
    }
    let w = R::one() - R::of(4.0) * z * z;
    R::of(15.0 / 8.0) * w * w
}

/// Kernel-smoothed hazard: jumps of the cumulative hazard are spread with the
/// quartic kernel at bandwidth `b`, with reflected copies at −u so that the
/// estimate extends to s = 0 with zero slope there.
pub fn kernel_smooth_hazard<R: Real>(
    cum_hazard: &StepCurve<R>,
    bandwidth: R,
    grid: &[R],
) -> Result<Vec<R>> {
    if !(bandwidth > R::zero()) {
        return Err(NlhError::InvalidBandwidth(
            bandwidth.to_f64().unwrap_or(f64::NAN),
        ));
    }
    for &s in grid {
        if s < R::zero() {
            return Err(NlhError::NegativeTime(s.to_f64().unwrap_or(f64::NAN)));
        }
    }
    let knots = cum_hazard.knots();
    let jumps = cum_hazard.jumps();
    let inv_b = R::one() / bandwidth;
    Ok(grid
        .iter()
        .map(|&s| {
            let mut acc = R::zero();
            for (&u, &j) in knots.iter().zip(jumps.iter()) {
                acc += j * (quartic_kernel((s - u) * inv_b) + quartic_kernel((s + u) * inv_b));
            }
            acc * inv_b
        })
        .collect())
}

/// Grouped survival data: contiguous intervals `(left, right]` with at-risk
/// and event counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteTable<R> {
    intervals: Vec<(R, R)>,
    at_risk: Vec<u32>,
    events: Vec<u32>,
}

impl<R: Real> DiscreteTable<R> {
    pub fn new(intervals: Vec<(R, R)>, at_risk: Vec<u32>, events: Vec<u32>) -> Result<Self> {
        if intervals.is_empty()
            || intervals.len() != at_risk.len()
            || intervals.len() != events.len()
        {
            return Err(NlhError::InvalidTable("length mismatch".into()));
        }
        for w in intervals.windows(2) {
            if w[0].1 != w[1].0 {
                return Err(NlhError::InvalidTable(
                    "intervals must be contiguous".into(),
                ));
            }
        }
        for (i, &(l, r)) in intervals.iter().enumerate() {
            if !(l < r) {
                return Err(NlhError::InvalidTable(format!(
                    "interval {i} has left ≥ right"
                )));
            }
            if events[i] > at_risk[i] {
                return Err(NlhError::InvalidTable(format!(
                    "interval {i} has more events than subjects at risk"
                )));
            }
        }
        Ok(DiscreteTable {
            intervals,
            at_risk,
            events,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    #[inline]
    pub fn intervals(&self) -> &[(R, R)] {
        &self.intervals
    }

    #[inline]
    pub fn at_risk(&self) -> &[u32] {
        &self.at_risk
    }

    #[inline]
    pub fn events(&self) -> &[u32] {
        &self.events
    }

    /// Sample size behind the table: subjects at risk entering interval 1.
    pub fn n(&self) -> usize {
        self.at_risk.first().copied().unwrap_or(0) as usize
    }

    pub fn total_events(&self) -> u32 {
        self.events.iter().sum()
    }
}

/// Group a sample onto `cut_points` = c₀ < c₁ < … < c_k: interval i is
/// `(c_{i-1}, c_i]`; Y_i counts subjects at risk entering it, ΔN_i the events
/// inside it. Censored subjects leave the risk set at the interval containing
/// their exit.
pub fn group_to_discrete<R: Real>(
    sample: &SurvivalSample<R>,
    cut_points: &[R],
) -> Result<DiscreteTable<R>> {
    if cut_points.len() < 2 || cut_points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(NlhError::InvalidCutPoints);
    }
    let last = *cut_points.last().unwrap();
    let first = cut_points[0];
    for s in sample.subjects() {
        let (exit, status) = sample.effective_exit(s);
        if status && (exit > last || exit <= first) {
            return Err(NlhError::EventBeyondCuts {
                time: exit.to_f64().unwrap_or(f64::NAN),
                last: last.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let m = cut_points.len() - 1;
    let mut at_risk = vec![0u32; m];
    let mut events = vec![0u32; m];
    for s in sample.subjects() {
        let (exit, status) = sample.effective_exit(s);
        for i in 0..m {
            let (l, r) = (cut_points[i], cut_points[i + 1]);
            if exit > l && s.entry_time <= l {
                at_risk[i] += 1;
            }
            if status && exit > l && exit <= r {
                events[i] += 1;
            }
        }
    }
    DiscreteTable::new(
        cut_points.windows(2).map(|w| (w[0], w[1])).collect(),
        at_risk,
        events,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample(times: &[f64], status: &[bool]) -> SurvivalSample<f64> {
        SurvivalSample::from_times(times, status).unwrap()
    }

    #[test]
    fn risk_path_counts_directly() {
        let p = build_risk_path(&sample(&[1.0, 2.0, 3.0], &[true, true, true])).unwrap();
        assert_eq!(p.event_times(), &[1.0, 2.0, 3.0]);
        assert_eq!(p.at_risk(), &[3, 2, 1]);
        assert_eq!(p.events(), &[1, 1, 1]);
    }

    #[test]
    fn censored_subject_drops_from_events() {
        let p = build_risk_path(&sample(&[1.0, 2.0, 3.0], &[true, false, true])).unwrap();
        assert_eq!(p.event_times(), &[1.0, 3.0]);
        assert_eq!(p.at_risk(), &[3, 1]);
        assert_eq!(p.events(), &[1, 1]);
    }

    #[test]
    fn delayed_entry_is_excluded_until_entry() {
        let s = SurvivalSample::new(vec![
            Subject::with_entry(2.0, true, 0.0),
            Subject::with_entry(3.0, true, 2.5),
        ])
        .unwrap();
        let p = build_risk_path(&s).unwrap();
        assert_eq!(p.event_times(), &[2.0, 3.0]);
        assert_eq!(p.at_risk(), &[1, 1]);
    }

    #[test]
    fn ties_merge_into_one_knot() {
        let p = build_risk_path(&sample(&[1.0, 1.0, 2.0], &[true, true, true])).unwrap();
        assert_eq!(p.event_times(), &[1.0, 2.0]);
        assert_eq!(p.events(), &[2, 1]);
        assert_eq!(p.at_risk(), &[3, 1]);
    }

    #[test]
    fn no_events_is_an_error() {
        let err = build_risk_path(&sample(&[1.0, 2.0], &[false, false])).unwrap_err();
        assert!(matches!(err, NlhError::NoEvents));
    }

    #[test]
    fn nelson_aalen_formula() {
        let p = build_risk_path(&sample(&[1.0, 2.0, 3.0], &[true, true, true])).unwrap();
        let na = nelson_aalen(&p);
        assert_relative_eq!(na.cum_hazard.eval(3.0), 11.0 / 6.0, max_relative = 1e-15);

        let p = build_risk_path(&sample(&[1.0, 2.0, 3.0], &[true, false, true])).unwrap();
        let na = nelson_aalen(&p);
        assert_relative_eq!(na.cum_hazard.eval(100.0), 4.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn step_convention_at_a_single_event() {
        let subjects: Vec<Subject<f64>> = (0..10)
            .map(|i| Subject::new(if i == 0 { 5.0 } else { 6.0 }, i == 0))
            .collect();
        let s = SurvivalSample::new(subjects).unwrap();
        let na = nelson_aalen(&build_risk_path(&s).unwrap());
        assert_eq!(na.cum_hazard.eval(4.9), 0.0);
        assert_relative_eq!(na.cum_hazard.eval(5.0), 0.1, max_relative = 1e-15);
    }

    #[test]
    fn step_integral_examples() {
        let p = build_risk_path(&sample(&[1.0, 2.0, 3.0], &[true, true, true])).unwrap();
        // g = 1
        let v = step_integral(&p, |a, b, _| b - a, 2.5).unwrap();
        assert_relative_eq!(v, 2.5, max_relative = 1e-15);

        // g = n/Y on a 2-subject path
        let p2 = build_risk_path(&sample(&[1.0, 2.0], &[true, true])).unwrap();
        let n = p2.n() as f64;
        let v = step_integral(&p2, |a, b, y| (b - a) * n / y as f64, 2.0).unwrap();
        assert_relative_eq!(v, 2.0 / 2.0 + 2.0 / 1.0, max_relative = 1e-15);

        // g = θ e^{βs} with θ = β = 1 on a single gap
        let p1 = build_risk_path(&sample(&[1.0], &[true])).unwrap();
        let v = step_integral(&p1, |a, b, _| b.exp() - a.exp(), 1.0).unwrap();
        assert_relative_eq!(v, std::f64::consts::E - 1.0, max_relative = 1e-15);
    }

    #[test]
    fn step_integral_rejects_negative_time() {
        let p = build_risk_path(&sample(&[1.0], &[true])).unwrap();
        assert!(step_integral(&p, |a, b, _| b - a, -0.5).is_err());
    }

    #[test]
    fn quartic_kernel_facts() {
        // ∫ K = 1 by the antiderivative (15/8)(z − 8z³/3 + 16 z⁵/5)
        let anti = |z: f64| 15.0 / 8.0 * (z - 8.0 * z.powi(3) / 3.0 + 16.0 * z.powi(5) / 5.0);
        assert_relative_eq!(anti(0.5) - anti(-0.5), 1.0, epsilon = 1e-15);
        assert_eq!(quartic_kernel(0.5), 0.0);
        assert_eq!(quartic_kernel(-0.5), 0.0);
        // K'(±1/2) = 0: finite differences at the boundary stay tiny
        let d = (quartic_kernel(0.5f64) - quartic_kernel(0.5 - 1e-7)) / 1e-7;
        assert!(d.abs() < 1e-5);
    }

    #[test]
    fn kernel_smoothing_with_reflection() {
        // single jump 0.1 at u = 1, b = 4: ĥ(1) = 0.1/4 · (K(0) + K(1/2))
        let h = StepCurve::new(vec![1.0], vec![0.1]);
        let v = kernel_smooth_hazard(&h, 4.0, &[1.0]).unwrap();
        assert_relative_eq!(v[0], 0.1 / 4.0 * (15.0 / 8.0), max_relative = 1e-14);

        // zero slope at 0
        let eps = 1e-7f64;
        let v = kernel_smooth_hazard(&h, 4.0, &[0.0, eps]).unwrap();
        assert!(((v[1] - v[0]) / eps).abs() < 1e-6);

        assert!(kernel_smooth_hazard(&h, 0.0, &[1.0]).is_err());
    }

    #[test]
    fn grouping_examples() {
        let t = group_to_discrete(&sample(&[0.5, 1.5, 1.6], &[true; 3]), &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(t.at_risk(), &[3, 2]);
        assert_eq!(t.events(), &[1, 2]);

        let t = group_to_discrete(&sample(&[0.5, 0.7], &[false, false]), &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(t.events(), &[0, 0]);
        assert_eq!(t.at_risk(), &[2, 0]);

        let t = group_to_discrete(&sample(&[0.5], &[true]), &[0.0, 1.0]).unwrap();
        assert_eq!(t.at_risk(), &[1]);
        assert_eq!(t.events(), &[1]);

        let err = group_to_discrete(&sample(&[2.5], &[true]), &[0.0, 1.0, 2.0]).unwrap_err();
        assert!(matches!(err, NlhError::EventBeyondCuts { .. }));
    }

    #[test]
    fn grouping_conserves_events() {
        let s = sample(&[0.2, 0.4, 0.9, 1.4, 1.9, 2.0], &[true, false, true, true, false, true]);
        let t = group_to_discrete(&s, &[0.0, 0.5, 1.0, 1.5, 2.0]).unwrap();
        assert_eq!(t.total_events() as usize, s.event_count());
    }

    #[test]
    fn segments_track_censoring_inside_gaps() {
        // events at 1 and 3, censoring at 2: Y on (1,2] is 2, on (2,3] is 1
        let p = build_risk_path(&sample(&[1.0, 2.0, 3.0], &[true, false, true])).unwrap();
        assert_eq!(p.at_risk_at(1.5), 2);
        assert_eq!(p.at_risk_at(2.5), 1);
        let segs = p.segments();
        assert_eq!(segs.len(), 3);
        assert_eq!(segs[1].at_risk, 2);
        assert_eq!(segs[2].at_risk, 1);
    }
}
