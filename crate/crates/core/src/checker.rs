//! Executable forms of the two formal requirements on trust metrics, plus
//! counterexample search by exhaustive grid enumeration or seeded randomized
//! trials.
//!
//! R1: of two good ratings, the better one must lead to the strictly better
//! reputation, unless the worse branch already evaluates to 1.
//! R2: any good rating must strictly improve the reputation, unless it is
//! already 1.
//!
//! A *trial* is one `(state, rating[s])` candidate that passed the
//! requirement's preconditions; candidates that fail them are discarded and
//! never counted. Searches are deterministic for a fixed config.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{
    MetricError, MetricKind, MetricParams, MetricState, Rating, RatingClass, RatingRange,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckerError {
    /// The candidate failed a requirement precondition; the trial is
    /// discarded and not counted.
    #[error("invalid trial: {0}")]
    InvalidTrial(String),
    #[error("invalid search config: {0}")]
    InvalidConfig(String),
    /// A stored counterexample no longer reproduces its recorded reputations.
    #[error("corrupt counterexample: {0}")]
    CorruptCounterexample(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// The two requirements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RequirementId {
    R1,
    R2,
}

impl fmt::Display for RequirementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RequirementId::R1 => "R1",
            RequirementId::R2 => "R2",
        })
    }
}

/// Outcome of a single requirement check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
}

/// The metric a search runs against, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricUnderTest {
    pub kind: MetricKind,
    pub params: MetricParams,
}

impl MetricUnderTest {
    pub fn new(kind: MetricKind, params: MetricParams) -> Self {
        MetricUnderTest { kind, params }
    }

    fn rating(&self, value: f64) -> Result<Rating, MetricError> {
        Rating::new(value, self.kind.rating_range())
    }
}

/// How the state and rating space is explored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    ExhaustiveGrid,
    Randomized,
}

/// Search parameters. `grid_step` and `depth` apply to exhaustive-grid mode;
/// `trials` applies to randomized mode. Identical configs (seed included)
/// produce identical reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub trials: u64,
    pub seed: u64,
    pub grid_step: f64,
    pub depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::Randomized,
            trials: 10_000,
            seed: 0,
            grid_step: 0.1,
            depth: 3,
        }
    }
}

impl SearchConfig {
    fn validate(&self, range: RatingRange) -> Result<(), CheckerError> {
        if self.trials == 0 {
            return Err(CheckerError::InvalidConfig(
                "trials must be at least 1".into(),
            ));
        }
        if !(self.grid_step > 0.0) {
            return Err(CheckerError::InvalidConfig(format!(
                "grid step {} must be positive",
                self.grid_step
            )));
        }
        if grid_points(range, self.grid_step).len() < 2 {
            return Err(CheckerError::InvalidConfig(format!(
                "grid step {} yields fewer than 2 points over {range}",
                self.grid_step
            )));
        }
        Ok(())
    }
}

/// A witnessed requirement violation (or, after [`replay`], any recorded
/// trial). `ratings` holds `[r]` for R2 and `[r1, r2]` for R1; `reputations`
/// holds the pre-update reputation followed by the post-update value(s), in
/// branch order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub state: MetricState,
    pub ratings: Vec<f64>,
    pub reputations: Vec<f64>,
}

impl Counterexample {
    /// Which requirement the record belongs to, derived from the number of
    /// candidate ratings.
    pub fn requirement(&self) -> Option<RequirementId> {
        match self.ratings.len() {
            1 => Some(RequirementId::R2),
            2 => Some(RequirementId::R1),
            _ => None,
        }
    }
}

/// Result of a counterexample search, serializable as the canonical JSON
/// report: `{metric, params, requirement, config, trials_run, violations}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub metric: MetricKind,
    pub params: MetricParams,
    pub requirement: RequirementId,
    pub config: SearchConfig,
    pub trials_run: u64,
    pub violations: Vec<Counterexample>,
}

fn ensure_good(metric: &MetricUnderTest, state: &MetricState, r: Rating) -> Result<(), CheckerError> {
    if state.classify(r) != RatingClass::Good {
        return Err(CheckerError::InvalidTrial(format!(
            "rating {} is not a good rating for {} at reputation {}",
            r.value(),
            metric.kind,
            state.reputation()
        )));
    }
    Ok(())
}

fn ensure_kind(metric: &MetricUnderTest, state: &MetricState) -> Result<(), CheckerError> {
    if state.kind() != metric.kind {
        return Err(CheckerError::InvalidTrial(format!(
            "state is for metric {}, check is for {}",
            state.kind(),
            metric.kind
        )));
    }
    Ok(())
}

/// Check R1 for one state and one pair of good ratings `r1 > r2`.
///
/// Holds iff the `r1` branch evaluates strictly above the `r2` branch, or the
/// `r2` branch already evaluates to exactly 1 (the maximal-reputation escape
/// clause). The cardinality side condition of R1 is statically true for every
/// rating range here and is not re-checked per trial.
pub fn check_r1_once(
    metric: &MetricUnderTest,
    state: &MetricState,
    r1: Rating,
    r2: Rating,
) -> Result<Verdict, CheckerError> {
    ensure_kind(metric, state)?;
    ensure_good(metric, state, r1)?;
    ensure_good(metric, state, r2)?;
    if !(r1.value() > r2.value()) {
        return Err(CheckerError::InvalidTrial(format!(
            "r1 {} must exceed r2 {}",
            r1.value(),
            r2.value()
        )));
    }
    let tau1 = state.update(r1, &metric.params)?.reputation();
    let tau2 = state.update(r2, &metric.params)?.reputation();
    if tau1.value() > tau2.value() || tau2.value() == 1.0 {
        Ok(Verdict::Holds)
    } else {
        Ok(Verdict::Violated)
    }
}

/// Check R2 for one state and one good rating.
///
/// Holds iff the updated reputation strictly exceeds the current one, or the
/// current reputation is already exactly 1.
pub fn check_r2_once(
    metric: &MetricUnderTest,
    state: &MetricState,
    r: Rating,
) -> Result<Verdict, CheckerError> {
    ensure_kind(metric, state)?;
    ensure_good(metric, state, r)?;
    let before = state.reputation();
    let after = state.update(r, &metric.params)?.reputation();
    if after.value() > before.value() || before.value() == 1.0 {
        Ok(Verdict::Holds)
    } else {
        Ok(Verdict::Violated)
    }
}

/// Recompute a stored counterexample through the metric and confirm it still
/// produces the recorded reputations bit-for-bit, then return the verdict the
/// recomputed values imply. Any mismatch means the record was tampered with
/// or produced by a different implementation.
pub fn replay(cx: &Counterexample, metric: &MetricUnderTest) -> Result<Verdict, CheckerError> {
    let corrupt = |msg: String| CheckerError::CorruptCounterexample(msg);
    if cx.state.kind() != metric.kind {
        return Err(corrupt(format!(
            "state is for metric {}, replay is for {}",
            cx.state.kind(),
            metric.kind
        )));
    }
    let requirement = cx
        .requirement()
        .ok_or_else(|| corrupt(format!("{} ratings recorded", cx.ratings.len())))?;
    let ratings: Vec<Rating> = cx
        .ratings
        .iter()
        .map(|&v| metric.rating(v))
        .collect::<Result<_, _>>()
        .map_err(|e| corrupt(e.to_string()))?;

    let before = cx.state.reputation().value();
    let recomputed: Vec<f64> = match requirement {
        RequirementId::R2 => {
            let after = cx.state.update(ratings[0], &metric.params)?.reputation();
            vec![before, after.value()]
        }
        RequirementId::R1 => {
            let tau1 = cx.state.update(ratings[0], &metric.params)?.reputation();
            let tau2 = cx.state.update(ratings[1], &metric.params)?.reputation();
            vec![before, tau1.value(), tau2.value()]
        }
    };
    if recomputed != cx.reputations {
        return Err(corrupt(format!(
            "recorded reputations {:?} do not reproduce (recomputed {:?})",
            cx.reputations, recomputed
        )));
    }

    // Re-run the check itself so goodness preconditions are revalidated.
    let verdict = match requirement {
        RequirementId::R2 => check_r2_once(metric, &cx.state, ratings[0]),
        RequirementId::R1 => check_r1_once(metric, &cx.state, ratings[0], ratings[1]),
    };
    verdict.map_err(|e| corrupt(e.to_string()))
}

/// Search the metric's reachable state space for requirement violations.
///
/// Exhaustive-grid mode enumerates every state reachable from the metric's
/// initial state by grid-valued ratings (up to the FIFO capacity for the
/// windowed metric, up to `depth` updates otherwise) and every grid-valued
/// candidate satisfying the preconditions. Randomized mode draws `trials`
/// precondition-satisfying candidates from a seeded generator.
pub fn search_counterexamples(
    metric: &MetricUnderTest,
    requirement: RequirementId,
    config: &SearchConfig,
) -> Result<SearchReport, CheckerError> {
    config.validate(metric.kind.rating_range())?;
    let (trials_run, violations) = match config.mode {
        SearchMode::ExhaustiveGrid => search_grid(metric, requirement, config)?,
        SearchMode::Randomized => search_randomized(metric, requirement, config)?,
    };
    Ok(SearchReport {
        metric: metric.kind,
        params: metric.params,
        requirement,
        config: *config,
        trials_run,
        violations,
    })
}

fn record_violation(
    metric: &MetricUnderTest,
    state: &MetricState,
    ratings: &[Rating],
    violations: &mut Vec<Counterexample>,
) {
    let before = state.reputation().value();
    let mut reputations = vec![before];
    for &r in ratings {
        let after = state
            .update(r, &metric.params)
            .expect("violating trial already passed the update")
            .reputation();
        reputations.push(after.value());
    }
    let cx = Counterexample {
        state: state.clone(),
        ratings: ratings.iter().map(|r| r.value()).collect(),
        reputations,
    };
    debug_assert_eq!(replay(&cx, metric), Ok(Verdict::Violated));
    violations.push(cx);
}

fn run_trial(
    metric: &MetricUnderTest,
    requirement: RequirementId,
    state: &MetricState,
    ratings: &[Rating],
    trials_run: &mut u64,
    violations: &mut Vec<Counterexample>,
) -> Result<(), CheckerError> {
    let verdict = match requirement {
        RequirementId::R1 => check_r1_once(metric, state, ratings[0], ratings[1]),
        RequirementId::R2 => check_r2_once(metric, state, ratings[0]),
    };
    match verdict {
        Ok(v) => {
            *trials_run += 1;
            if v == Verdict::Violated {
                record_violation(metric, state, ratings, violations);
            }
            Ok(())
        }
        // Precondition failures are discarded, not counted.
        Err(CheckerError::InvalidTrial(_)) => Ok(()),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Randomized search

/// Upper bound on generation attempts per counted trial; stops a search whose
/// preconditions are effectively unsatisfiable from spinning forever.
const MAX_ATTEMPTS_PER_TRIAL: u64 = 1000;

fn search_randomized(
    metric: &MetricUnderTest,
    requirement: RequirementId,
    config: &SearchConfig,
) -> Result<(u64, Vec<Counterexample>), CheckerError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut trials_run = 0u64;
    let mut violations = Vec::new();
    let mut attempts = 0u64;
    let max_attempts = config.trials.saturating_mul(MAX_ATTEMPTS_PER_TRIAL);

    while trials_run < config.trials {
        attempts += 1;
        if attempts > max_attempts {
            return Err(CheckerError::InvalidConfig(format!(
                "gave up after {attempts} attempts: preconditions for {requirement} on {} \
                 are almost never satisfiable",
                metric.kind
            )));
        }
        let state = sample_state(metric, &mut rng)?;
        let Some(ratings) = sample_good_ratings(metric, requirement, &state, &mut rng) else {
            continue;
        };
        run_trial(
            metric,
            requirement,
            &state,
            &ratings,
            &mut trials_run,
            &mut violations,
        )?;
    }
    Ok((trials_run, violations))
}

fn sample_state(metric: &MetricUnderTest, rng: &mut ChaCha8Rng) -> Result<MetricState, CheckerError> {
    Ok(match metric.kind {
        // All trust values are reachable in principle, so sample them
        // directly.
        MetricKind::Simple => {
            let trust: f64 = rng.random();
            MetricState::Simple(crate::metrics::SimpleState::new(trust, 0)?)
        }
        // Any queue content of length <= k is the last-k suffix of some
        // rating sequence, so direct sampling stays within reachable states.
        MetricKind::Wtm => {
            let mut state = crate::metrics::WtmState::new(metric.params.capacity())?;
            let len = rng.random_range(0..=metric.params.capacity());
            for _ in 0..len {
                let r = Rating::signed(rng.random_range(-1.0..=1.0))?;
                state = state.update(r)?;
            }
            MetricState::Wtm(state)
        }
        // Only states reachable from (0, 0) matter; build them by applying a
        // short random rating history rather than sampling the pair directly.
        MetricKind::Wses => {
            let mut state = crate::metrics::WsesState::new();
            let depth = rng.random_range(0..=8);
            for _ in 0..depth {
                let r = Rating::signed(rng.random_range(-1.0..=1.0))?;
                state = state.update(r, &metric.params)?;
            }
            MetricState::Wses(state)
        }
    })
}

/// Draw rating(s) satisfying the requirement's preconditions for this state,
/// or `None` when the draw misses (discarded attempt).
fn sample_good_ratings(
    metric: &MetricUnderTest,
    requirement: RequirementId,
    state: &MetricState,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Rating>> {
    let draw_good = |rng: &mut ChaCha8Rng| -> Option<Rating> {
        let value = match metric.kind {
            // Good means strictly above the stored trust.
            MetricKind::Simple => {
                let trust = state.reputation().value();
                if trust >= 1.0 {
                    return None;
                }
                rng.random_range(trust..=1.0)
            }
            // Good means strictly positive.
            MetricKind::Wtm | MetricKind::Wses => rng.random_range(0.0..=1.0),
        };
        let r = Rating::new(value, metric.kind.rating_range()).ok()?;
        (state.classify(r) == RatingClass::Good).then_some(r)
    };

    match requirement {
        RequirementId::R2 => Some(vec![draw_good(rng)?]),
        RequirementId::R1 => {
            let a = draw_good(rng)?;
            let b = draw_good(rng)?;
            if a.value() == b.value() {
                return None;
            }
            let (r1, r2) = if a.value() > b.value() { (a, b) } else { (b, a) };
            Some(vec![r1, r2])
        }
    }
}

// ---------------------------------------------------------------------------
// Exhaustive grid search

/// Evenly spaced points covering a rating range, endpoints included.
///
/// When `1 / step` is (close to) an integer the points are computed as exact
/// rational divisions, so a step of 0.1 lands on the same values as the
/// literals `-0.1`, `0.5`, `0.9`, and so on.
fn grid_points(range: RatingRange, step: f64) -> Vec<f64> {
    let (lo, hi) = range.bounds();
    if !(step > 0.0) || step > hi - lo {
        // A step wider than the range leaves a single point; the config
        // validation rejects this.
        return vec![lo];
    }
    let inv = 1.0 / step;
    if (inv - inv.round()).abs() < 1e-9 {
        let inv = inv.round();
        let start = (lo * inv).round() as i64;
        let end = (hi * inv).round() as i64;
        return (start..=end).map(|i| i as f64 / inv).collect();
    }
    let count = ((hi - lo) / step).floor() as usize;
    let mut points: Vec<f64> = (0..=count).map(|i| lo + i as f64 * step).collect();
    if let Some(&last) = points.last() {
        if last < hi - step * 1e-9 {
            points.push(hi);
        } else if last > hi {
            *points.last_mut().unwrap() = hi;
        }
    }
    points
}

/// Every state reachable from the metric's initial state by applying up to
/// `depth` grid-valued ratings (up to the capacity for the windowed metric).
fn enumerate_states(
    metric: &MetricUnderTest,
    grid: &[f64],
    depth: usize,
) -> Result<Vec<MetricState>, CheckerError> {
    let depth = match metric.kind {
        MetricKind::Wtm => metric.params.capacity(),
        MetricKind::Simple | MetricKind::Wses => depth,
    };
    let initial = MetricState::initial(metric.kind, &metric.params)?;
    let mut all = vec![initial.clone()];
    let mut frontier = vec![initial];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(frontier.len() * grid.len());
        for state in &frontier {
            for &value in grid {
                let r = metric.rating(value)?;
                next.push(state.update(r, &metric.params)?);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(all)
}

fn search_grid(
    metric: &MetricUnderTest,
    requirement: RequirementId,
    config: &SearchConfig,
) -> Result<(u64, Vec<Counterexample>), CheckerError> {
    let grid = grid_points(metric.kind.rating_range(), config.grid_step);
    let states = enumerate_states(metric, &grid, config.depth)?;
    let mut trials_run = 0u64;
    let mut violations = Vec::new();

    for state in &states {
        let good: Vec<Rating> = grid
            .iter()
            .filter_map(|&v| metric.rating(v).ok())
            .filter(|&r| state.classify(r) == RatingClass::Good)
            .collect();
        match requirement {
            RequirementId::R2 => {
                for &r in &good {
                    run_trial(metric, requirement, state, &[r], &mut trials_run, &mut violations)?;
                }
            }
            RequirementId::R1 => {
                // Good ratings come out in ascending grid order; pair each
                // with every strictly smaller one.
                for (i, &r1) in good.iter().enumerate() {
                    for &r2 in &good[..i] {
                        run_trial(
                            metric,
                            requirement,
                            state,
                            &[r1, r2],
                            &mut trials_run,
                            &mut violations,
                        )?;
                    }
                }
            }
        }
    }
    Ok((trials_run, violations))
}
