//! The three trust metrics: state representations, rating updates, and
//! reputation evaluation.
//!
//! Everything in this module is a pure function on immutable values. Updates
//! take a state by reference and return the successor state, so states can be
//! copied, replayed, and shared between threads freely.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smoothing weight used when a config does not specify one.
pub const DEFAULT_ALPHA: f64 = 0.5;
/// FIFO capacity used when a config does not specify one.
pub const DEFAULT_CAPACITY: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    /// A delivery rate was requested for a round in which nothing was sent.
    #[error("no traffic: sent count is zero")]
    NoTraffic,
    /// More packets delivered than sent; indicates an accounting bug upstream.
    #[error("invalid counts: delivered {delivered} exceeds sent {sent}")]
    InvalidCount { delivered: u64, sent: u64 },
    #[error("rating {value} outside legal range {range}")]
    OutOfRange { value: f64, range: RatingRange },
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),
    #[error("capacity must be at least 1")]
    InvalidCapacity,
    #[error("trust value {0} outside [0, 1]")]
    InvalidTrust(f64),
    #[error("reputation pair must be nonnegative, got ({0}, {1})")]
    InvalidPair(f64, f64),
}

/// Legal value range of a rating.
///
/// Delivery rates live in the unit interval; the windowed and sign-split
/// metrics accept signed ratings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatingRange {
    /// `[0, 1]` — delivery-rate ratings.
    Unit,
    /// `[-1, 1]` — signed ratings.
    Signed,
}

impl RatingRange {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            RatingRange::Unit => (0.0, 1.0),
            RatingRange::Signed => (-1.0, 1.0),
        }
    }

    pub fn contains(self, value: f64) -> bool {
        let (lo, hi) = self.bounds();
        value >= lo && value <= hi
    }
}

impl fmt::Display for RatingRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.bounds();
        write!(f, "[{lo}, {hi}]")
    }
}

/// One observation fed to a metric, validated against its legal range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rating {
    value: f64,
    range: RatingRange,
}

impl Rating {
    pub fn new(value: f64, range: RatingRange) -> Result<Self, MetricError> {
        if !range.contains(value) {
            return Err(MetricError::OutOfRange { value, range });
        }
        Ok(Rating { value, range })
    }

    /// A delivery-rate rating in `[0, 1]`.
    pub fn unit(value: f64) -> Result<Self, MetricError> {
        Rating::new(value, RatingRange::Unit)
    }

    /// A signed rating in `[-1, 1]`.
    pub fn signed(value: f64) -> Result<Self, MetricError> {
        Rating::new(value, RatingRange::Signed)
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn range(self) -> RatingRange {
        self.range
    }
}

/// Scalar trust evaluation of a node. Values near 1 indicate desirable
/// behaviour; negative values (where the metric's range permits them)
/// indicate malicious behaviour or partial failure.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Reputation(f64);

impl Reputation {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Reputation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which of the three metrics is in play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Simple,
    Wtm,
    Wses,
}

impl MetricKind {
    /// Legal range for ratings fed to this metric.
    pub fn rating_range(self) -> RatingRange {
        match self {
            MetricKind::Simple => RatingRange::Unit,
            MetricKind::Wtm | MetricKind::Wses => RatingRange::Signed,
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Simple => "simple",
            MetricKind::Wtm => "wtm",
            MetricKind::Wses => "wses",
        })
    }
}

/// Parameters shared by the metrics: the smoothing weight `alpha` (simple and
/// sign-split metrics) and the FIFO `capacity` (windowed metric only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    alpha: f64,
    capacity: usize,
}

impl MetricParams {
    pub fn new(alpha: f64, capacity: usize) -> Result<Self, MetricError> {
        check_alpha(alpha)?;
        if capacity == 0 {
            return Err(MetricError::InvalidCapacity);
        }
        Ok(MetricParams { alpha, capacity })
    }

    pub fn with_alpha(alpha: f64) -> Result<Self, MetricError> {
        MetricParams::new(alpha, DEFAULT_CAPACITY)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            alpha: DEFAULT_ALPHA,
            capacity: DEFAULT_CAPACITY,
        }
    }
}

fn check_alpha(alpha: f64) -> Result<(), MetricError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(MetricError::InvalidAlpha(alpha));
    }
    Ok(())
}

/// Delivery rate for one trust round: `delivered / sent`.
///
/// `sent` must be positive; a round without traffic has no meaningful rate
/// and the caller is expected to skip the trust update for it.
pub fn delivery_rate(delivered: u64, sent: u64) -> Result<Rating, MetricError> {
    if sent == 0 {
        return Err(MetricError::NoTraffic);
    }
    if delivered > sent {
        return Err(MetricError::InvalidCount { delivered, sent });
    }
    Ok(Rating {
        value: delivered as f64 / sent as f64,
        range: RatingRange::Unit,
    })
}

/// State of the simple metric: one trust value smoothed across rounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleState {
    trust: f64,
    round: u64,
}

impl SimpleState {
    /// Initial state: trust 0.5 at round 0.
    pub fn init() -> Self {
        SimpleState {
            trust: 0.5,
            round: 0,
        }
    }

    pub fn new(trust: f64, round: u64) -> Result<Self, MetricError> {
        if !(0.0..=1.0).contains(&trust) {
            return Err(MetricError::InvalidTrust(trust));
        }
        Ok(SimpleState { trust, round })
    }

    pub fn trust(&self) -> f64 {
        self.trust
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    /// Advance one round. When rating the current parent the new trust is
    /// `alpha * trust + (1 - alpha) * xi`; any other node keeps its trust
    /// unchanged. The round counter increments either way.
    ///
    /// The convex combination cannot leave `[0, 1]`: both products are
    /// bounded by `alpha` and `fl(1 - alpha)` respectively, and their sum
    /// rounds to at most 1.
    pub fn update(
        &self,
        xi: Rating,
        params: &MetricParams,
        is_parent: bool,
    ) -> Result<Self, MetricError> {
        check_alpha(params.alpha)?;
        if !RatingRange::Unit.contains(xi.value) {
            return Err(MetricError::OutOfRange {
                value: xi.value,
                range: RatingRange::Unit,
            });
        }
        let trust = if is_parent {
            params.alpha * self.trust + (1.0 - params.alpha) * xi.value
        } else {
            self.trust
        };
        Ok(SimpleState {
            trust,
            round: self.round + 1,
        })
    }

    /// Evaluation is the identity on the stored trust value.
    pub fn reputation(&self) -> Reputation {
        Reputation(self.trust)
    }
}

/// State of the windowed metric: a bounded FIFO of signed ratings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WtmState {
    ratings: VecDeque<f64>,
    capacity: usize,
}

impl WtmState {
    pub fn new(capacity: usize) -> Result<Self, MetricError> {
        if capacity == 0 {
            return Err(MetricError::InvalidCapacity);
        }
        Ok(WtmState {
            ratings: VecDeque::new(),
            capacity,
        })
    }

    /// Build a state directly from stored ratings, oldest first.
    pub fn from_ratings<I>(ratings: I, capacity: usize) -> Result<Self, MetricError>
    where
        I: IntoIterator<Item = f64>,
    {
        let mut state = WtmState::new(capacity)?;
        for value in ratings {
            state = state.update(Rating::signed(value)?)?;
        }
        Ok(state)
    }

    /// Stored ratings, oldest first.
    pub fn ratings(&self) -> impl Iterator<Item = f64> + '_ {
        self.ratings.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Append a rating, dropping the oldest one first if the queue is full.
    pub fn update(&self, r: Rating) -> Result<Self, MetricError> {
        if !RatingRange::Signed.contains(r.value) {
            return Err(MetricError::OutOfRange {
                value: r.value,
                range: RatingRange::Signed,
            });
        }
        let mut ratings = self.ratings.clone();
        if ratings.len() == self.capacity {
            ratings.pop_front();
        }
        ratings.push_back(r.value);
        Ok(WtmState {
            ratings,
            capacity: self.capacity,
        })
    }

    /// Sum of the ratings normalised by the sum of their strengths. An empty
    /// or all-zero queue evaluates to the neutral reputation 0.
    pub fn reputation(&self) -> Reputation {
        let sum: f64 = self.ratings.iter().sum();
        let strength: f64 = self.ratings.iter().map(|r| r.abs()).sum();
        if strength == 0.0 {
            Reputation(0.0)
        } else {
            Reputation(sum / strength)
        }
    }
}

/// State of the sign-split exponential smoothing metric: one smoothed
/// accumulator for positive ratings and one for negative ratings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WsesState {
    positive: f64,
    negative: f64,
}

impl WsesState {
    /// Initial state `(0, 0)` — the state before any rating arrives.
    pub fn new() -> Self {
        WsesState {
            positive: 0.0,
            negative: 0.0,
        }
    }

    pub fn from_parts(positive: f64, negative: f64) -> Result<Self, MetricError> {
        if positive < 0.0 || negative < 0.0 {
            return Err(MetricError::InvalidPair(positive, negative));
        }
        Ok(WsesState { positive, negative })
    }

    pub fn positive(&self) -> f64 {
        self.positive
    }

    pub fn negative(&self) -> f64 {
        self.negative
    }

    /// A positive rating is smoothed into the positive accumulator (the
    /// negative one decays); a negative rating is smoothed into the negative
    /// accumulator; a zero rating leaves the state untouched.
    pub fn update(&self, r: Rating, params: &MetricParams) -> Result<Self, MetricError> {
        check_alpha(params.alpha)?;
        if !RatingRange::Signed.contains(r.value) {
            return Err(MetricError::OutOfRange {
                value: r.value,
                range: RatingRange::Signed,
            });
        }
        let alpha = params.alpha;
        let state = if r.value > 0.0 {
            WsesState {
                positive: self.positive * alpha + (1.0 - alpha) * r.value,
                negative: self.negative * alpha,
            }
        } else if r.value < 0.0 {
            WsesState {
                positive: self.positive * alpha,
                negative: self.negative * alpha - (1.0 - alpha) * r.value,
            }
        } else {
            *self
        };
        Ok(state)
    }

    /// Normalised difference `(p1 - p2) / (p1 + p2)`; the empty state
    /// evaluates to the neutral reputation 0.
    pub fn reputation(&self) -> Reputation {
        let total = self.positive + self.negative;
        if total == 0.0 {
            Reputation(0.0)
        } else {
            Reputation((self.positive - self.negative) / total)
        }
    }
}

impl Default for WsesState {
    fn default() -> Self {
        WsesState::new()
    }
}

/// Per-metric rating storage, unified so callers can treat the three metrics
/// uniformly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricState {
    Simple(SimpleState),
    Wtm(WtmState),
    Wses(WsesState),
}

impl MetricState {
    /// The state each metric starts from before any rating arrives.
    pub fn initial(kind: MetricKind, params: &MetricParams) -> Result<Self, MetricError> {
        Ok(match kind {
            MetricKind::Simple => MetricState::Simple(SimpleState::init()),
            MetricKind::Wtm => MetricState::Wtm(WtmState::new(params.capacity)?),
            MetricKind::Wses => MetricState::Wses(WsesState::new()),
        })
    }

    pub fn kind(&self) -> MetricKind {
        match self {
            MetricState::Simple(_) => MetricKind::Simple,
            MetricState::Wtm(_) => MetricKind::Wtm,
            MetricState::Wses(_) => MetricKind::Wses,
        }
    }

    /// Add a rating. For the simple metric this applies the parent branch of
    /// the update, which is the branch that actually consumes the rating.
    pub fn update(&self, r: Rating, params: &MetricParams) -> Result<Self, MetricError> {
        Ok(match self {
            MetricState::Simple(s) => MetricState::Simple(s.update(r, params, true)?),
            MetricState::Wtm(s) => MetricState::Wtm(s.update(r)?),
            MetricState::Wses(s) => MetricState::Wses(s.update(r, params)?),
        })
    }

    pub fn reputation(&self) -> Reputation {
        match self {
            MetricState::Simple(s) => s.reputation(),
            MetricState::Wtm(s) => s.reputation(),
            MetricState::Wses(s) => s.reputation(),
        }
    }

    /// Classify a rating against this state's threshold.
    pub fn classify(&self, r: Rating) -> RatingClass {
        classify_rating(self.kind(), r, self.reputation())
    }
}

/// Whether a rating speaks for or against a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatingClass {
    Good,
    Bad,
    Neutral,
}

/// Classify a rating. The windowed and sign-split metrics compare against the
/// constant 0; the simple metric compares against the previous reputation,
/// because a delivery rate is only good news if it beats the last one.
/// Comparisons are exact — there is no epsilon band around the threshold.
pub fn classify_rating(kind: MetricKind, r: Rating, previous: Reputation) -> RatingClass {
    let threshold = match kind {
        MetricKind::Simple => previous.value(),
        MetricKind::Wtm | MetricKind::Wses => 0.0,
    };
    if r.value() > threshold {
        RatingClass::Good
    } else if r.value() < threshold {
        RatingClass::Bad
    } else {
        RatingClass::Neutral
    }
}
