//! Trust-metric library, requirement checker, and deterministic network
//! simulator.
//!
//! Three metrics are implemented in [`metrics`]: the simple exponentially
//! smoothed delivery-rate metric, the windowed (FIFO) metric, and the
//! sign-split exponential smoothing metric. [`checker`] turns the two formal
//! requirements on trust metrics into executable predicates and searches for
//! counterexamples. [`sim`] runs the metrics inside a DODAG-rooted sensor
//! network with per-link Bernoulli loss.

pub mod checker;
pub mod metrics;
pub mod sim;

pub use checker::{
    check_r1_once, check_r2_once, replay, search_counterexamples, CheckerError, Counterexample,
    MetricUnderTest, RequirementId, SearchConfig, SearchMode, SearchReport, Verdict,
};
pub use metrics::{
    classify_rating, delivery_rate, MetricError, MetricKind, MetricParams, MetricState, Rating,
    RatingClass, RatingRange, Reputation, SimpleState, WsesState, WtmState,
};
pub use sim::{
    build_initial_dodag, run_simulation, trace_to_csv, trace_to_jsonl, DataPacket, Dio, EventKind,
    FailureEvent, FailureKind, Link, NodeId, RootState, SimConfig, SimError, SimNode, SimOutcome,
    SimSummary, Simulation, Topology, TraceEvent, ROOT,
};
