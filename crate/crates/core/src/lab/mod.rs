//! Window-based experiments on infinite products in the model groups.

mod config;
mod demo;
mod engine;
mod trace;
mod witness;

pub use config::{ExperimentSpec, GroupId, MultiplierSpec, PadicParams, RandomMultiplier, SequenceKind};
pub use demo::{perm_cycle_demo, zigzag_divergence_demo, PermCycleRow, ZigzagRow};
pub use engine::{
    cauchy_verdict, convergence_verdict, linear_null_shortcut, margin, partial_products,
    run_experiment, stabilization, BoundedModel, CauchyReport, HModel, LevelK, Model,
    NullShortcut, PadicModel, PermModel, SpectrumTag, Stabilization, StepRecord, TraceReport,
    Verdict, GROWTH_RUN,
};
pub use trace::parse_trace_header;
pub use witness::{
    tap_witness_for_h, technical_check, unbounded_witness, BasisSequence, CoordinateSequence,
    HSequence, TapOutcome, TechnicalReport, UnboundedOutcome, Witness, LONG_CORE_DEPTH,
};
