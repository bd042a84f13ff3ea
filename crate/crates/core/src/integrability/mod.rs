//! Concrete ultradistributions and the integrability harness.
//!
//! A distribution here is a finite sum of densities and weighted derivatives
//! of point masses. It pairs with a test function through
//! `⟨c δ^{(m)}_{x0}, φ⟩ = c (-1)^m φ^{(m)}(x0)` and adaptive quadrature.
//!
//! The harness gathers evidence for five equivalent characterisations of
//! integrability:
//!
//! - (a) `|⟨T, φ⟩| ≤ C ‖φ‖_{(r_p)}`;
//! - (b) for every `ε` there is a compact `K` with `|⟨T, φ⟩| ≤ ε ‖φ‖_{(r_p)}`
//!   whenever `supp φ ∩ K = ∅`;
//! - (c) `⟨T, π_n⟩` is Cauchy for every approximate unit;
//! - (d) the same for every special approximate unit;
//! - (e) the bound of (a) for test functions supported off a fixed compact.
//!
//! Each condition quantifies over infinite families, so verdicts are
//! pass, fail or inconclusive, drawn from a finite corpus and finite
//! families. The heuristic thresholds live in [`Heuristics`] and
//! [`TrajectorySettings`].

mod distribution;
mod harness;
pub mod quadrature;

pub use distribution::{pair, parse_distribution, Atom, Density, Domain, Pairing, Ultradistribution};
pub use harness::{
    classify, test_condition_a, test_condition_b, test_condition_c, test_condition_d, test_condition_e, trajectory,
    ConditionReport, ConditionVerdict, Corpus, CorpusEntry, FamilySummary, HarnessConfig, Heuristics, RadiusRow,
    RatioEntry, RatioEvidence, Trajectory, TrajectorySettings, Verdict,
};
