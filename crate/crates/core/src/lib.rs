//! Executable Roumieu ultradistribution theory at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! - [`weights`]: weight sequences `(M_p)`, the conditions (M.1)–(M.3), the
//!   associated function and multi-index values.
//! - [`rseq`]: the class of sequences increasing to infinity, product
//!   sequences, scaling, ordering, tail shifts and constructive witnesses for
//!   Komatsu's characterisations.
//! - [`calculus`]: symbolic piecewise-smooth functions of one variable,
//!   exact truncated Taylor jets, grids and the smooth cutoff.
//! - [`seminorms`]: the weighted sup-seminorms and the quantitative product
//!   and cutoff estimates built on them.
//! - [`units`]: approximate units, special approximate units and the
//!   perturbation gadgets used to stress them.
//! - [`integrability`]: concrete ultradistributions (density plus point
//!   masses and their derivatives), the pairing and the five-condition
//!   integrability harness.
//! - [`cli`]: experiment configuration and deterministic report emission.
//!
//! Every infinitary statement is checked at a finite horizon. Reports say so
//! explicitly: a verdict is exact at the horizon, only a necessary check, or
//! sampled evidence.
//!
//! Derivatives are real derivatives `∂^k`. The operator `D = (1/i)∂` differs
//! by a factor of modulus one, so no seminorm and no bound on `|⟨T, φ⟩|` is
//! affected by the choice.

pub mod calculus;
pub mod cli;
pub mod error;
pub mod integrability;
mod numfmt;
pub mod rseq;
pub mod seminorms;
pub mod units;
pub mod weights;

pub use error::{Error, Result};
