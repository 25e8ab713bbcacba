//! Equivalence testing for gene-expression panels: posterior probabilities of
//! `|theta| < epsilon` under a fitted three-component normal mixture prior,
//! q-values built from them, and the frequentist equivalence P-value they
//! replace.

pub mod em;
pub mod error;
mod numeric;
pub mod optimize;
pub mod paramfile;
pub mod posterior;
pub mod quadrature;
pub mod qvalue;
pub mod sim;
pub mod stats;
pub mod verify;

pub use em::{fit, FitConfig, FitResult};
pub use error::{Error, Result};
pub use posterior::{posterior_equivalence_probability, score_panel, GeneObservation, MixturePrior};
pub use qvalue::{build_table, q_value_at, QValueTable};
pub use stats::{equivalence_p_value, EquivalenceSpec, EstimateSummary};
