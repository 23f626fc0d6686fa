//! Thermodynamic formalism on subshifts of finite type.
//!
//! Pressure, Gibbs and equilibrium states, entropy and relative entropy,
//! Hofbauer's phase transition and Bowen's dimension equation for
//! piecewise-linear Markov repellers. Most quantities come with a second,
//! independent computation so results can be cross-checked.

pub mod error;
pub mod hofbauer;
pub mod interval_maps;
pub mod linalg;
pub mod measures;
pub mod potentials;
pub mod roots;
pub mod sft;
pub mod transfer;
pub mod variational;

pub use error::{Error, Result};
pub use measures::MarkovMeasure;
pub use potentials::{LocallyConstantPotential, Observable};
pub use sft::{Alphabet, Sft, Word, DEFAULT_BUDGET};
pub use transfer::{GibbsMeasure, TransferMatrix};
