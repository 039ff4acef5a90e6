//! Executable lower bounds and exact small cases for van der Waerden-type
//! Ramsey functions of semi-progressions and quasi-progressions.
//!
//! - [`progression`]: families, colorings, conjugate/frequency vectors,
//!   weights, primary progressions and forced elements.
//! - [`spectral`]: closed-form and transfer-matrix bounds.
//! - [`oracle`]: exhaustive counting over all colorings at small `N`.
//! - [`search`]: exact thresholds by backtracking, random witness search.
//! - [`witness`]: the witness certificate file format.

pub mod error;
pub mod oracle;
pub mod progression;
pub mod search;
pub mod spectral;
pub mod witness;

pub use error::{Error, Result};
pub use progression::{
    conjugate_vector, find_monochromatic, forced_elements, frequency_vector, pair_multiplicity,
    primary_progression, validate_progression, weight, Coloring, ConjugateVector, Family,
    FrequencyVector, Progression,
};
