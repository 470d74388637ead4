//! Exact optimization and landscape analysis for H/P sequence design on a
//! fixed backbone.
//!
//! The model scores a binary hydrophobic/polar sequence x with
//! `f(x) = -sum a_ij x_i x_j + sum b_i x_i` (all `a_ij >= 0`, exact rational
//! coefficients). Everything downstream is exact:
//!
//! * [`mincut`] finds one global optimum through a single max-flow run.
//! * [`pqdag`] condenses the residual graph into a supernode dag whose
//!   ideals are in bijection with the full optimum set, and enumerates it.
//! * [`landscape`] answers nearest-optimum, intersection, diameter, and
//!   mutation-connectivity queries on optimum sets.
//! * [`paramsweep`] traces one-parameter lower envelopes: energy-versus-
//!   distance plots, surface-weight tuning, and a lazy stream of suboptimal
//!   sequences in nondecreasing energy order.
//! * [`oracle`] holds capped brute-force re-implementations used to validate
//!   all of the above on small instances.
//!
//! ```
//! use hpdesign::model::{FitnessFunction, Rational, parse_rational};
//! use hpdesign::mincut::one_optimum;
//!
//! let rat = |s| parse_rational(s).unwrap();
//! let phi = FitnessFunction::new(
//!     3,
//!     vec![((0, 1), rat("2"))],
//!     vec![rat("1"), rat("1"), rat("-1")],
//! ).unwrap();
//! let (x, value) = one_optimum(&phi);
//! assert_eq!(value, rat("-1"));
//! assert!(x.to_string() == "PPH" || x.to_string() == "HHH");
//! ```

pub mod error;
pub mod model;
pub mod mincut;
pub mod pqdag;
pub mod landscape;
pub mod paramsweep;
pub mod oracle;
pub mod cli;

mod scc;

pub use error::{Error, Result};
pub use model::{FitnessFunction, Geometry, HpSequence, Rational};
