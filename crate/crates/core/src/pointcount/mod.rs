//! Point counts of the strata over small prime fields.
//!
//! [`enumerate`] visits every matrix in the ambient space and tests the
//! defining equations. [`closed_count`] evaluates the recursions coming from
//! the bundle structure, [`check_chain`] compares the two sides of each
//! bundle and [`poly_fit`] looks for a count polynomial in q.

mod chain;
mod closed;
mod fit;
mod fp;
mod strata;

pub use chain::{check_chain, ChainFamily, ChainReport, ChainRow};
pub use closed::closed_count;
pub use fit::{fitted_degree, poly_fit, FitSample, PolyFit};
pub use strata::{
    enumerate, enumerate_with_budget, CountReport, Space, StratumParams, StratumSpec,
    DEFAULT_BUDGET,
};
