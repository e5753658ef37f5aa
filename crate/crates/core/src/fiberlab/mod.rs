//! Exact matrix constructions behind the fiber-bundle structure of the
//! strata: frame completions, congruence normal forms, square-root sections
//! and chart trivializations. [`unitary`] holds the one floating-point
//! construction, a symmetric square root of unitary symmetric matrices.

mod charts;
mod congruence;
mod frames;
pub mod sample;
mod suites;
pub mod unitary;

pub use charts::{
    chart_trivializations, grassmann_kernel_chart, p_fiber_map, random_sample, ChartFamily,
    ChartParams, ChartSample, CoverKind, RoundTrip,
};
pub use congruence::{alt_block_reduce, alt_sqrt_section, sym_block_reduce, sym_sqrt_section};
pub use frames::{omega_column, orthogonal_complete, symplectic_complete, symplectic_form};
pub use suites::{
    alt_sqrt_suite, chart_suite, random_invertible_alternating, symplectic_suite, unitary_suite,
};
pub use unitary::{unitary_sym_sqrt, ComplexMatrix, Tolerance, UnitaryRoot};
