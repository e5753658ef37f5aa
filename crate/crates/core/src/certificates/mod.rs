//! Arithmetic-rank certificates and the structural checks around them.
//!
//! A certificate is a list of random linear combinations of the invariant
//! entries together with a transcript proving that, in the polynomial ring,
//! they cut out the nullcone up to radical.

mod hsop;
mod identities;
mod local;

use std::time::Instant;

use serde::Serialize;

pub use hsop::{certify, sample_hsop, verify_certificate, AraCertificate, CertifyOptions};
pub use identities::{check_intersect_pij, check_intersection, check_t1_decomposition};
pub use local::{
    check_char2_example, check_localization_generic, check_localization_pfaffian,
    check_det_identity, check_symmetric_localization, symmetric_chart_count,
};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        CheckReport {
            name: name.into(),
            pass,
            witness: None,
            detail: None,
            elapsed_ms: None,
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub(crate) fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        self
    }

    /// Drops wall-clock data so that serialized output is reproducible.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}
