//! Exact τ-factorization and τ-U-factorization analysis in finite
//! commutative rings with zero-divisors.
//!
//! The crate constructs finite rings (`Z/nZ`, direct products, explicit
//! Cayley tables) and symmetric relations τ on their nonzero non-units,
//! then decides factorization questions exactly: enumerating
//! τ-factorizations and τ-U-factorizations, classifying elements by four
//! irreducibility grades, deciding ring-level finite-factorization
//! properties with witnesses, and verifying a catalog of theorems over
//! corpora of small rings.

mod analyzer;
mod bits;
mod error;
mod factor;
mod props;
mod ring;
mod search;
mod tau;

pub mod classify;
pub mod products;
pub mod render;
pub mod theorem;

pub use analyzer::Analyzer;
pub use classify::{Grade, GradeFlags, GradeWitness, IrreducibilityReport};
pub use error::{Error, Result};
pub use factor::{
    apply_refinement, apply_u_refinement, check_tau_factorization, check_u_factorization,
    to_u_factorization, u_split, FactEnumeration, FactFailure, Factorization, PumpCycle,
    UFactEntry, UFactEnumeration, UFactorization,
};
pub use props::{check_property, PropName, PropWitness, PropertyVerdict};
pub use ring::{
    AssocMode, CarrierPartition, Element, Ideal, Ring, RingFlags, RingId, RingKind,
};
pub use tau::{RelationReport, RelationWitness, TauKind, TauRelation};

use std::rc::Rc;

/// One-shot wrappers mirroring the analyzer's search-backed operations.
pub fn enumerate_tau_factorizations(
    ring: &Ring,
    tau: &TauRelation,
    a: Element,
    beta: AssocMode,
    cap: Option<usize>,
) -> Result<FactEnumeration> {
    Analyzer::new(ring, tau).enumerate_tau_factorizations(a, beta, cap)
}

pub fn enumerate_tau_u_factorizations(
    ring: &Ring,
    tau: &TauRelation,
    a: Element,
    beta: AssocMode,
) -> Result<UFactEnumeration> {
    Analyzer::new(ring, tau).enumerate_tau_u_factorizations(a, beta)
}

pub fn unboundedness_certificate(
    ring: &Ring,
    tau: &TauRelation,
    a: Element,
) -> Result<Option<PumpCycle>> {
    Analyzer::new(ring, tau).unboundedness_certificate(a)
}

pub fn relation_report(ring: &Ring, tau: &TauRelation) -> Rc<RelationReport> {
    Analyzer::new(ring, tau).relation_report()
}
