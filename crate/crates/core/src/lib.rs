//! Topology of Milnor fibres of non-reduced plane curve singularities.
//!
//! A germ `f = f_1^{m_1} ... f_r^{m_r}` is described by its equisingularity
//! datum: the multiplicity and delta invariant of each reduced branch plus the
//! pairwise intersection multiplicities. From that datum the crate builds the
//! network deformation (ordinary double points of local type `x^p y^q`), a
//! graph homotopy model of the Milnor fibre, and the invariants attached to the
//! one-dimensional singular set: transversal fibres, vertical monodromies,
//! `beta = dim H_1(F, F^perp)` and the components of the boundary part over the
//! singular link.
//!
//! Every quantity is exact integer arithmetic. Numbers that can be obtained two
//! ways (Euler characteristic, component count) are computed both ways and
//! compared before they are returned.

pub mod datum;
pub mod error;
pub mod fibre;
pub mod homology;
pub mod invariants;
pub mod network;
pub mod report;
pub mod sweep;

pub use datum::{Branch, CorpusBounds, EquisingularDatum, QuasiHomBranchSpec, Violation};
pub use error::{Error, Result};
pub use fibre::{ComponentMonodromy, FibreGraph, FibreSummary};
pub use homology::{CokernelPresentation, IntMatrix, SmithDecomposition};
pub use invariants::{BetaReport, Boundary2Report, TransversalData, VerticalMonodromy};
pub use network::{LocalFibre, NetworkNode, NodeKind};

/// Greatest common divisor with `gcd(0, n) = n`.
pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}
