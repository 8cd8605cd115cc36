//! Double points of the network deformation and their local Milnor fibres.
//!
//! Deforming the reduced factors so that their product has only ordinary
//! double points, each double point of `f` becomes a point of local type
//! `x^p y^q`. A crossing of branches `i` and `j` has type `(m_i, m_j)` and
//! occurs `I_ij` times; a self crossing of branch `i` has type `(m_i, m_i)` and
//! occurs `delta_i` times.

use serde::{Deserialize, Serialize};

use crate::datum::EquisingularDatum;
use crate::gcd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeKind {
    /// Crossing of two distinct branches, `i < j`.
    Cross { i: usize, j: usize },
    SelfNode { i: usize },
}

/// A class of identical double points of type `D[p, q]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetworkNode {
    #[serde(flatten)]
    pub kind: NodeKind,
    pub p: u64,
    pub q: u64,
    pub copies: u64,
}

impl NetworkNode {
    /// Branch indices of the two local sides.
    pub fn sides(&self) -> (usize, usize) {
        match self.kind {
            NodeKind::Cross { i, j } => (i, j),
            NodeKind::SelfNode { i } => (i, i),
        }
    }

    pub fn local_fibre(&self) -> LocalFibre {
        local_fibre(self.p, self.q)
    }
}

/// Milnor fibre of `x^p y^q`: `gcd(p, q)` annuli.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFibre {
    pub components: u64,
    pub boundary_circles_side_p: u64,
    pub boundary_circles_side_q: u64,
}

pub fn local_fibre(p: u64, q: u64) -> LocalFibre {
    assert!(p >= 1 && q >= 1, "D[p,q] needs positive exponents");
    LocalFibre {
        components: gcd(p, q),
        boundary_circles_side_p: p,
        boundary_circles_side_q: q,
    }
}

/// Self nodes first in branch order, then crossings in `(i, j)` order.
pub fn build_network(datum: &EquisingularDatum) -> Vec<NetworkNode> {
    let branches = datum.branches();
    let r = branches.len();
    let mut nodes = Vec::new();
    for (i, b) in branches.iter().enumerate() {
        if b.delta > 0 {
            nodes.push(NetworkNode {
                kind: NodeKind::SelfNode { i },
                p: b.multiplicity,
                q: b.multiplicity,
                copies: b.delta,
            });
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            nodes.push(NetworkNode {
                kind: NodeKind::Cross { i, j },
                p: branches[i].multiplicity,
                q: branches[j].multiplicity,
                copies: datum.intersection(i, j),
            });
        }
    }
    nodes
}

/// Number of double points, i.e. the delta invariant of the reduced curve.
pub fn double_point_count(nodes: &[NetworkNode]) -> u64 {
    nodes.iter().map(|n| n.copies).sum()
}
