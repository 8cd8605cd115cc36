//! Invariants of the one-dimensional singular set at `n = 1`.
//!
//! Branches with `m_i >= 2` form the singular set. A slice transverse to such
//! a branch meets the fibre in the `m_i` points of `x^{m_i} = eps`, so the
//! transversal Milnor number is `m_i - 1`. Going once around the branch
//! permutes those points by a cyclic shift `k_i`; `F^perp` is the union of
//! the transversal fibres and `beta = dim H_1(F, F^perp)`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::datum::EquisingularDatum;
use crate::error::{Error, Result};
use crate::fibre::{build_fibre_graph, summary_of, FibreGraph, FibreSummary};
use crate::gcd;
use crate::homology::{cokernel_of, smith_normal_form, CokernelPresentation, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalFibre {
    pub branch: usize,
    pub fibre_size: u64,
    pub mu_perp: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalData {
    pub branches: Vec<TransversalFibre>,
    pub total_points: u64,
    pub total_mu_perp: u64,
}

pub fn transversal_data(datum: &EquisingularDatum) -> TransversalData {
    let branches: Vec<_> = datum
        .singular_branches()
        .map(|i| {
            let m = datum.branches()[i].multiplicity;
            TransversalFibre {
                branch: i,
                fibre_size: m,
                mu_perp: m - 1,
            }
        })
        .collect();
    TransversalData {
        total_points: branches.iter().map(|b| b.fibre_size).sum(),
        total_mu_perp: branches.iter().map(|b| b.mu_perp).sum(),
        branches,
    }
}

/// The three equivalent forms of `beta = 0`, evaluated separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaCriteria {
    /// `beta = 0`
    pub c1: bool,
    /// `chi(F) = 1 - sum mu_i^perp`
    pub c2: bool,
    /// `b_1(F) = 0` and `b_0(F) - 1 = sum mu_i^perp`
    pub c3: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaReport {
    #[serde(rename = "value")]
    pub beta: u64,
    pub b0: u64,
    pub b1: u64,
    pub chi: i64,
    pub total_transversal_points: u64,
    pub total_mu_perp: u64,
    pub singular_branch_count: usize,
    pub criteria: BetaCriteria,
    /// The datum is of class `x^r`.
    pub verdict_bobadilla: bool,
}

/// `beta = b_1 - b_0 + sum_{m_i >= 2} m_i`.
///
/// This is the rank count of `0 -> H_1(F) -> H_1(F, F^perp) -> H_0(F^perp)
/// -> H_0(F) -> 0` in unreduced homology; `H_0(F, F^perp)` vanishes because
/// every component of `F` carries points of every transversal fibre.
pub fn beta(datum: &EquisingularDatum) -> Result<BetaReport> {
    let graph = build_fibre_graph(datum);
    let summary = summary_of(datum, &graph)?;
    beta_of(datum, &summary)
}

pub(crate) fn beta_of(datum: &EquisingularDatum, fibre: &FibreSummary) -> Result<BetaReport> {
    let transversal = transversal_data(datum);
    if transversal.branches.is_empty() {
        return Err(Error::Isolated);
    }
    let value = fibre.b1 as i64 - fibre.b0 as i64 + transversal.total_points as i64;
    if value < 0 {
        return Err(Error::inconsistent("beta sign", value, ">= 0"));
    }
    let mu = transversal.total_mu_perp as i64;
    let criteria = BetaCriteria {
        c1: value == 0,
        c2: fibre.chi == 1 - mu,
        c3: fibre.b1 == 0 && fibre.b0 as i64 - 1 == mu,
    };
    Ok(BetaReport {
        beta: value as u64,
        b0: fibre.b0,
        b1: fibre.b1,
        chi: fibre.chi,
        total_transversal_points: transversal.total_points,
        total_mu_perp: transversal.total_mu_perp,
        singular_branch_count: transversal.branches.len(),
        criteria,
        verdict_bobadilla: datum.is_xr_class(),
    })
}

/// Transversal monodromy `A_i` of a singular branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalMonodromy {
    pub branch: usize,
    pub shift: u64,
    pub permutation_matrix: IntMatrix,
}

/// `k_i = sum_{j != i} m_j I_ij mod m_i`.
///
/// On a transversal slice the sheets over branch `i` are the `m_i`-th roots of
/// `eps / prod_{j != i} f_j^{m_j}`. Around the branch that product winds
/// `sum_{j != i} m_j I_ij` times; the branch's own factor labels the sheets and
/// contributes nothing. The sign convention is `+`; every verdict depends only
/// on `gcd(m_i, k_i)` and on `k_i = 0`.
pub fn vertical_shift(datum: &EquisingularDatum, i: usize) -> Result<VerticalMonodromy> {
    let m = datum.branches()[i].multiplicity;
    if m < 2 {
        return Err(Error::NotSingular(i));
    }
    let winding: u64 = (0..datum.branch_count())
        .filter(|&j| j != i)
        .map(|j| datum.branches()[j].multiplicity * datum.intersection(i, j))
        .sum();
    let shift = winding % m;
    Ok(VerticalMonodromy {
        branch: i,
        shift,
        permutation_matrix: IntMatrix::cyclic_shift(m as usize, shift as usize),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryComponents {
    pub branch: usize,
    pub k: u64,
    /// `gcd(m_i, k_i)`
    pub components: u64,
    pub coker: CokernelPresentation,
    #[serde(skip)]
    pub snf_diagonal: Vec<BigInt>,
    /// `d` divides `gcd(m_i, k_i)`.
    pub divides: bool,
    /// Each residue class of sheets lies in one component of `F`.
    pub well_defined: bool,
    /// The classes reach every component of `F`.
    pub onto: bool,
}

impl BoundaryComponents {
    pub fn chain_ok(&self) -> bool {
        self.divides && self.well_defined && self.onto
    }
}

/// Components of `d_2 F` per singular branch and the surjection chain
/// `H_0(F^perp) -> H_0(d_2 F) -> H_0(F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundary2Report {
    pub branches: Vec<BoundaryComponents>,
    pub chain_ok: bool,
}

pub fn boundary2_components(datum: &EquisingularDatum) -> Result<Boundary2Report> {
    boundary2_of(datum, &build_fibre_graph(datum))
}

pub(crate) fn boundary2_of(datum: &EquisingularDatum, graph: &FibreGraph) -> Result<Boundary2Report> {
    let singular: Vec<usize> = datum.singular_branches().collect();
    if singular.is_empty() {
        return Err(Error::Isolated);
    }
    let (d, labels) = graph.component_labels();
    let mut branches = Vec::with_capacity(singular.len());
    for i in singular {
        let vm = vertical_shift(datum, i)?;
        let m = datum.branches()[i].multiplicity;
        let components = gcd(m, vm.shift);
        let map = vm.permutation_matrix.sub(&IntMatrix::identity(m as usize));
        let snf = smith_normal_form(&map);
        let coker = cokernel_of(map.rows(), &snf);
        if coker.free_rank as u64 != components || !coker.is_free() {
            return Err(Error::inconsistent(
                "boundary components (cokernel vs gcd)",
                format!("{coker:?}"),
                components,
            ));
        }
        let mut image = vec![None; components as usize];
        let mut well_defined = true;
        for a in 0..m as usize {
            let target = labels[graph.sheet(i, a)];
            let slot = &mut image[a % components as usize];
            match *slot {
                None => *slot = Some(target),
                Some(t) if t != target => well_defined = false,
                Some(_) => {}
            }
        }
        let mut reached = vec![false; d];
        for t in image.into_iter().flatten() {
            reached[t] = true;
        }
        branches.push(BoundaryComponents {
            branch: i,
            k: vm.shift,
            components,
            coker,
            snf_diagonal: snf.diagonal(),
            divides: components.is_multiple_of(d as u64),
            well_defined,
            onto: reached.iter().all(|&r| r),
        });
    }
    Ok(Boundary2Report {
        chain_ok: branches.iter().all(BoundaryComponents::chain_ok),
        branches,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperBoundVerdict {
    /// `b_0(F) - 1 = sum mu_i^perp`
    pub hypothesis: bool,
    /// Every `coker(A_i - I)` is free and every `A_i` is the identity.
    pub conclusion_holds: bool,
}

impl UpperBoundVerdict {
    pub fn consistent(&self) -> bool {
        !self.hypothesis || self.conclusion_holds
    }
}

pub fn check_upper_bound(datum: &EquisingularDatum) -> Result<UpperBoundVerdict> {
    let graph = build_fibre_graph(datum);
    let fibre = summary_of(datum, &graph)?;
    upper_bound_of(datum, &fibre, &boundary2_of(datum, &graph)?)
}

pub(crate) fn upper_bound_of(
    datum: &EquisingularDatum,
    fibre: &FibreSummary,
    boundary: &Boundary2Report,
) -> Result<UpperBoundVerdict> {
    let mu = transversal_data(datum).total_mu_perp;
    let hypothesis = fibre.b0 - 1 == mu;
    let conclusion_holds = boundary
        .branches
        .iter()
        .all(|b| b.coker.is_free() && b.k == 0);
    Ok(UpperBoundVerdict {
        hypothesis,
        conclusion_holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XrVerdict {
    /// One branch with `delta = 0`.
    pub structural: bool,
    /// `b_1(F) = 0`.
    pub homological: bool,
    /// `r` in `x^r`, when the datum is of that class.
    pub exponent: Option<u64>,
    pub b1: u64,
}

/// Decides whether `f ~ x^r`, structurally and through `b_1(F) = 0`. The two
/// answers must agree.
pub fn classify_xr(datum: &EquisingularDatum) -> Result<XrVerdict> {
    classify_xr_of(datum, &crate::fibre::fibre_summary(datum)?)
}

pub(crate) fn classify_xr_of(datum: &EquisingularDatum, fibre: &FibreSummary) -> Result<XrVerdict> {
    let structural = datum.is_xr_class();
    let homological = fibre.b1 == 0;
    if structural != homological {
        return Err(Error::inconsistent(
            "x^r classification (structure vs b1 = 0)",
            structural,
            homological,
        ));
    }
    Ok(XrVerdict {
        structural,
        homological,
        exponent: structural.then(|| datum.branches()[0].multiplicity),
        b1: fibre.b1,
    })
}

/// Milnor number `2 delta - r + 1` of a reduced curve.
pub fn mu_reduced(datum: &EquisingularDatum) -> Result<u64> {
    if !datum.is_reduced() {
        return Err(Error::NotReduced);
    }
    Ok(2 * datum.total_delta() + 1 - datum.branch_count() as u64)
}
