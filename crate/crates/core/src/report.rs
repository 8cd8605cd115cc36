//! Full analysis of one datum, in the JSON layout the CLI prints.

use serde::{Deserialize, Serialize};

use crate::datum::EquisingularDatum;
use crate::error::Result;
use crate::fibre::{build_fibre_graph, divide_by_gcd, monodromy_of, summary_of, FibreSummary};
use crate::homology::CokernelPresentation;
use crate::invariants::{
    beta_of, boundary2_of, classify_xr_of, transversal_data, upper_bound_of, BetaReport,
    TransversalData, UpperBoundVerdict, XrVerdict,
};
use crate::network::{build_network, NetworkNode};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromySection {
    pub cycle_type: Vec<usize>,
    pub permutation: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedSection {
    pub d: u64,
    pub datum: EquisingularDatum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalEntry {
    pub branch: usize,
    pub k: u64,
    pub components: u64,
    pub coker: CokernelPresentation,
    pub chain_ok: bool,
    /// Diagonal of the Smith form of `A_i - I`; filled only on request.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snf_diagonal: Option<Vec<String>>,
}

/// Sections that need a singular branch are `null` / empty for reduced data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub datum: EquisingularDatum,
    pub network: Vec<NetworkNode>,
    pub fibre: FibreSummary,
    pub monodromy: MonodromySection,
    pub reduced: ReducedSection,
    pub transversal: TransversalData,
    pub beta: Option<BetaReport>,
    pub vertical: Vec<VerticalEntry>,
    pub upper_bound: Option<UpperBoundVerdict>,
    pub xr_verdict: XrVerdict,
    pub version: String,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalyzeOptions {
    pub dump_snf: bool,
}

pub fn analyze(datum: &EquisingularDatum, options: AnalyzeOptions) -> Result<AnalysisReport> {
    let graph = build_fibre_graph(datum);
    let fibre = summary_of(datum, &graph)?;
    let monodromy = monodromy_of(&graph)?;
    let (d, reduced) = divide_by_gcd(datum);
    let xr_verdict = classify_xr_of(datum, &fibre)?;

    let singular = datum.singular_branches().next().is_some();
    let (beta, vertical, upper_bound) = if singular {
        let boundary = boundary2_of(datum, &graph)?;
        let upper = upper_bound_of(datum, &fibre, &boundary)?;
        let vertical = boundary
            .branches
            .iter()
            .map(|b| VerticalEntry {
                branch: b.branch,
                k: b.k,
                components: b.components,
                coker: b.coker.clone(),
                chain_ok: b.chain_ok(),
                snf_diagonal: options
                    .dump_snf
                    .then(|| b.snf_diagonal.iter().map(|x| x.to_string()).collect()),
            })
            .collect();
        (Some(beta_of(datum, &fibre)?), vertical, Some(upper))
    } else {
        (None, Vec::new(), None)
    };

    Ok(AnalysisReport {
        datum: datum.clone(),
        network: build_network(datum),
        fibre,
        monodromy: MonodromySection {
            cycle_type: monodromy.cycle_type,
            permutation: monodromy.permutation,
        },
        reduced: ReducedSection { d, datum: reduced },
        transversal: transversal_data(datum),
        beta,
        vertical,
        upper_bound,
        xr_verdict,
        version: VERSION.to_string(),
    })
}
