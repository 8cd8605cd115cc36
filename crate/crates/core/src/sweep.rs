//! Property sweeps over exhaustive corpora.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datum::{enumerate_corpus, CorpusBounds, EquisingularDatum};
use crate::error::{Error, Result};
use crate::fibre::{
    build_fibre_graph, divide_by_gcd, euler_characteristic_closed, monodromy_of, summary_of,
    FibreGraph,
};
use crate::invariants::{beta_of, boundary2_of, classify_xr_of, mu_reduced, upper_bound_of, BetaReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// `b_0(F) = gcd(m_i)`.
    LemmaGcd,
    /// `(b_0, b_1, chi)` scale by `d` under `f = g^d`, and `g` has connected fibre.
    LemmaDivide,
    ChiTwoRoute,
    /// `b_1 = 2 delta - r + 1` on reduced data.
    MuClassical,
    /// `b_1 = 0` exactly for `x^r`.
    Prop1Xr,
    MonodromyCycle,
    BetaNonneg,
    /// `beta = 0` exactly for `x^r`, and the two `beta = 0` criteria agree.
    Bobadilla,
    /// `coker(A_i - I)` free of rank `gcd(m_i, k_i)`, `d | gcd(m_i, k_i)`,
    /// surjection chain onto `H_0(F)`.
    CokerFree,
    UpperBound,
    /// The Euler characteristic form of `beta = 0`. Opt-in.
    Prop2ChiForm,
}

impl Property {
    pub const ALL: [Property; 11] = [
        Property::LemmaGcd,
        Property::LemmaDivide,
        Property::ChiTwoRoute,
        Property::MuClassical,
        Property::Prop1Xr,
        Property::MonodromyCycle,
        Property::BetaNonneg,
        Property::Bobadilla,
        Property::CokerFree,
        Property::UpperBound,
        Property::Prop2ChiForm,
    ];

    /// Everything except the opt-in checks.
    pub fn defaults() -> Vec<Property> {
        Self::ALL
            .into_iter()
            .filter(|p| *p != Property::Prop2ChiForm)
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Property::LemmaGcd => "lemma-gcd",
            Property::LemmaDivide => "lemma-divide",
            Property::ChiTwoRoute => "chi-two-route",
            Property::MuClassical => "mu-classical",
            Property::Prop1Xr => "prop1-xr",
            Property::MonodromyCycle => "monodromy-cycle",
            Property::BetaNonneg => "beta-nonneg",
            Property::Bobadilla => "bobadilla",
            Property::CokerFree => "coker-free",
            Property::UpperBound => "upper-bound",
            Property::Prop2ChiForm => "prop2-chi-form",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Spec(format!("unknown property '{s}'")))
    }
}

/// Parses a comma-separated property list; duplicates are dropped.
pub fn parse_properties(list: &str) -> Result<Vec<Property>> {
    let mut props = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Property::from_str)
        .collect::<Result<Vec<_>>>()?;
    props.sort_unstable();
    props.dedup();
    Ok(props)
}

pub const DOCUMENTED: &str = "documented";
pub const UNDOCUMENTED: &str = "undocumented";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepViolation {
    pub datum: EquisingularDatum,
    pub property: String,
    pub expected: String,
    pub got: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepResult {
    pub bounds: CorpusBounds,
    pub properties: Vec<String>,
    pub checked: usize,
    pub violations: Vec<SweepViolation>,
    /// Wall time; not serialized so that reports stay byte-identical.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SweepResult {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `properties` on every datum of the corpus using `jobs` workers.
/// Violations come back in corpus order, then property order, independent of
/// `jobs`.
pub fn run_sweep(bounds: &CorpusBounds, properties: &[Property], jobs: usize) -> Result<SweepResult> {
    let start = Instant::now();
    let corpus = enumerate_corpus(bounds);
    let mut props = properties.to_vec();
    props.sort_unstable();
    props.dedup();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Spec(format!("worker pool: {e}")))?;
    let per_datum: Vec<Vec<SweepViolation>> =
        pool.install(|| corpus.par_iter().map(|d| check_datum(d, &props)).collect());
    Ok(SweepResult {
        bounds: *bounds,
        properties: props.iter().map(|p| p.name().to_string()).collect(),
        checked: corpus.len(),
        violations: per_datum.into_iter().flatten().collect(),
        elapsed: start.elapsed(),
    })
}

/// Raw graph quantities, computed without the cross-checks in
/// [`summary_of`] so that the sweep can report which route disagrees.
struct Raw {
    components: u64,
    chi: i64,
    b1: i64,
}

fn raw(graph: &FibreGraph) -> Raw {
    let components = graph.component_labels().0 as u64;
    let chi = graph.euler_characteristic();
    Raw {
        components,
        chi,
        b1: components as i64 - chi,
    }
}

pub fn check_datum(datum: &EquisingularDatum, properties: &[Property]) -> Vec<SweepViolation> {
    let graph = build_fibre_graph(datum);
    let raw_f = raw(&graph);
    let summary = summary_of(datum, &graph);
    let singular = datum.singular_branches().next().is_some();
    let beta: Option<Result<BetaReport>> = singular.then(|| {
        summary.clone().and_then(|s| beta_of(datum, &s))
    });

    let mut out = Vec::new();
    let mut fail = |p: Property, expected: String, got: String, label: Option<&str>| {
        out.push(SweepViolation {
            datum: datum.clone(),
            property: p.name().to_string(),
            expected,
            got,
            label: label.map(str::to_string),
        })
    };

    for &p in properties {
        match p {
            Property::LemmaGcd => {
                let gcd = datum.multiplicity_gcd();
                if raw_f.components != gcd {
                    fail(p, format!("b0 = {gcd}"), format!("b0 = {}", raw_f.components), None);
                }
            }
            Property::ChiTwoRoute => {
                let closed = euler_characteristic_closed(datum);
                if raw_f.chi != closed {
                    fail(p, format!("chi = {closed}"), format!("V - E = {}", raw_f.chi), None);
                }
            }
            Property::LemmaDivide => {
                let (d, reduced) = divide_by_gcd(datum);
                let small = raw(&build_fibre_graph(&reduced));
                let d = d as i64;
                let expected = (d * small.components as i64, d * small.b1, d * small.chi);
                let got = (raw_f.components as i64, raw_f.b1, raw_f.chi);
                if expected != got {
                    fail(p, format!("(b0, b1, chi) = {expected:?}"), format!("{got:?}"), None);
                }
                if small.components != 1 {
                    fail(p, "reduced b0 = 1".into(), format!("reduced b0 = {}", small.components), None);
                }
            }
            Property::MuClassical => {
                if let Ok(mu) = mu_reduced(datum) {
                    if raw_f.b1 != mu as i64 {
                        fail(p, format!("b1 = mu = {mu}"), format!("b1 = {}", raw_f.b1), None);
                    }
                }
            }
            Property::Prop1Xr => {
                let xr = datum.is_xr_class();
                if (raw_f.b1 == 0) != xr {
                    fail(p, format!("b1 = 0 is {xr}"), format!("b1 = {}", raw_f.b1), None);
                }
                if let Err(e) = summary.clone().and_then(|s| classify_xr_of(datum, &s)) {
                    fail(p, "consistent classification".into(), e.to_string(), None);
                }
            }
            Property::MonodromyCycle => match monodromy_of(&graph) {
                Ok(m) if m.cycle_type == [raw_f.components as usize] => {}
                Ok(m) => fail(p, format!("[{}]", raw_f.components), format!("{:?}", m.cycle_type), None),
                Err(e) => fail(p, format!("[{}]", raw_f.components), e.to_string(), None),
            },
            Property::BetaNonneg => {
                if let Some(Err(e)) = &beta {
                    fail(p, "beta >= 0".into(), e.to_string(), None);
                }
            }
            Property::Bobadilla => match &beta {
                Some(Ok(b)) => {
                    if b.criteria.c1 != b.verdict_bobadilla {
                        fail(
                            p,
                            format!("beta = 0 is {}", b.verdict_bobadilla),
                            format!("beta = {}", b.beta),
                            None,
                        );
                    }
                    if b.criteria.c1 != b.criteria.c3 {
                        fail(p, format!("C3 = {}", b.criteria.c1), format!("C3 = {}", b.criteria.c3), None);
                    }
                }
                Some(Err(e)) => fail(p, "beta report".into(), e.to_string(), None),
                None => {}
            },
            Property::CokerFree => {
                if singular {
                    match boundary2_of(datum, &graph) {
                        Ok(report) => {
                            for b in report.branches.iter().filter(|b| !b.chain_ok()) {
                                fail(
                                    p,
                                    format!("branch {}: d | {} and surjective chain", b.branch, b.components),
                                    format!(
                                        "divides={} well_defined={} onto={}",
                                        b.divides, b.well_defined, b.onto
                                    ),
                                    None,
                                );
                            }
                        }
                        Err(e) => fail(p, "free cokernel of rank gcd(m, k)".into(), e.to_string(), None),
                    }
                }
            }
            Property::UpperBound => {
                if singular {
                    let verdict = summary.clone().and_then(|s| {
                        boundary2_of(datum, &graph).and_then(|b| upper_bound_of(datum, &s, &b))
                    });
                    match verdict {
                        Ok(v) if v.consistent() => {}
                        Ok(_) => fail(p, "all k_i = 0".into(), "some k_i != 0".into(), None),
                        Err(e) => fail(p, "upper bound verdict".into(), e.to_string(), None),
                    }
                }
            }
            Property::Prop2ChiForm => match &beta {
                Some(Ok(b)) if b.criteria.c1 != b.criteria.c2 => {
                    let label = if b.verdict_bobadilla { DOCUMENTED } else { UNDOCUMENTED };
                    fail(
                        p,
                        format!("chi = 1 - sum mu_perp is {}", b.criteria.c1),
                        format!("chi = {}, 1 - sum mu_perp = {}", b.chi, 1 - b.total_mu_perp as i64),
                        Some(label),
                    );
                }
                Some(Err(e)) => fail(p, "beta report".into(), e.to_string(), None),
                _ => {}
            },
        }
    }
    out
}
