//! Equisingularity data: validation, the curve-spec JSON format, standard
//! families and exhaustive corpora.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gcd;

/// A reduced irreducible factor `f_i` together with its exponent in `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Branch {
    pub label: String,
    pub multiplicity: u64,
    /// Delta invariant of the reduced branch, i.e. the number of self double
    /// points it acquires in a network deformation.
    pub delta: u64,
}

impl Branch {
    pub fn new(label: impl Into<String>, multiplicity: u64, delta: u64) -> Self {
        Branch {
            label: label.into(),
            multiplicity,
            delta,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.multiplicity >= 2
    }
}

/// One violated datum invariant. Indices are 1-based in messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoBranches,
    ZeroMultiplicity { branch: usize },
    Shape { rows: usize, expected: usize },
    RowLength { row: usize, len: usize, expected: usize },
    NonzeroDiagonal { branch: usize },
    Asymmetric { i: usize, j: usize },
    NoIntersection { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NoBranches => write!(f, "at least one branch required"),
            Violation::ZeroMultiplicity { branch } => {
                write!(f, "multiplicity of branch {} must be >= 1", branch + 1)
            }
            Violation::Shape { rows, expected } => write!(
                f,
                "intersection matrix has {rows} rows, expected {expected}"
            ),
            Violation::RowLength { row, len, expected } => write!(
                f,
                "intersection row {} has {len} entries, expected {expected}",
                row + 1
            ),
            Violation::NonzeroDiagonal { branch } => {
                write!(f, "diagonal entry I_{0}{0} must be 0", branch + 1)
            }
            Violation::Asymmetric { i, j } => write!(
                f,
                "symmetry: I_{}{} != I_{}{}",
                i + 1,
                j + 1,
                j + 1,
                i + 1
            ),
            Violation::NoIntersection { i, j } => {
                write!(f, "I_{}{} >= 1 required", i + 1, j + 1)
            }
        }
    }
}

/// Checks every datum invariant and names all that fail.
pub fn validate(branches: &[Branch], intersections: &[Vec<u64>]) -> Result<(), Vec<Violation>> {
    let r = branches.len();
    let mut out = Vec::new();
    if r == 0 {
        out.push(Violation::NoBranches);
    }
    for (i, b) in branches.iter().enumerate() {
        if b.multiplicity == 0 {
            out.push(Violation::ZeroMultiplicity { branch: i });
        }
    }
    if intersections.len() != r {
        out.push(Violation::Shape {
            rows: intersections.len(),
            expected: r,
        });
        return Err(out);
    }
    let mut square = true;
    for (row, entries) in intersections.iter().enumerate() {
        if entries.len() != r {
            out.push(Violation::RowLength {
                row,
                len: entries.len(),
                expected: r,
            });
            square = false;
        }
    }
    if square {
        for i in 0..r {
            if intersections[i][i] != 0 {
                out.push(Violation::NonzeroDiagonal { branch: i });
            }
            for j in i + 1..r {
                if intersections[i][j] != intersections[j][i] {
                    out.push(Violation::Asymmetric { i, j });
                }
                if intersections[i][j] == 0 || intersections[j][i] == 0 {
                    out.push(Violation::NoIntersection { i, j });
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// The input germ `f = f_1^{m_1} ... f_r^{m_r}` described combinatorially.
///
/// Always valid: every constructor runs [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquisingularDatum {
    branches: Vec<Branch>,
    intersections: Vec<Vec<u64>>,
}

impl EquisingularDatum {
    pub fn new(branches: Vec<Branch>, intersections: Vec<Vec<u64>>) -> Result<Self> {
        validate(&branches, &intersections).map_err(Error::Invalid)?;
        Ok(EquisingularDatum {
            branches,
            intersections,
        })
    }

    /// A single branch `f_1^m`.
    pub fn single(multiplicity: u64, delta: u64) -> Result<Self> {
        Self::new(vec![Branch::new("f1", multiplicity, delta)], vec![vec![0]])
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn intersections(&self) -> &[Vec<u64>] {
        &self.intersections
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn intersection(&self, i: usize, j: usize) -> u64 {
        self.intersections[i][j]
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = u64> + '_ {
        self.branches.iter().map(|b| b.multiplicity)
    }

    /// `gcd(m_1, ..., m_r)`.
    pub fn multiplicity_gcd(&self) -> u64 {
        self.multiplicities().fold(0, gcd)
    }

    pub fn total_sheets(&self) -> u64 {
        self.multiplicities().sum()
    }

    pub fn is_reduced(&self) -> bool {
        self.branches.iter().all(|b| b.multiplicity == 1)
    }

    pub fn singular_branches(&self) -> impl Iterator<Item = usize> + '_ {
        self.branches
            .iter()
            .enumerate()
            .filter(|(_, b)| b.is_singular())
            .map(|(i, _)| i)
    }

    /// True for the `x^r` class: one smooth branch.
    pub fn is_xr_class(&self) -> bool {
        self.branches.len() == 1 && self.branches[0].delta == 0
    }

    /// Delta invariant of the reduced total curve: `sum delta_i + sum_{i<j} I_ij`.
    pub fn total_delta(&self) -> u64 {
        let own: u64 = self.branches.iter().map(|b| b.delta).sum();
        let r = self.branches.len();
        let cross: u64 = (0..r)
            .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
            .map(|(i, j)| self.intersections[i][j])
            .sum();
        own + cross
    }

    /// Same branches and intersections with every multiplicity replaced.
    pub(crate) fn with_multiplicities(&self, f: impl Fn(u64) -> u64) -> Self {
        let mut out = self.clone();
        for b in &mut out.branches {
            b.multiplicity = f(b.multiplicity);
        }
        out
    }

    /// Permutation-invariant comparison key: `(m_i, delta_i)` per branch, then
    /// the row-major intersection matrix, both in the given branch order.
    fn key_for(&self, order: &[usize]) -> (Vec<(u64, u64)>, Vec<u64>) {
        let pairs = order
            .iter()
            .map(|&i| (self.branches[i].multiplicity, self.branches[i].delta))
            .collect();
        let matrix = order
            .iter()
            .flat_map(|&i| order.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.intersections[i][j])
            .collect();
        (pairs, matrix)
    }

    /// Canonical branch order: sorted by `(m, delta)`, ties broken by the
    /// lexicographically smallest resulting intersection matrix.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut sorted: Vec<usize> = (0..self.branches.len()).collect();
        sorted.sort_by_key(|&i| (self.branches[i].multiplicity, self.branches[i].delta));
        let mut best: Option<(Vec<usize>, Vec<u64>)> = None;
        let mut current = Vec::with_capacity(sorted.len());
        let mut used = vec![false; sorted.len()];
        self.search_ties(&sorted, &mut current, &mut used, &mut best);
        best.map(|(order, _)| order).unwrap_or_default()
    }

    fn search_ties(
        &self,
        sorted: &[usize],
        current: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut Option<(Vec<usize>, Vec<u64>)>,
    ) {
        let pos = current.len();
        if pos == sorted.len() {
            let (_, matrix) = self.key_for(current);
            let better = match best {
                None => true,
                Some((_, m)) => matrix < *m,
            };
            if better {
                *best = Some((current.clone(), matrix));
            }
            return;
        }
        let target = &self.branches[sorted[pos]];
        for cand in 0..sorted.len() {
            let b = &self.branches[cand];
            if used[cand] || b.multiplicity != target.multiplicity || b.delta != target.delta {
                continue;
            }
            used[cand] = true;
            current.push(cand);
            self.search_ties(sorted, current, used, best);
            current.pop();
            used[cand] = false;
        }
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        let branches = order.iter().map(|&i| self.branches[i].clone()).collect();
        let intersections = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.intersections[i][j]).collect())
            .collect();
        EquisingularDatum {
            branches,
            intersections,
        }
    }

    pub fn canonical(&self) -> Self {
        self.permuted(&self.canonical_order())
    }

    /// Total order on datums up to branch permutation (labels ignored):
    /// branch count first, then the canonical key.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let a = self.key_for(&self.canonical_order());
        let b = other.key_for(&other.canonical_order());
        self.branches
            .len()
            .cmp(&other.branches.len())
            .then_with(|| a.cmp(&b))
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        self.canonical_cmp(other) == Ordering::Equal
    }

    /// Serializes to the direct curve-spec form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("datum serialization is infallible")
    }
}

impl fmt::Display for EquisingularDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<_> = self.multiplicities().collect();
        let d: Vec<_> = self.branches.iter().map(|b| b.delta).collect();
        write!(f, "{{m:{m:?}, δ:{d:?}, I:{:?}}}", self.intersections)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectBranch {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    multiplicity: u64,
    delta: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectSpec {
    branches: Vec<DirectBranch>,
    intersections: Vec<Vec<u64>>,
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
enum FamilySpec {
    Monomial { p: u64, q: u64 },
    Power { base: Value, exponent: u64 },
    Quasihomogeneous { branches: Vec<QuasiHomBranchSpec> },
}

impl Serialize for EquisingularDatum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DirectSpec {
            branches: self
                .branches
                .iter()
                .map(|b| DirectBranch {
                    label: Some(b.label.clone()),
                    multiplicity: b.multiplicity,
                    delta: b.delta,
                })
                .collect(),
            intersections: self.intersections.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EquisingularDatum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(d)?;
        from_value(value).map_err(serde::de::Error::custom)
    }
}

/// Parses a curve-spec document (direct or family form).
pub fn parse_datum(text: &str) -> Result<EquisingularDatum> {
    let value: Value = serde_json::from_str(text).map_err(syntax_error)?;
    from_value(value)
}

pub(crate) fn syntax_error(e: serde_json::Error) -> Error {
    Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Interprets an already-parsed JSON value as a curve spec.
pub fn from_value(value: Value) -> Result<EquisingularDatum> {
    let is_family = value.as_object().is_some_and(|o| o.contains_key("family"));
    if is_family {
        let family: FamilySpec =
            serde_json::from_value(value).map_err(|e| Error::Spec(e.to_string()))?;
        match family {
            FamilySpec::Monomial { p, q } => {
                if p == 0 || q == 0 {
                    return Err(Error::Spec("monomial exponents must be >= 1".into()));
                }
                Ok(from_monomial(p, q))
            }
            FamilySpec::Power { base, exponent } => {
                if exponent == 0 {
                    return Err(Error::Spec("power exponent must be >= 1".into()));
                }
                Ok(from_power(&from_value(base)?, exponent))
            }
            FamilySpec::Quasihomogeneous { branches } => from_quasihomogeneous(&branches),
        }
    } else {
        let direct: DirectSpec =
            serde_json::from_value(value).map_err(|e| Error::Spec(e.to_string()))?;
        let branches = direct
            .branches
            .into_iter()
            .enumerate()
            .map(|(i, b)| Branch {
                label: b.label.unwrap_or_else(|| format!("f{}", i + 1)),
                multiplicity: b.multiplicity,
                delta: b.delta,
            })
            .collect();
        EquisingularDatum::new(branches, direct.intersections)
    }
}

/// `x^p y^q`: the two coordinate axes, meeting once.
pub fn from_monomial(p: u64, q: u64) -> EquisingularDatum {
    assert!(p >= 1 && q >= 1, "monomial exponents must be positive");
    EquisingularDatum {
        branches: vec![Branch::new("x", p, 0), Branch::new("y", q, 0)],
        intersections: vec![vec![0, 1], vec![1, 0]],
    }
}

/// `base^e`: every multiplicity multiplied by `e`.
pub fn from_power(base: &EquisingularDatum, e: u64) -> EquisingularDatum {
    assert!(e >= 1, "power exponent must be positive");
    base.with_multiplicities(|m| m * e)
}

/// One quasi-homogeneous branch `y^a = x^b` (parametrized `(t^a, t^b)`)
/// raised to `multiplicity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasiHomBranchSpec {
    pub a: u64,
    pub b: u64,
    pub multiplicity: u64,
}

impl QuasiHomBranchSpec {
    pub fn new(a: u64, b: u64, multiplicity: u64) -> Result<Self> {
        let spec = QuasiHomBranchSpec { a, b, multiplicity };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        if self.a == 0 || self.b == 0 || self.multiplicity == 0 {
            return Err(Error::Spec(format!(
                "quasihomogeneous branch ({}, {}, m={}): entries must be >= 1",
                self.a, self.b, self.multiplicity
            )));
        }
        if gcd(self.a, self.b) != 1 {
            return Err(Error::Spec(format!(
                "quasihomogeneous branch ({}, {}): a and b must be coprime",
                self.a, self.b
            )));
        }
        Ok(())
    }

    pub fn delta(&self) -> u64 {
        (self.a - 1) * (self.b - 1) / 2
    }

    /// Intersection multiplicity with another branch of the family, assuming
    /// generic distinct coefficients when the exponent pairs coincide.
    pub fn intersection(&self, other: &Self) -> u64 {
        if (self.a, self.b) == (other.a, other.b) {
            self.a * self.b
        } else {
            (self.a * other.b).min(other.a * self.b)
        }
    }
}

pub fn from_quasihomogeneous(specs: &[QuasiHomBranchSpec]) -> Result<EquisingularDatum> {
    if specs.is_empty() {
        return Err(Error::Spec("quasihomogeneous family needs at least one branch".into()));
    }
    for s in specs {
        s.check()?;
    }
    let branches = specs
        .iter()
        .enumerate()
        .map(|(i, s)| Branch::new(format!("f{}", i + 1), s.multiplicity, s.delta()))
        .collect();
    let intersections = specs
        .iter()
        .enumerate()
        .map(|(i, si)| {
            specs
                .iter()
                .enumerate()
                .map(|(j, sj)| if i == j { 0 } else { si.intersection(sj) })
                .collect()
        })
        .collect();
    EquisingularDatum::new(branches, intersections)
}

/// Bounds of an exhaustive corpus. `max_delta` may be 0 (smooth branches
/// only); the other bounds are at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusBounds {
    pub max_branches: usize,
    pub max_multiplicity: u64,
    pub max_delta: u64,
    pub max_intersection: u64,
}

impl CorpusBounds {
    pub fn new(
        max_branches: usize,
        max_multiplicity: u64,
        max_delta: u64,
        max_intersection: u64,
    ) -> Result<Self> {
        if max_branches == 0 || max_multiplicity == 0 || max_intersection == 0 {
            return Err(Error::Spec(
                "corpus bounds on branches, multiplicity and intersection must be >= 1".into(),
            ));
        }
        Ok(CorpusBounds {
            max_branches,
            max_multiplicity,
            max_delta,
            max_intersection,
        })
    }
}

/// Every valid datum within `bounds`, one representative per branch
/// permutation class.
///
/// Order: by branch count, then by the sorted `(m, delta)` sequence, then by
/// the upper triangle of the intersection matrix (row-major). Each yielded
/// datum is its own canonical form and carries labels `f1..fr`.
pub fn enumerate_corpus(bounds: &CorpusBounds) -> Vec<EquisingularDatum> {
    let pairs: Vec<(u64, u64)> = (1..=bounds.max_multiplicity)
        .flat_map(|m| (0..=bounds.max_delta).map(move |d| (m, d)))
        .collect();
    let mut out = Vec::new();
    for r in 1..=bounds.max_branches {
        let upper = r * (r - 1) / 2;
        // non-decreasing index sequences into `pairs`
        let mut idx = vec![0usize; r];
        loop {
            let branches: Vec<Branch> = idx
                .iter()
                .enumerate()
                .map(|(k, &p)| Branch::new(format!("f{}", k + 1), pairs[p].0, pairs[p].1))
                .collect();
            let mut tri = vec![1u64; upper];
            loop {
                let datum = EquisingularDatum {
                    branches: branches.clone(),
                    intersections: fill_symmetric(r, &tri),
                };
                let identity: Vec<usize> = (0..r).collect();
                if datum.key_for(&datum.canonical_order()) == datum.key_for(&identity) {
                    out.push(datum);
                }
                if !odometer(&mut tri, 1, bounds.max_intersection) {
                    break;
                }
            }
            if !next_multiset(&mut idx, pairs.len()) {
                break;
            }
        }
    }
    out
}

fn fill_symmetric(r: usize, tri: &[u64]) -> Vec<Vec<u64>> {
    let mut m = vec![vec![0; r]; r];
    let mut k = 0;
    for i in 0..r {
        for j in i + 1..r {
            m[i][j] = tri[k];
            m[j][i] = tri[k];
            k += 1;
        }
    }
    m
}

/// Advances `digits` (each in `lo..=hi`) lexicographically; false on wrap.
fn odometer(digits: &mut [u64], lo: u64, hi: u64) -> bool {
    for d in digits.iter_mut().rev() {
        if *d < hi {
            *d += 1;
            return true;
        }
        *d = lo;
    }
    false
}

/// Next non-decreasing sequence over `0..n` in lexicographic order.
fn next_multiset(idx: &mut [usize], n: usize) -> bool {
    for k in (0..idx.len()).rev() {
        if idx[k] + 1 < n {
            let v = idx[k] + 1;
            for x in &mut idx[k..] {
                *x = v;
            }
            return true;
        }
    }
    false
}
