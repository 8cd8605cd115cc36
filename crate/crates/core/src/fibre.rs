//! Graph homotopy model of the Milnor fibre.
//!
//! The fibre is assembled from `S = sum m_i` sheets (one disc per sheet of
//! each branch), with two small discs removed per double point and the holes
//! joined by the annuli of the local fibre `x^p y^q = eps`. As an open surface
//! it deformation retracts onto a graph:
//!
//! * one vertex per sheet,
//! * per expanded double point of type `D[p, q]`, `g = gcd(p, q)` annulus
//!   vertices, each with a loop edge (its core circle) and an incidence edge
//!   to every sheet on either side whose index is congruent to it mod `g`.
//!
//! Each gadget contributes `g - (g + p + q) = -(p + q)` to `V - E`, matching
//! the disc deletions. For self nodes both sides enumerate the same branch and
//! annulus `c` meets sheet `c` on both sides.

use serde::{Deserialize, Serialize};

use crate::datum::EquisingularDatum;
use crate::error::{Error, Result};
use crate::network::build_network;

/// Union-find over vertex indices.
struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[i] != root {
            let next = self.parent[i];
            self.parent[i] = root;
            i = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// One materialized double point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeGadget {
    /// Index into the network node list.
    pub node: usize,
    pub sides: (usize, usize),
    /// First annulus vertex; annuli occupy `first_annulus..first_annulus + annuli`.
    pub first_annulus: usize,
    pub annuli: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreGraph {
    multiplicities: Vec<usize>,
    sheet_offsets: Vec<usize>,
    gadgets: Vec<NodeGadget>,
    vertex_count: usize,
    /// Undirected edges; a loop is `(v, v)`.
    edges: Vec<(usize, usize)>,
}

impl FibreGraph {
    pub fn sheet_count(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn annulus_count(&self) -> usize {
        self.vertex_count - self.sheet_count()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn gadgets(&self) -> &[NodeGadget] {
        &self.gadgets
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a == b).count()
    }

    /// Vertex of sheet `a` of branch `i`.
    pub fn sheet(&self, branch: usize, a: usize) -> usize {
        debug_assert!(a < self.multiplicities[branch]);
        self.sheet_offsets[branch] + a
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64
    }

    /// Component label of every vertex. Labels are `0..d`, numbered by the
    /// smallest vertex they contain.
    pub fn component_labels(&self) -> (usize, Vec<usize>) {
        let mut sets = DisjointSets::new(self.vertex_count);
        for &(a, b) in &self.edges {
            sets.union(a, b);
        }
        let mut label_of_root = vec![usize::MAX; self.vertex_count];
        let mut labels = Vec::with_capacity(self.vertex_count);
        let mut next = 0;
        for v in 0..self.vertex_count {
            let root = sets.find(v);
            if label_of_root[root] == usize::MAX {
                label_of_root[root] = next;
                next += 1;
            }
            labels.push(label_of_root[root]);
        }
        (next, labels)
    }

    /// Monodromy lift: sheet `a` of branch `i` goes to sheet `a + 1 mod m_i`,
    /// annulus `c` of a gadget to annulus `c + 1 mod g` of the same gadget.
    pub fn sheet_shift(&self, v: usize) -> usize {
        if v < self.sheet_count() {
            let branch = self.sheet_offsets.partition_point(|&o| o <= v) - 1;
            let a = v - self.sheet_offsets[branch];
            self.sheet_offsets[branch] + (a + 1) % self.multiplicities[branch]
        } else {
            let k = self.gadgets.partition_point(|g| g.first_annulus <= v) - 1;
            let g = &self.gadgets[k];
            g.first_annulus + (v - g.first_annulus + 1) % g.annuli
        }
    }

    /// True when `phi` maps the edge multiset onto itself.
    pub fn is_automorphism(&self, phi: impl Fn(usize) -> usize) -> bool {
        let norm = |(a, b): (usize, usize)| if a <= b { (a, b) } else { (b, a) };
        let mut before: Vec<_> = self.edges.iter().copied().map(norm).collect();
        let mut after: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b)| norm((phi(a), phi(b))))
            .collect();
        before.sort_unstable();
        after.sort_unstable();
        before == after
    }
}

pub fn build_fibre_graph(datum: &EquisingularDatum) -> FibreGraph {
    let multiplicities: Vec<usize> = datum.multiplicities().map(|m| m as usize).collect();
    let mut sheet_offsets = Vec::with_capacity(multiplicities.len());
    let mut vertex_count = 0;
    for &m in &multiplicities {
        sheet_offsets.push(vertex_count);
        vertex_count += m;
    }
    let mut gadgets = Vec::new();
    let mut edges = Vec::new();
    for (k, node) in build_network(datum).iter().enumerate() {
        let (side_p, side_q) = node.sides();
        let (p, q) = (node.p as usize, node.q as usize);
        let g = node.local_fibre().components as usize;
        for _ in 0..node.copies {
            let first = vertex_count;
            vertex_count += g;
            for c in 0..g {
                let v = first + c;
                edges.push((v, v));
                edges.extend((c..p).step_by(g).map(|a| (v, sheet_offsets[side_p] + a)));
                edges.extend((c..q).step_by(g).map(|b| (v, sheet_offsets[side_q] + b)));
            }
            gadgets.push(NodeGadget {
                node: k,
                sides: (side_p, side_q),
                first_annulus: first,
                annuli: g,
            });
        }
    }
    FibreGraph {
        multiplicities,
        sheet_offsets,
        gadgets,
        vertex_count,
        edges,
    }
}

/// `chi(F) = sum_i m_i (1 - 2 delta_i - sum_{j != i} I_ij)`.
pub fn euler_characteristic_closed(datum: &EquisingularDatum) -> i64 {
    let r = datum.branch_count();
    datum
        .branches()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let crossings: u64 = (0..r).filter(|&j| j != i).map(|j| datum.intersection(i, j)).sum();
            b.multiplicity as i64 * (1 - 2 * b.delta as i64 - crossings as i64)
        })
        .sum()
}

/// `b_0`, `b_1` and `chi` of the Milnor fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreSummary {
    pub d: u64,
    pub b0: u64,
    pub b1: u64,
    pub chi: i64,
    pub chi_closed_form: i64,
}

pub fn fibre_summary(datum: &EquisingularDatum) -> Result<FibreSummary> {
    summary_of(datum, &build_fibre_graph(datum))
}

pub(crate) fn summary_of(datum: &EquisingularDatum, graph: &FibreGraph) -> Result<FibreSummary> {
    let (components, _) = graph.component_labels();
    let d = components as u64;
    let gcd = datum.multiplicity_gcd();
    if d != gcd {
        return Err(Error::inconsistent("component count (graph vs gcd)", d, gcd));
    }
    let chi = graph.euler_characteristic();
    let chi_closed_form = euler_characteristic_closed(datum);
    if chi != chi_closed_form {
        return Err(Error::inconsistent("euler characteristic (graph vs closed form)", chi, chi_closed_form));
    }
    let b1 = d as i64 - chi;
    if b1 < 0 {
        return Err(Error::inconsistent("first betti number sign", b1, ">= 0"));
    }
    Ok(FibreSummary {
        d,
        b0: d,
        b1: b1 as u64,
        chi,
        chi_closed_form,
    })
}

/// Action of the Milnor monodromy on the `d` components of `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentMonodromy {
    /// `permutation[c]` is the image of component `c`.
    pub permutation: Vec<usize>,
    /// Cycle lengths, largest first.
    pub cycle_type: Vec<usize>,
}

pub fn component_monodromy(datum: &EquisingularDatum) -> Result<ComponentMonodromy> {
    monodromy_of(&build_fibre_graph(datum))
}

pub(crate) fn monodromy_of(graph: &FibreGraph) -> Result<ComponentMonodromy> {
    if !graph.is_automorphism(|v| graph.sheet_shift(v)) {
        return Err(Error::inconsistent("sheet shift", "not a graph automorphism", "automorphism"));
    }
    let (d, labels) = graph.component_labels();
    let mut permutation = vec![usize::MAX; d];
    for v in 0..graph.vertex_count() {
        let image = labels[graph.sheet_shift(v)];
        let slot = &mut permutation[labels[v]];
        if *slot == usize::MAX {
            *slot = image;
        } else if *slot != image {
            return Err(Error::inconsistent("component monodromy", "ill-defined", "well-defined"));
        }
    }
    let cycle_type = cycle_type(&permutation);
    if cycle_type != [d] {
        return Err(Error::inconsistent(
            "component monodromy cycle type",
            format!("{cycle_type:?}"),
            format!("[{d}]"),
        ));
    }
    Ok(ComponentMonodromy {
        permutation,
        cycle_type,
    })
}

fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        let mut len = 0;
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            c = perm[c];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Splits `f = g^d` with `d = gcd(m_i)`; the fibre of `f` is `d` copies of the
/// fibre of `g`.
pub fn divide_by_gcd(datum: &EquisingularDatum) -> (u64, EquisingularDatum) {
    let d = datum.multiplicity_gcd();
    (d, datum.with_multiplicities(|m| m / d))
}
