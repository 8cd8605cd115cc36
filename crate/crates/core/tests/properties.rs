use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use milnor_lab::datum::{
    enumerate_corpus, from_power, from_quasihomogeneous, parse_datum, Branch, CorpusBounds,
    EquisingularDatum, QuasiHomBranchSpec,
};
use milnor_lab::fibre::{build_fibre_graph, euler_characteristic_closed, fibre_summary};
use milnor_lab::homology::{cokernel, smith_normal_form, IntMatrix};
use milnor_lab::network::{build_network, double_point_count};

fn arb_datum() -> impl Strategy<Value = EquisingularDatum> {
    (1usize..=4)
        .prop_flat_map(|r| {
            (
                prop::collection::vec((1u64..=6, 0u64..=4), r),
                prop::collection::vec(1u64..=5, r * (r - 1) / 2),
            )
        })
        .prop_map(|(branches, upper)| {
            let r = branches.len();
            let mut mat = vec![vec![0; r]; r];
            let mut k = 0;
            for i in 0..r {
                for j in i + 1..r {
                    mat[i][j] = upper[k];
                    mat[j][i] = upper[k];
                    k += 1;
                }
            }
            let branches = branches
                .into_iter()
                .enumerate()
                .map(|(i, (m, d))| Branch::new(format!("b{i}"), m, d))
                .collect();
            EquisingularDatum::new(branches, mat).unwrap()
        })
}

fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(d in arb_datum()) {
        prop_assert_eq!(parse_datum(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn powers_compose(d in arb_datum(), e in 1u64..5, f in 1u64..5) {
        prop_assert_eq!(from_power(&from_power(&d, e), f), from_power(&d, e * f));
    }

    #[test]
    fn invariants_ignore_branch_order((d, perm) in arb_datum().prop_flat_map(|d| {
        let n = d.branch_count();
        (Just(d), arb_permutation(n))
    })) {
        let p = d.permuted(&perm);
        prop_assert!(p.equivalent(&d));
        prop_assert_eq!(build_network(&p).len(), build_network(&d).len());
        prop_assert_eq!(double_point_count(&build_network(&p)), double_point_count(&build_network(&d)));
        prop_assert_eq!(fibre_summary(&p).unwrap(), fibre_summary(&d).unwrap());
    }

    #[test]
    fn graph_counts_match_gadget_formula(d in arb_datum()) {
        let g = build_fibre_graph(&d);
        let nodes = build_network(&d);
        let annuli: u64 = nodes.iter().map(|n| n.copies * n.local_fibre().components).sum();
        let edges: u64 = nodes.iter().map(|n| n.copies * (n.local_fibre().components + n.p + n.q)).sum();
        prop_assert_eq!(g.vertex_count() as u64, d.total_sheets() + annuli);
        prop_assert_eq!(g.edge_count() as u64, edges);
        prop_assert_eq!(g.euler_characteristic(), euler_characteristic_closed(&d));
    }

    #[test]
    fn quasihomogeneous_output_is_valid(specs in prop::collection::vec((1u64..9, 1u64..9, 1u64..5), 1..5)) {
        let specs: Vec<_> = specs
            .into_iter()
            .filter(|(a, b, _)| num_integer::gcd(*a, *b) == 1)
            .map(|(a, b, m)| QuasiHomBranchSpec::new(a, b, m).unwrap())
            .collect();
        prop_assume!(!specs.is_empty());
        let d = from_quasihomogeneous(&specs).unwrap();
        for i in 0..d.branch_count() {
            for j in 0..d.branch_count() {
                if i != j {
                    prop_assert!(d.intersection(i, j) >= 1);
                }
            }
        }
    }

    #[test]
    fn snf_reconstructs(rows in 1usize..=6, cols in 1usize..=6, seed in prop::collection::vec(-9i64..=9, 36)) {
        let entries: Vec<Vec<i64>> = (0..rows).map(|i| seed[i * 6..i * 6 + cols].to_vec()).collect();
        let a = IntMatrix::from_rows(&entries);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(&(&snf.u * &snf.s) * &snf.v, a.clone());
        if rows == cols {
            let prod: BigInt = snf.diagonal().iter().product();
            prop_assert_eq!(prod, a.determinant().magnitude().clone().into());
        }
    }
}

#[test]
fn shift_minus_identity_cokernels_are_free_of_rank_gcd() {
    for m in 1..=30usize {
        for k in 0..m {
            let a = IntMatrix::cyclic_shift(m, k).sub(&IntMatrix::identity(m));
            let c = cokernel(&a);
            assert_eq!(c.free_rank, num_integer::gcd(m, k), "m = {m}, k = {k}");
            assert!(c.torsion.is_empty());
            // diagonal entries are all 0 or 1
            assert!(smith_normal_form(&a).diagonal().iter().all(|x| x.is_zero() || *x == BigInt::from(1)));
        }
    }
}

#[test]
fn corpus_has_no_duplicates_and_is_valid() {
    let bounds = CorpusBounds::new(3, 3, 2, 2).unwrap();
    let corpus = enumerate_corpus(&bounds);
    let mut seen = HashSet::new();
    for d in &corpus {
        assert_eq!(d.canonical(), *d, "not canonical: {d}");
        let key = (d.branches().iter().map(|b| (b.multiplicity, b.delta)).collect::<Vec<_>>(), d.intersections().to_vec());
        assert!(seen.insert(key), "duplicate {d}");
        // reconstructing through the validating constructor succeeds
        EquisingularDatum::new(d.branches().to_vec(), d.intersections().to_vec()).unwrap();
    }
    for w in corpus.windows(2) {
        assert!(w[0].canonical_cmp(&w[1]).is_lt(), "{} !< {}", w[0], w[1]);
    }
    assert_eq!(enumerate_corpus(&bounds), corpus);
}
