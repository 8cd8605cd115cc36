//! Acceptance suite: one pass/fail line per criterion, non-zero exit if any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use milnor_lab::datum::{enumerate_corpus, from_monomial, CorpusBounds, EquisingularDatum};
use milnor_lab::fibre::{build_fibre_graph, divide_by_gcd, euler_characteristic_closed, fibre_summary};
use milnor_lab::homology::{smith_normal_form, IntMatrix};
use milnor_lab::invariants::{beta, boundary2_components, check_upper_bound, mu_reduced, transversal_data};
use milnor_lab::sweep::{run_sweep, Property, DOCUMENTED};
use milnor_lab::FibreSummary;

const CORPUS: (usize, u64, u64, u64) = (3, 4, 3, 3);

fn corpus_bounds() -> CorpusBounds {
    CorpusBounds::new(CORPUS.0, CORPUS.1, CORPUS.2, CORPUS.3).unwrap()
}

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn from_failures(checked: usize, failures: Vec<String>) -> Self {
        let ok = failures.is_empty() && checked > 0;
        let mut detail = format!("{checked} checked, {} violations", failures.len());
        for f in failures.iter().take(5) {
            detail.push_str("\n      ");
            detail.push_str(f);
        }
        Outcome { ok, detail }
    }
}

fn singular(d: &EquisingularDatum) -> bool {
    d.singular_branches().next().is_some()
}

fn c1_b1_zero(corpus: &[EquisingularDatum]) -> Outcome {
    let start = Instant::now();
    let sweep = run_sweep(&corpus_bounds(), &[Property::Prop1Xr], 1).unwrap();
    let elapsed = start.elapsed();
    let mut failures: Vec<String> = sweep.violations.iter().map(|v| format!("{} {}", v.datum, v.got)).collect();
    // direct check through the public summary as well
    for d in corpus {
        let s = fibre_summary(d).unwrap();
        if (s.b1 == 0) != (d.branch_count() == 1 && d.branches()[0].delta == 0) {
            failures.push(format!("{d}: b1 = {}", s.b1));
        }
    }
    if elapsed >= Duration::from_secs(30) {
        failures.push(format!("runtime {elapsed:?} >= 30 s"));
    }
    let mut o = Outcome::from_failures(corpus.len(), failures);
    o.detail.push_str(&format!(", sweep {elapsed:.2?}"));
    o
}

fn c2_beta_zero(corpus: &[EquisingularDatum]) -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for d in corpus.iter().filter(|d| singular(d)) {
        checked += 1;
        let b = beta(d).unwrap();
        let xr = d.branch_count() == 1 && d.branches()[0].delta == 0;
        if (b.beta == 0) != xr {
            failures.push(format!("{d}: beta = {}", b.beta));
        }
    }
    Outcome::from_failures(checked, failures)
}

fn triple(s: &FibreSummary) -> (i64, i64, i64) {
    (s.b0 as i64, s.b1 as i64, s.chi)
}

fn c3_components(corpus: &[EquisingularDatum]) -> Outcome {
    let mut failures = Vec::new();
    for d in corpus {
        let s = fibre_summary(d).unwrap();
        let gcd = d.multiplicities().fold(0, num_integer::gcd);
        if s.b0 != gcd {
            failures.push(format!("{d}: b0 = {} != gcd {gcd}", s.b0));
        }
        let (k, reduced) = divide_by_gcd(d);
        let r = fibre_summary(&reduced).unwrap();
        let k = k as i64;
        let (b0, b1, chi) = triple(&r);
        if triple(&s) != (k * b0, k * b1, k * chi) {
            failures.push(format!("{d}: {:?} != {k} * {:?}", triple(&s), triple(&r)));
        }
        if r.b0 != 1 {
            failures.push(format!("{d}: reduced datum has b0 = {}", r.b0));
        }
    }
    Outcome::from_failures(corpus.len(), failures)
}

fn c4_chi(corpus: &[EquisingularDatum]) -> Outcome {
    let mut failures = Vec::new();
    for d in corpus {
        let g = build_fibre_graph(d);
        let graph_chi = g.vertex_count() as i64 - g.edge_count() as i64;
        let closed = euler_characteristic_closed(d);
        if graph_chi != closed {
            failures.push(format!("{d}: V - E = {graph_chi}, closed form {closed}"));
        }
    }
    Outcome::from_failures(corpus.len(), failures)
}

fn c5_mu(corpus: &[EquisingularDatum]) -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for d in corpus.iter().filter(|d| d.is_reduced()) {
        checked += 1;
        let s = fibre_summary(d).unwrap();
        let mu = mu_reduced(d).unwrap();
        if s.b1 != mu {
            failures.push(format!("{d}: b1 = {} != mu = {mu}", s.b1));
        }
    }
    Outcome::from_failures(checked, failures)
}

fn c6_monomial() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for p in 2..=12u64 {
        for q in 2..=12u64 {
            checked += 1;
            let d = from_monomial(p, q);
            let s = fibre_summary(&d).unwrap();
            let g = num_integer::gcd(p, q);
            let b = beta(&d).unwrap().beta;
            if (s.b0, s.b1, s.chi, b) != (g, g, 0, p + q) {
                failures.push(format!("({p},{q}): b0={} b1={} chi={} beta={b}", s.b0, s.b1, s.chi));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("runtime {elapsed:?} >= 1 s"));
    }
    Outcome::from_failures(checked, failures)
}

fn c7_snf(corpus: &[EquisingularDatum]) -> Outcome {
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(0x5eed_5a1f);
    let trials = 1200;
    for _ in 0..trials {
        let rows = rng.random_range(1..=6);
        let cols = if rng.random_bool(0.5) { rows } else { rng.random_range(1..=6) };
        let entries: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.random_range(-9..=9)).collect())
            .collect();
        let a = IntMatrix::from_rows(&entries);
        let snf = smith_normal_form(&a);
        if &(&snf.u * &snf.s) * &snf.v != a {
            failures.push(format!("U S V != A for {a}"));
        }
        if snf.u.determinant().magnitude() != &One::one() || snf.v.determinant().magnitude() != &One::one() {
            failures.push(format!("non-unimodular transform for {a}"));
        }
        let diag = snf.diagonal();
        let offdiag = (0..rows).any(|i| (0..cols).any(|j| i != j && !snf.s[(i, j)].is_zero()));
        if offdiag {
            failures.push(format!("S not diagonal for {a}"));
        }
        let chain = diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        });
        if !chain || diag.iter().any(|x| *x < BigInt::zero()) {
            failures.push(format!("divisibility chain broken for {a}: {diag:?}"));
        }
        if rows == cols {
            let prod: BigInt = diag.iter().product();
            if prod != a.determinant().magnitude().clone().into() {
                failures.push(format!("|det| not preserved for {a}"));
            }
        }
    }
    let mut branches = 0;
    for d in corpus.iter().filter(|d| singular(d)) {
        for b in boundary2_components(d).unwrap().branches {
            branches += 1;
            let m = d.branches()[b.branch].multiplicity;
            if b.coker.free_rank as u64 != num_integer::gcd(m, b.k) || !b.coker.torsion.is_empty() {
                failures.push(format!("{d} branch {}: coker {:?}", b.branch, b.coker));
            }
        }
    }
    let mut o = Outcome::from_failures(trials + branches, failures);
    o.detail.push_str(&format!(" ({trials} random matrices, {branches} corpus branches)"));
    o
}

fn c8_upper_bound(corpus: &[EquisingularDatum]) -> Outcome {
    let mut attained = 0;
    let mut failures = Vec::new();
    for d in corpus.iter().filter(|d| singular(d)) {
        let s = fibre_summary(d).unwrap();
        let mu = transversal_data(d).total_mu_perp;
        if s.b0 - 1 != mu {
            continue;
        }
        attained += 1;
        if !check_upper_bound(d).unwrap().hypothesis {
            failures.push(format!("{d}: hypothesis not recognised"));
        }
        for b in boundary2_components(d).unwrap().branches {
            let m = d.branches()[b.branch].multiplicity;
            if b.k % m != 0 {
                failures.push(format!("{d}: k_{} = {} mod {m}", b.branch, b.k));
            }
        }
    }
    let mut o = Outcome::from_failures(attained, failures);
    o.detail.push_str(" (datums attaining the bound)");
    o
}

fn c9_beta_nonneg(corpus: &[EquisingularDatum]) -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for d in corpus.iter().filter(|d| singular(d)) {
        checked += 1;
        let s = fibre_summary(d).unwrap();
        let raw = s.b1 as i64 - s.b0 as i64 + transversal_data(d).total_points as i64;
        if raw < 0 {
            failures.push(format!("{d}: beta = {raw}"));
        }
        for b in boundary2_components(d).unwrap().branches {
            if b.components % s.d != 0 || !b.chain_ok() {
                failures.push(format!("{d}: d = {} vs gcd(m, k) = {}", s.d, b.components));
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn c10_chi_form(corpus: &[EquisingularDatum]) -> Outcome {
    let sweep = run_sweep(&corpus_bounds(), &[Property::Prop2ChiForm], 1).unwrap();
    let expected: Vec<&EquisingularDatum> = corpus
        .iter()
        .filter(|d| d.branch_count() == 1 && d.branches()[0].delta == 0 && d.branches()[0].multiplicity >= 2)
        .collect();
    let mut failures = Vec::new();
    for v in &sweep.violations {
        let is_xr = expected.iter().any(|e| **e == v.datum);
        if !is_xr {
            failures.push(format!("unexpected flag {} ({}; {:?})", v.datum, v.got, v.label));
        } else if v.label.as_deref() != Some(DOCUMENTED) {
            failures.push(format!("{} not labeled documented", v.datum));
        }
    }
    for e in &expected {
        if !sweep.violations.iter().any(|v| v.datum == **e) {
            failures.push(format!("x^r datum {e} not flagged"));
        }
    }
    let mut o = Outcome::from_failures(sweep.checked, failures);
    o.detail.push_str(&format!(" ({} flagged, {} x^r expected)", sweep.violations.len(), expected.len()));
    o
}

fn c11_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_milnor-lab");
    let run = |jobs: &str| {
        Command::new(bin)
            .args(["verify", "--max-branches", "3", "--max-mult", "4", "--max-delta", "3", "--max-int", "3"])
            .args(["--properties", "prop2-chi-form,prop1-xr,bobadilla", "--jobs", jobs])
            .output()
            .expect("run milnor-lab")
    };
    let one = run("1");
    let four = run("4");
    let again = run("4");
    let mut failures = Vec::new();
    if one.stdout != four.stdout || four.stdout != again.stdout {
        failures.push("stdout differs between runs".to_string());
    }
    if one.status.code() != four.status.code() {
        failures.push(format!("exit codes {:?} vs {:?}", one.status.code(), four.status.code()));
    }
    if one.stdout.is_empty() {
        failures.push("empty output".to_string());
    }
    Outcome::from_failures(3, failures)
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let corpus = enumerate_corpus(&corpus_bounds());
    println!("acceptance corpus {CORPUS:?}: {} datums", corpus.len());
    let criteria: Vec<Criterion> = vec![
        ("b1 = 0 iff x^r", Box::new(|| c1_b1_zero(&corpus))),
        ("beta = 0 iff x^r", Box::new(|| c2_beta_zero(&corpus))),
        ("b0 = gcd, d-scaling, reduced connected", Box::new(|| c3_components(&corpus))),
        ("two-route Euler characteristic", Box::new(|| c4_chi(&corpus))),
        ("classical Milnor number on reduced datums", Box::new(|| c5_mu(&corpus))),
        ("monomial family 2 <= p,q <= 12", Box::new(c6_monomial)),
        ("Smith normal form suite", Box::new(|| c7_snf(&corpus))),
        ("upper bound forces trivial vertical monodromy", Box::new(|| c8_upper_bound(&corpus))),
        ("beta >= 0 and d | gcd(m, k)", Box::new(|| c9_beta_nonneg(&corpus))),
        ("chi-form flags exactly x^r (documented)", Box::new(|| c10_chi_form(&corpus))),
        ("verify output independent of --jobs", Box::new(c11_determinism)),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        if !outcome.ok {
            failed += 1;
        }
        let tag = if outcome.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{tag}] {name}: {}", n + 1, outcome.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
