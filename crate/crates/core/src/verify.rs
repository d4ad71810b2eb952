//! Grid runners. Each cell is checked independently on a bounded rayon pool;
//! outcomes are collected in grid order, so reports do not depend on `jobs`.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use crate::arith::{is_prime, prime_powers_in, primes_in};
use crate::census::{admissible_a, verify_ext_bound, verify_lemma_alt1, verify_omega_bound, verify_prop_alt};
use crate::degrees::{degree, factorial, is_p_prime_macdonald};
use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};
use crate::report::{CellOutcome, VerificationReport, Violation};
use crate::tables::{GroupContext, LieType, Tables};
use crate::unipotent::{
    check_cyclotomic_criterion, coverage_and_distinctness, cross_check_type_a, verify_d4, verify_exceptions,
    ExceptionFamily,
};

/// Maps `f` over `cells` on a pool of `jobs` threads (0 = rayon default),
/// preserving order.
pub fn run_cells<C, F>(jobs: usize, cells: &[C], f: F) -> Result<Vec<CellOutcome>>
where
    C: Sync,
    F: Fn(&C) -> CellOutcome + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    Ok(pool.install(|| cells.par_iter().map(&f).collect()))
}

fn report<C, F>(command: &str, grid: serde_json::Value, jobs: usize, cells: &[C], f: F) -> Result<VerificationReport>
where
    C: Sync,
    F: Fn(&C) -> CellOutcome + Sync + Send,
{
    let start = Instant::now();
    let outcomes = run_cells(jobs, cells, f)?;
    Ok(VerificationReport::from_cells(command, grid, outcomes, start.elapsed().as_millis()))
}

fn error_outcome(cell: &str, e: Error) -> CellOutcome {
    CellOutcome::checked().violation(Violation::new(cell, "error", e.to_string()))
}

fn check_primes(primes: &[u64]) -> Result<()> {
    match primes.iter().find(|&&p| !is_prime(p)) {
        Some(&p) => Err(Error::NotPrime(p)),
        None => Ok(()),
    }
}

/// Macdonald's criterion against the p-valuation of the hook-formula degree,
/// for every `λ ⊢ n ≤ max_n`.
pub fn verify_macdonald(max_n: usize, primes: &[u64], jobs: usize) -> Result<VerificationReport> {
    check_primes(primes)?;
    let cells: Vec<(usize, u64)> = (1..=max_n).flat_map(|n| primes.iter().map(move |&p| (n, p))).collect();
    report("macdonald", json!({ "max_n": max_n, "primes": primes }), jobs, &cells, |&(n, p)| {
        let mut out = CellOutcome::checked();
        let pb = BigUint::from(p);
        for lam in partitions(n) {
            let oracle = !(degree(&lam).value() % &pb).is_zero();
            if is_p_prime_macdonald(&lam, p) != oracle {
                out.violations.push(Violation::new(
                    format!("n={n} p={p}"),
                    "disagreement",
                    format!("({lam}): criterion {} but degree p' is {oracle}", !oracle),
                ));
            }
        }
        out
    })
}

/// `Σ_{λ ⊢ n} χ^λ(1)² = n!`.
pub fn verify_degree_sum(max_n: usize, jobs: usize) -> Result<VerificationReport> {
    let cells: Vec<usize> = (0..=max_n).collect();
    report("degree-sum", json!({ "max_n": max_n }), jobs, &cells, |&n| {
        let sum: BigUint = partitions(n).map(|l| degree(&l).0.pow(2)).sum();
        let fact = factorial(n);
        let out = CellOutcome::checked();
        if sum == fact {
            out
        } else {
            out.violation(Violation::new(format!("n={n}"), "sum", format!("{sum} != {fact}")))
        }
    })
}

fn partitions_below(bound: usize) -> Vec<Partition> {
    (0..bound).flat_map(partitions).collect()
}

/// The star-shape degree inequality for every p-core `γ` with `|γ| < p`, every
/// `w` with `|γ| + pw ≤ max_size`, and every admissible `a`.
pub fn verify_star_grid(primes: &[u64], max_size: usize, jobs: usize) -> Result<VerificationReport> {
    check_primes(primes)?;
    let mut cells = Vec::new();
    for &p in primes {
        for gamma in partitions_below(p as usize) {
            let mut w = 1;
            while gamma.size() + p as usize * w <= max_size {
                for a in admissible_a(w) {
                    cells.push((p, gamma.clone(), w, a));
                }
                w += 1;
            }
        }
    }
    let grid = json!({ "primes": primes, "max_size": max_size });
    report("lemma-3-2", grid, jobs, &cells, |(p, gamma, w, a)| {
        let cell = format!("p={p} core=({gamma}) w={w} a={a}");
        match verify_lemma_alt1(*p, gamma, *w, *a) {
            Ok(c) if c.holds => CellOutcome::checked(),
            Ok(c) => CellOutcome::checked().violation(Violation::new(
                cell,
                "inequality",
                format!("deg({}) = {} >= deg({}) = {}", c.lambda, c.lambda_degree, c.mu, c.mu_degree),
            )),
            Err(e) => error_outcome(&cell, e),
        }
    })
}

/// Cells `(n, p, γ)` with `γ ⊢ n mod p` (every such partition is a p-core).
fn residue_core_cells(max_n: usize, primes: &[u64]) -> Vec<(usize, u64, Partition)> {
    let mut cells = Vec::new();
    for n in 1..=max_n {
        for &p in primes {
            for gamma in partitions(n % p as usize) {
                cells.push((n, p, gamma));
            }
        }
    }
    cells
}

/// `|cd(Ω(n;γ))| = |Ω(n;γ)| ≥ ⌊(a_k+1)/2⌋ ∏(a_i+1)`.
pub fn verify_omega_bound_grid(max_n: usize, primes: &[u64], jobs: usize) -> Result<VerificationReport> {
    check_primes(primes)?;
    let cells = residue_core_cells(max_n, primes);
    report("omega-bound", json!({ "max_n": max_n, "primes": primes }), jobs, &cells, |(n, p, gamma)| {
        let cell = format!("n={n} p={p} core=({gamma})");
        match verify_omega_bound(*n, *p, gamma) {
            Ok(v) if v.holds => CellOutcome::checked(),
            Ok(v) => CellOutcome::checked().violation(Violation::new(
                cell,
                "bound",
                format!("|Omega| = {}, distinct degrees {}, bound {}", v.omega_size, v.distinct_degrees, v.bound),
            )),
            Err(e) => error_outcome(&cell, e),
        }
    })
}

/// The same bound for the extendable p'-degrees of the alternating block.
pub fn verify_extendable_grid(max_n: usize, primes: &[u64], jobs: usize) -> Result<VerificationReport> {
    check_primes(primes)?;
    let cells = residue_core_cells(max_n, primes);
    report("prop-3-5", json!({ "max_n": max_n, "primes": primes }), jobs, &cells, |(n, p, gamma)| {
        let cell = format!("n={n} p={p} core=({gamma})");
        match verify_ext_bound(*n, *p, gamma) {
            Ok(v) if v.holds => CellOutcome::checked(),
            Ok(v) => CellOutcome::checked().violation(Violation::new(
                cell,
                "bound",
                format!(
                    "{} extendable degrees, bound {}, Omega extendable {}",
                    v.ext_degrees, v.bound, v.omega_extendable
                ),
            )),
            Err(e) => error_outcome(&cell, e),
        }
    })
}

/// At least three extendable p'-degrees in `B_0(A_n)` for `min_n ≤ n ≤ max_n`.
/// Cells with `p > n` (so `p ∤ |A_n|`) are skipped.
pub fn verify_alt_principal_grid(min_n: usize, max_n: usize, primes: &[u64], jobs: usize) -> Result<VerificationReport> {
    check_primes(primes)?;
    let cells: Vec<(usize, u64)> = (min_n..=max_n).flat_map(|n| primes.iter().map(move |&p| (n, p))).collect();
    let grid = json!({ "min_n": min_n, "max_n": max_n, "primes": primes });
    report("prop-3-6", grid, jobs, &cells, |&(n, p)| {
        if p as usize > n {
            return CellOutcome::skipped();
        }
        let cell = format!("n={n} p={p}");
        match verify_prop_alt(n, p) {
            Ok(v) if v.holds => CellOutcome::checked(),
            Ok(v) => CellOutcome::checked().violation(Violation::new(
                cell,
                "count",
                format!(
                    "extendable degrees {:?}, witnesses ok {:?}",
                    v.census.ext_degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    v.witnesses.map(|w| w.ok)
                ),
            )),
            Err(e) => error_outcome(&cell, e),
        }
    })
}

fn q_p_pairs(q_max: u64, p_min: u64, p_max: u64) -> Vec<(u64, u64)> {
    let primes = primes_in(p_min, p_max);
    prime_powers_in(2, q_max)
        .into_iter()
        .flat_map(|q| primes.iter().filter(move |&&p| q % p != 0).map(move |&p| (q, p)))
        .collect()
}

/// `p | Φ_m(q) ⇔ m = d p^i` and `v_p(Φ_m(q)) ≥ 2 ⇒ m = d`.
pub fn verify_cyclotomic(max_m: u64, q_max: u64, p_max: u64, jobs: usize) -> Result<VerificationReport> {
    let cells = q_p_pairs(q_max, 5, p_max);
    let grid = json!({ "max_m": max_m, "q_max": q_max, "p_min": 5, "p_max": p_max });
    report("cyclo", grid, jobs, &cells, |&(q, p)| {
        let cell = format!("q={q} p={p}");
        let mut out = CellOutcome::checked();
        for m in 1..=max_m {
            match check_cyclotomic_criterion(m, q, p) {
                Ok(None) => {}
                Ok(Some(msg)) => out.violations.push(Violation::new(&cell, "criterion", msg)),
                Err(e) => out.violations.push(Violation::new(&cell, "error", e.to_string())),
            }
        }
        out
    })
}

fn min_rank(ty: LieType) -> u64 {
    match ty {
        LieType::A | LieType::A2 => 3,
        LieType::B | LieType::C => 2,
        LieType::D | LieType::D2 => 4,
    }
}

/// Default rank bound of the table grid: 12 for the linear and unitary
/// types, 10 otherwise.
pub fn default_n_max(ty: LieType) -> u64 {
    if ty.is_linear() {
        12
    } else {
        10
    }
}

fn group_cells(types: &[(LieType, u64)], q_max: u64, p_max: u64) -> Vec<(LieType, u64, u64, u64)> {
    let pairs = q_p_pairs(q_max, 5, p_max);
    let mut cells = Vec::new();
    for &(ty, n_max) in types {
        for n in min_rank(ty)..=n_max {
            for &(q, p) in &pairs {
                cells.push((ty, n, q, p));
            }
        }
    }
    cells
}

/// Which parts of a table cell to report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableCheck {
    /// Row verdicts and the trivial core/cocore closed forms.
    Rows,
    /// Coverage of both slots and distinctness of the q'-parts.
    Coverage,
    /// Everything.
    All,
}

fn table_outcome(ctx: &GroupContext, check: TableCheck) -> CellOutcome {
    if !ctx.in_scope() {
        return CellOutcome::skipped();
    }
    let verdict = match coverage_and_distinctness(Tables::embedded(), ctx) {
        Ok(v) => v,
        Err(e) => return error_outcome(&ctx.cell_name(), e),
    };
    let mut out = verdict.into_outcome();
    let keep = |kind: &str| match check {
        TableCheck::All => true,
        TableCheck::Rows => kind == "row" || kind == "trivial-core",
        TableCheck::Coverage => kind == "coverage" || kind == "collision",
    };
    out.violations.retain(|v| keep(&v.kind));
    if check == TableCheck::Rows {
        out.ambiguous.clear();
    }
    out
}

/// Every cell `(type, n, q, p)` with `n` up to the paired bound: applicable rows, their labels,
/// blocks and degrees, and the χ₁/χ₂ comparison, per `check`. Cells outside
/// the scope of the rows (see [`GroupContext::in_scope`]) are skipped.
pub fn verify_tables(
    types: &[(LieType, u64)],
    q_max: u64,
    p_max: u64,
    check: TableCheck,
    jobs: usize,
) -> Result<VerificationReport> {
    let cells = group_cells(types, q_max, p_max);
    let n_max: serde_json::Map<String, serde_json::Value> =
        types.iter().map(|(t, n)| (t.name().to_string(), json!(n))).collect();
    let command = match check {
        TableCheck::Rows => "tables",
        TableCheck::Coverage => "coverage",
        TableCheck::All => "tables+coverage",
    };
    let grid = json!({ "n_max": n_max, "q_max": q_max, "p_min": 5, "p_max": p_max });
    report(command, grid, jobs, &cells, |&(ty, n, q, p)| match GroupContext::new(ty, n, q, p) {
        Ok(ctx) => table_outcome(&ctx, check),
        Err(e) => error_outcome(&format!("{ty} n={n} q={q} p={p}"), e),
    })
}

/// `χ_1(1) > 2χ_2(1)` with both degrees p' for `D_4(q)`.
pub fn verify_d4_grid(q_max: u64, p_max: u64, jobs: usize) -> Result<VerificationReport> {
    let cells = q_p_pairs(q_max, 5, p_max);
    let grid = json!({ "q_max": q_max, "p_min": 5, "p_max": p_max });
    report("d4", grid, jobs, &cells, |&(q, p)| {
        let cell = format!("q={q} p={p}");
        match verify_d4(q, p) {
            Ok(None) => CellOutcome::skipped(),
            Ok(Some(v)) if v.holds() => CellOutcome::checked(),
            Ok(Some(v)) => CellOutcome::checked().violation(Violation::new(
                cell,
                "d4",
                format!(
                    "e={} chi1={} chi2={} p'=({}, {}) inequality={}",
                    v.e, v.chi1, v.chi2, v.chi1_p_prime, v.chi2_p_prime, v.inequality
                ),
            )),
            Err(e) => error_outcome(&cell, e),
        }
    })
}

/// PSL_2, PSL_3^ε and the rank-3 unipotent degree for every `(q, p)`.
pub fn verify_exceptions_grid(q_max: u64, p_max: u64, jobs: usize) -> Result<VerificationReport> {
    let cells: Vec<(ExceptionFamily, u64, u64)> = ExceptionFamily::ALL
        .iter()
        .flat_map(|&f| q_p_pairs(q_max, 5, p_max).into_iter().map(move |(q, p)| (f, q, p)))
        .collect();
    let grid = json!({ "q_max": q_max, "p_min": 5, "p_max": p_max });
    report("exceptions", grid, jobs, &cells, |&(family, q, p)| {
        let cell = format!("{} q={q} p={p}", family.name());
        match verify_exceptions(Tables::embedded(), family, q, p) {
            Ok(v) if v.is_empty() => CellOutcome::skipped(),
            Ok(v) => {
                let mut out = CellOutcome::checked();
                for verdict in v {
                    for f in verdict.failures {
                        out.violations.push(Violation::new(&cell, "degree", format!("sign {}: {f}", verdict.sign)));
                    }
                }
                out
            }
            Err(e) => error_outcome(&cell, e),
        }
    })
}

/// q'-parts of the tabulated type A/2A degrees against the q-hook formula.
pub fn verify_type_a_cross_check(n_max: u64, qs: &[u64], p_max: u64, jobs: usize) -> Result<VerificationReport> {
    let primes = primes_in(5, p_max);
    let mut cells = Vec::new();
    for ty in [LieType::A, LieType::A2] {
        for n in 3..=n_max {
            for &q in qs {
                for &p in primes.iter().filter(|&&p| q % p != 0) {
                    cells.push((ty, n, q, p));
                }
            }
        }
    }
    let grid = json!({ "n_max": n_max, "q": qs, "p_min": 5, "p_max": p_max });
    report("type-a", grid, jobs, &cells, |&(ty, n, q, p)| {
        let cell = format!("{ty} n={n} q={q} p={p}");
        let ctx = match GroupContext::new(ty, n, q, p) {
            Ok(c) => c,
            Err(e) => return error_outcome(&cell, e),
        };
        if !ctx.in_scope() {
            return CellOutcome::skipped();
        }
        match cross_check_type_a(Tables::embedded(), &ctx) {
            Ok(records) => {
                let mut out = CellOutcome::checked();
                for r in records.iter().filter(|r| !r.matches()) {
                    out.violations.push(Violation::new(
                        &cell,
                        "mismatch",
                        format!("{} {}: table {} vs hook formula {}", r.row, r.label, r.table_q_prime, r.hook_q_prime),
                    ));
                }
                out
            }
            Err(e) => error_outcome(&cell, e),
        }
    })
}
