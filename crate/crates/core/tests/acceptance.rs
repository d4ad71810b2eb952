//! Exit criteria. Each test prints one `PASS`/`FAIL` line to stderr (written
//! directly, so it survives output capture) and then asserts.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use blockdeg::arith::primes_in;
use blockdeg::census::{census, principal_core, Group};
use blockdeg::dsl::{Bindings, DegreeExpr};
use blockdeg::partition::partitions;
use blockdeg::report::VerificationReport;
use blockdeg::symbol::Symbol;
use blockdeg::tables::{LieType, Tables};
use blockdeg::verify::{self, TableCheck};
use common::{check_move_laws, random_fixpoint, remove_random_rim_hook};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn verdict(id: u32, name: &str, ok: bool, elapsed: Duration, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let line = format!("[{status}] criterion {id:>2} {name} ({:.1}s) {detail}\n", elapsed.as_secs_f64());
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn summary(r: &VerificationReport) -> String {
    let mut s = format!(
        "checked={} skipped={} violations={} ambiguous={}",
        r.cells_checked,
        r.cells_skipped,
        r.violations.len(),
        r.ambiguous.len()
    );
    for v in r.violations.iter().take(3) {
        s.push_str(&format!("\n      {}: {} {}", v.cell, v.kind, v.detail));
    }
    s
}

fn grid_criterion(id: u32, name: &str, limit: Duration, run: impl FnOnce() -> VerificationReport) {
    let start = Instant::now();
    let report = run();
    let elapsed = start.elapsed();
    let ok = report.passed() && elapsed < limit;
    verdict(id, name, ok, elapsed, &summary(&report));
    assert!(report.passed(), "{name}: {}", summary(&report));
    assert!(elapsed < limit, "{name}: took {elapsed:?}, limit {limit:?}");
}

const MIN: Duration = Duration::from_secs(60);

#[test]
fn criterion_01_macdonald_matches_valuation() {
    grid_criterion(1, "Macdonald criterion vs degree valuation, n <= 25", 2 * MIN, || {
        verify::verify_macdonald(25, &[2, 3, 5, 7, 11], 0).unwrap()
    });
}

#[test]
fn criterion_02_degree_squares_sum_to_factorial() {
    grid_criterion(2, "sum of squared degrees = n!, n <= 25", MIN, || verify::verify_degree_sum(25, 0).unwrap());
}

#[test]
fn criterion_03_star_shape_inequality() {
    grid_criterion(3, "deg(lambda) < deg(mu) on the star-shape grid, size <= 45", 5 * MIN, || {
        verify::verify_star_grid(&[5, 7, 11], 45, 0).unwrap()
    });
}

#[test]
fn criterion_04_omega_degrees_and_bound() {
    let start = Instant::now();
    let omega = verify::verify_omega_bound_grid(35, &[5, 7, 11, 13], 0).unwrap();
    let ext = verify::verify_extendable_grid(35, &[5, 7, 11, 13], 0).unwrap();
    let elapsed = start.elapsed();
    let ok = omega.passed() && ext.passed() && elapsed < 5 * MIN;
    let detail = format!("omega: {}; extendable: {}", summary(&omega), summary(&ext));
    verdict(4, "|cd(Omega)| = |Omega| >= bound, n <= 35", ok, elapsed, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_05_three_extendable_degrees() {
    let start = Instant::now();
    let report = verify::verify_alt_principal_grid(7, 40, &primes_in(5, 37), 0).unwrap();
    let spot = census(7, 5, &principal_core(7, 5), Group::An).unwrap();
    let spot_degrees: Vec<String> = spot.ext_degrees.iter().map(|d| d.to_string()).collect();
    let spot_ok = ["1", "6", "14"].iter().all(|d| spot_degrees.iter().any(|x| x == d));
    let elapsed = start.elapsed();
    let ok = report.passed() && spot_ok && elapsed < 10 * MIN;
    let detail = format!("{}; (7,5) ext_degrees = {spot_degrees:?}", summary(&report));
    verdict(5, ">= 3 extendable p'-degrees in the principal block of A_n, 7 <= n <= 40", ok, elapsed, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_06_cyclotomic_divisibility() {
    grid_criterion(6, "p | Phi_m(q) iff m = d p^i, m <= 60, q <= 16", MIN, || {
        verify::verify_cyclotomic(60, 16, 31, 0).unwrap()
    });
}

#[test]
fn criterion_07_unipotent_tables() {
    let start = Instant::now();
    let bounds: Vec<(LieType, u64)> = LieType::ALL.iter().map(|&t| (t, verify::default_n_max(t))).collect();
    let report = verify::verify_tables(&bounds, 27, 31, TableCheck::All, 0).unwrap();
    let elapsed = start.elapsed();
    let ok = report.passed() && elapsed < 10 * MIN;
    let mut detail = summary(&report);
    for a in &report.ambiguous {
        detail.push_str(&format!("\n      ambiguous {}: {}", a.cell, a.detail));
    }
    verdict(7, "table rows: coverage, labels, blocks, p'-degrees, distinctness", ok, elapsed, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_08_d4_inequality() {
    grid_criterion(8, "D4: chi1(1) > 2 chi2(1), both p', q <= 128", MIN, || verify::verify_d4_grid(128, 31, 0).unwrap());
}

#[test]
fn criterion_09_type_a_cross_check() {
    grid_criterion(9, "type A q'-parts vs q-hook formula, n <= 8", 2 * MIN, || {
        verify::verify_type_a_cross_check(8, &[2, 3, 4, 5, 7, 8, 9], 31, 0).unwrap()
    });
}

fn property_core(rng: &mut StdRng) -> Result<usize, String> {
    let mut trials = 0;
    for n in 0..=20 {
        for lam in partitions(n) {
            for q in 1..=7 {
                let c = lam.core(q);
                if c.core(q) != c {
                    return Err(format!("core of ({lam}) at q={q} not idempotent"));
                }
            }
        }
    }
    for n in [9, 14, 18] {
        for lam in partitions(n).step_by(7) {
            for q in 2..=5 {
                let expected = lam.core(q);
                for _ in 0..100 {
                    let mut cur = lam.clone();
                    while let Some(next) = remove_random_rim_hook(&cur, q, rng) {
                        cur = next;
                    }
                    if cur != expected {
                        return Err(format!("({lam}) q={q}: random order gave ({cur}), abacus ({expected})"));
                    }
                    trials += 1;
                }
            }
        }
    }
    Ok(trials)
}

fn property_symbols(rng: &mut StdRng) -> Result<usize, String> {
    let mut removals = 0;
    while removals < 10_000 {
        let mut row = || -> Vec<u64> {
            let mut v: Vec<u64> = (0..rng.random_range(0..7)).map(|_| rng.random_range(0..20)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let (a, b) = (row(), row());
        let Ok(s) = Symbol::new(a, b) else { continue };
        let e = rng.random_range(1..=6);
        removals += check_move_laws(&s, e);
        let (core, cocore) = (s.e_core(e), s.e_cocore(e));
        for _ in 0..3 {
            if random_fixpoint(&s, e, false, rng) != core || random_fixpoint(&s, e, true, rng) != cocore {
                return Err(format!("{s}: removal order changes the {e}-core or cocore"));
            }
        }
    }
    Ok(removals)
}

fn property_dsl() -> Result<usize, String> {
    let mut checked = 0;
    for row in &Tables::embedded().rows {
        let printed = row.degree.to_string();
        let reparsed = DegreeExpr::parse(&printed).map_err(|e| format!("{}: {e}", row.id))?;
        if reparsed != row.degree || reparsed.to_string() != printed {
            return Err(format!("{}: `{}` does not round-trip", row.id, row.degree_text));
        }
        for (n, e, r, m) in [(9, 2, 1, 4), (11, 3, 2, 3), (12, 5, 2, 2)] {
            for eps in [1, -1] {
                let b = Bindings::new().with("n", n).with("e", e).with("r", r).with("m", m).with_eps(eps);
                for q in [2, 3, 5] {
                    let q0 = BigRational::from_integer(BigInt::from(q));
                    let a = row.degree.evaluate(&b, &q0);
                    if a.is_ok() && a != reparsed.evaluate(&b, &q0) {
                        return Err(format!("{}: value changes after round trip", row.id));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

fn property_parallel() -> Result<usize, String> {
    let types: Vec<(LieType, u64)> = LieType::ALL.iter().map(|&t| (t, 8)).collect();
    let serial = verify::verify_tables(&types, 16, 23, TableCheck::All, 1).unwrap().without_timing();
    let parallel = verify::verify_tables(&types, 16, 23, TableCheck::All, 8).unwrap().without_timing();
    let a = verify::verify_extendable_grid(24, &[5, 7], 1).unwrap().without_timing();
    let b = verify::verify_extendable_grid(24, &[5, 7], 8).unwrap().without_timing();
    if serial != parallel || a != b {
        return Err("reports differ between --jobs 1 and --jobs 8".into());
    }
    Ok(serial.cells_checked + a.cells_checked)
}

#[test]
fn criterion_10_property_suites() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(10);
    let results = [
        ("core", property_core(&mut rng)),
        ("symbol", property_symbols(&mut rng)),
        ("dsl", property_dsl()),
        ("parallel", property_parallel()),
    ];
    let ok = results.iter().all(|(_, r)| r.is_ok());
    let detail: Vec<String> = results
        .iter()
        .map(|(name, r)| match r {
            Ok(count) => format!("{name}: ok ({count})"),
            Err(e) => format!("{name}: {e}"),
        })
        .collect();
    let detail = detail.join("; ");
    verdict(10, "property suites", ok, start.elapsed(), &detail);
    assert!(ok, "{detail}");
}
