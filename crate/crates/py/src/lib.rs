use blockdeg::census::{self as blocks, Group};
use blockdeg::dsl::{Bindings, DegreeExpr};
use blockdeg::report::VerificationReport;
use blockdeg::symbol::Symbol;
use blockdeg::tables::LieType;
use blockdeg::verify::{self, TableCheck};
use blockdeg::{arith, degrees, Partition};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: blockdeg::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn partition(parts: Vec<usize>) -> PyResult<Partition> {
    Partition::new(parts).map_err(err)
}

/// Serializes through JSON and hands back plain Python objects.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn report<'py>(py: Python<'py>, r: blockdeg::Result<VerificationReport>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &r.map_err(err)?)
}

#[pyfunction]
fn degree(parts: Vec<usize>) -> PyResult<BigUint> {
    Ok(degrees::degree(&partition(parts)?).0)
}

#[pyfunction]
fn p_core(parts: Vec<usize>, p: usize) -> PyResult<Vec<usize>> {
    if p == 0 {
        return Err(PyValueError::new_err("p must be positive"));
    }
    Ok(partition(parts)?.core(p).parts().to_vec())
}

#[pyfunction]
fn p_valuation_of_degree(parts: Vec<usize>, p: u64) -> PyResult<u64> {
    arith::require_prime(p).map_err(err)?;
    Ok(degrees::p_valuation_of_degree(&partition(parts)?, p))
}

#[pyfunction]
fn is_p_prime(parts: Vec<usize>, p: u64) -> PyResult<bool> {
    arith::require_prime(p).map_err(err)?;
    Ok(degrees::is_p_prime_macdonald(&partition(parts)?, p))
}

#[pyfunction]
#[pyo3(signature = (n, p, core=None, group="sn"))]
fn census<'py>(
    py: Python<'py>,
    n: usize,
    p: u64,
    core: Option<Vec<usize>>,
    group: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let group: Group = group.parse().map_err(err)?;
    let core = match core {
        Some(c) => partition(c)?,
        None => blocks::principal_core(n, p),
    };
    to_py(py, &blocks::census(n, p, &core, group).map_err(err)?)
}

#[pyfunction]
fn omega_sets<'py>(py: Python<'py>, n: usize, p: u64, core: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &blocks::omega_sets(n, p, &partition(core)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (expr, q=None, p=None, bindings=None, eps=1))]
fn cyclo_factor<'py>(
    py: Python<'py>,
    expr: &str,
    q: Option<u64>,
    p: Option<u64>,
    bindings: Option<Vec<(String, i64)>>,
    eps: i8,
) -> PyResult<Bound<'py, PyAny>> {
    if eps != 1 && eps != -1 {
        return Err(PyValueError::new_err("eps must be 1 or -1"));
    }
    let parsed = DegreeExpr::parse(expr).map_err(err)?;
    let mut b = Bindings::new().with_eps(eps);
    for (name, value) in bindings.unwrap_or_default() {
        b.set(&name, value);
    }
    let factors = parsed.factorize(&b).map_err(err)?;
    let value = q
        .map(|q0| parsed.evaluate(&b, &BigRational::from_integer(BigInt::from(q0))))
        .transpose()
        .map_err(err)?;
    let p_valuation = match (p, &value) {
        (Some(p), Some(v)) => Some(arith::p_valuation_of_value(v, p).map_err(err)?),
        (Some(_), None) => return Err(PyValueError::new_err("p needs q")),
        _ => None,
    };
    let out = serde_json::json!({
        "expr": parsed.to_string(),
        "factors": factors,
        "value": value.map(|v| v.to_string()),
        "p_valuation": p_valuation,
    });
    to_py(py, &out)
}

/// `(rank, defect)` of a symbol given as text, e.g. `"0,1,3|2"`.
#[pyfunction]
fn symbol_rank_defect(text: &str) -> PyResult<(i64, u64)> {
    let s: Symbol = text.parse().map_err(err)?;
    Ok((s.rank(), s.defect()))
}

#[pyfunction]
fn symbol_e_core(text: &str, e: u64) -> PyResult<String> {
    let s: Symbol = text.parse().map_err(err)?;
    Ok(s.e_core(e).to_string())
}

#[pyfunction]
fn symbol_e_cocore(text: &str, e: u64) -> PyResult<String> {
    let s: Symbol = text.parse().map_err(err)?;
    Ok(s.e_cocore(e).to_string())
}

#[pyfunction]
#[pyo3(signature = (max_n=25, primes=vec![2, 3, 5, 7, 11], jobs=0))]
fn verify_macdonald<'py>(py: Python<'py>, max_n: usize, primes: Vec<u64>, jobs: usize) -> PyResult<Bound<'py, PyAny>> {
    report(py, py.detach(|| verify::verify_macdonald(max_n, &primes, jobs)))
}

#[pyfunction]
#[pyo3(signature = (max_n=35, primes=vec![5, 7, 11, 13], jobs=0))]
fn verify_extendable_grid<'py>(py: Python<'py>, max_n: usize, primes: Vec<u64>, jobs: usize) -> PyResult<Bound<'py, PyAny>> {
    report(py, py.detach(|| verify::verify_extendable_grid(max_n, &primes, jobs)))
}

#[pyfunction]
#[pyo3(signature = (types=None, n_max=None, q_max=27, p_max=31, jobs=0))]
fn verify_tables<'py>(
    py: Python<'py>,
    types: Option<Vec<String>>,
    n_max: Option<u64>,
    q_max: u64,
    p_max: u64,
    jobs: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let types: Vec<LieType> = match types {
        Some(names) => names.iter().map(|t| t.parse()).collect::<Result<_, _>>().map_err(err)?,
        None => LieType::ALL.to_vec(),
    };
    let bounds: Vec<(LieType, u64)> =
        types.into_iter().map(|t| (t, n_max.unwrap_or_else(|| verify::default_n_max(t)))).collect();
    report(py, py.detach(|| verify::verify_tables(&bounds, q_max, p_max, TableCheck::All, jobs)))
}

#[pyfunction]
#[pyo3(signature = (q_max=128, p_max=31, jobs=0))]
fn verify_d4<'py>(py: Python<'py>, q_max: u64, p_max: u64, jobs: usize) -> PyResult<Bound<'py, PyAny>> {
    report(py, py.detach(|| verify::verify_d4_grid(q_max, p_max, jobs)))
}

#[pymodule]
fn blockdeg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(degree, m)?)?;
    m.add_function(wrap_pyfunction!(p_core, m)?)?;
    m.add_function(wrap_pyfunction!(p_valuation_of_degree, m)?)?;
    m.add_function(wrap_pyfunction!(is_p_prime, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(omega_sets, m)?)?;
    m.add_function(wrap_pyfunction!(cyclo_factor, m)?)?;
    m.add_function(wrap_pyfunction!(symbol_rank_defect, m)?)?;
    m.add_function(wrap_pyfunction!(symbol_e_core, m)?)?;
    m.add_function(wrap_pyfunction!(symbol_e_cocore, m)?)?;
    m.add_function(wrap_pyfunction!(verify_macdonald, m)?)?;
    m.add_function(wrap_pyfunction!(verify_extendable_grid, m)?)?;
    m.add_function(wrap_pyfunction!(verify_tables, m)?)?;
    m.add_function(wrap_pyfunction!(verify_d4, m)?)?;
    Ok(())
}
