//! Python bindings for `sigma2-core`.
//!
//! Big integers cross the boundary as Python `int`. Core errors become
//! `ValueError`, except budget refusals, which raise `RuntimeError`.

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sigma2_core::families::{self, FamilyError, FamilyName};
use sigma2_core::pell::{self, ConicPoint, ConicSpec, FibConicSign};
use sigma2_core::primality::{self, PrimalityPolicy, PrimeCatalog, PrimalityVerdict};
use sigma2_core::solver::{self, Candidate, SolutionForm, SolverConfig, SolverError};
use sigma2_core::{arith, io, seq};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn solver_err(e: SolverError) -> PyErr {
    match e {
        SolverError::BudgetExceeded { .. } | SolverError::ScanBudgetExceeded { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => value_err(other),
    }
}

fn policy(rounds: Option<u32>) -> PrimalityPolicy {
    rounds.map(PrimalityPolicy::with_rounds).unwrap_or_default()
}

fn catalog(path: Option<&str>) -> PyResult<PrimeCatalog> {
    match path {
        Some(p) => primality::catalog_load(p).map_err(value_err),
        None => Ok(PrimeCatalog::bundled()),
    }
}

/// The equation `sigma2(n) - n^2 = A*n + B`.
#[pyclass(name = "Equation", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyEquation {
    inner: solver::EquationSpec,
}

#[pymethods]
impl PyEquation {
    #[new]
    fn new(a: BigInt, b: BigInt) -> Self {
        PyEquation { inner: solver::EquationSpec::new(a, b) }
    }

    #[getter]
    fn a(&self) -> BigInt {
        self.inner.a.clone()
    }

    #[getter]
    fn b(&self) -> BigInt {
        self.inner.b.clone()
    }

    /// `(|A| + |B|)^3`.
    fn theoretical_bound(&self) -> BigUint {
        self.inner.theoretical_bound()
    }

    fn classify(&self) -> String {
        solver::classify(&self.inner).to_string()
    }

    fn holds(&self, n: u64) -> PyResult<bool> {
        let s = arith::sigma2(n).map_err(value_err)?;
        Ok(self.inner.holds_with_sigma2(n, s))
    }

    fn __repr__(&self) -> String {
        format!("Equation({}, {})", self.inner.a, self.inner.b)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// One solution with its form and how it was found.
#[pyclass(name = "Solution", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySolution {
    inner: solver::SolutionRecord,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn n(&self) -> BigUint {
        self.inner.n.clone()
    }

    #[getter]
    fn form(&self) -> &'static str {
        self.inner.form.name()
    }

    /// `(p, q)` for a prime pair, else `None`.
    #[getter]
    fn pair(&self) -> Option<(BigUint, BigUint)> {
        match &self.inner.form {
            SolutionForm::PrimePair(p, q) => Some((p.clone(), q.clone())),
            _ => None,
        }
    }

    /// `[(prime, exponent), ...]` for exceptional solutions, else `None`.
    #[getter]
    fn factorization(&self) -> Option<Vec<(u64, u32)>> {
        match &self.inner.form {
            SolutionForm::Exceptional(f) => Some(f.factors().to_vec()),
            _ => None,
        }
    }

    #[getter]
    fn provenance(&self) -> &'static str {
        self.inner.provenance.name()
    }

    #[getter]
    fn verified(&self) -> bool {
        self.inner.verified
    }

    /// `("fib" | "lucas", i, j)` when `n = S(i)·S(j)`.
    #[getter]
    fn closed_form(&self) -> Option<(String, u64, u64)> {
        self.inner.closed_form.map(|c| (c.seq.to_string(), c.i, c.j))
    }

    #[getter]
    fn note(&self) -> Option<String> {
        self.inner.note.clone()
    }

    fn to_json(&self) -> String {
        io::record_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Solution(n={}, form={})", self.inner.n, self.inner.form.name())
    }
}

/// Result of [`solve`].
#[pyclass(name = "SolveReport", frozen, skip_from_py_object)]
struct PySolveReport {
    inner: solver::SolveReport,
}

#[pymethods]
impl PySolveReport {
    #[getter]
    fn equation(&self) -> PyEquation {
        PyEquation { inner: self.inner.spec.clone() }
    }

    #[getter]
    fn classification(&self) -> String {
        self.inner.classification.to_string()
    }

    /// `"all primes"` or `"all prime squares"` for the two infinite cases.
    #[getter]
    fn symbolic(&self) -> Option<String> {
        self.inner.symbolic.as_ref().map(|s| s.to_string())
    }

    #[getter]
    fn solutions(&self) -> Vec<PySolution> {
        self.inner.records.iter().cloned().map(|inner| PySolution { inner }).collect()
    }

    #[getter]
    fn searched_upto(&self) -> u64 {
        self.inner.searched_upto
    }

    #[getter]
    fn complete(&self) -> bool {
        self.inner.complete
    }

    /// Unswept interval `(lo, hi)` below the exceptional bound, if any.
    fn residual(&self) -> Option<(BigUint, BigUint)> {
        self.inner.residual()
    }
}

fn points(v: Vec<ConicPoint>) -> Vec<(BigInt, BigUint)> {
    v.into_iter().map(|p| (p.x().clone(), p.y().clone())).collect()
}

#[pyfunction]
fn fib(n: u64) -> BigUint {
    seq::fib(n)
}

#[pyfunction]
fn lucas(n: u64) -> BigUint {
    seq::lucas(n)
}

/// `"prime"`, `"composite"` or `"probable-prime"`.
#[pyfunction]
#[pyo3(signature = (n, rounds = None))]
fn is_prime(n: BigUint, rounds: Option<u32>) -> &'static str {
    match primality::is_prime(&n, &policy(rounds)) {
        PrimalityVerdict::Prime => "prime",
        PrimalityVerdict::Composite => "composite",
        PrimalityVerdict::ProbablePrime { .. } => "probable-prime",
    }
}

#[pyfunction]
fn factor(n: u64) -> PyResult<Vec<(u64, u32)>> {
    Ok(arith::factor(n).map_err(value_err)?.factors().to_vec())
}

#[pyfunction]
fn sigma2(n: u64) -> PyResult<u128> {
    arith::sigma2(n).map_err(value_err)
}

#[pyfunction]
fn classify(a: BigInt, b: BigInt) -> String {
    solver::classify(&solver::EquationSpec::new(a, b)).to_string()
}

/// Every solution with `n <= cap` from the sweep, plus prime pairs with `q <= q_bound`.
#[pyfunction]
#[pyo3(signature = (a, b, cap = 100_000_000, q_bound = None, threads = None, rounds = None))]
fn solve(
    py: Python<'_>,
    a: BigInt,
    b: BigInt,
    cap: u64,
    q_bound: Option<BigUint>,
    threads: Option<usize>,
    rounds: Option<u32>,
) -> PyResult<PySolveReport> {
    let spec = solver::EquationSpec::new(a, b);
    let q_bound = q_bound.unwrap_or_else(|| BigUint::from(cap));
    let config = SolverConfig { threads, policy: policy(rounds), ..SolverConfig::default() };
    let inner = py.detach(|| solver::solve(&spec, cap, &q_bound, &config)).map_err(solver_err)?;
    Ok(PySolveReport { inner })
}

/// Members of a named family: `"fib"`, `"lucas+"`, `"lucas-"` (with `m`) or `"polignac"` (with `k`).
#[pyfunction]
#[pyo3(signature = (name, parameter, index_bound = 600, recheck = false, catalog_path = None, rounds = None))]
fn family(
    py: Python<'_>,
    name: &str,
    parameter: u64,
    index_bound: u64,
    recheck: bool,
    catalog_path: Option<&str>,
    rounds: Option<u32>,
) -> PyResult<Vec<PySolution>> {
    let kind = name.parse::<FamilyName>().map_err(value_err)?.with_parameter(parameter);
    let catalog = catalog(catalog_path)?;
    let records = py
        .detach(|| families::generate(kind, index_bound, &catalog, recheck, &policy(rounds)))
        .map_err(|e| match e {
            FamilyError::Solver(s) => solver_err(s),
            other => value_err(other),
        })?;
    Ok(records.into_iter().map(|inner| PySolution { inner }).collect())
}

/// Whether `n` (or the prime pair `(p, q)`) solves the equation.
#[pyfunction]
#[pyo3(signature = (a, b, n = None, pair = None, rounds = None))]
fn verify_solution(
    a: BigInt,
    b: BigInt,
    n: Option<BigUint>,
    pair: Option<(BigUint, BigUint)>,
    rounds: Option<u32>,
) -> PyResult<bool> {
    let candidate = match (n, pair) {
        (Some(n), None) => Candidate::Single(n),
        (None, Some((p, q))) => Candidate::Pair(p, q),
        _ => return Err(PyValueError::new_err("give exactly one of n or pair")),
    };
    solver::verify_solution(&candidate, &solver::EquationSpec::new(a, b), &policy(rounds)).map_err(solver_err)
}

/// Points `(x, y)` of `x^2 - 5y^2 = rhs` (rhs = 4 or -4) with `x > 0`, `1 <= y <= y_bound`.
#[pyfunction]
fn solve_fib_conic(rhs: i64, y_bound: BigUint) -> PyResult<Vec<(BigInt, BigUint)>> {
    let sign = FibConicSign::from_rhs(rhs).ok_or_else(|| PyValueError::new_err("rhs must be 4 or -4"))?;
    Ok(points(pell::solve_fib_conic(sign, &y_bound)))
}

/// One representative per orbit of `x^2 - D*y^2 = N`, `D = A^2 - 4` for some `A >= 3`.
#[pyfunction]
fn orbit_reps(d: BigInt, n: BigInt) -> PyResult<Vec<(BigInt, BigUint)>> {
    let spec = ConicSpec::from_discriminant(d, n).map_err(value_err)?;
    Ok(points(pell::orbit_reps(&spec).map_err(value_err)?.reps))
}

/// Every point of `x^2 - D*y^2 = N` with `0 <= y <= y_bound`.
#[pyfunction]
fn conic_points(d: BigInt, n: BigInt, y_bound: BigUint) -> PyResult<Vec<(BigInt, BigUint)>> {
    let spec = ConicSpec::from_discriminant(d, n).map_err(value_err)?;
    Ok(points(pell::orbit_reps(&spec).map_err(value_err)?.points_up_to(&y_bound)))
}

/// True when every table row and digit count checks out against the catalog.
#[pyfunction]
#[pyo3(signature = (recheck = false, catalog_path = None, rounds = None))]
fn verify_tables(py: Python<'_>, recheck: bool, catalog_path: Option<&str>, rounds: Option<u32>) -> PyResult<bool> {
    let catalog = catalog(catalog_path)?;
    let report = py.detach(|| families::verify_tables(&catalog, recheck, &policy(rounds))).map_err(value_err)?;
    Ok(report.ok())
}

#[pymodule]
fn pysigma2(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEquation>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PySolveReport>()?;
    for f in [
        wrap_pyfunction!(fib, m)?,
        wrap_pyfunction!(lucas, m)?,
        wrap_pyfunction!(is_prime, m)?,
        wrap_pyfunction!(factor, m)?,
        wrap_pyfunction!(sigma2, m)?,
        wrap_pyfunction!(classify, m)?,
        wrap_pyfunction!(solve, m)?,
        wrap_pyfunction!(family, m)?,
        wrap_pyfunction!(verify_solution, m)?,
        wrap_pyfunction!(solve_fib_conic, m)?,
        wrap_pyfunction!(orbit_reps, m)?,
        wrap_pyfunction!(conic_points, m)?,
        wrap_pyfunction!(verify_tables, m)?,
    ] {
        m.add_function(f)?;
    }
    Ok(())
}
