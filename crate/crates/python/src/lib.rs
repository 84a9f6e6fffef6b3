//! Python bindings: matrix groups and their cohomology, elliptic curves over
//! `Q`, p-adic approximation certificates, and the JSON-report commands.

use std::sync::Arc;

use galsym_cli::commands::{self, cohomology_record, ApproximateArgs, Scope};
use galsym_cli::{verify_report, CliError, Outcome, RunReport};
use galsym_core::cohomology::{
    cyclic_h1, h1, h2_small, inf_res_exactness_for, serre_restriction_check, sha1, StandardModule,
};
use galsym_core::elliptic::{self, division_polynomial, theorem_a_scan_with_degree, WeierstrassCurve};
use galsym_core::matgroup;
use galsym_core::padic::{
    approximate_point, random_point, verify_certificate, ApproximationCertificate, DepthPolicy, PadicCurve,
};
use galsym_core::{Dichotomy, GroupElement, MatGroup};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(galsym, GalsymError, PyException, "Invalid input or failed precondition.");

fn fail(e: impl std::fmt::Display) -> PyErr {
    GalsymError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(fail)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn module(name: &str) -> PyResult<StandardModule> {
    StandardModule::parse(name).ok_or_else(|| fail(format!("unknown module {name:?}; expected trivial, V, sym2, ad or VxV")))
}

fn modules(names: Option<Vec<String>>) -> PyResult<Vec<StandardModule>> {
    match names {
        None => Ok(StandardModule::ALL.to_vec()),
        Some(v) => v.iter().map(|s| module(s)).collect(),
    }
}

fn outcome<'py>(py: Python<'py>, r: Result<Outcome, CliError>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &r.map_err(fail)?.report)
}

/// A subgroup of `GL_2(F_p)` given by generators `"a,b,c,d"` (row-major).
#[pyclass(name = "Group", module = "galsym", frozen)]
struct PyGroup {
    inner: MatGroup,
}

#[pymethods]
impl PyGroup {
    #[new]
    #[pyo3(signature = (p, generators))]
    fn new(p: u32, generators: Vec<String>) -> PyResult<Self> {
        let gens: Vec<GroupElement> = generators.iter().map(|s| GroupElement::parse(p, s)).collect::<Result<_, _>>().map_err(fail)?;
        Ok(Self { inner: MatGroup::close(p, &gens).map_err(fail)? })
    }

    #[staticmethod]
    fn gl2(p: u32) -> PyResult<Self> {
        Ok(Self { inner: matgroup::gl2(p).map_err(fail)? })
    }

    #[staticmethod]
    fn sl2(p: u32) -> PyResult<Self> {
        Ok(Self { inner: matgroup::sl2(p).map_err(fail)? })
    }

    #[staticmethod]
    fn borel(p: u32) -> PyResult<Self> {
        Ok(Self { inner: matgroup::borel(p).map_err(fail)? })
    }

    #[staticmethod]
    fn unipotent(p: u32) -> PyResult<Self> {
        Ok(Self { inner: matgroup::unipotent(p).map_err(fail)? })
    }

    #[staticmethod]
    fn split_torus(p: u32) -> PyResult<Self> {
        Ok(Self { inner: matgroup::split_torus(p).map_err(fail)? })
    }

    #[staticmethod]
    fn nonsplit_torus(p: u32) -> PyResult<Self> {
        Ok(Self { inner: matgroup::nonsplit_torus(p).map_err(fail)? })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Group(p={}, order={})", self.inner.p(), self.inner.order())
    }

    fn generators(&self) -> Vec<String> {
        self.inner.generators().iter().map(ToString::to_string).collect()
    }

    /// Elements as `(a, b, c, d)` tuples.
    fn elements(&self) -> Vec<(u32, u32, u32, u32)> {
        self.inner.elements().iter().map(|e| e.entries().into()).collect()
    }

    fn contains(&self, matrix: &str) -> PyResult<bool> {
        Ok(self.inner.contains(&GroupElement::parse(self.inner.p(), matrix).map_err(fail)?))
    }

    fn is_subgroup_of(&self, other: &PyGroup) -> bool {
        self.inner.is_subgroup_of(&other.inner)
    }

    fn contains_sl2(&self) -> bool {
        self.inner.contains_sl2()
    }

    fn sylow(&self) -> Self {
        Self { inner: self.inner.sylow_p() }
    }

    fn cyclic_subgroups(&self) -> Vec<Self> {
        self.inner.cyclic_subgroups().into_iter().map(|inner| Self { inner }).collect()
    }

    fn conjugate(&self, matrix: &str) -> PyResult<Self> {
        let c = GroupElement::parse(self.inner.p(), matrix).map_err(fail)?;
        Ok(Self { inner: self.inner.conjugate(&c) })
    }

    /// `("borel-conjugate", witness)` or `("contains-sl2", None)`.
    fn classify(&self) -> PyResult<(String, Option<String>)> {
        match self.inner.classify_dichotomy().map_err(fail)? {
            Dichotomy::BorelConjugate { witness } => Ok(("borel-conjugate".into(), Some(witness.to_string()))),
            Dichotomy::ContainsSl2 => Ok(("contains-sl2".into(), None)),
        }
    }

    #[pyo3(signature = (module = "trivial"))]
    fn h1_dim(&self, module: &str) -> PyResult<usize> {
        Ok(h1(&Arc::new(self::module(module)?.build(&self.inner))).dim)
    }

    /// `H^1` of a cyclic group from the norm formula.
    #[pyo3(signature = (module = "trivial"))]
    fn cyclic_h1_dim(&self, module: &str) -> PyResult<usize> {
        cyclic_h1(&self::module(module)?.build(&self.inner)).map_err(fail)
    }

    #[pyo3(signature = (module = "trivial"))]
    fn h2_dim(&self, module: &str) -> PyResult<usize> {
        Ok(h2_small(&Arc::new(self::module(module)?.build(&self.inner))).map_err(fail)?.dim)
    }

    /// Dimension of the classes in `H^1` that vanish on every cyclic subgroup.
    #[pyo3(signature = (module = "trivial"))]
    fn sha1_dim(&self, module: &str) -> PyResult<usize> {
        Ok(sha1(&Arc::new(self::module(module)?.build(&self.inner))).dim)
    }

    /// `H^0`, `H^1`, `Sha^1` and (for small groups) `H^2` as a dict.
    #[pyo3(signature = (module = "trivial"))]
    fn cohomology<'py>(&self, py: Python<'py>, module: &str) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cohomology_record(&self.inner, self::module(module)?).map_err(fail)?)
    }
}

/// Every subgroup of `GL_2(F_3)`.
#[pyfunction]
fn subgroups_of_gl2_3() -> PyResult<Vec<PyGroup>> {
    Ok(MatGroup::enumerate_all_subgroups(3).map_err(fail)?.into_iter().map(|inner| PyGroup { inner }).collect())
}

/// Exactness of inflation-restriction for `N` normal in `G`.
#[pyfunction]
#[pyo3(signature = (g, n, module))]
fn inf_res_exactness<'py>(py: Python<'py>, g: &PyGroup, n: &PyGroup, module: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &inf_res_exactness_for(&g.inner, &n.inner, self::module(module)?).map_err(fail)?)
}

#[pyfunction]
fn serre_check<'py>(py: Python<'py>, p: u32, module: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serre_restriction_check(p, self::module(module)?).map_err(fail)?)
}

/// A Weierstrass curve `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over `Q`.
#[pyclass(name = "Curve", module = "galsym", frozen)]
struct PyCurve {
    inner: WeierstrassCurve,
}

#[pymethods]
impl PyCurve {
    #[new]
    fn new(label: String, coefficients: [i64; 5]) -> PyResult<Self> {
        Ok(Self { inner: WeierstrassCurve::new(label, coefficients).map_err(fail)? })
    }

    /// `y^2 = x^3 + a x + b`.
    #[staticmethod]
    #[pyo3(signature = (a, b, label = "short"))]
    fn short(a: i64, b: i64, label: &str) -> PyResult<Self> {
        Ok(Self { inner: WeierstrassCurve::short(label, a, b).map_err(fail)? })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    #[getter]
    fn coefficients(&self) -> [i64; 5] {
        self.inner.coefficients()
    }

    #[getter]
    fn discriminant(&self) -> i128 {
        self.inner.discriminant()
    }

    fn __repr__(&self) -> String {
        format!("Curve({:?}, {:?})", self.inner.label, self.inner.coefficients())
    }

    fn count_points(&self, p: u64) -> PyResult<u64> {
        self.inner.count_points(p).map_err(fail)
    }

    fn count_points_naive(&self, p: u64) -> u64 {
        self.inner.count_points_naive(p)
    }

    fn ap(&self, p: u64) -> PyResult<i64> {
        self.inner.ap(p).map_err(fail)
    }

    fn reduction_type(&self, p: u64) -> PyResult<&'static str> {
        Ok(self.inner.reduction_type(p).map_err(fail)?.as_str())
    }

    /// Coefficients of the `x`-part of the `n`-th division polynomial, constant term first.
    fn division_polynomial(&self, n: usize) -> Vec<BigInt> {
        division_polynomial(&self.inner, n).poly.coeffs().to_vec()
    }

    /// Per-prime elimination verdicts up to `bound`.
    #[pyo3(signature = (bound, degree = 1))]
    fn prime_scan<'py>(&self, py: Python<'py>, bound: u64, degree: u64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &theorem_a_scan_with_degree(&self.inner, bound, degree).map_err(fail)?)
    }

    fn ordinary_density(&self, bound: u64) -> PyResult<f64> {
        Ok(elliptic::ordinary_density_sample(&self.inner, bound).map_err(fail)?.fraction)
    }

    /// Certificate for a random point of `E(Q_p)` drawn from `seed`.
    #[pyo3(signature = (p, seed = commands::DEFAULT_SEED, depth_max = 16))]
    fn approximate<'py>(&self, py: Python<'py>, p: u32, seed: u64, depth_max: u32) -> PyResult<Bound<'py, PyAny>> {
        let pc = PadicCurve::new(&self.inner, p).map_err(fail)?;
        let pt = random_point(&pc, seed, commands::DEFAULT_PRECISION).map_err(fail)?;
        let cert = approximate_point(&pc, &pt, &DepthPolicy::with_depth_max(depth_max)).map_err(fail)?;
        to_py(py, &cert)
    }
}

#[pyfunction]
fn bundled_corpus() -> Vec<PyCurve> {
    elliptic::bundled_corpus().into_iter().map(|inner| PyCurve { inner }).collect()
}

/// Re-checks a certificate given as a dict or a JSON string.
#[pyfunction]
fn check_certificate(py: Python<'_>, certificate: &Bound<'_, PyAny>) -> PyResult<bool> {
    let text: String = match certificate.extract::<String>() {
        Ok(s) => s,
        Err(_) => py.import("json")?.call_method1("dumps", (certificate,))?.extract()?,
    };
    let cert: ApproximationCertificate = serde_json::from_str(&text).map_err(fail)?;
    verify_certificate(&cert).map_err(fail)
}

#[pyfunction]
#[pyo3(signature = (p, modules = None, scope = "families", seed = commands::DEFAULT_SEED))]
fn sha_scan<'py>(py: Python<'py>, p: u32, modules: Option<Vec<String>>, scope: &str, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let scope: Scope = scope.parse().map_err(fail)?;
    outcome(py, commands::sha_scan(p, &self::modules(modules)?, scope, seed))
}

#[pyfunction]
#[pyo3(signature = (bound = 500, degree = 1))]
fn prime_scan<'py>(py: Python<'py>, bound: u64, degree: u64) -> PyResult<Bound<'py, PyAny>> {
    outcome(py, commands::prime_scan(&elliptic::bundled_corpus(), bound, degree))
}

#[pyfunction]
#[pyo3(signature = (label, p, seed = commands::DEFAULT_SEED, depth_max = 16, pair = false))]
fn approximate<'py>(py: Python<'py>, label: &str, p: u32, seed: u64, depth_max: u32, pair: bool) -> PyResult<Bound<'py, PyAny>> {
    let args = ApproximateArgs { seed, depth_max, pair, ..ApproximateArgs::new(label, p) };
    outcome(py, commands::approximate(&elliptic::bundled_corpus(), &args))
}

/// Re-runs a report (dict or JSON string); returns the verification report.
#[pyfunction]
fn verify<'py>(py: Python<'py>, report: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let text: String = match report.extract::<String>() {
        Ok(s) => s,
        Err(_) => py.import("json")?.call_method1("dumps", (report,))?.extract()?,
    };
    let parsed: RunReport = serde_json::from_str(&text).map_err(fail)?;
    outcome(py, verify_report(&parsed))
}

#[pymodule]
fn galsym(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GalsymError", m.py().get_type::<GalsymError>())?;
    m.add("MODULES", StandardModule::ALL.map(StandardModule::name).to_vec())?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(subgroups_of_gl2_3, m)?)?;
    m.add_function(wrap_pyfunction!(inf_res_exactness, m)?)?;
    m.add_function(wrap_pyfunction!(serre_check, m)?)?;
    m.add_function(wrap_pyfunction!(bundled_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(check_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(sha_scan, m)?)?;
    m.add_function(wrap_pyfunction!(prime_scan, m)?)?;
    m.add_function(wrap_pyfunction!(approximate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
