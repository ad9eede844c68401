//! Python bindings: matrices, ratios and metrics plus the main checks.
//!
//! Rationals cross the boundary as `"p/q"` strings; Python ints are read as
//! rationals and Python floats switch a matrix to float arithmetic.

use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use lratio_core::constants::{self, BarycentricRatio, N3Grid, SupConfig};
use lratio_core::cutcone;
use lratio_core::json;
use lratio_core::lorentzian::{self, AnyMatrix, Rank2Params, SymMatrix};
use lratio_core::metric::{self, LogMetric};
use lratio_core::ratio::{self, FullRatio, ReducedRatio};
use lratio_core::reproduce::{self, Scale};
use lratio_core::scalar::{format_rational, parse_rational, Scalar};
use lratio_core::subfree;
use lratio_core::{Error, Rational};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::ResourceLimit { .. } => PyMemoryError::new_err(e.to_string()),
        Error::InvariantViolation(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for lratio_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// A Python number or `"p/q"` string.
enum Entry {
    Exact(Rational),
    Float(f64),
}

fn entry(v: &Bound<'_, PyAny>) -> PyResult<Entry> {
    if let Ok(s) = v.extract::<String>() {
        return parse_rational(&s).map(Entry::Exact).py();
    }
    if let Ok(i) = v.extract::<i64>() {
        return Ok(Entry::Exact(Rational::from_i64(i)));
    }
    v.extract::<f64>()
        .map(Entry::Float)
        .map_err(|_| PyValueError::new_err("entries must be int, float or \"p/q\" strings"))
}

fn rational(v: &Bound<'_, PyAny>) -> PyResult<Rational> {
    match entry(v)? {
        Entry::Exact(r) => Ok(r),
        Entry::Float(f) => lratio_core::scalar::from_f64(f).py(),
    }
}

fn to_py_text(r: &Rational) -> String {
    format_rational(r)
}

/// Symmetric matrix with rational or float entries.
#[pyclass(module = "lratio", frozen)]
struct Matrix {
    inner: AnyMatrix,
}

#[pymethods]
impl Matrix {
    /// Rows of ints, floats or `"p/q"` strings; any float makes the matrix float.
    #[new]
    fn new(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let parsed: Vec<Vec<Entry>> = rows
            .iter()
            .map(|r| r.iter().map(entry).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<_>>()?;
        let any_float = parsed.iter().flatten().any(|e| matches!(e, Entry::Float(_)));
        let inner = if any_float {
            let rows = parsed
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|e| match e {
                            Entry::Exact(q) => q.to_f64(),
                            Entry::Float(f) => f,
                        })
                        .collect()
                })
                .collect();
            AnyMatrix::Float(SymMatrix::from_rows(rows).py()?)
        } else {
            let rows = parsed
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|e| match e {
                            Entry::Exact(q) => q,
                            Entry::Float(_) => unreachable!("no float entries"),
                        })
                        .collect()
                })
                .collect();
            AnyMatrix::Rational(SymMatrix::from_rows(rows).py()?)
        };
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v = json::parse(text).py()?;
        Ok(Self {
            inner: json::matrix_from_json(&v).py()?,
        })
    }

    /// Hessian of `(a.x)(b.x)`.
    #[staticmethod]
    fn rank2(a: Vec<Bound<'_, PyAny>>, b: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let a = a.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        let b = b.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        let p = Rank2Params::new(a, b).py()?;
        Ok(Self {
            inner: lorentzian::rank2_hessian(&p).into(),
        })
    }

    /// The rank-3 family on which the pentagonal ratio is `16(1+t)/(2+t)^2`.
    #[staticmethod]
    fn witness_pentagonal(t: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Self {
            inner: lorentzian::witness_pentagonal(&rational(t)?).py()?.into(),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn exact(&self) -> bool {
        matches!(self.inner, AnyMatrix::Rational(_))
    }

    fn is_lorentzian(&self) -> bool {
        lorentzian::is_lorentzian(&self.inner).lorentzian
    }

    /// `(n_pos, n_neg, n_zero)`.
    fn signature(&self) -> (usize, usize, usize) {
        let s = lorentzian::is_lorentzian(&self.inner).signature;
        (s.n_pos, s.n_neg, s.n_zero)
    }

    /// Membership in `Delta_n(T_p)`.
    fn in_delta_tp(&self, p: &Bound<'_, PyAny>) -> PyResult<bool> {
        metric::in_delta_tp(&self.inner, &rational(p)?).py()
    }

    fn to_json(&self) -> String {
        json::matrix_to_json(&self.inner).to_string()
    }

    fn __repr__(&self) -> String {
        format!("Matrix(n={}, exact={})", self.n(), self.exact())
    }
}

/// Exponent vector `alpha` over pairs `i <= j`.
#[pyclass(module = "lratio", frozen)]
struct Ratio {
    inner: FullRatio,
}

#[pymethods]
impl Ratio {
    /// Off-diagonal exponents keyed by 1-based pairs; the diagonal is
    /// reconstructed from the balance identity.
    #[new]
    fn new(n: usize, offdiag: Vec<((usize, usize), Bound<'_, PyAny>)>) -> PyResult<Self> {
        let mut coords = vec![Rational::from_i64(0); cutcone::pair_count(n)];
        for ((i, j), v) in &offdiag {
            if *i == 0 || *j == 0 || i == j || *i > n || *j > n {
                return Err(PyValueError::new_err(format!("({i}, {j}) is not a pair in [1, {n}]")));
            }
            coords[cutcone::pair_index(n, i - 1, j - 1)] = rational(v)?;
        }
        Ok(Self {
            inner: ratio::complete_diagonal(&ReducedRatio::new(n, coords).py()?),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v = json::parse(text).py()?;
        Ok(Self {
            inner: json::ratio_from_json(&v).py()?,
        })
    }

    #[staticmethod]
    fn alexandrov_fenchel(i: usize, j: usize, n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: ratio::alexandrov_fenchel(i, j, n).py()?,
        })
    }

    /// `alpha^{ij|k}`.
    #[staticmethod]
    fn triangular(i: usize, j: usize, k: usize, n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: ratio::triangular(i, j, k, n).py()?,
        })
    }

    /// `alpha^{ijk|lm}`.
    #[staticmethod]
    fn pentagonal(i: usize, j: usize, k: usize, l: usize, m: usize, n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: ratio::pentagonal(i, j, k, l, m, n).py()?,
        })
    }

    /// Facet normal coordinates, pairs in lexicographic order.
    #[staticmethod]
    fn from_facet(n: usize, coords: Vec<i64>) -> PyResult<Self> {
        let f = cutcone::FacetNormal::new(n, coords).py()?;
        Ok(Self {
            inner: ratio::complete_diagonal(&ReducedRatio::from_facet(&f)),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// `(bounded, violating subset or None)`, subsets 1-based.
    fn is_bounded(&self) -> PyResult<(bool, Option<Vec<usize>>)> {
        let c = ratio::is_bounded(&self.inner.reduced()).py()?;
        Ok((c.bounded, c.violating_subset))
    }

    /// `(exact "p/q" or None, float value)`.
    fn evaluate(&self, m: &Matrix) -> PyResult<(Option<String>, f64)> {
        let e = ratio::evaluate(&self.inner, &m.inner).py()?;
        Ok((e.exact.as_ref().map(to_py_text), e.value))
    }

    fn normalize(&self) -> PyResult<Self> {
        Ok(Self {
            inner: ratio::complete_diagonal(&ratio::normalize_ratio(&self.inner.reduced()).py()?),
        })
    }

    /// `(holds, term count, expanded difference)`.
    fn subfree(&self) -> PyResult<(bool, usize, String)> {
        let r = subfree::subfree_check(&self.inner).py()?;
        Ok((r.holds, r.term_count, r.difference.to_string()))
    }

    /// Best value over seeded rank-2 samples and the witness families.
    #[pyo3(signature = (iterations = 10_000, seed = 0))]
    fn estimate_sup(&self, py: Python<'_>, iterations: usize, seed: u64) -> PyResult<f64> {
        let config = SupConfig {
            iterations,
            seed,
            ..SupConfig::default()
        };
        let r = &self.inner;
        py.detach(|| constants::estimate_sup(r, &config)).py().map(|e| e.empirical_sup)
    }

    fn to_json(&self) -> String {
        json::ratio_to_json(&self.inner).to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ratio({})", self.to_json())
    }
}

/// Log-domain metric with exact rational values.
#[pyclass(module = "lratio", frozen)]
struct Metric {
    inner: LogMetric<Rational>,
}

#[pymethods]
impl Metric {
    /// Values for pairs `(1,2), (1,3), ..., (n-1,n)`.
    #[new]
    fn new(n: usize, values: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let v = values.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: LogMetric::new(n, v).py()?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v = json::parse(text).py()?;
        Ok(Self {
            inner: json::metric_from_json(&v).py()?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn values(&self) -> Vec<String> {
        self.inner.values().iter().map(to_py_text).collect()
    }

    /// Gromov hyperbolicity as `"p/q"`.
    fn delta(&self) -> String {
        to_py_text(&metric::hyperbolicity_delta(&self.inner))
    }

    fn is_tree(&self) -> bool {
        metric::four_point_check(&self.inner)
    }

    /// `(approximation, max gap, 2 delta ceil(log2 n))` for a 1-based basepoint.
    #[pyo3(signature = (basepoint = 1))]
    fn tree_approx(&self, basepoint: usize) -> PyResult<(Metric, String, String)> {
        let k = basepoint
            .checked_sub(1)
            .ok_or_else(|| PyValueError::new_err("basepoint is 1-based"))?;
        let r = metric::tree_approx_report(&self.inner, k).py()?;
        Ok((Metric { inner: r.approx }, to_py_text(&r.max_gap), to_py_text(&r.bound)))
    }

    /// Cut decomposition `[(subset, weight)]` of a tree metric.
    fn cut_decomposition(&self) -> PyResult<Vec<(Vec<usize>, String)>> {
        let tree = metric::tree_reconstruct(&self.inner).py()?;
        let dec = metric::cut_decomposition(&tree, 0).py()?;
        Ok(dec.terms.into_iter().map(|t| (t.subset, to_py_text(&t.weight))).collect())
    }

    fn to_json(&self) -> String {
        json::metric_to_json(&self.inner).to_string()
    }

    fn __repr__(&self) -> String {
        format!("Metric({})", self.to_json())
    }
}

/// Facet normals of the cut cone on `n` points.
#[pyfunction]
fn enumerate_facets(py: Python<'_>, n: usize) -> PyResult<Vec<Vec<i64>>> {
    let facets = py.detach(|| cutcone::enumerate_facets(n)).py()?;
    Ok(facets.into_iter().map(|f| f.coords).collect())
}

/// `[(representative, size)]` of the S_n orbits of facets.
#[pyfunction]
fn facet_orbits(py: Python<'_>, n: usize) -> PyResult<Vec<(Vec<i64>, usize)>> {
    let report = py
        .detach(|| cutcone::enumerate_facets(n).and_then(|f| cutcone::orbit_classify(n, &f)))
        .py()?;
    Ok(report.orbits.into_iter().map(|o| (o.representative.coords, o.size)).collect())
}

fn barycentric(a: f64, b: f64, c: f64) -> PyResult<BarycentricRatio> {
    BarycentricRatio::new(a, b, c).py()
}

/// Optimal constant of `a alpha^{23|1} + b alpha^{13|2} + c alpha^{12|3}`, `a + b + c = 1`.
#[pyfunction]
fn theorem_c(a: f64, b: f64, c: f64) -> PyResult<f64> {
    Ok(constants::theorem_c(&barycentric(a, b, c)?))
}

/// The same constant by grid scan and Newton refinement.
#[pyfunction]
fn verify_n3(py: Python<'_>, a: f64, b: f64, c: f64) -> PyResult<f64> {
    let q = barycentric(a, b, c)?;
    Ok(py.detach(|| constants::verify_n3(&q, N3Grid::default())))
}

/// Optimal constant on `Delta_3(T_p)`.
#[pyfunction]
fn fp_delta3(a: f64, b: f64, c: f64, p: f64) -> PyResult<f64> {
    constants::fp_delta3(a, b, c, p).py()
}

/// `(applicable, holds)` for the cubic lemma on positive `x`, `y`.
#[pyfunction]
fn hard_lemma(x: [Bound<'_, PyAny>; 3], y: [Bound<'_, PyAny>; 3]) -> PyResult<(bool, bool)> {
    let x = [rational(&x[0])?, rational(&x[1])?, rational(&x[2])?];
    let y = [rational(&y[0])?, rational(&y[1])?, rational(&y[2])?];
    let c = constants::hard_lemma_check(&x, &y).py()?;
    Ok((c.applicable, c.holds))
}

/// `(passed, detail)` for one acceptance criterion.
#[pyfunction]
#[pyo3(signature = (id, seed = reproduce::DEFAULT_SEED, quick = true))]
fn run_criterion(py: Python<'_>, id: u8, seed: u64, quick: bool) -> PyResult<(bool, String)> {
    let scale = if quick { Scale::quick() } else { Scale::full() };
    let o = py.detach(|| reproduce::run_criterion(id, seed, &scale)).py()?;
    Ok((o.passed, o.detail))
}

#[pymodule]
fn lratio(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Matrix>()?;
    m.add_class::<Ratio>()?;
    m.add_class::<Metric>()?;
    m.add_function(wrap_pyfunction!(enumerate_facets, m)?)?;
    m.add_function(wrap_pyfunction!(facet_orbits, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_c, m)?)?;
    m.add_function(wrap_pyfunction!(verify_n3, m)?)?;
    m.add_function(wrap_pyfunction!(fp_delta3, m)?)?;
    m.add_function(wrap_pyfunction!(hard_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(run_criterion, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
