//! Python module `hurwitz`. Counts come back as `fractions.Fraction`.

use hurwitz_core::cli::{parse_profiles, run, Command, Request};
use hurwitz_core::enumerate::{cjm_double_hurwitz, tropical_hurwitz};
use hurwitz_core::mumford::{refinement_independence_check, wiener_weight};
use hurwitz_core::newick::parse_newick;
use hurwitz_core::oracle::{classical_hurwitz, genus_from_profiles};
use hurwitz_core::{BranchTree, CoverClass, Limits, Partition, Rational, TropicalCount};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

/// Accepts `"2,1|3|2,1"` or a list of lists of parts.
fn profiles_arg(obj: &Bound<'_, PyAny>) -> PyResult<(u32, Vec<Partition>)> {
    let profiles = if let Ok(text) = obj.extract::<String>() {
        parse_profiles(&text).map_err(err)?
    } else {
        let parts: Vec<Vec<u32>> = obj.extract()?;
        let profiles = parts.into_iter().map(Partition::new).collect::<Result<Vec<_>, _>>().map_err(err)?;
        if profiles.windows(2).any(|w| w[0].degree() != w[1].degree()) {
            return Err(PyValueError::new_err("profiles partition different numbers"));
        }
        profiles
    };
    let d = profiles.first().map(Partition::degree).ok_or_else(|| PyValueError::new_err("no profiles"))?;
    Ok((d, profiles))
}

fn limits(max_work: Option<u128>) -> Limits {
    let mut l = Limits::default();
    if let Some(w) = max_work {
        l.max_work = w;
    }
    l
}

/// A branch tree with leaves labelled 0..n-1.
#[pyclass(name = "Tree", frozen, from_py_object)]
#[derive(Clone)]
struct PyTree(BranchTree);

#[pymethods]
impl PyTree {
    #[new]
    fn new(newick: &str) -> PyResult<Self> {
        parse_newick(newick).map(PyTree).map_err(err)
    }

    #[staticmethod]
    fn star(leaves: usize) -> PyResult<Self> {
        BranchTree::star(leaves).map(PyTree).map_err(err)
    }

    #[staticmethod]
    fn caterpillar(leaves: usize) -> PyResult<Self> {
        BranchTree::caterpillar(leaves).map(PyTree).map_err(err)
    }

    #[getter]
    fn num_leaves(&self) -> usize {
        self.0.num_leaves()
    }

    fn is_binary(&self) -> bool {
        self.0.is_binary()
    }

    fn newick(&self) -> String {
        self.0.to_newick()
    }

    fn __repr__(&self) -> String {
        format!("Tree({:?})", self.0.to_newick())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

fn tree_arg(tree: Option<&Bound<'_, PyAny>>, leaves: usize) -> PyResult<BranchTree> {
    match tree {
        None => BranchTree::caterpillar(leaves).map_err(err),
        Some(t) => {
            if let Ok(t) = t.extract::<PyTree>() {
                Ok(t.0)
            } else {
                parse_newick(&t.extract::<String>()?).map_err(err)
            }
        }
    }
}

/// One isomorphism class of tropical covers.
#[pyclass(name = "CoverClass", frozen)]
struct PyCoverClass(CoverClass);

#[pymethods]
impl PyCoverClass {
    #[getter]
    fn canonical_form(&self) -> String {
        self.0.canonical_form.as_str().to_string()
    }

    #[getter]
    fn aut(&self) -> u64 {
        self.0.aut_count
    }

    #[getter]
    fn multiplicity<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.multiplicity)
    }

    #[getter]
    fn betti(&self) -> usize {
        self.0.betti()
    }

    fn is_mumford(&self) -> PyResult<bool> {
        self.0.morphism.is_mumford().map_err(err)
    }

    fn dot(&self) -> String {
        self.0.morphism.to_dot()
    }

    fn json(&self) -> String {
        serde_json::to_string(&self.0.morphism).expect("morphisms serialize")
    }

    fn __repr__(&self) -> String {
        format!("CoverClass({:?}, multiplicity={})", self.0.canonical_form.as_str(), self.0.multiplicity)
    }
}

/// Result of a tropical count over a binary tree.
#[pyclass(name = "TropicalCount")]
struct PyTropicalCount {
    #[pyo3(get)]
    raw_count: usize,
    weighted: Rational,
    classical: Rational,
    higher_genus_weight: Rational,
    classes: Vec<Py<PyCoverClass>>,
}

impl PyTropicalCount {
    fn wrap(py: Python<'_>, c: TropicalCount) -> PyResult<Self> {
        Ok(PyTropicalCount {
            raw_count: c.raw_count,
            weighted: c.weighted,
            classical: c.classical,
            higher_genus_weight: c.higher_genus_weight,
            classes: c
                .classes
                .into_iter()
                .map(|k| Py::new(py, PyCoverClass(k)))
                .collect::<PyResult<_>>()?,
        })
    }
}

#[pymethods]
impl PyTropicalCount {
    #[getter]
    fn weighted<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.weighted)
    }

    #[getter]
    fn classical<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.classical)
    }

    /// Mass of oracle covers with a vertex of positive local genus.
    #[getter]
    fn higher_genus_weight<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.higher_genus_weight)
    }

    #[getter]
    fn classes(&self, py: Python<'_>) -> Vec<Py<PyCoverClass>> {
        self.classes.iter().map(|c| c.clone_ref(py)).collect()
    }

    fn __repr__(&self) -> String {
        format!("TropicalCount(raw_count={}, weighted={})", self.raw_count, self.weighted)
    }
}

#[pyfunction]
fn genus(profiles: &Bound<'_, PyAny>) -> PyResult<u32> {
    let (d, p) = profiles_arg(profiles)?;
    genus_from_profiles(d, &p).map_err(err)
}

#[pyfunction(name = "classical_hurwitz")]
#[pyo3(signature = (profiles, max_work=None))]
fn py_classical<'py>(py: Python<'py>, profiles: &Bound<'py, PyAny>, max_work: Option<u128>) -> PyResult<Bound<'py, PyAny>> {
    let (d, p) = profiles_arg(profiles)?;
    let value = py.detach(|| classical_hurwitz(d, &p, &limits(max_work))).map_err(err)?;
    fraction(py, &value)
}

#[pyfunction(name = "tropical_hurwitz")]
#[pyo3(signature = (profiles, tree=None, max_work=None))]
fn py_tropical(
    py: Python<'_>,
    profiles: &Bound<'_, PyAny>,
    tree: Option<&Bound<'_, PyAny>>,
    max_work: Option<u128>,
) -> PyResult<PyTropicalCount> {
    let (d, p) = profiles_arg(profiles)?;
    let t = tree_arg(tree, p.len())?;
    let count = py.detach(|| tropical_hurwitz(d, &p, &t, &limits(max_work))).map_err(err)?;
    PyTropicalCount::wrap(py, count)
}

#[pyfunction(name = "cjm_double_hurwitz")]
#[pyo3(signature = (eta, nu, genus, max_work=None))]
fn py_cjm(py: Python<'_>, eta: Vec<u32>, nu: Vec<u32>, genus: u32, max_work: Option<u128>) -> PyResult<PyTropicalCount> {
    let eta = Partition::new(eta).map_err(err)?;
    let nu = Partition::new(nu).map_err(err)?;
    let count = py
        .detach(|| cjm_double_hurwitz(eta.degree(), &eta, &nu, genus, &limits(max_work)))
        .map_err(err)?;
    PyTropicalCount::wrap(py, count)
}

/// Returns a dict with `classical`, `tropical`, `wiener_weight`, `mumford`
/// and the canonical `refinement`.
#[pyfunction(name = "mumford_hurwitz")]
#[pyo3(signature = (profiles, tree, max_work=None))]
fn py_mumford<'py>(
    py: Python<'py>,
    profiles: &Bound<'py, PyAny>,
    tree: &Bound<'py, PyAny>,
    max_work: Option<u128>,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let (d, p) = profiles_arg(profiles)?;
    let t = tree_arg(Some(tree), p.len())?;
    let w = py.detach(|| wiener_weight(d, &p, &t, &limits(max_work))).map_err(err)?;
    let out = pyo3::types::PyDict::new(py);
    out.set_item("classical", fraction(py, &w.classical)?)?;
    out.set_item("tropical", fraction(py, &w.tropical)?)?;
    out.set_item("wiener_weight", fraction(py, &w.wiener_weight)?)?;
    out.set_item("mumford", fraction(py, &w.mumford)?)?;
    out.set_item("refinement", w.refinement)?;
    Ok(out)
}

/// `(wiener_agree, mumford_agree)` over up to `trials` binary refinements.
#[pyfunction]
#[pyo3(signature = (profiles, tree, trials=3, max_work=None))]
fn refinement_check(
    py: Python<'_>,
    profiles: &Bound<'_, PyAny>,
    tree: &Bound<'_, PyAny>,
    trials: usize,
    max_work: Option<u128>,
) -> PyResult<(bool, bool)> {
    let (d, p) = profiles_arg(profiles)?;
    let t = tree_arg(Some(tree), p.len())?;
    let r = py
        .detach(|| refinement_independence_check(d, &p, &t, trials, &limits(max_work)))
        .map_err(err)?;
    Ok((r.wiener_agree, r.mumford_agree))
}

/// Same JSON report as the `hurwitz` binary.
#[pyfunction]
#[pyo3(signature = (command, profiles, tree=None))]
fn report(py: Python<'_>, command: &str, profiles: &str, tree: Option<&str>) -> PyResult<String> {
    let kind = match command {
        "classical" => Command::Classical,
        "tropical" => Command::Tropical,
        "mumford" => Command::Mumford,
        "verify" => Command::Verify,
        other => return Err(PyValueError::new_err(format!("unknown command {other:?}"))),
    };
    let outcome = py.detach(|| {
        let mut req = Request::new(kind, parse_profiles(profiles)?);
        req.tree = tree.map(parse_newick).transpose()?;
        run(&req)
    });
    match outcome {
        Ok(out) => Ok(out.report.to_string()),
        Err(e) => Ok(e.to_json().to_string()),
    }
}

#[pymodule]
pub fn hurwitz(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTree>()?;
    m.add_class::<PyCoverClass>()?;
    m.add_class::<PyTropicalCount>()?;
    m.add_function(wrap_pyfunction!(genus, m)?)?;
    m.add_function(wrap_pyfunction!(py_classical, m)?)?;
    m.add_function(wrap_pyfunction!(py_tropical, m)?)?;
    m.add_function(wrap_pyfunction!(py_cjm, m)?)?;
    m.add_function(wrap_pyfunction!(py_mumford, m)?)?;
    m.add_function(wrap_pyfunction!(refinement_check, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    Ok(())
}
