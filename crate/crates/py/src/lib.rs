//! Python bindings: graphs, single games, the exact solver, and a few lab
//! computations. Colors cross the boundary as `"R"` / `"B"`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ramsey_core::game::GameConfig;
use ramsey_core::harness::{run_game, verify_all, GameRun, Mutation};
use ramsey_core::lab::{classical_ramsey, kst_bound};
use ramsey_core::solver::{brute_value, Solver};
use ramsey_core::{BichromaticGraph, Color, Pair};

fn err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn color(s: &str) -> PyResult<Color> {
    Color::from_letter(s).ok_or_else(|| err(format!("color must be \"R\" or \"B\", got {s:?}")))
}

fn config(m: usize, n: usize, vertices: usize) -> PyResult<GameConfig> {
    GameConfig::new(m, n, vertices).map_err(err)
}

/// A graph on `n` vertices whose pairs are unbuilt, red or blue.
#[pyclass(name = "Graph", skip_from_py_object)]
#[derive(Clone)]
pub struct PyGraph {
    inner: BichromaticGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        Ok(PyGraph { inner: BichromaticGraph::new(n).map_err(err)? })
    }

    /// Parses the `N` / `u v R|B` text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: BichromaticGraph::from_text(text).map_err(err)? })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn built_count(&self) -> usize {
        self.inner.built_count()
    }

    fn build_edge(&mut self, u: usize, v: usize, c: &str) -> PyResult<()> {
        self.inner.build_edge(u, v, color(c)?).map_err(err)
    }

    /// `"R"`, `"B"`, or `None` for an unbuilt pair.
    fn color(&self, u: usize, v: usize) -> Option<String> {
        self.inner.color(u, v).map(|c| c.letter().to_string())
    }

    fn edges(&self) -> Vec<(usize, usize, String)> {
        self.inner.edges().map(|(u, v, c)| (u, v, c.letter().to_string())).collect()
    }

    fn find_mono_clique(&self, c: &str, k: usize) -> PyResult<Option<Vec<usize>>> {
        Ok(self.inner.find_mono_clique(color(c)?, k))
    }

    fn are_independent(&self, p: (usize, usize), q: (usize, usize)) -> bool {
        self.inner.are_independent(Pair::new(p.0, p.1), Pair::new(q.0, q.1))
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Plays one game and returns status, move count, savings, phase log and
/// the transcript text.
#[pyfunction]
#[pyo3(signature = (m, n, vertices, builder = "paper", painter = "random", seed = 0))]
fn play<'py>(
    py: Python<'py>,
    m: usize,
    n: usize,
    vertices: usize,
    builder: &str,
    painter: &str,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let run = GameRun { config: config(m, n, vertices)?, builder: builder.into(), painter: painter.into(), seed };
    let (transcript, report) = run_game(&run).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("status", report.status)?;
    out.set_item("moves", report.moves)?;
    out.set_item("savings", report.savings)?;
    out.set_item("phases", serde_json::to_string(&report.phases).map_err(err)?)?;
    out.set_item("transcript", transcript.to_text())?;
    Ok(out)
}

/// Exact number of moves Builder needs from `graph` (default: empty), or
/// `None` when Painter can hold out forever.
#[pyfunction]
#[pyo3(signature = (m, n, vertices, graph = None))]
fn solve<'py>(
    py: Python<'py>,
    m: usize,
    n: usize,
    vertices: usize,
    graph: Option<PyRef<'_, PyGraph>>,
) -> PyResult<Bound<'py, PyDict>> {
    let config = config(m, n, vertices)?;
    let g = match graph {
        Some(g) => g.inner.clone(),
        None => BichromaticGraph::new(vertices).map_err(err)?,
    };
    let r = Solver::new(config).and_then(|mut s| s.solve(&g)).map_err(err)?;
    let pv: Vec<(usize, usize, String)> = r
        .principal_variation
        .iter()
        .map(|mv| (mv.pair.lo, mv.pair.hi, mv.color.letter().to_string()))
        .collect();
    let out = PyDict::new(py);
    out.set_item("value", r.value)?;
    out.set_item("savings", r.value.map(|v| g.unbuilt_count() - v as usize))?;
    out.set_item("principal_variation", pv)?;
    out.set_item("nodes_expanded", r.nodes_expanded)?;
    Ok(out)
}

/// The unpruned oracle value (`N ≤ 6`).
#[pyfunction]
#[pyo3(signature = (m, n, vertices, graph = None))]
fn oracle_value(m: usize, n: usize, vertices: usize, graph: Option<PyRef<'_, PyGraph>>) -> PyResult<Option<u32>> {
    let config = config(m, n, vertices)?;
    let g = match graph {
        Some(g) => g.inner.clone(),
        None => BichromaticGraph::new(vertices).map_err(err)?,
    };
    brute_value(&g, config).map_err(err)
}

/// Kővári–Sós–Turán bound as an exact `p/q` string.
#[pyfunction(name = "kst_bound")]
fn py_kst_bound(m: u64, n: u64, s: u32, t: u64) -> PyResult<String> {
    Ok(kst_bound(m, n, s, t).map_err(err)?.to_string())
}

#[pyfunction(name = "classical_ramsey")]
fn py_classical_ramsey(m: usize, n: usize) -> Option<usize> {
    classical_ramsey(m, n)
}

/// Runs the property batch; returns `(name, passed, detail)` per item.
#[pyfunction]
#[pyo3(signature = (quick = true))]
fn verify(py: Python<'_>, quick: bool) -> Vec<(String, bool, String)> {
    let report = py.detach(|| verify_all(quick, Mutation::None));
    report.items.into_iter().map(|i| (i.name, i.passed, i.detail)).collect()
}

#[pymodule]
fn ramsey_game(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(play, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_value, m)?)?;
    m.add_function(wrap_pyfunction!(py_kst_bound, m)?)?;
    m.add_function(wrap_pyfunction!(py_classical_ramsey, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
