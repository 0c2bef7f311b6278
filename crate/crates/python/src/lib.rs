//! Python bindings: instances, solvers, the two-player engine, hex boards,
//! generators and the brute-force oracles.

use engine::duel::{self, strategy_move, Player, Policy, RuleError};
use engine::hexboard::{self, hex_to_graph};
use engine::reductions::{self, ReductionArtifact};
use engine::solitaire::{self, order::load_order, Method};
use engine::{ColoredGraph, NodeSpec};
use pyo3::create_exception;
use pyo3::exceptions::{PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

create_exception!(honeybee, RuleViolation, PyValueError, "An illegal call; the message starts with R1, R2 or R3.");

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rule_err(e: RuleError) -> PyErr {
    RuleViolation::new_err(e.to_string())
}

/// serde_json value to plain Python objects.
fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_u64() {
            Some(u) => u.into_pyobject(py)?.into_any(),
            None => match n.as_i64() {
                Some(i) => i.into_pyobject(py)?.into_any(),
                None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
            },
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn serde_to_py<'py>(py: Python<'py>, x: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(x).map_err(value_err)?)
}

/// A graph with optional start annotations.
#[pyclass(module = "honeybee", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Instance {
    inner: engine::Instance,
}

impl Instance {
    fn node(&self, name: &str) -> PyResult<usize> {
        self.inner.graph.id(name).ok_or_else(|| value_err(format!("unknown node {name:?}")))
    }
}

#[pymethods]
impl Instance {
    /// Parses an instance file.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Instance {
            inner: engine::load_instance(text).map_err(value_err)?,
        })
    }

    /// Nodes are named `v0, v1, ...` unless `names` is given; edges are index pairs.
    #[staticmethod]
    #[pyo3(signature = (k, colors, edges, weights=None, names=None, start=None, start_a=None, start_b=None))]
    #[allow(clippy::too_many_arguments)]
    fn from_graph(
        k: u32,
        colors: Vec<u32>,
        edges: Vec<(usize, usize)>,
        weights: Option<Vec<u64>>,
        names: Option<Vec<String>>,
        start: Option<usize>,
        start_a: Option<usize>,
        start_b: Option<usize>,
    ) -> PyResult<Self> {
        let n = colors.len();
        if weights.as_ref().is_some_and(|w| w.len() != n) || names.as_ref().is_some_and(|w| w.len() != n) {
            return Err(value_err("colors, weights and names must have equal lengths"));
        }
        let nodes = (0..n)
            .map(|i| {
                let name = names.as_ref().map_or_else(|| format!("v{i}"), |v| v[i].clone());
                NodeSpec::weighted(name, colors[i], weights.as_ref().map_or(1, |w| w[i]))
            })
            .collect();
        let graph = ColoredGraph::new(k, nodes, &edges).map_err(value_err)?;
        for s in [start, start_a, start_b].into_iter().flatten() {
            if s >= n {
                return Err(value_err(format!("start {s} out of range")));
            }
        }
        let mut inner = engine::Instance::new(graph);
        inner.start = start;
        inner.start_a = start_a;
        inner.start_b = start_b;
        Ok(Instance { inner })
    }

    fn to_json(&self) -> String {
        engine::write_instance(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.graph.len()
    }

    fn __repr__(&self) -> String {
        let g = &self.inner.graph;
        format!("Instance(nodes={}, edges={}, k={})", g.len(), g.edge_count(), g.k())
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.graph.k()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.graph.names().to_vec()
    }

    #[getter]
    fn colors(&self) -> Vec<u32> {
        self.inner.graph.colors().to_vec()
    }

    #[getter]
    fn weights(&self) -> Vec<u64> {
        self.inner.graph.weights().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.graph.edges()
    }

    #[getter]
    fn start(&self) -> Option<usize> {
        self.inner.start
    }

    #[getter]
    fn start_a(&self) -> Option<usize> {
        self.inner.start_a
    }

    #[getter]
    fn start_b(&self) -> Option<usize> {
        self.inner.start_b
    }

    /// Whether `calls` from `start` conquer every node.
    fn conquers(&self, start: usize, calls: Vec<u32>) -> PyResult<bool> {
        if start >= self.inner.graph.len() {
            return Err(value_err(format!("start {start} out of range")));
        }
        Ok(solitaire::replays_to_full(&self.inner.graph, start, &calls))
    }
}

/// Shortest conquering sequence. `start` is a node index or name; `order`
/// is an order file (`{"less": [[a, b], ...]}`) for the cocomp method.
#[pyfunction]
#[pyo3(signature = (instance, start=None, method="exact", order=None, budget=2_000_000))]
fn solve<'py>(
    py: Python<'py>,
    instance: &Instance,
    start: Option<Bound<'py, PyAny>>,
    method: &str,
    order: Option<&str>,
    budget: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let g = &instance.inner.graph;
    let start = match start {
        Some(s) => match s.extract::<usize>() {
            Ok(i) => i,
            Err(_) => instance.node(&s.extract::<String>()?)?,
        },
        None => instance.inner.start.or(instance.inner.start_a).ok_or_else(|| value_err("no start given"))?,
    };
    let method: Method = method.parse().map_err(value_err)?;
    let order = order.map(|t| load_order(t, g)).transpose().map_err(value_err)?;
    let inst = instance.inner.clone();
    let r = py
        .detach(move || solitaire::solve(&inst.graph, start, method, order.as_ref(), inst.clique.as_deref(), budget))
        .map_err(value_err)?;
    serde_to_py(py, &r)
}

/// Position in a two-player game.
#[pyclass(module = "honeybee", frozen, skip_from_py_object)]
#[derive(Clone)]
struct GameState {
    inner: duel::GameState,
}

#[pymethods]
impl GameState {
    #[getter]
    fn territory_a(&self) -> Vec<usize> {
        self.inner.w_a.to_vec()
    }

    #[getter]
    fn territory_b(&self) -> Vec<usize> {
        self.inner.w_b.to_vec()
    }

    #[getter]
    fn last_a(&self) -> Option<u32> {
        self.inner.last_a
    }

    #[getter]
    fn last_b(&self) -> Option<u32> {
        self.inner.last_b
    }

    #[getter]
    fn to_move(&self) -> String {
        self.inner.to_move.to_string()
    }

    #[getter]
    fn round(&self) -> usize {
        self.inner.round
    }

    #[getter]
    fn stall(&self) -> usize {
        self.inner.stall
    }

    fn __eq__(&self, other: &GameState) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "GameState(A={:?}, B={:?}, to_move={}, round={})",
            self.inner.w_a.to_vec(),
            self.inner.w_b.to_vec(),
            self.inner.to_move,
            self.inner.round
        )
    }
}

fn policy(name: &str) -> PyResult<Policy> {
    name.parse().map_err(value_err)
}

/// Two-player game on an instance with `start_a` and `start_b`.
#[pyclass(module = "honeybee", frozen)]
struct Game {
    inner: duel::Game,
}

#[pymethods]
impl Game {
    #[new]
    #[pyo3(signature = (instance, stall_cap=None))]
    fn new(instance: &Instance, stall_cap: Option<usize>) -> PyResult<Self> {
        let (Some(a0), Some(b0)) = (instance.inner.start_a, instance.inner.start_b) else {
            return Err(value_err("the instance needs start_a and start_b"));
        };
        let mut inner = duel::Game::new(instance.inner.graph.clone(), a0, b0).map_err(value_err)?;
        if let Some(cap) = stall_cap {
            inner = inner.with_stall_cap(cap);
        }
        Ok(Game { inner })
    }

    #[getter]
    fn stall_cap(&self) -> usize {
        self.inner.stall_cap
    }

    fn initial(&self) -> GameState {
        GameState {
            inner: self.inner.initial(),
        }
    }

    fn legal_colors(&self, state: &GameState) -> PyResult<Vec<u32>> {
        self.inner.legal_colors(&state.inner).map_err(rule_err)
    }

    /// Returns the next state and the weight gained; raises `RuleViolation`.
    fn apply_move(&self, state: &GameState, color: u32) -> PyResult<(GameState, u64)> {
        let (next, gained) = self.inner.apply_move(&state.inner, color).map_err(rule_err)?;
        Ok((GameState { inner: next }, gained))
    }

    /// `None` while the game runs, else a dict with winner, reason and weights.
    fn winner<'py>(&self, py: Python<'py>, state: &GameState) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.inner
            .winner(&state.inner)
            .map(|v| serde_to_py(py, &serde_json::json!({"winner": v.winner, "reason": v.reason, "weight_a": v.weight_a, "weight_b": v.weight_b})))
            .transpose()
    }

    /// The call a policy makes in `state`.
    #[pyo3(signature = (state, policy_name="greedy", seed=0))]
    fn strategy_move(&self, state: &GameState, policy_name: &str, seed: u64) -> PyResult<u32> {
        let p = policy(policy_name)?;
        Ok(strategy_move(&self.inner, &state.inner, &p, seed).map_err(rule_err)?.0)
    }

    /// Plays to the end; returns the transcript and the verdict.
    #[pyo3(signature = (policy_a="greedy", policy_b="greedy", seed=0))]
    fn play_out<'py>(&self, py: Python<'py>, policy_a: &str, policy_b: &str, seed: u64) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        let (pa, pb) = (policy(policy_a)?, policy(policy_b)?);
        let (moves, v) = self.inner.play_out([&pa, &pb], seed);
        Ok((
            serde_to_py(py, &moves)?,
            serde_to_py(py, &serde_json::json!({"winner": v.winner, "reason": v.reason, "weight_a": v.weight_a, "weight_b": v.weight_b}))?,
        ))
    }

    /// Game-theoretic winner from the initial position.
    #[pyo3(signature = (budget=1_000_000))]
    fn minimax(&self, py: Python<'_>, budget: usize) -> PyResult<String> {
        let r = py.detach(|| duel::minimax(&self.inner, &self.inner.initial(), budget)).map_err(value_err)?;
        Ok(r.winner.to_string())
    }

    /// Winner by the outerplanar index search; `walk` is the outer-face walk
    /// as node indices.
    #[pyo3(signature = (walk, budget=1_000_000))]
    fn outerplanar(&self, walk: Vec<usize>, budget: usize) -> PyResult<String> {
        let r = duel::outerplanar_solve(&self.inner, &walk, budget).map_err(value_err)?;
        Ok(r.winner.to_string())
    }

    /// Replays a JSON-lines transcript from the initial position.
    fn replay(&self, transcript: &str) -> PyResult<GameState> {
        let moves = duel::parse_transcript(transcript).map_err(value_err)?;
        Ok(GameState {
            inner: self.inner.replay(&moves).map_err(value_err)?,
        })
    }
}

/// Honeycomb board in axial coordinates.
#[pyclass(module = "honeybee", frozen)]
struct HexBoard {
    inner: hexboard::HexBoard,
}

#[pymethods]
impl HexBoard {
    /// Seeded random board; `duel=True` rerolls until the cell count is odd.
    #[staticmethod]
    #[pyo3(signature = (rows, cols, k, seed=0, symmetric=false, holes=0.0, duel=false))]
    fn random(rows: usize, cols: usize, k: u32, seed: u64, symmetric: bool, holes: f64, duel: bool) -> PyResult<Self> {
        let f = if duel { hexboard::random_duel_board } else { hexboard::random_board };
        Ok(HexBoard {
            inner: f(rows, cols, k, seed, symmetric, holes).map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(HexBoard {
            inner: hexboard::HexBoard::from_json(text).map_err(value_err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k
    }

    /// `(q, r, color)` per cell.
    #[getter]
    fn cells(&self) -> Vec<(i32, i32, u32)> {
        self.inner.cells.iter().map(|c| (c.q, c.r, c.color)).collect()
    }

    #[getter]
    fn start_a(&self) -> (i32, i32) {
        self.inner.start_a
    }

    #[getter]
    fn start_b(&self) -> (i32, i32) {
        self.inner.start_b
    }

    fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn to_instance(&self) -> Instance {
        Instance {
            inner: hex_to_graph(&self.inner),
        }
    }
}

/// A generated instance with its bound and provenance sidecar.
#[pyclass(module = "honeybee", frozen)]
struct Artifact {
    inner: ReductionArtifact,
}

#[pymethods]
impl Artifact {
    #[getter]
    fn instance(&self) -> Instance {
        Instance {
            inner: self.inner.instance.clone(),
        }
    }

    #[getter]
    fn bound(&self) -> Option<usize> {
        self.inner.bound
    }

    fn provenance_json(&self) -> String {
        self.inner.provenance_json()
    }

    fn role_counts(&self) -> std::collections::BTreeMap<String, usize> {
        self.inner.role_counts()
    }
}

/// Compiles a source problem given as JSON. `kind` is one of `fvs`,
/// `scs-tree`, `mscs-tree`, `scs-sp`, `qbf`.
#[pyfunction]
#[pyo3(signature = (kind, source, expand_pots=false))]
fn generate(kind: &str, source: &str, expand_pots: bool) -> PyResult<Artifact> {
    use reductions::*;
    let inner = match kind {
        "fvs" => gen_fvs_split(&Digraph::from_json(source).map_err(value_err)?),
        "scs-tree" => gen_mscs_tree(&scs_to_mscs(&BinarySequences::from_json(source).map_err(value_err)?)),
        "mscs-tree" => gen_mscs_tree(&TernarySequences::from_json(source).map_err(value_err)?),
        "scs-sp" => gen_scs_sp(&BinarySequences::from_json(source).map_err(value_err)?, expand_pots),
        "qbf" => gen_qbf(&QbfFormula::from_json(source).map_err(value_err)?, expand_pots),
        other => return Err(value_err(format!("unknown generator {other:?}"))),
    };
    Ok(Artifact { inner })
}

fn digits(s: &str) -> PyResult<Vec<u8>> {
    s.chars()
        .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| value_err(format!("{s:?} is not a digit string"))))
        .collect()
}

/// Shortest common supersequence of digit strings: `(length, witness)`.
#[pyfunction]
fn brute_scs(seqs: Vec<String>) -> PyResult<(usize, String)> {
    let seqs = seqs.iter().map(|s| digits(s)).collect::<PyResult<Vec<_>>>()?;
    let (n, w) = reductions::brute_scs(&seqs).map_err(value_err)?;
    Ok((n, w.iter().map(|d| char::from(b'0' + d)).collect()))
}

/// Minimum feedback vertex set of `{"arcs": [[u, v], ...], "t": t}`.
#[pyfunction]
fn brute_fvs(source: &str) -> PyResult<(usize, Vec<usize>)> {
    let d = reductions::Digraph::from_json(source).map_err(value_err)?;
    reductions::brute_fvs(&d).map_err(value_err)
}

/// Parses `"A"` or `"B"`.
#[pyfunction]
fn other_player(p: &str) -> PyResult<String> {
    let p: Player = p.parse().map_err(value_err)?;
    Ok(p.other().to_string())
}

#[pymodule]
fn honeybee(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_class::<GameState>()?;
    m.add_class::<Game>()?;
    m.add_class::<HexBoard>()?;
    m.add_class::<Artifact>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(brute_scs, m)?)?;
    m.add_function(wrap_pyfunction!(brute_fvs, m)?)?;
    m.add_function(wrap_pyfunction!(other_player, m)?)?;
    m.add("RuleViolation", m.py().get_type::<RuleViolation>())?;
    Ok(())
}
