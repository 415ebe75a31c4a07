//! Cluster (graph) states: construction, Z-measurement pruning, stabilizer
//! groups and stabilizer-witness fidelity.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{QuantumError, Result};
use crate::pauli::{Pauli, PauliString};
use crate::state::{Basis, OutcomePolicy, PureState, MAX_QUBITS};

/// Largest graph for which the full stabilizer group is materialized.
pub const MAX_GROUP_SITES: usize = 6;

/// Undirected simple graph on sites `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphDoc> for Graph {
    type Error = QuantumError;

    fn try_from(doc: GraphDoc) -> Result<Self> {
        Graph::new(doc.n, doc.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphDoc {
    fn from(g: Graph) -> Self {
        GraphDoc { n: g.n, edges: g.edges.iter().map(|&(a, b)| [a, b]).collect() }
    }
}

impl Graph {
    /// Validates and normalizes an edge list. Self-loops, out-of-range sites
    /// and repeated edges are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(QuantumError::InvalidEdge(a, b));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(QuantumError::InvalidEdge(a, b));
            }
        }
        Ok(Self { n, edges: set })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: BTreeSet::new() }
    }

    /// `0 − 1 − … − (n−1)`.
    pub fn path(n: usize) -> Self {
        Self { n, edges: (1..n).map(|k| (k - 1, k)).collect() }
    }

    /// Path closed into a ring; for `n = 4` the box cluster.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n > 2 {
            g.edges.insert((0, n - 1));
        }
        g
    }

    /// The graph whose edge set is given by the bits of `mask` over all
    /// `n(n−1)/2` site pairs in lexicographic order.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let edges = Self::all_pairs(n)
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        Self { n, edges }
    }

    pub fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, j: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == j, b == j) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Removes site `j` and its links; later sites shift down by one.
    pub fn remove_site(&self, j: usize) -> Result<Self> {
        self.check_site(j)?;
        let shift = |k: usize| if k > j { k - 1 } else { k };
        let edges = self.edges.iter().filter(|&&(a, b)| a != j && b != j).map(|&(a, b)| (shift(a), shift(b))).collect();
        Ok(Self { n: self.n - 1, edges })
    }

    fn check_site(&self, j: usize) -> Result<()> {
        if j >= self.n {
            Err(QuantumError::IndexOutOfRange { index: j, n: self.n })
        } else {
            Ok(())
        }
    }
}

/// `(∏_{(i,j)∈E} CZ_ij)|+⟩^n`.
pub fn build_cluster(g: &Graph) -> Result<PureState> {
    if g.n > MAX_QUBITS {
        return Err(QuantumError::Capacity(g.n, MAX_QUBITS));
    }
    g.edges().try_fold(PureState::plus_state(g.n)?, |s, (a, b)| s.apply_cz(a, b))
}

/// Outcome of pruning a site with a computational-basis measurement.
#[derive(Debug, Clone)]
pub struct Pruned {
    pub outcome: u8,
    pub probability: f64,
    pub graph: Graph,
    pub state: PureState,
}

/// Measures site `j` of `state` (the cluster state of `g`, possibly with
/// Pauli-Z byproducts) in the computational basis. The result is the
/// cluster state of `g \ {j}` with `σz^s` on every former neighbour of `j`.
pub fn prune_z_measurement(g: &Graph, state: &PureState, j: usize, policy: OutcomePolicy<'_>) -> Result<Pruned> {
    g.check_site(j)?;
    if state.num_qubits() != g.n {
        return Err(QuantumError::DimensionMismatch { expected: g.n, found: state.num_qubits() });
    }
    let m = state.measure(j, &Basis::Computational, policy)?;
    Ok(Pruned { outcome: m.outcome, probability: m.probability, graph: g.remove_site(j)?, state: m.state })
}

/// Closed-form expectation of [`prune_z_measurement`]: `∏_{k∈N(j)} σz_k^s`
/// applied to the cluster state of the pruned graph.
pub fn pruned_cluster_prediction(g: &Graph, j: usize, outcome: u8) -> Result<PureState> {
    let pruned = g.remove_site(j)?;
    let mut state = build_cluster(&pruned)?;
    if outcome == 1 {
        for k in g.neighbors(j) {
            let k = if k > j { k - 1 } else { k };
            state = PauliString::single(pruned.n, k, Pauli::Z).apply(&state)?;
        }
    }
    Ok(state)
}

/// Canonical generator `K_j = X_j ∏_{k∈N(j)} Z_k`.
pub fn generator(g: &Graph, j: usize) -> PauliString {
    let mut letters = vec![Pauli::I; g.n];
    letters[j] = Pauli::X;
    for k in g.neighbors(j) {
        letters[k] = Pauli::Z;
    }
    PauliString::new(false, letters)
}

pub fn generators(g: &Graph) -> Vec<PauliString> {
    (0..g.n).map(|j| generator(g, j)).collect()
}

/// The `2ⁿ` elements of a cluster state's stabilizer group.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerGroup {
    elements: Vec<PauliString>,
}

impl StabilizerGroup {
    pub fn elements(&self) -> &[PauliString] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        self.elements.contains(p)
    }
}

/// Materializes the stabilizer group of `build_cluster(g)` for `n ≤ 6`.
///
/// Letters come from products of the generators; each sign is then fixed
/// numerically so the element has expectation `+1` on the simulated state.
pub fn stabilizer_group(g: &Graph) -> Result<StabilizerGroup> {
    if g.n > MAX_GROUP_SITES {
        return Err(QuantumError::Capacity(g.n, MAX_GROUP_SITES));
    }
    let state = build_cluster(g)?;
    let gens = generators(g);
    let mut elements = Vec::with_capacity(1 << g.n);
    for subset in 0u32..(1 << g.n) {
        let product = gens
            .iter()
            .enumerate()
            .filter(|(j, _)| subset >> j & 1 == 1)
            .try_fold(PauliString::identity(g.n), |acc, (_, k)| acc.mul(k))?;
        let e = product.expectation(&state)?;
        debug_assert!((e.abs() - 1.0).abs() < 1e-9, "{product} has expectation {e}");
        elements.push(product.with_sign((e < 0.0) != product.is_negative()));
    }
    Ok(StabilizerGroup { elements })
}

/// Witness fidelity `F = 2⁻ⁿ Σ_k ⟨S_k⟩` over a full stabilizer group.
pub fn witness_fidelity(expectations: &[f64]) -> Result<f64> {
    let len = expectations.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(QuantumError::CountMismatch { expected: len.next_power_of_two().max(1), found: len });
    }
    if let Some((index, &value)) = expectations.iter().enumerate().find(|(_, v)| !(-1.0..=1.0).contains(*v)) {
        return Err(QuantumError::ValueOutOfRange { index, value });
    }
    Ok(expectations.iter().sum::<f64>() / len as f64)
}
