use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{MeasurementSetting, Pauli, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// Star graph: vertex 0 joined to every other vertex.
    Ghz,
    /// Path graph `0 - 1 - … - (n-1)`.
    LinearCluster,
}

impl GraphKind {
    pub fn label(self) -> &'static str {
        match self {
            GraphKind::Ghz => "GHZ",
            GraphKind::LinearCluster => "LC",
        }
    }
}

/// A graph with a proper vertex coloring. Serialized as
/// `{"n": int, "edges": [[a, b], …], "coloring": [int, …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct GraphSpec {
    n: usize,
    edges: Vec<(usize, usize)>,
    coloring: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
    coloring: Vec<usize>,
}

impl TryFrom<RawGraph> for GraphSpec {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        GraphSpec::new(raw.n, raw.edges.into_iter().map(|[a, b]| (a, b)).collect(), raw.coloring)
    }
}

impl From<GraphSpec> for RawGraph {
    fn from(g: GraphSpec) -> Self {
        RawGraph { n: g.n, edges: g.edges.into_iter().map(|(a, b)| [a, b]).collect(), coloring: g.coloring }
    }
}

impl GraphSpec {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, coloring: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if coloring.len() != n {
            return Err(Error::InvalidGraph(format!("coloring has {} entries for {n} vertices", coloring.len())));
        }
        let mut neighbors = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {a}")));
            }
            let e = (a.min(b), a.max(b));
            if normalized.contains(&e) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
            if coloring[a] == coloring[b] {
                return Err(Error::InvalidColoring(e.0, e.1));
            }
            normalized.push(e);
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
        }
        Ok(GraphSpec { n, edges: normalized, coloring, neighbors })
    }

    pub fn build(kind: GraphKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGraph(format!("need at least 2 vertices, got {n}")));
        }
        match kind {
            GraphKind::Ghz => {
                let edges = (1..n).map(|k| (0, k)).collect();
                let coloring = (0..n).map(|k| usize::from(k != 0)).collect();
                Self::new(n, edges, coloring)
            }
            GraphKind::LinearCluster => {
                let edges = (0..n - 1).map(|k| (k, k + 1)).collect();
                let coloring = (0..n).map(|k| k % 2).collect();
                Self::new(n, edges, coloring)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn coloring(&self) -> &[usize] {
        &self.coloring
    }

    pub fn neighbors(&self, k: usize) -> &[usize] {
        &self.neighbors[k]
    }

    pub fn degree(&self, k: usize) -> usize {
        self.neighbors[k].len()
    }

    /// Vertex sets `Q_l` of the colors in use, ordered by color index.
    /// Unused color indices are skipped.
    pub fn color_classes(&self) -> Vec<Vec<usize>> {
        let max = self.coloring.iter().copied().max().unwrap_or(0);
        (0..=max)
            .map(|c| (0..self.n).filter(|&k| self.coloring[k] == c).collect::<Vec<_>>())
            .filter(|q| !q.is_empty())
            .collect()
    }

    pub fn num_colors(&self) -> usize {
        self.color_classes().len()
    }

    /// `S_k = X_k ∏_{j ~ k} Z_j`.
    pub fn stabilizer(&self, k: usize) -> PauliString {
        PauliString::from_xz_support(self.n, &[k], &self.neighbors[k])
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|k| self.stabilizer(k)).collect()
    }

    /// Common eigenbasis of the stabilizers in `class`: `X` on the class,
    /// `Z` elsewhere.
    pub fn class_setting(&self, class: &[usize]) -> MeasurementSetting {
        let mut bases = vec![Pauli::Z; self.n];
        for &k in class {
            bases[k] = Pauli::X;
        }
        MeasurementSetting::new(bases).expect("bases are never identity")
    }
}
