//! 2D mesh of devices, its slot-level interaction graph, and the
//! negative-log-fidelity distance metric used by placement and routing.

use std::collections::HashMap;

use petgraph::algo::{dijkstra, floyd_warshall};
use petgraph::graph::{NodeIndex, UnGraph};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::{find_gate, library, Family, Radix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mesh {
    pub rows: usize,
    pub cols: usize,
    pub n_devices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    neighbors: Vec<Vec<usize>>,
}

/// Row-major mesh with `ceil(sqrt n)` rows and `ceil(n / rows)` columns; the
/// last row may be short.
pub fn mesh_for(n_devices: usize) -> Mesh {
    assert!(n_devices >= 1, "a mesh needs at least one device");
    let rows = (n_devices as f64).sqrt().ceil() as usize;
    let cols = n_devices.div_ceil(rows);
    let mut edges = Vec::new();
    for d in 0..n_devices {
        let (r, c) = (d / cols, d % cols);
        if c + 1 < cols && d + 1 < n_devices {
            edges.push((d, d + 1));
        }
        if r + 1 < rows && d + cols < n_devices {
            edges.push((d, d + cols));
        }
    }
    let mut neighbors = vec![Vec::new(); n_devices];
    for &(a, b) in &edges {
        neighbors[a].push(b);
        neighbors[b].push(a);
    }
    for n in &mut neighbors {
        n.sort_unstable();
    }
    Mesh { rows, cols, n_devices, edges, neighbors }
}

impl Mesh {
    pub fn neighbors(&self, device: usize) -> &[usize] {
        &self.neighbors[device]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].binary_search(&b).is_ok()
    }

    /// Largest hop distance from `device` to any other device.
    pub fn eccentricity(&self, device: usize) -> usize {
        let graph = UnGraph::<(), ()>::from_edges(self.edges.iter().map(|&(a, b)| (a as u32, b as u32)));
        if self.n_devices == 1 || graph.node_count() == 0 {
            return 0;
        }
        let dist = dijkstra(&graph, NodeIndex::new(device), None, |_| 1usize);
        dist.values().copied().max().unwrap_or(0)
    }

    /// Device with the smallest eccentricity; ties go to the lowest id.
    pub fn center(&self) -> usize {
        (0..self.n_devices).min_by_key(|&d| (self.eccentricity(d), d)).unwrap_or(0)
    }
}

/// A (device, slot) position that can hold one logical qubit.
pub type Node = (usize, u8);

#[derive(Clone, Debug, Serialize)]
pub struct Edge {
    pub a: Node,
    pub b: Node,
    /// Library SWAP realizing a move across this edge.
    pub swap: &'static str,
    pub weight: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InteractionGraph {
    pub radices: Vec<Radix>,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    #[serde(skip)]
    index: HashMap<Node, usize>,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
}

/// Expands every ququart into two connected slots and connects all slot pairs
/// across mesh edges.
pub fn expand(mesh: &Mesh, radices: &[Radix]) -> Result<InteractionGraph> {
    if radices.len() != mesh.n_devices {
        return Err(Error::DimensionMismatch { expected: mesh.n_devices, found: radices.len() });
    }
    let nodes: Vec<Node> = radices
        .iter()
        .enumerate()
        .flat_map(|(d, r)| (0..r.slots()).map(move |s| (d, s)))
        .collect();
    let index: HashMap<Node, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let radix_of = |d: usize| radices[d];
    let edge = |a: Node, b: Node| -> Result<Edge> {
        let placement = find_gate(Family::Swap, &[a, b], radix_of)
            .ok_or_else(|| Error::UnknownConfiguration(format!("SWAP between {a:?} and {b:?}")))?;
        Ok(Edge { a, b, swap: placement.spec.name, weight: -placement.spec.fidelity.ln() })
    };
    let mut edges = Vec::new();
    for (d, r) in radices.iter().enumerate() {
        if *r == Radix::Ququart {
            edges.push(edge((d, 0), (d, 1))?);
        }
    }
    for &(a, b) in &mesh.edges {
        for sa in 0..radices[a].slots() {
            for sb in 0..radices[b].slots() {
                edges.push(edge((a, sa), (b, sb))?);
            }
        }
    }
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for e in &edges {
        let (i, j) = (index[&e.a], index[&e.b]);
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    for a in &mut adjacency {
        a.sort_unstable();
    }
    Ok(InteractionGraph { radices: radices.to_vec(), nodes, edges, index, adjacency })
}

impl InteractionGraph {
    pub fn node_index(&self, node: Node) -> Option<usize> {
        self.index.get(&node).copied()
    }

    pub fn neighbors(&self, node: Node) -> impl Iterator<Item = Node> + '_ {
        self.adjacency[self.index[&node]].iter().map(|&i| self.nodes[i])
    }

    pub fn adjacent(&self, a: Node, b: Node) -> bool {
        match (self.index.get(&a), self.index.get(&b)) {
            (Some(&i), Some(&j)) => self.adjacency[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// All-pairs shortest-path costs over the interaction graph.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    index: HashMap<Node, usize>,
    dist: Vec<Vec<f64>>,
}

pub fn distance_table(graph: &InteractionGraph) -> Result<DistanceTable> {
    let n = graph.nodes.len();
    let mut g = UnGraph::<Node, f64>::with_capacity(n, graph.edges.len());
    for &node in &graph.nodes {
        g.add_node(node);
    }
    for e in &graph.edges {
        let (i, j) = (graph.index[&e.a], graph.index[&e.b]);
        g.add_edge(NodeIndex::new(i), NodeIndex::new(j), e.weight);
    }
    let all = floyd_warshall(&g, |e| *e.weight()).map_err(|_| Error::DisconnectedGraph)?;
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for ((a, b), d) in all {
        dist[a.index()][b.index()] = d;
    }
    if dist.iter().flatten().any(|d| !d.is_finite() || *d >= f64::MAX / 2.0) {
        return Err(Error::DisconnectedGraph);
    }
    Ok(DistanceTable { index: graph.index.clone(), dist })
}

impl DistanceTable {
    pub fn get(&self, a: Node, b: Node) -> f64 {
        self.dist[self.index[&a]][self.index[&b]]
    }
}

/// Edge cost of a SWAP named in the library; shared with routing diagnostics.
pub fn swap_cost(name: &str) -> Result<f64> {
    Ok(-library().get(name)?.fidelity.ln())
}
