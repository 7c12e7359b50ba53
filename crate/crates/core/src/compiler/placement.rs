use std::cmp::Ordering;

use serde::Serialize;

use super::weights::WeightTable;
use super::{Encoding, Strategy};
use crate::circuit::{GateKind, LogicalCircuit};
use crate::error::{Error, Result};
use crate::topology::{DistanceTable, InteractionGraph, Mesh, Node};

/// Logical qubit to `(device, slot)` assignment and its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mapping {
    phi: Vec<Option<Node>>,
    occupant: Vec<[Option<usize>; 2]>,
}

impl Mapping {
    pub fn new(n_qubits: usize, n_devices: usize) -> Self {
        Mapping { phi: vec![None; n_qubits], occupant: vec![[None; 2]; n_devices] }
    }

    pub fn place(&mut self, q: usize, node: Node) {
        debug_assert!(self.occupant(node).is_none() && self.phi[q].is_none());
        self.phi[q] = Some(node);
        self.occupant[node.0][node.1 as usize] = Some(q);
    }

    pub fn location(&self, q: usize) -> Node {
        self.phi[q].expect("every logical qubit is placed")
    }

    pub fn is_placed(&self, q: usize) -> bool {
        self.phi[q].is_some()
    }

    pub fn occupant(&self, node: Node) -> Option<usize> {
        self.occupant[node.0][node.1 as usize]
    }

    /// Exchanges the contents of two nodes; either may be empty.
    pub fn swap(&mut self, a: Node, b: Node) {
        let (qa, qb) = (self.occupant(a), self.occupant(b));
        self.occupant[a.0][a.1 as usize] = qb;
        self.occupant[b.0][b.1 as usize] = qa;
        if let Some(q) = qa {
            self.phi[q] = Some(b);
        }
        if let Some(q) = qb {
            self.phi[q] = Some(a);
        }
    }

    /// Moves qubit `q` to a free node.
    pub fn relocate(&mut self, q: usize, to: Node) {
        let from = self.location(q);
        debug_assert!(self.occupant(to).is_none());
        self.swap(from, to);
    }

    pub fn count(&self, device: usize) -> u8 {
        self.occupant[device].iter().filter(|o| o.is_some()).count() as u8
    }

    pub fn layout(&self) -> Vec<Node> {
        self.phi.iter().map(|p| p.expect("every logical qubit is placed")).collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.phi.len()
    }

    pub fn n_devices(&self) -> usize {
        self.occupant.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Control,
    Target,
}

fn roles(circuit: &LogicalCircuit) -> Vec<Role> {
    let mut score = vec![0i64; circuit.n_qubits];
    for g in &circuit.gates {
        let q = &g.qubits;
        let (controls, targets): (&[usize], &[usize]) = match g.kind {
            GateKind::Cx => (&q[..1], &q[1..]),
            GateKind::Ccx | GateKind::IToffoli => (&q[..2], &q[2..]),
            GateKind::Cswap => (&q[..1], &q[1..]),
            GateKind::Cz | GateKind::CSdg | GateKind::Ccz => (&q[..], &[]),
            GateKind::Swap | GateKind::One(_) => (&[], &[]),
        };
        controls.iter().for_each(|&c| score[c] += 1);
        targets.iter().for_each(|&t| score[t] -= 1);
    }
    score.into_iter().map(|s| if s < 0 { Role::Target } else { Role::Control }).collect()
}

const TIE: f64 = 1e-12;

fn cmp_cost(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= TIE {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Greedy placement: the heaviest qubit goes to slot 0 of the most central
/// device, then each next qubit (largest weight to those already placed)
/// goes to the free node minimizing its weighted distance to them.
pub fn initial_map(
    circuit: &LogicalCircuit,
    graph: &InteractionGraph,
    dist: &DistanceTable,
    weights: &WeightTable,
    strategy: Strategy,
    mesh: &Mesh,
) -> Result<Mapping> {
    let n = circuit.n_qubits;
    if graph.nodes.len() < n {
        return Err(Error::InsufficientCapacity { needed: n, available: graph.nodes.len() });
    }
    let mut mapping = Mapping::new(n, mesh.n_devices);
    if n == 0 {
        return Ok(mapping);
    }
    let roles = roles(circuit);
    let seed = (0..n)
        .max_by(|&a, &b| cmp_cost(weights.total(a), weights.total(b)).then(b.cmp(&a)))
        .expect("n > 0");
    mapping.place(seed, (mesh.center(), 0));
    let mut placed = vec![seed];

    while placed.len() < n {
        let attraction = |i: usize| placed.iter().map(|&j| weights.get(i, j)).sum::<f64>();
        let next = (0..n)
            .filter(|&i| !mapping.is_placed(i))
            .max_by(|&a, &b| cmp_cost(attraction(a), attraction(b)).then(b.cmp(&a)))
            .expect("some qubit is unplaced");

        let free: Vec<Node> = graph.nodes.iter().copied().filter(|&nd| mapping.occupant(nd).is_none()).collect();
        let frontier: Vec<Node> = free
            .iter()
            .copied()
            .filter(|&nd| graph.neighbors(nd).any(|m| mapping.occupant(m).is_some()))
            .collect();
        let candidates = if frontier.is_empty() { free } else { frontier };
        let cost = |nd: Node| placed.iter().map(|&j| weights.get(next, j) * dist.get(nd, mapping.location(j))).sum::<f64>();
        let packing = |nd: Node| -> u8 {
            if strategy.encoding != Encoding::FullQuquart {
                return 0;
            }
            match mapping.occupant((nd.0, 1 - nd.1)) {
                Some(mate) if roles[mate] == roles[next] => 0,
                _ => 1,
            }
        };
        let best = candidates
            .into_iter()
            .min_by(|&a, &b| cmp_cost(cost(a), cost(b)).then(packing(a).cmp(&packing(b))).then(a.cmp(&b)))
            .expect("capacity checked");
        mapping.place(next, best);
        placed.push(next);
    }
    Ok(mapping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::LogicalGate;
    use crate::compiler::interaction_weights;
    use crate::gates::Radix;
    use crate::topology::{distance_table, expand, mesh_for};

    fn place(circuit: &LogicalCircuit, n_devices: usize, strategy: &str) -> Mapping {
        let s: Strategy = strategy.parse().unwrap();
        let mesh = mesh_for(n_devices);
        let graph = expand(&mesh, &vec![s.base_radix(); n_devices]).unwrap();
        let dist = distance_table(&graph).unwrap();
        let w = interaction_weights(&circuit.gates, circuit.n_qubits);
        initial_map(circuit, &graph, &dist, &w, s, &mesh).unwrap()
    }

    #[test]
    fn single_cx_lands_on_adjacent_devices() {
        let mut c = LogicalCircuit::new(2);
        c.push(LogicalGate::cx(0, 1)).unwrap();
        let m = place(&c, 4, "qubit-only-8cx");
        let mesh = mesh_for(4);
        assert!(mesh.adjacent(m.location(0).0, m.location(1).0));
    }

    #[test]
    fn lone_qubit_sits_at_center() {
        let c = LogicalCircuit::new(1);
        let m = place(&c, 9, "qubit-only-8cx");
        assert_eq!(m.location(0), (4, 0));
    }

    #[test]
    fn seed_tie_goes_to_lowest_id() {
        let mut c = LogicalCircuit::new(3);
        c.push(LogicalGate::cx(1, 2)).unwrap();
        c.push(LogicalGate::cx(0, 1)).unwrap();
        // W(1) is the strict maximum
        let m = place(&c, 4, "qubit-only-8cx");
        assert_eq!(m.location(1), (0, 0));
        let c = LogicalCircuit::new(3);
        let m = place(&c, 4, "qubit-only-8cx");
        assert_eq!(m.location(0), (0, 0));
    }

    #[test]
    fn full_ququart_packs_pairs() {
        let mut c = LogicalCircuit::new(2);
        c.push(LogicalGate::cx(0, 1)).unwrap();
        let m = place(&c, 1, "full-ququart-ccz");
        assert_eq!(m.location(0).0, m.location(1).0);
        assert_eq!(m.count(0), 2);
        let _ = Radix::Ququart;
    }

    #[test]
    fn capacity_is_checked() {
        let c = LogicalCircuit::new(5);
        let s: Strategy = "qubit-only-8cx".parse().unwrap();
        let mesh = mesh_for(4);
        let graph = expand(&mesh, &[Radix::Qubit; 4]).unwrap();
        let dist = distance_table(&graph).unwrap();
        let w = interaction_weights(&[], 5);
        assert!(matches!(
            initial_map(&c, &graph, &dist, &w, s, &mesh),
            Err(Error::InsufficientCapacity { needed: 5, available: 4 })
        ));
    }
}
