use std::cmp::Ordering;

use super::placement::Mapping;
use super::weights::{interaction_weights, WeightTable};
use super::{CswapOrientation, Encoding, Lowering, Strategy};
use crate::circuit::{GateKind, LogicalCircuit, LogicalGate, PhysicalCircuit, PhysicalInstruction};
use crate::error::{Error, Result};
use crate::gates::{find_gate, library, Family, OneQubitOp, Radix};
use crate::topology::{DistanceTable, InteractionGraph, Mesh, Node};

const TIE: f64 = 1e-12;

/// Emission state shared by routing and lowering.
pub(super) struct Builder<'a> {
    pub strategy: Strategy,
    pub mesh: &'a Mesh,
    pub graph: &'a InteractionGraph,
    pub map: Mapping,
    pub radix: Vec<Radix>,
    pub sim_dims: Vec<usize>,
    pub out: Vec<PhysicalInstruction>,
}

impl<'a> Builder<'a> {
    fn new(strategy: Strategy, mesh: &'a Mesh, graph: &'a InteractionGraph, map: Mapping) -> Self {
        let radix = vec![strategy.base_radix(); mesh.n_devices];
        let sim_dims = radix.iter().map(|r| r.dim()).collect();
        Builder { strategy, mesh, graph, map, radix, sim_dims, out: Vec::new() }
    }

    /// Appends a library gate; occupancy is read from the current mapping, so
    /// callers update the mapping first.
    pub fn emit(&mut self, name: &str, devices: Vec<usize>, op: Option<OneQubitOp>) -> Result<()> {
        let spec = library().get(name)?;
        let connected = devices.len() < 2
            || devices.iter().all(|&d| devices.iter().any(|&e| e != d && self.mesh.adjacent(d, e)));
        if !connected {
            return Err(Error::InvalidCircuit(format!("{name} on non-adjacent devices {devices:?}")));
        }
        for (&d, r) in devices.iter().zip(&spec.operand_radices) {
            self.sim_dims[d] = self.sim_dims[d].max(r.dim());
        }
        let occupancy = devices.iter().map(|&d| self.map.count(d)).collect();
        self.out.push(PhysicalInstruction::new(name, devices, op, occupancy)?);
        Ok(())
    }

    /// Emits the library gate of `family` matching where `qubits` live now.
    pub fn apply(&mut self, family: Family, qubits: &[usize], op: Option<OneQubitOp>) -> Result<()> {
        let operands: Vec<Node> = qubits.iter().map(|&q| self.map.location(q)).collect();
        let radix = &self.radix;
        let placement = find_gate(family, &operands, |d| radix[d])
            .ok_or_else(|| Error::UnknownConfiguration(format!("{family:?} on {operands:?}")))?;
        self.emit(placement.spec.name, placement.devices, op)
    }

    pub fn one(&mut self, q: usize, op: OneQubitOp) -> Result<()> {
        self.apply(Family::OneQubit, &[q], Some(op))
    }

    /// Single-qubit gates that may run together; identical gates on both
    /// slots of one ququart merge into a single two-slot gate.
    pub fn layer(&mut self, ops: &[(usize, OneQubitOp)]) -> Result<()> {
        let mut done = vec![false; ops.len()];
        for i in 0..ops.len() {
            if done[i] {
                continue;
            }
            let (q, op) = ops[i];
            let (dev, _) = self.map.location(q);
            let mate = (i + 1..ops.len())
                .find(|&j| !done[j] && ops[j].1 == op && self.map.location(ops[j].0).0 == dev);
            match mate {
                Some(j) if self.radix[dev] == Radix::Ququart => {
                    done[j] = true;
                    self.apply(Family::OneQubitPair, &[q, ops[j].0], Some(op))?;
                }
                _ => self.one(q, op)?,
            }
            done[i] = true;
        }
        Ok(())
    }

    /// Exchanges the contents of two adjacent nodes.
    pub fn swap_nodes(&mut self, a: Node, b: Node) -> Result<()> {
        let radix = &self.radix;
        let placement = find_gate(Family::Swap, &[a, b], |d| radix[d])
            .ok_or_else(|| Error::UnknownConfiguration(format!("SWAP on {a:?}, {b:?}")))?;
        self.map.swap(a, b);
        self.emit(placement.spec.name, placement.devices, None)
    }

    pub fn adjacent_devices(&self, p: usize, q: usize) -> bool {
        self.mesh.adjacent(self.map.location(p).0, self.map.location(q).0)
    }

    /// For bare-qubit layouts: the operand adjacent to both others, preferring
    /// earlier operands.
    pub fn line_center(&self, qubits: &[usize]) -> Option<usize> {
        qubits.iter().copied().find(|&c| qubits.iter().all(|&o| o == c || self.adjacent_devices(c, o)))
    }

    fn pairs(&self, gate: &LogicalGate) -> Vec<(usize, usize, f64)> {
        let q = &gate.qubits;
        match (gate.kind, self.strategy.encoding) {
            (GateKind::IToffoli, Encoding::QubitOnly) => vec![(q[2], q[0], 1.0), (q[2], q[1], 1.0)],
            (GateKind::Cswap, Encoding::FullQuquart)
                if self.strategy.cswap_orientation == CswapOrientation::TargetsTogether =>
            {
                vec![(q[0], q[1], 1.0), (q[0], q[2], 1.0), (q[1], q[2], 2.0)]
            }
            _ => {
                let mut out = Vec::new();
                for (i, &a) in q.iter().enumerate() {
                    for &b in &q[i + 1..] {
                        out.push((a, b, 1.0));
                    }
                }
                out
            }
        }
    }

    /// Whether the operands sit where the strategy can lower the gate.
    fn ready(&self, gate: &LogicalGate) -> bool {
        let q = &gate.qubits;
        let loc = |i: usize| self.map.location(q[i]);
        match q.len() {
            0 | 1 => true,
            2 => self.graph.adjacent(loc(0), loc(1)),
            _ => match self.strategy.encoding {
                Encoding::FullQuquart => {
                    let pairwise = (0..3).all(|i| (i + 1..3).all(|j| self.graph.adjacent(loc(i), loc(j))));
                    let together = gate.kind != GateKind::Cswap
                        || self.strategy.lowering != Lowering::NativeCswap
                        || self.strategy.cswap_orientation != CswapOrientation::TargetsTogether
                        || loc(1).0 == loc(2).0;
                    pairwise && together
                }
                _ if gate.kind == GateKind::IToffoli => {
                    self.adjacent_devices(q[2], q[0]) && self.adjacent_devices(q[2], q[1])
                }
                _ => self.line_center(q).is_some(),
            },
        }
    }

    /// Inserts SWAPs until `gate` is ready. Each SWAP strictly lowers the
    /// summed operand distance; among those, the one least disrupting the
    /// weighted distances of the moved qubits wins.
    fn bring_together(&mut self, index: usize, gate: &LogicalGate, weights: &WeightTable, dist: &DistanceTable) -> Result<()> {
        let pairs = self.pairs(gate);
        let potential = |map: &Mapping| pairs.iter().map(|&(a, b, f)| f * dist.get(map.location(a), map.location(b))).sum::<f64>();
        let mut operands = gate.qubits.clone();
        operands.sort_unstable();
        while !self.ready(gate) {
            let before = potential(&self.map);
            let mut best: Option<(f64, usize, Node, Node)> = None;
            for &q in &operands {
                let from = self.map.location(q);
                for to in self.graph.neighbors(from) {
                    let mut trial = self.map.clone();
                    trial.swap(from, to);
                    if potential(&trial) >= before - TIE {
                        continue;
                    }
                    let cost = disruption(&self.map, &trial, weights, dist, q, self.map.occupant(to));
                    let better = match best {
                        None => true,
                        Some((c, bq, _, bto)) => match cmp_cost(cost, c) {
                            Ordering::Less => true,
                            Ordering::Equal => (q, to) < (bq, bto),
                            Ordering::Greater => false,
                        },
                    };
                    if better {
                        best = Some((cost, q, from, to));
                    }
                }
            }
            let (_, _, from, to) = best.ok_or(Error::NoProgress { gate_index: index })?;
            self.swap_nodes(from, to)?;
        }
        Ok(())
    }
}

fn cmp_cost(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= TIE {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Change in weighted distance between the swapped qubits and every other qubit.
fn disruption(before: &Mapping, after: &Mapping, w: &WeightTable, dist: &DistanceTable, q: usize, r: Option<usize>) -> f64 {
    let moved: Vec<usize> = std::iter::once(q).chain(r).collect();
    let mut total = 0.0;
    for &x in &moved {
        for j in 0..w.n_qubits() {
            if moved.contains(&j) || w.get(x, j) == 0.0 {
                continue;
            }
            let old = dist.get(before.location(x), before.location(j));
            let new = dist.get(after.location(x), after.location(j));
            total += w.get(x, j) * (new - old);
        }
    }
    total
}

/// Routes and lowers every gate, returning the physical circuit and the final
/// mapping.
pub fn route(
    circuit: &LogicalCircuit,
    initial: &Mapping,
    mesh: &Mesh,
    graph: &InteractionGraph,
    dist: &DistanceTable,
    strategy: Strategy,
) -> Result<(PhysicalCircuit, Mapping)> {
    let mut b = Builder::new(strategy, mesh, graph, initial.clone());
    for (i, gate) in circuit.gates.iter().enumerate() {
        if gate.qubits.len() >= 2 {
            let weights = interaction_weights(&circuit.gates[i..], circuit.n_qubits);
            b.bring_together(i, gate, &weights, dist)?;
        }
        b.lower(gate)?;
    }
    let physical = PhysicalCircuit {
        n_devices: mesh.n_devices,
        radices: vec![strategy.base_radix(); mesh.n_devices],
        sim_dims: b.sim_dims,
        initial_occupancy: (0..mesh.n_devices).map(|d| initial.count(d)).collect(),
        initial_layout: initial.layout(),
        final_layout: b.map.layout(),
        instructions: b.out,
    };
    Ok((physical, b.map))
}
