//! Placement, routing and lowering of logical circuits onto a mesh of qubit
//! and ququart devices.

mod lowering;
mod placement;
mod routing;
mod weights;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{apply_schedule, asap_schedule, GateKind, LogicalCircuit, LogicalGate, PhysicalCircuit, Schedule};
use crate::error::{Error, Result};
use crate::gates::{OneQubitOp, Radix};
use crate::topology::{distance_table, expand, mesh_for};

pub use placement::{initial_map, Mapping};
pub use routing::route;
pub use weights::{interaction_weights, WeightTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    /// Every device holds one qubit in its lowest two levels.
    QubitOnly,
    /// Qubits stay bare except while a three-qubit gate briefly encodes two of
    /// them into one ququart.
    MixedRadix,
    /// Every device is a ququart holding up to two qubits for the whole circuit.
    FullQuquart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lowering {
    /// Toffoli as eight CX gates plus single-qubit phases.
    Decompose8Cx,
    /// Toffoli as a native three-qubit iToffoli with a CS† correction.
    IToffoli,
    /// Whatever named three-qubit gate matches the operand configuration.
    NativeCcx,
    /// Hadamard-retarget split-control Toffolis so the controls share a ququart.
    RetargetedCcx,
    /// Toffoli as a CCZ between Hadamards on the target.
    CczTransform,
    /// Native CSWAP gates; Toffolis go through CCZ.
    NativeCswap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CswapOrientation {
    /// Encode the two CSWAP targets in the same ququart when possible.
    TargetsTogether,
    Default,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Strategy {
    pub encoding: Encoding,
    pub lowering: Lowering,
    pub cswap_orientation: CswapOrientation,
}

const NAMED: &[(&str, Encoding, Lowering, CswapOrientation)] = &[
    ("qubit-only-8cx", Encoding::QubitOnly, Lowering::Decompose8Cx, CswapOrientation::Default),
    ("qubit-only-itoffoli", Encoding::QubitOnly, Lowering::IToffoli, CswapOrientation::Default),
    ("mixed-radix-ccx", Encoding::MixedRadix, Lowering::NativeCcx, CswapOrientation::Default),
    ("mixed-radix-retarget", Encoding::MixedRadix, Lowering::RetargetedCcx, CswapOrientation::Default),
    ("mixed-radix-ccz", Encoding::MixedRadix, Lowering::CczTransform, CswapOrientation::Default),
    ("mixed-radix-cswap", Encoding::MixedRadix, Lowering::NativeCswap, CswapOrientation::TargetsTogether),
    ("full-ququart-ccx", Encoding::FullQuquart, Lowering::NativeCcx, CswapOrientation::Default),
    ("full-ququart-retarget", Encoding::FullQuquart, Lowering::RetargetedCcx, CswapOrientation::Default),
    ("full-ququart-ccz", Encoding::FullQuquart, Lowering::CczTransform, CswapOrientation::Default),
    ("full-ququart-cswap", Encoding::FullQuquart, Lowering::NativeCswap, CswapOrientation::TargetsTogether),
];

impl Strategy {
    pub fn new(encoding: Encoding, lowering: Lowering, cswap_orientation: CswapOrientation) -> Result<Self> {
        let qubit_only_lowering = matches!(lowering, Lowering::Decompose8Cx | Lowering::IToffoli);
        if qubit_only_lowering != (encoding == Encoding::QubitOnly) {
            return Err(Error::InvalidStrategy(format!("{lowering:?} cannot be used with {encoding:?}")));
        }
        Ok(Strategy { encoding, lowering, cswap_orientation })
    }

    /// Every strategy with a command-line name.
    pub fn all() -> Vec<Strategy> {
        NAMED.iter().map(|&(_, e, l, o)| Strategy { encoding: e, lowering: l, cswap_orientation: o }).collect()
    }

    pub fn name(&self) -> Option<&'static str> {
        NAMED
            .iter()
            .find(|&&(_, e, l, o)| (e, l, o) == (self.encoding, self.lowering, self.cswap_orientation))
            .map(|&(n, ..)| n)
    }

    /// Radix of every device outside encode windows.
    pub fn base_radix(&self) -> Radix {
        match self.encoding {
            Encoding::FullQuquart => Radix::Ququart,
            _ => Radix::Qubit,
        }
    }

    pub fn devices_for(&self, n_qubits: usize) -> usize {
        match self.encoding {
            Encoding::FullQuquart => n_qubits.div_ceil(2).max(1),
            _ => n_qubits.max(1),
        }
    }

    fn native_cswap(&self) -> bool {
        self.lowering == Lowering::NativeCswap && self.encoding != Encoding::QubitOnly
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NAMED
            .iter()
            .find(|&&(n, ..)| n == s)
            .map(|&(_, e, l, o)| Strategy { encoding: e, lowering: l, cswap_orientation: o })
            .ok_or_else(|| {
                let names: Vec<&str> = NAMED.iter().map(|n| n.0).collect();
                Error::InvalidStrategy(format!("unknown strategy `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(n) => f.write_str(n),
            None => write!(f, "{:?}/{:?}/{:?}", self.encoding, self.lowering, self.cswap_orientation),
        }
    }
}

/// Rewrites gates the strategy does not lower directly into ones it does.
pub fn rewrite(circuit: &LogicalCircuit, strategy: Strategy) -> LogicalCircuit {
    let itoffoli_native = strategy.lowering == Lowering::IToffoli;
    let h = |q| LogicalGate::one(OneQubitOp::H, q);
    let mut out = LogicalCircuit::new(circuit.n_qubits);
    for g in &circuit.gates {
        let q = &g.qubits;
        let gates = match g.kind {
            GateKind::IToffoli if !itoffoli_native => vec![
                LogicalGate::ccx(q[0], q[1], q[2]),
                LogicalGate::new(GateKind::Cz, &[q[0], q[1]]),
                LogicalGate::new(GateKind::CSdg, &[q[0], q[1]]),
            ],
            GateKind::Cswap if !strategy.native_cswap() => vec![
                LogicalGate::cx(q[2], q[1]),
                LogicalGate::ccx(q[0], q[1], q[2]),
                LogicalGate::cx(q[2], q[1]),
            ],
            GateKind::Ccz if itoffoli_native => vec![h(q[2]), LogicalGate::ccx(q[0], q[1], q[2]), h(q[2])],
            _ => vec![g.clone()],
        };
        out.gates.extend(gates);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompileReport {
    pub strategy: String,
    pub n_qubits: usize,
    pub n_devices: usize,
    pub swap_count: usize,
    pub multi_device_gates: usize,
    pub duration_ns: f64,
    pub histogram: BTreeMap<String, usize>,
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub circuit: PhysicalCircuit,
    pub initial: Mapping,
    pub final_mapping: Mapping,
    pub schedule: Schedule,
}

impl Compiled {
    pub fn report(&self, strategy: Strategy, n_qubits: usize) -> CompileReport {
        CompileReport {
            strategy: strategy.to_string(),
            n_qubits,
            n_devices: self.circuit.n_devices,
            swap_count: self.circuit.swap_count(),
            multi_device_gates: self.circuit.multi_device_count(),
            duration_ns: self.schedule.duration_ns,
            histogram: self.circuit.histogram(),
        }
    }
}

/// Full pipeline on the strategy's default device count.
pub fn compile(circuit: &LogicalCircuit, strategy: Strategy) -> Result<Compiled> {
    compile_on(circuit, strategy.devices_for(circuit.n_qubits), strategy)
}

/// Weights, initial placement, routing with lowering, then ASAP scheduling.
pub fn compile_on(circuit: &LogicalCircuit, n_devices: usize, strategy: Strategy) -> Result<Compiled> {
    circuit.validate()?;
    let mesh = mesh_for(n_devices.max(1));
    let radices = vec![strategy.base_radix(); mesh.n_devices];
    let graph = expand(&mesh, &radices)?;
    if graph.nodes.len() < circuit.n_qubits {
        return Err(Error::InsufficientCapacity { needed: circuit.n_qubits, available: graph.nodes.len() });
    }
    let dist = distance_table(&graph)?;
    let rewritten = rewrite(circuit, strategy);
    let weights = interaction_weights(&rewritten.gates, rewritten.n_qubits);
    let initial = initial_map(&rewritten, &graph, &dist, &weights, strategy, &mesh)?;
    let (mut physical, final_mapping) = route(&rewritten, &initial, &mesh, &graph, &dist, strategy)?;
    let schedule = asap_schedule(&physical);
    apply_schedule(&mut physical, &schedule);
    Ok(Compiled { circuit: physical, initial, final_mapping, schedule })
}
