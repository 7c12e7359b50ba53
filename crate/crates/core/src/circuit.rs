//! Logical and physical circuit representations plus the ASAP scheduler.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{library, OneQubitOp, Radix, SlotAssignment};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    One(OneQubitOp),
    Cx,
    Cz,
    CSdg,
    Swap,
    Ccx,
    Ccz,
    Cswap,
    IToffoli,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::One(_) => 1,
            GateKind::Cx | GateKind::Cz | GateKind::CSdg | GateKind::Swap => 2,
            GateKind::Ccx | GateKind::Ccz | GateKind::Cswap | GateKind::IToffoli => 3,
        }
    }
}

/// A device-independent gate. Operands list controls before targets; for
/// CSWAP the control comes first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogicalGate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl LogicalGate {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Self {
        LogicalGate { kind, qubits: qubits.to_vec() }
    }

    pub fn one(op: OneQubitOp, q: usize) -> Self {
        LogicalGate::new(GateKind::One(op), &[q])
    }

    pub fn cx(c: usize, t: usize) -> Self {
        LogicalGate::new(GateKind::Cx, &[c, t])
    }

    pub fn ccx(c1: usize, c2: usize, t: usize) -> Self {
        LogicalGate::new(GateKind::Ccx, &[c1, c2, t])
    }

    pub fn cswap(c: usize, t1: usize, t2: usize) -> Self {
        LogicalGate::new(GateKind::Cswap, &[c, t1, t2])
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LogicalCircuit {
    pub n_qubits: usize,
    pub gates: Vec<LogicalGate>,
}

impl LogicalCircuit {
    pub fn new(n_qubits: usize) -> Self {
        LogicalCircuit { n_qubits, gates: Vec::new() }
    }

    /// Appends a gate after checking arity, range and distinctness.
    pub fn push(&mut self, gate: LogicalGate) -> Result<()> {
        self.check(&gate)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.gates.iter().try_for_each(|g| self.check(g))
    }

    fn check(&self, gate: &LogicalGate) -> Result<()> {
        if gate.qubits.len() != gate.kind.arity() {
            return Err(Error::InvalidCircuit(format!(
                "{:?} takes {} operands, got {}",
                gate.kind,
                gate.kind.arity(),
                gate.qubits.len()
            )));
        }
        for (i, &q) in gate.qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(Error::InvalidCircuit(format!(
                    "qubit {q} out of range for {} qubits",
                    self.n_qubits
                )));
            }
            if gate.qubits[..i].contains(&q) {
                return Err(Error::InvalidCircuit(format!("qubit {q} repeated in one gate")));
            }
        }
        Ok(())
    }

    /// ASAP moment (0-based) of every gate.
    pub fn moments(&self) -> Vec<usize> {
        asap_moments(&self.gates, self.n_qubits)
    }

    pub fn count(&self, pred: impl Fn(GateKind) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g.kind)).count()
    }

    /// Text form: a `qubits N` header followed by one gate per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n_qubits);
        for g in &self.gates {
            out.push_str(&kind_token(g.kind));
            for q in &g.qubits {
                let _ = write!(out, " {q}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut circuit: Option<LogicalCircuit> = None;
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            let mut parts = line.split_whitespace();
            let head = parts.next().expect("non-empty line");
            let args: Vec<&str> = parts.collect();
            if head == "qubits" {
                if circuit.is_some() {
                    return Err(parse_err("duplicate `qubits` header".into()));
                }
                let n = match args.as_slice() {
                    [n] => n.parse().map_err(|_| parse_err(format!("bad qubit count `{n}`")))?,
                    _ => return Err(parse_err("expected `qubits N`".into())),
                };
                circuit = Some(LogicalCircuit::new(n));
                continue;
            }
            let c = circuit.as_mut().ok_or_else(|| parse_err("missing `qubits N` header".into()))?;
            let kind = parse_kind(head).map_err(parse_err)?;
            let qubits = args
                .iter()
                .map(|a| a.parse::<usize>().map_err(|_| parse_err(format!("bad qubit index `{a}`"))))
                .collect::<Result<Vec<_>>>()?;
            c.push(LogicalGate { kind, qubits }).map_err(|e| parse_err(e.to_string()))?;
        }
        circuit.ok_or(Error::Parse { line: 0, message: "empty circuit file".into() })
    }
}

impl fmt::Display for LogicalCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for LogicalCircuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LogicalCircuit::parse_text(s)
    }
}

/// ASAP moment (0-based) of every gate in `gates`.
pub fn asap_moments(gates: &[LogicalGate], n_qubits: usize) -> Vec<usize> {
    let mut ready = vec![0usize; n_qubits];
    gates
        .iter()
        .map(|g| {
            let m = g.qubits.iter().map(|&q| ready[q]).max().unwrap_or(0);
            for &q in &g.qubits {
                ready[q] = m + 1;
            }
            m
        })
        .collect()
}

fn kind_token(kind: GateKind) -> String {
    match kind {
        GateKind::One(op) => match op {
            OneQubitOp::X => "x".into(),
            OneQubitOp::Y => "y".into(),
            OneQubitOp::Z => "z".into(),
            OneQubitOp::H => "h".into(),
            OneQubitOp::S => "s".into(),
            OneQubitOp::Sdg => "sdg".into(),
            OneQubitOp::T => "t".into(),
            OneQubitOp::Tdg => "tdg".into(),
            OneQubitOp::Rz(t) => format!("rz({t:?})"),
            OneQubitOp::U3(a, b, c) => format!("u3({a:?},{b:?},{c:?})"),
        },
        GateKind::Cx => "cx".into(),
        GateKind::Cz => "cz".into(),
        GateKind::CSdg => "csdg".into(),
        GateKind::Swap => "swap".into(),
        GateKind::Ccx => "ccx".into(),
        GateKind::Ccz => "ccz".into(),
        GateKind::Cswap => "cswap".into(),
        GateKind::IToffoli => "itoffoli".into(),
    }
}

fn parse_kind(token: &str) -> std::result::Result<GateKind, String> {
    let lower = token.to_ascii_lowercase();
    let (name, params) = match lower.split_once('(') {
        Some((name, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| format!("unclosed `(` in `{token}`"))?;
            let values = inner
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| format!("bad parameter `{v}`")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            (name.to_string(), values)
        }
        None => (lower, Vec::new()),
    };
    let op = |op| Ok(GateKind::One(op));
    match (name.as_str(), params.as_slice()) {
        ("x", []) => op(OneQubitOp::X),
        ("y", []) => op(OneQubitOp::Y),
        ("z", []) => op(OneQubitOp::Z),
        ("h", []) => op(OneQubitOp::H),
        ("s", []) => op(OneQubitOp::S),
        ("sdg", []) => op(OneQubitOp::Sdg),
        ("t", []) => op(OneQubitOp::T),
        ("tdg", []) => op(OneQubitOp::Tdg),
        ("rz", [t]) => op(OneQubitOp::Rz(*t)),
        ("u3", [a, b, c]) => op(OneQubitOp::U3(*a, *b, *c)),
        ("cx" | "cnot", []) => Ok(GateKind::Cx),
        ("cz", []) => Ok(GateKind::Cz),
        ("csdg", []) => Ok(GateKind::CSdg),
        ("swap", []) => Ok(GateKind::Swap),
        ("ccx" | "toffoli", []) => Ok(GateKind::Ccx),
        ("ccz", []) => Ok(GateKind::Ccz),
        ("cswap" | "fredkin", []) => Ok(GateKind::Cswap),
        ("itoffoli", []) => Ok(GateKind::IToffoli),
        _ => Err(format!("unknown gate `{token}`")),
    }
}

/// One scheduled physical gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalInstruction {
    pub gate: String,
    pub devices: Vec<usize>,
    pub slots: SlotAssignment,
    pub start_ns: f64,
    pub duration_ns: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<OneQubitOp>,
    /// Logical qubits held by each operand device once the gate finishes.
    pub occupancy: Vec<u8>,
}

impl PhysicalInstruction {
    /// Builds an unscheduled instruction for a library gate.
    pub fn new(gate: &str, devices: Vec<usize>, op: Option<OneQubitOp>, occupancy: Vec<u8>) -> Result<Self> {
        let spec = library().get(gate)?;
        if devices.len() != spec.operand_radices.len() || occupancy.len() != devices.len() {
            return Err(Error::InvalidCircuit(format!(
                "{gate} spans {} devices, got {}",
                spec.operand_radices.len(),
                devices.len()
            )));
        }
        Ok(PhysicalInstruction {
            gate: spec.name.to_string(),
            devices,
            slots: spec.assignment.clone(),
            start_ns: 0.0,
            duration_ns: spec.duration_ns,
            op,
            occupancy,
        })
    }

    pub fn end_ns(&self) -> f64 {
        self.start_ns + self.duration_ns
    }
}

/// A placed and routed circuit over radix-annotated devices.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhysicalCircuit {
    pub n_devices: usize,
    /// Radix of each device outside encode windows.
    pub radices: Vec<Radix>,
    /// Largest level count each device ever needs; sizes the simulated register.
    pub sim_dims: Vec<usize>,
    pub initial_occupancy: Vec<u8>,
    /// `(device, slot)` of every logical qubit before and after the circuit.
    pub initial_layout: Vec<(usize, u8)>,
    pub final_layout: Vec<(usize, u8)>,
    pub instructions: Vec<PhysicalInstruction>,
}

impl PhysicalCircuit {
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for inst in &self.instructions {
            out.push_str(&serde_json::to_string(inst)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_jsonl(text: &str) -> Result<Vec<PhysicalInstruction>> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| Ok(serde_json::from_str(l)?))
            .collect()
    }

    pub fn duration_ns(&self) -> f64 {
        self.instructions.iter().map(|i| i.end_ns()).fold(0.0, f64::max)
    }

    pub fn swap_count(&self) -> usize {
        self.instructions.iter().filter(|i| i.gate.starts_with("SWAP")).count()
    }

    /// Instructions spanning two or more devices.
    pub fn multi_device_count(&self) -> usize {
        self.instructions.iter().filter(|i| i.devices.len() > 1).count()
    }

    pub fn histogram(&self) -> std::collections::BTreeMap<String, usize> {
        let mut h = std::collections::BTreeMap::new();
        for inst in &self.instructions {
            *h.entry(inst.gate.clone()).or_insert(0) += 1;
        }
        h
    }
}

/// Occupancy level used for coherence accounting: 3 for an encoded pair, 1 otherwise.
pub fn level_for(count: u8) -> u8 {
    if count >= 2 {
        3
    } else {
        1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BusyInterval {
    pub start: f64,
    pub end: f64,
    pub level: u8,
    /// Level in force once the instruction finishes.
    pub level_after: u8,
    pub instruction: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdleGap {
    pub start: f64,
    pub length: f64,
    pub level: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviceTimeline {
    pub initial_level: u8,
    pub busy: Vec<BusyInterval>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub duration_ns: f64,
    pub starts: Vec<f64>,
    pub devices: Vec<DeviceTimeline>,
}

/// As-soon-as-possible schedule; instructions sharing a device keep their order.
pub fn asap_schedule(circuit: &PhysicalCircuit) -> Schedule {
    let n = circuit.n_devices;
    let mut ready = vec![0.0f64; n];
    let mut count: Vec<u8> = circuit.initial_occupancy.clone();
    count.resize(n, 0);
    let mut devices: Vec<DeviceTimeline> = count
        .iter()
        .map(|&c| DeviceTimeline { initial_level: level_for(c), busy: Vec::new() })
        .collect();
    let mut starts = Vec::with_capacity(circuit.instructions.len());
    for (idx, inst) in circuit.instructions.iter().enumerate() {
        let start = inst.devices.iter().map(|&d| ready[d]).fold(0.0, f64::max);
        let end = start + inst.duration_ns;
        for (&d, &after) in inst.devices.iter().zip(&inst.occupancy) {
            let level = level_for(count[d].max(after));
            devices[d].busy.push(BusyInterval {
                start,
                end,
                level,
                level_after: level_for(after),
                instruction: idx,
            });
            count[d] = after;
            ready[d] = end;
        }
        starts.push(start);
    }
    let duration_ns = ready.iter().copied().fold(0.0, f64::max);
    Schedule { duration_ns, starts, devices }
}

/// Writes the scheduled start times back into the instructions.
pub fn apply_schedule(circuit: &mut PhysicalCircuit, schedule: &Schedule) {
    for (inst, &start) in circuit.instructions.iter_mut().zip(&schedule.starts) {
        inst.start_ns = start;
    }
}

impl Schedule {
    /// Positive-length idle gaps of `device`, including the trailing one.
    pub fn idle_gaps(&self, device: usize) -> Vec<IdleGap> {
        let timeline = &self.devices[device];
        let mut gaps = Vec::new();
        let mut cursor = 0.0;
        let mut level = timeline.initial_level;
        let mut push = |start: f64, end: f64, level: u8| {
            if end > start {
                gaps.push(IdleGap { start, length: end - start, level });
            }
        };
        for b in &timeline.busy {
            push(cursor, b.start, level);
            cursor = b.end;
            level = b.level_after;
        }
        push(cursor, self.duration_ns, level);
        gaps
    }

    /// `(t_1, t_3)`: wall time spent at each occupancy level.
    pub fn level_occupancy_times(&self, device: usize) -> (f64, f64) {
        let mut t = [0.0f64; 2];
        let mut add = |level: u8, dt: f64| t[usize::from(level == 3)] += dt;
        for b in &self.devices[device].busy {
            add(b.level, b.end - b.start);
        }
        for g in self.idle_gaps(device) {
            add(g.level, g.length);
        }
        (t[0], t[1])
    }

    pub fn busy_time(&self, device: usize) -> f64 {
        self.devices[device].busy.iter().map(|b| b.end - b.start).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(gate: &str, devices: &[usize], occupancy: &[u8]) -> PhysicalInstruction {
        PhysicalInstruction::new(gate, devices.to_vec(), None, occupancy.to_vec()).unwrap()
    }

    fn physical(n: usize, occupancy: &[u8], instructions: Vec<PhysicalInstruction>) -> PhysicalCircuit {
        PhysicalCircuit {
            n_devices: n,
            radices: vec![Radix::Qubit; n],
            sim_dims: vec![2; n],
            initial_occupancy: occupancy.to_vec(),
            instructions,
            ..Default::default()
        }
    }

    #[test]
    fn text_round_trip() {
        let text = "qubits 3\nh 0\nrz(0.25) 1\nccx 0 1 2\ncswap 2 0 1\n";
        let c = LogicalCircuit::parse_text(text).unwrap();
        assert_eq!(c.gates.len(), 4);
        assert_eq!(c.to_text(), text);
        assert_eq!(LogicalCircuit::parse_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = LogicalCircuit::parse_text("qubits 2\ncx 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = LogicalCircuit::parse_text("qubits 2\nfoo 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(LogicalCircuit::parse_text("cx 0 1\n").is_err());
    }

    #[test]
    fn moments_are_asap() {
        let mut c = LogicalCircuit::new(4);
        c.push(LogicalGate::cx(0, 1)).unwrap();
        c.push(LogicalGate::cx(2, 3)).unwrap();
        c.push(LogicalGate::cx(1, 2)).unwrap();
        assert_eq!(c.moments(), vec![0, 0, 1]);
    }

    #[test]
    fn serial_and_parallel_durations() {
        let serial = physical(2, &[1, 1], vec![inst("CX_2", &[0, 1], &[1, 1]), inst("CZ_2", &[0, 1], &[1, 1])]);
        assert_eq!(asap_schedule(&serial).duration_ns, 487.0);

        let parallel = physical(4, &[1; 4], vec![inst("CX_2", &[0, 1], &[1, 1]), inst("CX_2", &[2, 3], &[1, 1])]);
        assert_eq!(asap_schedule(&parallel).duration_ns, 251.0);

        let chained = physical(3, &[1; 3], vec![inst("CX_2", &[0, 1], &[1, 1]), inst("CX_2", &[1, 2], &[1, 1])]);
        assert_eq!(asap_schedule(&chained).starts, vec![0.0, 251.0]);
    }

    #[test]
    fn idle_gaps_and_levels() {
        // device 2 never used
        let c = physical(3, &[1; 3], vec![inst("CX_2", &[0, 1], &[1, 1]), inst("U", &[0], &[1])]);
        let s = asap_schedule(&c);
        assert_eq!(s.idle_gaps(2), vec![IdleGap { start: 0.0, length: 286.0, level: 1 }]);
        assert_eq!(s.idle_gaps(1), vec![IdleGap { start: 251.0, length: 35.0, level: 1 }]);
        assert_eq!(s.level_occupancy_times(0), (286.0, 0.0));
    }

    #[test]
    fn encoded_span_counts_as_level_three() {
        // a U on the receiver, then ENC, idle on both, then ENC†
        let mut c = physical(
            3,
            &[1, 1, 1],
            vec![
                inst("U", &[1], &[1]),
                inst("ENC", &[0, 1], &[0, 2]),
                inst("U", &[2], &[1]),
                inst("U", &[2], &[1]),
                inst("ENC†", &[0, 1], &[1, 1]),
            ],
        );
        c.radices[1] = Radix::Ququart;
        let s = asap_schedule(&c);
        let gaps = s.idle_gaps(1);
        assert!(gaps.is_empty());
        // the donor idles at level 1 while its qubit sits in the receiver
        assert_eq!(s.idle_gaps(0)[0], IdleGap { start: 0.0, length: 35.0, level: 1 });
        let (t1, t3) = s.level_occupancy_times(1);
        assert_eq!(t1 + t3, s.duration_ns);
        assert_eq!(t3, 608.0 + 608.0);
        assert_eq!(t1, 35.0);
    }
}
