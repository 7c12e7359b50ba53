//! Generators for the benchmark circuit families.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{GateKind, LogicalCircuit, LogicalGate};
use crate::error::{Error, Result};
use crate::gates::OneQubitOp;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BenchmarkSpec {
    Cnu { controls: usize },
    Cuccaro { bits: usize },
    Qram { address_bits: usize },
    Select { index_bits: usize, targets: usize, seed: u64 },
    Synthetic { qubits: usize, gates: usize, cx_fraction: f64, seed: u64 },
}

impl BenchmarkSpec {
    pub fn family(&self) -> &'static str {
        match self {
            BenchmarkSpec::Cnu { .. } => "cnu",
            BenchmarkSpec::Cuccaro { .. } => "cuccaro",
            BenchmarkSpec::Qram { .. } => "qram",
            BenchmarkSpec::Select { .. } => "select",
            BenchmarkSpec::Synthetic { .. } => "synthetic",
        }
    }

    pub fn generate(&self) -> Result<LogicalCircuit> {
        match *self {
            BenchmarkSpec::Cnu { controls } => gen_cnu(controls),
            BenchmarkSpec::Cuccaro { bits } => gen_cuccaro(bits),
            BenchmarkSpec::Qram { address_bits } => gen_qram(address_bits),
            BenchmarkSpec::Select { index_bits, targets, seed } => gen_select(index_bits, targets, seed),
            BenchmarkSpec::Synthetic { qubits, gates, cx_fraction, seed } => {
                gen_synthetic(qubits, gates, cx_fraction, seed)
            }
        }
    }
}

fn push_all(circuit: &mut LogicalCircuit, gates: impl IntoIterator<Item = LogicalGate>) {
    for g in gates {
        circuit.push(g).expect("generator emits valid gates");
    }
}

/// Toffoli V-chain computing the AND of `controls` into `target` through
/// `ancillas` (`controls.len() - 2` of them, all starting in |0>).
fn cnu_ladder(controls: &[usize], ancillas: &[usize], target: usize) -> Vec<LogicalGate> {
    let n = controls.len();
    assert!(n >= 2 && ancillas.len() + 2 >= n);
    if n == 2 {
        return vec![LogicalGate::ccx(controls[0], controls[1], target)];
    }
    let mut compute = vec![LogicalGate::ccx(controls[0], controls[1], ancillas[0])];
    for i in 2..n - 1 {
        compute.push(LogicalGate::ccx(controls[i], ancillas[i - 2], ancillas[i - 1]));
    }
    let mut gates = compute.clone();
    gates.push(LogicalGate::ccx(controls[n - 1], ancillas[n - 3], target));
    gates.extend(compute.into_iter().rev());
    gates
}

/// Multi-controlled X with controls `0..n`, ancillas `n..2n-2` and the target
/// on the last qubit; `2n - 3` Toffolis.
pub fn gen_cnu(n_controls: usize) -> Result<LogicalCircuit> {
    if n_controls < 2 {
        return Err(Error::InvalidParameter("cnu needs at least 2 controls".into()));
    }
    let n_qubits = 2 * n_controls - 1;
    let controls: Vec<usize> = (0..n_controls).collect();
    let ancillas: Vec<usize> = (n_controls..n_qubits - 1).collect();
    let mut c = LogicalCircuit::new(n_qubits);
    push_all(&mut c, cnu_ladder(&controls, &ancillas, n_qubits - 1));
    Ok(c)
}

/// Qubit layout of the ripple-carry adder.
#[derive(Clone, Copy, Debug)]
pub struct CuccaroLayout {
    pub bits: usize,
}

impl CuccaroLayout {
    pub fn carry_in(&self) -> usize {
        0
    }

    pub fn b(&self, i: usize) -> usize {
        1 + 2 * i
    }

    pub fn a(&self, i: usize) -> usize {
        2 + 2 * i
    }

    pub fn carry_out(&self) -> usize {
        2 * self.bits + 1
    }
}

/// Ripple-carry adder `b <- a + b` on `2n + 2` qubits laid out as
/// `[c, b0, a0, b1, a1, ..., z]`; the carry-out is XORed into `z`.
pub fn gen_cuccaro(n_bits: usize) -> Result<LogicalCircuit> {
    if n_bits < 1 {
        return Err(Error::InvalidParameter("cuccaro needs at least 1 bit".into()));
    }
    let l = CuccaroLayout { bits: n_bits };
    let carry = |i: usize| if i == 0 { l.carry_in() } else { l.a(i - 1) };
    let maj = |c: usize, b: usize, a: usize| [LogicalGate::cx(a, b), LogicalGate::cx(a, c), LogicalGate::ccx(c, b, a)];
    let uma = |c: usize, b: usize, a: usize| [LogicalGate::ccx(c, b, a), LogicalGate::cx(a, c), LogicalGate::cx(c, b)];
    let mut circuit = LogicalCircuit::new(2 * n_bits + 2);
    for i in 0..n_bits {
        push_all(&mut circuit, maj(carry(i), l.b(i), l.a(i)));
    }
    push_all(&mut circuit, [LogicalGate::cx(l.a(n_bits - 1), l.carry_out())]);
    for i in (0..n_bits).rev() {
        push_all(&mut circuit, uma(carry(i), l.b(i), l.a(i)));
    }
    Ok(circuit)
}

/// Qubit layout of the routing-tree memory access.
#[derive(Clone, Copy, Debug)]
pub struct QramLayout {
    pub address_bits: usize,
}

impl QramLayout {
    /// Address bit `k` has weight `2^k`.
    pub fn address(&self, k: usize) -> usize {
        k
    }

    /// Routing register; `router(0)` is the bus.
    pub fn router(&self, j: usize) -> usize {
        self.address_bits + j
    }

    pub fn memory(&self, j: usize) -> usize {
        self.address_bits + (1 << self.address_bits) + j
    }

    pub fn n_qubits(&self) -> usize {
        self.address_bits + 2 * (1 << self.address_bits)
    }
}

/// Routed memory access: a CSWAP tree moves the bus to leaf `address`, every
/// leaf is XORed into its memory cell, and the tree is undone. With the
/// routing register initially clear only `memory[address]` changes, by the
/// bus value, and the routing register returns to its initial state.
pub fn gen_qram(n_address_bits: usize) -> Result<LogicalCircuit> {
    if n_address_bits < 1 {
        return Err(Error::InvalidParameter("qram needs at least 1 address bit".into()));
    }
    let l = QramLayout { address_bits: n_address_bits };
    let forward: Vec<LogicalGate> = (0..n_address_bits)
        .flat_map(|k| (0..1usize << k).map(move |j| LogicalGate::cswap(l.address(k), l.router(j), l.router(j + (1 << k)))))
        .collect();
    let mut c = LogicalCircuit::new(l.n_qubits());
    push_all(&mut c, forward.iter().cloned());
    push_all(&mut c, (0..1usize << n_address_bits).map(|j| LogicalGate::cx(l.router(j), l.memory(j))));
    push_all(&mut c, forward.into_iter().rev());
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Qubit layout and the seed-drawn contents of a select circuit.
#[derive(Clone, Debug)]
pub struct SelectPlan {
    pub index_bits: usize,
    pub targets: usize,
    /// `(index value, Pauli per target)` for the two selected values.
    pub blocks: Vec<(usize, Vec<Pauli>)>,
}

impl SelectPlan {
    pub fn draw(index_bits: usize, targets: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = index::sample(&mut rng, 1 << index_bits, 2).into_vec();
        let blocks = values
            .into_iter()
            .map(|v| {
                let paulis = loop {
                    let p: Vec<Pauli> = (0..targets)
                        .map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..4)])
                        .collect();
                    if p.iter().any(|&x| x != Pauli::I) {
                        break p;
                    }
                };
                (v, paulis)
            })
            .collect();
        SelectPlan { index_bits, targets, blocks }
    }

    /// Index bit `k` has weight `2^k`.
    pub fn index(&self, k: usize) -> usize {
        k
    }

    pub fn target(&self, i: usize) -> usize {
        self.index_bits + i
    }

    fn flag(&self) -> Option<usize> {
        (self.index_bits >= 2).then_some(self.index_bits + self.targets)
    }

    fn ancillas(&self) -> Vec<usize> {
        let base = self.index_bits + self.targets + 1;
        (base..base + self.index_bits.saturating_sub(2)).collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.index_bits + self.targets + self.flag().map_or(0, |_| 1) + self.ancillas().len()
    }
}

/// Applies a seed-drawn Pauli string to the targets for each of two distinct
/// seed-drawn index values. Zero-controls are realized by X conjugation and
/// the multi-control by a Toffoli ladder into a flag qubit.
pub fn gen_select(m_index: usize, n_targets: usize, seed: u64) -> Result<LogicalCircuit> {
    if m_index < 1 || n_targets < 1 {
        return Err(Error::InvalidParameter("select needs at least 1 index bit and 1 target".into()));
    }
    let plan = SelectPlan::draw(m_index, n_targets, seed);
    let mut c = LogicalCircuit::new(plan.n_qubits());
    let index: Vec<usize> = (0..m_index).map(|k| plan.index(k)).collect();
    for (value, paulis) in &plan.blocks {
        let flips: Vec<LogicalGate> = (0..m_index)
            .filter(|k| value >> k & 1 == 0)
            .map(|k| LogicalGate::one(OneQubitOp::X, plan.index(k)))
            .collect();
        push_all(&mut c, flips.iter().cloned());
        let control = match plan.flag() {
            Some(flag) => {
                push_all(&mut c, cnu_ladder(&index, &plan.ancillas(), flag));
                flag
            }
            None => plan.index(0),
        };
        for (i, p) in paulis.iter().enumerate() {
            let t = plan.target(i);
            match p {
                Pauli::I => {}
                Pauli::X => push_all(&mut c, [LogicalGate::cx(control, t)]),
                Pauli::Z => push_all(&mut c, [LogicalGate::new(GateKind::Cz, &[control, t])]),
                Pauli::Y => push_all(
                    &mut c,
                    [
                        LogicalGate::one(OneQubitOp::Sdg, t),
                        LogicalGate::cx(control, t),
                        LogicalGate::one(OneQubitOp::S, t),
                    ],
                ),
            }
        }
        if let Some(flag) = plan.flag() {
            push_all(&mut c, cnu_ladder(&index, &plan.ancillas(), flag));
        }
        push_all(&mut c, flips);
    }
    Ok(c)
}

/// `n_gates` random CX/CCX gates; each is a CX with probability `cx_fraction`.
pub fn gen_synthetic(n_qubits: usize, n_gates: usize, cx_fraction: f64, seed: u64) -> Result<LogicalCircuit> {
    if n_qubits < 3 {
        return Err(Error::InvalidParameter("synthetic circuits need at least 3 qubits".into()));
    }
    if !(0.0..=1.0).contains(&cx_fraction) {
        return Err(Error::InvalidParameter(format!("cx_fraction {cx_fraction} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = LogicalCircuit::new(n_qubits);
    for _ in 0..n_gates {
        let kind = if rng.random_bool(cx_fraction) { GateKind::Cx } else { GateKind::Ccx };
        let qubits = index::sample(&mut rng, n_qubits, kind.arity()).into_vec();
        push_all(&mut c, [LogicalGate { kind, qubits }]);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Classical evaluation of a reversible circuit on a basis state.
    fn eval(c: &LogicalCircuit, mut bits: u64) -> u64 {
        let bit = |b: u64, q: usize| b >> q & 1 == 1;
        for g in &c.gates {
            let q = &g.qubits;
            match g.kind {
                GateKind::One(OneQubitOp::X) => bits ^= 1 << q[0],
                GateKind::Cx => {
                    if bit(bits, q[0]) {
                        bits ^= 1 << q[1]
                    }
                }
                GateKind::Ccx => {
                    if bit(bits, q[0]) && bit(bits, q[1]) {
                        bits ^= 1 << q[2]
                    }
                }
                GateKind::Cswap => {
                    if bit(bits, q[0]) && bit(bits, q[1]) != bit(bits, q[2]) {
                        bits ^= (1 << q[1]) | (1 << q[2])
                    }
                }
                other => panic!("non-classical gate {other:?}"),
            }
        }
        bits
    }

    #[test]
    fn cnu_flips_target_only_when_all_controls_set() {
        for n in 2..=4 {
            let c = gen_cnu(n).unwrap();
            assert_eq!(c.n_qubits, 2 * n - 1);
            assert_eq!(c.gates.len(), 2 * n - 3);
            let target = c.n_qubits - 1;
            for controls in 0u64..1 << n {
                for t in 0..2u64 {
                    let input = controls | t << target;
                    let all = controls == (1 << n) - 1;
                    let expected = if all { input ^ 1 << target } else { input };
                    assert_eq!(eval(&c, input), expected, "n={n} input={input:b}");
                }
            }
        }
    }

    #[test]
    fn cuccaro_adds() {
        for bits in 1..=3 {
            let c = gen_cuccaro(bits).unwrap();
            let l = CuccaroLayout { bits };
            assert_eq!(c.n_qubits, 2 * bits + 2);
            for a in 0..1u64 << bits {
                for b in 0..1u64 << bits {
                    let mut input = 0u64;
                    for i in 0..bits {
                        input |= (a >> i & 1) << l.a(i) | (b >> i & 1) << l.b(i);
                    }
                    let out = eval(&c, input);
                    let read = |f: &dyn Fn(usize) -> usize| (0..bits).map(|i| (out >> f(i) & 1) << i).sum::<u64>();
                    let sum = a + b;
                    assert_eq!(read(&|i| l.b(i)), sum % (1 << bits));
                    assert_eq!(read(&|i| l.a(i)), a);
                    assert_eq!(out >> l.carry_out() & 1, sum >> bits);
                    assert_eq!(out >> l.carry_in() & 1, 0);
                }
            }
        }
        assert_eq!(gen_cuccaro(4).unwrap().n_qubits, 10);
    }

    #[test]
    fn qram_writes_addressed_cell() {
        for n in 1..=2 {
            let c = gen_qram(n).unwrap();
            let l = QramLayout { address_bits: n };
            assert_eq!(c.count(|k| k == GateKind::Cswap), 2 * ((1 << n) - 1));
            for address in 0..1u64 << n {
                for memory in 0..1u64 << (1 << n) {
                    for bus in 0..2u64 {
                        let mut input = bus << l.router(0);
                        for k in 0..n {
                            input |= (address >> k & 1) << l.address(k);
                        }
                        for j in 0..1 << n {
                            input |= (memory >> j & 1) << l.memory(j);
                        }
                        let expected = input ^ (bus << l.memory(address as usize));
                        assert_eq!(eval(&c, input), expected);
                    }
                }
            }
        }
        let c = gen_qram(2).unwrap();
        assert!(c.count(|k| k == GateKind::Cx) < c.count(|k| k == GateKind::Cswap));
    }

    #[test]
    fn select_is_deterministic_with_two_distinct_values() {
        let a = gen_select(2, 3, 9).unwrap();
        assert_eq!(a, gen_select(2, 3, 9).unwrap());
        let plan = SelectPlan::draw(2, 3, 9);
        assert_ne!(plan.blocks[0].0, plan.blocks[1].0);
        let one = SelectPlan::draw(1, 1, 5);
        let mut values: Vec<usize> = one.blocks.iter().map(|b| b.0).collect();
        values.sort();
        assert_eq!(values, vec![0, 1]);
        assert_eq!(gen_select(1, 1, 5).unwrap().n_qubits, 2);
    }

    #[test]
    fn synthetic_fraction_extremes_and_statistics() {
        let all_cx = gen_synthetic(5, 50, 1.0, 1).unwrap();
        assert_eq!(all_cx.count(|k| k == GateKind::Ccx), 0);
        let all_ccx = gen_synthetic(5, 50, 0.0, 1).unwrap();
        assert_eq!(all_ccx.count(|k| k == GateKind::Cx), 0);
        let c = gen_synthetic(11, 1000, 0.6, 7).unwrap();
        let n_cx = c.count(|k| k == GateKind::Cx) as f64;
        let sigma = (1000.0f64 * 0.6 * 0.4).sqrt();
        assert!((n_cx - 600.0).abs() <= 3.0 * sigma, "{n_cx}");
        assert_eq!(c, gen_synthetic(11, 1000, 0.6, 7).unwrap());
    }

    #[test]
    fn rejects_degenerate_sizes() {
        assert!(gen_cnu(1).is_err());
        assert!(gen_cuccaro(0).is_err());
        assert!(gen_qram(0).is_err());
        assert!(gen_select(0, 1, 0).is_err());
        assert!(gen_synthetic(2, 1, 0.5, 0).is_err());
        assert!(gen_synthetic(4, 1, 1.5, 0).is_err());
    }
}
