use super::routing::Builder;
use super::{CswapOrientation, Encoding, Lowering};
use crate::circuit::{GateKind, LogicalGate};
use crate::error::{Error, Result};
use crate::gates::{find_gate, Family, OneQubitOp, Radix};

use OneQubitOp::{Tdg, H, T};

impl Builder<'_> {
    /// Lowers one logical gate whose operands are already in position.
    pub fn lower(&mut self, gate: &LogicalGate) -> Result<()> {
        let q = gate.qubits.as_slice();
        match gate.kind {
            GateKind::One(op) => self.one(q[0], op),
            GateKind::Cx => self.apply(Family::Cx, q, None),
            GateKind::Swap => self.apply(Family::Swap, q, None),
            GateKind::Cz if self.has(Family::Cz, q) => self.apply(Family::Cz, q, None),
            GateKind::Cz => {
                self.one(q[1], H)?;
                self.apply(Family::Cx, q, None)?;
                self.one(q[1], H)
            }
            GateKind::CSdg if self.has(Family::CSdg, q) => self.apply(Family::CSdg, q, None),
            GateKind::CSdg => self.cs_dagger_from_cx(q[0], q[1]),
            GateKind::Ccx | GateKind::Ccz | GateKind::Cswap | GateKind::IToffoli => match self.strategy.encoding {
                Encoding::QubitOnly => self.lower_qubit_only(gate),
                Encoding::MixedRadix => self.lower_mixed_radix(gate),
                Encoding::FullQuquart => self.lower_full_ququart(gate),
            },
        }
    }

    fn has(&self, family: Family, qubits: &[usize]) -> bool {
        let operands: Vec<_> = qubits.iter().map(|&q| self.map.location(q)).collect();
        find_gate(family, &operands, |d| self.radix[d]).is_some()
    }

    fn unsupported(&self, gate: &LogicalGate) -> Error {
        Error::UnknownConfiguration(format!("{:?} under {}", gate.kind, self.strategy))
    }

    fn cs_dagger_from_cx(&mut self, a: usize, b: usize) -> Result<()> {
        self.layer(&[(a, Tdg), (b, Tdg)])?;
        self.apply(Family::Cx, &[a, b], None)?;
        self.one(b, T)?;
        self.apply(Family::Cx, &[a, b], None)
    }

    /// CCZ on a line `a - m - b` from eight nearest-neighbour CX gates and
    /// seven phase gates. The CX ladder visits the parities
    /// `a^m, a^m^b, a^b, m^b`, each picking up a `T` or `T†`.
    fn ccz_eight_cx(&mut self, a: usize, m: usize, b: usize) -> Result<()> {
        let cx = |s: &mut Self, c: usize, t: usize| s.apply(Family::Cx, &[c, t], None);
        self.layer(&[(a, T), (m, T), (b, T)])?;
        cx(self, a, m)?;
        self.one(m, Tdg)?;
        cx(self, m, b)?;
        self.one(b, T)?;
        cx(self, a, m)?;
        cx(self, m, b)?;
        self.one(b, Tdg)?;
        cx(self, a, m)?;
        cx(self, m, b)?;
        self.one(b, Tdg)?;
        cx(self, a, m)?;
        cx(self, m, b)
    }

    /// iToffoli with the target in the middle, then the CS† that turns it
    /// into a Toffoli. The controls are not adjacent, so one SWAP brings a
    /// control next to the other first.
    fn itoffoli_corrected(&mut self, c1: usize, c2: usize, t: usize) -> Result<()> {
        self.apply(Family::IToffoli, &[c1, c2, t], None)?;
        let (from, to) = (self.map.location(t), self.map.location(c1));
        self.swap_nodes(from, to)?;
        self.apply(Family::CSdg, &[c1, c2], None)
    }

    fn lower_qubit_only(&mut self, gate: &LogicalGate) -> Result<()> {
        let q = gate.qubits.as_slice();
        match (gate.kind, self.strategy.lowering) {
            (GateKind::IToffoli, Lowering::IToffoli) => self.apply(Family::IToffoli, q, None),
            (GateKind::Ccx, Lowering::IToffoli) => {
                let (c1, c2, t) = (q[0], q[1], q[2]);
                if self.adjacent_devices(t, c1) && self.adjacent_devices(t, c2) {
                    return self.itoffoli_corrected(c1, c2, t);
                }
                // swap the roles of the middle control and the target
                let mid = self.line_center(q).ok_or_else(|| self.unsupported(gate))?;
                let other = if mid == c1 { c2 } else { c1 };
                self.layer(&[(mid, H), (t, H)])?;
                self.itoffoli_corrected(other, t, mid)?;
                self.layer(&[(mid, H), (t, H)])
            }
            (GateKind::Ccx | GateKind::Ccz, Lowering::Decompose8Cx) => {
                let mid = self.line_center(q).ok_or_else(|| self.unsupported(gate))?;
                let ends: Vec<usize> = q.iter().copied().filter(|&x| x != mid).collect();
                let t = q[2];
                if gate.kind == GateKind::Ccx {
                    self.one(t, H)?;
                }
                self.ccz_eight_cx(ends[0], mid, ends[1])?;
                if gate.kind == GateKind::Ccx {
                    self.one(t, H)?;
                }
                Ok(())
            }
            _ => Err(self.unsupported(gate)),
        }
    }

    /// Moves `donor` into the device of `receiver` (donor in slot 0).
    fn encode(&mut self, donor: usize, receiver: usize) -> Result<(usize, usize)> {
        let (x, m) = (self.map.location(donor).0, self.map.location(receiver).0);
        self.map.relocate(receiver, (m, 1));
        self.map.relocate(donor, (m, 0));
        self.radix[m] = Radix::Ququart;
        self.emit("ENC", vec![x, m], None)?;
        Ok((x, m))
    }

    fn decode(&mut self, donor: usize, receiver: usize, (x, m): (usize, usize)) -> Result<()> {
        self.map.relocate(donor, (x, 0));
        self.map.relocate(receiver, (m, 0));
        self.radix[m] = Radix::Qubit;
        self.emit("ENC†", vec![x, m], None)
    }

    fn lower_mixed_radix(&mut self, gate: &LogicalGate) -> Result<()> {
        let q = gate.qubits.as_slice();
        let mid = self.line_center(q).ok_or_else(|| self.unsupported(gate))?;
        let ends: Vec<usize> = q.iter().copied().filter(|&x| x != mid).collect();
        let other_end = |x: usize| if ends[0] == x { ends[1] } else { ends[0] };
        // an end operand goes into the middle device; prefer pairing
        // operands of the same kind
        let (donor, ops, body): (usize, Vec<usize>, Body) = match (gate.kind, self.strategy.lowering) {
            (GateKind::Ccz, _) => (ends[0], q.to_vec(), Body::Named(Family::Ccz)),
            (GateKind::Ccx, Lowering::RetargetedCcx) if mid == q[2] => {
                let (c1, c2, t) = (q[0], q[1], q[2]);
                self.layer(&[(c2, H), (t, H)])?;
                let window = self.encode(c1, t)?;
                self.apply(Family::Ccx, &[c1, t, c2], None)?;
                self.decode(c1, t, window)?;
                return self.layer(&[(c2, H), (t, H)]);
            }
            (GateKind::Ccx, Lowering::NativeCcx | Lowering::RetargetedCcx) => {
                let donor = if mid == q[2] { ends[0] } else { other_end(q[2]) };
                (donor, q.to_vec(), Body::Named(Family::Ccx))
            }
            (GateKind::Ccx, Lowering::CczTransform | Lowering::NativeCswap) => {
                let donor = if mid == q[2] { ends[0] } else { other_end(q[2]) };
                (donor, q.to_vec(), Body::ViaCcz)
            }
            (GateKind::Cswap, Lowering::NativeCswap) => {
                let donor = match self.strategy.cswap_orientation {
                    CswapOrientation::TargetsTogether if mid != q[0] => other_end(q[0]),
                    _ => ends[0],
                };
                (donor, q.to_vec(), Body::Named(Family::Cswap))
            }
            _ => return Err(self.unsupported(gate)),
        };
        let window = self.encode(donor, mid)?;
        match body {
            Body::Named(family) => self.apply(family, &ops, None)?,
            Body::ViaCcz => {
                self.one(ops[2], H)?;
                self.apply(Family::Ccz, &ops, None)?;
                self.one(ops[2], H)?;
            }
        }
        self.decode(donor, mid, window)
    }

    fn lower_full_ququart(&mut self, gate: &LogicalGate) -> Result<()> {
        let q = gate.qubits.as_slice();
        match (gate.kind, self.strategy.lowering) {
            (GateKind::Ccz, _) => self.apply(Family::Ccz, q, None),
            (GateKind::Ccx, Lowering::NativeCcx) => self.apply(Family::Ccx, q, None),
            (GateKind::Ccx, Lowering::RetargetedCcx) => {
                let (c1, c2, t) = (q[0], q[1], q[2]);
                let dev = |x: usize| self.map.location(x).0;
                let lone = if dev(c1) == dev(c2) {
                    None
                } else if dev(c2) == dev(t) {
                    Some((c1, c2))
                } else if dev(c1) == dev(t) {
                    Some((c2, c1))
                } else {
                    None
                };
                match lone {
                    None => self.apply(Family::Ccx, q, None),
                    Some((ci, co)) => {
                        self.layer(&[(ci, H), (t, H)])?;
                        self.apply(Family::Ccx, &[co, t, ci], None)?;
                        self.layer(&[(ci, H), (t, H)])
                    }
                }
            }
            (GateKind::Ccx, Lowering::CczTransform | Lowering::NativeCswap) => {
                self.one(q[2], H)?;
                self.apply(Family::Ccz, q, None)?;
                self.one(q[2], H)
            }
            (GateKind::Cswap, Lowering::NativeCswap) => self.apply(Family::Cswap, q, None),
            _ => Err(self.unsupported(gate)),
        }
    }
}

enum Body {
    Named(Family),
    ViaCcz,
}
