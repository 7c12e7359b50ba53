//! Gate library for qubits stored in two- and four-level devices.
//!
//! Two qubits `|q0 q1>` share one ququart as level `2*q0 + q1`: slot 0 is the
//! high bit, slot 1 the low bit. A bare qubit device has a single slot 0.
//!
//! Gate names use a superscript token grammar. Within `^{...}` each logical
//! operand (controls first, then targets) is written as either `q` (a bare
//! qubit device) or a slot digit of a ququart. Commas separate devices when two
//! ququarts take part (`CCX^{01,1}`: both controls in slots 0 and 1 of the first
//! ququart, target in slot 1 of the second). Without commas, digits belong to
//! the single ququart and `q` to the bare device (`CCX^{q01}`). Two-digit
//! two-qubit names like `CX^{10}` span two ququarts. Internal gates carry a single
//! digit (`CX^0` targets slot 0). Subscripts `_2`/`_3` name gates between bare
//! qubits.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::sync::LazyLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, Matrix, I, ONE, ZERO};

/// Dimension of a physical device.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub enum Radix {
    Qubit,
    Ququart,
}

impl Radix {
    pub fn dim(self) -> usize {
        match self {
            Radix::Qubit => 2,
            Radix::Ququart => 4,
        }
    }

    pub fn slots(self) -> u8 {
        match self {
            Radix::Qubit => 1,
            Radix::Ququart => 2,
        }
    }
}

impl TryFrom<usize> for Radix {
    type Error = Error;

    fn try_from(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(Radix::Qubit),
            4 => Ok(Radix::Ququart),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }
}

impl From<Radix> for usize {
    fn from(r: Radix) -> usize {
        r.dim()
    }
}

pub fn encode_level(q0: u8, q1: u8) -> u8 {
    debug_assert!(q0 < 2 && q1 < 2);
    2 * q0 + q1
}

pub fn decode_level(level: u8) -> (u8, u8) {
    debug_assert!(level < 4);
    (level >> 1, level & 1)
}

/// Bit held in `slot` of a device at `level`.
pub(crate) fn slot_bit(radix: Radix, level: usize, slot: u8) -> usize {
    match (radix, slot) {
        (Radix::Qubit, _) => level,
        (Radix::Ququart, 0) => level >> 1,
        (Radix::Ququart, _) => level & 1,
    }
}

pub(crate) fn with_slot_bit(radix: Radix, level: usize, slot: u8, bit: usize) -> usize {
    match (radix, slot) {
        (Radix::Qubit, _) => bit,
        (Radix::Ququart, 0) => (bit << 1) | (level & 1),
        (Radix::Ququart, _) => (level & 2) | bit,
    }
}

/// Single-qubit operations carried by the parameterized `U` gates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OneQubitOp {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Rz(f64),
    U3(f64, f64, f64),
}

impl OneQubitOp {
    pub fn matrix(self) -> Matrix {
        let h = FRAC_1_SQRT_2;
        match self {
            OneQubitOp::X => linalg::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
            OneQubitOp::Y => linalg::from_rows(&[&[ZERO, -I], &[I, ZERO]]),
            OneQubitOp::Z => linalg::diagonal(&[ONE, -ONE]),
            OneQubitOp::H => linalg::from_rows(&[&[c(h, 0.0), c(h, 0.0)], &[c(h, 0.0), c(-h, 0.0)]]),
            OneQubitOp::S => linalg::diagonal(&[ONE, I]),
            OneQubitOp::Sdg => linalg::diagonal(&[ONE, -I]),
            OneQubitOp::T => linalg::diagonal(&[ONE, Complex64::from_polar(1.0, FRAC_PI_4)]),
            OneQubitOp::Tdg => linalg::diagonal(&[ONE, Complex64::from_polar(1.0, -FRAC_PI_4)]),
            OneQubitOp::Rz(theta) => linalg::diagonal(&[
                Complex64::from_polar(1.0, -theta / 2.0),
                Complex64::from_polar(1.0, theta / 2.0),
            ]),
            OneQubitOp::U3(theta, phi, lambda) => {
                let (s, co) = (theta / 2.0).sin_cos();
                linalg::from_rows(&[
                    &[c(co, 0.0), -Complex64::from_polar(s, lambda)],
                    &[Complex64::from_polar(s, phi), Complex64::from_polar(co, phi + lambda)],
                ])
            }
        }
    }

    pub fn inverse(self) -> OneQubitOp {
        match self {
            OneQubitOp::S => OneQubitOp::Sdg,
            OneQubitOp::Sdg => OneQubitOp::S,
            OneQubitOp::T => OneQubitOp::Tdg,
            OneQubitOp::Tdg => OneQubitOp::T,
            OneQubitOp::Rz(t) => OneQubitOp::Rz(-t),
            OneQubitOp::U3(t, p, l) => OneQubitOp::U3(-t, -l, -p),
            other => other,
        }
    }
}

/// What a named gate does at the qubit level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Any single-qubit gate on one slot.
    OneQubit,
    /// The same single-qubit gate on both slots of one ququart.
    OneQubitPair,
    Cx,
    Cz,
    CSdg,
    Swap,
    IToffoli,
    Ccx,
    Ccz,
    Cswap,
    Enc,
    EncDag,
}

impl Family {
    pub fn arity(self) -> usize {
        match self {
            Family::OneQubit => 1,
            Family::OneQubitPair
            | Family::Cx
            | Family::Cz
            | Family::CSdg
            | Family::Swap
            | Family::Enc
            | Family::EncDag => 2,
            Family::IToffoli | Family::Ccx | Family::Ccz | Family::Cswap => 3,
        }
    }

    /// Operand permutations that leave the qubit-level gate unchanged.
    pub fn symmetries(self) -> &'static [&'static [usize]] {
        match self {
            Family::OneQubit => &[&[0]],
            Family::Cx | Family::Enc | Family::EncDag => &[&[0, 1]],
            Family::OneQubitPair | Family::Cz | Family::CSdg | Family::Swap => &[&[0, 1], &[1, 0]],
            Family::Ccx | Family::IToffoli => &[&[0, 1, 2], &[1, 0, 2]],
            Family::Cswap => &[&[0, 1, 2], &[0, 2, 1]],
            Family::Ccz => &[
                &[0, 1, 2],
                &[0, 2, 1],
                &[1, 0, 2],
                &[1, 2, 0],
                &[2, 0, 1],
                &[2, 1, 0],
            ],
        }
    }

    /// Qubit-level matrix, operand 0 most significant. `None` for parameterized
    /// and encoding families.
    pub fn qubit_matrix(self) -> Option<Matrix> {
        Some(match self {
            Family::Cx => cx(),
            Family::Cz => linalg::diagonal(&[ONE, ONE, ONE, -ONE]),
            Family::CSdg => linalg::diagonal(&[ONE, ONE, ONE, -I]),
            Family::Swap => linalg::permutation(&[0, 2, 1, 3]),
            Family::Ccx => ccx(),
            Family::Ccz => {
                let mut d = [ONE; 8];
                d[7] = -ONE;
                linalg::diagonal(&d)
            }
            Family::Cswap => linalg::permutation(&[0, 1, 2, 3, 4, 6, 5, 7]),
            Family::IToffoli => {
                let mut m = ccx();
                m[(6, 7)] = I;
                m[(7, 6)] = I;
                m
            }
            Family::OneQubit | Family::OneQubitPair | Family::Enc | Family::EncDag => return None,
        })
    }
}

fn cx() -> Matrix {
    linalg::permutation(&[0, 1, 3, 2])
}

fn ccx() -> Matrix {
    linalg::permutation(&[0, 1, 2, 3, 4, 5, 7, 6])
}

/// Where each logical operand of a qubit-level gate lives: `(position in the
/// physical operand tuple, slot index)`.
pub type SlotAssignment = Vec<(usize, u8)>;

/// Embeds a qubit-level unitary into the physical space `Π radices`, acting as
/// `unitary` on the assigned slots and as identity on every other slot.
pub fn lift(unitary: &Matrix, radices: &[Radix], assignment: &[(usize, u8)]) -> Result<Matrix> {
    let k = assignment.len();
    if k > 4 {
        return Err(Error::InvalidAssignment(format!("{k} operands; at most 4 supported")));
    }
    if unitary.nrows() != 1 << k || unitary.ncols() != 1 << k {
        return Err(Error::DimensionMismatch { expected: 1 << k, found: unitary.nrows() });
    }
    for (i, &(pos, slot)) in assignment.iter().enumerate() {
        let radix = radices.get(pos).ok_or_else(|| {
            Error::InvalidAssignment(format!("operand position {pos} out of range"))
        })?;
        if slot >= radix.slots() {
            return Err(Error::InvalidAssignment(format!(
                "slot {slot} does not exist on a {}-level device",
                radix.dim()
            )));
        }
        if assignment[..i].contains(&(pos, slot)) {
            return Err(Error::DuplicateSlot { position: pos, slot });
        }
    }

    let dims: Vec<usize> = radices.iter().map(|r| r.dim()).collect();
    let total: usize = dims.iter().product();
    let digits_of = |mut index: usize| {
        let mut digits = vec![0usize; dims.len()];
        for (d, &dim) in digits.iter_mut().zip(&dims).rev() {
            *d = index % dim;
            index /= dim;
        }
        digits
    };
    let index_of = |digits: &[usize]| digits.iter().zip(&dims).fold(0, |acc, (&d, &dim)| acc * dim + d);

    let mut out = ndarray::Array2::from_elem((total, total), ZERO);
    for col in 0..total {
        let digits = digits_of(col);
        let logical_in = assignment.iter().fold(0usize, |acc, &(pos, slot)| {
            (acc << 1) | slot_bit(radices[pos], digits[pos], slot)
        });
        for logical_out in 0..1usize << k {
            let amp = unitary[(logical_out, logical_in)];
            if amp == ZERO {
                continue;
            }
            let mut out_digits = digits.clone();
            for (i, &(pos, slot)) in assignment.iter().enumerate() {
                let bit = (logical_out >> (k - 1 - i)) & 1;
                out_digits[pos] = with_slot_bit(radices[pos], out_digits[pos], slot, bit);
            }
            out[(index_of(&out_digits), col)] = amp;
        }
    }
    Ok(out)
}

/// Encoding permutation on two ququart-capable devices `A ⊗ B`:
/// `|a>|b> -> |0>|2a+b>` for `a, b ∈ {0,1}`, completed by swapping
/// `(|1>|0>, |0>|2>)` and `(|1>|1>, |0>|3>)` and fixing everything else. It is an
/// involution, so it also serves as the decoder.
pub fn enc_unitary() -> Matrix {
    linalg::permutation(&enc_permutation(4))
}

fn enc_permutation(donor_dim: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..donor_dim * 4).collect();
    perm.swap(4, 2);
    perm.swap(5, 3);
    perm
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateClass {
    /// Acts on a single physical device.
    SingleDevice,
    /// Spans two or three physical devices.
    MultiDevice,
}

impl GateClass {
    pub fn default_fidelity(self) -> f64 {
        match self {
            GateClass::SingleDevice => 0.999,
            GateClass::MultiDevice => 0.99,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GateSpec {
    pub name: &'static str,
    pub family: Family,
    pub operand_radices: Vec<Radix>,
    pub assignment: SlotAssignment,
    pub duration_ns: f64,
    pub fidelity: f64,
    pub class: GateClass,
    /// Canonical matrix; parameterized `U` gates use the Hadamard as representative.
    pub unitary: Matrix,
}

impl GateSpec {
    pub fn touches_ququart(&self) -> bool {
        self.operand_radices.contains(&Radix::Ququart)
    }

    /// Matrix for this gate, substituting `op` for the parameterized families.
    pub fn unitary_with(&self, op: Option<OneQubitOp>) -> Result<Matrix> {
        match (self.family, op) {
            (Family::OneQubit, Some(op)) => lift(&op.matrix(), &self.operand_radices, &self.assignment),
            (Family::OneQubitPair, Some(op)) => {
                let m = op.matrix();
                lift(&linalg::kron(&m, &m), &self.operand_radices, &self.assignment)
            }
            _ => Ok(self.unitary.clone()),
        }
    }
}

/// Record used for the JSON gate table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub name: String,
    pub radices: Vec<Radix>,
    pub duration_ns: f64,
    pub fidelity: f64,
}

/// A library entry matched against concrete operand locations.
#[derive(Clone, Debug)]
pub struct Placement {
    pub spec: &'static GateSpec,
    /// Physical devices in the entry's operand order.
    pub devices: Vec<usize>,
}

pub struct GateLibrary {
    specs: Vec<GateSpec>,
    by_name: HashMap<&'static str, usize>,
}

type Row = (&'static str, Family, &'static [usize], &'static [(usize, u8)], f64);

// (name, family, operand radices, slot assignment per logical operand, duration ns)
const TABLE: &[Row] = &[
    // single device
    ("U", Family::OneQubit, &[2], &[(0, 0)], 35.0),
    ("U^0", Family::OneQubit, &[4], &[(0, 0)], 87.0),
    ("U^1", Family::OneQubit, &[4], &[(0, 1)], 66.0),
    ("U^{0,1}", Family::OneQubitPair, &[4], &[(0, 0), (0, 1)], 86.0),
    ("CX^0", Family::Cx, &[4], &[(0, 1), (0, 0)], 83.0),
    ("CX^1", Family::Cx, &[4], &[(0, 0), (0, 1)], 84.0),
    ("SWAP^in", Family::Swap, &[4], &[(0, 0), (0, 1)], 78.0),
    // bare qubits
    ("CX_2", Family::Cx, &[2, 2], &[(0, 0), (1, 0)], 251.0),
    ("CZ_2", Family::Cz, &[2, 2], &[(0, 0), (1, 0)], 236.0),
    ("CS†_2", Family::CSdg, &[2, 2], &[(0, 0), (1, 0)], 126.0),
    ("SWAP_2", Family::Swap, &[2, 2], &[(0, 0), (1, 0)], 504.0),
    ("iToffoli_3", Family::IToffoli, &[2, 2, 2], &[(0, 0), (1, 0), (2, 0)], 912.0),
    // mixed radix
    ("CX^{0q}", Family::Cx, &[4, 2], &[(0, 0), (1, 0)], 560.0),
    ("CX^{1q}", Family::Cx, &[4, 2], &[(0, 1), (1, 0)], 632.0),
    ("CX^{q0}", Family::Cx, &[2, 4], &[(0, 0), (1, 0)], 880.0),
    ("CX^{q1}", Family::Cx, &[2, 4], &[(0, 0), (1, 1)], 812.0),
    ("CZ^{q0}", Family::Cz, &[2, 4], &[(0, 0), (1, 0)], 384.0),
    ("CZ^{q1}", Family::Cz, &[2, 4], &[(0, 0), (1, 1)], 404.0),
    ("SWAP^{q0}", Family::Swap, &[2, 4], &[(0, 0), (1, 0)], 680.0),
    ("SWAP^{q1}", Family::Swap, &[2, 4], &[(0, 0), (1, 1)], 792.0),
    ("ENC", Family::Enc, &[2, 4], &[(0, 0), (1, 1)], 608.0),
    ("ENC†", Family::EncDag, &[2, 4], &[(0, 0), (1, 1)], 608.0),
    // full ququart
    ("CX^{00}", Family::Cx, &[4, 4], &[(0, 0), (1, 0)], 544.0),
    ("CX^{01}", Family::Cx, &[4, 4], &[(0, 0), (1, 1)], 544.0),
    ("CX^{10}", Family::Cx, &[4, 4], &[(0, 1), (1, 0)], 700.0),
    ("CX^{11}", Family::Cx, &[4, 4], &[(0, 1), (1, 1)], 700.0),
    ("CZ^{00}", Family::Cz, &[4, 4], &[(0, 0), (1, 0)], 392.0),
    ("CZ^{01}", Family::Cz, &[4, 4], &[(0, 0), (1, 1)], 488.0),
    ("CZ^{11}", Family::Cz, &[4, 4], &[(0, 1), (1, 1)], 776.0),
    ("SWAP^{00}", Family::Swap, &[4, 4], &[(0, 0), (1, 0)], 916.0),
    ("SWAP^{01}", Family::Swap, &[4, 4], &[(0, 0), (1, 1)], 892.0),
    ("SWAP^{11}", Family::Swap, &[4, 4], &[(0, 1), (1, 1)], 964.0),
    // mixed-radix three-qubit gates
    ("CCX^{q01}", Family::Ccx, &[2, 4], &[(0, 0), (1, 0), (1, 1)], 619.0),
    ("CCX^{1q0}", Family::Ccx, &[4, 2], &[(0, 1), (1, 0), (0, 0)], 697.0),
    ("CCX^{01q}", Family::Ccx, &[4, 2], &[(0, 0), (0, 1), (1, 0)], 412.0),
    ("CCZ^{01q}", Family::Ccz, &[4, 2], &[(0, 0), (0, 1), (1, 0)], 264.0),
    ("CSWAP^{01q}", Family::Cswap, &[4, 2], &[(0, 0), (0, 1), (1, 0)], 684.0),
    ("CSWAP^{10q}", Family::Cswap, &[4, 2], &[(0, 1), (0, 0), (1, 0)], 762.0),
    ("CSWAP^{q01}", Family::Cswap, &[2, 4], &[(0, 0), (1, 0), (1, 1)], 444.0),
    // full-ququart three-qubit gates
    ("CCX^{01,0}", Family::Ccx, &[4, 4], &[(0, 0), (0, 1), (1, 0)], 536.0),
    ("CCX^{01,1}", Family::Ccx, &[4, 4], &[(0, 0), (0, 1), (1, 1)], 552.0),
    ("CCX^{0,01}", Family::Ccx, &[4, 4], &[(0, 0), (1, 0), (1, 1)], 785.0),
    ("CCX^{0,10}", Family::Ccx, &[4, 4], &[(0, 0), (1, 1), (1, 0)], 785.0),
    ("CCX^{1,10}", Family::Ccx, &[4, 4], &[(0, 1), (1, 1), (1, 0)], 785.0),
    ("CCX^{1,01}", Family::Ccx, &[4, 4], &[(0, 1), (1, 0), (1, 1)], 680.0),
    ("CCZ^{01,0}", Family::Ccz, &[4, 4], &[(0, 0), (0, 1), (1, 0)], 232.0),
    ("CCZ^{01,1}", Family::Ccz, &[4, 4], &[(0, 0), (0, 1), (1, 1)], 310.0),
    ("CSWAP^{01,0}", Family::Cswap, &[4, 4], &[(0, 0), (0, 1), (1, 0)], 680.0),
    ("CSWAP^{01,1}", Family::Cswap, &[4, 4], &[(0, 0), (0, 1), (1, 1)], 744.0),
    ("CSWAP^{10,0}", Family::Cswap, &[4, 4], &[(0, 1), (0, 0), (1, 0)], 758.0),
    ("CSWAP^{10,1}", Family::Cswap, &[4, 4], &[(0, 1), (0, 0), (1, 1)], 822.0),
    ("CSWAP^{0,01}", Family::Cswap, &[4, 4], &[(0, 0), (1, 0), (1, 1)], 510.0),
    ("CSWAP^{1,01}", Family::Cswap, &[4, 4], &[(0, 1), (1, 0), (1, 1)], 432.0),
];

impl GateLibrary {
    fn build() -> Self {
        let specs: Vec<GateSpec> = TABLE
            .iter()
            .map(|&(name, family, radices, assignment, duration_ns)| {
                let operand_radices: Vec<Radix> = radices
                    .iter()
                    .map(|&d| Radix::try_from(d).expect("table radices are 2 or 4"))
                    .collect();
                let assignment = assignment.to_vec();
                let class = if operand_radices.len() == 1 {
                    GateClass::SingleDevice
                } else {
                    GateClass::MultiDevice
                };
                let unitary = match family {
                    Family::Enc | Family::EncDag => {
                        Ok(linalg::permutation(&enc_permutation(operand_radices[0].dim())))
                    }
                    Family::OneQubit => lift(&OneQubitOp::H.matrix(), &operand_radices, &assignment),
                    Family::OneQubitPair => {
                        let h = OneQubitOp::H.matrix();
                        lift(&linalg::kron(&h, &h), &operand_radices, &assignment)
                    }
                    _ => lift(
                        &family.qubit_matrix().expect("fixed family"),
                        &operand_radices,
                        &assignment,
                    ),
                }
                .expect("table assignments are valid");
                GateSpec {
                    name,
                    family,
                    operand_radices,
                    assignment,
                    duration_ns,
                    fidelity: class.default_fidelity(),
                    class,
                    unitary,
                }
            })
            .collect();
        let by_name = specs.iter().enumerate().map(|(i, s)| (s.name, i)).collect();
        GateLibrary { specs, by_name }
    }

    pub fn get(&self, name: &str) -> Result<&GateSpec> {
        self.by_name
            .get(name)
            .map(|&i| &self.specs[i])
            .ok_or_else(|| Error::UnknownGate(name.to_string()))
    }

    pub fn specs(&self) -> &[GateSpec] {
        &self.specs
    }

    pub fn records(&self) -> Vec<GateRecord> {
        self.specs
            .iter()
            .map(|s| GateRecord {
                name: s.name.to_string(),
                radices: s.operand_radices.clone(),
                duration_ns: s.duration_ns,
                fidelity: s.fidelity,
            })
            .collect()
    }
}

static LIBRARY: LazyLock<GateLibrary> = LazyLock::new(GateLibrary::build);

pub fn library() -> &'static GateLibrary {
    &LIBRARY
}

pub fn duration_of(name: &str) -> Result<f64> {
    Ok(library().get(name)?.duration_ns)
}

/// Default success probability; noise configurations may override it.
pub fn fidelity_of(name: &str) -> Result<f64> {
    Ok(library().get(name)?.fidelity)
}

pub fn unitary_of(name: &str) -> Result<Matrix> {
    Ok(library().get(name)?.unitary.clone())
}

/// Finds the library gate of `family` realizing the given operand locations.
///
/// `operands` lists `(device, slot)` per logical operand; `radix_of` reports the
/// current radix of each device. Operand symmetries of the family are honoured,
/// so e.g. `CZ` between slot 1 of `a` and slot 0 of `b` resolves to `CZ^{01}` with
/// devices `[b, a]`.
pub fn find_gate(
    family: Family,
    operands: &[(usize, u8)],
    radix_of: impl Fn(usize) -> Radix,
) -> Option<Placement> {
    let lib = library();
    for spec in lib.specs.iter().filter(|s| s.family == family) {
        if spec.assignment.len() != operands.len() {
            continue;
        }
        'perm: for perm in family.symmetries() {
            let mut devices: Vec<Option<usize>> = vec![None; spec.operand_radices.len()];
            for (k, &(pos, slot)) in spec.assignment.iter().enumerate() {
                let (device, actual_slot) = operands[perm[k]];
                if actual_slot != slot || radix_of(device) != spec.operand_radices[pos] {
                    continue 'perm;
                }
                match devices[pos] {
                    Some(d) if d != device => continue 'perm,
                    _ => devices[pos] = Some(device),
                }
            }
            let devices: Vec<usize> = match devices.into_iter().collect::<Option<Vec<_>>>() {
                Some(d) => d,
                None => continue,
            };
            let distinct = devices.iter().enumerate().all(|(i, d)| !devices[..i].contains(d));
            if distinct {
                return Some(Placement { spec, devices });
            }
        }
    }
    None
}

impl fmt::Display for Radix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_error};

    #[test]
    fn encoding_examples() {
        assert_eq!(encode_level(0, 0), 0);
        assert_eq!(encode_level(1, 0), 2);
        assert_eq!(encode_level(1, 1), 3);
        for level in 0..4 {
            let (a, b) = decode_level(level);
            assert_eq!(encode_level(a, b), level);
        }
    }

    #[test]
    fn duration_and_fidelity_examples() {
        assert_eq!(duration_of("CX_2").unwrap(), 251.0);
        assert_eq!(duration_of("CCZ^{01q}").unwrap(), 264.0);
        assert_eq!(duration_of("SWAP^{00}").unwrap(), 916.0);
        assert_eq!(fidelity_of("CX^0").unwrap(), 0.999);
        assert_eq!(fidelity_of("iToffoli_3").unwrap(), 0.99);
        assert_eq!(fidelity_of("CX_2").unwrap(), 0.99);
        assert!(matches!(duration_of("CCX^{9,9}"), Err(Error::UnknownGate(_))));
    }

    // Brute-force reference: enumerate levels, decode slot bits by hand.
    fn level_swap(pairs: &[(usize, usize)]) -> Matrix {
        let mut perm: Vec<usize> = (0..4).collect();
        for &(a, b) in pairs {
            perm.swap(a, b);
        }
        linalg::permutation(&perm)
    }

    #[test]
    fn lift_examples() {
        let x = OneQubitOp::X.matrix();
        let lifted = lift(&x, &[Radix::Ququart], &[(0, 1)]).unwrap();
        assert_eq!(max_abs_diff(&lifted, &level_swap(&[(0, 1), (2, 3)])), 0.0);

        let cx0 = lift(&cx(), &[Radix::Ququart], &[(0, 1), (0, 0)]).unwrap();
        assert_eq!(max_abs_diff(&cx0, &level_swap(&[(1, 3)])), 0.0);

        let id = lift(&linalg::identity(1), &[Radix::Qubit], &[]).unwrap();
        assert_eq!(max_abs_diff(&id, &linalg::identity(2)), 0.0);
    }

    #[test]
    fn lift_rejects_bad_assignments() {
        let x = OneQubitOp::X.matrix();
        assert!(matches!(
            lift(&cx(), &[Radix::Ququart], &[(0, 0), (0, 0)]),
            Err(Error::DuplicateSlot { .. })
        ));
        assert!(matches!(lift(&x, &[Radix::Qubit], &[(0, 1)]), Err(Error::InvalidAssignment(_))));
        assert!(matches!(
            lift(&cx(), &[Radix::Ququart], &[(0, 0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn named_unitaries() {
        assert_eq!(max_abs_diff(&unitary_of("SWAP^in").unwrap(), &level_swap(&[(1, 2)])), 0.0);
        assert_eq!(max_abs_diff(&unitary_of("CX_2").unwrap(), &cx()), 0.0);
        assert_eq!(max_abs_diff(&unitary_of("CX^0").unwrap(), &level_swap(&[(1, 3)])), 0.0);
        assert_eq!(max_abs_diff(&unitary_of("CX^1").unwrap(), &level_swap(&[(2, 3)])), 0.0);

        // CCZ^{01q}: index = 2*level + qubit; only (level 3, qubit 1) picks up -1.
        let ccz = unitary_of("CCZ^{01q}").unwrap();
        for i in 0..8 {
            let expected = if i == 7 { -1.0 } else { 1.0 };
            assert_eq!(ccz[(i, i)], c(expected, 0.0));
        }
    }

    #[test]
    fn every_named_unitary_is_unitary() {
        for spec in library().specs() {
            assert!(unitarity_error(&spec.unitary) < 1e-12, "{}", spec.name);
            let dim: usize = spec.operand_radices.iter().map(|r| r.dim()).product();
            assert_eq!(spec.unitary.nrows(), dim, "{}", spec.name);
        }
    }

    #[test]
    fn enc_examples() {
        let enc = enc_unitary();
        // |1>_A|0>_B -> |0>_A|2>_B
        assert_eq!(enc[(2, 4)], ONE);
        assert_eq!(enc[(0, 0)], ONE);
        let round = linalg::dagger(&enc).dot(&enc);
        assert_eq!(max_abs_diff(&round, &linalg::identity(16)), 0.0);
        // the library gate is the restriction to a donor in {|0>, |1>}
        let restricted = unitary_of("ENC").unwrap();
        for r in 0..8 {
            for col in 0..8 {
                assert_eq!(restricted[(r, col)], enc[(r, col)]);
            }
        }
    }

    #[test]
    fn find_gate_uses_symmetry() {
        let radix = |_| Radix::Ququart;
        let p = find_gate(Family::Cz, &[(7, 1), (3, 0)], radix).unwrap();
        assert_eq!(p.spec.name, "CZ^{01}");
        assert_eq!(p.devices, vec![3, 7]);

        let mixed = |d| if d == 1 { Radix::Qubit } else { Radix::Ququart };
        let p = find_gate(Family::Ccx, &[(0, 1), (1, 0), (0, 0)], mixed).unwrap();
        assert_eq!(p.spec.name, "CCX^{1q0}");
        let p = find_gate(Family::Cx, &[(1, 0), (0, 1)], mixed).unwrap();
        assert_eq!(p.spec.name, "CX^{q1}");
        assert!(find_gate(Family::Ccz, &[(0, 0), (1, 0), (2, 0)], radix).is_none());
    }
}
