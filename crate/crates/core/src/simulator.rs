//! Trajectory-method statevector simulation over mixed-radix registers.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{GateKind, LogicalCircuit, PhysicalCircuit};
use crate::error::{Error, Result};
use crate::gates::{library, Family, Radix};
use crate::linalg::{Matrix, ZERO};
use crate::noise::{pauli_action, sample_gate_error, DampingChannel, NoiseConfig};

/// Default refusal threshold on the register dimension.
pub const DEFAULT_MAX_DIMENSION: u128 = 1 << 24;

/// Amplitudes over `Π dims`, device 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedRadixState {
    dims: Vec<usize>,
    strides: Vec<usize>,
    amps: Vec<Complex64>,
}

fn strides_for(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    strides
}

impl MixedRadixState {
    pub fn basis(dims: &[usize], index: usize) -> Self {
        let total: usize = dims.iter().product();
        let mut amps = vec![ZERO; total];
        amps[index] = Complex64::new(1.0, 0.0);
        MixedRadixState { dims: dims.to_vec(), strides: strides_for(dims), amps }
    }

    pub fn from_amplitudes(dims: &[usize], amps: Vec<Complex64>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return Err(Error::DimensionMismatch { expected: total, found: amps.len() });
        }
        Ok(MixedRadixState { dims: dims.to_vec(), strides: strides_for(dims), amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    /// Applies `matrix` to the listed devices (first listed = most significant).
    pub fn apply_unitary(&mut self, matrix: &Matrix, devices: &[usize]) -> Result<()> {
        let kernel = Kernel::new(&self.dims, devices, matrix)?;
        kernel.apply(self);
        Ok(())
    }

    /// Probability of each level of `device`.
    pub fn populations(&self, device: usize) -> Vec<f64> {
        let (stride, d) = (self.strides[device], self.dims[device]);
        let mut p = vec![0.0; d];
        for (i, a) in self.amps.iter().enumerate() {
            p[(i / stride) % d] += a.norm_sqr();
        }
        p
    }

    /// Applies Kraus branch `branch` of `channel` to `device` and renormalizes.
    pub fn apply_damping(&mut self, device: usize, channel: &DampingChannel, branch: usize) {
        let (stride, d) = (self.strides[device], self.dims[device]);
        if branch == 0 {
            let scale: Vec<f64> = channel.lambdas.iter().map(|l| (1.0 - l).sqrt()).collect();
            for (i, a) in self.amps.iter_mut().enumerate() {
                *a *= scale[(i / stride) % d];
            }
        } else {
            for i in 0..self.amps.len() {
                let level = (i / stride) % d;
                if level == 0 {
                    self.amps[i] = self.amps[i + branch * stride];
                } else {
                    self.amps[i] = ZERO;
                }
            }
        }
        self.normalize();
    }

    /// Applies generalized Pauli `index` of dimension `d_err` to the lowest
    /// `d_err` levels of `device`.
    pub fn apply_pauli(&mut self, device: usize, d_err: usize, index: usize) {
        if index == 0 {
            return;
        }
        let (stride, d) = (self.strides[device], self.dims[device]);
        let old = self.amps.clone();
        for (i, a) in old.into_iter().enumerate() {
            let level = (i / stride) % d;
            if level >= d_err {
                continue;
            }
            let (to, phase) = pauli_action(d_err, index, level);
            let j = i - level * stride + to * stride;
            self.amps[j] = phase * a;
        }
    }
}

/// A gate matrix prepared for repeated application to one register layout.
#[derive(Clone, Debug)]
struct Kernel {
    offsets: Vec<usize>,
    rows: Vec<Vec<(usize, Complex64)>>,
    rest: Vec<(usize, usize)>,
}

impl Kernel {
    fn new(dims: &[usize], devices: &[usize], matrix: &Matrix) -> Result<Self> {
        let strides = strides_for(dims);
        let sub: Vec<usize> = devices.iter().map(|&d| dims[d]).collect();
        let size: usize = sub.iter().product();
        if matrix.nrows() != size || matrix.ncols() != size {
            return Err(Error::DimensionMismatch { expected: size, found: matrix.nrows() });
        }
        let sub_strides = strides_for(&sub);
        let offsets = (0..size)
            .map(|k| devices.iter().enumerate().map(|(i, &d)| (k / sub_strides[i]) % sub[i] * strides[d]).sum())
            .collect();
        let rows = (0..size)
            .map(|r| (0..size).filter(|&c| matrix[(r, c)] != ZERO).map(|c| (c, matrix[(r, c)])).collect())
            .collect();
        let rest = (0..dims.len()).filter(|d| !devices.contains(d)).map(|d| (strides[d], dims[d])).collect();
        Ok(Kernel { offsets, rows, rest })
    }

    fn apply(&self, state: &mut MixedRadixState) {
        let size = self.offsets.len();
        let mut buf = vec![ZERO; size];
        let mut digits = vec![0usize; self.rest.len()];
        let mut base = 0usize;
        loop {
            for (b, &o) in buf.iter_mut().zip(&self.offsets) {
                *b = state.amps[base + o];
            }
            for (r, row) in self.rows.iter().enumerate() {
                state.amps[base + self.offsets[r]] = row.iter().map(|&(c, v)| v * buf[c]).sum();
            }
            // odometer over the untouched devices, least significant last
            let mut k = self.rest.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                let (stride, dim) = self.rest[k];
                digits[k] += 1;
                base += stride;
                if digits[k] < dim {
                    break;
                }
                base -= stride * dim;
                digits[k] = 0;
            }
        }
    }
}

/// Embeds a matrix over `from` operand dimensions into `to` dimensions
/// (`to[i] >= from[i]`), acting as identity on the extra levels.
fn embed(matrix: &Matrix, from: &[usize], to: &[usize]) -> Matrix {
    if from == to {
        return matrix.clone();
    }
    let size: usize = to.iter().product();
    let from_strides = strides_for(from);
    let to_strides = strides_for(to);
    let inner = |k: usize| -> Option<usize> {
        let mut idx = 0;
        for i in 0..to.len() {
            let digit = (k / to_strides[i]) % to[i];
            if digit >= from[i] {
                return None;
            }
            idx += digit * from_strides[i];
        }
        Some(idx)
    };
    let outer = |idx: usize| -> usize { (0..from.len()).map(|i| (idx / from_strides[i]) % from[i] * to_strides[i]).sum() };
    let mut out = Matrix::from_elem((size, size), ZERO);
    for k in 0..size {
        match inner(k) {
            None => out[(k, k)] = Complex64::new(1.0, 0.0),
            Some(c) => {
                for r in 0..matrix.nrows() {
                    let v = matrix[(r, c)];
                    if v != ZERO {
                        out[(outer(r), k)] = v;
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Step {
    devices: Vec<usize>,
    kernel: Kernel,
    start: f64,
    end: f64,
    eps: f64,
    error_dims: Vec<usize>,
}

/// A physical circuit prepared for repeated noisy simulation.
#[derive(Clone, Debug)]
pub struct Program {
    dims: Vec<usize>,
    steps: Vec<Step>,
    duration: f64,
    noise: NoiseConfig,
}

impl Program {
    pub fn new(circuit: &PhysicalCircuit, noise: &NoiseConfig, max_dimension: u128) -> Result<Self> {
        let dims = circuit.sim_dims.clone();
        let dimension: u128 = dims.iter().map(|&d| d as u128).product();
        if dimension > max_dimension {
            return Err(Error::SimulationRefused { dimension, ceiling: max_dimension });
        }
        let lib = library();
        let steps = circuit
            .instructions
            .iter()
            .map(|inst| {
                let spec = lib.get(&inst.gate)?;
                let from: Vec<usize> = spec.operand_radices.iter().map(|r| r.dim()).collect();
                let to: Vec<usize> = inst.devices.iter().map(|&d| dims[d]).collect();
                if from.iter().zip(&to).any(|(f, t)| f > t) {
                    return Err(Error::DimensionMismatch { expected: from.iter().product(), found: to.iter().product() });
                }
                let matrix = embed(&spec.unitary_with(inst.op)?, &from, &to);
                Ok(Step {
                    devices: inst.devices.clone(),
                    kernel: Kernel::new(&dims, &inst.devices, &matrix)?,
                    start: inst.start_ns,
                    end: inst.end_ns(),
                    eps: noise.sampled_error(spec),
                    error_dims: from,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Program { dims, steps, duration: circuit.duration_ns(), noise: noise.clone() })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn damp<R: Rng + ?Sized>(&self, state: &mut MixedRadixState, device: usize, dt: f64, rng: &mut R) {
        if !self.noise.damping || dt <= 0.0 {
            return;
        }
        let channel = DampingChannel::new(self.dims[device], dt, self.noise.t1_base_ns, self.noise.coherence_multiplier);
        let branch = channel.sample(rng, &state.populations(device));
        state.apply_damping(device, &channel, branch);
    }

    /// One trajectory: idle damping before each gate on its devices, the
    /// gate, then a sampled depolarizing error; trailing idle is damped too.
    pub fn run<R: Rng + ?Sized>(&self, state: &mut MixedRadixState, rng: &mut R) {
        let mut last_end = vec![0.0f64; self.dims.len()];
        for step in &self.steps {
            for &d in &step.devices {
                self.damp(state, d, step.start - last_end[d], rng);
            }
            step.kernel.apply(state);
            if let Some(paulis) = sample_gate_error(rng, step.eps, &step.error_dims) {
                for ((&d, &e), &p) in step.devices.iter().zip(&step.error_dims).zip(&paulis) {
                    state.apply_pauli(d, e, p);
                }
            }
            for &d in &step.devices {
                last_end[d] = step.end;
            }
        }
        for (d, &end) in last_end.iter().enumerate() {
            self.damp(state, d, self.duration - end, rng);
        }
    }
}

/// Register index of every logical basis state (qubit 0 most significant)
/// under `layout`, with `radices` giving each device's encoding.
pub fn embedding(layout: &[(usize, u8)], radices: &[Radix], dims: &[usize]) -> Vec<usize> {
    let n = layout.len();
    let strides = strides_for(dims);
    (0..1usize << n)
        .map(|k| {
            layout
                .iter()
                .enumerate()
                .map(|(i, &(dev, slot))| {
                    let bit = (k >> (n - 1 - i)) & 1;
                    let level = match (radices[dev], slot) {
                        (Radix::Ququart, 0) => 2 * bit,
                        _ => bit,
                    };
                    level * strides[dev]
                })
                .sum()
        })
        .collect()
}

/// Complex-Gaussian vector over `dim` amplitudes, normalized.
pub fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

/// Haar-random state over the full register `Π dims`.
pub fn haar_random_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> MixedRadixState {
    let total = dims.iter().product();
    MixedRadixState::from_amplitudes(dims, haar_vector(total, rng)).expect("length matches")
}

fn logical_matrix(kind: GateKind) -> Matrix {
    let family = match kind {
        GateKind::One(op) => return op.matrix(),
        GateKind::Cx => Family::Cx,
        GateKind::Cz => Family::Cz,
        GateKind::CSdg => Family::CSdg,
        GateKind::Swap => Family::Swap,
        GateKind::Ccx => Family::Ccx,
        GateKind::Ccz => Family::Ccz,
        GateKind::Cswap => Family::Cswap,
        GateKind::IToffoli => Family::IToffoli,
    };
    family.qubit_matrix().expect("fixed qubit gate")
}

/// Noiseless statevector evolution of a logical circuit (qubit 0 most significant).
pub fn simulate_logical(circuit: &LogicalCircuit, input: &[Complex64]) -> Result<Vec<Complex64>> {
    let dims = vec![2; circuit.n_qubits];
    let mut state = MixedRadixState::from_amplitudes(&dims, input.to_vec())?;
    for g in &circuit.gates {
        state.apply_unitary(&logical_matrix(g.kind), &g.qubits)?;
    }
    Ok(state.into_amplitudes())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    pub n_states: usize,
    pub trajectories_per_state: usize,
    pub seed: u64,
    pub max_dimension: u128,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        TrajectoryConfig { n_states: 1000, trajectories_per_state: 1, seed: 0, max_dimension: DEFAULT_MAX_DIMENSION }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl FidelityReport {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            var.sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        FidelityReport { mean, std_error, samples: n }
    }
}

/// Per-input fidelity `|<ideal|noisy>|^2`, averaged over that input's
/// trajectories, for seeded Haar-random logical inputs; input `i` draws from
/// stream `i` of the seed.
pub fn fidelity_samples(
    logical: &LogicalCircuit,
    physical: &PhysicalCircuit,
    noise: &NoiseConfig,
    config: &TrajectoryConfig,
) -> Result<Vec<f64>> {
    let program = Program::new(physical, noise, config.max_dimension)?;
    let enc_in = embedding(&physical.initial_layout, &physical.radices, program.dims());
    let enc_out = embedding(&physical.final_layout, &physical.radices, program.dims());
    (0..config.n_states)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let input = haar_vector(1 << logical.n_qubits, &mut rng);
            let ideal = simulate_logical(logical, &input)?;
            let total: usize = program.dims().iter().product();
            let runs = config.trajectories_per_state.max(1);
            let total_fidelity = (0..runs)
                .map(|_| {
                    let mut amps = vec![ZERO; total];
                    for (k, &idx) in enc_in.iter().enumerate() {
                        amps[idx] = input[k];
                    }
                    let mut state = MixedRadixState::from_amplitudes(program.dims(), amps)?;
                    program.run(&mut state, &mut rng);
                    let overlap: Complex64 =
                        enc_out.iter().zip(&ideal).map(|(&idx, a)| a.conj() * state.amplitudes()[idx]).sum();
                    Ok(overlap.norm_sqr())
                })
                .sum::<Result<f64>>()?;
            Ok(total_fidelity / runs as f64)
        })
        .collect()
}

pub fn average_fidelity(
    logical: &LogicalCircuit,
    physical: &PhysicalCircuit,
    noise: &NoiseConfig,
    config: &TrajectoryConfig,
) -> Result<FidelityReport> {
    if config.n_states == 0 {
        return Err(Error::InvalidParameter("n_states must be at least 1".into()));
    }
    Ok(FidelityReport::from_samples(&fidelity_samples(logical, physical, noise, config)?))
}
