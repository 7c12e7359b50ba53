//! Qudit noise model: generalized-Pauli depolarizing errors sized to the
//! operand radices and amplitude damping with level-scaled decay rates.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{GateClass, GateSpec};
use crate::linalg::{Matrix, ONE, ZERO};

/// Amplitude-damping lifetime of the first excited level.
pub const DEFAULT_T1_NS: f64 = 163_450.0;

/// `X^a Z^b` for `a, b in 0..d`, in lexicographic `(a, b)` order; index 0 is
/// the identity.
pub fn generalized_paulis(d: usize) -> Result<Vec<Matrix>> {
    if d != 2 && d != 4 {
        return Err(Error::UnsupportedDimension(d));
    }
    let omega = Complex64::from_polar(1.0, TAU / d as f64);
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            // (X^a Z^b)|j> = w^{bj} |j + a>
            let mut m = Matrix::from_elem((d, d), ZERO);
            for j in 0..d {
                m[((j + a) % d, j)] = omega.powu((b * j) as u32);
            }
            out.push(m);
        }
    }
    Ok(out)
}

/// Apply `X^a Z^b` (index `a*d + b`) to a single level, returning the new
/// level and phase. Used by the simulator to avoid dense products.
pub fn pauli_action(d: usize, index: usize, level: usize) -> (usize, Complex64) {
    let (a, b) = (index / d, index % d);
    let phase = Complex64::from_polar(1.0, TAU * (b * level) as f64 / d as f64);
    ((level + a) % d, phase)
}

/// Per-operand dimensions over which a gate's depolarizing error is drawn.
pub fn error_support(gate: &GateSpec) -> Vec<usize> {
    gate.operand_radices.iter().map(|r| r.dim()).collect()
}

/// Draws a depolarizing outcome: `None` (no error) with probability `1 - eps`,
/// otherwise a uniformly chosen non-identity Pauli product, returned as one
/// Pauli index per operand.
pub fn sample_gate_error<R: Rng + ?Sized>(rng: &mut R, eps: f64, dims: &[usize]) -> Option<Vec<usize>> {
    if eps <= 0.0 || !rng.random_bool(eps.min(1.0)) {
        return None;
    }
    let total: usize = dims.iter().map(|d| d * d).product();
    let mut k = rng.random_range(1..total);
    let mut out = vec![0; dims.len()];
    for (slot, d) in out.iter_mut().zip(dims).rev() {
        *slot = k % (d * d);
        k /= d * d;
    }
    Some(out)
}

/// Amplitude damping on one `d`-level device over an interval `dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct DampingChannel {
    pub d: usize,
    /// `lambdas[m]` is the decay probability of level `m`; `lambdas[0] = 0`.
    pub lambdas: Vec<f64>,
}

impl DampingChannel {
    /// `lambda_m = 1 - exp(-m * r_m * dt / t1)` with `r_1 = 1` and
    /// `r_m = upper_rate_multiplier` for `m >= 2`.
    pub fn new(d: usize, dt: f64, t1: f64, upper_rate_multiplier: f64) -> Self {
        let lambdas = (0..d)
            .map(|m| {
                let rate = if m >= 2 { upper_rate_multiplier } else { 1.0 };
                -(-(m as f64) * rate * dt / t1).exp_m1()
            })
            .collect();
        DampingChannel { d, lambdas }
    }

    /// `K_0 = diag(1, sqrt(1 - lambda_1), ...)` and `K_m = sqrt(lambda_m) |0><m|`.
    pub fn kraus(&self) -> Vec<Matrix> {
        let mut k0 = Matrix::from_elem((self.d, self.d), ZERO);
        for (m, l) in self.lambdas.iter().enumerate() {
            k0[(m, m)] = ONE * (1.0 - l).sqrt();
        }
        let mut out = vec![k0];
        for m in 1..self.d {
            let mut km = Matrix::from_elem((self.d, self.d), ZERO);
            km[(0, m)] = ONE * self.lambdas[m].sqrt();
            out.push(km);
        }
        out
    }

    /// Picks a Kraus branch given the level populations of the device:
    /// branch `m >= 1` with probability `lambda_m * P(m)`, else branch 0.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, populations: &[f64]) -> usize {
        let mut u: f64 = rng.random();
        for (m, (l, pop)) in self.lambdas.iter().zip(populations).enumerate().skip(1) {
            let p = l * pop;
            if u < p {
                return m;
            }
            u -= p;
        }
        0
    }
}

pub fn damping_kraus(d: usize, dt: f64, t1: f64) -> Vec<Matrix> {
    DampingChannel::new(d, dt, t1, 1.0).kraus()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub t1_base_ns: f64,
    pub single_device_fidelity: f64,
    pub multi_device_fidelity: f64,
    /// Per-gate fidelity by library name; takes precedence over the class values.
    pub fidelity_overrides: BTreeMap<String, f64>,
    /// Scales the error probability of every gate touching a four-level operand.
    pub ququart_error_multiplier: f64,
    /// Scales the decay rate of levels 2 and 3.
    pub coherence_multiplier: f64,
    pub damping: bool,
    pub gate_errors: bool,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            t1_base_ns: DEFAULT_T1_NS,
            single_device_fidelity: GateClass::SingleDevice.default_fidelity(),
            multi_device_fidelity: GateClass::MultiDevice.default_fidelity(),
            fidelity_overrides: BTreeMap::new(),
            ququart_error_multiplier: 1.0,
            coherence_multiplier: 1.0,
            damping: true,
            gate_errors: true,
        }
    }
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        NoiseConfig { damping: false, gate_errors: false, ..Default::default() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: NoiseConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        NoiseConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        let fid_ok = |f: f64| f > 0.0 && f <= 1.0;
        if self.t1_base_ns.is_nan() || self.t1_base_ns <= 0.0 {
            return bad("t1_base_ns must be positive");
        }
        if !fid_ok(self.single_device_fidelity) || !fid_ok(self.multi_device_fidelity) {
            return bad("fidelities must lie in (0, 1]");
        }
        if let Some((name, _)) = self.fidelity_overrides.iter().find(|(_, &f)| !fid_ok(f)) {
            return bad(&format!("override for {name} must lie in (0, 1]"));
        }
        let non_negative = |x: f64| x >= 0.0;
        if !non_negative(self.ququart_error_multiplier) || !non_negative(self.coherence_multiplier) {
            return bad("multipliers must be non-negative");
        }
        Ok(())
    }

    /// Success probability of `gate` under this configuration.
    pub fn fidelity(&self, gate: &GateSpec) -> f64 {
        1.0 - self.error_probability(gate)
    }

    pub fn error_probability(&self, gate: &GateSpec) -> f64 {
        let base = self.fidelity_overrides.get(gate.name).copied().unwrap_or(match gate.class {
            GateClass::SingleDevice => self.single_device_fidelity,
            GateClass::MultiDevice => self.multi_device_fidelity,
        });
        let eps = 1.0 - base;
        if gate.touches_ququart() {
            (eps * self.ququart_error_multiplier).min(1.0)
        } else {
            eps
        }
    }

    /// Error probability actually sampled by the simulator.
    pub fn sampled_error(&self, gate: &GateSpec) -> f64 {
        if self.gate_errors {
            self.error_probability(gate)
        } else {
            0.0
        }
    }
}
