//! Closed-form expected probability of success.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{PhysicalCircuit, Schedule};
use crate::error::Result;
use crate::gates::library;
use crate::noise::NoiseConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsReport {
    pub gate_eps: f64,
    pub coherence_eps: f64,
    pub total_eps: f64,
    pub device_coherence: Vec<f64>,
    pub histogram: BTreeMap<String, usize>,
}

/// Product of the success rates of every instruction.
pub fn gate_eps(circuit: &PhysicalCircuit, noise: &NoiseConfig) -> Result<f64> {
    let lib = library();
    circuit
        .instructions
        .iter()
        .map(|inst| Ok(1.0 - noise.sampled_error(lib.get(&inst.gate)?)))
        .product()
}

/// `exp(-(t_1 + 3 m t_3) / T1)` for one device, with `m` the coherence
/// multiplier of the upper levels.
pub fn device_coherence(t1: f64, t3: f64, noise: &NoiseConfig) -> f64 {
    if !noise.damping {
        return 1.0;
    }
    (-(t1 + 3.0 * noise.coherence_multiplier * t3) / noise.t1_base_ns).exp()
}

/// Per-device no-decay probabilities; devices that never hold a qubit give 1.
pub fn device_coherence_factors(circuit: &PhysicalCircuit, schedule: &Schedule, noise: &NoiseConfig) -> Vec<f64> {
    (0..schedule.devices.len())
        .map(|d| {
            let empty = circuit.initial_occupancy.get(d).copied().unwrap_or(0) == 0 && schedule.devices[d].busy.is_empty();
            if empty {
                return 1.0;
            }
            let (t1, t3) = schedule.level_occupancy_times(d);
            device_coherence(t1, t3, noise)
        })
        .collect()
}

pub fn coherence_eps(circuit: &PhysicalCircuit, schedule: &Schedule, noise: &NoiseConfig) -> f64 {
    device_coherence_factors(circuit, schedule, noise).iter().product()
}

pub fn total_eps(circuit: &PhysicalCircuit, schedule: &Schedule, noise: &NoiseConfig) -> Result<EpsReport> {
    let gate = gate_eps(circuit, noise)?;
    let device_coherence = device_coherence_factors(circuit, schedule, noise);
    let coherence: f64 = device_coherence.iter().product();
    Ok(EpsReport {
        gate_eps: gate,
        coherence_eps: coherence,
        total_eps: gate * coherence,
        device_coherence,
        histogram: circuit.histogram(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{asap_schedule, PhysicalInstruction};
    use crate::gates::Radix;

    fn circuit(n: usize, occupancy: Vec<u8>, gates: &[(&str, &[usize], &[u8])]) -> PhysicalCircuit {
        PhysicalCircuit {
            n_devices: n,
            radices: vec![Radix::Qubit; n],
            sim_dims: vec![2; n],
            initial_occupancy: occupancy,
            instructions: gates
                .iter()
                .map(|(g, d, o)| PhysicalInstruction::new(g, d.to_vec(), None, o.to_vec()).unwrap())
                .collect(),
            ..Default::default()
        }
    }

    #[test]
    fn empty_circuit_is_certain() {
        let c = circuit(2, vec![1, 1], &[]);
        let s = asap_schedule(&c);
        let r = total_eps(&c, &s, &NoiseConfig::default()).unwrap();
        assert_eq!((r.gate_eps, r.coherence_eps, r.total_eps), (1.0, 1.0, 1.0));
    }

    #[test]
    fn one_cx_costs_its_fidelity() {
        let c = circuit(2, vec![1, 1], &[("CX_2", &[0, 1], &[1, 1])]);
        assert!((gate_eps(&c, &NoiseConfig::default()).unwrap() - 0.99).abs() < 1e-15);
    }

    #[test]
    fn coherence_closed_forms() {
        let cfg = NoiseConfig::default();
        let e = (-1.0f64).exp();
        assert!((device_coherence(cfg.t1_base_ns, 0.0, &cfg) - e).abs() < 1e-15);
        assert!((device_coherence(0.0, cfg.t1_base_ns / 3.0, &cfg) - e).abs() < 1e-15);
        assert_eq!(device_coherence(1e9, 1e9, &NoiseConfig::noiseless()), 1.0);
    }

    #[test]
    fn product_law() {
        let cfg = NoiseConfig::default();
        let a = circuit(2, vec![1, 1], &[("CX_2", &[0, 1], &[1, 1])]);
        let b = circuit(2, vec![1, 1], &[("SWAP_2", &[0, 1], &[1, 1]), ("CX_2", &[1, 0], &[1, 1])]);
        let ab = circuit(
            4,
            vec![1, 1, 1, 1],
            &[("CX_2", &[0, 1], &[1, 1]), ("SWAP_2", &[2, 3], &[1, 1]), ("CX_2", &[3, 2], &[1, 1])],
        );
        let eps = |c: &PhysicalCircuit| total_eps(c, &asap_schedule(c), &cfg).unwrap().total_eps;
        // padding the shorter circuit to the joint duration is the only coupling
        let sa = asap_schedule(&a);
        let sab = asap_schedule(&ab);
        let pad = (-(sab.duration_ns - sa.duration_ns) * 2.0 / cfg.t1_base_ns).exp();
        assert!((eps(&ab) - eps(&a) * pad * eps(&b)).abs() < 1e-12);
    }
}
