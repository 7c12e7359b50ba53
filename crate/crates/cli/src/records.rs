use std::collections::BTreeMap;

use serde::Serialize;

use waltz::simulator::FidelityReport;
use waltz::{average_fidelity, compile, total_eps, LogicalCircuit, NoiseConfig, Strategy, TrajectoryConfig};

use crate::CliError;

#[derive(Clone, Copy, Debug)]
pub struct SimOptions {
    pub n_states: usize,
    pub trajectories: usize,
    pub seed: u64,
    pub max_dimension: u128,
}

/// Compilation, estimate and (optionally) simulation of one circuit.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub circuit: String,
    pub strategy: String,
    pub n_qubits: usize,
    pub n_devices: usize,
    pub n_states: usize,
    pub trajectories: usize,
    pub seed: u64,
    pub mean_fidelity: Option<f64>,
    pub std_error: Option<f64>,
    pub duration_ns: f64,
    pub swap_count: usize,
    pub gate_counts: BTreeMap<String, usize>,
    pub gate_eps: f64,
    pub coherence_eps: f64,
    pub total_eps: f64,
}

impl RunRecord {
    pub fn evaluate(
        label: &str,
        circuit: &LogicalCircuit,
        strategy: Strategy,
        noise: &NoiseConfig,
        options: &SimOptions,
    ) -> Result<Self, CliError> {
        let compiled = compile(circuit, strategy)?;
        let eps = total_eps(&compiled.circuit, &compiled.schedule, noise)?;
        let fidelity: Option<FidelityReport> = if options.n_states == 0 {
            None
        } else {
            let config = TrajectoryConfig {
                n_states: options.n_states,
                trajectories_per_state: options.trajectories,
                seed: options.seed,
                max_dimension: options.max_dimension,
            };
            Some(average_fidelity(circuit, &compiled.circuit, noise, &config)?)
        };
        Ok(RunRecord {
            circuit: label.to_string(),
            strategy: strategy.to_string(),
            n_qubits: circuit.n_qubits,
            n_devices: compiled.circuit.n_devices,
            n_states: options.n_states,
            trajectories: options.trajectories,
            seed: options.seed,
            mean_fidelity: fidelity.map(|f| f.mean),
            std_error: fidelity.map(|f| f.std_error),
            duration_ns: compiled.schedule.duration_ns,
            swap_count: compiled.circuit.swap_count(),
            gate_counts: eps.histogram,
            gate_eps: eps.gate_eps,
            coherence_eps: eps.coherence_eps,
            total_eps: eps.total_eps,
        })
    }
}
