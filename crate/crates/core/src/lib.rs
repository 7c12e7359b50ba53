//! Compiler and noisy trajectory simulator for qubits packed into four-level
//! (ququart) devices.

pub mod benchmarks;
pub mod circuit;
pub mod compiler;
pub mod error;
pub mod estimator;
pub mod gates;
pub mod linalg;
pub mod noise;
pub mod simulator;
pub mod topology;

pub use benchmarks::BenchmarkSpec;
pub use circuit::{GateKind, LogicalCircuit, LogicalGate, PhysicalCircuit, PhysicalInstruction, Schedule};
pub use compiler::{compile, compile_on, CompileReport, Compiled, Strategy};
pub use error::{Error, Result};
pub use estimator::{total_eps, EpsReport};
pub use gates::{GateSpec, OneQubitOp, Radix};
pub use noise::NoiseConfig;
pub use simulator::{average_fidelity, FidelityReport, MixedRadixState, TrajectoryConfig};
