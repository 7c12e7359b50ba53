use std::collections::HashSet;

use proptest::prelude::{any, prop_assert, proptest, ProptestConfig};
use proptest::strategy::Strategy as _;
use waltz::benchmarks::{gen_cnu, gen_cuccaro, gen_qram, gen_select, gen_synthetic};
use waltz::compiler::Encoding;
use waltz::gates::library;
use waltz::topology::mesh_for;
use waltz::{average_fidelity, compile, total_eps, LogicalCircuit, NoiseConfig, Radix, Strategy, TrajectoryConfig};

fn check_structure(circuit: &LogicalCircuit, strategy: Strategy) {
    let compiled = compile(circuit, strategy).unwrap_or_else(|e| panic!("{strategy}: {e}"));
    let physical = &compiled.circuit;
    let mesh = mesh_for(physical.n_devices);
    let lib = library();
    let mut encoded: HashSet<usize> = HashSet::new();
    for inst in &physical.instructions {
        let spec = lib.get(&inst.gate).unwrap();
        assert!(inst.occupancy.iter().all(|&o| o <= 2));
        if inst.devices.len() == 2 {
            assert!(mesh.adjacent(inst.devices[0], inst.devices[1]), "{} on {:?}", inst.gate, inst.devices);
        }
        match strategy.encoding {
            Encoding::QubitOnly => assert!(spec.operand_radices.iter().all(|&r| r == Radix::Qubit), "{}", inst.gate),
            Encoding::MixedRadix => {
                if inst.gate == "ENC" {
                    assert!(encoded.insert(inst.devices[1]));
                } else if inst.gate == "ENC†" {
                    assert!(encoded.remove(&inst.devices[1]));
                } else {
                    for (&d, &r) in inst.devices.iter().zip(&spec.operand_radices) {
                        assert_eq!(r == Radix::Ququart, encoded.contains(&d), "{} outside encode window", inst.gate);
                    }
                }
            }
            Encoding::FullQuquart => assert!(spec.operand_radices.iter().all(|&r| r == Radix::Ququart)),
        }
    }
    assert!(encoded.is_empty());
    let mut nodes = physical.final_layout.clone();
    nodes.sort_unstable();
    nodes.dedup();
    assert_eq!(nodes.len(), circuit.n_qubits);
    let eps = total_eps(physical, &compiled.schedule, &NoiseConfig::default()).unwrap();
    assert!(eps.total_eps > 0.0 && eps.total_eps <= 1.0);
    assert!((eps.total_eps - eps.gate_eps * eps.coherence_eps).abs() < 1e-15);
}

#[test]
fn benchmark_families_compile_under_every_strategy() {
    let mut circuits = vec![];
    circuits.extend((2..=7).map(|n| gen_cnu(n).unwrap()));
    circuits.extend((1..=5).map(|n| gen_cuccaro(n).unwrap()));
    circuits.extend((1..=3).map(|n| gen_qram(n).unwrap()));
    circuits.extend([(2, 4), (3, 3), (3, 6)].map(|(m, n)| gen_select(m, n, 3).unwrap()));
    circuits.extend([(11, 100, 0.6), (16, 60, 0.3), (9, 40, 0.0)].map(|(n, g, f)| gen_synthetic(n, g, f, 7).unwrap()));
    for circuit in &circuits {
        for strategy in Strategy::all() {
            check_structure(circuit, strategy);
        }
    }
}

#[test]
fn every_named_strategy_preserves_small_benchmarks() {
    let noiseless = NoiseConfig::noiseless();
    let config = TrajectoryConfig { n_states: 10, ..Default::default() };
    for circuit in [gen_cnu(3).unwrap(), gen_cuccaro(2).unwrap(), gen_qram(1).unwrap(), gen_select(2, 2, 1).unwrap()] {
        for strategy in Strategy::all() {
            let compiled = compile(&circuit, strategy).unwrap();
            let r = average_fidelity(&circuit, &compiled.circuit, &noiseless, &config).unwrap();
            assert!(r.mean > 1.0 - 1e-9, "{strategy}: {}", r.mean);
        }
    }
}

fn strategies() -> impl proptest::strategy::Strategy<Value = Strategy> {
    (0..Strategy::all().len()).prop_map(|i| Strategy::all()[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_circuits_keep_structure(n in 3usize..12, gates in 1usize..40, f in 0.0f64..=1.0, seed in any::<u64>(), s in strategies()) {
        let circuit = gen_synthetic(n, gates, f, seed).unwrap();
        check_structure(&circuit, s);
    }

    #[test]
    fn random_small_circuits_are_equivalent(n in 3usize..7, gates in 1usize..16, f in 0.0f64..=1.0, seed in any::<u64>(), s in strategies()) {
        let circuit = gen_synthetic(n, gates, f, seed).unwrap();
        let compiled = compile(&circuit, s).unwrap();
        let config = TrajectoryConfig { n_states: 4, seed, ..Default::default() };
        let r = average_fidelity(&circuit, &compiled.circuit, &NoiseConfig::noiseless(), &config).unwrap();
        prop_assert!(r.mean > 1.0 - 1e-9, "{} {}", s, r.mean);
    }
}
