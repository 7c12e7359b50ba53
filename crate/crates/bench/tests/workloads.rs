use waltz::{compile, Strategy};
use waltz_bench::workloads;

#[test]
fn every_workload_compiles_under_every_strategy() {
    for (name, circuit) in workloads().unwrap() {
        for strategy in Strategy::all() {
            assert!(compile(&circuit, strategy).is_ok(), "{name} {strategy}");
        }
    }
}
