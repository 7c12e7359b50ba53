//! Fixed workloads shared by the criterion benchmarks.

use waltz::benchmarks::{gen_cnu, gen_cuccaro, gen_synthetic};
use waltz::{LogicalCircuit, Result};

/// Named circuits of increasing size used across the benchmark groups.
pub fn workloads() -> Result<Vec<(&'static str, LogicalCircuit)>> {
    Ok(vec![
        ("cnu-5", gen_cnu(3)?),
        ("cnu-9", gen_cnu(5)?),
        ("cuccaro-8", gen_cuccaro(3)?),
        ("synthetic-12", gen_synthetic(12, 60, 0.5, 1)?),
    ])
}
