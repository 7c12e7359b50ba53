use crate::circuit::{asap_moments, LogicalGate};

/// Symmetric look-ahead interaction weights between logical qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable {
    n: usize,
    w: Vec<f64>,
}

impl WeightTable {
    pub fn zeros(n: usize) -> Self {
        WeightTable { n, w: vec![0.0; n * n] }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    /// `W(i) = sum_j w(i, j)`.
    pub fn total(&self, i: usize) -> f64 {
        self.w[i * self.n..(i + 1) * self.n].iter().sum()
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }
}

/// `w(i, j) = sum_t o(i, j, t) / t` over 1-indexed ASAP moments `t`, where
/// `o` is 1 when `i` and `j` share a gate in moment `t`.
pub fn interaction_weights(gates: &[LogicalGate], n_qubits: usize) -> WeightTable {
    let moments = asap_moments(gates, n_qubits);
    let mut table = WeightTable::zeros(n_qubits);
    for (g, m) in gates.iter().zip(moments) {
        let inv = 1.0 / (m + 1) as f64;
        for (a, &i) in g.qubits.iter().enumerate() {
            for &j in &g.qubits[a + 1..] {
                table.w[i * n_qubits + j] += inv;
                table.w[j * n_qubits + i] += inv;
            }
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_pair_decays_with_moment() {
        let gates = vec![LogicalGate::cx(0, 1), LogicalGate::cx(0, 1)];
        let w = interaction_weights(&gates, 2);
        assert_eq!(w.get(0, 1), 1.5);
        assert_eq!(w.get(1, 0), 1.5);
    }

    #[test]
    fn empty_and_three_qubit() {
        let w = interaction_weights(&[], 3);
        assert!((0..3).all(|i| w.total(i) == 0.0));
        let w = interaction_weights(&[LogicalGate::ccx(0, 1, 2)], 3);
        assert_eq!((w.get(0, 1), w.get(0, 2), w.get(1, 2)), (1.0, 1.0, 1.0));
        assert_eq!(w.total(0), 2.0);
    }
}
