//! Small dense complex-matrix helpers shared by the gate library and simulator.

use ndarray::Array2;
use num_complex::Complex64;

pub type Matrix = Array2<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    Array2::from_shape_fn((dim, dim), |(r, col)| if r == col { ONE } else { ZERO })
}

pub fn from_rows(rows: &[&[Complex64]]) -> Matrix {
    let n = rows.len();
    Array2::from_shape_fn((n, rows[0].len()), |(r, col)| rows[r][col])
}

pub fn diagonal(entries: &[Complex64]) -> Matrix {
    let n = entries.len();
    Array2::from_shape_fn((n, n), |(r, col)| if r == col { entries[r] } else { ZERO })
}

/// Permutation matrix sending basis state `j` to `perm[j]`.
pub fn permutation(perm: &[usize]) -> Matrix {
    let n = perm.len();
    let mut m = Array2::from_elem((n, n), ZERO);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = ONE;
    }
    m
}

pub fn dagger(m: &Matrix) -> Matrix {
    m.t().mapv(|z| z.conj())
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    Array2::from_shape_fn((ar * br, ac * bc), |(r, col)| {
        a[(r / br, col / bc)] * b[(r % br, col % bc)]
    })
}

pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.dim(), b.dim(), "matrix shapes differ");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |U†U - 1|` over all entries.
pub fn unitarity_error(m: &Matrix) -> f64 {
    let prod = dagger(m).dot(m);
    max_abs_diff(&prod, &identity(m.nrows()))
}

/// Distance between `a` and `b` after removing the best global phase.
pub fn phase_insensitive_diff(a: &Matrix, b: &Matrix) -> f64 {
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    if overlap.norm() < 1e-300 {
        return max_abs_diff(a, b);
    }
    let phase = overlap / overlap.norm();
    max_abs_diff(&a.mapv(|z| z * phase), b)
}

/// Product of matrices applied in circuit order: `ops[0]` acts first.
pub fn circuit_product<'a>(dim: usize, ops: impl IntoIterator<Item = &'a Matrix>) -> Matrix {
    ops.into_iter().fold(identity(dim), |acc, m| m.dot(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&identity(2), &identity(4));
        assert_eq!(max_abs_diff(&k, &identity(8)), 0.0);
    }

    #[test]
    fn permutation_moves_basis_states() {
        let p = permutation(&[1, 2, 0]);
        // column 0 has its 1 at row 1
        assert_eq!(p[(1, 0)], ONE);
        assert_eq!(p[(0, 2)], ONE);
        assert!(unitarity_error(&p) < 1e-15);
    }

    #[test]
    fn global_phase_is_ignored() {
        let a = diagonal(&[ONE, I]);
        let b = a.mapv(|z| z * c(0.0, -1.0));
        assert!(phase_insensitive_diff(&a, &b) < 1e-15);
        assert!(max_abs_diff(&a, &b) > 0.5);
    }
}
