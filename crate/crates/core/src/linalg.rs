//! Dense eigensolvers used across the crate.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues (ascending) of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut vals: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigenpairs of a real symmetric matrix, sorted by ascending eigenvalue.
/// Column `k` of the returned matrix is the eigenvector for `values[k]`.
pub fn symmetric_eigh(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = m.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigenvalues (ascending) of a real symmetric matrix.
pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_hermitian_spectrum() {
        // sigma_y has eigenvalues -1, +1
        let i = Complex64::i();
        let m = DMatrix::from_row_slice(2, 2, &[0.0.into(), -i, i, 0.0.into()]);
        let v = hermitian_eigenvalues(&m);
        assert!((v[0] + 1.0).abs() < 1e-12 && (v[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_eigh_sorted() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, vecs) = symmetric_eigh(m);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        assert!((vecs[(0, 0)].abs() - vecs[(1, 0)].abs()).abs() < 1e-12);
    }
}
