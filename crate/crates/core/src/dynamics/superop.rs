//! Row-major vectorized Liouvillian in compressed sparse row form.
//!
//! With vec(rho)[i d + j] = rho[i, j], the map rho -> A rho B has entries
//! (i d + j, k d + l) = A[i, k] B[l, j].

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Clone, Debug)]
pub(crate) struct SparseSuperOp {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

fn nonzeros(m: &DMatrix<Complex64>) -> Vec<(usize, usize, Complex64)> {
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v != Complex64::new(0.0, 0.0) {
                out.push((i, j, v));
            }
        }
    }
    out
}

fn identity_entries(d: usize) -> Vec<(usize, usize, Complex64)> {
    (0..d).map(|i| (i, i, Complex64::new(1.0, 0.0))).collect()
}

/// Accumulates coefficient * (rho -> A rho B) terms.
#[derive(Default)]
pub(crate) struct SuperOpBuilder {
    dim: usize,
    triplets: Vec<(usize, usize, Complex64)>,
}

impl SuperOpBuilder {
    pub fn new(dim: usize) -> Self {
        Self { dim, triplets: Vec::new() }
    }

    fn sandwich(
        &mut self,
        a: &[(usize, usize, Complex64)],
        b: &[(usize, usize, Complex64)],
        coeff: Complex64,
    ) {
        let d = self.dim;
        for &(i, k, av) in a {
            for &(l, j, bv) in b {
                self.triplets.push((i * d + j, k * d + l, coeff * av * bv));
            }
        }
    }

    /// -i [H, rho]
    pub fn add_hamiltonian(&mut self, h: &DMatrix<Complex64>) {
        let hn = nonzeros(h);
        let id = identity_entries(self.dim);
        let i = Complex64::i();
        self.sandwich(&hn, &id, -i);
        self.sandwich(&id, &hn, i);
    }

    /// L rho L^dag - (L^dag L rho + rho L^dag L) / 2
    pub fn add_dissipator(&mut self, l: &DMatrix<Complex64>) {
        let ld = l.adjoint();
        let ldl = &ld * l;
        let (ln, ldn, ldln) = (nonzeros(l), nonzeros(&ld), nonzeros(&ldl));
        let id = identity_entries(self.dim);
        let half = Complex64::new(-0.5, 0.0);
        self.sandwich(&ln, &ldn, Complex64::new(1.0, 0.0));
        self.sandwich(&ldln, &id, half);
        self.sandwich(&id, &ldln, half);
    }

    pub fn build(mut self) -> SparseSuperOp {
        let n = self.dim * self.dim;
        self.triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(self.triplets.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(self.triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.triplets {
            if last == Some((r, c)) {
                *vals.last_mut().expect("entry exists") += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseSuperOp { row_ptr, cols, vals }
    }
}

impl SparseSuperOp {
    /// y += scale * S x
    pub fn apply_add(&self, scale: f64, x: &[Complex64], y: &mut [Complex64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[idx] * x[self.cols[idx]];
            }
            *out += acc * scale;
        }
    }

    /// y = S x
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        self.apply_add(1.0, x, y);
    }

    #[cfg(test)]
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }
}
