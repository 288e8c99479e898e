//! Operator algebra on truncated composite Hilbert spaces.
//!
//! Composite indices are row-major: slot 0 is the leftmost tensor factor and
//! the most significant digit of the flat index.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Ordered subsystem dimensions of a composite space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceDescriptor {
    dims: Vec<usize>,
}

impl SpaceDescriptor {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDimension("space needs at least one slot".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(format!(
                "subsystem dimension {d} is below 2"
            )));
        }
        Ok(Self { dims })
    }

    pub fn single(dim: usize) -> Result<Self> {
        Self::new(vec![dim])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_slots(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Splits a flat index into per-slot indices.
    pub fn unflatten(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in self.dims.iter().enumerate().rev() {
            out[slot] = index % d;
            index /= d;
        }
        out
    }

    /// Joins per-slot indices into a flat index.
    pub fn flatten(&self, indices: &[usize]) -> usize {
        indices
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.dims)
    }
}

/// Dense complex operator acting on a [`SpaceDescriptor`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumOperator {
    space: SpaceDescriptor,
    matrix: DMatrix<Complex64>,
}

impl QuantumOperator {
    pub fn new(space: SpaceDescriptor, matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = space.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but space {} has dimension {n}",
                matrix.nrows(),
                matrix.ncols(),
                space
            )));
        }
        Ok(Self { space, matrix })
    }

    /// Builds a single-slot operator from a real matrix given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("rows must form a square matrix"));
        }
        let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::new(SpaceDescriptor::single(n)?, m)
    }

    pub fn identity(space: SpaceDescriptor) -> Self {
        let n = space.total_dim();
        Self { space, matrix: DMatrix::identity(n, n) }
    }

    pub fn zeros(space: SpaceDescriptor) -> Self {
        let n = space.total_dim();
        Self { space, matrix: DMatrix::zeros(n, n) }
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn dims(&self) -> &[usize] {
        self.space.dims()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.adjoint() }
    }

    /// Largest entry of |M - M^dagger|.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() < tol
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { space: self.space.clone(), matrix: &self.matrix * factor }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Largest modulus of any entry.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Applies the operator to a state vector.
    pub fn apply(&self, ket: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if ket.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "ket of length {} against operator of dimension {}",
                ket.len(),
                self.dim()
            )));
        }
        Ok(&self.matrix * ket)
    }

    fn assert_same_space(&self, other: &Self, what: &str) {
        assert_eq!(
            self.space, other.space,
            "operator {what} on mismatched spaces {} and {}",
            self.space, other.space
        );
    }
}

impl Add for &QuantumOperator {
    type Output = QuantumOperator;
    fn add(self, rhs: &QuantumOperator) -> QuantumOperator {
        self.assert_same_space(rhs, "sum");
        QuantumOperator { space: self.space.clone(), matrix: &self.matrix + &rhs.matrix }
    }
}

impl Sub for &QuantumOperator {
    type Output = QuantumOperator;
    fn sub(self, rhs: &QuantumOperator) -> QuantumOperator {
        self.assert_same_space(rhs, "difference");
        QuantumOperator { space: self.space.clone(), matrix: &self.matrix - &rhs.matrix }
    }
}

impl Mul for &QuantumOperator {
    type Output = QuantumOperator;
    fn mul(self, rhs: &QuantumOperator) -> QuantumOperator {
        self.assert_same_space(rhs, "product");
        QuantumOperator { space: self.space.clone(), matrix: &self.matrix * &rhs.matrix }
    }
}

impl Mul<f64> for &QuantumOperator {
    type Output = QuantumOperator;
    fn mul(self, rhs: f64) -> QuantumOperator {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Mul<Complex64> for &QuantumOperator {
    type Output = QuantumOperator;
    fn mul(self, rhs: Complex64) -> QuantumOperator {
        self.scale(rhs)
    }
}

impl Neg for &QuantumOperator {
    type Output = QuantumOperator;
    fn neg(self) -> QuantumOperator {
        self.scale(-ONE)
    }
}

/// Bosonic ladder operator flavours.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderKind {
    Annihilate,
    Create,
    Number,
}

/// Truncated bosonic operator on `dim` Fock levels.
pub fn ladder_operator(dim: usize, kind: LadderKind) -> Result<QuantumOperator> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!("Fock dimension {dim} is below 2")));
    }
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for n in 1..dim {
        let amp = Complex64::new((n as f64).sqrt(), 0.0);
        match kind {
            LadderKind::Annihilate => m[(n - 1, n)] = amp,
            LadderKind::Create => m[(n, n - 1)] = amp,
            LadderKind::Number => m[(n, n)] = Complex64::new(n as f64, 0.0),
        }
    }
    QuantumOperator::new(SpaceDescriptor::single(dim)?, m)
}

/// Two-level operators in the basis |0> = ground, |1> = excited.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliKind {
    X,
    Y,
    Z,
    /// sigma_+ = |1><0|, raises ground to excited.
    Plus,
    /// sigma_- = |0><1|, lowers excited to ground.
    Minus,
    Identity,
}

pub fn pauli_operator(kind: PauliKind) -> QuantumOperator {
    let i = Complex64::i();
    let o = ZERO;
    let l = ONE;
    let entries = match kind {
        PauliKind::X => [o, l, l, o],
        PauliKind::Y => [o, -i, i, o],
        PauliKind::Z => [l, o, o, -l],
        PauliKind::Plus => [o, o, l, o],
        PauliKind::Minus => [o, l, o, o],
        PauliKind::Identity => [l, o, o, l],
    };
    QuantumOperator {
        space: SpaceDescriptor { dims: vec![2] },
        matrix: DMatrix::from_row_slice(2, 2, &entries),
    }
}

/// Kronecker product in list order.
pub fn tensor_product(ops: &[&QuantumOperator]) -> Result<QuantumOperator> {
    let (first, rest) = ops
        .split_first()
        .ok_or_else(|| invalid("tensor product of an empty operator list"))?;
    let mut dims = first.dims().to_vec();
    let mut matrix = first.matrix.clone();
    for op in rest {
        dims.extend_from_slice(op.dims());
        matrix = matrix.kronecker(&op.matrix);
    }
    QuantumOperator::new(SpaceDescriptor::new(dims)?, matrix)
}

/// Places `op` on `slot` of `space`, identity elsewhere.
pub fn embed_operator(
    op: &QuantumOperator,
    slot: usize,
    space: &SpaceDescriptor,
) -> Result<QuantumOperator> {
    let dims = space.dims();
    if slot >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "slot {slot} out of range for space {space}"
        )));
    }
    if op.dims() != [dims[slot]] {
        return Err(Error::DimensionMismatch(format!(
            "operator on {:?} cannot sit on slot {slot} of dimension {}",
            op.dims(),
            dims[slot]
        )));
    }
    let left: usize = dims[..slot].iter().product();
    let right: usize = dims[slot + 1..].iter().product();
    let mut m = DMatrix::<Complex64>::identity(left, left).kronecker(&op.matrix);
    m = m.kronecker(&DMatrix::<Complex64>::identity(right, right));
    QuantumOperator::new(space.clone(), m)
}

/// Product basis ket |i_0, i_1, ...>.
pub fn basis_ket(space: &SpaceDescriptor, levels: &[usize]) -> Result<DVector<Complex64>> {
    if levels.len() != space.num_slots() {
        return Err(Error::DimensionMismatch(format!(
            "{} levels given for space {space}",
            levels.len()
        )));
    }
    for (slot, (&l, &d)) in levels.iter().zip(space.dims()).enumerate() {
        if l >= d {
            return Err(invalid(format!("level {l} exceeds slot {slot} dimension {d}")));
        }
    }
    let mut ket = DVector::from_element(space.total_dim(), ZERO);
    ket[space.flatten(levels)] = ONE;
    Ok(ket)
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: SpaceDescriptor,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub const TRACE_TOL: f64 = 1e-9;
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const POSITIVITY_TOL: f64 = 1e-8;

    /// Validates and wraps a matrix.
    pub fn new(space: SpaceDescriptor, matrix: DMatrix<Complex64>) -> Result<Self> {
        let op = QuantumOperator::new(space, matrix)?;
        let tr = op.trace();
        if (tr - ONE).norm() > Self::TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let herm = op.hermitian_deviation();
        if herm > Self::HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let min = op.eigenvalues()[0];
        if min < -Self::POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { space: op.space, matrix: op.matrix })
    }

    pub(crate) fn new_unchecked(space: SpaceDescriptor, matrix: DMatrix<Complex64>) -> Self {
        Self { space, matrix }
    }

    /// |psi><psi| for a (not necessarily normalised) ket.
    pub fn from_ket(space: SpaceDescriptor, ket: &DVector<Complex64>) -> Result<Self> {
        if ket.len() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "ket of length {} for space {space}",
                ket.len()
            )));
        }
        let norm = ket.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let psi = ket / Complex64::new(norm, 0.0);
        Ok(Self { matrix: &psi * psi.adjoint(), space })
    }

    /// Pure product basis state.
    pub fn basis_state(space: SpaceDescriptor, levels: &[usize]) -> Result<Self> {
        let ket = basis_ket(&space, levels)?;
        Self::from_ket(space, &ket)
    }

    pub fn maximally_mixed(space: SpaceDescriptor) -> Self {
        let n = space.total_dim();
        let m = DMatrix::identity(n, n) * Complex64::new(1.0 / n as f64, 0.0);
        Self { space, matrix: m }
    }

    /// Diagonal state with the given populations (normalised here).
    pub fn diagonal(space: SpaceDescriptor, populations: &[f64]) -> Result<Self> {
        if populations.len() != space.total_dim() {
            return Err(Error::DimensionMismatch("population vector length".into()));
        }
        if populations.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(invalid("populations must be finite and non-negative"));
        }
        let total: f64 = populations.iter().sum();
        if total <= 0.0 {
            return Err(invalid("populations sum to zero"));
        }
        let diag = DVector::from_iterator(
            populations.len(),
            populations.iter().map(|&p| Complex64::new(p / total, 0.0)),
        );
        Ok(Self { space, matrix: DMatrix::from_diagonal(&diag) })
    }

    /// rho_A (x) rho_B (x) ...
    pub fn product(parts: &[&DensityMatrix]) -> Result<Self> {
        let ops: Vec<QuantumOperator> = parts.iter().map(|p| p.as_operator()).collect();
        let refs: Vec<&QuantumOperator> = ops.iter().collect();
        let op = tensor_product(&refs)?;
        Ok(Self { space: op.space, matrix: op.matrix })
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn as_operator(&self) -> QuantumOperator {
        QuantumOperator { space: self.space.clone(), matrix: self.matrix.clone() }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        // Tr(rho rho) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// Diagonal entries (real parts), i.e. basis populations.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }
}

/// Reduced state on the kept slots (returned in ascending slot order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(invalid("partial trace needs at least one kept slot"));
    }
    let space = rho.space();
    let nslots = space.num_slots();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&s| s >= nslots) {
        return Err(Error::DimensionMismatch(format!(
            "slot {bad} out of range for space {space}"
        )));
    }
    if kept.len() == nslots {
        return Ok(rho.clone());
    }
    let traced: Vec<usize> = (0..nslots).filter(|s| !kept.contains(s)).collect();
    let kept_space = SpaceDescriptor::new(kept.iter().map(|&s| space.dims()[s]).collect())?;
    let traced_space = SpaceDescriptor::new(traced.iter().map(|&s| space.dims()[s]).collect())?;

    let n_keep = kept_space.total_dim();
    let n_trace = traced_space.total_dim();
    let mut full = vec![0usize; nslots];
    let index_of = |full: &mut Vec<usize>, k: &[usize], t: &[usize]| {
        for (&slot, &v) in kept.iter().zip(k) {
            full[slot] = v;
        }
        for (&slot, &v) in traced.iter().zip(t) {
            full[slot] = v;
        }
        space.flatten(full)
    };

    let mut out = DMatrix::from_element(n_keep, n_keep, ZERO);
    for i in 0..n_keep {
        let ki = kept_space.unflatten(i);
        for j in 0..n_keep {
            let kj = kept_space.unflatten(j);
            let mut acc = ZERO;
            for t in 0..n_trace {
                let tt = traced_space.unflatten(t);
                let row = index_of(&mut full, &ki, &tt);
                let col = index_of(&mut full, &kj, &tt);
                acc += rho.matrix[(row, col)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix::new_unchecked(kept_space, out))
}

/// Tr(op rho).
pub fn expectation_value(op: &QuantumOperator, rho: &DensityMatrix) -> Result<Complex64> {
    if op.space() != rho.space() {
        return Err(Error::DimensionMismatch(format!(
            "operator on {} against state on {}",
            op.space(),
            rho.space()
        )));
    }
    Ok(trace_of_product(op.matrix(), rho.matrix()))
}

pub(crate) fn trace_of_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}
