//! Dense complex linear algebra for two-qubit systems.
//!
//! Basis ordering is lexicographic, `(|00>, |01>, |10>, |11>)`, with the left
//! tensor factor as subsystem A.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{domain, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance for state normalization and unit trace.
pub const NORM_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest entrywise modulus of `a - b`. Panics if shapes differ.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn is_hermitian(a: &ComplexMatrix, tol: f64) -> bool {
    a.is_square() && max_abs_diff(a, &a.adjoint()) < tol
}

/// Kronecker product; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// The Pauli matrices `sigma_0` (identity) through `sigma_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// `sigma_k` for `k` in `0..=3`.
    pub fn from_index(k: usize) -> Option<Pauli> {
        Self::ALL.get(k).copied()
    }

    pub fn matrix(self) -> ComplexMatrix {
        let entries = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix::from_row_slice(2, 2, &entries)
    }

    pub fn label(self) -> &'static str {
        match self {
            Pauli::I => "s0",
            Pauli::X => "s1",
            Pauli::Y => "s2",
            Pauli::Z => "s3",
        }
    }
}

/// A normalized pure state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
}

impl PureState {
    /// Wraps `amplitudes`, rejecting vectors whose norm deviates from 1 by more
    /// than [`NORM_TOL`].
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return domain("state vector must be non-empty");
        }
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() >= NORM_TOL {
            return domain(format!("state not normalized: <psi|psi> = {norm_sq}"));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalize(amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return domain("cannot normalize a zero or non-finite vector");
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return domain(format!(
                "basis index {index} out of range for dimension {dim}"
            ));
        }
        let mut v = ComplexVector::zeros(dim);
        v[index] = ONE;
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> ComplexVector {
        self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return domain("inner product of states with different dimensions");
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `op |psi>` as a raw (not necessarily normalized) vector.
    pub fn apply(&self, op: &ComplexMatrix) -> Result<ComplexVector> {
        check_op_dim(op, self.dim())?;
        Ok(op * &self.amplitudes)
    }
}

fn check_op_dim(op: &ComplexMatrix, dim: usize) -> Result<()> {
    if op.nrows() != dim || op.ncols() != dim {
        return domain(format!(
            "operator is {}x{}, state has dimension {dim}",
            op.nrows(),
            op.ncols()
        ));
    }
    Ok(())
}

/// `sqrt(lambda)|00> + sqrt(1 - lambda)|11>`.
pub fn schmidt_state(lambda: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&lambda) {
        return domain(format!("lambda = {lambda} outside [0, 1]"));
    }
    let mut v = ComplexVector::zeros(4);
    v[0] = Complex64::new(lambda.sqrt(), 0.0);
    v[3] = Complex64::new((1.0 - lambda).sqrt(), 0.0);
    PureState::new(v)
}

/// `<psi|A|psi>`.
pub fn expectation(state: &PureState, op: &ComplexMatrix) -> Result<Complex64> {
    let image = state.apply(op)?;
    Ok(state.amplitudes.dotc(&image))
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !is_hermitian(&matrix, HERMITIAN_TOL) {
            return domain("density operator must be Hermitian");
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() >= NORM_TOL || tr.im.abs() >= NORM_TOL {
            return domain(format!("density operator trace is {tr}, expected 1"));
        }
        let min_eig = matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -NORM_TOL {
            return domain(format!("density operator has eigenvalue {min_eig} < 0"));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `tr(rho A)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<Complex64> {
        check_op_dim(op, self.dim())?;
        Ok((&self.matrix * op).trace())
    }
}

/// `|psi><psi|`.
pub fn density(state: &PureState) -> DensityOperator {
    let v = state.amplitudes();
    DensityOperator {
        matrix: v * v.adjoint(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state of one qubit of a two-qubit density operator.
pub fn partial_trace(rho: &DensityOperator, keep: Subsystem) -> Result<DensityOperator> {
    if rho.dim() != 4 {
        return domain(format!(
            "partial trace needs a 2x2 bipartite operator, got dimension {}",
            rho.dim()
        ));
    }
    let m = rho.matrix();
    // index = 2 * a + b
    let reduced = ComplexMatrix::from_fn(2, 2, |r, c| match keep {
        Subsystem::A => (0..2).map(|b| m[(2 * r + b, 2 * c + b)]).sum(),
        Subsystem::B => (0..2).map(|a| m[(2 * a + r, 2 * a + c)]).sum(),
    });
    Ok(DensityOperator { matrix: reduced })
}

/// Ordered list of Hermitian generators of equal dimension, each with a label.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    generators: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl GeneratorSet {
    pub fn new(generators: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        if generators.is_empty() {
            return domain("generator set must be non-empty");
        }
        if generators.len() != labels.len() {
            return domain("one label per generator required");
        }
        let dim = generators[0].nrows();
        for (g, label) in generators.iter().zip(&labels) {
            if g.nrows() != dim || g.ncols() != dim {
                return domain(format!("generator {label} is not {dim}x{dim}"));
            }
            if !is_hermitian(g, HERMITIAN_TOL) {
                return domain(format!("generator {label} is not Hermitian"));
            }
        }
        Ok(Self { generators, labels })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, j: usize) -> Option<&ComplexMatrix> {
        self.generators.get(j)
    }
}

/// `(s1 x s0, s2 x s0, s3 x s0, s0 x s1, s0 x s2, s0 x s3)`.
pub fn pauli_generators() -> GeneratorSet {
    let id = Pauli::I.matrix();
    let sides = [Subsystem::A, Subsystem::B];
    let mut generators = Vec::with_capacity(6);
    let mut labels = Vec::with_capacity(6);
    for side in sides {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let (g, label) = match side {
                Subsystem::A => (kron(&p.matrix(), &id), format!("{}(x)s0", p.label())),
                Subsystem::B => (kron(&id, &p.matrix()), format!("s0(x){}", p.label())),
            };
            generators.push(g);
            labels.push(label);
        }
    }
    GeneratorSet::new(generators, labels).expect("Pauli generators are Hermitian")
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subsystem::A => f.write_str("A"),
            Subsystem::B => f.write_str("B"),
        }
    }
}
