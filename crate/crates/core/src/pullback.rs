//! Pullback of the Fubini-Study tensor onto a group orbit.
//!
//! For a fiducial state `psi` and Hermitian generators `X_1..X_m` the orbit
//! tensor has coefficients
//!
//! ```text
//! kappa_jk = <psi|X_j X_k|psi> - <psi|X_j|psi><psi|X_k|psi>
//! ```
//!
//! which form a Hermitian matrix. We split it entrywise as
//! `kappa = eta + i omega` with `eta = Re(kappa)` symmetric and
//! `omega = Im(kappa)` antisymmetric. With this convention the monotone
//! normalizations `<eta|eta>/12` and `<omega|omega>/4` are exactly 1/3 and 1
//! on separable Schmidt states, and no extra sign is needed for `omega`.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::par;
use crate::qcore::{
    is_hermitian, pauli_generators, schmidt_state, ComplexMatrix, ComplexVector, GeneratorSet,
    PureState, HERMITIAN_TOL,
};

/// Relative singular-value cutoff used for orbit-dimension diagnostics.
pub const RANK_TOL: f64 = 1e-9;

/// Which fiducial state a tensor was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fiducial {
    /// Member of the Schmidt family with the given `lambda`.
    Schmidt(f64),
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PullbackTensor {
    kappa: ComplexMatrix,
    eta: DMatrix<f64>,
    omega: DMatrix<f64>,
    fiducial: Fiducial,
}

impl PullbackTensor {
    pub fn kappa(&self) -> &ComplexMatrix {
        &self.kappa
    }

    pub fn eta(&self) -> &DMatrix<f64> {
        &self.eta
    }

    pub fn omega(&self) -> &DMatrix<f64> {
        &self.omega
    }

    pub fn fiducial(&self) -> Fiducial {
        self.fiducial
    }

    /// `lambda` for Schmidt fiducials.
    pub fn lambda(&self) -> Option<f64> {
        match self.fiducial {
            Fiducial::Schmidt(l) => Some(l),
            Fiducial::Custom => None,
        }
    }

    pub fn size(&self) -> usize {
        self.kappa.nrows()
    }

    fn with_fiducial(mut self, fiducial: Fiducial) -> Self {
        self.fiducial = fiducial;
        self
    }
}

/// Coefficients `kappa_jk` for an arbitrary fiducial state and generator list.
///
/// Works for any number `m` of generators and returns an `m x m` tensor.
pub fn compute_pullback(state: &PureState, gens: &GeneratorSet) -> Result<PullbackTensor> {
    if state.dim() != gens.dim() {
        return domain(format!(
            "state dimension {} does not match generator dimension {}",
            state.dim(),
            gens.dim()
        ));
    }
    // Hermiticity of the generators is enforced by GeneratorSet::new.
    let psi = state.amplitudes();
    let images: Vec<ComplexVector> = gens.generators().iter().map(|g| g * psi).collect();
    // <X_j> is real for Hermitian X_j; dropping the rounding residue keeps
    // kappa exactly Hermitian.
    let means: Vec<f64> = images.iter().map(|v| psi.dotc(v).re).collect();
    let m = gens.len();
    let kappa = ComplexMatrix::from_fn(m, m, |j, k| {
        images[j].dotc(&images[k]) - Complex64::new(means[j] * means[k], 0.0)
    });
    let (eta, omega) = decompose(&kappa)?;
    Ok(PullbackTensor {
        kappa,
        eta,
        omega,
        fiducial: Fiducial::Custom,
    })
}

/// Pullback for the Schmidt state at `lambda` with the six Pauli generators.
pub fn schmidt_pullback(lambda: f64) -> Result<PullbackTensor> {
    let state = schmidt_state(lambda)?;
    Ok(compute_pullback(&state, &pauli_generators())?.with_fiducial(Fiducial::Schmidt(lambda)))
}

/// Pullback tensors over a grid of Schmidt parameters.
pub fn schmidt_pullback_grid(lambdas: &[f64]) -> Result<Vec<PullbackTensor>> {
    par::map(lambdas, |&l| schmidt_pullback(l))
        .into_iter()
        .collect()
}

/// Splits a Hermitian matrix into its entrywise real and imaginary parts.
pub fn decompose(kappa: &ComplexMatrix) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if !is_hermitian(kappa, HERMITIAN_TOL) {
        return domain("decompose expects a Hermitian matrix");
    }
    Ok((kappa.map(|z| z.re), kappa.map(|z| z.im)))
}

/// `exp(i t X)` for Hermitian `X`, via its eigendecomposition.
pub fn expm_i_hermitian(x: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !is_hermitian(x, HERMITIAN_TOL) {
        return domain("matrix exponential needs a Hermitian generator");
    }
    let eig = SymmetricEigen::new(x.clone());
    let phases = eig.eigenvalues.map(|d| Complex64::from_polar(1.0, t * d));
    let v = &eig.eigenvectors;
    Ok(v * ComplexMatrix::from_diagonal(&phases) * v.adjoint())
}

/// Finite-difference Fubini-Study pullback along the one-parameter subgroups
/// `exp(i t X_j)` through `state`.
///
/// Each tangent is the central difference
/// `v_j = (exp(i h X_j) psi - exp(-i h X_j) psi) / 2h` and the result is
/// `<v_j|v_k> - <v_j|psi><psi|v_k>`, which converges to
/// [`compute_pullback`] as `O(h^2)`.
pub fn fd_pullback_oracle(state: &PureState, gens: &GeneratorSet, h: f64) -> Result<ComplexMatrix> {
    if !(h.is_finite() && h > 0.0) {
        return domain(format!("step h = {h} must be positive"));
    }
    if state.dim() != gens.dim() {
        return domain("state and generator dimensions differ");
    }
    let psi = state.amplitudes();
    let tangents = gens
        .generators()
        .iter()
        .map(|x| {
            let fwd = expm_i_hermitian(x, h)? * psi;
            let bwd = expm_i_hermitian(x, -h)? * psi;
            Ok((fwd - bwd).unscale(2.0 * h))
        })
        .collect::<Result<Vec<ComplexVector>>>()?;
    let overlaps: Vec<Complex64> = tangents.iter().map(|v| v.dotc(psi)).collect();
    let m = gens.len();
    Ok(ComplexMatrix::from_fn(m, m, |j, k| {
        tangents[j].dotc(&tangents[k]) - overlaps[j] * overlaps[k].conj()
    }))
}

/// Singular values of a real matrix, descending.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = a
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Number of singular values above `tol` times the largest one.
///
/// For `eta` this is the dimension of the local-unitary orbit through the
/// fiducial state: 3 for maximally entangled, 4 for separable, 5 otherwise.
pub fn eta_rank(eta: &DMatrix<f64>, tol: f64) -> usize {
    let sv = singular_values(eta);
    let Some(&largest) = sv.first() else {
        return 0;
    };
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * largest).count()
}

/// `omega` split along the two `SU(2)` factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaBlocks {
    pub block_a: Matrix3<f64>,
    pub block_b: Matrix3<f64>,
    /// Rows from the A generators, columns from the B generators.
    pub cross: Matrix3<f64>,
}

impl OmegaBlocks {
    pub fn cross_max_abs(&self) -> f64 {
        self.cross.amax()
    }
}

pub fn omega_blocks(omega: &DMatrix<f64>) -> Result<OmegaBlocks> {
    if omega.shape() != (6, 6) {
        return domain(format!("omega_blocks expects 6x6, got {:?}", omega.shape()));
    }
    let asym = (omega + omega.transpose()).amax();
    if asym > HERMITIAN_TOL {
        return domain("omega must be antisymmetric");
    }
    let block = |r: usize, c: usize| Matrix3::from_fn(|j, k| omega[(r + j, c + k)]);
    Ok(OmegaBlocks {
        block_a: block(0, 0),
        block_b: block(3, 3),
        cross: block(0, 3),
    })
}
