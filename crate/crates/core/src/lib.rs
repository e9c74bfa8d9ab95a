//! Pullback of the Fubini-Study metric onto local-unitary orbits of two-qubit
//! pure states, entanglement and purity monotones built from inner products on
//! the resulting tensor fields, and the measurement cost of estimating them.
//!
//! The modules build on each other bottom-up:
//!
//! * [`qcore`]: small dense complex linear algebra, Pauli generators, the
//!   Schmidt state family, density operators and partial traces.
//! * [`pullback`]: the coefficient matrix `kappa_jk` of the pulled-back
//!   tensor, its split into `eta` (real symmetric) and `omega` (real
//!   antisymmetric), a finite-difference oracle and rank diagnostics.
//! * [`monotones`]: Frobenius inner products, tensor-power monotones
//!   `epsilon_n` and `mu_n`, and symmetric-power invariants via permanents.
//! * [`estimation`]: quantum Fisher information, symmetric logarithmic
//!   derivative checks and measurement-count curves.
//!
//! With the default `parallel` feature, grid sweeps and brute-force
//! enumerations run on rayon; without it everything is sequential.

pub mod error;
pub mod estimation;
pub mod monotones;
mod par;
pub mod pullback;
pub mod qcore;

pub use error::{Error, Result};
