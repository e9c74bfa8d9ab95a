//! Invariant functions built from inner products on pullback tensor fields.
//!
//! In an orthonormal coframe the inner product of two covariant tensors is
//! the Frobenius pairing of their coefficient arrays, so
//! `<kappa^(x)n | kappa^(x)n> = <kappa|kappa>^n`. Normalizing by `12^n`
//! (symmetric part) and `4^n` (antisymmetric part) gives
//!
//! * `epsilon_n = (<eta|eta>/12)^n`, an entanglement monotone equal to 1 on
//!   the Bell state and `1/3^n` on separable states,
//! * `mu_n = (<omega|omega>/4)^n`, a purity monotone equal to 0 on the Bell
//!   state and 1 on separable states.
//!
//! Symmetrized powers `eta^(v)n` pair through permanents of Kronecker-delta
//! Gram matrices. After diagonalizing `eta` the sum collapses to multiplicity
//! vectors over its eigenvalues, which is what [`sym_inner_closed`] evaluates;
//! [`sym_inner_bruteforce`] keeps the full index enumeration as a reference.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{ComplexField, DMatrix, SymmetricEigen};

use crate::error::{domain, Error, Result};
use crate::par;
use crate::pullback::schmidt_pullback;

/// `2 dim(SU(2) x SU(2))`.
pub const ETA_NORMALIZATION: f64 = 12.0;
/// `dim(S^2 x S^2)`.
pub const OMEGA_NORMALIZATION: f64 = 4.0;

/// Largest number of index tuples the tensor-power enumeration will visit.
pub const TENSOR_POWER_BUDGET: u64 = 100_000_000;
/// Largest matrix handled by the Ryser permanent.
pub const RYSER_MAX_DIM: usize = 12;
/// Largest matrix handled by the factorial-time permanent.
pub const NAIVE_PERMANENT_MAX_DIM: usize = 8;
/// Largest order accepted by the symmetric-power brute force.
pub const SYM_BRUTEFORCE_MAX_ORDER: u32 = 2;
/// Largest order accepted by the multiset closed form.
pub const SYM_CLOSED_MAX_ORDER: u32 = 8;

/// `sum_jk |a_jk|^2`.
pub fn frobenius_inner<T>(a: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64>,
{
    a.iter().map(|x| x.clone().modulus_squared()).sum()
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return domain(format!("lambda = {lambda} outside [0, 1]"));
    }
    Ok(())
}

fn check_order(n: u32) -> Result<()> {
    if n == 0 {
        return domain("tensor order n must be at least 1");
    }
    Ok(())
}

/// `(<eta|eta>/12)^n` for the Schmidt state at `lambda`, from the pullback.
pub fn epsilon_n(lambda: f64, n: u32) -> Result<f64> {
    check_lambda(lambda)?;
    check_order(n)?;
    let t = schmidt_pullback(lambda)?;
    Ok((frobenius_inner(t.eta()) / ETA_NORMALIZATION).powi(n as i32))
}

/// `(<omega|omega>/4)^n` for the Schmidt state at `lambda`, from the pullback.
pub fn mu_n(lambda: f64, n: u32) -> Result<f64> {
    check_lambda(lambda)?;
    check_order(n)?;
    let t = schmidt_pullback(lambda)?;
    Ok((frobenius_inner(t.omega()) / OMEGA_NORMALIZATION).powi(n as i32))
}

/// `(16l^4/3 - 32l^3/3 + 4l^2 + 4l/3 + 1/3)^n`, the polynomial form of
/// [`epsilon_n`].
pub fn epsilon_polynomial(lambda: f64, n: u32) -> f64 {
    let l = lambda;
    let base =
        16.0 * l.powi(4) / 3.0 - 32.0 * l.powi(3) / 3.0 + 4.0 * l * l + 4.0 * l / 3.0 + 1.0 / 3.0;
    base.powi(n as i32)
}

/// `(4l^2 - 4l + 1)^n`, the polynomial form of [`mu_n`].
pub fn mu_polynomial(lambda: f64, n: u32) -> f64 {
    let l = lambda;
    (4.0 * l * l - 4.0 * l + 1.0).powi(n as i32)
}

/// Literal contraction `sum |prod_r c[j_{2r-1}, j_{2r}]|^2` over every index
/// tuple of length `2n`.
///
/// Equals `frobenius_inner(c)^n`; kept as an explicit enumeration so the
/// factorization can be checked rather than assumed.
pub fn tensor_power_inner_bruteforce<T>(coeffs: &DMatrix<T>, n: u32) -> Result<f64>
where
    T: ComplexField<RealField = f64>,
{
    let total = tensor_power_budget(coeffs, n)?;
    Ok(power_contraction_range(coeffs, n as usize, 0..total))
}

/// [`tensor_power_inner_bruteforce`] with the index range split across the
/// rayon pool.
#[cfg(feature = "parallel")]
pub fn tensor_power_inner_bruteforce_par<T>(coeffs: &DMatrix<T>, n: u32) -> Result<f64>
where
    T: ComplexField<RealField = f64>,
{
    const CHUNKS: u64 = 256;
    let total = tensor_power_budget(coeffs, n)?;
    let chunk = total.div_ceil(CHUNKS).max(1);
    let parts = par::map_range(CHUNKS as usize, |i| {
        let start = (i as u64 * chunk).min(total);
        let end = (start + chunk).min(total);
        power_contraction_range(coeffs, n as usize, start..end)
    });
    Ok(parts.into_iter().sum())
}

fn tensor_power_budget<T: ComplexField<RealField = f64>>(c: &DMatrix<T>, n: u32) -> Result<u64> {
    check_order(n)?;
    if !c.is_square() {
        return domain("coefficient matrix must be square");
    }
    let m = c.nrows() as u64;
    match m.checked_pow(2 * n) {
        Some(total) if total <= TENSOR_POWER_BUDGET => Ok(total),
        _ => Err(Error::Resource(format!(
            "{m}^{} index tuples exceed the budget of {TENSOR_POWER_BUDGET}",
            2 * n
        ))),
    }
}

fn power_contraction_range<T>(c: &DMatrix<T>, n: usize, range: std::ops::Range<u64>) -> f64
where
    T: ComplexField<RealField = f64>,
{
    let m = c.nrows() as u64;
    let mut idx = vec![0usize; 2 * n];
    let mut sum = 0.0;
    for t in range {
        let mut rest = t;
        for slot in idx.iter_mut().rev() {
            *slot = (rest % m) as usize;
            rest /= m;
        }
        let mut prod = T::one();
        for r in 0..n {
            prod *= c[(idx[2 * r], idx[2 * r + 1])].clone();
        }
        sum += prod.modulus_squared();
    }
    sum
}

/// Matrix permanent by Ryser's inclusion-exclusion formula, visiting column
/// subsets in Gray-code order so each step updates the row sums by one column.
pub fn permanent(a: &DMatrix<f64>) -> Result<f64> {
    let k = square_dim(a)?;
    if k > RYSER_MAX_DIM {
        return Err(Error::Resource(format!(
            "permanent of a {k}x{k} matrix exceeds the {RYSER_MAX_DIM}x{RYSER_MAX_DIM} limit"
        )));
    }
    let row_major: Vec<f64> = a.transpose().iter().copied().collect();
    Ok(ryser(k, &row_major))
}

/// Permanent by summing over all `k!` permutations.
pub fn permanent_naive(a: &DMatrix<f64>) -> Result<f64> {
    let k = square_dim(a)?;
    if k > NAIVE_PERMANENT_MAX_DIM {
        return Err(Error::Resource(format!(
            "naive permanent limited to {NAIVE_PERMANENT_MAX_DIM}x{NAIVE_PERMANENT_MAX_DIM}"
        )));
    }
    fn rec(a: &DMatrix<f64>, row: usize, used: u32) -> f64 {
        let k = a.nrows();
        if row == k {
            return 1.0;
        }
        (0..k)
            .filter(|&col| used & (1 << col) == 0)
            .map(|col| a[(row, col)] * rec(a, row + 1, used | (1 << col)))
            .sum()
    }
    Ok(rec(a, 0, 0))
}

fn square_dim(a: &DMatrix<f64>) -> Result<usize> {
    if !a.is_square() {
        return domain(format!(
            "permanent needs a square matrix, got {:?}",
            a.shape()
        ));
    }
    Ok(a.nrows())
}

/// Ryser on a row-major `k x k` slice.
fn ryser(k: usize, a: &[f64]) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut row_sums = [0.0f64; RYSER_MAX_DIM];
    let row_sums = &mut row_sums[..k];
    let mut total = 0.0;
    for g in 1u32..(1 << k) {
        let col = g.trailing_zeros() as usize;
        let gray = g ^ (g >> 1);
        if gray & (1 << col) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a[i * k + col];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= a[i * k + col];
            }
        }
        let prod: f64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if k % 2 == 1 {
        -total
    } else {
        total
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Index tuples of length `2n` with nonzero coefficient
/// `prod_r eta[j_{2r-1}, j_{2r}]`.
fn sym_terms(eta: &DMatrix<f64>, n: u32) -> Result<Vec<([usize; 4], f64)>> {
    check_order(n)?;
    if n > SYM_BRUTEFORCE_MAX_ORDER {
        return Err(Error::Resource(format!(
            "symmetric brute force limited to n <= {SYM_BRUTEFORCE_MAX_ORDER}"
        )));
    }
    if !eta.is_square() {
        return domain("eta must be square");
    }
    let m = eta.nrows();
    let len = 2 * n as usize;
    let mut terms = Vec::new();
    let total = m.pow(len as u32);
    for t in 0..total {
        let mut idx = [0usize; 4];
        let mut rest = t;
        for slot in idx[..len].iter_mut().rev() {
            *slot = rest % m;
            rest /= m;
        }
        let coeff: f64 = (0..n as usize)
            .map(|r| eta[(idx[2 * r], idx[2 * r + 1])])
            .product();
        if coeff != 0.0 {
            terms.push((idx, coeff));
        }
    }
    Ok(terms)
}

fn sym_pair_sum(terms: &[([usize; 4], f64)], left: &([usize; 4], f64), len: usize) -> f64 {
    let (ja, ca) = left;
    let mut gram = [0.0f64; 16];
    let mut sum = 0.0;
    for (jb, cb) in terms {
        for r in 0..len {
            for s in 0..len {
                gram[r * len + s] = if ja[r] == jb[s] { 1.0 } else { 0.0 };
            }
        }
        let per = ryser(len, &gram[..len * len]);
        if per != 0.0 {
            sum += ca * cb * per;
        }
    }
    sum
}

/// `<eta^(v)n | eta^(v)n>` by enumerating every pair of index tuples and
/// weighting each by `per(delta Gram) / (2n)!`. Only `n <= 2` is feasible.
pub fn sym_inner_bruteforce(eta: &DMatrix<f64>, n: u32) -> Result<f64> {
    let terms = sym_terms(eta, n)?;
    let len = 2 * n as usize;
    let sum: f64 = terms.iter().map(|t| sym_pair_sum(&terms, t, len)).sum();
    Ok(sum / factorial(2 * n))
}

/// [`sym_inner_bruteforce`] with the outer tuple loop on the rayon pool.
#[cfg(feature = "parallel")]
pub fn sym_inner_bruteforce_par(eta: &DMatrix<f64>, n: u32) -> Result<f64> {
    let terms = sym_terms(eta, n)?;
    let len = 2 * n as usize;
    let parts = par::map(&terms, |t| sym_pair_sum(&terms, t, len));
    Ok(parts.into_iter().sum::<f64>() / factorial(2 * n))
}

/// Eigenvalues of `eta`, descending.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaSpectrum {
    eigenvalues: Vec<f64>,
}

impl EtaSpectrum {
    pub fn from_eta(eta: &DMatrix<f64>) -> Result<Self> {
        if !eta.is_square() || (eta - eta.transpose()).amax() > 1e-12 {
            return domain("eta must be square and symmetric");
        }
        let mut eigenvalues: Vec<f64> = SymmetricEigen::new(eta.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self::from_eigenvalues(eigenvalues)
    }

    pub fn from_eigenvalues(eigenvalues: Vec<f64>) -> Result<Self> {
        if let Some(&d) = eigenvalues.iter().find(|&&d| d < -1e-10) {
            return domain(format!(
                "eta must be positive semidefinite, found eigenvalue {d}"
            ));
        }
        Ok(Self { eigenvalues })
    }

    pub fn of_schmidt(lambda: f64) -> Result<Self> {
        Self::from_eta(schmidt_pullback(lambda)?.eta())
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn sum_squares(&self) -> f64 {
        self.eigenvalues.iter().map(|d| d * d).sum()
    }
}

/// `<eta^(v)n | eta^(v)n>` from the spectrum of `eta`:
///
/// ```text
/// S_n = 1/(2n)! * sum_{m_1+..+m_k = n} (n!/prod m_v!)^2 * prod_v (2 m_v)! d_v^(2 m_v)
/// ```
///
/// In the eigenbasis only tuples pairing each index with itself survive, and
/// the delta-Gram permanent is nonzero exactly when both tuples carry the same
/// multiset of eigen-indices, where it equals `prod_v (2 m_v)!`.
pub fn sym_inner_closed(spectrum: &EtaSpectrum, n: u32) -> Result<f64> {
    check_order(n)?;
    if n > SYM_CLOSED_MAX_ORDER {
        return Err(Error::Resource(format!(
            "closed-form symmetric invariant limited to n <= {SYM_CLOSED_MAX_ORDER}"
        )));
    }
    fn rec(d: &[f64], left: u32, acc: f64, out: &mut f64) {
        match d.split_first() {
            None => {
                if left == 0 {
                    *out += acc;
                }
            }
            Some((&dv, rest)) => {
                for m in 0..=left {
                    let w = factorial(2 * m) / factorial(m).powi(2) * dv.powi(2 * m as i32);
                    rec(rest, left - m, acc * w, out);
                }
            }
        }
    }
    let mut sum = 0.0;
    rec(spectrum.eigenvalues(), n, 1.0, &mut sum);
    Ok(sum * factorial(n).powi(2) / factorial(2 * n))
}

/// The symmetric invariants for `n = 1, 2, 3` as explicit polynomials in
/// `lambda`. They agree with [`sym_inner_closed`] up to the factors 4, 36 and
/// 216.
pub fn sym_invariant_polynomial(n: u32, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    // coefficients from the highest power down
    let (prefactor, coeffs): (f64, &[f64]) = match n {
        1 => (1.0, &[16.0, -32.0, 12.0, 4.0, 1.0]),
        2 => (
            2.0 / 27.0,
            &[
                1536.0, -6144.0, 8960.0, -5376.0, 880.0, 32.0, 72.0, 40.0, 3.0,
            ],
        ),
        3 => (
            8.0 / 135.0,
            &[
                20480.0, -122880.0, 304128.0, -394240.0, 277632.0, -96768.0, 11648.0, -384.0,
                136.0, 112.0, 108.0, 28.0, 1.0,
            ],
        ),
        _ => return domain(format!("no explicit symmetric polynomial for n = {n}")),
    };
    Ok(prefactor * coeffs.iter().fold(0.0, |acc, &c| acc * lambda + c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonotoneKind {
    Epsilon,
    Mu,
    Sym,
}

impl MonotoneKind {
    pub const ALL: [MonotoneKind; 3] = [MonotoneKind::Epsilon, MonotoneKind::Mu, MonotoneKind::Sym];

    pub fn as_str(self) -> &'static str {
        match self {
            MonotoneKind::Epsilon => "epsilon",
            MonotoneKind::Mu => "mu",
            MonotoneKind::Sym => "sym",
        }
    }
}

impl fmt::Display for MonotoneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MonotoneKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "epsilon" => Ok(MonotoneKind::Epsilon),
            "mu" => Ok(MonotoneKind::Mu),
            "sym" => Ok(MonotoneKind::Sym),
            other => domain(format!("unknown monotone kind '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneRow {
    pub lambda: f64,
    pub kind: MonotoneKind,
    pub n: u32,
    pub value: f64,
}

/// Monotone values over a `lambda` grid for several kinds and orders.
///
/// `sym` entries are the raw symmetric inner products `S_n`, not rescaled.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneTable {
    lambdas: Vec<f64>,
    orders: Vec<u32>,
    kinds: Vec<MonotoneKind>,
    values: BTreeMap<(MonotoneKind, u32, usize), f64>,
}

impl MonotoneTable {
    pub fn compute(lambdas: &[f64], orders: &[u32], kinds: &[MonotoneKind]) -> Result<Self> {
        if orders.is_empty() {
            return domain("at least one order is required");
        }
        for &n in orders {
            check_order(n)?;
            if kinds.contains(&MonotoneKind::Sym) && n > SYM_CLOSED_MAX_ORDER {
                return Err(Error::Resource(format!(
                    "symmetric invariants limited to n <= {SYM_CLOSED_MAX_ORDER}"
                )));
            }
        }
        for &l in lambdas {
            check_lambda(l)?;
        }
        let per_point = par::map(lambdas, |&l| -> Result<Vec<(MonotoneKind, u32, f64)>> {
            let t = schmidt_pullback(l)?;
            let eps1 = frobenius_inner(t.eta()) / ETA_NORMALIZATION;
            let mu1 = frobenius_inner(t.omega()) / OMEGA_NORMALIZATION;
            let spectrum = if kinds.contains(&MonotoneKind::Sym) {
                Some(EtaSpectrum::from_eta(t.eta())?)
            } else {
                None
            };
            let mut out = Vec::with_capacity(kinds.len() * orders.len());
            for &kind in kinds {
                for &n in orders {
                    let v = match kind {
                        MonotoneKind::Epsilon => eps1.powi(n as i32),
                        MonotoneKind::Mu => mu1.powi(n as i32),
                        MonotoneKind::Sym => {
                            sym_inner_closed(spectrum.as_ref().expect("spectrum computed"), n)?
                        }
                    };
                    out.push((kind, n, v));
                }
            }
            Ok(out)
        });
        let mut values = BTreeMap::new();
        for (i, point) in per_point.into_iter().enumerate() {
            for (kind, n, v) in point? {
                values.insert((kind, n, i), v);
            }
        }
        Ok(Self {
            lambdas: lambdas.to_vec(),
            orders: orders.to_vec(),
            kinds: kinds.to_vec(),
            values,
        })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn kinds(&self) -> &[MonotoneKind] {
        &self.kinds
    }

    /// Value at grid index `i`.
    pub fn get(&self, kind: MonotoneKind, n: u32, i: usize) -> Option<f64> {
        self.values.get(&(kind, n, i)).copied()
    }

    /// `(lambda, value)` pairs for one curve.
    pub fn series(&self, kind: MonotoneKind, n: u32) -> Vec<(f64, f64)> {
        self.lambdas
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| self.get(kind, n, i).map(|v| (l, v)))
            .collect()
    }

    /// Rows ordered by grid point, then kind, then order.
    pub fn rows(&self) -> Vec<MonotoneRow> {
        let mut rows = Vec::with_capacity(self.values.len());
        for (i, &lambda) in self.lambdas.iter().enumerate() {
            for &kind in &self.kinds {
                for &n in &self.orders {
                    if let Some(value) = self.get(kind, n, i) {
                        rows.push(MonotoneRow {
                            lambda,
                            kind,
                            n,
                            value,
                        });
                    }
                }
            }
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn frobenius_examples() {
        let t = schmidt_pullback(0.25).unwrap();
        let s = 0.75;
        assert_relative_eq!(
            frobenius_inner(t.eta()),
            4.0 + 4.0 * s + 4.0 * s * s,
            epsilon = 1e-12
        );
        let t = schmidt_pullback(0.5).unwrap();
        assert_relative_eq!(frobenius_inner(t.eta()), 12.0, epsilon = 1e-12);
        assert_eq!(frobenius_inner(t.omega()), 0.0);
        let k = DMatrix::from_element(2, 2, Complex64::new(1.0, 1.0));
        assert_relative_eq!(frobenius_inner(&k), 8.0);
    }

    #[test]
    fn epsilon_examples() {
        for n in 1..=5 {
            assert_relative_eq!(epsilon_n(0.5, n).unwrap(), 1.0, max_relative = 1e-12);
            assert_relative_eq!(
                epsilon_n(0.0, n).unwrap(),
                3f64.powi(-(n as i32)),
                max_relative = 1e-12
            );
        }
        assert_relative_eq!(
            epsilon_n(0.25, 1).unwrap(),
            37.0 / 48.0,
            max_relative = 1e-12
        );
        assert!(matches!(epsilon_n(1.2, 1), Err(Error::Domain(_))));
        assert!(matches!(epsilon_n(0.2, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn mu_examples() {
        for n in 1..=5 {
            assert_eq!(mu_n(0.5, n).unwrap(), 0.0);
            assert_relative_eq!(mu_n(0.0, n).unwrap(), 1.0, max_relative = 1e-12);
        }
        assert_relative_eq!(mu_n(0.25, 3).unwrap(), 0.015625, max_relative = 1e-12);
        assert!(matches!(mu_n(-0.1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn tensor_power_examples() {
        let eta = schmidt_pullback(0.3).unwrap().eta().clone();
        let f = frobenius_inner(&eta);
        assert_relative_eq!(
            tensor_power_inner_bruteforce(&eta, 2).unwrap(),
            f * f,
            max_relative = 1e-12
        );
        let id = DMatrix::<f64>::identity(6, 6);
        assert_relative_eq!(tensor_power_inner_bruteforce(&id, 2).unwrap(), 36.0);
        let kappa = schmidt_pullback(0.25).unwrap().kappa().clone();
        assert_relative_eq!(
            tensor_power_inner_bruteforce(&kappa, 1).unwrap(),
            frobenius_inner(&kappa),
            max_relative = 1e-14
        );
    }

    #[test]
    fn tensor_power_budget_enforced() {
        let id = DMatrix::<f64>::identity(6, 6);
        assert!(matches!(
            tensor_power_inner_bruteforce(&id, 6),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            tensor_power_inner_bruteforce(&id, 0),
            Err(Error::Domain(_))
        ));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn tensor_power_parallel_agrees() {
        let kappa = schmidt_pullback(0.25).unwrap().kappa().clone();
        let a = tensor_power_inner_bruteforce(&kappa, 3).unwrap();
        let b = tensor_power_inner_bruteforce_par(&kappa, 3).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn permanent_examples() {
        let ones2 = DMatrix::from_element(2, 2, 1.0);
        assert_eq!(permanent(&ones2).unwrap(), 2.0);
        assert_eq!(permanent(&DMatrix::identity(3, 3)).unwrap(), 1.0);
        let ones3 = DMatrix::from_element(3, 3, 1.0);
        assert_eq!(permanent(&ones3).unwrap(), 6.0);
        assert_eq!(permanent_naive(&ones3).unwrap(), 6.0);
        assert_eq!(permanent(&DMatrix::zeros(0, 0)).unwrap(), 1.0);
        // per(J_k) = k!
        let ones8 = DMatrix::from_element(8, 8, 1.0);
        assert_eq!(permanent(&ones8).unwrap(), 40320.0);
    }

    #[test]
    fn permanent_errors() {
        assert!(matches!(
            permanent(&DMatrix::zeros(13, 13)),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            permanent(&DMatrix::zeros(2, 3)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            permanent_naive(&DMatrix::zeros(9, 9)),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn sym_bruteforce_examples() {
        let eta = schmidt_pullback(0.3).unwrap().eta().clone();
        assert_relative_eq!(
            sym_inner_bruteforce(&eta, 1).unwrap(),
            frobenius_inner(&eta),
            max_relative = 1e-12
        );
        let mut e1 = DMatrix::zeros(6, 6);
        e1[(0, 0)] = 1.0;
        assert_relative_eq!(
            sym_inner_bruteforce(&e1, 2).unwrap(),
            1.0,
            max_relative = 1e-12
        );
        let eta0 = schmidt_pullback(0.0).unwrap().eta().clone();
        assert_relative_eq!(
            sym_inner_bruteforce(&eta0, 2).unwrap(),
            8.0,
            max_relative = 1e-12
        );
        assert!(matches!(
            sym_inner_bruteforce(&eta0, 3),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn sym_closed_examples() {
        for l in [0.0, 0.3, 0.5, 0.9] {
            let sp = EtaSpectrum::of_schmidt(l).unwrap();
            assert_relative_eq!(
                sym_inner_closed(&sp, 1).unwrap(),
                4.0 * sym_invariant_polynomial(1, l).unwrap(),
                max_relative = 1e-12
            );
        }
        let sp0 = EtaSpectrum::of_schmidt(0.0).unwrap();
        assert_relative_eq!(
            sym_inner_closed(&sp0, 2).unwrap(),
            8.0,
            max_relative = 1e-12
        );
        assert!(matches!(sym_inner_closed(&sp0, 9), Err(Error::Resource(_))));
        assert!(matches!(sym_inner_closed(&sp0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn sym_polynomial_constant_terms() {
        assert_eq!(sym_invariant_polynomial(1, 0.0).unwrap(), 1.0);
        assert_relative_eq!(
            sym_invariant_polynomial(2, 0.0).unwrap(),
            2.0 / 9.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            sym_invariant_polynomial(3, 0.0).unwrap(),
            8.0 / 135.0,
            max_relative = 1e-15
        );
        assert!(sym_invariant_polynomial(4, 0.1).is_err());
        assert!(sym_invariant_polynomial(0, 0.1).is_err());
    }

    #[test]
    fn spectrum_invariants() {
        for l in [0.0, 0.2, 0.5, 0.7] {
            let t = schmidt_pullback(l).unwrap();
            let sp = EtaSpectrum::from_eta(t.eta()).unwrap();
            assert_eq!(sp.eigenvalues().len(), 6);
            assert!(sp.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
            assert!(sp.eigenvalues().iter().all(|&d| d >= -1e-10));
            assert_relative_eq!(
                sp.sum_squares(),
                frobenius_inner(t.eta()),
                max_relative = 1e-10
            );
        }
        assert!(EtaSpectrum::from_eigenvalues(vec![1.0, -0.1]).is_err());
    }

    #[test]
    fn table_rows_and_lookup() {
        let grid = [0.0, 0.25, 0.5];
        let table = MonotoneTable::compute(&grid, &[1, 2], &MonotoneKind::ALL).unwrap();
        assert_eq!(table.rows().len(), 3 * 3 * 2);
        assert_relative_eq!(
            table.get(MonotoneKind::Epsilon, 1, 1).unwrap(),
            37.0 / 48.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            table.get(MonotoneKind::Mu, 2, 0).unwrap(),
            1.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            table.get(MonotoneKind::Sym, 2, 0).unwrap(),
            8.0,
            max_relative = 1e-12
        );
        let first = table.rows()[0];
        assert_eq!(
            (first.lambda, first.kind, first.n),
            (0.0, MonotoneKind::Epsilon, 1)
        );
        assert!(MonotoneTable::compute(&grid, &[], &MonotoneKind::ALL).is_err());
        assert!(MonotoneTable::compute(&[1.5], &[1], &MonotoneKind::ALL).is_err());
        assert!(MonotoneTable::compute(&grid, &[9], &[MonotoneKind::Sym]).is_err());
    }

    #[test]
    fn table_ranges() {
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let table = MonotoneTable::compute(
            &grid,
            &[1, 2, 3, 4, 5],
            &[MonotoneKind::Epsilon, MonotoneKind::Mu],
        )
        .unwrap();
        for row in table.rows() {
            match row.kind {
                MonotoneKind::Epsilon => {
                    let lo = 3f64.powi(-(row.n as i32));
                    assert!(row.value >= lo * (1.0 - 1e-12) && row.value <= 1.0 + 1e-12);
                }
                MonotoneKind::Mu => assert!((-1e-12..=1.0 + 1e-12).contains(&row.value)),
                MonotoneKind::Sym => unreachable!(),
            }
        }
    }
}
