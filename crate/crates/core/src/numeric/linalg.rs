use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;
use rand::Rng;

use crate::scalar::Real;

pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Singular values in descending order; empty for a matrix with a zero dimension.
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<T> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    s
}

pub fn op_norm<T: Real>(m: &CMatrix<T>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

pub fn is_finite<T: Real>(m: &CMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialIsometryReport<T: Real> {
    pub distance: T,
    pub nearest: CMatrix<T>,
    pub singular_values: Vec<T>,
}

/// Nearest partial isometry by rounding singular values at ½.
///
/// The distance `max_i min(σ_i, |1 − σ_i|)` is optimal: any partial
/// isometry has singular values in {0, 1}, and Weyl's inequality bounds
/// each `|σ_i(m) − σ_i(w)|` by `‖m − w‖`.
pub fn dist_to_partial_isometry<T: Real>(m: &CMatrix<T>) -> PartialIsometryReport<T> {
    let (r, c) = m.shape();
    if m.is_empty() {
        return PartialIsometryReport { distance: T::zero(), nearest: CMatrix::zeros(r, c), singular_values: Vec::new() };
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");
    let half = T::lit(0.5);
    let sv: Vec<T> = svd.singular_values.iter().copied().collect();
    let rounded = DMatrix::from_fn(sv.len(), sv.len(), |i, j| {
        if i == j && sv[i] > half {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    let nearest = &u * rounded * &v_t;
    let distance = sv.iter().fold(T::zero(), |acc, &s| acc.max(s.min((T::one() - s).abs())));
    let mut singular_values = sv;
    singular_values.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    PartialIsometryReport { distance, nearest, singular_values }
}

/// Rank of the spectral projection of `|m|` for `(½, 3/2)`.
pub fn upper_rank<T: Real>(m: &CMatrix<T>) -> usize {
    let (lo, hi) = (T::lit(0.5), T::lit(1.5));
    singular_values(m).iter().filter(|&&s| s > lo && s < hi).count()
}

/// Masa-normalizing partial isometry: at most one entry of modulus above
/// `tol` in each row and column, each such entry of modulus near 1.
pub fn is_regular_pisometry<T: Real>(m: &CMatrix<T>, tol: T) -> bool {
    let big = |z: &Complex<T>| z.modulus() > tol;
    let rows_ok = m.row_iter().all(|row| row.iter().filter(|z| big(z)).count() <= 1);
    let cols_ok = m.column_iter().all(|col| col.iter().filter(|z| big(z)).count() <= 1);
    let moduli_ok = m.iter().filter(|z| big(z)).all(|z| (z.modulus() - T::one()).abs() <= tol);
    rows_ok && cols_ok && moduli_ok && dist_to_partial_isometry(m).distance <= tol
}

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::identity(n, n)
}

pub fn adjoint<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.adjoint()
}

/// `‖m*m − I‖`.
pub fn unitarity_residual<T: Real>(m: &CMatrix<T>) -> T {
    if !m.is_square() {
        return T::lit(f64::INFINITY);
    }
    op_norm(&(m.adjoint() * m - identity::<T>(m.nrows())))
}

pub fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix<T> {
    let scale = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    CMatrix::from_fn(rows, cols, |_, _| Complex::new(T::standard_normal(rng) * scale, T::standard_normal(rng) * scale))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix<T> {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let qr = gaussian::<T, R>(rng, n, n).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.modulus();
        let phase = if norm > T::zero() { d / Complex::new(norm, T::zero()) } else { Complex::new(T::one(), T::zero()) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random `rows × cols` partial isometry of the given rank.
pub fn random_partial_isometry<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, rank: usize) -> CMatrix<T> {
    assert!(rank <= rows.min(cols), "rank exceeds dimensions");
    let u = haar_unitary::<T, R>(rng, rows);
    let v = haar_unitary::<T, R>(rng, cols);
    let d = CMatrix::from_fn(rows, cols, |i, j| {
        if i == j && i < rank {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    u * d * v.adjoint()
}

/// Gaussian matrix rescaled to operator norm `norm`.
pub fn perturbation<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, norm: T) -> CMatrix<T> {
    let g = gaussian::<T, R>(rng, rows, cols);
    let n = op_norm(&g);
    if n > T::zero() {
        g * Complex::new(norm / n, T::zero())
    } else {
        g
    }
}

/// Unitary close to the identity: the Cayley transform of a Hermitian
/// matrix of norm `size`.
pub fn near_identity_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, size: T) -> CMatrix<T> {
    let g = perturbation::<T, R>(rng, n, n, size);
    let h = (&g + g.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let id = identity::<T>(n);
    let plus = &id + &h * i;
    let minus = &id - &h * i;
    minus * plus.try_inverse().expect("I + iH is invertible for Hermitian H")
}

/// Orthogonal projection onto the span of the first `k` columns of `u`
/// after skipping `skip` columns.
pub fn column_projection<T: Real>(u: &CMatrix<T>, skip: usize, k: usize) -> CMatrix<T> {
    let cols = u.columns(skip, k);
    cols * cols.adjoint()
}

pub fn real<T: Real>(x: f64) -> Complex<T> {
    Complex::new(T::lit(x), T::zero())
}
