//! Dense complex linear algebra shared by every module.
//!
//! All bases returned here are orthonormal for the standard inner product
//! on column vectors; matrices are vectorized column-major.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type Rng = ChaCha8Rng;

/// Relative singular-value cutoff used for null spaces and ranks.
pub const RANK_CUTOFF: f64 = 1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vec(n: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[i] = ONE;
    v
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for i in 0..a.len() {
        if a[i] == ZERO {
            continue;
        }
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

pub fn vec_of(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvec(v: &[C64], rows: usize, cols: usize) -> CMat {
    assert_eq!(v.len(), rows * cols, "unvec length");
    CMat::from_column_slice(rows, cols, v)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |a: f64, &s| a.max(s))
}

/// Pads or compresses `a` to an `n x n` matrix with the same kernel, `n = a.ncols()`.
fn square_reduce(a: &CMat) -> CMat {
    let (m, n) = a.shape();
    if m > n {
        a.clone().qr().r()
    } else if m < n {
        let mut sq = CMat::zeros(n, n);
        sq.view_mut((0, 0), (m, n)).copy_from(a);
        sq
    } else {
        a.clone()
    }
}

/// Orthonormal basis (as columns) of `{x : a x = 0}`.
pub fn null_space(a: &CMat) -> CMat {
    null_space_with(a, RANK_CUTOFF)
}

pub fn null_space_with(a: &CMat, rel_cutoff: f64) -> CMat {
    null_space_floor(a, rel_cutoff, 0.0)
}

/// Null space with cutoff `rel_cutoff * max(sigma_max, scale)`, so that
/// systems which vanish up to rounding at the given scale count as zero.
pub fn null_space_floor(a: &CMat, rel_cutoff: f64, scale: f64) -> CMat {
    let n = a.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return CMat::identity(n, n);
    }
    let sq = square_reduce(a);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested V^H");
    let smax = svd.singular_values.iter().fold(0.0f64, |x, &s| x.max(s));
    let cut = if smax.max(scale) < 1e-300 {
        f64::INFINITY
    } else {
        rel_cutoff * smax.max(scale)
    };
    let idx: Vec<usize> = (0..n)
        .filter(|&k| svd.singular_values[k] <= cut)
        .collect();
    let mut out = CMat::zeros(n, idx.len());
    for (col, &k) in idx.iter().enumerate() {
        for i in 0..n {
            out[(i, col)] = vt[(k, i)].conj();
        }
    }
    out
}

/// Orthonormal basis of the column span of `a`.
pub fn column_space(a: &CMat) -> CMat {
    column_space_with(a, RANK_CUTOFF)
}

pub fn column_space_with(a: &CMat, rel_cutoff: f64) -> CMat {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return CMat::zeros(m, 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().fold(0.0f64, |x, &s| x.max(s));
    if smax < 1e-300 {
        return CMat::zeros(m, 0);
    }
    let idx: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > rel_cutoff * smax)
        .collect();
    let mut out = CMat::zeros(m, idx.len());
    for (col, &k) in idx.iter().enumerate() {
        out.set_column(col, &u.column(k));
    }
    out
}

pub fn rank(a: &CMat) -> usize {
    rank_with(a, RANK_CUTOFF)
}

pub fn rank_with(a: &CMat, rel_cutoff: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let s = a.clone().svd(false, false).singular_values;
    let smax = s.iter().fold(0.0f64, |x, &v| x.max(v));
    if smax < 1e-300 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_cutoff * smax).count()
}

/// Absolute-threshold rank: singular values above `abs_cutoff` count.
pub fn rank_abs(a: &CMat, abs_cutoff: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let s = a.clone().svd(false, false).singular_values;
    s.iter().filter(|&&v| v > abs_cutoff).count()
}

/// Moore-Penrose pseudo-inverse with relative cutoff.
pub fn pinv(a: &CMat) -> CMat {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return CMat::zeros(n, m);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |x, &s| x.max(s));
    let cut = RANK_CUTOFF * smax;
    svd.pseudo_inverse(cut.max(1e-300)).expect("svd with u and v")
}

/// Applies `f` to the eigenvalues of a Hermitian matrix.
pub fn hermitian_fn(h: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let n = h.nrows();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let sym = (h + h.adjoint()) * r(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut d = CMat::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = r(f(eig.eigenvalues[i]));
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

pub fn hermitian_sqrt(h: &CMat) -> CMat {
    hermitian_fn(h, |x| x.max(0.0).sqrt())
}

pub fn hermitian_inv_sqrt(h: &CMat) -> CMat {
    hermitian_fn(h, |x| 1.0 / x.sqrt())
}

pub fn is_diagonal(m: &CMat, tol: f64) -> bool {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && m[(i, j)].norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Operator-norm distance between the orthogonal projections onto two column spans.
pub fn subspace_distance(a: &CMat, b: &CMat) -> f64 {
    let qa = column_space(a);
    let qb = column_space(b);
    if qa.ncols() != qb.ncols() {
        return 1.0;
    }
    let pa = &qa * qa.adjoint();
    let pb = &qb * qb.adjoint();
    op_norm(&(pa - pb))
}

/// Coordinates of `v` in the orthonormal column basis `basis`, with the residual norm.
pub fn coords_in(basis: &CMat, v: &CVec) -> (CVec, f64) {
    let x = basis.adjoint() * v;
    let res = (v - basis * &x).norm();
    (x, res)
}

pub fn gaussian(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn random_complex_matrix(rng: &mut Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(gaussian(rng), gaussian(rng)))
}

pub fn random_complex_vector(rng: &mut Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| c(gaussian(rng), gaussian(rng)))
}

pub fn random_hermitian(rng: &mut Rng, n: usize) -> CMat {
    let a = random_complex_matrix(rng, n, n);
    (&a + a.adjoint()) * r(0.5)
}

/// Haar-distributed unitary from the QR decomposition of a Gaussian matrix.
pub fn random_unitary(rng: &mut Rng, n: usize) -> CMat {
    let a = random_complex_matrix(rng, n, n);
    let qr = a.qr();
    let mut q = qr.q();
    let rr = qr.r();
    for j in 0..n {
        let d = rr[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Column-stacks matrices that share a row count.
pub fn hstack(cols: &[CMat], rows: usize) -> CMat {
    let total: usize = cols.iter().map(|m| m.ncols()).sum();
    let mut out = CMat::zeros(rows, total);
    let mut off = 0;
    for m in cols {
        assert_eq!(m.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, off), (rows, m.ncols())).copy_from(m);
        off += m.ncols();
    }
    out
}

/// Row-stacks matrices that share a column count.
pub fn vstack(blocks: &[CMat], cols: usize) -> CMat {
    let total: usize = blocks.iter().map(|m| m.nrows()).sum();
    let mut out = CMat::zeros(total, cols);
    let mut off = 0;
    for m in blocks {
        assert_eq!(m.ncols(), cols, "vstack column mismatch");
        out.view_mut((off, 0), (m.nrows(), cols)).copy_from(m);
        off += m.nrows();
    }
    out
}

/// Complex eigenvalues of a square matrix via the Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    if m.nrows() == 0 {
        return vec![];
    }
    let schur = nalgebra::Schur::new(m.clone());
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_and_tall_systems() {
        let a = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let ns = null_space(&a);
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&a * &ns)) < 1e-12);
        assert!(max_abs(&(ns.adjoint() * &ns - CMat::identity(2, 2))) < 1e-12);

        let tall = vstack(&[a.clone(), a.clone(), a], 3);
        assert_eq!(null_space(&tall).ncols(), 2);
    }

    #[test]
    fn zero_matrix_has_full_null_space() {
        let a = CMat::zeros(4, 3);
        assert_eq!(null_space(&a).ncols(), 3);
        assert_eq!(rank(&a), 0);
    }

    #[test]
    fn hermitian_sqrt_squares_back() {
        let mut g = rng(3);
        let a = random_complex_matrix(&mut g, 4, 4);
        let h = &a * a.adjoint() + CMat::identity(4, 4);
        let s = hermitian_sqrt(&h);
        assert!(max_abs(&(&s * &s - &h)) < 1e-10);
        let si = hermitian_inv_sqrt(&h);
        assert!(max_abs(&(&si * &s - CMat::identity(4, 4))) < 1e-10);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut g = rng(7);
        let u = random_unitary(&mut g, 5);
        assert!(max_abs(&(u.adjoint() * &u - CMat::identity(5, 5))) < 1e-12);
    }

    #[test]
    fn subspace_distance_detects_equal_spans() {
        let mut g = rng(11);
        let a = random_complex_matrix(&mut g, 6, 2);
        let mix = random_complex_matrix(&mut g, 2, 2);
        assert!(subspace_distance(&a, &(&a * mix)) < 1e-10);
        let b = random_complex_matrix(&mut g, 6, 2);
        assert!(subspace_distance(&a, &b) > 1e-3);
    }

    #[test]
    fn eigenvalues_of_swap_are_plus_minus_one() {
        let m = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let mut ev: Vec<f64> = eigenvalues(&m).iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vec_roundtrip_is_column_major() {
        let m = CMat::from_row_slice(2, 2, &[r(1.0), r(2.0), r(3.0), r(4.0)]);
        let v = vec_of(&m);
        assert_eq!(v[1], r(3.0));
        assert_eq!(unvec(v.as_slice(), 2, 2), m);
    }
}
