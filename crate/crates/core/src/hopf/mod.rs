//! Finite-dimensional Hopf *-algebras given by structure constants.
//!
//! Conventions, for a basis `e_0..e_{n-1}`:
//! * `e_i e_j = sum_k mult[i,j,k] e_k`
//! * `Delta(e_i) = sum_{j,k} comult[i,j,k] e_j (x) e_k`
//! * `S(e_j) = sum_i antipode[(i,j)] e_i`, i.e. the antipode acts on coordinate columns
//! * `x* = star . conj(x)` on coordinate columns

mod fixtures;
mod json;
mod validate;

pub use fixtures::{
    function_algebra, group_algebra, kac_paljutkin, FiniteGroup, SubgroupSurjection,
};
pub use json::{hopf_from_json, hopf_to_json, load_hopf, load_subgroup, subgroup_to_json};
pub use validate::{dual_hopf, haar, validate_hopf};

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64, ZERO};

/// Dense rank-3 tensor, row-major in `(i, j, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    pub shape: [usize; 3],
    pub data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(a: usize, b: usize, c: usize) -> Self {
        Tensor3 {
            shape: [a, b, c],
            data: vec![ZERO; a * b * c],
        }
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.shape[1] + j) * self.shape[2] + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.data[self.idx(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: C64) {
        let p = self.idx(i, j, k);
        self.data[p] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, k: usize, v: C64) {
        let p = self.idx(i, j, k);
        self.data[p] += v;
    }

    /// The `shape[1] x shape[2]` slice at first index `i`.
    pub fn slice(&self, i: usize) -> CMat {
        CMat::from_fn(self.shape[1], self.shape[2], |j, k| self.get(i, j, k))
    }

    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        if self.shape != other.shape {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |a, (x, y)| a.max((x - y).norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// A finite-dimensional Hopf *-algebra in structure-constant form.
#[derive(Clone, Debug)]
pub struct HopfAlgebraData {
    pub dim: usize,
    pub basis_labels: Vec<String>,
    pub mult: Tensor3,
    pub unit: CVec,
    pub comult: Tensor3,
    pub counit: CVec,
    pub antipode: CMat,
    pub star: CMat,
    antipode_inv: OnceLock<Option<CMat>>,
}

impl PartialEq for HopfAlgebraData {
    fn eq(&self, o: &Self) -> bool {
        self.dim == o.dim
            && self.mult == o.mult
            && self.unit == o.unit
            && self.comult == o.comult
            && self.counit == o.counit
            && self.antipode == o.antipode
            && self.star == o.star
    }
}

impl HopfAlgebraData {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        basis_labels: Vec<String>,
        mult: Tensor3,
        unit: CVec,
        comult: Tensor3,
        counit: CVec,
        antipode: CMat,
        star: CMat,
    ) -> Result<Self> {
        let h = HopfAlgebraData {
            dim: basis_labels.len(),
            basis_labels,
            mult,
            unit,
            comult,
            counit,
            antipode,
            star,
            antipode_inv: OnceLock::new(),
        };
        h.check_shapes()?;
        Ok(h)
    }

    pub fn check_shapes(&self) -> Result<()> {
        let n = self.dim;
        if self.basis_labels.len() != n {
            return Err(Error::shape("basis_labels", n, self.basis_labels.len()));
        }
        if self.mult.shape != [n, n, n] || self.mult.data.len() != n * n * n {
            return Err(Error::shape("mult", format!("[{n},{n},{n}]"), format!("{:?}", self.mult.shape)));
        }
        if self.comult.shape != [n, n, n] || self.comult.data.len() != n * n * n {
            return Err(Error::shape("comult", format!("[{n},{n},{n}]"), format!("{:?}", self.comult.shape)));
        }
        if self.unit.len() != n {
            return Err(Error::shape("unit", n, self.unit.len()));
        }
        if self.counit.len() != n {
            return Err(Error::shape("counit", n, self.counit.len()));
        }
        if self.antipode.shape() != (n, n) {
            return Err(Error::shape("antipode", format!("[{n},{n}]"), format!("{:?}", self.antipode.shape())));
        }
        if self.star.shape() != (n, n) {
            return Err(Error::shape("star", format!("[{n},{n}]"), format!("{:?}", self.star.shape())));
        }
        let finite = self.mult.is_finite()
            && self.comult.is_finite()
            && self.unit.iter().chain(self.counit.iter()).all(|z| z.re.is_finite() && z.im.is_finite())
            && self.antipode.iter().chain(self.star.iter()).all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::NonFinite("Hopf algebra structure constants".into()));
        }
        Ok(())
    }

    pub fn basis(&self, i: usize) -> CVec {
        crate::linalg::unit_vec(self.dim, i)
    }

    pub fn mul(&self, x: &CVec, y: &CVec) -> CVec {
        let n = self.dim;
        let mut out = CVec::zeros(n);
        for i in 0..n {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..n {
                if y[j] == ZERO {
                    continue;
                }
                let c = x[i] * y[j];
                let base = (i * n + j) * n;
                for k in 0..n {
                    let m = self.mult.data[base + k];
                    if m != ZERO {
                        out[k] += c * m;
                    }
                }
            }
        }
        out
    }

    /// Coproduct as an `n x n` coefficient matrix over `e_j (x) e_k`.
    pub fn comul(&self, x: &CVec) -> CMat {
        let n = self.dim;
        let mut out = CMat::zeros(n, n);
        for i in 0..n {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    let d = self.comult.get(i, j, k);
                    if d != ZERO {
                        out[(j, k)] += x[i] * d;
                    }
                }
            }
        }
        out
    }

    pub fn counit_of(&self, x: &CVec) -> C64 {
        self.counit.dot(x)
    }

    pub fn antipode_of(&self, x: &CVec) -> CVec {
        &self.antipode * x
    }

    pub fn antipode_inverse(&self) -> Option<&CMat> {
        self.antipode_inv
            .get_or_init(|| self.antipode.clone().try_inverse())
            .as_ref()
    }

    pub fn star_of(&self, x: &CVec) -> CVec {
        &self.star * x.map(|z| z.conj())
    }

    /// Product in `A (x) A` of coefficient matrices.
    pub fn mul2(&self, x: &CMat, y: &CMat) -> CMat {
        let n = self.dim;
        let mut out = CMat::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let xab = x[(a, b)];
                if xab == ZERO {
                    continue;
                }
                for c in 0..n {
                    for d in 0..n {
                        let ycd = y[(c, d)];
                        if ycd == ZERO {
                            continue;
                        }
                        let w = xab * ycd;
                        let b1 = (a * n + c) * n;
                        let b2 = (b * n + d) * n;
                        for k in 0..n {
                            let m1 = self.mult.data[b1 + k];
                            if m1 == ZERO {
                                continue;
                            }
                            for l in 0..n {
                                let m2 = self.mult.data[b2 + l];
                                if m2 != ZERO {
                                    out[(k, l)] += w * m1 * m2;
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// `(Delta (x) id) Delta(x)` as a tensor over `e_a (x) e_b (x) e_c`.
    pub fn comul3(&self, x: &CVec) -> Tensor3 {
        let n = self.dim;
        let d = self.comul(x);
        let mut out = Tensor3::zeros(n, n, n);
        for j in 0..n {
            for k in 0..n {
                let djk = d[(j, k)];
                if djk == ZERO {
                    continue;
                }
                for a in 0..n {
                    for b in 0..n {
                        let e = self.comult.get(j, a, b);
                        if e != ZERO {
                            out.add(a, b, k, djk * e);
                        }
                    }
                }
            }
        }
        out
    }

    /// Nonzero entries of `Delta(e_i)` as `(j, k, coefficient)`.
    pub fn comul_terms(&self, i: usize) -> Vec<(usize, usize, C64)> {
        let n = self.dim;
        let mut v = Vec::new();
        for j in 0..n {
            for k in 0..n {
                let d = self.comult.get(i, j, k);
                if d.norm() > 0.0 {
                    v.push((j, k, d));
                }
            }
        }
        v
    }

    /// Whether the algebra is commutative up to `tol`.
    pub fn is_commutative(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| (self.mult.get(i, j, k) - self.mult.get(j, i, k)).norm() <= tol))
        })
    }
}

/// Hopf-algebra operations used by code that must work both on exact finite
/// data and on truncated coordinate algebras, where products may leave the
/// truncation and therefore fail.
pub trait HopfOps: Sync {
    fn dim(&self) -> usize;
    fn unit(&self) -> CVec;
    fn mul(&self, x: &CVec, y: &CVec) -> Result<CVec>;
    /// Nonzero coproduct terms `(j, k, c)` of the basis element `e_i`.
    fn comul_basis(&self, i: usize) -> Result<Vec<(usize, usize, C64)>>;
    fn counit(&self, x: &CVec) -> C64;
    fn antipode(&self, x: &CVec) -> Result<CVec>;
    fn antipode_inv(&self, x: &CVec) -> Result<CVec>;
    fn star(&self, x: &CVec) -> Result<CVec>;
    fn label(&self, i: usize) -> String;
}

impl HopfOps for HopfAlgebraData {
    fn dim(&self) -> usize {
        self.dim
    }
    fn unit(&self) -> CVec {
        self.unit.clone()
    }
    fn mul(&self, x: &CVec, y: &CVec) -> Result<CVec> {
        Ok(HopfAlgebraData::mul(self, x, y))
    }
    fn comul_basis(&self, i: usize) -> Result<Vec<(usize, usize, C64)>> {
        Ok(self.comul_terms(i))
    }
    fn counit(&self, x: &CVec) -> C64 {
        self.counit_of(x)
    }
    fn antipode(&self, x: &CVec) -> Result<CVec> {
        Ok(self.antipode_of(x))
    }
    fn antipode_inv(&self, x: &CVec) -> Result<CVec> {
        let si = self
            .antipode_inverse()
            .ok_or_else(|| Error::NotQuantumGroup("antipode is not invertible".into()))?;
        Ok(si * x)
    }
    fn star(&self, x: &CVec) -> Result<CVec> {
        Ok(self.star_of(x))
    }
    fn label(&self, i: usize) -> String {
        self.basis_labels[i].clone()
    }
}
