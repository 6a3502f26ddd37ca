//! The coordinate algebra spanned by matrix coefficients `u^s_ij` of the table irreducibles.
//!
//! Products come from the fusion isometries of the category, the involution
//! from the conjugation unitaries and modular operators. Products whose
//! summands fall outside the table fail with `TruncationExceeded`.

use std::sync::Arc;

use super::{Object, RepCategory};
use crate::error::{Error, Result};
use crate::hopf::HopfOps;
use crate::linalg::{self, CMat, CVec, C64, ONE, ZERO};

#[derive(Clone, Debug)]
pub struct PeterWeyl {
    cat: Arc<RepCategory>,
    offsets: Vec<usize>,
    dim: usize,
    star_maps: Vec<(CMat, CMat)>,
}

impl PeterWeyl {
    pub fn new(cat: Arc<RepCategory>) -> Self {
        let t = cat.table();
        let mut offsets = Vec::with_capacity(t.len() + 1);
        let mut acc = 0;
        for &d in &t.dims {
            offsets.push(acc);
            acc += d * d;
        }
        offsets.push(acc);
        let star_maps = (0..t.len())
            .map(|s| {
                let rho_t = t.rho[s].transpose();
                let j = &t.conj_unitary[s];
                let a = linalg::hermitian_inv_sqrt(&rho_t) * j;
                let b = j.adjoint() * linalg::hermitian_sqrt(&rho_t);
                (a, b)
            })
            .collect();
        PeterWeyl {
            cat,
            offsets,
            dim: acc,
            star_maps,
        }
    }

    pub fn category(&self) -> &Arc<RepCategory> {
        &self.cat
    }

    pub fn num_blocks(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn index(&self, s: usize, i: usize, j: usize) -> usize {
        let d = self.cat.table().dims[s];
        self.offsets[s] + i * d + j
    }

    pub fn decode(&self, idx: usize) -> (usize, usize, usize) {
        let s = self.offsets.partition_point(|&o| o <= idx) - 1;
        let d = self.cat.table().dims[s];
        let r = idx - self.offsets[s];
        (s, r / d, r % d)
    }

    /// Basis indices of all coefficients of irreducibles `s < upto`.
    pub fn indices_below(&self, upto: usize) -> std::ops::Range<usize> {
        0..self.offsets[upto.min(self.num_blocks())]
    }

    pub fn blocks(&self, x: &CVec) -> Vec<CMat> {
        let t = self.cat.table();
        (0..t.len())
            .map(|s| {
                let d = t.dims[s];
                CMat::from_fn(d, d, |i, j| x[self.offsets[s] + i * d + j])
            })
            .collect()
    }

    pub fn from_blocks(&self, b: &[CMat]) -> CVec {
        let mut v = CVec::zeros(self.dim);
        for (s, m) in b.iter().enumerate() {
            let d = m.nrows();
            for i in 0..d {
                for j in 0..d {
                    v[self.offsets[s] + i * d + j] = m[(i, j)];
                }
            }
        }
        v
    }

    /// The coefficient `u^s_ij` as a coordinate vector.
    pub fn coefficient(&self, s: usize, i: usize, j: usize) -> CVec {
        linalg::unit_vec(self.dim, self.index(s, i, j))
    }

    /// Coefficients `(u_ij)` of an arbitrary object, expanded through its decomposition.
    pub fn object_coefficients(&self, obj: &Object) -> Result<Vec<Vec<CVec>>> {
        let d = self.cat.dim(obj)?;
        let dec = self.cat.decompose(obj)?;
        let mut out = vec![vec![CVec::zeros(self.dim); d]; d];
        for p in &dec.parts {
            let ds = self.cat.table().dims[p.irrep];
            for i in 0..d {
                for j in 0..d {
                    for e in 0..ds {
                        let we = p.iso[(i, e)];
                        if we == ZERO {
                            continue;
                        }
                        for f in 0..ds {
                            let wf = p.iso[(j, f)].conj();
                            if wf == ZERO {
                                continue;
                            }
                            out[i][j][self.index(p.irrep, e, f)] += we * wf;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Change of coordinates to the Hopf basis (finite providers): column `(s,i,j)` is `u^s_ij`.
    pub fn to_hopf(&self) -> Result<CMat> {
        let h = self
            .cat
            .provider()
            .hopf()
            .ok_or_else(|| Error::Unsupported("Hopf coordinates need a finite provider".into()))?;
        let mut phi = CMat::zeros(h.dim, self.dim);
        for (s, rep) in self.cat.table().reps.iter().enumerate() {
            for i in 0..rep.dim {
                for j in 0..rep.dim {
                    phi.set_column(self.index(s, i, j), &rep.coefficient(i, j));
                }
            }
        }
        Ok(phi)
    }

    fn highest_block(x: &[CMat]) -> Option<usize> {
        x.iter().rposition(|m| m.iter().any(|z| z.norm() > 0.0))
    }

    /// Twice the largest spin (or the largest table index) carrying a nonzero coefficient.
    pub fn support_top(&self, x: &CVec) -> Option<usize> {
        Self::highest_block(&self.blocks(x))
    }
}

impl HopfOps for PeterWeyl {
    fn dim(&self) -> usize {
        self.dim
    }

    fn unit(&self) -> CVec {
        self.coefficient(0, 0, 0)
    }

    fn mul(&self, x: &CVec, y: &CVec) -> Result<CVec> {
        let bx = self.blocks(x);
        let by = self.blocks(y);
        let t = self.cat.table();
        let mut out: Vec<CMat> = t.dims.iter().map(|&d| CMat::zeros(d, d)).collect();
        for (s, xs) in bx.iter().enumerate() {
            if xs.iter().all(|z| *z == ZERO) {
                continue;
            }
            for (u, yt) in by.iter().enumerate() {
                if yt.iter().all(|z| *z == ZERO) {
                    continue;
                }
                let fus = self.cat.fusion(s, u)?;
                let k = linalg::kron(xs, yt);
                for p in &fus.parts {
                    out[p.irrep] += p.iso.transpose() * &k * p.iso.map(|z| z.conj());
                }
            }
        }
        Ok(self.from_blocks(&out))
    }

    fn comul_basis(&self, i: usize) -> Result<Vec<(usize, usize, C64)>> {
        let (s, a, b) = self.decode(i);
        let d = self.cat.table().dims[s];
        Ok((0..d)
            .map(|k| (self.index(s, a, k), self.index(s, k, b), ONE))
            .collect())
    }

    fn counit(&self, x: &CVec) -> C64 {
        let b = self.blocks(x);
        b.iter().map(|m| m.trace()).sum()
    }

    fn antipode(&self, x: &CVec) -> Result<CVec> {
        let b = self.blocks(x);
        let y: Vec<CMat> = b.iter().map(|m| m.adjoint()).collect();
        self.star(&self.from_blocks(&y))
    }

    fn antipode_inv(&self, x: &CVec) -> Result<CVec> {
        let xs = self.star(x)?;
        self.star(&self.antipode(&xs)?)
    }

    fn star(&self, x: &CVec) -> Result<CVec> {
        let t = self.cat.table();
        let b = self.blocks(x);
        let mut out: Vec<CMat> = t.dims.iter().map(|&d| CMat::zeros(d, d)).collect();
        for (s, m) in b.iter().enumerate() {
            if m.iter().all(|z| *z == ZERO) {
                continue;
            }
            let (a, bb) = &self.star_maps[s];
            out[t.conj_index[s]] += a.transpose() * m.map(|z| z.conj()) * bb.transpose();
        }
        Ok(self.from_blocks(&out))
    }

    fn label(&self, i: usize) -> String {
        let (s, a, b) = self.decode(i);
        format!("u^{}_{a}{b}", self.cat.table().labels[s])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{function_algebra, kac_paljutkin, FiniteGroup, HopfAlgebraData};
    use crate::linalg::{max_abs, max_abs_vec};
    use crate::repcat::{Provider, SuQ2};

    fn pw_for(h: HopfAlgebraData) -> PeterWeyl {
        let cat = RepCategory::new(Provider::Finite(Arc::new(h)), 5).unwrap();
        PeterWeyl::new(cat)
    }

    #[test]
    fn finite_coordinates_match_hopf_structure() {
        for h in [function_algebra(&FiniteGroup::symmetric3()), kac_paljutkin()] {
            let pw = pw_for(h.clone());
            let phi = pw.to_hopf().unwrap();
            assert_eq!(phi.ncols(), h.dim);
            assert_eq!(linalg::rank(&phi), h.dim);
            for i in 0..h.dim {
                let ei = linalg::unit_vec(h.dim, i);
                for j in 0..h.dim {
                    let ej = linalg::unit_vec(h.dim, j);
                    let lhs = &phi * pw.mul(&ei, &ej).unwrap();
                    let rhs = h.mul(&(&phi * &ei), &(&phi * &ej));
                    assert!(max_abs_vec(&(lhs - rhs)) < 1e-10);
                }
                let lhs = &phi * pw.star(&ei).unwrap();
                assert!(max_abs_vec(&(lhs - h.star_of(&(&phi * &ei)))) < 1e-10);
                let lhs = &phi * pw.antipode(&ei).unwrap();
                assert!(max_abs_vec(&(lhs - h.antipode_of(&(&phi * &ei)))) < 1e-10);
                let mut lhs = CMat::zeros(h.dim, h.dim);
                for (a, b, c) in pw.comul_basis(i).unwrap() {
                    lhs += phi.column(a) * phi.column(b).transpose() * c;
                }
                assert!(max_abs(&(lhs - h.comul(&(&phi * &ei)))) < 1e-10);
            }
        }
    }

    #[test]
    fn suq2_coefficients_are_unitary_and_star_is_antimultiplicative() {
        let cat = RepCategory::new(Provider::SuQ2(SuQ2::new(0.5, 4).unwrap()), 1).unwrap();
        let pw = PeterWeyl::new(cat);
        for s in 0..3 {
            let d = s + 1;
            for i in 0..d {
                for j in 0..d {
                    let mut a = CVec::zeros(pw.dim());
                    let mut b = CVec::zeros(pw.dim());
                    for k in 0..d {
                        let uki = pw.coefficient(s, k, i);
                        let ukj = pw.coefficient(s, k, j);
                        a += pw.mul(&pw.star(&uki).unwrap(), &ukj).unwrap();
                        let uik = pw.coefficient(s, i, k);
                        let ujk = pw.coefficient(s, j, k);
                        b += pw.mul(&uik, &pw.star(&ujk).unwrap()).unwrap();
                    }
                    let target = if i == j { pw.unit() } else { CVec::zeros(pw.dim()) };
                    assert!(max_abs_vec(&(a - &target)) < 1e-10, "U*U at {s} {i} {j}");
                    assert!(max_abs_vec(&(b - &target)) < 1e-10, "UU* at {s} {i} {j}");
                }
            }
        }
        let x = pw.coefficient(1, 0, 1);
        let y = pw.coefficient(2, 1, 2);
        let lhs = pw.star(&pw.mul(&x, &y).unwrap()).unwrap();
        let rhs = pw.mul(&pw.star(&y).unwrap(), &pw.star(&x).unwrap()).unwrap();
        assert!(max_abs_vec(&(lhs - rhs)) < 1e-10);
        let xx = pw.star(&pw.star(&y).unwrap()).unwrap();
        assert!(max_abs_vec(&(xx - y)) < 1e-10);
    }
}
