//! Natural transformations `iota (x) V -> iota (x) W` stored by their
//! components `eta_s: H_s (x) H_V -> H_s (x) H_W` on the irreducibles, and
//! `P_U(eta)_X = (phi_U (x) iota)(eta_{U (x) X})` by partial categorical traces.
//!
//! `eta_{U_t (x) U_s} = sum_m (W_m (x) 1) eta_{r_m} (W_m* (x) 1)`; this is the only
//! place naturality enters, since `End(U_s)` is scalar.

use std::sync::Arc;

use serde::Serialize;

use super::markov::{certified_blocks, markov_matrix, phis};
use super::Measure;
use crate::duality::{CategoryProvider, CbCategory};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, ONE};
use crate::repcat::{Object, RepCategory};
use crate::report::CheckReport;
use crate::ydalg::{DualYd, YdOps};

#[derive(Clone, Debug)]
pub struct NatTransBlocks {
    pub source: Object,
    pub target: Object,
    pub dim_source: usize,
    pub dim_target: usize,
    /// `blocks[s]` is `(d_s dim W) x (d_s dim V)`, rows `a dim W + p`.
    pub blocks: Vec<CMat>,
}

fn block_object(s: usize, v: &Object) -> Object {
    Object::Irrep(s).tensor(v)
}

impl NatTransBlocks {
    /// Number of stored components.
    pub fn level(&self) -> usize {
        self.blocks.len()
    }

    /// `(iota_X (x) T)_X` for `T: V -> W`.
    pub fn constant(cat: &RepCategory, v: &Object, w: &Object, t: &CMat, level: usize) -> Result<Self> {
        let (dv, dw) = (cat.dim(v)?, cat.dim(w)?);
        if t.shape() != (dw, dv) {
            return Err(Error::shape("constant transformation", format!("{dw}x{dv}"), format!("{:?}", t.shape())));
        }
        let blocks = (0..level)
            .map(|s| {
                let d = cat.table().dims[s];
                linalg::kron(&CMat::identity(d, d), t)
            })
            .collect();
        Ok(NatTransBlocks {
            source: v.clone(),
            target: w.clone(),
            dim_source: dv,
            dim_target: dw,
            blocks,
        })
    }

    /// Largest intertwining defect of the components.
    pub fn naturality_residual(&self, cat: &RepCategory) -> Result<f64> {
        let mut worst = 0.0f64;
        for (s, b) in self.blocks.iter().enumerate() {
            let res = cat.intertwining_residual(&block_object(s, &self.source), &block_object(s, &self.target), b)?;
            worst = worst.max(res);
        }
        Ok(worst)
    }

    pub fn max_diff(&self, other: &NatTransBlocks) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| linalg::max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }

    /// Reads a morphism of `C_B(V, W)` over the dual as components: the
    /// coefficient of `E^s_ab` becomes the `(a, b)` block of `eta_s`.
    pub fn from_dual_morphism(dual: &DualYd, v: &Object, w: &Object, t: &CVec, level: usize) -> Result<Self> {
        let cat = dual.category();
        let (dv, dw) = (cat.dim(v)?, cat.dim(w)?);
        let m = dv * dw;
        if t.len() != m * dual.dim() {
            return Err(Error::mismatch("dual morphism length", t.len(), m * dual.dim()));
        }
        let blocks = (0..level.min(dual.num_blocks()))
            .map(|s| {
                let d = dual.block_dims()[s];
                let mut b = CMat::zeros(d * dw, d * dv);
                for a in 0..d {
                    for c in 0..d {
                        let comp = linalg::unvec(&t.as_slice()[dual.index(s, a, c) * m..][..m], dw, dv);
                        b.view_mut((a * dw, c * dv), (dw, dv)).copy_from(&comp);
                    }
                }
                b
            })
            .collect();
        Ok(NatTransBlocks {
            source: v.clone(),
            target: w.clone(),
            dim_source: dv,
            dim_target: dw,
            blocks,
        })
    }
}

/// `P_mu(eta)` on the components `s < out_n` (all stored components when `None`).
pub fn categorical_markov(
    cat: &RepCategory,
    mu: &Measure,
    eta: &NatTransBlocks,
    out_n: Option<usize>,
) -> Result<NatTransBlocks> {
    let ph = phis(cat, mu)?;
    let (dv, dw) = (eta.dim_source, eta.dim_target);
    let n = out_n.unwrap_or(eta.level()).min(eta.level());
    let dims = &cat.table().dims;
    let mut blocks = Vec::with_capacity(n);
    for s in 0..n {
        let ds = dims[s];
        let mut out = CMat::zeros(ds * dw, ds * dv);
        for (t, wt, phi) in &ph {
            let fus = cat.fusion(*t, s)?;
            let mut big = CMat::zeros(dims[*t] * ds * dw, dims[*t] * ds * dv);
            for p in &fus.parts {
                let er = eta
                    .blocks
                    .get(p.irrep)
                    .ok_or_else(|| Error::truncation(p.irrep, eta.level() - 1))?;
                let left = linalg::kron(&p.iso, &CMat::identity(dw, dw));
                let right = linalg::kron(&p.iso, &CMat::identity(dv, dv));
                big += left * er * right.adjoint();
            }
            out += phi.partial(&big, ds * dw, ds * dv) * linalg::r(*wt);
        }
        blocks.push(out);
    }
    Ok(NatTransBlocks {
        source: eta.source.clone(),
        target: eta.target.clone(),
        dim_source: dv,
        dim_target: dw,
        blocks,
    })
}

/// Dimension of the `P_mu`-harmonic natural transformations with components
/// below `level`, parametrized blockwise by `Hom_G(U_s (x) V, U_s (x) W)`.
/// Returns `(dimension, worst defect of the image lying in those Hom spaces)`.
pub fn nat_harmonic_dim(
    cat: &RepCategory,
    mu: &Measure,
    v: &Object,
    w: &Object,
    level: usize,
) -> Result<(usize, f64)> {
    let out_n = certified_blocks(cat, mu, level)?;
    if out_n == 0 {
        return Err(Error::truncation(mu.support().into_iter().max().unwrap_or(0), level - 1));
    }
    let (dv, dw) = (cat.dim(v)?, cat.dim(w)?);
    let homs: Vec<Arc<CMat>> = (0..level)
        .map(|s| cat.hom(&block_object(s, v), &block_object(s, w)))
        .collect::<Result<_>>()?;
    let offs: Vec<usize> = homs
        .iter()
        .scan(0, |acc, h| {
            let o = *acc;
            *acc += h.ncols();
            Some(o)
        })
        .collect();
    let total: usize = homs.iter().map(|h| h.ncols()).sum();
    let rows: usize = homs[..out_n].iter().map(|h| h.ncols()).sum();
    let mut p = CMat::zeros(rows, total);
    let mut defect = 0.0f64;
    for (r, h) in homs.iter().enumerate() {
        let dr = cat.table().dims[r];
        for c in 0..h.ncols() {
            let mut blocks: Vec<CMat> = (0..level)
                .map(|s| {
                    let d = cat.table().dims[s];
                    CMat::zeros(d * dw, d * dv)
                })
                .collect();
            blocks[r] = linalg::unvec(h.column(c).as_slice(), dr * dw, dr * dv);
            let eta = NatTransBlocks {
                source: v.clone(),
                target: w.clone(),
                dim_source: dv,
                dim_target: dw,
                blocks,
            };
            let img = categorical_markov(cat, mu, &eta, Some(out_n))?;
            for (s, b) in img.blocks.iter().enumerate() {
                let (coords, res) = linalg::coords_in(&homs[s], &linalg::vec_of(b));
                defect = defect.max(res);
                p.view_mut((offs[s], offs[r] + c), (coords.len(), 1)).copy_from(&coords);
            }
        }
    }
    for i in 0..rows {
        p[(i, i)] -= ONE;
    }
    Ok((linalg::null_space_floor(&p, linalg::RANK_CUTOFF, 1.0).ncols(), defect))
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentificationReport {
    pub level: usize,
    pub certified_blocks: usize,
    pub cb_dim: usize,
    pub nat_dim: usize,
    pub checks: CheckReport,
}

/// Compares `C_B(V, W)` over the dual with natural transformations: the
/// blockwise reading is a bijection onto natural families, and it intertwines
/// `P_mu` on the algebra leg with the partial-trace operator.
pub fn identification_check(
    dual: Arc<DualYd>,
    mu: &Measure,
    v: &Object,
    w: &Object,
    tol: f64,
) -> Result<IdentificationReport> {
    let cat = dual.category().clone();
    let level = dual.num_blocks();
    let out_n = certified_blocks(&cat, mu, level)?;
    if out_n == 0 {
        return Err(Error::truncation(mu.support().into_iter().max().unwrap_or(0), level - 1));
    }
    let (dv, dw) = (cat.dim(v)?, cat.dim(w)?);
    let m = dv * dw;
    let nb = dual.dim();
    let cb = CbCategory::new(dual.clone(), cat.clone())?;
    let basis = cb.hom_basis(v, w)?;
    let nat_dim: usize = (0..level)
        .map(|s| Ok(cat.hom(&block_object(s, v), &block_object(s, w))?.ncols()))
        .sum::<Result<usize>>()?;
    let pm = markov_matrix(&dual, mu, out_n)?;
    let out_dim = pm.nrows();

    let mut checks = CheckReport::new();
    checks.push_flag("bijection_dims", basis.ncols() == nat_dim);
    let (mut natural, mut commutes, mut preserved) = (0.0f64, 0.0f64, 0.0f64);
    for col in basis.column_iter() {
        let t = col.into_owned();
        let eta = NatTransBlocks::from_dual_morphism(&dual, v, w, &t, level)?;
        natural = natural.max(eta.naturality_residual(&cat)?);

        // P_mu on the algebra leg of every matrix entry
        let comps = CMat::from_column_slice(m, nb, t.as_slice());
        let img = comps * pm.transpose();
        let mut padded = CMat::zeros(m, nb);
        padded.columns_mut(0, out_dim).copy_from(&img);
        let pt = CVec::from_column_slice(padded.as_slice());
        let lhs = NatTransBlocks::from_dual_morphism(&dual, v, w, &pt, out_n)?;
        let rhs = categorical_markov(&cat, mu, &eta, Some(out_n))?;
        commutes = commutes.max(lhs.max_diff(&rhs));
        preserved = preserved.max(cb.defining_residual(v, w, &pt)?);
    }
    checks.push("components_natural", natural, tol);
    checks.push("markov_commutes", commutes, tol);
    checks.push("markov_preserves_cb", preserved, tol);
    Ok(IdentificationReport {
        level,
        certified_blocks: out_n,
        cb_dim: basis.ncols(),
        nat_dim,
        checks,
    })
}
