//! The spectral functor `E(U) = C_B(1, U)` of an ergodic action, with
//! `E_2(T (x) S) = (T (x) iota) S` and the scalar product `S^* T = (T, S) 1`.

use std::sync::Arc;

use serde::Serialize;

use crate::duality::{CategoryProvider, CbCategory};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, C64};
use crate::repcat::{Object, RepCategory};
use crate::report::CheckReport;
use crate::ydalg::{fixed_point_basis, YdOps};

#[derive(Clone, Debug, Serialize)]
pub struct SpectralPair {
    pub s: usize,
    pub t: usize,
    pub dim_product: usize,
    pub dim_target: usize,
    pub isometry_residual: f64,
    pub unitary: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralFunctor {
    pub dims: Vec<usize>,
    pub pairs: Vec<SpectralPair>,
    pub full_multiplicity: bool,
    pub checks: CheckReport,
}

struct Spaces<'a> {
    cb: &'a CbCategory,
    unit: CVec,
}

impl Spaces<'_> {
    /// `(T, S)` defined by `S^* T = (T, S) 1`; also returns the distance of `S^* T` from scalars.
    fn inner(&self, u: &Object, t: &CVec, s: &CVec) -> Result<(C64, f64)> {
        let one = Object::unit();
        let sa = self.cb.adjoint(&one, u, s)?;
        let st = self.cb.compose(&one, u, &one, &sa, t)?;
        let c = self.unit.dotc(&st) / self.unit.norm_squared();
        Ok((c, linalg::max_abs_vec(&(st - &self.unit * c))))
    }

    /// Gram matrix of the columns of `basis` and the worst non-scalar defect.
    fn gram(&self, u: &Object, basis: &[CVec]) -> Result<(CMat, f64)> {
        let m = basis.len();
        let mut g = CMat::zeros(m, m);
        let mut defect = 0.0f64;
        for a in 0..m {
            for b in 0..m {
                let (z, res) = self.inner(u, &basis[b], &basis[a])?;
                g[(a, b)] = z;
                defect = defect.max(res);
            }
        }
        Ok((g, defect))
    }
}

fn columns(m: &CMat) -> Vec<CVec> {
    m.column_iter().map(|c| c.into_owned()).collect()
}

/// Builds `E` on the irreps below `upto` (all irreps when `None`) and decides
/// full quantum multiplicity by comparing `dim E(U) dim E(V)` with `dim E(U (x) V)`.
pub fn spectral_functor(
    alg: Arc<dyn YdOps>,
    cat: Arc<RepCategory>,
    upto: Option<usize>,
    tol: f64,
) -> Result<SpectralFunctor> {
    let fixed = fixed_point_basis(&*alg)?.ncols();
    if fixed != 1 {
        return Err(Error::NotErgodic(fixed));
    }
    let ns = upto.unwrap_or(cat.num_irreps()).min(cat.num_irreps());
    let cb = CbCategory::new(alg.clone(), cat)?;
    let sp = Spaces { cb: &cb, unit: alg.unit() };
    let one = Object::unit();
    let mut bases = Vec::with_capacity(ns);
    let mut dims = Vec::with_capacity(ns);
    let mut scalar_defect = 0.0f64;
    let mut positivity = 0.0f64;
    for s in 0..ns {
        let u = Object::Irrep(s);
        let b = columns(&*cb.hom_basis(&one, &u)?);
        let (g, defect) = sp.gram(&u, &b)?;
        scalar_defect = scalar_defect.max(defect);
        // the scalar product is positive definite on E(U)
        positivity = positivity.max(linalg::max_abs(&(&g - g.adjoint())));
        for lam in linalg::eigenvalues(&g) {
            if lam.re <= tol {
                positivity = f64::INFINITY;
            }
        }
        dims.push(b.len());
        bases.push((g, b));
    }
    let mut pairs = Vec::new();
    let mut iso = 0.0f64;
    for s in 0..ns {
        for t in 0..ns {
            let (u, v) = (Object::Irrep(s), Object::Irrep(t));
            let uv = u.tensor(&v);
            let (gu, bu) = &bases[s];
            let (gv, bv) = &bases[t];
            let mut images = Vec::with_capacity(bu.len() * bv.len());
            for x in bu {
                let xr = cb.tensor_right(&one, &u, x, &v)?;
                for y in bv {
                    images.push(cb.compose(&one, &v, &uv, &xr, y)?);
                }
            }
            let (g, defect) = sp.gram(&uv, &images)?;
            scalar_defect = scalar_defect.max(defect);
            let res = if images.is_empty() {
                0.0
            } else {
                linalg::max_abs(&(g - linalg::kron(gu, gv)))
            };
            iso = iso.max(res);
            let dim_target = cb.hom_basis(&one, &uv)?.ncols();
            pairs.push(SpectralPair {
                s,
                t,
                dim_product: images.len(),
                dim_target,
                isometry_residual: res,
                unitary: images.len() == dim_target,
            });
        }
    }
    let mut checks = CheckReport::new();
    checks.push("scalar_inner_product", scalar_defect, tol);
    checks.push("positive_definite", positivity, tol);
    checks.push("e2_isometric", iso, tol);
    let full_multiplicity = pairs.iter().all(|p| p.unitary);
    Ok(SpectralFunctor {
        dims,
        pairs,
        full_multiplicity,
        checks,
    })
}
