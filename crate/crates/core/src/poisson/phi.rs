//! The states `phi_U(T) = Tr(T rho^-1) / dim_q U`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopf::HopfOps;
use crate::linalg::{self, CMat, C64, ZERO};
use crate::repcat::{Object, PeterWeyl, RepCategory};
use crate::report::CheckReport;

/// `phi(T) = Tr(T density)`; `density = rho^-1 / dim_q`.
#[derive(Clone, Debug)]
pub struct PhiState {
    pub object: Object,
    pub density: CMat,
    pub qdim: f64,
}

impl PhiState {
    pub fn dim(&self) -> usize {
        self.density.nrows()
    }

    pub fn apply(&self, t: &CMat) -> C64 {
        (t * &self.density).trace()
    }

    /// Eigenvalues of the density, in decreasing order.
    pub fn weights(&self) -> Vec<f64> {
        let mut w: Vec<f64> = linalg::eigenvalues(&self.density).iter().map(|z| z.re).collect();
        w.sort_by(|a, b| b.total_cmp(a));
        w
    }

    /// `(phi (x) iota)(M)` for `M` acting on `H_U (x) K`, with `K` of shape `rows x cols`.
    pub fn partial(&self, m: &CMat, rows: usize, cols: usize) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros(rows, cols);
        for i in 0..d {
            for j in 0..d {
                let w = self.density[(j, i)];
                if w == ZERO {
                    continue;
                }
                out += m.view((i * rows, j * cols), (rows, cols)) * w;
            }
        }
        out
    }
}

pub fn phi_state(cat: &RepCategory, obj: &Object) -> Result<PhiState> {
    let rho = cat.rho(obj)?;
    let qdim = rho.trace().re;
    let inv = rho
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Convention(format!("rho of {obj:?} is singular")))?;
    Ok(PhiState {
        object: obj.clone(),
        density: inv / linalg::r(qdim),
        qdim,
    })
}

/// `|(iota (x) phi)(U21* (1 (x) T) U21) - phi(T) 1|` in Peter-Weyl coordinates.
pub fn invariance_residual(pw: &PeterWeyl, phi: &PhiState, t: &CMat) -> Result<f64> {
    let u = pw.object_coefficients(&phi.object)?;
    let d = phi.dim();
    let mut lhs = linalg::CVec::zeros(pw.dim());
    for i in 0..d {
        for j in 0..d {
            // phi(E_ij)
            let w = phi.density[(j, i)];
            if w == ZERO {
                continue;
            }
            for k in 0..d {
                let uki = pw.star(&u[k][i])?;
                for l in 0..d {
                    if t[(k, l)] == ZERO {
                        continue;
                    }
                    lhs += pw.mul(&uki, &u[l][j])? * (t[(k, l)] * w);
                }
            }
        }
    }
    Ok(linalg::max_abs_vec(&(lhs - pw.unit() * phi.apply(t))))
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub label: String,
    pub qdim: f64,
    pub weights: Vec<f64>,
    pub checks: CheckReport,
}

/// Unitality, positivity and the invariance identity on `samples` seeded random `T`.
pub fn phi_report(pw: &PeterWeyl, obj: &Object, samples: usize, seed: u64, tol: f64) -> Result<PhiReport> {
    let cat = pw.category();
    let phi = phi_state(cat, obj)?;
    let d = phi.dim();
    let mut checks = CheckReport::new();
    checks.push("unital", (phi.apply(&CMat::identity(d, d)) - linalg::ONE).norm(), tol);
    let herm = linalg::max_abs(&(&phi.density - phi.density.adjoint()));
    let neg = phi.weights().iter().fold(0.0f64, |a, &w| a.max(-w));
    checks.push("positive", herm.max(neg), tol);
    let mut g = linalg::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let t = linalg::random_complex_matrix(&mut g, d, d);
        worst = worst.max(invariance_residual(pw, &phi, &t)?);
    }
    checks.push("invariance", worst, tol);
    Ok(PhiReport {
        label: format!("{obj:?}"),
        qdim: phi.qdim,
        weights: phi.weights(),
        checks,
    })
}

/// `|phi_{U (x) V} - phi_U (x) phi_V|` on densities.
pub fn multiplicativity_residual(cat: &RepCategory, u: &Object, v: &Object) -> Result<f64> {
    let a = phi_state(cat, u)?;
    let b = phi_state(cat, v)?;
    let ab = phi_state(cat, &u.tensor(v))?;
    Ok(linalg::max_abs(&(ab.density - linalg::kron(&a.density, &b.density))))
}
