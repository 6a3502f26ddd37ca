//! The Galois map `x (x) y -> x_1 (x) x_2 y` and the Miyashita-Ulbrich action.

use serde::Serialize;

use crate::duality::{CategoryProvider, Reconstruction, UniversalElement};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, ZERO};
use crate::repcat::Object;
use crate::report::CheckReport;
use crate::ydalg::YdOps;

/// `Gamma: B (x) B -> C[G] (x) B` as a matrix; column `i d + j` is
/// `Gamma(b_i (x) b_j)`, row `g d + l` the coefficient of `e_g (x) b_l`.
#[derive(Clone, Debug)]
pub struct GaloisMap {
    pub group_dim: usize,
    pub algebra_dim: usize,
    pub matrix: CMat,
    pub rank: usize,
    pub inverse: Option<CMat>,
}

impl GaloisMap {
    pub fn is_galois(&self) -> bool {
        self.inverse.is_some()
    }

    /// The inverse, or `NotGalois` carrying the rank.
    pub fn require_inverse(&self) -> Result<&CMat> {
        self.inverse.as_ref().ok_or(Error::NotGalois {
            rank: self.rank,
            source_dim: self.matrix.ncols(),
            target_dim: self.matrix.nrows(),
        })
    }

    /// `Gamma(x (x) y)`.
    pub fn apply(&self, x: &CVec, y: &CVec) -> CVec {
        &self.matrix * linalg::kron_vec(x, y)
    }
}

/// Assembles `Gamma` and inverts it when the rank allows.
pub fn galois_map(a: &dyn YdOps) -> Result<GaloisMap> {
    let (n, d) = (a.group().dim(), a.dim());
    let mut products = Vec::with_capacity(d * d);
    for l in 0..d {
        let bl = a.basis(l);
        for j in 0..d {
            products.push(a.mul(&bl, &a.basis(j))?);
        }
    }
    let mut matrix = CMat::zeros(n * d, d * d);
    for i in 0..d {
        for (g, l, c) in a.coact_basis(i)? {
            for j in 0..d {
                let p = &products[l * d + j];
                for (m, &z) in p.iter().enumerate() {
                    if z != ZERO {
                        matrix[(g * d + m, i * d + j)] += c * z;
                    }
                }
            }
        }
    }
    let rank = linalg::rank(&matrix);
    let inverse = if n == d && rank == d * d {
        matrix.clone().try_inverse()
    } else {
        None
    };
    Ok(GaloisMap {
        group_dim: n,
        algebra_dim: d,
        matrix,
        rank,
        inverse,
    })
}

/// `x |> a = Gamma^{-1}(x (x) 1)_1 a Gamma^{-1}(x (x) 1)_2` for a group basis vector `x`.
pub fn miyashita_ulbrich(a: &dyn YdOps, gm: &GaloisMap, x: usize, b: &CVec) -> Result<CVec> {
    let inv = gm.require_inverse()?;
    let d = a.dim();
    let rhs = linalg::kron_vec(&linalg::unit_vec(gm.group_dim, x), &a.unit());
    let coeffs = inv * rhs;
    let mut out = CVec::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let c = coeffs[i * d + j];
            if c.norm() <= 1e-14 {
                continue;
            }
            let left = a.mul(&a.basis(i), b)?;
            out += a.mul(&left, &a.basis(j))? * c;
        }
    }
    Ok(out)
}

/// Result of comparing the Miyashita-Ulbrich action with the declared one.
#[derive(Clone, Debug, Serialize)]
pub struct GaloisReport {
    pub group_dim: usize,
    pub algebra_dim: usize,
    pub rank: usize,
    pub galois: bool,
    pub checks: CheckReport,
}

/// Decides bijectivity of `Gamma` and, when bijective, checks
/// `Gamma Gamma^{-1} = 1` and the action on every pair of basis vectors.
pub fn galois_report(a: &dyn YdOps, tol: f64) -> Result<GaloisReport> {
    let gm = galois_map(a)?;
    let mut checks = CheckReport::new();
    checks.push_flag("bijective", gm.is_galois());
    if let Some(inv) = &gm.inverse {
        let m = gm.matrix.nrows();
        checks.push("inverse", linalg::max_abs(&(&gm.matrix * inv - CMat::identity(m, m))), tol);
        let mut worst = 0.0f64;
        for x in 0..gm.group_dim {
            for k in 0..a.dim() {
                let bk = a.basis(k);
                let mu = miyashita_ulbrich(a, &gm, x, &bk)?;
                worst = worst.max(linalg::max_abs_vec(&(mu - a.act_basis(x, &bk)?)));
            }
        }
        checks.push("miyashita_ulbrich_equals_action", worst, tol);
    }
    Ok(GaloisReport {
        group_dim: gm.group_dim,
        algebra_dim: gm.algebra_dim,
        rank: gm.rank,
        galois: gm.is_galois(),
        checks,
    })
}

/// `Rbar_U = sum_l T_l (x) S_l` with `T_l: 1 -> U`, `S_l: 1 -> conj(U)`, as
/// morphism vectors, plus the defect of the splitting.
pub fn split_rbar(p: &dyn CategoryProvider, u: &Object) -> Result<(Vec<(CVec, CVec)>, f64)> {
    let one = Object::unit();
    let ub = u.conj();
    let uub = u.tensor(&ub);
    let rbar = p.embed(&one, &uub, &p.category().rbar(u)?)?;
    let ta = p.hom_basis(&one, u)?;
    let sb = p.hom_basis(&one, &ub)?;
    let len = p.mor_len(&one, &uub)?;
    let mut cols = Vec::with_capacity(ta.ncols() * sb.ncols());
    for t in ta.column_iter() {
        let t = t.into_owned();
        for s in sb.column_iter() {
            let prod = p.tensor(&one, u, &t, &one, &ub, &s.into_owned())?;
            cols.push(CMat::from_column_slice(len, 1, prod.as_slice()));
        }
    }
    if cols.is_empty() {
        return Ok((Vec::new(), linalg::max_abs_vec(&rbar)));
    }
    let m = linalg::hstack(&cols, len);
    let c = linalg::pinv(&m) * &rbar;
    let defect = linalg::max_abs_vec(&(&m * &c - &rbar));
    let nb = sb.ncols();
    let pairs = ta
        .column_iter()
        .enumerate()
        .map(|(a, t)| {
            let mut s = CVec::zeros(sb.nrows());
            for b in 0..nb {
                s += sb.column(b) * c[a * nb + b];
            }
            (t.into_owned(), s)
        })
        .collect();
    Ok((pairs, defect))
}

/// `max_{i,j} |sum_l Gamma(pi(xi_i, T_l) (x) pi(conj xi_j, S_l)) - rho_j^{1/2} u_ij (x) 1|`
/// over the irreps `s` below `upto`.
pub fn galois_identity_check(rec: &Reconstruction, upto: usize, tol: f64) -> Result<CheckReport> {
    let gm = galois_map(rec)?;
    let p = rec.provider().clone();
    let cat = rec.category().clone();
    let pw = rec.peter_weyl().clone();
    let unit = rec.unit();
    let mut worst = 0.0f64;
    let mut split = 0.0f64;
    for s in 0..upto.min(rec.num_blocks()) {
        let u = Object::Irrep(s);
        let d = cat.table().dims[s];
        let rho = &cat.table().rho[s];
        if !linalg::is_diagonal(rho, 1e-12) {
            return Err(Error::Convention(format!("rho of irrep {s} is not diagonal")));
        }
        let (pairs, defect) = split_rbar(&*p, &u)?;
        split = split.max(defect);
        for i in 0..d {
            for j in 0..d {
                let mut lhs = CVec::zeros(gm.matrix.nrows());
                for (t, sl) in &pairs {
                    let x = rec.project(&UniversalElement::single(u.clone(), linalg::unit_vec(d, i), t.clone()))?;
                    let y = rec.project(&UniversalElement::single(u.conj(), linalg::unit_vec(d, j), sl.clone()))?;
                    lhs += gm.apply(&x, &y);
                }
                let uij = linalg::unit_vec(gm.group_dim, pw.index(s, i, j));
                let rhs = linalg::kron_vec(&uij, &unit) * rho[(j, j)].sqrt();
                worst = worst.max(linalg::max_abs_vec(&(lhs - rhs)));
            }
        }
    }
    let mut rep = CheckReport::new();
    rep.push("rbar_splits", split, tol);
    rep.push("galois_identity", worst, tol);
    Ok(rep)
}
