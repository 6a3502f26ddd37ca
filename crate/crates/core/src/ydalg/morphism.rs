//! Equivariant *-homomorphisms between YD algebras over the same group.

use super::{Coordinates, YdOps};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::report::CheckReport;

/// Matrix taking coordinates of the coordinate algebra in `from` to those in `to`.
pub fn coordinate_change(from: &Coordinates, to: &Coordinates, n: usize) -> Result<CMat> {
    match (from, to) {
        (Coordinates::Hopf, Coordinates::Hopf) => Ok(CMat::identity(n, n)),
        (Coordinates::PeterWeyl(a), Coordinates::PeterWeyl(b)) => {
            if a.num_blocks() != b.num_blocks() {
                return Err(Error::mismatch("Peter-Weyl tables", a.num_blocks(), b.num_blocks()));
            }
            Ok(CMat::identity(n, n))
        }
        // columns of phi are u^s_ij in Hopf coordinates
        (Coordinates::PeterWeyl(pw), Coordinates::Hopf) => pw.to_hopf(),
        (Coordinates::Hopf, Coordinates::PeterWeyl(pw)) => pw
            .to_hopf()?
            .try_inverse()
            .ok_or_else(|| Error::NotQuantumGroup("matrix coefficients do not span".into())),
    }
}

/// Residuals of `f: src -> dst` (columns are images of basis vectors) being a
/// unital *-homomorphism intertwining coactions and actions.
pub fn check_yd_morphism(src: &dyn YdOps, dst: &dyn YdOps, f: &CMat, tol: f64) -> Result<CheckReport> {
    let (ds, dd) = (src.dim(), dst.dim());
    if f.shape() != (dd, ds) {
        return Err(Error::shape("morphism matrix", format!("{dd}x{ds}"), format!("{:?}", f.shape())));
    }
    let n = src.group().dim();
    if dst.group().dim() != n {
        return Err(Error::mismatch("coordinate algebra dimension", n, dst.group().dim()));
    }
    let conv = coordinate_change(&src.coordinates(), &dst.coordinates(), n)?;
    let col = |k: usize| -> CVec { f.column(k).into_owned() };
    let mut rep = CheckReport::new();
    rep.push("unit", linalg::max_abs_vec(&(f * src.unit() - dst.unit())), tol);
    let (mut mult, mut star, mut coact, mut act) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let xs = src.group_test_indices();
    for i in 0..ds {
        let bi = src.basis(i);
        for j in 0..ds {
            let lhs = f * src.mul(&bi, &src.basis(j))?;
            let rhs = dst.mul(&col(i), &col(j))?;
            mult = mult.max(linalg::max_abs_vec(&(lhs - rhs)));
        }
        let lhs = f * src.star(&bi)?;
        star = star.max(linalg::max_abs_vec(&(lhs - dst.star(&col(i))?)));
        // alpha(f b) = (conv (x) f) alpha(b), as n x d coefficient matrices
        let lhs = dst.coact(&col(i))?;
        let rhs = &conv * src.coact(&bi)? * f.transpose();
        coact = coact.max(linalg::max_abs(&(lhs - rhs)));
        for &x in &xs {
            let lhs = f * src.act_basis(x, &bi)?;
            let y: CVec = conv.column(x).into_owned();
            let rhs = dst.act(&y, &col(i))?;
            act = act.max(linalg::max_abs_vec(&(lhs - rhs)));
        }
    }
    rep.push("multiplicative", mult, tol);
    rep.push("star", star, tol);
    rep.push("coaction_equivariant", coact, tol);
    rep.push("action_equivariant", act, tol);
    Ok(rep)
}
