use super::{HopfAlgebraData, Tensor3};
use crate::error::{Error, Result};
use crate::linalg::{self, max_abs, max_abs_vec, CMat, CVec, ONE, ZERO};
use crate::report::CheckReport;

/// Residuals of every Hopf *-algebra axiom on basis elements, plus Haar positivity.
pub fn validate_hopf(h: &HopfAlgebraData, tol: f64) -> Result<CheckReport> {
    h.check_shapes()?;
    let n = h.dim;
    let e = |i: usize| h.basis(i);
    let mut rep = CheckReport::new();

    let mut assoc: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let ij = h.mul(&e(i), &e(j));
            for k in 0..n {
                let l = h.mul(&ij, &e(k));
                let rr = h.mul(&e(i), &h.mul(&e(j), &e(k)));
                assoc = assoc.max(max_abs_vec(&(l - rr)));
            }
        }
    }
    rep.push("associativity", assoc, tol);

    let mut unit: f64 = 0.0;
    for i in 0..n {
        unit = unit.max(max_abs_vec(&(h.mul(&h.unit, &e(i)) - e(i))));
        unit = unit.max(max_abs_vec(&(h.mul(&e(i), &h.unit) - e(i))));
    }
    rep.push("unit", unit, tol);

    let mut coassoc: f64 = 0.0;
    for i in 0..n {
        let d = h.comul(&e(i));
        // (Delta (x) id) vs (id (x) Delta) on the coefficient matrix
        let mut left = Tensor3::zeros(n, n, n);
        let mut right = Tensor3::zeros(n, n, n);
        for j in 0..n {
            for k in 0..n {
                let c = d[(j, k)];
                if c == ZERO {
                    continue;
                }
                for a in 0..n {
                    for b in 0..n {
                        left.add(a, b, k, c * h.comult.get(j, a, b));
                        right.add(j, a, b, c * h.comult.get(k, a, b));
                    }
                }
            }
        }
        coassoc = coassoc.max(left.max_abs_diff(&right));
    }
    rep.push("coassociativity", coassoc, tol);

    let mut counit: f64 = 0.0;
    for i in 0..n {
        let d = h.comul(&e(i));
        let l = d.transpose() * &h.counit;
        let rr = &d * &h.counit;
        counit = counit.max(max_abs_vec(&(l - e(i))).max(max_abs_vec(&(rr - e(i)))));
    }
    rep.push("counit", counit, tol);

    let mut comult_hom: f64 = 0.0;
    for i in 0..n {
        let di = h.comul(&e(i));
        for j in 0..n {
            let dj = h.comul(&e(j));
            let lhs = h.comul(&h.mul(&e(i), &e(j)));
            comult_hom = comult_hom.max(max_abs(&(lhs - h.mul2(&di, &dj))));
        }
    }
    let one2 = &h.unit * h.unit.transpose();
    comult_hom = comult_hom.max(max_abs(&(h.comul(&h.unit) - one2)));
    rep.push("comultiplication_homomorphism", comult_hom, tol);

    let mut counit_hom: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = h.counit_of(&h.mul(&e(i), &e(j))) - h.counit[i] * h.counit[j];
            counit_hom = counit_hom.max(v.norm());
        }
    }
    counit_hom = counit_hom.max((h.counit_of(&h.unit) - ONE).norm());
    rep.push("counit_homomorphism", counit_hom, tol);

    let mut anti: f64 = 0.0;
    for i in 0..n {
        let d = h.comul(&e(i));
        let mut l = CVec::zeros(n);
        let mut rr = CVec::zeros(n);
        for j in 0..n {
            for k in 0..n {
                let c = d[(j, k)];
                if c == ZERO {
                    continue;
                }
                l += h.mul(&h.antipode_of(&e(j)), &e(k)) * c;
                rr += h.mul(&e(j), &h.antipode_of(&e(k))) * c;
            }
        }
        let target = &h.unit * h.counit[i];
        anti = anti.max(max_abs_vec(&(l - &target)).max(max_abs_vec(&(rr - target))));
    }
    rep.push("antipode", anti, tol);

    let mut invol: f64 = 0.0;
    let mut antihom: f64 = 0.0;
    let mut star_comult: f64 = 0.0;
    for i in 0..n {
        let si = h.star_of(&e(i));
        invol = invol.max(max_abs_vec(&(h.star_of(&si) - e(i))));
        for j in 0..n {
            let sj = h.star_of(&e(j));
            let lhs = h.star_of(&h.mul(&e(i), &e(j)));
            antihom = antihom.max(max_abs_vec(&(lhs - h.mul(&sj, &si))));
        }
        let lhs = h.comul(&si);
        let d = h.comul(&e(i));
        let mut rhs = CMat::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                let c = d[(j, k)];
                if c == ZERO {
                    continue;
                }
                let sj = h.star_of(&e(j));
                let sk = h.star_of(&e(k));
                rhs += (&sj * sk.transpose()) * c.conj();
            }
        }
        star_comult = star_comult.max(max_abs(&(lhs - rhs)));
    }
    invol = invol.max(max_abs_vec(&(h.star_of(&h.unit) - &h.unit)));
    rep.push("star_involution", invol, tol);
    rep.push("star_antihomomorphism", antihom, tol);
    rep.push("comultiplication_star", star_comult, tol);

    match haar(h, tol) {
        Ok(hv) => {
            rep.push("haar_exists", 0.0, tol);
            rep.push("haar_positivity", haar_positivity_defect(h, &hv), tol);
        }
        Err(err) => {
            rep.push_detail("haar_exists", 1.0, tol, err.to_string());
        }
    }
    Ok(rep)
}

/// Largest violation of `h(x* x) >= 0` over basis elements and seeded random elements.
pub(crate) fn haar_positivity_defect(h: &HopfAlgebraData, hv: &CVec) -> f64 {
    let n = h.dim;
    let mut worst: f64 = 0.0;
    let mut eval = |x: &CVec| {
        let v = hv.dot(&h.mul(&h.star_of(x), x));
        let scale = x.norm_squared().max(1.0);
        worst = worst.max((-v.re / scale).max(v.im.abs() / scale));
    };
    for i in 0..n {
        eval(&h.basis(i));
    }
    let mut g = linalg::rng(0x4a41);
    for _ in 0..100 {
        eval(&linalg::random_complex_vector(&mut g, n));
    }
    worst
}

/// The normalized two-sided invariant functional, as coordinates `h_i = h(e_i)`.
pub fn haar(h: &HopfAlgebraData, tol: f64) -> Result<CVec> {
    let n = h.dim;
    // rows: left invariance (i, j) then right invariance (i, k)
    let mut sys = CMat::zeros(2 * n * n, n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                sys[(row, k)] += h.comult.get(i, j, k);
            }
            sys[(row, i)] -= h.unit[j];
        }
        for k in 0..n {
            let row = n * n + i * n + k;
            for j in 0..n {
                sys[(row, j)] += h.comult.get(i, j, k);
            }
            sys[(row, i)] -= h.unit[k];
        }
    }
    let ns = linalg::null_space_floor(&sys, linalg::RANK_CUTOFF, 1.0);
    if ns.ncols() != 1 {
        return Err(Error::NotQuantumGroup(format!(
            "invariant functionals form a space of dimension {}",
            ns.ncols()
        )));
    }
    let v: CVec = ns.column(0).into();
    let at_one = v.dot(&h.unit);
    if at_one.norm() < 1e-12 {
        return Err(Error::NotQuantumGroup("invariant functional vanishes on the unit".into()));
    }
    let hv = v / at_one;
    let defect = haar_positivity_defect(h, &hv);
    if defect > tol.max(1e-9) {
        return Err(Error::NotQuantumGroup(format!(
            "invariant functional is not positive (defect {defect:.3e})"
        )));
    }
    Ok(hv)
}

/// The dual Hopf *-algebra on the dual basis `e^i`; double dualization is the identity on coordinates.
pub fn dual_hopf(h: &HopfAlgebraData) -> Result<HopfAlgebraData> {
    h.check_shapes()?;
    let n = h.dim;
    let mut mult = Tensor3::zeros(n, n, n);
    let mut comult = Tensor3::zeros(n, n, n);
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                mult.set(a, b, k, h.comult.get(k, a, b));
                comult.set(k, a, b, h.mult.get(a, b, k));
            }
        }
    }
    let antipode = h.antipode.transpose();
    let star = (h.star.map(|z| z.conj()) * &h.antipode).transpose();
    let labels = h.basis_labels.iter().map(|l| format!("{l}^")).collect();
    HopfAlgebraData::new(labels, mult, h.counit.clone(), comult, h.unit.clone(), antipode, star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{function_algebra, group_algebra, kac_paljutkin, FiniteGroup};

    #[test]
    fn s3_function_algebra_validates() {
        let h = function_algebra(&FiniteGroup::symmetric3());
        let rep = validate_hopf(&h, 1e-12).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn zero_antipode_breaks_exactly_the_antipode_axiom() {
        let mut h = function_algebra(&FiniteGroup::cyclic(2));
        h.antipode = CMat::zeros(2, 2);
        let rep = validate_hopf(&h, 1e-12).unwrap();
        let failed: Vec<_> = rep.failures().iter().map(|c| c.name.clone()).collect();
        assert_eq!(failed, vec!["antipode".to_string()]);
        assert!((rep.residual("antipode") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_on_function_algebra_is_uniform() {
        let h = function_algebra(&FiniteGroup::symmetric3());
        let hv = haar(&h, 1e-12).unwrap();
        for i in 0..6 {
            assert!((hv[i] - crate::linalg::r(1.0 / 6.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn haar_on_group_algebra_is_identity_coefficient() {
        let h = group_algebra(&FiniteGroup::symmetric3());
        let hv = haar(&h, 1e-12).unwrap();
        assert!((hv[0] - ONE).norm() < 1e-12);
        for i in 1..6 {
            assert!(hv[i].norm() < 1e-12);
        }
    }

    #[test]
    fn dual_of_function_algebra_is_group_algebra() {
        let g = FiniteGroup::symmetric3();
        let d = dual_hopf(&function_algebra(&g)).unwrap();
        let ga = group_algebra(&g);
        assert!(d.mult.max_abs_diff(&ga.mult) < 1e-14);
        assert!(d.comult.max_abs_diff(&ga.comult) < 1e-14);
        assert!(max_abs(&(&d.star - &ga.star)) < 1e-14);
        assert!(max_abs(&(&d.antipode - &ga.antipode)) < 1e-14);
    }

    #[test]
    fn double_dual_is_identity_on_kac_paljutkin() {
        let h = kac_paljutkin();
        let dd = dual_hopf(&dual_hopf(&h).unwrap()).unwrap();
        assert!(dd.mult.max_abs_diff(&h.mult) < 1e-10);
        assert!(dd.comult.max_abs_diff(&h.comult) < 1e-10);
        assert!(max_abs(&(&dd.star - &h.star)) < 1e-10);
        assert!(max_abs(&(&dd.antipode - &h.antipode)) < 1e-10);
        let rep = validate_hopf(&dual_hopf(&h).unwrap(), 1e-10).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn kac_paljutkin_validates_and_is_noncommutative() {
        let h = kac_paljutkin();
        let rep = validate_hopf(&h, 1e-12).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(!h.is_commutative(1e-12));
        let d = dual_hopf(&h).unwrap();
        assert!(!d.is_commutative(1e-12));
    }
}
