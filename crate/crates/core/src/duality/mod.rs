//! Both directions of the correspondence between braided-commutative YD algebras
//! and tensor categories generated by `Rep G`.
//!
//! * algebra to category: [`CbCategory`] solves for `C_B(U, V)` and carries the
//!   one-sided tensor products,
//! * category to algebra: [`Reconstruction`] realizes `B` from any
//!   [`CategoryProvider`],
//! * [`roundtrip_lambda`] and [`equivalence_report`] certify the two roundtrips.

pub mod cb;
pub mod provider;
pub mod reconstruct;
pub mod roundtrip;

use std::sync::Arc;

pub use cb::{check_unit_endomorphisms, module_tensor_unitary, CbCategory, CbHom, ModuleTensor};
pub use provider::{CategoryProvider, MatrixCategory, MatrixKind};
pub use reconstruct::{
    membership_residual, rhd_tilde, star_bullet, universal_product, Reconstruction, UniversalElement, UniversalTerm,
};
pub use roundtrip::{
    equivalence_report, lambda_matrix, pushforward, roundtrip_lambda, Equivalence, EquivalencePair,
    EquivalenceReport, LambdaReport, PushforwardPair, PushforwardReport,
};

use crate::error::Result;
use crate::linalg::{CMat, CVec};
use crate::repcat::{Object, RepCategory};
use crate::ydalg::{RegularYDAlgebra, YdOps};

/// Basis of `C_B(U, V)`.
pub fn cb_hom(alg: Arc<dyn YdOps>, cat: Arc<RepCategory>, u: &Object, v: &Object) -> Result<CbHom> {
    CbCategory::new(alg, cat)?.cb_hom(u, v)
}

/// `S (x) T` in `C_B` for `S: U -> V`, `T: W -> Z`.
pub fn cb_tensor(
    cb: &CbCategory,
    (u, v, s): (&Object, &Object, &CVec),
    (w, z, t): (&Object, &Object, &CVec),
) -> Result<CVec> {
    cb.tensor(u, v, s, w, z, t)
}

/// `pi` of a universal element.
pub fn project_pi(rec: &Reconstruction, x: &UniversalElement) -> Result<CVec> {
    rec.project(x)
}

/// `alpha` of a reconstructed element as a dense coefficient matrix.
pub fn coaction_alpha(rec: &Reconstruction, b: &CVec) -> Result<CMat> {
    rec.coact(b)
}

/// `x |> b` with `x` in Peter-Weyl coordinates.
pub fn module_action_rhd(rec: &Reconstruction, x: &CVec, b: &CVec) -> Result<CVec> {
    rec.act(x, b)
}

/// The reconstructed algebra with Hopf-coordinate structure tensors.
pub fn build_yd_from_category(provider: Arc<dyn CategoryProvider>) -> Result<RegularYDAlgebra> {
    Reconstruction::new(provider, None, None)?.to_regular()
}

/// Matrix of `F` on `P(U, V)`, columns indexed by the provider's hom basis.
pub fn equivalence_hom_map(provider: Arc<dyn CategoryProvider>, u: &Object, v: &Object) -> Result<CMat> {
    Equivalence::new(provider)?.hom_map(u, v)
}

/// Largest entrywise defect of `u_ij |> v = sum_m u_im v S(u_mj)` over all
/// coefficient pairs, for a reconstruction from the fiber functor of a finite
/// quantum group; elements are compared in Hopf coordinates.
pub fn adjoint_action_residual(rec: &Reconstruction) -> Result<f64> {
    let cat = rec.category();
    let h = cat
        .provider()
        .hopf()
        .ok_or_else(|| crate::error::Error::Unsupported("the adjoint formula needs a finite provider".into()))?
        .clone();
    let phi = rec.peter_weyl().to_hopf()?;
    let pw = rec.peter_weyl();
    let n = h.dim;
    if rec.dim() != n {
        return Err(crate::error::Error::mismatch("reconstructed dimension", rec.dim(), n));
    }
    let mut worst = 0.0f64;
    for x in 0..n {
        let (t, i, j) = pw.decode(x);
        for k in 0..n {
            let got = &phi * rec.act_basis(x, &rec.basis(k))?;
            let v: CVec = phi.column(k).into_owned();
            let mut want = CVec::zeros(n);
            for m in 0..cat.table().dims[t] {
                let uim: CVec = phi.column(pw.index(t, i, m)).into_owned();
                let umj: CVec = phi.column(pw.index(t, m, j)).into_owned();
                want += h.mul(&h.mul(&uim, &v), &h.antipode_of(&umj));
            }
            worst = worst.max(crate::linalg::max_abs_vec(&(got - want)));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{function_algebra, kac_paljutkin, FiniteGroup, HopfAlgebraData};
    use crate::linalg::max_abs_vec;
    use crate::repcat::Provider;
    use crate::ydalg::{adjoint_yd_on_cg, check_yd_axioms, check_yd_morphism, trivial_yd};

    fn cat_of(h: &HopfAlgebraData) -> Arc<RepCategory> {
        RepCategory::new(Provider::Finite(Arc::new(h.clone())), 7).unwrap()
    }

    fn s3() -> HopfAlgebraData {
        function_algebra(&FiniteGroup::symmetric3())
    }

    #[test]
    fn fiber_functor_reconstructs_adjoint_algebra() {
        let h = s3();
        let cat = cat_of(&h);
        let rec = Reconstruction::new(Arc::new(MatrixCategory::fiber(cat.clone())), None, None).unwrap();
        assert_eq!(rec.dim(), 6);
        let adj = adjoint_yd_on_cg(Arc::new(h));
        // (s, a, l) corresponds to u^s_al
        let phi = rec.peter_weyl().to_hopf().unwrap();
        let rep = check_yd_morphism(&rec, &adj, &phi, 1e-10).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        let reg = rec.to_regular().unwrap();
        assert!(check_yd_axioms(&reg, 1e-9, 1).unwrap().passed());
    }

    #[test]
    fn full_provider_gives_scalars() {
        let cat = cat_of(&s3());
        let rec = Reconstruction::new(Arc::new(MatrixCategory::full(cat)), None, None).unwrap();
        assert_eq!(rec.multiplicities(), vec![1, 0, 0]);
        assert!(check_yd_axioms(&rec, 1e-10, 1).unwrap().passed());
    }

    #[test]
    fn projection_is_independent_of_decomposition() {
        let cat = cat_of(&s3());
        let p: Arc<dyn CategoryProvider> = Arc::new(MatrixCategory::fiber(cat.clone()));
        let rec = Reconstruction::new(p.clone(), None, None).unwrap();
        let two = Object::Irrep(2);
        let x = rec.lift_basis(rec.index(2, 0, 1));
        let y = rec.lift_basis(rec.index(2, 1, 1));
        let xy = universal_product(&x, &y, &*p).unwrap();
        assert_eq!(xy.terms[0].obj, two.tensor(&two));
        let a = rec.project(&xy).unwrap();
        let b = rec.project_seeded(&xy, 99).unwrap();
        assert!(max_abs_vec(&(a - b)) < 1e-10);
        // involutivity of the bullet after projection
        let twice = star_bullet(&star_bullet(&x, &*p).unwrap(), &*p).unwrap();
        assert!(max_abs_vec(&(rec.project(&twice).unwrap() - rec.project(&x).unwrap())) < 1e-10);
    }

    #[test]
    fn lambda_roundtrip_on_adjoint_algebras() {
        for h in [function_algebra(&FiniteGroup::cyclic(2)), s3(), kac_paljutkin()] {
            let cat = cat_of(&h);
            let rep = roundtrip_lambda(Arc::new(adjoint_yd_on_cg(Arc::new(h))), cat, 1e-8).unwrap();
            assert!(rep.passed(), "{:?} {:?}", rep.checks.failures(), rep.multiplicities);
        }
    }

    #[test]
    fn lambda_roundtrip_on_trivial_algebra() {
        let h = s3();
        let cat = cat_of(&h);
        let rep = roundtrip_lambda(Arc::new(trivial_yd(Arc::new(h))), cat, 1e-10).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.reconstructed_dim, 1);
    }

    #[test]
    fn cb_hom_dimensions_follow_spectral_multiplicities() {
        let h = s3();
        let cat = cat_of(&h);
        let cb = CbCategory::new(Arc::new(adjoint_yd_on_cg(Arc::new(h.clone()))), cat.clone()).unwrap();
        let one = Object::unit();
        for s in 0..3 {
            let hom = cb.cb_hom(&one, &Object::Irrep(s)).unwrap();
            assert_eq!(hom.dim(), cat.table().dims[s]);
            assert!(hom.residual < 1e-10);
        }
        assert!(check_unit_endomorphisms(&cb, 1e-10).unwrap().passed());
        // trivial algebra: C_B = Rep G
        let triv = CbCategory::new(Arc::new(trivial_yd(Arc::new(h))), cat.clone()).unwrap();
        let two = Object::Irrep(2);
        let tt = two.tensor(&two);
        assert_eq!(triv.hom_basis(&tt, &tt).unwrap().ncols(), cat.hom(&tt, &tt).unwrap().ncols());
    }

    #[test]
    fn cb_tensor_interchange_and_defining_equation() {
        let h = s3();
        let cat = cat_of(&h);
        let cb = CbCategory::new(Arc::new(adjoint_yd_on_cg(Arc::new(h))), cat).unwrap();
        let (one, two, sign) = (Object::unit(), Object::Irrep(2), Object::Irrep(1));
        let s: CVec = cb.hom_basis(&one, &two).unwrap().column(1).into_owned();
        let t: CVec = cb.hom_basis(&two, &sign.tensor(&two)).unwrap().column(0).into_owned();
        let st = cb_tensor(&cb, (&one, &two, &s), (&two, &sign.tensor(&two), &t)).unwrap();
        let src = two.clone();
        let dst = Object::tensor_all([&two, &sign, &two]);
        assert!(cb.defining_residual(&src, &dst, &st).unwrap() < 1e-10);
        assert!(cb.interchange_residual(&one, &two, &s, &two, &sign.tensor(&two), &t).unwrap() < 1e-10);
    }

    #[test]
    fn module_tensor_unitaries_are_coherent() {
        let h = s3();
        let cat = cat_of(&h);
        let adj = adjoint_yd_on_cg(Arc::new(h));
        let two = Object::Irrep(2);
        let rep = module_tensor_unitary(&adj, &cat, &two, &two, &two, 3, 5, 1e-9).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
    }

    #[test]
    fn fiber_equivalence_is_strict_tensor() {
        let cat = cat_of(&s3());
        let objs: Vec<Object> = (0..3).map(Object::Irrep).collect();
        let rep = equivalence_report(Arc::new(MatrixCategory::fiber(cat)), &objs, 1e-8).unwrap();
        assert!(rep.passed(), "{:?} {:?}", rep.checks.failures(), rep.pairs);
    }

    #[test]
    fn adjoint_formula_on_fiber_provider() {
        let cat = cat_of(&s3());
        let rec = Reconstruction::new(Arc::new(MatrixCategory::fiber(cat)), None, None).unwrap();
        let worst = adjoint_action_residual(&rec).unwrap();
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn subgroup_provider_gives_coset_algebra() {
        let g = FiniteGroup::symmetric3();
        let sub = crate::hopf::SubgroupSurjection::restriction("z2", &g, &[0, 1]).unwrap();
        let cat = cat_of(&s3());
        let p: Arc<dyn CategoryProvider> =
            Arc::new(MatrixCategory::new(cat.clone(), MatrixKind::Subgroup(sub.map.clone())).unwrap());
        let rec = Reconstruction::new(p.clone(), None, None).unwrap();
        assert_eq!(rec.dim(), 3);
        assert!(check_yd_axioms(&rec, 1e-9, 1).unwrap().passed());
        let objs: Vec<Object> = (0..3).map(Object::Irrep).collect();
        let rep = equivalence_report(p, &objs, 1e-8).unwrap();
        assert!(rep.passed(), "{:?} {:?}", rep.checks.failures(), rep.pairs);
    }

    #[test]
    fn non_braided_algebra_breaks_module_tensor() {
        let g = FiniteGroup::symmetric3();
        let h = crate::hopf::group_algebra(&g);
        let cat = cat_of(&h);
        let a = crate::ydalg::counit_action_yd(Arc::new(h));
        let objs: Vec<Object> = (0..cat.num_irreps()).map(Object::Irrep).collect();
        let u = objs.iter().find(|o| cat.dim(o).unwrap() > 1).unwrap_or(&objs[1]).clone();
        let rep = module_tensor_unitary(&a, &cat, &u, &u, &u, 2, 5, 1e-9).unwrap();
        let lam = roundtrip_lambda(Arc::new(a), cat, 1e-9).unwrap();
        assert!(!rep.passed() || !lam.passed());
    }
}
