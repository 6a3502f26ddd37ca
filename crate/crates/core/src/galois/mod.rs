//! Quantum homogeneous spaces, Hopf-Galois extensions and the spectral functor.
//!
//! Coideal results are computed for finite quantum groups only.

pub mod coideal;
pub mod hopf_galois;
pub mod spectral;

pub use coideal::{
    certify_quotient_type, commutant, enumerate_yd_subalgebras, quotient_by_kernel, quotient_coideal,
    reconstruct_subgroup, restriction_kernel, CoidealEnumeration, CoidealSubalgebra, QuotientCertificate,
    SubgroupKernel,
};
pub use hopf_galois::{
    galois_identity_check, galois_map, galois_report, miyashita_ulbrich, split_rbar, GaloisMap, GaloisReport,
};
pub use spectral::{spectral_functor, SpectralFunctor, SpectralPair};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::duality::{pushforward, MatrixCategory, Reconstruction};
    use crate::error::Error;
    use crate::hopf::{function_algebra, kac_paljutkin, FiniteGroup, HopfAlgebraData, SubgroupSurjection};
    use crate::linalg::{self, CMat};
    use crate::repcat::{Object, Provider, RepCategory};
    use crate::ydalg::{adjoint_yd_on_cg, check_yd_axioms, trivial_yd, YdOps};

    fn cat_of(h: &Arc<HopfAlgebraData>) -> Arc<RepCategory> {
        RepCategory::new(Provider::Finite(h.clone()), 7).unwrap()
    }

    fn s3_sub(elems: &[usize]) -> SubgroupSurjection {
        SubgroupSurjection::restriction("H", &FiniteGroup::symmetric3(), elems).unwrap()
    }

    const SUBGROUPS: [(&[usize], usize); 4] = [(&[0], 6), (&[0, 1], 3), (&[0, 3, 4], 2), (&[0, 1, 2, 3, 4, 5], 1)];

    #[test]
    fn quotient_coideal_dimensions_count_cosets() {
        for (elems, cosets) in SUBGROUPS {
            let c = quotient_coideal(&s3_sub(elems), 1e-10).unwrap();
            assert_eq!(c.dim(), cosets, "{elems:?}");
            assert!(c.residual < 1e-12);
            let yd = c.yd(1e-10).unwrap();
            assert!(check_yd_axioms(&yd, 1e-9, 3).unwrap().passed());
        }
    }

    #[test]
    fn non_homomorphism_is_refused() {
        let mut sub = s3_sub(&[0, 1]);
        sub.map *= linalg::r(2.0);
        assert!(matches!(quotient_coideal(&sub, 1e-10), Err(Error::AxiomFailure(_))));
    }

    #[test]
    fn reconstruction_recovers_restriction_kernels() {
        for (elems, _) in SUBGROUPS {
            let sub = s3_sub(elems);
            let cat = cat_of(&sub.source);
            let c = quotient_coideal(&sub, 1e-10).unwrap();
            let k = reconstruct_subgroup(&c, &cat, 1e-10).unwrap();
            let direct = restriction_kernel(&sub);
            assert_eq!(k.kernel.ncols(), direct.ncols(), "{elems:?}");
            assert!(linalg::subspace_distance(&k.kernel, &direct) < 1e-9, "{elems:?}");
            let cert = certify_quotient_type(&c, &cat, 1e-9).unwrap();
            assert!(cert.is_quotient_type(), "{:?}", cert.checks.failures());
            assert_eq!(cert.subgroup_dim, elems.len());
        }
    }

    #[test]
    fn invariant_vectors_match_subgroup_fixed_vectors() {
        // dim Hom_Z2(1, U_s) for trivial, sign, standard
        let sub = s3_sub(&[0, 1]);
        let cat = cat_of(&sub.source);
        let c = quotient_coideal(&sub, 1e-10).unwrap();
        let k = reconstruct_subgroup(&c, &cat, 1e-10).unwrap();
        assert_eq!(k.invariant_dims(), vec![1, 0, 1]);
    }

    #[test]
    fn non_invariant_subspace_is_refused() {
        let g = Arc::new(function_algebra(&FiniteGroup::symmetric3()));
        let cat = cat_of(&g);
        let basis = CMat::from_fn(6, 2, |i, j| if i == j { linalg::r(1.0) } else { linalg::r(0.0) });
        let c = CoidealSubalgebra {
            name: "span(d_e, d_(23))".into(),
            group: g,
            basis,
            residual: 0.0,
        };
        assert!(reconstruct_subgroup(&c, &cat, 1e-10).is_err());
    }

    #[test]
    fn enumeration_finds_only_quotient_coideals() {
        let h = Arc::new(function_algebra(&FiniteGroup::cyclic(2)));
        let cat = cat_of(&h);
        let e = enumerate_yd_subalgebras(&h, 5, 1e-9).unwrap();
        assert!(e.multiplicity_free);
        let dims: Vec<usize> = e.subalgebras.iter().map(|c| c.dim()).collect();
        assert_eq!(dims, vec![1, 2]);
        for c in &e.subalgebras {
            assert!(certify_quotient_type(c, &cat, 1e-9).unwrap().is_quotient_type());
        }
    }

    #[test]
    fn s3_search_is_flagged_non_exhaustive() {
        let h = Arc::new(function_algebra(&FiniteGroup::symmetric3()));
        let cat = cat_of(&h);
        let e = enumerate_yd_subalgebras(&h, 5, 1e-9).unwrap();
        assert!(!e.multiplicity_free);
        assert!(e.commutant_dim > e.components.len());
        for c in &e.subalgebras {
            assert!(certify_quotient_type(c, &cat, 1e-9).unwrap().is_quotient_type());
        }
    }

    #[test]
    fn kac_paljutkin_coideals_are_quotients() {
        let h = Arc::new(kac_paljutkin());
        let cat = cat_of(&h);
        let e = enumerate_yd_subalgebras(&h, 5, 1e-9).unwrap();
        assert!(e.multiplicity_free, "commutant {} components {}", e.commutant_dim, e.components.len());
        let dims: Vec<usize> = e.subalgebras.iter().map(|c| c.dim()).collect();
        assert!(dims.contains(&1) && dims.contains(&8), "{dims:?}");
        for c in &e.subalgebras {
            let cert = certify_quotient_type(c, &cat, 1e-9).unwrap();
            assert!(cert.is_quotient_type(), "dim {} {:?}", c.dim(), cert.checks.failures());
        }
    }

    #[test]
    fn coordinate_algebra_is_galois_with_adjoint_mu_action() {
        for h in [function_algebra(&FiniteGroup::cyclic(2)), function_algebra(&FiniteGroup::symmetric3())] {
            let a = adjoint_yd_on_cg(Arc::new(h));
            let rep = galois_report(&a, 1e-9).unwrap();
            assert!(rep.galois);
            assert!(rep.checks.passed(), "{:?}", rep.checks.failures());
        }
    }

    #[test]
    fn coset_algebra_is_not_galois() {
        let c = quotient_coideal(&s3_sub(&[0, 1]), 1e-10).unwrap();
        let yd = c.yd(1e-10).unwrap();
        let gm = galois_map(&yd).unwrap();
        assert_eq!((gm.matrix.nrows(), gm.matrix.ncols()), (18, 9));
        match gm.require_inverse() {
            Err(Error::NotGalois { rank, .. }) => assert_eq!(rank, 9),
            other => panic!("expected NotGalois, got {other:?}"),
        }
    }

    #[test]
    fn displayed_identity_on_fiber_reconstruction() {
        let h = Arc::new(function_algebra(&FiniteGroup::symmetric3()));
        let rec = Reconstruction::new(Arc::new(MatrixCategory::fiber(cat_of(&h))), None, None).unwrap();
        let rep = galois_identity_check(&rec, 3, 1e-9).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
    }

    #[test]
    fn spectral_functor_detects_full_multiplicity() {
        let h = Arc::new(function_algebra(&FiniteGroup::symmetric3()));
        let cat = cat_of(&h);
        let full = spectral_functor(Arc::new(adjoint_yd_on_cg(h.clone())), cat.clone(), None, 1e-9).unwrap();
        assert!(full.checks.passed(), "{:?}", full.checks.failures());
        assert_eq!(full.dims, vec![1, 1, 2]);
        assert!(full.full_multiplicity);

        let c = quotient_coideal(&s3_sub(&[0, 1]), 1e-10).unwrap();
        let coset = spectral_functor(Arc::new(c.yd(1e-10).unwrap()), cat.clone(), None, 1e-9).unwrap();
        assert!(coset.checks.passed(), "{:?}", coset.checks.failures());
        assert_eq!(coset.dims, vec![1, 0, 1]);
        assert!(!coset.full_multiplicity);

        let triv = spectral_functor(Arc::new(trivial_yd(h)), cat, None, 1e-9).unwrap();
        assert_eq!(triv.dims, vec![1, 0, 0]);
        assert!(!triv.full_multiplicity);
    }

    #[test]
    fn non_ergodic_algebra_is_refused() {
        let h = Arc::new(function_algebra(&FiniteGroup::cyclic(2)));
        let cat = cat_of(&h);
        let mut a = adjoint_yd_on_cg(h);
        // trivial coaction: every element is fixed
        let n = a.dim();
        a.coaction = crate::hopf::Tensor3::zeros(n, n, n);
        for k in 0..n {
            for g in 0..n {
                a.coaction.set(k, g, k, a.group.unit[g]);
            }
        }
        assert!(matches!(
            spectral_functor(Arc::new(a), cat, None, 1e-9),
            Err(Error::NotErgodic(2))
        ));
    }

    #[test]
    fn pushforward_along_inclusion_and_translation() {
        let g = Arc::new(function_algebra(&FiniteGroup::symmetric3()));
        let cat = cat_of(&g);
        let objects: Vec<Object> = (0..3).map(Object::Irrep).collect();
        let c = quotient_coideal(&s3_sub(&[0, 1]), 1e-10).unwrap();
        let src: Arc<dyn YdOps> = Arc::new(c.yd(1e-10).unwrap());
        let dst: Arc<dyn YdOps> = Arc::new(adjoint_yd_on_cg(g.clone()));
        let rep = pushforward(src, dst.clone(), &c.inclusion(), cat.clone(), &objects, 1e-9).unwrap();
        assert!(rep.map_injective && !rep.map_surjective);
        assert!(rep.consistent() && rep.checks.passed());

        // x -> eps(x) 1 is multiplicative but not equivariant
        let eps = CMat::from_fn(6, 6, |r, k| g.unit[r] * g.counit[k]);
        assert!(matches!(
            pushforward(dst.clone(), dst, &eps, cat, &objects, 1e-9),
            Err(Error::AxiomFailure(_))
        ));

        let z2 = Arc::new(function_algebra(&FiniteGroup::cyclic(2)));
        let zcat = cat_of(&z2);
        let a: Arc<dyn YdOps> = Arc::new(adjoint_yd_on_cg(z2));
        let swap = CMat::from_fn(2, 2, |r, k| linalg::r(if r != k { 1.0 } else { 0.0 }));
        let objs: Vec<Object> = (0..2).map(Object::Irrep).collect();
        let rep = pushforward(a.clone(), a, &swap, zcat, &objs, 1e-9).unwrap();
        assert!(rep.map_injective && rep.map_surjective && rep.all_surjective);
        assert!(rep.consistent());
    }
}
