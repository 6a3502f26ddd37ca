//! Seeded property tests across modules: Hopf structure on random elements,
//! basis independence of the YD axioms and of the roundtrip, seed
//! independence of decompositions, and the Markov semigroup law.

use std::sync::Arc;

use proptest::prelude::*;
use ydcat::duality::roundtrip_lambda;
use ydcat::hopf::{function_algebra, kac_paljutkin, FiniteGroup, HopfAlgebraData};
use ydcat::linalg::{self, CMat, CVec};
use ydcat::poisson::{markov_matrix, Measure};
use ydcat::repcat::{Object, Provider, RepCategory};
use ydcat::ydalg::{adjoint_yd_on_cg, check_yd_axioms, dual_yd};

fn kp() -> HopfAlgebraData {
    kac_paljutkin()
}

fn s3() -> HopfAlgebraData {
    function_algebra(&FiniteGroup::symmetric3())
}

fn cat_of(h: HopfAlgebraData, seed: u64) -> Arc<RepCategory> {
    RepCategory::new(Provider::Finite(Arc::new(h)), seed).unwrap()
}

fn random_vec(seed: u64, n: usize) -> CVec {
    linalg::random_complex_vector(&mut linalg::rng(seed), n)
}

/// Isotypic projections of a decomposition, one per irreducible.
fn isotypic(cat: &RepCategory, obj: &Object, seed: u64) -> Vec<CMat> {
    let d = cat.decompose_with_seed(obj, seed).unwrap();
    let n = cat.dim(obj).unwrap();
    (0..cat.num_irreps())
        .map(|s| {
            let mut p = CMat::zeros(n, n);
            for part in d.parts.iter().filter(|p| p.irrep == s) {
                p += &part.iso * part.iso.adjoint();
            }
            p
        })
        .collect()
}

fn measure(weights: &[f64]) -> Measure {
    let total: f64 = weights.iter().sum();
    Measure::new(weights.iter().enumerate().map(|(s, w)| (s, w / total))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn kac_paljutkin_structure_maps_on_random_elements(seed in any::<u64>()) {
        let h = kp();
        let (x, y) = (random_vec(seed, h.dim), random_vec(seed ^ 0x9e37, h.dim));
        let xy = h.mul(&x, &y);
        let scale = 1.0 + linalg::max_abs_vec(&x) * linalg::max_abs_vec(&y);
        let comul = linalg::max_abs(&(h.comul(&xy) - h.mul2(&h.comul(&x), &h.comul(&y))));
        prop_assert!(comul <= 1e-12 * scale, "comultiplication {comul}");
        let anti = linalg::max_abs_vec(&(h.antipode_of(&xy) - h.mul(&h.antipode_of(&y), &h.antipode_of(&x))));
        prop_assert!(anti <= 1e-12 * scale, "antipode {anti}");
        let star = linalg::max_abs_vec(&(h.star_of(&xy) - h.mul(&h.star_of(&y), &h.star_of(&x))));
        prop_assert!(star <= 1e-12 * scale, "involution {star}");
        let counit = (h.counit_of(&xy) - h.counit_of(&x) * h.counit_of(&y)).norm();
        prop_assert!(counit <= 1e-12 * scale, "counit {counit}");
    }

    #[test]
    fn yd_axioms_and_roundtrip_survive_unitary_basis_change(seed in any::<u64>()) {
        let h = s3();
        let a = adjoint_yd_on_cg(Arc::new(h.clone()));
        let u = linalg::random_unitary(&mut linalg::rng(seed), a.dim());
        let b = a.change_basis(&u).unwrap();
        let rep = check_yd_axioms(&b, 1e-9, seed).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.checks.failures());
        let lam = roundtrip_lambda(Arc::new(b), cat_of(h, seed), 1e-8).unwrap();
        prop_assert!(lam.passed(), "{:?}", lam.checks.failures());
        prop_assert_eq!(lam.multiplicities, vec![1, 1, 2]);
    }

    #[test]
    fn isotypic_projections_do_not_depend_on_the_seed(a in any::<u64>(), b in any::<u64>()) {
        let cat = cat_of(kp(), 3);
        let two = Object::Irrep(4);
        let obj = Object::tensor_all([&two, &two, &Object::Irrep(1)]);
        for (p, q) in isotypic(&cat, &obj, a).iter().zip(isotypic(&cat, &obj, b)) {
            prop_assert!(linalg::max_abs(&(p - q)) < 1e-9);
        }
    }

    #[test]
    fn markov_operators_form_a_convolution_semigroup(
        w1 in proptest::collection::vec(0.01f64..1.0, 5),
        w2 in proptest::collection::vec(0.01f64..1.0, 5),
    ) {
        let cat = cat_of(kp(), 1);
        let dual = dual_yd(cat.clone(), None, None).unwrap();
        let n = dual.num_blocks();
        let (mu, nu) = (measure(&w1), measure(&w2));
        let pm = markov_matrix(&dual, &mu, n).unwrap();
        let pn = markov_matrix(&dual, &nu, n).unwrap();
        let pc = markov_matrix(&dual, &nu.convolve(&mu, &cat).unwrap(), n).unwrap();
        prop_assert!(linalg::max_abs(&(pm * pn - pc)) < 1e-10);
    }
}
