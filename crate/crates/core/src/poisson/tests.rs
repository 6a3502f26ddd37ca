use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::hopf::{function_algebra, kac_paljutkin, FiniteGroup, HopfAlgebraData};
use crate::linalg::{self, CMat, CVec};
use crate::repcat::{Object, PeterWeyl, Provider, RepCategory, SuQ2};
use crate::ydalg::{dual_yd, DualElement, DualYd, YdOps};

fn cat_of(h: HopfAlgebraData) -> Arc<RepCategory> {
    RepCategory::new(Provider::Finite(Arc::new(h)), 3).unwrap()
}

fn finite_dual(h: HopfAlgebraData) -> Arc<DualYd> {
    Arc::new(dual_yd(cat_of(h), None, None).unwrap())
}

fn z2() -> Arc<DualYd> {
    finite_dual(function_algebra(&FiniteGroup::cyclic(2)))
}

fn s3() -> Arc<DualYd> {
    finite_dual(function_algebra(&FiniteGroup::symmetric3()))
}

fn suq2(level_twice: usize, blocks: usize) -> Arc<DualYd> {
    let cat = RepCategory::new(Provider::SuQ2(SuQ2::new(0.5, level_twice).unwrap()), 1).unwrap();
    Arc::new(dual_yd(cat, Some(blocks), None).unwrap())
}

const STD: usize = 2;

#[test]
fn measures_are_validated() {
    assert!(Measure::new([(0, 0.5), (1, 0.5)]).is_ok());
    assert!(Measure::new([(0, 0.5), (1, 0.4)]).is_err());
    assert!(Measure::new([(0, 1.5), (1, -0.5)]).is_err());
    let m = Measure::new([(1, 0.25), (1, 0.25), (0, 0.5), (2, 0.0)]).unwrap();
    assert_eq!(m.weights, vec![(0, 0.5), (1, 0.5)]);
    let d = s3();
    let table = d.category().table();
    let back = Measure::from_labels(table, &m.to_labels(table)).unwrap();
    assert_eq!(back, m);
}

#[test]
fn finite_phi_is_normalized_trace() {
    for h in [function_algebra(&FiniteGroup::symmetric3()), kac_paljutkin()] {
        let cat = cat_of(h);
        let pw = PeterWeyl::new(cat.clone());
        for s in 0..cat.num_irreps() {
            let obj = Object::Irrep(s);
            let phi = phi_state(&cat, &obj).unwrap();
            let d = phi.dim();
            assert!(linalg::max_abs(&(&phi.density - CMat::identity(d, d) / linalg::r(d as f64))) < 1e-12);
            let rep = phi_report(&pw, &obj, 20, 11, 1e-9).unwrap();
            assert!(rep.checks.passed(), "{:?}", rep.checks.failures());
        }
    }
}

#[test]
fn suq2_spin_half_phi_weights() {
    let d = suq2(4, 5);
    let pw = d.peter_weyl();
    let rep = phi_report(pw, &Object::Irrep(1), 20, 5, 1e-9).unwrap();
    assert!(rep.checks.passed(), "{:?}", rep.checks.failures());
    assert!((rep.weights[0] - 0.8).abs() < 1e-12 && (rep.weights[1] - 0.2).abs() < 1e-12, "{:?}", rep.weights);
    // a wrong density breaks the invariance identity
    let mut phi = phi_state(pw.category(), &Object::Irrep(1)).unwrap();
    phi.density.swap((0, 0), (1, 1));
    let t = CMat::from_fn(2, 2, |i, j| linalg::r((i + 2 * j + 1) as f64));
    assert!(invariance_residual(pw, &phi, &t).unwrap() > 1e-3);
    let rep = phi_report(pw, &Object::Irrep(2), 20, 5, 1e-9).unwrap();
    assert!(rep.checks.passed(), "{:?}", rep.checks.failures());
}

#[test]
fn phi_is_multiplicative() {
    let cat = suq2(4, 5).category().clone();
    assert!(multiplicativity_residual(&cat, &Object::Irrep(1), &Object::Irrep(2)).unwrap() < 1e-12);
    let cat = cat_of(function_algebra(&FiniteGroup::symmetric3()));
    assert!(multiplicativity_residual(&cat, &Object::Irrep(STD), &Object::Irrep(1)).unwrap() < 1e-12);
}

#[test]
fn trivial_measure_is_identity() {
    for d in [z2(), s3()] {
        let p = markov_matrix(&d, &Measure::delta(0), d.num_blocks()).unwrap();
        let n = d.dim();
        assert!(linalg::max_abs(&(p - CMat::identity(n, n))) < 1e-12);
    }
}

#[test]
fn sign_measure_swaps_z2_blocks() {
    let d = z2();
    let a = DualElement {
        blocks: vec![CMat::from_element(1, 1, linalg::r(3.0)), CMat::from_element(1, 1, linalg::r(-1.0))],
    };
    let b = markov_apply(&d, &Measure::delta(1), &a).unwrap();
    assert!((b.blocks[0][(0, 0)] - linalg::r(-1.0)).norm() < 1e-12);
    assert!((b.blocks[1][(0, 0)] - linalg::r(3.0)).norm() < 1e-12);
}

#[test]
fn markov_operators_are_unital_positive_equivariant() {
    for (d, mu) in [
        (s3(), Measure::delta(STD)),
        (s3(), Measure::new([(0, 0.2), (1, 0.3), (STD, 0.5)]).unwrap()),
        (finite_dual(kac_paljutkin()), Measure::delta(4)),
    ] {
        let rep = markov_report(&d, &mu, 100, 17, 1e-10).unwrap();
        assert!(rep.checks.passed(), "{:?}", rep.checks.failures());
    }
    let d = suq2(6, 4);
    let rep = markov_report(&d, &Measure::delta(1), 20, 17, 1e-9).unwrap();
    assert_eq!(rep.certified_blocks, 3);
    assert!(rep.checks.passed(), "{:?}", rep.checks.failures());
}

#[test]
fn truncated_dual_refuses_uncertified_blocks() {
    let d = suq2(6, 3);
    let x = d.to_element(&d.unit());
    match markov_apply(&d, &Measure::delta(1), &x) {
        Err(Error::TruncationExceeded { required, .. }) => assert_eq!(required.twice(), 3),
        other => panic!("expected truncation, got {other:?}"),
    }
    let y = markov_apply_upto(&d, &Measure::delta(1), &x, 2).unwrap();
    for b in &y.blocks {
        let n = b.nrows();
        assert!(linalg::max_abs(&(b - CMat::identity(n, n))) < 1e-12);
    }
}

#[test]
fn harmonic_dimensions() {
    let cases = [
        (z2(), Measure::delta(1), 1),
        (z2(), Measure::delta(0), 2),
        (s3(), Measure::delta(STD), 1),
        (s3(), Measure::delta(1), 3),
    ];
    for (d, mu, want) in cases {
        let h = harmonic_space(&d, &mu, 1e-9).unwrap();
        assert_eq!(h.dim, want, "{:?}", mu);
        assert_eq!(h.certified_dim, want);
        assert!(h.checks.passed(), "{:?}", h.checks.failures());
    }
}

#[test]
fn generating_measures_have_trivial_boundary() {
    for h in [function_algebra(&FiniteGroup::symmetric3()), kac_paljutkin(), function_algebra(&FiniteGroup::cyclic(3))] {
        let d = finite_dual(h);
        let cat = d.category().clone();
        for s in 0..cat.num_irreps() {
            let mu = Measure::new([(0, 0.5), (s, 0.5)]).unwrap();
            if !mu.generates(&cat).unwrap() {
                continue;
            }
            let hs = harmonic_space(&d, &mu, 1e-9).unwrap();
            assert_eq!(hs.dim, 1, "irrep {s}");
            let walk = irr_walk(&d, &mu, 1e-10).unwrap();
            assert!(walk.checks.passed(), "{:?}", walk.checks.failures());
            assert_eq!(walk.harmonic_dim, 1);
        }
    }
}

#[test]
fn walk_on_irreps_matches_central_markov() {
    let d = s3();
    for mu in [Measure::delta(1), Measure::delta(STD), Measure::new([(1, 0.5), (STD, 0.5)]).unwrap()] {
        let walk = irr_walk(&d, &mu, 1e-10).unwrap();
        assert!(walk.checks.passed(), "{:?}", walk.checks.failures());
    }
    // sign alone only reaches {trivial, sign}: two closed classes
    let walk = irr_walk(&d, &Measure::delta(1), 1e-10).unwrap();
    assert!(!walk.irreducible);
    assert_eq!(walk.harmonic_dim, 2);
}

#[test]
fn convolution_composes_markov_operators() {
    for d in [s3(), finite_dual(kac_paljutkin())] {
        let cat = d.category().clone();
        let n = cat.num_irreps();
        let mu = Measure::new([(1, 0.4), (n - 1, 0.6)]).unwrap();
        let nu = Measure::new([(0, 0.1), (n - 1, 0.9)]).unwrap();
        let pm = markov_matrix(&d, &mu, n).unwrap();
        let pn = markov_matrix(&d, &nu, n).unwrap();
        let conv = markov_matrix(&d, &nu.convolve(&mu, &cat).unwrap(), n).unwrap();
        assert!(linalg::max_abs(&(pm * pn - conv)) < 1e-10);
    }
}

#[test]
fn cesaro_product_on_harmonic_elements() {
    let d = z2();
    let b = PoissonBoundary::new(&d, &Measure::delta(0), 1e-9).unwrap();
    assert!(b.checks.passed(), "{:?}", b.checks.failures());
    let (x, y) = (CVec::from_vec(vec![linalg::r(2.0), linalg::r(3.0)]), CVec::from_vec(vec![linalg::c(0.0, 1.0), linalg::r(5.0)]));
    assert!(linalg::max_abs_vec(&(b.product(&x, &y).unwrap() - d.mul(&x, &y).unwrap())) < 1e-12);

    let sw = PoissonBoundary::new(&d, &Measure::delta(1), 1e-9).unwrap();
    assert!(!sw.limit_exists());
    assert_eq!(sw.peripheral.len(), 1);
    assert!(sw.checks.passed(), "{:?}", sw.checks.failures());
    assert_eq!(sw.dim(), 1);

    let s = s3();
    let erg = PoissonBoundary::new(&s, &Measure::delta(STD), 1e-9).unwrap();
    assert_eq!(erg.dim(), 1);
    assert!(erg.limit_exists());
    assert!(erg.checks.passed(), "{:?}", erg.checks.failures());

    let sign = PoissonBoundary::new(&s, &Measure::new([(0, 0.5), (1, 0.5)]).unwrap(), 1e-9).unwrap();
    assert_eq!(sign.dim(), 3);
    assert!(sign.checks.passed(), "{:?}", sign.checks.failures());
    let alg = sign.algebra_report(1e-9).unwrap();
    assert!(alg.passed(), "{:?}", alg.failures());
}

#[test]
fn constant_transformations_are_harmonic() {
    let cat = cat_of(function_algebra(&FiniteGroup::symmetric3()));
    let v = Object::Irrep(STD).tensor(&Object::Irrep(STD));
    let w = Object::Irrep(STD).tensor(&Object::Irrep(STD));
    let mu = Measure::new([(1, 0.3), (STD, 0.7)]).unwrap();
    for t in cat.hom_matrices(&v, &w).unwrap() {
        let eta = NatTransBlocks::constant(&cat, &v, &w, &t, 3).unwrap();
        assert!(eta.naturality_residual(&cat).unwrap() < 1e-10);
        let img = categorical_markov(&cat, &mu, &eta, None).unwrap();
        assert!(img.max_diff(&eta) < 1e-12);
    }
}

#[test]
fn partial_trace_lands_in_intertwiners() {
    let cat = cat_of(function_algebra(&FiniteGroup::symmetric3()));
    let mut g = linalg::rng(3);
    for t in 0..3 {
        let phi = phi_state(&cat, &Object::Irrep(t)).unwrap();
        for (a, b) in [(STD, STD), (1, STD), (STD, 0)] {
            let (u, v) = (Object::Irrep(t).tensor(&Object::Irrep(a)), Object::Irrep(t).tensor(&Object::Irrep(b)));
            let (da, db) = (cat.table().dims[a], cat.table().dims[b]);
            let mut x = CMat::zeros(cat.dim(&v).unwrap(), cat.dim(&u).unwrap());
            for m in cat.hom_matrices(&u, &v).unwrap() {
                x += m * linalg::random_complex_vector(&mut g, 1)[0];
            }
            let y = phi.partial(&x, db, da);
            let res = cat.intertwining_residual(&Object::Irrep(a), &Object::Irrep(b), &y).unwrap();
            assert!(res < 1e-9, "t {t} a {a} b {b}: {res}");
        }
    }
}

#[test]
fn ergodic_natural_harmonics_are_scalars() {
    for h in [function_algebra(&FiniteGroup::symmetric3()), kac_paljutkin()] {
        let cat = cat_of(h);
        let n = cat.num_irreps();
        let mu = Measure::delta(n - 1);
        assert!(mu.generates(&cat).unwrap());
        for s in 0..n {
            let (dim, defect) = nat_harmonic_dim(&cat, &mu, &Object::Irrep(s), &Object::Irrep(s), n).unwrap();
            assert_eq!(dim, 1, "irrep {s}");
            assert!(defect < 1e-9);
        }
    }
}

#[test]
fn dual_and_categorical_markov_agree() {
    let s = s3();
    let objs = [Object::unit(), Object::Irrep(1), Object::Irrep(STD)];
    for mu in [Measure::delta(STD), Measure::new([(0, 0.25), (1, 0.25), (STD, 0.5)]).unwrap()] {
        for v in &objs {
            for w in &objs {
                let rep = identification_check(s.clone(), &mu, v, w, 1e-8).unwrap();
                assert!(rep.checks.passed(), "{v:?} {w:?} {:?}", rep.checks.failures());
            }
        }
    }
    let kp = finite_dual(kac_paljutkin());
    let rep = identification_check(kp, &Measure::delta(4), &Object::unit(), &Object::Irrep(4), 1e-8).unwrap();
    assert!(rep.checks.passed(), "{:?}", rep.checks.failures());
}

#[test]
fn truncated_suq2_identification() {
    let d = suq2(6, 3);
    for (v, w) in [(Object::unit(), Object::unit()), (Object::unit(), Object::Irrep(1)), (Object::Irrep(1), Object::Irrep(1))] {
        let rep = identification_check(d.clone(), &Measure::delta(1), &v, &w, 1e-6).unwrap();
        assert_eq!(rep.certified_blocks, 2);
        assert!(rep.checks.passed(), "{v:?} {w:?} {:?}", rep.checks.failures());
    }
    let h = harmonic_space(&d, &Measure::delta(1), 1e-8).unwrap();
    assert_eq!(h.certified_blocks, 2);
    assert!(h.checks.passed(), "{:?}", h.checks.failures());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_measures_give_unital_markov(w in proptest::collection::vec(0.0f64..1.0, 3)) {
        let total: f64 = w.iter().sum();
        prop_assume!(total > 1e-3);
        let mu = Measure::new(w.iter().enumerate().map(|(s, x)| (s, x / total))).unwrap();
        let d = s3();
        let p = markov_matrix(&d, &mu, 3).unwrap();
        let u = d.unit();
        prop_assert!(linalg::max_abs_vec(&(&p * &u - &u)) < 1e-12);
        let rep = markov_report(&d, &mu, 5, 1, 1e-10).unwrap();
        prop_assert!(rep.checks.passed());
    }
}
