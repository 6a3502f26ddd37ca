//! Braided-commutative Yetter-Drinfeld *-algebras over a compact quantum group.
//!
//! A YD algebra is a unital *-algebra `B` with a right coaction
//! `alpha: B -> C[G] (x) B` (written `alpha(b) = b_1 (x) b_2`) and a left
//! `C[G]`-module action `x |> b`, subject to
//! * `alpha` is a coassociative, counital, unital *-homomorphism,
//! * `x |> (ab) = (x_1 |> a)(x_2 |> b)`, `x |> 1 = eps(x) 1`, `x |> a* = (S(x)* |> a)*`,
//! * `alpha(x |> a) = x_1 a_1 S(x_3) (x) (x_2 |> a_2)`,
//! * braided commutativity `ab = b_2 (S^-1(b_1) |> a)`.

pub mod dual;
pub mod morphism;

use std::sync::Arc;

use rand::Rng as _;
use serde::Serialize;

pub use dual::{dual_yd, DualElement, DualYd};
pub use morphism::{check_yd_morphism, coordinate_change};

use crate::error::{Error, Result};
use crate::hopf::{HopfAlgebraData, HopfOps, Tensor3};
use crate::linalg::{self, max_abs, max_abs_vec, CMat, CVec, C64, ONE, ZERO};
use crate::repcat::{Object, PeterWeyl, RepCategory};
use crate::report::CheckReport;

/// Sparse coaction image: `alpha(b) = sum (g, k, c) c e_g (x) b_k`.
pub type Coaction = Vec<(usize, usize, C64)>;

/// Which basis of the coordinate algebra a YD algebra uses.
#[derive(Clone, Debug)]
pub enum Coordinates {
    /// Structure-constant basis of a finite Hopf algebra.
    Hopf,
    /// Matrix coefficients `u^s_ij` of the irreducible table.
    PeterWeyl(Arc<PeterWeyl>),
}

/// Operations every YD algebra exposes to the axiom checker and the duality code.
pub trait YdOps: Send + Sync {
    fn group(&self) -> &dyn HopfOps;
    fn coordinates(&self) -> Coordinates {
        Coordinates::Hopf
    }
    fn dim(&self) -> usize;
    fn unit(&self) -> CVec;
    fn mul(&self, a: &CVec, b: &CVec) -> Result<CVec>;
    fn star(&self, a: &CVec) -> Result<CVec>;
    fn coact_basis(&self, k: usize) -> Result<Coaction>;
    /// `e_x |> a` for a basis element `e_x` of the coordinate algebra.
    fn act_basis(&self, x: usize, a: &CVec) -> Result<CVec>;
    /// Basis elements of the coordinate algebra over which axioms are checked.
    fn group_test_indices(&self) -> Vec<usize> {
        (0..self.group().dim()).collect()
    }
    fn label(&self, k: usize) -> String {
        format!("b{k}")
    }

    fn basis(&self, k: usize) -> CVec {
        linalg::unit_vec(self.dim(), k)
    }

    /// `alpha(a)` as a dense `dim G x dim B` coefficient matrix.
    fn coact(&self, a: &CVec) -> Result<CMat> {
        let mut m = CMat::zeros(self.group().dim(), self.dim());
        for k in 0..self.dim() {
            if a[k] == ZERO {
                continue;
            }
            for (g, l, c) in self.coact_basis(k)? {
                m[(g, l)] += a[k] * c;
            }
        }
        Ok(m)
    }

    fn act(&self, x: &CVec, a: &CVec) -> Result<CVec> {
        let mut out = CVec::zeros(self.dim());
        for (i, &xi) in x.iter().enumerate() {
            if xi != ZERO {
                out += self.act_basis(i, a)? * xi;
            }
        }
        Ok(out)
    }
}

/// A YD algebra over a finite quantum group, stored as structure constants.
///
/// * `mult[i,j,k]`: `b_i b_j = sum_k mult[i,j,k] b_k`
/// * `coaction[k,g,l]`: `alpha(b_k) = sum coaction[k,g,l] e_g (x) b_l`
/// * `action[x,k,l]`: `e_x |> b_k = sum_l action[x,k,l] b_l`
/// * `star` acts on conjugated coordinates like the Hopf involution
#[derive(Clone, Debug)]
pub struct RegularYDAlgebra {
    pub group: Arc<HopfAlgebraData>,
    pub labels: Vec<String>,
    pub mult: Tensor3,
    pub unit: CVec,
    pub star: CMat,
    pub coaction: Tensor3,
    pub action: Tensor3,
}

impl RegularYDAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn check_shapes(&self) -> Result<()> {
        let (n, d) = (self.group.dim, self.dim());
        let want = |what: &str, t: &Tensor3, s: [usize; 3]| {
            if t.shape != s {
                Err(Error::shape(what, format!("{s:?}"), format!("{:?}", t.shape)))
            } else {
                Ok(())
            }
        };
        want("mult", &self.mult, [d, d, d])?;
        want("coaction", &self.coaction, [d, n, d])?;
        want("action", &self.action, [n, d, d])?;
        if self.unit.len() != d {
            return Err(Error::shape("unit", d, self.unit.len()));
        }
        if self.star.shape() != (d, d) {
            return Err(Error::shape("star", format!("[{d},{d}]"), format!("{:?}", self.star.shape())));
        }
        Ok(())
    }

    /// The same algebra in the basis `b'_k = sum_j p[j,k] b_j` (`p` invertible).
    pub fn change_basis(&self, p: &CMat) -> Result<RegularYDAlgebra> {
        let d = self.dim();
        let n = self.group.dim;
        let pinv = p
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NonSemisimple("basis change is singular".into()))?;
        let col = |k: usize| -> CVec { p.column(k).into_owned() };
        let mut mult = Tensor3::zeros(d, d, d);
        let mut coaction = Tensor3::zeros(d, n, d);
        let mut action = Tensor3::zeros(n, d, d);
        for i in 0..d {
            for j in 0..d {
                let v = &pinv * self.mul_vec(&col(i), &col(j));
                for k in 0..d {
                    mult.set(i, j, k, v[k]);
                }
            }
            let m = self.coact_vec(&col(i)) * pinv.transpose();
            for g in 0..n {
                for l in 0..d {
                    coaction.set(i, g, l, m[(g, l)]);
                }
            }
            for x in 0..n {
                let v = &pinv * self.act_vec(x, &col(i));
                for l in 0..d {
                    action.set(x, i, l, v[l]);
                }
            }
        }
        // new star: conj(p) coordinates pulled through
        let star = &pinv * &self.star * p.map(|z| z.conj());
        Ok(RegularYDAlgebra {
            group: self.group.clone(),
            labels: (0..d).map(|k| format!("b'{k}")).collect(),
            mult,
            unit: &pinv * &self.unit,
            star,
            coaction,
            action,
        })
    }

    pub fn mul_vec(&self, a: &CVec, b: &CVec) -> CVec {
        let d = self.dim();
        let mut out = CVec::zeros(d);
        for i in 0..d {
            if a[i] == ZERO {
                continue;
            }
            for j in 0..d {
                if b[j] == ZERO {
                    continue;
                }
                let c = a[i] * b[j];
                let base = (i * d + j) * d;
                for k in 0..d {
                    let m = self.mult.data[base + k];
                    if m != ZERO {
                        out[k] += c * m;
                    }
                }
            }
        }
        out
    }

    pub fn star_vec(&self, a: &CVec) -> CVec {
        &self.star * a.map(|z| z.conj())
    }

    pub fn coact_vec(&self, a: &CVec) -> CMat {
        let (n, d) = (self.group.dim, self.dim());
        let mut m = CMat::zeros(n, d);
        for k in 0..d {
            if a[k] == ZERO {
                continue;
            }
            for g in 0..n {
                for l in 0..d {
                    let c = self.coaction.get(k, g, l);
                    if c != ZERO {
                        m[(g, l)] += a[k] * c;
                    }
                }
            }
        }
        m
    }

    pub fn act_vec(&self, x: usize, a: &CVec) -> CVec {
        let d = self.dim();
        let mut out = CVec::zeros(d);
        for k in 0..d {
            if a[k] == ZERO {
                continue;
            }
            for l in 0..d {
                let c = self.action.get(x, k, l);
                if c != ZERO {
                    out[l] += a[k] * c;
                }
            }
        }
        out
    }

    /// Action of an arbitrary element of the coordinate algebra.
    pub fn act_elem(&self, x: &CVec, a: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim());
        for (i, &xi) in x.iter().enumerate() {
            if xi != ZERO {
                out += self.act_vec(i, a) * xi;
            }
        }
        out
    }

    /// Orthonormal basis (columns) of the fixed-point algebra `{a : alpha(a) = 1 (x) a}`.
    pub fn fixed_points(&self) -> CMat {
        fixed_point_basis(self).expect("finite coaction never truncates")
    }

    pub fn is_commutative(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| (0..d).all(|k| (self.mult.get(i, j, k) - self.mult.get(j, i, k)).norm() <= tol)))
    }

    /// Materializes any finite YD algebra whose coordinate algebra is `group`.
    pub fn from_ops(group: Arc<HopfAlgebraData>, a: &dyn YdOps) -> Result<RegularYDAlgebra> {
        let n = group.dim;
        if a.group().dim() != n {
            return Err(Error::mismatch("coordinate algebra dimension", a.group().dim(), n));
        }
        let d = a.dim();
        let mut mult = Tensor3::zeros(d, d, d);
        let mut coaction = Tensor3::zeros(d, n, d);
        let mut action = Tensor3::zeros(n, d, d);
        let mut star = CMat::zeros(d, d);
        for i in 0..d {
            let bi = a.basis(i);
            for j in 0..d {
                let v = a.mul(&bi, &a.basis(j))?;
                for k in 0..d {
                    mult.set(i, j, k, v[k]);
                }
            }
            star.set_column(i, &a.star(&bi)?);
            for (g, l, c) in a.coact_basis(i)? {
                coaction.add(i, g, l, c);
            }
            for x in 0..n {
                let v = a.act_basis(x, &bi)?;
                for l in 0..d {
                    action.set(x, i, l, v[l]);
                }
            }
        }
        Ok(RegularYDAlgebra {
            group,
            labels: (0..d).map(|k| a.label(k)).collect(),
            mult,
            unit: a.unit(),
            star,
            coaction,
            action,
        })
    }
}

/// Materializes a YD algebra written in Peter-Weyl coordinates over a finite
/// provider, converting the coordinate algebra to Hopf coordinates.
pub fn regular_from_pw_ops(a: &dyn YdOps, pw: &PeterWeyl) -> Result<RegularYDAlgebra> {
    let h = pw
        .category()
        .provider()
        .hopf()
        .cloned()
        .ok_or_else(|| Error::Unsupported("only finite providers have Hopf coordinates".into()))?;
    let phi = pw.to_hopf()?;
    let phi_inv = phi
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotQuantumGroup("matrix coefficients do not span".into()))?;
    let (n, d) = (h.dim, a.dim());
    let mut mult = Tensor3::zeros(d, d, d);
    let mut coaction = Tensor3::zeros(d, n, d);
    let mut action = Tensor3::zeros(n, d, d);
    let mut star = CMat::zeros(d, d);
    for i in 0..d {
        let bi = a.basis(i);
        for j in 0..d {
            let v = a.mul(&bi, &a.basis(j))?;
            for k in 0..d {
                mult.set(i, j, k, v[k]);
            }
        }
        star.set_column(i, &a.star(&bi)?);
        for (g, l, c) in a.coact_basis(i)? {
            for x in 0..n {
                coaction.add(i, x, l, c * phi[(x, g)]);
            }
        }
        for x in 0..n {
            let v = a.act(&phi_inv.column(x).into_owned(), &bi)?;
            for l in 0..d {
                action.set(x, i, l, v[l]);
            }
        }
    }
    Ok(RegularYDAlgebra {
        group: h,
        labels: (0..d).map(|k| a.label(k)).collect(),
        mult,
        unit: a.unit(),
        star,
        coaction,
        action,
    })
}

/// Matrix coefficients `u_ij` of an object in the coordinates used by `a`.
pub fn object_coefficients(a: &dyn YdOps, cat: &RepCategory, obj: &Object) -> Result<Vec<Vec<CVec>>> {
    match a.coordinates() {
        Coordinates::Hopf => {
            let rep = cat.rep(obj)?;
            if !cat.provider().is_finite() {
                return Err(Error::Unsupported("Hopf coordinates need a finite provider".into()));
            }
            Ok((0..rep.dim)
                .map(|i| (0..rep.dim).map(|j| rep.coefficient(i, j)).collect())
                .collect())
        }
        Coordinates::PeterWeyl(pw) => pw.object_coefficients(obj),
    }
}

impl YdOps for RegularYDAlgebra {
    fn group(&self) -> &dyn HopfOps {
        &*self.group
    }
    fn dim(&self) -> usize {
        self.labels.len()
    }
    fn unit(&self) -> CVec {
        self.unit.clone()
    }
    fn mul(&self, a: &CVec, b: &CVec) -> Result<CVec> {
        Ok(self.mul_vec(a, b))
    }
    fn star(&self, a: &CVec) -> Result<CVec> {
        Ok(self.star_vec(a))
    }
    fn coact_basis(&self, k: usize) -> Result<Coaction> {
        let (n, d) = (self.group.dim, self.dim());
        let mut v = Vec::new();
        for g in 0..n {
            for l in 0..d {
                let c = self.coaction.get(k, g, l);
                if c != ZERO {
                    v.push((g, l, c));
                }
            }
        }
        Ok(v)
    }
    fn act_basis(&self, x: usize, a: &CVec) -> Result<CVec> {
        Ok(self.act_vec(x, a))
    }
    fn label(&self, k: usize) -> String {
        self.labels[k].clone()
    }
}

/// Orthonormal basis of the fixed points of the coaction.
pub fn fixed_point_basis(a: &dyn YdOps) -> Result<CMat> {
    let (n, d) = (a.group().dim(), a.dim());
    let unit = a.group().unit();
    let mut sys = CMat::zeros(n * d, d);
    for k in 0..d {
        for (g, l, c) in a.coact_basis(k)? {
            sys[(g * d + l, k)] += c;
        }
        for g in 0..n {
            sys[(g * d + k, k)] -= unit[g];
        }
    }
    Ok(linalg::null_space_floor(&sys, linalg::RANK_CUTOFF, 1.0))
}

/// The coordinate algebra itself with `alpha = Delta` and the adjoint action `x_1 a S(x_2)`.
pub fn adjoint_yd_on_cg(h: Arc<HopfAlgebraData>) -> RegularYDAlgebra {
    let n = h.dim;
    let mut coaction = Tensor3::zeros(n, n, n);
    let mut action = Tensor3::zeros(n, n, n);
    for k in 0..n {
        for (g, l, c) in h.comul_terms(k) {
            coaction.add(k, g, l, c);
        }
    }
    for x in 0..n {
        let terms = h.comul_terms(x);
        for k in 0..n {
            let mut v = CVec::zeros(n);
            for &(a, b, c) in &terms {
                let left = h.mul(&h.basis(a), &h.basis(k));
                v += h.mul(&left, &h.antipode_of(&h.basis(b))) * c;
            }
            for l in 0..n {
                action.set(x, k, l, v[l]);
            }
        }
    }
    RegularYDAlgebra {
        labels: h.basis_labels.clone(),
        mult: h.mult.clone(),
        unit: h.unit.clone(),
        star: h.star.clone(),
        coaction,
        action,
        group: h,
    }
}

/// The coordinate algebra with `alpha = Delta` and the trivial action `eps(x) a`.
pub fn counit_action_yd(h: Arc<HopfAlgebraData>) -> RegularYDAlgebra {
    let mut a = adjoint_yd_on_cg(h.clone());
    let n = h.dim;
    let mut action = Tensor3::zeros(n, n, n);
    for x in 0..n {
        for k in 0..n {
            action.set(x, k, k, h.counit[x]);
        }
    }
    a.action = action;
    a
}

/// The one-dimensional YD algebra `C` with trivial coaction and action.
pub fn trivial_yd(h: Arc<HopfAlgebraData>) -> RegularYDAlgebra {
    let n = h.dim;
    let mut coaction = Tensor3::zeros(1, n, 1);
    let mut action = Tensor3::zeros(n, 1, 1);
    for g in 0..n {
        coaction.set(0, g, 0, h.unit[g]);
        action.set(g, 0, 0, h.counit[g]);
    }
    let mut mult = Tensor3::zeros(1, 1, 1);
    mult.set(0, 0, 0, ONE);
    RegularYDAlgebra {
        group: h,
        labels: vec!["1".into()],
        mult,
        unit: CVec::from_element(1, ONE),
        star: CMat::identity(1, 1),
        coaction,
        action,
    }
}

/// Restricts to the span of the columns of `basis`, which must be a unital
/// *-subalgebra invariant under the coaction and the action.
pub fn restrict_to_subspace(a: &RegularYDAlgebra, basis: &CMat, tol: f64) -> Result<RegularYDAlgebra> {
    let (n, d) = (a.group.dim, a.dim());
    if basis.nrows() != d {
        return Err(Error::mismatch("subspace ambient dimension", basis.nrows(), d));
    }
    let q = linalg::column_space(basis);
    let m = q.ncols();
    let coords = |v: &CVec, what: &str| -> Result<CVec> {
        let (x, res) = linalg::coords_in(&q, v);
        if res > tol * (1.0 + v.norm()) {
            return Err(Error::AxiomFailure(format!("subspace is not closed under {what} (defect {res:.2e})")));
        }
        Ok(x)
    };
    let col = |k: usize| -> CVec { q.column(k).into_owned() };
    let mut mult = Tensor3::zeros(m, m, m);
    let mut coaction = Tensor3::zeros(m, n, m);
    let mut action = Tensor3::zeros(n, m, m);
    let mut star = CMat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let v = coords(&a.mul_vec(&col(i), &col(j)), "multiplication")?;
            for k in 0..m {
                mult.set(i, j, k, v[k]);
            }
        }
        // star in new coordinates: (q e_i)* = q s_i with s_i = coords
        star.set_column(i, &coords(&a.star_vec(&col(i)), "the involution")?);
        let cm = a.coact_vec(&col(i));
        for g in 0..n {
            let row: CVec = cm.row(g).transpose();
            let v = coords(&row, "the coaction")?;
            for l in 0..m {
                coaction.set(i, g, l, v[l]);
            }
        }
        for x in 0..n {
            let v = coords(&a.act_vec(x, &col(i)), "the action")?;
            for l in 0..m {
                action.set(x, i, l, v[l]);
            }
        }
    }
    let unit = coords(&a.unit, "the unit")?;
    // stored star acts on conjugated coordinates; for basis vectors these coincide
    Ok(RegularYDAlgebra {
        group: a.group.clone(),
        labels: (0..m).map(|k| format!("c{k}")).collect(),
        mult,
        unit,
        star,
        coaction,
        action,
    })
}

/// Summary of a YD axiom check.
#[derive(Debug, Clone, Serialize)]
pub struct YdReport {
    pub checks: CheckReport,
    pub exhaustive: bool,
    /// Tuples evaluated per axiom.
    pub certified: usize,
    /// Tuples skipped because some intermediate value left the truncation.
    pub skipped: usize,
    pub fixed_point_dim: usize,
}

impl YdReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

const EXHAUSTIVE_LIMIT: usize = 1_000_000;
const SAMPLES: usize = 10_000;

struct TupleRunner {
    exhaustive: bool,
    seed: u64,
    certified: usize,
    skipped: usize,
}

impl TupleRunner {
    /// Runs `f` over all index tuples in the box `dims`, or a seeded sample.
    fn run(&mut self, dims: &[usize], mut f: impl FnMut(&[usize]) -> Result<f64>) -> Result<f64> {
        let total: usize = dims.iter().product();
        if total == 0 {
            return Ok(0.0);
        }
        let mut worst: f64 = 0.0;
        let mut eval = |t: &[usize], worst: &mut f64, cert: &mut usize, skip: &mut usize| -> Result<()> {
            match f(t) {
                Ok(v) => {
                    *cert += 1;
                    *worst = worst.max(v);
                    Ok(())
                }
                Err(Error::TruncationExceeded { .. }) => {
                    *skip += 1;
                    Ok(())
                }
                Err(e) => Err(e),
            }
        };
        let (mut cert, mut skip) = (0, 0);
        if total <= EXHAUSTIVE_LIMIT {
            let mut t = vec![0; dims.len()];
            for mut flat in 0..total {
                for (p, &d) in dims.iter().enumerate().rev() {
                    t[p] = flat % d;
                    flat /= d;
                }
                eval(&t, &mut worst, &mut cert, &mut skip)?;
            }
        } else {
            self.exhaustive = false;
            let mut g = linalg::rng(self.seed);
            let mut t = vec![0; dims.len()];
            for _ in 0..SAMPLES {
                for (p, &d) in dims.iter().enumerate() {
                    t[p] = g.random_range(0..d);
                }
                eval(&t, &mut worst, &mut cert, &mut skip)?;
            }
        }
        self.certified += cert;
        self.skipped += skip;
        Ok(worst)
    }
}

fn add_coact(acc: &mut CMat, a: &dyn YdOps, v: &CVec, scale: C64) -> Result<()> {
    for (k, &vk) in v.iter().enumerate() {
        if vk == ZERO {
            continue;
        }
        for (g, l, c) in a.coact_basis(k)? {
            acc[(g, l)] += scale * vk * c;
        }
    }
    Ok(())
}

/// Checks every YD and braided-commutativity axiom on basis tuples.
///
/// Tuples whose evaluation leaves a truncation are skipped and counted; all
/// other errors abort the check.
pub fn check_yd_axioms(a: &dyn YdOps, tol: f64, seed: u64) -> Result<YdReport> {
    let g = a.group();
    let d = a.dim();
    let xs = a.group_test_indices();
    let nx = xs.len();
    let mut run = TupleRunner {
        exhaustive: true,
        seed,
        certified: 0,
        skipped: 0,
    };
    let mut rep = CheckReport::new();
    let b = |k: usize| a.basis(k);
    let ex = |i: usize| linalg::unit_vec(g.dim(), xs[i]);
    let one = a.unit();

    let r = run.run(&[d, d, d], |t| {
        let l = a.mul(&a.mul(&b(t[0]), &b(t[1]))?, &b(t[2]))?;
        let rr = a.mul(&b(t[0]), &a.mul(&b(t[1]), &b(t[2]))?)?;
        Ok(max_abs_vec(&(l - rr)))
    })?;
    rep.push("associativity", r, tol);

    let r = run.run(&[d], |t| {
        let x = b(t[0]);
        Ok(max_abs_vec(&(a.mul(&one, &x)? - &x)).max(max_abs_vec(&(a.mul(&x, &one)? - &x))))
    })?;
    rep.push("unit", r, tol);

    let r = run.run(&[d], |t| {
        let x = b(t[0]);
        Ok(max_abs_vec(&(a.star(&a.star(&x)?)? - x)))
    })?;
    rep.push("star_involution", r, tol);

    let r = run.run(&[d, d], |t| {
        let (x, y) = (b(t[0]), b(t[1]));
        let lhs = a.star(&a.mul(&x, &y)?)?;
        Ok(max_abs_vec(&(lhs - a.mul(&a.star(&y)?, &a.star(&x)?)?)))
    })?;
    rep.push("star_antihomomorphism", r, tol);

    // alpha is a unital *-homomorphism
    let r = run.run(&[d, d], |t| {
        let lhs = a.coact(&a.mul(&b(t[0]), &b(t[1]))?)?;
        let mut rhs = CMat::zeros(g.dim(), d);
        for (g1, l1, c1) in a.coact_basis(t[0])? {
            for (g2, l2, c2) in a.coact_basis(t[1])? {
                let gg = g.mul(&linalg::unit_vec(g.dim(), g1), &linalg::unit_vec(g.dim(), g2))?;
                let bb = a.mul(&b(l1), &b(l2))?;
                rhs += &gg * bb.transpose() * (c1 * c2);
            }
        }
        Ok(max_abs(&(lhs - rhs)))
    })?;
    let unital = max_abs(&(a.coact(&one)? - g.unit() * one.transpose()));
    rep.push("coaction_homomorphism", r.max(unital), tol);

    let r = run.run(&[d], |t| {
        let lhs = a.coact(&a.star(&b(t[0]))?)?;
        let mut rhs = CMat::zeros(g.dim(), d);
        for (g1, l1, c1) in a.coact_basis(t[0])? {
            let gs = g.star(&linalg::unit_vec(g.dim(), g1))?;
            let bs = a.star(&b(l1))?;
            rhs += &gs * bs.transpose() * c1.conj();
        }
        Ok(max_abs(&(lhs - rhs)))
    })?;
    rep.push("coaction_star", r, tol);

    let r = run.run(&[d], |t| {
        let terms = a.coact_basis(t[0])?;
        let n = g.dim();
        let mut lhs = Tensor3::zeros(n, n, d);
        let mut rhs = Tensor3::zeros(n, n, d);
        let mut counit = CVec::zeros(d);
        for &(g1, l1, c1) in &terms {
            for (p, q, c2) in g.comul_basis(g1)? {
                lhs.add(p, q, l1, c1 * c2);
            }
            for (g2, l2, c2) in a.coact_basis(l1)? {
                rhs.add(g1, g2, l2, c1 * c2);
            }
            counit[l1] += c1 * g.counit(&linalg::unit_vec(n, g1));
        }
        Ok(lhs.max_abs_diff(&rhs).max(max_abs_vec(&(counit - b(t[0])))))
    })?;
    rep.push("coaction_coassociative_counital", r, tol);

    // module structure
    let gu = g.unit();
    let r = run.run(&[nx, nx, d], |t| {
        let x = ex(t[0]);
        let y = ex(t[1]);
        let lhs = a.act(&g.mul(&x, &y)?, &b(t[2]))?;
        let rhs = a.act_basis(xs[t[0]], &a.act_basis(xs[t[1]], &b(t[2]))?)?;
        Ok(max_abs_vec(&(lhs - rhs)))
    })?;
    let r1 = run.run(&[d], |t| Ok(max_abs_vec(&(a.act(&gu, &b(t[0]))? - b(t[0])))))?;
    rep.push("module", r.max(r1), tol);

    let r = run.run(&[nx, d, d], |t| {
        let lhs = a.act_basis(xs[t[0]], &a.mul(&b(t[1]), &b(t[2]))?)?;
        let mut rhs = CVec::zeros(d);
        for (p, q, c) in g.comul_basis(xs[t[0]])? {
            rhs += a.mul(&a.act_basis(p, &b(t[1]))?, &a.act_basis(q, &b(t[2]))?)? * c;
        }
        Ok(max_abs_vec(&(lhs - rhs)))
    })?;
    let r1 = run.run(&[nx], |t| {
        let x = ex(t[0]);
        Ok(max_abs_vec(&(a.act(&x, &one)? - &one * g.counit(&x))))
    })?;
    rep.push("module_algebra", r.max(r1), tol);

    let r = run.run(&[nx, d], |t| {
        let x = ex(t[0]);
        let lhs = a.act(&x, &a.star(&b(t[1]))?)?;
        let sx = g.star(&g.antipode(&x)?)?;
        let rhs = a.star(&a.act(&sx, &b(t[1]))?)?;
        Ok(max_abs_vec(&(lhs - rhs)))
    })?;
    rep.push("star_compatibility", r, tol);

    let r = run.run(&[nx, d], |t| {
        let n = g.dim();
        let xa = a.act_basis(xs[t[0]], &b(t[1]))?;
        let mut lhs = CMat::zeros(n, d);
        add_coact(&mut lhs, a, &xa, ONE)?;
        let mut rhs = CMat::zeros(n, d);
        let alpha = a.coact_basis(t[1])?;
        for (p, q, c) in g.comul_basis(xs[t[0]])? {
            for (q1, q2, c2) in g.comul_basis(q)? {
                let sx3 = g.antipode(&linalg::unit_vec(n, q2))?;
                let x1 = linalg::unit_vec(n, p);
                for &(a1, a2, c3) in &alpha {
                    let left = g.mul(&g.mul(&x1, &linalg::unit_vec(n, a1))?, &sx3)?;
                    let right = a.act_basis(q1, &b(a2))?;
                    rhs += &left * right.transpose() * (c * c2 * c3);
                }
            }
        }
        Ok(max_abs(&(lhs - rhs)))
    })?;
    rep.push("yetter_drinfeld", r, tol);

    let r = run.run(&[d, d], |t| {
        let (x, y) = (b(t[0]), b(t[1]));
        let lhs = a.mul(&x, &y)?;
        let mut rhs = CVec::zeros(d);
        for (b1, b2, c) in a.coact_basis(t[1])? {
            let s = g.antipode_inv(&linalg::unit_vec(g.dim(), b1))?;
            rhs += a.mul(&b(b2), &a.act(&s, &x)?)? * c;
        }
        Ok(max_abs_vec(&(lhs - rhs)))
    })?;
    rep.push("braided_commutativity", r, tol);

    let fixed = fixed_point_basis(a)?;
    let fcols: Vec<CVec> = fixed.column_iter().map(|c| c.into_owned()).collect();
    let r = run.run(&[fcols.len(), d], |t| {
        let f = &fcols[t[0]];
        Ok(max_abs_vec(&(a.mul(f, &b(t[1]))? - a.mul(&b(t[1]), f)?)))
    })?;
    rep.push("fixed_points_central", r, tol);

    Ok(YdReport {
        checks: rep,
        exhaustive: run.exhaustive,
        certified: run.certified,
        skipped: run.skipped,
        fixed_point_dim: fcols.len(),
    })
}

/// Dimensions of the spectral subspaces `B_s` (finite providers): `B_s` is the
/// image of `d_s (h(chi_s^* .) (x) id) alpha`.
pub fn spectral_dims(a: &RegularYDAlgebra, cat: &crate::repcat::RepCategory) -> Result<Vec<usize>> {
    let h = &a.group;
    let hv = crate::hopf::haar(h, 1e-9)?;
    let t = cat.table();
    let mut dims = Vec::new();
    for s in 0..t.len() {
        let rep = &t.reps[s];
        let mut chi = CVec::zeros(h.dim);
        for i in 0..rep.dim {
            chi += rep.coefficient(i, i);
        }
        let chi_star = h.star_of(&chi);
        // functional x -> h(chi* x)
        let f: Vec<C64> = (0..h.dim).map(|g| hv.dot(&h.mul(&chi_star, &h.basis(g)))).collect();
        let mut proj = CMat::zeros(a.dim(), a.dim());
        for k in 0..a.dim() {
            let m = a.coact_vec(&a.basis(k));
            for g in 0..h.dim {
                if f[g] == ZERO {
                    continue;
                }
                for l in 0..a.dim() {
                    proj[(l, k)] += f[g] * m[(g, l)] * linalg::r(rep.dim as f64);
                }
            }
        }
        dims.push(linalg::rank(&proj));
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{function_algebra, kac_paljutkin, FiniteGroup};

    #[test]
    fn adjoint_algebras_are_braided_commutative() {
        for h in [function_algebra(&FiniteGroup::symmetric3()), kac_paljutkin()] {
            let a = adjoint_yd_on_cg(Arc::new(h));
            let rep = check_yd_axioms(&a, 1e-10, 1).unwrap();
            assert!(rep.passed(), "{:?}", rep.checks.failures());
            assert!(rep.exhaustive);
            assert_eq!(rep.skipped, 0);
            assert_eq!(rep.fixed_point_dim, 1);
        }
    }

    #[test]
    fn counit_action_on_noncommutative_algebra_breaks_braided_commutativity() {
        let a = counit_action_yd(Arc::new(kac_paljutkin()));
        let rep = check_yd_axioms(&a, 1e-10, 1).unwrap();
        assert!(!rep.checks.get("braided_commutativity").unwrap().passed);
        assert!(rep.checks.get("associativity").unwrap().passed);
    }

    #[test]
    fn trivial_algebra_is_yd() {
        let a = trivial_yd(Arc::new(kac_paljutkin()));
        assert!(check_yd_axioms(&a, 1e-12, 1).unwrap().passed());
    }

    #[test]
    fn basis_change_preserves_axioms() {
        let a = adjoint_yd_on_cg(Arc::new(kac_paljutkin()));
        let mut g = linalg::rng(4);
        let u = linalg::random_unitary(&mut g, a.dim());
        let b = a.change_basis(&u).unwrap();
        let ra = check_yd_axioms(&a, 1e-9, 1).unwrap();
        let rb = check_yd_axioms(&b, 1e-9, 1).unwrap();
        assert!(rb.passed(), "{:?}", rb.checks.failures());
        for (x, y) in ra.checks.checks.iter().zip(&rb.checks.checks) {
            assert!((x.residual - y.residual).abs() <= 1e-9, "{}", x.name);
        }
    }
}
