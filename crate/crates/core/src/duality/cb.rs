//! The category `C_B` of a braided-commutative YD algebra.
//!
//! A morphism `U -> V` is `T = sum_k T_k (x) b_k` in `B(H_U, H_V) (x) B` with
//! `(iota (x) alpha)(T) U_12 = V_12 T_13`. Vectors store `T_k` column-major at
//! offset `k * dim V * dim U`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::provider::CategoryProvider;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, ONE, ZERO};
use crate::repcat::{Object, RepCategory};
use crate::report::CheckReport;
use crate::ydalg::{object_coefficients, YdOps};

/// A basis of `C_B(U, V)` with the defining-equation residual of its worst element.
#[derive(Clone, Debug)]
pub struct CbHom {
    pub source: Object,
    pub target: Object,
    pub dim_source: usize,
    pub dim_target: usize,
    pub algebra_dim: usize,
    /// Columns are morphism vectors.
    pub basis: CMat,
    pub residual: f64,
}

impl CbHom {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// The components `T_k` of column `c`.
    pub fn components(&self, c: usize) -> Vec<CMat> {
        split(&self.basis.column(c).into_owned(), self.dim_target, self.dim_source, self.algebra_dim)
    }
}

fn split(t: &CVec, dv: usize, du: usize, nb: usize) -> Vec<CMat> {
    let m = dv * du;
    (0..nb).map(|k| linalg::unvec(&t.as_slice()[k * m..(k + 1) * m], dv, du)).collect()
}

fn join(blocks: &[CMat]) -> CVec {
    let mut out = Vec::new();
    for b in blocks {
        out.extend_from_slice(b.as_slice());
    }
    CVec::from_vec(out)
}

fn nonzero(m: &CMat) -> bool {
    m.iter().any(|z| *z != ZERO)
}

/// `C_B` over a YD algebra, for objects of `cat`.
pub struct CbCategory {
    alg: Arc<dyn YdOps>,
    cat: Arc<RepCategory>,
    homs: RwLock<HashMap<(Object, Object), Arc<CMat>>>,
    products: RwLock<HashMap<(usize, usize), CVec>>,
}

impl CbCategory {
    pub fn new(alg: Arc<dyn YdOps>, cat: Arc<RepCategory>) -> Result<Self> {
        if alg.group().dim() != cat_group_dim(&cat, &*alg)? {
            return Err(Error::mismatch("coordinate algebra", alg.group().dim(), cat_group_dim(&cat, &*alg)?));
        }
        Ok(CbCategory {
            alg,
            cat,
            homs: RwLock::new(HashMap::new()),
            products: RwLock::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &Arc<dyn YdOps> {
        &self.alg
    }

    fn product(&self, k: usize, l: usize) -> Result<CVec> {
        if let Some(v) = self.products.read().expect("product cache").get(&(k, l)) {
            return Ok(v.clone());
        }
        let v = self.alg.mul(&self.alg.basis(k), &self.alg.basis(l))?;
        self.products.write().expect("product cache").insert((k, l), v.clone());
        Ok(v)
    }

    /// The linear system whose kernel is `C_B(U, V)`.
    ///
    /// Row `((p * du + q') * n + x) * nb + l` is the `e_x (x) b_l` coefficient of entry
    /// `(p, q')` of `(iota (x) alpha)(T) U_12 - V_12 T_13`.
    pub fn system(&self, u: &Object, v: &Object) -> Result<CMat> {
        let a = &*self.alg;
        let g = a.group();
        let (n, nb) = (g.dim(), a.dim());
        let (du, dv) = (self.cat.dim(u)?, self.cat.dim(v)?);
        let uc = object_coefficients(a, &self.cat, u)?;
        let vc = object_coefficients(a, &self.cat, v)?;
        let coacts: Vec<_> = (0..nb).map(|k| a.coact_basis(k)).collect::<Result<_>>()?;
        // e_g u_qq', computed once per (g, q, q')
        let mut left: HashMap<(usize, usize, usize), CVec> = HashMap::new();
        let mut sys = CMat::zeros(dv * du * n * nb, nb * dv * du);
        let row = |p: usize, q2: usize, x: usize, l: usize| ((p * du + q2) * n + x) * nb + l;
        let col = |k: usize, p: usize, q: usize| k * dv * du + p + q * dv;
        for (k, terms) in coacts.iter().enumerate() {
            for q in 0..du {
                for q2 in 0..du {
                    let mut acc: Vec<(usize, usize, crate::linalg::C64)> = Vec::new();
                    for &(gi, l, c) in terms {
                        let key = (gi, q, q2);
                        if !left.contains_key(&key) {
                            let w = g.mul(&linalg::unit_vec(n, gi), &uc[q][q2])?;
                            left.insert(key, w);
                        }
                        for (x, &w) in left[&key].iter().enumerate() {
                            if w != ZERO {
                                acc.push((x, l, c * w));
                            }
                        }
                    }
                    for p in 0..dv {
                        for &(x, l, w) in &acc {
                            sys[(row(p, q2, x, l), col(k, p, q))] += w;
                        }
                    }
                }
            }
        }
        for k in 0..nb {
            for p in 0..dv {
                for r in 0..dv {
                    for (x, &w) in vc[p][r].iter().enumerate() {
                        if w == ZERO {
                            continue;
                        }
                        for q2 in 0..du {
                            sys[(row(p, q2, x, k), col(k, r, q2))] -= w;
                        }
                    }
                }
            }
        }
        Ok(sys)
    }

    /// Largest entry of `(iota (x) alpha)(T) U_12 - V_12 T_13`.
    pub fn defining_residual(&self, u: &Object, v: &Object, t: &CVec) -> Result<f64> {
        Ok(linalg::max_abs_vec(&(self.system(u, v)? * t)))
    }

    pub fn cb_hom(&self, u: &Object, v: &Object) -> Result<CbHom> {
        let sys = self.system(u, v)?;
        let basis = self.hom_basis(u, v)?;
        let residual = linalg::max_abs(&(sys * &*basis));
        Ok(CbHom {
            source: u.clone(),
            target: v.clone(),
            dim_source: self.cat.dim(u)?,
            dim_target: self.cat.dim(v)?,
            algebra_dim: self.alg.dim(),
            basis: (*basis).clone(),
            residual,
        })
    }

    /// `T (x) 1` for an element `b` of the algebra.
    pub fn simple(&self, m: &CMat, b: &CVec) -> CVec {
        let blocks: Vec<CMat> = b.iter().map(|&c| m * c).collect();
        join(&blocks)
    }

    /// Components `T_k`.
    pub fn components(&self, u: &Object, v: &Object, t: &CVec) -> Result<Vec<CMat>> {
        Ok(split(t, self.cat.dim(v)?, self.cat.dim(u)?, self.alg.dim()))
    }
}

fn cat_group_dim(cat: &RepCategory, a: &dyn YdOps) -> Result<usize> {
    match a.coordinates() {
        crate::ydalg::Coordinates::Hopf => cat
            .provider()
            .hopf()
            .map(|h| h.dim)
            .ok_or_else(|| Error::Unsupported("Hopf coordinates need a finite provider".into())),
        crate::ydalg::Coordinates::PeterWeyl(pw) => Ok(crate::hopf::HopfOps::dim(&*pw)),
    }
}

impl CategoryProvider for CbCategory {
    fn category(&self) -> &Arc<RepCategory> {
        &self.cat
    }

    fn name(&self) -> String {
        "cb".into()
    }

    fn mor_len(&self, u: &Object, v: &Object) -> Result<usize> {
        Ok(self.cat.dim(u)? * self.cat.dim(v)? * self.alg.dim())
    }

    fn hom_basis(&self, u: &Object, v: &Object) -> Result<Arc<CMat>> {
        let key = (u.clone(), v.clone());
        if let Some(b) = self.homs.read().expect("hom cache").get(&key) {
            return Ok(b.clone());
        }
        let sys = self.system(u, v)?;
        let b = Arc::new(linalg::null_space_floor(&sys, linalg::RANK_CUTOFF, 1.0));
        self.homs.write().expect("hom cache").insert(key, b.clone());
        Ok(b)
    }

    fn embed(&self, u: &Object, v: &Object, t: &CMat) -> Result<CVec> {
        let (du, dv) = (self.cat.dim(u)?, self.cat.dim(v)?);
        if t.shape() != (dv, du) {
            return Err(Error::shape("embedded morphism", format!("{dv}x{du}"), format!("{:?}", t.shape())));
        }
        Ok(self.simple(t, &self.alg.unit()))
    }

    fn compose(&self, u: &Object, v: &Object, w: &Object, s: &CVec, t: &CVec) -> Result<CVec> {
        let (du, dv, dw) = (self.cat.dim(u)?, self.cat.dim(v)?, self.cat.dim(w)?);
        let nb = self.alg.dim();
        let ss = split(s, dw, dv, nb);
        let ts = split(t, dv, du, nb);
        let mut out: Vec<CMat> = (0..nb).map(|_| CMat::zeros(dw, du)).collect();
        for (k, sk) in ss.iter().enumerate().filter(|(_, m)| nonzero(m)) {
            for (l, tl) in ts.iter().enumerate().filter(|(_, m)| nonzero(m)) {
                let m = sk * tl;
                for (r, &c) in self.product(k, l)?.iter().enumerate() {
                    if c != ZERO {
                        out[r] += &m * c;
                    }
                }
            }
        }
        Ok(join(&out))
    }

    fn adjoint(&self, u: &Object, v: &Object, t: &CVec) -> Result<CVec> {
        let (du, dv) = (self.cat.dim(u)?, self.cat.dim(v)?);
        let nb = self.alg.dim();
        let ts = split(t, dv, du, nb);
        let mut out: Vec<CMat> = (0..nb).map(|_| CMat::zeros(du, dv)).collect();
        for (k, tk) in ts.iter().enumerate().filter(|(_, m)| nonzero(m)) {
            // (T_k (x) b_k)* = T_k^dag (x) b_k^*
            let bs = self.alg.star(&self.alg.basis(k))?;
            let adj = tk.adjoint();
            for (r, &c) in bs.iter().enumerate() {
                if c != ZERO {
                    out[r] += &adj * c;
                }
            }
        }
        Ok(join(&out))
    }

    fn tensor_right(&self, u: &Object, v: &Object, t: &CVec, z: &Object) -> Result<CVec> {
        let (du, dv, dz) = (self.cat.dim(u)?, self.cat.dim(v)?, self.cat.dim(z)?);
        let id = CMat::identity(dz, dz);
        let blocks: Vec<CMat> = split(t, dv, du, self.alg.dim())
            .iter()
            .map(|m| linalg::kron(m, &id))
            .collect();
        Ok(join(&blocks))
    }

    fn tensor_left(&self, w: &Object, u: &Object, v: &Object, t: &CVec) -> Result<CVec> {
        let (du, dv, dw) = (self.cat.dim(u)?, self.cat.dim(v)?, self.cat.dim(w)?);
        let a = &*self.alg;
        let nb = a.dim();
        let wc = object_coefficients(a, &self.cat, w)?;
        let ts = split(t, dv, du, nb);
        let mut out: Vec<CMat> = (0..nb).map(|_| CMat::zeros(dw * dv, dw * du)).collect();
        for (l, tl) in ts.iter().enumerate().filter(|(_, m)| nonzero(m)) {
            let bl = a.basis(l);
            for i in 0..dw {
                for j in 0..dw {
                    // iota_W (x) T = sum m_ij (x) T_l (x) (w_ij |> b_l)
                    let acted = a.act(&wc[i][j], &bl)?;
                    if acted.iter().all(|z| *z == ZERO) {
                        continue;
                    }
                    let mut unit = CMat::zeros(dw, dw);
                    unit[(i, j)] = ONE;
                    let m = linalg::kron(&unit, tl);
                    for (r, &c) in acted.iter().enumerate() {
                        if c != ZERO {
                            out[r] += &m * c;
                        }
                    }
                }
            }
        }
        Ok(join(&out))
    }
}

/// Checks `End_{C_B}(1) = B^G` as *-algebras: the spans agree and the
/// identification respects products and the involution.
pub fn check_unit_endomorphisms(cb: &CbCategory, tol: f64) -> Result<CheckReport> {
    let a = cb.algebra();
    let one = Object::unit();
    let hom = cb.hom_basis(&one, &one)?;
    let fixed = crate::ydalg::fixed_point_basis(&**a)?;
    let mut rep = CheckReport::new();
    rep.push_flag("dimension_matches", hom.ncols() == fixed.ncols());
    rep.push("span_matches", linalg::subspace_distance(&hom, &fixed), tol);
    let mut closure = 0.0f64;
    for i in 0..hom.ncols() {
        let x: CVec = hom.column(i).into_owned();
        for j in 0..hom.ncols() {
            let y: CVec = hom.column(j).into_owned();
            let c = cb.compose(&one, &one, &one, &x, &y)?;
            let p = a.mul(&x, &y)?;
            closure = closure.max(linalg::max_abs_vec(&(c - p)));
        }
        let s = cb.adjoint(&one, &one, &x)?;
        closure = closure.max(linalg::max_abs_vec(&(s - a.star(&x)?)));
    }
    rep.push("star_algebra_identification", closure, tol);
    Ok(rep)
}

/// The unitaries `T_{U,V}: (H_V (x) B) (x)_B (H_U (x) B) -> H_{U (x) V} (x) B` on module
/// realizations. Module elements are `dim x dim B` matrices whose row `i` is the
/// coefficient of `xi_i`.
pub struct ModuleTensor<'a> {
    alg: &'a dyn YdOps,
    cat: &'a RepCategory,
}

impl<'a> ModuleTensor<'a> {
    pub fn new(alg: &'a dyn YdOps, cat: &'a RepCategory) -> Self {
        ModuleTensor { alg, cat }
    }

    fn row(m: &CMat, i: usize) -> CVec {
        m.row(i).transpose()
    }

    /// `(zeta (x) b) (x) (xi (x) a) -> sum m_ij xi (x) zeta (x) (u_ij |> b) a`.
    pub fn apply(&self, u: &Object, y: &CMat, x: &CMat) -> Result<CMat> {
        let a = self.alg;
        let uc = object_coefficients(a, self.cat, u)?;
        let (du, dv, nb) = (x.nrows(), y.nrows(), a.dim());
        let mut out = CMat::zeros(du * dv, nb);
        for p in 0..du {
            for k in 0..dv {
                let yk = Self::row(y, k);
                let mut acc = CVec::zeros(nb);
                for (i, upi) in uc[p].iter().enumerate() {
                    let xi = Self::row(x, i);
                    if xi.iter().all(|z| *z == ZERO) {
                        continue;
                    }
                    acc += a.mul(&a.act(upi, &yk)?, &xi)?;
                }
                out.set_row(p * dv + k, &acc.transpose());
            }
        }
        Ok(out)
    }

    /// `B`-valued inner product `sum_i x_i^* x'_i`.
    pub fn inner(&self, x: &CMat, x2: &CMat) -> Result<CVec> {
        let a = self.alg;
        let mut acc = CVec::zeros(a.dim());
        for i in 0..x.nrows() {
            acc += a.mul(&a.star(&Self::row(x, i))?, &Self::row(x2, i))?;
        }
        Ok(acc)
    }

    /// Left action `pi_U(c)` on `H_U (x) B`.
    pub fn left_action(&self, u: &Object, c: &CVec, x: &CMat) -> Result<CMat> {
        let a = self.alg;
        let uc = object_coefficients(a, self.cat, u)?;
        let mut out = CMat::zeros(x.nrows(), x.ncols());
        for p in 0..x.nrows() {
            let mut acc = CVec::zeros(a.dim());
            for (q, upq) in uc[p].iter().enumerate() {
                acc += a.mul(&a.act(upq, c)?, &Self::row(x, q))?;
            }
            out.set_row(p, &acc.transpose());
        }
        Ok(out)
    }

    fn right_mul(&self, y: &CMat, c: &CVec) -> Result<CMat> {
        let mut out = CMat::zeros(y.nrows(), y.ncols());
        for k in 0..y.nrows() {
            out.set_row(k, &self.alg.mul(&Self::row(y, k), c)?.transpose());
        }
        Ok(out)
    }

    /// Coaction `delta(xi_p (x) b_m) = sum u_pp'^* b_m1 (x) xi_p' (x) b_m2`, as one
    /// module matrix per basis element of the coordinate algebra.
    pub fn coact(&self, u: &Object, x: &CMat) -> Result<Vec<CMat>> {
        let a = self.alg;
        let g = a.group();
        let n = g.dim();
        let uc = object_coefficients(a, self.cat, u)?;
        let (d, nb) = (x.nrows(), a.dim());
        let mut out: Vec<CMat> = (0..n).map(|_| CMat::zeros(d, nb)).collect();
        for p in 0..d {
            for m in 0..nb {
                let w = x[(p, m)];
                if w == ZERO {
                    continue;
                }
                let terms = a.coact_basis(m)?;
                for (p2, upp) in uc[p].iter().enumerate() {
                    let s = g.star(upp)?;
                    for &(h, l, c) in &terms {
                        let prod = g.mul(&s, &linalg::unit_vec(n, h))?;
                        for (gi, &z) in prod.iter().enumerate() {
                            if z != ZERO {
                                out[gi][(p2, l)] += w * c * z;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Unitarity, balancing, equivariance and coherence residuals of the module tensor
/// unitaries on seeded random module elements.
pub fn module_tensor_unitary(
    alg: &dyn YdOps,
    cat: &RepCategory,
    u: &Object,
    v: &Object,
    w: &Object,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let mt = ModuleTensor::new(alg, cat);
    let nb = alg.dim();
    let n = alg.group().dim();
    let (du, dv, dw) = (cat.dim(u)?, cat.dim(v)?, cat.dim(w)?);
    let mut rng = linalg::rng(seed);
    // unit Frobenius norm keeps residuals on the scale of the tolerance
    let mut rand_mod = |d: usize| {
        let m = linalg::random_complex_matrix(&mut rng, d, nb);
        let norm = m.norm();
        m / linalg::r(norm)
    };
    let uv = u.tensor(v);
    let (mut unitary, mut balanced, mut equiv, mut coherence) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let (y, x, y2, x2, z) = (rand_mod(dv), rand_mod(du), rand_mod(dv), rand_mod(du), rand_mod(dw));
        let c: CVec = rand_mod(1).row(0).transpose();
        // <T(y x), T(y' x')> = <x, pi_U(<y, y'>) x'>
        let lhs = mt.inner(&mt.apply(u, &y, &x)?, &mt.apply(u, &y2, &x2)?)?;
        let rhs = mt.inner(&x, &mt.left_action(u, &mt.inner(&y, &y2)?, &x2)?)?;
        unitary = unitary.max(linalg::max_abs_vec(&(lhs - rhs)));
        // T(y c, x) = T(y, pi_U(c) x)
        let lhs = mt.apply(u, &mt.right_mul(&y, &c)?, &x)?;
        let rhs = mt.apply(u, &y, &mt.left_action(u, &c, &x)?)?;
        balanced = balanced.max(linalg::max_abs(&(lhs - rhs)));
        // (iota (x) T) delta = delta T
        let dy = mt.coact(v, &y)?;
        let dx = mt.coact(u, &x)?;
        let mut lhs: Vec<CMat> = (0..n).map(|_| CMat::zeros(du * dv, nb)).collect();
        for (g1, yg) in dy.iter().enumerate().filter(|(_, m)| nonzero(m)) {
            for (g2, xg) in dx.iter().enumerate().filter(|(_, m)| nonzero(m)) {
                let prod = alg.group().mul(&linalg::unit_vec(n, g1), &linalg::unit_vec(n, g2))?;
                let t = mt.apply(u, yg, xg)?;
                for (h, &cz) in prod.iter().enumerate() {
                    if cz != ZERO {
                        lhs[h] += &t * cz;
                    }
                }
            }
        }
        let rhs = mt.coact(&uv, &mt.apply(u, &y, &x)?)?;
        for (l, r) in lhs.iter().zip(&rhs) {
            equiv = equiv.max(linalg::max_abs(&(l - r)));
        }
        // T_{U(x)V,W}(iota (x) T_{U,V}) = T_{U,V(x)W}(T_{V,W} (x) iota)
        let lhs = mt.apply(&uv, &z, &mt.apply(u, &y, &x)?)?;
        let rhs = mt.apply(u, &mt.apply(v, &z, &y)?, &x)?;
        coherence = coherence.max(linalg::max_abs(&(lhs - rhs)));
    }
    let mut rep = CheckReport::new();
    rep.push("unitary", unitary, tol);
    rep.push("balanced", balanced, tol);
    rep.push("equivariant", equiv, tol);
    rep.push("coherence", coherence, tol);
    // unit constraint: T_{1,V} is the identity on H_V (x) B
    let y = linalg::random_complex_matrix(&mut rng, dv, nb);
    let one = CMat::from_row_slice(1, nb, alg.unit().as_slice());
    let flip = mt.apply(&Object::unit(), &y, &one)?;
    rep.push("unit_constraint", linalg::max_abs(&(flip - &y)), tol);
    Ok(rep)
}
