//! The YD algebra of a category containing `Rep G`.
//!
//! `B~ = (+)_U conj(H_U) (x) C(1, U)` with product
//! `(xi (x) T)(zeta (x) S) = conj(xi (x) zeta) (x) (T (x) iota) S`, and
//! `pi: B~ -> B = (+)_s conj(H_s) (x) C(1, U_s)` obtained by splitting `U` into
//! irreducibles through isometries of `Rep G`. Basis vector `(s, a, l)` of `B` is
//! `conj(e_a) (x) T^s_l` for an orthonormal basis `T^s_l` of `C(1, U_s)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::provider::CategoryProvider;
use crate::error::{Error, Result};
use crate::hopf::HopfOps;
use crate::linalg::{self, CMat, CVec, ZERO};
use crate::repcat::{Decomposition, Object, PeterWeyl, RepCategory};
use crate::ydalg::{Coaction, Coordinates, RegularYDAlgebra, YdOps};

/// `conj(xi) (x) mor` with `mor` a morphism `1 -> obj`.
#[derive(Clone, Debug)]
pub struct UniversalTerm {
    pub obj: Object,
    pub xi: CVec,
    pub mor: CVec,
}

/// A finite sum of elementary tensors in `B~`.
#[derive(Clone, Debug, Default)]
pub struct UniversalElement {
    pub terms: Vec<UniversalTerm>,
}

impl UniversalElement {
    pub fn single(obj: Object, xi: CVec, mor: CVec) -> Self {
        UniversalElement {
            terms: vec![UniversalTerm { obj, xi, mor }],
        }
    }

    /// Sum of two elements.
    pub fn plus(mut self, other: UniversalElement) -> Self {
        self.terms.extend(other.terms);
        self
    }
}

/// Largest distance of a term's morphism from the declared hom space.
pub fn membership_residual(x: &UniversalElement, p: &dyn CategoryProvider) -> Result<f64> {
    let one = Object::unit();
    let mut worst = 0.0f64;
    for t in &x.terms {
        worst = worst.max(p.membership_residual(&one, &t.obj, &t.mor)?);
    }
    Ok(worst)
}

/// `(conj(xi) (x) T)(conj(zeta) (x) S) = conj(xi (x) zeta) (x) (T (x) iota_V) S`.
pub fn universal_product(x: &UniversalElement, y: &UniversalElement, p: &dyn CategoryProvider) -> Result<UniversalElement> {
    let one = Object::unit();
    let mut out = UniversalElement::default();
    for a in &x.terms {
        for b in &y.terms {
            let obj = a.obj.tensor(&b.obj);
            let right = p.tensor_right(&one, &a.obj, &a.mor, &b.obj)?;
            let mor = p.compose(&one, &b.obj, &obj, &right, &b.mor)?;
            out.terms.push(UniversalTerm {
                obj,
                xi: linalg::kron_vec(&a.xi, &b.xi),
                mor,
            });
        }
    }
    Ok(out)
}

/// `(conj(xi) (x) T)^. = conj(conj(rho^-1/2 xi)) (x) (T^* (x) iota) Rbar_U`.
pub fn star_bullet(x: &UniversalElement, p: &dyn CategoryProvider) -> Result<UniversalElement> {
    let cat = p.category();
    let one = Object::unit();
    let mut out = UniversalElement::default();
    for t in &x.terms {
        let conj = t.obj.conj();
        let u_ubar = t.obj.tensor(&conj);
        let rho = cat.rho(&t.obj)?;
        let xi = (linalg::hermitian_inv_sqrt(&rho) * &t.xi).map(|z| z.conj());
        let tstar = p.adjoint(&one, &t.obj, &t.mor)?;
        let left = p.tensor_right(&t.obj, &one, &tstar, &conj)?;
        let rbar = p.embed(&one, &u_ubar, &cat.rbar(&t.obj)?)?;
        let mor = p.compose(&one, &u_ubar, &conj, &left, &rbar)?;
        out.terms.push(UniversalTerm { obj: conj, xi, mor });
    }
    Ok(out)
}

/// `u^t_ij |>~ x = conj(xi_i (x) eta (x) conj(rho^-1/2 xi_j)) (x) (iota (x) T (x) iota) Rbar_{U_t}`.
pub fn rhd_tilde(t: usize, i: usize, j: usize, x: &UniversalElement, p: &dyn CategoryProvider) -> Result<UniversalElement> {
    let cat = p.category();
    let table = cat.table();
    let dt = table.dims[t];
    let ut = Object::Irrep(t);
    let ubar = ut.conj();
    let one = Object::unit();
    let tail = linalg::hermitian_inv_sqrt(&table.rho[t]).column(j).map(|z| z.conj());
    let ei = linalg::unit_vec(dt, i);
    let rbar_obj = ut.tensor(&ubar);
    let rbar = p.embed(&one, &rbar_obj, &cat.rbar(&ut)?)?;
    let mut out = UniversalElement::default();
    for term in &x.terms {
        let v_ubar = term.obj.tensor(&ubar);
        let obj = Object::tensor_all([&ut, &term.obj, &ubar]);
        let mid = p.tensor_right(&one, &term.obj, &term.mor, &ubar)?;
        let full = p.tensor_left(&ut, &ubar, &v_ubar, &mid)?;
        let mor = p.compose(&one, &rbar_obj, &obj, &full, &rbar)?;
        let xi = linalg::kron_vec(&linalg::kron_vec(&ei, &term.xi), &tail);
        out.terms.push(UniversalTerm { obj, xi, mor });
    }
    Ok(out)
}

/// The algebra `B` built from a provider, in Peter-Weyl coordinates.
pub struct Reconstruction {
    provider: Arc<dyn CategoryProvider>,
    cat: Arc<RepCategory>,
    pw: Arc<PeterWeyl>,
    nblocks: usize,
    x_upto: usize,
    homs: Vec<Arc<CMat>>,
    offsets: Vec<usize>,
    products: RwLock<HashMap<(usize, usize), CVec>>,
    stars: RwLock<HashMap<usize, CVec>>,
    actions: RwLock<HashMap<(usize, usize), CVec>>,
}

impl std::fmt::Debug for Reconstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Reconstruction")
            .field("provider", &self.provider.name())
            .field("multiplicities", &self.multiplicities())
            .finish()
    }
}

impl Reconstruction {
    /// Keeps irreducibles `s < nblocks` (all of them for finite providers) and
    /// checks axioms against coefficients of irreducibles `< x_upto`.
    pub fn new(provider: Arc<dyn CategoryProvider>, nblocks: Option<usize>, x_upto: Option<usize>) -> Result<Self> {
        let cat = provider.category().clone();
        let total = cat.num_irreps();
        let nblocks = nblocks.unwrap_or(total).min(total);
        let one = Object::unit();
        let mut homs = Vec::with_capacity(nblocks);
        let mut offsets = vec![0];
        for s in 0..nblocks {
            let h = provider.hom_basis(&one, &Object::Irrep(s))?;
            offsets.push(offsets[s] + cat.table().dims[s] * h.ncols());
            homs.push(h);
        }
        let pw = Arc::new(PeterWeyl::new(cat.clone()));
        Ok(Reconstruction {
            provider,
            cat,
            pw,
            nblocks,
            x_upto: x_upto.unwrap_or(total).min(total),
            homs,
            offsets,
            products: RwLock::new(HashMap::new()),
            stars: RwLock::new(HashMap::new()),
            actions: RwLock::new(HashMap::new()),
        })
    }

    pub fn provider(&self) -> &Arc<dyn CategoryProvider> {
        &self.provider
    }

    pub fn category(&self) -> &Arc<RepCategory> {
        &self.cat
    }

    pub fn peter_weyl(&self) -> &Arc<PeterWeyl> {
        &self.pw
    }

    pub fn num_blocks(&self) -> usize {
        self.nblocks
    }

    /// `dim C(1, U_s)` per irreducible.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.homs.iter().map(|h| h.ncols()).collect()
    }

    /// Orthonormal basis of `C(1, U_s)`.
    pub fn hom(&self, s: usize) -> &CMat {
        &self.homs[s]
    }

    pub fn index(&self, s: usize, a: usize, l: usize) -> usize {
        self.offsets[s] + a * self.homs[s].ncols() + l
    }

    pub fn decode(&self, k: usize) -> (usize, usize, usize) {
        let s = self.offsets.partition_point(|&o| o <= k) - 1;
        let m = self.homs[s].ncols();
        let r = k - self.offsets[s];
        (s, r / m, r % m)
    }

    /// The basis vector `(s, a, l)` as an element of `B~`.
    pub fn lift_basis(&self, k: usize) -> UniversalElement {
        let (s, a, l) = self.decode(k);
        UniversalElement::single(
            Object::Irrep(s),
            linalg::unit_vec(self.cat.table().dims[s], a),
            self.homs[s].column(l).into_owned(),
        )
    }

    /// A representative in `B~` of a coordinate vector.
    pub fn lift(&self, v: &CVec) -> UniversalElement {
        let mut out = UniversalElement::default();
        for (k, &c) in v.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            // conj(xi) (x) cT = c (conj(xi) (x) T)
            let mut e = self.lift_basis(k);
            e.terms[0].mor *= c;
            out = out.plus(e);
        }
        out
    }

    /// `pi`, splitting every object with the category's cached decompositions.
    pub fn project(&self, x: &UniversalElement) -> Result<CVec> {
        self.project_with(x, |obj| Ok((*self.cat.decompose(obj)?).clone()))
    }

    /// `pi` with decompositions drawn from a different random seed.
    pub fn project_seeded(&self, x: &UniversalElement, seed: u64) -> Result<CVec> {
        self.project_with(x, |obj| self.cat.decompose_with_seed(obj, seed))
    }

    fn project_with(&self, x: &UniversalElement, decompose: impl Fn(&Object) -> Result<Decomposition>) -> Result<CVec> {
        let one = Object::unit();
        let mut out = CVec::zeros(self.offsets[self.nblocks]);
        for t in &x.terms {
            let dec = decompose(&t.obj)?;
            for part in &dec.parts {
                let s = part.irrep;
                let us = Object::Irrep(s);
                let wstar = part.iso.adjoint();
                let eta = &wstar * &t.xi;
                let down = self.provider.embed(&t.obj, &us, &wstar)?;
                let m = self.provider.compose(&one, &t.obj, &us, &down, &t.mor)?;
                if s >= self.nblocks {
                    if linalg::max_abs_vec(&m) > 1e-12 && linalg::max_abs_vec(&eta) > 1e-12 {
                        return Err(Error::truncation(s, self.nblocks - 1));
                    }
                    continue;
                }
                let c = self.homs[s].adjoint() * &m;
                for (a, &ea) in eta.iter().enumerate() {
                    if ea == ZERO {
                        continue;
                    }
                    for (l, &cl) in c.iter().enumerate() {
                        out[self.index(s, a, l)] += ea.conj() * cl;
                    }
                }
            }
        }
        Ok(out)
    }

    fn cached<K: std::hash::Hash + Eq + Copy>(
        cache: &RwLock<HashMap<K, CVec>>,
        key: K,
        f: impl FnOnce() -> Result<CVec>,
    ) -> Result<CVec> {
        if let Some(v) = cache.read().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let v = f()?;
        cache.write().expect("cache lock").insert(key, v.clone());
        Ok(v)
    }

    fn basis_product(&self, i: usize, j: usize) -> Result<CVec> {
        Self::cached(&self.products, (i, j), || {
            let x = self.lift_basis(i);
            let y = self.lift_basis(j);
            self.project(&universal_product(&x, &y, &*self.provider)?)
        })
    }

    fn basis_star(&self, k: usize) -> Result<CVec> {
        Self::cached(&self.stars, k, || self.project(&star_bullet(&self.lift_basis(k), &*self.provider)?))
    }

    fn basis_action(&self, x: usize, k: usize) -> Result<CVec> {
        Self::cached(&self.actions, (x, k), || {
            let (t, i, j) = self.pw.decode(x);
            self.project(&rhd_tilde(t, i, j, &self.lift_basis(k), &*self.provider)?)
        })
    }

    /// Structure tensors in Hopf coordinates (finite providers with every block).
    pub fn to_regular(&self) -> Result<RegularYDAlgebra> {
        if self.nblocks != self.cat.num_irreps() {
            return Err(Error::Unsupported("materializing needs every block".into()));
        }
        crate::ydalg::regular_from_pw_ops(self, &self.pw)
    }
}

impl YdOps for Reconstruction {
    fn group(&self) -> &dyn HopfOps {
        &*self.pw
    }

    fn coordinates(&self) -> Coordinates {
        Coordinates::PeterWeyl(self.pw.clone())
    }

    fn dim(&self) -> usize {
        self.offsets[self.nblocks]
    }

    fn unit(&self) -> CVec {
        let one = Object::unit();
        let id = self
            .provider
            .embed(&one, &one, &CMat::identity(1, 1))
            .expect("identity of the unit object");
        let c = self.homs[0].adjoint() * id;
        let mut v = CVec::zeros(self.dim());
        for (l, &cl) in c.iter().enumerate() {
            v[self.index(0, 0, l)] = cl;
        }
        v
    }

    fn mul(&self, a: &CVec, b: &CVec) -> Result<CVec> {
        let mut out = CVec::zeros(self.dim());
        for (i, &ai) in a.iter().enumerate().filter(|(_, z)| **z != ZERO) {
            for (j, &bj) in b.iter().enumerate().filter(|(_, z)| **z != ZERO) {
                out += self.basis_product(i, j)? * (ai * bj);
            }
        }
        Ok(out)
    }

    fn star(&self, a: &CVec) -> Result<CVec> {
        let mut out = CVec::zeros(self.dim());
        for (k, &ak) in a.iter().enumerate().filter(|(_, z)| **z != ZERO) {
            out += self.basis_star(k)? * ak.conj();
        }
        Ok(out)
    }

    fn coact_basis(&self, k: usize) -> Result<Coaction> {
        // alpha(pi(conj(xi_a) (x) T)) = sum_j u_aj (x) pi(conj(xi_j) (x) T)
        let (s, a, l) = self.decode(k);
        Ok((0..self.cat.table().dims[s])
            .map(|j| (self.pw.index(s, a, j), self.index(s, j, l), linalg::ONE))
            .collect())
    }

    fn act_basis(&self, x: usize, a: &CVec) -> Result<CVec> {
        let mut out = CVec::zeros(self.dim());
        for (k, &ak) in a.iter().enumerate().filter(|(_, z)| **z != ZERO) {
            out += self.basis_action(x, k)? * ak;
        }
        Ok(out)
    }

    fn group_test_indices(&self) -> Vec<usize> {
        self.pw.indices_below(self.x_upto).collect()
    }

    fn label(&self, k: usize) -> String {
        let (s, a, l) = self.decode(k);
        format!("{}[{a}]T{l}", self.cat.table().labels[s])
    }
}
