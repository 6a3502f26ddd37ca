//! The dual YD algebra `l^inf(G^) = (+)_s B(H_s)`.
//!
//! * multiplication and involution are blockwise,
//! * `alpha(a) = U* (1 (x) a) U`, so `alpha(E^s_ab) = sum_jl (u^s_aj)* u^s_bl (x) E^s_jl`,
//! * `(u^t_ij |> a)_s` is the `(i, j)` entry over `H_t` of `Delta^(a)` on `H_s (x) H_t`,
//!   where `Delta^(a)` acts on `H_s (x) H_t` as `sum_m W_m a_{r_m} W_m*`.
//!
//! Only blocks `s < nblocks` are kept; values that reach beyond are reported as
//! `TruncationExceeded`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::{Coaction, Coordinates, RegularYDAlgebra, YdOps};
use crate::error::{Error, Result};
use crate::hopf::HopfOps;
use crate::linalg::{self, CMat, CVec, ZERO};
use crate::repcat::{PeterWeyl, Provider, RepCategory};

/// Blockwise element of `l^inf(G^)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualElement {
    pub blocks: Vec<CMat>,
}

pub struct DualYd {
    pw: Arc<PeterWeyl>,
    nblocks: usize,
    offsets: Vec<usize>,
    dims: Vec<usize>,
    x_upto: usize,
    coact_cache: RwLock<HashMap<usize, Coaction>>,
}

impl std::fmt::Debug for DualYd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DualYd")
            .field("nblocks", &self.nblocks)
            .field("dims", &self.dims)
            .finish()
    }
}

/// Builds `l^inf(G^)` over the irreducibles of `cat`.
///
/// For `SU_q(2)` keep `nblocks` irreducibles (spins `< nblocks / 2`); axioms are
/// tested against coefficients of spins `< x_upto / 2`. Finite providers keep
/// every block.
pub fn dual_yd(cat: Arc<RepCategory>, nblocks: Option<usize>, x_upto: Option<usize>) -> Result<DualYd> {
    let total = cat.num_irreps();
    let nb = nblocks.unwrap_or(total).min(total);
    if nb == 0 {
        return Err(Error::Unsupported("dual algebra needs at least one block".into()));
    }
    let dims: Vec<usize> = cat.table().dims[..nb].to_vec();
    let mut offsets = Vec::with_capacity(nb + 1);
    let mut acc = 0;
    for &d in &dims {
        offsets.push(acc);
        acc += d * d;
    }
    offsets.push(acc);
    let pw = Arc::new(PeterWeyl::new(cat));
    Ok(DualYd {
        pw,
        nblocks: nb,
        offsets,
        dims,
        x_upto: x_upto.unwrap_or(total).min(total),
        coact_cache: RwLock::new(HashMap::new()),
    })
}

impl DualYd {
    pub fn peter_weyl(&self) -> &Arc<PeterWeyl> {
        &self.pw
    }

    pub fn category(&self) -> &Arc<RepCategory> {
        self.pw.category()
    }

    pub fn num_blocks(&self) -> usize {
        self.nblocks
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn index(&self, s: usize, a: usize, b: usize) -> usize {
        self.offsets[s] + a * self.dims[s] + b
    }

    pub fn decode(&self, k: usize) -> (usize, usize, usize) {
        let s = self.offsets.partition_point(|&o| o <= k) - 1;
        let r = k - self.offsets[s];
        (s, r / self.dims[s], r % self.dims[s])
    }

    pub fn to_element(&self, v: &CVec) -> DualElement {
        DualElement {
            blocks: (0..self.nblocks)
                .map(|s| {
                    let d = self.dims[s];
                    CMat::from_fn(d, d, |a, b| v[self.offsets[s] + a * d + b])
                })
                .collect(),
        }
    }

    pub fn from_element(&self, e: &DualElement) -> CVec {
        let mut v = CVec::zeros(self.offsets[self.nblocks]);
        for (s, m) in e.blocks.iter().enumerate() {
            let d = self.dims[s];
            for a in 0..d {
                for b in 0..d {
                    v[self.offsets[s] + a * d + b] = m[(a, b)];
                }
            }
        }
        v
    }

    /// Central projection onto block `s`.
    pub fn block_unit(&self, s: usize) -> CVec {
        let mut v = CVec::zeros(self.offsets[self.nblocks]);
        for a in 0..self.dims[s] {
            v[self.index(s, a, a)] = linalg::ONE;
        }
        v
    }

    /// Materializes the finite case in Hopf coordinates of the coordinate algebra.
    pub fn to_regular(&self) -> Result<RegularYDAlgebra> {
        if self.nblocks != self.pw.category().num_irreps() {
            return Err(Error::Unsupported("materializing needs every block".into()));
        }
        super::regular_from_pw_ops(self, &self.pw)
    }
}

impl YdOps for DualYd {
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
        let mut v = CVec::zeros(self.dim());
        for s in 0..self.nblocks {
            v += self.block_unit(s);
        }
        v
    }

    fn mul(&self, a: &CVec, b: &CVec) -> Result<CVec> {
        let (x, y) = (self.to_element(a), self.to_element(b));
        Ok(self.from_element(&DualElement {
            blocks: x.blocks.iter().zip(&y.blocks).map(|(p, q)| p * q).collect(),
        }))
    }

    fn star(&self, a: &CVec) -> Result<CVec> {
        let x = self.to_element(a);
        Ok(self.from_element(&DualElement {
            blocks: x.blocks.iter().map(|p| p.adjoint()).collect(),
        }))
    }

    fn coact_basis(&self, k: usize) -> Result<Coaction> {
        if let Some(c) = self.coact_cache.read().expect("cache lock").get(&k) {
            return Ok(c.clone());
        }
        let (s, a, b) = self.decode(k);
        let d = self.dims[s];
        let mut out = Vec::new();
        for j in 0..d {
            let uaj_star = self.pw.star(&self.pw.coefficient(s, a, j))?;
            for l in 0..d {
                let w = self.pw.mul(&uaj_star, &self.pw.coefficient(s, b, l))?;
                let target = self.index(s, j, l);
                for (g, &c) in w.iter().enumerate() {
                    if c.norm() > 1e-15 {
                        out.push((g, target, c));
                    }
                }
            }
        }
        self.coact_cache.write().expect("cache lock").insert(k, out.clone());
        Ok(out)
    }

    fn act_basis(&self, x: usize, a: &CVec) -> Result<CVec> {
        let cat = self.pw.category();
        let table = cat.table();
        let (t, i, j) = self.pw.decode(x);
        let dt = table.dims[t];
        let elem = self.to_element(a);
        let support: Vec<usize> = (0..self.nblocks)
            .filter(|&r| elem.blocks[r].iter().any(|z| *z != ZERO))
            .collect();
        let Some(&rmax) = support.last() else {
            return Ok(CVec::zeros(self.dim()));
        };
        let bounded = matches!(cat.provider(), Provider::SuQ2(_));
        let mut out: Vec<CMat> = self.dims.iter().map(|&d| CMat::zeros(d, d)).collect();
        for s in 0..table.len() {
            // spins: r in s (x) t forces s <= r + t
            if bounded && s > rmax + t {
                break;
            }
            let fus = cat.fusion(s, t)?;
            let ds = table.dims[s];
            let mut block = CMat::zeros(ds, ds);
            for p in &fus.parts {
                if !support.contains(&p.irrep) {
                    continue;
                }
                let big = &p.iso * &elem.blocks[p.irrep] * p.iso.adjoint();
                for u in 0..ds {
                    for v in 0..ds {
                        block[(u, v)] += big[(u * dt + i, v * dt + j)];
                    }
                }
            }
            if s < self.nblocks {
                out[s] = block;
            } else if linalg::max_abs(&block) > 1e-12 {
                return Err(Error::truncation(s, self.nblocks - 1));
            }
        }
        Ok(self.from_element(&DualElement { blocks: out }))
    }

    fn group_test_indices(&self) -> Vec<usize> {
        self.pw.indices_below(self.x_upto).collect()
    }

    fn label(&self, k: usize) -> String {
        let (s, a, b) = self.decode(k);
        format!("E^{}_{a}{b}", self.pw.category().table().labels[s])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{dual_hopf, function_algebra, kac_paljutkin, FiniteGroup, HopfAlgebraData};
    use crate::linalg::max_abs_vec;
    use crate::repcat::SuQ2;
    use crate::ydalg::check_yd_axioms;

    fn finite(h: HopfAlgebraData) -> DualYd {
        let cat = RepCategory::new(Provider::Finite(Arc::new(h)), 3).unwrap();
        dual_yd(cat, None, None).unwrap()
    }

    #[test]
    fn finite_duals_are_braided_commutative() {
        for h in [function_algebra(&FiniteGroup::symmetric3()), kac_paljutkin()] {
            let a = finite(h);
            let rep = check_yd_axioms(&a, 1e-9, 2).unwrap();
            assert!(rep.passed(), "{:?}", rep.checks.failures());
            assert_eq!(rep.fixed_point_dim, a.num_blocks());
            let reg = a.to_regular().unwrap();
            let rep = check_yd_axioms(&reg, 1e-9, 2).unwrap();
            assert!(rep.passed(), "{:?}", rep.checks.failures());
        }
    }

    /// Independent oracle: through `E^s_ab -> (e_c -> Phi^-1[(s,a,b), c])` the
    /// blockwise structure matches the dual Hopf algebra, right translation and
    /// `alpha(phi)(y) = S(y_1) phi(y_2) y_3`.
    #[test]
    fn finite_dual_matches_dual_hopf_formulas() {
        for h in [function_algebra(&FiniteGroup::symmetric3()), kac_paljutkin()] {
            let hh = h.clone();
            let a = finite(h);
            let reg = a.to_regular().unwrap();
            let phi = a.peter_weyl().to_hopf().unwrap();
            let psi = phi.try_inverse().unwrap().transpose();
            let hat = dual_hopf(&hh).unwrap();
            let n = hh.dim;
            for i in 0..n {
                let ei = a.basis(i);
                let fi = &psi * &ei;
                for j in 0..n {
                    let ej = a.basis(j);
                    let lhs = &psi * reg.mul_vec(&ei, &ej);
                    let rhs = hat.mul(&fi, &(&psi * &ej));
                    assert!(max_abs_vec(&(lhs - rhs)) < 1e-10);
                }
                let lhs = &psi * reg.star_vec(&ei);
                assert!(max_abs_vec(&(lhs - hat.star_of(&fi))) < 1e-10);
                for x in 0..n {
                    let lhs = &psi * reg.act_vec(x, &ei);
                    let rhs = CVec::from_fn(n, |c, _| {
                        let prod = hh.mul(&hh.basis(c), &hh.basis(x));
                        prod.dot(&fi)
                    });
                    assert!(max_abs_vec(&(lhs - rhs)) < 1e-10);
                }
                // alpha(phi) coefficient matrix in (group, dual) coordinates
                let lhs = reg.coact_vec(&ei) * psi.transpose();
                let mut rhs = CMat::zeros(n, n);
                for c in 0..n {
                    let t = hh.comul3(&hh.basis(c));
                    for p in 0..n {
                        for q in 0..n {
                            for r in 0..n {
                                let z = t.get(p, q, r);
                                if z == ZERO {
                                    continue;
                                }
                                let v = hh.mul(&hh.antipode_of(&hh.basis(p)), &hh.basis(r)) * (z * fi[q]);
                                for g in 0..n {
                                    rhs[(g, c)] += v[g];
                                }
                            }
                        }
                    }
                }
                assert!(linalg::max_abs(&(lhs - rhs)) < 1e-10);
            }
        }
    }

    #[test]
    fn truncated_suq2_dual_certifies_low_spins() {
        let cat = RepCategory::new(Provider::SuQ2(SuQ2::new(0.5, 6).unwrap()), 1).unwrap();
        let a = dual_yd(cat, Some(3), Some(2)).unwrap();
        let rep = check_yd_axioms(&a, 1e-8, 3).unwrap();
        assert!(rep.passed(), "{:?}", rep.checks.failures());
        assert!(rep.certified > 0);
        assert_eq!(rep.fixed_point_dim, 3);
    }
}
