//! The two roundtrips of the duality and functoriality in the algebra.

use std::sync::Arc;

use serde::Serialize;

use super::cb::CbCategory;
use super::provider::CategoryProvider;
use super::reconstruct::{Reconstruction, UniversalElement};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::repcat::{Object, RepCategory};
use crate::report::CheckReport;
use crate::ydalg::{check_yd_morphism, YdOps};

/// Outcome of `B_{C_A} -> A`.
#[derive(Debug, Clone, Serialize)]
pub struct LambdaReport {
    pub algebra_dim: usize,
    pub reconstructed_dim: usize,
    /// `dim C_A(1, U_s)` per irreducible.
    pub multiplicities: Vec<usize>,
    pub rank: usize,
    pub bijective: bool,
    pub checks: CheckReport,
    /// A reconstructed element in the kernel of `lambda`, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<[f64; 2]>>,
}

impl LambdaReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.checks.passed()
    }
}

/// `lambda(pi(conj(zeta) (x) T)) = (conj(zeta) (x) iota)(T)` as a matrix, for a
/// reconstruction over `C_A`.
pub fn lambda_matrix(rec: &Reconstruction, algebra_dim: usize) -> CMat {
    let mut lam = CMat::zeros(algebra_dim, rec.dim());
    for k in 0..rec.dim() {
        let (s, a, l) = rec.decode(k);
        let ds = rec.category().table().dims[s];
        let t = rec.hom(s).column(l);
        // component b_m of T lives at m * ds + row
        for m in 0..algebra_dim {
            lam[(m, k)] = t[m * ds + a];
        }
    }
    lam
}

/// Builds `C_A`, reconstructs `B_{C_A}` and certifies `lambda` as an isomorphism.
pub fn roundtrip_lambda(alg: Arc<dyn YdOps>, cat: Arc<RepCategory>, tol: f64) -> Result<LambdaReport> {
    let cb: Arc<dyn CategoryProvider> = Arc::new(CbCategory::new(alg.clone(), cat)?);
    let rec = Reconstruction::new(cb, None, None)?;
    let lam = lambda_matrix(&rec, alg.dim());
    let rank = linalg::rank(&lam);
    let bijective = rank == alg.dim() && rank == rec.dim();
    let counterexample = if rank < rec.dim() {
        let ker = linalg::null_space(&lam);
        Some(ker.column(0).iter().map(|z| [z.re, z.im]).collect())
    } else {
        None
    };
    let checks = check_yd_morphism(&rec, &*alg, &lam, tol)?;
    Ok(LambdaReport {
        algebra_dim: alg.dim(),
        reconstructed_dim: rec.dim(),
        multiplicities: rec.multiplicities(),
        rank,
        bijective,
        checks,
        counterexample,
    })
}

/// The functor `F: P -> C_{B_P}` on morphisms `u -> v`.
pub struct Equivalence {
    pub provider: Arc<dyn CategoryProvider>,
    pub rec: Arc<Reconstruction>,
    pub cb: CbCategory,
}

impl Equivalence {
    pub fn new(provider: Arc<dyn CategoryProvider>) -> Result<Self> {
        let rec = Arc::new(Reconstruction::new(provider.clone(), None, None)?);
        let cb = CbCategory::new(rec.clone(), provider.category().clone())?;
        Ok(Equivalence { provider, rec, cb })
    }

    /// `F(T) = sum_ij theta_{zeta_j, xi_i} (x) pi(conj(zeta_j (x) conj(rho^-1/2 xi_i)) (x) (T (x) iota) Rbar_U)`.
    pub fn image(&self, u: &Object, v: &Object, t: &CVec) -> Result<CVec> {
        let p = &*self.provider;
        let cat = p.category();
        let (du, dv) = (cat.dim(u)?, cat.dim(v)?);
        let one = Object::unit();
        let ubar = u.conj();
        let u_ubar = u.tensor(&ubar);
        let v_ubar = v.tensor(&ubar);
        let rbar = p.embed(&one, &u_ubar, &cat.rbar(u)?)?;
        let tt = p.tensor_right(u, v, t, &ubar)?;
        let mor = p.compose(&one, &u_ubar, &v_ubar, &tt, &rbar)?;
        let rho = linalg::hermitian_inv_sqrt(&cat.rho(u)?);
        let nb = self.rec.dim();
        let mut out = CVec::zeros(nb * dv * du);
        for i in 0..du {
            let tail = rho.column(i).map(|z| z.conj());
            for j in 0..dv {
                let xi = linalg::kron_vec(&linalg::unit_vec(dv, j), &tail);
                let b = self.rec.project(&UniversalElement::single(v_ubar.clone(), xi, mor.clone()))?;
                for (k, &c) in b.iter().enumerate() {
                    out[k * dv * du + j + i * dv] += c;
                }
            }
        }
        Ok(out)
    }

    /// Columns are images of the orthonormal basis of `P(u, v)`.
    pub fn hom_map(&self, u: &Object, v: &Object) -> Result<CMat> {
        let basis = self.provider.hom_basis(u, v)?;
        let cols: Vec<CMat> = basis
            .column_iter()
            .map(|c| self.image(u, v, &c.into_owned()).map(|x| CMat::from_column_slice(x.len(), 1, x.as_slice())))
            .collect::<Result<_>>()?;
        let len = self.cb.mor_len(u, v)?;
        Ok(linalg::hstack(&cols, len))
    }
}

/// Per-pair data of `F`.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalencePair {
    pub source: String,
    pub target: String,
    pub provider_dim: usize,
    pub cb_dim: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub provider: String,
    pub multiplicities: Vec<usize>,
    pub pairs: Vec<EquivalencePair>,
    pub checks: CheckReport,
}

impl EquivalenceReport {
    pub fn bijective(&self) -> bool {
        self.pairs.iter().all(|p| p.rank == p.provider_dim && p.rank == p.cb_dim)
    }

    pub fn passed(&self) -> bool {
        self.bijective() && self.checks.passed()
    }
}

/// Certifies that `F` is bijective on every pair of `objects`, lands in `C_{B_P}`,
/// preserves composition and the embedding of `Rep G`, and is strictly tensor
/// (`F(iota_W (x) T) = iota_W (x) F(T)` and `F(T (x) iota_W) = F(T) (x) iota_W`).
pub fn equivalence_report(provider: Arc<dyn CategoryProvider>, objects: &[Object], tol: f64) -> Result<EquivalenceReport> {
    let eq = Equivalence::new(provider.clone())?;
    let p = &*provider;
    let cat = p.category().clone();
    let mut pairs = Vec::new();
    let (mut member, mut functorial, mut embed, mut left, mut right) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for u in objects {
        for v in objects {
            let f = eq.hom_map(u, v)?;
            let cb_dim = eq.cb.hom_basis(u, v)?.ncols();
            let rank = if f.ncols() == 0 { 0 } else { linalg::rank(&f) };
            for c in f.column_iter() {
                member = member.max(eq.cb.defining_residual(u, v, &c.into_owned())?);
            }
            pairs.push(EquivalencePair {
                source: u.to_string(),
                target: v.to_string(),
                provider_dim: p.hom_basis(u, v)?.ncols(),
                cb_dim,
                rank,
            });
            // Rep G morphisms go to T (x) 1
            for m in cat.hom_matrices(u, v)? {
                let t = p.embed(u, v, &m)?;
                let lhs = eq.image(u, v, &t)?;
                let rhs = eq.cb.embed(u, v, &m)?;
                embed = embed.max(linalg::max_abs_vec(&(lhs - rhs)));
            }
        }
    }
    for u in objects {
        for v in objects {
            let tb = p.hom_basis(u, v)?;
            for w in objects {
                let sb = p.hom_basis(v, w)?;
                for s in sb.column_iter() {
                    let s = s.into_owned();
                    for t in tb.column_iter() {
                        let t = t.into_owned();
                        let st = p.compose(u, v, w, &s, &t)?;
                        let lhs = eq.image(u, w, &st)?;
                        let rhs = eq.cb.compose(u, v, w, &eq.image(v, w, &s)?, &eq.image(u, v, &t)?)?;
                        functorial = functorial.max(linalg::max_abs_vec(&(lhs - rhs)));
                    }
                }
                for t in tb.column_iter() {
                    let t = t.into_owned();
                    let ft = eq.image(u, v, &t)?;
                    let lhs = eq.image(&w.tensor(u), &w.tensor(v), &p.tensor_left(w, u, v, &t)?)?;
                    let rhs = eq.cb.tensor_left(w, u, v, &ft)?;
                    left = left.max(linalg::max_abs_vec(&(lhs - rhs)));
                    let lhs = eq.image(&u.tensor(w), &v.tensor(w), &p.tensor_right(u, v, &t, w)?)?;
                    let rhs = eq.cb.tensor_right(u, v, &ft, w)?;
                    right = right.max(linalg::max_abs_vec(&(lhs - rhs)));
                }
            }
        }
    }
    let mut checks = CheckReport::new();
    checks.push("lands_in_cb", member, tol);
    checks.push("rep_g_embedding", embed, tol);
    checks.push("composition", functorial, tol);
    checks.push("strict_tensor_left", left, tol);
    checks.push("strict_tensor_right", right, tol);
    Ok(EquivalenceReport {
        provider: provider.name(),
        multiplicities: eq.rec.multiplicities(),
        pairs,
        checks,
    })
}

/// Per-pair data of `f_#`.
#[derive(Debug, Clone, Serialize)]
pub struct PushforwardPair {
    pub source: String,
    pub target: String,
    pub dim_from: usize,
    pub dim_to: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PushforwardReport {
    pub map_rank: usize,
    pub map_injective: bool,
    pub map_surjective: bool,
    pub pairs: Vec<PushforwardPair>,
    pub all_injective: bool,
    pub all_surjective: bool,
    pub checks: CheckReport,
}

impl PushforwardReport {
    /// Injectivity and surjectivity of `f` are mirrored by every `f_#`.
    pub fn consistent(&self) -> bool {
        self.map_injective == self.all_injective && self.map_surjective == self.all_surjective
    }
}

/// `f_#(sum T_k (x) b_k) = sum T_k (x) f(b_k)`, after validating `f` as an
/// equivariant unital *-homomorphism (columns of `f` are images of basis vectors).
pub fn pushforward(
    src: Arc<dyn YdOps>,
    dst: Arc<dyn YdOps>,
    f: &CMat,
    cat: Arc<RepCategory>,
    objects: &[Object],
    tol: f64,
) -> Result<PushforwardReport> {
    let valid = check_yd_morphism(&*src, &*dst, f, tol)?;
    if !valid.passed() {
        let names: Vec<String> = valid
            .failures()
            .iter()
            .map(|c| format!("{} ({:.2e})", c.name, c.residual))
            .collect();
        return Err(Error::AxiomFailure(format!("map is not an equivariant *-homomorphism: {}", names.join(", "))));
    }
    let c0 = CbCategory::new(src.clone(), cat.clone())?;
    let c1 = CbCategory::new(dst.clone(), cat)?;
    let (n0, n1) = (src.dim(), dst.dim());
    let push = |u: &Object, v: &Object, t: &CVec| -> Result<CVec> {
        let comps = c0.components(u, v, t)?;
        let (dv, du) = comps[0].shape();
        let mut out = CVec::zeros(n1 * dv * du);
        for (k, tk) in comps.iter().enumerate() {
            for r in 0..n1 {
                let w = f[(r, k)];
                if w == linalg::ZERO {
                    continue;
                }
                for (idx, &z) in tk.iter().enumerate() {
                    out[r * dv * du + idx] += z * w;
                }
            }
        }
        Ok(out)
    };
    let mut pairs = Vec::new();
    let (mut member, mut comp, mut tens) = (0.0f64, 0.0f64, 0.0f64);
    for u in objects {
        for v in objects {
            let b0 = c0.hom_basis(u, v)?;
            let dim_to = c1.hom_basis(u, v)?.ncols();
            let imgs: Vec<CMat> = b0
                .column_iter()
                .map(|c| push(u, v, &c.into_owned()).map(|x| CMat::from_column_slice(x.len(), 1, x.as_slice())))
                .collect::<Result<_>>()?;
            let m = linalg::hstack(&imgs, c1.mor_len(u, v)?);
            for c in m.column_iter() {
                member = member.max(c1.defining_residual(u, v, &c.into_owned())?);
            }
            let rank = if m.ncols() == 0 { 0 } else { linalg::rank(&m) };
            pairs.push(PushforwardPair {
                source: u.to_string(),
                target: v.to_string(),
                dim_from: b0.ncols(),
                dim_to,
                rank,
            });
            for w in objects {
                let sb = c0.hom_basis(v, w)?;
                for s in sb.column_iter().take(2) {
                    let s = s.into_owned();
                    for t in b0.column_iter().take(2) {
                        let t = t.into_owned();
                        let lhs = push(u, w, &c0.compose(u, v, w, &s, &t)?)?;
                        let rhs = c1.compose(u, v, w, &push(v, w, &s)?, &push(u, v, &t)?)?;
                        comp = comp.max(linalg::max_abs_vec(&(lhs - rhs)));
                    }
                }
                for t in b0.column_iter().take(2) {
                    let t = t.into_owned();
                    let lhs = push(&w.tensor(u), &w.tensor(v), &c0.tensor_left(w, u, v, &t)?)?;
                    let rhs = c1.tensor_left(w, u, v, &push(u, v, &t)?)?;
                    tens = tens.max(linalg::max_abs_vec(&(lhs - rhs)));
                }
            }
        }
    }
    let map_rank = linalg::rank(f);
    let mut checks = valid;
    checks.push("image_in_cb", member, tol);
    checks.push("respects_composition", comp, tol);
    checks.push("respects_tensor", tens, tol);
    Ok(PushforwardReport {
        map_rank,
        map_injective: map_rank == n0,
        map_surjective: map_rank == n1,
        all_injective: pairs.iter().all(|p| p.rank == p.dim_from),
        all_surjective: pairs.iter().all(|p| p.rank == p.dim_to),
        pairs,
        checks,
    })
}
