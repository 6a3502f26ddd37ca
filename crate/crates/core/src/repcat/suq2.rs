//! Representations of `SU_q(2)` through generator matrices `E, F, K` of `U_q(su_2)`.
//!
//! Relations: `K E K^-1 = q^2 E`, `K F K^-1 = q^-2 F`, `[E, F] = (K - K^-1)/(q - q^-1)`.
//! Coproduct: `K (x) K`, `E (x) 1 + K (x) E`, `F (x) K^-1 + 1 (x) F`.
//! Involution: `K* = K`, `E* = F K`.
//! The spin-`j` basis is ordered by descending weight `m = j, j-1, .., -j`.

use super::Representation;
use crate::error::{Error, Result};
use crate::linalg::{self, kron, max_abs, r, CMat, CVec};
use crate::report::CheckReport;

pub const E: usize = 0;
pub const F: usize = 1;
pub const K: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuQ2 {
    pub q: f64,
    /// Twice the top spin of the irrep table.
    pub level_twice: usize,
}

/// The symmetric q-number `[n]_q = (q^n - q^-n)/(q - q^-1)`.
pub fn qnum(q: f64, n: f64) -> f64 {
    if (q - 1.0).abs() < 1e-15 {
        return n;
    }
    (q.powf(n) - q.powf(-n)) / (q - 1.0 / q)
}

impl SuQ2 {
    pub fn new(q: f64, level_twice: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Unsupported(format!(
                "deformation parameter q = {q} must lie strictly between 0 and 1"
            )));
        }
        Ok(SuQ2 { q, level_twice })
    }

    /// The spin `j = twice/2` irreducible representation.
    pub fn spin(&self, twice: usize) -> Representation {
        let q = self.q;
        let j = twice as f64 / 2.0;
        let d = twice + 1;
        let mut e = CMat::zeros(d, d);
        let mut f = CMat::zeros(d, d);
        let mut k = CMat::zeros(d, d);
        for idx in 0..d {
            let m = j - idx as f64;
            k[(idx, idx)] = r(q.powf(2.0 * m));
        }
        // E sends m -> m+1 (index idx+1 -> idx), F sends m+1 -> m
        for idx in 1..d {
            let m = j - idx as f64;
            let cm = qnum(q, j - m) * qnum(q, j + m + 1.0);
            let sq = cm.max(0.0).sqrt();
            e[(idx - 1, idx)] = r(q.powf(m + 1.0) * sq);
            f[(idx, idx - 1)] = r(q.powf(-(m + 1.0)) * sq);
        }
        Representation {
            dim: d,
            gens: vec![e, f, k],
        }
    }

    pub fn trivial(&self) -> Representation {
        self.spin(0)
    }

    pub fn tensor(&self, a: &Representation, b: &Representation) -> Representation {
        let ia = CMat::identity(a.dim, a.dim);
        let ib = CMat::identity(b.dim, b.dim);
        let kb_inv = diag_inverse(&b.gens[K]);
        Representation {
            dim: a.dim * b.dim,
            gens: vec![
                kron(&a.gens[E], &ib) + kron(&a.gens[K], &b.gens[E]),
                kron(&a.gens[F], &kb_inv) + kron(&ia, &b.gens[F]),
                kron(&a.gens[K], &b.gens[K]),
            ],
        }
    }

    /// Modular operator `rho_U = pi_U(K)^-1`.
    pub fn rho(&self, a: &Representation) -> CMat {
        diag_inverse(&a.gens[K])
    }

    /// Conjugate representation on the conjugate Hilbert space:
    /// `X -> (rho^T)^(1/2) pi(S(X))^T (rho^T)^(-1/2)` with `S(K) = K^-1`, `S(E) = -K^-1 E`, `S(F) = -F K`.
    pub fn conj(&self, a: &Representation) -> Representation {
        let rho_t = self.rho(a).transpose();
        let half = linalg::hermitian_sqrt(&rho_t);
        let half_inv = linalg::hermitian_inv_sqrt(&rho_t);
        let k_inv = diag_inverse(&a.gens[K]);
        let se = -(&k_inv * &a.gens[E]);
        let sf = -(&a.gens[F] * &a.gens[K]);
        let tw = |m: CMat| &half * m.transpose() * &half_inv;
        Representation {
            dim: a.dim,
            gens: vec![tw(se), tw(sf), tw(k_inv)],
        }
    }

    /// Residuals of the defining relations and of the *-structure.
    pub fn check(&self, a: &Representation, tol: f64) -> CheckReport {
        let q = self.q;
        let (e, f, k) = (&a.gens[E], &a.gens[F], &a.gens[K]);
        let k_inv = diag_inverse(k);
        let scale = 1.0 + max_abs(e).max(max_abs(f)).max(max_abs(k)).powi(2);
        let mut rep = CheckReport::new();
        rep.push("weight_diagonal", if linalg::is_diagonal(k, 1e-12) { 0.0 } else { 1.0 }, tol);
        let kek = k * e * &k_inv - e * r(q * q);
        let kfk = k * f * &k_inv - f * r(1.0 / (q * q));
        rep.push("kek", max_abs(&kek) / scale, tol);
        rep.push("kfk", max_abs(&kfk) / scale, tol);
        let comm = e * f - f * e - (k - &k_inv) * r(1.0 / (q - 1.0 / q));
        rep.push("commutator", max_abs(&comm) / scale, tol);
        rep.push("e_adjoint", max_abs(&(e.adjoint() - f * k)) / scale, tol);
        rep.push("k_selfadjoint", max_abs(&(k.adjoint() - k)) / scale, tol);
        rep
    }

    /// Splits a representation with diagonal `K` into irreducible isometries by
    /// lowering orthonormal highest-weight vectors.
    pub fn decompose(&self, a: &Representation) -> Result<Vec<(usize, CMat)>> {
        let k = &a.gens[K];
        if !linalg::is_diagonal(k, 1e-10) {
            return Err(Error::NonSemisimple("weight operator is not diagonal".into()));
        }
        let lnq = self.q.ln();
        let weights: Vec<i64> = (0..a.dim)
            .map(|i| (k[(i, i)].re.ln() / lnq).round() as i64)
            .collect();
        let mut distinct: Vec<i64> = weights.iter().copied().filter(|&w| w >= 0).collect();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.reverse();
        let mut parts = Vec::new();
        let mut covered = 0;
        for &tw in &distinct {
            let idx: Vec<usize> = (0..a.dim).filter(|&i| weights[i] == tw).collect();
            let mut sub = CMat::zeros(a.dim, idx.len());
            for (c, &i) in idx.iter().enumerate() {
                sub.set_column(c, &a.gens[E].column(i));
            }
            let hw = linalg::null_space_with(&sub, 1e-9);
            let twice = tw as usize;
            if hw.ncols() > 0 && twice > self.level_twice {
                return Err(Error::truncation(twice, self.level_twice));
            }
            let std = self.spin(twice);
            for col in 0..hw.ncols() {
                let mut v = CVec::zeros(a.dim);
                for (c, &i) in idx.iter().enumerate() {
                    v[i] = hw[(c, col)];
                }
                let mut iso = CMat::zeros(a.dim, twice + 1);
                iso.set_column(0, &v);
                for step in 1..=twice {
                    let coeff = std.gens[F][(step, step - 1)];
                    let next = &a.gens[F] * iso.column(step - 1) / coeff;
                    iso.set_column(step, &next);
                }
                covered += twice + 1;
                parts.push((twice, iso));
            }
        }
        if covered != a.dim {
            return Err(Error::Decomposition {
                achieved: covered,
                expected: a.dim,
            });
        }
        Ok(parts)
    }
}

fn diag_inverse(k: &CMat) -> CMat {
    let n = k.nrows();
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = linalg::ONE / k[(i, i)];
    }
    out
}
