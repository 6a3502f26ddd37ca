//! `P_mu` on the blocks of `l^inf(G^)`.
//!
//! `P_{phi_t}(a)_s = (phi_t (x) iota)(sum_m W_m a_{r_m} W_m*)` where the `W_m: H_r -> H_t (x) H_s`
//! decompose `U_t (x) U_s`. Output block `s` needs every block `r` occurring in `U_t (x) U_s`.

use serde::Serialize;

use super::phi::{phi_state, PhiState};
use super::Measure;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, C64, ONE};
use crate::repcat::{Object, RepCategory};
use crate::report::CheckReport;
use crate::ydalg::{DualElement, DualYd, YdOps};

/// Clustering radius around eigenvalue 1 and the unit circle.
pub const PERIPHERAL_TOL: f64 = 1e-8;

pub(crate) fn phis(cat: &RepCategory, mu: &Measure) -> Result<Vec<(usize, f64, PhiState)>> {
    mu.weights
        .iter()
        .map(|&(t, w)| Ok((t, w, phi_state(cat, &Object::Irrep(t))?)))
        .collect()
}

/// Number `n` of leading blocks whose image under `P_mu` only needs blocks below `level`.
pub fn certified_blocks(cat: &RepCategory, mu: &Measure, level: usize) -> Result<usize> {
    let top = mu.support().into_iter().max().unwrap_or(0);
    for s in 0..level {
        if top + s >= cat.num_irreps() && !cat.provider().is_finite() {
            return Ok(s);
        }
        for t in mu.support() {
            if cat.fusion(t, s)?.parts.iter().any(|p| p.irrep >= level) {
                return Ok(s);
            }
        }
    }
    Ok(level)
}

fn check_support(cat: &RepCategory, mu: &Measure) -> Result<()> {
    match mu.support().into_iter().find(|&t| t >= cat.num_irreps()) {
        Some(t) => Err(Error::truncation(t, cat.num_irreps() - 1)),
        None => Ok(()),
    }
}

fn apply_blocks(
    cat: &RepCategory,
    ph: &[(usize, f64, PhiState)],
    a: &[CMat],
    out_n: usize,
) -> Result<Vec<CMat>> {
    let dims = &cat.table().dims;
    let mut out = Vec::with_capacity(out_n);
    for s in 0..out_n {
        let ds = dims[s];
        let mut block = CMat::zeros(ds, ds);
        for (t, w, phi) in ph {
            for p in &cat.fusion(*t, s)?.parts {
                let ar = a.get(p.irrep).ok_or_else(|| Error::truncation(p.irrep, a.len() - 1))?;
                let big = &p.iso * ar * p.iso.adjoint();
                block += phi.partial(&big, ds, ds) * linalg::r(*w);
            }
        }
        out.push(block);
    }
    Ok(out)
}

/// `P_mu(a)` on every block of the dual.
pub fn markov_apply(dual: &DualYd, mu: &Measure, a: &DualElement) -> Result<DualElement> {
    markov_apply_upto(dual, mu, a, dual.num_blocks())
}

/// `P_mu(a)` on the blocks `s < out_n`.
pub fn markov_apply_upto(dual: &DualYd, mu: &Measure, a: &DualElement, out_n: usize) -> Result<DualElement> {
    let cat = dual.category();
    check_support(cat, mu)?;
    if a.blocks.len() != dual.num_blocks() {
        return Err(Error::mismatch("dual element blocks", a.blocks.len(), dual.num_blocks()));
    }
    let ph = phis(cat, mu)?;
    Ok(DualElement {
        blocks: apply_blocks(cat, &ph, &a.blocks, out_n.min(dual.num_blocks()))?,
    })
}

fn flatten(blocks: &[CMat]) -> CVec {
    let mut v = Vec::new();
    for b in blocks {
        for i in 0..b.nrows() {
            for j in 0..b.ncols() {
                v.push(b[(i, j)]);
            }
        }
    }
    CVec::from_vec(v)
}

fn prefix_dim(dual: &DualYd, n: usize) -> usize {
    dual.block_dims()[..n].iter().map(|d| d * d).sum()
}

/// `P_mu` from all blocks to the blocks `s < out_n`, in the dual's coordinates.
pub fn markov_matrix(dual: &DualYd, mu: &Measure, out_n: usize) -> Result<CMat> {
    let cat = dual.category();
    check_support(cat, mu)?;
    let ph = phis(cat, mu)?;
    let n = dual.dim();
    let out_n = out_n.min(dual.num_blocks());
    let mut m = CMat::zeros(prefix_dim(dual, out_n), n);
    for k in 0..n {
        let e = dual.to_element(&dual.basis(k));
        m.set_column(k, &flatten(&apply_blocks(cat, &ph, &e.blocks, out_n)?));
    }
    Ok(m)
}

fn pad(v: &CVec, n: usize) -> CVec {
    let mut out = CVec::zeros(n);
    out.rows_mut(0, v.len()).copy_from(v);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct MarkovReport {
    pub measure: Vec<(usize, f64)>,
    pub certified_blocks: usize,
    pub checks: CheckReport,
}

/// Unitality, positivity on `samples` seeded positive inputs and
/// `alpha P_mu = (iota (x) P_mu) alpha` on the certified blocks.
pub fn markov_report(dual: &DualYd, mu: &Measure, samples: usize, seed: u64, tol: f64) -> Result<MarkovReport> {
    let cat = dual.category();
    let out_n = certified_blocks(cat, mu, dual.num_blocks())?;
    if out_n == 0 {
        return Err(Error::truncation(mu.support().into_iter().max().unwrap_or(0), dual.num_blocks() - 1));
    }
    let p = markov_matrix(dual, mu, out_n)?;
    let out_dim = p.nrows();
    let mut checks = CheckReport::new();
    let unit = dual.unit();
    checks.push("unital", linalg::max_abs_vec(&(&p * &unit - unit.rows(0, out_dim))), tol);

    let mut g = linalg::rng(seed);
    let mut neg = 0.0f64;
    for _ in 0..samples {
        let x = DualElement {
            blocks: dual
                .block_dims()
                .iter()
                .map(|&d| {
                    let y = linalg::random_complex_matrix(&mut g, d, d);
                    &y * y.adjoint()
                })
                .collect(),
        };
        let px = dual.to_element(&pad(&(&p * dual.from_element(&x)), dual.dim()));
        for b in &px.blocks[..out_n] {
            neg = neg.max(linalg::max_abs(&(b - b.adjoint())));
            for lam in linalg::eigenvalues(b) {
                neg = neg.max(-lam.re);
            }
        }
    }
    checks.push("positive", neg, tol);

    let mut eq = 0.0f64;
    for k in 0..dual.dim() {
        let lhs = dual.coact(&pad(&p.column(k).into_owned(), dual.dim()))?;
        let rhs = dual.coact(&dual.basis(k))? * p.transpose();
        eq = eq.max(linalg::max_abs(&(lhs.columns(0, out_dim) - rhs)));
    }
    checks.push("equivariant", eq, tol);
    Ok(MarkovReport {
        measure: mu.weights.clone(),
        certified_blocks: out_n,
        checks,
    })
}

/// `{a : P_mu(a) = a}` within the truncation.
///
/// Unknowns are all blocks; equations only the certified ones. For finite
/// providers the two coincide and `basis` is the harmonic space itself; for
/// `SU_q(2)` it is an outer approximation and `certified_dim` is the rank of
/// its restriction to the certified blocks.
#[derive(Clone, Debug, Serialize)]
pub struct HarmonicSpace {
    pub level: usize,
    pub certified_blocks: usize,
    pub dim: usize,
    pub certified_dim: usize,
    /// Rank of the restriction to each certified block.
    pub block_ranks: Vec<usize>,
    #[serde(skip)]
    pub basis: CMat,
    pub checks: CheckReport,
}

pub fn harmonic_space(dual: &DualYd, mu: &Measure, tol: f64) -> Result<HarmonicSpace> {
    let cat = dual.category();
    check_support(cat, mu)?;
    let level = dual.num_blocks();
    let out_n = certified_blocks(cat, mu, level)?;
    if out_n == 0 {
        return Err(Error::truncation(mu.support().into_iter().max().unwrap_or(0), level - 1));
    }
    let p = markov_matrix(dual, mu, out_n)?;
    let out_dim = p.nrows();
    let mut sys = p;
    for i in 0..out_dim {
        sys[(i, i)] -= ONE;
    }
    let basis = linalg::null_space_floor(&sys, linalg::RANK_CUTOFF, 1.0);
    let certified_dim = linalg::rank(&basis.rows(0, out_dim).into_owned());
    let mut block_ranks = Vec::with_capacity(out_n);
    let mut off = 0;
    for &d in &dual.block_dims()[..out_n] {
        block_ranks.push(linalg::rank(&basis.rows(off, d * d).into_owned()));
        off += d * d;
    }

    let mut checks = CheckReport::new();
    let (_, res) = linalg::coords_in(&basis, &dual.unit());
    checks.push("contains_unit", res, tol);
    let mut closed = 0.0f64;
    for h in basis.column_iter() {
        let c = dual.coact(&h.into_owned())?;
        for row in c.row_iter() {
            let v = row.transpose();
            closed = closed.max(linalg::coords_in(&basis, &v).1);
        }
    }
    checks.push("coaction_closed", closed, tol);
    Ok(HarmonicSpace {
        level,
        certified_blocks: out_n,
        dim: basis.ncols(),
        certified_dim,
        block_ranks,
        basis,
        checks,
    })
}

/// The classical walk on `Irr(G)`: `Q[s][r] = sum_t mu(t) N_ts^r dim_q r / (dim_q t dim_q s)`.
#[derive(Clone, Debug, Serialize)]
pub struct IrrWalk {
    #[serde(skip)]
    pub transition: CMat,
    pub harmonic_dim: usize,
    pub irreducible: bool,
    pub checks: CheckReport,
}

/// Builds the walk, compares it with `P_mu` on central projections and counts
/// its harmonic functions; for an irreducible walk Perron-Frobenius forces one.
pub fn irr_walk(dual: &DualYd, mu: &Measure, tol: f64) -> Result<IrrWalk> {
    let cat = dual.category();
    if !cat.provider().is_finite() {
        return Err(Error::Unsupported("the walk on Irr(G) needs a finite provider".into()));
    }
    let n = cat.num_irreps();
    let qd = &cat.table().qdims;
    let mut q = CMat::zeros(n, n);
    for &(t, w) in &mu.weights {
        for s in 0..n {
            for (r, m) in cat.fusion_multiplicities(t, s)?.into_iter().enumerate() {
                q[(s, r)] += linalg::r(w * m as f64 * qd[r] / (qd[t] * qd[s]));
            }
        }
    }
    let mut checks = CheckReport::new();
    let ones = CVec::from_element(n, ONE);
    checks.push("stochastic", linalg::max_abs_vec(&(&q * &ones - &ones)), tol);

    let mut central = 0.0f64;
    for r in 0..n {
        let img = markov_apply(dual, mu, &dual.to_element(&dual.block_unit(r)))?;
        for s in 0..n {
            let ds = dual.block_dims()[s];
            let want = CMat::identity(ds, ds) * q[(s, r)];
            central = central.max(linalg::max_abs(&(&img.blocks[s] - want)));
        }
    }
    checks.push("matches_central_markov", central, tol);

    let mut sys = q.clone();
    for i in 0..n {
        sys[(i, i)] -= ONE;
    }
    let harmonic_dim = linalg::null_space_floor(&sys, linalg::RANK_CUTOFF, 1.0).ncols();
    let irreducible = mu.generates(cat)?;
    if irreducible {
        checks.push_flag("perron_frobenius_simple", harmonic_dim == 1);
    }
    Ok(IrrWalk {
        transition: q,
        harmonic_dim,
        irreducible,
        checks,
    })
}

/// The finite boundary: `P_mu`, its spectral projection `E_1` at eigenvalue 1
/// and the product `x . y = E_1(x y)`.
pub struct PoissonBoundary<'a> {
    pub dual: &'a DualYd,
    pub measure: Measure,
    pub markov: CMat,
    pub e1: CMat,
    /// Orthonormal basis of the harmonic space.
    pub harmonic: CMat,
    /// Eigenvalues of modulus 1 other than 1.
    pub peripheral: Vec<C64>,
    pub checks: CheckReport,
}

impl<'a> PoissonBoundary<'a> {
    /// Needs every block: `E_1 = V (W* V)^-1 W*` from right and left fixed vectors;
    /// cross-checked against the Richardson-extrapolated Cesaro mean of `P^n`.
    pub fn new(dual: &'a DualYd, mu: &Measure, tol: f64) -> Result<Self> {
        let cat = dual.category();
        if !cat.provider().is_finite() || dual.num_blocks() != cat.num_irreps() {
            return Err(Error::Unsupported("the Cesaro product needs a finite provider and every block".into()));
        }
        let p = markov_matrix(dual, mu, dual.num_blocks())?;
        let n = p.nrows();
        let id = CMat::identity(n, n);
        let peripheral: Vec<C64> = linalg::eigenvalues(&p)
            .into_iter()
            .filter(|l| (l.norm() - 1.0).abs() <= PERIPHERAL_TOL && (l - ONE).norm() > PERIPHERAL_TOL)
            .collect();
        let right = linalg::null_space_floor(&(&p - &id), linalg::RANK_CUTOFF, 1.0);
        let left = linalg::null_space_floor(&(p.adjoint() - &id), linalg::RANK_CUTOFF, 1.0);
        if right.ncols() != left.ncols() {
            return Err(Error::mismatch("fixed spaces of P and P*", right.ncols(), left.ncols()));
        }
        let pair = left.adjoint() * &right;
        let inv = pair
            .try_inverse()
            .ok_or_else(|| Error::Convention("eigenvalue 1 of the Markov operator is not semisimple".into()))?;
        let e1 = &right * inv * left.adjoint();

        let mut checks = CheckReport::new();
        checks.push("idempotent", linalg::max_abs(&(&e1 * &e1 - &e1)), tol);
        checks.push("fixed_range", linalg::max_abs(&(&p * &e1 - &e1)), tol);
        checks.push("invariant_kernel", linalg::max_abs(&(&e1 * &p - &e1)), tol);
        let (a1, a2) = cesaro_means(&p, CESARO_STEPS);
        let rich = linalg::max_abs(&(a2 * linalg::r(2.0) - a1 - &e1));
        // with peripheral spectrum the mean converges only like 1/N
        let cesaro_tol = if peripheral.is_empty() {
            tol.max(1e-8)
        } else {
            8.0 / CESARO_STEPS as f64
        };
        checks.push_detail(
            "cesaro_mean_matches",
            rich,
            cesaro_tol,
            format!("{} peripheral eigenvalues", peripheral.len()),
        );
        Ok(PoissonBoundary {
            dual,
            measure: mu.clone(),
            markov: p,
            e1,
            harmonic: right,
            peripheral,
            checks,
        })
    }

    /// Whether `P^n(x y)` itself converges for all inputs.
    pub fn limit_exists(&self) -> bool {
        self.peripheral.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.harmonic.ncols()
    }

    pub fn is_harmonic(&self, x: &CVec, tol: f64) -> bool {
        linalg::max_abs_vec(&(&self.markov * x - x)) <= tol
    }

    pub fn product(&self, x: &CVec, y: &CVec) -> Result<CVec> {
        Ok(&self.e1 * self.dual.mul(x, y)?)
    }

    /// Unit, associativity, `(x . y)* = y* . x*` and closure on the harmonic basis.
    pub fn algebra_report(&self, tol: f64) -> Result<CheckReport> {
        let h: Vec<CVec> = self.harmonic.column_iter().map(|c| c.into_owned()).collect();
        let unit = self.dual.unit();
        let (mut unital, mut assoc, mut star, mut closed) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for x in &h {
            unital = unital.max(linalg::max_abs_vec(&(self.product(&unit, x)? - x)));
            unital = unital.max(linalg::max_abs_vec(&(self.product(x, &unit)? - x)));
            for y in &h {
                let xy = self.product(x, y)?;
                closed = closed.max(linalg::max_abs_vec(&(&self.markov * &xy - &xy)));
                let lhs = self.dual.star(&xy)?;
                let rhs = self.product(&self.dual.star(y)?, &self.dual.star(x)?)?;
                star = star.max(linalg::max_abs_vec(&(lhs - rhs)));
                for z in &h {
                    let l = self.product(&xy, z)?;
                    let r = self.product(x, &self.product(y, z)?)?;
                    assoc = assoc.max(linalg::max_abs_vec(&(l - r)));
                }
            }
        }
        let mut rep = CheckReport::new();
        rep.push("unital", unital, tol);
        rep.push("closed", closed, tol);
        rep.push("involutive", star, tol);
        rep.push("associative", assoc, tol);
        Ok(rep)
    }
}

const CESARO_STEPS: usize = 1024;

/// `(A_N, A_2N)` with `A_N = (1/N) sum_{n<N} P^n`.
fn cesaro_means(p: &CMat, steps: usize) -> (CMat, CMat) {
    let n = p.nrows();
    let mut pow = CMat::identity(n, n);
    let mut sum = CMat::zeros(n, n);
    let mut first = CMat::zeros(n, n);
    for k in 0..2 * steps {
        if k == steps {
            first = &sum / linalg::r(steps as f64);
        }
        sum += &pow;
        pow = p * pow;
    }
    (first, sum / linalg::r((2 * steps) as f64))
}
