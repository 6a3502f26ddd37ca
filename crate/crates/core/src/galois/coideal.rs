//! Quotient coideals `C[G/H]`, recovery of `H` from them, and the exhaustive
//! search for invariant subalgebras of small adjoint algebras.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopf::{validate_hopf, HopfAlgebraData, SubgroupSurjection, Tensor3};
use crate::linalg::{self, CMat, CVec};
use crate::repcat::{Object, PeterWeyl, RepCategory};
use crate::report::CheckReport;
use crate::ydalg::{adjoint_yd_on_cg, restrict_to_subspace, RegularYDAlgebra};

/// A left coideal subalgebra of `C[G]`, stored as orthonormal Hopf-coordinate columns.
#[derive(Clone, Debug)]
pub struct CoidealSubalgebra {
    pub name: String,
    pub group: Arc<HopfAlgebraData>,
    pub basis: CMat,
    /// Worst defect of the defining system on the basis (zero when enumerated).
    pub residual: f64,
}

impl CoidealSubalgebra {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Columns are the images in `C[G]` of the basis used by [`Self::yd`].
    pub fn inclusion(&self) -> CMat {
        // restrict_to_subspace orthonormalizes with the same deterministic routine
        linalg::column_space(&self.basis)
    }

    /// The subalgebra as a YD algebra with `alpha = Delta` and the adjoint action.
    pub fn yd(&self, tol: f64) -> Result<RegularYDAlgebra> {
        restrict_to_subspace(&adjoint_yd_on_cg(self.group.clone()), &self.basis, tol)
    }
}

/// `{x : (iota (x) p) Delta(x) = x (x) 1}` for a validated surjection `p`.
pub fn quotient_coideal(sub: &SubgroupSurjection, tol: f64) -> Result<CoidealSubalgebra> {
    let valid = sub.validate(tol)?;
    if !valid.passed() {
        let names: Vec<&str> = valid.failures().iter().map(|c| c.name.as_str()).collect();
        return Err(Error::AxiomFailure(format!(
            "{} is not a surjective Hopf *-homomorphism: {}",
            sub.name,
            names.join(", ")
        )));
    }
    let (g, h) = (&sub.source, &sub.target);
    let (n, m) = (g.dim, h.dim);
    // row j m + c: coefficient of e_j (x) f_c
    let mut sys = CMat::zeros(n * m, n);
    for i in 0..n {
        for (j, k, w) in g.comul_terms(i) {
            for c in 0..m {
                sys[(j * m + c, i)] += w * sub.map[(c, k)];
            }
        }
        for c in 0..m {
            sys[(i * m + c, i)] -= h.unit[c];
        }
    }
    let basis = linalg::null_space_floor(&sys, linalg::RANK_CUTOFF, 1.0);
    let residual = if basis.ncols() == 0 { 0.0 } else { linalg::max_abs(&(&sys * &basis)) };
    Ok(CoidealSubalgebra {
        name: format!("C[G/{}]", sub.name),
        group: g.clone(),
        basis,
        residual,
    })
}

/// Kernel of `p` in Hopf coordinates, computed directly.
pub fn restriction_kernel(sub: &SubgroupSurjection) -> CMat {
    linalg::null_space(&sub.map)
}

/// What a coideal remembers about its quantum subgroup.
#[derive(Clone, Debug)]
pub struct SubgroupKernel {
    /// `Hom_H(1, U_s)` as orthonormal columns, per irrep.
    pub invariants: Vec<CMat>,
    /// Spanning set of `End_H` of the sum of all irreps, block `(s, t)` in `Hom_H(U_t, U_s)`.
    pub intertwiners: Vec<CMat>,
    /// Kernel of the restriction map, orthonormal columns in Hopf coordinates.
    pub kernel: CMat,
}

impl SubgroupKernel {
    pub fn invariant_dims(&self) -> Vec<usize> {
        self.invariants.iter().map(|w| w.ncols()).collect()
    }
}

/// Rows below this norm are rounding noise of an absent block.
const ROW_FLOOR: f64 = 1e-10;

fn check_same_group(g: &HopfAlgebraData, cat: &RepCategory) -> Result<()> {
    let h = cat
        .provider()
        .hopf()
        .ok_or_else(|| Error::Unsupported("coideal theory is implemented for finite quantum groups only".into()))?;
    if **h != *g {
        return Err(Error::Convention("coideal and category are built on different Hopf data".into()));
    }
    Ok(())
}

/// Recovers `ker(C[G] -> C[H])` from `C[G/H]`: invariant vectors are read off the
/// second index of matrix coefficients, extended to `End_H` by Frobenius
/// reciprocity, and the kernel is the annihilator of their commutants.
pub fn reconstruct_subgroup(c: &CoidealSubalgebra, cat: &Arc<RepCategory>, tol: f64) -> Result<SubgroupKernel> {
    check_same_group(&c.group, cat)?;
    // refuses subspaces that are not YD subalgebras
    c.yd(tol)?;
    let pw = PeterWeyl::new(cat.clone());
    let phi = pw.to_hopf()?;
    let phi_inv = phi
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotQuantumGroup("matrix coefficients do not span".into()))?;
    let table = cat.table();
    let ns = table.len();
    let mut rows: Vec<Vec<CMat>> = vec![Vec::new(); ns];
    let mut off_grade: f64 = 0.0;
    for b in c.basis.column_iter() {
        let y = &phi_inv * b;
        for (s, blk) in pw.blocks(&y).into_iter().enumerate() {
            for i in 0..blk.nrows() {
                rows[s].push(CMat::from_iterator(blk.ncols(), 1, blk.row(i).iter().cloned()));
            }
        }
    }
    // a coideal is graded, so its blocks lie in it again
    for b in c.basis.column_iter() {
        let y = &phi_inv * b;
        let blocks = pw.blocks(&y);
        for s in 0..ns {
            let only: Vec<CMat> = blocks
                .iter()
                .enumerate()
                .map(|(t, m)| if t == s { m.clone() } else { CMat::zeros(m.nrows(), m.ncols()) })
                .collect();
            let (_, res) = linalg::coords_in(&c.basis, &(&phi * pw.from_blocks(&only)));
            off_grade = off_grade.max(res);
        }
    }
    if off_grade > tol.max(1e-8) {
        return Err(Error::AxiomFailure(format!("subspace is not graded by irreps (defect {off_grade:.2e})")));
    }
    let invariants: Vec<CMat> = rows
        .iter()
        .enumerate()
        .map(|(s, r)| {
            let d = table.dims[s];
            let live: Vec<CMat> = r.iter().filter(|v| v.norm() > ROW_FLOOR).cloned().collect();
            if live.is_empty() {
                CMat::zeros(d, 0)
            } else {
                linalg::column_space(&linalg::hstack(&live, d))
            }
        })
        .collect();
    // End_H of the direct sum of all irreps, block (s, t) = Hom_H(U_t, U_s)
    let offsets: Vec<usize> = table
        .dims
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let total: usize = table.dims.iter().sum();
    let mut intertwiners = Vec::new();
    for t in 0..ns {
        let ut = Object::Irrep(t);
        let rbar = cat.rbar(&ut)?;
        let dt = table.dims[t];
        for s in 0..ns {
            let ds = table.dims[s];
            let dec = cat.decompose(&ut.conj().tensor(&Object::Irrep(s)))?;
            for part in &dec.parts {
                for z in invariants[part.irrep].column_iter() {
                    let eta = &part.iso * z;
                    let eta = CMat::from_column_slice(dt * ds, 1, eta.as_slice());
                    // T = (Rbar_t^* (x) iota_s)(iota_t (x) eta): U_t -> U_s
                    let tm = linalg::kron(&rbar.adjoint(), &CMat::identity(ds, ds))
                        * linalg::kron(&CMat::identity(dt, dt), &eta);
                    let mut big = CMat::zeros(total, total);
                    big.view_mut((offsets[s], offsets[t]), (ds, dt)).copy_from(&tm);
                    intertwiners.push(big);
                }
            }
        }
    }
    let comm = commutant(&intertwiners, total);
    // coefficient vectors c with sum c_(s,i,j) X_(s,i,j) = 0 on the commutant
    let npw = pw.indices_below(ns).len();
    let mut functionals = CMat::zeros(comm.ncols(), npw);
    for (k, x) in comm.column_iter().enumerate() {
        for s in 0..ns {
            for i in 0..table.dims[s] {
                for j in 0..table.dims[s] {
                    functionals[(k, pw.index(s, i, j))] = x[(offsets[s] + i) + (offsets[s] + j) * total];
                }
            }
        }
    }
    let kernel = if comm.ncols() == 0 {
        phi.clone()
    } else {
        let ann = linalg::null_space(&functionals);
        if ann.ncols() == 0 {
            CMat::zeros(c.group.dim, 0)
        } else {
            linalg::column_space(&(&phi * ann))
        }
    };
    Ok(SubgroupKernel {
        invariants,
        intertwiners,
        kernel,
    })
}

/// Orthonormal basis (as vectorized columns) of `{X : X T = T X for all T}`.
pub fn commutant(mats: &[CMat], d: usize) -> CMat {
    if mats.is_empty() {
        return CMat::identity(d * d, d * d);
    }
    let id = CMat::identity(d, d);
    let blocks: Vec<CMat> = mats
        .iter()
        .map(|t| linalg::kron(&id, t) - linalg::kron(&t.transpose(), &id))
        .collect();
    linalg::null_space_floor(&linalg::vstack(&blocks, d * d), linalg::RANK_CUTOFF, 1.0)
}

/// `p: C[G] -> C[G]/K` for a Hopf *-ideal `K`, with the quotient structure
/// transported through the orthogonal complement of `K`.
pub fn quotient_by_kernel(g: &Arc<HopfAlgebraData>, kernel: &CMat, name: &str) -> Result<SubgroupSurjection> {
    let n = g.dim;
    if kernel.nrows() != n {
        return Err(Error::mismatch("kernel ambient dimension", kernel.nrows(), n));
    }
    let q = if kernel.ncols() == 0 {
        CMat::identity(n, n)
    } else {
        linalg::null_space(&kernel.adjoint())
    };
    let (k, m) = (kernel.ncols(), q.ncols());
    if k + m != n {
        return Err(Error::mismatch("kernel plus complement", k + m, n));
    }
    let full = linalg::hstack(&[kernel.clone(), q.clone()], n);
    let inv = full
        .try_inverse()
        .ok_or_else(|| Error::Convention("kernel and complement do not span".into()))?;
    let p = inv.rows(k, m).into_owned();
    let col = |a: usize| -> CVec { q.column(a).into_owned() };
    let mut mult = Tensor3::zeros(m, m, m);
    let mut comult = Tensor3::zeros(m, m, m);
    let mut counit = CVec::zeros(m);
    for a in 0..m {
        for b in 0..m {
            let v = &p * g.mul(&col(a), &col(b));
            for c in 0..m {
                mult.set(a, b, c, v[c]);
            }
        }
        let d = &p * g.comul(&col(a)) * p.transpose();
        for b in 0..m {
            for c in 0..m {
                comult.set(a, b, c, d[(b, c)]);
            }
        }
        counit[a] = g.counit_of(&col(a));
    }
    let target = HopfAlgebraData::new(
        (0..m).map(|a| format!("q{a}")).collect(),
        mult,
        &p * &g.unit,
        comult,
        counit,
        &p * &g.antipode * &q,
        &p * &g.star * q.map(|z| z.conj()),
    )?;
    Ok(SubgroupSurjection {
        name: name.to_string(),
        source: g.clone(),
        target: Arc::new(target),
        map: p,
    })
}

/// Evidence that a YD subalgebra of the adjoint `C[G]` is `C[G/H]`.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientCertificate {
    pub coideal_dim: usize,
    pub kernel_dim: usize,
    pub subgroup_dim: usize,
    pub invariant_dims: Vec<usize>,
    /// Distance between the coideal and the coideal of the recovered subgroup.
    pub distance: f64,
    pub checks: CheckReport,
}

impl QuotientCertificate {
    pub fn is_quotient_type(&self) -> bool {
        self.checks.passed()
    }
}

/// Recovers `H` from `c`, rebuilds `C[G/H]` and compares.
pub fn certify_quotient_type(c: &CoidealSubalgebra, cat: &Arc<RepCategory>, tol: f64) -> Result<QuotientCertificate> {
    let rec = reconstruct_subgroup(c, cat, tol)?;
    let sub = quotient_by_kernel(&c.group, &rec.kernel, "recovered")?;
    let mut checks = CheckReport::new();
    checks.extend("quotient_hopf", validate_hopf(&sub.target, tol)?);
    checks.extend("surjection", sub.validate(tol)?);
    let back = quotient_coideal(&sub, tol);
    let distance = match &back {
        Ok(b) if b.dim() == c.dim() => linalg::subspace_distance(&b.basis, &c.basis),
        _ => f64::INFINITY,
    };
    checks.push("same_coideal", distance, tol);
    Ok(QuotientCertificate {
        coideal_dim: c.dim(),
        kernel_dim: rec.kernel.ncols(),
        subgroup_dim: sub.target.dim,
        invariant_dims: rec.invariant_dims(),
        distance,
        checks,
    })
}

/// All unital *-subalgebras of the adjoint `C[G]` stable under `Delta` and `|>`.
#[derive(Clone, Debug)]
pub struct CoidealEnumeration {
    /// Isotypic components of `C[G]` as a Yetter-Drinfeld module.
    pub components: Vec<CMat>,
    pub commutant_dim: usize,
    /// Every YD submodule is a sum of components; the search is then exhaustive.
    pub multiplicity_free: bool,
    pub candidates: usize,
    pub subalgebras: Vec<CoidealSubalgebra>,
}

fn operator(d: usize, f: impl Fn(usize) -> CVec) -> CMat {
    let mut m = CMat::zeros(d, d);
    for k in 0..d {
        m.set_column(k, &f(k));
    }
    m
}

/// Splits `C[G]` into isotypic YD components via a generic element of the
/// commutant of all action and coaction operators, then tests every sum of
/// components for being a unital *-subalgebra.
pub fn enumerate_yd_subalgebras(g: &Arc<HopfAlgebraData>, seed: u64, tol: f64) -> Result<CoidealEnumeration> {
    const MAX_COMPONENTS: usize = 16;
    let a = adjoint_yd_on_cg(g.clone());
    let d = a.dim();
    let n = g.dim;
    let mut ops = Vec::with_capacity(2 * n);
    for x in 0..n {
        ops.push(operator(d, |k| a.act_vec(x, &linalg::unit_vec(d, k))));
    }
    for row in 0..n {
        ops.push(operator(d, |k| a.coact_vec(&linalg::unit_vec(d, k)).row(row).transpose()));
    }
    let comm = commutant(&ops, d);
    let mut rng = linalg::rng(seed);
    let coeffs = linalg::random_complex_vector(&mut rng, comm.ncols());
    let z = linalg::unvec((&comm * coeffs).as_slice(), d, d);
    let mut eig: Vec<crate::linalg::C64> = Vec::new();
    for lam in linalg::eigenvalues(&z) {
        if eig.iter().all(|e| (e - lam).norm() > 1e-6 * (1.0 + lam.norm())) {
            eig.push(lam);
        }
    }
    let mut components = Vec::with_capacity(eig.len());
    for lam in &eig {
        let shifted = &z - CMat::identity(d, d) * *lam;
        components.push(linalg::null_space_with(&shifted, 1e-8));
    }
    let total: usize = components.iter().map(|c| c.ncols()).sum();
    if total != d {
        return Err(Error::Decomposition {
            achieved: total,
            expected: d,
        });
    }
    let k = components.len();
    if k > MAX_COMPONENTS {
        return Err(Error::Unsupported(format!("{k} isotypic components exceed the search bound")));
    }
    let mut subalgebras = Vec::new();
    let mut candidates = 0;
    for mask in 1usize..(1 << k) {
        let parts: Vec<CMat> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| components[i].clone()).collect();
        let basis = linalg::hstack(&parts, d);
        let basis = linalg::column_space(&basis);
        let (_, unit_defect) = linalg::coords_in(&basis, &a.unit);
        if unit_defect > tol {
            continue;
        }
        candidates += 1;
        if restrict_to_subspace(&a, &basis, tol).is_ok() {
            subalgebras.push(CoidealSubalgebra {
                name: format!("component set {mask:#b}"),
                group: g.clone(),
                basis: linalg::column_space(&basis),
                residual: 0.0,
            });
        }
    }
    subalgebras.sort_by_key(|c| c.dim());
    Ok(CoidealEnumeration {
        components,
        commutant_dim: comm.ncols(),
        multiplicity_free: comm.ncols() == k,
        candidates,
        subalgebras,
    })
}
