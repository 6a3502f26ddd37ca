//! The representation category `Rep G` over a concrete provider.
//!
//! Objects are words in irreducibles, tensor products and conjugates. Every
//! object carries a concrete unitary representation; morphisms are matrices.
//! Tensor products are strict: nested products are flattened and copies of
//! the unit are dropped, so `Tensor[a, Tensor[b, c]]` and `Tensor[a, b, c]`
//! name the same Hilbert space.

pub mod peter_weyl;
pub mod suq2;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::hopf::{self, HopfAlgebraData};
use crate::linalg::{self, kron, max_abs, CMat, CVec, ONE, ZERO};
use crate::report::CheckReport;

pub use peter_weyl::PeterWeyl;
pub use suq2::SuQ2;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Object {
    Irrep(usize),
    Tensor(Vec<Object>),
    Conj(Box<Object>),
}

impl Object {
    pub fn unit() -> Object {
        Object::Irrep(0)
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Object::Irrep(0))
    }

    /// Normalized tensor product of a sequence of objects.
    pub fn tensor_all<'a>(factors: impl IntoIterator<Item = &'a Object>) -> Object {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                Object::Tensor(inner) => flat.extend(inner.iter().cloned()),
                o if o.is_unit() => {}
                o => flat.push(o.clone()),
            }
        }
        match flat.len() {
            0 => Object::unit(),
            1 => flat.pop().unwrap(),
            _ => Object::Tensor(flat),
        }
    }

    pub fn tensor(&self, other: &Object) -> Object {
        Object::tensor_all([self, other])
    }

    pub fn conj(&self) -> Object {
        if self.is_unit() {
            Object::unit()
        } else {
            Object::Conj(Box::new(self.clone()))
        }
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Irrep(s) => write!(f, "U{s}"),
            Object::Tensor(v) => {
                let parts: Vec<String> = v.iter().map(|o| o.to_string()).collect();
                write!(f, "({})", parts.join(" ⊗ "))
            }
            Object::Conj(o) => write!(f, "conj{o}"),
        }
    }
}

/// A unitary representation given by generator matrices.
///
/// Finite backend: `gens[c][(i,j)]` is the `e_c`-coordinate of the matrix
/// coefficient `u_ij`. `SU_q(2)` backend: `gens = [E, F, K]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub dim: usize,
    pub gens: Vec<CMat>,
}

impl Representation {
    /// The same representation in the basis given by the columns of the unitary `u`.
    pub fn in_basis(&self, u: &CMat) -> Representation {
        Representation {
            dim: self.dim,
            gens: self.gens.iter().map(|g| u.adjoint() * g * u).collect(),
        }
    }

    /// Restriction to the range of an isometric intertwiner.
    pub fn compress(&self, iso: &CMat) -> Representation {
        Representation {
            dim: iso.ncols(),
            gens: self.gens.iter().map(|g| iso.adjoint() * g * iso).collect(),
        }
    }

    /// Hopf coordinates of the matrix coefficient `u_ij` (finite backend).
    pub fn coefficient(&self, i: usize, j: usize) -> CVec {
        CVec::from_iterator(self.gens.len(), self.gens.iter().map(|g| g[(i, j)]))
    }
}

/// The concrete compact quantum group behind a category.
#[derive(Clone, Debug)]
pub enum Provider {
    Finite(Arc<HopfAlgebraData>),
    SuQ2(SuQ2),
}

/// Parses `finite:<path>` or `suq2:q=<rational>,L=<half-integer>`.
pub fn parse_provider(spec: &str, base: Option<&Path>) -> Result<Provider> {
    let bad = |msg: &str| Error::Parse {
        path: spec.to_string(),
        msg: msg.to_string(),
    };
    if let Some(path) = spec.strip_prefix("finite:") {
        let p = match base {
            Some(b) if Path::new(path).is_relative() => b.join(path),
            _ => Path::new(path).to_path_buf(),
        };
        let h = hopf::load_hopf(&p)?;
        return Ok(Provider::Finite(Arc::new(h)));
    }
    if let Some(rest) = spec.strip_prefix("suq2:") {
        let mut q = None;
        let mut level = None;
        for kv in rest.split(',') {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match k.trim() {
                "q" => q = Some(parse_rational(v.trim()).ok_or_else(|| bad("q must be rational"))?),
                "L" => {
                    let x = parse_rational(v.trim()).ok_or_else(|| bad("L must be a half-integer"))?;
                    let t = (2.0 * x).round();
                    if (2.0 * x - t).abs() > 1e-12 || t < 0.0 {
                        return Err(bad("L must be a nonnegative half-integer"));
                    }
                    level = Some(t as usize);
                }
                _ => return Err(bad("unknown key")),
            }
        }
        let q = q.ok_or_else(|| bad("missing q"))?;
        let level = level.ok_or_else(|| bad("missing L"))?;
        return Ok(Provider::SuQ2(SuQ2::new(q, level)?));
    }
    Err(bad("provider must start with `finite:` or `suq2:`"))
}

pub fn parse_rational(s: &str) -> Option<f64> {
    if let Some((a, b)) = s.split_once('/') {
        let a: f64 = a.trim().parse().ok()?;
        let b: f64 = b.trim().parse().ok()?;
        if b == 0.0 {
            return None;
        }
        Some(a / b)
    } else {
        s.parse().ok()
    }
}

impl Provider {
    pub fn name(&self) -> String {
        match self {
            Provider::Finite(h) => format!("finite(dim {})", h.dim),
            Provider::SuQ2(g) => format!("suq2(q={}, L={})", g.q, crate::HalfInt(g.level_twice)),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Provider::Finite(_))
    }

    pub fn hopf(&self) -> Option<&Arc<HopfAlgebraData>> {
        match self {
            Provider::Finite(h) => Some(h),
            Provider::SuQ2(_) => None,
        }
    }

    pub fn trivial(&self) -> Representation {
        match self {
            Provider::Finite(h) => Representation {
                dim: 1,
                gens: h.unit.iter().map(|&u| CMat::from_element(1, 1, u)).collect(),
            },
            Provider::SuQ2(g) => g.trivial(),
        }
    }

    pub fn tensor(&self, a: &Representation, b: &Representation) -> Representation {
        match self {
            Provider::Finite(h) => {
                let n = h.dim;
                let mut gens = vec![CMat::zeros(a.dim * b.dim, a.dim * b.dim); n];
                for x in 0..n {
                    for y in 0..n {
                        let mut k: Option<CMat> = None;
                        for c in 0..n {
                            let m = h.mult.get(x, y, c);
                            if m == ZERO {
                                continue;
                            }
                            let kr = k.get_or_insert_with(|| kron(&a.gens[x], &b.gens[y]));
                            gens[c] += &*kr * m;
                        }
                    }
                }
                Representation {
                    dim: a.dim * b.dim,
                    gens,
                }
            }
            Provider::SuQ2(g) => g.tensor(a, b),
        }
    }

    pub fn conj(&self, a: &Representation) -> Representation {
        match self {
            Provider::Finite(h) => {
                let n = h.dim;
                let mut gens = vec![CMat::zeros(a.dim, a.dim); n];
                for (c, g) in gens.iter_mut().enumerate() {
                    for d in 0..n {
                        let s = h.star[(c, d)];
                        if s != ZERO {
                            *g += a.gens[d].map(|z| z.conj()) * s;
                        }
                    }
                }
                Representation { dim: a.dim, gens }
            }
            Provider::SuQ2(g) => g.conj(a),
        }
    }

    /// The modular operator `rho` on a representation; the identity for finite quantum groups.
    pub fn rho(&self, a: &Representation) -> CMat {
        match self {
            Provider::Finite(_) => CMat::identity(a.dim, a.dim),
            Provider::SuQ2(g) => g.rho(a),
        }
    }

    /// Representation axioms: corepresentation and unitarity, or the `U_q` relations.
    pub fn check_rep(&self, a: &Representation, tol: f64) -> CheckReport {
        match self {
            Provider::Finite(h) => check_finite_rep(h, a, tol),
            Provider::SuQ2(g) => g.check(a, tol),
        }
    }
}

fn check_finite_rep(h: &HopfAlgebraData, a: &Representation, tol: f64) -> CheckReport {
    let d = a.dim;
    let mut rep = CheckReport::new();
    if a.gens.len() != h.dim {
        rep.push_detail("shape", 1.0, tol, "generator count differs from Hopf dimension");
        return rep;
    }
    let u = |i: usize, j: usize| a.coefficient(i, j);
    let mut corep: f64 = 0.0;
    let mut unit: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let lhs = h.comul(&u(i, j));
            let mut rhs = CMat::zeros(h.dim, h.dim);
            for k in 0..d {
                rhs += u(i, k) * u(k, j).transpose();
            }
            corep = corep.max(max_abs(&(lhs - rhs)));
            let mut uu = CVec::zeros(h.dim);
            let mut uu2 = CVec::zeros(h.dim);
            for k in 0..d {
                uu += h.mul(&h.star_of(&u(k, i)), &u(k, j));
                uu2 += h.mul(&u(i, k), &h.star_of(&u(j, k)));
            }
            let target = if i == j { h.unit.clone() } else { CVec::zeros(h.dim) };
            unit = unit
                .max(linalg::max_abs_vec(&(uu - &target)))
                .max(linalg::max_abs_vec(&(uu2 - target)));
        }
    }
    rep.push("corepresentation", corep, tol);
    rep.push("unitarity", unit, tol);
    rep
}

/// Orthonormal (Hilbert-Schmidt) basis of `{T : pi_V(X) T = T pi_U(X)}` by a dense solve.
pub fn intertwiner_space(u: &Representation, v: &Representation) -> Vec<CMat> {
    let (du, dv) = (u.dim, v.dim);
    if du == 0 || dv == 0 {
        return vec![];
    }
    let iu = CMat::identity(du, du);
    let iv = CMat::identity(dv, dv);
    let blocks: Vec<CMat> = u
        .gens
        .iter()
        .zip(&v.gens)
        .filter(|(a, b)| max_abs(a) > 0.0 || max_abs(b) > 0.0)
        .map(|(gu, gv)| kron(&iu, gv) - kron(&gu.transpose(), &iv))
        .collect();
    if blocks.is_empty() {
        return linalg::null_space(&CMat::zeros(0, du * dv))
            .column_iter()
            .map(|c| linalg::unvec(c.as_slice(), dv, du))
            .collect();
    }
    let scale = u.gens.iter().chain(&v.gens).map(max_abs).fold(1.0, f64::max);
    let sys = linalg::vstack(&blocks, du * dv);
    let ns = linalg::null_space_floor(&sys, linalg::RANK_CUTOFF, scale);
    ns.column_iter()
        .map(|c| linalg::unvec(c.clone_owned().as_slice(), dv, du))
        .collect()
}

/// One irreducible summand: `iso` is an isometric intertwiner `U_irrep -> U`.
#[derive(Clone, Debug)]
pub struct Part {
    pub irrep: usize,
    pub iso: CMat,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub parts: Vec<Part>,
}

impl Decomposition {
    pub fn multiplicity(&self, s: usize) -> usize {
        self.parts.iter().filter(|p| p.irrep == s).count()
    }

    pub fn irreps(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.irrep).collect()
    }
}

/// Irreducible representatives, ordered with the trivial representation first.
#[derive(Clone, Debug)]
pub struct IrrepTable {
    pub reps: Vec<Representation>,
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub rho: Vec<CMat>,
    pub qdims: Vec<f64>,
    /// Index of the irreducible equivalent to the conjugate.
    pub conj_index: Vec<usize>,
    /// Unitary intertwiner from `U_{conj_index[s]}` to the conjugate of `U_s`.
    pub conj_unitary: Vec<CMat>,
    /// Rounded character coordinates (finite backend) or twice the spin.
    pub fingerprints: Vec<Vec<f64>>,
}

impl IrrepTable {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// `R_U(1)` in `conj(H) (x) H` and `Rbar_U(1)` in `H (x) conj(H)`, with quantum dimension.
#[derive(Clone, Debug)]
pub struct ConjugateData {
    pub r: CVec,
    pub rbar: CVec,
    pub qdim: f64,
    pub residuals: CheckReport,
}

/// Cached engine over a provider.
pub struct RepCategory {
    provider: Provider,
    table: IrrepTable,
    seed: u64,
    reps: RwLock<HashMap<Object, Arc<Representation>>>,
    decomps: RwLock<HashMap<Object, Arc<Decomposition>>>,
    homs: RwLock<HashMap<(Object, Object), Arc<CMat>>>,
}

impl fmt::Debug for RepCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RepCategory({})", self.provider.name())
    }
}

const DECOMP_TOL: f64 = 1e-8;

impl RepCategory {
    pub fn new(provider: Provider, seed: u64) -> Result<Arc<Self>> {
        let table = match &provider {
            Provider::Finite(h) => finite_table(h, seed)?,
            Provider::SuQ2(g) => suq2_table(g)?,
        };
        Ok(Arc::new(RepCategory {
            provider,
            table,
            seed,
            reps: RwLock::new(HashMap::new()),
            decomps: RwLock::new(HashMap::new()),
            homs: RwLock::new(HashMap::new()),
        }))
    }

    pub fn provider(&self) -> &Provider {
        &self.provider
    }

    pub fn table(&self) -> &IrrepTable {
        &self.table
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn num_irreps(&self) -> usize {
        self.table.len()
    }

    pub fn dim(&self, obj: &Object) -> Result<usize> {
        match obj {
            Object::Irrep(s) => self
                .table
                .dims
                .get(*s)
                .copied()
                .ok_or_else(|| self.missing_irrep(*s)),
            Object::Tensor(v) => v.iter().try_fold(1, |acc, o| Ok(acc * self.dim(o)?)),
            Object::Conj(o) => self.dim(o),
        }
    }

    fn missing_irrep(&self, s: usize) -> Error {
        match &self.provider {
            Provider::SuQ2(g) => Error::truncation(s, g.level_twice),
            Provider::Finite(_) => Error::shape("irrep index", format!("< {}", self.table.len()), s),
        }
    }

    pub fn rep(&self, obj: &Object) -> Result<Arc<Representation>> {
        if let Some(r) = self.reps.read().unwrap().get(obj) {
            return Ok(r.clone());
        }
        let rep = match obj {
            Object::Irrep(s) => self
                .table
                .reps
                .get(*s)
                .cloned()
                .ok_or_else(|| self.missing_irrep(*s))?,
            Object::Tensor(v) => {
                let mut acc = (*self.rep(&v[0])?).clone();
                for o in &v[1..] {
                    acc = self.provider.tensor(&acc, &*self.rep(o)?);
                }
                acc
            }
            Object::Conj(o) => self.provider.conj(&*self.rep(o)?),
        };
        let rep = Arc::new(rep);
        self.reps.write().unwrap().insert(obj.clone(), rep.clone());
        Ok(rep)
    }

    pub fn rho(&self, obj: &Object) -> Result<CMat> {
        Ok(self.provider.rho(&*self.rep(obj)?))
    }

    pub fn trivial_rep(&self) -> Representation {
        self.provider.trivial()
    }

    /// Cached decomposition into irreducible isometries.
    pub fn decompose(&self, obj: &Object) -> Result<Arc<Decomposition>> {
        if let Some(d) = self.decomps.read().unwrap().get(obj) {
            return Ok(d.clone());
        }
        let d = Arc::new(self.decompose_uncached(obj, self.seed)?);
        self.decomps.write().unwrap().insert(obj.clone(), d.clone());
        Ok(d)
    }

    /// Decomposition of `U_s (x) U_t`.
    pub fn fusion(&self, s: usize, t: usize) -> Result<Arc<Decomposition>> {
        self.decompose(&Object::tensor_all([&Object::Irrep(s), &Object::Irrep(t)]))
    }

    /// A differently chosen decomposition: each isotypic family is mixed by a
    /// seeded random unitary.
    pub fn decompose_with_seed(&self, obj: &Object, seed: u64) -> Result<Decomposition> {
        let base = self.decompose(obj)?;
        let mut g = linalg::rng(seed);
        let mut parts = base.parts.clone();
        for s in 0..self.table.len() {
            let idx: Vec<usize> = (0..parts.len()).filter(|&k| parts[k].irrep == s).collect();
            if idx.is_empty() {
                continue;
            }
            let u = linalg::random_unitary(&mut g, idx.len());
            let old: Vec<CMat> = idx.iter().map(|&k| parts[k].iso.clone()).collect();
            for (a, &k) in idx.iter().enumerate() {
                let mut w = CMat::zeros(old[0].nrows(), old[0].ncols());
                for (b, o) in old.iter().enumerate() {
                    w += o * u[(b, a)];
                }
                parts[k].iso = w;
            }
        }
        Ok(Decomposition { parts })
    }

    fn decompose_uncached(&self, obj: &Object, seed: u64) -> Result<Decomposition> {
        if let Object::Irrep(s) = obj {
            let d = self.dim(obj)?;
            return Ok(Decomposition {
                parts: vec![Part {
                    irrep: *s,
                    iso: CMat::identity(d, d),
                }],
            });
        }
        let rep = self.rep(obj)?;
        let parts = match &self.provider {
            Provider::SuQ2(g) => g
                .decompose(&rep)?
                .into_iter()
                .map(|(t, iso)| Part { irrep: t, iso })
                .collect(),
            Provider::Finite(_) => {
                let pieces = commutant_pieces(&rep, seed)?;
                let mut parts = Vec::new();
                for v in pieces {
                    let piece = rep.compress(&v);
                    let (s, j) = classify(&self.table, &piece)?;
                    parts.push(Part { irrep: s, iso: &v * j });
                }
                parts.sort_by_key(|p| p.irrep);
                parts
            }
        };
        verify_parts(&rep, &self.table, &parts)?;
        Ok(Decomposition { parts })
    }

    /// Orthonormal basis of `Hom(U, V)` as vectorized `dim V x dim U` matrices (columns).
    pub fn hom(&self, src: &Object, dst: &Object) -> Result<Arc<CMat>> {
        let key = (src.clone(), dst.clone());
        if let Some(h) = self.homs.read().unwrap().get(&key) {
            return Ok(h.clone());
        }
        let (du, dv) = (self.dim(src)?, self.dim(dst)?);
        let basis = if du * dv <= 256 {
            let mats = intertwiner_space(&*self.rep(src)?, &*self.rep(dst)?);
            let cols: Vec<CMat> = mats.iter().map(|m| CMat::from_column_slice(du * dv, 1, m.as_slice())).collect();
            linalg::hstack(&cols, du * dv)
        } else {
            self.hom_via_decomposition(src, dst)?
        };
        let basis = Arc::new(basis);
        self.homs.write().unwrap().insert(key, basis.clone());
        Ok(basis)
    }

    /// `Hom(U, V)` assembled from irreducible isometries.
    pub fn hom_via_decomposition(&self, src: &Object, dst: &Object) -> Result<CMat> {
        let (du, dv) = (self.dim(src)?, self.dim(dst)?);
        let a = self.decompose(src)?;
        let b = self.decompose(dst)?;
        let mut cols = Vec::new();
        for pa in &a.parts {
            for pb in &b.parts {
                if pa.irrep == pb.irrep {
                    let m = &pb.iso * pa.iso.adjoint() / linalg::r((self.table.dims[pa.irrep] as f64).sqrt());
                    cols.push(CMat::from_column_slice(du * dv, 1, m.as_slice()));
                }
            }
        }
        Ok(linalg::hstack(&cols, du * dv))
    }

    /// Intertwiner matrices of `Hom(U, V)`.
    pub fn hom_matrices(&self, src: &Object, dst: &Object) -> Result<Vec<CMat>> {
        let (du, dv) = (self.dim(src)?, self.dim(dst)?);
        let b = self.hom(src, dst)?;
        Ok(b.column_iter().map(|c| linalg::unvec(c.clone_owned().as_slice(), dv, du)).collect())
    }

    /// Largest intertwining defect `||pi_V(X) T - T pi_U(X)||`.
    pub fn intertwining_residual(&self, src: &Object, dst: &Object, t: &CMat) -> Result<f64> {
        let (u, v) = (self.rep(src)?, self.rep(dst)?);
        Ok(u.gens
            .iter()
            .zip(&v.gens)
            .map(|(gu, gv)| max_abs(&(gv * t - t * gu)))
            .fold(0.0, f64::max))
    }

    /// `R_U(1) = sum_i conj(xi_i) (x) rho^-1/2 xi_i` and `Rbar_U(1) = sum_i rho^1/2 xi_i (x) conj(xi_i)`.
    pub fn conjugate_data(&self, obj: &Object, tol: f64) -> Result<ConjugateData> {
        let d = self.dim(obj)?;
        let rho = self.rho(obj)?;
        let p = linalg::hermitian_inv_sqrt(&rho);
        let q = linalg::hermitian_sqrt(&rho);
        let mut r = CVec::zeros(d * d);
        let mut rbar = CVec::zeros(d * d);
        for i in 0..d {
            for k in 0..d {
                r[i * d + k] = p[(k, i)];
                rbar[k * d + i] = q[(k, i)];
            }
        }
        let conj = obj.conj();
        let rmat = CMat::from_column_slice(d * d, 1, r.as_slice());
        let rbmat = CMat::from_column_slice(d * d, 1, rbar.as_slice());
        let mut res = CheckReport::new();
        let unit = Object::unit();
        res.push(
            "r_intertwines",
            self.intertwining_residual(&unit, &Object::tensor_all([&conj, obj]), &rmat)?,
            tol,
        );
        res.push(
            "rbar_intertwines",
            self.intertwining_residual(&unit, &Object::tensor_all([obj, &conj]), &rbmat)?,
            tol,
        );
        let id = CMat::identity(d, d);
        let e1 = kron(&rbmat.adjoint(), &id) * kron(&id, &rmat);
        let e2 = kron(&rmat.adjoint(), &id) * kron(&id, &rbmat);
        res.push("conjugate_equation_u", max_abs(&(e1 - &id)), tol);
        res.push("conjugate_equation_conj", max_abs(&(e2 - &id)), tol);
        let qdim = rho.trace().re;
        let rho_inv_tr = rho.clone().try_inverse().map(|m| m.trace().re).unwrap_or(f64::NAN);
        res.push("balanced", (qdim - rho_inv_tr).abs(), tol.max(1e-12) * qdim.max(1.0));
        res.push("r_norm", (r.norm_squared() - rho_inv_tr).abs(), tol.max(1e-12) * qdim.max(1.0));
        Ok(ConjugateData {
            r,
            rbar,
            qdim,
            residuals: res,
        })
    }

    /// Conjugate data, refusing objects whose modular operator fails the conjugate equations.
    pub fn conjugate_data_checked(&self, obj: &Object, tol: f64) -> Result<ConjugateData> {
        let cd = self.conjugate_data(obj, tol)?;
        if !cd.residuals.passed() {
            let names: Vec<String> = cd.residuals.failures().iter().map(|c| c.name.clone()).collect();
            return Err(Error::Convention(format!("{} fails {}", obj, names.join(", "))));
        }
        Ok(cd)
    }

    pub fn rbar(&self, obj: &Object) -> Result<CMat> {
        let d = self.dim(obj)?;
        let cd = self.conjugate_data(obj, 1.0)?;
        Ok(CMat::from_column_slice(d * d, 1, cd.rbar.as_slice()))
    }

    pub fn r(&self, obj: &Object) -> Result<CMat> {
        let d = self.dim(obj)?;
        let cd = self.conjugate_data(obj, 1.0)?;
        Ok(CMat::from_column_slice(d * d, 1, cd.r.as_slice()))
    }

    /// Hopf coordinates of `u_ij` for an object (finite backend only).
    pub fn coefficient(&self, obj: &Object, i: usize, j: usize) -> Result<CVec> {
        if !self.provider.is_finite() {
            return Err(Error::Unsupported("Hopf coordinates need a finite provider".into()));
        }
        Ok(self.rep(obj)?.coefficient(i, j))
    }

    /// Multiplicities `N_{st}^r` of `U_s (x) U_t`.
    pub fn fusion_multiplicities(&self, s: usize, t: usize) -> Result<Vec<usize>> {
        let d = self.fusion(s, t)?;
        Ok((0..self.table.len()).map(|r| d.multiplicity(r)).collect())
    }
}

fn verify_parts(rep: &Representation, table: &IrrepTable, parts: &[Part]) -> Result<()> {
    let mut total = 0;
    let mut proj = CMat::zeros(rep.dim, rep.dim);
    for p in parts {
        let std = &table.reps[p.irrep];
        let d = std.dim;
        let iso_err = max_abs(&(p.iso.adjoint() * &p.iso - CMat::identity(d, d)));
        let int_err = rep
            .gens
            .iter()
            .zip(&std.gens)
            .map(|(g, s)| max_abs(&(g * &p.iso - &p.iso * s)))
            .fold(0.0, f64::max);
        let scale = rep.gens.iter().map(max_abs).fold(1.0, f64::max);
        if iso_err > DECOMP_TOL || int_err > DECOMP_TOL * scale {
            return Err(Error::NonSemisimple(format!(
                "summand of type {} has isometry defect {iso_err:.2e} and intertwining defect {int_err:.2e}",
                p.irrep
            )));
        }
        total += d;
        proj += &p.iso * p.iso.adjoint();
    }
    let completeness = max_abs(&(&proj - CMat::identity(rep.dim, rep.dim)));
    if total != rep.dim || completeness > DECOMP_TOL {
        return Err(Error::Decomposition {
            achieved: linalg::rank_abs(&proj, 0.5),
            expected: rep.dim,
        });
    }
    Ok(())
}

/// Splits a representation into irreducible subspaces using the eigenspaces of
/// a random self-adjoint element of its commutant.
fn commutant_pieces(rep: &Representation, seed: u64) -> Result<Vec<CMat>> {
    let d = rep.dim;
    let end = intertwiner_space(rep, rep);
    if end.is_empty() {
        return Err(Error::NonSemisimple("empty commutant".into()));
    }
    for attempt in 0..8u64 {
        let mut g = linalg::rng(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)));
        let mut x = CMat::zeros(d, d);
        for b in &end {
            x += b * linalg::c(linalg::gaussian(&mut g), linalg::gaussian(&mut g));
        }
        let h = (&x + x.adjoint()) * linalg::r(0.5);
        let eig = nalgebra::SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let scale = eig.eigenvalues.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &k in &order {
            match clusters.last_mut() {
                Some(cl) if (eig.eigenvalues[k] - eig.eigenvalues[*cl.last().unwrap()]).abs() <= 1e-7 * scale => {
                    cl.push(k)
                }
                _ => clusters.push(vec![k]),
            }
        }
        let pieces: Vec<CMat> = clusters
            .iter()
            .map(|cl| {
                let mut v = CMat::zeros(d, cl.len());
                for (c, &k) in cl.iter().enumerate() {
                    v.set_column(c, &eig.eigenvectors.column(k));
                }
                v
            })
            .collect();
        let irreducible = pieces.iter().all(|v| {
            let m = v.ncols();
            end.iter().all(|b| {
                let cb = v.adjoint() * b * v;
                let s = cb.trace() / linalg::r(m as f64);
                max_abs(&(cb - CMat::identity(m, m) * s)) <= 1e-8 * (1.0 + max_abs(b))
            })
        });
        if irreducible {
            return Ok(pieces);
        }
    }
    Err(Error::NonSemisimple("random commutant elements never separated the summands".into()))
}

/// Identifies an irreducible piece with a table entry; returns the unitary `J: H_s -> piece`.
fn classify(table: &IrrepTable, piece: &Representation) -> Result<(usize, CMat)> {
    for (s, std) in table.reps.iter().enumerate() {
        if std.dim != piece.dim {
            continue;
        }
        let homs = intertwiner_space(std, piece);
        if homs.len() == 1 {
            let t = &homs[0];
            let norm = (t.adjoint() * t)[(0, 0)].re.sqrt();
            return Ok((s, t / linalg::r(norm)));
        }
    }
    Err(Error::NonSemisimple(format!(
        "irreducible summand of dimension {} matches no table entry",
        piece.dim
    )))
}

fn finite_table(h: &Arc<HopfAlgebraData>, seed: u64) -> Result<IrrepTable> {
    let n = h.dim;
    let hv = hopf::haar(h, 1e-9)?;
    // Gram matrix of <x, y> = h(x* y), then an orthonormal basis F = M^(-1/2)
    let mut gram = CMat::zeros(n, n);
    for a in 0..n {
        let sa = h.star_of(&h.basis(a));
        for b in 0..n {
            gram[(a, b)] = hv.dot(&h.mul(&sa, &h.basis(b)));
        }
    }
    let f = linalg::hermitian_inv_sqrt(&gram);
    let f_inv = f
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotQuantumGroup("degenerate Haar inner product".into()))?;
    let gens: Vec<CMat> = (0..n)
        .map(|c| {
            let dc = CMat::from_fn(n, n, |b, a| h.comult.get(a, b, c));
            &f_inv * dc * &f
        })
        .collect();
    let regular = Representation { dim: n, gens };
    let reg_check = check_finite_rep(h, &regular, 1e-8);
    if !reg_check.passed() {
        return Err(Error::NotQuantumGroup(format!("regular corepresentation: {:?}", reg_check.failures())));
    }
    let pieces = commutant_pieces(&regular, seed)?;
    let mut classes: Vec<Representation> = Vec::new();
    for v in &pieces {
        let piece = regular.compress(v);
        let known = classes
            .iter()
            .any(|c| c.dim == piece.dim && intertwiner_space(c, &piece).len() == 1);
        if !known {
            classes.push(piece);
        }
    }
    let total: usize = classes.iter().map(|c| c.dim * c.dim).sum();
    if total != n {
        return Err(Error::NonSemisimple(format!(
            "irreducibles account for {total} of {n} dimensions"
        )));
    }
    let fp = |r: &Representation| -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * n);
        for g in &r.gens {
            let t = g.trace();
            v.push((t.re * 1e8).round() / 1e8);
            v.push((t.im * 1e8).round() / 1e8);
        }
        v
    };
    let is_trivial = |r: &Representation| {
        r.dim == 1 && r.gens.iter().zip(h.unit.iter()).all(|(g, u)| (g[(0, 0)] - u).norm() < 1e-8)
    };
    let mut keyed: Vec<(bool, usize, Vec<f64>, Representation)> = classes
        .into_iter()
        .map(|r| (!is_trivial(&r), r.dim, fp(&r), r))
        .collect();
    keyed.sort_by(|a, b| {
        (a.0, a.1)
            .cmp(&(b.0, b.1))
            .then_with(|| a.2.partial_cmp(&b.2).unwrap_or(std::cmp::Ordering::Equal))
    });
    if keyed.first().map(|k| k.0).unwrap_or(true) {
        return Err(Error::NotQuantumGroup("no trivial representation found".into()));
    }
    let mut reps: Vec<Representation> = keyed.iter().map(|k| k.3.clone()).collect();
    // the trivial representative is exactly the unit coefficient
    reps[0] = Representation {
        dim: 1,
        gens: h.unit.iter().map(|&u| CMat::from_element(1, 1, u)).collect(),
    };
    let fingerprints = keyed.iter().map(|k| k.2.clone()).collect();
    let dims: Vec<usize> = reps.iter().map(|r| r.dim).collect();
    let labels = (0..reps.len()).map(|s| format!("U{s}")).collect();
    let rho = dims.iter().map(|&d| CMat::identity(d, d)).collect();
    let qdims = dims.iter().map(|&d| d as f64).collect();
    let provider = Provider::Finite(h.clone());
    let (conj_index, conj_unitary) = conjugation(&provider, &reps)?;
    Ok(IrrepTable {
        reps,
        labels,
        dims,
        rho,
        qdims,
        conj_index,
        conj_unitary,
        fingerprints,
    })
}

fn conjugation(provider: &Provider, reps: &[Representation]) -> Result<(Vec<usize>, Vec<CMat>)> {
    let mut idx = Vec::new();
    let mut unis = Vec::new();
    for r in reps {
        let c = provider.conj(r);
        let mut found = None;
        for (t, cand) in reps.iter().enumerate() {
            if cand.dim != r.dim {
                continue;
            }
            let homs = intertwiner_space(cand, &c);
            if homs.len() == 1 {
                let j = &homs[0];
                let norm = (j.adjoint() * j)[(0, 0)].re.sqrt();
                found = Some((t, j / linalg::r(norm)));
                break;
            }
        }
        let (t, j) = found.ok_or_else(|| Error::NonSemisimple("conjugate of an irreducible is not in the table".into()))?;
        idx.push(t);
        unis.push(j);
    }
    Ok((idx, unis))
}

fn suq2_table(g: &SuQ2) -> Result<IrrepTable> {
    let reps: Vec<Representation> = (0..=g.level_twice).map(|t| g.spin(t)).collect();
    let dims = reps.iter().map(|r| r.dim).collect();
    let rho: Vec<CMat> = reps.iter().map(|r| g.rho(r)).collect();
    let qdims = rho.iter().map(|m| m.trace().re).collect();
    let labels = (0..=g.level_twice).map(|t| crate::HalfInt(t).to_string()).collect();
    let fingerprints = (0..=g.level_twice).map(|t| vec![t as f64]).collect();
    let provider = Provider::SuQ2(*g);
    let (conj_index, conj_unitary) = conjugation(&provider, &reps)?;
    Ok(IrrepTable {
        reps,
        labels,
        dims,
        rho,
        qdims,
        conj_index,
        conj_unitary,
        fingerprints,
    })
}

/// Sum of `iso_k iso_k^*` over the parts of a decomposition.
pub fn decomposition_projection(d: &Decomposition, dim: usize) -> CMat {
    let mut p = CMat::zeros(dim, dim);
    for part in &d.parts {
        p += &part.iso * part.iso.adjoint();
    }
    p
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn scalar(z: crate::linalg::C64) -> CMat {
    CMat::from_element(1, 1, z)
}

pub fn one() -> CMat {
    scalar(ONE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{function_algebra, kac_paljutkin, FiniteGroup};

    fn finite(h: HopfAlgebraData) -> Arc<RepCategory> {
        RepCategory::new(Provider::Finite(Arc::new(h)), 1).unwrap()
    }

    #[test]
    fn s3_irreps_are_one_one_two() {
        let cat = finite(function_algebra(&FiniteGroup::symmetric3()));
        assert_eq!(cat.table().dims, vec![1, 1, 2]);
        for r in &cat.table().reps {
            assert!(cat.provider().check_rep(r, 1e-10).passed());
        }
    }

    #[test]
    fn kac_paljutkin_irreps() {
        let cat = finite(kac_paljutkin());
        assert_eq!(cat.table().dims, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn two_by_two_in_s3() {
        let cat = finite(function_algebra(&FiniteGroup::symmetric3()));
        let m = cat.fusion_multiplicities(2, 2).unwrap();
        assert_eq!(m, vec![1, 1, 1]);
    }

    #[test]
    fn tensor_normalization_is_strict() {
        let a = Object::Irrep(1);
        let b = Object::Irrep(2);
        let ab = a.tensor(&b);
        assert_eq!(ab.tensor(&a), a.tensor(&b.tensor(&a)));
        assert_eq!(Object::unit().tensor(&a), a);
        assert_eq!(Object::unit().conj(), Object::unit());
    }

    #[test]
    fn conjugate_data_finite_and_quantum() {
        let cat = finite(kac_paljutkin());
        for s in 0..cat.num_irreps() {
            let cd = cat.conjugate_data(&Object::Irrep(s), 1e-9).unwrap();
            assert!(cd.residuals.passed(), "{s}: {:?}", cd.residuals);
            assert!((cd.qdim - cat.table().dims[s] as f64).abs() < 1e-12);
        }
        let q = RepCategory::new(Provider::SuQ2(SuQ2::new(0.5, 4).unwrap()), 1).unwrap();
        for s in 0..3 {
            let cd = q.conjugate_data(&Object::Irrep(s), 1e-9).unwrap();
            assert!(cd.residuals.passed(), "{s}: {:?}", cd.residuals);
        }
        let cd = q.conjugate_data(&Object::Irrep(1), 1e-9).unwrap();
        assert!((cd.qdim - 2.5).abs() < 1e-12);
    }

    #[test]
    fn provider_strings_parse() {
        let p = parse_provider("suq2:q=1/2,L=3/2", None).unwrap();
        match p {
            Provider::SuQ2(g) => {
                assert_eq!(g.level_twice, 3);
                assert!((g.q - 0.5).abs() < 1e-15);
            }
            _ => panic!(),
        }
        assert!(parse_provider("suq2:q=1/2,L=1/3", None).is_err());
        assert!(parse_provider("other", None).is_err());
    }

    #[test]
    fn dense_and_decomposition_homs_agree() {
        let cat = finite(function_algebra(&FiniteGroup::symmetric3()));
        let u = Object::tensor_all([&Object::Irrep(2), &Object::Irrep(2)]);
        let v = Object::tensor_all([&Object::Irrep(2), &Object::Irrep(1), &Object::Irrep(2)]);
        let dense = cat.hom(&u, &v).unwrap();
        let via = cat.hom_via_decomposition(&u, &v).unwrap();
        assert_eq!(dense.ncols(), 3);
        assert!(linalg::subspace_distance(&dense, &via) < 1e-8);
    }
}
