//! Strict categories whose objects are those of `Rep G`, with vectorized morphisms.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, ZERO};
use crate::repcat::{intertwiner_space, Object, RepCategory, Representation};

/// A category containing `Rep G` (as the identity on objects), queried through
/// morphism vectors of a provider-specific layout.
pub trait CategoryProvider: Send + Sync {
    fn category(&self) -> &Arc<RepCategory>;
    fn name(&self) -> String;
    /// Length of the vector space holding morphisms `u -> v`.
    fn mor_len(&self, u: &Object, v: &Object) -> Result<usize>;
    /// Orthonormal columns spanning the morphisms `u -> v`.
    fn hom_basis(&self, u: &Object, v: &Object) -> Result<Arc<CMat>>;
    /// Image of a `Rep G` morphism given as a `dim v x dim u` matrix.
    fn embed(&self, u: &Object, v: &Object, t: &CMat) -> Result<CVec>;
    /// `s t` for `t: u -> v`, `s: v -> w`.
    fn compose(&self, u: &Object, v: &Object, w: &Object, s: &CVec, t: &CVec) -> Result<CVec>;
    fn adjoint(&self, u: &Object, v: &Object, t: &CVec) -> Result<CVec>;
    /// `t (x) iota_z: u (x) z -> v (x) z`.
    fn tensor_right(&self, u: &Object, v: &Object, t: &CVec, z: &Object) -> Result<CVec>;
    /// `iota_w (x) t: w (x) u -> w (x) v`.
    fn tensor_left(&self, w: &Object, u: &Object, v: &Object, t: &CVec) -> Result<CVec>;

    /// Distance of `t` from the morphism space.
    fn membership_residual(&self, u: &Object, v: &Object, t: &CVec) -> Result<f64> {
        let b = self.hom_basis(u, v)?;
        let proj = &*b * (b.adjoint() * t);
        Ok(linalg::max_abs_vec(&(t - proj)))
    }

    /// `s (x) t = (s (x) iota_z)(iota_u (x) t)` for `s: u -> v`, `t: w -> z`.
    fn tensor(&self, u: &Object, v: &Object, s: &CVec, w: &Object, z: &Object, t: &CVec) -> Result<CVec> {
        let uw = u.tensor(w);
        let uz = u.tensor(z);
        let vz = v.tensor(z);
        let left = self.tensor_left(u, w, z, t)?;
        let right = self.tensor_right(u, v, s, z)?;
        self.compose(&uw, &uz, &vz, &right, &left)
    }

    /// `||(s (x) iota)(iota (x) t) - (iota (x) t)(s (x) iota)||`.
    fn interchange_residual(
        &self,
        u: &Object,
        v: &Object,
        s: &CVec,
        w: &Object,
        z: &Object,
        t: &CVec,
    ) -> Result<f64> {
        let a = self.tensor(u, v, s, w, z, t)?;
        let (uw, vw, vz) = (u.tensor(w), v.tensor(w), v.tensor(z));
        let sw = self.tensor_right(u, v, s, w)?;
        let vt = self.tensor_left(v, w, z, t)?;
        let b = self.compose(&uw, &vw, &vz, &vt, &sw)?;
        Ok(linalg::max_abs_vec(&(a - b)))
    }
}

type HomCache = RwLock<HashMap<(Object, Object), Arc<CMat>>>;

fn cached(cache: &HomCache, u: &Object, v: &Object, f: impl FnOnce() -> Result<CMat>) -> Result<Arc<CMat>> {
    let key = (u.clone(), v.clone());
    if let Some(b) = cache.read().expect("hom cache").get(&key) {
        return Ok(b.clone());
    }
    let b = Arc::new(f()?);
    cache.write().expect("hom cache").insert(key, b.clone());
    Ok(b)
}

/// Which morphisms between the Hilbert spaces `H_U` count.
#[derive(Clone, Debug)]
pub enum MatrixKind {
    /// All linear maps: the fiber functor.
    Fiber,
    /// Intertwiners of the restriction along `p: C[G] -> C[H]` (rows index `C[H]`).
    Subgroup(CMat),
    /// Intertwiners of `G` itself.
    Full,
}

/// Categories whose morphisms are plain matrices: `Rep G`, `Rep H`, `Hilb_f`.
pub struct MatrixCategory {
    cat: Arc<RepCategory>,
    kind: MatrixKind,
    homs: HomCache,
}

impl MatrixCategory {
    pub fn new(cat: Arc<RepCategory>, kind: MatrixKind) -> Result<Self> {
        if let MatrixKind::Subgroup(p) = &kind {
            let h = cat
                .provider()
                .hopf()
                .ok_or_else(|| Error::Unsupported("quantum subgroups need a finite provider".into()))?;
            if p.ncols() != h.dim {
                return Err(Error::mismatch("surjection columns", p.ncols(), h.dim));
            }
        }
        Ok(MatrixCategory {
            cat,
            kind,
            homs: RwLock::new(HashMap::new()),
        })
    }

    pub fn fiber(cat: Arc<RepCategory>) -> Self {
        Self::new(cat, MatrixKind::Fiber).expect("fiber provider")
    }

    pub fn full(cat: Arc<RepCategory>) -> Self {
        Self::new(cat, MatrixKind::Full).expect("full provider")
    }

    pub fn kind(&self) -> &MatrixKind {
        &self.kind
    }

    fn dims(&self, u: &Object, v: &Object) -> Result<(usize, usize)> {
        Ok((self.cat.dim(u)?, self.cat.dim(v)?))
    }

    /// Restriction of a representation along the surjection.
    pub fn restrict(p: &CMat, rep: &Representation) -> Representation {
        let gens = (0..p.nrows())
            .map(|c2| {
                let mut m = CMat::zeros(rep.dim, rep.dim);
                for (c, g) in rep.gens.iter().enumerate() {
                    let w = p[(c2, c)];
                    if w != ZERO {
                        m += g * w;
                    }
                }
                m
            })
            .collect();
        Representation { dim: rep.dim, gens }
    }
}

fn columns_of(mats: &[CMat], len: usize) -> CMat {
    let cols: Vec<CMat> = mats
        .iter()
        .map(|m| CMat::from_column_slice(len, 1, m.as_slice()))
        .collect();
    linalg::column_space(&linalg::hstack(&cols, len))
}

impl CategoryProvider for MatrixCategory {
    fn category(&self) -> &Arc<RepCategory> {
        &self.cat
    }

    fn name(&self) -> String {
        match self.kind {
            MatrixKind::Fiber => "fiber".into(),
            MatrixKind::Subgroup(_) => "subgroup".into(),
            MatrixKind::Full => "rep".into(),
        }
    }

    fn mor_len(&self, u: &Object, v: &Object) -> Result<usize> {
        let (du, dv) = self.dims(u, v)?;
        Ok(du * dv)
    }

    fn hom_basis(&self, u: &Object, v: &Object) -> Result<Arc<CMat>> {
        cached(&self.homs, u, v, || {
            let (du, dv) = self.dims(u, v)?;
            match &self.kind {
                MatrixKind::Fiber => Ok(CMat::identity(du * dv, du * dv)),
                MatrixKind::Full => Ok((*self.cat.hom(u, v)?).clone()),
                MatrixKind::Subgroup(p) => {
                    let ru = Self::restrict(p, &*self.cat.rep(u)?);
                    let rv = Self::restrict(p, &*self.cat.rep(v)?);
                    Ok(columns_of(&intertwiner_space(&ru, &rv), du * dv))
                }
            }
        })
    }

    fn embed(&self, u: &Object, v: &Object, t: &CMat) -> Result<CVec> {
        let (du, dv) = self.dims(u, v)?;
        if t.shape() != (dv, du) {
            return Err(Error::shape("embedded morphism", format!("{dv}x{du}"), format!("{:?}", t.shape())));
        }
        Ok(linalg::vec_of(t))
    }

    fn compose(&self, u: &Object, v: &Object, w: &Object, s: &CVec, t: &CVec) -> Result<CVec> {
        let (du, dv, dw) = (self.cat.dim(u)?, self.cat.dim(v)?, self.cat.dim(w)?);
        let sm = linalg::unvec(s.as_slice(), dw, dv);
        let tm = linalg::unvec(t.as_slice(), dv, du);
        Ok(linalg::vec_of(&(sm * tm)))
    }

    fn adjoint(&self, u: &Object, v: &Object, t: &CVec) -> Result<CVec> {
        let (du, dv) = self.dims(u, v)?;
        Ok(linalg::vec_of(&linalg::unvec(t.as_slice(), dv, du).adjoint()))
    }

    fn tensor_right(&self, u: &Object, v: &Object, t: &CVec, z: &Object) -> Result<CVec> {
        let (du, dv) = self.dims(u, v)?;
        let dz = self.cat.dim(z)?;
        let tm = linalg::unvec(t.as_slice(), dv, du);
        Ok(linalg::vec_of(&linalg::kron(&tm, &CMat::identity(dz, dz))))
    }

    fn tensor_left(&self, w: &Object, u: &Object, v: &Object, t: &CVec) -> Result<CVec> {
        let (du, dv) = self.dims(u, v)?;
        let dw = self.cat.dim(w)?;
        let tm = linalg::unvec(t.as_slice(), dv, du);
        Ok(linalg::vec_of(&linalg::kron(&CMat::identity(dw, dw), &tm)))
    }
}
