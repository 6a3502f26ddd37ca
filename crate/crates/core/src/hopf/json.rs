//! JSON fixtures: complex numbers are `[re, im]`, tensors are row-major nested arrays.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{HopfAlgebraData, SubgroupSurjection, Tensor3};
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec, C64};

type Cx = [f64; 2];

#[derive(Serialize, Deserialize)]
struct HopfJson {
    dim: usize,
    basis_labels: Vec<String>,
    mult: Vec<Vec<Vec<Cx>>>,
    unit: Vec<Cx>,
    comult: Vec<Vec<Vec<Cx>>>,
    counit: Vec<Cx>,
    antipode: Vec<Vec<Cx>>,
    star: Vec<Vec<Cx>>,
}

#[derive(Serialize, Deserialize)]
struct SubgroupJson {
    name: String,
    source: String,
    target: String,
    map: Vec<Vec<Cx>>,
}

fn cx(z: &Cx) -> C64 {
    c(z[0], z[1])
}

fn to_cx(z: C64) -> Cx {
    [z.re, z.im]
}

fn vector(what: &str, v: &[Cx], n: usize) -> Result<CVec> {
    if v.len() != n {
        return Err(Error::shape(what, n, v.len()));
    }
    Ok(CVec::from_iterator(n, v.iter().map(cx)))
}

fn matrix(what: &str, m: &[Vec<Cx>], rows: usize, cols: usize) -> Result<CMat> {
    if m.len() != rows {
        return Err(Error::shape(what, format!("{rows} rows"), format!("{} rows", m.len())));
    }
    let mut out = CMat::zeros(rows, cols);
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::shape(
                format!("{what}[{i}]"),
                format!("{cols} entries"),
                format!("{} entries", row.len()),
            ));
        }
        for (j, z) in row.iter().enumerate() {
            out[(i, j)] = cx(z);
        }
    }
    Ok(out)
}

fn tensor(what: &str, t: &[Vec<Vec<Cx>>], n: usize) -> Result<Tensor3> {
    if t.len() != n {
        return Err(Error::shape(what, format!("[{n},{n},{n}]"), format!("first axis {}", t.len())));
    }
    let mut out = Tensor3::zeros(n, n, n);
    for (i, slab) in t.iter().enumerate() {
        let m = matrix(&format!("{what}[{i}]"), slab, n, n)?;
        for j in 0..n {
            for k in 0..n {
                out.set(i, j, k, m[(j, k)]);
            }
        }
    }
    Ok(out)
}

fn check_finite(what: &str, vals: impl Iterator<Item = f64>) -> Result<()> {
    for v in vals {
        if !v.is_finite() {
            return Err(Error::NonFinite(what.to_string()));
        }
    }
    Ok(())
}

pub fn hopf_from_json(text: &str, origin: &str) -> Result<HopfAlgebraData> {
    let raw: HopfJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_string(),
        msg: e.to_string(),
    })?;
    let n = raw.dim;
    if raw.basis_labels.len() != n {
        return Err(Error::shape("basis_labels", n, raw.basis_labels.len()));
    }
    let h = HopfAlgebraData::new(
        raw.basis_labels,
        tensor("mult", &raw.mult, n)?,
        vector("unit", &raw.unit, n)?,
        tensor("comult", &raw.comult, n)?,
        vector("counit", &raw.counit, n)?,
        matrix("antipode", &raw.antipode, n, n)?,
        matrix("star", &raw.star, n, n)?,
    )?;
    check_finite(origin, h.mult.data.iter().flat_map(|z| [z.re, z.im]))?;
    Ok(h)
}

pub fn hopf_to_json(h: &HopfAlgebraData) -> String {
    let n = h.dim;
    let t = |t: &Tensor3| -> Vec<Vec<Vec<Cx>>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| to_cx(t.get(i, j, k))).collect()).collect())
            .collect()
    };
    let m = |m: &CMat| -> Vec<Vec<Cx>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| to_cx(m[(i, j)])).collect())
            .collect()
    };
    let raw = HopfJson {
        dim: n,
        basis_labels: h.basis_labels.clone(),
        mult: t(&h.mult),
        unit: h.unit.iter().map(|z| to_cx(*z)).collect(),
        comult: t(&h.comult),
        counit: h.counit.iter().map(|z| to_cx(*z)).collect(),
        antipode: m(&h.antipode),
        star: m(&h.star),
    };
    serde_json::to_string(&raw).expect("fixture serialization")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

pub fn load_hopf(path: impl AsRef<Path>) -> Result<HopfAlgebraData> {
    let path = path.as_ref();
    let text = read(path)?;
    hopf_from_json(&text, &path.display().to_string())
}

/// Loads a subgroup fixture; `source` and `target` are paths relative to the fixture file.
pub fn load_subgroup(path: impl AsRef<Path>) -> Result<SubgroupSurjection> {
    let path = path.as_ref();
    let text = read(path)?;
    let raw: SubgroupJson = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let source = Arc::new(load_hopf(dir.join(&raw.source))?);
    let target = Arc::new(load_hopf(dir.join(&raw.target))?);
    let map = matrix("map", &raw.map, target.dim, source.dim)?;
    Ok(SubgroupSurjection {
        name: raw.name,
        source,
        target,
        map,
    })
}

pub fn subgroup_to_json(p: &SubgroupSurjection, source: &str, target: &str) -> String {
    let raw = SubgroupJson {
        name: p.name.clone(),
        source: source.to_string(),
        target: target.to_string(),
        map: (0..p.map.nrows())
            .map(|i| (0..p.map.ncols()).map(|j| to_cx(p.map[(i, j)])).collect())
            .collect(),
    };
    serde_json::to_string(&raw).expect("fixture serialization")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{function_algebra, kac_paljutkin, FiniteGroup};

    #[test]
    fn json_roundtrip_is_exact() {
        for h in [function_algebra(&FiniteGroup::symmetric3()), kac_paljutkin()] {
            let back = hopf_from_json(&hopf_to_json(&h), "mem").unwrap();
            assert_eq!(back, h);
        }
    }

    #[test]
    fn shape_errors_name_the_tensor() {
        let h = function_algebra(&FiniteGroup::cyclic(2));
        let mut v: serde_json::Value = serde_json::from_str(&hopf_to_json(&h)).unwrap();
        v["comult"][1] = serde_json::json!([[[1.0, 0.0]]]);
        let err = hopf_from_json(&v.to_string(), "mem").unwrap_err();
        assert!(err.to_string().contains("comult[1]"), "{err}");
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(hopf_from_json("{", "mem"), Err(Error::Parse { .. })));
    }
}
