//! Step parameters and the shared state of a run: base directory for
//! fixture paths, seed, tolerance and cached categories.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{Map, Value};
use ydcat::duality::{CategoryProvider, CbCategory, MatrixCategory, MatrixKind, Reconstruction};
use ydcat::galois::quotient_coideal;
use ydcat::hopf::{load_subgroup, HopfAlgebraData, SubgroupSurjection};
use ydcat::poisson::Measure;
use ydcat::repcat::{parse_provider, parse_rational, Object, RepCategory};
use ydcat::ydalg::{adjoint_yd_on_cg, counit_action_yd, dual_yd, trivial_yd, DualYd, YdOps};
use ydcat::Error;

use crate::{CliError, CliResult};

/// A step's parameters: a JSON object with typed accessors.
#[derive(Clone, Debug, Default)]
pub struct Params(pub Map<String, Value>);

fn bad(key: &str, want: &str) -> CliError {
    CliError::BadParam(format!("`{key}` must be {want}"))
}

impl Params {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn str_opt(&self, key: &str) -> CliResult<Option<&str>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(bad(key, "a string")),
        }
    }

    pub fn str(&self, key: &str) -> CliResult<&str> {
        self.str_opt(key)?.ok_or_else(|| CliError::BadParam(format!("missing `{key}`")))
    }

    pub fn f64_opt(&self, key: &str) -> CliResult<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| bad(key, "a number")),
        }
    }

    pub fn usize_opt(&self, key: &str) -> CliResult<Option<usize>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(|x| Some(x as usize)).ok_or_else(|| bad(key, "a nonnegative integer")),
        }
    }

    pub fn bool_opt(&self, key: &str) -> CliResult<Option<bool>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.as_bool().map(Some).ok_or_else(|| bad(key, "a boolean")),
        }
    }

    pub fn usize_list_opt(&self, key: &str) -> CliResult<Option<Vec<usize>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(|| bad(key, "a list of integers")))
                .collect::<CliResult<_>>()
                .map(Some),
            Some(_) => Err(bad(key, "a list of integers")),
        }
    }

    pub fn f64_list_opt(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| bad(key, "a list of numbers")))
                .collect::<CliResult<_>>()
                .map(Some),
            Some(_) => Err(bad(key, "a list of numbers")),
        }
    }

    pub fn str_list_opt(&self, key: &str) -> CliResult<Option<Vec<String>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| v.as_str().map(str::to_string).ok_or_else(|| bad(key, "a list of strings")))
                .collect::<CliResult<_>>()
                .map(Some),
            Some(_) => Err(bad(key, "a list of strings")),
        }
    }

    /// A half-integer given as a number or a string such as `"3/2"`; returns twice its value.
    pub fn level_twice_opt(&self, key: &str) -> CliResult<Option<usize>> {
        let x = match self.0.get(key) {
            None => return Ok(None),
            Some(Value::Number(n)) => n.as_f64(),
            Some(Value::String(s)) => parse_rational(s),
            Some(_) => None,
        }
        .ok_or_else(|| bad(key, "a half-integer"))?;
        let t = (2.0 * x).round();
        if t < 0.0 || (2.0 * x - t).abs() > 1e-12 {
            return Err(bad(key, "a nonnegative half-integer"));
        }
        Ok(Some(t as usize))
    }

    /// A measure `{label: weight}` resolved against the irreducibles of `cat`.
    pub fn measure(&self, key: &str, cat: &RepCategory) -> CliResult<Measure> {
        let raw = self.0.get(key).ok_or_else(|| CliError::BadParam(format!("missing `{key}`")))?;
        let obj = raw.as_object().ok_or_else(|| bad(key, "an object of label: weight"))?;
        let mut map = BTreeMap::new();
        for (label, w) in obj {
            map.insert(label.clone(), w.as_f64().ok_or_else(|| bad(key, "an object of label: weight"))?);
        }
        Ok(Measure::from_labels(cat.table(), &map)?)
    }
}

/// State shared by the steps of one run.
pub struct Context {
    pub base: PathBuf,
    pub seed: u64,
    pub tol: f64,
    pub provider: Option<String>,
    cats: HashMap<String, Arc<RepCategory>>,
}

impl Context {
    pub fn new(base: impl Into<PathBuf>, seed: u64, tol: f64, provider: Option<String>) -> Self {
        Context {
            base: base.into(),
            seed,
            tol,
            provider,
            cats: HashMap::new(),
        }
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        let p = Path::new(rel);
        if p.is_relative() {
            self.base.join(p)
        } else {
            p.to_path_buf()
        }
    }

    /// The step's `provider` parameter, else the run's provider.
    pub fn category(&mut self, p: &Params) -> CliResult<Arc<RepCategory>> {
        let spec = match p.str_opt("provider")? {
            Some(s) => s.to_string(),
            None => self
                .provider
                .clone()
                .ok_or_else(|| CliError::BadParam("no provider given".into()))?,
        };
        if let Some(c) = self.cats.get(&spec) {
            return Ok(c.clone());
        }
        let provider = parse_provider(&spec, Some(&self.base))?;
        let cat = RepCategory::new(provider, self.seed)?;
        self.cats.insert(spec, cat.clone());
        Ok(cat)
    }

    pub fn hopf(&self, cat: &RepCategory) -> CliResult<Arc<HopfAlgebraData>> {
        cat.provider()
            .hopf()
            .cloned()
            .ok_or_else(|| Error::Unsupported("this operation needs a finite provider".into()).into())
    }

    pub fn subgroup(&self, rel: &str, cat: &RepCategory) -> CliResult<SubgroupSurjection> {
        let sub = load_subgroup(self.path(rel))?;
        if *sub.source != *self.hopf(cat)? {
            return Err(Error::AxiomFailure(format!("subgroup `{rel}` does not start at the provider's algebra")).into());
        }
        Ok(sub)
    }

    /// `dual` over the first `2 level + 1` irreducibles (all of them when no level is given);
    /// axioms are tested against the coefficients below the top block.
    pub fn dual(&self, cat: &Arc<RepCategory>, level_twice: Option<usize>) -> CliResult<DualYd> {
        let blocks = level_twice.map(|t| t + 1);
        if let Some(b) = blocks {
            if b > cat.num_irreps() {
                return Err(Error::truncation(b - 1, cat.num_irreps() - 1).into());
            }
        }
        let x_upto = blocks.map(|b| b.saturating_sub(1).max(1));
        Ok(dual_yd(cat.clone(), blocks, x_upto)?)
    }

    /// `adjoint`, `trivial`, `counit`, `dual` or `coideal:<subgroup fixture>`.
    pub fn algebra(&self, spec: &str, cat: &Arc<RepCategory>, level_twice: Option<usize>) -> CliResult<Arc<dyn YdOps>> {
        let alg: Arc<dyn YdOps> = match spec {
            "adjoint" => Arc::new(adjoint_yd_on_cg(self.hopf(cat)?)),
            "trivial" => Arc::new(trivial_yd(self.hopf(cat)?)),
            "counit" => Arc::new(counit_action_yd(self.hopf(cat)?)),
            "dual" => Arc::new(self.dual(cat, level_twice)?),
            _ => match spec.strip_prefix("coideal:") {
                Some(rel) => {
                    let sub = self.subgroup(rel, cat)?;
                    Arc::new(quotient_coideal(&sub, self.tol)?.yd(self.tol)?)
                }
                None => return Err(CliError::BadParam(format!("unknown algebra `{spec}`"))),
            },
        };
        Ok(alg)
    }

    /// `fiber`, `full`, `subgroup:<fixture>` or `cb:<algebra>`.
    pub fn provider(&self, spec: &str, cat: &Arc<RepCategory>) -> CliResult<Arc<dyn CategoryProvider>> {
        let p: Arc<dyn CategoryProvider> = match spec {
            "fiber" => Arc::new(MatrixCategory::fiber(cat.clone())),
            "full" => Arc::new(MatrixCategory::full(cat.clone())),
            _ => {
                if let Some(rel) = spec.strip_prefix("subgroup:") {
                    let sub = self.subgroup(rel, cat)?;
                    Arc::new(MatrixCategory::new(cat.clone(), MatrixKind::Subgroup(sub.map))?)
                } else if let Some(alg) = spec.strip_prefix("cb:") {
                    Arc::new(CbCategory::new(self.algebra(alg, cat, None)?, cat.clone())?)
                } else {
                    return Err(CliError::BadParam(format!("unknown category `{spec}`")));
                }
            }
        };
        Ok(p)
    }

    pub fn reconstruction(&self, spec: &str, cat: &Arc<RepCategory>) -> CliResult<Reconstruction> {
        Ok(Reconstruction::new(self.provider(spec, cat)?, None, None)?)
    }
}

/// `unit`, an irrep label, or labels joined by `*` for tensor products.
pub fn parse_object(s: &str, cat: &RepCategory) -> CliResult<Object> {
    let mut factors = Vec::new();
    for part in s.split('*') {
        let part = part.trim();
        if part == "unit" {
            continue;
        }
        let idx = cat
            .table()
            .index_of_label(part)
            .ok_or_else(|| CliError::BadParam(format!("unknown irrep label `{part}`")))?;
        factors.push(Object::Irrep(idx));
    }
    Ok(Object::tensor_all(factors.iter()))
}
