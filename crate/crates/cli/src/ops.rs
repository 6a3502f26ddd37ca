//! The operations a scenario step may name. Each returns residual checks plus
//! free-form data; expectations given as parameters become extra checks.

use std::sync::Arc;

use serde_json::{json, Value};
use ydcat::duality::{
    adjoint_action_residual, check_unit_endomorphisms, equivalence_report, roundtrip_lambda, CbCategory,
};
use ydcat::galois::{
    certify_quotient_type, enumerate_yd_subalgebras, galois_identity_check, galois_report, quotient_coideal,
    reconstruct_subgroup, restriction_kernel, spectral_functor,
};
use ydcat::hopf::{load_hopf, validate_hopf};
use ydcat::linalg::{self, CMat};
use ydcat::poisson::{
    harmonic_space, identification_check, irr_walk, markov_matrix, markov_report, nat_harmonic_dim, phi_report,
    phi_state, Measure, PoissonBoundary,
};
use ydcat::repcat::{Object, PeterWeyl, RepCategory};
use ydcat::report::CheckReport;
use ydcat::ydalg::{check_yd_axioms, DualYd, YdOps};
use ydcat::Error;

use crate::context::{parse_object, Context, Params};
use crate::{CliError, CliResult};

pub const OPS: &[&str] = &[
    "validate",
    "irreps",
    "ydcheck",
    "categorify",
    "reconstruct",
    "roundtrip",
    "coideal",
    "galois",
    "poisson",
];

const SAMPLES: usize = 20;

/// What a step produced.
pub struct Outcome {
    pub checks: CheckReport,
    pub data: Value,
}

pub fn is_known(op: &str) -> bool {
    OPS.contains(&op)
}

pub fn run_op(ctx: &mut Context, op: &str, p: &Params, tol: f64) -> CliResult<Outcome> {
    match op {
        "validate" => validate(ctx, p, tol),
        "irreps" => irreps(ctx, p, tol),
        "ydcheck" => ydcheck(ctx, p, tol),
        "categorify" => categorify(ctx, p, tol),
        "reconstruct" => reconstruct(ctx, p, tol),
        "roundtrip" => roundtrip(ctx, p, tol),
        "coideal" => coideal(ctx, p, tol),
        "galois" => galois(ctx, p, tol),
        "poisson" => poisson(ctx, p, tol),
        _ => Err(CliError::UnknownOp(op.to_string())),
    }
}

fn expect_usize(checks: &mut CheckReport, name: &str, got: usize, want: Option<usize>) {
    if let Some(w) = want {
        checks.push_detail(name, if got == w { 0.0 } else { 1.0 }, 0.5, format!("got {got}, expected {w}"));
    }
}

fn expect_list(checks: &mut CheckReport, name: &str, got: &[usize], want: Option<Vec<usize>>) {
    if let Some(w) = want {
        checks.push_detail(name, if got == w.as_slice() { 0.0 } else { 1.0 }, 0.5, format!("got {got:?}, expected {w:?}"));
    }
}

fn expect_bool(checks: &mut CheckReport, name: &str, got: bool, want: Option<bool>) {
    if let Some(w) = want {
        checks.push_detail(name, if got == w { 0.0 } else { 1.0 }, 0.5, format!("got {got}, expected {w}"));
    }
}

/// `objects` as labels, defaulting to every irreducible.
fn objects(p: &Params, cat: &RepCategory) -> CliResult<Vec<(String, Object)>> {
    match p.str_list_opt("objects")? {
        Some(list) => list.into_iter().map(|s| Ok((s.clone(), parse_object(&s, cat)?))).collect(),
        None => Ok(cat
            .table()
            .labels
            .iter()
            .enumerate()
            .map(|(s, l)| (l.clone(), Object::Irrep(s)))
            .collect()),
    }
}

fn validate(ctx: &mut Context, p: &Params, tol: f64) -> CliResult<Outcome> {
    let mut checks = CheckReport::new();
    if let Some(rel) = p.str_opt("subgroup")? {
        let cat = ctx.category(p)?;
        let sub = ctx.subgroup(rel, &cat)?;
        checks.extend("source.", validate_hopf(&sub.source, tol)?);
        checks.extend("target.", validate_hopf(&sub.target, tol)?);
        checks.extend("surjection.", sub.validate(tol)?);
        let data = json!({"subgroup": sub.name, "source_dim": sub.source.dim, "target_dim": sub.target.dim});
        return Ok(Outcome { checks, data });
    }
    let h = match p.str_opt("fixture")? {
        Some(rel) => Arc::new(load_hopf(ctx.path(rel))?),
        None => {
            let cat = ctx.category(p)?;
            ctx.hopf(&cat)?
        }
    };
    checks.extend("", validate_hopf(&h, tol)?);
    expect_usize(&mut checks, "expected_dim", h.dim, p.usize_opt("expect_dim")?);
    Ok(Outcome {
        checks,
        data: json!({"dim": h.dim}),
    })
}

fn irreps(ctx: &mut Context, p: &Params, tol: f64) -> CliResult<Outcome> {
    let cat = ctx.category(p)?;
    let table = cat.table();
    let mut checks = CheckReport::new();
    let mut trace_gap = 0.0f64;
    for s in 0..table.len() {
        let cd = cat.conjugate_data(&Object::Irrep(s), tol)?;
        checks.extend(&format!("{}.", table.labels[s]), cd.residuals);
        let tr = table.rho[s].trace();
        trace_gap = trace_gap
            .max((cd.qdim - tr.re).abs())
            .max(tr.im.abs())
            .max((table.qdims[s] - tr.re).abs());
    }
    checks.push("qdim_equals_trace_rho", trace_gap, p.f64_opt("qdim_tol")?.unwrap_or(1e-7));
    expect_list(&mut checks, "expected_dims", &table.dims, p.usize_list_opt("expect_dims")?);
    if let Some(want) = p.f64_list_opt("expect_qdims")? {
        let gap = if want.len() > table.len() {
            f64::MAX
        } else {
            want.iter().zip(&table.qdims).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        checks.push("expected_qdims", gap, p.f64_opt("qdim_tol")?.unwrap_or(1e-7));
    }
    let mut fusions = Vec::new();
    if let Some(Value::Array(rules)) = p.get("fusion") {
        for rule in rules {
            let bad = || CliError::BadParam("`fusion` entries must be [label, label, [labels]]".into());
            let r = rule.as_array().filter(|r| r.len() == 3).ok_or_else(bad)?;
            let idx = |v: &Value| -> CliResult<usize> {
                let l = v.as_str().ok_or_else(bad)?;
                table
                    .index_of_label(l)
                    .ok_or_else(|| CliError::BadParam(format!("unknown irrep label `{l}`")))
            };
            let (a, b) = (idx(&r[0])?, idx(&r[1])?);
            let mut want: Vec<usize> = r[2].as_array().ok_or_else(bad)?.iter().map(idx).collect::<CliResult<_>>()?;
            want.sort_unstable();
            let mut got = cat.fusion(a, b)?.irreps();
            got.sort_unstable();
            let name = format!("fusion.{}x{}", table.labels[a], table.labels[b]);
            let labels = |v: &[usize]| v.iter().map(|&s| table.labels[s].clone()).collect::<Vec<_>>();
            checks.push_detail(&name, if got == want { 0.0 } else { 1.0 }, 0.5, labels(&got).join(" + "));
            fusions.push(json!({"left": table.labels[a], "right": table.labels[b], "parts": labels(&got)}));
        }
    }
    Ok(Outcome {
        checks,
        data: json!({
            "provider": cat.provider().name(),
            "labels": table.labels,
            "dims": table.dims,
            "qdims": table.qdims,
            "fusion": fusions,
        }),
    })
}

fn algebra_of(ctx: &mut Context, p: &Params) -> CliResult<(Arc<RepCategory>, String, Arc<dyn YdOps>)> {
    let cat = ctx.category(p)?;
    let spec = p.str_opt("algebra")?.unwrap_or("adjoint").to_string();
    let alg = ctx.algebra(&spec, &cat, p.level_twice_opt("level")?)?;
    Ok((cat, spec, alg))
}

fn ydcheck(ctx: &mut Context, p: &Params, tol: f64) -> CliResult<Outcome> {
    let (_, spec, alg) = algebra_of(ctx, p)?;
    let rep = check_yd_axioms(&*alg, tol, ctx.seed)?;
    let mut checks = rep.checks.clone();
    checks.push_flag("certified_tuples", rep.certified > 0);
    expect_usize(&mut checks, "expected_fixed_point_dim", rep.fixed_point_dim, p.usize_opt("expect_fixed_dim")?);
    Ok(Outcome {
        checks,
        data: json!({
            "algebra": spec,
            "dim": alg.dim(),
            "exhaustive": rep.exhaustive,
            "certified": rep.certified,
            "skipped": rep.skipped,
            "fixed_point_dim": rep.fixed_point_dim,
            "seed": ctx.seed,
        }),
    })
}

fn categorify(ctx: &mut Context, p: &Params, tol: f64) -> CliResult<Outcome> {
    let (cat, spec, alg) = algebra_of(ctx, p)?;
    let objs = objects(p, &cat)?;
    let cb = CbCategory::new(alg, cat.clone())?;
    let mut checks = CheckReport::new();
    let mut homs = Vec::new();
    for (lu, u) in &objs {
        for (lv, v) in &objs {
            let h = cb.cb_hom(u, v)?;
            checks.push(format!("defining.{lu}->{lv}"), h.residual, tol);
            homs.push(json!({"source": lu, "target": lv, "dim": h.dim()}));
        }
    }
    checks.extend("unit_endomorphisms.", check_unit_endomorphisms(&cb, tol)?);
    Ok(Outcome {
        checks,
        data: json!({"algebra": spec, "homs": homs}),
    })
}

fn reconstruct(ctx: &mut Context, p: &Params, tol: f64) -> CliResult<Outcome> {
    let cat = ctx.category(p)?;
    let spec = p.str_opt("category")?.unwrap_or("fiber").to_string();
    let rec = ctx.reconstruction(&spec, &cat)?;
    let rep = check_yd_axioms(&rec, tol, ctx.seed)?;
    let mut checks = CheckReport::new();
    checks.extend("yd.", rep.checks);
    if p.bool_opt("adjoint_formula")?.unwrap_or(false) {
        checks.push("adjoint_formula", adjoint_action_residual(&rec)?, tol);
    }
    expect_usize(&mut checks, "expected_dim", rec.dim(), p.usize_opt("expect_dim")?);
    Ok(Outcome {
        checks,
        data: json!({
            "category": spec,
            "dim": rec.dim(),
            "multiplicities": rec.multiplicities(),
            "fixed_point_dim": rep.fixed_point_dim,
        }),
    })
}

fn roundtrip(ctx: &mut Context, p: &Params, tol: f64) -> CliResult<Outcome> {
    let cat = ctx.category(p)?;
    if let Some(spec) = p.str_opt("category")? {
        let provider = ctx.provider(spec, &cat)?;
        let objs: Vec<Object> = objects(p, &cat)?.into_iter().map(|(_, o)| o).collect();
        let rep = equivalence_report(provider, &objs, tol)?;
        let mut checks = rep.checks.clone();
        checks.push_flag("bijective", rep.bijective());
        return Ok(Outcome {
            checks,
            data: json!({
                "direction": "category",
                "category": spec,
                "provider": rep.provider,
                "multiplicities": rep.multiplicities,
                "pairs": rep.pairs,
            }),
        });
    }
    let spec = p.str_opt("algebra")?.unwrap_or("adjoint").to_string();
    let alg = ctx.algebra(&spec, &cat, p.level_twice_opt("level")?)?;
    let rep = roundtrip_lambda(alg, cat, tol)?;
    let mut checks = rep.checks.clone();
    checks.push_detail("bijective", if rep.bijective { 0.0 } else { 1.0 }, 0.5, format!("rank {}", rep.rank));
    let mut data = json!({
        "direction": "algebra",
        "algebra": spec,
        "algebra_dim": rep.algebra_dim,
        "reconstructed_dim": rep.reconstructed_dim,
        "multiplicities": rep.multiplicities,
        "rank": rep.rank,
    });
    if let Some(c) = rep.counterexample {
        data["counterexample"] = json!(c);
    }
    Ok(Outcome { checks, data })
}

fn coideal(ctx: &mut Context, p: &Params, tol: f64) -> CliResult<Outcome> {
    let cat = ctx.category(p)?;
    let mut checks = CheckReport::new();
    if p.bool_opt("enumerate")?.unwrap_or(false) {
        let h = ctx.hopf(&cat)?;
        let e = enumerate_yd_subalgebras(&h, ctx.seed, tol)?;
        checks.push_detail(
            "exhaustive",
            if e.multiplicity_free { 0.0 } else { 1.0 },
            0.5,
            format!("{} components, commutant dim {}", e.components.len(), e.commutant_dim),
        );
        let mut found = Vec::new();
        for c in &e.subalgebras {
            let cert = certify_quotient_type(c, &cat, tol)?;
            checks.extend(&format!("dim{}.", c.dim()), cert.checks.clone());
            found.push(json!({"dim": c.dim(), "subgroup_dim": cert.subgroup_dim, "quotient_type": cert.is_quotient_type()}));
        }
        let dims: Vec<usize> = e.subalgebras.iter().map(|c| c.dim()).collect();
        expect_list(&mut checks, "expected_dims", &dims, p.usize_list_opt("expect_dims")?);
        return Ok(Outcome {
            checks,
            data: json!({
                "multiplicity_free": e.multiplicity_free,
                "candidates": e.candidates,
                "subalgebras": found,
            }),
        });
    }
    let rel = p.str("subgroup")?;
    let sub = ctx.subgroup(rel, &cat)?;
    let c = quotient_coideal(&sub, tol)?;
    checks.push("coideal_equations", c.residual, tol);
    let yd = check_yd_axioms(&c.yd(tol)?, tol, ctx.seed)?;
    checks.extend("yd.", yd.checks);
    let k = reconstruct_subgroup(&c, &cat, tol)?;
    let direct = restriction_kernel(&sub);
    let distance = if k.kernel.ncols() == direct.ncols() {
        linalg::subspace_distance(&k.kernel, &direct)
    } else {
        f64::MAX
    };
    checks.push_detail(
        "kernel_distance",
        distance,
        tol,
        format!("recovered {} / expected {}", k.kernel.ncols(), direct.ncols()),
    );
    let cert = certify_quotient_type(&c, &cat, tol)?;
    checks.extend("certificate.", cert.checks.clone());
    expect_usize(&mut checks, "expected_dim", c.dim(), p.usize_opt("expect_dim")?);
    Ok(Outcome {
        checks,
        data: json!({
            "subgroup": sub.name,
            "coideal_dim": c.dim(),
            "kernel_dim": k.kernel.ncols(),
            "invariant_dims": k.invariant_dims(),
            "subgroup_dim": cert.subgroup_dim,
        }),
    })
}

fn galois(ctx: &mut Context, p: &Params, tol: f64) -> CliResult<Outcome> {
    let cat = ctx.category(p)?;
    match p.str_opt("check")?.unwrap_or("map") {
        "map" => {
            let spec = p.str_opt("algebra")?.unwrap_or("adjoint").to_string();
            let alg = ctx.algebra(&spec, &cat, p.level_twice_opt("level")?)?;
            let rep = galois_report(&*alg, tol)?;
            let mut checks = rep.checks.clone();
            if let Some(want) = p.bool_opt("expect_galois")? {
                // the expectation replaces the plain bijectivity flag
                checks.checks.retain(|c| c.name != "bijective");
                expect_bool(&mut checks, "expected_galois", rep.galois, Some(want));
            }
            Ok(Outcome {
                checks,
                data: json!({"algebra": spec, "galois": rep.galois, "rank": rep.rank,
                    "group_dim": rep.group_dim, "algebra_dim": rep.algebra_dim}),
            })
        }
        "identity" => {
            let spec = p.str_opt("category")?.unwrap_or("fiber").to_string();
            let rec = ctx.reconstruction(&spec, &cat)?;
            let upto = p.usize_opt("upto")?.unwrap_or(cat.num_irreps());
            let checks = galois_identity_check(&rec, upto, tol)?;
            Ok(Outcome {
                checks,
                data: json!({"category": spec, "upto": upto}),
            })
        }
        "spectral" => {
            let spec = p.str_opt("algebra")?.unwrap_or("adjoint").to_string();
            let alg = ctx.algebra(&spec, &cat, p.level_twice_opt("level")?)?;
            let f = spectral_functor(alg, cat.clone(), p.usize_opt("upto")?, tol)?;
            let mut checks = f.checks.clone();
            expect_bool(
                &mut checks,
                "expected_full_multiplicity",
                f.full_multiplicity,
                p.bool_opt("expect_full_multiplicity")?,
            );
            expect_list(&mut checks, "expected_dims", &f.dims, p.usize_list_opt("expect_dims")?);
            Ok(Outcome {
                checks,
                data: json!({"algebra": spec, "dims": f.dims, "full_multiplicity": f.full_multiplicity, "pairs": f.pairs}),
            })
        }
        other => Err(CliError::BadParam(format!("unknown galois check `{other}`"))),
    }
}

fn poisson(ctx: &mut Context, p: &Params, tol: f64) -> CliResult<Outcome> {
    let cat = ctx.category(p)?;
    let check = p.str_opt("check")?.unwrap_or("markov").to_string();
    if check == "phi" {
        return phi(ctx, p, &cat, tol);
    }
    let level = p.level_twice_opt("level")?;
    let dual = ctx.dual(&cat, level)?;
    let mu = p.measure("measure", &cat)?;
    let labels = mu.to_labels(cat.table());
    let mut checks = CheckReport::new();
    let data = match check.as_str() {
        "markov" => {
            let rep = markov_report(&dual, &mu, p.usize_opt("samples")?.unwrap_or(SAMPLES), ctx.seed, tol)?;
            checks = rep.checks;
            json!({"measure": labels, "blocks": dual.num_blocks(), "certified_blocks": rep.certified_blocks})
        }
        "harmonic" => {
            let h = harmonic_space(&dual, &mu, tol)?;
            checks = h.checks;
            expect_usize(&mut checks, "expected_dim", h.dim, p.usize_opt("expect_dim")?);
            let mut data = json!({
                "measure": labels,
                "level": h.level,
                "certified_blocks": h.certified_blocks,
                "dim": h.dim,
                "certified_dim": h.certified_dim,
                "block_ranks": h.block_ranks,
            });
            if cat.provider().is_finite() {
                let w = irr_walk(&dual, &mu, tol)?;
                checks.extend("walk.", w.checks);
                data["walk"] = json!({"central_harmonic_dim": w.harmonic_dim, "irreducible": w.irreducible});
            }
            data
        }
        "convolution" => {
            let nu = p.measure("then", &cat)?;
            let n = dual.num_blocks();
            let pm = markov_matrix(&dual, &mu, n)?;
            let pn = markov_matrix(&dual, &nu, n)?;
            let conv = nu.convolve(&mu, &cat)?;
            let pc = markov_matrix(&dual, &conv, n)?;
            checks.push("composition", linalg::max_abs(&(pm * pn - pc)), tol);
            json!({"measure": labels, "then": nu.to_labels(cat.table()), "convolution": conv.to_labels(cat.table())})
        }
        "cesaro" => {
            let b = PoissonBoundary::new(&dual, &mu, tol)?;
            checks = b.checks.clone();
            checks.extend("boundary.", b.algebra_report(tol)?);
            expect_usize(&mut checks, "expected_dim", b.dim(), p.usize_opt("expect_dim")?);
            json!({
                "measure": labels,
                "dim": b.dim(),
                "limit_exists": b.limit_exists(),
                "peripheral_eigenvalues": b.peripheral.len(),
            })
        }
        "identification" => {
            let objs = objects(p, &cat)?;
            let dual = Arc::new(dual);
            let mut pairs = Vec::new();
            for (lv, v) in &objs {
                for (lw, w) in &objs {
                    let rep = identification_check(dual.clone(), &mu, v, w, tol)?;
                    checks.extend(&format!("{lv}->{lw}."), rep.checks);
                    pairs.push(json!({"source": lv, "target": lw, "cb_dim": rep.cb_dim, "nat_dim": rep.nat_dim,
                        "certified_blocks": rep.certified_blocks}));
                }
            }
            json!({"measure": labels, "blocks": dual.num_blocks(), "pairs": pairs})
        }
        "natural" => natural(p, &cat, &dual, &mu, tol, &mut checks)?,
        other => return Err(CliError::BadParam(format!("unknown poisson check `{other}`"))),
    };
    Ok(Outcome { checks, data })
}

/// Harmonic natural transformations `iota (x) V -> iota (x) W` on the dual's blocks.
fn natural(
    p: &Params,
    cat: &Arc<RepCategory>,
    dual: &DualYd,
    mu: &Measure,
    tol: f64,
    checks: &mut CheckReport,
) -> CliResult<Value> {
    let source = parse_object(p.str_opt("source")?.unwrap_or("unit"), cat)?;
    let target = parse_object(p.str_opt("target")?.unwrap_or("unit"), cat)?;
    let (dim, defect) = nat_harmonic_dim(cat, mu, &source, &target, dual.num_blocks())?;
    checks.push("image_in_intertwiners", defect, tol);
    expect_usize(checks, "expected_dim", dim, p.usize_opt("expect_dim")?);
    Ok(json!({"source": source.to_string(), "target": target.to_string(), "dim": dim}))
}

fn phi(ctx: &mut Context, p: &Params, cat: &Arc<RepCategory>, tol: f64) -> CliResult<Outcome> {
    let pw = PeterWeyl::new(cat.clone());
    let mut checks = CheckReport::new();
    let mut states = Vec::new();
    let normalized = p.bool_opt("expect_normalized_trace")?.unwrap_or(false);
    for (label, obj) in objects(p, cat)? {
        let rep = phi_report(&pw, &obj, p.usize_opt("samples")?.unwrap_or(SAMPLES), ctx.seed, tol)?;
        checks.extend(&format!("{label}."), rep.checks);
        if normalized {
            let st = phi_state(cat, &obj)?;
            let d = st.dim();
            let gap = linalg::max_abs(&(&st.density - CMat::identity(d, d) / linalg::r(d as f64)));
            checks.push(format!("{label}.normalized_trace"), gap, tol);
        }
        states.push(json!({"object": label, "qdim": rep.qdim, "weights": rep.weights}));
    }
    if states.is_empty() {
        return Err(Error::AxiomFailure("no objects given".into()).into());
    }
    Ok(Outcome {
        checks,
        data: json!({"states": states}),
    })
}
