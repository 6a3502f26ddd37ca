//! Acceptance suite: one scenario file per criterion, run through the `ydcat`
//! binary. Prints one PASS/FAIL line per criterion and exits non-zero if any fail.
//!
//! Besides the scenario verdict, every residual check must hold at the
//! criterion's own bound, so loosening a scenario's tolerance cannot pass.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use serde_json::Value;

fn scenarios() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

struct Run {
    code: i32,
    report: Value,
    seconds: f64,
}

fn run(file: &str) -> Result<Run, String> {
    let t0 = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_ydcat"))
        .arg("run")
        .arg(scenarios().join(file))
        .output()
        .map_err(|e| e.to_string())?;
    let seconds = t0.elapsed().as_secs_f64();
    let code = out.status.code().unwrap_or(-1);
    let report = serde_json::from_slice(&out.stdout)
        .map_err(|e| format!("exit {code}, unreadable report ({e}): {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok(Run { code, report, seconds })
}

fn steps(r: &Value) -> &Vec<Value> {
    r["steps"].as_array().expect("steps")
}

fn step<'a>(r: &'a Value, label: &str) -> Result<&'a Value, String> {
    steps(r)
        .iter()
        .find(|s| s["label"] == label)
        .ok_or_else(|| format!("no step `{label}`"))
}

/// Every step passed and every residual check holds at `bound`; boolean
/// checks (residual 0 or 1) must be exactly 0.
fn verdict(r: &Run, bound: f64) -> Result<(), String> {
    if r.code != 0 {
        let failed: Vec<String> = steps(&r.report)
            .iter()
            .filter(|s| s["passed"] != true)
            .map(|s| {
                let bad: Vec<String> = s["checks"]["checks"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .filter(|c| c["passed"] != true)
                    .map(|c| format!("{}={}", c["name"], c["residual"]))
                    .collect();
                format!("{} [{}] {}", s["label"], bad.join(", "), s["error"].as_str().unwrap_or(""))
            })
            .collect();
        return Err(format!("exit {}: {}", r.code, failed.join("; ")));
    }
    for s in steps(&r.report) {
        for c in s["checks"]["checks"].as_array().expect("checks") {
            let res = c["residual"].as_f64().expect("residual");
            let tol = c["tol"].as_f64().expect("tol");
            let flag = tol == 0.5;
            if (flag && res != 0.0) || (!flag && res > bound) {
                return Err(format!("{} / {}: residual {res:e} above {bound:e}", s["label"], c["name"]));
            }
        }
    }
    Ok(())
}

fn data<'a>(r: &'a Run, label: &str, key: &str) -> Result<&'a Value, String> {
    Ok(&step(&r.report, label)?["data"][key])
}

fn eq(got: &Value, want: Value, what: &str) -> Result<(), String> {
    if *got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

fn ac1() -> Result<String, String> {
    let r = run("ac01-hopf-axioms.json")?;
    verdict(&r, 1e-10)?;
    for s in steps(&r.report) {
        let ms = s["runtime_ms"].as_u64().unwrap_or(u64::MAX);
        if ms >= 1000 {
            return Err(format!("{} took {ms} ms", s["label"]));
        }
    }
    Ok("z2, s3, kac_paljutkin validate at 1e-10, each under 1 s".into())
}

fn ac2() -> Result<String, String> {
    let r = run("ac02-irreps.json")?;
    verdict(&r, 1e-7)?;
    eq(data(&r, "z2", "dims")?, serde_json::json!([1, 1]), "z2 dims")?;
    eq(data(&r, "s3", "dims")?, serde_json::json!([1, 1, 2]), "s3 dims")?;
    eq(data(&r, "kac_paljutkin", "dims")?, serde_json::json!([1, 1, 1, 1, 2]), "kp dims")?;
    for label in ["z2", "s3", "kac_paljutkin"] {
        for c in step(&r.report, label)?["checks"]["checks"].as_array().unwrap() {
            if c["residual"].as_f64().unwrap() > 1e-9 {
                return Err(format!("{label} {}: conjugate residual above 1e-9", c["name"]));
            }
        }
    }
    eq(
        &data(&r, "suq2 q=1/2 level 2", "fusion")?[0]["parts"],
        serde_json::json!(["0", "1"]),
        "1/2 x 1/2",
    )?;
    Ok("irrep tables, conjugate equations, q-dimensions and 1/2 x 1/2 = 0 + 1".into())
}

fn ac3() -> Result<String, String> {
    let r = run("ac03-yd-axioms.json")?;
    verdict(&r, 1e-7)?;
    for s in steps(&r.report) {
        let quantum = s["label"].as_str().unwrap().contains("suq2");
        if !quantum {
            for c in s["checks"]["checks"].as_array().unwrap() {
                if c["tol"] != 0.5 && c["residual"].as_f64().unwrap() > 1e-9 {
                    return Err(format!("{}: {} above 1e-9", s["label"], c["name"]));
                }
            }
        }
    }
    let cert = data(&r, "dual suq2 q=1/2 level 1", "certified")?.as_u64().unwrap_or(0);
    Ok(format!("adjoint, dual and coideal algebras; {cert} certified truncated tuples"))
}

fn ac4() -> Result<String, String> {
    let r = run("ac04-roundtrip-algebra.json")?;
    verdict(&r, 1e-8)?;
    if r.seconds >= 30.0 {
        return Err(format!("took {:.1} s", r.seconds));
    }
    for s in steps(&r.report) {
        if s["data"]["rank"] != s["data"]["algebra_dim"] || s["data"]["algebra_dim"] != s["data"]["reconstructed_dim"] {
            return Err(format!("{}: lambda not bijective", s["label"]));
        }
    }
    Ok(format!("lambda is a bijective *-isomorphism on 4 algebras in {:.1} s", r.seconds))
}

fn ac5() -> Result<String, String> {
    let r = run("ac05-roundtrip-category.json")?;
    verdict(&r, 1e-8)?;
    for s in steps(&r.report) {
        for p in s["data"]["pairs"].as_array().unwrap() {
            if p["rank"] != p["provider_dim"] || p["rank"] != p["cb_dim"] {
                return Err(format!("{}: {} -> {} not bijective", s["label"], p["source"], p["target"]));
            }
        }
    }
    Ok("fiber, Rep z2 and identity functors: bijective and strictly tensor".into())
}

fn ac6() -> Result<String, String> {
    let r = run("ac06-adjoint-action.json")?;
    verdict(&r, 1e-10)?;
    Ok("u_ij |> v = sum_m u_im v S(u_mj) on the fiber functor of Rep s3".into())
}

fn ac7() -> Result<String, String> {
    let r = run("ac07-subgroups.json")?;
    verdict(&r, 1e-9)?;
    for label in ["enumerate z2", "enumerate kac_paljutkin"] {
        eq(data(&r, label, "multiplicity_free")?, Value::Bool(true), label)?;
        for c in data(&r, label, "subalgebras")?.as_array().unwrap() {
            eq(&c["quotient_type"], Value::Bool(true), label)?;
        }
    }
    let n = data(&r, "enumerate kac_paljutkin", "subalgebras")?.as_array().unwrap().len();
    Ok(format!("kernels recovered for 4 subgroups; {n} kac_paljutkin coideals, all quotient type"))
}

fn ac8() -> Result<String, String> {
    let r = run("ac08-galois.json")?;
    verdict(&r, 1e-9)?;
    eq(data(&r, "spectral functor of C[s3]", "full_multiplicity")?, Value::Bool(true), "C[s3]")?;
    eq(data(&r, "spectral functor of C[s3/z2]", "full_multiplicity")?, Value::Bool(false), "C[s3/z2]")?;
    Ok("Galois map, unit splitting identity and full multiplicity flags".into())
}

fn ac9() -> Result<String, String> {
    let r = run("ac09-poisson-finite.json")?;
    verdict(&r, 1e-9)?;
    for label in ["markov s3 standard", "markov kac_paljutkin"] {
        for c in step(&r.report, label)?["checks"]["checks"].as_array().unwrap() {
            if c["residual"].as_f64().unwrap() > 1e-10 {
                return Err(format!("{label} {}: above 1e-10", c["name"]));
            }
        }
    }
    eq(data(&r, "harmonic z2 delta_e", "dim")?, 2.into(), "z2 delta_e")?;
    eq(data(&r, "harmonic z2 delta_sign", "dim")?, 1.into(), "z2 delta_sign")?;
    eq(data(&r, "harmonic s3 standard", "dim")?, 1.into(), "s3 standard")?;
    Ok("normalized traces, Markov operators, harmonic dimensions 2/1/1, convolution".into())
}

fn ac10() -> Result<String, String> {
    let r = run("ac10-poisson-pictures.json")?;
    verdict(&r, 1e-6)?;
    for s in steps(&r.report) {
        let quantum = s["label"].as_str().unwrap().contains("suq2");
        for c in s["checks"]["checks"].as_array().unwrap() {
            if !quantum && c["tol"] != 0.5 && c["residual"].as_f64().unwrap() > 1e-8 {
                return Err(format!("{}: {} above 1e-8", s["label"], c["name"]));
            }
        }
    }
    let q = step(&r.report, "suq2 q=1/2 level 2")?;
    let certified = q["data"]["pairs"][0]["certified_blocks"].as_u64().unwrap_or(0);
    if certified == 0 {
        return Err("no certified blocks at level 2".into());
    }
    Ok(format!("block bijection intertwines both Markov operators; suq2 level 2 on {certified} certified blocks"))
}

/// Reports with runtimes removed.
fn strip(mut v: Value) -> Value {
    if let Value::Object(o) = &mut v {
        o.remove("runtime_ms");
        for (_, x) in o.iter_mut() {
            *x = strip(x.take());
        }
    } else if let Value::Array(a) = &mut v {
        for x in a.iter_mut() {
            *x = strip(x.take());
        }
    }
    v
}

fn ac11() -> Result<String, String> {
    let files = ["ac11-determinism.json", "ac03-yd-axioms.json", "ac07-subgroups.json", "ac09-poisson-finite.json"];
    for f in files {
        let a = run(f)?;
        let b = run(f)?;
        if a.code != b.code {
            return Err(format!("{f}: exit codes {} and {}", a.code, b.code));
        }
        let (sa, sb) = (strip(a.report).to_string(), strip(b.report).to_string());
        if sa != sb {
            return Err(format!("{f}: reports differ"));
        }
    }
    let r = run("ac11-determinism.json")?;
    verdict(&r, 1e-7)?;
    Ok(format!("{} scenarios re-run with identical reports", files.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Result<String, String>); 11] = [
        ("AC1 ", ac1),
        ("AC2 ", ac2),
        ("AC3 ", ac3),
        ("AC4 ", ac4),
        ("AC5 ", ac5),
        ("AC6 ", ac6),
        ("AC7 ", ac7),
        ("AC8 ", ac8),
        ("AC9 ", ac9),
        ("AC10", ac10),
        ("AC11", ac11),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, f) in criteria {
        let t0 = Instant::now();
        match f() {
            Ok(msg) => println!("{name} PASS ({:.1} s) {msg}", t0.elapsed().as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("{name} FAIL ({:.1} s) {msg}", t0.elapsed().as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1} s", 11 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
