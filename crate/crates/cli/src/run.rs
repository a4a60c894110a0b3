//! Subcommand implementations.

use crate::render::*;
use crate::{Cli, Cmd, Format};
use anyhow::{anyhow, bail, Context};
use descent_core::axioms::{self, AuditOptions};
use descent_core::classify::{self, ClassifyOutcome, CriticalMap, ZAxiomOptions};
use descent_core::critical;
use descent_core::exact::{parse_rat, rat_to_string};
use descent_core::exec::Executor;
use descent_core::fgrid::FunctionGrid;
use descent_core::markov;
use descent_core::ops::{parse_operator, OperatorHandle};
use descent_core::spacespec::SpaceSpec;
use descent_grid::{
    dispersion_limit, gfield, mc_ball_identity, GridDomain, GridField, RadiusSweep,
};
use serde_json::{json, Map, Value};
use std::path::PathBuf;
use std::str::FromStr;

pub enum Outcome {
    Clean,
    TheoremViolation,
}

struct Env {
    spec: Option<SpaceSpec>,
    op_source: Value,
    grid_levels: u32,
    cap: Option<u128>,
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
}

impl Env {
    fn new(cli: &Cli) -> anyhow::Result<Self> {
        let spec = cli
            .spec
            .as_ref()
            .map(|p| {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading spec {}", p.display()))?;
                SpaceSpec::from_str(&text).map_err(|e| anyhow!("{}: {e}", p.display()))
            })
            .transpose()?;
        let op_source = match &cli.op {
            None => json!({"op": "TL"}),
            Some(s) if s.trim_start().starts_with('{') => {
                serde_json::from_str(s).context("parsing inline operator expression")?
            }
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading operator {path}"))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing operator {path}"))?
            }
        };
        let out = cli
            .out
            .clone()
            .or_else(|| std::env::var_os("DESCENT_OUT_DIR").map(PathBuf::from));
        Ok(Env {
            spec,
            op_source,
            grid_levels: cli.grid,
            cap: cli.cap,
            seed: cli.seed,
            out,
            format: cli.format,
        })
    }

    fn spec(&self) -> anyhow::Result<&SpaceSpec> {
        self.spec.as_ref().ok_or_else(|| anyhow!("this command needs --spec"))
    }

    fn operator(&self) -> anyhow::Result<OperatorHandle> {
        let spec = self.spec()?;
        Ok(parse_operator(&self.op_source, &spec.registry())?)
    }

    fn grid(&self) -> anyhow::Result<FunctionGrid> {
        let spec = self.spec()?;
        let mut g = FunctionGrid::integer(spec.space.clone(), self.grid_levels)?;
        if let Some(cap) = self.cap {
            g = g.with_cap(cap);
        }
        Ok(g)
    }

    fn base_report(&self, command: &str) -> Map<String, Value> {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(command));
        obj.insert("seed".into(), json!(self.seed));
        obj.insert("operator".into(), self.op_source.clone());
        obj.insert("grid".into(), json!(self.grid_levels));
        obj
    }
}

pub fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    let env = Env::new(cli)?;
    match &cli.cmd {
        Cmd::Audit => audit(&env),
        Cmd::Critical { function } => critical_cmd(&env, function),
        Cmd::Minima { function } => minima_cmd(&env, function),
        Cmd::Determine => determine(&env),
        Cmd::Simulate { function, start, horizon } => simulate(&env, function, start, *horizon),
        Cmd::Pif { function, start } => pif(&env, function, start),
        Cmd::Classify => classify_cmd(&env),
        Cmd::Zaxioms { rset } => zaxioms(&env, rset),
        Cmd::Dispersion { dim, res, function, coef, point, p, oriented, sweep_start, radii } => {
            dispersion_cmd(&env, *dim, *res, function, coef.as_deref(), point, *p, *oriented, *sweep_start, *radii)
        }
        Cmd::BallIdentity { vector, samples } => ball_identity(&env, vector, *samples),
    }
}

fn audit(env: &Env) -> anyhow::Result<Outcome> {
    let spec = env.spec()?;
    let op = env.operator()?;
    let grid = env.grid()?;
    let reports = axioms::audit_all(&op, &grid, &AuditOptions::default())?;
    for r in &reports {
        match &r.witness {
            None => println!("{:<12} holds-on-grid   ({} cases)", r.axiom.label(), r.cases),
            Some(w) => println!(
                "{:<12} FAILS at x = {}   ({})",
                r.axiom.label(),
                spec.space.label(w.vertex),
                w.note
            ),
        }
    }
    let mut obj = env.base_report("audit");
    obj.insert(
        "reports".into(),
        Value::Array(reports.iter().map(|r| axiom_report_json(&spec.space, r)).collect()),
    );
    emit(env.out.as_deref(), "audit.json", &to_pretty(&Value::Object(obj)))?;
    Ok(Outcome::Clean)
}

fn critical_cmd(env: &Env, function: &str) -> anyhow::Result<Outcome> {
    let spec = env.spec()?;
    let op = env.operator()?;
    let f = spec.function(function)?;
    let z = critical::critical_set(&op, f)?;
    let labels: Vec<&str> = z.iter().map(|&x| spec.space.label(x)).collect();
    println!("critical set of {function}: {{{}}}", labels.join(", "));
    let mut obj = env.base_report("critical");
    obj.insert("function".into(), json!(function));
    obj.insert("critical_set".into(), labels_json(&spec.space, &z));
    let rendered = to_pretty(&Value::Object(obj));
    match env.format {
        Format::Json => emit(env.out.as_deref(), "critical.json", &rendered)?,
        Format::Csv => {
            let mut csv = String::from("vertex\n");
            for l in &labels {
                csv.push_str(l);
                csv.push('\n');
            }
            emit(env.out.as_deref(), "critical.csv", &csv)?;
        }
    }
    Ok(Outcome::Clean)
}

fn minima_cmd(env: &Env, function: &str) -> anyhow::Result<Outcome> {
    let spec = env.spec()?;
    let f = spec.function(function)?;
    let m = critical::minima_set(&spec.generator, f)?;
    let labels: Vec<&str> = m.iter().map(|&x| spec.space.label(x)).collect();
    println!("order minima of {function}: {{{}}}", labels.join(", "));
    let mut obj = env.base_report("minima");
    obj.insert("function".into(), json!(function));
    obj.insert("minima".into(), labels_json(&spec.space, &m));
    emit(env.out.as_deref(), "minima.json", &to_pretty(&Value::Object(obj)))?;
    Ok(Outcome::Clean)
}

fn determine(env: &Env) -> anyhow::Result<Outcome> {
    let op = env.operator()?;
    let grid = env.grid()?;
    // the oracle presumes a descent modulus; audit first and warn otherwise.
    // full pair scans grow quadratically in the field count, so large grids
    // get a sampled monotonicity audit.
    let opts = AuditOptions::default();
    let nf = grid.len_checked()?;
    let full_pairs = nf.checked_mul(nf).filter(|&p| p <= 1 << 20).is_some();
    let audits = if full_pairs {
        axioms::audit_all(&op, &grid, &opts)?
    } else {
        vec![
            axioms::check_preserves_minima(&op, &grid, &opts)?,
            axioms::check_monotone_sampled(&op, &grid, &opts, 20_000, env.seed)?,
            axioms::check_scalar_monotone(&op, &grid, &opts)?,
            axioms::check_translation_invariance(&op, &grid, &opts)?,
        ]
    };
    let audits_pass = audits.iter().all(|r| r.holds_on_grid());
    if !audits_pass {
        let failing: Vec<&str> = audits
            .iter()
            .filter(|r| !r.holds_on_grid())
            .map(|r| r.axiom.label())
            .collect();
        println!(
            "warning: operator fails {} on this grid; violations below are expected findings",
            failing.join(", ")
        );
    }
    let report = critical::check_determination(&op, &grid, &Executor::default())?;
    println!(
        "{} violations over {} pairs ({} fields outside dom T)",
        report.violations.len(),
        report.pairs_checked,
        report.dom_excluded
    );
    let mut obj = env.base_report("determine");
    obj.insert("audits_pass".into(), json!(audits_pass));
    obj.insert("pairs_checked".into(), json!(report.pairs_checked));
    obj.insert("dom_excluded".into(), json!(report.dom_excluded));
    obj.insert("violations".into(), json!(report.violations.len()));
    obj.insert(
        "witnesses".into(),
        Value::Array(
            report
                .violations
                .iter()
                .take(32)
                .map(|v| {
                    json!({
                        "f_index": v.f_index,
                        "g_index": v.g_index,
                        "f": field_json(&v.f),
                        "g": field_json(&v.g),
                    })
                })
                .collect(),
        ),
    );
    emit(env.out.as_deref(), "determine.json", &to_pretty(&Value::Object(obj)))?;
    // witness CSV
    let mut csv = String::from("f_index,g_index,f,g\n");
    for v in &report.violations {
        let fv: Vec<String> = v.f.values().iter().map(rat_to_string).collect();
        let gv: Vec<String> = v.g.values().iter().map(rat_to_string).collect();
        csv.push_str(&format!(
            "{},{},{},{}\n",
            v.f_index,
            v.g_index,
            fv.join(" "),
            gv.join(" ")
        ));
    }
    emit(env.out.as_deref(), "determine-witnesses.csv", &csv)?;
    // a violation contradicts the theorem only for audited descent moduli
    if audits_pass && !report.violations.is_empty() {
        return Ok(Outcome::TheoremViolation);
    }
    Ok(Outcome::Clean)
}

fn simulate(env: &Env, function: &str, start: &str, horizon: f64) -> anyhow::Result<Outcome> {
    let spec = env.spec()?;
    let f = spec.function(function)?;
    let x = spec.space.require(start)?;
    let tr = markov::simulate_trajectory(&spec.generator, f, x, horizon, env.seed)?;
    println!(
        "{} jumps over horizon {horizon}, final state {}",
        tr.steps.len() - 1,
        spec.space.label(tr.final_state())
    );
    let mut csv = String::from("time,vertex\n");
    for (t, v) in &tr.steps {
        csv.push_str(&format!("{t},{}\n", spec.space.label(*v)));
    }
    emit(env.out.as_deref(), "trajectory.csv", &csv)?;
    let mut obj = env.base_report("simulate");
    obj.insert("function".into(), json!(function));
    obj.insert("start".into(), json!(start));
    obj.insert("horizon".into(), json!(horizon));
    obj.insert("jumps".into(), json!(tr.steps.len() - 1));
    obj.insert("final".into(), json!(spec.space.label(tr.final_state())));
    emit(env.out.as_deref(), "simulate.json", &to_pretty(&Value::Object(obj)))?;
    Ok(Outcome::Clean)
}

fn pif(env: &Env, function: &str, start: &str) -> anyhow::Result<Outcome> {
    let spec = env.spec()?;
    let f = spec.function(function)?;
    let x = spec.space.require(start)?;
    let law = markov::limit_distribution(&spec.generator, f, x)?;
    let minima = critical::minima_set(&spec.generator, f)?;
    let support = law.support();
    let contained = support.iter().all(|s| minima.contains(s));
    let mut law_map = Map::new();
    for v in 0..spec.space.len() {
        law_map.insert(spec.space.label(v).to_owned(), json!(rat_to_string(law.weight(v))));
    }
    println!(
        "limit law from {start}: support {{{}}} (inside order minima: {contained})",
        support.iter().map(|&s| spec.space.label(s)).collect::<Vec<_>>().join(", ")
    );
    let mut obj = env.base_report("pif");
    obj.insert("function".into(), json!(function));
    obj.insert("start".into(), json!(start));
    obj.insert("law".into(), Value::Object(law_map));
    obj.insert("support".into(), labels_json(&spec.space, &support));
    obj.insert("minima".into(), labels_json(&spec.space, &minima));
    obj.insert("support_in_minima".into(), json!(contained));
    emit(env.out.as_deref(), "pif.json", &to_pretty(&Value::Object(obj)))?;
    // support containment is a theorem; report its failure loudly
    if !contained {
        return Ok(Outcome::TheoremViolation);
    }
    Ok(Outcome::Clean)
}

fn classify_cmd(env: &Env) -> anyhow::Result<Outcome> {
    let spec = env.spec()?;
    let op = env.operator()?;
    let grid = env.grid()?;
    let outcome = classify::classify(&op, &grid, &AuditOptions::default())?;
    let mut obj = env.base_report("classify");
    match &outcome {
        ClassifyOutcome::Certified { system } => {
            println!("certified: the operator is critically equivalent to a steepest drop");
            let mut map = Map::new();
            for x in 0..spec.space.len() {
                map.insert(
                    spec.space.label(x).to_owned(),
                    labels_json(&spec.space, system.set(x)),
                );
            }
            obj.insert("outcome".into(), json!("certified"));
            obj.insert("neighborhoods".into(), Value::Object(map));
        }
        ClassifyOutcome::NotHomogeneous { witness } => {
            println!("not 1-homogeneous on the grid");
            obj.insert("outcome".into(), json!("not-homogeneous"));
            obj.insert("witness".into(), witness_json(&spec.space, witness));
        }
        ClassifyOutcome::HypothesisFails { extracted, vertices } => {
            let labels: Vec<&str> = vertices.iter().map(|&x| spec.space.label(x)).collect();
            println!("reconstruction hypothesis fails at {{{}}}", labels.join(", "));
            obj.insert("outcome".into(), json!("hypothesis-fails"));
            obj.insert("vertices".into(), labels_json(&spec.space, vertices));
            let mut map = Map::new();
            for x in 0..spec.space.len() {
                map.insert(
                    spec.space.label(x).to_owned(),
                    labels_json(&spec.space, &extracted.sets[x]),
                );
            }
            obj.insert("extracted".into(), Value::Object(map));
        }
        ClassifyOutcome::Mismatch { system, field } => {
            println!("reconstruction mismatch");
            obj.insert("outcome".into(), json!("mismatch"));
            obj.insert("counterexample".into(), field_json(field));
            let mut map = Map::new();
            for x in 0..spec.space.len() {
                map.insert(
                    spec.space.label(x).to_owned(),
                    labels_json(&spec.space, system.set(x)),
                );
            }
            obj.insert("extracted".into(), Value::Object(map));
        }
    }
    emit(env.out.as_deref(), "classify.json", &to_pretty(&Value::Object(obj)))?;
    Ok(Outcome::Clean)
}

fn zaxioms(env: &Env, extra_rset: &[String]) -> anyhow::Result<Outcome> {
    let spec = env.spec()?;
    let op = env.operator()?;
    let grid = env.grid()?;
    let mut opts = ZAxiomOptions::default().tuned_for(&op, &grid);
    if !extra_rset.is_empty() {
        let mut rset = Vec::new();
        for s in extra_rset {
            rset.push(parse_rat(s)?);
        }
        rset.extend(opts.rset);
        opts.rset = rset;
    }
    let cmap = CriticalMap::Operator(&op);
    let reports = classify::check_z_axioms(&cmap, &grid, &opts)?;
    for r in &reports {
        match &r.witness {
            None => println!("{:<4} holds-on-grid   ({} cases)", r.axiom.label(), r.cases),
            Some(w) => println!("{:<4} FAILS   ({})", r.axiom.label(), w.note),
        }
    }
    let mut obj = env.base_report("zaxioms");
    obj.insert(
        "reports".into(),
        Value::Array(reports.iter().map(|r| z_report_json(&spec.space, r)).collect()),
    );
    emit(env.out.as_deref(), "zaxioms.json", &to_pretty(&Value::Object(obj)))?;
    Ok(Outcome::Clean)
}

#[allow(clippy::too_many_arguments)]
fn dispersion_cmd(
    env: &Env,
    dim: usize,
    res: usize,
    function: &str,
    coef: Option<&str>,
    point: &str,
    p: f64,
    oriented: bool,
    sweep_start: Option<f64>,
    radii: usize,
) -> anyhow::Result<Outcome> {
    let domain = GridDomain::symmetric(dim, res)?;
    let field = packaged_field(domain.clone(), dim, function, coef)?;
    let x: Vec<f64> = point
        .split(',')
        .map(|s| s.trim().parse::<f64>().context("bad point coordinate"))
        .collect::<anyhow::Result<_>>()?;
    if x.len() != dim {
        bail!("point has {} coordinates for dimension {dim}", x.len());
    }
    let start = sweep_start.unwrap_or(0.5);
    let sweep = RadiusSweep::geometric(start, 0.5, radii)?
        .clamped(8.0 * domain.max_cell_size());
    let est = dispersion_limit(&field, &x, p, oriented, &sweep)?;
    println!(
        "dispersion estimate {} (tail spread {:.3}{}) at {:?}",
        est.value,
        est.tail_spread,
        if est.converged { "" } else { ", NOT converged" },
        x
    );
    // CSV: radius, value, and the successive-difference uncertainty proxy
    let mut csv = String::from("radius,value,uncertainty\n");
    let mut prev: Option<f64> = None;
    for &(r, v) in &est.by_radius {
        let unc = prev.map(|q: f64| (v - q).abs()).unwrap_or(0.0);
        csv.push_str(&format!("{r},{v},{unc}\n"));
        prev = Some(v);
    }
    emit(env.out.as_deref(), "dispersion.csv", &csv)?;
    let mut obj = env.base_report("dispersion");
    obj.insert("dim".into(), json!(dim));
    obj.insert("res".into(), json!(res));
    obj.insert("function".into(), json!(function));
    obj.insert("point".into(), json!(x));
    obj.insert("p".into(), json!(p));
    obj.insert("oriented".into(), json!(oriented));
    obj.insert("estimate".into(), json!(est.value));
    obj.insert("tail_spread".into(), json!(est.tail_spread));
    obj.insert("converged".into(), json!(est.converged));
    obj.insert(
        "by_radius".into(),
        Value::Array(est.by_radius.iter().map(|(r, v)| json!([r, v])).collect()),
    );
    emit(env.out.as_deref(), "dispersion.json", &to_pretty(&Value::Object(obj)))?;
    Ok(Outcome::Clean)
}

fn packaged_field(
    domain: GridDomain,
    dim: usize,
    function: &str,
    coef: Option<&str>,
) -> anyhow::Result<GridField> {
    match function {
        "x2" => Ok(GridField::sample_analytic(
            domain,
            |p| p.iter().map(|v| v * v).sum(),
            |p| p.iter().map(|v| 2.0 * v).collect(),
        )?),
        "negx2" => Ok(GridField::sample_analytic(
            domain,
            |p| -p.iter().map(|v| v * v).sum::<f64>(),
            |p| p.iter().map(|v| -2.0 * v).collect(),
        )?),
        "quad" => {
            if dim != 2 {
                bail!("quad profiles are 2-D");
            }
            let raw = coef.ok_or_else(|| anyhow!("quad needs --coef a,b,c,d,e"))?;
            let c: Vec<f64> = raw
                .split(',')
                .map(|s| s.trim().parse::<f64>().context("bad coefficient"))
                .collect::<anyhow::Result<_>>()?;
            if c.len() != 5 {
                bail!("--coef wants five numbers");
            }
            let q = gfield::quadratic2((c[0], c[1], c[2], c[3], c[4]));
            let (v, g) = (q.value.clone(), q.gradient.clone());
            Ok(GridField::sample_analytic(domain, move |p| v(p), move |p| g(p))?)
        }
        other => bail!("unknown packaged function {other:?} (try x2, negx2, quad)"),
    }
}

fn ball_identity(env: &Env, vector: &str, samples: u64) -> anyhow::Result<Outcome> {
    let v: Vec<f64> = vector
        .split(',')
        .map(|s| s.trim().parse::<f64>().context("bad vector component"))
        .collect::<anyhow::Result<_>>()?;
    let k = v.len();
    let estimate = mc_ball_identity(&v, k, samples, env.seed)?;
    let target: f64 = v.iter().map(|a| a * a).sum();
    println!("estimate {estimate} vs squared norm {target} ({samples} samples)");
    let mut obj = env.base_report("ball-identity");
    obj.insert("vector".into(), json!(v));
    obj.insert("k".into(), json!(k));
    obj.insert("samples".into(), json!(samples));
    obj.insert("estimate".into(), json!(estimate));
    obj.insert("target".into(), json!(target));
    emit(env.out.as_deref(), "ball-identity.json", &to_pretty(&Value::Object(obj)))?;
    Ok(Outcome::Clean)
}
