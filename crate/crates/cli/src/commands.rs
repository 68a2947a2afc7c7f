use std::io::{self, Write};

use charvar::algebra::{
    classify_gpm_sector, classify_real_point, fourholed_residual, fourholed_term_scale, fricke_component_label,
    kappa, twoholed_residuals, twoholed_term_scales, Sector,
};
use charvar::dynamics::{
    classify_level_set_regime, expected_probabilities, gpm_sector_regime, histogram_statistics, integer_orbit, random_su2_point,
    random_walk_orbit, seed_agreement, wandering_membership, HistogramSpec, MoveSampler, OrbitConfig, OrbitReport,
    Traversal,
};
use charvar::{BoundaryData, Error, SurfaceModel, TracePoint};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{
    CheckArgs, ClassifyArgs, Command, EnumerateArgs, Format, HistogramArgs, OrbitArgs, RegimeArgs, TraversalArg,
};
use crate::output::{num, object, put_scalar, put_scalars, Emitter};
use crate::parse::{parse_ints, parse_list};
use crate::suites::{Suite, SuiteResult, ORACLE_SUITES, POISSON_SUITES};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_FAILURE: u8 = 2;

/// Points per suite when `--points` is absent.
pub const DEFAULT_CHECK_POINTS: usize = 1000;
/// Agreement threshold between seeds, in Monte Carlo standard errors.
pub const SEED_AGREEMENT_FACTOR: f64 = 2.0;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

type Outcome = Result<u8, CliError>;

/// Runs a parsed command, writing records to `out`, and returns the exit code.
pub fn run<W: Write>(command: &Command, out: W) -> u8 {
    let mut em = Emitter::new(out);
    let result = dispatch(command, &mut em);
    let flushed = em.flush();
    match (result, flushed) {
        (Ok(code), Ok(())) => code,
        (Err(CliError::Usage(msg)), _) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        (Err(CliError::Io(e)), _) | (Ok(_), Err(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch<W: Write>(command: &Command, em: &mut Emitter<W>) -> Outcome {
    let common = command.common();
    if common.format == Format::Csv && !matches!(command, Command::Histogram(_)) {
        return Err(usage("csv output is only available for histogram"));
    }
    if common.workers == 0 {
        return Err(usage("--workers must be at least 1"));
    }
    match command {
        Command::Classify(a) => classify(a, em),
        Command::Regime(a) => regime(a, em),
        Command::Orbit(a) => orbit(a, em),
        Command::Enumerate(a) => enumerate(a, em),
        Command::PoissonCheck(a) => check(command, a, &POISSON_SUITES, em),
        Command::OracleCheck(a) => check(command, a, &ORACLE_SUITES, em),
        Command::Histogram(a) => histogram(a, em),
    }
}

fn header_value(command: &Command, flags: &impl Serialize) -> Value {
    json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command.name(),
        "resolved_flags": flags,
        "seed": command.common().seed,
    })
}

fn header<W: Write>(em: &mut Emitter<W>, command: &Command, flags: &impl Serialize) -> io::Result<()> {
    em.record("header", header_value(command, flags))
}

fn require_seed(seed: Option<u64>) -> Result<u64, CliError> {
    seed.ok_or_else(|| usage("--seed is required for this command"))
}

/// Per-task seeds drawn in order from a generator seeded with `master`.
pub fn task_seeds(master: u64, n: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..n).map(|_| rng.gen()).collect()
}

/// Maps `f` over task indices on `workers` threads, keeping index order.
fn par_tasks<T: Send>(workers: usize, n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(usage)?;
    Ok(pool.install(|| (0..n).into_par_iter().map(f).collect()))
}

fn model_arg(slug: &str) -> Result<SurfaceModel, CliError> {
    SurfaceModel::from_slug(slug).ok_or_else(|| {
        let known: Vec<&str> = SurfaceModel::ALL.iter().map(|m| m.slug()).collect();
        usage(format!("unknown model {slug:?}; expected one of {}", known.join(", ")))
    })
}

fn boundary_arg(model: SurfaceModel, s: Option<&str>) -> Result<Option<BoundaryData>, CliError> {
    s.map(|s| BoundaryData::new(model, parse_list(s).map_err(usage)?).map_err(usage)).transpose()
}

fn sector_arg(s: Option<&str>) -> Result<Option<Sector>, CliError> {
    s.map(|s| {
        Sector::from_label(s)
            .filter(|x| *x != Sector::Invalid)
            .ok_or_else(|| usage(format!("unknown sector {s:?}; expected RRR, R_iR_iR, iR_R_iR or iR_iR_R")))
    })
    .transpose()
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn classify<W: Write>(a: &ClassifyArgs, em: &mut Emitter<W>) -> Outcome {
    let model = model_arg(&a.model)?;
    let p = TracePoint::new(model, parse_list(&a.point).map_err(usage)?).map_err(usage)?;
    let bd = boundary_arg(model, a.boundary.as_deref())?;
    let sector = sector_arg(a.sector.as_deref())?;
    if sector.is_some() && model != SurfaceModel::OneHoledTorus {
        return Err(usage("--sector applies to the one-holed torus only"));
    }
    let needs_boundary = matches!(model, SurfaceModel::FourHoledSphere | SurfaceModel::TwoHoledTorus);
    if needs_boundary && bd.is_none() {
        return Err(usage(format!("{model} needs --boundary")));
    }
    if !needs_boundary && bd.is_some() {
        return Err(usage(format!("{model} takes no --boundary")));
    }
    header(em, &Command::Classify(a.clone()), a)?;

    let mut m = Map::new();
    m.insert("model".into(), Value::from(model.slug()));
    put_scalars(&mut m, "point", &p.values);
    match model {
        SurfaceModel::OneHoledTorus => {
            let k = kappa(&p).map_err(usage)?;
            put_scalar(&mut m, "kappa", k);
            m.insert("real".into(), Value::from(p.is_real()));
            m.insert("class".into(), to_value(&classify_real_point(&p).map_err(usage)?));
            if p.is_real() {
                m.insert("regime".into(), to_value(&classify_level_set_regime(k.re)));
                m.insert("wandering".into(), Value::from(wandering_membership(&p).map_err(usage)?));
                let label = fricke_component_label(&p).ok().map(|s| s.iter().map(|x| to_value(x).as_str().unwrap_or("").to_string()).collect::<String>());
                m.insert("fricke_label".into(), to_value(&label));
            }
            if let Some(s) = sector {
                let tags = s.tags().expect("valid sectors have tags").to_vec();
                let reading = classify_gpm_sector(&p.clone().with_sector_unchecked(tags)).map_err(usage)?;
                m.insert("sector".into(), Value::from(reading.sector.label()));
                if Sector::MIXED.contains(&reading.sector) {
                    let r = gpm_sector_regime(reading.sector, reading.kappa.re).map_err(usage)?;
                    m.insert("sector_regime".into(), to_value(&r));
                }
            }
        }
        SurfaceModel::FourHoledSphere => {
            let bd = bd.expect("checked above");
            put_scalars(&mut m, "boundary", &bd.traces);
            let r = fourholed_residual(&p, &bd).map_err(usage)?;
            put_scalar(&mut m, "residual", r);
            m.insert("relative_residual".into(), num(r.norm() / fourholed_term_scale(&p, &bd).max(1.0)));
        }
        SurfaceModel::TwoHoledTorus => {
            let bd = bd.expect("checked above");
            put_scalars(&mut m, "boundary", &bd.traces);
            let (e1, e2) = twoholed_residuals(&p, &bd).map_err(usage)?;
            let (s1, s2) = twoholed_term_scales(&p, &bd);
            put_scalars(&mut m, "residuals", &[e1, e2]);
            m.insert(
                "relative_residual".into(),
                num((e1.norm() / s1.max(1.0)).max(e2.norm() / s2.max(1.0))),
            );
        }
        SurfaceModel::ThreeHoledSphere => {
            m.insert("leaf".into(), Value::from("point"));
        }
    }
    em.record("classification", Value::Object(m))?;
    Ok(EXIT_OK)
}

fn regime<W: Write>(a: &RegimeArgs, em: &mut Emitter<W>) -> Outcome {
    if !a.t.is_finite() {
        return Err(usage("--t must be finite"));
    }
    let sector = sector_arg(a.sector.as_deref())?;
    let r = match sector {
        Some(s) => gpm_sector_regime(s, a.t).map_err(usage)?,
        None => classify_level_set_regime(a.t),
    };
    header(em, &Command::Regime(a.clone()), a)?;
    let mut m = object(to_value(&r));
    m.insert("sector".into(), to_value(&sector.map(Sector::label)));
    em.record("regime", Value::Object(m))?;
    Ok(EXIT_OK)
}

fn sampler(extended: bool) -> MoveSampler {
    if extended {
        MoveSampler::Extended
    } else {
        MoveSampler::Twists
    }
}

fn drift_record(task: usize, e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("task".into(), Value::from(task));
    m.insert("message".into(), Value::from(e.to_string()));
    if let Error::NumericalDrift { step, drift, tolerance } = e {
        m.insert("kind".into(), Value::from("numerical_drift"));
        m.insert("step".into(), Value::from(*step));
        m.insert("drift".into(), num(*drift));
        m.insert("tolerance".into(), num(*tolerance));
    } else {
        m.insert("kind".into(), Value::from("error"));
    }
    Value::Object(m)
}

fn orbit_record(task: usize, start_index: usize, run: u32, r: &OrbitReport) -> Value {
    let mut m = Map::new();
    m.insert("task".into(), Value::from(task));
    m.insert("start_index".into(), Value::from(start_index));
    m.insert("run".into(), Value::from(run));
    m.insert("seed".into(), Value::from(r.seed));
    m.insert("model".into(), Value::from(r.model.slug()));
    put_scalars(&mut m, "start", &r.start.values);
    m.insert("steps".into(), Value::from(r.steps));
    m.insert("extended_group".into(), Value::from(r.extended_group));
    put_scalar(&mut m, "kappa0", r.kappa0);
    m.insert("kappa_drift".into(), num(r.kappa_drift));
    m.insert("kappa_drift_abs".into(), num(r.kappa_drift_abs));
    m.insert("escaped_steps".into(), Value::from(r.escaped_steps));
    m.insert("escaped_samples".into(), Value::from(r.escaped_samples));
    m.insert("classification_counts".into(), to_value(&r.classification_counts));
    m.insert("classification_constant".into(), Value::from(r.classification_constant));
    m.insert("recurrence_hits".into(), Value::from(r.recurrence_hits));
    m.insert("recurrence_stat".into(), num(r.recurrence_stat));
    m.insert("epsilon".into(), num(r.epsilon));
    m.insert("max_word_length".into(), Value::from(r.max_word_length));
    m.insert("final_word_length".into(), Value::from(r.final_word_length));
    if r.model == SurfaceModel::OneHoledTorus && r.kappa0.im == 0.0 {
        m.insert("regime".into(), to_value(&classify_level_set_regime(r.kappa0.re).tag));
    }
    Value::Object(m)
}

fn orbit<W: Write>(a: &OrbitArgs, em: &mut Emitter<W>) -> Outcome {
    let seed = require_seed(a.common.seed)?;
    let model = model_arg(&a.model)?;
    if !matches!(model, SurfaceModel::OneHoledTorus | SurfaceModel::FourHoledSphere) {
        return Err(usage(format!("orbits are available for one-holed-torus and four-holed-sphere, not {model}")));
    }
    let boundary = boundary_arg(model, a.boundary.as_deref())?;
    if model == SurfaceModel::FourHoledSphere && boundary.is_none() {
        return Err(usage("four-holed-sphere orbits need --boundary"));
    }
    let starts = a
        .start
        .iter()
        .map(|s| TracePoint::new(model, parse_list(s).map_err(usage)?).map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    if a.runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    let mut base = OrbitConfig::new(0, a.steps);
    base.move_sampler = sampler(a.extended);
    base.record_every = a.record_every;
    base.tolerance = a.tolerance;
    base.epsilon = a.epsilon;
    base.escape_radius = a.escape_radius;
    base.boundary = boundary;
    base.validate().map_err(usage)?;

    header(em, &Command::Orbit(a.clone()), a)?;
    let runs = a.runs as usize;
    let n = starts.len() * runs;
    let seeds = task_seeds(seed, n);
    let results = par_tasks(a.common.workers, n, |task| {
        let mut cfg = base.clone();
        cfg.seed = seeds[task];
        random_walk_orbit(&starts[task / runs], &cfg)
    })?;

    let mut code = EXIT_OK;
    for (task, result) in results.iter().enumerate() {
        match result {
            Ok(r) => {
                em.record("orbit", orbit_record(task, task / runs, (task % runs) as u32, r))?;
                if a.emit_samples {
                    for (i, s) in r.samples.iter().enumerate() {
                        let mut m = Map::new();
                        m.insert("task".into(), Value::from(task));
                        m.insert("index".into(), Value::from(i));
                        put_scalars(&mut m, "point", &s.values);
                        em.record("sample", Value::Object(m))?;
                    }
                }
            }
            Err(e @ Error::NumericalDrift { .. }) => {
                em.record("abort", drift_record(task, e))?;
                code = EXIT_FAILURE;
            }
            Err(e) => return Err(usage(e)),
        }
    }
    Ok(code)
}

fn i64_of(v: &BigInt) -> Value {
    i64::try_from(v).map_or_else(|_| Value::from(v.to_string()), Value::from)
}

fn triple_value(t: &[BigInt; 3]) -> Value {
    Value::Array(t.iter().map(i64_of).collect())
}

fn enumerate<W: Write>(a: &EnumerateArgs, em: &mut Emitter<W>) -> Outcome {
    let start = parse_ints(&a.start).map_err(usage)?;
    let start: [i64; 3] = start.try_into().map_err(|v: Vec<i64>| usage(format!("expected 3 integers, got {}", v.len())))?;
    if a.bound < 0 {
        return Err(usage("--bound must be non-negative"));
    }
    let traversal = match a.traversal {
        TraversalArg::Bfs => Traversal::BreadthFirst,
        TraversalArg::Dfs => Traversal::DepthFirst,
    };
    let start = start.map(BigInt::from);
    let census = match integer_orbit(&start, &BigInt::from(a.bound), traversal, a.max_states) {
        Ok(c) => c,
        Err(Error::BoundOverflow { limit }) => {
            header(em, &Command::Enumerate(a.clone()), a)?;
            em.record(
                "abort",
                json!({"kind": "state_limit", "limit": limit, "message": format!("more than {limit} states within bound")}),
            )?;
            return Ok(EXIT_FAILURE);
        }
        Err(e) => return Err(usage(e)),
    };
    header(em, &Command::Enumerate(a.clone()), a)?;
    em.record(
        "census",
        json!({
            "start": triple_value(&census.start),
            "bound": i64_of(&census.bound),
            "kappa": i64_of(&census.kappa),
            "raw_count": census.raw.len(),
            "canonical_count": census.canonical.len(),
        }),
    )?;
    for c in &census.canonical {
        em.record("canonical", json!({"abs_sorted": triple_value(&c.abs_sorted), "sign": to_value(&c.sign)}))?;
    }
    if a.raw {
        for t in &census.raw {
            em.record("triple", json!({"triple": triple_value(t)}))?;
        }
    }
    Ok(EXIT_OK)
}

fn check<W: Write>(command: &Command, a: &CheckArgs, suites: &[Suite], em: &mut Emitter<W>) -> Outcome {
    let seed = require_seed(a.common.seed)?;
    let points = a.points.unwrap_or(DEFAULT_CHECK_POINTS);
    if points == 0 {
        return Err(usage("--points must be positive"));
    }
    header(em, command, a)?;
    let seeds = task_seeds(seed, suites.len());
    let results: Vec<SuiteResult> = par_tasks(a.common.workers, suites.len(), |i| suites[i](seeds[i], points))?;
    let mut failed = 0;
    let mut failures = 0;
    for r in &results {
        let mut m = object(to_value(r));
        m.insert("max_residual".into(), num(r.max_residual));
        m.insert("passed".into(), Value::from(r.passed()));
        em.record("check", Value::Object(m))?;
        failures += r.failures;
        failed += usize::from(!r.passed());
    }
    em.record(
        "summary",
        json!({"suites": results.len(), "failed_suites": failed, "failures": failures, "passed": failed == 0}),
    )?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

struct HistogramRun {
    start: TracePoint,
    report: Result<OrbitReport, Error>,
}

fn histogram<W: Write>(a: &HistogramArgs, em: &mut Emitter<W>) -> Outcome {
    let seed = require_seed(a.common.seed)?;
    if a.runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    if !(a.min_expected >= 0.0) {
        return Err(usage("--min-expected must be non-negative"));
    }
    let spec = HistogramSpec::su2_box(a.t, a.bins).map_err(usage)?;
    let mut base = OrbitConfig::new(0, a.steps);
    base.move_sampler = sampler(a.extended);
    base.record_every = a.steps.max(1);
    base.tolerance = a.tolerance;
    base.histogram = Some(spec.clone());
    base.validate().map_err(usage)?;

    let csv = a.common.format == Format::Csv;
    let head = header_value(&Command::Histogram(a.clone()), a);
    if csv {
        em.line(&format!("# {}", head_line(head)))?;
    } else {
        em.record("header", head)?;
    }

    let n = a.runs as usize;
    let seeds = task_seeds(seed, n);
    let runs = par_tasks(a.common.workers, n, |task| {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds[task]);
        let start = random_su2_point(&mut rng, a.t).expect("level checked by the histogram box");
        let mut cfg = base.clone();
        cfg.seed = rng.gen();
        let report = random_walk_orbit(&start, &cfg);
        HistogramRun { start, report }
    })?;

    if csv {
        em.line("run,i,j,x_lo,x_hi,y_lo,y_hi,count,expected")?;
    }
    let mut code = EXIT_OK;
    for (task, run) in runs.iter().enumerate() {
        let r = match &run.report {
            Ok(r) => r,
            Err(e @ Error::NumericalDrift { .. }) => {
                let rec = drift_record(task, e);
                if csv {
                    em.line(&format!("# abort {rec}"))?;
                } else {
                    em.record("abort", rec)?;
                }
                code = EXIT_FAILURE;
                continue;
            }
            Err(e) => return Err(usage(e)),
        };
        let h = r.bins.as_ref().expect("histogram configured");
        let stats = histogram_statistics(h, a.t, a.min_expected).map_err(usage)?;
        let probs = expected_probabilities(a.t, &spec).map_err(usage)?;
        let mut m = object(to_value(&stats));
        m.insert("run".into(), Value::from(task));
        m.insert("seed".into(), Value::from(r.seed));
        put_scalars(&mut m, "start", &run.start.values);
        m.insert("steps".into(), Value::from(r.steps));
        m.insert("extended_group".into(), Value::from(r.extended_group));
        m.insert("kappa_drift".into(), num(r.kappa_drift));
        m.insert("chi_square".into(), num(stats.chi_square));
        m.insert("max_relative_deviation".into(), num(stats.max_relative_deviation));
        if csv {
            em.line(&format!("# equidistribution {}", Value::Object(m)))?;
        } else {
            em.record("equidistribution", Value::Object(m))?;
        }
        let width = [(spec.hi[0] - spec.lo[0]) / spec.bins as f64, (spec.hi[1] - spec.lo[1]) / spec.bins as f64];
        for i in 0..spec.bins {
            for j in 0..spec.bins {
                let c = i * spec.bins + j;
                let (x_lo, y_lo) = (spec.lo[0] + i as f64 * width[0], spec.lo[1] + j as f64 * width[1]);
                let (x_hi, y_hi) = (x_lo + width[0], y_lo + width[1]);
                let expected = probs[c] * h.total as f64;
                if csv {
                    em.line(&format!("{task},{i},{j},{x_lo},{x_hi},{y_lo},{y_hi},{},{expected}", h.counts[c]))?;
                } else {
                    em.record(
                        "bin",
                        json!({"run": task, "i": i, "j": j, "x_lo": x_lo, "x_hi": x_hi, "y_lo": y_lo, "y_hi": y_hi,
                               "count": h.counts[c], "expected": num(expected)}),
                    )?;
                }
            }
        }
    }
    for pair in runs.windows(2).enumerate() {
        let (k, [x, y]) = pair else { continue };
        let (Ok(rx), Ok(ry)) = (&x.report, &y.report) else { continue };
        let (hx, hy) = (rx.bins.as_ref().expect("histogram"), ry.bins.as_ref().expect("histogram"));
        let rec = match seed_agreement(hx, hy, a.t, a.min_expected, SEED_AGREEMENT_FACTOR) {
            Ok(s) => {
                let mut m = object(to_value(&s));
                m.insert("rms_z".into(), num(s.rms_z));
                m.insert("max_abs_z".into(), num(s.max_abs_z));
                m
            }
            Err(e) => object(json!({"agree": Value::Null, "message": e.to_string()})),
        };
        let mut rec = rec;
        rec.insert("runs".into(), json!([k, k + 1]));
        if csv {
            em.line(&format!("# seed_agreement {}", Value::Object(rec)))?;
        } else {
            em.record("seed_agreement", Value::Object(rec))?;
        }
    }
    Ok(code)
}

fn head_line(head: Value) -> Value {
    let mut m = object(head);
    m.insert("record_type".into(), Value::from("header"));
    Value::Object(m)
}
