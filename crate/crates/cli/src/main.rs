mod output;
mod resolve;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use ewitness::acceptance::{
    ghz_windows_by_optimization, ghz_windows_closed, run_all, AcceptanceConfig,
};
use ewitness::analysis::{classify_mirror_family, detect, detect_pair, DecompConfig, MirrorFamily};
use ewitness::catalog::{self, alternative_ghz_witness, canonical_ghz_pair, ghz_state, two_measurement_ghz};
use ewitness::mirror::{compute_mu, mirror_of, mspa, spa, MirrorPair};
use ewitness::sepopt::{separable_bounds, SeesawConfig, SeparabilityModel};
use ewitness::Error;

use output::{emit, ratio, Format};

#[derive(Parser)]
#[command(name = "ewitness", version, about = "Mirrored entanglement witnesses")]
struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Random restarts per product-state optimization.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file with any of: seed, restarts, format, out.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List catalog witnesses and states, or dump one operator.
    Catalog {
        #[arg(long)]
        states: bool,
        /// Dump the full operator of one witness (or state with --states).
        #[arg(long)]
        show: Option<String>,
    },
    /// Separability windows of the three GHZ witnesses.
    Windows {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        /// Closed forms only.
        #[arg(long)]
        no_opt: bool,
    },
    /// GHZ expectation values of the three GHZ witnesses.
    Robustness {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Separable lower and upper bounds of a witness.
    Bounds {
        witness: String,
        #[arg(long, value_parser = parse_model)]
        model: Option<SeparabilityModel>,
    },
    /// Mirrored partner M = mu I - W.
    Mirror {
        witness: String,
        /// Use this mu instead of the optimized separable maximum.
        #[arg(long)]
        mu: Option<String>,
    },
    /// Structural physical approximations of W and -W.
    Spa { witness: String },
    /// Expectation of a witness on a state against its window.
    Detect {
        witness: String,
        state: String,
        #[arg(long)]
        mu: Option<String>,
    },
    /// Classify M = mu I - W along a witness family.
    Classify {
        /// choi-phi, class1 or class2.
        #[arg(long)]
        family: String,
        /// Comma-separated parameters (pi allowed, e.g. pi/3).
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value = "0")]
        from: String,
        #[arg(long, default_value = "2pi")]
        to: String,
        #[arg(long, default_value_t = 13)]
        steps: usize,
        /// Random PPT samples for the nondecomposability search.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Check a mirrored pair: example1, example2, ghz-alt:N, graph:SPEC, w3q:IJK, pair33, class1:T, class2:T.
    VerifyPair { case: String },
    /// Run the acceptance criteria.
    Selftest {
        #[arg(long)]
        quick: bool,
    },
}

fn parse_model(s: &str) -> Result<SeparabilityModel, String> {
    match s {
        "fully-product" | "product" => Ok(SeparabilityModel::FullyProduct),
        "biseparable" => Ok(SeparabilityModel::Biseparable),
        _ => Err(format!("unknown model {s:?} (fully-product or biseparable)")),
    }
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    restarts: Option<usize>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

struct RunConfig {
    seed: u64,
    restarts: usize,
    format: Format,
    out: Option<PathBuf>,
}

impl RunConfig {
    fn seesaw(&self) -> SeesawConfig {
        SeesawConfig::default()
            .with_seed(self.seed)
            .with_restarts(self.restarts)
    }
}

enum Failure {
    Usage(String),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Constraint(_)
            | Error::Dims(_)
            | Error::DimMismatch { .. }
            | Error::Graph(_)
            | Error::Pauli(_) => Failure::Usage(e.to_string()),
            other => Failure::Assertion(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Assertion(format!("i/o error: {e}"))
    }
}

type Outcome = Result<bool, Failure>;

fn real(s: &str) -> Result<f64, Failure> {
    Ok(resolve::parse_real(s)?)
}

fn pow2(n: usize) -> i64 {
    1i64 << n
}

fn cmd_catalog(states: bool, show: Option<String>, cfg: &RunConfig) -> Outcome {
    let v = match (states, show) {
        (false, Some(id)) => serde_json::to_value(resolve::witness(&id)?.witness).expect("serializable"),
        (true, Some(id)) => serde_json::to_value(resolve::state(&id)?).expect("serializable"),
        (false, None) => {
            let rows: Vec<Value> = catalog::default_witnesses()?
                .iter()
                .map(|w| {
                    json!({
                        "family": w.family,
                        "dims": format!("{:?}", w.dims().as_slice()),
                        "trace": w.op.trace_re(),
                        "lambda_min": w.op.min_eigenvalue(),
                        "model": format!("{:?}", w.model),
                        "params": serde_json::to_string(&w.params).expect("params"),
                    })
                })
                .collect();
            json!({ "ids": resolve::WITNESS_IDS, "rows": rows })
        }
        (true, None) => {
            let rows: Vec<Value> = catalog::default_states()?
                .iter()
                .map(|s| {
                    json!({
                        "family": s.family,
                        "dims": format!("{:?}", s.op.dims().as_slice()),
                        "ppt": ewitness::analysis::is_ppt_all(&s.op).unwrap_or(false),
                        "params": serde_json::to_string(&s.params).expect("params"),
                    })
                })
                .collect();
            json!({ "ids": resolve::STATE_IDS, "rows": rows })
        }
    };
    emit(&v, cfg.format, cfg.out.as_deref())?;
    Ok(true)
}

fn check_range(lo: usize, hi: usize, min: usize, max: usize) -> Result<(), Failure> {
    if lo < min || hi > max || lo > hi {
        return Err(Failure::Usage(format!("n range must satisfy {min} <= n-min <= n-max <= {max}")));
    }
    Ok(())
}

fn cmd_windows(n_min: usize, n_max: usize, no_opt: bool, cfg: &RunConfig) -> Outcome {
    check_range(n_min, n_max, 2, 6)?;
    let sc = cfg.seesaw();
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let d = pow2(n) - 2;
        let closed = ghz_windows_closed(n);
        let mut row = json!({
            "n": n,
            "mu_c": ratio(1, d),
            "mu_2m": ratio(3, 2 * d),
            "mu_a": ratio(2, pow2(n)),
            "mu_c_float": closed[0],
            "mu_2m_float": closed[1],
            "mu_a_float": closed[2],
        });
        if !no_opt {
            let opt = ghz_windows_by_optimization(n, &sc)?;
            let obj = row.as_object_mut().expect("object");
            for (k, name) in ["c", "2m", "a"].iter().enumerate() {
                obj.insert(format!("opt_mu_{name}"), json!(opt[k]));
                obj.insert(format!("delta_{name}"), json!(opt[k] - closed[k]));
            }
        }
        rows.push(row);
    }
    emit(&json!({ "seed": cfg.seed, "restarts": cfg.restarts, "rows": rows }), cfg.format, cfg.out.as_deref())?;
    Ok(true)
}

fn cmd_robustness(n_min: usize, n_max: usize, cfg: &RunConfig) -> Outcome {
    check_range(n_min, n_max, 2, 6)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for n in n_min..=n_max {
        let ghz = ghz_state(n)?.op;
        let d = pow2(n) - 2;
        let exact = [
            -1.0 / d as f64,
            -1.0 / ((n as f64 - 1.0) * pow2(n) as f64),
            -1.0 / (2.0 * d as f64),
        ];
        let traced = [
            canonical_ghz_pair(n)?.w.op.expect(&ghz),
            alternative_ghz_witness(n)?.w.op.expect(&ghz),
            two_measurement_ghz(n)?.w.op.expect(&ghz),
        ];
        let delta = exact
            .iter()
            .zip(&traced)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ok &= delta <= 1e-12;
        rows.push(json!({
            "n": n,
            "w_c": ratio(-1, d),
            "w_a": ratio(-1, (n as i64 - 1) * pow2(n)),
            "w_2m": ratio(-1, 2 * d),
            "w_c_trace": traced[0],
            "w_a_trace": traced[1],
            "w_2m_trace": traced[2],
            "max_delta": delta,
        }));
    }
    emit(&json!({ "rows": rows }), cfg.format, cfg.out.as_deref())?;
    Ok(ok)
}

fn cmd_bounds(id: &str, model: Option<SeparabilityModel>, cfg: &RunConfig) -> Outcome {
    let r = resolve::witness(id)?;
    let model = model.unwrap_or(r.witness.model);
    let rep = separable_bounds(&r.witness.op, &cfg.seesaw().with_model(model))?;
    let (lmin, lmax) = r.witness.op.eig_extremes()?;
    let v = json!({
        "witness": id,
        "lower": rep.lower,
        "upper": rep.upper,
        "lambda_min": lmin,
        "lambda_max": lmax,
        "model": rep.model,
        "seed": rep.seed,
        "restarts_used": rep.restarts_used,
        "converged_basins": rep.converged_basins,
        "monotone": rep.monotone,
        "arg_lower": rep.arg_lower,
        "arg_upper": rep.arg_upper,
    });
    emit(&v, cfg.format, cfg.out.as_deref())?;
    Ok(true)
}

fn cmd_mirror(id: &str, mu: Option<String>, cfg: &RunConfig) -> Outcome {
    let r = resolve::witness(id)?;
    let sc = cfg.seesaw();
    let mu = match mu {
        Some(s) => real(&s)?,
        None => compute_mu(&r.witness, &sc)?,
    };
    match mirror_of(&r.witness, mu, &sc) {
        Ok(p) => {
            let v = json!({
                "witness": id,
                "mu": p.mu,
                "class": p.class,
                "lambda_min_m": p.m.min_eigenvalue(),
                "window": p.window(),
            });
            emit(&v, cfg.format, cfg.out.as_deref())?;
            Ok(true)
        }
        Err(Error::NotBlockPositive { value, state }) => {
            let v = json!({
                "witness": id,
                "mu": mu,
                "error": "mu I - W is not block-positive",
                "separable_minimum": value,
                "counterexample": state,
            });
            emit(&v, cfg.format, cfg.out.as_deref())?;
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_spa(id: &str, cfg: &RunConfig) -> Outcome {
    let w = resolve::witness(id)?.witness;
    let (s, p) = spa(&w.op)?;
    let (m, q) = mspa(&w.op)?;
    let v = json!({
        "witness": id,
        "p": p,
        "spa_lambda_min": s.min_eigenvalue(),
        "q": q,
        "mspa_lambda_min": m.min_eigenvalue(),
    });
    emit(&v, cfg.format, cfg.out.as_deref())?;
    Ok(true)
}

fn cmd_detect(wid: &str, sid: &str, mu: Option<String>, cfg: &RunConfig) -> Outcome {
    let r = resolve::witness(wid)?;
    let rho = resolve::state(sid)?;
    let pair = match mu {
        Some(s) => Some(MirrorPair::canonical(r.witness.clone(), real(&s)?)),
        None => r.pair,
    };
    let verdict = match &pair {
        Some(p) => detect_pair(p, &rho)?,
        None => detect(&r.witness, &rho)?,
    };
    let v = json!({
        "witness": wid,
        "state": sid,
        "value": verdict.value,
        "mu": pair.as_ref().map(|p| p.mu),
        "bound_violated": verdict.bound_violated,
        "detected": verdict.detected(),
    });
    emit(&v, cfg.format, cfg.out.as_deref())?;
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_classify(
    family: &str,
    params: Option<String>,
    from: &str,
    to: &str,
    steps: usize,
    samples: usize,
    cfg: &RunConfig,
) -> Outcome {
    let fam = MirrorFamily::from_str(family)?;
    let ps: Vec<f64> = match params {
        Some(list) => list.split(',').map(real).collect::<Result<_, _>>()?,
        None => {
            if steps < 2 {
                return Err(Failure::Usage("--steps must be at least 2".into()));
            }
            let (a, b) = (real(from)?, real(to)?);
            (0..steps)
                .map(|k| a + (b - a) * k as f64 / (steps - 1) as f64)
                .collect()
        }
    };
    let dc = DecompConfig {
        samples,
        seed: cfg.seed,
        ..DecompConfig::default()
    };
    let rows = classify_mirror_family(fam, &ps, &cfg.seesaw(), &dc)?;
    let v = json!({ "family": fam, "rows": rows });
    emit(&v, cfg.format, cfg.out.as_deref())?;
    Ok(true)
}

fn cmd_verify(case: &str, cfg: &RunConfig) -> Outcome {
    let checks = verify::verify(case, &cfg.seesaw())?;
    let ok = checks.iter().all(|c| c.passed);
    emit(&json!({ "case": case, "passed": ok, "checks": checks }), cfg.format, cfg.out.as_deref())?;
    Ok(ok)
}

fn cmd_selftest(quick: bool, cfg: &RunConfig) -> Outcome {
    let ac = AcceptanceConfig {
        seed: cfg.seed,
        restarts: cfg.restarts,
        quick,
    };
    let outcomes = run_all(&ac)?;
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let ok = outcomes.iter().all(|o| o.passed);
    let v = json!({
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "quick": quick,
        "passed": ok,
        "criteria": outcomes,
    });
    emit(&v, cfg.format, cfg.out.as_deref())?;
    Ok(ok)
}

fn run(cli: Cli) -> Outcome {
    let file: FileConfig = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("config {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("config {}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    let cfg = RunConfig {
        seed: cli.seed.or(file.seed).unwrap_or(42),
        restarts: cli.restarts.or(file.restarts).unwrap_or(64),
        format: cli.format.or(file.format).unwrap_or(Format::Json),
        out: cli.out.or(file.out),
    };
    if cfg.restarts == 0 {
        return Err(Failure::Usage("--restarts must be positive".into()));
    }
    match cli.cmd {
        Cmd::Catalog { states, show } => cmd_catalog(states, show, &cfg),
        Cmd::Windows { n_min, n_max, no_opt } => cmd_windows(n_min, n_max, no_opt, &cfg),
        Cmd::Robustness { n_min, n_max } => cmd_robustness(n_min, n_max, &cfg),
        Cmd::Bounds { witness, model } => cmd_bounds(&witness, model, &cfg),
        Cmd::Mirror { witness, mu } => cmd_mirror(&witness, mu, &cfg),
        Cmd::Spa { witness } => cmd_spa(&witness, &cfg),
        Cmd::Detect { witness, state, mu } => cmd_detect(&witness, &state, mu, &cfg),
        Cmd::Classify {
            family,
            params,
            from,
            to,
            steps,
            samples,
        } => cmd_classify(&family, params, &from, &to, steps, samples, &cfg),
        Cmd::VerifyPair { case } => cmd_verify(&case, &cfg),
        Cmd::Selftest { quick } => cmd_selftest(quick, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Assertion(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}
