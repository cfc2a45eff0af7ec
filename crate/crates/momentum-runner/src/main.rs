//! CLI entry point. Exit codes: 0 all verifications passed, 1 verification
//! failed, 2 usage/config error, 3 numerical failure. Failures print one
//! machine-parseable line on stderr.

use momentum_runner::{analysis, compare, config::Config, error::RunnerError, experiment, telemetry};
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "usage: momentum-lab <command> [args] [flags]

commands:
  run-method <config>            discrete method run
  simulate-ode <config>          fixed-step RK4 flow run
  verify-lyapunov <config>       run + decay certification (exit 1 on failure)
  spectral <config>              per-mode eigenvalues on a diagonal quadratic
  certify-iqc <config>           closed-form matrix certificate
  compare <configA> <configB> --tol <t> [--metric x|f-gap]
  gradient-norm-bound <config>   convex-regime bound verdicts

flags:
  --out <path.csv>   write telemetry (atomic)
  --stride <n>       record every n-th step (default 1)
  --seed <n>         seed for synthetic data (default 0, echoed in CSV)
  --quiet            suppress the summary line on stdout
  --tol <t>          compare tolerance (required for compare)
  --metric <m>       compare metric: x (default) or f-gap";

struct Flags {
    out: Option<PathBuf>,
    stride: usize,
    seed: Option<u64>,
    quiet: bool,
    tol: Option<f64>,
    metric: compare::CompareMetric,
    positional: Vec<String>,
}

fn parse_flags(args: &[String]) -> Result<Flags, RunnerError> {
    let mut flags = Flags {
        out: None,
        stride: 1,
        seed: None,
        quiet: false,
        tol: None,
        metric: compare::CompareMetric::XSequence,
        positional: Vec::new(),
    };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let mut grab = |name: &str| -> Result<String, RunnerError> {
            it.next()
                .cloned()
                .ok_or_else(|| RunnerError::Usage(format!("flag {name} needs a value")))
        };
        match arg.as_str() {
            "--out" => flags.out = Some(PathBuf::from(grab("--out")?)),
            "--stride" => {
                flags.stride = grab("--stride")?
                    .parse()
                    .map_err(|e| RunnerError::Usage(format!("--stride: {e}")))?
            }
            "--seed" => {
                flags.seed = Some(
                    grab("--seed")?
                        .parse()
                        .map_err(|e| RunnerError::Usage(format!("--seed: {e}")))?,
                )
            }
            "--tol" => {
                flags.tol = Some(
                    grab("--tol")?
                        .parse()
                        .map_err(|e| RunnerError::Usage(format!("--tol: {e}")))?,
                )
            }
            "--metric" => {
                flags.metric = match grab("--metric")?.as_str() {
                    "x" => compare::CompareMetric::XSequence,
                    "f-gap" => compare::CompareMetric::FGap,
                    other => {
                        return Err(RunnerError::Usage(format!(
                            "--metric: unknown value {other:?} (expected x | f-gap)"
                        )))
                    }
                }
            }
            "--quiet" => flags.quiet = true,
            other if other.starts_with("--") => {
                return Err(RunnerError::Usage(format!("unknown flag {other}")))
            }
            other => flags.positional.push(other.to_string()),
        }
    }
    Ok(flags)
}

fn load_config(flags: &Flags, idx: usize) -> Result<Config, RunnerError> {
    let path = flags
        .positional
        .get(idx)
        .ok_or_else(|| RunnerError::Usage("missing config file argument".into()))?;
    let mut cfg = Config::parse_file(std::path::Path::new(path))?;
    // an explicit --seed overrides any config-level seed
    if let Some(seed) = flags.seed {
        cfg.set("seed", &seed.to_string());
    }
    Ok(cfg)
}

fn effective_seed(cfg: &Config, flags: &Flags) -> Result<u64, RunnerError> {
    let _ = flags;
    cfg.u64_or("seed", 0)
}

/// Ok(true) = verifications passed (or none requested); Ok(false) = a
/// verification ran and failed.
fn dispatch(command: &str, flags: &Flags) -> Result<bool, RunnerError> {
    match command {
        "run-method" | "simulate-ode" | "verify-lyapunov" => {
            let cfg = load_config(flags, 0)?;
            let seed = effective_seed(&cfg, flags)?;
            if command == "run-method" && cfg.get("flow").is_some() {
                return Err(RunnerError::Usage(
                    "run-method drives discrete methods; use simulate-ode for flows".into(),
                ));
            }
            if command == "simulate-ode" && cfg.get("flow").is_none() {
                return Err(RunnerError::Usage(
                    "simulate-ode needs a `flow = ...` config".into(),
                ));
            }
            let out = experiment::run(&cfg, flags.stride, seed)?;
            if let Some(path) = &flags.out {
                telemetry::write_csv(path, &out.records, out.seed)?;
            }
            let passed = out.verification.as_ref().is_none_or(|rep| rep.passed);
            if !flags.quiet {
                let last = out.records.last().expect("at least one record");
                match (&out.verification, &out.no_guarantee) {
                    (Some(rep), _) => println!(
                        "records={} final_f_gap={:.6e} verify={} fitted_rate={:.6e} worst_ratio={:.6e} theoretical={:.6e}",
                        out.records.len(),
                        last.f_gap,
                        if rep.passed { "pass" } else { "FAIL" },
                        rep.fitted_rate,
                        rep.worst_ratio,
                        rep.theoretical_rate,
                    ),
                    (None, Some(why)) => println!(
                        "records={} final_f_gap={:.6e} verify=no-guarantee ({why})",
                        out.records.len(),
                        last.f_gap,
                    ),
                    (None, None) => println!(
                        "records={} final_f_gap={:.6e} final_grad_norm_sq={:.6e}",
                        out.records.len(),
                        last.f_gap,
                        last.grad_norm_sq,
                    ),
                }
            }
            if command == "verify-lyapunov"
                && out.verification.is_none()
                && out.no_guarantee.is_none()
            {
                return Err(RunnerError::Usage(
                    "verify-lyapunov needs a `verify = ...` config".into(),
                ));
            }
            Ok(passed)
        }
        "spectral" => {
            let cfg = load_config(flags, 0)?;
            let out = analysis::spectral(&cfg)?;
            let csv = analysis::spectral_csv(&out);
            match &flags.out {
                Some(path) => {
                    let tmp = path.with_extension("csv.tmp");
                    std::fs::write(&tmp, &csv)?;
                    std::fs::rename(&tmp, path)?;
                }
                None => print!("{csv}"),
            }
            Ok(true)
        }
        "certify-iqc" => {
            let cfg = load_config(flags, 0)?;
            let cert = analysis::iqc(&cfg)?;
            if !flags.quiet {
                print!("{}", analysis::iqc_text(&cert));
            }
            Ok(cert.p_psd && cert.t_nsd)
        }
        "compare" => {
            let cfg_a = load_config(flags, 0)?;
            let cfg_b = load_config(flags, 1)?;
            let tol = flags
                .tol
                .ok_or_else(|| RunnerError::Usage("compare needs --tol <t>".into()))?;
            let seed = effective_seed(&cfg_a, flags)?;
            let rep = compare::compare(&cfg_a, &cfg_b, flags.metric, tol, flags.stride, seed)?;
            if !flags.quiet {
                println!(
                    "steps={} max_deviation={:.6e} worst_step={} tol={:.1e} {}",
                    rep.steps,
                    rep.max_deviation,
                    rep.worst_step,
                    rep.tol,
                    if rep.passed { "pass" } else { "FAIL" },
                );
            }
            Ok(rep.passed)
        }
        "gradient-norm-bound" => {
            let cfg = load_config(flags, 0)?;
            let seed = effective_seed(&cfg, flags)?;
            let rep = experiment::gradient_norm_bound(&cfg, seed)?;
            if !flags.quiet {
                println!(
                    "steps={} grad_bound={} (max ratio {:.4}) f_gap_bound={} (max ratio {:.4})",
                    rep.steps,
                    if rep.grad_bound_ok { "pass" } else { "FAIL" },
                    rep.worst_grad_ratio,
                    if rep.fgap_bound_ok { "pass" } else { "FAIL" },
                    rep.worst_fgap_ratio,
                );
            }
            Ok(rep.grad_bound_ok && rep.fgap_bound_ok)
        }
        other => Err(RunnerError::Usage(format!("unknown command {other:?}\n{USAGE}"))),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args[0] == "--help" || args[0] == "help" {
        println!("{USAGE}");
        return ExitCode::from(if args.is_empty() { 2 } else { 0 });
    }
    let command = args[0].clone();
    let flags = match parse_flags(&args[1..]) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("momentum-lab: error[usage]: {e}");
            return ExitCode::from(2);
        }
    };
    match dispatch(&command, &flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("momentum-lab: error[verification]: a requested verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            let kind = match e.exit_code() {
                3 => "numerical",
                _ => "config",
            };
            eprintln!("momentum-lab: error[{kind}]: {}", one_line(&e.to_string()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn one_line(s: &str) -> String {
    s.replace('\n', " | ")
}
