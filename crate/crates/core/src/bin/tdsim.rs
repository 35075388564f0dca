use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tdsim::analog::{ClockExtension, GaussianClock};
use tdsim::bench::checks::{evaluate_checks, CheckOutcome};
use tdsim::bench::config::{Family, OUT_DIR_ENV};
use tdsim::bench::fit::fit_all;
use tdsim::bench::studies::{
    analog_sweep, analog_time_independent_defect, audit_gate_counts, grover_n2, order_config,
    qdrift_bias_sweep, qdrift_sampling_sweep, DEFAULT_ORDER_GRID,
};
use tdsim::bench::{emit_all, run_benchmark, BenchConfig};
use tdsim::splitting::BaseScheme;
use tdsim::ProblemDescription;

#[derive(Parser)]
#[command(name = "tdsim", version, about = "Time-dependent Hamiltonian simulation benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a TOML benchmark config and write CSV/SVG output.
    Bench {
        config: PathBuf,
        /// Output directory; overrides the config and the TDSIM_OUT_DIR variable.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Fit convergence slopes of the product families on Grover n=2, T=40.
    VerifyOrder {
        #[arg(long, value_delimiter = ',', default_values = ["pointwise", "hdr", "iacs"])]
        families: Vec<String>,
        #[arg(long, value_delimiter = ',', default_values = ["FRS", "FRO", "Suz4", "Ost4"])]
        bases: Vec<BaseScheme>,
        #[arg(long, value_delimiter = ',')]
        n_grid: Option<Vec<usize>>,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        /// Problem description as JSON instead of Grover n=2.
        #[arg(long)]
        problem: Option<String>,
        /// Also write CSV and SVG under this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Compare built gate sequences with the closed-form counts.
    AuditGates,
    /// Single-step qDrift bias against its bound, and the trajectory sampling rate.
    QdriftBias {
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        /// Largest step is 2^-from_exp; keep dt·Σ|f| below one.
        #[arg(long, default_value_t = 6)]
        from_exp: i32,
        #[arg(long, default_value_t = 12)]
        to_exp: i32,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        seeds: u64,
    },
    /// Clock-width sweep of the smeared-clock state and its extrapolation.
    AnalogSweep {
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long, default_value_t = 0.025)]
        omega: f64,
        #[arg(long, default_value_t = 7)]
        halvings: i32,
        /// Continue schedules as constants outside the interval.
        #[arg(long)]
        constant_extension: bool,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "pointwise" => Ok(Family::Pointwise),
        "hdr" => Ok(Family::Hdr),
        "iacs" => Ok(Family::Iacs),
        other => Err(format!("verify-order supports pointwise, hdr, iacs; got {other}")),
    }
}

fn report(checks: &[CheckOutcome]) -> ExitCode {
    for c in checks {
        println!("{c}");
    }
    if checks.iter().all(|c| c.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn check(name: &str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed,
        detail,
    }
}

fn run(cli: Cli) -> tdsim::Result<ExitCode> {
    match cli.command {
        Command::Bench { config, out_dir } => {
            let cfg = BenchConfig::load(&config)?;
            if let Some(d) = out_dir {
                std::env::set_var(OUT_DIR_ENV, d);
            }
            let rep = run_benchmark(&cfg)?;
            for f in &rep.failures {
                eprintln!("failed: {} N={} seed={}: {}", f.series, f.n_steps, f.seed, f.message);
            }
            if !rep.records.is_empty() {
                for p in emit_all(&cfg, &rep)? {
                    println!("wrote {}", p.display());
                }
            }
            Ok(report(&evaluate_checks(&cfg, &rep)))
        }
        Command::VerifyOrder {
            families,
            bases,
            n_grid,
            seeds,
            problem,
            out_dir,
        } => {
            let families = families
                .iter()
                .map(|f| parse_family(f))
                .collect::<Result<Vec<_>, _>>()
                .map_err(tdsim::Error::InvalidArgument)?;
            let problem = match problem {
                Some(j) => ProblemDescription::from_json(&j)?,
                None => grover_n2(),
            };
            let grid = n_grid.unwrap_or_else(|| DEFAULT_ORDER_GRID.to_vec());
            let mut cfg = order_config(problem, &families, &bases, grid, (1..=seeds).collect());
            let rep = run_benchmark(&cfg)?;
            for r in &rep.records {
                println!("{:<20} N={:<5} gates={:<6} error={:.3e}", r.series, r.n_steps, r.gates, r.error);
            }
            if let Some(d) = out_dir {
                cfg.output.dir = d;
                cfg.output.csv = "verify-order.csv".into();
                cfg.output.svg = Some("verify-order.svg".into());
                for p in emit_all(&cfg, &rep)? {
                    println!("wrote {}", p.display());
                }
            }
            Ok(report(&evaluate_checks(&cfg, &rep)))
        }
        Command::AuditGates => {
            let rows = audit_gate_counts()?;
            println!("family     base    L  q  L'  expected  actual");
            for r in &rows {
                let lp = r.lambda_prime.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
                println!(
                    "{:<10} {:<7} {}  {}  {:<3} {:<9} {}{}",
                    r.family,
                    r.base,
                    r.n_terms,
                    r.q,
                    lp,
                    r.expected,
                    r.actual,
                    if r.matches() { "" } else { "  MISMATCH" }
                );
            }
            let bad = rows.iter().filter(|r| !r.matches()).count();
            Ok(report(&[check(
                "gate counts",
                bad == 0,
                format!("{} configurations, {bad} mismatches", rows.len()),
            )]))
        }
        Command::QdriftBias {
            t,
            from_exp,
            to_exp,
            steps,
            seeds,
        } => {
            let problem = grover_n2().build()?;
            let dts: Vec<f64> = (from_exp..=to_exp).map(|e| 2f64.powi(-e)).collect();
            let pts = qdrift_bias_sweep(&problem, t, &dts)?;
            println!("dt          error       bound");
            for p in &pts {
                println!("{:<11.4e} {:<11.4e} {:.4e}", p.dt, p.error, p.bound);
            }
            let fit = fit_all(&pts.iter().map(|p| (p.dt, p.error)).collect::<Vec<_>>())?;
            let over = pts.iter().filter(|p| p.error > p.bound).count();
            let samples: Vec<usize> = (0..6).map(|e| 64 << (2 * e)).collect();
            let seeds: Vec<u64> = (1..=seeds).collect();
            let mc = qdrift_sampling_sweep(&problem, steps, &samples, &seeds)?;
            println!("samples     distance");
            for (n, d) in &mc {
                println!("{n:<11} {d:.4e}");
            }
            let rate = -fit_all(&mc.iter().map(|&(n, d)| (n as f64, d)).collect::<Vec<_>>())?.slope;
            Ok(report(&[
                check(
                    "bias slope",
                    (1.7..=2.3).contains(&fit.slope),
                    format!("{:.3} (R² {:.4}), target [1.7, 2.3]", fit.slope, fit.r_squared),
                ),
                check("bias bound", over == 0, format!("{over} of {} points exceed the bound", pts.len())),
                check(
                    "sampling rate",
                    (0.35..=0.65).contains(&rate),
                    format!("{rate:.3}, target [0.35, 0.65]"),
                ),
            ]))
        }
        Command::AnalogSweep {
            t,
            omega,
            halvings,
            constant_extension,
        } => {
            let problem = grover_n2().build()?;
            let mut clock = GaussianClock::new(omega)?;
            if constant_extension {
                clock = clock.with_extension(ClockExtension::Constant);
            }
            let omegas: Vec<f64> = (0..halvings).map(|e| omega * 2f64.powi(-e)).collect();
            let pts = analog_sweep(&problem, t, &omegas, &clock)?;
            println!("omega       trace-dist  1-fidelity  obs-error   richardson");
            for p in &pts {
                println!(
                    "{:<11.4e} {:<11.4e} {:<11.4e} {:<11.4e} {:.4e}",
                    p.omega, p.trace_distance, p.infidelity, p.plain_error, p.richardson_error
                );
            }
            let slope = |f: fn(&tdsim::bench::studies::AnalogPoint) -> f64| {
                fit_all(&pts.iter().map(|p| (p.omega, f(p))).collect::<Vec<_>>()).map(|s| s.slope)
            };
            let td = slope(|p| p.trace_distance)?;
            let rich = slope(|p| p.richardson_error)?;
            let inf = slope(|p| p.infidelity)?;
            let defect = analog_time_independent_defect(&omegas, &clock)?;
            let nodes = clock.quadrature(clock.nodes)?;
            let wsum: f64 = nodes.iter().map(|p| p.1).sum();
            let var: f64 = nodes.iter().map(|p| p.1 * p.0 * p.0).sum::<f64>() / (omega * omega);
            Ok(report(&[
                check(
                    "quadrature",
                    (wsum - 1.0).abs() < 1e-12 && (var - 1.0).abs() < 1e-10,
                    format!("weight sum {wsum:.15}, normalized variance {var:.15}"),
                ),
                check(
                    "time-independent exactness",
                    defect < 1e-9,
                    format!("max trace distance {defect:.2e}"),
                ),
                check("infidelity slope", true, format!("{inf:.3} (reported)")),
                check(
                    "trace-distance slope",
                    (0.7..=1.3).contains(&td),
                    format!("{td:.3}, target [0.7, 1.3]"),
                ),
                check(
                    "richardson slope",
                    (1.6..=2.4).contains(&rich),
                    format!("{rich:.3}, target [1.6, 2.4]"),
                ),
            ]))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
