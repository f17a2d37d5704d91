use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use photon_transfer::scenarios::{
    describe, load_config, run_baseline_sweep, run_scenario, write_results, write_sweep, Config, PRESET_NAMES,
};
use photon_transfer::spectrum::build_spectrum;
use photon_transfer::tls::{calibrate_tau, check_validity, Condition};

/// Environment variable overriding the default output directory.
const OUT_ENV: &str = "PHOTON_TRANSFER_OUT";

#[derive(Parser)]
#[command(version, about = "Driven photon transfer through a detuned spin chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one scenario and write CSV, summary and plot script.
    Run {
        config: PathBuf,
        /// Output directory (default: $PHOTON_TRANSFER_OUT, then ./results).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep of an undriven chain.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Gaussian width giving the requested pulse area.
    Calibrate {
        config: PathBuf,
        /// `pi/2`, `pi/4` or an angle in radians.
        #[arg(long)]
        area: String,
    },
    /// Print the two-level validity report.
    Validate { config: PathBuf },
    /// List the built-in figure presets.
    Presets,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"))
}

fn load(path: &Path) -> Result<Config> {
    load_config(path).with_context(|| format!("loading {}", path.display()))
}

fn parse_area(text: &str) -> Result<f64> {
    let t = text.trim().to_ascii_lowercase().replace(' ', "");
    let value = match t.as_str() {
        "pi" => PI,
        "pi/2" => PI / 2.0,
        "pi/4" => PI / 4.0,
        _ => t.parse::<f64>().with_context(|| format!("cannot read pulse area `{text}`"))?,
    };
    if value.is_nan() || value <= 0.0 {
        bail!("pulse area must be positive");
    }
    Ok(value)
}

fn num(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-3 {
        format!("{v:.3e}")
    } else {
        format!("{v:.6}")
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, out } => {
            let Config::Scenario(s) = load(&config)? else {
                bail!("{} describes a sweep; use `sweep`", config.display());
            };
            let result = run_scenario(&s)?;
            let files = write_results(&result, out_dir(out))?;
            let m = &result.summary;
            println!("{} at T = {}", m.name, m.readout_time);
            println!("  |A_s|^2 = {:.6}  |A_r|^2 = {:.6}  channel = {:.6}", m.pop_sender, m.pop_receiver, m.pop_channel);
            println!("  F_avg = {:.6}  F_min = {:.6}  C = {:.6}", m.fidelity_avg, m.fidelity_min, m.concurrence);
            println!("  norm drift = {:.2e}", m.norm_drift);
            if let Some(v) = &m.validity {
                println!("  two-level conditions hold: {}", v.all_pass());
            }
            for o in &m.targets {
                let value = o.value.map_or("undefined".to_string(), num);
                println!(
                    "  target {:?} in [{}, {}]: {} ({})",
                    o.target.quantity,
                    o.target.min.map_or("-inf".into(), num),
                    o.target.max.map_or("inf".into(), num),
                    value,
                    if o.pass { "pass" } else { "FAIL" }
                );
            }
            println!("  wrote {}", files.csv.display());
            Ok(m.targets_pass)
        }
        Command::Sweep { config, out } => {
            let Config::Sweep(spec) = load(&config)? else {
                bail!("{} has no `sweep` section", config.display());
            };
            let table = run_baseline_sweep(&spec)?;
            let (csv, _) = write_sweep(&spec, &table, out_dir(out))?;
            println!(
                "{} over window [{}, {}], transfer period {:.4}",
                table.axis, table.window.0, table.window.1, table.transfer_period
            );
            println!("{:>10} {:>10} {:>10}", table.axis, "F_min", "time");
            for p in &table.points {
                println!("{:>10.4} {:>10.6} {:>10.4}", p.value, p.fidelity_min, p.time);
            }
            println!("wrote {}", csv.display());
            Ok(true)
        }
        Command::Calibrate { config, area } => {
            let target = parse_area(&area)?;
            let s = load(&config)?.scenario().clone();
            let spectrum = build_spectrum(&s.params)?;
            let tau = calibrate_tau(&s.params, &spectrum, &s.drive, target)?;
            println!("{tau}");
            Ok(true)
        }
        Command::Validate { config } => {
            let s = load(&config)?.scenario().clone();
            let spectrum = build_spectrum(&s.params)?;
            let r = check_validity(&s.params, &s.drive, &spectrum, s.readout_time)?;
            let line = |label: &str, c: &Condition| {
                println!(
                    "{label:<40} {:>11.4e} < {:<5} {}",
                    c.ratio,
                    c.threshold,
                    if c.pass { "ok" } else { "VIOLATED" }
                );
            };
            line("receiver coupling / detuning", &r.cond_a);
            line("sender sideband coupling / detuning", &r.cond_b);
            line("drive frequency / band gap", &r.cond_c);
            line(&format!("{}-photon bridging over T", r.n_star), &r.cond_d);
            if !r.resonant_terms.is_empty() {
                println!("resonant sender sidebands (mode, n): {:?}", r.resonant_terms);
            }
            Ok(r.all_pass())
        }
        Command::Presets => {
            for name in PRESET_NAMES {
                println!("{name:<7} {}", describe(name).unwrap_or(""));
            }
            Ok(true)
        }
    }
}
