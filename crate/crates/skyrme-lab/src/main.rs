//! Batch CLI: evolve configured runs, solve static profiles, run the
//! σ-model blow-up experiment, validate initial data, and measure norms
//! of saved snapshots.
//!
//! Exit codes: 0 success, 1 configuration, 2 numerical instability,
//! 3 I/O, 4 blow-up detected (the expected outcome for `sigma-blowup`).

use clap::{Parser, Subcommand};
use skyrme_lab::config::{parse_config, SimConfig};
use skyrme_lab::cutoff::CutoffFamily;
use skyrme_lab::error::LabError;
use skyrme_lab::evolve::{run, Mode, RunStatus};
use skyrme_lab::grid::build_grid;
use skyrme_lab::scenarios::{validate_initial_data, DataFamily};
use skyrme_lab::series::{
    config_hash, read_snapshot, write_validation_report, CsvSink, RunManifest,
};
use skyrme_lab::skyrmion::{find_skyrmion, profile_on_grid, ShootParams};
use skyrme_lab::sobolev::sobolev_norm;
use skyrme_lab::Execution;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "skyrme-lab",
    version,
    about = "equivariant Skyrme field laboratory"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evolve a configured run; writes the series CSV, snapshots, and a manifest.
    Evolve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Solve the static skyrmion by shooting + bisection.
    Static {
        #[arg(long, default_value_t = 1)]
        n1: u32,
        /// integration horizon for shot classification
        #[arg(long, default_value_t = 25.0)]
        rend: f64,
        /// far-field smallness defining convergence
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// profile export mesh spacing
        #[arg(long, default_value_t = 0.00390625)]
        dr: f64,
        /// profile export outer radius
        #[arg(long, default_value_t = 8.0)]
        rmax: f64,
        #[arg(long, default_value = "profile.csv")]
        out: PathBuf,
    },
    /// σ-model contrast experiment: evolve Turok–Spergel data to detection.
    SigmaBlowup {
        #[arg(long = "T")]
        t_blowup: f64,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Initial-data validator: data norms at dr and dr/2, JSON-lines report.
    ValidateData {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, default_value = "validate.jsonl")]
        out: PathBuf,
    },
    /// Sobolev norm of one field column of a snapshot file.
    Norms {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 5)]
        dim: u32,
        #[arg(long, default_value = "phi")]
        field: String,
    },
}

fn exit_code(err: &LabError) -> i32 {
    match err {
        LabError::Config(_) | LabError::Data(_) | LabError::Domain(_) => 1,
        LabError::Instability { .. } | LabError::Quadrature { .. } => 2,
        LabError::Io(_) => 3,
    }
}

fn default_execution() -> Execution {
    #[cfg(feature = "parallel")]
    {
        if let Ok(v) = std::env::var("SKYRME_THREADS") {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n > 0 {
                    let _ = rayon_pool(n);
                }
            }
        }
        Execution::Parallel
    }
    #[cfg(not(feature = "parallel"))]
    {
        Execution::Sequential
    }
}

#[cfg(feature = "parallel")]
fn rayon_pool(n: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339()
}

fn cmd_evolve(config_path: &Path, exec: Execution) -> Result<i32, LabError> {
    let text = std::fs::read_to_string(config_path)?;
    let cfg = parse_config(&text)?;
    let started = now();
    let mut sink = CsvSink::create(Path::new(&cfg.out_series), Path::new(&cfg.out_snapshots))?;
    let outcome = run(&cfg, exec, &mut sink);
    let (status_str, code) = match &outcome {
        Ok(summary) => match summary.status {
            RunStatus::Completed => ("completed".to_string(), 0),
            RunStatus::BlowUpDetected => (
                format!(
                    "blow-up-detected at t = {:.6}",
                    summary.detection.unwrap_or(f64::NAN)
                ),
                4,
            ),
        },
        Err(e) => (format!("error: {e}"), exit_code(e)),
    };
    let manifest = RunManifest::new(&cfg, started, now(), status_str.clone());
    manifest.write(Path::new(&format!("{}.manifest.json", cfg.out_series)))?;
    match outcome {
        Ok(summary) => {
            println!(
                "run {}: {} records to t = {:.6} ({status_str}), config {}",
                &config_hash(&cfg)[..12],
                summary.records,
                summary.final_t,
                config_path.display()
            );
            Ok(code)
        }
        Err(e) => Err(e),
    }
}

fn cmd_static(
    n1: u32,
    rend: f64,
    tol: f64,
    dr: f64,
    rmax: f64,
    out: &Path,
) -> Result<i32, LabError> {
    if n1 != 1 {
        return Err(LabError::Config(
            "shooting is implemented for the unit-charge sector (n1 = 1)".into(),
        ));
    }
    let params = ShootParams {
        r0: (2.0f64).powi(-12),
        r_end: rend.max(20.0),
        tol,
    };
    let solve = find_skyrmion(&params, -8.0, -0.5, 1e-12)?;
    let grid = build_grid(3, dr, rmax)?;
    let prof = profile_on_grid(solve.b_star, &grid, rmax.max(48.0))?;
    let virial = (prof.e2 - prof.e4).abs() / (prof.e2 + prof.e4);
    println!("b_star          = {:.15e}", solve.b_star);
    println!("bracket_width   = {:.3e}", solve.bracket_width);
    println!("bisections      = {}", solve.iterations);
    println!("energy          = {:.15e}", prof.energy);
    println!("E2              = {:.15e}", prof.e2);
    println!("E4              = {:.15e}", prof.e4);
    println!("virial_balance  = {:.3e}", virial);
    println!("ode_residual    = {:.3e}", prof.ode_residual);
    let mut w = std::io::BufWriter::new(std::fs::File::create(out)?);
    writeln!(w, "r,u,ur")?;
    for (j, &r) in grid.nodes().iter().enumerate() {
        writeln!(w, "{r:.16e},{:.16e},{:.16e}", prof.u[j], prof.ur[j])?;
    }
    w.flush()?;
    Ok(0)
}

fn cmd_sigma_blowup(
    t_blowup: f64,
    config: Option<&Path>,
    exec: Execution,
) -> Result<i32, LabError> {
    let mut cfg = match config {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            parse_config(&text)?
        }
        None => SimConfig::default_sigma(t_blowup),
    };
    cfg.mode = Mode::Sigma;
    cfg.n1 = 0;
    cfg.data = DataFamily::TsBlowup { t_blowup };
    if cfg.r_max < t_blowup + 4.0 {
        cfg.r_max = t_blowup + 5.0;
    }
    if cfg.t_end > t_blowup {
        cfg.t_end = t_blowup;
    }
    cfg.validate()?;
    let started = now();
    let mut sink = CsvSink::create(Path::new(&cfg.out_series), Path::new(&cfg.out_snapshots))?;
    let summary = run(&cfg, exec, &mut sink)?;
    let status_str = match summary.status {
        RunStatus::Completed => {
            format!("completed without detection at t = {:.6}", summary.final_t)
        }
        RunStatus::BlowUpDetected => {
            format!("blow-up-detected at t = {:.6}", summary.detection.unwrap())
        }
    };
    RunManifest::new(&cfg, started, now(), status_str.clone())
        .write(Path::new(&format!("{}.manifest.json", cfg.out_series)))?;
    println!("sigma-blowup (T = {t_blowup}): {status_str}");
    Ok(if summary.status == RunStatus::BlowUpDetected {
        4
    } else {
        0
    })
}

fn cmd_validate(
    config_path: &Path,
    s_arg: Option<f64>,
    out: &Path,
    exec: Execution,
) -> Result<i32, LabError> {
    let text = std::fs::read_to_string(config_path)?;
    let cfg = parse_config(&text)?;
    if cfg.mode == Mode::Sigma {
        return Err(LabError::Config(
            "the data validator runs on skyrme-mode data".into(),
        ));
    }
    let s = s_arg.unwrap_or(cfg.s);
    let family = CutoffFamily::new(cfg.n1);
    let report = validate_initial_data(&cfg.data, s, cfg.dr, cfg.r_max, &family, exec)?;
    write_validation_report(out, &report)?;
    for e in &report.entries {
        println!(
            "{{\"name\":\"{}\",\"coarse\":{:.9e},\"fine\":{:.9e},\"rel_change\":{:.3e},\"flagged\":{}}}",
            e.name, e.coarse, e.fine, e.rel_change, e.flagged
        );
    }
    println!(
        "validator: {} entries, {}",
        report.entries.len(),
        if report.any_flagged {
            "FLAGGED entries present"
        } else {
            "all entries stable"
        }
    );
    Ok(0)
}

fn cmd_norms(
    snapshot: &Path,
    sigma: f64,
    dim: u32,
    field: &str,
    exec: Execution,
) -> Result<i32, LabError> {
    let snap = read_snapshot(snapshot)?;
    let f: &[f64] = match field {
        "u" => &snap.u,
        "ut" => &snap.ut,
        "v" => &snap.v,
        "vt" => &snap.vt,
        "phi" => &snap.phi,
        "phit" => &snap.phit,
        other => {
            return Err(LabError::Config(format!(
                "unknown field `{other}` (expected u, ut, v, vt, phi, phit)"
            )))
        }
    };
    // reconstruct the cell-centered mesh from the r column
    let dr = 2.0 * snap.r[0];
    for (j, &r) in snap.r.iter().enumerate() {
        if (r - (j as f64 + 0.5) * dr).abs() > 1e-9 * dr.max(1.0) {
            return Err(LabError::Data(
                "snapshot mesh is not uniform cell-centered".into(),
            ));
        }
    }
    let grid = build_grid(dim, dr, snap.r.len() as f64 * dr)?;
    let norm = sobolev_norm(f, sigma, &grid, exec)?;
    println!("{norm}");
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    let exec = default_execution();
    let outcome = match &cli.cmd {
        Cmd::Evolve { config } => cmd_evolve(config, exec),
        Cmd::Static {
            n1,
            rend,
            tol,
            dr,
            rmax,
            out,
        } => cmd_static(*n1, *rend, *tol, *dr, *rmax, out),
        Cmd::SigmaBlowup { t_blowup, config } => {
            cmd_sigma_blowup(*t_blowup, config.as_deref(), exec)
        }
        Cmd::ValidateData { config, s, out } => cmd_validate(config, *s, out, exec),
        Cmd::Norms {
            snapshot,
            sigma,
            dim,
            field,
        } => cmd_norms(snapshot, *sigma, *dim, field, exec),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
