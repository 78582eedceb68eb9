use clap::{Parser, Subcommand};
use magbound::harness::{self, Config, Prepared, VerificationRecord};
use magbound::spectral;
use magbound::{par, Error, Result};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Eigenvalue bounds for magnetic Laplacians on planar domains.
#[derive(Parser)]
#[command(name = "magbound", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON case configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path (CSV); standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// SVG plot of bounds and computed eigenvalues against B0.
    #[arg(long, global = true)]
    plot: Option<PathBuf>,
    /// Overrides the solver seed of every case.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true, env = "MAGBOUNDS_JOBS")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest eigenvalues of each case.
    Solve {
        /// Number of eigenvalues.
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Directory for binary matrix dumps, one `<case>_<bc>_h<h>.csr` per assembled grid.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Evaluates the configured bounds and prints them as JSON lines.
    Bounds,
    /// Checks every bound against extrapolated eigenvalues; exits 1 on a violation.
    Verify,
    /// Verifies each case over its `b0_list`.
    Sweep,
    /// Grid convergence over each case's `h_list`.
    Converge,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn prepare(cli: &Cli) -> Result<Vec<Prepared>> {
    let path = cli.config.as_deref().ok_or_else(|| Error::Config("--config is required".into()))?;
    let cfg = Config::load(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    cfg.cases
        .iter()
        .map(|c| {
            let mut p = Prepared::new(c, base)?;
            if let Some(s) = cli.seed {
                p.config.solver.seed = s;
            }
            Ok(p)
        })
        .collect()
}

fn output_paths(cli: &Cli) -> Result<(Option<PathBuf>, Option<PathBuf>)> {
    let path = cli.config.as_deref().ok_or_else(|| Error::Config("--config is required".into()))?;
    let out = Config::load(path)?.output;
    Ok((cli.out.clone().or(out.csv), cli.plot.clone().or(out.plot)))
}

fn write_records(cli: &Cli, records: &[VerificationRecord]) -> Result<()> {
    let (csv, plot) = output_paths(cli)?;
    match csv {
        Some(p) => harness::emit(records, &p, plot.as_deref())?,
        None => {
            harness::write_csv(records, std::io::stdout().lock())?;
            if let Some(p) = plot {
                std::fs::write(p, harness::write_svg(records))?;
            }
        }
    }
    Ok(())
}

fn summarize(r: &VerificationRecord) {
    for o in &r.outcomes {
        let failed: Vec<&str> =
            o.bounds.iter().filter(|b| b.pass == Some(false)).map(|b| b.report.name.as_str()).collect();
        eprintln!(
            "{} [{}] lambda1 = {:.8} (+/- {:.1e}), {} bounds, {}",
            r.case_id,
            o.bc.as_str(),
            o.lambda1.extrapolated,
            o.lambda1.slack,
            o.bounds.len(),
            if failed.is_empty() { "all checks pass".to_string() } else { format!("FAILED: {}", failed.join(", ")) }
        );
    }
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.jobs {
        par::set_jobs(n);
    }
    let cases = prepare(cli)?;
    match &cli.command {
        Command::Solve { count, dump } => {
            let mut out: Box<dyn Write> = match &cli.out {
                Some(p) => Box::new(std::fs::File::create(p)?),
                None => Box::new(std::io::stdout().lock()),
            };
            for p in &cases {
                for bc in p.config.bc.conditions() {
                    let gauge = spectral::gauge_for(&p.field, &p.domain);
                    let mut levels = Vec::new();
                    let mut hs = vec![p.h];
                    if p.config.grid.extrapolate {
                        hs.push(0.5 * p.h);
                    }
                    for &h in &hs {
                        let op = spectral::assemble(&p.domain, gauge.as_ref(), bc, h)?;
                        if let Some(dir) = dump {
                            std::fs::create_dir_all(dir)?;
                            let name = format!("{}_{}_h{}.csr", p.config.id, bc.as_str(), h);
                            op.matrix().write_binary(&dir.join(name))?;
                        }
                        levels.push(spectral::solve_magnetic_k(&p.domain, &p.field, bc, h, &p.config.solver, *count)?);
                    }
                    let extrapolated = match levels.as_slice() {
                        [c, f] => Some(spectral::extrapolate(c, f)?),
                        _ => None,
                    };
                    let fine = levels.last().expect("one level");
                    let line = serde_json::json!({
                        "case_id": p.config.id,
                        "bc": bc.as_str(),
                        "h": fine.h,
                        "eigenvalues": fine.eigenvalues,
                        "residuals": fine.residuals,
                        "extrapolated": extrapolated,
                    });
                    writeln!(out, "{line}")?;
                }
            }
            Ok(true)
        }
        Command::Bounds => {
            let mut out = std::io::stdout().lock();
            for p in &cases {
                let r = harness::run_verify(p)?;
                for o in &r.outcomes {
                    for b in &o.bounds {
                        let line = serde_json::json!({
                            "case_id": r.case_id,
                            "bc": o.bc.as_str(),
                            "report": b.report,
                        });
                        writeln!(out, "{line}")?;
                    }
                }
            }
            Ok(true)
        }
        Command::Verify => {
            let records = cases.iter().map(harness::run_verify).collect::<Result<Vec<_>>>()?;
            records.iter().for_each(summarize);
            write_records(cli, &records)?;
            Ok(records.iter().all(VerificationRecord::passed))
        }
        Command::Sweep => {
            let mut records = Vec::new();
            for p in &cases {
                if p.config.b0_list.is_empty() {
                    return Err(Error::Config(format!("case {} has no b0_list", p.config.id)));
                }
                let s = harness::run_sweep(p, &p.config.b0_list)?;
                s.records.iter().for_each(summarize);
                for (bc, slope) in &s.slopes {
                    eprintln!("{} [{}] small-field slope = {slope:.4}", p.config.id, bc.as_str());
                }
                for (b, v) in &s.log_limit {
                    eprintln!("{} B0 = {b}: log(lambda1 - B0)/(B0 R^2) = {v:.5}", p.config.id);
                }
                records.extend(s.records);
            }
            write_records(cli, &records)?;
            Ok(records.iter().all(VerificationRecord::passed))
        }
        Command::Converge => {
            let mut out: Box<dyn Write> = match &cli.out {
                Some(p) => Box::new(std::fs::File::create(p)?),
                None => Box::new(std::io::stdout().lock()),
            };
            writeln!(out, "case_id,bc,h,lambda1,order")?;
            for p in &cases {
                let tables = harness::run_converge(p, &p.config.h_list)?;
                for t in tables {
                    for (k, (h, v)) in t.levels.iter().enumerate() {
                        let order = k.checked_sub(2).and_then(|i| t.orders[i]).map(|o| o.to_string()).unwrap_or_default();
                        writeln!(out, "{},{},{h},{v},{order}", p.config.id, t.bc.as_str())?;
                    }
                    if let Some(e) = t.extrapolated {
                        writeln!(out, "{},{},extrapolated,{e},", p.config.id, t.bc.as_str())?;
                    }
                    for w in &t.warnings {
                        eprintln!("warning: {} [{}]: {w}", p.config.id, t.bc.as_str());
                    }
                }
            }
            Ok(true)
        }
    }
}
