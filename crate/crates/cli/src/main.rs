//! `trpca` command-line interface.
//!
//! Subcommands: `solve` (ADMM decomposition of a TNS3 tensor), `certify`
//! (dual-certificate Monte Carlo), `concentrate` (sampling-operator
//! concentration experiments), and `phase` (recovery phase grid).
//!
//! Exit codes: 0 ok, 1 usage error, 2 I/O error, 3 numerical failure.

use std::path::{Path, PathBuf};
use trpca_cli::config::{parse_grid_f64, parse_grid_usize, Options};
use trpca_cli::csv::{write_csv, write_sidecar, Field};
use trpca_cli::experiments::*;
use trpca_cli::runner::default_threads;
use trpca_cli::CliError;
use trpca_core::certificate::default_lambda;
use trpca_core::random_models::Seed;
use trpca_core::tensor_core::{read_tensor, write_tensor};
use trpca_core::trpca::{solve, SolverConfig};

const USAGE: &str = "\
usage: trpca <command> [options]

commands:
  solve        decompose a tensor into low-rank plus sparse parts
               --input X.tns3 --out L.tns3 S.tns3 [--lambda <f|auto>]
               [--tol <f>] [--mu0 <f>] [--rho-mu <f>] [--mu-max <f>]
               [--max-iter <n>]
  certify      dual-certificate success-rate experiment
               --n <n> --n3 <n> --r <n> --rho <f> [--trials <n>]
               [--seed <n>] --out <csv>
  concentrate  concentration experiments for the sampling operators
               --lemma {sign|pt|ptomega|infty|dev} --n3 <n>
               [--n <n> | --n-grid a:b:s] [--rho <f> | --rho-grid a:b:s]
               [--r <n>] [--trials <n>] [--seed <n>] --out <csv>
  phase        planted-recovery phase grid
               --n <n> --n3 <n> --r-grid a:b:s --rho-grid a:b:s
               [--trials <n>] [--seed <n>] --out <csv>

common options:
  --config <path>   flat key=value file; explicit flags override it
  --threads <n>     worker threads (default: available parallelism)

exit codes: 0 ok, 1 usage error, 2 i/o error, 3 numerical failure
";

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match real_main(&args) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("trpca: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("{USAGE}");
            }
            std::process::exit(e.exit_code());
        }
    }
}

fn real_main(args: &[String]) -> Result<(), CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Usage("missing command".into()));
    };
    if command == "--help" || command == "-h" || command == "help" {
        print!("{USAGE}");
        return Ok(());
    }
    let options = Options::from_args(&args[1..])?;
    match command.as_str() {
        "solve" => cmd_solve(&options),
        "certify" => cmd_certify(&options),
        "concentrate" => cmd_concentrate(&options),
        "phase" => cmd_phase(&options),
        other => Err(CliError::Usage(format!("unknown command '{other}'"))),
    }?;
    options.reject_unknown()
}

fn out_path(options: &Options) -> Result<PathBuf, CliError> {
    Ok(PathBuf::from(options.require("out")?))
}

fn common_params(options: &Options) -> Result<(usize, Seed, usize), CliError> {
    let trials: usize = options.parse("trials", 50)?;
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let seed = Seed(options.parse("seed", 0u64)?);
    let threads: usize = options.parse("threads", default_threads())?;
    Ok((trials, seed, threads))
}

fn cmd_solve(options: &Options) -> Result<(), CliError> {
    let input = options.require("input")?.to_string();
    let out_raw = options.require("out")?.to_string();
    let outs: Vec<&str> = out_raw.split_whitespace().collect();
    if outs.len() != 2 {
        return Err(CliError::Usage(
            "--out expects two paths: L.tns3 S.tns3".into(),
        ));
    }
    let x = read_tensor(Path::new(&input))?;
    let mut cfg = SolverConfig::for_shape(x.shape());
    match options.get("lambda") {
        None => {}
        Some("auto") => cfg.lambda = default_lambda(x.shape()),
        Some(raw) => {
            cfg.lambda = raw
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid --lambda '{raw}'")))?
        }
    }
    cfg.tol = options.parse("tol", cfg.tol)?;
    cfg.mu0 = options.parse("mu0", cfg.mu0)?;
    cfg.rho_mu = options.parse("rho-mu", cfg.rho_mu)?;
    cfg.mu_max = options.parse("mu-max", cfg.mu_max)?;
    cfg.max_iter = options.parse("max-iter", cfg.max_iter)?;

    let sol = solve(&x, &cfg)?;
    write_tensor(&sol.l, Path::new(outs[0]))?;
    write_tensor(&sol.s, Path::new(outs[1]))?;
    println!(
        "solve: shape {} lambda {:.6e} iterations {} residual {:.3e} converged {}",
        x.shape(),
        cfg.lambda,
        sol.iterations,
        sol.primal_residuals.last().copied().unwrap_or(0.0),
        sol.converged,
    );
    if !sol.converged {
        return Err(CliError::Numerical(format!(
            "solver did not reach tolerance {} within {} iterations",
            cfg.tol, cfg.max_iter
        )));
    }
    Ok(())
}

fn cmd_certify(options: &Options) -> Result<(), CliError> {
    let n: usize = options.parse_required("n")?;
    let n3: usize = options.parse_required("n3")?;
    let r: usize = options.parse_required("r")?;
    let rho: f64 = options.parse_required("rho")?;
    let (trials, seed, threads) = common_params(options)?;
    let out = out_path(options)?;

    let records = exp_certificate(n, n3, r, rho, trials, seed, threads)?;
    let rows: Vec<Vec<Field>> = records.iter().map(|r| r.csv_row()).collect();
    write_csv(&out, CertificateRecord::HEADER, &rows)?;
    write_sidecar(&out, options)?;
    let passed = records.iter().filter(|r| r.passed).count();
    println!(
        "certify: n {n} n3 {n3} r {r} rho {rho} trials {trials} pass rate {:.3}",
        passed as f64 / trials as f64
    );
    Ok(())
}

fn cmd_concentrate(options: &Options) -> Result<(), CliError> {
    let lemma = options.require("lemma")?.to_string();
    let n3: usize = options.parse_required("n3")?;
    let (trials, seed, threads) = common_params(options)?;
    let out = out_path(options)?;

    let n_grid = match options.get("n-grid") {
        Some(raw) => parse_grid_usize(raw, "n-grid")?,
        None => vec![options.parse_required("n")?],
    };
    let rho_grid = match options.get("rho-grid") {
        Some(raw) => parse_grid_f64(raw, "rho-grid")?,
        None => vec![options.parse_required("rho")?],
    };

    match lemma.as_str() {
        "sign" => {
            let recs = exp_sign_spectral(&n_grid, n3, &rho_grid, trials, seed, threads)?;
            let rows: Vec<Vec<Field>> = recs.iter().map(|r| r.csv_row()).collect();
            write_csv(&out, SignRecord::HEADER, &rows)?;
        }
        "pt" => {
            let r: usize = options.parse_required("r")?;
            let n = single(&n_grid, "pt")?;
            let recs = exp_pt_concentration(n, n3, r, &rho_grid, trials, seed, threads)?;
            let rows: Vec<Vec<Field>> = recs.iter().map(|r| r.csv_row()).collect();
            write_csv(&out, PtRecord::HEADER, &rows)?;
        }
        "ptomega" => {
            let r: usize = options.parse_required("r")?;
            let recs = exp_pt_omega_norm(&n_grid, n3, r, &rho_grid, trials, seed, threads)?;
            let rows: Vec<Vec<Field>> = recs.iter().map(|r| r.csv_row()).collect();
            write_csv(&out, PtOmegaRecord::HEADER, &rows)?;
        }
        "infty" => {
            let r: usize = options.parse_required("r")?;
            let n = single(&n_grid, "infty")?;
            let recs = exp_infty_contraction(n, n3, r, &rho_grid, trials, seed, threads)?;
            let rows: Vec<Vec<Field>> = recs.iter().map(|r| r.csv_row()).collect();
            write_csv(&out, InftyRecord::HEADER, &rows)?;
        }
        "dev" => {
            let rho = if rho_grid.len() == 1 {
                rho_grid[0]
            } else {
                return Err(CliError::Usage("lemma 'dev' takes a single --rho".into()));
            };
            let recs = exp_spectral_deviation(&n_grid, n3, rho, trials, seed, threads)?;
            let rows: Vec<Vec<Field>> = recs.iter().map(|r| r.csv_row()).collect();
            write_csv(&out, DeviationRecord::HEADER, &rows)?;
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown lemma '{other}' (expected sign|pt|ptomega|infty|dev)"
            )));
        }
    }
    write_sidecar(&out, options)?;
    println!("concentrate: lemma {lemma} -> {}", out.display());
    Ok(())
}

fn single(grid: &[usize], lemma: &str) -> Result<usize, CliError> {
    if grid.len() == 1 {
        Ok(grid[0])
    } else {
        Err(CliError::Usage(format!(
            "lemma '{lemma}' takes a single --n"
        )))
    }
}

fn cmd_phase(options: &Options) -> Result<(), CliError> {
    let n: usize = options.parse_required("n")?;
    let n3: usize = options.parse_required("n3")?;
    let r_grid = parse_grid_usize(options.require("r-grid")?, "r-grid")?;
    let rho_grid = parse_grid_f64(options.require("rho-grid")?, "rho-grid")?;
    let (trials, seed, threads) = common_params(options)?;
    let out = out_path(options)?;

    let records = exp_phase_grid(n, n3, &r_grid, &rho_grid, trials, seed, threads)?;
    let rows: Vec<Vec<Field>> = records.iter().map(|r| r.csv_row()).collect();
    write_csv(&out, PhaseRecord::HEADER, &rows)?;
    write_sidecar(&out, options)?;

    println!("phase: success fractions (rows r, columns rho)");
    print!("{:>6}", "r\\rho");
    for rho in &rho_grid {
        print!(" {rho:>7.3}");
    }
    println!();
    for &r in &r_grid {
        print!("{r:>6}");
        for &rho in &rho_grid {
            let bucket: Vec<&PhaseRecord> = records
                .iter()
                .filter(|rec| rec.r == r && rec.rho == rho)
                .collect();
            let wins = bucket.iter().filter(|rec| rec.success).count();
            print!(" {:>7.3}", wins as f64 / bucket.len().max(1) as f64);
        }
        println!();
    }
    Ok(())
}
