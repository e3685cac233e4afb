//! Command line front end.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! errors (bad parameters, unusable levels, unwritable output).

mod config;
mod export;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{Normalization, Overrides, RunConfig};
use fracwave::{
    delta::{approximate_delta, DeltaWeights},
    eigenfunctions::build_basis,
    oracle,
    verify::{self, CheckStatus},
    wave::{solve_wave, TimeNormalization, WaveConfig},
    EigenvalueTree, FractalParams, VertexGrid,
};

#[derive(Parser)]
#[command(
    name = "fracwave",
    version,
    about = "Spectra, eigenfunctions, impulse approximations and waves for self-similar interval Laplacians"
)]
struct Cli {
    /// TOML run configuration; flags override its entries
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Probability parameter in (0, 1)
    #[arg(long, global = true)]
    p: Option<f64>,

    /// Truncation level; series keep 3^n0 + 1 modes
    #[arg(long, global = true)]
    n0: Option<usize>,

    /// Resolution level of the vertex grid
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Eigenfunction rank for `eigenfunction`
    #[arg(long, global = true)]
    k: Option<usize>,

    /// Comma separated sample times for `wave`
    #[arg(long, global = true, value_delimiter = ',')]
    times: Option<Vec<f64>>,

    /// Coordinate column plotting scripts should pair with `value`
    #[arg(long, global = true, value_enum)]
    parametrization: Option<config::Parametrization>,

    /// Time scale convention for `wave`
    #[arg(long, global = true, value_enum)]
    normalization: Option<Normalization>,

    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Serve eigenfunctions from the dense eigendecomposition
    #[arg(long, global = true)]
    oracle: bool,

    /// Tolerance override for `verify`'s spectrum comparison
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the level-n spectrum, raw and renormalized, with parentage
    Spectrum,
    /// Export eigenfunction k as a table over all three coordinates
    Eigenfunction,
    /// Export the truncated impulse approximation on the level-n grid
    Delta,
    /// Export wave snapshots at the configured times
    Wave,
    /// Run the invariant suite against the dense oracle
    Verify {
        /// Perturb the named check to prove failures reach the exit status
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Report closed-form and fitted spectral dimension
    Dimension,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<fracwave::Error> for Failure {
    fn from(e: fracwave::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let base = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str::<RunConfig>(&text)
                .map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    let over = Overrides {
        p: cli.p,
        n0: cli.n0,
        n: cli.n,
        k: cli.k,
        times: cli.times.clone(),
        parametrization: cli.parametrization,
        normalization: cli.normalization,
        output: cli.output.clone(),
        oracle: cli.oracle,
        tolerance: cli.tolerance,
    };
    let cfg = base.apply(&over);
    let params = FractalParams::new(cfg.p)?;
    match cli.command {
        Command::Spectrum => cmd_spectrum(&cfg, &params),
        Command::Eigenfunction => cmd_eigenfunction(&cfg, &params),
        Command::Delta => cmd_delta(&cfg, &params),
        Command::Wave => cmd_wave(&cfg, &params),
        Command::Verify { inject_fault } => cmd_verify(&cfg, &params, inject_fault.as_deref()),
        Command::Dimension => cmd_dimension(&cfg, &params),
    }
}

fn with_output<F>(path: &Option<PathBuf>, body: F) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let file = fs::File::create(p)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            let mut w = io::BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = io::BufWriter::new(stdout.lock());
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn require_levels(cfg: &RunConfig) -> Result<(), Failure> {
    if cfg.n0 > cfg.n {
        return Err(Failure::Usage(format!(
            "truncation level n0={} exceeds resolution level n={}",
            cfg.n0, cfg.n
        )));
    }
    Ok(())
}

fn reject_half(params: &FractalParams, what: &str) -> Result<(), Failure> {
    if params.p == 0.5 {
        return Err(Failure::Usage(format!(
            "{what} uses branch extension, which is undefined at p = 1/2; \
             use `wave --oracle` for the symmetric case"
        )));
    }
    Ok(())
}

fn cmd_spectrum(cfg: &RunConfig, params: &FractalParams) -> Result<(), Failure> {
    let tree = EigenvalueTree::build(params, cfg.n)?;
    with_output(&cfg.output, |w| export::write_spectrum(w, &tree, cfg.n))
}

fn cmd_eigenfunction(cfg: &RunConfig, params: &FractalParams) -> Result<(), Failure> {
    reject_half(params, "eigenfunction")?;
    require_levels(cfg)?;
    let modes = 3usize.pow(cfg.n0 as u32) + 1;
    if cfg.k >= modes {
        return Err(Failure::Usage(format!(
            "rank k={} outside the truncated basis (k <= {})",
            cfg.k,
            modes - 1
        )));
    }
    let basis = build_basis(params, cfg.n0, cfg.n)?;
    let grid = VertexGrid::build(params, cfg.n)?;
    with_output(&cfg.output, |w| {
        export::write_vertex_table(w, &grid, &basis[cfg.k].values)
    })
}

fn cmd_delta(cfg: &RunConfig, params: &FractalParams) -> Result<(), Failure> {
    reject_half(params, "delta")?;
    require_levels(cfg)?;
    let values = approximate_delta(params, cfg.n0, cfg.n)?;
    let grid = VertexGrid::build(params, cfg.n)?;
    with_output(&cfg.output, |w| {
        export::write_vertex_table(w, &grid, &values)
    })
}

fn cmd_wave(cfg: &RunConfig, params: &FractalParams) -> Result<(), Failure> {
    require_levels(cfg)?;
    if params.p == 0.5 && !cfg.oracle {
        return Err(Failure::Usage(
            "p = 1/2 has no branch extension; pass --oracle to use the dense basis".into(),
        ));
    }
    let modes = 3usize.pow(cfg.n0 as u32) + 1;
    let (weights, basis) = if cfg.oracle {
        if cfg.n > verify::MAX_VERIFY_LEVEL {
            return Err(Failure::Usage(format!(
                "--oracle builds a dense matrix; level n={} exceeds the cap {}",
                cfg.n,
                verify::MAX_VERIFY_LEVEL
            )));
        }
        let grid0 = VertexGrid::build(params, cfg.n0)?;
        let basis0 = oracle::impulse_basis(&grid0, modes);
        let weights = DeltaWeights::from_spectral_projection(&grid0, &basis0);
        let grid = VertexGrid::build(params, cfg.n)?;
        (weights, oracle::impulse_basis(&grid, modes))
    } else {
        let tree = EigenvalueTree::build(params, cfg.n0)?;
        let weights = DeltaWeights::at_level(&tree, cfg.n0)?;
        (weights, build_basis(params, cfg.n0, cfg.n)?)
    };
    let wave_config = WaveConfig {
        params: *params,
        n0: cfg.n0,
        n: cfg.n,
        times: cfg.times.clone(),
        normalization: match cfg.normalization {
            Normalization::Raw => TimeNormalization::Raw,
            Normalization::Fundamental => TimeNormalization::Fundamental,
        },
    };
    let field = solve_wave(&wave_config, &weights, &basis)?;
    let grid = VertexGrid::build(params, cfg.n)?;
    let snapshots: Vec<Vec<f64>> = field.snapshots.into_iter().map(|s| s.values).collect();
    with_output(&cfg.output, |w| {
        export::write_wave_table(w, &grid, &cfg.times, &snapshots)
    })
}

fn cmd_verify(
    cfg: &RunConfig,
    params: &FractalParams,
    inject: Option<&str>,
) -> Result<(), Failure> {
    if cfg.n > verify::MAX_VERIFY_LEVEL {
        return Err(Failure::Usage(format!(
            "verification diagonalizes a dense matrix; level n={} exceeds the cap {}",
            cfg.n,
            verify::MAX_VERIFY_LEVEL
        )));
    }
    let tol = cfg.tolerance.unwrap_or(1e-8);
    let results = verify::run_suite(params, cfg.n, tol, inject)?;
    with_output(&cfg.output, |w| {
        for r in &results {
            match r.status {
                CheckStatus::Pass => writeln!(w, "CHECK {} PASS margin={}", r.name, r.margin)?,
                CheckStatus::Fail => writeln!(w, "CHECK {} FAIL margin={}", r.name, r.margin)?,
                CheckStatus::Skip => writeln!(
                    w,
                    "CHECK {} SKIP {}",
                    r.name,
                    r.note.as_deref().unwrap_or("")
                )?,
            }
        }
        Ok(())
    })?;
    if !verify::all_passed(&results) {
        let failed: Vec<&str> = results
            .iter()
            .filter(|r| r.status == CheckStatus::Fail)
            .map(|r| r.name)
            .collect();
        return Err(Failure::Check(format!(
            "verification failed: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

fn cmd_dimension(cfg: &RunConfig, params: &FractalParams) -> Result<(), Failure> {
    if cfg.n < 6 {
        return Err(Failure::Usage(format!(
            "the counting-function fit needs n >= 6, got n={}",
            cfg.n
        )));
    }
    let tree = EigenvalueTree::build(params, cfg.n)?;
    let slope = tree.spectral_dimension_fit(cfg.n)?;
    let deviation = (2.0 * slope - params.ds).abs() / params.ds;
    with_output(&cfg.output, |w| {
        writeln!(w, "ds_closed_form={}", params.ds)?;
        writeln!(w, "fitted_slope={slope}")?;
        writeln!(w, "fitted_slope_x2={}", 2.0 * slope)?;
        writeln!(w, "relative_deviation={deviation}")?;
        Ok(())
    })
}
