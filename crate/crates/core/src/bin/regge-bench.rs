use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use regge_shell::bench::{emit_table, run_benchmark, BenchmarkConfig, BenchmarkName, OutputFormat};
use regge_shell::shell::{MembraneReduction, ShearReduction, StrainModel};

/// Thickness/refinement sweeps of the shell locking benchmarks.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// cylinder, hyperboloid, unibend_cylinder, hyperbolic_paraboloid or hemisphere
    #[arg(long)]
    benchmark: BenchmarkName,
    #[arg(long, default_value_t = 2)]
    order: usize,
    /// Defaults to --order.
    #[arg(long)]
    geom_order: Option<usize>,
    #[arg(long, default_value_t = 4)]
    reference_order: usize,
    /// Comma separated list.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001,0.0001")]
    thickness: Vec<f64>,
    /// Number of refinement levels; the reference is computed on the last one.
    #[arg(long, default_value_t = 3)]
    levels: usize,
    #[arg(long, default_value = "on")]
    regge: MembraneReduction,
    #[arg(long, default_value = "on")]
    shear_reduction: ShearReduction,
    /// Use the Green membrane strain instead of its linearization.
    #[arg(long)]
    green: bool,
    /// Import a level-0 mesh instead of the structured default.
    #[arg(long)]
    mesh: Option<PathBuf>,
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut config = BenchmarkConfig::new(args.benchmark);
    config.order = args.order;
    config.geometry_order = args.geom_order;
    config.reference_order = args.reference_order;
    config.thicknesses = args.thickness;
    config.levels = args.levels;
    config.membrane = args.regge;
    config.shear = args.shear_reduction;
    config.mesh = args.mesh;
    if args.green {
        config.model = StrainModel::FullGreen;
    }
    let result = run_benchmark(&config).and_then(|table| {
        emit_table(&table, args.format, &args.out)?;
        Ok(table)
    });
    match result {
        Ok(table) => {
            for r in &table.rows {
                println!(
                    "{} t={:<8} level={} dofs={:<6} value={:+.6e} reference={:+.6e} rel_error={:.3e} iters={}",
                    r.benchmark, r.t, r.level, r.n_dofs, r.value, r.reference, r.rel_error, r.newton_iters
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
