use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use eq2_cli::{ReportFormat, RunConfig, Suite, list_identities, run_suite};

/// Verification suites for the dual braided quantum E(2) construction.
///
/// Exit codes: 0 = all checks passed, 1 = a verification failed,
/// 2 = configuration error.
#[derive(Parser, Debug)]
#[command(name = "eq2", version, about)]
struct Cli {
    /// Real part of the deformation parameter q (0 < |q| < 1).
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    q_re: f64,
    /// Imaginary part of q; non-real q makes the braiding nontrivial.
    #[arg(long, default_value_t = 0.4, allow_negative_numbers = true)]
    q_im: f64,
    /// Suite to run: relations | pentagon | comult | slice | boson | all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Coordinate window for seeded test vectors.
    #[arg(long, default_value_t = 3)]
    window: i64,
    /// Residual tolerance for numeric identities.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Fourier sample count for the quantum-exponential symbol (power of two).
    #[arg(long, default_value_t = 4096)]
    fourier_samples: usize,
    /// Magnitude below which coefficients are dropped.
    #[arg(long, default_value_t = 1e-12)]
    coeff_cutoff: f64,
    /// Seed determining all random test vectors.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Report format: text | json.
    #[arg(long, default_value = "text")]
    report: String,
    /// Write the report to this path instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Print every registered identity and exit.
    #[arg(long, default_value_t = false)]
    list_identities: bool,
    /// Sensitivity control: scale this generator's coefficient by 1.001; the
    /// run is then expected to fail.
    #[arg(long)]
    perturb: Option<String>,
}

fn config_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if cli.list_identities {
        for line in list_identities() {
            println!("{line}");
        }
        return ExitCode::SUCCESS;
    }

    let Some(suite) = Suite::parse(&cli.suite) else {
        return config_error(&format!(
            "unknown suite '{}'; expected relations | pentagon | comult | slice | boson | all",
            cli.suite
        ));
    };
    let Some(format) = (match cli.report.as_str() {
        "text" => Some(ReportFormat::Text),
        "json" => Some(ReportFormat::Json),
        _ => None,
    }) else {
        return config_error(&format!("unknown report format '{}'; expected text | json", cli.report));
    };

    let cfg = RunConfig {
        q_re: cli.q_re,
        q_im: cli.q_im,
        suite,
        window: cli.window,
        tol: cli.tol,
        fourier_samples: cli.fourier_samples,
        coeff_cutoff: cli.coeff_cutoff,
        seed: cli.seed,
        format,
        perturb: cli.perturb.clone(),
    };

    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(msg) => return config_error(&msg),
    };

    let rendered = match cfg.format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => report.to_json(),
    };
    match &cli.out {
        Some(path) => {
            let Ok(mut f) = std::fs::File::create(path) else {
                return config_error(&format!("cannot write report to {}", path.display()));
            };
            if f.write_all(rendered.as_bytes()).is_err() {
                return config_error(&format!("cannot write report to {}", path.display()));
            }
        }
        None => print!("{rendered}"),
    }

    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
