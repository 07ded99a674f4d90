use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use chiral_cli::genus_cmd::{evaluate, example_input, parse_genus_input, parse_lambdas, render_machine, render_text};
use chiral_cli::{parse_chart_spec, run_suite, CheckReport, ChartSpec, CliError, RunConfig, Suite};
use chiral_core::sample::PoolConfig;

#[derive(Parser)]
#[command(name = "chiral", version, about = "Exact checks for vertex superalgebroids, frame changes and elliptic genera")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites on a chart specification.
    Verify {
        /// Chart specification file.
        #[arg(long, conflicts_with = "example")]
        spec: Option<String>,
        /// Built-in specification (p1, p2).
        #[arg(long)]
        example: Option<String>,
        /// Override the bundle of the specification (tangent, cotangent).
        #[arg(long)]
        bundle: Option<String>,
        /// Comma-separated suites: axioms, cocycles, susy, gradings, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples per sampled check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Maximal degree of sampled polynomial coefficients.
        #[arg(long, default_value_t = 2)]
        pool_degree: u32,
        /// Sampled integer coefficients lie in -bound..=bound.
        #[arg(long, default_value_t = 3)]
        coeff_bound: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long)]
        output: Option<String>,
        /// Include wall times (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
        /// Perturb c by a skew term built from this function (negative control).
        #[arg(long)]
        corrupt_c: Option<String>,
    },
    /// Equivariant elliptic genus of a torus action with isolated fixed points.
    Genus {
        /// Built-in example (p1, p2).
        #[arg(long, conflicts_with = "input")]
        example: Option<String>,
        /// File with one fixed point per line, as comma-separated eigenvalues.
        #[arg(long)]
        input: Option<String>,
        /// Cotangent eigenvalues at the first fixed point of the example.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 4)]
        qmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Re-render a machine report (from a file or standard input).
    Report {
        #[arg(long)]
        input: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a built-in chart specification document.
    Spec {
        #[arg(long)]
        example: String,
    },
}

fn load_spec(spec: Option<String>, example: Option<String>, bundle: Option<String>) -> Result<ChartSpec, CliError> {
    let text = match (spec, example) {
        (Some(path), _) => fs::read_to_string(path)?,
        (None, Some(name)) => ChartSpec::builtin_text(&name)
            .ok_or_else(|| CliError::Invalid(format!("unknown example '{name}'")))?
            .to_string(),
        (None, None) => return Err(CliError::Invalid("give --spec FILE or --example NAME".into())),
    };
    let mut spec = parse_chart_spec(&text)?;
    if let Some(b) = bundle {
        spec.bundle = match b.as_str() {
            "tangent" => chiral_core::charts::BundleSpec::tangent(),
            "cotangent" => chiral_core::charts::BundleSpec::cotangent(),
            other => return Err(CliError::UnknownBundleKind { line: 0, kind: other.to_string() }),
        };
    }
    Ok(spec)
}

fn render(report: &CheckReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Machine => report.to_machine(),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify {
            spec,
            example,
            bundle,
            suite,
            seed,
            samples,
            pool_degree,
            coeff_bound,
            format,
            output,
            timings,
            corrupt_c,
        } => {
            let spec = load_spec(spec, example, bundle)?;
            let suites = Suite::parse_list(&suite)?;
            let cfg = RunConfig {
                seed,
                samples,
                pool: PoolConfig {
                    degree: pool_degree,
                    coeff_bound,
                    ..PoolConfig::default()
                },
                timings,
                corrupt_c,
            };
            let report = run_suite(&spec, &suites, &cfg)?;
            let text = render(&report, format);
            match output {
                Some(path) => {
                    fs::write(path, text)?;
                    println!("{}", report.summary());
                }
                None => print!("{text}"),
            }
            Ok(!report.failed())
        }
        Command::Genus {
            example,
            input,
            lambda,
            qmax,
            format,
        } => {
            let lambdas = lambda.as_deref().map(parse_lambdas).transpose()?;
            let gi = match (example, input) {
                (_, Some(path)) => {
                    if lambdas.is_some() {
                        return Err(CliError::Invalid("--lambda applies to built-in examples only".into()));
                    }
                    parse_genus_input(&fs::read_to_string(path)?, qmax)?
                }
                (Some(name), None) => example_input(&name, lambdas.as_deref(), qmax)?,
                (None, None) => return Err(CliError::Invalid("give --example NAME or --input FILE".into())),
            };
            let r = evaluate(&gi)?;
            match format {
                Format::Text => print!("{}", render_text(&r)),
                Format::Machine => print!("{}", render_machine(&r)),
            }
            Ok(r.two_paths_agree)
        }
        Command::Report { input, format } => {
            let text = match input {
                Some(path) => fs::read_to_string(path)?,
                None => {
                    let mut s = String::new();
                    std::io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            let report = CheckReport::parse_machine(&text)?;
            print!("{}", render(&report, format));
            Ok(!report.failed())
        }
        Command::Spec { example } => {
            let text = ChartSpec::builtin_text(&example)
                .ok_or_else(|| CliError::Invalid(format!("unknown example '{example}'")))?;
            print!("{text}");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
