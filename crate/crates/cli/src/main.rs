use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use metaplectic_cli::commands::{self, PropertyOptions};
use metaplectic_cli::report::{Format, Report};
use metaplectic_cli::scenario::{parse_parameter, resolve_catalog, Scenario};
use metaplectic_cli::{casebook, CliError, EXIT_DOMAIN, EXIT_OK};

#[derive(Parser)]
#[command(name = "metaplectic", version, about = "Parameters, signs and multiplicities for metaplectic groups")]
struct Cli {
    /// Catalog JSON file, or `builtin:<name>`; repeatable, merged in order.
    #[arg(long = "catalog", global = true)]
    catalogs: Vec<String>,
    /// Scenario JSON file.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "md", global = true)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest n for exhaustive enumeration.
    #[arg(long = "max-n", global = true)]
    max_n: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Component group, splittings, signs and descent for one local parameter.
    Analyze {
        /// Summands as `[m*]id:b` joined by `+` or `,`, or a JSON array.
        parameter: Option<String>,
    },
    /// Evaluate the global multiplicity formula of a scenario.
    Multiplicity,
    /// Run a built-in reference case.
    Casebook {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(casebook::CASES))]
        case: String,
    },
    /// Check catalog cross-constraints; with --max-n / --seed also run property checks.
    Validate,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let scenario = cli.scenario.as_deref().map(Scenario::load).transpose()?;
    match &cli.command {
        Command::Analyze { parameter } => {
            let cat = resolve_catalog(&cli.catalogs, scenario.as_ref())?;
            let summands = match (parameter, scenario.as_ref().and_then(|s| s.parameter.clone())) {
                (Some(p), _) => parse_parameter(p)?,
                (None, Some(p)) => p,
                (None, None) => return Err(CliError::Usage("analyze needs a parameter or a scenario with `parameter`".into())),
            };
            commands::analyze(&cat, summands)
        }
        Command::Multiplicity => {
            let sc = scenario.ok_or_else(|| CliError::Usage("multiplicity needs --scenario".into()))?;
            let cat = resolve_catalog(&cli.catalogs, Some(&sc))?;
            commands::multiplicity(&cat, &sc)
        }
        Command::Casebook { case } => casebook::run_case(case),
        Command::Validate => {
            let cat = resolve_catalog(&cli.catalogs, scenario.as_ref())?;
            commands::validate(&cat, PropertyOptions { max_n: cli.max_n, seed: cli.seed })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(if report.ok { EXIT_OK } else { EXIT_DOMAIN } as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
