mod knots;
mod report;
mod tri;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{Failure, Format};

#[derive(Parser, Debug)]
#[command(name = "bandforge", version, about = "Two-bridge banding arithmetic, surgery bookkeeping and certified gluing equations")]
struct Cli {
    /// Emit the report as JSON (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a plain-text summary instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// SnapPea triangulations: parse, solve, volume, certify.
    #[command(subcommand)]
    Tri(TriCommand),
    /// Two-bridge links and Conway forms.
    #[command(subcommand)]
    Twobridge(knots::TwoBridgeCommand),
    /// Slopes and lens spaces.
    #[command(subcommand)]
    Surgery(knots::SurgeryCommand),
}

#[derive(Subcommand, Debug)]
pub enum TriCommand {
    /// Parse and validate a triangulation.
    Parse(TriArgs),
    /// Solve the gluing equations by Newton's method from the stored shapes.
    Solve(TriArgs),
    /// Solve, then report the hyperbolic volume.
    Volume(TriArgs),
    /// Certify a solution with the Krawczyk test.
    Certify(CertifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct TriArgs {
    /// Triangulation file; `-` or nothing reads standard input.
    #[arg(conflicts_with = "fixture")]
    pub path: Option<String>,
    /// Use an embedded fixture (A or B).
    #[arg(long)]
    pub fixture: Option<String>,
    /// Newton stopping tolerance on the maximum residual.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Newton iteration limit.
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
}

#[derive(Args, Debug, Clone)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub tri: TriArgs,
    /// Try only this box radius instead of the default ladder.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Certify both embedded fixtures and every `*.tri` file in
    /// `$BANDFORGE_FIXTURE_DIR`, concurrently.
    #[arg(long, conflicts_with_all = ["path", "fixture"])]
    pub all_fixtures: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap uses 2 for usage errors, which is reserved for parse
            // failures here.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let format = if cli.text { Format::Text } else { Format::Json };
    let outcome = match &cli.command {
        Command::Tri(cmd) => tri::run(cmd),
        Command::Twobridge(cmd) => knots::run_twobridge(cmd),
        Command::Surgery(cmd) => knots::run_surgery(cmd),
    };
    let code = match outcome {
        Ok(report) => {
            println!("{}", report.render(format).trim_end());
            report.exit_code()
        }
        Err(Failure {
            code,
            message,
            report,
        }) => {
            if let Some(report) = report {
                println!("{}", report.render(format).trim_end());
            }
            eprintln!("error: {message}");
            code
        }
    };
    ExitCode::from(code as u8)
}
