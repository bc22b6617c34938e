use clap::{Args, Parser, Subcommand};
use paircat_cli::config::parse_value;
use paircat_cli::{run, Command, Grid, Overrides, SweepConfig};
use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "paircat",
    version,
    about = "Pair cat state sweeps: entanglement, witness and teleportation fidelity as CSV"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Relative entropy of entanglement over (xi, q, phi, d).
    Entanglement(SweepArgs),
    /// Reduction-criterion witness values over (xi, q, phi, d).
    Witness(SweepArgs),
    /// Average teleportation fidelity for coherent targets; damped when a
    /// gamma_t grid is given.
    Fidelity(SweepArgs),
}

fn grid_arg(s: &str) -> Result<Grid, String> {
    s.parse()
}

#[derive(Args)]
struct SweepArgs {
    /// Single |xi| value.
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true, conflicts_with = "xi_range")]
    xi: Option<f64>,
    /// |xi| grid as start:stop:points.
    #[arg(long, value_parser = grid_arg)]
    xi_range: Option<Grid>,
    /// Photon-number difference; repeat for several curves.
    #[arg(long)]
    q: Vec<usize>,
    /// Single phi value; accepts expressions such as pi/2.
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true, conflicts_with = "phi_range")]
    phi: Option<f64>,
    #[arg(long, value_parser = grid_arg)]
    phi_range: Option<Grid>,
    /// Degree of damping grid (entanglement, witness).
    #[arg(long, value_parser = grid_arg)]
    d_range: Option<Grid>,
    /// gamma t grid (fidelity).
    #[arg(long, value_parser = grid_arg)]
    gamma_t_range: Option<Grid>,
    /// Coherent target amplitude; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Vec<f64>,
    /// Ladder truncation [default: 100].
    #[arg(long)]
    n_max: Option<usize>,
    /// Target Fock truncation [default: 64].
    #[arg(long)]
    k_max: Option<usize>,
    /// TOML sweep description; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads [default: all cores].
    #[arg(long)]
    threads: Option<usize>,
}

impl SweepArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            xi: self.xi.map(Grid::point).or(self.xi_range),
            phi: self.phi.map(Grid::point).or(self.phi_range),
            d: self.d_range,
            gamma_t: self.gamma_t_range,
            q: self.q.clone(),
            alpha: self.alpha.clone(),
            n_max: self.n_max,
            k_max: self.k_max,
            output: self.out.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Cmd::Entanglement(a) => (Command::Entanglement, a),
        Cmd::Witness(a) => (Command::Witness, a),
        Cmd::Fidelity(a) => (Command::Fidelity, a),
    };
    match execute(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("paircat: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command, args: &SweepArgs) -> Result<(), Box<dyn std::error::Error>> {
    if args.threads == Some(0) {
        return Err("--threads must be >= 1".into());
    }
    let cfg = SweepConfig::resolve(command, args.config.as_deref(), args.overrides())?;
    let table = run(&cfg, args.threads)?;
    match &cfg.output {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            table.write_csv(BufWriter::new(file))?;
        }
        None => table.write_csv(io::stdout().lock())?,
    }
    Ok(())
}
