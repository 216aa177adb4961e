//! The `frogbi` command line.
//!
//! Exit codes: 0 success, 1 failed check or validation, 2 usage error.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bounds::{bounds_report, table1, table1_mismatches, ub_root, ub_root_n, DEFAULT_TOL, TABLE1_TOL};
use crate::checks::{run_suite, Suite};
use crate::error::Error;
use crate::law::InitLaw;
use crate::output::{self, Format, OutputSpec, RootRow};
use crate::sim::{sweep, SimConfig, DEFAULT_AWAKE_CAP, DEFAULT_HORIZON};
use crate::tree::TreeParams;
use crate::{Result, Survival};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "frogbi", version, about = "Frog model with death on biregular trees: bounds, roots, simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl From<&OutputArgs> for OutputSpec {
    fn from(a: &OutputArgs) -> Self {
        OutputSpec { format: a.format, path: a.output.clone() }
    }
}

#[derive(Debug, Args)]
struct TreeArgs {
    #[arg(long)]
    d1: u32,
    #[arg(long)]
    d2: u32,
    /// Initial law: const:k, bernoulli:q, poisson:mu or geometric:r.
    #[arg(long, default_value = "const:1")]
    eta: InitLaw,
}

impl TreeArgs {
    fn tree(&self) -> Result<TreeParams> {
        TreeParams::new(self.d1, self.d2)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lower and upper bounds on p_c for one tree and law.
    Bounds {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Recompute the reference table for η ≡ 1 and compare.
    Table1 {
        /// Allowed absolute deviation from the four-decimal reference values.
        #[arg(long, default_value_t = TABLE1_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Truncated roots p̃_n next to their limit p̃.
    Roots {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,20,50,100,200")]
        n: Vec<u32>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Survival fraction of the frog model across a grid of p.
    Sweep {
        #[command(flatten)]
        tree: TreeArgs,
        /// lo:hi:step (inclusive) or a comma-separated list.
        #[arg(long, value_parser = parse_grid)]
        p: Grid,
        #[arg(long, default_value_t = 1000)]
        replicas: u64,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u64,
        /// Cumulative woken-frog count counted as survival.
        #[arg(long, default_value_t = DEFAULT_AWAKE_CAP)]
        cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reuse one realization per replica across the grid.
        #[arg(long)]
        coupled: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a named invariant suite.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Parsed p-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

/// Parses `lo:hi:step` (endpoints included) or `a,b,c`.
pub fn parse_grid(s: &str) -> Result<Grid> {
    let bad = |why: &str| Error::Parse(format!("p grid `{s}`: {why}"));
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| bad(&e.to_string()));
    let values = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(bad("range must be lo:hi:step"));
        };
        let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
        if !(step > 0.0) || !(hi >= lo) {
            return Err(bad("need step > 0 and hi >= lo"));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as u64;
        if count > 1_000_000 {
            return Err(bad("too many points"));
        }
        // round away accumulated binary noise so 0.5 + 3 * 0.05 prints as 0.65
        (0..=count).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<f64>>>()?
    };
    for &p in &values {
        Survival::new(p).map_err(|_| bad("values must lie in [0, 1]"))?;
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("values must be strictly increasing"));
    }
    Ok(Grid(values))
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidTree { .. }
        | Error::DegenerateTree { .. }
        | Error::InvalidLaw(_)
        | Error::InvalidParam { .. }
        | Error::ParityMismatch { .. }
        | Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

enum Failure {
    Lib(Error),
    Io(io::Error),
    /// Command ran but its verdict is negative; details were already printed.
    Verdict(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
        Err(Failure::Verdict(msg)) => {
            let _ = writeln!(stderr, "{msg}");
            EXIT_FAILURE
        }
    }
}

fn execute(command: &Command, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match command {
        Command::Bounds { tree, tol, out } => {
            let row = bounds_report(tree.tree()?, &tree.eta, *tol)?;
            let spec = OutputSpec::from(out);
            output::write_bounds(&mut spec.open(stdout)?, spec.format, &[row])?;
        }
        Command::Table1 { tol, out } => {
            let rows = table1(DEFAULT_TOL)?;
            let spec = OutputSpec::from(out);
            output::write_table1(&mut spec.open(stdout)?, spec.format, &rows)?;
            let bad = table1_mismatches(&rows, *tol);
            if !bad.is_empty() {
                let cells: Vec<String> = bad
                    .iter()
                    .map(|m| {
                        format!("({}, {}) {}: expected {}, computed {}", m.d1, m.d2, m.column, m.expected, m.computed)
                    })
                    .collect();
                return Err(Failure::Verdict(format!("table mismatch at tol {tol}:\n  {}", cells.join("\n  "))));
            }
        }
        Command::Roots { tree, n, tol, out } => {
            let t = tree.tree()?;
            t.require_branching()?;
            let q = tree.eta.q();
            let limit = ub_root(t, q, *tol)?.root;
            let rows = n
                .iter()
                .map(|&n| {
                    let r = match ub_root_n(t, q, n, *tol) {
                        Ok(r) => Some(r.root),
                        Err(Error::NoSignChange { f_hi, .. }) if f_hi < 0.0 => None,
                        Err(e) => return Err(e),
                    };
                    Ok(RootRow { n, ub_root_n: r, ub_root: limit, gap: r.map(|r| r - limit) })
                })
                .collect::<Result<Vec<_>>>()?;
            let spec = OutputSpec::from(out);
            output::write_roots(&mut spec.open(stdout)?, spec.format, &rows)?;
        }
        Command::Sweep { tree, p, replicas, horizon, cap, seed, coupled, out } => {
            let template = SimConfig::new(tree.tree()?, tree.eta, Survival::new(p.0[0])?)
                .with_horizon(*horizon)
                .with_awake_cap(*cap)
                .with_seed(*seed);
            let points = sweep(&template, &p.0, *replicas, *coupled)?;
            let spec = OutputSpec::from(out);
            output::write_sweep(&mut spec.open(stdout)?, spec.format, &points)?;
        }
        Command::Check { suite, seed, out } => {
            let rows = run_suite(*suite, *seed)?;
            let spec = OutputSpec::from(out);
            output::write_checks(&mut spec.open(stdout)?, spec.format, &rows)?;
            let failed: Vec<&str> = rows.iter().filter(|r| !r.passed).map(|r| r.invariant.as_str()).collect();
            if !failed.is_empty() {
                return Err(Failure::Verdict(format!("failed invariants: {}", failed.join(", "))));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("0.5:0.6:0.05").unwrap().0, vec![0.5, 0.55, 0.6]);
        assert_eq!(parse_grid("0.1,0.2").unwrap().0, vec![0.1, 0.2]);
        assert_eq!(parse_grid("0.3").unwrap().0, vec![0.3]);
        for bad in ["", "0.5:0.4:0.1", "0.1:0.2", "0.1:0.2:0", "0.2,0.1", "x", "0.5,1.5"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn usage_errors_exit_2() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["frogbi", "bounds", "--d1", "1", "--d2", "1"], &mut out, &mut err), EXIT_USAGE);
        assert!(String::from_utf8_lossy(&err).contains("requires d1 ≥ 2 or d2 ≥ 2"));
        assert_eq!(
            run(["frogbi", "bounds", "--d1", "2", "--d2", "2", "--eta", "pois:1"], &mut out, &mut err),
            EXIT_USAGE
        );
        assert_eq!(run(["frogbi", "nope"], &mut out, &mut err), EXIT_USAGE);
    }
}
