use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rankm_core::harness::{log_grid, Coordinate};

#[derive(Debug, Parser)]
#[command(
    name = "rankm",
    version,
    about = "Eigenvector perturbation bounds for rank-m updates of ill-conditioned SPD matrices"
)]
pub struct Cli {
    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true, env = "RANKM_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the eigendecomposition of the perturbed matrix of an instance file
    Eig(EigArgs),
    /// Tabulate every bound of an instance file against the oracle
    Bounds(BoundsArgs),
    /// Certify all bounds over a grid of generated instances
    Verify(VerifyArgs),
    /// Follow one coordinate of the top eigenvector across condition numbers
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Cyclic Jacobi on the assembled matrix
    Oracle,
    /// Secular equation plus closed-form eigenvectors (m = 1 only)
    Secular,
}

#[derive(Debug, Args)]
pub struct EigArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Oracle)]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    pub instance: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Dimensions, comma separated
    #[arg(long = "d", value_delimiter = ',', default_values_t = [2usize, 3, 5, 10, 20])]
    pub dims: Vec<usize>,
    /// Numbers of perturbation vectors, comma separated
    #[arg(long = "m", value_delimiter = ',', default_values_t = [0usize, 1, 2, 3, 5])]
    pub ms: Vec<usize>,
    /// Use seeds 1..=N
    #[arg(long, default_value_t = 5, conflicts_with = "seed")]
    pub seeds: u64,
    /// Use the single seed S
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest eigenvalues, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1e2, 1e4, 1e6, 1e8])]
    pub lambda1_list: Vec<f64>,
    /// Multiply every bound by this factor before checking (checker self-test)
    #[arg(long, default_value_t = 1.0)]
    pub perturb_bound: f64,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Dimension (taken from the file with --fixed)
    #[arg(long = "d", required_unless_present = "fixed")]
    pub d: Option<usize>,
    /// Number of perturbation vectors (taken from the file with --fixed)
    #[arg(long = "m", required_unless_present = "fixed")]
    pub m: Option<usize>,
    /// Coordinate of the top eigenvector: 2, last, or a 1-based index
    #[arg(long = "j", default_value = "2")]
    pub j: CoordinateArg,
    /// Largest eigenvalues as from:to:count, log-spaced
    #[arg(long = "lambda1", default_value = "1e2:1e8:7")]
    pub lambda1: GridArg,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Independent vector draws, seeds seed..seed+K-1
    #[arg(long, default_value_t = 1)]
    pub realizations: u64,
    /// Use the vectors of this instance file instead of random ones
    #[arg(long, conflicts_with = "realizations")]
    pub fixed: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinateArg(pub Coordinate);

impl FromStr for CoordinateArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "last" => Ok(Self(Coordinate::Last)),
            "2" => Ok(Self(Coordinate::Second)),
            _ => match s.parse::<usize>() {
                Ok(j) if j >= 1 => Ok(Self(Coordinate::Index(j))),
                _ => Err(format!("expected 2, last or a positive index, got {s:?}")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridArg {
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

impl GridArg {
    pub fn points(&self) -> Vec<f64> {
        log_grid(self.from.log10(), self.to.log10(), self.count)
    }
}

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [from, to, count] = parts[..] else {
            return Err(format!("expected from:to:count, got {s:?}"));
        };
        let real = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|x| *x >= 1.0 && x.is_finite())
                .ok_or_else(|| format!("{t:?} is not a finite value >= 1"))
        };
        let (from, to) = (real(from)?, real(to)?);
        if to < from {
            return Err(format!("grid must ascend, got {from} > {to}"));
        }
        let count = count.parse::<usize>().map_err(|_| format!("{count:?} is not a point count"))?;
        if count == 0 {
            return Err("grid needs at least one point".into());
        }
        Ok(Self { from, to, count })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn grid_parses() {
        let g: GridArg = "1e2:1e8:7".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 7);
        assert_eq!(pts[0], 100.0);
        assert!((pts[6] - 1e8).abs() < 1e-6);
        assert!("1e2:1e8".parse::<GridArg>().is_err());
        assert!("1e8:1e2:3".parse::<GridArg>().is_err());
        assert!("0.5:1e2:3".parse::<GridArg>().is_err());
    }

    #[test]
    fn coordinate_parses() {
        assert_eq!("last".parse::<CoordinateArg>().unwrap().0, Coordinate::Last);
        assert_eq!("2".parse::<CoordinateArg>().unwrap().0, Coordinate::Second);
        assert_eq!("7".parse::<CoordinateArg>().unwrap().0, Coordinate::Index(7));
        assert!("0".parse::<CoordinateArg>().is_err());
        assert!("first".parse::<CoordinateArg>().is_err());
    }
}
