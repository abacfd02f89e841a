use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "spin-coulomb", version, about = "Spin-dependent Coulomb potentials: field checks, spectra, orbits")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; relative paths resolve against SPIN_COULOMB_OUT_DIR when set. Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// File of `key = value` lines; each entry overrides the flag `--key`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Add a timestamp to the output header.
    #[arg(long, global = true, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true", default_value_t = false)]
    pub stamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Yang-Mills residuals of the spin potentials at the standard sample points.
    #[command(name = "verify-ym", args_override_self = true)]
    VerifyYm(VerifyYmArgs),
    /// Energy levels from the closed forms, optionally checked against the grid eigensolver.
    #[command(args_override_self = true)]
    Spectrum(SpectrumArgs),
    /// Critical vector-potential coupling k_cr for each nuclear charge Z.
    #[command(name = "kcr-table", args_override_self = true)]
    KcrTable(KcrArgs),
    /// Largest nuclear charge with a bound state as a function of x = ek/c.
    #[command(args_override_self = true)]
    Zmax(ZmaxArgs),
    /// Classical Coulomb orbit with a conservation ledger and conic fit.
    #[command(args_override_self = true)]
    Orbit(OrbitArgs),
    /// Force components along a radial ray.
    #[command(args_override_self = true)]
    Forces(ForcesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Fd,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Covariant,
    Printed,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyYmArgs {
    /// Solution case I-IV; without this and without --g/--k, cases I and IV are run.
    #[arg(long)]
    pub case: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Defaults to 1 (0 in case III).
    #[arg(long, allow_hyphen_values = true)]
    pub kappa1: Option<f64>,
    /// Defaults to 0.3 in case I, 0 otherwise.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa2: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub kappa3: f64,
    /// Comma-separated spins.
    #[arg(long, default_value = "0.5,1")]
    pub spin: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = ConventionArg::Covariant)]
    pub convention: ConventionArg,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_analytic: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub tol_fd: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Hydrogen,
    Type1,
    Type2,
    Dirac,
    DiracType2,
    GeneralOde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Log,
    Uniform,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(value_enum)]
    pub family: FamilyArg,
    /// Principal quantum numbers n = N + l + 1, e.g. `1..4` or `1,3`.
    #[arg(long)]
    pub n: Option<String>,
    /// Radial node counts N = 0..levels-1 (used when --n is absent).
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c2: Option<String>,
    /// Type-II vector-potential strength.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Coupled-harmonic case, A (j = l + 1/2) or B (j = l - 1/2).
    #[arg(long)]
    pub case: Option<String>,
    /// Coulomb coupling q*kappa (q*kappa3 for the spin families).
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    pub qk: f64,
    /// Dirac coupling tau; defaults to -alpha.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub kbar: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa_bar: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Add grid-eigensolver energies and relative discrepancies.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true", default_value_t = false)]
    pub oracle: bool,
    /// Largest accepted relative discrepancy against the oracle.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = GridArg::Log)]
    pub grid: GridArg,
    #[arg(long, default_value_t = 200.0)]
    pub r_max: f64,
    /// Interior points of the coarse grid; the fine grid doubles it.
    #[arg(long, default_value_t = 8000)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct KcrArgs {
    /// Nuclear charges, e.g. `1..10,20`; defaults to the 26 reference values.
    #[arg(long)]
    pub z: Option<String>,
    #[arg(long, default_value_t = spin_coulomb::radial_spectra::FINE_STRUCTURE)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ZmaxArgs {
    /// Values of x = ek/c.
    #[arg(long, allow_hyphen_values = true, default_value = "0,0.5,1,2,5,10")]
    pub x: String,
    #[arg(long, default_value_t = spin_coulomb::radial_spectra::FINE_STRUCTURE)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    /// Energy E.
    #[arg(long = "E", allow_hyphen_values = true, default_value_t = -0.3)]
    pub energy: f64,
    /// Angular momentum.
    #[arg(long = "L", allow_hyphen_values = true, default_value_t = 0.8)]
    pub ell: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// q*kappa; negative is attractive.
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    pub coupling: f64,
    /// Bound orbits: number of periods.
    #[arg(long, default_value_t = 10)]
    pub periods: usize,
    /// Bound orbits: dt = T / steps-per-period.
    #[arg(long, default_value_t = 10_000)]
    pub steps_per_period: usize,
    /// Explicit time step; required for unbound orbits (default 1e-3 there).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Explicit step count; unbound default 40000.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Record every stride-th step.
    #[arg(long, default_value_t = 100)]
    pub stride: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_energy: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_ang_mom: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Commutator,
    Printed,
}

#[derive(Debug, Clone, Args)]
pub struct ForcesArgs {
    /// I or IV.
    #[arg(long, default_value = "IV")]
    pub case: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub kappa1: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.3)]
    pub kappa2: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub kappa3: f64,
    #[arg(long, default_value_t = 0.5)]
    pub spin: f64,
    /// Ray direction x,y,z (normalized).
    #[arg(long, allow_hyphen_values = true, default_value = "1,2,2")]
    pub direction: String,
    #[arg(long, default_value_t = 0.5)]
    pub r_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 11)]
    pub points: usize,
    /// Classical velocity vx,vy,vz (times the identity on spin space).
    #[arg(long, allow_hyphen_values = true, default_value = "0.2,-0.1,0.3")]
    pub velocity: String,
    #[arg(long, value_enum, default_value_t = FormArg::Commutator)]
    pub form: FormArg,
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true", default_value_t = false)]
    pub relativistic: bool,
    /// Speed of light; defaults to q/(g*hbar) so that q*k/c = 1.
    #[arg(long)]
    pub c: Option<f64>,
    /// Tolerance of the per-point check column.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

fn bad(what: &str, s: &str) -> CliError {
    CliError::Config(format!("cannot parse {what} from `{s}`"))
}

pub fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let v: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if !v.is_empty() && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(bad(what, s)),
    }
}

/// Integers as comma-separated items, each a value or an inclusive range `a..b`.
pub fn parse_int_list(s: &str, what: &str) -> Result<Vec<i64>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let a: i64 = a.trim().parse().map_err(|_| bad(what, s))?;
            let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad(what, s))?;
            if b < a {
                return Err(bad(what, s));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad(what, s))?);
        }
    }
    if out.is_empty() {
        return Err(bad(what, s));
    }
    Ok(out)
}

pub fn parse_vec3(s: &str, what: &str) -> Result<[f64; 3], CliError> {
    let v = parse_f64_list(s, what)?;
    <[f64; 3]>::try_from(v).map_err(|_| bad(what, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list("1..4", "n").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_int_list("0, 2..3,7", "n").unwrap(), vec![0, 2, 3, 7]);
        assert!(parse_int_list("4..1", "n").is_err());
        assert!(parse_int_list("a", "n").is_err());
    }

    #[test]
    fn float_lists() {
        assert_eq!(parse_f64_list("-0.2,-0.5", "x").unwrap(), vec![-0.2, -0.5]);
        assert!(parse_f64_list("1,nan", "x").is_err());
        assert!(parse_vec3("1,2", "v").is_err());
    }
}
