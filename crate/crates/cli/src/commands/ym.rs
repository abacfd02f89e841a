use spin_coulomb::gauge_fields::{
    classify_solution, residual_sweep, Convention, F1Profile, Method, PotentialConfig, SolutionCase,
};
use spin_coulomb::sampling::standard_points;
use spin_coulomb::Error;

use crate::args::{parse_f64_list, ConventionArg, MethodArg, VerifyYmArgs};
use crate::table::{Cell, Table};
use crate::{CliError, Report};

const RESIDUALS: [&str; 4] = ["div_E", "curl_E", "div_B", "curl_B"];

struct Setup {
    label: String,
    cfg: PotentialConfig<f64>,
}

fn no_solutions() -> CliError {
    CliError::Config(
        "case II (g = 0, k != 0): no solutions; the classification table admits only cases I, III and IV".into(),
    )
}

fn configs(a: &VerifyYmArgs, s: f64) -> Result<Vec<Setup>, CliError> {
    let kappa1 = a.kappa1.unwrap_or(1.0);
    if a.g.is_some() || a.k.is_some() {
        let (g, k) = (a.g.unwrap_or(0.0), a.k.unwrap_or(0.0));
        let case = classify_solution(g, k);
        if case == SolutionCase::II {
            return Err(no_solutions());
        }
        let kappa1 = if case == SolutionCase::III { a.kappa1.unwrap_or(0.0) } else { kappa1 };
        let kappa2 = a.kappa2.unwrap_or(0.0);
        return match PotentialConfig::new(g, k, kappa1, kappa2, a.kappa3, s) {
            Ok(cfg) => Ok(vec![Setup { label: case.label().into(), cfg }]),
            Err(Error::ConstraintViolation { .. }) => {
                // Evaluate anyway: the residuals show the constraint failing.
                let cfg = PotentialConfig::unchecked(g, k, kappa1, kappa2, a.kappa3, s, F1Profile::Inverse)?;
                Ok(vec![Setup { label: format!("{}(unconstrained)", case.label()), cfg }])
            }
            Err(e) => Err(e.into()),
        };
    }
    let cases = match &a.case {
        Some(c) => vec![SolutionCase::parse(c).ok_or_else(|| CliError::Config(format!("unknown case `{c}`")))?],
        None => vec![SolutionCase::I, SolutionCase::IV],
    };
    cases
        .into_iter()
        .map(|case| {
            let cfg = match case {
                SolutionCase::I => PotentialConfig::type1(kappa1, a.kappa2.unwrap_or(0.3), a.kappa3, s)?,
                SolutionCase::II => return Err(no_solutions()),
                SolutionCase::III => {
                    PotentialConfig::new(1.0, 0.0, a.kappa1.unwrap_or(0.0), a.kappa2.unwrap_or(0.0), a.kappa3, s)?
                }
                SolutionCase::IV => {
                    if a.kappa2.is_some_and(|k2| k2 != 0.0) {
                        return Err(Error::Kappa2OutsideCaseI.into());
                    }
                    PotentialConfig::type2(1.0, kappa1, a.kappa3, s)?
                }
            };
            Ok(Setup { label: case.label().into(), cfg })
        })
        .collect()
}

pub fn run(a: &VerifyYmArgs) -> Result<Report, CliError> {
    let spins = parse_f64_list(&a.spin, "spin")?;
    let methods: Vec<(Method, &str, f64)> = match a.method {
        MethodArg::Analytic => vec![(Method::Analytic, "analytic", a.tol_analytic)],
        MethodArg::Fd => vec![(Method::FiniteDifference, "fd", a.tol_fd)],
        MethodArg::Both => {
            vec![(Method::Analytic, "analytic", a.tol_analytic), (Method::FiniteDifference, "fd", a.tol_fd)]
        }
    };
    let convention = match a.convention {
        ConventionArg::Covariant => Convention::Covariant,
        ConventionArg::Printed => Convention::Printed,
    };
    let points = standard_points::<f64>();
    let mut t = Table::new(
        "verify-ym",
        &[
            "case", "s", "method", "point", "x[length]", "y[length]", "z[length]", "r[length]", "div_E[code]",
            "curl_E[code]", "div_B[code]", "curl_B[code]", "pass",
        ],
    );
    t.note("units: code units with q = hbar = 1; residuals are Frobenius norms of the matrix-valued field equations");
    // (excess over tolerance, description)
    let mut worst: Option<(f64, String)> = None;
    let mut worst_by_method = vec![0.0f64; methods.len()];
    for &s in &spins {
        for setup in configs(a, s)? {
            for (mi, &(method, mname, tol)) in methods.iter().enumerate() {
                for row in residual_sweep(&setup.cfg, &points, method, convention)? {
                    let max = row.residuals.iter().fold(0.0f64, |m, v| m.max(*v));
                    worst_by_method[mi] = worst_by_method[mi].max(max);
                    let pass = max < tol;
                    if !pass {
                        let (ri, rv) = row
                            .residuals
                            .iter()
                            .enumerate()
                            .fold((0, 0.0f64), |b, (i, v)| if *v > b.1 { (i, *v) } else { b });
                        let ratio = rv / tol;
                        if worst.as_ref().is_none_or(|(w, _)| ratio > *w) {
                            let msg = format!(
                                "case {} s={s} {mname} point {}: {} = {:.3e} exceeds {tol:e}",
                                setup.label, row.index, RESIDUALS[ri], rv
                            );
                            worst = Some((ratio, msg));
                        }
                    }
                    let p = row.position;
                    let mut cells = vec![
                        Cell::text(&setup.label),
                        Cell::Num(s),
                        Cell::text(mname),
                        Cell::Int(row.index as i64),
                        Cell::Num(p[0]),
                        Cell::Num(p[1]),
                        Cell::Num(p[2]),
                        Cell::Num(row.r),
                    ];
                    cells.extend(row.residuals.iter().map(|&v| Cell::Num(v)));
                    cells.push(Cell::Bool(pass));
                    t.push(cells);
                }
            }
        }
    }
    for (&(_, mname, _), w) in methods.iter().zip(&worst_by_method) {
        t.summarize(&format!("max_residual_{mname}"), *w);
    }
    let failure = worst.map(|(_, m)| m);
    t.summarize("status", if failure.is_some() { "fail" } else { "pass" });
    Ok(Report { table: t, failure })
}
