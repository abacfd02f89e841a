use rayon::prelude::*;

use spin_coulomb::angular_spectra::{lambda_hat_eigen, Variant};
use spin_coulomb::radial_spectra::{
    dirac_energy_standard, dirac_energy_type2, dirac_series_standard, dirac_series_type2, fd_radial_oracle,
    general_type1_ode, nonrel_energy_hydrogen, nonrel_energy_type1, nonrel_energy_type2, GridKind, GridSpec,
    Type2System, Units, FINE_STRUCTURE,
};
use spin_coulomb::Error;

use crate::args::{parse_f64_list, parse_int_list, FamilyArg, GridArg, SpectrumArgs};
use crate::table::{Cell, Table};
use crate::{CliError, Report};

/// One parameter set: fixed couplings and `l`, several node counts.
#[derive(Debug, Clone)]
struct Job {
    l: i32,
    case: Option<Variant>,
    params: Vec<f64>,
}

/// Rows for one job plus any oracle failure.
struct JobOut {
    rows: Vec<Vec<Cell>>,
    failure: Option<String>,
}

fn case_label(c: Option<Variant>) -> Cell {
    match c {
        Some(Variant::A) => Cell::text("A"),
        Some(Variant::B) => Cell::text("B"),
        None => Cell::Empty,
    }
}

fn parse_cases(s: &str) -> Result<Vec<Variant>, CliError> {
    s.split(',')
        .map(|p| match p.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Variant::A),
            "B" => Ok(Variant::B),
            other => Err(CliError::Config(format!("unknown case `{other}` (expected A or B)"))),
        })
        .collect()
}

fn ls(opt: &Option<String>, default: &str) -> Result<Vec<i32>, CliError> {
    let v = parse_int_list(opt.as_deref().unwrap_or(default), "l")?;
    if v.iter().any(|&l| l < 0) {
        return Err(CliError::Config("l must be non-negative".into()));
    }
    Ok(v.into_iter().map(|l| l as i32).collect())
}

fn fs(opt: &Option<String>, default: &str, what: &str) -> Result<Vec<f64>, CliError> {
    parse_f64_list(opt.as_deref().unwrap_or(default), what)
}

fn product(ls: &[i32], lists: &[Vec<f64>], cases: &[Option<Variant>]) -> Vec<Job> {
    let mut combos: Vec<Vec<f64>> = vec![vec![]];
    for list in lists {
        combos = combos.iter().flat_map(|c| list.iter().map(move |&v| [c.clone(), vec![v]].concat())).collect();
    }
    let mut jobs = Vec::new();
    for &l in ls {
        for &case in cases {
            for p in &combos {
                jobs.push(Job { l, case, params: p.clone() });
            }
        }
    }
    jobs
}

fn status(e: &Error) -> Cell {
    match e {
        Error::Supercritical(_) => Cell::text(e.to_string()),
        _ => Cell::text(format!("error: {e}")),
    }
}

pub fn run(a: &SpectrumArgs) -> Result<Report, CliError> {
    let units = Units { hbar: a.hbar, mass: a.mass, c: a.c };
    if !(units.hbar > 0.0 && units.mass > 0.0 && units.c > 0.0) {
        return Err(CliError::Config("hbar, mass and c must be positive".into()));
    }
    let grid = GridSpec {
        kind: match a.grid {
            GridArg::Log => GridKind::Log,
            GridArg::Uniform => GridKind::Uniform,
        },
        r_min: if a.grid == GridArg::Log { 1e-12 } else { 0.0 },
        r_max: a.r_max,
        points: a.points,
        ..GridSpec::default()
    };
    let fam = a.family;
    let jobs: Vec<Job> = match fam {
        FamilyArg::Hydrogen => product(&ls(&a.l, "0")?, &[], &[None]),
        FamilyArg::Type1 => product(&ls(&a.l, "0,1,2")?, &[fs(&a.c1, "0.5,1,2", "c1")?], &[None]),
        FamilyArg::Type2 => {
            if a.l.is_none() && a.k.is_none() && a.case.is_none() {
                [(0, 1.0, Variant::A), (1, 1.0, Variant::A), (1, 1.0, Variant::B), (2, 2.0, Variant::B)]
                    .into_iter()
                    .map(|(l, k, c)| Job { l, case: Some(c), params: vec![k] })
                    .collect()
            } else {
                let cases: Vec<Option<Variant>> =
                    parse_cases(a.case.as_deref().unwrap_or("A"))?.into_iter().map(Some).collect();
                product(&ls(&a.l, "0")?, &[fs(&a.k, "1", "k")?], &cases)
            }
        }
        FamilyArg::Dirac => {
            let tau = match &a.tau {
                Some(s) => parse_f64_list(s, "tau")?,
                None => vec![-FINE_STRUCTURE],
            };
            product(&ls(&a.l, "0")?, &[tau], &[None])
        }
        FamilyArg::DiracType2 => product(
            &ls(&a.l, "0,1")?,
            &[fs(&a.kbar, "0.25,0.5", "kbar")?, fs(&a.kappa_bar, "-0.2,-0.5", "kappa-bar")?],
            &[None],
        ),
        FamilyArg::GeneralOde => product(
            &ls(&a.l, "1")?,
            &[fs(&a.c1, "1", "c1")?, fs(&a.c2, "0.001", "c2")?],
            &[None],
        ),
    };

    let principal = match (&a.n, a.levels) {
        (Some(n), _) => Some(parse_int_list(n, "n")?),
        (None, None) if fam == FamilyArg::Hydrogen => Some(vec![1, 2, 3, 4]),
        _ => None,
    };
    if principal.as_ref().is_some_and(|p| p.iter().any(|&n| n < 1)) {
        return Err(CliError::Config("principal quantum numbers start at 1".into()));
    }
    let levels = a.levels.unwrap_or(3);
    if principal.is_none() && levels == 0 {
        return Err(CliError::Config("levels must be at least 1".into()));
    }
    let nodes_for = |l: i32| -> Vec<u32> {
        match &principal {
            Some(p) => p.iter().filter_map(|&n| u32::try_from(n - l as i64 - 1).ok()).collect(),
            None => (0..levels).collect(),
        }
    };

    let (coupling_cols, extra_cols): (&[&str], &[&str]) = match fam {
        FamilyArg::Hydrogen => (&["qk[energy*length]"], &[]),
        FamilyArg::Type1 => (&["c1[1]", "qk3[energy*length]"], &["Lambda[1]", "lambda[1]"]),
        FamilyArg::Type2 => (&["k[1]", "qk3[energy*length]"], &["Omega[1]", "lambda[1]"]),
        FamilyArg::Dirac => (&["tau[1]"], &["E/Mc2[1]", "nu[1]", "series_tail[1]"]),
        FamilyArg::DiracType2 => (
            &["kbar[1]", "kappa_bar[1]"],
            &["E/Mc2[1]", "nu[1]", "X[1]", "nu_above_one", "series_tail[1]", "system_residual[1]", "denominator_defect[1]"],
        ),
        FamilyArg::GeneralOde => (
            &["c1[1]", "c2[1/length^3]", "qk3[energy*length]"],
            &["E_c2_zero[energy]", "V_edge[energy]", "grid_rel_change[1]"],
        ),
    };
    let mut cols = vec!["family", "N", "l", "n", "case"];
    cols.extend_from_slice(coupling_cols);
    cols.push("E[energy]");
    cols.extend_from_slice(extra_cols);
    cols.extend_from_slice(&["E_oracle[energy]", "rel_discrepancy[1]", "status"]);
    let n_extra = extra_cols.len();

    let family_label = match fam {
        FamilyArg::Hydrogen => "hydrogen",
        FamilyArg::Type1 => "type1",
        FamilyArg::Type2 => "type2",
        FamilyArg::Dirac => "dirac",
        FamilyArg::DiracType2 => "dirac-type2",
        FamilyArg::GeneralOde => "general-ode",
    };
    let qk = a.qk;
    let want_oracle = a.oracle;
    let tol = a.tol;

    let outs: Vec<JobOut> = jobs
        .par_iter()
        .map(|job| {
            let l = job.l;
            let mut rows = Vec::new();
            let mut failure = None;
            let lead = |n: u32| {
                vec![
                    Cell::text(family_label),
                    Cell::Int(n as i64),
                    Cell::Int(l as i64),
                    Cell::Int(n as i64 + l as i64 + 1),
                    case_label(job.case),
                ]
            };
            let couplings: Vec<Cell> = match fam {
                FamilyArg::Hydrogen => vec![Cell::Num(qk)],
                FamilyArg::Type1 | FamilyArg::Type2 => vec![Cell::Num(job.params[0]), Cell::Num(qk)],
                FamilyArg::GeneralOde => vec![Cell::Num(job.params[0]), Cell::Num(job.params[1]), Cell::Num(qk)],
                _ => job.params.iter().map(|&v| Cell::Num(v)).collect(),
            };
            let blank_row = |n: u32, st: Cell| {
                let mut r = lead(n);
                r.extend(couplings.clone());
                r.push(Cell::Empty);
                r.extend(std::iter::repeat_n(Cell::Empty, n_extra));
                r.extend([Cell::Empty, Cell::Empty, st]);
                r
            };
            let nodes = if fam == FamilyArg::GeneralOde { vec![0] } else { nodes_for(l) };
            if nodes.is_empty() {
                return JobOut { rows, failure };
            }
            let max_n = *nodes.iter().max().unwrap();

            // Non-relativistic families share one oracle run per job.
            let lambda_eff: Option<Result<f64, Error>> = match fam {
                FamilyArg::Hydrogen => Some(Ok(l as f64)),
                FamilyArg::Type1 => Some(nonrel_energy_type1(0, l, job.params[0], qk, &units).map(|(_, lam)| lam)),
                FamilyArg::Type2 => Some(
                    nonrel_energy_type2(0, l, job.case.unwrap(), job.params[0], qk, &units).map(|(_, _, lam)| lam),
                ),
                _ => None,
            };
            let oracle = match (&lambda_eff, want_oracle) {
                (Some(Ok(lam)), true) => {
                    Some(fd_radial_oracle(*lam, qk, &units, &GridSpec { levels: max_n as usize + 1, ..grid }))
                }
                _ => None,
            };

            for n in nodes {
                let computed: Result<(f64, Vec<Cell>), Error> = match fam {
                    FamilyArg::Hydrogen => nonrel_energy_hydrogen(n, l, qk, &units).map(|line| (line.e_closed, vec![])),
                    FamilyArg::Type1 => {
                        let c1 = job.params[0];
                        match nonrel_energy_type1(n, l, c1, qk, &units) {
                            Ok((line, lam)) => {
                                Ok((line.e_closed, vec![Cell::Num(lam * (lam + 1.0)), Cell::Num(lam)]))
                            }
                            Err(e) => {
                                // Still report Λ₋ for supercritical pairs.
                                let big = lambda_hat_eigen(l, c1).ok().map(|le| le.lambda_minus);
                                let mut r = blank_row(n, status(&e));
                                r[5 + couplings.len() + 1] = Cell::opt(big);
                                rows.push(r);
                                continue;
                            }
                        }
                    }
                    FamilyArg::Type2 => nonrel_energy_type2(n, l, job.case.unwrap(), job.params[0], qk, &units)
                        .map(|(line, omega, lam)| (line.e_closed, vec![Cell::Num(omega), Cell::Num(lam)])),
                    FamilyArg::Dirac => dirac_energy_standard(n, l, job.params[0], &units).and_then(|(line, rel)| {
                        let s = dirac_series_standard(n, l, &rel)?;
                        Ok((
                            line.e_closed,
                            vec![
                                Cell::Num(line.e_closed / units.rest_energy()),
                                Cell::Num(rel.nu),
                                Cell::Num(s.tail_a.max(s.tail_b)),
                            ],
                        ))
                    }),
                    FamilyArg::DiracType2 => dirac_energy_type2(n, l, job.params[0], job.params[1], &units)
                        .and_then(|(line, p)| {
                            let s = dirac_series_type2(n, l, &p)?;
                            Ok((
                                line.e_closed,
                                vec![
                                    Cell::Num(line.e_closed / units.rest_energy()),
                                    Cell::Num(p.rel.nu),
                                    Cell::Num(p.x),
                                    Cell::Bool(p.nu_above_one),
                                    Cell::Num(s.tail_c.max(s.tail_d)),
                                    Cell::Num(s.residual(Type2System::Unprimed, 0.1, 10.0, 400)),
                                    Cell::Num(s.denominator_defect()),
                                ],
                            ))
                        }),
                    FamilyArg::GeneralOde => {
                        let (c1, c2) = (job.params[0], job.params[1]);
                        general_type1_ode(l, c1, c2, qk, &units, &GridSpec { levels: 1, ..grid }).map(|g| {
                            let base = nonrel_energy_type1(0, l, c1, qk, &units).ok().map(|(line, _)| line.e_closed);
                            (
                                g.eigenvalue,
                                vec![Cell::opt(base), Cell::Num(g.edge_potential), Cell::Num(g.oracle.rel_change)],
                            )
                        })
                    }
                };
                let (e, extra) = match computed {
                    Ok(v) => v,
                    Err(e) => {
                        rows.push(blank_row(n, status(&e)));
                        continue;
                    }
                };
                let mut r = lead(n);
                r.extend(couplings.clone());
                r.push(Cell::Num(e));
                r.extend(extra);
                let mut st = Cell::text("ok");
                match &oracle {
                    Some(Ok(o)) => {
                        let eo = o.eigenvalues()[n as usize];
                        let rel = ((e - eo) / e).abs();
                        r.push(Cell::Num(eo));
                        r.push(Cell::Num(rel));
                        if !(rel <= tol) {
                            st = Cell::text("oracle mismatch");
                            failure.get_or_insert(format!(
                                "{family_label} N={n} l={l}: relative discrepancy {rel:.3e} exceeds {tol:e}"
                            ));
                        }
                    }
                    Some(Err(err)) => {
                        r.extend([Cell::Empty, Cell::Empty]);
                        st = Cell::text(format!("oracle failed: {err}"));
                        failure.get_or_insert(format!("{family_label} N={n} l={l}: oracle failed: {err}"));
                    }
                    None => {
                        r.extend([Cell::Empty, Cell::Empty]);
                        if want_oracle && lambda_eff.is_none() {
                            st = Cell::text("ok (no grid oracle for this family)");
                        }
                    }
                }
                r.push(st);
                rows.push(r);
            }
            JobOut { rows, failure }
        })
        .collect();

    let mut t = Table::new("spectrum", &cols);
    t.note(format!(
        "units: hbar = {}, M = {}, c = {}; energy in units of these constants, length = hbar^2/(M |qk|) scale",
        units.hbar, units.mass, units.c
    ));
    if fam == FamilyArg::GeneralOde {
        t.note("general-ode: E is the lowest grid eigenvalue of the full radial equation; E_c2_zero is the closed form at c2 = 0");
    }
    let mut failure = None;
    let mut count = 0;
    for o in outs {
        count += o.rows.len();
        for r in o.rows {
            t.push(r);
        }
        if failure.is_none() {
            failure = o.failure;
        }
    }
    t.summarize("lines", count as i64);
    t.summarize("status", if failure.is_some() { "fail" } else { "pass" });
    Ok(Report { table: t, failure })
}
