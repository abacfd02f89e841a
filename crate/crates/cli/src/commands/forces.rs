use spin_coulomb::gauge_fields::{PotentialConfig, SolutionCase};
use spin_coulomb::spin_algebra::MatrixVec3;
use spin_coulomb::spin_force::{force_type1, force_type1_fd, force_type2, force_type2_direct, ForceOptions, MagneticForm};

use crate::args::{parse_vec3, ForcesArgs, FormArg};
use crate::table::{Cell, Table};
use crate::{CliError, Report};

/// `⟨m = s| F_i |m = s⟩`, the expectation in the top spin state.
fn top_state(f: &MatrixVec3<f64>) -> [f64; 3] {
    f.components().map(|c| c[(0, 0)].re)
}

pub fn run(a: &ForcesArgs) -> Result<Report, CliError> {
    let case = SolutionCase::parse(&a.case).ok_or_else(|| CliError::Config(format!("unknown case `{}`", a.case)))?;
    let cfg = match case {
        SolutionCase::I => PotentialConfig::type1(a.kappa1, a.kappa2, a.kappa3, a.spin)?,
        SolutionCase::IV => PotentialConfig::type2(a.k, a.kappa1, a.kappa3, a.spin)?,
        _ => return Err(CliError::Config("forces are tabulated for cases I and IV".into())),
    };
    let dir = parse_vec3(&a.direction, "direction")?;
    let dn = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
    if !(dn > 0.0) {
        return Err(CliError::Config("direction must be nonzero".into()));
    }
    if !(a.r_min > 0.0 && a.r_max >= a.r_min) || a.points == 0 {
        return Err(CliError::Config("need 0 < r-min <= r-max and at least one point".into()));
    }
    let v = parse_vec3(&a.velocity, "velocity")?;
    let mut opts = ForceOptions::matched(&cfg);
    if let Some(c) = a.c {
        opts.c = c;
    }
    opts.form = match a.form {
        FormArg::Commutator => MagneticForm::Commutator,
        FormArg::Printed => MagneticForm::Printed,
    };
    opts.relativistic = a.relativistic;
    let velocity = MatrixVec3::numeric(v, cfg.dim());

    let mut t = Table::new(
        "forces",
        &[
            "r[length]", "x[length]", "y[length]", "z[length]", "Fx[force]", "Fy[force]", "Fz[force]",
            "|F_magnetic|[force]", "|F_electric|[force]", "|F_spin|[force]", "check[force]",
        ],
    );
    t.note("units: code units with q = hbar = M = 1; F components are expectations in the m = s spin state, norms are Frobenius");
    t.note(match case {
        SolutionCase::I => "check: max entry of analytic minus finite-difference -grad(q phi)",
        _ => "check: max entry of decomposition total minus the direct assembly from E, B and i[phi, A]",
    });
    let mut worst = 0.0f64;
    let steps = a.points.saturating_sub(1).max(1) as f64;
    for i in 0..a.points {
        let r = if a.points == 1 { a.r_min } else { a.r_min + (a.r_max - a.r_min) * i as f64 / steps };
        let pos = dir.map(|c| c * r / dn);
        let (total, parts, check) = match case {
            SolutionCase::I => {
                let f = force_type1(&cfg, pos)?;
                let check = f.sub(&force_type1_fd(&cfg, pos)?)?.max_abs();
                (f, [Cell::Empty, Cell::Empty, Cell::Empty], check)
            }
            _ => {
                let d = force_type2(&cfg, &velocity, pos, &opts)?;
                let check = d.total.sub(&force_type2_direct(&cfg, &velocity, pos, &opts)?)?.max_abs();
                let parts = [d.magnetic_part.norm(), d.electric_part.norm(), d.spin_part.norm()].map(Cell::Num);
                (d.total, parts, check)
            }
        };
        worst = worst.max(check);
        let e = top_state(&total);
        let mut row = vec![r, pos[0], pos[1], pos[2], e[0], e[1], e[2]].into_iter().map(Cell::Num).collect::<Vec<_>>();
        row.extend(parts);
        row.push(Cell::Num(check));
        t.push(row);
    }
    t.summarize("max_check", worst);
    let failure = (!(worst <= a.tol)).then(|| format!("force check {worst:.3e} exceeds {:e}", a.tol));
    t.summarize("status", if failure.is_some() { "fail" } else { "pass" });
    Ok(Report { table: t, failure })
}
