use spin_coulomb::classical_orbit::{eccentricity, fit_trajectory, integrate_orbit_sampled, kepler_period, OrbitState};

use crate::args::OrbitArgs;
use crate::table::{Cell, Table};
use crate::{CliError, Report};

pub fn run(a: &OrbitArgs) -> Result<Report, CliError> {
    let init = OrbitState::from_invariants(a.energy, a.ell, a.mass, a.coupling)?;
    let period = kepler_period(a.energy, a.mass, a.coupling).ok();
    let (dt, steps) = match period {
        Some(p) => (a.dt.unwrap_or(p / a.steps_per_period as f64), a.steps.unwrap_or(a.periods * a.steps_per_period)),
        None => (a.dt.unwrap_or(1e-3), a.steps.unwrap_or(40_000)),
    };
    if steps == 0 {
        return Err(CliError::Config("at least one step is required".into()));
    }
    let traj = integrate_orbit_sampled(init, dt, steps, a.stride)?;
    let mut t = Table::new(
        "orbit",
        &["t[time]", "x[length]", "y[length]", "r[length]", "theta[rad]", "E[energy]", "L[action]"],
    );
    t.note("units: code units of the given mass and coupling q*kappa");
    for (i, p) in traj.points.iter().enumerate() {
        let s = traj.state(i);
        let [x, y] = p.position;
        t.push(vec![
            Cell::Num(p.t),
            Cell::Num(x),
            Cell::Num(y),
            Cell::Num(s.radius()),
            Cell::Num(y.atan2(x)),
            Cell::Num(s.energy()),
            Cell::Num(s.angular_momentum()),
        ]);
    }
    let (e_closed, _) = eccentricity(a.energy, a.ell, a.mass, a.coupling)?;
    t.summarize("dt", dt);
    t.summarize("steps", steps as i64);
    t.summarize("period", Cell::opt(period));
    match fit_trajectory(&traj) {
        Ok(fit) => {
            t.summarize("e_fit", fit.e);
            t.summarize("e_fit_rms", fit.rms);
        }
        Err(e) => t.summarize("e_fit", Cell::text(format!("unavailable: {e}"))),
    }
    t.summarize("e_closed", e_closed);
    let l = &traj.ledger;
    t.summarize("max_rel_energy_drift", l.max_rel_energy_drift);
    t.summarize("max_rel_ang_mom_drift", l.max_rel_ang_mom_drift);
    let failure = if !(l.max_rel_energy_drift <= a.tol_energy) {
        Some(format!("energy drift {:.3e} exceeds {:e}", l.max_rel_energy_drift, a.tol_energy))
    } else if !(l.max_rel_ang_mom_drift <= a.tol_ang_mom) {
        Some(format!("angular momentum drift {:.3e} exceeds {:e}", l.max_rel_ang_mom_drift, a.tol_ang_mom))
    } else {
        None
    };
    t.summarize("status", if failure.is_some() { "fail" } else { "pass" });
    Ok(Report { table: t, failure })
}
