//! Planar two-body Coulomb motion: RK4 integration, conic fit and the
//! eccentricity-energy relation.

use crate::{Error, Real, Result};

pub const COLLISION_RADIUS: f64 = 1e-6;

/// Phase-space point in the orbital plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitState<T> {
    pub position: [T; 2],
    pub velocity: [T; 2],
    pub mass: T,
    /// `qκ`; attractive when negative.
    pub coupling: T,
}

impl<T: Real> OrbitState<T> {
    pub fn new(position: [T; 2], velocity: [T; 2], mass: T, coupling: T) -> Self {
        Self { position, velocity, mass, coupling }
    }

    pub fn radius(&self) -> T {
        self.position[0].hypot(self.position[1])
    }

    /// `½Mv² + qκ/r`
    pub fn energy(&self) -> T {
        let v2 = self.velocity[0] * self.velocity[0] + self.velocity[1] * self.velocity[1];
        T::lit(0.5) * self.mass * v2 + self.coupling / self.radius()
    }

    /// `M(x v_y − y v_x)`
    pub fn angular_momentum(&self) -> T {
        self.mass * (self.position[0] * self.velocity[1] - self.position[1] * self.velocity[0])
    }

    /// Starts at closest approach on the +x axis with the given `E` and `ℓ`.
    pub fn from_invariants(energy: T, ell: T, mass: T, coupling: T) -> Result<Self> {
        let (e, p) = eccentricity(energy, ell, mass, coupling)?;
        let rp = if coupling < T::zero() { p / (T::one() + e) } else { p / (e - T::one()) };
        Ok(Self::new([rp, T::zero()], [T::zero(), ell / (mass * rp)], mass, coupling))
    }

    fn accel(&self, pos: [T; 2]) -> [T; 2] {
        let r = pos[0].hypot(pos[1]);
        let f = self.coupling / (self.mass * r * r * r);
        [f * pos[0], f * pos[1]]
    }
}

/// Worst relative drift of the conserved quantities along a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationLedger<T> {
    pub energy0: T,
    pub ang_mom0: T,
    pub max_rel_energy_drift: T,
    pub max_rel_ang_mom_drift: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint<T> {
    pub t: T,
    pub position: [T; 2],
    pub velocity: [T; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub initial: OrbitState<T>,
    pub points: Vec<TrajectoryPoint<T>>,
    pub ledger: ConservationLedger<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn state(&self, i: usize) -> OrbitState<T> {
        let p = &self.points[i];
        OrbitState { position: p.position, velocity: p.velocity, ..self.initial }
    }
}

/// Classic RK4 on `M r̈ = qκ r̂/r²`, recording every step.
pub fn integrate_orbit<T: Real>(init: OrbitState<T>, dt: T, steps: usize) -> Result<Trajectory<T>> {
    integrate_orbit_sampled(init, dt, steps, 1)
}

/// As [`integrate_orbit`], recording every `stride`-th step (drift is still
/// measured at every step).
pub fn integrate_orbit_sampled<T: Real>(
    init: OrbitState<T>,
    dt: T,
    steps: usize,
    stride: usize,
) -> Result<Trajectory<T>> {
    if !(dt > T::zero()) {
        return Err(Error::Domain("time step must be positive".into()));
    }
    if !(init.radius() > T::zero()) || !(init.mass > T::zero()) {
        return Err(Error::Domain("initial radius and mass must be positive".into()));
    }
    let stride = stride.max(1);
    let e0 = init.energy();
    let l0 = init.angular_momentum();
    let mut ledger = ConservationLedger {
        energy0: e0,
        ang_mom0: l0,
        max_rel_energy_drift: T::zero(),
        max_rel_ang_mom_drift: T::zero(),
    };
    let mut points = Vec::with_capacity(steps / stride + 2);
    let mut x = init.position;
    let mut v = init.velocity;
    points.push(TrajectoryPoint { t: T::zero(), position: x, velocity: v });
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let two = T::lit(2.0);
    let rel = |d: T, base: T| if base == T::zero() { d.abs() } else { (d / base).abs() };
    for step in 1..=steps {
        let add = |a: [T; 2], b: [T; 2], s: T| [a[0] + s * b[0], a[1] + s * b[1]];
        let k1x = v;
        let k1v = init.accel(x);
        let k2x = add(v, k1v, half * dt);
        let k2v = init.accel(add(x, k1x, half * dt));
        let k3x = add(v, k2v, half * dt);
        let k3v = init.accel(add(x, k2x, half * dt));
        let k4x = add(v, k3v, dt);
        let k4v = init.accel(add(x, k3x, dt));
        let prev = x;
        for i in 0..2 {
            x[i] += dt * sixth * (k1x[i] + two * k2x[i] + two * k3x[i] + k4x[i]);
            v[i] += dt * sixth * (k1v[i] + two * k2v[i] + two * k3v[i] + k4v[i]);
        }
        let r = segment_distance(prev, x);
        if !(r >= T::lit(COLLISION_RADIUS)) {
            return Err(Error::Collision { r: r.to_f64_lossy(), step });
        }
        let s = OrbitState { position: x, velocity: v, ..init };
        ledger.max_rel_energy_drift = ledger.max_rel_energy_drift.max(rel(s.energy() - e0, e0));
        ledger.max_rel_ang_mom_drift = ledger.max_rel_ang_mom_drift.max(rel(s.angular_momentum() - l0, l0));
        if step % stride == 0 || step == steps {
            points.push(TrajectoryPoint { t: dt * T::from_usize(step).unwrap(), position: x, velocity: v });
        }
    }
    Ok(Trajectory { initial: init, points, ledger })
}

/// Distance from the origin to the chord between consecutive positions.
fn segment_distance<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    let d = [b[0] - a[0], b[1] - a[1]];
    let dd = d[0] * d[0] + d[1] * d[1];
    let s = if dd > T::zero() { (-(a[0] * d[0] + a[1] * d[1]) / dd).max(T::zero()).min(T::one()) } else { T::zero() };
    (a[0] + s * d[0]).hypot(a[1] + s * d[1])
}

/// `(e, p)` with `e = √(1 + 2ℓ²E/(M(qκ)²))` and `p = ℓ²/(M|qκ|)`.
pub fn eccentricity<T: Real>(energy: T, ell: T, mass: T, coupling: T) -> Result<(T, T)> {
    if ell == T::zero() {
        return Err(Error::Domain("angular momentum must be nonzero".into()));
    }
    if coupling == T::zero() || !(mass > T::zero()) {
        return Err(Error::Domain("coupling must be nonzero and mass positive".into()));
    }
    let disc = T::one() + T::lit(2.0) * ell * ell * energy / (mass * coupling * coupling);
    if disc < T::zero() {
        return Err(Error::Domain(format!("energy below the circular-orbit minimum (1 + 2ℓ²E/(M(qκ)²) = {disc})")));
    }
    Ok((disc.sqrt(), ell * ell / (mass * coupling.abs())))
}

/// Kepler period `2π√(M a³/|qκ|)` with `a = qκ/(2E)`; bound orbits only.
pub fn kepler_period<T: Real>(energy: T, mass: T, coupling: T) -> Result<T> {
    if !(energy < T::zero()) || !(coupling < T::zero()) {
        return Err(Error::Domain("period defined for bound attractive orbits only".into()));
    }
    let a = coupling / (T::lit(2.0) * energy);
    Ok(T::TAU() * (mass * a * a * a / coupling.abs()).sqrt())
}

/// Least-squares fit of `1/r = A + B cos θ + C sin θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicFit<T> {
    pub e: T,
    pub p: T,
    pub theta0: T,
    pub rms: T,
}

pub const MIN_FIT_POINTS: usize = 100;

pub fn fit_conic<T: Real>(positions: &[[T; 2]]) -> Result<ConicFit<T>> {
    if positions.len() < MIN_FIT_POINTS {
        return Err(Error::Degenerate(format!("{} points, need at least {MIN_FIT_POINTS}", positions.len())));
    }
    let mut m = [[T::zero(); 3]; 3];
    let mut rhs = [T::zero(); 3];
    for p in positions {
        let r = p[0].hypot(p[1]);
        let basis = [T::one(), p[0] / r, p[1] / r];
        for i in 0..3 {
            rhs[i] += basis[i] / r;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let det3 = |a: &[[T; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let det = det3(&m);
    let n = T::from_usize(positions.len()).unwrap();
    if !(det.abs() > T::lit(1e-10) * n * n * n) {
        return Err(Error::Degenerate("angular spread too small for a conic fit (radial trajectory?)".into()));
    }
    let mut sol = [T::zero(); 3];
    for (k, s) in sol.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = rhs[i];
        }
        *s = det3(&mk) / det;
    }
    let [a, b, c] = sol;
    let mut ss = T::zero();
    for p in positions {
        let r = p[0].hypot(p[1]);
        let d = T::one() / r - (a + b * p[0] / r + c * p[1] / r);
        ss += d * d;
    }
    Ok(ConicFit { e: b.hypot(c) / a.abs(), p: T::one() / a.abs(), theta0: c.atan2(b), rms: (ss / n).sqrt() })
}

pub fn fit_trajectory<T: Real>(traj: &Trajectory<T>) -> Result<ConicFit<T>> {
    let pos: Vec<[T; 2]> = traj.points.iter().map(|p| p.position).collect();
    fit_conic(&pos)
}
