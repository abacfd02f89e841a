//! Bound-state spectra: closed forms, radial wavefunctions and the grid
//! eigensolver that checks them.

use rayon::prelude::*;

use crate::angular_spectra::{lambda_hat_eigen, lambda_hat_r, ls_eigen, Variant};
use crate::quadrature::integrate_half_line;
use crate::specfun::kummer_polynomial;
use crate::tridiag::TridiagPencil;
use crate::{Error, Real, Result};

/// `ℏ`, `M` and `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units<T> {
    pub hbar: T,
    pub mass: T,
    pub c: T,
}

impl<T: Real> Default for Units<T> {
    fn default() -> Self {
        Self { hbar: T::one(), mass: T::one(), c: T::one() }
    }
}

impl<T: Real> Units<T> {
    /// `ℏ²/(2M)`
    pub fn kinetic(&self) -> T {
        self.hbar * self.hbar / (T::lit(2.0) * self.mass)
    }

    pub fn rest_energy(&self) -> T {
        self.mass * self.c * self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Hydrogen,
    Type1,
    Type2,
    Dirac,
    DiracType2,
    GeneralOde,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Hydrogen => "hydrogen",
            Family::Type1 => "type1",
            Family::Type2 => "type2",
            Family::Dirac => "dirac",
            Family::DiracType2 => "dirac-type2",
            Family::GeneralOde => "general-ode",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Family::Hydrogen, Family::Type1, Family::Type2, Family::Dirac, Family::DiracType2, Family::GeneralOde]
            .into_iter()
            .find(|f| f.label() == s)
    }

    pub fn is_relativistic(self) -> bool {
        matches!(self, Family::Dirac | Family::DiracType2)
    }
}

/// One level of a spectrum table.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLine<T> {
    pub family: Family,
    /// Radial node count `N`.
    pub n_nodes: u32,
    pub l: i32,
    pub case: Option<Variant>,
    pub couplings: Vec<(&'static str, T)>,
    pub e_closed: T,
    pub e_oracle: Option<T>,
    pub rel_discrepancy: Option<T>,
}

impl<T: Real> SpectrumLine<T> {
    fn new(family: Family, n_nodes: u32, l: i32, couplings: Vec<(&'static str, T)>, e_closed: T) -> Self {
        Self { family, n_nodes, l, case: None, couplings, e_closed, e_oracle: None, rel_discrepancy: None }
    }

    /// `n = N + l + 1`
    pub fn principal(&self) -> u32 {
        self.n_nodes + self.l as u32 + 1
    }

    pub fn coupling(&self, name: &str) -> Option<T> {
        self.couplings.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }

    pub fn with_oracle(mut self, e: T) -> Self {
        self.e_oracle = Some(e);
        self.rel_discrepancy = Some(((self.e_closed - e) / self.e_closed).abs());
        self
    }

    /// Sign conventions for a bound level of this family.
    pub fn is_bound(&self, units: &Units<T>) -> bool {
        if self.family.is_relativistic() {
            self.e_closed > T::zero() && self.e_closed < units.rest_energy()
        } else {
            self.e_closed < T::zero()
        }
    }
}

fn require_attractive<T: Real>(qk: T) -> Result<()> {
    if qk < T::zero() {
        Ok(())
    } else {
        Err(Error::NoBoundState(format!("coupling q*kappa = {qk} is not attractive")))
    }
}

/// `E = −M(qκ)²/(2ℏ²(N+λ+1)²)`.
pub fn nonrel_energy<T: Real>(n_nodes: u32, lambda: T, qk: T, units: &Units<T>) -> Result<T> {
    require_attractive(qk)?;
    let n = T::from_u32(n_nodes).unwrap() + lambda + T::one();
    Ok(-units.mass * qk * qk / (T::lit(2.0) * units.hbar * units.hbar * n * n))
}

pub fn nonrel_energy_hydrogen<T: Real>(n_nodes: u32, l: i32, qk: T, units: &Units<T>) -> Result<SpectrumLine<T>> {
    if l < 0 {
        return Err(Error::QuantumNumbers(format!("l = {l}")));
    }
    let e = nonrel_energy(n_nodes, T::from_int(l as i64), qk, units)?;
    Ok(SpectrumLine::new(Family::Hydrogen, n_nodes, l, vec![("qk", qk)], e))
}

/// Type-I level with `λ(λ+1) = Λ₋`; returns the line and `λ`.
pub fn nonrel_energy_type1<T: Real>(
    n_nodes: u32,
    l: i32,
    c1: T,
    qk3: T,
    units: &Units<T>,
) -> Result<(SpectrumLine<T>, T)> {
    require_attractive(qk3)?;
    let lambda = lambda_hat_eigen(l, c1)?.lambda()?;
    let e = nonrel_energy(n_nodes, lambda, qk3, units)?;
    Ok((SpectrumLine::new(Family::Type1, n_nodes, l, vec![("c1", c1), ("qk3", qk3)], e), lambda))
}

/// `Ω = l(l+1) + 2kW + k²/2` with `W` the `ℓ·S/ℏ²` eigenvalue.
pub fn omega_type2<T: Real>(l: i32, case: Variant, k: T) -> Result<T> {
    let w = ls_eigen::<T>(l, case)?;
    let lf = T::from_int(l as i64);
    Ok(lf * (lf + T::one()) + T::lit(2.0) * k * w + T::lit(0.5) * k * k)
}

/// Completed-square forms `½((k+l)²+l²+2l)` and `½((k−l−1)²+l²−1)`.
pub fn omega_type2_closed<T: Real>(l: i32, case: Variant, k: T) -> T {
    let lf = T::from_int(l as i64);
    let half = T::lit(0.5);
    match case {
        Variant::A => half * ((k + lf) * (k + lf) + lf * lf + T::lit(2.0) * lf),
        Variant::B => {
            let d = k - lf - T::one();
            half * (d * d + lf * lf - T::one())
        }
    }
}

/// Type-II level; returns the line, `Ω` and `λ`.
pub fn nonrel_energy_type2<T: Real>(
    n_nodes: u32,
    l: i32,
    case: Variant,
    k: T,
    qk3: T,
    units: &Units<T>,
) -> Result<(SpectrumLine<T>, T, T)> {
    require_attractive(qk3)?;
    let omega = omega_type2(l, case, k)?;
    if omega < T::zero() {
        return Err(Error::Supercritical(format!("Omega = {omega} < 0")));
    }
    let lambda = (T::lit(0.5)) * ((T::one() + T::lit(4.0) * omega).sqrt() - T::one());
    let e = nonrel_energy(n_nodes, lambda, qk3, units)?;
    let mut line = SpectrumLine::new(Family::Type2, n_nodes, l, vec![("k", k), ("qk3", qk3)], e);
    line.case = Some(case);
    Ok((line, omega, lambda))
}

/// `R(r) = C r^λ e^{−br} 1F1(−N; 2λ+2; 2br)`, normalized so `∫R²r²dr = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialWavefunction<T> {
    pub n_nodes: u32,
    pub lambda: T,
    pub b: T,
    pub norm: T,
    poly: Vec<T>,
}

impl<T: Real> RadialWavefunction<T> {
    fn raw(&self, r: T) -> T {
        let x = T::lit(2.0) * self.b * r;
        let mut p = T::zero();
        for c in self.poly.iter().rev() {
            p = p * x + *c;
        }
        r.powf(self.lambda) * (-self.b * r).exp() * p
    }

    pub fn value(&self, r: T) -> T {
        self.norm * self.raw(r)
    }

    /// Sign changes on a logarithmic scan grid.
    pub fn count_nodes(&self, points: usize) -> usize {
        let lo = (T::lit(1e-6) / self.b).ln();
        let hi = (T::lit(300.0) / self.b).ln();
        let step = (hi - lo) / T::from_usize(points - 1).unwrap();
        let mut last = T::zero();
        let mut count = 0;
        for i in 0..points {
            let v = self.raw((lo + step * T::from_usize(i).unwrap()).exp());
            if v != T::zero() {
                if last != T::zero() && (v > T::zero()) != (last > T::zero()) {
                    count += 1;
                }
                last = v;
            }
        }
        count
    }

    pub fn norm_integral(&self) -> T {
        integrate_half_line(|r: T| self.value(r).powi(2) * r * r, 128, 12)
    }
}

/// `C₁ = √(4b³)` for the `λ = 0`, `N = 0` state.
pub fn ground_norm<T: Real>(b: T) -> T {
    (T::lit(4.0) * b * b * b).sqrt()
}

/// Builds `R(r)` from `ε = 2ME/ℏ² < 0`, checking that the first Kummer
/// argument `(λ+1) + Mqκ₃/(ℏ²√−ε)` equals `−N`.
pub fn radial_wavefunction<T: Real>(
    n_nodes: u32,
    lambda: T,
    epsilon: T,
    qk3: T,
    units: &Units<T>,
) -> Result<RadialWavefunction<T>> {
    if !(epsilon < T::zero()) {
        return Err(Error::NoBoundState(format!("epsilon = {epsilon} must be negative")));
    }
    if lambda < T::zero() {
        return Err(Error::Domain(format!("lambda = {lambda} < 0 is singular at the origin")));
    }
    let b = (-epsilon).sqrt();
    let a = lambda + T::one() + units.mass * qk3 / (units.hbar * units.hbar * b);
    let n = T::from_u32(n_nodes).unwrap();
    if (a + n).abs() > T::lit(1e-10) * (T::one() + n) {
        return Err(Error::NonTerminating(format!("first Kummer argument {a} != -{n_nodes}")));
    }
    let poly = kummer_polynomial(n_nodes as u64, T::lit(2.0) * (lambda + T::one()))?;
    let mut wf = RadialWavefunction { n_nodes, lambda, b, norm: T::one(), poly };
    let ni = wf.norm_integral();
    wf.norm = T::one() / ni.sqrt();
    if n_nodes == 0 && lambda == T::zero() {
        wf.norm = ground_norm(b);
    }
    Ok(wf)
}

/// `ε = 2ME/ℏ²` for a level with effective angular momentum `λ`.
pub fn epsilon_of<T: Real>(n_nodes: u32, lambda: T, qk3: T, units: &Units<T>) -> Result<T> {
    let e = nonrel_energy(n_nodes, lambda, qk3, units)?;
    Ok(e / units.kinetic())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundObservables<T> {
    pub mean_r: T,
    pub c1: T,
    pub c1_closed: T,
    pub mean_xyz: [T; 3],
    pub norm: T,
}

/// Quadrature moments of the hydrogen ground state for `qκ = −e²`.
pub fn hydrogen_ground_observables<T: Real>(units: &Units<T>, e_charge: T) -> Result<GroundObservables<T>> {
    let qk = -e_charge * e_charge;
    let eps = epsilon_of(0, T::zero(), qk, units)?;
    let wf = radial_wavefunction(0, T::zero(), eps, qk, units)?;
    let (m, h) = (units.mass, units.hbar);
    let e6 = e_charge.powi(6);
    let c1_closed = (T::lit(4.0) * m * m * m * e6 / h.powi(6)).sqrt();
    let radial = |p: i32| integrate_half_line(|r: T| wf.value(r).powi(2) * r.powi(2 + p), 128, 12);
    let norm = radial(0);
    let mean_r = radial(1);
    // |Y00|² = 1/(4π); angular factor of each Cartesian component.
    let inv4pi = T::one() / (T::lit(4.0) * T::PI());
    let ang = |f: &dyn Fn(T, T) -> T| crate::quadrature::integrate_sphere(|t, p| f(t, p) * inv4pi, 24, 48);
    let mean_xyz = [
        mean_r * ang(&|t: T, p: T| t.sin() * p.cos()),
        mean_r * ang(&|t: T, p: T| t.sin() * p.sin()),
        mean_r * ang(&|t: T, _| t.cos()),
    ];
    Ok(GroundObservables { mean_r, c1: wf.norm, c1_closed, mean_xyz, norm })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// `x = ln r` with `u = r^{1/2} w(x)`.
    Log,
    /// Uniform in `r`, Dirichlet at `r = 0` and `r_max`.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub kind: GridKind,
    pub r_min: T,
    pub r_max: T,
    /// Interior points of the coarse grid; the fine grid doubles it.
    pub points: usize,
    pub levels: usize,
    /// Largest accepted relative change between the two resolutions.
    pub tolerance: T,
}

impl<T: Real> Default for GridSpec<T> {
    fn default() -> Self {
        Self {
            kind: GridKind::Log,
            r_min: T::lit(1e-12),
            r_max: T::lit(200.0),
            points: 8000,
            levels: 4,
            tolerance: T::lit(1e-3),
        }
    }
}

impl<T: Real> GridSpec<T> {
    pub fn uniform() -> Self {
        Self { kind: GridKind::Uniform, r_min: T::zero(), ..Self::default() }
    }

    fn nodes(&self, n: usize) -> (Vec<T>, T) {
        let nf = T::from_usize(n + 1).unwrap();
        match self.kind {
            GridKind::Log => {
                let (x0, x1) = (self.r_min.ln(), self.r_max.ln());
                let h = (x1 - x0) / nf;
                ((1..=n).map(|i| (x0 + h * T::from_usize(i).unwrap()).exp()).collect(), h)
            }
            GridKind::Uniform => {
                let h = self.r_max / nf;
                ((1..=n).map(|i| h * T::from_usize(i).unwrap()).collect(), h)
            }
        }
    }
}

/// Pencil for `−(ℏ²/2M)u″ + [(ℏ²/2M)Q(r)/r² + qκ/r]u = Eu` with `u = rR`.
pub fn radial_pencil<T: Real>(
    grid: &GridSpec<T>,
    n: usize,
    centrifugal: &(dyn Fn(T) -> T + Sync),
    qk: T,
    units: &Units<T>,
) -> (TridiagPencil<T>, Vec<T>) {
    let (r, h) = grid.nodes(n);
    let kin = units.kinetic();
    let hh = h * h;
    let two = T::lit(2.0);
    let (diag, weight): (Vec<T>, Vec<T>) = match grid.kind {
        GridKind::Log => r
            .iter()
            .map(|&ri| (kin * (two / hh + T::lit(0.25) + centrifugal(ri)) + qk * ri, ri * ri))
            .unzip(),
        GridKind::Uniform => r
            .iter()
            .map(|&ri| (kin * (two / hh + centrifugal(ri) / (ri * ri)) + qk / ri, T::one()))
            .unzip(),
    };
    let off = vec![-kin / hh; n.saturating_sub(1)];
    (TridiagPencil { diag, off, weight }, r)
}

/// Lowest `count` negative eigenvalues of a pencil.
pub fn bound_eigenvalues<T: Real>(p: &TridiagPencil<T>, count: usize) -> Result<Vec<T>> {
    let found = p.count_below(T::zero());
    if found < count {
        return Err(Error::NoBoundState(format!("grid holds {found} bound levels, {count} requested")));
    }
    let mut lo = -T::one();
    while p.count_below(lo) > 0 {
        lo *= T::lit(2.0);
        if !lo.is_finite() {
            return Err(Error::UnboundedBelow("no lower bracket".into()));
        }
    }
    Ok((0..count).map(|k| p.eigenvalue_in(k, lo, T::zero())).collect())
}

/// Two-resolution eigenvalues with their Richardson combination.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<T> {
    pub coarse: Vec<T>,
    pub fine: Vec<T>,
    pub extrapolated: Vec<T>,
    /// Largest relative change between the two resolutions.
    pub rel_change: T,
}

impl<T: Real> OracleResult<T> {
    pub fn eigenvalues(&self) -> &[T] {
        &self.extrapolated
    }
}

/// Grid eigensolver for an arbitrary centrifugal numerator `Q(r)`.
pub fn solve_radial<T: Real>(
    grid: &GridSpec<T>,
    centrifugal: &(dyn Fn(T) -> T + Sync),
    qk: T,
    units: &Units<T>,
) -> Result<OracleResult<T>> {
    let n_c = grid.points;
    let n_f = 2 * grid.points;
    let runs: Vec<Result<(Vec<T>, T)>> = [n_c, n_f]
        .par_iter()
        .map(|&n| {
            let (p, _) = radial_pencil(grid, n, centrifugal, qk, units);
            let (_, h) = grid.nodes(n);
            bound_eigenvalues(&p, grid.levels).map(|e| (e, h))
        })
        .collect();
    let mut it = runs.into_iter();
    let (coarse, hc) = it.next().unwrap()?;
    let (fine, hf) = it.next().unwrap()?;
    let rho2 = (hc / hf).powi(2);
    let mut rel_change = T::zero();
    let extrapolated = coarse
        .iter()
        .zip(&fine)
        .map(|(&c, &f)| {
            rel_change = rel_change.max(((f - c) / f).abs());
            (rho2 * f - c) / (rho2 - T::one())
        })
        .collect();
    if rel_change > grid.tolerance {
        return Err(Error::GridTooCoarse(rel_change.to_f64_lossy()));
    }
    Ok(OracleResult { coarse, fine, extrapolated, rel_change })
}

/// Independent check of the non-relativistic closed forms: the lowest
/// `grid.levels` eigenvalues for the `λ(λ+1)/r²` barrier plus `qκ/r`.
pub fn fd_radial_oracle<T: Real>(
    lambda_eff: T,
    qk3: T,
    units: &Units<T>,
    grid: &GridSpec<T>,
) -> Result<OracleResult<T>> {
    require_attractive(qk3)?;
    let q = lambda_eff * (lambda_eff + T::one());
    if q < -T::lit(0.25) {
        return Err(Error::Supercritical(format!("lambda(lambda+1) = {q} < -1/4")));
    }
    solve_radial(grid, &move |_| q, qk3, units)
}

/// Full radial equation with `c(r) = c1 + c2 r³`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralOde<T> {
    pub l: i32,
    pub c1: T,
    pub c2: T,
    pub qk3: T,
    pub eigenvalue: T,
    pub oracle: OracleResult<T>,
    /// `V_eff(r_max)`; must stay above the reported level.
    pub edge_potential: T,
}

/// `Q(r) = Λ(r) + D(r) r²`, the numerator of the effective barrier.
pub fn general_centrifugal<T: Real>(l: i32, c1: T, c2: T, r: T) -> Result<T> {
    let lr = lambda_hat_r(l, c1, c2, r)?;
    Ok(lr.lambda + lr.drift * r * r)
}

pub fn general_type1_ode<T: Real>(
    l: i32,
    c1: T,
    c2: T,
    qk3: T,
    units: &Units<T>,
    grid: &GridSpec<T>,
) -> Result<GeneralOde<T>> {
    if qk3 > T::zero() {
        return Err(Error::NoBoundState(format!("qk3 = {qk3} is repulsive")));
    }
    let lam0 = lambda_hat_eigen(l, c1)?.lambda_minus;
    if T::one() + T::lit(4.0) * lam0 < T::zero() {
        return Err(Error::Supercritical(format!("1 + 4 Lambda(0) = {} < 0", T::one() + T::lit(4.0) * lam0)));
    }
    general_centrifugal(l, c1, c2, grid.r_max)?;
    let q = move |r: T| general_centrifugal(l, c1, c2, r).unwrap_or(T::nan());
    let grid1 = GridSpec { levels: 1, ..*grid };
    let oracle = solve_radial(&grid1, &q, qk3, units)?;
    let eigenvalue = oracle.extrapolated[0];
    let rm = grid.r_max;
    let edge_potential = units.kinetic() * q(rm) / (rm * rm) + qk3 / rm;
    if edge_potential < eigenvalue {
        return Err(Error::UnboundedBelow(format!(
            "V_eff(r_max) = {edge_potential} lies below the lowest level {eigenvalue}"
        )));
    }
    Ok(GeneralOde { l, c1, c2, qk3, eigenvalue, oracle, edge_potential })
}

/// Derived relativistic quantities for one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelParams<T> {
    /// `τ` or `κ̄`.
    pub coupling: T,
    pub kbar: T,
    pub mu: T,
    pub epsilon: T,
    pub nu: T,
    pub p: T,
    pub q: T,
}

impl<T: Real> RelParams<T> {
    fn from_level(coupling: T, kbar: T, nu: T, n_nodes: u32, units: &Units<T>) -> Self {
        let mc2 = units.rest_energy();
        let nn = T::from_u32(n_nodes).unwrap() + nu;
        let t = coupling * coupling / (nn * nn);
        let root = (T::one() + t).sqrt();
        let e = mc2 / root;
        // Mc² − E without cancellation.
        let gap = mc2 * t / ((root + T::one()) * root);
        let mu = ((mc2 + e) / gap).sqrt();
        let epsilon = (gap * (mc2 + e)).sqrt() / (units.hbar * units.c);
        let half = T::lit(0.5) * coupling;
        Self { coupling, kbar, mu, epsilon, nu, p: half * (mu + mu.recip()), q: half * (mu - mu.recip()) }
    }

    /// `μ² + 2(N+ν)μ/τ − 1`
    pub fn mu_residual(&self, n_nodes: u32) -> T {
        let nn = T::from_u32(n_nodes).unwrap() + self.nu;
        self.mu * self.mu + T::lit(2.0) * nn * self.mu / self.coupling - T::one()
    }
}

fn dirac_level<T: Real>(n_nodes: u32, nu: T, coupling: T, units: &Units<T>) -> T {
    let nn = T::from_u32(n_nodes).unwrap() + nu;
    units.rest_energy() / (T::one() + coupling * coupling / (nn * nn)).sqrt()
}

/// `E = Mc²/√(1 + τ²/(N+ν)²)` with `ν = √((l+1)² − τ²)`.
pub fn dirac_energy_standard<T: Real>(
    n_nodes: u32,
    l: i32,
    tau: T,
    units: &Units<T>,
) -> Result<(SpectrumLine<T>, RelParams<T>)> {
    if l < 0 {
        return Err(Error::QuantumNumbers(format!("l = {l}")));
    }
    if !(tau < T::zero()) {
        return Err(Error::NoBoundState(format!("tau = {tau} is not attractive")));
    }
    let lp = T::from_int(l as i64 + 1);
    let rad = lp * lp - tau * tau;
    if !(rad > T::zero()) {
        return Err(Error::Supercritical(format!("(l+1)^2 - tau^2 = {rad} <= 0")));
    }
    let nu = rad.sqrt();
    let e = dirac_level(n_nodes, nu, tau, units);
    let rel = RelParams::from_level(tau, T::zero(), nu, n_nodes, units);
    Ok((SpectrumLine::new(Family::Dirac, n_nodes, l, vec![("tau", tau)], e), rel))
}

/// Coefficients of `h₁ = Σ a_K r^K`, `h₂ = Σ b_K r^K` plus consistency data.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracSeries<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub k1: T,
    pub k2: T,
    /// `|a_{N+1}|` relative to the largest coefficient.
    pub tail_a: T,
    /// `|b_N|` relative to the largest coefficient.
    pub tail_b: T,
    /// Largest residual of the two coefficient equations.
    pub coefficient_residual: T,
    /// `μ(a₀+b₀)/(a₀−b₀)` against `√((l+1+ν)/(l+1−ν))`.
    pub origin_ratio: (T, T),
    /// Leading-power ratio as `r → ∞`, against `μ`.
    pub infinity_ratio: (T, T),
    /// `(l+1−ν)τ − τ²μ + τ(τμ − (l+1−ν))`
    pub identity_residual: T,
}

impl<T: Real> DiracSeries<T> {
    pub fn terminates(&self, tol: T) -> bool {
        self.tail_a <= tol && self.tail_b <= tol
    }
}

fn max_abs_of<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

pub fn dirac_series_standard<T: Real>(n_nodes: u32, l: i32, rel: &RelParams<T>) -> Result<DiracSeries<T>> {
    let (tau, mu, nu, eps) = (rel.coupling, rel.mu, rel.nu, rel.epsilon);
    let lp = T::from_int(l as i64 + 1);
    let k1 = T::lit(0.5) * tau * (mu - mu.recip());
    let k2 = T::lit(0.5) * tau * (mu + mu.recip());
    let n = n_nodes as usize;
    let nf = T::from_u32(n_nodes).unwrap();
    let len = n + 3;
    let (a0, b0) = if n == 0 { (T::one(), T::zero()) } else { ((k2 - lp) / nf, T::one()) };
    let two_eps = T::lit(2.0) * eps;
    let mut a = vec![a0];
    let mut b = vec![b0];
    for kk in 1..len {
        let kf = T::from_usize(kk).unwrap();
        let den = (kf + T::lit(2.0) * nu) * kf;
        a.push(two_eps * (kf + nu + k1 - T::one()) / den * a[kk - 1]);
        b.push(two_eps * (kf + nu + k1) / den * b[kk - 1]);
    }
    let scale = max_abs_of(&a).max(max_abs_of(&b));
    let tail_a = a[n + 1].abs() / scale;
    let tail_b = b[n].abs() / scale;
    let mut coefficient_residual = T::zero();
    for kk in 0..len {
        let kf = T::from_usize(kk).unwrap();
        let bprev = if kk == 0 { T::zero() } else { b[kk - 1] };
        let r1 = (kf + nu + k1) * a[kk] + (k2 - lp) * b[kk];
        let r2 = (kf + nu - k1) * b[kk] - two_eps * bprev - (k2 + lp) * a[kk];
        coefficient_residual = coefficient_residual.max(r1.abs().max(r2.abs()) / scale);
    }
    let origin_ratio = (mu * (a0 + b0) / (a0 - b0), ((lp + nu) / (lp - nu)).sqrt());
    let infinity_ratio = (mu * (a[n] + b[n]) / (a[n] - b[n]), mu);
    let x = lp - nu;
    let identity_residual = x * tau - tau * tau * mu + tau * (tau * mu - x);
    Ok(DiracSeries {
        a,
        b,
        k1,
        k2,
        tail_a,
        tail_b,
        coefficient_residual,
        origin_ratio,
        infinity_ratio,
        identity_residual,
    })
}

/// Type-II Dirac exponent and the two mixing coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Type2Params<T> {
    pub rel: RelParams<T>,
    /// `X = (l+2)C₁ = (l+1)C₁′`.
    pub x: T,
    pub c1: T,
    pub c1_prime: T,
    /// The paper asks for `ν > 1`; recorded, not enforced.
    pub nu_above_one: bool,
}

/// `(2k̄−1 + √((2k̄−1)² + 4(l+1)(l+2)))/2`
pub fn type2_x<T: Real>(l: i32, kbar: T) -> T {
    let s = T::lit(2.0) * kbar - T::one();
    let (l1, l2) = (T::from_int(l as i64 + 1), T::from_int(l as i64 + 2));
    T::lit(0.5) * (s + (s * s + T::lit(4.0) * l1 * l2).sqrt())
}

pub fn dirac_energy_type2<T: Real>(
    n_nodes: u32,
    l: i32,
    kbar: T,
    kappa_bar: T,
    units: &Units<T>,
) -> Result<(SpectrumLine<T>, Type2Params<T>)> {
    if l < 0 {
        return Err(Error::QuantumNumbers(format!("l = {l}")));
    }
    if !(kappa_bar < T::zero()) {
        return Err(Error::NoBoundState(format!("kappa_bar = {kappa_bar} is not attractive")));
    }
    let x = type2_x(l, kbar);
    let rad = x * x - kappa_bar * kappa_bar;
    if !(rad > T::zero()) {
        return Err(Error::Supercritical(format!("nu^2 = {rad} <= 0")));
    }
    let nu = rad.sqrt();
    let e = dirac_level(n_nodes, nu, kappa_bar, units);
    let rel = RelParams::from_level(kappa_bar, kbar, nu, n_nodes, units);
    let c1 = x / T::from_int(l as i64 + 2);
    let c1_prime = x / T::from_int(l as i64 + 1);
    let line = SpectrumLine::new(Family::DiracType2, n_nodes, l, vec![("kbar", kbar), ("kappa_bar", kappa_bar)], e);
    Ok((line, Type2Params { rel, x, c1, c1_prime, nu_above_one: nu > T::one() }))
}

/// Truncated `C = Σ c_n rⁿ`, `D = Σ d_n rⁿ` with `A = C₁C`, `B = −C₁D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Type2Series<T> {
    pub l: i32,
    pub params: Type2Params<T>,
    pub c: Vec<T>,
    pub d: Vec<T>,
    pub tail_c: T,
    pub tail_d: T,
    /// `((n+1+ν)² + κ̄² − X², (n+1)(n+1+2ν))` for `n = 0..`.
    pub denominators: Vec<(T, T)>,
}

fn poly<T: Real>(c: &[T], r: T) -> (T, T) {
    let mut v = T::zero();
    let mut dv = T::zero();
    for &ci in c.iter().rev() {
        dv = dv * r + v;
        v = v * r + ci;
    }
    (v, dv)
}

/// Which pair of first-order systems to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type2System {
    /// `A = C₁C`, `B = −C₁D` with `C₁` over `2(l+2)`.
    Unprimed,
    /// `A′ = C₁′C′`, `B′ = −C₁′D′` with `C₁′` over `2(l+1)`.
    Primed,
}

impl<T: Real> Type2Series<T> {
    pub fn terminates(&self, tol: T) -> bool {
        self.tail_c <= tol && self.tail_d <= tol
    }

    pub fn denominator_defect(&self) -> T {
        self.denominators.iter().fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }

    /// Largest scaled residual of the four radial equations on `[r0, r1]`.
    /// Each equation is multiplied by `r`; at every radius the residuals are
    /// divided by the largest single term of the system.
    pub fn residual(&self, system: Type2System, r0: T, r1: T, samples: usize) -> T {
        let p = &self.params;
        let RelParams { nu, epsilon, p: pb, q: qb, kbar, .. } = p.rel;
        let (l1, l2) = (T::from_int(self.l as i64 + 1), T::from_int(self.l as i64 + 2));
        let s = T::lit(2.0) * kbar - T::one();
        let two_eps = T::lit(2.0) * epsilon;
        let mut worst = T::zero();
        for i in 0..samples {
            let r = r0 + (r1 - r0) * T::from_usize(i).unwrap() / T::from_usize(samples - 1).unwrap();
            let (cv, cd) = poly(&self.c, r);
            let (dv, dd) = poly(&self.d, r);
            let eqs: [[T; 4]; 4] = match system {
                Type2System::Unprimed => {
                    let c1 = p.c1;
                    let (av, ad, bv, bd) = (c1 * cv, c1 * cd, -c1 * dv, -c1 * dd);
                    [
                        [r * ad, (nu + qb) * av, (s - pb) * bv, -l1 * dv],
                        [r * bd, (nu - qb - two_eps * r) * bv, l1 * cv, (s + pb) * av],
                        [r * cd, (nu + qb) * cv, l2 * bv, pb * dv],
                        [r * dd, (nu - qb - two_eps * r) * dv, -l2 * av, -pb * cv],
                    ]
                }
                Type2System::Primed => {
                    let c1 = p.c1_prime;
                    let (av, ad, bv, bd) = (c1 * cv, c1 * cd, -c1 * dv, -c1 * dd);
                    [
                        [r * ad, (nu + qb) * av, -(s + pb) * bv, -l2 * dv],
                        [r * bd, (nu - qb - two_eps * r) * bv, l2 * cv, -(s - pb) * av],
                        [r * cd, (nu + qb) * cv, l1 * bv, pb * dv],
                        [r * dd, (nu - qb - two_eps * r) * dv, -l1 * av, -pb * cv],
                    ]
                }
            };
            let mag = eqs.iter().flatten().fold(T::zero(), |m, t| m.max(t.abs()));
            for e in eqs {
                let sum = e[0] + e[1] + e[2] + e[3];
                if mag > T::zero() {
                    worst = worst.max(sum.abs() / mag);
                }
            }
        }
        worst
    }
}

pub fn dirac_series_type2<T: Real>(n_nodes: u32, l: i32, params: &Type2Params<T>) -> Result<Type2Series<T>> {
    let RelParams { nu, epsilon, p: pb, q: qb, coupling, .. } = params.rel;
    let x = params.x;
    let n = n_nodes as usize;
    let len = n + 3;
    let two_eps = T::lit(2.0) * epsilon;
    let mut c = vec![T::one()];
    let d0 = if n == 0 { T::zero() } else { -T::from_u32(n_nodes).unwrap() / (x - pb) };
    let mut d = vec![d0];
    let mut denominators = Vec::with_capacity(len - 1);
    for i in 0..len - 1 {
        let nf = T::from_usize(i).unwrap();
        let den = (nf + T::one() + nu).powi(2) + coupling * coupling - x * x;
        let ideal = (nf + T::one()) * (nf + T::one() + T::lit(2.0) * nu);
        denominators.push((den, ideal));
        d.push(two_eps * (nf + T::one() + nu + qb) / den * d[i]);
        c.push(two_eps * (nf + nu + qb) / ideal * c[i]);
    }
    let scale = max_abs_of(&c).max(max_abs_of(&d));
    let tail_c = c[n + 1].abs() / scale;
    let tail_d = d[n].abs() / scale;
    let tail_d = if n == 0 { max_abs_of(&d) / scale } else { tail_d };
    Ok(Type2Series { l, params: *params, c, d, tail_c, tail_d, denominators })
}

/// `Z_max = (√((x+1)² + 8) − (x+1))/(2α)` with `x = ek/c`.
pub fn z_bound<T: Real>(x: T, alpha: T) -> T {
    let y = x + T::one();
    ((y * y + T::lit(8.0)).sqrt() - y) / (T::lit(2.0) * alpha)
}

/// `k_cr = 2/(Zα) − 1 − Zα`, the inverse of [`z_bound`].
pub fn kcr<T: Real>(z: u32, alpha: T) -> Result<T> {
    if z == 0 {
        return Err(Error::Domain("Z must be at least 1".into()));
    }
    let za = T::from_u32(z).unwrap() * alpha;
    let k = T::lit(2.0) / za - T::one() - za;
    if !(k > T::zero()) {
        return Err(Error::Supercritical(format!("Z = {z}: k_cr = {k} <= 0")));
    }
    Ok(k)
}

/// The printed closed form `(1 − Zα − Z²α²)/(Zα)`; kept only to document
/// that it disagrees with the table.
pub fn kcr_printed<T: Real>(z: u32, alpha: T) -> T {
    let za = T::from_u32(z).unwrap() * alpha;
    (T::one() - za - za * za) / za
}

pub const FINE_STRUCTURE: f64 = 1.0 / 137.0359;

/// `Z` values of the reference table.
pub const KCR_TABLE_Z: [u32; 26] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 40, 60, 100, 102, 104, 106, 108, 110, 115, 118, 120, 125, 130, 135, 137,
];

/// `(Z, k_cr)` rows in input order, computed in parallel.
pub fn kcr_table<T: Real>(zs: &[u32], alpha: T) -> Vec<(u32, Result<T>)> {
    zs.par_iter().map(|&z| (z, kcr(z, alpha))).collect()
}
