//! Spin potentials `{A, φ}`, their field strengths and the four static
//! Yang-Mills residuals.

use num_complex::Complex;
use rayon::prelude::*;

use crate::sampling::norm3;
use crate::spin_algebra::{ci, scale, scale_c, CMat, MatrixVec3, SpinRep};
use crate::{Error, Real, Result};

/// Solution cases of the constraint system, keyed on `(g, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionCase {
    /// `g = 0, k = 0`: `f1 = κ1/r³ + κ2`, `f2 = κ3/r`.
    I,
    /// `g = 0, k ≠ 0`: no solutions.
    II,
    /// `g ≠ 0, k = 0`: `f1 = 0`, `f2 = κ3/r`.
    III,
    /// `g ≠ 0, k ≠ 0`: `f1 = κ1/r`, `f2 = κ3/r`, with `gℏk = 1`.
    IV,
}

impl SolutionCase {
    pub fn label(self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Some(Self::I),
            "II" | "2" => Some(Self::II),
            "III" | "3" => Some(Self::III),
            "IV" | "4" => Some(Self::IV),
            _ => None,
        }
    }

    pub fn is_solvable(self) -> bool {
        self != Self::II
    }
}

pub fn classify_solution<T: Real>(g: T, k: T) -> SolutionCase {
    match (g == T::zero(), k == T::zero()) {
        (true, true) => SolutionCase::I,
        (true, false) => SolutionCase::II,
        (false, true) => SolutionCase::III,
        (false, false) => SolutionCase::IV,
    }
}

pub const CASE_IV_TOLERANCE: f64 = 1e-12;

/// Radial shape of `f1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum F1Profile {
    /// `κ1/r³ + κ2`
    InverseCube,
    /// `κ1/r`
    Inverse,
    Zero,
}

impl F1Profile {
    pub fn for_case(case: SolutionCase) -> Self {
        match case {
            SolutionCase::I => Self::InverseCube,
            SolutionCase::IV => Self::Inverse,
            SolutionCase::II | SolutionCase::III => Self::Zero,
        }
    }
}

/// Potential parameters plus the spin representation they act on.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialConfig<T: Real> {
    pub g: T,
    pub k: T,
    pub kappa1: T,
    pub kappa2: T,
    pub kappa3: T,
    pub q: T,
    pub hbar: T,
    pub profile: F1Profile,
    pub spin: SpinRep<T>,
}

impl<T: Real> PotentialConfig<T> {
    /// Validated constructor with `q = ℏ = 1`.
    pub fn new(g: T, k: T, kappa1: T, kappa2: T, kappa3: T, s: f64) -> Result<Self> {
        Self::with_units(g, k, kappa1, kappa2, kappa3, s, T::one(), T::one())
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_units(g: T, k: T, kappa1: T, kappa2: T, kappa3: T, s: f64, q: T, hbar: T) -> Result<Self> {
        let case = classify_solution(g, k);
        match case {
            SolutionCase::II => return Err(Error::NoSolution),
            SolutionCase::IV => {
                let res = (g * hbar * k - T::one()).to_f64_lossy();
                if !(res.abs() < CASE_IV_TOLERANCE) {
                    return Err(Error::ConstraintViolation { residual: res });
                }
            }
            SolutionCase::III if kappa1 != T::zero() => return Err(Error::Kappa1InCaseIII),
            _ => {}
        }
        if case != SolutionCase::I && kappa2 != T::zero() {
            return Err(Error::Kappa2OutsideCaseI);
        }
        let spin = SpinRep::new(s, hbar)?;
        Ok(Self { g, k, kappa1, kappa2, kappa3, q, hbar, profile: F1Profile::for_case(case), spin })
    }

    /// Case I with `g = k = 0`.
    pub fn type1(kappa1: T, kappa2: T, kappa3: T, s: f64) -> Result<Self> {
        Self::new(T::zero(), T::zero(), kappa1, kappa2, kappa3, s)
    }

    /// Case IV with `g = 1/(ℏk)`.
    pub fn type2(k: T, kappa1: T, kappa3: T, s: f64) -> Result<Self> {
        Self::new(T::one() / k, k, kappa1, T::zero(), kappa3, s)
    }

    /// Skips every constraint check; used for negative controls.
    #[allow(clippy::too_many_arguments)]
    pub fn unchecked(g: T, k: T, kappa1: T, kappa2: T, kappa3: T, s: f64, profile: F1Profile) -> Result<Self> {
        let spin = SpinRep::new(s, T::one())?;
        Ok(Self { g, k, kappa1, kappa2, kappa3, q: T::one(), hbar: T::one(), profile, spin })
    }

    pub fn case(&self) -> SolutionCase {
        classify_solution(self.g, self.k)
    }

    pub fn dim(&self) -> usize {
        self.spin.dim
    }

    pub fn s(&self) -> f64 {
        self.spin.s
    }

    /// `gℏk`
    pub fn ghk(&self) -> T {
        self.g * self.hbar * self.k
    }

    /// `(f1, f1', f1'')` at radius `r`.
    pub fn f1(&self, r: T) -> [T; 3] {
        let k1 = self.kappa1;
        match self.profile {
            F1Profile::InverseCube => {
                let r3 = r * r * r;
                [k1 / r3 + self.kappa2, -T::lit(3.0) * k1 / (r3 * r), T::lit(12.0) * k1 / (r3 * r * r)]
            }
            F1Profile::Inverse => [k1 / r, -k1 / (r * r), T::lit(2.0) * k1 / (r * r * r)],
            F1Profile::Zero => [T::zero(); 3],
        }
    }

    /// `(f2, f2', f2'')` at radius `r`.
    pub fn f2(&self, r: T) -> [T; 3] {
        let k3 = self.kappa3;
        [k3 / r, -k3 / (r * r), T::lit(2.0) * k3 / (r * r * r)]
    }
}

fn radius<T: Real>(pos: [T; 3]) -> Result<T> {
    let r = norm3(pos);
    if !(r > T::zero()) {
        return Err(Error::Origin);
    }
    Ok(r)
}

/// `A = k (r×S)/r²` and `φ = f1 (r·S) + f2`.
pub fn eval_potentials<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3]) -> Result<(MatrixVec3<T>, CMat<T>)> {
    if !cfg.case().is_solvable() && cfg.profile != F1Profile::Inverse {
        return Err(Error::NoSolution);
    }
    let r = radius(pos)?;
    let a = cfg.spin.cross_position(pos).scale(cfg.k / (r * r));
    let [f1, _, _] = cfg.f1(r);
    let [f2, _, _] = cfg.f2(r);
    let phi = scale(&cfg.spin.dot_position(pos), f1) + scale(&cfg.spin.identity, f2);
    Ok((a, phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    FiniteDifference,
}

/// Sign in front of the `ig(...)` self-interaction terms of the residuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `-ig`, consistent with `B = ∇×A - igA×A`, `E = -∇φ - ig[φ,A]`.
    #[default]
    Covariant,
    /// `+ig` as written in the recast equations.
    Printed,
}

impl Convention {
    fn sign<T: Real>(self) -> T {
        match self {
            Self::Covariant => -T::one(),
            Self::Printed => T::one(),
        }
    }
}

/// Fourth-order step `h = 1e-4 · max(1, r)`.
pub fn fd_step<T: Real>(pos: [T; 3]) -> T {
    T::lit(1e-4) * norm3(pos).max(T::one())
}

/// Central fourth-order partial derivative of a matrix field.
pub fn fd_partial<T: Real, F>(f: &F, pos: [T; 3], axis: usize, h: T) -> Result<CMat<T>>
where
    F: Fn([T; 3]) -> Result<CMat<T>>,
{
    let at = |s: f64| {
        let mut p = pos;
        p[axis] += T::lit(s) * h;
        f(p)
    };
    let (m2, m1, p1, p2) = (at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?);
    Ok(scale(&(m2 - p2 + scale(&(p1 - m1), T::lit(8.0))), T::one() / (T::lit(12.0) * h)))
}

/// Jacobian `∂_j V_i` of a matrix-vector field, indexed `[i][j]`.
fn fd_jacobian<T: Real, F>(f: &F, pos: [T; 3], h: T) -> Result<[[CMat<T>; 3]; 3]>
where
    F: Fn([T; 3]) -> Result<MatrixVec3<T>>,
{
    let comp = |i: usize| move |p: [T; 3]| f(p).map(|v| v.components()[i].clone());
    let d = |i: usize, j: usize| fd_partial(&comp(i), pos, j, h);
    Ok([
        [d(0, 0)?, d(0, 1)?, d(0, 2)?],
        [d(1, 0)?, d(1, 1)?, d(1, 2)?],
        [d(2, 0)?, d(2, 1)?, d(2, 2)?],
    ])
}

pub fn fd_divergence<T: Real, F>(f: &F, pos: [T; 3], h: T) -> Result<CMat<T>>
where
    F: Fn([T; 3]) -> Result<MatrixVec3<T>>,
{
    let comp = |i: usize| move |p: [T; 3]| f(p).map(|v| v.components()[i].clone());
    Ok(fd_partial(&comp(0), pos, 0, h)? + fd_partial(&comp(1), pos, 1, h)? + fd_partial(&comp(2), pos, 2, h)?)
}

pub fn fd_curl<T: Real, F>(f: &F, pos: [T; 3], h: T) -> Result<MatrixVec3<T>>
where
    F: Fn([T; 3]) -> Result<MatrixVec3<T>>,
{
    let j = fd_jacobian(f, pos, h)?;
    Ok(MatrixVec3 {
        x: &j[2][1] - &j[1][2],
        y: &j[0][2] - &j[2][0],
        z: &j[1][0] - &j[0][1],
    })
}

pub fn fd_gradient<T: Real, F>(f: &F, pos: [T; 3], h: T) -> Result<MatrixVec3<T>>
where
    F: Fn([T; 3]) -> Result<CMat<T>>,
{
    Ok(MatrixVec3 { x: fd_partial(f, pos, 0, h)?, y: fd_partial(f, pos, 1, h)?, z: fd_partial(f, pos, 2, h)? })
}

/// Radial coefficients of the analytic fields: `E = a X r + b r + c S`,
/// `B = β X r`, each as `(value, derivative)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldCoefficients<T> {
    pub a: [T; 2],
    pub b: [T; 2],
    pub c: [T; 2],
    pub beta: [T; 2],
}

pub fn field_coefficients<T: Real>(cfg: &PotentialConfig<T>, r: T) -> FieldCoefficients<T> {
    let [f1, f1p, f1pp] = cfg.f1(r);
    let [_, f2p, f2pp] = cfg.f2(r);
    let gk = cfg.ghk();
    let r2 = r * r;
    let a = -(f1p / r + gk * f1 / r2);
    let ap = -(f1pp / r - f1p / r2 + gk * (f1p / r2 - T::lit(2.0) * f1 / (r2 * r)));
    let b = -f2p / r;
    let bp = -(f2pp / r - f2p / r2);
    let c = (gk - T::one()) * f1;
    let cp = (gk - T::one()) * f1p;
    let beta = cfg.k * (gk - T::lit(2.0)) / (r2 * r2);
    let betap = -T::lit(4.0) * beta / r;
    FieldCoefficients { a: [a, ap], b: [b, bp], c: [c, cp], beta: [beta, betap] }
}

fn analytic_fields<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3]) -> Result<(MatrixVec3<T>, MatrixVec3<T>)> {
    let r = radius(pos)?;
    let fc = field_coefficients(cfg, r);
    let x = cfg.spin.dot_position(pos);
    let e = MatrixVec3::outer(&scale(&x, fc.a[0]), pos)
        .add(&MatrixVec3::outer(&scale(&cfg.spin.identity, fc.b[0]), pos))?
        .add(&cfg.spin.vector().scale(fc.c[0]))?;
    let b = MatrixVec3::outer(&scale(&x, fc.beta[0]), pos);
    Ok((e, b))
}

fn fd_fields<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3]) -> Result<(MatrixVec3<T>, MatrixVec3<T>)> {
    let h = fd_step(pos);
    let (a, phi) = eval_potentials(cfg, pos)?;
    let ig = ci(cfg.g);
    let phi_f = |p: [T; 3]| eval_potentials(cfg, p).map(|(_, f)| f);
    let a_f = |p: [T; 3]| eval_potentials(cfg, p).map(|(a, _)| a);
    let grad_phi = fd_gradient(&phi_f, pos, h)?;
    let e = grad_phi.scale(-T::one()).sub(&a.comm_left(&phi).scale_c(ig))?;
    let b = fd_curl(&a_f, pos, h)?.sub(&a.cross(&a)?.scale_c(ig))?;
    Ok((e, b))
}

/// `(E, B)` for the static configuration.
pub fn field_strengths<T: Real>(
    cfg: &PotentialConfig<T>,
    pos: [T; 3],
    method: Method,
) -> Result<(MatrixVec3<T>, MatrixVec3<T>)> {
    if !cfg.case().is_solvable() && cfg.profile != F1Profile::Inverse {
        return Err(Error::NoSolution);
    }
    match method {
        Method::Analytic => analytic_fields(cfg, pos),
        Method::FiniteDifference => fd_fields(cfg, pos),
    }
}

/// Potentials and fields at one position.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample<T: Real> {
    pub position: [T; 3],
    pub a: MatrixVec3<T>,
    pub phi: CMat<T>,
    pub e: MatrixVec3<T>,
    pub b: MatrixVec3<T>,
}

pub fn sample<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3], method: Method) -> Result<FieldSample<T>> {
    let (a, phi) = eval_potentials(cfg, pos)?;
    let (e, b) = field_strengths(cfg, pos, method)?;
    Ok(FieldSample { position: pos, a, phi, e, b })
}

/// Matrix-valued residuals of the four static field equations.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualMatrices<T: Real> {
    pub div_e: CMat<T>,
    pub curl_e: MatrixVec3<T>,
    pub div_b: CMat<T>,
    pub curl_b: MatrixVec3<T>,
}

impl<T: Real> ResidualMatrices<T> {
    pub fn norms(&self) -> [T; 4] {
        use crate::spin_algebra::frobenius;
        [frobenius(&self.div_e), self.curl_e.norm(), frobenius(&self.div_b), self.curl_b.norm()]
    }
}

struct Derivatives<T: Real> {
    div_e: CMat<T>,
    curl_e: MatrixVec3<T>,
    div_b: CMat<T>,
    curl_b: MatrixVec3<T>,
}

fn analytic_derivatives<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3]) -> Result<Derivatives<T>> {
    let r = radius(pos)?;
    let fc = field_coefficients(cfg, r);
    let x = cfg.spin.dot_position(pos);
    let id = &cfg.spin.identity;
    let rxs = cfg.spin.cross_position(pos);
    let [a, ap] = fc.a;
    let [b, bp] = fc.b;
    let [_, cp] = fc.c;
    let [beta, betap] = fc.beta;
    let four = T::lit(4.0);
    Ok(Derivatives {
        div_e: scale(&x, ap * r + four * a + cp / r) + scale(id, bp * r + T::lit(3.0) * b),
        curl_e: rxs.scale(cp / r - a),
        div_b: scale(&x, betap * r + four * beta),
        curl_b: rxs.scale(-beta),
    })
}

fn fd_derivatives<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3]) -> Result<Derivatives<T>> {
    let h = fd_step(pos);
    let e_f = |p: [T; 3]| fd_fields(cfg, p).map(|(e, _)| e);
    let b_f = |p: [T; 3]| fd_fields(cfg, p).map(|(_, b)| b);
    Ok(Derivatives {
        div_e: fd_divergence(&e_f, pos, h)?,
        curl_e: fd_curl(&e_f, pos, h)?,
        div_b: fd_divergence(&b_f, pos, h)?,
        curl_b: fd_curl(&b_f, pos, h)?,
    })
}

/// Residual matrices of
/// `∇·E + σig(A·E−E·A)`, `−∇×E + σig([φ,B] − A×E − E×A)`,
/// `∇·B + σig(A·B−B·A)`, `∇×B + σig([φ,E] + A×B + B×A)`,
/// with `σ = -1` (covariant) or `+1` (printed).
pub fn ym_residual_matrices<T: Real>(
    cfg: &PotentialConfig<T>,
    pos: [T; 3],
    method: Method,
    convention: Convention,
) -> Result<ResidualMatrices<T>> {
    let s = sample(cfg, pos, method)?;
    let d = match method {
        Method::Analytic => analytic_derivatives(cfg, pos)?,
        Method::FiniteDifference => fd_derivatives(cfg, pos)?,
    };
    let sig: Complex<T> = ci(cfg.g * convention.sign::<T>());
    let (a, e, b, phi) = (&s.a, &s.e, &s.b, &s.phi);

    let div_e = d.div_e + scale_c(&(a.dot(e)? - e.dot(a)?), sig);
    let curl_e = d
        .curl_e
        .scale(-T::one())
        .add(&b.comm_left(phi).sub(&a.cross(e)?)?.sub(&e.cross(a)?)?.scale_c(sig))?;
    let div_b = d.div_b + scale_c(&(a.dot(b)? - b.dot(a)?), sig);
    let curl_b = d.curl_b.add(&e.comm_left(phi).add(&a.cross(b)?)?.add(&b.cross(a)?)?.scale_c(sig))?;
    Ok(ResidualMatrices { div_e, curl_e, div_b, curl_b })
}

/// Frobenius norms of the four residuals.
pub fn ym_residuals<T: Real>(
    cfg: &PotentialConfig<T>,
    pos: [T; 3],
    method: Method,
    convention: Convention,
) -> Result<[T; 4]> {
    ym_residual_matrices(cfg, pos, method, convention).map(|m| m.norms())
}

/// One row of a residual sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRow<T> {
    pub index: usize,
    pub position: [T; 3],
    pub r: T,
    pub residuals: [T; 4],
}

/// Residuals at every point, evaluated in parallel, returned in input order.
pub fn residual_sweep<T: Real>(
    cfg: &PotentialConfig<T>,
    points: &[[T; 3]],
    method: Method,
    convention: Convention,
) -> Result<Vec<ResidualRow<T>>> {
    points
        .par_iter()
        .enumerate()
        .map(|(index, &p)| {
            Ok(ResidualRow { index, position: p, r: norm3(p), residuals: ym_residuals(cfg, p, method, convention)? })
        })
        .collect()
}

/// Divergence and curl norms of the Coulomb field `κ r̂/r²` by finite differences.
pub fn maxwell_check<T: Real>(kappa: T, pos: [T; 3]) -> Result<(T, T)> {
    radius(pos)?;
    let field = |p: [T; 3]| -> Result<MatrixVec3<T>> {
        let r = radius(p)?;
        Ok(MatrixVec3::numeric(p, 1).scale(kappa / (r * r * r)))
    };
    let h = fd_step(pos);
    let div = fd_divergence(&field, pos, h)?;
    let curl = fd_curl(&field, pos, h)?;
    Ok((crate::spin_algebra::frobenius(&div), curl.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_algebra::max_abs;

    fn case4(s: f64) -> PotentialConfig<f64> {
        PotentialConfig::type2(1.0, 1.0, 1.0, s).unwrap()
    }

    #[test]
    fn classification_table() {
        assert_eq!(classify_solution(0.0, 0.0), SolutionCase::I);
        assert_eq!(classify_solution(0.0, 1.0), SolutionCase::II);
        assert_eq!(classify_solution(2.0, 0.0), SolutionCase::III);
        assert_eq!(classify_solution(1.0, 1.0), SolutionCase::IV);
        assert_eq!(F1Profile::for_case(SolutionCase::IV), F1Profile::Inverse);
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(PotentialConfig::new(0.0, 1.0, 0.0, 0.0, 1.0, 0.5), Err(Error::NoSolution));
        match PotentialConfig::new(1.0, 0.5, 1.0, 0.0, 1.0, 0.5) {
            Err(Error::ConstraintViolation { residual }) => assert!((residual + 0.5).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert_eq!(PotentialConfig::new(1.0, 0.0, 1.0, 0.0, 1.0, 0.5), Err(Error::Kappa1InCaseIII));
        assert_eq!(PotentialConfig::new(1.0, 1.0, 1.0, 0.2, 1.0, 0.5), Err(Error::Kappa2OutsideCaseI));
        assert!(PotentialConfig::type1(1.0, 0.3, 1.0, 0.5).is_ok());
    }

    #[test]
    fn potentials_on_z_axis() {
        let cfg = case4(0.5);
        let (a, phi) = eval_potentials(&cfg, [0.0, 0.0, 1.0]).unwrap();
        let s = &cfg.spin;
        assert!(max_abs(&(&a.x + &s.sy)) < 1e-15);
        assert!(max_abs(&(&a.y - &s.sx)) < 1e-15);
        assert!(max_abs(&a.z) < 1e-15);
        assert!(max_abs(&(phi - (&s.sz + &s.identity))) < 1e-15);
    }

    #[test]
    fn spinless_reduction() {
        let cfg = PotentialConfig::type1(0.0, 0.0, 2.0, 0.5).unwrap();
        let pos = [0.3, 0.4, 1.2];
        let r = norm3(pos);
        let (a, phi) = eval_potentials(&cfg, pos).unwrap();
        assert_eq!(a.max_abs(), 0.0);
        assert!(max_abs(&(phi - scale(&cfg.spin.identity, 2.0 / r))) < 1e-15);
        let (e, b) = field_strengths(&cfg, pos, Method::Analytic).unwrap();
        let want = MatrixVec3::numeric(pos, 2).scale(2.0 / (r * r * r));
        assert!(e.sub(&want).unwrap().max_abs() < 1e-15);
        assert_eq!(b.max_abs(), 0.0);
    }

    #[test]
    fn case1_scalar_potential_on_x_axis() {
        let cfg = PotentialConfig::type1(1.0, 0.0, 0.0, 0.5).unwrap();
        let (_, phi) = eval_potentials(&cfg, [1.0, 0.0, 0.0]).unwrap();
        assert!(max_abs(&(phi - &cfg.spin.sx)) < 1e-15);
    }

    #[test]
    fn case4_magnetic_field() {
        let cfg = case4(0.5);
        let pos = [0.7, -0.2, 1.1];
        let r = norm3(pos);
        let (_, b) = field_strengths(&cfg, pos, Method::Analytic).unwrap();
        let want = MatrixVec3::outer(&cfg.spin.dot_position(pos), pos).scale(-1.0 / r.powi(4));
        assert!(b.sub(&want).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn fd_fields_match_analytic() {
        for cfg in [case4(0.5), PotentialConfig::type1(1.0, 0.3, 1.0, 0.5).unwrap()] {
            for p in crate::sampling::ShellSampler::default().points::<f64>(16) {
                let (ea, ba) = field_strengths(&cfg, p, Method::Analytic).unwrap();
                let (ef, bf) = field_strengths(&cfg, p, Method::FiniteDifference).unwrap();
                assert!(ea.sub(&ef).unwrap().max_abs() < 1e-5);
                assert!(ba.sub(&bf).unwrap().max_abs() < 1e-5);
            }
        }
    }

    #[test]
    fn case4_residuals_vanish() {
        let cfg = case4(0.5);
        for p in crate::sampling::standard_points::<f64>().into_iter().take(8) {
            let an = ym_residuals(&cfg, p, Method::Analytic, Convention::Covariant).unwrap();
            let fd = ym_residuals(&cfg, p, Method::FiniteDifference, Convention::Covariant).unwrap();
            assert!(an.iter().all(|v| *v < 1e-10), "{an:?}");
            assert!(fd.iter().all(|v| *v < 1e-5), "{fd:?}");
        }
    }

    #[test]
    fn printed_sign_breaks_case4() {
        let cfg = case4(0.5);
        let p = [0.8, 0.3, -0.5];
        let res = ym_residuals(&cfg, p, Method::Analytic, Convention::Printed).unwrap();
        assert!(res.iter().any(|v| *v > 1e-2), "{res:?}");
    }

    #[test]
    fn printed_sign_harmless_for_abelian_case() {
        let cfg = PotentialConfig::type1(1.0, 0.3, 1.0, 1.0).unwrap();
        let res = ym_residuals(&cfg, [0.8, 0.3, -0.5], Method::Analytic, Convention::Printed).unwrap();
        assert!(res.iter().all(|v| *v < 1e-10));
    }

    #[test]
    fn negative_control_fails() {
        let cfg = PotentialConfig::unchecked(1.0, 0.5, 1.0, 0.0, 1.0, 0.5, F1Profile::Inverse).unwrap();
        let res = ym_residuals(&cfg, [0.8, 0.3, -0.5], Method::Analytic, Convention::Covariant).unwrap();
        assert!(res.iter().any(|v| *v > 1e-2), "{res:?}");
    }

    #[test]
    fn maxwell() {
        let (d, c) = maxwell_check(1.0, [1.0, 1.0, 1.0]).unwrap();
        assert!(d < 1e-6 && c < 1e-6);
        assert_eq!(maxwell_check(0.0, [1.0, 2.0, 0.5]).unwrap(), (0.0, 0.0));
        assert_eq!(maxwell_check(1.0, [0.0, 0.0, 0.0]), Err(Error::Origin));
    }

    #[test]
    fn origin_rejected() {
        assert_eq!(eval_potentials(&case4(0.5), [0.0; 3]).err(), Some(Error::Origin));
    }

    #[test]
    fn sweep_preserves_order() {
        let cfg = case4(0.5);
        let pts = crate::sampling::standard_points::<f64>();
        let rows = residual_sweep(&cfg, &pts[..10], Method::Analytic, Convention::Covariant).unwrap();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.index, i);
            assert_eq!(row.position, pts[i]);
        }
    }

    #[test]
    fn analytic_residuals_in_f32() {
        let cfg = PotentialConfig::<f32>::type2(1.0, 1.0, 1.0, 0.5).unwrap();
        let res = ym_residuals(&cfg, [0.8, 0.3, -0.5], Method::Analytic, Convention::Covariant).unwrap();
        assert!(res.iter().all(|v| *v < 1e-4), "{res:?}");
    }
}
