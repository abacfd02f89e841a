//! Heisenberg-picture force operators for the spin-dependent potentials.

use num_complex::Complex;

use crate::gauge_fields::{
    eval_potentials, fd_curl, fd_gradient, fd_step, field_strengths, F1Profile, Method, PotentialConfig, SolutionCase,
};
use crate::sampling::norm3;
use crate::spin_algebra::{ci, kron, pauli, scale, CMat, MatrixVec3, SpinRep};
use crate::{Error, Real, Result};

/// Which prefactor links `G` (from `Π×Π = iℏG`) to the field `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MagneticForm {
    /// `G = (q/c)k(qk/c − 2)(r·S)r/r⁴`, obtained by expanding the commutators.
    #[default]
    Commutator,
    /// `G = −(γ/ℏ)B` with `γ = ℏ(q/c)(2 + qk/c)`.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceOptions<T> {
    /// Speed of light; `q/c` enters `Π = p − (q/c)A`.
    pub c: T,
    pub mass: T,
    pub form: MagneticForm,
    /// Treat `v` as commuting with `B` and use `v×G` unsymmetrized.
    pub relativistic: bool,
}

impl<T: Real> ForceOptions<T> {
    /// `c` chosen so that `q/c = gℏ`; with `gℏk = 1` this gives `qk/c = 1`.
    pub fn matched(cfg: &PotentialConfig<T>) -> Self {
        let c = if cfg.g == T::zero() { T::one() } else { cfg.q / (cfg.g * cfg.hbar) };
        Self { c, mass: T::one(), form: MagneticForm::default(), relativistic: false }
    }
}

fn radius<T: Real>(pos: [T; 3]) -> Result<T> {
    let r = norm3(pos);
    if !(r > T::zero()) {
        return Err(Error::Origin);
    }
    Ok(r)
}

/// `γ` in `G = −(γ/ℏ)B` for the selected form, valid when `gℏk = 1`.
pub fn gamma<T: Real>(cfg: &PotentialConfig<T>, opts: &ForceOptions<T>) -> T {
    let qc = cfg.q / opts.c;
    let x = qc * cfg.k;
    match opts.form {
        MagneticForm::Commutator => cfg.hbar * qc * (x - T::lit(2.0)),
        MagneticForm::Printed => cfg.hbar * qc * (T::lit(2.0) + x),
    }
}

/// `G` from `(Π×Π)_i = ½ε_ijk[Π_j, Π_k] = iℏG_i`:
/// `G = (q/c)∇×A − i(q/c)²/ℏ · A×A`, with the curl taken by finite differences.
pub fn g_field_commutator<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3], c: T) -> Result<MatrixVec3<T>> {
    radius(pos)?;
    let qc = cfg.q / c;
    let a_f = |p: [T; 3]| eval_potentials(cfg, p).map(|(a, _)| a);
    let curl = fd_curl(&a_f, pos, fd_step(pos))?;
    let (a, _) = eval_potentials(cfg, pos)?;
    let axa = a.cross(&a)?;
    curl.scale(qc).sub(&axa.scale_c(ci(qc * qc / cfg.hbar)))
}

/// Closed-form `G` for the selected [`MagneticForm`].
pub fn g_field<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3], opts: &ForceOptions<T>) -> Result<MatrixVec3<T>> {
    let r = radius(pos)?;
    let qc = cfg.q / opts.c;
    match opts.form {
        MagneticForm::Commutator => {
            let x = cfg.spin.dot_position(pos);
            let coef = qc * cfg.k * (qc * cfg.k - T::lit(2.0)) / r.powi(4);
            Ok(MatrixVec3::outer(&scale(&x, coef), pos))
        }
        MagneticForm::Printed => {
            let (_, b) = field_strengths(cfg, pos, Method::Analytic)?;
            Ok(b.scale(-gamma(cfg, opts) / cfg.hbar))
        }
    }
}

/// `F = −q∇[(κ₁/r² + κ₂r)(r̂·S) + κ₃/r]` for case I.
pub fn force_type1<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3]) -> Result<MatrixVec3<T>> {
    if cfg.case() != SolutionCase::I {
        return Err(Error::Domain("force_type1 needs a case I configuration".into()));
    }
    let r = radius(pos)?;
    let [f1, f1p, _] = cfg.f1(r);
    let [_, f2p, _] = cfg.f2(r);
    let rhat = pos.map(|v| v / r);
    let x = cfg.spin.dot_position(pos);
    let grad = MatrixVec3::outer(&scale(&x, f1p), rhat)
        .add(&cfg.spin.vector().scale(f1))?
        .add(&MatrixVec3::outer(&scale(&cfg.spin.identity, f2p), rhat))?;
    Ok(grad.scale(-cfg.q))
}

/// `−q∇φ` by fourth-order central differences.
pub fn force_type1_fd<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3]) -> Result<MatrixVec3<T>> {
    radius(pos)?;
    let phi = |p: [T; 3]| eval_potentials(cfg, p).map(|(_, f)| f);
    Ok(fd_gradient(&phi, pos, fd_step(pos))?.scale(-cfg.q))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceDecomposition<T: Real> {
    pub magnetic_part: MatrixVec3<T>,
    pub electric_part: MatrixVec3<T>,
    pub spin_part: MatrixVec3<T>,
    pub total: MatrixVec3<T>,
}

impl<T: Real> ForceDecomposition<T> {
    pub fn closure_defect(&self) -> Result<T> {
        let sum = self.magnetic_part.add(&self.electric_part)?.add(&self.spin_part)?;
        Ok(sum.sub(&self.total)?.max_abs())
    }
}

fn magnetic<T: Real>(
    cfg: &PotentialConfig<T>,
    velocity: &MatrixVec3<T>,
    b: &MatrixVec3<T>,
    opts: &ForceOptions<T>,
) -> Result<MatrixVec3<T>> {
    // ½(v×G − G×v) with G = −(γ/ℏ)B.
    let pref = -gamma(cfg, opts) / (T::lit(2.0) * cfg.hbar);
    if opts.relativistic {
        Ok(velocity.cross(b)?.scale(T::lit(2.0) * pref))
    } else {
        Ok(velocity.cross(b)?.sub(&b.cross(velocity)?)?.scale(pref))
    }
}

/// `qκ₁(qk/c − 1)[S/r − (r·S)r/r³]`
pub fn spin_part_closed<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3], c: T) -> Result<MatrixVec3<T>> {
    let r = radius(pos)?;
    let x = cfg.spin.dot_position(pos);
    let proj = cfg.spin.vector().scale(T::one() / r).sub(&MatrixVec3::outer(&x, pos).scale(T::one() / (r * r * r)))?;
    Ok(proj.scale(cfg.q * cfg.kappa1 * (cfg.q * cfg.k / c - T::one())))
}

/// `i[φ, A]` from the matrices.
pub fn phi_a_commutator<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3]) -> Result<MatrixVec3<T>> {
    let (a, phi) = eval_potentials(cfg, pos)?;
    Ok(a.comm_left(&phi).scale_c(ci(T::one())))
}

/// `−ℏkκ₁[r²S − (r·S)r]/r³`
pub fn phi_a_commutator_closed<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3]) -> Result<MatrixVec3<T>> {
    let r = radius(pos)?;
    let x = cfg.spin.dot_position(pos);
    let v = cfg.spin.vector().scale(r * r).sub(&MatrixVec3::outer(&x, pos))?;
    Ok(v.scale(-cfg.hbar * cfg.k * cfg.kappa1 / (r * r * r)))
}

fn require_type2<T: Real>(cfg: &PotentialConfig<T>) -> Result<()> {
    if cfg.case() != SolutionCase::IV || cfg.profile != F1Profile::Inverse {
        return Err(Error::Domain("type-II force needs a case IV configuration".into()));
    }
    Ok(())
}

/// Magnetic, electric and spin parts of the type-II force.
pub fn force_type2<T: Real>(
    cfg: &PotentialConfig<T>,
    velocity: &MatrixVec3<T>,
    pos: [T; 3],
    opts: &ForceOptions<T>,
) -> Result<ForceDecomposition<T>> {
    require_type2(cfg)?;
    let (e, b) = field_strengths(cfg, pos, Method::Analytic)?;
    let magnetic_part = magnetic(cfg, velocity, &b, opts)?;
    let electric_part = e.scale(cfg.q);
    let spin_part = spin_part_closed(cfg, pos, opts.c)?;
    let total = magnetic_part.add(&electric_part)?.add(&spin_part)?;
    Ok(ForceDecomposition { magnetic_part, electric_part, spin_part, total })
}

/// The same force assembled from `B`, `E` and the raw matrix commutator
/// `q(g − q/(ℏc)) i[φ, A]`.
pub fn force_type2_direct<T: Real>(
    cfg: &PotentialConfig<T>,
    velocity: &MatrixVec3<T>,
    pos: [T; 3],
    opts: &ForceOptions<T>,
) -> Result<MatrixVec3<T>> {
    require_type2(cfg)?;
    let (e, b) = field_strengths(cfg, pos, Method::Analytic)?;
    let comm = phi_a_commutator(cfg, pos)?;
    let coupling = cfg.q * (cfg.g - cfg.q / (cfg.hbar * opts.c));
    magnetic(cfg, velocity, &b, opts)?.add(&e.scale(cfg.q))?.add(&comm.scale(coupling))
}

/// Heisenberg form `½(v×G − G×v) − q∇φ − i(q²/(ℏc))[φ, A]` with `G` and
/// `∇φ` by finite differences.
pub fn force_heisenberg_fd<T: Real>(
    cfg: &PotentialConfig<T>,
    velocity: &MatrixVec3<T>,
    pos: [T; 3],
    opts: &ForceOptions<T>,
) -> Result<MatrixVec3<T>> {
    let g = g_field_commutator(cfg, pos, opts.c)?;
    let half = T::lit(0.5);
    let mag = if opts.relativistic {
        velocity.cross(&g)?
    } else {
        velocity.cross(&g)?.sub(&g.cross(velocity)?)?.scale(half)
    };
    let phi = |p: [T; 3]| eval_potentials(cfg, p).map(|(_, f)| f);
    let grad = fd_gradient(&phi, pos, fd_step(pos))?;
    let comm = phi_a_commutator(cfg, pos)?;
    mag.sub(&grad.scale(cfg.q))?.sub(&comm.scale(cfg.q * cfg.q / (cfg.hbar * opts.c)))
}

/// Two-spin coupling `γ/(2M) σ₁·B` with `B = −(ℏk/2)(r·σ₂)r/r⁴`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTensor<T: Real> {
    pub coupling: CMat<T>,
    /// `(r·σ₁)(r·σ₂)/r²`
    pub t12: CMat<T>,
    /// Scalar `f(r)` with `coupling = f(r) T₁₂`.
    pub radial_factor: T,
    /// Largest deviation of the entrywise ratio from `radial_factor`.
    pub ratio_spread: T,
}

pub fn pauli_tensor<T: Real>(cfg: &PotentialConfig<T>, pos: [T; 3], opts: &ForceOptions<T>) -> Result<PauliTensor<T>> {
    require_type2(cfg)?;
    let r = radius(pos)?;
    let half = PotentialConfig { spin: SpinRep::new(0.5, cfg.hbar)?, ..cfg.clone() };
    let (_, b) = field_strengths(&half, pos, Method::Analytic)?;
    let sig = pauli::<T>();
    let id2 = crate::spin_algebra::identity::<T>(2);
    let bc = b.components();
    let mut s1b = crate::spin_algebra::zeros::<T>(4);
    for i in 0..3 {
        s1b += kron(&sig[i], bc[i]);
    }
    let coupling = scale(&s1b, gamma(cfg, opts) / (T::lit(2.0) * opts.mass));
    let rs = scale(&sig[0], pos[0]) + scale(&sig[1], pos[1]) + scale(&sig[2], pos[2]);
    let t12 = scale(&(kron(&rs, &id2) * kron(&id2, &rs)), T::one() / (r * r));
    let tmax = t12.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let mut ratios: Vec<Complex<T>> = Vec::new();
    for (cij, tij) in coupling.iter().zip(t12.iter()) {
        if tij.norm() > T::lit(1e-8) * tmax {
            ratios.push(cij / tij);
        } else if cij.norm() > T::lit(1e-12) * tmax {
            return Err(Error::Domain("coupling has support where T12 vanishes".into()));
        }
    }
    let f = ratios[0];
    let ratio_spread = ratios.iter().fold(T::zero(), |m, z| m.max((z - f).norm()));
    Ok(PauliTensor { coupling, t12, radial_factor: f.re, ratio_spread: ratio_spread.max(f.im.abs()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::standard_points;

    fn type2(s: f64) -> PotentialConfig<f64> {
        PotentialConfig::type2(1.0, 1.0, 1.0, s).unwrap()
    }

    #[test]
    fn g_vanishes_without_vector_potential() {
        let cfg = PotentialConfig::type1(1.0, 0.3, 1.0, 0.5).unwrap();
        let opts = ForceOptions::matched(&cfg);
        let g = g_field_commutator(&cfg, [0.3, 0.4, 1.2], opts.c).unwrap();
        assert!(g.max_abs() < 1e-14);
    }

    #[test]
    fn commutator_g_matches_closed_form() {
        for s in [0.5, 1.0] {
            let cfg = type2(s);
            let opts = ForceOptions::matched(&cfg);
            for p in standard_points::<f64>().into_iter().take(16) {
                let fd = g_field_commutator(&cfg, p, opts.c).unwrap();
                let cf = g_field(&cfg, p, &opts).unwrap();
                assert!(fd.sub(&cf).unwrap().max_abs() < 1e-8);
                assert!(cf.hermiticity_defect() < 1e-14);
            }
        }
    }

    #[test]
    fn printed_gamma_disagrees_with_commutators() {
        let cfg = type2(0.5);
        let mut opts = ForceOptions::matched(&cfg);
        let p = [0.0, 0.0, 1.0];
        let fd = g_field_commutator(&cfg, p, opts.c).unwrap();
        opts.form = MagneticForm::Printed;
        let printed = g_field(&cfg, p, &opts).unwrap();
        // With qk/c = 1: commutators give (q/c)B, the printed γ gives −3(q/c)B.
        let (_, b) = field_strengths(&cfg, p, Method::Analytic).unwrap();
        assert!(fd.sub(&b).unwrap().max_abs() < 1e-8);
        assert!(printed.add(&b.scale(3.0)).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn type1_coulomb_limit() {
        let cfg = PotentialConfig::type1(0.0, 0.0, -2.0, 0.5).unwrap();
        let p = [0.3, -0.2, 0.9];
        let r: f64 = norm3(p);
        let f = force_type1(&cfg, p).unwrap();
        let want = MatrixVec3::numeric(p.map(|v| -2.0 * v / r.powi(3)), 2);
        assert!(f.sub(&want).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn type1_linear_term() {
        let cfg = PotentialConfig::type1(0.0, 0.7, 0.0, 1.0).unwrap();
        let f = force_type1(&cfg, [0.0, 0.0, 1.0]).unwrap();
        assert!(f.sub(&cfg.spin.vector().scale(-0.7)).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn type1_gradient_matches_fd() {
        let cfg = PotentialConfig::type1(1.0, 0.3, 1.0, 1.0).unwrap();
        for p in standard_points::<f64>() {
            let a = force_type1(&cfg, p).unwrap();
            let n = force_type1_fd(&cfg, p).unwrap();
            assert!(a.sub(&n).unwrap().max_abs() < 1e-6);
            assert!(a.hermiticity_defect() < 1e-14);
        }
    }

    #[test]
    fn spin_part_is_transverse_projection() {
        let cfg = type2(0.5);
        let mut opts = ForceOptions::matched(&cfg);
        opts.c = 2.0;
        let f3 = spin_part_closed(&cfg, [0.0, 0.0, 1.0], opts.c).unwrap();
        let pref = 1.0 * (0.5 - 1.0);
        let s = cfg.spin.vector();
        assert!(crate::spin_algebra::max_abs(&(&f3.x - scale(&s.x, pref))) < 1e-15);
        assert!(crate::spin_algebra::max_abs(&(&f3.y - scale(&s.y, pref))) < 1e-15);
        assert!(crate::spin_algebra::max_abs(&f3.z) < 1e-15);
    }

    #[test]
    fn spin_part_vanishes_without_kappa1() {
        let cfg = PotentialConfig::type2(1.0, 0.0, 1.0, 0.5).unwrap();
        let opts = ForceOptions::matched(&cfg);
        let v = MatrixVec3::numeric([0.1, 0.2, 0.3], 2);
        let d = force_type2(&cfg, &v, [0.4, 0.1, 0.8], &opts).unwrap();
        assert!(d.spin_part.max_abs() == 0.0);
    }

    #[test]
    fn phi_a_commutator_closed_form() {
        for s in [0.5, 1.0, 1.5] {
            let cfg = type2(s);
            for p in standard_points::<f64>().into_iter().take(10) {
                let m = phi_a_commutator(&cfg, p).unwrap();
                let c = phi_a_commutator_closed(&cfg, p).unwrap();
                assert!(m.sub(&c).unwrap().max_abs() < 1e-13);
            }
        }
    }

    #[test]
    fn decomposition_closure_and_direct_assembly() {
        let cfg = type2(1.0);
        for (c, form) in [(1.0, MagneticForm::Commutator), (0.7, MagneticForm::Printed)] {
            let opts = ForceOptions { c, mass: 1.0, form, relativistic: false };
            let spin = &cfg.spin;
            let v = spin.vector().scale(0.3).add(&MatrixVec3::numeric([0.1, -0.2, 0.5], 3)).unwrap();
            for p in standard_points::<f64>().into_iter().take(12) {
                let d = force_type2(&cfg, &v, p, &opts).unwrap();
                assert_eq!(d.closure_defect().unwrap(), 0.0);
                let direct = force_type2_direct(&cfg, &v, p, &opts).unwrap();
                assert!(direct.sub(&d.total).unwrap().max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn heisenberg_form_matches_commutator_decomposition() {
        let cfg = type2(0.5);
        for c in [1.0, 0.6] {
            let opts = ForceOptions { c, mass: 1.0, form: MagneticForm::Commutator, relativistic: false };
            let v = cfg.spin.vector().add(&MatrixVec3::numeric([0.2, 0.0, -0.4], 2)).unwrap();
            for p in standard_points::<f64>().into_iter().take(8) {
                let d = force_type2(&cfg, &v, p, &opts).unwrap();
                let h = force_heisenberg_fd(&cfg, &v, p, &opts).unwrap();
                assert!(h.sub(&d.total).unwrap().max_abs() < 1e-7);
            }
        }
    }

    #[test]
    fn relativistic_collapse_for_commuting_velocity() {
        let cfg = type2(0.5);
        let mut opts = ForceOptions::matched(&cfg);
        let v = MatrixVec3::numeric([0.3, -0.1, 0.2], 2);
        let p = [0.5, 0.2, 0.7];
        let sym = force_type2(&cfg, &v, p, &opts).unwrap();
        opts.relativistic = true;
        let col = force_type2(&cfg, &v, p, &opts).unwrap();
        assert!(sym.magnetic_part.sub(&col.magnetic_part).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn scalar_limit_is_lorentz_like() {
        let cfg = PotentialConfig::type2(1.0, 1.0, -1.0, 0.0).unwrap();
        let opts = ForceOptions::matched(&cfg);
        let v = MatrixVec3::numeric([0.3, 0.1, 0.0], 1);
        let p = [0.2, 0.5, 0.6];
        let d = force_type2(&cfg, &v, p, &opts).unwrap();
        let r: f64 = norm3(p);
        let coulomb = MatrixVec3::numeric(p.map(|x| -x / r.powi(3)), 1);
        assert!(d.total.sub(&coulomb).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn tensor_term_proportionality() {
        let cfg = type2(0.5);
        let opts = ForceOptions::matched(&cfg);
        let dir = [0.3, -0.5, 0.81];
        let n = norm3(dir);
        let at = |r: f64| pauli_tensor(&cfg, dir.map(|v| v * r / n), &opts).unwrap();
        let (t1, t2) = (at(1.0), at(2.0));
        assert!(t1.ratio_spread < 1e-12);
        assert!((t1.radial_factor / t2.radial_factor - 4.0).abs() < 1e-10);
        assert!(crate::spin_algebra::hermiticity_defect(&t1.coupling) < 1e-14);
    }
}
