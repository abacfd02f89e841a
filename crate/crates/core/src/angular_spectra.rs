//! Angular eigenproblems: coupled spinor harmonics, `σ_r` intertwining,
//! `ℓ·S`, the `Λ̂` operator and the eight-dimensional `η = r̂·(α₁×σ₂)`.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex;

use crate::sampling::{directions, from_spherical, to_spherical};
use crate::specfun::ylm;
use crate::spin_algebra::{identity, kron, max_abs, pauli, CMat};
use crate::{Error, Real, Result};

pub type Spinor<T> = [Complex<T>; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `j = l + ½`
    A,
    /// `j = l − ½`
    B,
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn sqrt_pos<T: Real>(v: i64) -> T {
    if v <= 0 {
        T::zero()
    } else {
        T::from_int(v).sqrt()
    }
}

/// Value of the coupled harmonic without range checks; vanishes outside the
/// admissible `m` window.
pub fn coupled_value<T: Real>(variant: Variant, l: i32, m: i32, theta: T, phi: T) -> Spinor<T> {
    if l < 0 {
        return [czero(), czero()];
    }
    let (li, mi) = (l as i64, m as i64);
    let n = T::from_int(2 * li + 1).sqrt();
    let up = ylm(l, m, theta, phi);
    let dn = ylm(l, m + 1, theta, phi);
    match variant {
        Variant::A => [up * (sqrt_pos::<T>(li + mi + 1) / n), dn * (sqrt_pos::<T>(li - mi) / n)],
        Variant::B => [up * (-sqrt_pos::<T>(li - mi) / n), dn * (sqrt_pos::<T>(li + mi + 1) / n)],
    }
}

/// Two-spinor harmonic `Φᴬ_{lm}` or `Φᴮ_{lm}`, with `J_z = (m + ½)ℏ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoupledHarmonic {
    pub l: i32,
    pub m: i32,
    pub variant: Variant,
}

impl CoupledHarmonic {
    pub fn m_range(l: i32, variant: Variant) -> std::ops::RangeInclusive<i32> {
        match variant {
            Variant::A => (-l - 1)..=l,
            Variant::B => (-l)..=(l - 1),
        }
    }

    pub fn value<T: Real>(&self, theta: T, phi: T) -> Spinor<T> {
        coupled_value(self.variant, self.l, self.m, theta, phi)
    }

    /// `j` of the harmonic.
    pub fn j(&self) -> f64 {
        match self.variant {
            Variant::A => self.l as f64 + 0.5,
            Variant::B => self.l as f64 - 0.5,
        }
    }
}

pub fn coupled_harmonic(l: i32, m: i32, variant: Variant) -> Result<CoupledHarmonic> {
    if l < 0 || (variant == Variant::B && l == 0) || !CoupledHarmonic::m_range(l, variant).contains(&m) {
        return Err(Error::QuantumNumbers(format!("no {variant:?} harmonic with l={l}, m={m}")));
    }
    Ok(CoupledHarmonic { l, m, variant })
}

/// `r̂·σ` at `(θ, φ)`.
pub fn sigma_r<T: Real>(theta: T, phi: T) -> [[Complex<T>; 2]; 2] {
    let (st, ct) = (theta.sin(), theta.cos());
    let e = Complex::new(phi.cos(), phi.sin());
    [[Complex::new(ct, T::zero()), e.conj() * st], [e * st, Complex::new(-ct, T::zero())]]
}

fn apply2<T: Real>(m: &[[Complex<T>; 2]; 2], v: Spinor<T>) -> Spinor<T> {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

fn sup_diff<T: Real>(a: Spinor<T>, b: Spinor<T>) -> T {
    (a[0] - b[0]).norm().max((a[1] - b[1]).norm())
}

/// Sample directions on the sphere, polar caps excluded.
pub fn sphere_samples<T: Real>(n: usize) -> Vec<(T, T)> {
    directions::<T>(n)
        .into_iter()
        .map(|d| {
            let (_, t, p) = to_spherical(d);
            (t, p)
        })
        .collect()
}

/// Sup-norm of `σ_r Φᴬ_{lm} + Φᴮ_{l+1,m}` and `σ_r Φᴮ_{l+1,m} + Φᴬ_{lm}`.
pub fn sigma_r_intertwine<T: Real>(l: i32, m: i32, n_dirs: usize) -> Result<T> {
    coupled_harmonic(l, m, Variant::A)?;
    let mut worst = T::zero();
    for (t, p) in sphere_samples::<T>(n_dirs) {
        let s = sigma_r(t, p);
        let a = coupled_value(Variant::A, l, m, t, p);
        let b = coupled_value(Variant::B, l + 1, m, t, p);
        let neg = |v: Spinor<T>| [-v[0], -v[1]];
        worst = worst.max(sup_diff(apply2(&s, a), neg(b))).max(sup_diff(apply2(&s, b), neg(a)));
    }
    Ok(worst)
}

/// Sup-norm of `S_r(Φᴬ ∓ Φᴮ) ∓ ½(Φᴬ ∓ Φᴮ)` with `S_r = σ_r/2`.
pub fn s_r_eigen_residual<T: Real>(l: i32, m: i32, n_dirs: usize) -> Result<T> {
    coupled_harmonic(l, m, Variant::A)?;
    let half = T::lit(0.5);
    let mut worst = T::zero();
    for (t, p) in sphere_samples::<T>(n_dirs) {
        let s = sigma_r(t, p);
        let a = coupled_value(Variant::A, l, m, t, p);
        let b = coupled_value(Variant::B, l + 1, m, t, p);
        for sign in [T::one(), -T::one()] {
            let v = [a[0] - b[0] * sign, a[1] - b[1] * sign];
            let sv = apply2(&s, v);
            let lhs = [sv[0] * half, sv[1] * half];
            let rhs = [v[0] * (half * sign), v[1] * (half * sign)];
            worst = worst.max(sup_diff(lhs, rhs));
        }
    }
    Ok(worst)
}

/// Five-point angular derivatives of a spinor field.
struct AngularFd<T> {
    h: T,
}

impl<T: Real> AngularFd<T> {
    fn d1(&self, f: &dyn Fn(T) -> Spinor<T>, x: T) -> Spinor<T> {
        let h = self.h;
        let two = T::lit(2.0);
        let (m2, m1, p1, p2) = (f(x - two * h), f(x - h), f(x + h), f(x + two * h));
        let w = T::one() / (T::lit(12.0) * h);
        let c8 = T::lit(8.0);
        [0, 1].map(|i| (m2[i] - p2[i] + (p1[i] - m1[i]) * c8) * w)
    }

    fn d2(&self, f: &dyn Fn(T) -> Spinor<T>, x: T) -> Spinor<T> {
        let h = self.h;
        let two = T::lit(2.0);
        let (m2, m1, z, p1, p2) = (f(x - two * h), f(x - h), f(x), f(x + h), f(x + two * h));
        let w = T::one() / (T::lit(12.0) * h * h);
        [0, 1].map(|i| (-(m2[i] + p2[i]) + (m1[i] + p1[i]) * T::lit(16.0) - z[i] * T::lit(30.0)) * w)
    }
}

/// `ℓ²` applied by finite differences.
pub fn ell_squared<T: Real>(f: &dyn Fn(T, T) -> Spinor<T>, theta: T, phi: T) -> Spinor<T> {
    let fd = AngularFd { h: T::lit(1e-3) };
    let ft = |t: T| f(t, phi);
    let fp = |p: T| f(theta, p);
    let dt = fd.d1(&ft, theta);
    let dtt = fd.d2(&ft, theta);
    let dpp = fd.d2(&fp, phi);
    let cot = theta.cos() / theta.sin();
    let s2 = theta.sin() * theta.sin();
    [0, 1].map(|i| -(dtt[i] + dt[i] * cot + dpp[i] / s2))
}

/// `ℓ·S` with `S = σ/2`, via `ℓ_z = −i∂_φ`, `ℓ± = e^{±iφ}(±∂_θ + i cot θ ∂_φ)`.
pub fn l_dot_s<T: Real>(f: &dyn Fn(T, T) -> Spinor<T>, theta: T, phi: T) -> Spinor<T> {
    let fd = AngularFd { h: T::lit(1e-3) };
    let ft = |t: T| f(t, phi);
    let fp = |p: T| f(theta, p);
    let dt = fd.d1(&ft, theta);
    let dp = fd.d1(&fp, phi);
    let i = Complex::new(T::zero(), T::one());
    let cot = theta.cos() / theta.sin();
    let e = Complex::new(phi.cos(), phi.sin());
    let lz = [0, 1].map(|k| -i * dp[k]);
    let lplus_u = e * (dt[0] + i * dp[0] * cot);
    let lminus_d = e.conj() * (-dt[1] + i * dp[1] * cot);
    let half = T::lit(0.5);
    [(lz[0] + lminus_d) * half, (-lz[1] + lplus_u) * half]
}

/// `J_z = −i∂_φ + σ_z/2` applied by finite differences.
pub fn j_z<T: Real>(f: &dyn Fn(T, T) -> Spinor<T>, theta: T, phi: T) -> Spinor<T> {
    let fd = AngularFd { h: T::lit(1e-3) };
    let fp = |p: T| f(theta, p);
    let dp = fd.d1(&fp, phi);
    let v = f(theta, phi);
    let i = Complex::new(T::zero(), T::one());
    let half = T::lit(0.5);
    [-i * dp[0] + v[0] * half, -i * dp[1] - v[1] * half]
}

/// Residuals of the `ℓ²` and `J_z` eigen-equations over sampled directions.
pub fn harmonic_operator_residuals<T: Real>(h: &CoupledHarmonic, n_dirs: usize) -> (T, T) {
    let f = |t: T, p: T| h.value(t, p);
    let l2 = T::from_int((h.l * (h.l + 1)) as i64);
    let jz = T::from_int(h.m as i64) + T::lit(0.5);
    let mut r_l2 = T::zero();
    let mut r_jz = T::zero();
    for (t, p) in sphere_samples::<T>(n_dirs) {
        let v = f(t, p);
        let a = ell_squared(&f, t, p);
        let b = j_z(&f, t, p);
        r_l2 = r_l2.max(sup_diff(a, [v[0] * l2, v[1] * l2]));
        r_jz = r_jz.max(sup_diff(b, [v[0] * jz, v[1] * jz]));
    }
    (r_l2, r_jz)
}

/// Closed-form `ℓ·S/ℏ²`: `l/2` for `j = l + ½`, `−(l+1)/2` for `j = l − ½`.
pub fn ls_eigen<T: Real>(l: i32, case: Variant) -> Result<T> {
    if l < 0 {
        return Err(Error::QuantumNumbers(format!("l = {l}")));
    }
    match case {
        Variant::A => Ok(T::from_int(l as i64) * T::lit(0.5)),
        Variant::B if l == 0 => Err(Error::QuantumNumbers("j = l - 1/2 needs l >= 1".into())),
        Variant::B => Ok(-T::from_int(l as i64 + 1) * T::lit(0.5)),
    }
}

/// Sup-norm of `ℓ·S Φ − W Φ` over every admissible `m` and sampled direction.
pub fn ls_residual<T: Real>(l: i32, case: Variant, n_dirs: usize) -> Result<T> {
    let w = ls_eigen::<T>(l, case)?;
    let mut worst = T::zero();
    for m in CoupledHarmonic::m_range(l, case) {
        let h = coupled_harmonic(l, m, case)?;
        let f = |t: T, p: T| h.value(t, p);
        for (t, p) in sphere_samples::<T>(n_dirs) {
            let v = f(t, p);
            worst = worst.max(sup_diff(l_dot_s(&f, t, p), [v[0] * w, v[1] * w]));
        }
    }
    Ok(worst)
}

/// Eigen-data of `Λ̂ = ℓ² + 2Mqκ₁(r̂·S)/ℏ` restricted to one `(l, m)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaEigen<T> {
    pub l: i32,
    pub c1: T,
    pub lambda_minus: T,
    pub lambda_plus: T,
    pub chi: T,
}

impl<T: Real> LambdaEigen<T> {
    pub fn a(&self) -> T {
        self.chi.cos()
    }

    pub fn b(&self) -> T {
        self.chi.sin()
    }

    /// `λ = (−1 + √(1 + 4Λ₋))/2`.
    pub fn lambda(&self) -> Result<T> {
        effective_l(self.lambda_minus)
    }

    /// Residuals of the two coefficient equations.
    pub fn coefficient_residual(&self) -> T {
        let l = T::from_int(self.l as i64);
        let (a, b) = (self.a(), self.b());
        let lam = self.lambda_minus;
        let r1 = (a + b) * (lam - l * (l + T::one())) - (a - b) * self.c1;
        let r2 = (a - b) * (lam - (l + T::one()) * (l + T::lit(2.0))) - (a + b) * self.c1;
        r1.abs().max(r2.abs())
    }
}

/// `λ` from `Λ = λ(λ+1)` on the `+` branch.
pub fn effective_l<T: Real>(big_lambda: T) -> Result<T> {
    let disc = T::one() + T::lit(4.0) * big_lambda;
    if disc < T::zero() {
        return Err(Error::Supercritical(format!("1 + 4Λ = {disc} < 0")));
    }
    Ok((disc.sqrt() - T::one()) * T::lit(0.5))
}

/// `Λ± = (l+1)² ± √((l+1)² + c1²)` with mixing angle `χ`.
pub fn lambda_hat_eigen<T: Real>(l: i32, c1: T) -> Result<LambdaEigen<T>> {
    if l < 0 {
        return Err(Error::QuantumNumbers(format!("l = {l}")));
    }
    let lp = T::from_int(l as i64 + 1);
    let root = (lp * lp + c1 * c1).sqrt();
    let lambda_minus = lp * lp - root;
    let lambda_plus = lp * lp + root;
    let chi = T::FRAC_PI_4() - (c1 / (lambda_minus - lp * (lp + T::one()))).atan();
    Ok(LambdaEigen { l, c1, lambda_minus, lambda_plus, chi })
}

/// `1/√(1 + c1²/(l+1)²)`
pub fn sin_two_chi<T: Real>(l: i32, c1: T) -> T {
    let lp = T::from_int(l as i64 + 1);
    T::one() / (T::one() + c1 * c1 / (lp * lp)).sqrt()
}

/// Eigenvalues of `[[l(l+1), c1], [c1, (l+1)(l+2)]]` by dense diagonalization.
pub fn lambda_hat_matrix_eigenvalues(l: i32, c1: f64) -> (f64, f64) {
    let lf = l as f64;
    let m = Matrix2::new(lf * (lf + 1.0), c1, c1, (lf + 1.0) * (lf + 2.0));
    let ev = SymmetricEigen::new(m).eigenvalues;
    (ev[0].min(ev[1]), ev[0].max(ev[1]))
}

/// Radius-dependent `Λ̂` data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaR<T> {
    pub lambda: T,
    pub a: T,
    pub b: T,
    /// `(9/4)(l+1)² c2² r⁴ / ((l+1)² + c(r)²)²`
    pub drift: T,
}

/// `Λ(r)` with the coupling `c(r) = c1 + c2 r³`.
pub fn lambda_hat_r<T: Real>(l: i32, c1: T, c2: T, r: T) -> Result<LambdaR<T>> {
    if !(r > T::zero()) {
        return Err(Error::Origin);
    }
    let c = c1 + c2 * r * r * r;
    let e = lambda_hat_eigen(l, c)?;
    let lp = T::from_int(l as i64 + 1);
    let den = lp * lp + c * c;
    let drift = T::lit(2.25) * lp * lp * c2 * c2 * r.powi(4) / (den * den);
    Ok(LambdaR { lambda: e.lambda_minus, a: e.a(), b: e.b(), drift })
}

/// `η = r̂·(α₁×σ₂)` as an 8×8 matrix; index = block·4 + spin₁·2 + spin₂.
pub fn eta_matrix<T: Real>(dir: [T; 3]) -> CMat<T> {
    let p = pauli::<T>();
    let i2 = identity::<T>(2);
    let alpha: Vec<CMat<T>> = p.iter().map(|s| kron(&kron(&p[0], s), &i2)).collect();
    let sig2: Vec<CMat<T>> = p.iter().map(|s| kron(&identity(4), s)).collect();
    let mut out = DMatrix::from_element(8, 8, czero::<T>());
    for (i, &di) in dir.iter().enumerate() {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let term = &alpha[j] * &sig2[k] - &alpha[k] * &sig2[j];
        out += term.map(|z| z * di);
    }
    out
}

/// Spectrum and spectral projectors of `η` at one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Projectors onto the eigenvalues `−2, 0, 2`, built from eigenvectors.
    pub projectors: [CMat<f64>; 3],
}

pub const ETA_EIGENVALUES: [f64; 3] = [-2.0, 0.0, 2.0];

pub fn eta_eigen(dir: [f64; 3]) -> Result<EtaSpectrum> {
    let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
    if !(n > 0.0) {
        return Err(Error::Domain("direction must be nonzero".into()));
    }
    let d = [dir[0] / n, dir[1] / n, dir[2] / n];
    let eig = SymmetricEigen::new(eta_matrix(d));
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let mut projectors = [DMatrix::zeros(8, 8), DMatrix::zeros(8, 8), DMatrix::zeros(8, 8)];
    for (k, ev) in eig.eigenvalues.iter().enumerate() {
        let slot = ETA_EIGENVALUES
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - ev).abs().total_cmp(&(b.1 - ev).abs()))
            .map(|(i, _)| i)
            .unwrap();
        let v = eig.eigenvectors.column(k);
        projectors[slot] += v * v.adjoint();
    }
    eigenvalues.sort_by(f64::total_cmp);
    Ok(EtaSpectrum { eigenvalues, projectors })
}

/// Projectors from the minimal polynomial `η(η²−4) = 0`, in the order `−2, 0, 2`.
pub fn eta_polynomial_projectors<T: Real>(dir: [T; 3]) -> [CMat<T>; 3] {
    let e = eta_matrix(dir);
    let e2 = &e * &e;
    let id = identity::<T>(8);
    let eighth = T::lit(0.125);
    let two = T::lit(2.0);
    let pm = (&e2 - e.map(|z| z * two)).map(|z| z * eighth);
    let pp = (&e2 + e.map(|z| z * two)).map(|z| z * eighth);
    let p0 = (id.map(|z| z * T::lit(4.0)) - e2).map(|z| z * T::lit(0.25));
    [pm, p0, pp]
}

/// Largest entry of `[J_z, η]` with `J_z = −i∂_φ + S₁z + S₂z`.
pub fn eta_jz_commutator<T: Real>(theta: T, phi: T) -> T {
    let p = pauli::<T>();
    let half = T::lit(0.5);
    let s1z = kron(&kron(&identity(2), &p[2]), &identity(2)).map(|z| z * half);
    let s2z = kron(&identity(4), &p[2]).map(|z| z * half);
    let sz = s1z + s2z;
    let h = T::lit(1e-4);
    let at = |ph: T| eta_matrix(from_spherical(T::one(), theta, ph));
    let two = T::lit(2.0);
    let dphi = (at(phi - two * h) - at(phi + two * h) + (at(phi + h) - at(phi - h)).map(|z| z * T::lit(8.0)))
        .map(|z| z / (T::lit(12.0) * h));
    let e = at(phi);
    let c = dphi.map(|z| z * Complex::new(T::zero(), -T::one())) + (&sz * &e - &e * &sz);
    max_abs(&c)
}

/// The eight explicit branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EtaBranch {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
    Phi1p,
    Phi2p,
    Phi3p,
    Phi4p,
}

impl EtaBranch {
    pub const ALL: [EtaBranch; 8] = [
        Self::Phi1,
        Self::Phi2,
        Self::Phi3,
        Self::Phi4,
        Self::Phi1p,
        Self::Phi2p,
        Self::Phi3p,
        Self::Phi4p,
    ];

    pub fn eigenvalue(self) -> f64 {
        match self {
            Self::Phi1 | Self::Phi2 => 2.0,
            Self::Phi1p | Self::Phi2p => -2.0,
            _ => 0.0,
        }
    }
}

/// One piece `coef · Φ^{variant}_{l,m}` placed in `(block, spin₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaTerm<T> {
    pub block: usize,
    pub spin2: usize,
    pub coef: Complex<T>,
    pub variant: Variant,
    pub l: i32,
    pub m: i32,
}

/// Explicit eight-component eigenfunction `Σ coef · Φ ⊗ spin₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaEigenfunction<T> {
    pub branch: EtaBranch,
    pub l: i32,
    pub m: i32,
    pub terms: Vec<EtaTerm<T>>,
}

fn ratio<T: Real>(num: i64, den: i64) -> T {
    if num <= 0 {
        T::zero()
    } else {
        (T::from_int(num) / T::from_int(den)).sqrt()
    }
}

impl<T: Real> EtaEigenfunction<T> {
    pub fn value(&self, theta: T, phi: T) -> [Complex<T>; 8] {
        let mut out = [czero::<T>(); 8];
        for t in &self.terms {
            let v = coupled_value(t.variant, t.l, t.m, theta, phi);
            for (s1, vs) in v.iter().enumerate() {
                out[t.block * 4 + s1 * 2 + t.spin2] += t.coef * *vs;
            }
        }
        out
    }

    /// Squared norm over the sphere from the orthonormality of the pieces.
    pub fn norm_sqr_from_coefficients(&self) -> T {
        self.terms
            .iter()
            .filter(|t| CoupledHarmonic::m_range(t.l, t.variant).contains(&t.m))
            .map(|t| t.coef.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
    }
}

/// Spin-down partner of the last `Φᴮ` term of `Φ′₄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Phi4pIndex {
    /// `m + 1`, matching the other spin-down pieces.
    #[default]
    Shifted,
    /// `m`, as printed.
    Printed,
}

pub fn eta_eigenfunction<T: Real>(l: i32, m: i32, branch: EtaBranch) -> Result<EtaEigenfunction<T>> {
    eta_eigenfunction_with(l, m, branch, Phi4pIndex::Shifted)
}

/// Builds a branch for base `(l, m)` with `−l−1 ≤ m ≤ l`.
pub fn eta_eigenfunction_with<T: Real>(
    l: i32,
    m: i32,
    branch: EtaBranch,
    phi4p: Phi4pIndex,
) -> Result<EtaEigenfunction<T>> {
    if l < 0 || m < -l - 1 || m > l {
        return Err(Error::QuantumNumbers(format!("eta eigenfunction needs -l-1 <= m <= l, got l={l}, m={m}")));
    }
    let (li, mi) = (l as i64, m as i64);
    let one = T::one();
    let r1: T = ratio(li - mi + 1, li + mi + 2);
    let r2: T = ratio(li - mi, li + mi + 2);
    let r3: T = ratio(li + mi + 3, li + mi + 2);
    let s1: T = ratio(li + mi + 2, li - mi + 1);
    let s2: T = ratio(li + mi + 3, li - mi + 1);
    let s23: T = ratio(li - mi, li - mi + 1);
    let t = T::from_int(li + 1) / T::from_int(li + 2);
    let u = T::from_int(li + 2) / T::from_int(li + 1);
    let re = |x: T| Complex::new(x, T::zero());
    let im = |x: T| Complex::new(T::zero(), x);
    use Variant::{A, B};
    let term = |block, spin2, coef, variant, l, m| EtaTerm { block, spin2, coef, variant, l, m };
    let (l1, l2, m1) = (l + 1, l + 2, m + 1);

    let phi1 = |sg: T| {
        vec![
            term(0, 0, re(one), A, l, m),
            term(0, 0, re(r1), B, l2, m),
            term(1, 0, im(-sg), B, l1, m),
            term(1, 0, im(-sg * r1), A, l1, m),
            term(0, 1, re(r2), A, l, m1),
            term(0, 1, re(-r3), B, l2, m1),
            term(1, 1, im(-sg * r2), B, l1, m1),
            term(1, 1, im(sg * r3), A, l1, m1),
        ]
    };
    let phi2 = |sg: T| {
        vec![
            term(0, 0, re(one), A, l1, m),
            term(0, 0, re(s1), B, l1, m),
            term(1, 0, im(sg), B, l2, m),
            term(1, 0, im(sg * s1), A, l, m),
            term(0, 1, re(-s2), A, l1, m1),
            term(0, 1, re(s23), B, l1, m1),
            term(1, 1, im(-sg * s2), B, l2, m1),
            term(1, 1, im(sg * s23), A, l, m1),
        ]
    };
    let phi4p_m = match phi4p {
        Phi4pIndex::Shifted => m1,
        Phi4pIndex::Printed => m,
    };
    let terms = match branch {
        EtaBranch::Phi1 => phi1(one),
        EtaBranch::Phi1p => phi1(-one),
        EtaBranch::Phi2 => phi2(one),
        EtaBranch::Phi2p => phi2(-one),
        EtaBranch::Phi3 => vec![
            term(0, 0, re(one), A, l, m),
            term(0, 0, re(-t * r1), B, l2, m),
            term(0, 1, re(r2), A, l, m1),
            term(0, 1, re(t * r3), B, l2, m1),
        ],
        EtaBranch::Phi3p => vec![
            term(1, 0, im(-one), B, l1, m),
            term(1, 0, im(t * r1), A, l1, m),
            term(1, 1, im(-r2), B, l1, m1),
            term(1, 1, im(-t * r3), A, l1, m1),
        ],
        EtaBranch::Phi4 => vec![
            term(0, 0, re(one), A, l1, m),
            term(0, 0, re(-u * s1), B, l1, m),
            term(0, 1, re(-s2), A, l1, m1),
            term(0, 1, re(-u * s23), B, l1, m1),
        ],
        EtaBranch::Phi4p => vec![
            term(1, 0, im(one), B, l2, m),
            term(1, 0, im(-u * s1), A, l, m),
            term(1, 1, im(-s2), B, l2, phi4p_m),
            term(1, 1, im(-u * s23), A, l, m1),
        ],
    };
    Ok(EtaEigenfunction { branch, l, m, terms })
}

/// Outcome of applying `η` pointwise to an explicit branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaCheck<T> {
    pub eigenvalue: T,
    /// `sup |ηΨ − λΨ|` over the sampled directions.
    pub residual: T,
    /// `sup |Ψ|`, to tell an empty branch from a passing one.
    pub sup_norm: T,
}

pub fn eta_check<T: Real>(f: &EtaEigenfunction<T>, n_dirs: usize) -> EtaCheck<T> {
    let lam = T::lit(f.branch.eigenvalue());
    let mut residual = T::zero();
    let mut sup_norm = T::zero();
    for d in directions::<T>(n_dirs) {
        let (_, t, p) = to_spherical(d);
        let v = f.value(t, p);
        let e = eta_matrix(d);
        for i in 0..8 {
            let mut acc = czero::<T>();
            for j in 0..8 {
                acc += e[(i, j)] * v[j];
            }
            residual = residual.max((acc - v[i] * lam).norm());
            sup_norm = sup_norm.max(v[i].norm());
        }
    }
    EtaCheck { eigenvalue: lam, residual, sup_norm }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_sphere;

    #[test]
    fn l0_variant_a_m0_is_y00_up() {
        let v = coupled_value(Variant::A, 0, 0, 0.7f64, 0.4);
        assert!((v[0] - ylm(0, 0, 0.7, 0.4)).norm() < 1e-15);
        assert_eq!(v[1].norm(), 0.0);
    }

    #[test]
    fn l1_m0_variant_a() {
        let v = coupled_value(Variant::A, 1, 0, 1.0f64, 1.0);
        let s3 = 3f64.sqrt();
        assert!((v[0] - ylm(1, 0, 1.0, 1.0) * (2f64.sqrt() / s3)).norm() < 1e-15);
        assert!((v[1] - ylm(1, 1, 1.0, 1.0) / s3).norm() < 1e-15);
    }

    #[test]
    fn harmonic_ranges() {
        assert!(coupled_harmonic(0, 0, Variant::B).is_err());
        assert!(coupled_harmonic(1, 1, Variant::B).is_err());
        assert!(coupled_harmonic(1, -2, Variant::A).is_ok());
        assert!(coupled_harmonic(1, 2, Variant::A).is_err());
    }

    #[test]
    fn harmonics_normalized() {
        for l in 0..=3 {
            for variant in [Variant::A, Variant::B] {
                if variant == Variant::B && l == 0 {
                    continue;
                }
                for m in CoupledHarmonic::m_range(l, variant) {
                    let n = integrate_sphere(
                        |t: f64, p: f64| {
                            let v = coupled_value(variant, l, m, t, p);
                            v[0].norm_sqr() + v[1].norm_sqr()
                        },
                        12,
                        12,
                    );
                    assert!((n - 1.0).abs() < 1e-10, "{variant:?} l={l} m={m}: {n}");
                }
            }
        }
    }

    #[test]
    fn ell_squared_and_jz() {
        for l in 0..=3 {
            for m in CoupledHarmonic::m_range(l, Variant::A) {
                let h = coupled_harmonic(l, m, Variant::A).unwrap();
                let (a, b) = harmonic_operator_residuals::<f64>(&h, 12);
                assert!(a < 1e-6 && b < 1e-8, "l={l} m={m}: {a} {b}");
            }
        }
    }

    #[test]
    fn intertwining() {
        for l in 0..=5 {
            for m in (-l - 1)..=l {
                assert!(sigma_r_intertwine::<f64>(l, m, 50).unwrap() < 1e-10, "l={l} m={m}");
            }
        }
        assert!(s_r_eigen_residual::<f64>(1, 0, 20).unwrap() < 1e-12);
    }

    #[test]
    fn sigma_r_squares_to_one() {
        let s = sigma_r(0.9f64, -2.0);
        let v = [Complex::new(0.3, 0.1), Complex::new(-1.0, 0.5)];
        assert!(sup_diff(apply2(&s, apply2(&s, v)), v) < 1e-15);
    }

    #[test]
    fn ls_values() {
        assert_eq!(ls_eigen::<f64>(1, Variant::A).unwrap(), 0.5);
        assert_eq!(ls_eigen::<f64>(0, Variant::A).unwrap(), 0.0);
        assert_eq!(ls_eigen::<f64>(2, Variant::B).unwrap(), -1.5);
        assert!(ls_eigen::<f64>(0, Variant::B).is_err());
        assert!(ls_residual::<f64>(2, Variant::B, 10).unwrap() < 1e-8);
        assert!(ls_residual::<f64>(1, Variant::A, 10).unwrap() < 1e-8);
    }

    #[test]
    fn lambda_examples() {
        let e = lambda_hat_eigen(1, 0.0f64).unwrap();
        assert_eq!((e.lambda_minus, e.lambda_plus), (2.0, 6.0));
        let e = lambda_hat_eigen(1, 2.0f64).unwrap();
        assert!((e.lambda_minus - (4.0 - 8f64.sqrt())).abs() < 1e-14);
        let (lo, hi) = lambda_hat_matrix_eigenvalues(1, 2.0);
        assert!((e.lambda_minus - lo).abs() < 1e-12 && (e.lambda_plus - hi).abs() < 1e-12);
        let e = lambda_hat_eigen(0, 1.0f64).unwrap();
        assert!(((2.0 * e.chi).sin() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(e.coefficient_residual() < 1e-14);
    }

    #[test]
    fn supercritical_lambda() {
        let e = lambda_hat_eigen(0, 2.0f64).unwrap();
        assert!(matches!(e.lambda(), Err(Error::Supercritical(_))));
    }

    #[test]
    fn lambda_r_examples() {
        let r = lambda_hat_r(0, 0.0f64, 1.0, 1.0).unwrap();
        assert!((r.lambda - (1.0 - 2f64.sqrt())).abs() < 1e-15);
        let base = lambda_hat_eigen(2, 0.7f64).unwrap();
        let rr = lambda_hat_r(2, 0.7f64, 0.0, 3.0).unwrap();
        assert_eq!(rr.lambda, base.lambda_minus);
        assert_eq!(rr.drift, 0.0);
    }

    #[test]
    fn eta_z_square() {
        let e = eta_matrix([0.0f64, 0.0, 1.0]);
        let p = pauli::<f64>();
        let zz = kron(&p[2], &p[2]);
        let want = kron(&identity(2), &(identity(4) - zz)).map(|z| z * 2.0);
        assert!(max_abs(&(&e * &e - want)) < 1e-15);
    }

    #[test]
    fn eta_spectrum_and_projectors() {
        for d in directions::<f64>(5) {
            let s = eta_eigen(d).unwrap();
            let want = [-2.0, -2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 2.0];
            for (a, b) in s.eigenvalues.iter().zip(want) {
                assert!((a - b).abs() < 1e-12);
            }
            let pp = eta_polynomial_projectors(d);
            for (proj, poly) in s.projectors.iter().zip(&pp) {
                assert!(max_abs(&(proj - poly)) < 1e-12);
            }
            let tr: Complex<f64> = eta_matrix(d).trace();
            assert!(tr.norm() < 1e-15);
        }
        assert!(eta_eigen([0.0; 3]).is_err());
    }

    #[test]
    fn eta_commutes_with_jz() {
        assert!(eta_jz_commutator(0.8f64, 0.3) < 1e-9);
        assert!(eta_jz_commutator(2.1f64, -1.3) < 1e-9);
    }

    #[test]
    fn eta_branches_l0_to_2() {
        for l in 0..=2 {
            for m in (-l - 1)..=l {
                for b in EtaBranch::ALL {
                    let f = eta_eigenfunction::<f64>(l, m, b).unwrap();
                    let c = eta_check(&f, 30);
                    assert!(c.residual < 1e-8, "{b:?} l={l} m={m}: {c:?}");
                }
            }
        }
    }

    #[test]
    fn phi1_norm_by_quadrature() {
        for l in 0..=2 {
            for m in (-l - 1)..=l {
                let f = eta_eigenfunction::<f64>(l, m, EtaBranch::Phi1).unwrap();
                let n = integrate_sphere(
                    |t: f64, p: f64| f.value(t, p).iter().map(|z| z.norm_sqr()).sum::<f64>(),
                    16,
                    16,
                );
                let want = 4.0 * (2 * l + 3) as f64 / (l + m + 2) as f64;
                assert!((n - want).abs() < 1e-10, "l={l} m={m}: {n} vs {want}");
                assert!((f.norm_sqr_from_coefficients() - want).abs() < 1e-12);
            }
        }
    }
}
