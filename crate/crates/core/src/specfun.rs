//! Kummer's confluent hypergeometric series, associated Legendre functions and
//! spherical harmonics with their recursion identities.

use num_complex::Complex;

use crate::{Error, Real, Result};

/// Arguments of `1F1(a; c; x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerParams<T> {
    pub a: T,
    pub c: T,
    pub x: T,
}

fn non_positive_integer<T: Real>(v: T) -> Option<u64> {
    let r = v.round();
    if v <= T::zero() && (v - r).abs() < T::lit(1e-12) {
        Some((-r).to_u64().unwrap_or(0))
    } else {
        None
    }
}

impl<T: Real> KummerParams<T> {
    pub fn new(a: T, c: T, x: T) -> Self {
        Self { a, c, x }
    }

    /// `Some(N)` when `a = -N` and the series is a polynomial of degree `N`.
    pub fn truncation(&self) -> Option<u64> {
        non_positive_integer(self.a)
    }
}

pub const KUMMER_MAX_ABS_X: f64 = 700.0;

/// Coefficients `(a)_k / ((c)_k k!)` of the terminating series for `a = -n`.
pub fn kummer_polynomial<T: Real>(n: u64, c: T) -> Result<Vec<T>> {
    if non_positive_integer(c).is_some() {
        return Err(Error::KummerPole(c.to_f64_lossy()));
    }
    let a = -T::from_u64(n).unwrap();
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut coef = T::one();
    out.push(coef);
    for k in 0..n {
        let kt = T::from_u64(k).unwrap();
        coef = coef * (a + kt) / ((c + kt) * (kt + T::one()));
        out.push(coef);
    }
    Ok(out)
}

/// `1F1(a; c; x) = Σ (a)_k / ((c)_k k!) x^k`.
pub fn kummer_1f1<T: Real>(p: KummerParams<T>) -> Result<T> {
    let KummerParams { a, c, x } = p;
    if non_positive_integer(c).is_some() {
        return Err(Error::KummerPole(c.to_f64_lossy()));
    }
    if !(x.abs() <= T::lit(KUMMER_MAX_ABS_X)) {
        return Err(Error::KummerOverflow(x.to_f64_lossy()));
    }
    if let Some(n) = p.truncation() {
        let coefs = kummer_polynomial(n, c)?;
        return Ok(coefs.iter().rev().fold(T::zero(), |acc, &q| acc * x + q));
    }
    let tol = T::lit(1e-16).max(T::epsilon() * T::lit(0.5));
    let mut sum = T::one();
    let mut term = T::one();
    let mut quiet = 0;
    for k in 0..100_000u32 {
        let kt = T::from_u32(k).unwrap();
        term = term * (a + kt) / ((c + kt) * (kt + T::one())) * x;
        sum += term;
        if term.abs() < tol * sum.abs() {
            quiet += 1;
            if quiet == 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(Error::KummerOverflow(x.to_f64_lossy()))
}

/// Associated Legendre `P_l^m(x)` for `m ≥ 0`, including the `(-1)^m` phase.
pub fn assoc_legendre<T: Real>(l: u32, m: u32, x: T) -> T {
    if m > l {
        return T::zero();
    }
    let s = ((T::one() - x) * (T::one() + x)).max(T::zero()).sqrt();
    let mut pmm = T::one();
    let mut fact = T::one();
    for _ in 0..m {
        pmm = -pmm * fact * s;
        fact += T::lit(2.0);
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * T::from_u32(2 * m + 1).unwrap() * pmm;
    let mut pm0 = pmm;
    for ll in (m + 2)..=l {
        let lt = T::from_u32(ll).unwrap();
        let mt = T::from_u32(m).unwrap();
        let p = (x * (T::lit(2.0) * lt - T::one()) * pm1 - (lt + mt - T::one()) * pm0) / (lt - mt);
        pm0 = pm1;
        pm1 = p;
    }
    pm1
}

/// `Y_lm(θ, φ)`; negative `m` uses `Y_{l,-m} = (-1)^m Y_lm^*`.
pub fn spherical_harmonic<T: Real>(l: i32, m: i32, theta: T, phi: T) -> Result<Complex<T>> {
    if l < 0 || m.abs() > l {
        return Err(Error::QuantumNumbers(format!("|m| <= l required, got l={l}, m={m}")));
    }
    let am = m.unsigned_abs();
    let lu = l as u32;
    let mut ratio = T::one();
    for k in (lu - am + 1)..=(lu + am) {
        ratio /= T::from_u32(k).unwrap();
    }
    let norm = (T::from_u32(2 * lu + 1).unwrap() / (T::lit(4.0) * T::PI()) * ratio).sqrt();
    let p = assoc_legendre(lu, am, theta.cos());
    let mp = T::from_u32(am).unwrap() * phi;
    let y = Complex::new(mp.cos(), mp.sin()) * (norm * p);
    if m >= 0 {
        Ok(y)
    } else if am.is_multiple_of(2) {
        Ok(y.conj())
    } else {
        Ok(-y.conj())
    }
}

/// `Y_lm`, or zero outside `0 ≤ |m| ≤ l`.
pub fn ylm<T: Real>(l: i32, m: i32, theta: T, phi: T) -> Complex<T> {
    spherical_harmonic(l, m, theta, phi).unwrap_or_else(|_| Complex::new(T::zero(), T::zero()))
}

fn sq<T: Real>(num: i64, den: i64) -> T {
    if num <= 0 || den <= 0 {
        T::zero()
    } else {
        (T::from_int(num) / T::from_int(den)).sqrt()
    }
}

/// `a_{l,m}` of the `cos θ` recursion.
pub fn rec_a<T: Real>(l: i32, m: i32) -> T {
    let (l, m) = (l as i64, m as i64);
    sq((l + m + 1) * (l - m + 1), (2 * l + 1) * (2 * l + 3))
}

/// `b_{l,m}` of the `sin θ e^{±iφ}` recursions.
pub fn rec_b<T: Real>(l: i32, m: i32) -> T {
    let (l, m) = (l as i64, m as i64);
    sq((l + m + 1) * (l + m + 2), (2 * l + 1) * (2 * l + 3))
}

/// Residuals of the harmonic recursions and the three gradient formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionResiduals<T> {
    pub cos: T,
    pub sin_plus: T,
    pub sin_minus: T,
    pub grad_minus: T,
    pub grad_plus: T,
    pub grad_z: T,
}

impl<T: Real> RecursionResiduals<T> {
    pub fn max_recursion(&self) -> T {
        self.cos.max(self.sin_plus).max(self.sin_minus)
    }

    pub fn max_gradient(&self) -> T {
        self.grad_minus.max(self.grad_plus).max(self.grad_z)
    }
}

/// Right-hand sides of the gradient formulas for `F(r) Y_lm` with
/// `F = r^2`: `(∂x - i∂y, ∂x + i∂y, ∂z)`.
pub fn gradient_formulas<T: Real>(l: i32, m: i32, pos: [T; 3]) -> [Complex<T>; 3] {
    let (r, th, ph) = crate::sampling::to_spherical(pos);
    let f = r * r;
    let fp = T::lit(2.0) * r;
    let lt = T::from_int(l as i64);
    let down = fp + (lt + T::one()) * f / r;
    let up = fp - lt * f / r;
    let (li, mi) = (l as i64, m as i64);
    let lo = (2 * li + 1) * (2 * li - 1);
    let hi = (2 * li + 1) * (2 * li + 3);
    let y = |ll: i32, mm: i32| ylm(ll, mm, th, ph);
    let minus = y(l - 1, m - 1) * (-sq::<T>((li + mi) * (li + mi - 1), lo) * down)
        + y(l + 1, m - 1) * (sq::<T>((li - mi + 1) * (li - mi + 2), hi) * up);
    let plus = y(l - 1, m + 1) * (sq::<T>((li - mi) * (li - mi - 1), lo) * down)
        - y(l + 1, m + 1) * (sq::<T>((li + mi + 2) * (li + mi + 1), hi) * up);
    let z = y(l - 1, m) * (sq::<T>((li + mi) * (li - mi), lo) * down)
        + y(l + 1, m) * (sq::<T>((li + mi + 1) * (li - mi + 1), hi) * up);
    [minus, plus, z]
}

/// Fourth-order central-difference gradient of a complex scalar field.
pub fn fd_gradient<T: Real>(f: impl Fn([T; 3]) -> Complex<T>, pos: [T; 3], h: T) -> [Complex<T>; 3] {
    let mut g = [Complex::new(T::zero(), T::zero()); 3];
    let c8 = T::lit(8.0);
    let d = T::lit(12.0) * h;
    for (i, gi) in g.iter_mut().enumerate() {
        let at = |s: T| {
            let mut p = pos;
            p[i] += s * h;
            f(p)
        };
        let two = T::lit(2.0);
        *gi = (at(-two) - at(two) + (at(T::one()) - at(-T::one())) * c8) / d;
    }
    g
}

/// Evaluates both sides of every recursion at `(θ, φ)` and of every gradient
/// formula at the point of radius 1 in that direction.
pub fn verify_recursions<T: Real>(l: i32, m: i32, theta: T, phi: T) -> Result<RecursionResiduals<T>> {
    let pos = crate::sampling::from_spherical(T::one(), theta, phi);
    verify_recursions_at(l, m, pos)
}

pub fn verify_recursions_at<T: Real>(l: i32, m: i32, pos: [T; 3]) -> Result<RecursionResiduals<T>> {
    spherical_harmonic(l, m, T::zero(), T::zero())?;
    let (_, theta, phi) = crate::sampling::to_spherical(pos);
    let y = |ll: i32, mm: i32| ylm(ll, mm, theta, phi);
    let st = theta.sin();
    let eip = Complex::new(phi.cos(), phi.sin());

    let cos_lhs = y(l, m) * theta.cos();
    let cos_rhs = y(l + 1, m) * rec_a::<T>(l, m) + y(l - 1, m) * rec_a::<T>(l - 1, m);

    let sp_lhs = y(l, m) * eip * st;
    let sp_rhs = y(l - 1, m + 1) * rec_b::<T>(l - 1, -(m + 1)) - y(l + 1, m + 1) * rec_b::<T>(l, m);

    let sm_lhs = y(l, m) * eip.conj() * st;
    let sm_rhs = y(l + 1, m - 1) * rec_b::<T>(l, -m) - y(l - 1, m - 1) * rec_b::<T>(l - 1, m - 1);

    let field = |p: [T; 3]| {
        let (r, th, ph) = crate::sampling::to_spherical(p);
        ylm(l, m, th, ph) * (r * r)
    };
    let h = T::lit(1e-3) * crate::sampling::norm3(pos).max(T::one());
    let g = fd_gradient(field, pos, h);
    let i = Complex::new(T::zero(), T::one());
    let fd = [g[0] - g[1] * i, g[0] + g[1] * i, g[2]];
    let an = gradient_formulas(l, m, pos);

    Ok(RecursionResiduals {
        cos: (cos_lhs - cos_rhs).norm(),
        sin_plus: (sp_lhs - sp_rhs).norm(),
        sin_minus: (sm_lhs - sm_rhs).norm(),
        grad_minus: (fd[0] - an[0]).norm(),
        grad_plus: (fd[1] - an[1]).norm(),
        grad_z: (fd[2] - an[2]).norm(),
    })
}
