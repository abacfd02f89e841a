//! Spin representations and order-preserving algebra on operator-valued vectors.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::{Error, Real, Result};

pub type CMat<T> = DMatrix<Complex<T>>;

#[inline]
pub fn cr<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn ci<T: Real>(x: T) -> Complex<T> {
    Complex::new(T::zero(), x)
}

pub fn zeros<T: Real>(n: usize) -> CMat<T> {
    DMatrix::from_element(n, n, Complex::new(T::zero(), T::zero()))
}

pub fn identity<T: Real>(n: usize) -> CMat<T> {
    DMatrix::from_fn(n, n, |i, j| if i == j { cr(T::one()) } else { cr(T::zero()) })
}

pub fn adjoint<T: Real>(m: &CMat<T>) -> CMat<T> {
    DMatrix::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

pub fn scale<T: Real>(m: &CMat<T>, s: T) -> CMat<T> {
    m.map(|z| z * s)
}

pub fn scale_c<T: Real>(m: &CMat<T>, s: Complex<T>) -> CMat<T> {
    m.map(|z| z * s)
}

/// Commutator `xy - yx`.
pub fn comm<T: Real>(x: &CMat<T>, y: &CMat<T>) -> Result<CMat<T>> {
    check_dims(x, y)?;
    Ok(x * y - y * x)
}

pub fn frobenius<T: Real>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

pub fn max_abs<T: Real>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_defect<T: Real>(m: &CMat<T>) -> T {
    max_abs(&(m - adjoint(m)))
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    DMatrix::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

fn check_dims<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(a.nrows(), b.nrows()));
    }
    Ok(())
}

/// Spin matrices for spin `s`, in units carrying one power of `hbar`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinRep<T: Real> {
    pub s: f64,
    pub dim: usize,
    pub hbar: T,
    pub sx: CMat<T>,
    pub sy: CMat<T>,
    pub sz: CMat<T>,
    pub identity: CMat<T>,
}

impl<T: Real> SpinRep<T> {
    /// Ladder-operator construction in the basis `m = s, s-1, ..., -s`.
    pub fn new(s: f64, hbar: T) -> Result<Self> {
        let two_s = 2.0 * s;
        if !(s >= 0.0) || !s.is_finite() || (two_s - two_s.round()).abs() > 1e-12 {
            return Err(Error::InvalidSpin(s));
        }
        let dim = two_s.round() as usize + 1;
        let st = T::lit(s);
        let ms: Vec<T> = (0..dim).map(|i| st - T::from_usize(i).unwrap()).collect();
        let mut splus = zeros::<T>(dim);
        for i in 1..dim {
            // S+ |m_i> = hbar sqrt(s(s+1) - m_i(m_i+1)) |m_{i-1}>
            let m = ms[i];
            let amp = (st * (st + T::one()) - m * (m + T::one())).max(T::zero()).sqrt();
            splus[(i - 1, i)] = cr(amp * hbar);
        }
        let sminus = adjoint(&splus);
        let half = T::lit(0.5);
        let sx = scale(&(&splus + &sminus), half);
        let sy = scale_c(&(&splus - &sminus), Complex::new(T::zero(), -half));
        let sz = DMatrix::from_fn(dim, dim, |i, j| if i == j { cr(ms[i] * hbar) } else { cr(T::zero()) });
        Ok(Self { s, dim, hbar, sx, sy, sz, identity: identity(dim) })
    }

    pub fn vector(&self) -> MatrixVec3<T> {
        MatrixVec3 { x: self.sx.clone(), y: self.sy.clone(), z: self.sz.clone() }
    }

    /// `r·S` for a numeric position.
    pub fn dot_position(&self, r: [T; 3]) -> CMat<T> {
        scale(&self.sx, r[0]) + scale(&self.sy, r[1]) + scale(&self.sz, r[2])
    }

    /// `r×S` for a numeric position.
    pub fn cross_position(&self, r: [T; 3]) -> MatrixVec3<T> {
        MatrixVec3::numeric(r, self.dim).cross(&self.vector()).expect("same dimension")
    }

    /// Largest entrywise deviation from `[Sx,Sy] = i hbar Sz` and cyclic.
    pub fn commutator_defect(&self) -> T {
        let ih = ci(self.hbar);
        let c1 = &self.sx * &self.sy - &self.sy * &self.sx - scale_c(&self.sz, ih);
        let c2 = &self.sy * &self.sz - &self.sz * &self.sy - scale_c(&self.sx, ih);
        let c3 = &self.sz * &self.sx - &self.sx * &self.sz - scale_c(&self.sy, ih);
        max_abs(&c1).max(max_abs(&c2)).max(max_abs(&c3))
    }

    pub fn casimir_defect(&self) -> T {
        let st = T::lit(self.s);
        let target = scale(&self.identity, st * (st + T::one()) * self.hbar * self.hbar);
        let s2 = &self.sx * &self.sx + &self.sy * &self.sy + &self.sz * &self.sz;
        max_abs(&(s2 - target))
    }
}

pub fn spin_matrices<T: Real>(s: f64) -> Result<SpinRep<T>> {
    SpinRep::new(s, T::one())
}

/// Pauli matrices (x, y, z).
pub fn pauli<T: Real>() -> [CMat<T>; 3] {
    let o = T::one();
    let z = T::zero();
    let c = |re: T, im: T| Complex::new(re, im);
    [
        DMatrix::from_row_slice(2, 2, &[c(z, z), c(o, z), c(o, z), c(z, z)]),
        DMatrix::from_row_slice(2, 2, &[c(z, z), c(z, -o), c(z, o), c(z, z)]),
        DMatrix::from_row_slice(2, 2, &[c(o, z), c(z, z), c(z, z), c(-o, z)]),
    ]
}

/// Operator-valued 3-vector. Components need not commute or be Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixVec3<T: Real> {
    pub x: CMat<T>,
    pub y: CMat<T>,
    pub z: CMat<T>,
}

impl<T: Real> MatrixVec3<T> {
    pub fn new(x: CMat<T>, y: CMat<T>, z: CMat<T>) -> Result<Self> {
        check_dims(&x, &y)?;
        check_dims(&x, &z)?;
        Ok(Self { x, y, z })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { x: zeros(dim), y: zeros(dim), z: zeros(dim) }
    }

    /// Numeric vector times the identity.
    pub fn numeric(v: [T; 3], dim: usize) -> Self {
        let id = identity::<T>(dim);
        Self { x: scale(&id, v[0]), y: scale(&id, v[1]), z: scale(&id, v[2]) }
    }

    /// `m v` for an operator `m` times a numeric vector.
    pub fn outer(m: &CMat<T>, v: [T; 3]) -> Self {
        Self { x: scale(m, v[0]), y: scale(m, v[1]), z: scale(m, v[2]) }
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn components(&self) -> [&CMat<T>; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn from_components(c: [CMat<T>; 3]) -> Self {
        let [x, y, z] = c;
        Self { x, y, z }
    }

    fn check(&self, other: &Self) -> Result<()> {
        check_dims(&self.x, &other.x)
    }

    /// `a·b = ax bx + ay by + az bz`, left factor first.
    pub fn dot(&self, b: &Self) -> Result<CMat<T>> {
        self.check(b)?;
        Ok(&self.x * &b.x + &self.y * &b.y + &self.z * &b.z)
    }

    /// `(a×b)_z = ax by - ay bx`, left factor first.
    pub fn cross(&self, b: &Self) -> Result<Self> {
        self.check(b)?;
        Ok(Self {
            x: &self.y * &b.z - &self.z * &b.y,
            y: &self.z * &b.x - &self.x * &b.z,
            z: &self.x * &b.y - &self.y * &b.x,
        })
    }

    /// Numeric vector dotted into the components, `v·a`.
    pub fn dot_numeric(&self, v: [T; 3]) -> CMat<T> {
        scale(&self.x, v[0]) + scale(&self.y, v[1]) + scale(&self.z, v[2])
    }

    pub fn map(&self, f: impl Fn(&CMat<T>) -> CMat<T>) -> Self {
        Self { x: f(&self.x), y: f(&self.y), z: f(&self.z) }
    }

    pub fn zip(&self, o: &Self, f: impl Fn(&CMat<T>, &CMat<T>) -> CMat<T>) -> Result<Self> {
        self.check(o)?;
        Ok(Self { x: f(&self.x, &o.x), y: f(&self.y, &o.y), z: f(&self.z, &o.z) })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|m| scale(m, s))
    }

    pub fn scale_c(&self, s: Complex<T>) -> Self {
        self.map(|m| scale_c(m, s))
    }

    /// Componentwise `m a_i`.
    pub fn left_mul(&self, m: &CMat<T>) -> Self {
        self.map(|a| m * a)
    }

    /// Componentwise `a_i m`.
    pub fn right_mul(&self, m: &CMat<T>) -> Self {
        self.map(|a| a * m)
    }

    /// Componentwise commutator `[m, a_i]`.
    pub fn comm_left(&self, m: &CMat<T>) -> Self {
        self.map(|a| m * a - a * m)
    }

    /// Root of the summed squared Frobenius norms.
    pub fn norm(&self) -> T {
        let f = |m: &CMat<T>| frobenius(m).powi(2);
        (f(&self.x) + f(&self.y) + f(&self.z)).sqrt()
    }

    pub fn max_abs(&self) -> T {
        max_abs(&self.x).max(max_abs(&self.y)).max(max_abs(&self.z))
    }

    pub fn hermiticity_defect(&self) -> T {
        hermiticity_defect(&self.x).max(hermiticity_defect(&self.y)).max(hermiticity_defect(&self.z))
    }
}

/// Free-function spelling of [`MatrixVec3::cross`].
pub fn mv_cross<T: Real>(a: &MatrixVec3<T>, b: &MatrixVec3<T>) -> Result<MatrixVec3<T>> {
    a.cross(b)
}

/// Free-function spelling of [`MatrixVec3::dot`].
pub fn mv_dot<T: Real>(a: &MatrixVec3<T>, b: &MatrixVec3<T>) -> Result<CMat<T>> {
    a.dot(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_half_is_half_pauli() {
        let s = spin_matrices::<f64>(0.5).unwrap();
        let p = pauli::<f64>();
        assert!(max_abs(&(scale(&p[0], 0.5) - &s.sx)) == 0.0);
        assert!(max_abs(&(scale(&p[1], 0.5) - &s.sy)) == 0.0);
        assert!(max_abs(&(scale(&p[2], 0.5) - &s.sz)) == 0.0);
    }

    #[test]
    fn spin_zero_is_trivial() {
        let s = spin_matrices::<f64>(0.0).unwrap();
        assert_eq!(s.dim, 1);
        assert_eq!(max_abs(&s.sx) + max_abs(&s.sy) + max_abs(&s.sz), 0.0);
    }

    #[test]
    fn spin_one_casimir() {
        let s = spin_matrices::<f64>(1.0).unwrap();
        let s2 = &s.sx * &s.sx + &s.sy * &s.sy + &s.sz * &s.sz;
        assert!(max_abs(&(s2 - scale(&s.identity, 2.0))) < 1e-12);
    }

    #[test]
    fn rejects_bad_spin() {
        assert!(spin_matrices::<f64>(-0.5).is_err());
        assert!(spin_matrices::<f64>(0.3).is_err());
        assert!(spin_matrices::<f64>(f64::NAN).is_err());
    }

    #[test]
    fn hbar_scale_enters_commutator() {
        let s = SpinRep::<f64>::new(1.5, 0.7).unwrap();
        assert!(s.commutator_defect() < 1e-12);
        assert!(s.casimir_defect() < 1e-12);
    }

    #[test]
    fn comm_self_vanishes() {
        let s = spin_matrices::<f64>(1.0).unwrap();
        assert_eq!(max_abs(&comm(&s.sx, &s.sx).unwrap()), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let a = MatrixVec3::<f64>::zeros(2);
        let b = MatrixVec3::<f64>::zeros(3);
        assert_eq!(a.cross(&b), Err(Error::DimensionMismatch(2, 3)));
        assert!(a.dot(&b).is_err());
        assert!(comm(&a.x, &b.x).is_err());
    }

    #[test]
    fn r_dot_r_cross_s_vanishes() {
        let s = spin_matrices::<f64>(0.5).unwrap();
        let r = [0.3, -1.2, 2.0];
        let rv = MatrixVec3::numeric(r, 2);
        let rxs = s.cross_position(r);
        assert!(max_abs(&rv.dot(&rxs).unwrap()) < 1e-15);
        assert!(max_abs(&rxs.dot(&rv).unwrap()) < 1e-15);
    }

    #[test]
    fn commuting_cross_is_classical() {
        let a = MatrixVec3::<f64>::numeric([1.0, 2.0, 3.0], 3);
        let b = MatrixVec3::<f64>::numeric([-2.0, 0.5, 4.0], 3);
        let c = a.cross(&b).unwrap();
        let want = [2.0 * 4.0 - 3.0 * 0.5, 3.0 * -2.0 - 1.0 * 4.0, 1.0 * 0.5 - 2.0 * -2.0];
        assert!(max_abs(&(c.x - scale(&identity(3), want[0]))) < 1e-15);
        assert!(max_abs(&(c.y - scale(&identity(3), want[1]))) < 1e-15);
        assert!(max_abs(&(c.z - scale(&identity(3), want[2]))) < 1e-15);
        assert_eq!(a.cross(&a).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn kron_shapes() {
        let p = pauli::<f64>();
        let k = kron(&p[0], &identity(2));
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k[(0, 2)], cr(1.0));
        assert_eq!(k[(0, 1)], cr(0.0));
    }

    #[test]
    fn works_in_f32() {
        let s = spin_matrices::<f32>(1.0).unwrap();
        assert!(s.commutator_defect() < 1e-5);
        assert!(s.casimir_defect() < 1e-5);
    }
}
