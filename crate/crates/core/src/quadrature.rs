//! Gauss-Legendre quadrature on intervals and the unit sphere.

use crate::Real;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite rule: `panels` equal subintervals of `[a, b]`, `order` points each.
pub fn integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, panels: usize, order: usize) -> T {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / T::from_usize(panels).unwrap();
    let half = T::lit(0.5) * h;
    let mut acc = T::zero();
    for p in 0..panels {
        let mid = a + h * (T::from_usize(p).unwrap() + T::lit(0.5));
        for (xi, wi) in x.iter().zip(&w) {
            acc += T::lit(*wi) * f(mid + half * T::lit(*xi));
        }
    }
    acc * half
}

/// Integral over `[0, ∞)` after the map `r = s/(1-s)`.
pub fn integrate_half_line<T: Real>(f: impl Fn(T) -> T, panels: usize, order: usize) -> T {
    integrate(
        |s: T| {
            let om = T::one() - s;
            f(s / om) / (om * om)
        },
        T::zero(),
        T::one(),
        panels,
        order,
    )
}

/// Product rule on the sphere: Gauss-Legendre in `cos θ`, trapezoid in `φ`.
/// `f` receives `(θ, φ)`.
pub fn integrate_sphere<T: Real>(f: impl Fn(T, T) -> T, n_theta: usize, n_phi: usize) -> T {
    let (x, w) = gauss_legendre(n_theta);
    let dphi = T::TAU() / T::from_usize(n_phi).unwrap();
    let mut acc = T::zero();
    for (xi, wi) in x.iter().zip(&w) {
        let th = T::lit(*xi).acos();
        let mut row = T::zero();
        for j in 0..n_phi {
            row += f(th, dphi * T::from_usize(j).unwrap());
        }
        acc += T::lit(*wi) * row;
    }
    acc * dphi
}
