//! Deterministic low-discrepancy sample points.

use crate::Real;

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut x = 0.0;
    while i > 0 {
        x += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    x
}

/// `i`-th point of the 3-D Halton sequence (bases 2, 3, 5), 1-based.
pub fn halton3(i: u64) -> [f64; 3] {
    [radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5)]
}

/// Spherical-shell sampler: radius uniform in `[r_min, r_max]`, direction
/// uniform on the sphere, polar caps of half-angle `cone` removed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellSampler {
    pub r_min: f64,
    pub r_max: f64,
    pub cone: f64,
}

impl Default for ShellSampler {
    fn default() -> Self {
        Self { r_min: 0.5, r_max: 5.0, cone: 0.05 }
    }
}

impl ShellSampler {
    pub fn points<T: Real>(&self, n: usize) -> Vec<[T; 3]> {
        let mut out = Vec::with_capacity(n);
        let mut i = 1u64;
        while out.len() < n {
            let [u, v, w] = halton3(i);
            i += 1;
            let r = self.r_min + (self.r_max - self.r_min) * u;
            let ct = 1.0 - 2.0 * v;
            let theta = ct.acos();
            if theta < self.cone || theta > std::f64::consts::PI - self.cone {
                continue;
            }
            let st = (1.0 - ct * ct).sqrt();
            let ph = 2.0 * std::f64::consts::PI * w;
            out.push([T::lit(r * st * ph.cos()), T::lit(r * st * ph.sin()), T::lit(r * ct)]);
        }
        out
    }
}

/// The 64 standard field sample points.
pub fn standard_points<T: Real>() -> Vec<[T; 3]> {
    ShellSampler::default().points(64)
}

/// Unit directions from the same sequence, caps excluded.
pub fn directions<T: Real>(n: usize) -> Vec<[T; 3]> {
    ShellSampler { r_min: 1.0, r_max: 1.0, cone: 0.05 }.points(n)
}

pub fn norm3<T: Real>(v: [T; 3]) -> T {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `(r, θ, φ)` of a Cartesian point.
pub fn to_spherical<T: Real>(v: [T; 3]) -> (T, T, T) {
    let r = norm3(v);
    let th = (v[2] / r).max(-T::one()).min(T::one()).acos();
    (r, th, v[1].atan2(v[0]))
}

pub fn from_spherical<T: Real>(r: T, th: T, ph: T) -> [T; 3] {
    [r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()]
}
