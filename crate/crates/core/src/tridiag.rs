//! Symmetric tridiagonal generalized eigenvalues by Sturm-count bisection.

use crate::Real;

/// Pencil `A - E B` with `A` symmetric tridiagonal and `B` positive diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagPencil<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
    pub weight: Vec<T>,
}

impl<T: Real> TridiagPencil<T> {
    pub fn standard(diag: Vec<T>, off: Vec<T>) -> Self {
        let weight = vec![T::one(); diag.len()];
        Self { diag, off, weight }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `e` (negative LDLᵀ pivots).
    pub fn count_below(&self, e: T) -> usize {
        let tiny = T::min_positive_value().sqrt();
        let mut count = 0;
        let mut d = T::one();
        for i in 0..self.diag.len() {
            let a = self.diag[i] - e * self.weight[i];
            d = if i == 0 { a } else { a - self.off[i - 1] * self.off[i - 1] / d };
            if d == T::zero() {
                d = -tiny;
            }
            if d < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin enclosure of the spectrum of `B^{-1/2} A B^{-1/2}`.
    pub fn bounds(&self) -> (T, T) {
        let n = self.diag.len();
        let w = |i: usize| self.weight[i];
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut rad = T::zero();
            if i > 0 {
                rad += self.off[i - 1].abs() / (w(i - 1) * w(i)).sqrt();
            }
            if i + 1 < n {
                rad += self.off[i].abs() / (w(i) * w(i + 1)).sqrt();
            }
            let centre = self.diag[i] / w(i);
            lo = lo.min(centre - rad);
            hi = hi.max(centre + rad);
        }
        (lo, hi)
    }

    /// `k`-th smallest eigenvalue, bracketed in `[lo, hi]`.
    pub fn eigenvalue_in(&self, k: usize, mut lo: T, mut hi: T) -> T {
        let eps = T::epsilon() * T::lit(4.0);
        for _ in 0..200 {
            let mid = T::lit(0.5) * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= eps * (lo.abs().max(hi.abs())) {
                break;
            }
        }
        T::lit(0.5) * (lo + hi)
    }

    pub fn eigenvalue(&self, k: usize) -> T {
        let (lo, hi) = self.bounds();
        self.eigenvalue_in(k, lo, hi)
    }

    pub fn lowest(&self, count: usize) -> Vec<T> {
        let (lo, hi) = self.bounds();
        (0..count.min(self.len())).map(|k| self.eigenvalue_in(k, lo, hi)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let p = TridiagPencil::standard(vec![2.0; n], vec![-1.0; n - 1]);
        for k in 0..5 {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((p.eigenvalue(k) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_pencil_scales() {
        let n = 20;
        let mut p = TridiagPencil::<f64>::standard(vec![2.0; n], vec![-1.0; n - 1]);
        let e0 = p.eigenvalue(0);
        p.weight = vec![4.0; n];
        assert!((p.eigenvalue(0) - e0 / 4.0).abs() < 1e-13);
    }

    #[test]
    fn weighted_bounds_enclose_spectrum() {
        let n = 30;
        let w: Vec<f64> = (0..n).map(|i| 0.01 + (i * i) as f64).collect();
        let p = TridiagPencil { diag: vec![2.0; n], off: vec![-1.0; n - 1], weight: w };
        let (lo, hi) = p.bounds();
        assert_eq!(p.count_below(lo), 0);
        assert_eq!(p.count_below(hi), n);
    }

    #[test]
    fn count_is_monotone() {
        let p = TridiagPencil::standard(vec![1.0, 3.0, -2.0, 0.5], vec![0.3, -0.7, 1.1]);
        let mut last = 0;
        for i in -50..50 {
            let c = p.count_below(i as f64 * 0.1);
            assert!(c >= last);
            last = c;
        }
        assert_eq!(last, 4);
    }
}
