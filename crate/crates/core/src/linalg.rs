//! Small dense complex solvers backing the character-table eigensolver.
//! Dimensions are bounded by the class budget (k ≤ 64), so plain
//! partial-pivot LU is plenty.

use num_complex::Complex64;

/// LU factorization with partial pivoting of a k×k complex matrix.
pub struct ComplexLu {
    k: usize,
    lu: Vec<Complex64>,
    pivots: Vec<usize>,
}

impl ComplexLu {
    /// Factor `a` (row-major, k×k). Tiny pivots are clamped instead of
    /// failing: inverse iteration deliberately factors near-singular shifts.
    pub fn factor(a: &[Complex64], k: usize) -> ComplexLu {
        let mut lu = a.to_vec();
        let mut pivots = vec![0usize; k];
        let scale: f64 = a
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        for col in 0..k {
            let mut best = col;
            let mut best_mag = lu[col * k + col].norm();
            for row in col + 1..k {
                let mag = lu[row * k + col].norm();
                if mag > best_mag {
                    best = row;
                    best_mag = mag;
                }
            }
            pivots[col] = best;
            if best != col {
                for j in 0..k {
                    lu.swap(col * k + j, best * k + j);
                }
            }
            let mut pivot = lu[col * k + col];
            if pivot.norm() < 1e-300 * scale.max(1.0) {
                // scale can be subnormal for an (exactly) zero shift, so keep
                // the clamp away from underflow
                pivot = Complex64::new(f64::EPSILON * scale.max(1.0), 0.0);
                lu[col * k + col] = pivot;
            }
            for row in col + 1..k {
                let factor = lu[row * k + col] / pivot;
                lu[row * k + col] = factor;
                for j in col + 1..k {
                    let sub = factor * lu[col * k + j];
                    lu[row * k + j] -= sub;
                }
            }
        }
        ComplexLu { k, lu, pivots }
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let k = self.k;
        let mut x = b.to_vec();
        for col in 0..k {
            x.swap(col, self.pivots[col]);
            let xc = x[col];
            for row in col + 1..k {
                let sub = self.lu[row * k + col] * xc;
                x[row] -= sub;
            }
        }
        for col in (0..k).rev() {
            x[col] /= self.lu[col * k + col];
            let xc = x[col];
            for row in 0..col {
                let sub = self.lu[row * k + col] * xc;
                x[row] -= sub;
            }
        }
        x
    }
}

/// Eigenvector of the real matrix `m` for (approximate) eigenvalue `lambda`,
/// by inverse iteration from the given start vector. Returns a unit vector.
pub fn inverse_iteration(
    m: &[f64],
    k: usize,
    lambda: Complex64,
    start: &[Complex64],
    iterations: usize,
) -> Vec<Complex64> {
    let shifted: Vec<Complex64> = (0..k * k)
        .map(|idx| {
            let mut z = Complex64::new(m[idx], 0.0);
            if idx / k == idx % k {
                z -= lambda;
            }
            z
        })
        .collect();
    let lu = ComplexLu::factor(&shifted, k);
    let mut v = start.to_vec();
    normalize(&mut v);
    for _ in 0..iterations {
        v = lu.solve(&v);
        normalize(&mut v);
    }
    v
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}

/// Residual ‖Mv − λv‖ for a unit vector v.
pub fn eigen_residual(m: &[f64], k: usize, lambda: Complex64, v: &[Complex64]) -> f64 {
    let mut res = 0.0;
    for row in 0..k {
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..k {
            acc += m[row * k + col] * v[col];
        }
        acc -= lambda * v[row];
        res += acc.norm_sqr();
    }
    res.sqrt()
}
