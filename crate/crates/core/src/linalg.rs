//! Dense symmetric matrices of small dimension (parameter blocks, p ≤ 6 or so).

use crate::real::Real;

/// Symmetric matrix stored row-major in full.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat<R> {
    dim: usize,
    data: Vec<R>,
}

impl<R: Real> SymMat<R> {
    pub fn zeros(dim: usize) -> Self {
        SymMat {
            dim,
            data: vec![R::zero(); dim * dim],
        }
    }

    pub fn from_rows(rows: &[Vec<R>]) -> Self {
        let dim = rows.len();
        let mut m = SymMat::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim);
            for (j, &x) in row.iter().enumerate() {
                m.data[i * dim + j] = x;
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> R {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: R) {
        self.data[i * self.dim + j] = x;
        self.data[j * self.dim + i] = x;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, x: R) {
        self.data[i * self.dim + j] += x;
        if i != j {
            self.data[j * self.dim + i] += x;
        }
    }

    /// `self += w · v vᵀ`.
    pub fn add_scaled_outer(&mut self, v: &[R], w: R) {
        debug_assert_eq!(v.len(), self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.data[i * self.dim + j] += w * v[i] * v[j];
            }
        }
    }

    pub fn add_assign(&mut self, other: &SymMat<R>) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
    }

    pub fn sub(&self, other: &SymMat<R>) -> SymMat<R> {
        debug_assert_eq!(self.dim, other.dim);
        SymMat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&mut self, c: R) {
        for a in self.data.iter_mut() {
            *a *= c;
        }
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        debug_assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.data[i * self.dim + j] * v[j])
                    .sum()
            })
            .collect()
    }

    /// Cholesky factorization `A = L Lᵀ`; `None` when not positive definite.
    pub fn cholesky(&self) -> Option<Cholesky<R>> {
        let n = self.dim;
        let mut l = vec![R::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s = s - l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if s <= R::zero() || !s.is_finite() {
                        return None;
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Some(Cholesky { dim: n, l })
    }

    /// `A⁻¹` via Cholesky; `None` when not positive definite.
    pub fn inverse(&self) -> Option<SymMat<R>> {
        let ch = self.cholesky()?;
        let n = self.dim;
        let mut inv = SymMat::zeros(n);
        let mut e = vec![R::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = R::zero());
            e[j] = R::one();
            let col = ch.solve(&e);
            for i in 0..n {
                inv.data[i * n + j] = col[i];
            }
        }
        // Symmetrize against roundoff.
        for i in 0..n {
            for j in 0..i {
                let m = (inv.data[i * n + j] + inv.data[j * n + i]) * R::half();
                inv.data[i * n + j] = m;
                inv.data[j * n + i] = m;
            }
        }
        Some(inv)
    }

    /// `xᵀ A⁻¹ x` via a Cholesky solve; `None` when A is not positive definite.
    pub fn quad_form_inv(&self, x: &[R]) -> Option<R> {
        let ch = self.cholesky()?;
        Some(ch.quad_form_inv(x))
    }

    pub fn diag(&self) -> Vec<R> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs(&self) -> R {
        self.data
            .iter()
            .fold(R::zero(), |acc, &x| acc.max(x.abs()))
    }
}

/// Lower-triangular Cholesky factor.
#[derive(Debug, Clone)]
pub struct Cholesky<R> {
    dim: usize,
    l: Vec<R>,
}

impl<R: Real> Cholesky<R> {
    /// Solve `A x = b`.
    pub fn solve(&self, b: &[R]) -> Vec<R> {
        let n = self.dim;
        debug_assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let yk = y[k];
                y[i] = y[i] - self.l[i * n + k] * yk;
            }
            y[i] = y[i] / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let yk = y[k];
                y[i] = y[i] - self.l[k * n + i] * yk;
            }
            y[i] = y[i] / self.l[i * n + i];
        }
        y
    }

    /// `xᵀ A⁻¹ x = |L⁻¹ x|²`, numerically symmetric and nonnegative.
    pub fn quad_form_inv(&self, x: &[R]) -> R {
        let n = self.dim;
        debug_assert_eq!(x.len(), n);
        let mut y = x.to_vec();
        let mut acc = R::zero();
        for i in 0..n {
            for k in 0..i {
                let yk = y[k];
                y[i] = y[i] - self.l[i * n + k] * yk;
            }
            y[i] = y[i] / self.l[i * n + i];
            acc += y[i] * y[i];
        }
        acc
    }
}

/// Solve the symmetric system `A x = b` with Levenberg-style damping: if `A`
/// is not positive definite, increase the ridge until the Cholesky succeeds.
/// Returns the solution of `(A + μI) x = b` for the smallest tried μ.
pub fn solve_damped<R: Real>(a: &SymMat<R>, b: &[R]) -> Option<Vec<R>> {
    if let Some(ch) = a.cholesky() {
        return Some(ch.solve(b));
    }
    let scale = a.max_abs().max(R::one());
    let mut mu = scale * R::of(1e-8);
    for _ in 0..40 {
        let mut damped = a.clone();
        for i in 0..a.dim() {
            damped.add_at(i, i, mu);
        }
        if let Some(ch) = damped.cholesky() {
            return Some(ch.solve(b));
        }
        mu = mu * R::of(10.0);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cholesky_solves_spd_system() {
        let a = SymMat::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]);
        let x = a.cholesky().unwrap().solve(&[1.0, 2.0]);
        // 4x + y = 1, x + 3y = 2 -> x = 1/11, y = 7/11
        assert_relative_eq!(x[0], 1.0 / 11.0, max_relative = 1e-14);
        assert_relative_eq!(x[1], 7.0 / 11.0, max_relative = 1e-14);
    }

    #[test]
    fn quad_form_matches_inverse() {
        let a = SymMat::from_rows(&[vec![2.0, 0.3, 0.1], vec![0.3, 1.5, 0.2], vec![0.1, 0.2, 1.1]]);
        let x = [0.7, -0.4, 1.3];
        let inv = a.inverse().unwrap();
        let direct: f64 = (0..3)
            .map(|i| (0..3).map(|j| x[i] * inv.get(i, j) * x[j]).sum::<f64>())
            .sum();
        assert_relative_eq!(a.quad_form_inv(&x).unwrap(), direct, max_relative = 1e-12);
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let a = SymMat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(a.cholesky().is_none());
        assert!(solve_damped(&a, &[1.0, 1.0]).is_some());
    }
}
