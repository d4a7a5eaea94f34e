//! Small dense and tridiagonal linear algebra over generic scalars.
//!
//! The systems in this crate are either tiny (one row per delta well) or
//! tridiagonal (finite-difference grids), so everything here is written
//! directly rather than pulled from a general dense library.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![cx(T::zero()); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn norm1(&self) -> T {
        (0..self.n)
            .map(|j| (0..self.n).fold(T::zero(), |s, i| s + self[(i, j)].norm()))
            .fold(T::zero(), T::max)
    }

    pub fn mul_vec(&self, v: &[Cx<T>]) -> Vec<Cx<T>> {
        (0..self.n)
            .map(|i| (0..self.n).fold(cx(T::zero()), |s, j| s + self[(i, j)] * v[j]))
            .collect()
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Cx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.n + j]
    }
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
    /// 1-norm condition number of the factored matrix.
    pub condition: T,
}

impl<T: Real> Lu<T> {
    /// Factors `a`; fails only on an exactly zero pivot.
    pub fn new(a: &CMatrix<T>) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    lu[(i, col)]
                        .norm()
                        .partial_cmp(&lu[(j, col)].norm())
                        .unwrap()
                })
                .unwrap();
            if lu[(pivot, col)].norm() == T::zero() {
                return Err(Error::Singular {
                    condition: f64::INFINITY,
                });
            }
            if pivot != col {
                for j in 0..n {
                    let t = lu[(col, j)];
                    lu[(col, j)] = lu[(pivot, j)];
                    lu[(pivot, j)] = t;
                }
                perm.swap(col, pivot);
            }
            let d = lu[(col, col)];
            for i in col + 1..n {
                let factor = lu[(i, col)] / d;
                lu[(i, col)] = factor;
                for j in col + 1..n {
                    let t = lu[(col, j)];
                    lu[(i, j)] = lu[(i, j)] - factor * t;
                }
            }
        }
        let mut out = Self {
            lu,
            perm,
            condition: T::zero(),
        };
        // The systems are at most a handful of wells, so the exact inverse norm is cheap.
        let mut inv_norm = T::zero();
        for j in 0..n {
            let mut e = vec![cx(T::zero()); n];
            e[j] = cx(T::one());
            let col = out.solve(&e);
            inv_norm = inv_norm.max(col.iter().fold(T::zero(), |s, z| s + z.norm()));
        }
        out.condition = a.norm1() * inv_norm;
        Ok(out)
    }

    pub fn solve(&self, b: &[Cx<T>]) -> Vec<Cx<T>> {
        let n = self.lu.dim();
        let mut x: Vec<Cx<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = x[j];
                x[i] = x[i] - self.lu[(i, j)] * t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = x[j];
                x[i] = x[i] - self.lu[(i, j)] * t;
            }
            x[i] = x[i] / self.lu[(i, i)];
        }
        x
    }

    pub fn determinant(&self) -> Cx<T> {
        let n = self.lu.dim();
        let mut det = cx(T::one());
        for i in 0..n {
            det = det * self.lu[(i, i)];
        }
        let swaps = {
            let mut seen = vec![false; n];
            let mut parity = 0usize;
            for start in 0..n {
                let mut len = 0;
                let mut i = start;
                while !seen[i] {
                    seen[i] = true;
                    i = self.perm[i];
                    len += 1;
                }
                if len > 0 {
                    parity += len - 1;
                }
            }
            parity
        };
        if swaps % 2 == 1 {
            -det
        } else {
            det
        }
    }
}

/// Number of negative eigenvalues of a real symmetric matrix, by Sylvester
/// inertia of an unpivoted LDL^T factorization. Returns `None` when a pivot
/// vanishes exactly.
pub fn negative_inertia<T: Real>(a: &[Vec<T>]) -> Option<usize> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut count = 0;
    for k in 0..n {
        let d = m[k][k];
        if d == T::zero() || d.is_nan() {
            return None;
        }
        if d < T::zero() {
            count += 1;
        }
        for i in k + 1..n {
            let l = m[i][k] / d;
            for j in k + 1..n {
                m[i][j] = m[i][j] - l * m[k][j];
            }
        }
    }
    Some(count)
}

/// Symmetric tridiagonal matrix: `diag[i]` and `off[i]` coupling `i` and `i + 1`.
#[derive(Debug, Clone)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: T) -> usize {
        let mut count = 0;
        let mut q = T::one();
        let tiny = T::min_positive_value().sqrt();
        for i in 0..self.len() {
            let b2 = if i == 0 {
                T::zero()
            } else {
                self.off[i - 1] * self.off[i - 1]
            };
            q = self.diag[i] - x - if i == 0 { T::zero() } else { b2 / q };
            if q == T::zero() {
                q = tiny;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (T, T) {
        let n = self.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let r = if i > 0 {
                self.off[i - 1].abs()
            } else {
                T::zero()
            } + if i + 1 < n {
                self.off[i].abs()
            } else {
                T::zero()
            };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `index`-th smallest eigenvalue (0-based), by bisection.
    pub fn eigenvalue(&self, index: usize) -> T {
        let (mut lo, mut hi) = self.gershgorin();
        let two = T::lit(2.0);
        for _ in 0..300 {
            let mid = lo + (hi - lo) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo + (hi - lo) / two
    }

    /// Unit-norm eigenvector for an (accurately known) eigenvalue, by
    /// inverse iteration.
    pub fn eigenvector(&self, eigenvalue: T) -> Vec<T> {
        let n = self.len();
        let scale = self.gershgorin();
        let shift =
            eigenvalue - (scale.1 - scale.0).abs().max(T::one()) * T::epsilon() * T::lit(16.0);
        let sub: Vec<Cx<T>> = self.off.iter().map(|&b| cx(b)).collect();
        let diag: Vec<Cx<T>> = self.diag.iter().map(|&d| cx(d - shift)).collect();
        let mut v: Vec<T> = (0..n)
            .map(|i| T::one() + T::lit((i % 7) as f64) * T::lit(1e-3))
            .collect();
        for _ in 0..4 {
            let rhs: Vec<Cx<T>> = v.iter().map(|&x| cx(x)).collect();
            let sol = solve_tridiagonal(&sub, &diag, &sub, &rhs);
            let norm = sol.iter().fold(T::zero(), |s, z| s + z.re * z.re).sqrt();
            v = sol.iter().map(|z| z.re / norm).collect();
        }
        // Fix the sign so the largest component is positive.
        let big = v
            .iter()
            .copied()
            .fold(T::zero(), |m, x| if x.abs() > m.abs() { x } else { m });
        if big < T::zero() {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    }

    /// All eigenvalues together with the projections `<v_n | w>` of a fixed
    /// vector onto the eigenvectors, in O(n^2) work via implicit QL.
    ///
    /// Results are sorted by eigenvalue.
    pub fn eigen_projections(&self, w: &[T]) -> (Vec<T>, Vec<T>) {
        let n = self.len();
        let mut d = self.diag.clone();
        let mut e: Vec<T> = self.off.clone();
        e.push(T::zero());
        let mut z = w.to_vec();
        let two = T::lit(2.0);

        for l in 0..n {
            let mut iter = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= T::epsilon() * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                iter += 1;
                if iter > 60 {
                    break;
                }
                let mut g = (d[l + 1] - d[l]) / (two * e[l]);
                let mut r = g.hypot(T::one());
                g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
                let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
                let mut i = m;
                let mut underflow = false;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == T::zero() {
                        d[i + 1] = d[i + 1] - p;
                        e[m] = T::zero();
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + two * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    let zf = z[i + 1];
                    z[i + 1] = s * z[i] + c * zf;
                    z[i] = c * z[i] - s * zf;
                }
                if underflow {
                    continue;
                }
                d[l] = d[l] - p;
                e[l] = g;
                e[m] = T::zero();
            }
        }

        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
        (
            idx.iter().map(|&i| d[i]).collect(),
            idx.iter().map(|&i| z[i]).collect(),
        )
    }
}

/// Thomas algorithm for a complex tridiagonal system. `sub[i]` couples row
/// `i + 1` to column `i`; `sup[i]` couples row `i` to column `i + 1`.
pub fn solve_tridiagonal<T: Real>(
    sub: &[Cx<T>],
    diag: &[Cx<T>],
    sup: &[Cx<T>],
    rhs: &[Cx<T>],
) -> Vec<Cx<T>> {
    let n = diag.len();
    let mut c = vec![Complex::new(T::zero(), T::zero()); n];
    let mut d = vec![Complex::new(T::zero(), T::zero()); n];
    let tiny = cx(T::min_positive_value().sqrt());
    let mut denom = diag[0];
    if denom.norm() == T::zero() {
        denom = tiny;
    }
    c[0] = if n > 1 { sup[0] / denom } else { cx(T::zero()) };
    d[0] = rhs[0] / denom;
    for i in 1..n {
        let mut m = diag[i] - sub[i - 1] * c[i - 1];
        if m.norm() == T::zero() {
            m = tiny;
        }
        if i + 1 < n {
            c[i] = sup[i] / m;
        }
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / m;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        let t = d[i + 1];
        d[i] = d[i] - c[i] * t;
    }
    d
}
