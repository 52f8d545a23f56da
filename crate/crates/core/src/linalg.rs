//! Dense complex linear algebra for the small fixed dimensions used by
//! two-kaon and three-site braid computations (2, 4 and 8).
//!
//! Matrices are stored row-major. All residuals are Frobenius norms.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Dimensions admitted by [`ComplexMatrix`] and [`ComplexVector`].
pub const SUPPORTED_DIMS: [usize; 3] = [2, 4, 8];

/// Commutator tolerance below which a matrix is treated as normal.
pub const NORMALITY_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("unsupported dimension {0} (expected one of 2, 4, 8)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expected {expected} entries, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error("non-finite entry")]
    NonFinite,
    #[error("matrix is not normal (commutator residual {residual:e})")]
    NotNormal { residual: f64 },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is singular")]
    Singular,
}

type LResult<T> = std::result::Result<T, LinalgError>;

fn check_dim(n: usize) -> LResult<()> {
    if SUPPORTED_DIMS.contains(&n) {
        Ok(())
    } else {
        Err(LinalgError::UnsupportedDimension(n))
    }
}

fn check_finite(data: &[Complex64]) -> LResult<()> {
    if data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(LinalgError::NonFinite)
    }
}

/// Outcome of a tolerance-based predicate together with the measured residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub residual: f64,
}

impl Check {
    pub fn new(residual: f64, tol: f64) -> Self {
        Self {
            passed: residual <= tol,
            residual,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> LResult<Self> {
        check_dim(data.len())?;
        check_finite(&data)?;
        Ok(Self { data })
    }

    pub fn zeros(dim: usize) -> LResult<Self> {
        check_dim(dim)?;
        Ok(Self {
            data: vec![Complex64::new(0.0, 0.0); dim],
        })
    }

    /// Unit coordinate vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> LResult<Self> {
        let mut v = Self::zeros(dim)?;
        if index >= dim {
            return Err(LinalgError::DimensionMismatch {
                left: dim,
                right: index,
            });
        }
        v.data[index] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> LResult<Complex64> {
        if self.dim() != other.dim() {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> LResult<Self> {
        if self.dim() != other.dim() {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> LResult<Self> {
        let n = self.dim() * other.dim();
        check_dim(n)?;
        let mut data = Vec::with_capacity(n);
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Ok(Self { data })
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.data).finish()
    }
}

/// Square complex matrix of dimension 2, 4 or 8.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> LResult<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> LResult<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> LResult<Self> {
        check_finite(diag)?;
        let mut m = Self::zeros(diag.len())?;
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        Ok(m)
    }

    /// Build from row-major entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> LResult<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(LinalgError::WrongLength {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { dim, data })
    }

    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> LResult<Self> {
        Self::from_row_major(N, rows.iter().flatten().copied().collect())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> LResult<Self> {
        check_dim(dim)?;
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        check_finite(&data)?;
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector {
            data: (0..self.dim).map(|i| self[(i, j)]).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self[(j, i)].conj());
            }
        }
        Self { dim: n, data }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self[(j, i)]);
            }
        }
        Self { dim: n, data }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> LResult<f64> {
        self.same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn same_dim(&self, other: &Self) -> LResult<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> LResult<Self> {
        self.same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> LResult<Self> {
        self.same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> LResult<Self> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(Self { dim: n, data })
    }

    pub fn apply(&self, v: &ComplexVector) -> LResult<ComplexVector> {
        if v.dim() != self.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: v.dim(),
            });
        }
        let n = self.dim;
        let data = (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v.data[j]).sum())
            .collect();
        Ok(ComplexVector { data })
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim).expect("dimension already validated");
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// ‖m·m† − I‖_F against `tol`.
    pub fn is_unitary(&self, tol: f64) -> Check {
        let id = Self::identity(self.dim).expect("dimension already validated");
        let residual = (&(self * &self.adjoint()) - &id).frobenius_norm();
        Check::new(residual, tol)
    }

    /// ‖m − m†‖_F against `tol`.
    pub fn is_hermitian(&self, tol: f64) -> Check {
        Check::new((self - &self.adjoint()).frobenius_norm(), tol)
    }

    /// ‖m·m† − m†·m‖_F.
    pub fn normality_residual(&self) -> f64 {
        let adj = self.adjoint();
        (&(self * &adj) - &(&adj * self)).frobenius_norm()
    }

    /// Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> LResult<Self> {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n)?.data;
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
                .expect("non-empty range");
            if a[pivot * n + col].norm() <= 1e-14 * scale {
                return Err(LinalgError::Singular);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= p;
                inv[col * n + j] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[col * n + j], inv[col * n + j]);
                    a[r * n + j] -= factor * ac;
                    inv[r * n + j] -= factor * ic;
                }
            }
        }
        Ok(Self { dim: n, data: inv })
    }

    /// Determinant via LU with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
                .expect("non-empty range");
            let p = a[pivot * n + col];
            if p == Complex64::new(0.0, 0.0) {
                return p;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= factor * v;
                }
            }
        }
        det
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Eigenvalues ascend; eigenvectors are the columns of the
    /// returned unitary.
    pub fn eigh(&self) -> LResult<(Vec<f64>, ComplexMatrix)> {
        let scale = self.frobenius_norm().max(1.0);
        let herm = self.is_hermitian(1e-10 * scale);
        if !herm.passed {
            return Err(LinalgError::NotHermitian {
                residual: herm.residual,
            });
        }
        let (vals, vecs) = jacobi_hermitian(self.dim, &self.data);
        Ok((
            vals,
            Self {
                dim: self.dim,
                data: vecs,
            },
        ))
    }

    /// Eigendecomposition of a normal matrix `A = W·diag(λ)·W†`.
    ///
    /// The Hermitian part is diagonalized first; inside each (near-)degenerate
    /// eigenspace of it the anti-Hermitian part is diagonalized, which keeps
    /// every eigenspace orthonormal. Eigenvalues are Rayleigh quotients.
    pub fn eig_normal(&self) -> LResult<(Vec<Complex64>, ComplexMatrix)> {
        let scale = self.frobenius_norm().max(1.0);
        let residual = self.normality_residual();
        if residual > NORMALITY_TOL * scale * scale {
            return Err(LinalgError::NotNormal { residual });
        }
        let n = self.dim;
        let adj = self.adjoint();
        let half = Complex64::new(0.5, 0.0);
        let herm_part = (self + &adj).scale(half);
        let anti_part = (self - &adj).scale(Complex64::new(0.0, -0.5));

        let (kvals, v) = jacobi_hermitian(n, &herm_part.data);
        let v = Self { dim: n, data: v };
        let cluster_tol = 1e-9 * scale;

        let mut w = Self::zeros(n)?;
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && (kvals[end] - kvals[end - 1]).abs() <= cluster_tol {
                end += 1;
            }
            let m = end - start;
            // restricted anti-Hermitian part: V_c† L V_c
            let mut block = vec![Complex64::new(0.0, 0.0); m * m];
            for a in 0..m {
                for b in 0..m {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        let vi = v[(i, start + a)].conj();
                        for j in 0..n {
                            acc += vi * anti_part[(i, j)] * v[(j, start + b)];
                        }
                    }
                    block[a * m + b] = acc;
                }
            }
            for a in 0..m {
                for b in 0..a {
                    let avg = (block[a * m + b] + block[b * m + a].conj()) * 0.5;
                    block[a * m + b] = avg;
                    block[b * m + a] = avg.conj();
                }
                block[a * m + a].im = 0.0;
            }
            let (_, u) = jacobi_hermitian(m, &block);
            for c in 0..m {
                for i in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..m {
                        acc += v[(i, start + a)] * u[a * m + c];
                    }
                    w[(i, start + c)] = acc;
                }
            }
            start = end;
        }

        let eigenvalues = (0..n)
            .map(|c| {
                let col = w.column(c);
                let image = self.apply(&col).expect("same dimension");
                col.inner(&image).expect("same dimension")
            })
            .collect();
        Ok((eigenvalues, w))
    }

    /// `exp(m)` for a normal matrix via its eigendecomposition.
    pub fn exp_normal(&self) -> LResult<Self> {
        if self.data.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return Self::identity(self.dim);
        }
        let (vals, w) = self.eig_normal()?;
        let exps: Vec<Complex64> = vals.iter().map(|z| z.exp()).collect();
        let n = self.dim;
        Self::from_fn(n, |i, j| {
            (0..n).map(|k| w[(i, k)] * exps[k] * w[(j, k)].conj()).sum()
        })
    }
}

/// Cyclic Jacobi on an `n×n` Hermitian matrix given row-major. Returns
/// ascending eigenvalues and row-major eigenvector matrix (columns).
fn jacobi_hermitian(n: usize, input: &[Complex64]) -> (Vec<f64>, Vec<Complex64>) {
    let zero = Complex64::new(0.0, 0.0);
    let mut a = input.to_vec();
    let mut v = vec![zero; n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let total = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = Complex64::from_polar(1.0, -apq.arg());
                let tau = (a[q * n + q].re - a[p * n + p].re) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U restricted to (p, q)
                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(s, 0.0);
                let u_qp = phase * (-s);
                let u_qq = phase * c;

                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = akp * u_pp + akq * u_qp;
                    a[k * n + q] = akp * u_pq + akq * u_qq;
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = vkp * u_pp + vkq * u_qp;
                    v[k * n + q] = vkp * u_pq + vkq * u_qq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[p * n + q] = zero;
                a[q * n + p] = zero;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let vals = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vecs = vec![zero; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vecs[r * n + new_col] = v[r * n + old_col];
        }
    }
    (vals, vecs)
}

/// Kronecker product `a ⊗ b`; the product dimension must be 4 or 8.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> LResult<ComplexMatrix> {
    let (m, n) = (a.dim, b.dim);
    let d = m * n;
    if d != 4 && d != 8 {
        return Err(LinalgError::UnsupportedDimension(d));
    }
    let mut data = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..m {
        for j in 0..m {
            let aij = a[(i, j)];
            for k in 0..n {
                for l in 0..n {
                    data[(i * n + k) * d + (j * n + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(ComplexMatrix { dim: d, data })
}

/// Matrix exponential restricted to normal input.
pub fn matrix_exponential_normal(m: &ComplexMatrix) -> LResult<ComplexMatrix> {
    m.exp_normal()
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> Check {
    m.is_unitary(tol)
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> Check {
    m.is_hermitian(tol)
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

// Operator forms panic on dimension mismatch; use the `try_*` / `matmul`
// methods where dimensions are not statically known.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs)
            .expect("matrix difference dimension mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>+.6}{:>+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&d.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert_eq!(
            tensor_product(&i2, &i2).unwrap(),
            ComplexMatrix::identity(4).unwrap()
        );
    }

    #[test]
    fn tensor_of_diagonals() {
        let z = diag(&[1.0, -1.0]);
        assert_eq!(
            tensor_product(&z, &z).unwrap(),
            diag(&[1.0, -1.0, -1.0, 1.0])
        );
    }

    #[test]
    fn tensor_rejects_unsupported_product() {
        let a = ComplexMatrix::identity(4).unwrap();
        assert_eq!(
            tensor_product(&a, &a),
            Err(LinalgError::UnsupportedDimension(16))
        );
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(
            ComplexMatrix::zeros(3).unwrap_err(),
            LinalgError::UnsupportedDimension(3)
        );
        let mut d = vec![c(0.0, 0.0); 4];
        d[1] = c(f64::NAN, 0.0);
        assert_eq!(
            ComplexMatrix::from_row_major(2, d).unwrap_err(),
            LinalgError::NonFinite
        );
        let a = ComplexMatrix::identity(2).unwrap();
        let b = ComplexMatrix::identity(4).unwrap();
        assert!(matches!(
            a.matmul(&b),
            Err(LinalgError::DimensionMismatch { left: 2, right: 4 })
        ));
    }

    #[test]
    fn exp_of_zero_and_scalar() {
        let z = ComplexMatrix::zeros(4).unwrap();
        assert_eq!(z.exp_normal().unwrap(), ComplexMatrix::identity(4).unwrap());
        let m = ComplexMatrix::identity(4)
            .unwrap()
            .scale(c(0.0, std::f64::consts::PI));
        let e = m.exp_normal().unwrap();
        let minus_id = ComplexMatrix::identity(4).unwrap().scale_real(-1.0);
        assert!(e.max_abs_diff(&minus_id).unwrap() < 1e-15);
    }

    #[test]
    fn exp_rejects_non_normal() {
        let mut m = ComplexMatrix::zeros(2).unwrap();
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(m.exp_normal(), Err(LinalgError::NotNormal { .. })));
    }

    #[test]
    fn unitary_and_hermitian_residuals() {
        let id = ComplexMatrix::identity(4).unwrap();
        let chk = id.is_unitary(1e-12);
        assert!(chk.passed);
        assert_eq!(chk.residual, 0.0);
        let two = id.scale_real(2.0);
        let chk = two.is_unitary(1e-12);
        assert!(!chk.passed);
        assert_eq!(chk.residual, 6.0);

        assert!(id.is_hermitian(1e-12).passed);
        let ii = id.scale(c(0.0, 1.0));
        let chk = ii.is_hermitian(1e-12);
        assert!(!chk.passed);
        assert_eq!(chk.residual, 4.0);
    }

    #[test]
    fn eigh_handles_degenerate_spectrum() {
        // Pauli-y ⊗ I has eigenvalues ±1, each twice.
        let y = ComplexMatrix::from_rows([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
            .unwrap();
        let m = tensor_product(&y, &ComplexMatrix::identity(2).unwrap()).unwrap();
        let (vals, vecs) = m.eigh().unwrap();
        for (v, expect) in vals.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((v - expect).abs() < 1e-14);
        }
        assert!(vecs.is_unitary(1e-14).passed);
    }

    #[test]
    fn inverse_and_determinant() {
        let m = ComplexMatrix::from_rows([[c(1.0, 1.0), c(2.0, 0.0)], [c(0.0, -1.0), c(3.0, 0.5)]])
            .unwrap();
        let inv = m.inverse().unwrap();
        let id = ComplexMatrix::identity(2).unwrap();
        assert!((&m * &inv).max_abs_diff(&id).unwrap() < 1e-15);
        let det = m.determinant();
        let expect = c(1.0, 1.0) * c(3.0, 0.5) - c(2.0, 0.0) * c(0.0, -1.0);
        assert!((det - expect).norm() < 1e-14);
        assert_eq!(
            ComplexMatrix::zeros(2).unwrap().inverse(),
            Err(LinalgError::Singular)
        );
    }

    #[test]
    fn vector_tensor_matches_kron_action() {
        let u = ComplexVector::new(vec![c(1.0, 0.5), c(-0.3, 2.0)]).unwrap();
        let v = ComplexVector::new(vec![c(0.2, 0.0), c(0.0, 1.0)]).unwrap();
        let uv = u.tensor(&v).unwrap();
        assert_eq!(uv[1], u[0] * v[1]);
        assert_eq!(uv[2], u[1] * v[0]);
    }
}
