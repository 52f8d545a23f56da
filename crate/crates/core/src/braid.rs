//! Eight-vertex braid matrices, their Yang-Baxterization and the unitary
//! spectral family, with residual checks for the braid relation, the
//! quantum Yang-Baxter equation and the inversion relation.
//!
//! Basis order for every 4×4 matrix is (KK, KK̄, K̄K, K̄K̄).

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{tensor_product, ComplexMatrix};

/// Product of the two eigenvalues (1+i)(1−i) of the unnormalized braid matrix.
pub const EIGENVALUE_PRODUCT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            other => Err(Error::Validation(format!(
                "sign must be 'plus' or 'minus', got '{other}'"
            ))),
        }
    }
}

/// Sign variant and deformation phase φ (q = e^{iφ}) of a braid matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BraidSpec {
    sign: Sign,
    phi: f64,
    stray_entry: bool,
}

impl BraidSpec {
    /// `phi` is reduced to [0, 2π).
    pub fn new(sign: Sign, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::Validation(format!("phi must be finite, got {phi}")));
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self {
            sign,
            phi,
            stray_entry: false,
        })
    }

    /// Diagnostic variant with a stray `1` in the (K̄K, K̄K̄) entry. It does
    /// not satisfy the braid relation and exists only to demonstrate that.
    pub fn with_stray_entry(mut self) -> Self {
        self.stray_entry = true;
        self
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn has_stray_entry(&self) -> bool {
        self.stray_entry
    }

    /// Deformation parameter q = e^{iφ}.
    pub fn q(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.phi)
    }

    /// Unnormalized b±(φ); satisfies b·b† = 2I.
    pub fn braid_matrix(&self) -> ComplexMatrix {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let s = Complex64::new(self.sign.value(), 0.0);
        let q = self.q();
        let typo = if self.stray_entry { one } else { zero };
        ComplexMatrix::from_rows([
            [one, zero, zero, q],
            [zero, one, s, zero],
            [zero, -s, one, typo],
            [-q.inv(), zero, zero, one],
        ])
        .expect("finite 4x4 entries")
    }

    /// b̃ = b/√2.
    pub fn unitary_braid(&self) -> ComplexMatrix {
        self.braid_matrix().scale_real(FRAC_1_SQRT_2)
    }

    /// R(x) = b + x·λ₁λ₂·b⁻¹.
    pub fn yang_baxterize(&self, x: f64) -> Result<ComplexMatrix> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::Domain(format!(
                "spectral parameter must be finite and >= 0, got {x}"
            )));
        }
        let b = self.braid_matrix();
        let b_inv = b.inverse()?;
        Ok(&b + &b_inv.scale_real(x * EIGENVALUE_PRODUCT))
    }

    /// R̃(θ) = cos θ·b̃ + sin θ·b̃⁻¹ with cos/sin taken from the spectral point.
    pub fn unitary_r(&self, point: &SpectralPoint) -> Result<ComplexMatrix> {
        let bt = self.unitary_braid();
        let bt_inv = bt.inverse()?;
        Ok(&bt.scale_real(point.cos_theta()) + &bt_inv.scale_real(point.sin_theta()))
    }
}

/// Real spectral parameter x ≥ 0 with its angle θ = arctan x, plus the
/// deformation phase φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    x: f64,
    theta: f64,
    phi: f64,
}

impl SpectralPoint {
    pub fn from_x(x: f64, phi: f64) -> Result<Self> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::Domain(format!(
                "spectral parameter must be finite and >= 0, got {x}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::Validation(format!("phi must be finite, got {phi}")));
        }
        Ok(Self {
            x,
            theta: x.atan(),
            phi,
        })
    }

    /// θ must lie in [0, π/2).
    pub fn from_theta(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && (0.0..PI / 2.0).contains(&theta)) {
            return Err(Error::Domain(format!(
                "theta must lie in [0, pi/2), got {theta}"
            )));
        }
        let mut point = Self::from_x(theta.tan(), phi)?;
        point.theta = theta;
        Ok(point)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// 1/√(1+x²)
    pub fn cos_theta(&self) -> f64 {
        1.0 / (1.0 + self.x * self.x).sqrt()
    }

    /// x/√(1+x²)
    pub fn sin_theta(&self) -> f64 {
        self.x / (1.0 + self.x * self.x).sqrt()
    }
}

pub fn braid_matrix(spec: &BraidSpec) -> ComplexMatrix {
    spec.braid_matrix()
}

pub fn unitary_braid(spec: &BraidSpec) -> ComplexMatrix {
    spec.unitary_braid()
}

pub fn yang_baxterize(spec: &BraidSpec, x: f64) -> Result<ComplexMatrix> {
    spec.yang_baxterize(x)
}

pub fn unitary_r(point: &SpectralPoint, sign: Sign) -> Result<ComplexMatrix> {
    BraidSpec::new(sign, point.phi())?.unitary_r(point)
}

/// Lift a two-site operator to sites (1,2) and (2,3) of the three-site space.
fn embed_pair(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let id2 = ComplexMatrix::identity(2).expect("dim 2");
    (
        tensor_product(m, &id2).expect("4 x 2 = 8"),
        tensor_product(&id2, m).expect("2 x 4 = 8"),
    )
}

/// ‖b₁b₂b₁ − b₂b₁b₂‖_F with b₁ = b⊗I₂, b₂ = I₂⊗b.
pub fn check_braid_relation(spec: &BraidSpec) -> f64 {
    let (b1, b2) = embed_pair(&spec.braid_matrix());
    let lhs = &(&b1 * &b2) * &b1;
    let rhs = &(&b2 * &b1) * &b2;
    (&lhs - &rhs).frobenius_norm()
}

/// ‖R₁(x)R₂(xy)R₁(y) − R₂(y)R₁(xy)R₂(x)‖_F.
pub fn check_qybe(spec: &BraidSpec, x: f64, y: f64) -> Result<f64> {
    let (r1x, r2x) = embed_pair(&spec.yang_baxterize(x)?);
    let (r1y, r2y) = embed_pair(&spec.yang_baxterize(y)?);
    let (r1xy, r2xy) = embed_pair(&spec.yang_baxterize(x * y)?);
    let lhs = &(&r1x * &r2xy) * &r1y;
    let rhs = &(&r2y * &r1xy) * &r2x;
    Ok((&lhs - &rhs).frobenius_norm())
}

/// Absolute threshold for declaring R(t)R(1/t) a multiple of the identity.
pub const RHO_SCALAR_TOL: f64 = 1e-12;

/// Inversion relation R(t)·R(1/t) computed from the unnormalized R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoReport {
    pub t: f64,
    pub is_scalar: bool,
    /// Mean of the diagonal of R(t)R(1/t).
    pub scalar: Complex64,
    /// ‖R(t)R(1/t) − scalar·I‖_F.
    pub residual: f64,
    pub off_diagonal: f64,
    pub diagonal_spread: f64,
    /// q² + q⁻² − t − t⁻¹, a candidate closed form, kept for comparison.
    pub candidate_formula: Complex64,
}

impl RhoReport {
    /// 2(t + 1/t), the value implied by b⁴ = −4I.
    pub fn expected_scalar(&self) -> f64 {
        2.0 * (self.t + 1.0 / self.t)
    }

    pub fn discrepancy(&self) -> f64 {
        (self.scalar - self.candidate_formula).norm()
    }
}

pub fn rho_check(spec: &BraidSpec, t: f64) -> Result<RhoReport> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!(
            "rho requires t > 0 so that 1/t is defined, got {t}"
        )));
    }
    let prod = &spec.yang_baxterize(t)? * &spec.yang_baxterize(1.0 / t)?;
    let n = prod.dim();
    let scalar = prod.trace() / n as f64;
    let mut off = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off += prod[(i, j)].norm_sqr();
            }
        }
    }
    let off_diagonal = off.sqrt();
    let diagonal_spread = (0..n)
        .map(|i| (prod[(i, i)] - scalar).norm())
        .fold(0.0, f64::max);
    let residual = (&prod - &ComplexMatrix::identity(n)?.scale(scalar)).frobenius_norm();
    let q = spec.q();
    let candidate_formula = q * q + (q * q).inv() - t - 1.0 / t;
    Ok(RhoReport {
        t,
        is_scalar: off_diagonal < RHO_SCALAR_TOL && diagonal_spread < RHO_SCALAR_TOL,
        scalar,
        residual,
        off_diagonal,
        diagonal_spread,
        candidate_formula,
    })
}
