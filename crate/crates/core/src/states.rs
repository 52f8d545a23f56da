//! Two-kaon pure states over the ordered basis (KK, KK̄, K̄K, K̄K̄), the
//! Bell quartet, concurrence, strangeness and CP.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::braid::BraidSpec;
use crate::error::{Error, Result};
use crate::linalg::{tensor_product, ComplexMatrix, ComplexVector};

/// Allowed deviation of ‖Ψ‖ from 1.
pub const NORM_TOL: f64 = 1e-9;

/// Tolerance used when classifying Bell states as operator eigenvectors.
pub const EIGEN_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Labels of the canonical basis, in order.
pub const BASIS_LABELS: [&str; 4] = ["KK", "KKbar", "KbarK", "KbarKbar"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoKaonState {
    amps: [Complex64; 4],
}

impl TwoKaonState {
    /// Amplitudes in canonical order; rejects vectors whose norm is off by
    /// more than [`NORM_TOL`].
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        if amps.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Validation("non-finite amplitude".into()));
        }
        let norm = norm4(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!(
                "two-kaon state must have unit norm, got {norm}"
            )));
        }
        Ok(Self { amps })
    }

    /// Rescale arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: [Complex64; 4]) -> Result<Self> {
        let norm = norm4(&amps);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Validation("cannot normalize a zero vector".into()));
        }
        Self::new(amps.map(|z| z / norm))
    }

    /// Amplitudes labelled as a₀|KK⟩ + a₁|K̄K⟩ + a₂|KK̄⟩ + a₃|K̄K̄⟩, i.e. with
    /// the two mixed-flavour slots swapped relative to canonical order.
    pub fn from_mixed_first_labeling(a: [Complex64; 4]) -> Result<Self> {
        Self::new([a[0], a[2], a[1], a[3]])
    }

    /// Product state ψ⊗χ of two single-kaon states (|K⟩, |K̄⟩ components).
    pub fn product(first: [Complex64; 2], second: [Complex64; 2]) -> Result<Self> {
        Self::normalized([
            first[0] * second[0],
            first[0] * second[1],
            first[1] * second[0],
            first[1] * second[1],
        ])
    }

    pub fn basis(index: usize) -> Result<Self> {
        if index >= 4 {
            return Err(Error::Validation(format!(
                "basis index {index} out of range"
            )));
        }
        let mut amps = [ZERO; 4];
        amps[index] = ONE;
        Ok(Self { amps })
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm4(&self.amps)
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::new(self.amps.to_vec()).expect("dim 4")
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Apply a 4×4 operator that is expected to preserve the norm.
    pub fn apply(&self, op: &ComplexMatrix) -> Result<Self> {
        let image = op.apply(&self.to_vector())?;
        let s = image.as_slice();
        Self::new([s[0], s[1], s[2], s[3]])
    }

    /// a₀a₃ − a₁a₂ in canonical order; zero exactly for product states.
    pub fn determinant(&self) -> Complex64 {
        let [a0, a1, a2, a3] = self.amps;
        a0 * a3 - a1 * a2
    }

    pub fn concurrence(&self) -> f64 {
        concurrence(self)
    }

    /// Largest entrywise distance from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn norm4(a: &[Complex64; 4]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn canonical_basis() -> [TwoKaonState; 4] {
    [0, 1, 2, 3].map(|i| TwoKaonState::basis(i).expect("index < 4"))
}

/// The coefficient map
///
/// ```text
/// ⎡a0  0  0  0⎤
/// ⎢ 0  0 a3  0⎥
/// ⎢ 0 a2  0  0⎥
/// ⎣ 0  0  0 a1⎦
/// ```
///
/// read row-wise against the ket column (KK, KK̄, K̄K, K̄K̄): the basis ket
/// in row `i` is sent to Σⱼ Mᵢⱼ|j⟩, so KK→a₀KK, KK̄→a₃K̄K, K̄K→a₂KK̄,
/// K̄K̄→a₁K̄K̄. In column convention the operator is therefore Mᵀ.
pub fn rbar_matrix(coeffs: [Complex64; 4]) -> Result<ComplexMatrix> {
    let [a0, a1, a2, a3] = coeffs;
    let m = ComplexMatrix::from_rows([
        [a0, ZERO, ZERO, ZERO],
        [ZERO, ZERO, a3, ZERO],
        [ZERO, a2, ZERO, ZERO],
        [ZERO, ZERO, ZERO, a1],
    ])?;
    let check = m.is_unitary(NORM_TOL);
    if !check.passed {
        return Err(Error::Validation(format!(
            "coefficient map is not unitary (residual {:e}); each coefficient needs modulus 1",
            check.residual
        )));
    }
    Ok(m)
}

pub fn apply_rbar(coeffs: [Complex64; 4], state: &TwoKaonState) -> Result<TwoKaonState> {
    let op = rbar_matrix(coeffs)?.transpose();
    state.apply(&op)
}

/// a₀a₁ − a₂a₃ over the coefficients of the R̄ map. The image of the uniform
/// product state (1,1,1,1)/2 has determinant (a₀a₁ − a₂a₃)/4, so a nonzero
/// value means the map entangles it.
pub fn rbar_entangling_criterion(coeffs: [Complex64; 4]) -> Complex64 {
    coeffs[0] * coeffs[1] - coeffs[2] * coeffs[3]
}

/// C = 2|a₀a₃ − a₁a₂|.
pub fn concurrence(state: &TwoKaonState) -> f64 {
    (2.0 * state.determinant().norm()).min(1.0)
}

pub fn is_separable(state: &TwoKaonState, tol: f64) -> bool {
    concurrence(state) <= tol
}

/// Φ₁…Φ₄ = (|KK⟩ ± |K̄K̄⟩)/√2, (|K̄K⟩ ± |KK̄⟩)/√2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellQuartet {
    pub states: [TwoKaonState; 4],
}

impl BellQuartet {
    pub fn get(&self, index: usize) -> &TwoKaonState {
        &self.states[index]
    }
}

pub fn bell_quartet() -> BellQuartet {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let states = [
        [h, ZERO, ZERO, h],
        [h, ZERO, ZERO, -h],
        [ZERO, h, h, ZERO],
        [ZERO, -h, h, ZERO],
    ]
    .map(|a| TwoKaonState::new(a).expect("unit norm"));
    BellQuartet { states }
}

/// (|KK⟩ + e^{iφ}|K̄K̄⟩)/√2, the phase-deformed first Bell state.
pub fn deformed_phi1(phi: f64) -> TwoKaonState {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    TwoKaonState::new([h, ZERO, ZERO, Complex64::from_polar(FRAC_1_SQRT_2, phi)])
        .expect("unit norm")
}

/// Images b̃|e_j⟩ of the canonical basis states under the unitary braid matrix.
pub fn braid_action_images(spec: &BraidSpec) -> Result<[TwoKaonState; 4]> {
    let bt = spec.unitary_braid();
    images_of(&bt)
}

/// The braid matrix read row-wise against the ket column: entry `i` is
/// Σⱼ b̃ᵢⱼ|j⟩, giving (|KK⟩ + e^{iφ}|K̄K̄⟩)/√2, (|KK̄⟩ ± |K̄K⟩)/√2,
/// (∓|KK̄⟩ + |K̄K⟩)/√2, (−e^{−iφ}|KK⟩ + |K̄K̄⟩)/√2.
pub fn braid_row_images(spec: &BraidSpec) -> Result<[TwoKaonState; 4]> {
    images_of(&spec.unitary_braid().transpose())
}

fn images_of(op: &ComplexMatrix) -> Result<[TwoKaonState; 4]> {
    let mut out = canonical_basis();
    for state in out.iter_mut() {
        *state = state.apply(op)?;
    }
    Ok(out)
}

/// 2×2 operator on the single-kaon space (|K⟩, |K̄⟩).
#[derive(Debug, Clone, PartialEq)]
pub struct SingleKaonOp {
    matrix: ComplexMatrix,
}

impl SingleKaonOp {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != 2 {
            return Err(Error::Validation(format!(
                "single-kaon operator must be 2x2, got {0}x{0}",
                matrix.dim()
            )));
        }
        Ok(Self { matrix })
    }

    /// Ŝ|K⟩ = +|K⟩, Ŝ|K̄⟩ = −|K̄⟩.
    pub fn strangeness() -> Self {
        Self {
            matrix: ComplexMatrix::from_rows([[ONE, ZERO], [ZERO, -ONE]]).expect("2x2"),
        }
    }

    /// (CP)|K⟩ = −|K̄⟩, (CP)|K̄⟩ = −|K⟩.
    pub fn cp() -> Self {
        Self {
            matrix: ComplexMatrix::from_rows([[ZERO, -ONE], [-ONE, ZERO]]).expect("2x2"),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Pair action op⊗op.
pub fn lift_two_kaon(op: &SingleKaonOp) -> ComplexMatrix {
    tensor_product(&op.matrix, &op.matrix).expect("2 x 2 = 4")
}

/// ⟨Ψ|A⊗B|Ψ⟩ for Hermitian A, B.
pub fn correlation(state: &TwoKaonState, a: &SingleKaonOp, b: &SingleKaonOp) -> Result<f64> {
    for op in [a, b] {
        let check = op.matrix.is_hermitian(1e-12);
        if !check.passed {
            return Err(Error::Validation(format!(
                "correlator requires Hermitian operators (residual {:e})",
                check.residual
            )));
        }
    }
    let ab = tensor_product(&a.matrix, &b.matrix)?;
    let v = state.to_vector();
    Ok(v.inner(&ab.apply(&v)?)?.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRow {
    /// 1-based Bell index.
    pub index: usize,
    pub state: TwoKaonState,
    pub strangeness: i8,
    pub cp: i8,
    /// Largest ‖OΦ − λΦ‖ over the two operators.
    pub residual: f64,
}

/// Eigenvalue of `op` on `state`, which must be ±1 within [`EIGEN_TOL`].
fn sign_eigenvalue(op: &ComplexMatrix, state: &TwoKaonState) -> Result<(i8, f64)> {
    let v = state.to_vector();
    let image = op.apply(&v)?;
    for (lambda, value) in [(1i8, 1.0), (-1i8, -1.0)] {
        let residual = image.sub(&v.scale(Complex64::new(value, 0.0)))?.norm();
        if residual <= EIGEN_TOL {
            return Ok((lambda, residual));
        }
    }
    Err(Error::Consistency(format!(
        "state {:?} is not a ±1 eigenvector",
        state.amplitudes()
    )))
}

/// Strangeness and CP eigenvalues of the Bell quartet under the pair lifts.
pub fn cp_s_eigentable() -> Result<[EigenRow; 4]> {
    let s = lift_two_kaon(&SingleKaonOp::strangeness());
    let cp = lift_two_kaon(&SingleKaonOp::cp());
    let bell = bell_quartet();
    let mut rows = Vec::with_capacity(4);
    for (i, state) in bell.states.iter().enumerate() {
        let (sv, sr) = sign_eigenvalue(&s, state)?;
        let (cv, cr) = sign_eigenvalue(&cp, state)?;
        rows.push(EigenRow {
            index: i + 1,
            state: *state,
            strangeness: sv,
            cp: cv,
            residual: sr.max(cr),
        });
    }
    Ok(rows.try_into().expect("four rows"))
}
