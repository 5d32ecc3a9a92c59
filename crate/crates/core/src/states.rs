//! Initial states and density-matrix validation.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{check_range, Error, Result};
use crate::linalg::{herm_eig, re, ComplexMatrix, C64, DEFAULT_EIG_TOL};

/// Hermiticity and trace tolerance for a valid density matrix.
pub const STATE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted before a matrix is declared non-PSD.
pub const PSD_TOL: f64 = -1e-10;

/// Normalised three-qubit pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: [C64; 8],
}

impl PureState {
    pub fn new(amplitudes: [C64; 8]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::OutOfRange { name: "norm", value: norm.sqrt(), domain: "unit norm" });
        }
        Ok(Self { amplitudes })
    }

    /// Normalises an arbitrary nonzero vector.
    pub fn normalized(mut amplitudes: [C64; 8]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::OutOfRange { name: "norm", value: norm, domain: "nonzero" });
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn basis(index: usize) -> Self {
        let mut amplitudes = [C64::default(); 8];
        amplitudes[index] = re(1.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[C64; 8] {
        &self.amplitudes
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix { matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes) }
    }
}

/// Which density-matrix invariant failed, and by how much.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Shape { rows: usize, cols: usize },
    NonFinite,
    NonHermitian { defect: f64 },
    Trace { trace: f64 },
    NegativeEigenvalue { min_eigenvalue: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { rows, cols } => write!(f, "expected 8x8, got {rows}x{cols}"),
            Violation::NonFinite => write!(f, "non-finite entry"),
            Violation::NonHermitian { defect } => write!(f, "Hermiticity defect {defect:e}"),
            Violation::Trace { trace } => write!(f, "trace = {trace}"),
            Violation::NegativeEigenvalue { min_eigenvalue } => {
                write!(f, "smallest eigenvalue {min_eigenvalue:e} below {PSD_TOL:e}")
            }
        }
    }
}

/// Validated 8×8 three-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn maximally_mixed() -> Self {
        Self { matrix: ComplexMatrix::identity(8).scale_real(0.125) }
    }

    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    /// Convex combination Σ w_k ρ_k; weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let mut total = 0.0;
        let mut m = ComplexMatrix::zeros(8, 8);
        for (w, rho) in parts {
            check_range("weight", *w, 0.0, 1.0, "[0, 1]")?;
            total += w;
            m = &m + &rho.matrix.scale_real(*w);
        }
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::OutOfRange { name: "weight sum", value: total, domain: "1" });
        }
        validate(m)
    }

    /// Wraps a matrix known to be a valid state up to round-off from a trusted
    /// map (unitary conjugation, CPTP channel). Hermiticity is restored exactly.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self { matrix: matrix.hermitian_part() }
    }
}

/// Checks the density-matrix invariants, reporting the first failure.
pub fn validate(matrix: ComplexMatrix) -> Result<DensityMatrix> {
    check(&matrix).map_err(Error::InvalidState)?;
    Ok(DensityMatrix { matrix: matrix.hermitian_part() })
}

fn check(m: &ComplexMatrix) -> std::result::Result<(), Violation> {
    if m.rows() != 8 || m.cols() != 8 {
        return Err(Violation::Shape { rows: m.rows(), cols: m.cols() });
    }
    if m.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Violation::NonFinite);
    }
    let defect = m.hermiticity_defect();
    if defect > STATE_TOL {
        return Err(Violation::NonHermitian { defect });
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Violation::Trace { trace: tr.re });
    }
    let eig = herm_eig(&m.hermitian_part(), DEFAULT_EIG_TOL).map_err(|_| Violation::NonHermitian { defect })?;
    if eig.eigenvalues[0] < PSD_TOL {
        return Err(Violation::NegativeEigenvalue { min_eigenvalue: eig.eigenvalues[0] });
    }
    Ok(())
}

/// a|000⟩ + √(1−a²)|111⟩
pub fn gghz(a: f64) -> Result<PureState> {
    check_range("a", a, 0.0, 1.0, "[0, 1]")?;
    let mut amps = [C64::default(); 8];
    amps[0] = re(a);
    amps[7] = re((1.0 - a * a).max(0.0).sqrt());
    PureState::new(amps)
}

pub fn ghz() -> PureState {
    gghz(FRAC_1_SQRT_2).expect("1/sqrt(2) is in range")
}

/// a|001⟩ + b|010⟩ + √(1−a²−b²)|100⟩
pub fn gw(a: f64, b: f64) -> Result<PureState> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::OutOfRange { name: "a", value: a, domain: "finite" });
    }
    let rest = 1.0 - a * a - b * b;
    if rest < -STATE_TOL {
        return Err(Error::OutOfRange { name: "a^2 + b^2", value: a * a + b * b, domain: "<= 1" });
    }
    let mut amps = [C64::default(); 8];
    amps[1] = re(a);
    amps[2] = re(b);
    amps[4] = re(rest.max(0.0).sqrt());
    PureState::new(amps)
}

pub fn w() -> PureState {
    let s = 1.0 / 3f64.sqrt();
    gw(s, s).expect("W amplitudes are normalised")
}

/// (|011⟩ + |101⟩ + |110⟩)/√3
pub fn wbar() -> PureState {
    let s = re(1.0 / 3f64.sqrt());
    let mut amps = [C64::default(); 8];
    amps[3] = s;
    amps[5] = s;
    amps[6] = s;
    PureState::new(amps).expect("normalised")
}

/// cos θ |W⟩ + sin θ e^{iφ} |W̄⟩
pub fn wwbar(theta: f64, phi: f64) -> Result<PureState> {
    if !(theta.is_finite() && phi.is_finite()) {
        return Err(Error::OutOfRange { name: "theta", value: theta, domain: "finite" });
    }
    let (wv, wb) = (w(), wbar());
    let phase = C64::from_polar(theta.sin(), phi);
    let mut amps = [C64::default(); 8];
    for (k, z) in amps.iter_mut().enumerate() {
        *z = wv.amplitudes[k] * theta.cos() + wb.amplitudes[k] * phase;
    }
    PureState::new(amps)
}

/// (1−w1−w2)|GHZ⟩⟨GHZ| + w1|000⟩⟨000| + w2|111⟩⟨111|
pub fn mix_ghz_extremes(w1: f64, w2: f64) -> Result<DensityMatrix> {
    check_range("w1", w1, 0.0, 1.0, "[0, 1]")?;
    check_range("w2", w2, 0.0, 1.0, "[0, 1]")?;
    if w1 + w2 > 1.0 + STATE_TOL {
        return Err(Error::OutOfRange { name: "w1 + w2", value: w1 + w2, domain: "<= 1" });
    }
    let g = ghz().density();
    let zero = PureState::basis(0).density();
    let one = PureState::basis(7).density();
    let wg = (1.0 - w1 - w2).max(0.0);
    DensityMatrix::mixture(&[(wg, &g), (w1, &zero), (w2, &one)])
}

/// (1−w)|W⟩⟨W| + w|000⟩⟨000|
pub fn mix_w_vacuum(wt: f64) -> Result<DensityMatrix> {
    check_range("w", wt, 0.0, 1.0, "[0, 1]")?;
    DensityMatrix::mixture(&[(1.0 - wt, &w().density()), (wt, &PureState::basis(0).density())])
}

/// (1−w)|GHZ⟩⟨GHZ| + w|000⟩⟨000|
pub fn mix_ghz_vacuum(wt: f64) -> Result<DensityMatrix> {
    mix_ghz_extremes(wt, 0.0)
}
