//! Dense complex linear algebra for the small dimensions used here (2, 4, 8).
//!
//! Qubit A is the most significant bit of a computational index, so the
//! three-qubit basis state |a b c⟩ sits at index `4a + 2b + c`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Shorthand for a complex number with the given real and imaginary parts.
#[inline]
pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Shorthand for a real complex number.
#[inline]
pub const fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Default convergence threshold for [`herm_eig`].
pub const DEFAULT_EIG_TOL: f64 = 1e-13;

/// Hermiticity tolerance accepted on inputs.
pub const HERMITIAN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![C64::default(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = re(1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries; panics on a length mismatch.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_vec(rows, cols, data.iter().map(|&x| re(x)).collect())
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| re(x)).collect();
        Self::diag(&v)
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(re(s))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::default() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "vector length must equal column count");
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    /// `self · x · self†`
    pub fn sandwich(&self, x: &Self) -> Self {
        self.matmul(x).matmul(&self.adjoint())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry of |M − M†|.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// (M + M†)/2
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![re(0.0), c(0.0, -1.0), c(0.0, 1.0), re(0.0)])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// Subsystem selector over the three qubits A, B, C.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
    C,
    AB,
    AC,
    BC,
}

impl Subsystem {
    pub const ALL: [Subsystem; 6] =
        [Subsystem::A, Subsystem::B, Subsystem::C, Subsystem::AB, Subsystem::AC, Subsystem::BC];

    /// Qubit positions (0 = A) kept by this selector, in ascending order.
    pub fn qubits(self) -> &'static [usize] {
        match self {
            Subsystem::A => &[0],
            Subsystem::B => &[1],
            Subsystem::C => &[2],
            Subsystem::AB => &[0, 1],
            Subsystem::AC => &[0, 2],
            Subsystem::BC => &[1, 2],
        }
    }

    /// The complementary selector.
    pub fn complement(self) -> Subsystem {
        match self {
            Subsystem::A => Subsystem::BC,
            Subsystem::B => Subsystem::AC,
            Subsystem::C => Subsystem::AB,
            Subsystem::AB => Subsystem::C,
            Subsystem::AC => Subsystem::B,
            Subsystem::BC => Subsystem::A,
        }
    }
}

impl std::str::FromStr for Subsystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Subsystem::A),
            "B" => Ok(Subsystem::B),
            "C" => Ok(Subsystem::C),
            "AB" | "BA" => Ok(Subsystem::AB),
            "AC" | "CA" => Ok(Subsystem::AC),
            "BC" | "CB" => Ok(Subsystem::BC),
            _ => Err(Error::UnknownSelector(s.to_string())),
        }
    }
}

#[inline]
fn bit(index: usize, qubit: usize) -> usize {
    (index >> (2 - qubit)) & 1
}

/// Reduced state of an 8×8 three-qubit operator on the kept qubits.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> ComplexMatrix {
    assert!(rho.rows == 8 && rho.cols == 8, "partial_trace expects an 8x8 operator");
    let kept = keep.qubits();
    let traced = keep.complement().qubits();
    let dk = 1 << kept.len();
    let dt = 1 << traced.len();
    let compose = |k: usize, t: usize| -> usize {
        let mut idx = 0;
        for (pos, &q) in kept.iter().enumerate() {
            idx |= ((k >> (kept.len() - 1 - pos)) & 1) << (2 - q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            idx |= ((t >> (traced.len() - 1 - pos)) & 1) << (2 - q);
        }
        idx
    };
    ComplexMatrix::from_fn(dk, dk, |i, j| (0..dt).map(|t| rho[(compose(i, t), compose(j, t))]).sum())
}

/// Relabels qubits so that new qubit `k` is old qubit `order[k]`.
pub fn permute_qubits(rho: &ComplexMatrix, order: [usize; 3]) -> ComplexMatrix {
    assert!(rho.rows == 8 && rho.cols == 8);
    let map = |new: usize| -> usize {
        let mut old = 0;
        for (k, &q) in order.iter().enumerate() {
            old |= bit(new, k) << (2 - q);
        }
        old
    };
    ComplexMatrix::from_fn(8, 8, |i, j| rho[(map(i), map(j))])
}

/// Same relabelling as [`permute_qubits`] applied to a state vector.
pub fn permute_qubits_vec(psi: &[C64], order: [usize; 3]) -> Vec<C64> {
    assert_eq!(psi.len(), 8);
    (0..8)
        .map(|new| {
            let mut old = 0;
            for (k, &q) in order.iter().enumerate() {
                old |= bit(new, k) << (2 - q);
            }
            psi[old]
        })
        .collect()
}

/// Eigenvalues in ascending order with matching unit-norm eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// V·diag(λ)·V†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::real_diag(&self.eigenvalues);
        self.eigenvectors.sandwich(&d)
    }

    /// ‖H·V − V·diag(λ)‖_max
    pub fn residual(&self, h: &ComplexMatrix) -> f64 {
        let hv = h.matmul(&self.eigenvectors);
        let vd = self.eigenvectors.matmul(&ComplexMatrix::real_diag(&self.eigenvalues));
        hv.max_abs_diff(&vd)
    }
}

fn off_diagonal_norm(h: &ComplexMatrix) -> f64 {
    let n = h.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += h[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each rotation zeroes one off-diagonal pair. Sweeps stop once the
/// off-diagonal Frobenius norm drops below `tol · max(1, ‖H‖_F)`.
pub fn herm_eig(h: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::Dimension { expected: "square matrix".into(), found: format!("{}x{}", h.rows, h.cols) });
    }
    let scale = h.max_abs().max(1.0);
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NonHermitian { defect });
    }
    let n = h.rows;
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol * a.frobenius_norm().max(1.0);

    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[(p, q)];
                let mag = b.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = b / mag;
                let theta = 0.5 * (2.0 * mag).atan2(a[(q, q)].re - a[(p, p)].re);
                let (s, co) = theta.sin_cos();
                // Columns p and q of G: (c, -s·e^{-iφ}) and (s, c·e^{-iφ}).
                let g_pp = re(co);
                let g_pq = re(s);
                let g_qp = -phase.conj() * s;
                let g_qq = phase.conj() * co;
                // A ← A·G on columns p, q.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                // A ← G†·A on rows p, q.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = C64::default();
                a[(q, p)] = C64::default();
                a[(p, p)] = re(a[(p, p)].re);
                a[(q, q)] = re(a[(q, q)].re);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
        converged = off_diagonal_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NotConverged { sweeps, off_norm: off_diagonal_norm(&a) });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// Singular values in descending order, by one-sided Jacobi rotations.
///
/// Absolute accuracy is of order machine epsilon times the largest singular
/// value, so small singular values are not polluted by square roots of
/// round-off.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut col: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let norm2 = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    for _ in 0..60 {
        let mut rotated = false;
        for i in 0..cols {
            for j in i + 1..cols {
                let alpha = norm2(&col[i]);
                let beta = norm2(&col[j]);
                let gamma: C64 = (0..rows).map(|k| col[i][k].conj() * col[j][k]).sum();
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for k in 0..rows {
                    let x = col[i][k];
                    let y = col[j][k] * phase;
                    col[i][k] = x * cs - y * sn;
                    col[j][k] = x * sn + y * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = col.iter().map(|v| norm2(v).sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Smallest eigenvalue of a real symmetric 3×3 matrix.
///
/// Uses the trigonometric solution of the characteristic cubic and falls back
/// to [`herm_eig`] when the two lowest roots nearly coincide, where the
/// arccosine loses precision.
pub fn min_eig_sym3(m: &[[f64; 3]; 3]) -> Result<f64> {
    let scale = m.iter().flatten().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let asym = (m[0][1] - m[1][0]).abs().max((m[0][2] - m[2][0]).abs()).max((m[1][2] - m[2][1]).abs());
    if asym > HERMITIAN_TOL * scale {
        return Err(Error::NotSymmetric { defect: asym });
    }
    let p1 = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
    if p1 == 0.0 {
        return Ok(m[0][0].min(m[1][1]).min(m[2][2]));
    }
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b = |i: usize, j: usize| (m[i][j] - if i == j { q } else { 0.0 }) / p;
    let det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let r = (det / 2.0).clamp(-1.0, 1.0);
    if r > 1.0 - 1e-6 {
        let mat = ComplexMatrix::from_fn(3, 3, |i, j| re(m[i][j]));
        return Ok(herm_eig(&mat, DEFAULT_EIG_TOL)?.eigenvalues[0]);
    }
    let phi = r.acos() / 3.0;
    Ok(q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos())
}
