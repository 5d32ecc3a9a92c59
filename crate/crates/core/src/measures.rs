//! Entanglement quantifiers for three-qubit states.
//!
//! Pair concurrences use the Wootters construction on two-qubit reductions.
//! One-to-other squared concurrences (the I-tangle) are exact for pure and
//! rank-2 states; rank-2 states go through the 3×3 M-matrix built from the
//! T tensor of the two leading eigenvectors. Higher-rank states fall back to
//! the eigen-ensemble average, which is an estimate rather than the convex
//! roof.

use std::fmt;

use crate::error::{clipped_sqrt, Error, Result};
use crate::linalg::{
    herm_eig, kron, min_eig_sym3, partial_trace, pauli_y, permute_qubits, permute_qubits_vec, singular_values,
    ComplexMatrix, Subsystem, C64, DEFAULT_EIG_TOL,
};
use crate::states::{DensityMatrix, PureState};

/// Eigenvalues above this count toward the rank.
pub const RANK_TOL: f64 = 1e-9;
/// Largest entry allowed outside the X pattern.
pub const X_TOL: f64 = 1e-10;
/// Eigenvalues below this are skipped by the spectral estimate.
pub const SPECTRAL_SKIP: f64 = 1e-12;
/// Eigenvalue gaps below this are reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Qubit singled out in a one-to-other split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Focus {
    A,
    B,
    C,
}

impl Focus {
    pub const ALL: [Focus; 3] = [Focus::A, Focus::B, Focus::C];

    /// Qubit order that moves the focus to the front.
    fn order(self) -> [usize; 3] {
        match self {
            Focus::A => [0, 1, 2],
            Focus::B => [1, 0, 2],
            Focus::C => [2, 0, 1],
        }
    }

    pub fn subsystem(self) -> Subsystem {
        match self {
            Focus::A => Subsystem::A,
            Focus::B => Subsystem::B,
            Focus::C => Subsystem::C,
        }
    }
}

/// Assembly rule for the M-matrix of a rank-2 state.
///
/// * `Corrected`: M33 = (T1111 − 2·T1122 + T2222)/4, eigenvectors unit-norm.
///   This is the form that follows from expanding a pure state of the
///   eigen-subspace on the Bloch sphere, and it is the default.
/// * `AsPrinted`: M33 = (T1111 − T1122 + T2222)/4, eigenvectors unit-norm.
///   Kept because several published closed forms were evaluated with it.
/// * `EigenvalueWeighted`: as `Corrected`, with each eigenvector scaled by
///   the square root of its eigenvalue.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MConvention {
    #[default]
    Corrected,
    AsPrinted,
    EigenvalueWeighted,
}

impl MConvention {
    pub fn tag(self) -> &'static str {
        match self {
            MConvention::Corrected => "corrected",
            MConvention::AsPrinted => "printed",
            MConvention::EigenvalueWeighted => "weighted",
        }
    }
}

impl std::str::FromStr for MConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(MConvention::Corrected),
            "printed" => Ok(MConvention::AsPrinted),
            "weighted" => Ok(MConvention::EigenvalueWeighted),
            _ => Err(Error::UnknownSelector(s.to_string())),
        }
    }
}

fn check_two_qubit(rho2: &ComplexMatrix) -> Result<()> {
    if rho2.rows() != 4 || rho2.cols() != 4 {
        return Err(Error::Dimension { expected: "4x4".into(), found: format!("{}x{}", rho2.rows(), rho2.cols()) });
    }
    let defect = rho2.hermiticity_defect();
    if defect > 1e-10 {
        return Err(Error::NonHermitian { defect });
    }
    let tr = rho2.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::OutOfRange { name: "trace", value: tr.re, domain: "1" });
    }
    Ok(())
}

/// Eigenvalues of a two-qubit reduction below this are treated as round-off.
pub const WOOTTERS_SKIP: f64 = 1e-14;

/// Wootters concurrence of a two-qubit state.
///
/// With ρ = ΨΨ† over the retained eigenpairs, the square roots of the
/// eigenvalues of ρρ̃ are the singular values of Ψᵀ(σy⊗σy)Ψ, which Jacobi
/// rotations deliver without square roots of round-off eigenvalues.
pub fn wootters_concurrence(rho2: &ComplexMatrix) -> Result<f64> {
    check_two_qubit(rho2)?;
    let eig = herm_eig(&rho2.hermitian_part(), DEFAULT_EIG_TOL)?;
    if eig.eigenvalues[0] < -1e-10 {
        return Err(Error::OutOfRange { name: "eigenvalue", value: eig.eigenvalues[0], domain: ">= 0" });
    }
    let kept: Vec<usize> = (0..4).rev().filter(|&k| eig.eigenvalues[k] > WOOTTERS_SKIP).collect();
    let r = kept.len();
    let psi = ComplexMatrix::from_fn(4, r, |i, j| {
        let k = kept[j];
        eig.eigenvectors[(i, k)] * eig.eigenvalues[k].sqrt()
    });
    let yy = kron(&pauli_y(), &pauli_y());
    let tau = psi.transpose().matmul(&yy).matmul(&psi);
    let c = match r {
        0 => 0.0,
        1 => tau[(0, 0)].norm(),
        _ => {
            let s = singular_values(&tau);
            s[0] - s[1..].iter().sum::<f64>()
        }
    };
    Ok(c.max(0.0))
}

/// Largest modulus among entries outside the main and anti diagonals.
pub fn x_defect(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j && i + j != n - 1 {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

/// Concurrence of an X-shaped two-qubit state.
pub fn xstate_concurrence(rho2: &ComplexMatrix) -> Result<f64> {
    check_two_qubit(rho2)?;
    let defect = x_defect(rho2);
    if defect > X_TOL {
        return Err(Error::NotXShaped { defect });
    }
    let r = |i: usize, j: usize| rho2[(i, j)];
    let outer = r(0, 3).norm() - (r(1, 1).re * r(2, 2).re).max(0.0).sqrt();
    let inner = r(1, 2).norm() - (r(0, 0).re * r(3, 3).re).max(0.0).sqrt();
    Ok(2.0 * outer.max(inner).max(0.0))
}

fn reduced_pure(psi: &PureState, keep: Subsystem) -> ComplexMatrix {
    partial_trace(&ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()), keep)
}

fn det2_hermitian(m: &ComplexMatrix) -> f64 {
    m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr()
}

/// C_{focus|rest} = 2√det ρ_focus for a pure state.
pub fn pure_one_to_other(psi: &PureState, focus: Focus) -> Result<f64> {
    let det = det2_hermitian(&reduced_pure(psi, focus.subsystem()));
    Ok(2.0 * clipped_sqrt(det, "one-to-other determinant")?)
}

fn pure_one_to_other_sq(v: &[C64], focus: Focus) -> f64 {
    let rho = partial_trace(&ComplexMatrix::outer(v, v), focus.subsystem());
    let norm = rho.trace().re;
    (4.0 * det2_hermitian(&rho) / (norm * norm)).max(0.0)
}

/// Extracts the pure state of a rank-1 density matrix.
pub fn as_pure(rho: &DensityMatrix) -> Result<PureState> {
    let purity = rho.purity();
    if purity < 1.0 - 1e-9 {
        return Err(Error::Impure { purity });
    }
    let eig = herm_eig(rho.matrix(), DEFAULT_EIG_TOL)?;
    let v = eig.vector(7);
    let mut amps = [C64::default(); 8];
    amps.copy_from_slice(&v);
    PureState::normalized(amps)
}

/// Components below this modulus are treated as absent when fixing phases.
const GAUGE_TOL: f64 = 1e-13;

fn rotate_real(v: &mut [C64], k: usize) {
    let z = v[k];
    let phase = z.conj() / z.norm();
    v.iter_mut().for_each(|x| *x *= phase);
}

/// Makes both eigenvectors real-positive at the first index where both are
/// present, or each at its own first nonzero component otherwise.
fn fix_gauge(v: &mut [Vec<C64>; 2]) {
    let shared = (0..v[0].len()).find(|&k| v[0][k].norm() > GAUGE_TOL && v[1][k].norm() > GAUGE_TOL);
    for x in v.iter_mut() {
        if let Some(k) = shared.or_else(|| x.iter().position(|z| z.norm() > GAUGE_TOL)) {
            rotate_real(x, k);
        }
    }
}

/// T_ijkl = tr(γ_ij γ̃_kl) for γ_ij = |v_i⟩⟨v_j|, with focus qubit A.
pub fn t_tensor(v: &[Vec<C64>; 2]) -> [[[[C64; 2]; 2]; 2]; 2] {
    let gamma = |i: usize, j: usize| ComplexMatrix::outer(&v[i], &v[j]);
    let mut g_tr = [[C64::default(); 2]; 2];
    let mut g_a: Vec<Vec<ComplexMatrix>> = Vec::new();
    let mut g_bc: Vec<Vec<ComplexMatrix>> = Vec::new();
    let mut g_full: Vec<Vec<ComplexMatrix>> = Vec::new();
    for i in 0..2 {
        let (mut ra, mut rbc, mut rf) = (Vec::new(), Vec::new(), Vec::new());
        for j in 0..2 {
            let g = gamma(i, j);
            g_tr[i][j] = g.trace();
            ra.push(partial_trace(&g, Subsystem::A));
            rbc.push(partial_trace(&g, Subsystem::BC));
            rf.push(g);
        }
        g_a.push(ra);
        g_bc.push(rbc);
        g_full.push(rf);
    }
    let tr_prod = |x: &ComplexMatrix, y: &ComplexMatrix| -> C64 {
        let n = x.rows();
        let mut s = C64::default();
        for r in 0..n {
            for k in 0..n {
                s += x[(r, k)] * y[(k, r)];
            }
        }
        s
    };
    let mut t = [[[[C64::default(); 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    // γ_kl† = γ_lk
                    t[i][j][k][l] =
                        g_tr[i][j] * g_tr[l][k] - tr_prod(&g_a[i][j], &g_a[l][k]) - tr_prod(&g_bc[i][j], &g_bc[l][k])
                            + tr_prod(&g_full[i][j], &g_full[l][k]);
                }
            }
        }
    }
    t
}

/// Real symmetric M-matrix from a T tensor.
pub fn m_matrix(t: &[[[[C64; 2]; 2]; 2]; 2], convention: MConvention) -> [[f64; 3]; 3] {
    let tt = |s: [usize; 4]| t[s[0] - 1][s[1] - 1][s[2] - 1][s[3] - 1];
    let i = C64::new(0.0, 1.0);
    let m11 = (tt([1, 2, 2, 1]) + tt([1, 1, 2, 2]) * 2.0 + tt([2, 1, 1, 2])) * 0.25;
    let m12 = i * 0.25 * (tt([1, 2, 2, 1]) - tt([2, 1, 1, 2]));
    let m13 = (tt([1, 1, 2, 1]) - tt([2, 1, 2, 2]) + tt([1, 1, 1, 2]) - tt([1, 2, 2, 2])) * 0.25;
    let m22 = -(tt([1, 2, 2, 1]) - tt([1, 1, 2, 2]) * 2.0 + tt([2, 1, 1, 2])) * 0.25;
    let m23 = i * 0.25 * (tt([1, 1, 2, 1]) - tt([1, 1, 1, 2]) + tt([2, 1, 2, 2]) - tt([1, 2, 2, 2]));
    let cross = match convention {
        MConvention::AsPrinted => 1.0,
        MConvention::Corrected | MConvention::EigenvalueWeighted => 2.0,
    };
    let m33 = (tt([1, 1, 1, 1]) - tt([1, 1, 2, 2]) * cross + tt([2, 2, 2, 2])) * 0.25;
    [[m11.re, m12.re, m13.re], [m12.re, m22.re, m23.re], [m13.re, m23.re, m33.re]]
}

/// Intermediate quantities of the rank-2 I-tangle.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank2Analysis {
    pub c2: f64,
    /// tr(ρρ̃)
    pub base: f64,
    pub linear_entropy: f64,
    /// Absent for rank-1 input.
    pub m: Option<[[f64; 3]; 3]>,
    pub m_min: Option<f64>,
    /// The two leading eigenvalues were closer than [`DEGENERACY_TOL`], so
    /// the basis-dependent printed assembly was replaced by `Corrected`.
    pub degenerate_fallback: bool,
}

/// Rank-2 I-tangle with its intermediates, for the given focus.
pub fn rank2_analysis(rho: &DensityMatrix, focus: Focus, convention: MConvention) -> Result<Rank2Analysis> {
    let m = permute_qubits(rho.matrix(), focus.order());
    let eig = herm_eig(&m, DEFAULT_EIG_TOL)?;
    let (l1, l2, l3) = (eig.eigenvalues[7], eig.eigenvalues[6], eig.eigenvalues[5]);
    if l3 > RANK_TOL {
        return Err(Error::RankTooHigh { third: l3 });
    }
    let purity = m.matmul(&m).trace().re;
    let linear_entropy = (1.0 - purity).max(0.0);
    let ra = partial_trace(&m, Subsystem::A);
    let rbc = partial_trace(&m, Subsystem::BC);
    let base = 1.0 - ra.matmul(&ra).trace().re - rbc.matmul(&rbc).trace().re + purity;
    if l2 <= RANK_TOL {
        let c2 = pure_one_to_other_sq(&eig.vector(7), Focus::A);
        return Ok(Rank2Analysis { c2, base, linear_entropy, m: None, m_min: None, degenerate_fallback: false });
    }
    let mut v = [eig.vector(7), eig.vector(6)];
    fix_gauge(&mut v);
    let mut convention = convention;
    let mut degenerate_fallback = false;
    if convention == MConvention::AsPrinted && l1 - l2 < DEGENERACY_TOL {
        convention = MConvention::Corrected;
        degenerate_fallback = true;
    }
    if convention == MConvention::EigenvalueWeighted {
        for (x, l) in v.iter_mut().zip([l1, l2]) {
            let s = l.max(0.0).sqrt();
            x.iter_mut().for_each(|z| *z *= s);
        }
    }
    let mm = m_matrix(&t_tensor(&v), convention);
    let m_min = min_eig_sym3(&mm)?;
    let c2 = (base + 2.0 * m_min * linear_entropy).clamp(0.0, 1.0);
    Ok(Rank2Analysis { c2, base, linear_entropy, m: Some(mm), m_min: Some(m_min), degenerate_fallback })
}

/// C²_{focus|rest} of a state of rank at most 2 with the default assembly.
pub fn rank2_itangle(rho: &DensityMatrix, focus: Focus) -> Result<f64> {
    Ok(rank2_analysis(rho, focus, MConvention::Corrected)?.c2)
}

fn xshaped_8(m: &ComplexMatrix) -> Result<()> {
    let defect = x_defect(m);
    if defect > X_TOL {
        Err(Error::NotXShaped { defect })
    } else {
        Ok(())
    }
}

/// Genuine tripartite concurrence of an X-shaped three-qubit state.
pub fn gtc_xstate(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    xshaped_8(m)?;
    let n: Vec<f64> = (0..4).map(|i| m[(i, i)].re.max(0.0)).collect();
    let mm: Vec<f64> = (0..4).map(|i| m[(7 - i, 7 - i)].re.max(0.0)).collect();
    let best = (0..4)
        .map(|i| {
            let nu: f64 = (0..4).filter(|&j| j != i).map(|j| (n[j] * mm[j]).sqrt()).sum();
            m[(i, 7 - i)].norm() - nu
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(2.0 * best.max(0.0))
}

/// Smallest one-to-other concurrence of a pure state.
pub fn gtc_pure(psi: &PureState) -> Result<f64> {
    let mut best = f64::INFINITY;
    for f in Focus::ALL {
        best = best.min(pure_one_to_other(psi, f)?);
    }
    Ok(best)
}

fn pair_concurrence_pure(psi: &PureState, pair: Subsystem) -> Result<f64> {
    wootters_concurrence(&reduced_pure(psi, pair))
}

/// τ = C²_{A|BC} − C²_AB − C²_AC for a pure state.
pub fn residual_entanglement_pure(psi: &PureState) -> Result<f64> {
    let c_a = pure_one_to_other(psi, Focus::A)?;
    let c_ab = pair_concurrence_pure(psi, Subsystem::AB)?;
    let c_ac = pair_concurrence_pure(psi, Subsystem::AC)?;
    let tau = c_a * c_a - c_ab * c_ab - c_ac * c_ac;
    if tau < -1e-9 {
        return Err(Error::NegativeRadicand { value: tau, context: "residual entanglement" });
    }
    Ok(tau.max(0.0))
}

/// Concurrence fill from the three squared one-to-other concurrences.
pub fn fill_from_sides(a: f64, b: f64, c: f64) -> Result<f64> {
    let q = 0.5 * (a + b + c);
    let radicand = 16.0 / 3.0 * q * (q - a) * (q - b) * (q - c);
    Ok(clipped_sqrt(radicand, "concurrence fill")?.sqrt())
}

/// Concurrence fill of a pure state.
pub fn concurrence_fill(psi: &PureState) -> Result<f64> {
    let s: Vec<f64> = Focus::ALL.iter().map(|&f| pure_one_to_other(psi, f).map(|x| x * x)).collect::<Result<_>>()?;
    fill_from_sides(s[0], s[1], s[2])
}

/// Concurrence fill written through τ and the squared pair concurrences.
pub fn concurrence_fill_tau_form(tau: f64, c2_ab: f64, c2_ac: f64, c2_bc: f64) -> Result<f64> {
    let radicand =
        (tau + 2.0 / 3.0 * (c2_ab + c2_ac + c2_bc)) * (tau + 2.0 * c2_ab) * (tau + 2.0 * c2_ac) * (tau + 2.0 * c2_bc);
    Ok(clipped_sqrt(radicand, "concurrence fill")?.sqrt())
}

/// Σ λ_i C²_{focus}(|λ_i⟩) over the eigen-ensemble of ρ.
pub fn spectral_itangle(rho: &DensityMatrix, focus: Focus) -> Result<f64> {
    let eig = herm_eig(rho.matrix(), DEFAULT_EIG_TOL)?;
    Ok(eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > SPECTRAL_SKIP)
        .map(|(k, &l)| l * pure_one_to_other_sq(&eig.vector(k), focus))
        .sum())
}

/// 1 − tr ρ²
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    (1.0 - rho.purity()).max(0.0)
}

/// Route taken by [`full_report`] for the one-to-other quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasurePath {
    Pure,
    Rank2(MConvention),
    Spectral,
}

impl fmt::Display for MeasurePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurePath::Pure => f.write_str("pure"),
            MeasurePath::Rank2(MConvention::Corrected) => f.write_str("rank2"),
            MeasurePath::Rank2(c) => write!(f, "rank2-{}", c.tag()),
            MeasurePath::Spectral => f.write_str("spectral"),
        }
    }
}

/// Every applicable measure of one state.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureReport {
    pub c_ab: f64,
    pub c_ac: f64,
    pub c_bc: f64,
    pub c2_a_bc: f64,
    pub c2_b_ac: f64,
    pub c2_c_ab: f64,
    pub tau: Option<f64>,
    pub gtc: Option<f64>,
    pub fill: Option<f64>,
    pub linear_entropy: f64,
    pub path: MeasurePath,
    pub warnings: Vec<String>,
}

impl MeasureReport {
    pub const CSV_COLUMNS: [&'static str; 11] =
        ["c_ab", "c_ac", "c_bc", "c2_a_bc", "c2_b_ac", "c2_c_ab", "tau", "gtc", "fill", "s_lin", "path"];

    /// Field values in [`Self::CSV_COLUMNS`] order, 17 significant digits,
    /// absent fields empty.
    pub fn csv_fields(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(format_number).unwrap_or_default();
        vec![
            format_number(self.c_ab),
            format_number(self.c_ac),
            format_number(self.c_bc),
            format_number(self.c2_a_bc),
            format_number(self.c2_b_ac),
            format_number(self.c2_c_ab),
            opt(self.tau),
            opt(self.gtc),
            opt(self.fill),
            format_number(self.linear_entropy),
            self.path.to_string(),
        ]
    }

    pub fn c2(&self, focus: Focus) -> f64 {
        match focus {
            Focus::A => self.c2_a_bc,
            Focus::B => self.c2_b_ac,
            Focus::C => self.c2_c_ab,
        }
    }
}

/// Scientific notation with 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// [`full_report_with`] using the default M-matrix assembly.
pub fn full_report(rho: &DensityMatrix) -> Result<MeasureReport> {
    full_report_with(rho, MConvention::Corrected)
}

/// Evaluates every measure, choosing the pure, rank-2 or spectral route by
/// the measured rank.
pub fn full_report_with(rho: &DensityMatrix, convention: MConvention) -> Result<MeasureReport> {
    let m = rho.matrix();
    let eig = herm_eig(m, DEFAULT_EIG_TOL)?;
    let (l2, l3) = (eig.eigenvalues[6], eig.eigenvalues[5]);
    let mut warnings = Vec::new();
    for (name, l) in [("second", l2), ("third", l3)] {
        if l > RANK_TOL * 1e-2 && l < RANK_TOL * 1e2 {
            warnings.push(format!("{name} eigenvalue {l:e} near rank threshold {RANK_TOL:e}"));
        }
    }
    let pair = |s: Subsystem| wootters_concurrence(&partial_trace(m, s));
    let (c_ab, c_ac, c_bc) = (pair(Subsystem::AB)?, pair(Subsystem::AC)?, pair(Subsystem::BC)?);
    let linear_entropy = linear_entropy(rho);
    let xshaped = x_defect(m) <= X_TOL;

    if l2 <= RANK_TOL {
        let mut amps = [C64::default(); 8];
        amps.copy_from_slice(&eig.vector(7));
        let psi = PureState::normalized(amps)?;
        let c: Vec<f64> = Focus::ALL.iter().map(|&f| pure_one_to_other(&psi, f)).collect::<Result<_>>()?;
        let tau = (c[0] * c[0] - c_ab * c_ab - c_ac * c_ac).max(0.0);
        let fill = fill_from_sides(c[0] * c[0], c[1] * c[1], c[2] * c[2])?;
        return Ok(MeasureReport {
            c_ab,
            c_ac,
            c_bc,
            c2_a_bc: c[0] * c[0],
            c2_b_ac: c[1] * c[1],
            c2_c_ab: c[2] * c[2],
            tau: Some(tau),
            gtc: Some(c[0].min(c[1]).min(c[2])),
            fill: Some(fill),
            linear_entropy,
            path: MeasurePath::Pure,
            warnings,
        });
    }

    let gtc = if xshaped { Some(gtc_xstate(rho)?) } else { None };
    let (c2, path) = if l3 <= RANK_TOL {
        let mut c2 = [0.0; 3];
        for (k, f) in Focus::ALL.iter().enumerate() {
            let a = rank2_analysis(rho, *f, convention)?;
            if a.degenerate_fallback {
                warnings.push(format!("degenerate spectrum: focus {f:?} used the corrected M-matrix"));
            }
            c2[k] = a.c2;
        }
        (c2, MeasurePath::Rank2(convention))
    } else {
        let vals = &eig.eigenvalues;
        if vals.windows(2).any(|w| w[0] > SPECTRAL_SKIP && w[1] - w[0] < DEGENERACY_TOL) {
            warnings.push("degenerate spectrum: spectral estimate depends on the eigenbasis".into());
        }
        let mut c2 = [0.0; 3];
        for (k, f) in Focus::ALL.iter().enumerate() {
            c2[k] = spectral_itangle(rho, *f)?;
        }
        (c2, MeasurePath::Spectral)
    };
    Ok(MeasureReport {
        c_ab,
        c_ac,
        c_bc,
        c2_a_bc: c2[0],
        c2_b_ac: c2[1],
        c2_c_ab: c2[2],
        tau: None,
        gtc,
        fill: None,
        linear_entropy,
        path,
        warnings,
    })
}

/// Same relabelling as the focus permutation, exposed for tests.
pub fn move_focus_first(psi: &PureState, focus: Focus) -> PureState {
    let v = permute_qubits_vec(psi.amplitudes(), focus.order());
    let mut amps = [C64::default(); 8];
    amps.copy_from_slice(&v);
    PureState::new(amps).expect("permutation preserves the norm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply, pdc, Placement};
    use crate::linalg::re;
    use crate::states::{ghz, gw, mix_ghz_extremes, w};

    fn bell() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = [re(s), re(0.0), re(0.0), re(s)];
        ComplexMatrix::outer(&v, &v)
    }

    #[test]
    fn wootters_examples() {
        assert!((wootters_concurrence(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(wootters_concurrence(&mixed).unwrap().abs() < 1e-12);
        let bc = partial_trace(w().density().matrix(), Subsystem::BC);
        assert!((wootters_concurrence(&bc).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((xstate_concurrence(&bc).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(wootters_concurrence(&ComplexMatrix::identity(4)).is_err());
    }

    #[test]
    fn xstate_rejects_non_x() {
        let mut m = ComplexMatrix::identity(4).scale_real(0.25);
        m[(0, 1)] = re(0.1);
        m[(1, 0)] = re(0.1);
        assert!(matches!(xstate_concurrence(&m), Err(Error::NotXShaped { .. })));
    }

    #[test]
    fn one_to_other_examples() {
        for f in Focus::ALL {
            assert!((pure_one_to_other(&ghz(), f).unwrap() - 1.0).abs() < 1e-15);
            assert_eq!(pure_one_to_other(&PureState::basis(0), f).unwrap(), 0.0);
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(pure_one_to_other(&gw(s, s).unwrap(), Focus::A).unwrap() < 1e-7);
    }

    #[test]
    fn ghz_and_w_reports() {
        let r = full_report(&ghz().density()).unwrap();
        assert_eq!(r.path, MeasurePath::Pure);
        assert!((r.c2_a_bc - 1.0).abs() < 1e-12 && (r.tau.unwrap() - 1.0).abs() < 1e-12);
        assert!((r.fill.unwrap() - 1.0).abs() < 1e-12 && r.c_ab < 1e-12);
        let r = full_report(&w().density()).unwrap();
        assert!((r.c_ab - 2.0 / 3.0).abs() < 1e-12 && r.tau.unwrap().abs() < 1e-9);
    }

    #[test]
    fn biseparable_fill_vanishes() {
        // |0⟩ ⊗ (|00⟩ + |11⟩)/√2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = [C64::default(); 8];
        amps[0] = re(s);
        amps[3] = re(s);
        let psi = PureState::new(amps).unwrap();
        assert!(concurrence_fill(&psi).unwrap() < 1e-7);
        assert!(gtc_pure(&psi).unwrap() < 1e-7);
    }

    #[test]
    fn rank2_matches_pure_and_known_values() {
        let psi = gw(0.3, 0.5).unwrap();
        let c = pure_one_to_other(&psi, Focus::B).unwrap();
        assert!((rank2_itangle(&psi.density(), Focus::B).unwrap() - c * c).abs() < 1e-12);
        let out = apply(&w().density(), &pdc(0.0).unwrap(), Placement::FirstQubit);
        assert!((rank2_itangle(&out, Focus::A).unwrap() - 8.0 / 9.0).abs() < 1e-12);
        let mix = mix_ghz_extremes(0.3, 0.0).unwrap();
        let a = rank2_analysis(&mix, Focus::A, MConvention::Corrected).unwrap();
        assert!((a.m_min.unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn rank_three_is_rejected() {
        let (g, wv, e) = (ghz().density(), w().density(), PureState::basis(3).density());
        let m = DensityMatrix::mixture(&[(0.5, &g), (0.3, &wv), (0.2, &e)]).unwrap();
        assert!(matches!(rank2_itangle(&m, Focus::A), Err(Error::RankTooHigh { .. })));
        let r = full_report(&m).unwrap();
        assert_eq!(r.path, MeasurePath::Spectral);
        assert!(r.tau.is_none() && r.fill.is_none());
    }

    #[test]
    fn xstate_gtc_examples() {
        assert!((gtc_xstate(&ghz().density()).unwrap() - 1.0).abs() < 1e-15);
        let diag = mix_ghz_extremes(1.0, 0.0).unwrap();
        assert_eq!(gtc_xstate(&diag).unwrap(), 0.0);
        assert!(gtc_xstate(&w().density()).is_err());
    }

    #[test]
    fn entropy_and_csv() {
        assert_eq!(linear_entropy(&ghz().density()), 0.0);
        assert!((linear_entropy(&DensityMatrix::maximally_mixed()) - 0.875).abs() < 1e-15);
        let r = full_report(&DensityMatrix::maximally_mixed()).unwrap();
        let fields = r.csv_fields();
        assert_eq!(fields.len(), MeasureReport::CSV_COLUMNS.len());
        assert_eq!(fields[6], "");
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
        assert_eq!(MeasurePath::Rank2(MConvention::AsPrinted).to_string(), "rank2-printed");
    }
}
