//! Analytic results for the tractable scenarios.
//!
//! Each function encodes one family of closed-form expressions. The numeric
//! pipeline in [`crate::experiments`] is validated against these.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use crate::channels::dephasing_lambda;
use crate::error::{check_range, clipped_sqrt, Error, Result};
use crate::linalg::{re, ComplexMatrix};
use crate::measures::{rank2_analysis, Focus, MConvention};
use crate::states::validate;

/// Analytically solved scenario families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    /// gGHZ under Milburn evolution. Parameters: a, B, gamma, t.
    MilburnGGHZ,
    /// GHZ mixed with |000⟩ and |111⟩ under Milburn evolution. Parameters: w1, w2, B, gamma, t.
    MilburnGhzMixture,
    /// W with phase damping on the first qubit. Parameter: d.
    Pdc1W,
    /// W mixed with |000⟩, amplitude damping on all qubits. Parameters: d, w.
    AdcWVacuumMix,
    /// gGHZ with amplitude damping on the first qubit. Parameters: a, d.
    Adc1GGHZ,
    /// gGHZ with amplitude damping on the third qubit. Parameters: a, d.
    Adc3GGHZ,
    /// GHZ mixed with |000⟩, phase damping on all qubits. Parameters: d, w.
    PdcGhzVacuumMix,
    /// gGHZ under telegraph dephasing on all qubits. Parameters: a, b, tau, t.
    NonMarkovGGHZ,
    /// GHZ mixed with |000⟩ under telegraph dephasing. Parameters: w, b, tau, t.
    NonMarkovGhzMixture,
    /// cos θ|W⟩ + sin θ|W̄⟩ under generalized amplitude damping on all qubits.
    /// Parameters: theta ∈ {0, π/4, π/2}, d, p.
    GadcWWbar,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 10] = [
        ScenarioId::MilburnGGHZ,
        ScenarioId::MilburnGhzMixture,
        ScenarioId::Pdc1W,
        ScenarioId::AdcWVacuumMix,
        ScenarioId::Adc1GGHZ,
        ScenarioId::Adc3GGHZ,
        ScenarioId::PdcGhzVacuumMix,
        ScenarioId::NonMarkovGGHZ,
        ScenarioId::NonMarkovGhzMixture,
        ScenarioId::GadcWWbar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::MilburnGGHZ => "MilburnGGHZ",
            ScenarioId::MilburnGhzMixture => "MilburnGhzMixture",
            ScenarioId::Pdc1W => "Pdc1W",
            ScenarioId::AdcWVacuumMix => "AdcWVacuumMix",
            ScenarioId::Adc1GGHZ => "Adc1GGHZ",
            ScenarioId::Adc3GGHZ => "Adc3GGHZ",
            ScenarioId::PdcGhzVacuumMix => "PdcGhzVacuumMix",
            ScenarioId::NonMarkovGGHZ => "NonMarkovGGHZ",
            ScenarioId::NonMarkovGhzMixture => "NonMarkovGhzMixture",
            ScenarioId::GadcWWbar => "GadcWWbar",
        }
    }

    /// Names of the scenario parameters.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            ScenarioId::MilburnGGHZ => &["a", "B", "gamma", "t"],
            ScenarioId::MilburnGhzMixture => &["w1", "w2", "B", "gamma", "t"],
            ScenarioId::Pdc1W => &["d"],
            ScenarioId::AdcWVacuumMix | ScenarioId::PdcGhzVacuumMix => &["d", "w"],
            ScenarioId::Adc1GGHZ | ScenarioId::Adc3GGHZ => &["a", "d"],
            ScenarioId::NonMarkovGGHZ => &["a", "b", "tau", "t"],
            ScenarioId::NonMarkovGhzMixture => &["w", "b", "tau", "t"],
            ScenarioId::GadcWWbar => &["theta", "d", "p"],
        }
    }

    /// M-matrix assembly under which the closed forms of this scenario were
    /// derived.
    pub fn convention(self) -> MConvention {
        match self {
            ScenarioId::Pdc1W | ScenarioId::NonMarkovGGHZ | ScenarioId::NonMarkovGhzMixture => MConvention::AsPrinted,
            _ => MConvention::Corrected,
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ScenarioId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownSelector(s.to_string()))
    }
}

/// Squared one-to-other concurrence and GTC.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangleGtc {
    pub c2_a_bc: f64,
    pub gtc: f64,
}

fn milburn_decay(b_field: f64, gamma: f64, t: f64) -> f64 {
    (-4.0 * gamma * t * (3.0 * b_field / gamma).sin().powi(2)).exp()
}

/// Milburn-evolved gGHZ (w1 = w2 = 0) or GHZ/|000⟩/|111⟩ mixture (a = 1/√2).
pub fn milburn_closed(a: f64, b_field: f64, gamma: f64, t: f64, w1: f64, w2: f64) -> Result<TangleGtc> {
    check_range("a", a, 0.0, 1.0, "[0, 1]")?;
    check_range("w1", w1, 0.0, 1.0, "[0, 1]")?;
    check_range("w2", w2, 0.0, 1.0, "[0, 1]")?;
    if w1 + w2 > 1.0 {
        return Err(Error::OutOfRange { name: "w1 + w2", value: w1 + w2, domain: "<= 1" });
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::OutOfRange { name: "gamma", value: gamma, domain: "(0, inf)" });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::OutOfRange { name: "t", value: t, domain: "[0, inf)" });
    }
    if w1 + w2 > 0.0 && (a - FRAC_1_SQRT_2).abs() > 1e-12 {
        return Err(Error::OutOfRange { name: "a", value: a, domain: "1/sqrt(2) for mixtures" });
    }
    let decay = milburn_decay(b_field, gamma, t);
    let weight = if w1 + w2 > 0.0 { 1.0 - w1 - w2 } else { 2.0 * a * (1.0 - a * a).sqrt() };
    Ok(TangleGtc { c2_a_bc: weight * weight * decay, gtc: weight * decay.sqrt() })
}

/// One-to-other and pair quantities of W with first-qubit phase damping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pdc1WClosed {
    pub c2_a_bc: f64,
    pub c2_b_ac: f64,
    pub c2_ab: f64,
    pub c2_bc: f64,
    pub m_min: f64,
}

pub fn pdc1_w_closed(d: f64) -> Result<Pdc1WClosed> {
    check_range("d", d, 0.0, 1.0, "[0, 1]")?;
    let root_a = ((32.0 * d - 41.0) * (32.0 * d - 33.0)).sqrt();
    let m_min = (root_a - 1.0) / (8.0 * (8.0 * d - 9.0));
    let c2_a_bc = d * (root_a - 1.0) / (9.0 * (8.0 * d - 9.0)) - 4.0 * (d - 2.0) / 9.0;
    let root_b = (1296.0 * d * d - 2792.0 * d + 1497.0).sqrt();
    let c2_b_ac =
        d * (root_b + 4.0 * d - 5.0) / (18.0 * (8.0 * d - 9.0)) - 2.0 / 9.0 * (2.0 * d + (1.0 - d).sqrt() - 5.0);
    Ok(Pdc1WClosed { c2_a_bc, c2_b_ac, c2_ab: 4.0 * (1.0 - d) / 9.0, c2_bc: 4.0 / 9.0, m_min })
}

/// W/|000⟩ mixture with amplitude damping on all qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdcWVacuumClosed {
    pub c2_a_bc: f64,
    /// (4/9)(1−d)²(1−w)². Compared against the squared pair concurrence.
    pub c2_pair: f64,
    pub s_lin: f64,
}

pub fn adc_w_vacuum_closed(d: f64, w: f64) -> Result<AdcWVacuumClosed> {
    check_range("d", d, 0.0, 1.0, "[0, 1]")?;
    check_range("w", w, 0.0, 1.0, "[0, 1]")?;
    let k = (1.0 - d).powi(2) * (1.0 - w).powi(2);
    let s_lin = 2.0 * d * (1.0 - d) + (4.0 * d * d - 6.0 * d + 2.0) * w - 2.0 * (1.0 - d).powi(2) * w * w;
    Ok(AdcWVacuumClosed { c2_a_bc: 8.0 / 9.0 * k, c2_pair: 4.0 / 9.0 * k, s_lin })
}

/// Which qubit the amplitude damping acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdcVariant {
    First,
    Third,
}

pub fn gghz_adc_closed(a: f64, d: f64, variant: AdcVariant) -> Result<TangleGtc> {
    check_range("a", a, 0.0, 1.0, "[0, 1]")?;
    check_range("d", d, 0.0, 1.0, "[0, 1]")?;
    let a2 = a * a;
    Ok(match variant {
        AdcVariant::First => {
            let c2 = 4.0 * a2 * (1.0 - a2) * (1.0 - d);
            TangleGtc { c2_a_bc: c2, gtc: c2.sqrt() }
        }
        AdcVariant::Third => {
            TangleGtc { c2_a_bc: 2.0 * a2 * (1.0 - a2) * (2.0 - d), gtc: 2.0 * a * ((1.0 - a2) * (1.0 - d)).sqrt() }
        }
    })
}

/// GHZ/|000⟩ mixture with phase damping on all qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhzVacuumPdcClosed {
    pub gmc: f64,
    pub s_lin: f64,
    /// Leading terms of a small-w expansion; the remainder is O(w⁴).
    pub c2_smallw: f64,
}

pub fn ghz_vacuum_pdc_closed(d: f64, w: f64) -> Result<GhzVacuumPdcClosed> {
    check_range("d", d, 0.0, 1.0, "[0, 1]")?;
    check_range("w", w, 0.0, 1.0, "[0, 1]")?;
    let k = (1.0 - d).powi(3);
    Ok(GhzVacuumPdcClosed {
        gmc: (1.0 - d).powf(1.5) * (1.0 - w),
        s_lin: 0.5 * (1.0 - k) + k * w - 0.5 * (1.0 + k) * w * w,
        c2_smallw: k * (1.0 - w).powi(2),
    })
}

/// Initial state of the telegraph-dephasing scenarios.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonMarkovVariant {
    PureGGHZ,
    GhzMixture,
}

/// Closed-form telegraph-dephasing results, with Λ(t) attached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonMarkovClosed {
    pub c2_a_bc: f64,
    pub gtc: f64,
    pub lambda: f64,
    pub m_min: f64,
}

/// m_min(t) of the dephased GHZ/|000⟩ mixture as a function of Λ³.
pub fn nonmarkov_mixture_m_min(w: f64, lambda: f64) -> f64 {
    let l6 = lambda.powi(6);
    let u = (1.0 - w).powi(2);
    let denom = 8.0 * (u * l6 + w * w);
    if denom == 0.0 {
        return -0.5;
    }
    let root = (40.0 * u * w * w * l6 + 16.0 * u * u * l6 * l6 + 9.0 * w.powi(4)).sqrt();
    (w * w - root) / denom
}

/// Telegraph dephasing on all qubits.
///
/// `a` is used by `PureGGHZ` and `w` by `GhzMixture`. For the pure family
/// m_min is taken from the rank-2 machinery applied to the closed-form image
/// state, except at a = 1/√2 where m_min = −1/2 and c2 = Λ⁶.
pub fn nonmarkov_closed(
    a: f64,
    w: f64,
    b: f64,
    tau: f64,
    t: f64,
    variant: NonMarkovVariant,
) -> Result<NonMarkovClosed> {
    let lambda = dephasing_lambda(b, tau, t)?;
    let l3 = lambda.powi(3);
    let l6 = l3 * l3;
    match variant {
        NonMarkovVariant::PureGGHZ => {
            check_range("a", a, 0.0, 1.0, "[0, 1]")?;
            let a2 = a * a;
            let gtc = 2.0 * a * (1.0 - a2).sqrt() * l3.abs();
            if (a - FRAC_1_SQRT_2).abs() < 1e-12 {
                return Ok(NonMarkovClosed { c2_a_bc: l6, gtc, lambda, m_min: -0.5 });
            }
            let coh = a * (1.0 - a2).sqrt() * l3;
            let mut m = ComplexMatrix::zeros(8, 8);
            m[(0, 0)] = re(a2);
            m[(7, 7)] = re(1.0 - a2);
            m[(0, 7)] = re(coh);
            m[(7, 0)] = re(coh);
            let analysis = rank2_analysis(&validate(m)?, Focus::A, MConvention::AsPrinted)?;
            let m_min = analysis.m_min.unwrap_or(0.0);
            let c2 = 2.0 * a2 * (1.0 - a2) * (1.0 + l6 + 2.0 * m_min * (1.0 - l6));
            Ok(NonMarkovClosed { c2_a_bc: c2, gtc, lambda, m_min })
        }
        NonMarkovVariant::GhzMixture => {
            check_range("w", w, 0.0, 1.0, "[0, 1]")?;
            let m_min = nonmarkov_mixture_m_min(w, lambda);
            let c2 = 0.5 * (1.0 - w) * (1.0 + w + (1.0 - w) * l6) + (1.0 - w) * (1.0 + w - (1.0 - w) * l6) * m_min;
            Ok(NonMarkovClosed { c2_a_bc: c2, gtc: (1.0 - w) * l3.abs(), lambda, m_min })
        }
    }
}

/// Mixing angle of the W/W̄ superposition covered by the closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WwbarAngle {
    Zero,
    QuarterPi,
    HalfPi,
}

impl WwbarAngle {
    pub const ALL: [WwbarAngle; 3] = [WwbarAngle::Zero, WwbarAngle::HalfPi, WwbarAngle::QuarterPi];

    pub fn radians(self) -> f64 {
        match self {
            WwbarAngle::Zero => 0.0,
            WwbarAngle::QuarterPi => FRAC_PI_4,
            WwbarAngle::HalfPi => FRAC_PI_2,
        }
    }

    pub fn from_radians(theta: f64) -> Result<Self> {
        WwbarAngle::ALL.iter().copied().find(|a| (a.radians() - theta).abs() < 1e-12).ok_or(Error::OutOfRange {
            name: "theta",
            value: theta,
            domain: "{0, pi/4, pi/2}",
        })
    }
}

pub fn f_w(d: f64, p: f64) -> f64 {
    d * (p - 1.0)
        * (d.powi(3) * (p - 1.0) * (1.0 - 3.0 * p).powi(2) + 2.0 * d * d * p * (3.0 * p - 1.0) + d * (3.0 - 5.0 * p)
            - 2.0)
}

pub fn f_wbar(d: f64, p: f64) -> f64 {
    d * p
        * (d.powi(3) * p * (2.0 - 3.0 * p).powi(2) - 2.0 * d * d * (3.0 * p * p - 5.0 * p + 2.0)
            + d * (2.0 - 5.0 * p)
            + 2.0)
}

pub fn f_wwbar(d: f64, p: f64) -> f64 {
    let u = p * (1.0 - p);
    let s = 1.0 - 6.0 * u;
    d.powi(4) * s * s + 2.0 * d.powi(3) * s - 6.0 * d * d * (1.0 - 4.0 * u) + 2.0 * d + 1.0
}

/// Spectral-decomposition estimate of C²_{A|BC} for W under GADC.
pub fn spectral_w_closed(d: f64, p: f64) -> f64 {
    let q = p - 1.0;
    (90.0 * d.powi(6) * q.powi(4) * p * p + 150.0 * d.powi(5) * q.powi(3) * p
        - 10.0 * d.powi(4) * q * q * (15.0 * p * p - 15.0 * p - 4.0)
        - d.powi(3) * q * q * (1053.0 * p + 80.0)
        + d * d * (-1742.0 * p * p + 1297.0 * p + 445.0)
        + 81.0 * d * (5.0 * p - 13.0)
        + 648.0)
        / 729.0
}

/// Spectral-decomposition estimate of C²_{A|BC} for W̄ under GADC.
pub fn spectral_wbar_closed(d: f64, p: f64) -> f64 {
    (45.0 * d.powi(6) * (p - 1.0).powi(2) * p.powi(4)
        + 30.0 * d.powi(5) * (p - 1.0) * p.powi(3)
        + 5.0 * d.powi(4) * p * p * (-6.0 * p * p + 6.0 * p + 1.0)
        + 2.0 * d.powi(3) * p * p * (252.0 * p - 257.0)
        + d * d * p * (696.0 - 787.0 * p)
        + 96.0 * d * (p - 3.0)
        + 288.0)
        / 324.0
}

/// Pair concurrence and spectral estimate for the W/W̄ family under GADC.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GadcWWbarClosed {
    pub c_pair: f64,
    /// Defined for θ ∈ {0, π/2}.
    pub c2_spectral: Option<f64>,
}

/// Pair concurrence before the max{0, ·} clip.
pub fn gadc_pair_unclipped(theta: WwbarAngle, d: f64, p: f64) -> Result<f64> {
    Ok(match theta {
        WwbarAngle::Zero => 2.0 / 3.0 * (1.0 - d - clipped_sqrt(f_w(d, p), "f_W")?),
        WwbarAngle::HalfPi => 2.0 / 3.0 * (1.0 - d - clipped_sqrt(f_wbar(d, p), "f_Wbar")?),
        WwbarAngle::QuarterPi => (2.0 - 2.0 * d - clipped_sqrt(f_wwbar(d, p), "f_WWbar")?) / 3.0,
    })
}

pub fn gadc_wwbar_closed(theta: WwbarAngle, d: f64, p: f64) -> Result<GadcWWbarClosed> {
    check_range("d", d, 0.0, 1.0, "[0, 1]")?;
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let c_pair = gadc_pair_unclipped(theta, d, p)?.max(0.0);
    let c2_spectral = match theta {
        WwbarAngle::Zero => Some(spectral_w_closed(d, p)),
        WwbarAngle::HalfPi => Some(spectral_wbar_closed(d, p)),
        WwbarAngle::QuarterPi => None,
    };
    Ok(GadcWWbarClosed { c_pair, c2_spectral })
}

/// Bisection tolerance in d used by [`d_esd`] by default.
pub const D_ESD_TOL: f64 = 1e-6;

/// Smallest d at which the closed-form pair concurrence reaches zero.
pub fn d_esd(theta: WwbarAngle, p: f64, tol: f64) -> Result<f64> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let g = |d: f64| gadc_pair_unclipped(theta, d, p);
    const SCAN: usize = 1000;
    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=SCAN {
        let d = k as f64 / SCAN as f64;
        if g(d)? <= 0.0 {
            hi = Some(d);
            break;
        }
        lo = d;
    }
    let mut hi = hi.ok_or(Error::Unsupported(format!("no sudden death for p = {p}")))?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if g(mid)? <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Location and value of the minimum of d_ESD over p.
///
/// Golden-section search on p with d_ESD bisected to `tol_d`; the minimum is
/// shallow, so `tol_d` well below 1e-6 is needed to pin p to 1e-3.
pub fn min_d_esd(theta: WwbarAngle, tol_d: f64) -> Result<(f64, f64)> {
    let f = |p: f64| d_esd(theta, p, tol_d);
    let (mut a, mut b) = (0.0f64, 1.0f64);
    // Coarse bracket first: the function is unimodal on each branch.
    let grid: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
    let vals: Vec<f64> = grid.iter().map(|&p| f(p)).collect::<Result<_>>()?;
    let k = vals.iter().enumerate().min_by(|x, y| x.1.total_cmp(y.1)).map(|(k, _)| k).unwrap_or(0);
    if k > 0 {
        a = grid[k - 1];
    }
    if k < 100 {
        b = grid[k + 1];
    }
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > 1e-9 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2)?;
        }
    }
    let p = 0.5 * (a + b);
    Ok((p, f(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn milburn_examples() {
        let r = milburn_closed(FRAC_1_SQRT_2, 0.1, 0.5, 0.0, 0.0, 0.0).unwrap();
        assert!((r.c2_a_bc - 1.0).abs() < 1e-15 && (r.gtc - 1.0).abs() < 1e-15);
        let vn = milburn_closed(0.4, 0.1, 1e12, 5.0, 0.0, 0.0).unwrap();
        assert!((vn.c2_a_bc - 4.0 * 0.16 * 0.84).abs() < 1e-9);
        let gamma = 0.6;
        let periodic = milburn_closed(0.4, gamma * std::f64::consts::PI / 3.0, gamma, 7.0, 0.0, 0.0).unwrap();
        assert!((periodic.c2_a_bc - 4.0 * 0.16 * 0.84).abs() < 1e-12);
        let mix = milburn_closed(FRAC_1_SQRT_2, 0.1, 0.5, 2.0, 0.1, 0.2).unwrap();
        assert!((mix.c2_a_bc - mix.gtc * mix.gtc).abs() < 1e-15);
        assert!(milburn_closed(0.3, 0.1, 0.5, 1.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn pdc1_w_examples() {
        let r = pdc1_w_closed(0.0).unwrap();
        assert!((r.c2_a_bc - 8.0 / 9.0).abs() < 1e-15);
        assert!((r.c2_ab - 4.0 / 9.0).abs() < 1e-15 && r.c2_bc == 4.0 / 9.0);
        assert_eq!(pdc1_w_closed(1.0).unwrap().c2_ab, 0.0);
        let half = pdc1_w_closed(0.5).unwrap();
        let expected = ((32.0f64 * 0.5 - 41.0) * (32.0 * 0.5 - 33.0)).sqrt() - 1.0;
        assert!((half.m_min - expected / (8.0 * (8.0 * 0.5 - 9.0))).abs() < 1e-15);
    }

    #[test]
    fn adc_examples() {
        let r = adc_w_vacuum_closed(1.0, 0.4).unwrap();
        assert_eq!((r.c2_a_bc, r.c2_pair, r.s_lin), (0.0, 0.0, 0.0));
        assert!((adc_w_vacuum_closed(0.5, 0.0).unwrap().c2_a_bc - 2.0 / 9.0).abs() < 1e-15);
        let iii = gghz_adc_closed(FRAC_1_SQRT_2, 1.0, AdcVariant::Third).unwrap();
        assert!((iii.c2_a_bc - 0.5).abs() < 1e-15 && iii.gtc == 0.0);
        assert_eq!(gghz_adc_closed(0.3, 1.0, AdcVariant::First).unwrap().c2_a_bc, 0.0);
        let (a, d) = (0.6, 0.35);
        let one = gghz_adc_closed(a, d, AdcVariant::First).unwrap().c2_a_bc;
        let three = gghz_adc_closed(a, d, AdcVariant::Third).unwrap().c2_a_bc;
        assert!((one / three - 2.0 * (1.0 - d) / (2.0 - d)).abs() < 1e-14);
    }

    #[test]
    fn ghz_vacuum_examples() {
        let r = ghz_vacuum_pdc_closed(0.3, 0.0).unwrap();
        assert!((r.gmc - 0.7f64.powf(1.5)).abs() < 1e-15);
        assert!((ghz_vacuum_pdc_closed(0.0, 0.25).unwrap().gmc - 0.75).abs() < 1e-15);
    }

    #[test]
    fn nonmarkov_examples() {
        let ghz = nonmarkov_closed(FRAC_1_SQRT_2, 0.0, 1.0, 5.0, 3.0, NonMarkovVariant::PureGGHZ).unwrap();
        assert!((ghz.c2_a_bc - ghz.lambda.powi(6)).abs() < 1e-15);
        let t0 = nonmarkov_closed(0.5, 0.0, 1.0, 5.0, 0.0, NonMarkovVariant::PureGGHZ).unwrap();
        assert!((t0.c2_a_bc - 0.75).abs() < 1e-12);
        assert_eq!(nonmarkov_mixture_m_min(0.0, 0.0), -0.5);
        let mix = nonmarkov_closed(0.0, 0.0, 1.0, 5.0, 2.0, NonMarkovVariant::GhzMixture).unwrap();
        assert!((mix.c2_a_bc - mix.lambda.powi(6)).abs() < 1e-12);
    }

    #[test]
    fn gadc_examples_and_symmetry() {
        let r = gadc_wwbar_closed(WwbarAngle::Zero, 0.3, 1.0).unwrap();
        assert!((r.c_pair - 2.0 / 3.0 * 0.7).abs() < 1e-15);
        for &(d, p) in &[(0.2, 0.1), (0.6, 0.35), (0.9, 0.8)] {
            let x = gadc_wwbar_closed(WwbarAngle::QuarterPi, d, p).unwrap().c_pair;
            let y = gadc_wwbar_closed(WwbarAngle::QuarterPi, d, 1.0 - p).unwrap().c_pair;
            assert_eq!(x, y);
        }
        assert!((spectral_w_closed(0.0, 0.37) - 8.0 / 9.0).abs() < 1e-15);
        assert!(spectral_w_closed(1.0, 1.0).abs() < 1e-12);
        for k in 0..=20 {
            let d = k as f64 / 20.0;
            assert!((spectral_w_closed(d, 1.0) - spectral_wbar_closed(d, 0.0)).abs() < 1e-12);
        }
        assert!(WwbarAngle::from_radians(0.3).is_err());
    }

    #[test]
    fn scenario_names_round_trip() {
        for id in ScenarioId::ALL {
            assert_eq!(id.name().parse::<ScenarioId>().unwrap(), id);
        }
        assert!("Nope".parse::<ScenarioId>().is_err());
    }
}
