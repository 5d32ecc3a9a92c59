//! Single-qubit Kraus channels and their action on three-qubit states.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_range, Error, Result};
use crate::linalg::{kron, pauli_z, ComplexMatrix};
use crate::states::DensityMatrix;

/// Parameter snapshot of a supported channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelKind {
    PhaseDamping { d: f64 },
    AmplitudeDamping { d: f64 },
    GeneralizedAmplitudeDamping { d: f64, p: f64 },
    TelegraphDephasing { lambda: f64 },
}

impl ChannelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ChannelKind::PhaseDamping { .. } => "pdc",
            ChannelKind::AmplitudeDamping { .. } => "adc",
            ChannelKind::GeneralizedAmplitudeDamping { .. } => "gadc",
            ChannelKind::TelegraphDephasing { .. } => "ntd",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            ChannelKind::PhaseDamping { d } | ChannelKind::AmplitudeDamping { d } => vec![("d", d)],
            ChannelKind::GeneralizedAmplitudeDamping { d, p } => vec![("d", d), ("p", p)],
            ChannelKind::TelegraphDephasing { lambda } => vec![("lambda", lambda)],
        }
    }
}

/// A list of 2×2 Kraus operators with Σ K†K = 𝟙.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    kind: ChannelKind,
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn label(&self) -> &'static str {
        self.kind.label()
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// max |Σ K†K − 𝟙|
    pub fn completeness_defect(&self) -> f64 {
        let sum = self.operators.iter().fold(ComplexMatrix::zeros(2, 2), |acc, k| &acc + &k.adjoint().matmul(k));
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }
}

/// Which qubits the environment couples to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Placement {
    FirstQubit,
    SecondQubit,
    ThirdQubit,
    AllQubits,
}

impl Placement {
    pub fn qubits(self) -> &'static [usize] {
        match self {
            Placement::FirstQubit => &[0],
            Placement::SecondQubit => &[1],
            Placement::ThirdQubit => &[2],
            Placement::AllQubits => &[0, 1, 2],
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Placement::FirstQubit => "q1",
            Placement::SecondQubit => "q2",
            Placement::ThirdQubit => "q3",
            Placement::AllQubits => "all",
        }
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Placement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q1" => Ok(Placement::FirstQubit),
            "q2" => Ok(Placement::SecondQubit),
            "q3" => Ok(Placement::ThirdQubit),
            "all" => Ok(Placement::AllQubits),
            _ => Err(Error::UnknownSelector(s.to_string())),
        }
    }
}

fn diag2(a: f64, b: f64) -> ComplexMatrix {
    ComplexMatrix::real_diag(&[a, b])
}

fn lowering(scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, scale, 0.0, 0.0])
}

fn raising(scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 0.0, scale, 0.0])
}

/// Phase damping: diag(1, √(1−d)), diag(0, √d).
pub fn pdc(d: f64) -> Result<KrausChannel> {
    check_range("d", d, 0.0, 1.0, "[0, 1]")?;
    Ok(KrausChannel {
        kind: ChannelKind::PhaseDamping { d },
        operators: vec![diag2(1.0, (1.0 - d).sqrt()), diag2(0.0, d.sqrt())],
    })
}

/// Amplitude damping: diag(1, √(1−d)), √d|0⟩⟨1|.
pub fn adc(d: f64) -> Result<KrausChannel> {
    check_range("d", d, 0.0, 1.0, "[0, 1]")?;
    Ok(KrausChannel {
        kind: ChannelKind::AmplitudeDamping { d },
        operators: vec![diag2(1.0, (1.0 - d).sqrt()), lowering(d.sqrt())],
    })
}

/// Decay probability d = 1 − e^{−2·rate·t} of a damping channel driven at
/// `channel_rate` for time `t`.
pub fn damping_from_rate(channel_rate: f64, t: f64) -> Result<f64> {
    check_range("channel_rate", channel_rate, 0.0, f64::INFINITY, "[0, inf)")?;
    check_range("t", t, 0.0, f64::INFINITY, "[0, inf)")?;
    Ok(-(-2.0 * channel_rate * t).exp_m1())
}

/// Generalized amplitude damping with ground-state weight `p`.
///
/// Operators carrying a zero prefactor (at p = 0 or p = 1) are dropped.
pub fn gadc(d: f64, p: f64) -> Result<KrausChannel> {
    check_range("d", d, 0.0, 1.0, "[0, 1]")?;
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
    let candidates = [
        (sp, diag2(sp, sp * (1.0 - d).sqrt())),
        (sp, lowering(sp * d.sqrt())),
        (sq, diag2(sq * (1.0 - d).sqrt(), sq)),
        (sq, raising(sq * d.sqrt())),
    ];
    let operators = candidates.into_iter().filter(|(w, _)| *w > 0.0).map(|(_, k)| k).collect();
    Ok(KrausChannel { kind: ChannelKind::GeneralizedAmplitudeDamping { d, p }, operators })
}

/// Random telegraph dephasing: √((1+Λ)/2)𝟙, √((1−Λ)/2)σz.
pub fn nonmarkov_dephasing(lambda: f64) -> Result<KrausChannel> {
    check_range("lambda", lambda, -1.0, 1.0, "[-1, 1]")?;
    Ok(KrausChannel {
        kind: ChannelKind::TelegraphDephasing { lambda },
        operators: vec![
            ComplexMatrix::identity(2).scale_real(((1.0 + lambda) / 2.0).sqrt()),
            pauli_z().scale_real(((1.0 - lambda) / 2.0).sqrt()),
        ],
    })
}

/// Dephasing factor Λ(t) = e^{−ν}(cos μν + sin μν / μ), μ = √((4bτ)² − 1), ν = t/2τ.
///
/// For (4bτ)² < 1 the hyperbolic form is used; at (4bτ)² = 1 the limit
/// e^{−ν}(1 + ν).
pub fn dephasing_lambda(b: f64, tau: f64, t: f64) -> Result<f64> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::OutOfRange { name: "tau", value: tau, domain: "(0, inf)" });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::OutOfRange { name: "t", value: t, domain: "[0, inf)" });
    }
    if !b.is_finite() {
        return Err(Error::OutOfRange { name: "b", value: b, domain: "finite" });
    }
    let nu = t / (2.0 * tau);
    let disc = (4.0 * b * tau).powi(2) - 1.0;
    let value = if disc > 0.0 {
        let mu = disc.sqrt();
        (-nu).exp() * ((mu * nu).cos() + (mu * nu).sin() / mu)
    } else if disc < 0.0 {
        let k = (-disc).sqrt();
        // Combine the exponentials to avoid overflow of cosh/sinh at large ν.
        let grow = (-(1.0 - k) * nu).exp();
        let shrink = (-(1.0 + k) * nu).exp();
        0.5 * (grow + shrink) + 0.5 * (grow - shrink) / k
    } else {
        (-nu).exp() * (1.0 + nu)
    };
    Ok(value.clamp(-1.0, 1.0))
}

/// Embeds a single-qubit operator on `qubit` of three.
pub fn embed(op: &ComplexMatrix, qubit: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    match qubit {
        0 => kron(&kron(op, &id), &id),
        1 => kron(&kron(&id, op), &id),
        2 => kron(&kron(&id, &id), op),
        _ => panic!("qubit index {qubit} out of range"),
    }
}

fn apply_on_qubit(rho: &ComplexMatrix, ch: &KrausChannel, qubit: usize) -> ComplexMatrix {
    ch.operators.iter().fold(ComplexMatrix::zeros(8, 8), |acc, k| &acc + &embed(k, qubit).sandwich(rho))
}

/// Image of ρ under the channel acting on the placed qubits.
///
/// Multi-qubit placements apply the channel qubit by qubit, which equals the
/// sum over all product Kraus operators.
pub fn apply(rho: &DensityMatrix, ch: &KrausChannel, pl: Placement) -> DensityMatrix {
    let mut m = rho.matrix().clone();
    for &q in pl.qubits() {
        m = apply_on_qubit(&m, ch, q);
    }
    DensityMatrix::from_trusted(m)
}

impl FromStr for ChannelKind {
    type Err = Error;

    /// Parses `pdc:d`, `adc:d`, `gadc:d,p` or `ntd:lambda`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| Error::UnknownSelector(s.to_string())))
                .collect::<Result<_>>()?
        };
        let kind = match (name, nums.as_slice()) {
            ("pdc", [d]) => ChannelKind::PhaseDamping { d: *d },
            ("adc", [d]) => ChannelKind::AmplitudeDamping { d: *d },
            ("gadc", [d, p]) => ChannelKind::GeneralizedAmplitudeDamping { d: *d, p: *p },
            ("ntd", [l]) => ChannelKind::TelegraphDephasing { lambda: *l },
            _ => return Err(Error::UnknownSelector(s.to_string())),
        };
        kind.build()?;
        Ok(kind)
    }
}

impl ChannelKind {
    pub fn build(&self) -> Result<KrausChannel> {
        match *self {
            ChannelKind::PhaseDamping { d } => pdc(d),
            ChannelKind::AmplitudeDamping { d } => adc(d),
            ChannelKind::GeneralizedAmplitudeDamping { d, p } => gadc(d, p),
            ChannelKind::TelegraphDephasing { lambda } => nonmarkov_dephasing(lambda),
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.params().iter().map(|(_, v)| format!("{v}")).collect();
        write!(f, "{}:{}", self.label(), args.join(","))
    }
}
