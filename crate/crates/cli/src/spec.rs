//! Mini-syntax `name:arg1,arg2` for initial states and channels.

use std::fmt;

use tritangle::channels::ChannelKind;
use tritangle::states::{self, DensityMatrix};

use crate::error::CliError;

/// A named initial state with all of its parameters resolved.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateSpec {
    Ghz,
    Gghz { a: f64 },
    W,
    Wbar,
    Wwbar { theta: f64, phi: f64 },
    Gw { a: f64, b: f64 },
    MixGhz { w1: f64, w2: f64 },
    MixW { w: f64 },
}

/// Values that bare state or channel names take from other flags.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Fallbacks {
    pub theta: Option<f64>,
    pub w: Option<f64>,
    pub w1: Option<f64>,
    pub w2: Option<f64>,
    pub d: Option<f64>,
    pub p: Option<f64>,
}

fn split_args(text: &str, flag: &str) -> Result<(String, Vec<f64>), CliError> {
    let (name, args) = text.split_once(':').unwrap_or((text, ""));
    let nums = if args.trim().is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::usage(flag, format!("'{}' is not a number in '{text}'", x.trim())))
            })
            .collect::<Result<_, _>>()?
    };
    Ok((name.trim().to_ascii_lowercase(), nums))
}

fn need(value: Option<f64>, flag: &str, owner: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::usage(flag, format!("{owner} needs {flag} or explicit parameters")))
}

impl StateSpec {
    pub fn parse(text: &str, fb: &Fallbacks) -> Result<Self, CliError> {
        let (name, nums) = split_args(text, "--state")?;
        let spec = match (name.as_str(), nums.as_slice()) {
            ("ghz", []) => StateSpec::Ghz,
            ("gghz", [a]) => StateSpec::Gghz { a: *a },
            ("w", []) => StateSpec::W,
            ("wbar", []) => StateSpec::Wbar,
            ("wwbar", [theta]) => StateSpec::Wwbar { theta: *theta, phi: 0.0 },
            ("wwbar", [theta, phi]) => StateSpec::Wwbar { theta: *theta, phi: *phi },
            ("wwbar", []) => StateSpec::Wwbar { theta: need(fb.theta, "--theta", "wwbar")?, phi: 0.0 },
            ("gw", [a, b]) => StateSpec::Gw { a: *a, b: *b },
            ("mix-ghz", [w1, w2]) => StateSpec::MixGhz { w1: *w1, w2: *w2 },
            ("mix-ghz", []) => StateSpec::MixGhz { w1: need(fb.w1, "--w1", "mix-ghz")?, w2: need(fb.w2, "--w2", "mix-ghz")? },
            ("mix-w", [w]) => StateSpec::MixW { w: *w },
            ("mix-w", []) => StateSpec::MixW { w: need(fb.w, "--w", "mix-w")? },
            _ => {
                return Err(CliError::usage(
                    "--state",
                    format!("unrecognised state '{text}' (expected ghz, gghz:a, w, wbar, wwbar:theta[,phi], gw:a,b, mix-ghz:w1,w2 or mix-w:w)"),
                ))
            }
        };
        spec.build().map_err(|e| CliError::domain("--state", e.to_string()))?;
        Ok(spec)
    }

    pub fn build(&self) -> tritangle::Result<DensityMatrix> {
        Ok(match *self {
            StateSpec::Ghz => states::ghz().density(),
            StateSpec::Gghz { a } => states::gghz(a)?.density(),
            StateSpec::W => states::w().density(),
            StateSpec::Wbar => states::wbar().density(),
            StateSpec::Wwbar { theta, phi } => states::wwbar(theta, phi)?.density(),
            StateSpec::Gw { a, b } => states::gw(a, b)?.density(),
            StateSpec::MixGhz { w1, w2 } => states::mix_ghz_extremes(w1, w2)?,
            StateSpec::MixW { w } => states::mix_w_vacuum(w)?,
        })
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StateSpec::Ghz => f.write_str("ghz"),
            StateSpec::Gghz { a } => write!(f, "gghz:{a}"),
            StateSpec::W => f.write_str("w"),
            StateSpec::Wbar => f.write_str("wbar"),
            StateSpec::Wwbar { theta, phi } => write!(f, "wwbar:{theta},{phi}"),
            StateSpec::Gw { a, b } => write!(f, "gw:{a},{b}"),
            StateSpec::MixGhz { w1, w2 } => write!(f, "mix-ghz:{w1},{w2}"),
            StateSpec::MixW { w } => write!(f, "mix-w:{w}"),
        }
    }
}

/// A fixed channel, or telegraph dephasing whose strength follows Λ(t).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelSpec {
    Fixed(ChannelKind),
    Telegraph,
}

impl ChannelSpec {
    pub fn parse(text: &str, fb: &Fallbacks) -> Result<Self, CliError> {
        let (name, nums) = split_args(text, "--channel")?;
        let kind = match (name.as_str(), nums.as_slice()) {
            ("ntd", []) => return Ok(ChannelSpec::Telegraph),
            ("ntd", [lambda]) => ChannelKind::TelegraphDephasing { lambda: *lambda },
            ("pdc", [d]) => ChannelKind::PhaseDamping { d: *d },
            ("pdc", []) => ChannelKind::PhaseDamping { d: need(fb.d, "--d", "pdc")? },
            ("adc", [d]) => ChannelKind::AmplitudeDamping { d: *d },
            ("adc", []) => ChannelKind::AmplitudeDamping { d: need(fb.d, "--d", "adc")? },
            ("gadc", [d, p]) => ChannelKind::GeneralizedAmplitudeDamping { d: *d, p: *p },
            ("gadc", []) => ChannelKind::GeneralizedAmplitudeDamping {
                d: need(fb.d, "--d", "gadc")?,
                p: need(fb.p, "--p", "gadc")?,
            },
            _ => {
                return Err(CliError::usage(
                    "--channel",
                    format!("unrecognised channel '{text}' (expected pdc:d, adc:d, gadc:d,p, ntd:lambda or ntd)"),
                ))
            }
        };
        kind.build().map_err(|e| CliError::domain("--channel", e.to_string()))?;
        Ok(ChannelSpec::Fixed(kind))
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSpec::Fixed(kind) => write!(f, "{kind}"),
            ChannelSpec::Telegraph => f.write_str("ntd"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn states_round_trip_through_display() {
        let fb = Fallbacks::default();
        for text in ["ghz", "gghz:0.7", "w", "wbar", "wwbar:0.5,1.25", "gw:0.6,0.5", "mix-ghz:0.1,0.2", "mix-w:0.3"] {
            let s = StateSpec::parse(text, &fb).unwrap();
            assert_eq!(s.to_string(), text);
            assert_eq!(StateSpec::parse(&s.to_string(), &fb).unwrap(), s);
        }
    }

    #[test]
    fn bare_names_use_fallbacks() {
        let fb = Fallbacks { w: Some(0.25), d: Some(0.4), p: Some(0.1), ..Default::default() };
        assert_eq!(StateSpec::parse("mix-w", &fb).unwrap(), StateSpec::MixW { w: 0.25 });
        assert_eq!(
            ChannelSpec::parse("gadc", &fb).unwrap(),
            ChannelSpec::Fixed(ChannelKind::GeneralizedAmplitudeDamping { d: 0.4, p: 0.1 })
        );
        let err = StateSpec::parse("mix-ghz", &fb).unwrap_err();
        assert_eq!(err.flag(), Some("--w1"));
    }

    #[test]
    fn domain_violations_are_rejected() {
        let fb = Fallbacks::default();
        assert!(ChannelSpec::parse("pdc:1.2", &fb).is_err());
        assert!(StateSpec::parse("gw:0.9,0.9", &fb).is_err());
        assert!(StateSpec::parse("cluster", &fb).is_err());
        assert!(StateSpec::parse("gghz:x", &fb).is_err());
    }
}
