//! Run configuration: command-line flags, INI-style files and their merge.
//!
//! Both sources feed the same [`Settings`] table, so a value read from a file
//! and the same value passed as a flag go through identical validation.
//! Flags are applied after the file and therefore win.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ContextKind;
use clap::{Args, Parser, Subcommand};
use tritangle::channels::Placement;
use tritangle::closedform::ScenarioId;
use tritangle::dynamics::{HamiltonianParams, MilburnParams};
use tritangle::experiments::{
    accepted_params, default_grid, default_params, scenario_state, FigureId, ParamRange, SweepSpec, TimeGrid,
};

use crate::error::CliError;
use crate::spec::{ChannelSpec, Fallbacks, StateSpec};

pub const DEFAULT_TMAX: f64 = 10.0;
pub const DEFAULT_STEPS: usize = 201;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Measure,
    Evolve,
    Channel,
    Figure,
    Sweep,
    ValidateOracles,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Measure,
        Command::Evolve,
        Command::Channel,
        Command::Figure,
        Command::Sweep,
        Command::ValidateOracles,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Command::Measure => "measure",
            Command::Evolve => "evolve",
            Command::Channel => "channel",
            Command::Figure => "figure",
            Command::Sweep => "sweep",
            Command::ValidateOracles => "validate-oracles",
        }
    }

    /// Keys a command understands, besides `command` itself.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Measure => &["state", "theta", "w", "w1", "w2", "out"],
            Command::Evolve => {
                &["state", "theta", "w", "w1", "w2", "J", "Delta", "D", "B", "milburn", "gamma", "tmax", "steps", "out"]
            }
            Command::Channel => {
                &["state", "theta", "w", "w1", "w2", "channel", "place", "d", "p", "b", "tau", "tmax", "steps", "out"]
            }
            Command::Figure => &["figure", "out"],
            Command::Sweep => &[
                "id", "J", "Delta", "D", "B", "gamma", "d", "p", "b", "tau", "theta", "phi", "w", "w1", "w2", "a", "t",
                "tmax", "steps", "out",
            ],
            Command::ValidateOracles => &["id"],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL.iter().copied().find(|c| c.tag() == s).ok_or_else(|| format!("unknown command '{s}'"))
    }
}

/// A fully validated request.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub state: Option<StateSpec>,
    pub channel: Option<ChannelSpec>,
    pub placement: Option<Placement>,
    pub hamiltonian: Option<HamiltonianParams>,
    pub milburn: Option<MilburnParams>,
    /// Telegraph switching rate b and memory time τ for a time-dependent `ntd`.
    pub telegraph: Option<(f64, f64)>,
    pub figure: Option<FigureId>,
    pub scenario: Option<ScenarioId>,
    pub sweep: Option<SweepSpec>,
    pub time: Option<TimeGrid>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn empty(command: Command) -> Self {
        Self {
            command,
            state: None,
            channel: None,
            placement: None,
            hamiltonian: None,
            milburn: None,
            telegraph: None,
            figure: None,
            scenario: None,
            sweep: None,
            time: None,
            out: None,
        }
    }

    /// Renders the configuration in the file format read by [`load_config`].
    pub fn to_config_string(&self) -> String {
        let mut s = String::from("[scenario]\n");
        let kv = |s: &mut String, k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv(&mut s, "command", &self.command);
        if let Some(f) = self.figure {
            kv(&mut s, "figure", &f);
        }
        if let Some(id) = self.scenario {
            kv(&mut s, "id", &id);
        }
        if let Some(st) = &self.state {
            kv(&mut s, "state", st);
        }
        if let Some(ch) = &self.channel {
            kv(&mut s, "channel", ch);
        }
        if let Some(pl) = self.placement {
            kv(&mut s, "place", &pl);
        }
        if let Some((b, tau)) = self.telegraph {
            kv(&mut s, "b", &b);
            kv(&mut s, "tau", &tau);
        }
        if let Some(h) = self.hamiltonian {
            kv(&mut s, "J", &h.j);
            kv(&mut s, "Delta", &h.delta);
            kv(&mut s, "D", &h.d);
            kv(&mut s, "B", &h.b);
        }
        if let Some(m) = self.milburn {
            kv(&mut s, "milburn", &true);
            kv(&mut s, "gamma", &m.gamma);
        }
        if let Some(sw) = &self.sweep {
            for (k, v) in &sw.fixed {
                kv(&mut s, k, v);
            }
        }
        let ranges = self.sweep.as_ref().map(|sw| sw.ranges.as_slice()).unwrap_or(&[]);
        if self.time.is_some() || !ranges.is_empty() {
            s.push_str("\n[grid]\n");
            for r in ranges {
                let _ = writeln!(s, "{} = {}, {}, {}", r.name, r.start, r.stop, r.steps);
            }
            if let Some(tg) = self.time {
                kv(&mut s, "tmax", &tg.t_max);
                kv(&mut s, "steps", &tg.steps);
            }
        }
        if let Some(out) = &self.out {
            s.push_str("\n[output]\n");
            kv(&mut s, "out", &out.display());
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Raw settings

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    Flag,
    Line(usize),
}

#[derive(Clone, Debug)]
struct Entry {
    value: String,
    origin: Origin,
}

fn flag_of(key: &str) -> String {
    match key {
        "id" => "--scenario".to_string(),
        "figure" => "<figure>".to_string(),
        _ => format!("--{key}"),
    }
}

fn err_at(key: &str, origin: Origin, message: impl Into<String>) -> CliError {
    match origin {
        Origin::Flag => CliError::domain(&flag_of(key), message),
        Origin::Line(n) => CliError::config(n, message),
    }
}

const SECTION_KEYS: [(&str, &[&str]); 3] = [
    (
        "scenario",
        &[
            "command", "figure", "id", "state", "channel", "place", "milburn", "J", "Delta", "D", "B", "gamma", "d",
            "p", "b", "tau", "theta", "phi", "w", "w1", "w2", "a", "t",
        ],
    ),
    ("grid", &["tmax", "steps"]),
    ("output", &["out"]),
];

/// Unvalidated key/value pairs with the place each one came from.
#[derive(Clone, Debug, Default)]
struct Settings {
    entries: BTreeMap<String, Entry>,
    ranges: BTreeMap<String, Entry>,
}

impl Settings {
    fn parse_file(text: &str) -> Result<Self, CliError> {
        let mut out = Settings::default();
        let mut section: Option<&str> = None;
        for (idx, raw) in text.lines().enumerate() {
            let n = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim();
                section = Some(
                    SECTION_KEYS
                        .iter()
                        .map(|(s, _)| *s)
                        .find(|s| *s == name)
                        .ok_or_else(|| CliError::config(n, format!("unknown section [{name}]")))?,
                );
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(n, format!("expected key = value, found '{line}'")));
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() || value.contains('=') {
                return Err(CliError::config(n, format!("malformed line '{line}'")));
            }
            if !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(CliError::config(n, format!("invalid key '{key}'")));
            }
            let Some(sec) = section else {
                return Err(CliError::config(n, format!("'{key}' appears before any section")));
            };
            let keys = SECTION_KEYS.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap_or(&[]);
            let entry = Entry { value: value.to_string(), origin: Origin::Line(n) };
            let slot = if keys.contains(&key) {
                &mut out.entries
            } else if sec == "grid" {
                &mut out.ranges
            } else {
                return Err(CliError::config(n, format!("unknown key '{key}' in [{sec}]")));
            };
            if slot.insert(key.to_string(), entry).is_some() {
                return Err(CliError::config(n, format!("duplicate key '{key}'")));
            }
        }
        Ok(out)
    }

    fn set_flag(&mut self, key: &str, value: Option<String>) {
        if let Some(value) = value {
            self.entries.insert(key.to_string(), Entry { value, origin: Origin::Flag });
        }
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn num(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|e| {
                e.value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err_at(key, e.origin, format!("{key} = '{}' is not a finite number", e.value)))
            })
            .transpose()
    }

    fn count(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.get(key)
            .map(|e| {
                e.value
                    .parse::<usize>()
                    .map_err(|_| err_at(key, e.origin, format!("{key} = '{}' is not a non-negative integer", e.value)))
            })
            .transpose()
    }

    fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key) {
            None => Ok(false),
            Some(e) => match e.value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" | "on" => Ok(true),
                "false" | "no" | "0" | "off" => Ok(false),
                _ => Err(err_at(key, e.origin, format!("{key} = '{}' is not a boolean", e.value))),
            },
        }
    }

    fn parse_as<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|e| e.value.parse::<T>().map_err(|err| err_at(key, e.origin, format!("{key} = '{}': {err}", e.value))))
            .transpose()
    }

    fn time_grid(&self) -> Result<Option<TimeGrid>, CliError> {
        let (tmax, steps) = (self.num("tmax")?, self.count("steps")?);
        if tmax.is_none() && steps.is_none() {
            return Ok(None);
        }
        let t_max = tmax.unwrap_or(DEFAULT_TMAX);
        let steps = steps.unwrap_or(DEFAULT_STEPS);
        if t_max <= 0.0 {
            return Err(err_at("tmax", self.get("tmax").unwrap().origin, format!("tmax = {t_max} must be positive")));
        }
        if steps < 2 {
            return Err(err_at(
                "steps",
                self.get("steps").unwrap().origin,
                format!("steps = {steps} must be at least 2"),
            ));
        }
        Ok(Some(TimeGrid { t_max, steps }))
    }

    fn into_config(self, command: Command) -> Result<RunConfig, CliError> {
        for (key, e) in &self.entries {
            if key != "command" && !command.keys().contains(&key.as_str()) {
                return Err(err_at(key, e.origin, format!("{} is not used by {command}", flag_of(key))));
            }
        }
        if command != Command::Sweep {
            if let Some((key, e)) = self.ranges.iter().next() {
                return Err(err_at(key, e.origin, format!("parameter ranges only apply to sweep, found '{key}'")));
            }
        }
        let mut cfg = RunConfig::empty(command);
        match command {
            Command::Measure | Command::Evolve | Command::Channel => self.fill_state_commands(&mut cfg)?,
            Command::Figure => {
                let e =
                    self.get("figure").ok_or_else(|| CliError::usage("<figure>", "figure needs an id such as fig5"))?;
                cfg.figure = Some(e.value.parse().map_err(|_| {
                    err_at("figure", e.origin, format!("unknown figure '{}' (expected fig1 .. fig9)", e.value))
                })?);
                cfg.out = Some(self.get("out").map(|e| PathBuf::from(&e.value)).unwrap_or_else(|| PathBuf::from(".")));
            }
            Command::Sweep => self.fill_sweep(&mut cfg)?,
            Command::ValidateOracles => cfg.scenario = self.parse_as("id")?,
        }
        Ok(cfg)
    }

    fn fill_state_commands(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        let fb = Fallbacks {
            theta: self.num("theta")?,
            w: self.num("w")?,
            w1: self.num("w1")?,
            w2: self.num("w2")?,
            d: self.num("d")?,
            p: self.num("p")?,
        };
        let state =
            self.get("state").ok_or_else(|| CliError::usage("--state", format!("{} needs --state", cfg.command)))?;
        cfg.state = Some(StateSpec::parse(&state.value, &fb).map_err(|e| relocate(e, state.origin))?);
        let mut consumed: Vec<&str> = match cfg.state {
            Some(StateSpec::Wwbar { .. }) if bare(&state.value) => vec!["theta"],
            Some(StateSpec::MixGhz { .. }) if bare(&state.value) => vec!["w1", "w2"],
            Some(StateSpec::MixW { .. }) if bare(&state.value) => vec!["w"],
            _ => vec![],
        };
        cfg.out = self.get("out").map(|e| PathBuf::from(&e.value));

        match cfg.command {
            Command::Evolve => {
                let h = HamiltonianParams::default();
                cfg.hamiltonian = Some(HamiltonianParams {
                    j: self.num("J")?.unwrap_or(h.j),
                    delta: self.num("Delta")?.unwrap_or(h.delta),
                    d: self.num("D")?.unwrap_or(h.d),
                    b: self.num("B")?.unwrap_or(h.b),
                });
                let milburn = self.flag("milburn")?;
                match (milburn, self.num("gamma")?) {
                    (true, Some(g)) => {
                        let origin = self.get("gamma").unwrap().origin;
                        cfg.milburn = Some(MilburnParams::new(g).map_err(|e| err_at("gamma", origin, e.to_string()))?);
                    }
                    (true, None) => return Err(CliError::usage("--gamma", "--milburn requires --gamma")),
                    (false, Some(_)) => {
                        let origin = self.get("gamma").unwrap().origin;
                        return Err(err_at("gamma", origin, "--gamma is only valid together with --milburn"));
                    }
                    (false, None) => {}
                }
                cfg.time = Some(self.time_grid()?.unwrap_or(TimeGrid { t_max: DEFAULT_TMAX, steps: DEFAULT_STEPS }));
            }
            Command::Channel => {
                let ch = self.get("channel").ok_or_else(|| CliError::usage("--channel", "channel needs --channel"))?;
                let spec = ChannelSpec::parse(&ch.value, &fb).map_err(|e| relocate(e, ch.origin))?;
                if bare(&ch.value) {
                    match ch.value.trim().to_ascii_lowercase().as_str() {
                        "pdc" | "adc" => consumed.push("d"),
                        "gadc" => consumed.extend(["d", "p"]),
                        _ => {}
                    }
                }
                cfg.channel = Some(spec);
                cfg.placement = Some(self.parse_as("place")?.unwrap_or(Placement::FirstQubit));
                if spec == ChannelSpec::Telegraph {
                    let b = self.num("b")?.ok_or_else(|| CliError::usage("--b", "bare ntd requires --b and --tau"))?;
                    let tau =
                        self.num("tau")?.ok_or_else(|| CliError::usage("--tau", "bare ntd requires --b and --tau"))?;
                    if tau <= 0.0 {
                        return Err(err_at(
                            "tau",
                            self.get("tau").unwrap().origin,
                            format!("tau = {tau} must be positive"),
                        ));
                    }
                    consumed.extend(["b", "tau", "tmax", "steps"]);
                    cfg.telegraph = Some((b, tau));
                    cfg.time =
                        Some(self.time_grid()?.unwrap_or(TimeGrid { t_max: DEFAULT_TMAX, steps: DEFAULT_STEPS }));
                }
            }
            _ => {}
        }
        if cfg.command == Command::Evolve {
            consumed.extend(["J", "Delta", "D", "B", "milburn", "gamma", "tmax", "steps"]);
        }
        consumed.extend(["state", "channel", "place", "out"]);
        for (key, e) in &self.entries {
            if key != "command" && !consumed.contains(&key.as_str()) {
                return Err(err_at(
                    key,
                    e.origin,
                    format!("{} has no effect with this state and channel", flag_of(key)),
                ));
            }
        }
        Ok(())
    }

    fn fill_sweep(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        let id: ScenarioId =
            self.parse_as("id")?.ok_or_else(|| CliError::usage("--scenario", "sweep needs a scenario id"))?;
        let accepted = accepted_params(id);
        let mut spec = SweepSpec::new(id);
        for (key, e) in &self.entries {
            if matches!(key.as_str(), "command" | "id" | "tmax" | "steps" | "out") {
                continue;
            }
            if !accepted.contains(&key.as_str()) {
                return Err(err_at(key, e.origin, format!("scenario {id} has no parameter {key}")));
            }
            spec.fixed.insert(key.clone(), self.num(key)?.unwrap());
        }
        for (name, e) in &self.ranges {
            if !accepted.contains(&name.as_str()) {
                return Err(err_at(name, e.origin, format!("scenario {id} has no parameter {name}")));
            }
            match self.entries.get(name).map(|fixed| fixed.origin) {
                Some(Origin::Flag) => continue,
                Some(Origin::Line(_)) => {
                    return Err(err_at(
                        name,
                        e.origin,
                        format!("{name} is both fixed in [scenario] and ranged in [grid]"),
                    ))
                }
                None => {}
            }
            let parts: Vec<&str> = e.value.split(',').map(str::trim).collect();
            let parsed = match parts.as_slice() {
                [a, b, n] => match (a.parse::<f64>(), b.parse::<f64>(), n.parse::<usize>()) {
                    (Ok(start), Ok(stop), Ok(steps)) => Some(ParamRange { name: name.clone(), start, stop, steps }),
                    _ => None,
                },
                _ => None,
            };
            let range =
                parsed.ok_or_else(|| err_at(name, e.origin, format!("{name}: expected 'start, stop, steps'")))?;
            spec.ranges.push(range);
        }
        if spec.ranges.is_empty() && self.get("tmax").is_none() && self.get("steps").is_none() {
            spec.ranges = default_grid(id).ranges;
            spec.ranges.retain(|r| !spec.fixed.contains_key(&r.name));
        }
        spec.time = self.time_grid()?;
        cfg.out = self.get("out").map(|e| PathBuf::from(&e.value));
        spec.output = cfg.out.clone();
        spec.validate().map_err(|e| CliError::domain("--scenario", e.to_string()))?;
        check_sweep_domain(&spec, self)?;
        cfg.scenario = Some(id);
        cfg.time = spec.time;
        cfg.sweep = Some(spec);
        Ok(())
    }
}

fn bare(text: &str) -> bool {
    !text.contains(':')
}

fn relocate(e: CliError, origin: Origin) -> CliError {
    match origin {
        Origin::Flag => e,
        Origin::Line(n) => CliError::config(n, e.to_string()),
    }
}

/// Builds the scenario state at the base point and at both ends of every
/// range so that out-of-domain values are reported before any work starts.
fn check_sweep_domain(spec: &SweepSpec, settings: &Settings) -> Result<(), CliError> {
    let mut base = default_params(spec.scenario);
    base.extend(spec.fixed.iter().map(|(k, v)| (k.clone(), *v)));
    let mut probes = vec![base.clone()];
    for r in &spec.ranges {
        for v in [r.start, r.stop] {
            let mut p = base.clone();
            p.insert(r.name.clone(), v);
            probes.push(p);
        }
    }
    if let Some(tg) = spec.time {
        let mut p = base.clone();
        p.insert("t".to_string(), tg.t_max);
        probes.push(p);
    }
    for p in probes {
        if let Err(e) = scenario_state(spec.scenario, &p) {
            let key = match &e {
                tritangle::Error::OutOfRange { name, .. } => name.to_string(),
                _ => "id".to_string(),
            };
            let origin =
                settings.get(&key).or_else(|| settings.ranges.get(&key)).map(|e| e.origin).unwrap_or(Origin::Flag);
            return Err(err_at(&key, origin, e.to_string()));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Command line

const AFTER_HELP: &str = "\
States:   ghz | gghz:a | w | wbar | wwbar:theta[,phi] | gw:a,b | mix-ghz:w1,w2 | mix-w:w
          (bare wwbar, mix-ghz and mix-w take --theta, --w1/--w2 and --w)
Channels: pdc:d | adc:d | gadc:d,p | ntd:lambda | ntd (lambda from --b, --tau over the time grid)
          (bare pdc, adc and gadc take --d and --p)
Places:   q1 | q3 | all
Exit:     0 success, 1 oracle validation failed, 2 usage or config error,
          3 numerical failure, 4 I/O failure. Errors end with one
          machine-readable line on stderr.
Env:      TRITANGLE_THREADS caps the worker count.";

#[derive(Debug, Parser)]
#[command(name = "tritangle", version, about = "Tripartite entanglement of a three-qubit XXZ chain with DM coupling")]
#[command(after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Print the full measure report of a state as one CSV row.
    Measure(Flags),
    /// Evolve a state unitarily, or under intrinsic decoherence with --milburn.
    Evolve(Flags),
    /// Apply a Kraus channel to a state and report the measures.
    Channel(Flags),
    /// Write the CSV panels of a figure.
    Figure {
        /// Figure id, fig1 .. fig9.
        figure: Option<String>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Evaluate a scenario over a parameter grid.
    Sweep(Flags),
    /// Compare closed forms against the numeric pipeline.
    ValidateOracles(Flags),
}

#[derive(Debug, Default, Args)]
struct Flags {
    /// Initial state, e.g. gghz:0.7.
    #[arg(long)]
    state: Option<String>,
    /// Channel, e.g. pdc:0.5.
    #[arg(long)]
    channel: Option<String>,
    /// Channel placement: q1, q3 or all.
    #[arg(long)]
    place: Option<String>,
    #[arg(long = "J", allow_negative_numbers = true)]
    j: Option<String>,
    #[arg(long = "Delta", allow_negative_numbers = true)]
    delta: Option<String>,
    /// DM interaction strength.
    #[arg(long = "D", allow_negative_numbers = true)]
    dm: Option<String>,
    /// Magnetic field.
    #[arg(long = "B", allow_negative_numbers = true)]
    field: Option<String>,
    /// Intrinsic decoherence rate (needs --milburn).
    #[arg(long)]
    gamma: Option<String>,
    /// Use Milburn dynamics.
    #[arg(long)]
    milburn: bool,
    /// Channel strength.
    #[arg(long)]
    d: Option<String>,
    /// Thermal excitation probability of the generalized amplitude damping channel.
    #[arg(long)]
    p: Option<String>,
    /// Telegraph switching rate.
    #[arg(long)]
    b: Option<String>,
    /// Telegraph memory time.
    #[arg(long)]
    tau: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<String>,
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    w1: Option<String>,
    #[arg(long)]
    w2: Option<String>,
    /// End of the time grid.
    #[arg(long)]
    tmax: Option<String>,
    /// Number of time points.
    #[arg(long)]
    steps: Option<String>,
    /// Output file, or directory for figure.
    #[arg(long)]
    out: Option<String>,
    /// INI-style config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario id for sweep and validate-oracles.
    #[arg(long)]
    scenario: Option<String>,
}

impl Flags {
    fn apply(self, s: &mut Settings) {
        for (key, value) in [
            ("state", self.state),
            ("channel", self.channel),
            ("place", self.place),
            ("J", self.j),
            ("Delta", self.delta),
            ("D", self.dm),
            ("B", self.field),
            ("gamma", self.gamma),
            ("d", self.d),
            ("p", self.p),
            ("b", self.b),
            ("tau", self.tau),
            ("theta", self.theta),
            ("w", self.w),
            ("w1", self.w1),
            ("w2", self.w2),
            ("tmax", self.tmax),
            ("steps", self.steps),
            ("out", self.out),
            ("id", self.scenario),
        ] {
            s.set_flag(key, value);
        }
        if self.milburn {
            s.set_flag("milburn", Some("true".to_string()));
        }
    }
}

/// True when clap would print help or version text for these arguments.
pub fn wants_help<I, T>(argv: I) -> Option<clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::error::ErrorKind::*;
    match Cli::try_parse_from(argv) {
        Err(e) if matches!(e.kind(), DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand) => {
            Some(e)
        }
        _ => None,
    }
}

/// Parses a full argument vector, program name first.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        let flag = match e.get(ContextKind::InvalidArg) {
            Some(clap::error::ContextValue::String(s)) => s.split_whitespace().next().unwrap_or("").to_string(),
            _ => "<command>".to_string(),
        };
        let text = e.to_string();
        let first = text.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
        CliError::usage(&flag, first)
    })?;
    let (command, figure, flags) = match cli.command {
        Sub::Measure(f) => (Command::Measure, None, f),
        Sub::Evolve(f) => (Command::Evolve, None, f),
        Sub::Channel(f) => (Command::Channel, None, f),
        Sub::Figure { figure, flags } => (Command::Figure, figure, flags),
        Sub::Sweep(f) => (Command::Sweep, None, f),
        Sub::ValidateOracles(f) => (Command::ValidateOracles, None, f),
    };
    let mut settings = match &flags.config {
        Some(path) => read_settings(path)?,
        None => Settings::default(),
    };
    if let Some(e) = settings.get("command") {
        if e.value != command.tag() {
            return Err(CliError::usage(
                "--config",
                format!("file is for command '{}' but '{}' was requested", e.value, command.tag()),
            ));
        }
    }
    settings.set_flag("figure", figure);
    flags.apply(&mut settings);
    settings.into_config(command)
}

fn read_settings(path: &Path) -> Result<Settings, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    Settings::parse_file(&text)
}

/// Loads a config file on its own. Without a `command` key the file is
/// taken to describe a sweep.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    parse_config_str(&std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, CliError> {
    let settings = Settings::parse_file(text)?;
    let command = match settings.get("command") {
        Some(e) => e.value.parse::<Command>().map_err(|m| err_at("command", e.origin, m))?,
        None => Command::Sweep,
    };
    settings.into_config(command)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tritangle::channels::ChannelKind;

    fn args(line: &str) -> Result<RunConfig, CliError> {
        parse_args(std::iter::once("tritangle").chain(line.split_whitespace()))
    }

    #[test]
    fn measure_ghz() {
        let cfg = args("measure --state ghz").unwrap();
        assert_eq!(cfg.command, Command::Measure);
        assert_eq!(cfg.state, Some(StateSpec::Ghz));
    }

    #[test]
    fn evolve_milburn_flags() {
        let cfg = args("evolve --state gghz:0.7 --milburn --gamma 0.5 --B 0.1 --tmax 50 --steps 500").unwrap();
        assert_eq!(cfg.milburn, Some(MilburnParams { gamma: 0.5 }));
        assert_eq!(cfg.hamiltonian.unwrap().b, 0.1);
        assert_eq!(cfg.time, Some(TimeGrid { t_max: 50.0, steps: 500 }));
    }

    #[test]
    fn gamma_without_milburn_is_rejected() {
        let e = args("evolve --state ghz --gamma 0.5").unwrap_err();
        assert_eq!(e.flag(), Some("--gamma"));
        let e = args("evolve --state ghz --milburn").unwrap_err();
        assert_eq!(e.flag(), Some("--gamma"));
    }

    #[test]
    fn channel_domain_violation_names_flag() {
        let e = args("channel --state w --channel pdc --d 1.2").unwrap_err();
        assert_eq!(e.flag(), Some("--channel"));
        assert!(e.to_string().contains("1.2"));
        let ok = args("channel --state w --channel pdc:0.5 --place q1").unwrap();
        assert_eq!(ok.channel, Some(ChannelSpec::Fixed(ChannelKind::PhaseDamping { d: 0.5 })));
        assert_eq!(ok.placement, Some(Placement::FirstQubit));
    }

    #[test]
    fn unknown_and_unused_flags() {
        let e = args("measure --state ghz --bogus 1").unwrap_err();
        assert_eq!(e.kind(), "usage");
        assert_eq!(e.flag(), Some("--bogus"));
        let e = args("measure --state ghz --d 0.5").unwrap_err();
        assert_eq!(e.flag(), Some("--d"));
        let e = args("channel --state w --channel pdc:0.5 --d 0.5").unwrap_err();
        assert_eq!(e.flag(), Some("--d"));
    }

    #[test]
    fn telegraph_needs_both_parameters() {
        let e = args("channel --state ghz --channel ntd --b 1").unwrap_err();
        assert_eq!(e.flag(), Some("--tau"));
        let cfg = args("channel --state ghz --channel ntd --b 1 --tau 2 --place all").unwrap();
        assert_eq!(cfg.telegraph, Some((1.0, 2.0)));
    }

    #[test]
    fn minimal_file_gets_defaults() {
        let cfg = parse_config_str("[scenario]\nid=Pdc1W\n").unwrap();
        assert_eq!(cfg.command, Command::Sweep);
        assert_eq!(cfg.sweep.unwrap().ranges, default_grid(ScenarioId::Pdc1W).ranges);
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let e = parse_config_str("[scenario]\nid = Pdc1W\nd==0.5\n").unwrap_err();
        assert_eq!(e, CliError::Config { line: 3, message: "malformed line 'd==0.5'".into() });
        let e = parse_config_str("id = Pdc1W\n").unwrap_err();
        assert!(matches!(e, CliError::Config { line: 1, .. }));
        let e = parse_config_str("[scenario]\nid = Pdc1W\n[grid]\nd = 0, 2, 10\n").unwrap_err();
        assert!(matches!(e, CliError::Config { line: 4, .. }), "{e:?}");
    }

    #[test]
    fn round_trip_through_config_text() {
        for line in [
            "measure --state wwbar:0.3,0.2",
            "evolve --state gghz:0.7 --milburn --gamma 0.5 --B 0.1 --J 1 --Delta 0.25 --D -0.3 --tmax 50 --steps 500",
            "evolve --state mix-ghz --w1 0.1 --w2 0.2 --out series.csv",
            "channel --state w --channel gadc:0.3,0.1 --place all",
            "channel --state ghz --channel ntd --b 0.5 --tau 3 --tmax 20 --steps 11",
            "figure fig5 --out plots",
            "sweep --scenario AdcWVacuumMix --w 0.2",
            "validate-oracles --scenario Pdc1W",
            "validate-oracles",
        ] {
            let cfg = args(line).unwrap();
            let text = cfg.to_config_string();
            assert_eq!(parse_config_str(&text).unwrap(), cfg, "{line}\n{text}");
        }
    }
}
