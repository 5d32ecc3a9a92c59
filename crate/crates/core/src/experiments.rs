//! Scenario runners, oracle cross-validation, periodicity analysis and the
//! data behind the figure panels.
//!
//! Every scenario is addressed by a [`ScenarioId`] and a flat parameter map.
//! [`numeric_values`] pushes the initial state through the propagator or
//! channel and evaluates the measures; [`closed_values`] evaluates the
//! analytic expressions under the same field names, and [`cross_validate`]
//! compares the two over a grid.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::channels::{self, apply, dephasing_lambda, Placement};
use crate::closedform::{self as cf, AdcVariant, NonMarkovVariant, ScenarioId, WwbarAngle};
use crate::dynamics::{EnergyBasis, HamiltonianParams, MilburnParams};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, Subsystem};
use crate::measures::{
    format_number, full_report_with, gtc_xstate, linear_entropy, pure_one_to_other, rank2_analysis, spectral_itangle,
    wootters_concurrence, Focus, MConvention, MeasureReport,
};
use crate::states::{self, DensityMatrix, PureState};

/// Absolute agreement required between pipeline and closed form.
pub const ORACLE_TOL: f64 = 1e-10;
/// Samples per curve in figure panels.
pub const GRID_POINTS: usize = 2000;
/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "TRITANGLE_THREADS";

pub type Params = BTreeMap<String, f64>;

fn param(p: &Params, name: &str) -> Result<f64> {
    p.get(name).copied().ok_or_else(|| Error::Unsupported(format!("missing parameter {name}")))
}

/// Evenly spaced points including both ends.
pub fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..steps)
            .map(|k| if k + 1 == steps { stop } else { start + (stop - start) * k as f64 / (steps - 1) as f64 })
            .collect(),
    }
}

/// Runs `f` on a pool limited by [`THREADS_ENV`] when it is set.
pub fn with_thread_limit<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let limit = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0);
    match limit.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

// ---------------------------------------------------------------------------
// Scenarios

/// Parameters every scenario accepts, including the Hamiltonian couplings of
/// the Milburn scenarios and the phase of the W/W̄ superposition.
pub fn accepted_params(id: ScenarioId) -> Vec<&'static str> {
    let mut names = id.parameters().to_vec();
    match id {
        ScenarioId::MilburnGGHZ | ScenarioId::MilburnGhzMixture => names.extend(["J", "Delta", "D"]),
        ScenarioId::GadcWWbar => names.push("phi"),
        _ => {}
    }
    names
}

pub fn default_params(id: ScenarioId) -> Params {
    let pairs: &[(&str, f64)] = match id {
        ScenarioId::MilburnGGHZ => {
            &[("a", FRAC_1_SQRT_2), ("B", 0.1), ("gamma", 0.5), ("t", 1.0), ("J", 1.0), ("Delta", 0.5), ("D", 0.3)]
        }
        ScenarioId::MilburnGhzMixture => {
            &[("w1", 0.1), ("w2", 0.2), ("B", 0.1), ("gamma", 0.5), ("t", 1.0), ("J", 1.0), ("Delta", 0.5), ("D", 0.3)]
        }
        ScenarioId::Pdc1W => &[("d", 0.5)],
        ScenarioId::AdcWVacuumMix | ScenarioId::PdcGhzVacuumMix => &[("d", 0.5), ("w", 0.1)],
        ScenarioId::Adc1GGHZ | ScenarioId::Adc3GGHZ => &[("a", FRAC_1_SQRT_2), ("d", 0.5)],
        ScenarioId::NonMarkovGGHZ => &[("a", FRAC_1_SQRT_2), ("b", 1.0), ("tau", 5.0), ("t", 1.0)],
        ScenarioId::NonMarkovGhzMixture => &[("w", 0.1), ("b", 1.0), ("tau", 5.0), ("t", 1.0)],
        ScenarioId::GadcWWbar => &[("theta", 0.0), ("phi", 0.0), ("d", 0.5), ("p", 0.5)],
    };
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Defaults of `id` with the given overrides applied.
pub fn scenario_params(id: ScenarioId, overrides: &[(&str, f64)]) -> Result<Params> {
    let mut p = default_params(id);
    let accepted = accepted_params(id);
    for &(k, v) in overrides {
        if !accepted.contains(&k) {
            return Err(Error::UnknownSelector(format!("{k} (scenario {id})")));
        }
        p.insert(k.to_string(), v);
    }
    Ok(p)
}

fn hamiltonian(p: &Params) -> Result<HamiltonianParams> {
    HamiltonianParams::new(param(p, "J")?, param(p, "Delta")?, param(p, "D")?, param(p, "B")?)
}

/// The state a scenario produces at the given parameters.
pub fn scenario_state(id: ScenarioId, p: &Params) -> Result<DensityMatrix> {
    let g = |name: &str| param(p, name);
    match id {
        ScenarioId::MilburnGGHZ | ScenarioId::MilburnGhzMixture => {
            let rho0 = if id == ScenarioId::MilburnGGHZ {
                states::gghz(g("a")?)?.density()
            } else {
                states::mix_ghz_extremes(g("w1")?, g("w2")?)?
            };
            let t = g("t")?;
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::OutOfRange { name: "t", value: t, domain: "[0, inf)" });
            }
            Ok(EnergyBasis::new(hamiltonian(p)?)?.evolve_milburn(&rho0, MilburnParams::new(g("gamma")?)?, t))
        }
        ScenarioId::Pdc1W => Ok(apply(&states::w().density(), &channels::pdc(g("d")?)?, Placement::FirstQubit)),
        ScenarioId::AdcWVacuumMix => {
            Ok(apply(&states::mix_w_vacuum(g("w")?)?, &channels::adc(g("d")?)?, Placement::AllQubits))
        }
        ScenarioId::Adc1GGHZ | ScenarioId::Adc3GGHZ => {
            let pl = if id == ScenarioId::Adc1GGHZ { Placement::FirstQubit } else { Placement::ThirdQubit };
            Ok(apply(&states::gghz(g("a")?)?.density(), &channels::adc(g("d")?)?, pl))
        }
        ScenarioId::PdcGhzVacuumMix => {
            Ok(apply(&states::mix_ghz_vacuum(g("w")?)?, &channels::pdc(g("d")?)?, Placement::AllQubits))
        }
        ScenarioId::NonMarkovGGHZ | ScenarioId::NonMarkovGhzMixture => {
            let rho0 = if id == ScenarioId::NonMarkovGGHZ {
                states::gghz(g("a")?)?.density()
            } else {
                states::mix_ghz_vacuum(g("w")?)?
            };
            let lambda = dephasing_lambda(g("b")?, g("tau")?, g("t")?)?;
            Ok(apply(&rho0, &channels::nonmarkov_dephasing(lambda)?, Placement::AllQubits))
        }
        ScenarioId::GadcWWbar => {
            let psi = states::wwbar(g("theta")?, g("phi")?)?;
            Ok(apply(&psi.density(), &channels::gadc(g("d")?, g("p")?)?, Placement::AllQubits))
        }
    }
}

fn pair_concurrence(rho: &DensityMatrix, s: Subsystem) -> Result<f64> {
    wootters_concurrence(&partial_trace(rho.matrix(), s))
}

type Fields = Vec<(&'static str, f64)>;

/// Measured counterparts of the closed-form fields.
pub fn numeric_values(id: ScenarioId, p: &Params) -> Result<Fields> {
    if id == ScenarioId::GadcWWbar {
        return gadc_numeric(p);
    }
    let rho = scenario_state(id, p)?;
    let conv = id.convention();
    let a = rank2_analysis(&rho, Focus::A, conv)?;
    let mut out = match id {
        ScenarioId::MilburnGGHZ
        | ScenarioId::MilburnGhzMixture
        | ScenarioId::Adc1GGHZ
        | ScenarioId::Adc3GGHZ
        | ScenarioId::NonMarkovGGHZ
        | ScenarioId::NonMarkovGhzMixture => vec![("c2_a_bc", a.c2), ("gtc", gtc_xstate(&rho)?)],
        ScenarioId::Pdc1W => vec![
            ("c2_a_bc", a.c2),
            ("c2_b_ac", rank2_analysis(&rho, Focus::B, conv)?.c2),
            ("c2_ab", pair_concurrence(&rho, Subsystem::AB)?.powi(2)),
            ("c2_bc", pair_concurrence(&rho, Subsystem::BC)?.powi(2)),
        ],
        ScenarioId::AdcWVacuumMix => vec![
            ("c2_a_bc", a.c2),
            ("c2_pair", pair_concurrence(&rho, Subsystem::AB)?.powi(2)),
            ("s_lin", linear_entropy(&rho)),
        ],
        ScenarioId::PdcGhzVacuumMix => {
            vec![("gmc", gtc_xstate(&rho)?), ("s_lin", linear_entropy(&rho)), ("c2_smallw", a.c2)]
        }
        ScenarioId::GadcWWbar => unreachable!("returned above"),
    };
    if matches!(id, ScenarioId::Pdc1W | ScenarioId::NonMarkovGhzMixture) {
        if let Some(m) = a.m_min {
            out.push(("m_min", m));
        }
    }
    Ok(out)
}

fn gadc_numeric(p: &Params) -> Result<Fields> {
    let rho = scenario_state(ScenarioId::GadcWWbar, p)?;
    let theta = WwbarAngle::from_radians(param(p, "theta")?)?;
    let mut out = vec![("c_pair", pair_concurrence(&rho, Subsystem::AB)?)];
    if theta != WwbarAngle::QuarterPi {
        out.push(("c2_spectral", spectral_itangle(&rho, Focus::A)?));
    }
    Ok(out)
}

/// Closed-form fields of a scenario.
pub fn closed_values(id: ScenarioId, p: &Params) -> Result<Fields> {
    let g = |name: &str| param(p, name);
    Ok(match id {
        ScenarioId::MilburnGGHZ => {
            let r = cf::milburn_closed(g("a")?, g("B")?, g("gamma")?, g("t")?, 0.0, 0.0)?;
            vec![("c2_a_bc", r.c2_a_bc), ("gtc", r.gtc)]
        }
        ScenarioId::MilburnGhzMixture => {
            let r = cf::milburn_closed(FRAC_1_SQRT_2, g("B")?, g("gamma")?, g("t")?, g("w1")?, g("w2")?)?;
            vec![("c2_a_bc", r.c2_a_bc), ("gtc", r.gtc)]
        }
        ScenarioId::Pdc1W => {
            let r = cf::pdc1_w_closed(g("d")?)?;
            vec![
                ("c2_a_bc", r.c2_a_bc),
                ("c2_b_ac", r.c2_b_ac),
                ("c2_ab", r.c2_ab),
                ("c2_bc", r.c2_bc),
                ("m_min", r.m_min),
            ]
        }
        ScenarioId::AdcWVacuumMix => {
            let r = cf::adc_w_vacuum_closed(g("d")?, g("w")?)?;
            vec![("c2_a_bc", r.c2_a_bc), ("c2_pair", r.c2_pair), ("s_lin", r.s_lin)]
        }
        ScenarioId::Adc1GGHZ | ScenarioId::Adc3GGHZ => {
            let v = if id == ScenarioId::Adc1GGHZ { AdcVariant::First } else { AdcVariant::Third };
            let r = cf::gghz_adc_closed(g("a")?, g("d")?, v)?;
            vec![("c2_a_bc", r.c2_a_bc), ("gtc", r.gtc)]
        }
        ScenarioId::PdcGhzVacuumMix => {
            let r = cf::ghz_vacuum_pdc_closed(g("d")?, g("w")?)?;
            vec![("gmc", r.gmc), ("s_lin", r.s_lin), ("c2_smallw", r.c2_smallw)]
        }
        ScenarioId::NonMarkovGGHZ => {
            let r = cf::nonmarkov_closed(g("a")?, 0.0, g("b")?, g("tau")?, g("t")?, NonMarkovVariant::PureGGHZ)?;
            vec![("c2_a_bc", r.c2_a_bc), ("gtc", r.gtc)]
        }
        ScenarioId::NonMarkovGhzMixture => {
            let r = cf::nonmarkov_closed(0.0, g("w")?, g("b")?, g("tau")?, g("t")?, NonMarkovVariant::GhzMixture)?;
            vec![("c2_a_bc", r.c2_a_bc), ("gtc", r.gtc), ("m_min", r.m_min)]
        }
        ScenarioId::GadcWWbar => {
            let r = cf::gadc_wwbar_closed(WwbarAngle::from_radians(g("theta")?)?, g("d")?, g("p")?)?;
            let mut v = vec![("c_pair", r.c_pair)];
            if let Some(s) = r.c2_spectral {
                v.push(("c2_spectral", s));
            }
            v
        }
    })
}

/// Allowed deviation for one field at one grid point.
pub fn field_bound(id: ScenarioId, field: &str, p: &Params) -> f64 {
    if id == ScenarioId::PdcGhzVacuumMix && field == "c2_smallw" {
        let w = p.get("w").copied().unwrap_or(0.0);
        (10.0 * w.powi(4)).max(ORACLE_TOL)
    } else {
        ORACLE_TOL
    }
}

// ---------------------------------------------------------------------------
// Sweeps

#[derive(Clone, Debug, PartialEq)]
pub struct ParamRange {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t_max: f64,
    pub steps: usize,
}

/// A scenario with fixed parameters and a cartesian grid over the others.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub scenario: ScenarioId,
    pub fixed: Params,
    pub ranges: Vec<ParamRange>,
    pub time: Option<TimeGrid>,
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    pub fn new(scenario: ScenarioId) -> Self {
        Self { scenario, fixed: Params::new(), ranges: Vec::new(), time: None, output: None }
    }

    pub fn range(mut self, name: &str, start: f64, stop: f64, steps: usize) -> Self {
        self.ranges.push(ParamRange { name: name.to_string(), start, stop, steps });
        self
    }

    pub fn fix(mut self, name: &str, value: f64) -> Self {
        self.fixed.insert(name.to_string(), value);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let accepted = accepted_params(self.scenario);
        let known = |n: &str| accepted.contains(&n);
        for name in self.fixed.keys() {
            if !known(name) {
                return Err(Error::UnknownSelector(format!("{name} (scenario {})", self.scenario)));
            }
        }
        for r in &self.ranges {
            if !known(&r.name) {
                return Err(Error::UnknownSelector(format!("{} (scenario {})", r.name, self.scenario)));
            }
            if r.steps < 2 {
                return Err(Error::OutOfRange { name: "steps", value: r.steps as f64, domain: ">= 2" });
            }
            if !(r.start.is_finite() && r.stop.is_finite()) {
                return Err(Error::OutOfRange { name: "range", value: r.start, domain: "finite" });
            }
        }
        if let Some(tg) = self.time {
            if !known("t") {
                return Err(Error::Unsupported(format!("scenario {} has no time parameter", self.scenario)));
            }
            if tg.steps < 2 {
                return Err(Error::OutOfRange { name: "steps", value: tg.steps as f64, domain: ">= 2" });
            }
            if !(tg.t_max.is_finite() && tg.t_max > 0.0) {
                return Err(Error::OutOfRange { name: "tmax", value: tg.t_max, domain: "(0, inf)" });
            }
        }
        Ok(())
    }

    /// Names of the swept axes, time last.
    pub fn axes(&self) -> Vec<String> {
        let mut names: Vec<String> = self.ranges.iter().map(|r| r.name.clone()).collect();
        if self.time.is_some() {
            names.push("t".to_string());
        }
        names
    }

    /// Grid points in row-major order, the last axis varying fastest.
    pub fn points(&self) -> Result<Vec<Params>> {
        self.validate()?;
        let mut base = default_params(self.scenario);
        base.extend(self.fixed.iter().map(|(k, v)| (k.clone(), *v)));
        let mut axes: Vec<(String, Vec<f64>)> =
            self.ranges.iter().map(|r| (r.name.clone(), linspace(r.start, r.stop, r.steps))).collect();
        if let Some(tg) = self.time {
            axes.push(("t".to_string(), linspace(0.0, tg.t_max, tg.steps)));
        }
        let mut out = vec![base];
        for (name, values) in &axes {
            out = out
                .iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.insert(name.clone(), v);
                        q
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

/// Reference grid of at least 400 points used for oracle validation.
pub fn default_grid(id: ScenarioId) -> SweepSpec {
    let s = SweepSpec::new(id);
    match id {
        ScenarioId::MilburnGGHZ => s.range("a", 0.0, 1.0, 20).range("B", -0.5, 0.5, 20).range("t", 0.0, 20.0, 20),
        ScenarioId::MilburnGhzMixture => {
            s.range("w1", 0.0, 0.45, 10).range("w2", 0.0, 0.45, 10).range("t", 0.0, 20.0, 20)
        }
        ScenarioId::Pdc1W => s.range("d", 0.0, 1.0, 400),
        ScenarioId::AdcWVacuumMix => s.range("d", 0.0, 1.0, 20).range("w", 0.0, 1.0, 20),
        ScenarioId::Adc1GGHZ | ScenarioId::Adc3GGHZ => s.range("a", 0.0, 1.0, 20).range("d", 0.0, 1.0, 20),
        ScenarioId::PdcGhzVacuumMix => s.range("d", 0.0, 1.0, 20).range("w", 0.0, 0.2, 20),
        ScenarioId::NonMarkovGGHZ => s.range("a", 0.0, 1.0, 20).range("t", 0.0, 40.0, 20),
        ScenarioId::NonMarkovGhzMixture => s.range("w", 0.0, 1.0, 20).range("t", 0.0, 40.0, 20),
        ScenarioId::GadcWWbar => s.range("theta", 0.0, FRAC_PI_2, 3).range("d", 0.0, 1.0, 20).range("p", 0.0, 1.0, 20),
    }
}

/// Worst agreement of one field across a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDeviation {
    pub field: &'static str,
    pub compared: usize,
    pub max_dev: f64,
    pub worst: Option<Params>,
    /// Grid points where the deviation exceeded [`field_bound`].
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossValidation {
    pub scenario: ScenarioId,
    pub points: usize,
    pub fields: Vec<FieldDeviation>,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.fields.iter().all(|f| f.violations == 0)
    }

    pub fn max_dev(&self) -> f64 {
        self.fields.iter().map(|f| f.max_dev).fold(0.0, f64::max)
    }
}

impl fmt::Display for CrossValidation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} points={} {}", self.scenario, self.points, if self.passed() { "pass" } else { "fail" })?;
        for d in &self.fields {
            write!(f, "  {:<12} max_dev={:.3e} violations={}/{}", d.field, d.max_dev, d.violations, d.compared)?;
            if let Some(w) = &d.worst {
                let at: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v:.6}")).collect();
                write!(f, " worst at {}", at.join(" "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Compares the numeric pipeline against the closed forms at every grid point.
pub fn cross_validate(id: ScenarioId, grid: &SweepSpec) -> Result<CrossValidation> {
    if grid.scenario != id {
        return Err(Error::Unsupported(format!("grid belongs to {}, not {id}", grid.scenario)));
    }
    let points = grid.points()?;
    let per_point: Vec<(Fields, Fields)> = with_thread_limit(|| {
        points.par_iter().map(|p| Ok((numeric_values(id, p)?, closed_values(id, p)?))).collect::<Result<Vec<_>>>()
    })?;
    let mut fields: Vec<FieldDeviation> = Vec::new();
    for (p, (num, closed)) in points.iter().zip(&per_point) {
        for &(name, expected) in closed {
            let Some(&(_, got)) = num.iter().find(|(n, _)| *n == name) else { continue };
            let dev = (got - expected).abs();
            let idx = match fields.iter().position(|f| f.field == name) {
                Some(i) => i,
                None => {
                    fields.push(FieldDeviation { field: name, compared: 0, max_dev: 0.0, worst: None, violations: 0 });
                    fields.len() - 1
                }
            };
            let entry = &mut fields[idx];
            entry.compared += 1;
            if !(dev <= field_bound(id, name, p)) {
                entry.violations += 1;
            }
            if !(dev <= entry.max_dev) {
                entry.max_dev = dev;
                entry.worst = Some(p.clone());
            }
        }
    }
    Ok(CrossValidation { scenario: id, points: points.len(), fields })
}

/// One row per grid point: the swept values followed by a full report.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub coords: Vec<f64>,
    pub report: MeasureReport,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let axes = spec.axes();
    let points = spec.points()?;
    let conv = spec.scenario.convention();
    with_thread_limit(|| {
        points
            .par_iter()
            .map(|p| {
                let report = full_report_with(&scenario_state(spec.scenario, p)?, conv)?;
                Ok(SweepRow { coords: axes.iter().map(|a| p[a]).collect(), report })
            })
            .collect()
    })
}

fn io_err(path: &Path, e: impl fmt::Display) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    wtr.write_record(header).map_err(|e| io_err(path, e))?;
    for r in rows {
        wtr.write_record(r).map_err(|e| io_err(path, e))?;
    }
    wtr.flush().map_err(|e| io_err(path, e))
}

/// Writes sweep rows with a `scenario` column, the axes and the report columns.
pub fn write_sweep_csv(spec: &SweepSpec, rows: &[SweepRow], path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    write_sweep_csv_to(spec, rows, file).map_err(|e| io_err(path, e))
}

/// [`write_sweep_csv`] into any writer.
pub fn write_sweep_csv_to(spec: &SweepSpec, rows: &[SweepRow], sink: impl std::io::Write) -> csv::Result<()> {
    let mut header = vec!["scenario".to_string()];
    header.extend(spec.axes());
    header.extend(MeasureReport::CSV_COLUMNS.iter().map(|s| s.to_string()));
    let mut wtr = csv::Writer::from_writer(sink);
    wtr.write_record(&header)?;
    for r in rows {
        let mut rec = vec![spec.scenario.to_string()];
        rec.extend(r.coords.iter().map(|&x| format_number(x)));
        rec.extend(r.report.csv_fields());
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Frequencies and periods

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrequencyKind {
    Bipartite,
    OneToOther,
}

/// Non-negative angular frequencies in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencySet {
    values: Vec<f64>,
}

impl FrequencySet {
    pub fn new(values: impl IntoIterator<Item = f64>) -> Self {
        let mut values: Vec<f64> = values.into_iter().map(f64::abs).collect();
        values.sort_by(f64::total_cmp);
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Oscillation frequencies of the evolved gW pair or one-to-other concurrences.
pub fn gw_frequencies(p: HamiltonianParams, kind: FrequencyKind) -> FrequencySet {
    let (j, d) = (p.j, p.d);
    let s3 = 3f64.sqrt();
    match kind {
        FrequencyKind::Bipartite => {
            FrequencySet::new([6.0 * j, 2.0 * s3 * d, 4.0 * s3 * d, 2.0 * s3 * d - 6.0 * j, 2.0 * s3 * d + 6.0 * j])
        }
        FrequencyKind::OneToOther => FrequencySet::new([
            4.0 * s3 * d,
            8.0 * s3 * d,
            4.0 * (s3 * d - 3.0 * j),
            12.0 * j,
            6.0 * (s3 * d - j),
            6.0 * (s3 * d + j),
            4.0 * (s3 * d + 3.0 * j),
            2.0 * (s3 * d - 3.0 * j),
            2.0 * (s3 * d + 3.0 * j),
        ]),
    }
}

/// Continued-fraction approximation p/q of `x ≥ 0` within `tol`, q ≤ `max_den`.
pub fn rational_approx(x: f64, tol: f64, max_den: u64) -> Option<(u64, u64)> {
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > u32::MAX as f64 {
            return None;
        }
        let a = a as u64;
        let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
        if k2 > max_den {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac <= 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Denominator bound of the rational approximations in [`common_period`].
pub const MAX_DENOMINATOR: u64 = 1000;

/// Smallest T > 0 at which every frequency completes a whole number of cycles.
///
/// Frequencies below `tol` are ignored; `None` when nothing oscillates or the
/// ratios are not rational within the denominator bound.
pub fn common_period(f: &FrequencySet, tol: f64) -> Option<f64> {
    let active: Vec<f64> = f.values().iter().copied().filter(|&w| w > tol).collect();
    let reference = *active.last()?;
    let mut lcm = 1u64;
    for &w in &active {
        let (_, q) = rational_approx(w / reference, tol, MAX_DENOMINATOR)?;
        lcm = lcm / gcd(lcm, q) * q;
        if lcm > MAX_DENOMINATOR {
            return None;
        }
    }
    Some(2.0 * PI * lcm as f64 / reference)
}

/// Detects the fundamental period of a sampled multichannel signal.
///
/// The squared-difference function is normalized by its running mean and the
/// first lag under `threshold` is taken, descended to its local minimum and
/// refined by a parabola through the neighbouring lags. Lags up to half the
/// record are examined.
pub fn detect_period(samples: &[Vec<f64>], dt: f64, threshold: f64) -> Option<f64> {
    let n = samples.len();
    let max_lag = n / 2;
    let window = n - max_lag;
    let diff = |lag: usize| -> f64 {
        (0..window).map(|i| samples[i].iter().zip(&samples[i + lag]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()).sum()
    };
    let d: Vec<f64> = (0..=max_lag).map(diff).collect();
    let mut running = 0.0;
    let mut norm = vec![1.0; d.len()];
    for lag in 1..d.len() {
        running += d[lag];
        norm[lag] = if running > 0.0 { d[lag] * lag as f64 / running } else { 0.0 };
    }
    let mut lag = (2..max_lag).find(|&k| norm[k] < threshold)?;
    while lag + 1 < max_lag && d[lag + 1] < d[lag] {
        lag += 1;
    }
    let (y0, y1, y2) = (d[lag - 1], d[lag], d[lag + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    let shift = if denom > 0.0 { (0.5 * (y0 - y2) / denom).clamp(-0.5, 0.5) } else { 0.0 };
    Some((lag as f64 + shift) * dt)
}

/// Pair concurrences (AB, AC, BC) and one-to-other concurrences (A, B, C)
/// of the evolved gW state.
pub fn gw_concurrences(basis: &EnergyBasis, psi0: &PureState, t: f64) -> Result<([f64; 3], [f64; 3])> {
    let psi = basis.evolve_pure(psi0, t);
    let rho = psi.density();
    let pair = [
        pair_concurrence(&rho, Subsystem::AB)?,
        pair_concurrence(&rho, Subsystem::AC)?,
        pair_concurrence(&rho, Subsystem::BC)?,
    ];
    let one =
        [pure_one_to_other(&psi, Focus::A)?, pure_one_to_other(&psi, Focus::B)?, pure_one_to_other(&psi, Focus::C)?];
    Ok((pair, one))
}

/// Recurrence period of the gW(1/√2, 1/√2) concurrences measured from the
/// simulated curves.
pub fn measured_gw_period(p: HamiltonianParams, kind: FrequencyKind, t_span: f64, dt: f64) -> Result<Option<f64>> {
    let basis = EnergyBasis::new(p)?;
    let psi0 = states::gw(FRAC_1_SQRT_2, FRAC_1_SQRT_2)?;
    let steps = (t_span / dt).round() as usize + 1;
    let samples: Vec<Vec<f64>> = with_thread_limit(|| {
        (0..steps)
            .into_par_iter()
            .map(|k| {
                let (pair, one) = gw_concurrences(&basis, &psi0, k as f64 * dt)?;
                Ok(match kind {
                    FrequencyKind::Bipartite => pair.to_vec(),
                    FrequencyKind::OneToOther => one.to_vec(),
                })
            })
            .collect::<Result<_>>()
    })?;
    Ok(detect_period(&samples, dt, 1e-2))
}

// ---------------------------------------------------------------------------
// Extremum location

/// Vertex of the parabola through three equally spaced samples around `k`.
pub fn parabolic_peak(xs: &[f64], ys: &[f64], k: usize) -> (f64, f64) {
    if k == 0 || k + 1 >= xs.len() {
        return (xs[k], ys[k]);
    }
    let (y0, y1, y2) = (ys[k - 1], ys[k], ys[k + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    if denom == 0.0 {
        return (xs[k], y1);
    }
    let s = (0.5 * (y0 - y2) / denom).clamp(-1.0, 1.0);
    let h = xs[k + 1] - xs[k];
    (xs[k] + s * h, y1 - 0.25 * (y0 - y2) * s)
}

/// Golden-section maximum of a unimodal function on [a, b].
pub fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            (x2, f2) = (x1, f1);
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            (x1, f1) = (x2, f2);
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

/// Global minimum of `f` on [lo, hi]: grid bracket followed by golden section.
pub fn minimize_on(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, grid: usize, tol: f64) -> Result<(f64, f64)> {
    let xs = linspace(lo, hi, grid.max(3));
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let k = ys.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(k, _)| k).unwrap_or(0);
    let (a, b) = (xs[k.saturating_sub(1)], xs[(k + 1).min(xs.len() - 1)]);
    let (x, y) = golden_max(|x| f(x).map(|v| -v), a, b, tol)?;
    Ok((x, -y))
}

/// Earliest global maximum of `f` sampled on `xs`, refined by golden section
/// inside the bracketing samples. Samples within `tie` of the largest value
/// count as maxima.
pub fn first_global_max(f: impl Fn(f64) -> Result<f64>, xs: &[f64], tie: f64) -> Result<(f64, f64)> {
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let top = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = (0..ys.len())
        .find(|&k| ys[k] >= top - tie && (k == 0 || ys[k] >= ys[k - 1]) && (k + 1 == ys.len() || ys[k] >= ys[k + 1]))
        .unwrap_or(0);
    let (a, b) = (xs[k.saturating_sub(1)], xs[(k + 1).min(xs.len() - 1)]);
    golden_max(f, a, b, 1e-12)
}

/// Location and height of a maximum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    pub t: f64,
    pub value: f64,
}

/// GTC and concurrence-fill maxima of the evolved gW(1/√2, 1/√2) state at
/// J = 1 and the given DM strength, searched over one recurrence period.
pub fn gw_tripartite_peaks(d: f64) -> Result<(Peak, Peak)> {
    let hp = HamiltonianParams::new(1.0, 1.0, d, 0.0)?;
    let basis = EnergyBasis::new(hp)?;
    let psi0 = states::gw(FRAC_1_SQRT_2, FRAC_1_SQRT_2)?;
    let span = gw_span(hp) / 2.0;
    let xs = linspace(0.0, span, GRID_POINTS);
    let gtc = |t: f64| {
        let (_, c) = gw_concurrences(&basis, &psi0, t)?;
        Ok(c[0].min(c[1]).min(c[2]))
    };
    let fill = |t: f64| {
        let (_, c) = gw_concurrences(&basis, &psi0, t)?;
        crate::measures::fill_from_sides(c[0] * c[0], c[1] * c[1], c[2] * c[2])
    };
    let (tg, vg) = first_global_max(gtc, &xs, 1e-6)?;
    let (tf, vf) = first_global_max(fill, &xs, 1e-6)?;
    Ok((Peak { t: tg, value: vg }, Peak { t: tf, value: vf }))
}

/// Two periods of the slower of the pair and one-to-other recurrences.
fn gw_span(hp: HamiltonianParams) -> f64 {
    let period = |k| common_period(&gw_frequencies(hp, k), 1e-9).unwrap_or(2.0 * PI);
    2.0 * period(FrequencyKind::Bipartite).max(period(FrequencyKind::OneToOther))
}

// ---------------------------------------------------------------------------
// Dark periods

/// A zero of Λ(t) and what the I-tangle does there and afterwards.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DarkPeriod {
    pub t: f64,
    /// C²_{A|BC} at the zero.
    pub c2: f64,
    /// Largest C²_{A|BC} sampled between this zero and the next one.
    pub revival: f64,
}

/// Zeros of Λ on [0, t_max] for the dephased gGHZ(a) with the I-tangle at
/// each zero and the subsequent revival.
pub fn dark_periods(a: f64, b: f64, tau: f64, t_max: f64) -> Result<Vec<DarkPeriod>> {
    let lam = |t: f64| dephasing_lambda(b, tau, t);
    let c2 = |t: f64| {
        let p = scenario_params(ScenarioId::NonMarkovGGHZ, &[("a", a), ("b", b), ("tau", tau), ("t", t)])?;
        Ok::<f64, Error>(numeric_values(ScenarioId::NonMarkovGGHZ, &p)?[0].1)
    };
    let ts = linspace(0.0, t_max, GRID_POINTS * 4);
    let mut zeros = Vec::new();
    for w in ts.windows(2) {
        let (l0, l1) = (lam(w[0])?, lam(w[1])?);
        if l0 == 0.0 {
            zeros.push(w[0]);
        } else if l0 * l1 < 0.0 {
            let (mut lo, mut hi) = (w[0], w[1]);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if lam(mid)? * l0 > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 * hi.max(1.0) {
                    break;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
    }
    let mut out = Vec::with_capacity(zeros.len());
    for (k, &z) in zeros.iter().enumerate() {
        let end = zeros.get(k + 1).copied().unwrap_or(t_max);
        let revival =
            linspace(z, end, 200).into_iter().map(c2).collect::<Result<Vec<f64>>>()?.into_iter().fold(0.0, f64::max);
        out.push(DarkPeriod { t: z, c2: c2(z)?, revival });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Figures

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL.iter().copied().find(|f| f.tag() == s).ok_or_else(|| Error::UnknownSelector(s.to_string()))
    }
}

/// Tabular data of one figure panel.
#[derive(Clone, Debug, PartialEq)]
pub struct Panel {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

type StateFn = Box<dyn Fn(f64) -> Result<DensityMatrix> + Send + Sync>;

struct Curve {
    label: String,
    xs: Vec<f64>,
    state: StateFn,
}

fn curve(label: impl Into<String>, xs: Vec<f64>, state: StateFn) -> Curve {
    Curve { label: label.into(), xs, state }
}

fn report_panel(name: String, var: &str, conv: MConvention, curves: Vec<Curve>) -> Result<Panel> {
    let mut header = vec!["curve".to_string(), var.to_string()];
    header.extend(MeasureReport::CSV_COLUMNS.iter().map(|s| s.to_string()));
    let mut rows = Vec::new();
    for c in &curves {
        let chunk: Vec<Vec<String>> =
            c.xs.par_iter()
                .map(|&x| {
                    let report = full_report_with(&(c.state)(x)?, conv)?;
                    let mut rec = vec![c.label.clone(), format_number(x)];
                    rec.extend(report.csv_fields());
                    Ok(rec)
                })
                .collect::<Result<_>>()?;
        rows.extend(chunk);
    }
    Ok(Panel { name, header, rows })
}

fn milburn_state(rho0: DensityMatrix, b: f64, gamma: f64) -> Result<StateFn> {
    let basis = EnergyBasis::new(HamiltonianParams::new(1.0, 0.5, 0.3, b)?)?;
    let m = MilburnParams::new(gamma)?;
    Ok(Box::new(move |t| Ok(basis.evolve_milburn(&rho0, m, t))))
}

fn channel_state(rho0: DensityMatrix, place: Placement, build: fn(f64) -> Result<channels::KrausChannel>) -> StateFn {
    Box::new(move |x| Ok(apply(&rho0, &build(x)?, place)))
}

fn label(name: &str, v: f64) -> String {
    format!("{name}={v}")
}

fn scenario_curve(
    id: ScenarioId,
    lbl: String,
    var: &'static str,
    xs: Vec<f64>,
    fixed: Vec<(&'static str, f64)>,
) -> Curve {
    let state: StateFn = Box::new(move |x| {
        let mut over = fixed.clone();
        over.push((var, x));
        scenario_state(id, &scenario_params(id, &over)?)
    });
    curve(lbl, xs, state)
}

/// Panels of a figure, evaluated in memory.
pub fn figure_panels(fig: FigureId) -> Result<Vec<Panel>> {
    with_thread_limit(|| figure_panels_inner(fig))
}

fn figure_panels_inner(fig: FigureId) -> Result<Vec<Panel>> {
    let n = GRID_POINTS;
    let unit = || linspace(0.0, 1.0, n);
    let tag = fig.tag();
    let pn = |side: &str| format!("{tag}_{side}");
    let corr = MConvention::Corrected;
    match fig {
        FigureId::Fig1 => {
            let mut panels = Vec::new();
            for (side, d, lbl) in [("left", 0.0, "D=0"), ("right", 3f64.sqrt(), "D=sqrt3")] {
                let hp = HamiltonianParams::new(1.0, 1.0, d, 0.0)?;
                let basis = EnergyBasis::new(hp)?;
                let psi0 = states::gw(FRAC_1_SQRT_2, FRAC_1_SQRT_2)?;
                let state: StateFn = Box::new(move |t| Ok(basis.evolve_pure(&psi0, t).density()));
                panels.push(report_panel(pn(side), "t", corr, vec![curve(lbl, linspace(0.0, gw_span(hp), n), state)])?);
            }
            Ok(panels)
        }
        FigureId::Fig2 => {
            let vn: StateFn = Box::new(|a| {
                let basis = EnergyBasis::new(HamiltonianParams::new(1.0, 0.5, 0.3, 0.1)?)?;
                Ok(basis.evolve(&states::gghz(a)?.density(), 1.0))
            });
            let left = report_panel(pn("left"), "a", corr, vec![curve("von-neumann", unit(), vn)])?;
            let mut curves = Vec::new();
            for a in [0.25, 0.5, FRAC_1_SQRT_2] {
                let lbl = if a == FRAC_1_SQRT_2 { "a=1/sqrt2".to_string() } else { label("a", a) };
                curves.push(curve(lbl, linspace(0.0, 20.0, n), milburn_state(states::gghz(a)?.density(), 0.1, 0.5)?));
            }
            Ok(vec![left, report_panel(pn("right"), "t", corr, curves)?])
        }
        FigureId::Fig3 => {
            let ghz = || states::ghz().density();
            let ts = || linspace(0.0, 20.0, n);
            let mut left = Vec::new();
            for g in [100.0, 5.0, 0.5] {
                left.push(curve(label("gamma", g), ts(), milburn_state(ghz(), 0.1, g)?));
            }
            let mut right = Vec::new();
            for b in [0.1, 0.2, 0.3] {
                right.push(curve(label("B", b), ts(), milburn_state(ghz(), b, 0.5)?));
            }
            Ok(vec![report_panel(pn("left"), "t", corr, left)?, report_panel(pn("right"), "t", corr, right)?])
        }
        FigureId::Fig4 => {
            let conv = ScenarioId::Pdc1W.convention();
            let mk =
                || vec![curve("W", unit(), channel_state(states::w().density(), Placement::FirstQubit, channels::pdc))];
            Ok(vec![report_panel(pn("left"), "d", conv, mk())?, report_panel(pn("right"), "d", conv, mk())?])
        }
        FigureId::Fig5 => {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (id, v) in [(ScenarioId::Adc1GGHZ, "I"), (ScenarioId::Adc3GGHZ, "III")] {
                for d in [0.3, 0.5, 0.9] {
                    left.push(scenario_curve(id, format!("{v}:d={d}"), "a", unit(), vec![("d", d)]));
                }
                for (a, al) in [(0.9, "0.9"), (FRAC_1_SQRT_2, "1/sqrt2"), (0.5, "0.5")] {
                    right.push(scenario_curve(id, format!("{v}:a={al}"), "d", unit(), vec![("a", a)]));
                }
            }
            Ok(vec![report_panel(pn("left"), "a", corr, left)?, report_panel(pn("right"), "d", corr, right)?])
        }
        FigureId::Fig6 => {
            let id = ScenarioId::NonMarkovGGHZ;
            let mk = || {
                [(FRAC_1_SQRT_2, "1/sqrt2"), (0.5, "0.5"), (0.3, "0.3")]
                    .into_iter()
                    .map(|(a, al)| {
                        scenario_curve(
                            id,
                            format!("a={al}"),
                            "t",
                            linspace(0.0, 60.0, n),
                            vec![("a", a), ("b", 1.0), ("tau", 5.0)],
                        )
                    })
                    .collect::<Vec<_>>()
            };
            let conv = id.convention();
            Ok(vec![report_panel(pn("left"), "t", conv, mk())?, report_panel(pn("right"), "t", conv, mk())?])
        }
        FigureId::Fig7 => {
            let id = ScenarioId::NonMarkovGhzMixture;
            let mut panels = Vec::new();
            for (side, tau) in [("left", 2.0), ("right", 20.0)] {
                let curves = [0.0, 0.1, 0.3, 0.5]
                    .into_iter()
                    .map(|w| {
                        scenario_curve(
                            id,
                            label("w", w),
                            "t",
                            linspace(0.0, 100.0, n),
                            vec![("w", w), ("b", 1.0), ("tau", tau)],
                        )
                    })
                    .collect();
                panels.push(report_panel(pn(side), "t", id.convention(), curves)?);
            }
            Ok(panels)
        }
        FigureId::Fig8 => {
            let id = ScenarioId::GadcWWbar;
            let mut panels = Vec::new();
            for (theta, ttag) in
                [(WwbarAngle::Zero, "theta0"), (WwbarAngle::HalfPi, "halfpi"), (WwbarAngle::QuarterPi, "quarterpi")]
            {
                let curves = [0.0, 0.1, 0.5, 0.8, 1.0]
                    .into_iter()
                    .map(|p| scenario_curve(id, label("p", p), "d", unit(), vec![("theta", theta.radians()), ("p", p)]))
                    .collect();
                panels.push(report_panel(pn(ttag), "d", corr, curves)?);
                let rows = unit()
                    .par_iter()
                    .map(|&p| {
                        let d = cf::d_esd(theta, p, cf::D_ESD_TOL).map(format_number).unwrap_or_default();
                        vec![ttag.to_string(), format_number(p), d]
                    })
                    .collect();
                panels.push(Panel {
                    name: pn(&format!("{ttag}_esd")),
                    header: vec!["curve".into(), "p".into(), "d_esd".into()],
                    rows,
                });
            }
            Ok(panels)
        }
        FigureId::Fig9 => {
            let id = ScenarioId::GadcWWbar;
            let mut panels = Vec::new();
            for (side, theta) in [("left", 0.0), ("right", FRAC_PI_2)] {
                let curves = [0.0, 0.5, 1.0]
                    .into_iter()
                    .map(|p| scenario_curve(id, label("p", p), "d", unit(), vec![("theta", theta), ("p", p)]))
                    .collect();
                panels.push(report_panel(pn(side), "d", corr, curves)?);
            }
            let mut rows = Vec::new();
            for (name, f) in [("W", cf::spectral_w_closed as fn(f64, f64) -> f64), ("Wbar", cf::spectral_wbar_closed)] {
                for p in [0.0, 0.5, 1.0] {
                    for d in unit() {
                        rows.push(vec![format!("{name}:p={p}"), format_number(d), format_number(f(d, p))]);
                    }
                }
            }
            panels.push(Panel {
                name: pn("closed"),
                header: vec!["curve".into(), "d".into(), "c2_spectral".into()],
                rows,
            });
            Ok(panels)
        }
    }
}

/// Writes one `<fig>_<panel>.csv` per panel into `out` and returns the paths.
pub fn run_figure(fig: FigureId, out: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let panels = figure_panels(fig)?;
    let mut paths = Vec::with_capacity(panels.len());
    for p in &panels {
        let path = out.join(format!("{}.csv", p.name));
        write_csv(&path, &p.header, &p.rows)?;
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_both_ends() {
        let v = linspace(0.0, 1.0, 11);
        assert_eq!(v.len(), 11);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[10], 1.0);
        assert!((v[3] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn rational_approx_examples() {
        assert_eq!(rational_approx(0.75, 1e-12, 1000), Some((3, 4)));
        assert_eq!(rational_approx(1.0, 1e-12, 1000), Some((1, 1)));
        assert_eq!(rational_approx(2f64.sqrt() / 2.0, 1e-12, 1000), None);
    }

    #[test]
    fn common_period_examples() {
        assert!((common_period(&FrequencySet::new([6.0]), 1e-9).unwrap() - PI / 3.0).abs() < 1e-12);
        assert!(common_period(&FrequencySet::new([1.0, 2f64.sqrt()]), 1e-9).is_none());
        assert!(common_period(&FrequencySet::new([0.0, 0.0]), 1e-9).is_none());
        let p0 = HamiltonianParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
        let t = common_period(&gw_frequencies(p0, FrequencyKind::Bipartite), 1e-9).unwrap();
        assert!((t - PI / 3.0).abs() < 1e-12);
        let p3 = HamiltonianParams::new(1.0, 1.0, 3f64.sqrt(), 0.0).unwrap();
        let t = common_period(&gw_frequencies(p3, FrequencyKind::OneToOther), 1e-9).unwrap();
        assert!((t - PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn detect_period_of_a_sine() {
        let dt = 1e-3;
        let s: Vec<Vec<f64>> = (0..4000).map(|k| vec![(3.0 * k as f64 * dt).sin().abs()]).collect();
        let p = detect_period(&s, dt, 1e-2).unwrap();
        assert!((p - PI / 3.0).abs() < 1e-4, "{p}");
    }

    #[test]
    fn parabolic_peak_is_exact_on_a_parabola() {
        let xs = linspace(0.0, 1.0, 11);
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 - (x - 0.437).powi(2)).collect();
        let (x, y) = parabolic_peak(&xs, &ys, 4);
        assert!((x - 0.437).abs() < 1e-12 && (y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_points_and_validation() {
        let spec = SweepSpec::new(ScenarioId::Adc1GGHZ).range("a", 0.0, 1.0, 3).range("d", 0.0, 1.0, 2);
        let pts = spec.points().unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!((pts[1]["a"], pts[1]["d"]), (0.0, 1.0));
        assert!(SweepSpec::new(ScenarioId::Pdc1W).range("zz", 0.0, 1.0, 3).validate().is_err());
        assert!(SweepSpec::new(ScenarioId::Pdc1W).range("d", 0.0, 1.0, 1).validate().is_err());
        let timed = SweepSpec { time: Some(TimeGrid { t_max: 1.0, steps: 2 }), ..SweepSpec::new(ScenarioId::Pdc1W) };
        assert!(timed.validate().is_err());
    }

    #[test]
    fn scenario_values_share_field_names() {
        for id in ScenarioId::ALL {
            let p = default_params(id);
            let closed = closed_values(id, &p).unwrap();
            let num = numeric_values(id, &p).unwrap();
            assert!(closed.iter().any(|(n, _)| num.iter().any(|(m, _)| m == n)), "{id}");
        }
    }

    #[test]
    fn figure_ids_parse() {
        assert_eq!("fig7".parse::<FigureId>().unwrap(), FigureId::Fig7);
        assert!("fig10".parse::<FigureId>().is_err());
    }
}
