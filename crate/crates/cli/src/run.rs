//! Executes a validated [`RunConfig`].

use std::fs::File;
use std::io::Write;
use std::path::Path;

use tritangle::channels::{apply, dephasing_lambda, nonmarkov_dephasing};
use tritangle::closedform::ScenarioId;
use tritangle::dynamics::EnergyBasis;
use tritangle::experiments::{
    cross_validate, default_grid, linspace, run_figure, run_sweep, write_sweep_csv_to, TimeGrid,
};
use tritangle::measures::{format_number, full_report, MeasureReport};
use tritangle::states::DensityMatrix;

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::spec::ChannelSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ValidationFailed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::ValidationFailed => 1,
        }
    }
}

/// Runs the command, writing tables to `cfg.out` when set and to `stdout`
/// otherwise.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Measure => {
            let rho = state(cfg)?;
            let report = full_report(&rho)?;
            emit(cfg, stdout, &[], vec![(vec![], report)])?;
        }
        Command::Evolve => {
            let rho0 = state(cfg)?;
            let basis = EnergyBasis::new(cfg.hamiltonian.unwrap_or_default())?;
            let mut rows = Vec::new();
            for t in times(cfg.time) {
                let rho = match cfg.milburn {
                    Some(m) => basis.evolve_milburn(&rho0, m, t),
                    None => basis.evolve(&rho0, t),
                };
                rows.push((vec![t], full_report(&rho)?));
            }
            emit(cfg, stdout, &["t"], rows)?;
        }
        Command::Channel => {
            let rho0 = state(cfg)?;
            let place = cfg.placement.unwrap_or(tritangle::channels::Placement::FirstQubit);
            match cfg.channel {
                Some(ChannelSpec::Fixed(kind)) => {
                    let rho = apply(&rho0, &kind.build()?, place);
                    emit(cfg, stdout, &[], vec![(vec![], full_report(&rho)?)])?;
                }
                Some(ChannelSpec::Telegraph) => {
                    let (b, tau) =
                        cfg.telegraph.ok_or_else(|| CliError::usage("--b", "bare ntd requires --b and --tau"))?;
                    let mut rows = Vec::new();
                    for t in times(cfg.time) {
                        let lambda = dephasing_lambda(b, tau, t)?;
                        let rho = apply(&rho0, &nonmarkov_dephasing(lambda)?, place);
                        rows.push((vec![t, lambda], full_report(&rho)?));
                    }
                    emit(cfg, stdout, &["t", "lambda"], rows)?;
                }
                None => return Err(CliError::usage("--channel", "channel needs --channel")),
            }
        }
        Command::Figure => {
            let fig = cfg.figure.ok_or_else(|| CliError::usage("<figure>", "figure needs an id such as fig5"))?;
            let dir = cfg.out.clone().unwrap_or_else(|| ".".into());
            for path in run_figure(fig, &dir)? {
                writeln!(stdout, "{}", path.display()).map_err(|e| CliError::io("<stdout>", e))?;
            }
        }
        Command::Sweep => {
            let spec = cfg.sweep.as_ref().ok_or_else(|| CliError::usage("--scenario", "sweep needs a scenario id"))?;
            let rows = run_sweep(spec)?;
            match &cfg.out {
                Some(path) => {
                    let file = create(path)?;
                    write_sweep_csv_to(spec, &rows, file).map_err(|e| CliError::io(path.display(), e))?;
                }
                None => write_sweep_csv_to(spec, &rows, &mut *stdout).map_err(|e| CliError::io("<stdout>", e))?,
            }
        }
        Command::ValidateOracles => {
            let ids: Vec<ScenarioId> = match cfg.scenario {
                Some(id) => vec![id],
                None => ScenarioId::ALL.to_vec(),
            };
            let mut passed = 0;
            for &id in &ids {
                let cv = cross_validate(id, &default_grid(id))?;
                if cv.passed() {
                    passed += 1;
                }
                write!(stdout, "{cv}").map_err(|e| CliError::io("<stdout>", e))?;
            }
            writeln!(stdout, "summary: {passed}/{} scenarios within tolerance", ids.len())
                .map_err(|e| CliError::io("<stdout>", e))?;
            if passed < ids.len() {
                return Ok(Outcome::ValidationFailed);
            }
        }
    }
    Ok(Outcome::Success)
}

fn state(cfg: &RunConfig) -> Result<DensityMatrix, CliError> {
    let spec = cfg.state.ok_or_else(|| CliError::usage("--state", "a state is required"))?;
    Ok(spec.build()?)
}

fn times(grid: Option<TimeGrid>) -> Vec<f64> {
    let g = grid.unwrap_or(TimeGrid { t_max: crate::config::DEFAULT_TMAX, steps: crate::config::DEFAULT_STEPS });
    linspace(0.0, g.t_max, g.steps)
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::io(path.display(), e))
}

fn emit(
    cfg: &RunConfig,
    stdout: &mut dyn Write,
    leading: &[&str],
    rows: Vec<(Vec<f64>, MeasureReport)>,
) -> Result<(), CliError> {
    let target = cfg.out.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<stdout>".to_string());
    let sink: Box<dyn Write + '_> = match &cfg.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(stdout),
    };
    let mut wtr = csv::Writer::from_writer(sink);
    let mut header: Vec<&str> = leading.to_vec();
    header.extend(MeasureReport::CSV_COLUMNS);
    let io = |e: csv::Error| CliError::io(&target, e);
    wtr.write_record(&header).map_err(io)?;
    for (lead, report) in rows {
        let mut rec: Vec<String> = lead.into_iter().map(format_number).collect();
        rec.extend(report.csv_fields());
        wtr.write_record(&rec).map_err(io)?;
    }
    wtr.flush().map_err(|e| CliError::io(&target, e))
}
