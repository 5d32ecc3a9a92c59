use proptest::prelude::*;
use tritangle::closedform::{gadc_wwbar_closed, pdc1_w_closed, ScenarioId, WwbarAngle};
use tritangle::experiments::{run_figure, run_sweep, write_sweep_csv_to, FigureId, SweepSpec};

fn sweep_bytes(spec: &SweepSpec) -> Vec<u8> {
    let mut buf = Vec::new();
    write_sweep_csv_to(spec, &run_sweep(spec).unwrap(), &mut buf).unwrap();
    buf
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sweeps_are_deterministic(lo in 0.0..0.5f64, hi in 0.5..1.0f64, n in 2usize..12, w in 0.0..1.0f64) {
        let spec = SweepSpec::new(ScenarioId::AdcWVacuumMix).range("d", lo, hi, n).fix("w", w);
        prop_assert_eq!(sweep_bytes(&spec), sweep_bytes(&spec));
    }
}

proptest! {
    #[test]
    fn superposition_symmetry_in_p(d in 0.0..=1.0f64, p in 0.5..=1.0f64) {
        let a = gadc_wwbar_closed(WwbarAngle::QuarterPi, d, p).unwrap();
        let b = gadc_wwbar_closed(WwbarAngle::QuarterPi, d, 1.0 - p).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn untouched_pair_keeps_its_concurrence(d in 0.0..=1.0f64) {
        prop_assert!((pdc1_w_closed(d).unwrap().c2_bc - 4.0 / 9.0).abs() < 1e-15);
    }
}

#[test]
fn figure_output_is_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run_figure(FigureId::Fig4, a.path()).unwrap();
    let second = run_figure(FigureId::Fig4, b.path()).unwrap();
    assert_eq!(first.len(), second.len());
    for (x, y) in first.iter().zip(&second) {
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap(), "{}", x.display());
    }
}
