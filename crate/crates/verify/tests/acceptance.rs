//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tritangle::channels::{self, apply, Placement};
use tritangle::closedform::{self as cf, min_d_esd, ScenarioId, WwbarAngle};
use tritangle::dynamics::{EnergyBasis, HamiltonianParams};
use tritangle::experiments::{
    self as ex, cross_validate, dark_periods, default_grid, gw_tripartite_peaks, measured_gw_period, minimize_on,
    numeric_values, scenario_params, scenario_state, FrequencyKind,
};
use tritangle::linalg::{kron, partial_trace, ComplexMatrix, Subsystem};
use tritangle::measures::{
    full_report, pure_one_to_other, rank2_analysis, residual_entanglement_pure, spectral_itangle, Focus, MConvention,
    MeasureReport,
};
use tritangle::states::{self, DensityMatrix, PureState};

fn verdict(name: &str, pass: bool, detail: impl AsRef<str>) {
    println!("{} {name}: {}", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    assert!(pass, "{name} failed: {}", detail.as_ref());
}

fn c2_of(id: ScenarioId, over: &[(&str, f64)]) -> f64 {
    let p = scenario_params(id, over).unwrap();
    numeric_values(id, &p).unwrap().iter().find(|(n, _)| *n == "c2_a_bc").unwrap().1
}

fn random_pure(rng: &mut ChaCha8Rng) -> PureState {
    let mut a = [Complex64::default(); 8];
    for z in a.iter_mut() {
        *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    PureState::normalized(a).unwrap()
}

fn random_su2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (Complex64::new(v[0] / n, v[1] / n), Complex64::new(v[2] / n, v[3] / n));
    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
    ComplexMatrix::from_vec(2, 2, vec![a * phase, -b.conj() * phase, b * phase, a.conj() * phase])
}

#[test]
fn oracle_equivalence() {
    let start = Instant::now();
    let mut failing = Vec::new();
    for id in ScenarioId::ALL {
        let cv = cross_validate(id, &default_grid(id)).unwrap();
        print!("{cv}");
        if !cv.passed() {
            let fields: Vec<&str> = cv.fields.iter().filter(|f| f.violations > 0).map(|f| f.field).collect();
            failing.push(format!("{id}[{}]", fields.join(",")));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let detail =
        format!("{:.1} s; mismatching: {}", secs, if failing.is_empty() { "none".into() } else { failing.join(" ") });
    verdict("oracle equivalence", failing.is_empty() && secs < 60.0, detail);
}

#[test]
fn milburn_decay() {
    let (b, gamma) = (0.1, 0.5);
    let mut worst: f64 = 0.0;
    for t in [0.0, 1.0, 5.0, 20.0] {
        let got = c2_of(ScenarioId::MilburnGGHZ, &[("a", FRAC_1_SQRT_2), ("B", b), ("gamma", gamma), ("t", t)]);
        let expected = (-4.0 * gamma * t * (3.0 * b / gamma).sin().powi(2)).exp();
        worst = worst.max((got - expected).abs());
    }
    let mut vn_worst: f64 = 0.0;
    for t in [0.0, 1.0, 5.0, 10.0, 20.0] {
        let got = c2_of(ScenarioId::MilburnGGHZ, &[("a", FRAC_1_SQRT_2), ("B", b), ("gamma", 1e8), ("t", t)]);
        vn_worst = vn_worst.max((got - 1.0).abs());
    }
    verdict(
        "Milburn decay",
        worst < 1e-12 && vn_worst < 1e-5,
        format!("max |c2 - exp| = {worst:.2e}; von Neumann limit deviation {vn_worst:.2e}"),
    );
}

#[test]
fn m_matrix_pin() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_m, mut worst_min): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let (a, b, gamma, t) =
            (rng.gen_range(0.1..0.9), rng.gen_range(-1.0..1.0), rng.gen_range(0.1..5.0), rng.gen_range(0.0..20.0));
        let p = scenario_params(ScenarioId::MilburnGGHZ, &[("a", a), ("B", b), ("gamma", gamma), ("t", t)]).unwrap();
        let rho = scenario_state(ScenarioId::MilburnGGHZ, &p).unwrap();
        let r = rank2_analysis(&rho, Focus::A, MConvention::Corrected).unwrap();
        let m = r.m.unwrap();
        let f = (-2.0 * gamma * t * (3.0 * b / gamma).sin().powi(2)).exp();
        let (a2, s) = (a * a, 1.0 - 2.0 * a * a);
        let q = 4.0 * a2 * (1.0 - a2) * f * f;
        let m11 = (s * s - q) / (2.0 * s * s + 2.0 * q);
        let m13 = 2.0 * a * (1.0 - a2).sqrt() * s * f / (s * s + q);
        let expected = [[m11, 0.0, m13], [0.0, 0.5, 0.0], [m13, 0.0, -m11]];
        for i in 0..3 {
            for j in 0..3 {
                let dev = (m[i][j] - expected[i][j]).abs();
                worst_m = worst_m.max(dev);
            }
        }
        worst_min = worst_min.max((r.m_min.unwrap() + 0.5).abs());
    }
    verdict(
        "M-matrix pin",
        worst_m < 1e-12 && worst_min < 1e-12,
        format!("max element deviation {worst_m:.2e}; max |m_min + 1/2| {worst_min:.2e} over 100 draws"),
    );
}

#[test]
fn gw_tripartite_extrema() {
    let (g0, f0) = gw_tripartite_peaks(0.0).unwrap();
    let (g3, f3) = gw_tripartite_peaks(3f64.sqrt()).unwrap();
    let checks = [
        ("GTC D=0", g0, 2.0 * 2f64.sqrt() / 3.0, 0.2197),
        ("fill D=0", f0, 8.0 / 9.0, 0.2197),
        ("GTC D=sqrt3", g3, 2.0 * 14f64.sqrt() / 9.0, 0.2618),
        ("fill D=sqrt3", f3, 28.0 * 35f64.powf(0.25) / 81.0, 0.2618),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, peak, value, t) in checks {
        pass &= (peak.value - value).abs() < 1e-3 && (peak.t - t).abs() < 1e-3;
        parts.push(format!("{name} {:.6} at t={:.6}", peak.value, peak.t));
    }
    verdict("gW tripartite extrema", pass, parts.join("; "));
}

#[test]
fn periodicity() {
    let hp = |d: f64| HamiltonianParams::new(1.0, 1.0, d, 0.0).unwrap();
    let cases = [
        ("pair D=0", hp(0.0), FrequencyKind::Bipartite, PI / 3.0),
        ("pair D=1/sqrt3", hp(1.0 / 3f64.sqrt()), FrequencyKind::Bipartite, FRAC_PI_2),
        ("one-to-other D=sqrt3", hp(3f64.sqrt()), FrequencyKind::OneToOther, PI / 6.0),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, p, kind, expected) in cases {
        let got = measured_gw_period(p, kind, 4.0, 1e-3).unwrap();
        let ok = got.is_some_and(|g| (g - expected).abs() < 1e-3);
        pass &= ok;
        parts.push(format!("{name} {}", got.map_or("none".into(), |g| format!("{g:.6}"))));
    }
    verdict("periodicity", pass, parts.join("; "));
}

#[test]
fn phase_damped_w_minima() {
    let numeric = |focus: &'static str| {
        move |d: f64| {
            let p = scenario_params(ScenarioId::Pdc1W, &[("d", d)])?;
            Ok(numeric_values(ScenarioId::Pdc1W, &p)?.iter().find(|(n, _)| *n == focus).unwrap().1)
        }
    };
    let (da, va) = minimize_on(numeric("c2_a_bc"), 0.0, 1.0, 201, 1e-10).unwrap();
    let (dca, vca) = minimize_on(|d| Ok(cf::pdc1_w_closed(d)?.c2_a_bc), 0.0, 1.0, 201, 1e-10).unwrap();
    let (dcb, vcb) = minimize_on(|d| Ok(cf::pdc1_w_closed(d)?.c2_b_ac), 0.0, 1.0, 201, 1e-10).unwrap();
    let (dnb, vnb) = minimize_on(numeric("c2_b_ac"), 0.0, 1.0, 201, 1e-10).unwrap();
    let near = |v: f64, d: f64, ev: f64, ed: f64| (v - ev).abs() < 1e-3 && (d - ed).abs() < 1e-3;
    let pass = near(va, da, 0.1420, 0.9280) && near(vca, dca, 0.1420, 0.9280) && near(vcb, dcb, 0.5146, 0.8656);
    verdict(
        "phase-damped W minima",
        pass,
        format!(
            "A|BC numeric {va:.6} at d={da:.6}, closed {vca:.6} at d={dca:.6}; \
             B|AC closed {vcb:.6} at d={dcb:.6} (numeric pipeline: {vnb:.6} at d={dnb:.6})"
        ),
    );
}

#[test]
fn sudden_death_points() {
    let cases = [
        (WwbarAngle::Zero, 0.3787, 0.2265),
        (WwbarAngle::HalfPi, 0.3787, 0.7734),
        (WwbarAngle::QuarterPi, 0.3542, 0.5),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (theta, d, p) in cases {
        let (pm, dm) = min_d_esd(theta, 1e-12).unwrap();
        pass &= (dm - d).abs() < 1e-3 && (pm - p).abs() < 1e-3;
        parts.push(format!("{theta:?} d_ESD {dm:.6} at p={pm:.6}"));
    }
    verdict("sudden death points", pass, parts.join("; "));
}

#[test]
fn dephasing_asymptotics_and_dark_periods() {
    let mut pass = true;
    let mut parts = Vec::new();
    for (a, expected) in [(FRAC_1_SQRT_2, 0.0), (0.5, 0.1875), (0.3, 0.0819)] {
        let c2 = c2_of(ScenarioId::NonMarkovGGHZ, &[("a", a), ("b", 1.0), ("tau", 5.0), ("t", 200.0)]);
        pass &= (c2 - expected).abs() < 1e-3;
        parts.push(format!("a={a:.4} c2(200)={c2:.6}"));
    }
    let dark = dark_periods(FRAC_1_SQRT_2, 1.0, 5.0, 60.0).unwrap();
    let found = dark.iter().filter(|z| z.c2 < 1e-9 && z.revival > 1e-3).count();
    pass &= found > 0;
    parts.push(format!("{found} dark periods with revival"));
    verdict("dephasing asymptotics", pass, parts.join("; "));
}

#[test]
fn mixture_steady_state() {
    let steady = |w: f64| c2_of(ScenarioId::NonMarkovGhzMixture, &[("w", w), ("b", 1.0), ("tau", 5.0), ("t", 200.0)]);
    let pure = steady(0.0);
    let vals: Vec<f64> = [0.1, 0.3, 0.5].iter().map(|&w| steady(w)).collect();
    let pass = pure < 1e-9 && vals.iter().all(|&v| v > 1e-6) && vals.windows(2).all(|w| w[1] < w[0]);
    verdict("mixture steady state", pass, format!("w=0: {pure:.3e}; w=0.1,0.3,0.5: {vals:.6?}"));
}

#[test]
fn property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    let mut ckw: f64 = f64::INFINITY;
    for _ in 0..500 {
        let psi = random_pure(&mut rng);
        let r = full_report(&psi.density()).unwrap();
        ckw = ckw.min(r.c2_a_bc - r.c_ab.powi(2) - r.c_ac.powi(2));
    }

    let fields = |r: &MeasureReport| {
        vec![
            r.c_ab,
            r.c_ac,
            r.c_bc,
            r.c2_a_bc,
            r.c2_b_ac,
            r.c2_c_ab,
            r.tau.unwrap_or(0.0),
            r.gtc.unwrap_or(0.0),
            r.fill.unwrap_or(0.0),
            r.linear_entropy,
        ]
    };
    let mut lu: f64 = 0.0;
    for _ in 0..200 {
        let rho = random_pure(&mut rng).density();
        let u = kron(&kron(&random_su2(&mut rng), &random_su2(&mut rng)), &random_su2(&mut rng));
        let moved = states::validate(u.sandwich(rho.matrix())).unwrap();
        let (x, y) = (fields(&full_report(&rho).unwrap()), fields(&full_report(&moved).unwrap()));
        lu = lu.max(x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }

    let mut channel: f64 = 0.0;
    let places = [Placement::FirstQubit, Placement::SecondQubit, Placement::ThirdQubit, Placement::AllQubits];
    for k in 0..1000 {
        let d: f64 = rng.gen_range(0.0..=1.0);
        let ch = match k % 4 {
            0 => channels::pdc(d),
            1 => channels::adc(d),
            2 => channels::gadc(d, rng.gen_range(0.0..=1.0)),
            _ => channels::nonmarkov_dephasing(2.0 * d - 1.0),
        }
        .unwrap();
        let rho = random_pure(&mut rng).density();
        let out = apply(&rho, &ch, places[rng.gen_range(0..4)]);
        let trace = (out.matrix().trace().re - 1.0).abs();
        let herm = out.matrix().hermiticity_defect();
        channel = channel.max(ch.completeness_defect()).max(trace).max(herm);
    }

    let basis = EnergyBasis::new(HamiltonianParams::new(1.0, 1.0, 0.4, 0.2).unwrap()).unwrap();
    let psi0 = states::gw(0.6, 0.5).unwrap();
    let period = 2.0 * PI;
    let mut tangle: f64 = 0.0;
    for t in ex::linspace(0.0, period, 400) {
        let psi = basis.evolve_pure(&psi0, t);
        let rho = psi.density();
        let pair = |s| tritangle::measures::wootters_concurrence(&partial_trace(rho.matrix(), s)).unwrap();
        let raw = pure_one_to_other(&psi, Focus::A).unwrap().powi(2)
            - pair(Subsystem::AB).powi(2)
            - pair(Subsystem::AC).powi(2);
        tangle = tangle.max(raw.abs()).max(residual_entanglement_pure(&psi).unwrap());
    }

    let pass = ckw >= -1e-9 && lu < 1e-9 && channel < 1e-12 && tangle < 1e-9;
    verdict(
        "property suites",
        pass,
        format!("CKW min {ckw:.2e}; local-unitary max dev {lu:.2e}; channel defect {channel:.2e}; gW |tau| max {tangle:.2e}"),
    );
}

#[test]
fn spectral_itangle_endpoints() {
    let rho0 = apply(&states::w().density(), &channels::gadc(0.0, 0.37).unwrap(), Placement::AllQubits);
    let at_zero = spectral_itangle(&rho0, Focus::A).unwrap();
    let closed_zero = cf::spectral_w_closed(0.0, 0.37);
    let mut closed_dev: f64 = 0.0;
    let mut numeric_dev: f64 = 0.0;
    for d in ex::linspace(0.0, 1.0, 101) {
        closed_dev = closed_dev.max((cf::spectral_w_closed(d, 1.0) - cf::spectral_wbar_closed(d, 0.0)).abs());
        let sw = |psi: &PureState, p: f64| -> DensityMatrix {
            apply(&psi.density(), &channels::gadc(d, p).unwrap(), Placement::AllQubits)
        };
        let a = spectral_itangle(&sw(&states::w(), 1.0), Focus::A).unwrap();
        let b = spectral_itangle(&sw(&states::wbar(), 0.0), Focus::A).unwrap();
        numeric_dev = numeric_dev.max((a - b).abs());
    }
    let pass = (at_zero - 8.0 / 9.0).abs() < 1e-12 && closed_zero == 648.0 / 729.0 && closed_dev < 1e-12;
    verdict(
        "spectral I-tangle endpoints",
        pass,
        format!(
            "d=0 numeric {at_zero:.15}, closed {closed_zero:.15}; endpoint identity closed dev {closed_dev:.2e}, numeric dev {numeric_dev:.2e}"
        ),
    );
}
