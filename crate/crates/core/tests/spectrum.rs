use atem_core::{
    converge_spectrum, derive_seed, problems, run_recurrence, AnsatzExponent, Channel, ChannelChoice,
    Parity, Poly, Precision, ProblemSpec, Real, ScanConfig, Spectrum,
};

fn prec() -> Precision {
    Precision::DEFAULT
}

fn r(s: &str) -> Real {
    Real::parse(s, prec()).unwrap()
}

fn solve(problem: &ProblemSpec, lo: &str, hi: &str, schedule: &[usize]) -> Spectrum {
    let config = ScanConfig::new(r(lo), r(hi), schedule.to_vec());
    converge_spectrum(problem, &config).unwrap()
}

fn assert_interlaced(spectrum: &Spectrum, states: usize) {
    let recs = &spectrum.records[..states];
    for (i, w) in recs.windows(2).enumerate() {
        assert!(w[0].energy < w[1].energy, "not increasing at {i}");
        assert_ne!(w[0].parity, w[1].parity, "parity repeats at {i}");
    }
    assert_eq!(recs[0].parity, Some(Parity::Even));
}

#[test]
fn harmonic_levels_are_odd_integers() {
    let problem = problems::harmonic("1", prec()).unwrap();
    let spectrum = solve(&problem, "0", "16", &[20, 40, 60]);
    assert_eq!(spectrum.records.len(), 8);
    let tiny = r("1e-20");
    for (n, rec) in spectrum.records.iter().enumerate() {
        let exact = Real::from_i64(2 * n as i64 + 1, prec());
        assert!((&rec.energy - &exact).abs() < tiny, "E_{n} = {}", rec.energy);
        assert!(rec.converged);
        assert_eq!(rec.index, n);
        assert_eq!(rec.m_used, 60);
    }
}

#[test]
fn harmonic_spectrum_approaches_the_same_levels_for_any_ansatz() {
    let errors = |alpha: &str, schedule: &[usize]| -> Vec<f64> {
        let problem = problems::harmonic(alpha, prec()).unwrap();
        let spectrum = solve(&problem, "0", "12", schedule);
        spectrum
            .records
            .iter()
            .take(3)
            .enumerate()
            .map(|(n, rec)| (rec.energy.to_f64() - (2 * n + 1) as f64).abs())
            .collect()
    };
    assert!(errors("1", &[40, 60]).iter().all(|&e| e < 1e-20));
    for alpha in ["2", "4"] {
        let coarse = errors(alpha, &[50, 60]);
        let fine = errors(alpha, &[70, 80]);
        assert_eq!(coarse.len(), 3);
        for (c, f) in coarse.iter().zip(&fine) {
            assert!(f < c && *f < 1e-3, "alpha = {alpha}: {c} -> {f}");
        }
    }
}

#[test]
fn determinant_channel_agrees_with_parity_channels() {
    let problem = problems::quartic("1", "4", "0", prec()).unwrap();
    let mut config = ScanConfig::new(r("0"), r("10"), vec![60, 80]);
    let split = converge_spectrum(&problem, &config).unwrap();
    config.channel = ChannelChoice::Determinant;
    let joint = converge_spectrum(&problem, &config).unwrap();
    assert_eq!(split.records.len(), joint.records.len());
    for (a, b) in split.records.iter().zip(&joint.records) {
        assert!((&a.energy - &b.energy).abs() < r("1e-12"));
        assert_eq!(b.parity, None);
    }
}

#[test]
fn shifted_oscillator_uses_general_determinant() {
    // x² + x = (x + 1/2)² - 1/4
    let potential = Poly::parse(&["0", "1", "1"], prec()).unwrap();
    let ansatz = AnsatzExponent::from_alpha_beta(&r("1"), &r("0")).unwrap();
    let problem = ProblemSpec::new(potential, ansatz).unwrap();
    assert!(!problem.is_symmetric());
    let spectrum = solve(&problem, "-1", "10", &[40, 60, 80]);
    assert_eq!(spectrum.records.len(), 5);
    for (n, rec) in spectrum.records.iter().enumerate() {
        let exact = &Real::from_i64(2 * n as i64 + 1, prec()) - &r("0.25");
        assert!((&rec.energy - &exact).abs() < r("1e-15"), "E_{n} = {}", rec.energy);
        assert_eq!(rec.parity, None);
    }
}

#[test]
fn levels_interlace_for_all_potentials() {
    let cases = [
        (problems::harmonic("1", prec()).unwrap(), "12", vec![20, 40]),
        (problems::quartic("0.1", "4", "0", prec()).unwrap(), "18", vec![60, 80]),
        (problems::sextic_double_well("4", "1", "2", prec()).unwrap(), "12", vec![60, 80]),
    ];
    for (problem, hi, schedule) in cases {
        let lo = problem.potential_minimum() - 0.5;
        let config = ScanConfig::new(Real::from_f64(lo, prec()).unwrap(), r(hi), schedule);
        let spectrum = converge_spectrum(&problem, &config).unwrap();
        assert!(spectrum.records.len() >= 6);
        assert_interlaced(&spectrum, 6);
    }
}

#[test]
fn weak_coupling_sits_just_above_harmonic() {
    let problem = problems::quartic("0.01", "4", "0", prec()).unwrap();
    let spectrum = solve(&problem, "0", "10", &[60, 80]);
    assert!(spectrum.records.len() >= 4);
    for (n, rec) in spectrum.records.iter().take(4).enumerate() {
        let shift = rec.energy.to_f64() - (2 * n + 1) as f64;
        assert!(shift > 0.0 && shift < 1e-2 * (n + 1) as f64 * 10.0, "E_{n} = {}", rec.energy);
    }
    assert!(spectrum.records[0].energy.to_f64() - 1.0 < 1e-2);
}

#[test]
fn every_root_is_certified_by_a_sign_change() {
    let problem = problems::quartic("0.5", "4", "0", prec()).unwrap();
    let seed = derive_seed(&problem).unwrap();
    let spectrum = solve(&problem, "0", "12", &[60, 80]);
    for rec in &spectrum.records {
        let (lo, hi) = &rec.bracket;
        assert!(lo <= &rec.energy && &rec.energy <= hi);
        let channel = match rec.parity {
            Some(Parity::Even) => Channel::Even,
            Some(Parity::Odd) => Channel::Odd,
            None => Channel::Determinant,
        };
        let depth = channel.depth_for(rec.m_used).unwrap();
        let at = |e: &Real| channel.evaluate(&run_recurrence(&seed, e, depth, false).unwrap(), depth).unwrap();
        let (a, b) = (at(lo), at(hi));
        assert!(a.is_zero() || b.is_zero() || a.sign() != b.sign(), "E = {}", rec.energy);
    }
}

#[test]
fn roots_persist_across_the_schedule() {
    let problem = problems::quartic("1", "4", "0", prec()).unwrap();
    let spectrum = solve(&problem, "0", "15", &[40, 60, 80, 100]);
    // the first four states resolve from the start of the schedule
    for rec in spectrum.records.iter().take(4) {
        let ms: Vec<usize> = rec.history.iter().map(|(m, _)| *m).collect();
        assert_eq!(ms, vec![40, 60, 80, 100]);
    }
    for rec in &spectrum.records {
        assert_eq!(rec.history.last().unwrap().1, rec.energy);
    }
}

#[test]
fn higher_precision_refines_the_same_roots() {
    let lo = problems::quartic("0.1", "4", "0", prec()).unwrap();
    let hi_prec = Precision::new(384).unwrap();
    let hi = problems::quartic("0.1", "4", "0", hi_prec).unwrap();
    let a = solve(&lo, "0", "6", &[60, 80]);
    let config = ScanConfig::new(Real::parse("0", hi_prec).unwrap(), Real::parse("6", hi_prec).unwrap(), vec![60, 80]);
    let b = converge_spectrum(&hi, &config).unwrap();
    assert_eq!(a.records.len(), b.records.len());
    for (x, y) in a.records.iter().zip(&b.records) {
        assert!((&x.energy - &y.energy).abs() < r("1e-25"));
    }
}
