use atem_core::{
    build_series, converge_spectrum, count_sign_changes, normalize, problems, residual,
    residual_at_energy, sample, EigenvalueRecord, Parity, Precision, ProblemSpec, Real, ScanConfig,
    WavefunctionSeries,
};

fn prec() -> Precision {
    Precision::DEFAULT
}

fn r(s: &str) -> Real {
    Real::parse(s, prec()).unwrap()
}

fn states(problem: &ProblemSpec, lo: &str, hi: &str, count: usize) -> Vec<EigenvalueRecord> {
    let config = ScanConfig::new(r(lo), r(hi), vec![100, 120]);
    let spectrum = converge_spectrum(problem, &config).unwrap();
    assert!(spectrum.records.len() >= count);
    spectrum.records.into_iter().take(count).collect()
}

fn series(problem: &ProblemSpec, rec: &EigenvalueRecord, truncation: usize) -> WavefunctionSeries {
    let s = build_series(problem, &rec.energy, rec.m_used, truncation, rec.parity).unwrap();
    normalize(&s, &r("1e-30")).unwrap()
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<Real> {
    (0..n)
        .map(|i| Real::from_f64(lo + (hi - lo) * i as f64 / (n - 1) as f64, prec()).unwrap())
        .collect()
}

#[test]
fn node_counts_and_parity_purity() {
    let cases = [
        (problems::harmonic("1", prec()).unwrap(), "0", "12", 5.0),
        (problems::quartic("0.1", "4", "0", prec()).unwrap(), "0", "18", 4.0),
        (problems::sextic_double_well("4", "1", "2", prec()).unwrap(), "-0.5", "12", 2.5),
    ];
    for (problem, lo, hi, window) in cases {
        for (n, rec) in states(&problem, lo, hi, 6).iter().enumerate() {
            let s = series(&problem, rec, 118);
            let wrong = match s.parity() {
                Some(Parity::Even) => 1,
                Some(Parity::Odd) => 0,
                None => panic!("symmetric problem should give a parity"),
            };
            assert!(s.f_coeffs().iter().skip(wrong).step_by(2).all(Real::is_zero));

            let pts = sample(&s, &r(&format!("-{window}")), &r(&window.to_string()), 401);
            let psi: Vec<f64> = pts.iter().map(|(_, y)| y.to_f64()).collect();
            let peak = psi.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            assert_eq!(count_sign_changes(&psi, 1e-12 * peak), n, "state {n}");
            for i in 0..200 {
                let (a, b) = (&pts[i].1, &pts[400 - i].1);
                let mirrored = if n % 2 == 0 { b.clone() } else { -b };
                assert!((a - &mirrored).abs() < r("1e-60"));
            }
        }
    }
}

#[test]
fn normalization_is_idempotent() {
    let problem = problems::sextic_double_well("4", "1", "2", prec()).unwrap();
    for rec in states(&problem, "-0.5", "6", 3) {
        let once = series(&problem, &rec, 80);
        let twice = normalize(&once, &r("1e-30")).unwrap();
        assert_eq!(once.f_coeffs(), twice.f_coeffs());
        let rel = (once.norm_constant() - twice.norm_constant()).abs() / once.norm_constant();
        assert!(rel < r("1e-28"));
        assert!(twice.norm_constant().is_positive());
    }
}

#[test]
fn higher_truncation_changes_psi_less_and_less() {
    let problem = problems::quartic("0.1", "4", "0", prec()).unwrap();
    let rec = &states(&problem, "0", "4", 2)[1];
    let xs = grid(-4.0, 4.0, 81);
    let psi_at = |t: usize| -> Vec<Real> {
        let s = series(&problem, rec, t);
        xs.iter().map(|x| s.psi(x)).collect()
    };
    let orders = [20, 40, 60, 80, 100];
    let curves: Vec<Vec<Real>> = orders.iter().map(|&t| psi_at(t)).collect();
    let gaps: Vec<f64> = curves
        .windows(2)
        .map(|w| {
            w[0].iter()
                .zip(&w[1])
                .map(|(a, b)| (a - b).abs().to_f64())
                .fold(0.0, f64::max)
        })
        .collect();
    for w in gaps.windows(2) {
        assert!(w[1] < w[0], "{gaps:?}");
    }
}

#[test]
fn residual_separates_true_energy_from_neighbours() {
    let problem = problems::quartic("0.1", "4", "0", prec()).unwrap();
    for rec in states(&problem, "0", "9", 3) {
        let s = series(&problem, &rec, 118);
        let tol = rec.energy.abs() * Real::from_i64(10, prec()).powi(-(rec.stable_digits as i32));
        let shift = tol.mul_int(10);
        // even count keeps x = 0, a node of the odd states, off the grid
        let xs = grid(-1.5, 1.5, 12);
        let at_e = residual(&s, &xs);
        for e in [&rec.energy + &shift, &rec.energy - &shift] {
            let off = residual_at_energy(&s, &e, &xs);
            for (a, b) in at_e.iter().zip(&off) {
                assert!(b > &a.mul_int(10), "E = {}: {a} vs {b}", rec.energy);
            }
        }
    }
}

#[test]
fn ground_state_residual_levels() {
    let problem = problems::quartic("0.1", "4", "0", prec()).unwrap();
    let rec = &states(&problem, "0", "2", 1)[0];
    let short = series(&problem, rec, 17);
    let long = series(&problem, rec, 118);
    let check = |s: &WavefunctionSeries, xs: &[Real], bound: &str| {
        for (x, res) in xs.iter().zip(residual(s, xs)) {
            let scale = (&rec.energy * &s.psi(x)).abs();
            assert!(res < &scale * &r(bound), "x = {x}: {res}");
        }
    };
    check(&short, &grid(-1.0, 1.0, 9), "1e-2");
    check(&long, &grid(-2.0, 2.0, 17), "1e-40");
}

#[test]
fn series_from_neighbouring_iteration_numbers_agree() {
    let problem = problems::quartic("0.1", "4", "0", prec()).unwrap();
    let at = |schedule: Vec<usize>| {
        let config = ScanConfig::new(r("0"), r("16"), schedule);
        let rec = converge_spectrum(&problem, &config).unwrap().records.swap_remove(5);
        build_series(&problem, &rec.energy, rec.m_used, 17, rec.parity).unwrap()
    };
    let a = at(vec![60, 80]);
    let b = at(vec![100, 120]);
    assert_eq!(a.parity(), Some(Parity::Odd));
    for (x, y) in a.f_coeffs().iter().zip(b.f_coeffs()) {
        let scale = y.abs().max(&r("1e-3")).clone();
        assert!((x - y).abs() / scale < r("1e-6"), "{x} vs {y}");
    }
}

#[test]
fn general_series_on_asymmetric_problem_solves_the_equation() {
    use atem_core::{AnsatzExponent, Poly};
    let potential = Poly::parse(&["0", "1", "1"], prec()).unwrap();
    let ansatz = AnsatzExponent::from_alpha_beta(&r("1"), &r("0")).unwrap();
    let problem = ProblemSpec::new(potential, ansatz).unwrap();
    let s = build_series(&problem, &r("2.75"), 60, 80, None).unwrap();
    assert_eq!(s.parity(), None);
    assert_eq!(s.f_coeffs()[0], r("1"));
    let s = normalize(&s, &r("1e-30")).unwrap();
    // exact first excited state ∝ (x + 1/2) exp(-(x + 1/2)²/2); grid avoids its node
    let exact = |x: &Real| {
        let y = x + &r("0.5");
        &y * &(-(&y * &y).div_int(2)).exp()
    };
    let xs = grid(-2.0, 1.0, 8);
    let reference = &s.psi(&xs[0]) / &exact(&xs[0]);
    for x in &xs {
        let ratio = &s.psi(x) / &exact(x);
        assert!((&ratio - &reference).abs() / reference.abs() < r("1e-10"), "x = {x}");
    }
}
