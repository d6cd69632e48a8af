//! Seed derivation, the `(pₙ, qₙ)` polynomial recurrence, and the
//! quantization functions built from its values at the origin.
//!
//! With `ψ = exp(-s) f`, the equation `-ψ'' + V ψ = κ E ψ` becomes
//! `f'' = p₀ f' + q₀ f` with `p₀ = 2 s'` and `q₀ = s'' - s'² + V - κ E`.
//! Differentiating repeatedly gives `f⁽ⁿ⁺²⁾ = pₙ f' + qₙ f` where
//!
//! ```text
//! pₙ = p₀ pₙ₋₁ + pₙ₋₁' + qₙ₋₁
//! qₙ = q₀ pₙ₋₁ + qₙ₋₁'
//! ```
//!
//! `κ` is the energy scale of the problem (1 for the plain equation).

use std::fmt;

use log::info;

use crate::error::{Error, Result};
use crate::numerics::{Poly, Precision, Real};

/// Boundary channel of a symmetric problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    /// `f(0) = 1, f'(0) = 0`
    Even,
    /// `f(0) = 0, f'(0) = 1`
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// The exponent `s(x)` of the envelope `exp(-s(x))`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzExponent {
    s: Poly,
}

impl AnsatzExponent {
    /// Validates `s` and strips its constant term, which would only rescale ψ.
    pub fn new(s: Poly) -> Result<Self> {
        let prec = s.prec();
        let mut coeffs = s.into_coeffs();
        if let Some(c0) = coeffs.first_mut() {
            *c0 = Real::zero(prec);
        }
        let s = Poly::from_coeffs(coeffs, prec);
        let degree = s
            .degree()
            .ok_or_else(|| Error::InvalidAnsatz("exponent is identically zero".into()))?;
        if degree < 2 || degree % 2 != 0 {
            return Err(Error::InvalidAnsatz(format!(
                "exponent degree must be even and at least 2, got {degree}"
            )));
        }
        if !s.leading_coeff().is_some_and(Real::is_positive) {
            return Err(Error::InvalidAnsatz(
                "leading coefficient must be positive for a normalizable envelope".into(),
            ));
        }
        Ok(AnsatzExponent { s })
    }

    /// `s(x) = α x²/2 + β x⁴/4`
    pub fn from_alpha_beta(alpha: &Real, beta: &Real) -> Result<Self> {
        let prec = alpha.prec().max(beta.prec());
        let zero = Real::zero(prec);
        let s = Poly::from_coeffs(
            vec![zero.clone(), zero.clone(), alpha.div_int(2), zero, beta.div_int(4)],
            prec,
        );
        Self::new(s)
    }

    pub fn poly(&self) -> &Poly {
        &self.s
    }
}

/// A Schrödinger problem `-ψ'' + V ψ = κ E ψ` together with its envelope.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    potential: Poly,
    ansatz: AnsatzExponent,
    energy_scale: Real,
    symmetric: bool,
}

impl ProblemSpec {
    /// Symmetry is detected from the coefficients: both `V` and `s` even.
    pub fn new(potential: Poly, ansatz: AnsatzExponent) -> Result<Self> {
        match potential.degree() {
            Some(d) if d >= 2 => {}
            d => {
                return Err(Error::InvalidProblem(format!(
                    "potential degree must be at least 2, got {}",
                    d.map_or("none (zero polynomial)".to_string(), |d| d.to_string())
                )))
            }
        }
        let symmetric = potential.is_even() && ansatz.poly().is_even();
        let energy_scale = Real::one(potential.prec());
        Ok(ProblemSpec {
            potential,
            ansatz,
            energy_scale,
            symmetric,
        })
    }

    /// Solves `-ψ'' + V ψ = κ E ψ` instead of the unit-scale equation, so
    /// that reported energies are `E = E_unit / κ`.
    pub fn with_energy_scale(mut self, kappa: Real) -> Result<Self> {
        if !kappa.is_positive() {
            return Err(Error::InvalidProblem(format!(
                "energy scale must be positive, got {kappa}"
            )));
        }
        self.energy_scale = kappa;
        Ok(self)
    }

    /// Overrides the detected symmetry. Declaring symmetry on a problem with
    /// odd-power terms is an error; switching it off forces the general
    /// determinant route.
    pub fn with_symmetry(mut self, symmetric: bool) -> Result<Self> {
        if symmetric && !(self.potential.is_even() && self.ansatz.poly().is_even()) {
            return Err(Error::InvalidProblem(
                "symmetric flag set but V or s has odd-power terms".into(),
            ));
        }
        self.symmetric = symmetric;
        Ok(self)
    }

    pub fn potential(&self) -> &Poly {
        &self.potential
    }

    pub fn ansatz(&self) -> &AnsatzExponent {
        &self.ansatz
    }

    pub fn energy_scale(&self) -> &Real {
        &self.energy_scale
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn precision(&self) -> Precision {
        self.potential
            .prec()
            .max(self.ansatz.poly().prec())
            .max(self.energy_scale.prec())
    }

    /// Minimum of `V(x)/κ`, located on a fine grid over a window that
    /// contains every critical point of `V`. Lower bound for any eigenvalue.
    pub fn potential_minimum(&self) -> f64 {
        let coeffs: Vec<f64> = self.potential.coeffs().iter().map(Real::to_f64).collect();
        let lead = coeffs.last().copied().unwrap_or(1.0).abs();
        // Cauchy bound on the roots of V'.
        let bound = 1.0
            + coeffs[1..coeffs.len() - 1]
                .iter()
                .map(|c| c.abs() / lead)
                .fold(0.0, f64::max);
        let steps = 8000;
        let vmin = (0..=steps)
            .map(|i| -bound + 2.0 * bound * i as f64 / steps as f64)
            .map(|x| self.potential.eval_f64(x))
            .fold(f64::INFINITY, f64::min);
        vmin / self.energy_scale.to_f64()
    }
}

/// The pair `(p₀, q₀)` with the energy dependence split out:
/// `q₀(x; E) = q0_base(x) - κ E`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedPair {
    p0: Poly,
    q0_base: Poly,
    energy_scale: Real,
    symmetric: bool,
}

impl SeedPair {
    pub fn p0(&self) -> &Poly {
        &self.p0
    }

    pub fn q0_base(&self) -> &Poly {
        &self.q0_base
    }

    pub fn energy_scale(&self) -> &Real {
        &self.energy_scale
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn precision(&self) -> Precision {
        self.p0
            .prec()
            .max(self.q0_base.prec())
            .max(self.energy_scale.prec())
    }

    /// `q₀` at a numeric energy.
    pub fn q0_at(&self, energy: &Real) -> Poly {
        let shift = Poly::constant(energy * &self.energy_scale);
        &self.q0_base - &shift
    }

    /// False when the potential outgrows `s'²`, i.e. the leading term of
    /// `q0_base` is not cancelled and is positive. The envelope then decays
    /// more slowly than ψ and `f` has to grow to compensate.
    pub fn ansatz_dominates(&self) -> bool {
        let Some(q_deg) = self.q0_base.degree() else {
            return true;
        };
        let s1_sq_deg = self.p0.degree().map_or(0, |d| 2 * d);
        !(q_deg >= s1_sq_deg && self.q0_base.leading_coeff().is_some_and(Real::is_positive))
    }
}

/// Builds `p₀ = 2 s'` and `q0_base = s'' - s'² + V`.
pub fn derive_seed(problem: &ProblemSpec) -> Result<SeedPair> {
    let s = problem.ansatz().poly();
    let prec = problem.precision();
    let s1 = s.diff();
    let s2 = s1.diff();
    let p0 = s1.scale(&Real::from_i64(2, prec));
    let q0_base = &(&s2 - &(&s1 * &s1)) + problem.potential();
    if !p0.all_finite() || !q0_base.all_finite() {
        return Err(Error::InvalidAnsatz("seed has non-finite coefficients".into()));
    }
    if problem.is_symmetric() {
        debug_assert!(p0.is_odd() && q0_base.is_even());
    }
    let seed = SeedPair {
        p0,
        q0_base,
        energy_scale: problem.energy_scale().clone(),
        symmetric: problem.is_symmetric(),
    };
    if !seed.ansatz_dominates() {
        info!(
            "potential outgrows the ansatz envelope (q0_base = {:?}); convergence may be slow",
            seed.q0_base
        );
    }
    Ok(seed)
}

/// When to rescale `(pₙ, qₙ)` jointly.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum RenormPolicy {
    /// Rescale when the largest coefficient exceeds `2^(bits/2)`.
    #[default]
    Auto,
    /// Rescale when the largest coefficient exceeds the given magnitude.
    Threshold(Real),
    /// Never rescale.
    Never,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct RecurrenceOptions {
    /// Keep the full `pₙ(x), qₙ(x)`. Otherwise level `n` is truncated to
    /// degree `m_max - n`, which leaves every value at the origin unchanged.
    pub retain_polys: bool,
    pub renorm: RenormPolicy,
}

/// Values `pₙ(0), qₙ(0)` for `n = 0..=m_max` at one energy.
#[derive(Clone, Debug)]
pub struct RecurrenceTrace {
    energy: Real,
    m_max: usize,
    p_at_zero: Vec<Real>,
    q_at_zero: Vec<Real>,
    renorm_log: Vec<(usize, Real)>,
    polys: Option<Vec<(Poly, Poly)>>,
    symmetric: bool,
}

impl RecurrenceTrace {
    pub fn energy(&self) -> &Real {
        &self.energy
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Stored (possibly renormalized) `pₙ(0)`.
    pub fn p_at_zero(&self) -> &[Real] {
        &self.p_at_zero
    }

    /// Stored (possibly renormalized) `qₙ(0)`.
    pub fn q_at_zero(&self) -> &[Real] {
        &self.q_at_zero
    }

    /// `(step, factor)`: level `step` and every later level were divided by `factor`.
    pub fn renorm_log(&self) -> &[(usize, Real)] {
        &self.renorm_log
    }

    pub fn polys(&self) -> Option<&[(Poly, Poly)]> {
        self.polys.as_deref()
    }

    /// Product of the renormalization factors applied up to level `n`.
    pub fn cumulative_scale(&self, n: usize) -> Real {
        let prec = self.energy.prec();
        self.renorm_log
            .iter()
            .take_while(|(step, _)| *step <= n)
            .fold(Real::one(prec), |acc, (_, f)| acc * f)
    }

    /// `pₙ(0)` with renormalization undone.
    pub fn unscaled_p_at_zero(&self, n: usize) -> Real {
        &self.p_at_zero[n] * &self.cumulative_scale(n)
    }

    /// `qₙ(0)` with renormalization undone.
    pub fn unscaled_q_at_zero(&self, n: usize) -> Real {
        &self.q_at_zero[n] * &self.cumulative_scale(n)
    }
}

/// Runs the recurrence to depth `m_max` with automatic renormalization.
pub fn run_recurrence(
    seed: &SeedPair,
    energy: &Real,
    m_max: usize,
    retain_polys: bool,
) -> Result<RecurrenceTrace> {
    run_recurrence_with(
        seed,
        energy,
        m_max,
        &RecurrenceOptions {
            retain_polys,
            renorm: RenormPolicy::Auto,
        },
    )
}

pub fn run_recurrence_with(
    seed: &SeedPair,
    energy: &Real,
    m_max: usize,
    opts: &RecurrenceOptions,
) -> Result<RecurrenceTrace> {
    if m_max < 2 {
        return Err(Error::DepthOutOfRange {
            depth: m_max,
            min: 2,
            max: usize::MAX,
        });
    }
    let prec = seed.precision().max(energy.prec());
    let energy = energy.to_precision(prec);
    let threshold = match &opts.renorm {
        RenormPolicy::Auto => Some(Real::from_i64(2, prec).powi((prec.bits() / 2) as i32)),
        RenormPolicy::Threshold(t) => Some(t.clone()),
        RenormPolicy::Never => None,
    };

    let p0 = seed.p0.clone();
    let q0 = seed.q0_at(&energy);
    let mut p = p0.clone();
    let mut q = q0.clone();
    let keep = |n: usize| {
        if opts.retain_polys {
            usize::MAX
        } else {
            m_max - n + 1
        }
    };
    p.truncate(keep(0) - 1);
    q.truncate(keep(0) - 1);

    let mut p_at_zero = Vec::with_capacity(m_max + 1);
    let mut q_at_zero = Vec::with_capacity(m_max + 1);
    let mut renorm_log = Vec::new();
    let mut polys = opts.retain_polys.then(Vec::new);

    p_at_zero.push(p.eval_at_zero());
    q_at_zero.push(q.eval_at_zero());
    if let Some(v) = polys.as_mut() {
        v.push((p.clone(), q.clone()));
    }

    for n in 1..=m_max {
        let len = keep(n);
        let mut pn = &p0.mul_truncated(&p, len) + &(&p.diff() + &q);
        let mut qn = &q0.mul_truncated(&p, len) + &q.diff();
        if len != usize::MAX {
            pn.truncate(len - 1);
            qn.truncate(len - 1);
        }
        if !pn.all_finite() || !qn.all_finite() {
            return Err(Error::RecurrenceOverflow { step: n });
        }

        if let Some(limit) = &threshold {
            let peak = match (pn.max_abs_coeff(), qn.max_abs_coeff()) {
                (Some(a), Some(b)) => Some(if b > a { b } else { a }),
                (a, b) => a.or(b),
            };
            if let Some(peak) = peak.filter(|m| m > limit) {
                pn = pn.rescale_down(&peak)?;
                qn = qn.rescale_down(&peak)?;
                renorm_log.push((n, peak));
            }
        }

        p_at_zero.push(pn.eval_at_zero());
        q_at_zero.push(qn.eval_at_zero());
        if let Some(v) = polys.as_mut() {
            v.push((pn.clone(), qn.clone()));
        }
        p = pn;
        q = qn;
    }

    Ok(RecurrenceTrace {
        energy,
        m_max,
        p_at_zero,
        q_at_zero,
        renorm_log,
        polys,
        symmetric: seed.symmetric,
    })
}

/// `δ_m = q_m(0) p_{m-1}(0) - p_m(0) q_{m-1}(0)`. Only its sign is meaningful
/// once renormalization has occurred.
pub fn quantization_determinant(trace: &RecurrenceTrace, m: usize) -> Result<Real> {
    if m < 1 || m > trace.m_max {
        return Err(Error::DepthOutOfRange {
            depth: m,
            min: 1,
            max: trace.m_max,
        });
    }
    let (p, q) = (&trace.p_at_zero, &trace.q_at_zero);
    Ok(&(&q[m] * &p[m - 1]) - &(&p[m] * &q[m - 1]))
}

/// Parity-split truncation condition: `q_m(0)` for the even channel,
/// `p_{m-1}(0)` for the odd channel. `m` must be even.
pub fn parity_quantization(trace: &RecurrenceTrace, parity: Parity, m: usize) -> Result<Real> {
    if !trace.symmetric {
        return Err(Error::NotSymmetric);
    }
    if m % 2 != 0 {
        return Err(Error::OddDepth(m));
    }
    let min = match parity {
        Parity::Even => 0,
        Parity::Odd => 2,
    };
    if m < min || m > trace.m_max {
        return Err(Error::DepthOutOfRange {
            depth: m,
            min,
            max: trace.m_max,
        });
    }
    Ok(match parity {
        Parity::Even => trace.q_at_zero[m].clone(),
        Parity::Odd => trace.p_at_zero[m - 1].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::DEFAULT
    }

    fn r(v: f64) -> Real {
        Real::from_f64(v, prec()).unwrap()
    }

    fn poly(c: &[f64]) -> Poly {
        Poly::from_f64s(c, prec()).unwrap()
    }

    fn harmonic() -> ProblemSpec {
        let ansatz = AnsatzExponent::from_alpha_beta(&r(1.0), &r(0.0)).unwrap();
        ProblemSpec::new(poly(&[0.0, 0.0, 1.0]), ansatz).unwrap()
    }

    #[test]
    fn ansatz_strips_constant() {
        let a = AnsatzExponent::new(poly(&[3.0, 0.0, 0.5])).unwrap();
        assert_eq!(a.poly(), &poly(&[0.0, 0.0, 0.5]));
    }

    #[test]
    fn ansatz_rejects_bad_shapes() {
        assert!(AnsatzExponent::new(poly(&[0.0, 1.0])).is_err());
        assert!(AnsatzExponent::new(poly(&[0.0, 0.0, 0.0, 1.0])).is_err());
        assert!(AnsatzExponent::new(poly(&[0.0, 0.0, -1.0])).is_err());
        assert!(AnsatzExponent::new(poly(&[2.0])).is_err());
        assert!(AnsatzExponent::from_alpha_beta(&r(4.0), &r(-1.0)).is_err());
    }

    #[test]
    fn problem_validation() {
        let ansatz = AnsatzExponent::from_alpha_beta(&r(1.0), &r(0.0)).unwrap();
        assert!(ProblemSpec::new(poly(&[1.0, 1.0]), ansatz.clone()).is_err());
        let lopsided = ProblemSpec::new(poly(&[0.0, 1.0, 1.0]), ansatz.clone()).unwrap();
        assert!(!lopsided.is_symmetric());
        assert!(lopsided.clone().with_symmetry(true).is_err());
        assert!(harmonic().with_energy_scale(r(0.0)).is_err());
        assert!(harmonic().is_symmetric());
        assert!(!harmonic().with_symmetry(false).unwrap().is_symmetric());
    }

    #[test]
    fn harmonic_seed() {
        let seed = derive_seed(&harmonic()).unwrap();
        assert_eq!(seed.p0(), &poly(&[0.0, 2.0]));
        assert_eq!(seed.q0_base(), &poly(&[1.0]));
        assert_eq!(seed.q0_at(&r(3.0)), poly(&[-2.0]));
        assert!(seed.ansatz_dominates());
    }

    #[test]
    fn quartic_seed_beta_zero() {
        let g = r(0.5);
        let alpha = r(4.0);
        let ansatz = AnsatzExponent::from_alpha_beta(&alpha, &r(0.0)).unwrap();
        let v = Poly::from_coeffs(vec![r(0.0), r(0.0), r(1.0), r(0.0), g.clone()], prec());
        let seed = derive_seed(&ProblemSpec::new(v, ansatz).unwrap()).unwrap();
        assert_eq!(seed.p0(), &poly(&[0.0, 8.0]));
        assert_eq!(seed.q0_base(), &poly(&[4.0, 0.0, -15.0, 0.0, 0.5]));
        assert!(!seed.ansatz_dominates());
    }

    #[test]
    fn sextic_seed() {
        let ansatz = AnsatzExponent::from_alpha_beta(&r(4.0), &r(1.0)).unwrap();
        let v = poly(&[1.0, 0.0, -2.0, 0.0, -2.0, 0.0, 1.0]);
        let seed = derive_seed(&ProblemSpec::new(v, ansatz).unwrap()).unwrap();
        assert_eq!(seed.p0(), &poly(&[0.0, 8.0, 0.0, 2.0]));
        assert_eq!(seed.q0_base(), &poly(&[5.0, 0.0, -15.0, 0.0, -10.0]));
        assert!(seed.ansatz_dominates());
    }

    #[test]
    fn harmonic_first_levels() {
        let seed = derive_seed(&harmonic()).unwrap();
        let t = run_recurrence(&seed, &r(0.0), 4, true).unwrap();
        assert_eq!(t.p_at_zero()[1], r(3.0));
        assert!(t.q_at_zero()[1].is_zero());
        assert!(t.p_at_zero()[2].is_zero());
        let (p1, q1) = &t.polys().unwrap()[1];
        assert_eq!(p1, &poly(&[3.0, 0.0, 4.0]));
        assert_eq!(q1, &poly(&[0.0, 2.0]));
    }

    #[test]
    fn harmonic_q2_factorizes() {
        let seed = derive_seed(&harmonic()).unwrap();
        for e in [-1.5, 0.0, 1.0, 2.25, 5.0, 7.0] {
            let t = run_recurrence(&seed, &r(e), 2, false).unwrap();
            assert_eq!(t.q_at_zero()[2], r((1.0 - e) * (5.0 - e)), "E = {e}");
            assert!(t.p_at_zero()[2].is_zero());
        }
    }

    #[test]
    fn harmonic_determinant_at_depth_two() {
        let seed = derive_seed(&harmonic()).unwrap();
        for e in [0.0, 0.5, 2.0, 4.0, 6.5] {
            let t = run_recurrence(&seed, &r(e), 2, false).unwrap();
            let d = quantization_determinant(&t, 2).unwrap();
            assert_eq!(d, r((1.0 - e) * (5.0 - e) * (3.0 - e)), "E = {e}");
        }
    }

    #[test]
    fn determinant_at_depth_one() {
        let seed = derive_seed(&harmonic()).unwrap();
        let t = run_recurrence(&seed, &r(0.75), 3, false).unwrap();
        let expected = &(&t.q_at_zero()[1] * &t.p_at_zero()[0]) - &(&t.p_at_zero()[1] * &t.q_at_zero()[0]);
        assert_eq!(quantization_determinant(&t, 1).unwrap(), expected);
        assert!(quantization_determinant(&t, 0).is_err());
        assert!(quantization_determinant(&t, 4).is_err());
    }

    #[test]
    fn harmonic_parity_channels_at_depth_two() {
        let seed = derive_seed(&harmonic()).unwrap();
        let t = run_recurrence(&seed, &r(2.0), 2, false).unwrap();
        assert_eq!(parity_quantization(&t, Parity::Even, 2).unwrap(), r(-3.0));
        assert_eq!(parity_quantization(&t, Parity::Odd, 2).unwrap(), r(1.0));
        assert!(matches!(parity_quantization(&t, Parity::Even, 1), Err(Error::OddDepth(1))));
    }

    #[test]
    fn harmonic_exact_at_odd_integers() {
        let seed = derive_seed(&harmonic()).unwrap();
        // renormalized values stay below 2^128, so 1e-40 is far below any O(1) miss
        let tiny = Real::parse("1e-40", prec()).unwrap();
        for n in 0..4 {
            let t = run_recurrence(&seed, &r((2 * n + 1) as f64), 60, false).unwrap();
            let d = quantization_determinant(&t, 60).unwrap();
            assert!(d.abs() < tiny, "n = {n}: {d}");
            let miss = run_recurrence(&seed, &r((2 * n + 2) as f64), 60, false).unwrap();
            assert!(quantization_determinant(&miss, 60).unwrap().abs() > tiny);
        }
    }

    #[test]
    fn parity_channels_reject_asymmetric() {
        let ansatz = AnsatzExponent::from_alpha_beta(&r(1.0), &r(0.0)).unwrap();
        let p = ProblemSpec::new(poly(&[0.0, 0.5, 1.0]), ansatz).unwrap();
        let seed = derive_seed(&p).unwrap();
        let t = run_recurrence(&seed, &r(1.0), 4, false).unwrap();
        assert_eq!(parity_quantization(&t, Parity::Even, 4), Err(Error::NotSymmetric));
        assert!(quantization_determinant(&t, 4).is_ok());
    }

    #[test]
    fn shallow_depth_rejected() {
        let seed = derive_seed(&harmonic()).unwrap();
        assert!(run_recurrence(&seed, &r(1.0), 1, false).is_err());
    }

    #[test]
    fn truncation_preserves_values_at_zero() {
        let ansatz = AnsatzExponent::from_alpha_beta(&r(4.0), &r(1.0)).unwrap();
        let v = poly(&[1.0, 0.0, -2.0, 0.0, -2.0, 0.0, 1.0]);
        let seed = derive_seed(&ProblemSpec::new(v, ansatz).unwrap()).unwrap();
        let opts = |retain| RecurrenceOptions {
            retain_polys: retain,
            renorm: RenormPolicy::Never,
        };
        let e = r(1.3);
        let full = run_recurrence_with(&seed, &e, 30, &opts(true)).unwrap();
        let cut = run_recurrence_with(&seed, &e, 30, &opts(false)).unwrap();
        assert_eq!(full.p_at_zero(), cut.p_at_zero());
        assert_eq!(full.q_at_zero(), cut.q_at_zero());
    }

    #[test]
    fn renormalization_is_logged_and_undoable() {
        let seed = derive_seed(&harmonic()).unwrap();
        let e = r(2.5);
        let plain = run_recurrence_with(
            &seed,
            &e,
            40,
            &RecurrenceOptions {
                retain_polys: false,
                renorm: RenormPolicy::Never,
            },
        )
        .unwrap();
        let forced = run_recurrence_with(
            &seed,
            &e,
            40,
            &RecurrenceOptions {
                retain_polys: false,
                renorm: RenormPolicy::Threshold(r(10.0)),
            },
        )
        .unwrap();
        assert!(!forced.renorm_log().is_empty());
        assert!(forced.renorm_log().iter().all(|(_, f)| f.is_positive()));
        let tol = Real::parse("1e-60", prec()).unwrap();
        for n in 0..=40 {
            let a = forced.unscaled_p_at_zero(n);
            let b = &plain.p_at_zero()[n];
            assert!((&a - b).abs() <= &tol * &b.abs().max(&Real::one(prec())).clone(), "n = {n}");
        }
    }
}
