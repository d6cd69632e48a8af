//! Truncated Taylor series for `f(x)`, the envelope `exp(-s(x))`, and the
//! normalized wavefunction `ψ(x) = N exp(-s(x)) f(x)`.

use crate::engine::{derive_seed, run_recurrence, Parity, ProblemSpec, RecurrenceTrace};
use crate::error::{Error, Result};
use crate::numerics::{Poly, Precision, Real};
use crate::spectrum::Channel;

#[derive(Clone, Debug, PartialEq)]
pub struct WavefunctionSeries {
    problem: ProblemSpec,
    energy: Real,
    parity: Option<Parity>,
    f_coeffs: Vec<Real>,
    norm_constant: Real,
    normalized: bool,
    truncation_order: usize,
}

impl WavefunctionSeries {
    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn energy(&self) -> &Real {
        &self.energy
    }

    /// `None` for a series built from the general determinant condition.
    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    /// Coefficient of `x^n` at index `n`, for `n = 0..=truncation_order`.
    pub fn f_coeffs(&self) -> &[Real] {
        &self.f_coeffs
    }

    pub fn f_poly(&self) -> Poly {
        Poly::from_coeffs(self.f_coeffs.clone(), self.precision())
    }

    pub fn norm_constant(&self) -> &Real {
        &self.norm_constant
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn truncation_order(&self) -> usize {
        self.truncation_order
    }

    pub fn precision(&self) -> Precision {
        self.problem.precision().max(self.energy.prec())
    }

    /// Multiplies every coefficient of `f` by `c`, dropping any normalization.
    pub fn scaled(&self, c: &Real) -> WavefunctionSeries {
        let mut out = self.clone();
        out.f_coeffs = self.f_coeffs.iter().map(|a| a * c).collect();
        out.norm_constant = Real::one(self.precision());
        out.normalized = false;
        out
    }

    /// `ψ(x) = N exp(-s(x)) f(x)`
    pub fn psi(&self, x: &Real) -> Real {
        let envelope = (-self.problem.ansatz().poly().eval(x)).exp();
        &(&self.norm_constant * &envelope) * &self.f_poly().eval(x)
    }
}

fn factorials(n: usize, prec: Precision) -> Vec<Real> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Real::one(prec);
    out.push(acc.clone());
    for k in 1..=n {
        acc = acc.mul_int(k as i32);
        out.push(acc.clone());
    }
    out
}

fn sign_change(a: &Real, b: &Real) -> bool {
    a.is_zero() || b.is_zero() || a.sign() != b.sign()
}

/// Boundary vector `(f(0), f'(0))` for the determinant condition at depth `d`.
fn generic_boundary(
    problem: &ProblemSpec,
    trace: &RecurrenceTrace,
    energy: &Real,
    m: usize,
    d: usize,
) -> Result<(Real, Real, Option<Parity>)> {
    let prec = trace.energy().prec();
    // Eigenvalue certificate: δ_d must change sign in a small window around E.
    let seed = derive_seed(problem)?;
    let span = energy.abs().max(&Real::one(prec)).clone();
    let eps = &span * &Real::from_i64(10, prec).powi(-((prec.decimal_digits() / 3) as i32));
    let probe = |e: &Real| -> Result<RecurrenceTrace> { run_recurrence(&seed, e, d, false) };
    let below = probe(&(energy - &eps))?;
    let above = probe(&(energy + &eps))?;
    let det = |t: &RecurrenceTrace| Channel::Determinant.evaluate(t, d);
    if !sign_change(&det(&below)?, &det(&above)?) {
        let here = det(trace)?;
        return Err(Error::NotAnEigenvalue {
            energy: energy.to_decimal(25),
            m,
            ratio: here.to_decimal(6),
        });
    }

    if problem.is_symmetric() {
        // δ_d factorizes; whichever factor changes sign fixes the parity.
        let even_flips = sign_change(&below.q_at_zero()[d], &above.q_at_zero()[d]);
        return Ok(if even_flips {
            (Real::one(prec), Real::zero(prec), Some(Parity::Even))
        } else {
            (Real::zero(prec), Real::one(prec), Some(Parity::Odd))
        });
    }

    // q_d f(0) + p_d f'(0) = 0  ⇒  (f(0), f'(0)) ∝ (p_d, -q_d)
    let mut a = trace.unscaled_p_at_zero(d);
    let mut b = -trace.unscaled_q_at_zero(d);
    if a.is_zero() && b.is_zero() {
        a = trace.unscaled_p_at_zero(d - 1);
        b = -trace.unscaled_q_at_zero(d - 1);
    }
    Ok(if a.is_zero() {
        (Real::zero(prec), Real::one(prec), None)
    } else {
        let b = &b / &a;
        (Real::one(prec), b, None)
    })
}

/// Taylor series of `f` through `x^truncation_order` at `energy`.
///
/// `parity` selects the boundary data: even `(f(0), f'(0)) = (1, 0)`, odd
/// `(0, 1)`, or `None` to take the ratio from the determinant condition at
/// iteration number `m`, which requires `energy` to be an eigenvalue there.
pub fn build_series(
    problem: &ProblemSpec,
    energy: &Real,
    m: usize,
    truncation_order: usize,
    parity: Option<Parity>,
) -> Result<WavefunctionSeries> {
    if parity.is_some() && !problem.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let generic_depth = if parity.is_none() {
        Some(Channel::Determinant.depth_for(m).ok_or(Error::DepthOutOfRange {
            depth: m,
            min: 4,
            max: usize::MAX,
        })?)
    } else {
        None
    };
    let prec = problem.precision().max(energy.prec());
    let energy = energy.to_precision(prec);
    let seed = derive_seed(problem)?;
    let depth = truncation_order
        .saturating_sub(2)
        .max(generic_depth.unwrap_or(0))
        .max(2);
    let trace = run_recurrence(&seed, &energy, depth, false)?;

    let (a, b, parity) = match (parity, generic_depth) {
        (Some(Parity::Even), _) => (Real::one(prec), Real::zero(prec), Some(Parity::Even)),
        (Some(Parity::Odd), _) => (Real::zero(prec), Real::one(prec), Some(Parity::Odd)),
        (None, Some(d)) => generic_boundary(problem, &trace, &energy, m, d)?,
        (None, None) => unreachable!("generic depth computed above"),
    };

    let fact = factorials(truncation_order, prec);
    let mut f_coeffs = Vec::with_capacity(truncation_order + 1);
    for n in 0..=truncation_order {
        let c = match n {
            0 => a.clone(),
            1 => b.clone(),
            _ => {
                let mut acc = Real::zero(prec);
                if !a.is_zero() {
                    acc.add_mul_assign(&a, &trace.unscaled_q_at_zero(n - 2));
                }
                if !b.is_zero() {
                    acc.add_mul_assign(&b, &trace.unscaled_p_at_zero(n - 2));
                }
                &acc / &fact[n]
            }
        };
        f_coeffs.push(c);
    }

    Ok(WavefunctionSeries {
        problem: problem.clone(),
        energy,
        parity,
        f_coeffs,
        norm_constant: Real::one(prec),
        normalized: false,
        truncation_order,
    })
}

const INITIAL_INTERVALS: usize = 64;
const MAX_HALVINGS: u32 = 12;

/// Sets the normalization so that `∫ ψ² dx = 1`.
///
/// The integral runs over `[-L, L]` with `L` the first half-integer at which
/// `exp(-2 s(L)) f(L)²` has dropped below `quad_tol²`, using composite Simpson
/// with interval halving until successive estimates agree to a relative
/// `quad_tol`. The sign of `f` is fixed so that its lowest nonzero
/// coefficient is positive.
pub fn normalize(series: &WavefunctionSeries, quad_tol: &Real) -> Result<WavefunctionSeries> {
    let prec = series.precision();
    let tol = quad_tol.to_precision(prec);
    if !tol.is_positive() {
        return Err(Error::InvalidConfig("quadrature tolerance must be positive".into()));
    }
    let s = series.problem.ansatz().poly();
    let f = series.f_poly();
    if f.is_zero() {
        return Err(Error::ZeroNorm);
    }
    let density = |x: &Real| -> Real {
        let psi = &(-s.eval(x)).exp() * &f.eval(x);
        &psi * &psi
    };

    // tail cutoff
    let cutoff = (&tol * &tol).ln();
    let half = Real::parse("0.5", prec)?;
    let mut l = Real::one(prec);
    let limit = Real::from_i64(200, prec);
    loop {
        let edge = density(&l).max(&density(&-&l)).clone();
        if edge.is_zero() || edge.ln() < cutoff {
            break;
        }
        l += &half;
        if l > limit {
            return Err(Error::QuadratureDiverged { halvings: 0 });
        }
    }

    let lo = -&l;
    let width = &l - &lo;
    let mut n = INITIAL_INTERVALS;
    let point = |i: usize, n: usize| &lo + &(&(&width * &Real::from_i64(i as i64, prec)) / &Real::from_i64(n as i64, prec));
    let ends = &density(&lo) + &density(&l);
    let mut evens = Real::zero(prec); // interior points at even indices
    for i in (2..n).step_by(2) {
        evens += density(&point(i, n));
    }
    let mut odds = Real::zero(prec);
    for i in (1..n).step_by(2) {
        odds += density(&point(i, n));
    }
    let simpson = |ends: &Real, evens: &Real, odds: &Real, n: usize| -> Real {
        let h = &width / &Real::from_i64(n as i64, prec);
        let sum = &(ends + &evens.mul_int(2)) + &odds.mul_int(4);
        &(&h * &sum) / &Real::from_i64(3, prec)
    };
    let mut estimate = simpson(&ends, &evens, &odds, n);
    let mut converged = false;
    for _ in 0..MAX_HALVINGS {
        evens += &odds;
        n *= 2;
        odds = Real::zero(prec);
        for i in (1..n).step_by(2) {
            odds += density(&point(i, n));
        }
        let next = simpson(&ends, &evens, &odds, n);
        let change = (&next - &estimate).abs();
        estimate = next;
        if change < &tol * &estimate.abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::QuadratureDiverged {
            halvings: MAX_HALVINGS,
        });
    }
    if !estimate.is_positive() {
        return Err(Error::ZeroNorm);
    }

    let mut out = series.clone();
    let flip = series
        .f_coeffs
        .iter()
        .find(|c| !c.is_zero())
        .is_some_and(Real::is_negative);
    if flip {
        out.f_coeffs = series.f_coeffs.iter().map(|c| -c).collect();
    }
    out.norm_constant = estimate.sqrt().recip();
    out.normalized = true;
    Ok(out)
}

/// `(x, ψ(x))` at `n_points` uniformly spaced points of `[x_min, x_max]`.
/// Mirror-image points are exact negatives of each other.
pub fn sample(series: &WavefunctionSeries, x_min: &Real, x_max: &Real, n_points: usize) -> Vec<(Real, Real)> {
    let prec = series.precision();
    let xs: Vec<Real> = match n_points {
        0 => Vec::new(),
        1 => vec![x_min.to_precision(prec)],
        _ => {
            let n = (n_points - 1) as i64;
            (0..=n)
                .map(|i| {
                    let a = x_min * &Real::from_i64(n - i, prec);
                    let b = x_max * &Real::from_i64(i, prec);
                    &(&a + &b) / &Real::from_i64(n, prec)
                })
                .collect()
        }
    };
    xs.into_iter()
        .map(|x| {
            let psi = series.psi(&x);
            (x, psi)
        })
        .collect()
}

/// `|-ψ'' + V ψ - κ E ψ|` at each point, with `ψ''` from the product and
/// chain rules on `exp(-s) f`.
pub fn residual(series: &WavefunctionSeries, x_points: &[Real]) -> Vec<Real> {
    residual_at_energy(series, &series.energy, x_points)
}

/// [`residual`] with the energy in the operator replaced by `energy` while
/// `f` stays fixed.
pub fn residual_at_energy(series: &WavefunctionSeries, energy: &Real, x_points: &[Real]) -> Vec<Real> {
    let prec = series.precision();
    let s = series.problem.ansatz().poly();
    let s1 = s.diff();
    let s2 = s1.diff();
    let f = series.f_poly();
    let f1 = f.diff();
    let f2 = f1.diff();
    let v = series.problem.potential();
    let shift = energy.to_precision(prec) * series.problem.energy_scale();
    x_points
        .iter()
        .map(|x| {
            let (sx1, sx2) = (s1.eval(x), s2.eval(x));
            let (fx, fx1, fx2) = (f.eval(x), f1.eval(x), f2.eval(x));
            // exp(s) ψ'' / N = f'' - 2 s' f' + (s'² - s'') f
            let curvature = &(&fx2 - &(&sx1 * &fx1).mul_int(2)) + &(&(&(&sx1 * &sx1) - &sx2) * &fx);
            let rest = &(&v.eval(x) - &shift) * &fx;
            let envelope = (-s.eval(x)).exp();
            (&(&series.norm_constant * &envelope) * &(&rest - &curvature)).abs()
        })
        .collect()
}

/// Sign changes along a sampled function, ignoring samples whose magnitude
/// is at most `floor` (numerical zeros in the far tails).
pub fn count_sign_changes(values: &[f64], floor: f64) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}
