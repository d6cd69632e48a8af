//! Ready-made problems: harmonic oscillator, quartic anharmonic oscillator
//! and the symmetric sextic double well.

use crate::engine::{AnsatzExponent, ProblemSpec};
use crate::error::Result;
use crate::numerics::{Poly, Precision, Real};

/// `V = x²` with `s = α x²/2`. `α = 1` gives the exact Gaussian envelope.
pub fn harmonic(alpha: &str, prec: Precision) -> Result<ProblemSpec> {
    let potential = Poly::parse(&["0", "0", "1"], prec)?;
    let ansatz =
        AnsatzExponent::from_alpha_beta(&Real::parse(alpha, prec)?, &Real::zero(prec))?;
    ProblemSpec::new(potential, ansatz)
}

/// `V = x² + g x⁴` with `s = α x²/2 + β x⁴/4`.
pub fn quartic(g: &str, alpha: &str, beta: &str, prec: Precision) -> Result<ProblemSpec> {
    let potential = Poly::parse(&["0", "0", "1", "0", g], prec)?;
    let ansatz =
        AnsatzExponent::from_alpha_beta(&Real::parse(alpha, prec)?, &Real::parse(beta, prec)?)?;
    ProblemSpec::new(potential, ansatz)
}

/// `V = x⁶ - 2x⁴ - 2x² + 1` with `s = α x²/2 + β x⁴/4`, solved as
/// `-ψ'' + V ψ = κ E ψ`. The double-well energies usually quoted for this
/// potential correspond to `κ = 2`; its ground state is then exactly `E = 0`.
pub fn sextic_double_well(
    alpha: &str,
    beta: &str,
    energy_scale: &str,
    prec: Precision,
) -> Result<ProblemSpec> {
    let potential = Poly::parse(&["1", "0", "-2", "0", "-2", "0", "1"], prec)?;
    let ansatz =
        AnsatzExponent::from_alpha_beta(&Real::parse(alpha, prec)?, &Real::parse(beta, prec)?)?;
    ProblemSpec::new(potential, ansatz)?.with_energy_scale(Real::parse(energy_scale, prec)?)
}
