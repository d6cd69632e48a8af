//! Fixtures shared by the benchmarks.

use atem_core::{derive_seed, problems, Precision, ProblemSpec, Real, SeedPair};

pub fn quartic(bits: u32) -> ProblemSpec {
    problems::quartic("0.1", "4", "0", Precision::new(bits).unwrap()).unwrap()
}

pub fn sextic(bits: u32) -> ProblemSpec {
    problems::sextic_double_well("4", "1", "2", Precision::new(bits).unwrap()).unwrap()
}

pub fn seed_and_energy(problem: &ProblemSpec, energy: &str) -> (SeedPair, Real) {
    let seed = derive_seed(problem).unwrap();
    let e = Real::parse(energy, problem.precision()).unwrap();
    (seed, e)
}
