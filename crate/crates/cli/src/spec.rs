//! JSON job description. Every number that reaches the solver is a decimal
//! string so nothing is lost to binary floating point on the way in.

use std::path::PathBuf;

use atem_core::{
    AnsatzExponent, ChannelChoice, MatchWindow, Poly, Precision, ProblemSpec, Real, ScanConfig,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDef {
    /// Coefficients of `V(x)`, constant term first.
    pub potential: Vec<String>,
    /// `s(x) = alpha x²/2 + beta x⁴/4`. Mutually exclusive with `ansatz`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    /// Explicit coefficients of `s(x)`, constant term first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ansatz: Option<Vec<String>>,
    /// `κ` in `-ψ'' + V ψ = κ E ψ`; 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_scale: Option<String>,
    /// Overrides the symmetry detected from the potential.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelDef {
    #[default]
    Auto,
    Determinant,
    Even,
    Odd,
}

impl From<ChannelDef> for ChannelChoice {
    fn from(c: ChannelDef) -> Self {
        match c {
            ChannelDef::Auto => ChannelChoice::Auto,
            ChannelDef::Determinant => ChannelChoice::Determinant,
            ChannelDef::Even => ChannelChoice::Even,
            ChannelDef::Odd => ChannelChoice::Odd,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowDef {
    pub relative: f64,
    pub absolute: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanDef {
    /// Defaults to the minimum of the potential.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_min: Option<String>,
    pub e_max: String,
    pub m_schedule: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_digits: Option<u32>,
    #[serde(default)]
    pub channel: ChannelDef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_tol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_refinements: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Output {
    Spectrum,
    Wavefunctions,
    Plotdata,
    TableCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavefunctionDef {
    /// Indices into the merged spectrum.
    pub states: Vec<usize>,
    /// Highest power kept in the exported `f(x)` coefficients.
    #[serde(default = "default_truncation")]
    pub truncation_order: usize,
    pub x_min: String,
    pub x_max: String,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Highest power used for sampled `ψ(x)`; the iteration number when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot_truncation: Option<usize>,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: String,
}

fn default_truncation() -> usize {
    17
}

fn default_points() -> usize {
    401
}

fn default_quad_tol() -> String {
    "1e-30".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub problem: ProblemDef,
    pub scan: ScanDef,
    pub outputs: Vec<Output>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavefunctions: Option<WavefunctionDef>,
}

fn real(s: &str, prec: Precision, what: &str) -> CliResult<Real> {
    Real::parse(s, prec).map_err(|_| CliError::Schema(format!("{what}: not a decimal number: {s:?}")))
}

fn poly(coeffs: &[String], prec: Precision, what: &str) -> CliResult<Poly> {
    let parsed = coeffs
        .iter()
        .map(|c| real(c, prec, what))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Poly::from_coeffs(parsed, prec))
}

impl JobSpec {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema(format!("{}: {}", e.path(), e.inner())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job spec serializes")
    }

    pub fn has(&self, out: Output) -> bool {
        self.outputs.contains(&out)
    }

    pub fn problem(&self, prec: Precision) -> CliResult<ProblemSpec> {
        let p = &self.problem;
        let potential = poly(&p.potential, prec, "problem.potential")?;
        let ansatz = match (&p.alpha, &p.ansatz) {
            (Some(alpha), None) => {
                let beta = p.beta.as_deref().unwrap_or("0");
                AnsatzExponent::from_alpha_beta(
                    &real(alpha, prec, "problem.alpha")?,
                    &real(beta, prec, "problem.beta")?,
                )?
            }
            (None, Some(s)) if p.beta.is_none() => AnsatzExponent::new(poly(s, prec, "problem.ansatz")?)?,
            _ => {
                return Err(CliError::Schema(
                    "problem: give either alpha (with optional beta) or ansatz".into(),
                ))
            }
        };
        let mut spec = ProblemSpec::new(potential, ansatz)?;
        if let Some(k) = &p.energy_scale {
            spec = spec.with_energy_scale(real(k, prec, "problem.energy_scale")?)?;
        }
        if let Some(sym) = p.symmetric {
            spec = spec.with_symmetry(sym)?;
        }
        Ok(spec)
    }

    pub fn scan_config(&self, problem: &ProblemSpec) -> CliResult<ScanConfig> {
        let prec = problem.precision();
        let s = &self.scan;
        let e_max = real(&s.e_max, prec, "scan.e_max")?;
        let mut config = match &s.e_min {
            Some(lo) => ScanConfig::new(real(lo, prec, "scan.e_min")?, e_max, s.m_schedule.clone()),
            None => ScanConfig::for_problem(problem, e_max, s.m_schedule.clone())?,
        };
        if let Some(n) = s.grid_points {
            config.grid_points = n;
        }
        if let Some(d) = s.target_digits {
            config.target_digits = d;
        }
        config.channel = s.channel.into();
        if let Some(w) = s.window {
            config.window = MatchWindow {
                relative: w.relative,
                absolute: w.absolute,
            };
        }
        if let Some(t) = &s.root_tol {
            config.root_tol = Some(real(t, prec, "scan.root_tol")?);
        }
        if let Some(r) = s.max_refinements {
            config.max_refinements = r;
        }
        Ok(config)
    }

    /// Replaces the last iteration number with `m`, dropping schedule
    /// entries at or above it.
    pub fn set_final_m(&mut self, m: usize) {
        let mut schedule: Vec<usize> = self.scan.m_schedule.iter().copied().filter(|&k| k < m).collect();
        schedule.push(m);
        self.scan.m_schedule = schedule;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HARMONIC: &str = r#"{
        "problem": { "potential": ["0", "0", "1"], "alpha": "1" },
        "scan": { "e_min": "0", "e_max": "16", "m_schedule": [20, 40, 60] },
        "outputs": ["spectrum"]
    }"#;

    #[test]
    fn parses_minimal_spec() {
        let spec = JobSpec::from_json(HARMONIC).unwrap();
        assert_eq!(spec.scan.channel, ChannelDef::Auto);
        let problem = spec.problem(Precision::DEFAULT).unwrap();
        assert!(problem.is_symmetric());
        let config = spec.scan_config(&problem).unwrap();
        assert_eq!(config.grid_points, ScanConfig::DEFAULT_GRID_POINTS);
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = HARMONIC.replace("\"alpha\"", "\"alpah\"");
        assert!(matches!(JobSpec::from_json(&text), Err(CliError::Schema(_))));
        let text = HARMONIC.replace("\"outputs\"", "\"colour\": 1, \"outputs\"");
        assert!(matches!(JobSpec::from_json(&text), Err(CliError::Schema(_))));
    }

    #[test]
    fn rejects_negative_grid() {
        let text = HARMONIC.replace("\"m_schedule\"", "\"grid_points\": -4, \"m_schedule\"");
        assert!(matches!(JobSpec::from_json(&text), Err(CliError::Schema(_))));
    }

    #[test]
    fn round_trips_long_decimals() {
        let text = HARMONIC.replace("\"alpha\": \"1\"", "\"alpha\": \"1.00000000000000000000000000000000000000001\"");
        let spec = JobSpec::from_json(&text).unwrap();
        let again = JobSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, again);
        assert_eq!(again.problem.alpha.as_deref(), Some("1.00000000000000000000000000000000000000001"));
    }

    #[test]
    fn alpha_and_ansatz_are_exclusive() {
        let text = HARMONIC.replace("\"alpha\": \"1\"", "\"alpha\": \"1\", \"ansatz\": [\"0\", \"0\", \"0.5\"]");
        let spec = JobSpec::from_json(&text).unwrap();
        assert!(matches!(spec.problem(Precision::DEFAULT), Err(CliError::Schema(_))));
    }

    #[test]
    fn final_m_override() {
        let mut spec = JobSpec::from_json(HARMONIC).unwrap();
        spec.set_final_m(50);
        assert_eq!(spec.scan.m_schedule, vec![20, 40, 50]);
    }
}
