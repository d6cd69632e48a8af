//! Ready-made jobs, including the ones behind each reference table.

use crate::reference::TableId;
use crate::spec::{ChannelDef, JobSpec, Output, ProblemDef, ScanDef, WavefunctionDef, WindowDef};

#[derive(Clone, Debug)]
pub struct Preset {
    pub name: String,
    pub description: String,
    /// Reference table and group this job reproduces.
    pub table: Option<(TableId, &'static str)>,
    pub job: JobSpec,
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn plot(states: usize, half_width: &str) -> WavefunctionDef {
    WavefunctionDef {
        states: (0..states).collect(),
        truncation_order: 17,
        x_min: format!("-{half_width}"),
        x_max: half_width.to_string(),
        points: 401,
        plot_truncation: None,
        quad_tol: "1e-30".into(),
    }
}

fn quartic_potential(g: &str) -> Vec<String> {
    strings(&["0", "0", "1", "0", g])
}

pub fn harmonic() -> Preset {
    Preset {
        name: "harmonic".into(),
        description: "V = x², s = x²/2: exact levels 2n + 1".into(),
        table: None,
        job: JobSpec {
            problem: ProblemDef {
                potential: strings(&["0", "0", "1"]),
                alpha: Some("1".into()),
                beta: None,
                ansatz: None,
                energy_scale: None,
                symmetric: None,
            },
            scan: ScanDef {
                e_min: Some("0".into()),
                e_max: "16".into(),
                m_schedule: vec![20, 40, 60],
                grid_points: None,
                target_digits: Some(20),
                channel: ChannelDef::Auto,
                window: None,
                root_tol: None,
                max_refinements: None,
            },
            outputs: vec![Output::Spectrum, Output::Wavefunctions, Output::Plotdata],
            precision_bits: Some(256),
            output_dir: None,
            wavefunctions: Some(plot(6, "5")),
        },
    }
}

/// Upper scan limit for each coupling, just above the fourth level.
const QUARTIC_RANGES: [(&str, &str); 7] = [
    ("0.01", "8.2"),
    ("0.05", "9"),
    ("0.1", "9.7"),
    ("0.5", "13"),
    ("1", "15.5"),
    ("10", "30"),
    ("100", "65"),
];

pub fn quartic(g: &'static str) -> Option<Preset> {
    let (_, e_max) = QUARTIC_RANGES.iter().find(|(k, _)| *k == g)?;
    // strong coupling converges more slowly in m, so roots move further
    let window = matches!(g, "10" | "100").then_some(WindowDef {
        relative: 1e-2,
        absolute: 1e-6,
    });
    Some(Preset {
        name: format!("quartic-g{g}"),
        description: format!("V = x² + {g} x⁴, alpha = 4, first four levels at m = 120"),
        table: Some((TableId::T1, g)),
        job: JobSpec {
            problem: ProblemDef {
                potential: quartic_potential(g),
                alpha: Some("4".into()),
                beta: Some("0".into()),
                ansatz: None,
                energy_scale: None,
                symmetric: None,
            },
            scan: ScanDef {
                e_min: Some("0".into()),
                e_max: e_max.to_string(),
                m_schedule: vec![80, 100, 120],
                grid_points: None,
                target_digits: Some(7),
                channel: ChannelDef::Auto,
                window,
                root_tol: None,
                max_refinements: None,
            },
            outputs: vec![Output::Spectrum, Output::TableCheck],
            precision_bits: Some(256),
            output_dir: None,
            wavefunctions: None,
        },
    })
}

pub fn quartic_ten() -> Preset {
    Preset {
        name: "quartic-ten".into(),
        description: "V = x² + 0.1 x⁴, alpha = 4, first ten levels to 15+ digits at m = 120".into(),
        table: Some((TableId::T2, "0.1")),
        job: JobSpec {
            problem: ProblemDef {
                potential: quartic_potential("0.1"),
                alpha: Some("4".into()),
                beta: Some("0".into()),
                ansatz: None,
                energy_scale: None,
                symmetric: None,
            },
            scan: ScanDef {
                e_min: Some("0".into()),
                e_max: "28".into(),
                m_schedule: vec![30, 40, 60, 80, 100, 120],
                grid_points: None,
                target_digits: Some(15),
                channel: ChannelDef::Auto,
                window: None,
                root_tol: None,
                max_refinements: None,
            },
            outputs: vec![Output::Spectrum, Output::Wavefunctions, Output::Plotdata, Output::TableCheck],
            precision_bits: Some(256),
            output_dir: None,
            wavefunctions: Some(plot(6, "4")),
        },
    }
}

pub fn sextic() -> Preset {
    Preset {
        name: "sextic".into(),
        description: "V = x⁶ - 2x⁴ - 2x² + 1 with -ψ'' + V ψ = 2Eψ, alpha = 4, beta = 1, ten levels".into(),
        table: Some((TableId::T3, "")),
        job: JobSpec {
            problem: ProblemDef {
                potential: strings(&["1", "0", "-2", "0", "-2", "0", "1"]),
                alpha: Some("4".into()),
                beta: Some("1".into()),
                ansatz: None,
                energy_scale: Some("2".into()),
                symmetric: None,
            },
            scan: ScanDef {
                e_min: Some("-0.5".into()),
                e_max: "28".into(),
                m_schedule: vec![80, 100, 120],
                grid_points: None,
                target_digits: Some(7),
                channel: ChannelDef::Auto,
                window: Some(WindowDef {
                    relative: 1e-2,
                    absolute: 1e-6,
                }),
                root_tol: None,
                max_refinements: None,
            },
            outputs: vec![Output::Spectrum, Output::Wavefunctions, Output::Plotdata, Output::TableCheck],
            precision_bits: Some(256),
            output_dir: None,
            wavefunctions: Some(plot(6, "2.5")),
        },
    }
}

pub fn all() -> Vec<Preset> {
    let mut out = vec![harmonic()];
    out.extend(QUARTIC_RANGES.iter().filter_map(|(g, _)| quartic(g)));
    out.push(quartic_ten());
    out.push(sextic());
    out
}

pub fn find(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}

pub fn for_table(id: TableId) -> Vec<Preset> {
    all().into_iter().filter(|p| p.table.is_some_and(|(t, _)| t == id)).collect()
}
