//! Runs a [`JobSpec`]: spectrum, wavefunctions, plot data and the optional
//! comparison with a reference table.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use atem_core::{
    build_series, converge_spectrum, count_sign_changes, normalize, sample, EigenvalueRecord, Parity,
    Precision, ProblemSpec, Real, ScanConfig, Spectrum, WavefunctionSeries,
};
use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::presets;
use crate::reference::{matching_digits, table, TableId};
use crate::spec::{JobSpec, Output};

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const DEFAULT_DIGITS: usize = 21;
pub const PRECISION_ENV: &str = "ATEM_PRECISION_BITS";

/// Settings from the command line that override the job file.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub precision_bits: Option<u32>,
    pub final_m: Option<usize>,
    pub output_dir: Option<PathBuf>,
    /// Significant digits in CSV output.
    pub digits: Option<usize>,
}

impl RunOptions {
    pub fn digits(&self) -> usize {
        self.digits.unwrap_or(DEFAULT_DIGITS)
    }
}

/// Precision from the environment, falling back to 256 bits.
pub fn default_precision_bits() -> CliResult<u32> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{PRECISION_ENV}={v:?} is not a bit count"))),
        Err(_) => Ok(DEFAULT_PRECISION_BITS),
    }
}

fn resolve_precision(spec: &JobSpec, opts: &RunOptions) -> CliResult<Precision> {
    let bits = match opts.precision_bits.or(spec.precision_bits) {
        Some(b) => b,
        None => default_precision_bits()?,
    };
    Ok(Precision::new(bits)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonEntry {
    pub group: String,
    pub state: usize,
    pub computed: Option<String>,
    pub reference: String,
    pub digits: u32,
    pub required: u32,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableComparison {
    pub table: TableId,
    pub entries: Vec<ComparisonEntry>,
}

impl TableComparison {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.pass).count()
    }
}

#[derive(Clone, Debug)]
pub struct StateExport {
    pub state: usize,
    pub record: EigenvalueRecord,
    pub series: WavefunctionSeries,
    pub samples: Vec<(Real, Real)>,
    pub nodes: usize,
}

#[derive(Debug)]
pub struct JobOutcome {
    pub problem: ProblemSpec,
    pub config: ScanConfig,
    pub spectrum: Spectrum,
    pub comparisons: Vec<TableComparison>,
    pub exports: Vec<StateExport>,
    pub report: serde_json::Value,
    pub files: Vec<PathBuf>,
}

fn parity_name(p: Option<Parity>) -> &'static str {
    match p {
        Some(Parity::Even) => "even",
        Some(Parity::Odd) => "odd",
        None => "generic",
    }
}

/// Compares the computed spectrum with one group of a reference table.
pub fn compare(spectrum: &Spectrum, id: TableId, group: &str, digits_cap: u32) -> Vec<ComparisonEntry> {
    let t = table(id);
    let tol = t.tolerance(group);
    t.atem()
        .filter(|r| r.group == group)
        .map(|row| {
            let computed = spectrum.records.get(row.state).map(|r| &r.energy);
            let prec = computed.map(|e| e.prec()).unwrap_or(Precision::DEFAULT);
            let reference = Real::parse(row.value, prec).expect("reference values parse");
            let (digits, pass) = match computed {
                None => (0, false),
                Some(e) if reference.is_zero() => {
                    let abs = e.abs().to_f64();
                    let d = if abs == 0.0 { digits_cap } else { (-abs.log10()).floor().max(0.0) as u32 };
                    (d.min(digits_cap), abs < tol.zero_abs)
                }
                Some(e) => {
                    let d = matching_digits(e, &reference, digits_cap);
                    (d, d >= tol.digits)
                }
            };
            ComparisonEntry {
                group: group.to_string(),
                state: row.state,
                computed: computed.map(|e| e.to_decimal(25)),
                reference: row.value.to_string(),
                digits,
                required: if reference.is_zero() { 0 } else { tol.digits },
                pass,
            }
        })
        .collect()
}

/// Reference groups whose potential and energy scale match the problem.
fn matching_references(problem: &ProblemSpec) -> CliResult<Vec<(TableId, &'static str)>> {
    let mut out = Vec::new();
    for preset in presets::all() {
        let Some(target) = preset.table else { continue };
        let candidate = preset.job.problem(problem.precision())?;
        if candidate.potential() == problem.potential() && candidate.energy_scale() == problem.energy_scale() {
            out.push(target);
        }
    }
    Ok(out)
}

fn export_state(
    problem: &ProblemSpec,
    spectrum: &Spectrum,
    spec: &JobSpec,
    state: usize,
) -> CliResult<StateExport> {
    let wf = spec
        .wavefunctions
        .as_ref()
        .ok_or_else(|| CliError::Schema("wavefunction outputs need a \"wavefunctions\" section".into()))?;
    let record = spectrum.records.get(state).ok_or(CliError::StateOutOfRange {
        state,
        available: spectrum.records.len(),
    })?;
    let prec = problem.precision();
    let parse = |s: &str, what: &str| {
        Real::parse(s, prec).map_err(|_| CliError::Schema(format!("wavefunctions.{what}: not a decimal number: {s:?}")))
    };
    let quad_tol = parse(&wf.quad_tol, "quad_tol")?;
    let (x_min, x_max) = (parse(&wf.x_min, "x_min")?, parse(&wf.x_max, "x_max")?);
    if wf.points < 2 || x_min >= x_max {
        return Err(CliError::Schema("wavefunctions: need x_min < x_max and at least two points".into()));
    }

    let plot_order = wf.plot_truncation.unwrap_or(record.m_used);
    let full = build_series(problem, &record.energy, record.m_used, plot_order, record.parity)?;
    let full = normalize(&full, &quad_tol)?;
    let samples = sample(&full, &x_min, &x_max, wf.points);
    let psi: Vec<f64> = samples.iter().map(|(_, y)| y.to_f64()).collect();
    let peak = psi.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let nodes = count_sign_changes(&psi, 1e-12 * peak);
    if nodes != state {
        log::warn!("state {state}: {nodes} sign changes in the plot window, expected {state}");
    }

    let series = build_series(problem, &record.energy, record.m_used, wf.truncation_order, record.parity)?;
    Ok(StateExport {
        state,
        record: record.clone(),
        series,
        samples,
        nodes,
    })
}

fn write_file(dir: &Path, name: &str, body: &str, files: &mut Vec<PathBuf>) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    files.push(path);
    Ok(())
}

pub fn spectrum_csv(spectrum: &Spectrum, digits: usize) -> String {
    let mut out = String::from("index,parity,energy,stable_digits,m_used,bracket_lo,bracket_hi\n");
    for r in &spectrum.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.index,
            parity_name(r.parity),
            r.energy.to_decimal(digits),
            r.stable_digits,
            r.m_used,
            r.bracket.0.to_decimal(digits),
            r.bracket.1.to_decimal(digits)
        );
    }
    out
}

pub fn samples_csv(samples: &[(Real, Real)], digits: usize) -> String {
    let mut out = String::from("x,psi\n");
    for (x, y) in samples {
        let _ = writeln!(out, "{},{}", x.to_decimal(digits), y.to_decimal(digits));
    }
    out
}

pub fn series_csv(series: &WavefunctionSeries, digits: usize) -> String {
    let mut out = String::from("power,coefficient\n");
    for (k, c) in series.f_coeffs().iter().enumerate() {
        let _ = writeln!(out, "{},{}", k, c.to_decimal(digits));
    }
    out
}

/// Runs the job and, when `write` is set, writes its artifacts.
pub fn run_job(spec: &JobSpec, opts: &RunOptions, write: bool) -> CliResult<JobOutcome> {
    let mut spec = spec.clone();
    if let Some(m) = opts.final_m {
        spec.set_final_m(m);
    }
    if (spec.has(Output::Wavefunctions) || spec.has(Output::Plotdata)) && spec.wavefunctions.is_none() {
        return Err(CliError::Schema("wavefunction outputs need a \"wavefunctions\" section".into()));
    }
    let prec = resolve_precision(&spec, opts)?;
    let problem = spec.problem(prec)?;
    let config = spec.scan_config(&problem)?;
    let digits = opts.digits();

    let started = Instant::now();
    let spectrum = converge_spectrum(&problem, &config)?;
    let spectrum_ms = started.elapsed().as_millis();
    log::info!(
        "{} eigenvalues in [{}, {}] after {} evaluations",
        spectrum.records.len(),
        config.e_min.to_decimal(8),
        config.e_max.to_decimal(8),
        spectrum.stats.evaluations
    );

    let mut comparisons = Vec::new();
    if spec.has(Output::TableCheck) {
        let targets = matching_references(&problem)?;
        if targets.is_empty() {
            return Err(CliError::Usage("table-check: no reference table for this potential".into()));
        }
        for (id, group) in targets {
            comparisons.push(TableComparison {
                table: id,
                entries: compare(&spectrum, id, group, 40),
            });
        }
    }

    let started = Instant::now();
    let mut exports = Vec::new();
    if spec.has(Output::Wavefunctions) || spec.has(Output::Plotdata) {
        let states = spec.wavefunctions.as_ref().map(|w| w.states.clone()).unwrap_or_default();
        for state in states {
            exports.push(export_state(&problem, &spectrum, &spec, state)?);
        }
    }
    let wavefunction_ms = started.elapsed().as_millis();

    let report = json!({
        "spec": &spec,
        "precision_bits": prec.bits(),
        "scan": {
            "e_min": config.e_min.to_decimal(digits),
            "e_max": config.e_max.to_decimal(digits),
            "m_schedule": &config.m_schedule,
            "grid_points": spectrum.stats.grid_points,
            "root_tolerance": config.tolerance(prec).to_decimal(6),
        },
        "stats": {
            "evaluations": spectrum.stats.evaluations,
            "renormalizations": spectrum.stats.renormalizations,
            "grid_refinements": spectrum.stats.grid_refinements,
            "spurious_roots_dropped": spectrum.stats.spurious_dropped,
        },
        "eigenvalues": spectrum.records.iter().map(|r| json!({
            "index": r.index,
            "parity": parity_name(r.parity),
            "energy": r.energy.to_decimal(digits),
            "stable_digits": r.stable_digits,
            "converged": r.converged,
            "m_used": r.m_used,
            "history": r.history.iter().map(|(m, e)| json!([m, e.to_decimal(digits)])).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "wavefunctions": exports.iter().map(|x| json!({
            "state": x.state,
            "energy": x.record.energy.to_decimal(digits),
            "sign_changes": x.nodes,
            "node_count_ok": x.nodes == x.state,
        })).collect::<Vec<_>>(),
        "table_check": &comparisons,
        "timings_ms": { "spectrum": spectrum_ms as u64, "wavefunctions": wavefunction_ms as u64 },
    });

    let mut files = Vec::new();
    if write {
        let dir = opts
            .output_dir
            .clone()
            .or_else(|| spec.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("atem-out"));
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        if spec.has(Output::Spectrum) {
            write_file(&dir, "spectrum.csv", &spectrum_csv(&spectrum, digits), &mut files)?;
        }
        for x in &exports {
            write_file(&dir, &format!("wavefunction_{}.csv", x.state), &samples_csv(&x.samples, digits), &mut files)?;
            if spec.has(Output::Wavefunctions) {
                write_file(&dir, &format!("series_{}.csv", x.state), &series_csv(&x.series, digits), &mut files)?;
            }
        }
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        write_file(&dir, "job_report.json", &(text + "\n"), &mut files)?;
    }

    Ok(JobOutcome {
        problem,
        config,
        spectrum,
        comparisons,
        exports,
        report,
        files,
    })
}

#[derive(Debug, Serialize)]
pub struct TableReport {
    pub table: TableId,
    pub entries: Vec<ComparisonEntry>,
    pub notes: Vec<String>,
}

impl TableReport {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.pass).count()
    }

    pub fn render(&self) -> String {
        let mut out = format!("table {}\n", self.table);
        let _ = writeln!(out, "{:>6} {:>5} {:>28} {:>24} {:>6} {:>4}", "group", "state", "computed", "reference", "digits", "ok");
        for e in &self.entries {
            let computed = match e.computed.as_deref() {
                Some(c) if c.contains('e') => c.to_string(),
                Some(c) => c.chars().take(26).collect(),
                None => "-".into(),
            };
            let _ = writeln!(
                out,
                "{:>6} {:>5} {:>28} {:>24} {:>6} {:>4}",
                e.group,
                e.state,
                computed,
                e.reference,
                e.digits,
                if e.pass { "yes" } else { "NO" }
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "{} of {} entries within tolerance", self.entries.len() - self.failures(), self.entries.len());
        out
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("group,state,computed,reference,digits,required,pass\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                e.group,
                e.state,
                e.computed.as_deref().unwrap_or(""),
                e.reference,
                e.digits,
                e.required,
                e.pass
            );
        }
        out
    }
}

/// Runs every preset behind a reference table and compares.
pub fn reproduce_table(id: TableId, opts: &RunOptions, write: bool) -> CliResult<(TableReport, Vec<JobOutcome>)> {
    let mut entries = Vec::new();
    let mut outcomes = Vec::new();
    for preset in presets::for_table(id) {
        let mut job = preset.job.clone();
        job.outputs = vec![Output::Spectrum, Output::TableCheck];
        let mut sub = opts.clone();
        sub.output_dir = opts.output_dir.as_ref().map(|d| d.join(&preset.name));
        log::info!("running preset {}", preset.name);
        let outcome = run_job(&job, &sub, write)?;
        for c in outcome.comparisons.iter().filter(|c| c.table == id) {
            entries.extend(c.entries.iter().cloned());
        }
        outcomes.push(outcome);
    }
    let report = TableReport {
        table: id,
        entries,
        notes: table(id).notes.iter().map(|s| s.to_string()).collect(),
    };
    if write {
        if let Some(dir) = &opts.output_dir {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            let mut files = Vec::new();
            write_file(dir, &format!("table_{id}.csv"), &report.csv(), &mut files)?;
        }
    }
    Ok((report, outcomes))
}
