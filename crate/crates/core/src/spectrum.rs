//! Eigenvalue search: grid scan for sign changes of a quantization function,
//! bisection, and cross-`m` tracking of each root.
//!
//! Iteration numbers `m` in a [`ScanConfig`] schedule are truncation orders
//! of the Taylor series of `f`: at iteration `m` a channel is quantized on the
//! highest-order coefficient of its series that does not exceed `x^m`. For
//! the even channel that is `q_{m-2}(0)`, for the odd channel `p_{m-3}(0)`
//! (`m` even), and the general determinant is taken at depth `m - 2`.
//! [`Channel::depth_for`] performs the translation; the lower-level
//! [`scan_brackets`] and [`refine_root`] take recurrence depths directly.

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::engine::{
    derive_seed, parity_quantization, quantization_determinant, run_recurrence, Parity,
    ProblemSpec, RecurrenceTrace, SeedPair,
};
use crate::error::{Error, Result};
use crate::numerics::{Precision, Real};

/// A single quantization function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    Determinant,
    Even,
    Odd,
}

impl Channel {
    pub fn parity(self) -> Option<Parity> {
        match self {
            Channel::Determinant => None,
            Channel::Even => Some(Parity::Even),
            Channel::Odd => Some(Parity::Odd),
        }
    }

    /// Recurrence depth used at iteration number `m`, or `None` when `m` is
    /// too small for this channel (every channel needs `m >= 4`).
    pub fn depth_for(self, m: usize) -> Option<usize> {
        let depth = match self {
            Channel::Determinant => m.checked_sub(2)?,
            Channel::Even => (m - m % 2).checked_sub(2)?,
            // highest odd power k <= m carries p_{k-2}; parity depth is k - 1
            Channel::Odd => (if m % 2 == 1 { m } else { m.checked_sub(1)? }).checked_sub(1)?,
        };
        (depth >= 2).then_some(depth)
    }

    /// Evaluates the channel's quantization function on a trace.
    pub fn evaluate(self, trace: &RecurrenceTrace, depth: usize) -> Result<Real> {
        match self {
            Channel::Determinant => quantization_determinant(trace, depth),
            Channel::Even => parity_quantization(trace, Parity::Even, depth),
            Channel::Odd => parity_quantization(trace, Parity::Odd, depth),
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Determinant => "determinant",
            Channel::Even => "parity-even",
            Channel::Odd => "parity-odd",
        })
    }
}

/// Which channels a spectrum search uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChannelChoice {
    /// Both parity channels for symmetric problems, the determinant otherwise.
    #[default]
    Auto,
    Determinant,
    Even,
    Odd,
}

impl ChannelChoice {
    pub fn resolve(self, symmetric: bool) -> Result<Vec<Channel>> {
        match (self, symmetric) {
            (ChannelChoice::Auto, true) => Ok(vec![Channel::Even, Channel::Odd]),
            (ChannelChoice::Auto, false) | (ChannelChoice::Determinant, _) => {
                Ok(vec![Channel::Determinant])
            }
            (ChannelChoice::Even, true) => Ok(vec![Channel::Even]),
            (ChannelChoice::Odd, true) => Ok(vec![Channel::Odd]),
            (ChannelChoice::Even | ChannelChoice::Odd, false) => Err(Error::NotSymmetric),
        }
    }
}

/// Pairing tolerance for the same root at consecutive iteration numbers:
/// `max(relative * |E|, absolute)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchWindow {
    pub relative: f64,
    pub absolute: f64,
}

impl Default for MatchWindow {
    fn default() -> Self {
        MatchWindow {
            relative: 1e-3,
            absolute: 1e-6,
        }
    }
}

impl MatchWindow {
    pub fn width(&self, energy: f64) -> f64 {
        (self.relative * energy.abs()).max(self.absolute)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanConfig {
    pub e_min: Real,
    pub e_max: Real,
    pub grid_points: usize,
    /// Ascending iteration numbers (truncation orders), at least two.
    pub m_schedule: Vec<usize>,
    pub target_digits: u32,
    pub channel: ChannelChoice,
    pub window: MatchWindow,
    /// Bisection stops once the bracket is narrower than this. Defaults to
    /// `10^-(target_digits + 10)`, floored at the working resolution.
    pub root_tol: Option<Real>,
    /// Grid halvings attempted when the last two iteration numbers disagree.
    pub max_refinements: u32,
}

impl ScanConfig {
    pub const DEFAULT_GRID_POINTS: usize = 512;
    pub const DEFAULT_TARGET_DIGITS: u32 = 10;
    pub const DEFAULT_MAX_REFINEMENTS: u32 = 3;

    pub fn new(e_min: Real, e_max: Real, m_schedule: Vec<usize>) -> Self {
        ScanConfig {
            e_min,
            e_max,
            grid_points: Self::DEFAULT_GRID_POINTS,
            m_schedule,
            target_digits: Self::DEFAULT_TARGET_DIGITS,
            channel: ChannelChoice::Auto,
            window: MatchWindow::default(),
            root_tol: None,
            max_refinements: Self::DEFAULT_MAX_REFINEMENTS,
        }
    }

    /// Scan from the potential minimum (the lowest possible eigenvalue) up to `e_max`.
    pub fn for_problem(problem: &ProblemSpec, e_max: Real, m_schedule: Vec<usize>) -> Result<Self> {
        let floor = problem.potential_minimum();
        let e_min = Real::from_f64(floor, problem.precision())?;
        Ok(Self::new(e_min, e_max, m_schedule))
    }

    pub fn validate(&self, prec: Precision, channels: &[Channel]) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.e_min >= self.e_max {
            return bad(format!("e_min ({}) must be below e_max ({})", self.e_min, self.e_max));
        }
        if self.grid_points < 16 {
            return bad(format!("grid_points must be at least 16, got {}", self.grid_points));
        }
        if self.m_schedule.len() < 2 {
            return bad("m_schedule needs at least two iteration numbers".into());
        }
        if self.m_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("m_schedule must be strictly ascending: {:?}", self.m_schedule));
        }
        for &m in &self.m_schedule {
            for &c in channels {
                if c.depth_for(m).is_none() {
                    return bad(format!("iteration number {m} too small for the {c} channel"));
                }
            }
        }
        if self.target_digits < 1 || self.target_digits > prec.decimal_digits() {
            return bad(format!(
                "target_digits must be in 1..={}, got {}",
                prec.decimal_digits(),
                self.target_digits
            ));
        }
        let w = self.window;
        if !(w.relative.is_finite() && w.absolute.is_finite() && w.relative > 0.0 && w.absolute > 0.0) {
            return bad("match window must be positive".into());
        }
        if let Some(t) = &self.root_tol {
            if !t.is_positive() {
                return bad("root_tol must be positive".into());
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, prec: Precision) -> Real {
        let requested = self.root_tol.clone().unwrap_or_else(|| {
            Real::from_i64(10, prec).powi(-((self.target_digits + 10) as i32))
        });
        let span = self.e_max.abs().max(&self.e_min.abs()).max(&Real::one(prec)).clone();
        let floor = &span * &Real::from_i64(2, prec).powi(-(prec.bits() as i32 - 8));
        if requested < floor {
            floor
        } else {
            requested
        }
    }
}

/// One eigenvalue surviving the cross-`m` comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueRecord {
    /// Position within the listing (merged over both parity channels in auto mode).
    pub index: usize,
    pub parity: Option<Parity>,
    pub energy: Real,
    /// Final bisection bracket, `lo < energy < hi`.
    pub bracket: (Real, Real),
    pub m_used: usize,
    pub stable_digits: u32,
    pub converged: bool,
    /// The same root tracked back through the schedule, ascending `m`.
    pub history: Vec<(usize, Real)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanStats {
    pub evaluations: u64,
    pub renormalizations: u64,
    pub grid_refinements: u32,
    pub grid_points: usize,
    pub spurious_dropped: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub records: Vec<EigenvalueRecord>,
    pub stats: ScanStats,
}

/// Number of leading significant digits shared by `a` and `b`:
/// `floor(-log10(|a - b| / max(|a|, 1)))`, clamped to `0..=cap`.
pub fn significant_digits(a: &Real, b: &Real, cap: u32) -> u32 {
    let diff = (a - b).abs();
    if diff.is_zero() {
        return cap;
    }
    let scale = a.abs().max(&Real::one(a.prec())).clone();
    let d = -(&diff / &scale).log10().to_f64();
    if d <= 0.0 {
        0
    } else {
        (d.floor() as u32).min(cap)
    }
}

#[derive(Default)]
struct Counters {
    evaluations: AtomicU64,
    renormalizations: AtomicU64,
}

impl Counters {
    fn record(&self, trace: &RecurrenceTrace) {
        self.evaluations.fetch_add(1, AtomicOrdering::Relaxed);
        self.renormalizations
            .fetch_add(trace.renorm_log().len() as u64, AtomicOrdering::Relaxed);
    }
}

fn trace_at(seed: &SeedPair, energy: &Real, depth: usize, counters: &Counters) -> Result<RecurrenceTrace> {
    let trace = run_recurrence(seed, energy, depth, false)?;
    counters.record(&trace);
    Ok(trace)
}

fn channel_sign(seed: &SeedPair, channel: Channel, energy: &Real, depth: usize, counters: &Counters) -> Result<Ordering> {
    let trace = trace_at(seed, energy, depth, counters)?;
    Ok(channel.evaluate(&trace, depth)?.sign())
}

fn grid(e_min: &Real, e_max: &Real, points: usize) -> Vec<Real> {
    let n = (points - 1) as i64;
    let prec = e_min.prec().max(e_max.prec());
    (0..points as i64)
        .map(|i| {
            let a = e_min * &Real::from_i64(n - i, prec);
            let b = e_max * &Real::from_i64(i, prec);
            &(&a + &b) / &Real::from_i64(n, prec)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GridBracket {
    /// Sign change between grid points `i` and `i + 1`.
    Crossing(usize),
    /// Exact zero at grid point `i`.
    Zero(usize),
}

fn find_brackets(signs: &[Ordering]) -> Vec<GridBracket> {
    let mut out = Vec::new();
    for (i, s) in signs.iter().enumerate() {
        if *s == Ordering::Equal {
            out.push(GridBracket::Zero(i));
        } else if let Some(next) = signs.get(i + 1) {
            if *next != Ordering::Equal && next != s {
                out.push(GridBracket::Crossing(i));
            }
        }
    }
    out
}

/// Sign-change brackets of `channel` at recurrence depth `depth` over the
/// uniform energy grid of `config`. An exact zero at a grid point is returned
/// as the degenerate bracket `(E, E)`.
pub fn scan_brackets(
    seed: &SeedPair,
    channel: Channel,
    config: &ScanConfig,
    depth: usize,
) -> Result<Vec<(Real, Real)>> {
    let energies = grid(&config.e_min, &config.e_max, config.grid_points);
    let counters = Counters::default();
    let signs = energies
        .par_iter()
        .map(|e| channel_sign(seed, channel, e, depth, &counters))
        .collect::<Result<Vec<_>>>()?;
    Ok(find_brackets(&signs)
        .into_iter()
        .map(|b| match b {
            GridBracket::Crossing(i) => (energies[i].clone(), energies[i + 1].clone()),
            GridBracket::Zero(i) => (energies[i].clone(), energies[i].clone()),
        })
        .collect())
}

struct Bisection {
    energy: Real,
    lo: Real,
    hi: Real,
}

fn bisect(
    seed: &SeedPair,
    channel: Channel,
    lo: &Real,
    hi: &Real,
    depth: usize,
    tol: &Real,
    counters: &Counters,
) -> Result<Bisection> {
    let (mut lo, mut hi) = if lo <= hi { (lo.clone(), hi.clone()) } else { (hi.clone(), lo.clone()) };
    let s_lo = channel_sign(seed, channel, &lo, depth, counters)?;
    let s_hi = channel_sign(seed, channel, &hi, depth, counters)?;
    if s_lo == Ordering::Equal || s_hi == Ordering::Equal {
        let energy = if s_lo == Ordering::Equal { lo.clone() } else { hi.clone() };
        return Ok(Bisection { energy, lo, hi });
    }
    if s_lo == s_hi {
        return Err(Error::NoSignChange {
            lo: lo.to_decimal(20),
            hi: hi.to_decimal(20),
        });
    }
    let two = Real::from_i64(2, lo.prec());
    while &hi - &lo >= *tol {
        let mid = &(&lo + &hi) / &two;
        if mid <= lo || mid >= hi {
            break;
        }
        match channel_sign(seed, channel, &mid, depth, counters)? {
            Ordering::Equal => return Ok(Bisection { energy: mid, lo, hi }),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    let energy = &(&lo + &hi) / &two;
    Ok(Bisection { energy, lo, hi })
}

/// Bisects a sign-change bracket of `channel` at recurrence depth `depth`
/// until it is narrower than `tol`, returning the midpoint.
pub fn refine_root(
    seed: &SeedPair,
    bracket: (&Real, &Real),
    depth: usize,
    channel: Channel,
    tol: &Real,
) -> Result<Real> {
    let counters = Counters::default();
    bisect(seed, channel, bracket.0, bracket.1, depth, tol, &counters).map(|b| b.energy)
}

#[derive(Clone, Debug)]
struct RootSample {
    energy: Real,
    lo: Real,
    hi: Real,
}

struct ChannelRoots {
    channel: Channel,
    /// Per schedule entry, roots sorted by energy.
    per_m: Vec<Vec<RootSample>>,
}

struct Tracked {
    channel: Channel,
    sample: RootSample,
    history: Vec<(usize, Real)>,
}

enum Matched {
    Ok { roots: Vec<Tracked>, spurious: usize },
    Mismatch { count_prev: usize, count_last: usize },
}

/// Greedy nearest-energy pairing of `cur` against `prev`: `partner[i]` is
/// the index in `prev` matched to `cur[i]`.
fn pair_roots(prev: &[RootSample], cur: &[RootSample], window: &MatchWindow) -> Vec<Option<usize>> {
    let prev_f: Vec<f64> = prev.iter().map(|r| r.energy.to_f64()).collect();
    let mut candidates = Vec::new();
    for (i, c) in cur.iter().enumerate() {
        let e = c.energy.to_f64();
        let w = window.width(e);
        for (j, &p) in prev_f.iter().enumerate() {
            let d = (e - p).abs();
            if d <= w {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut partner = vec![None; cur.len()];
    let mut used = vec![false; prev.len()];
    for (_, i, j) in candidates {
        if partner[i].is_none() && !used[j] {
            partner[i] = Some(j);
            used[j] = true;
        }
    }
    partner
}

fn track(roots: &ChannelRoots, schedule: &[usize], window: &MatchWindow) -> Matched {
    let k_last = roots.per_m.len() - 1;
    // partners[k][i]: index into per_m[k - 1] paired with per_m[k][i]
    let partners: Vec<Vec<Option<usize>>> = (1..=k_last)
        .map(|k| pair_roots(&roots.per_m[k - 1], &roots.per_m[k], window))
        .collect();

    let last = &roots.per_m[k_last];
    let prev = &roots.per_m[k_last - 1];
    let last_partner = &partners[k_last - 1];

    let top = last
        .iter()
        .zip(last_partner)
        .filter(|(_, p)| p.is_some())
        .map(|(r, _)| r.energy.to_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    let stray_last = last
        .iter()
        .zip(last_partner)
        .filter(|(r, p)| p.is_none() && r.energy.to_f64() < top)
        .count();
    if stray_last > 0 {
        let count_last = last.iter().filter(|r| r.energy.to_f64() <= top).count();
        let count_prev = prev
            .iter()
            .filter(|r| r.energy.to_f64() <= top + window.width(top))
            .count();
        return Matched::Mismatch {
            count_prev,
            count_last,
        };
    }

    let mut spurious = 0;
    for k in 0..k_last {
        let paired: usize = partners[k].iter().filter(|p| p.is_some()).count();
        spurious += roots.per_m[k].len() - paired;
    }
    spurious += last_partner.iter().filter(|p| p.is_none()).count();

    let mut tracked = Vec::new();
    for (i, sample) in last.iter().enumerate() {
        if last_partner[i].is_none() {
            continue;
        }
        let mut history = vec![(schedule[k_last], sample.energy.clone())];
        let mut idx = i;
        let mut k = k_last;
        while k > 0 {
            match partners[k - 1][idx] {
                Some(j) => {
                    idx = j;
                    k -= 1;
                    history.push((schedule[k], roots.per_m[k][idx].energy.clone()));
                }
                None => break,
            }
        }
        history.reverse();
        tracked.push(Tracked {
            channel: roots.channel,
            sample: sample.clone(),
            history,
        });
    }
    Matched::Ok {
        roots: tracked,
        spurious,
    }
}

fn solve_channels(
    seed: &SeedPair,
    channels: &[Channel],
    config: &ScanConfig,
    grid_points: usize,
    tol: &Real,
    counters: &Counters,
) -> Result<Vec<ChannelRoots>> {
    let energies = grid(&config.e_min, &config.e_max, grid_points);
    let depths: Vec<Vec<usize>> = channels
        .iter()
        .map(|c| config.m_schedule.iter().map(|&m| c.depth_for(m).expect("validated")).collect())
        .collect();
    let max_depth = depths.iter().flatten().copied().max().expect("non-empty schedule");

    // One trace per grid point serves every channel and iteration number.
    let signs: Vec<Vec<Vec<Ordering>>> = energies
        .par_iter()
        .map(|e| {
            let trace = trace_at(seed, e, max_depth, counters)?;
            channels
                .iter()
                .zip(&depths)
                .map(|(c, ds)| ds.iter().map(|&d| Ok(c.evaluate(&trace, d)?.sign())).collect())
                .collect::<Result<Vec<Vec<_>>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let last = energies.len() - 1;
    let mut out = Vec::with_capacity(channels.len());
    for (ci, &channel) in channels.iter().enumerate() {
        let mut per_m = Vec::with_capacity(config.m_schedule.len());
        for (k, &depth) in depths[ci].iter().enumerate() {
            let column: Vec<Ordering> = signs.iter().map(|s| s[ci][k]).collect();
            let brackets: Vec<(usize, usize)> = find_brackets(&column)
                .into_iter()
                .map(|b| match b {
                    GridBracket::Crossing(i) => (i, i + 1),
                    GridBracket::Zero(i) => (i.saturating_sub(1), (i + 1).min(last)),
                })
                .collect();
            let mut roots = brackets
                .par_iter()
                .map(|&(i, j)| {
                    let b = bisect(seed, channel, &energies[i], &energies[j], depth, tol, counters)?;
                    Ok(RootSample {
                        energy: b.energy,
                        lo: b.lo,
                        hi: b.hi,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            roots.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap_or(Ordering::Equal));
            roots.dedup_by(|a, b| a.energy == b.energy);
            per_m.push(roots);
        }
        out.push(ChannelRoots { channel, per_m });
    }
    Ok(out)
}

/// Scans, refines and cross-checks eigenvalues over the whole iteration
/// schedule. Roots are paired between consecutive iteration numbers by
/// nearest energy within the match window; a root that fails to reappear at
/// the next iteration number is dropped as spurious, as is any root at the
/// final one without a partner at the one before. An unpaired root at the
/// final iteration number below the highest paired one means the two
/// disagree on the count; the grid spacing is then halved and the scan
/// repeated, up to `max_refinements` times.
pub fn converge_spectrum(problem: &ProblemSpec, config: &ScanConfig) -> Result<Spectrum> {
    let seed = derive_seed(problem)?;
    let channels = config.channel.resolve(problem.is_symmetric())?;
    let prec = problem.precision();
    config.validate(prec, &channels)?;
    let tol = config.tolerance(prec);
    let cap = prec.decimal_digits();
    let counters = Counters::default();

    let mut refinement = 0;
    loop {
        let grid_points = (config.grid_points - 1) * (1 << refinement) + 1;
        let solved = solve_channels(&seed, &channels, config, grid_points, &tol, &counters)?;

        let mut tracked = Vec::new();
        let mut spurious_total = 0;
        let mut mismatch = None;
        for roots in &solved {
            match track(roots, &config.m_schedule, &config.window) {
                Matched::Ok { roots, spurious } => {
                    spurious_total += spurious;
                    tracked.extend(roots);
                }
                Matched::Mismatch {
                    count_prev,
                    count_last,
                } => {
                    mismatch = Some((count_prev, count_last));
                    break;
                }
            }
        }

        if let Some((count_prev, count_last)) = mismatch {
            if refinement < config.max_refinements {
                log::info!(
                    "root counts disagree ({count_prev} vs {count_last}); refining grid to {} points",
                    (config.grid_points - 1) * (1 << (refinement + 1)) + 1
                );
                refinement += 1;
                continue;
            }
            let n = config.m_schedule.len();
            return Err(Error::RootCountMismatch {
                m_prev: config.m_schedule[n - 2],
                count_prev,
                m_last: config.m_schedule[n - 1],
                count_last,
                refinements: refinement,
            });
        }

        tracked.sort_by(|a, b| {
            a.sample
                .energy
                .partial_cmp(&b.sample.energy)
                .unwrap_or(Ordering::Equal)
        });
        let records = tracked
            .into_iter()
            .enumerate()
            .map(|(index, t)| {
                let n = t.history.len();
                let stable_digits = significant_digits(&t.history[n - 1].1, &t.history[n - 2].1, cap);
                EigenvalueRecord {
                    index,
                    parity: t.channel.parity(),
                    energy: t.sample.energy,
                    bracket: (t.sample.lo, t.sample.hi),
                    m_used: *config.m_schedule.last().expect("validated"),
                    stable_digits,
                    converged: stable_digits >= config.target_digits,
                    history: t.history,
                }
            })
            .collect();

        return Ok(Spectrum {
            records,
            stats: ScanStats {
                evaluations: counters.evaluations.load(AtomicOrdering::Relaxed),
                renormalizations: counters.renormalizations.load(AtomicOrdering::Relaxed),
                grid_refinements: refinement,
                grid_points,
                spurious_dropped: spurious_total,
            },
        });
    }
}
