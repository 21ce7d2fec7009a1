//! Curve and arc metrics on a fixed-boundary slice, and stretch paths.
//!
//! Both metrics are suprema of log length ratios over the slopes of
//! [`enumerate_slopes`]; `depth` controls the truncation. Partial stretch
//! paths are found variationally: along the twist family that stretches a
//! slope by `e^t` at fixed boundary, the structures at curve-metric distance
//! exactly `t` form an interval whose endpoints lie on the two extremal
//! stretch paths.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::torus::{
    arc_length_from_log_trace, from_fenchel_nielsen, from_fenchel_nielsen_in_basis,
    length_from_log_trace, log_slope_trace, log_trace_spectrum, FNCoords, Slope, TraceCoords,
};

/// Largest boundary-length mismatch accepted between compared structures.
pub const BOUNDARY_TOL: f64 = 1e-9;
pub const DEFAULT_DEPTH: u32 = 10;
/// Accuracy to which stretch-family members keep length and boundary.
pub const CONSTRAINT_TOL: f64 = 1e-9;
/// Two ratios closer than this are treated as tied.
pub const TIE_TOL: f64 = 1e-12;
/// Triangle-inequality slack of the axiom suite.
pub const TRIANGLE_SLACK: f64 = 1e-3;
/// Structures closer than this in Fenchel–Nielsen coordinates count as equal.
pub const DISTINCT_FN: f64 = 1e-3;

const SCAN_SAMPLES: usize = 64;
const GOLDEN_ITERS: usize = 80;
const BISECT_ITERS: usize = 60;

/// Log curve lengths (and log arc lengths, when the boundary is geodesic)
/// for every slope up to `depth`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    depth: u32,
    boundary: f64,
    slopes: Vec<Slope>,
    levels: Vec<u32>,
    log_curves: Vec<f64>,
    log_arcs: Option<Vec<f64>>,
}

impl Spectrum {
    pub fn new(h: &TraceCoords, depth: u32) -> Result<Self> {
        let boundary = h.boundary_length();
        let entries = log_trace_spectrum(h, depth);
        let mut slopes = Vec::with_capacity(entries.len());
        let mut levels = Vec::with_capacity(entries.len());
        let mut log_curves = Vec::with_capacity(entries.len());
        let mut arcs = Vec::with_capacity(entries.len());
        for e in &entries {
            slopes.push(e.slope);
            levels.push(e.level.unwrap_or(0));
            let len = length_from_log_trace(e.log_trace);
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::DegenerateStructure(e.log_trace));
            }
            log_curves.push(len.ln());
            if boundary > 0.0 {
                arcs.push(arc_length_from_log_trace(e.log_trace, boundary)?.ln());
            }
        }
        Ok(Self {
            depth,
            boundary,
            slopes,
            levels,
            log_curves,
            log_arcs: (boundary > 0.0).then_some(arcs),
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn boundary(&self) -> f64 {
        self.boundary
    }

    pub fn slopes(&self) -> &[Slope] {
        &self.slopes
    }

    pub fn curve_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.log_curves.iter().map(|l| l.exp())
    }

    pub fn log_curve_lengths(&self) -> &[f64] {
        &self.log_curves
    }

    pub fn log_arc_lengths(&self) -> Option<&[f64]> {
        self.log_arcs.as_deref()
    }
}

/// A truncated supremum with its maximizing slope and per-depth running
/// maxima.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricResult {
    pub value: f64,
    #[serde(serialize_with = "slope_pair")]
    pub argmax: Slope,
    pub depth: u32,
    pub history: Vec<f64>,
}

fn slope_pair<S: Serializer>(s: &Slope, ser: S) -> std::result::Result<S::Ok, S::Error> {
    [s.p(), s.q()].serialize(ser)
}

impl MetricResult {
    /// The supremal length ratio `exp(value)`.
    pub fn ratio(&self) -> f64 {
        self.value.exp()
    }
}

pub fn check_boundary(h0: &TraceCoords, h1: &TraceCoords) -> Result<()> {
    let (b0, b1) = (h0.boundary_length(), h1.boundary_length());
    if (b0 - b1).abs() > BOUNDARY_TOL {
        return Err(Error::BoundaryMismatch(b0, b1));
    }
    Ok(())
}

/// `log(ℓ₁(s) / ℓ₀(s))`.
pub fn curve_ratio(h0: &TraceCoords, h1: &TraceCoords, s: Slope) -> f64 {
    let l0 = length_from_log_trace(log_slope_trace(h0, s));
    let l1 = length_from_log_trace(log_slope_trace(h1, s));
    (l1 / l0).ln()
}

/// Log ratio of the arcs dual to `s`.
pub fn arc_ratio(h0: &TraceCoords, h1: &TraceCoords, s: Slope) -> Result<f64> {
    let a0 = arc_length_from_log_trace(log_slope_trace(h0, s), h0.boundary_length())?;
    let a1 = arc_length_from_log_trace(log_slope_trace(h1, s), h1.boundary_length())?;
    Ok((a1 / a0).ln())
}

/// Running supremum in enumeration order; exact ties go to the
/// lexicographically smaller slope.
struct SupTracker {
    best: f64,
    argmax: Option<Slope>,
    runner_up: f64,
    level: u32,
    history: Vec<f64>,
    argmax_history: Vec<Slope>,
}

impl SupTracker {
    fn new() -> Self {
        Self {
            best: f64::NEG_INFINITY,
            argmax: None,
            runner_up: f64::NEG_INFINITY,
            level: 0,
            history: Vec::new(),
            argmax_history: Vec::new(),
        }
    }

    fn close_levels_below(&mut self, level: u32) {
        while self.level < level {
            self.history.push(self.best);
            self.argmax_history
                .push(self.argmax.expect("non-empty level"));
            self.level += 1;
        }
    }

    fn push(&mut self, level: u32, slope: Slope, r: f64) {
        self.close_levels_below(level);
        let better = match self.argmax {
            None => true,
            Some(a) => r > self.best || (r == self.best && slope < a),
        };
        if better {
            if self.argmax.is_some() {
                self.runner_up = self.runner_up.max(self.best);
            }
            self.best = r;
            self.argmax = Some(slope);
        } else {
            self.runner_up = self.runner_up.max(r);
        }
    }

    fn finish(mut self, depth: u32) -> (MetricResult, Vec<Slope>, f64) {
        self.close_levels_below(depth + 1);
        let result = MetricResult {
            value: self.best,
            argmax: self.argmax.expect("non-empty spectrum"),
            depth,
            history: self.history,
        };
        (result, self.argmax_history, self.runner_up)
    }
}

fn sup_over(s0: &Spectrum, s1: &Spectrum, arcs: bool) -> Result<(MetricResult, Vec<Slope>, f64)> {
    if s0.depth != s1.depth {
        return Err(Error::InvalidArgument("spectra of different depths".into()));
    }
    let mut tracker = SupTracker::new();
    let arc_pair = if arcs {
        match (s0.log_arc_lengths(), s1.log_arc_lengths()) {
            (Some(a0), Some(a1)) => Some((a0, a1)),
            _ => return Err(Error::CuspBoundary),
        }
    } else {
        None
    };
    for i in 0..s0.slopes.len() {
        let mut r = s1.log_curves[i] - s0.log_curves[i];
        if let Some((a0, a1)) = arc_pair {
            r = r.max(a1[i] - a0[i]);
        }
        tracker.push(s0.levels[i], s0.slopes[i], r);
    }
    Ok(tracker.finish(s0.depth))
}

/// Curve metric `K` between precomputed spectra.
pub fn curve_metric_spectra(s0: &Spectrum, s1: &Spectrum) -> Result<MetricResult> {
    if (s0.boundary - s1.boundary).abs() > BOUNDARY_TOL {
        return Err(Error::BoundaryMismatch(s0.boundary, s1.boundary));
    }
    Ok(sup_over(s0, s1, false)?.0)
}

/// `K(h0, h1) = sup_s log(ℓ₁(s) / ℓ₀(s))` over slopes up to `depth`.
pub fn curve_metric(h0: &TraceCoords, h1: &TraceCoords, depth: u32) -> Result<MetricResult> {
    check_boundary(h0, h1)?;
    curve_metric_spectra(&Spectrum::new(h0, depth)?, &Spectrum::new(h1, depth)?)
}

/// `A(h0, h1)`: the supremum of log length ratios over orthogeodesic arcs
/// and closed curves (curves are limits of arcs spiralling onto them, so the
/// supremum over arcs alone is the same in the limit).
pub fn arc_metric(h0: &TraceCoords, h1: &TraceCoords, depth: u32) -> Result<MetricResult> {
    check_boundary(h0, h1)?;
    arc_metric_spectra(&Spectrum::new(h0, depth)?, &Spectrum::new(h1, depth)?)
}

pub fn arc_metric_spectra(s0: &Spectrum, s1: &Spectrum) -> Result<MetricResult> {
    if (s0.boundary - s1.boundary).abs() > BOUNDARY_TOL {
        return Err(Error::BoundaryMismatch(s0.boundary, s1.boundary));
    }
    Ok(sup_over(s0, s1, true)?.0)
}

/// Maximizing slope of `K` and whether it has settled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgmaxReport {
    #[serde(serialize_with = "slope_pair")]
    pub slope: Slope,
    /// Same argmax over the last three depth increments and no tie.
    pub stable: bool,
    /// Another slope within [`TIE_TOL`] of the maximum.
    pub tied: bool,
    #[serde(skip)]
    pub per_depth: Vec<Slope>,
}

pub fn max_ratio_slope(h0: &TraceCoords, h1: &TraceCoords, depth: u32) -> Result<ArgmaxReport> {
    check_boundary(h0, h1)?;
    let s0 = Spectrum::new(h0, depth)?;
    let s1 = Spectrum::new(h1, depth)?;
    let (result, per_depth, runner_up) = sup_over(&s0, &s1, false)?;
    let tied = result.value - runner_up <= TIE_TOL;
    let tail = &per_depth[per_depth.len().saturating_sub(4)..];
    let settled = per_depth.len() >= 4 && tail.iter().all(|s| *s == result.argmax);
    Ok(ArgmaxReport {
        slope: result.argmax,
        stable: settled && !tied,
        tied,
        per_depth,
    })
}

/// Twist family stretching slope `s` by `e^t` at fixed boundary length.
///
/// In a basis `(e1, e2)` with `e2 = s` and `det(e1, e2) = 1` the family is
/// `τ ↦ (e^t ℓ₀, τ, b)` in Fenchel–Nielsen coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StretchFamily {
    base: TraceCoords,
    slope: Slope,
    t: f64,
    e1: (i64, i64),
    e2: (i64, i64),
    base_fn: FNCoords,
}

impl StretchFamily {
    pub fn base(&self) -> &TraceCoords {
        &self.base
    }

    pub fn slope(&self) -> Slope {
        self.slope
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// Length of the stretched slope along the family.
    pub fn length(&self) -> f64 {
        self.t.exp() * self.base_fn.length
    }

    pub fn boundary(&self) -> f64 {
        self.base_fn.boundary
    }

    /// Twist of the base structure in the adapted basis.
    pub fn base_twist(&self) -> f64 {
        self.base_fn.twist
    }

    /// The structure at twist `tau`. Fails with [`Error::IllConditioned`]
    /// when rounding in the change back to the standard basis breaks either
    /// constraint by more than [`CONSTRAINT_TOL`]; this happens for twists
    /// far from the centre of a family stretching a complicated slope.
    pub fn at(&self, tau: f64) -> Result<TraceCoords> {
        let fnc = FNCoords::new(self.length(), tau, self.base_fn.boundary)?;
        let h = from_fenchel_nielsen_in_basis(&fnc, self.e1, self.e2)?;
        let (dl, db) = self.residuals(&h)?;
        if dl > CONSTRAINT_TOL || db > CONSTRAINT_TOL {
            return Err(Error::IllConditioned);
        }
        Ok(h)
    }

    /// `(|ℓ_s(h) - e^t ℓ₀|, |b(h) - b|)`.
    pub fn residuals(&self, h: &TraceCoords) -> Result<(f64, f64)> {
        let len = h.curve_length(self.slope)?;
        Ok((
            (len - self.length()).abs(),
            (h.boundary_length() - self.boundary()).abs(),
        ))
    }
}

pub fn stretch_family(h0: &TraceCoords, s: Slope, t: f64) -> Result<StretchFamily> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "stretch time {t} must be >= 0"
        )));
    }
    let r = s.basis_partner();
    let e1 = (-r.0, -r.1);
    let e2 = s.vector();
    let base_fn = h0.in_basis(e1, e2)?.to_fenchel_nielsen();
    Ok(StretchFamily {
        base: *h0,
        slope: s,
        t,
        e1,
        e2,
        base_fn,
    })
}

/// Which end of the envelope to follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(Side::Plus),
            "minus" | "-" => Ok(Side::Minus),
            _ => Err(Error::ParseLiteral(s.to_string())),
        }
    }
}

/// The twist interval on which the family stays within `tol` of distance `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeSlice {
    pub t: f64,
    pub tol: f64,
    pub depth: u32,
    pub tau_minus: f64,
    pub tau_plus: f64,
    /// Minimizer of `g(τ) = K(h0, h(τ))`.
    pub tau_min: f64,
    pub min_value: f64,
}

impl EnvelopeSlice {
    pub fn width(&self) -> f64 {
        self.tau_plus - self.tau_minus
    }

    pub fn endpoint(&self, side: Side) -> f64 {
        match side {
            Side::Plus => self.tau_plus,
            Side::Minus => self.tau_minus,
        }
    }
}

struct Objective<'a> {
    family: &'a StretchFamily,
    base: &'a Spectrum,
}

impl Objective<'_> {
    fn eval(&self, tau: f64) -> Result<f64> {
        let h = self.family.at(tau)?;
        let s1 = Spectrum::new(&h, self.base.depth)?;
        Ok(sup_over(self.base, &s1, false)?.0.value)
    }

    fn eval_or_inf(&self, tau: f64) -> f64 {
        self.eval(tau).unwrap_or(f64::INFINITY)
    }
}

pub fn stretch_envelope(
    h0: &TraceCoords,
    s: Slope,
    t: f64,
    depth: u32,
    tol: f64,
) -> Result<EnvelopeSlice> {
    if !(t > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "envelope needs t > 0 and tol > 0 (got t = {t}, tol = {tol})"
        )));
    }
    let family = stretch_family(h0, s, t)?;
    let base = Spectrum::new(h0, depth)?;
    let g = Objective {
        family: &family,
        base: &base,
    };

    let stretch = t.exp();
    let center = family.base_twist() * stretch;
    let mut half = 2.0 * family.length() + family.base_twist().abs() * stretch;
    let mut grid;
    let mut values;
    let mut best;
    let mut attempts = 0;
    loop {
        let step = 2.0 * half / (SCAN_SAMPLES - 1) as f64;
        grid = (0..SCAN_SAMPLES)
            .map(|i| center - half + step * i as f64)
            .collect::<Vec<_>>();
        values = grid
            .par_iter()
            .map(|&x| g.eval_or_inf(x))
            .collect::<Vec<_>>();
        best = 0;
        for i in 1..values.len() {
            if values[i] < values[best] {
                best = i;
            }
        }
        attempts += 1;
        let interior = best > 0 && best + 1 < SCAN_SAMPLES;
        if interior || attempts >= 8 {
            break;
        }
        half *= 2.0;
    }

    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(SCAN_SAMPLES - 1)];
    let (tau_min, min_value) = golden_section(&g, lo, hi, (grid[best], values[best]));
    let bound = t + tol;
    if min_value > bound {
        return Err(Error::InsufficientDepth {
            min: min_value,
            bound,
        });
    }

    let step = 2.0 * half / (SCAN_SAMPLES - 1) as f64;
    let tau_plus = edge(&g, tau_min, step, bound);
    let tau_minus = edge(&g, tau_min, -step, bound);
    Ok(EnvelopeSlice {
        t,
        tol,
        depth,
        tau_minus,
        tau_plus,
        tau_min,
        min_value,
    })
}

/// Golden-section search on `[lo, hi]`, keeping the left point on ties.
fn golden_section(g: &Objective<'_>, mut lo: f64, mut hi: f64, seed: (f64, f64)) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = g.eval_or_inf(c);
    let mut fd = g.eval_or_inf(d);
    for _ in 0..GOLDEN_ITERS {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = g.eval_or_inf(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = g.eval_or_inf(d);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    if seed.1 < best.1 {
        best = seed;
    }
    best
}

/// Last point of `{g <= bound}` reached from `start` moving by `step`.
fn edge(g: &Objective<'_>, start: f64, step: f64, bound: f64) -> f64 {
    let mut inside = start;
    let mut outside = start + step;
    let mut step = step;
    while g.eval_or_inf(outside) <= bound {
        inside = outside;
        step *= 2.0;
        outside = inside + step;
    }
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (inside + outside);
        if g.eval_or_inf(mid) <= bound {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Structure at one end of the envelope at time `t` (`h0` itself at `t = 0`).
pub fn partial_stretch_point(
    h0: &TraceCoords,
    s: Slope,
    t: f64,
    side: Side,
    depth: u32,
    tol: f64,
) -> Result<TraceCoords> {
    if t == 0.0 {
        return Ok(*h0);
    }
    let env = stretch_envelope(h0, s, t, depth, tol)?;
    stretch_family(h0, s, t)?.at(env.endpoint(side))
}

/// Pairwise distances along one side of the envelope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicReport {
    pub times: Vec<f64>,
    /// Envelope at each time (`None` at `t = 0`).
    pub envelopes: Vec<Option<EnvelopeSlice>>,
    #[serde(skip)]
    pub points: Vec<TraceCoords>,
    /// `(i, j, K(h_{t_i}, h_{t_j}), t_j - t_i)` for `i < j`.
    pub pairs: Vec<(usize, usize, f64, f64)>,
    /// `|K(h_a, h_b) + K(h_b, h_c) - K(h_a, h_c)|` for consecutive triples.
    pub additivity: Vec<f64>,
    pub boundary_drift: f64,
    pub violations: Vec<(usize, usize)>,
}

impl GeodesicReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn max_pair_error(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| (p.2 - p.3).abs())
            .fold(0.0, f64::max)
    }
}

/// Envelope tolerance used when locating path points; `tol` only governs
/// the distance checks.
pub const PATH_TOL: f64 = 1e-7;

pub fn geodesic_check(
    h0: &TraceCoords,
    s: Slope,
    side: Side,
    times: &[f64],
    depth: u32,
    tol: f64,
) -> Result<GeodesicReport> {
    if times.windows(2).any(|w| w[0] > w[1]) || times.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::InvalidArgument(
            "times must be sorted and non-negative".into(),
        ));
    }
    let env_tol = tol.min(PATH_TOL);
    let located = times
        .par_iter()
        .map(|&t| -> Result<(Option<EnvelopeSlice>, TraceCoords)> {
            if t == 0.0 {
                return Ok((None, *h0));
            }
            let env = stretch_envelope(h0, s, t, depth, env_tol)?;
            let h = stretch_family(h0, s, t)?.at(env.endpoint(side))?;
            Ok((Some(env), h))
        })
        .collect::<Result<Vec<_>>>()?;
    let (envelopes, points): (Vec<_>, Vec<_>) = located.into_iter().unzip();
    let spectra = points
        .par_iter()
        .map(|h| Spectrum::new(h, depth))
        .collect::<Result<Vec<_>>>()?;
    let b = h0.boundary_length();
    let boundary_drift = points
        .iter()
        .map(|h| (h.boundary_length() - b).abs())
        .fold(0.0, f64::max);

    let n = points.len();
    let mut pairs = Vec::new();
    let mut violations = Vec::new();
    let mut k = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let value = curve_metric_spectra(&spectra[i], &spectra[j])?.value;
            let expected = times[j] - times[i];
            k[i][j] = value;
            if (value - expected).abs() > tol {
                violations.push((i, j));
            }
            pairs.push((i, j, value, expected));
        }
    }
    let additivity = (2..n)
        .map(|c| (k[c - 2][c - 1] + k[c - 1][c] - k[c - 2][c]).abs())
        .collect();
    Ok(GeodesicReport {
        times: times.to_vec(),
        envelopes,
        points,
        pairs,
        additivity,
        boundary_drift,
        violations,
    })
}

/// Random structure with boundary `b`: `(0,1)` length log-uniform in
/// `len_range`, twist uniform in `[-ℓ/2, ℓ/2]`.
pub fn random_structure<R: Rng>(rng: &mut R, b: f64, len_range: (f64, f64)) -> Result<TraceCoords> {
    let (lo, hi) = (len_range.0.ln(), len_range.1.ln());
    let length = rng.gen_range(lo..=hi).exp();
    let twist = rng.gen_range(-0.5..=0.5) * length;
    from_fenchel_nielsen(&FNCoords::new(length, twist, b)?)
}

pub const DEFAULT_LENGTH_RANGE: (f64, f64) = (0.4, 3.0);

/// Deterministic RNG for sample `index` of a run with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn fn_distance(x: &TraceCoords, y: &TraceCoords) -> f64 {
    let (a, b) = (x.to_fenchel_nielsen(), y.to_fenchel_nielsen());
    (a.length - b.length).hypot(a.twist - b.twist)
}

/// Outcome of the positivity, triangle and asymmetry checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub boundary: f64,
    pub depth: u32,
    /// Indices of triples with a distinct pair at distance `<= 0`.
    pub positivity_failures: Vec<usize>,
    /// `(index, excess)` with `K(x,z) - K(x,y) - K(y,z) > slack`.
    pub triangle_violations: Vec<(usize, f64)>,
    pub max_triangle_excess: f64,
    pub min_distinct_distance: f64,
    /// `(index, K(x,y), K(y,x))` for pairs with `|K(x,y) - K(y,x)| > 1e-6`.
    pub asymmetric_pairs: Vec<(usize, f64, f64)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.positivity_failures.is_empty() && self.triangle_violations.is_empty()
    }
}

struct TripleOutcome {
    positive: bool,
    min_distinct: f64,
    excess: f64,
    asym: Option<(f64, f64)>,
}

pub fn metric_axiom_suite(samples: usize, b: f64, depth: u32, seed: u64) -> Result<AxiomReport> {
    if !(b > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "boundary {b} must be positive"
        )));
    }
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<TripleOutcome> {
            let mut rng = sample_rng(seed, i as u64);
            let pts = [
                random_structure(&mut rng, b, DEFAULT_LENGTH_RANGE)?,
                random_structure(&mut rng, b, DEFAULT_LENGTH_RANGE)?,
                random_structure(&mut rng, b, DEFAULT_LENGTH_RANGE)?,
            ];
            let sp = pts
                .iter()
                .map(|h| Spectrum::new(h, depth))
                .collect::<Result<Vec<_>>>()?;
            let k = |a: usize, c: usize| curve_metric_spectra(&sp[a], &sp[c]).map(|r| r.value);
            let mut positive = true;
            let mut min_distinct = f64::INFINITY;
            for (a, c) in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)] {
                if fn_distance(&pts[a], &pts[c]) > DISTINCT_FN {
                    let v = k(a, c)?;
                    positive &= v > 0.0;
                    min_distinct = min_distinct.min(v);
                }
            }
            let (kxy, kyx) = (k(0, 1)?, k(1, 0)?);
            let excess = k(0, 2)? - kxy - k(1, 2)?;
            let asym = ((kxy - kyx).abs() > 1e-6).then_some((kxy, kyx));
            Ok(TripleOutcome {
                positive,
                min_distinct,
                excess,
                asym,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = AxiomReport {
        samples,
        boundary: b,
        depth,
        positivity_failures: Vec::new(),
        triangle_violations: Vec::new(),
        max_triangle_excess: f64::NEG_INFINITY,
        min_distinct_distance: f64::INFINITY,
        asymmetric_pairs: Vec::new(),
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        if !o.positive {
            report.positivity_failures.push(i);
        }
        if o.excess > TRIANGLE_SLACK {
            report.triangle_violations.push((i, o.excess));
        }
        report.max_triangle_excess = report.max_triangle_excess.max(o.excess);
        report.min_distinct_distance = report.min_distinct_distance.min(o.min_distinct);
        if let Some((a, c)) = o.asym {
            report.asymmetric_pairs.push((i, a, c));
        }
    }
    Ok(report)
}
