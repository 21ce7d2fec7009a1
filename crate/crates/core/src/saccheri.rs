//! Ideal Saccheri quadrilaterals and their k-expansion maps.
//!
//! Canonical placement: the symmetry axis is the imaginary axis, the ideal
//! vertices are `C = +1` and `D = -1`, side `CD` is the unit half-circle and
//! the base `AB` lies on the half-circle `|z| = R` orthogonal to the axis.
//! The sides `AD` and `BC` lie on the geodesics `(-R², -1)` and `(1, R²)`,
//! which are orthogonal to `|z| = R` because `-R²` is the inversion of `-1`.
//!
//! Each cusp is handled in its strip chart: for `C` the chart
//! `w = -2 / (z - 1)` sends `C` to `∞`, side `CD` to `Re w = 1`, side `BC`
//! to `Re w = -2 / (R² - 1)` and the extreme horocycle through the anchor
//! point `i` to `Im w = 1`. Cusp `D` uses the same chart after reflection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyp2::{hyp_distance, BoundaryPoint, Geodesic, Horocycle, HyperbolicPoint};
use crate::CRITICAL_BASE;

/// Relative tolerance used when classifying the critical base length.
pub const CRITICAL_TOL: f64 = 1e-12;

/// Chart offset used for infinitesimal Lipschitz pairs.
pub const INFINITESIMAL_OFFSET: f64 = 1e-6;

const PAIRS_PER_CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FoliationCase {
    Short,
    Critical,
    Long,
}

impl std::fmt::Display for FoliationCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FoliationCase::Short => "short",
            FoliationCase::Critical => "critical",
            FoliationCase::Long => "long",
        };
        f.write_str(s)
    }
}

/// The two ideal vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cusp {
    /// `C = +1`.
    C,
    /// `D = -1`.
    D,
}

/// Position of a foliated point: distance from the unfoliated region and
/// arclength along its leaf measured from the endpoint on `CD`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeafCoords {
    pub cusp: Cusp,
    pub depth: f64,
    pub arclength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealSaccheriQuad {
    base_length: f64,
    /// Euclidean radius of the half-circle carrying `AB`; infinite for the
    /// ideal-triangle limit.
    radius: f64,
}

/// Build the canonical ideal Saccheri quadrilateral with base length `a`.
pub fn build_quad(a: f64) -> Result<IdealSaccheriQuad> {
    IdealSaccheriQuad::new(a)
}

impl IdealSaccheriQuad {
    pub fn new(base_length: f64) -> Result<Self> {
        if !(base_length > 0.0) || !base_length.is_finite() {
            return Err(Error::InvalidBaseLength(base_length));
        }
        // Half the base is the distance from the imaginary axis to the
        // geodesic (1, R²): sinh(a/2) · sinh(ln R) = 1.
        let log_r = (1.0 / (base_length / 2.0).sinh()).asinh();
        Ok(Self {
            base_length,
            radius: log_r.exp(),
        })
    }

    /// The `a -> 0` limit: the ideal triangle `(-1, 1, ∞)`, foliated at the
    /// two finite cusps only.
    pub fn ideal_triangle() -> Self {
        Self {
            base_length: 0.0,
            radius: f64::INFINITY,
        }
    }

    pub fn base_length(&self) -> f64 {
        self.base_length
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn is_ideal_triangle(&self) -> bool {
        self.radius.is_infinite()
    }

    pub fn classify(&self) -> FoliationCase {
        classify(self)
    }

    /// Vertex `B`, on side `BC`.
    pub fn vertex_b(&self) -> Option<HyperbolicPoint> {
        if self.is_ideal_triangle() {
            return None;
        }
        let r2 = self.radius * self.radius;
        let x = 2.0 * r2 / (1.0 + r2);
        let y = (r2 - x * x).sqrt();
        HyperbolicPoint::new(x, y).ok()
    }

    /// Vertex `A`, the mirror image of `B`.
    pub fn vertex_a(&self) -> Option<HyperbolicPoint> {
        self.vertex_b().map(|b| b.reflect())
    }

    pub fn vertex_c(&self) -> BoundaryPoint {
        BoundaryPoint::Finite(1.0)
    }

    pub fn vertex_d(&self) -> BoundaryPoint {
        BoundaryPoint::Finite(-1.0)
    }

    pub fn side_ab(&self) -> Option<Geodesic> {
        if self.is_ideal_triangle() {
            None
        } else {
            Geodesic::finite(-self.radius, self.radius).ok()
        }
    }

    pub fn side_bc(&self) -> Geodesic {
        let far = if self.is_ideal_triangle() {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Finite(self.radius * self.radius)
        };
        Geodesic::new(BoundaryPoint::Finite(1.0), far).expect("distinct endpoints")
    }

    pub fn side_ad(&self) -> Geodesic {
        let far = if self.is_ideal_triangle() {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Finite(-self.radius * self.radius)
        };
        Geodesic::new(far, BoundaryPoint::Finite(-1.0)).expect("distinct endpoints")
    }

    pub fn side_cd(&self) -> Geodesic {
        Geodesic::finite(-1.0, 1.0).expect("distinct endpoints")
    }

    /// Real part of side `BC` in the strip chart of cusp `C`.
    pub fn chart_bc(&self) -> f64 {
        -2.0 / (self.radius * self.radius - 1.0)
    }

    /// Chart width of the cusp strip (leaf length at height one).
    pub fn strip_width(&self) -> f64 {
        1.0 - self.chart_bc()
    }

    /// Membership in the quadrilateral itself (closed).
    pub fn contains(&self, p: &HyperbolicPoint) -> bool {
        if !self.extended_contains(p) {
            return false;
        }
        let r2 = p.re() * p.re() + p.im() * p.im();
        r2 <= self.radius * self.radius
    }

    /// Membership in the extended domain bounded by `CD` and the complete
    /// geodesics through `AD` and `BC` (closed).
    pub fn extended_contains(&self, p: &HyperbolicPoint) -> bool {
        let (x, y) = if p.re() >= 0.0 {
            to_chart(p)
        } else {
            to_chart(&p.reflect())
        };
        let (lo, hi) = (self.chart_bc(), 1.0);
        if x < lo || x > hi {
            return false;
        }
        // image of the far side AD: half-circle over [2 / (R² + 1), 1]
        let left = 2.0 / (self.radius * self.radius + 1.0);
        let c = (left + 1.0) / 2.0;
        let r = (1.0 - left) / 2.0;
        (x - c) * (x - c) + y * y >= r * r
    }

    /// Cosines of the angles at `A` and `B` between the base and the sides.
    pub fn right_angle_residuals(&self) -> Option<(f64, f64)> {
        let b = self.vertex_b()?;
        let bc = self.side_bc().circle()?;
        // tangent directions are perpendicular to the radii of each circle
        let r1 = (b.re(), b.im());
        let r2 = (b.re() - bc.0, b.im());
        let cos = |u: (f64, f64), v: (f64, f64)| {
            (u.0 * v.0 + u.1 * v.1)
                / ((u.0 * u.0 + u.1 * u.1).sqrt() * (v.0 * v.0 + v.1 * v.1).sqrt())
        };
        let at_b = cos(r1, r2);
        let a = b.reflect();
        let ad = self.side_ad().circle()?;
        let at_a = cos((a.re(), a.im()), (a.re() - ad.0, a.im()));
        Some((at_a, at_b))
    }
}

pub fn classify(q: &IdealSaccheriQuad) -> FoliationCase {
    let a = q.base_length;
    if (a - CRITICAL_BASE).abs() <= CRITICAL_TOL * CRITICAL_BASE {
        FoliationCase::Critical
    } else if a < CRITICAL_BASE {
        FoliationCase::Short
    } else {
        FoliationCase::Long
    }
}

/// Strip chart of cusp `C`: `w = -2 / (z - 1)`.
fn to_chart(p: &HyperbolicPoint) -> (f64, f64) {
    let dx = p.re() - 1.0;
    let dy = p.im();
    let n = dx * dx + dy * dy;
    (-2.0 * dx / n, 2.0 * dy / n)
}

fn from_chart(x: f64, y: f64) -> Result<HyperbolicPoint> {
    // z = 1 - 2 / w
    let n = x * x + y * y;
    HyperbolicPoint::new(1.0 - 2.0 * x / n, 2.0 * y / n)
}

/// Chart coordinates of `p` relative to `cusp`.
pub fn cusp_chart(cusp: Cusp, p: &HyperbolicPoint) -> (f64, f64) {
    match cusp {
        Cusp::C => to_chart(p),
        Cusp::D => to_chart(&p.reflect()),
    }
}

pub fn from_cusp_chart(cusp: Cusp, x: f64, y: f64) -> Result<HyperbolicPoint> {
    let p = from_chart(x, y)?;
    Ok(match cusp {
        Cusp::C => p,
        Cusp::D => p.reflect(),
    })
}

/// The reflection-symmetric partial horocyclic foliation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialFoliation {
    quad: IdealSaccheriQuad,
    anchor: HyperbolicPoint,
    /// Extreme leaves at `D` and at `C`.
    extreme_leaves: [Horocycle; 2],
}

pub fn foliate(q: &IdealSaccheriQuad) -> PartialFoliation {
    PartialFoliation {
        quad: *q,
        anchor: HyperbolicPoint::i(),
        extreme_leaves: [
            Horocycle::new(BoundaryPoint::Finite(-1.0), 2.0).expect("positive size"),
            Horocycle::new(BoundaryPoint::Finite(1.0), 2.0).expect("positive size"),
        ],
    }
}

impl PartialFoliation {
    pub fn anchor(&self) -> HyperbolicPoint {
        self.anchor
    }

    pub fn extreme_leaves(&self) -> [Horocycle; 2] {
        self.extreme_leaves
    }

    pub fn quad(&self) -> &IdealSaccheriQuad {
        &self.quad
    }

    /// Leaf coordinates of a foliated point of the extended domain, `None`
    /// for points of the unfoliated region or outside the domain.
    pub fn leaf_coords(&self, p: &HyperbolicPoint) -> Option<LeafCoords> {
        if !self.quad.extended_contains(p) {
            return None;
        }
        let cusp = if p.re() >= 0.0 { Cusp::C } else { Cusp::D };
        let (x, y) = cusp_chart(cusp, p);
        if y < 1.0 {
            return None;
        }
        Some(LeafCoords {
            cusp,
            depth: y.ln(),
            arclength: (1.0 - x) / y,
        })
    }

    pub fn point_at(&self, c: &LeafCoords) -> Result<HyperbolicPoint> {
        let y = c.depth.exp();
        let x = 1.0 - c.arclength * y;
        from_cusp_chart(c.cusp, x, y)
    }

    /// Length of the leaf at the given depth.
    pub fn leaf_length(&self, depth: f64) -> f64 {
        self.quad.strip_width() * (-depth).exp()
    }
}

/// The extended domain of a quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedDomain {
    quad: IdealSaccheriQuad,
}

pub fn extend_quad(q: &IdealSaccheriQuad) -> ExtendedDomain {
    ExtendedDomain { quad: *q }
}

impl ExtendedDomain {
    pub fn contains(&self, p: &HyperbolicPoint) -> bool {
        self.quad.extended_contains(p)
    }

    pub fn quad(&self) -> &IdealSaccheriQuad {
        &self.quad
    }
}

/// The k-expansion map of a quadrilateral. Long quadrilaterals always use
/// the extended domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionMap {
    k: f64,
    quad: IdealSaccheriQuad,
    extended: bool,
}

impl ExpansionMap {
    pub fn new(quad: IdealSaccheriQuad, k: f64) -> Result<Self> {
        if !(k >= 1.0) || !k.is_finite() {
            return Err(Error::InvalidExpansionFactor(k));
        }
        let extended = quad.classify() == FoliationCase::Long;
        Ok(Self { k, quad, extended })
    }

    /// Thurston's expansion map on the ideal triangle, restricted to the two
    /// finite cusps.
    pub fn ideal_triangle(k: f64) -> Result<Self> {
        if !(k >= 1.0) || !k.is_finite() {
            return Err(Error::InvalidExpansionFactor(k));
        }
        Ok(Self {
            k,
            quad: IdealSaccheriQuad::ideal_triangle(),
            extended: true,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn quad(&self) -> &IdealSaccheriQuad {
        &self.quad
    }

    pub fn uses_extended_domain(&self) -> bool {
        self.extended
    }

    pub fn in_domain(&self, p: &HyperbolicPoint) -> bool {
        if self.extended {
            self.quad.extended_contains(p)
        } else {
            self.quad.contains(p)
        }
    }

    pub fn apply(&self, p: &HyperbolicPoint) -> Result<HyperbolicPoint> {
        expansion_apply(self, p)
    }
}

/// Identity on the unfoliated region; in a cusp strip chart the leaf at
/// height `y` (depth `ln y`) goes to height `y^k`, and each leaf is mapped
/// linearly onto its image, which keeps the chart abscissa fixed.
pub fn expansion_apply(m: &ExpansionMap, p: &HyperbolicPoint) -> Result<HyperbolicPoint> {
    if !m.in_domain(p) {
        return Err(Error::OutsideDomain {
            re: p.re(),
            im: p.im(),
        });
    }
    let cusp = if p.re() >= 0.0 { Cusp::C } else { Cusp::D };
    let (x, y) = cusp_chart(cusp, p);
    if y <= 1.0 || m.k == 1.0 {
        return Ok(*p);
    }
    from_cusp_chart(cusp, x, y.powf(m.k))
}

/// Result of a sampled Lipschitz estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub estimate: f64,
    pub max_global: f64,
    pub max_local: f64,
    pub pairs: usize,
    /// Pairs whose ratio exceeded `k (1 + 1e-6)`.
    pub violations: usize,
}

/// Sampled supremum of `d(f p, f q) / d(p, q)`.
pub fn lipschitz_estimate(m: &ExpansionMap, n_pairs: usize, seed: u64) -> f64 {
    lipschitz_report(m, n_pairs, seed).estimate
}

/// Sampled Lipschitz statistics. Even-indexed pairs are global, odd-indexed
/// pairs are infinitesimal (central chart offsets of `1e-6`). Sampling is
/// chunked with one ChaCha stream per chunk, so the result does not depend
/// on the number of workers.
pub fn lipschitz_report(m: &ExpansionMap, n_pairs: usize, seed: u64) -> LipschitzReport {
    let n_pairs = n_pairs.max(1);
    let bound = m.k * (1.0 + 1e-6);
    let chunks = n_pairs.div_ceil(PAIRS_PER_CHUNK);
    let partial: Vec<(f64, f64, usize)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let start = chunk * PAIRS_PER_CHUNK;
            let end = (start + PAIRS_PER_CHUNK).min(n_pairs);
            let (mut g, mut l, mut bad) = (0.0f64, 0.0f64, 0usize);
            for idx in start..end {
                let ratio = if idx % 2 == 0 {
                    let p = sample_point(m, &mut rng);
                    let q = sample_point(m, &mut rng);
                    pair_ratio(m, &p, &q)
                } else {
                    infinitesimal_ratio(m, &mut rng)
                };
                if ratio > bound {
                    bad += 1;
                }
                if idx % 2 == 0 {
                    g = g.max(ratio);
                } else {
                    l = l.max(ratio);
                }
            }
            (g, l, bad)
        })
        .collect();
    let (g, l, bad) = partial
        .into_iter()
        .fold((0.0f64, 0.0f64, 0usize), |acc, x| {
            (acc.0.max(x.0), acc.1.max(x.1), acc.2 + x.2)
        });
    LipschitzReport {
        estimate: g.max(l),
        max_global: g,
        max_local: l,
        pairs: n_pairs,
        violations: bad,
    }
}

fn pair_ratio(m: &ExpansionMap, p: &HyperbolicPoint, q: &HyperbolicPoint) -> f64 {
    let d = hyp_distance(p, q);
    if d == 0.0 {
        return 1.0;
    }
    let fp = expansion_apply(m, p).expect("sampled inside domain");
    let fq = expansion_apply(m, q).expect("sampled inside domain");
    hyp_distance(&fp, &fq) / d
}

/// Box used for sampling the unfoliated region.
fn sampling_box(m: &ExpansionMap) -> f64 {
    let r = m.quad.radius();
    if m.extended || !r.is_finite() {
        4.0 * (1.0 + std::f64::consts::SQRT_2).max(if r.is_finite() { r } else { 1.0 })
    } else {
        r
    }
}

/// Random point of the domain: a cusp strip or the unfoliated region.
fn sample_point(m: &ExpansionMap, rng: &mut ChaCha8Rng) -> HyperbolicPoint {
    let region: u8 = rng.gen_range(0..3);
    match region {
        0 | 1 => {
            let cusp = if region == 0 { Cusp::C } else { Cusp::D };
            let x = rng.gen_range(m.quad.chart_bc()..=1.0);
            let y = rng.gen_range(0.0f64..3.0).exp();
            from_cusp_chart(cusp, x, y).expect("chart point is in H")
        }
        _ => {
            let b = sampling_box(m);
            loop {
                let re = rng.gen_range(-b..=b);
                let im = rng.gen_range(0.0..=b);
                let Ok(p) = HyperbolicPoint::new(re, im) else {
                    continue;
                };
                if !m.in_domain(&p) {
                    continue;
                }
                let cusp = if re >= 0.0 { Cusp::C } else { Cusp::D };
                if cusp_chart(cusp, &p).1 > 1.0 {
                    continue;
                }
                return p;
            }
        }
    }
}

fn infinitesimal_ratio(m: &ExpansionMap, rng: &mut ChaCha8Rng) -> f64 {
    let h = INFINITESIMAL_OFFSET;
    loop {
        let p = sample_point(m, rng);
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let (dx, dy) = (h * theta.cos(), h * theta.sin());
        let cusp = if p.re() >= 0.0 { Cusp::C } else { Cusp::D };
        let (x, y) = cusp_chart(cusp, &p);
        let pair = if y > 1.0 {
            (
                from_cusp_chart(cusp, x + dx, y + dy),
                from_cusp_chart(cusp, x - dx, y - dy),
            )
        } else {
            (
                HyperbolicPoint::new(p.re() + dx, p.im() + dy),
                HyperbolicPoint::new(p.re() - dx, p.im() - dy),
            )
        };
        let (Ok(a), Ok(b)) = pair else { continue };
        if m.in_domain(&a) && m.in_domain(&b) {
            return pair_ratio(m, &a, &b);
        }
    }
}

/// Largest hyperbolic distance between `f_{k2} ∘ f_{k1}` and `f_{k1 k2}` on
/// sampled points.
pub fn composition_residual(
    quad: &IdealSaccheriQuad,
    k1: f64,
    k2: f64,
    n_points: usize,
    seed: u64,
) -> Result<f64> {
    let m1 = ExpansionMap::new(*quad, k1)?;
    let m2 = ExpansionMap::new(*quad, k2)?;
    let m12 = ExpansionMap::new(*quad, k1 * k2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..n_points {
        let p = sample_point(&m12, &mut rng);
        let two_step = m2.apply(&m1.apply(&p)?)?;
        let direct = m12.apply(&p)?;
        worst = worst.max(hyp_distance(&two_step, &direct));
    }
    Ok(worst)
}

/// Random points of the map's domain, for property checks.
pub fn sample_domain_points(m: &ExpansionMap, n: usize, seed: u64) -> Vec<HyperbolicPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_point(m, &mut rng)).collect()
}
