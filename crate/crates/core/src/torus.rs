//! Marked one-holed tori in trace coordinates.
//!
//! A structure is the triple `(u, v, w)` of holonomy traces of the slopes
//! `(1,0)`, `(0,1)` and `(1,1)`. Traces of all other slopes follow from the
//! Fricke relation `t(x + y) + t(x - y) = t(x) t(y)` for Farey neighbours
//! `x, y`, evaluated along the Stern–Brocot tree. Traces of deep slopes
//! overflow `f64` quickly, so the recursion runs on natural logs of traces.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyp2::{common_perpendicular_length, Geodesic, Isometry, Sl2};

const LN_2: f64 = std::f64::consts::LN_2;

/// A primitive homology class `(p, q)`, canonically `q > 0` or `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    p: i64,
    q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if gcd(p, q) != 1 {
            return Err(Error::InvalidSlope(p, q));
        }
        Ok(Self::canonical(p, q))
    }

    fn canonical(p: i64, q: i64) -> Self {
        if q < 0 || (q == 0 && p < 0) {
            Self { p: -p, q: -q }
        } else {
            Self { p, q }
        }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn vector(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    /// A vector `r` with `det(self, r) = p r_q - q r_p = 1`.
    pub fn basis_partner(&self) -> (i64, i64) {
        let (g, x, y) = ext_gcd(self.p, self.q);
        debug_assert_eq!(g.abs(), 1);
        // p x + q y = g  =>  det((p,q), (-y g, x g)) = g² = 1
        (-y * g, x * g)
    }

    /// Whether two slopes are Farey neighbours (intersection number one).
    pub fn is_neighbour(&self, other: &Slope) -> bool {
        (self.p * other.q - self.q * other.p).abs() == 1
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut it = t.split(',').map(|x| x.trim().parse::<i64>());
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(p)), Some(Ok(q)), None) => Slope::new(p, q),
            _ => Err(Error::ParseLiteral(s.to_string())),
        }
    }
}

/// Trace coordinates of a marked one-holed torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceCoords {
    u: f64,
    v: f64,
    w: f64,
}

impl TraceCoords {
    /// Accepts `u, v, w > 2` with commutator trace `κ <= -2` (up to rounding
    /// relative to the size of the terms).
    pub fn new(u: f64, v: f64, w: f64) -> Result<Self> {
        let bad = |reason| Err(Error::InvalidTraceCoords { u, v, w, reason });
        if !(u.is_finite() && v.is_finite() && w.is_finite()) {
            return bad("non-finite trace");
        }
        if !(u > 2.0 && v > 2.0 && w > 2.0) {
            return bad("traces must exceed 2");
        }
        let k = kappa(u, v, w);
        let scale = u * u + v * v + w * w + u * v * w;
        if k > -2.0 + 1e-12 * scale {
            return bad("commutator trace must be <= -2");
        }
        Ok(Self { u, v, w })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    /// Commutator trace `u² + v² + w² - uvw - 2`.
    pub fn kappa(&self) -> f64 {
        kappa(self.u, self.v, self.w)
    }

    pub fn boundary_length(&self) -> f64 {
        boundary_length(self)
    }

    pub fn holonomy(&self) -> Result<(Isometry, Isometry)> {
        holonomy(self)
    }

    pub fn slope_trace(&self, s: Slope) -> f64 {
        slope_trace(self, s)
    }

    pub fn curve_length(&self, s: Slope) -> Result<f64> {
        curve_length(self, s)
    }

    pub fn arc_length(&self, s: Slope) -> Result<f64> {
        arc_length(self, s)
    }

    /// Coordinates with respect to the basis `(e1, e2)`: the traces of
    /// `e1`, `e2` and `e1 + e2`. Requires `|det(e1, e2)| = 1`.
    pub fn in_basis(&self, e1: (i64, i64), e2: (i64, i64)) -> Result<TraceCoords> {
        let det = e1.0 * e2.1 - e1.1 * e2.0;
        if det.abs() != 1 {
            return Err(Error::InvalidArgument(format!(
                "basis {e1:?}, {e2:?} is not unimodular"
            )));
        }
        let t = |v: (i64, i64)| slope_trace(self, Slope::canonical(v.0, v.1));
        TraceCoords::new(t(e1), t(e2), t((e1.0 + e2.0, e1.1 + e2.1)))
    }

    /// Inverse of [`in_basis`](Self::in_basis) for a basis with
    /// `det(e1, e2) = 1`: `self` is read as coordinates in that basis and the
    /// result is expressed in the standard one.
    pub fn from_basis(&self, e1: (i64, i64), e2: (i64, i64)) -> Result<TraceCoords> {
        let det = e1.0 * e2.1 - e1.1 * e2.0;
        if det != 1 {
            return Err(Error::InvalidArgument(format!(
                "basis {e1:?}, {e2:?} must have determinant 1"
            )));
        }
        self.in_basis((e2.1, -e1.1), (-e2.0, e1.0))
    }

    pub fn to_fenchel_nielsen(&self) -> FNCoords {
        to_fenchel_nielsen(self)
    }
}

fn kappa(u: f64, v: f64, w: f64) -> f64 {
    u * u + v * v + w * w - u * v * w - 2.0
}

/// `2 arccosh(|κ| / 2)`, zero for a cusp.
pub fn boundary_length(h: &TraceCoords) -> f64 {
    let half = -h.kappa() / 2.0;
    if half <= 1.0 {
        0.0
    } else {
        2.0 * half.acosh()
    }
}

/// Canonical lift of the holonomy: `A = diag(λ, 1/λ)` with `λ > 1`, and `B`
/// with `tr B = v`, `tr AB = w`, off-diagonal entries of equal magnitude.
pub fn holonomy(h: &TraceCoords) -> Result<(Isometry, Isometry)> {
    let (a, b) = holonomy_matrices(h)?;
    Ok((Isometry::from_matrix(a)?, Isometry::from_matrix(b)?))
}

pub fn holonomy_matrices(h: &TraceCoords) -> Result<(Sl2, Sl2)> {
    let (u, v, w) = (h.u, h.v, h.w);
    let lambda = (u + ((u - 2.0) * (u + 2.0)).sqrt()) / 2.0;
    let inv = 1.0 / lambda;
    let b11 = (w - v * inv) / (lambda - inv);
    let b22 = v - b11;
    let c = b11 * b22 - 1.0;
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidTraceCoords {
            u,
            v,
            w,
            reason: "reducible representation",
        });
    }
    let r = c.abs().sqrt();
    let a = Sl2::new(lambda, 0.0, 0.0, inv);
    let b = Sl2::new(b11, r, c.signum() * r, b22);
    Ok((a, b))
}

/// Natural log of the trace of slope `s`.
pub fn log_slope_trace(h: &TraceCoords, s: Slope) -> f64 {
    log_trace_from(&LogTraces::of(h), s)
}

/// Log-traces of `(1,0)`, `(0,1)`, `(1,1)` and `(1,-1)`, the seeds of both
/// branches of the recursion.
#[derive(Debug, Clone, Copy)]
struct LogTraces {
    u: f64,
    v: f64,
    w: f64,
    x: f64,
}

impl LogTraces {
    fn of(h: &TraceCoords) -> Self {
        Self {
            u: h.u.ln(),
            v: h.v.ln(),
            w: h.w.ln(),
            x: (h.u * h.v - h.w).ln(),
        }
    }
}

fn log_trace_from(t: &LogTraces, s: Slope) -> f64 {
    let (p, q) = s.vector();
    if q == 0 {
        return t.u;
    }
    if p == 0 {
        return t.v;
    }
    // Branch p > 0 uses L = (1,0), R = (0,1) with L - R = (1,-1). Branch
    // p < 0 mirrors it: L = (-1,0), R = (0,1), L - R ≡ (1,1).
    let ld = if p > 0 { t.x } else { t.w };
    descend((p.abs() as i128, q as i128), t.u, t.v, ld)
}

fn log_mediant(ll: f64, lr: f64, ld: f64) -> f64 {
    ll + lr + (-(ld - ll - lr).exp()).ln_1p()
}

fn descend(target: (i128, i128), mut ll: f64, mut lr: f64, mut ld: f64) -> f64 {
    let (mut l, mut r) = ((1i128, 0i128), (0i128, 1i128));
    loop {
        let m = (l.0 + r.0, l.1 + r.1);
        let lm = log_mediant(ll, lr, ld);
        if m == target {
            return lm;
        }
        if target.1 * m.0 < target.0 * m.1 {
            // target lies between L and M
            ld = lr;
            r = m;
            lr = lm;
        } else {
            ld = ll;
            l = m;
            ll = lm;
        }
    }
}

/// Trace of the holonomy of the curve of slope `s` (may be `inf` for very
/// long curves; see [`log_slope_trace`]).
pub fn slope_trace(h: &TraceCoords, s: Slope) -> f64 {
    match s.vector() {
        (_, 0) => h.u,
        (0, _) => h.v,
        (1, 1) => h.w,
        _ => log_slope_trace(h, s).exp(),
    }
}

/// `2 arccosh(e^{lt} / 2)` without overflow.
pub fn length_from_log_trace(lt: f64) -> f64 {
    if lt < 30.0 {
        2.0 * (lt.exp() / 2.0).acosh()
    } else {
        2.0 * (lt - LN_2 + (1.0 + (1.0 - 4.0 * (-2.0 * lt).exp()).sqrt()).ln())
    }
}

pub fn curve_length(h: &TraceCoords, s: Slope) -> Result<f64> {
    let lt = log_slope_trace(h, s);
    if !(lt > LN_2) {
        return Err(Error::DegenerateStructure(lt.exp()));
    }
    Ok(length_from_log_trace(lt))
}

fn ln_sinh(x: f64) -> f64 {
    if x < 20.0 {
        x.sinh().ln()
    } else {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    }
}

fn asinh_exp(ly: f64) -> f64 {
    if ly < 20.0 {
        ly.exp().asinh()
    } else {
        ly + (1.0 + (1.0 + (-2.0 * ly).exp()).sqrt()).ln()
    }
}

/// Length of the simple orthogeodesic arc disjoint from a curve with trace
/// `e^{lt}` on a torus with boundary length `b`.
///
/// Cutting along the curve leaves a pair of pants with cuffs `(ℓ, ℓ, b)`;
/// the arc crosses the seam joining the two `ℓ` cuffs at right angles and is
/// twice the perpendicular of a right-angled pentagon:
/// `sinh(arc / 2) = cosh(ℓ / 2) / sinh(b / 4)`.
pub fn arc_length_from_log_trace(lt: f64, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::CuspBoundary);
    }
    let ly = lt - LN_2 - ln_sinh(b / 4.0);
    Ok(2.0 * asinh_exp(ly))
}

/// Pants closed form in terms of the curve length.
pub fn pants_arc_length(curve: f64, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::CuspBoundary);
    }
    Ok(2.0 * ((curve / 2.0).cosh() / (b / 4.0).sinh()).asinh())
}

/// Length of the orthogeodesic arc dual to `s`, computed in the holonomy
/// group: after a change of basis making `s` the first generator `A`, the
/// arc is the common perpendicular of the axis of the boundary commutator
/// `C = [A, B]` and its translate by `A`.
pub fn arc_length(h: &TraceCoords, s: Slope) -> Result<f64> {
    if boundary_length(h) == 0.0 {
        return Err(Error::CuspBoundary);
    }
    let coords = h.in_basis(s.vector(), s.basis_partner())?;
    let (a, b) = holonomy_matrices(&coords)?;
    let c = a.commutator(&b);
    let axis = c.axis()?;
    let moved = Geodesic::new(a.apply_boundary(axis.start()), a.apply_boundary(axis.end()))?;
    common_perpendicular_length(&axis, &moved)
}

/// One entry of a Stern–Brocot traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub slope: Slope,
    /// Tree level; `None` for the base slopes `(1,0)` and `(0,1)`.
    pub level: Option<u32>,
    pub log_trace: f64,
}

/// Slopes `(1,0)`, `(0,1)` and every Stern–Brocot mediant of level
/// `0..=depth` in both sign branches: `2 + 2 (2^{depth+1} - 1)` slopes.
/// Order: base slopes, then level by level, positive branch before negative,
/// each branch left to right.
pub fn enumerate_slopes(depth: u32) -> Vec<Slope> {
    traverse(None, depth).into_iter().map(|e| e.slope).collect()
}

/// Log-traces of every slope of [`enumerate_slopes`], in the same order.
/// Each mediant reuses its parents' traces, so the cost is one update per
/// slope.
pub fn log_trace_spectrum(h: &TraceCoords, depth: u32) -> Vec<SpectrumEntry> {
    traverse(Some(h), depth)
}

#[derive(Clone, Copy)]
struct Node {
    l: (i64, i64),
    r: (i64, i64),
    ll: f64,
    lr: f64,
    ld: f64,
}

fn traverse(h: Option<&TraceCoords>, depth: u32) -> Vec<SpectrumEntry> {
    let (lu, lv, lpos, lneg) = match h {
        Some(h) => (h.u.ln(), h.v.ln(), (h.u * h.v - h.w).ln(), h.w.ln()),
        None => (0.0, 0.0, 0.0, 0.0),
    };
    let total = 2 + 2 * ((1usize << (depth + 1)) - 1);
    let mut out = Vec::with_capacity(total);
    out.push(SpectrumEntry {
        slope: Slope { p: 1, q: 0 },
        level: None,
        log_trace: lu,
    });
    out.push(SpectrumEntry {
        slope: Slope { p: 0, q: 1 },
        level: None,
        log_trace: lv,
    });
    let root = |ld| Node {
        l: (1, 0),
        r: (0, 1),
        ll: lu,
        lr: lv,
        ld,
    };
    let mut branches = [vec![root(lpos)], vec![root(lneg)]];
    for level in 0..=depth {
        for (bi, nodes) in branches.iter_mut().enumerate() {
            let sign = if bi == 0 { 1 } else { -1 };
            let mut next = Vec::with_capacity(nodes.len() * 2);
            for n in nodes.iter() {
                let m = (n.l.0 + n.r.0, n.l.1 + n.r.1);
                let lm = if h.is_some() {
                    log_mediant(n.ll, n.lr, n.ld)
                } else {
                    0.0
                };
                out.push(SpectrumEntry {
                    slope: Slope {
                        p: sign * m.0,
                        q: m.1,
                    },
                    level: Some(level),
                    log_trace: lm,
                });
                if level < depth {
                    next.push(Node {
                        l: n.l,
                        r: m,
                        ll: n.ll,
                        lr: lm,
                        ld: n.lr,
                    });
                    next.push(Node {
                        l: m,
                        r: n.r,
                        ll: lm,
                        lr: n.lr,
                        ld: n.ll,
                    });
                }
            }
            *nodes = next;
        }
    }
    out
}

/// Fenchel–Nielsen data relative to the slope `(0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FNCoords {
    /// Length of the `(0,1)` curve.
    pub length: f64,
    /// Twist along the `(0,1)` curve, in length units.
    pub twist: f64,
    /// Boundary length.
    pub boundary: f64,
}

impl FNCoords {
    pub fn new(length: f64, twist: f64, boundary: f64) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidFenchelNielsen("length must be positive"));
        }
        if !(boundary >= 0.0) || !boundary.is_finite() {
            return Err(Error::InvalidFenchelNielsen(
                "boundary must be non-negative",
            ));
        }
        if !twist.is_finite() {
            return Err(Error::InvalidFenchelNielsen("twist must be finite"));
        }
        Ok(Self {
            length,
            twist,
            boundary,
        })
    }
}

/// `cosh(s₀ / 2)` for the seam `s₀` joining the two copies of the cut curve
/// in the pants `(ℓ, ℓ, b)`.
fn seam_half_cosh(cosh_half_len: f64, cosh_half_b: f64) -> f64 {
    let c2 = cosh_half_len * cosh_half_len;
    let s2 = c2 - 1.0;
    ((s2 + cosh_half_b + c2) / (2.0 * s2)).sqrt()
}

/// The dual curve closes up the seam with a displacement `τ` along the cut
/// curve, so `u = 2 cosh(s₀/2) cosh(τ/2)` and `w = 2 cosh(s₀/2) cosh((τ+ℓ)/2)`.
pub fn from_fenchel_nielsen(fnc: &FNCoords) -> Result<TraceCoords> {
    let FNCoords {
        length,
        twist,
        boundary,
    } = *fnc;
    let c = (length / 2.0).cosh();
    let seam = seam_half_cosh(c, (boundary / 2.0).cosh());
    let u = 2.0 * seam * (twist / 2.0).cosh();
    let v = 2.0 * c;
    let w = 2.0 * seam * ((twist + length) / 2.0).cosh();
    TraceCoords::new(u, v, w)
}

/// [`from_fenchel_nielsen`] read in the basis `(e1, e2)` with
/// `det(e1, e2) = 1`, expressed in the standard basis.
///
/// Equivalent to `from_fenchel_nielsen(fnc)?.from_basis(e1, e2)`, but the
/// trace of `(1,-1)` comes from its closed form `2 cosh(s₀/2) cosh((τ-ℓ)/2)`
/// instead of the cancellation-prone `uv - w`.
pub fn from_fenchel_nielsen_in_basis(
    fnc: &FNCoords,
    e1: (i64, i64),
    e2: (i64, i64),
) -> Result<TraceCoords> {
    if e1.0 * e2.1 - e1.1 * e2.0 != 1 {
        return Err(Error::InvalidArgument(format!(
            "basis {e1:?}, {e2:?} must have determinant 1"
        )));
    }
    let h = from_fenchel_nielsen(fnc)?;
    let c = (fnc.length / 2.0).cosh();
    let seam = seam_half_cosh(c, (fnc.boundary / 2.0).cosh());
    let logs = LogTraces {
        x: (2.0 * seam * ((fnc.twist - fnc.length) / 2.0).cosh()).ln(),
        ..LogTraces::of(&h)
    };
    let a = (e2.1, -e1.1);
    let b = (-e2.0, e1.0);
    let t = |v: (i64, i64)| log_trace_from(&logs, Slope::canonical(v.0, v.1)).exp();
    TraceCoords::new(t(a), t(b), t((a.0 + b.0, a.1 + b.1)))
}

pub fn to_fenchel_nielsen(h: &TraceCoords) -> FNCoords {
    let c = h.v / 2.0;
    let length = 2.0 * c.acosh();
    let boundary = boundary_length(h);
    let seam = seam_half_cosh(c, (-h.kappa() / 2.0).max(1.0));
    let sinh_half = ((c - 1.0) * (c + 1.0)).sqrt();
    // w - (uv - w) = 4 cosh(s₀/2) sinh(τ/2) sinh(ℓ/2)
    let twist = 2.0 * ((2.0 * h.w - h.u * h.v) / (4.0 * seam * sinh_half)).asinh();
    FNCoords {
        length,
        twist,
        boundary,
    }
}

/// The torus obtained by doubling the right-angled hexagon with alternate
/// sides `2 arccosh(X⁴)`, `arcsinh(X^e)`, `arcsinh(X^e)` (`e = 2` for variant
/// 0, `e = 3` for variant 1) and gluing the equal cuffs without twist. The
/// glued cuff is the slope `(0,1)`.
pub fn from_doubled_hexagons(x: f64, variant: u8) -> Result<TraceCoords> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::InvalidHexagonParameter(x));
    }
    let e = match variant {
        0 => 2,
        1 => 3,
        _ => return Err(Error::InvalidArgument(format!("hexagon variant {variant}"))),
    };
    let length = 2.0 * x.powi(e).asinh();
    let boundary = 4.0 * x.powi(4).acosh();
    from_fenchel_nielsen(&FNCoords::new(length, 0.0, boundary)?)
}

/// `|p| ℓa + |q| ℓb`, the length estimate on a thin torus.
pub fn thin_length_approx(s: Slope, la: f64, lb: f64) -> f64 {
    s.p.unsigned_abs() as f64 * la + s.q.unsigned_abs() as f64 * lb
}

/// Text form of a structure: `trace:u,v,w`, `fn:l,tau,b` or `hex:X,variant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StructureLiteral {
    Trace(f64, f64, f64),
    FenchelNielsen(f64, f64, f64),
    Hexagon(f64, u8),
}

impl StructureLiteral {
    pub fn resolve(&self) -> Result<TraceCoords> {
        match *self {
            StructureLiteral::Trace(u, v, w) => TraceCoords::new(u, v, w),
            StructureLiteral::FenchelNielsen(l, t, b) => {
                from_fenchel_nielsen(&FNCoords::new(l, t, b)?)
            }
            StructureLiteral::Hexagon(x, variant) => from_doubled_hexagons(x, variant),
        }
    }
}

impl From<TraceCoords> for StructureLiteral {
    fn from(h: TraceCoords) -> Self {
        StructureLiteral::Trace(h.u, h.v, h.w)
    }
}

impl FromStr for StructureLiteral {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::ParseLiteral(s.to_string());
        let (kind, rest) = s.trim().split_once(':').ok_or_else(err)?;
        let nums: Vec<&str> = rest.split(',').map(str::trim).collect();
        let f = |i: usize| -> Result<f64> {
            nums.get(i)
                .and_then(|x| x.parse::<f64>().ok())
                .ok_or_else(err)
        };
        match (kind.trim(), nums.len()) {
            ("trace", 3) => Ok(StructureLiteral::Trace(f(0)?, f(1)?, f(2)?)),
            ("fn", 3) => Ok(StructureLiteral::FenchelNielsen(f(0)?, f(1)?, f(2)?)),
            ("hex", 2) => {
                let variant = nums[1].parse::<u8>().map_err(|_| err())?;
                Ok(StructureLiteral::Hexagon(f(0)?, variant))
            }
            _ => Err(err()),
        }
    }
}

impl fmt::Display for StructureLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureLiteral::Trace(u, v, w) => write!(f, "trace:{u:?},{v:?},{w:?}"),
            StructureLiteral::FenchelNielsen(l, t, b) => write!(f, "fn:{l:?},{t:?},{b:?}"),
            StructureLiteral::Hexagon(x, v) => write!(f, "hex:{x:?},{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp2::translation_length;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn sample() -> TraceCoords {
        from_fenchel_nielsen(&FNCoords::new(1.3, 0.4, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn slope_canonicalisation() {
        assert_eq!(Slope::new(-2, -3).unwrap(), Slope::new(2, 3).unwrap());
        assert_eq!(Slope::new(-1, 0).unwrap().vector(), (1, 0));
        assert!(Slope::new(2, 4).is_err());
        assert!(Slope::new(0, 0).is_err());
        assert_eq!("(3,-5)".parse::<Slope>().unwrap().vector(), (-3, 5));
    }

    #[test]
    fn basis_partner_is_unimodular() {
        for s in enumerate_slopes(5) {
            let (p, q) = s.vector();
            let (r, t) = s.basis_partner();
            assert_eq!(p * t - q * r, 1, "{s}");
        }
    }

    #[test]
    fn construction_gate() {
        assert!(TraceCoords::new(3.0, 3.0, 3.0).is_ok());
        assert!(TraceCoords::new(2.0, 3.0, 3.0).is_err());
        // κ = 4 + 4 + 4 - 8.5·... > -2: not a one-holed torus
        assert!(TraceCoords::new(2.1, 2.1, 2.1).is_err());
    }

    #[test]
    fn cusped_square_torus() {
        let h = TraceCoords::new(3.0, 3.0, 3.0).unwrap();
        assert_eq!(h.kappa(), -2.0);
        assert_eq!(h.boundary_length(), 0.0);
        let (a, b) = holonomy_matrices(&h).unwrap();
        assert_abs_diff_eq!(a.commutator(&b).trace(), -2.0, epsilon = 1e-12);
        assert!(matches!(
            arc_length(&h, Slope::new(1, 0).unwrap()),
            Err(Error::CuspBoundary)
        ));
    }

    #[test]
    fn boundary_matches_commutator_matrix() {
        for (l, t, b) in [(1.3, 0.4, 1.0), (0.7, -2.0, 3.0), (2.5, 0.1, 0.2)] {
            let h = from_fenchel_nielsen(&FNCoords::new(l, t, b).unwrap()).unwrap();
            let (a, bm) = holonomy_matrices(&h).unwrap();
            let c = Isometry::from_matrix(a.commutator(&bm)).unwrap();
            assert_abs_diff_eq!(
                translation_length(&c).unwrap(),
                h.boundary_length(),
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(h.boundary_length(), b, epsilon = 1e-9);
        }
    }

    #[test]
    fn holonomy_traces() {
        let h = sample();
        let (a, b) = holonomy_matrices(&h).unwrap();
        assert_abs_diff_eq!(a.trace(), h.u(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.trace(), h.v(), epsilon = 1e-12);
        assert_abs_diff_eq!(a.mul(&b).trace(), h.w(), epsilon = 1e-10);
        assert_abs_diff_eq!(a.det(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.det(), 1.0, epsilon = 1e-12);
        // Cayley–Hamilton: tr A tr B = tr AB + tr AB⁻¹
        let lhs = a.trace() * b.trace();
        let rhs = a.mul(&b).trace() + a.mul(&b.inverse()).trace();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
    }

    #[test]
    fn slope_trace_base_cases() {
        let h = sample();
        assert_eq!(h.slope_trace(Slope::new(1, 0).unwrap()), h.u());
        assert_eq!(h.slope_trace(Slope::new(0, 1).unwrap()), h.v());
        assert_eq!(h.slope_trace(Slope::new(1, 1).unwrap()), h.w());
        let (a, b) = holonomy_matrices(&h).unwrap();
        let t21 = h.slope_trace(Slope::new(2, 1).unwrap());
        assert_relative_eq!(t21, h.u() * h.w() - h.v(), max_relative = 1e-12);
        assert_relative_eq!(t21, a.mul(&a.mul(&b)).trace(), max_relative = 1e-10);
        let tm = h.slope_trace(Slope::new(-1, 1).unwrap());
        assert_relative_eq!(tm, a.inverse().mul(&b).trace(), max_relative = 1e-10);
    }

    #[test]
    fn spectrum_matches_single_descent() {
        let h = sample();
        for e in log_trace_spectrum(&h, 6) {
            assert_relative_eq!(
                e.log_trace,
                log_slope_trace(&h, e.slope),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn enumeration_sizes() {
        let d0: Vec<_> = enumerate_slopes(0).iter().map(|s| s.vector()).collect();
        assert_eq!(d0, vec![(1, 0), (0, 1), (1, 1), (-1, 1)]);
        let d1: Vec<_> = enumerate_slopes(1).iter().map(|s| s.vector()).collect();
        assert_eq!(&d1[4..], &[(2, 1), (1, 2), (-2, 1), (-1, 2)]);
        for depth in 0..8u32 {
            let slopes = enumerate_slopes(depth);
            // combinatorial oracle: two branches with 2^level mediants each
            let expected = 2 + 2 * (0..=depth).map(|l| 1usize << l).sum::<usize>();
            assert_eq!(slopes.len(), expected);
            let mut dedup = slopes.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), slopes.len());
        }
    }

    #[test]
    fn enumeration_covers_small_slopes() {
        // every primitive (p,q) with |p| + q <= depth + 2 appears
        let depth = 6;
        let set: std::collections::HashSet<_> = enumerate_slopes(depth).into_iter().collect();
        for p in -8i64..=8 {
            for q in 0i64..=8 {
                if p.abs() + q <= depth as i64 + 2 && gcd(p, q) == 1 {
                    assert!(set.contains(&Slope::new(p, q).unwrap()), "({p},{q})");
                }
            }
        }
    }

    #[test]
    fn hexagon_tori_closed_forms() {
        for x in [2.0f64, 5.0, 10.0, 50.0] {
            let t0 = from_doubled_hexagons(x, 0).unwrap();
            let t1 = from_doubled_hexagons(x, 1).unwrap();
            let b = 4.0 * x.powi(4).acosh();
            let a = Slope::new(1, 0).unwrap();
            let g = Slope::new(0, 1).unwrap();
            assert_relative_eq!(t0.boundary_length(), b, max_relative = 1e-9);
            assert_relative_eq!(t1.boundary_length(), b, max_relative = 1e-9);
            assert_relative_eq!(
                t0.curve_length(a).unwrap(),
                2.0 * (x * x).asinh(),
                max_relative = 1e-9
            );
            assert_relative_eq!(
                t0.curve_length(g).unwrap(),
                2.0 * (x * x).asinh(),
                max_relative = 1e-9
            );
            assert_relative_eq!(
                t1.curve_length(a).unwrap(),
                2.0 * x.asinh(),
                max_relative = 1e-9
            );
            assert_relative_eq!(
                t1.curve_length(g).unwrap(),
                2.0 * x.powi(3).asinh(),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn arc_lengths_agree_with_pants_formula() {
        for (l, t, b) in [(1.3, 0.4, 1.0), (0.7, -0.3, 3.0), (2.0, 1.1, 0.5)] {
            let h = from_fenchel_nielsen(&FNCoords::new(l, t, b).unwrap()).unwrap();
            for s in enumerate_slopes(2) {
                let via_group = arc_length(&h, s).unwrap();
                let closed =
                    pants_arc_length(h.curve_length(s).unwrap(), h.boundary_length()).unwrap();
                assert_relative_eq!(via_group, closed, max_relative = 1e-8);
                let logged =
                    arc_length_from_log_trace(log_slope_trace(&h, s), h.boundary_length()).unwrap();
                assert_relative_eq!(logged, closed, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn hexagon_torus_arcs() {
        // cosh(arcsinh X^e) = √(X^{2e}+1) and sinh(arccosh X⁴) = √(X⁸-1) in
        // the pants formula; each arc is twice the perpendicular from the
        // boundary side to the opposite seam of one hexagon
        for x in [2.0f64, 5.0, 10.0] {
            let h0 = from_doubled_hexagons(x, 0).unwrap();
            let h1 = from_doubled_hexagons(x, 1).unwrap();
            let g = Slope::new(0, 1).unwrap();
            let half0 = (1.0 / (x.powi(4) - 1.0).sqrt()).asinh();
            let half1 = ((x.powi(6) + 1.0).sqrt() / (x.powi(8) - 1.0).sqrt()).asinh();
            assert_relative_eq!(
                arc_length(&h0, g).unwrap(),
                2.0 * half0,
                max_relative = 1e-8
            );
            assert_relative_eq!(
                arc_length(&h1, g).unwrap(),
                2.0 * half1,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn square_torus_arc_symmetry() {
        let sq = square_torus(1.0);
        assert_abs_diff_eq!(sq.u(), sq.v(), epsilon = 1e-12);
        let a = arc_length(&sq, Slope::new(1, 0).unwrap()).unwrap();
        let b = arc_length(&sq, Slope::new(0, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
    }

    /// Twist-free structure with `ℓ(1,0) = ℓ(0,1)`, found by bisection.
    fn square_torus(b: f64) -> TraceCoords {
        let f = |l: f64| {
            let h = from_fenchel_nielsen(&FNCoords::new(l, 0.0, b).unwrap()).unwrap();
            h.u() - h.v()
        };
        let (mut lo, mut hi) = (0.1, 5.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        from_fenchel_nielsen(&FNCoords::new(0.5 * (lo + hi), 0.0, b).unwrap()).unwrap()
    }

    #[test]
    fn fenchel_nielsen_round_trip() {
        for (l, t, b) in [
            (1.3, 0.4, 1.0),
            (0.7, -2.0, 3.0),
            (2.5, 0.1, 0.2),
            (0.4, 0.0, 0.0),
        ] {
            let fnc = FNCoords::new(l, t, b).unwrap();
            let back = to_fenchel_nielsen(&from_fenchel_nielsen(&fnc).unwrap());
            assert_abs_diff_eq!(back.length, l, epsilon = 1e-9);
            assert_abs_diff_eq!(back.twist, t, epsilon = 1e-9);
            assert_abs_diff_eq!(back.boundary, b, epsilon = 1e-7);
        }
    }

    #[test]
    fn zero_twist_minimises_dual_curve() {
        let u = |t: f64| {
            from_fenchel_nielsen(&FNCoords::new(1.1, t, 0.8).unwrap())
                .unwrap()
                .u()
        };
        for t in [-1.0, -0.1, 0.05, 0.7] {
            assert!(u(t) > u(0.0));
        }
    }

    #[test]
    fn full_twist_is_a_dehn_twist() {
        let (l, t, b) = (1.2, 0.3, 0.9);
        let h = from_fenchel_nielsen(&FNCoords::new(l, t, b).unwrap()).unwrap();
        let g = from_fenchel_nielsen(&FNCoords::new(l, t + l, b).unwrap()).unwrap();
        assert_abs_diff_eq!(g.boundary_length(), h.boundary_length(), epsilon = 1e-9);
        for s in enumerate_slopes(4) {
            // the twist acts on slopes by (p, q) -> (p, q + p)
            let (p, q) = s.vector();
            let image = Slope::new(p, q + p).unwrap();
            assert_relative_eq!(
                g.curve_length(s).unwrap(),
                h.curve_length(image).unwrap(),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn basis_change_round_trip() {
        // the inverse change recovers short traces from long ones, losing
        // roughly the ratio of their sizes in relative precision
        let h = sample();
        for s in enumerate_slopes(3) {
            let r = s.basis_partner();
            let e1 = (-r.0, -r.1);
            let e2 = s.vector();
            let other = h.in_basis(e1, e2).unwrap();
            assert_relative_eq!(other.v(), h.slope_trace(s), max_relative = 1e-12);
            let back = other.from_basis(e1, e2).unwrap();
            assert_relative_eq!(back.u(), h.u(), max_relative = 1e-7);
            assert_relative_eq!(back.v(), h.v(), max_relative = 1e-7);
            assert_relative_eq!(back.w(), h.w(), max_relative = 1e-7);
        }
    }

    #[test]
    fn markov_moves_preserve_kappa() {
        let h = sample();
        let (u, v, w) = (h.u(), h.v(), h.w());
        let k = h.kappa();
        assert_relative_eq!(kappa(v, u, u * v - w), k, max_relative = 1e-12);
        assert_relative_eq!(kappa(u, w, u * w - v), k, max_relative = 1e-12);
    }

    #[test]
    fn thin_length_basics() {
        let s10 = Slope::new(1, 0).unwrap();
        let s11 = Slope::new(1, 1).unwrap();
        assert_eq!(thin_length_approx(s10, 2.0, 3.0), 2.0);
        assert_eq!(thin_length_approx(s11, 2.0, 3.0), 5.0);
    }

    #[test]
    fn literals() {
        let l: StructureLiteral = "hex:10,1".parse().unwrap();
        assert_eq!(l, StructureLiteral::Hexagon(10.0, 1));
        let l: StructureLiteral = "fn:1.5,0.25,1".parse().unwrap();
        assert!(l.resolve().is_ok());
        let l: StructureLiteral = "trace:3,3,3".parse().unwrap();
        assert_eq!(l.to_string().parse::<StructureLiteral>().unwrap(), l);
        assert!("trace:3,3".parse::<StructureLiteral>().is_err());
        assert!("foo:1,2,3".parse::<StructureLiteral>().is_err());
        assert!("hex:0.5,0"
            .parse::<StructureLiteral>()
            .unwrap()
            .resolve()
            .is_err());
    }
}
