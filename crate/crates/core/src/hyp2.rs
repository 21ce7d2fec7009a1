//! Upper half-plane hyperbolic geometry.
//!
//! Points are `re + i·im` with `im > 0`. Isometries are `PSL(2, R)` elements
//! stored as determinant-one matrices with a sign convention (`trace >= 0`);
//! the raw lift [`Sl2`] is kept separately because holonomy computations need
//! the sign of the trace.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance for algebraic identities.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    re: f64,
    im: f64,
}

impl HyperbolicPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() && im > 0.0 {
            Ok(Self { re, im })
        } else {
            Err(Error::InvalidPoint { re, im })
        }
    }

    /// The point `i`.
    pub fn i() -> Self {
        Self { re: 0.0, im: 1.0 }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    /// Reflection `z -> -conj(z)` across the imaginary axis.
    pub fn reflect(&self) -> Self {
        Self {
            re: -self.re,
            im: self.im,
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        hyp_distance(self, other)
    }
}

/// A point of the ideal boundary `R ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(self) -> Option<f64> {
        match self {
            BoundaryPoint::Finite(x) => Some(x),
            BoundaryPoint::Infinity => None,
        }
    }
}

/// A raw `SL(2, R)` matrix `(a b; c d)`, no sign normalisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sl2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse assuming determinant one.
    pub fn inverse(&self) -> Sl2 {
        Sl2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn scale(&self, s: f64) -> Sl2 {
        Sl2 {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.a
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max(self.d.abs())
    }

    /// Commutator `x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, other: &Sl2) -> Sl2 {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    /// Möbius action on a boundary point.
    pub fn apply_boundary(&self, x: BoundaryPoint) -> BoundaryPoint {
        match x {
            BoundaryPoint::Infinity => {
                if self.c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * x + self.b) / den)
                }
            }
        }
    }

    /// Fixed points of a hyperbolic element: the endpoints of its axis.
    pub fn axis(&self) -> Result<Geodesic> {
        let tr = self.trace();
        if tr.abs() <= 2.0 {
            return Err(Error::NonHyperbolic { trace: tr.abs() });
        }
        let disc = ((tr - 2.0) * (tr + 2.0)).sqrt();
        // c z^2 + (d - a) z - b = 0
        let qa = self.c;
        let qb = self.d - self.a;
        let qc = -self.b;
        if qa == 0.0 {
            return Geodesic::new(
                BoundaryPoint::Finite(self.b / (self.d - self.a)),
                BoundaryPoint::Infinity,
            );
        }
        let sign = if qb >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (qb + sign * disc);
        let r1 = q / qa;
        let r2 = if q == 0.0 { -r1 } else { qc / q };
        Geodesic::new(BoundaryPoint::Finite(r1), BoundaryPoint::Finite(r2))
    }
}

/// An orientation-preserving isometry of the upper half-plane.
///
/// The matrix is rescaled to determinant one and its sign is chosen so that
/// the trace is non-negative (first nonzero entry positive when the trace
/// vanishes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    m: Sl2,
}

impl Isometry {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::from_matrix(Sl2::new(a, b, c, d))
    }

    pub fn from_matrix(m: Sl2) -> Result<Self> {
        let det = m.det();
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::SingularMatrix { det });
        }
        let mut m = m.scale(1.0 / det.sqrt());
        let tr = m.trace();
        let flip = if tr != 0.0 {
            tr < 0.0
        } else {
            let first = [m.a, m.b, m.c, m.d]
                .into_iter()
                .find(|x| *x != 0.0)
                .unwrap_or(1.0);
            first < 0.0
        };
        if flip {
            m = m.scale(-1.0);
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: Sl2::IDENTITY }
    }

    /// `z -> z + x`.
    pub fn translation(x: f64) -> Self {
        Self {
            m: Sl2::new(1.0, x, 0.0, 1.0),
        }
    }

    /// `z -> λ z` for `λ > 0`.
    pub fn dilation(lambda: f64) -> Result<Self> {
        let s = lambda.sqrt();
        Self::new(s, 0.0, 0.0, 1.0 / s)
    }

    /// Hyperbolic translation of length `t` along the imaginary axis.
    pub fn along_imaginary_axis(t: f64) -> Self {
        Self {
            m: Sl2::new((t / 2.0).exp(), 0.0, 0.0, (-t / 2.0).exp()),
        }
    }

    pub fn matrix(&self) -> Sl2 {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry::from_matrix(self.m.mul(&other.m)).unwrap_or(Isometry {
            m: self.m.mul(&other.m),
        })
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            m: self.m.inverse(),
        }
    }

    pub fn apply(&self, p: &HyperbolicPoint) -> Result<HyperbolicPoint> {
        apply_isometry(self, p)
    }

    pub fn apply_boundary(&self, x: BoundaryPoint) -> BoundaryPoint {
        self.m.apply_boundary(x)
    }

    pub fn apply_geodesic(&self, g: &Geodesic) -> Result<Geodesic> {
        Geodesic::new(self.apply_boundary(g.start), self.apply_boundary(g.end))
    }

    pub fn translation_length(&self) -> Result<f64> {
        translation_length(self)
    }

    pub fn axis(&self) -> Result<Geodesic> {
        self.m.axis()
    }
}

/// A complete geodesic given by two distinct ideal endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    start: BoundaryPoint,
    end: BoundaryPoint,
}

impl Geodesic {
    pub fn new(start: BoundaryPoint, end: BoundaryPoint) -> Result<Self> {
        if start == end {
            return Err(Error::DegenerateGeodesic);
        }
        if let BoundaryPoint::Finite(x) = start {
            if !x.is_finite() {
                return Err(Error::DegenerateGeodesic);
            }
        }
        if let BoundaryPoint::Finite(x) = end {
            if !x.is_finite() {
                return Err(Error::DegenerateGeodesic);
            }
        }
        Ok(Self { start, end })
    }

    pub fn finite(a: f64, b: f64) -> Result<Self> {
        Self::new(BoundaryPoint::Finite(a), BoundaryPoint::Finite(b))
    }

    pub fn start(&self) -> BoundaryPoint {
        self.start
    }

    pub fn end(&self) -> BoundaryPoint {
        self.end
    }

    /// Euclidean centre and radius when the geodesic is a half-circle.
    pub fn circle(&self) -> Option<(f64, f64)> {
        match (self.start, self.end) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => {
                Some(((a + b) / 2.0, (a - b).abs() / 2.0))
            }
            _ => None,
        }
    }

    /// Signed side of `p`: positive outside the half-circle (or right of a
    /// vertical line), negative inside (or left), zero on the geodesic.
    pub fn side(&self, p: &HyperbolicPoint) -> f64 {
        match (self.start, self.end) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => {
                let c = (a + b) / 2.0;
                let r = (a - b).abs() / 2.0;
                let dx = p.re - c;
                (dx * dx + p.im * p.im).sqrt() - r
            }
            (BoundaryPoint::Finite(x), BoundaryPoint::Infinity)
            | (BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => p.re - x,
            _ => unreachable!("endpoints are distinct"),
        }
    }
}

/// A horocycle. `size` is the Euclidean diameter for a finite centre and the
/// height for the centre at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Horocycle {
    center: BoundaryPoint,
    size: f64,
}

impl Horocycle {
    pub fn new(center: BoundaryPoint, size: f64) -> Result<Self> {
        if size > 0.0 && size.is_finite() {
            Ok(Self { center, size })
        } else {
            Err(Error::InvalidHorocycle(size))
        }
    }

    pub fn center(&self) -> BoundaryPoint {
        self.center
    }

    pub fn size(&self) -> f64 {
        self.size
    }

    /// Whether `p` lies in the closed horoball bounded by this horocycle.
    pub fn contains(&self, p: &HyperbolicPoint) -> bool {
        match self.center {
            BoundaryPoint::Infinity => p.im >= self.size,
            BoundaryPoint::Finite(x) => {
                let r = self.size / 2.0;
                let dx = p.re - x;
                let dy = p.im - r;
                dx * dx + dy * dy <= r * r
            }
        }
    }

    /// Whether `p` lies on the horocycle, to `tol` in Euclidean terms.
    pub fn passes_through(&self, p: &HyperbolicPoint, tol: f64) -> bool {
        match self.center {
            BoundaryPoint::Infinity => (p.im - self.size).abs() <= tol,
            BoundaryPoint::Finite(x) => {
                let r = self.size / 2.0;
                let dx = p.re - x;
                let dy = p.im - r;
                ((dx * dx + dy * dy).sqrt() - r).abs() <= tol
            }
        }
    }
}

/// Hyperbolic distance, `cosh d = 1 + |p - q|² / (2 Im p Im q)`.
///
/// Evaluated as `2 asinh(|p - q| / (2 sqrt(Im p Im q)))`, which keeps full
/// relative precision for nearby points.
pub fn hyp_distance(p: &HyperbolicPoint, q: &HyperbolicPoint) -> f64 {
    let dx = p.re - q.re;
    let dy = p.im - q.im;
    let chord = (dx * dx + dy * dy).sqrt();
    2.0 * (chord / (2.0 * (p.im * q.im).sqrt())).asinh()
}

pub fn apply_isometry(m: &Isometry, p: &HyperbolicPoint) -> Result<HyperbolicPoint> {
    let Sl2 { a, b, c, d } = m.m;
    let (x, y) = (p.re, p.im);
    let den_re = c * x + d;
    let den_im = c * y;
    let den = den_re * den_re + den_im * den_im;
    let re = (a * c * (x * x + y * y) + (a * d + b * c) * x + b * d) / den;
    let im = m.m.det() * y / den;
    HyperbolicPoint::new(re, im).map_err(|_| Error::IllConditioned)
}

/// `2 arccosh(|tr M| / 2)`.
pub fn translation_length(m: &Isometry) -> Result<f64> {
    let tr = m.trace().abs();
    if tr <= 2.0 {
        return Err(Error::NonHyperbolic { trace: tr });
    }
    Ok(2.0 * (tr / 2.0).acosh())
}

fn to_finite_frame(pts: [BoundaryPoint; 4]) -> [f64; 4] {
    if pts.iter().all(|p| matches!(p, BoundaryPoint::Finite(_))) {
        return pts.map(|p| p.finite().unwrap());
    }
    // z -> 1 / (m - z) sends every point, including ∞, to a finite one.
    let m = pts
        .iter()
        .filter_map(|p| p.finite())
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0)
        + 1.0;
    pts.map(|p| match p {
        BoundaryPoint::Infinity => 0.0,
        BoundaryPoint::Finite(x) => 1.0 / (m - x),
    })
}

/// Distance between two disjoint, non-asymptotic geodesics.
///
/// With `r = (a-c)(b-d) / ((a-d)(b-c))` labelled so that `0 < r < 1`, the
/// distance satisfies `tanh²(δ/2) = r`.
pub fn common_perpendicular_length(g1: &Geodesic, g2: &Geodesic) -> Result<f64> {
    let [a, b, c, d] = to_finite_frame([g1.start, g1.end, g2.start, g2.end]);
    if a == c || a == d || b == c || b == d {
        return Err(Error::NoCommonPerpendicular("asymptotic"));
    }
    let (mut c, mut d) = (c, d);
    let mut r = (a - c) * (b - d) / ((a - d) * (b - c));
    if !r.is_finite() {
        return Err(Error::NoCommonPerpendicular("degenerate"));
    }
    if r < 0.0 {
        return Err(Error::NoCommonPerpendicular("crossing"));
    }
    if r > 1.0 {
        std::mem::swap(&mut c, &mut d);
        r = (a - c) * (b - d) / ((a - d) * (b - c));
    }
    let one_minus_r = (a - b) * (d - c) / ((a - d) * (b - c));
    if !(one_minus_r > 0.0) {
        return Err(Error::NoCommonPerpendicular("asymptotic"));
    }
    let sr = r.sqrt();
    Ok(((1.0 + sr) * (1.0 + sr) / one_minus_r).ln())
}

/// Side `b3` of the right-angled hexagon with alternate sides `a1, a2, a3`,
/// lying between `a1` and `a2`:
/// `cosh a3 = sinh a1 sinh a2 cosh b3 - cosh a1 cosh a2`.
pub fn hexagon_side(a1: f64, a2: f64, a3: f64) -> Result<f64> {
    let valid = |x: f64| x > 0.0 && x.is_finite();
    if !(valid(a1) && valid(a2) && valid(a3)) {
        return Err(Error::NoHexagon(a1, a2, a3));
    }
    // cosh b3 - 1 = (cosh a3 + cosh(a1 - a2)) / (sinh a1 sinh a2)
    let excess = (a3.cosh() + (a1 - a2).cosh()) / (a1.sinh() * a2.sinh());
    if !(excess >= 0.0) || !excess.is_finite() {
        return Err(Error::NoHexagon(a1, a2, a3));
    }
    Ok(2.0 * (excess / 2.0).sqrt().asinh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(re: f64, im: f64) -> HyperbolicPoint {
        HyperbolicPoint::new(re, im).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hyp_distance(&pt(0.0, 1.0), &pt(0.0, 1.0)), 0.0);
        assert_abs_diff_eq!(
            hyp_distance(&pt(0.0, 1.0), &pt(0.0, 2.0)),
            2f64.ln(),
            epsilon = 1e-14
        );
        let oracle = (1.0f64 + 2.0 / (2.0 * 2.0)).acosh();
        assert_abs_diff_eq!(
            hyp_distance(&pt(0.0, 1.0), &pt(1.0, 2.0)),
            oracle,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(oracle, 1.5f64.acosh(), epsilon = 1e-15);
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(HyperbolicPoint::new(0.0, -1.0).is_err());
        assert!(HyperbolicPoint::new(0.0, 0.0).is_err());
        assert!(HyperbolicPoint::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn isometry_examples() {
        let i = HyperbolicPoint::i();
        assert_eq!(Isometry::identity().apply(&i).unwrap(), i);
        let t = Isometry::translation(1.0).apply(&i).unwrap();
        assert_abs_diff_eq!(t.re(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.im(), 1.0, epsilon = 1e-15);
        let s = 2f64.sqrt();
        let d = Isometry::new(s, 0.0, 0.0, 1.0 / s)
            .unwrap()
            .apply(&i)
            .unwrap();
        assert_abs_diff_eq!(d.re(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.im(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn isometry_normalises_sign_and_determinant() {
        let m = Isometry::new(-2.0, 0.0, 0.0, -2.0).unwrap();
        assert_abs_diff_eq!(m.matrix().det(), 1.0, epsilon = 1e-15);
        assert!(m.trace() > 0.0);
        assert!(Isometry::new(1.0, 0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn translation_length_examples() {
        let m = Isometry::new(0.5f64.exp(), 0.0, 0.0, (-0.5f64).exp()).unwrap();
        assert_abs_diff_eq!(translation_length(&m).unwrap(), 1.0, epsilon = 1e-14);
        let parabolic = Isometry::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            translation_length(&parabolic),
            Err(Error::NonHyperbolic { .. })
        ));
        let t = 1.7;
        let g = Isometry::new(0.3, 2.0, -0.4, 0.7).unwrap();
        let conj = g
            .compose(&Isometry::along_imaginary_axis(t))
            .compose(&g.inverse());
        assert_abs_diff_eq!(translation_length(&conj).unwrap(), t, epsilon = 1e-12);
    }

    #[test]
    fn axis_of_diagonal_is_imaginary_axis() {
        let g = Isometry::along_imaginary_axis(1.0).axis().unwrap();
        let ends = [g.start(), g.end()];
        assert!(ends.contains(&BoundaryPoint::Infinity));
        assert!(
            ends.contains(&BoundaryPoint::Finite(0.0))
                || ends.contains(&BoundaryPoint::Finite(-0.0))
        );
    }

    #[test]
    fn perpendicular_concentric() {
        let g1 = Geodesic::finite(-1.0, 1.0).unwrap();
        let e2 = 2f64.exp();
        let g2 = Geodesic::finite(-e2, e2).unwrap();
        assert_abs_diff_eq!(
            common_perpendicular_length(&g1, &g2).unwrap(),
            2.0,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            common_perpendicular_length(&g2, &g1).unwrap(),
            2.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn perpendicular_crossing_and_asymptotic() {
        let g1 = Geodesic::finite(-1.0, 1.0).unwrap();
        let vertical = Geodesic::new(BoundaryPoint::Finite(0.0), BoundaryPoint::Infinity).unwrap();
        assert!(matches!(
            common_perpendicular_length(&g1, &vertical),
            Err(Error::NoCommonPerpendicular(_))
        ));
        let g3 = Geodesic::finite(1.0, 3.0).unwrap();
        assert!(common_perpendicular_length(&g1, &g3).is_err());
    }

    #[test]
    fn perpendicular_with_infinite_endpoint() {
        // Vertical line re = 2 and the unit half-circle: both orthogonal to
        // the circle |z - 2| = sqrt(3).
        let v = Geodesic::new(BoundaryPoint::Infinity, BoundaryPoint::Finite(2.0)).unwrap();
        let g = Geodesic::finite(-1.0, 1.0).unwrap();
        let d = common_perpendicular_length(&g, &v).unwrap();
        // After translating by -2 the perpendicular is the arc |z| = sqrt(3),
        // meeting the two geodesics at i·sqrt(3) and -3/2 + i·sqrt(3)/2.
        let s = 3f64.sqrt();
        let oracle = hyp_distance(&pt(0.0, s), &pt(-1.5, s / 2.0));
        assert_abs_diff_eq!(d, oracle, epsilon = 1e-12);
    }

    #[test]
    fn hexagon_symmetric_in_first_two() {
        let (a1, a2, a3) = (0.7, 1.9, 1.3);
        assert_abs_diff_eq!(
            hexagon_side(a1, a2, a3).unwrap(),
            hexagon_side(a2, a1, a3).unwrap(),
            epsilon = 1e-14
        );
        assert!(hexagon_side(0.0, 1.0, 1.0).is_err());
        assert!(hexagon_side(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn hexagon_defining_relation() {
        let (a1, a2, a3) = (0.9, 1.4, 2.2);
        let b3 = hexagon_side(a1, a2, a3).unwrap();
        let lhs = a3.cosh();
        let rhs = a1.sinh() * a2.sinh() * b3.cosh() - a1.cosh() * a2.cosh();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn doubled_hexagon_sides() {
        // half-boundary 2 acosh(X^4) sits opposite the returned side
        let x: f64 = 10.0;
        let half_b = 2.0 * x.powi(4).acosh();
        let (s2, s3) = ((x * x).asinh(), x.powi(3).asinh());
        assert_abs_diff_eq!(
            hexagon_side(s2, s2, half_b).unwrap(),
            2.0 * s2,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            hexagon_side(s3, s3, half_b).unwrap(),
            2.0 * x.asinh(),
            epsilon = 1e-9
        );
    }
}
