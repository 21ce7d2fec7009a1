//! The five experiments. Each returns a [`Report`] whose checks decide the
//! exit code.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::json;

use thurston_core::metrics::{
    arc_metric_spectra, curve_metric, curve_metric_spectra, geodesic_check, random_structure,
    sample_rng, stretch_family, MetricResult, Spectrum, BOUNDARY_TOL, DEFAULT_LENGTH_RANGE,
};
use thurston_core::saccheri::{composition_residual, foliate, lipschitz_report};
use thurston_core::torus::from_doubled_hexagons;
use thurston_core::{
    ExpansionMap, IdealSaccheriQuad, Side, Slope, StructureLiteral, TraceCoords, EQUALITY_BOUNDARY,
};

use crate::report::{Cell, Check, Report, Table};

/// Slack allowed below `K` for the arc metric.
pub const ARC_BELOW_CURVE: f64 = 1e-6;
/// Tolerance for closed-form length checks, relative to `max(1, |value|)`.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Absolute tolerance for arc lengths from the cross-ratio route.
pub const ARC_TOL: f64 = 1e-6;
/// Bound on `|K(a,b) + K(b,c) - K(a,c)|` along stretch paths.
pub const ADDITIVITY_TOL: f64 = 5e-3;
pub const BOUNDARY_DRIFT_TOL: f64 = 1e-9;
/// Length range for random structures when `b > 4 arcsinh(1)`, reaching
/// thin tori.
pub const THIN_LENGTH_RANGE: (f64, f64) = (0.05, 3.0);

/// Window over which a supremum counts as settled.
const SETTLE_DEPTHS: usize = 3;

fn settle_delta(m: &MetricResult) -> f64 {
    let h = &m.history;
    if h.len() > SETTLE_DEPTHS {
        h[h.len() - 1] - h[h.len() - 1 - SETTLE_DEPTHS]
    } else {
        f64::NAN
    }
}

fn closed_form_check(name: String, value: f64, expected: f64) -> Check {
    Check::close(
        name,
        value,
        expected,
        CLOSED_FORM_TOL * expected.abs().max(1.0),
    )
}

/// Lipschitz certification of the k-expansion map on the quadrilateral with
/// base `a`.
pub fn cmd_quad(a: f64, k: f64, samples: usize, points: usize, seed: u64) -> Result<Report> {
    if !(a > 0.0) {
        bail!("base length must be positive (got {a})");
    }
    if !(k >= 1.0) {
        bail!("expansion factor must be >= 1 (got {k})");
    }
    let quad = IdealSaccheriQuad::new(a)?;
    let case = quad.classify();
    let anchor = foliate(&quad).anchor();
    let map = ExpansionMap::new(quad, k)?;
    let lip = lipschitz_report(&map, samples, seed);
    let comp = composition_residual(&quad, k, k, points, seed)?;

    let mut table = Table::new(&[
        "base_length",
        "k",
        "case",
        "anchor_re",
        "anchor_im",
        "extended_domain",
        "pairs",
        "lipschitz_estimate",
        "max_global_ratio",
        "max_local_ratio",
        "violations",
        "composition_residual",
    ]);
    table.push(vec![
        a.into(),
        k.into(),
        case.to_string().into(),
        anchor.re().into(),
        anchor.im().into(),
        map.uses_extended_domain().into(),
        lip.pairs.into(),
        lip.estimate.into(),
        lip.max_global.into(),
        lip.max_local.into(),
        lip.violations.into(),
        comp.into(),
    ]);
    let mut report = Report::new("quad", table);
    report.checks.push(Check::new(
        "lipschitz upper bound",
        lip.violations == 0 && lip.estimate <= k * (1.0 + 1e-6),
        format!(
            "estimate {:.12} vs k(1+1e-6), {} violating pairs",
            lip.estimate, lip.violations
        ),
    ));
    report.checks.push(Check::at_least(
        "lipschitz lower bound",
        lip.estimate,
        0.99 * k,
    ));
    report
        .checks
        .push(Check::at_most("composition law", comp, 1e-9));
    Ok(report)
}

fn parse_structure(lit: &str) -> Result<(StructureLiteral, TraceCoords)> {
    let parsed: StructureLiteral = lit
        .parse()
        .with_context(|| format!("cannot parse structure literal '{lit}'"))?;
    let h = parsed
        .resolve()
        .with_context(|| format!("literal '{lit}' is not a valid structure"))?;
    Ok((parsed, h))
}

fn ensure_same_boundary(h0: &TraceCoords, h1: &TraceCoords) -> Result<()> {
    let (b0, b1) = (h0.boundary_length(), h1.boundary_length());
    if (b0 - b1).abs() > BOUNDARY_TOL {
        bail!(
            "boundary lengths differ ({b0} vs {b1}); the metrics compare structures \
             with the same boundary length only"
        );
    }
    Ok(())
}

/// `K` and `A` in both directions between two structures.
pub fn cmd_metric(h0: &str, h1: &str, depth: u32, tol: f64) -> Result<Report> {
    let (_, g0) = parse_structure(h0)?;
    let (_, g1) = parse_structure(h1)?;
    ensure_same_boundary(&g0, &g1)?;
    let (s0, s1) = rayon::join(|| Spectrum::new(&g0, depth), || Spectrum::new(&g1, depth));
    let (s0, s1) = (s0?, s1?);
    let b = g0.boundary_length();

    let mut table = Table::new(&[
        "metric",
        "direction",
        "value",
        "ratio",
        "argmax_p",
        "argmax_q",
        "depth",
        "settle_delta",
        "history",
    ]);
    let mut report_rows: Vec<(&str, &str, MetricResult)> = vec![
        ("K", "h0->h1", curve_metric_spectra(&s0, &s1)?),
        ("K", "h1->h0", curve_metric_spectra(&s1, &s0)?),
    ];
    let mut warnings = Vec::new();
    if b > 0.0 {
        report_rows.push(("A", "h0->h1", arc_metric_spectra(&s0, &s1)?));
        report_rows.push(("A", "h1->h0", arc_metric_spectra(&s1, &s0)?));
    } else {
        warnings.push("boundary is a cusp: the arc metric is undefined".to_string());
    }
    let mut extra = serde_json::Map::new();
    for (metric, dir, m) in &report_rows {
        table.push(vec![
            (*metric).into(),
            (*dir).into(),
            m.value.into(),
            m.ratio().into(),
            m.argmax.p().into(),
            m.argmax.q().into(),
            m.depth.into(),
            settle_delta(m).into(),
            Cell::Floats(m.history.clone()),
        ]);
        extra.insert(format!("{metric}({dir})"), serde_json::to_value(m)?);
    }

    let mut report = Report::new("metric", table);
    report
        .extra
        .insert("results".into(), serde_json::Value::Object(extra));
    report.extra.insert("boundary".into(), json!(b));
    for (_, _, m) in &report_rows {
        let monotone = m.history.windows(2).all(|w| w[0] <= w[1]);
        report.checks.push(Check::new(
            "history non-decreasing",
            monotone,
            format!("{} levels", m.history.len()),
        ));
    }
    if report_rows.len() == 4 {
        for i in 0..2 {
            let (k, a) = (&report_rows[i].2, &report_rows[i + 2].2);
            let dir = report_rows[i].1;
            report.checks.push(Check::at_least(
                format!("A >= K {dir}"),
                a.value - k.value,
                -ARC_BELOW_CURVE,
            ));
            if b <= EQUALITY_BOUNDARY {
                report.checks.push(Check::at_most(
                    format!("|A - K| {dir}"),
                    (a.value - k.value).abs(),
                    tol,
                ));
            }
        }
        if b > EQUALITY_BOUNDARY {
            warnings.push(format!(
                "boundary {b} exceeds 4 arcsinh(1); A and K need not agree"
            ));
        }
    }
    report.warnings = warnings;
    Ok(report)
}

/// The doubled-hexagon pair `(T0, T1)` for each `X`.
pub fn cmd_counterexample(xs: &[f64], depth: u32, tol: f64) -> Result<Report> {
    if let Some(x) = xs.iter().find(|x| !(**x > 1.0)) {
        bail!("every X must exceed 1 (got {x})");
    }
    let alpha = Slope::new(1, 0)?;
    let gamma = Slope::new(0, 1)?;
    let rows = xs
        .par_iter()
        .map(|&x| -> Result<_> {
            let t0 = from_doubled_hexagons(x, 0)?;
            let t1 = from_doubled_hexagons(x, 1)?;
            let s0 = Spectrum::new(&t0, depth)?;
            let s1 = Spectrum::new(&t1, depth)?;
            let k = curve_metric_spectra(&s0, &s1)?;
            let a = arc_metric_spectra(&s0, &s1)?;
            Ok((x, t0, t1, k, a))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(&[
        "x",
        "boundary_t0",
        "boundary_t1",
        "boundary_closed",
        "t0_len_10",
        "t0_len_01",
        "t0_len_closed",
        "t1_len_10",
        "t1_len_10_closed",
        "t1_len_01",
        "t1_len_01_closed",
        "t0_arc_01",
        "t0_arc_01_closed",
        "t1_arc_01",
        "t1_arc_01_closed",
        "k",
        "exp_k",
        "exp_k_closed",
        "k_argmax_p",
        "k_argmax_q",
        "a",
        "a_argmax_p",
        "a_argmax_q",
        "a_minus_k",
        "log_x",
    ]);
    let mut checks = Vec::new();
    for (x, t0, t1, k, a) in &rows {
        let x = *x;
        let b_closed = 4.0 * x.powi(4).acosh();
        let l2 = 2.0 * (x * x).asinh();
        let l1 = 2.0 * x.asinh();
        let l3 = 2.0 * x.powi(3).asinh();
        let arc0_closed = 2.0 * (1.0 / (x.powi(4) - 1.0).sqrt()).asinh();
        let arc1_closed = 2.0 * ((x.powi(6) + 1.0).sqrt() / (x.powi(8) - 1.0).sqrt()).asinh();
        let exp_k_closed = x.powi(3).asinh() / (x * x).asinh();
        let vals = [
            ("T0 boundary", t0.boundary_length(), b_closed),
            ("T1 boundary", t1.boundary_length(), b_closed),
            ("T0 (1,0)", t0.curve_length(alpha)?, l2),
            ("T0 (0,1)", t0.curve_length(gamma)?, l2),
            ("T1 (1,0)", t1.curve_length(alpha)?, l1),
            ("T1 (0,1)", t1.curve_length(gamma)?, l3),
        ];
        for (name, v, c) in vals {
            checks.push(closed_form_check(format!("X={x} {name}"), v, c));
        }
        let arc0 = t0.arc_length(gamma)?;
        let arc1 = t1.arc_length(gamma)?;
        checks.push(Check::close(
            format!("X={x} T0 arc (0,1)"),
            arc0,
            arc0_closed,
            ARC_TOL,
        ));
        checks.push(Check::close(
            format!("X={x} T1 arc (0,1)"),
            arc1,
            arc1_closed,
            ARC_TOL,
        ));
        checks.push(Check::close(
            format!("X={x} exp K"),
            k.ratio(),
            exp_k_closed,
            tol,
        ));
        checks.push(Check::new(
            format!("X={x} K argmax"),
            k.argmax == gamma,
            format!("argmax {}", k.argmax),
        ));
        if x >= 10.0 {
            checks.push(Check::at_least(
                format!("X={x} A - K"),
                a.value - k.value,
                x.ln() - 1.5f64.ln() - 0.5,
            ));
        }
        table.push(vec![
            x.into(),
            t0.boundary_length().into(),
            t1.boundary_length().into(),
            b_closed.into(),
            t0.curve_length(alpha)?.into(),
            t0.curve_length(gamma)?.into(),
            l2.into(),
            t1.curve_length(alpha)?.into(),
            l1.into(),
            t1.curve_length(gamma)?.into(),
            l3.into(),
            arc0.into(),
            arc0_closed.into(),
            arc1.into(),
            arc1_closed.into(),
            k.value.into(),
            k.ratio().into(),
            exp_k_closed.into(),
            k.argmax.p().into(),
            k.argmax.q().into(),
            a.value.into(),
            a.argmax.p().into(),
            a.argmax.q().into(),
            (a.value - k.value).into(),
            x.ln().into(),
        ]);
    }
    let mut sorted: Vec<_> = rows.iter().map(|r| (r.0, r.3.ratio())).collect();
    sorted.sort_by(|p, q| p.0.total_cmp(&q.0));
    if sorted.len() > 1 {
        let increasing = sorted.windows(2).all(|w| w[1].1 > w[0].1);
        let below = sorted.iter().all(|r| r.1 < 1.5);
        checks.push(Check::new(
            "exp K increases toward 3/2",
            increasing && below,
            sorted
                .iter()
                .map(|(x, r)| format!("X={x}: {r:.6}"))
                .collect::<Vec<_>>()
                .join(", "),
        ));
    }
    let mut report = Report::new("counterexample", table);
    report.checks = checks;
    Ok(report)
}

/// Random same-boundary pairs comparing `A` with `K`.
pub fn cmd_equality(b: f64, samples: usize, depth: u32, seed: u64, tol: f64) -> Result<Report> {
    if !(b > 0.0) {
        bail!("boundary length must be positive (got {b})");
    }
    let in_regime = b <= EQUALITY_BOUNDARY;
    let range = if in_regime {
        DEFAULT_LENGTH_RANGE
    } else {
        THIN_LENGTH_RANGE
    };
    let rows = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let mut rng = sample_rng(seed, i as u64);
            let h0 = random_structure(&mut rng, b, range)?;
            let h1 = random_structure(&mut rng, b, range)?;
            let s0 = Spectrum::new(&h0, depth)?;
            let s1 = Spectrum::new(&h1, depth)?;
            let k = curve_metric_spectra(&s0, &s1)?;
            let a = arc_metric_spectra(&s0, &s1)?;
            Ok((h0, h1, k, a))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(&[
        "pair",
        "h0_length",
        "h0_twist",
        "h1_length",
        "h1_twist",
        "k",
        "k_argmax_p",
        "k_argmax_q",
        "k_settle_delta",
        "a",
        "a_argmax_p",
        "a_argmax_q",
        "a_minus_k",
    ]);
    let (mut max_dev, mut min_gap, mut max_gap) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for (i, (h0, h1, k, a)) in rows.iter().enumerate() {
        let (f0, f1) = (h0.to_fenchel_nielsen(), h1.to_fenchel_nielsen());
        let gap = a.value - k.value;
        max_dev = max_dev.max(gap.abs());
        min_gap = min_gap.min(gap);
        max_gap = max_gap.max(gap);
        table.push(vec![
            i.into(),
            f0.length.into(),
            f0.twist.into(),
            f1.length.into(),
            f1.twist.into(),
            k.value.into(),
            k.argmax.p().into(),
            k.argmax.q().into(),
            settle_delta(k).into(),
            a.value.into(),
            a.argmax.p().into(),
            a.argmax.q().into(),
            gap.into(),
        ]);
    }
    let mut report = Report::new("equality", table);
    report
        .checks
        .push(Check::at_least("A >= K", min_gap, -ARC_BELOW_CURVE));
    if in_regime {
        report
            .checks
            .push(Check::at_most("max |A - K|", max_dev, tol));
    } else {
        report.warnings.push(format!(
            "boundary {b} exceeds 4 arcsinh(1) = {EQUALITY_BOUNDARY}; A and K need not agree \
             (largest A - K here: {max_gap:.6})"
        ));
    }
    report
        .extra
        .insert("max_abs_a_minus_k".into(), json!(max_dev));
    report.extra.insert("max_a_minus_k".into(), json!(max_gap));
    Ok(report)
}

/// Envelope endpoints along one side of the stretch family.
pub fn cmd_stretch(
    h0: &str,
    slope: Slope,
    times: &[f64],
    side: Side,
    depth: u32,
    tol: f64,
) -> Result<Report> {
    let (_, g0) = parse_structure(h0)?;
    let geo = geodesic_check(&g0, slope, side, times, depth, tol).map_err(|e| match e {
        thurston_core::Error::InsufficientDepth { min, bound } => {
            anyhow::anyhow!("envelope minimum {min} exceeds {bound}; rerun with a larger --depth")
        }
        other => other.into(),
    })?;
    let b = g0.boundary_length();

    let mut table = Table::new(&[
        "t",
        "tau_minus",
        "tau_plus",
        "tau_min",
        "min_value",
        "endpoint_tau",
        "k_from_h0",
        "boundary",
        "boundary_drift",
        "structure",
    ]);
    let base_twist = stretch_family(&g0, slope, 0.0)?.base_twist();
    let mut k_from_h0 = Vec::with_capacity(times.len());
    for (i, &t) in times.iter().enumerate() {
        let k = curve_metric(&g0, &geo.points[i], depth)?.value;
        k_from_h0.push(k);
        let env = geo.envelopes[i];
        let (tm, tp, tmin, minv) = match env {
            Some(e) => (e.tau_minus, e.tau_plus, e.tau_min, e.min_value),
            None => (base_twist, base_twist, base_twist, 0.0),
        };
        let endpoint = env.map(|e| e.endpoint(side)).unwrap_or(base_twist);
        let h = &geo.points[i];
        table.push(vec![
            t.into(),
            tm.into(),
            tp.into(),
            tmin.into(),
            minv.into(),
            endpoint.into(),
            k.into(),
            h.boundary_length().into(),
            (h.boundary_length() - b).abs().into(),
            StructureLiteral::from(*h).to_string().into(),
        ]);
    }
    let mut report = Report::new("stretch", table);
    for (i, &t) in times.iter().enumerate() {
        report
            .checks
            .push(Check::close(format!("K(h0, h_{t})"), k_from_h0[i], t, tol));
    }
    report.checks.push(Check::at_most(
        "boundary drift",
        geo.boundary_drift,
        BOUNDARY_DRIFT_TOL,
    ));
    for &(i, j, k, expected) in &geo.pairs {
        report.checks.push(Check::close(
            format!("K(h_{}, h_{})", times[i], times[j]),
            k,
            expected,
            tol,
        ));
    }
    for (c, r) in geo.additivity.iter().enumerate() {
        report.checks.push(Check::at_most(
            format!(
                "additivity {}, {}, {}",
                times[c],
                times[c + 1],
                times[c + 2]
            ),
            *r,
            ADDITIVITY_TOL,
        ));
    }
    report.extra.insert(
        "pairs".into(),
        json!(geo
            .pairs
            .iter()
            .map(|p| json!({"from": times[p.0], "to": times[p.1], "k": p.2, "expected": p.3}))
            .collect::<Vec<_>>()),
    );
    report
        .extra
        .insert("additivity".into(), json!(geo.additivity));
    Ok(report)
}
