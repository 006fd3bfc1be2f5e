//! Figure emission. This is the only floating-point corner of the crate:
//! verdicts never depend on it. Scenes render to deterministic SVG (same
//! inputs, byte-identical output), and certified residual curves get a
//! numeric cross-check that recovers their real intersection points with
//! the input curves for marker placement.

use num::complex::Complex64;
use num::ToPrimitive;

use crate::decomposition::ResidualCertificate;
use crate::error::{Error, Result};
use crate::linalg::{solve_exact, RatMatrix};
use crate::poly::HomoPoly;
use crate::projective::{Conic, HLine, HPoint};
use crate::rat::{rat, Rat};
use crate::scene::Scene;

/// Style key for an overlay element; maps to a fixed palette.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Pascal,
    Steiner,
    Kirkman,
    Mystic,
    NetClass(u8),
    Plain,
}

impl Role {
    fn color(&self) -> &'static str {
        match self {
            Role::Pascal => "#1f6fb4",
            Role::Steiner => "#d62728",
            Role::Kirkman => "#2ca02c",
            Role::Mystic => "#9467bd",
            Role::NetClass(0) => "#e6a817",
            Role::NetClass(1) => "#17becf",
            Role::NetClass(_) => "#8c564b",
            Role::Plain => "#333333",
        }
    }

    fn name(&self) -> String {
        match self {
            Role::Pascal => "pascal".into(),
            Role::Steiner => "steiner".into(),
            Role::Kirkman => "kirkman".into(),
            Role::Mystic => "mystic".into(),
            Role::NetClass(i) => format!("net-class-{}", i + 1),
            Role::Plain => "plain".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Overlay {
    Point(HPoint, Role, Option<String>),
    Line(HLine, Role),
    Conic(Conic, Role),
}

/// Axis-aligned view window in affine coordinates (z = 1 chart).
#[derive(Debug, Clone, Copy)]
pub struct Viewport {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport { min_x: -4.0, max_x: 4.0, min_y: -4.0, max_y: 4.0 }
    }
}

const SIZE: f64 = 800.0;

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

struct Mapper {
    vp: Viewport,
}

impl Mapper {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = SIZE * (x - self.vp.min_x) / (self.vp.max_x - self.vp.min_x);
        let sy = SIZE * (self.vp.max_y - y) / (self.vp.max_y - self.vp.min_y);
        (sx, sy)
    }
}

fn point_affine(p: &HPoint) -> Option<(f64, f64)> {
    let [x, y, z] = p.coords();
    let zf = z.to_f64()?;
    if zf == 0.0 {
        return None;
    }
    Some((x.to_f64()? / zf, y.to_f64()? / zf))
}

/// Deterministic SVG document: base conic, labeled scene points, clipped
/// overlay lines, sampled overlay conics, labeled overlay points.
/// Off-viewport and at-infinity elements are omitted.
pub fn render_scene(scene: &Scene, overlays: &[Overlay], viewport: &Viewport) -> String {
    let m = Mapper { vp: *viewport };
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        SIZE as u32, SIZE as u32, SIZE as u32, SIZE as u32
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // axes
    let (ox0, oy0) = m.px(viewport.min_x, 0.0);
    let (ox1, oy1) = m.px(viewport.max_x, 0.0);
    out.push_str(&format!(
        "<line data-role=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\"/>\n",
        fmt(ox0), fmt(oy0), fmt(ox1), fmt(oy1)
    ));
    let (ax0, ay0) = m.px(0.0, viewport.min_y);
    let (ax1, ay1) = m.px(0.0, viewport.max_y);
    out.push_str(&format!(
        "<line data-role=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\"/>\n",
        fmt(ax0), fmt(ay0), fmt(ax1), fmt(ay1)
    ));

    // base conic drawn as a parametric polyline (the unit circle exactly)
    let mut pts = Vec::with_capacity(257);
    for k in 0..=256u32 {
        let th = (k as f64) * std::f64::consts::TAU / 256.0;
        let (x, y) = m.px(th.cos(), th.sin());
        pts.push(format!("{},{}", fmt(x), fmt(y)));
    }
    out.push_str(&format!(
        "<polyline data-role=\"base\" points=\"{}\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1.5\"/>\n",
        pts.join(" ")
    ));

    for ov in overlays {
        match ov {
            Overlay::Line(l, role) => {
                if let Some(((x1, y1), (x2, y2))) = clip_line(l, viewport) {
                    let (px1, py1) = m.px(x1, y1);
                    let (px2, py2) = m.px(x2, y2);
                    out.push_str(&format!(
                        "<line data-role=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"1\"/>\n",
                        role.name(), fmt(px1), fmt(py1), fmt(px2), fmt(py2), role.color()
                    ));
                }
            }
            Overlay::Conic(c, role) => {
                for branch in sample_conic(c, viewport) {
                    if branch.len() < 2 {
                        continue;
                    }
                    let pts: Vec<String> = branch
                        .iter()
                        .map(|&(x, y)| {
                            let (px, py) = m.px(x, y);
                            format!("{},{}", fmt(px), fmt(py))
                        })
                        .collect();
                    out.push_str(&format!(
                        "<polyline data-role=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1\"/>\n",
                        role.name(), pts.join(" "), role.color()
                    ));
                }
            }
            Overlay::Point(p, role, label) => {
                if let Some((x, y)) = point_affine(p) {
                    if x < viewport.min_x || x > viewport.max_x || y < viewport.min_y || y > viewport.max_y {
                        continue;
                    }
                    let (px, py) = m.px(x, y);
                    out.push_str(&format!(
                        "<circle data-role=\"{}\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
                        role.name(), fmt(px), fmt(py), role.color()
                    ));
                    if let Some(lbl) = label {
                        out.push_str(&format!(
                            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{}\">{}</text>\n",
                            fmt(px + 5.0), fmt(py - 5.0), role.color(), lbl
                        ));
                    }
                }
            }
        }
    }

    // scene points last so their labels sit on top
    for (lbl, p) in &scene.points {
        if let Some((x, y)) = point_affine(p) {
            if x < viewport.min_x || x > viewport.max_x || y < viewport.min_y || y > viewport.max_y {
                continue;
            }
            let (px, py) = m.px(x, y);
            out.push_str(&format!(
                "<circle data-role=\"vertex\" cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#000000\"/>\n",
                fmt(px), fmt(py)
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"14\" fill=\"#000000\">{}</text>\n",
                fmt(px + 6.0), fmt(py - 6.0), lbl
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Clips ax + by + c = 0 to the viewport rectangle; None when outside.
fn clip_line(l: &HLine, vp: &Viewport) -> Option<((f64, f64), (f64, f64))> {
    let [a, b, c] = l.coeffs();
    let (a, b, c) = (a.to_f64()?, b.to_f64()?, c.to_f64()?);
    let mut hits: Vec<(f64, f64)> = Vec::new();
    let mut push = |x: f64, y: f64| {
        const EPS: f64 = 1e-9;
        if x >= -EPS + 0.0_f64.min(x) || true {
            // dedupe corners
            if !hits.iter().any(|&(hx, hy)| (hx - x).abs() < 1e-9 && (hy - y).abs() < 1e-9) {
                hits.push((x, y));
            }
        }
    };
    if b.abs() > 1e-12 {
        for x in [vp.min_x, vp.max_x] {
            let y = -(a * x + c) / b;
            if y >= vp.min_y - 1e-9 && y <= vp.max_y + 1e-9 {
                push(x, y);
            }
        }
    }
    if a.abs() > 1e-12 {
        for y in [vp.min_y, vp.max_y] {
            let x = -(b * y + c) / a;
            if x >= vp.min_x - 1e-9 && x <= vp.max_x + 1e-9 {
                push(x, y);
            }
        }
    }
    if hits.len() >= 2 {
        Some((hits[0], hits[1]))
    } else {
        None
    }
}

/// Scanline sampling of a conic in the affine chart, with bisection
/// subdivision at the discriminant sign changes; returns the two root
/// branches as polyline runs.
fn sample_conic(c: &Conic, vp: &Viewport) -> Vec<Vec<(f64, f64)>> {
    let co = c.form().coeffs();
    let f = |i: usize| co[i].to_f64().unwrap_or(0.0);
    let (a, b, cc, d, e, ff) = (f(0), f(1), f(2), f(3), f(4), f(5));
    // a x^2 + b xy + c xz + d y^2 + e yz + f z^2 at z = 1:
    // d y^2 + (b x + e) y + (a x^2 + c x + f)
    let n = 512usize;
    let step = (vp.max_x - vp.min_x) / n as f64;
    let eval_roots = |x: f64| -> Option<(f64, f64)> {
        let qa = d;
        let qb = b * x + e;
        let qc = a * x * x + cc * x + ff;
        if qa.abs() < 1e-12 {
            if qb.abs() < 1e-12 {
                return None;
            }
            let y = -qc / qb;
            return Some((y, y));
        }
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        let y1 = (-qb - s) / (2.0 * qa);
        let y2 = (-qb + s) / (2.0 * qa);
        Some((y1.min(y2), y1.max(y2)))
    };
    let mut lower: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    let mut upper: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    let mut prev_ok = false;
    for k in 0..=n {
        let x = vp.min_x + step * k as f64;
        match eval_roots(x) {
            Some((y1, y2)) => {
                if !prev_ok && k > 0 {
                    // refine the left boundary of this run
                    let mut lo = x - step;
                    let mut hi = x;
                    for _ in 0..24 {
                        let mid = 0.5 * (lo + hi);
                        if eval_roots(mid).is_some() {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    if let Some((by1, by2)) = eval_roots(hi) {
                        lower.last_mut().unwrap().push((hi, by1));
                        upper.last_mut().unwrap().push((hi, by2));
                    }
                }
                lower.last_mut().unwrap().push((x, y1));
                upper.last_mut().unwrap().push((x, y2));
                prev_ok = true;
            }
            None => {
                if prev_ok {
                    // refine the right boundary of the finished run
                    let mut lo = x - step;
                    let mut hi = x;
                    for _ in 0..24 {
                        let mid = 0.5 * (lo + hi);
                        if eval_roots(mid).is_some() {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    if let Some((by1, by2)) = eval_roots(lo) {
                        lower.last_mut().unwrap().push((lo, by1));
                        upper.last_mut().unwrap().push((lo, by2));
                    }
                    lower.push(Vec::new());
                    upper.push(Vec::new());
                }
                prev_ok = false;
            }
        }
    }
    let clip = |runs: Vec<Vec<(f64, f64)>>| -> Vec<Vec<(f64, f64)>> {
        runs.into_iter()
            .map(|run| {
                run.into_iter()
                    .filter(|&(_, y)| y >= vp.min_y - 1.0 && y <= vp.max_y + 1.0)
                    .collect()
            })
            .filter(|r: &Vec<(f64, f64)>| r.len() >= 2)
            .collect()
    };
    let mut out = clip(lower);
    out.extend(clip(upper));
    out
}

/// A numerically recovered residual intersection point with its relative
/// residuals on the three curves.
#[derive(Debug, Clone)]
pub struct FloatPoint {
    pub xyz: [f64; 3],
    pub rel_d1: f64,
    pub rel_d2: f64,
    pub rel_residual: f64,
}

fn coeff_norm(p: &HomoPoly) -> f64 {
    p.coeffs().iter().map(|c| c.to_f64().unwrap_or(0.0).abs()).fold(0.0, f64::max)
}

fn eval_f64(p: &HomoPoly, xyz: &[f64; 3]) -> f64 {
    let mut acc = 0.0;
    for (i, &(a, b, c)) in crate::poly::monomials(p.degree()).iter().enumerate() {
        let co = p.coeffs()[i].to_f64().unwrap_or(0.0);
        if co == 0.0 {
            continue;
        }
        acc += co * xyz[0].powi(a as i32) * xyz[1].powi(b as i32) * xyz[2].powi(c as i32);
    }
    acc
}

fn relative_residual(p: &HomoPoly, xyz: &[f64; 3]) -> f64 {
    let scale = xyz.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
    let norm = coeff_norm(p) * scale.powi(p.degree() as i32);
    (eval_f64(p, xyz) / norm).abs()
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    // divide by the signed largest-magnitude component so projectively
    // equal float points get one representative
    let mut k = 0;
    for i in 1..3 {
        if v[i].abs() > v[k].abs() {
            k = i;
        }
    }
    let m = if v[k] == 0.0 { 1e-300 } else { v[k] };
    [v[0] / m, v[1] / m, v[2] / m]
}

/// Durand-Kerner roots of a univariate polynomial given by f64 coefficients
/// (highest degree first).
fn poly_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[0];
    if lead.abs() < 1e-300 {
        return poly_roots(&coeffs[1..]);
    }
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let evalp = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in &monic {
            acc = acc * z + Complex64::new(c, 0.0);
        }
        acc
    };
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1))
        .collect();
    for _ in 0..400 {
        let mut shift = 0.0f64;
        let snapshot = roots.clone();
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, r) in snapshot.iter().enumerate() {
                if j != i {
                    denom *= snapshot[i] - r;
                }
            }
            if denom.norm() < 1e-280 {
                continue;
            }
            let delta = evalp(snapshot[i]) / denom;
            roots[i] = snapshot[i] - delta;
            shift = shift.max(delta.norm());
        }
        if shift < 1e-14 {
            break;
        }
    }
    // clustered roots stall above the tolerance; callers polish candidates
    // with Newton anyway, so best-effort roots are returned regardless
    Ok(roots)
}

/// Exact univariate restriction of `f` to the parameterized line
/// p(s) = p0 + s·p1, returned highest-degree-first as f64.
fn restrict_to_line(f: &HomoPoly, p0: &[Rat; 3], p1: &[Rat; 3]) -> Vec<f64> {
    let d = f.degree();
    // interpolate through exact evaluations at s = 0..d
    let mut rows = Vec::with_capacity(d + 1);
    let mut rhs = Vec::with_capacity(d + 1);
    for s in 0..=d {
        let sv = rat(s as i64);
        let pt = [
            &p0[0] + &sv * &p1[0],
            &p0[1] + &sv * &p1[1],
            &p0[2] + &sv * &p1[2],
        ];
        rhs.push(f.eval_rats(&pt));
        let mut row = Vec::with_capacity(d + 1);
        let mut pw = rat(1);
        for _ in 0..=d {
            row.push(pw.clone());
            pw *= &sv;
        }
        row.reverse(); // highest degree first
        rows.push(row);
    }
    let a = RatMatrix::from_rows(rows);
    let coeffs = solve_exact(&a, &rhs).expect("Vandermonde system is regular");
    coeffs.iter().map(|c| c.to_f64().unwrap_or(0.0)).collect()
}

fn rats_of(p: &HPoint) -> [Rat; 3] {
    let [x, y, z] = p.coords();
    [
        Rat::from_integer(x.clone()),
        Rat::from_integer(y.clone()),
        Rat::from_integer(z.clone()),
    ]
}

/// Numeric residual intersection points of a certificate: the real points
/// of residual ∩ D1, each reported with its relative residuals. Exact
/// verdicts never depend on this; it exists for marker placement and the
/// float cross-check.
pub fn residual_points_float(cert: &ResidualCertificate) -> Result<Vec<FloatPoint>> {
    if !cert.verify() {
        return Err(Error::Precondition("certificate does not verify".into()));
    }
    let res = &cert.residual;
    let pts = match res.degree() {
        1 => line_curve_points(res, &cert.d1)?,
        2 => conic_curve_points(res, &cert.d1)?,
        _ => {
            return Err(Error::Precondition(
                "float cross-check supports line and conic residuals".into(),
            ))
        }
    };
    Ok(pts
        .into_iter()
        .map(|xyz| {
            let xyz = normalize3(xyz);
            FloatPoint {
                rel_d1: relative_residual(&cert.d1, &xyz),
                rel_d2: relative_residual(&cert.d2, &xyz),
                rel_residual: relative_residual(res, &xyz),
                xyz,
            }
        })
        .collect())
}

fn line_curve_points(line: &HomoPoly, curve: &HomoPoly) -> Result<Vec<[f64; 3]>> {
    let c = line.coeffs();
    let l = HLine::new([c[0].clone(), c[1].clone(), c[2].clone()]).expect("nonzero line");
    // two distinct rational points spanning the line
    let e = [
        HPoint::from_i64(1, 0, 0).unwrap(),
        HPoint::from_i64(0, 1, 0).unwrap(),
        HPoint::from_i64(0, 0, 1).unwrap(),
    ];
    let mut span: Vec<HPoint> = Vec::new();
    for b in &e {
        let candidate = crate::projective::join(b, &crate::projective::dualize_line(&l));
        let _ = candidate; // the dual point is not generally on the line; use cross products instead
    }
    // points on the line: cross(l, e_i) for two independent choices
    for b in &e {
        let lc = l.coeffs();
        let bc = b.coords();
        let cx = [
            &lc[1] * &bc[2] - &lc[2] * &bc[1],
            &lc[2] * &bc[0] - &lc[0] * &bc[2],
            &lc[0] * &bc[1] - &lc[1] * &bc[0],
        ];
        if let Some(p) = HPoint::new(cx) {
            if !span.contains(&p) {
                span.push(p);
            }
        }
        if span.len() == 2 {
            break;
        }
    }
    if span.len() < 2 {
        return Err(Error::ConvergenceFailure);
    }
    let p0 = rats_of(&span[0]);
    let p1 = rats_of(&span[1]);
    let coeffs = restrict_to_line(curve, &p0, &p1);
    let roots = poly_roots(&coeffs)?;
    let to_f = |r: &Rat| r.to_f64().unwrap_or(0.0);
    let mut out = Vec::new();
    for r in roots {
        if r.im.abs() > 1e-7 * (1.0 + r.re.abs()) {
            continue;
        }
        let s = r.re;
        out.push([
            to_f(&p0[0]) + s * to_f(&p1[0]),
            to_f(&p0[1]) + s * to_f(&p1[1]),
            to_f(&p0[2]) + s * to_f(&p1[2]),
        ]);
    }
    Ok(out)
}

/// f64 polynomial convolution (coefficients lowest degree first).
fn mul_f64(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn conic_curve_points(conic_form: &HomoPoly, curve: &HomoPoly) -> Result<Vec<[f64; 3]>> {
    let co = conic_form.coeffs();
    let cscale = co.iter().map(|c| c.to_f64().unwrap_or(0.0).abs()).fold(0.0, f64::max);
    if cscale == 0.0 {
        return Err(Error::ConvergenceFailure);
    }
    let f = |i: usize| co[i].to_f64().unwrap_or(0.0) / cscale;
    let (a, b, cc, d, e, ff) = (f(0), f(1), f(2), f(3), f(4), f(5));
    let qeval = |p: &[f64; 3]| -> f64 {
        a * p[0] * p[0]
            + b * p[0] * p[1]
            + cc * p[0] * p[2]
            + d * p[1] * p[1]
            + e * p[1] * p[2]
            + ff * p[2] * p[2]
    };
    let qgrad = |p: &[f64; 3]| -> [f64; 3] {
        [
            2.0 * a * p[0] + b * p[1] + cc * p[2],
            b * p[0] + 2.0 * d * p[1] + e * p[2],
            cc * p[0] + e * p[1] + 2.0 * ff * p[2],
        ]
    };
    // polar pairing 2·uᵀMv
    let polar = |u: &[f64; 3], v: &[f64; 3]| -> f64 {
        let g = qgrad(u);
        g[0] * v[0] + g[1] * v[1] + g[2] * v[2]
    };

    // float seed point on the conic from a scanline, refined by Newton
    let mut seed: Option<[f64; 3]> = None;
    let n = 8192;
    'scan: for k in 0..n {
        let x = -50.0 + 100.0 * (k as f64) / (n as f64);
        let qa = d;
        let qb = b * x + e;
        let qc = a * x * x + cc * x + ff;
        if qa.abs() > 1e-14 {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                seed = Some([x, (-qb + disc.sqrt()) / (2.0 * qa), 1.0]);
                break 'scan;
            }
        } else if qb.abs() > 1e-14 {
            seed = Some([x, -qc / qb, 1.0]);
            break 'scan;
        }
    }
    let mut p0 = seed.ok_or(Error::ConvergenceFailure)?;
    for _ in 0..8 {
        let g = qgrad(&p0);
        let gy = g[1];
        if gy.abs() < 1e-14 {
            break;
        }
        p0[1] -= qeval(&p0) / gy;
    }

    let nscale = coeff_norm(curve).max(1e-300);
    let curve_eval = |p: &[f64; 3]| -> f64 {
        let m = p.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
        eval_f64(curve, &[p[0] / m, p[1] / m, p[2] / m]) / nscale
    };
    let curve_grad = |p: &[f64; 3]| -> [f64; 3] {
        let h = 1e-7 * p.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
        let mut g = [0.0; 3];
        for i in 0..3 {
            let mut hi = *p;
            let mut lo = *p;
            hi[i] += h;
            lo[i] -= h;
            g[i] = (curve_eval(&hi) - curve_eval(&lo)) / (2.0 * h);
        }
        g
    };

    // Quadratic parameterization from a base point: the line q0 + s(u + t v)
    // re-meets the conic at p(t) = α(t)·q0 − β(t)·(u + t v). Candidate roots
    // are polished by a 2D Newton step on (Q, curve); sweeping again from a
    // found intersection point keeps the parameter well conditioned even
    // when the intersections cluster.
    let deg = curve.degree();
    let newton = |p: &mut [f64; 3]| -> f64 {
        for _ in 0..60 {
            let fq = qeval(p);
            let fc = curve_eval(p);
            if fq.abs().max(fc.abs()) < 1e-15 {
                break;
            }
            let gq = qgrad(p);
            let gc = curve_grad(p);
            let a11 = gq.iter().map(|x| x * x).sum::<f64>();
            let a12 = gq.iter().zip(&gc).map(|(x, y)| x * y).sum::<f64>();
            let a22 = gc.iter().map(|x| x * x).sum::<f64>();
            let det = a11 * a22 - a12 * a12;
            if det.abs() < 1e-280 {
                break;
            }
            let l1 = (-fq * a22 + fc * a12) / det;
            let l2 = (fq * a12 - fc * a11) / det;
            for i in 0..3 {
                p[i] += l1 * gq[i] + l2 * gc[i];
            }
            *p = normalize3(*p);
        }
        qeval(p).abs().max(curve_eval(p).abs())
    };
    let sweep = |q0: &[f64; 3], found: &mut Vec<[f64; 3]>| {
        for basis in 0..2 {
            let (u, v): ([f64; 3], [f64; 3]) = if basis == 0 {
                ([0.96, 0.28, 0.0], [-0.28, 0.96, 0.0])
            } else {
                ([0.28, 0.96, 0.31], [0.96, -0.28, -0.11])
            };
            let qa2 = qeval(&v);
            let qb2 = polar(&u, &v);
            let qc2 = qeval(&u);
            let b0 = polar(q0, &u);
            let b1 = polar(q0, &v);
            let comp: Vec<[f64; 3]> = (0..3)
                .map(|i| {
                    [
                        qc2 * q0[i] - b0 * u[i],
                        qb2 * q0[i] - b1 * u[i] - b0 * v[i],
                        qa2 * q0[i] - b1 * v[i],
                    ]
                })
                .collect();
            // φ(t) = curve(p(t)) expanded by coefficient convolution
            let mut phi = vec![0.0; 2 * deg + 1];
            for (idx, &(ea, eb, ec)) in crate::poly::monomials(deg).iter().enumerate() {
                let cf = curve.coeffs()[idx].to_f64().unwrap_or(0.0) / nscale;
                if cf == 0.0 {
                    continue;
                }
                let mut term = vec![cf];
                for (exp, ci) in [(ea, 0usize), (eb, 1), (ec, 2)] {
                    for _ in 0..exp {
                        term = mul_f64(&term, &comp[ci].to_vec());
                    }
                }
                for (k, val) in term.iter().enumerate() {
                    phi[k] += val;
                }
            }
            let maxc = phi.iter().map(|c| c.abs()).fold(0.0, f64::max);
            if maxc == 0.0 {
                continue;
            }
            let mut hi_first: Vec<f64> = phi.iter().rev().copied().collect();
            while hi_first.len() > 1 && hi_first[0].abs() < 1e-13 * maxc {
                hi_first.remove(0);
            }
            let Ok(roots) = poly_roots(&hi_first) else { continue };
            for r in roots {
                // clustered roots come back with sizeable spurious imaginary
                // parts; the Newton polish decides which candidates are real
                if r.im.abs() > 0.2 * (1.0 + r.re.abs()) {
                    continue;
                }
                let t = r.re;
                let at = qa2 * t * t + qb2 * t + qc2;
                let bt = b1 * t + b0;
                let mut p = [
                    at * q0[0] - bt * (u[0] + t * v[0]),
                    at * q0[1] - bt * (u[1] + t * v[1]),
                    at * q0[2] - bt * (u[2] + t * v[2]),
                ];
                if p.iter().map(|x| x.abs()).fold(0.0, f64::max) < 1e-200 {
                    continue;
                }
                p = normalize3(p);
                let resid = newton(&mut p);
                if resid > 1e-11 {
                    continue;
                }
                if !found.iter().any(|q: &[f64; 3]| {
                    (q[0] - p[0]).abs() + (q[1] - p[1]).abs() + (q[2] - p[2]).abs() < 1e-6
                }) {
                    found.push(p);
                }
            }
        }
    };
    let mut found: Vec<[f64; 3]> = Vec::new();
    sweep(&p0, &mut found);
    // second pass from each discovered intersection point
    for q0 in found.clone() {
        sweep(&q0, &mut found);
    }
    Ok(found)
}

/// Convenience: renders a scene with no overlays.
pub fn render_plain(scene: &Scene) -> String {
    render_scene(scene, &[], &Viewport::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexagon::{census, HexScene};
    use crate::octagon::{mystic_conic_certificate, OctOrdering, OctScene};
    use crate::scene::Scene;

    #[test]
    fn empty_scene_renders_deterministically() {
        let scene = Scene { seed: 0, conic: Conic::unit_circle(), points: Default::default(), params: None };
        let a = render_plain(&scene);
        let b = render_plain(&scene);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("data-role=\"base\""));
        assert!(a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn hexagon_with_sixty_pascal_lines() {
        let s = HexScene::generate(1);
        let c = census(&s).unwrap();
        let overlays: Vec<Overlay> =
            c.pascal_lines.iter().map(|l| Overlay::Line(l.clone(), Role::Pascal)).collect();
        let svg = render_scene(&s.scene, &overlays, &Viewport::default());
        let lines = svg.matches("data-role=\"pascal\"").count();
        assert_eq!(lines, 60);
        // determinism under rerun
        let svg2 = render_scene(&s.scene, &overlays, &Viewport::default());
        assert_eq!(svg, svg2);
    }

    #[test]
    fn float_points_on_pascal_certificate() {
        let s = HexScene::generate(3);
        let d1 = s.matching_cubic(&[(0, 1), (2, 3), (4, 5)]);
        let d2 = s.matching_cubic(&[(0, 5), (1, 2), (3, 4)]);
        let (_, cert) = crate::hexagon::generalized_pascal_certificate(&s, &d1, &d2).unwrap();
        let pts = residual_points_float(&cert).unwrap();
        assert_eq!(pts.len(), 3);
        for p in &pts {
            assert!(p.rel_d1 < 1e-9, "rel_d1 = {}", p.rel_d1);
            assert!(p.rel_d2 < 1e-9, "rel_d2 = {}", p.rel_d2);
            assert!(p.rel_residual < 1e-9);
        }
    }

    #[test]
    fn float_points_on_mystic_conic() {
        let s = OctScene::generate(2);
        let (m1, m2) = OctOrdering::parse("ABCDEFGH").unwrap().side_matchings();
        let (_, cert) = mystic_conic_certificate(
            &s,
            &s.matching_quartic(&m1),
            &s.matching_quartic(&m2),
        )
        .unwrap();
        let pts = residual_points_float(&cert).unwrap();
        assert_eq!(pts.len(), 8, "classical case has 8 real residual points");
        for p in &pts {
            assert!(p.rel_d1 < 1e-9);
            assert!(p.rel_d2 < 1e-9);
            assert!(p.rel_residual < 1e-9);
        }
    }
}
