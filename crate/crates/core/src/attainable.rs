//! The attainable set in the unit-trace plane: uniaxial points from the
//! quadratic H, the explicit boundary angles, the trace-normalized curves
//! Gamma_alpha / Gamma_beta, the closed boundary assembled from symmetry
//! images, point membership, and the comparison against the quadrilateral
//! inner bound, including the closed-form identity checks.

use crate::error::{Error, Result};
use crate::linalg::{
    conjugate, eigvals_sym3, project_unit_trace, CrystalSpectrum, PlanePoint, Rotation3,
    SymMat3, UnitVector3,
};

/// The six coordinate permutations; entry `p` maps a triple `m` to
/// `[m[p[0]], m[p[1]], m[p[2]]]`.
pub const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 0, 2],
    [0, 2, 1],
    [2, 1, 0],
    [1, 2, 0],
    [2, 0, 1],
];

pub fn apply_perm(perm: [usize; 3], m: [f64; 3]) -> [f64; 3] {
    [m[perm[0]], m[perm[1]], m[perm[2]]]
}

/// `H(x) = 6 s2 x^2 + x (s1 s3 - 3 s2 - 4 s2^2) + 2 s2^2`, with the
/// eigenvalues passed explicitly so the symmetry in (s1, s3) can be tested.
pub fn h_poly(s1: f64, s2: f64, s3: f64, x: f64) -> f64 {
    6.0 * s2 * x * x + x * (s1 * s3 - 3.0 * s2 - 4.0 * s2 * s2) + 2.0 * s2 * s2
}

pub fn h_eval(s: &CrystalSpectrum, x: f64) -> f64 {
    h_poly(s.s1, s.s2, s.s3, x)
}

/// Uniaxial intersection points of the seed curves with the lines
/// `t1 = t2` and `t2 = t3`.
#[derive(Debug, Clone, Copy)]
pub struct UniaxialPoints {
    pub u_alpha: f64,
    pub u_beta: f64,
    /// `(u_alpha, u_alpha, 1 - 2 u_alpha)`
    pub cap_alpha: [f64; 3],
    /// `(1 - 2 u_beta, u_beta, u_beta)`
    pub cap_beta: [f64; 3],
    /// `u_alpha / s2`
    pub alpha: f64,
    /// `u_beta / s2`
    pub beta: f64,
}

/// Smallest and greatest roots of H via the stable quadratic formula.
pub fn uniaxial_points(s: &CrystalSpectrum) -> UniaxialPoints {
    let a = 6.0 * s.s2;
    let b = s.s1 * s.s3 - 3.0 * s.s2 - 4.0 * s.s2 * s.s2;
    let c = 2.0 * s.s2 * s.s2;
    // sign pattern H(0) > 0, H(1/3) < 0 guarantees two real roots
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = (q / a, c / q);
    let (u_alpha, u_beta) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    UniaxialPoints {
        u_alpha,
        u_beta,
        cap_alpha: [u_alpha, u_alpha, 1.0 - 2.0 * u_alpha],
        cap_beta: [1.0 - 2.0 * u_beta, u_beta, u_beta],
        alpha: u_alpha / s.s2,
        beta: u_beta / s.s2,
    }
}

/// Explicit rotations and normals realizing the unique connections at the
/// uniaxial points.
#[derive(Debug, Clone)]
pub struct BoundaryAngles {
    pub phi_alpha: f64,
    pub phi_beta: f64,
    pub theta_alpha: f64,
    pub theta_beta: f64,
    pub r_alpha: Rotation3,
    pub r_beta: Rotation3,
    pub n_alpha: UnitVector3,
    pub n_beta: UnitVector3,
    pub residual_alpha: f64,
    pub residual_beta: f64,
}

fn cos2phi(s: &CrystalSpectrum, u: f64) -> f64 {
    let num = 2.0 * s.s2 * (3.0 * s.s2 - 1.0)
        + u * (1.0 + s.s1 * s.s1 - 9.0 * s.s2 * s.s2 - 2.0 * s.s1 * s.s3 + s.s3 * s.s3);
    num / (2.0 * (s.s3 - s.s1) * (s.s2 - u))
}

/// `cos(2 theta)` reference values for the two boundary rotations.
pub fn cos2theta_reference(s: &CrystalSpectrum, up: &UniaxialPoints) -> (f64, f64) {
    let ca = cos2phi(s, up.u_alpha);
    let cb = cos2phi(s, up.u_beta);
    let ta = (up.u_alpha * (s.s3 - s.s1) + (up.u_alpha - s.s2) * ca)
        / (s.s2 * (1.0 - 3.0 * up.u_alpha));
    let tb = (up.u_beta * (s.s1 - s.s3) + (s.s2 - up.u_beta) * cb)
        / (s.s2 * (1.0 - 3.0 * up.u_beta));
    (ta, tb)
}

fn half_angle_from_block(m11: f64, m33: f64, m13: f64, d_low: f64, d_high: f64) -> f64 {
    let c2 = (m11 - m33) / (d_low - d_high);
    let s2 = 2.0 * m13 / (d_high - d_low);
    0.5 * s2.atan2(c2)
}

pub fn boundary_angles(s: &CrystalSpectrum, up: &UniaxialPoints) -> Result<BoundaryAngles> {
    let c2pa = cos2phi(s, up.u_alpha);
    let c2pb = cos2phi(s, up.u_beta);
    for c in [c2pa, c2pb] {
        if c.abs() > 1.0 + 1e-10 {
            return Err(Error::AngleOutOfRange(c.abs()));
        }
    }
    let phi_alpha = 0.5 * c2pa.clamp(-1.0, 1.0).acos();
    let phi_beta = 0.5 * c2pb.clamp(-1.0, 1.0).acos();
    let n_alpha = UnitVector3::new([phi_alpha.cos(), 0.0, phi_alpha.sin()])?;
    let n_beta = UnitVector3::new([phi_beta.cos(), 0.0, phi_beta.sin()])?;

    let ma = s
        .diag()
        .scale(up.alpha)
        .add(&SymMat3::outer(&n_alpha).scale(1.0 - up.alpha));
    let mb = s
        .diag()
        .scale(up.beta)
        .add(&SymMat3::outer(&n_beta).scale(1.0 - up.beta));

    let theta_alpha =
        half_angle_from_block(ma.a11, ma.a33, ma.a13, up.u_alpha, 1.0 - 2.0 * up.u_alpha);
    let theta_beta =
        half_angle_from_block(mb.a11, mb.a33, mb.a13, 1.0 - 2.0 * up.u_beta, up.u_beta);

    let (sa, ca) = theta_alpha.sin_cos();
    let r_alpha = Rotation3::new([[0.0, -1.0, 0.0], [-ca, 0.0, sa], [-sa, 0.0, -ca]])?;
    let (sb, cb) = theta_beta.sin_cos();
    let r_beta = Rotation3::new([[cb, 0.0, -sb], [sb, 0.0, cb], [0.0, -1.0, 0.0]])?;

    let residual_alpha = conjugate(&r_alpha, &SymMat3::from_diag(up.cap_alpha)).dist(&ma);
    let residual_beta = conjugate(&r_beta, &SymMat3::from_diag(up.cap_beta)).dist(&mb);
    if residual_alpha > 1e-9 || residual_beta > 1e-9 {
        return Err(Error::ConnectionFailure(residual_alpha.max(residual_beta)));
    }
    Ok(BoundaryAngles {
        phi_alpha,
        phi_beta,
        theta_alpha,
        theta_beta,
        r_alpha,
        r_beta,
        n_alpha,
        n_beta,
        residual_alpha,
        residual_beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveBranch {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Copy)]
pub struct CurveSample {
    pub p: f64,
    /// Ascending unit-trace eigenvalue triple.
    pub m: [f64; 3],
    pub point: PlanePoint,
}

/// Sampled trace-normalized rank-one trajectory from S to a uniaxial point.
#[derive(Debug, Clone)]
pub struct EigenCurve {
    pub branch: CurveBranch,
    pub samples: Vec<CurveSample>,
}

pub fn gamma_curve(
    s: &CrystalSpectrum,
    up: &UniaxialPoints,
    angles: &BoundaryAngles,
    branch: CurveBranch,
    count: usize,
) -> Result<EigenCurve> {
    assert!(count >= 2, "need at least two samples");
    let (ratio, rot, cap) = match branch {
        CurveBranch::Alpha => (up.alpha, &angles.r_alpha, up.cap_alpha),
        CurveBranch::Beta => (up.beta, &angles.r_beta, up.cap_beta),
    };
    let rotated_cap = conjugate(rot, &SymMat3::from_diag(cap));
    let mut samples = Vec::with_capacity(count);
    for i in 0..count {
        let p = i as f64 / (count - 1) as f64;
        let eta = p / (p + (1.0 - p) * ratio);
        let m_mat = rotated_cap.scale(eta).add(&s.diag().scale(1.0 - eta));
        // Endpoints have known spectra: s at p = 0 and the cap triple at p = 1.
        // Pinning them keeps the permuted arcs joinable to machine precision.
        let mut m = if i == 0 {
            s.as_array()
        } else if i == count - 1 {
            let mut c = cap;
            c.sort_by(|a, b| a.partial_cmp(b).unwrap());
            c
        } else {
            eigvals_sym3(&m_mat)?.m
        };
        // The matrix has unit trace exactly; shift out the solver's drift so the
        // eigenvalue triple stays on the viewing plane.
        let shift = (1.0 - (m[0] + m[1] + m[2])) / 3.0;
        for v in &mut m {
            *v += shift;
        }
        let point = project_unit_trace(m)?;
        samples.push(CurveSample { p, m, point });
    }
    Ok(EigenCurve { branch, samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    GammaAlpha,
    GammaBeta,
    QuadAlpha,
    QuadBeta,
}

impl ArcKind {
    pub fn label(&self) -> &'static str {
        match self {
            ArcKind::GammaAlpha => "gamma_alpha",
            ArcKind::GammaBeta => "gamma_beta",
            ArcKind::QuadAlpha => "quad_alpha",
            ArcKind::QuadBeta => "quad_beta",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RegionSample {
    pub arc: ArcKind,
    pub perm: usize,
    pub p: f64,
    pub m: [f64; 3],
    pub point: PlanePoint,
}

/// Closed region in the projected plane, stored as a sampled boundary
/// polyline (first sample repeated at the end).
#[derive(Debug, Clone)]
pub struct Region {
    pub spectrum: CrystalSpectrum,
    pub samples: Vec<RegionSample>,
}

struct Arc {
    kind: ArcKind,
    perm: usize,
    samples: Vec<(f64, [f64; 3], PlanePoint)>,
}

impl Arc {
    fn start(&self) -> PlanePoint {
        self.samples.first().unwrap().2
    }
    fn end(&self) -> PlanePoint {
        self.samples.last().unwrap().2
    }
}

/// Chains arcs end-to-end into one closed counterclockwise polyline.
fn chain_arcs(s: &CrystalSpectrum, mut arcs: Vec<Arc>) -> Result<Region> {
    const JOIN_TOL: f64 = 1e-8;
    let mut chained: Vec<RegionSample> = Vec::new();
    let first = arcs.remove(0);
    let origin = first.start();
    let mut cursor = first.end();
    push_arc(&mut chained, &first, false);
    while !arcs.is_empty() {
        let mut found = None;
        for (i, arc) in arcs.iter().enumerate() {
            if arc.start().dist(&cursor) < JOIN_TOL {
                found = Some((i, false));
                break;
            }
            if arc.end().dist(&cursor) < JOIN_TOL {
                found = Some((i, true));
                break;
            }
        }
        let Some((i, reversed)) = found else {
            let gap = arcs
                .iter()
                .map(|a| a.start().dist(&cursor).min(a.end().dist(&cursor)))
                .fold(f64::INFINITY, f64::min);
            return Err(Error::BoundaryGap(gap));
        };
        let arc = arcs.remove(i);
        cursor = if reversed { arc.start() } else { arc.end() };
        push_arc(&mut chained, &arc, reversed);
    }
    let gap = cursor.dist(&origin);
    if gap > JOIN_TOL {
        return Err(Error::BoundaryGap(gap));
    }
    // close exactly
    let first_sample = chained[0];
    chained.push(first_sample);
    if signed_area(&chained) < 0.0 {
        chained.reverse();
    }
    Ok(Region { spectrum: *s, samples: chained })
}

fn push_arc(out: &mut Vec<RegionSample>, arc: &Arc, reversed: bool) {
    let iter: Box<dyn Iterator<Item = &(f64, [f64; 3], PlanePoint)>> = if reversed {
        Box::new(arc.samples.iter().rev())
    } else {
        Box::new(arc.samples.iter())
    };
    for (i, (p, m, point)) in iter.enumerate() {
        // drop the joint point duplicated by the previous arc
        if i == 0 && !out.is_empty() {
            continue;
        }
        out.push(RegionSample { arc: arc.kind, perm: arc.perm, p: *p, m: *m, point: *point });
    }
}

fn signed_area(samples: &[RegionSample]) -> f64 {
    let mut acc = 0.0;
    for w in samples.windows(2) {
        acc += w[0].point.x * w[1].point.y - w[1].point.x * w[0].point.y;
    }
    0.5 * acc
}

fn permuted_arc(kind: ArcKind, perm: usize, base: &[(f64, [f64; 3])]) -> Result<Arc> {
    let mut samples = Vec::with_capacity(base.len());
    for (p, m) in base {
        let pm = apply_perm(PERMS[perm], *m);
        samples.push((*p, pm, project_unit_trace(pm)?));
    }
    Ok(Arc { kind, perm, samples })
}

/// The closed boundary: the six symmetry images of the two base curves,
/// concatenated into one counterclockwise polyline.
pub fn full_boundary(s: &CrystalSpectrum, count: usize) -> Result<Region> {
    assert!(count >= 16, "need at least 16 samples per arc");
    let up = uniaxial_points(s);
    let angles = boundary_angles(s, &up)?;
    let base_alpha: Vec<(f64, [f64; 3])> = gamma_curve(s, &up, &angles, CurveBranch::Alpha, count)?
        .samples
        .into_iter()
        .map(|c| (c.p, c.m))
        .collect();
    let base_beta: Vec<(f64, [f64; 3])> = gamma_curve(s, &up, &angles, CurveBranch::Beta, count)?
        .samples
        .into_iter()
        .map(|c| (c.p, c.m))
        .collect();
    let mut arcs = Vec::with_capacity(12);
    for perm in 0..6 {
        arcs.push(permuted_arc(ArcKind::GammaAlpha, perm, &base_alpha)?);
        arcs.push(permuted_arc(ArcKind::GammaBeta, perm, &base_beta)?);
    }
    chain_arcs(s, arcs)
}

fn dist_point_segment(p: &PlanePoint, a: &PlanePoint, b: &PlanePoint) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.x + t * dx, a.y + t * dy);
    ((p.x - cx).powi(2) + (p.y - cy).powi(2)).sqrt()
}

/// Distance from a plane point to the boundary polyline.
pub fn boundary_distance(region: &Region, p: &PlanePoint) -> f64 {
    let mut best = f64::INFINITY;
    for w in region.samples.windows(2) {
        best = best.min(dist_point_segment(p, &w[0].point, &w[1].point));
    }
    best
}

fn is_left(a: &PlanePoint, b: &PlanePoint, p: &PlanePoint) -> f64 {
    (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)
}

/// Winding-number membership, inclusive within 1e-9 of the boundary.
pub fn contains(region: &Region, m: [f64; 3]) -> Result<bool> {
    let p = project_unit_trace(m)?;
    if boundary_distance(region, &p) <= 1e-9 {
        return Ok(true);
    }
    let mut wn: i32 = 0;
    for w in region.samples.windows(2) {
        let (a, b) = (&w[0].point, &w[1].point);
        if a.y <= p.y {
            if b.y > p.y && is_left(a, b, &p) > 0.0 {
                wn += 1;
            }
        } else if b.y <= p.y && is_left(a, b, &p) < 0.0 {
            wn -= 1;
        }
    }
    Ok(wn != 0)
}

/// Interior chord witness: endpoints on the boundary whose diagonal matrices
/// are rank-one connected along the distinguished axis after scaling.
#[derive(Debug, Clone, Copy)]
pub struct Witness {
    pub p1: [f64; 3],
    pub p2: [f64; 3],
    pub lambda: f64,
}

fn find_perm(m: [f64; 3]) -> usize {
    let mut sorted = m;
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best = 0;
    let mut best_err = f64::INFINITY;
    for (i, perm) in PERMS.iter().enumerate() {
        let im = apply_perm(*perm, sorted);
        let err = (0..3).map(|k| (im[k] - m[k]).abs()).fold(0.0_f64, f64::max);
        if err < best_err {
            best_err = err;
            best = i;
        }
    }
    best
}

pub fn straight_line_witness(region: &Region, m: [f64; 3]) -> Result<Witness> {
    if !contains(region, m)? {
        return Err(Error::WitnessFailure);
    }
    let pm = project_unit_trace(m)?;
    if boundary_distance(region, &pm) <= 1e-9 {
        return Ok(Witness { p1: m, p2: m, lambda: 1.0 });
    }
    let perm = PERMS[find_perm(m)];
    let axis_point = apply_perm(perm, [0.0, 0.0, 1.0]);
    let axis = (0..3).position(|i| axis_point[i] == 1.0).unwrap();
    let pe = project_unit_trace(axis_point)?;
    let (dx, dy) = (pm.x - pe.x, pm.y - pe.y);
    // crossing parameters along the line t -> e + t (m - e)
    let mut crossings: Vec<f64> = Vec::new();
    for w in region.samples.windows(2) {
        let (a, b) = (&w[0].point, &w[1].point);
        let (ex, ey) = (b.x - a.x, b.y - a.y);
        let det = dx * (-ey) - dy * (-ex);
        if det.abs() < 1e-15 {
            continue;
        }
        let (rx, ry) = (a.x - pe.x, a.y - pe.y);
        let t = (rx * (-ey) + ex * ry) / det;
        let u = (dx * ry - dy * rx) / det;
        if (-1e-12..=1.0 + 1e-12).contains(&u) {
            crossings.push(t);
        }
    }
    crossings.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let before = crossings.iter().copied().filter(|t| *t <= 1.0).next_back();
    let after = crossings.iter().copied().find(|t| *t >= 1.0);
    let (Some(ta), Some(tb)) = (before, after) else {
        return Err(Error::WitnessFailure);
    };
    let at = |t: f64| -> [f64; 3] {
        [
            axis_point[0] + t * (m[0] - axis_point[0]),
            axis_point[1] + t * (m[1] - axis_point[1]),
            axis_point[2] + t * (m[2] - axis_point[2]),
        ]
    };
    let p1 = at(ta);
    let p2 = at(tb);
    // off-axis coordinates of points on the chord are proportional
    let j = (0..3)
        .filter(|k| *k != axis)
        .max_by(|a, b| p2[*a].abs().partial_cmp(&p2[*b].abs()).unwrap())
        .unwrap();
    let lambda = p1[j] / p2[j];
    let diff = [
        p1[0] - lambda * p2[0],
        p1[1] - lambda * p2[1],
        p1[2] - lambda * p2[2],
    ];
    let mut sv = [diff[0].abs(), diff[1].abs(), diff[2].abs()];
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if sv[1] > 1e-9 {
        return Err(Error::WitnessFailure);
    }
    Ok(Witness { p1, p2, lambda })
}

/// Vertices of the quadrilateral inner bound in the ascending sextant.
#[derive(Debug, Clone, Copy)]
pub struct QuadVertices {
    pub v_alpha: f64,
    pub v_beta: f64,
    pub cap_v_alpha: [f64; 3],
    pub cap_v_beta: [f64; 3],
}

pub fn quad_vertices(s: &CrystalSpectrum) -> QuadVertices {
    let v_alpha = s.s2 / (2.0 * s.s2 + s.s3);
    let v_beta = s.s2 / (2.0 * s.s2 + s.s1);
    QuadVertices {
        v_alpha,
        v_beta,
        cap_v_alpha: [v_alpha, v_alpha, 1.0 - 2.0 * v_alpha],
        cap_v_beta: [1.0 - 2.0 * v_beta, v_beta, v_beta],
    }
}

/// The quadrilateral-based comparison region, extended to the full
/// non-convex polygon by the same six-fold symmetry as the boundary.
pub fn nm_region(s: &CrystalSpectrum, count: usize) -> Result<Region> {
    assert!(count >= 2);
    let qv = quad_vertices(s);
    let sv = s.as_array();
    let edge = |from: [f64; 3], to: [f64; 3]| -> Vec<(f64, [f64; 3])> {
        (0..count)
            .map(|i| {
                let p = i as f64 / (count - 1) as f64;
                let m = [
                    from[0] + p * (to[0] - from[0]),
                    from[1] + p * (to[1] - from[1]),
                    from[2] + p * (to[2] - from[2]),
                ];
                (p, m)
            })
            .collect()
    };
    let base_alpha = edge(sv, qv.cap_v_alpha);
    let base_beta = edge(sv, qv.cap_v_beta);
    let mut arcs = Vec::with_capacity(12);
    for perm in 0..6 {
        arcs.push(permuted_arc(ArcKind::QuadAlpha, perm, &base_alpha)?);
        arcs.push(permuted_arc(ArcKind::QuadBeta, perm, &base_beta)?);
    }
    chain_arcs(s, arcs)
}

/// Result of the region comparison sweep.
#[derive(Debug, Clone)]
pub struct InclusionReport {
    pub all_inside: bool,
    /// Minimal signed clearance of Gamma_alpha over the segment [S, V_alpha],
    /// measured away from the shared vertex S.
    pub min_clearance: f64,
    pub samples_checked: usize,
}

pub fn check_inclusion(s: &CrystalSpectrum, count: usize) -> Result<InclusionReport> {
    assert!(count >= 64, "need at least 64 samples");
    let region = full_boundary(s, count)?;
    let nm = nm_region(s, count)?;
    let mut checked = 0;
    for sample in &nm.samples {
        if !contains(&region, sample.m)? {
            return Err(Error::InclusionViolation(
                sample.m[0],
                sample.m[1],
                sample.m[2],
            ));
        }
        checked += 1;
    }
    // clearance of the alpha curve over its quadrilateral chord
    let up = uniaxial_points(s);
    let angles = boundary_angles(s, &up)?;
    let curve = gamma_curve(s, &up, &angles, CurveBranch::Alpha, count)?;
    let qv = quad_vertices(s);
    let ps = project_unit_trace(s.as_array())?;
    let pv = project_unit_trace(qv.cap_v_alpha)?;
    let (ex, ey) = (pv.x - ps.x, pv.y - ps.y);
    let len = (ex * ex + ey * ey).sqrt();
    // normal pointing away from the projection center (the origin)
    let (mut nx, mut ny) = (-ey / len, ex / len);
    let mid = PlanePoint { x: 0.5 * (ps.x + pv.x), y: 0.5 * (ps.y + pv.y) };
    if nx * mid.x + ny * mid.y < 0.0 {
        nx = -nx;
        ny = -ny;
    }
    let mut min_clearance = f64::INFINITY;
    for c in &curve.samples {
        let d = nx * (c.point.x - ps.x) + ny * (c.point.y - ps.y);
        if c.p > 0.0 && d < -1e-12 {
            return Err(Error::InclusionViolation(c.m[0], c.m[1], c.m[2]));
        }
        if c.p >= 0.05 {
            min_clearance = min_clearance.min(d);
        }
    }
    Ok(InclusionReport { all_inside: true, min_clearance, samples_checked: checked })
}

/// Residuals of the closed-form identities from the appendices.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub residuals: Vec<(&'static str, f64)>,
    pub max_residual: f64,
}

pub fn identity_suite(s: &CrystalSpectrum) -> Result<IdentityReport> {
    let up = uniaxial_points(s);
    let qv = quad_vertices(s);
    let (s1, s2, s3) = (s.s1, s.s2, s.s3);
    let mut residuals: Vec<(&'static str, f64)> = Vec::new();

    // closed forms for H at the quadrilateral vertices
    let h_va_closed = -s2 * s3 * (s3 - s2) * (s2 - s1) / (2.0 * s2 + s3).powi(2);
    residuals.push(("h_v_alpha", (h_eval(s, qv.v_alpha) - h_va_closed).abs()));
    let h_vb_closed = -s1 * s2 * (s3 - s2) * (s2 - s1) / (s1 + 2.0 * s2).powi(2);
    residuals.push(("h_v_beta", (h_eval(s, qv.v_beta) - h_vb_closed).abs()));

    // the roots of H really vanish
    residuals.push(("h_u_alpha", h_eval(s, up.u_alpha).abs()));
    residuals.push(("h_u_beta", h_eval(s, up.u_beta).abs()));

    // two algebraic routes to the same B at the true alpha
    let a = up.alpha;
    let b_quotient = (a * a * s1 * s3 - up.u_alpha * (1.0 - 2.0 * up.u_alpha)) / (a * (1.0 - a));
    let b_linear = (a * (s1 * s3 + 2.0 * s2 * s2) - s2) / (1.0 - a);
    residuals.push(("b_two_forms", (b_quotient - b_linear).abs()));

    // the hypothetical alpha that forces s3 - B = 0 also kills f2
    let denom = 2.0 * s2 * s2 + 2.0 * s1 * s3 + s2 * s3 + s3 * s3;
    let alpha_star = (s2 + s3) / denom;
    let b_at_star = (alpha_star * (s1 * s3 + 2.0 * s2 * s2) - s2) / (1.0 - alpha_star);
    residuals.push(("s3_minus_b", (s3 - b_at_star).abs()));
    let f2 = denom * alpha_star - (s2 + s3);
    residuals.push(("f2_root", f2.abs()));

    // gap between the hypothetical root and v_alpha, in closed form
    let gap_closed = 2.0 * s2 * s3 * (s2 - s1) / ((s3 + 2.0 * s2) * denom);
    let gap = alpha_star * s2 - qv.v_alpha;
    residuals.push(("u_minus_v_closed_form", (gap - gap_closed).abs()));

    // H is symmetric under swapping s1 and s3
    let sym = (h_poly(s1, s2, s3, qv.v_alpha) - h_poly(s3, s2, s1, qv.v_alpha)).abs();
    residuals.push(("h_symmetry", sym));

    let max_residual = residuals.iter().map(|(_, r)| *r).fold(0.0_f64, f64::max);
    if max_residual > 1e-12 {
        return Err(Error::IdentityFailure(max_residual));
    }
    Ok(IdentityReport { residuals, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank_one::{admissible_lambdas, build_connection};

    fn std_s() -> CrystalSpectrum {
        CrystalSpectrum::new(0.2, 0.3, 0.5).unwrap()
    }

    #[test]
    fn uniaxial_roots() {
        let s = std_s();
        let up = uniaxial_points(&s);
        assert!((up.u_alpha - 0.260358).abs() < 1e-6);
        assert!((up.u_beta - 0.384086).abs() < 1e-6);
        assert!(h_eval(&s, up.u_alpha).abs() < 1e-12);
        assert!(h_eval(&s, up.u_beta).abs() < 1e-12);
        assert!(s.s1 <= up.u_alpha && up.u_alpha < 1.0 / 3.0);
        assert!(1.0 / 3.0 < up.u_beta && up.u_beta <= s.s3);
    }

    #[test]
    fn h_third_factorization() {
        let s = std_s();
        let expect = -(s.s1 - s.s2) * (s.s2 - s.s3) / 3.0;
        assert!((h_eval(&s, 1.0 / 3.0) - expect).abs() < 1e-15);
        assert!((h_eval(&s, 1.0 / 3.0) + 1.0 / 150.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_angle_certificates() {
        let s = std_s();
        let up = uniaxial_points(&s);
        let angles = boundary_angles(&s, &up).unwrap();
        assert!(angles.residual_alpha < 1e-9);
        assert!(angles.residual_beta < 1e-9);
        let (ta, tb) = cos2theta_reference(&s, &up);
        assert!(((2.0 * angles.theta_alpha).cos() - ta).abs() < 1e-12);
        assert!(((2.0 * angles.theta_beta).cos() - tb).abs() < 1e-12);
    }

    #[test]
    fn interval_degenerates_at_uniaxial_points() {
        let s = std_s();
        let up = uniaxial_points(&s);
        let a = admissible_lambdas(up.cap_alpha, &s).unwrap();
        assert!((a.a_alpha.lo - up.alpha).abs() < 1e-12);
        assert!((a.a_alpha.hi - up.alpha).abs() < 1e-12);
        let b = admissible_lambdas(up.cap_beta, &s).unwrap();
        assert!((b.a_beta.lo - up.beta).abs() < 1e-12);
        assert!((b.a_beta.hi - up.beta).abs() < 1e-12);
        // the unique connection at the degenerate multiplier exists; the
        // repeated eigenvalue costs some accuracy in the decomposition
        build_connection(up.cap_alpha, &s, up.alpha, 1e-6).unwrap();
        build_connection(up.cap_beta, &s, up.beta, 1e-6).unwrap();
    }

    #[test]
    fn gamma_endpoints() {
        let s = std_s();
        let up = uniaxial_points(&s);
        let angles = boundary_angles(&s, &up).unwrap();
        for (branch, cap) in [
            (CurveBranch::Alpha, up.cap_alpha),
            (CurveBranch::Beta, up.cap_beta),
        ] {
            let curve = gamma_curve(&s, &up, &angles, branch, 33).unwrap();
            let first = curve.samples.first().unwrap();
            for (a, b) in first.m.iter().zip(s.as_array()) {
                assert!((a - b).abs() < 1e-10);
            }
            let mut cap_sorted = cap;
            cap_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let last = curve.samples.last().unwrap();
            for (a, b) in last.m.iter().zip(cap_sorted) {
                assert!((a - b).abs() < 1e-9);
            }
            for c in &curve.samples {
                let tr: f64 = c.m.iter().sum();
                assert!((tr - 1.0).abs() < 1e-12);
                // eigenvalues stay in [s1, s3]
                assert!(c.m[0] >= s.s1 - 1e-10 && c.m[2] <= s.s3 + 1e-10);
            }
        }
    }

    #[test]
    fn boundary_closes_and_hits_permutations() {
        let s = std_s();
        let region = full_boundary(&s, 64).unwrap();
        let first = region.samples.first().unwrap().point;
        let last = region.samples.last().unwrap().point;
        assert!(first.dist(&last) < 1e-12);
        assert!(signed_area(&region.samples) > 0.0);
        for perm in PERMS {
            let img = apply_perm(perm, s.as_array());
            let p = project_unit_trace(img).unwrap();
            assert!(
                boundary_distance(&region, &p) < 1e-9,
                "boundary misses permuted S"
            );
        }
    }

    #[test]
    fn contains_center_and_symmetry() {
        let s = std_s();
        let region = full_boundary(&s, 64).unwrap();
        assert!(contains(&region, [1.0 / 3.0; 3]).unwrap());
        assert!(contains(&region, s.as_array()).unwrap());
        let probe = [0.28, 0.32, 0.40];
        let inside = contains(&region, probe).unwrap();
        for perm in PERMS {
            assert_eq!(contains(&region, apply_perm(perm, probe)).unwrap(), inside);
        }
        // beyond the S vertex
        let outside = [0.17, 0.315, 0.515];
        assert!(!contains(&region, outside).unwrap());
    }

    #[test]
    fn witness_on_interior_point() {
        let s = std_s();
        let region = full_boundary(&s, 128).unwrap();
        // halfway between the isotropic center and S
        let m = [
            0.5 * (s.s1 + 1.0 / 3.0),
            0.5 * (s.s2 + 1.0 / 3.0),
            0.5 * (s.s3 + 1.0 / 3.0),
        ];
        let w = straight_line_witness(&region, m).unwrap();
        // m lies on the segment between the endpoints
        let d = [w.p2[0] - w.p1[0], w.p2[1] - w.p1[1], w.p2[2] - w.p1[2]];
        let j = (0..3)
            .max_by(|a, b| d[*a].abs().partial_cmp(&d[*b].abs()).unwrap())
            .unwrap();
        let mu = (m[j] - w.p1[j]) / d[j];
        assert!((-1e-9..=1.0 + 1e-9).contains(&mu));
        for k in 0..3 {
            let rec = w.p1[k] + mu * d[k];
            assert!((rec - m[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn witness_on_boundary_degenerates() {
        let s = std_s();
        let region = full_boundary(&s, 64).unwrap();
        let w = straight_line_witness(&region, s.as_array()).unwrap();
        assert_eq!(w.p1, s.as_array());
        assert!((w.lambda - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quad_vertex_values() {
        let s = std_s();
        let qv = quad_vertices(&s);
        assert!((qv.v_alpha - 0.3 / 1.1).abs() < 1e-15);
        assert!((qv.v_beta - 0.375).abs() < 1e-15);
        let up = uniaxial_points(&s);
        assert!(up.u_alpha < qv.v_alpha && qv.v_alpha < qv.v_beta && qv.v_beta < up.u_beta);
    }

    #[test]
    fn inclusion_sweep() {
        let s = std_s();
        let report = check_inclusion(&s, 96).unwrap();
        assert!(report.all_inside);
        assert!(report.min_clearance > 0.0);
    }

    #[test]
    fn identities_hold() {
        let s = std_s();
        let report = identity_suite(&s).unwrap();
        assert!(report.max_residual <= 1e-12, "{:?}", report.residuals);
    }

    #[test]
    fn gamma_alpha_meets_seed_curve_endpoints() {
        let s = std_s();
        let up = uniaxial_points(&s);
        let angles = boundary_angles(&s, &up).unwrap();
        let curve = gamma_curve(&s, &up, &angles, CurveBranch::Alpha, 33).unwrap();
        let seed = crate::t2::sample_t2_curve(&s, crate::t2::Branch::Alpha, 33).unwrap();
        let d_start = curve.samples[0]
            .m
            .iter()
            .zip(seed[0].t)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        let d_end = curve.samples[32]
            .m
            .iter()
            .zip(seed[32].t)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        assert!(d_start < 1e-8 && d_end < 1e-8);
    }
}
