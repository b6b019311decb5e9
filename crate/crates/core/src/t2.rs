//! The seed-material curves: evaluation of F, sampling of the two branches
//! under the unit-trace constraint, and the double-connection solve that
//! produces a common normal n with two rotations R1, R2.

use crate::attainable::uniaxial_points;
use crate::error::{Error, Result};
use crate::linalg::{conjugate, CrystalSpectrum, Rotation3, SymMat3, UnitVector3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Alpha,
    Beta,
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::Alpha => "alpha",
            Branch::Beta => "beta",
        }
    }
}

/// A point on one of the two seed curves, with its two connection multipliers.
#[derive(Debug, Clone, Copy)]
pub struct T2Point {
    /// Ascending unit-trace eigenvalues.
    pub t: [f64; 3],
    pub branch: Branch,
    pub lambda1: f64,
    pub lambda2: f64,
}

/// Double rank-one connection sharing a single normal `n = (cos phi, 0, sin phi)`.
#[derive(Debug, Clone)]
pub struct DoubleConnection {
    pub point: T2Point,
    pub n: UnitVector3,
    pub r1: Rotation3,
    pub r2: Rotation3,
    pub phi: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub residual1: f64,
    pub residual2: f64,
}

/// `F(x, y) = (s1 s3 / s2) * x y / (x^2 + x y + y^2 - s2 (x + y))`.
pub fn f_eval(x: f64, y: f64, s: &CrystalSpectrum) -> Result<f64> {
    let den = x * x + x * y + y * y - s.s2 * (x + y);
    if den.abs() < 1e-14 {
        return Err(Error::SingularDenominator(den));
    }
    Ok(s.s1 * s.s3 / s.s2 * x * y / den)
}

/// Larger root of the denominator of F in its second argument, below which
/// F(x, .) has its pole. Negative when no positive pole exists.
fn pole_in_y(x: f64, s2: f64) -> f64 {
    let disc = (s2 - x) * (s2 + 3.0 * x);
    if disc <= 0.0 {
        return f64::NEG_INFINITY;
    }
    0.5 * ((s2 - x) + disc.sqrt())
}

fn make_point(t: [f64; 3], branch: Branch, s: &CrystalSpectrum) -> T2Point {
    let (lambda1, lambda2) = match branch {
        Branch::Alpha => (t[0] / s.s2, t[1] / s.s2),
        Branch::Beta => (t[2] / s.s2, t[1] / s.s2),
    };
    T2Point { t, branch, lambda1, lambda2 }
}

/// Bisection for the companion coordinate t2 of a curve point, given the
/// driving coordinate. The residual function must change sign on the bracket.
fn solve_companion<G: Fn(f64) -> Result<f64>>(
    g: G,
    mut lo: f64,
    mut hi: f64,
    driving: f64,
) -> Result<f64> {
    let nudge = 1e-12 * (1.0 + lo.abs());
    let mut g_lo = g(lo);
    for _ in 0..8 {
        if g_lo.is_ok() {
            break;
        }
        lo += nudge;
        g_lo = g(lo);
    }
    let mut g_hi = g(hi);
    for _ in 0..8 {
        if g_hi.is_ok() {
            break;
        }
        hi -= nudge;
        g_hi = g(hi);
    }
    let (mut g_lo, mut g_hi) = (g_lo?, g_hi?);
    if g_lo.abs() < 1e-13 {
        return Ok(lo);
    }
    if g_hi.abs() < 1e-13 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::CurveSolveFailure(driving));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        if g_mid.abs() < 1e-15 || hi - lo < 1e-13 {
            return Ok(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    let _ = g_hi;
    Ok(0.5 * (lo + hi))
}

/// Start of the beta branch: the largest curve point whose connection
/// multipliers still span the admissible interval. At this point the three
/// eigenvalues form a geometric progression of ratio s2/s1.
pub fn beta_start(s: &CrystalSpectrum) -> [f64; 3] {
    let d = s.s1 * s.s1 + s.s1 * s.s2 + s.s2 * s.s2;
    [s.s1 * s.s1 / d, s.s1 * s.s2 / d, s.s2 * s.s2 / d]
}

/// Samples one branch of the seed curve on a uniform grid of the driving
/// coordinate (t1 for alpha, t3 for beta). The alpha branch runs from S to
/// its uniaxial point; the beta branch runs from `beta_start` to its
/// uniaxial point, since the curve segment between S and that point fails
/// the interval-endpoint conditions defining membership.
pub fn sample_t2_curve(
    s: &CrystalSpectrum,
    branch: Branch,
    count: usize,
) -> Result<Vec<T2Point>> {
    assert!(count >= 2, "need at least two samples");
    let up = uniaxial_points(s);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let frac = i as f64 / (count - 1) as f64;
        let t = match branch {
            Branch::Alpha => {
                if i == 0 {
                    s.as_array()
                } else if i == count - 1 {
                    [up.u_alpha, up.u_alpha, 1.0 - 2.0 * up.u_alpha]
                } else {
                    let t1 = s.s1 + frac * (up.u_alpha - s.s1);
                    // valid region of F(t1, .) lies above its pole
                    let lo = t1.max(pole_in_y(t1, s.s2) * (1.0 + 1e-12) + 1e-15);
                    let g = |t2: f64| Ok(1.0 - t1 - t2 - f_eval(t1, t2, s)?);
                    let t2 = solve_companion(g, lo, s.s2, t1)?;
                    [t1, t2, 1.0 - t1 - t2]
                }
            }
            Branch::Beta => {
                if i == 0 {
                    beta_start(s)
                } else if i == count - 1 {
                    [1.0 - 2.0 * up.u_beta, up.u_beta, up.u_beta]
                } else {
                    let start = beta_start(s)[2];
                    let t3 = start + frac * (up.u_beta - start);
                    let g = |t2: f64| Ok(1.0 - t3 - t2 - f_eval(t3, t2, s)?);
                    let t2 = solve_companion(g, 0.5 * (1.0 - t3), t3, t3)?;
                    [1.0 - t3 - t2, t2, t3]
                }
            }
        };
        out.push(make_point(t, branch, s));
    }
    Ok(out)
}

fn z_values(p: &T2Point, s: &CrystalSpectrum) -> (f64, f64) {
    let [t1, t2, t3] = p.t;
    let s22 = s.s2 * s.s2;
    let s13 = s.s1 * s.s3;
    let z_mid = (s22 * t1 * t3 - s13 * t2 * t2) / ((s.s2 - t2) * t2);
    let z_first = match p.branch {
        Branch::Alpha => (s22 * t2 * t3 - s13 * t1 * t1) / ((s.s2 - t1) * t1),
        Branch::Beta => (s22 * t1 * t2 - s13 * t3 * t3) / ((s.s2 - t3) * t3),
    };
    (z_first, z_mid)
}

/// Residual of the defining branch equation; vanishes exactly on the
/// curve and stays finite at the endpoints.
pub fn branch_residual(p: &T2Point, s: &CrystalSpectrum) -> f64 {
    let [t1, t2, t3] = p.t;
    match p.branch {
        Branch::Alpha => f_eval(t1, t2, s).map(|f| t3 - f).unwrap_or(f64::INFINITY),
        Branch::Beta => f_eval(t3, t2, s).map(|f| t1 - f).unwrap_or(f64::INFINITY),
    }
}

fn block_angle(m11: f64, m33: f64, m13: f64, d_low: f64, d_high: f64) -> f64 {
    // 2x2 block R(theta)^t diag(d_low, d_high) R(theta) matched entrywise:
    // diagonal difference fixes cos(2 theta), off-diagonal fixes sin(2 theta)
    let c2 = (m11 - m33) / (d_low - d_high);
    let s2 = 2.0 * m13 / (d_high - d_low);
    0.5 * s2.atan2(c2)
}

/// Solves for the common normal and the two rotations realizing both
/// connections of a seed-curve point. Self-certifying: both identities are
/// checked to `tol` in Frobenius norm.
pub fn solve_double_connection(
    p: &T2Point,
    s: &CrystalSpectrum,
    tol: f64,
) -> Result<DoubleConnection> {
    let [t1, t2, t3] = p.t;
    if t2 - t1 < 1e-10 || t3 - t2 < 1e-10 {
        return Err(Error::UniaxialInput);
    }
    let (z1, z2) = z_values(p, s);
    let scale = 1.0 + z1.abs().max(z2.abs());
    if (z1 - z2).abs() > 1e-9 * scale {
        return Err(Error::NotOnT2Curve((z1 - z2).abs()));
    }
    let z = 0.5 * (z1 + z2);
    let cos2 = (z - s.s1) / (s.s3 - s.s1);
    if !(-1e-12..=1.0 + 1e-12).contains(&cos2) {
        return Err(Error::ZOutOfRange(z));
    }
    let phi = cos2.clamp(0.0, 1.0).sqrt().acos();
    let n = UnitVector3::new([phi.cos(), 0.0, phi.sin()])?;
    let nn = SymMat3::outer(&n);
    let m1 = s.diag().scale(p.lambda1).add(&nn.scale(1.0 - p.lambda1));
    let m2 = s.diag().scale(p.lambda2).add(&nn.scale(1.0 - p.lambda2));

    let theta1 = match p.branch {
        Branch::Alpha => block_angle(m1.a11, m1.a33, m1.a13, t2, t3),
        Branch::Beta => block_angle(m1.a11, m1.a33, m1.a13, t1, t2),
    };
    let (s1t, c1t) = theta1.sin_cos();
    let r1 = match p.branch {
        Branch::Alpha => Rotation3::new([
            [0.0, -1.0, 0.0],
            [-c1t, 0.0, s1t],
            [-s1t, 0.0, -c1t],
        ])?,
        Branch::Beta => Rotation3::new([
            [c1t, 0.0, -s1t],
            [s1t, 0.0, c1t],
            [0.0, -1.0, 0.0],
        ])?,
    };
    let theta2 = block_angle(m2.a11, m2.a33, m2.a13, t1, t3);
    let (s2t, c2t) = theta2.sin_cos();
    let r2 = Rotation3::new([[c2t, 0.0, -s2t], [0.0, 1.0, 0.0], [s2t, 0.0, c2t]])?;

    let diag_t = SymMat3::from_diag(p.t);
    let residual1 = conjugate(&r1, &diag_t).dist(&m1);
    let residual2 = conjugate(&r2, &diag_t).dist(&m2);
    if residual1 > tol || residual2 > tol {
        return Err(Error::ConnectionFailure(residual1.max(residual2)));
    }
    Ok(DoubleConnection {
        point: *p,
        n,
        r1,
        r2,
        phi,
        theta1,
        theta2,
        residual1,
        residual2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank_one::{admissible_lambdas, build_connection};

    fn std_s() -> CrystalSpectrum {
        CrystalSpectrum::new(0.2, 0.3, 0.5).unwrap()
    }

    #[test]
    fn f_endpoints_collapse() {
        let s = std_s();
        assert!((f_eval(s.s1, s.s2, &s).unwrap() - s.s3).abs() < 1e-14);
        assert!((f_eval(s.s3, s.s2, &s).unwrap() - s.s1).abs() < 1e-14);
    }

    #[test]
    fn f_direct_value() {
        let s = std_s();
        let den = 0.25 * 0.25 + 0.25 * 0.28 + 0.28 * 0.28 - 0.3 * (0.25 + 0.28);
        let expect = (0.2 * 0.5 / 0.3) * 0.25 * 0.28 / den;
        assert!((f_eval(0.25, 0.28, &s).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn f_singular_denominator() {
        let s = std_s();
        let x = 2.0 * s.s2 / 3.0;
        assert!(matches!(
            f_eval(x, x, &s).unwrap_err(),
            Error::SingularDenominator(_)
        ));
    }

    #[test]
    fn alpha_curve_endpoints() {
        let s = std_s();
        let pts = sample_t2_curve(&s, Branch::Alpha, 33).unwrap();
        assert_eq!(pts.len(), 33);
        let first = pts.first().unwrap();
        for (a, b) in first.t.iter().zip(s.as_array()) {
            assert!((a - b).abs() < 1e-10, "first sample should be S");
        }
        let up = uniaxial_points(&s);
        let last = pts.last().unwrap();
        assert!((last.t[0] - up.u_alpha).abs() < 1e-9);
        assert!((last.t[1] - up.u_alpha).abs() < 1e-9);
        assert!((last.t[2] - (1.0 - 2.0 * up.u_alpha)).abs() < 1e-9);
    }

    #[test]
    fn beta_curve_endpoints() {
        let s = std_s();
        let pts = sample_t2_curve(&s, Branch::Beta, 33).unwrap();
        let first = pts.first().unwrap();
        // geometric-progression start point, here (4, 6, 9)/19
        for (a, b) in first.t.iter().zip([4.0 / 19.0, 6.0 / 19.0, 9.0 / 19.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(branch_residual(first, &s).abs() < 1e-14);
        let up = uniaxial_points(&s);
        let last = pts.last().unwrap();
        assert!((last.t[1] - up.u_beta).abs() < 1e-9);
        assert!((last.t[2] - up.u_beta).abs() < 1e-9);
    }

    #[test]
    fn samples_are_ordered_unit_trace() {
        let s = std_s();
        for branch in [Branch::Alpha, Branch::Beta] {
            for p in sample_t2_curve(&s, branch, 41).unwrap() {
                let [t1, t2, t3] = p.t;
                assert!((t1 + t2 + t3 - 1.0).abs() < 1e-12);
                assert!(t1 <= t2 + 1e-12 && t2 <= t3 + 1e-12);
                assert!(branch_residual(&p, &s).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn double_connection_certifies() {
        let s = std_s();
        for branch in [Branch::Alpha, Branch::Beta] {
            let pts = sample_t2_curve(&s, branch, 21).unwrap();
            for p in &pts[1..pts.len() - 1] {
                let conn = solve_double_connection(p, &s, 1e-9).unwrap();
                assert!(conn.residual1 < 1e-9, "{branch:?}: {}", conn.residual1);
                assert!(conn.residual2 < 1e-9);
                // common normal has zero middle component
                assert_eq!(conn.n.0[1], 0.0);
            }
        }
    }

    #[test]
    fn lambdas_lie_in_admissible_set() {
        let s = std_s();
        let pts = sample_t2_curve(&s, Branch::Alpha, 21).unwrap();
        for p in &pts[1..pts.len() - 1] {
            let a = admissible_lambdas(p.t, &s).unwrap();
            assert!(a.contains(p.lambda1), "lambda1 {}", p.lambda1);
            assert!(a.contains(p.lambda2), "lambda2 {}", p.lambda2);
            assert!(0.0 < p.lambda1 && p.lambda1 < p.lambda2 && p.lambda2 < 1.0);
            // membership in the single-connection set at both multipliers
            build_connection(p.t, &s, p.lambda1, 1e-8).unwrap();
            build_connection(p.t, &s, p.lambda2, 1e-8).unwrap();
        }
        let pts = sample_t2_curve(&s, Branch::Beta, 21).unwrap();
        for p in &pts[1..pts.len() - 1] {
            assert!(1.0 < p.lambda2 && p.lambda2 < p.lambda1);
            let a = admissible_lambdas(p.t, &s).unwrap();
            assert!(a.contains(p.lambda1), "lambda1 {}", p.lambda1);
            assert!(a.contains(p.lambda2), "lambda2 {}", p.lambda2);
            build_connection(p.t, &s, p.lambda1, 1e-8).unwrap();
            build_connection(p.t, &s, p.lambda2, 1e-8).unwrap();
        }
    }

    #[test]
    fn off_curve_point_detected() {
        let s = std_s();
        let pts = sample_t2_curve(&s, Branch::Alpha, 11).unwrap();
        let mut p = pts[5];
        p.t[1] += 1e-3;
        p.t[2] -= 1e-3;
        assert!(branch_residual(&p, &s).abs() > 1e-6);
        assert!(matches!(
            solve_double_connection(&p, &s, 1e-9).unwrap_err(),
            Error::NotOnT2Curve(_)
        ));
    }

    #[test]
    fn uniaxial_point_rejected() {
        let s = std_s();
        let up = uniaxial_points(&s);
        let t = [up.u_alpha, up.u_alpha, 1.0 - 2.0 * up.u_alpha];
        let p = make_point(t, Branch::Alpha, &s);
        assert_eq!(
            solve_double_connection(&p, &s, 1e-9).unwrap_err(),
            Error::UniaxialInput
        );
    }

    #[test]
    fn lambda_limits_at_s() {
        let s = std_s();
        let pts = sample_t2_curve(&s, Branch::Alpha, 101).unwrap();
        let first = &pts[0];
        assert!((first.lambda1 - s.s1 / s.s2).abs() < 1e-9);
        assert!((first.lambda2 - 1.0).abs() < 1e-9);
    }
}
