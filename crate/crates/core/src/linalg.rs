//! Exact-shape 3x3 symmetric linear algebra, rotations and the unit-trace
//! plane projection used by every other module.
//!
//! Eigenvalues come from the analytic trigonometric solution of the shifted
//! characteristic polynomial, followed by one Newton polish per root.
//! Eigenvectors are cross products of rows of `M - m I`, picking the
//! largest-norm candidate, which stays robust near degeneracy.

use crate::error::{Error, Result};

/// Absolute gap below which two eigenvalues are treated as coincident.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// Symmetric 3x3 matrix stored by its six independent entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMat3 {
    pub a11: f64,
    pub a22: f64,
    pub a33: f64,
    pub a12: f64,
    pub a13: f64,
    pub a23: f64,
}

impl SymMat3 {
    pub fn new(a11: f64, a22: f64, a33: f64, a12: f64, a13: f64, a23: f64) -> Self {
        Self { a11, a22, a33, a12, a13, a23 }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        Self::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0)
    }

    pub fn from_diag(d: [f64; 3]) -> Self {
        Self::new(d[0], d[1], d[2], 0.0, 0.0, 0.0)
    }

    /// n (x) n for a unit vector n.
    pub fn outer(n: &UnitVector3) -> Self {
        let [n1, n2, n3] = n.0;
        Self::new(n1 * n1, n2 * n2, n3 * n3, n1 * n2, n1 * n3, n2 * n3)
    }

    pub fn is_finite(&self) -> bool {
        [self.a11, self.a22, self.a33, self.a12, self.a13, self.a23]
            .iter()
            .all(|v| v.is_finite())
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22 + self.a33
    }

    pub fn det(&self) -> f64 {
        self.a11 * (self.a22 * self.a33 - self.a23 * self.a23)
            - self.a12 * (self.a12 * self.a33 - self.a23 * self.a13)
            + self.a13 * (self.a12 * self.a23 - self.a22 * self.a13)
    }

    /// Sum of the principal 2x2 minors (second invariant).
    pub fn minor_sum(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
            + self.a11 * self.a33 - self.a13 * self.a13
            + self.a22 * self.a33 - self.a23 * self.a23
    }

    pub fn norm(&self) -> f64 {
        (self.a11 * self.a11
            + self.a22 * self.a22
            + self.a33 * self.a33
            + 2.0 * (self.a12 * self.a12 + self.a13 * self.a13 + self.a23 * self.a23))
            .sqrt()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i.min(j), i.max(j)) {
            (0, 0) => self.a11,
            (1, 1) => self.a22,
            (2, 2) => self.a33,
            (0, 1) => self.a12,
            (0, 2) => self.a13,
            (1, 2) => self.a23,
            _ => unreachable!("index out of range"),
        }
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        [
            [self.a11, self.a12, self.a13],
            [self.a12, self.a22, self.a23],
            [self.a13, self.a23, self.a33],
        ]
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.a11 + other.a11,
            self.a22 + other.a22,
            self.a33 + other.a33,
            self.a12 + other.a12,
            self.a13 + other.a13,
            self.a23 + other.a23,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.a11 - other.a11,
            self.a22 - other.a22,
            self.a33 - other.a33,
            self.a12 - other.a12,
            self.a13 - other.a13,
            self.a23 - other.a23,
        )
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(
            k * self.a11,
            k * self.a22,
            k * self.a33,
            k * self.a12,
            k * self.a13,
            k * self.a23,
        )
    }

    /// `t * B + (1 - t) * C`.
    pub fn lerp(b: &Self, c: &Self, t: f64) -> Self {
        b.scale(t).add(&c.scale(1.0 - t))
    }

    /// Frobenius distance.
    pub fn dist(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let r = self.rows();
        [
            r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
            r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
            r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2],
        ]
    }

    /// Frobenius distance to the best symmetric rank-one approximation,
    /// found by power iteration on the squared matrix. Machine-precision
    /// small exactly when the matrix has rank one; the char-poly eigenvalue
    /// route cannot certify that because the zero eigenvalue is repeated.
    pub fn rank_one_defect(&self) -> f64 {
        let norm = self.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let rows = self.rows();
        let mut v = rows
            .into_iter()
            .max_by(|a, b| {
                let na: f64 = a.iter().map(|x| x * x).sum();
                let nb: f64 = b.iter().map(|x| x * x).sum();
                na.partial_cmp(&nb).unwrap()
            })
            .unwrap();
        let len: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len == 0.0 {
            return norm;
        }
        for x in v.iter_mut() {
            *x /= len;
        }
        for _ in 0..64 {
            let w = self.apply(self.apply(v));
            let wl: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if wl < 1e-300 * norm {
                break;
            }
            v = [w[0] / wl, w[1] / wl, w[2] / wl];
        }
        let av = self.apply(v);
        let sigma: f64 = v.iter().zip(av).map(|(a, b)| a * b).sum();
        let mut residual = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let d = self.get(i, j) - sigma * v[i] * v[j];
                residual += d * d;
            }
        }
        residual.sqrt()
    }

    /// Singular values in descending order. For a symmetric matrix these are
    /// the absolute eigenvalues.
    pub fn singular_values(&self) -> Result<[f64; 3]> {
        let spec = eigvals_sym3(self)?;
        let mut sv = [spec.m[0].abs(), spec.m[1].abs(), spec.m[2].abs()];
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(sv)
    }
}

/// Ordered eigenvalue triple with its trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    /// Ascending eigenvalues.
    pub m: [f64; 3],
    pub trace: f64,
}

impl Spectrum {
    fn from_sorted(m: [f64; 3]) -> Self {
        Self { m, trace: m[0] + m[1] + m[2] }
    }
}

/// Crystal spectrum: strictly ordered positive eigenvalues with unit trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalSpectrum {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl CrystalSpectrum {
    pub fn new(s1: f64, s2: f64, s3: f64) -> Result<Self> {
        let finite = s1.is_finite() && s2.is_finite() && s3.is_finite();
        if !finite || !(0.0 < s1 && s1 < s2 && s2 < s3) {
            return Err(Error::InvalidSpectrum(s1, s2, s3));
        }
        if (s1 + s2 + s3 - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnitTrace(s1 + s2 + s3));
        }
        Ok(Self { s1, s2, s3 })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }

    pub fn diag(&self) -> SymMat3 {
        SymMat3::from_diag(self.as_array())
    }
}

/// Unit vector in R^3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3(pub [f64; 3]);

impl UnitVector3 {
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidUnitVector(norm));
        }
        Ok(Self(v))
    }

    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidUnitVector(norm));
        }
        Ok(Self([v[0] / norm, v[1] / norm, v[2] / norm]))
    }
}

/// Point in the projected unit-trace plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn dist(&self, other: &Self) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// Proper rotation, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3(pub [[f64; 3]; 3]);

impl Rotation3 {
    pub fn identity() -> Self {
        Self([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    /// Validates orthonormality and det = +1 to 1e-12.
    pub fn new(rows: [[f64; 3]; 3]) -> Result<Self> {
        let r = Self(rows);
        let mut max_dev: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| rows[i][k] * rows[j][k]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                max_dev = max_dev.max((dot - target).abs());
            }
        }
        if max_dev > 1e-12 || (r.det() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidRotation);
        }
        Ok(r)
    }

    pub fn det(&self) -> f64 {
        let m = self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn transpose(&self) -> Self {
        let m = self.0;
        Self([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let a = self.0;
        let b = other.0;
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        Self(out)
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }
}

/// `R^t M R`.
pub fn conjugate(r: &Rotation3, m: &SymMat3) -> SymMat3 {
    let rm = r.0;
    let rows = m.rows();
    // B = M R
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (0..3).map(|k| rows[i][k] * rm[k][j]).sum();
        }
    }
    // C = R^t B
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| rm[k][i] * b[k][j]).sum();
        }
    }
    // symmetrize to kill round-off skew
    SymMat3::new(
        c[0][0],
        c[1][1],
        c[2][2],
        0.5 * (c[0][1] + c[1][0]),
        0.5 * (c[0][2] + c[2][0]),
        0.5 * (c[1][2] + c[2][1]),
    )
}

fn char_poly(m: &SymMat3, x: f64) -> f64 {
    -x * x * x + m.trace() * x * x - m.minor_sum() * x + m.det()
}

fn char_poly_deriv(m: &SymMat3, x: f64) -> f64 {
    -3.0 * x * x + 2.0 * m.trace() * x - m.minor_sum()
}

/// Ascending eigenvalues of a symmetric 3x3 matrix.
pub fn eigvals_sym3(m: &SymMat3) -> Result<Spectrum> {
    if !m.is_finite() {
        return Err(Error::InvalidMatrix);
    }
    let p1 = m.a12 * m.a12 + m.a13 * m.a13 + m.a23 * m.a23;
    let mut ev = if p1 == 0.0 {
        [m.a11, m.a22, m.a33]
    } else {
        let q = m.trace() / 3.0;
        let d = [m.a11 - q, m.a22 - q, m.a33 - q];
        let p2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let b = m.sub(&SymMat3::identity().scale(q)).scale(1.0 / p);
        let r = (b.det() / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let hi = q + 2.0 * p * phi.cos();
        let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3 * 2.0).cos();
        [lo, 3.0 * q - hi - lo, hi]
    };
    // Newton polish, capped so an ill-conditioned derivative at a repeated
    // root cannot push an accurate value away
    let cap = 1e-8 * (1.0 + m.norm());
    for e in ev.iter_mut() {
        for _ in 0..2 {
            let dp = char_poly_deriv(m, *e);
            if dp.abs() > 1e-300 {
                let step = char_poly(m, *e) / dp;
                if step.is_finite() && step.abs() < cap {
                    *e -= step;
                }
            }
        }
    }
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(Spectrum::from_sorted(ev))
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn scale3(v: [f64; 3], k: f64) -> [f64; 3] {
    [k * v[0], k * v[1], k * v[2]]
}

/// Best cross-product eigenvector candidate of `M - e I`, if any survives.
fn eigvec_candidate(m: &SymMat3, e: f64) -> Option<[f64; 3]> {
    let a = m.sub(&SymMat3::identity().scale(e));
    let rows = a.rows();
    let cands = [
        cross(rows[0], rows[1]),
        cross(rows[0], rows[2]),
        cross(rows[1], rows[2]),
    ];
    let best = cands
        .into_iter()
        .max_by(|u, v| norm3(*u).partial_cmp(&norm3(*v)).unwrap())?;
    let n = norm3(best);
    if n < 1e-12 * (1.0 + m.norm() * m.norm()) {
        None
    } else {
        Some(scale3(best, 1.0 / n))
    }
}

/// Any unit vector orthogonal to `v`.
fn orthogonal_to(v: [f64; 3]) -> [f64; 3] {
    let axis = if v[0].abs() <= v[1].abs() && v[0].abs() <= v[2].abs() {
        [1.0, 0.0, 0.0]
    } else if v[1].abs() <= v[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let c = cross(v, axis);
    scale3(c, 1.0 / norm3(c))
}

/// Result of [`eigendecompose_sym3`]: `rotation^t * diag(spectrum) * rotation`
/// reconstructs the input. `degenerate` marks eigenvalue gaps below
/// [`DEGENERACY_GAP`], where eigenvectors are not unique.
#[derive(Debug, Clone, Copy)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    pub rotation: Rotation3,
    pub degenerate: bool,
}

pub fn eigendecompose_sym3(m: &SymMat3) -> Result<EigenDecomposition> {
    let spectrum = eigvals_sym3(m)?;
    let [m1, m2, m3] = spectrum.m;
    let low_pair = m2 - m1 < DEGENERACY_GAP;
    let high_pair = m3 - m2 < DEGENERACY_GAP;
    let degenerate = low_pair || high_pair;

    let (v1, v2, v3) = if low_pair && high_pair {
        ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0])
    } else if high_pair {
        let v1 = eigvec_candidate(m, m1).unwrap_or([1.0, 0.0, 0.0]);
        let v2 = orthogonal_to(v1);
        let v3 = cross(v1, v2);
        (v1, v2, v3)
    } else if low_pair {
        let v3 = eigvec_candidate(m, m3).unwrap_or([0.0, 0.0, 1.0]);
        let v1 = orthogonal_to(v3);
        let v2 = cross(v3, v1);
        (v1, v2, v3)
    } else {
        let v1 = eigvec_candidate(m, m1).unwrap_or([1.0, 0.0, 0.0]);
        let mut v3 = eigvec_candidate(m, m3).unwrap_or([0.0, 0.0, 1.0]);
        // re-orthogonalize against v1
        let dot = v1[0] * v3[0] + v1[1] * v3[1] + v1[2] * v3[2];
        v3 = [v3[0] - dot * v1[0], v3[1] - dot * v1[1], v3[2] - dot * v1[2]];
        v3 = scale3(v3, 1.0 / norm3(v3));
        let v2 = cross(v3, v1);
        (v1, v2, v3)
    };

    let mut rows = [v1, v2, v3];
    let mut rot = Rotation3(rows);
    if rot.det() < 0.0 {
        rows[1] = scale3(rows[1], -1.0);
        rot = Rotation3(rows);
    }
    Ok(EigenDecomposition { spectrum, rotation: rot, degenerate })
}

/// Orthogonal projection of a unit-trace triple onto the viewing plane:
/// `x = (m2 - m1)/sqrt(2)`, `y = (2 m3 - m1 - m2)/sqrt(6)`.
pub fn project_unit_trace(m: [f64; 3]) -> Result<PlanePoint> {
    let trace = m[0] + m[1] + m[2];
    if (trace - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnitTrace(trace));
    }
    Ok(PlanePoint {
        x: (m[1] - m[0]) / 2.0_f64.sqrt(),
        y: (2.0 * m[2] - m[0] - m[1]) / 6.0_f64.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn rot_z(angle: f64) -> Rotation3 {
        let (s, c) = angle.sin_cos();
        Rotation3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    }

    #[test]
    fn identity_eigvals() {
        let s = eigvals_sym3(&SymMat3::identity()).unwrap();
        assert_eq!(s.m, [1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_eigvals() {
        let s = eigvals_sym3(&SymMat3::from_diag([0.5, 0.2, 0.3])).unwrap();
        assert_eq!(s.m, [0.2, 0.3, 0.5]);
    }

    #[test]
    fn conjugation_invariance() {
        let d = SymMat3::from_diag([0.2, 0.3, 0.5]);
        let r = rot_z(std::f64::consts::FRAC_PI_4);
        let m = conjugate(&r, &d);
        let s = eigvals_sym3(&m).unwrap();
        for (a, b) in s.m.iter().zip([0.2, 0.3, 0.5]) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn eigvals_residual_bound() {
        let mut rng = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..200 {
            let m = SymMat3::new(next(), next(), next(), next(), next(), next());
            let s = eigvals_sym3(&m).unwrap();
            let bound = 1e-9 * (1.0 + m.norm().powi(3));
            for e in s.m {
                let resid = m.sub(&SymMat3::identity().scale(e)).det().abs();
                assert!(resid <= bound, "residual {resid} > {bound}");
            }
        }
    }

    #[test]
    fn decompose_round_trip() {
        let d = SymMat3::from_diag([0.2, 0.3, 0.5]);
        let r = rot_z(0.83);
        let m = conjugate(&r, &d);
        let dec = eigendecompose_sym3(&m).unwrap();
        assert!(!dec.degenerate);
        let rebuilt = conjugate(&dec.rotation, &SymMat3::from_diag(dec.spectrum.m));
        assert!(rebuilt.dist(&m) < 1e-9 * (1.0 + m.norm()));
        assert!((dec.rotation.det() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn decompose_diagonal_is_identity_rotation() {
        let d = SymMat3::from_diag([0.2, 0.3, 0.5]);
        let dec = eigendecompose_sym3(&d).unwrap();
        let rebuilt = conjugate(&dec.rotation, &SymMat3::from_diag(dec.spectrum.m));
        assert!(rebuilt.dist(&d) < 1e-12);
    }

    #[test]
    fn decompose_isotropic_flags_degenerate() {
        let m = SymMat3::identity().scale(1.0 / 3.0);
        let dec = eigendecompose_sym3(&m).unwrap();
        assert!(dec.degenerate);
        for e in dec.spectrum.m {
            assert!((e - 1.0 / 3.0).abs() < 1e-14);
        }
        let rebuilt = conjugate(&dec.rotation, &SymMat3::from_diag(dec.spectrum.m));
        assert!(rebuilt.dist(&m) < 1e-12);
    }

    #[test]
    fn projection_center_and_uniaxial_line() {
        let p = project_unit_trace([1.0 / 3.0; 3]).unwrap();
        assert!(p.x.abs() < 1e-15 && p.y.abs() < 1e-15);
        let p = project_unit_trace([0.25, 0.25, 0.5]).unwrap();
        assert!(p.x.abs() < 1e-15);
    }

    #[test]
    fn projection_swap_is_reflection() {
        let m = [0.2, 0.3, 0.5];
        let p = project_unit_trace(m).unwrap();
        let q = project_unit_trace([m[1], m[0], m[2]]).unwrap();
        assert!((p.x + q.x).abs() < 1e-15);
        assert!((p.y - q.y).abs() < 1e-15);
    }

    #[test]
    fn projection_cycle_is_rotation() {
        // cyclic permutation of coordinates acts as a 2*pi/3 rotation in the plane
        let m = [0.2, 0.3, 0.5];
        let cyc = [m[2], m[0], m[1]];
        let p = project_unit_trace(m).unwrap();
        let q = project_unit_trace(cyc).unwrap();
        let ang = 2.0 * std::f64::consts::PI / 3.0;
        let rx = ang.cos() * p.x - ang.sin() * p.y;
        let ry = ang.sin() * p.x + ang.cos() * p.y;
        let hit = ((q.x - rx).powi(2) + (q.y - ry).powi(2)).sqrt() < 1e-12
            || ((q.x - (ang.cos() * p.x + ang.sin() * p.y)).powi(2)
                + (q.y - (-ang.sin() * p.x + ang.cos() * p.y)).powi(2))
            .sqrt()
                < 1e-12;
        assert!(hit, "cycle is not a 2pi/3 rotation");
    }

    #[test]
    fn non_finite_rejected() {
        let m = SymMat3::new(f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(eigvals_sym3(&m), Err(Error::InvalidMatrix));
    }
}
