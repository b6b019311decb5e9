//! Admissible lambda intervals, connection normals from the residue
//! formulas, and certified rank-one connections
//! `R^t diag(T) R = lambda S + (1 - lambda) n (x) n`.

use crate::error::{Error, Result};
use crate::linalg::{
    conjugate, eigendecompose_sym3, CrystalSpectrum, Rotation3, SymMat3, UnitVector3,
};

/// Closed interval with the convention `[a, b] = empty if a > b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        !self.is_empty() && self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }
}

/// The two admissible lambda intervals: A_alpha below 1, A_beta above 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleSet {
    pub a_alpha: Interval,
    pub a_beta: Interval,
}

impl AdmissibleSet {
    pub fn contains(&self, lambda: f64) -> bool {
        self.a_alpha.contains(lambda) || self.a_beta.contains(lambda)
    }

    pub fn is_empty(&self) -> bool {
        self.a_alpha.is_empty() && self.a_beta.is_empty()
    }
}

/// Certified rank-one connection between `diag(T)` (up to rotation) and
/// `lambda S + (1 - lambda) n (x) n`.
#[derive(Debug, Clone)]
pub struct RankOneConnection {
    pub lambda: f64,
    pub n: UnitVector3,
    pub rotation: Rotation3,
    pub t: [f64; 3],
    pub s: CrystalSpectrum,
    /// Frobenius residual of the defining identity.
    pub residual: f64,
    /// Eigenvalue matching hit a near-degenerate T.
    pub degenerate: bool,
}

fn check_pair(t: [f64; 3], s: &CrystalSpectrum) -> Result<()> {
    let tol = 1e-12;
    if !(s.s1 - tol <= t[0] && t[0] <= t[1] + tol && t[1] <= t[2] + tol && t[2] <= s.s3 + tol) {
        return Err(Error::OrderingError);
    }
    let trace = t[0] + t[1] + t[2];
    if (trace - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnitTrace(trace));
    }
    Ok(())
}

/// The set `A(T, S) = A_alpha u A_beta` of admissible lambdas.
pub fn admissible_lambdas(t: [f64; 3], s: &CrystalSpectrum) -> Result<AdmissibleSet> {
    check_pair(t, s)?;
    let [t1, t2, t3] = t;
    let a_alpha = Interval::new((t1 / s.s2).max(t2 / s.s3), (t2 / s.s2).min(t3 / s.s3));
    let a_beta = Interval::new((t1 / s.s1).max(t2 / s.s2), (t2 / s.s1).min(t3 / s.s2));
    Ok(AdmissibleSet { a_alpha, a_beta })
}

/// Squared components of the connection normal, from the residue formulas.
/// Tiny negative values (>= -1e-12) are clamped to zero; anything more
/// negative means lambda is not admissible.
pub fn normal_squares(t: [f64; 3], s: &CrystalSpectrum, lambda: f64) -> Result<[f64; 3]> {
    check_pair(t, s)?;
    if (lambda - 1.0).abs() < 1e-12 {
        return Err(Error::DegenerateLambda);
    }
    if lambda <= 0.0 {
        return Err(Error::NotAdmissible(lambda, 0.0));
    }
    let sv = s.as_array();
    let common = lambda * lambda * (1.0 - lambda);
    let mut sq = [0.0; 3];
    for k in 0..3 {
        let p = (k + 1) % 3;
        let q = (k + 2) % 3;
        let num = (t[0] - lambda * sv[k]) * (t[1] - lambda * sv[k]) * (t[2] - lambda * sv[k]);
        let den = common * (sv[k] - sv[p]) * (sv[k] - sv[q]);
        sq[k] = num / den;
    }
    for v in sq.iter_mut() {
        if *v < 0.0 {
            if *v < -1e-12 {
                return Err(Error::NotAdmissible(lambda, *v));
            }
            *v = 0.0;
        }
    }
    Ok(sq)
}

/// Builds and certifies a rank-one connection at an admissible lambda.
pub fn build_connection(
    t: [f64; 3],
    s: &CrystalSpectrum,
    lambda: f64,
    tol: f64,
) -> Result<RankOneConnection> {
    let sq = normal_squares(t, s, lambda)?;
    let n = UnitVector3::new([sq[0].sqrt(), sq[1].sqrt(), sq[2].sqrt()])
        .map_err(|_| Error::NotAdmissible(lambda, sq[0] + sq[1] + sq[2] - 1.0))?;
    let target = s.diag().scale(lambda).add(&SymMat3::outer(&n).scale(1.0 - lambda));
    let dec = eigendecompose_sym3(&target)?;
    let mut sorted_t = t;
    sorted_t.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let max_dev = dec
        .spectrum
        .m
        .iter()
        .zip(sorted_t.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    if max_dev > 1e-8 {
        return Err(Error::ConnectionFailure(max_dev));
    }
    let rebuilt = conjugate(&dec.rotation, &SymMat3::from_diag(sorted_t));
    let residual = rebuilt.dist(&target);
    if residual > tol {
        return Err(Error::ConnectionFailure(residual));
    }
    Ok(RankOneConnection {
        lambda,
        n,
        rotation: dec.rotation,
        t: sorted_t,
        s: *s,
        residual,
        degenerate: dec.degenerate,
    })
}
