//! Conductivity-facing transform: the cubic for theta, the spectrum map
//! sigma -> S, the inverse map s* -> sigma*, and sweeps of the attained
//! effective-tensor slice with bound residuals.

use crate::attainable::full_boundary;
use crate::error::{Error, Result};
use crate::linalg::CrystalSpectrum;

/// Descending conductivity triple together with its derived data.
#[derive(Debug, Clone)]
pub struct PolycrystalProblem {
    pub sigma: [f64; 3],
    pub theta: f64,
    pub s: CrystalSpectrum,
}

fn cubic(sigma: [f64; 3], theta: f64) -> f64 {
    let tr: f64 = sigma.iter().sum();
    let det: f64 = sigma.iter().product();
    2.0 * theta.powi(3) + tr * theta * theta - det
}

/// Least positive root of `2 t^3 + Tr(sigma) t^2 - det(sigma) = 0`.
/// The cubic is strictly increasing on t > 0, so the root is unique.
pub fn solve_theta(sigma: [f64; 3]) -> Result<f64> {
    if !(sigma[0] > sigma[1] && sigma[1] > sigma[2] && sigma[2] > 0.0) {
        return Err(Error::OrderingError);
    }
    let det: f64 = sigma.iter().product();
    let tr: f64 = sigma.iter().sum();
    let mut lo = 0.0_f64;
    let mut hi = (det / 2.0).cbrt();
    if cubic(sigma, lo) >= 0.0 || cubic(sigma, hi) < 0.0 {
        return Err(Error::RootBracketFailure);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if cubic(sigma, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut theta = 0.5 * (lo + hi);
    for _ in 0..3 {
        let g = cubic(sigma, theta);
        let dg = 6.0 * theta * theta + 2.0 * tr * theta;
        theta -= g / dg;
    }
    if cubic(sigma, theta).abs() >= 1e-12 * det {
        return Err(Error::RootBracketFailure);
    }
    Ok(theta)
}

/// Solves for theta and maps the descending sigma to the ascending
/// crystal spectrum `s_i = theta / (theta + sigma_{4-i})`.
pub fn problem_from_sigma(sigma: [f64; 3]) -> Result<PolycrystalProblem> {
    let theta = solve_theta(sigma)?;
    let s_arr = [
        theta / (theta + sigma[0]),
        theta / (theta + sigma[1]),
        theta / (theta + sigma[2]),
    ];
    let tr: f64 = s_arr.iter().sum();
    // unit trace is exactly the cubic identity
    if (tr - 1.0).abs() > 1e-12 {
        return Err(Error::ThetaInconsistent(tr - 1.0));
    }
    let s = CrystalSpectrum::new(s_arr[0], s_arr[1], s_arr[2])?;
    Ok(PolycrystalProblem { sigma, theta, s })
}

/// Image of an admissible spectrum under the inverse map, with the bound
/// residual of the effective tensor.
#[derive(Debug, Clone, Copy)]
pub struct SigmaStar {
    pub sigma: [f64; 3],
    pub saturation_residual: f64,
    pub on_bound_surface: bool,
}

/// `sigma*_i = theta (1 / s*_i - 1)` with the trace and box bounds checked.
pub fn sigma_star(problem: &PolycrystalProblem, sstar: [f64; 3]) -> Result<SigmaStar> {
    let s = &problem.s;
    let tr: f64 = sstar.iter().sum();
    if (tr - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnitTrace(tr));
    }
    for v in sstar {
        if v < s.s1 - 1e-12 || v > s.s3 + 1e-12 {
            return Err(Error::OutOfKStarRange(v));
        }
    }
    let theta = problem.theta;
    let out = [
        theta * (1.0 / sstar[0] - 1.0),
        theta * (1.0 / sstar[1] - 1.0),
        theta * (1.0 / sstar[2] - 1.0),
    ];
    let (sig1, sig3) = (problem.sigma[0], problem.sigma[2]);
    for v in out {
        if v < sig3 - 1e-10 || v > sig1 + 1e-10 {
            return Err(Error::IdentityFailure((v - sig1).max(sig3 - v)));
        }
    }
    let tr_in: f64 = problem.sigma.iter().sum();
    let tr_out: f64 = out.iter().sum();
    if tr_out > tr_in + 1e-10 {
        return Err(Error::IdentityFailure(tr_out - tr_in));
    }
    let det_out: f64 = out.iter().product();
    let residual = (det_out - theta * theta * tr_out - 2.0 * theta.powi(3)).abs();
    Ok(SigmaStar {
        sigma: out,
        saturation_residual: residual,
        on_bound_surface: residual <= 1e-9 * det_out.abs().max(1e-300),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SliceRow {
    pub sstar: [f64; 3],
    pub sigma_star: [f64; 3],
    pub saturation_residual: f64,
    pub on_boundary: bool,
}

/// Pushes sampled attainable spectra (boundary plus shrunken rings)
/// through the inverse map. Emits exactly `count` rows.
pub fn g_closure_slice(sigma: [f64; 3], count: usize) -> Result<Vec<SliceRow>> {
    assert!(count >= 1);
    let problem = problem_from_sigma(sigma)?;
    let region = full_boundary(&problem.s, 64)?;
    let boundary = &region.samples;
    const RINGS: usize = 4;
    let per_ring = count.div_ceil(RINGS);
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let ring = i % RINGS;
        let along = (i / RINGS) as f64 / per_ring.max(1) as f64;
        let idx = ((along * (boundary.len() - 1) as f64) as usize).min(boundary.len() - 1);
        let m_b = boundary[idx].m;
        let scale = 1.0 - 0.22 * ring as f64;
        let c = 1.0 / 3.0;
        let sstar = [
            c + scale * (m_b[0] - c),
            c + scale * (m_b[1] - c),
            c + scale * (m_b[2] - c),
        ];
        let image = sigma_star(&problem, sstar)?;
        rows.push(SliceRow {
            sstar,
            sigma_star: image.sigma,
            saturation_residual: image.saturation_residual,
            on_boundary: ring == 0,
        });
    }
    Ok(rows)
}
