//! Infinite-rank lamination: schedule parameters extracted from a double
//! connection, the k-indexed splitting sequence with its exact weight
//! ledger, support classification, and a reverse-splitting validator for
//! finite-order laminates.

use crate::error::{Error, Result};
use crate::linalg::{conjugate, eigvals_sym3, CrystalSpectrum, Rotation3, SymMat3, UnitVector3};
use crate::t2::{Branch, DoubleConnection};

#[derive(Debug, Clone, Copy)]
pub struct DiracAtom {
    pub matrix: SymMat3,
    pub weight: f64,
}

/// Finitely supported probability measure with a generation counter.
#[derive(Debug, Clone)]
pub struct LaminateMeasure {
    pub atoms: Vec<DiracAtom>,
    pub generation: u32,
}

impl LaminateMeasure {
    pub fn new(atoms: Vec<DiracAtom>, generation: u32) -> Self {
        assert!(!atoms.is_empty());
        let mass: f64 = atoms.iter().map(|a| a.weight).sum();
        assert!((mass - 1.0).abs() <= 1e-12, "weights must sum to one");
        assert!(atoms.iter().all(|a| a.weight > 0.0));
        LaminateMeasure { atoms, generation }
    }

    pub fn dirac(matrix: SymMat3) -> Self {
        LaminateMeasure { atoms: vec![DiracAtom { matrix, weight: 1.0 }], generation: 0 }
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn barycenter(&self) -> SymMat3 {
        let mut acc = SymMat3::zero();
        for a in &self.atoms {
            acc = acc.add(&a.matrix.scale(a.weight));
        }
        acc
    }

    pub fn moment(&self, r: f64) -> f64 {
        assert!(r >= 1.0);
        self.atoms.iter().map(|a| a.weight * a.matrix.norm().powf(r)).sum()
    }
}

/// Closed-form parameters of the splitting sequence.
#[derive(Debug, Clone)]
pub struct LaminationSchedule {
    pub branch: Branch,
    pub p: f64,
    pub q: f64,
    pub lambda: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub q_rot: Rotation3,
    pub s0: SymMat3,
    pub t0: SymMat3,
    pub n: UnitVector3,
    pub barycenter: SymMat3,
    /// Moment-growth threshold; infinite on the beta branch.
    pub r_bar: f64,
}

pub fn make_schedule(
    conn: &DoubleConnection,
    a: &SymMat3,
    s: &CrystalSpectrum,
) -> Result<LaminationSchedule> {
    let (l1, l2) = (conn.point.lambda1, conn.point.lambda2);
    let q = l1 * (1.0 - l2) / (l2 * (1.0 - l1));
    if !(0.0 < q && q < 1.0) {
        return Err(Error::OrderingError);
    }
    let lambda = l2 / l1;
    match conn.point.branch {
        Branch::Alpha => debug_assert!(lambda > 1.0),
        Branch::Beta => debug_assert!(lambda < 1.0),
    }
    let q_rot = conn.r2.transpose().mul(&conn.r1);
    let s0 = s.diag().scale(l1);
    let t0 = conjugate(&conn.r1, &SymMat3::from_diag(conn.point.t));
    let rank_one_part = SymMat3::outer(&conn.n).scale(1.0 - l1);
    let drift = t0.sub(&s0).dist(&rank_one_part);
    if drift > 1e-10 {
        return Err(Error::NotRankOne(drift));
    }
    // least-squares projection of A on the segment from S0 to T0
    let dir = t0.sub(&s0);
    let dir_norm2 = dir.norm().powi(2);
    let rel = a.sub(&s0);
    let t_hat = frob_inner(&rel, &dir) / dir_norm2;
    let residual = SymMat3::lerp(&t0, &s0, t_hat).dist(a);
    if residual > 1e-10 {
        return Err(Error::NotOnSegment(residual));
    }
    let p = 1.0 - t_hat;
    if !(p > 1e-12 && p < 1.0 - 1e-12) {
        return Err(Error::DegenerateBarycenter(p));
    }
    let r_bar = match conn.point.branch {
        Branch::Alpha => {
            let [t1, t2, _] = conn.point.t;
            1.0 + ((s.s2 - t1) / (s.s2 - t2)).ln() / (t2 / t1).ln()
        }
        Branch::Beta => f64::INFINITY,
    };
    Ok(LaminationSchedule {
        branch: conn.point.branch,
        p,
        q,
        lambda,
        lambda1: l1,
        lambda2: l2,
        q_rot,
        s0,
        t0,
        n: conn.n,
        barycenter: *a,
        r_bar,
    })
}

fn frob_inner(a: &SymMat3, b: &SymMat3) -> f64 {
    a.a11 * b.a11
        + a.a22 * b.a22
        + a.a33 * b.a33
        + 2.0 * (a.a12 * b.a12 + a.a13 * b.a13 + a.a23 * b.a23)
}

/// Replaces one atom by the pair of endpoints of a rank-one segment
/// through it; mass and barycenter are conserved.
pub fn split(
    mu: &LaminateMeasure,
    atom_index: usize,
    b: &SymMat3,
    c: &SymMat3,
    t: f64,
) -> Result<LaminateMeasure> {
    let diff = b.sub(c);
    let defect = diff.rank_one_defect();
    if defect >= 1e-10 * diff.norm().max(1e-300) {
        return Err(Error::NotRankOne(defect));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::NotConvexCombination(t));
    }
    let combo = b.scale(t).add(&c.scale(1.0 - t));
    let residual = combo.dist(&mu.atoms[atom_index].matrix);
    if residual > 1e-10 * (1.0 + mu.atoms[atom_index].matrix.norm()) {
        return Err(Error::NotConvexCombination(residual));
    }
    let w = mu.atoms[atom_index].weight;
    let mut atoms = mu.atoms.clone();
    atoms.remove(atom_index);
    if t > 0.0 {
        atoms.push(DiracAtom { matrix: *b, weight: w * t });
    }
    if t < 1.0 {
        atoms.push(DiracAtom { matrix: *c, weight: w * (1.0 - t) });
    }
    Ok(LaminateMeasure::new(atoms, mu.generation + 1))
}

/// Builds the measures of generations 0..=k_max. Generation k carries the
/// outside atom `T_k` with ledger weight exactly `(1 - p) q^k`.
pub fn build_sequence(
    sched: &LaminationSchedule,
    k_max: u32,
) -> Result<Vec<LaminateMeasure>> {
    assert!(k_max >= 1);
    let p = sched.p;
    let q = sched.q;
    let first = split(
        &LaminateMeasure::dirac(sched.barycenter),
        0,
        &sched.s0,
        &sched.t0,
        p,
    )
    .map_err(|e| Error::ConstructionDrift(0, Box::new(e)))?;
    let mut out = vec![first];
    // running power of Q and of lambda for the closed forms
    let mut qk = sched.q_rot;
    let mut lk = sched.lambda;
    for k in 0..k_max {
        let prev = out.last().unwrap();
        let s_next = conjugate(&qk, &sched.s0).scale(lk);
        let t_next = conjugate(&qk, &sched.t0).scale(lk);
        let idx = prev.atoms.len() - 1; // the T_k atom is always the last pushed
        let mut next = split(prev, idx, &s_next, &t_next, 1.0 - q)
            .map_err(|e| Error::ConstructionDrift(k + 1, Box::new(e)))?;
        // pin the ledger to the closed-form weights
        let m = next.atoms.len();
        next.atoms[m - 2].weight = (1.0 - p) * q.powi(k as i32) * (1.0 - q);
        next.atoms[m - 1].weight = (1.0 - p) * q.powi(k as i32 + 1);
        out.push(next);
        qk = qk.mul(&sched.q_rot);
        lk *= sched.lambda;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct AtomClass {
    pub weight: f64,
    pub lambda_star: f64,
    pub residual: f64,
    pub in_k: bool,
}

#[derive(Debug, Clone)]
pub struct SupportReport {
    pub atoms: Vec<AtomClass>,
    pub outside_mass: f64,
}

/// Per-atom membership in the set of scaled rotated copies of diag(S).
pub fn classify_support(mu: &LaminateMeasure, s: &CrystalSpectrum) -> Result<SupportReport> {
    let sv = s.as_array();
    let ss: f64 = sv.iter().map(|x| x * x).sum();
    let mut atoms = Vec::with_capacity(mu.atoms.len());
    let mut outside_mass = 0.0;
    for atom in &mu.atoms {
        let m = eigvals_sym3(&atom.matrix)?.m;
        // a negative multiple has the eigenvalue order reversed
        let fit = |spec: [f64; 3]| -> (f64, f64) {
            let l: f64 = m.iter().zip(spec).map(|(a, b)| a * b).sum::<f64>() / ss;
            let r: f64 = m
                .iter()
                .zip(spec)
                .map(|(a, b)| (a - l * b).powi(2))
                .sum::<f64>()
                .sqrt();
            (l, r)
        };
        let (l_fwd, r_fwd) = fit(sv);
        let (l_rev, r_rev) = fit([sv[2], sv[1], sv[0]]);
        let (lambda_star, residual) = if r_fwd <= r_rev { (l_fwd, r_fwd) } else { (l_rev, r_rev) };
        let scale = 1.0 + m.iter().map(|x| x * x).sum::<f64>().sqrt();
        let in_k = residual <= 1e-8 * scale;
        if !in_k {
            outside_mass += atom.weight;
        }
        atoms.push(AtomClass { weight: atom.weight, lambda_star, residual, in_k });
    }
    Ok(SupportReport { atoms, outside_mass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Laminate,
    NotLaminate,
    Inconclusive,
}

/// Reverse-splitting search: merges rank-one pairs until a single Dirac
/// remains; node budget `max_depth` bounds the backtracking.
pub fn validate_laminate(mu: &LaminateMeasure, max_depth: u32) -> Validity {
    assert!(mu.atoms.len() <= 64, "desk scale only");
    let mut budget = max_depth as i64;
    let atoms: Vec<DiracAtom> = mu.atoms.clone();
    reduce(&atoms, &mut budget)
}

fn reduce(atoms: &[DiracAtom], budget: &mut i64) -> Validity {
    if atoms.len() == 1 {
        return Validity::Laminate;
    }
    // candidate merges, best rank-one fit first
    let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..atoms.len() {
        for j in (i + 1)..atoms.len() {
            let diff = atoms[i].matrix.sub(&atoms[j].matrix);
            let norm = diff.norm();
            if norm < 1e-14 {
                continue;
            }
            let defect = diff.rank_one_defect();
            if defect < 1e-10 * norm {
                pairs.push((i, j, defect / norm));
            }
        }
    }
    if pairs.is_empty() {
        return Validity::NotLaminate;
    }
    pairs.sort_by(|a, b| a.2.partial_cmp(&b.2).unwrap());
    let mut saw_inconclusive = false;
    for (i, j, _) in pairs {
        if *budget <= 0 {
            return Validity::Inconclusive;
        }
        *budget -= 1;
        let wi = atoms[i].weight;
        let wj = atoms[j].weight;
        let w = wi + wj;
        let merged = DiracAtom {
            matrix: atoms[i]
                .matrix
                .scale(wi / w)
                .add(&atoms[j].matrix.scale(wj / w)),
            weight: w,
        };
        let mut next: Vec<DiracAtom> = Vec::with_capacity(atoms.len() - 1);
        for (k, a) in atoms.iter().enumerate() {
            if k != i && k != j {
                next.push(*a);
            }
        }
        next.push(merged);
        match reduce(&next, budget) {
            Validity::Laminate => return Validity::Laminate,
            Validity::Inconclusive => saw_inconclusive = true,
            Validity::NotLaminate => {}
        }
    }
    if saw_inconclusive {
        Validity::Inconclusive
    } else {
        Validity::NotLaminate
    }
}
