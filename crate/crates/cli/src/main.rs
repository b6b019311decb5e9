use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use polylam::attainable::{
    check_inclusion, full_boundary, identity_suite, nm_region, quad_vertices, uniaxial_points,
    Region,
};
use polylam::laminate::{build_sequence, classify_support, make_schedule};
use polylam::linalg::{conjugate, project_unit_trace, CrystalSpectrum, SymMat3};
use polylam::polycrystal::{g_closure_slice, problem_from_sigma, sigma_star};
use polylam::rank_one::{admissible_lambdas, build_connection, Interval};
use polylam::t2::{branch_residual, sample_t2_curve, solve_double_connection, Branch};
use polylam::Error;

/// Exit code 2: input validation. Exit code 3: mathematical infeasibility
/// or a failed certificate.
const EXIT_INPUT: u8 = 2;
const EXIT_MATH: u8 = 3;

#[derive(Parser)]
#[command(name = "polylam", version, about = "Laminate and attainable-set computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Alpha,
    Beta,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Rank-one connection analysis between spectra T and S.
    Connect {
        #[arg(long, value_parser = parse_triple)]
        s: [f64; 3],
        /// Target spectrum; defaults to S.
        #[arg(long, value_parser = parse_triple)]
        t: Option<[f64; 3]>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Samples both seed curves of doubly connected spectra.
    T2 {
        #[arg(long, value_parser = parse_triple)]
        s: [f64; 3],
        #[arg(long, default_value_t = 64)]
        count: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Builds a lamination sequence and reports per-generation diagnostics.
    Laminate {
        #[arg(long, value_parser = parse_triple)]
        s: [f64; 3],
        #[arg(long, value_enum, default_value = "alpha")]
        branch: BranchArg,
        /// Position along the seed curve in (0, 1).
        #[arg(long, default_value_t = 0.5)]
        t_param: f64,
        /// Mass retained on the crystal atom.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Emits the attainable-region boundary and a summary.
    Region {
        #[arg(long, value_parser = parse_triple)]
        s: [f64; 3],
        #[arg(long, default_value_t = 64)]
        count: usize,
        /// Also emit the comparison-region boundary and inclusion check.
        #[arg(long)]
        compare_nm: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Maps sampled attainable spectra through the conductivity transform.
    Polycrystal {
        #[arg(long, value_parser = parse_triple)]
        sigma: [f64; 3],
        #[arg(long, default_value_t = 64)]
        count: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Runs the closed-form identity suite for a spectrum.
    Identities {
        #[arg(long, value_parser = parse_triple)]
        s: [f64; 3],
    },
}

fn parse_triple(raw: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated reals, got '{raw}'"));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part.trim().parse::<f64>().map_err(|e| format!("'{part}': {e}"))?;
    }
    Ok(out)
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn certificate_tol() -> Result<f64, String> {
    match std::env::var("LAMINATE_TOL") {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t > 0.0)
            .ok_or_else(|| format!("LAMINATE_TOL='{v}' is not a positive real")),
        Err(_) => Ok(polylam::DEFAULT_TOL),
    }
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::InvalidMatrix
        | Error::InvalidSpectrum(..)
        | Error::InvalidUnitVector(_)
        | Error::InvalidRotation
        | Error::NotUnitTrace(_)
        | Error::OrderingError => EXIT_INPUT,
        _ => EXIT_MATH,
    }
}

fn emit(out: &OutArgs, body: &str) -> Result<(), String> {
    match &out.out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn spectrum(s: [f64; 3]) -> Result<CrystalSpectrum, (u8, String)> {
    CrystalSpectrum::new(s[0], s[1], s[2]).map_err(|e| (EXIT_INPUT, e.to_string()))
}

fn interval_str(name: &str, iv: &Interval) -> String {
    if iv.is_empty() {
        format!("{name}: empty")
    } else {
        format!("{name}: [{}, {}]", fmt(iv.lo), fmt(iv.hi))
    }
}

fn cmd_connect(
    s: [f64; 3],
    t: Option<[f64; 3]>,
    lambda: Option<f64>,
    tol: f64,
) -> Result<(), (u8, String)> {
    let s = spectrum(s)?;
    let t = t.unwrap_or_else(|| s.as_array());
    let sets = admissible_lambdas(t, &s).map_err(|e| (exit_for(&e), e.to_string()))?;
    println!("{}", interval_str("A_alpha", &sets.a_alpha));
    println!("{}", interval_str("A_beta", &sets.a_beta));
    let Some(lambda) = lambda else { return Ok(()) };
    let conn = build_connection(t, &s, lambda, tol).map_err(|e| (exit_for(&e), e.to_string()))?;
    let n = conn.n.0;
    println!("lambda: {}", fmt(lambda));
    println!("n_squares: {},{},{}", fmt(n[0] * n[0]), fmt(n[1] * n[1]), fmt(n[2] * n[2]));
    println!("n: {},{},{}", fmt(n[0]), fmt(n[1]), fmt(n[2]));
    for (i, row) in conn.rotation.0.iter().enumerate() {
        println!("R{}: {},{},{}", i + 1, fmt(row[0]), fmt(row[1]), fmt(row[2]));
    }
    println!("residual: {}", fmt(conn.residual));
    Ok(())
}

fn cmd_t2(s: [f64; 3], count: usize, out: &OutArgs) -> Result<(), (u8, String)> {
    if count < 2 {
        return Err((EXIT_INPUT, "count must be >= 2".into()));
    }
    let s = spectrum(s)?;
    let mut body = String::new();
    let _ = writeln!(body, "# s = {},{},{}", fmt(s.s1), fmt(s.s2), fmt(s.s3));
    let _ = writeln!(body, "branch,t1,t2,t3,lambda1,lambda2,x,y");
    for branch in [Branch::Alpha, Branch::Beta] {
        let pts = sample_t2_curve(&s, branch, count).map_err(|e| (exit_for(&e), e.to_string()))?;
        for p in &pts {
            let res = branch_residual(&p, &s);
            if res.abs() >= 1e-10 {
                return Err((EXIT_MATH, format!("curve residual {res} exceeds 1e-10")));
            }
            let pp = project_unit_trace(p.t).map_err(|e| (exit_for(&e), e.to_string()))?;
            let _ = writeln!(
                body,
                "{},{},{},{},{},{},{},{}",
                branch.label(),
                fmt(p.t[0]),
                fmt(p.t[1]),
                fmt(p.t[2]),
                fmt(p.lambda1),
                fmt(p.lambda2),
                fmt(pp.x),
                fmt(pp.y)
            );
        }
    }
    emit(out, &body).map_err(|e| (EXIT_INPUT, e))
}

fn cmd_laminate(
    s: [f64; 3],
    branch: Branch,
    t_param: f64,
    p: f64,
    kmax: u32,
    out: &OutArgs,
    tol: f64,
) -> Result<(), (u8, String)> {
    let s = spectrum(s)?;
    if !(0.0 < t_param && t_param < 1.0) {
        return Err((EXIT_INPUT, "t-param must lie in (0, 1)".into()));
    }
    if !(0.0 < p && p < 1.0) {
        return Err((EXIT_INPUT, "p must lie in (0, 1)".into()));
    }
    const CURVE: usize = 201;
    let pts = sample_t2_curve(&s, branch, CURVE).map_err(|e| (exit_for(&e), e.to_string()))?;
    let idx = ((t_param * (CURVE - 1) as f64).round() as usize).clamp(1, CURVE - 2);
    let conn = solve_double_connection(&pts[idx], &s, tol)
        .map_err(|e| (exit_for(&e), e.to_string()))?;
    let s0 = s.diag().scale(conn.point.lambda1);
    let t0 = conjugate(&conn.r1, &SymMat3::from_diag(conn.point.t));
    let a = SymMat3::lerp(&s0, &t0, p);
    let sched = make_schedule(&conn, &a, &s).map_err(|e| (exit_for(&e), e.to_string()))?;
    let seq = build_sequence(&sched, kmax).map_err(|e| (exit_for(&e), e.to_string()))?;
    let (r_lo, r_hi) = if sched.r_bar.is_finite() {
        (sched.r_bar - 0.5, sched.r_bar + 0.5)
    } else {
        (2.0, 4.0)
    };
    let mut generations = Vec::new();
    for (k, mu) in seq.iter().enumerate() {
        let drift = mu.barycenter().dist(&sched.barycenter);
        let support = classify_support(mu, &s).map_err(|e| (exit_for(&e), e.to_string()))?;
        generations.push(json!({
            "k": k,
            "barycenter_drift": drift,
            "residual_mass": support.outside_mass,
            "moment_r": { "r_lo": r_lo, "lo": mu.moment(r_lo), "r_hi": r_hi, "hi": mu.moment(r_hi) },
        }));
    }
    let doc = json!({
        "schedule": {
            "branch": sched.branch.label(),
            "p": sched.p,
            "q": sched.q,
            "lambda": sched.lambda,
            "r_bar": if sched.r_bar.is_finite() { json!(sched.r_bar) } else { json!("inf") },
        },
        "generations": generations,
    });
    let body = format!("{}\n", serde_json::to_string_pretty(&doc).unwrap());
    emit(out, &body).map_err(|e| (EXIT_INPUT, e))
}

fn region_rows(body: &mut String, label_prefix: &str, region: &Region) {
    for r in &region.samples {
        let _ = writeln!(
            body,
            "{}{},{},{},{},{},{},{},{}",
            label_prefix,
            r.arc.label(),
            r.perm,
            fmt(r.p),
            fmt(r.m[0]),
            fmt(r.m[1]),
            fmt(r.m[2]),
            fmt(r.point.x),
            fmt(r.point.y)
        );
    }
}

fn cmd_region(
    s: [f64; 3],
    count: usize,
    compare_nm: bool,
    out: &OutArgs,
) -> Result<(), (u8, String)> {
    if count < 16 {
        return Err((EXIT_INPUT, "count must be >= 16".into()));
    }
    let s = spectrum(s)?;
    let up = uniaxial_points(&s);
    let qv = quad_vertices(&s);
    let region = full_boundary(&s, count).map_err(|e| (exit_for(&e), e.to_string()))?;
    let mut body = String::new();
    let _ = writeln!(body, "# s = {},{},{}", fmt(s.s1), fmt(s.s2), fmt(s.s3));
    let _ = writeln!(body, "arc,perm,p,m1,m2,m3,x,y");
    region_rows(&mut body, "", &region);
    let mut summary = json!({
        "u_alpha": up.u_alpha,
        "u_beta": up.u_beta,
        "v_alpha": qv.v_alpha,
        "v_beta": qv.v_beta,
    });
    if compare_nm {
        let nm = nm_region(&s, count).map_err(|e| (exit_for(&e), e.to_string()))?;
        region_rows(&mut body, "nm_", &nm);
        let report =
            check_inclusion(&s, count.max(64)).map_err(|e| (exit_for(&e), e.to_string()))?;
        summary["inclusion_ok"] = json!(report.all_inside);
        summary["min_clearance"] = json!(report.min_clearance);
        if !report.all_inside {
            return Err((EXIT_MATH, "comparison region escapes the attainable set".into()));
        }
    }
    match &out.out {
        Some(_) => {
            emit(out, &body).map_err(|e| (EXIT_INPUT, e))?;
            println!("{summary}");
        }
        None => {
            print!("{body}");
            println!("# summary {summary}");
        }
    }
    Ok(())
}

fn cmd_polycrystal(sigma: [f64; 3], count: usize, out: &OutArgs) -> Result<(), (u8, String)> {
    if count < 2 {
        return Err((EXIT_INPUT, "count must be >= 2".into()));
    }
    let problem = problem_from_sigma(sigma).map_err(|e| (exit_for(&e), e.to_string()))?;
    let mut body = String::new();
    let _ = writeln!(body, "# sigma = {},{},{}", fmt(sigma[0]), fmt(sigma[1]), fmt(sigma[2]));
    let _ = writeln!(body, "# theta = {}", fmt(problem.theta));
    let _ = writeln!(body, "src_m1,src_m2,src_m3,sigma1_star,sigma2_star,sigma3_star,bound_residual");
    let theta = problem.theta;
    let signed = |sig: [f64; 3]| {
        let det: f64 = sig.iter().product();
        let tr: f64 = sig.iter().sum();
        det - theta * theta * tr - 2.0 * theta.powi(3)
    };
    let mut write_row = |sstar: [f64; 3], sig: [f64; 3]| {
        let _ = writeln!(
            body,
            "{},{},{},{},{},{},{}",
            fmt(sstar[0]),
            fmt(sstar[1]),
            fmt(sstar[2]),
            fmt(sig[0]),
            fmt(sig[1]),
            fmt(sig[2]),
            fmt(signed(sig))
        );
    };
    let round_trip = sigma_star(&problem, problem.s.as_array())
        .map_err(|e| (exit_for(&e), e.to_string()))?;
    write_row(problem.s.as_array(), round_trip.sigma);
    let rows = g_closure_slice(sigma, count - 1).map_err(|e| (exit_for(&e), e.to_string()))?;
    for row in &rows {
        write_row(row.sstar, row.sigma_star);
    }
    emit(out, &body).map_err(|e| (EXIT_INPUT, e))
}

fn cmd_identities(s: [f64; 3]) -> Result<(), (u8, String)> {
    let s = spectrum(s)?;
    let report = identity_suite(&s).map_err(|e| (exit_for(&e), e.to_string()))?;
    for (name, res) in &report.residuals {
        println!("{name}: {}", fmt(*res));
    }
    println!("max_residual: {}", fmt(report.max_residual));
    Ok(())
}

fn run() -> Result<(), (u8, String)> {
    let cli = Cli::parse();
    let tol = certificate_tol().map_err(|e| (EXIT_INPUT, e))?;
    match cli.command {
        Command::Connect { s, t, lambda } => cmd_connect(s, t, lambda, tol),
        Command::T2 { s, count, out } => cmd_t2(s, count, &out),
        Command::Laminate { s, branch, t_param, p, kmax, out } => {
            let branch = match branch {
                BranchArg::Alpha => Branch::Alpha,
                BranchArg::Beta => Branch::Beta,
            };
            cmd_laminate(s, branch, t_param, p, kmax, &out, tol)
        }
        Command::Region { s, count, compare_nm, out } => cmd_region(s, count, compare_nm, &out),
        Command::Polycrystal { sigma, count, out } => cmd_polycrystal(sigma, count, &out),
        Command::Identities { s } => cmd_identities(s),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
