//! `dkg`: command-line front end for the self-tests, norm evaluation,
//! counterexample scans, region queries and the split-step solver.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use dkg_core::bilinear::{fit_log_slope, scan_families, validate_ladder, ExponentTuple, FamilyId, RatioParts};
use dkg_core::norms::io::read_grid_function;
use dkg_core::norms::{transform, Flavor, NormIndex, Side};
use dkg_core::region::{
    choose_parameters, containment_summary, extended_region_violation, in_extended_region, in_nonpositive_region,
    in_strict_region, region_grid, RegionPoint,
};
use dkg_core::solver::snapshot::write_snapshot;
use dkg_core::solver::{
    init_state, rough_data, rough_field, run, smooth_data, GridSpec1D, InitialData, SolverConfig, Splitting,
};
use dkg_core::spinor::{random_spinor, self_test};
use dkg_core::weights::{sample_points, sweep};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

/// Allowed `|slope + δ|` for a scan to count as reproducing its law.
const SLOPE_TOLERANCE: f64 = 0.15;

#[derive(Parser)]
#[command(name = "dkg", version, about = "Dirac–Klein–Gordon numerics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebraic self-tests; exit code 1 on failure.
    #[command(subcommand)]
    Verify(Verify),
    /// Weighted norm of a stored grid function.
    Norms {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// x_plus, x_minus or h.
        #[arg(long)]
        flavor: Flavor,
    },
    /// Ratio of a counterexample family along a ladder of scales, as CSV.
    Counterexample {
        #[arg(long)]
        family: FamilyId,
        #[arg(long = "L", value_delimiter = ',', default_value = "64,128,256,512")]
        ls: Vec<f64>,
        /// a,b,c,alpha,beta,gamma
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0,0,0,0")]
        exps: ExponentTuple,
        #[arg(long)]
        out: PathBuf,
    },
    /// Log-log slope of a counterexample CSV against the predicted exponent.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        /// Exponents the CSV was produced with.
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0,0,0,0")]
        exps: ExponentTuple,
    },
    /// Region membership of a single `(s, r)` point.
    Region {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        /// Also search for iteration parameters.
        #[arg(long)]
        solve: bool,
    },
    /// Containment sweep over an `n × n` grid, as CSV.
    RegionGrid {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = -0.3)]
        s_lo: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
        s_hi: f64,
        #[arg(long, default_value_t = 1.5)]
        r_hi: f64,
    },
    /// Split-step evolution with a diagnostics CSV.
    Solve(SolveArgs),
}

#[derive(Subcommand)]
enum Verify {
    /// Projection identities and the null form on random spinor pairs.
    Spinor {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Weight constraint on uniform and corner-manifold samples.
    Lemma3 {
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Half-width of the sampling box.
        #[arg(long, default_value_t = 1e3)]
        bound: f64,
    },
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long, default_value_t = 1024)]
    n: usize,
    #[arg(long, default_value_t = 64.0)]
    xbox: f64,
    /// `auto` (half the grid spacing) or a value.
    #[arg(long, default_value = "auto")]
    dt: String,
    #[arg(long = "T", default_value_t = 1.0)]
    t_end: f64,
    #[arg(long = "M", allow_negative_numbers = true, default_value_t = 1.0)]
    dirac_mass: f64,
    #[arg(long = "m", allow_negative_numbers = true, default_value_t = 1.0)]
    kg_mass: f64,
    #[arg(long, default_value = "smooth")]
    data: InitialData,
    /// Spinor regularity for rough data and the `hs_psi` column.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    s: f64,
    /// Field regularity; defaults to `s + 1/2`.
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "strang")]
    splitting: Splitting,
    /// Record diagnostics every this many steps.
    #[arg(long, default_value_t = 1)]
    every: usize,
    #[arg(long)]
    out: PathBuf,
    /// Write the final state here.
    #[arg(long)]
    snapshot: Option<PathBuf>,
}

fn print_json(v: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?))
}

fn verify_spinor(samples: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = (0..samples).map(|_| (random_spinor(&mut rng), random_spinor(&mut rng))).collect();
    let mut freqs: Vec<f64> = (0..1000).map(|_| rng.gen_range(-100.0..100.0)).collect();
    freqs.push(0.0);
    let report = self_test(&pairs, &freqs);
    let pass = report.passes(1e-14, 1e-12);
    print_json(&json!({ "pass": pass, "identity_defect": report.identity_defect(), "report": report }))?;
    Ok(pass)
}

fn verify_lemma3(samples: usize, seed: u64, bound: f64) -> Result<bool> {
    if !(bound > 0.0 && bound.is_finite()) {
        bail!("--bound must be positive, got {bound}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corners = samples / 5;
    let s = sweep(sample_points(&mut rng, bound, samples - corners, corners));
    let pass = s.min_scaled_margin >= -1e-9 && s.max_scaled_residual <= 1e-12;
    print_json(&json!({
        "pass": pass,
        "samples": s.samples,
        "min_margin": s.min_margin,
        "max_margin": s.max_margin,
        "min_scaled_margin": s.min_scaled_margin,
        "max_scaled_residual": s.max_scaled_residual,
    }))?;
    Ok(pass)
}

fn norms(input: &Path, a: f64, alpha: f64, flavor: Flavor) -> Result<()> {
    let f = File::open(input).with_context(|| format!("cannot open {}", input.display()))?;
    let u = read_grid_function(BufReader::new(f))?;
    let side = u.side();
    let spectrum = if side == Side::Physical { transform(&u)? } else { u };
    let norm = spectrum.to_spectrum()?.weighted_norm(NormIndex::new(a, alpha, flavor))?;
    let g = spectrum.grid();
    print_json(&json!({
        "norm": norm,
        "a": a,
        "alpha": alpha,
        "flavor": flavor,
        "input_side": side.name(),
        "n_t": g.n_t,
        "n_x": g.n_x,
    }))
}

fn counterexample(family: FamilyId, ls: &[f64], exps: ExponentTuple, out: &Path) -> Result<()> {
    validate_ladder(ls)?;
    let rows = scan_families(family, ls, &[exps])?;
    let mut w = csv::Writer::from_writer(create(out)?);
    for row in &rows {
        w.serialize(row[0])?;
    }
    w.flush()?;
    let ratios: Vec<f64> = rows.iter().map(|r| r[0].ratio).collect();
    print_json(&json!({ "family": family, "exps": exps.to_string(), "L": ls, "ratio": ratios, "out": out }))
}

fn fit(input: &Path, exps: ExponentTuple) -> Result<bool> {
    let mut rd = csv::Reader::from_path(input).with_context(|| format!("cannot read {}", input.display()))?;
    let rows: Vec<RatioParts> = rd.deserialize().collect::<std::result::Result<_, _>>()?;
    let Some(first) = rows.first() else { bail!("{} has no rows", input.display()) };
    let family = first.family;
    if rows.iter().any(|r| r.family != family) {
        bail!("{} mixes several families", input.display());
    }
    let ls: Vec<f64> = rows.iter().map(|r| r.l).collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let f = fit_log_slope(&ls, &ratios)?;
    let predicted = -family.delta(&exps);
    let pass = (f.slope - predicted).abs() <= SLOPE_TOLERANCE;
    print_json(&json!({
        "family": family,
        "exps": exps.to_string(),
        "points": rows.len(),
        "slope": f.slope,
        "r_squared": f.r_squared,
        "predicted": predicted,
        "tolerance": SLOPE_TOLERANCE,
        "pass": pass,
    }))?;
    Ok(pass)
}

fn region(s: f64, r: f64, solve: bool) -> Result<()> {
    let p = RegionPoint::new(s, r);
    let mut v = json!({
        "s": s,
        "r": r,
        "extended": in_extended_region(p),
        "strict": in_strict_region(p),
        "nonpositive": in_nonpositive_region(p),
    });
    if let Some(why) = extended_region_violation(p) {
        v["extended_violation"] = json!(why);
    }
    if solve {
        v["parameters"] = serde_json::to_value(choose_parameters(p))?;
    }
    print_json(&v)
}

fn grid_sweep(out: &Path, n: usize, s_lo: f64, s_hi: f64, r_hi: f64) -> Result<()> {
    if n < 2 || !(s_lo < s_hi) || !(r_hi > 0.0) {
        bail!("need n ≥ 2, s_lo < s_hi and r_hi > 0");
    }
    let cells = region_grid(n, s_lo, s_hi, r_hi);
    let mut w = csv::Writer::from_writer(create(out)?);
    for c in &cells {
        w.serialize(c)?;
    }
    w.flush()?;
    print_json(&containment_summary(&cells))
}

fn solve(a: &SolveArgs) -> Result<()> {
    let grid = GridSpec1D::new(a.n, a.xbox)?;
    let r = a.r.unwrap_or(a.s + 0.5);
    let mut cfg = SolverConfig::new(grid, a.t_end);
    if a.dt != "auto" {
        cfg.dt = a.dt.parse().with_context(|| format!("--dt must be `auto` or a number, got {:?}", a.dt))?;
    }
    cfg.splitting = a.splitting;
    cfg.diagnostics_every = a.every;
    cfg.s = a.s;
    cfg.r = r;
    cfg.validate()?;
    let (psi, phi0, phi1) = match a.data {
        InitialData::Smooth => smooth_data(&grid),
        InitialData::Rough => (
            rough_data(a.s, a.seed, &grid),
            rough_field(r, a.seed, &grid),
            rough_field(r - 1.0, a.seed.wrapping_add(1), &grid),
        ),
    };
    let mut state = init_state(&psi, &phi0, &phi1, a.dirac_mass, a.kg_mass, grid)?;
    let diags = run(&cfg, &mut state)?;
    let mut w = csv::Writer::from_writer(create(&a.out)?);
    for d in &diags {
        w.serialize(d)?;
    }
    w.flush()?;
    if let Some(path) = &a.snapshot {
        write_snapshot(create(path)?, &state)?;
    }
    let (first, last) = (diags[0], diags[diags.len() - 1]);
    print_json(&json!({
        "steps": cfg.schedule().len(),
        "dt": cfg.dt,
        "t": last.t,
        "charge_initial": first.charge,
        "charge_final": last.charge,
        "charge_drift": (last.charge - first.charge).abs() / first.charge.max(f64::MIN_POSITIVE),
        "hs_psi": last.hs_psi,
        "hr_phi": last.hr_phi,
        "kg_energy": last.kg_energy,
        "out": a.out,
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(Verify::Spinor { samples, seed }) => verify_spinor(*samples, *seed),
        Command::Verify(Verify::Lemma3 { samples, seed, bound }) => verify_lemma3(*samples, *seed, *bound),
        Command::Norms { input, a, alpha, flavor } => norms(input, *a, *alpha, *flavor).map(|_| true),
        Command::Counterexample { family, ls, exps, out } => counterexample(*family, ls, *exps, out).map(|_| true),
        Command::Fit { input, exps } => fit(input, *exps),
        Command::Region { s, r, solve } => region(*s, *r, *solve).map(|_| true),
        Command::RegionGrid { out, n, s_lo, s_hi, r_hi } => grid_sweep(out, *n, *s_lo, *s_hi, *r_hi).map(|_| true),
        Command::Solve(args) => solve(args).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
