//! Batch front end: parses a run configuration, drives the requested
//! pipeline, and emits a machine-readable report plus CSV tables.
//!
//! Exit codes: 0 all checks passed; 1 a mathematical assertion failed (the
//! report names the violated invariant and witness); 2 configuration or
//! window error.

mod config;
mod report;

use config::{Command, RunConfig};
use report::{Provenance, Report};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use vertexfusion::affine::{self, GradedModule, LowestSpace, WindowVec};
use vertexfusion::fusion::{self, FusionContexts, PairWindow};
use vertexfusion::liealg::{self, WeightModule};
use vertexfusion::rng::SeededRng;
use vertexfusion::scalar::Scalar;
use vertexfusion::sugawara;
use vertexfusion::voa::{self, VoaContext};
use vertexfusion::{Error, Result};

struct Args {
    config: String,
    out: String,
    seed: Option<u64>,
    jobs: usize,
}

fn parse_args() -> std::result::Result<Args, String> {
    let mut config = None;
    let mut out = "out".to_string();
    let mut seed = None;
    let mut jobs = 1usize;
    let mut it = std::env::args().skip(1);
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => config = Some(it.next().ok_or("--config needs a path")?),
            "--out" => out = it.next().ok_or("--out needs a directory")?,
            "--seed" => {
                seed = Some(
                    it.next()
                        .ok_or("--seed needs a number")?
                        .parse()
                        .map_err(|_| "bad --seed value")?,
                )
            }
            "--jobs" => {
                jobs = it
                    .next()
                    .ok_or("--jobs needs a number")?
                    .parse()
                    .map_err(|_| "bad --jobs value")?;
                if jobs == 0 {
                    return Err("--jobs must be positive".into());
                }
            }
            "--help" | "-h" => {
                println!(
                    "usage: vertexfusion --config PATH [--out DIR] [--seed N] [--jobs N]\n\
                     env: VERTEXFUSION_FIELD={{rational|generic}} overrides the field mode"
                );
                std::process::exit(0);
            }
            other => return Err(format!("unknown argument {other}")),
        }
    }
    Ok(Args {
        config: config.ok_or("--config is required")?,
        out,
        seed,
        jobs,
    })
}

fn main() -> ExitCode {
    let args = match parse_args() {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut cfg = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    match run(&cfg, args.jobs) {
        Ok((report, csv)) => {
            if let Err(e) = report::write_outputs(&args.out, &report, &csv) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            println!("{}: {}", report.command, report.status);
            for f in &report.failures {
                println!("  violated: {f}");
            }
            if report.status == "pass" {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn build_lowest(algebra: &Arc<liealg::LieAlgebra>, weight: &[i64]) -> Result<WeightModule> {
    if weight.is_empty() {
        Ok(WeightModule::trivial(algebra))
    } else {
        liealg::highest_weight_module(algebra, weight)
    }
}

fn build_module(cfg: &RunConfig, weight: &[i64], depth: usize) -> Result<Arc<GradedModule>> {
    let algebra = Arc::new(affine::algebra_by_name(&cfg.algebra)?);
    let kappa = affine::parse_kappa(&cfg.kappa)?;
    let lowest = build_lowest(&algebra, weight)?;
    Ok(Arc::new(affine::induce(
        algebra,
        LowestSpace::plain(lowest),
        kappa,
        depth,
    )?))
}

fn provenance(cfg: &RunConfig) -> Result<Provenance> {
    let algebra = affine::algebra_by_name(&cfg.algebra)?;
    let kappa = affine::parse_kappa(&cfg.kappa)?;
    let level = kappa.clone() - algebra.dual_coxeter.clone();
    Ok(Provenance {
        algebra: cfg.algebra.clone(),
        field_mode: if cfg.kappa == "generic" {
            "generic".into()
        } else {
            "rational".into()
        },
        kappa: kappa.to_string(),
        level: level.to_string(),
        normalization: "highest root length squared = 2".into(),
        z: cfg.z.clone(),
        depth: cfg.depth,
        seed: cfg.seed,
    })
}

fn run(cfg: &RunConfig, jobs: usize) -> Result<(Report, BTreeMap<String, String>)> {
    let mut report = Report::new(cfg.command.name(), provenance(cfg)?);
    let mut csv = BTreeMap::new();
    match cfg.command {
        Command::AlgebraInfo => algebra_info(cfg, &mut report)?,
        Command::ModuleBuild => module_build(cfg, &mut report, &mut csv)?,
        Command::SugawaraCheck => sugawara_check(cfg, &mut report, &mut csv)?,
        Command::VoaCheck => voa_check(cfg, &mut report)?,
        Command::FusionCompute => fusion_compute(cfg, &mut report, &mut csv, jobs)?,
        Command::FusionVerify => fusion_verify(cfg, &mut report, &mut csv, jobs)?,
        Command::CompatCheck => compat_check(cfg, &mut report)?,
    }
    Ok((report, csv))
}

fn algebra_info(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let algebra = affine::algebra_by_name(&cfg.algebra)?;
    algebra.validate()?;
    report.insert("dimension", json!(algebra.dim));
    report.insert("labels", json!(algebra.labels));
    report.insert("dual_coxeter", json!(algebra.dual_coxeter.to_string()));
    report.insert("rank", json!(algebra.chevalley.as_ref().map(|c| c.rank)));
    Ok(())
}

fn kappa_warning_note(w: &GradedModule, report: &mut Report) {
    if w.kappa_warning {
        report.insert(
            "kappa_warning",
            json!("kappa lies in the excluded range Q_{>=0}"),
        );
    }
}

fn module_build(
    cfg: &RunConfig,
    report: &mut Report,
    csv: &mut BTreeMap<String, String>,
) -> Result<()> {
    let w = build_module(cfg, &cfg.weight_or_trivial(0), cfg.depth)?;
    kappa_warning_note(&w, report);
    report.insert("graded_dims", json!(w.graded_dims()));
    report.insert("level", json!(w.level.to_string()));
    csv.insert("graded_dims.csv".into(), affine::graded_dims_csv(&w));
    if !affine::check_bracket_invariant(&w, cfg.depth as i64)? {
        report.fail("affine bracket relation on mode matrices".into());
    }
    if !affine::check_restricted(&w)? {
        report.fail("restrictedness within the window".into());
    }
    Ok(())
}

fn sugawara_check(
    cfg: &RunConfig,
    report: &mut Report,
    csv: &mut BTreeMap<String, String>,
) -> Result<()> {
    let w = build_module(cfg, &cfg.weight_or_trivial(0), cfg.depth)?;
    kappa_warning_note(&w, report);
    let kappa = affine::parse_kappa(&cfg.kappa)?;
    let c = sugawara::central_charge(&w)?;
    report.insert("central_charge", json!(c.to_string()));
    let mode_cap = 2i64.min(cfg.depth as i64);
    for m in -mode_cap..=mode_cap {
        for n in -mode_cap..=mode_cap {
            match sugawara::check_virasoro(&w, &kappa, m, n) {
                Ok((true, _)) => {}
                Ok((false, _)) => {
                    report.fail(format!("[L_{m}, L_{n}] relation on {}", cfg.algebra));
                }
                Err(Error::OutOfWindow(_)) => {}
                Err(e) => return Err(e),
            }
            match sugawara::check_mode_commutator(&w, &kappa, m, n) {
                Ok(true) => {}
                Ok(false) => report.fail(format!("[L_{m}, a({n})] commutator")),
                Err(Error::OutOfWindow(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let spectrum = sugawara::generalized_eigenspaces(&w, &kappa)?;
    report.insert("l0_semisimple", json!(spectrum.semisimple));
    report.insert("unresolved_dimension", json!(spectrum.unresolved));
    csv.insert("spectrum.csv".into(), sugawara::spectrum_csv(&spectrum));
    Ok(())
}

fn voa_check(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let algebra = Arc::new(affine::algebra_by_name(&cfg.algebra)?);
    let kappa = affine::parse_kappa(&cfg.kappa)?;
    let v = Arc::new(affine::induce(
        algebra.clone(),
        LowestSpace::plain(WeightModule::trivial(&algebra)),
        kappa.clone(),
        cfg.depth,
    )?);
    let w = build_module(cfg, &cfg.weight_or_trivial(0), cfg.depth)?;
    let ctx = VoaContext::new(v.clone(), w.clone(), kappa.clone())?;
    let ctx_v = VoaContext::new(v.clone(), v.clone(), kappa.clone())?;

    // generator modes agree with the materialized affine action
    'outer: for basis in 0..algebra.dim {
        let state = v.act(basis, -1, &WindowVec::basis_vector(0, 0))?;
        for n in -1..=1i64 {
            for d in 0..cfg.depth {
                if d as i64 - n > cfg.depth as i64 {
                    continue;
                }
                for i in 0..w.piece_dim(d) {
                    let t = WindowVec::basis_vector(d, i);
                    if ctx.state_mode_apply(&state, n, &t)? != w.act(basis, n, &t)? {
                        report.fail(format!("Y(a(-1)1, x) modes equal a(n): basis {basis}"));
                        break 'outer;
                    }
                }
            }
        }
    }
    // conformal element modes match the quadratic operators
    let omega = ctx.conformal_element()?;
    let mut omega_ok = true;
    for m in 0..=2i64 {
        let lk = match sugawara::sugawara_operator(&w, &kappa, m - 1) {
            Ok(op) => op,
            Err(Error::OutOfWindow(_)) => continue,
            Err(e) => return Err(e),
        };
        for d in 0..cfg.depth.saturating_sub(1) {
            let Some(cols) = &lk.columns[d] else { continue };
            for i in 0..w.piece_dim(d) {
                let lhs = match ctx.state_mode_apply(&omega, m, &WindowVec::basis_vector(d, i)) {
                    Ok(x) => x,
                    Err(Error::OutOfWindow(_)) => continue,
                    Err(e) => return Err(e),
                };
                if lhs != cols[i] {
                    omega_ok = false;
                }
            }
        }
    }
    if !omega_ok {
        report.fail("conformal element modes equal the quadratic operators".into());
    }
    // Jacobi box on generator pairs at sampled targets
    let mut rng = SeededRng::new(cfg.seed);
    let box_bound = 2i64.min(cfg.depth as i64);
    for a in 0..algebra.dim {
        for b in 0..algebra.dim {
            let u = v.act(a, -1, &WindowVec::basis_vector(0, 0))?;
            let vv = v.act(b, -1, &WindowVec::basis_vector(0, 0))?;
            let d = (rng.below(cfg.depth as u64)) as usize;
            let i = rng.below(w.piece_dim(d).max(1) as u64) as usize;
            let target = WindowVec::basis_vector(d, i);
            let (ok, _) = voa::check_jacobi(&ctx, &ctx_v, &u, &vv, &target, box_bound)?;
            if !ok {
                report.fail(format!(
                    "Jacobi coefficient box for generator pair ({a},{b})"
                ));
            }
        }
    }
    // C1 quotient
    if cfg.depth >= 2 {
        let c1 = voa::c1_quotient_dimension(&ctx, cfg.depth)?;
        report.insert("c1_quotient_dims", json!(c1.per_depth));
        report.insert("c1_total", json!(c1.total));
        report.insert("c1_stabilized", json!(c1.stabilized));
    }
    Ok(())
}

struct FusionSetup {
    pw: Arc<PairWindow>,
    fc: FusionContexts,
}

fn fusion_setup(cfg: &RunConfig) -> Result<FusionSetup> {
    let algebra = Arc::new(affine::algebra_by_name(&cfg.algebra)?);
    let kappa = affine::parse_kappa(&cfg.kappa)?;
    let z = Scalar::parse_rational(&cfg.z)?;
    // modules are built deeper than the fusion output so evaluations near
    // the window top stay exact
    let module_depth = (cfg.depth + 2).min(cfg.depth_cap.max(cfg.depth));
    let vac = Arc::new(affine::induce(
        algebra.clone(),
        LowestSpace::plain(WeightModule::trivial(&algebra)),
        kappa.clone(),
        module_depth,
    )?);
    let make = |weight: Vec<i64>| -> Result<Arc<GradedModule>> {
        if weight.is_empty() {
            Ok(vac.clone())
        } else {
            Ok(Arc::new(affine::induce(
                algebra.clone(),
                LowestSpace::plain(build_lowest(&algebra, &weight)?),
                kappa.clone(),
                module_depth,
            )?))
        }
    };
    let w1 = make(cfg.weight_or_trivial(0))?;
    let w2 = make(cfg.weight_or_trivial(1))?;
    let pw = Arc::new(PairWindow::new(w1, w2, z, cfg.depth)?);
    let fc = FusionContexts::new(pw.clone(), vac, kappa)?;
    Ok(FusionSetup { pw, fc })
}

/// Runs one closure per depth, optionally across scoped threads; results
/// are reassembled in depth order so the output is deterministic.
fn per_depth<T: Send>(
    d_max: usize,
    jobs: usize,
    f: impl Fn(usize) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    if jobs <= 1 || d_max == 0 {
        return (0..=d_max).map(f).collect();
    }
    let mut slots: Vec<Option<Result<T>>> = (0..=d_max).map(|_| None).collect();
    let workers = jobs.min(d_max + 1);
    let chunks: Vec<Vec<usize>> = (0..workers)
        .map(|j| (0..=d_max).filter(|d| d % workers == j).collect())
        .collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for chunk in &chunks {
            let f = &f;
            handles.push(scope.spawn(move || {
                chunk
                    .iter()
                    .map(|&d| (d, f(d)))
                    .collect::<Vec<(usize, Result<T>)>>()
            }));
        }
        for h in handles {
            for (d, r) in h.join().expect("depth worker panicked") {
                slots[d] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every depth computed"))
        .collect()
}

fn zn_csv(table: &[(usize, usize, usize)]) -> String {
    let mut out = String::from("N,depth,dimension\n");
    for (n, d, dim) in table {
        out.push_str(&format!("{n},{d},{dim}\n"));
    }
    out
}

fn compute_kl(pw: &PairWindow, depth: usize, jobs: usize) -> Result<fusion::FusionSpace> {
    let computed = per_depth(depth, jobs, |d| {
        let mut zn_rows = Vec::new();
        let mut last = None;
        for n in 1..=(d + 1) {
            let basis = fusion::compute_zn_at_depth(pw, n, d)?;
            zn_rows.push((n, d, basis.len()));
            if n <= d.max(1) {
                last = Some(basis);
            }
        }
        Ok((last.unwrap_or_default(), zn_rows))
    })?;
    let zn_table: Vec<(usize, usize, usize)> =
        computed.iter().flat_map(|(_, t)| t.clone()).collect();
    Ok(fusion::FusionSpace {
        provenance: fusion::Provenance::KlCirc,
        bases: computed.into_iter().map(|(b, _)| b).collect(),
        zn_table,
    })
}

fn fusion_compute(
    cfg: &RunConfig,
    report: &mut Report,
    csv: &mut BTreeMap<String, String>,
    jobs: usize,
) -> Result<()> {
    let setup = fusion_setup(cfg)?;
    let kl = compute_kl(&setup.pw, cfg.depth, jobs)?;
    report.insert("kl_dims", json!(kl.dims()));
    report.insert(
        "zn_table",
        json!(kl
            .zn_table
            .iter()
            .map(|(n, d, dim)| json!([n, d, dim]))
            .collect::<Vec<Value>>()),
    );
    csv.insert("zn_table.csv".into(), zn_csv(&kl.zn_table));
    let mut dims_csv = String::from("depth,dimension\n");
    for (d, n) in kl.dims().iter().enumerate() {
        dims_csv.push_str(&format!("{d},{n}\n"));
    }
    csv.insert("fusion_dims.csv".into(), dims_csv);
    Ok(())
}

fn fusion_verify(
    cfg: &RunConfig,
    report: &mut Report,
    csv: &mut BTreeMap<String, String>,
    jobs: usize,
) -> Result<()> {
    let setup = fusion_setup(cfg)?;
    let kl = compute_kl(&setup.pw, cfg.depth, jobs)?;
    let fc = &setup.fc;
    let hlz = {
        let bases = per_depth(cfg.depth, jobs, |d| fusion::compute_hboxtr_at_depth(fc, d))?;
        fusion::FusionSpace {
            provenance: fusion::Provenance::HlzHboxtr,
            bases,
            zn_table: Vec::new(),
        }
    };
    let equal = kl.equal(&hlz);
    report.insert(
        "pair",
        json!([cfg.weight_or_trivial(0), cfg.weight_or_trivial(1)]),
    );
    report.insert("z", json!(cfg.z));
    report.insert("depth", json!(cfg.depth));
    report.insert("kl_dims", json!(kl.dims()));
    report.insert("hlz_dims", json!(hlz.dims()));
    report.insert("equal", json!(equal));
    report.insert(
        "zn_table",
        json!(kl
            .zn_table
            .iter()
            .map(|(n, d, dim)| json!([n, d, dim]))
            .collect::<Vec<Value>>()),
    );
    csv.insert("zn_table.csv".into(), zn_csv(&kl.zn_table));
    if !equal {
        report.fail("equality of the two fusion space constructions".into());
    }
    Ok(())
}

fn compat_check(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let setup = fusion_setup(cfg)?;
    let pw = &setup.pw;
    let fc = &setup.fc;
    let mut rng = SeededRng::new(cfg.seed);
    let space = fusion::compute_hboxtr(fc, cfg.depth)?;
    let grid = cfg.depth as i64 + 2;
    let cap = cfg.depth as u32 + 2;
    let mut agreements = 0usize;
    let mut passes = 0usize;
    for trial in 0..cfg.samples {
        let lam = if trial % 3 == 0 && !space.bases[cfg.depth].is_empty() {
            fusion::sample_space_member(pw, &space, cfg.depth, &mut rng)
        } else {
            fusion::sample_functional(pw, cfg.depth, &mut rng)
        };
        for a in 0..pw.w1.algebra.dim {
            let state = fc.generator_state(a);
            let poly = fusion::slt_witness(fc, &lam, &state, cap)?;
            let mut grid_witness = None;
            for n in 0..=cap {
                if fusion::check_slt_grid(fc, &lam, &state, n, grid)? {
                    grid_witness = Some(n);
                    break;
                }
            }
            if poly != grid_witness {
                report.fail(format!(
                    "route agreement: sample {trial} generator {a}: polynomial witness {poly:?}, grid witness {grid_witness:?}"
                ));
            } else {
                agreements += 1;
            }
            if poly.is_some() {
                passes += 1;
            }
        }
    }
    report.insert("samples", json!(cfg.samples));
    report.insert("generator_checks_agreeing", json!(agreements));
    report.insert("slt_passes", json!(passes));
    Ok(())
}
