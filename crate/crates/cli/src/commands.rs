use std::fmt::Write as _;
use std::io::Write;

use anyhow::{bail, Context, Result};
use rankm_core::bounds::{
    cm_constant, eigenvalue_bound_rank1, eigenvalue_bound_rankm, eigvec_bound_rank1, eigvec_bound_rank1_refined,
    eigvec_bound_rankm, BoundEntry, BoundParams, BOUND_SLACK,
};
use rankm_core::harness::{certify, fit_slope, run_sweep, scan, Grid, Recipe, ScanRecord};
use rankm_core::rankone::rankone_full;
use rankm_core::symmat::{build_perturbed, jacobi_eig};
use rankm_core::{BoundKind, EigenDecomposition, Error as CoreError};

use crate::args::{BoundsArgs, EigArgs, Method, ScanArgs, VerifyArgs};
use crate::format::{list, num};
use crate::instance::InstanceFile;

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

pub const SCAN_HEADER: &str = "d,m,j,lambda1,ratio,observed,bound_rankm,bound_rank1,seed";
pub const EIGENVALUE_HEADER: &str = "i,lambda,nu,lower,upper_rankm,upper_rank1,pass";
pub const EIGVEC_HEADER: &str = "i,j,observed,bound_rank1,bound_rank1_refined,bound_rankm,c_m,pass";

pub fn eig(args: &EigArgs, out: &mut dyn Write) -> Result<Outcome> {
    let file = InstanceFile::load(&args.instance)?;
    let decomposition = match args.method {
        Method::Oracle => jacobi_eig(&build_perturbed(&file.spectrum, &file.perts)?)?,
        Method::Secular => {
            if file.perts.len() != 1 {
                bail!("--method secular needs exactly one perturbation vector, the file has {}", file.perts.len());
            }
            rankone_full(&file.spectrum, &file.perts.vectors()[0])?
        }
    };
    let method = match args.method {
        Method::Oracle => "oracle",
        Method::Secular => "secular",
    };
    writeln!(out, "# method = {method}, d = {}, m = {}", file.spectrum.dim(), file.perts.len())?;
    out.write_all(render_decomposition(&decomposition).as_bytes())?;
    Ok(Outcome::Pass)
}

/// TOML rendering: `eigenvalues` descending, `eigenvectors[k]` belonging to
/// `eigenvalues[k]`.
pub fn render_decomposition(e: &EigenDecomposition) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "eigenvalues = {}", list(e.values()));
    let _ = writeln!(s, "eigenvectors = [");
    for v in e.vectors() {
        let _ = writeln!(s, "  {},", list(v));
    }
    let _ = writeln!(s, "]");
    s
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn bounds(args: &BoundsArgs, out: &mut dyn Write) -> Result<Outcome> {
    let file = InstanceFile::load(&args.instance)?;
    let spectrum = &file.spectrum;
    let d = spectrum.dim();
    let m = file.perts.len();
    let instance = file.clone().into_instance();
    let cert = certify(&instance, 1.0)?;
    let p = BoundParams::from_perturbations(&file.perts);
    let oracle = jacobi_eig(&build_perturbed(spectrum, &file.perts)?)?;
    let rank1_vector = (m == 1).then(|| file.perts.vectors()[0].as_slice());

    // Row verdicts come from the certification, so the table and the exit
    // code cannot disagree.
    let row_pass = |kinds: &[BoundKind], i: usize, j: usize| {
        kinds
            .iter()
            .filter_map(|&k| cert.report(k))
            .all(|r| r.entries.iter().filter(|e: &&BoundEntry| e.i == i && e.j == j).all(BoundEntry::passes))
    };

    writeln!(out, "# d = {d}, m = {m}, V = {}, C_m = {}", num(p.v_bound()), num(cm_constant(&p)))?;
    writeln!(out, "# eigenvalues")?;
    writeln!(out, "{EIGENVALUE_HEADER}")?;
    let hypotheses_hold = cert.report(BoundKind::EigenvalueRank1).is_some_and(|r| !r.entries.is_empty());
    for (i, &nu) in oracle.values().iter().enumerate() {
        let (lo, hi) = eigenvalue_bound_rankm(spectrum, &p, i)?;
        let rank1 = match rank1_vector {
            Some(v) if hypotheses_hold => Some(eigenvalue_bound_rank1(spectrum, v, i)?),
            _ => None,
        };
        let ok = row_pass(&[BoundKind::EigenvalueRankM, BoundKind::EigenvalueRank1], i, i);
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            i + 1,
            num(spectrum.get(i)),
            num(nu),
            num(lo),
            num(hi),
            opt(rank1),
            verdict(ok)
        )?;
    }

    writeln!(out)?;
    writeln!(out, "# eigenvectors")?;
    writeln!(out, "{EIGVEC_HEADER}")?;
    let cm = cm_constant(&p);
    let kinds = [BoundKind::EigvecRank1, BoundKind::EigvecRank1Refined, BoundKind::EigvecRankM];
    for i in 0..d {
        for j in 0..d {
            let (coarse, refined) = if m == 1 {
                (Some(eigvec_bound_rank1(spectrum, &p, i, j)), Some(eigvec_bound_rank1_refined(spectrum, &p, i, j)))
            } else {
                (None, None)
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                i + 1,
                j + 1,
                num(oracle.vector(i)[j].abs()),
                opt(coarse),
                opt(refined),
                num(eigvec_bound_rankm(spectrum, &p, i, j)),
                num(cm),
                verdict(row_pass(&kinds, i, j))
            )?;
        }
    }

    writeln!(out)?;
    for r in &cert.reports {
        for note in &r.notes {
            writeln!(out, "# {}: {note}", r.kind)?;
        }
    }
    if let Some(c) = cert.crosscheck {
        writeln!(
            out,
            "# secular cross-check: max relative eigenvalue difference {}, orthonormality residual {}",
            num(c.value_rel_diff),
            num(c.orthonormality)
        )?;
    }
    writeln!(out, "# result: {}", verdict(cert.pass))?;
    Ok(if cert.pass { Outcome::Pass } else { Outcome::Fail })
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<Outcome> {
    let seeds: Vec<u64> = match args.seed {
        Some(s) => vec![s],
        None => (1..=args.seeds).collect(),
    };
    let grid = Grid { dims: args.dims.clone(), ms: args.ms.clone(), lambda1s: args.lambda1_list.clone(), seeds };
    if grid.is_empty() {
        bail!("the grid is empty");
    }
    let summary = run_sweep(&grid, args.perturb_bound)?;
    let failures: Vec<_> = summary.failures().collect();
    writeln!(out, "{} instances, {} failures", summary.instances(), failures.len())?;
    if args.perturb_bound != 1.0 {
        writeln!(out, "bounds scaled by {}", num(args.perturb_bound))?;
    }
    writeln!(out, "worst slack per bound (relative to the check's scale; fails below -{BOUND_SLACK:e}):")?;
    for kind in BoundKind::ALL {
        match summary.worst.get(&kind) {
            Some(w) => writeln!(
                out,
                "  {:<22} {:>22}  seed={} d={} m={} lambda1={} i={} j={}",
                kind.name(),
                num(w.normalized),
                w.seed,
                w.d,
                w.m,
                num(w.lambda1),
                w.entry.i + 1,
                w.entry.j + 1
            )?,
            None => writeln!(out, "  {:<22} {:>22}", kind.name(), "not exercised")?,
        }
    }
    if failures.is_empty() {
        return Ok(Outcome::Pass);
    }
    let mut seeds: Vec<u64> = failures.iter().map(|c| c.seed).collect();
    seeds.sort_unstable();
    seeds.dedup();
    writeln!(out, "failing seeds: {}", seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(","))?;
    let c = failures[0];
    writeln!(
        out,
        "reproduce: rankm verify --d {} --m {} --seed {} --lambda1-list {} --perturb-bound {}",
        c.d,
        c.m,
        c.seed,
        num(c.lambda1),
        num(args.perturb_bound)
    )?;
    Ok(Outcome::Fail)
}

pub fn scan_row(r: &ScanRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.d,
        r.m,
        r.j,
        num(r.lambda1),
        num(r.ratio),
        num(r.observed),
        num(r.bound_rankm),
        opt(r.bound_rank1),
        r.seed
    )
}

/// `# slope: ...` comment line closing one realization of a scan.
pub fn slope_footer(records: &[ScanRecord]) -> Result<String> {
    let seed = records.first().map_or(0, |r| r.seed);
    Ok(match fit_slope(records) {
        Ok(f) => format!("# slope: {} (rms {}, points {}, seed {seed})", num(f.slope), num(f.residual_rms), f.count),
        Err(CoreError::InsufficientPoints { .. }) => "# slope: insufficient points".into(),
        Err(CoreError::InvalidArgument(msg)) => format!("# slope: unavailable ({msg})"),
        Err(e) => return Err(e.into()),
    })
}

pub fn scan_csv(args: &ScanArgs) -> Result<String> {
    let grid = args.lambda1.points();
    let mut runs: Vec<(usize, usize, u64, Recipe)> = Vec::new();
    if let Some(path) = &args.fixed {
        let file = InstanceFile::load(path)?;
        let (d, m) = (file.spectrum.dim(), file.perts.len());
        if args.d.is_some_and(|x| x != d) || args.m.is_some_and(|x| x != m) {
            bail!("--d/--m disagree with {} (d = {d}, m = {m})", path.display());
        }
        runs.push((d, m, file.seed.unwrap_or(args.seed), Recipe::Fixed(file.perts.vectors().to_vec())));
    } else {
        let (d, m) = (args.d.expect("required by clap"), args.m.expect("required by clap"));
        if args.realizations == 0 {
            bail!("--realizations must be at least 1");
        }
        for k in 0..args.realizations {
            runs.push((d, m, args.seed + k, Recipe::Gaussian));
        }
    }

    let mut csv = String::new();
    let _ = writeln!(csv, "{SCAN_HEADER}");
    let mut footers = Vec::new();
    for (d, m, seed, recipe) in runs {
        let records = scan(d, m, args.j.0, &grid, seed, &recipe)?;
        for r in &records {
            let _ = writeln!(csv, "{}", scan_row(r));
        }
        footers.push(slope_footer(&records)?);
    }
    for f in footers {
        let _ = writeln!(csv, "{f}");
    }
    Ok(csv)
}

pub fn scan_cmd(args: &ScanArgs, out: &mut dyn Write) -> Result<Outcome> {
    let csv = scan_csv(args)?;
    match &args.out {
        Some(path) => std::fs::write(path, csv).with_context(|| format!("cannot write {}", path.display()))?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(Outcome::Pass)
}
