use std::process::ExitCode;
use std::thread;

use anyhow::{Context, Result};

use airy_wkb::metrics::energy_expectation;
use airy_wkb::tables::{compute_table, COLUMN_NAMES};
use airy_wkb::verify::{self, VerifyOptions};
use airy_wkb::{ApproxState, Error, GridSpec, LevelKey, ProblemSetup, TableKind};

use crate::output::{emit, Table};
use crate::{Command, OutputArgs};

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Spectrum { potential, constants, l, n, out } => {
            let setup = constants.setup(potential.k)?;
            finish(spectrum(&setup, &l.0, &n.0)?, &out)
        }
        Command::Table1 { constants, reference, out } => {
            let setup = constants.setup(TableKind::Oscillator.exponent())?;
            finish(table(TableKind::Oscillator, &setup, reference.tol)?, &out)
        }
        Command::Table2 { constants, reference, out } => {
            let setup = constants.setup(TableKind::Linear.exponent())?;
            finish(table(TableKind::Linear, &setup, reference.tol)?, &out)
        }
        Command::Wavefunction { potential, constants, n, l, samples, out } => {
            let setup = constants.setup(potential.k)?;
            finish(wavefunction(&setup, LevelKey::new(n, l), samples as usize)?, &out)
        }
        Command::Verify { quick, force_fail, out } => {
            let report = verify::run(VerifyOptions { quick, force_fail });
            let mut t = Table::new(["suite", "name", "passed", "value", "tolerance", "detail"]);
            for c in &report.checks {
                eprintln!("{} {}/{}", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.name);
                t.push(vec![
                    c.suite.to_string().into(),
                    c.name.clone().into(),
                    c.passed.into(),
                    Some(c.value).filter(|v| v.is_finite()).into(),
                    c.tolerance.into(),
                    c.detail.clone().into(),
                ]);
            }
            finish(t, &out)?;
            let failed = report.failures().count();
            eprintln!("{} checks, {failed} failed", report.checks.len());
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn finish(table: Table, out: &OutputArgs) -> Result<ExitCode> {
    emit(&table.render(out.format)?, out.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

/// `Ē` and `d`, or `None` when `⟨H²⟩` does not exist for this level.
fn expectation(setup: &ProblemSetup, level: LevelKey) -> Result<(f64, Option<(f64, f64)>)> {
    let state = ApproxState::build(setup, level)?;
    match energy_expectation(&state) {
        Ok(e) => Ok((state.e_sp, Some((e.e_bar, e.discrepancy())))),
        Err(Error::NotSquareIntegrable { .. }) => Ok((state.e_sp, None)),
        Err(e) => Err(e.into()),
    }
}

fn spectrum(setup: &ProblemSetup, ls: &[u32], ns: &[u32]) -> Result<Table> {
    let levels: Vec<LevelKey> = ls.iter().flat_map(|&l| ns.iter().map(move |&n| LevelKey::new(n, l))).collect();
    let results: Vec<Result<_>> = thread::scope(|s| {
        let jobs: Vec<_> = levels.iter().map(|&lv| s.spawn(move || expectation(setup, lv))).collect();
        jobs.into_iter().map(|j| j.join().expect("spectrum worker panicked")).collect()
    });
    let mut t = Table::new(["n", "l", "e_sp", "e_bar", "d"]);
    for (lv, r) in levels.iter().zip(results) {
        let (e_sp, exp) = r.with_context(|| format!("level (n={}, l={})", lv.n, lv.l))?;
        if exp.is_none() {
            eprintln!("note: (n={}, l={}): <H^2> diverges at the origin; e_bar and d left empty", lv.n, lv.l);
        }
        t.push(vec![lv.n.into(), lv.l.into(), e_sp.into(), exp.map(|e| e.0).into(), exp.map(|e| e.1).into()]);
    }
    Ok(t)
}

fn table(kind: TableKind, setup: &ProblemSetup, tol: f64) -> Result<Table> {
    let grid = GridSpec { richardson_tol: tol, ..GridSpec::default() };
    let rows = compute_table(kind, setup, &grid)?;
    // The linear table has no wavefunction columns.
    let metrics: Vec<usize> = match kind {
        TableKind::Oscillator => vec![0, 1, 2, 3],
        TableKind::Linear => vec![2, 3],
    };
    let mut cols = vec!["n".to_string(), "l".to_string()];
    for &m in &metrics {
        let name = COLUMN_NAMES[m];
        cols.extend([name.to_string(), format!("{name}_published"), format!("{name}_rel_diff")]);
    }
    cols.extend(["e_sp", "e_bar", "e_exact", "reference"].map(String::from));
    let mut t = Table::new(cols);
    for row in &rows {
        let (computed, published, diff) = (row.computed(), row.published.values(), row.rel_diff());
        let mut cells = vec![row.published.n.into(), row.published.l.into()];
        let mut shown = format!("({},{})", row.published.n, row.published.l);
        for &m in &metrics {
            cells.extend([computed[m].into(), published[m].into(), diff[m].into()]);
            shown += &format!("  {}={:.3e} [{:.3e}]", COLUMN_NAMES[m], computed[m], published[m].unwrap_or(f64::NAN));
        }
        let r = &row.report;
        cells.extend([r.e_sp.into(), r.e_bar.into(), r.e_exact.into(), r.reference_provenance.to_string().into()]);
        t.push(cells);
        eprintln!("{shown}");
    }
    let worst = rows.iter().map(|r| r.max_rel_diff()).fold(0.0, f64::max);
    eprintln!("largest relative difference from the published values: {worst:.3e}");
    Ok(t)
}

/// Log-spaced points near the origin, then uniform through the well and the tail.
fn sample_grid(state: &ApproxState, samples: usize) -> Vec<f64> {
    let (rm, rp, rmax) = (state.r_minus(), state.r_plus(), state.r_max);
    let (log_lo, log_hi) = if rm > 0.0 { (1e-3 * rm, rm) } else { (1e-6 * rp, 0.02 * rp) };
    let n_log = samples / 5;
    let n_well = samples / 2;
    let n_tail = samples - n_log - n_well;
    let mut r = Vec::with_capacity(samples);
    let ratio = (log_hi / log_lo).ln();
    r.extend((0..n_log).map(|i| log_lo * (ratio * i as f64 / n_log as f64).exp()));
    r.extend((0..n_well).map(|i| log_hi + (rp - log_hi) * i as f64 / n_well as f64));
    r.extend((0..n_tail).map(|i| (rp + (rmax - rp) * i as f64 / (n_tail - 1) as f64).min(rmax)));
    r
}

fn wavefunction(setup: &ProblemSetup, level: LevelKey, samples: usize) -> Result<Table> {
    let state = ApproxState::build(setup, level)?;
    let mut t = Table::new(["r", "psi", "dpsi", "h_psi", "region"]);
    for r in sample_grid(&state, samples) {
        let s = state.sample(r)?;
        t.push(vec![s.r.into(), s.psi.into(), s.dpsi.into(), s.h_psi.into(), s.region.index().into()]);
    }
    Ok(t)
}
