use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::{Cell, Command, Report, RunConfig, Table};
use crate::cheeger::{analyze, defect_table, theorem_scan, CutSets};
use crate::entropy::{entropy_scan, scaling_fit, EntropyRow};
use crate::hamiltonian::{
    build_h_full, build_h_subspace, full_space_spectrum, ground_state, spectral_gap,
    DEFAULT_FULL_SPACE_CAP,
};
use crate::markov::{
    build_p_direct, build_p_from_h, gap_relation_check, lambda2, mcmc_sample, stationary,
    total_variation, CsvTrace, EnsembleVisits, Observer,
};
use crate::walks::{count, enumerate, PartitionTable, Walk, DEFAULT_MAX_WALKS};
use crate::{ModelParams, Result};

pub(super) fn dispatch(config: &RunConfig) -> Result<Report> {
    let mut report = Report {
        config: config.clone(),
        config_hash: config.hash(),
        tables: Vec::new(),
        failures: Vec::new(),
    };
    match config.command {
        Command::Count => count_cmd(config, &mut report)?,
        Command::Gap => gap_cmd(config, &mut report)?,
        Command::MarkovVerify => markov_cmd(config, &mut report)?,
        Command::Cheeger => cheeger_cmd(config, &mut report)?,
        Command::TheoremScan => theorem_cmd(config, &mut report)?,
        Command::EntropyScan => entropy_cmd(config, &mut report)?,
        Command::Mcmc => mcmc_cmd(config, &mut report)?,
    }
    Ok(report)
}

fn label(p: &ModelParams) -> String {
    format!("n={} s={} t={}", p.n, p.s, p.t)
}

fn file_stem(p: &ModelParams) -> String {
    format!("n{}_s{}_t{}", p.n, p.s, p.t)
}

fn key(p: &ModelParams) -> Vec<Cell> {
    vec![p.n.into(), p.s.into(), p.t.into()]
}

/// Evaluates `f` on every grid point in parallel, keeping grid order, and
/// appends wall-clock seconds when requested.
fn per_point<T: Send>(
    config: &RunConfig,
    f: impl Fn(&ModelParams) -> Result<T> + Sync,
) -> Result<Vec<(ModelParams, T, f64)>> {
    config
        .grid()?
        .par_iter()
        .map(|p| {
            let start = Instant::now();
            let value = f(p)?;
            Ok((*p, value, start.elapsed().as_secs_f64()))
        })
        .collect()
}

fn add_timings(config: &RunConfig, table: &mut Table, seconds: Vec<f64>) {
    if config.timings {
        table.add_column("runtime_seconds", seconds.into_iter().map(Cell::from).collect());
    }
}

fn export_path(config: &RunConfig, prefix: &str, p: &ModelParams) -> Option<std::path::PathBuf> {
    config
        .export
        .as_deref()
        .map(|dir| dir.join(format!("{prefix}_{}.coo", file_stem(p))))
}

fn write_export(path: &Path, m: &crate::linalg::SparseMatrix) -> Result<()> {
    m.write_coordinate(BufWriter::new(File::create(path)?))?;
    Ok(())
}

fn count_cmd(config: &RunConfig, report: &mut Report) -> Result<()> {
    let mut table = Table::new("counts", &["n", "s", "walks", "max_area", "max_area_walks"]);
    let points = per_point(config, |p| Ok(count(p)))?;
    let mut seconds = Vec::new();
    for (p, walks, secs) in points {
        let tents = BigUint::from(p.s).pow(p.n as u32);
        table.push(vec![
            p.n.into(),
            p.s.into(),
            Cell::Big(walks.to_string()),
            (p.n * p.n).into(),
            Cell::Big(tents.to_string()),
        ]);
        seconds.push(secs);
    }
    add_timings(config, &mut table, seconds);
    report.tables.push(table);
    Ok(())
}

fn gap_cmd(config: &RunConfig, report: &mut Report) -> Result<()> {
    let mut columns = vec![
        "n", "s", "t", "dim", "beta", "gap", "ground_energy", "method", "residual_ground",
        "residual_gap", "zero_modes", "lambda2", "gap_chain", "gap_factor", "predicted_gap",
        "relative_discrepancy", "relation_pass",
    ];
    if config.full_space {
        columns.extend([
            "full_dim",
            "full_blocks",
            "full_zero_modes",
            "full_gap",
            "full_gap_walk_blocks",
            "full_gap_other_blocks",
            "full_gap_le_gap",
        ]);
    }
    let mut table = Table::new("gap", &columns);
    let points = per_point(config, |p| {
        let e = enumerate(p)?;
        let h = build_h_subspace(p, &e);
        if let Some(path) = export_path(config, "h", p) {
            write_export(&path, &h)?;
        }
        let gs = ground_state(p, &e);
        let spec = spectral_gap(&h, Some(&gs.amplitudes), &config.eigen)?;
        let pi = stationary(p, &e);
        let chain = lambda2(&build_p_direct(p, &e), &pi, &config.eigen)?;
        let rel = gap_relation_check(p, &spec, &chain, config.tol);
        let mut row = key(p);
        row.extend([
            e.len().into(),
            p.beta().into(),
            spec.gap.into(),
            spec.ground_energy.into(),
            spec.method.as_str().into(),
            spec.residuals[0].into(),
            spec.residuals[1].into(),
            spec.zero_modes.into(),
            chain.lambda2.into(),
            chain.gap_chain.into(),
            rel.factor.into(),
            rel.predicted_gap_h.into(),
            rel.relative_discrepancy.into(),
            rel.pass.into(),
        ]);
        if config.full_space {
            let full = build_h_full(p, DEFAULT_FULL_SPACE_CAP)?;
            let fs = full_space_spectrum(&full, &config.eigen)?;
            row.extend([
                fs.dim.into(),
                fs.blocks.into(),
                fs.zero_modes.into(),
                fs.gap.into(),
                fs.gap_walk_blocks.into(),
                fs.gap_other_blocks.into(),
                (fs.gap <= spec.gap * (1.0 + config.tol)).into(),
            ]);
        }
        let failure = (!rel.pass).then(|| {
            format!(
                "gap {}: relative discrepancy {:e} exceeds {:e}",
                label(p),
                rel.relative_discrepancy,
                config.tol
            )
        });
        Ok((row, failure))
    })?;
    let mut seconds = Vec::new();
    for (_, (row, failure), secs) in points {
        table.push(row);
        report.failures.extend(failure);
        seconds.push(secs);
    }
    add_timings(config, &mut table, seconds);
    report.tables.push(table);
    Ok(())
}

fn markov_cmd(config: &RunConfig, report: &mut Report) -> Result<()> {
    let mut table = Table::new(
        "identities",
        &[
            "n", "s", "t", "dim", "beta", "max_row_sum_error", "min_entry",
            "max_detailed_balance_error", "min_diagonal", "max_diagonal", "diagonal_upper_bound",
            "max_off_diagonal", "stated_off_diagonal_bound", "off_diagonal_bound_holds",
            "p_from_h_vs_direct", "frustration_residual", "gap_h", "gap_chain", "predicted_gap_h",
            "relative_discrepancy", "identities_pass", "relation_pass",
        ],
    );
    let points = per_point(config, |p| {
        let e = enumerate(p)?;
        let h = build_h_subspace(p, &e);
        let gs = ground_state(p, &e);
        let pi = stationary(p, &e);
        let from_h = build_p_from_h(p, &h, &pi)?;
        let direct = build_p_direct(p, &e);
        if let Some(path) = export_path(config, "p", p) {
            write_export(&path, &direct.matrix)?;
        }
        let checks = direct.check(p, &pi);
        let diff = from_h.matrix.max_abs_diff(&direct.matrix);
        let frustration = h
            .matvec(&gs.amplitudes)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let spec = spectral_gap(&h, Some(&gs.amplitudes), &config.eigen)?;
        let chain = lambda2(&direct, &pi, &config.eigen)?;
        let rel = gap_relation_check(p, &spec, &chain, config.tol);
        let identities = checks.passes(config.identity_tol) && diff <= config.identity_tol;
        let mut failures = Vec::new();
        if !identities {
            failures.push(format!("markov-verify {}: transition identities failed", label(p)));
        }
        if frustration > config.frustration_tol {
            failures.push(format!(
                "markov-verify {}: ground state residual {frustration:e} exceeds {:e}",
                label(p),
                config.frustration_tol
            ));
        }
        if !rel.pass {
            failures.push(format!(
                "markov-verify {}: gap relation discrepancy {:e} exceeds {:e}",
                label(p),
                rel.relative_discrepancy,
                config.tol
            ));
        }
        let mut row = key(p);
        row.extend([
            e.len().into(),
            p.beta().into(),
            checks.max_row_sum_error.into(),
            checks.min_entry.into(),
            checks.max_detailed_balance_error.into(),
            checks.min_diagonal.into(),
            checks.max_diagonal.into(),
            checks.diagonal_upper_bound.into(),
            checks.max_off_diagonal.into(),
            checks.stated_off_diagonal_bound.into(),
            checks.off_diagonal_bound_holds().into(),
            diff.into(),
            frustration.into(),
            spec.gap.into(),
            chain.gap_chain.into(),
            rel.predicted_gap_h.into(),
            rel.relative_discrepancy.into(),
            identities.into(),
            rel.pass.into(),
        ]);
        Ok((row, failures))
    })?;
    let mut seconds = Vec::new();
    for (_, (row, failures), secs) in points {
        table.push(row);
        report.failures.extend(failures);
        seconds.push(secs);
    }
    add_timings(config, &mut table, seconds);
    report.tables.push(table);
    Ok(())
}

fn cheeger_cmd(config: &RunConfig, report: &mut Report) -> Result<()> {
    let mut summary = Table::new(
        "summary",
        &[
            "n", "s", "t", "dim", "size_lambda", "size_s", "size_sprime", "size_b", "size_a",
            "pi_lambda", "pi_s", "pi_sprime", "pi_b", "pi_a", "q_a_ac", "q_ac_a", "cheeger_bound",
            "bottleneck_bound", "gap_h", "lambda2", "gap_chain", "cheeger_gap_bound",
            "theorem_bound", "theorem_holds", "chain_holds", "lemmas_passed",
        ],
    );
    let mut lemmas = Table::new(
        "lemmas",
        &["n", "s", "t", "id", "lhs", "relation", "rhs", "margin", "holds", "asserted", "caveat"],
    );
    let mut defects = Table::new("defects", &["n", "s", "t", "a", "size", "pi", "bound", "holds"]);
    let points = per_point(config, |p| {
        let analysis = analyze(p, &config.eigen)?;
        let pi = stationary(p, &analysis.ensemble);
        let table = defect_table(&analysis.ensemble, p, &pi, &PartitionTable::new(p.n * p.n));
        Ok((analysis, table))
    })?;
    let mut seconds = Vec::new();
    for (p, (a, defect), secs) in points {
        let c = &a.conductance;
        let mut row = key(&p);
        row.extend([
            a.ensemble.len().into(),
            CutSets::count(&a.cuts.lambda).into(),
            CutSets::count(&a.cuts.s_set).into(),
            CutSets::count(&a.cuts.s_prime).into(),
            CutSets::count(&a.cuts.b).into(),
            CutSets::count(a.cuts.a()).into(),
            c.pi_lambda.into(),
            c.pi_s.into(),
            c.pi_sprime.into(),
            c.pi_b.into(),
            c.pi_a.into(),
            c.q_a_ac.into(),
            c.q_ac_a.into(),
            c.cheeger_bound.into(),
            c.bottleneck_bound.into(),
            a.spectrum_h.gap.into(),
            a.chain.lambda2.into(),
            a.chain.gap_chain.into(),
            a.verdict.cheeger_gap_bound.into(),
            a.verdict.bound.into(),
            a.verdict.holds.into(),
            a.verdict.chain_holds.into(),
            a.lemmas.passed().into(),
        ]);
        summary.push(row);
        for check in &a.lemmas.checks {
            let mut row = key(&p);
            row.extend([
                check.id.as_str().into(),
                check.lhs.into(),
                check.relation.as_str().into(),
                check.rhs.into(),
                check.margin.into(),
                check.holds.into(),
                check.asserted.into(),
                check.caveat.as_str().into(),
            ]);
            lemmas.push(row);
            if check.failed() {
                report.failures.push(format!(
                    "cheeger {}: {} failed ({} {} {})",
                    label(&p),
                    check.id,
                    check.lhs,
                    check.relation.as_str(),
                    check.rhs
                ));
            }
        }
        for d in defect.rows.iter().filter(|d| d.size > 0) {
            let mut row = key(&p);
            row.extend([
                d.a.into(),
                d.size.into(),
                d.pi.into(),
                d.bound.into(),
                (d.pi < d.bound).into(),
            ]);
            defects.push(row);
        }
        seconds.push(secs);
    }
    add_timings(config, &mut summary, seconds);
    report.tables.extend([summary, lemmas, defects]);
    Ok(())
}

fn theorem_cmd(config: &RunConfig, report: &mut Report) -> Result<()> {
    let groups: Vec<(usize, f64)> = config
        .s
        .iter()
        .flat_map(|&s| config.t.iter().map(move |&t| (s, t)))
        .collect();
    let scans = groups
        .par_iter()
        .map(|&(s, t)| {
            let start = Instant::now();
            let scan = theorem_scan(s, t, &config.n, &config.eigen)?;
            Ok((s, t, scan, start.elapsed().as_secs_f64()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Table::new(
        "rows",
        &["n", "s", "t", "exact_gap", "bound", "holds", "cheeger_gap_bound", "chain_holds"],
    );
    let mut fit = Table::new(
        "fit",
        &["s", "t", "points", "slope", "slope_bound", "slope_ok", "first_n_holding"],
    );
    let mut seconds = Vec::new();
    for (s, t, scan, secs) in scans {
        for r in &scan.rows {
            rows.push(vec![
                r.n.into(),
                r.s.into(),
                r.t.into(),
                r.exact_gap.into(),
                r.bound.into(),
                r.holds.into(),
                r.cheeger_gap_bound.into(),
                r.chain_holds.into(),
            ]);
        }
        fit.push(vec![
            s.into(),
            t.into(),
            scan.rows.len().into(),
            scan.slope.into(),
            scan.slope_bound.into(),
            scan.slope_ok.into(),
            scan.first_n_holding.into(),
        ]);
        if !scan.slope_ok {
            report.failures.push(format!(
                "theorem-scan s={s} t={t}: slope {} exceeds {}",
                scan.slope, scan.slope_bound
            ));
        }
        seconds.push(secs);
    }
    add_timings(config, &mut fit, seconds);
    report.tables.extend([rows, fit]);
    Ok(())
}

fn entropy_cmd(config: &RunConfig, report: &mut Report) -> Result<()> {
    let grid = config.grid()?;
    let start = Instant::now();
    let rows = entropy_scan(&grid);
    let elapsed = start.elapsed().as_secs_f64();
    let mut table = Table::new(
        "entropy",
        &[
            "n", "s", "t", "entropy_bits", "mean_midpoint_height", "fit_kind", "fit_value",
            "fit_reference",
        ],
    );
    for row in &rows {
        let mut group: Vec<EntropyRow> = rows
            .iter()
            .filter(|r| r.s == row.s && r.t == row.t)
            .cloned()
            .collect();
        group.sort_by_key(|r| r.n);
        let fit = scaling_fit(&group);
        let (kind, value, reference) = match &fit {
            Some(f) => {
                let (v, r) = f.value_and_reference();
                (f.kind(), v, r)
            }
            None => ("none", f64::NAN, f64::NAN),
        };
        table.push(vec![
            row.n.into(),
            row.s.into(),
            row.t.into(),
            row.entropy_bits.into(),
            row.mean_midpoint_height.into(),
            kind.into(),
            value.into(),
            reference.into(),
        ]);
        if !row.entropy_bits.is_finite() {
            report.failures.push(format!(
                "entropy-scan n={} s={} t={}: entropy is not finite",
                row.n, row.s, row.t
            ));
        }
    }
    let per_row = elapsed / rows.len().max(1) as f64;
    add_timings(config, &mut table, vec![per_row; rows.len()]);
    report.tables.push(table);
    Ok(())
}

fn mcmc_cmd(config: &RunConfig, report: &mut Report) -> Result<()> {
    let mut table = Table::new(
        "summary",
        &[
            "n", "s", "t", "seed", "steps", "accepted", "acceptance_rate", "tv_distance",
            "final_walk", "final_area", "trajectory_digest",
        ],
    );
    let stride = if config.stride == 0 {
        (config.steps / 10_000).max(1)
    } else {
        config.stride
    };
    let points = per_point(config, |p| {
        let start = match &config.start {
            Some(text) => Walk::parse(text, p.s)?,
            None => Walk::flat(p.n),
        };
        let ensemble = if count(p) <= BigUint::from(DEFAULT_MAX_WALKS) {
            Some(enumerate(p)?)
        } else {
            None
        };
        let mut visits = ensemble.as_ref().map(EnsembleVisits::new);
        let mut trace = match &config.out {
            Some(dir) => {
                let path = dir.join(format!("mcmc.trace.{}.csv", file_stem(p)));
                Some(CsvTrace::new(BufWriter::new(File::create(path)?), stride)?)
            }
            None => None,
        };
        let mut observers: Vec<&mut dyn Observer> = Vec::new();
        if let Some(v) = visits.as_mut() {
            observers.push(v);
        }
        if let Some(t) = trace.as_mut() {
            observers.push(t);
        }
        let run = mcmc_sample(p, config.steps, config.seed, &start, &mut observers)?;
        drop(observers);
        if let Some(t) = trace {
            t.finish()?;
        }
        let tv = match (&ensemble, &visits) {
            (Some(e), Some(v)) => total_variation(&v.empirical(), &stationary(p, e).pi),
            _ => f64::NAN,
        };
        let mut row = key(p);
        row.extend([
            run.seed.into(),
            run.steps.into(),
            run.accepted.into(),
            (run.accepted as f64 / run.steps as f64).into(),
            tv.into(),
            run.final_walk.to_string().into(),
            run.final_walk.area().into(),
            run.trajectory_digest.into(),
        ]);
        Ok(row)
    })?;
    let mut seconds = Vec::new();
    for (_, row, secs) in points {
        table.push(row);
        seconds.push(secs);
    }
    add_timings(config, &mut table, seconds);
    report.tables.push(table);
    Ok(())
}
