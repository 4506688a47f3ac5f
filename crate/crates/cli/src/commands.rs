use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use varbound_core::oracle::{verify_suite_with, VerifyOptions};
use varbound_core::{
    full_report, optimize, optimize_all, sweep, theta_state, BasisMode, BoundReport, ObjectiveKind,
    OptResult, OrthonormalBasis, SweepSpec, VerifyReport, Weight,
};

use crate::csvio::{sig12, weight_label, SweepTable};
use crate::error::CliError;
use crate::scenario::{self, StateChoice};

fn push_kv(out: &mut String, key: &str, value: f64) {
    let _ = writeln!(out, "{key:<20} {}", sig12(value));
}

fn render_report(out: &mut String, r: &BoundReport) {
    push_kv(out, "variance_a", r.variance_a);
    push_kv(out, "variance_b", r.variance_b);
    push_kv(out, "product", r.product);
    for (name, value) in r.bounds() {
        push_kv(out, &name, value);
    }
}

fn render_matrix(out: &mut String, basis: &OrthonormalBasis) {
    let m = basis.matrix();
    for i in 0..m.dim() {
        let cells: Vec<String> = (0..m.dim())
            .map(|j| {
                let z = m.get(i, j);
                format!("[{}, {}]", sig12(z.re), sig12(z.im))
            })
            .collect();
        let _ = writeln!(out, "  {}", cells.join("  "));
    }
}

fn render_opt(out: &mut String, label: &str, r: &OptResult) {
    push_kv(out, label, r.best_value);
    let _ = writeln!(out, "{:<20} {}", format!("{label}.evaluations"), r.evaluations);
}

fn check_report(r: &BoundReport) -> Result<(), CliError> {
    let violations = r.invariant_violations();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Internal(violations.join("; ")))
    }
}

/// `varbound bounds`: every bound in the standard basis, plus optimized `L₁`/`L₂` when requested.
pub fn cmd_bounds(path: &Path, basis: Option<BasisMode>, json: bool) -> Result<String, CliError> {
    let s = scenario::load(path)?;
    let mode = basis.unwrap_or(s.basis);
    let psi = s.psi();
    let report = full_report(&s.a, &s.b, &psi, &OrthonormalBasis::standard(s.dimension), &s.weights)?;
    check_report(&report)?;
    let optimized = match mode {
        BasisMode::Standard => None,
        BasisMode::Optimized => Some(optimize_all(&s.a, &s.b, &psi, &s.weights, &s.optimizer)?),
    };

    if json {
        let mut obj = serde_json::Map::new();
        let num = |v: f64| serde_json::Value::from(v);
        obj.insert("variance_a".into(), num(report.variance_a));
        obj.insert("variance_b".into(), num(report.variance_b));
        obj.insert("product".into(), num(report.product));
        for (name, value) in report.bounds() {
            obj.insert(name, num(value));
        }
        if let Some(o) = &optimized {
            for (l, r) in &o.l1 {
                obj.insert(format!("l1_{}", weight_label(*l)), num(r.best_value));
            }
            obj.insert("l2".into(), num(o.l2.best_value));
            obj.insert("l1_l2_combined".into(), num(o.combined()));
        }
        let text = serde_json::to_string_pretty(&serde_json::Value::Object(obj))
            .map_err(|e| CliError::Internal(e.to_string()))?;
        return Ok(text + "\n");
    }

    let mut out = String::new();
    render_report(&mut out, &report);
    if let Some(o) = &optimized {
        let cfg = &s.optimizer;
        let _ = writeln!(
            out,
            "optimizer            restarts={} max_iterations={} tolerance={:e} seed={}",
            cfg.restarts, cfg.max_iterations, cfg.tolerance, cfg.seed
        );
        for (l, r) in &o.l1 {
            render_opt(&mut out, &format!("l1_{}", weight_label(*l)), r);
        }
        render_opt(&mut out, "l2", &o.l2);
        push_kv(&mut out, "l1_l2_combined", o.combined());
    }
    Ok(out)
}

/// Writes `contents` next to `output` and renames it into place.
fn write_atomically(output: &Path, contents: &[u8]) -> Result<(), CliError> {
    let unwritable = |e: std::io::Error| CliError::Input(format!("cannot write {}: {e}", output.display()));
    let dir = match output.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(unwritable)?;
    tmp.write_all(contents).map_err(unwritable)?;
    tmp.as_file().sync_all().map_err(unwritable)?;
    tmp.persist(output).map_err(|e| unwritable(e.error))?;
    Ok(())
}

/// `varbound sweep`: θ sweep of the scenario's observables written as CSV.
pub fn cmd_sweep(
    path: &Path,
    theta_start: f64,
    theta_end: f64,
    steps: usize,
    output: &Path,
) -> Result<SweepTable, CliError> {
    let s = scenario::load(path)?;
    if !matches!(s.state, StateChoice::Theta(_)) {
        return Err(CliError::Input("sweep requires a scenario whose state is the theta preset".into()));
    }
    let spec = SweepSpec {
        theta_start,
        theta_end,
        steps,
        weights: s.weights.clone(),
        basis_mode: s.basis,
        optimizer: s.optimizer,
    };
    spec.validate().map_err(|e| CliError::Input(e.to_string()))?;
    let rows = sweep(&s.a, &s.b, theta_state, &spec)?;
    for row in &rows {
        check_report(&row.report)?;
    }
    let table = SweepTable::from_rows(&rows);
    write_atomically(output, table.to_csv()?.as_bytes())?;
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindArg {
    Callebaut,
    Milne,
}

/// `varbound optimize`: one basis search, rendered as text.
pub fn cmd_optimize(
    path: &Path,
    kind: KindArg,
    lambda: Option<f64>,
    restarts: Option<usize>,
    seed: Option<u64>,
) -> Result<String, CliError> {
    let kind = match (kind, lambda) {
        (KindArg::Callebaut, Some(l)) => {
            ObjectiveKind::Callebaut(Weight::new(l).map_err(|e| CliError::Input(format!("--lambda: {e}")))?)
        }
        (KindArg::Callebaut, None) => return Err(CliError::Input("--lambda is required with --kind callebaut".into())),
        (KindArg::Milne, Some(_)) => return Err(CliError::Input("--lambda only applies to --kind callebaut".into())),
        (KindArg::Milne, None) => ObjectiveKind::Milne,
    };
    let s = scenario::load(path)?;
    let mut cfg = s.optimizer;
    cfg.restarts = restarts.unwrap_or(cfg.restarts);
    cfg.seed = seed.unwrap_or(cfg.seed);
    cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;

    let psi = s.psi();
    let r = optimize(&s.a, &s.b, &psi, kind, &cfg)?;

    let mut out = String::new();
    let label = match kind {
        ObjectiveKind::Callebaut(w) => format!("callebaut lambda={}", weight_label(w.value())),
        ObjectiveKind::Milne => "milne".to_string(),
    };
    let _ = writeln!(out, "{:<20} {label}", "kind");
    let _ = writeln!(
        out,
        "{:<20} restarts={} max_iterations={} tolerance={:e} seed={}",
        "optimizer", cfg.restarts, cfg.max_iterations, cfg.tolerance, cfg.seed
    );
    push_kv(&mut out, "best_value", r.best_value);
    let _ = writeln!(out, "{:<20} {}", "evaluations", r.evaluations);
    let per: Vec<String> = r.per_restart_values.iter().map(|&v| sig12(v)).collect();
    let _ = writeln!(out, "{:<20} {}", "per_restart_values", per.join(" "));
    let _ = writeln!(out, "best_basis (columns are basis vectors, entries [re, im]):");
    render_matrix(&mut out, &r.best_basis);
    Ok(out)
}

pub const DEFAULT_VERIFY_SEED: u64 = 20240607;
pub const DEFAULT_VERIFY_TRIALS: usize = 500;

pub fn render_verify(r: &VerifyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<28} {}", "checks_run", r.checks_run);
    let _ = writeln!(out, "{:<28} {:e}", "worst_margin", r.worst_margin);
    for (name, c) in &r.per_check {
        let _ = writeln!(out, "  {name:<26} runs={} failures={}", c.runs, c.failures);
    }
    for f in r.failures.iter().take(20) {
        let _ = writeln!(out, "FAILED {} [{}]: {}", f.check, f.instance, f.observed);
    }
    if r.failures.len() > 20 {
        let _ = writeln!(out, "... {} more failures", r.failures.len() - 20);
    }
    let _ = writeln!(out, "result: {}", if r.passed() { "PASS" } else { "FAIL" });
    out
}

/// `varbound verify`: the property suite. Returns the rendered report and whether it passed.
pub fn cmd_verify(seed: u64, trials: usize, inject_fault: bool) -> Result<(String, bool), CliError> {
    let r = verify_suite_with(seed, trials, VerifyOptions { inject_fault })
        .map_err(|e| CliError::Input(e.to_string()))?;
    Ok((render_verify(&r), r.passed()))
}
