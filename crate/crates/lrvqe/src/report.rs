//! Report emission: scaling and fit CSVs plus two-column plot-data files.
//!
//! All real numbers render with a configurable number of significant digits
//! (default 10), `.` decimal separator, newline-terminated rows; emission is
//! deterministic, so rerunning on an unchanged store reproduces every file
//! byte for byte.

use std::fs;
use std::path::PathBuf;

use crate::circuit::AnsatzKind;
use crate::config::parse_config_str;
use crate::error::{Error, Result};
use crate::store::ResultStore;
use crate::sweep::{
    scaling_fits, scaling_records, FitModel, FitQuantity, RunRecord, ScalingRecord,
};

pub const SCALING_HEADER: &str =
    "alpha,lambda,n,ansatz,p_star,extrapolated,fit_a,fit_b,fit_r2,rq_total,params_per_layer,n_iter_avg,rc_total";
pub const FITS_HEADER: &str = "alpha,lambda,ansatz,quantity,model,c2,c1,c0,r2";

/// Render with `sig` significant digits in plain positional notation,
/// falling back to scientific for extreme magnitudes.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if !x.is_finite() {
        return "NA".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..=14).contains(&exp) {
        format!("{:.*e}", sig.saturating_sub(1), x)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

fn opt_int(v: Option<usize>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

fn opt_sig(v: Option<f64>, sig: usize) -> String {
    v.map_or_else(|| "NA".to_string(), |x| fmt_sig(x, sig))
}

fn write_text(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// scaling.csv: one row per (alpha, lambda, N, kind) cell.
pub fn render_scaling_csv(records: &[ScalingRecord], sig: usize) -> String {
    let mut out = String::from(SCALING_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_sig(r.alpha, sig),
            fmt_sig(r.lambda, sig),
            r.n,
            r.kind.token(),
            opt_int(r.p_star),
            r.extrapolated,
            opt_sig(r.fit_a, sig),
            opt_sig(r.fit_b, sig),
            opt_sig(r.fit_r2, sig),
            opt_int(r.rq_total),
            r.params_per_layer,
            opt_sig(r.n_iter_avg, sig),
            opt_sig(r.rc_total, sig),
        ));
    }
    out
}

/// Group key (alpha, lambda, kind) in deterministic order.
fn fit_groups(records: &[ScalingRecord]) -> Vec<(f64, f64, AnsatzKind, Vec<&ScalingRecord>)> {
    let mut groups: Vec<(f64, f64, AnsatzKind, Vec<&ScalingRecord>)> = Vec::new();
    for rec in records {
        match groups
            .iter_mut()
            .find(|(a, l, k, _)| *a == rec.alpha && *l == rec.lambda && *k == rec.kind)
        {
            Some((_, _, _, bucket)) => bucket.push(rec),
            None => groups.push((rec.alpha, rec.lambda, rec.kind, vec![rec])),
        }
    }
    groups.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    groups
}

/// fits.csv: per (alpha, lambda, kind), linear p*(N) plus quadratic R_Q(N)
/// and R_C(N). Groups with too few usable cells emit NA coefficients.
pub fn render_fits_csv(records: &[ScalingRecord], sig: usize) -> String {
    let mut out = String::from(FITS_HEADER);
    out.push('\n');
    for (alpha, lambda, kind, group) in fit_groups(records) {
        let owned: Vec<ScalingRecord> = group.iter().map(|r| (*r).clone()).collect();
        for (quantity, model) in [
            (FitQuantity::PStar, FitModel::Linear),
            (FitQuantity::Rq, FitModel::Quadratic),
            (FitQuantity::Rc, FitModel::Quadratic),
        ] {
            let fit = scaling_fits(&owned, quantity, model).ok();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                fmt_sig(alpha, sig),
                fmt_sig(lambda, sig),
                kind.token(),
                quantity.token(),
                model.token(),
                opt_sig(fit.map(|f| f.c2), sig),
                opt_sig(fit.map(|f| f.c1), sig),
                opt_sig(fit.map(|f| f.c0), sig),
                opt_sig(fit.map(|f| f.r2), sig),
            ));
        }
    }
    out
}

fn key_token(x: f64) -> String {
    format!("{x}")
}

/// Emit every report artifact from a completed store. Returns the paths
/// written.
pub fn emit_reports(store: &ResultStore) -> Result<Vec<PathBuf>> {
    let config = parse_config_str(&store.read_resolved_config()?)?;
    let runs = store.load_all_runs()?;
    if runs.is_empty() {
        return Err(Error::NoRuns(store.root().to_path_buf()));
    }
    let sig = config.precision;
    let scaling = scaling_records(&runs, config.threshold)?;
    for rec in &scaling {
        if let Some(r2) = rec.fit_r2 {
            if r2 < 0.8 && rec.p_star.is_some() {
                eprintln!(
                    "warning: log-linear fit r^2 = {:.3} below 0.8 at alpha={} lambda={} n={} kind={}",
                    r2, rec.alpha, rec.lambda, rec.n, rec.kind
                );
            }
        }
    }

    let mut written = Vec::new();
    let scaling_path = store.scaling_csv_path();
    write_text(&scaling_path, &render_scaling_csv(&scaling, sig))?;
    written.push(scaling_path);

    let fits_path = store.fits_csv_path();
    write_text(&fits_path, &render_fits_csv(&scaling, sig))?;
    written.push(fits_path);

    if config.plot_data {
        written.extend(emit_plotdata(store, &runs, &scaling, sig)?);
    }
    Ok(written)
}

/// Write scaling.csv alone (the `fit` subcommand).
pub fn emit_scaling_csv(store: &ResultStore, out_path: &PathBuf) -> Result<()> {
    let config = parse_config_str(&store.read_resolved_config()?)?;
    let runs = store.load_all_runs()?;
    if runs.is_empty() {
        return Err(Error::NoRuns(store.root().to_path_buf()));
    }
    let scaling = scaling_records(&runs, config.threshold)?;
    write_text(out_path, &render_scaling_csv(&scaling, config.precision))
}

fn emit_plotdata(
    store: &ResultStore,
    runs: &[RunRecord],
    scaling: &[ScalingRecord],
    sig: usize,
) -> Result<Vec<PathBuf>> {
    let dir = store.plotdata_dir();
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut written = Vec::new();

    // (p, E(p)) per cell.
    let mut cells: Vec<(f64, f64, usize, AnsatzKind)> = Vec::new();
    for r in runs {
        if !cells.contains(&r.cell()) {
            cells.push(r.cell());
        }
    }
    cells.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });
    for (alpha, lambda, n, kind) in cells {
        let mut rows: Vec<&RunRecord> = runs
            .iter()
            .filter(|r| r.cell() == (alpha, lambda, n, kind))
            .collect();
        rows.sort_by_key(|r| r.p);
        let mut text = String::new();
        for r in rows {
            text.push_str(&format!("{} {}\n", r.p, fmt_sig(r.ent_error, sig)));
        }
        let path = dir.join(format!(
            "error_{}_{}_{}_{}.dat",
            key_token(alpha),
            key_token(lambda),
            n,
            kind.token()
        ));
        write_text(&path, &text)?;
        written.push(path);
    }

    // (N, p*), (N, R_Q), (N, R_C) per (alpha, lambda, kind).
    for (alpha, lambda, kind, group) in fit_groups(scaling) {
        let mut rows = group;
        rows.sort_by_key(|r| r.n);
        let suffix = format!("{}_{}_{}", key_token(alpha), key_token(lambda), kind.token());
        let mut pstar_text = String::new();
        let mut rq_text = String::new();
        let mut rc_text = String::new();
        for r in rows {
            if let Some(p) = r.p_star {
                pstar_text.push_str(&format!("{} {}\n", r.n, p));
            }
            if let Some(q) = r.rq_total {
                rq_text.push_str(&format!("{} {}\n", r.n, q));
            }
            if let Some(c) = r.rc_total {
                rc_text.push_str(&format!("{} {}\n", r.n, fmt_sig(c, sig)));
            }
        }
        for (name, text) in [
            (format!("pstar_{suffix}.dat"), pstar_text),
            (format!("rq_{suffix}.dat"), rq_text),
            (format!("rc_{suffix}.dat"), rc_text),
        ] {
            let path = dir.join(name);
            write_text(&path, &text)?;
            written.push(path);
        }
    }
    Ok(written)
}
