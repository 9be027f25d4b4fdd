//! File emission helpers: atomic writes (temp-then-rename) and the
//! side-by-side cost table.

use diffsearch_core::amplify::RunReport;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Write atomically: temp file in the target directory, then rename.
pub fn atomic_write(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp: PathBuf = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV cost table comparing original vs modified run reports.
pub fn cost_table_csv(original: Option<&RunReport>, modified: Option<&RunReport>) -> String {
    let mut out = String::from("metric,original,modified\n");
    let row = |name: &str, o: Option<f64>, m: Option<f64>| {
        format!("{name},{},{}\n", cell(o), cell(m))
    };
    out.push_str(&row(
        "q_m_used",
        original.map(|r| r.q_m_used as f64),
        modified.map(|r| r.q_m_used as f64),
    ));
    out.push_str(&row(
        "final_success",
        original.map(|r| r.final_success),
        modified.map(|r| r.final_success),
    ));
    out.push_str(&row(
        "total_units",
        original.map(|r| r.cost.total_units),
        modified.map(|r| r.cost.total_units),
    ));
    out.push_str(&row(
        "model_units",
        original.map(|r| r.model.original_units),
        modified.map(|r| r.model.modified_units),
    ));
    out.push_str(&row(
        "per_iteration_units",
        original.map(|r| r.cost.per_iteration_units),
        modified.map(|r| r.cost.per_iteration_units),
    ));
    out.push_str(&row(
        "pea_queries_per_call",
        original.map(|_| 0.0),
        modified.map(|r| r.pea.as_ref().map(|p| p.queries_per_call as f64).unwrap_or(1.0)),
    ));
    out.push_str(&row(
        "eq16_search_estimate",
        None,
        modified.map(|r| r.model.modified_search_term),
    ));
    out
}
