//! Report files. Both formats carry the same columns in the same order, with
//! numbers in C `%.6e` so that reruns are byte-identical.

use crate::formats::{fmt_e, json_num, json_str};
use crate::verify::{Relation, ReportRow};
use crate::LabError;

pub const COLUMNS: [&str; 10] = ["id", "domain", "params", "relation", "lhs", "rhs", "margin", "tolerance", "pass", "resolutions"];

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(rows: &[ReportRow]) -> String {
    let mut s = COLUMNS.join(",");
    s.push('\n');
    for r in rows {
        let cells = [
            csv_field(&r.id),
            csv_field(&r.domain),
            csv_field(&r.params),
            r.relation.as_str().to_string(),
            fmt_e(r.lhs),
            fmt_e(r.rhs),
            fmt_e(r.margin),
            fmt_e(r.tolerance),
            r.pass.to_string(),
            csv_field(&r.resolutions),
        ];
        s += &cells.join(",");
        s.push('\n');
    }
    s
}

pub fn to_json(rows: &[ReportRow]) -> String {
    let mut s = String::from("[\n");
    for (i, r) in rows.iter().enumerate() {
        s += &format!(
            "  {{\"id\": {}, \"domain\": {}, \"params\": {}, \"relation\": {}, \"lhs\": {}, \"rhs\": {}, \"margin\": {}, \"tolerance\": {}, \"pass\": {}, \"resolutions\": {}}}",
            json_str(&r.id),
            json_str(&r.domain),
            json_str(&r.params),
            json_str(r.relation.as_str()),
            json_num(r.lhs),
            json_num(r.rhs),
            json_num(r.margin),
            json_num(r.tolerance),
            r.pass,
            json_str(&r.resolutions),
        );
        s += if i + 1 < rows.len() { ",\n" } else { "\n" };
    }
    s += "]\n";
    s
}

/// Read a JSON report back; `null` numbers become NaN.
pub fn from_json(text: &str) -> Result<Vec<ReportRow>, LabError> {
    let bad = |m: &str| LabError::Usage(format!("report: {m}"));
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
    arr.iter()
        .map(|o| {
            let s = |k: &str| o.get(k).and_then(|x| x.as_str()).map(str::to_string).ok_or_else(|| bad(k));
            let n = |k: &str| match o.get(k) {
                Some(serde_json::Value::Null) => Ok(f64::NAN),
                Some(x) => x.as_f64().ok_or_else(|| bad(k)),
                None => Err(bad(k)),
            };
            Ok(ReportRow {
                id: s("id")?,
                domain: s("domain")?,
                params: s("params")?,
                relation: Relation::parse(&s("relation")?).ok_or_else(|| bad("relation"))?,
                lhs: n("lhs")?,
                rhs: n("rhs")?,
                margin: n("margin")?,
                tolerance: n("tolerance")?,
                pass: o.get("pass").and_then(|x| x.as_bool()).ok_or_else(|| bad("pass"))?,
                resolutions: s("resolutions")?,
            })
        })
        .collect()
}

/// Write `<stem>.csv` and `<stem>.json`.
pub fn write_report(stem: &std::path::Path, rows: &[ReportRow]) -> Result<(), LabError> {
    if let Some(dir) = stem.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(stem.with_extension("csv"), to_csv(rows))?;
    std::fs::write(stem.with_extension("json"), to_json(rows))?;
    Ok(())
}
