//! CSV, JSON and SVG renderings of spectrum tables.

use std::fmt::Write as _;

use hchain_core::spectrum::SpectrumTable;
use serde::Serialize;
use serde_json::{json, Value};

use crate::numeric::oracle::OracleComparison;
use crate::report::RunManifest;

/// Columns `m,q,p,l` (as many as the chain has), `H1..Hn` in units of ħμ, optional oracle verdict.
pub fn spectrum_csv(table: &SpectrumTable, oracle: Option<&OracleComparison>) -> Result<String, csv::Error> {
    let n = table.labels.len();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = table.labels.iter().map(|s| s.to_string()).collect();
    header.extend((1..=n).map(|i| format!("H{i}")));
    if oracle.is_some() {
        header.push("oracle".into());
    }
    w.write_record(&header)?;
    for (k, r) in table.rows.iter().enumerate() {
        let mut rec: Vec<String> = r.labels.iter().map(|l| l.to_string()).collect();
        rec.extend(r.energies.iter().map(|e| e.to_string()));
        if let Some(o) = oracle {
            rec.push(if o.per_row[k] { "match" } else { "missing" }.into());
        }
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct Row<'a> {
    labels: &'a [i64],
    energies: Vec<String>,
    phi: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<bool>,
}

pub fn spectrum_json(table: &SpectrumTable, manifest: &RunManifest, oracle: Option<&OracleComparison>) -> Value {
    let rows: Vec<Row> = table
        .rows
        .iter()
        .enumerate()
        .map(|(k, r)| Row {
            labels: &r.labels,
            energies: r.energies.iter().map(|e| e.to_string()).collect(),
            phi: r.phi.iter().map(|e| e.to_string()).collect(),
            oracle: oracle.map(|o| o.per_row[k]),
        })
        .collect();
    json!({
        "manifest": manifest,
        "chain": table.chain.to_string(),
        "spacing": table.spacing.name(),
        "units": "hbar*mu",
        "labels": table.labels,
        "mu": table.mu.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "rows": rows,
        "degeneracy": table.degeneracy.iter().map(|(e, m)| json!({"energy": e.to_string(), "count": m})).collect::<Vec<_>>(),
        "oracle": oracle,
    })
}

/// Level diagram of the outermost Hamiltonian, one line per distinct level.
pub fn spectrum_svg(table: &SpectrumTable) -> String {
    let levels = &table.degeneracy;
    let (w, h, pad) = (420.0, 520.0, 40.0);
    let lo = levels.first().map(|(e, _)| e.to_f64()).unwrap_or(0.0);
    let hi = levels.last().map(|(e, _)| e.to_f64()).unwrap_or(1.0);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let y = |e: f64| h - pad - (e - lo) / span * (h - 2.0 * pad);
    let n = table.labels.len();
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{pad}" y="20" font-family="monospace" font-size="13">chain ({}) H{n}/(ħμ), {} spacing</text>"#,
        table.chain,
        table.spacing.name()
    );
    for (e, mult) in levels {
        let yy = y(e.to_f64());
        let _ = writeln!(
            s,
            r#"<line x1="{pad}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="black" stroke-width="1.5"/>"#,
            w * 0.6
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="11">{e} (×{mult})</text>"#,
            w * 0.62,
            yy + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use hchain_core::spectrum::{ladder, Spacing};
    use hchain_core::systems::ChainLabel;
    use hchain_core::Scalar;

    #[test]
    fn ground_row_only_at_bound_zero() {
        let l = ladder(ChainLabel::C112, Spacing::Oscillator).unwrap();
        let t = l.enumerate(&vec![Scalar::ratio(1, 2); 3], 0).unwrap();
        let csv = spectrum_csv(&t, None).unwrap();
        assert_eq!(csv, "m,q,p,H1,H2,H3\n0,0,0,3/2,3,6\n");
        assert!(spectrum_svg(&t).contains("(×1)"));
    }
}
