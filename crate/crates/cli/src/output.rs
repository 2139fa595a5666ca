//! Report serialization: JSON lines with a trailing summary object, or CSV
//! with the map-valued fields flattened to sorted `key=value` lists.

use schatten_opsys::report::{Summary, VerificationReport};

pub fn to_jsonl(reports: &[VerificationReport], summary: &Summary) -> String {
    let mut out = String::new();
    for report in reports {
        out.push_str(&report.to_json());
        out.push('\n');
    }
    out.push_str(&summary.to_json());
    out.push('\n');
    out
}

pub fn to_csv(reports: &[VerificationReport]) -> Result<String, String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "check_name",
            "passed",
            "elapsed_ms",
            "inputs",
            "quantities",
            "residuals",
        ])
        .map_err(|e| e.to_string())?;
    for report in reports {
        let inputs = join_map(report.inputs.iter().map(|(k, v)| (k, v.to_string())));
        let quantities = join_map(report.quantities.iter().map(|(k, v)| (k, v.to_string())));
        let residuals = join_map(
            report
                .residuals
                .iter()
                .map(|(k, v)| (k, format!("{v:.16e}"))),
        );
        writer
            .write_record([
                report.check_name.as_str(),
                if report.passed { "true" } else { "false" },
                &format!("{:.16e}", report.elapsed_ms),
                &inputs,
                &quantities,
                &residuals,
            ])
            .map_err(|e| e.to_string())?;
    }
    let bytes = writer.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn join_map<'a>(entries: impl Iterator<Item = (&'a String, String)>) -> String {
    entries
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}
