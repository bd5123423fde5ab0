use std::fmt::Write;

use super::{EvaluationReport, KindSummary};

/// One table row: a method identifier and its pooled report.
#[derive(Debug, Clone)]
pub struct CompareRow {
    pub method: String,
    pub report: EvaluationReport,
}

/// Literature-style label for a method identifier.
pub fn display_name(method: &str) -> String {
    match method {
        "zeni" => "Zeni et al.",
        "desailly" => "Desailly et al.",
        "oconnor" => "O'Connor et al.",
        "ghoussayni" => "Ghoussayni et al.",
        "hreljac" => "Hreljac et al.",
        "hsue" => "Hsue et al.",
        "bonci" => "Bonci et al.",
        "lstm" => "LSTM",
        other => other,
    }
    .to_string()
}

fn ms(v: Option<f64>) -> String {
    match v {
        // Avoid printing "-0.00".
        Some(x) if x.abs() < 0.005 => "0.00".to_string(),
        Some(x) => format!("{x:.2}"),
        None => "n/a".to_string(),
    }
}

fn rate(k: &KindSummary) -> String {
    k.detection_rate.map_or_else(|| "n/a".to_string(), |r| format!("{:.1}", 100.0 * r))
}

/// Markdown table with one row per method: heel-strike and toe-off mean and STD in ms,
/// followed by a detection summary table and the trial counts.
pub fn format_compare_table(rows: &[CompareRow], trials: usize, skipped: usize) -> String {
    let mut s = String::new();
    s.push_str("| Method | Heel Strike Mean (ms) | Heel Strike STD (ms) | Toe Off Mean (ms) | Toe Off STD (ms) |\n");
    s.push_str("|:--|--:|--:|--:|--:|\n");
    for r in rows {
        let (hs, to) = (&r.report.heel_strike, &r.report.toe_off);
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} |",
            display_name(&r.method),
            ms(hs.mean_ms),
            ms(hs.std_ms),
            ms(to.mean_ms),
            ms(to.std_ms)
        );
    }
    s.push('\n');
    s.push_str("| Method | HS Detection (%) | TO Detection (%) | Matched | Missed | Spurious |\n");
    s.push_str("|:--|--:|--:|--:|--:|--:|\n");
    for r in rows {
        let (hs, to) = (&r.report.heel_strike, &r.report.toe_off);
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            display_name(&r.method),
            rate(hs),
            rate(to),
            hs.n_matched + to.n_matched,
            hs.n_missed + to.n_missed,
            hs.n_spurious + to.n_spurious
        );
    }
    let _ = writeln!(s, "\nTrials: {trials} evaluated, {skipped} skipped");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_zero_is_printed_as_zero() {
        assert_eq!(ms(Some(-0.001)), "0.00");
        assert_eq!(ms(Some(-8.664)), "-8.66");
        assert_eq!(ms(None), "n/a");
    }

    #[test]
    fn names() {
        assert_eq!(display_name("oconnor"), "O'Connor et al.");
        assert_eq!(display_name("lstm"), "LSTM");
        assert_eq!(display_name("custom"), "custom");
    }
}
