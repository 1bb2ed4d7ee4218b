//! Human- and spreadsheet-facing views of a score report.

use stabbench_core::score::{score_to_f64, ScoreReport};

fn ratio_fields(s: &stabbench_core::score::Score) -> (String, String, f64) {
    (
        s.numer().to_string(),
        s.denom().to_string(),
        score_to_f64(s),
    )
}

/// Bucket table as CSV. Quality sums are exact rationals; the trailing
/// column is their decimal value for quick reading.
pub fn bucket_csv(report: &ScoreReport) -> String {
    let mut out = String::from("lo,hi,codes,successes,k_max,s_cap,s_qual_num,s_qual_den,s_qual\n");
    for b in &report.buckets {
        let (num, den, val) = ratio_fields(&b.s_qual);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{val:.6}\n",
            b.lo, b.hi, b.codes, b.successes, b.k_max, b.s_cap, num, den
        ));
    }
    out
}

/// Headline numbers, one per line.
pub fn summary_text(report: &ScoreReport) -> String {
    let (num, den, val) = ratio_fields(&report.s_qual);
    let successes = report.per_code.iter().filter(|c| c.success).count();
    format!(
        "instances: {}\nsuccesses: {}\nk_max: {}\ns_cap: {}\ns_qual: {num}/{den} ({val:.6})\n",
        report.per_code.len(),
        successes,
        report.k_max,
        report.s_cap,
    )
}
