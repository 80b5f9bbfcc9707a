//! Text renderings shared by the CLI and the Python bindings: the table of
//! dense-orbit triangles, tabular certificate dumps, and the summary
//! statistics.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::certify::{
    enumerate_certificates, CertificateRecord, Entry, Filters, Statistics, Verdict,
};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OutputFormat {
    #[default]
    Tsv,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(OutputFormat::Tsv),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!(
                "unknown format {other:?} (expected tsv, csv or json)"
            )),
        }
    }
}

pub const COLUMNS: [&str; 10] = [
    "q1",
    "q2",
    "q3",
    "k",
    "genus",
    "stratum",
    "rank_lb",
    "full_rank",
    "hyp_excluded",
    "verdict",
];

/// JSON shape of one enumerated triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub triple: [u64; 3],
    pub certificate: CertificateRecord,
}

fn row(e: &Entry) -> [String; 10] {
    let c = &e.certificate;
    [
        e.q[0].to_string(),
        e.q[1].to_string(),
        e.q[2].to_string(),
        e.k().to_string(),
        c.genus.to_string(),
        c.stratum.to_string(),
        c.rank_lower_bound.to_string(),
        c.full_rank_certified.to_string(),
        c.hyperelliptic_excluded.to_string(),
        c.verdict.to_string(),
    ]
}

/// Renders entries as TSV, CSV (with a header row) or a JSON array.
pub fn render_entries(entries: &[Entry], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => {
            let records: Vec<EntryRecord> = entries
                .iter()
                .map(|e| EntryRecord {
                    triple: e.q,
                    certificate: e.certificate.clone().into(),
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&records).expect("records serialize");
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Tsv | OutputFormat::Csv => {
            let delim = if format == OutputFormat::Tsv {
                b'\t'
            } else {
                b','
            };
            let mut w = csv::WriterBuilder::new()
                .delimiter(delim)
                .from_writer(Vec::new());
            let io = |e: csv::Error| crate::error::Error::Invariant(format!("writing table: {e}"));
            w.write_record(COLUMNS).map_err(io)?;
            for e in entries {
                w.write_record(row(e)).map_err(io)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| crate::error::Error::Invariant(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("ascii output"))
        }
    }
}

/// Triples with a dense-orbit verdict among odd `k <= k_max` with distinct
/// numerators and gcd 1.
pub fn dense_triangles(k_max: u64) -> Result<Vec<Entry>> {
    Ok(enumerate_certificates(k_max, Filters::ALL)?
        .into_iter()
        .filter(|e| e.certificate.verdict == Verdict::DenseInStratumComponent)
        .collect())
}

/// One line per `k`: `k=11: (1,2,8) (1,3,7) (2,4,5)`.
pub fn render_table(entries: &[Entry]) -> String {
    let mut by_k: BTreeMap<u64, Vec<[u64; 3]>> = BTreeMap::new();
    for e in entries {
        by_k.entry(e.k()).or_default().push(e.q);
    }
    let mut out = String::new();
    for (k, mut qs) in by_k {
        qs.sort();
        write!(out, "k={k}:").unwrap();
        for q in qs {
            write!(out, " ({},{},{})", q[0], q[1], q[2]).unwrap();
        }
        out.push('\n');
    }
    out
}

/// The filters under which the dense fraction is usually quoted: odd `k`,
/// distinct numerators, and every such triple counted, including those with
/// a common factor (which are certified in reduced form).
pub const STATS_FILTERS: Filters = Filters {
    odd_k: true,
    distinct_q: true,
    gcd_one: false,
};

/// Expected values for `k_max = 49`.
pub const EXPECTED_TOTAL_49: usize = 1436;
pub const EXPECTED_FRACTION_49: f64 = 0.74;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub all_triples: Statistics,
    pub primitive_only: Statistics,
}

impl StatsReport {
    pub fn compute(k_max: u64) -> Result<Self> {
        let entries = enumerate_certificates(k_max, STATS_FILTERS)?;
        let all_triples = Statistics::from_entries(k_max, STATS_FILTERS, &entries);
        let primitive: Vec<Entry> = entries
            .into_iter()
            .filter(|e| Filters::ALL.admits(e.q))
            .collect();
        let primitive_only = Statistics::from_entries(k_max, Filters::ALL, &primitive);
        Ok(StatsReport {
            all_triples,
            primitive_only,
        })
    }

    /// Discrepancies against the expected `k_max = 49` figures.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.all_triples.k_max != 49 {
            return w;
        }
        if self.all_triples.total != EXPECTED_TOTAL_49 {
            w.push(format!(
                "expected {EXPECTED_TOTAL_49} triangles, counted {} (all triples) and {} (gcd 1 only)",
                self.all_triples.total, self.primitive_only.total
            ));
        }
        if self.all_triples.dense_fraction() < EXPECTED_FRACTION_49 {
            w.push(format!(
                "expected a dense fraction of at least {EXPECTED_FRACTION_49}, got {:.4}",
                self.all_triples.dense_fraction()
            ));
        }
        w
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let block = |out: &mut String, label: &str, s: &Statistics| {
            writeln!(out, "[{label}]").unwrap();
            writeln!(out, "total\t{}", s.total).unwrap();
            writeln!(out, "full_rank\t{}", s.full_rank).unwrap();
            writeln!(out, "dense\t{}", s.dense).unwrap();
            writeln!(out, "fraction\t{:.4}", s.dense_fraction()).unwrap();
        };
        writeln!(out, "k_max\t{}", self.all_triples.k_max).unwrap();
        block(
            &mut out,
            "odd k, distinct q, all triples",
            &self.all_triples,
        );
        block(&mut out, "odd k, distinct q, gcd 1", &self.primitive_only);
        for w in self.warnings() {
            writeln!(out, "WARNING\t{w}").unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_for_k15() {
        let t = render_table(&dense_triangles(15).unwrap());
        assert_eq!(
            t,
            "k=11: (1,2,8) (1,3,7) (2,4,5)\nk=13: (1,4,8) (2,3,8) (3,4,6)\nk=15: (4,5,6)\n"
        );
        assert_eq!(render_table(&dense_triangles(9).unwrap()), "");
    }

    #[test]
    fn tsv_and_csv_headers() {
        let entries = dense_triangles(11).unwrap();
        let tsv = render_entries(&entries, OutputFormat::Tsv).unwrap();
        let mut lines = tsv.lines();
        assert_eq!(lines.next().unwrap(), COLUMNS.join("\t"));
        assert_eq!(
            lines.next().unwrap(),
            "1\t2\t8\t11\t5\tH(7,1)\t5\ttrue\ttrue\tDenseInStratumComponent"
        );
        let csv = render_entries(&entries, OutputFormat::Csv).unwrap();
        assert!(csv.lines().nth(1).unwrap().contains("\"H(7,1)\""));
    }

    #[test]
    fn json_entries_parse_back() {
        let entries = dense_triangles(13).unwrap();
        let json = render_entries(&entries, OutputFormat::Json).unwrap();
        let back: Vec<EntryRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(back.len(), 6);
        assert_eq!(back[0].triple, [1, 2, 8]);
    }

    #[test]
    fn stats_small() {
        let r = StatsReport::compute(3).unwrap();
        assert_eq!(r.all_triples.total, 0);
        assert!(r.warnings().is_empty());
        let r = StatsReport::compute(25).unwrap();
        assert_eq!(r.primitive_only.dense, 102);
    }
}
