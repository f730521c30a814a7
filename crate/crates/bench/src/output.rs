//! Per-generation statistics as CSV.

use std::io::{self, Write};

use typegp::format::fmt_real;
use typegp::RunStats;

pub const HEADER: [&str; 5] = [
    "generation",
    "best_fitness",
    "mean_fitness",
    "elapsed_seconds",
    "best_tree",
];

/// Writes `# key: value` metadata lines, the header and one row per
/// generation. With `timing` off, elapsed seconds are written as 0 so that
/// identical runs produce identical files.
pub fn write_stats<W: Write>(
    mut out: W,
    metadata: &[(String, String)],
    stats: &RunStats,
    timing: bool,
) -> io::Result<()> {
    for (key, value) in metadata {
        writeln!(out, "# {key}: {value}")?;
    }
    let mut csv = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(out);
    csv.write_record(HEADER)?;
    for r in &stats.records {
        let elapsed = if timing { r.elapsed_seconds } else { 0.0 };
        csv.write_record([
            r.generation.to_string(),
            fmt_real(r.best_fitness),
            fmt_real(r.mean_fitness),
            fmt_real(elapsed),
            r.best_tree.clone(),
        ])?;
    }
    csv.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use typegp::GenerationRecord;

    fn record(generation: usize, tree: &str) -> GenerationRecord {
        GenerationRecord {
            generation,
            best_fitness: 0.1,
            mean_fitness: -2.0,
            elapsed_seconds: 1.25,
            best_tree: tree.into(),
        }
    }

    #[test]
    fn layout() {
        let stats = RunStats {
            records: vec![
                record(0, "(Lit integer:1)"),
                record(1, "(Guess [text:\"a,b\"])"),
            ],
        };
        let mut buf = Vec::new();
        write_stats(&mut buf, &[("seed".into(), "3".into())], &stats, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# seed: 3\n\
             generation,best_fitness,mean_fitness,elapsed_seconds,best_tree\n\
             0,0.10000000000000001,-2,1.25,(Lit integer:1)\n\
             1,0.10000000000000001,-2,1.25,\"(Guess [text:\"\"a,b\"\"])\"\n"
        );
        let mut untimed = Vec::new();
        write_stats(&mut untimed, &[], &stats, false).unwrap();
        assert!(String::from_utf8(untimed)
            .unwrap()
            .contains("0,0.10000000000000001,-2,0,(Lit integer:1)\n"));
    }

    #[test]
    fn reads_back_with_a_csv_parser() {
        let stats = RunStats {
            records: vec![record(0, "(P text:\"x, \\\"y\\\"\")")],
        };
        let mut buf = Vec::new();
        write_stats(&mut buf, &[("k".into(), "v".into())], &stats, true).unwrap();
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(&buf[..]);
        assert_eq!(reader.headers().unwrap(), HEADER.as_slice());
        let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), 1);
        assert_eq!(&rows[0][4], "(P text:\"x, \\\"y\\\"\")");
    }
}
