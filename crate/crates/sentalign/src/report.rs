//! CSV reports. Comma separated, header row, numbers at six decimals.

use std::collections::BTreeMap;

use sentalign_core::histogram::Histogram;
use sentalign_core::stats::{Side, StatsRow};
use sentalign_core::{Matcher, Measure};

use crate::fmt6;
use crate::pipeline::{EvalRow, VariantRun};

fn finish(mut writer: csv::Writer<Vec<u8>>) -> String {
    writer.flush().expect("in-memory writes do not fail");
    String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("csv output is UTF-8")
}

fn writer<const N: usize>(header: [&str; N]) -> csv::Writer<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    w
}

fn k_label(k: Option<f64>) -> String {
    k.map_or_else(|| "none".to_string(), fmt6)
}

/// One row per source, simple-side columns next to complex-side columns.
pub fn stats_csv(rows: &[StatsRow]) -> String {
    let mut w = writer([
        "source",
        "simple_a",
        "simple_t",
        "simple_s_per_a",
        "simple_t_per_s",
        "simple_w_per_a",
        "complex_a",
        "complex_t",
        "complex_s_per_a",
        "complex_t_per_s",
        "complex_w_per_a",
    ]);
    let mut grouped: Vec<(&str, [Option<&StatsRow>; 2])> = Vec::new();
    for row in rows.iter().filter(|r| r.articles > 0) {
        let slot = match grouped.iter_mut().find(|(s, _)| *s == row.source) {
            Some(slot) => slot,
            None => {
                grouped.push((&row.source, [None, None]));
                grouped.last_mut().expect("just pushed")
            }
        };
        slot.1[usize::from(row.side == Side::Complex)] = Some(row);
    }
    // Totals last, sources in name order.
    grouped.sort_by_key(|(s, _)| (*s == sentalign_core::stats::TOTAL, s.to_string()));
    for (source, sides) in grouped {
        let mut record = vec![source.to_string()];
        for side in sides {
            match side {
                Some(r) => record.extend([
                    r.articles.to_string(),
                    r.tokens.to_string(),
                    fmt6(r.sentences_per_article),
                    fmt6(r.tokens_per_sentence),
                    fmt6(r.words_per_article),
                ]),
                None => record.extend(["0", "0", "0.000000", "0.000000", "0.000000"].map(String::from)),
            }
        }
        w.write_record(&record).expect("in-memory write");
    }
    finish(w)
}

/// One row per variant.
pub fn variants_csv(runs: &[VariantRun]) -> String {
    let mut w = writer(["variant", "measure", "matcher", "k", "pairs", "failed_pairs", "matches", "avg_similarity"]);
    for run in runs {
        let v = run.variant;
        w.write_record([
            v.name(),
            v.measure.name().to_string(),
            v.matcher.name().to_string(),
            k_label(v.k),
            run.sets.len().to_string(),
            run.failures.len().to_string(),
            run.match_count().to_string(),
            fmt6(run.average_similarity()),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

/// Measures as rows; average similarity and match count per
/// matcher/threshold combination as columns.
pub fn variants_table_csv(runs: &[VariantRun]) -> String {
    let combos = [(Matcher::Mst, false), (Matcher::Mst, true), (Matcher::MstLis, false), (Matcher::MstLis, true)];
    let label = |m: Matcher, thr: bool| format!("{}_{}", m.name(), if thr { "k" } else { "nothr" });
    let mut header = vec!["measure".to_string()];
    header.extend(combos.iter().map(|&(m, t)| format!("avg_{}", label(m, t))));
    header.extend(combos.iter().map(|&(m, t)| format!("matches_{}", label(m, t))));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    let mut by_measure: BTreeMap<usize, Vec<&VariantRun>> = BTreeMap::new();
    for run in runs {
        let pos = Measure::ALL.iter().position(|m| *m == run.variant.measure).expect("known measure");
        by_measure.entry(pos).or_default().push(run);
    }
    for (pos, group) in by_measure {
        let find =
            |m: Matcher, thr: bool| group.iter().find(|r| r.variant.matcher == m && r.variant.k.is_some() == thr);
        let mut record = vec![Measure::ALL[pos].name().to_string()];
        record
            .extend(combos.iter().map(|&(m, t)| find(m, t).map_or_else(String::new, |r| fmt6(r.average_similarity()))));
        record
            .extend(combos.iter().map(|&(m, t)| find(m, t).map_or_else(String::new, |r| r.match_count().to_string())));
        w.write_record(&record).expect("in-memory write");
    }
    finish(w)
}

pub fn evaluation_csv(rows: &[EvalRow]) -> String {
    let mut w =
        writer(["variant", "source", "pairs", "true_positives", "predicted", "gold", "precision", "recall", "f1"]);
    for r in rows {
        w.write_record([
            r.variant.clone(),
            r.source.clone(),
            r.pairs.to_string(),
            r.counts.true_positives.to_string(),
            r.counts.predicted.to_string(),
            r.counts.gold.to_string(),
            fmt6(r.scores.precision),
            fmt6(r.scores.recall),
            fmt6(r.scores.f1),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

pub fn histogram_csv(histogram: &Histogram) -> String {
    let mut w = writer(["bin_lo", "bin_hi", "count", "fraction"]);
    for (i, bin) in histogram.bins.iter().enumerate() {
        w.write_record([fmt6(bin.lo), fmt6(bin.hi), bin.count.to_string(), fmt6(histogram.mass(i))])
            .expect("in-memory write");
    }
    finish(w)
}

/// `(variant, labels, positive, accuracy)` rows.
pub fn accuracy_csv(rows: &[(String, usize, usize, f64)]) -> String {
    let mut w = writer(["variant", "labels", "positive", "accuracy"]);
    for (variant, labels, positive, accuracy) in rows {
        w.write_record([variant.clone(), labels.to_string(), positive.to_string(), fmt6(*accuracy)])
            .expect("in-memory write");
    }
    finish(w)
}
