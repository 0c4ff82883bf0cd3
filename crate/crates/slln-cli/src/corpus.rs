//! Ground-truth verdict table for the built-in corpus, and the runner that
//! diffs live classifications against it.
//!
//! Rows record what the worked examples pin down analytically: membership
//! for `ex4_1` exactly above `p/r`, failure of `ex4_2` through `q = p` with
//! membership beyond, failure of `ex4_3` for every `q`, plus bounded-law
//! sanity rows. The `q = p` cell of `ex4_1` is deliberately present twice:
//! in `SLLN(p, p)` yet outside the expectation series.

use serde::{Deserialize, Serialize};
use slln::criteria::{classify_mean_series, classify_slln, Overall, Target};
use slln::rational::parse_rat;
use slln::tailmodel::parse_spec;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectedRow {
    pub spec: String,
    pub p: String,
    pub q: String,
    pub target: String, // "slln" | "mean-series"
    pub expect: String, // "in" | "not" | "converges" | "diverges"
}

fn row(spec: &str, p: &str, q: &str, target: &str, expect: &str) -> ExpectedRow {
    ExpectedRow {
        spec: spec.to_string(),
        p: p.to_string(),
        q: q.to_string(),
        target: target.to_string(),
        expect: expect.to_string(),
    }
}

/// The built-in expected table.
pub fn builtin_table() -> Vec<ExpectedRow> {
    let mut rows = Vec::new();
    let e41 = "ex4_1:p=8/5,r=5/4";
    // membership iff q > p/r = 32/25
    for (q, v) in [
        ("1", "not"),
        ("32/25", "not"),
        ("13/10", "in"),
        ("3/2", "in"),
        ("8/5", "in"),
        ("2", "in"),
        ("3", "in"),
    ] {
        rows.push(row(e41, "8/5", q, "slln", v));
    }
    // expectation series iff p/r < q < p
    for (q, v) in [
        ("1", "diverges"),
        ("32/25", "diverges"),
        ("13/10", "converges"),
        ("3/2", "converges"),
        ("8/5", "diverges"),
        ("2", "diverges"),
        ("3", "diverges"),
    ] {
        rows.push(row(e41, "8/5", q, "mean-series", v));
    }
    // ex4_2: out of SLLN(3/2, q) for q <= 3/2, in beyond
    let e42 = "ex4_2:p=3/2";
    for (q, v) in [("1", "not"), ("5/4", "not"), ("3/2", "not"), ("2", "in")] {
        rows.push(row(e42, "3/2", q, "slln", v));
    }
    // ex4_3: out of SLLN(1, q) for every q >= 1
    for q in ["3/2", "2", "3"] {
        rows.push(row("ex4_3", "1", q, "slln", "not"));
    }
    // bounded sanity rows
    rows.push(row("rademacher", "3/2", "2", "slln", "in"));
    rows.push(row("rademacher", "1", "1", "mean-series", "converges"));
    rows.push(row("pareto:alpha=5/2,centered=true", "3/2", "1", "slln", "in"));
    rows.push(row("zero", "1", "1", "slln", "in"));
    rows
}

#[derive(Debug, Serialize)]
pub struct CorpusCell {
    pub spec: String,
    pub p: String,
    pub q: String,
    pub target: String,
    pub expected: String,
    pub got: String,
    pub matches: bool,
}

fn overall_label(o: Overall) -> &'static str {
    match o {
        Overall::InSlln => "in",
        Overall::NotInSlln => "not",
        Overall::SeriesConverges => "converges",
        Overall::SeriesDiverges => "diverges",
        Overall::Inconclusive => "inconclusive",
    }
}

/// Runs every row and reports the diff.
pub fn run_corpus(rows: &[ExpectedRow]) -> anyhow::Result<Vec<CorpusCell>> {
    let mut cells = Vec::with_capacity(rows.len());
    for r in rows {
        let spec = parse_spec(&r.spec)?;
        let p = parse_rat(&r.p)?;
        let q = parse_rat(&r.q)?;
        let target = match r.target.as_str() {
            "slln" => Target::Slln,
            "mean-series" => Target::MeanSeries,
            other => anyhow::bail!("unknown target `{other}` in expected table"),
        };
        let report = match target {
            Target::Slln => classify_slln(&spec, p, q)?,
            Target::MeanSeries => classify_mean_series(&spec, p, q)?,
        };
        let got = overall_label(report.overall).to_string();
        cells.push(CorpusCell {
            spec: r.spec.clone(),
            p: r.p.clone(),
            q: r.q.clone(),
            target: r.target.clone(),
            expected: r.expect.clone(),
            matches: got == r.expect,
            got,
        });
    }
    Ok(cells)
}
