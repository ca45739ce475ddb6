//! Benchmark datasets, Pearson correlation and correlation grids.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ic::{IcConfig, IcError, IcModel, IcTable};
use crate::similarity::{Scorer, SimError, SimMeasure};
use crate::taxonomy::{normalize_word, Taxonomy};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("dataset `{0}` has no pairs")]
    EmptyDataset(String),
    #[error("row {row}: pair ({word1}, {word2}) already listed")]
    DuplicatePair { row: usize, word1: String, word2: String },
    #[error("vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("one of the vectors is constant")]
    ZeroVariance,
    #[error("every pair of `{0}` was skipped")]
    AllPairsSkipped(String),
    #[error("no (IC model, measure) combinations given")]
    EmptyGrid,
    #[error("golden file line {line}: {reason}")]
    MalformedGolden { line: usize, reason: String },
    #[error(transparent)]
    Ic(#[from] IcError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordPair {
    pub word1: String,
    pub word2: String,
    pub human: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkDataset {
    pub name: String,
    pub pairs: Vec<WordPair>,
    /// Lowest and highest human score.
    pub scale: (f64, f64),
}

pub fn load_dataset(path: &Path) -> Result<BenchmarkDataset, EvalError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| EvalError::Io { path: path.to_owned(), source })?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_dataset(&text, &name)
}

/// Rows are `word1 word2 score`, separated by tabs, commas or whitespace.
/// Blank lines and `#` comments are ignored; a first row whose score does not
/// parse is taken as a header.
pub fn parse_dataset(text: &str, name: &str) -> Result<BenchmarkDataset, EvalError> {
    let mut pairs = Vec::new();
    let mut seen = BTreeSet::new();
    let mut first = true;
    for (i, line) in text.lines().enumerate() {
        let row = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').map(str::trim).collect()
        } else if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let is_first = std::mem::replace(&mut first, false);
        if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
            return Err(EvalError::MalformedRow {
                row,
                reason: format!("expected 3 fields, found {}", fields.iter().filter(|f| !f.is_empty()).count()),
            });
        }
        let human: f64 = match fields[2].parse() {
            Ok(v) if f64::is_finite(v) => v,
            _ if is_first => continue,
            _ => {
                return Err(EvalError::MalformedRow { row, reason: format!("bad score `{}`", fields[2]) })
            }
        };
        let (w1, w2) = (normalize_word(fields[0]), normalize_word(fields[1]));
        let key = if w1 <= w2 { (w1.clone(), w2.clone()) } else { (w2.clone(), w1.clone()) };
        if !seen.insert(key) {
            return Err(EvalError::DuplicatePair { row, word1: w1, word2: w2 });
        }
        pairs.push(WordPair { word1: w1, word2: w2, human });
    }
    if pairs.is_empty() {
        return Err(EvalError::EmptyDataset(name.to_owned()));
    }
    let lo = pairs.iter().map(|p| p.human).fold(f64::INFINITY, f64::min);
    let hi = pairs.iter().map(|p| p.human).fold(f64::NEG_INFINITY, f64::max);
    Ok(BenchmarkDataset { name: name.to_owned(), pairs, scale: (lo, hi) })
}

/// Sample Pearson correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 2 {
        return Err(EvalError::TooFewPoints(n));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(EvalError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    Ok,
    SkippedUnknownWord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairResult {
    pub word1: String,
    pub word2: String,
    pub human: f64,
    pub machine: Option<f64>,
    /// Synset ids of the best sense pair.
    pub senses: Option<(String, String)>,
    pub status: PairStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub dataset: String,
    pub ic_model: IcModel,
    pub measure: SimMeasure,
    pub per_pair: Vec<PairResult>,
    pub pearson: f64,
    pub pearson_raw: f64,
    pub n_used: usize,
}

impl EvalResult {
    pub fn skipped(&self) -> usize {
        self.per_pair.len() - self.n_used
    }

    /// Aligned per-pair listing followed by the correlation line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dataset: {}  ic: {}  measure: {}", self.dataset, self.ic_model, self.measure);
        let w1 = self.per_pair.iter().map(|p| p.word1.len()).max().unwrap_or(0).max(5);
        let w2 = self.per_pair.iter().map(|p| p.word2.len()).max().unwrap_or(0).max(5);
        let _ = writeln!(out, "{:<w1$}  {:<w2$}  {:>6}  {:>7}", "word1", "word2", "human", "machine");
        for p in &self.per_pair {
            let machine = match p.machine {
                Some(v) => format!("{v:.3}"),
                None => "skipped".to_owned(),
            };
            let _ = writeln!(out, "{:<w1$}  {:<w2$}  {:>6.2}  {:>7}", p.word1, p.word2, p.human, machine);
        }
        let _ = writeln!(out, "pairs used: {} of {}", self.n_used, self.per_pair.len());
        let _ = writeln!(out, "pearson: {:.2}", self.pearson);
        out
    }
}

/// Evaluates measures on one taxonomy, computing each IC table once.
pub struct Evaluator<'a> {
    t: &'a Taxonomy,
    cfg: IcConfig,
    tables: [OnceLock<IcTable>; 7],
}

impl<'a> Evaluator<'a> {
    pub fn new(t: &'a Taxonomy, cfg: IcConfig) -> Result<Self, EvalError> {
        cfg.validate()?;
        Ok(Evaluator { t, cfg, tables: Default::default() })
    }

    pub fn taxonomy(&self) -> &'a Taxonomy {
        self.t
    }

    pub fn config(&self) -> &IcConfig {
        &self.cfg
    }

    pub fn table(&self, model: IcModel) -> Result<&IcTable, EvalError> {
        let slot = &self.tables[model as usize];
        if let Some(t) = slot.get() {
            return Ok(t);
        }
        let table = IcTable::compute(self.t, model, &self.cfg)?;
        Ok(slot.get_or_init(|| table))
    }

    pub fn scorer(&self, model: IcModel) -> Result<Scorer<'_>, EvalError> {
        Ok(Scorer::new(self.t, self.table(model)?, self.cfg.log_base))
    }

    pub fn evaluate(
        &self,
        dataset: &BenchmarkDataset,
        model: IcModel,
        measure: SimMeasure,
    ) -> Result<EvalResult, EvalError> {
        let scorer = self.scorer(model)?;
        scorer.check(measure)?;
        let score = |p: &WordPair| -> Result<PairResult, EvalError> {
            let mut r = PairResult {
                word1: p.word1.clone(),
                word2: p.word2.clone(),
                human: p.human,
                machine: None,
                senses: None,
                status: PairStatus::SkippedUnknownWord,
            };
            match scorer.word_similarity(measure, &p.word1, &p.word2) {
                Ok(w) => {
                    r.machine = Some(w.value);
                    r.senses = Some((
                        self.t.id(w.senses.0).to_string(),
                        self.t.id(w.senses.1).to_string(),
                    ));
                    r.status = PairStatus::Ok;
                    Ok(r)
                }
                Err(SimError::UnknownWord(_)) => Ok(r),
                Err(e) => Err(e.into()),
            }
        };
        let per_pair = score_all(&dataset.pairs, score)?;

        let (machine, human): (Vec<f64>, Vec<f64>) =
            per_pair.iter().filter_map(|p| p.machine.map(|m| (m, p.human))).unzip();
        if machine.is_empty() {
            return Err(EvalError::AllPairsSkipped(dataset.name.clone()));
        }
        let pearson_raw = pearson(&machine, &human)?;
        Ok(EvalResult {
            dataset: dataset.name.clone(),
            ic_model: model,
            measure,
            n_used: machine.len(),
            per_pair,
            pearson: round2(pearson_raw),
            pearson_raw,
        })
    }
}

#[cfg(feature = "parallel")]
fn score_all<F>(pairs: &[WordPair], f: F) -> Result<Vec<PairResult>, EvalError>
where
    F: Fn(&WordPair) -> Result<PairResult, EvalError> + Sync + Send,
{
    use rayon::prelude::*;
    pairs.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn score_all<F>(pairs: &[WordPair], f: F) -> Result<Vec<PairResult>, EvalError>
where
    F: Fn(&WordPair) -> Result<PairResult, EvalError>,
{
    pairs.iter().map(f).collect()
}

/// The standard table: every baseline model with Resnik, Lin and
/// Jiang-Conrath, Batet on `sanchez2011`, FaITH on `seco`, then all five
/// measures on the proposed model and the proposed measure on `meng`.
pub fn standard_grid() -> Vec<(IcModel, SimMeasure)> {
    use IcModel::*;
    use SimMeasure::*;
    let mut combos = Vec::new();
    for m in [Seco, Zhou, Sanchez2011, Commonness2012, Meng, Qingbo] {
        combos.extend([(m, Resnik), (m, Lin), (m, JiangConrath)]);
    }
    combos.push((Sanchez2011, Batet));
    combos.push((Seco, Faith));
    combos.extend([
        (IcModel::Proposed, Resnik),
        (IcModel::Proposed, Lin),
        (IcModel::Proposed, JiangConrath),
        (IcModel::Proposed, Faith),
        (IcModel::Proposed, SimMeasure::Proposed),
        (Meng, SimMeasure::Proposed),
    ]);
    combos
}

/// Every model with every measure the configuration allows.
pub fn full_grid(cfg: &IcConfig) -> Vec<(IcModel, SimMeasure)> {
    let mut combos = Vec::new();
    for m in IcModel::ALL {
        for s in SimMeasure::ALL {
            if s == SimMeasure::Proposed && m.is_unbounded() && !cfg.normalize_unbounded {
                continue;
            }
            combos.push((m, s));
        }
    }
    combos
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub ic_model: IcModel,
    pub measure: SimMeasure,
    pub pearson: f64,
    pub pearson_raw: f64,
    pub n_used: usize,
    pub skipped: usize,
}

/// A published correlation quoted for comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiteratureValue {
    pub method: String,
    pub kind: String,
    pub pairs: usize,
    pub pearson: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub schema: u32,
    pub dataset: String,
    pub n_pairs: usize,
    pub config: IcConfig,
    pub rows: Vec<GridRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_pair: Vec<EvalResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub literature: Vec<LiteratureValue>,
}

pub fn grid_report(
    ev: &Evaluator<'_>,
    dataset: &BenchmarkDataset,
    combos: &[(IcModel, SimMeasure)],
    keep_pairs: bool,
) -> Result<GridReport, EvalError> {
    if combos.is_empty() {
        return Err(EvalError::EmptyGrid);
    }
    let mut rows = Vec::with_capacity(combos.len());
    let mut per_pair = Vec::new();
    for &(m, s) in combos {
        let r = ev.evaluate(dataset, m, s)?;
        rows.push(GridRow {
            ic_model: m,
            measure: s,
            pearson: r.pearson,
            pearson_raw: r.pearson_raw,
            n_used: r.n_used,
            skipped: r.skipped(),
        });
        if keep_pairs {
            per_pair.push(r);
        }
    }
    Ok(GridReport {
        schema: REPORT_SCHEMA,
        dataset: dataset.name.clone(),
        n_pairs: dataset.pairs.len(),
        config: *ev.config(),
        rows,
        per_pair,
        literature: literature_for(&dataset.name),
    })
}

impl GridReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# dataset {} ({} pairs)", self.dataset, self.n_pairs);
        let _ = writeln!(out, "{:<16}\t{:<14}\t{:>7}\t{:>6}\t{:>7}", "ic", "measure", "pearson", "used", "skipped");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<16}\t{:<14}\t{:>7.2}\t{:>6}\t{:>7}",
                r.ic_model.name(),
                r.measure.name(),
                r.pearson,
                r.n_used,
                r.skipped
            );
        }
        if !self.literature.is_empty() {
            let _ = writeln!(out, "# literature values (reported, not computed)");
            for l in &self.literature {
                let _ = writeln!(out, "# {:<36}\t{:<16}\t{:>3}\t{:.2}", l.method, l.kind, l.pairs, l.pearson);
            }
        }
        out
    }

    pub fn row(&self, model: IcModel, measure: SimMeasure) -> Option<&GridRow> {
        self.rows.iter().find(|r| r.ic_model == model && r.measure == measure)
    }
}

const REPORTED: &str = "reported, not computed";

/// Published Miller-Charles correlations of corpus-based and non-IC methods.
pub fn literature_mc30() -> Vec<LiteratureValue> {
    let rows: [(&str, &str, usize, f64); 16] = [
        ("Resnik (corpus IC)", "corpus IC", 28, 0.72),
        ("Lin (corpus IC)", "corpus IC", 28, 0.70),
        ("Jiang-Conrath (corpus IC)", "corpus IC", 28, 0.73),
        ("Rada et al.", "edge counting", 28, 0.59),
        ("Wu and Palmer", "edge counting", 28, 0.74),
        ("Leacock and Chodorow", "edge counting", 28, 0.74),
        ("Li et al.", "edge counting", 28, 0.82),
        ("Rodriguez and Egenhofer", "feature based", 28, 0.71),
        ("Tversky", "feature based", 28, 0.73),
        ("Petrakis et al.", "feature based", 30, 0.73),
        ("Valls et al.", "feature based", 30, 0.83),
        ("Bollegala et al.", "distributional", 30, 0.83),
        ("Chen et al.", "distributional", 30, 0.69),
        ("Sahami and Heilman", "distributional", 30, 0.58),
        ("Gledson", "distributional", 30, 0.55),
        ("Bollegala (web snippets)", "page counts", 28, 0.87),
    ];
    rows.into_iter()
        .map(|(method, kind, pairs, pearson)| LiteratureValue {
            method: method.to_owned(),
            kind: kind.to_owned(),
            pairs,
            pearson,
            note: REPORTED.to_owned(),
        })
        .collect()
}

fn literature_for(dataset: &str) -> Vec<LiteratureValue> {
    if dataset.eq_ignore_ascii_case("mc30") {
        literature_mc30()
    } else {
        Vec::new()
    }
}

/// Expected correlation for one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub ic_model: IcModel,
    pub measure: SimMeasure,
    pub expected: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub entry: GoldenEntry,
    /// `None` when the report has no such row.
    pub actual: Option<f64>,
    pub pass: bool,
}

pub fn load_golden(path: &Path) -> Result<Vec<GoldenEntry>, EvalError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| EvalError::Io { path: path.to_owned(), source })?;
    parse_golden(&text)
}

/// Lines of `ic measure expected tolerance`; `#` starts a comment.
pub fn parse_golden(text: &str) -> Result<Vec<GoldenEntry>, EvalError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: String| EvalError::MalformedGolden { line: i + 1, reason };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(bad(format!("expected 4 fields, found {}", f.len())));
        }
        let ic_model = f[0].parse().map_err(|e: IcError| bad(e.to_string()))?;
        let measure = f[1].parse().map_err(|e: SimError| bad(e.to_string()))?;
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("bad number `{s}`")));
        out.push(GoldenEntry { ic_model, measure, expected: num(f[2])?, tolerance: num(f[3])? });
    }
    Ok(out)
}

/// Compares rounded correlations against the golden entries.
pub fn check_golden(report: &GridReport, golden: &[GoldenEntry]) -> Vec<GoldenCheck> {
    golden
        .iter()
        .map(|g| {
            let actual = report.row(g.ic_model, g.measure).map(|r| r.pearson);
            let pass = actual.is_some_and(|a| (a - g.expected).abs() <= g.tolerance + 1e-9);
            GoldenCheck { entry: g.clone(), actual, pass }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pearson_basics() {
        let x = [1.0, 2.0, 3.0, 5.0];
        assert_abs_diff_eq!(pearson(&x, &x).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), -1.0, epsilon = 1e-12);
        assert!(matches!(pearson(&[1.0, 2.0], &[1.0]), Err(EvalError::LengthMismatch(2, 1))));
        assert!(matches!(pearson(&[1.0], &[1.0]), Err(EvalError::TooFewPoints(1))));
        assert!(matches!(pearson(&[1.0, 1.0], &[1.0, 2.0]), Err(EvalError::ZeroVariance)));
    }

    #[test]
    fn pearson_known_value() {
        // Hand-computed: means 3 and 4, sxy = 7, sxx = 10, syy = 10.
        let r = pearson(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 5.0, 3.0, 4.0, 6.0]).unwrap();
        assert_abs_diff_eq!(r, 7.0 / (10f64.sqrt() * 10f64.sqrt()), epsilon = 1e-12);
    }

    #[test]
    fn dataset_parsing() {
        let d = parse_dataset("word1\tword2\tscore\ncar\tautomobile\t3.92\ngem\tjewel\t3.84\n", "mc").unwrap();
        assert_eq!(d.pairs.len(), 2);
        assert_eq!(d.scale, (3.84, 3.92));
        let csv = parse_dataset("# comment\ncar,automobile,3.92\n\nNew York,city,2\n", "x").unwrap();
        assert_eq!(csv.pairs[1].word1, "new_york");
        let ws = parse_dataset("car automobile 3.92", "x").unwrap();
        assert_eq!(ws.pairs[0].human, 3.92);
    }

    #[test]
    fn dataset_errors() {
        assert!(matches!(
            parse_dataset("car\tautomobile\t1\ncar;automobile\n", "x"),
            Err(EvalError::MalformedRow { row: 2, .. })
        ));
        assert!(matches!(parse_dataset("a\tb\tx\nc\td\ty\n", "x"), Err(EvalError::MalformedRow { row: 2, .. })));
        assert!(matches!(parse_dataset("# nothing\n", "x"), Err(EvalError::EmptyDataset(_))));
        assert!(matches!(parse_dataset("w1\tw2\ts\n", "x"), Err(EvalError::EmptyDataset(_))));
        assert!(matches!(
            parse_dataset("a\tb\t1\nb\ta\t2\n", "x"),
            Err(EvalError::DuplicatePair { row: 2, .. })
        ));
    }

    #[test]
    fn golden_parsing() {
        let g = parse_golden("# ic measure expected tol\nproposed lin 0.86 0.03\nsanchez2011 batet 0.86 0.04 # note\n").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[1].measure, SimMeasure::Batet);
        assert!(matches!(parse_golden("proposed lin 0.86"), Err(EvalError::MalformedGolden { line: 1, .. })));
        assert!(matches!(parse_golden("nope lin 0.86 0.1"), Err(EvalError::MalformedGolden { .. })));
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(standard_grid().len(), 26);
        assert_eq!(full_grid(&IcConfig::default()).len(), 7 * 6 - 3);
        let norm = IcConfig { normalize_unbounded: true, ..IcConfig::default() };
        assert_eq!(full_grid(&norm).len(), 42);
    }

    #[test]
    fn rounding() {
        assert_eq!(round2(0.8549), 0.85);
        assert_eq!(round2(0.855001), 0.86);
        assert_eq!(round2(-0.333), -0.33);
    }
}
