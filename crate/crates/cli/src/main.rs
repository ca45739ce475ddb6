use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use semsim_core::eval::{
    check_golden, full_grid, grid_report, load_golden, standard_grid, GoldenCheck, REPORT_SCHEMA,
};
use semsim_core::similarity::dcs_nodes;
use semsim_core::{
    load_dataset, DepthMode, Evaluator, FreezeOptions, IcConfig, IcModel, NodeIx, SimMeasure, SynsetId,
    Taxonomy,
};
use serde::Serialize;

mod snapshot;

#[derive(Parser)]
#[command(name = "semsim", version, about = "Intrinsic IC and semantic similarity over WordNet nouns")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// WordNet dictionary directory (data.noun, index.noun); defaults to $SEMSIM_WORDNET_DIR
    #[arg(long, global = true, value_name = "DIR", conflicts_with = "edgelist")]
    wordnet: Option<PathBuf>,
    /// Tab-separated `child<TAB>parent` ontology instead of WordNet
    #[arg(long, global = true, value_name = "FILE")]
    edgelist: Option<PathBuf>,
    /// Weight of the hyponym term in Zhou's model
    #[arg(long, global = true, default_value_t = 0.5)]
    zhou_k: f64,
    #[arg(long, global = true, default_value_t = 10.0)]
    log_base: f64,
    /// Count a leaf as its own leaf in sanchez2011
    #[arg(long, global = true)]
    leaf_self: bool,
    /// Scale sanchez2011, commonness2012 and qingbo into [0, 1]
    #[arg(long, global = true)]
    normalize_unbounded: bool,
    #[arg(long, global = true, value_enum, default_value_t = Depth::Min)]
    depth_mode: Depth,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Reuse a frozen taxonomy snapshot, rebuilt when the sources change
    #[arg(long, global = true, value_name = "FILE")]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Depth {
    Min,
    Max,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Size and depth statistics of the ontology
    Stats,
    /// Information content of a word's senses, one synset, or every node
    Ic {
        #[arg(long, value_parser = parse_model)]
        model: IcModel,
        #[arg(long, conflicts_with_all = ["synset", "all"], required_unless_present_any = ["synset", "all"])]
        word: Option<String>,
        #[arg(long, conflicts_with = "all")]
        synset: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Similarity of two words (maximum over their senses)
    Sim {
        #[arg(long, value_parser = parse_model, default_value = "proposed")]
        ic: IcModel,
        #[arg(long, value_parser = parse_measure, default_value = "proposed")]
        measure: SimMeasure,
        /// Also print the best sense pair
        #[arg(long)]
        show_senses: bool,
        word1: String,
        word2: String,
    },
    /// Disjoint common subsumers for every sense pair of two words or synsets
    Dcs { first: String, second: String },
    /// Correlate one (IC model, measure) combination with a benchmark
    Eval {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, value_parser = parse_model, default_value = "proposed")]
        ic: IcModel,
        #[arg(long, value_parser = parse_measure, default_value = "proposed")]
        measure: SimMeasure,
        /// Write the full result as JSON
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
        /// Fail unless the correlation matches this golden table
        #[arg(long, value_name = "FILE")]
        golden: Option<PathBuf>,
    },
    /// Correlation table over many (IC model, measure) combinations
    Grid {
        #[arg(long)]
        dataset: PathBuf,
        /// Every model with every applicable measure
        #[arg(long)]
        full: bool,
        /// Include per-pair scores in the JSON report
        #[arg(long)]
        pairs: bool,
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        golden: Option<PathBuf>,
    },
}

fn parse_model(s: &str) -> Result<IcModel, String> {
    s.parse().map_err(|e: semsim_core::IcError| e.to_string())
}

fn parse_measure(s: &str) -> Result<SimMeasure, String> {
    s.parse().map_err(|e: semsim_core::SimError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

impl Global {
    fn ic_config(&self) -> Result<IcConfig> {
        let cfg = IcConfig {
            zhou_k: self.zhou_k,
            log_base: self.log_base,
            leaf_self: self.leaf_self,
            normalize_unbounded: self.normalize_unbounded,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn freeze_options(&self) -> FreezeOptions {
        let depth_mode = match self.depth_mode {
            Depth::Min => DepthMode::Min,
            Depth::Max => DepthMode::Max,
        };
        FreezeOptions { depth_mode }
    }

    fn source(&self) -> Result<snapshot::Source> {
        if let Some(p) = &self.edgelist {
            return Ok(snapshot::Source::EdgeList(p.clone()));
        }
        let dir = self.wordnet.clone().or_else(semsim_core::ingest::wordnet::default_dir);
        match dir {
            Some(d) => Ok(snapshot::Source::WordNet(d)),
            None => bail!("no ontology given: pass --wordnet DIR, --edgelist FILE or set SEMSIM_WORDNET_DIR"),
        }
    }

    fn taxonomy(&self) -> Result<Taxonomy> {
        snapshot::load(&self.source()?, self.freeze_options(), self.cache.as_deref())
    }
}

/// Runs one subcommand; `Ok(false)` means a golden comparison failed.
fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    let cfg = g.ic_config()?;
    let json = g.format == Format::Json;
    let out = &mut io::stdout().lock();
    match cli.command {
        Command::Stats => {
            let t = g.taxonomy()?;
            stats(out, &t, json)?;
        }
        Command::Ic { model, word, synset, all } => {
            let t = g.taxonomy()?;
            let ev = Evaluator::new(&t, cfg)?;
            let table = ev.table(model)?;
            let nodes: Vec<NodeIx> = if all {
                t.node_indices().collect()
            } else if let Some(s) = synset {
                vec![t.node(&SynsetId::new(s))?]
            } else {
                let w = word.expect("clap requires a selector");
                let senses = t.senses(&w);
                if senses.is_empty() {
                    bail!("word `{w}` has no noun sense");
                }
                senses.to_vec()
            };
            let rows: Vec<IcRow> = nodes
                .into_iter()
                .map(|c| IcRow { synset: t.id(c).to_string(), lemmas: lemmas(&t, c), ic: table.value(c) })
                .collect();
            if json {
                write_json(out, &IcOut { schema: REPORT_SCHEMA, model, rows: &rows })?;
            } else {
                for r in &rows {
                    writeln!(out, "{}\t{}\t{:.3}", r.synset, r.lemmas, r.ic)?;
                }
            }
        }
        Command::Sim { ic, measure, show_senses, word1, word2 } => {
            let t = g.taxonomy()?;
            let ev = Evaluator::new(&t, cfg)?;
            let w = ev.scorer(ic)?.word_similarity(measure, &word1, &word2)?;
            let (a, b) = (t.id(w.senses.0).to_string(), t.id(w.senses.1).to_string());
            if json {
                let senses = show_senses.then_some((a, b));
                write_json(out, &SimOut { schema: REPORT_SCHEMA, ic, measure, word1, word2, value: w.value, senses })?;
            } else {
                writeln!(out, "{:.3}", w.value)?;
                if show_senses {
                    writeln!(out, "senses: {a} ({}) {b} ({})", lemmas(&t, w.senses.0), lemmas(&t, w.senses.1))?;
                }
            }
        }
        Command::Dcs { first, second } => {
            let t = g.taxonomy()?;
            let (xs, ys) = (resolve(&t, &first)?, resolve(&t, &second)?);
            let mut rows = Vec::new();
            for &a in &xs {
                for &b in &ys {
                    let members = dcs_nodes(&t, a, b).into_iter().map(|m| t.id(m).to_string()).collect();
                    rows.push(DcsRow { a: t.id(a).to_string(), b: t.id(b).to_string(), members });
                }
            }
            if json {
                write_json(out, &DcsOut { schema: REPORT_SCHEMA, rows: &rows })?;
            } else {
                for r in &rows {
                    writeln!(out, "{}\t{}\t{}", r.a, r.b, r.members.join(" "))?;
                }
            }
        }
        Command::Eval { dataset, ic, measure, json: json_out, golden } => {
            let t = g.taxonomy()?;
            let data = load_dataset(&dataset)?;
            let ev = Evaluator::new(&t, cfg)?;
            let result = ev.evaluate(&data, ic, measure)?;
            let doc = EvalOut { schema: REPORT_SCHEMA, result: &result };
            if let Some(p) = json_out {
                write_file(&p, &serde_json::to_string_pretty(&doc)?)?;
            }
            if json {
                write_json(out, &doc)?;
            } else {
                write!(out, "{}", result.to_text())?;
            }
            if let Some(p) = golden {
                let report = grid_report(&ev, &data, &[(ic, measure)], false)?;
                let entries: Vec<_> = load_golden(&p)?
                    .into_iter()
                    .filter(|e| e.ic_model == ic && e.measure == measure)
                    .collect();
                if entries.is_empty() {
                    bail!("{} has no entry for {ic} + {measure}", p.display());
                }
                return Ok(print_checks(&check_golden(&report, &entries)));
            }
        }
        Command::Grid { dataset, full, pairs, json: json_out, golden } => {
            let t = g.taxonomy()?;
            let data = load_dataset(&dataset)?;
            let ev = Evaluator::new(&t, cfg)?;
            let combos = if full { full_grid(&cfg) } else { standard_grid() };
            let report = grid_report(&ev, &data, &combos, pairs)?;
            if let Some(p) = json_out {
                write_file(&p, &report.to_json())?;
            }
            if json {
                writeln!(out, "{}", report.to_json())?;
            } else {
                write!(out, "{}", report.to_tsv())?;
            }
            if let Some(p) = golden {
                return Ok(print_checks(&check_golden(&report, &load_golden(&p)?)));
            }
        }
    }
    Ok(true)
}

fn stats(out: &mut impl Write, t: &Taxonomy, json: bool) -> Result<()> {
    let k = t.constants();
    let edges: usize = t.synsets().iter().map(|s| s.parents.len()).sum();
    let multi = t.synsets().iter().filter(|s| s.parents.len() > 1).count();
    let doc = StatsOut {
        schema: REPORT_SCHEMA,
        root: t.id(t.root()).to_string(),
        nodes: k.node_max,
        edges,
        leaves: k.leaves_max,
        deep_max: k.deep_max,
        max_wn: k.max_wn,
        multiple_parents: multi,
        words: t.word_index().len(),
    };
    if json {
        return write_json(out, &doc);
    }
    writeln!(out, "root\t{}", doc.root)?;
    writeln!(out, "nodes\t{}", doc.nodes)?;
    writeln!(out, "edges\t{}", doc.edges)?;
    writeln!(out, "leaves\t{}", doc.leaves)?;
    writeln!(out, "deep_max\t{}", doc.deep_max)?;
    writeln!(out, "max_wn\t{}", doc.max_wn)?;
    writeln!(out, "multiple_parents\t{}", doc.multiple_parents)?;
    writeln!(out, "words\t{}", doc.words)?;
    Ok(())
}

/// A synset id, or every noun sense of a word.
fn resolve(t: &Taxonomy, s: &str) -> Result<Vec<NodeIx>> {
    if let Ok(c) = t.node(&SynsetId::from(s)) {
        return Ok(vec![c]);
    }
    let senses = t.senses(s);
    if senses.is_empty() {
        bail!("`{s}` is neither a synset id nor a known word");
    }
    Ok(senses.to_vec())
}

fn lemmas(t: &Taxonomy, c: NodeIx) -> String {
    let l = &t.synset(c).lemmas;
    if l.is_empty() {
        t.id(c).to_string()
    } else {
        l.join(",")
    }
}

fn print_checks(checks: &[GoldenCheck]) -> bool {
    let mut ok = true;
    for c in checks {
        ok &= c.pass;
        let actual = c.actual.map_or("missing".to_owned(), |a| format!("{a:.2}"));
        eprintln!(
            "{} {} + {}: {} (expected {:.2} ±{:.2})",
            if c.pass { "PASS" } else { "FAIL" },
            c.entry.ic_model,
            c.entry.measure,
            actual,
            c.entry.expected,
            c.entry.tolerance
        );
    }
    ok
}

fn write_json<T: Serialize>(out: &mut impl Write, v: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct IcRow {
    synset: String,
    lemmas: String,
    ic: f64,
}

#[derive(Serialize)]
struct IcOut<'a> {
    schema: u32,
    model: IcModel,
    rows: &'a [IcRow],
}

#[derive(Serialize)]
struct EvalOut<'a> {
    schema: u32,
    #[serde(flatten)]
    result: &'a semsim_core::EvalResult,
}

#[derive(Serialize)]
struct SimOut {
    schema: u32,
    ic: IcModel,
    measure: SimMeasure,
    word1: String,
    word2: String,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    senses: Option<(String, String)>,
}

#[derive(Serialize)]
struct DcsRow {
    a: String,
    b: String,
    members: Vec<String>,
}

#[derive(Serialize)]
struct DcsOut<'a> {
    schema: u32,
    rows: &'a [DcsRow],
}

#[derive(Serialize)]
struct StatsOut {
    schema: u32,
    root: String,
    nodes: u32,
    edges: usize,
    leaves: u32,
    deep_max: u32,
    max_wn: u32,
    multiple_parents: usize,
    words: usize,
}
