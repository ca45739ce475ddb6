//! Intrinsic information content and semantic similarity over WordNet-style
//! noun taxonomies.
//!
//! ```
//! use semsim_core::{IcConfig, IcModel, IcTable, RawGraph, Scorer, SimMeasure, Taxonomy};
//!
//! let t = Taxonomy::freeze(RawGraph::from_edges([("cat", "animal"), ("dog", "animal")])).unwrap();
//! let ic = IcTable::compute(&t, IcModel::Seco, &IcConfig::default()).unwrap();
//! let s = Scorer::new(&t, &ic, 10.0);
//! let w = s.word_similarity(SimMeasure::Lin, "cat", "dog").unwrap();
//! assert_eq!(w.value, 0.0);
//! ```

pub mod eval;
pub mod ic;
pub mod ingest;
pub mod similarity;
pub mod taxonomy;

pub use eval::{
    grid_report, load_dataset, pearson, BenchmarkDataset, EvalError, EvalResult, Evaluator, GridReport,
};
pub use ic::{IcConfig, IcError, IcModel, IcTable};
pub use ingest::{load_edgelist, load_wordnet, IngestError};
pub use similarity::{dcs, lcs_ic, DcsSet, Scorer, SimError, SimMeasure, WordScore};
pub use taxonomy::{
    DepthMode, FreezeOptions, NodeIx, NodeStats, RawGraph, RawNode, Synset, SynsetId, Taxonomy,
    TaxonomyConstants, TaxonomyError,
};
