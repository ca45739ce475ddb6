//! Readers that turn on-disk ontologies into a [`RawGraph`](crate::RawGraph).

mod edgelist;
pub mod wordnet;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::taxonomy::{FreezeOptions, Taxonomy, TaxonomyError};

pub use edgelist::{parse_edgelist, parse_edgelist_str, write_edgelist, EdgeList};
pub use wordnet::{parse_wordnet, RawSynsetRecord, WordIndexEntry, WordNet};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("{}:{line} (byte {byte_offset}): {reason}", .path.display())]
    MalformedLine { path: PathBuf, line: usize, byte_offset: usize, reason: String },
    #[error("{}: pointer from {from} to unknown synset {to}", .path.display())]
    DanglingPointer { path: PathBuf, from: String, to: String },
    #[error("reading {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
}

/// Parses a WordNet dictionary directory and freezes its noun hierarchy,
/// with the word index taken from `index.noun`.
pub fn load_wordnet(dir: impl AsRef<Path>, opts: FreezeOptions) -> Result<Taxonomy, IngestError> {
    let wn = parse_wordnet(dir)?;
    let index = wn.word_index();
    Ok(Taxonomy::freeze_with(wn.graph, opts)?.with_word_index(index)?)
}

pub fn load_edgelist(path: impl AsRef<Path>, opts: FreezeOptions) -> Result<Taxonomy, IngestError> {
    Ok(Taxonomy::freeze_with(parse_edgelist(path)?.graph, opts)?)
}
