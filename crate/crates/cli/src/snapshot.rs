//! Frozen-taxonomy snapshots keyed by a hash of the source files.

use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use bincode::Options;
use semsim_core::{load_edgelist, load_wordnet, DepthMode, FreezeOptions, Taxonomy};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

const FORMAT: u32 = 1;

pub enum Source {
    WordNet(PathBuf),
    EdgeList(PathBuf),
}

impl Source {
    fn files(&self) -> Vec<PathBuf> {
        match self {
            Source::WordNet(d) => ["data.noun", "index.noun", "noun.exc"]
                .iter()
                .map(|f| d.join(f))
                .filter(|p| p.is_file())
                .collect(),
            Source::EdgeList(p) => vec![p.clone()],
        }
    }

    fn build(&self, opts: FreezeOptions) -> Result<Taxonomy> {
        Ok(match self {
            Source::WordNet(d) => load_wordnet(d, opts).with_context(|| format!("loading WordNet from {}", d.display()))?,
            Source::EdgeList(p) => load_edgelist(p, opts).with_context(|| format!("loading {}", p.display()))?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    format: u32,
    key: String,
    taxonomy: Taxonomy,
}

fn key(source: &Source, opts: FreezeOptions) -> Result<String> {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.update([matches!(opts.depth_mode, DepthMode::Max) as u8]);
    for f in source.files() {
        h.update(f.file_name().map(|n| n.as_encoded_bytes()).unwrap_or_default());
        h.update(fs::read(&f).with_context(|| format!("reading {}", f.display()))?);
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

fn read(path: &Path, key: &str) -> Option<Taxonomy> {
    let file = fs::File::open(path).ok()?;
    // Bounded by the file size, so a corrupt length prefix cannot trigger a huge allocation.
    let limit = file.metadata().ok()?.len();
    let snap: Snapshot = bincode::DefaultOptions::new()
        .with_fixint_encoding()
        .with_limit(limit)
        .deserialize_from(BufReader::new(file))
        .ok()?;
    if snap.format != FORMAT || snap.key != key {
        return None;
    }
    let mut t = snap.taxonomy;
    t.rebuild_lookup();
    Some(t)
}

/// Loads the taxonomy, going through the snapshot at `cache` when given.
/// A missing, stale or unreadable snapshot is rebuilt.
pub fn load(source: &Source, opts: FreezeOptions, cache: Option<&Path>) -> Result<Taxonomy> {
    let Some(cache) = cache else {
        return source.build(opts);
    };
    let key = key(source, opts)?;
    if let Some(t) = read(cache, &key) {
        return Ok(t);
    }
    let taxonomy = source.build(opts)?;
    let snap = Snapshot { format: FORMAT, key, taxonomy };
    let file = fs::File::create(cache).with_context(|| format!("creating {}", cache.display()))?;
    bincode::DefaultOptions::new()
        .with_fixint_encoding()
        .serialize_into(BufWriter::new(file), &snap)
        .context("writing snapshot")?;
    Ok(snap.taxonomy)
}
