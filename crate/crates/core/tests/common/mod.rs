#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::Rng;
use semsim_core::{load_edgelist, load_wordnet, FreezeOptions, RawGraph, Taxonomy};

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn wordnet_dir() -> PathBuf {
    std::env::var_os("SEMSIM_WORDNET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| workspace_root().join("data/wordnet"))
}

pub fn wordnet() -> Taxonomy {
    let dir = wordnet_dir();
    load_wordnet(&dir, FreezeOptions::default()).unwrap_or_else(|e| {
        panic!(
            "WordNet 3.0 not readable at {} ({e}); run scripts/fetch-wordnet.sh or set SEMSIM_WORDNET_DIR",
            dir.display()
        )
    })
}

pub fn fixture(name: &str) -> Taxonomy {
    load_edgelist(workspace_root().join("fixtures").join(name), FreezeOptions::default()).unwrap()
}

/// Random DAG over `n0..n{len-1}`; node `i` picks up to `max_parents`
/// parents among lower-numbered nodes. Every fifth node after the first may
/// stay parentless, so some graphs need a synthetic root.
pub struct RandomDag {
    pub labels: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl RandomDag {
    pub fn generate<R: Rng>(rng: &mut R, max_nodes: usize, max_parents: usize) -> RandomDag {
        let n = rng.gen_range(1..=max_nodes);
        let labels = (0..n).map(|i| format!("n{i}")).collect();
        let mut edges = Vec::new();
        for i in 1..n {
            let k = if rng.gen_ratio(1, 5) { rng.gen_range(0..=max_parents) } else { rng.gen_range(1..=max_parents) };
            let mut ps = BTreeSet::new();
            for _ in 0..k {
                ps.insert(rng.gen_range(0..i));
            }
            edges.extend(ps.into_iter().map(|p| (i, p)));
        }
        RandomDag { labels, edges }
    }

    pub fn raw(&self) -> RawGraph {
        let mut g = RawGraph::default();
        for l in &self.labels {
            g.add_node(l.as_str());
        }
        for &(c, p) in &self.edges {
            g.edges.push((self.labels[c].as_str().into(), self.labels[p].as_str().into()));
        }
        g
    }

    /// Same graph with nodes declared and edges listed in a shuffled order.
    pub fn shuffled_raw<R: Rng>(&self, rng: &mut R) -> RawGraph {
        use rand::seq::SliceRandom;
        let mut labels = self.labels.clone();
        labels.shuffle(rng);
        let mut edges = self.edges.clone();
        edges.shuffle(rng);
        let mut g = RawGraph::default();
        for l in &labels {
            g.add_node(l.as_str());
        }
        for (c, p) in edges {
            g.edges.push((self.labels[c].as_str().into(), self.labels[p].as_str().into()));
        }
        g
    }

    fn parents(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(c, p) in &self.edges {
            m.entry(c).or_default().push(p);
        }
        m
    }

    /// Ancestors of `x` including itself, by plain graph search.
    pub fn ancestors(&self, x: usize) -> BTreeSet<usize> {
        let parents = self.parents();
        let mut seen = BTreeSet::from([x]);
        let mut stack = vec![x];
        while let Some(c) = stack.pop() {
            for &p in parents.get(&c).into_iter().flatten() {
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Ancestor sets of every node, indexed like `labels`.
    pub fn all_ancestors(&self) -> Vec<BTreeSet<usize>> {
        (0..self.labels.len()).map(|x| self.ancestors(x)).collect()
    }

    /// Minimal common ancestors of `a` and `b`, by brute force over
    /// precomputed ancestor sets.
    pub fn minimal_common_ancestors(&self, anc: &[BTreeSet<usize>], a: usize, b: usize) -> BTreeSet<String> {
        let cs: BTreeSet<usize> = anc[a].intersection(&anc[b]).copied().collect();
        cs.iter()
            .filter(|&&x| !cs.iter().any(|&y| y != x && anc[y].contains(&x)))
            .map(|&x| self.labels[x].clone())
            .collect()
    }
}
