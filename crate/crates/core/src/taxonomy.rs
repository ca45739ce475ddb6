//! Frozen hypernym DAG with cached per-node topology.
//!
//! A [`Taxonomy`] is built once from a [`RawGraph`] by [`Taxonomy::freeze`] and is
//! immutable afterwards. Nodes are re-indexed in [`SynsetId`] order, so every list
//! of [`NodeIx`] handed out by this module is also sorted by id.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Label given to the synthetic root inserted above multiple parentless nodes.
/// Edge-list labels cannot start with `#`, so it never collides with user input.
pub const SYNTHETIC_ROOT: &str = "#root";

/// Stable identifier of a concept: `00001740-n` for WordNet, the label for toy ontologies.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SynsetId(String);

impl SynsetId {
    pub fn new(id: impl Into<String>) -> Self {
        SynsetId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SynsetId {
    fn from(s: &str) -> Self {
        SynsetId(s.to_owned())
    }
}

/// Dense index of a node inside one [`Taxonomy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeIx(pub u32);

impl NodeIx {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TaxonomyError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("hypernym cycle detected: {}", fmt_cycle(.cycle))]
    CycleDetected { cycle: Vec<SynsetId> },
    #[error("unknown synset `{0}`")]
    UnknownSynset(SynsetId),
    #[error("edge references undeclared node `{0}`")]
    UndeclaredNode(SynsetId),
    #[error("pinned root `{root}` is invalid: {reason}")]
    InvalidRoot { root: SynsetId, reason: String },
}

fn fmt_cycle(cycle: &[SynsetId]) -> String {
    let mut parts: Vec<&str> = cycle.iter().map(SynsetId::as_str).collect();
    if let Some(first) = cycle.first() {
        parts.push(first.as_str());
    }
    parts.join(" -> ")
}

/// One node as supplied by an ingester, before freezing.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawNode {
    pub id: SynsetId,
    pub lemmas: Vec<String>,
    pub gloss: Option<String>,
}

/// Unfrozen node/edge collection.
///
/// Edges are `(child, parent)` hypernym links; instance links are folded in.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawGraph {
    pub nodes: Vec<RawNode>,
    pub edges: Vec<(SynsetId, SynsetId)>,
    /// Subset of `edges` that came from instance pointers.
    pub instance_edges: BTreeSet<(SynsetId, SynsetId)>,
    pub root: Option<SynsetId>,
}

impl RawGraph {
    /// Builds a graph from `(child, parent)` pairs; nodes are every label seen.
    pub fn from_edges<I, A, B>(edges: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut g = RawGraph::default();
        let mut seen = BTreeSet::new();
        for (c, p) in edges {
            let (c, p) = (SynsetId::new(c), SynsetId::new(p));
            for id in [&c, &p] {
                if seen.insert(id.clone()) {
                    g.nodes.push(RawNode { id: id.clone(), ..Default::default() });
                }
            }
            g.edges.push((c, p));
        }
        g
    }

    /// Adds a node unless one with the same id already exists.
    pub fn add_node(&mut self, id: impl Into<String>) {
        let id = SynsetId::new(id);
        if !self.nodes.iter().any(|n| n.id == id) {
            self.nodes.push(RawNode { id, ..Default::default() });
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DepthMode {
    /// Shortest hypernym path to the root.
    #[default]
    Min,
    /// Longest hypernym path to the root.
    Max,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreezeOptions {
    pub depth_mode: DepthMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Synset {
    pub id: SynsetId,
    pub lemmas: Vec<String>,
    pub gloss: Option<String>,
    /// Direct hypernyms, instance hypernyms included.
    pub parents: Vec<NodeIx>,
    /// Direct hyponyms, instance hyponyms included.
    pub children: Vec<NodeIx>,
    /// True when every hypernym link of this node is an instance link.
    pub is_instance: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeStats {
    pub depth: u32,
    /// Strict descendants.
    pub hypo_count: u32,
    /// Leaf descendants; zero for a leaf itself.
    pub leaf_count: u32,
    /// Ancestors including the node itself.
    pub subsumer_count: u32,
    /// Direct parents.
    pub nmih: u32,
    /// Sum of `1 / depth(a)` over strict descendants `a`.
    pub inv_depth_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyConstants {
    pub node_max: u32,
    pub deep_max: u32,
    pub leaves_max: u32,
    pub max_wn: u32,
}

/// Immutable hypernym DAG.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Taxonomy {
    nodes: Vec<Synset>,
    root: NodeIx,
    stats: Vec<NodeStats>,
    constants: TaxonomyConstants,
    depth_mode: DepthMode,
    /// Sorted ancestors of each node, self included.
    ancestors: Vec<Vec<NodeIx>>,
    /// Sorted strict descendants of each node.
    descendants: Vec<Vec<NodeIx>>,
    word_index: BTreeMap<String, Vec<NodeIx>>,
    #[serde(skip)]
    lookup: HashMap<SynsetId, NodeIx>,
}

impl Taxonomy {
    /// Freezes `raw` into a taxonomy; the word index is built from node lemmas
    /// (or labels when a node carries none).
    pub fn freeze(raw: RawGraph) -> Result<Taxonomy, TaxonomyError> {
        Self::freeze_with(raw, FreezeOptions::default())
    }

    pub fn freeze_with(raw: RawGraph, opts: FreezeOptions) -> Result<Taxonomy, TaxonomyError> {
        if raw.nodes.is_empty() {
            return Err(TaxonomyError::EmptyGraph);
        }

        let mut raw_nodes: BTreeMap<SynsetId, RawNode> = BTreeMap::new();
        for n in raw.nodes {
            raw_nodes.entry(n.id.clone()).or_insert(n);
        }
        let mut edges: BTreeSet<(SynsetId, SynsetId)> = BTreeSet::new();
        for (c, p) in raw.edges {
            for id in [&c, &p] {
                if !raw_nodes.contains_key(id) {
                    return Err(TaxonomyError::UndeclaredNode(id.clone()));
                }
            }
            edges.insert((c, p));
        }

        let mut parentless: Vec<SynsetId> = {
            let has_parent: BTreeSet<&SynsetId> = edges.iter().map(|(c, _)| c).collect();
            raw_nodes.keys().filter(|id| !has_parent.contains(id)).cloned().collect()
        };

        // Cycle check before root handling: a pure cycle has no parentless node.
        if let Some(cycle) = find_cycle(&raw_nodes, &edges) {
            return Err(TaxonomyError::CycleDetected { cycle });
        }

        if let Some(pin) = &raw.root {
            if !raw_nodes.contains_key(pin) {
                return Err(TaxonomyError::InvalidRoot {
                    root: pin.clone(),
                    reason: "no such node".into(),
                });
            }
            if parentless.len() != 1 || &parentless[0] != pin {
                return Err(TaxonomyError::InvalidRoot {
                    root: pin.clone(),
                    reason: format!("parentless nodes are {:?}", parentless),
                });
            }
        }

        if parentless.len() > 1 {
            let root_id = SynsetId::new(SYNTHETIC_ROOT);
            raw_nodes.insert(root_id.clone(), RawNode { id: root_id.clone(), ..Default::default() });
            for orphan in parentless.drain(..) {
                edges.insert((orphan, root_id.clone()));
            }
            parentless.push(root_id);
        }

        let lookup: HashMap<SynsetId, NodeIx> = raw_nodes
            .keys()
            .enumerate()
            .map(|(i, id)| (id.clone(), NodeIx(i as u32)))
            .collect();
        let root = lookup[&parentless[0]];

        let mut nodes: Vec<Synset> = raw_nodes
            .into_values()
            .map(|n| Synset {
                id: n.id,
                lemmas: n.lemmas,
                gloss: n.gloss,
                parents: Vec::new(),
                children: Vec::new(),
                is_instance: false,
            })
            .collect();
        let mut instance_parent_count = vec![0usize; nodes.len()];
        for (c, p) in &edges {
            let (ci, pi) = (lookup[c], lookup[p]);
            nodes[ci.index()].parents.push(pi);
            nodes[pi.index()].children.push(ci);
            if raw.instance_edges.contains(&(c.clone(), p.clone())) {
                instance_parent_count[ci.index()] += 1;
            }
        }
        for (n, inst) in nodes.iter_mut().zip(instance_parent_count) {
            n.parents.sort_unstable();
            n.children.sort_unstable();
            n.is_instance = inst > 0 && inst == n.parents.len();
        }

        let order = topo_order(&nodes);
        let ancestors = compute_ancestors(&nodes, &order);
        let descendants = invert_ancestors(&ancestors);
        let depths = compute_depths(&nodes, &order, root, opts.depth_mode);
        let stats = compute_stats(&nodes, &ancestors, &descendants, &depths);
        let constants = compute_constants(&stats);

        let mut word_index: BTreeMap<String, Vec<NodeIx>> = BTreeMap::new();
        for (i, n) in nodes.iter().enumerate() {
            let ix = NodeIx(i as u32);
            if n.id.as_str() == SYNTHETIC_ROOT {
                continue;
            }
            if n.lemmas.is_empty() {
                word_index.entry(normalize_word(n.id.as_str())).or_default().push(ix);
            }
            for l in &n.lemmas {
                let senses = word_index.entry(normalize_word(l)).or_default();
                if !senses.contains(&ix) {
                    senses.push(ix);
                }
            }
        }

        Ok(Taxonomy {
            nodes,
            root,
            stats,
            constants,
            depth_mode: opts.depth_mode,
            ancestors,
            descendants,
            word_index,
            lookup,
        })
    }

    /// Replaces the lemma-derived word index with an explicit ordered one
    /// (WordNet's `index.noun` sense order).
    pub fn with_word_index(
        mut self,
        index: impl IntoIterator<Item = (String, Vec<SynsetId>)>,
    ) -> Result<Self, TaxonomyError> {
        let mut word_index = BTreeMap::new();
        for (lemma, ids) in index {
            let senses = ids.iter().map(|id| self.node(id)).collect::<Result<Vec<_>, _>>()?;
            word_index.insert(normalize_word(&lemma), senses);
        }
        self.word_index = word_index;
        Ok(self)
    }

    /// Rebuilds the id lookup after deserialization.
    pub fn rebuild_lookup(&mut self) {
        self.lookup = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), NodeIx(i as u32)))
            .collect();
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeIx {
        self.root
    }

    pub fn constants(&self) -> TaxonomyConstants {
        self.constants
    }

    pub fn depth_mode(&self) -> DepthMode {
        self.depth_mode
    }

    pub fn node(&self, id: &SynsetId) -> Result<NodeIx, TaxonomyError> {
        self.lookup.get(id).copied().ok_or_else(|| TaxonomyError::UnknownSynset(id.clone()))
    }

    pub fn synset(&self, ix: NodeIx) -> &Synset {
        &self.nodes[ix.index()]
    }

    pub fn id(&self, ix: NodeIx) -> &SynsetId {
        &self.nodes[ix.index()].id
    }

    pub fn stats(&self, ix: NodeIx) -> &NodeStats {
        &self.stats[ix.index()]
    }

    pub fn node_indices(&self) -> impl ExactSizeIterator<Item = NodeIx> {
        (0..self.nodes.len() as u32).map(NodeIx)
    }

    pub fn synsets(&self) -> &[Synset] {
        &self.nodes
    }

    pub fn is_leaf(&self, ix: NodeIx) -> bool {
        self.nodes[ix.index()].children.is_empty()
    }

    /// Ancestors of `ix` including itself, sorted.
    pub fn ancestors_of(&self, ix: NodeIx) -> &[NodeIx] {
        &self.ancestors[ix.index()]
    }

    /// Strict descendants of `ix`, sorted.
    pub fn descendants_of(&self, ix: NodeIx) -> &[NodeIx] {
        &self.descendants[ix.index()]
    }

    /// True when `a` is a strict descendant of `b`.
    pub fn is_strict_descendant(&self, a: NodeIx, b: NodeIx) -> bool {
        a != b && self.ancestors[a.index()].binary_search(&b).is_ok()
    }

    pub fn subsumers(&self, c: &SynsetId) -> Result<Vec<SynsetId>, TaxonomyError> {
        let ix = self.node(c)?;
        Ok(self.ids(self.ancestors_of(ix)))
    }

    pub fn hyponyms(&self, c: &SynsetId) -> Result<Vec<SynsetId>, TaxonomyError> {
        let ix = self.node(c)?;
        Ok(self.ids(self.descendants_of(ix)))
    }

    /// Leaf members of [`Taxonomy::hyponyms`]; empty for a leaf.
    pub fn leaves(&self, c: &SynsetId) -> Result<Vec<SynsetId>, TaxonomyError> {
        let ix = self.node(c)?;
        Ok(self
            .descendants_of(ix)
            .iter()
            .filter(|&&d| self.is_leaf(d))
            .map(|&d| self.id(d).clone())
            .collect())
    }

    pub fn depth(&self, c: &SynsetId) -> Result<u32, TaxonomyError> {
        Ok(self.stats(self.node(c)?).depth)
    }

    /// Senses of `word` in index order; empty when absent.
    pub fn senses(&self, word: &str) -> &[NodeIx] {
        self.word_index.get(&normalize_word(word)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn word_index(&self) -> &BTreeMap<String, Vec<NodeIx>> {
        &self.word_index
    }

    fn ids(&self, ixs: &[NodeIx]) -> Vec<SynsetId> {
        ixs.iter().map(|&i| self.id(i).clone()).collect()
    }

    /// Recomputes every cached statistic from adjacency alone.
    pub fn recompute_stats(&self) -> (Vec<NodeStats>, TaxonomyConstants) {
        let order = topo_order(&self.nodes);
        let ancestors = compute_ancestors(&self.nodes, &order);
        let descendants = invert_ancestors(&ancestors);
        let depths = compute_depths(&self.nodes, &order, self.root, self.depth_mode);
        let stats = compute_stats(&self.nodes, &ancestors, &descendants, &depths);
        let constants = compute_constants(&stats);
        (stats, constants)
    }

    pub fn all_stats(&self) -> &[NodeStats] {
        &self.stats
    }

    /// Edge list (`child`, `parent`) in id order, suitable for re-serialization.
    pub fn edges(&self) -> Vec<(SynsetId, SynsetId)> {
        let mut out = Vec::new();
        for n in &self.nodes {
            for &p in &n.parents {
                out.push((n.id.clone(), self.id(p).clone()));
            }
        }
        out
    }
}

/// Lowercases and maps spaces to underscores.
pub fn normalize_word(w: &str) -> String {
    w.trim().to_lowercase().replace(' ', "_")
}

fn find_cycle(
    nodes: &BTreeMap<SynsetId, RawNode>,
    edges: &BTreeSet<(SynsetId, SynsetId)>,
) -> Option<Vec<SynsetId>> {
    let ids: Vec<&SynsetId> = nodes.keys().collect();
    let ix: HashMap<&SynsetId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); ids.len()];
    for (c, p) in edges {
        up[ix[c]].push(ix[p]);
    }

    // Iterative DFS with colors over child -> parent links.
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let mut color = vec![WHITE; ids.len()];
    for start in 0..ids.len() {
        if color[start] != WHITE {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = GRAY;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < up[v].len() {
                let w = up[v][*next];
                *next += 1;
                match color[w] {
                    WHITE => {
                        color[w] = GRAY;
                        stack.push((w, 0));
                    }
                    GRAY => {
                        let pos = stack.iter().position(|&(s, _)| s == w).unwrap();
                        return Some(stack[pos..].iter().map(|&(s, _)| ids[s].clone()).collect());
                    }
                    _ => {}
                }
            } else {
                color[v] = BLACK;
                stack.pop();
            }
        }
    }
    None
}

/// Parents-before-children order (Kahn). The graph is known to be acyclic.
fn topo_order(nodes: &[Synset]) -> Vec<NodeIx> {
    let mut indeg: Vec<usize> = nodes.iter().map(|n| n.parents.len()).collect();
    let mut queue: VecDeque<NodeIx> =
        (0..nodes.len()).filter(|&i| indeg[i] == 0).map(|i| NodeIx(i as u32)).collect();
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &c in &nodes[v.index()].children {
            indeg[c.index()] -= 1;
            if indeg[c.index()] == 0 {
                queue.push_back(c);
            }
        }
    }
    debug_assert_eq!(order.len(), nodes.len());
    order
}

fn compute_ancestors(nodes: &[Synset], order: &[NodeIx]) -> Vec<Vec<NodeIx>> {
    let mut anc: Vec<Vec<NodeIx>> = vec![Vec::new(); nodes.len()];
    let mut stamp = vec![u32::MAX; nodes.len()];
    for &v in order {
        let mut set = vec![v];
        stamp[v.index()] = v.0;
        for &p in &nodes[v.index()].parents {
            for &a in &anc[p.index()] {
                if stamp[a.index()] != v.0 {
                    stamp[a.index()] = v.0;
                    set.push(a);
                }
            }
        }
        set.sort_unstable();
        anc[v.index()] = set;
    }
    anc
}

fn invert_ancestors(ancestors: &[Vec<NodeIx>]) -> Vec<Vec<NodeIx>> {
    let mut desc: Vec<Vec<NodeIx>> = vec![Vec::new(); ancestors.len()];
    // Visiting nodes in index order keeps every descendant list sorted.
    for (i, anc) in ancestors.iter().enumerate() {
        for &a in anc {
            if a.index() != i {
                desc[a.index()].push(NodeIx(i as u32));
            }
        }
    }
    desc
}

fn compute_depths(nodes: &[Synset], order: &[NodeIx], root: NodeIx, mode: DepthMode) -> Vec<u32> {
    let mut depth = vec![0u32; nodes.len()];
    match mode {
        DepthMode::Min => {
            let mut seen = vec![false; nodes.len()];
            let mut queue = VecDeque::from([root]);
            seen[root.index()] = true;
            while let Some(v) = queue.pop_front() {
                for &c in &nodes[v.index()].children {
                    if !seen[c.index()] {
                        seen[c.index()] = true;
                        depth[c.index()] = depth[v.index()] + 1;
                        queue.push_back(c);
                    }
                }
            }
        }
        DepthMode::Max => {
            for &v in order {
                depth[v.index()] = nodes[v.index()]
                    .parents
                    .iter()
                    .map(|p| depth[p.index()] + 1)
                    .max()
                    .unwrap_or(0);
            }
        }
    }
    depth
}

fn compute_stats(
    nodes: &[Synset],
    ancestors: &[Vec<NodeIx>],
    descendants: &[Vec<NodeIx>],
    depths: &[u32],
) -> Vec<NodeStats> {
    (0..nodes.len())
        .map(|i| {
            let desc = &descendants[i];
            NodeStats {
                depth: depths[i],
                hypo_count: desc.len() as u32,
                leaf_count: desc.iter().filter(|d| nodes[d.index()].children.is_empty()).count()
                    as u32,
                subsumer_count: ancestors[i].len() as u32,
                nmih: nodes[i].parents.len() as u32,
                inv_depth_sum: desc.iter().map(|d| 1.0 / f64::from(depths[d.index()])).sum(),
            }
        })
        .collect()
}

fn compute_constants(stats: &[NodeStats]) -> TaxonomyConstants {
    let node_max = stats.len() as u32;
    TaxonomyConstants {
        node_max,
        deep_max: stats.iter().map(|s| s.depth).max().unwrap_or(0),
        leaves_max: stats.iter().filter(|s| s.hypo_count == 0).count() as u32,
        max_wn: node_max,
    }
}
