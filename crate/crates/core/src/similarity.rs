//! IC-based similarity measures over synset pairs and word pairs.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ic::{IcModel, IcTable};
use crate::taxonomy::{NodeIx, SynsetId, Taxonomy, TaxonomyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMeasure {
    Resnik,
    Lin,
    JiangConrath,
    Faith,
    Batet,
    Proposed,
}

impl SimMeasure {
    pub const ALL: [SimMeasure; 6] = [
        SimMeasure::Resnik,
        SimMeasure::Lin,
        SimMeasure::JiangConrath,
        SimMeasure::Faith,
        SimMeasure::Batet,
        SimMeasure::Proposed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SimMeasure::Resnik => "resnik",
            SimMeasure::Lin => "lin",
            SimMeasure::JiangConrath => "jiang_conrath",
            SimMeasure::Faith => "faith",
            SimMeasure::Batet => "batet",
            SimMeasure::Proposed => "proposed",
        }
    }
}

impl fmt::Display for SimMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SimMeasure {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        let found = match norm.as_str() {
            "jc" | "jcn" => Some(SimMeasure::JiangConrath),
            other => SimMeasure::ALL.into_iter().find(|m| m.name() == other),
        };
        found.ok_or_else(|| SimError::UnknownMeasure(s.to_owned()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("unknown similarity measure `{0}` (expected one of resnik, lin, jiang_conrath, faith, batet, proposed)")]
    UnknownMeasure(String),
    #[error("word `{0}` has no noun sense")]
    UnknownWord(String),
    #[error("IC table has max_ic = 0")]
    DegenerateTable,
    #[error("{0} IC is not bounded in [0, 1]; normalize it first")]
    UnboundedIc(IcModel),
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
}

/// Disjoint common subsumers of a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DcsSet {
    pub members: Vec<SynsetId>,
    pub for_pair: (SynsetId, SynsetId),
}

/// Common subsumers of `a` and `b`, sorted by index.
pub fn common_subsumers(t: &Taxonomy, a: NodeIx, b: NodeIx) -> Vec<NodeIx> {
    let (xs, ys) = (t.ancestors_of(a), t.ancestors_of(b));
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < xs.len() && j < ys.len() {
        match xs[i].cmp(&ys[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(xs[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Deepest common subsumers: suspects sorted by depth (descending), then
/// hyponym count, then id; a suspect is kept unless a kept node lies below it.
/// A final pass drops kept nodes that still have a kept node below them,
/// which happens when min-depth ties order an ancestor first.
pub fn dcs_nodes(t: &Taxonomy, a: NodeIx, b: NodeIx) -> Vec<NodeIx> {
    let mut suspects = common_subsumers(t, a, b);
    suspects.sort_by(|&x, &y| {
        let (sx, sy) = (t.stats(x), t.stats(y));
        sy.depth
            .cmp(&sx.depth)
            .then(sx.hypo_count.cmp(&sy.hypo_count))
            .then(x.cmp(&y))
    });
    let mut kept: Vec<NodeIx> = Vec::new();
    for x in suspects {
        if !kept.iter().any(|&k| t.is_strict_descendant(k, x)) {
            kept.push(x);
        }
    }
    let snapshot = kept.clone();
    kept.retain(|&x| !snapshot.iter().any(|&k| t.is_strict_descendant(k, x)));
    kept
}

pub fn dcs(t: &Taxonomy, a: &SynsetId, b: &SynsetId) -> Result<DcsSet, TaxonomyError> {
    let (ia, ib) = (t.node(a)?, t.node(b)?);
    Ok(DcsSet {
        members: dcs_nodes(t, ia, ib).into_iter().map(|x| t.id(x).clone()).collect(),
        for_pair: (a.clone(), b.clone()),
    })
}

/// Highest IC among the common subsumers; 0 when there are none.
pub fn lcs_ic(t: &Taxonomy, ic: &IcTable, a: NodeIx, b: NodeIx) -> f64 {
    common_subsumers(t, a, b).into_iter().map(|x| ic.value(x)).fold(0.0, f64::max)
}

/// Best-scoring sense pair for two words.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WordScore {
    pub value: f64,
    pub senses: (NodeIx, NodeIx),
}

/// Scores pairs against one taxonomy and IC table.
#[derive(Debug, Clone, Copy)]
pub struct Scorer<'a> {
    t: &'a Taxonomy,
    ic: &'a IcTable,
    log_base: f64,
}

impl<'a> Scorer<'a> {
    /// `log_base` is used by Batet's measure only.
    pub fn new(t: &'a Taxonomy, ic: &'a IcTable, log_base: f64) -> Self {
        Scorer { t, ic, log_base }
    }

    pub fn taxonomy(&self) -> &'a Taxonomy {
        self.t
    }

    pub fn ic_table(&self) -> &'a IcTable {
        self.ic
    }

    /// Fails when `measure` cannot be computed on this table at all.
    pub fn check(&self, measure: SimMeasure) -> Result<(), SimError> {
        match measure {
            SimMeasure::Batet if self.ic.max_ic() <= 0.0 => Err(SimError::DegenerateTable),
            SimMeasure::Proposed if !self.ic.is_normalized() && !self.ic.is_bounded() => {
                Err(SimError::UnboundedIc(self.ic.model()))
            }
            _ => Ok(()),
        }
    }

    pub fn score(&self, measure: SimMeasure, a: NodeIx, b: NodeIx) -> Result<f64, SimError> {
        self.check(measure)?;
        Ok(self.score_unchecked(measure, a, b))
    }

    fn score_unchecked(&self, measure: SimMeasure, a: NodeIx, b: NodeIx) -> f64 {
        match measure {
            SimMeasure::Resnik => self.resnik(a, b),
            SimMeasure::Lin => self.lin(a, b),
            SimMeasure::JiangConrath => self.jiang_conrath(a, b),
            SimMeasure::Faith => self.faith(a, b),
            SimMeasure::Batet => self.batet_value(a, b),
            SimMeasure::Proposed => self.proposed_value(a, b),
        }
    }

    pub fn score_ids(&self, measure: SimMeasure, a: &SynsetId, b: &SynsetId) -> Result<f64, SimError> {
        let (ia, ib) = (self.t.node(a)?, self.t.node(b)?);
        self.score(measure, ia, ib)
    }

    pub fn resnik(&self, a: NodeIx, b: NodeIx) -> f64 {
        lcs_ic(self.t, self.ic, a, b)
    }

    pub fn lin(&self, a: NodeIx, b: NodeIx) -> f64 {
        let denom = self.ic.value(a) + self.ic.value(b);
        if denom == 0.0 {
            return 0.0;
        }
        2.0 * self.resnik(a, b) / denom
    }

    pub fn jiang_conrath(&self, a: NodeIx, b: NodeIx) -> f64 {
        let dist = self.ic.value(a) + self.ic.value(b) - 2.0 * self.resnik(a, b);
        1.0 - dist / 2.0
    }

    pub fn faith(&self, a: NodeIx, b: NodeIx) -> f64 {
        let r = self.resnik(a, b);
        let denom = self.ic.value(a) + self.ic.value(b) - r;
        if denom == 0.0 {
            return 0.0;
        }
        r / denom
    }

    pub fn batet(&self, a: NodeIx, b: NodeIx) -> Result<f64, SimError> {
        self.score(SimMeasure::Batet, a, b)
    }

    fn batet_value(&self, a: NodeIx, b: NodeIx) -> f64 {
        let dist = self.ic.value(a) + self.ic.value(b) - 2.0 * self.resnik(a, b);
        -((dist + 1.0) / (2.0 * self.ic.max_ic())).log(self.log_base)
    }

    pub fn proposed(&self, a: NodeIx, b: NodeIx) -> Result<f64, SimError> {
        self.score(SimMeasure::Proposed, a, b)
    }

    fn proposed_value(&self, a: NodeIx, b: NodeIx) -> f64 {
        let members = dcs_nodes(self.t, a, b);
        if members.is_empty() {
            return 0.0;
        }
        let (ia, ib) = (self.ic.value(a) + 1.0, self.ic.value(b) + 1.0);
        let sum: f64 = members
            .iter()
            .map(|&d| {
                let x = self.ic.value(d);
                x / ia + x / ib
            })
            .sum();
        sum / members.len() as f64
    }

    /// Maximum of `measure` over all sense pairs; the first maximal pair in
    /// sense order is reported.
    pub fn word_similarity(&self, measure: SimMeasure, w1: &str, w2: &str) -> Result<WordScore, SimError> {
        self.check(measure)?;
        let s1 = self.t.senses(w1);
        if s1.is_empty() {
            return Err(SimError::UnknownWord(w1.to_owned()));
        }
        let s2 = self.t.senses(w2);
        if s2.is_empty() {
            return Err(SimError::UnknownWord(w2.to_owned()));
        }
        let mut best: Option<WordScore> = None;
        for &a in s1 {
            for &b in s2 {
                let value = self.score_unchecked(measure, a, b);
                if best.map_or(true, |w| value > w.value) {
                    best = Some(WordScore { value, senses: (a, b) });
                }
            }
        }
        Ok(best.expect("both sense lists are non-empty"))
    }
}
