//! Intrinsic information content models.
//!
//! Every model maps a node of a frozen [`Taxonomy`] to a real using only the
//! cached topology. All of them assign 0 to the root. `seco`, `zhou`, `meng` and
//! `proposed` stay inside `[0, 1]`; `sanchez2011`, `commonness2012` and `qingbo`
//! are unbounded unless normalized by their table maximum.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::taxonomy::{NodeIx, SynsetId, Taxonomy, TaxonomyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IcModel {
    Seco,
    Zhou,
    Sanchez2011,
    Commonness2012,
    Meng,
    Qingbo,
    Proposed,
}

impl IcModel {
    pub const ALL: [IcModel; 7] = [
        IcModel::Seco,
        IcModel::Zhou,
        IcModel::Sanchez2011,
        IcModel::Commonness2012,
        IcModel::Meng,
        IcModel::Qingbo,
        IcModel::Proposed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IcModel::Seco => "seco",
            IcModel::Zhou => "zhou",
            IcModel::Sanchez2011 => "sanchez2011",
            IcModel::Commonness2012 => "commonness2012",
            IcModel::Meng => "meng",
            IcModel::Qingbo => "qingbo",
            IcModel::Proposed => "proposed",
        }
    }

    /// Models whose values can leave `[0, 1]`.
    pub fn is_unbounded(self) -> bool {
        matches!(self, IcModel::Sanchez2011 | IcModel::Commonness2012 | IcModel::Qingbo)
    }
}

impl fmt::Display for IcModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IcModel {
    type Err = IcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IcModel::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| IcError::UnknownModel(s.to_owned()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IcError {
    #[error("unknown IC model `{0}` (expected one of seco, zhou, sanchez2011, commonness2012, meng, qingbo, proposed)")]
    UnknownModel(String),
    #[error("invalid IC configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcConfig {
    /// Weight of the hyponym term in Zhou's model.
    pub zhou_k: f64,
    /// Base for the logarithms that do not appear as ratios.
    pub log_base: f64,
    /// Count a leaf as its own single leaf in `sanchez2011`.
    pub leaf_self: bool,
    /// Divide unbounded models by their maximum.
    pub normalize_unbounded: bool,
}

impl Default for IcConfig {
    fn default() -> Self {
        IcConfig { zhou_k: 0.5, log_base: 10.0, leaf_self: false, normalize_unbounded: false }
    }
}

impl IcConfig {
    pub fn validate(&self) -> Result<(), IcError> {
        if !(0.0..=1.0).contains(&self.zhou_k) {
            return Err(IcError::InvalidConfig(format!("zhou_k {} not in [0, 1]", self.zhou_k)));
        }
        if !(self.log_base > 1.0 && self.log_base.is_finite()) {
            return Err(IcError::InvalidConfig(format!("log base {} must exceed 1", self.log_base)));
        }
        Ok(())
    }
}

/// `log(num) / log(den)` for `1 <= num <= den`, with `log(1) = 0` on top.
fn log_ratio(num: f64, den: f64) -> f64 {
    if num <= 1.0 {
        0.0
    } else {
        num.ln() / den.ln()
    }
}

fn depth_ratio(depth: u32, deep_max: u32) -> f64 {
    log_ratio(f64::from(depth), f64::from(deep_max))
}

/// Leaves below `c` plus `c` itself when it is a leaf.
fn commonness(t: &Taxonomy, c: NodeIx) -> f64 {
    let inv_subsumers = |n: NodeIx| 1.0 / f64::from(t.stats(n).subsumer_count);
    if t.is_leaf(c) {
        inv_subsumers(c)
    } else {
        t.descendants_of(c).iter().filter(|&&d| t.is_leaf(d)).map(|&d| inv_subsumers(d)).sum()
    }
}

/// Per-taxonomy precomputation shared by all nodes of one model.
struct Evaluator<'a> {
    t: &'a Taxonomy,
    model: IcModel,
    cfg: IcConfig,
    root_commonness: f64,
}

impl<'a> Evaluator<'a> {
    fn new(t: &'a Taxonomy, model: IcModel, cfg: IcConfig) -> Self {
        let root_commonness = match model {
            IcModel::Commonness2012 => commonness(t, t.root()),
            _ => 0.0,
        };
        Evaluator { t, model, cfg, root_commonness }
    }

    fn value(&self, c: NodeIx) -> f64 {
        let t = self.t;
        if c == t.root() {
            return 0.0;
        }
        let s = t.stats(c);
        let k = t.constants();
        let hypo = f64::from(s.hypo_count);
        let subsumers = f64::from(s.subsumer_count);
        let leaves_max = f64::from(k.leaves_max);
        let node_max = f64::from(k.node_max);
        // Depth plus one, so the root's logarithm vanishes.
        let f_depth1 = depth_ratio(s.depth + 1, k.deep_max + 1);
        let hyponym_depths = 1.0 - log_ratio(s.inv_depth_sum + 1.0, node_max);
        let base = self.cfg.log_base;

        match self.model {
            IcModel::Seco => 1.0 - log_ratio(hypo + 1.0, f64::from(k.max_wn)),
            IcModel::Zhou => {
                let kz = self.cfg.zhou_k;
                kz * (1.0 - log_ratio(hypo + 1.0, node_max)) + (1.0 - kz) * f_depth1
            }
            IcModel::Sanchez2011 => {
                let leaves = if self.cfg.leaf_self && s.hypo_count == 0 {
                    1.0
                } else {
                    f64::from(s.leaf_count)
                };
                -((leaves / subsumers + 1.0) / (leaves_max + 1.0)).log(base)
            }
            IcModel::Commonness2012 => -(commonness(t, c) / self.root_commonness).log(base),
            IcModel::Meng => depth_ratio(s.depth, k.deep_max) * hyponym_depths,
            IcModel::Qingbo => {
                let f_leaves = log_ratio(f64::from(s.leaf_count) + 1.0, leaves_max + 1.0);
                let f_hypernyms = log_ratio(subsumers, node_max);
                f_depth1 * (1.0 - f_leaves) + f_hypernyms
            }
            IcModel::Proposed => {
                let x = (f64::from(s.leaf_count) * f64::from(s.nmih) / leaves_max) / subsumers;
                f_depth1 * (1.0 - (x + 1.0).log(base)) * hyponym_depths
            }
        }
    }
}

/// IC of one synset under `model`.
pub fn ic(t: &Taxonomy, c: &SynsetId, model: IcModel, cfg: &IcConfig) -> Result<f64, IcError> {
    cfg.validate()?;
    let ix = t.node(c)?;
    Ok(Evaluator::new(t, model, *cfg).value(ix))
}

pub fn ic_seco(t: &Taxonomy, c: &SynsetId) -> Result<f64, IcError> {
    ic(t, c, IcModel::Seco, &IcConfig::default())
}

pub fn ic_zhou(t: &Taxonomy, c: &SynsetId, k: f64) -> Result<f64, IcError> {
    ic(t, c, IcModel::Zhou, &IcConfig { zhou_k: k, ..IcConfig::default() })
}

pub fn ic_sanchez2011(t: &Taxonomy, c: &SynsetId, cfg: &IcConfig) -> Result<f64, IcError> {
    ic(t, c, IcModel::Sanchez2011, cfg)
}

pub fn ic_commonness2012(t: &Taxonomy, c: &SynsetId, cfg: &IcConfig) -> Result<f64, IcError> {
    ic(t, c, IcModel::Commonness2012, cfg)
}

pub fn ic_meng(t: &Taxonomy, c: &SynsetId) -> Result<f64, IcError> {
    ic(t, c, IcModel::Meng, &IcConfig::default())
}

pub fn ic_qingbo(t: &Taxonomy, c: &SynsetId) -> Result<f64, IcError> {
    ic(t, c, IcModel::Qingbo, &IcConfig::default())
}

pub fn ic_proposed(t: &Taxonomy, c: &SynsetId, cfg: &IcConfig) -> Result<f64, IcError> {
    ic(t, c, IcModel::Proposed, cfg)
}

/// IC of every node of a taxonomy under one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcTable {
    model: IcModel,
    values: Vec<f64>,
    max_ic: f64,
    normalized: bool,
}

impl IcTable {
    pub fn compute(t: &Taxonomy, model: IcModel, cfg: &IcConfig) -> Result<IcTable, IcError> {
        cfg.validate()?;
        let ev = Evaluator::new(t, model, *cfg);
        let mut values = map_nodes(t, |ix| ev.value(ix));
        let mut max_ic = values.iter().copied().fold(0.0, f64::max);
        let mut normalized = false;
        if cfg.normalize_unbounded && model.is_unbounded() && max_ic > 0.0 {
            values.iter_mut().for_each(|v| *v /= max_ic);
            max_ic = 1.0;
            normalized = true;
        }
        Ok(IcTable { model, values, max_ic, normalized })
    }

    pub fn model(&self) -> IcModel {
        self.model
    }

    pub fn max_ic(&self) -> f64 {
        self.max_ic
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// True when every value lies in `[0, 1]`.
    pub fn is_bounded(&self) -> bool {
        self.values.iter().all(|v| (0.0..=1.0).contains(v))
    }

    #[inline]
    pub fn value(&self, ix: NodeIx) -> f64 {
        self.values[ix.index()]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, t: &Taxonomy, c: &SynsetId) -> Result<f64, TaxonomyError> {
        Ok(self.value(t.node(c)?))
    }
}

#[cfg(feature = "parallel")]
fn map_nodes<F: Fn(NodeIx) -> f64 + Sync>(t: &Taxonomy, f: F) -> Vec<f64> {
    use rayon::prelude::*;
    (0..t.len() as u32).into_par_iter().map(|i| f(NodeIx(i))).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_nodes<F: Fn(NodeIx) -> f64>(t: &Taxonomy, f: F) -> Vec<f64> {
    t.node_indices().map(f).collect()
}
