//! Browser bindings: IC tables and pairwise similarity for small ontologies
//! typed or pasted as `child<TAB>parent` edge lists.

use semsim_core::ingest::parse_edgelist_str;
use semsim_core::similarity::{common_subsumers, dcs_nodes};
use semsim_core::{IcConfig, IcModel, IcTable, Scorer, SimMeasure, SynsetId, Taxonomy};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const PRESETS: [(&str, &str); 3] = [
    ("multiple inheritance", include_str!("../../../fixtures/multi_parent.tsv")),
    ("equal commonness", include_str!("../../../fixtures/equal_commonness.tsv")),
    ("three disjoint subsumers", include_str!("../../../fixtures/disjoint_subsumers.tsv")),
];

#[derive(Serialize)]
struct Preset {
    name: &'static str,
    text: &'static str,
}

#[derive(Serialize)]
struct NodeOut {
    id: String,
    depth: u32,
    parents: Vec<String>,
    leaf: bool,
    ic: f64,
}

#[derive(Serialize)]
struct TableOut {
    model: IcModel,
    root: String,
    max_ic: f64,
    nodes: Vec<NodeOut>,
}

#[derive(Serialize)]
struct PairOut {
    measure: SimMeasure,
    value: f64,
    common: Vec<String>,
    dcs: Vec<String>,
    lcs_ic: f64,
}

fn taxonomy(edgelist: &str) -> Result<Taxonomy, String> {
    let g = parse_edgelist_str(edgelist, "input".as_ref()).map_err(|e| e.to_string())?.graph;
    Taxonomy::freeze(g).map_err(|e| e.to_string())
}

fn config(normalize: bool) -> IcConfig {
    IcConfig { normalize_unbounded: normalize, ..IcConfig::default() }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

/// JSON array of the bundled example ontologies.
pub fn presets_json() -> String {
    to_json(&PRESETS.map(|(name, text)| Preset { name, text }))
}

pub fn ic_table_json(edgelist: &str, model: &str, normalize: bool) -> Result<String, String> {
    let t = taxonomy(edgelist)?;
    let model: IcModel = model.parse().map_err(|e: semsim_core::IcError| e.to_string())?;
    let table = IcTable::compute(&t, model, &config(normalize)).map_err(|e| e.to_string())?;
    let nodes = t
        .node_indices()
        .map(|c| NodeOut {
            id: t.id(c).to_string(),
            depth: t.stats(c).depth,
            parents: t.synset(c).parents.iter().map(|&p| t.id(p).to_string()).collect(),
            leaf: t.is_leaf(c),
            ic: table.value(c),
        })
        .collect();
    Ok(to_json(&TableOut { model, root: t.id(t.root()).to_string(), max_ic: table.max_ic(), nodes }))
}

pub fn compare_json(
    edgelist: &str,
    model: &str,
    measure: &str,
    a: &str,
    b: &str,
    normalize: bool,
) -> Result<String, String> {
    let t = taxonomy(edgelist)?;
    let model: IcModel = model.parse().map_err(|e: semsim_core::IcError| e.to_string())?;
    let measure: SimMeasure = measure.parse().map_err(|e: semsim_core::SimError| e.to_string())?;
    let table = IcTable::compute(&t, model, &config(normalize)).map_err(|e| e.to_string())?;
    let s = Scorer::new(&t, &table, 10.0);
    let ia = t.node(&SynsetId::from(a)).map_err(|e| e.to_string())?;
    let ib = t.node(&SynsetId::from(b)).map_err(|e| e.to_string())?;
    let ids = |v: Vec<_>| v.into_iter().map(|c| t.id(c).to_string()).collect();
    Ok(to_json(&PairOut {
        measure,
        value: s.score(measure, ia, ib).map_err(|e| e.to_string())?,
        common: ids(common_subsumers(&t, ia, ib)),
        dcs: ids(dcs_nodes(&t, ia, ib)),
        lcs_ic: s.resnik(ia, ib),
    }))
}

#[wasm_bindgen]
pub fn presets() -> String {
    presets_json()
}

#[wasm_bindgen(js_name = icTable)]
pub fn ic_table(edgelist: &str, model: &str, normalize: bool) -> Result<String, JsError> {
    ic_table_json(edgelist, model, normalize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compare(edgelist: &str, model: &str, measure: &str, a: &str, b: &str, normalize: bool) -> Result<String, JsError> {
    compare_json(edgelist, model, measure, a, b, normalize).map_err(|e| JsError::new(&e))
}
