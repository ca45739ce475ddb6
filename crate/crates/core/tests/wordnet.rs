mod common;

use approx::assert_abs_diff_eq;
use semsim_core::{Evaluator, IcConfig, IcModel, SimMeasure};

#[test]
fn wordnet_noun_constants() {
    let t = common::wordnet();
    let k = t.constants();
    assert_eq!(k.node_max, 82115);
    assert_eq!(k.leaves_max, 64958);
    assert_eq!(k.deep_max, 18);
    assert_eq!(t.id(t.root()).as_str(), "00001740-n");
}

#[test]
fn table_two_spot_values() {
    let t = common::wordnet();
    let ev = Evaluator::new(&t, IcConfig::default()).unwrap();
    let s = ev.scorer(IcModel::Proposed).unwrap();
    let sim = |m, a, b| s.word_similarity(m, a, b).unwrap().value;
    assert_abs_diff_eq!(sim(SimMeasure::Resnik, "car", "automobile"), 0.704, epsilon = 0.002);
    assert_abs_diff_eq!(sim(SimMeasure::Proposed, "car", "automobile"), 0.826, epsilon = 0.002);
    assert_abs_diff_eq!(sim(SimMeasure::Lin, "magician", "wizard"), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(sim(SimMeasure::Proposed, "boy", "lad"), 0.673, epsilon = 0.002);
    assert_eq!(sim(SimMeasure::Resnik, "rooster", "voyage"), 0.0);
}
