mod common;

use std::collections::BTreeSet;

use common::RandomDag;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semsim_core::ingest::{parse_edgelist_str, write_edgelist};
use semsim_core::similarity::{common_subsumers, dcs_nodes, lcs_ic};
use semsim_core::{
    pearson, DepthMode, FreezeOptions, IcConfig, IcModel, IcTable, NodeIx, Scorer, SimMeasure, SynsetId, Taxonomy,
};

fn dag(seed: u64) -> RandomDag {
    RandomDag::generate(&mut ChaCha8Rng::seed_from_u64(seed), 40, 3)
}

fn ix(t: &Taxonomy, label: &str) -> NodeIx {
    t.node(&SynsetId::from(label)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closures_match_graph_search(seed in any::<u64>()) {
        let d = dag(seed);
        let t = Taxonomy::freeze(d.raw()).unwrap();
        let anc = d.all_ancestors();
        for (i, label) in d.labels.iter().enumerate() {
            let c = ix(&t, label);
            let got: BTreeSet<&str> = t.ancestors_of(c).iter().map(|&a| t.id(a).as_str()).collect();
            let mut want: BTreeSet<&str> = anc[i].iter().map(|&a| d.labels[a].as_str()).collect();
            if t.id(t.root()).as_str() == "#root" {
                want.insert("#root");
            }
            prop_assert_eq!(got, want);
            let s = t.stats(c);
            prop_assert_eq!(s.subsumer_count as usize, t.ancestors_of(c).len());
            prop_assert_eq!(s.hypo_count as usize, t.descendants_of(c).len());
            let leaves = t.descendants_of(c).iter().filter(|&&x| t.is_leaf(x)).count();
            prop_assert_eq!(s.leaf_count as usize, leaves);
        }
    }

    #[test]
    fn input_order_does_not_matter(seed in any::<u64>()) {
        let d = dag(seed);
        let a = Taxonomy::freeze(d.raw()).unwrap();
        let b = Taxonomy::freeze(d.shuffled_raw(&mut ChaCha8Rng::seed_from_u64(!seed))).unwrap();
        prop_assert_eq!(a.all_stats(), b.all_stats());
        for m in IcModel::ALL {
            let ta = IcTable::compute(&a, m, &IcConfig::default()).unwrap();
            let tb = IcTable::compute(&b, m, &IcConfig::default()).unwrap();
            prop_assert_eq!(ta.values(), tb.values());
        }
        let n = d.labels.len();
        for i in (0..n).step_by(3) {
            for j in (i..n).step_by(2) {
                let (x, y) = (&d.labels[i], &d.labels[j]);
                let da: BTreeSet<_> = dcs_nodes(&a, ix(&a, x), ix(&a, y)).iter().map(|&c| a.id(c).clone()).collect();
                let db: BTreeSet<_> = dcs_nodes(&b, ix(&b, x), ix(&b, y)).iter().map(|&c| b.id(c).clone()).collect();
                prop_assert_eq!(da, db);
            }
        }
    }

    #[test]
    fn lcs_is_the_best_common_subsumer(seed in any::<u64>()) {
        let d = dag(seed);
        let t = Taxonomy::freeze(d.raw()).unwrap();
        let ic = IcTable::compute(&t, IcModel::Seco, &IcConfig::default()).unwrap();
        let s = Scorer::new(&t, &ic, 10.0);
        let anc = d.all_ancestors();
        let n = d.labels.len();
        for i in 0..n {
            for j in i..n {
                let (a, b) = (ix(&t, &d.labels[i]), ix(&t, &d.labels[j]));
                let want = anc[i]
                    .intersection(&anc[j])
                    .map(|&k| ic.value(ix(&t, &d.labels[k])))
                    .fold(0.0, f64::max);
                let r = lcs_ic(&t, &ic, a, b);
                prop_assert_eq!(r, want);
                prop_assert!(r <= ic.value(a).min(ic.value(b)));
                for m in [SimMeasure::Lin, SimMeasure::Faith, SimMeasure::Proposed, SimMeasure::JiangConrath] {
                    let v = s.score(m, a, b).unwrap();
                    prop_assert!((0.0..=1.0 + 1e-12).contains(&v), "{} = {}", m, v);
                }
                prop_assert!(!common_subsumers(&t, a, b).is_empty());
            }
        }
    }

    #[test]
    fn longest_path_depth_never_shorter(seed in any::<u64>()) {
        let d = dag(seed);
        let min = Taxonomy::freeze(d.raw()).unwrap();
        let max = Taxonomy::freeze_with(d.raw(), FreezeOptions { depth_mode: DepthMode::Max }).unwrap();
        for c in min.node_indices() {
            prop_assert!(max.stats(c).depth >= min.stats(c).depth);
            for &p in &min.synset(c).parents {
                prop_assert!(max.stats(c).depth > max.stats(p).depth);
                prop_assert!(min.stats(c).depth <= min.stats(p).depth + 1);
            }
        }
    }

    #[test]
    fn edgelist_roundtrip(seed in any::<u64>()) {
        let t = Taxonomy::freeze(dag(seed).raw()).unwrap();
        let text = write_edgelist(&t);
        let back = Taxonomy::freeze(parse_edgelist_str(&text, "roundtrip".as_ref()).unwrap().graph).unwrap();
        prop_assert_eq!(t.edges(), back.edges());
        prop_assert_eq!(t.all_stats(), back.all_stats());
    }

    #[test]
    fn pearson_affine_and_order(
        xy in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..40),
        scale in 0.1f64..10.0,
        shift in -50.0f64..50.0,
        rot in 0usize..40,
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.iter().copied().unzip();
        let Ok(r) = pearson(&x, &y) else { return Ok(()); };
        prop_assert!((-1.0..=1.0).contains(&r));
        let y2: Vec<f64> = y.iter().map(|v| scale * v + shift).collect();
        prop_assert!((pearson(&x, &y2).unwrap() - r).abs() < 1e-9);
        let neg: Vec<f64> = y.iter().map(|v| -scale * v).collect();
        prop_assert!((pearson(&x, &neg).unwrap() + r).abs() < 1e-9);
        let mut rotated = xy.clone();
        rotated.rotate_left(rot % xy.len());
        let (rx, ry): (Vec<f64>, Vec<f64>) = rotated.into_iter().unzip();
        prop_assert!((pearson(&rx, &ry).unwrap() - r).abs() < 1e-9);
    }
}
