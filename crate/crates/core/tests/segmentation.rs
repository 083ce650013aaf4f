mod common;

use common::{brute_force_segment, random_additions, random_model, random_string};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use transmi::unigram::{load_model, UnigramModel, DEFAULT_MARKER};

const LATIN: [char; 4] = ['a', 'b', 'c', 'd'];

fn model_from(vocab: &[(&str, f64)]) -> UnigramModel {
    let mut v: Vec<(String, f64)> = vec![("<unk>".into(), -10.0)];
    v.extend(vocab.iter().map(|&(s, x)| (s.to_string(), x)));
    UnigramModel::new(v, "<unk>", &["<unk>"], DEFAULT_MARKER).unwrap()
}

#[test]
fn oracle_agrees_on_worked_example() {
    let m = model_from(&[("▁ab", -1.0), ("▁a", -2.0), ("b", -2.0)]);
    let o = brute_force_segment(&m, "ab");
    assert_eq!(o.pieces, vec!["▁ab"]);
    assert_eq!(o.score, -1.0);
    assert_eq!(m.tokenize("ab").ids(), o.ids);
}

#[test]
fn pinyin_fixture_matches_oracle() {
    let m = load_model(common::fixture("pinyin.json")).unwrap();
    for text in ["jintianshigehaotianqi", "今天是个好天气"] {
        let o = brute_force_segment(&m, text);
        let seg = m.tokenize(text);
        assert_eq!(seg.ids(), o.ids, "{text}");
        assert_eq!(seg.total_score, o.score);
    }
    assert_eq!(
        m.tokenize("jintianshigehaotianqi").surfaces(),
        vec!["▁jint", "ian", "shig", "ehao", "tian", "qi"]
    );
}

#[test]
fn seeded_viterbi_matches_enumeration() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..300 {
        let model = random_model(&mut rng, &LATIN, 11, 4);
        let text = random_string(&mut rng, &['a', 'b', 'c', 'd', ' ', 'e'], 0, 11);
        let seg = model.tokenize(&text);
        let oracle = brute_force_segment(&model, &text);
        assert_eq!(seg.ids(), oracle.ids, "text {text:?}");
        assert_eq!(seg.total_score, oracle.score);
    }
}

#[test]
fn tokenization_is_thread_independent() {
    let m = load_model(common::fixture("demo.json")).unwrap();
    let text = std::fs::read_to_string(common::fixture("corpus_translit.txt")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let serial: Vec<Vec<u32>> = lines.iter().map(|l| m.tokenize(l).ids()).collect();
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let parallel: Vec<Vec<u32>> = pool.install(|| {
            use rayon::prelude::*;
            lines.par_iter().map(|l| m.tokenize(l).ids()).collect()
        });
        assert_eq!(parallel, serial);
    }
}

fn arb_case() -> impl Strategy<Value = (u64, String)> {
    (any::<u64>(), "[abcd e▁]{0,12}")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn viterbi_equals_enumeration((seed, text) in arb_case()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let model = random_model(&mut rng, &LATIN, 11, 4);
        let seg = model.tokenize(&text);
        let oracle = brute_force_segment(&model, &text);
        prop_assert_eq!(seg.ids(), oracle.ids);
        prop_assert_eq!(seg.total_score, oracle.score);
    }

    #[test]
    fn reconstruction_and_score_sum((seed, text) in arb_case()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let model = random_model(&mut rng, &LATIN, 11, 4);
        let seg = model.tokenize(&text);
        prop_assert_eq!(seg.surfaces().concat(), seg.normalized.clone());
        let sum: f64 = seg.pieces.iter().map(|p| p.score).sum();
        prop_assert!((sum - seg.total_score).abs() <= 1e-9);
        for p in &seg.pieces {
            if p.id != model.unk_id() {
                prop_assert_eq!(&seg.normalized[p.start..p.end], model.entry(p.id).unwrap().surface.as_str());
            }
        }
        // unknown spans are maximal
        for w in seg.pieces.windows(2) {
            prop_assert!(!(w[0].id == model.unk_id() && w[1].id == model.unk_id()));
        }
    }

    #[test]
    fn extension_never_lowers_best_score((seed, text) in arb_case()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let model = random_model(&mut rng, &LATIN, 8, 4);
        let additions = random_additions(&mut rng, &model, &LATIN, 4, 4);
        let extended = model.extend_vocabulary(&additions).unwrap();
        prop_assert!(extended.best_score(&text) >= model.best_score(&text));
    }

    #[test]
    fn unrelated_additions_do_not_change_tokenization(seed in any::<u64>(), text in "[абвг ]{0,12}") {
        let mut rng = StdRng::seed_from_u64(seed);
        let model = random_model(&mut rng, &['а', 'б', 'в', 'г', 'a', 'b'], 10, 3);
        // additions may carry the marker but always contain a Latin letter
        let additions = random_additions(&mut rng, &model, &['a', 'b', 'c'], 5, 3);
        let extended = model.extend_vocabulary(&additions).unwrap();
        prop_assert_eq!(extended.tokenize(&text).ids(), model.tokenize(&text).ids());
    }

    #[test]
    fn tokenization_is_deterministic((seed, text) in arb_case()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let model = random_model(&mut rng, &LATIN, 11, 4);
        let reloaded = UnigramModel::from_json(&model.to_canonical_json()).unwrap();
        prop_assert_eq!(model.tokenize(&text), reloaded.tokenize(&text));
    }

    #[test]
    fn canonical_json_round_trips(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let model = random_model(&mut rng, &['a', 'ж', '"', '\\', '太'], 10, 5);
        let text = model.to_canonical_json();
        let back = UnigramModel::from_json(&text).unwrap();
        prop_assert_eq!(&back, &model);
        prop_assert_eq!(back.to_canonical_json(), text);
    }
}
