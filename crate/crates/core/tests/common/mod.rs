//! Test-only oracles and generators shared by the integration suites.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use transmi::unigram::{normalize, UnigramModel, DEFAULT_MARKER};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn rules_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("rules")
}

/// Best segmentation found by enumerating every split of the normalized text
/// into vocabulary surfaces and unknown spans.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub ids: Vec<u32>,
    pub score: f64,
    pub pieces: Vec<String>,
}

fn better(a: &(f64, Vec<u32>), b: &(f64, Vec<u32>)) -> bool {
    match a.0.partial_cmp(&b.0).unwrap() {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match b.1.len().cmp(&a.1.len()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => a.1 < b.1,
        },
    }
}

pub fn brute_force_segment(model: &UnigramModel, text: &str) -> OracleResult {
    let chars: Vec<char> = normalize(text, model.marker()).chars().collect();
    let unk = model.unk_id();
    let unk_score = model.unk_score();
    let vocab: Vec<(Vec<char>, u32, f64)> = model
        .entries()
        .iter()
        .filter(|e| !model.is_special(e.id))
        .map(|e| (e.surface.chars().collect(), e.id, e.score))
        .collect();

    let mut best: Option<(f64, Vec<u32>, Vec<String>)> = None;
    // depth-first over (position, previous piece was unknown)
    fn walk(
        pos: usize,
        prev_unk: bool,
        chars: &[char],
        vocab: &[(Vec<char>, u32, f64)],
        unk: (u32, f64),
        acc: &mut (f64, Vec<u32>, Vec<String>),
        best: &mut Option<(f64, Vec<u32>, Vec<String>)>,
    ) {
        if pos == chars.len() {
            let cand = (acc.0, acc.1.clone());
            let take = match best {
                None => true,
                Some(b) => better(&cand, &(b.0, b.1.clone())),
            };
            if take {
                *best = Some(acc.clone());
            }
            return;
        }
        for (surface, id, score) in vocab {
            if chars[pos..].starts_with(surface) {
                acc.0 += score;
                acc.1.push(*id);
                acc.2.push(surface.iter().collect());
                walk(pos + surface.len(), false, chars, vocab, unk, acc, best);
                acc.2.pop();
                acc.1.pop();
                acc.0 -= score;
            }
        }
        if !prev_unk {
            for end in pos + 1..=chars.len() {
                let cost = unk.1 * (end - pos) as f64;
                acc.0 += cost;
                acc.1.push(unk.0);
                acc.2.push(chars[pos..end].iter().collect());
                walk(end, true, chars, vocab, unk, acc, best);
                acc.2.pop();
                acc.1.pop();
                acc.0 -= cost;
            }
        }
    }
    let mut acc = (0.0, Vec::new(), Vec::new());
    walk(0, false, &chars, &vocab, (unk, unk_score), &mut acc, &mut best);
    let (score, ids, pieces) = best.expect("at least one segmentation");
    OracleResult { ids, score, pieces }
}

/// Score on a 1/16 grid so sums are exact and ties are common.
pub fn grid_score(rng: &mut StdRng) -> f64 {
    -(rng.gen_range(1..=128) as f64) / 16.0
}

pub fn random_string(rng: &mut StdRng, alphabet: &[char], min: usize, max: usize) -> String {
    let len = rng.gen_range(min..=max);
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

/// A random model over `alphabet` (plus the marker) with `n` non-special
/// surfaces of up to `max_len` characters.
pub fn random_model(rng: &mut StdRng, alphabet: &[char], n: usize, max_len: usize) -> UnigramModel {
    let mut with_marker = alphabet.to_vec();
    with_marker.push(DEFAULT_MARKER);
    let mut vocab: Vec<(String, f64)> = vec![("<unk>".into(), -(rng.gen_range(16..=160) as f64) / 16.0)];
    let mut tries = 0;
    while vocab.len() < n + 1 && tries < 1000 {
        tries += 1;
        let mut s = random_string(rng, &with_marker, 1, max_len);
        if rng.gen_bool(0.3) {
            s.insert(0, DEFAULT_MARKER);
        }
        if !vocab.iter().any(|(v, _)| *v == s) {
            vocab.push((s, grid_score(rng)));
        }
    }
    UnigramModel::new(vocab, "<unk>", &["<unk>"], DEFAULT_MARKER).unwrap()
}

/// Random additions absent from `model`.
pub fn random_additions(
    rng: &mut StdRng,
    model: &UnigramModel,
    alphabet: &[char],
    n: usize,
    max_len: usize,
) -> Vec<(String, f64)> {
    let mut out: Vec<(String, f64)> = Vec::new();
    let mut tries = 0;
    while out.len() < n && tries < 1000 {
        tries += 1;
        let mut s = random_string(rng, alphabet, 1, max_len);
        if rng.gen_bool(0.3) {
            s.insert(0, DEFAULT_MARKER);
        }
        if !model.contains(&s) && !out.iter().any(|(v, _)| *v == s) {
            out.push((s, grid_score(rng)));
        }
    }
    out
}

pub const SYLLABLES: [&str; 16] = [
    "太", "阳", "陽", "是", "时", "食", "物", "务", "今", "天", "да", "нет", "shi", "tai", "yang", "→",
];

/// A random vocabulary mixing scripts so that existing, one-to-one,
/// ambiguous and unusable entries all occur.
pub fn mixed_model(rng: &mut StdRng, n: usize) -> UnigramModel {
    let mut vocab: Vec<(String, f64)> = vec![("<unk>".into(), -30.0), ("<s>".into(), 0.0)];
    let mut tries = 0;
    while vocab.len() < n + 2 && tries < 2000 {
        tries += 1;
        let parts = rng.gen_range(1..=2);
        let mut s: String = (0..parts).map(|_| *SYLLABLES.choose(rng).unwrap()).collect();
        if rng.gen_bool(0.5) {
            s.insert(0, DEFAULT_MARKER);
        }
        if !vocab.iter().any(|(v, _)| *v == s) {
            vocab.push((s, grid_score(rng)));
        }
    }
    UnigramModel::new(vocab, "<unk>", &["<s>"], DEFAULT_MARKER).unwrap()
}

/// Element-wise mean of `rows` computed independently in `f64`.
pub fn mean_oracle(rows: &[&[f32]]) -> Vec<f64> {
    let dim = rows[0].len();
    (0..dim)
        .map(|k| rows.iter().map(|r| r[k] as f64).sum::<f64>() / rows.len() as f64)
        .collect()
}

/// Distance in units in the last place between two finite `f32` values.
pub fn ulp_distance(a: f32, b: f32) -> u32 {
    fn ordered(x: f32) -> i64 {
        let bits = x.to_bits() as i32;
        if bits < 0 {
            i64::from(i32::MIN) - i64::from(bits)
        } else {
            i64::from(bits)
        }
    }
    (ordered(a) - ordered(b)).unsigned_abs() as u32
}
