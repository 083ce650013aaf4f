//! Vocabulary merging of subword transliterations.
//!
//! Every non-special subword is transliterated into a triplet
//! `(transliteration, source id, source score)`. Transliterations already in
//! the vocabulary need nothing; those produced by exactly one source are
//! added with that source's score; the rest form ambiguity groups that are
//! resolved under a [`MergeMode`]. Added scores are never renormalized since
//! only their order affects segmentation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::canonical;
use crate::translit::{is_latin_char, RuleTable};
use crate::unigram::{ModelError, UnigramModel};

#[derive(Debug, Error)]
pub enum MergeError {
    #[error("triplet references id {0}, outside the vocabulary")]
    UnknownSource(u32),
    #[error("merge produced an invalid vocabulary: {0}")]
    Extension(#[from] ModelError),
}

/// How the score (and embedding) of an ambiguous transliteration is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum MergeMode {
    /// Lowest member score; embedding copied from that member.
    Min,
    /// Highest member score; embedding copied from that member.
    Max,
    /// Mean member score; embedding averaged over all members.
    Avg,
}

impl MergeMode {
    pub const ALL: [MergeMode; 3] = [MergeMode::Min, MergeMode::Max, MergeMode::Avg];

    pub fn as_str(self) -> &'static str {
        match self {
            MergeMode::Min => "min",
            MergeMode::Max => "max",
            MergeMode::Avg => "avg",
        }
    }
}

impl fmt::Display for MergeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MergeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" => Ok(MergeMode::Min),
            "max" => Ok(MergeMode::Max),
            "avg" => Ok(MergeMode::Avg),
            other => Err(format!("unknown merge mode {other:?} (expected min, max or avg)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triplet {
    /// Latin transliteration.
    pub v: String,
    /// Source subword id.
    pub w_id: u32,
    /// Source subword score.
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    Special,
    /// Nothing left after removing the boundary marker.
    Empty,
    /// Transliteration still contains characters outside printable ASCII.
    NonLatin,
}

impl SkipReason {
    pub fn as_str(self) -> &'static str {
        match self {
            SkipReason::Special => "special",
            SkipReason::Empty => "empty",
            SkipReason::NonLatin => "non_latin",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skipped {
    pub id: u32,
    pub transliteration: String,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TripletSet {
    pub triplets: Vec<Triplet>,
    pub skipped: Vec<Skipped>,
}

fn usable(v: &str, marker: char) -> Result<(), SkipReason> {
    let body = v.strip_prefix(marker).unwrap_or(v);
    if body.is_empty() {
        Err(SkipReason::Empty)
    } else if body.chars().all(|c| c.is_ascii_graphic()) {
        Ok(())
    } else {
        Err(SkipReason::NonLatin)
    }
}

/// Transliterates every vocabulary entry. Specials, and entries whose
/// transliteration is empty or not plain ASCII, are recorded as skipped.
pub fn build_triplets(model: &UnigramModel, table: &RuleTable) -> TripletSet {
    let marker = model.marker();
    let outcomes: Vec<Result<Triplet, Skipped>> = model
        .entries()
        .par_iter()
        .map(|e| {
            if model.is_special(e.id) {
                return Err(Skipped {
                    id: e.id,
                    transliteration: e.surface.clone(),
                    reason: SkipReason::Special,
                });
            }
            let v = table.transliterate_token(&e.surface, marker);
            match usable(&v, marker) {
                Ok(()) => Ok(Triplet {
                    v,
                    w_id: e.id,
                    score: e.score,
                }),
                Err(reason) => Err(Skipped {
                    id: e.id,
                    transliteration: v,
                    reason,
                }),
            }
        })
        .collect();
    let mut set = TripletSet::default();
    for outcome in outcomes {
        match outcome {
            Ok(t) => set.triplets.push(t),
            Err(s) => set.skipped.push(s),
        }
    }
    set
}

/// All triplets sharing one transliteration that is new to the vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityGroup {
    v: String,
    members: Vec<Triplet>,
}

impl AmbiguityGroup {
    /// Members are sorted by source id. Returns `None` unless there are at
    /// least two members, all sharing `v`, with distinct source ids.
    pub fn new(mut members: Vec<Triplet>) -> Option<Self> {
        if members.len() < 2 {
            return None;
        }
        let v = members[0].v.clone();
        if members.iter().any(|t| t.v != v) {
            return None;
        }
        members.sort_by_key(|t| t.w_id);
        if members.windows(2).any(|w| w[0].w_id == w[1].w_id) {
            return None;
        }
        Some(AmbiguityGroup { v, members })
    }

    pub fn v(&self) -> &str {
        &self.v
    }

    pub fn members(&self) -> &[Triplet] {
        &self.members
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Partition {
    /// Transliteration already in the vocabulary.
    pub existing: Vec<Triplet>,
    /// Transliteration produced by exactly one source, ordered by source id.
    pub one_to_one: Vec<Triplet>,
    /// Ambiguous transliterations, ordered by transliteration.
    pub groups: Vec<AmbiguityGroup>,
}

pub fn partition_triplets(triplets: &[Triplet], model: &UnigramModel) -> Partition {
    let mut partition = Partition::default();
    let mut by_v: BTreeMap<&str, Vec<&Triplet>> = BTreeMap::new();
    for t in triplets {
        if model.contains(&t.v) {
            partition.existing.push(t.clone());
        } else {
            by_v.entry(&t.v).or_default().push(t);
        }
    }
    for (_, members) in by_v {
        if let [single] = members.as_slice() {
            partition.one_to_one.push((*single).clone());
        } else {
            let group = AmbiguityGroup::new(members.into_iter().cloned().collect())
                .expect("triplets carry distinct source ids");
            partition.groups.push(group);
        }
    }
    partition.one_to_one.sort_by_key(|t| t.w_id);
    partition
}

/// Source rows backing an added subword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Single(u32),
    Average(Vec<u32>),
}

impl Provenance {
    pub fn ids(&self) -> &[u32] {
        match self {
            Provenance::Single(id) => std::slice::from_ref(id),
            Provenance::Average(ids) => ids,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    pub v: String,
    pub chosen_score: f64,
    pub provenance: Provenance,
}

/// Chooses the score and provenance for an ambiguous transliteration.
/// MIN and MAX ties go to the smallest source id.
pub fn resolve_group(group: &AmbiguityGroup, mode: MergeMode) -> Resolution {
    let members = group.members();
    // members are sorted by id, so the first extremum is the smallest id
    let pick = |better: fn(f64, f64) -> bool| {
        let mut best = &members[0];
        for t in &members[1..] {
            if better(t.score, best.score) {
                best = t;
            }
        }
        best
    };
    let (chosen_score, provenance) = match mode {
        MergeMode::Min => {
            let t = pick(|a, b| a < b);
            (t.score, Provenance::Single(t.w_id))
        }
        MergeMode::Max => {
            let t = pick(|a, b| a > b);
            (t.score, Provenance::Single(t.w_id))
        }
        MergeMode::Avg => {
            let lo = pick(|a, b| a < b).score;
            let hi = pick(|a, b| a > b).score;
            let mean = members.iter().map(|t| t.score).sum::<f64>() / members.len() as f64;
            (
                mean.clamp(lo, hi),
                Provenance::Average(members.iter().map(|t| t.w_id).collect()),
            )
        }
    };
    Resolution {
        v: group.v().to_string(),
        chosen_score,
        provenance,
    }
}

/// Multiplicity of new transliterations: how many sources share each one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Histogram {
    pub one: usize,
    pub two: usize,
    pub three: usize,
    pub more: usize,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.one + self.two + self.three + self.more
    }

    fn record(&mut self, multiplicity: usize) {
        match multiplicity {
            0 => {}
            1 => self.one += 1,
            2 => self.two += 1,
            3 => self.three += 1,
            _ => self.more += 1,
        }
    }

    /// `(label, count)` rows in bucket order.
    pub fn rows(&self) -> [(&'static str, usize); 4] {
        [
            ("1", self.one),
            ("2", self.two),
            ("3", self.three),
            (">3", self.more),
        ]
    }
}

/// Buckets distinct transliterations absent from the vocabulary by how many
/// triplets produce them.
pub fn ambiguity_histogram(triplets: &[Triplet], model: &UnigramModel) -> Histogram {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in triplets.iter().filter(|t| !model.contains(&t.v)) {
        *counts.entry(&t.v).or_default() += 1;
    }
    let mut h = Histogram::default();
    for n in counts.into_values() {
        h.record(n);
    }
    h
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DispositionCounts {
    pub already_in_vocab: usize,
    pub one_to_one_added: usize,
    /// Added surfaces resolved from ambiguity groups.
    pub ambiguous_added: usize,
    /// Source entries inside ambiguity groups.
    pub ambiguous_sources: usize,
    pub skipped_special: usize,
    pub skipped_unusable: usize,
    /// Additions whose sources were already Latin apart from diacritics.
    pub latin_variants_added: usize,
}

impl DispositionCounts {
    /// Source entries accounted for; equals the original vocabulary size.
    pub fn sources(&self) -> usize {
        self.already_in_vocab
            + self.one_to_one_added
            + self.ambiguous_sources
            + self.skipped_special
            + self.skipped_unusable
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeReport {
    pub mode: MergeMode,
    pub counts: DispositionCounts,
    pub histogram: Histogram,
    /// Resolutions in id order of the added surfaces.
    pub additions: Vec<Resolution>,
    /// Non-special entries that produced no usable transliteration.
    pub skipped: Vec<(Skipped, String)>,
}

impl MergeReport {
    /// Canonical JSON, formatted like the tokenizer documents.
    pub fn to_canonical_json(&self) -> String {
        let mut out = String::new();
        out.push('{');
        canonical::push_key(&mut out, "additions");
        out.push('[');
        for (i, r) in self.additions.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('{');
            canonical::push_key(&mut out, "provenance");
            out.push('[');
            for (j, id) in r.provenance.ids().iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                canonical::push_u64(&mut out, u64::from(*id));
            }
            out.push_str("],");
            canonical::push_key(&mut out, "score");
            canonical::push_f64(&mut out, r.chosen_score);
            out.push(',');
            canonical::push_key(&mut out, "surface");
            canonical::push_str(&mut out, &r.v);
            out.push('}');
        }
        out.push_str("],");

        let c = &self.counts;
        canonical::push_key(&mut out, "counts");
        out.push('{');
        let counts = [
            ("already_in_vocab", c.already_in_vocab),
            ("ambiguous_added", c.ambiguous_added),
            ("ambiguous_sources", c.ambiguous_sources),
            ("latin_variants_added", c.latin_variants_added),
            ("one_to_one_added", c.one_to_one_added),
            ("skipped_special", c.skipped_special),
            ("skipped_unusable", c.skipped_unusable),
        ];
        push_counts(&mut out, &counts);
        out.push_str("},");

        canonical::push_key(&mut out, "histogram");
        out.push('{');
        push_counts(&mut out, &self.histogram.rows());
        out.push_str("},");

        canonical::push_key(&mut out, "mode");
        canonical::push_str(&mut out, self.mode.as_str());
        out.push(',');

        canonical::push_key(&mut out, "skipped");
        out.push('[');
        for (i, (s, surface)) in self.skipped.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('{');
            canonical::push_key(&mut out, "id");
            canonical::push_u64(&mut out, u64::from(s.id));
            out.push(',');
            canonical::push_key(&mut out, "reason");
            canonical::push_str(&mut out, s.reason.as_str());
            out.push(',');
            canonical::push_key(&mut out, "surface");
            canonical::push_str(&mut out, surface);
            out.push(',');
            canonical::push_key(&mut out, "transliteration");
            canonical::push_str(&mut out, &s.transliteration);
            out.push('}');
        }
        out.push_str("]}");
        out
    }
}

fn push_counts(out: &mut String, counts: &[(&str, usize)]) {
    for (i, (k, v)) in counts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        canonical::push_key(out, k);
        canonical::push_u64(out, *v as u64);
    }
}

#[derive(Debug, Clone)]
pub struct MergeOutput {
    pub model: UnigramModel,
    /// One resolution per added surface, in id order.
    pub resolutions: Vec<Resolution>,
    pub report: MergeReport,
}

fn is_latin_source(surface: &str, marker: char) -> bool {
    let body = surface.strip_prefix(marker).unwrap_or(surface);
    body.chars().all(|c| c.is_ascii() || is_latin_char(c))
}

/// Extends `model` with the new transliterations: one-to-one additions by
/// source id, then resolved groups by transliteration.
pub fn merge_vocabulary(
    model: &UnigramModel,
    set: &TripletSet,
    mode: MergeMode,
) -> Result<MergeOutput, MergeError> {
    if let Some(t) = set.triplets.iter().find(|t| model.entry(t.w_id).is_none()) {
        return Err(MergeError::UnknownSource(t.w_id));
    }
    let partition = partition_triplets(&set.triplets, model);
    let mut resolutions: Vec<Resolution> = partition
        .one_to_one
        .iter()
        .map(|t| Resolution {
            v: t.v.clone(),
            chosen_score: t.score,
            provenance: Provenance::Single(t.w_id),
        })
        .collect();
    resolutions.extend(partition.groups.iter().map(|g| resolve_group(g, mode)));

    let additions: Vec<(String, f64)> = resolutions
        .iter()
        .map(|r| (r.v.clone(), r.chosen_score))
        .collect();
    let merged = model.extend_vocabulary(&additions)?;

    let marker = model.marker();
    let surface = |id: u32| model.entries()[id as usize].surface.as_str();
    let counts = DispositionCounts {
        already_in_vocab: partition.existing.len(),
        one_to_one_added: partition.one_to_one.len(),
        ambiguous_added: partition.groups.len(),
        ambiguous_sources: partition.groups.iter().map(|g| g.members().len()).sum(),
        skipped_special: set
            .skipped
            .iter()
            .filter(|s| s.reason == SkipReason::Special)
            .count(),
        skipped_unusable: set
            .skipped
            .iter()
            .filter(|s| s.reason != SkipReason::Special)
            .count(),
        latin_variants_added: resolutions
            .iter()
            .filter(|r| {
                r.provenance
                    .ids()
                    .iter()
                    .all(|&id| is_latin_source(surface(id), marker))
            })
            .count(),
    };
    let report = MergeReport {
        mode,
        counts,
        histogram: ambiguity_histogram(&set.triplets, model),
        additions: resolutions.clone(),
        skipped: set
            .skipped
            .iter()
            .filter(|s| s.reason != SkipReason::Special)
            .map(|s| (s.clone(), surface(s.id).to_string()))
            .collect(),
    };
    Ok(MergeOutput {
        model: merged,
        resolutions,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unigram::DEFAULT_MARKER;

    fn han_table() -> RuleTable {
        RuleTable::parse("Hani", "太\ttai\n阳\tyang\n陽\tyang\n").unwrap()
    }

    fn sun_model() -> UnigramModel {
        UnigramModel::new(
            vec![
                ("<unk>".into(), -20.0),
                ("▁太阳".into(), -8.1),
                ("▁太陽".into(), -7.5),
                ("▁sun".into(), -3.0),
            ],
            "<unk>",
            &["<unk>"],
            DEFAULT_MARKER,
        )
        .unwrap()
    }

    fn t(v: &str, w_id: u32, score: f64) -> Triplet {
        Triplet {
            v: v.into(),
            w_id,
            score,
        }
    }

    #[test]
    fn mode_parsing() {
        for m in MergeMode::ALL {
            assert_eq!(m.as_str().parse::<MergeMode>().unwrap(), m);
        }
        assert!("median".parse::<MergeMode>().is_err());
    }

    #[test]
    fn triplets_for_sun_fixture() {
        let set = build_triplets(&sun_model(), &han_table());
        assert_eq!(
            set.triplets,
            vec![t("▁taiyang", 1, -8.1), t("▁taiyang", 2, -7.5), t("▁sun", 3, -3.0)]
        );
        assert_eq!(set.skipped.len(), 1);
        assert_eq!(set.skipped[0].id, 0);
        assert_eq!(set.skipped[0].reason, SkipReason::Special);
    }

    #[test]
    fn unusable_transliterations_are_skipped() {
        let model = UnigramModel::new(
            vec![
                ("<unk>".into(), -20.0),
                ("<s>".into(), 0.0),
                ("▁→".into(), -5.0),
                ("▁".into(), -2.0),
                ("ж".into(), -4.0),
                ("▁(".into(), -4.0),
            ],
            "<unk>",
            &["<s>"],
            DEFAULT_MARKER,
        )
        .unwrap();
        let set = build_triplets(&model, &han_table());
        let reasons: Vec<(u32, SkipReason)> =
            set.skipped.iter().map(|s| (s.id, s.reason)).collect();
        assert_eq!(
            reasons,
            vec![
                (0, SkipReason::Special),
                (1, SkipReason::Special),
                (2, SkipReason::NonLatin),
                (3, SkipReason::Empty),
                (4, SkipReason::NonLatin),
            ]
        );
        assert_eq!(set.triplets, vec![t("▁(", 5, -4.0)]);
    }

    #[test]
    fn partition_classifies() {
        let model = sun_model();
        let triplets = vec![
            t("▁sun", 3, -3.0),
            t("▁taiyang", 2, -7.5),
            t("▁kniga", 1, -6.0),
            t("▁taiyang", 1, -8.1),
        ];
        let p = partition_triplets(&triplets, &model);
        assert_eq!(p.existing, vec![t("▁sun", 3, -3.0)]);
        assert_eq!(p.one_to_one, vec![t("▁kniga", 1, -6.0)]);
        assert_eq!(p.groups.len(), 1);
        assert_eq!(p.groups[0].v(), "▁taiyang");
        assert_eq!(
            p.groups[0].members(),
            &[t("▁taiyang", 1, -8.1), t("▁taiyang", 2, -7.5)]
        );
    }

    #[test]
    fn group_construction_checks_invariants() {
        assert!(AmbiguityGroup::new(vec![t("a", 1, 0.0)]).is_none());
        assert!(AmbiguityGroup::new(vec![t("a", 1, 0.0), t("b", 2, 0.0)]).is_none());
        assert!(AmbiguityGroup::new(vec![t("a", 1, 0.0), t("a", 1, -1.0)]).is_none());
    }

    #[test]
    fn resolve_modes() {
        let g = AmbiguityGroup::new(vec![t("▁taiyang", 1, -8.1), t("▁taiyang", 2, -7.5)]).unwrap();
        let max = resolve_group(&g, MergeMode::Max);
        assert_eq!(max.chosen_score, -7.5);
        assert_eq!(max.provenance, Provenance::Single(2));
        let min = resolve_group(&g, MergeMode::Min);
        assert_eq!(min.chosen_score, -8.1);
        assert_eq!(min.provenance, Provenance::Single(1));

        let g = AmbiguityGroup::new(vec![t("x", 5, -2.0), t("x", 3, -4.0), t("x", 9, -6.0)]).unwrap();
        let avg = resolve_group(&g, MergeMode::Avg);
        assert_eq!(avg.chosen_score, -4.0);
        assert_eq!(avg.provenance, Provenance::Average(vec![3, 5, 9]));
    }

    #[test]
    fn extremum_ties_go_to_smallest_id() {
        let g = AmbiguityGroup::new(vec![t("x", 7, -1.0), t("x", 4, -1.0), t("x", 2, -3.0), t("x", 9, -3.0)])
            .unwrap();
        assert_eq!(resolve_group(&g, MergeMode::Max).provenance, Provenance::Single(4));
        assert_eq!(resolve_group(&g, MergeMode::Min).provenance, Provenance::Single(2));
    }

    #[test]
    fn equal_scores_average_exactly() {
        let g = AmbiguityGroup::new(vec![t("x", 1, -0.1), t("x", 2, -0.1), t("x", 3, -0.1)]).unwrap();
        assert_eq!(resolve_group(&g, MergeMode::Avg).chosen_score, -0.1);
    }

    #[test]
    fn merge_sun_fixture_max() {
        let model = sun_model();
        let set = build_triplets(&model, &han_table());
        let out = merge_vocabulary(&model, &set, MergeMode::Max).unwrap();
        assert_eq!(out.model.len(), 5);
        assert_eq!(out.model.id_of("▁taiyang"), Some(4));
        assert_eq!(out.model.entry(4).unwrap().score, -7.5);
        assert_eq!(out.resolutions.len(), 1);
        let c = out.report.counts;
        assert_eq!(c.already_in_vocab, 1);
        assert_eq!(c.ambiguous_added, 1);
        assert_eq!(c.ambiguous_sources, 2);
        assert_eq!(c.one_to_one_added, 0);
        assert_eq!(c.skipped_special, 1);
        assert_eq!(c.sources(), model.len());
        assert_eq!(
            out.report.histogram,
            Histogram {
                one: 0,
                two: 1,
                three: 0,
                more: 0
            }
        );
        assert_eq!(
            out.report.to_canonical_json(),
            r#"{"additions":[{"provenance":[2],"score":-7.5,"surface":"▁taiyang"}],"counts":{"already_in_vocab":1,"ambiguous_added":1,"ambiguous_sources":2,"latin_variants_added":0,"one_to_one_added":0,"skipped_special":1,"skipped_unusable":0},"histogram":{"1":0,"2":1,"3":0,">3":0},"mode":"max","skipped":[]}"#
        );
    }

    #[test]
    fn all_latin_vocabulary_is_fixed_point() {
        let model = UnigramModel::new(
            vec![("<unk>".into(), -20.0), ("▁sun".into(), -3.0), ("ny".into(), -4.0)],
            "<unk>",
            &["<unk>"],
            DEFAULT_MARKER,
        )
        .unwrap();
        let set = build_triplets(&model, &han_table());
        let out = merge_vocabulary(&model, &set, MergeMode::Avg).unwrap();
        assert_eq!(out.model, model);
        assert!(out.resolutions.is_empty());
        assert_eq!(out.report.counts.already_in_vocab, 2);
        assert_eq!(out.report.histogram.total(), 0);
    }

    #[test]
    fn diacritic_variants_are_added_and_flagged() {
        let model = UnigramModel::new(
            vec![("<unk>".into(), -20.0), ("▁café".into(), -6.0), ("▁太阳".into(), -8.0)],
            "<unk>",
            &["<unk>"],
            DEFAULT_MARKER,
        )
        .unwrap();
        let set = build_triplets(&model, &han_table());
        let out = merge_vocabulary(&model, &set, MergeMode::Max).unwrap();
        assert_eq!(out.model.id_of("▁cafe"), Some(3));
        assert_eq!(out.model.id_of("▁taiyang"), Some(4));
        assert_eq!(out.report.counts.one_to_one_added, 2);
        assert_eq!(out.report.counts.latin_variants_added, 1);
    }

    #[test]
    fn histogram_buckets() {
        let model = sun_model();
        let mut triplets = vec![t("a", 1, 0.0)];
        let mut id = 10;
        for (v, n) in [("b", 2), ("c", 3), ("d", 5)] {
            for _ in 0..n {
                triplets.push(t(v, id, 0.0));
                id += 1;
            }
        }
        triplets.push(t("▁sun", 3, -3.0));
        let h = ambiguity_histogram(&triplets, &model);
        assert_eq!(
            h,
            Histogram {
                one: 1,
                two: 1,
                three: 1,
                more: 1
            }
        );
        assert_eq!(ambiguity_histogram(&[], &model), Histogram::default());
    }

    #[test]
    fn bad_triplet_source_is_an_error() {
        let set = TripletSet {
            triplets: vec![t("x", 99, 0.0)],
            skipped: vec![],
        };
        assert!(matches!(
            merge_vocabulary(&sun_model(), &set, MergeMode::Max),
            Err(MergeError::UnknownSource(99))
        ));
    }
}
