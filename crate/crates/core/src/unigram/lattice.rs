//! Viterbi segmentation over the subword lattice.
//!
//! The objective is the sum of piece scores. Any character may be covered by
//! an unknown span; every character inside an unknown span costs the unk
//! score, and each maximal run of unknown characters is emitted as a single
//! unk token. Among equal-score segmentations the one with fewer tokens wins,
//! then the lexicographically smallest id sequence.
//!
//! The pass runs right to left so that ties can be settled by comparing the
//! already-final best suffixes. Each position has two states: whether the
//! preceding piece is an open unknown span (in which case an unknown
//! character extends it instead of starting a new token).

use std::cmp::Ordering;
use std::iter;

use super::UnigramModel;

/// One token of a segmentation. `start..end` is the byte range it covers in
/// [`Segmentation::normalized`].
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub id: u32,
    pub start: usize,
    pub end: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segmentation {
    pub normalized: String,
    pub pieces: Vec<Piece>,
    pub total_score: f64,
}

impl Segmentation {
    pub fn ids(&self) -> Vec<u32> {
        self.pieces.iter().map(|p| p.id).collect()
    }

    /// Text covered by each piece. Known pieces yield their vocabulary
    /// surface; unknown spans yield the original characters.
    pub fn surfaces(&self) -> Vec<&str> {
        self.pieces
            .iter()
            .map(|p| &self.normalized[p.start..p.end])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

const FREE: usize = 0;
const IN_UNK: usize = 1;

#[derive(Debug, Clone, Copy)]
enum Step {
    End,
    Piece { id: u32, len: usize },
    UnkStart,
    UnkContinue,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    score: f64,
    tokens: usize,
    step: Step,
}

impl Step {
    fn emitted(self, unk: u32) -> Option<u32> {
        match self {
            Step::End | Step::UnkContinue => None,
            Step::Piece { id, .. } => Some(id),
            Step::UnkStart => Some(unk),
        }
    }

    fn next(self, pos: usize) -> (usize, usize) {
        match self {
            Step::End => (pos, FREE),
            Step::Piece { len, .. } => (pos + len, FREE),
            Step::UnkStart | Step::UnkContinue => (pos + 1, IN_UNK),
        }
    }
}

struct Lattice<'m> {
    model: &'m UnigramModel,
    cells: Vec<[Cell; 2]>,
}

impl Lattice<'_> {
    fn ids_from(&self, mut pos: usize, mut state: usize) -> impl Iterator<Item = u32> + '_ {
        let unk = self.model.unk;
        iter::from_fn(move || loop {
            let step = self.cells[pos][state].step;
            if let Step::End = step {
                return None;
            }
            (pos, state) = step.next(pos);
            if let Some(id) = step.emitted(unk) {
                return Some(id);
            }
        })
    }

    /// Orders two candidate steps taken from `pos`; `Greater` means `a` is
    /// preferred.
    fn compare(&self, pos: usize, a: (Step, f64, usize), b: (Step, f64, usize)) -> Ordering {
        let by_score = a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal);
        if by_score != Ordering::Equal {
            return by_score;
        }
        if a.2 != b.2 {
            return b.2.cmp(&a.2);
        }
        let unk = self.model.unk;
        let seq = |step: Step| {
            let (p, s) = step.next(pos);
            step.emitted(unk).into_iter().chain(self.ids_from(p, s))
        };
        seq(b.0).cmp(seq(a.0))
    }
}

impl UnigramModel {
    /// Highest-scoring segmentation of `normalize(text)`.
    pub fn tokenize(&self, text: &str) -> Segmentation {
        let normalized = self.normalize(text);
        self.tokenize_normalized(normalized)
    }

    /// Segments text that is already normalized.
    pub fn tokenize_normalized(&self, normalized: String) -> Segmentation {
        let chars: Vec<char> = normalized.chars().collect();
        let n = chars.len();
        let unk_score = self.unk_score();
        let end = Cell {
            score: 0.0,
            tokens: 0,
            step: Step::End,
        };
        let mut lattice = Lattice {
            model: self,
            cells: vec![[end; 2]; n + 1],
        };
        let mut matches = Vec::new();
        for pos in (0..n).rev() {
            matches.clear();
            self.trie
                .for_each_prefix(&chars[pos..], |id, len| matches.push((id, len)));
            for state in [FREE, IN_UNK] {
                let mut best: Option<(Step, f64, usize)> = None;
                let unk_step = if state == FREE {
                    Step::UnkStart
                } else {
                    Step::UnkContinue
                };
                let candidates = matches
                    .iter()
                    .map(|&(id, len)| Step::Piece { id, len })
                    .chain(iter::once(unk_step));
                for step in candidates {
                    let (next_pos, next_state) = step.next(pos);
                    let next = lattice.cells[next_pos][next_state];
                    let (gain, new_tokens) = match step {
                        Step::Piece { id, .. } => (self.entries[id as usize].score, 1),
                        Step::UnkStart => (unk_score, 1),
                        _ => (unk_score, 0),
                    };
                    let cand = (step, gain + next.score, new_tokens + next.tokens);
                    best = match best {
                        Some(cur) if lattice.compare(pos, cur, cand) != Ordering::Less => {
                            Some(cur)
                        }
                        _ => Some(cand),
                    };
                }
                let (step, score, tokens) = best.expect("unknown step is always available");
                lattice.cells[pos][state] = Cell {
                    score,
                    tokens,
                    step,
                };
            }
        }

        let offsets: Vec<usize> = normalized
            .char_indices()
            .map(|(i, _)| i)
            .chain(iter::once(normalized.len()))
            .collect();
        let mut pieces: Vec<Piece> = Vec::new();
        let (mut pos, mut state) = (0, FREE);
        loop {
            let step = lattice.cells[pos][state].step;
            match step {
                Step::End => break,
                Step::Piece { id, len } => pieces.push(Piece {
                    id,
                    start: offsets[pos],
                    end: offsets[pos + len],
                    score: self.entries[id as usize].score,
                }),
                Step::UnkStart => pieces.push(Piece {
                    id: self.unk,
                    start: offsets[pos],
                    end: offsets[pos + 1],
                    score: unk_score,
                }),
                Step::UnkContinue => {
                    let last = pieces.last_mut().expect("continuation follows a start");
                    last.end = offsets[pos + 1];
                    last.score += unk_score;
                }
            }
            (pos, state) = step.next(pos);
        }
        // right fold of the piece gains, which is monotone in every score
        let total_score = lattice.cells[0][FREE].score;
        Segmentation {
            normalized,
            pieces,
            total_score,
        }
    }
}
