use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::cantor::ClopenSet;
use crate::flow::Flow;
use crate::group::{Element, Group, GroupKind};
use crate::Result;

/// Families of length-divergent sequences used to probe cones and type-II
/// recurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    /// `n`, `n·e_1`, or `a^n`.
    Positive,
    /// `-n`, `-n·e_1`, or `A^n`.
    Negative,
    /// Alternates between the positive direction and a second one
    /// (`-n` in `Z`, `-n·e_1` in `Z^d`, `b^n` in `F_k`).
    Alternating,
    /// Random elements of non-decreasing length.
    RandomMonotone,
}

impl SequenceKind {
    pub fn defaults() -> Vec<SequenceKind> {
        vec![
            SequenceKind::Positive,
            SequenceKind::Negative,
            SequenceKind::Alternating,
            SequenceKind::RandomMonotone,
        ]
    }
}

/// Lengths of a battery sequence for radius `r`: eight just above `r`
/// (type-II tail) and eight above `2r` (cone tail), nondecreasing.
fn lengths(kind: SequenceKind, r: u64, rng: &mut dyn RngCore) -> Vec<u64> {
    if kind == SequenceKind::RandomMonotone {
        let mut low: Vec<u64> = (0..8).map(|_| rng.gen_range(r + 1..=2 * r)).collect();
        let mut high: Vec<u64> = (0..8).map(|_| rng.gen_range(2 * r + 1..=3 * r + 1)).collect();
        low.sort_unstable();
        high.sort_unstable();
        low.extend(high);
        return low;
    }
    let high = (2 * r).max(r + 8);
    (1..=8).map(|i| r + i).chain((1..=8).map(|i| high + i)).collect()
}

fn element_of_length(
    group: &Group,
    kind: SequenceKind,
    index: usize,
    len: u64,
    random_word: &[i32],
    rng: &mut dyn RngCore,
) -> Option<Element> {
    let flip = kind == SequenceKind::Alternating && index % 2 == 1;
    let n = len as i64;
    match group.kind() {
        GroupKind::Integers => Some(Element::Int(match kind {
            SequenceKind::Positive => n,
            SequenceKind::Negative => -n,
            SequenceKind::Alternating => {
                if flip {
                    -n
                } else {
                    n
                }
            }
            SequenceKind::RandomMonotone => {
                if rng.gen_bool(0.5) {
                    n
                } else {
                    -n
                }
            }
        })),
        GroupKind::FreeAbelian { rank } => {
            let mut v = vec![0i64; *rank];
            match kind {
                SequenceKind::Positive => v[0] = n,
                SequenceKind::Negative => v[0] = -n,
                SequenceKind::Alternating => v[0] = if flip { -n } else { n },
                SequenceKind::RandomMonotone => {
                    let mut left = n;
                    for (i, slot) in v.iter_mut().enumerate() {
                        let take = if i + 1 == *rank { left } else { rng.gen_range(0..=left) };
                        left -= take;
                        *slot = if rng.gen_bool(0.5) { take } else { -take };
                    }
                }
            }
            Some(Element::Vector(v))
        }
        GroupKind::Free { rank } => {
            let letters: Vec<i32> = match kind {
                SequenceKind::Positive => vec![1; len as usize],
                SequenceKind::Negative => vec![-1; len as usize],
                SequenceKind::Alternating => {
                    let l = if flip && *rank > 1 { 2 } else if flip { -1 } else { 1 };
                    vec![l; len as usize]
                }
                SequenceKind::RandomMonotone => random_word[..len as usize].to_vec(),
            };
            Some(Element::Word(letters))
        }
        GroupKind::Finite(_) | GroupKind::Product(_) => None,
    }
}

fn random_reduced_word(rank: usize, len: usize, rng: &mut dyn RngCore) -> Vec<i32> {
    let mut w: Vec<i32> = Vec::with_capacity(len);
    while w.len() < len {
        let mut l = rng.gen_range(1..=rank as i32);
        if rng.gen_bool(0.5) {
            l = -l;
        }
        if w.last() != Some(&-l) {
            w.push(l);
        }
    }
    w
}

/// Battery sequences for `radius`; empty for groups without length-divergent
/// sequences of the supported shapes.
pub fn sequence_battery(
    group: &Group,
    kinds: &[SequenceKind],
    radius: u64,
    rng: &mut dyn RngCore,
) -> Vec<(SequenceKind, Vec<Element>)> {
    let radius = radius.max(1);
    let mut out = Vec::new();
    for &kind in kinds {
        let lens = lengths(kind, radius, rng);
        let max = *lens.last().unwrap_or(&0) as usize;
        let rank = match group.kind() {
            GroupKind::Free { rank } => *rank,
            _ => 1,
        };
        let word = random_reduced_word(rank, max, rng);
        let seq: Option<Vec<Element>> = lens
            .iter()
            .enumerate()
            .map(|(i, &l)| element_of_length(group, kind, i, l, &word, rng))
            .collect();
        if let Some(seq) = seq {
            out.push((kind, seq));
        }
    }
    out
}

/// Clopen sets probed by the invariant-core condition: every cell at levels
/// 1 to 3 (at most 64 per level), a few random unions, the designated sets
/// of the system and the whole space.
pub fn clopen_battery(sys: &dyn Flow, rng: &mut dyn RngCore) -> Result<Vec<ClopenSet>> {
    let mut out: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut sets = Vec::new();
    let mut push = |set: ClopenSet, sets: &mut Vec<ClopenSet>| {
        let key = serde_json::to_vec(&set).unwrap_or_default();
        if out.insert(key) {
            sets.push(set);
        }
    };
    push(ClopenSet::full(), &mut sets);
    let top = sys.depth().min(3);
    for level in 1..=top {
        let cells = match sys.cells(level) {
            Ok(c) => c,
            Err(crate::Error::Budget(_)) => break,
            Err(e) => return Err(e),
        };
        for cell in cells.iter().take(64) {
            push(ClopenSet::cylinder(cell.clone()).normalize(sys)?, &mut sets);
        }
        if level == top.min(2) && cells.len() > 2 {
            for _ in 0..4 {
                let size = rng.gen_range(1..cells.len());
                let chosen: Vec<_> =
                    cells.choose_multiple(rng, size).map(|c| c.key.clone()).collect();
                push(ClopenSet::from_cells(sys, level, chosen)?, &mut sets);
            }
        }
    }
    for set in sys.designated_clopens() {
        push(set.normalize(sys)?, &mut sets);
    }
    Ok(sets)
}
