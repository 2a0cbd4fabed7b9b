use rand::Rng as _;

use crate::seeds;

/// How tied values are ordered when ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiePolicy {
    /// Ties broken by i.i.d. uniform keys drawn from the seed.
    UniformRandom(u64),
    /// Among ties, a later position ranks higher (smaller rank number).
    ByIndex,
    /// Among ties, an earlier position ranks higher.
    ByReverseIndex,
    /// Tied values share their mean rank.
    Average,
}

/// Descending ranks (rank 1 = largest value), stored as twice the rank so
/// half-integer average ranks stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankVector {
    doubled: Vec<u64>,
}

impl RankVector {
    pub fn len(&self) -> usize {
        self.doubled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doubled.is_empty()
    }

    /// `2 · rank` of every entry.
    pub fn doubled(&self) -> &[u64] {
        &self.doubled
    }

    pub fn get(&self, i: usize) -> f64 {
        self.doubled[i] as f64 / 2.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.doubled.iter().map(|&d| d as f64 / 2.0).collect()
    }
}

/// Ranks `values` in descending order, resolving ties with `policy`.
///
/// `Average` gives `|{j : x_j > x_i}| + (|{j : x_j = x_i}| + 1) / 2`; every
/// other policy gives a permutation of `1..=n`. Random keys come from the
/// source-side stream of the seed.
pub fn rank_with_ties<T: Ord>(values: &[T], policy: TiePolicy) -> RankVector {
    match policy {
        TiePolicy::Average => average_ranks(values),
        TiePolicy::ByIndex => ordinal_ranks(values, |i| i as u64),
        TiePolicy::ByReverseIndex => ordinal_ranks(values, |i| u64::MAX - i as u64),
        TiePolicy::UniformRandom(seed) => uniform_ranks(values, seed, seeds::SOURCE_STREAM),
    }
}

pub(crate) fn uniform_ranks<T: Ord>(values: &[T], seed: u64, stream: u64) -> RankVector {
    let mut rng = seeds::rng(seed, stream);
    let keys: Vec<u64> = (0..values.len()).map(|_| rng.random()).collect();
    ordinal_ranks(values, |i| keys[i])
}

/// Sorts positions by `(value, key)` descending; the position in that order
/// is the rank. Equal keys (possible only for random keys) fall back to the
/// position itself.
fn ordinal_ranks<T: Ord>(values: &[T], key: impl Fn(usize) -> u64) -> RankVector {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        values[b]
            .cmp(&values[a])
            .then_with(|| key(b).cmp(&key(a)))
            .then_with(|| b.cmp(&a))
    });
    let mut doubled = vec![0u64; values.len()];
    for (pos, &i) in order.iter().enumerate() {
        doubled[i] = 2 * (pos as u64 + 1);
    }
    RankVector { doubled }
}

fn average_ranks<T: Ord>(values: &[T]) -> RankVector {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&a, &b| values[b].cmp(&values[a]));
    let mut doubled = vec![0u64; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // 2 * (greater + (count + 1) / 2)
        let d = 2 * start as u64 + (end - start) as u64 + 1;
        for &i in &order[start..end] {
            doubled[i] = d;
        }
        start = end;
    }
    RankVector { doubled }
}
