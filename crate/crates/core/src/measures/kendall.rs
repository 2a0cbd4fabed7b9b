use crate::error::{Error, Result};
use crate::graph::{degrees, pairs_with_degrees, DegreeTable, DependencyType, DirectedGraph, PairSeries};

use super::{Measure, MeasureValue};

/// Numbers of strictly concordant and strictly discordant pairs.
///
/// Sorts by `(x, y)` and counts strict inversions of `y` with a bottom-up
/// merge sort, so the whole computation is `O(m log m)`. Within a run of
/// equal `x` the `y` values are already sorted and contribute no inversions,
/// so the inversion count is exactly the discordant count. Concordant pairs
/// follow from `C(m,2) − (T_x + T_y − T_xy) − N_d`.
pub fn concordance_counts(p: &PairSeries) -> (u64, u64) {
    let mut pairs = p.pairs.clone();
    pairs.sort_unstable();

    let tied_x = tied_pairs(&pairs, |a, b| a.0 == b.0);
    let tied_xy = tied_pairs(&pairs, |a, b| a == b);

    let mut ys: Vec<u64> = pairs.iter().map(|p| p.1).collect();
    let discordant = count_inversions(&mut ys);
    // ys is now sorted
    let tied_y = tied_pairs(&ys, |a, b| a == b);

    let m = pairs.len() as u64;
    let total = m * m.saturating_sub(1) / 2;
    let concordant = total - (tied_x + tied_y - tied_xy) - discordant;
    (concordant, discordant)
}

/// Pairs within runs of equal elements of a sorted slice.
fn tied_pairs<T>(sorted: &[T], same: impl Fn(&T, &T) -> bool) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if same(&w[0], &w[1]) {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Sorts `v` ascending and returns the number of pairs `i < j` with
/// `v[i] > v[j]`.
fn count_inversions(v: &mut [u64]) -> u64 {
    let n = v.len();
    let mut buf = vec![0u64; n];
    let mut inversions = 0u64;
    let mut width = 1;
    while width < n {
        let mut lo = 0;
        while lo < n {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if v[j] < v[i] {
                    buf[k] = v[j];
                    inversions += (mid - i) as u64;
                    j += 1;
                } else {
                    buf[k] = v[i];
                    i += 1;
                }
                k += 1;
            }
            buf[k..k + (mid - i)].copy_from_slice(&v[i..mid]);
            k += mid - i;
            buf[k..k + (hi - j)].copy_from_slice(&v[j..hi]);
            lo = hi;
        }
        v.copy_from_slice(&buf);
        width *= 2;
    }
    inversions
}

/// Kendall's tau-a: `2 (N_c − N_d) / (m (m − 1))`, no tie correction.
pub fn kendall_tau(g: &DirectedGraph, t: DependencyType) -> Result<MeasureValue> {
    kendall_with(g, &degrees(g), t)
}

pub(crate) fn kendall_with(g: &DirectedGraph, d: &DegreeTable, t: DependencyType) -> Result<MeasureValue> {
    let m = g.edge_count();
    match m {
        0 => return Err(Error::EmptyGraph),
        1 => return Err(Error::DegenerateSize { edges: 1 }),
        _ => {}
    }
    let (nc, nd) = concordance_counts(&pairs_with_degrees(g, d, t));
    let m = m as f64;
    let tau = 2.0 * (nc as f64 - nd as f64) / (m * (m - 1.0));
    Ok(MeasureValue::new(tau, Measure::Kendall, t))
}
