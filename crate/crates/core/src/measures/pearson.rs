use crate::error::{Error, Result, Side};
use crate::graph::{degrees, DegreeKind, DegreeTable, DependencyType, DirectedGraph, PairSeries};

use super::{Measure, MeasureValue};

fn overflow() -> Error {
    Error::InvalidParameter("degree sums exceed 128-bit range".into())
}

/// `Σ_v D^weight(v) · D^kind(v)^power`, exactly.
fn weighted_sum(d: &DegreeTable, weight: DegreeKind, kind: DegreeKind, power: u32) -> Result<u128> {
    d.of_kind(weight)
        .iter()
        .zip(d.of_kind(kind))
        .try_fold(0u128, |acc, (&w, &x)| {
            (x as u128)
                .checked_pow(power)
                .and_then(|p| p.checked_mul(w as u128))
                .and_then(|t| acc.checked_add(t))
        })
        .ok_or_else(overflow)
}

/// `|E| · Σ_v D^α(v) D^β(v)² − (Σ_v D^α(v) D^β(v))²`, which is never negative
/// and is zero exactly when all nodes with positive `D^α` share one `D^β`.
///
/// With `alpha = Out` this is `|E|²` times the variance of the source-side
/// series `D^β(e_*)`; with `alpha = In`, of the target-side series.
pub fn variance_gap(d: &DegreeTable, alpha: DegreeKind, beta: DegreeKind) -> u128 {
    gap(d, alpha, beta).expect("degree sums exceed 128-bit range")
}

fn gap(d: &DegreeTable, alpha: DegreeKind, beta: DegreeKind) -> Result<u128> {
    let m = d.edge_count() as u128;
    let s1 = weighted_sum(d, alpha, beta, 1)?;
    let s2 = weighted_sum(d, alpha, beta, 2)?;
    let lhs = m.checked_mul(s2).ok_or_else(overflow)?;
    let rhs = s1.checked_mul(s1).ok_or_else(overflow)?;
    Ok(lhs - rhs)
}

/// Pearson's α-β correlation coefficient of the degrees at both ends of an edge.
///
/// Uses the vertex-sum form: every sum is an exact integer and the only
/// floating-point step is the final ratio.
pub fn pearson(g: &DirectedGraph, t: DependencyType) -> Result<MeasureValue> {
    pearson_with(g, &degrees(g), t)
}

pub(crate) fn pearson_with(g: &DirectedGraph, d: &DegreeTable, t: DependencyType) -> Result<MeasureValue> {
    let m = g.edge_count() as u128;
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    let var_source = gap(d, DegreeKind::Out, t.source)?;
    if var_source == 0 {
        return Err(Error::ZeroVariance(Side::Source(t.source)));
    }
    let var_target = gap(d, DegreeKind::In, t.target)?;
    if var_target == 0 {
        return Err(Error::ZeroVariance(Side::Target(t.target)));
    }

    let src = d.of_kind(t.source);
    let dst = d.of_kind(t.target);
    let joint = g
        .edges()
        .iter()
        .try_fold(0u128, |acc, &(s, e)| {
            acc.checked_add(src[s as usize] as u128 * dst[e as usize] as u128)
        })
        .ok_or_else(overflow)?;
    let sum_source = weighted_sum(d, DegreeKind::Out, t.source, 1)?;
    let sum_target = weighted_sum(d, DegreeKind::In, t.target, 1)?;

    let lhs = m.checked_mul(joint).ok_or_else(overflow)?;
    let rhs = sum_source.checked_mul(sum_target).ok_or_else(overflow)?;
    let cov = if lhs >= rhs {
        (lhs - rhs) as f64
    } else {
        -((rhs - lhs) as f64)
    };
    let r = cov / ((var_source as f64).sqrt() * (var_target as f64).sqrt());
    Ok(MeasureValue::new(r, Measure::Pearson, t))
}

/// Pearson's r computed directly from the per-edge series with means and
/// variances in `f64`. Independent of the vertex-sum route used by [`pearson`].
pub fn pearson_edge_form(p: &PairSeries) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let m = p.len() as f64;
    let mx = p.pairs.iter().map(|&(x, _)| x as f64).sum::<f64>() / m;
    let my = p.pairs.iter().map(|&(_, y)| y as f64).sum::<f64>() / m;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(x, y) in &p.pairs {
        let (dx, dy) = (x as f64 - mx, y as f64 - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance(Side::Source(DegreeKind::Out)));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance(Side::Target(DegreeKind::In)));
    }
    Ok(sxy / (sxx.sqrt() * syy.sqrt()))
}
