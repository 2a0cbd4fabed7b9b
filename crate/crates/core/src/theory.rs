//! Closed forms for the bridge families, limit constants, the vanishing
//! regions for Pearson's r, and empirical scaling of degree moment sums.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{vertex_moment_sum, DegreeKind, DegreeTable, DependencyType};
use crate::seeds;

/// Tail indices `(γ₊, γ₋)` of the out- and in-degree distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPair {
    pub gamma_out: f64,
    pub gamma_in: f64,
}

impl GammaPair {
    pub fn new(gamma_out: f64, gamma_in: f64) -> Result<Self> {
        if !(gamma_out > 0.0 && gamma_in > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tail indices must be positive, got ({gamma_out}, {gamma_in})"
            )));
        }
        Ok(Self { gamma_out, gamma_in })
    }
}

/// Growth exponent of `Σ_v out(v)^p in(v)^q`: `max(p/γ₊, q/γ₋, 1)`.
pub fn scaling_exponent(p: f64, q: f64, g: GammaPair) -> f64 {
    (p / g.gamma_out).max(q / g.gamma_in).max(1.0)
}

/// Growth exponents of the four sums controlling Pearson's r:
/// `a ~ (Σ D⁺D^α)²/|E|`, `b ~ (Σ D⁻D^β)²/|E|`, `c ~ Σ D⁺(D^α)²`,
/// `d ~ Σ D⁻(D^β)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitExponents {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl LimitExponents {
    /// Whether the variance terms outgrow the squared means on both sides,
    /// with strict growth on at least one.
    pub fn predicts_vanishing(&self) -> bool {
        (self.a < self.c && self.b <= self.d) || (self.a <= self.c && self.b < self.d)
    }
}

/// Exponents `(p, q)` of `out^p · in^q` for `D^s · D^kind^power`.
fn exps(base: DegreeKind, kind: DegreeKind, power: u32) -> (f64, f64) {
    let mut pq = match base {
        DegreeKind::Out => (1.0, 0.0),
        DegreeKind::In => (0.0, 1.0),
    };
    match kind {
        DegreeKind::Out => pq.0 += power as f64,
        DegreeKind::In => pq.1 += power as f64,
    }
    pq
}

pub fn limit_exponents(t: DependencyType, g: GammaPair) -> LimitExponents {
    let s = |(p, q): (f64, f64)| scaling_exponent(p, q, g);
    LimitExponents {
        a: 2.0 * s(exps(DegreeKind::Out, t.source, 1)) - s((1.0, 0.0)),
        b: 2.0 * s(exps(DegreeKind::In, t.target, 1)) - s((0.0, 1.0)),
        c: s(exps(DegreeKind::Out, t.source, 2)),
        d: s(exps(DegreeKind::In, t.target, 2)),
    }
}

/// Whether Pearson's r of type `t` is predicted to vanish, with `x = γ₊`
/// and `y = γ₋`. All boundaries are excluded.
pub fn region_contains(t: DependencyType, g: GammaPair) -> bool {
    let (x, y) = (g.gamma_out, g.gamma_in);
    let open = |v: f64, hi: f64| v > 1.0 && v < hi;
    match (t.source, t.target) {
        (DegreeKind::In, DegreeKind::Out) => (open(x, 2.0) && y > 1.0) || (open(y, 2.0) && x > 1.0),
        (DegreeKind::Out, DegreeKind::In) => (open(x, 3.0) && y > 1.0) || (open(y, 3.0) && x > 1.0),
        (DegreeKind::Out, DegreeKind::Out) => open(x, 3.0) && y > 1.0,
        (DegreeKind::In, DegreeKind::In) => open(y, 3.0) && x > 1.0,
    }
}

fn check_family(n: u64, a: u64) {
    assert!(n >= 1 && a >= 1, "bridge family needs n, a >= 1 (got n={n}, a={a})");
}

fn ratio(num: i128, rad_x: i128, rad_y: i128) -> f64 {
    num as f64 / ((rad_x as f64).sqrt() * (rad_y as f64).sqrt())
}

/// In/Out Pearson's r of `G(n, an)`.
pub fn closed_form_pearson_bridge(n: u64, a: u64) -> f64 {
    check_family(n, a);
    let (n, a) = (n as i128, a as i128);
    let num = a * (1 + a) * n.pow(3) - (a * a + a + 1) * n * n;
    ratio(num, (1 + a) * n.pow(3) - (n - 1) * a * n, a * a * (1 + a) * n.pow(3) - (a * n - 1) * n)
}

/// In/Out Pearson's r of the disconnected bridge `Ĝ(n, an)`.
pub fn closed_form_pearson_disconnected_bridge(n: u64, a: u64) -> f64 {
    check_family(n, a);
    let (n, a) = (n as i128, a as i128);
    let m = (a + 1) * n + 2;
    let s = (a + 1) * n + 1;
    let num = m * (a + 1) * n - s * s;
    ratio(num, m * (n * n + a * n + 1) - s * s, m * (n + a * a * n * n + 1) - s * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BridgeVariant {
    Connected,
    Disconnected,
}

/// Exact integer parts `(numerator, σ̄²_source, σ̄²_target)` of the In/Out
/// average-rank Spearman's rho on the bridge family, in the units of
/// [`crate::measures::SpearmanAverageParts`].
///
/// For `n = 1` the hub degrees coincide with leaf degrees and tie groups
/// merge, which changes the polynomials.
pub fn spearman_bridge_parts(n: u64, a: u64, variant: BridgeVariant) -> (i128, i128, i128) {
    check_family(n, a);
    let (n, a) = (n as i128, a as i128);
    match (variant, n, a) {
        (BridgeVariant::Connected, 1, 1) => (-3, 6, 6),
        (BridgeVariant::Connected, 1, a) => (-(a - 1) * (a + 2), (a + 1) * (a + 2), 2 * (a + 1) * (a + 1)),
        (BridgeVariant::Connected, n, a) => {
            let sigma = n * (a + 1) * (n + 1) * (a * n + 1);
            let num = -(a * a + a) * n.pow(3) + (a + 1).pow(2) * n * n + (a + 1) * n;
            (num, sigma, sigma)
        }
        (BridgeVariant::Disconnected, 1, 1) => (-4, 12, 12),
        (BridgeVariant::Disconnected, 1, a) => (-(a - 1) * (a + 3), (a + 2) * (a + 3), 3 * (a + 1) * (a + 2)),
        (BridgeVariant::Disconnected, n, a) => {
            let c3 = a * a + a;
            let num = -c3 * n.pow(3) + (a * a + 1) * n * n + (a + 1) * n - 2;
            let sx = c3 * n.pow(3) + (a * a + 4 * a + 2) * n * n + (3 * a + 4) * n + 2;
            let sy = c3 * n.pow(3) + (2 * a * a + 4 * a + 1) * n * n + (4 * a + 3) * n + 2;
            (num, sx, sy)
        }
    }
}

/// In/Out average-rank Spearman's rho of `G(n, an)` or `Ĝ(n, an)`.
pub fn closed_form_spearman_bridge(n: u64, a: u64, variant: BridgeVariant) -> f64 {
    let (num, sx, sy) = spearman_bridge_parts(n, a, variant);
    ratio(num, sx, sy)
}

/// `σ̄_source · σ̄_target` of `G(n, an)` for `n ≥ 2`.
pub fn bridge_sigma_product(n: u64, a: u64) -> f64 {
    let (n, a) = (n as f64, a as f64);
    (a * a + a) * n.powi(3) + (a + 1.0).powi(2) * n * n + (a + 1.0) * n
}

/// Deterministic tie orderings on the target side of `G(n, an)`; the source
/// side is always ordered by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieOrdering {
    ByIndex,
    ByReverseIndex,
}

/// In/Out Spearman's rho of `G(n, an)` under a deterministic tie ordering.
pub fn closed_form_spearman_ranked(n: u64, a: u64, ordering: TieOrdering) -> f64 {
    check_family(n, a);
    let (n, a) = (n as i128, a as i128);
    match ordering {
        TieOrdering::ByIndex => {
            let tail = 3 * (a + 1).pow(2) * n * n + 2 * (a + 1) * n;
            let num = (a.pow(3) - 3 * a * a - 3 * a + 1) * n.pow(3) + tail;
            let den = (a + 1).pow(3) * n.pow(3) + tail;
            num as f64 / den as f64
        }
        TieOrdering::ByReverseIndex if n == 1 && a == 1 => -0.5,
        TieOrdering::ByReverseIndex => -(((a + 1) * n - 4) as f64) / ((a + 1) * n + 2) as f64,
    }
}

/// Large-`n` limit of [`closed_form_spearman_ranked`].
pub fn spearman_ranked_limit(a: f64, ordering: TieOrdering) -> f64 {
    match ordering {
        TieOrdering::ByIndex => (a.powi(3) - 3.0 * a * a - 3.0 * a + 1.0) / (a + 1.0).powi(3),
        TieOrdering::ByReverseIndex => -1.0,
    }
}

/// Exact `(N_c, N_d)` of the In/Out edge pairs of the bridge family.
pub fn bridge_concordance_counts(n: u64, a: u64, variant: BridgeVariant) -> (u64, u64) {
    check_family(n, a);
    let extra = (variant == BridgeVariant::Disconnected) as u64;
    if n == 1 {
        ((a > 1) as u64, a)
    } else {
        ((a + 1) * n, a * n * n + extra)
    }
}

/// In/Out Kendall's tau-a of `G(n, an)` or `Ĝ(n, an)`.
pub fn closed_form_tau_bridge(n: u64, a: u64, variant: BridgeVariant) -> f64 {
    let (nc, nd) = bridge_concordance_counts(n, a, variant);
    let m = ((a + 1) * n + 1 + (variant == BridgeVariant::Disconnected) as u64) as f64;
    2.0 * (nc as f64 - nd as f64) / (m * (m - 1.0))
}

/// Large-`n` limit of the expected random-tie Spearman's rho and of
/// Kendall's tau on `G(n, an)`: `−2a / (a+1)²`.
pub fn rho_expectation_limit(a: f64) -> f64 {
    -2.0 * a / ((a + 1.0) * (a + 1.0))
}

/// `f(x) = (1 + a x) / (√(1 + x) √(1 + a² x))`, the limit of r on a random
/// bridge collection as a function of the ratio of the two stable sums.
pub fn support_function_f(x: f64, a: f64) -> f64 {
    (1.0 + a * x) / ((1.0 + x).sqrt() * (1.0 + a * a * x).sqrt())
}

pub fn argmin_f(a: f64) -> f64 {
    1.0 / a
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_minimize(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo + hi) / 2.0
}

/// Result of choosing `a` so that the support of the limit is `[ε, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonTuning {
    pub epsilon: f64,
    /// Root `a ≥ 1` of `f(1/a, a) = 2√a/(1+a) = ε`, by bisection.
    pub a: f64,
    /// `(2 − ε² ± √(1−ε)) / ε²` as an alternative candidate pair.
    pub printed_plus: f64,
    pub printed_minus: f64,
    pub plus_matches: bool,
    pub minus_matches: bool,
}

pub fn tune_support_minimum(epsilon: f64) -> Result<EpsilonTuning> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    let g = |a: f64| support_function_f(argmin_f(a), a) - epsilon;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    while (hi - lo) > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = 0.5 * (lo + hi);
    let e2 = epsilon * epsilon;
    let printed_plus = (2.0 - e2 + (1.0 - epsilon).sqrt()) / e2;
    let printed_minus = (2.0 - e2 - (1.0 - epsilon).sqrt()) / e2;
    let matches = |cand: f64| cand > 0.0 && (support_function_f(argmin_f(cand), cand) - epsilon).abs() < 1e-6;
    Ok(EpsilonTuning {
        epsilon,
        a,
        printed_plus,
        printed_minus,
        plus_matches: matches(printed_plus),
        minus_matches: matches(printed_minus),
    })
}

/// Configuration of an empirical growth-rate study of `Σ out^p in^q`.
#[derive(Debug, Clone)]
pub struct ScalingStudy {
    pub sizes: Vec<usize>,
    pub repetitions: usize,
    pub seed: u64,
    pub exponents: Vec<(f64, f64)>,
    pub gammas: GammaPair,
}

/// One `(n, p, q)` row; `fitted_slope` is shared by all rows of a `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    /// Median of the sum over repetitions.
    pub sum: f64,
    pub predicted_exponent: f64,
    pub fitted_slope: f64,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

/// Least-squares slope of `y` on `x`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Regresses `log median Σ out^p in^q` on `log n` for every `(p, q)`.
///
/// `generator(n, seed)` returns an `(out, in)` degree sequence of length `n`.
/// Repetition `r` at size index `i` uses seed `derive(derive(seed, i), r)`.
pub fn scaling_study<F>(generator: F, study: &ScalingStudy) -> Result<Vec<ScalingRow>>
where
    F: Fn(usize, u64) -> Result<Vec<(u64, u64)>> + Sync,
{
    if study.sizes.len() < 3 {
        return Err(Error::InvalidParameter("scaling study needs at least 3 sizes".into()));
    }
    if study.repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be positive".into()));
    }
    let jobs: Vec<(usize, u64)> = (0..study.sizes.len())
        .flat_map(|i| (0..study.repetitions as u64).map(move |r| (i, r)))
        .collect();
    let sums: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|&(i, r)| -> Result<Vec<f64>> {
            let pairs = generator(study.sizes[i], seeds::derive(seeds::derive(study.seed, i as u64), r))?;
            let d = DegreeTable {
                out_degree: pairs.iter().map(|p| p.0).collect(),
                in_degree: pairs.iter().map(|p| p.1).collect(),
            };
            Ok(study.exponents.iter().map(|&(p, q)| vertex_moment_sum(&d, p, q)).collect())
        })
        .collect::<Result<_>>()?;

    let log_n: Vec<f64> = study.sizes.iter().map(|&n| (n as f64).ln()).collect();
    let mut rows = Vec::with_capacity(study.sizes.len() * study.exponents.len());
    for (e, &(p, q)) in study.exponents.iter().enumerate() {
        let medians: Vec<f64> = (0..study.sizes.len())
            .map(|i| {
                let mut v: Vec<f64> = (0..study.repetitions).map(|r| sums[i * study.repetitions + r][e]).collect();
                median(&mut v)
            })
            .collect();
        let log_s: Vec<f64> = medians.iter().map(|s| s.ln()).collect();
        let slope = fit_slope(&log_n, &log_s);
        let predicted = scaling_exponent(p, q, study.gammas);
        for (i, &n) in study.sizes.iter().enumerate() {
            rows.push(ScalingRow {
                n,
                p,
                q,
                sum: medians[i],
                predicted_exponent: predicted,
                fitted_slope: slope,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn scaling_exponent_examples() {
        assert!(close(scaling_exponent(3.0, 0.0, GammaPair::new(2.5, 2.0).unwrap()), 1.2, 1e-15));
        assert_eq!(scaling_exponent(1.0, 1.0, GammaPair::new(3.0, 3.0).unwrap()), 1.0);
        assert!(close(scaling_exponent(2.0, 2.0, GammaPair::new(1.5, 4.0).unwrap()), 4.0 / 3.0, 1e-15));
        assert!(GammaPair::new(0.0, 1.0).is_err());
    }

    #[test]
    fn in_out_constants() {
        let e = limit_exponents(DependencyType::IN_OUT, GammaPair::new(1.5, 1.5).unwrap());
        assert!(close(e.a, 1.0, 1e-15) && close(e.b, 1.0, 1e-15));
        assert!(close(e.c, 4.0 / 3.0, 1e-15) && close(e.d, 4.0 / 3.0, 1e-15));
        let e = limit_exponents(DependencyType::IN_OUT, GammaPair::new(3.0, 1.5).unwrap());
        assert_eq!((e.a, e.b, e.d), (1.0, 1.0, 1.0));
        assert!(close(e.c, 4.0 / 3.0, 1e-15));
        let e = limit_exponents(DependencyType::OUT_OUT, GammaPair::new(2.0, 5.0).unwrap());
        assert_eq!((e.a, e.c), (1.0, 1.5));
    }

    #[test]
    fn region_examples() {
        let g = |x, y| GammaPair::new(x, y).unwrap();
        assert!(DependencyType::ALL.iter().all(|&t| region_contains(t, g(1.5, 1.5))));
        assert!(DependencyType::ALL.iter().all(|&t| !region_contains(t, g(3.5, 3.5))));
        assert!(region_contains(DependencyType::OUT_IN, g(2.5, 4.0)));
        assert!(region_contains(DependencyType::OUT_OUT, g(2.5, 4.0)));
        assert!(!region_contains(DependencyType::IN_IN, g(2.5, 4.0)));
        assert!(!region_contains(DependencyType::IN_OUT, g(2.5, 4.0)));
        // boundaries are open
        assert!(!region_contains(DependencyType::OUT_OUT, g(3.0, 2.0)));
        assert!(!region_contains(DependencyType::IN_OUT, g(2.0, 2.0)));
    }

    #[test]
    fn pearson_forms() {
        assert!(close(closed_form_pearson_bridge(2, 1), 2.0 / 7.0, 1e-15));
        assert!(close(closed_form_pearson_bridge(3, 2), 99.0 / (69f64 * 309.0).sqrt(), 1e-15));
        assert!(closed_form_pearson_bridge(1_000_000, 1) >= 0.999999 - 1e-6);
        assert!(closed_form_pearson_disconnected_bridge(100_000, 1).abs() < 0.01);
    }

    #[test]
    fn spearman_forms() {
        assert!(close(closed_form_spearman_bridge(2, 1, BridgeVariant::Connected), 1.0 / 9.0, 1e-15));
        assert!(close(closed_form_spearman_bridge(2, 1, BridgeVariant::Disconnected), -0.1, 1e-15));
        assert!(close(closed_form_spearman_bridge(10_000, 3, BridgeVariant::Connected), -1.0, 1e-3));
        for n in 2..20 {
            for a in 1..5 {
                let (_, sx, sy) = spearman_bridge_parts(n, a, BridgeVariant::Connected);
                assert!(close((sx as f64 * sy as f64).sqrt(), bridge_sigma_product(n, a), 1e-6));
            }
        }
    }

    #[test]
    fn ranked_forms() {
        assert!(close(closed_form_spearman_ranked(2, 1, TieOrdering::ByIndex), 0.2, 1e-15));
        assert_eq!(closed_form_spearman_ranked(2, 1, TieOrdering::ByReverseIndex), 0.0);
        assert!(close(spearman_ranked_limit(4.0, TieOrdering::ByIndex), 0.04, 1e-15));
        assert!(close(closed_form_spearman_ranked(100_000, 4, TieOrdering::ByIndex), 0.04, 1e-4));
    }

    #[test]
    fn tau_forms() {
        assert_eq!(closed_form_tau_bridge(2, 1, BridgeVariant::Connected), 0.0);
        assert!(close(closed_form_tau_bridge(2, 2, BridgeVariant::Connected), -2.0 / 21.0, 1e-15));
        assert!(close(closed_form_tau_bridge(1000, 1, BridgeVariant::Connected), -0.5, 0.002));
        assert!(close(closed_form_tau_bridge(1000, 1, BridgeVariant::Disconnected), -0.5, 0.002));
    }

    #[test]
    fn limits() {
        assert_eq!(rho_expectation_limit(1.0), -0.5);
        assert!(close(rho_expectation_limit(4.0), -8.0 / 25.0, 1e-15));
        assert!(rho_expectation_limit(1e9).abs() < 1e-8);
    }

    #[test]
    fn support_function() {
        assert!(close(support_function_f(1.0, 1.0), 1.0, 1e-15));
        assert!(close(support_function_f(1e-12, 3.0), 1.0, 1e-9));
        assert!(close(support_function_f(1e12, 3.0), 1.0, 1e-9));
        let x = golden_section_minimize(|x| support_function_f(x, 3.0), 1e-9, 10.0, 1e-10);
        assert!(close(x, argmin_f(3.0), 1e-6), "{x}");
        assert!(close(support_function_f(argmin_f(3.0), 3.0), 3f64.sqrt() / 2.0, 1e-15));
    }

    #[test]
    fn epsilon_tuning() {
        let t = tune_support_minimum(0.5).unwrap();
        assert!(close(support_function_f(1.0 / t.a, t.a), 0.5, 1e-9));
        let exact = (2.0 - 0.25 + 2.0 * (0.75f64).sqrt()) / 0.25;
        assert!(close(t.a, exact, 1e-8 * exact));
        assert!(!t.plus_matches && !t.minus_matches);
        assert!(close(tune_support_minimum(1.0).unwrap().a, 1.0, 1e-9));
        assert!(tune_support_minimum(0.0).is_err());
    }

    #[test]
    fn slope_of_a_line() {
        assert!(close(fit_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]), 2.0, 1e-15));
    }

    proptest! {
        #[test]
        fn variance_terms_dominate(x in 1.0001f64..6.0, y in 1.0001f64..6.0) {
            let g = GammaPair::new(x, y).unwrap();
            for t in DependencyType::ALL {
                let e = limit_exponents(t, g);
                prop_assert!(e.c >= e.a - 1e-12 && e.d >= e.b - 1e-12);
            }
        }
    }
}
