//! Poisson weights with a rigorous upper-tail stopping rule.

/// `log P(N = n)` for `N ~ Poisson(mean)`, `mean > 0`. For large `n` the
/// Stirling form keeps the two large terms from cancelling.
fn ln_pmf(mean: f64, n: usize) -> f64 {
    if n < 40 {
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        return n as f64 * mean.ln() - mean - fact.ln();
    }
    let x = n as f64;
    let x2 = x * x;
    let stirling_rest = 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x * x2 * x2);
    x * (mean / x).ln() + (x - mean) - stirling_rest
}

/// `P(N = n)` for `N ~ Poisson(mean)`.
pub(crate) fn pmf(mean: f64, n: usize) -> f64 {
    if mean == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    ln_pmf(mean, n).exp()
}

/// Weights `p_0..=p_N` of `Poisson(mean)`, with `N` the smallest index that
/// is at least `min_terms` and for which the tail bound
/// `p_{N+1} / (1 - mean/(N+2))` falls below `tol`.
pub(crate) fn truncated(mean: f64, tol: f64, min_terms: usize) -> Vec<f64> {
    if mean == 0.0 {
        let mut w = vec![0.0; min_terms + 1];
        w[0] = 1.0;
        return w;
    }
    let mut weights = Vec::new();
    let mut n = 0usize;
    loop {
        weights.push(pmf(mean, n));
        if n >= min_terms && tail_bound(mean, n) < tol {
            return weights;
        }
        n += 1;
    }
}

/// Upper bound on the mass beyond the returned weights.
pub(crate) fn tail_bound(mean: f64, n_max: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let next = n_max + 1;
    if (next as f64 + 1.0) <= mean {
        return 1.0;
    }
    pmf(mean, next) / (1.0 - mean / (next as f64 + 1.0))
}
