//! Heat kernel of the walk by uniformization, and the information statistics
//! built on it.
//!
//! `f_t = sum_n P(N_t = n) mu^{*n}` with `N_t ~ Poisson(t)`. The series is cut
//! at the first `N` whose Poisson tail is provably below the requested
//! tolerance; the dropped mass is kept as the pmf's `deficit`. On finite
//! groups the series also runs at least to the Cayley diameter, so every
//! reachable element carries positive mass and log-ratios stay finite.

use indexmap::IndexMap;

use crate::group::{Element, GroupSpec};
use crate::measure::RateMeasure;
use crate::{poisson, Error, Result};

pub const DEFAULT_KERNEL_TOL: f64 = 1e-12;
/// Largest tolerance accepted by [`heat_kernel`].
pub const MAX_KERNEL_TOL: f64 = 1e-6;
pub const DEFAULT_WEIGHT_FLOOR: f64 = 1e-14;
/// On infinite groups the series runs until no element with an untracked
/// neighbour carries more than this, which keeps log-ratios finite for any
/// weight floor above it.
pub const FRONTIER_MASS: f64 = 1e-16;
/// [`info_stats`] refuses pmfs with more untracked mass than this.
pub const MAX_STATS_DEFICIT: f64 = 1e-8;

/// Sparse probability mass function with an explicit untracked tail.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    weights: IndexMap<Element, f64>,
    deficit: f64,
}

impl Pmf {
    pub fn point_mass(x: Element) -> Self {
        let mut weights = IndexMap::new();
        weights.insert(x, 1.0);
        Self { weights, deficit: 0.0 }
    }

    /// Wraps explicit weights; the deficit is whatever mass is missing.
    pub fn from_weights(weights: IndexMap<Element, f64>) -> Result<Self> {
        if let Some((x, w)) = weights.iter().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Domain(format!("weight {w} at {x:?} is not a probability")));
        }
        let total: f64 = weights.values().sum();
        if total > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("weights sum to {total} > 1")));
        }
        Ok(Self { weights, deficit: (1.0 - total).max(0.0) })
    }

    pub fn get(&self, x: &Element) -> f64 {
        self.weights.get(x).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, f64)> + '_ {
        self.weights.iter().map(|(x, &w)| (x, w))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn deficit(&self) -> f64 {
        self.deficit
    }

    pub fn tracked_mass(&self) -> f64 {
        self.weights.values().sum()
    }

    /// `E[h(X)]` over the tracked mass.
    pub fn expect(&self, mut h: impl FnMut(&Element) -> f64) -> f64 {
        self.weights.iter().filter(|(_, &w)| w > 0.0).map(|(x, &w)| w * h(x)).sum()
    }

    /// Total-variation distance over the tracked supports.
    pub fn total_variation(&self, other: &Pmf) -> f64 {
        let mut s: f64 = self.iter().map(|(x, w)| (w - other.get(x)).abs()).sum();
        s += other.iter().filter(|(x, _)| !self.weights.contains_key(*x)).map(|(_, w)| w).sum::<f64>();
        0.5 * s
    }
}

/// Group convolution `(p*q)(x) = sum_z p(x z^-1) q(z)`.
pub fn convolve(p: &Pmf, q: &Pmf, g: &GroupSpec) -> Pmf {
    let mut out: IndexMap<Element, f64> = IndexMap::new();
    for (a, pa) in p.iter() {
        if pa == 0.0 {
            continue;
        }
        for (z, qz) in q.iter() {
            *out.entry(g.mul(a, z)).or_insert(0.0) += pa * qz;
        }
    }
    let total: f64 = out.values().sum();
    Pmf { weights: out, deficit: (1.0 - total).max(0.0) }
}

/// One jump: `(cur * mu)(x) = sum_z cur(x z^-1) mu(z)`.
pub(crate) fn step(cur: &IndexMap<Element, f64>, mu: &RateMeasure, g: &GroupSpec) -> IndexMap<Element, f64> {
    let mut next = IndexMap::with_capacity(cur.len() * 2);
    for (x, &px) in cur {
        for (z, r) in mu.iter() {
            *next.entry(g.mul(x, z)).or_insert(0.0) += px * r;
        }
    }
    next
}

/// Largest mass of an element with an untracked neighbour.
fn frontier_mass(acc: &IndexMap<Element, f64>, mu: &RateMeasure, g: &GroupSpec) -> f64 {
    acc.iter()
        .filter(|(x, _)| mu.support().any(|z| !acc.contains_key(&g.mul(x, z))))
        .map(|(_, &p)| p)
        .fold(0.0, f64::max)
}

/// Law of `X_t` started at the identity.
pub fn heat_kernel(g: &GroupSpec, mu: &RateMeasure, t: f64, tol: f64) -> Result<Pmf> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("time must be finite and non-negative, got {t}")));
    }
    if !(tol > 0.0 && tol <= MAX_KERNEL_TOL) {
        return Err(Error::Domain(format!("kernel tolerance {tol} outside (0, {MAX_KERNEL_TOL}]")));
    }
    if t == 0.0 {
        return Ok(Pmf::point_mass(g.identity()));
    }
    mu.require_normalized()?;
    let min_terms = if g.is_finite() { g.cayley_diameter(mu.support())?.diameter } else { 0 };

    let mut acc: IndexMap<Element, f64> = IndexMap::new();
    let mut cur: IndexMap<Element, f64> = IndexMap::new();
    cur.insert(g.identity(), 1.0);
    let mut n = 0;
    loop {
        let w = poisson::pmf(t, n);
        if w > 0.0 {
            for (x, &px) in &cur {
                *acc.entry(x.clone()).or_insert(0.0) += w * px;
            }
        }
        if n >= min_terms
            && poisson::tail_bound(t, n) < tol
            && (g.is_finite() || frontier_mass(&acc, mu, g) <= FRONTIER_MASS)
        {
            break;
        }
        cur = step(&cur, mu, g);
        n += 1;
    }
    if g.is_finite() {
        // fixed enumeration order, zeros for unreachable elements
        acc = g.enumerate()?.into_iter().map(|x| {
            let w = acc.get(&x).copied().unwrap_or(0.0);
            (x, w)
        }).collect();
    }
    let total: f64 = acc.values().sum();
    Ok(Pmf { weights: acc, deficit: (1.0 - total).max(0.0) })
}

/// Entropy, varentropy and quantiles of the information content `-log f(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoStats {
    /// In nats.
    pub entropy: f64,
    pub varentropy: f64,
    /// `(level, q)` with `q` the smallest information value whose cumulative
    /// probability reaches `level`.
    pub info_quantiles: Vec<(f64, f64)>,
    /// Untracked mass of the input; the statistics use the renormalized rest.
    pub deficit: f64,
}

pub const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

pub fn info_stats(p: &Pmf) -> Result<InfoStats> {
    if p.deficit >= MAX_STATS_DEFICIT {
        return Err(Error::Domain(format!(
            "deficit {} too large for information statistics (limit {MAX_STATS_DEFICIT})",
            p.deficit
        )));
    }
    let mass = p.tracked_mass();
    if !(mass > 0.0) {
        return Err(Error::Domain("empty pmf".into()));
    }
    let mut info: Vec<(f64, f64)> = p
        .iter()
        .filter(|(_, w)| *w > 0.0)
        .map(|(_, w)| {
            let q = w / mass;
            (-q.ln(), q)
        })
        .collect();
    let entropy: f64 = info.iter().map(|(i, q)| q * i).sum();
    let varentropy: f64 = info.iter().map(|(i, q)| q * (i - entropy).powi(2)).sum();

    info.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut info_quantiles = Vec::with_capacity(QUANTILE_LEVELS.len());
    let mut cum = 0.0;
    let mut k = 0;
    for &level in &QUANTILE_LEVELS {
        while k < info.len() && cum + info[k].1 < level {
            cum += info[k].1;
            k += 1;
        }
        let q = info[k.min(info.len() - 1)].0;
        info_quantiles.push((level, q));
    }
    Ok(InfoStats { entropy: entropy.max(0.0), varentropy: varentropy.max(0.0), info_quantiles, deficit: p.deficit })
}

/// `E[Gamma log f(X)]` for `X ~ p`, i.e.
/// `1/2 sum_{x,z} mu(z) p(x) log^2(p(x)/p(xz))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaLog {
    pub value: f64,
    /// Number of tracked `x` with `0 < p(x) <= weight_floor` left out.
    pub dropped: usize,
}

pub fn expected_gamma_log(g: &GroupSpec, mu: &RateMeasure, p: &Pmf, weight_floor: f64) -> Result<GammaLog> {
    let mut sum = 0.0;
    let mut dropped = 0;
    for (x, px) in p.iter() {
        if px <= weight_floor {
            if px > 0.0 {
                dropped += 1;
            }
            continue;
        }
        let lx = px.ln();
        for (z, r) in mu.iter() {
            let xz = g.mul(x, z);
            let pxz = p.get(&xz);
            if pxz <= 0.0 {
                return Err(Error::Truncation(format!(
                    "p({}) = {px:e} but its neighbour {} carries no mass; lower the kernel tolerance",
                    g.format_element(x),
                    g.format_element(&xz)
                )));
            }
            sum += r * px * (lx - pxz.ln()).powi(2);
        }
    }
    Ok(GammaLog { value: 0.5 * sum, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_walk() -> (GroupSpec, RateMeasure) {
        let g = GroupSpec::integer_lattice(1).unwrap();
        let mu = RateMeasure::unit_vectors(&g, 0.5).unwrap();
        (g, mu)
    }

    fn uniform_pmf(elements: Vec<Element>) -> Pmf {
        let w = 1.0 / elements.len() as f64;
        Pmf::from_weights(elements.into_iter().map(|x| (x, w)).collect()).unwrap()
    }

    #[test]
    fn convolve_with_identity_and_shifts() {
        let (g, _) = z_walk();
        let q = Pmf::from_weights(
            [(Element::Lattice(vec![3]), 0.25), (Element::Lattice(vec![-1]), 0.75)].into_iter().collect(),
        )
        .unwrap();
        let id = Pmf::point_mass(g.identity());
        assert_eq!(convolve(&id, &q, &g).total_variation(&q), 0.0);

        let one = Pmf::point_mass(Element::Lattice(vec![1]));
        let two = convolve(&one, &one, &g);
        assert_eq!(two.get(&Element::Lattice(vec![2])), 1.0);
        assert_eq!(two.len(), 1);
    }

    #[test]
    fn transposition_square_on_s3() {
        let g = GroupSpec::symmetric(3).unwrap();
        let mu = RateMeasure::transpositions(&g).unwrap();
        let p = Pmf::from_weights(mu.iter().map(|(z, r)| (z.clone(), r)).collect()).unwrap();
        let sq = convolve(&p, &p, &g);
        // 9 ordered pairs: 3 give the identity, 3 give each 3-cycle
        assert!((sq.get(&g.identity()) - 1.0 / 3.0).abs() < 1e-15);
        let c1 = g.parse_element("(1 2 3)").unwrap();
        let c2 = g.parse_element("(1 3 2)").unwrap();
        assert!((sq.get(&c1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((sq.get(&c2) - 1.0 / 3.0).abs() < 1e-15);
        assert!(sq.deficit() < 1e-15);
    }

    #[test]
    fn time_zero_is_point_mass() {
        let (g, mu) = z_walk();
        let p = heat_kernel(&g, &mu, 0.0, 1e-12).unwrap();
        assert_eq!(p, Pmf::point_mass(g.identity()));
    }

    #[test]
    fn hypercube_product_form() {
        let g = GroupSpec::hypercube(2).unwrap();
        let mu = RateMeasure::unit_vectors(&g, 0.5).unwrap();
        let p = heat_kernel(&g, &mu, 1.0, 1e-12).unwrap();
        // each coordinate flips at rate 1/2: P(unflipped) = (1 + e^-t)/2
        let a = (1.0 + (-1.0f64).exp()) / 2.0;
        let b = 1.0 - a;
        assert!((p.get(&g.identity()) - a * a).abs() < 1e-12);
        assert!((p.get(&Element::Lattice(vec![1, 0])) - a * b).abs() < 1e-12);
        assert!((p.get(&Element::Lattice(vec![1, 1])) - b * b).abs() < 1e-12);
        assert!((a * a - 0.4677).abs() < 1e-4);
    }

    #[test]
    fn domain_errors() {
        let (g, mu) = z_walk();
        assert!(matches!(heat_kernel(&g, &mu, -1.0, 1e-12), Err(Error::Domain(_))));
        assert!(matches!(heat_kernel(&g, &mu, 1.0, 1e-3), Err(Error::Domain(_))));
        let h = GroupSpec::cyclic(5).unwrap();
        let half = RateMeasure::unit_vectors(&h, 0.25).unwrap();
        assert!(matches!(heat_kernel(&h, &half, 1.0, 1e-12), Err(Error::Domain(_))));
    }

    #[test]
    fn info_stats_basics() {
        let (g, _) = z_walk();
        let s = info_stats(&Pmf::point_mass(g.identity())).unwrap();
        assert_eq!((s.entropy, s.varentropy), (0.0, 0.0));

        let h = GroupSpec::hypercube(3).unwrap();
        let s = info_stats(&uniform_pmf(h.enumerate().unwrap())).unwrap();
        assert!((s.entropy - 8f64.ln()).abs() < 1e-14);
        assert!(s.varentropy < 1e-28);
        assert!(s.info_quantiles.iter().all(|(_, q)| (q - 8f64.ln()).abs() < 1e-14));

        let empty = Pmf::from_weights(IndexMap::new()).unwrap();
        assert!(info_stats(&empty).is_err());
    }

    #[test]
    fn two_point_varentropy() {
        // Bernoulli(p): varentropy = p(1-p) log^2(p/(1-p))
        let p = 0.2;
        let pmf = Pmf::from_weights(
            [(Element::Lattice(vec![0]), p), (Element::Lattice(vec![1]), 1.0 - p)].into_iter().collect(),
        )
        .unwrap();
        let s = info_stats(&pmf).unwrap();
        let expected = p * (1.0 - p) * (p / (1.0 - p)).ln().powi(2);
        assert!((s.varentropy - expected).abs() < 1e-15);
        assert_eq!(s.info_quantiles[0].1, -(0.8f64.ln()));
        assert_eq!(s.info_quantiles[4].1, -(0.2f64.ln()));
    }

    #[test]
    fn gamma_log_on_two_states() {
        let g = GroupSpec::hypercube(1).unwrap();
        let mu = RateMeasure::unit_vectors(&g, 1.0).unwrap();
        let t = 0.5;
        let p = heat_kernel(&g, &mu, t, 1e-12).unwrap();
        let f0 = (1.0 + (-2.0 * t).exp()) / 2.0;
        let f1 = 1.0 - f0;
        // flip rate 1: P(even number of jumps) = (1 + e^{-2t})/2
        assert!((p.get(&g.identity()) - f0).abs() < 1e-12);
        let gl = expected_gamma_log(&g, &mu, &p, DEFAULT_WEIGHT_FLOOR).unwrap();
        let expected = 0.5 * (f0 / f1).ln().powi(2);
        assert!((gl.value - expected).abs() < 1e-12, "{} vs {expected}", gl.value);
        assert_eq!(gl.dropped, 0);
    }

    #[test]
    fn gamma_log_vanishes_on_uniform() {
        let g = GroupSpec::symmetric(3).unwrap();
        let mu = RateMeasure::transpositions(&g).unwrap();
        let u = uniform_pmf(g.enumerate().unwrap());
        assert_eq!(expected_gamma_log(&g, &mu, &u, DEFAULT_WEIGHT_FLOOR).unwrap().value, 0.0);
    }

    #[test]
    fn gamma_log_reports_truncation() {
        let (g, mu) = z_walk();
        let p = Pmf::point_mass(g.identity());
        assert!(matches!(expected_gamma_log(&g, &mu, &p, DEFAULT_WEIGHT_FLOOR), Err(Error::Truncation(_))));
    }
}
