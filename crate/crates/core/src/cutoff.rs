//! Relaxation time, total-variation mixing time and the varentropy cutoff
//! diagnostics of a walk on a finite group.
//!
//! The criterion compares `t_mix / t_rel` with `1 + sqrt(Varent(X_{t_mix}))`
//! and with `sqrt(d)`. Both comparisons are about families of walks; a
//! single instance only yields the numbers, which is all this module reports.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::bounds::DIMENSION_CONSTANT;
use crate::group::GroupSpec;
use crate::heat::{self, Pmf, DEFAULT_KERNEL_TOL};
use crate::measure::RateMeasure;
use crate::{Error, Result};

pub const DEFAULT_EPS: f64 = 0.25;
/// Largest group handled by the dense eigensolver.
pub const MAX_DENSE_ORDER: usize = 2048;
/// Eigenvalues of `-L` below this count as zero.
pub const EIGEN_TOL: f64 = 1e-10;
/// Relative width at which the mixing-time bisection stops.
pub const BISECTION_REL_TOL: f64 = 1e-6;
/// Allowed increase of the distance between two probes before the bracket is
/// rejected as non-monotone.
pub const MONOTONE_SLACK: f64 = 1e-12;
const MAX_BRACKET_TIME: f64 = 1e9;

fn finite_elements(g: &GroupSpec, mu: &RateMeasure) -> Result<Vec<crate::Element>> {
    if !g.is_finite() {
        return Err(Error::Unsupported(format!("{g} is infinite")));
    }
    let diam = g.cayley_diameter(mu.support())?;
    if !diam.generates {
        return Err(Error::Disconnected { reached: diam.reached, order: g.order().unwrap_or(0) as usize });
    }
    g.enumerate()
}

/// `1 / gap`, with `gap` the smallest non-zero eigenvalue of `-L` and
/// `L(x, y) = mu(x^-1 y)` off the diagonal.
pub fn relaxation_time(g: &GroupSpec, mu: &RateMeasure) -> Result<f64> {
    let elements = finite_elements(g, mu)?;
    let n = elements.len();
    if n > MAX_DENSE_ORDER {
        return Err(Error::TooLarge { needed: n as u128, limit: MAX_DENSE_ORDER as u128 });
    }
    if n == 1 {
        return Err(Error::Domain("the trivial group has no spectral gap".into()));
    }
    let index: std::collections::HashMap<&crate::Element, usize> =
        elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut minus_l = DMatrix::<f64>::zeros(n, n);
    for (i, x) in elements.iter().enumerate() {
        for (z, r) in mu.iter() {
            let j = index[&g.mul(x, z)];
            minus_l[(i, j)] -= r;
            minus_l[(i, i)] += r;
        }
    }
    if (&minus_l - minus_l.transpose()).amax() > 0.0 {
        return Err(Error::InvalidMeasure("generator is not symmetric; mu must satisfy mu(z) = mu(z^-1)".into()));
    }
    let mut eig = SymmetricEigen::new(minus_l).eigenvalues.as_slice().to_vec();
    eig.sort_by(f64::total_cmp);
    let scale = mu.total_mass().max(1.0);
    if eig[0].abs() > EIGEN_TOL * scale {
        return Err(Error::Numerical(format!("lowest eigenvalue of -L is {} instead of 0", eig[0])));
    }
    let gap = eig[1];
    if gap <= EIGEN_TOL * scale {
        return Err(Error::Numerical(format!("spectral gap {gap:e} is not resolved by the eigensolver")));
    }
    Ok(1.0 / gap)
}

/// `TV(p, uniform)` on a group of the given order, counting untracked mass
/// as misplaced.
pub fn tv_to_uniform(p: &Pmf, order: usize) -> f64 {
    let u = 1.0 / order as f64;
    let mut seen = 0usize;
    let mut s = 0.0;
    for (_, w) in p.iter() {
        s += (w - u).abs();
        seen += 1;
    }
    s += (order - seen.min(order)) as f64 * u;
    0.5 * s + 0.5 * p.deficit()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingTime {
    pub t_mix: f64,
    /// Every `(t, TV)` evaluated, in evaluation order.
    pub probes: Vec<(f64, f64)>,
}

/// `min { t : TV(f_t, uniform) <= eps }` by doubling and bisection.
pub fn mixing_time(g: &GroupSpec, mu: &RateMeasure, eps: f64) -> Result<MixingTime> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let order = finite_elements(g, mu)?.len();
    let mut probes: Vec<(f64, f64)> = Vec::new();
    let tv = |t: f64, probes: &mut Vec<(f64, f64)>| -> Result<f64> {
        let d = tv_to_uniform(&heat::heat_kernel(g, mu, t, DEFAULT_KERNEL_TOL)?, order);
        probes.push((t, d));
        check_monotone(probes)?;
        Ok(d)
    };
    if tv(0.0, &mut probes)? <= eps {
        return Ok(MixingTime { t_mix: 0.0, probes });
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while tv(hi, &mut probes)? > eps {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_BRACKET_TIME {
            return Err(Error::Numerical(format!("TV still above {eps} at t = {lo}")));
        }
    }
    while hi - lo > BISECTION_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if tv(mid, &mut probes)? <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(MixingTime { t_mix: hi, probes })
}

fn check_monotone(probes: &[(f64, f64)]) -> Result<()> {
    let mut sorted = probes.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        if w[1].1 > w[0].1 + MONOTONE_SLACK {
            return Err(Error::Numerical(format!(
                "TV increases from {} at t = {} to {} at t = {}",
                w[0].1, w[0].0, w[1].1, w[1].0
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffDiagnostics {
    pub eps: f64,
    pub t_mix: f64,
    pub t_rel: f64,
    pub varent_at_tmix: f64,
    /// `t_mix / t_rel`.
    pub ratio: f64,
    /// `1 + sqrt(varent_at_tmix)`.
    pub criterion_rhs: f64,
    pub d: usize,
    pub sqrt_d: f64,
}

impl CutoffDiagnostics {
    /// `varent_at_tmix <= 16 d`.
    pub fn within_dimension_bound(&self) -> bool {
        self.varent_at_tmix <= DIMENSION_CONSTANT * self.d as f64
    }
}

pub fn cutoff_report(g: &GroupSpec, mu: &RateMeasure, eps: f64) -> Result<CutoffDiagnostics> {
    let t_rel = relaxation_time(g, mu)?;
    let t_mix = mixing_time(g, mu, eps)?.t_mix;
    let f = heat::heat_kernel(g, mu, t_mix, DEFAULT_KERNEL_TOL)?;
    let varent_at_tmix = heat::info_stats(&f)?.varentropy;
    let d = mu.num_generators();
    Ok(CutoffDiagnostics {
        eps,
        t_mix,
        t_rel,
        varent_at_tmix,
        ratio: t_mix / t_rel,
        criterion_rhs: 1.0 + varent_at_tmix.sqrt(),
        d,
        sqrt_d: (d as f64).sqrt(),
    })
}
