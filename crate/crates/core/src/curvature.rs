//! Carré du champ `Gamma`, iterated carré du champ `Gamma2`, the best
//! Bakry-Émery constant of the walk, and the Poincaré-type consequences.
//!
//! Both operators commute with left translations `(T_a f)(x) = f(a x)` and
//! ignore additive constants, so curvature is decided at the identity on
//! functions vanishing there. `Gamma(f)(o)` sees `f` on the support `B1` and
//! `Gamma2(f)(o)` on `B2 = {zw}`; the infimum of `Gamma2/Gamma` over all
//! functions is therefore a finite-dimensional generalized eigenvalue problem.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::group::{Element, GroupSpec};
use crate::heat::{heat_kernel, Pmf};
use crate::measure::RateMeasure;
use crate::{Error, Result};

/// Absolute tolerance on the curvature constant.
pub const KAPPA_TOL: f64 = 1e-10;

/// A finitely supported function plus a constant offset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TestFunction {
    values: BTreeMap<Element, f64>,
    offset: f64,
}

impl TestFunction {
    pub fn new(values: BTreeMap<Element, f64>) -> Self {
        Self { values, offset: 0.0 }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Element, f64)>) -> Self {
        Self::new(pairs.into_iter().collect())
    }

    pub fn constant(c: f64) -> Self {
        Self { values: BTreeMap::new(), offset: c }
    }

    pub fn eval(&self, x: &Element) -> f64 {
        self.offset + self.values.get(x).copied().unwrap_or(0.0)
    }

    /// Elements where `f` may differ from the offset.
    pub fn support(&self) -> impl Iterator<Item = &Element> + '_ {
        self.values.keys()
    }

    pub fn add_constant(&self, c: f64) -> Self {
        Self { values: self.values.clone(), offset: self.offset + c }
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { values: self.values.iter().map(|(x, v)| (x.clone(), a * v)).collect(), offset: a * self.offset }
    }

    /// `(T_a f)(x) = f(a x)`.
    pub fn translate(&self, g: &GroupSpec, a: &Element) -> Self {
        let a_inv = g.inv(a);
        Self { values: self.values.iter().map(|(y, v)| (g.mul(&a_inv, y), *v)).collect(), offset: self.offset }
    }
}

// ---------------------------------------------------------------------------
// definitional operators, generic over closures

fn apply_l(g: &GroupSpec, mu: &RateMeasure, f: &dyn Fn(&Element) -> f64, x: &Element) -> f64 {
    let fx = f(x);
    mu.iter().map(|(z, r)| r * (f(&g.mul(x, z)) - fx)).sum()
}

fn gamma_bilinear(
    g: &GroupSpec,
    mu: &RateMeasure,
    f: &dyn Fn(&Element) -> f64,
    h: &dyn Fn(&Element) -> f64,
    x: &Element,
) -> f64 {
    let fh = |y: &Element| f(y) * h(y);
    0.5 * (apply_l(g, mu, &fh, x) - f(x) * apply_l(g, mu, h, x) - h(x) * apply_l(g, mu, f, x))
}

fn gamma2_bilinear(
    g: &GroupSpec,
    mu: &RateMeasure,
    f: &dyn Fn(&Element) -> f64,
    h: &dyn Fn(&Element) -> f64,
    x: &Element,
) -> f64 {
    let gam = |y: &Element| gamma_bilinear(g, mu, f, h, y);
    let lf = |y: &Element| apply_l(g, mu, f, y);
    let lh = |y: &Element| apply_l(g, mu, h, y);
    0.5 * (apply_l(g, mu, &gam, x) - gamma_bilinear(g, mu, f, &lh, x) - gamma_bilinear(g, mu, h, &lf, x))
}

/// `(Lf)(x) = sum_z mu(z) (f(xz) - f(x))`.
pub fn generator_apply(g: &GroupSpec, mu: &RateMeasure, f: &TestFunction, x: &Element) -> f64 {
    apply_l(g, mu, &|y| f.eval(y), x)
}

/// `Gamma(f)(x) = 1/2 [L(f^2) - 2 f Lf](x)`, evaluated literally.
pub fn gamma_definitional(g: &GroupSpec, mu: &RateMeasure, f: &TestFunction, x: &Element) -> f64 {
    let fe = |y: &Element| f.eval(y);
    gamma_bilinear(g, mu, &fe, &fe, x)
}

fn gamma_expanded(g: &GroupSpec, mu: &RateMeasure, f: &dyn Fn(&Element) -> f64, x: &Element) -> f64 {
    let fx = f(x);
    0.5 * mu.iter().map(|(z, r)| r * (f(&g.mul(x, z)) - fx).powi(2)).sum::<f64>()
}

/// `Gamma(f)(x) = 1/2 sum_z mu(z) (f(xz) - f(x))^2`. Debug builds also
/// evaluate the literal definition and assert agreement.
pub fn gamma(g: &GroupSpec, mu: &RateMeasure, f: &TestFunction, x: &Element) -> f64 {
    let v = gamma_expanded(g, mu, &|y| f.eval(y), x);
    debug_assert!({
        let d = gamma_definitional(g, mu, f, x);
        let scale = 1.0 + mu.iter().map(|(z, r)| r * f.eval(&g.mul(x, z)).powi(2)).sum::<f64>() + f.eval(x).powi(2);
        (d - v).abs() <= 1e-12 * scale
    });
    v
}

/// `Gamma2(f)(x) = 1/2 [L Gamma(f) - 2 Gamma(f, Lf)](x)`, evaluated literally.
pub fn gamma2_definitional(g: &GroupSpec, mu: &RateMeasure, f: &TestFunction, x: &Element) -> f64 {
    let fe = |y: &Element| f.eval(y);
    gamma2_bilinear(g, mu, &fe, &fe, x)
}

/// `1/4 sum_{z,w} mu(z) mu(w) (f(zw) - f(z) - f(w))^2` for `f` shifted to
/// vanish at the identity. Equals `Gamma2(f)(o)` under conjugacy invariance.
pub fn gamma2_closed_form(g: &GroupSpec, mu: &RateMeasure, f: &TestFunction) -> f64 {
    let f0 = f.eval(&g.identity());
    let fs = |y: &Element| f.eval(y) - f0;
    let mut s = 0.0;
    for (z, rz) in mu.iter() {
        let fz = fs(z);
        for (w, rw) in mu.iter() {
            s += rz * rw * (fs(&g.mul(z, w)) - fz - fs(w)).powi(2);
        }
    }
    0.25 * s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gamma2Identity {
    pub definitional: f64,
    pub closed_form: f64,
}

impl Gamma2Identity {
    pub fn relative_gap(&self) -> f64 {
        (self.definitional - self.closed_form).abs() / self.closed_form.abs().max(1.0)
    }
}

pub fn gamma2_identity(g: &GroupSpec, mu: &RateMeasure, f: &TestFunction) -> Gamma2Identity {
    Gamma2Identity {
        definitional: gamma2_definitional(g, mu, f, &g.identity()),
        closed_form: gamma2_closed_form(g, mu, f),
    }
}

// ---------------------------------------------------------------------------
// best curvature constant

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    /// `min Gamma2(f)(o) / Gamma(f)(o)` over `f` with `f(o) = 0`, `Gamma(f)(o) > 0`;
    /// `-inf` when `Gamma2` is negative on a `Gamma`-null direction.
    pub kappa_best: f64,
    /// Minimizer, normalized to `Gamma(f)(o) = 1`.
    pub witness: TestFunction,
    /// Whether the `Gamma2` form on the radius-2 ball is positive semidefinite.
    pub gamma2_psd: bool,
    /// Number of eigenvalues within [`KAPPA_TOL`] of the minimum.
    pub ties: usize,
    /// Coordinates on the ball (support first, then the rest of `B2`).
    pub ball: Vec<Element>,
}

fn sym_eigen(m: DMatrix<f64>) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let sym = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym)
}

fn argmin(v: &DVector<f64>) -> usize {
    v.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0)
}

/// Matrix of the bilinear form `Gamma2(., .)(o)` on the given coordinates,
/// assembled from the literal definition.
pub fn gamma2_matrix(g: &GroupSpec, mu: &RateMeasure, coords: &[Element]) -> DMatrix<f64> {
    let n = coords.len();
    let o = g.identity();
    let mut q = DMatrix::zeros(n, n);
    for i in 0..n {
        let ei = |y: &Element| if *y == coords[i] { 1.0 } else { 0.0 };
        for j in i..n {
            let ej = |y: &Element| if *y == coords[j] { 1.0 } else { 0.0 };
            let v = gamma2_bilinear(g, mu, &ei, &ej, &o);
            q[(i, j)] = v;
            q[(j, i)] = v;
        }
    }
    q
}

pub fn best_kappa(g: &GroupSpec, mu: &RateMeasure) -> Result<CurvatureReport> {
    if mu.support_size() == 0 {
        return Err(Error::Domain("Gamma is identically zero: empty support".into()));
    }
    let o = g.identity();
    let b1: Vec<Element> = mu.support().cloned().collect();
    let mut b2: Vec<Element> = Vec::new();
    for z in &b1 {
        for w in &b1 {
            let zw = g.mul(z, w);
            if zw != o && mu.rate(&zw) == 0.0 {
                b2.push(zw);
            }
        }
    }
    b2.sort();
    b2.dedup();
    let na = b1.len();
    let nb = b2.len();
    let ball: Vec<Element> = b1.iter().chain(b2.iter()).cloned().collect();
    let q = gamma2_matrix(g, mu, &ball);
    let scale = q.amax().max(1.0);

    let full = sym_eigen(q.clone());
    let gamma2_psd = full.eigenvalues.min() >= -KAPPA_TOL * scale;

    let qaa = q.view((0, 0), (na, na)).into_owned();
    let qab = q.view((0, na), (na, nb)).into_owned();
    let qbb = q.view((na, na), (nb, nb)).into_owned();

    // Gamma2 restricted to functions invisible to Gamma
    let (qbb_pinv, null_negative) = if nb > 0 {
        let eb = sym_eigen(qbb);
        let k = argmin(&eb.eigenvalues);
        if eb.eigenvalues[k] < -KAPPA_TOL * scale {
            (None, Some(eb.eigenvectors.column(k).into_owned()))
        } else {
            let cut = 1e-12 * scale;
            let inv = DVector::from_iterator(
                nb,
                eb.eigenvalues.iter().map(|&l| if l > cut { 1.0 / l } else { 0.0 }),
            );
            (Some(&eb.eigenvectors * DMatrix::from_diagonal(&inv) * eb.eigenvectors.transpose()), None)
        }
    } else {
        (Some(DMatrix::zeros(0, 0)), None)
    };

    if let Some(v) = null_negative {
        let witness = TestFunction::from_pairs(b2.iter().cloned().zip(v.iter().copied()));
        return Ok(CurvatureReport { kappa_best: f64::NEG_INFINITY, witness, gamma2_psd, ties: 1, ball });
    }
    let pinv = qbb_pinv.expect("pseudo-inverse computed when no negative direction");
    let schur = &qaa - &qab * &pinv * qab.transpose();

    let d_inv_sqrt: Vec<f64> = b1.iter().map(|z| (0.5 * mu.rate(z)).sqrt().recip()).collect();
    let dm = DMatrix::from_diagonal(&DVector::from_vec(d_inv_sqrt.clone()));
    let m = &dm * schur * &dm;
    let eig = sym_eigen(m);
    let k = argmin(&eig.eigenvalues);
    let kappa_best = eig.eigenvalues[k];
    let ties = eig.eigenvalues.iter().filter(|&&l| (l - kappa_best).abs() <= KAPPA_TOL).count();

    let u = eig.eigenvectors.column(k);
    let va = DVector::from_iterator(na, u.iter().zip(&d_inv_sqrt).map(|(x, s)| x * s));
    let vb = -(&pinv * qab.transpose() * &va);
    let witness = TestFunction::from_pairs(
        b1.iter().cloned().zip(va.iter().copied()).chain(b2.iter().cloned().zip(vb.iter().copied())),
    );
    Ok(CurvatureReport { kappa_best, witness, gamma2_psd, ties, ball })
}

// ---------------------------------------------------------------------------
// Poincaré-type inequalities under the time-t law

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Slack allowed in the Poincaré-type comparisons.
pub const POINCARE_SLACK: f64 = 1e-10;

fn variance_under(p: &Pmf, f: &TestFunction) -> f64 {
    let mass = p.tracked_mass();
    let mean = p.expect(|x| f.eval(x)) / mass;
    p.expect(|x| (f.eval(x) - mean).powi(2)) / mass
}

fn expected_gamma_under(g: &GroupSpec, mu: &RateMeasure, p: &Pmf, f: &TestFunction) -> f64 {
    p.expect(|x| gamma_expanded(g, mu, &|y| f.eval(y), x)) / p.tracked_mass()
}

fn check(lhs: f64, rhs: f64) -> InequalityCheck {
    InequalityCheck { lhs, rhs, holds: lhs <= rhs + POINCARE_SLACK }
}

/// `Var f(X_t) <= 2t E[Gamma f(X_t)]`.
pub fn check_local_poincare(g: &GroupSpec, mu: &RateMeasure, f: &TestFunction, t: f64, tol: f64) -> Result<InequalityCheck> {
    let p = heat_kernel(g, mu, t, tol)?;
    Ok(check(variance_under(&p, f), 2.0 * t * expected_gamma_under(g, mu, &p, f)))
}

/// `Var f(X_t) <= E[Gamma f(X_t)] / kappa`, for positive curvature `kappa`.
pub fn check_uniform_poincare(
    g: &GroupSpec,
    mu: &RateMeasure,
    f: &TestFunction,
    t: f64,
    kappa: f64,
    tol: f64,
) -> Result<InequalityCheck> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("uniform Poincaré needs kappa > 0, got {kappa}")));
    }
    let p = heat_kernel(g, mu, t, tol)?;
    Ok(check(variance_under(&p, f), expected_gamma_under(g, mu, &p, f) / kappa))
}

/// `sup { |f(xz) - f(x)| : mu(z) > 0 }`.
pub fn lipschitz_constant(g: &GroupSpec, mu: &RateMeasure, f: &TestFunction) -> Result<f64> {
    let points: Vec<Element> = if g.is_finite() {
        g.enumerate()?
    } else {
        // only x with x or xz in supp(f) can see a difference
        let mut pts: Vec<Element> = f.support().cloned().collect();
        for y in f.support() {
            for z in mu.support() {
                pts.push(g.mul(y, &g.inv(z)));
            }
        }
        pts
    };
    Ok(points
        .iter()
        .flat_map(|x| mu.support().map(move |z| (x, z)))
        .map(|(x, z)| (f.eval(&g.mul(x, z)) - f.eval(x)).abs())
        .fold(0.0, f64::max))
}

/// `Var f(X_t) <= t Lip(f)^2`.
pub fn check_lipschitz_poincare(g: &GroupSpec, mu: &RateMeasure, f: &TestFunction, t: f64, tol: f64) -> Result<InequalityCheck> {
    let p = heat_kernel(g, mu, t, tol)?;
    let lip = lipschitz_constant(g, mu, f)?;
    Ok(check(variance_under(&p, f), t * lip * lip))
}

/// `(P_s f)(x) = E f(x X_s) = sum_z p_s(z) f(xz)` at every element of a finite group.
pub fn semigroup_apply(g: &GroupSpec, p_s: &Pmf, f: &dyn Fn(&Element) -> f64) -> Result<IndexMap<Element, f64>> {
    Ok(g
        .enumerate()?
        .into_iter()
        .map(|x| {
            let v = p_s.expect(|z| f(&g.mul(&x, z)));
            (x, v)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubcommutationCheck {
    pub holds: bool,
    /// `min_x [e^{-2 kappa s} P_s(Gamma f)(x) - Gamma(P_s f)(x)]`.
    pub min_slack: f64,
    pub worst: Element,
}

pub const SUBCOMMUTATION_SLACK: f64 = 1e-9;

/// `Gamma(P_s f) <= e^{-2 kappa s} P_s(Gamma f)` at every point of a finite group.
pub fn check_subcommutation(
    g: &GroupSpec,
    mu: &RateMeasure,
    f: &TestFunction,
    s: f64,
    kappa: f64,
    tol: f64,
) -> Result<SubcommutationCheck> {
    if !g.is_finite() {
        return Err(Error::Unsupported("sub-commutation is checked on finite groups only".into()));
    }
    let p_s = heat_kernel(g, mu, s, tol)?;
    let fe = |y: &Element| f.eval(y);
    let psf = semigroup_apply(g, &p_s, &fe)?;
    let psf_fn = |y: &Element| psf[y];
    let gamma_f = |y: &Element| gamma_expanded(g, mu, &fe, y);
    let ps_gamma = semigroup_apply(g, &p_s, &gamma_f)?;
    let decay = (-2.0 * kappa * s).exp();
    let mut min_slack = f64::INFINITY;
    let mut worst = g.identity();
    for (x, pg) in &ps_gamma {
        let slack = decay * pg - gamma_expanded(g, mu, &psf_fn, x);
        if slack < min_slack {
            min_slack = slack;
            worst = x.clone();
        }
    }
    Ok(SubcommutationCheck { holds: min_slack >= -SUBCOMMUTATION_SLACK, min_slack, worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat::DEFAULT_KERNEL_TOL;

    fn z2() -> (GroupSpec, RateMeasure) {
        let g = GroupSpec::hypercube(1).unwrap();
        let mu = RateMeasure::unit_vectors(&g, 1.0).unwrap();
        (g, mu)
    }

    #[test]
    fn gamma_of_constants_vanishes() {
        let g = GroupSpec::symmetric(3).unwrap();
        let mu = RateMeasure::transpositions(&g).unwrap();
        let c = TestFunction::constant(3.5);
        for x in g.enumerate().unwrap() {
            assert_eq!(gamma(&g, &mu, &c, &x), 0.0);
            assert_eq!(gamma2_definitional(&g, &mu, &c, &x), 0.0);
        }
        assert_eq!(gamma2_closed_form(&g, &mu, &c), 0.0);
    }

    #[test]
    fn two_state_hand_values() {
        let (g, mu) = z2();
        let one = Element::Lattice(vec![1]);
        let f = TestFunction::from_pairs([(one.clone(), 1.0)]);
        assert_eq!(gamma(&g, &mu, &f, &g.identity()), 0.5);
        assert!((gamma_definitional(&g, &mu, &f, &g.identity()) - 0.5).abs() < 1e-15);

        let a = 1.7;
        let fa = TestFunction::from_pairs([(one, a)]);
        let id = gamma2_identity(&g, &mu, &fa);
        assert!((id.closed_form - a * a).abs() < 1e-12);
        assert!((id.definitional - a * a).abs() < 1e-12);
        let ratio = id.definitional / gamma(&g, &mu, &fa, &g.identity());
        assert!((ratio - 2.0).abs() < 1e-12);
        let rep = best_kappa(&g, &mu).unwrap();
        assert!((rep.kappa_best - 2.0).abs() < 1e-10);
    }

    #[test]
    fn shift_and_constant_invariance() {
        let g = GroupSpec::cyclic(7).unwrap();
        let mu = RateMeasure::unit_vectors(&g, 0.5).unwrap();
        let f = TestFunction::from_pairs((0..7).map(|k| (Element::Lattice(vec![k]), (k * k) as f64 * 0.3)));
        let fc = f.add_constant(-4.0);
        let a = Element::Lattice(vec![3]);
        let tf = f.translate(&g, &a);
        for x in g.enumerate().unwrap() {
            assert!((gamma(&g, &mu, &f, &x) - gamma(&g, &mu, &fc, &x)).abs() < 1e-12);
            let ax = g.mul(&a, &x);
            assert!((gamma(&g, &mu, &tf, &x) - gamma(&g, &mu, &f, &ax)).abs() < 1e-12);
            let d = gamma2_definitional(&g, &mu, &tf, &x) - gamma2_definitional(&g, &mu, &f, &ax);
            assert!(d.abs() < 1e-10);
        }
    }

    #[test]
    fn hypercube_and_transposition_curvature() {
        for d in [2usize, 3] {
            let g = GroupSpec::hypercube(d).unwrap();
            let mu = RateMeasure::unit_vectors(&g, 1.0 / d as f64).unwrap();
            let rep = best_kappa(&g, &mu).unwrap();
            assert!((rep.kappa_best - 2.0 / d as f64).abs() < 1e-8, "d={d}: {}", rep.kappa_best);
            assert!(rep.gamma2_psd);
        }
        let g = GroupSpec::symmetric(3).unwrap();
        let mu = RateMeasure::transpositions(&g).unwrap();
        let rep = best_kappa(&g, &mu).unwrap();
        assert!((rep.kappa_best - 2.0 / 3.0).abs() < 1e-8, "{}", rep.kappa_best);
    }

    #[test]
    fn witness_attains_kappa() {
        let g = GroupSpec::symmetric(4).unwrap();
        let mu = RateMeasure::transpositions(&g).unwrap();
        let rep = best_kappa(&g, &mu).unwrap();
        let o = g.identity();
        let ratio = gamma2_definitional(&g, &mu, &rep.witness, &o) / gamma(&g, &mu, &rep.witness, &o);
        assert!((ratio - rep.kappa_best).abs() < 1e-9);
        assert!((gamma(&g, &mu, &rep.witness, &o) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empty_support_is_a_domain_error() {
        let g = GroupSpec::cyclic(3).unwrap();
        let mu = RateMeasure::from_entries(&g, BTreeMap::new()).unwrap();
        assert!(matches!(best_kappa(&g, &mu), Err(Error::Domain(_))));
    }

    #[test]
    fn poincare_trivial_and_two_point() {
        let g = GroupSpec::hypercube(4).unwrap();
        let mu = RateMeasure::unit_vectors(&g, 0.25).unwrap();
        let c = check_local_poincare(&g, &mu, &TestFunction::constant(2.0), 1.0, DEFAULT_KERNEL_TOL).unwrap();
        assert!(c.lhs.abs() < 1e-24 && c.rhs == 0.0 && c.holds);

        // first coordinate: X^1_t is Bernoulli((1 - e^{-t/2})/2)
        let f = TestFunction::from_pairs(
            g.enumerate().unwrap().into_iter().filter_map(|x| match &x {
                Element::Lattice(v) if v[0] == 1 => Some((x.clone(), 1.0)),
                _ => None,
            }),
        );
        let t = 1.0;
        let q = (1.0 - (-t / 2.0f64).exp()) / 2.0;
        let c = check_local_poincare(&g, &mu, &f, t, DEFAULT_KERNEL_TOL).unwrap();
        assert!((c.lhs - q * (1.0 - q)).abs() < 1e-12);
        // Gamma f = mu(e1)/2 everywhere
        assert!((c.rhs - 2.0 * t * 0.125).abs() < 1e-12);
        assert!(c.holds);
    }

    #[test]
    fn subcommutation_at_zero_is_equality() {
        let g = GroupSpec::symmetric(3).unwrap();
        let mu = RateMeasure::transpositions(&g).unwrap();
        let f = TestFunction::from_pairs(g.enumerate().unwrap().into_iter().enumerate().map(|(i, x)| (x, i as f64)));
        let c = check_subcommutation(&g, &mu, &f, 0.0, 2.0 / 3.0, DEFAULT_KERNEL_TOL).unwrap();
        assert!(c.holds);
        assert!(c.min_slack.abs() < 1e-12);
    }

    #[test]
    fn lipschitz_poincare_on_integers() {
        let g = GroupSpec::integer_lattice(1).unwrap();
        let mu = RateMeasure::unit_vectors(&g, 0.5).unwrap();
        let f = TestFunction::from_pairs([(Element::Lattice(vec![1]), 1.0), (Element::Lattice(vec![2]), 3.0)]);
        assert_eq!(lipschitz_constant(&g, &mu, &f).unwrap(), 3.0);
        let c = check_lipschitz_poincare(&g, &mu, &f, 2.0, DEFAULT_KERNEL_TOL).unwrap();
        assert!(c.holds);
        assert!(check_local_poincare(&g, &mu, &f, 2.0, DEFAULT_KERNEL_TOL).unwrap().holds);
    }
}
