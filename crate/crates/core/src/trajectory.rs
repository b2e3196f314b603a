//! Path space of the walk: words of jumps, the suffix-conjugation count
//! `ell_z`, the insertion map `phi`, and exact checks of the path-space
//! identities.
//!
//! A word `w = (w_1, .., w_n)` evaluates to `w_1 w_2 .. w_n`, and
//! `ell_z(w) = #{ j : w_j = s_j z s_j^-1 }` with `s_j = w_{j+1} .. w_n` the
//! suffix after position `j`. Exact laws come from a right-to-left dynamic
//! program over `(suffix product, count)` states, which replaces the
//! `|supp mu|^n` word enumeration.

use indexmap::{IndexMap, IndexSet};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;

use crate::group::{Element, GroupSpec};
use crate::heat::DEFAULT_KERNEL_TOL;
use crate::measure::RateMeasure;
use crate::{poisson, Error, Result};

/// Enumeration budget of [`verify_phi`] in `(word, slot)` pairs.
pub const PHI_ENUMERATION_LIMIT: u128 = 10_000_000;
/// Largest word length accepted by [`joint_law_val_ell`].
pub const MAX_DP_LENGTH: usize = 200;
/// State budget of the `(suffix, count)` dynamic program.
pub const MAX_DP_STATES: usize = 20_000_000;
pub const DEFAULT_LEMMA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub letters: Vec<Element>,
}

impl Word {
    pub fn new(letters: Vec<Element>) -> Self {
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Ordered product of the letters; the empty word is the identity.
    pub fn val(&self, g: &GroupSpec) -> Element {
        self.letters.iter().fold(g.identity(), |acc, w| g.mul(&acc, w))
    }

    /// `prod_j mu(w_j)`, multiplied in ascending order of the factors so that
    /// equal multisets give bit-identical results.
    pub fn weight(&self, mu: &RateMeasure) -> f64 {
        let mut rates: Vec<f64> = self.letters.iter().map(|w| mu.rate(w)).collect();
        rates.sort_by(f64::total_cmp);
        rates.into_iter().product()
    }
}

/// `ell_z(w)`, scanning right to left with a running suffix product.
pub fn ell(word: &Word, z: &Element, g: &GroupSpec) -> usize {
    let mut suffix = g.identity();
    let mut count = 0;
    for w in word.letters.iter().rev() {
        if *w == g.conj(&suffix, z) {
            count += 1;
        }
        suffix = g.mul(w, &suffix);
    }
    count
}

/// `phi(w, i)`: inserts `xi = (w_i .. w_n) z (w_i .. w_n)^-1` at the 1-based
/// position `i`, so that the new word evaluates to `val(w) z`.
pub fn phi_insert(word: &Word, i: usize, z: &Element, g: &GroupSpec) -> Result<Word> {
    let n = word.len();
    if i == 0 || i > n + 1 {
        return Err(Error::Domain(format!("insertion slot {i} outside 1..={}", n + 1)));
    }
    let tail = word.letters[i - 1..].iter().fold(g.identity(), |acc, w| g.mul(&acc, w));
    let xi = g.conj(&tail, z);
    let mut letters = Vec::with_capacity(n + 1);
    letters.extend_from_slice(&word.letters[..i - 1]);
    letters.push(xi);
    letters.extend_from_slice(&word.letters[i - 1..]);
    Ok(Word { letters })
}

// ---------------------------------------------------------------------------
// sampling

/// Seeded sampler of Poissonized jump sequences. The generator is ChaCha8
/// seeded from a `u64`; letters are drawn from the support in its sorted
/// order.
pub struct PathSampler {
    letters: Vec<Element>,
    index: WeightedIndex<f64>,
    rng: ChaCha8Rng,
}

impl PathSampler {
    pub fn new(mu: &RateMeasure, seed: u64) -> Result<Self> {
        mu.require_normalized()?;
        let letters: Vec<Element> = mu.support().cloned().collect();
        let weights: Vec<f64> = mu.iter().map(|(_, r)| r).collect();
        let index = WeightedIndex::new(&weights).map_err(|e| Error::InvalidMeasure(e.to_string()))?;
        Ok(Self { letters, index, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    /// `(W_1, .., W_{N_t})` with `N_t ~ Poisson(t)`.
    pub fn sample(&mut self, t: f64) -> Result<Word> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain(format!("time must be finite and non-negative, got {t}")));
        }
        if t == 0.0 {
            return Ok(Word::default());
        }
        let n = Poisson::new(t).map_err(|e| Error::Domain(e.to_string()))?.sample(&mut self.rng) as usize;
        Ok(self.sample_len(n))
    }

    /// `n` i.i.d. letters.
    pub fn sample_len(&mut self, n: usize) -> Word {
        Word { letters: (0..n).map(|_| self.letters[self.index.sample(&mut self.rng)].clone()).collect() }
    }
}

pub fn sample_path(mu: &RateMeasure, t: f64, seed: u64) -> Result<Word> {
    PathSampler::new(mu, seed)?.sample(t)
}

// ---------------------------------------------------------------------------
// exhaustive check of the insertion map

fn words(support: &[Element], n: usize) -> impl Iterator<Item = Word> + '_ {
    let k = support.len();
    let total = k.checked_pow(n as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut code| {
        let mut letters = Vec::with_capacity(n);
        for _ in 0..n {
            letters.push(support[code % k].clone());
            code /= k;
        }
        Word { letters }
    })
}

/// Outcome of [`verify_phi`]; each count is the number of cases that passed.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiReport {
    pub n: usize,
    pub z: Element,
    pub pairs_checked: usize,
    pub words_checked: usize,
    pub evaluation_ok: usize,
    pub weight_ok: usize,
    pub preimage_ok: usize,
    pub image_ok: usize,
    pub first_counterexample: Option<String>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.first_counterexample.is_none()
            && self.evaluation_ok == self.pairs_checked
            && self.weight_ok == self.pairs_checked
            && self.preimage_ok == self.pairs_checked
            && self.image_ok == self.words_checked
    }
}

/// Enumerates every `(w, i)` in `supp(mu)^n x [n+1]` and every `eta` in
/// `supp(mu)^{n+1}`, checking the four properties of the insertion map:
/// evaluation shift, weight factor `mu(z)`, fibre size `1 + ell_z(w)`, and
/// image `= { eta : ell_z(eta) != 0 }`.
pub fn verify_phi(g: &GroupSpec, mu: &RateMeasure, n: usize, z: &Element) -> Result<PhiReport> {
    g.validate(z)?;
    let support: Vec<Element> = mu.support().cloned().collect();
    let k = support.len() as u128;
    let needed = k.checked_pow(n as u32 + 1).and_then(|v| v.checked_mul(n as u128 + 1)).unwrap_or(u128::MAX);
    if needed > PHI_ENUMERATION_LIMIT {
        return Err(Error::TooLarge { needed, limit: PHI_ENUMERATION_LIMIT });
    }
    let rz = mu.rate(z);
    let show = |w: &Word| -> String {
        let parts: Vec<String> = w.letters.iter().map(|x| g.format_element(x)).collect();
        format!("[{}]", parts.join(", "))
    };

    let mut image: IndexMap<Word, usize> = IndexMap::new();
    let mut cases: Vec<(Word, usize, Word)> = Vec::new();
    let mut report = PhiReport {
        n,
        z: z.clone(),
        pairs_checked: 0,
        words_checked: 0,
        evaluation_ok: 0,
        weight_ok: 0,
        preimage_ok: 0,
        image_ok: 0,
        first_counterexample: None,
    };
    let fail = |report: &mut PhiReport, msg: String| {
        if report.first_counterexample.is_none() {
            report.first_counterexample = Some(msg);
        }
    };

    for w in words(&support, n) {
        let target = g.mul(&w.val(g), z);
        let weight = {
            let mut with_z = w.clone();
            with_z.letters.push(z.clone());
            with_z.weight(mu)
        };
        for i in 1..=n + 1 {
            let eta = phi_insert(&w, i, z, g)?;
            report.pairs_checked += 1;
            if eta.val(g) == target {
                report.evaluation_ok += 1;
            } else {
                fail(&mut report, format!("val(phi({}, {i})) != val(w) z", show(&w)));
            }
            if eta.weight(mu).to_bits() == weight.to_bits() && rz > 0.0 {
                report.weight_ok += 1;
            } else {
                fail(&mut report, format!("weight of phi({}, {i}) is not mu(w) mu(z)", show(&w)));
            }
            *image.entry(eta.clone()).or_insert(0) += 1;
            cases.push((w.clone(), i, eta));
        }
    }
    for (w, i, eta) in &cases {
        let fibre = image[eta];
        if fibre == 1 + ell(w, z, g) {
            report.preimage_ok += 1;
        } else {
            fail(&mut report, format!("|phi^-1(phi({}, {i}))| = {fibre} != 1 + ell_z(w)", show(w)));
        }
    }
    for eta in words(&support, n + 1) {
        report.words_checked += 1;
        if image.contains_key(&eta) == (ell(&eta, z, g) != 0) {
            report.image_ok += 1;
        } else {
            fail(&mut report, format!("{} in image disagrees with ell_z != 0", show(&eta)));
        }
    }
    // images that leave supp(mu)^{n+1} are never visited above
    let stray = image.keys().find(|eta| eta.letters.iter().any(|x| mu.rate(x) == 0.0));
    if let Some(eta) = stray {
        fail(&mut report, format!("phi leaves the support: {}", show(eta)));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// exact joint law of (val, ell_z)

/// Law of `(val(W_1..W_n), ell_z(W_1..W_n))` for i.i.d. letters from `mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointLaw {
    pub n: usize,
    pub z: Element,
    pub table: IndexMap<(Element, usize), f64>,
}

impl JointLaw {
    pub fn total(&self) -> f64 {
        self.table.values().sum()
    }

    /// Marginal law of the endpoint.
    pub fn element_marginal(&self) -> IndexMap<Element, f64> {
        let mut out = IndexMap::new();
        for ((x, _), p) in &self.table {
            *out.entry(x.clone()).or_insert(0.0) += p;
        }
        out
    }

    /// Marginal law of the count, indexed `0..=n`.
    pub fn count_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n + 1];
        for ((_, k), p) in &self.table {
            out[*k] += p;
        }
        out
    }
}

/// Right-to-left DP: prepending `u` to a word with suffix product `s` bumps
/// the count iff `u = s z s^-1`, and moves the state to `u s`.
struct JointLawDp<'a> {
    g: &'a GroupSpec,
    mu: &'a RateMeasure,
    z: Element,
    n: usize,
    state: IndexMap<(Element, usize), f64>,
}

impl<'a> JointLawDp<'a> {
    fn new(g: &'a GroupSpec, mu: &'a RateMeasure, z: &Element) -> Self {
        let mut state = IndexMap::new();
        state.insert((g.identity(), 0), 1.0);
        Self { g, mu, z: z.clone(), n: 0, state }
    }

    fn step(&mut self) -> Result<()> {
        let mut next: IndexMap<(Element, usize), f64> = IndexMap::with_capacity(self.state.len() * 2);
        let mut conj_cache: IndexMap<Element, Element> = IndexMap::new();
        for ((s, k), p) in &self.state {
            let target = conj_cache.entry(s.clone()).or_insert_with(|| self.g.conj(s, &self.z)).clone();
            for (u, r) in self.mu.iter() {
                let k2 = if *u == target { k + 1 } else { *k };
                *next.entry((self.g.mul(u, s), k2)).or_insert(0.0) += p * r;
            }
        }
        if next.len() > MAX_DP_STATES {
            return Err(Error::TooLarge { needed: next.len() as u128, limit: MAX_DP_STATES as u128 });
        }
        self.state = next;
        self.n += 1;
        Ok(())
    }

    fn law(&self) -> JointLaw {
        JointLaw { n: self.n, z: self.z.clone(), table: self.state.clone() }
    }
}

pub fn joint_law_val_ell(g: &GroupSpec, mu: &RateMeasure, n: usize, z: &Element) -> Result<JointLaw> {
    if n > MAX_DP_LENGTH {
        return Err(Error::TooLarge { needed: n as u128, limit: MAX_DP_LENGTH as u128 });
    }
    mu.require_normalized()?;
    g.validate(z)?;
    let mut dp = JointLawDp::new(g, mu, z);
    for _ in 0..n {
        dp.step()?;
    }
    Ok(dp.law())
}

/// Calls `visit(n, P(N_t = n), law_n)` for `n = 0..=N`, with `N` the Poisson
/// truncation point for `kernel_tol`. Returns the Poisson tail bound.
fn poisson_mixture(
    g: &GroupSpec,
    mu: &RateMeasure,
    t: f64,
    z: &Element,
    kernel_tol: f64,
    mut visit: impl FnMut(usize, f64, &IndexMap<(Element, usize), f64>),
) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("time must be finite and non-negative, got {t}")));
    }
    mu.require_normalized()?;
    g.validate(z)?;
    let weights = poisson::truncated(t, kernel_tol, 0);
    if weights.len() - 1 > MAX_DP_LENGTH {
        return Err(Error::Truncation(format!(
            "t = {t} needs {} Poisson terms, above the DP limit {MAX_DP_LENGTH}",
            weights.len() - 1
        )));
    }
    let mut dp = JointLawDp::new(g, mu, z);
    for (n, &w) in weights.iter().enumerate() {
        if n > 0 {
            dp.step()?;
        }
        visit(n, w, &dp.state);
    }
    Ok(poisson::tail_bound(t, weights.len() - 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonLawReport {
    pub t: f64,
    pub z: Element,
    /// `t mu(z)`.
    pub mean: f64,
    /// `P(N_{t,z} = k)` for `k = 0..=N`.
    pub law: Vec<f64>,
    pub max_deviation: f64,
    pub tail_bound: f64,
    pub passed: bool,
}

/// Law of `N_{t,z} = ell_z(W_1..W_{N_t})` against `Poisson(t mu(z))`.
pub fn verify_poisson_law(g: &GroupSpec, mu: &RateMeasure, t: f64, z: &Element, tol: f64) -> Result<PoissonLawReport> {
    let mut law: Vec<f64> = Vec::new();
    let tail_bound = poisson_mixture(g, mu, t, z, DEFAULT_KERNEL_TOL, |n, w, state| {
        if law.len() < n + 1 {
            law.resize(n + 1, 0.0);
        }
        for ((_, k), p) in state {
            law[*k] += w * p;
        }
    })?;
    let mean = t * mu.rate(z);
    let max_deviation = law
        .iter()
        .enumerate()
        .map(|(k, &p)| (p - poisson::pmf(mean, k)).abs())
        .fold(0.0, f64::max);
    Ok(PoissonLawReport { t, z: z.clone(), mean, law, max_deviation, tail_bound, passed: max_deviation <= tol })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChangeOfMeasure {
    pub x: Element,
    /// `P(X_t = xz, N_{t,z} != 0)`.
    pub lhs: f64,
    /// `t mu(z) E[1/(1 + N_{t,z}); X_t = x]`.
    pub rhs: f64,
    pub gap: f64,
    pub passed: bool,
}

/// Both sides of the change-of-measure identity for every reachable `x`
/// (and every `x` whose `xz` is reachable).
pub fn change_of_measure_all(g: &GroupSpec, mu: &RateMeasure, t: f64, z: &Element, tol: f64) -> Result<Vec<ChangeOfMeasure>> {
    let mut hit: IndexMap<Element, f64> = IndexMap::new();
    let mut harmonic: IndexMap<Element, f64> = IndexMap::new();
    poisson_mixture(g, mu, t, z, DEFAULT_KERNEL_TOL, |_, w, state| {
        for ((y, k), p) in state {
            if *k != 0 {
                *hit.entry(y.clone()).or_insert(0.0) += w * p;
            }
            *harmonic.entry(y.clone()).or_insert(0.0) += w * p / (1.0 + *k as f64);
        }
    })?;
    let rz = mu.rate(z);
    let z_inv = g.inv(z);
    let mut xs: IndexSet<Element> = harmonic.keys().cloned().collect();
    xs.extend(hit.keys().map(|y| g.mul(y, &z_inv)));
    Ok(xs
        .into_iter()
        .map(|x| {
            let lhs = hit.get(&g.mul(&x, z)).copied().unwrap_or(0.0);
            let rhs = t * rz * harmonic.get(&x).copied().unwrap_or(0.0);
            let gap = (lhs - rhs).abs();
            ChangeOfMeasure { x, lhs, rhs, gap, passed: gap <= tol }
        })
        .collect())
}

pub fn verify_change_of_measure(
    g: &GroupSpec,
    mu: &RateMeasure,
    t: f64,
    x: &Element,
    z: &Element,
    tol: f64,
) -> Result<ChangeOfMeasure> {
    g.validate(x)?;
    let all = change_of_measure_all(g, mu, t, z, tol)?;
    Ok(all.into_iter().find(|c| c.x == *x).unwrap_or(ChangeOfMeasure {
        x: x.clone(),
        lhs: 0.0,
        rhs: 0.0,
        gap: 0.0,
        passed: true,
    }))
}
