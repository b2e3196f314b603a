//! Jump-rate measures and the symmetry / conjugacy-invariance checks.

use std::collections::BTreeMap;

use crate::group::{Element, GroupSpec};
use crate::{Error, Result};

/// Tolerance on `|sum(mu) - 1|` for a measure to count as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A generator `e_i` with its rate `mu_i = mu(e_i) = mu(e_i^-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub element: Element,
    pub rate: f64,
}

/// A finitely supported jump measure on a group.
///
/// `entries` is the measure itself. `generators` pairs every support element
/// with its inverse and keeps one representative per pair, so an involution
/// contributes once and any other generator contributes twice to the total
/// mass.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMeasure {
    entries: BTreeMap<Element, f64>,
    generators: Vec<Generator>,
    total_mass: f64,
}

impl RateMeasure {
    /// Builds `mu = sum_i mu_i (delta_{e_i} + delta_{e_i^-1})`, with a single
    /// atom of mass `mu_i` when `e_i` is an involution.
    pub fn from_generators(g: &GroupSpec, gens: &[(Element, f64)]) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (e, rate) in gens {
            g.validate(e)?;
            if g.is_identity(e) {
                return Err(Error::InvalidMeasure("the identity cannot be a generator".into()));
            }
            if !(rate.is_finite() && *rate > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "rate of {} must be positive and finite, got {rate}",
                    g.format_element(e)
                )));
            }
            let e_inv = g.inv(e);
            if entries.contains_key(e) || entries.contains_key(&e_inv) {
                return Err(Error::InvalidMeasure(format!(
                    "generator {} listed twice (possibly as an inverse)",
                    g.format_element(e)
                )));
            }
            entries.insert(e.clone(), *rate);
            entries.insert(e_inv, *rate);
        }
        Self::from_entries(g, entries)
    }

    /// Takes the measure as given. Asymmetric or non-class-function inputs are
    /// accepted here so that [`validate_rate_measure`] can report them; only
    /// malformed elements, mass at the identity and non-positive rates are
    /// refused.
    pub fn from_entries(g: &GroupSpec, entries: BTreeMap<Element, f64>) -> Result<Self> {
        for (z, &rate) in &entries {
            g.validate(z)?;
            if g.is_identity(z) {
                return Err(Error::InvalidMeasure("mu(identity) > 0 is not allowed".into()));
            }
            if !(rate.is_finite() && rate > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "rate of {} must be positive and finite, got {rate}",
                    g.format_element(z)
                )));
            }
        }
        let mut generators = Vec::new();
        for (z, &rate) in &entries {
            let z_inv = g.inv(z);
            if *z <= z_inv || !entries.contains_key(&z_inv) {
                generators.push(Generator { element: z.clone(), rate });
            }
        }
        let total_mass = entries.values().sum();
        Ok(Self { entries, generators, total_mass })
    }

    /// Uniform probability on the given elements (duplicates ignored).
    pub fn uniform(g: &GroupSpec, support: &[Element]) -> Result<Self> {
        let mut set: Vec<&Element> = support.iter().collect();
        set.sort();
        set.dedup();
        if set.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        let rate = 1.0 / set.len() as f64;
        Self::from_entries(g, set.into_iter().map(|z| (z.clone(), rate)).collect())
    }

    /// Uniform measure on the transpositions of `S_n`.
    pub fn transpositions(g: &GroupSpec) -> Result<Self> {
        let crate::GroupFamily::Symmetric(n) = g.family() else {
            return Err(Error::InvalidMeasure(format!("{g} is not a symmetric group")));
        };
        let mut ts = Vec::new();
        for i in 0..*n {
            for j in (i + 1)..*n {
                let mut p: Vec<u8> = (0..*n as u8).collect();
                p.swap(i, j);
                ts.push(Element::Perm(p));
            }
        }
        Self::uniform(g, &ts)
    }

    /// Rate `rate` on each signed unit vector `+-e_j` of a lattice. On a
    /// factor of modulus 2 the two coincide and carry a single atom.
    pub fn unit_vectors(g: &GroupSpec, rate: f64) -> Result<Self> {
        let crate::GroupFamily::Lattice(m) = g.family() else {
            return Err(Error::InvalidMeasure(format!("{g} is not a lattice")));
        };
        let gens: Vec<(Element, f64)> = (0..m.len())
            .filter(|&j| m[j] != 1)
            .map(|j| {
                let mut v = vec![0i64; m.len()];
                v[j] = 1;
                (Element::Lattice(v), rate)
            })
            .collect();
        Self::from_generators(g, &gens)
    }

    /// The same measure scaled to total mass one.
    pub fn normalized(&self) -> Self {
        let s = self.total_mass;
        Self {
            entries: self.entries.iter().map(|(z, r)| (z.clone(), r / s)).collect(),
            generators: self
                .generators
                .iter()
                .map(|gen| Generator { element: gen.element.clone(), rate: gen.rate / s })
                .collect(),
            total_mass: 1.0,
        }
    }

    pub fn rate(&self, z: &Element) -> f64 {
        self.entries.get(z).copied().unwrap_or(0.0)
    }

    pub fn entries(&self) -> &BTreeMap<Element, f64> {
        &self.entries
    }

    /// Support elements with their rates, in a fixed order.
    pub fn iter(&self) -> impl Iterator<Item = (&Element, f64)> + '_ {
        self.entries.iter().map(|(z, &r)| (z, r))
    }

    pub fn support(&self) -> impl Iterator<Item = &Element> + '_ {
        self.entries.keys()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// The number `d` of generators.
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn is_normalized(&self) -> bool {
        (self.total_mass - 1.0).abs() <= NORMALIZATION_TOL
    }

    /// Smallest non-zero rate.
    pub fn min_rate(&self) -> Option<f64> {
        self.entries.values().copied().reduce(f64::min)
    }

    /// Whether every support element is an involution.
    pub fn involutive_support(&self, g: &GroupSpec) -> bool {
        self.entries.keys().all(|z| g.inv(z) == *z)
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::Domain(format!("rate measure must have total mass 1, got {}", self.total_mass)))
        }
    }
}

/// How conjugacy invariance was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassCheck {
    /// Every pair `(x, z)` with `z` in the support was enumerated.
    Enumerated,
    /// Abelian group, conjugation is trivial.
    Abelian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Support elements with `mu(z) != mu(z^-1)`, compared bit for bit.
    pub symmetry_violations: Vec<Element>,
    /// Pairs `(x, z)` with `mu(x z x^-1) != mu(z)`.
    pub class_violations: Vec<(Element, Element)>,
    pub class_check: ClassCheck,
}

impl ValidationReport {
    pub fn symmetric(&self) -> bool {
        self.symmetry_violations.is_empty()
    }

    pub fn conjugacy_invariant(&self) -> bool {
        self.class_violations.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.symmetric() && self.conjugacy_invariant()
    }
}

/// Checks symmetry exactly and conjugacy invariance by enumeration.
///
/// Only `z` in the support is enumerated: a violation at `z` outside the
/// support implies one at the support element `x z x^-1` with witness `x^-1`.
pub fn validate_rate_measure(g: &GroupSpec, mu: &RateMeasure) -> Result<ValidationReport> {
    for (z, _) in mu.iter() {
        g.validate(z)?;
        if g.is_identity(z) {
            return Err(Error::InvalidMeasure("mu(identity) > 0".into()));
        }
    }
    let symmetry_violations = mu
        .iter()
        .filter(|(z, r)| mu.rate(&g.inv(z)).to_bits() != r.to_bits())
        .map(|(z, _)| z.clone())
        .collect();

    let (class_check, class_violations) = if g.is_abelian() {
        (ClassCheck::Abelian, Vec::new())
    } else if g.is_finite() {
        let mut bad = Vec::new();
        for x in g.enumerate()? {
            for (z, r) in mu.iter() {
                if mu.rate(&g.conj(&x, z)).to_bits() != r.to_bits() {
                    bad.push((x.clone(), z.clone()));
                }
            }
        }
        (ClassCheck::Enumerated, bad)
    } else {
        return Err(Error::Unsupported(format!(
            "conjugacy invariance on the infinite non-abelian group {g} cannot be enumerated"
        )));
    };
    Ok(ValidationReport { symmetry_violations, class_violations, class_check })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transposition_walk_is_valid() {
        let g = GroupSpec::symmetric(4).unwrap();
        let mu = RateMeasure::transpositions(&g).unwrap();
        assert_eq!(mu.support_size(), 6);
        assert_eq!(mu.num_generators(), 6);
        assert!(mu.is_normalized());
        let rep = validate_rate_measure(&g, &mu).unwrap();
        assert!(rep.is_valid());
        assert_eq!(rep.class_check, ClassCheck::Enumerated);
    }

    #[test]
    fn integer_walk_is_trivially_valid() {
        let g = GroupSpec::integer_lattice(1).unwrap();
        let mu = RateMeasure::unit_vectors(&g, 0.5).unwrap();
        assert_eq!(mu.support_size(), 2);
        assert_eq!(mu.num_generators(), 1);
        assert_eq!(mu.total_mass(), 1.0);
        let rep = validate_rate_measure(&g, &mu).unwrap();
        assert!(rep.is_valid());
        assert_eq!(rep.class_check, ClassCheck::Abelian);
    }

    #[test]
    fn single_transposition_violates_class_invariance() {
        let g = GroupSpec::symmetric(3).unwrap();
        let t12 = g.parse_element("(1 2)").unwrap();
        let t13 = g.parse_element("(1 3)").unwrap();
        let mu = RateMeasure::from_generators(&g, &[(t12.clone(), 1.0)]).unwrap();
        let rep = validate_rate_measure(&g, &mu).unwrap();
        assert!(rep.symmetric());
        assert!(!rep.conjugacy_invariant());
        assert!(rep.class_violations.contains(&(t13.clone(), t12.clone())));
        assert_eq!(g.conj(&t13, &t12), g.parse_element("(2 3)").unwrap());
    }

    #[test]
    fn asymmetric_measure_is_reported() {
        let g = GroupSpec::cyclic(5).unwrap();
        let mut entries = BTreeMap::new();
        entries.insert(Element::Lattice(vec![1]), 0.7);
        entries.insert(Element::Lattice(vec![4]), 0.3);
        let mu = RateMeasure::from_entries(&g, entries).unwrap();
        let rep = validate_rate_measure(&g, &mu).unwrap();
        assert_eq!(rep.symmetry_violations.len(), 2);
        assert!(!rep.is_valid());
    }

    #[test]
    fn identity_and_bad_rates_are_rejected() {
        let g = GroupSpec::cyclic(4).unwrap();
        assert!(RateMeasure::from_generators(&g, &[(g.identity(), 1.0)]).is_err());
        assert!(RateMeasure::from_generators(&g, &[(Element::Lattice(vec![1]), 0.0)]).is_err());
        assert!(RateMeasure::from_generators(&g, &[(Element::Lattice(vec![1]), f64::NAN)]).is_err());
        assert!(RateMeasure::from_generators(
            &g,
            &[(Element::Lattice(vec![1]), 0.5), (Element::Lattice(vec![3]), 0.5)]
        )
        .is_err());
    }

    #[test]
    fn infinite_nonabelian_is_unsupported_but_lattices_pass() {
        let g = GroupSpec::integer_lattice(3).unwrap();
        let mu = RateMeasure::unit_vectors(&g, 1.0 / 6.0).unwrap();
        assert!(validate_rate_measure(&g, &mu).unwrap().is_valid());
        assert_eq!(mu.num_generators(), 3);
    }

    #[test]
    fn total_mass_counts_involutions_once() {
        let g = GroupSpec::lattice(vec![2, 5]).unwrap();
        let mu = RateMeasure::unit_vectors(&g, 0.25).unwrap();
        // e1 is an involution, e2 is not
        assert_eq!(mu.support_size(), 3);
        assert_eq!(mu.num_generators(), 2);
        assert!((mu.total_mass() - 0.75).abs() < 1e-15);
        assert!(!mu.is_normalized());
        assert!(mu.normalized().is_normalized());
        assert!(!mu.involutive_support(&g));
        let h = GroupSpec::hypercube(4).unwrap();
        assert!(RateMeasure::unit_vectors(&h, 0.25).unwrap().involutive_support(&h));
    }

    #[test]
    fn class_constant_measures_pass_and_perturbations_fail() {
        for g in [GroupSpec::symmetric(4).unwrap(), GroupSpec::dihedral(6).unwrap()] {
            let classes = g.conjugacy_classes().unwrap();
            let mut entries = BTreeMap::new();
            for (k, class) in classes.iter().enumerate().skip(1) {
                for z in class {
                    entries.insert(z.clone(), 1.0 / (k as f64 + 1.0));
                }
            }
            let mu = RateMeasure::from_entries(&g, entries.clone()).unwrap();
            assert!(validate_rate_measure(&g, &mu).unwrap().is_valid(), "{g}");

            // a class strictly larger than {z, z^-1}
            let class = classes
                .iter()
                .skip(1)
                .find(|c| c.len() > if g.inv(&c[0]) == c[0] { 1 } else { 2 })
                .unwrap();
            let target = &class[0];
            let rate = entries[target];
            // perturb z and z^-1 together so only class invariance breaks
            entries.insert(target.clone(), rate * 1.1);
            entries.insert(g.inv(target), rate * 1.1);
            let bumped = RateMeasure::from_entries(&g, entries).unwrap();
            let rep = validate_rate_measure(&g, &bumped).unwrap();
            assert!(rep.symmetric());
            assert!(!rep.conjugacy_invariant(), "{g}");
        }
    }
}
