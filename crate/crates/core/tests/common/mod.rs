#![allow(dead_code)]

use std::collections::BTreeMap;
use std::io::Write;

use conjwalk::curvature::TestFunction;
use conjwalk::{Element, GroupSpec, RateMeasure};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Writes past the test harness capture so the line shows up in every run.
pub fn report(label: &str, passed: bool, detail: &str) {
    let mark = if passed { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "[{mark}] {label}: {detail}");
    let _ = out.flush();
}

/// Random positive rates, constant on every conjugacy class that is kept.
/// At least one non-trivial class is always kept.
pub fn random_class_measure(g: &GroupSpec, rng: &mut ChaCha8Rng) -> RateMeasure {
    let classes: Vec<Vec<Element>> = g.conjugacy_classes().unwrap().into_iter().skip(1).collect();
    let forced = rng.random_range(0..classes.len());
    let mut entries = BTreeMap::new();
    let mut done: Vec<bool> = vec![false; classes.len()];
    for i in 0..classes.len() {
        if done[i] {
            continue;
        }
        // a class and its inverse class share one rate
        let inv: Vec<Element> = classes[i].iter().map(|x| g.inv(x)).collect();
        let j = classes.iter().position(|c| c.contains(&inv[0])).unwrap();
        done[i] = true;
        done[j] = true;
        if i != forced && j != forced && rng.random_bool(0.5) {
            continue;
        }
        let r: f64 = rng.random_range(0.05..1.0);
        for x in classes[i].iter().chain(&classes[j]) {
            entries.insert(x.clone(), r);
        }
    }
    RateMeasure::from_entries(g, entries).unwrap().normalized()
}

/// Random positive rates on the unit vectors of a hypercube.
pub fn random_unit_vector_measure(g: &GroupSpec, dim: usize, rng: &mut ChaCha8Rng) -> RateMeasure {
    let gens: Vec<(Element, f64)> = (0..dim)
        .map(|i| {
            let mut v = vec![0; dim];
            v[i] = 1;
            (Element::Lattice(v), rng.random_range(0.05..1.0))
        })
        .collect();
    RateMeasure::from_generators(g, &gens).unwrap().normalized()
}

/// Uniform random values in `[-1, 1]` on the given points.
pub fn random_function(points: &[Element], rng: &mut ChaCha8Rng) -> TestFunction {
    TestFunction::from_pairs(points.iter().map(|x| (x.clone(), rng.random_range(-1.0..1.0))))
}

/// Every product of at most two support elements, identity included.
pub fn ball2(g: &GroupSpec, mu: &RateMeasure) -> Vec<Element> {
    let mut pts = vec![g.identity()];
    for z in mu.support() {
        pts.push(z.clone());
        for w in mu.support() {
            pts.push(g.mul(z, w));
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
