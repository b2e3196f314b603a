//! Values frozen from independent computations: modified Bessel functions for
//! the integers, dense matrix exponentials and eigensolvers for the finite
//! groups, and direct Poisson sums for `U`.

mod common;

use common::rel_err;
use conjwalk::bounds::{self, u_func, v_func, DEFAULT_U_TOL};
use conjwalk::cutoff::{self, mixing_time, relaxation_time};
use conjwalk::heat::{expected_gamma_log, heat_kernel, info_stats, DEFAULT_KERNEL_TOL, DEFAULT_WEIGHT_FLOOR};
use conjwalk::{Element, GroupSpec, RateMeasure};

fn z(k: i64) -> Element {
    Element::Lattice(vec![k])
}

// f_t(k) = e^{-t} I_k(t); (t, f(0), f(1), f(3), entropy, varentropy, 2t E[Gamma log f_t])
const INTEGER_WALK: [(f64, f64, f64, f64, f64, f64, f64); 3] = [
    (0.5, 0.6450352704491501, 0.15642080318487167, 0.0016043415075654604, 1.0385052718368515, 0.876003609695821, 1.2601794973551288),
    (2.0, 0.308508322553671, 0.21526928924893765, 0.028791222639470884, 1.7611813286638187, 0.6110876370138197, 1.107803714335072),
    (4.0, 0.20700192122398664, 0.1787508395024353, 0.061124338029666284, 2.1109681577934025, 0.5574673778115248, 1.0559874890231529),
];

#[test]
fn integer_walk_matches_bessel_series() {
    let (g, mu) = bounds::integer_walk();
    for (t, f0, f1, f3, h, v, grad) in INTEGER_WALK {
        let f = heat_kernel(&g, &mu, t, DEFAULT_KERNEL_TOL).unwrap();
        assert!((f.get(&z(0)) - f0).abs() < 2e-12, "t={t}");
        assert!((f.get(&z(1)) - f1).abs() < 2e-12);
        assert!((f.get(&z(-1)) - f1).abs() < 2e-12);
        assert!((f.get(&z(3)) - f3).abs() < 2e-12);
        let s = info_stats(&f).unwrap();
        assert!(rel_err(s.entropy, h) < 1e-10, "{} vs {h}", s.entropy);
        assert!(rel_err(s.varentropy, v) < 1e-9, "{} vs {v}", s.varentropy);
        let gl = expected_gamma_log(&g, &mu, &f, DEFAULT_WEIGHT_FLOOR).unwrap();
        assert!(rel_err(2.0 * t * gl.value, grad) < 1e-9, "{} vs {grad}", 2.0 * t * gl.value);
    }
}

#[test]
fn integer_walk_large_time_varentropy() {
    let (g, mu) = bounds::integer_walk();
    let f = heat_kernel(&g, &mu, 1000.0, DEFAULT_KERNEL_TOL).unwrap();
    assert!((info_stats(&f).unwrap().varentropy - 0.5002498752907474).abs() < 1e-9);
}

#[test]
fn small_time_sharpness_ratio_matches_bessel_series() {
    // the same quantity at t = 1e-3 and 1e-4; the ratio decreases to 1 only
    // like (1 + log 2 / log(1/t))^2
    let r3 = bounds::sharpness_row(1e-3, DEFAULT_KERNEL_TOL).unwrap();
    assert!((r3.varentropy - 0.05772138828583555).abs() < 1e-12);
    let r4 = bounds::sharpness_row(1e-4, DEFAULT_KERNEL_TOL).unwrap();
    assert!((r4.small_t_ratio.unwrap() - 1.156071315981003).abs() < 1e-9);
}

#[test]
fn s3_kernel_matches_matrix_exponential() {
    let g = GroupSpec::symmetric(3).unwrap();
    let mu = RateMeasure::transpositions(&g).unwrap();
    let cases = [(0.5, 0.6323336800036626, 0.10535342647142629, 0.025803020291029245), (
        1.5,
        0.32371795149359794,
        0.15836882193868898,
        0.10058779134516783,
    )];
    for (t, id, transposition, three_cycle) in cases {
        let f = heat_kernel(&g, &mu, t, DEFAULT_KERNEL_TOL).unwrap();
        assert!((f.get(&g.identity()) - id).abs() < 1e-12);
        for s in ["(1 2)", "(1 3)", "(2 3)"] {
            assert!((f.get(&g.parse_element(s).unwrap()) - transposition).abs() < 1e-12);
        }
        for s in ["(1 2 3)", "(1 3 2)"] {
            assert!((f.get(&g.parse_element(s).unwrap()) - three_cycle).abs() < 1e-12);
        }
    }
}

#[test]
fn u_matches_direct_poisson_sum() {
    let cases = [
        (0.01, 0.4255223644764371),
        (0.1, 1.1327683478530959),
        ((-1.0f64).exp(), 1.2251314631745738),
        (1.0, 1.136868721448446),
        (10.0, 1.0652263322658504),
        (100.0, 1.024334317540127),
    ];
    for (t, u) in cases {
        assert!(rel_err(u_func(t, DEFAULT_U_TOL), u) < 1e-10, "t={t}");
    }
    assert!((v_func(1.0) - 0.4804530139182014).abs() < 1e-15);
}

#[test]
fn relaxation_times() {
    let g = GroupSpec::symmetric(4).unwrap();
    let mu = RateMeasure::transpositions(&g).unwrap();
    assert!(rel_err(relaxation_time(&g, &mu).unwrap(), 1.5) < 1e-10);

    // uniform on the five non-identity elements of S3: -L = I - (J - I)/5
    let g = GroupSpec::symmetric(3).unwrap();
    let others: Vec<Element> = g.enumerate().unwrap().into_iter().skip(1).collect();
    let mu = RateMeasure::uniform(&g, &others).unwrap();
    assert!(rel_err(relaxation_time(&g, &mu).unwrap(), 5.0 / 6.0) < 1e-10);
}

#[test]
fn mixing_times_match_dense_bisection() {
    let g = GroupSpec::cyclic(12).unwrap();
    let mu = RateMeasure::unit_vectors(&g, 0.5).unwrap();
    let m = mixing_time(&g, &mu, cutoff::DEFAULT_EPS).unwrap();
    assert!(rel_err(m.t_mix, 6.953857541846091) < 1e-5, "{}", m.t_mix);

    let g = GroupSpec::symmetric(4).unwrap();
    let mu = RateMeasure::transpositions(&g).unwrap();
    let m = mixing_time(&g, &mu, cutoff::DEFAULT_EPS).unwrap();
    assert!(rel_err(m.t_mix, 2.2346432217796246) < 1e-5, "{}", m.t_mix);
}

#[test]
fn cutoff_reports() {
    let g = GroupSpec::hypercube(8).unwrap();
    let mu = RateMeasure::unit_vectors(&g, 0.125).unwrap();
    let c = cutoff::cutoff_report(&g, &mu, cutoff::DEFAULT_EPS).unwrap();
    assert!(c.criterion_rhs <= 1.0 + (16.0f64 * 8.0).sqrt());
    assert!(rel_err(c.t_rel, 4.0) < 1e-10);
    assert_eq!(c.d, 8);

    let g = GroupSpec::symmetric(4).unwrap();
    let mu = RateMeasure::transpositions(&g).unwrap();
    let c = cutoff::cutoff_report(&g, &mu, cutoff::DEFAULT_EPS).unwrap();
    assert!(c.within_dimension_bound());
    assert!((c.ratio - c.t_mix / 1.5).abs() < 1e-9);
}

#[test]
fn lattice_plane_approaches_half_the_rank() {
    let g = GroupSpec::integer_lattice(2).unwrap();
    let mu = RateMeasure::unit_vectors(&g, 0.25).unwrap();
    let row = bounds::theorem_row(&g, &mu, 100.0, DEFAULT_KERNEL_TOL).unwrap();
    assert!((row.varentropy - 1.0).abs() < 0.1, "{}", row.varentropy);
    assert!(row.holds(bounds::CHAIN_SLACK));
    assert!(!row.prior_valid);
}
