use anyhow::{Context, Result};
use conjwalk::bounds::{self, BoundRow, CHAIN_SLACK, DEFAULT_U_TOL};
use conjwalk::curvature::{self, TestFunction, KAPPA_TOL};
use conjwalk::cutoff;
use conjwalk::heat::{self, DEFAULT_WEIGHT_FLOOR, QUANTILE_LEVELS};
use conjwalk::measure::validate_rate_measure;
use conjwalk::trajectory::{self, PathSampler};
use conjwalk::{Element, GroupSpec, RateMeasure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::report::{Cell, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Heat,
    Stats,
    Curvature,
    VerifyLemmas,
    BoundReport,
    Sharpness,
    CutoffReport,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Heat => "heat",
            Command::Stats => "stats",
            Command::Curvature => "curvature",
            Command::VerifyLemmas => "verify-lemmas",
            Command::BoundReport => "bound-report",
            Command::Sharpness => "sharpness",
            Command::CutoffReport => "cutoff-report",
        }
    }
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    g: &'a GroupSpec,
    mu: &'a RateMeasure,
    walk: String,
}

impl Ctx<'_> {
    fn at(&self, t: f64) -> String {
        format!("group={}, mu={}, t={t}", self.g, self.walk)
    }

    fn here(&self) -> String {
        format!("group={}, mu={}", self.g, self.walk)
    }
}

pub fn run(cmd: Command, cfg: &ExperimentConfig) -> Result<Report> {
    let g = &cfg.group;
    if cmd == Command::Sharpness {
        return sharpness(cfg);
    }
    let mu = cfg.measure().with_context(|| format!("group={g}: building the rate measure"))?;
    let ctx = Ctx { cfg, g, mu: &mu, walk: bounds::describe_walk(g, &mu) };
    match cmd {
        Command::Validate => validate(&ctx),
        Command::Heat => heat_table(&ctx),
        Command::Stats => stats(&ctx),
        Command::Curvature => curvature_checks(&ctx),
        Command::VerifyLemmas => verify_lemmas(&ctx),
        Command::BoundReport => bound_report(&ctx),
        Command::CutoffReport => cutoff_report(&ctx),
        Command::Sharpness => unreachable!(),
    }
}

fn finish(mut report: Report) -> Report {
    if let Some(false) = report.passed_from_rows() {
        if report.failures.is_empty() {
            report.fail("a row did not pass".into());
        }
        report.passed = false;
    }
    report
}

fn validate(ctx: &Ctx) -> Result<Report> {
    let (g, mu) = (ctx.g, ctx.mu);
    let mut r = Report::new("validate", ctx.cfg.echo.clone(), &["check", "passed", "detail"]);
    let v = validate_rate_measure(g, mu).with_context(|| ctx.here())?;
    let fmt_pairs = |pairs: &[(Element, Element)]| -> String {
        pairs
            .iter()
            .take(5)
            .map(|(x, z)| format!("x={} z={}", g.format_element(x), g.format_element(z)))
            .collect::<Vec<_>>()
            .join("; ")
    };
    let sym: Vec<String> = v.symmetry_violations.iter().take(5).map(|z| g.format_element(z)).collect();
    r.push(vec!["symmetry".into(), v.symmetric().into(), sym.join("; ").into()]);
    r.push(vec![
        "conjugacy_invariance".into(),
        v.conjugacy_invariant().into(),
        format!("{:?} {}", v.class_check, fmt_pairs(&v.class_violations)).trim().to_string().into(),
    ]);
    r.push(vec!["normalized".into(), mu.is_normalized().into(), format!("total mass {}", mu.total_mass()).into()]);
    if g.is_finite() {
        let d = g.cayley_diameter(mu.support()).with_context(|| ctx.here())?;
        r.push(vec![
            "generates".into(),
            d.generates.into(),
            format!("reached {} elements, diameter {}", d.reached, d.diameter).into(),
        ]);
    }
    Ok(finish(r))
}

fn heat_table(ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new("heat", ctx.cfg.echo.clone(), &["t", "element", "probability", "deficit", "passed"]);
    for &t in &ctx.cfg.t_grid {
        let f = heat::heat_kernel(ctx.g, ctx.mu, t, ctx.cfg.kernel_tol).with_context(|| ctx.at(t))?;
        let ok = f.deficit() <= ctx.cfg.kernel_tol;
        for (x, p) in f.iter() {
            r.push(vec![t.into(), ctx.g.format_element(x).into(), p.into(), f.deficit().into(), ok.into()]);
        }
    }
    Ok(finish(r))
}

fn stats(ctx: &Ctx) -> Result<Report> {
    let mut cols = vec!["t", "entropy", "varentropy"];
    let qnames: Vec<String> = QUANTILE_LEVELS.iter().map(|q| format!("info_q{:02}", (q * 100.0).round() as u32)).collect();
    cols.extend(qnames.iter().map(String::as_str));
    cols.extend(["two_t_gamma_log", "deficit", "passed"]);
    let mut r = Report::new("stats", ctx.cfg.echo.clone(), &cols);
    let rows: Vec<Result<Vec<Cell>>> = pool(ctx.cfg)?.install(|| {
        ctx.cfg
            .t_grid
            .par_iter()
            .map(|&t| {
                let f = heat::heat_kernel(ctx.g, ctx.mu, t, ctx.cfg.kernel_tol).with_context(|| ctx.at(t))?;
                let s = heat::info_stats(&f).with_context(|| ctx.at(t))?;
                let gl = heat::expected_gamma_log(ctx.g, ctx.mu, &f, DEFAULT_WEIGHT_FLOOR).with_context(|| ctx.at(t))?;
                let mut row: Vec<Cell> = vec![t.into(), s.entropy.into(), s.varentropy.into()];
                row.extend(s.info_quantiles.iter().map(|(_, q)| Cell::float(*q)));
                row.extend([(2.0 * t * gl.value).into(), s.deficit.into(), (s.varentropy <= 2.0 * t * gl.value + CHAIN_SLACK).into()]);
                Ok(row)
            })
            .collect()
    });
    for row in rows {
        r.push(row?);
    }
    Ok(finish(r))
}

fn random_functions(ctx: &Ctx) -> Result<Vec<TestFunction>> {
    let elements = ctx.g.enumerate().with_context(|| ctx.here())?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    Ok((0..ctx.cfg.test_functions)
        .map(|_| TestFunction::from_pairs(elements.iter().map(|x| (x.clone(), rng.random_range(-1.0..1.0)))))
        .collect())
}

fn curvature_checks(ctx: &Ctx) -> Result<Report> {
    let (g, mu) = (ctx.g, ctx.mu);
    let mut r = Report::new("curvature", ctx.cfg.echo.clone(), &["check", "t", "lhs", "rhs", "passed", "detail"]);
    let k = curvature::best_kappa(g, mu).with_context(|| ctx.here())?;
    let two_min = 2.0 * mu.min_rate().unwrap_or(0.0);
    r.push(vec![
        "kappa_best".into(),
        Cell::text(""),
        Cell::float(k.kappa_best),
        two_min.into(),
        (k.kappa_best >= -KAPPA_TOL).into(),
        format!("gamma2_psd={} ties={} ball={}", k.gamma2_psd, k.ties, k.ball.len()).into(),
    ]);
    if !g.is_finite() {
        return Ok(finish(r));
    }
    let fs = random_functions(ctx)?;
    for &t in &ctx.cfg.t_grid {
        for (i, f) in fs.iter().enumerate() {
            let c = curvature::check_local_poincare(g, mu, f, t, ctx.cfg.kernel_tol).with_context(|| ctx.at(t))?;
            r.push(vec!["local_poincare".into(), t.into(), c.lhs.into(), c.rhs.into(), c.holds.into(), format!("f{i}").into()]);
            if k.kappa_best.is_finite() {
                let s = curvature::check_subcommutation(g, mu, f, t, k.kappa_best, ctx.cfg.kernel_tol)
                    .with_context(|| ctx.at(t))?;
                r.push(vec![
                    "subcommutation".into(),
                    t.into(),
                    Cell::float(-s.min_slack),
                    0.0.into(),
                    s.holds.into(),
                    format!("f{i} worst={}", g.format_element(&s.worst)).into(),
                ]);
            }
        }
    }
    Ok(finish(r))
}

fn verify_lemmas(ctx: &Ctx) -> Result<Report> {
    let (g, mu, cfg) = (ctx.g, ctx.mu, ctx.cfg);
    let mut r = Report::new(
        "verify-lemmas",
        cfg.echo.clone(),
        &["section", "t", "n", "z", "value", "tolerance", "passed", "detail"],
    );
    let support: Vec<Element> = mu.support().cloned().collect();
    for n in 0..=cfg.phi_max_n {
        for z in &support {
            let rep = trajectory::verify_phi(g, mu, n, z)
                .with_context(|| format!("{}, phi at n={n}, z={}", ctx.here(), g.format_element(z)))?;
            r.push(vec![
                "phi".into(),
                Cell::text(""),
                n.into(),
                g.format_element(z).into(),
                rep.pairs_checked.into(),
                0.0.into(),
                rep.passed().into(),
                rep.first_counterexample.unwrap_or_default().into(),
            ]);
        }
    }
    for &t in &cfg.t_grid {
        for z in &support {
            let p = trajectory::verify_poisson_law(g, mu, t, z, cfg.lemma_tol).with_context(|| ctx.at(t))?;
            r.push(vec![
                "poisson_law".into(),
                t.into(),
                Cell::text(""),
                g.format_element(z).into(),
                p.max_deviation.into(),
                cfg.lemma_tol.into(),
                p.passed.into(),
                format!("mean={}", p.mean).into(),
            ]);
            let all = trajectory::change_of_measure_all(g, mu, t, z, cfg.lemma_tol).with_context(|| ctx.at(t))?;
            let worst = all.iter().max_by(|a, b| a.gap.total_cmp(&b.gap));
            r.push(vec![
                "change_of_measure".into(),
                t.into(),
                Cell::text(""),
                g.format_element(z).into(),
                worst.map_or(0.0, |c| c.gap).into(),
                cfg.lemma_tol.into(),
                all.iter().all(|c| c.passed).into(),
                format!("{} points, worst x={}", all.len(), worst.map_or("-".into(), |c| g.format_element(&c.x))).into(),
            ]);
        }
        if cfg.mc_samples > 0 {
            let z = &support[0];
            let mut sampler = PathSampler::new(mu, cfg.seed).with_context(|| ctx.at(t))?;
            let mut total = 0usize;
            for _ in 0..cfg.mc_samples {
                total += trajectory::ell(&sampler.sample(t).with_context(|| ctx.at(t))?, z, g);
            }
            let mean = total as f64 / cfg.mc_samples as f64;
            let expected = t * mu.rate(z);
            let se = (expected / cfg.mc_samples as f64).sqrt();
            r.push(vec![
                "monte_carlo_mean".into(),
                t.into(),
                cfg.mc_samples.into(),
                g.format_element(z).into(),
                (mean - expected).abs().into(),
                (6.0 * se).into(),
                ((mean - expected).abs() <= 6.0 * se + 1e-12).into(),
                format!("sample mean {mean}, expected {expected}").into(),
            ]);
        }
    }
    Ok(finish(r))
}

const BOUND_COLUMNS: [&str; 14] = [
    "t",
    "varentropy",
    "two_t_gamma_log",
    "sum_U",
    "sum_V",
    "u21_bound",
    "c43_bound",
    "cd_bound",
    "prior_factor",
    "prior_valid",
    "dropped",
    "passed",
    "violations",
    "slack",
];

fn bound_cells(row: &BoundRow) -> Vec<Cell> {
    let v = row.violations(CHAIN_SLACK);
    vec![
        row.t.into(),
        row.varentropy.into(),
        row.two_t_gamma_log.into(),
        row.sum_u.into(),
        row.sum_v.into(),
        row.u21_bound.into(),
        row.c43_bound.into(),
        row.cd_bound.into(),
        row.prior_factor.into(),
        row.prior_valid.into(),
        row.dropped.into(),
        v.is_empty().into(),
        v.join("; ").into(),
        CHAIN_SLACK.into(),
    ]
}

fn pool(cfg: &ExperimentConfig) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build()?)
}

fn bound_report(ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new("bound-report", ctx.cfg.echo.clone(), &BOUND_COLUMNS);
    let rows: Vec<Result<BoundRow>> = pool(ctx.cfg)?.install(|| {
        ctx.cfg
            .t_grid
            .par_iter()
            .map(|&t| bounds::theorem_row(ctx.g, ctx.mu, t, ctx.cfg.kernel_tol).with_context(|| ctx.at(t)))
            .collect()
    });
    for row in rows {
        let row = row?;
        for v in row.violations(CHAIN_SLACK) {
            r.fail(format!("{}: {v}", ctx.at(row.t)));
        }
        r.push(bound_cells(&row));
    }
    Ok(finish(r))
}

fn sharpness(cfg: &ExperimentConfig) -> Result<Report> {
    let mut r = Report::new(
        "sharpness",
        cfg.echo.clone(),
        &["t", "varentropy", "V", "ratio", "small_t_ratio", "large_t_gap", "U", "U_over_V", "passed"],
    );
    let rows: Vec<Result<Vec<Cell>>> = pool(cfg)?.install(|| {
        cfg.t_grid
            .par_iter()
            .map(|&t| {
                let s = bounds::sharpness_row(t, cfg.kernel_tol).with_context(|| format!("group=Z, mu=+-1:1/2, t={t}"))?;
                let u = bounds::u_func(t, DEFAULT_U_TOL);
                let small_ok = t > (-1.0f64).exp() || u <= bounds::u_small_time_bound(t);
                let ok = s.ratio > 0.0
                    && u <= bounds::U_UNIFORM_BOUND
                    && u <= bounds::U_OVER_V_CONSTANT * s.v
                    && u <= 2.0 + 2.0 / t
                    && small_ok;
                Ok(vec![
                    t.into(),
                    s.varentropy.into(),
                    s.v.into(),
                    s.ratio.into(),
                    Cell::opt(s.small_t_ratio),
                    s.large_t_gap.into(),
                    u.into(),
                    (u / s.v).into(),
                    ok.into(),
                ])
            })
            .collect()
    });
    for row in rows {
        r.push(row?);
    }
    Ok(finish(r))
}

fn cutoff_report(ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new(
        "cutoff-report",
        ctx.cfg.echo.clone(),
        &["eps", "t_mix", "t_rel", "varent_at_tmix", "ratio", "criterion_rhs", "d", "sqrt_d", "cd_bound", "passed"],
    );
    let c = cutoff::cutoff_report(ctx.g, ctx.mu, ctx.cfg.eps).with_context(|| ctx.here())?;
    r.push(vec![
        c.eps.into(),
        c.t_mix.into(),
        c.t_rel.into(),
        c.varent_at_tmix.into(),
        c.ratio.into(),
        c.criterion_rhs.into(),
        c.d.into(),
        c.sqrt_d.into(),
        (bounds::DIMENSION_CONSTANT * c.d as f64).into(),
        c.within_dimension_bound().into(),
    ]);
    Ok(finish(r))
}
