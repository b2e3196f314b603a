//! Experiment configuration: flat `key = value` lines, `#` comments.
//!
//! ```text
//! group = symmetric(4)
//! generator = @transpositions : 1/6
//! t_grid = logrange(0.05, 50, 12)
//! ```

use std::fmt;

use conjwalk::bounds::log_grid;
use conjwalk::heat::{DEFAULT_KERNEL_TOL, MAX_KERNEL_TOL};
use conjwalk::trajectory::DEFAULT_LEMMA_TOL;
use conjwalk::{Element, GroupFamily, GroupSpec, RateMeasure};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Element(Element),
    Transpositions,
    UnitVectors,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub group: GroupSpec,
    pub generators: Vec<(GeneratorSpec, f64)>,
    pub normalize: bool,
    pub t_grid: Vec<f64>,
    pub kernel_tol: f64,
    pub lemma_tol: f64,
    pub seed: u64,
    pub format: Format,
    pub out: Option<String>,
    pub threads: usize,
    pub eps: f64,
    pub phi_max_n: usize,
    pub mc_samples: usize,
    pub test_functions: usize,
    /// Non-comment lines of the source, trimmed, in file order.
    pub echo: Vec<String>,
}

impl ExperimentConfig {
    pub fn measure(&self) -> conjwalk::Result<RateMeasure> {
        let mut parts: Vec<RateMeasure> = Vec::new();
        let mut explicit: Vec<(Element, f64)> = Vec::new();
        for (spec, rate) in &self.generators {
            match spec {
                GeneratorSpec::Element(e) => explicit.push((e.clone(), *rate)),
                GeneratorSpec::Transpositions => {
                    let t = RateMeasure::transpositions(&self.group)?;
                    parts.push(scaled(&self.group, &t, *rate)?);
                }
                GeneratorSpec::UnitVectors => parts.push(RateMeasure::unit_vectors(&self.group, *rate)?),
            }
        }
        parts.push(RateMeasure::from_generators(&self.group, &explicit)?);
        let mut entries = std::collections::BTreeMap::new();
        for m in &parts {
            for (z, r) in m.iter() {
                if entries.insert(z.clone(), r).is_some() {
                    return Err(conjwalk::Error::InvalidMeasure(format!(
                        "{} is listed more than once",
                        self.group.format_element(z)
                    )));
                }
            }
        }
        let mu = RateMeasure::from_entries(&self.group, entries)?;
        Ok(if self.normalize { mu.normalized() } else { mu })
    }
}

fn scaled(g: &GroupSpec, mu: &RateMeasure, rate: f64) -> conjwalk::Result<RateMeasure> {
    RateMeasure::from_entries(g, mu.iter().map(|(z, _)| (z.clone(), rate)).collect())
}

struct Cursor<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

impl Cursor<'_> {
    fn err(&self, message: impl Into<String>) -> ConfigError {
        ConfigError { line: self.line, column: self.column, message: message.into() }
    }
}

fn parse_number(c: &Cursor) -> Result<f64, ConfigError> {
    let s = c.text.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| c.err(format!("bad numerator in '{s}'")))?;
            let b: f64 = b.trim().parse().map_err(|_| c.err(format!("bad denominator in '{s}'")))?;
            a / b
        }
        None => s.parse().map_err(|_| c.err(format!("expected a number, got '{s}'")))?,
    };
    if !v.is_finite() {
        return Err(c.err(format!("'{s}' is not finite")));
    }
    Ok(v)
}

fn parse_int<T: std::str::FromStr>(c: &Cursor) -> Result<T, ConfigError> {
    c.text.trim().parse().map_err(|_| c.err(format!("expected a non-negative integer, got '{}'", c.text.trim())))
}

fn call<'a>(c: &Cursor<'a>) -> Result<(&'a str, Vec<&'a str>), ConfigError> {
    let s = c.text.trim();
    let open = s.find('(').ok_or_else(|| c.err(format!("expected name(args), got '{s}'")))?;
    if !s.ends_with(')') {
        return Err(c.err(format!("missing ')' in '{s}'")));
    }
    let args = &s[open + 1..s.len() - 1];
    let args = if args.trim().is_empty() { Vec::new() } else { args.split(',').map(str::trim).collect() };
    Ok((s[..open].trim(), args))
}

fn parse_group(c: &Cursor) -> Result<GroupSpec, ConfigError> {
    let (name, args) = call(c)?;
    let int = |a: &str| -> Result<u64, ConfigError> {
        a.parse().map_err(|_| c.err(format!("group argument '{a}' is not a non-negative integer")))
    };
    let one = || -> Result<u64, ConfigError> {
        match args.as_slice() {
            [a] => int(a),
            _ => Err(c.err(format!("{name} takes exactly one argument"))),
        }
    };
    let g = match name {
        "symmetric" => GroupSpec::symmetric(one()? as usize),
        "dihedral" => GroupSpec::dihedral(one()? as u32),
        "hypercube" => GroupSpec::hypercube(one()? as usize),
        "cyclic" => GroupSpec::cyclic(one()?),
        "integers" => GroupSpec::integer_lattice(one()? as usize),
        "lattice" => GroupSpec::lattice(args.iter().map(|a| int(a)).collect::<Result<_, _>>()?),
        other => return Err(c.err(format!("unknown group family '{other}'"))),
    };
    g.map_err(|e| c.err(e.to_string()))
}

fn parse_grid(c: &Cursor) -> Result<Vec<f64>, ConfigError> {
    let s = c.text.trim();
    let grid = if s.starts_with("logrange") {
        let (_, args) = call(c)?;
        let [lo, hi, n] = args.as_slice() else {
            return Err(c.err("logrange takes (min, max, points)"));
        };
        fn sub<'b>(c: &Cursor, t: &'b str) -> Cursor<'b> {
            Cursor { line: c.line, column: c.column, text: t }
        }
        let (lo, hi) = (parse_number(&sub(c, lo))?, parse_number(&sub(c, hi))?);
        let n: usize = parse_int(&sub(c, n))?;
        if !(lo > 0.0 && hi >= lo && n > 0) {
            return Err(c.err("logrange needs 0 < min <= max and at least one point"));
        }
        log_grid(lo, hi, n)
    } else {
        s.split(',')
            .map(|p| parse_number(&Cursor { line: c.line, column: c.column, text: p }))
            .collect::<Result<Vec<_>, _>>()?
    };
    if grid.is_empty() {
        return Err(c.err("t_grid is empty"));
    }
    if let Some(t) = grid.iter().find(|t| **t < 0.0) {
        return Err(c.err(format!("negative time {t} in t_grid")));
    }
    Ok(grid)
}

/// Parses the whole file. Generator descriptors need the group, so they are
/// resolved after every line has been read.
pub fn parse(source: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut group: Option<GroupSpec> = None;
    let mut raw_generators: Vec<(usize, usize, String, String)> = Vec::new();
    let mut cfg = ExperimentConfig {
        group: GroupSpec::cyclic(1).expect("trivial group"),
        generators: Vec::new(),
        normalize: false,
        t_grid: vec![1.0],
        kernel_tol: DEFAULT_KERNEL_TOL,
        lemma_tol: DEFAULT_LEMMA_TOL,
        seed: 0,
        format: Format::Csv,
        out: None,
        threads: 1,
        eps: conjwalk::cutoff::DEFAULT_EPS,
        phi_max_n: 3,
        mc_samples: 0,
        test_functions: 10,
        echo: Vec::new(),
    };
    let mut seen_keys: Vec<String> = Vec::new();

    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        cfg.echo.push(content.trim().to_string());
        let Some(eq) = content.find('=') else {
            let column = content.len() - content.trim_start().len() + 1;
            return Err(ConfigError { line, column, message: "expected 'key = value'".into() });
        };
        let key = content[..eq].trim();
        let value_raw = &content[eq + 1..];
        let column = eq + 2 + (value_raw.len() - value_raw.trim_start().len());
        let c = Cursor { line, column, text: value_raw.trim() };
        if c.text.is_empty() {
            return Err(c.err(format!("missing value for '{key}'")));
        }
        if key != "generator" {
            if seen_keys.iter().any(|k| k == key) {
                let key_col = content.len() - content.trim_start().len() + 1;
                return Err(ConfigError { line, column: key_col, message: format!("duplicate key '{key}'") });
            }
            seen_keys.push(key.to_string());
        }
        match key {
            "group" => group = Some(parse_group(&c)?),
            "generator" => {
                let Some((desc, rate)) = c.text.rsplit_once(':') else {
                    return Err(c.err("expected 'generator = <element> : <rate>'"));
                };
                let rate_col = column + desc.len() + 1 + (rate.len() - rate.trim_start().len());
                raw_generators.push((line, column, desc.trim().to_string(), rate.to_string()));
                let rc = Cursor { line, column: rate_col, text: rate };
                let r = parse_number(&rc)?;
                if r <= 0.0 {
                    return Err(rc.err("rates must be positive"));
                }
            }
            "normalize" => {
                cfg.normalize = match c.text {
                    "true" => true,
                    "false" => false,
                    other => return Err(c.err(format!("expected true or false, got '{other}'"))),
                }
            }
            "t_grid" => cfg.t_grid = parse_grid(&c)?,
            "kernel_tol" => {
                cfg.kernel_tol = parse_number(&c)?;
                if !(cfg.kernel_tol > 0.0 && cfg.kernel_tol <= MAX_KERNEL_TOL) {
                    return Err(c.err(format!("kernel_tol must lie in (0, {MAX_KERNEL_TOL}]")));
                }
            }
            "lemma_tol" => {
                cfg.lemma_tol = parse_number(&c)?;
                if !(cfg.lemma_tol > 0.0 && cfg.lemma_tol <= 1e-3) {
                    return Err(c.err("lemma_tol must lie in (0, 1e-3]"));
                }
            }
            "eps" => {
                cfg.eps = parse_number(&c)?;
                if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
                    return Err(c.err("eps must lie in (0, 1)"));
                }
            }
            "seed" => cfg.seed = parse_int(&c)?,
            "threads" => {
                cfg.threads = parse_int(&c)?;
                if cfg.threads == 0 {
                    return Err(c.err("threads must be at least 1"));
                }
            }
            "phi_max_n" => cfg.phi_max_n = parse_int(&c)?,
            "mc_samples" => cfg.mc_samples = parse_int(&c)?,
            "test_functions" => cfg.test_functions = parse_int(&c)?,
            "format" => {
                cfg.format = match c.text {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    other => return Err(c.err(format!("format must be csv or json, got '{other}'"))),
                }
            }
            "out" => cfg.out = Some(c.text.to_string()),
            other => {
                let key_col = content.len() - content.trim_start().len() + 1;
                return Err(ConfigError { line, column: key_col, message: format!("unknown key '{other}'") });
            }
        }
    }

    let Some(g) = group else {
        return Err(ConfigError { line: 1, column: 1, message: "missing 'group = ...'".into() });
    };
    for (line, column, desc, rate) in raw_generators {
        let c = Cursor { line, column, text: &desc };
        let spec = match desc.as_str() {
            "@transpositions" => {
                if !matches!(g.family(), GroupFamily::Symmetric(_)) {
                    return Err(c.err("@transpositions needs a symmetric group"));
                }
                GeneratorSpec::Transpositions
            }
            "@unit-vectors" => {
                if !matches!(g.family(), GroupFamily::Lattice(_)) {
                    return Err(c.err("@unit-vectors needs a lattice group"));
                }
                GeneratorSpec::UnitVectors
            }
            _ => GeneratorSpec::Element(g.parse_element(&desc).map_err(|e| c.err(e.to_string()))?),
        };
        let r = parse_number(&Cursor { line, column, text: &rate })?;
        cfg.generators.push((spec, r));
    }
    if cfg.generators.is_empty() {
        return Err(ConfigError { line: 1, column: 1, message: "no 'generator = ...' lines".into() });
    }
    cfg.group = g;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let src = "# S4\ngroup = symmetric(4)\ngenerator = @transpositions : 1/6\nt_grid = logrange(0.05, 50, 12)\nseed = 7\nformat = json\n";
        let cfg = parse(src).unwrap();
        assert_eq!(cfg.t_grid.len(), 12);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.format, Format::Json);
        let mu = cfg.measure().unwrap();
        assert_eq!(mu.support_size(), 6);
        assert!(mu.is_normalized());
        assert_eq!(cfg.echo.len(), 5);
    }

    #[test]
    fn explicit_generators() {
        let src = "group = dihedral(5)\ngenerator = s : 0.25\ngenerator = s^4 : 0.25\ngenerator = r : 1/10\ngenerator = s r : 1/10\ngenerator = s^2 r : 1/10\ngenerator = s^3 r : 1/10\ngenerator = s^4 r : 1/10\n";
        let mu = parse(src).unwrap().measure();
        // s and s^4 are inverse to each other
        assert!(mu.is_err());
        let src = "group = cyclic(6)\ngenerator = 1 : 1/2\nt_grid = 0.5, 1.5\n";
        let cfg = parse(src).unwrap();
        assert_eq!(cfg.t_grid, vec![0.5, 1.5]);
        assert!(cfg.measure().unwrap().is_normalized());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("group = symmetric(4)\ngenerator = (1 2) : abc\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 21));
        let e = parse("group = symmetric(4)\n  bogus = 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse("group = symmetric(4)\ngenerator = (1 5) : 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 13));
        let e = parse("group = quaternion(8)\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        let e = parse("group = symmetric(4)\nnot a pair\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse("group = symmetric(4)\ngenerator = (1 2) : 1\nkernel_tol = 0.1\n").is_err());
        assert!(parse("generator = (1 2) : 1\n").is_err());
    }
}
