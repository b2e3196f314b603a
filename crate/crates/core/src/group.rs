//! Group families, element arithmetic and Cayley-graph geometry.
//!
//! Products follow the composition convention `(a*b)(i) = a(b(i))` for
//! permutations. The walk multiplies its position on the right by each jump.

use std::collections::VecDeque;
use std::fmt;

use indexmap::IndexSet;

use crate::{Error, Result};

/// Largest `n` for which `S_n` is enumerated.
pub const MAX_SYMMETRIC_DEGREE: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupFamily {
    /// `Z_{m_1} x ... x Z_{m_d}` where a modulus of 0 stands for `Z`.
    Lattice(Vec<u64>),
    Symmetric(usize),
    Dihedral(u32),
}

/// A group element in canonical encoding, so that equal group elements
/// compare and hash equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Integer vector, finite coordinates reduced into `[0, m)`.
    Lattice(Vec<i64>),
    /// One-line notation over `0..n`: position `i` holds the image of `i`.
    Perm(Vec<u8>),
    /// `s^rotation r^reflection` with `r s r^-1 = s^-1`.
    Dihedral { rotation: u32, reflection: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    family: GroupFamily,
}

/// The three outputs of [`GroupSpec::group_ops`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupOps {
    pub product: Element,
    pub inverse_of_a: Element,
    pub conjugate: Element,
}

/// Result of a breadth-first search from the identity in the Cayley graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diameter {
    /// Eccentricity of the identity within the reachable set.
    pub diameter: usize,
    /// Size of the subgroup generated by the support.
    pub reached: usize,
    /// Whether the support generates the whole group.
    pub generates: bool,
}

impl GroupSpec {
    pub fn lattice(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidGroup("lattice needs at least one factor".into()));
        }
        Ok(Self { family: GroupFamily::Lattice(moduli) })
    }

    /// `Z^d`.
    pub fn integer_lattice(dim: usize) -> Result<Self> {
        Self::lattice(vec![0; dim])
    }

    /// `Z_m`.
    pub fn cyclic(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGroup("cyclic group needs m >= 1".into()));
        }
        Self::lattice(vec![m])
    }

    pub fn hypercube(dim: usize) -> Result<Self> {
        Self::lattice(vec![2; dim])
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        if !(2..=MAX_SYMMETRIC_DEGREE).contains(&n) {
            return Err(Error::InvalidGroup(format!(
                "symmetric({n}) is outside the enumerable range 2..={MAX_SYMMETRIC_DEGREE}"
            )));
        }
        Ok(Self { family: GroupFamily::Symmetric(n) })
    }

    pub fn dihedral(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("dihedral group needs n >= 1".into()));
        }
        Ok(Self { family: GroupFamily::Dihedral(n) })
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    pub fn is_finite(&self) -> bool {
        match &self.family {
            GroupFamily::Lattice(m) => m.iter().all(|&mj| mj > 0),
            _ => true,
        }
    }

    pub fn is_abelian(&self) -> bool {
        match &self.family {
            GroupFamily::Lattice(_) => true,
            GroupFamily::Symmetric(n) => *n <= 2,
            GroupFamily::Dihedral(n) => *n <= 2,
        }
    }

    /// Group order, `None` for infinite lattices.
    pub fn order(&self) -> Option<u128> {
        match &self.family {
            GroupFamily::Lattice(m) => {
                if !self.is_finite() {
                    return None;
                }
                Some(m.iter().map(|&mj| mj as u128).product())
            }
            GroupFamily::Symmetric(n) => Some((1..=*n as u128).product()),
            GroupFamily::Dihedral(n) => Some(2 * *n as u128),
        }
    }

    pub fn identity(&self) -> Element {
        match &self.family {
            GroupFamily::Lattice(m) => Element::Lattice(vec![0; m.len()]),
            GroupFamily::Symmetric(n) => Element::Perm((0..*n as u8).collect()),
            GroupFamily::Dihedral(_) => Element::Dihedral { rotation: 0, reflection: false },
        }
    }

    fn bad(&self, reason: impl Into<String>) -> Error {
        Error::InvalidElement { group: self.to_string(), reason: reason.into() }
    }

    /// Checks that `a` is a canonical encoding of an element of this group.
    pub fn validate(&self, a: &Element) -> Result<()> {
        match (&self.family, a) {
            (GroupFamily::Lattice(m), Element::Lattice(v)) => {
                if v.len() != m.len() {
                    return Err(self.bad(format!("expected {} coordinates, got {}", m.len(), v.len())));
                }
                for (j, (&x, &mj)) in v.iter().zip(m).enumerate() {
                    if mj > 0 && !(0..mj as i64).contains(&x) {
                        return Err(self.bad(format!("coordinate {j} = {x} not in [0, {mj})")));
                    }
                }
                Ok(())
            }
            (GroupFamily::Symmetric(n), Element::Perm(p)) => {
                if p.len() != *n {
                    return Err(self.bad(format!("expected {n} symbols, got {}", p.len())));
                }
                let mut seen = vec![false; *n];
                for &x in p {
                    let x = x as usize;
                    if x >= *n || seen[x] {
                        return Err(self.bad(format!("{p:?} is not a permutation of 0..{n}")));
                    }
                    seen[x] = true;
                }
                Ok(())
            }
            (GroupFamily::Dihedral(n), Element::Dihedral { rotation, .. }) => {
                if rotation >= n {
                    return Err(self.bad(format!("rotation {rotation} not in [0, {n})")));
                }
                Ok(())
            }
            _ => Err(self.bad(format!("{a:?} belongs to a different family"))),
        }
    }

    /// Product `a*b`. Inputs are assumed valid; see [`GroupSpec::group_ops`]
    /// for the checked entry point.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (&self.family, a, b) {
            (GroupFamily::Lattice(m), Element::Lattice(x), Element::Lattice(y)) => Element::Lattice(
                x.iter()
                    .zip(y)
                    .zip(m)
                    .map(|((&xi, &yi), &mj)| reduce(xi + yi, mj))
                    .collect(),
            ),
            (GroupFamily::Symmetric(_), Element::Perm(p), Element::Perm(q)) => {
                Element::Perm(q.iter().map(|&i| p[i as usize]).collect())
            }
            (
                GroupFamily::Dihedral(n),
                Element::Dihedral { rotation: a1, reflection: r1 },
                Element::Dihedral { rotation: a2, reflection: r2 },
            ) => {
                let n = *n as u64;
                let b = if *r1 { (n - *a2 as u64) % n } else { *a2 as u64 };
                Element::Dihedral { rotation: ((*a1 as u64 + b) % n) as u32, reflection: r1 ^ r2 }
            }
            _ => panic!("mul: element family does not match {self}"),
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        match (&self.family, a) {
            (GroupFamily::Lattice(m), Element::Lattice(x)) => {
                Element::Lattice(x.iter().zip(m).map(|(&xi, &mj)| reduce(-xi, mj)).collect())
            }
            (GroupFamily::Symmetric(_), Element::Perm(p)) => {
                let mut q = vec![0u8; p.len()];
                for (i, &pi) in p.iter().enumerate() {
                    q[pi as usize] = i as u8;
                }
                Element::Perm(q)
            }
            (GroupFamily::Dihedral(n), Element::Dihedral { rotation, reflection }) => {
                if *reflection {
                    a.clone()
                } else {
                    Element::Dihedral { rotation: (n - rotation) % n, reflection: false }
                }
            }
            _ => panic!("inv: element family does not match {self}"),
        }
    }

    /// `a b a^-1`.
    pub fn conj(&self, a: &Element, b: &Element) -> Element {
        self.mul(&self.mul(a, b), &self.inv(a))
    }

    pub fn is_identity(&self, a: &Element) -> bool {
        *a == self.identity()
    }

    pub fn group_ops(&self, a: &Element, b: &Element) -> Result<GroupOps> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(GroupOps { product: self.mul(a, b), inverse_of_a: self.inv(a), conjugate: self.conj(a, b) })
    }

    /// All elements, identity first, in a fixed order.
    pub fn enumerate(&self) -> Result<Vec<Element>> {
        if !self.is_finite() {
            return Err(Error::Unsupported(format!("cannot enumerate the infinite group {self}")));
        }
        Ok(match &self.family {
            GroupFamily::Lattice(m) => {
                let order: u64 = m.iter().product();
                let mut out = Vec::with_capacity(order as usize);
                let mut cur = vec![0i64; m.len()];
                for _ in 0..order {
                    out.push(Element::Lattice(cur.clone()));
                    // odometer, last coordinate fastest
                    for j in (0..m.len()).rev() {
                        cur[j] += 1;
                        if cur[j] < m[j] as i64 {
                            break;
                        }
                        cur[j] = 0;
                    }
                }
                out
            }
            GroupFamily::Symmetric(n) => {
                let mut p: Vec<u8> = (0..*n as u8).collect();
                let mut out = vec![Element::Perm(p.clone())];
                while next_permutation(&mut p) {
                    out.push(Element::Perm(p.clone()));
                }
                out
            }
            GroupFamily::Dihedral(n) => [false, true]
                .into_iter()
                .flat_map(|reflection| (0..*n).map(move |rotation| Element::Dihedral { rotation, reflection }))
                .collect(),
        })
    }

    /// Conjugacy classes of a finite group, identity class first.
    pub fn conjugacy_classes(&self) -> Result<Vec<Vec<Element>>> {
        let all = self.enumerate()?;
        let mut assigned: IndexSet<Element> = IndexSet::new();
        let mut classes = Vec::new();
        for z in &all {
            if assigned.contains(z) {
                continue;
            }
            let mut class: IndexSet<Element> = IndexSet::new();
            for x in &all {
                class.insert(self.conj(x, z));
            }
            let mut class: Vec<Element> = class.into_iter().collect();
            class.sort();
            assigned.extend(class.iter().cloned());
            classes.push(class);
        }
        Ok(classes)
    }

    /// BFS eccentricity of the identity in the undirected Cayley graph of
    /// `support`. By vertex transitivity this is the graph diameter.
    pub fn cayley_diameter<'a, I>(&self, support: I) -> Result<Diameter>
    where
        I: IntoIterator<Item = &'a Element>,
    {
        let order = self
            .order()
            .ok_or_else(|| Error::Unsupported(format!("Cayley diameter of the infinite group {self}")))?;
        let mut steps: Vec<Element> = Vec::new();
        for z in support {
            self.validate(z)?;
            for s in [z.clone(), self.inv(z)] {
                if !steps.contains(&s) {
                    steps.push(s);
                }
            }
        }
        let mut seen: IndexSet<Element> = IndexSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back((self.identity(), 0usize));
        let mut diameter = 0;
        while let Some((x, dist)) = queue.pop_front() {
            diameter = diameter.max(dist);
            for s in &steps {
                let y = self.mul(&x, s);
                if seen.insert(y.clone()) {
                    queue.push_back((y, dist + 1));
                }
            }
        }
        Ok(Diameter { diameter, reached: seen.len(), generates: seen.len() as u128 == order })
    }

    /// Parses an element descriptor.
    ///
    /// * lattice: `(1,0,-1)`, a signed unit vector `+e2` / `-e1`, or a bare
    ///   integer for one-factor lattices;
    /// * symmetric: 1-based cycle notation such as `(1 2)(3 4)`, `()` for the identity;
    /// * dihedral: a word in `s` (rotation) and `r` (reflection) with optional
    ///   integer exponents, e.g. `s^2 r`, `s^-1`, `e` for the identity.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let t = text.trim();
        let el = match &self.family {
            GroupFamily::Lattice(m) => {
                let raw: Vec<i64> = if let Some(rest) = t.strip_prefix('(') {
                    let inner = rest
                        .strip_suffix(')')
                        .ok_or_else(|| self.bad(format!("unbalanced parentheses in {t:?}")))?;
                    inner
                        .split(',')
                        .map(|s| s.trim().parse::<i64>().map_err(|e| self.bad(format!("{s:?}: {e}"))))
                        .collect::<Result<_>>()?
                } else if let Some((sign, idx)) = parse_unit_vector(t) {
                    if idx == 0 || idx > m.len() {
                        return Err(self.bad(format!("unit vector index {idx} out of 1..={}", m.len())));
                    }
                    let mut v = vec![0; m.len()];
                    v[idx - 1] = sign;
                    v
                } else if m.len() == 1 {
                    vec![t.parse::<i64>().map_err(|e| self.bad(format!("{t:?}: {e}")))?]
                } else {
                    return Err(self.bad(format!("cannot parse {t:?} as a lattice element")));
                };
                if raw.len() != m.len() {
                    return Err(self.bad(format!("expected {} coordinates, got {}", m.len(), raw.len())));
                }
                Element::Lattice(raw.iter().zip(m).map(|(&x, &mj)| reduce(x, mj)).collect())
            }
            GroupFamily::Symmetric(n) => parse_cycles(t, *n).map_err(|r| self.bad(r))?,
            GroupFamily::Dihedral(n) => parse_dihedral_word(self, t, *n).map_err(|r| self.bad(r))?,
        };
        self.validate(&el)?;
        Ok(el)
    }

    /// Display form of an element, parseable by [`GroupSpec::parse_element`].
    pub fn format_element(&self, a: &Element) -> String {
        match a {
            Element::Lattice(v) => {
                let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(","))
            }
            Element::Perm(p) => format_cycles(p),
            Element::Dihedral { rotation, reflection } => match (*rotation, *reflection) {
                (0, false) => "e".to_string(),
                (0, true) => "r".to_string(),
                (1, false) => "s".to_string(),
                (1, true) => "s r".to_string(),
                (k, false) => format!("s^{k}"),
                (k, true) => format!("s^{k} r"),
            },
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            GroupFamily::Lattice(m) => {
                let parts: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                write!(f, "lattice({})", parts.join(","))
            }
            GroupFamily::Symmetric(n) => write!(f, "symmetric({n})"),
            GroupFamily::Dihedral(n) => write!(f, "dihedral({n})"),
        }
    }
}

fn reduce(x: i64, m: u64) -> i64 {
    if m == 0 {
        x
    } else {
        x.rem_euclid(m as i64)
    }
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn parse_unit_vector(t: &str) -> Option<(i64, usize)> {
    let (sign, rest) = match t.as_bytes().first()? {
        b'+' => (1, &t[1..]),
        b'-' => (-1, &t[1..]),
        _ => (1, t),
    };
    let idx = rest.strip_prefix('e')?.parse::<usize>().ok()?;
    Some((sign, idx))
}

fn parse_cycles(t: &str, n: usize) -> std::result::Result<Element, String> {
    let mut perm: Vec<u8> = (0..n as u8).collect();
    if t == "id" || t == "e" {
        return Ok(Element::Perm(perm));
    }
    let mut rest = t;
    // each cycle composes on the left of what was parsed so far, so that
    // "(1 2)(2 3)" means (1 2) * (2 3) under composition
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    while !rest.is_empty() {
        let open = rest.strip_prefix('(').ok_or_else(|| format!("expected '(' at {rest:?}"))?;
        let close = open.find(')').ok_or_else(|| format!("missing ')' in {t:?}"))?;
        let body = &open[..close];
        let cycle = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                let v: usize = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
                if v == 0 || v > n {
                    return Err(format!("symbol {v} out of 1..={n}"));
                }
                Ok(v - 1)
            })
            .collect::<std::result::Result<Vec<usize>, String>>()?;
        let mut sorted = cycle.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != cycle.len() {
            return Err(format!("repeated symbol in cycle ({body})"));
        }
        cycles.push(cycle);
        rest = open[close + 1..].trim_start();
    }
    for cycle in cycles.iter().rev() {
        let mut c: Vec<u8> = (0..n as u8).collect();
        for k in 0..cycle.len() {
            c[cycle[k]] = cycle[(k + 1) % cycle.len()] as u8;
        }
        // perm <- c * perm
        perm = perm.iter().map(|&i| c[i as usize]).collect();
    }
    Ok(Element::Perm(perm))
}

fn format_cycles(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i] as usize;
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

fn parse_dihedral_word(g: &GroupSpec, t: &str, n: u32) -> std::result::Result<Element, String> {
    let mut acc = g.identity();
    let chars: Vec<char> = t.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    let mut i = 0;
    while i < chars.len() {
        let letter = chars[i];
        i += 1;
        let mut exp: i64 = 1;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            if i < chars.len() && chars[i] == '-' {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            exp = s.parse().map_err(|e| format!("bad exponent {s:?}: {e}"))?;
        }
        let base = match letter {
            's' => Element::Dihedral { rotation: 1 % n, reflection: false },
            'r' => Element::Dihedral { rotation: 0, reflection: true },
            'e' | '1' => g.identity(),
            other => return Err(format!("unexpected letter {other:?} in {t:?}")),
        };
        let base = if exp < 0 { g.inv(&base) } else { base };
        for _ in 0..exp.unsigned_abs() {
            acc = g.mul(&acc, &base);
        }
    }
    Ok(acc)
}
