//! Built-in group families.
//!
//! Element orderings:
//! - `C<n>`: index `i` is `a^i`.
//! - `D<2n>`: index `i + n*j` is `r^i s^j`, with `s r = r⁻¹ s`.
//! - `Dic<4n>`: index `i + 2n*j` is `a^i x^j`, with `x² = aⁿ` and `x⁻¹ a x = a⁻¹`.
//! - `S<n>`, `A<n>`: breadth-first permutation closure (see
//!   [`from_permutation_generators`](super::from_permutation_generators)).
//! - `E<p>^<k>`: index `Σ c_i p^i` is the vector `(c_0, .., c_{k-1})`.
//! - `G x H`: index `i*|H| + j` is the pair `(g_i, h_j)`.

use std::fmt;
use std::str::FromStr;

use crate::config::Limits;
use crate::error::{Error, Result};

use super::perm::{close_permutations, permutation_table, Perm};
use super::{FiniteGroup, Provenance};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    Cyclic(usize),
    /// Dihedral group of the given order (2n).
    Dihedral(usize),
    /// Dicyclic group of the given order (4n); `Dic8` is the quaternion group.
    Dicyclic(usize),
    Symmetric(usize),
    Alternating(usize),
    ElementaryAbelian {
        p: usize,
        k: u32,
    },
    DirectProduct(Box<Family>, Box<Family>),
}

impl Family {
    pub fn product(a: Family, b: Family) -> Family {
        Family::DirectProduct(Box::new(a), Box::new(b))
    }

    /// Group order, or `None` on overflow.
    pub fn order(&self) -> Option<usize> {
        match self {
            Family::Cyclic(n) | Family::Dihedral(n) | Family::Dicyclic(n) => Some(*n),
            Family::Symmetric(n) => (1..=*n).try_fold(1usize, |acc, i| acc.checked_mul(i)),
            Family::Alternating(n) => {
                let f = (1..=*n).try_fold(1usize, |acc, i| acc.checked_mul(i))?;
                Some(if *n >= 2 { f / 2 } else { f })
            }
            Family::ElementaryAbelian { p, k } => p.checked_pow(*k),
            Family::DirectProduct(a, b) => a.order()?.checked_mul(b.order()?),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadParameter(m));
        match self {
            Family::Cyclic(0) => bad("cyclic group needs n >= 1".into()),
            Family::Dihedral(n) if *n < 2 || n % 2 != 0 => {
                bad(format!("dihedral order must be even and >= 2, got {n}"))
            }
            Family::Dicyclic(n) if *n < 4 || n % 4 != 0 => {
                bad(format!("dicyclic order must be a multiple of 4, got {n}"))
            }
            Family::Symmetric(0) | Family::Alternating(0) => bad("degree must be >= 1".into()),
            Family::ElementaryAbelian { p, k } if !is_prime(*p) || *k == 0 => bad(format!(
                "elementary abelian needs prime p and k >= 1, got {p}^{k}"
            )),
            Family::DirectProduct(a, b) => {
                a.validate()?;
                b.validate()
            }
            _ => Ok(()),
        }
    }
}

fn is_prime(p: usize) -> bool {
    p >= 2
        && (2..p)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cyclic(n) => write!(f, "C{n}"),
            Family::Dihedral(n) => write!(f, "D{n}"),
            Family::Dicyclic(8) => write!(f, "Q8"),
            Family::Dicyclic(n) => write!(f, "Dic{n}"),
            Family::Symmetric(n) => write!(f, "S{n}"),
            Family::Alternating(n) => write!(f, "A{n}"),
            Family::ElementaryAbelian { p, k } => write!(f, "E{p}^{k}"),
            Family::DirectProduct(a, b) => {
                let wrap = |x: &Family| match x {
                    Family::DirectProduct(..) => format!("({x})"),
                    _ => x.to_string(),
                };
                write!(f, "{}x{}", wrap(a), wrap(b))
            }
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts short names (`C6`, `D8`, `Dic12`, `Q8`, `S4`, `A5`, `E2^3`),
    /// long names (`cyclic 6`, `dihedral 8`, `dicyclic 12`, `symmetric 4`,
    /// `alternating 5`, `elementary-abelian 2^3`), products written
    /// `C2xS3` or `direct-product(C2, S3)`, and parentheses.
    fn from_str(s: &str) -> Result<Family> {
        let s = s.trim();
        let factors = split_top_level(s, 'x')?;
        if factors.len() > 1 {
            let mut it = factors.into_iter().map(|f| f.parse::<Family>());
            let first = it.next().unwrap()?;
            return it.try_fold(first, |acc, f| Ok(Family::product(acc, f?)));
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            return inner.parse();
        }
        if let Some(args) = s
            .strip_prefix("direct-product")
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
        {
            let parts = split_top_level(args, ',')?;
            if parts.len() != 2 {
                return Err(Error::BadParameter(format!(
                    "direct-product takes two factors: {s:?}"
                )));
            }
            return Ok(Family::product(parts[0].parse()?, parts[1].parse()?));
        }
        parse_atom(s)
    }
}

fn split_top_level(s: &str, sep: char) -> Result<Vec<&str>> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::BadParameter(format!(
                        "unbalanced parentheses in {s:?}"
                    )));
                }
            }
            c if c == sep && depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::BadParameter(format!(
            "unbalanced parentheses in {s:?}"
        )));
    }
    parts.push(s[start..].trim());
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::BadParameter(format!("empty factor in {s:?}")));
    }
    Ok(parts)
}

fn parse_atom(s: &str) -> Result<Family> {
    let bad = || Error::BadParameter(format!("unknown group family {s:?}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let power = |t: &str| -> Result<(usize, u32)> {
        let (p, k) = t.split_once('^').ok_or_else(bad)?;
        Ok((num(p)?, k.trim().parse().map_err(|_| bad())?))
    };
    let (name, arg) = match s.find(|c: char| c.is_whitespace() || c == ':') {
        Some(i) => (&s[..i], s[i + 1..].trim()),
        None => {
            let i = s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
            (&s[..i], &s[i..])
        }
    };
    let family = match name {
        "C" | "cyclic" | "Z" => Family::Cyclic(num(arg)?),
        "D" | "dihedral" => Family::Dihedral(num(arg)?),
        "Dic" | "dicyclic" => Family::Dicyclic(num(arg)?),
        "Q" if num(arg)? == 8 => Family::Dicyclic(8),
        "S" | "symmetric" => Family::Symmetric(num(arg)?),
        "A" | "alternating" => Family::Alternating(num(arg)?),
        "E" | "elementary-abelian" => {
            let (p, k) = power(arg)?;
            Family::ElementaryAbelian { p, k }
        }
        _ => return Err(bad()),
    };
    Ok(family)
}

/// Builds a family member, validating parameters and the order cap first.
pub fn builtin(family: &Family, limits: &Limits) -> Result<FiniteGroup> {
    family.validate()?;
    let order = family.order().ok_or(Error::OrderCapExceeded {
        order: usize::MAX,
        cap: limits.max_order,
    })?;
    if order > limits.max_order {
        return Err(Error::OrderCapExceeded {
            order,
            cap: limits.max_order,
        });
    }
    let group = match family {
        Family::Cyclic(n) => cyclic(*n)?,
        Family::Dihedral(n) => dihedral(n / 2)?,
        Family::Dicyclic(n) => dicyclic(n / 4)?,
        Family::Symmetric(n) => symmetric(*n, limits)?,
        Family::Alternating(n) => alternating(*n, limits)?,
        Family::ElementaryAbelian { p, k } => elementary_abelian(*p, *k)?,
        Family::DirectProduct(a, b) => direct_product(&builtin(a, limits)?, &builtin(b, limits)?)?,
    };
    Ok(group.with_provenance(Provenance::Family {
        spec: family.to_string(),
    }))
}

fn power_label(base: &str, i: usize) -> String {
    match i {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{i}"),
    }
}

fn word_label(parts: &[String]) -> String {
    let s: String = parts.concat();
    if s.is_empty() {
        "e".to_string()
    } else {
        s
    }
}

fn cyclic(n: usize) -> Result<FiniteGroup> {
    let mul = (0..n)
        .flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u32))
        .collect();
    let labels = (0..n).map(|i| word_label(&[power_label("a", i)])).collect();
    FiniteGroup::from_validated_parts(mul, labels, Provenance::Table)
}

fn dihedral(n: usize) -> Result<FiniteGroup> {
    let order = 2 * n;
    let decode = |x: usize| (x % n, x / n);
    let mut mul = Vec::with_capacity(order * order);
    for a in 0..order {
        let (i1, j1) = decode(a);
        for b in 0..order {
            let (i2, j2) = decode(b);
            let i = if j1 == 0 { i1 + i2 } else { i1 + n - i2 } % n;
            mul.push((i + n * ((j1 + j2) % 2)) as u32);
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (i, j) = decode(x);
            word_label(&[power_label("r", i), power_label("s", j)])
        })
        .collect();
    FiniteGroup::from_validated_parts(mul, labels, Provenance::Table)
}

fn dicyclic(n: usize) -> Result<FiniteGroup> {
    let m = 2 * n;
    let order = 2 * m;
    let decode = |x: usize| (x % m, x / m);
    let mut mul = Vec::with_capacity(order * order);
    for a in 0..order {
        let (i1, j1) = decode(a);
        for b in 0..order {
            let (i2, j2) = decode(b);
            // a^i1 x^j1 a^i2 x^j2, moving a^i2 left past x flips its sign
            let i = if j1 == 0 { i1 + i2 } else { i1 + m - i2 };
            let (i, j) = if j1 + j2 == 2 {
                ((i + n) % m, 0)
            } else {
                (i % m, j1 + j2)
            };
            mul.push((i + m * j) as u32);
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (i, j) = decode(x);
            word_label(&[power_label("a", i), power_label("x", j)])
        })
        .collect();
    FiniteGroup::from_validated_parts(mul, labels, Provenance::Table)
}

fn perm_family(degree: usize, gens: &[Perm], limits: &Limits) -> Result<FiniteGroup> {
    let elements = close_permutations(degree, gens, limits.max_order)?;
    permutation_table(&elements)
}

fn symmetric(n: usize, limits: &Limits) -> Result<FiniteGroup> {
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Perm::parse_cycles("(1 2)", n)?);
    }
    if n >= 3 {
        let cycle: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        gens.push(Perm::parse_cycles(&format!("({})", cycle.join(" ")), n)?);
    }
    perm_family(n, &gens, limits)
}

fn alternating(n: usize, limits: &Limits) -> Result<FiniteGroup> {
    let gens = (3..=n)
        .map(|k| Perm::parse_cycles(&format!("(1 2 {k})"), n))
        .collect::<Result<Vec<_>>>()?;
    perm_family(n, &gens, limits)
}

fn elementary_abelian(p: usize, k: u32) -> Result<FiniteGroup> {
    let order = p.pow(k);
    let digits = |mut x: usize| -> Vec<usize> {
        (0..k)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    };
    let mut mul = Vec::with_capacity(order * order);
    for a in 0..order {
        let da = digits(a);
        for b in 0..order {
            let db = digits(b);
            let v = da
                .iter()
                .zip(&db)
                .rev()
                .fold(0, |acc, (x, y)| acc * p + (x + y) % p);
            mul.push(v as u32);
        }
    }
    let labels = (0..order)
        .map(|x| {
            if x == 0 {
                "e".to_string()
            } else {
                let d: Vec<String> = digits(x).iter().map(|d| d.to_string()).collect();
                format!("({})", d.join(","))
            }
        })
        .collect();
    FiniteGroup::from_validated_parts(mul, labels, Provenance::Table)
}

/// `G x H` with index `i*|H| + j` for the pair `(g_i, h_j)`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    let (n, m) = (g.order(), h.order());
    let order = n * m;
    let mut mul = Vec::with_capacity(order * order);
    let gt = g.raw_mul();
    let ht = h.raw_mul();
    for a in 0..order {
        let (a1, a2) = (a / m, a % m);
        for b in 0..order {
            let (b1, b2) = (b / m, b % m);
            mul.push(gt[a1 * n + b1] * m as u32 + ht[a2 * m + b2]);
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (i, j) = (x / m, x % m);
            if x == 0 {
                "e".to_string()
            } else {
                format!("({},{})", g.labels()[i], h.labels()[j])
            }
        })
        .collect();
    let provenance = Provenance::Product {
        left: g.provenance().to_string(),
        right: h.provenance().to_string(),
    };
    FiniteGroup::from_validated_parts(mul, labels, provenance)
}
