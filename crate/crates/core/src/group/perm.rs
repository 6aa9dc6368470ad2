use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::config::Limits;
use crate::error::{Error, Result};

use super::{FiniteGroup, Provenance};

/// A permutation of `{0, .., degree-1}`, printed 1-based in cycle notation.
///
/// Products compose left to right: `p.then(q)` applies `p` first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || std::mem::replace(&mut seen[i as usize], true) {
                return Err(Error::BadParameter(format!(
                    "{images:?} is not a permutation"
                )));
            }
        }
        Ok(Perm(images))
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)` over the given degree.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        let mut rest = text.trim();
        if rest.is_empty() {
            return Ok(Perm(images));
        }
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::BadParameter(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::BadParameter(format!("unclosed cycle in {text:?}")))?;
            let points = open[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    let p: usize = s
                        .parse()
                        .map_err(|_| Error::BadParameter(format!("bad point {s:?} in {text:?}")))?;
                    if p == 0 || p > degree {
                        return Err(Error::BadParameter(format!(
                            "point {p} outside 1..={degree}"
                        )));
                    }
                    Ok(p - 1)
                })
                .collect::<Result<Vec<usize>>>()?;
            for &p in &points {
                if std::mem::replace(&mut seen[p], true) {
                    return Err(Error::BadParameter(format!(
                        "point {} repeated in {text:?}",
                        p + 1
                    )));
                }
            }
            for (i, &p) in points.iter().enumerate() {
                images[p] = points[(i + 1) % points.len()] as u32;
            }
            rest = open[close + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// Same permutation on a larger point set.
    pub fn extend_to(&self, degree: usize) -> Perm {
        let mut v = self.0.clone();
        v.extend(self.0.len() as u32..degree as u32);
        Perm(v)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut done = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if done[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "({}", start + 1)?;
            done[start] = true;
            let mut p = self.0[start] as usize;
            while p != start {
                write!(f, " {}", p + 1)?;
                done[p] = true;
                p = self.0[p] as usize;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl FromStr for Perm {
    type Err = Error;

    /// Parses cycle notation with the degree inferred from the largest point.
    fn from_str(s: &str) -> Result<Perm> {
        let degree = s
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(0);
        Perm::parse_cycles(s, degree)
    }
}

/// Closes a set of permutations under composition.
///
/// Elements are discovered breadth-first from the identity; each layer is
/// sorted lexicographically by image vector, which fixes the element order.
pub fn from_permutation_generators(
    degree: usize,
    generators: &[Perm],
    limits: &Limits,
) -> Result<FiniteGroup> {
    let gens: Vec<Perm> = generators
        .iter()
        .map(|g| {
            if g.degree() > degree {
                Err(Error::BadParameter(format!(
                    "generator {g} moves points beyond degree {degree}"
                )))
            } else {
                Ok(g.extend_to(degree))
            }
        })
        .collect::<Result<_>>()?;
    let elements = close_permutations(degree, &gens, limits.max_order)?;
    let group = permutation_table(&elements)?;
    Ok(group.with_provenance(Provenance::Permutations {
        degree,
        generators: generators.iter().map(|g| g.to_string()).collect(),
    }))
}

pub(crate) fn close_permutations(degree: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    let id = Perm::identity(degree);
    let mut index: HashMap<Perm, usize> = HashMap::new();
    index.insert(id.clone(), 0);
    let mut elements = vec![id];
    let mut layer_start = 0;
    while layer_start < elements.len() {
        let layer_end = elements.len();
        let mut next = Vec::new();
        for e in &elements[layer_start..layer_end] {
            for g in gens {
                let p = e.then(g);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), usize::MAX);
                    next.push(p);
                }
            }
        }
        if elements.len() + next.len() > cap {
            return Err(Error::OrderCapExceeded {
                order: elements.len() + next.len(),
                cap,
            });
        }
        next.sort();
        for p in next {
            index.insert(p.clone(), elements.len());
            elements.push(p);
        }
        layer_start = layer_end;
    }
    Ok(elements)
}

pub(crate) fn permutation_table(elements: &[Perm]) -> Result<FiniteGroup> {
    let n = elements.len();
    let index: HashMap<&Perm, u32> = elements.iter().zip(0u32..).collect();
    let mut mul = Vec::with_capacity(n * n);
    for a in elements {
        for b in elements {
            mul.push(index[&a.then(b)]);
        }
    }
    let labels = elements.iter().map(|p| p.to_string()).collect();
    FiniteGroup::from_validated_parts(mul, labels, Provenance::Table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trips() {
        let p = Perm::parse_cycles("(1 2 3)(4 5)", 5).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(Perm::identity(3).to_string(), "()");
        assert!(Perm::parse_cycles("(1 1)", 3).is_err());
        assert!(Perm::parse_cycles("(1 4)", 3).is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a: Perm = "(1 2)".parse::<Perm>().unwrap().extend_to(3);
        let b: Perm = "(2 3)".parse::<Perm>().unwrap();
        // 1 -a-> 2 -b-> 3
        assert_eq!(a.then(&b).to_string(), "(1 3 2)");
    }

    #[test]
    fn closure_orders() {
        let lim = Limits::default();
        let s3 = from_permutation_generators(
            3,
            &["(1 2)".parse().unwrap(), "(1 2 3)".parse().unwrap()],
            &lim,
        )
        .unwrap();
        assert_eq!(s3.order(), 6);
        let trivial = from_permutation_generators(4, &[], &lim).unwrap();
        assert_eq!(trivial.order(), 1);
        let s5 = from_permutation_generators(
            5,
            &["(1 2 3 4 5)".parse().unwrap(), "(1 2)".parse().unwrap()],
            &lim,
        )
        .unwrap();
        assert_eq!(s5.order(), 120);
        assert_eq!(s5.label(s5.identity()), "()");
    }

    #[test]
    fn closure_respects_order_cap() {
        let lim = Limits {
            max_order: 100,
            ..Limits::default()
        };
        let err = from_permutation_generators(
            5,
            &["(1 2 3 4 5)".parse().unwrap(), "(1 2)".parse().unwrap()],
            &lim,
        )
        .unwrap_err();
        assert!(matches!(err, Error::OrderCapExceeded { cap: 100, .. }));
    }
}
