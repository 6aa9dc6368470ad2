//! Finite groups stored as dense multiplication tables.
//!
//! Elements are the indices `0..order`, the identity is always index 0, and
//! every constructor validates the group axioms before handing out a
//! [`FiniteGroup`].

mod builtin;
mod perm;
mod subgroup;

pub use builtin::{builtin, direct_product, Family};
pub use perm::{from_permutation_generators, Perm};
pub use subgroup::{
    centralizer, enumerate_subgroups, lower_central_series, normal_closure,
    normal_closure_by_conjugates, normal_subgroups, subgroup_generate, LowerCentralSeries,
    Subgroup,
};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ASSOCIATIVITY_CHECK_CAP;
use crate::error::{Error, NotAGroupReason, Result};

/// An element of a [`FiniteGroup`], as a dense index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const IDENTITY: Elem = Elem(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

/// How a group came to be.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    Table,
    Permutations {
        degree: usize,
        generators: Vec<String>,
    },
    Family {
        spec: String,
    },
    Product {
        left: String,
        right: String,
    },
    DirectPowerSubgroup {
        base: String,
        width: usize,
    },
    File {
        path: String,
        sha256: String,
    },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Table => f.write_str("table"),
            Provenance::Permutations { degree, generators } => {
                write!(
                    f,
                    "permutations of degree {degree}: {}",
                    generators.join(", ")
                )
            }
            Provenance::Family { spec } => write!(f, "family {spec}"),
            Provenance::Product { left, right } => write!(f, "product {left} x {right}"),
            Provenance::DirectPowerSubgroup { base, width } => {
                write!(f, "subgroup of ({base})^{width}")
            }
            Provenance::File { path, sha256 } => write!(f, "file {path} (sha256 {sha256})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<String>,
    label_index: HashMap<String, u32>,
    provenance: Provenance,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

fn not_a_group(reason: NotAGroupReason, detail: impl Into<String>) -> Error {
    Error::NotAGroup {
        reason,
        detail: detail.into(),
    }
}

impl FiniteGroup {
    /// Validates a Cayley table and builds the group it describes.
    ///
    /// The identity and inverses are derived from the table. If the identity
    /// is not at index 0 the indices 0 and `e` are swapped so that it is.
    pub fn from_multiplication_table(
        table: &[Vec<usize>],
        labels: Option<Vec<String>>,
    ) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(not_a_group(NotAGroupReason::NoIdentity, "empty table"));
        }
        if n > ASSOCIATIVITY_CHECK_CAP {
            return Err(Error::OrderCapExceeded {
                order: n,
                cap: ASSOCIATIVITY_CHECK_CAP,
            });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadParameter(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::BadParameter(format!(
                    "entry {bad} in row {i} is out of range"
                )));
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::BadParameter(format!(
                    "{} labels for {n} elements",
                    labels.len()
                )));
            }
        }
        let flat: Vec<u32> = table.iter().flatten().map(|&v| v as u32).collect();
        check_latin(n, &flat)?;
        check_associative(n, &flat)?;

        let e = (0..n)
            .find(|&e| {
                (0..n).all(|x| flat[e * n + x] as usize == x && flat[x * n + e] as usize == x)
            })
            .ok_or_else(|| not_a_group(NotAGroupReason::NoIdentity, "no two-sided identity"))?;
        for x in 0..n {
            let y = (0..n).find(|&y| flat[x * n + y] as usize == e).unwrap();
            if flat[y * n + x] as usize != e {
                return Err(not_a_group(
                    NotAGroupReason::NoInverse,
                    format!("element {x} has no two-sided inverse"),
                ));
            }
        }

        let mut labels = labels;
        let flat = if e == 0 {
            flat
        } else {
            // relabel by the transposition (0 e)
            let swap = |v: usize| -> usize {
                if v == 0 {
                    e
                } else if v == e {
                    0
                } else {
                    v
                }
            };
            if let Some(l) = labels.as_mut() {
                l.swap(0, e);
            }
            let mut out = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    out[a * n + b] = swap(flat[swap(a) * n + swap(b)] as usize) as u32;
                }
            }
            out
        };
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        FiniteGroup::from_parts(flat, labels, Provenance::Table)
    }

    /// Builds a group from a table already known to satisfy the axioms with
    /// identity at index 0 (subgroups of direct powers, validated families).
    pub(crate) fn from_parts(
        mul: Vec<u32>,
        labels: Vec<String>,
        provenance: Provenance,
    ) -> Result<FiniteGroup> {
        let n = labels.len();
        debug_assert_eq!(mul.len(), n * n);
        let mut inv = vec![0u32; n];
        for x in 0..n {
            let row = &mul[x * n..(x + 1) * n];
            let y = row.iter().position(|&v| v == 0).ok_or_else(|| {
                not_a_group(
                    NotAGroupReason::NoInverse,
                    format!("element {x} has no inverse"),
                )
            })?;
            inv[x] = y as u32;
        }
        let mut label_index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), i as u32).is_some() {
                return Err(Error::BadParameter(format!(
                    "duplicate element label {l:?}"
                )));
            }
        }
        Ok(FiniteGroup {
            order: n,
            mul,
            inv,
            labels,
            label_index,
            provenance,
        })
    }

    /// Validates an externally supplied table and then builds the group.
    pub(crate) fn from_validated_parts(
        mul: Vec<u32>,
        labels: Vec<String>,
        provenance: Provenance,
    ) -> Result<FiniteGroup> {
        let n = labels.len();
        if n <= ASSOCIATIVITY_CHECK_CAP {
            check_latin(n, &mul)?;
            check_associative(n, &mul)?;
        }
        if (0..n).any(|x| mul[x] as usize != x || mul[x * n] as usize != x) {
            return Err(not_a_group(
                NotAGroupReason::NoIdentity,
                "index 0 is not the identity",
            ));
        }
        FiniteGroup::from_parts(mul, labels, provenance)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> FiniteGroup {
        self.provenance = provenance;
        self
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        Elem::IDENTITY
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        Elem(self.inv[a.index()])
    }

    /// `a^x = x⁻¹ a x`.
    #[inline]
    pub fn conj(&self, a: Elem, x: Elem) -> Elem {
        self.mul(self.mul(self.inv(x), a), x)
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    #[inline]
    pub fn comm(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    #[inline]
    pub fn commute(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs() % self.element_order(a) as u64;
        let mut acc = Elem::IDENTITY;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut k = 1;
        let mut x = a;
        while !x.is_identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + ExactSizeIterator {
        (0..self.order as u32).map(Elem)
    }

    pub fn non_identity(&self) -> impl Iterator<Item = Elem> {
        (1..self.order as u32).map(Elem)
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks an element up by label, falling back to `#index`.
    pub fn find_label(&self, label: &str) -> Option<Elem> {
        if let Some(&i) = self.label_index.get(label) {
            return Some(Elem(i));
        }
        label
            .strip_prefix('#')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&i| i < self.order)
            .map(|i| Elem(i as u32))
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| {
            self.elements()
                .skip(a.index() + 1)
                .all(|b| self.commute(a, b))
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Rows of the Cayley table.
    pub fn table_rows(&self) -> impl Iterator<Item = &[u32]> {
        self.mul.chunks(self.order)
    }

    pub(crate) fn raw_mul(&self) -> &[u32] {
        &self.mul
    }

    /// SHA-256 of the table, stable across runs and platforms.
    pub fn table_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.order as u64).to_le_bytes());
        for v in &self.mul {
            h.update(v.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generating_set(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut span = subgroup::closure_bits(self, &[]);
        for g in self.non_identity() {
            if !span.contains(g.index()) {
                gens.push(g);
                span = subgroup::closure_bits(self, &gens);
                if span.count_ones(..) == self.order {
                    break;
                }
            }
        }
        gens
    }

    /// Checks every group axiom against the stored tables.
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.order;
        check_latin(n, &self.mul)?;
        check_associative(n, &self.mul)?;
        for x in self.elements() {
            if self.mul(Elem::IDENTITY, x) != x || self.mul(x, Elem::IDENTITY) != x {
                return Err(not_a_group(
                    NotAGroupReason::NoIdentity,
                    "index 0 is not neutral",
                ));
            }
            if !self.mul(x, self.inv(x)).is_identity() || !self.mul(self.inv(x), x).is_identity() {
                return Err(not_a_group(
                    NotAGroupReason::NoInverse,
                    format!("bad inverse of {}", x.0),
                ));
            }
        }
        Ok(())
    }
}

fn check_latin(n: usize, flat: &[u32]) -> Result<()> {
    let mut seen = vec![usize::MAX; n];
    for r in 0..n {
        for c in 0..n {
            let v = flat[r * n + c] as usize;
            if seen[v] == r {
                return Err(not_a_group(
                    NotAGroupReason::NotLatin,
                    format!("row {r} repeats {v}"),
                ));
            }
            seen[v] = r;
        }
    }
    seen.iter_mut().for_each(|s| *s = usize::MAX);
    for c in 0..n {
        for r in 0..n {
            let v = flat[r * n + c] as usize;
            if seen[v] == c {
                return Err(not_a_group(
                    NotAGroupReason::NotLatin,
                    format!("column {c} repeats {v}"),
                ));
            }
            seen[v] = c;
        }
    }
    Ok(())
}

fn check_associative(n: usize, flat: &[u32]) -> Result<()> {
    if n > ASSOCIATIVITY_CHECK_CAP {
        return Err(Error::OrderCapExceeded {
            order: n,
            cap: ASSOCIATIVITY_CHECK_CAP,
        });
    }
    for a in 0..n {
        for b in 0..n {
            let ab = flat[a * n + b] as usize;
            for c in 0..n {
                let bc = flat[b * n + c] as usize;
                if flat[ab * n + c] != flat[a * n + bc] {
                    return Err(not_a_group(
                        NotAGroupReason::NotAssociative,
                        format!("({a}*{b})*{c} != {a}*({b}*{c})"),
                    ));
                }
            }
        }
    }
    Ok(())
}
