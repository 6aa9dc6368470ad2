use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use crate::config::Limits;
use crate::error::{Error, Result};

use super::{Elem, FiniteGroup};

/// A subgroup of a parent [`FiniteGroup`], stored as a member bitset.
#[derive(Clone)]
pub struct Subgroup<'g> {
    group: &'g FiniteGroup,
    members: FixedBitSet,
    order: usize,
}

impl fmt::Debug for Subgroup<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subgroup(order {}, {:?})",
            self.order,
            self.elements().map(|e| e.0).collect::<Vec<_>>()
        )
    }
}

impl PartialEq for Subgroup<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup<'_> {}

impl Hash for Subgroup<'_> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl Ord for Subgroup<'_> {
    /// By order, then by the ascending member list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.members.ones().cmp(other.members.ones()))
    }
}

impl PartialOrd for Subgroup<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'g> Subgroup<'g> {
    /// Wraps a bitset the caller knows to be closed.
    pub(crate) fn from_bits(group: &'g FiniteGroup, members: FixedBitSet) -> Subgroup<'g> {
        let order = members.count_ones(..);
        Subgroup {
            group,
            members,
            order,
        }
    }

    /// Checks closure before wrapping an arbitrary element set.
    pub fn from_elements(group: &'g FiniteGroup, elements: &[Elem]) -> Option<Subgroup<'g>> {
        let mut bits = FixedBitSet::with_capacity(group.order());
        bits.insert(0);
        for e in elements {
            bits.insert(e.index());
        }
        let ok = bits.ones().all(|a| {
            bits.ones()
                .all(|b| bits.contains(group.mul(Elem(a as u32), Elem(b as u32)).index()))
        });
        ok.then(|| Subgroup::from_bits(group, bits))
    }

    pub fn whole(group: &'g FiniteGroup) -> Subgroup<'g> {
        let mut bits = FixedBitSet::with_capacity(group.order());
        bits.insert_range(..);
        Subgroup::from_bits(group, bits)
    }

    pub fn trivial(group: &'g FiniteGroup) -> Subgroup<'g> {
        let mut bits = FixedBitSet::with_capacity(group.order());
        bits.insert(0);
        Subgroup::from_bits(group, bits)
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x.index())
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.ones().map(|i| Elem(i as u32))
    }

    pub fn element_list(&self) -> Vec<Elem> {
        self.elements().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order == self.group.order()
    }

    pub fn is_subset(&self, other: &Subgroup<'_>) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subgroup<'_>) -> Subgroup<'g> {
        let mut bits = self.members.clone();
        bits.intersect_with(&other.members);
        Subgroup::from_bits(self.group, bits)
    }

    /// `H^x = x⁻¹ H x`.
    pub fn conjugate(&self, x: Elem) -> Subgroup<'g> {
        let mut bits = FixedBitSet::with_capacity(self.group.order());
        for h in self.elements() {
            bits.insert(self.group.conj(h, x).index());
        }
        Subgroup::from_bits(self.group, bits)
    }

    pub fn is_normal(&self) -> bool {
        let gens = self.group.generating_set();
        gens.iter().all(|&x| {
            self.elements()
                .all(|h| self.contains(self.group.conj(h, x)))
        })
    }

    pub fn is_abelian(&self) -> bool {
        let els = self.element_list();
        els.iter()
            .enumerate()
            .all(|(i, &a)| els[i + 1..].iter().all(|&b| self.group.commute(a, b)))
    }

    /// A greedy generating set inside this subgroup.
    pub fn generators(&self) -> Vec<Elem> {
        generate_greedy(self.group, self.elements()).1
    }

    pub fn join(&self, other: &Subgroup<'_>) -> Subgroup<'g> {
        let (bits, _) = generate_greedy(
            self.group,
            self.generators().into_iter().chain(other.generators()),
        );
        Subgroup::from_bits(self.group, bits)
    }

    /// Nilpotency class, or `None` if the subgroup is not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        lower_central_series(self).class
    }
}

/// Closure of `seeds` under right multiplication, starting at the identity.
pub(crate) fn closure_bits(group: &FiniteGroup, seeds: &[Elem]) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(group.order());
    bits.insert(0);
    let mut queue = vec![Elem::IDENTITY];
    while let Some(x) = queue.pop() {
        for &s in seeds {
            let y = group.mul(x, s);
            if !bits.put(y.index()) {
                queue.push(y);
            }
        }
    }
    bits
}

/// Adds elements one at a time, keeping only those that enlarge the span.
fn generate_greedy(
    group: &FiniteGroup,
    elements: impl IntoIterator<Item = Elem>,
) -> (FixedBitSet, Vec<Elem>) {
    let mut gens = Vec::new();
    let mut bits = closure_bits(group, &[]);
    for e in elements {
        if !bits.contains(e.index()) {
            gens.push(e);
            bits = closure_bits(group, &gens);
        }
    }
    (bits, gens)
}

/// The smallest subgroup containing `seeds`.
pub fn subgroup_generate<'g>(group: &'g FiniteGroup, seeds: &[Elem]) -> Subgroup<'g> {
    Subgroup::from_bits(group, closure_bits(group, seeds))
}

/// `C_G(S) = {g : gx = xg for all x in S}`.
pub fn centralizer<'g>(group: &'g FiniteGroup, subset: &[Elem]) -> Subgroup<'g> {
    let mut bits = FixedBitSet::with_capacity(group.order());
    for g in group.elements() {
        if subset.iter().all(|&x| group.commute(g, x)) {
            bits.insert(g.index());
        }
    }
    Subgroup::from_bits(group, bits)
}

/// Smallest normal subgroup containing `subset`, grown by conjugating the
/// current generators with the generators of `G` until stable.
pub fn normal_closure<'g>(group: &'g FiniteGroup, subset: &[Elem]) -> Subgroup<'g> {
    let conjugators = group.generating_set();
    let mut gens: Vec<Elem> = Vec::new();
    let mut bits = closure_bits(group, &[]);
    let mut pending: Vec<Elem> = subset.to_vec();
    while let Some(x) = pending.pop() {
        if bits.contains(x.index()) {
            continue;
        }
        gens.push(x);
        bits = closure_bits(group, &gens);
        for &g in &gens {
            for &c in &conjugators {
                let y = group.conj(g, c);
                if !bits.contains(y.index()) {
                    pending.push(y);
                }
            }
        }
    }
    Subgroup::from_bits(group, bits)
}

/// Normal closure as the span of every conjugate of every element of `subset`.
pub fn normal_closure_by_conjugates<'g>(group: &'g FiniteGroup, subset: &[Elem]) -> Subgroup<'g> {
    let conjugates = subset
        .iter()
        .flat_map(|&x| group.elements().map(move |g| group.conj(x, g)));
    Subgroup::from_bits(group, generate_greedy(group, conjugates).0)
}

/// Every subgroup of `group`, sorted by order then member list.
///
/// Starts from the cyclic subgroups and repeatedly joins a known subgroup
/// with a cyclic one until nothing new appears.
pub fn enumerate_subgroups<'g>(
    group: &'g FiniteGroup,
    limits: &Limits,
) -> Result<Vec<Subgroup<'g>>> {
    if group.order() > limits.max_lattice_order {
        return Err(Error::LatticeCapExceeded(format!(
            "group order {} exceeds lattice order cap {}",
            group.order(),
            limits.max_lattice_order
        )));
    }
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    // one generator per cyclic subgroup
    let mut cyclic: Vec<Elem> = Vec::new();
    let mut found: Vec<(FixedBitSet, Vec<Elem>)> = Vec::new();
    for x in group.elements() {
        let bits = closure_bits(group, &[x]);
        if seen.insert(bits.clone()) {
            if !x.is_identity() {
                cyclic.push(x);
            }
            found.push((bits, if x.is_identity() { vec![] } else { vec![x] }));
        }
    }
    let mut i = 0;
    while i < found.len() {
        for &c in &cyclic {
            if found[i].0.contains(c.index()) {
                continue;
            }
            let mut gens = found[i].1.clone();
            gens.push(c);
            let bits = closure_bits(group, &gens);
            if seen.insert(bits.clone()) {
                found.push((bits, gens));
                if found.len() > limits.max_lattice {
                    return Err(Error::LatticeCapExceeded(format!(
                        "more than {} subgroups",
                        limits.max_lattice
                    )));
                }
            }
        }
        i += 1;
    }
    let mut subgroups: Vec<Subgroup<'g>> = found
        .into_iter()
        .map(|(bits, _)| Subgroup::from_bits(group, bits))
        .collect();
    subgroups.sort();
    Ok(subgroups)
}

/// All normal subgroups, sorted like [`enumerate_subgroups`]; with
/// `minimal_only`, just the minimal non-trivial ones.
///
/// Built as joins of normal closures of single elements, so no lattice is
/// needed.
pub fn normal_subgroups<'g>(group: &'g FiniteGroup, minimal_only: bool) -> Vec<Subgroup<'g>> {
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut atoms: Vec<Subgroup<'g>> = Vec::new();
    for x in group.elements() {
        let n = normal_closure(group, &[x]);
        if seen.insert(n.members.clone()) {
            atoms.push(n);
        }
    }
    let mut all = atoms.clone();
    let mut i = 0;
    while i < all.len() {
        for a in &atoms {
            if a.is_subset(&all[i]) {
                continue;
            }
            let j = all[i].join(a);
            if seen.insert(j.members.clone()) {
                all.push(j);
            }
        }
        i += 1;
    }
    all.sort();
    if minimal_only {
        let nontrivial: Vec<_> = all.into_iter().filter(|n| !n.is_trivial()).collect();
        let minimal = nontrivial
            .iter()
            .filter(|n| {
                !nontrivial
                    .iter()
                    .any(|m| m.order() < n.order() && m.is_subset(n))
            })
            .cloned()
            .collect();
        return minimal;
    }
    all
}

#[derive(Debug, Clone)]
pub struct LowerCentralSeries<'g> {
    /// `γ1 = H, γ2, ..` up to and including the first repeated or trivial term.
    pub series: Vec<Subgroup<'g>>,
    /// First `k` with `γ_{k+1} = 1`; `None` when the series stalls above 1.
    pub class: Option<usize>,
}

/// `γ1 = H`, `γ_{i+1} = [γ_i, H]`, until the series stabilizes.
pub fn lower_central_series<'g>(h: &Subgroup<'g>) -> LowerCentralSeries<'g> {
    let group = h.group;
    let mut series = vec![h.clone()];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            return LowerCentralSeries {
                class: Some(series.len() - 1),
                series,
            };
        }
        let hgens = h.generators();
        let commutators = last
            .elements()
            .flat_map(|a| hgens.iter().map(move |&b| group.comm(a, b)))
            .collect::<Vec<_>>();
        // [γ_i, H] is normal in H, so close the generator commutators under
        // H-conjugation.
        let next = normal_closure_within(h, &commutators);
        if next == *last {
            return LowerCentralSeries {
                series,
                class: None,
            };
        }
        series.push(next);
    }
}

/// Normal closure of `subset` inside the subgroup `h`.
fn normal_closure_within<'g>(h: &Subgroup<'g>, subset: &[Elem]) -> Subgroup<'g> {
    let group = h.group;
    let conjugators = h.generators();
    let mut gens: Vec<Elem> = Vec::new();
    let mut bits = closure_bits(group, &[]);
    let mut pending: Vec<Elem> = subset.to_vec();
    while let Some(x) = pending.pop() {
        if bits.contains(x.index()) {
            continue;
        }
        gens.push(x);
        bits = closure_bits(group, &gens);
        for &g in &gens {
            for &c in &conjugators {
                let y = group.conj(g, c);
                if !bits.contains(y.index()) {
                    pending.push(y);
                }
            }
        }
    }
    Subgroup::from_bits(group, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{builtin, direct_product, from_permutation_generators, Perm};

    fn family(s: &str) -> FiniteGroup {
        builtin(&s.parse().unwrap(), &Limits::default()).unwrap()
    }

    fn el(g: &FiniteGroup, label: &str) -> Elem {
        g.find_label(label).unwrap()
    }

    /// Brute force over every subset containing the identity.
    fn subgroup_count_oracle(g: &FiniteGroup) -> usize {
        let n = g.order();
        assert!(n <= 16);
        (0u32..1 << (n - 1))
            .filter(|mask| {
                let set: Vec<usize> = std::iter::once(0)
                    .chain((1..n).filter(|i| mask >> (i - 1) & 1 == 1))
                    .collect();
                set.iter().all(|&a| {
                    set.iter()
                        .all(|&b| set.contains(&g.mul(Elem(a as u32), Elem(b as u32)).index()))
                })
            })
            .count()
    }

    #[test]
    fn generate_examples() {
        let s3 = family("S3");
        let c3 = subgroup_generate(&s3, &[el(&s3, "(1 2 3)")]);
        assert_eq!(c3.order(), 3);
        assert!(subgroup_generate(&s3, &[]).is_trivial());
        assert!(subgroup_generate(&s3, &s3.elements().collect::<Vec<_>>()).is_whole());
    }

    #[test]
    fn centralizer_examples() {
        let s3 = family("S3");
        let c = centralizer(&s3, &[el(&s3, "(1 2 3)")]);
        assert_eq!(c, subgroup_generate(&s3, &[el(&s3, "(1 2 3)")]));
        assert!(centralizer(&s3, &[]).is_whole());
        let c6 = family("C6");
        assert!(centralizer(&c6, &[Elem(2), Elem(3)]).is_whole());
    }

    #[test]
    fn normal_closure_examples() {
        let s3 = family("S3");
        assert!(normal_closure(&s3, &[el(&s3, "(1 2)")]).is_whole());
        assert!(normal_closure(&s3, &[s3.identity()]).is_trivial());
        let c6 = family("C6");
        assert_eq!(
            normal_closure(&c6, &[Elem(2)]),
            subgroup_generate(&c6, &[Elem(2)])
        );
    }

    #[test]
    fn subgroup_counts_match_brute_force() {
        let lim = Limits::default();
        for (s, expected) in [
            ("S3", 6),
            ("E2^2", 5),
            ("Q8", 6),
            ("C7", 2),
            ("D8", 10),
            ("C2xC4", 8),
        ] {
            let g = family(s);
            let lattice = enumerate_subgroups(&g, &lim).unwrap();
            assert_eq!(lattice.len(), subgroup_count_oracle(&g), "{s}");
            assert_eq!(lattice.len(), expected, "{s}");
            assert!(lattice.windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(enumerate_subgroups(&family("S4"), &lim).unwrap().len(), 30);
        assert_eq!(enumerate_subgroups(&family("A5"), &lim).unwrap().len(), 59);
    }

    #[test]
    fn lattice_caps() {
        let g = family("E2^4");
        let lim = Limits {
            max_lattice: 20,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_subgroups(&g, &lim),
            Err(Error::LatticeCapExceeded(_))
        ));
        let lim = Limits {
            max_lattice_order: 8,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_subgroups(&g, &lim),
            Err(Error::LatticeCapExceeded(_))
        ));
    }

    #[test]
    fn normal_subgroup_examples() {
        let s3 = family("S3");
        let normals = normal_subgroups(&s3, false);
        assert_eq!(
            normals.iter().map(|n| n.order()).collect::<Vec<_>>(),
            vec![1, 3, 6]
        );
        let q8 = family("Q8");
        let minimal = normal_subgroups(&q8, true);
        assert_eq!(minimal.len(), 1);
        assert_eq!(minimal[0].order(), 2);
        let e = family("E2^2");
        assert_eq!(normal_subgroups(&e, false).len(), 5);
        let a5 = family("A5");
        assert_eq!(normal_subgroups(&a5, false).len(), 2);
    }

    #[test]
    fn normal_subgroups_match_lattice_filter() {
        let lim = Limits::default();
        for s in ["S4", "D12", "Dic12", "A4", "C2xS3", "Q8", "A5"] {
            let g = family(s);
            let filtered: Vec<_> = enumerate_subgroups(&g, &lim)
                .unwrap()
                .into_iter()
                .filter(|h| g.elements().all(|x| h.conjugate(x) == *h))
                .collect();
            assert_eq!(normal_subgroups(&g, false), filtered, "{s}");
        }
    }

    #[test]
    fn lower_central_series_examples() {
        let c6 = family("C6");
        let lcs = lower_central_series(&Subgroup::whole(&c6));
        assert_eq!(lcs.class, Some(1));
        assert_eq!(lcs.series.len(), 2);
        let d8 = family("D8");
        let lcs = lower_central_series(&Subgroup::whole(&d8));
        assert_eq!(lcs.series[1].order(), 2);
        assert_eq!(lcs.class, Some(2));
        let s3 = family("S3");
        let lcs = lower_central_series(&Subgroup::whole(&s3));
        assert_eq!(lcs.class, None);
        assert_eq!(lcs.series.last().unwrap().order(), 3);
        assert_eq!(lower_central_series(&Subgroup::trivial(&s3)).class, Some(0));
    }

    #[test]
    fn class_of_direct_product_is_max_of_factors() {
        for (a, b) in [
            ("D8", "C3"),
            ("Q8", "C2"),
            ("D16", "C2"),
            ("C4", "C2"),
            ("S3", "C2"),
        ] {
            let (ga, gb) = (family(a), family(b));
            let p = direct_product(&ga, &gb).unwrap();
            let ca = Subgroup::whole(&ga).nilpotency_class();
            let cb = Subgroup::whole(&gb).nilpotency_class();
            let expected = ca.zip(cb).map(|(x, y)| x.max(y));
            assert_eq!(Subgroup::whole(&p).nilpotency_class(), expected, "{a}x{b}");
        }
    }

    #[test]
    fn permutation_s3_matches_family_s3_lattice_size() {
        let g = from_permutation_generators(
            3,
            &["(1 2)".parse::<Perm>().unwrap(), "(1 2 3)".parse().unwrap()],
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(
            enumerate_subgroups(&g, &Limits::default()).unwrap().len(),
            6
        );
    }
}
