//! Zero divisors, domains, malnormality and the conjugate-separation
//! properties built on them.

mod witness;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::group::{
    centralizer, enumerate_subgroups, normal_closure, normal_subgroups, Elem, FiniteGroup, Subgroup,
};

pub use witness::{ElemRef, SubgroupRef, Witness};

pub const LOCALLY_NILPOTENT_NOTE: &str =
    "locally nilpotent subgroups are read as nilpotent subgroups, which coincide for finite groups";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub property: String,
    pub params: Params,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
    /// For implications: whether the hypotheses held.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antecedent: Option<bool>,
    pub notes: Vec<String>,
}

impl PropertyVerdict {
    fn new(property: &str, params: Params, holds: bool) -> Self {
        PropertyVerdict {
            property: property.to_string(),
            params,
            holds,
            witnesses: Vec::new(),
            antecedent: None,
            notes: Vec::new(),
        }
    }

    fn with_witness(mut self, w: Option<Witness>) -> Self {
        self.witnesses.extend(w);
        self
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    /// Every witness re-checks from the definitions.
    pub fn witnesses_revalidate(&self, g: &FiniteGroup) -> bool {
        self.witnesses
            .iter()
            .filter(|w| !matches!(w, Witness::Counterexample { .. }))
            .all(|w| w.revalidate(g))
    }
}

fn k_params(k: usize) -> Params {
    Params {
        k: Some(k),
        method: None,
    }
}

/// `centralizers[x]` is `C_G(x)` as a bitset.
fn centralizer_table(g: &FiniteGroup) -> Vec<FixedBitSet> {
    let n = g.order();
    let mut out = vec![FixedBitSet::with_capacity(n); n];
    for a in g.elements() {
        for b in g.elements().skip(a.index()) {
            if g.commute(a, b) {
                out[a.index()].insert(b.index());
                out[b.index()].insert(a.index());
            }
        }
    }
    out
}

fn first_nontrivial(bits: &FixedBitSet) -> Option<Elem> {
    bits.ones().find(|&i| i != 0).map(|i| Elem(i as u32))
}

fn conjugacy_class(g: &FiniteGroup, x: Elem) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(g.order());
    for h in g.elements() {
        out.insert(g.conj(x, h).index());
    }
    out
}

/// A non-identity `y` commuting with every conjugate of `x`, if `x` is a
/// zero divisor.
pub fn zero_divisor_witness(g: &FiniteGroup, x: Elem) -> Option<Elem> {
    if x.is_identity() {
        return None;
    }
    let mut common = FixedBitSet::with_capacity(g.order());
    common.insert_range(..);
    for c in conjugacy_class(g, x).ones() {
        for y in g.elements() {
            if !g.commute(Elem(c as u32), y) {
                common.set(y.index(), false);
            }
        }
    }
    first_nontrivial(&common)
}

/// The same test through `C_G(⟨⟨x⟩⟩) ≠ 1`.
pub fn zero_divisor_by_normal_closure(g: &FiniteGroup, x: Elem) -> Option<Elem> {
    if x.is_identity() {
        return None;
    }
    let k = normal_closure(g, &[x]);
    first_nontrivial(centralizer(g, &k.element_list()).members())
}

pub fn is_zero_divisor(g: &FiniteGroup, x: Elem) -> bool {
    zero_divisor_witness(g, x).is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainMethod {
    ZeroDivisor,
    NormalCentralizer,
    Monolith,
    All,
}

impl fmt::Display for DomainMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainMethod::ZeroDivisor => "zero-divisor",
            DomainMethod::NormalCentralizer => "normal-centralizer",
            DomainMethod::Monolith => "monolith",
            DomainMethod::All => "all",
        })
    }
}

impl FromStr for DomainMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero-divisor" => Ok(DomainMethod::ZeroDivisor),
            "normal-centralizer" => Ok(DomainMethod::NormalCentralizer),
            "monolith" => Ok(DomainMethod::Monolith),
            "all" => Ok(DomainMethod::All),
            _ => Err(Error::BadParameter(format!("unknown domain method {s:?}"))),
        }
    }
}

fn domain_by_zero_divisors(g: &FiniteGroup) -> Option<Witness> {
    let cents = centralizer_table(g);
    let mut done = FixedBitSet::with_capacity(g.order());
    for x in g.non_identity() {
        if done.contains(x.index()) {
            continue;
        }
        // zero divisors are closed under conjugation
        let class = conjugacy_class(g, x);
        done.union_with(&class);
        let mut common = cents[x.index()].clone();
        for c in class.ones() {
            common.intersect_with(&cents[c]);
        }
        if let Some(y) = first_nontrivial(&common) {
            return Some(Witness::ZeroDivisor {
                x: ElemRef::new(g, x),
                y: ElemRef::new(g, y),
            });
        }
    }
    None
}

fn domain_by_normal_centralizers(g: &FiniteGroup) -> Option<Witness> {
    normal_subgroups(g, false)
        .into_iter()
        .filter(|k| !k.is_trivial())
        .find_map(|k| {
            first_nontrivial(centralizer(g, &k.element_list()).members()).map(|y| {
                Witness::CentralizedNormal {
                    normal: SubgroupRef::new(&k),
                    centralizer: ElemRef::new(g, y),
                }
            })
        })
}

fn domain_by_monolith(g: &FiniteGroup) -> Option<Witness> {
    let minimal = normal_subgroups(g, true);
    match minimal.as_slice() {
        [] => None,
        [m] => first_nontrivial(centralizer(g, &m.element_list()).members()).map(|y| {
            Witness::CentralizedNormal {
                normal: SubgroupRef::new(m),
                centralizer: ElemRef::new(g, y),
            }
        }),
        [a, b, ..] => Some(Witness::NoMonolith {
            first: SubgroupRef::new(a),
            second: SubgroupRef::new(b),
        }),
    }
}

/// The unique minimal normal subgroup, if there is exactly one.
pub fn monolith(g: &FiniteGroup) -> Option<Subgroup<'_>> {
    let mut minimal = normal_subgroups(g, true);
    if minimal.len() == 1 {
        minimal.pop()
    } else {
        None
    }
}

pub fn is_domain(g: &FiniteGroup, method: DomainMethod) -> Result<PropertyVerdict> {
    let params = Params {
        k: None,
        method: Some(method.to_string()),
    };
    let route = |m: DomainMethod| match m {
        DomainMethod::ZeroDivisor => domain_by_zero_divisors(g),
        DomainMethod::NormalCentralizer => domain_by_normal_centralizers(g),
        _ => domain_by_monolith(g),
    };
    let mut verdict = if method == DomainMethod::All {
        let results: Vec<(DomainMethod, Option<Witness>)> = [
            DomainMethod::ZeroDivisor,
            DomainMethod::NormalCentralizer,
            DomainMethod::Monolith,
        ]
        .into_iter()
        .map(|m| (m, route(m)))
        .collect();
        let holds = results[0].1.is_none();
        if results.iter().any(|(_, w)| w.is_none() != holds) {
            let summary: Vec<String> = results
                .iter()
                .map(|(m, w)| format!("{m}={}", w.is_none()))
                .collect();
            return Err(Error::CharacterizationDisagreement(summary.join(", ")));
        }
        let mut v = PropertyVerdict::new("domain", params, holds);
        v.witnesses = results.into_iter().filter_map(|(_, w)| w).collect();
        v
    } else {
        let w = route(method);
        PropertyVerdict::new("domain", params, w.is_none()).with_witness(w)
    };
    if g.is_trivial() {
        verdict = verdict.note("trivial group: a domain by convention");
    } else if !verdict.holds && !g.is_abelian() && monolith(g).is_some() {
        verdict = verdict.note("monolithic, but the monolith has a non-trivial centralizer");
    }
    Ok(verdict)
}

/// An element `x ∉ H` with `H ∩ H^x ≠ 1`, and that intersection.
pub fn malnormality_witness<'g>(h: &Subgroup<'g>) -> Option<(Elem, Subgroup<'g>)> {
    let g = h.group();
    g.elements().filter(|&x| !h.contains(x)).find_map(|x| {
        let meet = h.intersection(&h.conjugate(x));
        (!meet.is_trivial()).then_some((x, meet))
    })
}

pub fn is_malnormal(h: &Subgroup<'_>) -> bool {
    malnormality_witness(h).is_none()
}

pub fn check_malnormal(h: &Subgroup<'_>) -> PropertyVerdict {
    let w = malnormality_witness(h).map(|(x, meet)| Witness::NotMalnormal {
        subgroup: SubgroupRef::new(h),
        conjugator: ElemRef::new(h.group(), x),
        intersection: SubgroupRef::new(&meet),
    });
    PropertyVerdict::new("malnormal", Params::default(), w.is_none()).with_witness(w)
}

/// Families of subgroups whose maximal members are tested for malnormality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupClass {
    Abelian,
    NilpotentClass(usize),
    Nilpotent,
}

/// The subgroup lattice with nilpotency classes cached.
#[derive(Debug, Clone)]
pub struct Lattice<'g> {
    group: &'g FiniteGroup,
    subgroups: Vec<Subgroup<'g>>,
    classes: Vec<Option<usize>>,
    index: HashMap<FixedBitSet, usize>,
}

impl<'g> Lattice<'g> {
    pub fn new(group: &'g FiniteGroup, limits: &Limits) -> Result<Lattice<'g>> {
        let subgroups = enumerate_subgroups(group, limits)?;
        let classes = subgroups.iter().map(Subgroup::nilpotency_class).collect();
        let index = subgroups
            .iter()
            .enumerate()
            .map(|(i, h)| (h.members().clone(), i))
            .collect();
        Ok(Lattice {
            group,
            subgroups,
            classes,
            index,
        })
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn subgroups(&self) -> &[Subgroup<'g>] {
        &self.subgroups
    }

    pub fn class_of(&self, h: &Subgroup<'_>) -> Option<usize> {
        match self.index.get(h.members()) {
            Some(&i) => self.classes[i],
            None => h.nilpotency_class(),
        }
    }

    fn satisfies(&self, i: usize, class: SubgroupClass) -> bool {
        match class {
            SubgroupClass::Abelian => self.classes[i].is_some_and(|c| c <= 1),
            SubgroupClass::NilpotentClass(k) => self.classes[i].is_some_and(|c| c <= k),
            SubgroupClass::Nilpotent => self.classes[i].is_some(),
        }
    }

    /// Inclusion-maximal members of the family, in lattice order.
    pub fn maximal_members(&self, class: SubgroupClass) -> Vec<Subgroup<'g>> {
        let members: Vec<usize> = (0..self.subgroups.len())
            .filter(|&i| self.satisfies(i, class))
            .collect();
        members
            .iter()
            .filter(|&&i| {
                let h = &self.subgroups[i];
                !members.iter().any(|&j| {
                    j != i
                        && self.subgroups[j].order() > h.order()
                        && h.is_subset(&self.subgroups[j])
                })
            })
            .map(|&i| self.subgroups[i].clone())
            .collect()
    }

    pub fn group_class(&self) -> Option<usize> {
        self.classes.last().copied().flatten()
    }
}

fn class_name(class: SubgroupClass) -> (&'static str, Params) {
    match class {
        SubgroupClass::Abelian => ("csa", Params::default()),
        SubgroupClass::NilpotentClass(k) => ("csnk", k_params(k)),
        SubgroupClass::Nilpotent => ("cs-nilpotent", Params::default()),
    }
}

/// Every maximal member of the family is malnormal.
pub fn is_conjugately_separated(lat: &Lattice<'_>, class: SubgroupClass) -> PropertyVerdict {
    let (name, params) = class_name(class);
    let maximal = lat.maximal_members(class);
    let failing: Vec<Witness> = maximal
        .iter()
        .filter_map(|h| {
            malnormality_witness(h).map(|(x, meet)| Witness::NotMalnormal {
                subgroup: SubgroupRef::new(h),
                conjugator: ElemRef::new(lat.group(), x),
                intersection: SubgroupRef::new(&meet),
            })
        })
        .collect();
    let mut v = PropertyVerdict::new(name, params, failing.is_empty());
    let n_fail = failing.len();
    v.witnesses = failing.into_iter().take(1).collect();
    if n_fail > 1 {
        v = v.note(format!(
            "{n_fail} of {} maximal members are not malnormal",
            maximal.len()
        ));
    }
    if class == SubgroupClass::Nilpotent {
        v = v.note(LOCALLY_NILPOTENT_NOTE);
    }
    v
}

fn transitivity_witness(g: &FiniteGroup) -> Option<(Elem, Elem, Elem)> {
    let cents = centralizer_table(g);
    for b in g.non_identity() {
        let around: Vec<usize> = cents[b.index()].ones().filter(|&i| i != 0).collect();
        for (i, &a) in around.iter().enumerate() {
            for &c in &around[i + 1..] {
                if !cents[a].contains(c) {
                    return Some((Elem(a as u32), b, Elem(c as u32)));
                }
            }
        }
    }
    None
}

pub fn is_commutative_transitive(g: &FiniteGroup) -> PropertyVerdict {
    let w = transitivity_witness(g).map(|(a, b, c)| Witness::NotTransitive {
        a: ElemRef::new(g, a),
        b: ElemRef::new(g, b),
        c: ElemRef::new(g, c),
    });
    PropertyVerdict::new("ct", Params::default(), w.is_none()).with_witness(w)
}

/// Class-`≤ k` subgroups meeting non-trivially generate a class-`≤ k`
/// subgroup; every pair in the lattice is tried.
pub fn has_ntk(lat: &Lattice<'_>, k: usize) -> PropertyVerdict {
    let holds_for = |c: Option<usize>| c.is_some_and(|c| c <= k);
    let small: Vec<&Subgroup<'_>> = lat
        .subgroups()
        .iter()
        .filter(|h| !h.is_trivial() && holds_for(lat.class_of(h)))
        .collect();
    let mut witness = None;
    'pairs: for (i, a) in small.iter().enumerate() {
        for b in &small[i + 1..] {
            if a.is_subset(b) || b.is_subset(a) || a.intersection(b).is_trivial() {
                continue;
            }
            let join = a.join(b);
            let class = lat.class_of(&join);
            if !holds_for(class) {
                witness = Some(Witness::JoinTooDeep {
                    k,
                    first: SubgroupRef::new(a),
                    second: SubgroupRef::new(b),
                    join: SubgroupRef::new(&join),
                    join_class: class,
                });
                break 'pairs;
            }
        }
    }
    PropertyVerdict::new("ntk", k_params(k), witness.is_none()).with_witness(witness)
}

fn implication(
    name: &str,
    params: Params,
    antecedent: bool,
    consequent: bool,
    describe: impl FnOnce() -> String,
) -> PropertyVerdict {
    let holds = !antecedent || consequent;
    let mut v = PropertyVerdict::new(name, params, holds);
    v.antecedent = Some(antecedent);
    if !holds {
        v.witnesses
            .push(Witness::Counterexample { detail: describe() });
    }
    v
}

/// Conjugately separated for class `k`, and not nilpotent, implies domain.
pub fn theorem2_check(lat: &Lattice<'_>, k: usize) -> Result<PropertyVerdict> {
    let csn = is_conjugately_separated(lat, SubgroupClass::NilpotentClass(k));
    let nilpotent = lat.group_class().is_some();
    let domain = is_domain(lat.group(), DomainMethod::ZeroDivisor)?;
    let mut v = implication(
        "theorem2",
        k_params(k),
        csn.holds && !nilpotent,
        domain.holds,
        || format!("CSN_{k} holds, the group is not nilpotent, and it is not a domain"),
    );
    v.notes.push(format!(
        "csn{k}={} nilpotent={nilpotent} domain={}",
        csn.holds, domain.holds
    ));
    if !v.holds {
        v.witnesses.extend(domain.witnesses);
    }
    Ok(v)
}

/// Not nilpotent, with every maximal nilpotent subgroup malnormal, implies
/// domain.
pub fn theorem3_check(lat: &Lattice<'_>) -> Result<PropertyVerdict> {
    let sep = is_conjugately_separated(lat, SubgroupClass::Nilpotent);
    let nilpotent = lat.group_class().is_some();
    let domain = is_domain(lat.group(), DomainMethod::ZeroDivisor)?;
    let mut v = implication(
        "theorem3",
        Params::default(),
        sep.holds && !nilpotent,
        domain.holds,
        || {
            "not nilpotent and every maximal nilpotent subgroup is malnormal, yet not a domain"
                .to_string()
        },
    );
    v.notes.push(format!(
        "separated={} nilpotent={nilpotent} domain={}",
        sep.holds, domain.holds
    ));
    v.notes.push(LOCALLY_NILPOTENT_NOTE.to_string());
    if !v.holds {
        v.witnesses.extend(domain.witnesses);
    }
    Ok(v)
}

pub fn csa_implies_ct_check(lat: &Lattice<'_>) -> PropertyVerdict {
    let csa = is_conjugately_separated(lat, SubgroupClass::Abelian);
    let ct = is_commutative_transitive(lat.group());
    let mut v = implication("csa-ct", Params::default(), csa.holds, ct.holds, || {
        "CSA holds but commuting is not transitive".to_string()
    });
    v.notes.push(format!("csa={} ct={}", csa.holds, ct.holds));
    if !v.holds {
        v.witnesses.extend(ct.witnesses);
    }
    v
}

/// CSN_k implies NT_k.
pub fn csnk_implies_ntk_check(lat: &Lattice<'_>, k: usize) -> PropertyVerdict {
    let csn = is_conjugately_separated(lat, SubgroupClass::NilpotentClass(k));
    let ntk = has_ntk(lat, k);
    let mut v = implication("csnk-ntk", k_params(k), csn.holds, ntk.holds, || {
        format!("CSN_{k} holds but NT_{k} fails")
    });
    v.notes
        .push(format!("csn{k}={} nt{k}={}", csn.holds, ntk.holds));
    if !v.holds {
        v.witnesses.extend(ntk.witnesses);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{builtin, subgroup_generate};

    fn family(s: &str) -> FiniteGroup {
        builtin(&s.parse().unwrap(), &Limits::default()).unwrap()
    }

    fn corpus() -> Vec<FiniteGroup> {
        [
            "C1", "C2", "C3", "C4", "E2^2", "C6", "S3", "D8", "Q8", "C2xC4", "E2^3", "D10",
            "Dic12", "A4", "D12", "C2xS3", "S4", "C3xS3", "D16", "Q16", "A5",
        ]
        .iter()
        .filter_map(|s| s.parse().ok())
        .map(|f| builtin(&f, &Limits::default()).unwrap())
        .collect()
    }

    /// Brute-force scan straight from the definition.
    fn domain_oracle(g: &FiniteGroup) -> bool {
        !g.non_identity().any(|x| {
            g.non_identity()
                .any(|y| g.elements().all(|h| g.commute(g.conj(x, h), y)))
        })
    }

    #[test]
    fn zero_divisor_routes_agree() {
        for g in corpus() {
            for x in g.elements() {
                assert_eq!(
                    zero_divisor_witness(&g, x).is_some(),
                    zero_divisor_by_normal_closure(&g, x).is_some(),
                    "{}",
                    g.provenance()
                );
            }
        }
        let a5 = family("A5");
        assert!(a5.non_identity().all(|x| !is_zero_divisor(&a5, x)));
        let c6 = family("C6");
        assert!(c6
            .non_identity()
            .all(|x| zero_divisor_witness(&c6, x).is_some()));
        assert!(!is_zero_divisor(&c6, Elem::IDENTITY));
    }

    #[test]
    fn domain_routes_agree_with_oracle() {
        for g in corpus() {
            let v = is_domain(&g, DomainMethod::All).unwrap();
            assert_eq!(v.holds, domain_oracle(&g), "{}", g.provenance());
            assert!(v.witnesses_revalidate(&g));
            if v.holds {
                assert!(g.is_trivial() || monolith(&g).is_some());
            } else {
                assert!(!v.witnesses.is_empty());
            }
        }
        assert!(is_domain(&family("A5"), DomainMethod::All).unwrap().holds);
        for name in ["S3", "S4", "Q8", "D8", "C5", "E2^3"] {
            assert!(
                !is_domain(&family(name), DomainMethod::All).unwrap().holds,
                "{name}"
            );
        }
        let trivial = is_domain(&family("C1"), DomainMethod::Monolith).unwrap();
        assert!(trivial.holds && !trivial.notes.is_empty());
    }

    #[test]
    fn s3_domain_witness_is_a3() {
        let g = family("S3");
        let v = is_domain(&g, DomainMethod::NormalCentralizer).unwrap();
        match &v.witnesses[0] {
            Witness::CentralizedNormal { normal, .. } => assert_eq!(normal.order, 3),
            w => panic!("unexpected {w:?}"),
        }
    }

    #[test]
    fn monoliths() {
        let q8 = family("Q8");
        let m = monolith(&q8).unwrap();
        assert_eq!(m.order(), 2);
        let v = is_domain(&q8, DomainMethod::All).unwrap();
        assert!(!v.holds && v.notes.iter().any(|n| n.contains("monolithic")));
        assert_eq!(monolith(&family("S3")).unwrap().order(), 3);
        assert!(monolith(&family("E2^2")).is_none());
        assert_eq!(monolith(&family("A5")).unwrap().order(), 60);
    }

    #[test]
    fn malnormality() {
        let g = family("S3");
        let t = subgroup_generate(&g, &[g.find_label("(1 2)").unwrap()]);
        assert!(is_malnormal(&t));
        let a3 = subgroup_generate(&g, &[g.find_label("(1 2 3)").unwrap()]);
        let v = check_malnormal(&a3);
        assert!(!v.holds && v.witnesses_revalidate(&g));
        assert!(is_malnormal(&Subgroup::whole(&g)));
        assert!(is_malnormal(&Subgroup::trivial(&g)));
    }

    #[test]
    fn maximal_members_of_s3() {
        let g = family("S3");
        let lat = Lattice::new(&g, &Limits::default()).unwrap();
        let mut orders: Vec<usize> = lat
            .maximal_members(SubgroupClass::Abelian)
            .iter()
            .map(|h| h.order())
            .collect();
        orders.sort();
        assert_eq!(orders, vec![2, 2, 2, 3]);
        assert_eq!(
            lat.maximal_members(SubgroupClass::Nilpotent),
            lat.maximal_members(SubgroupClass::Abelian)
        );
        let c6 = family("C6");
        let lat = Lattice::new(&c6, &Limits::default()).unwrap();
        assert_eq!(
            lat.maximal_members(SubgroupClass::Abelian),
            vec![Subgroup::whole(&c6)]
        );
    }

    #[test]
    fn separation_and_transitivity() {
        let s3 = family("S3");
        let lat = Lattice::new(&s3, &Limits::default()).unwrap();
        let csa = is_conjugately_separated(&lat, SubgroupClass::Abelian);
        assert!(!csa.holds && csa.witnesses_revalidate(&s3));
        assert!(is_commutative_transitive(&s3).holds);
        let c2s3 = family("C2xS3");
        let ct = is_commutative_transitive(&c2s3);
        assert!(!ct.holds && ct.witnesses_revalidate(&c2s3));
        let d8 = family("D8");
        let lat = Lattice::new(&d8, &Limits::default()).unwrap();
        assert!(is_conjugately_separated(&lat, SubgroupClass::NilpotentClass(2)).holds);
        assert!(has_ntk(&lat, 2).holds);
    }

    #[test]
    fn corpus_implications() {
        for g in corpus() {
            let lat = Lattice::new(&g, &Limits::default()).unwrap();
            let csa = is_conjugately_separated(&lat, SubgroupClass::Abelian);
            let csn1 = is_conjugately_separated(&lat, SubgroupClass::NilpotentClass(1));
            assert_eq!(csa.holds, csn1.holds);
            assert!(csa_implies_ct_check(&lat).holds);
            for k in 1..=2 {
                assert!(theorem2_check(&lat, k).unwrap().holds);
                let v = csnk_implies_ntk_check(&lat, k);
                assert!(v.holds, "{} {v:?}", g.provenance());
                let nt = has_ntk(&lat, k);
                assert!(nt.witnesses_revalidate(&g));
            }
            let t3 = theorem3_check(&lat).unwrap();
            assert!(t3.holds && t3.notes.iter().any(|n| n == LOCALLY_NILPOTENT_NOTE));
            if lat.group_class().is_some() {
                assert_eq!(t3.antecedent, Some(false));
            }
        }
    }
}
