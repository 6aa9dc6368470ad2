//! Evidence attached to verdicts, and re-validation against the raw
//! definitions. The checks here deliberately avoid the subgroup machinery
//! of the rest of the crate: subgroups are regenerated by a plain closure
//! loop and nilpotency is read off commutator subgroups directly.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::group::{Elem, FiniteGroup, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElemRef {
    pub index: u32,
    pub label: String,
}

impl ElemRef {
    pub fn new(group: &FiniteGroup, x: Elem) -> ElemRef {
        ElemRef {
            index: x.0,
            label: group.label(x).to_string(),
        }
    }

    pub fn elem(&self) -> Elem {
        Elem(self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupRef {
    pub order: usize,
    pub generators: Vec<ElemRef>,
}

impl SubgroupRef {
    pub fn new(h: &Subgroup<'_>) -> SubgroupRef {
        let g = h.group();
        SubgroupRef {
            order: h.order(),
            generators: h
                .generators()
                .into_iter()
                .map(|x| ElemRef::new(g, x))
                .collect(),
        }
    }

    fn seeds(&self) -> Vec<Elem> {
        self.generators.iter().map(ElemRef::elem).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `y` commutes with every conjugate of `x`.
    ZeroDivisor { x: ElemRef, y: ElemRef },
    /// A non-trivial normal subgroup with a non-trivial centralizing element.
    CentralizedNormal {
        normal: SubgroupRef,
        centralizer: ElemRef,
    },
    /// Two non-trivial normal subgroups meeting trivially, so no minimal
    /// normal subgroup is unique.
    NoMonolith {
        first: SubgroupRef,
        second: SubgroupRef,
    },
    /// `x ∉ H` and `H ∩ H^x` contains a non-identity element.
    NotMalnormal {
        subgroup: SubgroupRef,
        conjugator: ElemRef,
        intersection: SubgroupRef,
    },
    /// `[a,b] = [b,c] = 1` but `[a,c] ≠ 1`.
    NotTransitive { a: ElemRef, b: ElemRef, c: ElemRef },
    /// Two class-`≤ k` subgroups meeting non-trivially whose join has
    /// larger class.
    JoinTooDeep {
        k: usize,
        first: SubgroupRef,
        second: SubgroupRef,
        join: SubgroupRef,
        join_class: Option<usize>,
    },
    /// A theorem's hypotheses held and its conclusion failed.
    Counterexample { detail: String },
}

fn generate(g: &FiniteGroup, seeds: &[Elem]) -> BTreeSet<Elem> {
    let mut set: BTreeSet<Elem> = BTreeSet::from([Elem::IDENTITY]);
    let mut frontier = vec![Elem::IDENTITY];
    while let Some(x) = frontier.pop() {
        for &s in seeds {
            let y = g.mul(x, s);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

fn commutator_subgroup(g: &FiniteGroup, a: &BTreeSet<Elem>, b: &BTreeSet<Elem>) -> BTreeSet<Elem> {
    let comms: Vec<Elem> = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| (x, y)))
        .map(|(x, y)| g.comm(x, y))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    generate(g, &comms)
}

/// Nilpotency class of `⟨seeds⟩`, `None` if it is not nilpotent.
pub(crate) fn class_of(g: &FiniteGroup, h: &BTreeSet<Elem>) -> Option<usize> {
    let mut term = h.clone();
    let mut class = 0;
    loop {
        if term.len() == 1 {
            return Some(class);
        }
        let next = commutator_subgroup(g, &term, h);
        if next == term {
            return None;
        }
        term = next;
        class += 1;
    }
}

fn is_normal(g: &FiniteGroup, h: &BTreeSet<Elem>) -> bool {
    g.elements()
        .all(|x| h.iter().all(|&a| h.contains(&g.conj(a, x))))
}

impl Witness {
    /// Re-checks the witness from the definitions alone.
    pub fn revalidate(&self, g: &FiniteGroup) -> bool {
        match self {
            Witness::ZeroDivisor { x, y } => {
                let (x, y) = (x.elem(), y.elem());
                !x.is_identity()
                    && !y.is_identity()
                    && g.elements().all(|h| g.comm(g.conj(x, h), y).is_identity())
            }
            Witness::CentralizedNormal {
                normal,
                centralizer,
            } => {
                let k = generate(g, &normal.seeds());
                let y = centralizer.elem();
                k.len() == normal.order
                    && k.len() > 1
                    && is_normal(g, &k)
                    && !y.is_identity()
                    && k.iter().all(|&a| g.commute(a, y))
            }
            Witness::NoMonolith { first, second } => {
                let a = generate(g, &first.seeds());
                let b = generate(g, &second.seeds());
                a.len() > 1
                    && b.len() > 1
                    && is_normal(g, &a)
                    && is_normal(g, &b)
                    && a.intersection(&b).count() == 1
            }
            Witness::NotMalnormal {
                subgroup,
                conjugator,
                intersection,
            } => {
                let h = generate(g, &subgroup.seeds());
                let x = conjugator.elem();
                let hx: BTreeSet<Elem> = h.iter().map(|&a| g.conj(a, x)).collect();
                let meet = generate(g, &intersection.seeds());
                !h.contains(&x)
                    && meet.len() > 1
                    && meet.iter().all(|a| h.contains(a) && hx.contains(a))
            }
            Witness::NotTransitive { a, b, c } => {
                let (a, b, c) = (a.elem(), b.elem(), c.elem());
                [a, b, c].iter().all(|x| !x.is_identity())
                    && g.commute(a, b)
                    && g.commute(b, c)
                    && !g.commute(a, c)
            }
            Witness::JoinTooDeep {
                k, first, second, ..
            } => {
                let a = generate(g, &first.seeds());
                let b = generate(g, &second.seeds());
                let join_seeds: Vec<Elem> =
                    first.seeds().into_iter().chain(second.seeds()).collect();
                let join = generate(g, &join_seeds);
                let within = |s: &BTreeSet<Elem>| class_of(g, s).is_some_and(|c| c <= *k);
                within(&a) && within(&b) && a.intersection(&b).count() > 1 && !within(&join)
            }
            Witness::Counterexample { .. } => false,
        }
    }
}
