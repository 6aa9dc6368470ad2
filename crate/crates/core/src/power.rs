//! Subgroups of direct powers `G^w`, handled through stabilizer chains.
//!
//! A tuple `t` acts on `w` disjoint copies of `G` by right multiplication in
//! each coordinate. Using the identity of copy `i` as the `i`-th base point,
//! the `i`-th basic orbit is the set of values `t_i` taken by tuples that are
//! trivial in coordinates `< i`. The order of the subgroup is the product of
//! the basic orbit sizes, so it is known without listing the elements.
//!
//! Chains may use only a prefix of the coordinates as base. The remaining
//! "shadow" coordinates are carried along and let one chain answer
//! questions about many extensions at once (see [`StabilizerChain::relators`]).

use crate::config::Budget;
use crate::error::Result;
use crate::group::FiniteGroup;

pub type Tuple = Vec<u32>;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
pub struct TupleOps<'g> {
    group: &'g FiniteGroup,
    width: usize,
}

impl<'g> TupleOps<'g> {
    pub fn new(group: &'g FiniteGroup, width: usize) -> Self {
        TupleOps { group, width }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn identity(&self) -> Tuple {
        vec![0; self.width]
    }

    #[inline]
    pub fn mul(&self, a: &[u32], b: &[u32]) -> Tuple {
        let n = self.group.order();
        let t = self.group.raw_mul();
        a.iter()
            .zip(b)
            .map(|(&x, &y)| t[x as usize * n + y as usize])
            .collect()
    }

    pub fn inv(&self, a: &[u32]) -> Tuple {
        a.iter()
            .map(|&x| self.group.inv(crate::group::Elem(x)).0)
            .collect()
    }

    /// Mixed-radix code of a tuple; fits when `|G|^width` does.
    pub fn code(&self, a: &[u32]) -> usize {
        let n = self.group.order();
        a.iter().rev().fold(0usize, |acc, &x| acc * n + x as usize)
    }
}

#[derive(Debug, Clone)]
struct Level {
    /// `slot[x]` indexes `reps` for orbit points, `NONE` otherwise.
    slot: Vec<u32>,
    points: Vec<u32>,
    reps: Vec<Tuple>,
    rep_invs: Vec<Tuple>,
}

#[derive(Debug, Clone)]
pub struct StabilizerChain<'g> {
    ops: TupleOps<'g>,
    base_len: usize,
    strong: Vec<Tuple>,
    /// Generators that are trivial on every base coordinate.
    base_trivial: Vec<Tuple>,
    levels: Vec<Level>,
}

impl<'g> StabilizerChain<'g> {
    /// Schreier-Sims for `⟨gens⟩ ≤ G^width` with the first `base_len`
    /// coordinates as base.
    pub fn build(
        group: &'g FiniteGroup,
        width: usize,
        base_len: usize,
        gens: &[Tuple],
        budget: &Budget,
    ) -> Result<StabilizerChain<'g>> {
        assert!(base_len <= width);
        let ops = TupleOps::new(group, width);
        let (strong, base_trivial): (Vec<Tuple>, Vec<Tuple>) = gens
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .cloned()
            .partition(|g| g[..base_len].iter().any(|&x| x != 0));
        let mut chain = StabilizerChain {
            ops,
            base_len,
            strong,
            base_trivial,
            levels: Vec::new(),
        };
        chain.complete(budget)?;
        Ok(chain)
    }

    fn level_gens(&self, i: usize) -> impl Iterator<Item = &Tuple> {
        self.strong
            .iter()
            .filter(move |s| s[..i].iter().all(|&x| x == 0))
    }

    fn rebuild_level(&mut self, i: usize, budget: &Budget) -> Result<()> {
        let n = self.ops.group.order();
        let gens: Vec<Tuple> = self.level_gens(i).cloned().collect();
        let id = self.ops.identity();
        let mut level = Level {
            slot: vec![NONE; n],
            points: vec![0],
            reps: vec![id.clone()],
            rep_invs: vec![id],
        };
        level.slot[0] = 0;
        let mut k = 0;
        while k < level.points.len() {
            for s in &gens {
                let rep = &level.reps[k];
                let y = self.ops.mul(&[level.points[k]], &[s[i]])[0];
                if level.slot[y as usize] == NONE {
                    let r = self.ops.mul(rep, s);
                    level.slot[y as usize] = level.reps.len() as u32;
                    level.points.push(y);
                    level.rep_invs.push(self.ops.inv(&r));
                    level.reps.push(r);
                }
            }
            k += 1;
        }
        budget.charge((level.points.len() * gens.len().max(1) * self.ops.width) as u64)?;
        self.levels[i] = level;
        Ok(())
    }

    /// Sifts from level `from`; returns the failing level (or `base_len`)
    /// and the residue.
    fn sift(&self, mut t: Tuple, from: usize, budget: &Budget) -> Result<(usize, Tuple)> {
        for i in from..self.base_len {
            let level = &self.levels[i];
            let slot = level.slot[t[i] as usize];
            if slot == NONE {
                return Ok((i, t));
            }
            if t[i] != 0 {
                t = self.ops.mul(&t, &level.rep_invs[slot as usize]);
                budget.charge(self.ops.width as u64)?;
            }
        }
        Ok((self.base_len, t))
    }

    fn schreier_generator(&self, i: usize, k: usize, s: &[u32]) -> Tuple {
        let level = &self.levels[i];
        let us = self.ops.mul(&level.reps[k], s);
        let y = us[i];
        self.ops
            .mul(&us, &level.rep_invs[level.slot[y as usize] as usize])
    }

    fn complete(&mut self, budget: &Budget) -> Result<()> {
        let b = self.base_len;
        self.levels = vec![
            Level {
                slot: Vec::new(),
                points: Vec::new(),
                reps: Vec::new(),
                rep_invs: Vec::new(),
            };
            b
        ];
        for i in 0..b {
            self.rebuild_level(i, budget)?;
        }
        // Levels deeper than `start` are complete; after adding a residue that
        // failed at level j only levels <= j change.
        let mut start = b;
        while start > 0 {
            let mut failed_at = None;
            'scan: for i in (0..start).rev() {
                let gens: Vec<Tuple> = self.level_gens(i).cloned().collect();
                for k in 0..self.levels[i].points.len() {
                    for s in &gens {
                        let sg = self.schreier_generator(i, k, s);
                        budget.charge(2 * self.ops.width as u64)?;
                        let (j, r) = self.sift(sg, i + 1, budget)?;
                        if j < b {
                            self.strong.push(r);
                            failed_at = Some(j);
                            break 'scan;
                        }
                    }
                }
            }
            match failed_at {
                None => break,
                Some(j) => {
                    for i in 0..=j {
                        self.rebuild_level(i, budget)?;
                    }
                    start = j + 1;
                }
            }
        }
        Ok(())
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.points.len()).collect()
    }

    /// Order of the projection onto the base coordinates, if it fits.
    pub fn base_order(&self) -> Option<u128> {
        self.levels
            .iter()
            .try_fold(1u128, |acc, l| acc.checked_mul(l.points.len() as u128))
    }

    /// Order of the projection onto the first `k` base coordinates.
    pub fn prefix_order(&self, k: usize) -> Option<u128> {
        self.levels[..k]
            .iter()
            .try_fold(1u128, |acc, l| acc.checked_mul(l.points.len() as u128))
    }

    /// True when projecting onto the first `k` coordinates loses nothing,
    /// i.e. every basic orbit from level `k` on is trivial.
    pub fn prefix_is_faithful(&self, k: usize) -> bool {
        self.levels[k..].iter().all(|l| l.points.len() == 1)
    }

    /// Membership of the base projection of `t`.
    pub fn contains(&self, t: &[u32]) -> bool {
        let (j, _) = self
            .sift(t.to_vec(), 0, &Budget::unlimited())
            .expect("unlimited budget");
        j == self.base_len
    }

    /// Normal generators of the kernel of the projection onto the base
    /// coordinates: the residues of every Schreier relation of the completed
    /// chain, plus the generators that were trivial on the base.
    pub fn relators(&self, budget: &Budget) -> Result<Vec<Tuple>> {
        let mut out: Vec<Tuple> = self.base_trivial.clone();
        for i in 0..self.base_len {
            let gens: Vec<Tuple> = self.level_gens(i).cloned().collect();
            for k in 0..self.levels[i].points.len() {
                for s in &gens {
                    let sg = self.schreier_generator(i, k, s);
                    let (j, r) = self.sift(sg, i + 1, budget)?;
                    debug_assert_eq!(j, self.base_len, "chain is complete");
                    if r.iter().any(|&x| x != 0) {
                        out.push(r);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Limits;
    use crate::group::builtin;
    use std::collections::HashSet;

    /// Breadth-first enumeration of `⟨gens⟩`.
    fn brute_order(ops: &TupleOps<'_>, gens: &[Tuple]) -> usize {
        let mut seen: HashSet<Tuple> = HashSet::new();
        let id = ops.identity();
        seen.insert(id.clone());
        let mut queue = vec![id];
        while let Some(t) = queue.pop() {
            for g in gens {
                let u = ops.mul(&t, g);
                if seen.insert(u.clone()) {
                    queue.push(u);
                }
            }
        }
        seen.len()
    }

    fn family(s: &str) -> FiniteGroup {
        builtin(&s.parse().unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn chain_orders_match_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for name in ["S3", "Q8", "D8", "C4", "E2^2", "A4"] {
            let g = family(name);
            for width in 1..=3 {
                for _ in 0..6 {
                    let ngens = rng.gen_range(1..=3);
                    let gens: Vec<Tuple> = (0..ngens)
                        .map(|_| {
                            (0..width)
                                .map(|_| rng.gen_range(0..g.order() as u32))
                                .collect()
                        })
                        .collect();
                    let chain =
                        StabilizerChain::build(&g, width, width, &gens, &Budget::unlimited())
                            .unwrap();
                    let ops = TupleOps::new(&g, width);
                    assert_eq!(
                        chain.base_order().unwrap() as usize,
                        brute_order(&ops, &gens),
                        "{name} {gens:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn a5_diagonal_and_full_square() {
        let g = family("A5");
        let diag: Vec<Tuple> = g.generating_set().iter().map(|e| vec![e.0, e.0]).collect();
        let chain = StabilizerChain::build(&g, 2, 2, &diag, &Budget::unlimited()).unwrap();
        assert_eq!(chain.base_order(), Some(60));
        let mut gens = diag.clone();
        gens.push(vec![0, 1]);
        let chain = StabilizerChain::build(&g, 2, 2, &gens, &Budget::unlimited()).unwrap();
        assert_eq!(chain.base_order(), Some(3600));
    }

    #[test]
    fn relators_detect_kernel() {
        // Z4 generated by a, with a shadow coordinate carrying a^2: the
        // assignment a -> a^2 extends to a homomorphism, a -> a does too, but
        // as a pair with base a^2 only the even map survives.
        let g = family("C4");
        let a = 1u32;
        let a2 = 2u32;
        // base: coordinate 0 holds a^2, shadows hold candidate images of it
        let gens = vec![vec![a2, 0, a, a2, 3]];
        let chain = StabilizerChain::build(&g, 5, 1, &gens, &Budget::unlimited()).unwrap();
        let rel = chain.relators(&Budget::unlimited()).unwrap();
        let bad: HashSet<usize> = rel
            .iter()
            .flat_map(|r| (1..5).filter(move |&c| r[c] != 0))
            .collect();
        // candidate e and a^2 are consistent (they square to e); a and a^3 are not
        assert_eq!(bad, [2usize, 4].into_iter().collect());
    }

    #[test]
    fn budget_is_enforced() {
        let g = family("A5");
        let gens: Vec<Tuple> = g
            .generating_set()
            .iter()
            .map(|e| vec![e.0, 0, e.0])
            .collect();
        assert!(StabilizerChain::build(&g, 3, 3, &gens, &Budget::new(10)).is_err());
    }
}
