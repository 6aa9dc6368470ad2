//! Algebraic sets over a finite group and the closure operators on `G^n`.
//!
//! Membership of `q` in the closure `V(Rad(U))` is decided by comparing
//! orders in direct powers: the assignment `U ↦ q` respects every relation
//! that holds on `U` exactly when adding the column for `q` does not enlarge
//! the subgroup generated by the columns for `U`.

use std::collections::BTreeSet;

use crate::config::{Budget, Limits};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::power::{StabilizerChain, Tuple};
use crate::word::{enumerate_words, EquationSystem, Mode, Word, WordCaps};

pub type Point = Vec<Elem>;
pub type PointSet = BTreeSet<Point>;

/// Shadow coordinates per chain in [`Space::algebraic_closure`].
const SHADOW_CHUNK: usize = 512;

/// A set of points of `G^n`, optionally with the system that defines it.
#[derive(Debug, Clone)]
pub struct AlgebraicSet<'g> {
    pub group: &'g FiniteGroup,
    pub n_vars: usize,
    pub mode: Mode,
    pub points: PointSet,
    pub defining: Option<EquationSystem>,
}

impl AlgebraicSet<'_> {
    /// Re-evaluates the defining system, if any, over the whole space.
    pub fn recheck(&self, limits: &Limits) -> Result<bool> {
        match &self.defining {
            None => Ok(true),
            Some(sys) => {
                let space = Space::new(self.group, self.n_vars, self.mode, *limits);
                Ok(space.solution_set(sys)?.points == self.points)
            }
        }
    }
}

/// The affine space `G^n` in a fixed mode.
#[derive(Debug, Clone, Copy)]
pub struct Space<'g> {
    group: &'g FiniteGroup,
    n_vars: usize,
    mode: Mode,
    limits: Limits,
}

impl<'g> Space<'g> {
    pub fn new(group: &'g FiniteGroup, n_vars: usize, mode: Mode, limits: Limits) -> Self {
        Space {
            group,
            n_vars,
            mode,
            limits,
        }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// `|G|^n`, or `BudgetExceeded` when it does not fit the budget.
    pub fn size(&self) -> Result<usize> {
        (self.group.order() as u64)
            .checked_pow(self.n_vars as u32)
            .filter(|&s| s <= self.limits.budget)
            .map(|s| s as usize)
            .ok_or(Error::BudgetExceeded {
                limit: self.limits.budget,
            })
    }

    /// Every point of `G^n` in mixed-radix order, first coordinate slowest.
    pub fn all_points(&self) -> Result<Vec<Point>> {
        let total = self.size()?;
        let n = self.group.order();
        Ok((0..total)
            .map(|mut code| {
                let mut p = vec![Elem(0); self.n_vars];
                for slot in p.iter_mut().rev() {
                    *slot = Elem((code % n) as u32);
                    code /= n;
                }
                p
            })
            .collect())
    }

    fn check_point(&self, p: &[Elem]) -> Result<()> {
        if p.len() != self.n_vars {
            return Err(Error::BadParameter(format!(
                "point has {} coordinates, expected {}",
                p.len(),
                self.n_vars
            )));
        }
        if let Some(x) = p.iter().find(|x| x.index() >= self.group.order()) {
            return Err(Error::BadParameter(format!(
                "element index {} out of range",
                x.0
            )));
        }
        Ok(())
    }

    fn check_points<'a>(&self, ps: impl IntoIterator<Item = &'a Point>) -> Result<()> {
        ps.into_iter().try_for_each(|p| self.check_point(p))
    }

    pub fn solution_set(&self, system: &EquationSystem) -> Result<AlgebraicSet<'g>> {
        if system.n_vars() != self.n_vars || system.mode() != self.mode {
            return Err(Error::ModeMismatch(format!(
                "system is over {} variables in {} mode, space is {} variables in {} mode",
                system.n_vars(),
                system.mode(),
                self.n_vars,
                self.mode
            )));
        }
        let budget = self.limits.budget();
        let cost: u64 = system.words().iter().map(|w| w.len() as u64 + 1).sum();
        let mut points = PointSet::new();
        for p in self.all_points()? {
            budget.charge(cost)?;
            if system
                .words()
                .iter()
                .all(|w| w.evaluate(self.group, &p).is_identity())
            {
                points.insert(p);
            }
        }
        Ok(AlgebraicSet {
            group: self.group,
            n_vars: self.n_vars,
            mode: self.mode,
            points,
            defining: Some(system.clone()),
        })
    }

    /// Whether `word` lies in the radical of `points`.
    pub fn vanishes_on<'a>(
        &self,
        word: &Word,
        points: impl IntoIterator<Item = &'a Point>,
    ) -> bool {
        points
            .into_iter()
            .all(|p| word.evaluate(self.group, p).is_identity())
    }

    fn diagonal_gens(&self) -> Vec<Elem> {
        if self.mode.allows_constants() {
            self.group.generating_set()
        } else {
            Vec::new()
        }
    }

    /// Generators of the column subgroup for `u`, each followed by
    /// `shadow(generator)` for every extra coordinate requested.
    fn columns(&self, u: &[&Point], extra: &[&Point]) -> Vec<Tuple> {
        let mut gens: Vec<Tuple> = self
            .diagonal_gens()
            .into_iter()
            .map(|g| vec![g.0; u.len() + extra.len()])
            .collect();
        for v in 0..self.n_vars {
            gens.push(u.iter().chain(extra).map(|p| p[v].0).collect());
        }
        gens
    }

    /// Whether every word vanishing on `u` vanishes at `q`.
    pub fn point_extends(&self, u: &PointSet, q: &Point) -> Result<bool> {
        if u.is_empty() {
            return Err(Error::EmptySet);
        }
        self.limits.check_width(u.len())?;
        self.check_points(u)?;
        self.check_point(q)?;
        if u.contains(q) {
            return Ok(true);
        }
        let us: Vec<&Point> = u.iter().collect();
        let m = us.len();
        let gens = self.columns(&us, &[q]);
        let budget = self.limits.budget();
        let chain = StabilizerChain::build(self.group, m + 1, m + 1, &gens, &budget)?;
        // |H_{m+1}| = |H_m| times the orbit sizes past level m
        Ok(chain.prefix_is_faithful(m))
    }

    /// `V(Rad(U))` for a point set within the width cap, by one chain on the
    /// columns of `u` per chunk of candidates: a candidate belongs to the
    /// closure iff every relator of the column subgroup is trivial in its
    /// shadow coordinate.
    fn closure_of_small(&self, u: &PointSet, budget: &Budget) -> Result<PointSet> {
        let us: Vec<&Point> = u.iter().collect();
        let m = us.len();
        let candidates = self.all_points()?;
        let mut out = PointSet::new();
        for chunk in candidates.chunks(SHADOW_CHUNK) {
            let extra: Vec<&Point> = chunk.iter().collect();
            let gens = self.columns(&us, &extra);
            let chain = StabilizerChain::build(self.group, m + extra.len(), m, &gens, budget)?;
            let mut ok = vec![true; extra.len()];
            for r in chain.relators(budget)? {
                for (k, flag) in ok.iter_mut().enumerate() {
                    if r[m + k] != 0 {
                        *flag = false;
                    }
                }
            }
            out.extend(
                chunk
                    .iter()
                    .zip(ok)
                    .filter(|(_, f)| *f)
                    .map(|(p, _)| p.clone()),
            );
        }
        Ok(out)
    }

    /// A subset of `y` with the same radical, picked greedily.
    fn radical_basis(&self, y: &PointSet) -> Result<PointSet> {
        let mut basis = PointSet::new();
        for p in y {
            if basis.is_empty() || !self.point_extends(&basis, p)? {
                basis.insert(p.clone());
            }
        }
        Ok(basis)
    }

    /// The smallest algebraic set containing `u`. Point sets wider than the
    /// cap are first reduced to a basis with the same radical; the basis must
    /// then respect the cap.
    pub fn algebraic_closure(&self, u: &PointSet) -> Result<PointSet> {
        self.check_points(u)?;
        if u.is_empty() {
            return Ok(PointSet::new());
        }
        if u.len() == self.size()? {
            return Ok(u.clone());
        }
        let budget = self.limits.budget();
        if u.len() <= self.limits.max_width {
            self.closure_of_small(u, &budget)
        } else {
            let basis = self.radical_basis(u)?;
            self.closure_of_small(&basis, &budget)
        }
    }

    /// The closure computed candidate by candidate with [`point_extends`].
    ///
    /// [`point_extends`]: Space::point_extends
    pub fn algebraic_closure_pointwise(&self, u: &PointSet) -> Result<PointSet> {
        if u.is_empty() {
            return Ok(PointSet::new());
        }
        let mut out = PointSet::new();
        for q in self.all_points()? {
            if self.point_extends(u, &q)? {
                out.insert(q);
            }
        }
        Ok(out)
    }

    pub fn is_algebraic(&self, u: &PointSet) -> Result<bool> {
        Ok(self.algebraic_closure(u)? == *u)
    }

    pub fn union_is_algebraic(&self, y1: &PointSet, y2: &PointSet) -> Result<bool> {
        let union: PointSet = y1.union(y2).cloned().collect();
        self.is_algebraic(&union)
    }

    /// Closed sets are finite unions of algebraic sets, so the closure of `u`
    /// is the union of its point closures.
    pub fn topological_closure(&self, u: &PointSet) -> Result<PointSet> {
        let mut out = PointSet::new();
        for z in u {
            if out.contains(z) {
                continue;
            }
            out.extend(self.algebraic_closure(&PointSet::from([z.clone()]))?);
        }
        Ok(out)
    }

    fn require_algebraic(&self, y: &PointSet) -> Result<()> {
        if y.is_empty() {
            return Err(Error::EmptySet);
        }
        if !self.is_algebraic(y)? {
            return Err(Error::NotAlgebraic);
        }
        Ok(())
    }

    /// A point whose closure is all of `y`, if there is one.
    pub fn generic_point(&self, y: &PointSet) -> Result<Option<Point>> {
        self.require_algebraic(y)?;
        for z in y {
            if self.algebraic_closure(&PointSet::from([z.clone()]))? == *y {
                return Ok(Some(z.clone()));
            }
        }
        Ok(None)
    }

    pub fn is_irreducible(&self, y: &PointSet) -> Result<bool> {
        Ok(self.generic_point(y)?.is_some())
    }

    /// Inclusion-maximal point closures inside `y`, largest first and then
    /// in point order.
    pub fn irreducible_components(&self, y: &PointSet) -> Result<Vec<PointSet>> {
        if y.is_empty() {
            return Ok(Vec::new());
        }
        self.require_algebraic(y)?;
        let mut closures: Vec<PointSet> = Vec::new();
        for z in y {
            let c = self.algebraic_closure(&PointSet::from([z.clone()]))?;
            if !closures.contains(&c) {
                closures.push(c);
            }
        }
        let mut comps: Vec<PointSet> = closures
            .iter()
            .filter(|c| !closures.iter().any(|d| d != *c && d.is_superset(c)))
            .cloned()
            .collect();
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        Ok(comps)
    }

    /// True when `y` is covered by its proper algebraic subsets, found by
    /// closing every subset of `y`.
    pub fn reducibility_oracle(&self, y: &PointSet) -> Result<bool> {
        if y.len() > 4 {
            return Err(Error::WidthCapExceeded {
                width: y.len(),
                cap: 4,
            });
        }
        let pts: Vec<&Point> = y.iter().collect();
        let mut covered = PointSet::new();
        for mask in 1u32..(1 << pts.len()) {
            let z: PointSet = (0..pts.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pts[i].clone())
                .collect();
            let c = self.algebraic_closure(&z)?;
            if c.is_subset(y) && c != *y {
                covered.extend(c);
            }
        }
        Ok(covered == *y)
    }

    /// Upper approximation of the closure using only the words the
    /// enumerator produces under `caps`.
    pub fn bounded_word_closure(&self, u: &PointSet, caps: WordCaps) -> Result<PointSet> {
        self.check_points(u)?;
        let words = enumerate_words(
            self.group,
            self.n_vars,
            caps,
            self.mode,
            self.limits.max_words,
        )?;
        let budget = self.limits.budget();
        let mut vanishing = Vec::new();
        for w in words {
            budget.charge((w.len() as u64 + 1) * u.len() as u64)?;
            if !w.is_empty() && self.vanishes_on(&w, u) {
                vanishing.push(w);
            }
        }
        let mut out = PointSet::new();
        for q in self.all_points()? {
            budget.charge(vanishing.len() as u64)?;
            if vanishing
                .iter()
                .all(|w| w.evaluate(self.group, &q).is_identity())
            {
                out.insert(q);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;
    use crate::word::{parse_system, parse_word};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn family(s: &str) -> FiniteGroup {
        builtin(&s.parse().unwrap(), &Limits::default()).unwrap()
    }

    fn el(g: &FiniteGroup, label: &str) -> Elem {
        g.find_label(label).unwrap()
    }

    fn set(points: &[&[Elem]]) -> PointSet {
        points.iter().map(|p| p.to_vec()).collect()
    }

    fn space(g: &FiniteGroup, n: usize, mode: Mode) -> Space<'_> {
        Space::new(g, n, mode, Limits::default())
    }

    #[test]
    fn solution_sets() {
        let s3 = family("S3");
        let sp = space(&s3, 1, Mode::Coefficient);
        let v = sp
            .solution_set(&parse_system("x1", 1, Mode::Coefficient, &s3).unwrap())
            .unwrap();
        assert_eq!(v.points, set(&[&[Elem::IDENTITY]]));
        let empty = EquationSystem::new(1, Mode::Coefficient, vec![]).unwrap();
        assert_eq!(sp.solution_set(&empty).unwrap().points.len(), 6);
        let v = sp
            .solution_set(&parse_system("[x1,'(1 2 3)']", 1, Mode::Coefficient, &s3).unwrap())
            .unwrap();
        // oracle: direct centralizer scan
        let c = el(&s3, "(1 2 3)");
        let expected: PointSet = s3
            .elements()
            .filter(|&x| s3.commute(x, c))
            .map(|x| vec![x])
            .collect();
        assert_eq!(v.points, expected);
        assert_eq!(v.points.len(), 3);
        assert!(v.recheck(&Limits::default()).unwrap());
    }

    #[test]
    fn vanishing() {
        let z4 = family("C4");
        let sp = space(&z4, 1, Mode::CoefficientFree);
        let all: PointSet = sp.all_points().unwrap().into_iter().collect();
        assert!(sp.vanishes_on(&Word::identity(1, Mode::CoefficientFree), &all));
        let sq = parse_word("x1^2", 1, Mode::CoefficientFree, &z4).unwrap();
        assert!(!sp.vanishes_on(&sq, &all));
        let p = vec![el(&z4, "a^3")];
        let ann = parse_word("x1 'a'", 1, Mode::Coefficient, &z4).unwrap();
        assert!(space(&z4, 1, Mode::Coefficient).vanishes_on(&ann, [&p]));
    }

    #[test]
    fn z4_coefficient_free() {
        let z4 = family("C4");
        let sp = space(&z4, 1, Mode::CoefficientFree);
        let (e, a, a2) = (Elem::IDENTITY, el(&z4, "a"), el(&z4, "a^2"));
        let u = set(&[&[a2]]);
        assert!(!sp.point_extends(&u, &vec![a]).unwrap());
        assert!(sp.point_extends(&u, &vec![e]).unwrap());
        assert_eq!(sp.algebraic_closure(&u).unwrap(), set(&[&[e], &[a2]]));
        assert_eq!(sp.algebraic_closure(&set(&[&[a]])).unwrap().len(), 4);
        assert_eq!(sp.topological_closure(&set(&[&[a]])).unwrap().len(), 4);
        assert_eq!(
            sp.generic_point(&set(&[&[e], &[a2]])).unwrap(),
            Some(vec![a2])
        );
        let whole: PointSet = sp.all_points().unwrap().into_iter().collect();
        assert_eq!(
            sp.irreducible_components(&whole).unwrap(),
            vec![whole.clone()]
        );
        let caps = WordCaps {
            max_letters: 1,
            max_abs_exponent: 4,
        };
        assert_eq!(
            sp.bounded_word_closure(&u, caps).unwrap(),
            set(&[&[e], &[a2]])
        );
        let zero = WordCaps {
            max_letters: 0,
            max_abs_exponent: 4,
        };
        assert_eq!(sp.bounded_word_closure(&u, zero).unwrap(), whole);
    }

    #[test]
    fn klein_union_not_algebraic() {
        let v4 = family("E2^2");
        let sp = space(&v4, 1, Mode::Coefficient);
        let a = Elem(1);
        let e = set(&[&[Elem::IDENTITY]]);
        let pa = set(&[&[a]]);
        assert!(sp.is_algebraic(&e).unwrap());
        assert!(sp.is_algebraic(&pa).unwrap());
        assert!(!sp.union_is_algebraic(&e, &pa).unwrap());
        let both: PointSet = e.union(&pa).cloned().collect();
        assert_eq!(sp.algebraic_closure(&both).unwrap().len(), 4);
    }

    #[test]
    fn coefficient_mode_is_discrete() {
        let s3 = family("S3");
        let sp = space(&s3, 1, Mode::Coefficient);
        for x in s3.elements() {
            let p = set(&[&[x]]);
            assert_eq!(sp.algebraic_closure(&p).unwrap(), p);
            assert!(sp.is_irreducible(&p).unwrap());
        }
        let y: PointSet = s3.elements().take(3).map(|x| vec![x]).collect();
        let closed = sp.algebraic_closure(&y).unwrap();
        assert_eq!(sp.topological_closure(&y).unwrap(), y);
        assert!(!sp.is_irreducible(&closed).unwrap() || closed.len() == 1);
        let three: PointSet = sp.all_points().unwrap().into_iter().take(3).collect();
        // S3 is a domain-failing group, yet a three-point set may still be closed
        if sp.is_algebraic(&three).unwrap() {
            assert_eq!(sp.irreducible_components(&three).unwrap().len(), 3);
        }
    }

    #[test]
    fn empty_and_errors() {
        let z4 = family("C4");
        let sp = space(&z4, 1, Mode::CoefficientFree);
        assert!(sp.algebraic_closure(&PointSet::new()).unwrap().is_empty());
        assert!(matches!(
            sp.is_irreducible(&PointSet::new()),
            Err(Error::EmptySet)
        ));
        let wide: PointSet = (0..4u32).map(|i| vec![Elem(i)]).collect();
        let mut narrow = space(&z4, 1, Mode::Coefficient);
        narrow.limits.max_width = 3;
        assert!(matches!(
            narrow.point_extends(&wide, &vec![Elem(0)]),
            Err(Error::WidthCapExceeded { width: 4, cap: 3 })
        ));
        let a = set(&[&[Elem(1)]]);
        let a_e: PointSet = a.iter().cloned().chain([vec![Elem(0)]]).collect();
        assert!(matches!(sp.is_irreducible(&a_e), Err(Error::NotAlgebraic)));
    }

    fn random_set(rng: &mut impl Rng, all: &[Point], max: usize) -> PointSet {
        let k = rng.gen_range(1..=max);
        all.choose_multiple(rng, k).cloned().collect()
    }

    #[test]
    fn shadow_closure_matches_pointwise_and_words() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for name in ["C4", "S3", "E2^2", "Q8", "D8", "C6"] {
            let g = family(name);
            for mode in [Mode::Coefficient, Mode::CoefficientFree] {
                for n in 1..=2 {
                    let sp = space(&g, n, mode);
                    let all = sp.all_points().unwrap();
                    for _ in 0..4 {
                        let u = random_set(&mut rng, &all, 3);
                        let fast = sp.algebraic_closure(&u).unwrap();
                        assert_eq!(
                            fast,
                            sp.algebraic_closure_pointwise(&u).unwrap(),
                            "{name} {mode} {u:?}"
                        );
                        assert!(fast.is_superset(&u));
                        let wide = Space::new(
                            &g,
                            n,
                            mode,
                            Limits {
                                max_width: 64,
                                ..Limits::default()
                            },
                        );
                        assert_eq!(wide.algebraic_closure(&fast).unwrap(), fast);
                    }
                }
            }
        }
    }

    #[test]
    fn wide_sets_use_a_radical_basis() {
        let g = family("C6");
        let sp = space(&g, 2, Mode::CoefficientFree);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let all = sp.all_points().unwrap();
        for _ in 0..5 {
            let u: PointSet = all.choose_multiple(&mut rng, 9).cloned().collect();
            let union_of_small: PointSet = sp.algebraic_closure(&u).unwrap();
            // oracle: words over a generous alphabet
            let caps = WordCaps {
                max_letters: 3,
                max_abs_exponent: 5,
            };
            assert_eq!(union_of_small, sp.bounded_word_closure(&u, caps).unwrap());
        }
    }

    #[test]
    fn bounded_words_converge_from_above() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for name in ["C4", "S3"] {
            let g = family(name);
            let sp = space(&g, 1, Mode::Coefficient);
            let all = sp.all_points().unwrap();
            for _ in 0..6 {
                let u = random_set(&mut rng, &all, 3);
                let exact = sp.algebraic_closure(&u).unwrap();
                let mut prev: Option<PointSet> = None;
                for letters in 0..=4 {
                    let caps = WordCaps {
                        max_letters: letters,
                        max_abs_exponent: 2,
                    };
                    let approx = sp.bounded_word_closure(&u, caps).unwrap();
                    assert!(approx.is_superset(&exact));
                    if let Some(p) = &prev {
                        assert!(p.is_superset(&approx));
                    }
                    prev = Some(approx);
                }
                assert_eq!(prev.unwrap(), exact, "{name} {u:?}");
            }
        }
    }

    #[test]
    fn generic_point_agrees_with_oracle() {
        for name in ["C2", "C4", "S3", "E2^2", "Q8"] {
            let g = family(name);
            for mode in [Mode::Coefficient, Mode::CoefficientFree] {
                let sp = space(&g, 1, mode);
                let all = sp.all_points().unwrap();
                for mask in 1u32..(1 << all.len()) {
                    if mask.count_ones() > 4 {
                        continue;
                    }
                    let y: PointSet = (0..all.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| all[i].clone())
                        .collect();
                    if !sp.is_algebraic(&y).unwrap() {
                        continue;
                    }
                    assert_eq!(
                        sp.is_irreducible(&y).unwrap(),
                        !sp.reducibility_oracle(&y).unwrap(),
                        "{name} {mode} {y:?}"
                    );
                    let comps = sp.irreducible_components(&y).unwrap();
                    let union: PointSet = comps.iter().flatten().cloned().collect();
                    assert_eq!(union, y);
                    for c in &comps {
                        assert!(sp.is_irreducible(c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn solution_set_of_union_is_intersection() {
        let g = family("D8");
        let sp = space(&g, 2, Mode::Coefficient);
        let s1 = parse_system("[x1,x2]", 2, Mode::Coefficient, &g).unwrap();
        let s2 = parse_system("x1^2 x2^-2", 2, Mode::Coefficient, &g).unwrap();
        let both = sp.solution_set(&s1.union(&s2).unwrap()).unwrap().points;
        let v1 = sp.solution_set(&s1).unwrap().points;
        let v2 = sp.solution_set(&s2).unwrap().points;
        assert_eq!(both, v1.intersection(&v2).cloned().collect());
    }
}
