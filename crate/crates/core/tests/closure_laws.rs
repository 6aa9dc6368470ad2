use grpgeo::group::{builtin, Family};
use grpgeo::word::{enumerate_words, WordCaps};
use grpgeo::zariski::{PointSet, Space};
use grpgeo::{EquationSystem, FiniteGroup, Limits, Mode};
use proptest::prelude::*;

fn group(i: usize) -> FiniteGroup {
    let spec = ["C4", "C2xC2", "S3", "Q8", "D8", "C6"][i];
    builtin(&spec.parse::<Family>().unwrap(), &Limits::default()).unwrap()
}

fn mode(b: bool) -> Mode {
    if b {
        Mode::Coefficient
    } else {
        Mode::CoefficientFree
    }
}

fn pick(all: &[Vec<grpgeo::Elem>], idx: &[usize]) -> PointSet {
    idx.iter().map(|&i| all[i % all.len()].clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn closure_is_a_closure_operator(
        gi in 0..6usize,
        coeff in any::<bool>(),
        n in 1..=2usize,
        a in prop::collection::vec(0..64usize, 1..=3),
        b in prop::collection::vec(0..64usize, 0..=1),
    ) {
        let g = group(gi);
        let space = Space::new(&g, n, mode(coeff), Limits::default());
        let all = space.all_points().unwrap();
        let u = pick(&all, &a);
        let mut v = u.clone();
        v.extend(pick(&all, &b));
        let cu = space.algebraic_closure(&u).unwrap();
        let cv = space.algebraic_closure(&v).unwrap();
        prop_assert!(cu.is_superset(&u));
        prop_assert!(cv.is_superset(&cu));
        // a closed set's radical basis may be wider than the default cap
        let wide = Space::new(&g, n, mode(coeff), Limits { max_width: 64, ..Limits::default() });
        prop_assert_eq!(&wide.algebraic_closure(&cu).unwrap(), &cu);
        prop_assert_eq!(&space.algebraic_closure_pointwise(&u).unwrap(), &cu);
    }

    #[test]
    fn solution_sets_are_closed_and_intersect(
        gi in 0..6usize,
        coeff in any::<bool>(),
        i in 0..400usize,
        j in 0..400usize,
    ) {
        let g = group(gi);
        let m = mode(coeff);
        let space = Space::new(&g, 1, m, Limits::default());
        let caps = WordCaps { max_letters: 2, max_abs_exponent: 2 };
        let words = enumerate_words(&g, 1, caps, m, 100_000).unwrap();
        let s1 = EquationSystem::new(1, m, vec![words[i % words.len()].clone()]).unwrap();
        let s2 = EquationSystem::new(1, m, vec![words[j % words.len()].clone()]).unwrap();
        let v1 = space.solution_set(&s1).unwrap().points;
        let v2 = space.solution_set(&s2).unwrap().points;
        let v12 = space.solution_set(&s1.union(&s2).unwrap()).unwrap().points;
        prop_assert_eq!(&v12, &v1.intersection(&v2).cloned().collect::<PointSet>());
        if !v1.is_empty() {
            prop_assert!(space.is_algebraic(&v1).unwrap());
        }
    }
}
