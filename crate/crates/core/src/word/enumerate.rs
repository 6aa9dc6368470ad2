use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

use super::{Letter, Mode, Word};

/// Bounds for [`enumerate_words`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordCaps {
    pub max_letters: usize,
    pub max_abs_exponent: u32,
}

/// Every normal-form word with at most `max_letters` letters and variable
/// exponents in `±1..=±max_abs_exponent`, the empty word included.
///
/// Words come out by length, then lexicographically over the alphabet
/// (variables by index and exponent, then constants by element index).
/// Fails with `BudgetExceeded` once more than `max_words` would be produced.
pub fn enumerate_words(
    group: &FiniteGroup,
    n_vars: usize,
    caps: WordCaps,
    mode: Mode,
    max_words: usize,
) -> Result<Vec<Word>> {
    let e = caps.max_abs_exponent as i64;
    let mut alphabet: Vec<Letter> = (0..n_vars)
        .flat_map(|v| (-e..=e).filter(|&x| x != 0).map(move |x| Letter::var(v, x)))
        .collect();
    if mode.allows_constants() {
        alphabet.extend(group.non_identity().map(Letter::Const));
    }
    let mut out = vec![Word::identity(n_vars, mode)];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..caps.max_letters {
        let mut next = Vec::new();
        for prefix in &layer {
            for &l in &alphabet {
                let ok = match (prefix.last(), l) {
                    (Some(Letter::Const(_)), Letter::Const(_)) => false,
                    (Some(Letter::Var { var: a, .. }), Letter::Var { var: b, .. }) => *a != b,
                    _ => true,
                };
                if ok {
                    let mut w = prefix.clone();
                    w.push(l);
                    next.push(w);
                }
            }
        }
        if out.len() + next.len() > max_words {
            return Err(Error::BudgetExceeded {
                limit: max_words as u64,
            });
        }
        out.extend(next.iter().map(|letters| Word {
            n_vars,
            mode,
            letters: letters.clone(),
        }));
        layer = next;
        if layer.is_empty() {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Limits;
    use crate::group::builtin;
    use std::collections::HashSet;

    fn caps(l: usize, e: u32) -> WordCaps {
        WordCaps {
            max_letters: l,
            max_abs_exponent: e,
        }
    }

    #[test]
    fn single_letter_census() {
        let g = builtin(&"C2".parse().unwrap(), &Limits::default()).unwrap();
        let words = enumerate_words(&g, 1, caps(1, 2), Mode::CoefficientFree, 100).unwrap();
        let nonempty: Vec<_> = words.iter().skip(1).map(|w| w.letters()[0]).collect();
        assert!(words[0].is_empty());
        assert_eq!(
            nonempty,
            vec![
                Letter::var(0, -2),
                Letter::var(0, -1),
                Letter::var(0, 1),
                Letter::var(0, 2)
            ]
        );
        let empty_only = enumerate_words(&g, 1, caps(0, 2), Mode::CoefficientFree, 100).unwrap();
        assert_eq!(empty_only, vec![Word::identity(1, Mode::CoefficientFree)]);
    }

    #[test]
    fn z2_pattern_count() {
        // Patterns V, C, VC, CV with one constant and exponents ±1: 2 + 1 + 2 + 2.
        let g = builtin(&"C2".parse().unwrap(), &Limits::default()).unwrap();
        let words = enumerate_words(&g, 1, caps(2, 1), Mode::Coefficient, 100).unwrap();
        assert_eq!(words.len(), 1 + 7);
        let patterns: HashSet<String> = words
            .iter()
            .skip(1)
            .map(|w| {
                w.letters()
                    .iter()
                    .map(|l| {
                        if matches!(l, Letter::Const(_)) {
                            'C'
                        } else {
                            'V'
                        }
                    })
                    .collect()
            })
            .collect();
        let expected: HashSet<String> = ["V", "C", "VC", "CV"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(patterns, expected);
    }

    #[test]
    fn output_is_normal_and_distinct() {
        let g = builtin(&"S3".parse().unwrap(), &Limits::default()).unwrap();
        let words = enumerate_words(&g, 2, caps(3, 2), Mode::Coefficient, 1_000_000).unwrap();
        assert!(words.iter().all(|w| w.is_normal()));
        let distinct: HashSet<&Word> = words.iter().collect();
        assert_eq!(distinct.len(), words.len());
    }

    #[test]
    fn stream_cap() {
        let g = builtin(&"S3".parse().unwrap(), &Limits::default()).unwrap();
        assert!(matches!(
            enumerate_words(&g, 2, caps(4, 3), Mode::Coefficient, 1000),
            Err(Error::BudgetExceeded { limit: 1000 })
        ));
    }
}
