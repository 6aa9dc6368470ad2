//! Words of `G[X] = G * F(X)`, kept in free-product normal form.

mod enumerate;
mod parse;

pub use enumerate::{enumerate_words, WordCaps};
pub use parse::{parse_point, parse_points, parse_system, parse_word};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};

/// Whether constants from `G` may appear in words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Words with coefficients from `G` (the Diophantine setting).
    Coefficient,
    /// Words in the variables only.
    CoefficientFree,
}

impl Mode {
    pub fn allows_constants(self) -> bool {
        self == Mode::Coefficient
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Coefficient => "coefficient",
            Mode::CoefficientFree => "coefficient-free",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "coefficient" | "coeff" => Ok(Mode::Coefficient),
            "coefficient-free" | "free" => Ok(Mode::CoefficientFree),
            _ => Err(Error::BadParameter(format!("unknown mode {s:?}"))),
        }
    }
}

/// Variables are 0-based internally and print as `x1, x2, ..`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Var { var: usize, exp: i64 },
    Const(Elem),
}

impl Letter {
    pub fn var(var: usize, exp: i64) -> Letter {
        Letter::Var { var, exp }
    }
}

/// Longest word the parser and power operator will build.
const MAX_WORD_LETTERS: usize = 1 << 20;

/// An element of `G[X]` in reduced normal form: no identity constants, no
/// zero exponents, no adjacent constants, no adjacent powers of one variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    n_vars: usize,
    mode: Mode,
    letters: Vec<Letter>,
}

/// Reduces a letter sequence to normal form in a single stack pass.
pub fn normalize_letters(
    group: &FiniteGroup,
    letters: impl IntoIterator<Item = Letter>,
) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        match l {
            Letter::Const(c) if c.is_identity() => {}
            Letter::Var { exp: 0, .. } => {}
            Letter::Const(c) => match out.last_mut() {
                Some(Letter::Const(d)) => {
                    let p = group.mul(*d, c);
                    if p.is_identity() {
                        out.pop();
                    } else {
                        *d = p;
                    }
                }
                _ => out.push(l),
            },
            Letter::Var { var, exp } => match out.last_mut() {
                Some(Letter::Var { var: v, exp: e }) if *v == var => {
                    *e += exp;
                    if *e == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            },
        }
    }
    out
}

impl Word {
    pub fn identity(n_vars: usize, mode: Mode) -> Word {
        Word {
            n_vars,
            mode,
            letters: Vec::new(),
        }
    }

    /// `x_{var+1}`.
    pub fn var(n_vars: usize, mode: Mode, var: usize) -> Result<Word> {
        Word::from_letters(None, n_vars, mode, vec![Letter::var(var, 1)])
    }

    pub fn constant(group: &FiniteGroup, n_vars: usize, c: Elem) -> Result<Word> {
        Word::from_letters(
            Some(group),
            n_vars,
            Mode::Coefficient,
            vec![Letter::Const(c)],
        )
    }

    /// Validates and normalizes an arbitrary letter sequence. `group` may be
    /// omitted only when no constants occur.
    pub fn from_letters(
        group: Option<&FiniteGroup>,
        n_vars: usize,
        mode: Mode,
        letters: Vec<Letter>,
    ) -> Result<Word> {
        for l in &letters {
            match *l {
                Letter::Var { var, .. } if var >= n_vars => {
                    return Err(Error::VariableOutOfRange {
                        var: var + 1,
                        n_vars,
                    })
                }
                Letter::Const(c) => {
                    if !mode.allows_constants() {
                        return Err(Error::ModeMismatch(
                            "constant in a coefficient-free word".into(),
                        ));
                    }
                    match group {
                        Some(g) if c.index() < g.order() => {}
                        _ => {
                            return Err(Error::BadParameter(format!(
                                "constant #{} is not in the group",
                                c.0
                            )))
                        }
                    }
                }
                _ => {}
            }
        }
        let letters = match group {
            Some(g) => normalize_letters(g, letters),
            // no constants, so a group is never consulted
            None => normalize_vars(letters),
        };
        Ok(Word {
            n_vars,
            mode,
            letters,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// True when the letters satisfy every normal-form condition.
    pub fn is_normal(&self) -> bool {
        self.letters.iter().all(|l| match l {
            Letter::Const(c) => !c.is_identity(),
            Letter::Var { var, exp } => *exp != 0 && *var < self.n_vars,
        }) && self.letters.windows(2).all(|w| match (w[0], w[1]) {
            (Letter::Const(_), Letter::Const(_)) => false,
            (Letter::Var { var: a, .. }, Letter::Var { var: b, .. }) => a != b,
            _ => true,
        })
    }

    fn check_compatible(&self, other: &Word) -> Result<()> {
        if self.n_vars != other.n_vars || self.mode != other.mode {
            return Err(Error::ModeMismatch(format!(
                "cannot combine a {}-variable {} word with a {}-variable {} word",
                self.n_vars, self.mode, other.n_vars, other.mode
            )));
        }
        Ok(())
    }

    pub fn product(&self, other: &Word, group: &FiniteGroup) -> Result<Word> {
        self.check_compatible(other)?;
        if self.len() + other.len() > MAX_WORD_LETTERS {
            return Err(Error::BadParameter("word too long".into()));
        }
        Ok(Word {
            n_vars: self.n_vars,
            mode: self.mode,
            letters: normalize_letters(group, self.letters.iter().chain(&other.letters).copied()),
        })
    }

    pub fn inverse(&self, group: &FiniteGroup) -> Word {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match *l {
                Letter::Const(c) => Letter::Const(group.inv(c)),
                Letter::Var { var, exp } => Letter::Var { var, exp: -exp },
            })
            .collect();
        // reversal of a normal form is already normal
        Word {
            n_vars: self.n_vars,
            mode: self.mode,
            letters,
        }
    }

    pub fn pow(&self, k: i64, group: &FiniteGroup) -> Result<Word> {
        if let [Letter::Var { var, exp }] = self.letters[..] {
            let exp = exp
                .checked_mul(k)
                .ok_or_else(|| Error::BadParameter("exponent overflow".into()))?;
            return Word::from_letters(None, self.n_vars, self.mode, vec![Letter::var(var, exp)]);
        }
        if (self.len() as u128) * (k.unsigned_abs() as u128) > MAX_WORD_LETTERS as u128 {
            return Err(Error::BadParameter("word power too long".into()));
        }
        let base = if k < 0 {
            self.inverse(group)
        } else {
            self.clone()
        };
        let mut acc = Word::identity(self.n_vars, self.mode);
        for _ in 0..k.unsigned_abs() {
            acc = acc.product(&base, group)?;
        }
        Ok(acc)
    }

    /// `[u, v] = u⁻¹ v⁻¹ u v`.
    pub fn commutator(&self, other: &Word, group: &FiniteGroup) -> Result<Word> {
        self.inverse(group)
            .product(&other.inverse(group), group)?
            .product(self, group)?
            .product(other, group)
    }

    /// Left-aligned commutator `[w1, .., wk] = [[w1, .., w_{k-1}], wk]`.
    /// A single word is returned unchanged.
    pub fn left_commutator(words: &[Word], group: &FiniteGroup) -> Result<Word> {
        let (first, rest) = words
            .split_first()
            .ok_or_else(|| Error::BadParameter("commutator of an empty list".into()))?;
        rest.iter()
            .try_fold(first.clone(), |acc, w| acc.commutator(w, group))
    }

    /// Substitutes `point` for the variables and multiplies out in `group`.
    pub fn evaluate(&self, group: &FiniteGroup, point: &[Elem]) -> Elem {
        debug_assert!(point.len() >= self.n_vars);
        self.letters.iter().fold(Elem::IDENTITY, |acc, l| {
            let x = match *l {
                Letter::Const(c) => c,
                Letter::Var { var, exp } => group.pow(point[var], exp),
            };
            group.mul(acc, x)
        })
    }

    /// Renders the word in the parser's grammar.
    pub fn display<'a>(&'a self, group: &'a FiniteGroup) -> WordDisplay<'a> {
        WordDisplay { word: self, group }
    }
}

fn normalize_vars(letters: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if let Letter::Var { var, exp } = l {
            if exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(Letter::Var { var: v, exp: e }) if *v == var => {
                    *e += exp;
                    if *e == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
    }
    out
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    group: &'a FiniteGroup,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match *l {
                Letter::Var { var, exp: 1 } => write!(f, "x{}", var + 1)?,
                Letter::Var { var, exp } => write!(f, "x{}^{exp}", var + 1)?,
                Letter::Const(c) => {
                    let label = self.group.label(c);
                    if label.contains('\'') || self.group.find_label(label) != Some(c) {
                        write!(f, "'#{}'", c.0)?
                    } else {
                        write!(f, "'{label}'")?
                    }
                }
            }
        }
        Ok(())
    }
}

/// A finite system `S ≈ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    n_vars: usize,
    mode: Mode,
    words: Vec<Word>,
    source_text: Option<String>,
}

impl EquationSystem {
    pub fn new(n_vars: usize, mode: Mode, words: Vec<Word>) -> Result<EquationSystem> {
        if let Some(w) = words.iter().find(|w| w.n_vars != n_vars || w.mode != mode) {
            return Err(Error::ModeMismatch(format!(
                "word over {} variables in {} mode does not fit a {n_vars}-variable {mode} system",
                w.n_vars, w.mode
            )));
        }
        Ok(EquationSystem {
            n_vars,
            mode,
            words,
            source_text: None,
        })
    }

    pub fn with_source(mut self, text: impl Into<String>) -> EquationSystem {
        self.source_text = Some(text.into());
        self
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn source_text(&self) -> Option<&str> {
        self.source_text.as_deref()
    }

    /// `S1 ∪ S2`.
    pub fn union(&self, other: &EquationSystem) -> Result<EquationSystem> {
        let mut words = self.words.clone();
        words.extend(other.words.iter().cloned());
        EquationSystem::new(self.n_vars, self.mode, words)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Limits;
    use crate::group::builtin;

    fn s3() -> FiniteGroup {
        builtin(&"S3".parse().unwrap(), &Limits::default()).unwrap()
    }

    fn w(g: &FiniteGroup, n: usize, letters: Vec<Letter>) -> Word {
        Word::from_letters(Some(g), n, Mode::Coefficient, letters).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let g = s3();
        let a = g.find_label("(1 2 3)").unwrap();
        let b = g.find_label("(1 2)").unwrap();
        assert!(w(&g, 1, vec![Letter::var(0, 2), Letter::var(0, -2)]).is_empty());
        assert!(w(&g, 1, vec![Letter::Const(a), Letter::Const(g.inv(a))]).is_empty());
        let folded = w(
            &g,
            1,
            vec![Letter::var(0, 1), Letter::Const(a), Letter::Const(b)],
        );
        assert_eq!(
            folded.letters(),
            &[Letter::var(0, 1), Letter::Const(g.mul(a, b))]
        );
    }

    #[test]
    fn cancellation_cascades() {
        let g = s3();
        let a = g.find_label("(1 2 3)").unwrap();
        // x a a⁻¹ x⁻¹ collapses completely
        let word = w(
            &g,
            1,
            vec![
                Letter::var(0, 1),
                Letter::Const(a),
                Letter::Const(g.inv(a)),
                Letter::var(0, -1),
            ],
        );
        assert!(word.is_empty());
    }

    #[test]
    fn product_and_inverse() {
        let g = s3();
        let a = g.find_label("(1 2 3)").unwrap();
        let u = w(&g, 1, vec![Letter::var(0, 1), Letter::Const(a)]);
        assert!(u.product(&u.inverse(&g), &g).unwrap().is_empty());
        let e = Word::identity(1, Mode::Coefficient);
        assert_eq!(e.product(&u, &g).unwrap(), u);
        let v = w(&g, 1, vec![Letter::Const(g.inv(a)), Letter::var(0, 1)]);
        assert_eq!(u.product(&v, &g).unwrap().letters(), &[Letter::var(0, 2)]);
        let free = Word::var(1, Mode::CoefficientFree, 0).unwrap();
        assert!(matches!(u.product(&free, &g), Err(Error::ModeMismatch(_))));
    }

    #[test]
    fn commutators_are_left_aligned() {
        let g = s3();
        let m = Mode::CoefficientFree;
        let x: Vec<Word> = (0..3).map(|i| Word::var(3, m, i).unwrap()).collect();
        let c = Word::left_commutator(&x[..2], &g).unwrap();
        assert_eq!(
            c.letters(),
            &[
                Letter::var(0, -1),
                Letter::var(1, -1),
                Letter::var(0, 1),
                Letter::var(1, 1)
            ]
        );
        assert!(Word::left_commutator(&[x[0].clone(), x[0].clone()], &g)
            .unwrap()
            .is_empty());
        let c3 = Word::left_commutator(&x, &g).unwrap();
        assert_eq!(c3, c.commutator(&x[2], &g).unwrap());
    }

    #[test]
    fn evaluation() {
        let g = s3();
        let a = g.find_label("(1 2 3)").unwrap();
        let t = g.find_label("(1 2)").unwrap();
        assert_eq!(
            Word::identity(1, Mode::Coefficient).evaluate(&g, &[t]),
            g.identity()
        );
        let c2 = builtin(&"C2".parse().unwrap(), &Limits::default()).unwrap();
        let sq =
            Word::from_letters(None, 1, Mode::CoefficientFree, vec![Letter::var(0, 2)]).unwrap();
        assert!(sq.evaluate(&c2, &[Elem(1)]).is_identity());
        let comm = Word::var(1, Mode::Coefficient, 0)
            .unwrap()
            .commutator(&Word::constant(&g, 1, a).unwrap(), &g)
            .unwrap();
        assert!(!comm.evaluate(&g, &[t]).is_identity());
        assert!(comm.evaluate(&g, &[a]).is_identity());
    }

    #[test]
    fn constructor_errors() {
        let g = s3();
        assert!(matches!(
            Word::from_letters(Some(&g), 1, Mode::Coefficient, vec![Letter::var(1, 1)]),
            Err(Error::VariableOutOfRange { var: 2, n_vars: 1 })
        ));
        assert!(matches!(
            Word::from_letters(
                Some(&g),
                1,
                Mode::CoefficientFree,
                vec![Letter::Const(Elem(1))]
            ),
            Err(Error::ModeMismatch(_))
        ));
    }

    #[test]
    fn display_uses_grammar() {
        let g = s3();
        let a = g.find_label("(1 2 3)").unwrap();
        let u = w(
            &g,
            2,
            vec![Letter::var(0, 1), Letter::Const(a), Letter::var(1, -3)],
        );
        assert_eq!(u.display(&g).to_string(), "x1 '(1 2 3)' x2^-3");
        assert_eq!(
            Word::identity(1, Mode::Coefficient).display(&g).to_string(),
            "1"
        );
    }
}
