//! Free associative algebra over Z2: words, polynomials, gradings and derivations.
//!
//! A polynomial is stored as the set of words with coefficient one, so addition is
//! symmetric difference and `p + p == 0` holds structurally.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a pure generator inside its presentation.
pub type Gen = u32;

/// Copy label inside a multi-copy of the Legendrian.
pub type Copy = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("derivation table has no entry for generator {0}")]
    MissingEntry(Gen),
    #[error("letter {0} cannot be graded under the {1:?} convention")]
    Grading(String, Convention),
}

/// A word in the pure generators; the empty word is the unit.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: Gen) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Concatenate a list of slices into one word.
    pub fn join(parts: &[&[Gen]]) -> Word {
        let mut v = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for p in parts {
            v.extend_from_slice(p);
        }
        Word(v)
    }

    pub fn sub(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| format!("g{g}")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

impl From<Vec<Gen>> for Word {
    fn from(v: Vec<Gen>) -> Self {
        Word(v)
    }
}

/// A word with a distinguished slot, the place where the boundary of a disc
/// crosses the basepoint. `mark` lies in `0..=word.len()`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MarkedWord {
    pub word: Word,
    pub mark: usize,
}

impl MarkedWord {
    pub fn new(word: Word, mark: usize) -> Option<Self> {
        (mark <= word.len()).then_some(MarkedWord { word, mark })
    }

    pub fn left(&self) -> &[Gen] {
        &self.word.0[..self.mark]
    }

    pub fn right(&self) -> &[Gen] {
        &self.word.0[self.mark..]
    }
}

/// A Z2-linear combination of words.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorPoly {
    support: BTreeSet<Word>,
}

impl TensorPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::one())
    }

    pub fn from_word(w: Word) -> Self {
        let mut p = Self::zero();
        p.support.insert(w);
        p
    }

    pub fn from_words<I: IntoIterator<Item = Word>>(words: I) -> Self {
        let mut p = Self::zero();
        for w in words {
            p.toggle(w);
        }
        p
    }

    /// Add a single word with coefficient one.
    pub fn toggle(&mut self, w: Word) {
        if !self.support.remove(&w) {
            self.support.insert(w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.support.contains(w)
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.support.iter()
    }

    pub fn add(&self, other: &TensorPoly) -> TensorPoly {
        let support = self.support.symmetric_difference(&other.support).cloned().collect();
        TensorPoly { support }
    }

    pub fn mul(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for u in &self.support {
            for v in &other.support {
                out.toggle(u.concat(v));
            }
        }
        out
    }
}

impl fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.support.iter().map(|w| format!("{w:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromIterator<Word> for TensorPoly {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        Self::from_words(iter)
    }
}

impl AddAssign<&TensorPoly> for TensorPoly {
    fn add_assign(&mut self, rhs: &TensorPoly) {
        for w in &rhs.support {
            self.toggle(w.clone());
        }
    }
}

impl Add for &TensorPoly {
    type Output = TensorPoly;
    fn add(self, rhs: &TensorPoly) -> TensorPoly {
        TensorPoly::add(self, rhs)
    }
}

impl Mul for &TensorPoly {
    type Output = TensorPoly;
    fn mul(self, rhs: &TensorPoly) -> TensorPoly {
        TensorPoly::mul(self, rhs)
    }
}

/// Grading conventions for letters and words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    Algebra,
    CPlus,
    CHatPlus,
    CMinus,
}

/// A letter of a multi-copy word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SymbolKind {
    Pure(Gen),
    Long { gen: Gen, from: Copy, to: Copy },
    MorseX { from: Copy, to: Copy },
    MorseY { from: Copy, to: Copy },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingContext {
    pub n: i64,
    pub cz: Vec<i64>,
}

impl GradingContext {
    pub fn algebra_degree(&self, g: Gen) -> i64 {
        1 - self.cz[g as usize]
    }

    pub fn word_degree(&self, w: &[Gen]) -> i64 {
        w.iter().map(|&g| self.algebra_degree(g)).sum()
    }

    pub fn letter_degree(&self, s: SymbolKind, conv: Convention) -> Result<i64, AlgebraError> {
        use Convention::*;
        let fail = || AlgebraError::Grading(format!("{s:?}"), conv);
        match s {
            SymbolKind::Pure(g) => Ok(self.algebra_degree(g)),
            SymbolKind::Long { gen, .. } => {
                let cz = self.cz[gen as usize];
                match conv {
                    Algebra => Err(fail()),
                    CPlus => Ok(self.n - cz),
                    CHatPlus => Ok(self.n - cz + 1),
                    CMinus => Ok(cz),
                }
            }
            SymbolKind::MorseX { .. } => match conv {
                CHatPlus => Ok(self.n + 1),
                CPlus => Ok(self.n),
                _ => Err(fail()),
            },
            SymbolKind::MorseY { .. } => match conv {
                CMinus => Ok(0),
                _ => Err(fail()),
            },
        }
    }

    /// Sum of letter degrees; mixed letters are graded by `conv`.
    pub fn degree(&self, letters: &[SymbolKind], conv: Convention) -> Result<i64, AlgebraError> {
        letters.iter().map(|&s| self.letter_degree(s, conv)).sum()
    }
}

/// Leibniz extension of a generator table to a derivation, applied to one word.
pub fn derive_word_into(table: &[TensorPoly], w: &[Gen], out: &mut TensorPoly) -> Result<(), AlgebraError> {
    for (i, &g) in w.iter().enumerate() {
        let image = table.get(g as usize).ok_or(AlgebraError::MissingEntry(g))?;
        for m in image.words() {
            out.toggle(Word::join(&[&w[..i], m.letters(), &w[i + 1..]]));
        }
    }
    Ok(())
}

/// Apply the derivation determined by `table` (indexed by generator) to `p`.
pub fn apply_derivation(table: &[TensorPoly], p: &TensorPoly) -> Result<TensorPoly, AlgebraError> {
    let mut out = TensorPoly::zero();
    for w in p.words() {
        derive_word_into(table, w.letters(), &mut out)?;
    }
    Ok(out)
}

/// Apply the algebra morphism sending each generator `g` to `table[g]`.
pub fn substitute(table: &[TensorPoly], p: &TensorPoly) -> TensorPoly {
    let mut out = TensorPoly::zero();
    for w in p.words() {
        let mut acc = TensorPoly::one();
        for &g in w.letters() {
            acc = acc.mul(&table[g as usize]);
        }
        out += &acc;
    }
    out
}

/// All words of length at most `max_len` over `alphabet` generators, shortest first.
pub fn words_up_to(alphabet: u32, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::one()];
    let mut layer = vec![Word::one()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet as usize);
        for w in &layer {
            for g in 0..alphabet {
                let mut v = w.0.clone();
                v.push(g);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
