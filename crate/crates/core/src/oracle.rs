//! Combinatorial stand-ins for the multi-copy disc counts.
//!
//! Every count is read off the differential table (and the marked table) by
//! choosing occurrences of letters in monomials. The placement of the
//! complementary subwords is fixed here once for the whole crate:
//!
//! * strips of `d γ = ... u β v ...` give `u · β₁₀ · v` (left word on copy 1);
//! * costrips of the same occurrence, read at `γ`, give `v · β₀₁ · u`;
//! * a marked monomial `u ^ v` of `γ` gives `u · y₀₁ · v` in the Calabi-Yau image
//!   of `γ₁₀`, and `v · γ₀₁ · u` in the image of `x₀₁`.
//!
//! The swap in the costrip and marked `x` placements is what makes the
//! codifferential square to zero; it follows the boundary of the disc starting
//! from the output puncture.

use num_rational::Ratio;
use serde::Serialize;

use crate::algebra::{Convention, Copy, Gen, GradingContext, SymbolKind, Word};
use crate::dga::{DgaPresentation, Length};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ChordKind {
    Long(Gen),
    X,
    Y,
}

/// A chord of a multi-copy. `from`/`to` are the two subscripts as written, so
/// `γ₁₀` is `Long(γ)` with `from = 1, to = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MixedChord {
    pub kind: ChordKind,
    pub from: Copy,
    pub to: Copy,
}

/// Action with a symbolic infinitesimal: compared first by `real`, then by `eps`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Action {
    pub real: Length,
    pub eps: i64,
}

impl Action {
    pub fn zero() -> Self {
        Action { real: Ratio::from_integer(0), eps: 0 }
    }

    pub fn plus(self, o: Action) -> Action {
        Action { real: self.real + o.real, eps: self.eps + o.eps }
    }
}

impl MixedChord {
    pub fn long(g: Gen, from: Copy, to: Copy) -> Self {
        MixedChord { kind: ChordKind::Long(g), from, to }
    }

    pub fn x(from: Copy, to: Copy) -> Self {
        MixedChord { kind: ChordKind::X, from, to }
    }

    pub fn y(from: Copy, to: Copy) -> Self {
        MixedChord { kind: ChordKind::Y, from, to }
    }

    pub fn symbol(&self) -> SymbolKind {
        let (from, to) = (self.from, self.to);
        match self.kind {
            ChordKind::Long(gen) => SymbolKind::Long { gen, from, to },
            ChordKind::X => SymbolKind::MorseX { from, to },
            ChordKind::Y => SymbolKind::MorseY { from, to },
        }
    }

    pub fn degree(&self, ctx: &GradingContext, conv: Convention) -> Option<i64> {
        ctx.letter_degree(self.symbol(), conv).ok()
    }

    /// Positive length when the chord runs from a higher copy to a lower one,
    /// negative otherwise; Morse chords are infinitesimal.
    pub fn action(&self, p: &DgaPresentation) -> Option<Action> {
        match self.kind {
            ChordKind::Long(g) => {
                let l = p.gens[g as usize].len?;
                let real = if self.from > self.to { l } else { -l };
                Some(Action { real, eps: 0 })
            }
            ChordKind::X => Some(Action { real: Ratio::from_integer(0), eps: -1 }),
            ChordKind::Y => Some(Action { real: Ratio::from_integer(0), eps: 1 }),
        }
    }

    pub fn display(&self, p: &DgaPresentation) -> String {
        let base = match self.kind {
            ChordKind::Long(g) => p.gen_name(g).to_string(),
            ChordKind::X => "x".into(),
            ChordKind::Y => "y".into(),
        };
        format!("{base}_{}{}", self.from, self.to)
    }
}

pub fn word_action(p: &DgaPresentation, w: &[Gen]) -> Option<Action> {
    let real: Option<Length> = w.iter().map(|&g| p.gens[g as usize].len).sum();
    Some(Action { real: real?, eps: 0 })
}

/// A disc read off the tables: its output chord and the pure words between its punctures.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OracleTerm {
    pub output: MixedChord,
    pub deltas: Vec<Word>,
}

pub type Occurrence = (Word, Gen, Word);

/// One `(u, β, v)` per occurrence of a letter `β` in a monomial `u β v` of `d γ`.
pub fn strips_d1(p: &DgaPresentation, gamma: Gen) -> Vec<Occurrence> {
    let mut out = vec![];
    for m in p.diff[gamma as usize].words() {
        let w = m.letters();
        for i in 0..w.len() {
            out.push((Word(w[..i].to_vec()), w[i], Word(w[i + 1..].to_vec())));
        }
    }
    out
}

/// One `(u, β, v)` per occurrence of `γ` in a monomial `u γ v` of some `d β`.
pub fn costrips_b1(p: &DgaPresentation, gamma: Gen) -> Vec<Occurrence> {
    let mut out = vec![];
    for beta in 0..p.num_gens() {
        for m in p.diff[beta as usize].words() {
            let w = m.letters();
            for i in 0..w.len() {
                if w[i] == gamma {
                    out.push((Word(w[..i].to_vec()), beta, Word(w[i + 1..].to_vec())));
                }
            }
        }
    }
    out
}

/// Long bananas with positive punctures at `γ₁₀` and `β₀₁`. They are the costrips
/// of `γ` by duality; this is the identity behind the self-duality of the
/// Calabi-Yau map.
pub fn bananas_b1_long(p: &DgaPresentation, gamma: Gen) -> Vec<Occurrence> {
    costrips_b1(p, gamma)
}

/// Long bananas entering the Calabi-Yau map of `γ₁₀`, as output triples
/// `(left, β, right)` meaning `left · β₀₁ · right`.
///
/// A banana with positive punctures `γ₁₀` and `β₀₁` is seen from both copies:
/// once as a costrip at `γ` (placed `v · β₀₁ · u` for `d β ∋ u γ v`) and once,
/// after exchanging the copies, as a strip (placed `u · β₀₁ · v` for
/// `d γ ∋ u β v`). Only the degree 0 part is kept: a costrip term is rigid when
/// `2 CZ(γ) = n`, a strip term when `2 CZ(β) = n`.
pub fn rigid_bananas(p: &DgaPresentation, gamma: Gen) -> Vec<Occurrence> {
    let half = |g: Gen| 2 * p.gens[g as usize].cz == p.n;
    let mut out = vec![];
    if half(gamma) {
        out.extend(bananas_b1_long(p, gamma).into_iter().map(|(u, b, v)| (v, b, u)));
    }
    out.extend(strips_d1(p, gamma).into_iter().filter(|t| half(t.1)));
    out
}

/// The two Morse bananas of `γ`: `γ · x_ij` and `x_ij · γ`.
pub fn morse_banana_terms(gamma: Gen, from: Copy, to: Copy) -> [(Word, MixedChord, Word); 2] {
    let x = MixedChord::x(from, to);
    [(Word::letter(gamma), x, Word::one()), (Word::one(), x, Word::letter(gamma))]
}

/// The two Morse strips out of `y₀₁` through `γ`: `γ · γ₀₁` and `γ₀₁ · γ`.
pub fn morse_y_strip_terms(gamma: Gen) -> [(Word, MixedChord, Word); 2] {
    let c = MixedChord::long(gamma, 0, 1);
    [(Word::letter(gamma), c, Word::one()), (Word::one(), c, Word::letter(gamma))]
}

/// `(u, v)` for every marked monomial `u ^ v` of `γ`.
pub fn pointed_terms(p: &DgaPresentation, gamma: Gen) -> Vec<(Word, Word)> {
    p.pointed[gamma as usize]
        .iter()
        .map(|m| (Word(m.left().to_vec()), Word(m.right().to_vec())))
        .collect()
}

/// One slot of an occurrence pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// A letter equal to the given generator.
    Chord(Gen),
    /// Any letter; its value is captured.
    Any,
    /// The basepoint slot of a marked monomial (consumes no letter).
    Mark,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Embedding {
    /// `pattern.len() + 1` complementary subwords, in order.
    pub deltas: Vec<Word>,
    /// Letters matched by `Slot::Any`, in order.
    pub captured: Vec<Gen>,
}

/// All order-preserving embeddings of `pattern` into `word`. A `Mark` slot matches
/// only the position `mark` and is never matched when `mark` is `None`.
pub fn embeddings(word: &[Gen], mark: Option<usize>, pattern: &[Slot]) -> Vec<Embedding> {
    let mut out = vec![];
    let mut cuts = Vec::with_capacity(pattern.len());
    embed_rec(word, mark, pattern, 0, &mut cuts, &mut out);
    out
}

// `cuts` holds (start, end) of each matched slot; letters occupy one position, marks zero.
fn embed_rec(
    word: &[Gen],
    mark: Option<usize>,
    pattern: &[Slot],
    cursor: usize,
    cuts: &mut Vec<(usize, usize)>,
    out: &mut Vec<Embedding>,
) {
    let k = cuts.len();
    if k == pattern.len() {
        let mut deltas = Vec::with_capacity(k + 1);
        let mut captured = vec![];
        let mut prev = 0;
        for (slot, &(s, e)) in pattern.iter().zip(cuts.iter()) {
            deltas.push(Word(word[prev..s].to_vec()));
            if *slot == Slot::Any {
                captured.push(word[s]);
            }
            prev = e;
        }
        deltas.push(Word(word[prev..].to_vec()));
        out.push(Embedding { deltas, captured });
        return;
    }
    match pattern[k] {
        Slot::Mark => {
            if let Some(m) = mark {
                if m >= cursor && m <= word.len() {
                    cuts.push((m, m));
                    embed_rec(word, mark, pattern, m, cuts, out);
                    cuts.pop();
                }
            }
        }
        slot => {
            for i in cursor..word.len() {
                let hit = match slot {
                    Slot::Chord(g) => word[i] == g,
                    _ => true,
                };
                if hit {
                    cuts.push((i, i + 1));
                    embed_rec(word, mark, pattern, i + 1, cuts, out);
                    cuts.pop();
                }
            }
        }
    }
}

/// Pattern matching over every monomial of `d top`, or of the marked table of
/// `top` when `use_point` is set.
pub fn multi_pattern_count(p: &DgaPresentation, top: Gen, pattern: &[Slot], use_point: bool) -> Vec<Embedding> {
    let mut out = vec![];
    if use_point {
        for m in &p.pointed[top as usize] {
            out.extend(embeddings(m.word.letters(), Some(m.mark), pattern));
        }
    } else {
        for m in p.diff[top as usize].words() {
            out.extend(embeddings(m.letters(), None, pattern));
        }
    }
    out
}

/// Action check on every arity-one oracle term: output action strictly below input.
/// Returns the offending terms; empty when lengths are missing.
pub fn action_violations(p: &DgaPresentation) -> Vec<String> {
    if p.gens.iter().any(|g| g.len.is_none()) {
        return vec![];
    }
    let act = |w: &Word| word_action(p, w.letters()).expect("lengths present");
    let chord = |c: MixedChord| c.action(p).expect("lengths present");
    let mut bad = vec![];
    let mut check = |label: String, input: Action, output: Action| {
        if output >= input {
            bad.push(label);
        }
    };
    for g in 0..p.num_gens() {
        let g10 = chord(MixedChord::long(g, 1, 0));
        let g01 = chord(MixedChord::long(g, 0, 1));
        for (u, b, v) in strips_d1(p, g) {
            let out = chord(MixedChord::long(b, 1, 0)).plus(act(&u)).plus(act(&v));
            check(format!("strip {} -> {}", p.gen_name(g), p.gen_name(b)), g10, out);
        }
        for (u, b, v) in costrips_b1(p, g) {
            let out = chord(MixedChord::long(b, 0, 1)).plus(act(&u)).plus(act(&v));
            check(format!("costrip {} -> {}", p.gen_name(g), p.gen_name(b)), g01, out);
        }
        for (u, v) in pointed_terms(p, g) {
            let out = chord(MixedChord::y(0, 1)).plus(act(&u)).plus(act(&v));
            check(format!("marked y-banana of {}", p.gen_name(g)), g10, out);
            let out = g01.plus(act(&u)).plus(act(&v));
            check(format!("marked x-strip into {}", p.gen_name(g)), chord(MixedChord::x(0, 1)), out);
        }
        for (l, c, r) in morse_banana_terms(g, 0, 1) {
            check(format!("Morse banana of {}", p.gen_name(g)), g10, chord(c).plus(act(&l)).plus(act(&r)));
        }
        for (l, c, r) in morse_y_strip_terms(g) {
            let input = chord(MixedChord::y(0, 1));
            check(format!("Morse strip of {}", p.gen_name(g)), input, chord(c).plus(act(&l)).plus(act(&r)));
        }
    }
    bad
}
