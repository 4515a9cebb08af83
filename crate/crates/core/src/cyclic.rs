//! Cyclic complexes `Ĉ₊^cyc` and `Č₋^cyc` and their operations.
//!
//! An element is a sum of terms `c a`: a mixed chord followed by a pure word.
//! Inputs to multi-argument operations are given in the written order
//! `(c_d, …, c_1)`: `c_1` lives between copies `s₀ < s₁`, `c_d` between
//! `s_{d-1} < s_d`, and the output between `s₀` and `s_d`.
//!
//! All operations read a disc's boundary starting at the output puncture and
//! replace each input chord by its word, so the output word of a pattern
//! `δ₀ c_1 δ₁ … c_d δ_d` is `δ₀ a_1 δ₁ … a_d δ_d`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Convention, Copy, Gen, Word};
use crate::dga::DgaPresentation;
use crate::oracle::{self, embeddings, multi_pattern_count, ChordKind, MixedChord, Slot};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclicError {
    #[error("chord {0:?} does not belong to {1:?}")]
    WrongComplex(MixedChord, Side),
    #[error("input copies do not chain: {0:?} is not followed by {1:?}")]
    CopyMismatch(MixedChord, MixedChord),
    #[error("operation needs at least one input")]
    NoInputs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `Ĉ₊^cyc`, chords `γ_ij` with `i > j` and `x_ij` with `i < j`.
    Hat,
    /// `Č₋^cyc`, chords `γ_ij` and `y_ij` with `i < j`.
    Check,
}

pub type CycTerm = (MixedChord, Word);

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicElement {
    terms: BTreeSet<CycTerm>,
}

impl CyclicElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(c: MixedChord, a: Word) -> Self {
        let mut e = Self::zero();
        e.toggle((c, a));
        e
    }

    pub fn toggle(&mut self, t: CycTerm) {
        if !self.terms.remove(&t) {
            self.terms.insert(t);
        }
    }

    pub fn add_assign(&mut self, o: &CyclicElement) {
        for t in &o.terms {
            self.toggle(t.clone());
        }
    }

    pub fn add(&self, o: &CyclicElement) -> CyclicElement {
        CyclicElement { terms: self.terms.symmetric_difference(&o.terms).cloned().collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &CycTerm> {
        self.terms.iter()
    }

    pub fn contains(&self, t: &CycTerm) -> bool {
        self.terms.contains(t)
    }

    pub fn display(&self, p: &DgaPresentation) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms.iter().map(|t| display_term(p, t)).collect::<Vec<_>>().join(" + ")
    }
}

impl std::fmt::Debug for CyclicElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.terms.iter()).finish()
    }
}

impl FromIterator<CycTerm> for CyclicElement {
    fn from_iter<I: IntoIterator<Item = CycTerm>>(iter: I) -> Self {
        let mut e = Self::zero();
        for t in iter {
            e.toggle(t);
        }
        e
    }
}

pub fn display_term(p: &DgaPresentation, (c, a): &CycTerm) -> String {
    if a.is_empty() {
        c.display(p)
    } else {
        format!("{} {}", c.display(p), p.format_word(a.letters()))
    }
}

pub fn side_of(c: &MixedChord) -> Side {
    match c.kind {
        ChordKind::Long(_) if c.from > c.to => Side::Hat,
        ChordKind::X => Side::Hat,
        _ => Side::Check,
    }
}

/// `(low, high)` copies of a chord.
pub fn span(c: &MixedChord) -> (Copy, Copy) {
    (c.from.min(c.to), c.from.max(c.to))
}

pub fn term_degree(p: &DgaPresentation, (c, a): &CycTerm) -> Option<i64> {
    let conv = match side_of(c) {
        Side::Hat => Convention::CHatPlus,
        Side::Check => Convention::CMinus,
    };
    Some(c.degree(&p.grading(), conv)? + p.word_degree(a.letters()))
}

/// Degree of a homogeneous element; `None` for zero or mixed degrees.
pub fn element_degree(p: &DgaPresentation, e: &CyclicElement) -> Option<i64> {
    let mut it = e.terms().map(|t| term_degree(p, t));
    let first = it.next()??;
    it.all(|d| d == Some(first)).then_some(first)
}

fn hat_long(g: Gen, lo: Copy, hi: Copy) -> MixedChord {
    MixedChord::long(g, hi, lo)
}

fn check_long(g: Gen, lo: Copy, hi: Copy) -> MixedChord {
    MixedChord::long(g, lo, hi)
}

fn long_of(c: &MixedChord) -> Option<Gen> {
    match c.kind {
        ChordKind::Long(g) => Some(g),
        _ => None,
    }
}

/// `δ₀ a_1 δ₁ a_2 … a_d δ_d`
fn interleave(deltas: &[Word], words: &[&Word]) -> Word {
    debug_assert_eq!(deltas.len(), words.len() + 1);
    let mut v = deltas[0].0.clone();
    for (a, d) in words.iter().zip(&deltas[1..]) {
        v.extend_from_slice(a.letters());
        v.extend_from_slice(d.letters());
    }
    Word(v)
}

fn cat(parts: &[&Word]) -> Word {
    Word(parts.iter().flat_map(|w| w.0.iter().copied()).collect())
}

/// Inputs in `(c_d, …, c_1)` order, checked for side and copy chaining.
/// Returns the output copies `(s₀, s_d)`.
fn check_inputs(inputs: &[&CyclicElement], sides: &[Side]) -> Result<(Copy, Copy), CyclicError> {
    let d = inputs.len();
    if d == 0 {
        return Err(CyclicError::NoInputs);
    }
    let mut spans: Vec<Option<(MixedChord, (Copy, Copy))>> = vec![None; d];
    for (k, (e, side)) in inputs.iter().zip(sides).enumerate() {
        for (c, _) in e.terms() {
            if side_of(c) != *side {
                return Err(CyclicError::WrongComplex(*c, *side));
            }
            match spans[k] {
                None => spans[k] = Some((*c, span(c))),
                Some((c0, s)) if s != span(c) => return Err(CyclicError::CopyMismatch(c0, *c)),
                _ => {}
            }
        }
    }
    for k in 0..d.saturating_sub(1) {
        if let (Some((hi_c, hi)), Some((lo_c, lo))) = (spans[k], spans[k + 1]) {
            if hi.0 != lo.1 {
                return Err(CyclicError::CopyMismatch(lo_c, hi_c));
            }
        }
    }
    // Zero inputs carry no labels; fall back to the contiguous convention.
    let lo = spans[d - 1].map_or(0, |s| s.1 .0);
    let hi = spans[0].map_or(lo + d as Copy, |s| s.1 .1);
    Ok((lo, hi))
}

/// Multilinear expansion: calls `f` with terms in `(c_1, …, c_d)` order.
fn for_each_tuple<'a>(inputs: &[&'a CyclicElement], f: &mut dyn FnMut(&[&'a CycTerm])) {
    let rev: Vec<&CyclicElement> = inputs.iter().rev().copied().collect();
    let mut cur: Vec<&CycTerm> = Vec::with_capacity(rev.len());
    fn rec<'a>(rev: &[&'a CyclicElement], cur: &mut Vec<&'a CycTerm>, f: &mut dyn FnMut(&[&'a CycTerm])) {
        if cur.len() == rev.len() {
            f(cur);
            return;
        }
        for t in rev[cur.len()].terms() {
            cur.push(t);
            rec(rev, cur, f);
            cur.pop();
        }
    }
    rec(&rev, &mut cur, f);
}

/// Evaluates one tuple and, in debug builds, asserts the family's degree
/// `base - d` on the result before merging it into `out`.
fn checked(p: &DgaPresentation, ts: &[&CycTerm], base: i64, out: &mut CyclicElement, f: impl FnOnce(&mut CyclicElement)) {
    let mut local = CyclicElement::zero();
    f(&mut local);
    if cfg!(debug_assertions) && !local.is_zero() {
        let input: Option<i64> = ts.iter().map(|t| term_degree(p, t)).sum();
        let want = input.map(|d| d + base - ts.len() as i64);
        for t in local.terms() {
            debug_assert_eq!(term_degree(p, t), want, "degree of {t:?} from {ts:?}");
        }
    }
    out.add_assign(&local);
}

/// Differential of `Ĉ₊^cyc` (degree +1).
pub fn mhat1_cyc(p: &DgaPresentation, e: &CyclicElement) -> Result<CyclicElement, CyclicError> {
    let mut out = CyclicElement::zero();
    for (c, a) in e.terms() {
        if side_of(c) != Side::Hat {
            return Err(CyclicError::WrongComplex(*c, Side::Hat));
        }
        let (lo, hi) = span(c);
        if let Some(g) = long_of(c) {
            for (u, b, v) in oracle::strips_d1(p, g) {
                out.toggle((hat_long(b, lo, hi), cat(&[&v, a, &u])));
            }
            for (l, x, r) in oracle::morse_banana_terms(g, lo, hi) {
                out.toggle((x, cat(&[&r, a, &l])));
            }
        }
        for da in p.diff_word(a.letters()).words() {
            out.toggle((*c, da.clone()));
        }
    }
    Ok(out)
}

/// Differential of `Č₋^cyc` (degree +1).
pub fn mcheck1_cyc(p: &DgaPresentation, e: &CyclicElement) -> Result<CyclicElement, CyclicError> {
    let mut out = CyclicElement::zero();
    for (c, a) in e.terms() {
        if side_of(c) != Side::Check {
            return Err(CyclicError::WrongComplex(*c, Side::Check));
        }
        let (lo, hi) = span(c);
        match long_of(c) {
            Some(g) => {
                for (u, b, v) in oracle::costrips_b1(p, g) {
                    out.toggle((check_long(b, lo, hi), cat(&[&u, a, &v])));
                }
            }
            None => {
                for g in 0..p.num_gens() {
                    for (l, _, r) in oracle::morse_y_strip_terms(g) {
                        out.toggle((check_long(g, lo, hi), cat(&[&r, a, &l])));
                    }
                }
            }
        }
        for da in p.diff_word(a.letters()).words() {
            out.toggle((*c, da.clone()));
        }
    }
    Ok(out)
}

/// Higher products of `Č₋^cyc` on one tuple of terms, `d ≥ 2`, terms in `(c_1, …, c_d)` order.
fn mcheck_terms(p: &DgaPresentation, ts: &[&CycTerm], lo: Copy, hi: Copy, out: &mut CyclicElement) {
    let d = ts.len();
    let ys = ts.iter().filter(|t| t.0.kind == ChordKind::Y).count();
    if ys > 0 {
        // y is a strict unit; no higher operation sees it.
        if d != 2 {
            return;
        }
        let (c1, c2) = (ts[0], ts[1]);
        let word = cat(&[&c1.1, &c2.1]);
        match (long_of(&c2.0), long_of(&c1.0)) {
            (Some(g), None) | (None, Some(g)) => out.toggle((check_long(g, lo, hi), word)),
            (None, None) => out.toggle((MixedChord::y(lo, hi), word)),
            _ => unreachable!(),
        }
        return;
    }
    let pattern: Vec<Slot> = ts.iter().map(|t| Slot::Chord(long_of(&t.0).unwrap())).collect();
    let words: Vec<&Word> = ts.iter().map(|t| &t.1).collect();
    for top in 0..p.num_gens() {
        for emb in multi_pattern_count(p, top, &pattern, false) {
            out.toggle((check_long(top, lo, hi), interleave(&emb.deltas, &words)));
        }
    }
}

/// `m̌_d` on `Č₋^cyc`, degree `2 - d`.
pub fn mcheck_d(p: &DgaPresentation, inputs: &[&CyclicElement]) -> Result<CyclicElement, CyclicError> {
    let (lo, hi) = check_inputs(inputs, &vec![Side::Check; inputs.len()])?;
    if inputs.len() == 1 {
        return mcheck1_cyc(p, inputs[0]);
    }
    let mut out = CyclicElement::zero();
    for_each_tuple(inputs, &mut |ts| checked(p, ts, 2, &mut out, |o| mcheck_terms(p, ts, lo, hi, o)));
    Ok(out)
}

/// Left action of `Č₋^cyc` on `Ĉ₊^cyc`: `M_j = b_j^x + D_j` on `(θ_j, …, θ_2, c_1)`.
fn module_terms(p: &DgaPresentation, ts: &[&CycTerm], lo: Copy, hi: Copy, out: &mut CyclicElement) {
    let j = ts.len();
    let (c1, thetas) = (ts[0], &ts[1..]);
    let ys = thetas.iter().filter(|t| t.0.kind == ChordKind::Y).count();
    if ys > 0 {
        if j == 2 {
            let word = cat(&[&c1.1, &thetas[0].1]);
            let c = match long_of(&c1.0) {
                Some(g) => hat_long(g, lo, hi),
                None => MixedChord::x(lo, hi),
            };
            out.toggle((c, word));
        }
        return;
    }
    // D_j with an x in the module slot vanishes for action reasons.
    let Some(gamma) = long_of(&c1.0) else { return };
    if j == 2 && long_of(&thetas[0].0) == Some(gamma) {
        out.toggle((MixedChord::x(lo, hi), cat(&[&c1.1, &thetas[0].1])));
    }
    let mut pattern: Vec<Slot> = thetas.iter().map(|t| Slot::Chord(long_of(&t.0).unwrap())).collect();
    pattern.push(Slot::Any);
    let words: Vec<&Word> = ts.iter().map(|t| &t.1).collect();
    for emb in multi_pattern_count(p, gamma, &pattern, false) {
        // deltas: δ₁ … δ_j, δ₀
        let mut deltas = vec![emb.deltas[j].clone()];
        deltas.extend_from_slice(&emb.deltas[..j]);
        out.toggle((hat_long(emb.captured[0], lo, hi), interleave(&deltas, &words)));
    }
}

/// `M_j` for `j ≥ 2`; `M_1 = m̂₁`. Inputs `(θ_j, …, θ_2, c_1)`.
pub fn module_action(p: &DgaPresentation, inputs: &[&CyclicElement]) -> Result<CyclicElement, CyclicError> {
    let mut sides = vec![Side::Check; inputs.len()];
    if let Some(last) = sides.last_mut() {
        *last = Side::Hat;
    }
    let (lo, hi) = check_inputs(inputs, &sides)?;
    if inputs.len() == 1 {
        return mhat1_cyc(p, inputs[0]);
    }
    let mut out = CyclicElement::zero();
    for_each_tuple(inputs, &mut |ts| checked(p, ts, 2, &mut out, |o| module_terms(p, ts, lo, hi, o)));
    Ok(out)
}

fn is_half(p: &DgaPresentation, g: Gen) -> bool {
    2 * p.gens[g as usize].cz == p.n
}

/// The Calabi-Yau family `b_j^∨` on `(θ_j, …, θ_2, c_1)`, `j ≥ 1`, degree `1 - j`.
fn bvee_terms(p: &DgaPresentation, ts: &[&CycTerm], lo: Copy, hi: Copy, out: &mut CyclicElement) {
    let j = ts.len();
    let (c1, thetas) = (ts[0], &ts[1..]);
    if thetas.iter().any(|t| t.0.kind == ChordKind::Y) {
        return;
    }
    let alphas: Vec<Slot> = thetas.iter().map(|t| Slot::Chord(long_of(&t.0).unwrap())).collect();
    let words: Vec<&Word> = ts.iter().map(|t| &t.1).collect();
    match long_of(&c1.0) {
        Some(gamma) => {
            // Bananas seen as costrips: d β ∋ δ₀ γ δ₁ α₂ … α_j δ_j.
            if is_half(p, gamma) {
                let mut pattern = vec![Slot::Chord(gamma)];
                pattern.extend_from_slice(&alphas);
                for beta in 0..p.num_gens() {
                    for emb in multi_pattern_count(p, beta, &pattern, false) {
                        out.toggle((check_long(beta, lo, hi), interleave(&emb.deltas, &words)));
                    }
                }
            }
            // Bananas seen as strips: d γ ∋ δ₁ α₂ … α_j δ_j β δ₀.
            let mut pattern = alphas.clone();
            pattern.push(Slot::Any);
            for emb in multi_pattern_count(p, gamma, &pattern, false) {
                let beta = emb.captured[0];
                if !is_half(p, beta) {
                    continue;
                }
                let mut deltas = vec![emb.deltas[j].clone()];
                deltas.extend_from_slice(&emb.deltas[..j]);
                out.toggle((check_long(beta, lo, hi), interleave(&deltas, &words)));
            }
            // Marked bananas ending at y: marked word δ₁ α₂ … α_j δ_j ^ δ₀.
            let mut pattern = alphas.clone();
            pattern.push(Slot::Mark);
            for emb in multi_pattern_count(p, gamma, &pattern, true) {
                let mut deltas = vec![emb.deltas[j].clone()];
                deltas.extend_from_slice(&emb.deltas[..j]);
                out.toggle((MixedChord::y(lo, hi), interleave(&deltas, &words)));
            }
        }
        None => {
            // Marked strips through x: marked word δ₀ ^ δ₁ α₂ … α_j δ_j of β.
            let mut pattern = vec![Slot::Mark];
            pattern.extend_from_slice(&alphas);
            for beta in 0..p.num_gens() {
                for emb in multi_pattern_count(p, beta, &pattern, true) {
                    out.toggle((check_long(beta, lo, hi), interleave(&emb.deltas, &words)));
                }
            }
        }
    }
}

/// `b_j^∨` on `(θ_j, …, θ_2, c_1)`; `b_1^∨ = CY₁`.
pub fn bvee(p: &DgaPresentation, inputs: &[&CyclicElement]) -> Result<CyclicElement, CyclicError> {
    let mut sides = vec![Side::Check; inputs.len()];
    if let Some(last) = sides.last_mut() {
        *last = Side::Hat;
    }
    let (lo, hi) = check_inputs(inputs, &sides)?;
    let mut out = CyclicElement::zero();
    for_each_tuple(inputs, &mut |ts| checked(p, ts, 1, &mut out, |o| bvee_terms(p, ts, lo, hi, o)));
    Ok(out)
}

/// Integer compositions of `total` into positive parts, in lexicographic order.
pub fn compositions(total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `Σ_j Σ_{i₂+…+i_j=d-1} op_j(CY_{i_j} ⊗ … ⊗ CY_{i_2} ⊗ id)` on inputs `(c_d, …, c_1)`.
fn pull_back(
    p: &DgaPresentation,
    inputs: &[&CyclicElement],
    op: fn(&DgaPresentation, &[&CyclicElement]) -> Result<CyclicElement, CyclicError>,
) -> Result<CyclicElement, CyclicError> {
    let d = inputs.len();
    let c1 = inputs[d - 1];
    let mut out = CyclicElement::zero();
    for comp in compositions(d - 1) {
        if comp.is_empty() && d > 1 {
            continue;
        }
        // comp = (i₂, …, i_j); blocks taken from c_2 upwards.
        let mut args: Vec<CyclicElement> = vec![];
        let mut end = d - 1;
        for &i in &comp {
            let block = &inputs[end - i..end];
            args.push(cy_d(p, block)?);
            end -= i;
        }
        args.reverse();
        let mut refs: Vec<&CyclicElement> = args.iter().collect();
        refs.push(c1);
        out.add_assign(&op(p, &refs)?);
    }
    Ok(out)
}

/// `CY_d`, degree `1 - d`.
pub fn cy_d(p: &DgaPresentation, inputs: &[&CyclicElement]) -> Result<CyclicElement, CyclicError> {
    check_inputs(inputs, &vec![Side::Hat; inputs.len()])?;
    if inputs.len() == 1 {
        return bvee(p, inputs);
    }
    pull_back(p, inputs, bvee)
}

/// `m̂_d`, degree `2 - d`; `m̂_1` is the differential.
pub fn mhat_d(p: &DgaPresentation, inputs: &[&CyclicElement]) -> Result<CyclicElement, CyclicError> {
    check_inputs(inputs, &vec![Side::Hat; inputs.len()])?;
    if inputs.len() == 1 {
        return mhat1_cyc(p, inputs[0]);
    }
    pull_back(p, inputs, module_action)
}

fn hat_pair(c2: &CyclicElement, c1: &CyclicElement) -> Result<(Copy, Copy), CyclicError> {
    check_inputs(&[c2, c1], &[Side::Hat, Side::Hat])
}

/// Alternative product `d̂₂`. It agrees with `m̂₂` except on `(x, γ)` inputs, where it
/// attaches `x` to the marked bananas of `CY₁(γ)`.
pub fn dhat2_alt(p: &DgaPresentation, c2: &CyclicElement, c1: &CyclicElement) -> Result<CyclicElement, CyclicError> {
    let (lo, hi) = hat_pair(c2, c1)?;
    let mut out = CyclicElement::zero();
    for t2 in c2.terms() {
        for t1 in c1.terms() {
            let (e2, e1) = (CyclicElement::term(t2.0, t2.1.clone()), CyclicElement::term(t1.0, t1.1.clone()));
            if t2.0.kind == ChordKind::X && long_of(&t1.0).is_some() {
                for (c, w) in cy_d(p, &[&e1])?.terms() {
                    if c.kind == ChordKind::Y {
                        out.toggle((MixedChord::x(lo, hi), cat(&[w, &t2.1])));
                    }
                }
            } else {
                out.add_assign(&mhat_d(p, &[&e2, &e1])?);
            }
        }
    }
    Ok(out)
}

/// Degree `-1` homotopy between `m̂₂` and `d̂₂`; nonzero only on `(x, γ)` inputs.
pub fn h2_homotopy(p: &DgaPresentation, c2: &CyclicElement, c1: &CyclicElement) -> Result<CyclicElement, CyclicError> {
    let (lo, hi) = hat_pair(c2, c1)?;
    let mut out = CyclicElement::zero();
    for (x, a2) in c2.terms() {
        if x.kind != ChordKind::X {
            continue;
        }
        for (g, a1) in c1.terms() {
            let Some(gamma) = long_of(g) else { continue };
            for m in &p.pointed[gamma as usize] {
                // marked word δ₁ ^ δ₂ β δ₀
                for emb in embeddings(m.word.letters(), Some(m.mark), &[Slot::Mark, Slot::Any]) {
                    let d = &emb.deltas;
                    let w = cat(&[&d[2], a1, &d[0], a2, &d[1]]);
                    out.toggle((hat_long(emb.captured[0], lo, hi), w));
                }
            }
        }
    }
    Ok(out)
}

/// Every term `c a` with `c` among `chords` and `|a| ≤ max_len`.
pub fn cyclic_basis(p: &DgaPresentation, chords: &[MixedChord], max_len: usize) -> Vec<CycTerm> {
    let words = crate::algebra::words_up_to(p.num_gens(), max_len);
    chords.iter().flat_map(|c| words.iter().map(move |w| (*c, w.clone()))).collect()
}

/// Chords of `Ĉ₊^cyc` between copies `lo < hi`.
pub fn hat_chords(p: &DgaPresentation, lo: Copy, hi: Copy) -> Vec<MixedChord> {
    let mut v: Vec<_> = (0..p.num_gens()).map(|g| hat_long(g, lo, hi)).collect();
    v.push(MixedChord::x(lo, hi));
    v
}

/// Chords of `Č₋^cyc` between copies `lo < hi`.
pub fn check_chords(p: &DgaPresentation, lo: Copy, hi: Copy) -> Vec<MixedChord> {
    let mut v: Vec<_> = (0..p.num_gens()).map(|g| check_long(g, lo, hi)).collect();
    v.push(MixedChord::y(lo, hi));
    v
}

/// Input tuples in written order `(c_d, …, c_1)` on contiguous copies `0..d`, one side per
/// slot, with total word length at most `max_total`.
pub fn basis_tuples(p: &DgaPresentation, sides: &[Side], max_total: usize) -> Vec<Vec<CycTerm>> {
    let d = sides.len();
    let slot_terms: Vec<Vec<CycTerm>> = sides
        .iter()
        .enumerate()
        .map(|(k, side)| {
            let (lo, hi) = ((d - 1 - k) as Copy, (d - k) as Copy);
            let chords = match side {
                Side::Hat => hat_chords(p, lo, hi),
                Side::Check => check_chords(p, lo, hi),
            };
            cyclic_basis(p, &chords, max_total)
        })
        .collect();
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(slots: &[Vec<CycTerm>], budget: usize, cur: &mut Vec<CycTerm>, out: &mut Vec<Vec<CycTerm>>) {
        if cur.len() == slots.len() {
            out.push(cur.clone());
            return;
        }
        for t in &slots[cur.len()] {
            if t.1.len() <= budget {
                cur.push(t.clone());
                rec(slots, budget - t.1.len(), cur, out);
                cur.pop();
            }
        }
    }
    rec(&slot_terms, max_total, &mut cur, &mut out);
    out
}

/// Copies every chord of an element into the span `(lo, hi)`.
pub fn relabel(e: &CyclicElement, lo: Copy, hi: Copy) -> CyclicElement {
    e.terms()
        .map(|(c, a)| {
            let c = match (c.kind, side_of(c)) {
                (ChordKind::Long(g), Side::Hat) => hat_long(g, lo, hi),
                (ChordKind::Long(g), Side::Check) => check_long(g, lo, hi),
                (ChordKind::X, _) => MixedChord::x(lo, hi),
                (ChordKind::Y, _) => MixedChord::y(lo, hi),
            };
            (c, a.clone())
        })
        .collect()
}

/// Identity defects. Each returns the left-hand side of a relation that must vanish,
/// evaluated on inputs in `(c_k, …, c_1)` order with contiguous copies.
pub mod relations {
    use super::*;

    type Op = fn(&DgaPresentation, &[&CyclicElement]) -> Result<CyclicElement, CyclicError>;

    /// `Σ outer(c_k, …, inner(c_{s+m}, …, c_{s+1}), c_s, …, c_1)` over all blocks,
    /// restricted to blocks for which `block_ok(start, len)` holds (start is 0-based from c_1).
    fn nested(
        p: &DgaPresentation,
        inputs: &[&CyclicElement],
        outer: Op,
        inner: Op,
        block_ok: &dyn Fn(usize, usize) -> bool,
    ) -> Result<CyclicElement, CyclicError> {
        let k = inputs.len();
        let mut out = CyclicElement::zero();
        for m in 1..=k {
            for s in 0..=(k - m) {
                if !block_ok(s, m) {
                    continue;
                }
                // written order: inputs[0] = c_k … inputs[k-1] = c_1
                let hi_idx = k - (s + m);
                let block = &inputs[hi_idx..hi_idx + m];
                let inner_val = inner(p, block)?;
                let mut args: Vec<&CyclicElement> = inputs[..hi_idx].to_vec();
                args.push(&inner_val);
                args.extend_from_slice(&inputs[hi_idx + m..]);
                out.add_assign(&outer(p, &args)?);
            }
        }
        Ok(out)
    }

    /// `Σ m̂_{k-m+1}(id ⊗ m̂_m ⊗ id)`.
    pub fn prod_inf(p: &DgaPresentation, inputs: &[&CyclicElement]) -> Result<CyclicElement, CyclicError> {
        nested(p, inputs, mhat_d, mhat_d, &|_, _| true)
    }

    /// `Σ m̌_{k-m+1}(id ⊗ m̌_m ⊗ id)`.
    pub fn mcheck_inf(p: &DgaPresentation, inputs: &[&CyclicElement]) -> Result<CyclicElement, CyclicError> {
        nested(p, inputs, mcheck_d, mcheck_d, &|_, _| true)
    }

    /// `Σ m̌_r(CY_{t_r} ⊗ … ⊗ CY_{t_1}) + Σ CY_{k-m+1}(id ⊗ m̂_m ⊗ id)`.
    pub fn fun_inf(p: &DgaPresentation, inputs: &[&CyclicElement]) -> Result<CyclicElement, CyclicError> {
        let k = inputs.len();
        let mut out = nested(p, inputs, cy_d, mhat_d, &|_, _| true)?;
        for comp in compositions(k) {
            // comp = (t_1, …, t_r), blocks from c_1 upwards
            let mut args = vec![];
            let mut end = k;
            for &t in &comp {
                args.push(cy_d(p, &inputs[end - t..end])?);
                end -= t;
            }
            args.reverse();
            let refs: Vec<&CyclicElement> = args.iter().collect();
            out.add_assign(&mcheck_d(p, &refs)?);
        }
        Ok(out)
    }

    /// Left module relation of `M` over `m̌` on `(θ_k, …, θ_2, c_1)`.
    pub fn module_inf(p: &DgaPresentation, inputs: &[&CyclicElement]) -> Result<CyclicElement, CyclicError> {
        let mut out = nested(p, inputs, module_action, mcheck_d, &|s, _| s >= 1)?;
        out.add_assign(&nested(p, inputs, module_action, module_action, &|s, _| s == 0)?);
        Ok(out)
    }

    /// `b^∨` is a morphism of left modules from `(Ĉ₊, M)` to `(Č₋, m̌)`.
    pub fn bvee_inf(p: &DgaPresentation, inputs: &[&CyclicElement]) -> Result<CyclicElement, CyclicError> {
        let k = inputs.len();
        let mut out = nested(p, inputs, bvee, mcheck_d, &|s, _| s >= 1)?;
        out.add_assign(&nested(p, inputs, bvee, module_action, &|s, _| s == 0)?);
        for s in 1..=k {
            let inner = bvee(p, &inputs[k - s..])?;
            let mut args: Vec<&CyclicElement> = inputs[..k - s].to_vec();
            args.push(&inner);
            out.add_assign(&mcheck_d(p, &args)?);
        }
        Ok(out)
    }

    /// `m̂₂ + d̂₂ + h(id ⊗ m̂₁) + h(m̂₁ ⊗ id) + m̂₁ h`.
    pub fn homotopy2(p: &DgaPresentation, c2: &CyclicElement, c1: &CyclicElement) -> Result<CyclicElement, CyclicError> {
        let mut out = mhat_d(p, &[c2, c1])?;
        out.add_assign(&dhat2_alt(p, c2, c1)?);
        out.add_assign(&h2_homotopy(p, c2, &mhat1_cyc(p, c1)?)?);
        out.add_assign(&h2_homotopy(p, &mhat1_cyc(p, c2)?, c1)?);
        out.add_assign(&mhat1_cyc(p, &h2_homotopy(p, c2, c1)?)?);
        Ok(out)
    }

    /// `CY₁ m̂₂ + m̌₂(CY₁, CY₁) + m̌₁ CY₂ + CY₂(id ⊗ m̂₁) + CY₂(m̂₁ ⊗ id)`.
    pub fn functor2(p: &DgaPresentation, c2: &CyclicElement, c1: &CyclicElement) -> Result<CyclicElement, CyclicError> {
        fun_inf(p, &[c2, c1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn aj(j: usize) -> Word {
        Word(vec![0; j])
    }

    fn t(c: MixedChord, j: usize) -> CyclicElement {
        CyclicElement::term(c, aj(j))
    }

    #[test]
    fn unknot_differentials_vanish() {
        let p = fixtures::unknot();
        for j in 0..=5 {
            assert!(mhat1_cyc(&p, &t(MixedChord::long(0, 1, 0), j)).unwrap().is_zero());
            assert!(mhat1_cyc(&p, &t(MixedChord::x(0, 1), j)).unwrap().is_zero());
            assert!(mcheck1_cyc(&p, &t(MixedChord::long(0, 0, 1), j)).unwrap().is_zero());
            assert!(mcheck1_cyc(&p, &t(MixedChord::y(0, 1), j)).unwrap().is_zero());
        }
    }

    #[test]
    fn unknot_cy1() {
        let p = fixtures::unknot();
        for j in 0..=5 {
            assert_eq!(cy_d(&p, &[&t(MixedChord::long(0, 1, 0), j)]).unwrap(), t(MixedChord::y(0, 1), j));
            assert_eq!(cy_d(&p, &[&t(MixedChord::x(0, 1), j)]).unwrap(), t(MixedChord::long(0, 0, 1), j));
        }
    }

    #[test]
    fn unknot_products() {
        let p = fixtures::unknot();
        for i in 0..3 {
            for j in 0..3 {
                let a12 = t(MixedChord::long(0, 1, 2), j);
                let y12 = t(MixedChord::y(1, 2), j);
                let a01 = t(MixedChord::long(0, 0, 1), i);
                let y01 = t(MixedChord::y(0, 1), i);
                assert_eq!(mcheck_d(&p, &[&a12, &y01]).unwrap(), t(MixedChord::long(0, 0, 2), i + j));
                assert_eq!(mcheck_d(&p, &[&y12, &a01]).unwrap(), t(MixedChord::long(0, 0, 2), i + j));
                assert_eq!(mcheck_d(&p, &[&y12, &y01]).unwrap(), t(MixedChord::y(0, 2), i + j));
                assert!(mcheck_d(&p, &[&a12, &a01]).unwrap().is_zero());

                let a21 = t(MixedChord::long(0, 2, 1), j);
                let x12 = t(MixedChord::x(1, 2), j);
                let a10 = t(MixedChord::long(0, 1, 0), i);
                let x01 = t(MixedChord::x(0, 1), i);
                assert_eq!(mhat_d(&p, &[&a21, &a10]).unwrap(), t(MixedChord::long(0, 2, 0), i + j));
                assert_eq!(mhat_d(&p, &[&a21, &x01]).unwrap(), t(MixedChord::x(0, 2), i + j));
                assert_eq!(mhat_d(&p, &[&x12, &a10]).unwrap(), t(MixedChord::x(0, 2), i + j));
                assert!(mhat_d(&p, &[&x12, &x01]).unwrap().is_zero());
                assert!(cy_d(&p, &[&a21, &a10]).unwrap().is_zero());
                assert!(cy_d(&p, &[&x12, &x01]).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn mixed_word_examples() {
        let text = "legendrian v1\ndim 1\ngen b cz 1\ngen c cz 1\n";
        let p = crate::dga::parse_presentation(text.as_bytes()).unwrap();
        let y = CyclicElement::term(MixedChord::y(0, 1), Word::one());
        assert!(mcheck1_cyc(&p, &y).unwrap().is_zero());
        let yb = CyclicElement::term(MixedChord::y(0, 1), Word::letter(0));
        let c01 = MixedChord::long(1, 0, 1);
        let expected: CyclicElement = [(c01, Word(vec![1, 0])), (c01, Word(vec![0, 1]))].into_iter().collect();
        assert_eq!(mcheck1_cyc(&p, &yb).unwrap(), expected);
    }

    #[test]
    fn internal_differential_term() {
        let text = "legendrian v1\ndim 1\ngen g cz 2\ngen a cz 2\nd a = 1\n";
        let p = crate::dga::parse_presentation(text.as_bytes()).unwrap();
        let e = CyclicElement::term(MixedChord::long(0, 1, 0), Word::letter(1));
        let out = mhat1_cyc(&p, &e).unwrap();
        assert!(out.contains(&(MixedChord::long(0, 1, 0), Word::one())));
        assert!(out.contains(&(MixedChord::x(0, 1), Word(vec![1, 0]))));
        assert!(out.contains(&(MixedChord::x(0, 1), Word(vec![0, 1]))));
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn copy_mismatch_is_rejected() {
        let p = fixtures::unknot();
        let a10 = t(MixedChord::long(0, 1, 0), 0);
        assert!(matches!(mhat_d(&p, &[&a10, &a10]), Err(CyclicError::CopyMismatch(..))));
        let y = t(MixedChord::y(0, 1), 0);
        assert!(matches!(mhat_d(&p, &[&y]), Err(CyclicError::WrongComplex(..))));
    }

    #[test]
    fn unknot_higher_products_vanish() {
        let p = fixtures::unknot();
        let hats = [hat_chords(&p, 0, 1), hat_chords(&p, 1, 2), hat_chords(&p, 2, 3), hat_chords(&p, 3, 4)];
        let checks = [check_chords(&p, 0, 1), check_chords(&p, 1, 2), check_chords(&p, 2, 3), check_chords(&p, 3, 4)];
        for arity in [3usize, 4] {
            let mut idx = vec![0usize; arity];
            loop {
                let hat_in: Vec<CyclicElement> = (0..arity).map(|k| t(hats[arity - 1 - k][idx[k]], k % 2)).collect();
                let refs: Vec<&CyclicElement> = hat_in.iter().collect();
                assert!(mhat_d(&p, &refs).unwrap().is_zero());
                let check_in: Vec<CyclicElement> = (0..arity).map(|k| t(checks[arity - 1 - k][idx[k]], k % 2)).collect();
                let refs: Vec<&CyclicElement> = check_in.iter().collect();
                assert!(mcheck_d(&p, &refs).unwrap().is_zero());
                let mut k = 0;
                while k < arity && idx[k] == 1 {
                    idx[k] = 0;
                    k += 1;
                }
                if k == arity {
                    break;
                }
                idx[k] += 1;
            }
        }
    }

    #[test]
    fn compositions_are_complete() {
        assert_eq!(compositions(3), vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]);
        assert_eq!(compositions(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn homotopy_vanishes_off_x_gamma_pairs() {
        let p = fixtures::unknot();
        let a21 = t(MixedChord::long(0, 2, 1), 0);
        let a10 = t(MixedChord::long(0, 1, 0), 0);
        assert!(h2_homotopy(&p, &a21, &a10).unwrap().is_zero());
        let x12 = t(MixedChord::x(1, 2), 1);
        assert_eq!(dhat2_alt(&p, &x12, &a10).unwrap(), t(MixedChord::x(0, 2), 1));
    }

    #[test]
    fn relabel_moves_copies() {
        let e = t(MixedChord::long(0, 1, 0), 1);
        assert_eq!(relabel(&e, 2, 3), t(MixedChord::long(0, 3, 2), 1));
    }
}
