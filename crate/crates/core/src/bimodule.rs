//! Two-copy DG-bimodules over the algebra: the resolutions `Ĉ₊` and `Č₋`, the
//! Rabinowitz complex, the Calabi-Yau map and the comparison maps between them.
//!
//! Elements are sets of triples `v₁ · c · v₀` with one mixed chord `c`. Copy 1
//! sits on the left. Shifts are not stored; each map documents its degree and
//! [`degree_contract`] checks it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Convention, Gen, TensorPoly, Word};
use crate::dga::DgaPresentation;
use crate::oracle::{self, ChordKind, MixedChord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BimoduleError {
    #[error("chord {0:?} does not belong to {1}")]
    WrongComplex(MixedChord, &'static str),
    #[error("connecting map is not a chain map: {0}")]
    NotChainMap(String),
}

pub type Triple = (Word, MixedChord, Word);

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BimoduleElement {
    terms: BTreeSet<Triple>,
}

impl BimoduleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(left: Word, c: MixedChord, right: Word) -> Self {
        let mut e = Self::zero();
        e.toggle((left, c, right));
        e
    }

    pub fn chord(c: MixedChord) -> Self {
        Self::term(Word::one(), c, Word::one())
    }

    pub fn toggle(&mut self, t: Triple) {
        if !self.terms.remove(&t) {
            self.terms.insert(t);
        }
    }

    pub fn add_assign(&mut self, other: &BimoduleElement) {
        for t in &other.terms {
            self.toggle(t.clone());
        }
    }

    pub fn add(&self, other: &BimoduleElement) -> BimoduleElement {
        BimoduleElement { terms: self.terms.symmetric_difference(&other.terms).cloned().collect() }
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

    pub fn terms(&self) -> impl Iterator<Item = &Triple> {
        self.terms.iter()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.terms.contains(t)
    }

    /// `a · self · b`
    pub fn sandwich(&self, a: &[Gen], b: &[Gen]) -> BimoduleElement {
        let mut out = Self::zero();
        for (l, c, r) in &self.terms {
            out.toggle((Word::join(&[a, l.letters()]), *c, Word::join(&[r.letters(), b])));
        }
        out
    }

    pub fn display(&self, p: &DgaPresentation) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self.terms.iter().map(|t| display_triple(p, t)).collect();
        parts.join(" + ")
    }
}

impl std::fmt::Debug for BimoduleElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.terms.iter()).finish()
    }
}

impl FromIterator<Triple> for BimoduleElement {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut e = Self::zero();
        for t in iter {
            e.toggle(t);
        }
        e
    }
}

pub fn display_triple(p: &DgaPresentation, (l, c, r): &Triple) -> String {
    let mut parts = vec![];
    if !l.is_empty() {
        parts.push(p.format_word(l.letters()));
    }
    parts.push(c.display(p));
    if !r.is_empty() {
        parts.push(p.format_word(r.letters()));
    }
    parts.join(" ")
}

/// Which complex an element lives in; fixes the grading of its chords.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Complex {
    /// `Ĉ₊`: chords `γ₁₀` and `x₀₁`.
    HatPlus,
    /// `Č₋`: chords `γ₀₁` and `y₀₁`.
    CheckMinus,
    /// The Rabinowitz complex, equivalently `Cone(CY) = Ĉ₊[-1] ⊕ Č₋`.
    Rfc,
}

pub fn is_hat_chord(c: &MixedChord) -> bool {
    match c.kind {
        ChordKind::Long(_) => c.from > c.to,
        ChordKind::X => true,
        ChordKind::Y => false,
    }
}

pub fn chord_degree(p: &DgaPresentation, c: &MixedChord, complex: Complex) -> Option<i64> {
    let ctx = p.grading();
    match complex {
        Complex::HatPlus => is_hat_chord(c).then(|| c.degree(&ctx, Convention::CHatPlus)).flatten(),
        Complex::CheckMinus => (!is_hat_chord(c)).then(|| c.degree(&ctx, Convention::CMinus)).flatten(),
        Complex::Rfc => {
            let conv = if is_hat_chord(c) { Convention::CPlus } else { Convention::CMinus };
            c.degree(&ctx, conv)
        }
    }
}

pub fn triple_degree(p: &DgaPresentation, (l, c, r): &Triple, complex: Complex) -> Option<i64> {
    Some(chord_degree(p, c, complex)? + p.word_degree(l.letters()) + p.word_degree(r.letters()))
}

/// Degree of a homogeneous element; `None` for zero or inhomogeneous elements.
pub fn element_degree(p: &DgaPresentation, e: &BimoduleElement, complex: Complex) -> Option<i64> {
    let mut degs = e.terms().map(|t| triple_degree(p, t, complex));
    let first = degs.next()??;
    degs.all(|d| d == Some(first)).then_some(first)
}

/// Checks that `out` is zero or homogeneous of degree `deg(input) + shift`.
pub fn degree_contract(
    p: &DgaPresentation,
    input: &BimoduleElement,
    from: Complex,
    output: &BimoduleElement,
    to: Complex,
    shift: i64,
) -> bool {
    if output.is_zero() {
        return true;
    }
    match (element_degree(p, input, from), element_degree(p, output, to)) {
        (Some(a), Some(b)) => b == a + shift,
        _ => false,
    }
}

/// `∂v₁ · c · v₀ + v₁ · c · ∂v₀` summed over the terms.
fn leibniz(p: &DgaPresentation, e: &BimoduleElement, out: &mut BimoduleElement) {
    for (l, c, r) in e.terms() {
        for dl in p.diff_word(l.letters()).words() {
            out.toggle((dl.clone(), *c, r.clone()));
        }
        for dr in p.diff_word(r.letters()).words() {
            out.toggle((l.clone(), *c, dr.clone()));
        }
    }
}

fn require(ok: bool, c: &MixedChord, name: &'static str) -> Result<(), BimoduleError> {
    if ok {
        Ok(())
    } else {
        Err(BimoduleError::WrongComplex(*c, name))
    }
}

fn hat_generator_diff(p: &DgaPresentation, c: &MixedChord) -> BimoduleElement {
    match c.kind {
        ChordKind::Long(g) => {
            let mut out: BimoduleElement =
                oracle::strips_d1(p, g).into_iter().map(|(u, b, v)| (u, MixedChord::long(b, 1, 0), v)).collect();
            for t in oracle::morse_banana_terms(g, 0, 1) {
                out.toggle(t);
            }
            out
        }
        _ => BimoduleElement::zero(),
    }
}

fn check_generator_diff(p: &DgaPresentation, c: &MixedChord) -> BimoduleElement {
    match c.kind {
        ChordKind::Long(g) => oracle::costrips_b1(p, g)
            .into_iter()
            .map(|(u, b, v)| (v, MixedChord::long(b, 0, 1), u))
            .collect(),
        _ => {
            let mut out = BimoduleElement::zero();
            for g in 0..p.num_gens() {
                for t in oracle::morse_y_strip_terms(g) {
                    out.toggle(t);
                }
            }
            out
        }
    }
}

/// Differential of `Ĉ₊` (degree +1).
pub fn mhat1(p: &DgaPresentation, e: &BimoduleElement) -> Result<BimoduleElement, BimoduleError> {
    let mut out = BimoduleElement::zero();
    for (l, c, r) in e.terms() {
        require(is_hat_chord(c), c, "Ĉ₊")?;
        out.add_assign(&hat_generator_diff(p, c).sandwich(l.letters(), r.letters()));
    }
    leibniz(p, e, &mut out);
    Ok(out)
}

/// Differential of `Č₋` (degree +1).
pub fn mcheck1(p: &DgaPresentation, e: &BimoduleElement) -> Result<BimoduleElement, BimoduleError> {
    let mut out = BimoduleElement::zero();
    for (l, c, r) in e.terms() {
        require(!is_hat_chord(c), c, "Č₋")?;
        out.add_assign(&check_generator_diff(p, c).sandwich(l.letters(), r.letters()));
    }
    leibniz(p, e, &mut out);
    Ok(out)
}

/// The Calabi-Yau map on a generator of `Ĉ₊`.
fn cy_generator(p: &DgaPresentation, c: &MixedChord) -> BimoduleElement {
    let mut out = BimoduleElement::zero();
    match c.kind {
        ChordKind::Long(g) => {
            for (l, b, r) in oracle::rigid_bananas(p, g) {
                out.toggle((l, MixedChord::long(b, 0, 1), r));
            }
            for (u, v) in oracle::pointed_terms(p, g) {
                out.toggle((u, MixedChord::y(0, 1), v));
            }
        }
        _ => {
            for b in 0..p.num_gens() {
                for (u, v) in oracle::pointed_terms(p, b) {
                    out.toggle((v, MixedChord::long(b, 0, 1), u));
                }
            }
        }
    }
    out
}

/// The degree 0 bimodule map `CY: Ĉ₊ → Č₋`.
pub fn cy_bimodule(p: &DgaPresentation, e: &BimoduleElement) -> Result<BimoduleElement, BimoduleError> {
    let mut out = BimoduleElement::zero();
    for (l, c, r) in e.terms() {
        require(is_hat_chord(c), c, "Ĉ₊")?;
        out.add_assign(&cy_generator(p, c).sandwich(l.letters(), r.letters()));
    }
    Ok(out)
}

/// Differential of the Rabinowitz complex written as the lower triangular matrix
/// `[[Δ₁, 0], [b⁻⁺, b⁻⁻]]` on `C₊ ⊕ C₋`, where `C₊` holds the chords `γ₁₀` and
/// `C₋` holds `γ₀₁`, `x₀₁`, `y₀₁`. Each block is assembled from the oracles.
pub fn rfc_diff(p: &DgaPresentation, e: &BimoduleElement) -> BimoduleElement {
    let mut out = BimoduleElement::zero();
    for (l, c, r) in e.terms() {
        let mut img = BimoduleElement::zero();
        match c.kind {
            ChordKind::Long(g) if c.from > c.to => {
                // Δ₁⁺⁺
                for (u, b, v) in oracle::strips_d1(p, g) {
                    img.toggle((u, MixedChord::long(b, 1, 0), v));
                }
                // b⁻⁺: Morse bananas, long bananas and marked y-bananas
                for t in oracle::morse_banana_terms(g, 0, 1) {
                    img.toggle(t);
                }
                for (l, b, r) in oracle::rigid_bananas(p, g) {
                    img.toggle((l, MixedChord::long(b, 0, 1), r));
                }
                for (u, v) in oracle::pointed_terms(p, g) {
                    img.toggle((u, MixedChord::y(0, 1), v));
                }
            }
            ChordKind::Long(g) => {
                for (u, b, v) in oracle::costrips_b1(p, g) {
                    img.toggle((v, MixedChord::long(b, 0, 1), u));
                }
            }
            ChordKind::X => {
                for b in 0..p.num_gens() {
                    for (u, v) in oracle::pointed_terms(p, b) {
                        img.toggle((v, MixedChord::long(b, 0, 1), u));
                    }
                }
            }
            ChordKind::Y => {
                for g in 0..p.num_gens() {
                    for t in oracle::morse_y_strip_terms(g) {
                        img.toggle(t);
                    }
                }
            }
        }
        out.add_assign(&img.sandwich(l.letters(), r.letters()));
    }
    leibniz(p, e, &mut out);
    out
}

/// A complex given by a chord predicate and a differential.
pub struct ChainComplex<'a> {
    pub name: &'static str,
    pub contains: Box<dyn Fn(&MixedChord) -> bool + Send + Sync + 'a>,
    pub diff: Box<dyn Fn(&BimoduleElement) -> BimoduleElement + Send + Sync + 'a>,
}

pub type ChainMap<'a> = Box<dyn Fn(&BimoduleElement) -> BimoduleElement + Send + Sync + 'a>;

/// `Cone(f) = source[-1] ⊕ target` with differential `(s, t) ↦ (d s, f s + d t)`.
pub struct ConeComplex<'a> {
    pub source: ChainComplex<'a>,
    pub target: ChainComplex<'a>,
    pub map: ChainMap<'a>,
}

impl<'a> ConeComplex<'a> {
    pub fn split(&self, e: &BimoduleElement) -> (BimoduleElement, BimoduleElement) {
        let mut s = BimoduleElement::zero();
        let mut t = BimoduleElement::zero();
        for term in e.terms() {
            if (self.source.contains)(&term.1) {
                s.toggle(term.clone());
            } else {
                t.toggle(term.clone());
            }
        }
        (s, t)
    }

    pub fn diff(&self, e: &BimoduleElement) -> BimoduleElement {
        let (s, t) = self.split(e);
        let mut out = (self.source.diff)(&s);
        out.add_assign(&(self.map)(&s));
        out.add_assign(&(self.target.diff)(&t));
        out
    }
}

/// Checks `f ∘ d + d ∘ f = 0` on `test_set`, returning the first failing input.
pub fn chain_map_failure(
    source: &ChainComplex<'_>,
    target: &ChainComplex<'_>,
    map: &ChainMap<'_>,
    test_set: &[BimoduleElement],
) -> Option<BimoduleElement> {
    test_set
        .iter()
        .find(|e| !map(&(source.diff)(e)).add(&(target.diff)(&map(e))).is_zero())
        .cloned()
}

/// Builds the cone after verifying the chain-map property on `test_set`.
pub fn cone<'a>(
    source: ChainComplex<'a>,
    target: ChainComplex<'a>,
    map: ChainMap<'a>,
    test_set: &[BimoduleElement],
) -> Result<ConeComplex<'a>, BimoduleError> {
    if let Some(bad) = chain_map_failure(&source, &target, &map, test_set) {
        return Err(BimoduleError::NotChainMap(format!("{bad:?}")));
    }
    Ok(ConeComplex { source, target, map })
}

pub fn hat_complex(p: &DgaPresentation) -> ChainComplex<'_> {
    ChainComplex {
        name: "Ĉ₊",
        contains: Box::new(is_hat_chord),
        diff: Box::new(move |e| mhat1(p, e).expect("element of Ĉ₊")),
    }
}

pub fn check_complex(p: &DgaPresentation) -> ChainComplex<'_> {
    ChainComplex {
        name: "Č₋",
        contains: Box::new(|c| !is_hat_chord(c)),
        diff: Box::new(move |e| mcheck1(p, e).expect("element of Č₋")),
    }
}

/// `Cone(CY)`, verified on `test_set`.
pub fn cone_cy<'a>(p: &'a DgaPresentation, test_set: &[BimoduleElement]) -> Result<ConeComplex<'a>, BimoduleError> {
    cone(hat_complex(p), check_complex(p), Box::new(move |e| cy_bimodule(p, e).expect("element of Ĉ₊")), test_set)
}

/// The comparison map `ν: Cone(CY) → RFC`, the identity on chords.
pub fn nu(e: &BimoduleElement) -> BimoduleElement {
    e.clone()
}

/// Element of `Cone(F)` for `F: Ĉ₊[-n-1] → A`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeFElement {
    pub hat: BimoduleElement,
    pub alg: TensorPoly,
}

impl ConeFElement {
    pub fn add(&self, o: &ConeFElement) -> ConeFElement {
        ConeFElement { hat: self.hat.add(&o.hat), alg: self.alg.add(&o.alg) }
    }

    pub fn is_zero(&self) -> bool {
        self.hat.is_zero() && self.alg.is_zero()
    }
}

/// The augmentation `F(v₁ x₀₁ v₀) = v₁ v₀`, zero on long chords.
pub fn f_map(e: &BimoduleElement) -> TensorPoly {
    let mut out = TensorPoly::zero();
    for (l, c, r) in e.terms() {
        if c.kind == ChordKind::X {
            out.toggle(l.concat(r));
        }
    }
    out
}

pub fn cone_f_diff(p: &DgaPresentation, e: &ConeFElement) -> ConeFElement {
    let mut alg = p.base_diff(&e.alg).expect("declared generators");
    alg += &f_map(&e.hat);
    ConeFElement { hat: mhat1(p, &e.hat).expect("element of Ĉ₊"), alg }
}

/// Contracting homotopy of `Cone(F)`: `h(w x₀₁ v) = Σⱼ w¹…(wʲ)₁₀…wᵏ v`, `h(a) = x₀₁ a`,
/// zero on long chords.
pub fn h_homotopy(e: &ConeFElement) -> ConeFElement {
    let mut hat = BimoduleElement::zero();
    for (l, c, r) in e.hat.terms() {
        if c.kind != ChordKind::X {
            continue;
        }
        let w = l.letters();
        for j in 0..w.len() {
            hat.toggle((Word(w[..j].to_vec()), MixedChord::long(w[j], 1, 0), Word::join(&[&w[j + 1..], r.letters()])));
        }
    }
    for a in e.alg.words() {
        hat.toggle((Word::one(), MixedChord::x(0, 1), a.clone()));
    }
    ConeFElement { hat, alg: TensorPoly::zero() }
}

/// An element of `A ⊗ A`.
pub type TensorSquare = BTreeSet<(Word, Word)>;

fn toggle_pair(s: &mut TensorSquare, t: (Word, Word)) {
    if !s.remove(&t) {
        s.insert(t);
    }
}

/// A bimodule map into `A ⊗ A` (outer structure on the source side), recorded on
/// free generators. As an element of the Hom bimodule it is acted on through the
/// inner structure: `(a · φ · b)(c) = {(p b, a q)}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MorphismTable {
    pub values: BTreeMap<MixedChord, TensorSquare>,
}

impl MorphismTable {
    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_empty())
    }

    fn toggle(&mut self, c: MixedChord, t: (Word, Word)) {
        let slot = self.values.entry(c).or_default();
        toggle_pair(slot, t);
        if slot.is_empty() {
            self.values.remove(&c);
        }
    }

    pub fn add(&self, o: &MorphismTable) -> MorphismTable {
        let mut out = self.clone();
        for (c, s) in &o.values {
            for t in s {
                out.toggle(*c, t.clone());
            }
        }
        out
    }

    pub fn at(&self, c: &MixedChord) -> TensorSquare {
        self.values.get(c).cloned().unwrap_or_default()
    }

    /// `φ(v₁ c v₀) = v₁ · φ(c) · v₀` with the outer action `(p, q) ↦ (v₁ p, q v₀)`.
    pub fn eval(&self, e: &BimoduleElement) -> TensorSquare {
        let mut out = TensorSquare::new();
        for (l, c, r) in e.terms() {
            if let Some(vals) = self.values.get(c) {
                for (a, b) in vals {
                    toggle_pair(&mut out, (l.concat(a), b.concat(r)));
                }
            }
        }
        out
    }
}

/// `(∂ ⊗ 1 + 1 ⊗ ∂)` on `A ⊗ A`.
pub fn diff_tensor_square(p: &DgaPresentation, s: &TensorSquare) -> TensorSquare {
    let mut out = TensorSquare::new();
    for (a, b) in s {
        for da in p.diff_word(a.letters()).words() {
            toggle_pair(&mut out, (da.clone(), b.clone()));
        }
        for db in p.diff_word(b.letters()).words() {
            toggle_pair(&mut out, (a.clone(), db.clone()));
        }
    }
    out
}

pub fn hat_generators(p: &DgaPresentation) -> Vec<MixedChord> {
    let mut v: Vec<_> = (0..p.num_gens()).map(|g| MixedChord::long(g, 1, 0)).collect();
    v.push(MixedChord::x(0, 1));
    v
}

pub fn check_generators(p: &DgaPresentation) -> Vec<MixedChord> {
    let mut v: Vec<_> = (0..p.num_gens()).map(|g| MixedChord::long(g, 0, 1)).collect();
    v.push(MixedChord::y(0, 1));
    v
}

/// Hom differential `D(φ) = φ ∘ d + ∂_{A⊗A} ∘ φ` for tables on the generators `gens`.
pub fn hom_diff(
    p: &DgaPresentation,
    phi: &MorphismTable,
    gens: &[MixedChord],
    d: impl Fn(&BimoduleElement) -> BimoduleElement,
) -> MorphismTable {
    let mut out = MorphismTable::default();
    for c in gens {
        let mut v = phi.eval(&d(&BimoduleElement::chord(*c)));
        for t in diff_tensor_square(p, &phi.at(c)) {
            toggle_pair(&mut v, t);
        }
        for t in v {
            out.toggle(*c, t);
        }
    }
    out
}

/// `w · c · v ↦ w · φ_c · v`, where `φ_c` sends the dual generator `dual(c)` to `1 ⊗ 1`.
fn dualize(e: &BimoduleElement, dual: impl Fn(&MixedChord) -> MixedChord) -> MorphismTable {
    let mut out = MorphismTable::default();
    for (l, c, r) in e.terms() {
        out.toggle(dual(c), (r.clone(), l.clone()));
    }
    out
}

fn swap_copies(c: &MixedChord) -> MixedChord {
    match c.kind {
        ChordKind::Long(g) => MixedChord::long(g, c.to, c.from),
        ChordKind::X => MixedChord::y(c.from, c.to),
        ChordKind::Y => MixedChord::x(c.from, c.to),
    }
}

/// `G: Č₋ → Hom(Ĉ₊, A ⊗ A)`, `G(γ₀₁) = φ_γ` with `φ_γ(γ₁₀) = 1 ⊗ 1`, `G(y₀₁)(x₀₁) = 1 ⊗ 1`.
pub fn g_map(e: &BimoduleElement) -> MorphismTable {
    dualize(e, swap_copies)
}

/// Inverse of [`g_map`].
pub fn g_inv(phi: &MorphismTable) -> BimoduleElement {
    let mut out = BimoduleElement::zero();
    for (c, vals) in &phi.values {
        for (a, b) in vals {
            out.toggle((b.clone(), swap_copies(c), a.clone()));
        }
    }
    out
}

/// `H: Ĉ₊ → Hom(Č₋, A ⊗ A)`, `H(γ₁₀) = φ_γ` with `φ_γ(γ₀₁) = 1 ⊗ 1`, `H(x₀₁)(y₀₁) = 1 ⊗ 1`.
pub fn h_map(e: &BimoduleElement) -> MorphismTable {
    dualize(e, swap_copies)
}

/// `CY^!(φ) = φ ∘ CY`, a table on the generators of `Ĉ₊`.
pub fn cy_dual(p: &DgaPresentation, phi: &MorphismTable, cy: &dyn Fn(&BimoduleElement) -> BimoduleElement) -> MorphismTable {
    let mut out = MorphismTable::default();
    for c in hat_generators(p) {
        for t in phi.eval(&cy(&BimoduleElement::chord(c))) {
            out.toggle(c, t);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityEntry {
    pub generator: String,
    pub identity: &'static str,
    pub passed: bool,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub entries: Vec<DualityEntry>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// Compares `G⁻¹ ∘ CY^! ∘ H` with `CY` on every generator of `Ĉ₊`.
pub fn verify_cy_self_duality(p: &DgaPresentation) -> DualityReport {
    verify_cy_self_duality_with(p, &|e| cy_bimodule(p, e).expect("element of Ĉ₊"))
}

/// Same check against an arbitrary candidate for `CY`.
pub fn verify_cy_self_duality_with(p: &DgaPresentation, cy: &dyn Fn(&BimoduleElement) -> BimoduleElement) -> DualityReport {
    let entries = hat_generators(p)
        .into_iter()
        .map(|c| {
            let e = BimoduleElement::chord(c);
            let lhs = g_inv(&cy_dual(p, &h_map(&e), cy));
            let rhs = cy(&e);
            let identity = match c.kind {
                ChordKind::X => "marked strips through x equal marked y-bananas",
                _ => "banana symmetry and marked y-bananas",
            };
            DualityEntry {
                generator: c.display(p),
                identity,
                passed: lhs == rhs,
                expected: rhs.display(p),
                found: lhs.display(p),
            }
        })
        .collect();
    DualityReport { entries }
}

/// Orders the generators of `Ĉ₊` so that the differential of each one only
/// involves earlier generators. `None` if no such order exists.
pub fn semifree_order(p: &DgaPresentation) -> Option<Vec<MixedChord>> {
    let gens = hat_generators(p);
    let deps: Vec<BTreeSet<MixedChord>> = gens
        .iter()
        .map(|c| hat_generator_diff(p, c).terms().map(|t| t.1).filter(|d| d != c).collect())
        .collect();
    if gens.iter().zip(&deps).any(|(c, _)| hat_generator_diff(p, c).terms().any(|t| t.1 == *c)) {
        return None;
    }
    let mut placed: BTreeSet<MixedChord> = BTreeSet::new();
    let mut order = vec![];
    while order.len() < gens.len() {
        let next = gens.iter().zip(&deps).find(|(c, d)| !placed.contains(c) && d.iter().all(|x| placed.contains(x)))?;
        placed.insert(*next.0);
        order.push(*next.0);
    }
    Some(order)
}

/// All terms `w₁ · c · w₀` with `c` among `chords` and `|w₁| + |w₀| ≤ max_len`.
pub fn basis_up_to(p: &DgaPresentation, chords: &[MixedChord], max_len: usize) -> Vec<BimoduleElement> {
    let words = crate::algebra::words_up_to(p.num_gens(), max_len);
    let mut out = vec![];
    for c in chords {
        for l in &words {
            for r in &words {
                if l.len() + r.len() <= max_len {
                    out.push(BimoduleElement::term(l.clone(), *c, r.clone()));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn a10() -> MixedChord {
        MixedChord::long(0, 1, 0)
    }

    fn a() -> Word {
        Word::letter(0)
    }

    #[test]
    fn unknot_mhat1_on_generators() {
        let p = fixtures::unknot();
        let expected: BimoduleElement =
            [(Word::one(), MixedChord::x(0, 1), a()), (a(), MixedChord::x(0, 1), Word::one())].into_iter().collect();
        assert_eq!(mhat1(&p, &BimoduleElement::chord(a10())).unwrap(), expected);
        assert!(mhat1(&p, &BimoduleElement::chord(MixedChord::x(0, 1))).unwrap().is_zero());
        assert!(mhat1(&p, &BimoduleElement::chord(MixedChord::y(0, 1))).is_err());
    }

    #[test]
    fn morse_generator_obeys_leibniz() {
        let p = fixtures::trefoil();
        let (b1, a1) = (p.find("b1").unwrap(), p.find("a1").unwrap());
        let e = BimoduleElement::term(Word::letter(a1), MixedChord::x(0, 1), Word::letter(b1));
        let mut expected = BimoduleElement::zero();
        for m in p.diff[a1 as usize].words() {
            expected.toggle((m.clone(), MixedChord::x(0, 1), Word::letter(b1)));
        }
        assert_eq!(mhat1(&p, &e).unwrap(), expected);
    }

    #[test]
    fn unknot_mcheck1_on_generators() {
        let p = fixtures::unknot();
        assert!(mcheck1(&p, &BimoduleElement::chord(MixedChord::long(0, 0, 1))).unwrap().is_zero());
        let expected: BimoduleElement =
            [(a(), MixedChord::long(0, 0, 1), Word::one()), (Word::one(), MixedChord::long(0, 0, 1), a())]
                .into_iter()
                .collect();
        assert_eq!(mcheck1(&p, &BimoduleElement::chord(MixedChord::y(0, 1))).unwrap(), expected);
    }

    #[test]
    fn unknot_cy_values() {
        let p = fixtures::unknot();
        assert_eq!(cy_bimodule(&p, &BimoduleElement::chord(a10())).unwrap(), BimoduleElement::chord(MixedChord::y(0, 1)));
        assert_eq!(
            cy_bimodule(&p, &BimoduleElement::chord(MixedChord::x(0, 1))).unwrap(),
            BimoduleElement::chord(MixedChord::long(0, 0, 1))
        );
        assert!(cy_bimodule(&fixtures::trefoil(), &BimoduleElement::chord(a10())).unwrap().is_zero());
    }

    #[test]
    fn unknot_rfc_diff_of_long_chord() {
        let p = fixtures::unknot();
        let img = rfc_diff(&p, &BimoduleElement::chord(a10()));
        assert!(img.contains(&(Word::one(), MixedChord::y(0, 1), Word::one())));
        assert_eq!(img.len(), 3);
    }

    #[test]
    fn cone_of_zero_map_is_direct_sum() {
        let p = fixtures::trefoil();
        let basis = basis_up_to(&p, &hat_generators(&p), 1);
        let c = cone(hat_complex(&p), check_complex(&p), Box::new(|_| BimoduleElement::zero()), &basis).unwrap();
        for e in basis_up_to(&p, &check_generators(&p), 1) {
            assert_eq!(c.diff(&e), mcheck1(&p, &e).unwrap());
        }
    }

    #[test]
    fn cone_rejects_non_chain_maps() {
        let p = fixtures::unknot();
        let basis = basis_up_to(&p, &hat_generators(&p), 1);
        // The identity on chords from Ĉ₊ into Č₋ after swapping copies is not a chain map.
        let swap = |e: &BimoduleElement| e.terms().map(|(l, c, r)| (l.clone(), swap_copies(c), r.clone())).collect();
        let r = cone(hat_complex(&p), check_complex(&p), Box::new(swap), &basis);
        assert!(matches!(r, Err(BimoduleError::NotChainMap(_))));
    }

    #[test]
    fn f_and_h_examples() {
        let p = fixtures::trefoil();
        let (b, c) = (p.find("b1").unwrap(), p.find("b2").unwrap());
        let e = BimoduleElement::term(Word::letter(b), MixedChord::long(c, 1, 0), Word::one());
        assert!(f_map(&e).is_zero());
        let h = h_homotopy(&ConeFElement { hat: BimoduleElement::zero(), alg: TensorPoly::from_word(Word::letter(b)) });
        assert_eq!(h.hat, BimoduleElement::term(Word::one(), MixedChord::x(0, 1), Word::letter(b)));
        let e = ConeFElement {
            hat: BimoduleElement::term(Word::letter(b), MixedChord::x(0, 1), Word::letter(c)),
            alg: TensorPoly::zero(),
        };
        let back = cone_f_diff(&p, &h_homotopy(&e)).add(&h_homotopy(&cone_f_diff(&p, &e)));
        assert_eq!(back, e);
    }

    #[test]
    fn g_on_y_and_its_differential() {
        let p = fixtures::trefoil();
        let phi = g_map(&BimoduleElement::chord(MixedChord::y(0, 1)));
        let one = (Word::one(), Word::one());
        assert_eq!(phi.at(&MixedChord::x(0, 1)), [one].into());
        let g = p.find("a1").unwrap();
        assert!(phi.at(&MixedChord::long(g, 1, 0)).is_empty());
        let d = hom_diff(&p, &phi, &hat_generators(&p), |e| mhat1(&p, e).unwrap());
        let expected: TensorSquare = [(Word::letter(g), Word::one()), (Word::one(), Word::letter(g))].into();
        assert_eq!(d.at(&MixedChord::long(g, 1, 0)), expected);
    }

    #[test]
    fn g_inverse_round_trip() {
        let p = fixtures::trefoil();
        for e in basis_up_to(&p, &check_generators(&p), 2) {
            assert_eq!(g_inv(&g_map(&e)), e);
        }
    }

    #[test]
    fn unknot_is_self_dual() {
        assert!(verify_cy_self_duality(&fixtures::unknot()).passed());
    }

    #[test]
    fn asymmetric_cy_is_caught() {
        let p = fixtures::unknot();
        let fake = |e: &BimoduleElement| {
            let mut out = cy_bimodule(&p, e).unwrap();
            if e.terms().any(|t| t.1.kind == ChordKind::X) {
                out.add_assign(&BimoduleElement::term(a(), MixedChord::long(0, 0, 1), Word::one()));
            }
            out
        };
        let r = verify_cy_self_duality_with(&p, &fake);
        assert!(!r.passed());
        let x = r.entries.iter().find(|e| e.generator == "x_01").unwrap();
        assert!(!x.passed);
        assert!(x.expected.contains("a a_01"));
    }

    #[test]
    fn trefoil_semifree_order() {
        let p = fixtures::trefoil();
        let order = semifree_order(&p).unwrap();
        assert_eq!(order[0], MixedChord::x(0, 1));
        for (i, c) in order.iter().enumerate() {
            for t in hat_generator_diff(&p, c).terms() {
                assert!(order[..i].contains(&t.1));
            }
        }
    }

    #[test]
    fn degrees_on_the_unknot() {
        let p = fixtures::unknot();
        assert_eq!(chord_degree(&p, &a10(), Complex::HatPlus), Some(0));
        assert_eq!(chord_degree(&p, &MixedChord::x(0, 1), Complex::HatPlus), Some(2));
        assert_eq!(chord_degree(&p, &MixedChord::long(0, 0, 1), Complex::CheckMinus), Some(2));
        assert_eq!(chord_degree(&p, &MixedChord::y(0, 1), Complex::CheckMinus), Some(0));
        assert_eq!(chord_degree(&p, &MixedChord::x(0, 1), Complex::Rfc), Some(1));
    }
}
