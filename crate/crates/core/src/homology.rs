//! Exact GF(2) linear algebra on finite slices of the cyclic complexes.
//!
//! A slice keeps every basis element of degree in `[d₀ - 1, d₁]` with word length
//! at most `L`. The extra bottom degree makes the image into `d₀` complete. Basis
//! vectors whose differential leaves the length bound are flagged, and homology
//! is only reported as reliable in degrees that avoid flagged vectors.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclic::{self, CycTerm, CyclicElement};
use crate::dga::DgaPresentation;

pub const DEFAULT_BASIS_CAP: usize = 200_000;

/// Slice size cap, overridable through `CE_CALABI_BASIS_CAP`.
pub fn basis_cap() -> usize {
    std::env::var("CE_CALABI_BASIS_CAP").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_BASIS_CAP)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("slice would enumerate {size} candidates, above the cap of {cap}")]
    BasisCap { size: usize, cap: usize },
    #[error("empty degree window {0}:{1}")]
    EmptyWindow(i64, i64),
}

/// Column-major sparse matrix over GF(2); each column is a sorted list of row indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseGf2Matrix {
    rows: usize,
    cols: Vec<Vec<usize>>,
}

fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl SparseGf2Matrix {
    pub fn new(rows: usize) -> Self {
        Self { rows, cols: vec![] }
    }

    /// Appends a column given by the rows where it is 1; repeated rows cancel.
    pub fn push_col(&mut self, mut entries: Vec<usize>) {
        entries.sort_unstable();
        let mut col: Vec<usize> = Vec::with_capacity(entries.len());
        for r in entries {
            assert!(r < self.rows, "row {r} out of range");
            if col.last() == Some(&r) {
                col.pop();
            } else {
                col.push(r);
            }
        }
        self.cols.push(col);
    }

    pub fn from_dense(rows: &[Vec<bool>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::new(nrows);
        for j in 0..ncols {
            m.push_col(rows.iter().enumerate().filter(|(_, r)| r[j]).map(|(i, _)| i).collect());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.cols[j].binary_search(&i).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// Column reduction with the largest row index as pivot, in column order.
    pub fn rank(&self) -> usize {
        let mut pivots: HashMap<usize, Vec<usize>> = HashMap::new();
        for col in &self.cols {
            let mut c = col.clone();
            while let Some(&low) = c.last() {
                match pivots.get(&low) {
                    Some(p) => c = xor_sorted(&c, p),
                    None => {
                        pivots.insert(low, c);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }

    /// Dense row reduction, kept deliberately simple as a cross-check for `rank`.
    pub fn naive_rank(&self) -> usize {
        let mut m: Vec<Vec<bool>> = (0..self.rows).map(|i| (0..self.ncols()).map(|j| self.entry(i, j)).collect()).collect();
        let mut rank = 0;
        for j in 0..self.ncols() {
            let Some(piv) = (rank..self.rows).find(|&i| m[i][j]) else { continue };
            m.swap(rank, piv);
            let pivot = m[rank].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != rank && row[j] {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= *y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Which cyclic complex a slice is taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SliceComplex {
    /// `Ĉ₊^cyc` with `m̂₁`.
    HatPlus,
    /// `Č₋^cyc` with `m̌₁`.
    CheckMinus,
    /// `Cone(CY₁) = Ĉ₊^cyc[-1] ⊕ Č₋^cyc`.
    ConeCy,
}

/// A basis element of a slice; `shifted` marks the `Ĉ₊[-1]` summand of the cone.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SliceGen {
    pub shifted: bool,
    #[serde(skip)]
    pub term: CycTerm,
}

#[derive(Clone, Debug)]
pub struct ComplexSlice {
    pub complex: SliceComplex,
    pub window: (i64, i64),
    pub max_len: usize,
    /// Sorted by degree, then by element.
    pub basis: Vec<SliceGen>,
    pub degrees: Vec<i64>,
    /// Row `i` of the matrix is `targets[i]`; it starts with the basis itself.
    pub targets: Vec<SliceGen>,
    /// Column `j` is the differential of `basis[j]`.
    pub matrix: SparseGf2Matrix,
    /// `leaked[j]` holds when the differential of `basis[j]` leaves the slice.
    pub leaked: Vec<bool>,
    /// Whether the differential can shorten words, so longer elements may hit the slice.
    pub shrinking: bool,
}

fn gen_degree(p: &DgaPresentation, g: &SliceGen) -> i64 {
    cyclic::term_degree(p, &g.term).expect("cyclic terms are graded") - g.shifted as i64
}

fn slice_diff(p: &DgaPresentation, complex: SliceComplex, g: &SliceGen) -> Vec<SliceGen> {
    let e = CyclicElement::term(g.term.0, g.term.1.clone());
    let wrap = |e: CyclicElement, shifted: bool| e.terms().map(|t| SliceGen { shifted, term: t.clone() }).collect::<Vec<_>>();
    match (complex, g.shifted) {
        (SliceComplex::HatPlus, _) => wrap(cyclic::mhat1_cyc(p, &e).unwrap(), false),
        (SliceComplex::CheckMinus, _) | (SliceComplex::ConeCy, false) => wrap(cyclic::mcheck1_cyc(p, &e).unwrap(), false),
        (SliceComplex::ConeCy, true) => {
            let mut v = wrap(cyclic::mhat1_cyc(p, &e).unwrap(), true);
            v.extend(wrap(cyclic::cy_d(p, &[&e]).unwrap(), false));
            v
        }
    }
}

/// Whether some differential contains the empty word.
pub fn can_shrink(p: &DgaPresentation) -> bool {
    p.diff.iter().any(|d| d.words().any(|w| w.is_empty()))
}

/// Builds the slice of `complex` with degrees in `window` and words of length at most `max_len`.
pub fn assemble_slice(p: &DgaPresentation, complex: SliceComplex, window: (i64, i64), max_len: usize) -> Result<ComplexSlice, HomologyError> {
    assemble_slice_capped(p, complex, window, max_len, basis_cap())
}

pub fn assemble_slice_capped(
    p: &DgaPresentation,
    complex: SliceComplex,
    window: (i64, i64),
    max_len: usize,
    cap: usize,
) -> Result<ComplexSlice, HomologyError> {
    let (d0, d1) = window;
    if d0 > d1 {
        return Err(HomologyError::EmptyWindow(d0, d1));
    }
    let g = p.num_gens() as usize;
    let words: usize = (0..=max_len).map(|l| g.saturating_pow(l as u32)).fold(0, usize::saturating_add);
    let chords = g + 1;
    let summands = if complex == SliceComplex::ConeCy { 2 } else { 1 };
    let size = words.saturating_mul(chords).saturating_mul(summands);
    if size > cap {
        return Err(HomologyError::BasisCap { size, cap });
    }

    let mut candidates: Vec<SliceGen> = vec![];
    let hat = cyclic::cyclic_basis(p, &cyclic::hat_chords(p, 0, 1), max_len);
    let check = cyclic::cyclic_basis(p, &cyclic::check_chords(p, 0, 1), max_len);
    match complex {
        SliceComplex::HatPlus => candidates.extend(hat.into_iter().map(|term| SliceGen { shifted: false, term })),
        SliceComplex::CheckMinus => candidates.extend(check.into_iter().map(|term| SliceGen { shifted: false, term })),
        SliceComplex::ConeCy => {
            candidates.extend(hat.into_iter().map(|term| SliceGen { shifted: true, term }));
            candidates.extend(check.into_iter().map(|term| SliceGen { shifted: false, term }));
        }
    }
    let mut basis: Vec<(i64, SliceGen)> = candidates
        .into_iter()
        .map(|s| (gen_degree(p, &s), s))
        .filter(|(d, _)| (d0 - 1..=d1).contains(d))
        .collect();
    basis.sort();
    let degrees: Vec<i64> = basis.iter().map(|(d, _)| *d).collect();
    let basis: Vec<SliceGen> = basis.into_iter().map(|(_, s)| s).collect();

    let images: Vec<Vec<SliceGen>> = basis.par_iter().map(|s| slice_diff(p, complex, s)).collect();
    let mut index: HashMap<SliceGen, usize> = basis.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut targets = basis.clone();
    let mut leaked = vec![false; basis.len()];
    let mut cols = vec![];
    for (j, img) in images.into_iter().enumerate() {
        let mut col = vec![];
        for t in img {
            if t.term.1.len() > max_len {
                leaked[j] = true;
            }
            let next = targets.len();
            let i = *index.entry(t.clone()).or_insert_with(|| {
                targets.push(t);
                next
            });
            col.push(i);
        }
        cols.push(col);
    }
    let mut matrix = SparseGf2Matrix::new(targets.len());
    for c in cols {
        matrix.push_col(c);
    }
    Ok(ComplexSlice { complex, window, max_len, basis, degrees, targets, matrix, leaked, shrinking: can_shrink(p) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyDims {
    pub window: (i64, i64),
    pub dims: BTreeMap<i64, usize>,
    pub masked_degrees: Vec<i64>,
}

impl ComplexSlice {
    fn columns_in_degree(&self, d: i64) -> std::ops::Range<usize> {
        let lo = self.degrees.partition_point(|&x| x < d);
        let hi = self.degrees.partition_point(|&x| x <= d);
        lo..hi
    }

    /// The differential restricted to basis elements of degree `d`.
    pub fn block(&self, d: i64) -> SparseGf2Matrix {
        let mut m = SparseGf2Matrix::new(self.matrix.nrows());
        for j in self.columns_in_degree(d) {
            m.cols.push(self.matrix.cols[j].clone());
        }
        m
    }

    pub fn count_in_degree(&self, d: i64) -> usize {
        self.columns_in_degree(d).len()
    }

    fn leaks_in_degree(&self, d: i64) -> bool {
        self.columns_in_degree(d).any(|j| self.leaked[j])
    }
}

/// `dim ker - rank im` per degree of the window, with unreliable degrees masked.
pub fn homology_dims(slice: &ComplexSlice) -> HomologyDims {
    let (d0, d1) = slice.window;
    let ranks: BTreeMap<i64, usize> = (d0 - 1..=d1).collect::<Vec<_>>().into_par_iter().map(|d| (d, slice.block(d).rank())).collect();
    let mut dims = BTreeMap::new();
    let mut masked = vec![];
    for d in d0..=d1 {
        let n = slice.count_in_degree(d);
        // Leaked images can overcount the rank; such degrees are masked below.
        dims.insert(d, (n - ranks[&d]).saturating_sub(ranks[&(d - 1)]));
        if slice.shrinking || slice.leaks_in_degree(d) || slice.leaks_in_degree(d - 1) {
            masked.push(d);
        }
    }
    HomologyDims { window: slice.window, dims, masked_degrees: masked }
}

/// Result of checking an identity over a finite test set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub cases: usize,
    /// The first failing case in test-set order and its defect.
    pub counterexample: Option<String>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks `lhs(t) == rhs(t)` for every `t`, in parallel. The reported counterexample is
/// the first failure in the order of `tests`, so sorting tests by size makes it minimal.
pub fn verify_identity<T, E, L, R, S>(tests: &[T], lhs: L, rhs: R, show: S) -> IdentityOutcome
where
    T: Sync,
    E: PartialEq + Send,
    L: Fn(&T) -> E + Sync,
    R: Fn(&T) -> E + Sync,
    S: Fn(&T, &E, &E) -> String + Sync,
{
    let counterexample = tests.par_iter().find_map_first(|t| {
        let (l, r) = (lhs(t), rhs(t));
        (l != r).then(|| show(t, &l, &r))
    });
    IdentityOutcome { cases: tests.len(), counterexample }
}

/// A relation whose left-hand side must vanish on input tuples.
pub type Relation = fn(&DgaPresentation, &[&CyclicElement]) -> Result<CyclicElement, cyclic::CyclicError>;

/// Checks `rel` on all basis tuples of the given sides with total word length at most `max_len`.
pub fn verify_relation(p: &DgaPresentation, sides: &[cyclic::Side], max_len: usize, rel: Relation) -> IdentityOutcome {
    let mut tuples = cyclic::basis_tuples(p, sides, max_len);
    tuples.sort_by_key(|t| t.iter().map(|(_, a)| a.len()).sum::<usize>());
    let zero = CyclicElement::zero();
    verify_identity(
        &tuples,
        |t| {
            let elems: Vec<CyclicElement> = t.iter().map(|(c, a)| CyclicElement::term(*c, a.clone())).collect();
            let refs: Vec<&CyclicElement> = elems.iter().collect();
            rel(p, &refs).unwrap_or_else(|e| panic!("relation evaluation failed: {e}"))
        },
        |_| zero.clone(),
        |t, l, _| {
            let ins: Vec<String> = t.iter().map(|x| cyclic::display_term(p, x)).collect();
            format!("({}) ↦ {}", ins.join(", "), l.display(p))
        },
    )
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("presentation fails validation: {0}")]
    InvalidPresentation(String),
    #[error("k_max must be at least 1")]
    ZeroArity,
}

/// A named A∞ check result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AinftyOutcome {
    pub check: String,
    pub outcome: IdentityOutcome,
}

/// Exhaustive check of the A∞ relation for `m̂` and the A∞-functor relation for `CY`
/// for `k ≤ k_max`, over tuples of total word length at most `max_len`.
/// Refuses to run on presentations that fail validation.
pub fn verify_ainfty(p: &DgaPresentation, k_max: usize, max_len: usize) -> Result<Vec<AinftyOutcome>, VerifyError> {
    if k_max == 0 {
        return Err(VerifyError::ZeroArity);
    }
    let report = crate::dga::validate(p);
    if !report.passed() {
        let failed: Vec<String> = report.entries.iter().filter(|e| e.status == crate::dga::CheckStatus::Fail).map(|e| e.check.clone()).collect();
        return Err(VerifyError::InvalidPresentation(failed.join(", ")));
    }
    let mut out = vec![];
    for k in 1..=k_max {
        let sides = vec![cyclic::Side::Hat; k];
        out.push(AinftyOutcome { check: format!("prod_inf k={k}"), outcome: verify_relation(p, &sides, max_len, cyclic::relations::prod_inf) });
        out.push(AinftyOutcome { check: format!("fun_inf k={k}"), outcome: verify_relation(p, &sides, max_len, cyclic::relations::fun_inf) });
    }
    Ok(out)
}
