//! Random presentations with `∂² = 0` by construction.
//!
//! Start from a sum of stabilizations `∂e = f` (or `∂e = 1`) and conjugate by
//! random elementary automorphisms `g ↦ g + w`, where `w` avoids `g` and has the
//! degree of `g`. Conjugation preserves `∂² = 0` and the grading.

use std::collections::BTreeSet;

use rand::Rng;

use crate::algebra::{apply_derivation, substitute, Gen, MarkedWord, TensorPoly, Word};
use crate::dga::{DgaPresentation, GeneratorInfo, Length};

#[derive(Clone, Debug)]
pub struct GenParams {
    pub max_pairs: usize,
    pub max_free: usize,
    pub automorphisms: usize,
    pub max_word: usize,
    pub max_terms: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { max_pairs: 2, max_free: 2, automorphisms: 4, max_word: 2, max_terms: 12 }
    }
}

fn random_word_of_degree<R: Rng>(rng: &mut R, degs: &[i64], avoid: Gen, target: i64, max_len: usize) -> Option<Word> {
    for _ in 0..24 {
        let len = rng.random_range(1..=max_len);
        let w: Vec<Gen> = (0..len).map(|_| rng.random_range(0..degs.len() as Gen)).collect();
        if w.contains(&avoid) {
            continue;
        }
        if w.iter().map(|&g| degs[g as usize]).sum::<i64>() == target {
            return Some(Word(w));
        }
    }
    None
}

pub fn random_presentation<R: Rng>(rng: &mut R, params: &GenParams) -> DgaPresentation {
    let n = rng.random_range(1..=3);
    let mut degs: Vec<i64> = vec![];
    let mut diff: Vec<TensorPoly> = vec![];
    let pairs = rng.random_range(1..=params.max_pairs);
    for _ in 0..pairs {
        if rng.random_bool(0.3) {
            degs.push(-1);
            diff.push(TensorPoly::one());
        } else {
            let d = rng.random_range(-1..=1);
            let f = degs.len() as Gen + 1;
            degs.push(d);
            diff.push(TensorPoly::from_word(Word::letter(f)));
            degs.push(d + 1);
            diff.push(TensorPoly::zero());
        }
    }
    for _ in 0..rng.random_range(0..=params.max_free) {
        degs.push(rng.random_range(-1..=1));
        diff.push(TensorPoly::zero());
    }
    for _ in 0..params.automorphisms {
        let g = rng.random_range(0..degs.len() as Gen);
        let Some(w) = random_word_of_degree(rng, &degs, g, degs[g as usize], params.max_word) else { continue };
        let mut phi: Vec<TensorPoly> = (0..degs.len() as Gen).map(|h| TensorPoly::from_word(Word::letter(h))).collect();
        phi[g as usize].toggle(w);
        let conj: Vec<TensorPoly> =
            phi.iter().map(|img| substitute(&phi, &apply_derivation(&diff, img).expect("total table"))).collect();
        if conj.iter().all(|c| c.len() <= params.max_terms) {
            diff = conj;
        }
    }
    let names: Vec<String> = (0..degs.len()).map(|i| format!("g{i}")).collect();
    DgaPresentation {
        name: String::new(),
        n,
        gens: degs.iter().zip(names).map(|(&d, name)| GeneratorInfo { name, cz: 1 - d, len: None }).collect(),
        pointed: vec![BTreeSet::new(); degs.len()],
        diff,
    }
}

/// Adds a name, chord lengths and pointed tables. The result is meant for
/// exercising the file format; the extra data need not satisfy any geometric
/// compatibility.
pub fn decorate<R: Rng>(rng: &mut R, p: &mut DgaPresentation) {
    if rng.random_bool(0.5) {
        p.name = format!("p{}", rng.random_range(0..10_000u32));
    }
    for g in &mut p.gens {
        if rng.random_bool(0.5) {
            g.len = Some(Length::new(rng.random_range(1..40), rng.random_range(1..6)));
        }
    }
    let k = p.num_gens();
    for table in &mut p.pointed {
        for _ in 0..rng.random_range(0..3) {
            let len = rng.random_range(0..4);
            let word = Word((0..len).map(|_| rng.random_range(0..k)).collect());
            let mark = rng.random_range(0..=len);
            table.insert(MarkedWord { word, mark });
        }
    }
}
