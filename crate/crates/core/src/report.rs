//! Check registry and report records.
//!
//! Every record serializes as `{check, status, window, masked_degrees, counterexample?}`,
//! with `cases` and `dims` added where they apply.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{words_up_to, TensorPoly};
use crate::bimodule::{self, BimoduleElement, Complex, ConeFElement};
use crate::cyclic::{self, relations, CyclicElement, Side};
use crate::dga::{validate, CheckStatus, DgaPresentation};
use crate::homology::{self, IdentityOutcome, SliceComplex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub status: CheckStatus,
    pub window: Option<(i64, i64)>,
    pub masked_degrees: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<BTreeMap<i64, usize>>,
}

impl CheckReport {
    pub fn from_outcome(check: impl Into<String>, o: IdentityOutcome) -> Self {
        CheckReport {
            check: check.into(),
            status: if o.passed() { CheckStatus::Pass } else { CheckStatus::Fail },
            window: None,
            masked_degrees: vec![],
            counterexample: o.counterexample,
            cases: Some(o.cases),
            dims: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::passed)
}

fn sorted_basis(p: &DgaPresentation, chords: &[crate::oracle::MixedChord], max_len: usize) -> Vec<BimoduleElement> {
    let mut v = bimodule::basis_up_to(p, chords, max_len);
    v.sort_by_key(|e| e.terms().map(|(l, _, r)| l.len() + r.len()).sum::<usize>());
    v
}

fn zero_check(
    p: &DgaPresentation,
    name: &str,
    tests: &[BimoduleElement],
    f: impl Fn(&BimoduleElement) -> BimoduleElement + Sync,
) -> CheckReport {
    let o = homology::verify_identity(tests, &f, |_| BimoduleElement::zero(), |t, l, _| format!("{} ↦ {}", t.display(p), l.display(p)));
    CheckReport::from_outcome(name, o)
}

fn eq_check<E: PartialEq + Send + std::fmt::Debug>(
    p: &DgaPresentation,
    name: &str,
    tests: &[BimoduleElement],
    lhs: impl Fn(&BimoduleElement) -> E + Sync,
    rhs: impl Fn(&BimoduleElement) -> E + Sync,
) -> CheckReport {
    let o = homology::verify_identity(tests, lhs, rhs, |t, l, r| format!("{}: {l:?} ≠ {r:?}", t.display(p)));
    CheckReport::from_outcome(name, o)
}

/// Presentation-level checks from `validate`.
pub fn validation_checks(p: &DgaPresentation) -> Vec<CheckReport> {
    validate(p)
        .entries
        .into_iter()
        .map(|e| CheckReport {
            check: format!("validate {}", e.check),
            status: e.status,
            window: None,
            masked_degrees: vec![],
            counterexample: e.failures.first().cloned(),
            cases: None,
            dims: None,
        })
        .collect()
}

/// `∂² = 0` for the base algebra, the two bimodules and the Rabinowitz complex.
pub fn square_checks(p: &DgaPresentation, max_len: usize) -> Vec<CheckReport> {
    let mut words = words_up_to(p.num_gens(), max_len);
    words.sort_by_key(|w| w.len());
    let base = homology::verify_identity(
        &words,
        |w| {
            let mut out = TensorPoly::zero();
            for v in p.diff_word(w.letters()).words() {
                out += &p.diff_word(v.letters());
            }
            out
        },
        |_| TensorPoly::zero(),
        |w, l, _| format!("{} ↦ {}", p.format_word(w.letters()), p.format_poly(l)),
    );
    let hats = sorted_basis(p, &bimodule::hat_generators(p), max_len);
    let checks = sorted_basis(p, &bimodule::check_generators(p), max_len);
    let all: Vec<BimoduleElement> = hats.iter().chain(&checks).cloned().collect();
    let cyc_hat = homology::verify_relation(p, &[Side::Hat], max_len, relations::prod_inf);
    let cyc_check = homology::verify_relation(p, &[Side::Check], max_len, relations::mcheck_inf);
    vec![
        CheckReport::from_outcome("base d²=0", base),
        zero_check(p, "m̂₁²=0", &hats, |e| bimodule::mhat1(p, &bimodule::mhat1(p, e).unwrap()).unwrap()),
        zero_check(p, "m̌₁²=0", &checks, |e| bimodule::mcheck1(p, &bimodule::mcheck1(p, e).unwrap()).unwrap()),
        zero_check(p, "rfc²=0", &all, |e| bimodule::rfc_diff(p, &bimodule::rfc_diff(p, e))),
        CheckReport::from_outcome("cyclic m̂₁²=0", cyc_hat),
        CheckReport::from_outcome("cyclic m̌₁²=0", cyc_check),
    ]
}

/// Chain maps and homotopies between the bimodules, and self-duality of `CY`.
pub fn chain_map_checks(p: &DgaPresentation, max_len: usize) -> Vec<CheckReport> {
    let hats = sorted_basis(p, &bimodule::hat_generators(p), max_len);
    let checks = sorted_basis(p, &bimodule::check_generators(p), max_len);
    let all: Vec<BimoduleElement> = hats.iter().chain(&checks).cloned().collect();
    let mhat = |e: &BimoduleElement| bimodule::mhat1(p, e).unwrap();
    let mcheck = |e: &BimoduleElement| bimodule::mcheck1(p, e).unwrap();
    let cy = |e: &BimoduleElement| bimodule::cy_bimodule(p, e).unwrap();
    let hat_gens = bimodule::hat_generators(p);
    let check_gens = bimodule::check_generators(p);
    let cone = bimodule::ConeComplex { source: bimodule::hat_complex(p), target: bimodule::check_complex(p), map: Box::new(cy) };
    let cone_diff = |e: &BimoduleElement| cone.diff(e);
    let mut out = vec![
        eq_check(p, "CY chain map", &hats, |e| cy(&mhat(e)), |e| mcheck(&cy(e))),
        eq_check(p, "CY degree 0", &hats, |e| bimodule::degree_contract(p, e, Complex::HatPlus, &cy(e), Complex::CheckMinus, 0), |_| true),
        eq_check(p, "m̂₁ degree 1", &hats, |e| bimodule::degree_contract(p, e, Complex::HatPlus, &mhat(e), Complex::HatPlus, 1), |_| true),
        eq_check(p, "m̌₁ degree 1", &checks, |e| bimodule::degree_contract(p, e, Complex::CheckMinus, &mcheck(e), Complex::CheckMinus, 1), |_| true),
        eq_check(
            p,
            "H chain map",
            &hats,
            |e| bimodule::h_map(&mhat(e)),
            |e| bimodule::hom_diff(p, &bimodule::h_map(e), &check_gens, mcheck),
        ),
        eq_check(
            p,
            "G chain map",
            &checks,
            |e| bimodule::g_map(&mcheck(e)),
            |e| bimodule::hom_diff(p, &bimodule::g_map(e), &hat_gens, mhat),
        ),
        eq_check(p, "ν chain map", &all, |e| bimodule::nu(&cone_diff(e)), |e| bimodule::rfc_diff(p, &bimodule::nu(e))),
        eq_check(
            p,
            "dh+hd=id on Cone(F)",
            &hats,
            |e| {
                let x = ConeFElement { hat: e.clone(), alg: TensorPoly::zero() };
                bimodule::cone_f_diff(p, &bimodule::h_homotopy(&x)).add(&bimodule::h_homotopy(&bimodule::cone_f_diff(p, &x)))
            },
            |e| ConeFElement { hat: e.clone(), alg: TensorPoly::zero() },
        ),
    ];
    let words = words_up_to(p.num_gens(), max_len);
    let o = homology::verify_identity(
        &words,
        |w| {
            let x = ConeFElement { hat: BimoduleElement::zero(), alg: TensorPoly::from_word(w.clone()) };
            bimodule::cone_f_diff(p, &bimodule::h_homotopy(&x)).add(&bimodule::h_homotopy(&bimodule::cone_f_diff(p, &x)))
        },
        |w| ConeFElement { hat: BimoduleElement::zero(), alg: TensorPoly::from_word(w.clone()) },
        |w, _, _| p.format_word(w.letters()),
    );
    out.push(CheckReport::from_outcome("dh+hd=id on Cone(F), algebra part", o));
    out.push(self_duality_check(p));
    out
}

pub fn self_duality_check(p: &DgaPresentation) -> CheckReport {
    let r = bimodule::verify_cy_self_duality(p);
    let bad = r.entries.iter().find(|e| !e.passed);
    CheckReport {
        check: "CY self-duality".into(),
        status: if bad.is_none() { CheckStatus::Pass } else { CheckStatus::Fail },
        window: None,
        masked_degrees: vec![],
        counterexample: bad.map(|e| format!("{}: expected {}, found {}", e.generator, e.expected, e.found)),
        cases: Some(r.entries.len()),
        dims: None,
    }
}

fn module_sides(k: usize) -> Vec<Side> {
    let mut v = vec![Side::Check; k - 1];
    v.push(Side::Hat);
    v
}

/// A∞ relations of the cyclic model for arities up to `k_max`.
pub fn ainfty_checks(p: &DgaPresentation, k_max: usize, max_len: usize) -> Vec<CheckReport> {
    let mut out = vec![];
    match homology::verify_ainfty(p, k_max, max_len) {
        Ok(v) => out.extend(v.into_iter().map(|a| CheckReport::from_outcome(a.check, a.outcome))),
        Err(e) => out.push(CheckReport {
            check: "A∞ relations".into(),
            status: CheckStatus::Skipped,
            window: None,
            masked_degrees: vec![],
            counterexample: Some(e.to_string()),
            cases: None,
            dims: None,
        }),
    }
    if out.iter().any(|r| r.status == CheckStatus::Skipped) {
        return out;
    }
    for k in 1..=k_max {
        let checks = vec![Side::Check; k];
        out.push(CheckReport::from_outcome(format!("m̌ A∞ k={k}"), homology::verify_relation(p, &checks, max_len, relations::mcheck_inf)));
        out.push(CheckReport::from_outcome(format!("module relation k={k}"), homology::verify_relation(p, &module_sides(k), max_len, relations::module_inf)));
        out.push(CheckReport::from_outcome(format!("b∨ module morphism k={k}"), homology::verify_relation(p, &module_sides(k), max_len, relations::bvee_inf)));
    }
    if k_max >= 2 {
        let functor2: homology::Relation = |p, ins| relations::functor2(p, ins[0], ins[1]);
        let homotopy: homology::Relation = |p, ins| relations::homotopy2(p, ins[0], ins[1]);
        out.push(CheckReport::from_outcome("CY respects products", homology::verify_relation(p, &[Side::Hat; 2], max_len, functor2)));
        out.push(CheckReport::from_outcome("m̂₂ ≃ d̂₂ homotopy", homology::verify_relation(p, &[Side::Hat; 2], max_len, homotopy)));
        let unit: homology::Relation = |p, ins| {
            // y₁₂ on the left and y₀₁ on the right both act as the identity
            let (left, right) = (ins[0], ins[1]);
            let mut v = CyclicElement::zero();
            let y12 = CyclicElement::term(crate::oracle::MixedChord::y(1, 2), crate::algebra::Word::one());
            let y01 = CyclicElement::term(crate::oracle::MixedChord::y(0, 1), crate::algebra::Word::one());
            v.add_assign(&cyclic::mcheck_d(p, &[&y12, right])?);
            v.add_assign(&cyclic::relabel(right, 0, 2));
            v.add_assign(&cyclic::mcheck_d(p, &[left, &y01])?);
            v.add_assign(&cyclic::relabel(left, 0, 2));
            Ok(v)
        };
        out.push(CheckReport::from_outcome("y is a strict unit", homology::verify_relation(p, &[Side::Check; 2], max_len, unit)));
    }
    out
}

/// Homology dimensions of a slice.
pub fn homology_check(p: &DgaPresentation, complex: SliceComplex, window: (i64, i64), max_len: usize) -> CheckReport {
    let name = match complex {
        SliceComplex::HatPlus => "homology Ĉ₊^cyc",
        SliceComplex::CheckMinus => "homology Č₋^cyc",
        SliceComplex::ConeCy => "homology Cone(CY₁)",
    };
    match homology::assemble_slice(p, complex, window, max_len) {
        Ok(s) => {
            let h = homology::homology_dims(&s);
            CheckReport {
                check: name.into(),
                status: CheckStatus::Pass,
                window: Some(window),
                masked_degrees: h.masked_degrees,
                counterexample: None,
                cases: Some(s.basis.len()),
                dims: Some(h.dims),
            }
        }
        Err(e) => CheckReport {
            check: name.into(),
            status: CheckStatus::Fail,
            window: Some(window),
            masked_degrees: vec![],
            counterexample: Some(e.to_string()),
            cases: None,
            dims: None,
        },
    }
}

/// Every registered identity: validation, squares, chain maps, duality and A∞ relations.
pub fn verify_all(p: &DgaPresentation, k_max: usize, max_len: usize) -> Vec<CheckReport> {
    let mut out = validation_checks(p);
    if !all_passed(&out) {
        return out;
    }
    out.extend(square_checks(p, max_len));
    out.extend(chain_map_checks(p, max_len));
    out.extend(ainfty_checks(p, k_max, max_len));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_pass_everything() {
        for p in [fixtures::unknot(), fixtures::trefoil()] {
            let r = verify_all(&p, 2, 2);
            let bad: Vec<_> = r.iter().filter(|c| !c.passed()).collect();
            assert!(bad.is_empty(), "{bad:?}");
        }
    }

    #[test]
    fn json_shape() {
        let r = homology_check(&fixtures::unknot(), SliceComplex::ConeCy, (-2, 2), 2);
        let v = serde_json::to_value(&r).unwrap();
        for key in ["check", "status", "window", "masked_degrees"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v.get("counterexample").is_none());
        assert_eq!(v["status"], "pass");
    }
}
