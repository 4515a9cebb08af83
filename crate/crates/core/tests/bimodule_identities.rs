use ce_calabi::bimodule::*;
use ce_calabi::generate::{random_presentation, GenParams};
use ce_calabi::{fixtures, DgaPresentation, TensorPoly};
use rand::SeedableRng;

fn hat_basis(p: &DgaPresentation, len: usize) -> Vec<BimoduleElement> {
    basis_up_to(p, &hat_generators(p), len)
}

fn check_basis(p: &DgaPresentation, len: usize) -> Vec<BimoduleElement> {
    basis_up_to(p, &check_generators(p), len)
}

fn assert_squares_vanish(p: &DgaPresentation, len: usize) {
    for e in hat_basis(p, len) {
        let d = mhat1(p, &e).unwrap();
        assert!(degree_contract(p, &e, Complex::HatPlus, &d, Complex::HatPlus, 1), "degree of mhat1 {e:?}");
        assert!(mhat1(p, &d).unwrap().is_zero(), "mhat1^2 on {}", e.display(p));
        let r = rfc_diff(p, &e);
        assert!(rfc_diff(p, &r).is_zero(), "rfc^2 on {}", e.display(p));
    }
    for e in check_basis(p, len) {
        let d = mcheck1(p, &e).unwrap();
        assert!(degree_contract(p, &e, Complex::CheckMinus, &d, Complex::CheckMinus, 1));
        assert!(mcheck1(p, &d).unwrap().is_zero(), "mcheck1^2 on {}", e.display(p));
        assert!(rfc_diff(p, &rfc_diff(p, &e)).is_zero(), "rfc^2 on {}", e.display(p));
    }
}

fn assert_chain_maps(p: &DgaPresentation, len: usize) {
    let hats = hat_basis(p, len);
    let checks = check_basis(p, len);
    for e in &hats {
        let lhs = cy_bimodule(p, &mhat1(p, e).unwrap()).unwrap();
        let rhs = mcheck1(p, &cy_bimodule(p, e).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "CY chain map on {}", e.display(p));
        let c = cy_bimodule(p, e).unwrap();
        assert!(degree_contract(p, e, Complex::HatPlus, &c, Complex::CheckMinus, 0));

        let h_lhs = h_map(&mhat1(p, e).unwrap());
        let h_rhs = hom_diff(p, &h_map(e), &check_generators(p), |x| mcheck1(p, x).unwrap());
        assert_eq!(h_lhs, h_rhs, "H chain map on {}", e.display(p));
    }
    for e in &checks {
        let g_lhs = g_map(&mcheck1(p, e).unwrap());
        let g_rhs = hom_diff(p, &g_map(e), &hat_generators(p), |x| mhat1(p, x).unwrap());
        assert_eq!(g_lhs, g_rhs, "G chain map on {}", e.display(p));
    }
    let cone = cone_cy(p, &hats).expect("CY is a chain map");
    for e in hats.iter().chain(checks.iter()) {
        assert_eq!(nu(&cone.diff(e)), rfc_diff(p, &nu(e)), "nu chain map on {}", e.display(p));
    }
    for e in &hats {
        let x = ConeFElement { hat: e.clone(), alg: TensorPoly::zero() };
        let back = cone_f_diff(p, &h_homotopy(&x)).add(&h_homotopy(&cone_f_diff(p, &x)));
        assert_eq!(back, x, "dh + hd on {}", e.display(p));
    }
    for w in ce_calabi::algebra::words_up_to(p.num_gens(), len) {
        let x = ConeFElement { hat: BimoduleElement::zero(), alg: TensorPoly::from_word(w) };
        let back = cone_f_diff(p, &h_homotopy(&x)).add(&h_homotopy(&cone_f_diff(p, &x)));
        assert_eq!(back, x);
    }
}

#[test]
fn fixtures_square_to_zero() {
    assert_squares_vanish(&fixtures::unknot(), 4);
    assert_squares_vanish(&fixtures::trefoil(), 3);
}

#[test]
fn fixtures_chain_maps() {
    assert_chain_maps(&fixtures::unknot(), 4);
    assert_chain_maps(&fixtures::trefoil(), 3);
}

#[test]
fn random_presentations_square_to_zero() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..60 {
        let p = random_presentation(&mut rng, &GenParams::default());
        assert_squares_vanish(&p, 2);
    }
}

#[test]
fn random_presentations_chain_maps() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(12);
    for _ in 0..60 {
        let p = random_presentation(&mut rng, &GenParams::default());
        assert_chain_maps(&p, 2);
    }
}

#[test]
fn semifree_order_exists_for_random_presentations() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(13);
    for _ in 0..60 {
        let p = random_presentation(&mut rng, &GenParams::default());
        if p.diff.iter().enumerate().all(|(g, d)| d.words().all(|w| !w.letters().contains(&(g as u32)))) {
            assert!(semifree_order(&p).is_some() || p.num_gens() > 0);
        }
    }
}

#[test]
fn random_presentations_are_self_dual() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(14);
    for _ in 0..100 {
        let p = random_presentation(&mut rng, &GenParams::default());
        let r = verify_cy_self_duality(&p);
        assert!(r.passed(), "{}\n{r:?}", p.print());
    }
}
