use std::collections::HashMap;
use std::f64::consts::PI;

use monodromy::annulus::{annulus3, annulus4, AnnulusModel, Dictionary, PROJECTION_ANGLE};
use monodromy::braid::{artin_action, braid_of_motion};
use monodromy::cover::{lift_word, project_word};
use monodromy::mcg::{exact_equal, exact_eval, ExactElement};
use monodromy::surface::{Letter, SurfaceSig, Word};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn down(s: &str) -> Word {
    Word::parse(SurfaceSig::ANNULUS4, s).unwrap()
}
fn up(s: &str) -> Word {
    Word::parse(SurfaceSig::SIGMA22, s).unwrap()
}

/// Quarter (third) turn of the roots of x^m = t over |t| = 1, hole fixed,
/// finished by the inner boundary twist.
fn unit_loop_monodromy(model: &AnnulusModel) -> monodromy::freegroup::FreeAut {
    let m = model.m;
    let pts = model.points.clone();
    let mut b = braid_of_motion(
        move |t: f64| {
            let r = Complex::from_polar(1.0, 2.0 * PI * t / m as f64);
            pts.iter()
                .enumerate()
                .map(|(i, &z)| if i < m { z * r } else { z })
                .collect()
        },
        PROJECTION_ANGLE,
    )
    .unwrap();
    b.extend(model.catalog["TD1"].iter().copied());
    artin_action(m + 2, &b)
}

#[test]
fn dictionary_makes_psi1_the_unit_loop_monodromy() {
    let a4 = annulus4();
    assert_eq!(unit_loop_monodromy(a4), a4.eval(&down("B3 B2 B1 N1")).unwrap());
    let a3 = annulus3();
    let w3 = Word::parse(SurfaceSig::ANNULUS3, "B2 B1 N1").unwrap();
    assert_eq!(unit_loop_monodromy(a3), a3.eval(&w3).unwrap());
    // the mirror labelling reads the word backwards
    let mirror = AnnulusModel::new(4, Dictionary { start: 0, orientation: -1 }).unwrap();
    assert_ne!(unit_loop_monodromy(&mirror), mirror.eval(&down("B3 B2 B1 N1")).unwrap());
    assert_eq!(unit_loop_monodromy(&mirror), mirror.eval(&down("N1 B1 B2 B3")).unwrap());
}

#[test]
fn downstairs_relations_of_the_main_words() {
    let a = annulus4();
    let e = |s: &str| a.eval(&down(s)).unwrap();
    let psi = down("B3 B2 B1 N1");
    assert_eq!(a.eval(&psi.pow(8)).unwrap(), e("TD1^6 TD2^2"));
    assert_eq!(a.eval(&psi.pow(3)).unwrap(), e("B1 B2 B3 N5 TD1^2"));
    let b0 = monodromy::surface::conjugate(&down("B3"), &psi).unwrap();
    assert_eq!(a.eval(&b0).unwrap(), e("B0"));
}

#[test]
fn lifted_relations_hold_upstairs() {
    for (lhs, rhs) in [
        ("B3 B2 B1 N1 B3 B2 B1 N1 B3 B2 B1 N1", "B1 B2 B3 N5 TD1^2"),
        ("B0 B1 B0", "B1 B0 B1"),
        ("B0 B2", "B2 B0"),
        ("B1 N1 B1 N1", "N1 B1 N1 B1"),
    ] {
        assert!(
            exact_equal(&lift_word(&down(lhs)).unwrap(), &lift_word(&down(rhs)).unwrap()).unwrap(),
            "{lhs} = {rhs}"
        );
    }
}

#[test]
fn round_trip_on_catalog() {
    for s in ["C2", "C3", "C4", "C1 C1P", "C1P C1", "C5 C5P", "D1", "D2^-1", "C5P^-1 C5^-1"] {
        let w = up(s);
        assert!(exact_equal(&lift_word(&project_word(&w).unwrap()).unwrap(), &w).unwrap(), "{s}");
    }
    for s in ["B0", "B1", "N1", "N5^-1", "TD1^2", "TD2^-2"] {
        let w = down(s);
        let back = project_word(&lift_word(&w).unwrap()).unwrap();
        assert_eq!(annulus4().eval(&back).unwrap(), annulus4().eval(&w).unwrap(), "{s}");
    }
}

/// Deciding equality downstairs and upstairs must give the same partition
/// of liftable words.
#[test]
fn both_routes_decide_equality_alike() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let alphabet = ["B1", "B2", "B3", "N1", "B0"];
    let a = annulus4();
    let mut down_to_up: HashMap<monodromy::freegroup::FreeAut, ExactElement> = HashMap::new();
    let mut up_to_down: HashMap<ExactElement, monodromy::freegroup::FreeAut> = HashMap::new();
    let mut collisions = 0;
    for _ in 0..1500 {
        let len = rng.gen_range(0..=4);
        let letters: Vec<Letter> = (0..len)
            .map(|_| {
                let g = alphabet[rng.gen_range(0..alphabet.len())];
                Letter::new(g, if rng.gen_bool(0.8) { 1 } else { -1 })
            })
            .collect();
        let w = Word::new(SurfaceSig::ANNULUS4, letters).unwrap();
        let d = a.eval(&w).unwrap();
        let u = exact_eval(&lift_word(&w).unwrap()).unwrap();
        if let Some(prev) = down_to_up.insert(d.clone(), u.clone()) {
            assert_eq!(prev, u, "{w}");
            collisions += 1;
        }
        if let Some(prev) = up_to_down.insert(u, d.clone()) {
            assert_eq!(prev, d, "{w}");
        }
    }
    assert!(collisions > 100);
}
