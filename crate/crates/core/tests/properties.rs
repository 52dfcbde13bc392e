use proptest::prelude::*;

use monodromy::annulus::annulus4;
use monodromy::cover::{lift_word, project_word};
use monodromy::hurwitz::{hurwitz_move, product, Direction, FactLetter, Factorization};
use monodromy::mcg::{abelianized_action, exact_equal, exact_eval, homology_eval};
use monodromy::surface::{Letter, SurfaceSig, Word};

const S22: [&str; 9] = ["C1", "C1P", "C2", "C3", "C4", "C5", "C5P", "D1", "D2"];

/// Blocks whose twists commute with the deck involution.
const SYMMETRIC: [&[&str]; 7] = [&["C2"], &["C3"], &["C4"], &["C1", "C1P"], &["C5", "C5P"], &["D1"], &["D2"]];

const DOWN: [&str; 6] = ["B0", "B1", "B2", "B3", "N1", "N5"];

fn letter_strategy(names: &'static [&'static str]) -> impl Strategy<Value = Letter> {
    (0..names.len(), prop_oneof![Just(1), Just(-1), Just(2)]).prop_map(move |(i, e)| Letter::new(names[i], e))
}

fn fact_letter() -> impl Strategy<Value = FactLetter> {
    (0..S22.len(), prop::collection::vec(letter_strategy(&S22), 0..3)).prop_map(|(i, conj)| FactLetter {
        base: S22[i].to_string(),
        conj,
    })
}

fn factorization() -> impl Strategy<Value = Factorization> {
    prop::collection::vec(fact_letter(), 2..6).prop_map(|letters| Factorization {
        surface: SurfaceSig::SIGMA22,
        letters,
    })
}

fn symmetric_word() -> impl Strategy<Value = Word> {
    prop::collection::vec((0..SYMMETRIC.len(), prop_oneof![Just(1), Just(-1)]), 0..7).prop_map(|blocks| {
        let letters = blocks
            .iter()
            .flat_map(|&(b, e)| SYMMETRIC[b].iter().map(move |g| Letter::new(g, e)))
            .collect();
        Word::new(SurfaceSig::SIGMA22, letters).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hurwitz_moves_preserve_the_product(
        f in factorization(),
        moves in prop::collection::vec((0usize..8, any::<bool>()), 1..4),
    ) {
        let before = exact_eval(&product(&f).unwrap()).unwrap();
        let mut g = f.clone();
        for (i, right) in moves {
            let dir = if right { Direction::R } else { Direction::L };
            g = hurwitz_move(&g, i % (g.len() - 1), dir).unwrap();
        }
        prop_assert_eq!(g.len(), f.len());
        prop_assert_eq!(exact_eval(&product(&g).unwrap()).unwrap(), before);
    }

    #[test]
    fn left_and_right_moves_are_inverse(f in factorization(), i in 0usize..8) {
        let i = i % (f.len() - 1);
        let back = hurwitz_move(&hurwitz_move(&f, i, Direction::R).unwrap(), i, Direction::L).unwrap();
        prop_assert!(back.same_letters(&f).unwrap());
    }

    #[test]
    fn lift_after_project_is_the_identity(w in symmetric_word()) {
        let down = project_word(&w).unwrap();
        prop_assert!(exact_equal(&lift_word(&down).unwrap(), &w).unwrap());
    }

    #[test]
    fn project_after_lift_is_the_identity(
        letters in prop::collection::vec(letter_strategy(&DOWN), 0..7),
        boundary in (-1i32..=1, -1i32..=1),
    ) {
        // odd powers of the boundary twists do not lift
        let mut letters = letters;
        letters.push(Letter::new("TD1", 2 * boundary.0));
        letters.push(Letter::new("TD2", 2 * boundary.1));
        letters.retain(|l| l.exp != 0);
        let w = Word::new(SurfaceSig::ANNULUS4, letters).unwrap();
        let back = project_word(&lift_word(&w).unwrap()).unwrap();
        prop_assert_eq!(annulus4().eval(&back).unwrap(), annulus4().eval(&w).unwrap());
    }
}

fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..m[0].len()).map(|c| m.iter().map(|r| r[c]).collect()).collect()
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    monodromy::linalg::mat_mul(a, b)
}

#[test]
fn generators_preserve_the_pairing() {
    let surfaces = [
        SurfaceSig::SIGMA22,
        SurfaceSig::SIGMA2,
        SurfaceSig::SIGMA11,
        SurfaceSig::sigma1n(3),
    ];
    for s in surfaces {
        for g in s.catalog().unwrap() {
            for e in [1, -1, 3] {
                let w = Word::new(s, vec![Letter::new(g, e)]).unwrap();
                let h = homology_eval(&w).unwrap();
                let m = &h.matrix;
                assert_eq!(mul(&mul(&transpose(m), &h.pairing), m), h.pairing, "{g}^{e} on {s}");
            }
        }
    }
}

#[test]
fn transvections_match_the_exact_action() {
    for g in S22 {
        let w = Word::new(SurfaceSig::SIGMA22, vec![Letter::new(g, 1)]).unwrap();
        assert_eq!(abelianized_action(&exact_eval(&w).unwrap()), homology_eval(&w).unwrap().matrix, "{g}");
    }
}
