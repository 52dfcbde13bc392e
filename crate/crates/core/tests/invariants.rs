use monodromy::invariants::*;
use monodromy::mcg::homology_eval;
use monodromy::surface::{SurfaceSig, Word};

fn w(s: &str) -> Word {
    Word::parse(SurfaceSig::SIGMA22, s).unwrap()
}

const PSI1: &str = "C4 C3 C2 C1 C1P";
const PSI1T: &str = "C2 C3 C4 C5 C5P D1";

fn psi_word(k: usize) -> Word {
    // ψ₁ᵏ in its factored form, with ψ₁³ = ψ̃₁
    let parts: Vec<&str> = match k {
        1 => vec![PSI1],
        2 => vec![PSI1, PSI1],
        3 => vec![PSI1T],
        4 => vec![PSI1T, PSI1],
        5 => vec![PSI1T, PSI1, PSI1],
        6 => vec![PSI1T, PSI1T],
        7 => vec![PSI1T, PSI1T, PSI1],
        8 => vec!["D1 D1 D1 D2"],
        _ => unreachable!(),
    };
    w(&parts.join(" "))
}

fn x0() -> Word {
    w(&[PSI1T, PSI1T, PSI1, PSI1].join(" "))
}

#[test]
fn betti_numbers_of_the_main_words() {
    let b = |k| {
        let r = lefschetz_betti(&psi_word(k)).unwrap();
        (r.b1, r.b2)
    };
    assert_eq!(b(1), (0, 0));
    assert_eq!(b(2), (0, 5));
    assert_eq!(b(3), (0, 1));
    assert_eq!(b(4), (0, 6));
    assert_eq!(b(8), (4, 3));
    let r = lefschetz_betti(&x0()).unwrap();
    assert_eq!((r.b1, r.b2), (0, 17));
    assert_eq!(r.chi, -4 + 22);
}

#[test]
fn handle_count_conservation() {
    for k in 1..=8 {
        let word = psi_word(k);
        let r = lefschetz_betti(&word).unwrap();
        assert_eq!(r.b2 + (5 - r.b1), word.syllable_length() as i64, "k = {k}");
    }
}

#[test]
fn capping_x0_gives_blown_up_involution_square() {
    let (capped, blowups) = cap_word(&x0(), &[1, 2]).unwrap();
    assert_eq!(blowups, 2);
    assert_eq!(capped.surface, SurfaceSig::SIGMA2);
    assert_eq!(capped.syllable_length(), 20);
    assert!(capped.expanded().iter().all(|l| !l.gen.ends_with('P') && !l.gen.starts_with('D')));
    // I² acts trivially on H₁ of the closed surface (= H₁(Σ₂,₂)/⟨d⟩)
    let h = homology_eval(&capped).unwrap().matrix;
    let d = [1i64, 0, 1, 0, 1];
    for j in 0..5 {
        let diff: Vec<i64> = (0..5).map(|r| h[r][j] - i64::from(r == j)).collect();
        let f = diff.iter().zip(d).find(|(_, dv)| *dv != 0).map(|(x, _)| *x).unwrap();
        assert!(diff.iter().zip(d).all(|(x, dv)| *x == f * dv), "column {j}");
    }
}

#[test]
fn capping_psi1_squared_at_the_outer_boundary() {
    let (capped, blowups) = cap_word(&psi_word(2), &[2]).unwrap();
    assert_eq!(blowups, 0);
    assert_eq!(capped.surface, SurfaceSig::SIGMA21);
    // read backwards and with c₁, c₁′ under one label this is (τ₁τ₁τ₂τ₃τ₄)²
    let relabel: Vec<String> = capped
        .expanded()
        .iter()
        .rev()
        .map(|l| l.gen.trim_end_matches('P').replace('C', "t"))
        .collect();
    assert_eq!(relabel.join(" "), "t1 t1 t2 t3 t4 t1 t1 t2 t3 t4");
}

#[test]
fn signature_pipeline_for_x0() {
    let (capped, blowups) = cap_word(&x0(), &[1, 2]).unwrap();
    assert_eq!(capped.syllable_length(), 20);
    assert_eq!(hyperelliptic_signature(20, 0, blowups as i64).unwrap(), -14);
    assert_eq!(novikov_assemble(-14, -1), -13);
    let r = definiteness_report(&x0(), 4, Some(-1)).unwrap();
    assert_eq!((r.b2, r.sigma, r.b2_plus, r.b2_minus), (17, Some(-13), Some(0), Some(13)));
    assert_eq!(r.is_negative_semidefinite(), Some(true));
    assert_eq!(r.is_negative_definite(), Some(false));
}

#[test]
fn psi1_is_trivially_definite() {
    let r = definiteness_report(&psi_word(1), 0, None).unwrap();
    assert_eq!((r.b2, r.b2_plus), (0, Some(0)));
    assert_eq!(r.is_negative_definite(), Some(true));
}

#[test]
fn every_main_word_below_eight_embeds_in_x0() {
    let amb = definiteness_report(&x0(), 4, Some(-1)).unwrap();
    for k in 1..=7 {
        let r = definiteness_by_embedding(&psi_word(k), &x0(), &amb, 0).unwrap();
        assert_eq!(r.b2_plus, Some(0), "k = {k}");
        assert_eq!(r.is_negative_definite(), Some(true));
    }
}

#[test]
fn laufer_certificates() {
    let word3 = definiteness_by_embedding(
        &psi_word(3),
        &x0(),
        &definiteness_report(&x0(), 4, Some(-1)).unwrap(),
        0,
    )
    .unwrap();
    let graph3 = BettiReport::from_numbers(0, 0, 1, 0);
    assert!(laufer_certificate(&word3, &graph3).unwrap());
    let word2 = lefschetz_betti(&psi_word(2)).unwrap();
    let word2 = BettiReport { b2_plus: Some(0), b2_minus: Some(word2.b2), b2_zero: Some(0), ..word2 };
    assert!(!laufer_certificate(&word2, &graph3).unwrap());
    assert!(laufer_certificate(&lefschetz_betti(&psi_word(3)).unwrap(), &graph3).is_err());
}

#[test]
fn abelianization_obstructions() {
    assert_eq!(
        abelian_obstruction_solve(0, Some(10), 4, &[0, 2]).unwrap(),
        vec![vec![0, 0, 0, 0]]
    );
    assert_eq!(abelian_obstruction_solve(12, None, 1, &[1, 12]).unwrap(), vec![vec![12]]);
    // short factorizations of the Σ₁,₁ boundary twist use one boundary twist
    for len in 1..12 {
        for sol in abelian_obstruction_solve(12, None, len, &[0, 1, 12]).unwrap() {
            assert_eq!(sol.iter().filter(|&&x| x == 12).count(), 1);
            assert!(sol.iter().all(|&x| x == 0 || x == 12));
        }
    }
    assert_eq!(
        abelianization_value(&CurveClass::SeparatingType { h: 1 }, AbelianContext::ClosedGenus2).unwrap(),
        2
    );
    assert!(abelianization_value(
        &CurveClass::BoundaryParallel { boundary: 1 },
        AbelianContext::ClosedGenus2
    )
    .is_err());
}

#[test]
fn genus_one_boundary_multitwist() {
    let s = SurfaceSig::sigma1n(3);
    let r = lefschetz_betti(&Word::parse(s, "D1 D2 D3").unwrap()).unwrap();
    assert_eq!((r.b1, r.b2), (2, 1));
}

#[test]
fn boundary_multitwist_form_is_negative_definite() {
    let r = isotropic_form_report(&psi_word(8)).unwrap();
    assert_eq!((r.b1, r.b2, r.b2_plus, r.b2_minus, r.b2_zero), (4, 3, Some(0), Some(3), Some(0)));
    let graph8 = BettiReport::from_numbers(4, 0, 3, 0);
    assert!(laufer_certificate(&r, &graph8).unwrap());
    assert!(isotropic_form_report(&psi_word(1)).is_err());
}
