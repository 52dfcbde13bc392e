use std::f64::consts::PI;

use monodromy::annulus::{annulus3, annulus4};
use monodromy::braidmon::{
    braid_factorization, critical_values, cycle_type, default_factorization, default_paths,
    loop_monodromy, track_roots, PolyFamily, Segment, TPath,
};
use monodromy::cover::lift_factorization;
use monodromy::hurwitz::{hurwitz_equivalent, product, Factorization, SearchOptions};
use monodromy::mcg::exact_equal;
use monodromy::surface::{SurfaceSig, Word};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;

const ONE: C = C::new(1.0, 0.0);

#[test]
fn quartic_factorization_lifts_to_psi1() {
    let f = default_factorization(PolyFamily::Quartic, C::new(0.1, 0.0), ONE).unwrap();
    assert_eq!(f.len(), 4);
    let up = lift_factorization(&f).unwrap();
    assert_eq!(up.len(), 5);
    let psi1 = Factorization::from_word(&Word::parse(SurfaceSig::SIGMA22, "C4 C3 C2 C1 C1P").unwrap()).unwrap();
    assert!(exact_equal(&product(&up).unwrap(), &product(&psi1).unwrap()).unwrap());
    let opts = SearchOptions { depth: 6, ..Default::default() };
    assert!(hurwitz_equivalent(&up, &psi1, &opts).unwrap().is_some());
}

#[test]
fn letters_compose_to_the_global_monodromy() {
    for (fam, s) in [(PolyFamily::Quartic, 0.1), (PolyFamily::Cubic, -0.1)] {
        let s = C::new(s, 0.0);
        let f = default_factorization(fam, s, ONE).unwrap();
        let model = fam.annulus();
        let whole = loop_monodromy::<f64>(fam, s, &TPath::circle(ONE)).unwrap();
        assert_eq!(model.eval(&product(&f).unwrap()).unwrap(), whole, "{fam:?}");
    }
}

#[test]
fn cubic_cube_is_the_boundary_multitwist() {
    let f = default_factorization(PolyFamily::Cubic, C::new(-0.1, 0.0), ONE).unwrap();
    assert_eq!(f.len(), 3);
    let cube = product(&f).unwrap().pow(3);
    let multi = Word::parse(SurfaceSig::ANNULUS3, "TD2 TD1^2").unwrap();
    assert!(exact_equal(&cube, &multi).unwrap());
    assert_eq!(annulus3().eval(&cube).unwrap(), annulus3().eval(&multi).unwrap());
}

#[test]
fn unperturbed_unit_loop_rotates_a_quarter() {
    let tr = track_roots(PolyFamily::Quartic, C::new(0.0, 0.0), &TPath::circle(ONE), None).unwrap();
    assert_eq!(cycle_type(&tr.permutation.unwrap()), vec![4]);
    // the same in single precision
    let tr = track_roots::<f32>(PolyFamily::Quartic, Complex::new(0.0, 0.0), &TPath::circle(ONE), None).unwrap();
    assert_eq!(cycle_type(&tr.permutation.unwrap()), vec![4]);
    let cv = critical_values::<f32>(PolyFamily::Quartic, Complex::new(0.1, 0.0)).unwrap();
    assert_eq!(cv.branch.len(), 3);
}

/// Splits every line segment at a jittered midpoint.
fn jitter(path: &TPath, rng: &mut ChaCha8Rng, size: f64) -> TPath {
    let mut segs = Vec::new();
    for s in &path.segments {
        match s {
            Segment::Line { from, to } => {
                let mid = [
                    0.5 * (from[0] + to[0]) + rng.gen_range(-size..size),
                    0.5 * (from[1] + to[1]) + rng.gen_range(-size..size),
                ];
                segs.push(Segment::Line { from: *from, to: mid });
                segs.push(Segment::Line { from: mid, to: *to });
            }
            arc => segs.push(arc.clone()),
        }
    }
    TPath { segments: segs, max_step: path.max_step }
}

#[test]
fn perturbed_paths_give_the_same_letters() {
    let s = C::new(0.1, 0.0);
    let paths: Vec<(C, TPath)> = default_paths(PolyFamily::Quartic, s, ONE)
        .unwrap()
        .into_iter()
        .map(|(t, p)| (t.value, p))
        .collect();
    let reference = braid_factorization(PolyFamily::Quartic, s, &paths).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let moved: Vec<(C, TPath)> = paths.iter().map(|(t, p)| (*t, jitter(p, &mut rng, 0.002))).collect();
        assert_eq!(braid_factorization(PolyFamily::Quartic, s, &moved).unwrap(), reference);
    }
    let fine: Vec<(C, TPath)> = paths
        .iter()
        .map(|(t, p)| (*t, TPath { max_step: p.max_step / 2.0, ..p.clone() }))
        .collect();
    assert_eq!(braid_factorization(PolyFamily::Quartic, s, &fine).unwrap(), reference);
}

#[test]
fn track_roots_is_homotopy_invariant() {
    let s = C::new(0.1, 0.0);
    let circle = loop_monodromy::<f64>(PolyFamily::Quartic, s, &TPath::circle(ONE)).unwrap();
    let reference = track_roots(PolyFamily::Quartic, s, &TPath::circle(ONE), None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        // a random star-shaped polygon around every critical value
        let k = rng.gen_range(5..12);
        let mut pts: Vec<[f64; 2]> = vec![[1.0, 0.0]];
        for j in 1..k {
            let r = rng.gen_range(0.4..1.6);
            let a = 2.0 * PI * (j as f64 + rng.gen_range(-0.3..0.3)) / k as f64;
            pts.push([r * a.cos(), r * a.sin()]);
        }
        pts.push([1.0, 0.0]);
        let poly = TPath::polyline(&pts);
        let tr = track_roots(PolyFamily::Quartic, s, &poly, None).unwrap();
        assert_eq!(tr.permutation, reference.permutation);
        assert_eq!(loop_monodromy::<f64>(PolyFamily::Quartic, s, &poly).unwrap(), circle);
    }
    assert_eq!(annulus4().eval(&Word::parse(SurfaceSig::ANNULUS4, "B3 B2 B1 N1").unwrap()).unwrap(), circle);
}

#[test]
fn no_critical_values_no_letters() {
    assert!(braid_factorization(PolyFamily::Quartic, C::new(0.1, 0.0), &[]).unwrap().is_empty());
}
