//! The marked annulus, modelled inside a punctured disk.
//!
//! The inner boundary is replaced by two punctures `h1, h2` at `∓ε·e^(0.7i)`, so the
//! annulus with `m` marked points becomes a disk with `m + 2` punctures and
//! mapping classes become braids fixing the hole pair. The Artin action of
//! `B_{m+2}` is faithful, which gives exact equality.
//!
//! Catalog letters are defined by explicit motions in the reference fiber,
//! where the marked points sit at the `m`-th roots of unity:
//!
//! - `B1..B(m-1)`: counterclockwise half twists along the straight chords
//!   `p_j p_(j+1)`; `B0` along the closing chord `p_m p_1`, on the other side
//!   of the hole.
//! - `N1`: full counterclockwise turn of a round disk holding the hole and `p1`.
//! - `N5` (`m = 4`): the same for a disk holding the hole and `p1, p2, p3`.
//! - `TD1`, `TD2`: twists about the inner and outer boundary.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex;

use crate::braid::{artin_action, braid_of_motion, inverse, reduce};
use crate::error::McgError;
use crate::freegroup::{FreeAut, FreeWord};
use crate::surface::{SurfaceSig, Word};

type C = Complex<f64>;

/// Projection angle used for every braid word in the annulus model.
pub const PROJECTION_ANGLE: f64 = 0.1;
/// Half-distance between the two punctures standing in for the hole.
pub const HOLE_RADIUS: f64 = 1e-3;

/// Root labelling: `p_j = ζ^(start + orientation·(j-1))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dictionary {
    pub start: usize,
    pub orientation: i32,
}

/// Labelling that makes `B3 B2 B1 N1` (resp. `B2 B1 N1`) the monodromy of the
/// polynomial families; pinned by `tests/cover.rs`.
pub const DICTIONARY4: Dictionary = Dictionary {
    start: 0,
    orientation: 1,
};
pub const DICTIONARY3: Dictionary = Dictionary {
    start: 0,
    orientation: 1,
};

pub struct AnnulusModel {
    pub m: usize,
    pub dictionary: Dictionary,
    /// Strands `0..m` are `p1..pm`, then `h1`, `h2`.
    pub points: Vec<C>,
    /// Generator index (1-based) of every strand.
    pub gen_of_strand: Vec<usize>,
    pub catalog: HashMap<&'static str, Vec<i32>>,
}

impl AnnulusModel {
    pub fn new(m: usize, dictionary: Dictionary) -> Result<Self, McgError> {
        let mut points: Vec<C> = (0..m)
            .map(|j| {
                let k = dictionary.start as i64 + dictionary.orientation as i64 * j as i64;
                C::from_polar(1.0, 2.0 * PI * k.rem_euclid(m as i64) as f64 / m as f64)
            })
            .collect();
        // tilted so the hole pair is parallel to no chord between roots
        let hole = C::from_polar(HOLE_RADIUS, 0.7);
        points.push(-hole);
        points.push(hole);
        let rec = crate::braid::BraidRecorder::new(&points, PROJECTION_ANGLE);
        let mut gen_of_strand = vec![0; m + 2];
        for (pos, &s) in rec.start_order().iter().enumerate() {
            gen_of_strand[s] = pos + 1;
        }
        let mut model = AnnulusModel {
            m,
            dictionary,
            points,
            gen_of_strand,
            catalog: HashMap::new(),
        };
        let p = model.points.clone();
        let mut cat = HashMap::new();
        for j in 1..m {
            cat.insert(B_NAMES[j], model.half_twist(j - 1, j)?);
        }
        cat.insert("B0", model.half_twist(m - 1, 0)?);
        // off-centre so that no two pairs of strands cross simultaneously
        let c = C::new(0.013, 0.007);
        cat.insert("TD1", model.rotation(c * HOLE_RADIUS, 0.5)?);
        cat.insert("TD2", model.rotation(c, 2.0)?);
        cat.insert("N1", model.rotation(p[0] * 0.5, 0.6)?);
        if m == 4 {
            cat.insert("N5", model.rotation(p[3] * -0.4, 1.2)?);
        }
        model.catalog = cat;
        Ok(model)
    }

    pub fn n(&self) -> usize {
        self.m + 2
    }

    pub fn sig(&self) -> SurfaceSig {
        SurfaceSig::new(0, 2, self.m as u32)
    }

    /// Counterclockwise exchange of strands `i, j` along a thin ellipse.
    fn half_twist(&self, i: usize, j: usize) -> Result<Vec<i32>, McgError> {
        let (pi, pj) = (self.points[i], self.points[j]);
        let mid = (pi + pj) * 0.5;
        let h = (pj - pi) * 0.5;
        let pts = self.points.clone();
        braid_of_motion(
            move |t: f64| {
                let e = C::new((PI * t).cos(), 0.15 * (PI * t).sin());
                let mut v = pts.clone();
                v[i] = mid - h * e;
                v[j] = mid + h * e;
                v
            },
            PROJECTION_ANGLE,
        )
    }

    /// Rigid counterclockwise full turn of everything inside a round disk.
    fn rotation(&self, c: C, r: f64) -> Result<Vec<i32>, McgError> {
        let pts = self.points.clone();
        braid_of_motion(
            move |t: f64| {
                let rot = C::from_polar(1.0, 2.0 * PI * t);
                pts.iter()
                    .map(|&z| if (z - c).norm() < r { c + (z - c) * rot } else { z })
                    .collect()
            },
            PROJECTION_ANGLE,
        )
    }

    /// Braid word of an annulus word.
    pub fn braid_word(&self, w: &Word) -> Result<Vec<i32>, McgError> {
        if w.surface != self.sig() {
            return Err(McgError::SurfaceMismatch(
                w.surface.to_string(),
                self.sig().to_string(),
            ));
        }
        let mut out = Vec::new();
        for l in &w.letters {
            let b = self.catalog.get(l.gen.as_str()).ok_or_else(|| McgError::UnknownGenerator {
                gen: l.gen.clone(),
                surface: w.surface.to_string(),
            })?;
            let b = if l.exp < 0 { inverse(b) } else { b.clone() };
            for _ in 0..l.exp.unsigned_abs() {
                out.extend_from_slice(&b);
            }
        }
        Ok(reduce(&out))
    }

    pub fn eval(&self, w: &Word) -> Result<FreeAut, McgError> {
        Ok(artin_action(self.n(), &self.braid_word(w)?))
    }

    pub fn hole_generators(&self) -> (usize, usize) {
        (self.gen_of_strand[self.m], self.gen_of_strand[self.m + 1])
    }

    /// Which free generators have odd image in the deck group of the double
    /// cover branched at the marked points; `h1` is odd and `h2` even so that
    /// the inner boundary (`h1 h2`) is covered connectedly.
    pub fn parity(&self) -> Vec<bool> {
        let mut odd = vec![true; self.n()];
        odd[self.gen_of_strand[self.m + 1] - 1] = false;
        odd
    }

    /// The arc class `a` with `g(x_h) = a x_h a⁻¹` for both hole punctures,
    /// i.e. the image of an arc to the inner boundary, as a loop.
    pub fn arc_class(&self, g: &FreeAut) -> Result<FreeWord, McgError> {
        let (h1, h2) = self.hole_generators();
        let (x1, x2) = (FreeWord::generator(h1), FreeWord::generator(h2));
        let img1 = g.apply(&x1);
        let img2 = g.apply(&x2);
        let (core, conj) = img1.cyclic_reduction();
        if core != x1 {
            return Err(McgError::Invalid("element moves the hole".into()));
        }
        // img1 = conj⁻¹ x1 conj, so a = conj⁻¹ x1^k for the unique fitting k
        let a0 = conj.inverse();
        let bound = img2.len() as i64 + img1.len() as i64 + 2;
        for k in -bound..=bound {
            let a = a0.mul(&x1.pow(k));
            if a.mul(&x2).mul(&a.inverse()) == img2 {
                return Ok(a);
            }
        }
        Err(McgError::Invalid("element moves the hole".into()))
    }

    pub fn is_liftable(&self, g: &FreeAut) -> Result<bool, McgError> {
        Ok(!self.arc_class(g)?.parity(&self.parity()))
    }
}

const B_NAMES: [&str; 4] = ["B0", "B1", "B2", "B3"];

pub fn annulus4() -> &'static AnnulusModel {
    static M: OnceLock<AnnulusModel> = OnceLock::new();
    M.get_or_init(|| AnnulusModel::new(4, DICTIONARY4).expect("catalog motions are generic"))
}

pub fn annulus3() -> &'static AnnulusModel {
    static M: OnceLock<AnnulusModel> = OnceLock::new();
    M.get_or_init(|| AnnulusModel::new(3, DICTIONARY3).expect("catalog motions are generic"))
}

pub fn model(sig: SurfaceSig) -> Result<&'static AnnulusModel, McgError> {
    match (sig.genus, sig.boundary_count, sig.marked_points) {
        (0, 2, 4) => Ok(annulus4()),
        (0, 2, 3) => Ok(annulus3()),
        _ => Err(McgError::Invalid(format!("{sig} is not a modelled annulus"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(SurfaceSig::ANNULUS4, s).unwrap()
    }

    #[test]
    fn boundary_twists_are_central() {
        let m = annulus4();
        for g in ["B0", "B1", "B2", "B3", "N1", "N5"] {
            for d in ["TD1", "TD2"] {
                let a = m.eval(&w(&format!("{g} {d}"))).unwrap();
                let b = m.eval(&w(&format!("{d} {g}"))).unwrap();
                assert_eq!(a, b, "{g} {d}");
            }
        }
    }

    #[test]
    fn chord_braid_relations() {
        let m = annulus4();
        let e = |s: &str| m.eval(&w(s)).unwrap();
        assert_eq!(e("B1 B2 B1"), e("B2 B1 B2"));
        assert_eq!(e("B1 B3"), e("B3 B1"));
        assert_eq!(e("B3 B0 B3"), e("B0 B3 B0"));
    }

    #[test]
    fn three_point_outer_twist_lifts() {
        let m = annulus3();
        let w3 = |s: &str| Word::parse(SurfaceSig::ANNULUS3, s).unwrap();
        assert!(m.is_liftable(&m.eval(&w3("TD2")).unwrap()).unwrap());
        assert!(!m.is_liftable(&m.eval(&w3("TD1")).unwrap()).unwrap());
    }

    #[test]
    fn inner_twist_lifts_only_squared() {
        let m = annulus4();
        assert!(!m.is_liftable(&m.eval(&w("TD1")).unwrap()).unwrap());
        assert!(m.is_liftable(&m.eval(&w("TD1^2")).unwrap()).unwrap());
        // both boundaries are covered connectedly when m = 4
        assert!(!m.is_liftable(&m.eval(&w("TD2")).unwrap()).unwrap());
        assert!(m.is_liftable(&m.eval(&w("TD2^2")).unwrap()).unwrap());
        for g in ["B0", "B1", "B2", "B3", "N1", "N5"] {
            assert!(m.is_liftable(&m.eval(&w(g)).unwrap()).unwrap(), "{g}");
        }
    }
}
