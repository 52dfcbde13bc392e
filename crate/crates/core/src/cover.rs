//! Lifting and projecting words across the double cover Σ₂,₂ → annulus
//! branched at four points.
//!
//! Chord half-twists lift to twists about their circle preimages:
//! `B1, B2, B3 ↦ C2, C3, C4`. The nodal curves around the hole and one
//! (resp. three) marked points have two-component preimages, so
//! `N1 ↦ C1·C1P` and `N5 ↦ C5·C5P`. Both boundaries are covered
//! connectedly; only even powers of `TD1, TD2` lift, to `D1, D2`. `B0` is
//! the ψ-rotate of `B3` and lifts to the matching conjugate of `C4`.

use crate::error::McgError;
use crate::hurwitz::{FactLetter, Factorization};
use crate::surface::{conjugate, Letter, SurfaceSig, Word};

const PSI1: &str = "C4 C3 C2 C1 C1P";

fn upstairs_letters(gen: &str) -> Option<Vec<Letter>> {
    let one = |g: &str| vec![Letter::new(g, 1)];
    Some(match gen {
        "B1" => one("C2"),
        "B2" => one("C3"),
        "B3" => one("C4"),
        "N1" => vec![Letter::new("C1", 1), Letter::new("C1P", 1)],
        "N5" => vec![Letter::new("C5", 1), Letter::new("C5P", 1)],
        "B0" => {
            let psi = Word::parse(SurfaceSig::SIGMA22, PSI1).unwrap();
            let c4 = Word::parse(SurfaceSig::SIGMA22, "C4").unwrap();
            conjugate(&c4, &psi).unwrap().letters
        }
        _ => return None,
    })
}

/// Upstairs word whose projection is `w`.
pub fn lift_word(w: &Word) -> Result<Word, McgError> {
    if w.surface != SurfaceSig::ANNULUS4 {
        return Err(McgError::Invalid(format!(
            "lifting is implemented for the four-point annulus, not {}",
            w.surface
        )));
    }
    let mut out = Vec::new();
    let mut pending = [0i32; 2];
    for l in &w.letters {
        w.surface.check_generator(&l.gen)?;
        match l.gen.as_str() {
            "TD1" | "TD2" => {
                // boundary twists are central, so odd blocks may pair up later
                let i = usize::from(l.gen == "TD2");
                pending[i] += l.exp;
                if pending[i] % 2 == 0 && pending[i] != 0 {
                    let d = if i == 0 { "D1" } else { "D2" };
                    out.push(Letter::new(d, pending[i] / 2));
                    pending[i] = 0;
                }
            }
            g => {
                let up = upstairs_letters(g).expect("catalog letter");
                let block: Vec<Letter> = if l.exp > 0 {
                    up
                } else {
                    up.into_iter().rev().map(|x| Letter::new(&x.gen, -x.exp)).collect()
                };
                for _ in 0..l.exp.unsigned_abs() {
                    out.extend(block.iter().cloned());
                }
            }
        }
    }
    if let Some(i) = pending.iter().position(|&p| p % 2 != 0) {
        return Err(McgError::NotLiftable(format!(
            "odd total exponent of TD{} in {w}",
            i + 1
        )));
    }
    Word::new(SurfaceSig::SIGMA22, out)
}

/// Lifts a downstairs factorization letter by letter. A nodal letter
/// becomes the two twists about its preimage components; a boundary twist
/// has no single-twist lift and is rejected.
pub fn lift_factorization(f: &Factorization) -> Result<Factorization, McgError> {
    if f.surface != SurfaceSig::ANNULUS4 {
        return Err(McgError::Invalid(format!(
            "lifting is implemented for the four-point annulus, not {}",
            f.surface
        )));
    }
    let mut letters = Vec::new();
    for l in &f.letters {
        let conj = lift_word(&Word::new(f.surface, l.conj.clone())?)?.letters;
        match l.base.as_str() {
            "B0" => {
                let mut c: Vec<Letter> = Word::parse(SurfaceSig::SIGMA22, PSI1)?.letters;
                c.extend(conj);
                letters.push(FactLetter { base: "C4".into(), conj: c });
            }
            "TD1" | "TD2" => {
                return Err(McgError::NotLiftable(format!("single boundary twist {}", l.base)))
            }
            g => {
                let up = upstairs_letters(g).ok_or_else(|| McgError::UnknownGenerator {
                    gen: g.to_string(),
                    surface: f.surface.to_string(),
                })?;
                for u in up {
                    letters.push(FactLetter { base: u.gen, conj: conj.clone() });
                }
            }
        }
    }
    Ok(Factorization { surface: SurfaceSig::SIGMA22, letters })
}

/// Downstairs word whose lift is `w`. Twists about c₁, c₁′ (and c₅, c₅′) are
/// swapped by the deck involution, so they must occur in adjacent pairs with
/// equal exponent.
pub fn project_word(w: &Word) -> Result<Word, McgError> {
    if w.surface != SurfaceSig::SIGMA22 {
        return Err(McgError::SurfaceMismatch(
            w.surface.to_string(),
            SurfaceSig::SIGMA22.to_string(),
        ));
    }
    let letters = w.expanded();
    let mut out = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let l = &letters[i];
        let simple = match l.gen.as_str() {
            "C2" => Some(("B1", 1)),
            "C3" => Some(("B2", 1)),
            "C4" => Some(("B3", 1)),
            "D1" => Some(("TD1", 2)),
            "D2" => Some(("TD2", 2)),
            _ => None,
        };
        if let Some((g, k)) = simple {
            out.push(Letter::new(g, k * l.exp));
            i += 1;
            continue;
        }
        let (partner, nodal) = match l.gen.as_str() {
            "C1" => ("C1P", "N1"),
            "C1P" => ("C1", "N1"),
            "C5" => ("C5P", "N5"),
            "C5P" => ("C5", "N5"),
            g => {
                return Err(McgError::UnknownGenerator {
                    gen: g.to_string(),
                    surface: w.surface.to_string(),
                })
            }
        };
        match letters.get(i + 1) {
            Some(n) if n.gen == partner && n.exp == l.exp => {
                out.push(Letter::new(nodal, l.exp));
                i += 2;
            }
            _ => {
                return Err(McgError::NotSymmetric(format!(
                    "{} at position {i} has no adjacent {partner} partner",
                    l.gen
                )))
            }
        }
    }
    Word::new(SurfaceSig::ANNULUS4, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(s: &str) -> Word {
        Word::parse(SurfaceSig::SIGMA22, s).unwrap()
    }
    fn down(s: &str) -> Word {
        Word::parse(SurfaceSig::ANNULUS4, s).unwrap()
    }

    #[test]
    fn boundary_twists() {
        assert_eq!(project_word(&up("D1")).unwrap(), down("TD1^2"));
        assert_eq!(lift_word(&down("TD1^2")).unwrap(), up("D1"));
        assert!(matches!(lift_word(&down("TD1")), Err(McgError::NotLiftable(_))));
        assert_eq!(lift_word(&down("TD2 B1 TD2")).unwrap(), up("C2 D2"));
    }

    #[test]
    fn chords_and_nodes() {
        assert_eq!(lift_word(&down("B1")).unwrap(), up("C2"));
        assert_eq!(lift_word(&down("N1^-1")).unwrap(), up("C1P^-1 C1^-1"));
        assert_eq!(project_word(&up("C5P C5 C3")).unwrap(), down("N5 B2"));
        assert!(matches!(project_word(&up("C1 C2")), Err(McgError::NotSymmetric(_))));
    }
}
