//! Surfaces, generator catalogs and words.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::McgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceSig {
    pub genus: u32,
    #[serde(rename = "boundary")]
    pub boundary_count: u32,
    #[serde(rename = "marked")]
    pub marked_points: u32,
}

impl SurfaceSig {
    pub const fn new(genus: u32, boundary_count: u32, marked_points: u32) -> Self {
        SurfaceSig {
            genus,
            boundary_count,
            marked_points,
        }
    }

    /// Σ₂,₂, the fiber of every genus-two word in the bank.
    pub const SIGMA22: SurfaceSig = SurfaceSig::new(2, 2, 0);
    pub const SIGMA21: SurfaceSig = SurfaceSig::new(2, 1, 0);
    pub const SIGMA2: SurfaceSig = SurfaceSig::new(2, 0, 0);
    pub const SIGMA11: SurfaceSig = SurfaceSig::new(1, 1, 0);
    /// The annulus with four marked points covered by Σ₂,₂.
    pub const ANNULUS4: SurfaceSig = SurfaceSig::new(0, 2, 4);
    /// The annulus with three marked points covered by Σ₁,₃.
    pub const ANNULUS3: SurfaceSig = SurfaceSig::new(0, 2, 3);

    pub const fn sigma1n(n: u32) -> SurfaceSig {
        SurfaceSig::new(1, n, 0)
    }

    pub fn homology_rank(&self) -> usize {
        let g = self.genus as usize;
        let b = self.boundary_count as usize;
        2 * g + b.saturating_sub(1)
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_count as i64 - self.marked_points as i64
    }

    pub fn is_annulus(&self) -> bool {
        self.genus == 0 && self.boundary_count == 2 && self.marked_points > 0
    }

    /// Generator names available on this surface.
    pub fn catalog(&self) -> Result<Vec<&'static str>, McgError> {
        const S22: [&str; 9] = ["C1", "C1P", "C2", "C3", "C4", "C5", "C5P", "D1", "D2"];
        const S2: [&str; 5] = ["C1", "C2", "C3", "C4", "C5"];
        const A4: [&str; 8] = ["B0", "B1", "B2", "B3", "TD1", "TD2", "N1", "N5"];
        const A3: [&str; 6] = ["B0", "B1", "B2", "TD1", "TD2", "N1"];
        const D: [&str; 9] = ["D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8", "D9"];
        match (self.genus, self.boundary_count, self.marked_points) {
            // after capping one boundary the surviving curves keep their names
            (2, 1 | 2, 0) => Ok(S22.to_vec()),
            (2, 0, 0) => Ok(S2.to_vec()),
            (0, 2, 4) => Ok(A4.to_vec()),
            (0, 2, 3) => Ok(A3.to_vec()),
            (1, n, 0) if (1..=9).contains(&n) => {
                let mut v = vec!["A", "B"];
                v.extend_from_slice(&D[..n as usize]);
                Ok(v)
            }
            _ => Err(McgError::Invalid(format!("no generator catalog for {self}"))),
        }
    }

    pub fn check_generator(&self, gen: &str) -> Result<(), McgError> {
        if self.catalog()?.contains(&gen) {
            Ok(())
        } else {
            Err(McgError::UnknownGenerator {
                gen: gen.to_string(),
                surface: self.to_string(),
            })
        }
    }
}

impl fmt::Display for SurfaceSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.marked_points == 0 {
            write!(f, "Σ{},{}", self.genus, self.boundary_count)
        } else {
            write!(
                f,
                "Σ{},{} with {} marked points",
                self.genus, self.boundary_count, self.marked_points
            )
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: String,
    pub exp: i32,
}

impl Letter {
    pub fn new(gen: &str, exp: i32) -> Self {
        Letter {
            gen: gen.to_string(),
            exp,
        }
    }
}

/// A word in twist and half-twist generators. The first letter acts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub surface: SurfaceSig,
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty(surface: SurfaceSig) -> Self {
        Word {
            surface,
            letters: Vec::new(),
        }
    }

    /// Validated constructor; adjacent inverse letters cancel.
    pub fn new(surface: SurfaceSig, letters: Vec<Letter>) -> Result<Self, McgError> {
        let mut w = Word::empty(surface);
        for l in letters {
            surface.check_generator(&l.gen)?;
            if l.exp == 0 {
                return Err(McgError::Invalid(format!("zero exponent on {}", l.gen)));
            }
            w.push(l);
        }
        Ok(w)
    }

    /// Parses whitespace separated tokens `NAME` or `NAME^k`, e.g.
    /// `"C4 C3 C2^-1"`.
    pub fn parse(surface: SurfaceSig, text: &str) -> Result<Self, McgError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i32>()
                        .map_err(|_| McgError::Invalid(format!("bad exponent in {tok}")))?,
                ),
                None => (tok, 1),
            };
            letters.push(Letter::new(name, exp));
        }
        Word::new(surface, letters)
    }

    fn push(&mut self, l: Letter) {
        if let Some(last) = self.letters.last() {
            if last.gen == l.gen && last.exp == -l.exp {
                self.letters.pop();
                return;
            }
        }
        self.letters.push(l);
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.exp == 1)
    }

    /// Number of twists once every exponent is expanded.
    pub fn syllable_length(&self) -> usize {
        self.letters.iter().map(|l| l.exp.unsigned_abs() as usize).sum()
    }

    pub fn inverse(&self) -> Word {
        Word {
            surface: self.surface,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter::new(&l.gen, -l.exp))
                .collect(),
        }
    }

    pub fn pow(&self, n: i32) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty(self.surface);
        for _ in 0..n.unsigned_abs() {
            out = compose_unchecked(&out, &base);
        }
        out
    }

    /// Letters with exponents expanded to ±1.
    pub fn expanded(&self) -> Vec<Letter> {
        self.letters
            .iter()
            .flat_map(|l| {
                let s = l.exp.signum();
                std::iter::repeat(Letter::new(&l.gen, s)).take(l.exp.unsigned_abs() as usize)
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.exp == 1 {
                    l.gen.clone()
                } else {
                    format!("{}^{}", l.gen, l.exp)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn compose_unchecked(w1: &Word, w2: &Word) -> Word {
    let mut out = w1.clone();
    for l in &w2.letters {
        out.push(l.clone());
    }
    out
}

fn same_surface(w1: &Word, w2: &Word) -> Result<(), McgError> {
    if w1.surface != w2.surface {
        return Err(McgError::SurfaceMismatch(
            w1.surface.to_string(),
            w2.surface.to_string(),
        ));
    }
    Ok(())
}

/// `w1` followed by `w2`.
pub fn compose(w1: &Word, w2: &Word) -> Result<Word, McgError> {
    same_surface(w1, w2)?;
    Ok(compose_unchecked(w1, w2))
}

/// `g⁻¹ · w · g`, the twist word along the image of the curves of `w` under `g`.
pub fn conjugate(w: &Word, g: &Word) -> Result<Word, McgError> {
    same_surface(w, g)?;
    if w.is_empty() {
        return Ok(w.clone());
    }
    Ok(compose_unchecked(&compose_unchecked(&g.inverse(), w), g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(SurfaceSig::SIGMA22, s).unwrap()
    }

    #[test]
    fn compose_squares_psi1() {
        let psi1 = w("C4 C3 C2 C1 C1P");
        let sq = compose(&psi1, &psi1).unwrap();
        assert_eq!(sq.len(), 10);
        assert_eq!(sq, w("C4 C3 C2 C1 C1P C4 C3 C2 C1 C1P"));
    }

    #[test]
    fn identity_and_cancellation() {
        let a = w("C2 C3");
        assert_eq!(compose(&a, &Word::empty(SurfaceSig::SIGMA22)).unwrap(), a);
        assert!(compose(&w("C2"), &w("C2^-1")).unwrap().is_empty());
    }

    #[test]
    fn mismatch_and_unknown_generators() {
        let a = Word::parse(SurfaceSig::ANNULUS4, "B1").unwrap();
        assert!(matches!(compose(&w("C2"), &a), Err(McgError::SurfaceMismatch(..))));
        assert!(matches!(
            Word::parse(SurfaceSig::SIGMA22, "B1"),
            Err(McgError::UnknownGenerator { .. })
        ));
    }

    #[test]
    fn conjugation_of_empty_word() {
        let e = Word::empty(SurfaceSig::SIGMA22);
        assert!(conjugate(&e, &w("C1 C2")).unwrap().is_empty());
        assert_eq!(conjugate(&w("C3"), &w("C2")).unwrap(), w("C2^-1 C3 C2"));
    }

    #[test]
    fn homology_ranks() {
        assert_eq!(SurfaceSig::SIGMA22.homology_rank(), 5);
        assert_eq!(SurfaceSig::sigma1n(3).homology_rank(), 4);
        assert_eq!(SurfaceSig::SIGMA2.homology_rank(), 4);
        assert_eq!(SurfaceSig::SIGMA22.euler_characteristic(), -4);
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_value(w("C2^-1")).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"surface": {"genus": 2, "boundary": 2, "marked": 0},
                               "letters": [{"gen": "C2", "exp": -1}]})
        );
    }
}
