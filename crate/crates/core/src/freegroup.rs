//! Reduced words in a free group of finite rank.
//!
//! Letters are nonzero `i32`: `k > 0` is the `k`-th generator (1-based),
//! `-k` its inverse.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord(Vec<i32>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    pub fn generator(k: usize) -> Self {
        FreeWord(vec![k as i32])
    }

    /// Builds a freely reduced word from arbitrary letters.
    pub fn from_letters<I: IntoIterator<Item = i32>>(letters: I) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            debug_assert!(l != 0);
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord(out)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord(out)
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `g⁻¹ · self · g`
    pub fn conjugate_by(&self, g: &FreeWord) -> FreeWord {
        g.inverse().mul(self).mul(g)
    }

    /// Replaces every generator by its image.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let mut out: Vec<i32> = Vec::new();
        for &l in &self.0 {
            let img = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                for &m in &img.0 {
                    push_reduced(&mut out, m);
                }
            } else {
                for &m in img.0.iter().rev() {
                    push_reduced(&mut out, -m);
                }
            }
        }
        FreeWord(out)
    }

    /// Exponent sum per generator.
    pub fn abelianize(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for &l in &self.0 {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    /// Cyclically reduced core together with the conjugator:
    /// `self = c⁻¹ · core · c`.
    pub fn cyclic_reduction(&self) -> (FreeWord, FreeWord) {
        let w = &self.0;
        let mut i = 0;
        let mut j = w.len();
        while j >= i + 2 && w[i] == -w[j - 1] {
            i += 1;
            j -= 1;
        }
        let core = FreeWord(w[i..j].to_vec());
        let conj = FreeWord(w[j..].to_vec());
        (core, conj)
    }

    /// Canonical representative of the conjugacy class: the least rotation
    /// of the cyclically reduced core.
    pub fn conjugacy_key(&self) -> FreeWord {
        let (core, _) = self.cyclic_reduction();
        let n = core.0.len();
        if n == 0 {
            return core;
        }
        (0..n)
            .map(|r| {
                let mut v = core.0[r..].to_vec();
                v.extend_from_slice(&core.0[..r]);
                v
            })
            .min()
            .map(FreeWord)
            .unwrap()
    }

    /// Key for an unoriented free homotopy class (a word up to conjugacy
    /// and inversion).
    pub fn unoriented_key(&self) -> FreeWord {
        let a = self.conjugacy_key();
        let b = self.inverse().conjugacy_key();
        a.min(b)
    }

    /// Parity of the total exponent restricted to the given generators.
    pub fn parity(&self, odd: &[bool]) -> bool {
        self.0
            .iter()
            .filter(|l| odd[l.unsigned_abs() as usize - 1])
            .count()
            % 2
            == 1
    }
}

fn push_reduced(out: &mut Vec<i32>, l: i32) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&l| {
                if l > 0 {
                    format!("x{l}")
                } else {
                    format!("X{}", -l)
                }
            })
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

/// Automorphism of a free group recorded by generator images.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FreeAut {
    images: Vec<FreeWord>,
}

impl FreeAut {
    pub fn identity(rank: usize) -> Self {
        FreeAut {
            images: (1..=rank).map(FreeWord::generator).collect(),
        }
    }

    pub fn from_images(images: Vec<FreeWord>) -> Self {
        FreeAut { images }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.images)
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &FreeAut) -> FreeAut {
        FreeAut {
            images: self.images.iter().map(|w| next.apply(w)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [i as i32 + 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_inverse() {
        let w = FreeWord::from_letters([1, 2, -2, 3, -3, -1, 4]);
        assert_eq!(w.letters(), &[4]);
        let a = FreeWord::from_letters([1, 2, -3]);
        assert!(a.mul(&a.inverse()).is_identity());
    }

    #[test]
    fn cyclic_keys() {
        let a = FreeWord::from_letters([2, 1, 3, -2]);
        let (core, c) = a.cyclic_reduction();
        assert_eq!(core.letters(), &[1, 3]);
        assert_eq!(core.conjugate_by(&c), a);
        assert_eq!(a.conjugacy_key(), FreeWord::from_letters([3, 1]).conjugacy_key());
        assert_eq!(a.unoriented_key(), FreeWord::from_letters([-1, -3]).unoriented_key());
    }

    #[test]
    fn substitution_is_homomorphic() {
        let imgs = vec![FreeWord::from_letters([1, 2]), FreeWord::from_letters([-1])];
        let w = FreeWord::from_letters([1, -2, 1]);
        let direct = w.substitute(&imgs);
        let piecewise = imgs[0].mul(&imgs[1].inverse()).mul(&imgs[0]);
        assert_eq!(direct, piecewise);
    }
}
