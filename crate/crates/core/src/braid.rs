//! Braid words, the Artin action on free groups, and conversion of planar
//! point motions into braid words.
//!
//! Punctures are numbered by their order along a fixed projection direction
//! in the starting configuration. `σ_k` (letter `k`) exchanges the punctures
//! in positions `k` and `k + 1`; it is positive when the strand starting on
//! the left passes on the negative side of the projection line, which is the
//! case for a counterclockwise exchange.

use num_complex::Complex;
use num_traits::Float;

use crate::error::McgError;
use crate::freegroup::{FreeAut, FreeWord};

/// Artin automorphism of `F_n` for a braid word (first letter acts first).
pub fn artin_action(n: usize, letters: &[i32]) -> FreeAut {
    let mut acc = FreeAut::identity(n);
    for &l in letters {
        acc = acc.then(&artin_letter(n, l));
    }
    acc
}

fn artin_letter(n: usize, l: i32) -> FreeAut {
    let k = l.unsigned_abs() as usize;
    assert!(k >= 1 && k < n, "braid letter {l} out of range for B_{n}");
    let x = |i: usize| FreeWord::generator(i);
    let mut images: Vec<FreeWord> = (1..=n).map(x).collect();
    if l > 0 {
        images[k - 1] = x(k).mul(&x(k + 1)).mul(&x(k).inverse());
        images[k] = x(k);
    } else {
        images[k - 1] = x(k + 1);
        images[k] = x(k + 1).inverse().mul(&x(k)).mul(&x(k + 1));
    }
    FreeAut::from_images(images)
}

/// Reduces adjacent inverse pairs.
pub fn reduce(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn inverse(letters: &[i32]) -> Vec<i32> {
    letters.iter().rev().map(|l| -l).collect()
}

/// Signal that the last sample jumped too far and must be refined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Refine;

/// Records the braid traced by moving points, one sample at a time.
#[derive(Clone, Debug)]
pub struct BraidRecorder<T: Float> {
    dir: Complex<T>,
    /// `order[k]` is the strand currently in position `k`.
    order: Vec<usize>,
    last: Vec<Complex<T>>,
    letters: Vec<i32>,
    /// Smallest transverse separation accepted at a crossing.
    min_gap: T,
}

impl<T: Float> BraidRecorder<T> {
    pub fn new(start: &[Complex<T>], theta: T) -> Self {
        let dir = Complex::new(theta.cos(), -theta.sin());
        let mut order: Vec<usize> = (0..start.len()).collect();
        let proj = |z: &Complex<T>| (*z * dir).re;
        order.sort_by(|&a, &b| proj(&start[a]).partial_cmp(&proj(&start[b])).unwrap());
        BraidRecorder {
            dir,
            order,
            last: start.to_vec(),
            letters: Vec::new(),
            min_gap: T::from(1e-13).unwrap(),
        }
    }

    fn coords(&self, z: Complex<T>) -> (T, T) {
        let w = z * self.dir;
        (w.re, w.im)
    }

    /// Strand ids in projection order at the start.
    pub fn start_order(&self) -> &[usize] {
        &self.order
    }

    /// Accepts the next sample if only disjoint adjacent pairs changed order.
    pub fn advance(&mut self, next: &[Complex<T>]) -> Result<(), Refine> {
        let mut swaps = Vec::new();
        for k in 0..self.order.len().saturating_sub(1) {
            let (a, b) = (self.order[k], self.order[k + 1]);
            if self.coords(next[a]).0 > self.coords(next[b]).0 {
                swaps.push(k);
            }
        }
        // far-apart pairs may swap in the same step (parallel chords in a
        // rigid motion); their letters commute
        if swaps.windows(2).any(|w| w[1] == w[0] + 1) {
            return Err(Refine);
        }
        let mut new_order = self.order.clone();
        let mut letters = Vec::new();
        for &k in &swaps {
            let (a, b) = (self.order[k], self.order[k + 1]);
            let (pa0, va0) = self.coords(self.last[a]);
            let (pb0, vb0) = self.coords(self.last[b]);
            let (pa1, va1) = self.coords(next[a]);
            let (pb1, vb1) = self.coords(next[b]);
            let d0 = pb0 - pa0;
            let d1 = pb1 - pa1;
            let lam = d0 / (d0 - d1);
            let va = va0 + (va1 - va0) * lam;
            let vb = vb0 + (vb1 - vb0) * lam;
            // a strand must not overtake a third one in the same step
            let scale = (pa1 - pa0).abs() + (pb1 - pb0).abs();
            if (va - vb).abs() < self.min_gap.max(scale * T::from(1e-3).unwrap()) {
                return Err(Refine);
            }
            new_order.swap(k, k + 1);
            let kk = (k + 1) as i32;
            letters.push(if va < vb { kk } else { -kk });
        }
        // verify the new order is sorted (catches three-way jumps)
        for k in 0..new_order.len().saturating_sub(1) {
            if self.coords(next[new_order[k]]).0 > self.coords(next[new_order[k + 1]]).0 {
                return Err(Refine);
            }
        }
        self.letters.extend(letters);
        self.order = new_order;
        self.last = next.to_vec();
        Ok(())
    }

    pub fn current(&self) -> &[Complex<T>] {
        &self.last
    }

    pub fn finish(self) -> Vec<i32> {
        reduce(&self.letters)
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

/// Braid word of a motion `τ ↦ positions(τ)`, `τ ∈ [0, 1]`, projected along
/// angle `theta`. Positions at `τ = 1` must be a permutation of those at 0.
pub fn braid_of_motion<T: Float>(
    positions: impl Fn(T) -> Vec<Complex<T>>,
    theta: T,
) -> Result<Vec<i32>, McgError> {
    let mut rec = BraidRecorder::new(&positions(T::zero()), theta);
    let mut tau = T::zero();
    let mut h = T::from(1.0 / 64.0).unwrap();
    let min_h = T::from(1e-12).unwrap();
    while tau < T::one() {
        let step = h.min(T::one() - tau);
        match rec.advance(&positions(tau + step)) {
            Ok(()) => {
                tau = tau + step;
                h = (h * T::from(1.5).unwrap()).min(T::from(1.0 / 64.0).unwrap());
            }
            Err(Refine) => {
                h = h / T::from(2.0).unwrap();
                if h < min_h {
                    return Err(McgError::Invalid("motion passes through a collision".into()));
                }
            }
        }
    }
    Ok(rec.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    #[test]
    fn braid_relation_in_artin_action() {
        let a = artin_action(3, &[1, 2, 1]);
        let b = artin_action(3, &[2, 1, 2]);
        assert_eq!(a, b);
        assert!(artin_action(4, &[1, -1, 3, 2, -2, -3]).is_identity());
        assert_ne!(artin_action(3, &[1, 2]), artin_action(3, &[2, 1]));
    }

    #[test]
    fn counterclockwise_exchange_is_positive() {
        let w = braid_of_motion(
            |t: f64| {
                let r = C::from_polar(1.0, PI * t);
                vec![-r, r]
            },
            0.1,
        )
        .unwrap();
        assert_eq!(w, vec![1]);
        let w = braid_of_motion(
            |t: f64| {
                let r = C::from_polar(1.0, -PI * t);
                vec![-r, r]
            },
            0.1,
        )
        .unwrap();
        assert_eq!(w, vec![-1]);
    }

    #[test]
    fn full_rotation_of_three_points_is_delta_squared() {
        let pts: Vec<C> = (0..3).map(|k| C::from_polar(1.0, 2.0 * PI * k as f64 / 3.0)).collect();
        let w = braid_of_motion(
            |t: f64| pts.iter().map(|p| p * C::from_polar(1.0, 2.0 * PI * t)).collect(),
            0.1,
        )
        .unwrap();
        assert_eq!(artin_action(3, &w), artin_action(3, &[1, 2, 1, 1, 2, 1]));
    }
}
