//! One-vertex ribbon graph model of a compact surface with boundary, and
//! the action of Dehn twists on its fundamental group.
//!
//! The vertex is a disk whose boundary circle carries, in counterclockwise
//! order, two attaching slots per petal. Traversing petal `e` forwards leaves
//! the disk through `out(e)` and re-enters at `in(e)`. Bands are untwisted,
//! so the `j`-th strand (counted counterclockwise) of the out-slot reappears
//! as the `j`-th strand counted clockwise in the in-slot.
//!
//! A simple closed curve is given by a cyclically reduced word in the petals.
//! [`RibbonSurface::draw`] finds an embedded representative; the twist action
//! on a based loop is then the loop with a copy of the curve spliced in at
//! every transverse crossing.

use itertools::Itertools;

use crate::error::McgError;
use crate::freegroup::{FreeAut, FreeWord};

#[derive(Clone, Debug)]
pub struct RibbonSurface {
    /// Counterclockwise slot list: `(petal, is_out)`.
    slots: Vec<(usize, bool)>,
    out_slot: Vec<usize>,
    in_slot: Vec<usize>,
}

/// A point on the vertex circle: slot index and position inside the slot.
/// Gaps sit at the end of their slot.
type Point = (usize, i64);

const GAP_POS: i64 = i64::MAX / 2;

#[derive(Clone, Debug)]
pub struct DrawnCurve {
    word: Vec<i32>,
    /// Chord `k` runs from the arrival of letter `k` to the departure of
    /// letter `k + 1`.
    chords: Vec<(Point, Point)>,
    strands_per_petal: Vec<usize>,
}

impl DrawnCurve {
    pub fn word(&self) -> FreeWord {
        FreeWord::from_letters(self.word.iter().copied())
    }
}

impl RibbonSurface {
    /// `order` lists petals (1-based, as they appear counterclockwise). Each
    /// petal appears twice; its first appearance is the out-slot.
    pub fn new(order: &[usize]) -> Self {
        let rank = order.iter().copied().max().unwrap_or(0);
        let mut out_slot = vec![usize::MAX; rank];
        let mut in_slot = vec![usize::MAX; rank];
        let mut slots = Vec::with_capacity(order.len());
        for (i, &p) in order.iter().enumerate() {
            let e = p - 1;
            if out_slot[e] == usize::MAX {
                out_slot[e] = i;
                slots.push((e, true));
            } else {
                assert_eq!(in_slot[e], usize::MAX, "petal {p} listed three times");
                in_slot[e] = i;
                slots.push((e, false));
            }
        }
        assert!(in_slot.iter().all(|&s| s != usize::MAX), "petal listed once");
        RibbonSurface {
            slots,
            out_slot,
            in_slot,
        }
    }

    pub fn rank(&self) -> usize {
        self.out_slot.len()
    }

    fn partner(&self, slot: usize) -> usize {
        let (e, out) = self.slots[slot];
        if out {
            self.in_slot[e]
        } else {
            self.out_slot[e]
        }
    }

    /// Boundary components as cycles of gaps; gap `i` follows slot `i`.
    pub fn boundary_components(&self) -> Vec<Vec<usize>> {
        let n = self.slots.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut g = start;
            while !seen[g] {
                seen[g] = true;
                cyc.push(g);
                g = self.partner((g + 1) % n);
            }
            comps.push(cyc);
        }
        comps
    }

    /// Word read while walking along the boundary from the given gap with
    /// the surface on the left.
    pub fn boundary_word(&self, gap: usize) -> FreeWord {
        let n = self.slots.len();
        let mut letters = Vec::new();
        let mut g = gap;
        loop {
            let s = (g + 1) % n;
            let (e, out) = self.slots[s];
            letters.push(if out { e as i32 + 1 } else { -(e as i32 + 1) });
            g = self.partner(s);
            if g == gap {
                break;
            }
        }
        FreeWord::from_letters(letters)
    }

    fn strand_pos(&self, slot: usize, strand: usize, count: usize) -> i64 {
        let (_, out) = self.slots[slot];
        if out {
            2 * strand as i64
        } else {
            2 * (count - 1 - strand) as i64
        }
    }

    fn ends(&self, letter: i32) -> (usize, usize) {
        let e = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            (self.out_slot[e], self.in_slot[e])
        } else {
            (self.in_slot[e], self.out_slot[e])
        }
    }

    /// Finds an embedded representative of the free homotopy class of a
    /// cyclically reduced word.
    pub fn draw(&self, curve: &FreeWord) -> Result<DrawnCurve, McgError> {
        let (core, _) = curve.cyclic_reduction();
        let word: Vec<i32> = core.letters().to_vec();
        if word.is_empty() {
            return Err(McgError::NotSimple(format!("{curve:?}")));
        }
        let rank = self.rank();
        let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); rank];
        for (k, &l) in word.iter().enumerate() {
            occurrences[l.unsigned_abs() as usize - 1].push(k);
        }
        let counts: Vec<usize> = occurrences.iter().map(|o| o.len()).collect();
        let per_petal: Vec<Vec<Vec<usize>>> = occurrences
            .iter()
            .map(|o| o.iter().copied().permutations(o.len()).collect())
            .collect();
        for choice in per_petal.iter().map(|p| p.iter()).multi_cartesian_product() {
            let mut strand = vec![0usize; word.len()];
            for perm in &choice {
                for (j, &k) in perm.iter().enumerate() {
                    strand[k] = j;
                }
            }
            let chords = self.chords_for(&word, &strand, &counts);
            let crossing = (0..chords.len())
                .tuple_combinations()
                .any(|(i, j)| crosses(chords[i], chords[j]));
            if !crossing {
                return Ok(DrawnCurve {
                    word,
                    chords,
                    strands_per_petal: counts,
                });
            }
        }
        Err(McgError::NotSimple(format!("{curve:?}")))
    }

    fn chords_for(&self, word: &[i32], strand: &[usize], counts: &[usize]) -> Vec<(Point, Point)> {
        let n = word.len();
        (0..n)
            .map(|k| {
                let next = (k + 1) % n;
                let e_k = word[k].unsigned_abs() as usize - 1;
                let e_n = word[next].unsigned_abs() as usize - 1;
                let (_, arr) = self.ends(word[k]);
                let (dep, _) = self.ends(word[next]);
                let a = (arr, self.strand_pos(arr, strand[k], counts[e_k]));
                let d = (dep, self.strand_pos(dep, strand[next], counts[e_n]));
                (a, d)
            })
            .collect()
    }

    /// Twist about `curve` (right-handed for `power = 1`, left-handed for
    /// `power = -1`) acting on loops based at gap `base`, together with the
    /// image of the reference arc from `base` to gap `arc_end`, recorded as
    /// the loop `T(arc)·arc⁻¹`.
    pub fn twist(
        &self,
        curve: &DrawnCurve,
        power: i32,
        base: usize,
        arc_end: usize,
    ) -> (FreeAut, FreeWord) {
        assert!(power == 1 || power == -1);
        let b: Point = (base, GAP_POS);
        let images = (0..self.rank())
            .map(|e| {
                let m = curve.strands_per_petal[e] as i64;
                let out_pt: Point = (self.out_slot[e], -1);
                let in_pt: Point = (self.in_slot[e], 2 * m - 1);
                let first = self.insertions(curve, power, (b, out_pt));
                let last = self.insertions(curve, power, (in_pt, b));
                first.mul(&FreeWord::generator(e + 1)).mul(&last)
            })
            .collect();
        let arc = self.insertions(curve, power, (b, (arc_end, GAP_POS)));
        (FreeAut::from_images(images), arc)
    }

    fn insertions(&self, curve: &DrawnCurve, power: i32, path: (Point, Point)) -> FreeWord {
        let (a, bpt) = path;
        let mut hits: Vec<usize> = (0..curve.chords.len())
            .filter(|&k| crosses(path, curve.chords[k]))
            .collect();
        // Crossed chords are pairwise disjoint, so they are linearly ordered
        // along the path by separation from its start.
        hits.sort_by(|&i, &j| {
            if i == j {
                std::cmp::Ordering::Equal
            } else if separates(curve.chords[i], a, curve.chords[j].0) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let n = curve.word.len();
        let mut out = FreeWord::identity();
        for k in hits {
            let (c, _) = curve.chords[k];
            let forward = FreeWord::from_letters((1..=n).map(|i| curve.word[(k + i) % n]));
            let from_right = in_ccw_open(a, bpt, c);
            let backwards = from_right == (power == 1);
            out = out.mul(&if backwards { forward.inverse() } else { forward });
        }
        out
    }
}

fn in_ccw_open(a: Point, b: Point, c: Point) -> bool {
    if a < b {
        a < c && c < b
    } else {
        c > a || c < b
    }
}

fn crosses(p: (Point, Point), q: (Point, Point)) -> bool {
    in_ccw_open(p.0, p.1, q.0) != in_ccw_open(p.0, p.1, q.1)
}

/// Whether chord `q` separates point `x` from point `y`.
fn separates(q: (Point, Point), x: Point, y: Point) -> bool {
    in_ccw_open(q.0, q.1, x) != in_ccw_open(q.0, q.1, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain5() -> RibbonSurface {
        RibbonSurface::new(&[1, 2, 1, 3, 2, 4, 3, 5, 4, 5])
    }

    #[test]
    fn chain_neighbourhood_has_two_boundary_components() {
        let s = chain5();
        let comps = s.boundary_components();
        assert_eq!(comps.len(), 2);
        let total: usize = comps.iter().map(|c| c.len()).sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn boundary_words_multiply_to_a_commutator_free_relation() {
        // For Σ_{2,2} the two boundary classes are opposite in homology.
        let s = chain5();
        let comps = s.boundary_components();
        let h0 = s.boundary_word(comps[0][0]).abelianize(5);
        let h1 = s.boundary_word(comps[1][0]).abelianize(5);
        for i in 0..5 {
            assert_eq!(h0[i] + h1[i], 0);
        }
        assert!(h0.iter().any(|&x| x != 0));
    }

    #[test]
    fn non_simple_word_is_rejected() {
        let s = chain5();
        assert!(s.draw(&FreeWord::from_letters([1, 1])).is_err());
        assert!(s.draw(&FreeWord::from_letters([1])).is_ok());
    }
}
