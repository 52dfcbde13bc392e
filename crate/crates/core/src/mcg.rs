//! Exact evaluation of twist words on bordered surfaces.
//!
//! An element is recorded by its action on π₁ based at a point of the first
//! boundary component, together with the images of reference arcs from the
//! base point to every other boundary component (each stored as the loop
//! `φ(arc)·arc⁻¹`). For compact surfaces with boundary this data determines
//! the mapping class.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::McgError;
use crate::freegroup::{FreeAut, FreeWord};
use crate::linalg::{identity_i64, mat_mul};
use crate::ribbon::RibbonSurface;
use crate::surface::{SurfaceSig, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactElement {
    pub aut: FreeAut,
    pub arcs: Vec<FreeWord>,
}

impl ExactElement {
    pub fn identity(rank: usize, arcs: usize) -> Self {
        ExactElement {
            aut: FreeAut::identity(rank),
            arcs: vec![FreeWord::identity(); arcs],
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ExactElement) -> ExactElement {
        ExactElement {
            aut: self.aut.then(&next.aut),
            arcs: self
                .arcs
                .iter()
                .zip(&next.arcs)
                .map(|(g1, g2)| next.aut.apply(g1).mul(g2))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.aut.is_identity() && self.arcs.iter().all(FreeWord::is_identity)
    }

    pub fn gen_images(&self) -> &[FreeWord] {
        self.aut.images()
    }
}

/// JSON view used by the CLI.
#[derive(Serialize, Deserialize)]
pub struct ExactElementJson {
    pub gen_images: Vec<Vec<i32>>,
    pub arc_images: Vec<Vec<i32>>,
}

impl From<&ExactElement> for ExactElementJson {
    fn from(e: &ExactElement) -> Self {
        ExactElementJson {
            gen_images: e.aut.images().iter().map(|w| w.letters().to_vec()).collect(),
            arc_images: e.arcs.iter().map(|w| w.letters().to_vec()).collect(),
        }
    }
}

/// A bordered surface with named curves drawn on a ribbon graph.
pub struct SurfaceModel {
    pub sig: SurfaceSig,
    pub ribbon: RibbonSurface,
    pub base_gap: usize,
    pub arc_ends: Vec<usize>,
    /// Boundary components as gap cycles; component 0 carries the base point.
    pub components: Vec<Vec<usize>>,
    pub curves: HashMap<&'static str, FreeWord>,
    twists: HashMap<&'static str, [ExactElement; 2]>,
}

impl SurfaceModel {
    fn build(
        sig: SurfaceSig,
        order: &[usize],
        curves: Vec<(&'static str, FreeWord)>,
        boundary_names: &[(&'static str, usize)],
    ) -> SurfaceModel {
        let ribbon = RibbonSurface::new(order);
        let components = ribbon.boundary_components();
        let base_gap = components[0][0];
        let arc_ends: Vec<usize> = components[1..].iter().map(|c| c[0]).collect();
        let mut curves: HashMap<&'static str, FreeWord> = curves.into_iter().collect();
        for &(name, comp) in boundary_names {
            curves.insert(name, ribbon.boundary_word(components[comp][0]));
        }
        let mut twists = HashMap::new();
        for (&name, w) in &curves {
            let drawn = ribbon.draw(w).expect("catalog curves are simple");
            let make = |p: i32| {
                let mut arcs = Vec::new();
                let mut aut = None;
                for &end in &arc_ends {
                    let (a, arc) = ribbon.twist(&drawn, p, base_gap, end);
                    arcs.push(arc);
                    aut = Some(a);
                }
                let aut = aut.unwrap_or_else(|| ribbon.twist(&drawn, p, base_gap, base_gap).0);
                ExactElement { aut, arcs }
            };
            twists.insert(name, [make(1), make(-1)]);
        }
        SurfaceModel {
            sig,
            ribbon,
            base_gap,
            arc_ends,
            components,
            curves,
            twists,
        }
    }

    pub fn rank(&self) -> usize {
        self.ribbon.rank()
    }

    pub fn twist(&self, gen: &str, exp_sign: i32) -> Result<&ExactElement, McgError> {
        let pair = self.twists.get(gen).ok_or_else(|| McgError::UnknownGenerator {
            gen: gen.to_string(),
            surface: self.sig.to_string(),
        })?;
        Ok(&pair[usize::from(exp_sign < 0)])
    }

    pub fn identity(&self) -> ExactElement {
        ExactElement::identity(self.rank(), self.arc_ends.len())
    }

    pub fn eval(&self, w: &Word) -> Result<ExactElement, McgError> {
        if w.surface != self.sig {
            return Err(McgError::SurfaceMismatch(
                w.surface.to_string(),
                self.sig.to_string(),
            ));
        }
        let mut acc = self.identity();
        for l in &w.letters {
            let t = self.twist(&l.gen, l.exp.signum())?;
            for _ in 0..l.exp.unsigned_abs() {
                acc = acc.then(t);
            }
        }
        Ok(acc)
    }

    /// Homology class of a named curve (in the petal basis, oriented).
    pub fn curve_class(&self, gen: &str) -> Option<Vec<i64>> {
        self.curves.get(gen).map(|w| w.abelianize(self.rank()))
    }

    /// Algebraic intersection form on petal classes, read off from the twist
    /// action: `T_c(x) = x + ⟨x, c⟩ c`.
    pub fn pairing(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut j = vec![vec![0; n]; n];
        for b in 0..n {
            let petal = FreeWord::generator(b + 1);
            let drawn = self.ribbon.draw(&petal).expect("petals are simple");
            let (aut, _) = self.ribbon.twist(&drawn, 1, self.base_gap, self.base_gap);
            for (a, row) in j.iter_mut().enumerate() {
                let img = aut.images()[a].abelianize(n);
                row[b] = img[b] - i64::from(a == b);
            }
        }
        j
    }
}

fn sigma22() -> &'static SurfaceModel {
    static M: OnceLock<SurfaceModel> = OnceLock::new();
    M.get_or_init(|| {
        let w = |l: &[i32]| FreeWord::from_letters(l.iter().copied());
        SurfaceModel::build(
            SurfaceSig::SIGMA22,
            &[1, 2, 1, 3, 2, 4, 3, 5, 4, 5],
            vec![
                ("C1", w(&[1])),
                ("C2", w(&[2])),
                ("C3", w(&[3])),
                ("C4", w(&[4])),
                ("C5", w(&[5])),
                ("C1P", w(&[-5, -4, -3, 4])),
                ("C5P", w(&[-3, -1])),
            ],
            &[("D1", 0), ("D2", 1)],
        )
    })
}

fn sigma1n(n: u32) -> &'static SurfaceModel {
    static M: OnceLock<Vec<SurfaceModel>> = OnceLock::new();
    let all = M.get_or_init(|| {
        (1..=9u32)
            .map(|n| {
                let mut order = vec![1, 2, 1, 2];
                for p in 3..=(n as usize + 1) {
                    order.extend([p, p]);
                }
                const D: [&str; 9] = ["D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8", "D9"];
                let bnames: Vec<(&'static str, usize)> =
                    (0..n as usize).map(|k| (D[k], k)).collect();
                SurfaceModel::build(
                    SurfaceSig::sigma1n(n),
                    &order,
                    vec![
                        ("A", FreeWord::generator(1)),
                        ("B", FreeWord::generator(2)),
                    ],
                    &bnames,
                )
            })
            .collect()
    });
    &all[n as usize - 1]
}

/// The exact model for a bordered surface, if we have one.
pub fn model(sig: SurfaceSig) -> Result<&'static SurfaceModel, McgError> {
    match (sig.genus, sig.boundary_count, sig.marked_points) {
        (2, 2, 0) => Ok(sigma22()),
        (1, n, 0) if (1..=9).contains(&n) => Ok(sigma1n(n)),
        _ => Err(McgError::Invalid(format!("no exact model for {sig}"))),
    }
}

/// Exact element of a word: the ribbon model for bordered surfaces, the
/// Artin action (no arcs) for marked annuli.
pub fn exact_eval(w: &Word) -> Result<ExactElement, McgError> {
    if w.surface.is_annulus() {
        let a = crate::annulus::model(w.surface)?;
        return Ok(ExactElement {
            aut: a.eval(w)?,
            arcs: Vec::new(),
        });
    }
    model(w.surface)?.eval(w)
}

pub fn exact_equal(w1: &Word, w2: &Word) -> Result<bool, McgError> {
    if w1.surface != w2.surface {
        return Err(McgError::SurfaceMismatch(
            w1.surface.to_string(),
            w2.surface.to_string(),
        ));
    }
    Ok(exact_eval(w1)? == exact_eval(w2)?)
}

/// Symplectic (or degenerate, for several boundary components) image in
/// `GL(H₁)`. Rows are coordinates, columns are images of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRep {
    pub matrix: Vec<Vec<i64>>,
    /// Intersection form on the basis.
    pub pairing: Vec<Vec<i64>>,
}

pub fn homology_model(sig: SurfaceSig) -> Result<&'static SurfaceModel, McgError> {
    // Capped genus-two surfaces reuse the Σ₂,₂ curves: capping only adds
    // relations among boundary classes, which are invariant under every twist.
    match (sig.genus, sig.boundary_count, sig.marked_points) {
        (2, 0..=2, 0) => Ok(sigma22()),
        _ => model(sig),
    }
}

/// Transvection `x ↦ x + ε⟨x, c⟩ c` applied `exp` times.
pub fn homology_eval(w: &Word) -> Result<HomologyRep, McgError> {
    let m = homology_model(w.surface)?;
    let n = m.rank();
    let j = m.pairing();
    let mut acc = identity_i64(n);
    for l in &w.letters {
        w.surface.check_generator(&l.gen)?;
        let c = m.curve_class(&l.gen).ok_or_else(|| McgError::UnknownGenerator {
            gen: l.gen.clone(),
            surface: w.surface.to_string(),
        })?;
        // ⟨e_a, c⟩ for each basis vector
        let pc: Vec<i64> = (0..n)
            .map(|a| (0..n).map(|b| j[a][b] * c[b]).sum())
            .collect();
        let t: Vec<Vec<i64>> = (0..n)
            .map(|r| (0..n).map(|a| i64::from(r == a) + l.exp as i64 * pc[a] * c[r]).collect())
            .collect();
        acc = mat_mul(&t, &acc);
    }
    Ok(HomologyRep {
        matrix: acc,
        pairing: j,
    })
}

/// Homology action read off from the exact element by abelianizing.
pub fn abelianized_action(e: &ExactElement) -> Vec<Vec<i64>> {
    let n = e.aut.rank();
    let cols: Vec<Vec<i64>> = e.aut.images().iter().map(|w| w.abelianize(n)).collect();
    (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect()
}
