//! Invariants of Lefschetz fibrations over the disk read off from their
//! monodromy words: Betti numbers from the handle decomposition, signature
//! via capping to a closed genus-two fibration, abelianization obstructions
//! and the Laufer flatness certificate.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::McgError;
use crate::hurwitz::{FactLetter, Factorization};
use crate::linalg::{from_i64, inertia, nullspace, rank, Matrix};
use crate::mcg::{exact_eval, homology_eval, homology_model};
use crate::surface::{Letter, SurfaceSig, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveClass {
    Trivial,
    BoundaryParallel { boundary: u32 },
    Nonseparating,
    SeparatingType { h: u32 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiReport {
    pub chi: i64,
    pub b1: i64,
    pub b2: i64,
    pub b2_plus: Option<i64>,
    pub b2_minus: Option<i64>,
    pub b2_zero: Option<i64>,
    pub sigma: Option<i64>,
}

impl BettiReport {
    pub fn is_negative_semidefinite(&self) -> Option<bool> {
        self.b2_plus.map(|p| p == 0)
    }

    pub fn is_negative_definite(&self) -> Option<bool> {
        Some(self.b2_plus? == 0 && self.b2_zero? == 0)
    }

    /// Report of a plumbing or resolution with the given numbers.
    pub fn from_numbers(b1: i64, b2_plus: i64, b2_minus: i64, b2_zero: i64) -> Self {
        let b2 = b2_plus + b2_minus + b2_zero;
        BettiReport {
            chi: 1 - b1 + b2,
            b1,
            b2,
            b2_plus: Some(b2_plus),
            b2_minus: Some(b2_minus),
            b2_zero: Some(b2_zero),
            sigma: Some(b2_plus - b2_minus),
        }
    }
}

/// Classes of capped boundaries, which die in the homology of the capped
/// genus-two surfaces. Both boundaries of Σ₂,₂ have class ±d.
fn capped_kernel(sig: SurfaceSig) -> Result<Vec<Vec<i64>>, McgError> {
    let m = homology_model(sig)?;
    if sig.genus == 2 && sig.boundary_count < 2 {
        Ok(vec![m.curve_class("D1").expect("boundary class")])
    } else {
        Ok(Vec::new())
    }
}

fn class_rank(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m: Matrix<BigRational> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    rank(&m)
}

/// Homology class (up to sign) of the curve of a single twist letter.
/// `conj⁻¹ · T_c · conj` twists about the image of `c` under `conj`, whose
/// class is the homology action of `conj` applied to `[c]`.
pub fn vanishing_class(surface: SurfaceSig, letter: &FactLetter) -> Result<Vec<i64>, McgError> {
    let m = homology_model(surface)?;
    let c = m.curve_class(&letter.base).ok_or_else(|| McgError::UnknownGenerator {
        gen: letter.base.clone(),
        surface: surface.to_string(),
    })?;
    let h = homology_eval(&Word::new(surface, letter.conj.clone())?)?.matrix;
    Ok((0..c.len())
        .map(|r| (0..c.len()).map(|k| h[r][k] * c[k]).sum())
        .collect())
}

/// Class read off from the transvection `x ↦ x + ⟨x, v⟩ v` of the letter;
/// zero for curves whose class lies in the radical (boundary classes).
pub fn transvection_class(surface: SurfaceSig, letter: &FactLetter) -> Result<Vec<i64>, McgError> {
    let h = homology_eval(&letter.word(surface)?)?.matrix;
    let n = h.len();
    let col = (0..n).find_map(|j| {
        let c: Vec<i64> = (0..n).map(|r| h[r][j] - i64::from(r == j)).collect();
        c.iter().any(|&x| x != 0).then_some(c)
    });
    let Some(col) = col else {
        return Ok(vec![0; n]);
    };
    let g = col.iter().fold(0i64, |a, &b| num_integer::gcd(a, b));
    Ok(col.iter().map(|x| x / g).collect())
}

pub fn classify_curve(surface: SurfaceSig, letter: &FactLetter) -> Result<CurveClass, McgError> {
    let e = exact_eval(&letter.word(surface)?)?;
    if e.is_identity() {
        return Ok(CurveClass::Trivial);
    }
    for (k, d) in ["D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8", "D9"]
        .iter()
        .enumerate()
        .take(surface.boundary_count as usize)
    {
        if exact_eval(&Word::new(surface, vec![Letter::new(d, 1)])?)? == e {
            return Ok(CurveClass::BoundaryParallel { boundary: k as u32 + 1 });
        }
    }
    let v = vanishing_class(surface, letter)?;
    // a curve separates iff it separates the surface with all boundaries capped
    let m = homology_model(surface)?;
    let mut kernel: Vec<Vec<i64>> = (1..=surface.boundary_count)
        .filter_map(|k| m.curve_class(&format!("D{k}")))
        .collect();
    let base = class_rank(&kernel);
    kernel.push(v);
    if class_rank(&kernel) > base {
        Ok(CurveClass::Nonseparating)
    } else {
        Ok(CurveClass::SeparatingType { h: 1 })
    }
}

fn betti_from_classes(
    surface: SurfaceSig,
    classes: Vec<Vec<i64>>,
    length: usize,
) -> Result<BettiReport, McgError> {
    let kernel = capped_kernel(surface)?;
    let full = homology_model(surface)?.rank();
    let h1_rank = full - class_rank(&kernel);
    let mut all = kernel.clone();
    all.extend(classes);
    let span = class_rank(&all) - class_rank(&kernel);
    let b1 = (h1_rank - span) as i64;
    let chi = surface.euler_characteristic() + length as i64;
    Ok(BettiReport {
        chi,
        b1,
        // the total space is a 2-complex, so χ = 1 − b1 + b2
        b2: chi - 1 + b1,
        ..Default::default()
    })
}

/// Betti numbers of the Lefschetz fibration over the disk with monodromy
/// word `w` (each letter one vanishing cycle).
pub fn lefschetz_betti(w: &Word) -> Result<BettiReport, McgError> {
    if !w.is_positive() && !w.expanded().iter().all(|l| l.exp > 0) {
        return Err(McgError::NotPositive);
    }
    let m = homology_model(w.surface)?;
    let letters = w.expanded();
    let classes = letters
        .iter()
        .map(|l| {
            m.curve_class(&l.gen).ok_or_else(|| McgError::UnknownGenerator {
                gen: l.gen.clone(),
                surface: w.surface.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    betti_from_classes(w.surface, classes, letters.len())
}

/// As [`lefschetz_betti`] for factorizations with conjugated letters.
pub fn lefschetz_betti_factorization(f: &Factorization) -> Result<BettiReport, McgError> {
    let classes = f
        .letters
        .iter()
        .map(|l| vanishing_class(f.surface, l))
        .collect::<Result<Vec<_>, _>>()?;
    betti_from_classes(f.surface, classes, f.len())
}

/// Caps the listed boundaries (1 and/or 2) of a Σ₂,₂ word. Curves that
/// cobound a pair of pants with a capped boundary merge with their partner
/// (c₁′ with c₁ for ∂₁, c₅′ with c₅ for ∂₂) and twists about capped
/// boundaries become trivial, each recorded as a blow-up.
pub fn cap_word(w: &Word, caps: &[u32]) -> Result<(Word, usize), McgError> {
    if w.surface != SurfaceSig::SIGMA22 {
        return Err(McgError::SurfaceMismatch(
            w.surface.to_string(),
            SurfaceSig::SIGMA22.to_string(),
        ));
    }
    if caps.iter().any(|c| !(1..=2).contains(c)) {
        return Err(McgError::Invalid(format!("no boundary among {caps:?}")));
    }
    let caps: BTreeSet<u32> = caps.iter().copied().collect();
    let surface = SurfaceSig::new(2, 2 - caps.len() as u32, 0);
    let mut blowups = 0usize;
    let mut out = Vec::new();
    for l in &w.letters {
        let gen = match l.gen.as_str() {
            "C1P" if caps.contains(&1) => "C1",
            "C5P" if caps.contains(&2) => "C5",
            "D1" if caps.contains(&1) => {
                blowups += l.exp.unsigned_abs() as usize;
                continue;
            }
            "D2" if caps.contains(&2) => {
                blowups += l.exp.unsigned_abs() as usize;
                continue;
            }
            g => g,
        };
        out.push(Letter::new(gen, l.exp));
    }
    Ok((Word::new(surface, out)?, blowups))
}

/// Signature of a closed genus-two Lefschetz fibration with `n0`
/// nonseparating and `s1` separating vanishing cycles, blown up `blowups`
/// times: `−(3/5)·n0 − (1/5)·s1 − blowups`.
pub fn hyperelliptic_signature(n0: i64, s1: i64, blowups: i64) -> Result<i64, McgError> {
    let num = 3 * n0 + s1;
    if num % 5 != 0 {
        return Err(McgError::Invalid(format!(
            "3·{n0} + {s1} is not divisible by 5"
        )));
    }
    Ok(-num / 5 - blowups)
}

/// σ(X) from σ(X ∪ N) and σ(N), glued along a common boundary.
pub fn novikov_assemble(sigma_closed: i64, sigma_complement: i64) -> i64 {
    sigma_closed - sigma_complement
}

/// Full report for a Σ₂,₂ word. The signature is obtained by capping both
/// boundaries and correcting by the complement's signature, which must be
/// supplied unless there is no second homology to sign.
pub fn definiteness_report(
    w: &Word,
    b2_zero: i64,
    complement_sigma: Option<i64>,
) -> Result<BettiReport, McgError> {
    let mut r = lefschetz_betti(w)?;
    let nondegenerate = r.b2 - b2_zero;
    let sigma = if nondegenerate == 0 {
        0
    } else {
        let comp = complement_sigma.ok_or_else(|| {
            McgError::Invalid("complement signature required for a nonzero form".into())
        })?;
        let (capped, blowups) = cap_word(w, &[1, 2])?;
        let (mut n0, mut s1) = (0, 0);
        for l in capped.expanded() {
            match classify_curve(SurfaceSig::SIGMA22, &FactLetter::bare(&l.gen))? {
                CurveClass::Nonseparating => n0 += 1,
                CurveClass::SeparatingType { .. } => s1 += 1,
                _ => {}
            }
        }
        novikov_assemble(hyperelliptic_signature(n0, s1, blowups as i64)?, comp)
    };
    if (nondegenerate + sigma) % 2 != 0 || sigma.abs() > nondegenerate {
        return Err(McgError::Invalid(format!(
            "signature {sigma} incompatible with b2 − b2⁰ = {nondegenerate}"
        )));
    }
    r.b2_zero = Some(b2_zero);
    r.sigma = Some(sigma);
    r.b2_plus = Some((nondegenerate + sigma) / 2);
    r.b2_minus = Some((nondegenerate - sigma) / 2);
    Ok(r)
}

/// Exact intersection form when all vanishing cycles are pairwise
/// algebraically disjoint (e.g. boundary-parallel): a relation `a` among the
/// handles is a class of square `−Σ aᵢ²`.
pub fn isotropic_form_report(w: &Word) -> Result<BettiReport, McgError> {
    let mut r = lefschetz_betti(w)?;
    let m = homology_model(w.surface)?;
    let pairing = m.pairing();
    let classes: Vec<Vec<i64>> = w
        .expanded()
        .iter()
        .map(|l| m.curve_class(&l.gen).expect("checked by lefschetz_betti"))
        .collect();
    let dot = |u: &[i64], v: &[i64]| -> i64 {
        (0..u.len())
            .map(|i| (0..v.len()).map(|j| u[i] * pairing[i][j] * v[j]).sum::<i64>())
            .sum()
    };
    if classes.iter().tuple_combinations().any(|(u, v)| dot(u, v) != 0) {
        return Err(McgError::Invalid(format!("vanishing cycles of {w} intersect")));
    }
    let n = classes.len();
    let rows = m.rank();
    let a: Matrix<BigRational> =
        from_i64(&(0..rows).map(|i| classes.iter().map(|c| c[i]).collect()).collect::<Vec<_>>());
    let kernel = nullspace(&a, n);
    if kernel.len() as i64 != r.b2 {
        return Err(McgError::Invalid("relation count disagrees with b2".into()));
    }
    let gram: Matrix<BigRational> = kernel
        .iter()
        .map(|u| {
            kernel
                .iter()
                .map(|v| -u.iter().zip(v).fold(BigRational::from_integer(0.into()), |s, (x, y)| s + x * y))
                .collect()
        })
        .collect();
    let (pos, neg, zero) = inertia(&gram);
    r.b2_plus = Some(pos as i64);
    r.b2_minus = Some(neg as i64);
    r.b2_zero = Some(zero as i64);
    r.sigma = Some(pos as i64 - neg as i64);
    Ok(r)
}

/// Negative semi-definiteness inherited from an ambient fibration: the
/// handlebody of a consecutive subword sits inside the ambient one, so its
/// form embeds in the ambient form.
pub fn definiteness_by_embedding(
    w: &Word,
    ambient: &Word,
    ambient_report: &BettiReport,
    b2_zero: i64,
) -> Result<BettiReport, McgError> {
    let sub = w.expanded();
    let amb = ambient.expanded();
    let contained = sub.is_empty()
        || amb.windows(sub.len()).any(|win| win == sub.as_slice());
    if !contained {
        return Err(McgError::Invalid(format!("{w} is not a subword of {ambient}")));
    }
    if ambient_report.b2_plus != Some(0) {
        return Err(McgError::Invalid("ambient form is not negative semi-definite".into()));
    }
    let mut r = lefschetz_betti(w)?;
    r.b2_plus = Some(0);
    r.b2_zero = Some(b2_zero);
    r.b2_minus = Some(r.b2 - b2_zero);
    r.sigma = Some(b2_zero - r.b2);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbelianContext {
    /// H₁(MCG(Σ₂)) = ℤ/10.
    ClosedGenus2,
    /// Counting homomorphism for Σ₁,₁ from the chain relation (AB)⁶ = ∂.
    Sigma11,
}

pub fn abelianization_value(class: &CurveClass, context: AbelianContext) -> Result<i64, McgError> {
    match (context, class) {
        (_, CurveClass::Trivial) => Ok(0),
        (AbelianContext::ClosedGenus2, CurveClass::Nonseparating) => Ok(1),
        (AbelianContext::ClosedGenus2, CurveClass::SeparatingType { .. }) => Ok(2),
        (AbelianContext::ClosedGenus2, CurveClass::BoundaryParallel { .. }) => Err(
            McgError::Invalid("closed surfaces have no boundary twists".into()),
        ),
        (AbelianContext::Sigma11, CurveClass::BoundaryParallel { .. }) => Ok(12),
        (AbelianContext::Sigma11, _) => Ok(1),
    }
}

/// All multisets of `count` values from `allowed` summing to `target`
/// (modulo `modulus` when given), each sorted, in lexicographic order.
pub fn abelian_obstruction_solve(
    target: i64,
    modulus: Option<i64>,
    count: usize,
    allowed: &[i64],
) -> Result<Vec<Vec<i64>>, McgError> {
    if count > 24 {
        return Err(McgError::Invalid(format!("count {count} exceeds 24")));
    }
    let vals: BTreeSet<i64> = allowed.iter().copied().collect();
    let reduce = |x: i64| modulus.map_or(x, |m| x.rem_euclid(m));
    let mut out: Vec<Vec<i64>> = vals
        .iter()
        .copied()
        .combinations_with_replacement(count)
        .filter(|c| reduce(c.iter().sum()) == reduce(target))
        .collect();
    out.sort();
    Ok(out)
}

/// Same Betti numbers and matching definiteness: the condition under which a
/// deformation of the singularity lifts to a flat deformation of the
/// resolution.
pub fn laufer_certificate(word: &BettiReport, graph: &BettiReport) -> Result<bool, McgError> {
    let complete = |r: &BettiReport| r.b2_plus.is_some() && r.b2_minus.is_some() && r.b2_zero.is_some();
    if !complete(word) || !complete(graph) {
        return Err(McgError::Invalid("Laufer certificate needs full reports".into()));
    }
    Ok(word.b1 == graph.b1
        && word.b2 == graph.b2
        && word.b2_plus == Some(0)
        && graph.b2_plus == Some(0)
        && word.b2_minus == graph.b2_minus
        && word.b2_zero == graph.b2_zero)
}

/// `K² = 4·d₃ + 2χ + 3σ`.
pub fn k_squared(d3: &BigRational, chi: i64, sigma: i64) -> BigRational {
    let int = |x: i64| BigRational::from_integer(BigInt::from(x));
    int(4) * d3 + int(2 * chi + 3 * sigma)
}
