//! Numerical braid monodromy of the branch loci `q(x) = t^k` in the annulus
//! fibrations, and extraction of half-twist factorizations.
//!
//! Roots are continued along paths in the `t`-plane by an Euler predictor and
//! a Newton corrector; crossings are read off by a [`BraidRecorder`] together
//! with the two stationary punctures that stand in for the inner boundary.
//! Every extracted letter is identified exactly, by comparing its Artin
//! action with conjugates of catalog letters.

use std::f64::consts::PI;

use num_complex::Complex;
use num_traits::{Float, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annulus::{self, AnnulusModel, HOLE_RADIUS, PROJECTION_ANGLE};
use crate::braid::{artin_action, braid_of_motion, reduce, BraidRecorder, Refine};
use crate::error::McgError;
use crate::freegroup::FreeAut;
use crate::hurwitz::{FactLetter, Factorization};
use crate::surface::{conjugate, Letter, Word};

type C64 = Complex<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BraidmonError {
    #[error("degenerate family: {0}")]
    Degenerate(String),
    #[error("step collapse near path parameter {param}: roots {separation:e} apart")]
    StepCollapse { param: f64, separation: f64 },
    #[error("could not identify the letter for the critical value {target:?}: {detail}")]
    Identification { target: [f64; 2], detail: String },
    #[error("bad path: {0}")]
    BadPath(String),
    #[error("braid word is not quasipositive")]
    NotQuasipositive,
    #[error(transparent)]
    Mcg(#[from] McgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyFamily {
    /// `x⁴ − s x = t`
    Quartic,
    /// `x³ + s x = t`
    Cubic,
    /// `x⁴ + s x³ = t³`
    Quartic2,
}

impl PolyFamily {
    pub fn degree(&self) -> usize {
        match self {
            PolyFamily::Cubic => 3,
            _ => 4,
        }
    }

    /// Exponent `k` of `t` on the right-hand side.
    pub fn t_power(&self) -> i32 {
        match self {
            PolyFamily::Quartic2 => 3,
            _ => 1,
        }
    }

    /// Coefficients of `q`, constant term first.
    pub fn q_coeffs<T: Float>(&self, s: Complex<T>) -> Vec<Complex<T>> {
        let z = Complex::zero();
        let one = Complex::new(T::one(), T::zero());
        match self {
            PolyFamily::Quartic => vec![z, -s, z, z, one],
            PolyFamily::Cubic => vec![z, s, z, one],
            PolyFamily::Quartic2 => vec![z, z, z, s, one],
        }
    }

    pub fn annulus(&self) -> &'static AnnulusModel {
        match self {
            PolyFamily::Cubic => annulus::annulus3(),
            _ => annulus::annulus4(),
        }
    }
}

fn horner<T: Float>(c: &[Complex<T>], x: Complex<T>) -> Complex<T> {
    c.iter().rev().fold(Complex::zero(), |acc, &a| acc * x + a)
}

fn derivative<T: Float>(c: &[Complex<T>]) -> Vec<Complex<T>> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &a)| a * T::from(i).unwrap())
        .collect()
}

fn cpow<T: Float>(t: Complex<T>, k: i32) -> Complex<T> {
    (0..k).fold(Complex::new(T::one(), T::zero()), |acc, _| acc * t)
}

/// All roots of a polynomial (constant term first) by Aberth iteration and
/// Newton polishing. Exact zero roots are split off first.
pub fn poly_roots<T: Float>(coeffs: &[Complex<T>]) -> Result<Vec<Complex<T>>, BraidmonError> {
    let mut c: Vec<Complex<T>> = coeffs.to_vec();
    while c.last().is_some_and(|a| a.is_zero()) {
        c.pop();
    }
    if c.len() < 2 {
        return Err(BraidmonError::Degenerate("constant polynomial".into()));
    }
    let mut roots = Vec::new();
    while c[0].is_zero() {
        roots.push(Complex::zero());
        c.remove(0);
    }
    let d = c.len() - 1;
    if d == 0 {
        return Ok(roots);
    }
    let lead = c[d];
    let c: Vec<Complex<T>> = c.iter().map(|&a| a / lead).collect();
    let dc = derivative(&c);
    let bound = T::one() + c[..d].iter().fold(T::zero(), |m, a| m.max(a.norm()));
    let mut z: Vec<Complex<T>> = (0..d)
        .map(|k| {
            let ang = T::from(2.0 * PI * k as f64 / d as f64 + 0.4).unwrap();
            Complex::from_polar(bound * T::from(0.5).unwrap(), ang)
        })
        .collect();
    let eps = T::epsilon() * T::from(16.0).unwrap();
    for _ in 0..1000 {
        let mut worst = T::zero();
        for i in 0..d {
            let p = horner(&c, z[i]);
            let dp = horner(&dc, z[i]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let sum = (0..d)
                .filter(|&j| j != i)
                .fold(Complex::zero(), |acc, j| acc + (z[i] - z[j]).inv());
            let w = ratio / (Complex::new(T::one(), T::zero()) - ratio * sum);
            z[i] = z[i] - w;
            worst = worst.max(w.norm() / (T::one() + z[i].norm()));
        }
        if worst < eps {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let dp = horner(&dc, *zi);
            if dp.is_zero() {
                break;
            }
            *zi = *zi - horner(&c, *zi) / dp;
        }
    }
    roots.extend(z);
    Ok(roots)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalValues<T> {
    /// Values of `t` over which two branch points collide.
    pub branch: Vec<Complex<T>>,
    /// `t = 0`, where a branch point meets the inner boundary.
    pub nodal: Vec<Complex<T>>,
}

fn angle_key<T: Float>(z: Complex<T>) -> f64 {
    let a = z.arg().to_f64().unwrap();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Critical values of the branch locus, sorted by angle then modulus.
pub fn critical_values<T: Float>(
    f: PolyFamily,
    s: Complex<T>,
) -> Result<CriticalValues<T>, BraidmonError> {
    let q = f.q_coeffs(s);
    let xi = poly_roots(&derivative(&q))?;
    let k = f.t_power();
    let mut out: Vec<Complex<T>> = Vec::new();
    let tol = T::from(1e-9).unwrap();
    for x in xi {
        let big_t = horner(&q, x);
        let ts: Vec<Complex<T>> = if big_t.norm() <= T::epsilon() * T::from(64.0).unwrap() {
            vec![Complex::zero()]
        } else {
            let (r, th) = big_t.to_polar();
            let kk = T::from(k).unwrap();
            (0..k)
                .map(|j| {
                    let ang = (th + T::from(2.0 * PI * j as f64).unwrap()) / kk;
                    Complex::from_polar(r.powf(kk.recip()), ang)
                })
                .collect()
        };
        for t in ts {
            if !out.iter().any(|u| (*u - t).norm() <= tol * (T::one() + t.norm())) {
                out.push(t);
            }
        }
    }
    out.sort_by(|a, b| {
        let (ka, kb) = (angle_key(*a), angle_key(*b));
        ka.partial_cmp(&kb)
            .unwrap()
            .then(a.norm().partial_cmp(&b.norm()).unwrap())
    });
    Ok(CriticalValues {
        branch: out,
        nodal: vec![Complex::zero()],
    })
}

/// One piece of a path in the `t`-plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    Line { from: [f64; 2], to: [f64; 2] },
    /// Arc of the circle about `center`, angles in radians; counterclockwise
    /// when `to_angle > from_angle`.
    Arc { center: [f64; 2], radius: f64, from_angle: f64, to_angle: f64 },
}

fn c(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

fn arr(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

impl Segment {
    pub fn point(&self, tau: f64) -> C64 {
        match self {
            Segment::Line { from, to } => c(*from) + (c(*to) - c(*from)) * tau,
            Segment::Arc { center, radius, from_angle, to_angle } => {
                c(*center) + C64::from_polar(*radius, from_angle + (to_angle - from_angle) * tau)
            }
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Segment::Line { from, to } => (c(*to) - c(*from)).norm(),
            Segment::Arc { radius, from_angle, to_angle, .. } => radius * (to_angle - from_angle).abs(),
        }
    }

    pub fn reversed(&self) -> Segment {
        match self {
            Segment::Line { from, to } => Segment::Line { from: *to, to: *from },
            Segment::Arc { center, radius, from_angle, to_angle } => Segment::Arc {
                center: *center,
                radius: *radius,
                from_angle: *to_angle,
                to_angle: *from_angle,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TPath {
    pub segments: Vec<Segment>,
    /// Largest step in `t`.
    #[serde(default = "default_max_step")]
    pub max_step: f64,
}

fn default_max_step() -> f64 {
    0.05
}

impl TPath {
    pub fn new(segments: Vec<Segment>) -> Self {
        TPath { segments, max_step: default_max_step() }
    }

    pub fn polyline(points: &[[f64; 2]]) -> Self {
        TPath::new(
            points
                .windows(2)
                .map(|w| Segment::Line { from: w[0], to: w[1] })
                .collect(),
        )
    }

    /// Counterclockwise circle about the origin through `base`.
    pub fn circle(base: C64) -> Self {
        let a = base.arg();
        TPath::new(vec![Segment::Arc {
            center: [0.0, 0.0],
            radius: base.norm(),
            from_angle: a,
            to_angle: a + 2.0 * PI,
        }])
    }

    pub fn start(&self) -> Option<C64> {
        self.segments.first().map(|s| s.point(0.0))
    }

    pub fn end(&self) -> Option<C64> {
        self.segments.last().map(|s| s.point(1.0))
    }

    pub fn is_closed(&self) -> bool {
        match (self.start(), self.end()) {
            (Some(a), Some(b)) => (a - b).norm() < 1e-12,
            _ => true,
        }
    }

    pub fn reversed(&self) -> TPath {
        TPath {
            segments: self.segments.iter().rev().map(|s| s.reversed()).collect(),
            max_step: self.max_step,
        }
    }

    /// Loop that follows the path until it is `delta` away from `target`,
    /// goes once counterclockwise around `target`, and returns.
    pub fn lasso(&self, target: C64, delta: f64) -> Result<TPath, BraidmonError> {
        let (last, init) = self
            .segments
            .split_last()
            .ok_or_else(|| BraidmonError::BadPath("empty path".into()))?;
        let close = |z: C64| (z - target).norm() <= delta;
        for s in init {
            for i in 0..=256 {
                if close(s.point(i as f64 / 256.0)) {
                    return Err(BraidmonError::BadPath("path passes too close to its target".into()));
                }
            }
        }
        if close(last.point(0.0)) || !close(last.point(1.0)) {
            return Err(BraidmonError::BadPath("last segment must end at the target".into()));
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if close(last.point(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let cut = last.point(hi);
        let trimmed = match last {
            Segment::Line { from, .. } => Segment::Line { from: *from, to: arr(cut) },
            Segment::Arc { center, radius, from_angle, to_angle } => Segment::Arc {
                center: *center,
                radius: *radius,
                from_angle: *from_angle,
                to_angle: from_angle + (to_angle - from_angle) * hi,
            },
        };
        let mut out: Vec<Segment> = init.to_vec();
        out.push(trimmed);
        let a = (cut - target).arg();
        let r = (cut - target).norm();
        out.push(Segment::Arc { center: arr(target), radius: r, from_angle: a, to_angle: a + 2.0 * PI });
        let back = TPath { segments: out[..out.len() - 1].to_vec(), max_step: self.max_step }.reversed();
        out.extend(back.segments);
        Ok(TPath { segments: out, max_step: self.max_step })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BraidEvent {
    /// Strands `i`, `j` (in their starting labels) change order in the
    /// projection; `sign` is the sign of the braid letter.
    Crossing { i: usize, j: usize, sign: i32, param: f64 },
    BoundaryExit { strand: usize, param: f64 },
}

#[derive(Clone, Debug)]
pub struct Track<T> {
    pub start: Vec<Complex<T>>,
    pub end: Vec<Complex<T>>,
    /// For closed paths, strand `i` ends where strand `permutation[i]` began.
    pub permutation: Option<Vec<usize>>,
    pub events: Vec<BraidEvent>,
    /// Braid on the roots followed by the two hole punctures, generators by
    /// projection order at the start.
    pub braid: Vec<i32>,
    /// Turns of `t` around the origin.
    pub winding: f64,
}

fn hole_points<T: Float>() -> [Complex<T>; 2] {
    let h = Complex::from_polar(T::from(HOLE_RADIUS).unwrap(), T::from(0.7).unwrap());
    [-h, h]
}

struct Tracker<T: Float> {
    f: PolyFamily,
    q: Vec<Complex<T>>,
    dq: Vec<Complex<T>>,
    roots: Vec<Complex<T>>,
    rec: BraidRecorder<T>,
    events: Vec<BraidEvent>,
    exited: Vec<bool>,
    winding: T,
    max_step: T,
}

impl<T: Float> Tracker<T> {
    fn min_sep(&self, x: &[Complex<T>]) -> T {
        let mut m = T::infinity();
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                m = m.min((x[i] - x[j]).norm());
            }
        }
        m
    }

    fn velocity(&self, x: Complex<T>, t: Complex<T>) -> Complex<T> {
        let k = self.f.t_power();
        cpow(t, k - 1) * T::from(k).unwrap() / horner(&self.dq, x)
    }

    fn newton(&self, x: Complex<T>, big_t: Complex<T>) -> Option<Complex<T>> {
        let mut x = x;
        let tol = T::epsilon() * T::from(64.0).unwrap();
        for _ in 0..12 {
            let d = (horner(&self.q, x) - big_t) / horner(&self.dq, x);
            x = x - d;
            if !x.re.is_finite() || !x.im.is_finite() {
                return None;
            }
            if d.norm() <= tol * (T::one() + x.norm()) {
                return Some(x);
            }
        }
        None
    }

    fn segment(&mut self, seg: &Segment, param0: f64) -> Result<(), BraidmonError> {
        let len = seg.length();
        if len == 0.0 {
            return Ok(());
        }
        let pt = |tau: T| -> Complex<T> {
            let z = seg.point(tau.to_f64().unwrap());
            Complex::new(T::from(z.re).unwrap(), T::from(z.im).unwrap())
        };
        // chords of an arc must stay short of its length
        let sweep = match seg {
            Segment::Arc { from_angle, to_angle, .. } => (to_angle - from_angle).abs(),
            Segment::Line { .. } => 0.0,
        };
        let cap = T::from((self.max_step.to_f64().unwrap() / len).min((PI / 16.0) / sweep).min(1.0)).unwrap();
        let mut h = cap;
        let mut tau = T::zero();
        let hole = hole_points::<T>();
        let k = self.f.t_power();
        let collapse = |tau: T, sep: T| BraidmonError::StepCollapse {
            param: param0 + tau.to_f64().unwrap(),
            separation: sep.to_f64().unwrap(),
        };
        while tau < T::one() {
            let step = h.min(T::one() - tau);
            let sep = self.min_sep(&self.roots);
            if sep < T::from(1e-8).unwrap() {
                return Err(collapse(tau, sep));
            }
            if step < T::from(1e-13).unwrap() {
                return Err(collapse(tau, sep));
            }
            let t0 = pt(tau);
            let t1 = pt(tau + step);
            let dt = t1 - t0;
            let vmax = self
                .roots
                .iter()
                .fold(T::zero(), |m, &x| m.max(self.velocity(x, t0).norm()));
            let tenth = T::from(0.1).unwrap();
            if dt.norm() * vmax > tenth * sep || dt.norm() > T::from(0.3).unwrap() * t0.norm() && !t0.is_zero() {
                h = step / T::from(2.0).unwrap();
                continue;
            }
            let big_t = cpow(t1, k);
            let mut next = Vec::with_capacity(self.roots.len());
            let mut ok = true;
            for &x in &self.roots {
                let pred = x + self.velocity(x, t0) * dt;
                match self.newton(pred, big_t) {
                    Some(y) if (y - pred).norm() < T::from(0.25).unwrap() * sep => next.push(y),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok || self.min_sep(&next) < T::from(0.5).unwrap() * sep {
                h = step / T::from(2.0).unwrap();
                continue;
            }
            let mut pts = next.clone();
            pts.extend_from_slice(&hole);
            let before_order = self.rec.order().to_vec();
            let before_len = self.rec.letters().len();
            if let Err(Refine) = self.rec.advance(&pts) {
                h = step / T::from(2.0).unwrap();
                continue;
            }
            let param = param0 + (tau + step).to_f64().unwrap();
            for &l in &self.rec.letters()[before_len..] {
                let p = l.unsigned_abs() as usize;
                self.events.push(BraidEvent::Crossing {
                    i: before_order[p - 1],
                    j: before_order[p],
                    sign: l.signum(),
                    param,
                });
            }
            let near = T::from(4.0 * HOLE_RADIUS).unwrap();
            for (i, y) in next.iter().enumerate() {
                if y.norm() < near && !self.exited[i] {
                    self.exited[i] = true;
                    self.events.push(BraidEvent::BoundaryExit { strand: i, param });
                }
            }
            if !t0.is_zero() && !t1.is_zero() {
                self.winding = self.winding + (t1 / t0).arg();
            }
            self.roots = next;
            tau = tau + step;
            h = (step * T::from(1.5).unwrap()).min(cap);
        }
        Ok(())
    }
}

fn to_t<T: Float>(z: C64) -> Complex<T> {
    Complex::new(T::from(z.re).unwrap(), T::from(z.im).unwrap())
}

/// Continues the roots of `q(x) = t^k` along `path`. The recorded braid also
/// carries the two hole punctures (strands `deg`, `deg + 1`), which stay put.
pub fn track_roots<T: Float>(
    f: PolyFamily,
    s: Complex<T>,
    path: &TPath,
    start_roots: Option<&[Complex<T>]>,
) -> Result<Track<T>, BraidmonError> {
    let t0 = to_t::<T>(path.start().ok_or_else(|| BraidmonError::BadPath("empty path".into()))?);
    let q = f.q_coeffs(s);
    let start: Vec<Complex<T>> = match start_roots {
        Some(r) => r.to_vec(),
        None => {
            let mut shifted = q.clone();
            shifted[0] = shifted[0] - cpow(t0, f.t_power());
            poly_roots(&shifted)?
        }
    };
    let mut pts = start.clone();
    pts.extend_from_slice(&hole_points::<T>());
    let mut tr = Tracker {
        f,
        dq: derivative(&q),
        q,
        roots: start.clone(),
        rec: BraidRecorder::new(&pts, T::from(PROJECTION_ANGLE).unwrap()),
        events: Vec::new(),
        exited: vec![false; start.len()],
        winding: T::zero(),
        max_step: T::from(path.max_step).unwrap(),
    };
    for (i, seg) in path.segments.iter().enumerate() {
        tr.segment(seg, i as f64)?;
    }
    let end = tr.roots.clone();
    let permutation = if path.is_closed() {
        Some(match_points(&end, &start)?)
    } else {
        None
    };
    Ok(Track {
        start,
        end,
        permutation,
        events: tr.events,
        braid: tr.rec.finish(),
        winding: tr.winding.to_f64().unwrap() / (2.0 * PI),
    })
}

/// `out[i]` is the index of the point of `to` nearest `from[i]`; fails unless
/// this is a bijection.
fn match_points<T: Float>(from: &[Complex<T>], to: &[Complex<T>]) -> Result<Vec<usize>, BraidmonError> {
    let out: Vec<usize> = from
        .iter()
        .map(|&x| {
            (0..to.len())
                .min_by(|&a, &b| (to[a] - x).norm().partial_cmp(&(to[b] - x).norm()).unwrap())
                .unwrap()
        })
        .collect();
    let mut seen = vec![false; to.len()];
    for &i in &out {
        if std::mem::replace(&mut seen[i], true) {
            return Err(BraidmonError::Degenerate("root matching is not a bijection".into()));
        }
    }
    Ok(out)
}

/// Braid word, in the annulus model's generators, of the monodromy along a
/// closed path: the recorded braid conjugated into the reference positions,
/// followed by the inner boundary twist once per turn of `t^k` around 0.
pub fn loop_braid<T: Float>(f: PolyFamily, s: Complex<T>, path: &TPath) -> Result<(Vec<i32>, Track<T>), BraidmonError> {
    if !path.is_closed() {
        return Err(BraidmonError::BadPath("monodromy needs a closed path".into()));
    }
    let model = f.annulus();
    let m = model.m;
    let t0 = to_t::<T>(path.start().unwrap());
    let mut shifted = f.q_coeffs(s);
    shifted[0] = shifted[0] - cpow(t0, f.t_power());
    let roots = poly_roots(&shifted)?;
    let reference: Vec<Complex<T>> = model.points[..m].iter().map(|&z| to_t(z)).collect();
    // label roots by the nearest reference point
    let label = match_points(&reference, &roots)?;
    let labelled: Vec<Complex<T>> = label.iter().map(|&i| roots[i]).collect();
    let track = track_roots(f, s, path, Some(&labelled))?;
    if track.events.iter().any(|e| matches!(e, BraidEvent::BoundaryExit { .. })) {
        return Err(BraidmonError::BadPath("a branch point reaches the inner boundary".into()));
    }
    let perm = track.permutation.clone().unwrap();
    let hole = hole_points::<T>();
    let slide = |a: Vec<Complex<T>>, b: Vec<Complex<T>>| {
        braid_of_motion(
            move |u: T| {
                let mut v: Vec<Complex<T>> = a.iter().zip(&b).map(|(&x, &y)| x + (y - x) * u).collect();
                v.extend_from_slice(&hole);
                v
            },
            T::from(PROJECTION_ANGLE).unwrap(),
        )
    };
    let mut word = slide(reference.clone(), labelled.clone())?;
    word.extend(&track.braid);
    let back: Vec<Complex<T>> = perm.iter().map(|&j| reference[j]).collect();
    word.extend(slide(track.end.clone(), back)?);
    let turns = track.winding * f.t_power() as f64;
    let n = turns.round();
    if (turns - n).abs() > 1e-6 {
        return Err(BraidmonError::BadPath("winding is not integral".into()));
    }
    let td1 = &model.catalog["TD1"];
    for _ in 0..n.abs() as usize {
        if n > 0.0 {
            word.extend(td1);
        } else {
            word.extend(crate::braid::inverse(td1));
        }
    }
    Ok((reduce(&word), track))
}

pub fn loop_monodromy<T: Float>(f: PolyFamily, s: Complex<T>, path: &TPath) -> Result<FreeAut, BraidmonError> {
    let (w, _) = loop_braid(f, s, path)?;
    Ok(artin_action(f.annulus().n(), &w))
}

const LETTER_BASES: [&str; 6] = ["B0", "B1", "B2", "B3", "N1", "N5"];

/// Finds a catalog letter `X` and a short conjugator `W` with
/// `W⁻¹ X W = g`. Conjugators are searched breadth first, so the shortest
/// one is returned.
pub fn identify_letter(model: &AnnulusModel, g: &FreeAut, max_len: usize) -> Option<FactLetter> {
    let sig = model.sig();
    let bases: Vec<&str> = LETTER_BASES
        .iter()
        .copied()
        .filter(|b| model.catalog.contains_key(b))
        .collect();
    let gens: Vec<Letter> = bases
        .iter()
        .flat_map(|b| [Letter::new(b, 1), Letter::new(b, -1)])
        .collect();
    let ev = |w: &Word| model.eval(w).ok();
    let base_evs: Vec<FreeAut> = bases
        .iter()
        .map(|b| ev(&Word::parse(sig, b).unwrap()).unwrap())
        .collect();
    let gen_evs: Vec<(FreeAut, FreeAut)> = gens
        .iter()
        .map(|l| {
            let w = Word::new(sig, vec![l.clone()]).unwrap();
            (ev(&w).unwrap(), ev(&w.inverse()).unwrap())
        })
        .collect();
    // (conjugator letters, eval W, eval W⁻¹)
    let mut layer: Vec<(Vec<Letter>, FreeAut, FreeAut)> =
        vec![(Vec::new(), FreeAut::identity(model.n()), FreeAut::identity(model.n()))];
    for depth in 0..=max_len {
        for (w, e, ei) in &layer {
            for (b, be) in bases.iter().zip(&base_evs) {
                if &ei.then(be).then(e) == g {
                    let cand = FactLetter { base: b.to_string(), conj: w.clone() };
                    // confirm through the public evaluation path
                    let word = conjugate(&Word::parse(sig, b).unwrap(), &Word::new(sig, w.clone()).ok()?).ok()?;
                    if ev(&word).as_ref() == Some(g) {
                        return Some(cand);
                    }
                }
            }
        }
        if depth == max_len {
            break;
        }
        let mut next = Vec::new();
        for (w, e, ei) in &layer {
            for (l, (ge, gei)) in gens.iter().zip(&gen_evs) {
                if w.last().is_some_and(|x| x.gen == l.gen && x.exp == -l.exp) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(l.clone());
                next.push((w2, e.then(ge), gei.then(ei)));
            }
        }
        layer = next;
    }
    None
}

/// A target of the factorization: a branch value or the nodal value `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Target {
    pub value: C64,
    pub nodal: bool,
}

/// Targets with the default paths from `base`: along the base ray, then
/// counterclockwise on a circle outside all targets, then radially in. The
/// radii grow with the angle swept, so the paths are nested and disjoint.
pub fn default_paths(f: PolyFamily, s: C64, base: C64) -> Result<Vec<(Target, TPath)>, BraidmonError> {
    let cv = critical_values::<f64>(f, s)?;
    let mut targets: Vec<Target> = cv.branch.iter().map(|&v| Target { value: v, nodal: v.norm() < 1e-12 }).collect();
    if !targets.iter().any(|t| t.nodal) {
        targets.push(Target { value: C64::zero(), nodal: true });
    }
    let cmax = targets.iter().fold(0.0f64, |m, t| m.max(t.value.norm()));
    if base.norm() <= 2.0 * cmax.max(1e-12) {
        return Err(BraidmonError::BadPath("base point too close to the critical values".into()));
    }
    let ba = base.arg();
    let offset = |a: f64| (a - ba).rem_euclid(2.0 * PI);
    // the nodal path runs along the middle of the widest angular gap
    let mut angles: Vec<f64> = targets.iter().filter(|t| !t.nodal).map(|t| offset(t.value.arg())).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let nodal_angle = if angles.is_empty() {
        0.0
    } else {
        let mut best = (angles[0] + 2.0 * PI - angles[angles.len() - 1], angles[angles.len() - 1]);
        for w in angles.windows(2) {
            if w[1] - w[0] > best.0 {
                best = (w[1] - w[0], w[0]);
            }
        }
        (best.1 + best.0 / 2.0).rem_euclid(2.0 * PI)
    };
    let key = |t: &Target| if t.nodal { nodal_angle } else { offset(t.value.arg()) };
    targets.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    let inner = if cmax > 0.0 { 1.5 * cmax } else { 0.5 * base.norm() };
    let outer = if cmax > 0.0 { (2.5 * cmax).min(0.9 * base.norm()) } else { 0.75 * base.norm() };
    let n = targets.len();
    let dir = base / base.norm();
    let mut paths = targets
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let r = inner + (outer - inner) * i as f64 / n.max(2) as f64;
            let a = key(&t);
            let turn = ba + a;
            let corner = C64::from_polar(r, turn);
            let mut segs = vec![Segment::Line { from: arr(base), to: arr(dir * r) }];
            if a > 0.0 {
                segs.push(Segment::Arc { center: [0.0, 0.0], radius: r, from_angle: ba, to_angle: turn });
            }
            segs.push(Segment::Line { from: arr(corner), to: arr(t.value) });
            (t, TPath::new(segs))
        })
        .collect::<Vec<_>>();
    // first letter acts first, so the last path to leave is listed first
    paths.reverse();
    Ok(paths)
}

/// Lasso radius: a quarter of the smallest distance between targets.
fn lasso_radius(targets: &[C64]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..targets.len() {
        for j in i + 1..targets.len() {
            d = d.min((targets[i] - targets[j]).norm());
        }
    }
    if d.is_finite() {
        0.25 * d
    } else {
        0.01
    }
}

/// One letter per path, in path order; each path must end at its critical
/// value. The letters are the monodromies of the lassos, identified exactly.
pub fn braid_factorization(
    f: PolyFamily,
    s: C64,
    paths: &[(C64, TPath)],
) -> Result<Factorization, BraidmonError> {
    let model = f.annulus();
    let ends: Vec<C64> = paths.iter().map(|p| p.0).collect();
    let delta = lasso_radius(&ends);
    let mut letters = Vec::new();
    for (target, path) in paths {
        let lasso = path.lasso(*target, delta)?;
        let g = loop_monodromy::<f64>(f, s, &lasso)?;
        let letter = identify_letter(model, &g, 3).ok_or_else(|| BraidmonError::Identification {
            target: arr(*target),
            detail: format!("lasso braid {:?}", loop_braid::<f64>(f, s, &lasso).map(|x| x.0)),
        })?;
        letters.push(letter);
    }
    Ok(Factorization { surface: model.sig(), letters })
}

/// Factorization along the default paths from `base`.
pub fn default_factorization(f: PolyFamily, s: C64, base: C64) -> Result<Factorization, BraidmonError> {
    let paths: Vec<(C64, TPath)> = default_paths(f, s, base)?
        .into_iter()
        .map(|(t, p)| (t.value, p))
        .collect();
    braid_factorization(f, s, &paths)
}

/// Splits a braid word into bands `u σ u⁻¹` with `σ` positive, if possible.
pub fn quasipositive_bands(word: &[i32]) -> Option<Vec<(usize, usize)>> {
    let n = word.len();
    // from[i] = start of a band ending just before i in some parse
    let mut prev: Vec<Option<usize>> = vec![None; n + 1];
    let mut ok = vec![false; n + 1];
    ok[0] = true;
    for i in 0..n {
        if !ok[i] {
            continue;
        }
        let mut a = 0;
        while i + 2 * a < n {
            let mid = i + a;
            let j = i + 2 * a + 1;
            let palin = (0..a).all(|k| word[i + k] == -word[j - 1 - k]);
            if word[mid] > 0 && palin && !ok[j] {
                ok[j] = true;
                prev[j] = Some(i);
            }
            a += 1;
        }
    }
    if !ok[n] {
        return None;
    }
    let mut bands = Vec::new();
    let mut j = n;
    while j > 0 {
        let i = prev[j].unwrap();
        bands.push((i, j));
        j = i;
    }
    bands.reverse();
    Some(bands)
}

/// Genus of the braided surface of a quasipositive braid: `χ = n − bands`,
/// `g = (2 − components − χ) / 2`.
pub fn bennequin_genus(word: &[i32], strands: usize) -> Result<i64, BraidmonError> {
    if word.iter().any(|l| l.unsigned_abs() as usize >= strands.max(1)) {
        return Err(BraidmonError::BadPath("braid letter out of range".into()));
    }
    let bands = quasipositive_bands(word).ok_or(BraidmonError::NotQuasipositive)?;
    let mut perm: Vec<usize> = (0..strands).collect();
    for &l in word {
        let k = l.unsigned_abs() as usize;
        perm.swap(k - 1, k);
    }
    let mut seen = vec![false; strands];
    let mut components = 0i64;
    for i in 0..strands {
        if !seen[i] {
            components += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
            }
        }
    }
    let chi = strands as i64 - bands.len() as i64;
    let twice = 2 - components - chi;
    if twice % 2 != 0 {
        return Err(BraidmonError::Degenerate("odd Euler characteristic count".into()));
    }
    Ok(twice / 2)
}

/// Cycle lengths of a permutation, sorted.
pub fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for i in 0..perm.len() {
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_simple_polynomials() {
        let one = C64::new(1.0, 0.0);
        let r = poly_roots(&[-one, C64::zero(), C64::zero(), C64::zero(), one]).unwrap();
        assert_eq!(r.len(), 4);
        for z in r {
            assert!((z.powi(4) - one).norm() < 1e-13);
        }
        let r = poly_roots(&[C64::zero(), C64::zero(), one]).unwrap();
        assert_eq!(r, vec![C64::zero(), C64::zero()]);
    }

    #[test]
    fn quartic_critical_values() {
        let s = 0.1;
        let cv = critical_values(PolyFamily::Quartic, C64::new(s, 0.0)).unwrap();
        assert_eq!(cv.branch.len(), 3);
        let modulus = 3.0 * (s / 4.0).powf(4.0 / 3.0);
        for (z, a) in cv.branch.iter().zip([PI / 3.0, PI, 5.0 * PI / 3.0]) {
            assert!((z.norm() - modulus).abs() < 1e-12);
            assert!((angle_key(*z) - a).abs() < 1e-9);
        }
        let cv0 = critical_values(PolyFamily::Quartic, C64::zero()).unwrap();
        assert_eq!(cv0.branch, vec![C64::zero()]);
        let cubic0 = critical_values(PolyFamily::Cubic, C64::zero()).unwrap();
        assert_eq!(cubic0.branch, vec![C64::zero()]);
    }

    #[test]
    fn quartic2_critical_angles() {
        let cv = critical_values(PolyFamily::Quartic2, C64::new(0.1, 0.0)).unwrap();
        let nonzero: Vec<f64> = cv.branch.iter().filter(|z| z.norm() > 1e-12).map(|z| angle_key(*z)).collect();
        assert_eq!(nonzero.len(), 3);
        for (a, b) in nonzero.iter().zip([PI / 3.0, PI, 5.0 * PI / 3.0]) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_path_is_trivial() {
        let p = TPath::polyline(&[[1.0, 0.0], [1.0, 0.0]]);
        let tr = track_roots(PolyFamily::Quartic, C64::new(0.1, 0.0), &p, None).unwrap();
        assert!(tr.events.is_empty());
        assert_eq!(tr.permutation, Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn unit_loop_is_a_quarter_turn() {
        let tr = track_roots(PolyFamily::Quartic, C64::zero(), &TPath::circle(C64::new(1.0, 0.0)), None).unwrap();
        let perm = tr.permutation.unwrap();
        assert_eq!(cycle_type(&perm), vec![4]);
        for (i, &j) in perm.iter().enumerate() {
            let rotated = tr.start[i] * C64::new(0.0, 1.0);
            assert!((rotated - tr.start[j]).norm() < 1e-9);
        }
    }

    #[test]
    fn bands_and_genus() {
        assert_eq!(bennequin_genus(&[], 1).unwrap(), 0);
        assert_eq!(bennequin_genus(&[1, 1, 1], 2).unwrap(), 1);
        assert_eq!(bennequin_genus(&[1, 2, 3, 1, 1, 2, 3, 1], 4).unwrap(), 2);
        assert_eq!(quasipositive_bands(&[-2, 1, 2, 1]).unwrap(), vec![(0, 3), (3, 4)]);
        assert_eq!(bennequin_genus(&[-1], 2), Err(BraidmonError::NotQuasipositive));
    }
}
