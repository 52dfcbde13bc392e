//! Plumbing graphs of resolutions and central fibers.
//!
//! All arithmetic is exact: intersection forms are classified over
//! [`crate::Rational`].

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{determinant, from_i64, inertia, rank, smith_diagonal, Matrix};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub e: i64,
    #[serde(default)]
    pub g: u32,
    #[serde(default = "one")]
    pub m: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub at: usize,
    #[serde(default = "one")]
    pub m: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbingGraph {
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub arrows: Vec<Arrow>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlumbingError {
    #[error("vertex {0} is not a (-1)-sphere")]
    NotBlowdownable(usize),
    #[error("vertex {0} has valence {1}; only normal crossings can be blown down")]
    NonNormalCrossing(usize, usize),
    #[error("no vertex with id {0}")]
    UnknownVertex(usize),
    #[error("invalid graph: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Definiteness {
    Definite,
    Semidefinite { corank: usize },
    Indefinite,
}

impl PlumbingGraph {
    pub fn validate(&self) -> Result<(), PlumbingError> {
        let ids: BTreeSet<usize> = self.vertices.iter().map(|v| v.id).collect();
        if ids.len() != self.vertices.len() {
            return Err(PlumbingError::Invalid("duplicate vertex id".into()));
        }
        for [a, b] in &self.edges {
            if a == b {
                return Err(PlumbingError::Invalid(format!("self-loop at {a}")));
            }
            for x in [a, b] {
                if !ids.contains(x) {
                    return Err(PlumbingError::UnknownVertex(*x));
                }
            }
        }
        for a in &self.arrows {
            if !ids.contains(&a.at) {
                return Err(PlumbingError::UnknownVertex(a.at));
            }
            if a.m == 0 {
                return Err(PlumbingError::Invalid("arrow multiplicity 0".into()));
            }
        }
        if self.vertices.iter().any(|v| v.m == 0) {
            return Err(PlumbingError::Invalid("vertex multiplicity 0".into()));
        }
        Ok(())
    }

    fn index(&self) -> BTreeMap<usize, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v.id, i)).collect()
    }

    fn valence(&self, id: usize) -> usize {
        self.edges.iter().filter(|[a, b]| *a == id || *b == id).count()
            + self.arrows.iter().filter(|a| a.at == id).count()
    }
}

pub fn intersection_matrix(g: &PlumbingGraph) -> Vec<Vec<i64>> {
    let idx = g.index();
    let n = g.vertices.len();
    let mut m = vec![vec![0; n]; n];
    for (i, v) in g.vertices.iter().enumerate() {
        m[i][i] = v.e;
    }
    for [a, b] in &g.edges {
        let (i, j) = (idx[a], idx[b]);
        m[i][j] += 1;
        m[j][i] += 1;
    }
    m
}

fn rational_matrix(g: &PlumbingGraph) -> Matrix<Rational> {
    from_i64(&intersection_matrix(g))
}

pub fn is_negative_definite(g: &PlumbingGraph) -> Definiteness {
    let (pos, _neg, zero) = inertia(&rational_matrix(g));
    match (pos, zero) {
        (0, 0) => Definiteness::Definite,
        (0, z) => Definiteness::Semidefinite { corank: z },
        _ => Definiteness::Indefinite,
    }
}

/// Cycle rank of the graph on the compact vertices.
fn cycle_rank(g: &PlumbingGraph) -> usize {
    let idx = g.index();
    let mut parent: Vec<usize> = (0..g.vertices.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut cycles = 0;
    for [a, b] in &g.edges {
        let (ra, rb) = (find(&mut parent, idx[a]), find(&mut parent, idx[b]));
        if ra == rb {
            cycles += 1;
        } else {
            parent[ra] = rb;
        }
    }
    cycles
}

/// `(b1, b2)` of the plumbed 4-manifold.
pub fn betti(g: &PlumbingGraph) -> (usize, usize) {
    let genus: usize = g.vertices.iter().map(|v| v.g as usize).sum();
    (2 * genus + cycle_rank(g), g.vertices.len())
}

/// Residual `m_v e_v + Σ m_u + Σ m_arrow` at each vertex; all zero for a
/// central fiber.
pub fn fiber_condition(g: &PlumbingGraph) -> (bool, Vec<i64>) {
    let idx = g.index();
    let mut res: Vec<i64> = g.vertices.iter().map(|v| v.m as i64 * v.e).collect();
    for [a, b] in &g.edges {
        let (i, j) = (idx[a], idx[b]);
        res[i] += g.vertices[j].m as i64;
        res[j] += g.vertices[i].m as i64;
    }
    for a in &g.arrows {
        res[idx[&a.at]] += a.m as i64;
    }
    (res.iter().all(|&r| r == 0), res)
}

pub fn blow_down(g: &PlumbingGraph, id: usize) -> Result<PlumbingGraph, PlumbingError> {
    let v = g
        .vertices
        .iter()
        .find(|v| v.id == id)
        .ok_or(PlumbingError::UnknownVertex(id))?;
    if v.e != -1 || v.g != 0 {
        return Err(PlumbingError::NotBlowdownable(id));
    }
    let val = g.valence(id);
    if val > 2 {
        return Err(PlumbingError::NonNormalCrossing(id, val));
    }
    let nbrs: Vec<usize> = g
        .edges
        .iter()
        .filter_map(|&[a, b]| {
            if a == id {
                Some(b)
            } else if b == id {
                Some(a)
            } else {
                None
            }
        })
        .collect();
    let mut out = PlumbingGraph {
        vertices: g.vertices.iter().filter(|u| u.id != id).cloned().collect(),
        edges: g.edges.iter().filter(|[a, b]| *a != id && *b != id).copied().collect(),
        arrows: g.arrows.iter().filter(|a| a.at != id).cloned().collect(),
    };
    for u in out.vertices.iter_mut() {
        u.e += nbrs.iter().filter(|&&n| n == u.id).count() as i64;
    }
    let own_arrows: Vec<&Arrow> = g.arrows.iter().filter(|a| a.at == id).collect();
    match (nbrs.as_slice(), own_arrows.as_slice()) {
        ([a, b], []) => out.edges.push([*a, *b]),
        ([a], [arrow]) => out.arrows.push(Arrow { at: *a, m: arrow.m }),
        _ => {}
    }
    Ok(out)
}

pub fn cap_arrows(g: &PlumbingGraph) -> PlumbingGraph {
    PlumbingGraph {
        arrows: Vec::new(),
        ..g.clone()
    }
}

/// Negative continued fraction `n/q = a₁ − 1/(a₂ − ⋯)` as the chain
/// `[−a₁, …, −a_k]`.
pub fn hj_string(n: i64, q: i64) -> Result<Vec<i64>, PlumbingError> {
    if n <= 0 || q <= 0 || q >= n.max(2) || n.gcd(&q) != 1 {
        return Err(PlumbingError::Invalid(format!("bad string data {n}/{q}")));
    }
    let (mut a, mut b) = (n, q);
    let mut out = Vec::new();
    while b != 0 {
        let c = Integer::div_ceil(&a, &b);
        out.push(-c);
        (a, b) = (b, c * b - a);
    }
    Ok(out)
}

/// Evaluates `[−a₁, …]` back to `n/q` exactly.
pub fn hj_value(chain: &[i64]) -> Rational {
    let mut acc: Option<Rational> = None;
    for &e in chain.iter().rev() {
        let a = Rational::from_integer(BigInt::from(-e));
        acc = Some(match acc {
            None => a,
            Some(x) => a - Rational::one() / x,
        });
    }
    acc.unwrap_or_else(Rational::zero)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryH1 {
    pub free_rank: usize,
    /// Order of the torsion subgroup (1 when trivial).
    #[serde(with = "decimal")]
    pub torsion_order: BigInt,
    #[serde(with = "decimal_vec")]
    pub torsion_factors: Vec<BigInt>,
}

// Big integers go to JSON as decimal strings.
mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| x.parse().map_err(D::Error::custom))
            .collect()
    }
}

/// First homology of the boundary 3-manifold of an arrowless plumbing.
pub fn boundary_h1(g: &PlumbingGraph) -> Result<BoundaryH1, PlumbingError> {
    if !g.arrows.is_empty() {
        return Err(PlumbingError::Invalid("boundary homology needs an arrowless graph".into()));
    }
    let m = intersection_matrix(g);
    let corank = m.len() - rank(&rational_matrix(g));
    let (b1, _) = betti(g);
    let factors: Vec<BigInt> = smith_diagonal(&m)
        .into_iter()
        .map(|d| d.abs())
        .filter(|d| !d.is_one() && !d.is_zero())
        .collect();
    let order = factors.iter().fold(BigInt::one(), |a, b| a * b);
    Ok(BoundaryH1 {
        free_rank: b1 + corank,
        torsion_order: order.abs(),
        torsion_factors: factors,
    })
}

pub fn determinant_of(g: &PlumbingGraph) -> Rational {
    determinant(&rational_matrix(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(id: usize, e: i64, g: u32, m: u32) -> Vertex {
        Vertex { id, e, g, m }
    }

    #[test]
    fn matrices_and_definiteness() {
        let single = PlumbingGraph { vertices: vec![v(0, -3, 0, 1)], ..Default::default() };
        assert_eq!(intersection_matrix(&single), vec![vec![-3]]);
        assert_eq!(is_negative_definite(&single), Definiteness::Definite);
        let pair = PlumbingGraph {
            vertices: vec![v(0, -2, 0, 1), v(1, -2, 0, 1)],
            edges: vec![[0, 1]],
            arrows: vec![],
        };
        assert_eq!(intersection_matrix(&pair), vec![vec![-2, 1], vec![1, -2]]);
        assert_eq!(is_negative_definite(&pair), Definiteness::Definite);
        let zero = PlumbingGraph { vertices: vec![v(0, 0, 0, 1)], ..Default::default() };
        assert_eq!(is_negative_definite(&zero), Definiteness::Semidefinite { corank: 1 });
        assert!(intersection_matrix(&PlumbingGraph::default()).is_empty());
    }

    #[test]
    fn blow_downs() {
        let chain = PlumbingGraph {
            vertices: vec![v(0, -2, 0, 1), v(1, -1, 0, 1), v(2, -2, 0, 1)],
            edges: vec![[0, 1], [1, 2]],
            arrows: vec![],
        };
        let d = blow_down(&chain, 1).unwrap();
        assert_eq!(intersection_matrix(&d), vec![vec![-1, 1], vec![1, -1]]);
        assert_eq!(determinant_of(&d).abs(), determinant_of(&chain).abs());
        let iso = PlumbingGraph { vertices: vec![v(0, -1, 0, 1)], ..Default::default() };
        assert!(blow_down(&iso, 0).unwrap().vertices.is_empty());
        let star = PlumbingGraph {
            vertices: vec![v(0, -1, 0, 3)],
            edges: vec![],
            arrows: vec![Arrow { at: 0, m: 1 }, Arrow { at: 0, m: 1 }, Arrow { at: 0, m: 1 }],
        };
        assert_eq!(blow_down(&star, 0), Err(PlumbingError::NonNormalCrossing(0, 3)));
        assert_eq!(blow_down(&chain, 0), Err(PlumbingError::NotBlowdownable(0)));
    }

    #[test]
    fn fiber_residuals() {
        let star = PlumbingGraph {
            vertices: vec![v(0, -1, 0, 3)],
            edges: vec![],
            arrows: vec![Arrow { at: 0, m: 1 }, Arrow { at: 0, m: 1 }, Arrow { at: 0, m: 1 }],
        };
        assert_eq!(fiber_condition(&star), (true, vec![0]));
        let lone = PlumbingGraph { vertices: vec![v(0, -1, 0, 1)], ..Default::default() };
        assert_eq!(fiber_condition(&lone), (false, vec![-1]));
        let capped = cap_arrows(&star);
        assert_eq!(fiber_condition(&capped).1, vec![-3]);
    }

    #[test]
    fn hirzebruch_jung() {
        assert_eq!(hj_string(2, 1).unwrap(), vec![-2]);
        assert_eq!(hj_string(5, 3).unwrap(), vec![-2, -3]);
        assert_eq!(hj_string(3, 1).unwrap(), vec![-3]);
        assert_eq!(hj_value(&hj_string(7, 3).unwrap()), Rational::new(7.into(), 3.into()));
        assert!(hj_string(4, 2).is_err());
    }

    #[test]
    fn boundary_homology() {
        let g1 = PlumbingGraph { vertices: vec![v(0, -3, 1, 1)], ..Default::default() };
        let h = boundary_h1(&g1).unwrap();
        assert_eq!((h.free_rank, h.torsion_order.clone()), (2, BigInt::from(3)));
        let pair = PlumbingGraph {
            vertices: vec![v(0, -2, 0, 1), v(1, -2, 0, 1)],
            edges: vec![[0, 1]],
            arrows: vec![],
        };
        let h = boundary_h1(&pair).unwrap();
        assert_eq!((h.free_rank, h.torsion_order), (0, BigInt::from(3)));
        let h = boundary_h1(&PlumbingGraph::default()).unwrap();
        assert_eq!((h.free_rank, h.torsion_order), (0, BigInt::from(1)));
    }
}
