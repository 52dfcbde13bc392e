//! The curated bank of named words, graphs and expected invariants, and the
//! regression runner over it.
//!
//! Word expressions are whitespace (or `*`) separated tokens `NAME` or
//! `NAME^k`, where `NAME` is a bank key or a generator of the surface. An
//! optional `bank:` prefix is accepted anywhere, so `bank:I_tilde^2` and
//! `bank:D1*D2` both parse.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braidmon::bennequin_genus;
use crate::cover::lift_word;
use crate::error::McgError;
use crate::invariants::{
    definiteness_by_embedding, definiteness_report, isotropic_form_report, laufer_certificate,
    lefschetz_betti, BettiReport,
};
use crate::linalg::{from_i64, inertia};
use crate::mcg::{exact_equal, homology_eval};
use crate::plumbing::{self, Definiteness, PlumbingGraph};
use crate::surface::{compose, Letter, SurfaceSig, Word};
use crate::Rational;

const BANK_JSON: &str = include_str!("../data/bank.json");

#[derive(Debug, Error)]
pub enum BankError {
    #[error("unknown bank key {0}")]
    UnknownKey(String),
    #[error("entry {0} is not a {1}")]
    WrongKind(String, &'static str),
    #[error("bad bank: {0}")]
    Malformed(String),
    #[error(transparent)]
    Mcg(#[from] McgError),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Word { surface: SurfaceSig, expr: String },
    Graph { graph: PlumbingGraph },
    Report { report: BettiReport },
    Braid { strands: usize, letters: Vec<i32> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Taken from the source write-up.
    Stated { note: String },
    /// Computed here, from the named oracle.
    Derived { note: String },
    Trivial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    #[default]
    Verified,
    /// Figure-only data; checks are listed but excluded from pass/fail.
    Unverified,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    Equal {
        #[serde(default)]
        lhs: Option<String>,
        rhs: String,
        #[serde(default = "yes")]
        expect: bool,
    },
    HomologyIdentity { expr: String },
    Betti { b1: i64, b2: i64 },
    Form {
        b2_zero: i64,
        #[serde(default)]
        complement_sigma: Option<i64>,
        b2_plus: i64,
        b2_minus: i64,
    },
    IsotropicForm { b2_plus: i64, b2_minus: i64, b2_zero: i64 },
    /// Word-side report by embedding into `ambient`, against a graph entry.
    Laufer {
        graph: String,
        ambient: String,
        ambient_b2_zero: i64,
        #[serde(default)]
        ambient_complement_sigma: Option<i64>,
        b2_zero: i64,
        #[serde(default = "yes")]
        expect: bool,
    },
    /// This report entry against the isotropic form of a word entry.
    LauferReport { word: String },
    ReportOf {
        word: String,
        b2_zero: i64,
        #[serde(default)]
        complement_sigma: Option<i64>,
    },
    FiberCondition,
    GraphBetti { b1: usize, b2: usize },
    NegativeDefinite,
    /// Free rank of H₁ of the boundary after capping the arrows.
    BoundaryFreeRank { rank: usize },
    Genus { value: i64 },
    Lift { upstairs: String },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Equal { .. } => "equal",
            Check::HomologyIdentity { .. } => "homology_identity",
            Check::Betti { .. } => "betti",
            Check::Form { .. } => "form",
            Check::IsotropicForm { .. } => "isotropic_form",
            Check::Laufer { .. } => "laufer",
            Check::LauferReport { .. } => "laufer_report",
            Check::ReportOf { .. } => "report_of",
            Check::FiberCondition => "fiber_condition",
            Check::GraphBetti { .. } => "graph_betti",
            Check::NegativeDefinite => "negative_definite",
            Check::BoundaryFreeRank { .. } => "boundary_free_rank",
            Check::Genus { .. } => "genus",
            Check::Lift { .. } => "lift",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedEntry {
    pub key: String,
    #[serde(default)]
    pub status: Status,
    pub payload: Payload,
    pub provenance: Provenance,
    #[serde(default)]
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Bank {
    pub entries: Vec<NamedEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportLine {
    pub key: String,
    pub check: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
}

impl Bank {
    pub fn from_json(text: &str) -> Result<Bank, BankError> {
        let bank: Bank = serde_json::from_str(text).map_err(|e| BankError::Malformed(e.to_string()))?;
        let mut seen = BTreeMap::new();
        for e in &bank.entries {
            if seen.insert(e.key.clone(), ()).is_some() {
                return Err(BankError::Malformed(format!("duplicate key {}", e.key)));
            }
        }
        Ok(bank)
    }

    /// The bank shipped with the crate.
    pub fn builtin() -> Bank {
        Bank::from_json(BANK_JSON).expect("the built-in bank parses")
    }

    pub fn lookup(&self, key: &str) -> Result<&NamedEntry, BankError> {
        self.entries
            .iter()
            .find(|e| e.key == key)
            .ok_or_else(|| BankError::UnknownKey(key.to_string()))
    }

    pub fn keys(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.key.as_str()).collect()
    }

    fn word_surface(&self, key: &str) -> Option<SurfaceSig> {
        match self.lookup(key).ok()?.payload {
            Payload::Word { surface, .. } => Some(surface),
            _ => None,
        }
    }

    /// Evaluates a word expression. Without an explicit surface, the surface
    /// of the first bank key mentioned is used, else Σ₂,₂.
    pub fn resolve(&self, expr: &str, surface: Option<SurfaceSig>) -> Result<Word, BankError> {
        let text = expr.replace("bank:", " ").replace('*', " ");
        let tokens: Vec<(&str, i32)> = text
            .split_whitespace()
            .map(|tok| match tok.split_once('^') {
                Some((n, e)) => e
                    .parse::<i32>()
                    .map(|k| (n, k))
                    .map_err(|_| BankError::Malformed(format!("bad exponent in {tok}"))),
                None => Ok((tok, 1)),
            })
            .collect::<Result<_, _>>()?;
        let surface = surface
            .or_else(|| tokens.iter().find_map(|(n, _)| self.word_surface(n)))
            .unwrap_or(SurfaceSig::SIGMA22);
        self.resolve_tokens(&tokens, surface, 0)
    }

    fn resolve_tokens(&self, tokens: &[(&str, i32)], surface: SurfaceSig, depth: usize) -> Result<Word, BankError> {
        if depth > 16 {
            return Err(BankError::Malformed("bank expressions nest too deeply".into()));
        }
        let mut acc = Word::empty(surface);
        for &(name, k) in tokens {
            let piece = match self.lookup(name) {
                Ok(entry) => match &entry.payload {
                    Payload::Word { surface: s, expr } => {
                        if *s != surface {
                            return Err(McgError::SurfaceMismatch(s.to_string(), surface.to_string()).into());
                        }
                        let text = expr.replace("bank:", " ").replace('*', " ");
                        let inner: Vec<(&str, i32)> = text
                            .split_whitespace()
                            .map(|tok| match tok.split_once('^') {
                                Some((n, e)) => (n, e.parse().unwrap_or(0)),
                                None => (tok, 1),
                            })
                            .collect();
                        if inner.iter().any(|&(_, e)| e == 0) {
                            return Err(BankError::Malformed(format!("bad exponent in {}", entry.key)));
                        }
                        self.resolve_tokens(&inner, surface, depth + 1)?.pow(k)
                    }
                    _ => return Err(BankError::WrongKind(name.to_string(), "word")),
                },
                Err(_) => Word::new(surface, vec![Letter::new(name, k)])?,
            };
            acc = compose(&acc, &piece)?;
        }
        Ok(acc)
    }

    pub fn word(&self, key: &str) -> Result<Word, BankError> {
        match &self.lookup(key)?.payload {
            Payload::Word { surface, .. } => self.resolve(key, Some(*surface)),
            _ => Err(BankError::WrongKind(key.to_string(), "word")),
        }
    }

    pub fn graph(&self, key: &str) -> Result<&PlumbingGraph, BankError> {
        match &self.lookup(key)?.payload {
            Payload::Graph { graph } => Ok(graph),
            _ => Err(BankError::WrongKind(key.to_string(), "graph")),
        }
    }

    pub fn report(&self, key: &str) -> Result<&BettiReport, BankError> {
        match &self.lookup(key)?.payload {
            Payload::Report { report } => Ok(report),
            _ => Err(BankError::WrongKind(key.to_string(), "report")),
        }
    }

    /// Runs every check of every entry, in bank order.
    pub fn run_regressions(&self) -> Vec<ReportLine> {
        let mut out = Vec::new();
        for e in &self.entries {
            for c in &e.checks {
                let (outcome, detail) = if e.status == Status::Unverified {
                    (Outcome::Skipped, "unverified entry".to_string())
                } else {
                    match self.run_check(e, c) {
                        Ok((true, d)) => (Outcome::Pass, d),
                        Ok((false, d)) => (Outcome::Fail, d),
                        Err(err) => (Outcome::Error, err.to_string()),
                    }
                };
                out.push(ReportLine {
                    key: e.key.clone(),
                    check: c.name().to_string(),
                    outcome,
                    detail,
                });
            }
        }
        out
    }

    /// Runs one check regardless of the entry's status.
    pub fn run_check(&self, e: &NamedEntry, c: &Check) -> Result<(bool, String), BankError> {
        let surface = match &e.payload {
            Payload::Word { surface, .. } => Some(*surface),
            _ => None,
        };
        let own_word = || self.word(&e.key);
        let own_graph = || self.graph(&e.key);
        Ok(match c {
            Check::Equal { lhs, rhs, expect } => {
                let l = match lhs {
                    Some(x) => self.resolve(x, surface)?,
                    None => own_word()?,
                };
                let r = self.resolve(rhs, Some(l.surface))?;
                let eq = exact_equal(&l, &r)?;
                (eq == *expect, format!("equal = {eq}"))
            }
            Check::HomologyIdentity { expr } => {
                let h = homology_eval(&self.resolve(expr, surface)?)?.matrix;
                let id = h.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)));
                (id, String::new())
            }
            Check::Betti { b1, b2 } => {
                let r = lefschetz_betti(&own_word()?)?;
                ((r.b1, r.b2) == (*b1, *b2), format!("(b1, b2) = ({}, {})", r.b1, r.b2))
            }
            Check::Form { b2_zero, complement_sigma, b2_plus, b2_minus } => {
                let r = definiteness_report(&own_word()?, *b2_zero, *complement_sigma)?;
                (
                    r.b2_plus == Some(*b2_plus) && r.b2_minus == Some(*b2_minus),
                    format!("b2+ = {:?}, b2- = {:?}", r.b2_plus, r.b2_minus),
                )
            }
            Check::IsotropicForm { b2_plus, b2_minus, b2_zero } => {
                let r = isotropic_form_report(&own_word()?)?;
                (
                    (r.b2_plus, r.b2_minus, r.b2_zero) == (Some(*b2_plus), Some(*b2_minus), Some(*b2_zero)),
                    format!("b2+ = {:?}, b2- = {:?}, b2_0 = {:?}", r.b2_plus, r.b2_minus, r.b2_zero),
                )
            }
            Check::Laufer { graph, ambient, ambient_b2_zero, ambient_complement_sigma, b2_zero, expect } => {
                let amb = self.word(ambient)?;
                let amb_report = definiteness_report(&amb, *ambient_b2_zero, *ambient_complement_sigma)?;
                let word_report = definiteness_by_embedding(&own_word()?, &amb, &amb_report, *b2_zero)?;
                let ok = laufer_certificate(&word_report, &graph_report(self.graph(graph)?))?;
                (ok == *expect, format!("certificate = {ok}"))
            }
            Check::LauferReport { word } => {
                let r = isotropic_form_report(&self.word(word)?)?;
                let ok = laufer_certificate(&r, self.report(&e.key)?)?;
                (ok, format!("certificate = {ok}"))
            }
            Check::ReportOf { word, b2_zero, complement_sigma } => {
                let r = definiteness_report(&self.word(word)?, *b2_zero, *complement_sigma)?;
                let want = self.report(&e.key)?;
                (&r == want, format!("{r:?}"))
            }
            Check::FiberCondition => {
                let (ok, res) = plumbing::fiber_condition(own_graph()?);
                (ok, format!("residuals {res:?}"))
            }
            Check::GraphBetti { b1, b2 } => {
                let got = plumbing::betti(own_graph()?);
                (got == (*b1, *b2), format!("{got:?}"))
            }
            Check::NegativeDefinite => {
                let d = plumbing::is_negative_definite(own_graph()?);
                (d == Definiteness::Definite, format!("{d:?}"))
            }
            Check::BoundaryFreeRank { rank } => {
                let h = plumbing::boundary_h1(&plumbing::cap_arrows(own_graph()?))
                    .map_err(|x| BankError::Malformed(x.to_string()))?;
                (h.free_rank == *rank, format!("free rank {}", h.free_rank))
            }
            Check::Genus { value } => match &e.payload {
                Payload::Braid { strands, letters } => {
                    let g = bennequin_genus(letters, *strands).map_err(|x| BankError::Malformed(x.to_string()))?;
                    (g == *value, format!("genus {g}"))
                }
                _ => return Err(BankError::WrongKind(e.key.clone(), "braid")),
            },
            Check::Lift { upstairs } => {
                let up = lift_word(&own_word()?)?;
                let want = self.resolve(upstairs, Some(SurfaceSig::SIGMA22))?;
                (exact_equal(&up, &want)?, String::new())
            }
        })
    }
}

/// Report of a plumbing graph: Betti numbers and the inertia of its form.
pub fn graph_report(g: &PlumbingGraph) -> BettiReport {
    let (b1, _) = plumbing::betti(g);
    let m = from_i64::<Rational>(&plumbing::intersection_matrix(g));
    let (pos, neg, zero) = inertia(&m);
    BettiReport::from_numbers(b1 as i64, pos as i64, neg as i64, zero as i64)
}

/// The built-in bank, loaded once.
pub fn bank() -> &'static Bank {
    static B: std::sync::OnceLock<Bank> = std::sync::OnceLock::new();
    B.get_or_init(Bank::builtin)
}

pub fn lookup(key: &str) -> Result<&'static NamedEntry, BankError> {
    bank().lookup(key)
}

pub fn run_regressions() -> Vec<ReportLine> {
    bank().run_regressions()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        let e = lookup("psi1").unwrap();
        assert!(matches!(e.provenance, Provenance::Stated { .. }));
        assert_eq!(bank().word("psi1").unwrap(), Word::parse(SurfaceSig::SIGMA22, "C4 C3 C2 C1 C1P").unwrap());
        assert!(matches!(lookup("nope"), Err(BankError::UnknownKey(_))));
        let g = bank().graph("graph_g1").unwrap();
        assert_eq!(g.arrows.len(), 3);
    }

    #[test]
    fn expressions() {
        let b = bank();
        let lhs = b.resolve("bank:I_tilde^2", None).unwrap();
        let rhs = b.resolve("bank:D1*D2", None).unwrap();
        assert_eq!(rhs.surface, SurfaceSig::SIGMA22);
        assert!(exact_equal(&lhs, &rhs).unwrap());
        assert_eq!(b.resolve("psi1_4", None).unwrap().len(), 11);
        assert!(b.resolve("graph_g1", None).is_err());
        assert!(b.resolve("C1^x", None).is_err());
    }

    #[test]
    fn builtin_regressions_pass() {
        let lines = run_regressions();
        assert!(lines.len() > 30);
        for l in &lines {
            if l.key == "graph_k8" {
                assert_eq!(l.outcome, Outcome::Skipped);
            } else {
                assert_eq!(l.outcome, Outcome::Pass, "{l:?}");
            }
        }
    }

    #[test]
    fn keys_do_not_shadow_generators() {
        let surfaces = [SurfaceSig::SIGMA22, SurfaceSig::ANNULUS3, SurfaceSig::ANNULUS4];
        for k in bank().keys() {
            for s in surfaces {
                assert!(s.check_generator(k).is_err(), "{k} is a generator of {s}");
            }
        }
    }

    #[test]
    fn empty_bank_has_empty_report() {
        assert!(Bank::default().run_regressions().is_empty());
    }

    #[test]
    fn wrong_expectation_is_reported_as_failure() {
        let mut b = Bank::from_json(BANK_JSON).unwrap();
        let e = b.entries.iter_mut().find(|e| e.key == "psi1_2").unwrap();
        e.checks = vec![Check::Betti { b1: 0, b2: 4 }];
        let lines: Vec<ReportLine> = b.run_regressions().into_iter().filter(|l| l.key == "psi1_2").collect();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].outcome, Outcome::Fail);
    }
}
