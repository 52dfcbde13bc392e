//! Positive factorizations, Hurwitz moves and bounded equivalence search.
//!
//! Conventions follow the word convention (first letter acts first):
//! `R` at `i` turns `(a, b)` into `(a b a⁻¹, a)` and `L` turns it into
//! `(b, b⁻¹ a b)`. Both leave the product unchanged and undo each other.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::McgError;
use crate::mcg::{exact_eval, ExactElement};
use crate::surface::{compose, conjugate, Letter, SurfaceSig, Word};

/// A positive twist about the image of the base curve: the word
/// `conj⁻¹ · base · conj`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactLetter {
    pub base: String,
    #[serde(default)]
    pub conj: Vec<Letter>,
}

impl FactLetter {
    pub fn bare(base: &str) -> Self {
        FactLetter {
            base: base.to_string(),
            conj: Vec::new(),
        }
    }

    pub fn word(&self, surface: SurfaceSig) -> Result<Word, McgError> {
        let b = Word::new(surface, vec![Letter::new(&self.base, 1)])?;
        let c = Word::new(surface, self.conj.clone())?;
        conjugate(&b, &c)
    }

    fn conjugated(&self, surface: SurfaceSig, g: &Word) -> Result<FactLetter, McgError> {
        let c = Word::new(surface, self.conj.clone())?;
        Ok(FactLetter {
            base: self.base.clone(),
            conj: compose(&c, g)?.letters,
        })
    }
}

impl fmt::Display for FactLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conj.is_empty() {
            write!(f, "{}", self.base)
        } else {
            let c: Vec<String> = self
                .conj
                .iter()
                .map(|l| format!("{}^{}", l.gen, l.exp))
                .collect();
            write!(f, "{}[{}]", self.base, c.join(" "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub surface: SurfaceSig,
    pub letters: Vec<FactLetter>,
}

impl Factorization {
    /// Splits a positive word into single-twist letters.
    pub fn from_word(w: &Word) -> Result<Self, McgError> {
        if !w.letters.iter().all(|l| l.exp > 0) {
            return Err(McgError::NotPositive);
        }
        Ok(Factorization {
            surface: w.surface,
            letters: w.expanded().iter().map(|l| FactLetter::bare(&l.gen)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter-wise exact equality (same twists in the same order).
    pub fn same_letters(&self, other: &Factorization) -> Result<bool, McgError> {
        if self.surface != other.surface || self.len() != other.len() {
            return Ok(false);
        }
        for (a, b) in self.letters.iter().zip(&other.letters) {
            if exact_eval(&a.word(self.surface)?)? != exact_eval(&b.word(other.surface)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every letter conjugated by `g`.
    pub fn conjugate_all(&self, g: &Word) -> Result<Factorization, McgError> {
        Ok(Factorization {
            surface: self.surface,
            letters: self
                .letters
                .iter()
                .map(|l| l.conjugated(self.surface, g))
                .collect::<Result<_, _>>()?,
        })
    }
}

pub fn product(f: &Factorization) -> Result<Word, McgError> {
    let mut acc = Word::empty(f.surface);
    for l in &f.letters {
        acc = compose(&acc, &l.word(f.surface)?)?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    L,
    R,
}

/// Replaces a letter by a bare catalog generator when it is one.
fn canonical(surface: SurfaceSig, l: FactLetter) -> Result<FactLetter, McgError> {
    if l.conj.is_empty() {
        return Ok(l);
    }
    let e = exact_eval(&l.word(surface)?)?;
    for g in surface.catalog()? {
        if exact_eval(&Word::new(surface, vec![Letter::new(g, 1)])?)? == e {
            return Ok(FactLetter::bare(g));
        }
    }
    Ok(l)
}

pub fn hurwitz_move(f: &Factorization, i: usize, dir: Direction) -> Result<Factorization, McgError> {
    if i + 1 >= f.len() {
        return Err(McgError::IndexOutOfRange {
            index: i,
            len: f.len(),
        });
    }
    let s = f.surface;
    let (a, b) = (&f.letters[i], &f.letters[i + 1]);
    let (x, y) = match dir {
        Direction::R => (b.conjugated(s, &a.word(s)?.inverse())?, a.clone()),
        Direction::L => (b.clone(), a.conjugated(s, &b.word(s)?)?),
    };
    let mut out = f.clone();
    out.letters[i] = canonical(s, x)?;
    out.letters[i + 1] = canonical(s, y)?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Move {
    L { index: usize },
    R { index: usize },
    /// Moves the first `shift` letters to the end.
    Cyclic { shift: usize },
    GlobalConj { conjugator: Word },
}

pub type MoveTrace = Vec<Move>;

pub fn apply_move(f: &Factorization, m: &Move) -> Result<Factorization, McgError> {
    match m {
        Move::L { index } => hurwitz_move(f, *index, Direction::L),
        Move::R { index } => hurwitz_move(f, *index, Direction::R),
        Move::Cyclic { shift } => {
            let mut out = f.clone();
            if !out.letters.is_empty() {
                let n = out.letters.len();
                out.letters.rotate_left(shift % n);
            }
            Ok(out)
        }
        Move::GlobalConj { conjugator } => {
            let c = f.conjugate_all(conjugator)?;
            Ok(Factorization {
                surface: c.surface,
                letters: c
                    .letters
                    .into_iter()
                    .map(|l| canonical(f.surface, l))
                    .collect::<Result<_, _>>()?,
            })
        }
    }
}

pub fn replay(f: &Factorization, trace: &[Move]) -> Result<Factorization, McgError> {
    trace.iter().try_fold(f.clone(), |acc, m| apply_move(&acc, m))
}

fn inverse_move(m: &Move, len: usize) -> Move {
    match m {
        Move::L { index } => Move::R { index: *index },
        Move::R { index } => Move::L { index: *index },
        Move::Cyclic { shift } => Move::Cyclic {
            shift: (len - shift % len.max(1)) % len.max(1),
        },
        Move::GlobalConj { conjugator } => Move::GlobalConj {
            conjugator: conjugator.inverse(),
        },
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub depth: usize,
    pub allow_cyclic: bool,
    pub global_conj: Vec<Word>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            depth: 8,
            allow_cyclic: false,
            global_conj: Vec::new(),
        }
    }
}

/// A letter as an exact element together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Ev {
    el: ExactElement,
    inv: ExactElement,
}

impl Ev {
    fn of(w: &Word) -> Result<Ev, McgError> {
        Ok(Ev {
            el: exact_eval(w)?,
            inv: exact_eval(&w.inverse())?,
        })
    }

    /// `g⁻¹ · self · g`
    fn conj(&self, g: &Ev) -> Ev {
        Ev {
            el: g.inv.then(&self.el).then(&g.el),
            inv: g.inv.then(&self.inv).then(&g.el),
        }
    }
}

type State = Vec<Ev>;

fn key(s: &State) -> Vec<ExactElement> {
    s.iter().map(|e| e.el.clone()).collect()
}

fn neighbours(s: &State, moves: &[Move], conj_evs: &[Ev]) -> Vec<(Move, State)> {
    let mut out = Vec::new();
    let n = s.len();
    let mut gi = 0;
    for m in moves {
        let next = match m {
            Move::L { index: i } => {
                let mut t = s.clone();
                t[*i] = s[i + 1].clone();
                t[i + 1] = s[*i].conj(&s[i + 1]);
                t
            }
            Move::R { index: i } => {
                let mut t = s.clone();
                let a_inv = Ev {
                    el: s[*i].inv.clone(),
                    inv: s[*i].el.clone(),
                };
                t[*i] = s[i + 1].conj(&a_inv);
                t[i + 1] = s[*i].clone();
                t
            }
            Move::Cyclic { shift } => {
                let mut t = s.clone();
                t.rotate_left(shift % n.max(1));
                t
            }
            Move::GlobalConj { .. } => {
                let g = &conj_evs[gi];
                gi += 1;
                s.iter().map(|e| e.conj(g)).collect()
            }
        };
        out.push((m.clone(), next));
    }
    out
}

/// Bidirectional breadth-first search for a move sequence turning `f1` into
/// `f2`. `None` means "not found within the depth bound".
pub fn hurwitz_equivalent(
    f1: &Factorization,
    f2: &Factorization,
    opts: &SearchOptions,
) -> Result<Option<MoveTrace>, McgError> {
    if f1.surface != f2.surface {
        return Err(McgError::SurfaceMismatch(
            f1.surface.to_string(),
            f2.surface.to_string(),
        ));
    }
    if f1.len() != f2.len() {
        return Ok(None);
    }
    let strict = !opts.allow_cyclic && opts.global_conj.is_empty();
    if strict && exact_eval(&product(f1)?)? != exact_eval(&product(f2)?)? {
        return Ok(None);
    }
    let n = f1.len();
    let eval_state = |f: &Factorization| -> Result<State, McgError> {
        f.letters.iter().map(|l| Ev::of(&l.word(f.surface)?)).collect()
    };
    let start = eval_state(f1)?;
    let goal = eval_state(f2)?;

    let mut moves = Vec::new();
    for i in 0..n.saturating_sub(1) {
        moves.push(Move::L { index: i });
        moves.push(Move::R { index: i });
    }
    if opts.allow_cyclic && n > 1 {
        moves.push(Move::Cyclic { shift: 1 });
        moves.push(Move::Cyclic { shift: n - 1 });
    }
    let mut conj_words = Vec::new();
    for g in &opts.global_conj {
        conj_words.push(g.clone());
        conj_words.push(g.inverse());
    }
    for g in &conj_words {
        moves.push(Move::GlobalConj {
            conjugator: g.clone(),
        });
    }
    let conj_evs: Vec<Ev> = conj_words.iter().map(Ev::of).collect::<Result<_, _>>()?;

    // visited maps: key -> (parent key, move from parent)
    type Seen = HashMap<Vec<ExactElement>, Option<(Vec<ExactElement>, Move)>>;
    let mut seen = [Seen::new(), Seen::new()];
    let mut frontier: [VecDeque<State>; 2] = [VecDeque::new(), VecDeque::new()];
    seen[0].insert(key(&start), None);
    seen[1].insert(key(&goal), None);
    frontier[0].push_back(start.clone());
    frontier[1].push_back(goal.clone());

    let path_to = |seen: &Seen, mut k: Vec<ExactElement>| -> Vec<Move> {
        let mut path = Vec::new();
        while let Some(Some((p, m))) = seen.get(&k) {
            path.push(m.clone());
            k = p.clone();
        }
        path.reverse();
        path
    };
    let assemble = |seen: &[Seen; 2], meet: Vec<ExactElement>| -> MoveTrace {
        let mut trace = path_to(&seen[0], meet.clone());
        let back = path_to(&seen[1], meet);
        trace.extend(back.iter().rev().map(|m| inverse_move(m, n)));
        trace
    };

    if key(&start) == key(&goal) {
        return Ok(Some(Vec::new()));
    }
    for _ in 0..opts.depth {
        let side = usize::from(frontier[1].len() < frontier[0].len());
        let layer: Vec<State> = frontier[side].drain(..).collect();
        for s in layer {
            let ks = key(&s);
            for (m, t) in neighbours(&s, &moves, &conj_evs) {
                let kt = key(&t);
                if seen[side].contains_key(&kt) {
                    continue;
                }
                seen[side].insert(kt.clone(), Some((ks.clone(), m)));
                if seen[1 - side].contains_key(&kt) {
                    return Ok(Some(assemble(&seen, kt)));
                }
                frontier[side].push_back(t);
            }
        }
        if frontier[side].is_empty() {
            break;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact(s: &str) -> Factorization {
        Factorization::from_word(&Word::parse(SurfaceSig::SIGMA22, s).unwrap()).unwrap()
    }

    #[test]
    fn disjoint_letters_swap() {
        let f = hurwitz_move(&fact("C1 C1P"), 0, Direction::L).unwrap();
        assert_eq!(f, fact("C1P C1"));
    }

    #[test]
    fn move_preserves_product_and_inverts() {
        let f = fact("C2 C3 C4");
        let g = hurwitz_move(&f, 0, Direction::R).unwrap();
        assert_eq!(g.letters[1], FactLetter::bare("C2"));
        let p1 = exact_eval(&product(&f).unwrap()).unwrap();
        assert_eq!(p1, exact_eval(&product(&g).unwrap()).unwrap());
        let back = hurwitz_move(&g, 0, Direction::L).unwrap();
        assert!(back.same_letters(&f).unwrap());
        assert!(matches!(
            hurwitz_move(&f, 2, Direction::L),
            Err(McgError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn different_products_are_not_equivalent() {
        let r = hurwitz_equivalent(&fact("C2 C3"), &fact("C3 C2"), &SearchOptions::default());
        assert_eq!(r.unwrap(), None);
        let same = hurwitz_equivalent(&fact("C2 C3"), &fact("C2 C3"), &SearchOptions::default());
        assert_eq!(same.unwrap(), Some(vec![]));
    }
}
