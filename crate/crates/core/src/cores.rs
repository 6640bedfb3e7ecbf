//! Interval combinatorics of reduced words: the maximal alternating
//! intervals `A(x)`, (generalized, extra-large) cores, and the move tuples
//! that define the idempotents `f_s̄` and `Gf_s̄`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSystem, RexGraph, Word};
use crate::error::{Error, Result};

/// `[[a, b]]` on 1-based positions; empty when `a > b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub a: i64,
    pub b: i64,
}

impl Interval {
    pub fn new(a: i64, b: i64) -> Self {
        Interval { a, b }
    }
    pub fn empty() -> Self {
        Interval { a: 1, b: 0 }
    }
    pub fn is_empty(&self) -> bool {
        self.a > self.b
    }
    pub fn contains(&self, o: &Interval) -> bool {
        o.is_empty() || (!self.is_empty() && self.a <= o.a && o.b <= self.b)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "[[{},{}]]", self.a, self.b)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoreKind {
    Left,
    Right,
    Empty,
    Filled,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoreDecomposition {
    pub word: Word,
    pub a_of_x: Vec<Interval>,
    pub gcores: Vec<Interval>,
    pub elgcores: Vec<Interval>,
    pub cores: Vec<Interval>,
    pub classification: Vec<(Interval, CoreKind)>,
}

/// One step of a move tuple. `pos` is the number of letters left of the
/// window (the `i` of `id^i ⊗ f ⊗ id`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Move {
    /// `f_sr` on an alternating window of length `m(s, r)`; changes the word.
    Braid { pos: usize, len: usize },
    /// `f²_sr(n)` on an alternating window of length `n`; keeps the word.
    Jw { pos: usize, n: usize },
}

impl Move {
    pub fn pos(&self) -> usize {
        match *self {
            Move::Braid { pos, .. } | Move::Jw { pos, .. } => pos,
        }
    }
    pub fn len(&self) -> usize {
        match *self {
            Move::Braid { len, .. } => len,
            Move::Jw { n, .. } => n,
        }
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub type MoveTuple = Vec<Move>;

fn alternates(word: &[usize], pos: usize, len: usize) -> bool {
    if pos + len > word.len() || len == 0 {
        return false;
    }
    if len == 1 {
        return true;
    }
    let (a, b) = (word[pos], word[pos + 1]);
    a != b && (0..len).all(|k| word[pos + k] == if k % 2 == 0 { a } else { b })
}

/// Maximal intervals of `T(word)`.
pub fn t_intervals(word: &[usize]) -> Vec<Interval> {
    let n = word.len();
    if n == 0 {
        return vec![Interval::empty()];
    }
    // maxb[a]: largest b with [[a, b]] ∈ T(word), non-decreasing in a.
    let mut out = Vec::new();
    let mut prev_b = 0i64;
    for a in 1..=n {
        let mut b = a;
        while b < n && (b + 1 < a + 2 || word[b + 1 - 1] == word[b + 1 - 3]) {
            b += 1;
        }
        if a == 1 || (b as i64) > prev_b {
            out.push(Interval::new(a as i64, b as i64));
        }
        prev_b = b as i64;
    }
    out
}

fn maximal(set: BTreeSet<Interval>) -> Vec<Interval> {
    let v: Vec<Interval> = set.into_iter().collect();
    v.iter()
        .filter(|i| !v.iter().any(|j| j != *i && j.contains(i)))
        .copied()
        .collect()
}

/// `A(x)`: maximal intervals of `T(r̄)` over all reduced expressions `r̄`.
pub fn a_of_x(sys: &CoxeterSystem, word: &[usize]) -> Vec<Interval> {
    if word.is_empty() {
        return vec![Interval::empty()];
    }
    let x = sys.element(word);
    let mut all = BTreeSet::new();
    for r in sys.rex_set(&x).iter() {
        all.extend(t_intervals(r));
    }
    maximal(all)
}

pub fn core_decomposition(sys: &CoxeterSystem, word: &[usize]) -> Result<CoreDecomposition> {
    sys.require_reduced(word)?;
    let a = a_of_x(sys, word);
    let n = word.len() as i64;
    let letter = |i: i64| -> Option<usize> { (1..=n).contains(&i).then(|| word[(i - 1) as usize]) };
    let neq = |i: i64, j: i64| -> bool {
        match (letter(i), letter(j)) {
            (Some(x), Some(y)) => x != y,
            _ => true,
        }
    };
    let gcores: Vec<Interval> = if word.is_empty() {
        Vec::new()
    } else {
        a.iter().map(|i| Interval::new(i.a + 1, i.b - 1)).collect()
    };
    let elgcores: Vec<Interval> = gcores.iter().filter(|c| c.b - c.a >= 1).copied().collect();
    let cores: Vec<Interval> = gcores
        .iter()
        .filter(|c| {
            match (letter(c.a), letter(c.a + 1)) {
                (Some(s), Some(r)) if s != r => sys.bond(s, r) as i64 == c.b - c.a + 3,
                _ => false,
            }
        })
        .copied()
        .collect();
    let classification = cores
        .iter()
        .map(|c| {
            let right_diff = neq(c.b - 1, c.b + 1);
            let left_diff = neq(c.a - 1, c.a + 1);
            let kind = match (left_diff, right_diff) {
                (false, true) => CoreKind::Right,
                (true, false) => CoreKind::Left,
                (true, true) => CoreKind::Empty,
                (false, false) => CoreKind::Filled,
            };
            (*c, kind)
        })
        .collect();
    Ok(CoreDecomposition { word: word.to_vec(), a_of_x: a, gcores, elgcores, cores, classification })
}

/// `N(C)`: number of moves at offset `first(C) − 2`.
pub fn n_of(tuple: &[Move], c: &Interval) -> usize {
    tuple.iter().filter(|m| m.pos() as i64 == c.a - 2).count()
}

/// Closed walk through the rex graph, with neighbour lists rotated by
/// `variant` (0 gives the canonical depth-first order).
pub fn circuit_variant(graph: &RexGraph, start: usize, variant: usize) -> Vec<(usize, crate::coxeter::BraidMove)> {
    let mut seen = vec![false; graph.vertices.len()];
    let mut walk = Vec::new();
    fn dfs(g: &RexGraph, v: usize, variant: usize, seen: &mut [bool], walk: &mut Vec<(usize, crate::coxeter::BraidMove)>) {
        seen[v] = true;
        let mut nb = g.neighbors(v);
        if !nb.is_empty() {
            let k = (variant + v) % nb.len();
            nb.rotate_left(k);
            if variant % 2 == 1 {
                nb.reverse();
            }
        }
        for (u, mv) in nb {
            if !seen[u] {
                walk.push((u, mv));
                dfs(g, u, variant, seen, walk);
                walk.push((v, crate::coxeter::BraidMove { first: mv.second, second: mv.first, ..mv }));
            }
        }
    }
    dfs(graph, start, variant, &mut seen, &mut walk);
    walk
}

fn circuit_moves(sys: &CoxeterSystem, word: &[usize], variant: usize) -> Result<(Vec<Word>, MoveTuple)> {
    let x = sys.element(word);
    let graph = sys.rex_graph(&x);
    let start = graph
        .vertices
        .iter()
        .position(|v| v.as_slice() == word)
        .ok_or_else(|| Error::NotReduced(sys.format_word(word)))?;
    let walk = circuit_variant(&graph, start, variant);
    let mut words = vec![word.to_vec()];
    let mut moves = Vec::new();
    for (u, mv) in walk {
        words.push(graph.vertices[u].clone());
        moves.push(Move::Braid { pos: mv.pos, len: mv.len });
    }
    Ok((words, moves))
}

/// The braid circuit defining `f_s̄`.
pub fn f_tuple(sys: &CoxeterSystem, word: &[usize]) -> Result<MoveTuple> {
    f_tuple_variant(sys, word, 0)
}

pub fn f_tuple_variant(sys: &CoxeterSystem, word: &[usize], variant: usize) -> Result<MoveTuple> {
    let dec = core_decomposition(sys, word)?;
    let (_, moves) = circuit_moves(sys, word, variant)?;
    for c in &dec.cores {
        if n_of(&moves, c) == 0 {
            return Err(Error::CoverageFailure(c.a, c.b));
        }
    }
    Ok(moves)
}

/// The tuple defining `Gf_s̄`: one `f²(n)` move per ELGcore that is not a
/// core, placed at the first vertex of the braid circuit whose word
/// alternates on that window, followed by the braid circuit.
pub fn gf_tuple(sys: &CoxeterSystem, word: &[usize]) -> Result<MoveTuple> {
    gf_tuple_variant(sys, word, 0)
}

pub fn gf_tuple_variant(sys: &CoxeterSystem, word: &[usize], variant: usize) -> Result<MoveTuple> {
    let dec = core_decomposition(sys, word)?;
    let (words, braids) = circuit_moves(sys, word, variant)?;
    // inserts[k]: Jw moves applied at vertex k of the circuit.
    let mut inserts: Vec<Vec<Move>> = vec![Vec::new(); words.len()];
    for c in dec.elgcores.iter().filter(|c| !dec.cores.contains(c)) {
        let pos = (c.a - 2) as usize;
        let n = (c.b - c.a + 3) as usize;
        let k = words
            .iter()
            .position(|w| alternates(w, pos, n))
            .ok_or(Error::CoverageFailure(c.a, c.b))?;
        inserts[k].push(Move::Jw { pos, n });
    }
    let mut out = Vec::new();
    for (k, ins) in inserts.into_iter().enumerate() {
        out.extend(ins);
        if k < braids.len() {
            out.push(braids[k]);
        }
    }
    for c in &dec.elgcores {
        if n_of(&out, c) == 0 {
            return Err(Error::CoverageFailure(c.a, c.b));
        }
    }
    Ok(out)
}

/// Replays a tuple from `word`, checking that every window alternates;
/// returns the sequence of intermediate words.
pub fn replay(sys: &CoxeterSystem, word: &[usize], tuple: &[Move]) -> Result<Vec<Word>> {
    let mut cur = word.to_vec();
    let mut out = vec![cur.clone()];
    for mv in tuple {
        if !alternates(&cur, mv.pos(), mv.len()) {
            return Err(Error::Invalid(format!("move {mv:?} does not apply to {}", sys.format_word(&cur))));
        }
        if let Move::Braid { pos, len } = *mv {
            let (a, b) = (cur[pos], cur[pos + 1]);
            if sys.bond(a, b) as usize != len {
                return Err(Error::Invalid(format!("braid window {len} does not match m = {}", sys.bond(a, b))));
            }
            for k in 0..len {
                cur[pos + k] = if k % 2 == 0 { b } else { a };
            }
        }
        out.push(cur.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank3() -> std::sync::Arc<CoxeterSystem> {
        CoxeterSystem::build(&[vec![1, 4, 4], vec![4, 1, 4], vec![4, 4, 1]], true).unwrap()
    }

    #[test]
    fn t_interval_examples() {
        assert_eq!(t_intervals(&[0, 1, 2]), vec![Interval::new(1, 2), Interval::new(2, 3)]);
        assert_eq!(t_intervals(&[0, 1, 0]), vec![Interval::new(1, 3)]);
        assert_eq!(t_intervals(&[]), vec![Interval::empty()]);
    }

    #[test]
    fn dihedral_cores() {
        let w4 = CoxeterSystem::dihedral(4).unwrap();
        let d = core_decomposition(&w4, &[0, 1, 0]).unwrap();
        assert_eq!(d.gcores, vec![Interval::new(2, 2)]);
        assert!(d.elgcores.is_empty() && d.cores.is_empty());
        let d = core_decomposition(&w4, &[0, 1, 0, 1]).unwrap();
        assert_eq!(d.cores, vec![Interval::new(2, 3)]);
        assert_eq!(d.classification[0].1, CoreKind::Filled);
        let w5 = CoxeterSystem::dihedral(5).unwrap();
        let d = core_decomposition(&w5, &[0, 1, 0, 1]).unwrap();
        assert_eq!(d.elgcores, vec![Interval::new(2, 3)]);
        assert!(d.cores.is_empty());
        assert_eq!(a_of_x(&w5, &[0, 1, 0, 1, 0]), vec![Interval::new(1, 5)]);
    }

    #[test]
    fn tuples_dihedral() {
        let w4 = CoxeterSystem::dihedral(4).unwrap();
        assert!(f_tuple(&w4, &[0, 1, 0]).unwrap().is_empty());
        let t = f_tuple(&w4, &[0, 1, 0, 1]).unwrap();
        assert_eq!(t, vec![Move::Braid { pos: 0, len: 4 }; 2]);
        assert_eq!(n_of(&t, &Interval::new(2, 3)), 2);
        assert_eq!(gf_tuple(&w4, &[0, 1, 0, 1]).unwrap(), t);
        let w5 = CoxeterSystem::dihedral(5).unwrap();
        assert_eq!(gf_tuple(&w5, &[0, 1, 0, 1]).unwrap(), vec![Move::Jw { pos: 0, n: 4 }]);
        assert!(gf_tuple(&w5, &[0, 1, 0]).unwrap().is_empty());
    }

    #[test]
    fn rank3_example_word() {
        let w = rank3();
        let word = w.parse_word("srsrtst").unwrap();
        let a = a_of_x(&w, &word);
        assert!(a.contains(&Interval::new(1, 4)) && a.contains(&Interval::new(4, 7)));
        let d = core_decomposition(&w, &word).unwrap();
        assert_eq!(d.cores, vec![Interval::new(2, 3), Interval::new(5, 6)]);
        let t = f_tuple(&w, &word).unwrap();
        let offsets: Vec<usize> = t.iter().map(|m| m.pos()).collect();
        assert_eq!(offsets, vec![0, 3, 3, 0]);
        assert_eq!(replay(&w, &word, &t).unwrap().last().unwrap(), &word);
    }
}
