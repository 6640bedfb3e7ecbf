//! Coxeter systems realized through the geometric representation.
//!
//! Group elements are identified by their exact matrix on the simple-root
//! basis and interned per system, so equality and hashing are by id.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{default_field_for, is_cos_pi_over, Fe, NumberField};
use crate::linalg::Matrix;

/// A word in the generators, as indices.
pub type Word = Vec<usize>;

/// Exact base field declaration: minimal polynomial of θ (constant term
/// first), expressions in θ for each needed cos(π/m), and optionally an
/// interval selecting the real root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub minpoly: Vec<i64>,
    #[serde(default)]
    pub cos: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<[f64; 2]>,
}

/// JSON form of a Coxeter system. Off-diagonal bond entries `≤ 0` stand for ∞.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub generators: Vec<String>,
    pub bond: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
}

#[derive(Debug)]
struct ElemData {
    id: usize,
    mat: Matrix,
    length: usize,
    word: Word,
}

/// An element of W, interned in its [`CoxeterSystem`].
#[derive(Clone)]
pub struct GroupElement(Arc<ElemData>);

impl GroupElement {
    pub fn id(&self) -> usize {
        self.0.id
    }
    pub fn length(&self) -> usize {
        self.0.length
    }
    /// A reduced word (the lexicographically smallest one found by stripping
    /// right descents with the largest generator first).
    pub fn word(&self) -> &Word {
        &self.0.word
    }
    pub fn matrix(&self) -> &Matrix {
        &self.0.mat
    }
    pub fn is_identity(&self) -> bool {
        self.0.length == 0
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, o: &Self) -> bool {
        self.0.id == o.0.id
    }
}
impl Eq for GroupElement {}
impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.0.id.hash(h)
    }
}
impl PartialOrd for GroupElement {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
/// Orders by length, then by reduced word.
impl Ord for GroupElement {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.length(), self.word()).cmp(&(o.length(), o.word()))
    }
}
impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{:?}", self.0.word)
    }
}

/// A braid move replacing the alternating window `a b a …` (length `len`)
/// starting at 0-based position `pos` by `b a b …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidMove {
    pub pos: usize,
    pub first: usize,
    pub second: usize,
    pub len: usize,
}

#[derive(Clone, Debug)]
pub struct RexGraph {
    pub vertices: Vec<Word>,
    /// `(from, to, move)` with `from < to`.
    pub edges: Vec<(usize, usize, BraidMove)>,
}

impl RexGraph {
    pub fn neighbors(&self, v: usize) -> Vec<(usize, BraidMove)> {
        let mut out = Vec::new();
        for &(a, b, mv) in &self.edges {
            if a == v {
                out.push((b, mv));
            } else if b == v {
                out.push((a, BraidMove { first: mv.second, second: mv.first, ..mv }));
            }
        }
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (u, _) in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }
}

pub struct CoxeterSystem {
    names: Vec<String>,
    bond: Vec<Vec<u32>>,
    extra_large: bool,
    field: Option<&'static NumberField>,
    cos: BTreeMap<u32, Fe>,
    gens: Vec<Matrix>,
    interned: Mutex<HashMap<Vec<Fe>, GroupElement>>,
    rex_memo: Mutex<HashMap<usize, Arc<Vec<Word>>>>,
    interval_memo: Mutex<HashMap<usize, Arc<Vec<GroupElement>>>>,
    spec: SystemSpec,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem").field("generators", &self.names).field("bond", &self.bond).finish()
    }
}

impl CoxeterSystem {
    /// Validates a bond matrix and builds the system over the default field.
    pub fn build(bond: &[Vec<i64>], require_extra_large: bool) -> Result<Arc<CoxeterSystem>> {
        let names = default_names(bond.len());
        CoxeterSystem::from_spec(&SystemSpec { generators: names, bond: bond.to_vec(), field: None }, require_extra_large)
    }

    /// Dihedral system on generators `s, r`.
    pub fn dihedral(m: u32) -> Result<Arc<CoxeterSystem>> {
        CoxeterSystem::build(&[vec![1, m as i64], vec![m as i64, 1]], false)
    }

    pub fn from_json(json: &str, require_extra_large: bool) -> Result<Arc<CoxeterSystem>> {
        let spec: SystemSpec = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        CoxeterSystem::from_spec(&spec, require_extra_large)
    }

    pub fn from_spec(spec: &SystemSpec, require_extra_large: bool) -> Result<Arc<CoxeterSystem>> {
        let n = spec.bond.len();
        if n == 0 || spec.bond.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        if spec.generators.len() != n {
            return Err(Error::Invalid("generator names do not match bond matrix".into()));
        }
        if n > crate::poly::MAX_VARS {
            return Err(Error::Invalid(format!("rank {n} exceeds {}", crate::poly::MAX_VARS)));
        }
        let mut bond = vec![vec![1u32; n]; n];
        let mut extra_large = true;
        for i in 0..n {
            if spec.bond[i][i] != 1 {
                return Err(Error::DiagonalNotOne(i));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let m = spec.bond[i][j];
                if m != spec.bond[j][i] {
                    return Err(Error::NonSymmetric(i, j));
                }
                if m <= 0 {
                    return Err(Error::InfiniteBondUnsupported);
                }
                if m < 2 {
                    return Err(Error::BondTooSmall(i, j, m));
                }
                bond[i][j] = m as u32;
                if m < 4 {
                    extra_large = false;
                    if require_extra_large {
                        return Err(Error::NotExtraLarge(i, j, m as u32));
                    }
                }
            }
        }
        let labels: BTreeSet<u32> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| bond[i][j]).collect();
        let (field, cos) = resolve_field(&labels, spec.field.as_ref())?;
        let mut gens = Vec::with_capacity(n);
        for s in 0..n {
            let mut m = Matrix::identity(n);
            for r in 0..n {
                // s(α_r) = α_r − 2B(α_s, α_r) α_s
                let b = if r == s { Fe::one() } else { cos[&bond[s][r]].neg() };
                let v = m.get(s, r).sub(&b.scale(&crate::field::big(2)));
                m.set(s, r, v);
            }
            gens.push(m);
        }
        let sys = CoxeterSystem {
            names: spec.generators.clone(),
            bond,
            extra_large,
            field,
            cos,
            gens,
            interned: Mutex::new(HashMap::new()),
            rex_memo: Mutex::new(HashMap::new()),
            interval_memo: Mutex::new(HashMap::new()),
            spec: spec.clone(),
        };
        Ok(Arc::new(sys))
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }
    pub fn bond(&self, s: usize, r: usize) -> u32 {
        self.bond[s][r]
    }
    pub fn is_extra_large(&self) -> bool {
        self.extra_large
    }
    pub fn field(&self) -> Option<&'static NumberField> {
        self.field
    }
    /// cos(π/m) in the base field.
    pub fn cos_pi_over(&self, m: u32) -> Option<&Fe> {
        self.cos.get(&m)
    }
    pub fn field_constants(&self) -> &BTreeMap<u32, Fe> {
        &self.cos
    }
    /// B(α_s, α_r).
    pub fn bilinear(&self, s: usize, r: usize) -> Fe {
        if s == r {
            Fe::one()
        } else {
            self.cos[&self.bond[s][r]].neg()
        }
    }
    /// Matrices of the generators on the simple-root basis.
    pub fn geometric_rep(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "1" {
            return Ok(Vec::new());
        }
        let single = self.names.iter().all(|n| n.chars().count() == 1);
        let tokens: Vec<String> = if single && !s.contains([' ', ',', '.']) {
            s.chars().map(|c| c.to_string()).collect()
        } else {
            s.split([' ', ',', '.']).filter(|t| !t.is_empty()).map(str::to_string).collect()
        };
        tokens
            .into_iter()
            .map(|t| self.names.iter().position(|n| *n == t).ok_or(Error::UnknownGenerator(t)))
            .collect()
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "e".into();
        }
        let single = self.names.iter().all(|n| n.chars().count() == 1);
        let parts: Vec<&str> = w.iter().map(|&i| self.names[i].as_str()).collect();
        if single {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    fn is_positive(v: &[Fe]) -> bool {
        v.iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.signum() == std::cmp::Ordering::Greater)
    }

    fn intern(&self, mat: Matrix) -> GroupElement {
        if let Some(g) = self.interned.lock().unwrap().get(&mat.data) {
            return g.clone();
        }
        // Strip right descents to find the length and a reduced word.
        let n = self.rank();
        let mut word = Vec::new();
        let mut cur = mat.clone();
        'outer: loop {
            for s in (0..n).rev() {
                let col: Vec<Fe> = (0..n).map(|i| cur.get(i, s).clone()).collect();
                if !CoxeterSystem::is_positive(&col) {
                    cur = cur.mul(&self.gens[s]);
                    word.push(s);
                    continue 'outer;
                }
            }
            break;
        }
        word.reverse();
        let mut map = self.interned.lock().unwrap();
        let id = map.len();
        map.entry(mat.data.clone())
            .or_insert_with(|| GroupElement(Arc::new(ElemData { id, length: word.len(), word, mat })))
            .clone()
    }

    pub fn identity(&self) -> GroupElement {
        self.intern(Matrix::identity(self.rank()))
    }

    pub fn generator(&self, s: usize) -> GroupElement {
        self.intern(self.gens[s].clone())
    }

    pub fn mul_gen_right(&self, w: &GroupElement, s: usize) -> GroupElement {
        self.intern(w.matrix().mul(&self.gens[s]))
    }

    pub fn mul_gen_left(&self, s: usize, w: &GroupElement) -> GroupElement {
        self.intern(self.gens[s].mul(w.matrix()))
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.intern(a.matrix().mul(b.matrix()))
    }

    pub fn inverse(&self, w: &GroupElement) -> GroupElement {
        let rev: Word = w.word().iter().rev().copied().collect();
        self.element(&rev)
    }

    pub fn element(&self, word: &[usize]) -> GroupElement {
        let mut m = Matrix::identity(self.rank());
        for &s in word {
            m = m.mul(&self.gens[s]);
        }
        self.intern(m)
    }

    /// True iff `w(α_s)` is a negative root, i.e. `ℓ(ws) < ℓ(w)`.
    pub fn is_right_descent(&self, w: &GroupElement, s: usize) -> bool {
        let col: Vec<Fe> = (0..self.rank()).map(|i| w.matrix().get(i, s).clone()).collect();
        !CoxeterSystem::is_positive(&col)
    }

    pub fn is_left_descent(&self, s: usize, w: &GroupElement) -> bool {
        self.is_right_descent(&self.inverse(w), s)
    }

    pub fn length(&self, word: &[usize]) -> usize {
        self.element(word).length()
    }

    pub fn is_reduced(&self, word: &[usize]) -> bool {
        self.length(word) == word.len()
    }

    pub fn require_reduced(&self, word: &[usize]) -> Result<()> {
        if self.is_reduced(word) {
            Ok(())
        } else {
            Err(Error::NotReduced(self.format_word(word)))
        }
    }

    /// The braid move available at `pos`, if the window there alternates
    /// for `m(a,b)` letters.
    pub fn braid_at(&self, word: &[usize], pos: usize) -> Option<BraidMove> {
        let a = *word.get(pos)?;
        let b = *word.get(pos + 1)?;
        if a == b {
            return None;
        }
        let m = self.bond[a][b] as usize;
        if pos + m > word.len() {
            return None;
        }
        let ok = (0..m).all(|k| word[pos + k] == if k % 2 == 0 { a } else { b });
        ok.then_some(BraidMove { pos, first: a, second: b, len: m })
    }

    pub fn apply_braid(&self, word: &[usize], mv: &BraidMove) -> Word {
        let mut w = word.to_vec();
        for k in 0..mv.len {
            w[mv.pos + k] = if k % 2 == 0 { mv.second } else { mv.first };
        }
        w
    }

    /// All reduced expressions of `x`, sorted.
    pub fn rex_set(&self, x: &GroupElement) -> Arc<Vec<Word>> {
        if let Some(r) = self.rex_memo.lock().unwrap().get(&x.id()) {
            return r.clone();
        }
        let mut seen: BTreeSet<Word> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(x.word().clone());
        queue.push_back(x.word().clone());
        while let Some(w) = queue.pop_front() {
            for pos in 0..w.len() {
                if let Some(mv) = self.braid_at(&w, pos) {
                    let u = self.apply_braid(&w, &mv);
                    if seen.insert(u.clone()) {
                        queue.push_back(u);
                    }
                }
            }
        }
        let out = Arc::new(seen.into_iter().collect::<Vec<_>>());
        self.rex_memo.lock().unwrap().insert(x.id(), out.clone());
        out
    }

    pub fn rex_graph(&self, x: &GroupElement) -> RexGraph {
        let vertices: Vec<Word> = self.rex_set(x).as_ref().clone();
        let index: HashMap<&Word, usize> = vertices.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut edges = Vec::new();
        for (i, w) in vertices.iter().enumerate() {
            for pos in 0..w.len() {
                if let Some(mv) = self.braid_at(w, pos) {
                    let j = index[&self.apply_braid(w, &mv)];
                    if i < j {
                        edges.push((i, j, mv));
                    }
                }
            }
        }
        RexGraph { vertices, edges }
    }

    /// Depth-first closed walk from `start` through every vertex, returning
    /// to `start` along the tree edges.
    pub fn covering_circuit(&self, graph: &RexGraph, start: &[usize]) -> Result<Vec<BraidMove>> {
        let s = graph
            .vertices
            .iter()
            .position(|v| v == start)
            .ok_or_else(|| Error::Invalid("start word is not a vertex".into()))?;
        let mut seen = vec![false; graph.vertices.len()];
        let mut walk = Vec::new();
        fn dfs(g: &RexGraph, v: usize, seen: &mut [bool], walk: &mut Vec<BraidMove>) {
            seen[v] = true;
            for (u, mv) in g.neighbors(v) {
                if !seen[u] {
                    walk.push(mv);
                    dfs(g, u, seen, walk);
                    walk.push(BraidMove { first: mv.second, second: mv.first, ..mv });
                }
            }
        }
        dfs(graph, s, &mut seen, &mut walk);
        Ok(walk)
    }

    /// The Bruhat interval `[e, y]`, sorted by length then word.
    pub fn bruhat_interval(&self, y: &GroupElement) -> Arc<Vec<GroupElement>> {
        if let Some(r) = self.interval_memo.lock().unwrap().get(&y.id()) {
            return r.clone();
        }
        let mut set: HashSet<GroupElement> = HashSet::new();
        set.insert(self.identity());
        for &s in y.word() {
            let ext: Vec<GroupElement> = set.iter().map(|w| self.mul_gen_right(w, s)).collect();
            set.extend(ext);
        }
        let mut v: Vec<GroupElement> = set.into_iter().collect();
        v.sort();
        let out = Arc::new(v);
        self.interval_memo.lock().unwrap().insert(y.id(), out.clone());
        out
    }

    pub fn bruhat_leq(&self, x: &GroupElement, y: &GroupElement) -> bool {
        x.length() <= y.length() && self.bruhat_interval(y).contains(x)
    }

    /// All elements of length at most `n`, sorted.
    pub fn elements_up_to(&self, n: usize) -> Vec<GroupElement> {
        let mut layer = vec![self.identity()];
        let mut all: BTreeSet<GroupElement> = layer.iter().cloned().collect();
        for _ in 0..n {
            let mut next = BTreeSet::new();
            for w in &layer {
                for s in 0..self.rank() {
                    if !self.is_right_descent(w, s) {
                        next.insert(self.mul_gen_right(w, s));
                    }
                }
            }
            all.extend(next.iter().cloned());
            layer = next.into_iter().collect();
        }
        all.into_iter().collect()
    }

    /// Alternating word `a b a …` of length `n`.
    pub fn alternating(a: usize, b: usize, n: usize) -> Word {
        (0..n).map(|k| if k % 2 == 0 { a } else { b }).collect()
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    const STD: [&str; 8] = ["s", "r", "t", "u", "v", "w", "x", "z"];
    (0..n).map(|i| STD.get(i).map_or_else(|| format!("s{i}"), |s| s.to_string())).collect()
}

fn resolve_field(labels: &BTreeSet<u32>, spec: Option<&FieldSpec>) -> Result<(Option<&'static NumberField>, BTreeMap<u32, Fe>)> {
    let mut cos = BTreeMap::new();
    match spec {
        None => {
            let bonds: Vec<u32> = labels.iter().copied().collect();
            let (minpoly, exprs) = match default_field_for(&bonds) {
                Some(x) => x,
                None => {
                    let missing = *bonds.iter().rev().find(|m| !matches!(m, 2 | 3)).unwrap();
                    return Err(Error::FieldMissingConstant(missing));
                }
            };
            let nf = match minpoly {
                Some(p) => Some(NumberField::intern(&p, None)?),
                None => None,
            };
            for (m, e) in exprs {
                cos.insert(m, Fe::parse(&e, nf)?);
            }
            Ok((nf, cos))
        }
        Some(fs) => {
            let nf = if fs.minpoly.len() <= 2 {
                None
            } else {
                Some(NumberField::intern(&fs.minpoly, fs.root)?)
            };
            for &m in labels {
                let c = match fs.cos.get(&m.to_string()) {
                    Some(e) => Fe::parse(e, nf)?,
                    None if m == 2 => Fe::zero(),
                    None if m == 3 => Fe::from_ratio(1, 2),
                    None => return Err(Error::FieldMissingConstant(m)),
                };
                if !is_cos_pi_over(&c, m) {
                    return Err(Error::InvalidField(format!("declared value is not cos(pi/{m})")));
                }
                cos.insert(m, c);
            }
            Ok((nf, cos))
        }
    }
}
