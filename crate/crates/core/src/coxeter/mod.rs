//! Coxeter systems given by a Coxeter matrix.
//!
//! Group elements are enumerated breadth-first up to a length budget. Each
//! element is identified by its ShortLex-minimal reduced word and gets an
//! integer id; ids increase with `(length, ShortLex)` so the derived `Ord`
//! on [`Element`] is the display order used everywhere.
//!
//! The word problem is solved combinatorially, with no reflection
//! representation. For a new element `w = xs` the right descent set is found
//! by stripping alternating letters `s, t, s, ...` off the right: `t` is a
//! right descent of `w` exactly when the strip reaches `m(s, t)` letters,
//! since then the `{s, t}`-part of `w` is the longest element of the dihedral
//! parabolic. The products `wt` for those descents land in the previous
//! layer, and the ShortLex word of `w` is the smallest `word(wt) + t`.

mod parabolic;
mod rex;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parabolic::{GenSet, ParabolicData};
pub use rex::{BraidApp, RexMove};

/// Names used by the built-in constructors, in generator order.
const DEFAULT_NAMES: [&str; 8] = ["s", "t", "u", "r", "p", "q", "w", "x"];

/// Symmetric Coxeter matrix. An entry of `0` encodes `m = infinity`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterMatrix {
    generators: Vec<String>,
    m: Vec<Vec<u32>>,
}

impl CoxeterMatrix {
    pub fn new(generators: Vec<String>, m: Vec<Vec<u32>>) -> Result<Self> {
        let n = generators.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("no generators".into()));
        }
        if n > 64 {
            return Err(Error::InvalidMatrix(
                "at most 64 generators are supported".into(),
            ));
        }
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMatrix(format!("matrix must be {n}x{n}")));
        }
        for (i, name) in generators.iter().enumerate() {
            if name.is_empty() || name.contains(',') || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidMatrix(format!("bad generator name {name:?}")));
            }
            if generators[..i].contains(name) {
                return Err(Error::InvalidMatrix(format!(
                    "duplicate generator {name:?}"
                )));
            }
        }
        for i in 0..n {
            if m[i][i] != 1 {
                return Err(Error::InvalidMatrix(format!("m[{i}][{i}] must be 1")));
            }
            for j in 0..n {
                if i != j {
                    if m[i][j] != m[j][i] {
                        return Err(Error::InvalidMatrix(format!("m[{i}][{j}] != m[{j}][{i}]")));
                    }
                    if m[i][j] == 1 {
                        return Err(Error::InvalidMatrix(format!(
                            "m[{i}][{j}] must be at least 2 (or 0 for infinity)"
                        )));
                    }
                }
            }
        }
        Ok(Self { generators, m })
    }

    /// Parses the JSON file format `{"generators": [...], "m": [[...]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            generators: Vec<String>,
            m: Vec<Vec<u32>>,
        }
        let raw: Raw =
            serde_json::from_str(text).map_err(|e| Error::InvalidMatrix(e.to_string()))?;
        Self::new(raw.generators, raw.m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }

    /// Builds a matrix from off-diagonal entries `(i, j, m_ij)`; unspecified
    /// pairs commute.
    pub fn from_edges(rank: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        if rank > DEFAULT_NAMES.len() {
            return Err(Error::InvalidMatrix(
                "too many generators for default names".into(),
            ));
        }
        let mut m = vec![vec![2; rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(i, j, v) in edges {
            m[i][j] = v;
            m[j][i] = v;
        }
        let names = DEFAULT_NAMES[..rank]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::new(names, m)
    }

    /// Type `A_n` (the symmetric group on `n + 1` letters).
    pub fn type_a(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 3)).collect();
        Self::from_edges(n, &edges).expect("valid type A")
    }

    /// Type `B_n` with `m(s, t) = 4` on the first edge.
    pub fn type_b(n: usize) -> Self {
        let edges: Vec<_> = (1..n)
            .map(|i| (i - 1, i, if i == 1 { 4 } else { 3 }))
            .collect();
        Self::from_edges(n, &edges).expect("valid type B")
    }

    /// Type `H_3` with `m(s, t) = 5`, `m(t, u) = 3`.
    pub fn type_h3() -> Self {
        Self::from_edges(3, &[(0, 1, 5), (1, 2, 3)]).expect("valid H3")
    }

    /// Dihedral `I_2(m)`; `m = 0` gives the infinite dihedral group.
    pub fn dihedral(m: u32) -> Self {
        Self::from_edges(2, &[(0, 1, m)]).expect("valid dihedral")
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    /// `m(s, t)`, with `None` for infinity.
    pub fn m(&self, s: usize, t: usize) -> Option<u32> {
        match self.m[s][t] {
            0 => None,
            v => Some(v),
        }
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.m
    }
}

/// A finite word in the generators, given by generator indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Expression(Vec<usize>);

impl Expression {
    pub fn new(letters: Vec<usize>) -> Self {
        Self(letters)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, s: usize) {
        self.0.push(s);
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// `(self, other)` as one word.
    pub fn concat(&self, other: &Expression) -> Expression {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Expression(v)
    }

    pub fn with_suffix(&self, s: usize) -> Expression {
        let mut v = self.0.clone();
        v.push(s);
        Expression(v)
    }

    pub fn with_prefix(&self, s: usize) -> Expression {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(s);
        v.extend_from_slice(&self.0);
        Expression(v)
    }

    pub fn prefix(&self, k: usize) -> Expression {
        Expression(self.0[..k].to_vec())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Expression {
        Expression(self.0[range].to_vec())
    }

    pub fn reversed(&self) -> Expression {
        Expression(self.0.iter().rev().copied().collect())
    }
}

impl From<Vec<usize>> for Expression {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

/// A group element. Compare and hash freely; render through the owning
/// [`CoxeterSystem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

/// Result of [`CoxeterSystem::normalize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub element: Element,
    pub reduced: bool,
}

/// A Coxeter system with every element of length at most `budget`
/// enumerated. Immutable after construction, so it can be shared across
/// threads.
pub struct CoxeterSystem {
    matrix: CoxeterMatrix,
    budget: usize,
    words: Vec<Expression>,
    lengths: Vec<usize>,
    layer_start: Vec<usize>,
    // flat [element * rank + generator]
    right: Vec<Option<Element>>,
    left: Vec<Option<Element>>,
    rdesc: Vec<u64>,
    ldesc: Vec<u64>,
    inverse: Vec<Element>,
    finite: bool,
    single_char_names: bool,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("generators", &self.matrix.generators)
            .field("budget", &self.budget)
            .field("elements", &self.words.len())
            .field("finite", &self.finite)
            .finish()
    }
}

struct Candidate {
    key: (Element, usize),
    desc: u64,
    below: Vec<(usize, Element)>,
}

impl CoxeterSystem {
    /// Enumerates all elements of length at most `budget`.
    pub fn build(matrix: CoxeterMatrix, budget: usize) -> Self {
        let rank = matrix.rank();
        let mut words = vec![Expression::empty()];
        let mut lengths = vec![0usize];
        let mut rdesc = vec![0u64];
        let mut right: Vec<Option<Element>> = vec![None; rank];
        let mut layer_start = vec![0usize, 1];
        let mut finite = false;

        for n in 0..budget {
            let (lo, hi) = (layer_start[n], layer_start[n + 1]);
            let mut seen: HashMap<(Element, usize), usize> = HashMap::new();
            let mut fresh: Vec<Candidate> = Vec::new();
            for x in lo..hi {
                for s in 0..rank {
                    if rdesc[x] >> s & 1 == 1 {
                        continue;
                    }
                    let cand = Self::candidate(&matrix, &rdesc, &right, Element(x as u32), s);
                    if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(cand.key) {
                        slot.insert(fresh.len());
                        fresh.push(cand);
                    }
                }
            }
            if fresh.is_empty() {
                finite = true;
                break;
            }
            fresh.sort_by_key(|c| c.key);
            let base = words.len();
            right.resize((base + fresh.len()) * rank, None);
            for (i, cand) in fresh.into_iter().enumerate() {
                let id = Element((base + i) as u32);
                let (y, t) = cand.key;
                words.push(words[y.index()].with_suffix(t));
                lengths.push(n + 1);
                rdesc.push(cand.desc);
                for (t, y) in cand.below {
                    right[id.index() * rank + t] = Some(y);
                    right[y.index() * rank + t] = Some(id);
                }
            }
            layer_start.push(words.len());
        }
        let full = if rank == 64 {
            u64::MAX
        } else {
            (1u64 << rank) - 1
        };
        if !finite && rdesc.iter().any(|&d| d == full) {
            finite = true;
        }

        let count = words.len();
        let mut inverse = vec![Element::IDENTITY; count];
        for (x, w) in words.iter().enumerate() {
            let mut cur = Element::IDENTITY;
            for &s in w.letters().iter().rev() {
                cur = right[cur.index() * rank + s].expect("inverse has the same length");
            }
            inverse[x] = cur;
        }
        let mut left = vec![None; count * rank];
        let mut ldesc = vec![0u64; count];
        for x in 0..count {
            let xi = inverse[x].index();
            for s in 0..rank {
                left[x * rank + s] = right[xi * rank + s].map(|p| inverse[p.index()]);
            }
            ldesc[x] = rdesc[xi];
        }
        let single_char_names = matrix.generators.iter().all(|g| g.chars().count() == 1);

        Self {
            matrix,
            budget,
            words,
            lengths,
            layer_start,
            right,
            left,
            rdesc,
            ldesc,
            inverse,
            finite,
            single_char_names,
        }
    }

    /// Computes descents and ShortLex key of `x * s`, where `s` is not a right
    /// descent of `x` and every element shorter than `x * s` is complete.
    fn candidate(
        matrix: &CoxeterMatrix,
        rdesc: &[u64],
        right: &[Option<Element>],
        x: Element,
        s: usize,
    ) -> Candidate {
        let rank = matrix.rank();
        let step =
            |e: Element, g: usize| right[e.index() * rank + g].expect("shorter products are known");
        let mut desc = 1u64 << s;
        let mut below = vec![(s, x)];
        for t in (0..rank).filter(|&t| t != s) {
            let Some(m) = matrix.m(s, t) else { continue };
            let m = m as usize;
            // strip s (giving x), then t, s, t, ... while they are descents
            let mut c = x;
            let mut stripped = 1;
            let mut letter = t;
            while stripped < m && rdesc[c.index()] >> letter & 1 == 1 {
                c = step(c, letter);
                stripped += 1;
                letter = if letter == s { t } else { s };
            }
            if stripped == m {
                desc |= 1 << t;
                // w t = (minimal coset part) * (alternating word of length m-1 ending in s)
                let mut y = c;
                let mut letter = if (m - 1) % 2 == 1 { s } else { t };
                for _ in 0..m - 1 {
                    y = step(y, letter);
                    letter = if letter == s { t } else { s };
                }
                below.push((t, y));
            }
        }
        let key = below.iter().map(|&(t, y)| (y, t)).min().expect("nonempty");
        Candidate { key, desc, below }
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// True when the whole group was enumerated (the group is finite and its
    /// longest element fits in the budget).
    pub fn is_finite(&self) -> bool {
        self.finite
    }

    pub fn num_elements(&self) -> usize {
        self.words.len()
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Element> + ExactSizeIterator + '_ {
        (0..self.words.len() as u32).map(Element)
    }

    pub fn elements_of_length(&self, n: usize) -> impl Iterator<Item = Element> + '_ {
        let range = match (self.layer_start.get(n), self.layer_start.get(n + 1)) {
            (Some(&lo), Some(&hi)) => lo..hi,
            _ => 0..0,
        };
        range.map(|i| Element(i as u32))
    }

    /// The longest element, when the group is finite.
    pub fn longest_element(&self) -> Option<Element> {
        self.finite.then(|| Element((self.words.len() - 1) as u32))
    }

    pub fn length(&self, x: Element) -> usize {
        self.lengths[x.index()]
    }

    /// ShortLex-minimal reduced word.
    pub fn word(&self, x: Element) -> &Expression {
        &self.words[x.index()]
    }

    fn exceeded(&self) -> Error {
        Error::BudgetExceeded {
            budget: self.budget,
        }
    }

    /// `x * s`.
    pub fn rmul(&self, x: Element, s: usize) -> Result<Element> {
        self.right[x.index() * self.rank() + s].ok_or_else(|| self.exceeded())
    }

    /// `s * x`.
    pub fn lmul(&self, s: usize, x: Element) -> Result<Element> {
        self.left[x.index() * self.rank() + s].ok_or_else(|| self.exceeded())
    }

    pub fn mul(&self, x: Element, y: Element) -> Result<Element> {
        self.word(y)
            .letters()
            .iter()
            .try_fold(x, |acc, &s| self.rmul(acc, s))
    }

    pub fn inverse(&self, x: Element) -> Element {
        self.inverse[x.index()]
    }

    pub fn is_right_descent(&self, x: Element, s: usize) -> bool {
        self.rdesc[x.index()] >> s & 1 == 1
    }

    pub fn is_left_descent(&self, s: usize, x: Element) -> bool {
        self.ldesc[x.index()] >> s & 1 == 1
    }

    pub fn right_descents(&self, x: Element) -> GenSet {
        GenSet::from_bits(self.rdesc[x.index()])
    }

    pub fn left_descents(&self, x: Element) -> GenSet {
        GenSet::from_bits(self.ldesc[x.index()])
    }

    /// The generator `s` as an element.
    pub fn generator(&self, s: usize) -> Result<Element> {
        self.rmul(Element::IDENTITY, s)
    }

    /// Multiplies out a word and reports whether it was reduced.
    pub fn normalize(&self, w: &Expression) -> Result<Normalized> {
        let mut cur = Element::IDENTITY;
        for &s in w.letters() {
            if s >= self.rank() {
                return Err(Error::UnknownGenerator(s.to_string()));
            }
            cur = self.rmul(cur, s)?;
        }
        Ok(Normalized {
            element: cur,
            reduced: self.length(cur) == w.len(),
        })
    }

    /// The element of a word.
    pub fn element_of(&self, w: &Expression) -> Result<Element> {
        Ok(self.normalize(w)?.element)
    }

    pub fn is_reduced(&self, w: &Expression) -> Result<bool> {
        Ok(self.normalize(w)?.reduced)
    }

    /// Bruhat order by the lifting property: for a left descent `s` of `y`,
    /// `x <= y` iff `min(x, sx) <= sy`.
    pub fn bruhat_leq(&self, x: Element, y: Element) -> bool {
        let (mut x, mut y) = (x, y);
        loop {
            let (lx, ly) = (self.length(x), self.length(y));
            if lx >= ly {
                return x == y;
            }
            let s = self.word(y).letters()[0];
            y = self.left[y.index() * self.rank() + s].expect("left descent");
            if self.is_left_descent(s, x) {
                x = self.left[x.index() * self.rank() + s].expect("left descent");
            }
        }
    }

    /// `x < y` in Bruhat order.
    pub fn bruhat_lt(&self, x: Element, y: Element) -> bool {
        x != y && self.bruhat_leq(x, y)
    }

    pub fn generator_name(&self, s: usize) -> &str {
        &self.matrix.generators[s]
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.matrix
            .generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Word as text: concatenated for single-character generator names,
    /// comma-separated otherwise. The empty word is `""`.
    pub fn format_word(&self, w: &Expression) -> String {
        let names = w.letters().iter().map(|&s| self.generator_name(s));
        if self.single_char_names {
            names.collect()
        } else {
            names.collect::<Vec<_>>().join(",")
        }
    }

    /// Canonical word of an element, `""` for the identity.
    pub fn format_element(&self, x: Element) -> String {
        self.format_word(self.word(x))
    }

    /// Like [`format_element`](Self::format_element) but renders the
    /// identity as `id`.
    pub fn display_element(&self, x: Element) -> String {
        if x.is_identity() {
            "id".to_string()
        } else {
            self.format_element(x)
        }
    }

    /// Parses a word written as in [`format_word`](Self::format_word).
    /// Commas are always accepted as separators.
    pub fn parse_word(&self, text: &str) -> Result<Expression> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Expression::empty());
        }
        let letters = if text.contains(',') {
            text.split(',')
                .map(|tok| self.generator_index(tok.trim()))
                .collect::<Result<Vec<_>>>()?
        } else if self.single_char_names {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| self.generator_index(&c.to_string()))
                .collect::<Result<Vec<_>>>()?
        } else {
            vec![self.generator_index(text)?]
        };
        Ok(Expression(letters))
    }

    /// Parses an element from a word; `id` and `""` mean the identity.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let t = text.trim();
        if t == "id" && self.generator_index("id").is_err() {
            return Ok(Element::IDENTITY);
        }
        self.element_of(&self.parse_word(t)?)
    }
}
