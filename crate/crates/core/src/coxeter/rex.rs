//! Braid relations, reduced words and rex moves.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{CoxeterSystem, Element, Expression};
use crate::error::{Error, Result};

/// One application of a braid relation: the letters at
/// `pos .. pos + m` read `first, second, first, ...` and are replaced by
/// `second, first, second, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidApp {
    pub pos: usize,
    pub first: usize,
    pub second: usize,
    pub m: u32,
}

impl BraidApp {
    fn alternating(a: usize, b: usize, m: u32) -> impl Iterator<Item = usize> {
        (0..m as usize).map(move |i| if i % 2 == 0 { a } else { b })
    }

    /// Applies the relation, or `None` if the pattern is not there.
    pub fn apply(&self, word: &Expression) -> Option<Expression> {
        let m = self.m as usize;
        let letters = word.letters();
        if self.first == self.second || self.pos + m > letters.len() {
            return None;
        }
        let window = &letters[self.pos..self.pos + m];
        if !window
            .iter()
            .copied()
            .eq(Self::alternating(self.first, self.second, self.m))
        {
            return None;
        }
        let mut out = letters.to_vec();
        for (slot, g) in out[self.pos..self.pos + m]
            .iter_mut()
            .zip(Self::alternating(self.second, self.first, self.m))
        {
            *slot = g;
        }
        Some(Expression::new(out))
    }

    /// The application undoing this one.
    pub fn inverse(&self) -> BraidApp {
        BraidApp {
            first: self.second,
            second: self.first,
            ..*self
        }
    }

    /// Index of the last letter touched.
    pub fn end(&self) -> usize {
        self.pos + self.m as usize - 1
    }
}

/// A sequence of braid relations from one reduced word to another.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RexMove {
    pub source: Expression,
    pub target: Expression,
    pub apps: Vec<BraidApp>,
}

impl RexMove {
    pub fn identity(word: Expression) -> Self {
        Self {
            source: word.clone(),
            target: word,
            apps: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.apps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.apps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.apps.is_empty()
    }

    /// Rebuilds a move from its source and applications.
    pub fn from_apps(source: Expression, apps: Vec<BraidApp>) -> Result<Self> {
        let mut cur = source.clone();
        for app in &apps {
            cur = app.apply(&cur).ok_or_else(|| {
                Error::Parse(format!("braid application at {} does not match", app.pos))
            })?;
        }
        Ok(Self {
            source,
            target: cur,
            apps,
        })
    }

    /// Every word visited, from source to target inclusive. Fails if an
    /// application does not match or the final word differs from `target`.
    pub fn trace(&self) -> Result<Vec<Expression>> {
        let mut cur = self.source.clone();
        let mut out = vec![cur.clone()];
        for app in &self.apps {
            cur = app.apply(&cur).ok_or_else(|| {
                Error::InternalInconsistency(format!("braid application {app:?} does not match"))
            })?;
            out.push(cur.clone());
        }
        if cur != self.target {
            return Err(Error::InternalInconsistency(
                "rex move does not reach its target".into(),
            ));
        }
        Ok(out)
    }

    /// Replays the move checking that every visited word is reduced.
    pub fn replay(&self, sys: &CoxeterSystem) -> Result<()> {
        for word in self.trace()? {
            if !sys.is_reduced(&word)? {
                return Err(Error::NotReduced(sys.format_word(&word)));
            }
        }
        Ok(())
    }

    /// The move run backwards.
    pub fn reversed(&self) -> RexMove {
        RexMove {
            source: self.target.clone(),
            target: self.source.clone(),
            apps: self.apps.iter().rev().map(BraidApp::inverse).collect(),
        }
    }

    /// The same move acting inside `(prefix, word, suffix)`.
    pub fn embed(&self, prefix: &Expression, suffix: &Expression) -> RexMove {
        let shift = prefix.len();
        RexMove {
            source: prefix.concat(&self.source).concat(suffix),
            target: prefix.concat(&self.target).concat(suffix),
            apps: self
                .apps
                .iter()
                .map(|a| BraidApp {
                    pos: a.pos + shift,
                    ..*a
                })
                .collect(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &RexMove) -> Result<RexMove> {
        if self.target != next.source {
            return Err(Error::InternalInconsistency(
                "composing mismatched rex moves".into(),
            ));
        }
        let mut apps = self.apps.clone();
        apps.extend_from_slice(&next.apps);
        Ok(RexMove {
            source: self.source.clone(),
            target: next.target.clone(),
            apps,
        })
    }
}

impl CoxeterSystem {
    /// All single braid relations applicable to `word`, sorted by resulting
    /// word.
    pub fn braid_neighbors(&self, word: &Expression) -> Vec<(Expression, BraidApp)> {
        let letters = word.letters();
        let mut out = Vec::new();
        for pos in 0..letters.len().saturating_sub(1) {
            let (a, b) = (letters[pos], letters[pos + 1]);
            if a == b {
                continue;
            }
            let Some(m) = self.matrix().m(a, b) else {
                continue;
            };
            let app = BraidApp {
                pos,
                first: a,
                second: b,
                m,
            };
            if let Some(next) = app.apply(word) {
                out.push((next, app));
            }
        }
        out.sort();
        out
    }

    /// Every reduced word of `x`, in lexicographic order.
    pub fn reduced_words(&self, x: Element) -> Vec<Expression> {
        let start = self.word(x).clone();
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            for (next, _) in self.braid_neighbors(&w) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Breadth-first search over reduced words starting at `from` (which
    /// must be reduced), returning the first shortest rex move to a word
    /// satisfying `goal`. Neighbors are expanded in lexicographic order.
    pub fn rex_search(
        &self,
        from: &Expression,
        goal: impl Fn(&Expression) -> bool,
    ) -> Result<Option<RexMove>> {
        if !self.is_reduced(from)? {
            return Err(Error::NotReduced(self.format_word(from)));
        }
        let mut parent: HashMap<Expression, Option<(Expression, BraidApp)>> = HashMap::new();
        parent.insert(from.clone(), None);
        let mut queue = VecDeque::from([from.clone()]);
        while let Some(w) = queue.pop_front() {
            if goal(&w) {
                let mut apps = Vec::new();
                let mut cur = w.clone();
                while let Some(Some((prev, app))) = parent.get(&cur) {
                    apps.push(*app);
                    cur = prev.clone();
                }
                apps.reverse();
                return Ok(Some(RexMove {
                    source: from.clone(),
                    target: w,
                    apps,
                }));
            }
            for (next, app) in self.braid_neighbors(&w) {
                if !parent.contains_key(&next) {
                    parent.insert(next.clone(), Some((w.clone(), app)));
                    queue.push_back(next);
                }
            }
        }
        Ok(None)
    }

    /// Shortest rex move between two reduced words of the same element.
    pub fn rex_path(&self, from: &Expression, to: &Expression) -> Result<RexMove> {
        let a = self.normalize(from)?;
        let b = self.normalize(to)?;
        if !a.reduced {
            return Err(Error::NotReduced(self.format_word(from)));
        }
        if !b.reduced {
            return Err(Error::NotReduced(self.format_word(to)));
        }
        if a.element != b.element {
            return Err(Error::DifferentElements(
                self.format_word(from),
                self.format_word(to),
            ));
        }
        self.rex_search(from, |w| w == to)?
            .ok_or_else(|| Error::InternalInconsistency("reduced words not braid-connected".into()))
    }

    /// Rex move from `from` to some reduced word ending in `s`.
    pub fn rex_to_ending(&self, from: &Expression, s: usize) -> Result<RexMove> {
        self.rex_search(from, |w| w.last() == Some(s))?
            .ok_or_else(|| {
                Error::PreconditionViolated(format!(
                    "{} is not a right descent of {}",
                    self.generator_name(s),
                    self.format_word(from)
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;

    #[test]
    fn rex_graph_a2() {
        let sys = CoxeterSystem::build(CoxeterMatrix::type_a(2), 10);
        let w0 = sys.longest_element().unwrap();
        let words: Vec<String> = sys
            .reduced_words(w0)
            .iter()
            .map(|w| sys.format_word(w))
            .collect();
        assert_eq!(words, ["sts", "tst"]);
        let path = sys
            .rex_path(
                &sys.parse_word("tst").unwrap(),
                &sys.parse_word("sts").unwrap(),
            )
            .unwrap();
        assert_eq!(
            path.apps,
            vec![BraidApp {
                pos: 0,
                first: 1,
                second: 0,
                m: 3
            }]
        );
        let same = sys
            .rex_path(
                &sys.parse_word("st").unwrap(),
                &sys.parse_word("st").unwrap(),
            )
            .unwrap();
        assert!(same.is_identity());
    }

    #[test]
    fn rex_graph_b2_and_a3() {
        let b2 = CoxeterSystem::build(CoxeterMatrix::type_b(2), 10);
        let w0 = b2.longest_element().unwrap();
        let words: Vec<String> = b2
            .reduced_words(w0)
            .iter()
            .map(|w| b2.format_word(w))
            .collect();
        assert_eq!(words, ["stst", "tsts"]);
        let path = b2
            .rex_path(&words_of(&b2, "stst"), &words_of(&b2, "tsts"))
            .unwrap();
        assert_eq!(path.len(), 1);
        let a3 = CoxeterSystem::build(CoxeterMatrix::type_a(3), 10);
        assert_eq!(a3.reduced_words(a3.longest_element().unwrap()).len(), 16);
    }

    fn words_of(sys: &CoxeterSystem, s: &str) -> Expression {
        sys.parse_word(s).unwrap()
    }

    #[test]
    fn rex_path_errors() {
        let sys = CoxeterSystem::build(CoxeterMatrix::type_a(2), 10);
        assert!(matches!(
            sys.rex_path(&words_of(&sys, "ss"), &words_of(&sys, "")),
            Err(Error::NotReduced(_))
        ));
        assert!(matches!(
            sys.rex_path(&words_of(&sys, "st"), &words_of(&sys, "ts")),
            Err(Error::DifferentElements(..))
        ));
    }

    #[test]
    fn moves_replay_and_reverse() {
        let sys = CoxeterSystem::build(CoxeterMatrix::type_a(3), 10);
        let w0 = sys.longest_element().unwrap();
        let words = sys.reduced_words(w0);
        let mv = sys
            .rex_path(words.first().unwrap(), words.last().unwrap())
            .unwrap();
        mv.replay(&sys).unwrap();
        mv.reversed().replay(&sys).unwrap();
        assert_eq!(mv.reversed().target, mv.source);
        let pre = words_of(&sys, "");
        let embedded = mv.embed(&pre, &pre);
        assert_eq!(embedded, mv);
        let to_end = sys.rex_to_ending(&words_of(&sys, "stu"), 0);
        assert!(matches!(to_end, Err(Error::PreconditionViolated(_))));
        let to_end = sys.rex_to_ending(&words_of(&sys, "su"), 0).unwrap();
        assert_eq!(sys.format_word(&to_end.target), "us");
    }
}
