//! Parabolic subgroups `W_J`, minimal coset representatives for `W_J \ W`,
//! the decomposition `w = uz` and wall-crossing.

use std::collections::BTreeSet;
use std::fmt;

use super::{CoxeterSystem, Element};
use crate::error::{Error, Result};

/// A subset of the generators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenSet(u64);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, s: usize) -> bool {
        self.0 >> s & 1 == 1
    }

    pub fn insert(&mut self, s: usize) {
        self.0 |= 1 << s;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn intersects(self, other: GenSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&s| self.contains(s))
    }

    /// Every subset of `{0, .., rank - 1}`, in binary counting order.
    pub fn all_subsets(rank: usize) -> impl Iterator<Item = GenSet> {
        (0..1u64 << rank).map(GenSet)
    }
}

impl FromIterator<usize> for GenSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = GenSet::EMPTY;
        for s in iter {
            set.insert(s);
        }
        set
    }
}

/// A finitary parabolic subset together with its finite subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicData {
    pub j: GenSet,
    /// `W_J`, sorted by `(length, ShortLex)`.
    pub elements: Vec<Element>,
    /// `w_J`
    pub longest: Element,
    /// `d_J = l(w_J)`
    pub d_j: usize,
}

impl ParabolicData {
    pub fn contains(&self, s: usize) -> bool {
        self.j.contains(s)
    }
}

impl CoxeterSystem {
    /// Enumerates `W_J`. Fails with `BudgetExceeded` when the subgroup does
    /// not close within the length budget, which is how non-finitary subsets
    /// are reported.
    pub fn parabolic(&self, j: GenSet) -> Result<ParabolicData> {
        if let Some(bad) = j.iter().find(|&s| s >= self.rank()) {
            return Err(Error::UnknownGenerator(bad.to_string()));
        }
        let mut seen = BTreeSet::from([Element::IDENTITY]);
        let mut frontier = vec![Element::IDENTITY];
        while let Some(x) = frontier.pop() {
            for s in j.iter() {
                let xs = self.rmul(x, s)?;
                if seen.insert(xs) {
                    frontier.push(xs);
                }
            }
        }
        let elements: Vec<Element> = seen.into_iter().collect();
        let longest = *elements.last().expect("identity present");
        if j.iter().any(|s| !self.is_right_descent(longest, s)) {
            return Err(Error::InternalInconsistency(format!(
                "longest element {} of W_J misses a right descent",
                self.display_element(longest)
            )));
        }
        Ok(ParabolicData {
            j,
            elements,
            longest,
            d_j: self.length(longest),
        })
    }

    /// All finitary subsets (those whose subgroup closes within budget).
    pub fn finitary_subsets(&self) -> Vec<ParabolicData> {
        GenSet::all_subsets(self.rank())
            .filter_map(|j| self.parabolic(j).ok())
            .collect()
    }

    /// `{s,t}`-style rendering of a generator subset by name.
    pub fn format_genset(&self, j: GenSet) -> String {
        let names: Vec<&str> = j.iter().map(|s| self.generator_name(s)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// `z` is a minimal coset representative for `W_J \ W` iff no left
    /// descent of `z` lies in `J`.
    pub fn is_min_coset_rep(&self, z: Element, j: GenSet) -> bool {
        !self.left_descents(z).intersects(j)
    }

    /// All of `^J W` up to length `max_length`, sorted.
    pub fn min_coset_reps(&self, par: &ParabolicData, max_length: usize) -> Result<Vec<Element>> {
        if max_length > self.budget() && !self.is_finite() {
            return Err(Error::BudgetExceeded {
                budget: self.budget(),
            });
        }
        Ok(self
            .elements()
            .take_while(|&x| self.length(x) <= max_length)
            .filter(|&x| self.is_min_coset_rep(x, par.j))
            .collect())
    }

    /// Every enumerated element of `^J W`.
    pub fn all_min_coset_reps(&self, j: GenSet) -> Vec<Element> {
        self.elements()
            .filter(|&x| self.is_min_coset_rep(x, j))
            .collect()
    }

    /// `w = u z` with `u` in `W_J` and `z` in `^J W`, found by stripping left
    /// descents in `J` greedily.
    pub fn coset_decompose(&self, w: Element, j: GenSet) -> (Element, Element) {
        let mut z = w;
        let mut stripped = Vec::new();
        while let Some(s) = self.left_descents(z).iter().find(|&s| j.contains(s)) {
            z = self.lmul(s, z).expect("left descent");
            stripped.push(s);
        }
        let mut u = Element::IDENTITY;
        for s in stripped {
            u = self.rmul(u, s).expect("u is a prefix of w");
        }
        (u, z)
    }

    /// The minimal coset representative of `W_J w`.
    pub fn min_coset_rep(&self, w: Element, j: GenSet) -> Element {
        self.coset_decompose(w, j).1
    }

    /// For `z` in `^J W` and `zs` outside `^J W`, the generator `t` in `J`
    /// with `zs = tz`.
    pub fn wall_cross(&self, z: Element, s: usize, j: GenSet) -> Result<usize> {
        if !self.is_min_coset_rep(z, j) {
            return Err(Error::PreconditionViolated(format!(
                "{} is not a minimal coset representative",
                self.display_element(z)
            )));
        }
        let zs = self.rmul(z, s)?;
        if self.is_min_coset_rep(zs, j) {
            return Err(Error::PreconditionViolated(format!(
                "{}{} is a minimal coset representative",
                self.display_element(z),
                self.generator_name(s)
            )));
        }
        if self.length(zs) < self.length(z) {
            return Err(Error::InternalInconsistency(
                "zs < z for a wall crossing".into(),
            ));
        }
        let conj = self.mul(zs, self.inverse(z))?;
        if self.length(conj) != 1 {
            return Err(Error::NotInJ(self.display_element(conj)));
        }
        let t = self.word(conj).letters()[0];
        if !j.contains(t) {
            return Err(Error::NotInJ(self.generator_name(t).to_string()));
        }
        Ok(t)
    }
}

impl fmt::Display for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}
