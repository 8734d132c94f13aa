//! Subexpressions, coset strolls and their U/D/X decorations, the spherical
//! defect, the order on subexpressions, and the double-leaf index sets that
//! count graded Hom ranks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSystem, Element, Expression, GenSet};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// A 0/1 marking of the letters of a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subexpression {
    word: Expression,
    bits: Vec<u8>,
}

impl Subexpression {
    pub fn new(word: Expression, bits: Vec<u8>) -> Result<Self> {
        if word.len() != bits.len() {
            return Err(Error::PreconditionViolated(format!(
                "word has {} letters but {} bits were given",
                word.len(),
                bits.len()
            )));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Parse("bits must be 0 or 1".into()));
        }
        Ok(Self { word, bits })
    }

    /// Parses a bit string such as `"0111"`.
    pub fn from_bitstring(word: Expression, bits: &str) -> Result<Self> {
        let bits = bits
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("invalid bit {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(word, bits)
    }

    /// All `2^n` subexpressions, counting in binary with `e_1` as the least
    /// significant bit.
    pub fn all(word: &Expression) -> impl Iterator<Item = Subexpression> + '_ {
        let n = word.len();
        assert!(n < 64, "word too long to enumerate");
        (0..1u64 << n).map(move |code| Subexpression {
            word: word.clone(),
            bits: (0..n).map(|i| (code >> i & 1) as u8).collect(),
        })
    }

    pub fn word(&self) -> &Expression {
        &self.word
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bitstring(&self) -> String {
        self.bits.iter().map(|b| char::from(b'0' + b)).collect()
    }

    /// The selected letters `x̲^e` as a word.
    pub fn selected(&self) -> Expression {
        let picked = self
            .word
            .letters()
            .iter()
            .zip(&self.bits)
            .filter(|(_, &b)| b == 1)
            .map(|(&s, _)| s);
        Expression::new(picked.collect())
    }

    /// The product `s_1^{e_1} ··· s_n^{e_n}`.
    pub fn product(&self, sys: &CoxeterSystem) -> Result<Element> {
        sys.element_of(&self.selected())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    U0,
    U1,
    D0,
    D1,
    X0,
    X1,
}

impl Label {
    pub fn new(kind: char, bit: u8) -> Self {
        match (kind, bit) {
            ('U', 0) => Label::U0,
            ('U', _) => Label::U1,
            ('D', 0) => Label::D0,
            ('D', _) => Label::D1,
            ('X', 0) => Label::X0,
            _ => Label::X1,
        }
    }

    /// `U`, `D` or `X`.
    pub fn kind(self) -> char {
        match self {
            Label::U0 | Label::U1 => 'U',
            Label::D0 | Label::D1 => 'D',
            Label::X0 | Label::X1 => 'X',
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Label::U0 | Label::D0 | Label::X0 => 0,
            _ => 1,
        }
    }

    /// Contribution to the spherical defect (and to light-leaf degree).
    pub fn defect(self) -> i32 {
        match self {
            Label::U0 | Label::X0 => 1,
            Label::D0 | Label::X1 => -1,
            Label::U1 | Label::D1 => 0,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind(), self.bit())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U0" => Ok(Label::U0),
            "U1" => Ok(Label::U1),
            "D0" => Ok(Label::D0),
            "D1" => Ok(Label::D1),
            "X0" => Ok(Label::X0),
            "X1" => Ok(Label::X1),
            _ => Err(Error::Parse(format!("unknown label {s:?}"))),
        }
    }
}

/// The coset stroll `z_0, .., z_n` of a subexpression and its labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoration {
    pub labels: Vec<Label>,
    pub stroll: Vec<Element>,
    pub endpoint: Element,
}

impl Decoration {
    pub fn sdef(&self) -> i32 {
        self.labels.iter().map(|l| l.defect()).sum()
    }

    pub fn format_labels(&self) -> String {
        self.labels
            .iter()
            .map(Label::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn format_stroll(&self, sys: &CoxeterSystem) -> String {
        self.stroll
            .iter()
            .map(|&z| sys.display_element(z))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn decorate(sys: &CoxeterSystem, e: &Subexpression, j: GenSet) -> Result<Decoration> {
    let mut z = Element::IDENTITY;
    let mut stroll = vec![z];
    let mut labels = Vec::with_capacity(e.len());
    for (&s, &b) in e.word.letters().iter().zip(&e.bits) {
        let zs = sys.rmul(z, s)?;
        let kind = if !sys.is_min_coset_rep(zs, j) {
            'X'
        } else if sys.length(zs) > sys.length(z) {
            'U'
        } else {
            'D'
        };
        if b == 1 && kind != 'X' {
            z = zs;
        }
        labels.push(Label::new(kind, b));
        stroll.push(z);
    }
    Ok(Decoration {
        labels,
        stroll,
        endpoint: z,
    })
}

/// `#U0 + #X0 - #D0 - #X1`
pub fn sdef(sys: &CoxeterSystem, e: &Subexpression, j: GenSet) -> Result<i32> {
    Ok(decorate(sys, e, j)?.sdef())
}

/// Labels relative to the full group, i.e. with `J = ∅`.
pub fn classical_labels(sys: &CoxeterSystem, e: &Subexpression) -> Result<Vec<Label>> {
    Ok(decorate(sys, e, GenSet::EMPTY)?.labels)
}

/// `f ⪯ e`: either the stroll of `f` lies strictly below that of `e`
/// pointwise in the Bruhat order, or the strolls agree and there is no step
/// where `e` reads `X0` while `f` reads `X1`.
pub fn preceq(
    sys: &CoxeterSystem,
    f: &Subexpression,
    e: &Subexpression,
    j: GenSet,
) -> Result<bool> {
    if f.word != e.word {
        return Err(Error::WordMismatch);
    }
    let df = decorate(sys, f, j)?;
    let de = decorate(sys, e, j)?;
    Ok(decorations_preceq(sys, &df, &de))
}

pub(crate) fn decorations_preceq(sys: &CoxeterSystem, df: &Decoration, de: &Decoration) -> bool {
    if df.stroll == de.stroll {
        !df.labels
            .iter()
            .zip(&de.labels)
            .any(|(&lf, &le)| le == Label::X0 && lf == Label::X1)
    } else {
        df.stroll
            .iter()
            .zip(&de.stroll)
            .all(|(&a, &b)| sys.bruhat_leq(a, b))
    }
}

/// `(e', f') ⪯ (e, f)` iff `e' ⪯ e` and `f' ⪯ f`.
pub fn pair_preceq(
    sys: &CoxeterSystem,
    lower: (&Subexpression, &Subexpression),
    upper: (&Subexpression, &Subexpression),
    j: GenSet,
) -> Result<bool> {
    Ok(preceq(sys, lower.0, upper.0, j)? && preceq(sys, lower.1, upper.1, j)?)
}

/// One pair `(e ⊂ x̲, f ⊂ y̲)` with a common endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleLeafPair {
    pub e: Subexpression,
    pub f: Subexpression,
    pub endpoint: Element,
    pub degree: i32,
}

/// Pairs with equal stroll endpoints, `e` outer and `f` inner in enumeration
/// order.
pub fn double_leaf_index(
    sys: &CoxeterSystem,
    x: &Expression,
    y: &Expression,
    j: GenSet,
) -> Result<Vec<DoubleLeafPair>> {
    let decorated = |w: &Expression| -> Result<Vec<(Subexpression, Decoration)>> {
        Subexpression::all(w)
            .map(|e| decorate(sys, &e, j).map(|d| (e, d)))
            .collect()
    };
    let lower = decorated(x)?;
    let upper = decorated(y)?;
    let mut out = Vec::new();
    for (e, de) in &lower {
        for (f, df) in &upper {
            if de.endpoint == df.endpoint {
                out.push(DoubleLeafPair {
                    e: e.clone(),
                    f: f.clone(),
                    endpoint: de.endpoint,
                    degree: de.sdef() + df.sdef(),
                });
            }
        }
    }
    Ok(out)
}

/// `Σ v^{sdef(e) + sdef(f)}` over the double-leaf index set.
pub fn rank_poly(
    sys: &CoxeterSystem,
    x: &Expression,
    y: &Expression,
    j: GenSet,
) -> Result<LaurentPoly> {
    Ok(double_leaf_index(sys, x, y, j)?
        .iter()
        .map(|p| LaurentPoly::monomial(1, p.degree))
        .sum())
}

/// The multiset `{x̲^e : e ⊂ x̲}`.
pub fn localized_summands(sys: &CoxeterSystem, x: &Expression) -> Result<BTreeMap<Element, usize>> {
    let mut out = BTreeMap::new();
    for e in Subexpression::all(x) {
        *out.entry(e.product(sys)?).or_insert(0) += 1;
    }
    Ok(out)
}

/// One row of a stroll dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrollRow {
    pub bits: String,
    pub labels: String,
    pub stroll: String,
    pub endpoint: String,
    pub sdef: i32,
}

/// One row of a double-leaf dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRow {
    pub e: String,
    pub f: String,
    pub endpoint: String,
    pub degree: i32,
}

pub fn stroll_rows(sys: &CoxeterSystem, x: &Expression, j: GenSet) -> Result<Vec<StrollRow>> {
    Subexpression::all(x)
        .map(|e| {
            let d = decorate(sys, &e, j)?;
            Ok(StrollRow {
                bits: e.bitstring(),
                labels: d.format_labels(),
                stroll: d.format_stroll(sys),
                endpoint: sys.display_element(d.endpoint),
                sdef: d.sdef(),
            })
        })
        .collect()
}

pub fn pair_rows(sys: &CoxeterSystem, pairs: &[DoubleLeafPair]) -> Vec<PairRow> {
    pairs
        .iter()
        .map(|p| PairRow {
            e: p.e.bitstring(),
            f: p.f.bitstring(),
            endpoint: sys.display_element(p.endpoint),
            degree: p.degree,
        })
        .collect()
}

/// Serializes rows as CSV with a header line.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}
