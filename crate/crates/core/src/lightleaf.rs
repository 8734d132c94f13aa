//! Symbolic light-leaf recipes: spherical light leaves, double leaves glued
//! through a fixed reduced word, non-spherical light leaves split along
//! `w = uz`, and sweeps.
//!
//! A recipe records, step by step, which rex moves and which elementary
//! generator (dot, trivalent vertex, cap, wall plug) act on the current
//! word. Every recipe can be replayed and checked at the level of words.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coxeter::{BraidApp, CoxeterSystem, Element, Expression, GenSet, RexMove};
use crate::error::{Error, Result};
use crate::strolls::{classical_labels, decorate, Label, Subexpression};

/// Rex-move convention recorded in JSON output.
pub const REX_CONVENTION: &str = "shortlex-bfs";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementaryMove {
    None,
    /// Kills the new strand with a dot.
    DotKill,
    /// Trivalent vertex merging the two rightmost strands.
    Merge,
    /// Caps off the two rightmost strands.
    Cap,
    /// Plugs the leftmost strand, colored by this generator, into the wall.
    WallPlug(usize),
}

impl ElementaryMove {
    pub fn degree(self) -> i32 {
        match self {
            ElementaryMove::DotKill => 1,
            ElementaryMove::Merge | ElementaryMove::WallPlug(_) => -1,
            ElementaryMove::None | ElementaryMove::Cap => 0,
        }
    }

    /// The word after the move, or `None` if it does not fit.
    pub fn apply(self, word: &Expression) -> Option<Expression> {
        let n = word.len();
        let letters = word.letters();
        match self {
            ElementaryMove::None => Some(word.clone()),
            ElementaryMove::DotKill => (n >= 1).then(|| word.prefix(n - 1)),
            ElementaryMove::Merge => {
                (n >= 2 && letters[n - 1] == letters[n - 2]).then(|| word.prefix(n - 1))
            }
            ElementaryMove::Cap => {
                (n >= 2 && letters[n - 1] == letters[n - 2]).then(|| word.prefix(n - 2))
            }
            ElementaryMove::WallPlug(t) => (word.first() == Some(t)).then(|| word.slice(1..n)),
        }
    }

    pub fn render(self, sys: &CoxeterSystem) -> String {
        match self {
            ElementaryMove::None => "none".into(),
            ElementaryMove::DotKill => "dot-kill".into(),
            ElementaryMove::Merge => "trivalent-merge".into(),
            ElementaryMove::Cap => "cap".into(),
            ElementaryMove::WallPlug(t) => format!("wall-plug {}", sys.generator_name(t)),
        }
    }

    pub fn parse(sys: &CoxeterSystem, text: &str) -> Result<Self> {
        match text {
            "none" => Ok(ElementaryMove::None),
            "dot-kill" => Ok(ElementaryMove::DotKill),
            "trivalent-merge" => Ok(ElementaryMove::Merge),
            "cap" => Ok(ElementaryMove::Cap),
            _ => match text.strip_prefix("wall-plug ") {
                Some(g) => Ok(ElementaryMove::WallPlug(sys.generator_index(g)?)),
                None => Err(Error::Parse(format!("unknown elementary move {text:?}"))),
            },
        }
    }
}

/// One step `φ_k` of a spherical light leaf: `pre_rex` acts on
/// `(z̲_{k-1}, s_k)`, then `elementary`, then `post_rex` lands on
/// `intermediate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LLStep {
    pub k: usize,
    pub label: Label,
    pub pre_rex: RexMove,
    pub elementary: ElementaryMove,
    pub post_rex: RexMove,
    pub intermediate: Expression,
}

impl LLStep {
    pub fn degree(&self) -> i32 {
        self.elementary.degree()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LLRecipe {
    pub word: Expression,
    pub bits: Vec<u8>,
    pub j: GenSet,
    pub steps: Vec<LLStep>,
    pub target: Expression,
    pub degree: i32,
}

fn expected_elementary(label: Label, elementary: ElementaryMove, j: GenSet) -> bool {
    match (label, elementary) {
        (Label::U0 | Label::X0, ElementaryMove::DotKill) => true,
        (Label::U1, ElementaryMove::None) => true,
        (Label::D0, ElementaryMove::Merge) => true,
        (Label::D1, ElementaryMove::Cap) => true,
        (Label::X1, ElementaryMove::WallPlug(t)) => j.contains(t),
        _ => false,
    }
}

/// Checks a rex move on words whose last letter may be a doubled strand
/// awaiting a merge or cap; in that case only the rest must be reduced.
fn check_rex(sys: &CoxeterSystem, mv: &RexMove, doubled_tail: bool) -> Result<()> {
    for word in mv.trace()? {
        let core = if doubled_tail {
            word.prefix(word.len().saturating_sub(1))
        } else {
            word.clone()
        };
        if !sys.is_reduced(&core)? {
            return Err(Error::NotReduced(sys.format_word(&word)));
        }
    }
    Ok(())
}

/// Builds `SLL_{x̲,e}`. Intermediate words are ShortLex words of the stroll,
/// except that `target_rex`, when given, fixes the last one.
pub fn build_sll(
    sys: &CoxeterSystem,
    e: &Subexpression,
    j: GenSet,
    target_rex: Option<&Expression>,
) -> Result<LLRecipe> {
    let deco = decorate(sys, e, j)?;
    if let Some(t) = target_rex {
        let norm = sys.normalize(t)?;
        if !norm.reduced || norm.element != deco.endpoint {
            return Err(Error::TargetMismatch(format!(
                "{} is not a reduced word of {}",
                sys.format_word(t),
                sys.display_element(deco.endpoint)
            )));
        }
    }
    let n = e.len();
    let mut cur = Expression::empty();
    let mut steps = Vec::with_capacity(n);
    for k in 0..n {
        let s = e.word().letters()[k];
        let label = deco.labels[k];
        let start = cur.with_suffix(s);
        let (pre_rex, elementary) = match label {
            Label::U0 | Label::X0 => (RexMove::identity(start), ElementaryMove::DotKill),
            Label::U1 => (RexMove::identity(start), ElementaryMove::None),
            Label::D0 | Label::D1 => {
                let mv = sys
                    .rex_to_ending(&cur, s)?
                    .embed(&Expression::empty(), &Expression::new(vec![s]));
                let kind = if label == Label::D0 {
                    ElementaryMove::Merge
                } else {
                    ElementaryMove::Cap
                };
                (mv, kind)
            }
            Label::X1 => {
                let t = sys.wall_cross(deco.stroll[k], s, j)?;
                (
                    sys.rex_path(&start, &cur.with_prefix(t))?,
                    ElementaryMove::WallPlug(t),
                )
            }
        };
        let after = elementary.apply(&pre_rex.target).ok_or_else(|| {
            Error::InternalInconsistency(format!("step {} cannot apply {elementary:?}", k + 1))
        })?;
        let want = match target_rex {
            Some(t) if k + 1 == n => t.clone(),
            _ => sys.word(deco.stroll[k + 1]).clone(),
        };
        let post_rex = sys.rex_path(&after, &want)?;
        steps.push(LLStep {
            k: k + 1,
            label,
            pre_rex,
            elementary,
            post_rex,
            intermediate: want.clone(),
        });
        cur = want;
    }
    let recipe = LLRecipe {
        word: e.word().clone(),
        bits: e.bits().to_vec(),
        j,
        degree: steps.iter().map(LLStep::degree).sum(),
        steps,
        target: cur,
    };
    recipe.replay(sys)?;
    Ok(recipe)
}

impl LLRecipe {
    pub fn subexpression(&self) -> Result<Subexpression> {
        Subexpression::new(self.word.clone(), self.bits.clone())
    }

    /// Replays the recipe on words: every rex move must match and stay
    /// reduced, every intermediate word must be a reduced word of the
    /// corresponding stroll element, and the degree must equal the defect.
    pub fn replay(&self, sys: &CoxeterSystem) -> Result<()> {
        let deco = decorate(sys, &self.subexpression()?, self.j)?;
        if self.steps.len() != self.word.len() {
            return Err(Error::InternalInconsistency(
                "recipe has the wrong number of steps".into(),
            ));
        }
        let mut cur = Expression::empty();
        for (k, step) in self.steps.iter().enumerate() {
            let fail = |what: &str| Error::InternalInconsistency(format!("step {}: {what}", k + 1));
            if step.k != k + 1 || step.label != deco.labels[k] {
                return Err(fail("label does not match the decoration"));
            }
            if !expected_elementary(step.label, step.elementary, self.j) {
                return Err(fail("elementary move does not match the label"));
            }
            if step.pre_rex.source != cur.with_suffix(self.word.letters()[k]) {
                return Err(fail("pre_rex starts on the wrong word"));
            }
            check_rex(sys, &step.pre_rex, step.label.kind() == 'D')?;
            let after = step
                .elementary
                .apply(&step.pre_rex.target)
                .ok_or_else(|| fail("elementary move does not fit"))?;
            if step.post_rex.source != after || step.post_rex.target != step.intermediate {
                return Err(fail("post_rex does not connect"));
            }
            step.post_rex.replay(sys)?;
            let norm = sys.normalize(&step.intermediate)?;
            if !norm.reduced
                || norm.element != deco.stroll[k + 1]
                || !sys.is_min_coset_rep(norm.element, self.j)
            {
                return Err(fail("intermediate is not a reduced word of the stroll"));
            }
            cur = step.intermediate.clone();
        }
        if cur != self.target {
            return Err(Error::InternalInconsistency(
                "recipe does not end at its target".into(),
            ));
        }
        let total: i32 = self.steps.iter().map(LLStep::degree).sum();
        if total != self.degree || total != deco.sdef() {
            return Err(Error::InternalInconsistency(format!(
                "degree {} but steps sum to {} and the defect is {}",
                self.degree,
                total,
                deco.sdef()
            )));
        }
        Ok(())
    }

    pub fn bitstring(&self) -> String {
        self.bits.iter().map(|b| char::from(b'0' + b)).collect()
    }

    pub fn render_text(&self, sys: &CoxeterSystem) -> String {
        let mut out = String::new();
        let word = if self.word.is_empty() {
            "(empty)".to_string()
        } else {
            format!("{}/{}", sys.format_word(&self.word), self.bitstring())
        };
        let _ = writeln!(
            out,
            "{} -> {}  degree {}",
            word,
            show_word(sys, &self.target),
            self.degree
        );
        for step in &self.steps {
            let mut actions = braid_lines(sys, &step.pre_rex);
            if step.elementary != ElementaryMove::None {
                actions.push(step.elementary.render(sys));
            }
            actions.extend(braid_lines(sys, &step.post_rex));
            let actions = if actions.is_empty() {
                "-".to_string()
            } else {
                actions.join(", ")
            };
            let _ = writeln!(
                out,
                "  {:>2}  {}  {:<8}  {}",
                step.k,
                step.label,
                show_word(sys, &step.intermediate),
                actions
            );
        }
        out
    }

    pub fn to_json(&self, sys: &CoxeterSystem) -> serde_json::Value {
        let raw = RecipeJson {
            word: sys.format_word(&self.word),
            bits: self.bits.clone(),
            j: genset_names(sys, self.j),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    k: s.k,
                    label: s.label,
                    pre_rex: apps_json(sys, &s.pre_rex),
                    elementary: s.elementary.render(sys),
                    post_rex: apps_json(sys, &s.post_rex),
                    intermediate: sys.format_word(&s.intermediate),
                })
                .collect(),
            degree: self.degree,
            conventions: Conventions {
                rex: REX_CONVENTION.into(),
            },
        };
        serde_json::to_value(raw).expect("serializable")
    }

    /// Rebuilds a recipe from its JSON form and replays it.
    pub fn from_json(sys: &CoxeterSystem, value: &serde_json::Value) -> Result<Self> {
        let raw: RecipeJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.conventions.rex != REX_CONVENTION {
            return Err(Error::Parse(format!(
                "unsupported rex convention {:?}",
                raw.conventions.rex
            )));
        }
        let word = sys.parse_word(&raw.word)?;
        let j = raw
            .j
            .iter()
            .map(|g| sys.generator_index(g))
            .collect::<Result<GenSet>>()?;
        let mut cur = Expression::empty();
        let mut steps = Vec::with_capacity(raw.steps.len());
        for (k, s) in raw.steps.into_iter().enumerate() {
            let letter = *word
                .letters()
                .get(k)
                .ok_or_else(|| Error::Parse("more steps than letters".into()))?;
            let pre_rex =
                RexMove::from_apps(cur.with_suffix(letter), parse_apps(sys, &s.pre_rex)?)?;
            let elementary = ElementaryMove::parse(sys, &s.elementary)?;
            let after = elementary.apply(&pre_rex.target).ok_or_else(|| {
                Error::Parse(format!("step {} elementary move does not fit", k + 1))
            })?;
            let post_rex = RexMove::from_apps(after, parse_apps(sys, &s.post_rex)?)?;
            let intermediate = sys.parse_word(&s.intermediate)?;
            if post_rex.target != intermediate {
                return Err(Error::Parse(format!(
                    "step {} does not reach its intermediate",
                    k + 1
                )));
            }
            cur = intermediate.clone();
            steps.push(LLStep {
                k: s.k,
                label: s.label,
                pre_rex,
                elementary,
                post_rex,
                intermediate,
            });
        }
        let recipe = LLRecipe {
            word,
            bits: raw.bits,
            j,
            steps,
            target: cur,
            degree: raw.degree,
        };
        recipe.replay(sys)?;
        Ok(recipe)
    }

    /// `text` or `json`.
    pub fn render(&self, sys: &CoxeterSystem, format: &str) -> Result<String> {
        match format {
            "text" => Ok(self.render_text(sys)),
            "json" => Ok(pretty(&self.to_json(sys))),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// `SDL = flip(SLL_{y̲,f}) ∘ SLL_{x̲,e}`, both halves ending on `through`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleLeafRecipe {
    pub lower: LLRecipe,
    /// Read upside down.
    pub upper: LLRecipe,
    pub through: Expression,
    pub degree: i32,
}

pub fn build_sdl(
    sys: &CoxeterSystem,
    e: &Subexpression,
    f: &Subexpression,
    j: GenSet,
) -> Result<DoubleLeafRecipe> {
    let de = decorate(sys, e, j)?;
    let df = decorate(sys, f, j)?;
    if de.endpoint != df.endpoint {
        return Err(Error::EndpointMismatch(
            sys.display_element(de.endpoint),
            sys.display_element(df.endpoint),
        ));
    }
    let through = sys.word(de.endpoint).clone();
    let lower = build_sll(sys, e, j, Some(&through))?;
    let upper = build_sll(sys, f, j, Some(&through))?;
    Ok(DoubleLeafRecipe {
        degree: lower.degree + upper.degree,
        lower,
        upper,
        through,
    })
}

impl DoubleLeafRecipe {
    pub fn replay(&self, sys: &CoxeterSystem) -> Result<()> {
        self.lower.replay(sys)?;
        self.upper.replay(sys)?;
        if self.lower.target != self.through || self.upper.target != self.through {
            return Err(Error::InternalInconsistency(
                "halves do not meet at the fixed word".into(),
            ));
        }
        if self.degree != self.lower.degree + self.upper.degree {
            return Err(Error::InternalInconsistency(
                "double leaf degree is not additive".into(),
            ));
        }
        Ok(())
    }

    pub fn render_text(&self, sys: &CoxeterSystem) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "double leaf through {}  degree {}",
            show_word(sys, &self.through),
            self.degree
        );
        let _ = writeln!(out, "lower:");
        out.push_str(&self.lower.render_text(sys));
        let _ = writeln!(out, "upper (flipped):");
        out.push_str(&self.upper.render_text(sys));
        out
    }

    pub fn to_json(&self, sys: &CoxeterSystem) -> serde_json::Value {
        serde_json::json!({
            "lower": self.lower.to_json(sys),
            "upper": self.upper.to_json(sys),
            "upper_flipped": true,
            "through": sys.format_word(&self.through),
            "degree": self.degree,
        })
    }

    pub fn render(&self, sys: &CoxeterSystem, format: &str) -> Result<String> {
        match format {
            "text" => Ok(self.render_text(sys)),
            "json" => Ok(pretty(&self.to_json(sys))),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Named rex moves of the non-spherical construction. `Gamma*` act on the
/// `u̲` block, `Alpha`, `Beta` and `Delta*` on the `z̲` block or across it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockMove {
    Alpha,
    Beta,
    Gamma,
    GammaPrime,
    Delta,
    DeltaPrime,
    Delta1,
    Delta2,
}

impl BlockMove {
    pub fn name(self) -> &'static str {
        match self {
            BlockMove::Alpha => "alpha",
            BlockMove::Beta => "beta",
            BlockMove::Gamma => "gamma",
            BlockMove::GammaPrime => "gamma'",
            BlockMove::Delta => "delta",
            BlockMove::DeltaPrime => "delta'",
            BlockMove::Delta1 => "delta1",
            BlockMove::Delta2 => "delta2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NsllAction {
    /// A rex move on the whole current word.
    Rex(BlockMove, RexMove),
    Elementary(ElementaryMove),
}

/// One step of a non-spherical light leaf, ending on `(u̲_k, z̲_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NsllStep {
    pub k: usize,
    /// `d_k`, computed in `W`.
    pub label: Label,
    /// `d_k'`, computed in `W_J \ W`.
    pub spherical_label: Label,
    pub actions: Vec<NsllAction>,
    pub u_rex: Expression,
    pub z_rex: Expression,
}

impl NsllStep {
    pub fn degree(&self) -> i32 {
        self.actions
            .iter()
            .map(|a| match a {
                NsllAction::Elementary(m) => m.degree(),
                NsllAction::Rex(..) => 0,
            })
            .sum()
    }

    pub fn intermediate(&self) -> Expression {
        self.u_rex.concat(&self.z_rex)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NsllRecipe {
    pub word: Expression,
    pub bits: Vec<u8>,
    pub j: GenSet,
    pub steps: Vec<NsllStep>,
    pub u_target: Expression,
    pub z_target: Expression,
    pub degree: i32,
}

/// Accumulates the actions of one step while tracking the current word.
struct StepBuilder<'s> {
    sys: &'s CoxeterSystem,
    word: Expression,
    actions: Vec<NsllAction>,
}

impl StepBuilder<'_> {
    /// Runs `mv` on the block `word[start .. start + mv.source.len()]`.
    fn rex(&mut self, name: BlockMove, start: usize, mv: RexMove) -> Result<()> {
        let end = start + mv.source.len();
        if self.word.slice(start..end) != mv.source {
            return Err(Error::InternalInconsistency(format!(
                "{} acts on the wrong block",
                name.name()
            )));
        }
        if mv.is_identity() {
            return Ok(());
        }
        let full = mv.embed(
            &self.word.prefix(start),
            &self.word.slice(end..self.word.len()),
        );
        self.word = full.target.clone();
        self.actions.push(NsllAction::Rex(name, full));
        Ok(())
    }

    fn path(&mut self, name: BlockMove, start: usize, to: &Expression, len: usize) -> Result<()> {
        let from = self.word.slice(start..start + len);
        let mv = self.sys.rex_path(&from, to)?;
        self.rex(name, start, mv)
    }

    fn elementary(&mut self, m: ElementaryMove) -> Result<()> {
        self.word = m
            .apply(&self.word)
            .ok_or_else(|| Error::InternalInconsistency(format!("{m:?} does not fit")))?;
        self.actions.push(NsllAction::Elementary(m));
        Ok(())
    }
}

/// Builds the non-spherical light leaf `LL_{x̲,e}` whose intermediate words
/// are `(u̲_k, z̲_k)` for `w_k = u_k z_k`, with ShortLex words for both
/// blocks.
pub fn build_nsll(sys: &CoxeterSystem, e: &Subexpression, j: GenSet) -> Result<NsllRecipe> {
    let deco = decorate(sys, e, j)?;
    let classical = classical_labels(sys, e)?;
    let mut w = Element::IDENTITY;
    let (mut u, mut z) = (Element::IDENTITY, Element::IDENTITY);
    let mut steps = Vec::with_capacity(e.len());
    for k in 0..e.len() {
        let t = e.word().letters()[k];
        if e.bits()[k] == 1 {
            w = sys.rmul(w, t)?;
        }
        let (u_next, z_next) = sys.coset_decompose(w, j);
        let u_rex = sys.word(u).clone();
        let z_rex = sys.word(z).clone();
        let (un, zn) = (sys.word(u_next).clone(), sys.word(z_next).clone());
        let ul = u_rex.len();
        let mut b = StepBuilder {
            sys,
            word: u_rex.concat(&z_rex).with_suffix(t),
            actions: Vec::new(),
        };
        let (d, dp) = (classical[k], deco.labels[k]);
        match (d, dp) {
            (Label::U0, _) => b.elementary(ElementaryMove::DotKill)?,
            (Label::U1, Label::U1) => b.path(BlockMove::Alpha, ul, &zn, z_rex.len() + 1)?,
            (Label::D0 | Label::D1, Label::D0 | Label::D1) => {
                let beta = sys.rex_to_ending(&z_rex, t)?;
                b.rex(BlockMove::Beta, ul, beta)?;
                b.elementary(if d == Label::D0 {
                    ElementaryMove::Merge
                } else {
                    ElementaryMove::Cap
                })?;
                let len = b.word.len() - ul;
                b.path(BlockMove::Alpha, ul, &zn, len)?;
            }
            (Label::U1, Label::X1) => {
                let s = sys.wall_cross(z, t, j)?;
                b.path(BlockMove::Delta, ul, &z_rex.with_prefix(s), z_rex.len() + 1)?;
                b.path(BlockMove::Gamma, 0, &un, ul + 1)?;
            }
            (Label::D1, Label::X1) => {
                let s = sys.wall_cross(z, t, j)?;
                b.rex(BlockMove::Gamma, 0, sys.rex_to_ending(&u_rex, s)?)?;
                b.path(
                    BlockMove::Delta,
                    ul - 1,
                    &z_rex.with_suffix(t),
                    z_rex.len() + 1,
                )?;
                b.elementary(ElementaryMove::Cap)?;
                b.path(BlockMove::GammaPrime, 0, &un, ul - 1)?;
                b.path(BlockMove::DeltaPrime, un.len(), &zn, z_rex.len())?;
            }
            (Label::D0, Label::X0) => {
                let s = sys.wall_cross(z, t, j)?;
                b.rex(BlockMove::Gamma, 0, sys.rex_to_ending(&u_rex, s)?)?;
                let (z_tilde, sweep) = find_sweep(sys, s, z, t)?;
                b.path(BlockMove::Delta1, ul, &z_tilde, z_rex.len())?;
                b.rex(BlockMove::Delta2, ul - 1, sweep.clone())?;
                b.elementary(ElementaryMove::Merge)?;
                b.rex(BlockMove::DeltaPrime, ul - 1, sweep.reversed())?;
                b.path(BlockMove::GammaPrime, 0, &un, ul)?;
                b.path(BlockMove::Alpha, un.len(), &zn, z_tilde.len())?;
            }
            _ => {
                return Err(Error::InternalInconsistency(format!(
                    "step {}: labels {d} and {dp} cannot occur together",
                    k + 1
                )))
            }
        }
        if b.word != un.concat(&zn) {
            return Err(Error::InternalInconsistency(format!(
                "step {} misses (u_k, z_k)",
                k + 1
            )));
        }
        steps.push(NsllStep {
            k: k + 1,
            label: d,
            spherical_label: dp,
            actions: b.actions,
            u_rex: un,
            z_rex: zn,
        });
        (u, z) = (u_next, z_next);
    }
    let recipe = NsllRecipe {
        word: e.word().clone(),
        bits: e.bits().to_vec(),
        j,
        degree: steps.iter().map(NsllStep::degree).sum(),
        u_target: sys.word(u).clone(),
        z_target: sys.word(z).clone(),
        steps,
    };
    recipe.replay(sys)?;
    Ok(recipe)
}

impl NsllRecipe {
    /// Word-level replay: every rex move matches and stays reduced (apart
    /// from a doubled strand awaiting a merge or cap), each step ends on
    /// `(u̲_k, z̲_k)` with `u_k ∈ W_J`, `z_k ∈ ^J W`, `u_k z_k = w_k`, and the
    /// degree is `#U0 - #D0` in the classical labels.
    pub fn replay(&self, sys: &CoxeterSystem) -> Result<()> {
        let sub = Subexpression::new(self.word.clone(), self.bits.clone())?;
        let classical = classical_labels(sys, &sub)?;
        let spherical = decorate(sys, &sub, self.j)?.labels;
        let mut cur = Expression::empty();
        let mut w = Element::IDENTITY;
        for (k, step) in self.steps.iter().enumerate() {
            let fail = |what: &str| Error::InternalInconsistency(format!("step {}: {what}", k + 1));
            let t = self.word.letters()[k];
            if self.bits[k] == 1 {
                w = sys.rmul(w, t)?;
            }
            if step.label != classical[k] || step.spherical_label != spherical[k] {
                return Err(fail("labels do not match"));
            }
            cur = cur.with_suffix(t);
            let mut pending = step.label.kind() == 'D';
            for action in &step.actions {
                match action {
                    NsllAction::Rex(_, mv) => {
                        if mv.source != cur {
                            return Err(fail("rex move starts on the wrong word"));
                        }
                        check_rex(sys, mv, pending)?;
                        cur = mv.target.clone();
                    }
                    NsllAction::Elementary(m) => {
                        cur = m
                            .apply(&cur)
                            .ok_or_else(|| fail("elementary move does not fit"))?;
                        pending = false;
                    }
                }
            }
            if cur != step.intermediate() {
                return Err(fail("does not end on (u_k, z_k)"));
            }
            let un = sys.normalize(&step.u_rex)?;
            let zn = sys.normalize(&step.z_rex)?;
            let whole = sys.normalize(&cur)?;
            if !whole.reduced
                || whole.element != w
                || step.u_rex.letters().iter().any(|&s| !self.j.contains(s))
                || !zn.reduced
                || !un.reduced
                || !sys.is_min_coset_rep(zn.element, self.j)
            {
                return Err(fail("intermediate is not a reduced (u, z) split of w_k"));
            }
        }
        if cur != self.u_target.concat(&self.z_target) {
            return Err(Error::InternalInconsistency(
                "recipe does not end at its target".into(),
            ));
        }
        let expected: i32 = classical
            .iter()
            .map(|l| match l {
                Label::U0 => 1,
                Label::D0 => -1,
                _ => 0,
            })
            .sum();
        let total: i32 = self.steps.iter().map(NsllStep::degree).sum();
        if total != self.degree || total != expected {
            return Err(Error::InternalInconsistency(format!(
                "degree {total} differs from {expected}"
            )));
        }
        Ok(())
    }

    pub fn target(&self) -> Expression {
        self.u_target.concat(&self.z_target)
    }

    pub fn render_text(&self, sys: &CoxeterSystem) -> String {
        let mut out = String::new();
        let bits: String = self.bits.iter().map(|b| char::from(b'0' + b)).collect();
        let word = if self.word.is_empty() {
            "(empty)".to_string()
        } else {
            format!("{}/{}", sys.format_word(&self.word), bits)
        };
        let _ = writeln!(
            out,
            "{} -> {} | {}  degree {}",
            word,
            show_word(sys, &self.u_target),
            show_word(sys, &self.z_target),
            self.degree
        );
        for step in &self.steps {
            let mut actions = Vec::new();
            for a in &step.actions {
                match a {
                    NsllAction::Rex(name, mv) => {
                        actions.push(format!(
                            "{}: {}",
                            name.name(),
                            braid_lines(sys, mv).join(" ")
                        ));
                    }
                    NsllAction::Elementary(m) => actions.push(m.render(sys)),
                }
            }
            let actions = if actions.is_empty() {
                "-".to_string()
            } else {
                actions.join(", ")
            };
            let _ = writeln!(
                out,
                "  {:>2}  {}/{}  {} | {}  {}",
                step.k,
                step.label,
                step.spherical_label,
                show_word(sys, &step.u_rex),
                show_word(sys, &step.z_rex),
                actions
            );
        }
        out
    }

    pub fn to_json(&self, sys: &CoxeterSystem) -> serde_json::Value {
        let steps: Vec<serde_json::Value> = self
            .steps
            .iter()
            .map(|s| {
                let actions: Vec<serde_json::Value> = s
                    .actions
                    .iter()
                    .map(|a| match a {
                        NsllAction::Rex(name, mv) => {
                            serde_json::json!({"move": name.name(), "apps": apps_json(sys, mv)})
                        }
                        NsllAction::Elementary(m) => {
                            serde_json::json!({"elementary": m.render(sys)})
                        }
                    })
                    .collect();
                serde_json::json!({
                    "k": s.k,
                    "label": s.label,
                    "spherical_label": s.spherical_label,
                    "actions": actions,
                    "u": sys.format_word(&s.u_rex),
                    "z": sys.format_word(&s.z_rex),
                })
            })
            .collect();
        serde_json::json!({
            "word": sys.format_word(&self.word),
            "bits": self.bits,
            "J": genset_names(sys, self.j),
            "steps": steps,
            "target": {"u": sys.format_word(&self.u_target), "z": sys.format_word(&self.z_target)},
            "degree": self.degree,
            "conventions": {"rex": REX_CONVENTION},
        })
    }

    pub fn render(&self, sys: &CoxeterSystem, format: &str) -> Result<String> {
        match format {
            "text" => Ok(self.render_text(sys)),
            "json" => Ok(pretty(&self.to_json(sys))),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// For `sz = zt > z`, a reduced word `z̃` of `z` and a sweep from `(s, z̃)`
/// to `(z̃, t)`.
///
/// Follows the inductive construction: take a shortest rex move from
/// `(s, z̲)` to `(z̲, t)`, find the braid application that first turns the
/// last letter into `t`, recurse on the element left of its window, and
/// append that application.
pub fn find_sweep(
    sys: &CoxeterSystem,
    s: usize,
    z: Element,
    t: usize,
) -> Result<(Expression, RexMove)> {
    let sz = sys.lmul(s, z)?;
    let zt = sys.rmul(z, t)?;
    if sz != zt || sys.length(sz) <= sys.length(z) {
        return Err(Error::PreconditionViolated(format!(
            "need {}·{} = {}·{} > {}",
            sys.generator_name(s),
            sys.display_element(z),
            sys.display_element(z),
            sys.generator_name(t),
            sys.display_element(z)
        )));
    }
    if z.is_identity() {
        return Ok((
            Expression::empty(),
            RexMove::identity(Expression::new(vec![s])),
        ));
    }
    let zw = sys.word(z).clone();
    let mv = sys.rex_path(&zw.with_prefix(s), &zw.with_suffix(t))?;
    let trace = mv.trace()?;
    let i = (0..mv.len())
        .find(|&i| trace[i].last() != Some(t) && trace[i + 1].last() == Some(t))
        .ok_or_else(|| Error::InternalInconsistency("rex move never ends in t".into()))?;
    let app = mv.apps[i];
    let len = trace[i].len();
    if app.end() + 1 != len {
        return Err(Error::InternalInconsistency(
            "last letter changed away from the right end".into(),
        ));
    }
    let n = app.pos;
    let z_prime = sys.element_of(&trace[i].prefix(n))?;
    let (z_tilde_prime, inner) = find_sweep(sys, s, z_prime, app.first)?;
    let tail = trace[i + 1].slice(n..len - 1);
    let z_tilde = z_tilde_prime.concat(&tail);
    let mut apps = inner.embed(&Expression::empty(), &tail).apps;
    apps.push(BraidApp {
        pos: z_tilde_prime.len(),
        ..app
    });
    let sweep = RexMove::from_apps(z_tilde.with_prefix(s), apps)
        .map_err(|e| Error::InternalInconsistency(e.to_string()))?;
    if sweep.target != z_tilde.with_suffix(t) {
        return Err(Error::InternalInconsistency("sweep misses (z̃, t)".into()));
    }
    Ok((z_tilde, sweep))
}

/// A sweep runs left to right: the first application starts at position 0,
/// each later one starts where the previous one ended, and the last one
/// ends at the right end of the word.
pub fn is_sweep(mv: &RexMove) -> bool {
    let Some(first) = mv.apps.first() else {
        return true;
    };
    let chained = first.pos == 0 && mv.apps.windows(2).all(|w| w[1].pos == w[0].end());
    chained
        && mv
            .apps
            .last()
            .is_some_and(|a| a.end() + 1 == mv.source.len())
}

#[derive(Serialize, Deserialize)]
struct Conventions {
    rex: String,
}

#[derive(Serialize, Deserialize)]
struct AppJson {
    pos: usize,
    pair: [String; 2],
    m: u32,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    k: usize,
    label: Label,
    pre_rex: Vec<AppJson>,
    elementary: String,
    post_rex: Vec<AppJson>,
    intermediate: String,
}

#[derive(Serialize, Deserialize)]
struct RecipeJson {
    word: String,
    bits: Vec<u8>,
    #[serde(rename = "J")]
    j: Vec<String>,
    steps: Vec<StepJson>,
    degree: i32,
    conventions: Conventions,
}

fn apps_json(sys: &CoxeterSystem, mv: &RexMove) -> Vec<AppJson> {
    mv.apps
        .iter()
        .map(|a| AppJson {
            pos: a.pos,
            pair: [
                sys.generator_name(a.first).into(),
                sys.generator_name(a.second).into(),
            ],
            m: a.m,
        })
        .collect()
}

fn parse_apps(sys: &CoxeterSystem, apps: &[AppJson]) -> Result<Vec<BraidApp>> {
    apps.iter()
        .map(|a| {
            Ok(BraidApp {
                pos: a.pos,
                first: sys.generator_index(&a.pair[0])?,
                second: sys.generator_index(&a.pair[1])?,
                m: a.m,
            })
        })
        .collect()
}

fn genset_names(sys: &CoxeterSystem, j: GenSet) -> Vec<String> {
    j.iter()
        .map(|s| sys.generator_name(s).to_string())
        .collect()
}

fn show_word(sys: &CoxeterSystem, w: &Expression) -> String {
    if w.is_empty() {
        "id".into()
    } else {
        sys.format_word(w)
    }
}

/// `braid@pos before->after` for each application.
fn braid_lines(sys: &CoxeterSystem, mv: &RexMove) -> Vec<String> {
    let trace = mv.trace().unwrap_or_default();
    mv.apps
        .iter()
        .zip(trace.windows(2))
        .map(|(a, w)| {
            format!(
                "braid@{} {}->{}",
                a.pos,
                sys.format_word(&w[0]),
                sys.format_word(&w[1])
            )
        })
        .collect()
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;

    const S: GenSet = GenSet::from_bits(1);

    fn sub(sys: &CoxeterSystem, w: &str, bits: &str) -> Subexpression {
        Subexpression::from_bitstring(sys.parse_word(w).unwrap(), bits).unwrap()
    }

    fn a2() -> CoxeterSystem {
        CoxeterSystem::build(CoxeterMatrix::type_a(2), 10)
    }

    #[test]
    fn sll_worked_example() {
        let sys = a2();
        let r = build_sll(&sys, &sub(&sys, "tst", "111"), S, None).unwrap();
        let labels: Vec<String> = r.steps.iter().map(|s| s.label.to_string()).collect();
        assert_eq!(labels, ["U1", "U1", "X1"]);
        let last = &r.steps[2];
        assert_eq!(
            last.pre_rex.apps,
            vec![BraidApp {
                pos: 0,
                first: 1,
                second: 0,
                m: 3
            }]
        );
        assert_eq!(sys.format_word(&last.pre_rex.target), "sts");
        assert_eq!(last.elementary, ElementaryMove::WallPlug(0));
        assert!(last.post_rex.is_identity());
        assert_eq!(sys.format_word(&r.target), "ts");
        assert_eq!(r.degree, -1);
        let text = r.render(&sys, "text").unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.trim_end().ends_with("wall-plug s"));
        assert!(matches!(
            r.render(&sys, "tikz"),
            Err(Error::UnknownFormat(_))
        ));
    }

    #[test]
    fn sll_small_examples() {
        let sys = a2();
        let r = build_sll(&sys, &sub(&sys, "s", "1"), S, None).unwrap();
        assert_eq!(r.steps[0].elementary, ElementaryMove::WallPlug(0));
        assert!(r.target.is_empty());
        assert_eq!(r.degree, -1);
        let r = build_sll(&sys, &sub(&sys, "st", "00"), S, None).unwrap();
        assert!(r
            .steps
            .iter()
            .all(|s| s.elementary == ElementaryMove::DotKill && s.pre_rex.is_identity()));
        assert_eq!(r.degree, 2);
        let empty = build_sll(&sys, &sub(&sys, "", ""), S, None).unwrap();
        assert!(empty.steps.is_empty());
        assert_eq!(empty.render(&sys, "text").unwrap().lines().count(), 1);
        let bad = sys.parse_word("st").unwrap();
        assert!(matches!(
            build_sll(&sys, &sub(&sys, "tst", "111"), S, Some(&bad)),
            Err(Error::TargetMismatch(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let sys = CoxeterSystem::build(CoxeterMatrix::type_b(2), 10);
        for w in ["tst", "ststs", "tsts"] {
            for e in Subexpression::all(&sys.parse_word(w).unwrap()) {
                let r = build_sll(&sys, &e, S, None).unwrap();
                let json = r.to_json(&sys);
                assert_eq!(LLRecipe::from_json(&sys, &json).unwrap(), r);
            }
        }
        let sys = a2();
        let json = build_sll(&sys, &sub(&sys, "tst", "111"), S, None)
            .unwrap()
            .to_json(&sys);
        assert_eq!(json["word"], "tst");
        assert_eq!(json["steps"][0]["intermediate"], "t");
        assert_eq!(json["steps"][2]["elementary"], "wall-plug s");
        assert_eq!(json["conventions"]["rex"], "shortlex-bfs");
    }

    #[test]
    fn sdl_examples() {
        let sys = a2();
        let d = build_sdl(&sys, &sub(&sys, "t", "1"), &sub(&sys, "t", "1"), S).unwrap();
        assert_eq!(d.degree, 0);
        assert!(d.lower.steps[0].post_rex.is_identity());
        let d = build_sdl(&sys, &sub(&sys, "", ""), &sub(&sys, "", ""), S).unwrap();
        assert_eq!(d.degree, 0);
        let d = build_sdl(&sys, &sub(&sys, "tst", "111"), &sub(&sys, "ts", "11"), S).unwrap();
        assert_eq!(d.degree, -1);
        assert_eq!(sys.format_word(&d.through), "ts");
        assert_eq!(
            d.lower,
            build_sll(&sys, &sub(&sys, "tst", "111"), S, None).unwrap()
        );
        d.replay(&sys).unwrap();
        assert!(matches!(
            build_sdl(&sys, &sub(&sys, "t", "1"), &sub(&sys, "t", "0"), S),
            Err(Error::EndpointMismatch(..))
        ));
    }

    #[test]
    fn nsll_examples() {
        let sys = a2();
        let r = build_nsll(&sys, &sub(&sys, "tst", "111"), S).unwrap();
        let pairs: Vec<String> = r
            .steps
            .iter()
            .map(|s| format!("{}/{}", s.label, s.spherical_label))
            .collect();
        assert_eq!(pairs, ["U1/U1", "U1/U1", "U1/X1"]);
        assert_eq!(sys.format_word(&r.u_target), "s");
        assert_eq!(sys.format_word(&r.z_target), "ts");
        assert_eq!(sys.format_word(&r.target()), "sts");
        let r = build_nsll(&sys, &sub(&sys, "s", "1"), S).unwrap();
        assert_eq!(
            (sys.format_word(&r.u_target).as_str(), r.z_target.len()),
            ("s", 0)
        );
        let r = build_nsll(&sys, &sub(&sys, "tst", "111"), GenSet::EMPTY).unwrap();
        assert!(r
            .steps
            .iter()
            .all(|s| s.u_rex.is_empty() && s.label == s.spherical_label));
    }

    #[test]
    fn sweep_examples() {
        let sys = a2();
        let e = |w: &str| sys.parse_element(w).unwrap();
        let (zt, sweep) = find_sweep(&sys, 0, e("ts"), 1).unwrap();
        assert_eq!(sys.format_word(&zt), "ts");
        assert_eq!(
            sweep.apps,
            vec![BraidApp {
                pos: 0,
                first: 0,
                second: 1,
                m: 3
            }]
        );
        let (zt, sweep) = find_sweep(&sys, 0, Element::IDENTITY, 0).unwrap();
        assert!(zt.is_empty() && sweep.is_identity());
        assert!(matches!(
            find_sweep(&sys, 0, Element::IDENTITY, 1),
            Err(Error::PreconditionViolated(_))
        ));
        let b2 = CoxeterSystem::build(CoxeterMatrix::type_b(2), 10);
        let (zt, sweep) = find_sweep(&b2, 0, b2.parse_element("tst").unwrap(), 0).unwrap();
        assert_eq!(b2.format_word(&zt), "tst");
        assert_eq!(sweep.len(), 1);
        assert_eq!(b2.format_word(&sweep.target), "tsts");
    }

    #[test]
    fn sweep_shape_in_a3() {
        let sys = CoxeterSystem::build(CoxeterMatrix::type_a(3), 10);
        let w = |s: &str| sys.parse_word(s).unwrap();
        let apps = vec![
            BraidApp {
                pos: 0,
                first: 1,
                second: 0,
                m: 3,
            },
            BraidApp {
                pos: 2,
                first: 0,
                second: 2,
                m: 2,
            },
            BraidApp {
                pos: 3,
                first: 0,
                second: 1,
                m: 3,
            },
        ];
        let mv = RexMove::from_apps(w("tstuts"), apps).unwrap();
        let trace: Vec<String> = mv
            .trace()
            .unwrap()
            .iter()
            .map(|x| sys.format_word(x))
            .collect();
        assert_eq!(trace, ["tstuts", "stsuts", "stusts", "stutst"]);
        assert!(is_sweep(&mv));
        let (zt, found) = find_sweep(&sys, 1, sys.parse_element("stuts").unwrap(), 1).unwrap();
        assert!(is_sweep(&found));
        assert_eq!(found.source, zt.with_prefix(1));
        found.replay(&sys).unwrap();
    }
}
