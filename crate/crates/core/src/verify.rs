//! Property suites over a single Coxeter system. Each property reports how
//! many instances it checked and the first counterexample, if any.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coxeter::{CoxeterSystem, Element, Expression, GenSet};
use crate::error::{Error, Result};
use crate::hecke::{Hecke, HeckeElt};
use crate::laurent::LaurentPoly;
use crate::lightleaf::{build_nsll, build_sdl, build_sll, find_sweep, is_sweep, LLRecipe};
use crate::spherical::{SphericalElt, SphericalModule};
use crate::strolls::{
    classical_labels, decorate, decorations_preceq, double_leaf_index, rank_poly, Label,
    Subexpression,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Hecke,
    Spherical,
    Strolls,
    Lightleaf,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Hecke,
        Suite::Spherical,
        Suite::Strolls,
        Suite::Lightleaf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hecke => "hecke",
            Suite::Spherical => "spherical",
            Suite::Strolls => "strolls",
            Suite::Lightleaf => "lightleaf",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_list(name: &str) -> Result<Vec<Suite>> {
        if name == "all" {
            Ok(Suite::ALL.to_vec())
        } else {
            Ok(vec![name.parse()?])
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Longest words for pairwise checks (rank matching, double leaves).
    pub word_len: usize,
    /// Longest words for per-word checks (character lemma, order, degrees).
    pub long_word_len: usize,
    /// Random instances per algebraic identity.
    pub samples: usize,
    pub seed: u64,
}

impl VerifyConfig {
    /// Scale suited to the rank of `sys`.
    pub fn for_system(sys: &CoxeterSystem) -> Self {
        let word_len = if sys.rank() <= 2 { 4 } else { 3 };
        Self {
            word_len,
            long_word_len: word_len + 1,
            samples: 100,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyResult {
    pub suite: Suite,
    pub name: String,
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(
                f,
                "PASS  {}/{}  ({} checked)",
                self.suite, self.name, self.checked
            ),
            Some(ce) => write!(
                f,
                "FAIL  {}/{}  counterexample: {}",
                self.suite, self.name, ce
            ),
        }
    }
}

/// Counts checks and keeps the first failure.
struct Tally {
    checked: usize,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

fn property(
    suite: Suite,
    name: &str,
    body: impl FnOnce(&mut Tally) -> Result<()>,
) -> PropertyResult {
    let mut tally = Tally {
        checked: 0,
        failure: None,
    };
    if let Err(e) = body(&mut tally) {
        tally.failure.get_or_insert_with(|| format!("error: {e}"));
    }
    PropertyResult {
        suite,
        name: name.to_string(),
        checked: tally.checked,
        counterexample: tally.failure,
    }
}

/// All words of length at most `n` over the generators, shortest first.
pub fn all_words(rank: usize, n: usize) -> Vec<Expression> {
    let mut out = vec![Expression::empty()];
    let mut layer = vec![Expression::empty()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| (0..rank).map(move |s| w.with_suffix(s)))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Elements of length at most `n`, clipped to the enumerated ball.
fn ball(sys: &CoxeterSystem, n: usize) -> Vec<Element> {
    sys.elements().take_while(|&x| sys.length(x) <= n).collect()
}

/// Elements safe as factors in a product of `factors` terms.
fn factor_ball(sys: &CoxeterSystem, factors: usize) -> Vec<Element> {
    if sys.is_finite() {
        sys.elements().collect()
    } else {
        ball(sys, sys.budget() / factors)
    }
}

fn random_hecke(rng: &mut ChaCha8Rng, pool: &[Element]) -> HeckeElt {
    let n = rng.gen_range(1..=3);
    HeckeElt::from_terms((0..n).map(|_| {
        let x = pool[rng.gen_range(0..pool.len())];
        let c: i64 = rng.gen_range(-2..=2);
        (
            x,
            LaurentPoly::monomial(if c == 0 { 1 } else { c }, rng.gen_range(-2..=2)),
        )
    }))
}

fn random_spherical(rng: &mut ChaCha8Rng, pool: &[Element]) -> SphericalElt {
    let n = rng.gen_range(1..=2);
    SphericalElt::from_terms((0..n).map(|_| {
        let x = pool[rng.gen_range(0..pool.len())];
        (
            x,
            LaurentPoly::monomial(rng.gen_range(1..=2), rng.gen_range(-1..=1)),
        )
    }))
}

pub fn run_suite(sys: &CoxeterSystem, suite: Suite, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    match suite {
        Suite::Hecke => hecke_suite(sys, cfg),
        Suite::Spherical => spherical_suite(sys, cfg),
        Suite::Strolls => strolls_suite(sys, cfg),
        Suite::Lightleaf => lightleaf_suite(sys, cfg),
    }
}

pub fn run_suites(
    sys: &CoxeterSystem,
    suites: &[Suite],
    cfg: &VerifyConfig,
) -> Vec<PropertyResult> {
    suites
        .iter()
        .flat_map(|&s| run_suite(sys, s, cfg))
        .collect()
}

fn hecke_suite(sys: &CoxeterSystem, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let h = Hecke::new(sys);
    let su = Suite::Hecke;
    let name = |x: Element| sys.display_element(x);
    let mut out = Vec::new();

    out.push(property(
        su,
        "kl basis is self-dual and unitriangular",
        |t| {
            for x in sys.elements() {
                let b = h.kl_basis(x)?;
                let ok = h.is_bar_invariant(&b)?
                    && b.get(x).is_some_and(LaurentPoly::is_one)
                    && b.iter()
                        .all(|(y, p)| y == x || (p.in_v_z_v() && sys.bruhat_lt(y, x)));
                t.check(ok, || format!("b_{}", name(x)));
            }
            Ok(())
        },
    ));

    out.push(property(
        su,
        "b_wJ closed form and b_wJ^2 = pi(J) b_wJ",
        |t| {
            for par in sys.finitary_subsets() {
                let res = h.parabolic_idempotent(&par);
                t.check(res.is_ok(), || {
                    format!("J = {}: {:?}", sys.format_genset(par.j), res.err())
                });
            }
            Ok(())
        },
    ));

    out.push(property(su, "standard basis is orthonormal", |t| {
        let pool = factor_ball(sys, 2);
        for &x in &pool {
            for &y in &pool {
                let (dx, dy) = (h.delta(x), h.delta(y));
                let want = if x == y {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                };
                let a = h.pairing(&dx, &dy)?;
                let b = h.pairing_coordinatewise(&dx, &dy);
                t.check(a == want && b == want, || {
                    format!("<d_{}, d_{}> = {a}", name(x), name(y))
                });
            }
        }
        Ok(())
    }));

    out.push(property(su, "multiplication is associative", |t| {
        let pool = factor_ball(sys, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.samples {
            let (a, b, c) = (
                random_hecke(&mut rng, &pool),
                random_hecke(&mut rng, &pool),
                random_hecke(&mut rng, &pool),
            );
            let lhs = h.multiply(&h.multiply(&a, &b)?, &c)?;
            let rhs = h.multiply(&a, &h.multiply(&b, &c)?)?;
            t.check(lhs == rhs, || format!("a = {a:?}, b = {b:?}, c = {c:?}"));
        }
        Ok(())
    }));

    out.push(property(
        su,
        "i is an involutive anti-automorphism and bar is multiplicative",
        |t| {
            let pool = factor_ball(sys, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 1);
            for _ in 0..cfg.samples {
                let (a, b) = (random_hecke(&mut rng, &pool), random_hecke(&mut rng, &pool));
                let ab = h.multiply(&a, &b)?;
                let anti = h.anti_involution(&ab)
                    == h.multiply(&h.anti_involution(&b), &h.anti_involution(&a))?;
                let invol = h.anti_involution(&h.anti_involution(&a)) == a;
                let bar = h.bar(&ab)? == h.multiply(&h.bar(&a)?, &h.bar(&b)?)?;
                t.check(anti && invol && bar, || format!("a = {a:?}, b = {b:?}"));
            }
            Ok(())
        },
    ));

    out.push(property(
        su,
        "Bruhat order matches the subword property",
        |t| {
            let pool = ball(sys, 7);
            for &y in &pool {
                let word = sys.word(y);
                let mut below = std::collections::BTreeSet::new();
                for e in Subexpression::all(word) {
                    below.insert(e.product(sys)?);
                }
                for &x in &pool {
                    let leq = sys.bruhat_leq(x, y);
                    t.check(leq == below.contains(&x), || {
                        format!("{} <= {}", name(x), name(y))
                    });
                }
            }
            Ok(())
        },
    ));
    out
}

fn spherical_suite(sys: &CoxeterSystem, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let h = Hecke::new(sys);
    let su = Suite::Spherical;
    let name = |x: Element| sys.display_element(x);
    let pars = sys.finitary_subsets();
    let mut out = Vec::new();

    out.push(property(su, "every w = uz with l(w) = l(u) + l(z)", |t| {
        for par in &pars {
            for w in sys.elements() {
                let (u, z) = sys.coset_decompose(w, par.j);
                let ok = par.elements.contains(&u)
                    && sys.is_min_coset_rep(z, par.j)
                    && sys.mul(u, z).ok() == Some(w)
                    && sys.length(u) + sys.length(z) == sys.length(w);
                t.check(ok, || {
                    format!("J = {}, w = {}", sys.format_genset(par.j), name(w))
                });
            }
        }
        Ok(())
    }));

    out.push(property(su, "wall crossings go up and land in J", |t| {
        let pool = ball(sys, sys.budget().saturating_sub(1));
        for par in &pars {
            for &z in &pool {
                if !sys.is_min_coset_rep(z, par.j) {
                    continue;
                }
                for s in 0..sys.rank() {
                    let zs = sys.rmul(z, s)?;
                    if sys.is_min_coset_rep(zs, par.j) {
                        continue;
                    }
                    let ok = sys.length(zs) > sys.length(z)
                        && sys
                            .wall_cross(z, s, par.j)
                            .is_ok_and(|t| par.j.contains(t) && sys.lmul(t, z).ok() == Some(zs));
                    t.check(ok, || {
                        format!(
                            "J = {}, z = {}, s = {}",
                            sys.format_genset(par.j),
                            name(z),
                            sys.generator_name(s)
                        )
                    });
                }
            }
        }
        Ok(())
    }));

    for par in &pars {
        let m = SphericalModule::new(&h, par.clone());
        let jn = sys.format_genset(par.j);
        let basis = m.basis_indices();
        let spare = sys.budget().saturating_sub(par.d_j + 1);
        let small: Vec<Element> = basis
            .iter()
            .copied()
            .filter(|&x| sys.is_finite() || sys.length(x) <= spare)
            .collect();

        out.push(property(
            su,
            &format!("J = {jn}: action is associative"),
            |t| {
                let pool = factor_ball(sys, 3);
                let mpool: Vec<Element> = basis
                    .iter()
                    .copied()
                    .filter(|&x| pool.contains(&x))
                    .collect();
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 2);
                for _ in 0..cfg.samples {
                    let x = random_spherical(&mut rng, &mpool);
                    let (a, b) = (random_hecke(&mut rng, &pool), random_hecke(&mut rng, &pool));
                    let lhs = m.act(&x, &h.multiply(&a, &b)?)?;
                    let rhs = m.act(&m.act(&x, &a)?, &b)?;
                    t.check(lhs == rhs, || format!("m = {x:?}, a = {a:?}, b = {b:?}"));
                }
                Ok(())
            },
        ));

        out.push(property(
            su,
            &format!("J = {jn}: phi is equivariant"),
            |t| {
                for &x in &small {
                    for s in 0..sys.rank() {
                        let mx = SphericalElt::basis(x);
                        let lhs = m.phi(&m.act_delta(&mx, s)?)?;
                        let rhs = h.mul_gen(&m.phi(&mx)?, s)?;
                        let lhs_b = m.phi(&m.act_b(&mx, s)?)?;
                        let rhs_b = h.mul_b_s(&m.phi(&mx)?, s)?;
                        t.check(lhs == rhs && lhs_b == rhs_b, || {
                            format!("m_{} . {}", name(x), sys.generator_name(s))
                        });
                    }
                }
                Ok(())
            },
        ));

        out.push(property(
            su,
            &format!("J = {jn}: c_x self-dual with degree bounds"),
            |t| {
                for &x in &small {
                    let c = m.kl_c(x)?;
                    let ok = m.is_bar_invariant(&c)?
                        && c.get(x).is_some_and(LaurentPoly::is_one)
                        && c.iter().all(|(y, p)| y == x || p.in_v_z_v());
                    t.check(ok, || format!("c_{}", name(x)));
                }
                Ok(())
            },
        ));

        out.push(property(
            su,
            &format!("J = {jn}: bar is an involution"),
            |t| {
                for &x in &small {
                    let mx = SphericalElt::basis(x);
                    t.check(m.bar(&m.bar(&mx)?)? == mx, || format!("m_{}", name(x)));
                }
                Ok(())
            },
        ));

        out.push(property(
            su,
            &format!("J = {jn}: both pairing routes agree"),
            |t| {
                let half = sys.budget().saturating_sub(par.d_j) / 2;
                let pool: Vec<Element> = basis
                    .iter()
                    .copied()
                    .filter(|&x| sys.is_finite() || sys.length(x) <= half)
                    .collect();
                let pool: Vec<Element> = pool.into_iter().take(40).collect();
                for &x in &pool {
                    for &y in &pool {
                        let (a, b) = (SphericalElt::basis(x), SphericalElt::basis(y));
                        let want = if x == y {
                            LaurentPoly::one()
                        } else {
                            LaurentPoly::zero()
                        };
                        t.check(m.pairing_checked(&a, &b)? == want, || {
                            format!("<m_{}, m_{}>", name(x), name(y))
                        });
                        let (cx, cy) = (m.kl_c(x)?, m.kl_c(y)?);
                        let ok = m.pairing_checked(&cx, &cy).is_ok();
                        t.check(ok, || format!("<c_{}, c_{}>", name(x), name(y)));
                    }
                }
                Ok(())
            },
        ));
    }
    out
}

/// Decorations of every subexpression of `word`, in enumeration order.
fn decorations(
    sys: &CoxeterSystem,
    word: &Expression,
    j: GenSet,
) -> Result<Vec<(Subexpression, crate::strolls::Decoration)>> {
    Subexpression::all(word)
        .map(|e| decorate(sys, &e, j).map(|d| (e, d)))
        .collect()
}

/// `Σ_e v^{sdef(e)} m_{endpoint(e)}`
fn defect_character(sys: &CoxeterSystem, word: &Expression, j: GenSet) -> Result<SphericalElt> {
    let mut out = SphericalElt::zero();
    for (_, d) in decorations(sys, word, j)? {
        out.add_term(d.endpoint, &LaurentPoly::monomial(1, d.sdef()));
    }
    Ok(out)
}

fn strolls_suite(sys: &CoxeterSystem, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let h = Hecke::new(sys);
    let su = Suite::Strolls;
    let pars = sys.finitary_subsets();
    let long_words = all_words(sys.rank(), cfg.long_word_len);
    let words = all_words(sys.rank(), cfg.word_len);
    let show = |w: &Expression| format!("({})", sys.format_word(w));
    let mut out = Vec::new();

    out.push(property(su, "1 (x) b_x expands by spherical defect", |t| {
        for par in &pars {
            let m = SphericalModule::new(&h, par.clone());
            for w in &long_words {
                let ok = m.expand_expression(w)? == defect_character(sys, w, par.j)?;
                t.check(ok, || {
                    format!("J = {}, x = {}", sys.format_genset(par.j), show(w))
                });
            }
        }
        Ok(())
    }));

    out.push(property(
        su,
        "rank polynomial equals <1 (x) b_x, 1 (x) b_y>",
        |t| {
            for par in &pars {
                let m = SphericalModule::new(&h, par.clone());
                let expanded: Vec<SphericalElt> = words
                    .iter()
                    .map(|w| m.expand_expression(w))
                    .collect::<Result<_>>()?;
                for (x, ex) in words.iter().zip(&expanded) {
                    for (y, ey) in words.iter().zip(&expanded) {
                        let ok = rank_poly(sys, x, y, par.j)? == m.pairing(ex, ey);
                        t.check(ok, || {
                            format!(
                                "J = {}, x = {}, y = {}",
                                sys.format_genset(par.j),
                                show(x),
                                show(y)
                            )
                        });
                    }
                }
            }
            Ok(())
        },
    ));

    out.push(property(su, "rank polynomial is symmetric", |t| {
        for par in &pars {
            for x in &words {
                for y in &words {
                    let ok = rank_poly(sys, x, y, par.j)? == rank_poly(sys, y, x, par.j)?;
                    t.check(ok, || format!("x = {}, y = {}", show(x), show(y)));
                }
            }
        }
        Ok(())
    }));

    out.push(property(
        su,
        "order on subexpressions is a partial order",
        |t| {
            for par in &pars {
                for w in &long_words {
                    let decs = decorations(sys, w, par.j)?;
                    let n = decs.len();
                    let rel: Vec<Vec<bool>> = decs
                        .iter()
                        .map(|(_, a)| {
                            decs.iter()
                                .map(|(_, b)| decorations_preceq(sys, a, b))
                                .collect()
                        })
                        .collect();
                    let ctx = |what: &str, i: usize, k: usize| {
                        format!(
                            "{what}: x = {}, {} vs {}",
                            show(w),
                            decs[i].0.bitstring(),
                            decs[k].0.bitstring()
                        )
                    };
                    for i in 0..n {
                        t.check(rel[i][i], || ctx("reflexivity", i, i));
                        for k in 0..n {
                            if i != k && rel[i][k] && rel[k][i] {
                                t.check(false, || ctx("antisymmetry", i, k));
                            }
                            if rel[i][k] {
                                for l in 0..n {
                                    if rel[k][l] && !rel[i][l] {
                                        t.check(false, || ctx("transitivity", i, l));
                                    }
                                }
                            }
                        }
                    }
                    if t.failed() {
                        return Ok(());
                    }
                }
            }
            Ok(())
        },
    ));

    out.push(property(
        su,
        "with J empty, no X labels and sdef = #U0 - #D0",
        |t| {
            for w in &long_words {
                for (e, d) in decorations(sys, w, GenSet::EMPTY)? {
                    let classical: i32 = d
                        .labels
                        .iter()
                        .map(|l| match l {
                            Label::U0 => 1,
                            Label::D0 => -1,
                            _ => 0,
                        })
                        .sum();
                    let ok = d.labels.iter().all(|l| l.kind() != 'X') && d.sdef() == classical;
                    t.check(ok, || format!("x = {}, e = {}", show(w), e.bitstring()));
                }
            }
            Ok(())
        },
    ));
    out
}

fn lightleaf_suite(sys: &CoxeterSystem, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let su = Suite::Lightleaf;
    let pars = sys.finitary_subsets();
    let long_words = all_words(sys.rank(), cfg.long_word_len);
    let words = all_words(sys.rank(), cfg.word_len.min(3));
    let show = |w: &Expression| format!("({})", sys.format_word(w));
    let mut out = Vec::new();

    out.push(property(su, "light leaves replay with degree sdef", |t| {
        for par in &pars {
            for w in &long_words {
                for (e, d) in decorations(sys, w, par.j)? {
                    let res = build_sll(sys, &e, par.j, None);
                    let ok = res.as_ref().is_ok_and(|r| r.degree == d.sdef());
                    t.check(ok, || {
                        format!(
                            "J = {}, x = {}, e = {}: {:?}",
                            sys.format_genset(par.j),
                            show(w),
                            e.bitstring(),
                            res.err()
                        )
                    });
                }
            }
        }
        Ok(())
    }));

    out.push(property(su, "recipe JSON round-trips", |t| {
        for par in &pars {
            for w in &words {
                for e in Subexpression::all(w) {
                    let r = build_sll(sys, &e, par.j, None)?;
                    let back = LLRecipe::from_json(sys, &r.to_json(sys));
                    t.check(back.as_ref() == Ok(&r), || {
                        format!("x = {}, e = {}", show(w), e.bitstring())
                    });
                }
            }
        }
        Ok(())
    }));

    out.push(property(
        su,
        "double leaves exist for every index pair",
        |t| {
            for par in &pars {
                for x in &words {
                    for y in &words {
                        for p in double_leaf_index(sys, x, y, par.j)? {
                            let res = build_sdl(sys, &p.e, &p.f, par.j);
                            let ok = res
                                .as_ref()
                                .is_ok_and(|d| d.degree == p.degree && d.replay(sys).is_ok());
                            t.check(ok, || {
                                format!(
                                    "x = {}, e = {}, y = {}, f = {}: {:?}",
                                    show(x),
                                    p.e.bitstring(),
                                    show(y),
                                    p.f.bitstring(),
                                    res.err()
                                )
                            });
                        }
                    }
                }
            }
            Ok(())
        },
    ));

    out.push(property(su, "non-spherical light leaves replay", |t| {
        for par in &pars {
            for w in &long_words {
                for e in Subexpression::all(w) {
                    let res = build_nsll(sys, &e, par.j);
                    let classical = classical_labels(sys, &e)?;
                    let ok = res.as_ref().is_ok_and(|r| {
                        r.steps.iter().zip(&classical).all(|(s, l)| s.label == *l)
                            && (!par.j.is_empty()
                                || r.steps
                                    .iter()
                                    .all(|s| s.u_rex.is_empty() && s.spherical_label == s.label))
                    });
                    t.check(ok, || {
                        format!(
                            "J = {}, x = {}, e = {}: {:?}",
                            sys.format_genset(par.j),
                            show(w),
                            e.bitstring(),
                            res.err()
                        )
                    });
                }
            }
        }
        Ok(())
    }));

    out.push(property(su, "sweeps exist and run left to right", |t| {
        let pool = ball(sys, sys.budget().saturating_sub(1));
        for &z in &pool {
            for s in 0..sys.rank() {
                for u in 0..sys.rank() {
                    let (sz, zu) = (sys.lmul(s, z)?, sys.rmul(z, u)?);
                    if sz != zu || sys.length(sz) < sys.length(z) {
                        continue;
                    }
                    let res = find_sweep(sys, s, z, u);
                    let ok = res.as_ref().is_ok_and(|(zt, mv)| {
                        sys.normalize(zt).is_ok_and(|n| n.reduced && n.element == z)
                            && mv.source == zt.with_prefix(s)
                            && mv.target == zt.with_suffix(u)
                            && mv.replay(sys).is_ok()
                            && mv.apps.windows(2).all(|w| w[0].pos <= w[1].pos)
                            && is_sweep(mv)
                    });
                    t.check(ok, || {
                        format!(
                            "s = {}, z = {}, t = {}: {:?}",
                            sys.generator_name(s),
                            sys.display_element(z),
                            sys.generator_name(u),
                            res.err()
                        )
                    });
                }
            }
        }
        Ok(())
    }));
    out
}
