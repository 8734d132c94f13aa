//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Checks recompute what they can from first principles (coset strolls,
//! Hilbert polynomials, minimal coset representatives) instead of calling
//! the library's own verification suites.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use spherical_leaves::lightleaf::{build_sll, find_sweep, ElementaryMove};
use spherical_leaves::strolls::{self, Label, Subexpression};
use spherical_leaves::{
    CoxeterMatrix, CoxeterSystem, Element, Expression, GenSet, Hecke, LaurentPoly, SphericalElt,
    SphericalModule,
};

const INFINITE_BUDGET: usize = 8;

#[derive(Default)]
struct Tally {
    checked: usize,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }
}

fn target(name: &str) -> CoxeterSystem {
    let matrix = match name {
        "A2" => CoxeterMatrix::type_a(2),
        "B2" => CoxeterMatrix::type_b(2),
        "A3" => CoxeterMatrix::type_a(3),
        "B3" => CoxeterMatrix::type_b(3),
        "H3" => CoxeterMatrix::type_h3(),
        "I2(7)" => CoxeterMatrix::dihedral(7),
        "I2(inf)" => return CoxeterSystem::build(CoxeterMatrix::dihedral(0), INFINITE_BUDGET),
        _ => unreachable!("unknown target {name}"),
    };
    CoxeterSystem::build(matrix, 32)
}

const TARGETS: [&str; 7] = ["A2", "B2", "A3", "B3", "H3", "I2(7)", "I2(inf)"];

fn all_words(rank: usize, max_len: usize) -> Vec<Expression> {
    let mut out = vec![Expression::empty()];
    let mut layer = vec![Expression::empty()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..rank).map(move |s| w.with_suffix(s)))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn is_mcr(sys: &CoxeterSystem, x: Element, j: GenSet) -> bool {
    j.iter()
        .all(|t| sys.length(sys.lmul(t, x).unwrap()) > sys.length(x))
}

/// `W_J` by closure under right multiplication.
fn parabolic_subgroup(sys: &CoxeterSystem, j: GenSet) -> BTreeSet<Element> {
    let mut seen = BTreeSet::from([Element::IDENTITY]);
    let mut queue = VecDeque::from([Element::IDENTITY]);
    while let Some(x) = queue.pop_front() {
        for t in j.iter() {
            let y = sys.rmul(x, t).unwrap();
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Labels and stroll of a subexpression, straight from the definitions.
fn stroll(
    sys: &CoxeterSystem,
    word: &Expression,
    bits: &[u8],
    j: GenSet,
) -> (Vec<(char, u8)>, Vec<Element>) {
    let mut z = Element::IDENTITY;
    let mut labels = vec![];
    let mut path = vec![z];
    for (&s, &b) in word.letters().iter().zip(bits) {
        let zs = sys.rmul(z, s).unwrap();
        let kind = if !is_mcr(sys, zs, j) {
            'X'
        } else if sys.length(zs) > sys.length(z) {
            'U'
        } else {
            'D'
        };
        if kind != 'X' && b == 1 {
            z = zs;
        }
        labels.push((kind, b));
        path.push(z);
    }
    (labels, path)
}

fn defect(labels: &[(char, u8)]) -> i32 {
    labels
        .iter()
        .map(|l| match l {
            ('U', 0) | ('X', 0) => 1,
            ('D', 0) | ('X', 1) => -1,
            _ => 0,
        })
        .sum()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u32..1 << n).map(move |m| (0..n).map(|i| ((m >> i) & 1) as u8).collect())
}

fn fmt_bits(bits: &[u8]) -> String {
    bits.iter().map(|b| b.to_string()).collect()
}

fn c1_kl_well_formed() -> Tally {
    let mut t = Tally::default();
    for name in TARGETS {
        let sys = target(name);
        let h = Hecke::new(&sys);
        for x in sys.elements() {
            let b = h.kl_basis(x).unwrap();
            t.check(h.is_bar_invariant(&b).unwrap(), || {
                format!("{name}: b_{} not bar-invariant", sys.display_element(x))
            });
            t.check(b.coeff(x).is_one(), || {
                format!("{name}: b_{} not monic", sys.display_element(x))
            });
            for (y, c) in b.iter().filter(|&(y, _)| y != x) {
                t.check(sys.bruhat_lt(y, x) && c.in_v_z_v(), || {
                    format!(
                        "{name}: h_{{{},{}}} = {c}",
                        sys.display_element(y),
                        sys.display_element(x)
                    )
                });
            }
        }
    }
    t
}

fn c2_parabolic_idempotent() -> Tally {
    let mut t = Tally::default();
    for name in TARGETS {
        let sys = target(name);
        let h = Hecke::new(&sys);
        for par in sys.finitary_subsets() {
            let js = sys.format_genset(par.j);
            let closed = h.b_wj_closed_form(&par);
            t.check(closed == h.kl_basis(par.longest).unwrap(), || {
                format!("{name} J={js}: closed form")
            });
            let wj = parabolic_subgroup(&sys, par.j);
            let d = wj.iter().map(|&x| sys.length(x)).max().unwrap() as i32;
            let pi = LaurentPoly::from_terms(wj.iter().map(|&x| (2 * sys.length(x) as i32 - d, 1)));
            t.check(h.hilbert_poly(&par) == pi, || {
                format!("{name} J={js}: pi(J)")
            });
            let square = h.multiply(&closed, &closed).unwrap();
            t.check(square == closed.scale(&pi), || {
                format!("{name} J={js}: b_wJ^2")
            });
        }
    }
    t
}

fn fits(sys: &CoxeterSystem, len: usize) -> bool {
    sys.is_finite() || len <= sys.budget()
}

fn c3_orthonormality() -> Tally {
    let mut t = Tally::default();
    for name in TARGETS {
        let sys = target(name);
        let h = Hecke::new(&sys);
        for x in sys.elements() {
            for y in sys
                .elements()
                .filter(|&y| fits(&sys, sys.length(x) + sys.length(y)))
            {
                let p = h.pairing(&h.delta(x), &h.delta(y)).unwrap();
                let want = if x == y {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                };
                t.check(p == want, || {
                    format!(
                        "{name}: <d_{}, d_{}> = {p}",
                        sys.display_element(x),
                        sys.display_element(y)
                    )
                });
            }
        }
        for par in sys.finitary_subsets() {
            let js = sys.format_genset(par.j);
            let d = par.d_j;
            let module = SphericalModule::new(&h, par);
            let reps = module.basis_indices();
            for &x in &reps {
                for &y in reps
                    .iter()
                    .filter(|&&y| fits(&sys, 2 * d + sys.length(x) + sys.length(y)))
                {
                    let got = module.pairing_checked(&module.m(x).unwrap(), &module.m(y).unwrap());
                    let want = if x == y {
                        LaurentPoly::one()
                    } else {
                        LaurentPoly::zero()
                    };
                    t.check(got.as_ref() == Ok(&want), || {
                        format!(
                            "{name} J={js}: <m_{}, m_{}> = {got:?}",
                            sys.display_element(x),
                            sys.display_element(y)
                        )
                    });
                }
            }
        }
    }
    t
}

fn c4_decomp_and_wall_crossing() -> Tally {
    let mut t = Tally::default();
    for name in TARGETS {
        let sys = target(name);
        for par in sys.finitary_subsets() {
            let j = par.j;
            let js = sys.format_genset(j);
            let wj = parabolic_subgroup(&sys, j);
            for w in sys.elements().filter(|&w| fits(&sys, sys.length(w) + 1)) {
                let (u, z) = sys.coset_decompose(w, j);
                let ok = wj.contains(&u)
                    && is_mcr(&sys, z, j)
                    && sys.mul(u, z).unwrap() == w
                    && sys.length(u) + sys.length(z) == sys.length(w);
                t.check(ok, || {
                    format!("{name} J={js}: decomposition of {}", sys.display_element(w))
                });
            }
            for z in sys
                .elements()
                .filter(|&z| fits(&sys, sys.length(z) + 2) && is_mcr(&sys, z, j))
            {
                for s in 0..sys.rank() {
                    let zs = sys.rmul(z, s).unwrap();
                    if is_mcr(&sys, zs, j) {
                        continue;
                    }
                    let crossed = sys.wall_cross(z, s, j);
                    let ok = sys.length(zs) > sys.length(z)
                        && crossed
                            .as_ref()
                            .is_ok_and(|&u| j.contains(u) && sys.lmul(u, z).unwrap() == zs);
                    t.check(ok, || {
                        format!(
                            "{name} J={js}: wall crossing at {} {s}: {crossed:?}",
                            sys.display_element(z)
                        )
                    });
                }
            }
        }
    }
    t
}

fn expected_expansion(sys: &CoxeterSystem, x: &Expression, j: GenSet) -> SphericalElt {
    let mut acc: BTreeMap<Element, LaurentPoly> = BTreeMap::new();
    for bits in subsets(x.len()) {
        let (labels, path) = stroll(sys, x, &bits, j);
        let slot = acc
            .entry(*path.last().unwrap())
            .or_insert_with(LaurentPoly::zero);
        *slot = &*slot + &LaurentPoly::monomial(1, defect(&labels));
    }
    SphericalElt::from_terms(acc)
}

fn c5_one_tensor_b() -> Tally {
    let mut t = Tally::default();
    for name in ["A2", "B2"] {
        let sys = target(name);
        let h = Hecke::new(&sys);
        for par in sys.finitary_subsets() {
            let j = par.j;
            let module = SphericalModule::new(&h, par);
            for x in all_words(sys.rank(), 5) {
                let got = module.expand_expression(&x).unwrap();
                t.check(got == expected_expansion(&sys, &x, j), || {
                    format!(
                        "{name} J={}: 1 (x) b_{}",
                        sys.format_genset(j),
                        sys.format_word(&x)
                    )
                });
            }
        }
    }
    t
}

fn c6_matching_ranks() -> Tally {
    let mut t = Tally::default();
    for (name, len) in [("A2", 4), ("B2", 4), ("A3", 3)] {
        let sys = target(name);
        let h = Hecke::new(&sys);
        let words = all_words(sys.rank(), len);
        for par in sys.finitary_subsets() {
            let j = par.j;
            let module = SphericalModule::new(&h, par);
            let strolls_of: Vec<Vec<(Element, i32)>> = words
                .iter()
                .map(|x| {
                    subsets(x.len())
                        .map(|bits| {
                            let (labels, path) = stroll(&sys, x, &bits, j);
                            (*path.last().unwrap(), defect(&labels))
                        })
                        .collect()
                })
                .collect();
            let expansions: Vec<SphericalElt> = words
                .iter()
                .map(|x| module.expand_expression(x).unwrap())
                .collect();
            for (a, x) in words.iter().enumerate() {
                for (b, y) in words.iter().enumerate() {
                    let rank = strolls::rank_poly(&sys, x, y, j).unwrap();
                    let counted =
                        LaurentPoly::from_terms(strolls_of[a].iter().flat_map(|&(z, d)| {
                            strolls_of[b]
                                .iter()
                                .filter(move |&&(w, _)| w == z)
                                .map(move |&(_, e)| (d + e, 1))
                        }));
                    let paired = module.pairing(&expansions[a], &expansions[b]);
                    t.check(rank == paired && rank == counted, || {
                        format!(
                            "{name} J={}: rank({}, {}) = {rank}, pairing {paired}, count {counted}",
                            sys.format_genset(j),
                            sys.format_word(x),
                            sys.format_word(y)
                        )
                    });
                }
            }
        }
    }
    t
}

fn c7_worked_examples() -> Tally {
    let mut t = Tally::default();
    let sys = target("A2");
    let j = GenSet::from_iter([sys.generator_index("s").unwrap()]);
    let e = |w: &str| sys.parse_element(w).unwrap();

    let x = sys.parse_word("tst").unwrap();
    let sub = Subexpression::from_bitstring(x, "111").unwrap();
    let d = strolls::decorate(&sys, &sub, j).unwrap();
    t.check(
        d.stroll == vec![Element::IDENTITY, e("t"), e("ts"), e("ts")],
        || format!("stroll {}", d.format_stroll(&sys)),
    );
    t.check(d.labels == vec![Label::U1, Label::U1, Label::X1], || {
        format!("labels {}", d.format_labels())
    });
    let recipe = build_sll(&sys, &sub, j, None).unwrap();
    let last = recipe.steps.last().unwrap();
    t.check(
        last.pre_rex.apps.len() == 1 && last.pre_rex.apps[0].m == 3,
        || "last step lacks a single braid".into(),
    );
    t.check(
        last.elementary == ElementaryMove::WallPlug(j.iter().next().unwrap()),
        || "last step is not an s-wall-plug".into(),
    );
    t.check(last.post_rex.is_identity() && recipe.degree == -1, || {
        "recipe tail or degree".into()
    });
    t.check(recipe.replay(&sys).is_ok(), || {
        "recipe does not replay".into()
    });

    let w = sys.parse_word("stst").unwrap();
    let sub = |bits: &str| Subexpression::from_bitstring(w.clone(), bits).unwrap();
    let (se, sf, sg) = (sub("0111"), sub("0110"), sub("1110"));
    for (s, want) in [
        (&se, "X0 U1 U1 X1"),
        (&sf, "X0 U1 U1 X0"),
        (&sg, "X1 U1 U1 X0"),
    ] {
        let d = strolls::decorate(&sys, s, j).unwrap();
        t.check(d.format_labels() == want, || {
            format!("labels {} for {}", d.format_labels(), s.bitstring())
        });
        t.check(
            d.stroll
                == vec![
                    Element::IDENTITY,
                    Element::IDENTITY,
                    e("t"),
                    e("ts"),
                    e("ts"),
                ],
            || "stroll".into(),
        );
    }
    let p = |a: &Subexpression, b: &Subexpression| strolls::preceq(&sys, a, b, j).unwrap();
    t.check(p(&sf, &se) && !p(&se, &sf), || "f < e".into());
    t.check(p(&sf, &sg) && !p(&sg, &sf), || "f < g".into());
    t.check(!p(&se, &sg) && !p(&sg, &se), || "e, g incomparable".into());
    t
}

fn c8_degree_law() -> Tally {
    let mut t = Tally::default();
    for name in ["A2", "B2"] {
        let sys = target(name);
        for par in sys.finitary_subsets() {
            let j = par.j;
            for x in all_words(sys.rank(), 5) {
                for bits in subsets(x.len()) {
                    let (labels, path) = stroll(&sys, &x, &bits, j);
                    let sub = Subexpression::new(x.clone(), bits.clone()).unwrap();
                    let recipe = build_sll(&sys, &sub, j, None).unwrap();
                    let ctx = || {
                        format!(
                            "{name} J={}: {}/{}",
                            sys.format_genset(j),
                            sys.format_word(&x),
                            fmt_bits(&bits)
                        )
                    };
                    t.check(recipe.degree == defect(&labels), || {
                        format!("{}: degree {}", ctx(), recipe.degree)
                    });
                    t.check(
                        recipe.steps.iter().map(|s| s.degree()).sum::<i32>() == recipe.degree,
                        || ctx(),
                    );
                    t.check(recipe.replay(&sys).is_ok(), || format!("{}: replay", ctx()));
                    for (step, &z) in recipe.steps.iter().zip(&path[1..]) {
                        let ok = sys.is_reduced(&step.intermediate).unwrap()
                            && sys.element_of(&step.intermediate).unwrap() == z
                            && is_mcr(&sys, z, j);
                        t.check(ok, || format!("{}: step {}", ctx(), step.k));
                    }
                }
            }
        }
    }
    t
}

fn c9_sweeps() -> Tally {
    let mut t = Tally::default();
    for name in ["A2", "B2", "A3", "H3"] {
        let sys = target(name);
        for z in sys.elements() {
            for s in 0..sys.rank() {
                for u in 0..sys.rank() {
                    let sz = sys.lmul(s, z).unwrap();
                    if sz != sys.rmul(z, u).unwrap() || sys.length(sz) < sys.length(z) {
                        continue;
                    }
                    let ctx = || format!("{name}: s={s} z={} t={u}", sys.display_element(z));
                    let Ok((zt, mv)) = find_sweep(&sys, s, z, u) else {
                        t.check(false, ctx);
                        continue;
                    };
                    let ok_word = zt.len() == sys.length(z) && sys.element_of(&zt).unwrap() == z;
                    t.check(ok_word && mv.source == zt.with_prefix(s), || {
                        format!("{}: source", ctx())
                    });
                    let mut cur = mv.source.clone();
                    let mut replayed = true;
                    for app in &mv.apps {
                        match app.apply(&cur) {
                            Some(next) => cur = next,
                            None => replayed = false,
                        }
                    }
                    t.check(replayed && cur == zt.with_suffix(u), || {
                        format!("{}: replay", ctx())
                    });
                    let positions: Vec<usize> = mv.apps.iter().map(|a| a.pos).collect();
                    let monotone = positions.windows(2).all(|w| w[0] < w[1])
                        && mv
                            .apps
                            .windows(2)
                            .all(|w| w[1].pos == w[0].pos + w[0].m as usize - 1)
                        && mv.apps.first().is_none_or(|a| a.pos == 0)
                        && mv
                            .apps
                            .last()
                            .is_none_or(|a| a.pos + a.m as usize == mv.source.len());
                    t.check(monotone, || format!("{}: positions {positions:?}", ctx()));
                }
            }
        }
    }
    t
}

fn c10_partial_order() -> Tally {
    let mut t = Tally::default();
    for name in ["A2", "B2"] {
        let sys = target(name);
        for par in sys.finitary_subsets() {
            let j = par.j;
            for x in all_words(sys.rank(), 5) {
                let subs: Vec<Subexpression> = Subexpression::all(&x).collect();
                let n = subs.len();
                let rel: Vec<Vec<bool>> = subs
                    .iter()
                    .map(|f| {
                        subs.iter()
                            .map(|e| strolls::preceq(&sys, f, e, j).unwrap())
                            .collect()
                    })
                    .collect();
                let ctx = || format!("{name} J={}: {}", sys.format_genset(j), sys.format_word(&x));
                for a in 0..n {
                    t.check(rel[a][a], || format!("{}: reflexivity", ctx()));
                    for b in 0..n {
                        if a != b {
                            t.check(!(rel[a][b] && rel[b][a]), || {
                                format!("{}: antisymmetry", ctx())
                            });
                        }
                        if rel[a][b] {
                            for c in 0..n {
                                if rel[b][c] {
                                    t.check(rel[a][c], || format!("{}: transitivity", ctx()));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    t
}

type Criterion = (&'static str, fn() -> Tally);

const CRITERIA: [Criterion; 10] = [
    ("KL basis well-formed", c1_kl_well_formed),
    (
        "b_wJ closed form and b_wJ^2 = pi(J) b_wJ",
        c2_parabolic_idempotent,
    ),
    ("standard bases orthonormal", c3_orthonormality),
    (
        "coset decomposition and wall crossing",
        c4_decomp_and_wall_crossing,
    ),
    ("1 (x) b_x expands over strolls", c5_one_tensor_b),
    ("rank_poly matches the module pairing", c6_matching_ranks),
    ("worked examples", c7_worked_examples),
    ("light-leaf degree law", c8_degree_law),
    ("sweeps", c9_sweeps),
    ("stroll order is a partial order", c10_partial_order),
];

fn panic_message(err: Box<dyn std::any::Any + Send>) -> String {
    err.downcast_ref::<String>()
        .cloned()
        .or_else(|| err.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panic".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let results: Vec<Result<Tally, String>> = thread::scope(|scope| {
        let handles: Vec<_> = CRITERIA.iter().map(|&(_, run)| scope.spawn(run)).collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(panic_message))
            .collect()
    });
    let mut failed = 0;
    for (i, ((name, _), result)) in CRITERIA.iter().zip(results).enumerate() {
        let n = i + 1;
        match result {
            Ok(Tally {
                checked,
                failure: None,
            }) => println!("criterion {n:>2}: PASS  {name}  ({checked} checked)"),
            Ok(Tally {
                checked,
                failure: Some(why),
            }) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {name}  ({checked} checked)  first counterexample: {why}");
            }
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {name}  panicked: {why}");
            }
        }
    }
    println!(
        "criterion 11: N/A   categorical equivalence statements (not computable; covered by 1-10)"
    );
    println!(
        "{} criteria checked, {failed} failed, {:.1}s",
        CRITERIA.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
