//! The spherical module `M(J)` with standard basis `m_x = 1 ⊗ δ_x` over the
//! minimal coset representatives `x ∈ ^J W`, as a right module over the
//! Hecke algebra.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::combination::linear_combination;
use crate::coxeter::{CoxeterSystem, Element, Expression, ParabolicData};
use crate::error::{Error, Result};
use crate::hecke::{json_terms, render_terms, Hecke, HeckeElt, JsonTerm};
use crate::laurent::LaurentPoly;

/// `Σ c_x m_x`, keys in `^J W`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SphericalElt {
    terms: BTreeMap<Element, LaurentPoly>,
}

linear_combination!(SphericalElt);

/// The bar-invariant part `q` of `p` with `p - q ∈ vZ[v]`.
fn self_dual_correction(p: &LaurentPoly) -> LaurentPoly {
    let mut q = LaurentPoly::zero();
    for (e, c) in p.terms() {
        if e <= 0 {
            q += &LaurentPoly::monomial(c.clone(), e);
        }
        if e < 0 {
            q += &LaurentPoly::monomial(c.clone(), -e);
        }
    }
    q
}

pub struct SphericalModule<'a> {
    hecke: &'a Hecke<'a>,
    par: ParabolicData,
    b_wj: HeckeElt,
    pi: LaurentPoly,
    kl: Mutex<HashMap<Element, SphericalElt>>,
}

impl<'a> SphericalModule<'a> {
    pub fn new(hecke: &'a Hecke<'a>, par: ParabolicData) -> Self {
        let b_wj = hecke.b_wj_closed_form(&par);
        let pi = hecke.hilbert_poly(&par);
        Self {
            hecke,
            par,
            b_wj,
            pi,
            kl: Mutex::new(HashMap::new()),
        }
    }

    pub fn system(&self) -> &'a CoxeterSystem {
        self.hecke.system()
    }

    pub fn hecke(&self) -> &'a Hecke<'a> {
        self.hecke
    }

    pub fn parabolic(&self) -> &ParabolicData {
        &self.par
    }

    pub fn is_basis_index(&self, x: Element) -> bool {
        self.system().is_min_coset_rep(x, self.par.j)
    }

    /// The enumerated part of `^J W`.
    pub fn basis_indices(&self) -> Vec<Element> {
        self.system().all_min_coset_reps(self.par.j)
    }

    /// `m_x`; `x` must be a minimal coset representative.
    pub fn m(&self, x: Element) -> Result<SphericalElt> {
        if !self.is_basis_index(x) {
            return Err(Error::PreconditionViolated(format!(
                "{} is not a minimal coset representative for J = {}",
                self.system().display_element(x),
                self.system().format_genset(self.par.j)
            )));
        }
        Ok(SphericalElt::basis(x))
    }

    /// `m · b_s` by the three-case formula.
    pub fn act_b(&self, m: &SphericalElt, s: usize) -> Result<SphericalElt> {
        let sys = self.system();
        let mut out = SphericalElt::zero();
        for (x, c) in m.iter() {
            let xs = sys.rmul(x, s)?;
            if !self.is_basis_index(xs) {
                out.add_term(x, &(c * &LaurentPoly::quantum_two()));
            } else if sys.length(xs) < sys.length(x) {
                out.add_term(xs, c);
                out.add_term(x, &c.shift(-1));
            } else {
                out.add_term(xs, c);
                out.add_term(x, &c.shift(1));
            }
        }
        Ok(out)
    }

    /// `m · δ_s = m · b_s - v m`
    pub fn act_delta(&self, m: &SphericalElt, s: usize) -> Result<SphericalElt> {
        let mut out = self.act_b(m, s)?;
        out.add_scaled(m, &-LaurentPoly::v());
        Ok(out)
    }

    /// `m · h`, expanding `h` in the standard basis.
    pub fn act(&self, m: &SphericalElt, h: &HeckeElt) -> Result<SphericalElt> {
        let mut out = SphericalElt::zero();
        for (y, c) in h.iter() {
            let mut cur = m.clone();
            for &s in self.system().word(y).letters() {
                cur = self.act_delta(&cur, s)?;
            }
            out.add_scaled(&cur, c);
        }
        Ok(out)
    }

    /// `1 ⊗ b_{x̲} = m_e · b_{s_1} ··· b_{s_n}`
    pub fn expand_expression(&self, word: &Expression) -> Result<SphericalElt> {
        let mut cur = SphericalElt::basis(Element::IDENTITY);
        for &s in word.letters() {
            cur = self.act_b(&cur, s)?;
        }
        Ok(cur)
    }

    /// `bar(p ⊗ h) = bar(p) ⊗ bar(h)`, via `m_x = m_e · δ_x`.
    pub fn bar(&self, m: &SphericalElt) -> Result<SphericalElt> {
        let unit = SphericalElt::basis(Element::IDENTITY);
        let mut out = SphericalElt::zero();
        for (x, c) in m.iter() {
            let image = self.act(&unit, &self.hecke.bar_delta(x)?)?;
            out.add_scaled(&image, &c.bar());
        }
        Ok(out)
    }

    pub fn is_bar_invariant(&self, m: &SphericalElt) -> Result<bool> {
        Ok(self.bar(m)? == *m)
    }

    /// The self-dual basis element `c_x ∈ m_x + Σ_{y<x} vZ[v] m_y`.
    ///
    /// Starts from `c_{xs} · b_s` for a right descent `s` of `x` and removes
    /// the non-positive part of each lower coefficient, top-down, with a
    /// bar-invariant multiple of the corresponding `c_z`.
    pub fn kl_c(&self, x: Element) -> Result<SphericalElt> {
        self.m(x)?;
        if let Some(hit) = self.kl.lock().expect("cache lock").get(&x) {
            return Ok(hit.clone());
        }
        let sys = self.system();
        let out = match sys.word(x).last() {
            None => SphericalElt::basis(Element::IDENTITY),
            Some(s) => {
                let y = sys.rmul(x, s)?;
                let mut acc = self.act_b(&self.kl_c(y)?, s)?;
                let mut bound = x;
                while let Some((z, p)) = acc
                    .terms
                    .range(..bound)
                    .next_back()
                    .map(|(z, p)| (*z, p.clone()))
                {
                    bound = z;
                    if !p.in_v_z_v() {
                        let q = self_dual_correction(&p);
                        acc.add_scaled(&self.kl_c(z)?, &-q);
                    }
                }
                acc
            }
        };
        if !out.get(x).is_some_and(LaurentPoly::is_one)
            || out
                .iter()
                .any(|(z, p)| z != x && (!p.in_v_z_v() || !sys.bruhat_lt(z, x)))
        {
            return Err(Error::InternalInconsistency(format!(
                "c_{} violates its degree bounds",
                sys.display_element(x)
            )));
        }
        self.kl.lock().expect("cache lock").insert(x, out.clone());
        Ok(out)
    }

    /// `⟨a, b⟩_M` computed coordinatewise (the standard basis is
    /// orthonormal).
    pub fn pairing(&self, a: &SphericalElt, b: &SphericalElt) -> LaurentPoly {
        a.iter().filter_map(|(x, c)| b.get(x).map(|d| c * d)).sum()
    }

    /// `⟨a, b⟩_M = v^{-d_J} ε(i(φ a) *_J φ b)`, with exact division by `π(J)`.
    pub fn pairing_via_embedding(&self, a: &SphericalElt, b: &SphericalElt) -> Result<LaurentPoly> {
        let left = self.hecke.anti_involution(&self.phi(a)?);
        let prod = self.hecke.schur_compose(&left, &self.phi(b)?, &self.par)?;
        Ok(self.hecke.epsilon(&prod).shift(-(self.par.d_j as i32)))
    }

    /// Both pairing routes; fails if they disagree.
    pub fn pairing_checked(&self, a: &SphericalElt, b: &SphericalElt) -> Result<LaurentPoly> {
        let fast = self.pairing(a, b);
        let slow = self.pairing_via_embedding(a, b)?;
        if fast != slow {
            return Err(Error::InternalInconsistency(format!(
                "pairing routes disagree: {fast} vs {slow}"
            )));
        }
        Ok(fast)
    }

    /// `φ(m_x) = b_{w_J} δ_x`, checking that its top term is `δ_{w_J x}`.
    pub fn phi_basis(&self, x: Element) -> Result<HeckeElt> {
        self.m(x)?;
        let sys = self.system();
        let image = self.hecke.mul_delta(&self.b_wj, x)?;
        let top = sys.mul(self.par.longest, x)?;
        let top_len = sys.length(top);
        if sys.length(top) != self.par.d_j + sys.length(x)
            || !image.get(top).is_some_and(LaurentPoly::is_one)
            || image
                .iter()
                .any(|(y, _)| y != top && sys.length(y) >= top_len)
        {
            return Err(Error::InternalInconsistency(format!(
                "phi(m_{}) is not unitriangular",
                sys.display_element(x)
            )));
        }
        Ok(image)
    }

    /// The embedding `M(J) → b_{w_J} H`.
    pub fn phi(&self, m: &SphericalElt) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (x, c) in m.iter() {
            out.add_scaled(&self.phi_basis(x)?, c);
        }
        Ok(out)
    }

    /// `b_{w_J}`
    pub fn b_wj(&self) -> &HeckeElt {
        &self.b_wj
    }

    /// `π(J)`
    pub fn hilbert_poly(&self) -> &LaurentPoly {
        &self.pi
    }
}

#[derive(Serialize, Deserialize)]
struct SphericalJson {
    basis: String,
    #[serde(rename = "J")]
    j: Vec<String>,
    terms: Vec<JsonTerm>,
}

impl SphericalElt {
    pub fn render(&self, sys: &CoxeterSystem) -> String {
        render_terms(sys, self.iter())
    }

    /// `{"basis": "spherical-standard", "J": [...], "terms": [...]}`
    pub fn to_json(&self, sys: &CoxeterSystem, par: &ParabolicData) -> serde_json::Value {
        serde_json::to_value(SphericalJson {
            basis: "spherical-standard".into(),
            j: par
                .j
                .iter()
                .map(|s| sys.generator_name(s).to_string())
                .collect(),
            terms: json_terms(sys, self.iter()),
        })
        .expect("serializable")
    }

    /// Parses the JSON form, returning the element and its recorded `J`.
    pub fn from_json(
        sys: &CoxeterSystem,
        value: &serde_json::Value,
    ) -> Result<(Self, crate::coxeter::GenSet)> {
        let raw: SphericalJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.basis != "spherical-standard" {
            return Err(Error::Parse(format!(
                "unexpected basis tag {:?}",
                raw.basis
            )));
        }
        let j = raw
            .j
            .iter()
            .map(|g| sys.generator_index(g))
            .collect::<Result<crate::coxeter::GenSet>>()?;
        let mut out = Self::zero();
        for t in raw.terms {
            let x = sys.parse_element(&t.elt)?;
            if !sys.is_min_coset_rep(x, j) {
                return Err(Error::Parse(format!(
                    "{} is not a minimal coset representative",
                    t.elt
                )));
            }
            out.add_term(x, &t.coeff);
        }
        Ok((out, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterMatrix, GenSet};

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    struct Fixture {
        sys: CoxeterSystem,
    }

    impl Fixture {
        fn a2() -> Self {
            Self {
                sys: CoxeterSystem::build(CoxeterMatrix::type_a(2), 10),
            }
        }
        fn e(&self, s: &str) -> Element {
            self.sys.parse_element(s).unwrap()
        }
    }

    #[test]
    fn act_examples() {
        let f = Fixture::a2();
        let h = Hecke::new(&f.sys);
        let m = SphericalModule::new(&h, f.sys.parabolic(GenSet::from_iter([0])).unwrap());
        let me = SphericalElt::basis(Element::IDENTITY);
        let mt = SphericalElt::basis(f.e("t"));
        assert_eq!(
            m.act_b(&me, 1).unwrap(),
            SphericalElt::from_terms([
                (f.e("t"), LaurentPoly::one()),
                (Element::IDENTITY, LaurentPoly::v())
            ])
        );
        assert_eq!(
            m.act_b(&me, 0).unwrap(),
            me.scale(&LaurentPoly::quantum_two())
        );
        assert_eq!(
            m.act_b(&mt, 0).unwrap(),
            SphericalElt::from_terms([
                (f.e("ts"), LaurentPoly::one()),
                (f.e("t"), LaurentPoly::v())
            ])
        );
        // the m_x really are 1 ⊗ δ_x
        for x in m.basis_indices() {
            assert_eq!(m.act(&me, &h.delta(x)).unwrap(), SphericalElt::basis(x));
        }
        assert!(m.m(f.e("s")).is_err());
    }

    #[test]
    fn bar_examples() {
        let f = Fixture::a2();
        let h = Hecke::new(&f.sys);
        let m = SphericalModule::new(&h, f.sys.parabolic(GenSet::from_iter([0])).unwrap());
        let me = SphericalElt::basis(Element::IDENTITY);
        assert_eq!(m.bar(&me).unwrap(), me);
        let expected = SphericalElt::from_terms([
            (f.e("t"), LaurentPoly::one()),
            (Element::IDENTITY, lp(&[(1, 1), (-1, -1)])),
        ]);
        assert_eq!(m.bar(&SphericalElt::basis(f.e("t"))).unwrap(), expected);
        assert_eq!(
            m.bar(&me.scale(&LaurentPoly::v())).unwrap(),
            me.scale(&LaurentPoly::v_inv())
        );
        for x in m.basis_indices() {
            let mx = SphericalElt::basis(x);
            assert_eq!(m.bar(&m.bar(&mx).unwrap()).unwrap(), mx);
        }
    }

    #[test]
    fn kl_c_examples() {
        let f = Fixture::a2();
        let h = Hecke::new(&f.sys);
        let m = SphericalModule::new(&h, f.sys.parabolic(GenSet::from_iter([0])).unwrap());
        assert_eq!(
            m.kl_c(Element::IDENTITY).unwrap(),
            SphericalElt::basis(Element::IDENTITY)
        );
        let ct = SphericalElt::from_terms([
            (f.e("t"), lp(&[(0, 1)])),
            (Element::IDENTITY, lp(&[(1, 1)])),
        ]);
        assert_eq!(m.kl_c(f.e("t")).unwrap(), ct);
        let cts = SphericalElt::from_terms([
            (f.e("ts"), lp(&[(0, 1)])),
            (f.e("t"), lp(&[(1, 1)])),
            (Element::IDENTITY, lp(&[(2, 1)])),
        ]);
        assert_eq!(m.kl_c(f.e("ts")).unwrap(), cts);
        for x in m.basis_indices() {
            assert!(m.is_bar_invariant(&m.kl_c(x).unwrap()).unwrap());
        }
    }

    #[test]
    fn kl_c_needs_corrections_in_b3() {
        // exercises the correction loop: every c_x is self-dual with the
        // right degree bounds, whatever the intermediate products look like
        let sys = CoxeterSystem::build(CoxeterMatrix::type_b(3), 20);
        let h = Hecke::new(&sys);
        for par in sys.finitary_subsets() {
            let m = SphericalModule::new(&h, par);
            for x in m.basis_indices() {
                let c = m.kl_c(x).unwrap();
                assert!(m.is_bar_invariant(&c).unwrap());
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let f = Fixture::a2();
        let h = Hecke::new(&f.sys);
        let m = SphericalModule::new(&h, f.sys.parabolic(GenSet::from_iter([0])).unwrap());
        for x in m.basis_indices() {
            for y in m.basis_indices() {
                let expected = if x == y {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                };
                assert_eq!(
                    m.pairing_checked(&SphericalElt::basis(x), &SphericalElt::basis(y))
                        .unwrap(),
                    expected
                );
            }
        }
        let c = m.kl_c(f.e("t")).unwrap();
        assert_eq!(m.pairing_checked(&c, &c).unwrap(), lp(&[(0, 1), (2, 1)]));
        assert!(m.pairing(&SphericalElt::zero(), &c).is_zero());
    }

    #[test]
    fn phi_examples() {
        let f = Fixture::a2();
        let h = Hecke::new(&f.sys);
        let m = SphericalModule::new(&h, f.sys.parabolic(GenSet::from_iter([0])).unwrap());
        let me = SphericalElt::basis(Element::IDENTITY);
        assert_eq!(m.phi(&me).unwrap(), h.b_s(0).unwrap());
        let expected = HeckeElt::from_terms([
            (f.e("st"), LaurentPoly::one()),
            (f.e("t"), LaurentPoly::v()),
        ]);
        assert_eq!(m.phi(&SphericalElt::basis(f.e("t"))).unwrap(), expected);
        let bs = h.b_s(0).unwrap();
        let lhs = m.phi(&m.act_b(&me, 0).unwrap()).unwrap();
        assert_eq!(lhs, h.multiply(&bs, &bs).unwrap());
        assert_eq!(lhs, bs.scale(&LaurentPoly::quantum_two()));
    }

    #[test]
    fn expand_examples() {
        let f = Fixture::a2();
        let h = Hecke::new(&f.sys);
        let m = SphericalModule::new(&h, f.sys.parabolic(GenSet::from_iter([0])).unwrap());
        let me = SphericalElt::basis(Element::IDENTITY);
        assert_eq!(m.expand_expression(&Expression::empty()).unwrap(), me);
        assert_eq!(
            m.expand_expression(&f.sys.parse_word("t").unwrap())
                .unwrap(),
            m.kl_c(f.e("t")).unwrap()
        );
        assert_eq!(
            m.expand_expression(&f.sys.parse_word("s").unwrap())
                .unwrap(),
            me.scale(&LaurentPoly::quantum_two())
        );
    }

    #[test]
    fn json_round_trip() {
        let f = Fixture::a2();
        let h = Hecke::new(&f.sys);
        let par = f.sys.parabolic(GenSet::from_iter([0])).unwrap();
        let m = SphericalModule::new(&h, par.clone());
        let c = m.kl_c(f.e("ts")).unwrap();
        let json = c.to_json(&f.sys, &par);
        assert_eq!(json["basis"], "spherical-standard");
        assert_eq!(json["J"][0], "s");
        assert_eq!(SphericalElt::from_json(&f.sys, &json).unwrap(), (c, par.j));
    }
}
