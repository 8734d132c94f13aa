//! The Hecke algebra in its standard basis `{δ_x}`.
//!
//! Conventions: `δ_s² = 1 + (v⁻¹ - v) δ_s`, `b_s = δ_s + v`, and the
//! Kazhdan–Lusztig basis `b_x = δ_x + Σ_{y<x} h_{y,x} δ_y` with
//! `h_{y,x} ∈ vZ[v]`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::combination::linear_combination;
use crate::coxeter::{CoxeterSystem, Element, ParabolicData};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// `Σ c_x δ_x` with finitely many nonzero `c_x`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HeckeElt {
    terms: BTreeMap<Element, LaurentPoly>,
}

linear_combination!(HeckeElt);

/// `v⁻¹ - v`
fn quadratic_coeff() -> LaurentPoly {
    LaurentPoly::from_terms([(-1, 1), (1, -1)])
}

/// Hecke algebra operations over a fixed Coxeter system. KL basis elements
/// and inverse standard basis elements are memoized; the caches sit behind
/// mutexes so one instance can be shared between threads.
pub struct Hecke<'a> {
    sys: &'a CoxeterSystem,
    kl: Mutex<HashMap<Element, HeckeElt>>,
    bar_delta: Mutex<HashMap<Element, HeckeElt>>,
}

impl<'a> Hecke<'a> {
    pub fn new(sys: &'a CoxeterSystem) -> Self {
        Self {
            sys,
            kl: Mutex::new(HashMap::new()),
            bar_delta: Mutex::new(HashMap::new()),
        }
    }

    pub fn system(&self) -> &'a CoxeterSystem {
        self.sys
    }

    pub fn delta(&self, x: Element) -> HeckeElt {
        HeckeElt::basis(x)
    }

    /// `b_s = δ_s + v δ_e`
    pub fn b_s(&self, s: usize) -> Result<HeckeElt> {
        let mut out = HeckeElt::basis(self.sys.generator(s)?);
        out.add_term(Element::IDENTITY, &LaurentPoly::v());
        Ok(out)
    }

    /// `a · δ_s`
    pub fn mul_gen(&self, a: &HeckeElt, s: usize) -> Result<HeckeElt> {
        let q = quadratic_coeff();
        let mut out = HeckeElt::zero();
        for (x, c) in a.iter() {
            let xs = self.sys.rmul(x, s)?;
            out.add_term(xs, c);
            if self.sys.length(xs) < self.sys.length(x) {
                out.add_term(x, &(c * &q));
            }
        }
        Ok(out)
    }

    /// `δ_s · a`
    pub fn gen_mul(&self, s: usize, a: &HeckeElt) -> Result<HeckeElt> {
        let q = quadratic_coeff();
        let mut out = HeckeElt::zero();
        for (x, c) in a.iter() {
            let sx = self.sys.lmul(s, x)?;
            out.add_term(sx, c);
            if self.sys.length(sx) < self.sys.length(x) {
                out.add_term(x, &(c * &q));
            }
        }
        Ok(out)
    }

    /// `a · δ_y`, one generator at a time along the ShortLex word of `y`.
    pub fn mul_delta(&self, a: &HeckeElt, y: Element) -> Result<HeckeElt> {
        let mut cur = a.clone();
        for &s in self.sys.word(y).letters() {
            cur = self.mul_gen(&cur, s)?;
        }
        Ok(cur)
    }

    pub fn multiply(&self, a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (y, c) in b.iter() {
            out.add_scaled(&self.mul_delta(a, y)?, c);
        }
        Ok(out)
    }

    /// `a · b_s`
    pub fn mul_b_s(&self, a: &HeckeElt, s: usize) -> Result<HeckeElt> {
        let mut out = self.mul_gen(a, s)?;
        out.add_scaled(a, &LaurentPoly::v());
        Ok(out)
    }

    /// `b_s · a`
    pub fn b_s_mul(&self, s: usize, a: &HeckeElt) -> Result<HeckeElt> {
        let mut out = self.gen_mul(s, a)?;
        out.add_scaled(a, &LaurentPoly::v());
        Ok(out)
    }

    /// `bar(δ_x) = δ_{x⁻¹}⁻¹`, built along the ShortLex word of `x` using
    /// `δ_s⁻¹ = δ_s + (v - v⁻¹)`.
    pub fn bar_delta(&self, x: Element) -> Result<HeckeElt> {
        if let Some(hit) = self.bar_delta.lock().expect("cache lock").get(&x) {
            return Ok(hit.clone());
        }
        let out = match self.sys.word(x).last() {
            None => HeckeElt::basis(Element::IDENTITY),
            Some(s) => {
                let prefix = self.sys.rmul(x, s)?;
                let base = self.bar_delta(prefix)?;
                let mut out = self.mul_gen(&base, s)?;
                out.add_scaled(&base, &-quadratic_coeff());
                out
            }
        };
        self.bar_delta
            .lock()
            .expect("cache lock")
            .insert(x, out.clone());
        Ok(out)
    }

    /// The Kazhdan–Lusztig involution.
    pub fn bar(&self, a: &HeckeElt) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (x, c) in a.iter() {
            out.add_scaled(&self.bar_delta(x)?, &c.bar());
        }
        Ok(out)
    }

    pub fn is_bar_invariant(&self, a: &HeckeElt) -> Result<bool> {
        Ok(self.bar(a)? == *a)
    }

    /// `b_x`, by `b_s b_{sx} = b_x + Σ μ(z, sx) b_z` over `z < sx` with
    /// `sz < z`, where `μ(z, y)` is the coefficient of `v` in `h_{z,y}`.
    pub fn kl_basis(&self, x: Element) -> Result<HeckeElt> {
        if let Some(hit) = self.kl.lock().expect("cache lock").get(&x) {
            return Ok(hit.clone());
        }
        let out = match self.sys.word(x).first() {
            None => HeckeElt::basis(Element::IDENTITY),
            Some(s) => {
                let y = self.sys.lmul(s, x)?;
                let b_y = self.kl_basis(y)?;
                let mut out = self.b_s_mul(s, &b_y)?;
                for (z, h) in b_y.iter() {
                    if z == y || !self.sys.is_left_descent(s, z) {
                        continue;
                    }
                    let mu = h.coeff(1);
                    if mu != num_bigint::BigInt::from(0) {
                        out.add_scaled(&self.kl_basis(z)?, &-LaurentPoly::constant(mu));
                    }
                }
                out
            }
        };
        self.kl.lock().expect("cache lock").insert(x, out.clone());
        Ok(out)
    }

    /// `h_{y,x}`
    pub fn kl_poly(&self, y: Element, x: Element) -> Result<LaurentPoly> {
        Ok(self.kl_basis(x)?.coeff(y))
    }

    /// `μ(y, x)`: the coefficient of `v` in `h_{y,x}`.
    pub fn mu(&self, y: Element, x: Element) -> Result<num_bigint::BigInt> {
        Ok(self.kl_poly(y, x)?.coeff(1))
    }

    /// The standard trace: the coefficient of `δ_e`.
    pub fn epsilon(&self, a: &HeckeElt) -> LaurentPoly {
        a.coeff(Element::IDENTITY)
    }

    /// The linear anti-involution `δ_x ↦ δ_{x⁻¹}`.
    pub fn anti_involution(&self, a: &HeckeElt) -> HeckeElt {
        HeckeElt::from_terms(a.iter().map(|(x, c)| (self.sys.inverse(x), c.clone())))
    }

    /// `⟨a, b⟩ = ε(i(a) b)`.
    pub fn pairing(&self, a: &HeckeElt, b: &HeckeElt) -> Result<LaurentPoly> {
        Ok(self.epsilon(&self.multiply(&self.anti_involution(a), b)?))
    }

    /// `Σ_x c_x(a) c_x(b)`, which equals [`pairing`](Self::pairing) because
    /// the standard basis is orthonormal.
    pub fn pairing_coordinatewise(&self, a: &HeckeElt, b: &HeckeElt) -> LaurentPoly {
        a.iter().filter_map(|(x, c)| b.get(x).map(|d| c * d)).sum()
    }

    /// `Σ_{x ∈ W_J} v^{d_J - l(x)} δ_x`
    pub fn b_wj_closed_form(&self, par: &ParabolicData) -> HeckeElt {
        HeckeElt::from_terms(par.elements.iter().map(|&x| {
            (
                x,
                LaurentPoly::monomial(1, (par.d_j - self.sys.length(x)) as i32),
            )
        }))
    }

    /// `π(J) = v^{-d_J} Σ_{x ∈ W_J} v^{2 l(x)}`
    pub fn hilbert_poly(&self, par: &ParabolicData) -> LaurentPoly {
        LaurentPoly::from_terms(
            par.elements
                .iter()
                .map(|&x| (2 * self.sys.length(x) as i32 - par.d_j as i32, 1)),
        )
    }

    /// `(b_{w_J}, π(J))`, checking the closed form against the KL recursion
    /// and `b_{w_J}² = π(J) b_{w_J}`.
    pub fn parabolic_idempotent(&self, par: &ParabolicData) -> Result<(HeckeElt, LaurentPoly)> {
        let closed = self.b_wj_closed_form(par);
        let recursive = self.kl_basis(par.longest)?;
        if closed != recursive {
            return Err(Error::InternalInconsistency(format!(
                "closed form of b_wJ differs from KL basis for J = {}",
                self.sys.format_genset(par.j)
            )));
        }
        let pi = self.hilbert_poly(par);
        if self.multiply(&closed, &closed)? != closed.scale(&pi) {
            return Err(Error::InternalInconsistency("b_wJ^2 != pi(J) b_wJ".into()));
        }
        Ok((closed, pi))
    }

    /// `h1 *_J h2 = h1 h2 / π(J)`; `NotDivisible` when the inputs are not in
    /// `H b_{w_J}` and `b_{w_J} H`.
    pub fn schur_compose(
        &self,
        h1: &HeckeElt,
        h2: &HeckeElt,
        par: &ParabolicData,
    ) -> Result<HeckeElt> {
        let pi = self.hilbert_poly(par);
        let prod = self.multiply(h1, h2)?;
        let mut out = HeckeElt::zero();
        for (x, c) in prod.iter() {
            out.add_term(x, &c.divide_exact(&pi)?);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct JsonTerm {
    pub elt: String,
    pub coeff: LaurentPoly,
}

#[derive(Serialize, Deserialize)]
struct HeckeJson {
    terms: Vec<JsonTerm>,
}

impl HeckeElt {
    /// Multi-line table, one `element: coefficient` row per term.
    pub fn render(&self, sys: &CoxeterSystem) -> String {
        render_terms(sys, self.iter())
    }

    /// `{"terms": [{"elt": "sts", "coeff": [[0,1]]}, ...]}`
    pub fn to_json(&self, sys: &CoxeterSystem) -> serde_json::Value {
        serde_json::to_value(HeckeJson {
            terms: json_terms(sys, self.iter()),
        })
        .expect("serializable")
    }

    pub fn from_json(sys: &CoxeterSystem, value: &serde_json::Value) -> Result<Self> {
        let raw: HeckeJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = Self::zero();
        for t in raw.terms {
            out.add_term(sys.parse_element(&t.elt)?, &t.coeff);
        }
        Ok(out)
    }
}

pub(crate) fn json_terms<'p>(
    sys: &CoxeterSystem,
    terms: impl Iterator<Item = (Element, &'p LaurentPoly)>,
) -> Vec<JsonTerm> {
    terms
        .map(|(x, c)| JsonTerm {
            elt: sys.format_element(x),
            coeff: c.clone(),
        })
        .collect()
}

pub(crate) fn render_terms<'p>(
    sys: &CoxeterSystem,
    terms: impl Iterator<Item = (Element, &'p LaurentPoly)>,
) -> String {
    let rows: Vec<(String, String)> = terms
        .map(|(x, c)| (sys.display_element(x), c.to_string()))
        .collect();
    if rows.is_empty() {
        return "0\n".to_string();
    }
    let width = rows
        .iter()
        .map(|(x, _)| x.chars().count())
        .max()
        .unwrap_or(0);
    rows.iter()
        .map(|(x, c)| format!("{x:<width$}  {c}\n"))
        .collect()
}
