//! Finitely supported `Z[v, v^-1]`-linear combinations of group elements.

/// Implements the shared linear-combination surface for a newtype around
/// `BTreeMap<Element, LaurentPoly>` whose field is named `terms`.
macro_rules! linear_combination {
    ($name:ident) => {
        impl $name {
            pub fn zero() -> Self {
                Self {
                    terms: ::std::collections::BTreeMap::new(),
                }
            }

            /// The basis vector at `x`.
            pub fn basis(x: $crate::coxeter::Element) -> Self {
                Self::monomial(x, $crate::laurent::LaurentPoly::one())
            }

            pub fn monomial(x: $crate::coxeter::Element, c: $crate::laurent::LaurentPoly) -> Self {
                let mut out = Self::zero();
                out.add_term(x, &c);
                out
            }

            pub fn from_terms<I>(terms: I) -> Self
            where
                I: IntoIterator<Item = ($crate::coxeter::Element, $crate::laurent::LaurentPoly)>,
            {
                let mut out = Self::zero();
                for (x, c) in terms {
                    out.add_term(x, &c);
                }
                out
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            /// Number of nonzero terms.
            pub fn len(&self) -> usize {
                self.terms.len()
            }

            pub fn is_empty(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn coeff(&self, x: $crate::coxeter::Element) -> $crate::laurent::LaurentPoly {
                self.terms.get(&x).cloned().unwrap_or_default()
            }

            pub fn get(
                &self,
                x: $crate::coxeter::Element,
            ) -> Option<&$crate::laurent::LaurentPoly> {
                self.terms.get(&x)
            }

            /// Terms in `(length, ShortLex)` order.
            pub fn iter(
                &self,
            ) -> impl DoubleEndedIterator<
                Item = ($crate::coxeter::Element, &$crate::laurent::LaurentPoly),
            > + '_ {
                self.terms.iter().map(|(x, c)| (*x, c))
            }

            pub fn support(&self) -> impl Iterator<Item = $crate::coxeter::Element> + '_ {
                self.terms.keys().copied()
            }

            pub fn add_term(
                &mut self,
                x: $crate::coxeter::Element,
                c: &$crate::laurent::LaurentPoly,
            ) {
                if c.is_zero() {
                    return;
                }
                match self.terms.entry(x) {
                    ::std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(c.clone());
                    }
                    ::std::collections::btree_map::Entry::Occupied(mut slot) => {
                        *slot.get_mut() += c;
                        if slot.get().is_zero() {
                            slot.remove();
                        }
                    }
                }
            }

            /// `self += c * other`
            pub fn add_scaled(&mut self, other: &Self, c: &$crate::laurent::LaurentPoly) {
                for (x, d) in &other.terms {
                    self.add_term(*x, &(c * d));
                }
            }

            pub fn scale(&self, c: &$crate::laurent::LaurentPoly) -> Self {
                let mut out = Self::zero();
                out.add_scaled(self, c);
                out
            }

            /// Applies the bar involution to coefficients only.
            pub fn bar_coefficients(&self) -> Self {
                Self::from_terms(self.terms.iter().map(|(x, c)| (*x, c.bar())))
            }
        }

        impl ::std::ops::Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                let mut out = self.clone();
                out.add_scaled(rhs, &$crate::laurent::LaurentPoly::one());
                out
            }
        }

        impl ::std::ops::Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                let mut out = self.clone();
                out.add_scaled(rhs, &-$crate::laurent::LaurentPoly::one());
                out
            }
        }

        impl ::std::ops::AddAssign<&$name> for $name {
            fn add_assign(&mut self, rhs: &$name) {
                self.add_scaled(rhs, &$crate::laurent::LaurentPoly::one());
            }
        }

        impl ::std::ops::SubAssign<&$name> for $name {
            fn sub_assign(&mut self, rhs: &$name) {
                self.add_scaled(rhs, &-$crate::laurent::LaurentPoly::one());
            }
        }

        impl ::std::ops::Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                self.scale(&-$crate::laurent::LaurentPoly::one())
            }
        }
    };
}

pub(crate) use linear_combination;
