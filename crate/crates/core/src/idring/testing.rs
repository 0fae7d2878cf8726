//! Deliberately broken derivation families, for exercising the checkers.

use super::{BaseElem, IterativeDerivation};
use crate::poly::Poly;
use crate::ring::RingElem;
use crate::scalars::FieldSpec;

/// A user-supplied family of maps on polynomials, with no guarantee that it
/// is an iterative derivation. `maps[n-1]` plays the role of `θ^{(n)}`;
/// beyond the list the family is zero.
pub struct AdHocFamily {
    field: FieldSpec,
    maps: Vec<Box<dyn Fn(&Poly) -> Poly + Send + Sync>>,
}

impl AdHocFamily {
    pub fn new(field: FieldSpec, maps: Vec<Box<dyn Fn(&Poly) -> Poly + Send + Sync>>) -> Self {
        AdHocFamily { field, maps }
    }

    /// `θ^{(1)} = d/dt` and all higher maps zero: a derivation that does not iterate.
    pub fn derivative_only(field: FieldSpec) -> Self {
        AdHocFamily::new(field, vec![Box::new(|p: &Poly| p.hasse_derivative(1))])
    }
}

impl IterativeDerivation for AdHocFamily {
    fn field(&self) -> FieldSpec {
        self.field
    }

    fn theta_n(&self, x: &BaseElem, n: usize) -> BaseElem {
        let BaseElem::Poly(p) = x else {
            panic!("ad-hoc families act on polynomials only");
        };
        if n == 0 {
            return x.clone();
        }
        match self.maps.get(n - 1) {
            Some(f) => BaseElem::Poly(f(p)),
            None => BaseElem::Poly(p.zero_like()),
        }
    }
}
