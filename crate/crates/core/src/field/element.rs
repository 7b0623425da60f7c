use std::fmt;

use rug::Rational;

use crate::error::Result;
use crate::numeric::poly::{parse_rational, RationalPoly};

/// An element of a number field in power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: Vec<Rational>,
}

impl FieldElement {
    pub fn new(coords: Vec<Rational>) -> Self {
        FieldElement { coords }
    }

    pub fn from_rational(c: Rational, n: usize) -> Self {
        let mut v = vec![Rational::new(); n];
        v[0] = c;
        FieldElement { coords: v }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        FieldElement::new(coords.iter().map(|&c| Rational::from(c)).collect())
    }

    /// Parses `["1", "-1/2", ...]`.
    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        let v: Result<Vec<Rational>> = coords.iter().map(|s| parse_rational(s.as_ref())).collect();
        Ok(FieldElement::new(v?))
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn to_poly(&self) -> RationalPoly {
        RationalPoly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly().to_string().replace('x', "t"))
    }
}
