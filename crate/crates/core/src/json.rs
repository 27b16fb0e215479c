//! JSON mirrors of elements and derivations.

use serde::{Deserialize, Serialize};

use crate::derivation::SuperDerivation;
use crate::element::SuperElement;
use crate::error::{Error, Result};
use crate::monomial::{Monomial, Parity};
use crate::scalar::Scalar;

/// One term: `{coeff: "p/q", even: [a1..an], odd: [i1..ik]}` with 1-based odd indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub even: Vec<u32>,
    pub odd: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationJson {
    pub n: usize,
    pub parity: u8,
    /// `null` for the zero derivation and for sums of several degrees.
    pub degree: Option<i32>,
    pub images_xi: Vec<Vec<TermJson>>,
    pub images_x: Vec<Vec<TermJson>>,
}

pub fn element_to_json<S: Scalar>(e: &SuperElement<S>) -> Vec<TermJson> {
    e.terms()
        .map(|(m, c)| TermJson {
            coeff: c.to_string(),
            even: m.even().to_vec(),
            odd: m.odd_indices().map(|i| i + 1).collect(),
        })
        .collect()
}

pub fn element_from_json<S: Scalar>(n: usize, terms: &[TermJson]) -> Result<SuperElement<S>> {
    let mut out = SuperElement::zero(n);
    for (t, term) in terms.iter().enumerate() {
        let c = S::parse_scalar(&term.coeff)
            .ok_or_else(|| Error::Parse { pos: t, msg: format!("bad coefficient '{}'", term.coeff) })?;
        if term.even.len() != n {
            return Err(Error::DimensionMismatch { left: n, right: term.even.len() });
        }
        if term.odd.contains(&0) {
            return Err(Error::IndexOutOfRange { index: 0, n });
        }
        let odd: Vec<usize> = term.odd.iter().map(|i| i - 1).collect();
        if let Some((neg, m)) = Monomial::from_odd_list(term.even.clone(), &odd)? {
            out = &out + &SuperElement::monomial(n, m, if neg { -c } else { c });
        }
    }
    Ok(out)
}

pub fn derivation_to_json<S: Scalar>(d: &SuperDerivation<S>) -> DerivationJson {
    DerivationJson {
        n: d.n(),
        parity: d.parity().bit(),
        degree: d.z_degree(),
        images_xi: d.images_xi().iter().map(element_to_json).collect(),
        images_x: d.images_x().iter().map(element_to_json).collect(),
    }
}

pub fn derivation_from_json<S: Scalar>(j: &DerivationJson) -> Result<SuperDerivation<S>> {
    let parse = |v: &[Vec<TermJson>]| v.iter().map(|t| element_from_json(j.n, t)).collect::<Result<Vec<_>>>();
    let parity = if j.parity == 0 { Parity::Even } else { Parity::Odd };
    SuperDerivation::new(j.n, parity, parse(&j.images_xi)?, parse(&j.images_x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Element, Field, Rational};

    #[test]
    fn element_json_shape() {
        let a = &Element::x(2, 0).scale(&Rational::from_ratio(1, 2)) + &Element::xi_product(2, &[0, 1]).unwrap();
        let json = serde_json::to_string(&element_to_json(&a)).unwrap();
        assert_eq!(json, r#"[{"coeff":"1/2","even":[1,0],"odd":[]},{"coeff":"1","even":[0,0],"odd":[1,2]}]"#);
        let back: Vec<TermJson> = serde_json::from_str(&json).unwrap();
        assert_eq!(element_from_json::<Rational>(2, &back).unwrap(), a);
    }

    #[test]
    fn unsorted_odd_list_takes_sign() {
        let t = vec![TermJson { coeff: "1".into(), even: vec![0, 0], odd: vec![2, 1] }];
        assert_eq!(element_from_json::<Rational>(2, &t).unwrap(), -&Element::xi_product(2, &[0, 1]).unwrap());
    }

    #[test]
    fn derivation_json_roundtrip() {
        let ext = Field::monomial(3, 0b011, 2).extend();
        let j = derivation_to_json(&ext);
        assert_eq!(j.degree, Some(1));
        assert_eq!(j.parity, 1);
        let text = serde_json::to_string(&j).unwrap();
        let back: DerivationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(derivation_from_json::<Rational>(&back).unwrap(), ext);
    }
}
