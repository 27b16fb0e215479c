//! The quotient `A′ = A/ωA` by a quadratic form and the derivations it inherits.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::derivation::{koszul_d, SuperDerivation};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, Parity};
use crate::text::format_element;
use crate::vectorial::{conformal_factor, hamiltonian_defect, QuadraticForm};
use crate::{Derivation, Element, Field, Rational};

/// `A/ωA` with normal forms of x_n-degree at most 1.
///
/// Writing `ω = a x_n² + x_n·L + Q` with `a ≠ 0`, every occurrence of `x_n²`
/// is rewritten as `−(x_n L + Q)/a`.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    omega: QuadraticForm,
    polynomial: Element,
    lead: Rational,
    /// `−(ω − a x_n²)/a`.
    replacement: Element,
}

/// A class in `A/ωA`, held by its normal-form representative.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientElement {
    representative: Element,
}

impl QuotientElement {
    pub fn representative(&self) -> &Element {
        &self.representative
    }

    pub fn is_zero(&self) -> bool {
        self.representative.is_zero()
    }
}

/// `a = quotient·ω + remainder` with the remainder in normal form.
#[derive(Debug, Clone)]
pub struct Division {
    pub quotient: Element,
    pub remainder: Element,
}

impl QuotientRing {
    pub fn new(omega: QuadraticForm) -> Result<Self> {
        let n = omega.n();
        let last = n - 1;
        let lead = omega.entry(last, last).clone();
        if lead.is_zero() {
            return Err(Error::NoLeadingSquare(n));
        }
        let polynomial = omega.polynomial();
        let square = Element::x(n, last).pow(2).scale(&lead);
        let replacement = (&polynomial - &square).scale(&(-Rational::one() / lead.clone()));
        Ok(QuotientRing { omega, polynomial, lead, replacement })
    }

    pub fn n(&self) -> usize {
        self.omega.n()
    }

    pub fn omega(&self) -> &QuadraticForm {
        &self.omega
    }

    /// `ω` as an element of `A`.
    pub fn polynomial(&self) -> &Element {
        &self.polynomial
    }

    pub fn is_normal(&self, a: &Element) -> bool {
        let last = self.n() - 1;
        a.terms().all(|(m, _)| m.even()[last] < 2)
    }

    /// Division by `ω` along the rewriting rule.
    pub fn divide(&self, a: &Element) -> Result<Division> {
        let n = self.n();
        if a.n() != n {
            return Err(Error::DimensionMismatch { left: a.n(), right: n });
        }
        let last = n - 1;
        let mut rest = a.clone();
        let mut quotient = Element::zero(n);
        loop {
            let pick = rest
                .terms()
                .filter(|(m, _)| m.even()[last] >= 2)
                .max_by_key(|(m, _)| m.even()[last])
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = pick else { break };
            let mut exps = m.even().to_vec();
            exps[last] -= 2;
            let cofactor = Element::monomial(n, Monomial::from_parts(exps, m.odd_mask()), c / self.lead.clone());
            rest = &rest - &(&cofactor * &self.polynomial);
            quotient = &quotient + &cofactor;
        }
        Ok(Division { quotient, remainder: rest })
    }

    pub fn reduce(&self, a: &Element) -> Result<QuotientElement> {
        Ok(QuotientElement { representative: self.divide(a)?.remainder })
    }

    pub fn lift(&self, a: &QuotientElement) -> Element {
        a.representative.clone()
    }

    /// The substitution `x_n² ↦ −(x_n L + Q)/a` applied once to every term.
    pub fn rewrite_once(&self, a: &Element) -> Element {
        let n = self.n();
        let last = n - 1;
        let mut out = Element::zero(n);
        for (m, c) in a.terms() {
            let term = Element::monomial(n, m.clone(), c.clone());
            if m.even()[last] >= 2 {
                let mut exps = m.even().to_vec();
                exps[last] -= 2;
                let rest = Element::monomial(n, Monomial::from_parts(exps, m.odd_mask()), c.clone());
                out = &out + &(&rest * &self.replacement);
            } else {
                out = &out + &term;
            }
        }
        out
    }

    /// Whether `a ∈ ωA`, decided by ordinary multivariate division by `ω`
    /// in each odd-monomial component, returning the quotient if so.
    pub fn divide_exactly(&self, a: &Element) -> Option<Element> {
        let n = self.n();
        let mut by_odd: BTreeMap<u32, BTreeMap<Vec<u32>, Rational>> = BTreeMap::new();
        for (m, c) in a.terms() {
            by_odd.entry(m.odd_mask()).or_default().insert(m.even().to_vec(), c.clone());
        }
        let divisor: Vec<(Vec<u32>, Rational)> =
            self.polynomial.terms().map(|(m, c)| (m.even().to_vec(), c.clone())).collect();
        let key = |e: &Vec<u32>| (e.iter().sum::<u32>(), e.clone());
        let (lead_exp, lead_coeff) = divisor.iter().max_by_key(|(e, _)| key(e)).cloned()?;
        let mut quotient = Element::zero(n);
        for (mask, mut poly) in by_odd {
            while let Some((top, c)) = poly.iter().max_by_key(|(e, _)| key(e)).map(|(e, c)| (e.clone(), c.clone())) {
                if top.iter().zip(&lead_exp).any(|(a, b)| a < b) {
                    return None;
                }
                let shift: Vec<u32> = top.iter().zip(&lead_exp).map(|(a, b)| a - b).collect();
                let factor = c / lead_coeff.clone();
                for (e, d) in &divisor {
                    let target: Vec<u32> = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
                    let entry = poly.entry(target.clone()).or_insert_with(Rational::zero);
                    *entry -= factor.clone() * d.clone();
                    if entry.is_zero() {
                        poly.remove(&target);
                    }
                }
                quotient = &quotient + &Element::monomial(n, Monomial::from_parts(shift, mask), factor);
            }
        }
        Some(quotient)
    }

    pub fn multiply(&self, a: &QuotientElement, b: &QuotientElement) -> Result<QuotientElement> {
        self.reduce(&(&a.representative * &b.representative))
    }
}

/// A derivation of `A` that maps `ωA` into itself, acting on `A/ωA`.
#[derive(Debug, Clone)]
pub struct InducedDerivation {
    derivation: Derivation,
    /// `γ(ω) = factor·ω`, when the factor is known.
    factor: Element,
}

impl InducedDerivation {
    /// Accepts any derivation with `γ(ω) ∈ ωA`, checked by exact division.
    pub fn new(derivation: Derivation, ring: &QuotientRing) -> Result<Self> {
        let image = derivation.apply(ring.polynomial())?;
        match ring.divide_exactly(&image) {
            Some(factor) => Ok(InducedDerivation { derivation, factor }),
            None => Err(Error::IdealNotPreserved { witness: format_element(&image) }),
        }
    }

    /// The extension of a field in `DH(ω)`; other fields are rejected with
    /// their defect.
    pub fn from_field(field: &Field, ring: &QuotientRing) -> Result<Self> {
        match conformal_factor(field, ring.omega())? {
            Some(c) => Ok(InducedDerivation {
                derivation: field.extend(),
                factor: Element::constant(field.n(), c),
            }),
            None => Err(Error::NotInDh { defect: format_element(&hamiltonian_defect(field, ring.omega())?) }),
        }
    }

    /// `d′`.
    pub fn koszul(ring: &QuotientRing) -> Self {
        let n = ring.n();
        InducedDerivation { derivation: koszul_d(n), factor: Element::zero(n) }
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    pub fn factor(&self) -> &Element {
        &self.factor
    }

    pub fn parity(&self) -> Parity {
        self.derivation.parity()
    }

    pub fn apply(&self, ring: &QuotientRing, a: &QuotientElement) -> Result<QuotientElement> {
        ring.reduce(&self.derivation.apply(&a.representative)?)
    }

    /// Acts on an arbitrary representative.
    pub fn apply_representative(&self, ring: &QuotientRing, a: &Element) -> Result<QuotientElement> {
        ring.reduce(&self.derivation.apply(a)?)
    }

    pub fn bracket(&self, other: &Self) -> Result<SuperDerivation<Rational>> {
        self.derivation.bracket(&other.derivation)
    }
}

/// The generators `x_1..x_n, ξ_1..ξ_n` of `A′`.
pub fn generators(n: usize) -> Vec<Element> {
    (0..n).map(|i| Element::x(n, i)).chain((0..n).map(|i| Element::xi(n, i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::SuperpointField;
    use crate::scalar::Scalar;

    fn ring(n: usize) -> QuotientRing {
        QuotientRing::new(QuadraticForm::standard(n)).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let n = 3;
        let r = ring(n);
        assert!(r.reduce(r.polynomial()).unwrap().is_zero());
        let a = &Element::x(n, 2).pow(2) * &Element::xi(n, 0);
        let expected = -(&(&Element::x(n, 0).pow(2) + &Element::x(n, 1).pow(2)) * &Element::xi(n, 0));
        assert_eq!(r.reduce(&a).unwrap().representative(), &expected);
        assert_eq!(r.rewrite_once(&a), expected);
        assert_eq!(r.reduce(&Element::x(n, 0)).unwrap().representative(), &Element::x(n, 0));
    }

    #[test]
    fn division_is_exact_and_idempotent() {
        let n = 3;
        let r = ring(n);
        let a = &(&Element::x(n, 2).pow(5) * &Element::xi(n, 1)) + &(&Element::x(n, 0) * &Element::x(n, 2).pow(3));
        let div = r.divide(&a).unwrap();
        assert!(r.is_normal(&div.remainder));
        assert_eq!(&(&div.quotient * r.polynomial()) + &div.remainder, a);
        let diff = &a - &div.remainder;
        assert_eq!(r.divide_exactly(&diff), Some(div.quotient.clone()));
        assert_eq!(r.reduce(&div.remainder).unwrap().representative(), &div.remainder);
        assert!(r.divide_exactly(&Element::x(n, 0)).is_none());
    }

    #[test]
    fn nondiagonal_forms() {
        let g = crate::linalg::ExactMatrix::from_integers(&[vec![0, 1], vec![1, 0]]).unwrap();
        let hyperbolic = QuadraticForm::new(g).unwrap();
        assert_eq!(QuotientRing::new(hyperbolic).unwrap_err(), Error::NoLeadingSquare(2));
        let m = crate::linalg::ExactMatrix::from_integers(&[vec![1, 1], vec![1, 3]]).unwrap();
        let r = QuotientRing::new(QuadraticForm::new(m).unwrap()).unwrap();
        let a = Element::x(2, 1).pow(4);
        let div = r.divide(&a).unwrap();
        assert!(r.is_normal(&div.remainder));
        assert_eq!(&(&div.quotient * r.polynomial()) + &div.remainder, a);
    }

    #[test]
    fn induced_koszul() {
        let n = 3;
        let r = ring(n);
        let d = InducedDerivation::koszul(&r);
        let xi = r.reduce(&Element::xi(n, 0)).unwrap();
        assert_eq!(d.apply(&r, &xi).unwrap().representative(), &Element::x(n, 0));
    }

    #[test]
    fn rotation_is_well_defined() {
        let n = 3;
        let r = ring(n);
        let rot = SuperpointField::monomial(n, 0b001, 1).try_sub(&SuperpointField::monomial(n, 0b010, 0)).unwrap();
        let ind = InducedDerivation::from_field(&rot, &r).unwrap();
        let a = &Element::xi(n, 0) * &Element::x(n, 1);
        let shifted = &a + &(r.polynomial() * &Element::xi(n, 2));
        assert_eq!(ind.apply_representative(&r, &a).unwrap(), ind.apply_representative(&r, &shifted).unwrap());
    }

    #[test]
    fn rejects_fields_outside_dh() {
        let n = 2;
        let r = ring(n);
        let err = InducedDerivation::from_field(&SuperpointField::monomial(n, 0b01, 0), &r).unwrap_err();
        assert_eq!(err, Error::NotInDh { defect: "2·x1^2".into() });
        let e = InducedDerivation::from_field(&SuperpointField::euler(n), &r).unwrap();
        assert_eq!(e.factor(), &Element::constant(n, Rational::from_i64(2)));
        let bad = Derivation::from_images(vec![Element::zero(n); n], vec![Element::x(n, 0), Element::zero(n)]).unwrap();
        assert!(matches!(InducedDerivation::new(bad, &r), Err(Error::IdealNotPreserved { .. })));
    }
}
