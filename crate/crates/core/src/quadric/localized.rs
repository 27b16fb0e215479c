//! Fractions `f/g` with `g` a nonzero polynomial in the even variables:
//! the localization `B` of `A` and the stalks of the structure sheaves on
//! projective space.

use crate::derivation::{koszul_d, SuperDerivation};
use crate::element::SuperElement;
use crate::error::{Error, Result};
use crate::monomial::{Monomial, Parity};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct LocalizedElement<S> {
    numerator: SuperElement<S>,
    denominator: SuperElement<S>,
}

impl<S: Scalar> PartialEq for LocalizedElement<S> {
    fn eq(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }
}

impl<S: Scalar> LocalizedElement<S> {
    /// Builds `numerator / denominator`, cancelling a common monomial factor
    /// and making the leading coefficient of the denominator 1.
    pub fn new(numerator: SuperElement<S>, denominator: SuperElement<S>) -> Result<Self> {
        if denominator.is_zero() || !denominator.is_even_only() {
            return Err(Error::BadDenominator);
        }
        if numerator.n() != denominator.n() {
            return Err(Error::DimensionMismatch { left: numerator.n(), right: denominator.n() });
        }
        Ok(Self::normalized(numerator, denominator))
    }

    fn normalized(numerator: SuperElement<S>, denominator: SuperElement<S>) -> Self {
        let n = numerator.n();
        if numerator.is_zero() {
            return LocalizedElement { numerator, denominator: SuperElement::one(n) };
        }
        let mut common = vec![u32::MAX; n];
        for (m, _) in numerator.terms().chain(denominator.terms()) {
            for (c, &a) in common.iter_mut().zip(m.even()) {
                *c = (*c).min(a);
            }
        }
        let common = Monomial::from_parts(common, 0);
        let divide = |e: &SuperElement<S>| {
            SuperElement::from_terms(n, e.terms().map(|(m, c)| (m.div_even(&common).expect("common factor"), c.clone())))
                .expect("same ambient dimension")
        };
        let (mut numerator, mut denominator) = (divide(&numerator), divide(&denominator));
        let (_, lead) = denominator.terms().last().expect("nonzero denominator");
        let inv = S::one() / lead.clone();
        if inv != S::one() {
            numerator = numerator.scale(&inv);
            denominator = denominator.scale(&inv);
        }
        LocalizedElement { numerator, denominator }
    }

    pub fn from_element(a: SuperElement<S>) -> Self {
        let n = a.n();
        LocalizedElement { numerator: a, denominator: SuperElement::one(n) }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_element(SuperElement::zero(n))
    }

    /// `x_j / x_i`.
    pub fn coordinate_ratio(n: usize, j: usize, i: usize) -> Self {
        Self::normalized(SuperElement::x(n, j), SuperElement::x(n, i))
    }

    pub fn n(&self) -> usize {
        self.numerator.n()
    }

    pub fn numerator(&self) -> &SuperElement<S> {
        &self.numerator
    }

    pub fn denominator(&self) -> &SuperElement<S> {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let num = self.numerator.try_mul(&other.denominator)?.try_add(&other.numerator.try_mul(&self.denominator)?)?;
        Self::new(num, self.denominator.try_mul(&other.denominator)?)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    /// The denominators are even, so they commute past everything.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.numerator.try_mul(&other.numerator)?,
            self.denominator.try_mul(&other.denominator)?,
        )
    }

    pub fn scale(&self, c: &S) -> Self {
        LocalizedElement { numerator: self.numerator.scale(c), denominator: self.denominator.clone() }
    }

    /// Every numerator term has the x-degree of the (x-homogeneous)
    /// denominator, i.e. the coefficients are functions on projective space.
    pub fn is_degree_zero(&self) -> bool {
        let Some(dd) = self.denominator.x_degree() else {
            return false;
        };
        self.numerator.terms().all(|(m, _)| m.x_degree() == dd)
    }

    /// `Some(m)` when the denominator is `x_{i+1}^m` (up to the normalised unit).
    pub fn denominator_power_of(&self, i: usize) -> Option<u32> {
        let mut terms = self.denominator.terms();
        match (terms.next(), terms.next()) {
            (Some((m, _)), None) => {
                let a = m.even()[i];
                m.even().iter().enumerate().all(|(j, &e)| j == i || e == 0).then_some(a)
            }
            _ => None,
        }
    }

    /// The value at a point of `V`, or `None` where the denominator vanishes.
    pub fn evaluate(&self, point: &[S]) -> Result<Option<SuperElement<S>>> {
        let den = self.denominator.evaluate_even(point)?;
        let den = den.coefficient(&Monomial::one(self.n()));
        if den.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.numerator.evaluate_even(point)?.scale(&(S::one() / den))))
    }

    /// `γ(f/g) = (g γ(f) − (−1)^{|γ||f|} f γ(g)) / g²`, term by parity of `f`.
    pub fn apply_derivation(&self, gamma: &SuperDerivation<S>) -> Result<Self> {
        let g = &self.denominator;
        let gamma_g = gamma.apply(g)?;
        let (even, odd) = self.numerator.parity_split();
        let mut num = SuperElement::zero(self.n());
        for (part, parity) in [(even, Parity::Even), (odd, Parity::Odd)] {
            if part.is_zero() {
                continue;
            }
            let first = g.try_mul(&gamma.apply(&part)?)?;
            let second = part.try_mul(&gamma_g)?;
            num = if gamma.parity().both_odd(parity) {
                num.try_add(&first)?.try_add(&second)?
            } else {
                num.try_add(&first)?.try_sub(&second)?
            };
        }
        Self::new(num, g.try_mul(g)?)
    }

    /// `d(f/g) = d(f)/g`, since `d` kills the even variables.
    pub fn d(&self) -> Self {
        let d = koszul_d::<S>(self.n());
        let num = d.apply(&self.numerator).expect("same ambient dimension");
        Self::normalized(num, self.denominator.clone())
    }

    /// Rewrites over the denominator `x_{i+1}^power` and returns the numerator,
    /// provided the denominator divides it.
    pub fn numerator_over_power(&self, i: usize, power: u32) -> Option<SuperElement<S>> {
        let own = self.denominator_power_of(i)?;
        let extra = power.checked_sub(own)?;
        let n = self.n();
        let factor = Monomial::x(n, i).even().iter().map(|&e| e * extra).collect();
        let lead = self.denominator.terms().next().map(|(_, c)| c.clone())?;
        let mul = SuperElement::monomial(n, Monomial::from_parts(factor, 0), S::one() / lead);
        Some(&self.numerator * &mul)
    }
}

/// `d(f/g) = d(f)/g`.
pub fn d_localized<S: Scalar>(u: &LocalizedElement<S>) -> LocalizedElement<S> {
    u.d()
}

/// A point of `P(V)` in homogeneous coordinates, scaled so that its first
/// nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint<S> {
    coords: Vec<S>,
}

impl<S: Scalar> ProjectivePoint<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        let Some(first) = coords.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::Shape("projective point with all coordinates zero".into()));
        };
        Ok(ProjectivePoint { coords: coords.into_iter().map(|c| c / first.clone()).collect() })
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn in_chart(&self, i: usize) -> bool {
        !self.coords[i].is_zero()
    }
}

/// Where a localized element sits relative to the stalks at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StalkMembership {
    /// In the stalk of the exterior algebra of the annihilator bundle.
    Structure,
    /// Regular at the point but not annihilated by `d`.
    AmbientOnly,
    /// Not regular at the point (or not of degree zero).
    Outside,
}

pub fn stalk_membership<S: Scalar>(u: &LocalizedElement<S>, z: &ProjectivePoint<S>) -> Result<StalkMembership> {
    if !u.is_degree_zero() {
        return Ok(StalkMembership::Outside);
    }
    let den = u.denominator().evaluate_even(z.coords())?;
    if den.is_zero() {
        return Ok(StalkMembership::Outside);
    }
    Ok(if u.d().is_zero() { StalkMembership::Structure } else { StalkMembership::AmbientOnly })
}

/// `d_x = Σ x_i ∂/∂ξ_i` for a fixed numeric point `x`.
pub fn koszul_at<S: Scalar>(point: &[S]) -> SuperDerivation<S> {
    let n = point.len();
    let images = point.iter().map(|p| SuperElement::constant(n, p.clone())).collect();
    SuperDerivation::new(n, Parity::Odd, images, vec![SuperElement::zero(n); n]).expect("constants are even")
}
