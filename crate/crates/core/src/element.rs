//! Elements of `A = S[x_1..x_n] ⊗ Λ[ξ_1..ξ_n]` with the Koszul sign rule.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::monomial::{check_dim, Bidegree, Monomial, Parity};
use crate::scalar::Scalar;

/// A sparse element of the supercommutative algebra.
///
/// Terms are kept in graded lexicographic order and zero coefficients are
/// never stored, so structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperElement<S> {
    n: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> SuperElement<S> {
    pub fn zero(n: usize) -> Self {
        SuperElement { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: S) -> Self {
        Self::monomial(n, Monomial::one(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, S::one())
    }

    /// The even generator `x_{i+1}`.
    pub fn x(n: usize, i: usize) -> Self {
        Self::monomial(n, Monomial::x(n, i), S::one())
    }

    /// The odd generator `ξ_{i+1}`.
    pub fn xi(n: usize, i: usize) -> Self {
        Self::monomial(n, Monomial::xi(n, i), S::one())
    }

    pub fn monomial(n: usize, m: Monomial, c: S) -> Self {
        debug_assert_eq!(m.n(), n);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SuperElement { n, terms }
    }

    /// Product of odd generators in the given order, e.g. `[1, 0]` is `ξ_2 ξ_1 = -ξ_1 ξ_2`.
    pub fn xi_product(n: usize, indices: &[usize]) -> Result<Self> {
        Ok(match Monomial::from_odd_list(vec![0; n], indices)? {
            Some((neg, m)) => Self::monomial(n, m, if neg { -S::one() } else { S::one() }),
            None => Self::zero(n),
        })
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        check_dim(n)?;
        let mut out = Self::zero(n);
        for (m, c) in terms {
            if m.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: m.n() });
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, S)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch { left: self.n, right: other.n })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        SuperElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..exponent {
            out = &out * self;
        }
        out
    }

    /// Terms of exactly the given bidegree.
    pub fn homogeneous_component(&self, degree: Bidegree) -> Self {
        self.filter(|m| m.bidegree() == degree)
    }

    /// Terms of the given degree in the odd variables.
    pub fn xi_component(&self, xi_degree: u32) -> Self {
        self.filter(|m| m.xi_degree() == xi_degree)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        SuperElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// All bidegrees carried by nonzero terms, ascending.
    pub fn bidegrees(&self) -> Vec<Bidegree> {
        let mut ds: Vec<Bidegree> = self.terms.keys().map(Monomial::bidegree).collect();
        ds.sort();
        ds.dedup();
        ds
    }

    /// The common bidegree, if the element is bihomogeneous and nonzero.
    pub fn bidegree(&self) -> Option<Bidegree> {
        match self.bidegrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    /// The common odd degree, if nonzero and homogeneous in ξ.
    pub fn xi_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::xi_degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// The common x-degree, if nonzero and homogeneous in x.
    pub fn x_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::x_degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// `Some(parity)` for a nonzero element of definite parity.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Splits into even and odd parts.
    pub fn parity_split(&self) -> (Self, Self) {
        (
            self.filter(|m| m.parity() == Parity::Even),
            self.filter(|m| m.parity() == Parity::Odd),
        )
    }

    /// True when no term involves an even variable.
    pub fn is_odd_only(&self) -> bool {
        self.terms.keys().all(|m| m.x_degree() == 0)
    }

    /// True when no term involves an odd variable.
    pub fn is_even_only(&self) -> bool {
        self.terms.keys().all(Monomial::is_even_only)
    }

    /// Substitutes the point `p` for `x_1..x_n`; the result lies in `Λ[ξ]`.
    pub fn evaluate_even(&self, point: &[S]) -> Result<Self> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: point.len() });
        }
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut value = c.clone();
            for (p, &a) in point.iter().zip(m.even()) {
                for _ in 0..a {
                    value = value * p.clone();
                }
            }
            out.add_term(m.odd_part(), value);
        }
        Ok(out)
    }

    /// The left derivative `∂/∂ξ_{j+1}`.
    pub fn odd_partial(&self, j: usize) -> Self {
        let mut out = Self::zero(self.n);
        let bit = 1u32 << j;
        for (m, c) in &self.terms {
            if m.odd_mask() & bit == 0 {
                continue;
            }
            let before = (m.odd_mask() & (bit - 1)).count_ones();
            let reduced = Monomial::from_parts(m.even().to_vec(), m.odd_mask() & !bit);
            out.add_term(reduced, if before % 2 == 1 { -c.clone() } else { c.clone() });
        }
        out
    }

    /// The ordinary derivative `∂/∂x_{j+1}`.
    pub fn even_partial(&self, j: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let a = m.even()[j];
            if a == 0 {
                continue;
            }
            out.add_term(m.with_exponent(j, a - 1), c.clone() * S::from_i64(a as i64));
        }
        out
    }

    /// Applies the algebra endomorphism fixing every `x_i` and sending
    /// `ξ_i ↦ images[i]` (each image must be odd).
    pub fn substitute_odd(&self, images: &[SuperElement<S>]) -> Result<Self> {
        if images.len() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: images.len() });
        }
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut term = Self::monomial(self.n, m.even_part(), c.clone());
            for i in m.odd_indices() {
                term = term.try_mul(&images[i])?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Maps every coefficient through `f`, dropping zeros.
    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SuperElement<T> {
        let mut out = SuperElement::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl<S: Scalar> Add for &SuperElement<S> {
    type Output = SuperElement<S>;

    /// Panics on dimension mismatch; use [`SuperElement::try_add`] to recover.
    fn add(self, rhs: Self) -> SuperElement<S> {
        self.try_add(rhs).expect("adding elements of different ambient dimension")
    }
}

impl<S: Scalar> Sub for &SuperElement<S> {
    type Output = SuperElement<S>;

    fn sub(self, rhs: Self) -> SuperElement<S> {
        self.try_sub(rhs).expect("subtracting elements of different ambient dimension")
    }
}

impl<S: Scalar> Mul for &SuperElement<S> {
    type Output = SuperElement<S>;

    fn mul(self, rhs: Self) -> SuperElement<S> {
        self.try_mul(rhs).expect("multiplying elements of different ambient dimension")
    }
}

impl<S: Scalar> Neg for &SuperElement<S> {
    type Output = SuperElement<S>;

    fn neg(self) -> SuperElement<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Add for SuperElement<S> {
    type Output = SuperElement<S>;

    fn add(self, rhs: Self) -> SuperElement<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for SuperElement<S> {
    type Output = SuperElement<S>;

    fn sub(self, rhs: Self) -> SuperElement<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul for SuperElement<S> {
    type Output = SuperElement<S>;

    fn mul(self, rhs: Self) -> SuperElement<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for SuperElement<S> {
    type Output = SuperElement<S>;

    fn neg(self) -> SuperElement<S> {
        -&self
    }
}

/// All odd monomials `ξ_I` with `|I| = degree`, in increasing lexicographic order of `I`.
pub fn odd_monomials(n: usize, degree: usize) -> Vec<Monomial> {
    let mut masks: Vec<u32> = (0u32..(1u32 << n)).filter(|m| m.count_ones() as usize == degree).collect();
    masks.sort_by(|a, b| crate::monomial::bits(*a).cmp(crate::monomial::bits(*b)));
    masks.into_iter().map(|mask| Monomial::from_parts(vec![0; n], mask)).collect()
}

/// All exponent vectors of total degree `degree` in `n` variables, ascending.
pub fn even_exponents(n: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in 0..=left {
            prefix.push(a);
            rec(n, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, degree, &mut Vec::new(), &mut out);
    out
}
