//! Monomials `x^a ξ_I` of the free supercommutative algebra.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 32;

/// Parity of a homogeneous element, derivation or degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_degree(degree: i64) -> Self {
        if degree.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// `true` iff both are odd, i.e. swapping them costs a sign.
    pub fn both_odd(self, other: Parity) -> bool {
        self == Parity::Odd && other == Parity::Odd
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Degree in the even variables and in the odd variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub x_degree: u32,
    pub xi_degree: u32,
}

impl Bidegree {
    pub fn new(x_degree: u32, xi_degree: u32) -> Self {
        Bidegree { x_degree, xi_degree }
    }

    pub fn parity(self) -> Parity {
        Parity::of_degree(self.xi_degree as i64)
    }
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;

    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.x_degree + rhs.x_degree, self.xi_degree + rhs.xi_degree)
    }
}

/// `x_1^{a_1} … x_n^{a_n} ξ_{i_1} … ξ_{i_k}` with `i_1 < … < i_k`.
///
/// Indices are zero-based internally. The odd part is a bitmask, which is
/// the canonical (sorted, repetition-free) index list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    even: Vec<u32>,
    odd: u32,
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        Err(Error::UnsupportedDimension(n))
    } else {
        Ok(())
    }
}

/// Iterator over the set bits of a mask, lowest first.
#[derive(Clone)]
pub struct Bits(u32);

impl Iterator for Bits {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

pub fn bits(mask: u32) -> Bits {
    Bits(mask)
}

/// Number of transpositions needed to sort the concatenation `left ++ right`.
pub fn merge_inversions(left: u32, right: u32) -> u32 {
    bits(right)
        .map(|b| {
            if b + 1 >= 32 {
                0
            } else {
                (left >> (b + 1)).count_ones()
            }
        })
        .sum()
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { even: vec![0; n], odd: 0 }
    }

    pub fn x(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.even[i] = 1;
        m
    }

    pub fn xi(n: usize, i: usize) -> Self {
        Monomial { even: vec![0; n], odd: 1 << i }
    }

    /// Builds from an exponent vector and a canonical odd mask.
    pub fn from_parts(even: Vec<u32>, odd: u32) -> Self {
        debug_assert!(even.len() >= 32 || odd >> even.len() == 0);
        Monomial { even, odd }
    }

    /// Builds from exponents and an arbitrary list of odd indices.
    ///
    /// Returns the sign of the sorting permutation together with the
    /// canonical monomial, or `None` if an odd index repeats.
    pub fn from_odd_list(even: Vec<u32>, odd: &[usize]) -> Result<Option<(bool, Self)>> {
        let n = even.len();
        check_dim(n)?;
        let mut mask = 0u32;
        let mut negative = false;
        for &i in odd {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i + 1, n });
            }
            if mask & (1 << i) != 0 {
                return Ok(None);
            }
            negative ^= merge_inversions(mask, 1 << i) % 2 == 1;
            mask |= 1 << i;
        }
        Ok(Some((negative, Monomial { even, odd: mask })))
    }

    pub fn n(&self) -> usize {
        self.even.len()
    }

    pub fn even(&self) -> &[u32] {
        &self.even
    }

    pub fn odd_mask(&self) -> u32 {
        self.odd
    }

    /// Zero-based odd indices in increasing order.
    pub fn odd_indices(&self) -> Bits {
        bits(self.odd)
    }

    pub fn x_degree(&self) -> u32 {
        self.even.iter().sum()
    }

    pub fn xi_degree(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn total_degree(&self) -> u32 {
        self.x_degree() + self.xi_degree()
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.x_degree(), self.xi_degree())
    }

    pub fn parity(&self) -> Parity {
        Parity::of_degree(self.xi_degree() as i64)
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.even.iter().all(|&a| a == 0)
    }

    pub fn is_even_only(&self) -> bool {
        self.odd == 0
    }

    /// Product of monomials; `None` when an odd generator repeats,
    /// otherwise `(negative, product)`.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let negative = merge_inversions(self.odd, other.odd) % 2 == 1;
        let even = self.even.iter().zip(&other.even).map(|(a, b)| a + b).collect();
        Some((negative, Monomial { even, odd: self.odd | other.odd }))
    }

    /// The even part `x^a` alone.
    pub fn even_part(&self) -> Monomial {
        Monomial { even: self.even.clone(), odd: 0 }
    }

    /// The odd part `ξ_I` alone.
    pub fn odd_part(&self) -> Monomial {
        Monomial { even: vec![0; self.n()], odd: self.odd }
    }

    /// Divides `x^a` by `x^b` when `b ≤ a` componentwise (odd parts must agree with `b` odd-free).
    pub fn div_even(&self, other: &Monomial) -> Option<Monomial> {
        if other.odd != 0 {
            return None;
        }
        let mut even = Vec::with_capacity(self.n());
        for (a, b) in self.even.iter().zip(&other.even) {
            even.push(a.checked_sub(*b)?);
        }
        Some(Monomial { even, odd: self.odd })
    }

    pub(crate) fn with_exponent(&self, i: usize, exponent: u32) -> Monomial {
        let mut m = self.clone();
        m.even[i] = exponent;
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.even.cmp(&other.even))
            .then_with(|| self.odd_indices().cmp(other.odd_indices()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorting_sign() {
        let (neg, m) = Monomial::from_odd_list(vec![0, 0, 0], &[2, 0]).unwrap().unwrap();
        assert!(neg);
        assert_eq!(m.odd_indices().collect::<Vec<_>>(), vec![0, 2]);
        let (neg, _) = Monomial::from_odd_list(vec![0, 0, 0], &[2, 1, 0]).unwrap().unwrap();
        assert!(neg);
        let (neg, _) = Monomial::from_odd_list(vec![0, 0, 0], &[1, 2, 0]).unwrap().unwrap();
        assert!(!neg);
        assert!(Monomial::from_odd_list(vec![0, 0], &[1, 1]).unwrap().is_none());
        assert!(Monomial::from_odd_list(vec![0, 0], &[2]).is_err());
    }

    #[test]
    fn product_sign_matches_list_sort() {
        let n = 5;
        for a in 0u32..32 {
            for b in 0u32..32 {
                let ma = Monomial::from_parts(vec![0; n], a);
                let mb = Monomial::from_parts(vec![0; n], b);
                let list: Vec<usize> = bits(a).chain(bits(b)).collect();
                let expected = Monomial::from_odd_list(vec![0; n], &list).unwrap();
                assert_eq!(ma.mul(&mb), expected);
            }
        }
    }

    #[test]
    fn graded_lex_order() {
        let one = Monomial::one(2);
        let x1 = Monomial::x(2, 0);
        let x2 = Monomial::x(2, 1);
        let xi1 = Monomial::xi(2, 0);
        let xi12 = Monomial::from_parts(vec![0, 0], 0b11);
        assert!(one < x1);
        // same total degree: even exponents compared first
        assert!(xi1 < x2);
        assert!(x2 < x1);
        assert!(x1 < xi12);
    }
}
