//! Superderivations of `A`, the Koszul differential, and the extension of
//! vector fields on the superpoint to derivations of `A` commuting with `d`.

use crate::element::SuperElement;
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::monomial::{check_dim, Monomial, Parity};
use crate::scalar::Scalar;
use crate::Rational;

/// A derivation of `A` of definite parity, stored by its values on the
/// generators `ξ_1..ξ_n` and `x_1..x_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperDerivation<S> {
    n: usize,
    parity: Parity,
    images_xi: Vec<SuperElement<S>>,
    images_x: Vec<SuperElement<S>>,
}

fn check_images<S: Scalar>(n: usize, images: &[SuperElement<S>]) -> Result<()> {
    if images.len() != n {
        return Err(Error::DimensionMismatch { left: n, right: images.len() });
    }
    if let Some(bad) = images.iter().find(|e| e.n() != n) {
        return Err(Error::DimensionMismatch { left: n, right: bad.n() });
    }
    Ok(())
}

impl<S: Scalar> SuperDerivation<S> {
    /// Validates that every image has the parity forced by `parity`.
    pub fn new(
        n: usize,
        parity: Parity,
        images_xi: Vec<SuperElement<S>>,
        images_x: Vec<SuperElement<S>>,
    ) -> Result<Self> {
        check_dim(n)?;
        check_images(n, &images_xi)?;
        check_images(n, &images_x)?;
        let ok_xi = images_xi.iter().all(|e| e.is_zero() || e.parity() == Some(parity + Parity::Odd));
        let ok_x = images_x.iter().all(|e| e.is_zero() || e.parity() == Some(parity));
        if !(ok_xi && ok_x) {
            return Err(Error::MixedParity);
        }
        Ok(SuperDerivation { n, parity, images_xi, images_x })
    }

    /// Infers the parity from the images; the zero derivation is taken to be even.
    pub fn from_images(images_xi: Vec<SuperElement<S>>, images_x: Vec<SuperElement<S>>) -> Result<Self> {
        let n = images_xi.len();
        let from_xi = images_xi.iter().find_map(|e| e.parity().map(|p| p + Parity::Odd));
        let from_x = images_x.iter().find_map(SuperElement::parity);
        let parity = from_xi.or(from_x).unwrap_or(Parity::Even);
        Self::new(n, parity, images_xi, images_x)
    }

    pub fn zero(n: usize, parity: Parity) -> Self {
        SuperDerivation {
            n,
            parity,
            images_xi: vec![SuperElement::zero(n); n],
            images_x: vec![SuperElement::zero(n); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn images_xi(&self) -> &[SuperElement<S>] {
        &self.images_xi
    }

    pub fn images_x(&self) -> &[SuperElement<S>] {
        &self.images_x
    }

    pub fn is_zero(&self) -> bool {
        self.images_xi.iter().chain(&self.images_x).all(SuperElement::is_zero)
    }

    /// The shift in ξ-degree, when all images agree on one. `None` for the
    /// zero derivation and for sums of different degrees.
    pub fn z_degree(&self) -> Option<i32> {
        let shifts = self.images_xi.iter().map(|e| e.xi_degree().map(|d| d as i32 - 1));
        let shifts = shifts.chain(self.images_x.iter().map(|e| e.xi_degree().map(|d| d as i32)));
        let mut k = None;
        for (s, e) in shifts.zip(self.images_xi.iter().chain(&self.images_x)) {
            if e.is_zero() {
                continue;
            }
            let s = s?;
            match k {
                None => k = Some(s),
                Some(prev) if prev != s => return None,
                _ => {}
            }
        }
        k
    }

    /// `δ(x^a ξ_I)` by the graded Leibniz rule.
    fn apply_monomial(&self, m: &Monomial, c: &S) -> SuperElement<S> {
        let n = self.n;
        let mut out = SuperElement::zero(n);
        let odd_part = SuperElement::monomial(n, m.odd_part(), c.clone());
        for (j, &a) in m.even().iter().enumerate() {
            if a == 0 || self.images_x[j].is_zero() {
                continue;
            }
            let lowered = SuperElement::monomial(n, m.even_part().with_exponent(j, a - 1), S::from_i64(a as i64));
            out = &out + &(&(&lowered * &self.images_x[j]) * &odd_part);
        }
        let even_part = SuperElement::monomial(n, m.even_part(), c.clone());
        let indices: Vec<usize> = m.odd_indices().collect();
        for (t, &i) in indices.iter().enumerate() {
            if self.images_xi[i].is_zero() {
                continue;
            }
            let before: u32 = indices[..t].iter().map(|&b| 1u32 << b).sum();
            let after: u32 = indices[t + 1..].iter().map(|&b| 1u32 << b).sum();
            let left = SuperElement::monomial(n, Monomial::from_parts(vec![0; n], before), S::one());
            let right = SuperElement::monomial(n, Monomial::from_parts(vec![0; n], after), S::one());
            let mut term = &(&(&even_part * &left) * &self.images_xi[i]) * &right;
            if self.parity == Parity::Odd && t % 2 == 1 {
                term = -term;
            }
            out = &out + &term;
        }
        out
    }

    pub fn apply(&self, a: &SuperElement<S>) -> Result<SuperElement<S>> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: a.n() });
        }
        let mut out = SuperElement::zero(self.n);
        for (m, c) in a.terms() {
            out = &out + &self.apply_monomial(m, c);
        }
        Ok(out)
    }

    /// `[δ₁, δ₂] = δ₁δ₂ − (−1)^{p₁p₂} δ₂δ₁`, evaluated on generators.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let swap_sign = self.parity.both_odd(other.parity);
        let on = |g: &SuperElement<S>| -> Result<SuperElement<S>> {
            let ab = self.apply(&other.apply(g)?)?;
            let ba = other.apply(&self.apply(g)?)?;
            Ok(if swap_sign { &ab + &ba } else { &ab - &ba })
        };
        let n = self.n;
        let images_xi = (0..n).map(|i| on(&SuperElement::xi(n, i))).collect::<Result<_>>()?;
        let images_x = (0..n).map(|i| on(&SuperElement::x(n, i))).collect::<Result<_>>()?;
        Self::new(n, self.parity + other.parity, images_xi, images_x)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        if self.parity != other.parity {
            return Err(Error::MixedParity);
        }
        let add = |a: &[SuperElement<S>], b: &[SuperElement<S>]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(SuperDerivation {
            n: self.n,
            parity: self.parity,
            images_xi: add(&self.images_xi, &other.images_xi),
            images_x: add(&self.images_x, &other.images_x),
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        SuperDerivation {
            n: self.n,
            parity: self.parity,
            images_xi: self.images_xi.iter().map(|e| e.scale(c)).collect(),
            images_x: self.images_x.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// True when every image is free of even variables and the x-images vanish,
    /// i.e. the derivation comes from `Der Λ`.
    pub fn is_superpoint_field(&self) -> bool {
        self.images_x.iter().all(SuperElement::is_zero) && self.images_xi.iter().all(SuperElement::is_odd_only)
    }
}

/// The Koszul differential `d = Σ x_i ∂/∂ξ_i`.
pub fn koszul_d<S: Scalar>(n: usize) -> SuperDerivation<S> {
    SuperDerivation {
        n,
        parity: Parity::Odd,
        images_xi: (0..n).map(|i| SuperElement::x(n, i)).collect(),
        images_x: vec![SuperElement::zero(n); n],
    }
}

/// The Euler field `E = Σ ξ_i ∂/∂ξ_i` as a derivation of `Λ` (zero on the x's).
pub fn euler<S: Scalar>(n: usize) -> SuperDerivation<S> {
    SuperpointField::euler(n).as_derivation()
}

/// A homogeneous vector field on the superpoint: `δ = Σ h_i ∂/∂ξ_i` with
/// every `h_i ∈ Λ^{k+1}[ξ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpointField<S> {
    n: usize,
    degree: i32,
    images: Vec<SuperElement<S>>,
}

impl<S: Scalar> SuperpointField<S> {
    pub fn new(n: usize, degree: i32, images: Vec<SuperElement<S>>) -> Result<Self> {
        check_dim(n)?;
        check_images(n, &images)?;
        if degree < -1 {
            // layers below -1 are zero
            if images.iter().any(|h| !h.is_zero()) {
                return Err(Error::Inhomogeneous(format!("degree {degree} < -1")));
            }
            return Ok(SuperpointField { n, degree, images });
        }
        let want = (degree + 1) as u32;
        for h in &images {
            if !h.is_odd_only() {
                return Err(Error::Inhomogeneous("image involves even variables".into()));
            }
            if !h.is_zero() && h.xi_degree() != Some(want) {
                return Err(Error::Inhomogeneous(format!("image is not of odd degree {want}")));
            }
        }
        Ok(SuperpointField { n, degree, images })
    }

    pub fn zero(n: usize, degree: i32) -> Self {
        SuperpointField { n, degree, images: vec![SuperElement::zero(n); n] }
    }

    /// `∂/∂ξ_{i+1}`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut f = Self::zero(n, -1);
        f.images[i] = SuperElement::one(n);
        f
    }

    /// `ξ_J ∂/∂ξ_{i+1}` where `odd_mask` encodes `J`.
    pub fn monomial(n: usize, odd_mask: u32, i: usize) -> Self {
        let mut f = Self::zero(n, odd_mask.count_ones() as i32 - 1);
        f.images[i] = SuperElement::monomial(n, Monomial::from_parts(vec![0; n], odd_mask), S::one());
        f
    }

    pub fn euler(n: usize) -> Self {
        SuperpointField { n, degree: 0, images: (0..n).map(|i| SuperElement::xi(n, i)).collect() }
    }

    /// Reads a field off a derivation of `Λ`; fails unless it is homogeneous.
    pub fn from_derivation(delta: &SuperDerivation<S>) -> Result<Self> {
        if !delta.is_superpoint_field() {
            return Err(Error::Inhomogeneous("not a derivation of the exterior algebra".into()));
        }
        match delta.z_degree() {
            Some(k) => Self::new(delta.n, k, delta.images_xi.clone()),
            None if delta.is_zero() => Ok(Self::zero(delta.n, Parity::bit(delta.parity) as i32 - 1)),
            None => Err(Error::Inhomogeneous("mixed Z-degree".into())),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn parity(&self) -> Parity {
        Parity::of_degree(self.degree as i64)
    }

    pub fn images(&self) -> &[SuperElement<S>] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(SuperElement::is_zero)
    }

    /// The field as a derivation of `A` vanishing on the x's (not the extension).
    pub fn as_derivation(&self) -> SuperDerivation<S> {
        SuperDerivation {
            n: self.n,
            parity: self.parity(),
            images_xi: self.images.clone(),
            images_x: vec![SuperElement::zero(self.n); self.n],
        }
    }

    /// The unique derivation `δ̃` of `A` with `δ̃ξ_i = h_i` and `[δ̃, d] = 0`,
    /// namely `δ̃x_i = (−1)^k d(h_i)`.
    pub fn extend(&self) -> SuperDerivation<S> {
        let d = koszul_d::<S>(self.n);
        let images_x = self
            .images
            .iter()
            .map(|h| {
                let dh = d.apply(h).expect("same ambient dimension");
                if self.degree.rem_euclid(2) == 1 {
                    -dh
                } else {
                    dh
                }
            })
            .collect();
        SuperDerivation { n: self.n, parity: self.parity(), images_xi: self.images.clone(), images_x }
    }

    pub fn apply(&self, a: &SuperElement<S>) -> Result<SuperElement<S>> {
        self.as_derivation().apply(a)
    }

    /// Superbracket in `W_n`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let a = self.as_derivation();
        let b = other.as_derivation();
        let swap_sign = a.parity.both_odd(b.parity);
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(h1, h2)| {
                let ab = a.apply(h2)?;
                let ba = b.apply(h1)?;
                Ok(if swap_sign { &ab + &ba } else { &ab - &ba })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.n, self.degree + other.degree, images)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        if self.degree != other.degree {
            return Err(Error::Inhomogeneous(format!("degrees {} and {}", self.degree, other.degree)));
        }
        let images = self.images.iter().zip(&other.images).map(|(a, b)| a + b).collect();
        Ok(SuperpointField { n: self.n, degree: self.degree, images })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        SuperpointField { n: self.n, degree: self.degree, images: self.images.iter().map(|h| h.scale(c)).collect() }
    }

    /// Coefficients against the monomial basis `ξ_J ∂ξ_i` of the layer,
    /// ordered as in [`crate::vectorial::w_basis`].
    pub fn coordinates(&self) -> Vec<S> {
        if self.degree < -1 || self.degree + 1 > self.n as i32 {
            return Vec::new();
        }
        let monos = crate::element::odd_monomials(self.n, (self.degree + 1) as usize);
        let mut out = Vec::with_capacity(monos.len() * self.n);
        for m in &monos {
            for h in &self.images {
                out.push(h.coefficient(m));
            }
        }
        out
    }
}

/// Extends a derivation of `Λ` given as a general [`SuperDerivation`].
///
/// Fails for derivations that touch the x's or are not homogeneous.
pub fn extend<S: Scalar>(delta: &SuperDerivation<S>) -> Result<SuperDerivation<S>> {
    Ok(SuperpointField::from_derivation(delta)?.extend())
}

/// Checks that the condition `[δ̃, d] = 0` with prescribed ξ-images leaves
/// no freedom in the x-images.
///
/// The unknowns are the x-images of a derivation vanishing on every `ξ_i`,
/// ranging over all elements of x-degree at most `max_x_degree` and of the
/// parity matching `degree`. Returns the dimension of the solution space,
/// which is `0` exactly when the extension is unique on that range.
pub fn extension_freedom(n: usize, degree: i32, max_x_degree: u32) -> usize {
    use crate::element::even_exponents;
    let parity = Parity::of_degree(degree as i64);
    let mut unknowns = Vec::new();
    for xd in 0..=max_x_degree {
        for exps in even_exponents(n, xd) {
            for mask in 0u32..(1 << n) {
                if Parity::of_degree(mask.count_ones() as i64) == parity {
                    unknowns.push(Monomial::from_parts(exps.clone(), mask));
                }
            }
        }
    }
    let d = koszul_d::<Rational>(n);
    let mut columns: Vec<Vec<SuperElement<Rational>>> = Vec::new();
    for slot in 0..n {
        for m in &unknowns {
            let mut images_x = vec![SuperElement::zero(n); n];
            images_x[slot] = SuperElement::monomial(n, m.clone(), Rational::from_i64(1));
            let gamma = SuperDerivation::new(n, parity, vec![SuperElement::zero(n); n], images_x)
                .expect("unknowns respect parity");
            let commutator = gamma.bracket(&d).expect("same ambient dimension");
            columns.push(commutator.images_xi.iter().chain(&commutator.images_x).cloned().collect());
        }
    }
    let mut keys: Vec<(usize, Monomial)> = Vec::new();
    for col in &columns {
        for (g, e) in col.iter().enumerate() {
            for (m, _) in e.terms() {
                keys.push((g, m.clone()));
            }
        }
    }
    keys.sort();
    keys.dedup();
    let mut matrix = ExactMatrix::zeros(keys.len(), columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (g, e) in col.iter().enumerate() {
            for (m, c) in e.terms() {
                let i = keys.binary_search(&(g, m.clone())).expect("key collected above");
                matrix.set(i, j, c.clone());
            }
        }
    }
    columns.len() - matrix.rank()
}
