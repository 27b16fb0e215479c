//! The affine chart `U_i = {x_i ≠ 0}` of `P(V)`, the frame `η_j` of the
//! annihilator bundle over it, and the splitting of a chart derivation into
//! its action on frame sections and on functions.

use std::collections::BTreeMap;

use crate::derivation::SuperDerivation;
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::monomial::{bits, Monomial};
use crate::quadric::localized::{koszul_at, LocalizedElement};
use crate::{Element, Rational};

type Local = LocalizedElement<Rational>;

/// `η_j = ξ_j − (x_j/x_i) ξ_i` on chart `i`, for `j ≠ i`.
pub fn frame_section(n: usize, chart: usize, j: usize) -> Result<Local> {
    if chart >= n || j >= n {
        return Err(Error::IndexOutOfRange { index: chart.max(j), n });
    }
    if chart == j {
        return Err(Error::Chart { chart, msg: format!("no frame section η{} on its own chart", j + 1) });
    }
    let num = &(&Element::x(n, chart) * &Element::xi(n, j)) - &(&Element::x(n, j) * &Element::xi(n, chart));
    Local::new(num, Element::x(n, chart))
}

pub fn frame(n: usize, chart: usize) -> Result<Vec<Local>> {
    (0..n).filter(|&j| j != chart).map(|j| frame_section(n, chart, j)).collect()
}

/// The ratios `x_j/x_i`, `j ≠ i`, generating the functions on the chart.
pub fn chart_functions(n: usize, chart: usize) -> Vec<Local> {
    (0..n).filter(|&j| j != chart).map(|j| Local::coordinate_ratio(n, j, chart)).collect()
}

/// A chart element is of degree zero with denominator a power of `x_i`.
pub fn in_chart_algebra(u: &Local, chart: usize) -> bool {
    u.is_zero() || (u.is_degree_zero() && u.denominator_power_of(chart).is_some())
}

/// An element of `Λ(E)` over the chart: a polynomial in the `η_j` with
/// coefficients that are functions on the chart. Keys are masks over the
/// ambient indices and never contain the chart index.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameExpansion {
    pub chart: usize,
    pub coefficients: BTreeMap<u32, Local>,
}

impl FrameExpansion {
    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// The distinct η-degrees present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.coefficients.keys().map(|m| m.count_ones()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Reassembles `Σ c_J η_J` as a localized element.
    pub fn to_localized(&self, n: usize) -> Result<Local> {
        let mut out = Local::zero(n);
        for (&mask, c) in &self.coefficients {
            let mut term = c.clone();
            for j in bits(mask) {
                term = term.try_mul(&frame_section(n, self.chart, j)?)?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }
}

/// Rewrites `u` in the coordinates `(ξ_i, η_j)` via
/// `ξ_j = η_j + (x_j/x_i) ξ_i`. Fails if `u` involves `ξ_i` there, that is,
/// if `u ∉ Λ(E)` over the chart.
pub fn to_frame(u: &Local, chart: usize) -> Result<FrameExpansion> {
    let n = u.n();
    let power = u
        .denominator_power_of(chart)
        .ok_or_else(|| Error::Chart { chart, msg: "denominator is not a power of the chart coordinate".into() })?;
    // slot j ≠ i holds η_j, slot i holds ξ_i; images carry a hidden factor 1/x_i
    let images: Vec<Element> = (0..n)
        .map(|j| {
            if j == chart {
                &Element::x(n, chart) * &Element::xi(n, chart)
            } else {
                &(&Element::x(n, chart) * &Element::xi(n, j)) + &(&Element::x(n, j) * &Element::xi(n, chart))
            }
        })
        .collect();
    let numerator = u.numerator_over_power(chart, power).expect("denominator checked");
    let mut coefficients: BTreeMap<u32, Local> = BTreeMap::new();
    for r in 0..=n as u32 {
        let part = numerator.xi_component(r);
        if part.is_zero() {
            continue;
        }
        let substituted = part.substitute_odd(&images)?;
        let den = Element::x(n, chart).pow(power + r);
        for (m, c) in substituted.terms() {
            if m.odd_mask() & (1 << chart) != 0 {
                return Err(Error::Chart { chart, msg: "element is not annihilated by d".into() });
            }
            let coeff = Local::new(Element::monomial(n, m.even_part(), c.clone()), den.clone())?;
            let slot = coefficients.entry(m.odd_mask()).or_insert_with(|| Local::zero(n));
            *slot = slot.try_add(&coeff)?;
        }
    }
    coefficients.retain(|_, c| !c.is_zero());
    Ok(FrameExpansion { chart, coefficients })
}

/// A chart derivation split into `γ₀` on the frame and `γ₁` on functions.
#[derive(Debug, Clone)]
pub struct GammaPair {
    pub chart: usize,
    pub degree: i32,
    /// `γ₀(η_j)` for the frame sections in index order.
    pub gamma0: Vec<(usize, FrameExpansion)>,
    /// `γ₁(x_j/x_i)` in index order.
    pub gamma1: Vec<(usize, FrameExpansion)>,
    derivation: SuperDerivation<Rational>,
}

fn chart_image(gamma: &SuperDerivation<Rational>, u: &Local, chart: usize, expect: i64) -> Result<FrameExpansion> {
    let image = u.apply_derivation(gamma)?;
    if !in_chart_algebra(&image, chart) {
        return Err(Error::Chart { chart, msg: "derivation leaves the chart algebra".into() });
    }
    let exp = to_frame(&image, chart)?;
    if expect >= 0 && exp.degrees().iter().any(|&d| d as i64 != expect) {
        return Err(Error::Chart { chart, msg: format!("image is not of frame degree {expect}") });
    }
    Ok(exp)
}

/// Splits the action of `γ`, homogeneous of Z-degree `degree`, on chart `i`.
pub fn gamma_pair(gamma: &SuperDerivation<Rational>, degree: i32, chart: usize) -> Result<GammaPair> {
    let n = gamma.n();
    if chart >= n {
        return Err(Error::IndexOutOfRange { index: chart, n });
    }
    let mut gamma0 = Vec::new();
    let mut gamma1 = Vec::new();
    for j in (0..n).filter(|&j| j != chart) {
        gamma0.push((j, chart_image(gamma, &frame_section(n, chart, j)?, chart, degree as i64 + 1)?));
        gamma1.push((j, chart_image(gamma, &Local::coordinate_ratio(n, j, chart), chart, degree as i64)?));
    }
    Ok(GammaPair { chart, degree, gamma0, gamma1, derivation: gamma.clone() })
}

impl GammaPair {
    pub fn is_zero(&self) -> bool {
        self.gamma0.iter().chain(&self.gamma1).all(|(_, e)| e.is_zero())
    }

    /// Checks `γ₀(φs) = γ₁(φ)s + φγ₀(s)` and `γ₁(φψ) = γ₁(φ)ψ + φγ₁(ψ)` for
    /// all generators `φ, ψ = x_j/x_i` and `s = η_l`, with the left sides
    /// computed by applying the derivation to the products.
    pub fn verify_conditions(&self) -> Result<Vec<String>> {
        let n = self.derivation.n();
        let chart = self.chart;
        let functions = chart_functions(n, chart);
        let sections = frame(n, chart)?;
        let g0: Vec<Local> = self.gamma0.iter().map(|(_, e)| e.to_localized(n)).collect::<Result<_>>()?;
        let g1: Vec<Local> = self.gamma1.iter().map(|(_, e)| e.to_localized(n)).collect::<Result<_>>()?;
        let mut failures = Vec::new();
        for (a, phi) in functions.iter().enumerate() {
            for (b, s) in sections.iter().enumerate() {
                let lhs = phi.try_mul(s)?.apply_derivation(&self.derivation)?;
                let rhs = g1[a].try_mul(s)?.try_add(&phi.try_mul(&g0[b])?)?;
                if lhs != rhs {
                    failures.push(format!("section rule fails for φ#{a}, s#{b}"));
                }
            }
            for (b, psi) in functions.iter().enumerate() {
                let lhs = phi.try_mul(psi)?.apply_derivation(&self.derivation)?;
                let rhs = g1[a].try_mul(psi)?.try_add(&phi.try_mul(&g1[b])?)?;
                if lhs != rhs {
                    failures.push(format!("function rule fails for φ#{a}, ψ#{b}"));
                }
            }
        }
        Ok(failures)
    }
}

/// Outcome of comparing `du = 0` with `d_x u(x) = 0` at sample points.
#[derive(Debug, Clone, Default)]
pub struct PointwiseCheck {
    pub symbolic_closed: bool,
    pub evaluated: usize,
    pub skipped: usize,
    /// Samples where `d_x u(x) ≠ 0`.
    pub nonzero_at: usize,
    /// Samples where `(du)(x) ≠ d_x u(x)`.
    pub identity_failures: usize,
}

impl PointwiseCheck {
    /// The symbolic verdict agrees with the samples and the evaluation
    /// identity held everywhere.
    pub fn agrees(&self) -> bool {
        self.identity_failures == 0 && (self.symbolic_closed == (self.nonzero_at == 0))
    }
}

pub fn pointwise_annihilator_check(u: &Local, samples: &[Vec<Rational>]) -> Result<PointwiseCheck> {
    let du = u.d();
    let mut out = PointwiseCheck { symbolic_closed: du.is_zero(), ..Default::default() };
    for x in samples {
        let Some(value) = u.evaluate(x)? else {
            out.skipped += 1;
            continue;
        };
        out.evaluated += 1;
        let pointwise = koszul_at(x).apply(&value)?;
        if !pointwise.is_zero() {
            out.nonzero_at += 1;
        }
        let du_at = du.evaluate(x)?.expect("same denominator");
        if du_at != pointwise {
            out.identity_failures += 1;
        }
    }
    Ok(out)
}

/// The coefficient matrix of the evaluated frame at `x`, one row per section.
pub fn frame_at(n: usize, chart: usize, x: &[Rational]) -> Result<ExactMatrix<Rational>> {
    let mut rows = Vec::new();
    for s in frame(n, chart)? {
        let v = s
            .evaluate(x)?
            .ok_or_else(|| Error::Chart { chart, msg: "sample point lies off the chart".into() })?;
        rows.push((0..n).map(|l| v.coefficient(&Monomial::xi(n, l))).collect());
    }
    ExactMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::SuperpointField;
    use crate::scalar::Scalar;
    use crate::Field;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn frame_sections_are_closed() {
        for n in 2..5 {
            for chart in 0..n {
                for s in frame(n, chart).unwrap() {
                    assert!(s.d().is_zero());
                }
            }
        }
        assert!(frame_section(3, 1, 1).is_err());
    }

    #[test]
    fn pointwise_examples() {
        let n = 2;
        let samples = vec![vec![q(1), q(0)], vec![q(1), q(1)], vec![q(2), q(3)]];
        let eta = frame_section(n, 0, 1).unwrap();
        let c = pointwise_annihilator_check(&eta, &samples).unwrap();
        assert!(c.symbolic_closed && c.nonzero_at == 0 && c.agrees());
        let xi1 = Local::from_element(Element::xi(n, 0));
        let c = pointwise_annihilator_check(&xi1, &samples).unwrap();
        assert!(!c.symbolic_closed && c.nonzero_at == 3 && c.agrees());
        let c = pointwise_annihilator_check(&Local::zero(n), &samples).unwrap();
        assert!(c.symbolic_closed && c.agrees());
        let ratio = Local::coordinate_ratio(n, 1, 0);
        let c = pointwise_annihilator_check(&ratio, &[vec![q(0), q(1)]]).unwrap();
        assert_eq!(c.skipped, 1);
    }

    #[test]
    fn frame_spans_annihilator() {
        let x = vec![q(2), q(-1), q(5)];
        let m = frame_at(3, 0, &x).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(m.mul_vector(&x).iter().all(|v| v == &q(0)));
    }

    #[test]
    fn frame_expansion_round_trip() {
        let n = 3;
        let u = frame_section(n, 1, 0).unwrap().try_mul(&frame_section(n, 1, 2).unwrap()).unwrap();
        let u = u.try_mul(&Local::coordinate_ratio(n, 2, 1)).unwrap();
        let exp = to_frame(&u, 1).unwrap();
        assert_eq!(exp.coefficients.len(), 1);
        assert_eq!(exp.to_localized(n).unwrap(), u);
        assert!(to_frame(&Local::from_element(Element::xi(n, 0)), 1).is_err());
    }

    #[test]
    fn gamma_pair_of_coordinate_field() {
        let n = 3;
        let gamma = Field::coordinate(n, 1).extend();
        let pair = gamma_pair(&gamma, -1, 0).unwrap();
        assert!(pair.gamma1.iter().all(|(_, e)| e.is_zero()));
        for (l, e) in &pair.gamma0 {
            let expected = if *l == 1 { Local::from_element(Element::one(n)) } else { Local::zero(n) };
            assert_eq!(e.to_localized(n).unwrap(), expected);
        }
        assert!(pair.verify_conditions().unwrap().is_empty());
    }

    #[test]
    fn gamma_pair_of_euler_and_zero() {
        let n = 3;
        let pair = gamma_pair(&SuperpointField::<Rational>::euler(n).extend(), 0, 2).unwrap();
        assert!(pair.gamma1.iter().all(|(_, e)| e.is_zero()));
        for (l, e) in &pair.gamma0 {
            assert_eq!(e.to_localized(n).unwrap(), frame_section(n, 2, *l).unwrap());
        }
        let zero = gamma_pair(&Field::zero(n, 1).extend(), 1, 0).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn leaving_the_chart_is_an_error() {
        let n = 2;
        // x-images of degree 2 break degree zero
        let bad = SuperDerivation::from_images(
            vec![Element::zero(n); n],
            vec![Element::x(n, 0).pow(2), Element::zero(n)],
        )
        .unwrap();
        assert!(matches!(gamma_pair(&bad, 0, 0), Err(Error::Chart { .. })));
    }
}
