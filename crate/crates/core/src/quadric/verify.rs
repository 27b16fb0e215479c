//! Mechanical checks of the geometric statements: closed elements of the
//! stalks, the action of `W_n` on the charts of `P(V)`, and the action of
//! `DH_n` on `A/ωA`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::derivation::SuperDerivation;
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::monomial::Monomial;
use crate::quadric::chart::{
    chart_functions, frame, frame_at, gamma_pair, in_chart_algebra, pointwise_annihilator_check, FrameExpansion,
};
use crate::quadric::localized::LocalizedElement;
use crate::quadric::quotient::{generators, InducedDerivation, QuotientElement, QuotientRing};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::vectorial::{dh_layers, w_full_basis, QuadraticForm};
use crate::{Element, Field, Rational};

type Local = LocalizedElement<Rational>;

/// Number of representative perturbations per induced derivation.
pub const PERTURBATIONS: usize = 20;

fn small(rng: &mut ChaCha8Rng) -> Rational {
    let v = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    Rational::from_i64(v)
}

fn random_exponents(n: usize, degree: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut e = vec![0; n];
    for _ in 0..degree {
        e[rng.gen_range(0..n)] += 1;
    }
    e
}

/// A random element of `A` with a few terms of x-degree at most `max_x`.
pub fn random_element(n: usize, max_x: u32, terms: usize, rng: &mut ChaCha8Rng) -> Element {
    let mut out = Element::zero(n);
    for _ in 0..terms {
        let xd = rng.gen_range(0..=max_x);
        let mask = rng.gen_range(0..1u32 << n);
        let m = Monomial::from_parts(random_exponents(n, xd, rng), mask);
        out = &out + &Element::monomial(n, m, small(rng));
    }
    out
}

fn random_ratio(n: usize, chart: usize, rng: &mut ChaCha8Rng) -> Local {
    let degree = rng.gen_range(0..=2);
    let num = Element::monomial(n, Monomial::from_parts(random_exponents(n, degree, rng), 0), small(rng));
    Local::new(num, Element::x(n, chart).pow(degree)).expect("nonzero monomial denominator")
}

/// A random chart element; closed ones are combinations of frame products,
/// open ones additionally carry a `ξ_i` term.
fn random_chart_element(n: usize, chart: usize, closed: bool, rng: &mut ChaCha8Rng) -> Result<Local> {
    let sections = frame(n, chart)?;
    let mut u = Local::zero(n);
    for _ in 0..rng.gen_range(1..=3) {
        let mut term = random_ratio(n, chart, rng);
        for s in &sections {
            if rng.gen_bool(0.4) {
                term = term.try_mul(s)?;
            }
        }
        u = u.try_add(&term)?;
    }
    if !closed {
        let mut term = random_ratio(n, chart, rng).try_mul(&Local::from_element(Element::xi(n, chart)))?;
        if let Some(s) = sections.first().filter(|_| rng.gen_bool(0.5)) {
            term = term.try_mul(s)?;
        }
        u = u.try_add(&term)?;
    }
    Ok(u)
}

fn chart_sample(n: usize, chart: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    (0..n)
        .map(|j| {
            if j == chart {
                small(rng)
            } else {
                Rational::from_i64(rng.gen_range(-5..=5))
            }
        })
        .collect()
}

/// Symbolic `du = 0` against `d_x u(x) = 0` at sampled points of each chart.
///
/// The tested elements on a chart are its frame sections together with
/// fifty random elements, half of them closed. `chart = None` runs every chart.
pub fn verify_closed_stalks(n: usize, samples: usize, seed: u64, chart: Option<usize>) -> Result<Report> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let charts: Vec<usize> = match chart {
        Some(c) if c >= n => return Err(Error::IndexOutOfRange { index: c, n }),
        Some(c) => vec![c],
        None => (0..n).collect(),
    };
    let mut report = Report::new(n, Vec::new());
    report.seed = Some(seed);
    report.samples = Some(samples);
    for &i in &charts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let points: Vec<Vec<Rational>> = (0..samples).map(|_| chart_sample(n, i, &mut rng)).collect();

        let mut frame_ok = true;
        for x in &points {
            let m = frame_at(n, i, x)?;
            frame_ok &= m.rank() == n - 1 && m.mul_vector(x).iter().all(|v| v.is_zero());
        }
        report.check(format!("chart {}: frame spans Ann x", i + 1), frame_ok, format!("{} points", points.len()));

        let mut elements: Vec<(String, Local)> = frame(n, i)?
            .into_iter()
            .enumerate()
            .map(|(a, s)| (format!("eta#{}", a + 1), s))
            .collect();
        for r in 0..50 {
            let closed = r % 2 == 0;
            elements.push((format!("random#{}", r + 1), random_chart_element(n, i, closed, &mut rng)?));
        }
        let mut disagreements = Vec::new();
        let (mut closed, mut evaluated) = (0, 0);
        for (name, u) in &elements {
            let c = pointwise_annihilator_check(u, &points)?;
            closed += usize::from(c.symbolic_closed);
            evaluated += c.evaluated;
            if !c.agrees() || c.evaluated < samples {
                disagreements.push(name.clone());
            }
        }
        report.check(
            format!("chart {}: du = 0 iff d_x u(x) = 0", i + 1),
            disagreements.is_empty(),
            if disagreements.is_empty() {
                format!("{} elements ({closed} closed), {evaluated} evaluations", elements.len())
            } else {
                format!("disagreement for {}", disagreements.join(", "))
            },
        );
        let sections_closed = elements[..n - 1].iter().all(|(_, u)| u.d().is_zero());
        report.check(format!("chart {}: frame sections are closed", i + 1), sections_closed, "");
    }
    Ok(report)
}

fn commutator_local(a: &SuperDerivation<Rational>, b: &SuperDerivation<Rational>, u: &Local) -> Result<Local> {
    let ab = u.apply_derivation(b)?.apply_derivation(a)?;
    let ba = u.apply_derivation(a)?.apply_derivation(b)?;
    if a.parity().both_odd(b.parity()) {
        ab.try_add(&ba)
    } else {
        ab.try_sub(&ba)
    }
}

/// Rows of coordinates of several frame expansions over a common denominator.
fn expansion_rows(rows: &[Vec<FrameExpansion>], chart: usize) -> Result<usize> {
    let power = rows
        .iter()
        .flatten()
        .flat_map(|e| e.coefficients.values())
        .filter_map(|c| c.denominator_power_of(chart))
        .max()
        .unwrap_or(0);
    let mut columns: BTreeMap<(usize, u32, Monomial), usize> = BTreeMap::new();
    let mut sparse = Vec::with_capacity(rows.len());
    for row in rows {
        let mut entries = Vec::new();
        for (g, e) in row.iter().enumerate() {
            for (&mask, c) in &e.coefficients {
                let num = c.numerator_over_power(chart, power).expect("chart coefficient");
                for (m, v) in num.terms() {
                    let next = columns.len();
                    let col = *columns.entry((g, mask, m.clone())).or_insert(next);
                    entries.push((col, v.clone()));
                }
            }
        }
        sparse.push(entries);
    }
    if columns.is_empty() {
        return Ok(0);
    }
    let mut dense = ExactMatrix::<Rational>::zeros(rows.len(), columns.len());
    for (r, entries) in sparse.into_iter().enumerate() {
        for (c, v) in entries {
            let sum = dense.get(r, c).clone() + v;
            dense.set(r, c, sum);
        }
    }
    Ok(dense.rank())
}

struct ChartOutcome {
    hypothesis: Vec<String>,
    preservation: Vec<String>,
    kernel: Vec<String>,
    conditions: Vec<String>,
    brackets: Vec<String>,
    rank: usize,
}

fn w_action_on_chart(n: usize, chart: usize, basis: &[Field]) -> Result<ChartOutcome> {
    let extended: Vec<SuperDerivation<Rational>> = basis.iter().map(Field::extend).collect();
    let functions = chart_functions(n, chart);
    let sections = frame(n, chart)?;
    let mut out = ChartOutcome {
        hypothesis: Vec::new(),
        preservation: Vec::new(),
        kernel: Vec::new(),
        conditions: Vec::new(),
        brackets: Vec::new(),
        rank: 0,
    };
    let mut rows = Vec::with_capacity(basis.len());
    for (b, (field, gamma)) in basis.iter().zip(&extended).enumerate() {
        let label = format!("basis#{b}");
        if !gamma.images_x().iter().all(|v| v.terms().all(|(m, _)| m.x_degree() == 1)) {
            out.hypothesis.push(label.clone());
        }
        let mut preserved = gamma.images_xi().iter().all(|h| in_chart_algebra(&Local::from_element(h.clone()), chart));
        for (phi, j) in functions.iter().zip((0..n).filter(|&j| j != chart)) {
            let image = phi.apply_derivation(gamma)?;
            preserved &= in_chart_algebra(&image, chart);
            // γ(x_j/x_i)·x_i + (x_j/x_i)·γ(x_i) = γ(x_j)
            let recombined = image
                .try_mul(&Local::from_element(Element::x(n, chart)))?
                .try_add(&phi.try_mul(&Local::from_element(gamma.images_x()[chart].clone()))?)?;
            preserved &= recombined == Local::from_element(gamma.images_x()[j].clone());
        }
        if !preserved {
            out.preservation.push(label.clone());
        }
        if !sections.iter().map(|s| s.apply_derivation(gamma)).collect::<Result<Vec<_>>>()?.iter().all(|v| v.d().is_zero()) {
            out.kernel.push(label.clone());
        }
        match gamma_pair(gamma, field.degree(), chart) {
            Ok(pair) => {
                if !pair.verify_conditions()?.is_empty() {
                    out.conditions.push(label.clone());
                }
                rows.push(pair.gamma0.into_iter().chain(pair.gamma1).map(|(_, e)| e).collect::<Vec<_>>());
            }
            Err(e) => out.conditions.push(format!("{label}: {e}")),
        }
    }
    out.rank = expansion_rows(&rows, chart)?;

    let generators: Vec<Local> = sections.into_iter().chain(functions).collect();
    let pairs: Vec<(usize, usize)> =
        (0..basis.len()).flat_map(|a| (0..basis.len()).map(move |b| (a, b))).filter(|(a, b)| a <= b).collect();
    let bad: Vec<String> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<Option<String>> {
            let bracket = basis[a].bracket(&basis[b])?.extend();
            for u in &generators {
                if u.apply_derivation(&bracket)? != commutator_local(&extended[a], &extended[b], u)? {
                    return Ok(Some(format!("({a},{b})")));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.brackets = bad;
    Ok(out)
}

fn summary(failures: &[String], total: usize) -> String {
    if failures.is_empty() {
        format!("{total} checked")
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        format!("{} of {total} failed: {}", failures.len(), shown.join(", "))
    }
}

/// The action of `W_n` on the charts of `P(V)` through the extensions `δ̃`.
pub fn verify_w_action(n: usize) -> Result<Report> {
    if !(2..=5).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let basis = w_full_basis(n);
    let outcomes: Vec<ChartOutcome> =
        (0..n).into_par_iter().map(|i| w_action_on_chart(n, i, &basis)).collect::<Result<_>>()?;
    let mut report = Report::new(n, Vec::new());
    let size = basis.len();
    let pairs = size * (size + 1) / 2;
    for (i, o) in outcomes.iter().enumerate() {
        let c = i + 1;
        report.check(format!("chart {c}: x-images are linear in x"), o.hypothesis.is_empty(), summary(&o.hypothesis, size));
        report.check(format!("chart {c}: generators stay in the chart algebra"), o.preservation.is_empty(), summary(&o.preservation, size));
        report.check(format!("chart {c}: Ker d is preserved"), o.kernel.is_empty(), summary(&o.kernel, size));
        report.check(format!("chart {c}: (gamma0, gamma1) conditions"), o.conditions.is_empty(), summary(&o.conditions, size));
        report.check(format!("chart {c}: brackets are preserved"), o.brackets.is_empty(), summary(&o.brackets, pairs));
        report.check(format!("chart {c}: action is injective"), o.rank == size, format!("rank {} of {size}", o.rank));
    }
    Ok(report)
}

fn commutator_quotient(
    ring: &QuotientRing,
    a: &InducedDerivation,
    b: &InducedDerivation,
    u: &Element,
) -> Result<QuotientElement> {
    let ab = a.apply(ring, &b.apply_representative(ring, u)?)?;
    let ba = b.apply(ring, &a.apply_representative(ring, u)?)?;
    let sum = if a.parity().both_odd(b.parity()) {
        ab.representative() + ba.representative()
    } else {
        ab.representative() - ba.representative()
    };
    ring.reduce(&sum)
}

/// The action of `DH(ω)` on `A′ = A/ωA`.
pub fn verify_dh_action(n: usize, omega: &QuadraticForm, seed: u64) -> Result<Report> {
    if !(2..=6).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if omega.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: omega.n() });
    }
    let ring = QuotientRing::new(omega.clone())?;
    let mut report = Report::new(n, omega.rows_as_strings());
    report.seed = Some(seed);
    report.samples = Some(PERTURBATIONS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = generators(n);

    // quotient soundness
    let mut exact = Vec::new();
    for t in 0..PERTURBATIONS {
        let a = random_element(n, 4, 4, &mut rng);
        let div = ring.divide(&a)?;
        let sound = &(&div.quotient * ring.polynomial()) + &div.remainder == a
            && ring.is_normal(&div.remainder)
            && ring.divide_exactly(&(&a - &div.remainder)).is_some()
            && ring.reduce(&div.remainder)?.representative() == &div.remainder;
        if !sound {
            exact.push(format!("trial#{t}"));
        }
    }
    report.check("quotient: exact division and idempotence", exact.is_empty(), summary(&exact, PERTURBATIONS));

    let d = InducedDerivation::koszul(&ring);
    let mut d_sq = Vec::new();
    let mut probes = gens.clone();
    probes.extend((0..PERTURBATIONS).map(|_| random_element(n, 3, 4, &mut rng)));
    for (p, u) in probes.iter().enumerate() {
        if !d.apply(&ring, &d.apply_representative(&ring, u)?)?.is_zero() {
            d_sq.push(format!("probe#{p}"));
        }
    }
    report.check("d' squares to zero", d_sq.is_empty(), summary(&d_sq, probes.len()));

    let basis: Vec<Field> = dh_layers(n, omega)?.into_iter().flat_map(|s| s.subspace.basis).collect();
    let size = basis.len();
    let mut induced = Vec::with_capacity(size);
    let mut membership = Vec::new();
    for (b, f) in basis.iter().enumerate() {
        let ind = InducedDerivation::from_field(f, &ring)?;
        // the ideal test by exact division must agree with the conformal factor
        match InducedDerivation::new(f.extend(), &ring) {
            Ok(other) if other.factor() == ind.factor() => {}
            _ => membership.push(format!("basis#{b}")),
        }
        induced.push(ind);
    }
    report.check("DH basis preserves the ideal", membership.is_empty(), summary(&membership, size));

    let trials: Vec<(Element, Element)> = (0..PERTURBATIONS)
        .map(|_| (random_element(n, 2, 3, &mut rng), random_element(n, 2, 2, &mut rng)))
        .collect();
    let results: Vec<Result<Vec<String>>> = induced
        .par_iter()
        .enumerate()
        .map(|(b, ind)| {
            let mut bad = Vec::new();
            for (a, r) in &trials {
                let shifted = a + &(ring.polynomial() * r);
                if ind.apply_representative(&ring, a)? != ind.apply_representative(&ring, &shifted)? {
                    bad.push(format!("basis#{b}"));
                    break;
                }
            }
            for u in &gens {
                if !commutator_quotient(&ring, ind, &d, u)?.is_zero() {
                    bad.push(format!("basis#{b} vs d'"));
                    break;
                }
            }
            Ok(bad)
        })
        .collect();
    let (mut defined, mut commuting) = (Vec::new(), Vec::new());
    for r in results {
        for s in r? {
            if s.ends_with("d'") {
                commuting.push(s);
            } else {
                defined.push(s);
            }
        }
    }
    report.check("induced derivations are well defined", defined.is_empty(), summary(&defined, size));
    report.check("[induced, d'] = 0", commuting.is_empty(), summary(&commuting, size));

    let pairs: Vec<(usize, usize)> = (0..size).flat_map(|a| (a..size).map(move |b| (a, b))).collect();
    let bad: Vec<String> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<Option<String>> {
            let bracket = basis[a].bracket(&basis[b])?;
            let lhs = InducedDerivation::from_field(&bracket, &ring)?;
            for u in &gens {
                if lhs.apply_representative(&ring, u)? != commutator_quotient(&ring, &induced[a], &induced[b], u)? {
                    return Ok(Some(format!("({a},{b})")));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    report.check("brackets are preserved", bad.is_empty(), summary(&bad, pairs.len()));

    let mut columns: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut rows = Vec::with_capacity(size);
    for ind in &induced {
        let mut row = Vec::new();
        for (g, u) in gens.iter().enumerate() {
            for (m, c) in ind.apply_representative(&ring, u)?.representative().terms() {
                let next = columns.len();
                row.push((*columns.entry((g, m.clone())).or_insert(next), c.clone()));
            }
        }
        rows.push(row);
    }
    let rank = if columns.is_empty() {
        0
    } else {
        let mut dense = ExactMatrix::zeros(size, columns.len());
        for (r, row) in rows.into_iter().enumerate() {
            for (c, v) in row {
                dense.set(r, c, v);
            }
        }
        dense.rank()
    };
    report.check("action is injective", rank == size, format!("rank {rank} of {size}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_stalks_small() {
        let r = verify_closed_stalks(2, 20, 3, None).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.seed, Some(3));
    }

    #[test]
    fn w_action_n2() {
        let r = verify_w_action(2).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn dh_action_n3() {
        let r = verify_dh_action(3, &QuadraticForm::standard(3), 0).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn guard_rails() {
        assert!(verify_w_action(1).is_err());
        assert!(verify_closed_stalks(3, 5, 0, Some(3)).is_err());
    }
}
