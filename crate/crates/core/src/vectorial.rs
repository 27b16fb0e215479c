//! Graded layers of `W_n`, the Hamiltonian fields `H(ω)` and the
//! conformally Hamiltonian fields `DH(ω)`, computed as exact kernels.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::derivation::SuperpointField;
use crate::element::odd_monomials;
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, SpanSolver};
use crate::monomial::{check_dim, Monomial};
use crate::report::{rational_rows, Layer, Report};
use crate::scalar::Scalar;
use crate::{Element, Field, Rational};

/// A nondegenerate quadratic form `ω = Σ ω_ij x_i x_j` on the even variables.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    matrix: ExactMatrix<Rational>,
}

impl QuadraticForm {
    pub fn new(matrix: ExactMatrix<Rational>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape("quadratic form must be square".into()));
        }
        check_dim(matrix.rows())?;
        if !matrix.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if matrix.determinant()?.is_zero() {
            return Err(Error::DegenerateForm);
        }
        Ok(QuadraticForm { matrix })
    }

    /// `Σ x_i²`.
    pub fn standard(n: usize) -> Self {
        QuadraticForm { matrix: ExactMatrix::identity(n) }
    }

    pub fn diagonal(entries: &[Rational]) -> Result<Self> {
        let n = entries.len();
        let mut m = ExactMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ExactMatrix<Rational> {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        self.matrix.get(i, j)
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.entry(i, j).is_zero()))
    }

    /// `ω` as an element of `A`.
    pub fn polynomial(&self) -> Element {
        let n = self.n();
        let mut out = Element::zero(n);
        for i in 0..n {
            for j in 0..n {
                let c = self.entry(i, j);
                if !c.is_zero() {
                    let xx = &Element::x(n, i) * &Element::x(n, j);
                    out = &out + &xx.scale(c);
                }
            }
        }
        out
    }

    /// `gᵀ ω g`.
    pub fn transform(&self, g: &ExactMatrix<Rational>) -> Result<Self> {
        let m = g.transpose().mul_matrix(&self.matrix)?.mul_matrix(g)?;
        Self::new(m)
    }

    pub fn rows_as_strings(&self) -> Vec<Vec<String>> {
        rational_rows((0..self.n()).map(|i| self.matrix.row(i).to_vec()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    FullW,
    Hamiltonian,
    ConformalHamiltonian,
}

/// A basis of one Z-graded layer together with its coordinates over the
/// monomial basis of `(W_n)_k`.
#[derive(Debug, Clone)]
pub struct GradedSubspace {
    pub n: usize,
    pub degree: i32,
    pub provenance: Provenance,
    pub basis: Vec<Field>,
    pub coordinates: Vec<Vec<Rational>>,
}

impl GradedSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Rank of the coordinate vectors; equals `dim` for a genuine basis.
    pub fn rank(&self) -> usize {
        if self.coordinates.is_empty() {
            return 0;
        }
        ExactMatrix::from_rows(self.coordinates.clone()).map_or(0, |m| m.rank())
    }

    /// Whether `field` lies in the span.
    pub fn contains(&self, field: &Field) -> bool {
        if field.degree() != self.degree {
            return field.is_zero();
        }
        let mut rows = self.coordinates.clone();
        rows.push(field.coordinates());
        ExactMatrix::from_rows(rows).is_ok_and(|m| m.rank() == self.rank())
    }
}

/// `n · C(n, k+1)`.
pub fn w_layer_dim(n: usize, k: i32) -> usize {
    if k < -1 || k + 1 > n as i32 {
        return 0;
    }
    let r = (k + 1) as usize;
    let mut c: usize = 1;
    for i in 0..r {
        c = c * (n - i) / (i + 1);
    }
    n * c
}

/// The monomial basis `{ξ_J ∂ξ_i : |J| = k+1}` of `(W_n)_k`.
pub fn w_basis(n: usize, k: i32) -> GradedSubspace {
    let mut basis = Vec::new();
    if k >= -1 && k < n as i32 {
        for m in odd_monomials(n, (k + 1) as usize) {
            for i in 0..n {
                basis.push(SuperpointField::monomial(n, m.odd_mask(), i));
            }
        }
    }
    let coordinates = basis.iter().map(Field::coordinates).collect();
    GradedSubspace { n, degree: k, provenance: Provenance::FullW, basis, coordinates }
}

/// `δ̃(ω)`, computed by applying the extension.
pub fn hamiltonian_defect(field: &Field, omega: &QuadraticForm) -> Result<Element> {
    if field.n() != omega.n() {
        return Err(Error::DimensionMismatch { left: field.n(), right: omega.n() });
    }
    field.extend().apply(&omega.polynomial())
}

/// `(−1)^k 2 Σ ω_ij x_i x_l ∂h_j/∂ξ_l`, the closed form of the defect.
pub fn defect_by_formula(field: &Field, omega: &QuadraticForm) -> Element {
    let n = field.n();
    let mut out = Element::zero(n);
    for i in 0..n {
        for j in 0..n {
            let w = omega.entry(i, j);
            if w.is_zero() || field.images()[j].is_zero() {
                continue;
            }
            for l in 0..n {
                let partial = field.images()[j].odd_partial(l);
                if partial.is_zero() {
                    continue;
                }
                let xx = &Element::x(n, i) * &Element::x(n, l);
                out = &out + &(&xx * &partial).scale(w);
            }
        }
    }
    let two = Rational::from_i64(if field.degree().rem_euclid(2) == 1 { -2 } else { 2 });
    out.scale(&two)
}

/// Sparse column builder: assigns row indices to monomials on first sight.
#[derive(Default)]
struct Columns {
    rows: BTreeMap<Monomial, usize>,
    cols: Vec<Vec<(usize, Rational)>>,
}

impl Columns {
    fn push(&mut self, e: &Element) {
        let mut col = Vec::with_capacity(e.len());
        for (m, c) in e.terms() {
            let next = self.rows.len();
            let r = *self.rows.entry(m.clone()).or_insert(next);
            col.push((r, c.clone()));
        }
        self.cols.push(col);
    }

    fn matrix(&self) -> ExactMatrix<Rational> {
        let mut m = ExactMatrix::zeros(self.rows.len(), self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                m.set(*i, j, c.clone());
            }
        }
        m
    }
}

fn combine(basis: &[Field], coeffs: &[Rational], n: usize, k: i32) -> Field {
    let mut out = SuperpointField::zero(n, k);
    for (f, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.try_add(&f.scale(c)).expect("same layer");
        }
    }
    out
}

/// `H(ω)_k = {δ ∈ (W_n)_k : δ̃ω = 0}`.
pub fn h_basis(n: usize, omega: &QuadraticForm, k: i32) -> Result<GradedSubspace> {
    if omega.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: omega.n() });
    }
    let w = w_basis(n, k);
    let mut cols = Columns::default();
    for f in &w.basis {
        cols.push(&hamiltonian_defect(f, omega)?);
    }
    let kernel = if w.basis.is_empty() { Vec::new() } else { cols.matrix().nullspace() };
    let basis: Vec<Field> = kernel.iter().map(|c| combine(&w.basis, c, n, k)).collect();
    let coordinates = basis.iter().map(Field::coordinates).collect();
    Ok(GradedSubspace { n, degree: k, provenance: Provenance::Hamiltonian, basis, coordinates })
}

/// Solutions `(δ, φ)` of `δ̃ω = φω` in one layer.
#[derive(Debug, Clone)]
pub struct DhSolution {
    /// The δ-projection: a basis of `DH(ω)_k`.
    pub subspace: GradedSubspace,
    /// The multiplier `φ` paired with each basis element.
    pub multipliers: Vec<Element>,
    /// Dimension of the solution space with `φ` ranging over all of `Λ`.
    pub dim_exterior_phi: usize,
    /// Dimension of the solution space with `φ` restricted to constants.
    pub dim_scalar_phi: usize,
}

impl DhSolution {
    /// True when every recovered multiplier is a constant.
    pub fn multipliers_scalar(&self) -> bool {
        self.multipliers.iter().all(|phi| phi.terms().all(|(m, _)| m.is_one()))
    }
}

/// Kernel of `(δ, φ) ↦ δ̃ω − φω` over `(W_n)_k × span(phi_monomials)`.
fn conformal_kernel(
    w: &GradedSubspace,
    omega: &QuadraticForm,
    phi_monomials: &[Monomial],
) -> Result<Vec<Vec<Rational>>> {
    let n = w.n;
    let poly = omega.polynomial();
    let mut cols = Columns::default();
    for f in &w.basis {
        cols.push(&hamiltonian_defect(f, omega)?);
    }
    for m in phi_monomials {
        let phi = Element::monomial(n, m.clone(), -Rational::one());
        cols.push(&(&phi * &poly));
    }
    if cols.cols.is_empty() {
        return Ok(Vec::new());
    }
    Ok(cols.matrix().nullspace())
}

/// `DH(ω)_k = {δ : δ̃ω = φω for some φ}`.
///
/// `φ` is an unknown over the whole exterior algebra, not presumed constant.
/// The equation splits by odd degree: the layer-`k` block couples `δ` with
/// the `Λ^k` part of `φ`, while every other part `φ_j` must satisfy
/// `φ_j ω = 0` on its own. Both kinds of block are solved exactly.
pub fn dh_basis(n: usize, omega: &QuadraticForm, k: i32) -> Result<DhSolution> {
    if omega.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: omega.n() });
    }
    let w = w_basis(n, k);
    let m = w.basis.len();
    let layer_phi: Vec<Monomial> = if k >= 0 && k <= n as i32 { odd_monomials(n, k as usize) } else { Vec::new() };
    let kernel = conformal_kernel(&w, omega, &layer_phi)?;

    let mut spurious = 0;
    for j in 0..=n {
        if j as i32 == k {
            continue;
        }
        let empty = GradedSubspace { basis: Vec::new(), coordinates: Vec::new(), ..w.clone() };
        spurious += conformal_kernel(&empty, omega, &odd_monomials(n, j))?.len();
    }

    let scalar_phi = [Monomial::one(n)];
    let dim_scalar_phi = conformal_kernel(&w, omega, &scalar_phi)?.len();

    let mut basis = Vec::with_capacity(kernel.len());
    let mut multipliers = Vec::with_capacity(kernel.len());
    for v in &kernel {
        basis.push(combine(&w.basis, &v[..m], n, k));
        let mut phi = Element::zero(n);
        for (mono, c) in layer_phi.iter().zip(&v[m..]) {
            phi = &phi + &Element::monomial(n, mono.clone(), c.clone());
        }
        multipliers.push(phi);
    }
    let coordinates = basis.iter().map(Field::coordinates).collect();
    Ok(DhSolution {
        subspace: GradedSubspace { n, degree: k, provenance: Provenance::ConformalHamiltonian, basis, coordinates },
        multipliers,
        dim_exterior_phi: kernel.len() + spurious,
        dim_scalar_phi,
    })
}

/// If `δ̃ω = cω` for a constant `c`, returns `c`.
pub fn conformal_factor(field: &Field, omega: &QuadraticForm) -> Result<Option<Rational>> {
    let defect = hamiltonian_defect(field, omega)?;
    if defect.is_zero() {
        return Ok(Some(Rational::zero()));
    }
    let poly = omega.polynomial();
    let (m, c) = poly.terms().next().expect("ω is nonzero");
    let factor = defect.coefficient(m) / c.clone();
    Ok((poly.scale(&factor) == defect).then_some(factor))
}

/// All layers `k = -1..n-1` of `H(ω)`, computed in parallel.
pub fn h_layers(n: usize, omega: &QuadraticForm) -> Result<Vec<GradedSubspace>> {
    (-1..n as i32).into_par_iter().map(|k| h_basis(n, omega, k)).collect()
}

/// All layers of `DH(ω)`.
pub fn dh_layers(n: usize, omega: &QuadraticForm) -> Result<Vec<DhSolution>> {
    (-1..n as i32).into_par_iter().map(|k| dh_basis(n, omega, k)).collect()
}

/// Per-degree dimensions of `W_n`, `H(ω)`, `DH(ω)`. Kernels are skipped
/// when `with_kernels` is false.
pub fn dimension_table(n: usize, omega: &QuadraticForm, with_kernels: bool) -> Result<Vec<Layer>> {
    let mut layers: Vec<Layer> = (-1..n as i32)
        .into_par_iter()
        .map(|k| -> Result<Layer> {
            let dim_w = w_basis(n, k).dim();
            let (dim_h, dim_dh) = if with_kernels {
                (Some(h_basis(n, omega, k)?.dim()), Some(dh_basis(n, omega, k)?.subspace.dim()))
            } else {
                (None, None)
            };
            Ok(Layer { k, dim_w, dim_h, dim_dh })
        })
        .collect::<Result<_>>()?;
    layers.sort_by_key(|l| l.k);
    Ok(layers)
}

/// Mechanical check of the structure of `DH(ω)`:
/// (a) every multiplier is constant, (b) `DH = H ⊕ ℚE` degree by degree,
/// (c) `[E, H] ⊆ H`, (d) each `DH` element splits as `δ₀ + ½cE`.
pub fn verify_dh_structure(n: usize, omega: &QuadraticForm) -> Result<Report> {
    if omega.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: omega.n() });
    }
    let mut report = Report::new(n, omega.rows_as_strings());
    let h = h_layers(n, omega)?;
    let dh = dh_layers(n, omega)?;
    let euler = Field::euler(n);
    let half = Rational::from_ratio(1, 2);

    let e_defect = hamiltonian_defect(&euler, omega)?;
    report.check(
        "euler-doubles-omega",
        e_defect == omega.polynomial().scale(&Rational::from_i64(2)),
        format!("E~(omega) = {}", crate::text::format_element(&e_defect)),
    );

    for (hk, dk) in h.iter().zip(&dh) {
        let k = hk.degree;
        report.layers.push(Layer {
            k,
            dim_w: w_layer_dim(n, k),
            dim_h: Some(hk.dim()),
            dim_dh: Some(dk.subspace.dim()),
        });

        let h_ok = hk.basis.iter().map(|f| hamiltonian_defect(f, omega)).collect::<Result<Vec<_>>>()?;
        report.check(
            format!("k={k}: H basis annihilates omega"),
            h_ok.iter().all(Element::is_zero) && hk.rank() == hk.dim(),
            format!("{} independent fields", hk.dim()),
        );

        report.check(
            format!("k={k}: (a) multiplier is scalar"),
            dk.multipliers_scalar() && dk.dim_exterior_phi == dk.dim_scalar_phi,
            format!(
                "solutions with phi in Lambda: {}, with phi constant: {}",
                dk.dim_exterior_phi, dk.dim_scalar_phi
            ),
        );

        let expected = hk.dim() + usize::from(k == 0);
        let mut spanning = hk.coordinates.clone();
        if k == 0 {
            spanning.push(euler.coordinates());
        }
        let sum_rank = if spanning.is_empty() { 0 } else { ExactMatrix::from_rows(spanning.clone())?.rank() };
        let mut joint = spanning;
        joint.extend(dk.subspace.coordinates.iter().cloned());
        let joint_rank = if joint.is_empty() { 0 } else { ExactMatrix::from_rows(joint)?.rank() };
        report.check(
            format!("k={k}: (b) DH = H + QE"),
            dk.subspace.dim() == expected && sum_rank == expected && joint_rank == expected,
            format!("dim DH = {}, dim H = {}", dk.subspace.dim(), hk.dim()),
        );

        let mut ideal_ok = true;
        for f in &hk.basis {
            let b = euler.bracket(f)?;
            let eigen = f.scale(&Rational::from_i64(k as i64));
            ideal_ok &= hamiltonian_defect(&b, omega)?.is_zero() && b == eigen;
        }
        report.check(format!("k={k}: (c) [E, H] in H"), ideal_ok, "");

        let mut split_ok = true;
        let mut constants = Vec::new();
        for f in &dk.subspace.basis {
            match conformal_factor(f, omega)? {
                Some(c) => {
                    let delta0 = if k == 0 { f.try_sub(&euler.scale(&(&half * &c)))? } else { f.clone() };
                    split_ok &= hamiltonian_defect(&delta0, omega)?.is_zero();
                    split_ok &= k == 0 || c.is_zero();
                    constants.push(c.to_string());
                }
                None => split_ok = false,
            }
        }
        report.check(
            format!("k={k}: (d) delta = delta0 + c/2 E"),
            split_ok,
            format!("conformal factors [{}]", constants.join(", ")),
        );
    }
    report.sort_layers();
    Ok(report)
}

/// Expansions of `[b_i, b_j]` over the basis.
#[derive(Debug, Clone, Default)]
pub struct StructureConstants {
    pub size: usize,
    /// `(i, j) → [(l, c)]` with `[b_i, b_j] = Σ c b_l`; zero brackets are omitted.
    pub entries: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
    /// Pairs whose bracket leaves the span.
    pub closure_failures: Vec<(usize, usize)>,
}

impl StructureConstants {
    pub fn is_closed(&self) -> bool {
        self.closure_failures.is_empty()
    }
}

/// Coordinates of a field in `W_n` as a whole: index `mask · n + i`.
pub fn global_coordinates(field: &Field) -> Vec<Rational> {
    let n = field.n();
    let mut v = vec![Rational::zero(); n << n];
    for (i, h) in field.images().iter().enumerate() {
        for (m, c) in h.terms() {
            v[m.odd_mask() as usize * n + i] = c.clone();
        }
    }
    v
}

pub fn structure_constants(basis: &[Field]) -> Result<StructureConstants> {
    let Some(first) = basis.first() else {
        return Ok(StructureConstants::default());
    };
    let n = first.n();
    let vectors: Vec<Vec<Rational>> = basis.iter().map(global_coordinates).collect();
    let solver = SpanSolver::new(vectors, n << n)?;
    let pairs: Vec<(usize, usize)> =
        (0..basis.len()).flat_map(|i| (0..basis.len()).map(move |j| (i, j))).collect();
    type Expansion = ((usize, usize), Option<Vec<(usize, Rational)>>);
    let results: Vec<Expansion> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<_> {
            let b = basis[i].bracket(&basis[j])?;
            let coeffs = solver.express(&global_coordinates(&b)).map(|c| {
                c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect::<Vec<_>>()
            });
            Ok(((i, j), coeffs))
        })
        .collect::<Result<_>>()?;
    let mut out = StructureConstants { size: basis.len(), ..Default::default() };
    for (key, value) in results {
        match value {
            Some(c) if c.is_empty() => {}
            Some(c) => {
                out.entries.insert(key, c);
            }
            None => out.closure_failures.push(key),
        }
    }
    Ok(out)
}

/// Does `[a, b]` lie in the span of `target` for all `a ∈ left`, `b ∈ right`?
pub fn brackets_land_in(left: &[Field], right: &[Field], target: &[Field]) -> Result<bool> {
    let Some(first) = left.first().or(right.first()) else {
        return Ok(true);
    };
    let n = first.n();
    let solver = SpanSolver::new(target.iter().map(global_coordinates).collect(), n << n)?;
    for a in left {
        for b in right {
            let c = a.bracket(b)?;
            if !c.is_zero() && solver.express(&global_coordinates(&c)).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Σ_cyclic (−1)^{p_a p_c} [a, [b, c]]`.
pub fn jacobiator(a: &Field, b: &Field, c: &Field) -> Result<Field> {
    let sign = |x: &Field, y: &Field| {
        if x.parity().both_odd(y.parity()) {
            -Rational::one()
        } else {
            Rational::one()
        }
    };
    let t1 = a.bracket(&b.bracket(c)?)?.scale(&sign(a, c));
    let t2 = b.bracket(&c.bracket(a)?)?.scale(&sign(b, a));
    let t3 = c.bracket(&a.bracket(b)?)?.scale(&sign(c, b));
    t1.try_add(&t2)?.try_add(&t3)
}

#[derive(Debug, Clone, Default)]
pub struct JacobiReport {
    pub checked: usize,
    pub failures: Vec<(usize, usize, usize)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn jacobi_check(basis: &[Field], triples: &[(usize, usize, usize)]) -> Result<JacobiReport> {
    let results: Vec<bool> = triples
        .par_iter()
        .map(|&(i, j, l)| jacobiator(&basis[i], &basis[j], &basis[l]).map(|f| f.is_zero()))
        .collect::<Result<_>>()?;
    let failures = triples.iter().zip(&results).filter(|(_, ok)| !**ok).map(|(t, _)| *t).collect();
    Ok(JacobiReport { checked: triples.len(), failures })
}

pub fn all_triples(size: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(size * size * size);
    for i in 0..size {
        for j in 0..size {
            for l in 0..size {
                out.push((i, j, l));
            }
        }
    }
    out
}

/// The full monomial basis of `W_n`, layer by layer.
pub fn w_full_basis(n: usize) -> Vec<Field> {
    (-1..n as i32).flat_map(|k| w_basis(n, k).basis).collect()
}

/// A random homogeneous field: a small integer combination of a few monomial fields of one layer.
pub fn random_field<R: Rng>(n: usize, rng: &mut R) -> Field {
    let k = rng.gen_range(-1..n as i32);
    let layer = w_basis(n, k).basis;
    let terms = rng.gen_range(1..=3);
    let mut f = Field::zero(n, k);
    for b in layer.choose_multiple(rng, terms) {
        let c = Rational::from_i64(rng.gen_range(-3..=3));
        f = f.try_add(&b.scale(&c)).expect("same layer");
    }
    f
}

/// Jacobi identity on random triples; the fields themselves are the basis.
pub fn jacobi_random(n: usize, triples: usize, seed: u64) -> Result<JacobiReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let fields: Vec<Field> = (0..3 * triples).map(|_| random_field(n, &mut rng)).collect();
    let idx: Vec<(usize, usize, usize)> = (0..triples).map(|t| (3 * t, 3 * t + 1, 3 * t + 2)).collect();
    jacobi_check(&fields, &idx)
}

/// The automorphism of `W_n` induced by the linear change of odd
/// coordinates `ξ_i ↦ Σ_j g_ij ξ_j`; it carries `H(ω)` onto `H(gᵀωg)`.
#[derive(Debug, Clone)]
pub struct BasisChange {
    g: ExactMatrix<Rational>,
    g_inv: ExactMatrix<Rational>,
}

impl BasisChange {
    pub fn new(g: ExactMatrix<Rational>) -> Result<Self> {
        let g_inv = g.inverse()?;
        Ok(BasisChange { g, g_inv })
    }

    fn linear_forms(&self, m: &ExactMatrix<Rational>) -> Vec<Element> {
        let n = m.rows();
        (0..n)
            .map(|i| {
                (0..n).fold(Element::zero(n), |acc, j| &acc + &Element::xi(n, j).scale(m.get(i, j)))
            })
            .collect()
    }

    /// `φ ∘ δ ∘ φ⁻¹`.
    pub fn apply_field(&self, field: &Field) -> Result<Field> {
        let n = field.n();
        if n != self.g.rows() {
            return Err(Error::DimensionMismatch { left: n, right: self.g.rows() });
        }
        let forward = self.linear_forms(&self.g);
        let pushed: Vec<Element> =
            field.images().iter().map(|h| h.substitute_odd(&forward)).collect::<Result<_>>()?;
        let images = (0..n)
            .map(|i| {
                (0..n).fold(Element::zero(n), |acc, j| &acc + &pushed[j].scale(self.g_inv.get(i, j)))
            })
            .collect();
        SuperpointField::new(n, field.degree(), images)
    }
}

/// `ω ↦ gᵀωg` together with the induced automorphism of `W_n`.
pub fn change_of_basis(omega: &QuadraticForm, g: &ExactMatrix<Rational>) -> Result<(QuadraticForm, BasisChange)> {
    if g.rows() != omega.n() || !g.is_square() {
        return Err(Error::Shape("basis change must be n x n".into()));
    }
    let change = BasisChange::new(g.clone())?;
    Ok((omega.transform(g)?, change))
}
