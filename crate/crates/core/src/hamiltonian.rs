//! Hamiltonian `G`-spaces built as products of regular coadjoint orbits.
//!
//! A point `m = (m_1, …, m_k)` has moment `μ(m) = Σ m_i`; tangent vectors are
//! stored as `([η_i, m_i])_i` together with the witnesses `η_i`, which is
//! all the Kirillov–Kostant–Souriau form needs. The big torus acts on the
//! locus where `μ` is strongly regular by collective flows
//! `m ↦ exp(θ_a d_{μ(m)} λ_a) · m`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gc::{self, LadderIndex};
use crate::lie::{self, AlgebraElement, AlgebraKind, DualElement, GroupElement, Repr};
use crate::linalg;
use crate::sample::Sampler;
use crate::tolerance::Tolerances;
use crate::torus::{self, TorusElement};

/// A regular coadjoint orbit, given by its strictly descending spectrum
/// (the radius `[r]` for `so(3)`).
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSpec {
    kind: AlgebraKind,
    spectrum: Vec<f64>,
}

impl OrbitSpec {
    pub fn new(kind: AlgebraKind, spectrum: Vec<f64>) -> Result<Self> {
        if spectrum.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite entry".into()));
        }
        let norm = spectrum.iter().map(|x| x * x).sum::<f64>().sqrt();
        let threshold = Tolerances::scaled(Tolerances::default().gap, norm);
        match kind {
            AlgebraKind::So3 => match spectrum.as_slice() {
                [r] if *r > threshold => {}
                _ => {
                    return Err(Error::InvalidSpectrum(
                        "so(3) orbits take a single positive radius".into(),
                    ))
                }
            },
            AlgebraKind::Unitary(n) => {
                if spectrum.len() != n {
                    return Err(Error::InvalidSpectrum(format!(
                        "expected {n} eigenvalues, got {}",
                        spectrum.len()
                    )));
                }
                if spectrum.windows(2).any(|w| w[0] - w[1] <= threshold) {
                    return Err(Error::InvalidSpectrum(
                        "spectrum must be strictly descending".into(),
                    ));
                }
            }
        }
        Ok(Self { kind, spectrum })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            AlgebraKind::So3 => 2,
            AlgebraKind::Unitary(n) => n * n - n,
        }
    }

    /// Representative in the fundamental chamber.
    pub fn base_point(&self) -> DualElement {
        match self.kind {
            AlgebraKind::So3 => DualElement::so3(nalgebra::Vector3::new(0.0, 0.0, self.spectrum[0])),
            AlgebraKind::Unitary(_) => DualElement::diagonal(&self.spectrum).expect("validated"),
        }
    }

    /// Largest deviation of the spectrum of `x` from this orbit's spectrum.
    pub fn defect(&self, x: &DualElement) -> f64 {
        match x.repr() {
            Repr::Vector(v) => (v.norm() - self.spectrum[0]).abs(),
            Repr::Matrix(m) => linalg::eigvalsh_desc(m)
                .iter()
                .zip(&self.spectrum)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        }
    }
}

/// A finite product of regular coadjoint orbits of the same group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProductSpaceJson", into = "ProductSpaceJson")]
pub struct ProductSpace {
    factors: Vec<OrbitSpec>,
}

#[derive(Clone, Serialize, Deserialize)]
struct ProductSpaceJson {
    #[serde(flatten)]
    kind: AlgebraKind,
    factors: Vec<Vec<f64>>,
}

impl TryFrom<ProductSpaceJson> for ProductSpace {
    type Error = Error;

    fn try_from(j: ProductSpaceJson) -> Result<Self> {
        ProductSpace::from_spectra(j.kind, j.factors)
    }
}

impl From<ProductSpace> for ProductSpaceJson {
    fn from(p: ProductSpace) -> Self {
        ProductSpaceJson {
            kind: p.kind(),
            factors: p.factors.into_iter().map(|f| f.spectrum).collect(),
        }
    }
}

impl ProductSpace {
    pub fn new(factors: Vec<OrbitSpec>) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::InvalidSpectrum("product space needs a factor".into()))?;
        for f in &factors {
            first.kind.ensure_same(f.kind)?;
        }
        Ok(Self { factors })
    }

    pub fn from_spectra(kind: AlgebraKind, spectra: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            spectra
                .into_iter()
                .map(|s| OrbitSpec::new(kind, s))
                .collect::<Result<_>>()?,
        )
    }

    pub fn kind(&self) -> AlgebraKind {
        self.factors[0].kind
    }

    pub fn factors(&self) -> &[OrbitSpec] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(OrbitSpec::dim).sum()
    }

    pub fn base_point(&self) -> ProductPoint {
        ProductPoint {
            space: self.clone(),
            components: self.factors.iter().map(OrbitSpec::base_point).collect(),
        }
    }

    /// Uniformly conjugated point (Haar on each factor).
    pub fn random_point(&self, sampler: &mut Sampler) -> Result<ProductPoint> {
        let components = self
            .factors
            .iter()
            .map(|f| sampler.spectrum_dual(f.kind, &f.spectrum))
            .collect::<Result<_>>()?;
        Ok(ProductPoint {
            space: self.clone(),
            components,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductPoint {
    space: ProductSpace,
    components: Vec<DualElement>,
}

impl ProductPoint {
    pub fn new(space: ProductSpace, components: Vec<DualElement>) -> Result<Self> {
        if components.len() != space.factors.len() {
            return Err(Error::Dimension {
                expected: space.factors.len(),
                actual: components.len(),
            });
        }
        let tol = Tolerances::default().orbit;
        for (f, c) in space.factors.iter().zip(&components) {
            f.kind.ensure_same(c.kind())?;
            let defect = f.defect(c);
            if defect > Tolerances::scaled(tol, c.norm()) {
                return Err(Error::OffOrbit { defect });
            }
        }
        Ok(Self { space, components })
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn components(&self) -> &[DualElement] {
        &self.components
    }

    pub fn kind(&self) -> AlgebraKind {
        self.space.kind()
    }

    /// Largest Frobenius distance between matching components.
    pub fn distance(&self, other: &ProductPoint) -> Result<f64> {
        if self.components.len() != other.components.len() {
            return Err(Error::PointMismatch);
        }
        self.components
            .iter()
            .zip(&other.components)
            .try_fold(0.0f64, |acc, (a, b)| Ok(acc.max(a.distance(b)?)))
    }

    /// Largest spectrum deviation of a component from its orbit.
    pub fn orbit_defect(&self) -> f64 {
        self.space
            .factors
            .iter()
            .zip(&self.components)
            .map(|(f, c)| f.defect(c))
            .fold(0.0, f64::max)
    }

    fn with_components(&self, components: Vec<DualElement>) -> ProductPoint {
        ProductPoint {
            space: self.space.clone(),
            components,
        }
    }
}

/// Tangent vector at a product point, component `i` equal to `[η_i, m_i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    at: ProductPoint,
    components: Vec<DualElement>,
    witnesses: Vec<AlgebraElement>,
}

impl TangentVector {
    pub fn from_witnesses(at: &ProductPoint, witnesses: Vec<AlgebraElement>) -> Result<Self> {
        if witnesses.len() != at.components.len() {
            return Err(Error::Dimension {
                expected: at.components.len(),
                actual: witnesses.len(),
            });
        }
        let components = witnesses
            .iter()
            .zip(&at.components)
            .map(|(w, m)| lie::ad_star(w, m))
            .collect::<Result<_>>()?;
        Ok(Self {
            at: at.clone(),
            components,
            witnesses,
        })
    }

    /// Checks that every component is reproduced by its witness.
    pub fn new(at: &ProductPoint, components: Vec<DualElement>, witnesses: Vec<AlgebraElement>) -> Result<Self> {
        let reference = Self::from_witnesses(at, witnesses)?;
        if components.len() != reference.components.len() {
            return Err(Error::Dimension {
                expected: reference.components.len(),
                actual: components.len(),
            });
        }
        let mut residual: f64 = 0.0;
        for (c, r) in components.iter().zip(&reference.components) {
            residual = residual.max(c.distance(r)?);
        }
        let scale = components.iter().map(DualElement::norm).fold(1.0, f64::max);
        if residual > 1e-9 * scale {
            return Err(Error::InvalidTangent { residual });
        }
        Ok(Self {
            at: at.clone(),
            components,
            witnesses: reference.witnesses,
        })
    }

    pub fn at(&self) -> &ProductPoint {
        &self.at
    }

    pub fn components(&self) -> &[DualElement] {
        &self.components
    }

    pub fn witnesses(&self) -> &[AlgebraElement] {
        &self.witnesses
    }

    /// Stacked coordinates of the components.
    pub fn coords(&self) -> DVector<f64> {
        stack(self.components.iter().map(DualElement::coords))
    }

    pub fn norm(&self) -> f64 {
        self.coords().norm()
    }
}

fn stack(parts: impl Iterator<Item = DVector<f64>>) -> DVector<f64> {
    let parts: Vec<DVector<f64>> = parts.collect();
    let len = parts.iter().map(|p| p.len()).sum();
    let mut out = DVector::zeros(len);
    let mut offset = 0;
    for p in parts {
        out.rows_mut(offset, p.len()).copy_from(&p);
        offset += p.len();
    }
    out
}

/// `μ(m) = Σ m_i`.
pub fn moment(m: &ProductPoint) -> DualElement {
    let mut total = DualElement::zero(m.kind());
    for c in &m.components {
        total = total.try_add(c).expect("components share the kind");
    }
    total
}

/// Kirillov–Kostant–Souriau form `Σ_i ⟨m_i, [η_i, ζ_i]⟩`.
pub fn kks_form(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    if u.at.distance(&v.at)? > 1e-12 {
        return Err(Error::PointMismatch);
    }
    let mut total = 0.0;
    for ((eta, zeta), m) in u.witnesses.iter().zip(&v.witnesses).zip(&u.at.components) {
        total += lie::pair(&lie::bracket(eta, zeta)?, m)?;
    }
    Ok(total)
}

/// Diagonal coadjoint action.
pub fn act_group(m: &ProductPoint, g: &GroupElement) -> Result<ProductPoint> {
    let components = m
        .components
        .iter()
        .map(|c| lie::coadjoint_act(g, c))
        .collect::<Result<_>>()?;
    Ok(m.with_components(components))
}

/// Generating tangent `([η, m_i])_i` of the group action.
pub fn generating_tangent(m: &ProductPoint, eta: &AlgebraElement) -> Result<TangentVector> {
    TangentVector::from_witnesses(m, vec![eta.clone(); m.components.len()])
}

/// Generating tangent of the collective flow of `λ_idx ∘ μ`.
pub fn hamiltonian_tangent(m: &ProductPoint, idx: LadderIndex) -> Result<TangentVector> {
    let grad = gc::grad_lambda(&moment(m), idx)?;
    generating_tangent(m, &grad)
}

/// Lifted big-torus action: collective flows applied in flat order.
pub fn act_torus_space(m: &ProductPoint, theta: &TorusElement) -> Result<ProductPoint> {
    m.kind().ensure_same(theta.kind())?;
    gc::require_strongly_regular(&moment(m))?;
    let mut cur = m.clone();
    for (idx, &t) in gc::ladder(m.kind()).iter().zip(theta.angles()) {
        if t == 0.0 {
            continue;
        }
        let grad = gc::grad_lambda(&moment(&cur), *idx)
            .map_err(|_| Error::LeftStrongRegularLocus { t })?;
        cur = act_group(&cur, &lie::exp_algebra(&grad.scale(t)))?;
    }
    Ok(cur)
}

/// RK4 integration of the collective flow `m_i' = [d_{μ(m)} λ_idx, m_i]`.
pub fn collective_flow_rk4(m: &ProductPoint, idx: LadderIndex, t: f64, step: f64) -> Result<ProductPoint> {
    if step.is_nan() || step <= 0.0 || step.is_infinite() {
        return Err(Error::InvalidValue(format!("rk4 step must be positive, got {step}")));
    }
    gc::require_strongly_regular(&moment(m))?;
    if t == 0.0 {
        return Ok(m.clone());
    }
    let steps = (t.abs() / step).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let field = |x: &[DualElement]| -> Result<Vec<DualElement>> {
        let mut mu = DualElement::zero(m.kind());
        for c in x {
            mu = mu.try_add(c)?;
        }
        let grad = gc::grad_lambda(&mu, idx)?;
        x.iter().map(|c| lie::ad_star(&grad, c)).collect()
    };
    let axpy = |x: &[DualElement], k: &[DualElement], s: f64| -> Result<Vec<DualElement>> {
        x.iter().zip(k).map(|(a, b)| a.try_add(&b.scale(s))).collect()
    };
    let mut x = m.components.clone();
    for _ in 0..steps {
        let k1 = field(&x)?;
        let k2 = field(&axpy(&x, &k1, h / 2.0)?)?;
        let k3 = field(&axpy(&x, &k2, h / 2.0)?)?;
        let k4 = field(&axpy(&x, &k3, h)?)?;
        x = axpy(&x, &k1, h / 6.0)?;
        x = axpy(&x, &k2, h / 3.0)?;
        x = axpy(&x, &k3, h / 3.0)?;
        x = axpy(&x, &k4, h / 6.0)?;
    }
    Ok(m.with_components(x))
}

/// Orthonormal frame of `T_m M` with matching witnesses.
struct TangentFrame {
    /// Columns: orthonormal tangent vectors in stacked dual coordinates.
    basis: DMatrix<f64>,
    /// Columns: stacked algebra coordinates of witnesses for `basis`.
    witnesses: DMatrix<f64>,
}

fn witness_map(m: &ProductPoint) -> Result<DMatrix<f64>> {
    let kind = m.kind();
    let d = kind.dim();
    let k = m.components.len();
    let basis = lie::algebra_basis(kind);
    let mut p = DMatrix::zeros(k * d, k * d);
    for (i, c) in m.components.iter().enumerate() {
        for (a, e) in basis.iter().enumerate() {
            let col = lie::ad_star(e, c)?.coords();
            p.view_mut((i * d, i * d + a), (d, 1)).copy_from(&col);
        }
    }
    Ok(p)
}

fn tangent_frame(m: &ProductPoint) -> Result<TangentFrame> {
    let p = witness_map(m)?;
    let svd = p.svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = (Tolerances::default().rank * smax).max(1e-13);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > cutoff)
        .collect();
    let basis = DMatrix::from_columns(&keep.iter().map(|&i| u.column(i).into_owned()).collect::<Vec<_>>());
    let witnesses = DMatrix::from_columns(
        &keep
            .iter()
            .map(|&i| v_t.row(i).transpose() / svd.singular_values[i])
            .collect::<Vec<_>>(),
    );
    Ok(TangentFrame { basis, witnesses })
}

/// `dim g × (k·dim g)` matrix summing the stacked components.
fn summation(kind: AlgebraKind, k: usize) -> DMatrix<f64> {
    let d = kind.dim();
    let mut s = DMatrix::zeros(d, k * d);
    for i in 0..k {
        s.view_mut((0, i * d), (d, d)).fill_with_identity();
    }
    s
}

fn tangent_from_stacked(m: &ProductPoint, comps: &DVector<f64>, wits: &DVector<f64>) -> Result<TangentVector> {
    let kind = m.kind();
    let d = kind.dim();
    let k = m.components.len();
    let components = (0..k)
        .map(|i| DualElement::from_coords(kind, comps.rows(i * d, d).as_slice()))
        .collect::<Result<_>>()?;
    let witnesses = (0..k)
        .map(|i| AlgebraElement::from_coords(kind, wits.rows(i * d, d).as_slice()))
        .collect::<Result<_>>()?;
    TangentVector::new(m, components, witnesses)
}

/// Which level set a kernel is taken of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelKind {
    /// `ker d_m μ`, tangent to `μ⁻¹(ξ)`.
    GroupLevel,
    /// `ker d_m (λ_big ∘ μ)`, tangent to `λ_M⁻¹(λ_big(ξ))`.
    TorusLevel,
}

/// Orthonormal basis of the tangent space of the group-level or torus-level
/// set through `m`.
pub fn level_tangent_basis(m: &ProductPoint, which: LevelKind) -> Result<Vec<TangentVector>> {
    let xi = moment(m);
    gc::require_strongly_regular(&xi)?;
    let frame = tangent_frame(m)?;
    let sum = summation(m.kind(), m.components.len());
    let differential = match which {
        LevelKind::GroupLevel => sum,
        LevelKind::TorusLevel => gc::jacobian(&xi)? * sum,
    };
    let restricted = differential * &frame.basis;
    let kernel = linalg::null_space(&restricted, Tolerances::default().rank);
    (0..kernel.ncols())
        .map(|c| {
            let coeffs = kernel.column(c);
            tangent_from_stacked(m, &(&frame.basis * coeffs), &(&frame.witnesses * coeffs))
        })
        .collect()
}

fn rank_of_tangents(tangents: &[TangentVector]) -> usize {
    if tangents.is_empty() {
        return 0;
    }
    let cols: Vec<DVector<f64>> = tangents.iter().map(TangentVector::coords).collect();
    linalg::numeric_rank(&DMatrix::from_columns(&cols), Tolerances::default().rank)
}

/// Dimension of the stabilizer of `m` in `G_ξ`, `ξ = μ(m)` (identity
/// component only).
pub fn group_stabilizer_dim(m: &ProductPoint) -> Result<usize> {
    let basis = lie::centralizer_basis(&moment(m))?;
    let tangents = basis
        .iter()
        .map(|eta| generating_tangent(m, eta))
        .collect::<Result<Vec<_>>>()?;
    Ok(basis.len() - rank_of_tangents(&tangents))
}

/// Dimension of the stabilizer of `m` in `T_big` (identity component only).
pub fn torus_stabilizer_dim(m: &ProductPoint) -> Result<usize> {
    gc::require_strongly_regular(&moment(m))?;
    let tangents = gc::ladder(m.kind())
        .into_iter()
        .map(|idx| hamiltonian_tangent(m, idx))
        .collect::<Result<Vec<_>>>()?;
    Ok(tangents.len() - rank_of_tangents(&tangents))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelSolverOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Accepted residual `‖μ(m) − ξ‖`, scaled by `max(1, ‖ξ‖)`.
    pub tolerance: f64,
}

impl Default for LevelSolverOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 200,
            tolerance: 1e-8,
        }
    }
}

/// Finds a point of `μ⁻¹(target)`.
pub fn solve_level(space: &ProductSpace, target: &DualElement, seed: u64) -> Result<ProductPoint> {
    solve_level_with(space, target, seed, &LevelSolverOptions::default())
}

pub(crate) fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed ^ (restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Levenberg–Marquardt descent on `‖μ(m) − ξ‖²` over the orbits, with
/// exponential retraction `m_i ↦ e^{δ_i} m_i e^{−δ_i}` so iterates stay
/// exactly on their orbits; seeded random restarts.
pub fn solve_level_with(
    space: &ProductSpace,
    target: &DualElement,
    seed: u64,
    opts: &LevelSolverOptions,
) -> Result<ProductPoint> {
    space.kind().ensure_same(target.kind())?;
    let threshold = Tolerances::scaled(opts.tolerance, target.norm());
    let mut best = f64::INFINITY;
    for r in 0..opts.restarts.max(1) {
        let mut sampler = Sampler::new(restart_seed(seed, r));
        let start = space.random_point(&mut sampler)?;
        let (point, residual) = descend(start, target, opts.max_iterations, threshold)?;
        if residual <= threshold {
            return Ok(point);
        }
        best = best.min(residual);
    }
    Err(Error::NoConvergence {
        restarts: opts.restarts.max(1),
        residual: best,
    })
}

fn level_residual(m: &ProductPoint, target: &DualElement) -> Result<DVector<f64>> {
    Ok(moment(m).try_sub(target)?.coords())
}

fn retract(m: &ProductPoint, delta: &DVector<f64>) -> Result<ProductPoint> {
    let kind = m.kind();
    let d = kind.dim();
    let components = m
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let eta = AlgebraElement::from_coords(kind, delta.rows(i * d, d).as_slice())?;
            lie::coadjoint_act(&lie::exp_algebra(&eta), c)
        })
        .collect::<Result<_>>()?;
    Ok(m.with_components(components))
}

fn descend(
    mut m: ProductPoint,
    target: &DualElement,
    max_iterations: usize,
    threshold: f64,
) -> Result<(ProductPoint, f64)> {
    let sum = summation(m.kind(), m.components.len());
    let mut r = level_residual(&m, target)?;
    let mut f = r.norm();
    let mut damping = 1e-3;
    // polish well below the acceptance threshold
    let goal = threshold * 1e-4;
    for _ in 0..max_iterations {
        if f <= goal {
            break;
        }
        let jac = &sum * witness_map(&m)?;
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * &r;
        let scale = jtj.diagonal().max().max(1e-12);
        let mut accepted = false;
        for _ in 0..40 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += damping * scale;
            }
            let Some(chol) = a.cholesky() else {
                damping *= 10.0;
                continue;
            };
            let delta = -chol.solve(&g);
            let candidate = retract(&m, &delta)?;
            let r_new = level_residual(&candidate, target)?;
            let f_new = r_new.norm();
            if f_new < f {
                m = candidate;
                r = r_new;
                f = f_new;
                damping = (damping / 3.0).max(1e-12);
                accepted = true;
                break;
            }
            damping *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    Ok((m, f))
}

/// `‖g·m − τ_ξ(g)·m‖` for `g = exp(η)`, `η ∈ g_ξ`, `ξ = μ(m)`: the small
/// torus acts on `μ⁻¹(ξ)` exactly as `G_ξ` does.
pub fn verify_collective_identity(m: &ProductPoint, eta: &AlgebraElement) -> Result<f64> {
    let xi = moment(m);
    let coords = torus::kappa(&xi, eta)?;
    let theta = TorusElement::pad_small(m.kind(), &coords)?;
    let lhs = act_group(m, &lie::exp_algebra(eta))?;
    let rhs = act_torus_space(m, &theta)?;
    lhs.distance(&rhs)
}

/// Angle grid resolution used for the uniqueness scan in [`saturate`].
pub const SATURATION_GRID_STEP: f64 = std::f64::consts::PI / 8.0;
/// Solutions closer than this (torus distance) count as the same solution.
pub const SATURATION_MERGE_DISTANCE: f64 = 1e-3;
const SATURATION_MAX_STARTS: usize = 4096;

/// Finds the intermediate-torus element carrying `m` into `μ⁻¹(target)`.
///
/// The returned angles are supported on the intermediate block. All local
/// minima of the residual over an angle grid are refined by Gauss–Newton;
/// a converged solution distinct from the best one is reported as
/// [`Error::AmbiguousSaturation`].
pub fn saturate(m: &ProductPoint, target: &DualElement) -> Result<TorusElement> {
    let kind = m.kind();
    kind.ensure_same(target.kind())?;
    let start = moment(m);
    gc::require_strongly_regular(&start)?;
    gc::require_strongly_regular(target)?;
    let scale = target.norm().max(1.0);
    let mismatch = gc::gc_pattern(&start).max_difference(&gc::gc_pattern(target));
    if mismatch > 1e-8 * scale {
        return Err(Error::PatternMismatch { defect: mismatch });
    }
    let u = kind.int_rank();
    if u == 0 {
        return Ok(TorusElement::identity(kind));
    }
    let evaluate = |phi: &[f64]| -> Result<f64> {
        let x = torus::flow_composite(&start, &pad_times(kind, phi), None)?;
        x.distance(target)
    };

    let starts = saturation_starts(u, &evaluate)?;
    let accept = 1e-9 * scale;
    let mut solutions: Vec<(Vec<f64>, f64)> = Vec::new();
    for s in starts {
        if let Some((phi, res)) = gauss_newton_int(&start, target, s)? {
            if res <= accept {
                solutions.push((phi, res));
            }
        }
    }
    let Some(best) = solutions
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .cloned()
    else {
        return Err(Error::NoConvergence {
            restarts: 1,
            residual: f64::NAN,
        });
    };
    let best_theta = TorusElement::pad_int(kind, &best.0)?;
    for (phi, _) in &solutions {
        let other = TorusElement::pad_int(kind, phi)?;
        let distance = other.distance(&best_theta)?;
        if distance > SATURATION_MERGE_DISTANCE {
            return Err(Error::AmbiguousSaturation { distance });
        }
    }
    Ok(best_theta)
}

fn pad_times(kind: AlgebraKind, int: &[f64]) -> Vec<f64> {
    let mut t = vec![0.0; kind.rank()];
    t.extend_from_slice(int);
    t
}

/// Starting points for the intermediate-angle search: the discrete local
/// minima of the residual over the full grid when it has at most
/// `SATURATION_MAX_STARTS` nodes, otherwise a fixed quasi-random sample.
fn saturation_starts(u: usize, evaluate: &dyn Fn(&[f64]) -> Result<f64>) -> Result<Vec<Vec<f64>>> {
    let per_axis = (std::f64::consts::TAU / SATURATION_GRID_STEP).round() as usize;
    let total = per_axis.checked_pow(u as u32).filter(|&t| t <= SATURATION_MAX_STARTS);
    match total {
        Some(total) => {
            let node = |mut flat: usize| -> Vec<usize> {
                (0..u)
                    .map(|_| {
                        let d = flat % per_axis;
                        flat /= per_axis;
                        d
                    })
                    .collect()
            };
            let flat_of = |digits: &[usize]| -> usize {
                digits.iter().rev().fold(0, |acc, &d| acc * per_axis + d)
            };
            let values: Vec<f64> = (0..total)
                .map(|f| {
                    let phi: Vec<f64> = node(f).iter().map(|&d| d as f64 * SATURATION_GRID_STEP).collect();
                    evaluate(&phi)
                })
                .collect::<Result<_>>()?;
            let mut out = Vec::new();
            for f in 0..total {
                let digits = node(f);
                let is_min = (0..u).all(|axis| {
                    [1, per_axis - 1].iter().all(|&shift| {
                        let mut nb = digits.clone();
                        nb[axis] = (nb[axis] + shift) % per_axis;
                        values[f] <= values[flat_of(&nb)]
                    })
                });
                if is_min {
                    out.push(digits.iter().map(|&d| d as f64 * SATURATION_GRID_STEP).collect());
                }
            }
            Ok(out)
        }
        None => {
            let mut sampler = Sampler::new(0x5a7);
            let mut scored: Vec<(Vec<f64>, f64)> = (0..SATURATION_MAX_STARTS)
                .map(|_| {
                    let phi = sampler.angles(u);
                    let v = evaluate(&phi)?;
                    Ok((phi, v))
                })
                .collect::<Result<_>>()?;
            scored.sort_by(|a, b| a.1.total_cmp(&b.1));
            Ok(scored.into_iter().take(64).map(|(p, _)| p).collect())
        }
    }
}

fn gauss_newton_int(start: &DualElement, target: &DualElement, mut phi: Vec<f64>) -> Result<Option<(Vec<f64>, f64)>> {
    let kind = start.kind();
    let int: Vec<LadderIndex> = gc::ladder(kind).into_iter().filter(|i| !i.is_small()).collect();
    let goal = 1e-13 * target.norm().max(1.0);
    let mut x = torus::flow_composite(start, &pad_times(kind, &phi), None)?;
    let mut r = x.try_sub(target)?.coords();
    for _ in 0..60 {
        let f = r.norm();
        if f <= goal {
            break;
        }
        let cols = int
            .iter()
            .map(|idx| Ok(torus::generating_vector_dual(&x, *idx)?.coords()))
            .collect::<Result<Vec<_>>>()?;
        let jac = DMatrix::from_columns(&cols);
        let step = jac
            .svd(true, true)
            .solve(&(-&r), 1e-12)
            .map_err(|e| Error::InvalidValue(e.to_string()))?;
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-4 {
            let trial: Vec<f64> = phi.iter().zip(step.iter()).map(|(p, s)| p + t * s).collect();
            let x_new = torus::flow_composite(start, &pad_times(kind, &trial), None)?;
            let r_new = x_new.try_sub(target)?.coords();
            if r_new.norm() < f {
                phi = trial;
                x = x_new;
                r = r_new;
                improved = true;
                break;
            }
            t /= 2.0;
        }
        if !improved {
            break;
        }
    }
    let res = r.norm();
    Ok(Some((phi.into_iter().map(torus::reduce_angle).collect(), res)))
}

/// Sampled-point evidence comparing `M//_ξ G` with `M_s-reg //_{λ(ξ)} T_big`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub kind: AlgebraKind,
    pub dim_m: usize,
    pub level_residual: f64,
    pub dim_ker_dmu: usize,
    pub dim_ker_dlambda_m: usize,
    pub group_stabilizer_dim: usize,
    pub torus_stabilizer_dim: usize,
    /// Dimension of the subgroup acting trivially on every coadjoint orbit
    /// (the centre of `U(n)`); both stabilizers always contain it.
    pub ineffective_dim: usize,
    pub collective_defect: f64,
    pub saturation_residual: f64,
    pub form_welldef_defect: f64,
}

impl ReductionReport {
    /// `dim ker dμ − ℓ = dim ker dλ_M − b`.
    pub fn dimension_identity_holds(&self) -> bool {
        let l = self.kind.rank() as i64;
        let b = self.kind.big_rank() as i64;
        self.dim_ker_dmu as i64 - l == self.dim_ker_dlambda_m as i64 - b
    }

    /// Effective freeness on both sides agrees.
    pub fn freeness_agrees(&self) -> bool {
        (self.group_stabilizer_dim == self.ineffective_dim)
            == (self.torus_stabilizer_dim == self.ineffective_dim)
    }
}

const COLLECTIVE_SAMPLES: usize = 8;

pub fn reduction_report(space: &ProductSpace, target: &DualElement, seed: u64) -> Result<ReductionReport> {
    gc::require_strongly_regular(target)?;
    let m = solve_level(space, target, seed)?;
    report_at(&m, target, seed)
}

/// Builds the report at an already solved level point.
pub fn report_at(m: &ProductPoint, target: &DualElement, seed: u64) -> Result<ReductionReport> {
    let kind = m.kind();
    let xi = moment(m);
    let group_kernel = level_tangent_basis(m, LevelKind::GroupLevel)?;
    let torus_kernel = level_tangent_basis(m, LevelKind::TorusLevel)?;

    let mut sampler = Sampler::new(restart_seed(seed, usize::MAX - 1));
    let mut collective_defect: f64 = 0.0;
    for _ in 0..COLLECTIVE_SAMPLES {
        let eta = sampler.centralizer_element(&xi)?;
        collective_defect = collective_defect.max(verify_collective_identity(m, &eta)?);
    }

    let theta0 = TorusElement::pad_int(kind, &sampler.angles(kind.int_rank()))?;
    let partner = act_torus_space(m, &theta0)?;
    let theta = saturate(&partner, &xi)?;
    let back = act_torus_space(&partner, &theta)?;
    let saturation_residual = moment(&back)
        .distance(&xi)?
        .max(theta.distance(&theta0.inverse())?);

    let hamiltonian = gc::ladder(kind)
        .into_iter()
        .map(|idx| hamiltonian_tangent(m, idx))
        .collect::<Result<Vec<_>>>()?;
    let mut form_welldef_defect: f64 = 0.0;
    for v in &group_kernel {
        for h in &hamiltonian {
            form_welldef_defect = form_welldef_defect.max(kks_form(v, h)?.abs());
        }
    }

    Ok(ReductionReport {
        kind,
        dim_m: m.space.dim(),
        level_residual: xi.distance(target)?,
        dim_ker_dmu: group_kernel.len(),
        dim_ker_dlambda_m: torus_kernel.len(),
        group_stabilizer_dim: group_stabilizer_dim(m)?,
        torus_stabilizer_dim: torus_stabilizer_dim(m)?,
        ineffective_dim: kind.center_dim(),
        collective_defect,
        saturation_residual,
        form_welldef_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;

    fn so3_pair() -> ProductSpace {
        ProductSpace::from_spectra(AlgebraKind::So3, vec![vec![1.0], vec![2.0]]).unwrap()
    }

    #[test]
    fn orbit_spec_validation() {
        let u3 = AlgebraKind::unitary(3).unwrap();
        assert!(OrbitSpec::new(u3, vec![2.0, 1.0, 0.0]).is_ok());
        assert!(OrbitSpec::new(u3, vec![2.0, 2.0, 0.0]).is_err());
        assert!(OrbitSpec::new(u3, vec![0.0, 1.0, 2.0]).is_err());
        assert!(OrbitSpec::new(u3, vec![1.0, 0.0]).is_err());
        assert!(OrbitSpec::new(AlgebraKind::So3, vec![0.0]).is_err());
        assert_eq!(OrbitSpec::new(u3, vec![2.0, 1.0, 0.0]).unwrap().dim(), 6);
    }

    #[test]
    fn product_point_rejects_off_orbit() {
        let space = so3_pair();
        let bad = vec![
            DualElement::so3(Vector3::new(0.0, 0.0, 1.0)),
            DualElement::so3(Vector3::new(0.0, 0.0, 2.5)),
        ];
        assert!(matches!(ProductPoint::new(space, bad), Err(Error::OffOrbit { .. })));
    }

    #[test]
    fn solve_level_so3() {
        let target = DualElement::so3(Vector3::new(0.0, 1.5, 2.0));
        let m = solve_level(&so3_pair(), &target, 7).unwrap();
        assert!(moment(&m).distance(&target).unwrap() <= 1e-8);
        assert!(m.orbit_defect() < 1e-10);
    }

    #[test]
    fn solve_level_reports_infeasible_targets() {
        let target = DualElement::so3(Vector3::new(0.0, 0.0, 4.0));
        let err = solve_level(&so3_pair(), &target, 7).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn kks_form_is_antisymmetric_and_checks_points() {
        let mut s = Sampler::new(3);
        let space = so3_pair();
        let m = space.random_point(&mut s).unwrap();
        let a = generating_tangent(&m, &s.algebra(AlgebraKind::So3)).unwrap();
        let b = generating_tangent(&m, &s.algebra(AlgebraKind::So3)).unwrap();
        let ab = kks_form(&a, &b).unwrap();
        assert!((ab + kks_form(&b, &a).unwrap()).abs() < 1e-12);
        let other = space.random_point(&mut s).unwrap();
        let c = generating_tangent(&other, &s.algebra(AlgebraKind::So3)).unwrap();
        assert_eq!(kks_form(&a, &c), Err(Error::PointMismatch));
    }

    #[test]
    fn tangent_new_checks_witnesses() {
        let mut s = Sampler::new(4);
        let m = so3_pair().random_point(&mut s).unwrap();
        let t = generating_tangent(&m, &s.algebra(AlgebraKind::So3)).unwrap();
        let mut wrong = t.components().to_vec();
        wrong[0] = wrong[0].scale(2.0).try_add(&DualElement::so3(Vector3::new(1.0, 0.0, 0.0))).unwrap();
        assert!(matches!(
            TangentVector::new(&m, wrong, t.witnesses().to_vec()),
            Err(Error::InvalidTangent { .. })
        ));
        assert!(TangentVector::new(&m, t.components().to_vec(), t.witnesses().to_vec()).is_ok());
    }

    #[test]
    fn so3_report_bookkeeping() {
        let target = DualElement::so3(Vector3::new(0.0, 1.5, 2.0));
        let r = reduction_report(&so3_pair(), &target, 11).unwrap();
        assert_eq!(r.dim_m, 4);
        assert_eq!(r.dim_ker_dmu, 1);
        assert_eq!(r.dim_ker_dlambda_m, 2);
        assert!(r.dimension_identity_holds());
        assert_eq!(r.group_stabilizer_dim, 0);
        assert_eq!(r.torus_stabilizer_dim, 0);
        assert!(r.collective_defect < 1e-8);
        assert!(r.saturation_residual < 1e-8);
        assert!(r.form_welldef_defect < 1e-8);
    }

    #[test]
    fn report_requires_strong_regularity() {
        let target = DualElement::so3(Vector3::new(0.0, 0.0, 2.5));
        assert!(matches!(
            reduction_report(&so3_pair(), &target, 1),
            Err(Error::NotStronglyRegular(_))
        ));
    }

    #[test]
    fn product_space_json_round_trip() {
        let space = ProductSpace::from_spectra(AlgebraKind::unitary(2).unwrap(), vec![vec![1.0, -1.0]]).unwrap();
        let text = serde_json::to_string(&space).unwrap();
        assert_eq!(serde_json::from_str::<ProductSpace>(&text).unwrap(), space);
    }
}
