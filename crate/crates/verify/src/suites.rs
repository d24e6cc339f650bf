//! Per-trial computations of every suite.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use gelfand_cetlin::gc::{self, ladder};
use gelfand_cetlin::hamiltonian::{self, moment};
use gelfand_cetlin::lie::{self, Repr};
use gelfand_cetlin::linalg;
use gelfand_cetlin::torus::{self, act_torus_dual, flow_composite, flow_dual};
use gelfand_cetlin::{
    AlgebraElement, AlgebraKind, DualElement, Error, FlowConfig, LadderIndex, ProductPoint, ProductSpace, Sampler,
    TorusElement,
};
use nalgebra::{DVector, Matrix3, Vector3};

use crate::catalog::SuiteName;
use crate::config::SuiteConfig;

pub type Defects = BTreeMap<String, f64>;

/// Outcome of one trial: the defects measured before any error stopped it.
pub struct TrialOutcome {
    pub defects: Defects,
    pub error: Option<String>,
}

struct Recorder(Defects);

impl Recorder {
    fn put(&mut self, id: &str, value: f64) {
        let v = if value.is_nan() { f64::INFINITY } else { value };
        let e = self.0.entry(id.to_string()).or_insert(0.0);
        *e = e.max(v);
    }

    fn count(&mut self, id: &str, violated: bool) {
        self.put(id, if violated { 1.0 } else { 0.0 });
    }
}

/// Per-trial seed.
pub fn trial_seed(cfg: &SuiteConfig, trial: usize) -> u64 {
    cfg.seed.wrapping_add(trial as u64)
}

pub fn run_trial(suite: SuiteName, cfg: &SuiteConfig, trial: usize) -> TrialOutcome {
    let seed = trial_seed(cfg, trial);
    let mut rec = Recorder(Defects::new());
    let kind = match suite {
        SuiteName::So3Demo => AlgebraKind::So3,
        _ => cfg.algebra_kind(),
    };
    let mut s = Sampler::new(seed);
    let result = match suite {
        SuiteName::GcCheck => gc_check(kind, &mut s, &mut rec),
        SuiteName::Brackets => brackets(kind, &mut s, &mut rec),
        SuiteName::Flows => flows(kind, cfg, &mut s, &mut rec),
        SuiteName::Torus => torus_suite(kind, &mut s, &mut rec),
        SuiteName::Reduce => reduce(kind, cfg, trial, seed, &mut s, &mut rec),
        SuiteName::So3Demo => so3_demo(cfg, seed, &mut s, &mut rec),
        SuiteName::All => unreachable!("expanded by the runner"),
    };
    TrialOutcome {
        defects: rec.0,
        error: result.err().map(|e| e.to_string()),
    }
}

type Res = Result<(), Error>;

/// Central-difference gradients of every ladder value, in dual coordinates.
pub fn fd_ladder_gradients(xi: &DualElement, h: f64) -> Result<Vec<DVector<f64>>, Error> {
    let kind = xi.kind();
    let c = xi.coords();
    let b = kind.big_rank();
    let mut grads = vec![DVector::zeros(kind.dim()); b];
    for a in 0..kind.dim() {
        let mut plus = c.clone();
        let mut minus = c.clone();
        plus[a] += h;
        minus[a] -= h;
        let fp = gc::gc_pattern(&DualElement::from_coords(kind, plus.as_slice())?).flat();
        let fm = gc::gc_pattern(&DualElement::from_coords(kind, minus.as_slice())?).flat();
        for i in 0..b {
            grads[i][a] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(grads)
}

fn op_norm(x: &DualElement) -> f64 {
    match x.repr() {
        Repr::Matrix(m) => linalg::op_norm(m),
        Repr::Vector(v) => v.norm(),
    }
}

fn gc_check(kind: AlgebraKind, s: &mut Sampler, rec: &mut Recorder) -> Res {
    let xi = s.gaussian_dual(kind);
    let p = gc::gc_pattern(&xi);
    let expected = match kind {
        AlgebraKind::Unitary(n) => n * (n + 1) / 2,
        AlgebraKind::So3 => 2,
    };
    rec.count("ladder-cardinality", p.len() != expected || ladder(kind).len() != expected);
    rec.put("interlacing", p.interlacing_defect());

    let g = s.group(kind);
    let moved = gc::gc_pattern(&lie::coadjoint_act(&g, &xi)?);
    let top = p.rows[0].iter().zip(&moved.rows[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    rec.put("top-row-invariance", top);

    let eps = s.uniform(1e-3, 1.0);
    let delta = s.gaussian_dual(kind).scale(eps);
    let shifted = gc::gc_pattern(&xi.try_add(&delta)?);
    rec.put("ladder-lipschitz", (p.max_difference(&shifted) - op_norm(&delta)).max(0.0));

    let xr = s.strongly_regular_dual(kind);
    let fd = fd_ladder_gradients(&xr, 1e-5)?;
    for (a, idx) in ladder(kind).into_iter().enumerate() {
        let grad = gc::grad_lambda(&xr, idx)?;
        rec.put("gradient-fd", (grad.coords() - &fd[a]).amax());
        rec.put("lattice", lie::exp_algebra(&grad.scale(TAU)).distance_to_identity());
    }
    let report = gc::is_strongly_regular(&xr);
    rec.count("jacobian-rank", report.jacobian_rank != kind.big_rank());
    rec.count("integrability-rank", gc::orbit_integrability_rank(&xr)? != kind.int_rank());
    Ok(())
}

fn brackets(kind: AlgebraKind, s: &mut Sampler, rec: &mut Recorder) -> Res {
    let (f, g, h) = (s.algebra(kind), s.algebra(kind), s.algebra(kind));
    let xi = s.gaussian_dual(kind);
    let pb = |a: &AlgebraElement, b: &AlgebraElement| lie::lie_poisson_bracket(a, b, &xi);
    rec.put("bracket-antisymmetry", (pb(&f, &g)? + pb(&g, &f)?).abs());
    // for linear functions d{g,h} = [dg, dh]
    let jacobi = pb(&f, &lie::bracket(&g, &h)?)? + pb(&g, &lie::bracket(&h, &f)?)? + pb(&h, &lie::bracket(&f, &g)?)?;
    rec.put("bracket-jacobi", jacobi.abs());

    let grp = s.group(kind);
    let before = lie::pair(&f, &xi)?;
    let after = lie::pair(&lie::adjoint_act(&grp, &f)?, &lie::coadjoint_act(&grp, &xi)?)?;
    rec.put("pairing-invariance", (before - after).abs());

    let xr = s.strongly_regular_dual(kind);
    let grads = gc::all_gradients(&xr)?;
    let fd = fd_ladder_gradients(&xr, 1e-5)?
        .into_iter()
        .map(|c| AlgebraElement::from_coords(kind, c.as_slice()))
        .collect::<Result<Vec<_>, _>>()?;
    for a in 0..grads.len() {
        for b in a + 1..grads.len() {
            rec.put("ladder-commutativity", lie::lie_poisson_bracket(&grads[a], &grads[b], &xr)?.abs());
            rec.put("ladder-commutativity-fd", lie::lie_poisson_bracket(&fd[a], &fd[b], &xr)?.abs());
        }
    }
    Ok(())
}

fn flows(kind: AlgebraKind, cfg: &SuiteConfig, s: &mut Sampler, rec: &mut Recorder) -> Res {
    let xr = s.strongly_regular_dual(kind);
    let p0 = gc::gc_pattern(&xr);
    let closed = FlowConfig::default();
    let rk4 = FlowConfig::rk4(cfg.rk4_step);
    let l = ladder(kind);
    for &idx in &l {
        let t = s.uniform(0.0, TAU);
        let x = flow_dual(&xr, idx, t, &closed)?;
        rec.put("flow-conservation", gc::gc_pattern(&x).max_difference(&p0));
        rec.put("period-closed-form", flow_dual(&xr, idx, TAU, &closed)?.distance(&xr)?);
    }
    let idx = l[s.index(l.len())];
    rec.put("period-rk4", flow_dual(&xr, idx, TAU, &rk4)?.distance(&xr)?);
    let idx = l[s.index(l.len())];
    let t = s.uniform(0.1, 2.0);
    let a = flow_dual(&xr, idx, t, &closed)?;
    let b = flow_dual(&xr, idx, t, &rk4)?;
    rec.put("rk4-agreement", a.distance(&b)?);
    Ok(())
}

fn torus_suite(kind: AlgebraKind, s: &mut Sampler, rec: &mut Recorder) -> Res {
    let xi = s.strongly_regular_dual(kind);
    let b = kind.big_rank();
    for a in 0..b {
        let mut times = vec![0.0; b];
        times[a] = TAU;
        rec.put("torus-periodicity", flow_composite(&xi, &times, None)?.distance(&xi)?);
    }

    let small = |s: &mut Sampler| -> Result<TorusElement, Error> {
        TorusElement::new(kind, (0..b).map(|_| s.uniform(-0.3, 0.3)).collect())
    };
    let (t1, t2) = (small(s)?, small(s)?);
    let seq = act_torus_dual(&act_torus_dual(&xi, &t1)?, &t2)?;
    rec.put("torus-additivity", seq.distance(&act_torus_dual(&xi, &t1.compose(&t2)?)?)?);

    let times = s.angles(b);
    let mut order: Vec<usize> = (0..b).collect();
    for i in (1..b).rev() {
        order.swap(i, s.index(i + 1));
    }
    let x1 = flow_composite(&xi, &times, None)?;
    let x2 = flow_composite(&xi, &times, Some(&order))?;
    rec.put("order-independence", x1.distance(&x2)?);

    let l = kind.rank();
    let coeffs: Vec<f64> = (0..l).map(|_| s.normal()).collect();
    let mut eta = AlgebraElement::zero(kind);
    for (k, c) in coeffs.iter().enumerate() {
        eta = eta.try_add(&gc::grad_lambda(&xi, LadderIndex::new(0, k + 1))?.scale(*c))?;
    }
    let got = torus::kappa(&xi, &eta)?;
    rec.put(
        "kappa-recovery",
        got.iter().zip(&coeffs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
    );

    let g1 = lie::exp_algebra(&s.centralizer_element(&xi)?);
    let g2 = lie::exp_algebra(&s.centralizer_element(&xi)?);
    let lhs = torus::tau(&xi, &g1.compose(&g2)?)?;
    let rhs = torus::tau(&xi, &g1)?.compose(&torus::tau(&xi, &g2)?)?;
    rec.put("tau-homomorphism", lhs.distance(&rhs)?);
    let via_torus = act_torus_dual(&xi, &torus::tau(&xi, &g1)?)?;
    rec.put("tau-compatibility", via_torus.distance(&lie::coadjoint_act(&g1, &xi)?)?);
    Ok(())
}

/// Two regular orbits used when the config declares no spaces.
pub fn default_space(kind: AlgebraKind) -> ProductSpace {
    let spectra = match kind {
        AlgebraKind::So3 => vec![vec![1.0], vec![2.0]],
        AlgebraKind::Unitary(n) => vec![
            (0..n).map(|i| (n - i) as f64).collect(),
            (0..n).map(|i| 0.7 * (n - i) as f64 - 1.0).collect(),
        ],
    };
    ProductSpace::from_spectra(kind, spectra).expect("strictly descending spectra")
}

/// A random point whose moment is strongly regular.
fn generic_point(space: &ProductSpace, s: &mut Sampler) -> Result<ProductPoint, Error> {
    for _ in 0..200 {
        let m = space.random_point(s)?;
        if gc::is_strongly_regular(&moment(&m)).is_strongly_regular {
            return Ok(m);
        }
    }
    Err(Error::NotStronglyRegular("no strongly regular moment in 200 samples".into()))
}

fn reduce(kind: AlgebraKind, cfg: &SuiteConfig, trial: usize, seed: u64, s: &mut Sampler, rec: &mut Recorder) -> Res {
    let space = match &cfg.spaces {
        Some(spaces) => spaces[trial % spaces.len()].clone(),
        None => default_space(kind),
    };
    let kind = space.kind();
    let m0 = generic_point(&space, s)?;
    let xi = moment(&m0);

    let g = s.group(kind);
    let lhs = moment(&hamiltonian::act_group(&m0, &g)?);
    rec.put("moment-equivariance", lhs.distance(&lie::coadjoint_act(&g, &xi)?)?);
    let theta = TorusElement::new(kind, s.angles(kind.big_rank()))?;
    let lhs = moment(&hamiltonian::act_torus_space(&m0, &theta)?);
    rec.put("torus-equivariance", lhs.distance(&act_torus_dual(&xi, &theta)?)?);

    // a single orbit at its own moment is fixed by all of G_ξ
    let single = ProductSpace::new(vec![space.factors()[0].clone()])?;
    let p = single.random_point(s)?;
    if gc::is_strongly_regular(&moment(&p)).is_strongly_regular {
        let l = kind.rank();
        let gs = hamiltonian::group_stabilizer_dim(&p)?;
        let ts = hamiltonian::torus_stabilizer_dim(&p)?;
        rec.put("degenerate-stabilizers", (gs.abs_diff(l) + ts.abs_diff(l)) as f64);
    }

    let m = hamiltonian::solve_level(&space, &xi, seed)?;
    let report = match hamiltonian::report_at(&m, &xi, seed) {
        Ok(r) => r,
        Err(e @ Error::AmbiguousSaturation { .. }) => {
            rec.count("ambiguous-saturation", true);
            return Err(e);
        }
        Err(e) => return Err(e),
    };
    rec.count("ambiguous-saturation", false);
    rec.put("level-residual", report.level_residual);
    rec.count("dimension-identity", !report.dimension_identity_holds());
    rec.count(
        "kernel-codimension",
        report.dim_ker_dlambda_m.checked_sub(report.dim_ker_dmu) != Some(kind.int_rank()),
    );
    rec.count("freeness-equivalence", !report.freeness_agrees());
    rec.put("collective-identity", report.collective_defect);
    rec.put("saturation", report.saturation_residual);
    rec.put("form-welldef", report.form_welldef_defect);
    Ok(())
}

fn rotation_z(t: f64) -> Matrix3<f64> {
    let (sn, cs) = t.sin_cos();
    Matrix3::new(cs, -sn, 0.0, sn, cs, 0.0, 0.0, 0.0, 1.0)
}

fn random_direction(s: &mut Sampler) -> Vector3<f64> {
    loop {
        let v = Vector3::new(s.normal(), s.normal(), s.normal());
        if v.norm() > 1e-3 && v.x.hypot(v.y) > 1e-3 {
            return v.normalize();
        }
    }
}

fn so3_demo(cfg: &SuiteConfig, seed: u64, s: &mut Sampler, rec: &mut Recorder) -> Res {
    let sreg = |v: Vector3<f64>| gc::is_strongly_regular(&DualElement::so3(v)).is_strongly_regular;
    let c = s.uniform(0.1, 5.0) * if s.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
    let misclassified = [
        sreg(Vector3::new(0.0, 0.0, 1.0)),
        !sreg(Vector3::new(1.0, 0.0, 1.0)),
        sreg(Vector3::new(0.0, 0.0, c)),
        !sreg(random_direction(s) * s.uniform(0.1, 5.0)),
    ];
    rec.put("so3-classification", misclassified.iter().filter(|b| **b).count() as f64);

    let xi = s.strongly_regular_dual(AlgebraKind::So3);
    let int = LadderIndex::new(1, 1);
    let t = s.uniform(-TAU, TAU);
    let expected = rotation_z(t) * xi.vector().expect("so3");
    let closed = flow_dual(&xi, int, t, &FlowConfig::default())?;
    rec.put("so3-rotation-flow", (closed.vector().expect("so3") - expected).norm());
    let rk = flow_dual(&xi, int, t, &FlowConfig::rk4(cfg.rk4_step))?;
    rec.put("so3-rotation-rk4", (rk.vector().expect("so3") - expected).norm());

    let space = default_space(AlgebraKind::So3);
    let reachable = DualElement::so3(random_direction(s) * 2.5);
    let unreachable = DualElement::so3(random_direction(s) * 4.0);
    let ok = hamiltonian::solve_level(&space, &reachable, seed)
        .map(|m| moment(&m).distance(&reachable).map(|d| d <= 1e-8).unwrap_or(false))
        .unwrap_or(false);
    let refused = matches!(
        hamiltonian::solve_level(&space, &unreachable, seed),
        Err(Error::NoConvergence { .. })
    );
    rec.put("so3-level-solving", (!ok as u8 + !refused as u8) as f64);

    let r = hamiltonian::reduction_report(&space, &reachable, seed)?;
    let bad = (r.dim_ker_dmu != 1) as u8 + (r.dim_ker_dlambda_m != 2) as u8 + !r.dimension_identity_holds() as u8;
    rec.put("so3-bookkeeping", bad as f64);
    Ok(())
}

