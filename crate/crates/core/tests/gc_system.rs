mod common;

use common::{fd_gradient, fd_poisson, hermitian_eigvals, ladder_value, u};
use gelfand_cetlin::gc::{self, ladder};
use gelfand_cetlin::lie;
use gelfand_cetlin::linalg::{self, CMatrix, I};
use gelfand_cetlin::{AlgebraKind, DualElement, Error, GroupElement, LadderIndex, Sampler};
use nalgebra::Vector3;
use proptest::prelude::*;

#[test]
fn pattern_sizes() {
    for n in 1..=6 {
        let mut s = Sampler::new(n as u64);
        let p = gc::gc_pattern(&s.gaussian_dual(u(n)));
        assert_eq!(p.len(), n * (n + 1) / 2);
        assert_eq!(ladder(u(n)).len(), n * (n + 1) / 2);
        for (j, row) in p.rows.iter().enumerate() {
            assert_eq!(row.len(), n - j);
        }
    }
    assert_eq!(gc::gc_pattern(&DualElement::so3(Vector3::new(1.0, 2.0, 2.0))).flat(), vec![3.0, 2.0]);
}

#[test]
fn ladder_order_is_row_major() {
    let l = ladder(u(3));
    let pairs: Vec<(usize, usize)> = l.iter().map(|i| (i.j, i.k)).collect();
    assert_eq!(pairs, vec![(0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (2, 1)]);
    assert!(l[..3].iter().all(|i| i.is_small()));
    assert!(l[3..].iter().all(|i| !i.is_small()));
}

#[test]
fn corner_projection_examples() {
    let xi = DualElement::diagonal(&[4.0, 5.0, 6.0]).unwrap();
    assert_eq!(gc::corner_project(&xi, 0).unwrap(), xi);
    assert_eq!(gc::corner_project(&xi, 1).unwrap(), DualElement::diagonal(&[5.0, 6.0]).unwrap());
    assert!(matches!(gc::corner_project(&xi, 3), Err(Error::IndexOutOfRange { .. })));
    let mut s = Sampler::new(1);
    let xi = s.gaussian_dual(u(4));
    let m = xi.matrix().unwrap();
    let c = gc::corner_project(&xi, 2).unwrap();
    assert_eq!(c.kind(), u(2));
    assert_eq!(c.matrix().unwrap(), &m.view((2, 2), (2, 2)).into_owned());
}

#[test]
fn diagonal_pattern_reads_the_diagonal() {
    let a = [5.0, 3.0, 0.5, -2.0];
    let p = gc::gc_pattern(&DualElement::diagonal(&a).unwrap());
    for (j, row) in p.rows.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            assert_eq!(*v, a[j + k]);
        }
    }
}

#[test]
fn pattern_matches_jacobi_oracle() {
    let mut s = Sampler::new(2);
    for _ in 0..20 {
        let xi = s.gaussian_dual(u(4));
        let p = gc::gc_pattern(&xi);
        for idx in ladder(u(4)) {
            assert!((p.get(idx) - ladder_value(&xi, idx)).abs() <= 1e-10);
        }
    }
}

#[test]
fn interlacing_over_many_samples() {
    for n in 2..=6 {
        let mut s = Sampler::new(100 + n as u64);
        for _ in 0..1000 {
            let p = gc::gc_pattern(&s.gaussian_dual(u(n)));
            assert!(p.interlacing_defect() <= 1e-10);
        }
    }
}

#[test]
fn gradient_examples() {
    let xi = DualElement::diagonal(&[3.0, 1.0]).unwrap();
    let g = gc::grad_lambda(&xi, LadderIndex::new(0, 1)).unwrap();
    let mut expected = CMatrix::zeros(2, 2);
    expected[(0, 0)] = I;
    assert!(linalg::dist(g.matrix().unwrap(), &expected) < 1e-14);
    let scalar = DualElement::diagonal(&[1.0, 1.0, 1.0]).unwrap();
    assert!(matches!(
        gc::grad_lambda(&scalar, LadderIndex::new(0, 1)),
        Err(Error::DegenerateEigenvalue { .. })
    ));
    assert!(matches!(gc::jacobian(&scalar), Err(Error::DegenerateEigenvalue { .. })));
    let v = Vector3::new(1.0, 2.0, 2.0);
    let so3 = DualElement::so3(v);
    assert_eq!(*gc::grad_lambda(&so3, LadderIndex::new(0, 1)).unwrap().vector().unwrap(), v / 3.0);
    assert_eq!(*gc::grad_lambda(&so3, LadderIndex::new(1, 1)).unwrap().vector().unwrap(), Vector3::z());
}

#[test]
fn gradients_match_central_differences() {
    let mut s = Sampler::new(3);
    let h = 1e-5;
    for _ in 0..20 {
        let xi = s.strongly_regular_dual(u(3));
        for idx in ladder(u(3)) {
            let grad = gc::grad_lambda(&xi, idx).unwrap();
            // full-gradient check covers every direction at once
            assert!((grad.coords() - fd_gradient(&xi, idx, h)).amax() <= 1e-6);
            for _ in 0..20 {
                let delta = s.gaussian_dual(u(3));
                let dd = delta.coords();
                let plus = DualElement::from_coords(u(3), (xi.coords() + &dd * h).as_slice()).unwrap();
                let minus = DualElement::from_coords(u(3), (xi.coords() - &dd * h).as_slice()).unwrap();
                let fd = (ladder_value(&plus, idx) - ladder_value(&minus, idx)) / (2.0 * h);
                assert!((lie::pair(&grad, &delta).unwrap() - fd).abs() <= 1e-6 * (1.0 + dd.norm()));
            }
        }
    }
}

#[test]
fn so3_gradients_match_central_differences() {
    let mut s = Sampler::new(4);
    for _ in 0..20 {
        let xi = s.strongly_regular_dual(AlgebraKind::So3);
        for idx in ladder(AlgebraKind::So3) {
            let grad = gc::grad_lambda(&xi, idx).unwrap();
            assert!((grad.coords() - fd_gradient(&xi, idx, 1e-5)).amax() <= 1e-8);
        }
    }
}

#[test]
fn poisson_commutativity_analytic_and_finite_difference() {
    for n in [3usize, 4] {
        let mut s = Sampler::new(10 + n as u64);
        let l = ladder(u(n));
        for trial in 0..100 {
            let xi = s.strongly_regular_dual(u(n));
            let grads = gc::all_gradients(&xi).unwrap();
            for a in 0..l.len() {
                for b in a + 1..l.len() {
                    let analytic = lie::lie_poisson_bracket(&grads[a], &grads[b], &xi).unwrap();
                    assert!(analytic.abs() <= 1e-8);
                    if trial < 10 {
                        assert!(fd_poisson(&xi, l[a], l[b], 1e-5).abs() <= 1e-6);
                    }
                }
            }
        }
    }
}

#[test]
fn lattice_property() {
    let mut s = Sampler::new(7);
    for kind in [u(2), u(3), u(4), AlgebraKind::So3] {
        for _ in 0..25 {
            let xi = s.strongly_regular_dual(kind);
            for idx in ladder(kind) {
                let g = gc::grad_lambda(&xi, idx).unwrap();
                let e = lie::exp_algebra(&g.scale(std::f64::consts::TAU));
                assert!(e.distance(&GroupElement::identity(kind)).unwrap() <= 1e-9);
            }
        }
    }
}

#[test]
fn jacobian_rank_examples() {
    let r = gc::is_strongly_regular(&DualElement::diagonal(&[2.0, -1.0]).unwrap());
    assert_eq!(r.jacobian_rank, 2);
    assert_eq!(gc::jacobian(&DualElement::diagonal(&[2.0, -1.0]).unwrap()).unwrap().shape(), (3, 4));
    let mut s = Sampler::new(8);
    let mut regular = 0;
    for _ in 0..100 {
        let r = gc::is_strongly_regular(&s.gaussian_dual(u(3)));
        if r.is_strongly_regular {
            regular += 1;
            assert_eq!(r.jacobian_rank, 6);
            assert!(r.min_row_gap > 0.0 && r.min_column_gap > 0.0);
        }
    }
    assert!(regular >= 95, "only {regular} of 100 gaussian samples were strongly regular");
}

#[test]
fn so3_classification() {
    let z = gc::is_strongly_regular(&DualElement::so3(Vector3::new(0.0, 0.0, 1.0)));
    assert!(!z.is_strongly_regular);
    assert!(!z.failed_constraints.is_empty());
    assert!(gc::is_strongly_regular(&DualElement::so3(Vector3::new(1.0, 0.0, 1.0))).is_strongly_regular);
    assert!(!gc::is_strongly_regular(&DualElement::zero(AlgebraKind::So3)).is_strongly_regular);
}

#[test]
fn repeated_corner_eigenvalue_is_reported() {
    // trailing 2×2 block is scalar
    let xi = DualElement::diagonal(&[3.0, 1.0, 1.0]).unwrap();
    let r = gc::is_strongly_regular(&xi);
    assert!(!r.is_strongly_regular);
    assert!(r.failed_constraints.iter().any(|c| c.starts_with("row")));
}

#[test]
fn orbit_integrability_rank_examples() {
    let mut s = Sampler::new(9);
    for n in 2..=4 {
        for _ in 0..10 {
            let xi = s.strongly_regular_dual(u(n));
            assert_eq!(gc::orbit_integrability_rank(&xi).unwrap(), u(n).int_rank());
        }
    }
    assert_eq!(gc::orbit_integrability_rank(&DualElement::so3(Vector3::new(1.0, 0.0, 1.0))).unwrap(), 1);
}

#[test]
fn hermitian_oracle_agrees_on_a_known_spectrum() {
    let mut s = Sampler::new(11);
    let g = s.group(u(4));
    let xi = lie::coadjoint_act(&g, &DualElement::diagonal(&[4.0, 1.5, 0.0, -3.0]).unwrap()).unwrap();
    let ev = hermitian_eigvals(xi.matrix().unwrap());
    for (a, b) in ev.iter().zip([4.0, 1.5, 0.0, -3.0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn top_row_is_conjugation_invariant(n in 2usize..=5, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let xi = s.gaussian_dual(u(n));
        let g = s.group(u(n));
        let a = gc::gc_pattern(&xi);
        let b = gc::gc_pattern(&lie::coadjoint_act(&g, &xi).unwrap());
        for (x, y) in a.rows[0].iter().zip(&b.rows[0]) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn ladder_is_one_lipschitz(n in 2usize..=5, seed in any::<u64>(), eps in 1e-3f64..2.0) {
        let mut s = Sampler::new(seed);
        let xi = s.gaussian_dual(u(n));
        let delta = s.gaussian_dual(u(n)).scale(eps);
        let other = xi.try_add(&delta).unwrap();
        let op = linalg::op_norm(delta.matrix().unwrap());
        let (a, b) = (gc::gc_pattern(&xi), gc::gc_pattern(&other));
        prop_assert!(a.max_difference(&b) <= op + 1e-12);
    }

    #[test]
    fn interlacing_holds(n in 1usize..=6, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        prop_assert!(gc::gc_pattern(&s.gaussian_dual(u(n))).interlacing_defect() <= 1e-10);
    }

    #[test]
    fn strong_regularity_implies_full_rank(n in 2usize..=4, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let r = gc::is_strongly_regular(&s.gaussian_dual(u(n)));
        if r.is_strongly_regular {
            prop_assert_eq!(r.jacobian_rank, u(n).big_rank());
            prop_assert!(r.failed_constraints.is_empty());
        } else {
            prop_assert!(!r.failed_constraints.is_empty());
        }
    }
}
