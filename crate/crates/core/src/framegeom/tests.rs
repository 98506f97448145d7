use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, SQRT_2};

use nalgebra::SymmetricEigen;
use proptest::prelude::*;

use super::*;
use crate::fieldcore::{Grid2, Grid3, SField, Sampling, ScalarField2};
use crate::tensorlab::LinearFactor;

fn grid(n: usize) -> Grid2 {
    Grid2::square(0.0, 1.0, n).unwrap()
}

struct Fixture {
    fs: FrameScalars,
    cs: ConnectionScalars,
    sampling: Sampling,
}

/// Constant-field data: Case 2 when `c3` is `None` (s-powers 0), Case 1 otherwise
/// (`H, J ∝ 1/s`, `g11 ∝ s²`).
fn fixture(grid: Grid2, hh: f64, jj: f64, theta: f64, c3: Option<f64>) -> Fixture {
    let (p, q, sampling, lf) = match c3 {
        None => (0, 0, Sampling::plane(), None),
        Some(c) => (
            -1,
            2,
            Sampling::grid3(&Grid3::new(grid, (1.0, 2.0, 9)).unwrap()),
            Some(LinearFactor::new(vec![c]).unwrap()),
        ),
    };
    let h = SField::constant(grid, hh, p);
    let j = SField::constant(grid, jj, p);
    let th = ScalarField2::constant(grid, theta).unwrap();
    let fs = frame_scalars(&h, &j, &th).unwrap();
    let g11 = SField::constant(grid, 1.0 / (jj.abs() * theta.sin()), q);
    let cs = connection_scalars(&g11, lf.as_ref(), 3, &sampling).unwrap();
    Fixture { fs, cs, sampling }
}

fn example_a(grid: Grid2) -> Fixture {
    fixture(grid, 1.0, 1.0, FRAC_PI_2, None)
}

fn example_b(grid: Grid2) -> Fixture {
    fixture(grid, 1.0, SQRT_2, FRAC_PI_2, Some(1.0))
}

fn assert_all_below(r: &crate::report::ResidualReport, tol: f64) {
    for e in &r.entries {
        assert!(e.full.linf <= tol, "{} = {:e}", e.name, e.full.linf);
    }
}

#[test]
fn frame_scalar_examples() {
    let close = |a: (f64, f64, f64), b: (f64, f64, f64)| {
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12 && (a.2 - b.2).abs() < 1e-12, "{a:?} vs {b:?}")
    };
    close(frame_scalars_at(1.0, 1.0, FRAC_PI_2), (1.0, 1.0, 1.0));
    close(frame_scalars_at(2.0, 1.0, 1e-300), (3.0, 1.0, 0.0));
    close(frame_scalars_at(1.0, SQRT_2, FRAC_PI_2), (1.0, 1.0, SQRT_2));
    let b = example_b(grid(9));
    assert_eq!(b.fs.t.as_monomial().unwrap().0, -1);
    assert!((b.fs.t.eval(2, 2, 2.0) - SQRT_2 / 2.0).abs() < 1e-15);
}

#[test]
fn frame_scalars_reject_inadmissible_patches() {
    let g = grid(9);
    let one = SField::constant(g, 1.0, 0);
    let th = ScalarField2::constant(g, 1.0).unwrap();
    let small = SField::constant(g, 1e-10, 0);
    assert!(matches!(frame_scalars(&small, &one, &th), Err(GeomError::Invariant(_))));
    assert!(matches!(frame_scalars(&one, &small, &th), Err(GeomError::Invariant(_))));
    let flat = ScalarField2::constant(g, PI).unwrap();
    assert!(matches!(frame_scalars(&one, &one, &flat), Err(GeomError::Invariant(_))));
    let mixed = SField::constant(g, 1.0, -1);
    assert!(matches!(frame_scalars(&one, &mixed, &th), Err(GeomError::Shape(_))));
}

#[test]
fn principal_from_frame_examples() {
    let (h, j, th) = principal_from_frame_at(3.0, 1.0, 0.0).unwrap();
    assert_eq!((h, j, th), (2.0, 1.0, 0.0));
    let (h, j, th) = principal_from_frame_at(1.0, 1.0, 1.0).unwrap();
    assert_eq!((h, j), (1.0, 1.0));
    assert!((th - FRAC_PI_2).abs() < 1e-15);
    assert!(principal_from_frame_at(1.0, 1.0, 1e-10).is_none());

    let b = example_b(grid(9));
    let pd = principal_from_frame(&b.fs).unwrap();
    assert!((pd.j.eval(0, 0, 1.0) - SQRT_2).abs() < 1e-15);
    assert!((pd.k1().eval(0, 0, 1.0) - (1.0 + SQRT_2)).abs() < 1e-15);
    assert!(pd.theta.values().iter().all(|t| (t - FRAC_PI_2).abs() < 1e-15));

    let g = grid(9);
    let one = SField::constant(g, 1.0, 0);
    let umb = FrameScalars { k: one.clone(), kbar: one.clone(), t: SField::zero(g) };
    assert!(matches!(principal_from_frame(&umb), Err(GeomError::Umbilic { .. })));
}

#[test]
fn bisector_examples() {
    let (l, _) = bisector_shape_operators(2.0, 0.0, 0.0, 3).unwrap();
    assert_eq!(l, nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 0.0, 0.0])));
    let (l, lp) = bisector_shape_operators(2.0, 0.0, FRAC_PI_2, 3).unwrap();
    let expect = [[1.0, 1.0], [1.0, 1.0]];
    for a in 0..2 {
        for b in 0..2 {
            assert!((l[(a, b)] - expect[a][b]).abs() < 1e-15);
            let sign = if a == b { 1.0 } else { -1.0 };
            assert!((lp[(a, b)] - sign * expect[a][b]).abs() < 1e-15);
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(l).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    assert!((ev[0] - 2.0).abs() < 1e-14 && ev[1].abs() < 1e-14 && ev[2].abs() < 1e-14);
    assert!(bisector_shape_operators(1.0, 1.0, 0.3, 3).is_err());
    assert!(bisector_shape_operators(2.0, 1.0, 0.3, 2).is_err());
}

fn sorted_eigen(m: nalgebra::DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

proptest! {
    #[test]
    fn frame_round_trip(h in -5.0f64..5.0, jm in 0.01f64..5.0, neg in any::<bool>(), theta in 0.01f64..(PI - 0.01)) {
        let j = if neg { -jm } else { jm };
        let (k, kbar, t) = frame_scalars_at(h, j, theta);
        let (h2, j2, th2) = principal_from_frame_at(k, kbar, t).unwrap();
        prop_assert!((h - h2).abs() <= 1e-12 * (1.0 + h.abs()));
        prop_assert!((j - j2).abs() <= 1e-12 * (1.0 + j.abs()));
        prop_assert!((theta - th2).abs() <= 1e-12);
        // Frame-scalar invariants.
        prop_assert!((k + kbar - 2.0 * h).abs() <= 1e-12 * (1.0 + h.abs()));
        prop_assert!((0.25 * (k - kbar).powi(2) + t * t - j * j).abs() <= 1e-12 * (1.0 + j * j));
    }

    #[test]
    fn bisector_spectrum_is_theta_invariant(k1 in -5.0f64..5.0, k2 in -5.0f64..5.0, theta in 0.0f64..PI, n in 3usize..7) {
        prop_assume!((k1 - k2).abs() > 1e-6);
        let (l, lp) = bisector_shape_operators(k1, k2, theta, n).unwrap();
        prop_assert_eq!(&l, &l.transpose());
        let mut expect = vec![k1, k2];
        expect.extend(std::iter::repeat_n(0.0, n - 2));
        expect.sort_by(|a, b| b.total_cmp(a));
        for (ev, e) in [sorted_eigen(l), sorted_eigen(lp)].iter().flat_map(|v| v.iter().zip(&expect)) {
            prop_assert!((ev - e).abs() <= 1e-12 * (1.0 + k1.abs() + k2.abs()));
        }
    }
}

#[test]
fn connection_scalar_examples() {
    let g = grid(9);
    let a = example_a(g);
    assert!(a.cs.h.is_zero() && a.cs.hbar.is_zero());
    assert!(a.cs.t.iter().all(SField::is_zero));

    let b = example_b(g);
    // ln(1/√2) is not exactly representable, so one-sided stencils leave round-off.
    for f in [&b.cs.h, &b.cs.hbar] {
        assert!(f.sample(&b.sampling.sigmas).iter().all(|v| v.abs() <= 1e-14));
    }
    assert_eq!(b.cs.t[0].eval(4, 4, 2.0), 0.5);

    // g11 = e^{2u(x¹)} gives h̄ = u′ e^{−u}, h = 0.
    let err = |n: usize, u: fn(f64) -> f64, du: fn(f64) -> f64| {
        let g = grid(n);
        let g11 = SField::from_field(&ScalarField2::from_fn(g, move |x, _| (2.0 * u(x)).exp()).unwrap(), 0);
        let cs = connection_scalars(&g11, None, 3, &Sampling::plane()).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let x = g.x1(i);
                worst = worst.max((cs.hbar.eval(i, j, 1.0) - du(x) * (-u(x)).exp()).abs());
                worst = worst.max(cs.h.eval(i, j, 1.0).abs());
            }
        }
        worst
    };
    // ln√g11 = x¹ is linear, so every stencil is exact.
    assert!(err(17, |x| x, |_| 1.0) <= 1e-14);
    let (e1, e2) = (err(33, f64::sin, f64::cos), err(65, f64::sin, f64::cos));
    assert!(e2 < 1e-3 && (3.0..=5.0).contains(&(e1 / e2)), "{e1:e} {e2:e}");

    let bad = SField::constant(g, -1.0, 0);
    assert!(matches!(connection_scalars(&bad, None, 3, &Sampling::plane()), Err(GeomError::Metric(_))));
}

#[test]
fn codazzi_reduced_examples() {
    for fx in [example_a(grid(33)), example_b(grid(33))] {
        let r = codazzi_reduced_residuals(&fx.fs, &fx.cs, &fx.sampling).unwrap();
        assert_eq!(r.entries.len(), 7);
        assert_all_below(&r, 1e-12);
    }
    // J = 1 + 0.1 x¹ with the metric left alone: E₁(t) = 0.1.
    let g = grid(33);
    let mut fx = example_a(g);
    let j = ScalarField2::from_fn(g, |x, _| 1.0 + 0.1 * x).unwrap();
    fx.fs = frame_scalars(
        &SField::constant(g, 1.0, 0),
        &SField::from_field(&j, 0),
        &ScalarField2::constant(g, FRAC_PI_2).unwrap(),
    )
    .unwrap();
    let r = codazzi_reduced_residuals(&fx.fs, &fx.cs, &fx.sampling).unwrap();
    assert!(r.linf("E1(t)+2t*hbar").unwrap() >= 0.05);
}

#[test]
fn gauss_reduced_examples() {
    for fx in [example_a(grid(33)), example_b(grid(33))] {
        let r = gauss_reduced_residuals(&fx.fs, &fx.cs, &fx.sampling).unwrap();
        assert_eq!(r.entries.len(), 3);
        assert_all_below(&r, 1e-12);
    }
    // With constant fields t² − k k̄ = J² − H² whatever θ is, so moving θ alone
    // changes nothing; moving 𝕳 breaks the first equation by H² − J².
    let r = |fx: Fixture| gauss_reduced_residuals(&fx.fs, &fx.cs, &fx.sampling).unwrap();
    let tilted = r(fixture(grid(33), 1.0, 1.0, FRAC_PI_3, None));
    assert!(tilted.entries[0].full.linf <= 1e-12);
    let lifted = r(fixture(grid(33), 1.5, 1.0, FRAC_PI_2, None));
    assert!((lifted.entries[0].full.linf - 1.25).abs() <= 1e-12);
}

#[test]
fn log_t_examples() {
    for fx in [example_a(grid(33)), example_b(grid(33))] {
        let r = log_t_compatibility(&fx.fs, &fx.cs, &fx.sampling).unwrap();
        assert_eq!(r.entries.len(), 3);
        assert_all_below(&r, 1e-12);
    }
    let g = grid(9);
    let mut fx = example_a(g);
    let mut t = ndarray::Array2::from_elem(g.shape(), 1.0);
    t[[3, 4]] = 0.0;
    fx.fs.t = SField::monomial(g, t, 0);
    assert!(matches!(log_t_compatibility(&fx.fs, &fx.cs, &fx.sampling), Err(GeomError::VanishingT { i: 3, j: 4, .. })));
}

#[test]
fn reduced_systems_on_conformal_data_converge() {
    // g11 = g22 = e^{2u} with u = ½ ln(x¹² + x²² + 1)... any u: the log-t and
    // h₁ = h̄₂ identities hold for t ∝ e^{−2u}, and the discretization error is O(h²).
    let run = |n: usize| {
        let g = Grid2::square(0.2, 1.2, n).unwrap();
        let u = |x: f64, y: f64| 0.3 * (x * y).sin() + 0.2 * x;
        let g11 = SField::from_field(&ScalarField2::from_fn(g, move |x, y| (2.0 * u(x, y)).exp()).unwrap(), 0);
        let cs = connection_scalars(&g11, None, 4, &Sampling::plane()).unwrap();
        let t = SField::from_field(&ScalarField2::from_fn(g, move |x, y| -(-2.0 * u(x, y)).exp()).unwrap(), 0);
        let fs = FrameScalars { k: t.clone(), kbar: t.clone(), t };
        let r = log_t_compatibility(&fs, &cs, &Sampling::plane()).unwrap();
        r.entries.iter().map(|e| e.interior.linf).fold(0.0, f64::max)
    };
    let (e1, e2) = (run(33), run(65));
    assert!(e2 < 1e-3 && (3.0..=5.0).contains(&(e1 / e2)), "{e1:e} {e2:e}");
}
