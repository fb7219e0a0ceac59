mod common;

use std::f64::consts::PI;

use cgint::cgtf::{amplitude_cartesian, axis_integral, cartesian_harmonic_coeffs, gaussian_moment, gaussian_product, i_lm};
use cgint::quadrature::integrate_simple;
use cgint::sgtf::{
    amplitude_monocentric, amplitude_spherical, g_element, harmonic_polynomial_translation, j_lm_general,
    j_lm_monocentric, j_lm_n0,
};
use cgint::special::{double_factorial, gaunt_coefficient, harmonic_polynomial_real, kummer_1f1, ln_gamma, solid_harmonic_real};
use cgint::{AngularIndex, CartesianGaussianState, ContinuumSpec, Error, SphericalGaussianState, Vec3};
use common::{rel, synthetic_basis};
use num_complex::Complex64;
use proptest::prelude::*;

fn lm(l: u32, m: i32) -> AngularIndex {
    AngularIndex::new(l, m).unwrap()
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

#[test]
fn g_element_at_zero_separation() {
    let b = synthetic_basis();
    let (l, lp, lambda, beta) = (2, 1, 3, 0.4);
    let p = (l + lp + lambda + 4) as f64 / 2.0;
    let want: Complex64 = b
        .exponents(l)
        .unwrap()
        .iter()
        .zip(b.coefficients(l, 1).unwrap())
        .map(|(a, c)| c * (a + beta).powf(-p))
        .sum();
    assert!(rel(g_element(l, lp, lambda, &b, 1, beta, 0.0).unwrap(), want) < 1e-14);
}

#[test]
fn g_element_single_gaussian() {
    let one = vec![Complex64::new(1.0, 0.0)];
    let b = cgint::ComplexGaussianBasis::from_parts(25.0, 1.0, vec![1.0], vec![one.clone()], vec![vec![one]]).unwrap();
    let want = 0.25 * kummer_1f1(2.0, 1.5, Complex64::new(0.5, 0.0)).unwrap();
    assert!(rel(g_element(0, 0, 0, &b, 0, 1.0, 1.0).unwrap(), want) < 1e-15);
}

/// The radial k-series before resummation, per Gaussian, summed directly.
fn g_by_k_series(l: u32, lp: u32, lambda: u32, b: &cgint::ComplexGaussianBasis, k: usize, beta: f64, r2: f64) -> Complex64 {
    let p = (l + lp + lambda + 4) as f64 / 2.0;
    let mut total = zero();
    for (a, c) in b.exponents(l).unwrap().iter().zip(b.coefficients(l, k).unwrap()) {
        let gamma = a + beta;
        let mut sum = zero();
        for kk in 0..200 {
            let kf = kk as f64;
            let ln = kf * (4.0 * beta * beta * r2).ln() + 0.5 * PI.ln() + ln_gamma(kf + p)
                - (2.0 * kf + lambda as f64 + 1.0) * 2f64.ln()
                - ln_gamma(kf + 1.0)
                - ln_gamma(kf + lambda as f64 + 1.5)
                - 2f64.ln();
            let t = ln.exp() * (-(kf + p) * gamma.ln()).exp();
            sum += t;
            if kk > 10 && t.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        total += c * sum;
    }
    // undo the Γ-ratio prefactor that g_element leaves out
    total * (2f64.powi(lambda as i32 + 2) * ln_gamma(lambda as f64 + 1.5).exp() / (PI.sqrt() * ln_gamma(p).exp()))
}

#[test]
fn g_element_matches_k_series() {
    let b = synthetic_basis();
    for (l, lp, lambda) in [(1, 0, 1), (3, 2, 4), (0, 0, 0)] {
        let v = g_element(l, lp, lambda, &b, 0, 0.05, 1.0).unwrap();
        let s = g_by_k_series(l, lp, lambda, &b, 0, 0.05, 1.0);
        assert!(rel(v, s) < 1e-12, "{l} {lp} {lambda}: {v} {s}");
    }
}

fn odd_df(n: u32) -> f64 {
    double_factorial(n as i64).unwrap()
}

fn solid_or_zero(l: i64, m: i64, r: Vec3) -> Complex64 {
    if l < 0 || m.abs() > l {
        return zero();
    }
    solid_harmonic_real(lm(l as u32, m as i32), r)
}

/// `J_{l,m}` from the uncollected double expansion, summing every index
/// combination and relying on the Gaunt coefficients to vanish where the
/// selection rules forbid a term.
fn j_brute_force(target: AngularIndex, state: &SphericalGaussianState, b: &cgint::ComplexGaussianBasis, k: usize) -> Complex64 {
    let (l, m) = (target.l(), target.m());
    let (li, mi) = (state.lm().l(), state.lm().m());
    let beta = state.beta();
    let big_r = state.center();
    let r2: f64 = big_r.iter().map(|x| x * x).sum();
    let minus_r = big_r.map(|x| -x);
    let beta_r = big_r.map(|x| beta * x);
    let mut total = zero();
    for lp in 0..=li {
        for mp in -(lp as i32)..=lp as i32 {
            let g = odd_df(2 * li + 1) / (odd_df(2 * lp + 1) * odd_df(2 * (li - lp) + 1))
                * gaunt_coefficient(li, mi, lp, mp, li - lp, mi - mp);
            let y_minus = solid_or_zero((li - lp) as i64, (mi - mp) as i64, minus_r);
            for lambda in 0..=(l + lp + 1) {
                let p = (l + lp + lambda + 4) as f64 / 2.0;
                let radial = PI.sqrt() * ln_gamma(p).exp() / (2f64.powi(lambda as i32 + 2) * ln_gamma(lambda as f64 + 1.5).exp())
                    * g_element(l, lp, lambda, b, k, beta, r2).unwrap();
                for mu in -(lambda as i32)..=lambda as i32 {
                    let mut four = 0.0;
                    for d in 0..=(lp + 1) {
                        for md in -(d as i32)..=d as i32 {
                            four += gaunt_coefficient(d, md, 1, 0, lp, mp) * gaunt_coefficient(l, m, lambda, mu, d, md);
                        }
                    }
                    let sign = if mu.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    total += g
                        * y_minus
                        * sign
                        * 2f64.powi(lambda as i32)
                        * solid_or_zero(lambda as i64, -mu as i64, beta_r)
                        * four
                        * radial;
                }
            }
        }
    }
    total * 16.0 * PI * PI * (-beta * r2).exp()
}

#[test]
fn j_n0_equals_unpruned_sum() {
    let b = synthetic_basis();
    let states = [
        SphericalGaussianState::new(0, lm(0, 0), 0.05, [0.0, 0.0, 1.0]).unwrap(),
        SphericalGaussianState::new(0, lm(1, 1), 0.3, [0.4, -0.2, 0.7]).unwrap(),
        SphericalGaussianState::new(0, lm(2, -1), 0.8, [-0.5, 0.3, 0.2]).unwrap(),
    ];
    for s in &states {
        for target in AngularIndex::up_to(3) {
            let fast = j_lm_n0(target, s, &b, 1).unwrap();
            let slow = j_brute_force(target, s, &b, 1);
            assert!((fast - slow).norm() <= 1e-12 * slow.norm().max(1e-3), "{target} {s:?}: {fast} {slow}");
        }
    }
}

#[test]
fn j_n0_at_origin_keeps_only_the_dipole_partner() {
    let b = synthetic_basis();
    let s = SphericalGaussianState::s_type(0.5, [0.0; 3]).unwrap();
    for target in AngularIndex::up_to(4) {
        let j = j_lm_n0(target, &s, &b, 0).unwrap();
        if target == lm(1, 0) {
            assert!(rel(j, j_lm_monocentric(target, &s, &b, 0).unwrap()) < 1e-13);
        } else {
            assert_eq!(j, zero(), "{target}");
        }
    }
}

#[test]
fn j_n0_vanishes_off_the_azimuthal_order() {
    let b = synthetic_basis();
    let s = SphericalGaussianState::new(0, lm(2, 0), 0.2, [0.0, 0.0, 1.3]).unwrap();
    for target in AngularIndex::up_to(4).filter(|t| t.m() != 0) {
        let j = j_lm_n0(target, &s, &b, 0).unwrap();
        assert!(j.norm() < 1e-15, "{target}: {j}");
    }
}

#[test]
fn j_n0_requires_n_zero() {
    let b = synthetic_basis();
    let s = SphericalGaussianState::new(1, lm(0, 0), 0.2, [0.0, 0.0, 1.0]).unwrap();
    assert!(matches!(j_lm_n0(lm(1, 0), &s, &b, 0), Err(Error::Config(_))));
}

#[test]
fn translation_at_origin_keeps_constant_partner() {
    for t in harmonic_polynomial_translation(1, lm(0, 0)) {
        let y = harmonic_polynomial_real(t.n2, t.lm2, [0.0; 3]);
        assert_eq!(y != zero(), t.n2 == 0 && t.lm2.l() == 0, "{t:?}");
    }
    let b = synthetic_basis();
    let s = SphericalGaussianState::new(1, lm(0, 0), 0.5, [0.0; 3]).unwrap();
    for target in AngularIndex::up_to(3) {
        let g = j_lm_general(target, &s, &b, 0).unwrap();
        let m = j_lm_monocentric(target, &s, &b, 0).unwrap();
        assert!((g - m).norm() <= 1e-13 * m.norm().max(1e-300), "{target}");
    }
}

fn tilted() -> Vec3 {
    let (t, p) = (0.7f64, 0.4f64);
    [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
}

#[test]
fn amplitude_is_sum_of_partials_and_respects_azimuthal_selection() {
    let b = synthetic_basis();
    let s = SphericalGaussianState::new(0, lm(1, 0), 0.3, [0.0, 0.0, 0.8]).unwrap();
    let c = ContinuumSpec::along_z(1.25, 1.0, 5).unwrap();
    let t = amplitude_spherical(&s, &c, &b, 1).unwrap();
    for (idx, v) in t.partials() {
        if idx.m() != 0 {
            assert_eq!(*v, zero());
        }
    }
    let sum: Complex64 = t.partials().iter().map(|p| p.1).sum();
    assert!(rel(sum, t.amplitude()) < 1e-14);
    assert_eq!(t.truncated(5), t.amplitude());

    let c = ContinuumSpec::new(1.25, tilted(), 1.0, 5).unwrap();
    let s = SphericalGaussianState::new(0, lm(2, 1), 0.3, [0.2, -0.4, 0.8]).unwrap();
    let t = amplitude_spherical(&s, &c, &b, 1).unwrap();
    let sum: Complex64 = t.partials().iter().map(|p| p.1).sum();
    assert!(rel(sum, t.amplitude()) < 1e-14);
}

#[test]
fn mismatched_energy_is_a_configuration_error() {
    let b = synthetic_basis();
    let s = SphericalGaussianState::s_type(0.3, [0.0, 0.0, 1.0]).unwrap();
    let c = ContinuumSpec::along_z(0.75, 1.0, 3).unwrap();
    assert!(matches!(amplitude_spherical(&s, &c, &b, 0), Err(Error::Config(_))));
    let c = ContinuumSpec::along_z(0.5, 1.0, 7).unwrap();
    assert!(matches!(amplitude_spherical(&s, &c, &b, 0), Err(Error::Config(_))));
    let c = ContinuumSpec::along_z(0.5, 2.0, 3).unwrap();
    assert!(matches!(amplitude_spherical(&s, &c, &b, 0), Err(Error::Config(_))));
}

#[test]
fn monocentric_reduction_and_continuity() {
    let b = synthetic_basis();
    for (ki, k) in [(0, 0.5), (1, 1.25)] {
        let c = ContinuumSpec::along_z(k, 1.0, 5).unwrap();
        for s in [
            SphericalGaussianState::s_type(0.05, [0.0; 3]).unwrap(),
            SphericalGaussianState::new(0, lm(1, 0), 0.5, [0.0; 3]).unwrap(),
            SphericalGaussianState::new(2, lm(2, 0), 1.0, [0.0; 3]).unwrap(),
        ] {
            let mono = amplitude_monocentric(&s, &c, &b, ki).unwrap().amplitude();
            let sph = amplitude_spherical(&s, &c, &b, ki).unwrap().amplitude();
            assert!(rel(mono, sph) < 1e-12, "{s:?}");
            let near = s.with_center([0.0, 0.0, 1e-8]).unwrap();
            let moved = amplitude_spherical(&near, &c, &b, ki).unwrap().amplitude();
            assert!(rel(moved, mono) < 1e-6);
        }
    }
    let s = SphericalGaussianState::s_type(0.05, [0.0, 0.0, 1.0]).unwrap();
    let c = ContinuumSpec::along_z(0.5, 1.0, 2).unwrap();
    assert!(matches!(amplitude_monocentric(&s, &c, &b, 0), Err(Error::Config(_))));
}

#[test]
fn gaussian_product_examples() {
    let p = gaussian_product(Complex64::new(0.7, 0.0), 0.3, [1.0, 2.0, -1.0]).unwrap();
    assert!((p.gamma - 1.0).norm() < 1e-16);
    for (c, r) in p.center.components().iter().zip([1.0, 2.0, -1.0]) {
        assert!(c.im == 0.0 && (c.re - 0.3 * r).abs() < 1e-16);
    }
    let p = gaussian_product(Complex64::new(0.7, 1.5), 0.3, [0.0; 3]).unwrap();
    assert_eq!(p.prefactor, Complex64::new(1.0, 0.0));
    assert!(p.center.components().iter().all(|c| *c == zero()));
    let alpha = Complex64::new(1.0, 2.0);
    let p = gaussian_product(alpha, 0.5, [0.0, 0.0, 1.0]).unwrap();
    let c = p.center.components();
    for i in 0..100 {
        let t = i as f64;
        let r = [(0.37 * t).sin() * 2.0, (0.91 * t).cos() * 2.0, (1.7 * t + 0.2).sin() * 2.0];
        let lhs = (-alpha * r.iter().map(|x| x * x).sum::<f64>() - 0.5 * (r[0] * r[0] + r[1] * r[1] + (r[2] - 1.0).powi(2))).exp();
        let q: Complex64 = (0..3).map(|j| (r[j] - c[j]) * (r[j] - c[j])).sum();
        let rhs = p.prefactor * (-p.gamma * q).exp();
        assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm().max(1.0));
    }
    assert!(matches!(gaussian_product(Complex64::new(0.0, 1.0), 0.5, [0.0; 3]), Err(Error::Domain(_))));
    assert!(matches!(gaussian_product(Complex64::new(1.0, 1.0), 0.0, [0.0; 3]), Err(Error::Domain(_))));
}

#[test]
fn cartesian_expansion_examples() {
    let s = cartesian_harmonic_coeffs(lm(0, 0));
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].powers, [0, 0, 0]);
    assert!((s[0].weight - 1.0 / (4.0 * PI).sqrt()).norm() < 1e-16);
    let p = cartesian_harmonic_coeffs(lm(1, 0));
    assert_eq!(p.len(), 1);
    assert_eq!(p[0].powers, [0, 0, 1]);
    assert!((p[0].weight - (3.0 / (4.0 * PI)).sqrt()).norm() < 1e-16);
    let d = cartesian_harmonic_coeffs(lm(2, 1));
    for i in 0..100 {
        let t = i as f64;
        let r = [(0.3 * t).sin() * 2.0, (0.7 * t).cos(), (1.1 * t).sin() * 1.5];
        let v: Complex64 = d.iter().map(|m| m.weight * r[0].powi(m.powers[0] as i32) * r[1].powi(m.powers[1] as i32) * r[2].powi(m.powers[2] as i32)).sum();
        let want = solid_harmonic_real(lm(2, 1), r).conj();
        assert!((v - want).norm() < 1e-13 * want.norm().max(1.0));
    }
}

#[test]
fn gaussian_moment_examples() {
    let g = Complex64::new(1.3, -0.6);
    assert!(rel(gaussian_moment(0, g).unwrap(), (PI / g).sqrt()) < 1e-15);
    assert_eq!(gaussian_moment(1, g).unwrap(), zero());
    assert!(rel(gaussian_moment(2, g).unwrap(), PI.sqrt() / (2.0 * g.powf(1.5))) < 1e-15);
    assert!(matches!(gaussian_moment(2, Complex64::new(0.0, 1.0)), Err(Error::Domain(_))));
}

#[test]
fn axis_integral_examples() {
    let g = Complex64::new(1.5, 0.8);
    let c = Complex64::new(0.3, 0.4);
    assert!(rel(axis_integral(0, 0, 0.7, c, g).unwrap(), (PI / g).sqrt()) < 1e-15);
    assert!(rel(axis_integral(1, 0, 0.7, c, g).unwrap(), c * (PI / g).sqrt()) < 1e-15);
    let f = |x: f64| (-g * (x - c) * (x - c)).exp() * x * x * (x - 0.7);
    let breaks: Vec<f64> = (0..=16).map(|i| -40.0 + 5.0 * i as f64).collect();
    let q = integrate_simple(f, &breaks, 1e-15, 1e-14, 2000);
    assert!(rel(axis_integral(2, 1, 0.7, c, g).unwrap(), q.value) < 1e-12);
}

fn synthetic_cartesian(powers: [u32; 3], beta: f64, center: Vec3) -> CartesianGaussianState {
    CartesianGaussianState::new(powers, beta, center).unwrap()
}

#[test]
fn i_lm_at_origin_is_a_radial_moment() {
    let b = synthetic_basis();
    let s = synthetic_cartesian([0, 0, 0], 0.4, [0.0; 3]);
    let want: Complex64 = b
        .exponents(1)
        .unwrap()
        .iter()
        .zip(b.coefficients(1, 0).unwrap())
        .map(|(a, c)| c * 3.0 * PI.sqrt() / (8.0 * (a + 0.4).powf(2.5)))
        .sum::<Complex64>()
        * (4.0 * PI / 3.0).sqrt();
    assert!(rel(i_lm(lm(1, 0), &s, &b, 0).unwrap(), want) < 1e-13);
    assert_eq!(i_lm(lm(0, 0), &s, &b, 0).unwrap(), zero());
}

#[test]
fn i_lm_vanishes_off_axis_orders() {
    let b = synthetic_basis();
    let s = synthetic_cartesian([0, 0, 1], 0.2, [0.0, 0.0, 1.0]);
    for target in AngularIndex::up_to(4).filter(|t| t.m() != 0) {
        assert!(i_lm(target, &s, &b, 1).unwrap().norm() < 1e-15, "{target}");
    }
}

#[test]
fn axis_brackets_commute() {
    let g = Complex64::new(0.8, -0.4);
    let c = [Complex64::new(0.1, 0.2), Complex64::new(-0.3, 0.05), Complex64::new(0.4, -0.1)];
    let f: Vec<Complex64> = (0..3).map(|i| axis_integral(2 - i as u32, 1, 0.3, c[i], g).unwrap()).collect();
    let a = f[0] * f[1] * f[2];
    for p in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        assert!(rel(a, f[p[0]] * f[p[1]] * f[p[2]]) <= 1e-15);
    }
}

/// Partial terms of the spherical and cartesian paths for states expressible
/// in both families, with the normalization factor applied.
fn cross_check(sph: &SphericalGaussianState, cart: &CartesianGaussianState, factor: f64, c: &ContinuumSpec, k: usize) {
    let b = synthetic_basis();
    let a = amplitude_spherical(sph, c, &b, k).unwrap();
    let z = amplitude_cartesian(cart, c, &b, k).unwrap();
    for ((ia, va), (iz, vz)) in a.partials().iter().zip(z.partials()) {
        assert_eq!(ia, iz);
        assert!(rel(*va, factor * vz) < 1e-10, "{ia}: {va} vs {}", factor * vz);
    }
    assert!(rel(a.amplitude(), factor * z.amplitude()) < 1e-10);
}

#[test]
fn spherical_and_cartesian_paths_agree() {
    let centers = [[0.0, 0.0, 1.0], [0.3, -0.5, 0.8]];
    for (i, center) in centers.into_iter().enumerate() {
        let dir = if i == 0 { [0.0, 0.0, 1.0] } else { tilted() };
        for (k, ke) in [(0, 0.5), (1, 1.25)] {
            let c = ContinuumSpec::new(ke, dir, 1.0, 5).unwrap();
            for beta in [0.05, 0.5] {
                let s1 = SphericalGaussianState::s_type(beta, center).unwrap();
                let c1 = synthetic_cartesian([0, 0, 0], beta, center);
                cross_check(&s1, &c1, 1.0 / (2.0 * PI.sqrt()), &c, k);
                let sp = SphericalGaussianState::new(0, lm(1, 0), beta, center).unwrap();
                let cp = synthetic_cartesian([0, 0, 1], beta, center);
                cross_check(&sp, &cp, (3.0 / (4.0 * PI)).sqrt(), &c, k);
            }
        }
    }
}

#[test]
fn px_py_decompose_into_spherical_states() {
    let b = synthetic_basis();
    let c = ContinuumSpec::new(1.25, tilted(), 1.0, 4).unwrap();
    for powers in [[1, 0, 0], [0, 1, 0]] {
        let cart = synthetic_cartesian(powers, 0.3, [0.2, 0.1, 0.9]);
        let direct = amplitude_cartesian(&cart, &c, &b, 1).unwrap().amplitude();
        let via: Complex64 = cart
            .spherical_components()
            .unwrap()
            .iter()
            .map(|(w, s)| w * amplitude_spherical(s, &c, &b, 1).unwrap().amplitude())
            .sum();
        assert!(rel(direct, via) < 1e-10, "{powers:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn general_theorem_reduces_to_n0(
        l in 0u32..=3,
        m_frac in 0.0..1.0f64,
        beta in 0.05..1.0f64,
        center in proptest::array::uniform3(-1.0..1.0f64),
    ) {
        let m = ((2 * l + 1) as f64 * m_frac).floor() as i32 - l as i32;
        let b = synthetic_basis();
        let s = SphericalGaussianState::new(0, lm(l, m.clamp(-(l as i32), l as i32)), beta, center).unwrap();
        let pairs: Vec<_> = AngularIndex::up_to(3)
            .map(|t| (j_lm_n0(t, &s, &b, 0).unwrap(), j_lm_general(t, &s, &b, 0).unwrap()))
            .collect();
        // different groupings of the same finite sums: compare on the scale of the largest element
        let scale = pairs.iter().map(|p| p.0.norm()).fold(1e-300, f64::max);
        for (a, g) in pairs {
            prop_assert!((a - g).norm() <= 1e-13 * scale);
        }
    }
}
