mod common;

use std::f64::consts::FRAC_PI_3;

use common::*;
use nalgebra::Matrix2;
use proptest::prelude::*;
use tubular::geom::{curvatures, fundamental_forms, gauss_map, SurfaceSpec};

fn builtins() -> Vec<SurfaceSpec> {
    vec![
        SurfaceSpec::Plane,
        SurfaceSpec::Sphere { radius: 1.0 },
        SurfaceSpec::Sphere { radius: 2.3 },
        ellipsoid_spec(),
        SurfaceSpec::Cylinder { radius: 0.7 },
        torus_spec(),
        helix_tube_spec(),
        fourier_tube_spec(),
    ]
}

#[test]
fn torus_jet_matches_finite_differences() {
    let s = surface(torus_spec());
    for (v1, v2) in random_points(&s, 20, 1, None) {
        let j = s.jet(v1, v2).unwrap();
        for (i, k, h) in [(1, 0, 1e-3), (0, 1, 1e-3), (2, 0, 5e-3), (1, 1, 1e-3), (0, 2, 5e-3), (3, 0, 1e-2), (0, 3, 1e-2)] {
            let err = (fd_partial(&s, v1, v2, i, k, h) - j.partial(i, k)).norm();
            assert!(err < 1e-6, "∂({i},{k}) at ({v1},{v2}): {err:e}");
        }
    }
}

#[test]
fn torus_forms_at_pi_over_three() {
    let s = surface(torus_spec());
    let (g, b, _) = fundamental_forms(&s.jet(0.4, FRAC_PI_3).unwrap()).unwrap();
    assert!((g.a11 - 0.5625).abs() < 1e-14 && g.a12.abs() < 1e-14 && (g.a22 - 0.25).abs() < 1e-14);
    assert!((b.a11 + 0.375).abs() < 1e-14 && b.a12.abs() < 1e-14 && (b.a22 - 0.5).abs() < 1e-14);
    let (k, h) = curvatures(&s.jet(0.4, FRAC_PI_3).unwrap()).unwrap();
    assert!((k + 4.0 / 3.0).abs() < 1e-13);
    assert!((h - 2.0 / 3.0).abs() < 1e-13);
    let (fk, fh) = fd_curvatures(&s, 0.4, FRAC_PI_3);
    assert!((fk + 4.0 / 3.0).abs() < 1e-6 && (fh - 2.0 / 3.0).abs() < 1e-6);
}

#[test]
fn unit_sphere_curvatures() {
    let s = surface(SurfaceSpec::Sphere { radius: 1.0 });
    for (v1, v2) in random_points(&s, 50, 2, None) {
        let p = s.point(v1, v2).unwrap();
        assert!((p.gauss_curvature - 1.0).abs() < 1e-12);
        // outward normal with this chart
        assert!((p.mean_curvature + 1.0).abs() < 1e-12);
        assert!((p.normal - p.position).norm() < 1e-12);
    }
}

#[test]
fn curvatures_match_finite_difference_oracle() {
    for spec in [ellipsoid_spec(), helix_tube_spec(), fourier_tube_spec()] {
        let s = surface(spec);
        for (v1, v2) in random_points(&s, 10, 3, None) {
            let p = s.point(v1, v2).unwrap();
            let (fk, fh) = fd_curvatures(&s, v1, v2);
            assert!((p.gauss_curvature - fk).abs() < 1e-5 * (1.0 + fk.abs()));
            assert!((p.mean_curvature - fh).abs() < 1e-5 * (1.0 + fh.abs()));
        }
    }
}

#[test]
fn torus_normal_is_frame_combination() {
    let s = surface(torus_spec());
    let tube = s.as_tube().unwrap();
    for (u, phi) in random_points(&s, 1000, 4, None) {
        let n = gauss_map(&s.jet(u, phi).unwrap()).unwrap().n;
        assert!((n - tube.gauss_map(u, phi).unwrap()).norm() < 1e-10);
    }
}

#[test]
fn plane_gauss_map_is_constant() {
    let s = surface(SurfaceSpec::Plane);
    let gm = gauss_map(&s.jet(0.2, 0.9).unwrap()).unwrap();
    assert_eq!(gm.n, V3::z());
    assert!(gm.dn.iter().chain(gm.ddn.iter().flatten()).all(|v| v.norm() == 0.0));
}

fn shape_operator_curvatures(g: Matrix2<f64>, b: Matrix2<f64>) -> (f64, f64) {
    let s = g.try_inverse().unwrap() * b;
    let eig = s.complex_eigenvalues();
    let (k1, k2) = (eig[0].re, eig[1].re);
    (k1 * k2, 0.5 * (k1 + k2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classical_identities(which in 0usize..8, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let s = surface(builtins()[which].clone());
        let d = s.sampling_domain();
        let v1 = d.v1[0] + a * (d.v1[1] - d.v1[0]);
        let v2 = d.v2[0] + b * (d.v2[1] - d.v2[0]);
        let jet = s.jet(v1, v2).unwrap();
        let p = s.point(v1, v2).unwrap();
        let gm = gauss_map(&jet).unwrap();
        let (k, h) = (p.gauss_curvature, p.mean_curvature);
        prop_assert!((gm.n.norm() - 1.0).abs() < 1e-12);
        let r = [jet.partial(1, 0), jet.partial(0, 1)];
        prop_assert!(gm.n.dot(&r[0]).abs() < 1e-10 && gm.n.dot(&r[1]).abs() < 1e-10);
        for si in 0..2 {
            for t in 0..2 {
                let e = p.third.get(si, t);
                prop_assert!((e - (2.0 * h * p.second.get(si, t) - k * p.first.get(si, t))).abs() < 1e-8);
                // Weingarten
                prop_assert!((gm.dn[si].dot(&r[t]) + p.second.get(si, t)).abs() < 1e-8);
                prop_assert!((p.first.get(si, t) - r[si].dot(&r[t])).abs() < 1e-12);
            }
        }
        let det_g = p.first.det;
        prop_assert!((k - p.second.det / det_g).abs() < 1e-12 * (1.0 + k.abs()));
        let (ks, hs) = shape_operator_curvatures(p.first.matrix(), p.second.matrix());
        prop_assert!((ks - k).abs() < 1e-8 && (hs - h).abs() < 1e-8);
        // inverse components
        let id = p.first.matrix() * nalgebra::Matrix2::new(p.first.inv[0], p.first.inv[1], p.first.inv[1], p.first.inv[2]);
        prop_assert!((id - Matrix2::identity()).amax() < 1e-12);
    }
}
