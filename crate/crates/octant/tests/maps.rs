use num_complex::Complex64;
use octant::homotopy::*;
use octant::maps::*;
use octant::numerics::*;
use proptest::prelude::*;
use std::f64::consts::FRAC_PI_2;

fn c(re: f64, im: f64) -> ExtComplex {
    ExtComplex::Finite(Complex64::new(re, im))
}

fn close(a: ExtComplex, b: ExtComplex, tol: f64) -> bool {
    a.chordal_distance(b) < tol
}

fn class(e: [i8; 3], k: [i64; 3], omega_units: i64) -> OctantTopology {
    OctantTopology::new(e, k, omega_units).unwrap()
}

fn nonconformal_classes(kmax: i64) -> Vec<OctantTopology> {
    let mut out = Vec::new();
    for kx in 1..=kmax {
        for ky in kx..=kmax {
            for kz in ky..=kmax {
                for om in -8 * (3 * kmax + 2)..=8 * (3 * kmax + 2) {
                    let Ok(t) = OctantTopology::new([1, 1, 1], [kx, ky, kz], om) else { continue };
                    if classify(&t.wrapping().unwrap(), &t).kind == Kind::Nonconformal {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn stereographic_examples() {
    assert!(close(stereographic([0.0, 0.0, 1.0]), c(0.0, 0.0), 1e-15));
    assert!(close(stereographic([1.0, 0.0, 0.0]), c(1.0, 0.0), 1e-15));
    assert!(close(stereographic([0.0, 1.0, 0.0]), c(0.0, 1.0), 1e-15));
    assert!(stereographic([0.0, 0.0, -1.0]).is_infinite());
    assert_eq!(stereographic_inverse(ExtComplex::Infinity), [0.0, 0.0, -1.0]);
}

#[test]
fn mobius_examples() {
    assert!(close(gamma(c(1.0, 0.0)), c(0.0, 1.0), 1e-15));
    assert!(close(gamma(c(0.0, 1.0)), c(0.0, 0.0), 1e-15));
    assert!(close(gamma(c(0.0, 0.0)), c(1.0, 0.0), 1e-15));
    for axis in Axis::ALL {
        let w = c(0.3, 0.2);
        assert!(close(mobius_relocate_inv(axis, mobius_relocate(axis, w)), w, 1e-13));
    }
}

#[test]
fn mobius_preserves_quarter_disc_boundary() {
    for i in 0..=50 {
        let t = i as f64 / 50.0;
        for w in [c(t, 0.0), c(0.0, t), ExtComplex::Finite(Complex64::from_polar(1.0, FRAC_PI_2 * t))] {
            let z = gamma(w).finite().unwrap();
            let on_boundary = z.im.abs() < 1e-12 || z.re.abs() < 1e-12 || (z.norm() - 1.0).abs() < 1e-12;
            assert!(on_boundary, "γ({w:?}) = {z}");
            assert!(z.re > -1e-12 && z.im > -1e-12 && z.norm() < 1.0 + 1e-12);
        }
    }
}

#[test]
fn identity_rational_spec() {
    let f = RationalMapSpec::identity();
    for w in [c(0.3, 0.4), c(0.0, 0.7), c(1.0, 0.0)] {
        assert!(close(f.evaluate(w).unwrap(), w, 1e-15));
    }
}

#[test]
fn real_factor_spec() {
    let f = RationalMapSpec { real_factors: vec![(0.5, 1)], ..RationalMapSpec::identity() };
    f.validate().unwrap();
    for i in 0..100 {
        let x = i as f64 / 99.0;
        let v = f.evaluate(c(x, 0.0)).unwrap();
        if let Some(z) = v.finite() {
            assert!(z.im.abs() < 1e-12);
        }
    }
    let one = f.evaluate(c(1.0, 0.0)).unwrap().finite().unwrap();
    assert!((one.re.abs() - 1.0).abs() < 1e-12 && one.im.abs() < 1e-12);
}

#[test]
fn invalid_specs_rejected() {
    let bad = RationalMapSpec { real_factors: vec![(1.5, 1)], ..RationalMapSpec::identity() };
    assert!(bad.validate().is_err());
    let bad = RationalMapSpec { real_factors: vec![(0.5, 1), (0.5, -1)], ..RationalMapSpec::identity() };
    assert!(bad.validate().is_err());
    let bad = RationalMapSpec { complex_factors: vec![(Complex64::new(0.5, -0.1), 1)], ..RationalMapSpec::identity() };
    assert!(bad.validate().is_err());
}

#[test]
fn realized_classes_have_tangent_boundary_values() {
    for (e, k, om) in [([1, 1, 1], [1, 1, 1], 11), ([1, -1, 1], [0, 1, 2], -1), ([-1, -1, 1], [1, 0, 2], 5)] {
        let Ok(t) = OctantTopology::new(e, k, om) else { continue };
        let f = realize_class(&t).unwrap();
        assert_eq!(f.invariants().unwrap(), t);
        assert!(boundary_residual(&f, 300).max() < 1e-9, "{t}");
    }
}

#[test]
fn layer_examples() {
    let eps = 0.05;
    let s = QuarterSphereStack::standard(3, eps).unwrap();
    for x in [0.001, 0.01, 0.02] {
        let v = s.quarter_sphere_layer(1, Complex64::new(x * s.radius(1) / 0.02, 0.0)).unwrap().finite().unwrap();
        assert!(v.im.abs() < 1e-15 && v.re < 0.0);
    }
    // Odd layers reach 1/√ε on their outer circle, even layers √ε.
    for m in 1..=3 {
        let u = Complex64::from_polar(s.radius(m), 0.7);
        let v = s.quarter_sphere_layer(m, u).unwrap();
        let expect = if m % 2 == 1 { 1.0 / eps.sqrt() } else { eps.sqrt() };
        assert!((v.norm() / expect - 1.0).abs() < 1e-12, "layer {m}");
    }
    assert!(s.quarter_sphere_layer(2, Complex64::new(1.0, 0.0)).is_err());
}

#[test]
fn interpolant_examples() {
    let s = QuarterSphereStack::standard(3, 0.05).unwrap();
    for n in 1..=2 {
        let rho = s.radius(n);
        for phi in [0.0, 0.4, FRAC_PI_2] {
            let a = Complex64::from_polar(rho, phi);
            let b = Complex64::from_polar(2.0 * rho, phi);
            assert!(close(s.interpolant_layer(n, a).unwrap(), s.layer_value(n, a), 1e-12));
            assert!(close(s.interpolant_layer(n, b).unwrap(), s.layer_value(n + 1, b), 1e-12));
        }
        for t in [1.1, 1.5, 1.9] {
            let v = s.interpolant_layer(n, Complex64::new(t * rho, 0.0)).unwrap();
            assert!(v.finite().map_or(true, |z| z.im.abs() < 1e-9 * z.norm().max(1.0)));
        }
    }
}

#[test]
fn stack_tables() {
    let one = QuarterSphereStack::standard(1, 0.05).unwrap();
    let z = stack_degree_table(&one, Axis::Z);
    assert_eq!(z.w, [0, 0, 0, 0, 0, 0, -1, -1]);
    let x = stack_degree_table(&one, Axis::X);
    assert_eq!(x.get(Sector([1, -1, -1])), -1);
    assert_eq!(x.get(Sector([-1, -1, -1])), -1);
    assert_eq!(x.abs_sum(), 2);
    for l in 1..=5u32 {
        let s = QuarterSphereStack::standard(l, 0.05).unwrap();
        let t = stack_degree_table(&s, Axis::Z);
        for zs in [1, -1] {
            assert_eq!(t.get(Sector([-1, -1, zs])), -(((l + 1) / 2) as i64));
            assert_eq!(t.get(Sector([1, 1, zs])), (l / 2) as i64);
        }
    }
}

#[test]
fn relocated_stack_degrees_match_tables() {
    let g = QuadratureGrid::new(3).unwrap();
    for layers in 1..=3 {
        for axis in Axis::ALL {
            let stack = QuarterSphereStack::standard(layers, 0.05).unwrap();
            let map = StackMap { stack: stack.clone(), axis, radius: stack.radius(layers) };
            let d = degree_count(&map, &g);
            assert!(d.all_confident());
            for s in Sector::ALL {
                let measured = -d.get(s).d;
                let predicted = stack_degree_table(&stack, axis).get(s);
                assert_eq!(measured, predicted, "L={layers} {axis:?} {s}");
            }
        }
    }
}

#[test]
fn select_case_worked_example() {
    let spec = select_case(&class([1, 1, 1], [1, 1, 1], 3), 0.05).unwrap();
    assert_eq!(spec.case_id, CaseId::C1f);
    assert_eq!(spec.h0, class([-1, 1, 1], [1, 0, 0], 5));
    assert_eq!(spec.m, [1, 0, 0]);
    let check = verify_spec(&spec).unwrap();
    assert_eq!((check.coverage_lhs, check.coverage_rhs), (7, 7));
}

#[test]
fn select_case_1a() {
    let t = class([1, 1, 1], [2, 3, 4], -21);
    assert_eq!(t.wrapping().unwrap().get(Sector([1, 1, 1])), 1);
    let spec = select_case(&t, 0.05).unwrap();
    assert_eq!(spec.case_id, CaseId::C1a);
    assert_eq!(spec.m, [2, 0, 0]);
    assert_eq!(spec.h0.k, [2, 2, 3]);
}

#[test]
fn select_case_2c() {
    let t = class([1, 1, 1], [1, 1, 3], -5);
    assert_eq!(t.wrapping().unwrap().get(Sector([1, 1, 1])), 1);
    let spec = select_case(&t, 0.05).unwrap();
    assert_eq!(spec.case_id, CaseId::C2c);
    assert_eq!(classify(&spec.h0.wrapping().unwrap(), &spec.h0).kind, Kind::Anticonformal);
    assert!(spec.variants.iter().any(|v| *v != StackVariant::Standard));
    verify_spec(&spec).unwrap();
}

#[test]
fn select_case_rejects_bad_input() {
    assert!(matches!(select_case(&class([1, 1, 1], [0, 0, 0], -1), 0.05), Err(octant::Error::NotApplicable(_))));
    assert!(matches!(select_case(&class([1, 1, 1], [1, 1, 1], 3), 0.2), Err(octant::Error::OutOfRange(_))));
}

#[test]
fn coverage_identity_holds_for_every_selected_case() {
    let mut n = 0;
    for t in nonconformal_classes(5) {
        let spec = select_case(&t, 0.05).unwrap_or_else(|e| panic!("{t}: {e}"));
        let check = verify_spec(&spec).unwrap();
        assert_eq!(check.assembled, t.wrapping().unwrap());
        assert_eq!(check.coverage_lhs, check.coverage_rhs);
        for j in 0..3 {
            assert_eq!(spec.h0.e[j], if spec.m[j] % 2 == 0 { 1 } else { -1 });
        }
        n += 1;
    }
    assert!(n > 100);
}

#[test]
fn spec_json_roundtrip() {
    let spec = select_case(&class([1, 1, 1], [1, 1, 3], -5), 0.05).unwrap();
    let text = serde_json::to_string(&spec).unwrap();
    let back: PatchworkSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(back, spec);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["case_id"], "2c");
}

#[test]
fn zero_multiplicities_reduce_to_the_bulk() {
    let h0 = class([1, 1, 1], [1, 1, 1], 11);
    let spec = PatchworkSpec {
        input: h0,
        reflection: [false; 3],
        target: h0,
        case_id: CaseId::GeneralSign,
        h0,
        m: [0, 0, 0],
        variants: [StackVariant::Standard; 3],
        epsilon: 0.05,
        fallback: None,
    };
    let p = assemble_patchwork(&spec).unwrap();
    for w in [c(0.01, 0.01), c(0.5, 0.3), c(0.99, 0.02), c(0.02, 0.97)] {
        assert!(close(p.eval(w), p.bulk.eval(w), 1e-14));
    }
}

#[test]
fn worked_example_patchwork_continuity() {
    let spec = select_case(&class([1, 1, 1], [1, 1, 1], 3), 0.05).unwrap();
    let p = assemble_patchwork(&spec).unwrap();
    let pairs = p.seam_samples(1000);
    assert!(pairs.len() >= 1000);
    assert!(seam_residual(&p, 1000) < 1e-6);
    assert!(boundary_residual(&p, 1000).max() < 1e-9);
}

#[test]
fn patchworks_satisfy_boundary_conditions() {
    for t in nonconformal_classes(3) {
        let p = assemble_patchwork(&select_case(&t, 0.05).unwrap()).unwrap();
        assert!(boundary_residual(&p, 200).max() < 1e-9, "{t}");
        assert!(seam_residual(&p, 100) < 1e-6, "{t}");
    }
}

#[test]
fn degree_additivity() {
    let g = QuadratureGrid::new(3).unwrap();
    for t in [class([1, 1, 1], [1, 1, 1], 3), class([1, 1, 1], [1, 1, 3], -5), class([1, 1, 1], [2, 3, 3], 7)] {
        let spec = select_case(&t, 0.05).unwrap();
        let check = verify_spec(&spec).unwrap();
        let p = assemble_patchwork(&spec).unwrap();
        let d = degree_count(&p, &g);
        assert!(d.all_confident());
        assert_eq!(d.wrapping(), check.assembled, "{t}");
        assert_eq!(d.topology().unwrap(), t);
    }
}

#[test]
fn reflected_classes_measure_their_input() {
    let g = QuadratureGrid::new(3).unwrap();
    let base = class([1, 1, 1], [1, 1, 1], 3);
    for axis in 0..3 {
        let t = reflect_class(&base, axis).unwrap();
        let spec = select_case(&t, 0.05).unwrap();
        assert!(spec.reflection.iter().any(|r| *r));
        let p = assemble_patchwork(&spec).unwrap();
        assert!(boundary_residual(&p, 200).max() < 1e-9);
        assert_eq!(degree_count(&p, &g).wrapping(), t.wrapping().unwrap(), "{t}");
    }
}

#[test]
fn interpolants_carry_no_degree() {
    let g = QuadratureGrid::new(3).unwrap();
    for eps in [0.05, 0.025] {
        let stack = QuarterSphereStack::standard(3, eps).unwrap();
        let map = StackMap { stack: stack.clone(), axis: Axis::Z, radius: stack.radius(3) };
        let d = degree_count(&map, &g);
        assert_eq!(d.wrapping(), stack.z_table(), "ε = {eps}");
    }
}

#[test]
fn interpolant_energy_scales_with_epsilon() {
    // Two layers and one interpolant; the layers alone have closed-form energies.
    let g = QuadratureGrid::new(3).unwrap();
    let mut ratio = Vec::new();
    for eps in [0.05, 0.025] {
        let stack = QuarterSphereStack::standard(2, eps).unwrap();
        let map = StackMap { stack: stack.clone(), axis: Axis::Z, radius: stack.radius(2) };
        let e = dirichlet_energy(&map, &g).unwrap().energy;
        let inner = 2.0 * std::f64::consts::PI / (1.0 + eps);
        let outer = 2.0 * std::f64::consts::PI * (1.0 - 4.0 * eps * eps) / ((1.0 + eps) * (1.0 + 4.0 * eps));
        ratio.push((e - inner - outer) / eps);
    }
    assert!(ratio.iter().all(|r| *r > 0.0));
    assert!((ratio[0] / ratio[1] - 1.0).abs() < 0.25, "E(h)/ε = {ratio:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn stereographic_roundtrip(theta in 0.0f64..std::f64::consts::PI, phi in 0.0f64..std::f64::consts::TAU) {
        let s = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        let back = stereographic_inverse(stereographic(s));
        for j in 0..3 {
            prop_assert!((back[j] - s[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_has_order_three(r in 0.0f64..1.0, phi in 0.0f64..FRAC_PI_2) {
        let w = ExtComplex::Finite(Complex64::from_polar(r, phi));
        let z = gamma(gamma(gamma(w)));
        prop_assert!(close(z, w, 1e-12));
        let q = gamma(w).finite().unwrap();
        prop_assert!(q.re >= -1e-12 && q.im >= -1e-12 && q.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn rational_specs_are_unimodular_on_the_arc(om in -13i64..=13, kx in -2i64..=2, ky in -2i64..=2, kz in -2i64..=2, phi in 0.0f64..FRAC_PI_2) {
        if let Ok(t) = OctantTopology::new([1, 1, 1], [kx, ky, kz], om) {
            if let Ok(f) = realize_class(&t) {
                let v = f.eval(ExtComplex::Finite(Complex64::from_polar(1.0, phi)));
                prop_assert!((v.norm() - 1.0).abs() < 1e-9);
            }
        }
    }
}
