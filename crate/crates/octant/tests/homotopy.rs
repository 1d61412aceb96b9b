use octant::free_group::{inverse, Word};
use octant::homotopy::*;
use octant::maps::{reflect_class, select_case, CaseId};
use proptest::prelude::*;

fn class(e: [i8; 3], k: [i64; 3], omega_units: i64) -> OctantTopology {
    OctantTopology::new(e, k, omega_units).unwrap()
}

fn worked_example() -> OctantTopology {
    class([1, 1, 1], [1, 1, 1], 3)
}

/// 8·w_σ = ω + 4 Σ σ_j k_j + e_x e_y e_z (1 − 8 δ_{σ,e}).
fn wrapping_oracle(t: &OctantTopology, s: Sector) -> Option<i64> {
    let p = t.e.iter().map(|&v| v as i64).product::<i64>();
    let dot: i64 = (0..3).map(|j| s.0[j] as i64 * t.k[j]).sum();
    let delta = i64::from(s.0 == t.e);
    let eight = t.omega_units + 4 * dot + p * (1 - 8 * delta);
    (eight % 8 == 0).then_some(eight / 8)
}

fn phi(x: i64) -> i64 {
    x.max(0)
}

/// Δ evaluated at one explicit choice of σ₊ and σ₋.
fn delta_at(w: &WrappingNumbers, chi: i64, sp: Sector, sm: Sector) -> i64 {
    let plus = w.get(sp) - sp.neighbours().map(|t| phi(w.get(t))).sum::<i64>() - chi;
    let minus = w.get(sm).abs() - sm.neighbours().map(|t| phi(-w.get(t))).sum::<i64>() - chi;
    2 * 0.max(plus).max(minus)
}

fn valid_class() -> impl Strategy<Value = OctantTopology> {
    (prop::array::uniform3(prop::bool::ANY), prop::array::uniform3(-4i64..=4), -40i64..=40).prop_filter_map(
        "integral wrapping numbers",
        |(e, k, om)| {
            let e = e.map(|b| if b { 1 } else { -1 });
            OctantTopology::new(e, k, om).ok()
        },
    )
}

#[test]
fn sector_basics() {
    assert_eq!(Sector::ALL.len(), 8);
    for s in Sector::ALL {
        assert_eq!(s.neighbours().count(), 3);
        assert_eq!(Sector::parse(&s.to_string()).unwrap(), s);
        assert!(!s.adjacent(s.negated()));
    }
    assert!(Sector::parse("+ +").is_err());
}

#[test]
fn worked_example_wrapping() {
    let w = wrapping_from_invariants(&worked_example()).unwrap();
    assert_eq!(w.w, [1, 1, 1, 0, 1, 0, 0, -1]);
    assert_eq!(invariants_from_wrapping(&w).unwrap(), worked_example());
    let c = classify(&w, &worked_example());
    assert_eq!(c.kind, Kind::Nonconformal);
    assert_eq!(c.sigma_plus, Some(Sector([1, 1, 1])));
    assert_eq!(c.sigma_minus, Some(Sector([-1, -1, -1])));
    assert_eq!(c.chi, 0);
    assert_eq!(delta_invariant(&w, &c).unwrap(), 2);
    assert_eq!(infimum_energy(&w, &c).unwrap(), 7);
}

#[test]
fn identity_class() {
    let t = class([1, 1, 1], [0, 0, 0], -1);
    let w = t.wrapping().unwrap();
    assert_eq!(w.w, [-1, 0, 0, 0, 0, 0, 0, 0]);
    let c = classify(&w, &t);
    assert_eq!(c.kind, Kind::Conformal);
    assert_eq!(infimum_energy(&w, &c).unwrap(), 1);
}

#[test]
fn mirrored_edge_signs() {
    // With k = 0 only the δ term depends on e: flipping every edge sign
    // (with ω shifted by 2 to stay integral) moves weight from σ = e to σ = −e.
    for om in -9..=9 {
        let Ok(a) = OctantTopology::new([1, 1, 1], [0, 0, 0], om) else { continue };
        let b = class([-1, -1, -1], [0, 0, 0], om + 2);
        let (wa, wb) = (a.wrapping().unwrap(), b.wrapping().unwrap());
        for s in Sector::ALL {
            let expect = i64::from(s.0 == [1, 1, 1]) + i64::from(s.0 == [-1, -1, -1]);
            assert_eq!(wb.get(s) - wa.get(s), expect, "{s} for ω = {om}");
        }
    }
}

#[test]
fn rejects_non_integral() {
    assert!(matches!(OctantTopology::new([1, 1, 1], [1, 1, 1], 2), Err(octant::Error::InvalidTopology(_))));
    assert!(OctantTopology::new([1, 0, 1], [1, 1, 1], 3).is_err());
}

#[test]
fn inconsistent_wrapping_rejected() {
    let mut w = worked_example().wrapping().unwrap();
    for s in Sector::ALL {
        let v = w.get(s);
        w.set(s, v + 1);
        assert!(matches!(invariants_from_wrapping(&w), Err(octant::Error::InvalidWrapping(_))), "{s}");
        w.set(s, v);
    }
}

#[test]
fn all_zero_wrapping() {
    let w = WrappingNumbers::zero();
    assert!(invariants_from_wrapping(&w).is_err());
    let c = classify_with_chi(&w, 0);
    assert_eq!(c.kind, Kind::Conformal);
    assert_eq!(infimum_energy(&w, &c).unwrap(), 0);
}

#[test]
fn classification_conventions() {
    let w = WrappingNumbers::new([-2, 0, -1, 0, 0, 0, 0, 0]);
    assert_eq!(classify_with_chi(&w, 0).kind, Kind::Conformal);
    let w = WrappingNumbers::new([2, 0, 1, 0, 0, 0, 0, 0]);
    assert_eq!(classify_with_chi(&w, 0).kind, Kind::Anticonformal);
    let c = classify_with_chi(&w, 0);
    assert!(c.sigma_plus.is_none() && c.sigma_minus.is_none());
    assert_eq!(delta_invariant(&w, &c).unwrap(), 0);
}

#[test]
fn chi_flag() {
    let t = class([1, 1, 1], [1, -1, 1], 3);
    assert_eq!(t.chi(), 1);
    assert_eq!(classify(&t.wrapping().unwrap(), &t).chi, 1);
    assert_eq!(worked_example().chi(), 0);
}

#[test]
fn delta_closed_form_case_1a() {
    // Closed form Δ = 2 min(n, k_x − 1) on the Case-1a range.
    let mut seen = 0;
    for k in [[2, 3, 3], [2, 3, 4], [3, 3, 4], [3, 4, 5]] {
        for om in -80..=80 {
            let Ok(t) = OctantTopology::new([1, 1, 1], k, om) else { continue };
            let w = t.wrapping().unwrap();
            let c = classify(&w, &t);
            if c.kind != Kind::Nonconformal {
                continue;
            }
            let Ok(spec) = select_case(&t, 0.05) else { continue };
            if spec.case_id != CaseId::C1a {
                continue;
            }
            let n = w.get(Sector([1, 1, 1]));
            assert_eq!(delta_invariant(&w, &c).unwrap(), 2 * n.min(k[0] - 1), "{t}");
            seen += 1;
        }
    }
    assert!(seen >= 4, "only {seen} Case-1a classes");
}

#[test]
fn delta_tie_independence() {
    // Classes with tied extremal sectors, including the worked example.
    let mut tied = 0;
    for kx in 1..=3 {
        for ky in kx..=3 {
            for kz in ky..=3 {
                for om in -60..=60 {
                    let Ok(t) = OctantTopology::new([1, 1, 1], [kx, ky, kz], om) else { continue };
                    let w = t.wrapping().unwrap();
                    let c = classify(&w, &t);
                    if c.kind != Kind::Nonconformal {
                        continue;
                    }
                    let max = *w.w.iter().max().unwrap();
                    let min = *w.w.iter().min().unwrap();
                    let tops: Vec<Sector> = Sector::ALL.into_iter().filter(|s| w.get(*s) == max).collect();
                    let bottoms: Vec<Sector> = Sector::ALL.into_iter().filter(|s| w.get(*s) == min).collect();
                    if tops.len() + bottoms.len() > 2 {
                        tied += 1;
                    }
                    let d = delta_invariant(&w, &c).unwrap();
                    for &sp in &tops {
                        for &sm in &bottoms {
                            assert_eq!(delta_at(&w, c.chi as i64, sp, sm), d, "{t} at {sp}/{sm}");
                        }
                    }
                }
            }
        }
    }
    assert!(tied > 10);
}

#[test]
fn prism_bound_examples() {
    let e = 7.0 * std::f64::consts::PI;
    let (lo, hi) = prism_bounds(e, 1.0, 1.0, 1.0).unwrap();
    assert!((lo - 28.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!((hi - 28.0 * 3f64.sqrt() * std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(prism_bounds(0.0, 2.0, 1.0, 0.5).unwrap(), (0.0, 0.0));
    let (lo, hi) = prism_bounds(e, 3.0, 2.0, 1.0).unwrap();
    assert!((lo / hi - 1.0 / 14f64.sqrt()).abs() < 1e-12);
    assert!(prism_bounds(e, 1.0, 2.0, 1.0).is_err());
}

#[test]
fn boundary_word_examples() {
    let (b, c0) = boundary_word([1, 1, 1], KinkCase::PositiveKinks).unwrap();
    assert!(b.is_empty());
    assert_eq!(c0, inverse(&Word::from_signed(3, &[2, 1, 3]).unwrap()));
    let c312 = Word::from_signed(3, &[3, 1, 2]).unwrap();
    assert_eq!(boundary_word([2, 2, 2], KinkCase::PositiveKinks).unwrap().0, c312);
    assert_eq!(boundary_word([-1, -1, -1], KinkCase::NegativeKinks).unwrap().0, c312);
    assert!(boundary_word([1, -1, 1], KinkCase::PositiveKinks).is_err());
}

#[test]
fn spelling_bound_worked_example() {
    let b = spelling_lower_bound_check(&worked_example(), 1, 2).unwrap();
    assert_eq!(b.value, 7);
    assert_eq!(b.infimum, 7);
}

#[test]
fn spelling_bound_k222() {
    for om in -40..=40 {
        let Ok(t) = OctantTopology::new([1, 1, 1], [2, 2, 2], om) else { continue };
        let w = t.wrapping().unwrap();
        let c = classify(&w, &t);
        let b = spelling_lower_bound_check(&t, 3, 2).unwrap();
        if c.kind == Kind::Nonconformal {
            // 2 w₀ − 2 Σ Φ(w_j) over the neighbours of σ₊, plus Σ|w|.
            assert_eq!(b.value, w.abs_sum() + delta_invariant(&w, &c).unwrap(), "{t}");
        } else {
            assert_eq!(b.value, w.abs_sum(), "{t}");
        }
    }
}

#[test]
fn spelling_bound_unsupported_patterns() {
    let t = class([1, 1, 1], [1, -1, 1], 3);
    assert!(matches!(spelling_lower_bound_check(&t, 1, 1), Err(octant::Error::Unsupported(_))));
    let t = class([1, 1, 1], [0, 1, 1], 7);
    assert!(matches!(spelling_lower_bound_check(&t, 1, 1), Err(octant::Error::Unsupported(_))));
}

#[test]
fn class_json_forms() {
    let v: serde_json::Value = serde_json::json!({"e": [1, 1, 1], "k": [1, 1, 1], "omega_units": 3});
    let (t, w) = ClassInput::from_json(&v).unwrap().resolve().unwrap();
    assert_eq!(t, worked_example());
    let wv = serde_json::to_value(w).unwrap();
    assert_eq!(wv["w"]["+++"], 1);
    let (t2, _) = ClassInput::from_json(&wv).unwrap().resolve().unwrap();
    assert_eq!(t2, worked_example());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn roundtrip(t in valid_class()) {
        let w = wrapping_from_invariants(&t).unwrap();
        prop_assert_eq!(invariants_from_wrapping(&w).unwrap(), t);
    }

    #[test]
    fn formula_matches_oracle(t in valid_class()) {
        let w = t.wrapping().unwrap();
        for s in Sector::ALL {
            prop_assert_eq!(Some(w.get(s)), wrapping_oracle(&t, s));
        }
    }

    #[test]
    fn omega_shift(t in valid_class()) {
        let shifted = class(t.e, t.k, t.omega_units + 8);
        let (a, b) = (t.wrapping().unwrap(), shifted.wrapping().unwrap());
        for s in Sector::ALL {
            prop_assert_eq!(b.get(s), a.get(s) + 1);
        }
    }

    #[test]
    fn reflection_permutes_sectors(t in valid_class(), axis in 0usize..3) {
        let r = reflect_class(&t, axis).unwrap();
        prop_assert_eq!(r.e[axis], -t.e[axis]);
        let (a, b) = (t.wrapping().unwrap(), r.wrapping().unwrap());
        for s in Sector::ALL {
            let mut m = s.0;
            m[axis] = -m[axis];
            prop_assert_eq!(b.get(s), -a.get(Sector(m)));
            prop_assert_eq!(Some(b.get(s)), wrapping_oracle(&r, s));
        }
    }

    #[test]
    fn infimum_dominates_abelian(t in valid_class()) {
        let w = t.wrapping().unwrap();
        let c = classify(&w, &t);
        let d = delta_invariant(&w, &c).unwrap();
        prop_assert!(d >= 0);
        let e = infimum_energy(&w, &c).unwrap();
        prop_assert!(e >= w.abs_sum());
        prop_assert_eq!(e == w.abs_sum(), d == 0);
        if c.kind != Kind::Nonconformal {
            prop_assert_eq!(d, 0);
        }
    }

    #[test]
    fn classification_consistent(t in valid_class()) {
        let w = t.wrapping().unwrap();
        let c = classify(&w, &t);
        let nonconformal = w.w.iter().any(|v| *v > 0) && w.w.iter().any(|v| *v < 0);
        prop_assert_eq!(c.kind == Kind::Nonconformal, nonconformal);
        prop_assert_eq!(c.sigma_plus.is_some(), nonconformal);
        prop_assert_eq!(c.chi == 1, t.k[0] * t.k[1] * t.k[2] < 0);
    }
}
