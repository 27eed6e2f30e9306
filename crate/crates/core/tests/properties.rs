use hus_hill::dynamics::simulate;
use hus_hill::{
    cascade_residual_identity_check, composite_constant, discrete_exponential, k0_constant,
    perturb, residual, stability_report, track, EquationSpec, Family, HusError, PeriodicCycle,
    ResidualProfile, TimeIndex, Trajectory,
};
use proptest::prelude::*;

/// Cycles whose factors and period products stay clear of 0 and ±1.
fn generic_cycle() -> impl Strategy<Value = PeriodicCycle> {
    (0.1f64..1.5, prop::collection::vec(-3.0f64..3.0, 1..5)).prop_filter_map(
        "degenerate",
        |(h, values)| {
            let c = PeriodicCycle::new(h, values).ok()?;
            let clear = |c: &PeriodicCycle| {
                (0..c.len()).all(|k| c.factor(k).abs() > 0.05)
                    && (c.period_product().abs() - 1.0).abs() > 0.05
            };
            (clear(&c) && clear(&c.negated())).then_some(c)
        },
    )
}

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_is_multiplicative_over_periods(c in generic_cycle(), k in 0usize..20) {
        let n = c.len();
        let lhs = discrete_exponential(&c, TimeIndex(k + n));
        let rhs = discrete_exponential(&c, TimeIndex(k)) * c.period_product();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn k0_ignores_cycle_repetition(c in generic_cycle(), m in 2usize..4) {
        let base = k0_constant(&c).unwrap();
        let rep = k0_constant(&c.repeated(m)).unwrap();
        prop_assert!((base - rep).abs() <= 1e-10 * base, "{base} vs {rep}");
    }

    #[test]
    fn hill_constant_is_symmetric_under_negation(c in generic_cycle()) {
        let a = composite_constant(&c, Family::Hill).unwrap();
        let b = composite_constant(&c.negated(), Family::Hill).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
        let r = stability_report(&c);
        prop_assert_eq!(r.constant_for(Family::Pqr), r.constant_for(Family::Pqr3));
    }

    #[test]
    fn simulation_is_linear(c in generic_cycle(), f in family(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let spec = EquationSpec::new(f, c).unwrap();
        let order = f.order();
        let y: Vec<f64> = (0..order).map(|i| 0.3 + i as f64).collect();
        let z: Vec<f64> = (0..order).map(|i| -1.0 + 0.5 * i as f64).collect();
        let mix: Vec<f64> = y.iter().zip(&z).map(|(u, v)| a * u + b * v).collect();
        let sy = simulate(&spec, &y, 12).unwrap();
        let sz = simulate(&spec, &z, 12).unwrap();
        let sm = simulate(&spec, &mix, 12).unwrap();
        let comb = Trajectory::linear_combination(a, &sy, b, &sz).unwrap();
        let scale = sy.scale().max(sz.scale()) * (a.abs() + b.abs()).max(1.0);
        for (p, q) in sm.samples().iter().zip(comb.samples()) {
            prop_assert!((p - q).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn tracking_is_sound(c in generic_cycle(), f in family(), seed in any::<u64>()) {
        let spec = EquationSpec::new(f, c.clone()).unwrap();
        let psi = perturb(&spec, &ResidualProfile::random(1e-3, seed).unwrap(), &vec![0.0; f.order()], 64 * c.len()).unwrap();
        match track(&spec, &psi) {
            Ok(res) => {
                prop_assert!(res.within_bound(1e-6), "{f}: {} > {}", res.sup_deviation, res.certified_bound);
                let r = residual(&spec, &res.exact).unwrap();
                prop_assert!(r.sup_abs() <= 1e-8 * res.exact.scale());
            }
            Err(HusError::Inconclusive { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn cascade_identities(c in generic_cycle(), seed in any::<u64>()) {
        let xi = Trajectory::from_fn(c.step(), 0, 40, |k| {
            (((k as u64).wrapping_mul(2654435761) ^ seed) % 2000) as f64 / 1000.0 - 1.0
        }).unwrap();
        for f in [Family::Hill, Family::Pqr, Family::Pqr2, Family::Pqr3, Family::Pqr4] {
            let d = cascade_residual_identity_check(&c, f, &xi).unwrap();
            let coeff = c.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
            // differences divide by h up to three times; compare on that scale
            let scale = xi.scale() * (coeff + 1.0 / c.h()).powi(3);
            prop_assert!(d <= 1e-10 * scale, "{f}: {d}");
        }
    }

    #[test]
    fn three_cycle_argmax_table(h in 0.2f64..3.0, x in 0.01f64..3.0) {
        let boundaries = [1.0, 2f64.sqrt(), (1.0 + 17f64.sqrt()) / 2.0];
        prop_assume!(boundaries.iter().all(|b| (x - b).abs() > 1e-6));
        let a = x / h;
        let r = stability_report(&PeriodicCycle::new(h, vec![0.0, a, -a]).unwrap());
        let pos = r.positive.sums.as_ref().unwrap().argmax();
        let neg = r.negative.sums.as_ref().unwrap().argmax();
        prop_assert_eq!(pos, if x < boundaries[2] { 2 } else { 0 });
        prop_assert_eq!(neg, if x < boundaries[1] { 1 } else { 0 });
    }
}
