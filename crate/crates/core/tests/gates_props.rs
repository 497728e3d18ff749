use std::collections::BTreeMap;

use proptest::prelude::*;

use vlsikit::expr::BoolExpr;
use vlsikit::gates::{
    charge_share_voltage, common_euler_ordering, compound_gate, delay_bounds, ordering_is_valid,
    ChargeShareCase, ReferenceInverter,
};

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Series-parallel pull-down expressions over up to six inputs, some literals negated.
fn sp_expr() -> impl Strategy<Value = BoolExpr> {
    let leaf = (0..NAMES.len(), any::<bool>()).prop_map(|(i, neg)| {
        let v = BoolExpr::var(NAMES[i]);
        if neg { BoolExpr::not(v) } else { v }
    });
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(BoolExpr::And),
            prop::collection::vec(inner, 2..=3).prop_map(BoolExpr::Or),
        ]
    })
}

fn assignments(inputs: &[String]) -> impl Iterator<Item = BTreeMap<String, bool>> + '_ {
    (0u32..1 << inputs.len())
        .map(move |bits| inputs.iter().enumerate().map(|(i, s)| (s.clone(), bits >> i & 1 == 1)).collect())
}

proptest! {
    #[test]
    fn exactly_one_network_conducts(f in sp_expr(), mu in 1.0..4.0f64) {
        let gate = compound_gate(&f, ReferenceInverter::default(), mu).unwrap();
        let inputs = gate.inputs();
        for a in assignments(&inputs) {
            // `output` itself rejects assignments where both or neither network conducts.
            let out = gate.output(&a).unwrap();
            prop_assert_eq!(out, !f.eval(&a).unwrap());
        }
    }

    #[test]
    fn every_series_path_matches_the_reference(f in sp_expr(), mu in 1.0..4.0f64, w_n in 0.5..3.0f64) {
        let reference = ReferenceInverter { w_n, w_p: None };
        let gate = compound_gate(&f, reference, mu).unwrap();
        for path in gate.pdn.paths() {
            let r: f64 = path.iter().map(|(_, w)| w_n / w).sum();
            prop_assert!((r - 1.0).abs() < 1e-12);
        }
        for path in gate.pun.paths() {
            let r: f64 = path.iter().map(|(_, w)| mu * w_n / w).sum();
            prop_assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn worst_delay_is_never_below_best(f in sp_expr(), mu in 1.0..4.0f64, c_l in 0.1..10.0f64) {
        let gate = compound_gate(&f, ReferenceInverter::default(), mu).unwrap();
        // Contradictions such as f·f̄ never conduct and are rejected.
        let b = delay_bounds(&gate, c_l);
        prop_assume!(b.is_ok());
        let b = b.unwrap();
        prop_assert!(b.rise.worst >= b.rise.best * (1.0 - 1e-12));
        prop_assert!(b.fall.worst >= b.fall.best * (1.0 - 1e-12));
        prop_assert!(b.rise.ratio >= 1.0 - 1e-12 && b.fall.ratio >= 1.0 - 1e-12);
    }

    #[test]
    fn found_euler_orderings_validate(f in sp_expr()) {
        let gate = compound_gate(&f, ReferenceInverter::default(), 2.0).unwrap();
        if let Some(ord) = common_euler_ordering(&gate).unwrap() {
            prop_assert!(ordering_is_valid(&gate, &ord.order).unwrap());
        }
    }

    #[test]
    fn charge_sharing_lands_between_the_two_voltages(
        c_out in 1e-15..1e-12f64,
        c_exposed in prop::collection::vec(0.0..1e-12f64, 0..4),
        v_dd in 0.5..5.0f64,
        v_internal in 0.0..1.0f64,
    ) {
        let v_int = v_internal * v_dd;
        let v = charge_share_voltage(&ChargeShareCase { c_out, c_exposed: c_exposed.clone(), v_dd, v_internal: v_int }).unwrap();
        prop_assert!(v <= v_dd * (1.0 + 1e-12) && v >= v_int * (1.0 - 1e-12));
        let total: f64 = c_out + c_exposed.iter().sum::<f64>();
        let charge = c_out * v_dd + c_exposed.iter().sum::<f64>() * v_int;
        prop_assert!((v * total - charge).abs() <= 1e-12 * charge.max(1e-30));
    }
}
