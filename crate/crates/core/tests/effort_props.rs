use proptest::prelude::*;

use vlsikit::effort::{
    design_fork, nand_nor_effort, optimize_path, path_delay, ForkSpec, PathSpec, PathStage,
    PolarityConstraint,
};

fn path() -> impl Strategy<Value = PathSpec> {
    (
        prop::collection::vec((1.0..3.0f64, 0.5..4.0f64, 1.0..3.0f64), 1..6),
        0.5..5.0f64,
        1.0..2000.0f64,
    )
        .prop_map(|(stages, c_in, h)| {
            let stages = stages
                .into_iter()
                .enumerate()
                .map(|(i, (g, p, b))| PathStage::new(&format!("s{i}"), g, p).with_branching(b))
                .collect();
            PathSpec::new(stages, c_in, c_in * h)
        })
}

/// Σ g_i·b_i·C_out,i / C_in,i + P for explicit stage sizes.
fn delay_at(path: &PathSpec, caps: &[f64]) -> f64 {
    let n = path.stages.len();
    (0..n)
        .map(|i| {
            let s = &path.stages[i];
            let c_out = if i + 1 < n { caps[i + 1] } else { path.c_load };
            s.g.rise * s.b * c_out / caps[i] + s.p.rise
        })
        .sum()
}

proptest! {
    #[test]
    fn equal_effort_sizing_is_a_minimum(p in path(), at in any::<prop::sample::Index>(), up in any::<bool>()) {
        let d = path_delay(&p, None, 1.0).unwrap();
        prop_assert!((delay_at(&p, &d.input_caps) - d.d).abs() <= 1e-9 * d.d);
        let n = p.stages.len();
        prop_assume!(n >= 2);
        // The first stage input is fixed by the path; any later size may move.
        let k = 1 + at.index(n - 1);
        let mut caps = d.input_caps.clone();
        caps[k] *= if up { 1.05 } else { 0.95 };
        prop_assert!(delay_at(&p, &caps) >= d.d * (1.0 - 1e-12));
    }

    #[test]
    fn back_propagated_sizes_give_equal_stage_effort(p in path()) {
        let d = path_delay(&p, None, 1.0).unwrap();
        prop_assert!((d.input_caps[0] - p.c_in).abs() <= 1e-9 * p.c_in);
        let n = p.stages.len();
        for i in 0..n {
            let c_out = if i + 1 < n { d.input_caps[i + 1] } else { p.c_load };
            let f = p.stages[i].g.rise * p.stages[i].b * c_out / d.input_caps[i];
            prop_assert!((f - d.f_hat).abs() <= 1e-9 * d.f_hat);
        }
    }

    #[test]
    fn adding_inverters_never_hurts(p in path(), rho in 2.5..5.0f64) {
        let base = path_delay(&p, None, 1.0).unwrap();
        let opt = optimize_path(&p, true, PolarityConstraint::Any, rho, 1.0).unwrap();
        prop_assert!(opt.best.d <= base.d * (1.0 + 1e-12));
    }

    #[test]
    fn padding_keeps_the_path_effort(p in path(), extra in 0usize..4) {
        let base = path_delay(&p, None, 1.0).unwrap();
        let padded = path_delay(&p, Some(p.stages.len() + extra), 1.0).unwrap();
        prop_assert!((padded.f_total - base.f_total).abs() <= 1e-9 * base.f_total);
        prop_assert_eq!(padded.n, base.n + extra);
    }

    #[test]
    fn nand_beats_nor_when_pmos_is_weaker(n in 2usize..8, mu in 1.01..4.0f64) {
        let e = nand_nor_effort(n, mu).unwrap();
        prop_assert!(e.nand.per_input < e.nor.per_input);
        prop_assert!((e.nand.total - n as f64 * e.nand.per_input).abs() < 1e-12 * e.nand.total);
    }

    #[test]
    fn fork_branches_arrive_together(c_in in 1.0..20.0f64, long in 10.0..500.0f64, short in 10.0..500.0f64, m in 1usize..5) {
        let spec = ForkSpec { c_in, load_long: long, load_short: short, m: Some(m), p_inv: 1.0, rho: 4.0 };
        let f = design_fork(&spec);
        prop_assume!(f.is_ok());
        let f = f.unwrap();
        prop_assert!((f.x + f.x_short - c_in).abs() <= 1e-9 * c_in);
        prop_assert!((f.d_long - f.d_short).abs() <= 1e-6 * f.d_fork);
        prop_assert_eq!(f.long_caps.len(), m + 1);
        prop_assert_eq!(f.short_caps.len(), m);
    }
}
