use proptest::prelude::*;

use vlsikit::device::{
    bias_point, inverter_vtc, junction_capacitance, mos_capacitances, scale_factors, square_law,
    threshold_voltage, InverterConfig, MosDevice, PhysicalConstants, Polarity, Region, ScalingMode,
    TransistorParams,
};

fn device() -> impl Strategy<Value = MosDevice> {
    (
        any::<bool>(),
        10e-6..300e-6f64,
        0.2..1.0f64,
        0.0..0.6f64,
        0.0..0.1f64,
        0.5e-6..20e-6f64,
        0.2e-6..5e-6f64,
    )
        .prop_map(|(p, k, vt, gamma, lambda, w, l)| {
            let (pol, sign) = if p { (Polarity::Nmos, 1.0) } else { (Polarity::Pmos, -1.0) };
            let mut d = MosDevice::new(pol, k, sign * vt, w, l).with_lambda(lambda);
            d.gamma = sign * gamma;
            d
        })
}

fn junction_device() -> impl Strategy<Value = MosDevice> {
    (1e-6..20e-6f64, 0.1e-6..0.5e-6f64, 0.5e-6..3e-6f64, 1e15..1e17f64, 1e19..1e21f64)
        .prop_map(|(w, x_j, y, n_a, n_d)| {
            let mut d = MosDevice::nmos(50e-6, 0.5, w, 1e-6);
            d.t_ox = Some(10e-9);
            d.x_j = Some(x_j);
            d.y = Some(y);
            d.n_a_sub = Some(n_a);
            d.n_d = Some(n_d);
            d
        })
}

proptest! {
    #[test]
    fn currents_meet_at_the_saturation_edge(beta in 1e-6..1e-2f64, v_ov in 0.01..5.0f64) {
        let (r_sat, i_sat) = square_law(beta, v_ov, v_ov, 0.0);
        let (r_lin, i_lin) = square_law(beta, v_ov, v_ov * (1.0 - 1e-15), 0.0);
        prop_assert_eq!(r_sat, Region::Saturation);
        prop_assert_eq!(r_lin, Region::Linear);
        prop_assert!((i_sat - i_lin).abs() < 1e-12 * i_sat);
    }

    #[test]
    fn regions_match_their_bias_conditions(
        dev in device(), v_gs in 0.0..5.0f64, v_ds in 0.0..5.0f64, v_sb in 0.0..3.0f64,
    ) {
        let op = bias_point(&dev, v_gs, v_ds, v_sb).unwrap();
        let v_ov = v_gs - op.v_t.abs();
        match op.region {
            Region::Cutoff => prop_assert_eq!(op.i_d, 0.0),
            Region::Saturation => prop_assert!(v_ds >= v_ov && v_ov > 0.0),
            Region::Linear => prop_assert!(v_ds < v_ov && v_ds >= 0.0),
        }
        prop_assert!(op.i_d >= 0.0);
    }

    #[test]
    fn zero_body_bias_keeps_vt0(dev in device()) {
        prop_assert_eq!(threshold_voltage(&dev, 0.0).unwrap(), dev.vt0);
    }

    #[test]
    fn body_bias_raises_threshold_magnitude(dev in device(), v_sb in 0.01..3.0f64) {
        let vt = threshold_voltage(&dev, v_sb).unwrap();
        prop_assert!(vt.abs() >= dev.vt0.abs());
    }

    #[test]
    fn junction_cap_falls_with_reverse_bias(dev in junction_device(), v in 0.0..5.0f64, dv in 0.01..2.0f64) {
        let c = PhysicalConstants::default();
        let a = junction_capacitance(&dev, v, &c).unwrap();
        let b = junction_capacitance(&dev, v + dv, &c).unwrap();
        prop_assert!(b.c_bottom < a.c_bottom);
        prop_assert!(b.c_sidewall < a.c_sidewall);
    }

    #[test]
    fn oxide_total_is_the_sum_of_parts(dev in junction_device(), l_d in 0.0..0.2e-6f64, v in 0.0..5.0f64, r in 0..3usize) {
        let mut dev = dev;
        dev.l_d = l_d;
        let region = [Region::Cutoff, Region::Linear, Region::Saturation][r];
        let caps = mos_capacitances(&dev, region, v, &PhysicalConstants::default()).unwrap();
        for x in [caps.c_gb, caps.c_gs, caps.c_gd, caps.c_bottom, caps.c_sidewall] {
            prop_assert!(x >= 0.0);
        }
        let sum = caps.c_gb + caps.c_gs + caps.c_gd;
        prop_assert!((caps.c_ox_total - sum).abs() <= 1e-12 * sum);
    }

    #[test]
    fn vtc_levels_are_ordered(
        kn in 20e-6..200e-6f64, kp in 20e-6..200e-6f64, wn in 1.0..8.0f64, wp in 1.0..8.0f64,
        vtn in 0.3..0.8f64, vtp in 0.3..0.8f64, v_dd in 1.8..5.0f64,
    ) {
        let cfg = InverterConfig::Cmos {
            nmos: TransistorParams::new(kn, wn, vtn),
            pmos: TransistorParams::new(kp, wp, -vtp),
            v_dd,
        };
        let r = inverter_vtc(&cfg).unwrap();
        prop_assert!(r.v_ol <= r.v_il && r.v_il <= r.v_ih && r.v_ih <= r.v_oh);
        prop_assert!(r.v_il <= r.v_m && r.v_m <= r.v_ih);
        prop_assert!((r.nm_l - (r.v_il - r.v_ol)).abs() < 1e-12);
        prop_assert!((r.nm_h - (r.v_oh - r.v_ih)).abs() < 1e-12);
    }

    #[test]
    fn general_scaling_with_equal_divisors_is_constant_field(s in 1.0..10.0f64) {
        let general = scale_factors(ScalingMode::General { s, m: s }).unwrap();
        let field = scale_factors(ScalingMode::ConstantField { s }).unwrap();
        for (name, f) in &field.factors {
            prop_assert!(*f > 0.0);
            prop_assert!((general.get(name) - f).abs() <= 1e-12 * f);
        }
    }
}
