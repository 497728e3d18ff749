use proptest::prelude::*;

use vlsikit::memory::{
    address_decode, bitline_model, blocked_read_delay, cell_node_voltage, decoder_cost,
    AddressField, AddressMap, ArrayPlan, BitlineGeometry, CellMode, DecoderStage, GateKind, SramCell,
};

fn cell() -> impl Strategy<Value = SramCell> {
    (50e-6..200e-6f64, 20e-6..80e-6f64, 0.5..3.0f64, 1.0..6.0f64, 0.5..3.0f64, 0.3..0.7f64, 0.3..0.7f64, 1.8..5.0f64)
        .prop_map(|(k_n, k_p, wl_access, wl_pulldown, wl_pullup, vt_n, vt_p, v_dd)| SramCell {
            k_n,
            k_p,
            wl_access,
            wl_pulldown,
            wl_pullup,
            vt_n,
            vt_p,
            v_dd,
            v_bitline: None,
            gamma: 0.0,
            phi_f2: 0.6,
        })
}

/// Square-law drain current with overdrive and drain bias given as magnitudes.
fn i_d(beta: f64, v_ov: f64, v_ds: f64) -> f64 {
    if v_ov <= 0.0 {
        0.0
    } else if v_ds < v_ov {
        beta * (v_ov * v_ds - v_ds * v_ds / 2.0)
    } else {
        beta / 2.0 * v_ov * v_ov
    }
}

proptest! {
    #[test]
    fn weaker_pulldown_disturbs_more(c in cell(), shrink in 0.3..0.95f64) {
        let strong = cell_node_voltage(&c, CellMode::ReadDisturb);
        let weak = cell_node_voltage(&SramCell { wl_pulldown: c.wl_pulldown * shrink, ..c }, CellMode::ReadDisturb);
        prop_assume!(strong.is_ok() && weak.is_ok());
        prop_assert!(weak.unwrap().v >= strong.unwrap().v - 1e-12);
    }

    #[test]
    fn read_node_balances_the_currents(c in cell()) {
        let sol = cell_node_voltage(&c, CellMode::ReadDisturb);
        prop_assume!(sol.is_ok());
        let v = sol.unwrap().v;
        prop_assert!((0.0..=c.v_dd).contains(&v));
        let access = i_d(c.k_n * c.wl_access, c.v_dd - v - c.vt_n, c.v_dd - v);
        let pulldown = i_d(c.k_n * c.wl_pulldown, c.v_dd - c.vt_n, v);
        prop_assert!((access - pulldown).abs() <= 1e-9 * access.max(1e-12));
    }

    #[test]
    fn write_node_balances_the_currents(c in cell()) {
        let sol = cell_node_voltage(&c, CellMode::Write);
        prop_assume!(sol.is_ok());
        let v = sol.unwrap().v;
        prop_assert!((0.0..=c.v_dd).contains(&v));
        let access = i_d(c.k_n * c.wl_access, c.v_dd - c.vt_n, v);
        let pullup = i_d(c.k_p * c.wl_pullup, c.v_dd - c.vt_p, c.v_dd - v);
        prop_assert!((access - pullup).abs() <= 1e-9 * access.max(1e-12));
    }

    #[test]
    fn read_delay_coefficients_are_triangular(rows in 1u32..2048, cols in 1u32..2048, levels in 0u32..5) {
        let plan = ArrayPlan {
            rows, cols, decode_levels: levels, mux_levels: 0,
            r_word: None, c_word: None, r_bit: None, c_bit: None, d_gate: None, d_mux: None,
        };
        let d = blocked_read_delay(&plan).unwrap();
        let tri = |n: u32| (n as u64 * (n as u64 + 1) / 2) as f64;
        prop_assert_eq!(d.word_coeff, 0.69 * tri(cols));
        prop_assert_eq!(d.bit_coeff, 0.69 * tri(rows));
    }

    #[test]
    fn decoder_cost_adds_over_stages(
        a in prop::collection::vec((0u8..3, 2u32..6, 1u64..5000), 0..5),
        b in prop::collection::vec((0u8..3, 2u32..6, 1u64..5000), 0..5),
    ) {
        let stage = |&(k, fan_in, count): &(u8, u32, u64)| DecoderStage {
            kind: [GateKind::Nand, GateKind::Nor, GateKind::Inverter][k as usize],
            fan_in,
            count,
        };
        let sa: Vec<DecoderStage> = a.iter().map(stage).collect();
        let sb: Vec<DecoderStage> = b.iter().map(stage).collect();
        let both: Vec<DecoderStage> = sa.iter().chain(&sb).copied().collect();
        prop_assert_eq!(decoder_cost(&both).unwrap(), decoder_cost(&sa).unwrap() + decoder_cost(&sb).unwrap());
    }

    #[test]
    fn bitline_delay_is_half_rc(
        rows in 1u32..1024, h in 0.5e-6..5e-6f64, w in 0.1e-6..1e-6f64, aw in 0.1e-6..1e-6f64,
        c_d in 0.0..1e-9f64, c_pp in 0.0..1e-4f64, c_fr in 0.0..1e-10f64, r_sq in 0.01..1.0f64,
    ) {
        let g = BitlineGeometry { rows, cell_height: h, bl_width: w, access_width: aw, c_d, c_pp, c_fr, fringe_edges: 2, r_sq };
        let m = bitline_model(&g).unwrap();
        prop_assert_eq!(m.elmore_distributed, m.r_total * m.c_total / 2.0);
    }

    #[test]
    fn address_fields_round_trip(widths in prop::collection::vec(0u32..8, 1..6), raw in any::<u64>()) {
        let fields: Vec<AddressField> = widths
            .iter()
            .enumerate()
            .map(|(i, &w)| AddressField { name: format!("f{i}"), count: 1 << w })
            .collect();
        let map = AddressMap { address_bits: 48, fields };
        let addr = raw & ((1u64 << 48) - 1);
        let d = address_decode(&map, addr).unwrap();
        prop_assert_eq!(map.encode(&d).unwrap(), addr);
        let total: u32 = d.fields.iter().map(|f| f.width).sum();
        prop_assert_eq!(total, 48);
    }
}
