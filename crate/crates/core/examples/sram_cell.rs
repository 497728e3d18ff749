//! Read disturb and write margin of a six-transistor cell, plus address decode.

use vlsikit::memory::{address_decode, cell_node_voltage, AddressField, AddressMap, CellMode, SramCell};

fn main() -> vlsikit::Result<()> {
    let cell = SramCell {
        k_n: 100e-6,
        k_p: 40e-6,
        wl_access: 1.0,
        wl_pulldown: 2.0,
        wl_pullup: 1.0,
        vt_n: 0.4,
        vt_p: 0.4,
        v_dd: 1.8,
        v_bitline: None,
        gamma: 0.0,
        phi_f2: 0.6,
    };
    for mode in [CellMode::ReadDisturb, CellMode::Write] {
        let s = cell_node_voltage(&cell, mode)?;
        println!("{mode:?}: node settles at {:.4} V ({:?})", s.v, s.regions);
    }

    let map = AddressMap {
        address_bits: 32,
        fields: vec![
            AddressField { name: "row".into(), count: 16384 },
            AddressField { name: "bank".into(), count: 4 },
            AddressField { name: "col".into(), count: 1024 },
        ],
    };
    let d = address_decode(&map, 0x004f_1ad8)?;
    for f in &d.fields {
        println!("  {:<6} {}", f.name, f.value);
    }
    Ok(())
}
