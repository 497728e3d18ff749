//! Threshold shift, bias point, inverter transfer curve and scaling factors.

use vlsikit::device::{
    bias_point, inverter_vtc, scale_factors, threshold_voltage, InverterConfig, MosDevice, Polarity,
    ScalingMode, TransistorParams,
};

fn main() -> vlsikit::Result<()> {
    let mut p = MosDevice::new(Polarity::Pmos, 20e-6, -0.5, 2e-6, 1e-6);
    p.gamma = -0.25;
    p.phi_f2 = 0.4;
    for v_sb in [0.0, 0.3, 0.6] {
        println!("pmos V_T at V_SB={v_sb:.1}: {:.4} V", threshold_voltage(&p, v_sb)?);
    }

    let n = MosDevice::new(Polarity::Nmos, 100e-6, 0.5, 4e-6, 1e-6);
    let op = bias_point(&n, 1.2, 0.3, 0.0)?;
    println!("nmos at V_GS=1.2, V_DS=0.3: {:?}, I_D = {:.3e} A", op.region, op.i_d);

    let inv = InverterConfig::Cmos {
        nmos: TransistorParams::new(100e-6, 1.0, 0.4),
        pmos: TransistorParams::new(40e-6, 2.5, -0.4),
        v_dd: 1.8,
    };
    let vtc = inverter_vtc(&inv)?;
    println!(
        "cmos inverter: V_IL={:.3} V_IH={:.3} V_M={:.3} NM_L={:.3} NM_H={:.3}",
        vtc.v_il, vtc.v_ih, vtc.v_m, vtc.nm_l, vtc.nm_h
    );

    let f = scale_factors(ScalingMode::General { s: 1.4, m: 1.2 })?;
    for (k, v) in &f.factors {
        println!("  {k:<14} x{v:.4}");
    }
    Ok(())
}
