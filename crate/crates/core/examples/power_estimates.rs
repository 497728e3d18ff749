//! Signal probability, switching power, bus splitting and Gray counters.

use vlsikit::expr::BoolExpr;
use vlsikit::power::{bus_split, gray_code, signal_probability, switching_power, LoadPoint, PowerEnv, ProbEnv};

fn main() -> vlsikit::Result<()> {
    let f: BoolExpr = "A B + C".parse()?;
    let env: ProbEnv = ["A", "B", "C"].iter().map(|v| (v.to_string(), 0.5)).collect();
    let s = signal_probability(&f, &env)?;
    println!("p(AB + C) = {:.4}, transitions/cycle {:.4}", s.p, s.beta);

    let loads = [LoadPoint::new(50e-15, s.beta), LoadPoint::new(20e-15, 0.5)];
    let p = switching_power(&loads, &PowerEnv::new(1.8, 500e6))?;
    println!("switching power {:.2} uW", p * 1e6);

    let b = bus_split(24, 4, 0.8)?;
    println!("24 modules on 4 buses saves {:.1}%, best is {} buses", b.saving_percent, b.optimal_m);

    let g = gray_code(4, None)?;
    println!("4-bit count: binary {} toggles, Gray {}", g.binary_transitions, g.gray_transitions);
    Ok(())
}
