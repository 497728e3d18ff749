//! Path delay by logical effort, inverter padding and NAND/NOR comparison.

use vlsikit::effort::{nand_nor_effort, optimize_path, path_delay, PathSpec, PathStage, PolarityConstraint, RHO};

fn main() -> vlsikit::Result<()> {
    let path = PathSpec::new(
        vec![
            PathStage::new("nand2", 4.0 / 3.0, 2.0),
            PathStage::new("nor2", 5.0 / 3.0, 2.0).with_branching(2.0),
            PathStage::inverter(1.0),
        ],
        1.0,
        300.0,
    );
    let d = path_delay(&path, None, 1.0)?;
    println!("F = {:.1}, f = {:.3}, D = {:.2}", d.f_total, d.f_hat, d.d);
    for (name, c) in d.stage_names.iter().zip(&d.input_caps) {
        println!("  {name:<6} C_in {c:.2}");
    }

    let opt = optimize_path(&path, true, PolarityConstraint::Any, RHO, 1.0)?;
    println!("with {} added inverters: D = {:.2}", opt.added_inverters, opt.best.d);

    for n in 2..=4 {
        let e = nand_nor_effort(n, 2.0)?;
        println!("{n}-input: nand g {:.3}, nor g {:.3}", e.nand.per_input, e.nor.per_input);
    }
    Ok(())
}
