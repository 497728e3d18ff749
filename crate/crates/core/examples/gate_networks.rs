//! Complementary gate construction, delay bounds and a shared Euler ordering.

use std::collections::BTreeMap;

use vlsikit::device::Polarity;
use vlsikit::expr::BoolExpr;
use vlsikit::gates::{common_euler_ordering, compound_gate, delay_bounds, evaluate_network, ReferenceInverter};

fn main() -> vlsikit::Result<()> {
    let f: BoolExpr = "A B + C D E".parse()?;
    let gate = compound_gate(&f, ReferenceInverter::default(), 2.0)?;
    println!("inputs {:?}, area {:.1}, area ratio {:.3}", gate.inputs(), gate.area(), gate.area_ratio());

    let b = delay_bounds(&gate, 1.0)?;
    println!("rise worst/best {:.3}/{:.3}", b.rise.worst, b.rise.best);
    println!("fall worst/best {:.3}/{:.3}", b.fall.worst, b.fall.best);

    let mut a = BTreeMap::new();
    for (name, on) in [("A", true), ("B", true), ("C", false), ("D", true), ("E", false)] {
        a.insert(name.to_string(), on);
    }
    println!("pdn conducts with A=B=D=1: {}", evaluate_network(&gate.pdn, Polarity::Nmos, &a)?);

    match common_euler_ordering(&gate)? {
        Some(e) => {
            let order: Vec<String> = e.order.iter().map(ToString::to_string).collect();
            println!("shared diffusion order: {}", order.join(" "));
        }
        None => println!("no common Euler path"),
    }
    Ok(())
}
