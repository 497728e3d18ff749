//! Elmore delay on an RC tree, wire parasitics and inverter chain sizing.

use vlsikit::interconnect::{elmore, inverter_chain_plan, optimal_stage_ratio, ElmoreScale, RcNode, RcTree};

fn node(name: &str, parent: Option<&str>, r: f64, c: f64) -> RcNode {
    RcNode { name: name.into(), parent: parent.map(Into::into), r, c }
}

fn main() -> vlsikit::Result<()> {
    let tree = RcTree::new(&[
        node("src", None, 0.0, 0.0),
        node("a", Some("src"), 100.0, 10e-15),
        node("b", Some("a"), 200.0, 20e-15),
        node("c", Some("a"), 150.0, 5e-15),
    ])?;
    for sink in ["b", "c"] {
        let tau = elmore(&tree, sink, ElmoreScale::Tau)?;
        let t50 = elmore(&tree, sink, ElmoreScale::Ln2)?;
        println!("{sink}: tau {:.2} ps, 50% {:.2} ps", tau * 1e12, t50 * 1e12);
    }

    println!("stage ratio with no self-loading: {:.4}", optimal_stage_ratio(0.0)?);
    let plan = inverter_chain_plan(1000.0, 1.0)?;
    println!(
        "F=1000, C_d/C_g=1: alpha {:.3}, {} inverters at fanout {:.3}",
        plan.alpha, plan.total_inverters, plan.stage_ratio
    );
    Ok(())
}
