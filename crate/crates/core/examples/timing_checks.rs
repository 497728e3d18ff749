//! Setup and hold slack, ring oscillator period and pipelining.

use std::collections::BTreeMap;

use vlsikit::timing::{check_timing, pipeline_metrics, ring_analyze, ring_design, RegEdge, RingSpec, Skew};

fn main() -> vlsikit::Result<()> {
    let edge = |launch: &str, capture: &str, d_min: f64, d_max: f64, skew: f64| RegEdge {
        launch: launch.into(),
        capture: capture.into(),
        t_cq_min: 50e-12,
        t_cq_max: 80e-12,
        t_setup: 40e-12,
        t_hold: 20e-12,
        d_min,
        d_max,
        skew: Some(Skew::exact(skew)),
    };
    let edges = [edge("r1", "r2", 100e-12, 600e-12, 0.0), edge("r2", "r1", 30e-12, 450e-12, 50e-12)];
    let r = check_timing(&edges, 1e-9, &BTreeMap::new())?;
    for e in &r.edges {
        println!("{} -> {}: setup {:+.0} ps, hold {:+.0} ps", e.launch, e.capture, e.setup_slack * 1e12, e.hold_slack * 1e12);
    }
    println!("f_max {:.0} MHz", r.f_max / 1e6);

    let stage = ring_design(5, 2e-9, 0.45)?;
    println!("5-stage ring at 2 ns, 45% duty: t_PLH {:.0} ps, t_PHL {:.0} ps", stage.t_plh * 1e12, stage.t_phl * 1e12);
    let ring = ring_analyze(&RingSpec { stages: vec![stage; 5], probe: 0, stimulus: None })?;
    println!("check: period {:.3} ns, duty {:.3}", ring.period * 1e9, ring.duty);

    let m = pipeline_metrics(&[2.0, 3.0, 2.5], 100, 0.2)?;
    println!("pipeline: period {:.1}, latency for 100 items {:.1}", m.period, m.total_latency);
    Ok(())
}
