//! Pattern generation with an LFSR and stuck-at test search on a full adder.

use vlsikit::testability::{atpg_exhaustive, lfsr_build, lfsr_run, GateNetlist, GateType, NamedFault, NetGate};

fn gate(kind: GateType, inputs: &[&str], output: &str) -> NetGate {
    NetGate { kind, inputs: inputs.iter().map(|s| s.to_string()).collect(), output: output.into() }
}

fn main() -> vlsikit::Result<()> {
    let lfsr = lfsr_build("1 + x + x^4".parse()?)?;
    let run = lfsr_run(&lfsr, 1, 15)?;
    let states: Vec<String> = run.states.iter().map(|s| format!("{s:04b}")).collect();
    println!("states: {}", states.join(" "));
    println!("period {:?}", run.period);

    let adder = GateNetlist {
        inputs: vec!["a".into(), "b".into(), "cin".into()],
        gates: vec![
            gate(GateType::Xor, &["a", "b"], "p"),
            gate(GateType::Xor, &["p", "cin"], "s"),
            gate(GateType::And, &["a", "b"], "g"),
            gate(GateType::And, &["p", "cin"], "t"),
            gate(GateType::Or, &["g", "t"], "cout"),
        ],
        outputs: vec!["s".into(), "cout".into()],
    };
    for (net, stuck_at) in [("p", false), ("g", true), ("t", false)] {
        let fault = NamedFault { net: net.into(), stuck_at };
        match atpg_exhaustive(&adder, &fault)? {
            Some(v) => {
                let bits: String = v.iter().map(|&b| if b { '1' } else { '0' }).collect();
                println!("{net} stuck at {}: test a b cin = {bits}", stuck_at as u8);
            }
            None => println!("{net} stuck at {}: untestable", stuck_at as u8),
        }
    }
    Ok(())
}
