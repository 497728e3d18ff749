use proptest::prelude::*;

use vlsikit::testability::{
    index_to_vector, lfsr_build, GateNetlist, GateType, GfPolynomial, NetGate, StuckFault,
};

const KINDS: [GateType; 8] = [
    GateType::And,
    GateType::Or,
    GateType::Nand,
    GateType::Nor,
    GateType::Xor,
    GateType::Xnor,
    GateType::Not,
    GateType::Buf,
];

/// Any polynomial with a constant term, degree 2..=12.
fn polynomial() -> impl Strategy<Value = GfPolynomial> {
    (2usize..=12)
        .prop_flat_map(|n| (Just(n), 0u64..(1 << (n - 1))))
        .prop_map(|(n, middle)| {
            let bits = 1 | middle << 1 | 1 << n;
            GfPolynomial::from_bits(bits).unwrap()
        })
}

fn netlist() -> impl Strategy<Value = GateNetlist> {
    (2usize..=6, prop::collection::vec((0..KINDS.len(), prop::collection::vec(any::<prop::sample::Index>(), 3)), 1..12))
        .prop_map(|(n_in, gates)| {
            let mut nets: Vec<String> = (0..n_in).map(|i| format!("x{i}")).collect();
            let mut out = Vec::new();
            for (k, (kind, picks)) in gates.into_iter().enumerate() {
                let kind = KINDS[kind];
                let arity = if matches!(kind, GateType::Not | GateType::Buf) { 1 } else { 2 + picks[2].index(2) };
                let inputs = picks[..arity].iter().map(|p| nets[p.index(nets.len())].clone()).collect();
                let name = format!("g{k}");
                out.push(NetGate { kind, inputs, output: name.clone() });
                nets.push(name);
            }
            let outputs = vec![nets[nets.len() - 1].clone()];
            GateNetlist { inputs: nets[..n_in].to_vec(), gates: out, outputs }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_and_shift_steps_agree_on_every_state(poly in polynomial()) {
        let lfsr = lfsr_build(poly).unwrap();
        for s in 0..1u64 << lfsr.n {
            prop_assert_eq!(lfsr.step(s), lfsr.matrix_step(s));
        }
    }

    #[test]
    fn nonzero_states_never_reach_zero(poly in polynomial(), seed in 1u64..4096) {
        let lfsr = lfsr_build(poly).unwrap();
        let seed = (seed & lfsr.mask()).max(1);
        let mut s = seed;
        for _ in 0..(1u64 << lfsr.n) {
            s = lfsr.step(s);
            prop_assert_ne!(s, 0);
        }
    }
}

proptest! {
    #[test]
    fn detection_implies_the_site_is_excited(net in netlist(), site in any::<prop::sample::Index>(), stuck_at in any::<bool>()) {
        let c = net.compile().unwrap();
        let fault = StuckFault { net: site.index(c.net_names().len()), stuck_at };
        let n = c.n_inputs();
        for v in 0..1u64 << n {
            let vector = index_to_vector(v, n);
            if !c.detected(&vector, &[fault]).unwrap().is_empty() {
                let words: Vec<u64> = vector.iter().map(|&b| b as u64).collect();
                let good = c.simulate_words(&words, None)[fault.net] & 1 == 1;
                prop_assert_ne!(good, stuck_at);
            }
        }
    }

    #[test]
    fn atpg_finds_nothing_only_when_nothing_detects(net in netlist(), site in any::<prop::sample::Index>(), stuck_at in any::<bool>()) {
        let c = net.compile().unwrap();
        let fault = StuckFault { net: site.index(c.net_names().len()), stuck_at };
        let n = c.n_inputs();
        let any = (0..1u64 << n).any(|v| !c.detected(&index_to_vector(v, n), &[fault]).unwrap().is_empty());
        prop_assert_eq!(c.atpg(fault).unwrap().is_some(), any);
    }

    #[test]
    fn gate_listing_order_does_not_matter(net in netlist()) {
        let mut shuffled = net.clone();
        shuffled.gates.reverse();
        let a = net.compile().unwrap();
        let b = shuffled.compile().unwrap();
        let n = a.n_inputs();
        for v in 0..1u64 << n {
            let vector = index_to_vector(v, n);
            prop_assert_eq!(a.simulate(&vector).unwrap(), b.simulate(&vector).unwrap());
        }
    }
}
