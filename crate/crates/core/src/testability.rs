//! Galois LFSRs, gate-level logic and stuck-at fault simulation, exhaustive ATPG.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_LFSR_DEGREE: usize = 63;
pub const MAX_PERIOD_SEARCH_DEGREE: usize = 24;
pub const MAX_ATPG_INPUTS: usize = 20;

/// Polynomial over GF(2), coefficient i is bit i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GfPolynomial {
    bits: u64,
}

impl GfPolynomial {
    pub fn from_exponents(exps: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &e in exps {
            if e > MAX_LFSR_DEGREE {
                return Err(Error::Size {
                    what: "polynomial degree",
                    got: e,
                    limit: MAX_LFSR_DEGREE,
                });
            }
            bits ^= 1 << e;
        }
        Self::from_bits(bits)
    }

    pub fn from_bits(bits: u64) -> Result<Self> {
        let p = GfPolynomial { bits };
        if p.degree() == 0 {
            return Err(Error::input("polynomial degree must be at least 1"));
        }
        if bits & 1 == 0 {
            return Err(Error::input("invalid polynomial: constant term must be 1"));
        }
        Ok(p)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn degree(&self) -> usize {
        if self.bits == 0 {
            0
        } else {
            63 - self.bits.leading_zeros() as usize
        }
    }

    pub fn coeff(&self, i: usize) -> bool {
        i < 64 && self.bits >> i & 1 == 1
    }

    pub fn exponents(&self) -> Vec<usize> {
        (0..64).filter(|&i| self.coeff(i)).collect()
    }
}

impl fmt::Display for GfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                e => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl FromStr for GfPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut exps = Vec::new();
        for term in s.split('+') {
            let t: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            let e = match t.as_str() {
                "1" => 0,
                "x" => 1,
                _ => t
                    .strip_prefix("x^")
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad polynomial term `{term}`")))?,
            };
            exps.push(e);
        }
        Self::from_exponents(&exps)
    }
}

impl Serialize for GfPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GfPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Exponents(Vec<usize>),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse(),
            Repr::Exponents(e) => GfPolynomial::from_exponents(&e),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Known primitive polynomials for degrees 2..=10.
pub fn primitive_polynomial(n: usize) -> Option<GfPolynomial> {
    let exps: &[usize] = match n {
        2 => &[0, 1, 2],
        3 => &[0, 1, 3],
        4 => &[0, 1, 4],
        5 => &[0, 2, 5],
        6 => &[0, 1, 6],
        7 => &[0, 1, 7],
        8 => &[0, 2, 3, 4, 8],
        9 => &[0, 4, 9],
        10 => &[0, 3, 10],
        _ => return None,
    };
    GfPolynomial::from_exponents(exps).ok()
}

/// Modular LFSR: s0 ← s_{n−1}, s_i ← s_{i−1} ⊕ c_i·s_{n−1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lfsr {
    pub poly: GfPolynomial,
    pub n: usize,
    /// Stages fed by an XOR with the feedback, 0 < i < n.
    pub taps: Vec<usize>,
    /// Row-major n×n companion matrix; row i gives next bit i.
    pub matrix: Vec<Vec<u8>>,
    #[serde(skip)]
    feedback: u64,
}

pub fn lfsr_build(poly: GfPolynomial) -> Result<Lfsr> {
    let n = poly.degree();
    if n == 0 || !poly.coeff(0) {
        return Err(Error::input("invalid polynomial"));
    }
    let taps: Vec<usize> = (1..n).filter(|&i| poly.coeff(i)).collect();
    let mut matrix = vec![vec![0u8; n]; n];
    matrix[0][n - 1] = 1;
    for i in 1..n {
        matrix[i][i - 1] = 1;
    }
    for &t in &taps {
        matrix[t][n - 1] ^= 1;
    }
    let feedback = taps.iter().fold(1u64, |m, &t| m | 1 << t);
    Ok(Lfsr {
        poly,
        n,
        taps,
        matrix,
        feedback,
    })
}

impl Lfsr {
    pub fn mask(&self) -> u64 {
        u64::MAX >> (64 - self.n)
    }

    pub fn step(&self, state: u64) -> u64 {
        let out = state >> (self.n - 1) & 1;
        let shifted = (state << 1) & self.mask();
        if out == 1 {
            shifted ^ self.feedback
        } else {
            shifted
        }
    }

    pub fn matrix_step(&self, state: u64) -> u64 {
        let mut next = 0;
        for (i, row) in self.matrix.iter().enumerate() {
            let bit = row
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &m)| acc ^ (m as u64 & (state >> j & 1)));
            next |= bit << i;
        }
        next
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LfsrRun {
    /// Seed followed by `steps` successors.
    pub states: Vec<u64>,
    /// Steps until the seed recurs; None when not found within 2ⁿ steps or n is too large to search.
    pub period: Option<u64>,
}

pub fn lfsr_run(lfsr: &Lfsr, seed: u64, steps: usize) -> Result<LfsrRun> {
    if seed & !lfsr.mask() != 0 {
        return Err(Error::input(format!("seed does not fit in {} bits", lfsr.n)));
    }
    let mut states = Vec::with_capacity(steps + 1);
    let mut s = seed;
    states.push(s);
    for _ in 0..steps {
        s = lfsr.step(s);
        states.push(s);
    }
    let period = (lfsr.n <= MAX_PERIOD_SEARCH_DEGREE)
        .then(|| {
            let mut s = lfsr.step(seed);
            let mut k = 1u64;
            while s != seed && k < 1 << lfsr.n {
                s = lfsr.step(s);
                k += 1;
            }
            (s == seed).then_some(k)
        })
        .flatten();
    Ok(LfsrRun { states, period })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateType {
    And,
    Or,
    Nand,
    Nor,
    Not,
    Xor,
    Xnor,
    Buf,
}

impl GateType {
    fn eval(self, ins: impl Iterator<Item = u64>) -> u64 {
        let mut ins = ins;
        let first = ins.next().unwrap_or(0);
        match self {
            GateType::And | GateType::Nand => {
                let v = ins.fold(first, |a, b| a & b);
                if self == GateType::Nand { !v } else { v }
            }
            GateType::Or | GateType::Nor => {
                let v = ins.fold(first, |a, b| a | b);
                if self == GateType::Nor { !v } else { v }
            }
            GateType::Xor | GateType::Xnor => {
                let v = ins.fold(first, |a, b| a ^ b);
                if self == GateType::Xnor { !v } else { v }
            }
            GateType::Not => !first,
            GateType::Buf => first,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetGate {
    pub kind: GateType,
    pub inputs: Vec<String>,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateNetlist {
    pub inputs: Vec<String>,
    pub gates: Vec<NetGate>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StuckFault {
    pub net: usize,
    pub stuck_at: bool,
}

/// A stuck-at fault named by net.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedFault {
    pub net: String,
    #[serde(with = "bit")]
    pub stuck_at: bool,
}

mod bit {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(b: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(*b as u8)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(false),
            1 => Ok(true),
            n => Err(serde::de::Error::custom(format!("stuck_at must be 0 or 1, got {n}"))),
        }
    }
}

impl fmt::Display for NamedFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/SA{}", self.net, self.stuck_at as u8)
    }
}

/// Levelized netlist with nets numbered; primary inputs occupy the first indices.
#[derive(Debug, Clone)]
pub struct CompiledNetlist {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    n_inputs: usize,
    /// (kind, input nets, output net) in topological order.
    order: Vec<(GateType, Vec<usize>, usize)>,
    outputs: Vec<usize>,
}

impl GateNetlist {
    pub fn compile(&self) -> Result<CompiledNetlist> {
        let mut names = Vec::new();
        let mut index = BTreeMap::new();
        let mut driver: BTreeMap<usize, Option<usize>> = BTreeMap::new();
        let mut add = |name: &str, names: &mut Vec<String>| -> usize {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        };
        for i in &self.inputs {
            let id = add(i, &mut names);
            if driver.insert(id, None).is_some() {
                return Err(Error::Netlist(format!("net `{i}` driven more than once")));
            }
        }
        let mut gate_io = Vec::new();
        for (g, gate) in self.gates.iter().enumerate() {
            let arity_ok = match gate.kind {
                GateType::Not | GateType::Buf => gate.inputs.len() == 1,
                _ => !gate.inputs.is_empty(),
            };
            if !arity_ok {
                return Err(Error::Netlist(format!(
                    "gate driving `{}` has {} inputs",
                    gate.output,
                    gate.inputs.len()
                )));
            }
            let ins: Vec<usize> = gate.inputs.iter().map(|n| add(n, &mut names)).collect();
            let out = add(&gate.output, &mut names);
            if driver.insert(out, Some(g)).is_some() {
                return Err(Error::Netlist(format!("net `{}` driven more than once", gate.output)));
            }
            gate_io.push((gate.kind, ins, out));
        }
        for (id, name) in names.iter().enumerate() {
            if !driver.contains_key(&id) {
                return Err(Error::Netlist(format!("net `{name}` has no driver")));
            }
        }
        let outputs = self
            .outputs
            .iter()
            .map(|o| {
                index
                    .get(o)
                    .copied()
                    .ok_or_else(|| Error::Netlist(format!("output `{o}` is not a net")))
            })
            .collect::<Result<Vec<_>>>()?;
        // Kahn's algorithm over gates, stable in declaration order.
        let mut ready = vec![false; names.len()];
        for r in ready.iter_mut().take(self.inputs.len()) {
            *r = true;
        }
        let mut placed = vec![false; gate_io.len()];
        let mut order = Vec::with_capacity(gate_io.len());
        loop {
            let mut progress = false;
            for (g, (kind, ins, out)) in gate_io.iter().enumerate() {
                if !placed[g] && ins.iter().all(|&i| ready[i]) {
                    placed[g] = true;
                    ready[*out] = true;
                    order.push((*kind, ins.clone(), *out));
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
        if order.len() != gate_io.len() {
            let stuck: Vec<&str> = gate_io
                .iter()
                .zip(&placed)
                .filter(|(_, p)| !**p)
                .map(|((_, _, o), _)| names[*o].as_str())
                .collect();
            return Err(Error::Netlist(format!("combinational cycle through {stuck:?}")));
        }
        Ok(CompiledNetlist {
            names,
            index,
            n_inputs: self.inputs.len(),
            order,
            outputs,
        })
    }
}

impl CompiledNetlist {
    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn net_names(&self) -> &[String] {
        &self.names
    }

    pub fn net(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn fault(&self, f: &NamedFault) -> Result<StuckFault> {
        self.net(&f.net)
            .map(|net| StuckFault {
                net,
                stuck_at: f.stuck_at,
            })
            .ok_or_else(|| Error::Netlist(format!("fault site `{}` is not a net", f.net)))
    }

    pub fn named(&self, f: StuckFault) -> NamedFault {
        NamedFault {
            net: self.names[f.net].clone(),
            stuck_at: f.stuck_at,
        }
    }

    /// Bit-parallel simulation: bit l of each input word is lane l. Returns every net's word.
    pub fn simulate_words(&self, inputs: &[u64], fault: Option<StuckFault>) -> Vec<u64> {
        let force = |net: usize, v: u64| match fault {
            Some(f) if f.net == net => {
                if f.stuck_at { u64::MAX } else { 0 }
            }
            _ => v,
        };
        let mut vals = vec![0u64; self.names.len()];
        for (i, &w) in inputs.iter().enumerate().take(self.n_inputs) {
            vals[i] = force(i, w);
        }
        for (kind, ins, out) in &self.order {
            let v = kind.eval(ins.iter().map(|&i| vals[i]));
            vals[*out] = force(*out, v);
        }
        vals
    }

    pub fn output_words(&self, inputs: &[u64], fault: Option<StuckFault>) -> Vec<u64> {
        let vals = self.simulate_words(inputs, fault);
        self.outputs.iter().map(|&o| vals[o]).collect()
    }

    pub fn simulate(&self, vector: &[bool]) -> Result<Vec<bool>> {
        self.check_vector(vector)?;
        let words: Vec<u64> = vector.iter().map(|&b| b as u64).collect();
        Ok(self.output_words(&words, None).iter().map(|w| w & 1 == 1).collect())
    }

    fn check_vector(&self, vector: &[bool]) -> Result<()> {
        if vector.len() != self.n_inputs {
            return Err(Error::input(format!(
                "vector has {} bits but the netlist has {} inputs",
                vector.len(),
                self.n_inputs
            )));
        }
        Ok(())
    }

    /// Faults in `faults` whose faulty outputs differ from the good outputs under `vector`.
    pub fn detected(&self, vector: &[bool], faults: &[StuckFault]) -> Result<Vec<StuckFault>> {
        self.check_vector(vector)?;
        let words: Vec<u64> = vector.iter().map(|&b| b as u64).collect();
        let good = self.output_words(&words, None);
        Ok(faults
            .iter()
            .copied()
            .filter(|&f| {
                let bad = self.output_words(&words, Some(f));
                bad.iter().zip(&good).any(|(b, g)| (b ^ g) & 1 == 1)
            })
            .collect())
    }

    /// Input words for 64 consecutive vectors starting at `base`; input 0 is the MSB of the index.
    pub fn vector_words(&self, base: u64) -> Vec<u64> {
        let n = self.n_inputs;
        (0..n)
            .map(|i| {
                let shift = n - 1 - i;
                (0..64u64).fold(0u64, |w, l| w | (((base + l) >> shift) & 1) << l)
            })
            .collect()
    }

    pub fn atpg(&self, fault: StuckFault) -> Result<Option<Vec<bool>>> {
        let n = self.n_inputs;
        if n > MAX_ATPG_INPUTS {
            return Err(Error::Size {
                what: "ATPG primary inputs",
                got: n,
                limit: MAX_ATPG_INPUTS,
            });
        }
        let total = 1u64 << n;
        let mut base = 0;
        while base < total {
            let words = self.vector_words(base);
            let good = self.output_words(&words, None);
            let bad = self.output_words(&words, Some(fault));
            let lanes = (total - base).min(64);
            let valid = if lanes == 64 { u64::MAX } else { (1u64 << lanes) - 1 };
            let diff = good.iter().zip(&bad).fold(0, |d, (g, b)| d | (g ^ b)) & valid;
            if diff != 0 {
                let v = base + diff.trailing_zeros() as u64;
                return Ok(Some(index_to_vector(v, n)));
            }
            base += 64;
        }
        Ok(None)
    }
}

pub fn index_to_vector(v: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| v >> (n - 1 - i) & 1 == 1).collect()
}

pub fn logic_simulate(net: &GateNetlist, vector: &[bool]) -> Result<Vec<bool>> {
    net.compile()?.simulate(vector)
}

pub fn fault_simulate(
    net: &GateNetlist,
    vectors: &[Vec<bool>],
    faults: &[NamedFault],
) -> Result<Vec<BTreeSet<NamedFault>>> {
    let c = net.compile()?;
    let ids = faults.iter().map(|f| c.fault(f)).collect::<Result<Vec<_>>>()?;
    vectors
        .iter()
        .map(|v| Ok(c.detected(v, &ids)?.into_iter().map(|f| c.named(f)).collect()))
        .collect()
}

pub fn atpg_exhaustive(net: &GateNetlist, fault: &NamedFault) -> Result<Option<Vec<bool>>> {
    let c = net.compile()?;
    let f = c.fault(fault)?;
    c.atpg(f)
}
