//! Logical effort: gate templates, path delay, stage-count optimization and two-way forks.
//!
//! Capacitances are in units of one unit-width gate; resistances in units of a unit-width nmos,
//! so a pmos of width w has resistance μ/w.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::gates::{CompoundGate, Literal, SpNetwork};
use crate::numeric::bisect;

/// Default stage effort ρ for C_d = C_g.
pub const RHO: f64 = 3.59;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    Rise,
    Fall,
}

impl Edge {
    pub fn flip(self) -> Edge {
        match self {
            Edge::Rise => Edge::Fall,
            Edge::Fall => Edge::Rise,
        }
    }
}

/// A quantity with separate values for rising and falling outputs. Deserializes from
/// `{"rise": .., "fall": ..}` or from a single number used for both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiseFall {
    pub rise: f64,
    pub fall: f64,
}

impl RiseFall {
    pub fn both(v: f64) -> Self {
        RiseFall { rise: v, fall: v }
    }

    pub fn get(&self, e: Edge) -> f64 {
        match e {
            Edge::Rise => self.rise,
            Edge::Fall => self.fall,
        }
    }

    pub fn max(&self) -> f64 {
        self.rise.max(self.fall)
    }
}

impl<'de> Deserialize<'de> for RiseFall {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(f64),
            Two { rise: f64, fall: f64 },
        }
        Ok(match Raw::deserialize(d)? {
            Raw::One(v) => RiseFall::both(v),
            Raw::Two { rise, fall } => RiseFall { rise, fall },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum PullUp {
    /// Complementary pmos network.
    Network { net: SpNetwork },
    /// A single pmos that is always on (pseudo-nmos / ratioed load).
    AlwaysOn { width: f64 },
}

fn default_mu() -> f64 {
    2.0
}

fn default_cd() -> f64 {
    1.0
}

/// A sized gate at transistor level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateCircuit {
    pub pdn: SpNetwork,
    pub pull_up: PullUp,
    #[serde(default = "default_mu")]
    pub mu: f64,
    /// Drain capacitance per unit width relative to gate capacitance.
    #[serde(default = "default_cd")]
    pub cd_ratio: f64,
}

impl GateCircuit {
    /// Inverter with nmos width `w_n` and pmos width `w_p`.
    pub fn inverter(w_n: f64, w_p: f64, mu: f64) -> Self {
        GateCircuit {
            pdn: SpNetwork::switch("A", w_n),
            pull_up: PullUp::Network {
                net: SpNetwork::switch("A", w_p),
            },
            mu,
            cd_ratio: 1.0,
        }
    }

    pub fn from_compound(g: &CompoundGate) -> Self {
        let scale = 1.0 / g.reference.w_n;
        GateCircuit {
            pdn: scaled(&g.pdn, scale),
            pull_up: PullUp::Network {
                net: scaled(&g.pun, scale),
            },
            mu: g.mu,
            cd_ratio: 1.0,
        }
    }

    pub fn inputs(&self) -> Vec<String> {
        let mut out = self.pdn.inputs();
        if let PullUp::Network { net } = &self.pull_up {
            for n in net.inputs() {
                if !out.contains(&n) {
                    out.push(n);
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        self.pdn.validate()?;
        match &self.pull_up {
            PullUp::Network { net } => net.validate()?,
            PullUp::AlwaysOn { width } if *width > 0.0 => {}
            PullUp::AlwaysOn { .. } => return Err(Error::input("pull-up width must be positive")),
        }
        if !(self.mu > 0.0 && self.cd_ratio >= 0.0) {
            return Err(Error::input("mu must be positive and cd_ratio non-negative"));
        }
        Ok(())
    }

    /// Total gate width driven by input `name`.
    pub fn c_in(&self, name: &str) -> f64 {
        let sum = |net: &SpNetwork| -> f64 {
            net.switches()
                .iter()
                .filter(|(l, _)| l.name == name)
                .map(|(_, w)| w)
                .sum()
        };
        sum(&self.pdn)
            + match &self.pull_up {
                PullUp::Network { net } => sum(net),
                PullUp::AlwaysOn { .. } => 0.0,
            }
    }

    /// Diffusion capacitance on the output node.
    pub fn c_p(&self) -> f64 {
        let up = match &self.pull_up {
            PullUp::Network { net } => output_width(net),
            PullUp::AlwaysOn { width } => *width,
        };
        self.cd_ratio * (output_width(&self.pdn) + up)
    }

    /// Worst pull-down resistance through a device of input `name`, including the fight with an
    /// always-on pull-up.
    pub fn r_fall(&self, name: &str) -> Result<f64> {
        let r1 = worst_path_through(&self.pdn, name, 1.0)
            .ok_or_else(|| Error::input(format!("input `{name}` has no pull-down device")))?;
        match &self.pull_up {
            PullUp::Network { .. } => Ok(r1),
            PullUp::AlwaysOn { width } => {
                let r2 = self.mu / width;
                if r2 <= r1 {
                    return Err(Error::Infeasible(format!(
                        "pull-down resistance {r1} does not overpower pull-up {r2}"
                    )));
                }
                Ok(r1 * r2 / (r2 - r1))
            }
        }
    }

    pub fn r_rise(&self, name: &str) -> Result<f64> {
        match &self.pull_up {
            PullUp::Network { net } => worst_path_through(net, name, self.mu)
                .ok_or_else(|| Error::input(format!("input `{name}` has no pull-up device"))),
            PullUp::AlwaysOn { width } => Ok(self.mu / width),
        }
    }
}

fn scaled(net: &SpNetwork, k: f64) -> SpNetwork {
    match net {
        SpNetwork::Switch { input, width } => SpNetwork::Switch {
            input: input.clone(),
            width: width * k,
        },
        SpNetwork::Series(xs) => SpNetwork::Series(xs.iter().map(|x| scaled(x, k)).collect()),
        SpNetwork::Parallel(xs) => SpNetwork::Parallel(xs.iter().map(|x| scaled(x, k)).collect()),
    }
}

/// Width of the devices whose diffusion touches the output end of the network.
fn output_width(net: &SpNetwork) -> f64 {
    match net {
        SpNetwork::Switch { width, .. } => *width,
        SpNetwork::Series(xs) => output_width(&xs[0]),
        SpNetwork::Parallel(xs) => xs.iter().map(output_width).sum(),
    }
}

fn worst_path_through(net: &SpNetwork, name: &str, r_unit: f64) -> Option<f64> {
    net.paths()
        .iter()
        .filter(|p| p.iter().any(|(l, _): &(Literal, f64)| l.name == name))
        .map(|p| p.iter().map(|(_, w)| r_unit / w).sum::<f64>())
        .reduce(f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InputEffort {
    pub c_in: f64,
    pub g: RiseFall,
    pub p: RiseFall,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateTemplate {
    pub name: String,
    pub inputs: BTreeMap<String, InputEffort>,
    /// Worst parasitic delay over inputs.
    pub p_rise: f64,
    pub p_fall: f64,
    pub c_p: f64,
}

/// g = R·C_in / (R_ref·C_ref) and p = R·C_p / (R_ref·C_ref) per input and transition.
pub fn derive_template(name: &str, gate: &GateCircuit, reference: &GateCircuit) -> Result<GateTemplate> {
    gate.validate()?;
    reference.validate()?;
    let ref_inputs = reference.inputs();
    if ref_inputs.len() != 1 {
        return Err(Error::input("reference must be a single-input inverter"));
    }
    let ri = &ref_inputs[0];
    let c_ref = reference.c_in(ri);
    let (rr, rf) = (reference.r_rise(ri)?, reference.r_fall(ri)?);
    let c_p = gate.c_p();
    let mut inputs = BTreeMap::new();
    for n in gate.inputs() {
        let c_in = gate.c_in(&n);
        let (r_r, r_f) = (gate.r_rise(&n)?, gate.r_fall(&n)?);
        inputs.insert(
            n,
            InputEffort {
                c_in,
                g: RiseFall {
                    rise: r_r * c_in / (rr * c_ref),
                    fall: r_f * c_in / (rf * c_ref),
                },
                p: RiseFall {
                    rise: r_r * c_p / (rr * c_ref),
                    fall: r_f * c_p / (rf * c_ref),
                },
            },
        );
    }
    let worst = |e: Edge| inputs.values().map(|i| i.p.get(e)).fold(0.0, f64::max);
    Ok(GateTemplate {
        name: name.to_string(),
        p_rise: worst(Edge::Rise),
        p_fall: worst(Edge::Fall),
        c_p,
        inputs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Effort {
    pub per_input: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NandNorEffort {
    pub nand: Effort,
    pub nor: Effort,
}

/// Closed-form efforts of n-input NAND and NOR gates sized for equal drive with the inverter.
pub fn nand_nor_effort(n: usize, mu: f64) -> Result<NandNorEffort> {
    if n == 0 || !(mu > 0.0) {
        return Err(Error::input("need n ≥ 1 and mu > 0"));
    }
    let nf = n as f64;
    let nand = (nf + mu) / (1.0 + mu);
    let nor = (1.0 + nf * mu) / (1.0 + mu);
    Ok(NandNorEffort {
        nand: Effort {
            per_input: nand,
            total: nf * nand,
        },
        nor: Effort {
            per_input: nor,
            total: nf * nor,
        },
    })
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathStage {
    #[serde(default)]
    pub name: String,
    pub g: RiseFall,
    pub p: RiseFall,
    /// Branching effort at the stage output.
    #[serde(default = "one")]
    pub b: f64,
    #[serde(default = "yes")]
    pub inverting: bool,
}

impl PathStage {
    pub fn new(name: &str, g: f64, p: f64) -> Self {
        PathStage {
            name: name.to_string(),
            g: RiseFall::both(g),
            p: RiseFall::both(p),
            b: 1.0,
            inverting: true,
        }
    }

    pub fn inverter(p_inv: f64) -> Self {
        PathStage::new("inv", 1.0, p_inv)
    }

    pub fn with_branching(mut self, b: f64) -> Self {
        self.b = b;
        self
    }
}

fn default_edge() -> Edge {
    Edge::Rise
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    pub stages: Vec<PathStage>,
    pub c_in: f64,
    pub c_load: f64,
    /// Transition at the path output, which picks g and p of skewed stages.
    #[serde(default = "default_edge")]
    pub output: Edge,
}

impl PathSpec {
    pub fn new(stages: Vec<PathStage>, c_in: f64, c_load: f64) -> Self {
        PathSpec {
            stages,
            c_in,
            c_load,
            output: Edge::Rise,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::input("path has no stages"));
        }
        if !(self.c_in > 0.0 && self.c_load > 0.0) {
            return Err(Error::input("c_in and c_load must be positive"));
        }
        for s in &self.stages {
            if !(s.b >= 1.0) {
                return Err(Error::input(format!("stage `{}` branching must be ≥ 1", s.name)));
            }
            if !(s.g.rise > 0.0 && s.g.fall > 0.0 && s.p.rise >= 0.0 && s.p.fall >= 0.0) {
                return Err(Error::input(format!(
                    "stage `{}` needs positive g and non-negative p",
                    s.name
                )));
            }
        }
        Ok(())
    }

    /// Output transition of each stage.
    fn edges(&self) -> Vec<Edge> {
        let mut out = vec![self.output; self.stages.len()];
        for i in (0..self.stages.len().saturating_sub(1)).rev() {
            out[i] = if self.stages[i + 1].inverting {
                out[i + 1].flip()
            } else {
                out[i + 1]
            };
        }
        out
    }

    pub fn h(&self) -> f64 {
        self.c_load / self.c_in
    }

    pub fn inversions(&self) -> usize {
        self.stages.iter().filter(|s| s.inverting).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathDelay {
    pub n: usize,
    pub g_total: f64,
    pub b_total: f64,
    pub h: f64,
    pub f_total: f64,
    pub p_total: f64,
    pub f_hat: f64,
    pub d: f64,
    pub stage_names: Vec<String>,
    /// Input capacitance of each stage at equal stage effort; the first is the path input.
    pub input_caps: Vec<f64>,
}

/// N·F^{1/N} + P for a path summarized by its totals.
pub fn effort_delay(f: f64, n: usize, p: f64) -> Result<f64> {
    if !(f > 0.0) || n == 0 {
        return Err(Error::input("need F > 0 and N ≥ 1"));
    }
    Ok(n as f64 * f.powf(1.0 / n as f64) + p)
}

/// Minimum delay of the path with `extra` unit inverters appended before the load.
fn delay_with_extra(path: &PathSpec, extra: usize, p_inv: f64) -> PathDelay {
    let mut stages = path.stages.clone();
    stages.extend((0..extra).map(|_| PathStage::inverter(p_inv)));
    let full = PathSpec {
        stages,
        ..path.clone()
    };
    let edges = full.edges();
    let g: Vec<f64> = full.stages.iter().zip(&edges).map(|(s, e)| s.g.get(*e)).collect();
    let p_total: f64 = full.stages.iter().zip(&edges).map(|(s, e)| s.p.get(*e)).sum();
    let g_total: f64 = g.iter().product();
    let b_total: f64 = full.stages.iter().map(|s| s.b).product();
    let h = full.h();
    let f_total = g_total * b_total * h;
    let n = full.stages.len();
    let f_hat = f_total.powf(1.0 / n as f64);
    let mut caps = vec![0.0; n];
    let mut c_out = full.c_load;
    for i in (0..n).rev() {
        caps[i] = g[i] * full.stages[i].b * c_out / f_hat;
        c_out = caps[i];
    }
    PathDelay {
        n,
        g_total,
        b_total,
        h,
        f_total,
        p_total,
        f_hat,
        d: n as f64 * f_hat + p_total,
        stage_names: full.stages.iter().map(|s| s.name.clone()).collect(),
        input_caps: caps,
    }
}

/// Path delay at equal stage effort, optionally padded with inverters up to `n_override` stages.
pub fn path_delay(path: &PathSpec, n_override: Option<usize>, p_inv: f64) -> Result<PathDelay> {
    path.validate()?;
    let n0 = path.stages.len();
    let n = n_override.unwrap_or(n0);
    if n < n0 {
        return Err(Error::input(format!(
            "n_override {n} is below the path's {n0} stages"
        )));
    }
    Ok(delay_with_extra(path, n - n0, p_inv))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PolarityConstraint {
    #[default]
    Any,
    Inverting,
    NonInverting,
}

impl PolarityConstraint {
    fn accepts(self, inversions: usize) -> bool {
        match self {
            PolarityConstraint::Any => true,
            PolarityConstraint::Inverting => inversions % 2 == 1,
            PolarityConstraint::NonInverting => inversions % 2 == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizedPath {
    pub best: PathDelay,
    pub added_inverters: usize,
    /// (N, D) for each candidate evaluated.
    pub candidates: Vec<(usize, f64)>,
}

/// Picks the stage count near log_ρ F, padding with inverters, subject to output polarity.
pub fn optimize_path(
    path: &PathSpec,
    allow_added_inverters: bool,
    polarity: PolarityConstraint,
    rho: f64,
    p_inv: f64,
) -> Result<OptimizedPath> {
    path.validate()?;
    if !(rho > 1.0) {
        return Err(Error::input("rho must exceed 1"));
    }
    let n0 = path.stages.len();
    let inv0 = path.inversions();
    let ok = |n: usize| n >= n0 && polarity.accepts(inv0 + (n - n0));
    let mut cands: Vec<usize> = if allow_added_inverters {
        let f = delay_with_extra(path, 0, p_inv).f_total;
        let est = (f.ln() / rho.ln()).round().max(1.0) as usize;
        let mut c: Vec<usize> = [est.saturating_sub(1), est, est + 1, n0]
            .into_iter()
            .filter(|&n| ok(n))
            .collect();
        if c.is_empty() {
            c.extend((n0..n0 + 2).filter(|&n| ok(n)).take(1));
        }
        c
    } else if ok(n0) {
        vec![n0]
    } else {
        return Err(Error::Infeasible(
            "path polarity cannot be met without adding inverters".into(),
        ));
    };
    cands.sort_unstable();
    cands.dedup();
    let evaluated: Vec<PathDelay> = cands
        .iter()
        .map(|&n| delay_with_extra(path, n - n0, p_inv))
        .collect();
    let best = evaluated
        .iter()
        .fold(None::<&PathDelay>, |b, d| match b {
            Some(b) if b.d <= d.d => Some(b),
            _ => Some(d),
        })
        .expect("at least one candidate")
        .clone();
    Ok(OptimizedPath {
        added_inverters: best.n - n0,
        candidates: evaluated.iter().map(|d| (d.n, d.d)).collect(),
        best,
    })
}

/// The fastest of several alternative paths; ties go to the one with fewer stages.
pub fn best_path(candidates: &[PathSpec]) -> Result<(usize, Vec<PathDelay>)> {
    if candidates.is_empty() {
        return Err(Error::input("no candidate paths"));
    }
    let all = candidates
        .iter()
        .map(|p| path_delay(p, None, 1.0))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, d) in all.iter().enumerate() {
        let b = &all[best];
        if d.d < b.d || (d.d == b.d && d.n < b.n) {
            best = i;
        }
    }
    Ok((best, all))
}

fn default_rho() -> f64 {
    RHO
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForkSpec {
    /// Total input capacitance shared by both branches.
    pub c_in: f64,
    /// Load of the branch with one more inverter.
    pub load_long: f64,
    pub load_short: f64,
    /// Short-branch length; chosen near log_ρ when absent.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "one")]
    pub p_inv: f64,
    #[serde(default = "default_rho")]
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForkDesign {
    pub m: usize,
    /// Input capacitance of the (m+1)-inverter branch.
    pub x: f64,
    pub x_short: f64,
    pub d_long: f64,
    pub d_short: f64,
    pub d_fork: f64,
    pub long_caps: Vec<f64>,
    pub short_caps: Vec<f64>,
}

fn chain_delay(n: usize, h: f64, p_inv: f64) -> f64 {
    let n = n as f64;
    n * h.powf(1.0 / n) + n * p_inv
}

fn chain_caps(n: usize, c_in: f64, load: f64) -> Vec<f64> {
    let f = (load / c_in).powf(1.0 / n as f64);
    (0..n).map(|i| c_in * f.powi(i as i32)).collect()
}

fn fork_for(spec: &ForkSpec, m: usize) -> Result<ForkDesign> {
    let c = spec.c_in;
    let diff = |x: f64| {
        chain_delay(m + 1, spec.load_long / x, spec.p_inv)
            - chain_delay(m, spec.load_short / (c - x), spec.p_inv)
    };
    let eps = c * 1e-12;
    let x = bisect(diff, eps, c - eps, c * 1e-14)
        .ok_or_else(|| Error::Infeasible(format!("no capacitance split equalizes the m = {m} fork")))?;
    let d_long = chain_delay(m + 1, spec.load_long / x, spec.p_inv);
    let d_short = chain_delay(m, spec.load_short / (c - x), spec.p_inv);
    Ok(ForkDesign {
        m,
        x,
        x_short: c - x,
        d_long,
        d_short,
        d_fork: d_long.max(d_short),
        long_caps: chain_caps(m + 1, x, spec.load_long),
        short_caps: chain_caps(m, c - x, spec.load_short),
    })
}

/// Splits the input capacitance between an (m+1)- and an m-inverter branch so both arrive together.
pub fn design_fork(spec: &ForkSpec) -> Result<ForkDesign> {
    if !(spec.c_in > 0.0 && spec.load_long > 0.0 && spec.load_short > 0.0) {
        return Err(Error::input("fork capacitances must be positive"));
    }
    if !(spec.rho > 1.0 && spec.p_inv >= 0.0) {
        return Err(Error::input("rho must exceed 1 and p_inv be non-negative"));
    }
    let ms: Vec<usize> = match spec.m {
        Some(0) => return Err(Error::input("fork branch length m must be ≥ 1")),
        Some(m) => vec![m],
        None => {
            let est = (((spec.load_long + spec.load_short) / spec.c_in).ln() / spec.rho.ln())
                .round()
                .max(1.0) as usize;
            let mut v = vec![est.saturating_sub(1).max(1), est, est + 1];
            v.dedup();
            v
        }
    };
    let mut best: Option<ForkDesign> = None;
    for m in ms {
        let d = fork_for(spec, m)?;
        if best.as_ref().is_none_or(|b| d.d_fork < b.d_fork) {
            best = Some(d);
        }
    }
    Ok(best.expect("at least one m"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ratioed_gate_template() {
        let pdn = SpNetwork::Parallel(vec![
            SpNetwork::Series(vec![SpNetwork::switch("A", 3.0), SpNetwork::switch("B", 5.0)]),
            SpNetwork::switch("C", 5.0),
        ]);
        let gate = GateCircuit {
            pdn,
            pull_up: PullUp::AlwaysOn { width: 1.0 },
            mu: 2.0,
            cd_ratio: 1.0,
        };
        let t = derive_template("pseudo", &gate, &GateCircuit::inverter(1.0, 2.0, 2.0)).unwrap();
        assert!(close(t.inputs["A"].g.fall, 8.0 / 11.0, 1e-12));
        assert!(close(t.inputs["B"].g.fall, 40.0 / 33.0, 1e-12));
        assert!(close(t.inputs["C"].g.fall, 10.0 / 27.0, 1e-12));
        assert!(close(t.inputs["A"].g.rise, 2.0, 1e-12));
        assert!(close(t.inputs["C"].g.rise, 10.0 / 3.0, 1e-12));
        assert!(close(t.p_rise, 6.0, 1e-12));
        assert!(close(t.inputs["A"].p.fall, 24.0 / 11.0, 1e-12));
    }

    #[test]
    fn self_reference_is_unity() {
        let inv = GateCircuit::inverter(1.0, 2.0, 2.0);
        let t = derive_template("inv", &inv, &inv).unwrap();
        assert!(close(t.inputs["A"].g.rise, 1.0, 1e-12));
        assert!(close(t.inputs["A"].g.fall, 1.0, 1e-12));
    }

    #[test]
    fn closed_form_nand_nor() {
        let e = nand_nor_effort(2, 2.0).unwrap();
        assert!(close(e.nand.per_input, 4.0 / 3.0, 1e-12));
        assert!(close(e.nor.per_input, 5.0 / 3.0, 1e-12));
        let one = nand_nor_effort(1, 3.7).unwrap();
        assert!(close(one.nand.per_input, 1.0, 1e-12) && close(one.nor.total, 1.0, 1e-12));
    }

    #[test]
    fn inverter_chain_sizes() {
        let p = PathSpec::new(vec![PathStage::inverter(1.0); 3], 1.0, 64.0);
        let d = path_delay(&p, None, 1.0).unwrap();
        for (c, want) in d.input_caps.iter().zip([1.0, 4.0, 16.0]) {
            assert!(close(*c, want, 1e-9));
        }
        assert!(close(d.d, 15.0, 1e-9));
    }

    #[test]
    fn padded_nand_nor_path() {
        let p = PathSpec::new(
            vec![PathStage::new("nand4", 2.0, 4.0), PathStage::new("nor4", 3.0, 4.0)],
            1.0,
            300.0,
        );
        let o = optimize_path(&p, true, PolarityConstraint::Any, RHO, 1.0).unwrap();
        assert_eq!(o.added_inverters, 4);
        assert!(close(o.best.d, 32.93, 0.01));
        assert!(close(o.best.input_caps[1], 1.74, 0.01));
    }

    #[test]
    fn fork_splits() {
        let f = design_fork(&ForkSpec {
            c_in: 10.0,
            load_long: 2000.0,
            load_short: 2000.0,
            m: None,
            p_inv: 1.0,
            rho: RHO,
        })
        .unwrap();
        assert_eq!(f.m, 4);
        assert!(close(f.x, 4.8, 0.05));
        assert!(close(f.d_fork, 21.7, 0.05));
        assert!((f.d_long - f.d_short).abs() < 2e-3);
        assert_eq!(f.x + f.x_short, 10.0);
    }
}
