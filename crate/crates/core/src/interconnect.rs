//! RC interconnect: Elmore delay, wire extraction, repeater insertion, inverter chains and slew.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::device::{bias_point, MosDevice};
use crate::error::{Error, Result};
use crate::numeric::{bisect, integrate, rel_close};

/// Multiplier applied to an RC time constant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ElmoreScale {
    /// The bare time constant.
    #[default]
    Tau,
    /// 50% point of a single-pole response, 0.69·τ.
    Ln2,
    Custom(f64),
}

impl ElmoreScale {
    pub fn factor(self) -> f64 {
        match self {
            ElmoreScale::Tau => 1.0,
            ElmoreScale::Ln2 => 0.69,
            ElmoreScale::Custom(k) => k,
        }
    }
}

impl Serialize for ElmoreScale {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ElmoreScale::Tau => s.serialize_str("tau"),
            ElmoreScale::Ln2 => s.serialize_str("ln2"),
            ElmoreScale::Custom(k) => s.serialize_f64(*k),
        }
    }
}

impl<'de> Deserialize<'de> for ElmoreScale {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Factor(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Name(n) => match n.as_str() {
                "tau" => Ok(ElmoreScale::Tau),
                "ln2" | "0.69" => Ok(ElmoreScale::Ln2),
                other => Err(serde::de::Error::custom(format!(
                    "unknown Elmore scale `{other}`, expected \"tau\", \"ln2\" or a number"
                ))),
            },
            Raw::Factor(k) if k > 0.0 => Ok(ElmoreScale::Custom(k)),
            Raw::Factor(_) => Err(serde::de::Error::custom("Elmore scale must be positive")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RcNode {
    pub name: String,
    /// `None` for the root, which is driven by an ideal source.
    #[serde(default)]
    pub parent: Option<String>,
    /// Resistance of the edge to the parent.
    #[serde(default)]
    pub r: f64,
    /// Capacitance to ground.
    #[serde(default)]
    pub c: f64,
}

/// Rooted RC tree with resolved parent links.
#[derive(Debug, Clone, PartialEq)]
pub struct RcTree {
    names: Vec<String>,
    parent: Vec<Option<usize>>,
    r: Vec<f64>,
    c: Vec<f64>,
    index: BTreeMap<String, usize>,
}

impl RcTree {
    pub fn new(nodes: &[RcNode]) -> Result<RcTree> {
        let mut index = BTreeMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.name.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate node `{}`", n.name)));
            }
            if !(n.r >= 0.0 && n.c >= 0.0) {
                return Err(Error::input(format!(
                    "node `{}` has negative resistance or capacitance",
                    n.name
                )));
            }
        }
        let parent = nodes
            .iter()
            .map(|n| match &n.parent {
                None => Ok(None),
                Some(p) => index
                    .get(p)
                    .copied()
                    .map(Some)
                    .ok_or_else(|| Error::input(format!("unknown parent `{p}` of `{}`", n.name))),
            })
            .collect::<Result<Vec<_>>>()?;
        let roots = parent.iter().filter(|p| p.is_none()).count();
        if roots != 1 {
            return Err(Error::input(format!("tree needs exactly one root, found {roots}")));
        }
        for start in 0..nodes.len() {
            let mut at = start;
            for _ in 0..=nodes.len() {
                match parent[at] {
                    None => break,
                    Some(p) => at = p,
                }
            }
            if parent[at].is_some() {
                return Err(Error::input("parent links contain a cycle"));
            }
        }
        Ok(RcTree {
            names: nodes.iter().map(|n| n.name.clone()).collect(),
            parent,
            r: nodes.iter().map(|n| n.r).collect(),
            c: nodes.iter().map(|n| n.c).collect(),
            index,
        })
    }

    /// Uniform ladder: root `n0`, then `n1..=nk` each through `r` with cap `c`.
    pub fn ladder(r: &[f64], c: &[f64]) -> Result<RcTree> {
        if r.len() != c.len() {
            return Err(Error::input("ladder needs one capacitance per resistance"));
        }
        let mut nodes = vec![RcNode {
            name: "n0".into(),
            parent: None,
            r: 0.0,
            c: 0.0,
        }];
        for (i, (ri, ci)) in r.iter().zip(c).enumerate() {
            nodes.push(RcNode {
                name: format!("n{}", i + 1),
                parent: Some(format!("n{i}")),
                r: *ri,
                c: *ci,
            });
        }
        RcTree::new(&nodes)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown node `{name}`")))
    }

    fn path_to_root(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![i];
        while let Some(p) = self.parent[i] {
            out.push(p);
            i = p;
        }
        out
    }

    fn downstream_caps(&self) -> Vec<f64> {
        let mut down = self.c.clone();
        // children before parents: sort by depth, deepest first
        let mut order: Vec<usize> = (0..self.len()).collect();
        let depth: Vec<usize> = (0..self.len()).map(|i| self.path_to_root(i).len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(depth[i]));
        for i in order {
            if let Some(p) = self.parent[i] {
                down[p] += down[i];
            }
        }
        down
    }

    /// Σ over edges on the root→sink path of R_e times the capacitance below it.
    pub fn elmore_by_resistance(&self, sink: usize) -> f64 {
        let down = self.downstream_caps();
        self.path_to_root(sink)
            .into_iter()
            .filter(|&i| self.parent[i].is_some())
            .map(|i| self.r[i] * down[i])
            .sum()
    }

    /// Σ over nodes of C_i times the resistance shared by the root→i and root→sink paths.
    pub fn elmore_by_capacitance(&self, sink: usize) -> f64 {
        let mut on_sink_path = vec![false; self.len()];
        for i in self.path_to_root(sink) {
            on_sink_path[i] = true;
        }
        (0..self.len())
            .map(|i| {
                let shared: f64 = self
                    .path_to_root(i)
                    .into_iter()
                    .filter(|&k| on_sink_path[k] && self.parent[k].is_some())
                    .map(|k| self.r[k])
                    .sum();
                self.c[i] * shared
            })
            .sum()
    }
}

/// Elmore delay from the root to `sink`, both accumulation forms cross-checked.
pub fn elmore(tree: &RcTree, sink: &str, scale: ElmoreScale) -> Result<f64> {
    let s = tree.node(sink)?;
    let a = tree.elmore_by_resistance(s);
    let b = tree.elmore_by_capacitance(s);
    if !rel_close(a, b, 1e-9) {
        return Err(Error::solver(
            "Elmore accumulation forms disagree",
            vec![format!("resistance form {a:e}, capacitance form {b:e}")],
        ));
    }
    Ok(a * scale.factor())
}

fn default_edges() -> u32 {
    2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireSpec {
    pub length: f64,
    pub width: f64,
    /// Ω per square.
    pub r_sheet: f64,
    /// F per unit area.
    #[serde(default)]
    pub c_area: f64,
    /// F per unit length per edge.
    #[serde(default)]
    pub c_fringe_per_edge: f64,
    #[serde(default = "default_edges")]
    pub fringe_edges: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WireRc {
    pub r: f64,
    pub c: f64,
}

pub fn wire_rc(spec: &WireSpec) -> Result<WireRc> {
    if !(spec.length >= 0.0 && spec.width > 0.0) {
        return Err(Error::Geometry("wire width must be positive and length non-negative".into()));
    }
    Ok(WireRc {
        r: spec.r_sheet * spec.length / spec.width,
        c: spec.c_area * spec.length * spec.width
            + spec.c_fringe_per_edge * spec.length * spec.fringe_edges as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DriverModel {
    Rc {
        r_drive: f64,
        #[serde(default)]
        c_diff_out: f64,
        #[serde(default)]
        c_gate_in: f64,
    },
    FixedDelay {
        delay: f64,
    },
}

impl DriverModel {
    fn input_cap(&self) -> f64 {
        match *self {
            DriverModel::Rc { c_gate_in, .. } => c_gate_in,
            DriverModel::FixedDelay { .. } => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            DriverModel::Rc {
                r_drive,
                c_diff_out,
                c_gate_in,
            } => r_drive >= 0.0 && c_diff_out >= 0.0 && c_gate_in >= 0.0,
            DriverModel::FixedDelay { delay } => delay >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::input("driver values must be non-negative"))
        }
    }

    /// Delay of this driver pushing one wire segment into `c_next`.
    fn stage(&self, r_s: f64, c_s: f64, c_next: f64, k: f64) -> f64 {
        match *self {
            DriverModel::Rc {
                r_drive,
                c_diff_out,
                ..
            } => k * (r_drive * (c_diff_out + c_s + c_next) + r_s * (c_s + c_next)),
            DriverModel::FixedDelay { delay } => delay + k * r_s * (c_s + c_next),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BufferedWire {
    /// (buffer count, delay) for each evaluated count.
    pub delays: Vec<(usize, f64)>,
    pub optimal_n: usize,
    pub optimal_delay: f64,
}

/// Delay of a wire of total `r`, `c` split into n+1 equal segments by `n` identical buffers.
pub fn buffered_wire_delay(
    wire: WireRc,
    counts: &[usize],
    buffer: DriverModel,
    driver: DriverModel,
    load_c: f64,
    scale: ElmoreScale,
) -> Result<BufferedWire> {
    if counts.is_empty() {
        return Err(Error::input("no buffer counts to evaluate"));
    }
    if !(wire.r >= 0.0 && wire.c >= 0.0 && load_c >= 0.0) {
        return Err(Error::input("wire and load values must be non-negative"));
    }
    buffer.validate()?;
    driver.validate()?;
    let k = scale.factor();
    let delays: Vec<(usize, f64)> = counts
        .iter()
        .map(|&n| {
            let segs = (n + 1) as f64;
            let (r_s, c_s) = (wire.r / segs, wire.c / segs);
            let total: f64 = (0..=n)
                .map(|j| {
                    let drv = if j == 0 { &driver } else { &buffer };
                    let c_next = if j == n { load_c } else { buffer.input_cap() };
                    drv.stage(r_s, c_s, c_next, k)
                })
                .sum();
            (n, total)
        })
        .collect();
    let (optimal_n, optimal_delay) = delays
        .iter()
        .copied()
        .fold(None::<(usize, f64)>, |best, (n, d)| match best {
            Some((bn, bd)) if bd < d || (bd == d && bn <= n) => Some((bn, bd)),
            _ => Some((n, d)),
        })
        .expect("non-empty");
    Ok(BufferedWire {
        delays,
        optimal_n,
        optimal_delay,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainPlan {
    /// Optimal per-stage fanout.
    pub alpha: f64,
    /// ln f / ln α before rounding.
    pub exact_stages: f64,
    pub total_inverters: usize,
    /// Fanout per stage with the integer count.
    pub stage_ratio: f64,
}

/// Root of α(ln α − 1) = `gamma`, the optimal stage ratio with self-loading `gamma` = C_d/C_g.
pub fn optimal_stage_ratio(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::input("cd_over_cg must be non-negative"));
    }
    let e = std::f64::consts::E;
    if gamma == 0.0 {
        return Ok(e);
    }
    let f = |a: f64| a * (a.ln() - 1.0) - gamma;
    let mut hi = 2.0 * e;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    bisect(f, e, hi, 1e-14).ok_or_else(|| Error::solver("stage ratio not bracketed", vec![]))
}

/// Number of inverters driving a load `f` times the first stage's input capacitance.
pub fn inverter_chain_plan(f: f64, cd_over_cg: f64) -> Result<ChainPlan> {
    if !(f >= 1.0 && f.is_finite()) {
        return Err(Error::input("fanout ratio f must be at least 1"));
    }
    let alpha = optimal_stage_ratio(cd_over_cg)?;
    let exact = f.ln() / alpha.ln();
    let total = (exact - 1e-9).ceil().max(1.0) as usize;
    Ok(ChainPlan {
        alpha,
        exact_stages: exact,
        total_inverters: total,
        stage_ratio: f.powf(1.0 / total as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SlewMethod {
    /// C·ΔV over the mean of the currents at the two endpoint voltages.
    Acc,
    /// ∫ C dV / I(V).
    Diff,
    AvgCurrent { i_avg: f64 },
}

fn default_from() -> f64 {
    0.9
}

fn default_to() -> f64 {
    0.1
}

/// A step input turning on one device that discharges `c_load` from V_DD.
/// The output voltage is measured from the device's source rail, so pmos pull-ups work with magnitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlewCase {
    #[serde(default)]
    pub device: Option<MosDevice>,
    pub c_load: f64,
    pub v_dd: f64,
    #[serde(default = "default_from")]
    pub v_from_pct: f64,
    #[serde(default = "default_to")]
    pub v_to_pct: f64,
    #[serde(flatten)]
    pub method: SlewMethod,
}

/// Transition time between the two output levels.
pub fn output_slew(case: &SlewCase) -> Result<f64> {
    let (hi, lo) = (case.v_from_pct, case.v_to_pct);
    if !(0.0 < lo && lo < hi && hi <= 1.0) {
        return Err(Error::input("need 0 < v_to_pct < v_from_pct ≤ 1"));
    }
    if !(case.c_load > 0.0 && case.v_dd > 0.0) {
        return Err(Error::input("c_load and v_dd must be positive"));
    }
    let (v_hi, v_lo) = (hi * case.v_dd, lo * case.v_dd);
    let dv = v_hi - v_lo;
    if let SlewMethod::AvgCurrent { i_avg } = case.method {
        if !(i_avg > 0.0) {
            return Err(Error::input("i_avg must be positive"));
        }
        return Ok(case.c_load * dv / i_avg);
    }
    let dev = case
        .device
        .as_ref()
        .ok_or_else(|| Error::input("this slew method needs a device"))?;
    dev.validate()?;
    let current = |v: f64| bias_point(dev, case.v_dd, v, 0.0).map(|op| op.i_d);
    if current(v_lo)? <= 0.0 {
        return Err(Error::Infeasible(
            "device never conducts, the load cannot discharge".into(),
        ));
    }
    match case.method {
        SlewMethod::Acc => {
            let i_avg = 0.5 * (current(v_hi)? + current(v_lo)?);
            Ok(case.c_load * dv / i_avg)
        }
        SlewMethod::Diff => {
            let beta = dev.beta();
            let v_t = crate::device::threshold_voltage(dev, 0.0)?;
            let v_ov = case.v_dd - v_t.abs();
            if dev.lambda == 0.0 {
                // closed form: saturated down to V_ov, then linear
                let lin = |a: f64, b: f64| {
                    case.c_load / (beta * v_ov)
                        * ((a * (2.0 * v_ov - b)) / (b * (2.0 * v_ov - a))).ln()
                };
                Ok(if v_lo >= v_ov {
                    case.c_load * dv / (0.5 * beta * v_ov * v_ov)
                } else if v_hi <= v_ov {
                    lin(v_hi, v_lo)
                } else {
                    case.c_load * (v_hi - v_ov) / (0.5 * beta * v_ov * v_ov) + lin(v_ov, v_lo)
                })
            } else {
                let g = |v: f64| case.c_load / current(v).unwrap_or(f64::NAN);
                let t = integrate(&g, v_lo, v_hi, 1e-6 * case.c_load * dv / current(v_lo)?);
                if t.is_finite() {
                    Ok(t)
                } else {
                    Err(Error::solver("slew integral diverged", vec![]))
                }
            }
        }
        SlewMethod::AvgCurrent { .. } => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_lump_and_ladder() {
        let t = RcTree::ladder(&[50e3], &[20e-15]).unwrap();
        assert!((elmore(&t, "n1", ElmoreScale::Tau).unwrap() - 1e-9).abs() < 1e-21);
        let l = RcTree::ladder(&[1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert!((elmore(&l, "n2", ElmoreScale::Tau).unwrap() - 3.0).abs() < 1e-12);
        assert!((elmore(&l, "n2", ElmoreScale::Ln2).unwrap() - 2.07).abs() < 1e-12);
        assert!(elmore(&l, "zz", ElmoreScale::Tau).is_err());
    }

    #[test]
    fn cycle_rejected() {
        let n = |name: &str, p: Option<&str>| RcNode {
            name: name.into(),
            parent: p.map(String::from),
            r: 1.0,
            c: 1.0,
        };
        assert!(RcTree::new(&[n("r", None), n("a", Some("b")), n("b", Some("a"))]).is_err());
    }

    #[test]
    fn wire_extraction() {
        let w = wire_rc(&WireSpec {
            length: 9e-3,
            width: 0.375e-6,
            r_sheet: 0.025,
            c_area: 0.0,
            c_fringe_per_edge: 50e-12,
            fringe_edges: 1,
        })
        .unwrap();
        assert!((w.r - 600.0).abs() < 1e-9);
        assert!((w.c - 450e-15).abs() < 1e-24);
    }

    #[test]
    fn fixed_buffer_sweep() {
        let b = buffered_wire_delay(
            WireRc { r: 50e3, c: 20e-15 },
            &[0, 1, 2],
            DriverModel::FixedDelay { delay: 0.25e-9 },
            DriverModel::FixedDelay { delay: 0.0 },
            0.0,
            ElmoreScale::Tau,
        )
        .unwrap();
        assert_eq!(b.optimal_n, 1);
        assert!((b.optimal_delay - 0.75e-9).abs() < 1e-18);
        assert!((b.delays[2].1 - 0.8333e-9).abs() < 1e-12);
    }

    #[test]
    fn chain_plan() {
        let p = inverter_chain_plan(1000.0, 1.0).unwrap();
        assert!((p.alpha - 3.59).abs() < 0.005);
        assert_eq!(p.total_inverters, 6);
        assert_eq!(inverter_chain_plan(1.0, 1.0).unwrap().total_inverters, 1);
        assert!(inverter_chain_plan(0.5, 1.0).is_err());
    }

    #[test]
    fn slew_methods() {
        let dev = MosDevice::nmos(50e-6, 0.7, 12.0, 1.0);
        let case = |method| SlewCase {
            device: Some(dev.clone()),
            c_load: 10e-12,
            v_dd: 3.0,
            v_from_pct: 0.9,
            v_to_pct: 0.1,
            method,
        };
        let acc = output_slew(&case(SlewMethod::Acc)).unwrap();
        let diff = output_slew(&case(SlewMethod::Diff)).unwrap();
        assert!((acc - 24.31e-9).abs() < 0.01 * 24.31e-9);
        assert!((diff - 21.82e-9).abs() < 0.01 * 21.82e-9);
        let mut l = case(SlewMethod::Diff);
        l.device = Some(dev.clone().with_lambda(1e-9));
        assert!((output_slew(&l).unwrap() - diff).abs() < 1e-4 * diff);
    }
}
