//! Register timing checks, pipelines, ripple chains, ring oscillators and latch windows.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};

use crate::effort::Edge;
use crate::error::{Error, Result};

/// Capture clock arrival minus launch clock arrival, as an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Skew {
    pub early: f64,
    pub late: f64,
}

impl Skew {
    pub fn exact(s: f64) -> Self {
        Skew { early: s, late: s }
    }

    pub fn uncertain(nominal: f64, plus_minus: f64) -> Self {
        Skew {
            early: nominal - plus_minus,
            late: nominal + plus_minus,
        }
    }

    /// From clock arrival windows `[min, max]` at the launching and capturing registers.
    pub fn from_windows(launch: [f64; 2], capture: [f64; 2]) -> Self {
        Skew {
            early: capture[0] - launch[1],
            late: capture[1] - launch[0],
        }
    }
}

impl<'de> Deserialize<'de> for Skew {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged, deny_unknown_fields)]
        enum Raw {
            Exact(f64),
            Uncertain {
                #[serde(default)]
                nominal: f64,
                plus_minus: f64,
            },
            Windows {
                launch: [f64; 2],
                capture: [f64; 2],
            },
            Interval {
                early: f64,
                late: f64,
            },
        }
        let s = match Raw::deserialize(d)? {
            Raw::Exact(v) => Skew::exact(v),
            Raw::Uncertain {
                nominal,
                plus_minus,
            } => Skew::uncertain(nominal, plus_minus),
            Raw::Windows { launch, capture } => Skew::from_windows(launch, capture),
            Raw::Interval { early, late } => Skew { early, late },
        };
        if s.early > s.late {
            return Err(serde::de::Error::custom("skew interval has early > late"));
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegEdge {
    pub launch: String,
    pub capture: String,
    #[serde(default)]
    pub t_cq_min: f64,
    #[serde(default)]
    pub t_cq_max: f64,
    #[serde(default)]
    pub t_setup: f64,
    #[serde(default)]
    pub t_hold: f64,
    pub d_min: f64,
    pub d_max: f64,
    /// Taken from the clock arrivals when absent.
    #[serde(default)]
    pub skew: Option<Skew>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeCheck {
    pub launch: String,
    pub capture: String,
    pub skew: Skew,
    pub setup_slack: f64,
    pub hold_slack: f64,
    /// Smallest period meeting setup on this edge.
    pub required_period: f64,
    /// Largest hold time this edge tolerates.
    pub hold_bound: f64,
    pub setup_violation: bool,
    pub hold_violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingReport {
    pub edges: Vec<EdgeCheck>,
    pub t_min: f64,
    pub f_max: f64,
    /// Edge setting `t_min`.
    pub critical_edge: usize,
    /// Tightest hold bound over all edges.
    pub hold_limit: f64,
    pub any_violation: bool,
}

/// Setup and hold slacks at `period`, with skews from `clock_arrivals` where an edge has none.
pub fn check_timing(
    edges: &[RegEdge],
    period: f64,
    clock_arrivals: &BTreeMap<String, f64>,
) -> Result<TimingReport> {
    if !(period > 0.0) {
        return Err(Error::input("period must be positive"));
    }
    if edges.is_empty() {
        return Err(Error::input("no register edges"));
    }
    let mut out = Vec::new();
    for e in edges {
        if e.t_cq_min > e.t_cq_max || e.d_min > e.d_max {
            return Err(Error::input(format!(
                "{}→{}: minimum delays exceed maximum delays",
                e.launch, e.capture
            )));
        }
        let skew = match e.skew {
            Some(s) => s,
            None => {
                let arr = |r: &str| {
                    clock_arrivals.get(r).copied().ok_or_else(|| {
                        Error::input(format!("no skew for edge and no clock arrival for `{r}`"))
                    })
                };
                Skew::exact(arr(&e.capture)? - arr(&e.launch)?)
            }
        };
        let required = e.t_cq_max + e.d_max + e.t_setup - skew.early;
        let hold_bound = e.t_cq_min + e.d_min - skew.late;
        let setup_slack = period - required;
        let hold_slack = hold_bound - e.t_hold;
        out.push(EdgeCheck {
            launch: e.launch.clone(),
            capture: e.capture.clone(),
            skew,
            setup_slack,
            hold_slack,
            required_period: required,
            hold_bound,
            setup_violation: setup_slack < 0.0,
            hold_violation: hold_slack < 0.0,
        });
    }
    let critical_edge = (0..out.len())
        .max_by(|&a, &b| out[a].required_period.total_cmp(&out[b].required_period).then(b.cmp(&a)))
        .expect("non-empty");
    let t_min = out[critical_edge].required_period;
    Ok(TimingReport {
        t_min,
        f_max: if t_min > 0.0 { 1.0 / t_min } else { f64::INFINITY },
        critical_edge,
        hold_limit: out.iter().map(|e| e.hold_bound).fold(f64::INFINITY, f64::min),
        any_violation: out.iter().any(|e| e.setup_violation || e.hold_violation),
        edges: out,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PipelineMetrics {
    pub period: f64,
    pub f_max: f64,
    pub total_latency: f64,
    pub n_stages: usize,
}

/// Throughput of a pipeline processing `n_items` items.
pub fn pipeline_metrics(stage_delays: &[f64], n_items: usize, reg_overhead: f64) -> Result<PipelineMetrics> {
    if stage_delays.is_empty() || stage_delays.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::input("stage delays must be positive"));
    }
    if n_items == 0 || !(reg_overhead >= 0.0) {
        return Err(Error::input("need at least one item and non-negative overhead"));
    }
    let period = stage_delays.iter().copied().fold(0.0, f64::max) + reg_overhead;
    let n = stage_delays.len();
    Ok(PipelineMetrics {
        period,
        f_max: 1.0 / period,
        total_latency: (n_items + n - 1) as f64 * period,
        n_stages: n,
    })
}

/// Smallest stage count with total_comb/n + overhead < target_period.
pub fn stages_needed(total_comb: f64, reg_overhead: f64, target_period: f64) -> Result<usize> {
    if !(total_comb >= 0.0 && reg_overhead >= 0.0 && target_period > 0.0) {
        return Err(Error::input("delays must be non-negative and the target positive"));
    }
    let budget = target_period - reg_overhead;
    if budget <= 0.0 {
        return Err(Error::Infeasible(
            "register overhead alone meets or exceeds the target period".into(),
        ));
    }
    Ok(((total_comb / budget).floor() as usize + 1).max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RippleArcs {
    pub xy_to_s: f64,
    pub xy_to_bout: f64,
    pub bin_to_s: f64,
    pub bin_to_bout: f64,
    pub n_blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RippleTiming {
    pub s_stable: Vec<f64>,
    pub bout_stable: Vec<f64>,
    pub critical_delay: f64,
}

/// Settling times of a ripple chain whose primary inputs all switch at t = 0.
pub fn ripple_chain(arcs: &RippleArcs) -> Result<RippleTiming> {
    if arcs.n_blocks == 0 {
        return Err(Error::input("need at least one block"));
    }
    if [arcs.xy_to_s, arcs.xy_to_bout, arcs.bin_to_s, arcs.bin_to_bout]
        .iter()
        .any(|d| !(*d >= 0.0))
    {
        return Err(Error::input("arc delays must be non-negative"));
    }
    let mut s = Vec::with_capacity(arcs.n_blocks);
    let mut bout = Vec::with_capacity(arcs.n_blocks);
    let mut bin = 0.0;
    for _ in 0..arcs.n_blocks {
        s.push(f64::max(arcs.xy_to_s, bin + arcs.bin_to_s));
        let b = f64::max(arcs.xy_to_bout, bin + arcs.bin_to_bout);
        bout.push(b);
        bin = b;
    }
    let critical_delay = s.iter().chain(&bout).copied().fold(0.0, f64::max);
    Ok(RippleTiming {
        s_stable: s,
        bout_stable: bout,
        critical_delay,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingStage {
    pub t_plh: f64,
    pub t_phl: f64,
}

/// Stimulus: an edge on the input of stage 0 at t = 0; report when `probe` first makes `target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingStimulus {
    pub input_edge: Edge,
    pub target: Edge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub stages: Vec<RingStage>,
    /// Index of the stage whose output is observed.
    pub probe: usize,
    #[serde(default)]
    pub stimulus: Option<RingStimulus>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingAnalysis {
    pub period: f64,
    pub t_high: f64,
    pub t_low: f64,
    pub duty: f64,
    pub first_transition_at: Option<f64>,
}

fn stage_delay(s: &RingStage, out: Edge) -> f64 {
    match out {
        Edge::Rise => s.t_plh,
        Edge::Fall => s.t_phl,
    }
}

/// Period and duty cycle at the probe node by following one edge around the loop.
pub fn ring_analyze(spec: &RingSpec) -> Result<RingAnalysis> {
    let n = spec.stages.len();
    if n % 2 == 0 {
        return Err(Error::input("a ring oscillator needs an odd number of stages"));
    }
    if spec.probe >= n {
        return Err(Error::input(format!("probe {} is outside 0..{n}", spec.probe)));
    }
    if spec.stages.iter().any(|s| !(s.t_plh >= 0.0 && s.t_phl >= 0.0)) {
        return Err(Error::input("stage delays must be non-negative"));
    }
    // a rising edge at the probe returns as a falling edge after one trip around
    let trip = |start: Edge| -> f64 {
        let mut e = start;
        let mut t = 0.0;
        for j in 1..=n {
            e = e.flip();
            t += stage_delay(&spec.stages[(spec.probe + j) % n], e);
        }
        t
    };
    let t_high = trip(Edge::Rise);
    let t_low = trip(Edge::Fall);
    let period = t_high + t_low;
    let first_transition_at = spec.stimulus.map(|st| {
        let mut e = st.input_edge;
        let mut t = 0.0;
        let mut k = 0;
        loop {
            e = e.flip();
            t += stage_delay(&spec.stages[k], e);
            if k == spec.probe && e == st.target {
                return t;
            }
            k = (k + 1) % n;
        }
    });
    Ok(RingAnalysis {
        period,
        t_high,
        t_low,
        duty: if period > 0.0 { t_high / period } else { 0.0 },
        first_transition_at,
    })
}

/// Uniform stage delays giving the requested period and duty cycle.
pub fn ring_design(n_stages: usize, period: f64, duty: f64) -> Result<RingStage> {
    if n_stages % 2 == 0 {
        return Err(Error::input("a ring oscillator needs an odd number of stages"));
    }
    if !(period > 0.0 && duty > 0.0 && duty < 1.0) {
        return Err(Error::input("need period > 0 and 0 < duty < 1"));
    }
    let n = ((n_stages - 1) / 2) as f64;
    let (th, tl) = (duty * period, (1.0 - duty) * period);
    let t_plh = ((n + 1.0) * tl - n * th) / (2.0 * n + 1.0);
    let t_phl = ((n + 1.0) * th - n * tl) / (2.0 * n + 1.0);
    if t_plh <= 0.0 || t_phl <= 0.0 {
        return Err(Error::Infeasible(format!(
            "duty {duty} cannot be reached with {n_stages} identical stages"
        )));
    }
    Ok(RingStage { t_plh, t_phl })
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatchPipeline {
    /// Worst-case logic delay of each stage between alternating-phase latches.
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub d_cq: f64,
    #[serde(default)]
    pub d_dq: f64,
    /// Latch setup time.
    #[serde(default)]
    pub d_dc: f64,
    /// Latch hold time; recorded but not part of the max-delay constraints.
    #[serde(default)]
    pub d_cd: f64,
    #[serde(default)]
    pub period: Option<f64>,
    #[serde(default = "half")]
    pub duty: f64,
    #[serde(default)]
    pub skew: f64,
    /// Treat `deltas` as one period of an endlessly repeating pipeline.
    #[serde(default)]
    pub repeating: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatchConstraint {
    /// 1-based first and last stage of the run.
    pub first: usize,
    pub last: usize,
    /// Window length in periods.
    pub window: f64,
    /// Logic and latch delay on the left-hand side.
    pub lhs: f64,
    /// Smallest period meeting this constraint.
    pub t_required: f64,
    pub text: String,
    pub slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatchReport {
    pub constraints: Vec<LatchConstraint>,
    pub t_min: f64,
    pub feasible: Option<bool>,
}

fn open_at(k: usize, duty: f64) -> f64 {
    (k / 2) as f64 + if k % 2 == 1 { duty } else { 0.0 }
}

fn close_at(k: usize, duty: f64) -> f64 {
    if k % 2 == 0 {
        (k / 2) as f64 + duty
    } else {
        (k / 2 + 1) as f64
    }
}

/// Window, in periods, from the opening of latch i−1 to the closing of latch j.
fn window(i: usize, j: usize, duty: f64) -> f64 {
    close_at(j, duty) - open_at(i - 1, duty)
}

fn coefficient(x: f64, sym: &str) -> String {
    let r = (x * 1e6).round() / 1e6;
    if r == 1.0 {
        sym.to_string()
    } else {
        format!("{r}{sym}")
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Max-delay constraints for every contiguous run of stages, allowing borrowing at each latch.
pub fn latch_constraints(p: &LatchPipeline) -> Result<LatchReport> {
    let n = p.deltas.len();
    if n == 0 {
        return Err(Error::input("pipeline has no stages"));
    }
    if !(p.duty > 0.0 && p.duty < 1.0) {
        return Err(Error::input("duty must lie in (0, 1)"));
    }
    if p.deltas.iter().chain([&p.d_cq, &p.d_dq, &p.d_dc, &p.d_cd]).any(|d| !(*d >= 0.0)) {
        return Err(Error::input("delays must be non-negative"));
    }
    let tail = p.d_dc + p.skew;
    let mut constraints = Vec::new();
    for len in 1..=n {
        for i in 1..=n + 1 - len {
            let j = i + len - 1;
            let logic: f64 = p.deltas[i - 1..j].iter().sum();
            let lhs = logic + p.d_cq + (len - 1) as f64 * p.d_dq;
            let w = window(i, j, p.duty);
            let mut terms: Vec<String> = (i..=j).map(|k| format!("Δ{k}")).collect();
            terms.push("Δ_CQ".into());
            if len > 1 {
                terms.push(coefficient((len - 1) as f64, "Δ_DQ"));
            }
            let text = format!(
                "{} ≤ {} - Δ_DC - t_skew",
                terms.join(" + "),
                coefficient(w, "T")
            );
            constraints.push(LatchConstraint {
                first: i,
                last: j,
                window: w,
                lhs,
                t_required: (lhs + tail) / w,
                slack: p.period.map(|t| w * t - tail - lhs),
                text,
            });
        }
    }
    let mut t_min = constraints.iter().map(|c| c.t_required).fold(0.0, f64::max);
    if p.repeating {
        let cycle = n * 2 / gcd(n, 2);
        for start in 1..=cycle {
            let mut lhs = p.d_cq;
            for len in 1..=2 * cycle {
                let k = start + len - 1;
                lhs += p.deltas[(k - 1) % n] + if len > 1 { p.d_dq } else { 0.0 };
                t_min = t_min.max((lhs + tail) / window(start, k, p.duty));
            }
        }
        let mean: f64 = p.deltas.iter().map(|d| d + p.d_dq).sum::<f64>() / n as f64;
        t_min = t_min.max(2.0 * mean);
    }
    let feasible = p.period.map(|t| {
        t > 0.0 && constraints.iter().all(|c| c.slack.unwrap_or(0.0) >= -1e-12 * t) && t >= t_min * (1.0 - 1e-12)
    });
    Ok(LatchReport {
        constraints,
        t_min,
        feasible,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DffMargins {
    pub t_setup: f64,
    pub t_hold: f64,
}

/// Setup and hold of the six-NAND edge-triggered flip-flop from its gate delays t1..t6.
pub fn dff_margins(t: &[f64; 6]) -> Result<DffMargins> {
    if t.iter().any(|x| !(*x >= 0.0)) {
        return Err(Error::input("gate delays must be non-negative"));
    }
    Ok(DffMargins {
        t_setup: t[3] + t[0],
        t_hold: t[1].max(t[2]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(l: &str, c: &str, d: f64) -> RegEdge {
        RegEdge {
            launch: l.into(),
            capture: c.into(),
            t_cq_min: 0.0,
            t_cq_max: 0.0,
            t_setup: 0.0,
            t_hold: 0.0,
            d_min: d,
            d_max: d,
            skew: None,
        }
    }

    #[test]
    fn window_skew_slacks() {
        let e = RegEdge {
            t_cq_min: 9.0,
            t_cq_max: 11.0,
            t_setup: 4.0,
            t_hold: 2.0,
            d_min: 8.0,
            d_max: 13.0,
            skew: Some(Skew::from_windows([1.0, 2.0], [9.0, 15.0])),
            ..edge("a", "b", 0.0)
        };
        let r = check_timing(&[e], 15.0, &BTreeMap::new()).unwrap();
        assert!((r.edges[0].hold_slack - 1.0).abs() < 1e-12);
        assert!((r.edges[0].setup_slack + 6.0).abs() < 1e-12);
    }

    #[test]
    fn skew_from_arrivals() {
        let arr: BTreeMap<String, f64> =
            [("FF1", 24.0), ("FF2", 3.0)].map(|(k, v)| (k.to_string(), v)).into();
        let r = check_timing(&[edge("FF1", "FF2", 67.0), edge("FF2", "FF1", 32.0)], 100.0, &arr)
            .unwrap();
        assert_eq!(r.t_min, 88.0);
        assert_eq!(r.edges[1].hold_bound, 11.0);
        assert!(check_timing(&[edge("FF1", "X", 1.0)], 1.0, &arr).is_err());
    }

    #[test]
    fn pipelines() {
        let m = pipeline_metrics(&[0.2, 1.8, 0.8, 1.1, 1.1], 1000, 0.0).unwrap();
        assert!((m.total_latency - 1807.2).abs() < 1e-9);
        assert_eq!(stages_needed(3.74, 0.1, 0.5).unwrap(), 10);
        assert!(stages_needed(1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn ripple() {
        let r = ripple_chain(&RippleArcs {
            xy_to_s: 1.0,
            xy_to_bout: 2.0,
            bin_to_s: 1.5,
            bin_to_bout: 0.5,
            n_blocks: 8,
        })
        .unwrap();
        assert_eq!(r.s_stable[0], 1.5);
        assert_eq!(r.s_stable[3], 4.5);
        assert_eq!(r.bout_stable[7], 5.5);
        assert_eq!(r.critical_delay, 6.5);
    }

    #[test]
    fn ring_uniform_and_stimulus() {
        let spec = RingSpec {
            stages: vec![RingStage { t_plh: 50.0, t_phl: 30.0 }; 5],
            probe: 4,
            stimulus: Some(RingStimulus {
                input_edge: Edge::Rise,
                target: Edge::Fall,
            }),
        };
        let a = ring_analyze(&spec).unwrap();
        assert_eq!(a.period, 400.0);
        assert_eq!(a.first_transition_at, Some(190.0));
        let d = ring_design(5, 2.0, 0.45).unwrap();
        assert!((d.t_plh - 0.3).abs() < 1e-12 && (d.t_phl - 0.1).abs() < 1e-12);
    }

    #[test]
    fn four_stage_latch_windows() {
        let r = latch_constraints(&LatchPipeline {
            deltas: vec![0.0; 4],
            d_cq: 0.0,
            d_dq: 0.0,
            d_dc: 0.0,
            d_cd: 0.0,
            period: Some(1.0),
            duty: 0.4,
            skew: 0.0,
            repeating: false,
        })
        .unwrap();
        let w: Vec<f64> = r.constraints.iter().map(|c| (c.window * 10.0).round() / 10.0).collect();
        assert_eq!(w, vec![1.0, 1.0, 1.0, 1.0, 1.4, 1.6, 1.4, 2.0, 2.0, 2.4]);
        assert_eq!(
            r.constraints[4].text,
            "Δ1 + Δ2 + Δ_CQ + Δ_DQ ≤ 1.4T - Δ_DC - t_skew"
        );
        assert_eq!(r.feasible, Some(true));
    }

    #[test]
    fn nand_flip_flop() {
        let m = dff_margins(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!((m.t_setup, m.t_hold), (5.0, 3.0));
    }
}
