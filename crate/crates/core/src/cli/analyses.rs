//! Analysis registry: parameter schemas and result mapping for every library operation.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer};
use serde_json::Value;

use super::{CliError, Out};
use crate::device::{self, InverterConfig, LogicLevels, MosDevice, PhysicalConstants, Polarity, Region, ScalingMode};
use crate::effort::{self, ForkSpec, GateCircuit, PathSpec, PolarityConstraint, RHO};
use crate::expr::BoolExpr;
use crate::gates::{self, ChargeShareCase, CompoundGate, ReferenceInverter, SpNetwork};
use crate::interconnect::{self, DriverModel, ElmoreScale, RcNode, RcTree, SlewCase, WireRc, WireSpec};
use crate::memory::{self, AddressMap, ArrayPlan, BitlineGeometry, CellMode, DecoderStage, LoadResistorCase, SramCell, WriteSizing};
use crate::power::{self, LoadPoint, PowerEnv};
use crate::testability::{self, GateNetlist, GfPolynomial, NamedFault};
use crate::timing::{self, LatchPipeline, RegEdge, RingSpec, RippleArcs};

pub struct Analysis {
    pub id: &'static str,
    pub summary: &'static str,
    pub params: &'static str,
    pub(super) check: fn(&Value) -> Result<(), String>,
    pub(super) run: fn(&Value) -> Result<Out, CliError>,
}

fn check<T: DeserializeOwned>(v: &Value) -> Result<(), String> {
    T::deserialize(v).map(|_| ()).map_err(|e| e.to_string())
}

fn parse<T: DeserializeOwned>(v: &Value) -> Result<T, CliError> {
    T::deserialize(v).map_err(|e| CliError::Malformed(format!("params: {e}")))
}

fn two() -> f64 {
    2.0
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

fn yes() -> bool {
    true
}

fn rho() -> f64 {
    RHO
}

/// A bit written as true/false or 0/1.
#[derive(Debug, Clone, Copy)]
struct Bit(bool);

impl<'de> Deserialize<'de> for Bit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            B(bool),
            N(u8),
        }
        match Repr::deserialize(d)? {
            Repr::B(b) => Ok(Bit(b)),
            Repr::N(0) => Ok(Bit(false)),
            Repr::N(1) => Ok(Bit(true)),
            Repr::N(n) => Err(serde::de::Error::custom(format!("bit must be 0 or 1, got {n}"))),
        }
    }
}

/// A vector written as "0110" or as a list of bits, first input first.
#[derive(Debug, Clone)]
struct Bits(Vec<bool>);

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            List(Vec<Bit>),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s
                .chars()
                .filter(|c| !c.is_whitespace() && *c != '_')
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(serde::de::Error::custom(format!("bad bit `{other}`"))),
                })
                .collect::<Result<_, _>>()
                .map(Bits),
            Repr::List(v) => Ok(Bits(v.into_iter().map(|b| b.0).collect())),
        }
    }
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// An address as an integer or a "0x…" string.
#[derive(Debug, Clone, Copy)]
struct Address(u64);

impl<'de> Deserialize<'de> for Address {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            N(u64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::N(n) => Ok(Address(n)),
            Repr::Text(s) => {
                let t = s.trim().replace('_', "");
                let parsed = if let Some(h) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
                    u64::from_str_radix(h, 16)
                } else if let Some(b) = t.strip_prefix("0b") {
                    u64::from_str_radix(b, 2)
                } else {
                    t.parse()
                };
                parsed
                    .map(Address)
                    .map_err(|_| serde::de::Error::custom(format!("bad address `{s}`")))
            }
        }
    }
}

// ---- device ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdParams {
    device: MosDevice,
    #[serde(default)]
    v_sb: f64,
}

fn run_threshold(v: &Value) -> Result<Out, CliError> {
    let p: ThresholdParams = parse(v)?;
    Ok(Out::new().q("v_t", device::threshold_voltage(&p.device, p.v_sb)?, "V"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BiasParams {
    device: MosDevice,
    v_gs: f64,
    v_ds: f64,
    #[serde(default)]
    v_sb: f64,
}

fn run_bias(v: &Value) -> Result<Out, CliError> {
    let p: BiasParams = parse(v)?;
    let op = device::bias_point(&p.device, p.v_gs, p.v_ds, p.v_sb)?;
    Ok(Out::new()
        .raw("region", op.region)
        .q("i_d", op.i_d, "A")
        .q("v_t", op.v_t, "V"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CapParams {
    device: MosDevice,
    region: Region,
    #[serde(default)]
    v_reverse: f64,
    #[serde(default)]
    constants: PhysicalConstants,
}

fn run_caps(v: &Value) -> Result<Out, CliError> {
    let p: CapParams = parse(v)?;
    let c = device::mos_capacitances(&p.device, p.region, p.v_reverse, &p.constants)?;
    Ok(Out::new()
        .q("c_gb", c.c_gb, "F")
        .q("c_gs", c.c_gs, "F")
        .q("c_gd", c.c_gd, "F")
        .q("c_ox_total", c.c_ox_total, "F")
        .q("c_overlap", c.c_overlap, "F")
        .q("c_bottom", c.c_bottom, "F")
        .q("c_sidewall", c.c_sidewall, "F")
        .q("c_junction_total", c.c_junction_total, "F"))
}

fn run_scale(v: &Value) -> Result<Out, CliError> {
    let mode: ScalingMode = parse(v)?;
    let f = device::scale_factors(mode)?;
    Ok(f.factors.iter().fold(Out::new(), |o, (k, x)| o.q(k, *x, "")))
}

fn run_vtc(v: &Value) -> Result<Out, CliError> {
    let cfg: InverterConfig = parse(v)?;
    let r = device::inverter_vtc(&cfg)?;
    Ok(Out::new()
        .q("v_ol", r.v_ol, "V")
        .q("v_oh", r.v_oh, "V")
        .q("v_il", r.v_il, "V")
        .q("v_ih", r.v_ih, "V")
        .q("v_m", r.v_m, "V")
        .q("nm_l", r.nm_l, "V")
        .q("nm_h", r.nm_h, "V")
        .raw("regions_at_v_il", r.at_v_il)
        .raw("regions_at_v_ih", r.at_v_ih)
        .raw("regions_at_v_m", r.at_v_m))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LevelSource {
    Inverter(InverterConfig),
    Levels(LogicLevels),
}

impl LevelSource {
    fn levels(&self) -> crate::Result<LogicLevels> {
        match self {
            LevelSource::Inverter(c) => Ok(device::inverter_vtc(c)?.levels()),
            LevelSource::Levels(l) => Ok(*l),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MarginParams {
    driver: LevelSource,
    receiver: LevelSource,
}

fn run_margins(v: &Value) -> Result<Out, CliError> {
    let p: MarginParams = parse(v)?;
    let nm = device::noise_margins(&p.driver.levels()?, &p.receiver.levels()?);
    Ok(Out::new().q("nm_l", nm.nm_l, "V").q("nm_h", nm.nm_h, "V"))
}

// ---- gates ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GateParams {
    expr: BoolExpr,
    #[serde(default)]
    reference: ReferenceInverter,
    #[serde(default = "two")]
    mu: f64,
    #[serde(default)]
    c_l: Option<f64>,
}

impl GateParams {
    fn gate(&self) -> crate::Result<CompoundGate> {
        gates::compound_gate(&self.expr, self.reference, self.mu)
    }
}

fn widths(net: &SpNetwork) -> BTreeMap<String, Vec<f64>> {
    let mut m: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    collect_widths(net, &mut m);
    m
}

fn collect_widths(net: &SpNetwork, m: &mut BTreeMap<String, Vec<f64>>) {
    match net {
        SpNetwork::Switch { input, width } => m.entry(input.to_string()).or_default().push(*width),
        SpNetwork::Series(v) | SpNetwork::Parallel(v) => v.iter().for_each(|n| collect_widths(n, m)),
    }
}

fn run_compound(v: &Value) -> Result<Out, CliError> {
    let p: GateParams = parse(v)?;
    let g = p.gate()?;
    Ok(Out::new()
        .raw("inputs", g.inputs())
        .raw("pdn", &g.pdn)
        .raw("pun", &g.pun)
        .raw("pdn_widths", widths(&g.pdn))
        .raw("pun_widths", widths(&g.pun))
        .q("area", g.area(), "width")
        .q("area_ratio", g.area_ratio(), ""))
}

fn run_bounds(v: &Value) -> Result<Out, CliError> {
    let p: GateParams = parse(v)?;
    let g = p.gate()?;
    let b = gates::delay_bounds(&g, p.c_l.unwrap_or(1.0))?;
    let unit = if p.c_l.is_some() { "R_n·F" } else { "R_n·C_L" };
    Ok(Out::new()
        .q("rise_worst", b.rise.worst, unit)
        .q("rise_best", b.rise.best, unit)
        .q("rise_ratio", b.rise.ratio, "")
        .q("fall_worst", b.fall.worst, unit)
        .q("fall_best", b.fall.best, unit)
        .q("fall_ratio", b.fall.ratio, ""))
}

fn run_euler(v: &Value) -> Result<Out, CliError> {
    let p: GateParams = parse(v)?;
    let g = p.gate()?;
    Ok(match gates::common_euler_ordering(&g)? {
        Some(e) => Out::new()
            .raw("found", true)
            .raw("order", &e.order)
            .raw("pdn", &e.pdn)
            .raw("pun", &e.pun),
        None => Out::new()
            .raw("found", false)
            .raw("order", Value::Null)
            .note("no arrangement of the series-parallel networks shares an Euler trail"),
    })
}

fn run_charge(v: &Value) -> Result<Out, CliError> {
    let c: ChargeShareCase = parse(v)?;
    let vout = gates::charge_share_voltage(&c)?;
    Ok(Out::new().q("v_out", vout, "V").q("v_out_over_v_dd", vout / c.v_dd, ""))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkParams {
    network: SpNetwork,
    polarity: Polarity,
    assignment: BTreeMap<String, Bit>,
}

fn run_network(v: &Value) -> Result<Out, CliError> {
    let p: NetworkParams = parse(v)?;
    let a: BTreeMap<String, bool> = p.assignment.into_iter().map(|(k, b)| (k, b.0)).collect();
    Ok(Out::new().raw("conducts", gates::evaluate_network(&p.network, p.polarity, &a)?))
}

// ---- interconnect ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Ladder {
    r: Vec<f64>,
    c: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ElmoreParams {
    #[serde(default)]
    nodes: Option<Vec<RcNode>>,
    #[serde(default)]
    ladder: Option<Ladder>,
    sink: String,
    #[serde(default)]
    scale: ElmoreScale,
}

impl ElmoreParams {
    fn tree(&self) -> crate::Result<RcTree> {
        match (&self.nodes, &self.ladder) {
            (Some(n), None) => RcTree::new(n),
            (None, Some(l)) => RcTree::ladder(&l.r, &l.c),
            _ => Err(crate::Error::Input("give exactly one of `nodes` or `ladder`".into())),
        }
    }
}

fn check_elmore(v: &Value) -> Result<(), String> {
    let p = ElmoreParams::deserialize(v).map_err(|e| e.to_string())?;
    match (&p.nodes, &p.ladder) {
        (Some(_), None) | (None, Some(_)) => Ok(()),
        _ => Err("give exactly one of `nodes` or `ladder`".into()),
    }
}

fn run_elmore(v: &Value) -> Result<Out, CliError> {
    let p: ElmoreParams = parse(v)?;
    let t = p.tree()?;
    Ok(Out::new().q("delay", interconnect::elmore(&t, &p.sink, p.scale)?, "s"))
}

fn run_wire(v: &Value) -> Result<Out, CliError> {
    let w: WireSpec = parse(v)?;
    let rc = interconnect::wire_rc(&w)?;
    Ok(Out::new().q("r", rc.r, "Ω").q("c", rc.c, "F").q("rc", rc.r * rc.c, "s"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RcPair {
    r: f64,
    c: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WireInput {
    Spec(WireSpec),
    Lumped(RcPair),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CountRange {
    from: usize,
    to: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Counts {
    One(usize),
    List(Vec<usize>),
    Range(CountRange),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BufferedParams {
    wire: WireInput,
    n_buffers: Counts,
    buffer: DriverModel,
    #[serde(default = "no_driver")]
    driver: DriverModel,
    #[serde(default)]
    load_c: f64,
    #[serde(default)]
    scale: ElmoreScale,
}

fn no_driver() -> DriverModel {
    DriverModel::FixedDelay { delay: 0.0 }
}

fn run_buffered(v: &Value) -> Result<Out, CliError> {
    let p: BufferedParams = parse(v)?;
    let rc = match p.wire {
        WireInput::Spec(s) => interconnect::wire_rc(&s)?,
        WireInput::Lumped(RcPair { r, c }) => WireRc { r, c },
    };
    let counts: Vec<usize> = match p.n_buffers {
        Counts::One(n) => vec![n],
        Counts::List(v) => v,
        Counts::Range(r) => (r.from..=r.to).collect(),
    };
    let b = interconnect::buffered_wire_delay(rc, &counts, p.buffer, p.driver, p.load_c, p.scale)?;
    let ns: Vec<usize> = b.delays.iter().map(|d| d.0).collect();
    let ds: Vec<f64> = b.delays.iter().map(|d| d.1).collect();
    Ok(Out::new()
        .q("wire_r", rc.r, "Ω")
        .q("wire_c", rc.c, "F")
        .raw("n_buffers", ns)
        .qs("delays", &ds, "s")
        .count("optimal_n", b.optimal_n as i128)
        .q("optimal_delay", b.optimal_delay, "s"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainParams {
    f: f64,
    #[serde(default)]
    cd_over_cg: f64,
}

fn run_chain(v: &Value) -> Result<Out, CliError> {
    let p: ChainParams = parse(v)?;
    let c = interconnect::inverter_chain_plan(p.f, p.cd_over_cg)?;
    Ok(Out::new()
        .q("alpha", c.alpha, "")
        .q("exact_stages", c.exact_stages, "")
        .count("total_inverters", c.total_inverters as i128)
        .q("stage_ratio", c.stage_ratio, ""))
}

fn run_slew(v: &Value) -> Result<Out, CliError> {
    let c: SlewCase = parse(v)?;
    Ok(Out::new().q("t_transition", interconnect::output_slew(&c)?, "s"))
}

// ---- effort ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExprGate {
    expr: BoolExpr,
    #[serde(default)]
    reference: ReferenceInverter,
    #[serde(default = "two")]
    mu: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GateSource {
    Circuit(GateCircuit),
    Expr(ExprGate),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TemplateParams {
    #[serde(default)]
    name: Option<String>,
    gate: GateSource,
    #[serde(default)]
    reference: Option<GateCircuit>,
}

fn run_template(v: &Value) -> Result<Out, CliError> {
    let p: TemplateParams = parse(v)?;
    let gate = match p.gate {
        GateSource::Circuit(c) => c,
        GateSource::Expr(e) => {
            GateCircuit::from_compound(&gates::compound_gate(&e.expr, e.reference, e.mu)?)
        }
    };
    let reference = p
        .reference
        .unwrap_or_else(|| GateCircuit::inverter(1.0, gate.mu, gate.mu));
    let name = p.name.unwrap_or_else(|| "gate".into());
    let t = effort::derive_template(&name, &gate, &reference)?;
    let mut out = Out::new()
        .q("p_rise", t.p_rise, "")
        .q("p_fall", t.p_fall, "")
        .q("c_p", t.c_p, "c_unit");
    for (input, e) in &t.inputs {
        out = out
            .q(&format!("{input}.c_in"), e.c_in, "c_unit")
            .q(&format!("{input}.g_rise"), e.g.rise, "")
            .q(&format!("{input}.g_fall"), e.g.fall, "")
            .q(&format!("{input}.p_rise"), e.p.rise, "")
            .q(&format!("{input}.p_fall"), e.p.fall, "");
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NandNorParams {
    n: usize,
    #[serde(default = "two")]
    mu: f64,
}

fn run_nand_nor(v: &Value) -> Result<Out, CliError> {
    let p: NandNorParams = parse(v)?;
    let e = effort::nand_nor_effort(p.n, p.mu)?;
    Ok(Out::new()
        .q("nand_per_input", e.nand.per_input, "")
        .q("nand_total", e.nand.total, "")
        .q("nor_per_input", e.nor.per_input, "")
        .q("nor_total", e.nor.total, ""))
}

fn path_out(out: Out, d: &effort::PathDelay) -> Out {
    out.count("n", d.n as i128)
        .q("g_total", d.g_total, "")
        .q("b_total", d.b_total, "")
        .q("h", d.h, "")
        .q("f_total", d.f_total, "")
        .q("p_total", d.p_total, "")
        .q("f_hat", d.f_hat, "")
        .q("d", d.d, "τ")
        .raw("stage_names", &d.stage_names)
        .qs("input_caps", &d.input_caps, "c_unit")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PathParams {
    path: PathSpec,
    #[serde(default)]
    n_override: Option<usize>,
    #[serde(default = "one")]
    p_inv: f64,
}

fn run_path(v: &Value) -> Result<Out, CliError> {
    let p: PathParams = parse(v)?;
    Ok(path_out(Out::new(), &effort::path_delay(&p.path, p.n_override, p.p_inv)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OptimizeParams {
    path: PathSpec,
    #[serde(default = "yes")]
    allow_added_inverters: bool,
    #[serde(default)]
    polarity: PolarityConstraint,
    #[serde(default = "rho")]
    rho: f64,
    #[serde(default = "one")]
    p_inv: f64,
}

fn run_optimize(v: &Value) -> Result<Out, CliError> {
    let p: OptimizeParams = parse(v)?;
    let o = effort::optimize_path(&p.path, p.allow_added_inverters, p.polarity, p.rho, p.p_inv)?;
    let ns: Vec<usize> = o.candidates.iter().map(|c| c.0).collect();
    let ds: Vec<f64> = o.candidates.iter().map(|c| c.1).collect();
    Ok(path_out(Out::new(), &o.best)
        .count("added_inverters", o.added_inverters as i128)
        .raw("candidate_n", ns)
        .qs("candidate_d", &ds, "τ"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BestPathParams {
    candidates: Vec<PathSpec>,
}

fn run_best_path(v: &Value) -> Result<Out, CliError> {
    let p: BestPathParams = parse(v)?;
    let (best, all) = effort::best_path(&p.candidates)?;
    let ds: Vec<f64> = all.iter().map(|d| d.d).collect();
    Ok(path_out(Out::new(), &all[best])
        .count("best", best as i128)
        .qs("candidate_d", &ds, "τ"))
}

fn run_fork(v: &Value) -> Result<Out, CliError> {
    let f: ForkSpec = parse(v)?;
    let d = effort::design_fork(&f)?;
    Ok(Out::new()
        .count("m", d.m as i128)
        .q("x", d.x, "c_unit")
        .q("x_short", d.x_short, "c_unit")
        .q("d_long", d.d_long, "τ")
        .q("d_short", d.d_short, "τ")
        .q("d_fork", d.d_fork, "τ")
        .qs("long_caps", &d.long_caps, "c_unit")
        .qs("short_caps", &d.short_caps, "c_unit"))
}

// ---- timing ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TimingParams {
    edges: Vec<RegEdge>,
    period: f64,
    #[serde(default)]
    clock_arrivals: BTreeMap<String, f64>,
}

fn run_check_timing(v: &Value) -> Result<Out, CliError> {
    let p: TimingParams = parse(v)?;
    let r = timing::check_timing(&p.edges, p.period, &p.clock_arrivals)?;
    let col = |f: fn(&timing::EdgeCheck) -> f64| r.edges.iter().map(f).collect::<Vec<_>>();
    let names: Vec<String> = r.edges.iter().map(|e| format!("{}->{}", e.launch, e.capture)).collect();
    Ok(Out::new()
        .raw("edges", names)
        .qs("setup_slack", &col(|e| e.setup_slack), "s")
        .qs("hold_slack", &col(|e| e.hold_slack), "s")
        .qs("required_period", &col(|e| e.required_period), "s")
        .qs("hold_bound", &col(|e| e.hold_bound), "s")
        .raw("setup_violation", r.edges.iter().map(|e| e.setup_violation).collect::<Vec<_>>())
        .raw("hold_violation", r.edges.iter().map(|e| e.hold_violation).collect::<Vec<_>>())
        .q("t_min", r.t_min, "s")
        .q("f_max", r.f_max, "Hz")
        .count("critical_edge", r.critical_edge as i128)
        .q("hold_limit", r.hold_limit, "s")
        .raw("any_violation", r.any_violation))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PipelineParams {
    stage_delays: Vec<f64>,
    #[serde(default = "one_usize")]
    n_items: usize,
    #[serde(default)]
    reg_overhead: f64,
    #[serde(default)]
    total_comb_delay: Option<f64>,
    #[serde(default)]
    target_period: Option<f64>,
}

fn run_pipeline(v: &Value) -> Result<Out, CliError> {
    let p: PipelineParams = parse(v)?;
    let m = timing::pipeline_metrics(&p.stage_delays, p.n_items, p.reg_overhead)?;
    let mut out = Out::new()
        .q("period", m.period, "s")
        .q("f_max", m.f_max, "Hz")
        .q("total_latency", m.total_latency, "s")
        .count("n_stages", m.n_stages as i128);
    match (p.total_comb_delay, p.target_period) {
        (Some(t), Some(target)) => {
            out = out.count("stages_needed", timing::stages_needed(t, p.reg_overhead, target)? as i128);
        }
        (None, None) => {}
        _ => out = out.note("stages_needed needs both total_comb_delay and target_period"),
    }
    Ok(out)
}

fn run_ripple(v: &Value) -> Result<Out, CliError> {
    let a: RippleArcs = parse(v)?;
    let r = timing::ripple_chain(&a)?;
    Ok(Out::new()
        .qs("s_stable", &r.s_stable, "s")
        .qs("bout_stable", &r.bout_stable, "s")
        .q("critical_delay", r.critical_delay, "s"))
}

fn run_ring(v: &Value) -> Result<Out, CliError> {
    let s: RingSpec = parse(v)?;
    let r = timing::ring_analyze(&s)?;
    let mut out = Out::new()
        .q("period", r.period, "s")
        .q("t_high", r.t_high, "s")
        .q("t_low", r.t_low, "s")
        .q("duty", r.duty, "");
    if let Some(t) = r.first_transition_at {
        out = out.q("first_transition_at", t, "s");
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RingDesignParams {
    n_stages: usize,
    period: f64,
    duty: f64,
}

fn run_ring_design(v: &Value) -> Result<Out, CliError> {
    let p: RingDesignParams = parse(v)?;
    let s = timing::ring_design(p.n_stages, p.period, p.duty)?;
    Ok(Out::new().q("t_plh", s.t_plh, "s").q("t_phl", s.t_phl, "s"))
}

fn run_latch(v: &Value) -> Result<Out, CliError> {
    let p: LatchPipeline = parse(v)?;
    let r = timing::latch_constraints(&p)?;
    let texts: Vec<&str> = r.constraints.iter().map(|c| c.text.as_str()).collect();
    let windows: Vec<f64> = r.constraints.iter().map(|c| c.window).collect();
    let req: Vec<f64> = r.constraints.iter().map(|c| c.t_required).collect();
    let mut out = Out::new()
        .raw("inequalities", texts)
        .qs("windows", &windows, "T")
        .qs("t_required", &req, "s")
        .q("t_min", r.t_min, "s")
        .raw("feasible", r.feasible);
    let slacks: Option<Vec<f64>> = r.constraints.iter().map(|c| c.slack).collect();
    if let Some(s) = slacks {
        out = out.qs("slack", &s, "s");
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DffParams {
    delays: [f64; 6],
}

fn run_dff(v: &Value) -> Result<Out, CliError> {
    let p: DffParams = parse(v)?;
    let m = timing::dff_margins(&p.delays)?;
    Ok(Out::new().q("t_setup", m.t_setup, "s").q("t_hold", m.t_hold, "s"))
}

// ---- power ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbParams {
    expr: BoolExpr,
    #[serde(default)]
    env: BTreeMap<String, f64>,
}

fn run_prob(v: &Value) -> Result<Out, CliError> {
    let p: ProbParams = parse(v)?;
    let s = power::signal_probability(&p.expr, &p.env)?;
    Ok(Out::new().q("p", s.p, "").q("beta", s.beta, ""))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SwitchingParams {
    loads: Vec<LoadPoint>,
    env: PowerEnv,
}

fn run_switching(v: &Value) -> Result<Out, CliError> {
    let p: SwitchingParams = parse(v)?;
    let mut per_load = Vec::new();
    for l in &p.loads {
        per_load.push(power::switching_power(std::slice::from_ref(l), &p.env)?);
    }
    Ok(Out::new()
        .q("power", power::switching_power(&p.loads, &p.env)?, "W")
        .qs("per_load", &per_load, "W"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ShortCircuitParams {
    k: f64,
    v_t: f64,
    env: PowerEnv,
    tau_in: f64,
    #[serde(default)]
    tau_out: Option<f64>,
    beta: f64,
}

fn run_short_circuit(v: &Value) -> Result<Out, CliError> {
    let p: ShortCircuitParams = parse(v)?;
    let e = power::short_circuit_energy(p.k, p.v_t, p.env.v_dd, p.tau_in)?;
    let w = power::short_circuit_power(p.k, p.v_t, &p.env, p.tau_in, p.tau_out.unwrap_or(0.0), p.beta)?;
    let mut out = Out::new().q("power", w, "W").q("energy_per_transition", e, "J");
    if p.tau_out.is_some() {
        out = out.note("tau_out does not enter the short-circuit model");
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VoltageScalingParams {
    v_from: f64,
    v_to: f64,
    #[serde(default)]
    v_t: f64,
}

fn run_vscale(v: &Value) -> Result<Out, CliError> {
    let p: VoltageScalingParams = parse(v)?;
    let r = power::voltage_scaling_factors(p.v_from, p.v_to, p.v_t)?;
    Ok(Out::new()
        .q("switching_reduction", r.switching, "")
        .q("short_circuit_reduction", r.short_circuit, ""))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LeakageParams {
    i0: f64,
    v_th: f64,
    lambda_d: f64,
    s_swing: f64,
    v_dd: f64,
}

fn run_leakage(v: &Value) -> Result<Out, CliError> {
    let p: LeakageParams = parse(v)?;
    let l = power::leakage_stack(p.i0, p.v_th, p.lambda_d, p.s_swing, p.v_dd)?;
    Ok(Out::new()
        .q("v_x", l.v_x, "V")
        .q("stack_ratio", l.stack_ratio, "")
        .q("i_stack", l.i_stack, "A")
        .q("i_single", l.i_single, "A"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AdiabaticParams {
    r_on: f64,
    c: f64,
    v_cmax: f64,
    t_ramp: f64,
    #[serde(default = "one_usize")]
    n_switching: usize,
}

fn run_adiabatic(v: &Value) -> Result<Out, CliError> {
    let p: AdiabaticParams = parse(v)?;
    Ok(Out::new().q(
        "energy",
        power::adiabatic_energy(p.r_on, p.c, p.v_cmax, p.t_ramp, p.n_switching)?,
        "J",
    ))
}

fn locality() -> f64 {
    0.8
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BusParams {
    n_modules: usize,
    m_buses: usize,
    #[serde(default = "locality")]
    locality: f64,
}

fn run_bus(v: &Value) -> Result<Out, CliError> {
    let p: BusParams = parse(v)?;
    let b = power::bus_split(p.n_modules, p.m_buses, p.locality)?;
    Ok(Out::new()
        .q("saving_percent", b.saving_percent, "%")
        .q("optimal_m_continuous", b.optimal_m_continuous, "")
        .count("optimal_m", b.optimal_m as i128)
        .q("optimal_saving_percent", b.optimal_saving_percent, "%"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GrayParams {
    n_bits: u32,
    #[serde(default)]
    sequence: Option<Vec<u64>>,
}

fn run_gray(v: &Value) -> Result<Out, CliError> {
    let p: GrayParams = parse(v)?;
    let g = power::gray_code(p.n_bits, p.sequence.as_deref())?;
    Ok(Out::new()
        .raw("codes", &g.codes)
        .count("binary_transitions", g.binary_transitions as i128)
        .count("gray_transitions", g.gray_transitions as i128)
        .count("saved", g.saved as i128))
}

// ---- memory ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CellParams {
    mode: CellMode,
    cell: SramCell,
}

fn run_cell(v: &Value) -> Result<Out, CliError> {
    let p: CellParams = parse(v)?;
    let s = memory::cell_node_voltage(&p.cell, p.mode)?;
    let regions: BTreeMap<&str, Region> = s.regions.iter().map(|(n, r)| (n.as_str(), *r)).collect();
    Ok(Out::new()
        .q("v_node", s.v, "V")
        .raw("regions", regions)
        .qs("candidate_roots", &s.candidates, "V")
        .notes(s.diagnostics))
}

fn run_sizing(v: &Value) -> Result<Out, CliError> {
    let s: WriteSizing = parse(v)?;
    let r = memory::access_sizing(&s)?;
    Ok(Out::new()
        .q("w_over_l", r.w_over_l, "")
        .q("current", r.current, "A")
        .q("access_vt", r.access_vt, "V")
        .raw("access_region", r.access_region)
        .raw("pullup_region", r.pullup_region))
}

fn run_load_resistor(v: &Value) -> Result<Out, CliError> {
    let c: LoadResistorCase = parse(v)?;
    Ok(Out::new().q("r_min", memory::load_resistor_bound(&c)?, "Ω"))
}

fn run_bitline(v: &Value) -> Result<Out, CliError> {
    let g: BitlineGeometry = parse(v)?;
    let b = memory::bitline_model(&g)?;
    Ok(Out::new()
        .q("c_diffusion", b.c_diffusion, "F")
        .q("c_wire", b.c_wire, "F")
        .q("c_total", b.c_total, "F")
        .q("r_total", b.r_total, "Ω")
        .q("elmore_distributed", b.elmore_distributed, "s"))
}

fn run_read_delay(v: &Value) -> Result<Out, CliError> {
    let p: ArrayPlan = parse(v)?;
    let d = memory::blocked_read_delay(&p)?;
    let mut out = Out::new()
        .q("word_coeff", d.word_coeff, "")
        .q("bit_coeff", d.bit_coeff, "")
        .raw("expression", &d.expression);
    match d.value {
        Some(x) => out = out.q("delay", x, "s"),
        None => out = out.note("numeric delay needs every R, C and gate delay"),
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DecoderParams {
    stages: Vec<DecoderStage>,
    #[serde(default)]
    compare: Option<Vec<DecoderStage>>,
}

fn run_decoder(v: &Value) -> Result<Out, CliError> {
    let p: DecoderParams = parse(v)?;
    let n = memory::decoder_cost(&p.stages)?;
    let mut out = Out::new().count("transistors", n as i128);
    if let Some(c) = &p.compare {
        let m = memory::decoder_cost(c)?;
        out = out
            .count("compare_transistors", m as i128)
            .count("saved", n as i128 - m as i128);
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AddressParams {
    map: AddressMap,
    address: Address,
}

fn run_address(v: &Value) -> Result<Out, CliError> {
    let p: AddressParams = parse(v)?;
    let d = memory::address_decode(&p.map, p.address.0)?;
    let mut out = Out::new().raw("out_of_range", d.out_of_range);
    for f in &d.fields {
        out = out.raw(
            &f.name,
            serde_json::json!({
                "value": f.value,
                "hex": format!("{:#x}", f.value),
                "msb": f.msb,
                "lsb": f.lsb,
                "width": f.width,
            }),
        );
    }
    Ok(out)
}

// ---- testability ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LfsrParams {
    poly: GfPolynomial,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    steps: usize,
}

fn run_lfsr_build(v: &Value) -> Result<Out, CliError> {
    let p: LfsrParams = parse(v)?;
    let l = testability::lfsr_build(p.poly)?;
    Ok(Out::new()
        .raw("poly", l.poly)
        .count("n", l.n as i128)
        .raw("taps", &l.taps)
        .raw("matrix", &l.matrix))
}

fn run_lfsr_run(v: &Value) -> Result<Out, CliError> {
    let p: LfsrParams = parse(v)?;
    let l = testability::lfsr_build(p.poly)?;
    let r = testability::lfsr_run(&l, p.seed.unwrap_or(1), p.steps)?;
    let mut out = Out::new().raw("states", &r.states);
    match r.period {
        Some(n) => out = out.count("period", n as i128),
        None => out = out.raw("period", Value::Null).note("period not searched for this degree"),
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SimParams {
    netlist: GateNetlist,
    vector: Bits,
}

fn run_simulate(v: &Value) -> Result<Out, CliError> {
    let p: SimParams = parse(v)?;
    let outs = testability::logic_simulate(&p.netlist, &p.vector.0)?;
    let map: BTreeMap<&str, u8> = p
        .netlist
        .outputs
        .iter()
        .map(String::as_str)
        .zip(outs.iter().map(|&b| b as u8))
        .collect();
    Ok(Out::new().raw("outputs", map))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FaultSimParams {
    netlist: GateNetlist,
    vectors: Vec<Bits>,
    faults: Vec<NamedFault>,
}

fn run_fault_sim(v: &Value) -> Result<Out, CliError> {
    let p: FaultSimParams = parse(v)?;
    let vectors: Vec<Vec<bool>> = p.vectors.into_iter().map(|b| b.0).collect();
    let det = testability::fault_simulate(&p.netlist, &vectors, &p.faults)?;
    let per_vector: Vec<Vec<String>> = det
        .iter()
        .map(|s| s.iter().map(ToString::to_string).collect())
        .collect();
    let covered: std::collections::BTreeSet<&NamedFault> = det.iter().flatten().collect();
    Ok(Out::new()
        .raw("vectors", vectors.iter().map(|v| bit_string(v)).collect::<Vec<_>>())
        .raw("detected", per_vector)
        .count("faults_detected", covered.len() as i128)
        .count("faults_total", p.faults.len() as i128))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtpgParams {
    netlist: GateNetlist,
    fault: NamedFault,
}

fn run_atpg(v: &Value) -> Result<Out, CliError> {
    let p: AtpgParams = parse(v)?;
    Ok(match testability::atpg_exhaustive(&p.netlist, &p.fault)? {
        Some(vec) => Out::new()
            .raw("testable", true)
            .raw("vector", bit_string(&vec))
            .raw("inputs", &p.netlist.inputs),
        None => Out::new().raw("testable", false).raw("vector", Value::Null),
    })
}

macro_rules! analysis {
    ($id:literal, $summary:literal, $params:literal, $ty:ty, $run:ident) => {
        Analysis {
            id: $id,
            summary: $summary,
            params: $params,
            check: check::<$ty>,
            run: $run,
        }
    };
}

pub(super) static ANALYSES: &[Analysis] = &[
    analysis!("threshold_voltage", "threshold with body effect", "device, v_sb=0", ThresholdParams, run_threshold),
    analysis!("bias_point", "square-law region and drain current", "device, v_gs, v_ds, v_sb=0", BiasParams, run_bias),
    analysis!("mos_capacitances", "gate and drain-junction capacitances", "device, region, v_reverse=0, constants?", CapParams, run_caps),
    analysis!("scale_factors", "device scaling factors", "mode (constant_field|constant_voltage|general), s, m?", ScalingMode, run_scale),
    analysis!("inverter_vtc", "static transfer curve levels and noise margins", "topology (cmos|depletion_load|resistive_load|resistor_pullup|pseudo_nmos), device params, v_dd", InverterConfig, run_vtc),
    analysis!("noise_margins", "margins between a driver and a receiver", "driver, receiver: logic levels or inverter configs", MarginParams, run_margins),
    analysis!("compound_gate", "complementary gate networks with sizing", "expr (pull-down function), reference={w_n,w_p?}, mu=2", GateParams, run_compound),
    analysis!("delay_bounds", "worst and best switching resistance times load", "expr, reference, mu=2, c_l?", GateParams, run_bounds),
    analysis!("common_euler_ordering", "input order shared by pull-up and pull-down trails", "expr, reference, mu=2", GateParams, run_euler),
    analysis!("charge_share_voltage", "dynamic node voltage after charge sharing", "c_out, c_exposed[], v_dd, v_internal=0", ChargeShareCase, run_charge),
    analysis!("evaluate_network", "whether a switch network conducts", "network, polarity, assignment{input: 0|1}", NetworkParams, run_network),
    Analysis {
        id: "elmore",
        summary: "Elmore delay of an RC tree",
        params: "nodes[{name, parent?, r, c}] or ladder{r[], c[]}, sink, scale=tau|ln2|k",
        check: check_elmore,
        run: run_elmore,
    },
    analysis!("wire_rc", "wire resistance and capacitance", "length, width, r_sheet, c_area, c_fringe_per_edge, fringe_edges=2", WireSpec, run_wire),
    analysis!("buffered_wire_delay", "delay against repeater count", "wire (spec or {r, c}), n_buffers (n, list or {from, to}), buffer, driver?, load_c=0, scale", BufferedParams, run_buffered),
    analysis!("inverter_chain_plan", "optimal taper and inverter count", "f, cd_over_cg=0", ChainParams, run_chain),
    analysis!("output_slew", "output transition time", "device?, c_load, v_dd, v_from_pct=0.9, v_to_pct=0.1, method (acc|diff|avg_current)", SlewCase, run_slew),
    analysis!("derive_template", "logical effort and parasitic delay per input", "gate (circuit or {expr, reference, mu}), reference?, name?", TemplateParams, run_template),
    analysis!("nand_nor_effort", "n-input NAND and NOR logical effort", "n, mu=2", NandNorParams, run_nand_nor),
    analysis!("path_delay", "logical effort path delay and sizing", "path{stages[{name, g, p, b=1, inverting=true}], c_in, c_load, output}, n_override?, p_inv=1", PathParams, run_path),
    analysis!("optimize_path", "best stage count with added inverters", "path, allow_added_inverters=true, polarity=any, rho=3.59, p_inv=1", OptimizeParams, run_optimize),
    analysis!("best_path", "fastest of several candidate paths", "candidates[path]", BestPathParams, run_best_path),
    analysis!("design_fork", "balanced two-branch fork", "c_in, load_long, load_short, m?, p_inv=1, rho=3.59", ForkSpec, run_fork),
    analysis!("check_timing", "register-to-register setup and hold", "edges[{launch, capture, t_cq_min, t_cq_max, t_setup, t_hold, d_min, d_max, skew?}], period, clock_arrivals{}", TimingParams, run_check_timing),
    analysis!("pipeline_metrics", "pipeline clock rate and latency", "stage_delays[], n_items=1, reg_overhead=0, total_comb_delay?, target_period?", PipelineParams, run_pipeline),
    analysis!("ripple_chain", "ripple carry/borrow arrival times", "xy_to_s, xy_to_bout, bin_to_s, bin_to_bout, n_blocks", RippleArcs, run_ripple),
    analysis!("ring_analyze", "ring oscillator period and duty cycle", "stages[{t_plh, t_phl}], probe, stimulus?", RingSpec, run_ring),
    analysis!("ring_design", "stage delays for a target period and duty", "n_stages, period, duty", RingDesignParams, run_ring_design),
    analysis!("latch_constraints", "two-phase latch pipeline inequalities", "deltas[], d_cq, d_dq, d_dc, d_cd, period?, duty=0.5, skew=0, repeating=false", LatchPipeline, run_latch),
    analysis!("dff_margins", "setup and hold of a six-NAND edge-triggered flip-flop", "delays[6]", DffParams, run_dff),
    analysis!("signal_probability", "output one-probability and activity", "expr, env{input: p}", ProbParams, run_prob),
    analysis!("switching_power", "dynamic switching power", "loads[{c, beta? | alpha_01?}], env{v_dd, f_clk, v_swing?}", SwitchingParams, run_switching),
    analysis!("short_circuit_power", "short-circuit power of a static gate", "k, v_t, env, tau_in, tau_out?, beta", ShortCircuitParams, run_short_circuit),
    analysis!("voltage_scaling_factors", "power reduction from lowering the supply", "v_from, v_to, v_t=0", VoltageScalingParams, run_vscale),
    analysis!("leakage_stack", "two-transistor stack leakage", "i0, v_th, lambda_d, s_swing, v_dd", LeakageParams, run_leakage),
    analysis!("adiabatic_energy", "ramped-supply charging energy", "r_on, c, v_cmax, t_ramp, n_switching=1", AdiabaticParams, run_adiabatic),
    analysis!("bus_split", "split-bus power saving", "n_modules, m_buses, locality=0.8", BusParams, run_bus),
    analysis!("gray_code", "binary against Gray-code bus transitions", "n_bits, sequence?", GrayParams, run_gray),
    analysis!("cell_node_voltage", "SRAM storage node voltage in read or write", "mode (read_disturb|write), cell{k_n, k_p, wl_access, wl_pulldown, wl_pullup, vt_n, vt_p, v_dd, v_bitline?, gamma=0, phi_f2=0.6}", CellParams, run_cell),
    analysis!("access_sizing", "W/L needed to flip a cell at a trip voltage", "k_n, k_p, wl_known, vt0_n, vt_p, gamma=0, phi_f2=0.6, v_dd, v_trip, v_bitline, solve_for=pullup|access", WriteSizing, run_sizing),
    analysis!("load_resistor_bound", "minimum load resistor of a resistive-load cell", "k_n, wl_access, wl_pulldown, vt_n, v_dd, v_q_max", LoadResistorCase, run_load_resistor),
    analysis!("bitline_model", "bitline R and C", "rows, cell_height, bl_width, access_width, c_d, c_pp, c_fr, fringe_edges=2, r_sq", BitlineGeometry, run_bitline),
    analysis!("blocked_read_delay", "array read delay coefficients", "rows, cols, decode_levels, mux_levels=0, r_word?, c_word?, r_bit?, c_bit?, d_gate?, d_mux?", ArrayPlan, run_read_delay),
    analysis!("decoder_cost", "static CMOS decoder transistor count", "stages[{kind, fan_in, count}], compare?", DecoderParams, run_decoder),
    analysis!("address_decode", "split an address into fields", "map{address_bits=32, fields[{name, count}] MSB first}, address", AddressParams, run_address),
    analysis!("lfsr_build", "modular LFSR taps and companion matrix", "poly (\"1 + x^2 + ...\" or exponent list)", LfsrParams, run_lfsr_build),
    analysis!("lfsr_run", "LFSR state sequence and period", "poly, seed=1, steps=0", LfsrParams, run_lfsr_run),
    analysis!("logic_simulate", "gate netlist outputs for one vector", "netlist{inputs, gates[{kind, inputs, output}], outputs}, vector", SimParams, run_simulate),
    analysis!("fault_simulate", "stuck-at faults detected per vector", "netlist, vectors[], faults[{net, stuck_at}]", FaultSimParams, run_fault_sim),
    analysis!("atpg_exhaustive", "smallest detecting vector for a stuck-at fault", "netlist, fault{net, stuck_at}", AtpgParams, run_atpg),
];

pub fn analysis_ids() -> Vec<&'static str> {
    ANALYSES.iter().map(|a| a.id).collect()
}

pub fn find(id: &str) -> Option<&'static Analysis> {
    ANALYSES.iter().find(|a| a.id == id)
}
