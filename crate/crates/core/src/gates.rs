//! Static CMOS compound gates built from series-parallel switch networks.
//!
//! Widths are in units of the reference nmos width; resistances in units of the
//! reference nmos resistance R, so a delay of 1.0 means R·C_L.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::device::Polarity;
use crate::error::{Error, Result};
use crate::expr::BoolExpr;

/// An input name, possibly complemented.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub name: String,
    pub negated: bool,
}

impl Literal {
    pub fn new(name: &str, negated: bool) -> Self {
        Literal {
            name: name.to_string(),
            negated,
        }
    }

    pub fn value(&self, assignment: &BTreeMap<String, bool>) -> Result<bool> {
        assignment
            .get(&self.name)
            .map(|v| v ^ self.negated)
            .ok_or_else(|| Error::input(format!("no value for input `{}`", self.name)))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name, if self.negated { "'" } else { "" })
    }
}

impl FromStr for Literal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (name, negated) = if let Some(n) = t.strip_suffix('\'') {
            (n, true)
        } else if let Some(n) = t.strip_prefix('!').or_else(|| t.strip_prefix('~')) {
            (n, true)
        } else {
            (t, false)
        };
        let ok = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::Parse(format!("`{s}` is not a literal")));
        }
        Ok(Literal::new(name, negated))
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Series-parallel switch tree. Series children are listed from the output side toward the rail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpNetwork {
    Switch { input: Literal, width: f64 },
    Series(Vec<SpNetwork>),
    Parallel(Vec<SpNetwork>),
}

impl SpNetwork {
    pub fn switch(input: &str, width: f64) -> Self {
        SpNetwork::Switch {
            input: input.parse().expect("valid literal"),
            width,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpNetwork::Switch { width, .. } => {
                if *width > 0.0 && width.is_finite() {
                    Ok(())
                } else {
                    Err(Error::input("switch widths must be positive"))
                }
            }
            SpNetwork::Series(xs) | SpNetwork::Parallel(xs) => {
                if xs.len() < 2 {
                    return Err(Error::input(
                        "series and parallel nodes need at least two children",
                    ));
                }
                xs.iter().try_for_each(|x| x.validate())
            }
        }
    }

    /// Longest chain of series switches.
    pub fn depth(&self) -> usize {
        match self {
            SpNetwork::Switch { .. } => 1,
            SpNetwork::Series(xs) => xs.iter().map(|x| x.depth()).sum(),
            SpNetwork::Parallel(xs) => xs.iter().map(|x| x.depth()).max().unwrap_or(0),
        }
    }

    pub fn switches(&self) -> Vec<(&Literal, f64)> {
        let mut out = Vec::new();
        self.visit(&mut |l, w| out.push((l, w)));
        out
    }

    fn visit<'a, F: FnMut(&'a Literal, f64)>(&'a self, f: &mut F) {
        match self {
            SpNetwork::Switch { input, width } => f(input, *width),
            SpNetwork::Series(xs) | SpNetwork::Parallel(xs) => {
                xs.iter().for_each(|x| x.visit(f))
            }
        }
    }

    /// Distinct input names in order of first appearance.
    pub fn inputs(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for (l, _) in self.switches() {
            if !out.contains(&l.name) {
                out.push(l.name.clone());
            }
        }
        out
    }

    pub fn total_width(&self) -> f64 {
        self.switches().iter().map(|(_, w)| w).sum()
    }

    /// Series/parallel dual with the same literals and widths.
    pub fn dual(&self) -> SpNetwork {
        match self {
            SpNetwork::Switch { .. } => self.clone(),
            SpNetwork::Series(xs) => SpNetwork::Parallel(xs.iter().map(|x| x.dual()).collect()),
            SpNetwork::Parallel(xs) => SpNetwork::Series(xs.iter().map(|x| x.dual()).collect()),
        }
    }

    /// Conduction with switch states from `on`.
    fn conducts_by<F: Fn(&Literal) -> bool + Copy>(&self, on: F) -> bool {
        match self {
            SpNetwork::Switch { input, .. } => on(input),
            SpNetwork::Series(xs) => xs.iter().all(|x| x.conducts_by(on)),
            SpNetwork::Parallel(xs) => xs.iter().any(|x| x.conducts_by(on)),
        }
    }

    /// Series/parallel reduction with each on-switch weighted by `r`; `None` when open.
    fn resistance_by<F: Fn(&Literal, f64) -> Option<f64> + Copy>(&self, r: F) -> Option<f64> {
        match self {
            SpNetwork::Switch { input, width } => r(input, *width),
            SpNetwork::Series(xs) => xs.iter().map(|x| x.resistance_by(r)).sum(),
            SpNetwork::Parallel(xs) => {
                let g: f64 = xs
                    .iter()
                    .filter_map(|x| x.resistance_by(r))
                    .map(|v| 1.0 / v)
                    .sum();
                (g > 0.0).then(|| 1.0 / g)
            }
        }
    }

    /// Every switch path between the two terminals.
    pub fn paths(&self) -> Vec<Vec<(Literal, f64)>> {
        match self {
            SpNetwork::Switch { input, width } => vec![vec![(input.clone(), *width)]],
            SpNetwork::Parallel(xs) => xs.iter().flat_map(|x| x.paths()).collect(),
            SpNetwork::Series(xs) => {
                let mut acc: Vec<Vec<(Literal, f64)>> = vec![Vec::new()];
                for x in xs {
                    let sub = x.paths();
                    acc = acc
                        .iter()
                        .flat_map(|p| {
                            sub.iter().map(move |s| {
                                let mut q = p.clone();
                                q.extend(s.iter().cloned());
                                q
                            })
                        })
                        .collect();
                }
                acc
            }
        }
    }

    fn from_expr(e: &BoolExpr, negate: bool) -> Result<SpNetwork> {
        match e {
            BoolExpr::Var(v) => Ok(SpNetwork::Switch {
                input: Literal::new(v, negate),
                width: 1.0,
            }),
            BoolExpr::Not(inner) => SpNetwork::from_expr(inner, !negate),
            BoolExpr::And(xs) | BoolExpr::Or(xs) => {
                let kids = xs
                    .iter()
                    .map(|x| SpNetwork::from_expr(x, negate))
                    .collect::<Result<Vec<_>>>()?;
                if kids.len() == 1 {
                    return Ok(kids.into_iter().next().unwrap());
                }
                // De Morgan swaps the operator under a complement
                let series = matches!(e, BoolExpr::And(_)) != negate;
                Ok(if series {
                    SpNetwork::Series(kids)
                } else {
                    SpNetwork::Parallel(kids)
                })
            }
            BoolExpr::Xor(_) => Err(Error::Unsupported(
                "XOR has no series-parallel switch realization".into(),
            )),
            BoolExpr::Const(_) => Err(Error::Unsupported(
                "constants cannot be realized as switches".into(),
            )),
        }
    }

    fn sized(&self, budget: f64, w_ref: f64) -> SpNetwork {
        match self {
            SpNetwork::Switch { input, .. } => SpNetwork::Switch {
                input: input.clone(),
                width: w_ref / budget,
            },
            SpNetwork::Parallel(xs) => {
                SpNetwork::Parallel(xs.iter().map(|x| x.sized(budget, w_ref)).collect())
            }
            SpNetwork::Series(xs) => {
                let total = self.depth() as f64;
                SpNetwork::Series(
                    xs.iter()
                        .map(|x| x.sized(budget * x.depth() as f64 / total, w_ref))
                        .collect(),
                )
            }
        }
    }
}

/// Whether `net` conducts: nmos switches are on when their literal is 1, pmos when it is 0.
pub fn evaluate_network(
    net: &SpNetwork,
    polarity: Polarity,
    assignment: &BTreeMap<String, bool>,
) -> Result<bool> {
    for name in net.inputs() {
        if !assignment.contains_key(&name) {
            return Err(Error::input(format!("no value for input `{name}`")));
        }
    }
    let on = |l: &Literal| (assignment[&l.name] ^ l.negated) == (polarity == Polarity::Nmos);
    Ok(net.conducts_by(on))
}

fn default_unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceInverter {
    #[serde(default = "default_unit")]
    pub w_n: f64,
    /// Defaults to μ·w_n, the width giving the same resistance as the nmos.
    #[serde(default)]
    pub w_p: Option<f64>,
}

impl Default for ReferenceInverter {
    fn default() -> Self {
        ReferenceInverter { w_n: 1.0, w_p: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompoundGate {
    /// Realizes the complement of the output.
    pub pdn: SpNetwork,
    pub pun: SpNetwork,
    pub reference: ReferenceInverter,
    pub mu: f64,
}

impl CompoundGate {
    pub fn w_p_ref(&self) -> f64 {
        self.reference.w_p.unwrap_or(self.mu * self.reference.w_n)
    }

    /// Total device width.
    pub fn area(&self) -> f64 {
        self.pdn.total_width() + self.pun.total_width()
    }

    /// Area over that of the reference inverter.
    pub fn area_ratio(&self) -> f64 {
        self.area() / (self.reference.w_n + self.w_p_ref())
    }

    pub fn inputs(&self) -> Vec<String> {
        self.pdn.inputs()
    }

    fn r_nmos(&self, w: f64) -> f64 {
        self.reference.w_n / w
    }

    fn r_pmos(&self, w: f64) -> f64 {
        self.mu * self.reference.w_n / w
    }

    /// Output value for the assignment, checking that exactly one network conducts.
    pub fn output(&self, assignment: &BTreeMap<String, bool>) -> Result<bool> {
        let down = evaluate_network(&self.pdn, Polarity::Nmos, assignment)?;
        let up = evaluate_network(&self.pun, Polarity::Pmos, assignment)?;
        if down == up {
            return Err(Error::Netlist(format!(
                "pull-up and pull-down {} for {assignment:?}",
                if up { "both conduct" } else { "are both off" }
            )));
        }
        Ok(up)
    }
}

/// Builds the pull-down network for `pdn_expr` (the complement of the output), its dual pull-up,
/// and sizes both so every conducting path matches the reference inverter's resistance.
pub fn compound_gate(
    pdn_expr: &BoolExpr,
    reference: ReferenceInverter,
    mu: f64,
) -> Result<CompoundGate> {
    if !(mu > 0.0 && reference.w_n > 0.0 && reference.w_p.is_none_or(|w| w > 0.0)) {
        return Err(Error::input("mu and reference widths must be positive"));
    }
    let shape = SpNetwork::from_expr(pdn_expr, false)?;
    let w_p = reference.w_p.unwrap_or(mu * reference.w_n);
    let pdn = shape.sized(1.0, reference.w_n);
    let pun = shape.dual().sized(1.0, w_p);
    Ok(CompoundGate {
        pdn,
        pun,
        reference,
        mu,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub worst: f64,
    pub best: f64,
    /// worst / best
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelayBounds {
    pub rise: Bounds,
    pub fall: Bounds,
}

const MAX_ENUM_INPUTS: usize = 20;

/// Worst and best RC delay of each transition, scaled by `c_l` (pass 1.0 for units of R·C_L).
pub fn delay_bounds(gate: &CompoundGate, c_l: f64) -> Result<DelayBounds> {
    let inputs = gate.inputs();
    if inputs.len() > MAX_ENUM_INPUTS {
        return Err(Error::Size {
            what: "gate inputs",
            got: inputs.len(),
            limit: MAX_ENUM_INPUTS,
        });
    }
    let bound = |net: &SpNetwork, pol: Polarity| -> Result<Bounds> {
        let r_of = |w: f64| match pol {
            Polarity::Nmos => gate.r_nmos(w),
            Polarity::Pmos => gate.r_pmos(w),
        };
        let worst = net
            .paths()
            .iter()
            .map(|p| p.iter().map(|(_, w)| r_of(*w)).sum::<f64>())
            .fold(0.0, f64::max);
        let mut best = f64::INFINITY;
        for bits in 0u64..(1u64 << inputs.len()) {
            let a: BTreeMap<String, bool> = inputs
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), bits >> i & 1 == 1))
                .collect();
            let on = |l: &Literal| (a[&l.name] ^ l.negated) == (pol == Polarity::Nmos);
            if let Some(r) = net.resistance_by(|l, w| on(l).then(|| r_of(w))) {
                best = best.min(r);
            }
        }
        if !best.is_finite() {
            return Err(Error::Netlist("network never conducts".into()));
        }
        Ok(Bounds {
            worst: worst * c_l,
            best: best * c_l,
            ratio: worst / best,
        })
    };
    Ok(DelayBounds {
        rise: bound(&gate.pun, Polarity::Pmos)?,
        fall: bound(&gate.pdn, Polarity::Nmos)?,
    })
}

/// Diffusion graph of a network: node 0 is the output side, node 1 the rail.
pub fn network_graph(net: &SpNetwork) -> (usize, Vec<(usize, usize, Literal)>) {
    fn build(
        n: &SpNetwork,
        a: usize,
        b: usize,
        next: &mut usize,
        edges: &mut Vec<(usize, usize, Literal)>,
    ) {
        match n {
            SpNetwork::Switch { input, .. } => edges.push((a, b, input.clone())),
            SpNetwork::Parallel(xs) => xs.iter().for_each(|x| build(x, a, b, next, edges)),
            SpNetwork::Series(xs) => {
                let mut from = a;
                for (i, x) in xs.iter().enumerate() {
                    let to = if i + 1 == xs.len() {
                        b
                    } else {
                        *next += 1;
                        *next - 1
                    };
                    build(x, from, to, next, edges);
                    from = to;
                }
            }
        }
    }
    let mut next = 2;
    let mut edges = Vec::new();
    build(net, 0, 1, &mut next, &mut edges);
    (next, edges)
}

const MAX_EULER_INPUTS: usize = 12;
const MAX_ARRANGEMENTS: usize = 720;

/// All series-child orderings of a network, up to `cap` of them.
pub fn arrangements(net: &SpNetwork, cap: usize) -> Vec<SpNetwork> {
    match net {
        SpNetwork::Switch { .. } => vec![net.clone()],
        SpNetwork::Parallel(xs) => {
            let mut acc: Vec<Vec<SpNetwork>> = vec![Vec::new()];
            for x in xs {
                let sub = arrangements(x, cap);
                acc = product(&acc, &sub, cap);
            }
            acc.into_iter().map(SpNetwork::Parallel).collect()
        }
        SpNetwork::Series(xs) => {
            let mut out = Vec::new();
            for perm in permutations(xs.len()) {
                let mut acc: Vec<Vec<SpNetwork>> = vec![Vec::new()];
                for &i in &perm {
                    let sub = arrangements(&xs[i], cap);
                    acc = product(&acc, &sub, cap);
                }
                out.extend(acc.into_iter().map(SpNetwork::Series));
                if out.len() >= cap {
                    out.truncate(cap);
                    break;
                }
            }
            out
        }
    }
}

fn product(acc: &[Vec<SpNetwork>], sub: &[SpNetwork], cap: usize) -> Vec<Vec<SpNetwork>> {
    let mut out = Vec::new();
    'outer: for p in acc {
        for s in sub {
            let mut q = p.clone();
            q.push(s.clone());
            out.push(q);
            if out.len() >= cap {
                break 'outer;
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

struct Graph {
    nodes: usize,
    edges: Vec<(usize, usize, Literal)>,
}

impl Graph {
    fn of(net: &SpNetwork) -> Graph {
        let (nodes, edges) = network_graph(net);
        Graph { nodes, edges }
    }

    /// Unused edges at `u`, paired with their far end.
    fn incident(&self, u: usize, used: u64) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(i, _)| used >> i & 1 == 0)
            .filter_map(move |(i, (a, b, _))| {
                if *a == u {
                    Some((i, *b))
                } else if *b == u {
                    Some((i, *a))
                } else {
                    None
                }
            })
    }
}

fn joint_trail(p: &Graph, q: &Graph) -> Option<Vec<Literal>> {
    fn dfs(
        p: &Graph,
        q: &Graph,
        up: usize,
        uq: usize,
        mp: u64,
        mq: u64,
        trail: &mut Vec<Literal>,
        failed: &mut HashSet<(usize, usize, u64, u64)>,
    ) -> bool {
        if trail.len() == p.edges.len() {
            return true;
        }
        if failed.contains(&(up, uq, mp, mq)) {
            return false;
        }
        let mut moves: Vec<(Literal, usize, usize, usize, usize)> = Vec::new();
        for (ei, vp) in p.incident(up, mp) {
            for (ej, vq) in q.incident(uq, mq) {
                if p.edges[ei].2 == q.edges[ej].2 {
                    moves.push((p.edges[ei].2.clone(), ei, vp, ej, vq));
                }
            }
        }
        moves.sort_by(|a, b| (a.0.to_string(), a.1, a.3).cmp(&(b.0.to_string(), b.1, b.3)));
        for (lit, ei, vp, ej, vq) in moves {
            trail.push(lit);
            if dfs(p, q, vp, vq, mp | 1 << ei, mq | 1 << ej, trail, failed) {
                return true;
            }
            trail.pop();
        }
        failed.insert((up, uq, mp, mq));
        false
    }
    if p.edges.len() != q.edges.len() || p.edges.len() > 64 {
        return None;
    }
    let mut failed = HashSet::new();
    for sp in 0..p.nodes {
        for sq in 0..q.nodes {
            let mut trail = Vec::new();
            if dfs(p, q, sp, sq, 0, 0, &mut trail, &mut failed) {
                return Some(trail);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerOrdering {
    /// Gate order along the shared diffusion strip.
    pub order: Vec<Literal>,
    /// Network arrangements realizing the order.
    pub pdn: SpNetwork,
    pub pun: SpNetwork,
}

fn check_euler_size(gate: &CompoundGate) -> Result<()> {
    let n = gate.inputs().len();
    if n > MAX_EULER_INPUTS {
        return Err(Error::Size {
            what: "gate inputs",
            got: n,
            limit: MAX_EULER_INPUTS,
        });
    }
    Ok(())
}

/// An input ordering that is an Euler trail of both networks for some series arrangement.
pub fn common_euler_ordering(gate: &CompoundGate) -> Result<Option<EulerOrdering>> {
    check_euler_size(gate)?;
    let pdns = arrangements(&gate.pdn, MAX_ARRANGEMENTS);
    let puns = arrangements(&gate.pun, MAX_ARRANGEMENTS);
    let pun_graphs: Vec<Graph> = puns.iter().map(Graph::of).collect();
    for pdn in &pdns {
        let g = Graph::of(pdn);
        for (pun, h) in puns.iter().zip(&pun_graphs) {
            if let Some(order) = joint_trail(&g, h) {
                return Ok(Some(EulerOrdering {
                    order,
                    pdn: pdn.clone(),
                    pun: pun.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// Whether `order` walks every edge of `net`'s graph exactly once, consecutively.
pub fn is_euler_trail(net: &SpNetwork, order: &[Literal]) -> bool {
    let g = Graph::of(net);
    if order.len() != g.edges.len() {
        return false;
    }
    fn walk(g: &Graph, u: usize, used: u64, rest: &[Literal]) -> bool {
        let Some((first, tail)) = rest.split_first() else {
            return true;
        };
        g.incident(u, used)
            .filter(|(i, _)| g.edges[*i].2 == *first)
            .collect::<Vec<_>>()
            .into_iter()
            .any(|(i, v)| walk(g, v, used | 1 << i, tail))
    }
    (0..g.nodes).any(|s| walk(&g, s, 0, order))
}

/// Whether some arrangement of the gate's networks has `order` as a common Euler trail.
pub fn ordering_is_valid(gate: &CompoundGate, order: &[Literal]) -> Result<bool> {
    check_euler_size(gate)?;
    let ok = |net: &SpNetwork| {
        arrangements(net, MAX_ARRANGEMENTS)
            .iter()
            .any(|a| is_euler_trail(a, order))
    };
    Ok(ok(&gate.pdn) && ok(&gate.pun))
}

fn default_zero() -> f64 {
    0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargeShareCase {
    pub c_out: f64,
    #[serde(default)]
    pub c_exposed: Vec<f64>,
    pub v_dd: f64,
    /// Starting voltage of the exposed nodes.
    #[serde(default = "default_zero")]
    pub v_internal: f64,
}

/// Final voltage after the precharged output shares charge with the exposed nodes.
pub fn charge_share_voltage(case: &ChargeShareCase) -> Result<f64> {
    if !(case.c_out > 0.0) {
        return Err(Error::input("c_out must be positive"));
    }
    if case.c_exposed.iter().any(|c| !(*c >= 0.0)) {
        return Err(Error::input("exposed capacitances must be non-negative"));
    }
    let shared: f64 = case.c_exposed.iter().sum();
    Ok((case.c_out * case.v_dd + shared * case.v_internal) / (case.c_out + shared))
}

/// Distinct literals used by a network.
pub fn literals(net: &SpNetwork) -> BTreeSet<Literal> {
    net.switches().into_iter().map(|(l, _)| l.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gate(expr: &str, mu: f64) -> CompoundGate {
        compound_gate(&BoolExpr::parse(expr).unwrap(), ReferenceInverter::default(), mu).unwrap()
    }

    fn widths(net: &SpNetwork) -> BTreeMap<String, f64> {
        net.switches()
            .into_iter()
            .map(|(l, w)| (l.to_string(), w))
            .collect()
    }

    #[test]
    fn nine_input_gate_sizing() {
        let g = gate("A B C + H D E + F G", 4.0);
        let n = widths(&g.pdn);
        for x in ["A", "B", "C", "D", "E", "H"] {
            assert!((n[x] - 3.0).abs() < 1e-12);
        }
        assert!((n["F"] - 2.0).abs() < 1e-12 && (n["G"] - 2.0).abs() < 1e-12);
        assert!(widths(&g.pun).values().all(|w| (w - 12.0).abs() < 1e-12));
        assert!((g.area_ratio() - 118.0 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn single_literal_is_an_inverter() {
        let g = gate("A", 2.0);
        assert_eq!(g.pdn, SpNetwork::switch("A", 1.0));
        assert_eq!(g.pun, SpNetwork::switch("A", 2.0));
    }

    #[test]
    fn bounds_for_two_branch_gate() {
        let b = delay_bounds(&gate("A B + C D E", 2.0), 1.0).unwrap();
        assert!((b.rise.ratio - 12.0 / 5.0).abs() < 1e-12);
        assert!((b.fall.ratio - 2.0).abs() < 1e-12);
        let b = delay_bounds(&gate("A B + C E + D", 2.0), 1.0).unwrap();
        assert!((b.rise.worst - 1.0).abs() < 1e-12 && (b.fall.worst - 1.0).abs() < 1e-12);
        assert!((b.rise.best - 2.0 / 3.0).abs() < 1e-12);
        assert!((b.fall.best - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn xor_is_unsupported() {
        let e = BoolExpr::parse("A ^ B").unwrap();
        assert!(matches!(
            compound_gate(&e, ReferenceInverter::default(), 2.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn complemented_subexpression_is_pushed_to_inputs() {
        let g = gate("(A + B)'", 2.0);
        assert_eq!(
            g.pdn,
            SpNetwork::Series(vec![SpNetwork::switch("A'", 2.0), SpNetwork::switch("B'", 2.0)])
        );
    }

    #[test]
    fn euler_ordering_for_five_input_gate() {
        let g = gate("A(B' + C) + D + E'", 2.0);
        let found = common_euler_ordering(&g).unwrap().unwrap();
        assert!(is_euler_trail(&found.pdn, &found.order));
        assert!(is_euler_trail(&found.pun, &found.order));
        let book: Vec<Literal> = ["E'", "D", "A", "B'", "C"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert!(ordering_is_valid(&g, &book).unwrap());
    }

    #[test]
    fn charge_sharing() {
        let c = ChargeShareCase {
            c_out: 6.84,
            c_exposed: vec![12.0, 5.78],
            v_dd: 1.0,
            v_internal: 0.0,
        };
        assert!((charge_share_voltage(&c).unwrap() - 0.2778).abs() < 1e-3);
        let none = ChargeShareCase {
            c_exposed: vec![],
            ..c
        };
        assert_eq!(charge_share_voltage(&none).unwrap(), 1.0);
    }

    #[test]
    fn network_evaluation() {
        let s = SpNetwork::Series(vec![SpNetwork::switch("a", 1.0), SpNetwork::switch("b", 1.0)]);
        let all = |v: bool| -> BTreeMap<String, bool> {
            [("a".to_string(), v), ("b".to_string(), v)].into()
        };
        assert!(evaluate_network(&s, Polarity::Nmos, &all(true)).unwrap());
        assert!(!evaluate_network(&s.dual(), Polarity::Nmos, &all(false)).unwrap());
        let partial: BTreeMap<String, bool> = [("a".to_string(), true)].into();
        assert!(evaluate_network(&s, Polarity::Nmos, &partial).is_err());
    }
}
