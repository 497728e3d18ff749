//! Signal probability, switching and short-circuit power, leakage stacks and low-power coding.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::BoolExpr;

pub const MAX_PROB_INPUTS: usize = 24;

/// Per-input signal probabilities, inputs assumed independent.
pub type ProbEnv = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignalProbability {
    pub p: f64,
    /// Transitions per cycle, 2p(1 − p).
    pub beta: f64,
}

/// Exact output probability by summing the weight of every satisfying assignment.
pub fn signal_probability(expr: &BoolExpr, env: &ProbEnv) -> Result<SignalProbability> {
    let inputs = expr.inputs();
    if inputs.len() > MAX_PROB_INPUTS {
        return Err(Error::Size {
            what: "expression inputs",
            got: inputs.len(),
            limit: MAX_PROB_INPUTS,
        });
    }
    let probs = inputs
        .iter()
        .map(|n| match env.get(n) {
            Some(&p) if (0.0..=1.0).contains(&p) => Ok(p),
            Some(_) => Err(Error::input(format!("probability of `{n}` is outside [0, 1]"))),
            None => Err(Error::input(format!("no probability for input `{n}`"))),
        })
        .collect::<Result<Vec<f64>>>()?;
    let compiled = expr.compile(&inputs)?;
    let mut p = 0.0;
    for bits in 0u64..(1u64 << inputs.len()) {
        if compiled.eval(bits) {
            p += probs
                .iter()
                .enumerate()
                .map(|(i, q)| if bits >> i & 1 == 1 { *q } else { 1.0 - q })
                .product::<f64>();
        }
    }
    let p = p.clamp(0.0, 1.0);
    Ok(SignalProbability {
        p,
        beta: 2.0 * p * (1.0 - p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerEnv {
    pub v_dd: f64,
    pub f_clk: f64,
    /// Defaults to `v_dd`.
    #[serde(default)]
    pub v_swing: Option<f64>,
}

impl PowerEnv {
    pub fn new(v_dd: f64, f_clk: f64) -> Self {
        PowerEnv {
            v_dd,
            f_clk,
            v_swing: None,
        }
    }

    fn swing(&self) -> f64 {
        self.v_swing.unwrap_or(self.v_dd)
    }

    fn validate(&self) -> Result<()> {
        let s = self.swing();
        if !(self.v_dd > 0.0 && self.f_clk > 0.0 && s > 0.0 && s <= self.v_dd) {
            return Err(Error::input(
                "need v_dd > 0, f_clk > 0 and 0 < v_swing ≤ v_dd",
            ));
        }
        Ok(())
    }
}

/// A switched capacitance. Activity is `beta` transitions per cycle, or `alpha_01`
/// rising transitions per cycle (counted twice).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadPoint {
    pub c: f64,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub alpha_01: Option<f64>,
}

impl LoadPoint {
    pub fn new(c: f64, beta: f64) -> Self {
        LoadPoint {
            c,
            beta: Some(beta),
            alpha_01: None,
        }
    }

    pub fn rising(c: f64, alpha_01: f64) -> Self {
        LoadPoint {
            c,
            beta: None,
            alpha_01: Some(alpha_01),
        }
    }

    pub fn activity(&self) -> Result<f64> {
        let b = match (self.beta, self.alpha_01) {
            (Some(b), None) => b,
            (None, Some(a)) => 2.0 * a,
            _ => return Err(Error::input("give exactly one of beta or alpha_01")),
        };
        if !(self.c >= 0.0 && (0.0..=2.0).contains(&b)) {
            return Err(Error::input("need c ≥ 0 and 0 ≤ beta ≤ 2"));
        }
        Ok(b)
    }
}

/// ½·V_swing·V_DD·f·Σ C·β.
pub fn switching_power(loads: &[LoadPoint], env: &PowerEnv) -> Result<f64> {
    env.validate()?;
    let mut sum = 0.0;
    for l in loads {
        sum += l.c * l.activity()?;
    }
    Ok(0.5 * env.swing() * env.v_dd * env.f_clk * sum)
}

/// Energy per transition of a static gate whose input ramps rail to rail in `tau_in`,
/// with both devices saturated while they overlap: (k/24)(V_DD − 2V_t)³·τ_in.
pub fn short_circuit_energy(k: f64, v_t: f64, v_dd: f64, tau_in: f64) -> Result<f64> {
    if !(k > 0.0 && v_t >= 0.0 && v_dd > 0.0 && tau_in >= 0.0) {
        return Err(Error::input("need k > 0, v_t ≥ 0, v_dd > 0 and tau_in ≥ 0"));
    }
    let ov = v_dd - 2.0 * v_t;
    if ov <= 0.0 {
        return Ok(0.0);
    }
    Ok(k / 24.0 * ov.powi(3) * tau_in)
}

/// Short-circuit power at `beta` transitions per cycle. The output transition time does not
/// enter this model; it is accepted so cases can carry it.
pub fn short_circuit_power(
    k: f64,
    v_t: f64,
    env: &PowerEnv,
    tau_in: f64,
    _tau_out: f64,
    beta: f64,
) -> Result<f64> {
    env.validate()?;
    if !(0.0..=2.0).contains(&beta) {
        return Err(Error::input("beta must lie in [0, 2]"));
    }
    Ok(short_circuit_energy(k, v_t, env.v_dd, tau_in)? * beta * env.f_clk)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingReduction {
    pub switching: f64,
    /// Infinite when the lower supply no longer exceeds 2·V_t.
    pub short_circuit: f64,
}

/// Power reduction factors when the supply drops from `v_from` to `v_to`.
/// Short-circuit power goes as V·(V − 2V_t)².
pub fn voltage_scaling_factors(v_from: f64, v_to: f64, v_t: f64) -> Result<ScalingReduction> {
    if !(v_from > 0.0 && v_to > 0.0 && v_t >= 0.0) {
        return Err(Error::input("supplies must be positive and v_t non-negative"));
    }
    if v_to <= v_t {
        return Err(Error::Domain("v_to must exceed v_t for the gate to operate".into()));
    }
    let sc = |v: f64| v * (v - 2.0 * v_t).max(0.0).powi(2);
    let (a, b) = (sc(v_from), sc(v_to));
    Ok(ScalingReduction {
        switching: (v_from / v_to).powi(2),
        short_circuit: if b == 0.0 { f64::INFINITY } else { a / b },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeakageStack {
    /// Intermediate node voltage of two stacked off devices.
    pub v_x: f64,
    /// Two-stack leakage over single-device leakage.
    pub stack_ratio: f64,
    pub i_stack: f64,
    pub i_single: f64,
}

/// Subthreshold leakage of two stacked off nmos against one, with DIBL coefficient `lambda_d`
/// and swing `s_swing` (V/decade). `v_th` only sets the absolute currents.
pub fn leakage_stack(i0: f64, v_th: f64, lambda_d: f64, s_swing: f64, v_dd: f64) -> Result<LeakageStack> {
    if !(i0 > 0.0 && lambda_d >= 0.0 && s_swing > 0.0 && v_dd > 0.0) {
        return Err(Error::input("need i0, s_swing, v_dd > 0 and lambda_d ≥ 0"));
    }
    let v_x = (1.0 + lambda_d) / (1.0 + 2.0 * lambda_d) * v_dd;
    let i_stack = i0 * 10f64.powf((-v_th.abs() + lambda_d * (v_dd - v_x)) / s_swing);
    let i_single = i0 * 10f64.powf((-v_th.abs() + lambda_d * v_dd) / s_swing);
    Ok(LeakageStack {
        v_x,
        stack_ratio: 10f64.powf(-lambda_d * v_x / s_swing),
        i_stack,
        i_single,
    })
}

/// Energy of charging through `r_on` with a supply ramp of length `t_ramp`, per switching output.
pub fn adiabatic_energy(r_on: f64, c: f64, v_cmax: f64, t_ramp: f64, n_switching: usize) -> Result<f64> {
    if !(t_ramp > 0.0 && r_on >= 0.0 && c >= 0.0) {
        return Err(Error::input("need t_ramp > 0 and non-negative r_on, c"));
    }
    Ok(n_switching as f64 * (r_on * c / t_ramp) * c * v_cmax * v_cmax)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BusSplit {
    pub saving_percent: f64,
    pub optimal_m_continuous: f64,
    pub optimal_m: usize,
    pub optimal_saving_percent: f64,
}

/// Percent saving from splitting a bus shared by `n` modules into `m` segments when a
/// fraction `locality` of transfers stays within one segment.
pub fn bus_saving_percent(n: usize, m: usize, locality: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    (1.0 - (locality + 2.0 * (1.0 - locality)) / m - (1.0 - locality) * m / n) * 100.0
}

pub fn bus_split(n_modules: usize, m_buses: usize, locality: f64) -> Result<BusSplit> {
    if !(1 <= m_buses && m_buses <= n_modules) {
        return Err(Error::input("need 1 ≤ m ≤ n"));
    }
    if !(0.0..=1.0).contains(&locality) {
        return Err(Error::input("locality must lie in [0, 1]"));
    }
    let n = n_modules as f64;
    let m_cont = if locality >= 1.0 {
        n
    } else {
        (n * (2.0 - locality) / (1.0 - locality)).sqrt()
    };
    let lo = (m_cont.floor() as usize).clamp(1, n_modules);
    let hi = (m_cont.ceil() as usize).clamp(1, n_modules);
    let (s_lo, s_hi) = (
        bus_saving_percent(n_modules, lo, locality),
        bus_saving_percent(n_modules, hi, locality),
    );
    let (optimal_m, optimal_saving_percent) = if s_hi > s_lo { (hi, s_hi) } else { (lo, s_lo) };
    Ok(BusSplit {
        saving_percent: bus_saving_percent(n_modules, m_buses, locality),
        optimal_m_continuous: m_cont,
        optimal_m,
        optimal_saving_percent,
    })
}

pub fn gray(b: u64) -> u64 {
    b ^ (b >> 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrayReport {
    pub codes: Vec<u64>,
    pub binary_transitions: u64,
    pub gray_transitions: u64,
    pub saved: i64,
}

const MAX_GRAY_COUNT_BITS: u32 = 20;

/// Bit transitions of a value sequence in binary and in Gray code; the full up-count by default.
pub fn gray_code(n_bits: u32, sequence: Option<&[u64]>) -> Result<GrayReport> {
    if !(1..=63).contains(&n_bits) {
        return Err(Error::input("n_bits must lie in 1..=63"));
    }
    let values: Vec<u64> = match sequence {
        Some(s) => {
            if let Some(v) = s.iter().find(|v| **v >> n_bits != 0) {
                return Err(Error::input(format!("value {v} does not fit in {n_bits} bits")));
            }
            s.to_vec()
        }
        None => {
            if n_bits > MAX_GRAY_COUNT_BITS {
                return Err(Error::Size {
                    what: "counting sequence bits",
                    got: n_bits as usize,
                    limit: MAX_GRAY_COUNT_BITS as usize,
                });
            }
            (0..1u64 << n_bits).collect()
        }
    };
    let count = |xs: &[u64]| -> u64 {
        xs.windows(2)
            .map(|w| (w[0] ^ w[1]).count_ones() as u64)
            .sum()
    };
    let codes: Vec<u64> = values.iter().map(|v| gray(*v)).collect();
    let b = count(&values);
    let g = count(&codes);
    Ok(GrayReport {
        codes,
        binary_transitions: b,
        gray_transitions: g,
        saved: b as i64 - g as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, f64)]) -> ProbEnv {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn probability_examples() {
        let e = BoolExpr::parse("A B + C").unwrap();
        let r = signal_probability(&e, &env(&[("A", 0.2), ("B", 0.2), ("C", 2.0 / 3.0)])).unwrap();
        assert!((r.p - 0.68).abs() < 1e-3);
        assert!((r.beta - 0.4352).abs() < 1e-3);
        let t = signal_probability(&BoolExpr::parse("1").unwrap(), &ProbEnv::new()).unwrap();
        assert_eq!((t.p, t.beta), (1.0, 0.0));
        assert!(signal_probability(&e, &env(&[("A", 0.5)])).is_err());
    }

    #[test]
    fn switching_examples() {
        let p = switching_power(&[LoadPoint::new(100e-15, 0.4352)], &PowerEnv::new(1.2, 500e6)).unwrap();
        assert!((p - 15.67e-6).abs() < 0.01e-6);
        let chip = switching_power(&[LoadPoint::new(150e-12 * 70.0, 0.2)], &PowerEnv::new(0.9, 450e6))
            .unwrap();
        assert!((chip - 0.3827).abs() < 1e-3);
        let rising = [0.25, 0.25, 3.0 / 16.0].map(|a| LoadPoint::rising(50e-15, a));
        let p = switching_power(&rising, &PowerEnv::new(1.0, 1e9)).unwrap();
        assert!((p - 34.375e-6).abs() < 1e-12);
    }

    #[test]
    fn short_circuit() {
        let p = short_circuit_power(200e-6, 0.3, &PowerEnv::new(1.2, 500e6), 100e-12, 250e-12, 0.3163)
            .unwrap();
        assert!((p - 32.5e-9).abs() < 0.2 * 32.5e-9);
        assert_eq!(short_circuit_energy(1e-4, 0.6, 1.2, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn supply_scaling() {
        let r = voltage_scaling_factors(1.0, 0.5, 0.2).unwrap();
        assert!((r.switching - 4.0).abs() < 1e-12);
        assert!((r.short_circuit - 72.0).abs() < 1e-9);
        let same = voltage_scaling_factors(0.8, 0.8, 0.1).unwrap();
        assert_eq!((same.switching, same.short_circuit), (1.0, 1.0));
    }

    #[test]
    fn leakage_and_adiabatic() {
        let l = leakage_stack(1e-9, 0.3, 0.1, 0.1, 1.0).unwrap();
        assert!((l.v_x - 11.0 / 12.0).abs() < 1e-12);
        assert!((l.stack_ratio - 10f64.powf(-11.0 / 12.0)).abs() < 1e-12);
        assert!((l.i_stack / l.i_single - l.stack_ratio).abs() < 1e-12);
        let e = adiabatic_energy(3.3e3, 200e-15, 2.0, 100e-9, 1).unwrap();
        assert!((e - 5.28e-15).abs() < 1e-20);
    }

    #[test]
    fn bus_and_gray() {
        let b = bus_split(24, 4, 0.8).unwrap();
        assert!((b.optimal_m_continuous - 12.0).abs() < 1e-12);
        assert_eq!(b.optimal_m, 12);
        let g = gray_code(3, None).unwrap();
        assert_eq!((g.binary_transitions, g.gray_transitions, g.saved), (11, 7, 4));
        assert_eq!(gray(0), 0);
        assert!(gray_code(3, Some(&[1, 9])).is_err());
    }
}
