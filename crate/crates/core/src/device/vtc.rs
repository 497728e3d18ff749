//! Static inverter transfer curves for the common load styles.

use serde::{Deserialize, Serialize};

use super::{square_law, Region};
use crate::error::{Error, Result};
use crate::numeric::bisect;

const GRID: usize = 2000;
const V_TOL: f64 = 1e-13;

/// Where a transistor gate is tied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateTie {
    Input,
    Output,
    Vdd,
    Ground,
}

/// One side of an inverter. `beta` is k'·W/L; `vt` is signed (negative for enhancement pmos
/// and for depletion nmos).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Element {
    Nmos {
        beta: f64,
        vt: f64,
        gate: GateTie,
        #[serde(default)]
        lambda: f64,
    },
    Pmos {
        beta: f64,
        vt: f64,
        gate: GateTie,
        #[serde(default)]
        lambda: f64,
    },
    Resistor {
        r: f64,
    },
}

/// Pull-up element between V_DD and the output, pull-down between the output and ground.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverterCircuit {
    pub pull_up: Element,
    pub pull_down: Element,
    pub v_dd: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransistorParams {
    pub k_prime: f64,
    #[serde(default = "one")]
    pub w_over_l: f64,
    /// Signed threshold.
    pub vt: f64,
    #[serde(default)]
    pub lambda: f64,
}

impl TransistorParams {
    pub fn new(k_prime: f64, w_over_l: f64, vt: f64) -> Self {
        TransistorParams {
            k_prime,
            w_over_l,
            vt,
            lambda: 0.0,
        }
    }

    fn beta(&self) -> f64 {
        self.k_prime * self.w_over_l
    }

    fn nmos(&self, gate: GateTie) -> Element {
        Element::Nmos {
            beta: self.beta(),
            vt: self.vt,
            gate,
            lambda: self.lambda,
        }
    }

    fn pmos(&self, gate: GateTie) -> Element {
        Element::Pmos {
            beta: self.beta(),
            vt: self.vt,
            gate,
            lambda: self.lambda,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "topology", rename_all = "snake_case", deny_unknown_fields)]
pub enum InverterConfig {
    Cmos {
        nmos: TransistorParams,
        pmos: TransistorParams,
        v_dd: f64,
    },
    /// Enhancement driver with a depletion nmos load whose gate is tied to the output.
    DepletionLoad {
        driver: TransistorParams,
        load: TransistorParams,
        v_dd: f64,
    },
    /// pmos driver pulling up against a resistor to ground.
    ResistiveLoad {
        pmos: TransistorParams,
        r: f64,
        v_dd: f64,
    },
    /// nmos driver pulling down against a resistor to V_DD.
    ResistorPullup {
        nmos: TransistorParams,
        r: f64,
        v_dd: f64,
    },
    /// nmos driver with a grounded-gate pmos load.
    PseudoNmos {
        nmos: TransistorParams,
        pmos: TransistorParams,
        v_dd: f64,
    },
}

impl InverterConfig {
    pub fn circuit(&self) -> InverterCircuit {
        match *self {
            InverterConfig::Cmos { nmos, pmos, v_dd } => InverterCircuit {
                pull_up: pmos.pmos(GateTie::Input),
                pull_down: nmos.nmos(GateTie::Input),
                v_dd,
            },
            InverterConfig::DepletionLoad { driver, load, v_dd } => InverterCircuit {
                pull_up: load.nmos(GateTie::Output),
                pull_down: driver.nmos(GateTie::Input),
                v_dd,
            },
            InverterConfig::ResistiveLoad { pmos, r, v_dd } => InverterCircuit {
                pull_up: pmos.pmos(GateTie::Input),
                pull_down: Element::Resistor { r },
                v_dd,
            },
            InverterConfig::ResistorPullup { nmos, r, v_dd } => InverterCircuit {
                pull_up: Element::Resistor { r },
                pull_down: nmos.nmos(GateTie::Input),
                v_dd,
            },
            InverterConfig::PseudoNmos { nmos, pmos, v_dd } => InverterCircuit {
                pull_up: pmos.pmos(GateTie::Ground),
                pull_down: nmos.nmos(GateTie::Input),
                v_dd,
            },
        }
    }
}

/// Voltage as c0 + c_in·V_in + c_out·V_out.
#[derive(Clone, Copy)]
struct Affine(f64, f64, f64);

impl Affine {
    fn at(self, vin: f64, vout: f64) -> f64 {
        self.0 + self.1 * vin + self.2 * vout
    }
    fn minus(self, o: Affine) -> Affine {
        Affine(self.0 - o.0, self.1 - o.1, self.2 - o.2)
    }
}

/// Current from `hi` to `lo` and its partials with respect to V_in and V_out.
fn element_current(
    e: &Element,
    hi: Affine,
    lo: Affine,
    v_dd: f64,
    vin: f64,
    vout: f64,
) -> (f64, f64, f64, Option<Region>) {
    let tie = |g: GateTie| match g {
        GateTie::Input => Affine(0.0, 1.0, 0.0),
        GateTie::Output => Affine(0.0, 0.0, 1.0),
        GateTie::Vdd => Affine(v_dd, 0.0, 0.0),
        GateTie::Ground => Affine(0.0, 0.0, 0.0),
    };
    let ds = hi.minus(lo);
    match *e {
        Element::Resistor { r } => {
            let v = ds.at(vin, vout);
            (v / r, ds.1 / r, ds.2 / r, None)
        }
        Element::Nmos {
            beta,
            vt,
            gate,
            lambda,
        }
        | Element::Pmos {
            beta,
            vt,
            gate,
            lambda,
        } => {
            let g = tie(gate);
            // overdrive, as affine, minus threshold magnitude
            let (ov, vt_mag) = if matches!(e, Element::Nmos { .. }) {
                (g.minus(lo), vt)
            } else {
                (hi.minus(g), -vt)
            };
            let v_ov = ov.at(vin, vout) - vt_mag;
            let v_ds = ds.at(vin, vout).max(0.0);
            let (region, i) = square_law(beta, v_ov, v_ds, lambda);
            let (d_ov, d_ds) = match region {
                Region::Cutoff => (0.0, 0.0),
                Region::Linear => (beta * v_ds, beta * (v_ov - v_ds)),
                Region::Saturation => (
                    beta * v_ov * (1.0 + lambda * v_ds),
                    0.5 * beta * v_ov * v_ov * lambda,
                ),
            };
            (
                i,
                d_ov * ov.1 + d_ds * ds.1,
                d_ov * ov.2 + d_ds * ds.2,
                Some(region),
            )
        }
    }
}

struct Eval {
    f: f64,
    f_in: f64,
    f_out: f64,
    up: Option<Region>,
    down: Option<Region>,
}

impl InverterCircuit {
    fn eval(&self, vin: f64, vout: f64) -> Eval {
        let rail = Affine(self.v_dd, 0.0, 0.0);
        let out = Affine(0.0, 0.0, 1.0);
        let gnd = Affine(0.0, 0.0, 0.0);
        let (iu, iu_in, iu_out, up) =
            element_current(&self.pull_up, rail, out, self.v_dd, vin, vout);
        let (id, id_in, id_out, down) =
            element_current(&self.pull_down, out, gnd, self.v_dd, vin, vout);
        Eval {
            f: iu - id,
            f_in: iu_in - id_in,
            f_out: iu_out - id_out,
            up,
            down,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.v_dd > 0.0 && self.v_dd.is_finite()) {
            return Err(Error::input("v_dd must be positive"));
        }
        for e in [&self.pull_up, &self.pull_down] {
            let ok = match *e {
                Element::Resistor { r } => r > 0.0 && r.is_finite(),
                Element::Nmos { beta, vt, lambda, .. } | Element::Pmos { beta, vt, lambda, .. } => {
                    beta > 0.0 && vt.is_finite() && lambda >= 0.0
                }
            };
            if !ok {
                return Err(Error::input(
                    "element parameters must be positive and finite",
                ));
            }
        }
        Ok(())
    }

    /// Static output voltage for the given input.
    pub fn output(&self, vin: f64) -> f64 {
        bisect(|v| self.eval(vin, v).f, 0.0, self.v_dd, V_TOL).unwrap_or(0.0)
    }

    /// dV_out/dV_in at the static operating point.
    pub fn slope(&self, vin: f64) -> f64 {
        let vout = self.output(vin);
        let e = self.eval(vin, vout);
        if e.f_out == 0.0 {
            if e.f_in == 0.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            -e.f_in / e.f_out
        }
    }

    fn regions(&self, vin: f64) -> PointRegions {
        let vout = self.output(vin);
        let e = self.eval(vin, vout);
        PointRegions {
            v_in: vin,
            v_out: vout,
            pull_up: e.up,
            pull_down: e.down,
        }
    }
}

/// Operating regions of both sides at one point of the curve (`None` for a resistor).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointRegions {
    pub v_in: f64,
    pub v_out: f64,
    pub pull_up: Option<Region>,
    pub pull_down: Option<Region>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogicLevels {
    pub v_ol: f64,
    pub v_oh: f64,
    pub v_il: f64,
    pub v_ih: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VtcResult {
    pub v_ol: f64,
    pub v_oh: f64,
    pub v_il: f64,
    pub v_ih: f64,
    pub v_m: f64,
    pub nm_l: f64,
    pub nm_h: f64,
    pub at_v_il: PointRegions,
    pub at_v_ih: PointRegions,
    pub at_v_m: PointRegions,
}

impl VtcResult {
    pub fn levels(&self) -> LogicLevels {
        LogicLevels {
            v_ol: self.v_ol,
            v_oh: self.v_oh,
            v_il: self.v_il,
            v_ih: self.v_ih,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseMargins {
    pub nm_l: f64,
    pub nm_h: f64,
}

pub fn noise_margins(driver: &LogicLevels, receiver: &LogicLevels) -> NoiseMargins {
    NoiseMargins {
        nm_l: receiver.v_il - driver.v_ol,
        nm_h: driver.v_oh - receiver.v_ih,
    }
}

/// Characteristic voltages of the inverter, with V_IL and V_IH at the unity-gain points.
pub fn inverter_vtc(config: &InverterConfig) -> Result<VtcResult> {
    let c = config.circuit();
    c.validate()?;
    let v_dd = c.v_dd;
    let v_oh = c.output(0.0);
    let v_ol = c.output(v_dd);
    let v_m = bisect(
        |v| c.eval(v, v).f,
        0.0,
        v_dd,
        V_TOL,
    )
    .ok_or_else(|| Error::solver("no switching threshold in [0, V_DD]", vec![]))?;

    let gain = |v: f64| c.slope(v) + 1.0;
    let step = v_dd / GRID as f64;
    let samples: Vec<(f64, f64)> = (0..=GRID)
        .map(|i| {
            let v = i as f64 * step;
            (v, gain(v))
        })
        .collect();
    let mut v_il = None;
    let mut v_ih = None;
    for pair in samples.windows(2) {
        let ((a, ga), (b, gb)) = (pair[0], pair[1]);
        if v_il.is_none() && ga > 0.0 && gb <= 0.0 {
            v_il = bisect(gain, a, b, V_TOL);
        }
        if ga < 0.0 && gb >= 0.0 {
            v_ih = bisect(gain, a, b, V_TOL);
        }
    }
    let steepest = samples
        .iter()
        .map(|(_, g)| g - 1.0)
        .fold(f64::INFINITY, f64::min);
    let (v_il, v_ih) = match (v_il, v_ih) {
        (Some(l), Some(h)) if l < h => (l, h),
        _ => {
            return Err(Error::solver(
                "transfer curve has no pair of unity-gain points",
                vec![
                    format!("steepest slope found: {steepest:.6}"),
                    format!("v_oh = {v_oh:.6}, v_ol = {v_ol:.6}, v_m = {v_m:.6}"),
                ],
            ))
        }
    };
    Ok(VtcResult {
        v_ol,
        v_oh,
        v_il,
        v_ih,
        v_m,
        nm_l: v_il - v_ol,
        nm_h: v_oh - v_ih,
        at_v_il: c.regions(v_il),
        at_v_ih: c.regions(v_ih),
        at_v_m: c.regions(v_m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn depletion_case() -> InverterConfig {
        InverterConfig::DepletionLoad {
            driver: TransistorParams::new(100e-6, 1.0, 0.4),
            load: TransistorParams::new(25e-6, 1.0, -0.3),
            v_dd: 1.8,
        }
    }

    #[test]
    fn depletion_load_levels() {
        let r = inverter_vtc(&depletion_case()).unwrap();
        assert!((r.v_oh - 1.8).abs() < 1e-9);
        assert!((r.v_ol - 0.008).abs() < 0.005);
        assert!((r.v_il - 0.467).abs() < 0.005);
        assert!((r.v_ih - 0.573).abs() < 0.005);
        assert!(r.v_ol <= r.v_il && r.v_il < r.v_ih && r.v_ih <= r.v_oh);
    }

    #[test]
    fn symmetric_cmos_switches_at_half_supply() {
        let n = TransistorParams::new(100e-6, 1.0, 0.5);
        let p = TransistorParams::new(100e-6, 1.0, -0.5);
        let r = inverter_vtc(&InverterConfig::Cmos {
            nmos: n,
            pmos: p,
            v_dd: 2.5,
        })
        .unwrap();
        assert!((r.v_m - 1.25).abs() < 1e-9);
        assert!((r.v_il + r.v_ih - 2.5).abs() < 1e-6);
        assert_eq!(r.at_v_m.pull_up, Some(Region::Saturation));
    }

    #[test]
    fn resistor_only_gain_fails() {
        let cfg = InverterConfig::ResistorPullup {
            nmos: TransistorParams::new(1e-6, 1.0, 0.5),
            r: 10.0,
            v_dd: 1.0,
        };
        assert!(matches!(inverter_vtc(&cfg), Err(Error::Solver { .. })));
    }

    #[test]
    fn margins_from_levels() {
        let drv = LogicLevels {
            v_ol: 0.1,
            v_oh: 1.8,
            v_il: 0.0,
            v_ih: 0.0,
        };
        let rcv = LogicLevels {
            v_ol: 0.0,
            v_oh: 0.0,
            v_il: 0.3,
            v_ih: 1.6,
        };
        let nm = noise_margins(&drv, &rcv);
        assert!((nm.nm_l - 0.2).abs() < 1e-12);
        assert!((nm.nm_h - 0.2).abs() < 1e-12);
    }
}
