//! Long-channel (square-law) MOSFET model.
//!
//! Voltages for pmos devices are source-referenced magnitudes (`v_gs` is V_SG, `v_ds` is V_SD,
//! `v_sb` is the reverse body bias); `vt0` and `gamma` keep their sign, negative for pmos.
//! Lengths are in meters, dopings in cm^-3. Junction math runs in cm and is converted back.

mod vtc;

pub use vtc::{
    inverter_vtc, noise_margins, Element, GateTie, InverterCircuit, InverterConfig, LogicLevels,
    NoiseMargins, PointRegions, TransistorParams, VtcResult,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vacuum permittivity in F/cm, at the three-digit value used by the hand calculations.
pub const EPS0_F_PER_CM: f64 = 8.85e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Nmos,
    Pmos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Cutoff,
    Linear,
    Saturation,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Cutoff => "cutoff",
            Region::Linear => "linear",
            Region::Saturation => "saturation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalConstants {
    /// Intrinsic carrier concentration (cm^-3).
    pub n_i: f64,
    /// Silicon permittivity (F/cm).
    pub eps_si: f64,
    /// Oxide permittivity (F/cm).
    pub eps_ox: f64,
    /// Thermal voltage (V).
    pub kt_over_q: f64,
    /// Electron charge (C).
    pub q: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            n_i: 1.45e10,
            eps_si: 11.7 * EPS0_F_PER_CM,
            eps_ox: 3.9 * EPS0_F_PER_CM,
            kt_over_q: 0.026,
            q: 1.6e-19,
        }
    }
}

fn default_phi_f2() -> f64 {
    0.6
}

fn default_grading() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MosDevice {
    pub polarity: Polarity,
    /// Process transconductance k' = µ·C_ox (A/V²).
    pub k_prime: f64,
    /// Zero-bias threshold (V), negative for enhancement pmos.
    pub vt0: f64,
    /// Body-effect coefficient (V^0.5), negative for pmos.
    #[serde(default)]
    pub gamma: f64,
    /// Surface potential magnitude |2φ_F| (V).
    #[serde(default = "default_phi_f2")]
    pub phi_f2: f64,
    #[serde(default)]
    pub lambda: f64,
    pub w: f64,
    /// Drawn channel length.
    pub l: f64,
    /// Gate overlap per side.
    #[serde(default)]
    pub l_d: f64,
    #[serde(default)]
    pub t_ox: Option<f64>,
    /// Gate capacitance per area (F/m²); overrides `t_ox` when set.
    #[serde(default)]
    pub c_ox: Option<f64>,
    #[serde(default)]
    pub n_d: Option<f64>,
    #[serde(default)]
    pub n_a_sub: Option<f64>,
    /// Channel-stop doping seen by the sidewall; defaults to `n_a_sub`.
    #[serde(default)]
    pub n_a_sw: Option<f64>,
    #[serde(default)]
    pub x_j: Option<f64>,
    /// Sidewall junction depth; defaults to `x_j`.
    #[serde(default)]
    pub x_j_sw: Option<f64>,
    /// Diffusion extent from the gate edge.
    #[serde(default)]
    pub y: Option<f64>,
    #[serde(default = "default_grading")]
    pub m_j: f64,
    #[serde(default = "default_grading")]
    pub m_jsw: f64,
}

impl MosDevice {
    pub fn new(polarity: Polarity, k_prime: f64, vt0: f64, w: f64, l: f64) -> Self {
        MosDevice {
            polarity,
            k_prime,
            vt0,
            gamma: 0.0,
            phi_f2: default_phi_f2(),
            lambda: 0.0,
            w,
            l,
            l_d: 0.0,
            t_ox: None,
            c_ox: None,
            n_d: None,
            n_a_sub: None,
            n_a_sw: None,
            x_j: None,
            x_j_sw: None,
            y: None,
            m_j: default_grading(),
            m_jsw: default_grading(),
        }
    }

    pub fn nmos(k_prime: f64, vt0: f64, w: f64, l: f64) -> Self {
        Self::new(Polarity::Nmos, k_prime, vt0, w, l)
    }

    pub fn pmos(k_prime: f64, vt0: f64, w: f64, l: f64) -> Self {
        Self::new(Polarity::Pmos, k_prime, vt0, w, l)
    }

    pub fn with_body_effect(mut self, gamma: f64, phi_f2: f64) -> Self {
        self.gamma = gamma;
        self.phi_f2 = phi_f2;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// k'·W/L.
    pub fn beta(&self) -> f64 {
        self.k_prime * self.w / self.l
    }

    pub fn l_eff(&self) -> f64 {
        self.l - 2.0 * self.l_d
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w > 0.0 && self.l > 0.0) {
            return Err(Error::Geometry("w and l must be positive".into()));
        }
        if self.l_eff() < 0.0 {
            return Err(Error::Geometry(format!(
                "effective length l - 2·l_d = {} is negative",
                self.l_eff()
            )));
        }
        if !(self.k_prime > 0.0) {
            return Err(Error::input("k_prime must be positive"));
        }
        for (name, m) in [("m_j", self.m_j), ("m_jsw", self.m_jsw)] {
            if !(m > 0.0 && m <= 1.0) {
                return Err(Error::input(format!("{name} must lie in (0, 1]")));
            }
        }
        Ok(())
    }

    /// Threshold as a source-referenced magnitude: V_T for nmos, −V_T for pmos.
    fn vt_magnitude(&self, vt: f64) -> f64 {
        match self.polarity {
            Polarity::Nmos => vt,
            Polarity::Pmos => -vt,
        }
    }
}

/// V_T = V_T0 + γ(√(|2φ_F| + V_SB) − √|2φ_F|).
pub fn threshold_voltage(dev: &MosDevice, v_sb: f64) -> Result<f64> {
    let radicand = dev.phi_f2 + v_sb;
    if radicand < 0.0 || dev.phi_f2 < 0.0 {
        return Err(Error::Domain(format!(
            "|2φ_F| + V_SB = {radicand} is negative"
        )));
    }
    if v_sb == 0.0 || dev.gamma == 0.0 {
        return Ok(dev.vt0);
    }
    Ok(dev.vt0 + dev.gamma * (radicand.sqrt() - dev.phi_f2.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    pub region: Region,
    /// Drain current magnitude (A).
    pub i_d: f64,
    /// Signed effective threshold (V).
    pub v_t: f64,
    pub v_gs: f64,
    pub v_ds: f64,
    pub v_sb: f64,
}

/// Square-law current for overdrive `v_ov` = V_GS − V_T and drain bias `v_ds` ≥ 0.
pub fn square_law(beta: f64, v_ov: f64, v_ds: f64, lambda: f64) -> (Region, f64) {
    if v_ov <= 0.0 {
        return (Region::Cutoff, 0.0);
    }
    if v_ds < v_ov {
        let v = v_ds.max(0.0);
        (Region::Linear, 0.5 * beta * (2.0 * v_ov * v - v * v))
    } else {
        (Region::Saturation, 0.5 * beta * v_ov * v_ov * (1.0 + lambda * v_ds))
    }
}

pub fn bias_point(dev: &MosDevice, v_gs: f64, v_ds: f64, v_sb: f64) -> Result<OperatingPoint> {
    for (name, v) in [("v_gs", v_gs), ("v_ds", v_ds), ("v_sb", v_sb)] {
        if !v.is_finite() {
            return Err(Error::input(format!("{name} must be finite")));
        }
    }
    if v_ds < 0.0 {
        return Err(Error::Domain(
            "v_ds must be a non-negative source-referenced magnitude".into(),
        ));
    }
    let v_t = threshold_voltage(dev, v_sb)?;
    let v_ov = v_gs - dev.vt_magnitude(v_t);
    let (region, i_d) = square_law(dev.beta(), v_ov, v_ds, dev.lambda);
    Ok(OperatingPoint {
        region,
        i_d,
        v_t,
        v_gs,
        v_ds,
        v_sb,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapReport {
    pub c_gb: f64,
    pub c_gs: f64,
    pub c_gd: f64,
    pub c_ox_total: f64,
    /// Overlap capacitance of one side, C_ox·W·L_D.
    pub c_overlap: f64,
    pub c_bottom: f64,
    pub c_sidewall: f64,
    pub c_junction_total: f64,
}

/// Gate capacitance per area (F/m²).
pub fn oxide_capacitance(dev: &MosDevice, consts: &PhysicalConstants) -> Result<f64> {
    if let Some(c) = dev.c_ox {
        return Ok(c);
    }
    match dev.t_ox {
        Some(t) if t > 0.0 => Ok(consts.eps_ox * 100.0 / t),
        _ => Err(Error::input("device needs t_ox or c_ox for capacitance")),
    }
}

/// Built-in potential kT/q·ln(N_A·N_D/n_i²).
pub fn built_in_potential(n_a: f64, n_d: f64, consts: &PhysicalConstants) -> f64 {
    consts.kt_over_q * (n_a * n_d / (consts.n_i * consts.n_i)).ln()
}

/// Zero-bias abrupt-junction capacitance per area (F/cm²).
pub fn zero_bias_junction_cap(n_a: f64, n_d: f64, consts: &PhysicalConstants) -> f64 {
    let phi0 = built_in_potential(n_a, n_d, consts);
    (consts.eps_si * consts.q / 2.0 * (n_a * n_d / (n_a + n_d)) / phi0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JunctionCaps {
    pub phi0: f64,
    pub phi0_sw: f64,
    /// F/cm².
    pub c_j0: f64,
    /// F/cm².
    pub c_j0_sw: f64,
    pub c_bottom: f64,
    pub c_sidewall: f64,
}

/// Drain junction capacitance at reverse bias `v_reverse`.
/// Bottom area W·(Y + X_j) at substrate doping, sidewall (2Y + W)·X_j at channel-stop doping.
pub fn junction_capacitance(
    dev: &MosDevice,
    v_reverse: f64,
    consts: &PhysicalConstants,
) -> Result<JunctionCaps> {
    if v_reverse < 0.0 {
        return Err(Error::Domain("v_reverse is a reverse-bias magnitude and must be ≥ 0".into()));
    }
    let need = |v: Option<f64>, name: &str| {
        v.filter(|x| *x > 0.0)
            .ok_or_else(|| Error::input(format!("junction capacitance needs positive `{name}`")))
    };
    let n_d = need(dev.n_d, "n_d")?;
    let n_a = need(dev.n_a_sub, "n_a_sub")?;
    let n_a_sw = dev.n_a_sw.unwrap_or(n_a);
    let x_j = need(dev.x_j, "x_j")?;
    let x_j_sw = dev.x_j_sw.unwrap_or(x_j);
    let y = need(dev.y, "y")?;
    let cm = 100.0;
    let phi0 = built_in_potential(n_a, n_d, consts);
    let phi0_sw = built_in_potential(n_a_sw, n_d, consts);
    let c_j0 = zero_bias_junction_cap(n_a, n_d, consts);
    let c_j0_sw = zero_bias_junction_cap(n_a_sw, n_d, consts);
    let area = (dev.w * cm) * ((y + x_j) * cm);
    let side = ((2.0 * y + dev.w) * cm) * (x_j_sw * cm);
    let c_bottom = c_j0 * area / (1.0 + v_reverse / phi0).powf(dev.m_j);
    let c_sidewall = c_j0_sw * side / (1.0 + v_reverse / phi0_sw).powf(dev.m_jsw);
    Ok(JunctionCaps {
        phi0,
        phi0_sw,
        c_j0,
        c_j0_sw,
        c_bottom,
        c_sidewall,
    })
}

/// Oxide capacitances for the given region plus drain-junction capacitance when doping data is present.
pub fn mos_capacitances(
    dev: &MosDevice,
    region: Region,
    v_reverse: f64,
    consts: &PhysicalConstants,
) -> Result<CapReport> {
    dev.validate()?;
    let c_ox = oxide_capacitance(dev, consts)?;
    let gate = c_ox * dev.w * dev.l_eff();
    let c_overlap = c_ox * dev.w * dev.l_d;
    let (c_gb, c_gs, c_gd) = match region {
        Region::Cutoff => (gate, c_overlap, c_overlap),
        Region::Linear => (0.0, 0.5 * gate + c_overlap, 0.5 * gate + c_overlap),
        Region::Saturation => (0.0, 2.0 / 3.0 * gate + c_overlap, c_overlap),
    };
    let (c_bottom, c_sidewall) = if dev.n_d.is_some() {
        let j = junction_capacitance(dev, v_reverse, consts)?;
        (j.c_bottom, j.c_sidewall)
    } else {
        (0.0, 0.0)
    };
    Ok(CapReport {
        c_gb,
        c_gs,
        c_gd,
        c_ox_total: c_gb + c_gs + c_gd,
        c_overlap,
        c_bottom,
        c_sidewall,
        c_junction_total: c_bottom + c_sidewall,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalingMode {
    ConstantField { s: f64 },
    ConstantVoltage { s: f64 },
    /// Voltages divide by `s`, dimensions by `m`.
    General { s: f64, m: f64 },
}

impl ScalingMode {
    fn divisors(self) -> (f64, f64) {
        match self {
            ScalingMode::ConstantField { s } => (s, s),
            ScalingMode::ConstantVoltage { s } => (1.0, s),
            ScalingMode::General { s, m } => (s, m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFactors {
    pub mode: ScalingMode,
    pub factors: BTreeMap<String, f64>,
}

impl ScalingFactors {
    pub fn get(&self, quantity: &str) -> f64 {
        self.factors[quantity]
    }
}

pub fn scale_factors(mode: ScalingMode) -> Result<ScalingFactors> {
    let (s, m) = mode.divisors();
    if !(s >= 1.0 && m >= 1.0) {
        return Err(Error::input("scaling divisors must be ≥ 1"));
    }
    let factors = [
        ("V", 1.0 / s),
        ("I", m / (s * s)),
        ("C", 1.0 / m),
        ("R", s / m),
        ("R_sheet", s / m),
        ("delay", s / (m * m)),
        ("P", m / (s * s * s)),
        ("E", 1.0 / (m * s * s)),
        ("power_density", m.powi(3) / s.powi(3)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    Ok(ScalingFactors { mode, factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    const UM: f64 = 1e-6;

    #[test]
    fn zero_bias_threshold_is_vt0() {
        let dev = MosDevice::pmos(20e-6, -0.5, 5.0, 1.0).with_body_effect(-0.25, 0.4);
        assert_eq!(threshold_voltage(&dev, 0.0).unwrap(), -0.5);
        let vt = threshold_voltage(&dev, 0.6).unwrap();
        assert!((vt - (-0.5919)).abs() < 1e-4);
        assert!(matches!(threshold_voltage(&dev, -0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn pmos_linear_bias_point() {
        let dev = MosDevice::pmos(20e-6, -0.6, 5.0, 1.0);
        let op = bias_point(&dev, 1.2, 0.2, 0.0).unwrap();
        assert_eq!(op.region, Region::Linear);
        assert!((op.i_d - 10e-6).abs() < 1e-12);
        let off = bias_point(&dev, 0.5, 1.0, 0.0).unwrap();
        assert_eq!(off.region, Region::Cutoff);
        assert_eq!(off.i_d, 0.0);
    }

    #[test]
    fn boundary_continuity() {
        let (r1, i_lin) = square_law(1e-3, 0.7, 0.7 - 1e-15, 0.0);
        let (r2, i_sat) = square_law(1e-3, 0.7, 0.7, 0.0);
        assert_eq!((r1, r2), (Region::Linear, Region::Saturation));
        assert!((i_lin - i_sat).abs() < 1e-12 * i_sat);
    }

    #[test]
    fn negative_effective_length_rejected() {
        let mut dev = MosDevice::nmos(1e-4, 0.5, UM, UM);
        dev.l_d = 0.6 * UM;
        dev.t_ox = Some(1e-8);
        assert!(matches!(
            mos_capacitances(&dev, Region::Saturation, 0.0, &PhysicalConstants::default()),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn scaling_identity_and_general() {
        let f = scale_factors(ScalingMode::General { s: 1.0, m: 1.0 }).unwrap();
        assert!(f.factors.values().all(|v| *v == 1.0));
        let g = scale_factors(ScalingMode::General { s: 2.0, m: 4.0 }).unwrap();
        assert_eq!(g.get("delay"), 0.125);
        assert_eq!(g.get("P"), 0.5);
        let cv = scale_factors(ScalingMode::ConstantVoltage { s: 3.0 }).unwrap();
        assert!((cv.get("R_sheet") - 1.0 / 3.0).abs() < 1e-15);
        let cf = scale_factors(ScalingMode::ConstantField { s: 3.0 }).unwrap();
        assert_eq!(cf.get("R_sheet"), 1.0);
    }
}
