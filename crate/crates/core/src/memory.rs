//! SRAM cell voltages and sizing, bitline parasitics, array read delay, decoders and address maps.

use serde::{Deserialize, Serialize};

use crate::device::Region;
use crate::error::{Error, Result};
use crate::numeric::{bisect, quadratic_roots};

const REGION_TOL: f64 = 1e-9;

/// A square-law device whose gate-source and drain-source voltages are affine in the node voltage V:
/// v_gs = gs.0 + gs.1·V, v_ds = ds.0 + ds.1·V.
#[derive(Debug, Clone, Copy, PartialEq)]
struct KclDevice {
    name: &'static str,
    beta: f64,
    vt: f64,
    gs: (f64, f64),
    ds: (f64, f64),
    /// Body coefficient and |2φ_F|, with V_SB = sb.0 + sb.1·V.
    body: Option<(f64, f64, (f64, f64))>,
}

impl KclDevice {
    fn vt_at(&self, v: f64) -> f64 {
        match self.body {
            Some((gamma, phi, sb)) => {
                let v_sb = (sb.0 + sb.1 * v).max(-phi);
                self.vt + gamma * ((phi + v_sb).sqrt() - phi.sqrt())
            }
            None => self.vt,
        }
    }

    fn bias(&self, v: f64) -> (f64, f64) {
        (
            self.gs.0 + self.gs.1 * v - self.vt_at(v),
            self.ds.0 + self.ds.1 * v,
        )
    }

    fn region(&self, v: f64) -> Region {
        let (ov, ds) = self.bias(v);
        if ov <= 0.0 {
            Region::Cutoff
        } else if ds < ov {
            Region::Linear
        } else {
            Region::Saturation
        }
    }

    fn current(&self, v: f64) -> f64 {
        let (ov, ds) = self.bias(v);
        crate::device::square_law(self.beta, ov, ds.max(0.0), 0.0).1
    }

    /// Current as a quadratic in V, assuming `region` (constant threshold only).
    fn quadratic(&self, region: Region) -> [f64; 3] {
        let (a0, a1) = (self.gs.0 - self.vt, self.gs.1);
        let (d0, d1) = self.ds;
        let h = 0.5 * self.beta;
        match region {
            Region::Cutoff => [0.0; 3],
            Region::Saturation => [h * a1 * a1, h * 2.0 * a0 * a1, h * a0 * a0],
            Region::Linear => [
                h * (2.0 * a1 * d1 - d1 * d1),
                h * (2.0 * (a0 * d1 + a1 * d0) - 2.0 * d0 * d1),
                h * (2.0 * a0 * d0 - d0 * d0),
            ],
        }
    }

    fn in_region(&self, v: f64, region: Region) -> bool {
        let (ov, ds) = self.bias(v);
        match region {
            Region::Cutoff => ov <= REGION_TOL,
            Region::Saturation => ov > -REGION_TOL && ds >= ov - REGION_TOL,
            Region::Linear => ov > -REGION_TOL && ds > -REGION_TOL && ds <= ov + REGION_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSolution {
    pub v: f64,
    /// Regions of the two devices at the solution.
    pub regions: [(String, Region); 2],
    /// Every root of the region-conditioned equations, kept or not.
    pub candidates: Vec<f64>,
    pub diagnostics: Vec<String>,
}

/// Smallest V in [0, v_max] where the two device currents balance with consistent regions.
fn solve_balance(a: &KclDevice, b: &KclDevice, v_max: f64) -> Result<CellSolution> {
    let mut candidates = Vec::new();
    let mut diagnostics = Vec::new();
    let mut valid: Vec<(f64, Region, Region)> = Vec::new();
    let regions = [Region::Linear, Region::Saturation];
    if a.body.is_none() && b.body.is_none() {
        for ra in regions {
            for rb in regions {
                let (qa, qb) = (a.quadratic(ra), b.quadratic(rb));
                for v in quadratic_roots(qa[0] - qb[0], qa[1] - qb[1], qa[2] - qb[2]) {
                    candidates.push(v);
                    let inside = (-REGION_TOL..=v_max + REGION_TOL).contains(&v);
                    let consistent = a.in_region(v, ra) && b.in_region(v, rb);
                    if inside && consistent {
                        valid.push((v.clamp(0.0, v_max), ra, rb));
                    } else {
                        diagnostics.push(format!(
                            "discarded V = {v:.6} assuming {} {} / {} {}: {}",
                            a.name,
                            ra.as_str(),
                            b.name,
                            rb.as_str(),
                            if inside { "region mismatch" } else { "outside [0, V_DD]" }
                        ));
                    }
                }
            }
        }
    } else {
        let f = |v: f64| a.current(v) - b.current(v);
        let n = 20_000;
        let step = v_max / n as f64;
        for i in 0..n {
            let (lo, hi) = (i as f64 * step, (i + 1) as f64 * step);
            if f(lo) == 0.0 || f(lo).signum() != f(hi).signum() {
                if let Some(v) = bisect(f, lo, hi, 1e-14) {
                    candidates.push(v);
                    if a.current(v) > 0.0 {
                        valid.push((v, a.region(v), b.region(v)));
                    }
                }
            }
        }
    }
    valid.sort_by(|x, y| x.0.total_cmp(&y.0));
    valid.dedup_by(|x, y| (x.0 - y.0).abs() < 1e-9);
    match valid.first() {
        Some(&(v, ra, rb)) => Ok(CellSolution {
            v,
            regions: [(a.name.to_string(), ra), (b.name.to_string(), rb)],
            candidates,
            diagnostics,
        }),
        None => Err(Error::solver(
            "no physically consistent node voltage",
            if diagnostics.is_empty() {
                vec![format!("candidate roots: {candidates:?}")]
            } else {
                diagnostics
            },
        )),
    }
}

fn default_phi() -> f64 {
    0.6
}

/// Six-transistor cell. Process transconductances k' times W/L give each device's β;
/// thresholds are magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SramCell {
    pub k_n: f64,
    pub k_p: f64,
    pub wl_access: f64,
    pub wl_pulldown: f64,
    pub wl_pullup: f64,
    pub vt_n: f64,
    pub vt_p: f64,
    pub v_dd: f64,
    /// Defaults to V_DD when reading and 0 when writing.
    #[serde(default)]
    pub v_bitline: Option<f64>,
    /// Body coefficient of the access device; 0 ignores body effect.
    #[serde(default)]
    pub gamma: f64,
    #[serde(default = "default_phi")]
    pub phi_f2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellMode {
    /// Node holding 0 pulled up by the access device against the pull-down.
    ReadDisturb,
    /// Node holding 1 pulled down through the access device against the pull-up.
    Write,
}

impl SramCell {
    fn validate(&self) -> Result<()> {
        let pos = [
            self.k_n,
            self.k_p,
            self.wl_access,
            self.wl_pulldown,
            self.wl_pullup,
            self.v_dd,
        ];
        if pos.iter().any(|x| !(*x > 0.0)) || self.vt_n < 0.0 || self.vt_p < 0.0 {
            return Err(Error::input("cell parameters must be positive"));
        }
        Ok(())
    }
}

/// Storage-node voltage during a read of a stored 0 or a write of 0 over a stored 1.
pub fn cell_node_voltage(cell: &SramCell, mode: CellMode) -> Result<CellSolution> {
    cell.validate()?;
    let vdd = cell.v_dd;
    match mode {
        CellMode::ReadDisturb => {
            let v_bl = cell.v_bitline.unwrap_or(vdd);
            let access = KclDevice {
                name: "access",
                beta: cell.k_n * cell.wl_access,
                vt: cell.vt_n,
                gs: (vdd, -1.0),
                ds: (v_bl, -1.0),
                body: (cell.gamma != 0.0).then_some((cell.gamma, cell.phi_f2, (0.0, 1.0))),
            };
            let pulldown = KclDevice {
                name: "pulldown",
                beta: cell.k_n * cell.wl_pulldown,
                vt: cell.vt_n,
                gs: (vdd, 0.0),
                ds: (0.0, 1.0),
                body: None,
            };
            solve_balance(&access, &pulldown, v_bl.min(vdd))
        }
        CellMode::Write => {
            let v_bl = cell.v_bitline.unwrap_or(0.0);
            let access = KclDevice {
                name: "access",
                beta: cell.k_n * cell.wl_access,
                vt: cell.vt_n,
                gs: (vdd - v_bl, 0.0),
                ds: (-v_bl, 1.0),
                body: (cell.gamma != 0.0).then_some((cell.gamma, cell.phi_f2, (v_bl, 0.0))),
            };
            let pullup = KclDevice {
                name: "pullup",
                beta: cell.k_p * cell.wl_pullup,
                vt: cell.vt_p,
                gs: (vdd, 0.0),
                ds: (vdd, -1.0),
                body: None,
            };
            solve_balance(&access, &pullup, vdd)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SizeTarget {
    #[default]
    Pullup,
    Access,
}

/// Write-trip sizing: the storage node must reach `v_trip` while the access device (gate at V_DD,
/// source at the bitline) fights the pull-up (gate grounded).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WriteSizing {
    pub k_n: f64,
    pub k_p: f64,
    /// W/L of the device that is not being solved for.
    pub wl_known: f64,
    pub vt0_n: f64,
    pub vt_p: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default = "default_phi")]
    pub phi_f2: f64,
    pub v_dd: f64,
    pub v_trip: f64,
    pub v_bitline: f64,
    #[serde(default)]
    pub solve_for: SizeTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizingResult {
    pub w_over_l: f64,
    /// Current through both devices at the trip point.
    pub current: f64,
    pub access_vt: f64,
    pub access_region: Region,
    pub pullup_region: Region,
}

pub fn access_sizing(s: &WriteSizing) -> Result<SizingResult> {
    if !(s.k_n > 0.0 && s.k_p > 0.0 && s.wl_known > 0.0 && s.v_dd > 0.0) {
        return Err(Error::input("sizing parameters must be positive"));
    }
    let v_sb = s.v_bitline;
    let vt = s.vt0_n + s.gamma * ((s.phi_f2 + v_sb).sqrt() - s.phi_f2.sqrt());
    let (acc_region, acc_unit) =
        crate::device::square_law(s.k_n, s.v_dd - s.v_bitline - vt, s.v_trip - s.v_bitline, 0.0);
    let (pu_region, pu_unit) =
        crate::device::square_law(s.k_p, s.v_dd - s.vt_p.abs(), s.v_dd - s.v_trip, 0.0);
    if acc_unit <= 0.0 || pu_unit <= 0.0 {
        return Err(Error::Infeasible(
            "one device carries no current at the trip point, the cell cannot flip there".into(),
        ));
    }
    let (wl, current) = match s.solve_for {
        SizeTarget::Pullup => (acc_unit * s.wl_known / pu_unit, acc_unit * s.wl_known),
        SizeTarget::Access => (pu_unit * s.wl_known / acc_unit, pu_unit * s.wl_known),
    };
    Ok(SizingResult {
        w_over_l: wl,
        current,
        access_vt: vt,
        access_region: acc_region,
        pullup_region: pu_region,
    })
}

/// Resistive-load cell reading a stored 0 with the bitline at V_DD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadResistorCase {
    pub k_n: f64,
    pub wl_access: f64,
    pub wl_pulldown: f64,
    pub vt_n: f64,
    pub v_dd: f64,
    pub v_q_max: f64,
}

/// Smallest load resistor keeping the low node at or below `v_q_max` during a read.
pub fn load_resistor_bound(c: &LoadResistorCase) -> Result<f64> {
    if !(c.k_n > 0.0 && c.wl_access > 0.0 && c.wl_pulldown >= 0.0 && c.v_dd > 0.0) {
        return Err(Error::input("load-resistor parameters must be positive"));
    }
    let vq = c.v_q_max;
    if !(0.0..c.v_dd).contains(&vq) {
        return Err(Error::input("v_q_max must lie in [0, v_dd)"));
    }
    let ov_a = c.v_dd - vq - c.vt_n;
    let (_, i_acc) = crate::device::square_law(c.k_n * c.wl_access, ov_a, c.v_dd - vq, 0.0);
    let (_, i_pd) = crate::device::square_law(c.k_n * c.wl_pulldown, c.v_dd - c.vt_n, vq, 0.0);
    let margin = i_pd - i_acc;
    if margin <= 0.0 {
        return Err(Error::Infeasible(format!(
            "pull-down sinks {i_pd:e} A but the access device alone sources {i_acc:e} A"
        )));
    }
    Ok((c.v_dd - vq) / margin)
}

fn two() -> u32 {
    2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BitlineGeometry {
    pub rows: u32,
    pub cell_height: f64,
    pub bl_width: f64,
    /// Drain width of the access device on the bitline.
    pub access_width: f64,
    /// Diffusion capacitance per unit width.
    pub c_d: f64,
    /// Plate capacitance per unit area.
    pub c_pp: f64,
    /// Fringe capacitance per unit length per edge.
    pub c_fr: f64,
    #[serde(default = "two")]
    pub fringe_edges: u32,
    pub r_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BitlineModel {
    pub c_diffusion: f64,
    pub c_wire: f64,
    pub c_total: f64,
    pub r_total: f64,
    /// R·C/2 of the distributed line.
    pub elmore_distributed: f64,
}

pub fn bitline_model(g: &BitlineGeometry) -> Result<BitlineModel> {
    if !(g.cell_height > 0.0 && g.bl_width > 0.0) {
        return Err(Error::Geometry("cell height and bitline width must be positive".into()));
    }
    let rows = g.rows as f64;
    let length = rows * g.cell_height;
    let c_diffusion = rows * g.access_width * g.c_d;
    let c_wire = length * g.bl_width * g.c_pp + g.fringe_edges as f64 * length * g.c_fr;
    let c_total = c_diffusion + c_wire;
    let r_total = g.r_sq * length / g.bl_width;
    Ok(BitlineModel {
        c_diffusion,
        c_wire,
        c_total,
        r_total,
        elmore_distributed: r_total * c_total / 2.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayPlan {
    pub rows: u32,
    pub cols: u32,
    pub decode_levels: u32,
    #[serde(default)]
    pub mux_levels: u32,
    #[serde(default)]
    pub r_word: Option<f64>,
    #[serde(default)]
    pub c_word: Option<f64>,
    #[serde(default)]
    pub r_bit: Option<f64>,
    #[serde(default)]
    pub c_bit: Option<f64>,
    #[serde(default)]
    pub d_gate: Option<f64>,
    #[serde(default)]
    pub d_mux: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadDelay {
    /// Multiplier of R_word·C_word, 0.69·cols(cols+1)/2.
    pub word_coeff: f64,
    /// Multiplier of R_bit·C_bit, 0.69·rows(rows+1)/2.
    pub bit_coeff: f64,
    pub expression: String,
    /// Present when every parasitic and delay is given.
    pub value: Option<f64>,
}

fn fmt_coeff(x: f64) -> String {
    let r = (x * 1e6).round() / 1e6;
    format!("{r}")
}

pub fn blocked_read_delay(p: &ArrayPlan) -> Result<ReadDelay> {
    if p.rows == 0 || p.cols == 0 {
        return Err(Error::input("array needs at least one row and column"));
    }
    let tri = |n: u32| n as f64 * (n as f64 + 1.0) / 2.0;
    let word_coeff = 0.69 * tri(p.cols);
    let bit_coeff = 0.69 * tri(p.rows);
    let mut terms = Vec::new();
    if p.decode_levels > 0 {
        terms.push(format!("{}D_gate", p.decode_levels));
    }
    if word_coeff == bit_coeff {
        terms.push(format!("{}(R_word·C_word + R_bit·C_bit)", fmt_coeff(word_coeff)));
    } else {
        terms.push(format!("{}R_word·C_word", fmt_coeff(word_coeff)));
        terms.push(format!("{}R_bit·C_bit", fmt_coeff(bit_coeff)));
    }
    match p.mux_levels {
        0 => {}
        1 => terms.push("D_mux".into()),
        m => terms.push(format!("{m}D_mux")),
    }
    let value = (|| {
        let d_mux = if p.mux_levels > 0 { p.d_mux? } else { p.d_mux.unwrap_or(0.0) };
        Some(
            p.decode_levels as f64 * p.d_gate?
                + word_coeff * p.r_word? * p.c_word?
                + bit_coeff * p.r_bit? * p.c_bit?
                + p.mux_levels as f64 * d_mux,
        )
    })();
    Ok(ReadDelay {
        word_coeff,
        bit_coeff,
        expression: terms.join(" + "),
        value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Nand,
    Nor,
    Inverter,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderStage {
    pub kind: GateKind,
    #[serde(default)]
    pub fan_in: u32,
    pub count: u64,
}

/// Static CMOS transistor count: 2k per k-input gate, 2 per inverter.
pub fn decoder_cost(stages: &[DecoderStage]) -> Result<u64> {
    let mut total = 0;
    for s in stages {
        let k = match s.kind {
            GateKind::Inverter => 1,
            _ if s.fan_in >= 2 => s.fan_in as u64,
            _ => return Err(Error::input("NAND and NOR gates need fan_in ≥ 2")),
        };
        total += 2 * k * s.count;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AddressField {
    pub name: String,
    /// Number of distinct values; a power of two.
    pub count: u64,
}

fn default_bits() -> u32 {
    32
}

/// Contiguous address fields listed from the most significant end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AddressMap {
    #[serde(default = "default_bits")]
    pub address_bits: u32,
    pub fields: Vec<AddressField>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSlice {
    pub name: String,
    pub value: u64,
    pub msb: u32,
    pub lsb: u32,
    pub width: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodedAddress {
    /// Bits above the mapped fields, `unused` first.
    pub fields: Vec<FieldSlice>,
    /// True when any unused high bit is set.
    pub out_of_range: bool,
}

impl DecodedAddress {
    pub fn get(&self, name: &str) -> Option<u64> {
        self.fields.iter().find(|f| f.name == name).map(|f| f.value)
    }
}

impl AddressMap {
    fn widths(&self) -> Result<Vec<u32>> {
        if !(1..=64).contains(&self.address_bits) {
            return Err(Error::input("address_bits must lie in 1..=64"));
        }
        let mut total = 0;
        let mut out = Vec::new();
        for f in &self.fields {
            if f.count == 0 || !f.count.is_power_of_two() {
                return Err(Error::input(format!("field `{}` count must be a power of two", f.name)));
            }
            let w = f.count.trailing_zeros();
            total += w;
            out.push(w);
        }
        if total > self.address_bits {
            return Err(Error::input(format!(
                "fields need {total} bits but the address has {}",
                self.address_bits
            )));
        }
        Ok(out)
    }

    pub fn decode(&self, address: u64) -> Result<DecodedAddress> {
        let widths = self.widths()?;
        if self.address_bits < 64 && address >> self.address_bits != 0 {
            return Err(Error::input(format!(
                "address {address:#x} exceeds {} bits",
                self.address_bits
            )));
        }
        let mapped: u32 = widths.iter().sum();
        let mut fields = Vec::new();
        let unused_w = self.address_bits - mapped;
        let slice = |lsb: u32, width: u32| -> u64 {
            if width == 0 {
                0
            } else {
                (address >> lsb) & (u64::MAX >> (64 - width))
            }
        };
        if unused_w > 0 {
            fields.push(FieldSlice {
                name: "unused".into(),
                value: slice(mapped, unused_w),
                msb: self.address_bits - 1,
                lsb: mapped,
                width: unused_w,
            });
        }
        let mut top = mapped;
        for (f, &w) in self.fields.iter().zip(&widths) {
            let lsb = top - w;
            fields.push(FieldSlice {
                name: f.name.clone(),
                value: slice(lsb, w),
                msb: if w == 0 { lsb } else { top - 1 },
                lsb,
                width: w,
            });
            top = lsb;
        }
        let out_of_range = fields.first().is_some_and(|f| f.name == "unused" && f.value != 0);
        Ok(DecodedAddress {
            fields,
            out_of_range,
        })
    }

    /// Reassembles an address from decoded fields.
    pub fn encode(&self, decoded: &DecodedAddress) -> Result<u64> {
        self.widths()?;
        let mut a = 0u64;
        for f in &decoded.fields {
            if f.width < 64 && f.value >> f.width != 0 {
                return Err(Error::input(format!("field `{}` value too wide", f.name)));
            }
            if f.width > 0 {
                a |= f.value << f.lsb;
            }
        }
        Ok(a)
    }
}

pub fn address_decode(map: &AddressMap, address: u64) -> Result<DecodedAddress> {
    map.decode(address)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell72() -> SramCell {
        SramCell {
            k_n: 60e-6,
            k_p: 30e-6,
            wl_access: 2.0,
            wl_pulldown: 4.0,
            wl_pullup: 1.5,
            vt_n: 0.5,
            vt_p: 0.5,
            v_dd: 2.0,
            v_bitline: None,
            gamma: 0.0,
            phi_f2: 0.6,
        }
    }

    #[test]
    fn read_and_write_voltages() {
        let r = cell_node_voltage(&cell72(), CellMode::ReadDisturb).unwrap();
        assert!((r.v - 0.2753).abs() < 1e-3);
        assert_eq!(r.regions[0].1, Region::Saturation);
        assert_eq!(r.regions[1].1, Region::Linear);
        let w = cell_node_voltage(&cell72(), CellMode::Write).unwrap();
        assert!((w.v - 0.3142).abs() < 1e-3);
    }

    #[test]
    fn read_with_reduced_precharge() {
        let c = SramCell {
            k_n: 1e-4,
            k_p: 5e-5,
            wl_access: 1.0,
            wl_pulldown: 1.0,
            wl_pullup: 1.0,
            vt_n: 0.3,
            vt_p: 0.3,
            v_dd: 1.0,
            v_bitline: Some(0.7),
            gamma: 0.0,
            phi_f2: 0.6,
        };
        let r = cell_node_voltage(&c, CellMode::ReadDisturb).unwrap();
        assert!((r.v - 0.205).abs() < 1e-3);
    }

    #[test]
    fn body_effect_path_agrees_when_tiny() {
        let mut c = cell72();
        let base = cell_node_voltage(&c, CellMode::ReadDisturb).unwrap().v;
        c.gamma = 1e-12;
        let v = cell_node_voltage(&c, CellMode::ReadDisturb).unwrap().v;
        assert!((v - base).abs() < 1e-6);
    }

    #[test]
    fn write_trip_sizing() {
        let s = WriteSizing {
            k_n: 20e-6,
            k_p: 10e-6,
            wl_known: 0.5,
            vt0_n: 0.7,
            vt_p: 0.7,
            gamma: 0.4,
            phi_f2: 0.6,
            v_dd: 5.0,
            v_trip: 0.7,
            v_bitline: 0.5,
            solve_for: SizeTarget::Pullup,
        };
        let r = access_sizing(&s).unwrap();
        assert!((r.w_over_l - 0.078).abs() < 0.001);
        let stuck = WriteSizing { v_bitline: 0.7, ..s };
        assert!(matches!(access_sizing(&stuck), Err(Error::Infeasible(_))));
    }

    #[test]
    fn load_resistor() {
        let r = load_resistor_bound(&LoadResistorCase {
            k_n: 50e-6,
            wl_access: 1.5,
            wl_pulldown: 3.0,
            vt_n: 0.5,
            v_dd: 2.5,
            v_q_max: 0.5,
        })
        .unwrap();
        assert!((r - 42_666.67).abs() < 0.01);
    }

    #[test]
    fn bitline() {
        let b = bitline_model(&BitlineGeometry {
            rows: 256,
            cell_height: 1.5e-6,
            bl_width: 0.2e-6,
            access_width: 0.25e-6,
            c_d: 1e-9,
            c_pp: 0.1e-3,
            c_fr: 0.05e-9,
            fringe_edges: 2,
            r_sq: 0.1,
        })
        .unwrap();
        assert!((b.c_total - 110.08e-15).abs() < 1e-20);
        assert!((b.r_total - 192.0).abs() < 1e-9);
        assert!((b.elmore_distributed - 10.568e-12).abs() < 1e-15);
    }

    #[test]
    fn read_delay_expression() {
        let d = blocked_read_delay(&ArrayPlan {
            rows: 64,
            cols: 16,
            decode_levels: 4,
            mux_levels: 0,
            r_word: None,
            c_word: None,
            r_bit: None,
            c_bit: None,
            d_gate: None,
            d_mux: None,
        })
        .unwrap();
        assert_eq!(d.expression, "4D_gate + 93.84R_word·C_word + 1435.2R_bit·C_bit");
        assert!(d.value.is_none());
    }

    #[test]
    fn decoder_counts() {
        let st = |kind, fan_in, count| DecoderStage { kind, fan_in, count };
        let a = decoder_cost(&[
            st(GateKind::Inverter, 1, 10),
            st(GateKind::Nand, 3, 3072),
            st(GateKind::Nor, 3, 3072),
            st(GateKind::Nand, 2, 2048),
            st(GateKind::Inverter, 1, 1024),
        ])
        .unwrap();
        assert_eq!(a, 47124);
        assert_eq!(decoder_cost(&[]).unwrap(), 0);
    }

    #[test]
    fn address_fields() {
        let map = AddressMap {
            address_bits: 32,
            fields: [("row", 16384), ("bank", 4), ("col", 1024), ("chip", 8)]
                .iter()
                .map(|(n, c)| AddressField {
                    name: n.to_string(),
                    count: *c,
                })
                .collect(),
        };
        let d = map.decode(0x004f_1ad8).unwrap();
        assert_eq!(d.get("row"), Some(0b00000010011110));
        assert_eq!(d.get("bank"), Some(0));
        assert_eq!(d.get("col"), Some(0b1101011011));
        assert_eq!(d.get("chip"), Some(0));
        assert_eq!(d.get("unused"), Some(0));
        assert_eq!(map.encode(&d).unwrap(), 0x004f_1ad8);
        let hi = map.decode(0xe000_0000).unwrap();
        assert!(hi.out_of_range);
    }
}
