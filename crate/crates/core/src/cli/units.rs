//! SI-suffixed input parsing and engineering-prefixed output.

use serde_json::Value;

const PREFIXES: [(&str, i32); 11] = [
    ("a", -18),
    ("f", -15),
    ("p", -12),
    ("n", -9),
    ("u", -6),
    ("m", -3),
    ("", 0),
    ("k", 3),
    ("M", 6),
    ("G", 9),
    ("T", 12),
];

/// Base units that take engineering prefixes in reports.
const BASE_UNITS: [&str; 10] = ["s", "F", "Ω", "V", "A", "W", "J", "Hz", "m", "C"];

fn prefix_exponent(p: &str) -> Option<i32> {
    match p {
        "µ" | "μ" => Some(-6),
        _ => PREFIXES.iter().find(|(s, _)| *s == p).map(|(_, e)| *e),
    }
}

/// Parses "50k", "20f", "3.3", "1.5ns", "10 uA" into base units. Returns None for anything else.
pub fn parse_si(text: &str) -> Option<f64> {
    let t = text.trim();
    let split = t
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || ((c == '+' || c == '-') && (i == 0 || matches!(t.as_bytes()[i - 1], b'e' | b'E')))
                || ((c == 'e' || c == 'E')
                    && t[i + 1..].starts_with(|n: char| n.is_ascii_digit() || n == '-' || n == '+')))
        })
        .map_or(t.len(), |(i, _)| i);
    let (num, rest) = t.split_at(split);
    if !num.starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-' || c == '+') {
        return None;
    }
    let x: f64 = num.parse().ok()?;
    let rest = rest.trim_start();
    if rest.is_empty() {
        return Some(x);
    }
    let mut candidates: Vec<(i32, &str)> = Vec::new();
    for (p, e) in PREFIXES.iter().map(|(p, e)| (*p, *e)).chain([("µ", -6), ("μ", -6)]) {
        if let Some(unit) = rest.strip_prefix(p) {
            candidates.push((e, unit));
        }
    }
    // A lone letter reads as a prefix, so "5m" is 5e-3.
    candidates.sort_by_key(|(_, unit)| unit.len());
    for (e, unit) in candidates {
        let unit_ok = unit.is_empty() || BASE_UNITS.contains(&unit) || unit == "ohm" || unit == "Ohm";
        if unit_ok && !(unit.is_empty() && prefix_exponent(rest).is_none()) {
            return Some(x * 10f64.powi(e));
        }
    }
    None
}

/// Keys whose string values are names or expressions, never quantities.
const TEXT_KEYS: [&str; 14] = [
    "expr", "poly", "name", "net", "nets", "inputs", "outputs", "output", "sink", "parent", "input",
    "vector", "vectors", "assignment",
];

/// Keys that hold a register name or, inside a skew, a clock window.
const NAME_OR_WINDOW_KEYS: [&str; 2] = ["launch", "capture"];

/// Replaces every SI-suffixed numeric string in `v` by its value in base units.
pub fn expand_si(v: &mut Value) {
    match v {
        Value::String(s) => {
            if let Some(x) = parse_si(s) {
                if x.fract() == 0.0 && x.abs() < 9.0e15 {
                    *v = Value::from(x as i64);
                } else if let Some(n) = serde_json::Number::from_f64(x) {
                    *v = Value::Number(n);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(expand_si),
        Value::Object(map) => {
            for (k, item) in map.iter_mut() {
                let named = NAME_OR_WINDOW_KEYS.contains(&k.as_str()) && item.is_string();
                if !TEXT_KEYS.contains(&k.as_str()) && !named {
                    expand_si(item);
                }
            }
        }
        _ => {}
    }
}

/// Rounds to six significant digits.
pub fn round6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

fn takes_prefix(unit: &str) -> bool {
    BASE_UNITS.contains(&unit)
}

/// Exponent of the engineering prefix suited to magnitude `x`.
fn eng_exponent(x: f64) -> i32 {
    if x == 0.0 || !x.is_finite() {
        return 0;
    }
    let e = (x.abs().log10() / 3.0).floor() as i32 * 3;
    e.clamp(-18, 12)
}

fn prefix_for(e: i32) -> &'static str {
    PREFIXES.iter().find(|(_, x)| *x == e).map_or("", |(p, _)| p)
}

/// Scales `values` to one common prefix chosen by the largest magnitude.
pub fn scale(values: &[f64], unit: &str) -> (Vec<f64>, String) {
    if !takes_prefix(unit) {
        return (values.iter().map(|x| round6(*x)).collect(), unit.to_string());
    }
    let peak = values.iter().map(|x| round6(*x).abs()).fold(0.0, f64::max);
    let e = eng_exponent(peak);
    let k = 10f64.powi(e);
    (
        values.iter().map(|x| round6(round6(*x) / k)).collect(),
        format!("{}{unit}", prefix_for(e)),
    )
}

/// Converts a reported value with a prefixed unit back to base units.
pub fn to_base(value: f64, unit: &str) -> f64 {
    if takes_prefix(unit) {
        return value;
    }
    for (p, e) in PREFIXES {
        if p.is_empty() {
            continue;
        }
        if let Some(base) = unit.strip_prefix(p) {
            if takes_prefix(base) {
                return value * 10f64.powi(e);
            }
        }
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_suffixes() {
        assert_eq!(parse_si("50k"), Some(50e3));
        assert!((parse_si("20f").unwrap() - 20e-15).abs() < 1e-27);
        assert!((parse_si("1.5ns").unwrap() - 1.5e-9).abs() < 1e-21);
        assert!((parse_si("10 uA").unwrap() - 10e-6).abs() < 1e-18);
        assert_eq!(parse_si("2e-3"), Some(2e-3));
        assert_eq!(parse_si("3V"), Some(3.0));
        assert!((parse_si("4.7kΩ").unwrap() - 4700.0).abs() < 1e-9);
        assert!((parse_si("5m").unwrap() - 5e-3).abs() < 1e-15);
        assert_eq!(parse_si("A + B"), None);
        assert_eq!(parse_si("x^2"), None);
        assert_eq!(parse_si("0x1f"), None);
        assert_eq!(parse_si("FF1"), None);
        assert_eq!(parse_si("12W5"), None);
    }

    #[test]
    fn engineering_output() {
        let (v, u) = scale(&[3.125e-9], "s");
        assert_eq!((v[0], u.as_str()), (3.125, "ns"));
        let (v, u) = scale(&[42666.666666], "Ω");
        assert_eq!((v[0], u.as_str()), (42.6667, "kΩ"));
        let (v, u) = scale(&[0.999_999_9e-6], "s");
        assert_eq!((v[0], u.as_str()), (1.0, "us"));
        let (v, u) = scale(&[0.52], "");
        assert_eq!((v[0], u.as_str()), (0.52, ""));
        assert!((to_base(3.125, "ns") - 3.125e-9).abs() < 1e-21);
        assert_eq!(to_base(5.0, "ms"), 5e-3);
        assert_eq!(to_base(5.0, "mystery"), 5.0);
    }

    #[test]
    fn text_keys_survive_expansion() {
        let mut v = serde_json::json!({
            "expr": "1", "vector": "0110", "launch": "5m",
            "skew": {"launch": ["1n", "2n"], "capture": ["9n", "15n"]}, "c": "20f"
        });
        expand_si(&mut v);
        assert_eq!(v["expr"], "1");
        assert_eq!(v["vector"], "0110");
        assert_eq!(v["launch"], "5m");
        assert_eq!(v["skew"]["launch"][1].as_f64(), Some(2e-9));
        assert!((v["c"].as_f64().unwrap() - 20e-15).abs() < 1e-27);
    }
}
