//! Flag value parsers and the key=value config format.

use std::collections::BTreeMap;

use emgfe::constants::NM2_PER_MM2;
use emgfe::extract::VtGrid;

/// Area with an explicit unit suffix, returned in nm². A bare number is nm².
pub fn area_nm2(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (num, scale) = if let Some(n) = s.strip_suffix("mm2") {
        (n, NM2_PER_MM2)
    } else if let Some(n) = s.strip_suffix("nm2") {
        (n, 1.0)
    } else {
        (s, 1.0)
    };
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not an area (expected e.g. 0.92mm2 or 8e6nm2)"))?;
    Ok(v * scale)
}

/// `N` for an automatic grid, or a comma list of voltages.
pub fn vt_grid(s: &str) -> Result<VtGrid, String> {
    if !s.contains(',') {
        if let Ok(n) = s.trim().parse::<usize>() {
            return Ok(VtGrid::Auto(n));
        }
    }
    let list = floats(s)?;
    Ok(VtGrid::Explicit(list))
}

pub fn floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{}' is not a number", t.trim()))
        })
        .collect()
}

pub fn pair(s: &str) -> Result<(f64, f64), String> {
    match floats(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("expected two comma-separated numbers, got '{s}'")),
    }
}

/// `lo,hi,n`.
pub fn voltage_range(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [lo, hi, n] => {
            let lo = lo.parse().map_err(|_| format!("bad low voltage '{lo}'"))?;
            let hi = hi.parse().map_err(|_| format!("bad high voltage '{hi}'"))?;
            let n = n.parse().map_err(|_| format!("bad point count '{n}'"))?;
            Ok((lo, hi, n))
        }
        _ => Err(format!("expected lo,hi,n, got '{s}'")),
    }
}

pub fn current_unit(s: &str) -> Result<f64, String> {
    match s {
        "A" => Ok(1.0),
        "mA" => Ok(1e-3),
        "uA" | "µA" => Ok(1e-6),
        "nA" => Ok(1e-9),
        "pA" => Ok(1e-12),
        _ => Err(format!("unknown current unit '{s}' (A, mA, uA, nA, pA)")),
    }
}

/// `key = value` lines; `#` starts a comment.
pub fn key_values(text: &str) -> Result<BTreeMap<String, f64>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| format!("line {}: '{}' is not a number", i + 1, v.trim()))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}
