//! Parsing of time values: plain seconds in decimal or scientific notation,
//! optionally followed by `ns`, `us` (or `µs`), `ms` or `s`.

pub fn parse_seconds(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (number, scale) = [("ns", 1e9), ("us", 1e6), ("µs", 1e6), ("ms", 1e3), ("s", 1.0)]
        .iter()
        .find_map(|&(suffix, scale)| t.strip_suffix(suffix).map(|n| (n.trim_end(), scale)))
        .unwrap_or((t, 1.0));
    let value: f64 = number.parse().map_err(|_| format!("invalid time {s:?}"))?;
    if !value.is_finite() {
        return Err(format!("invalid time {s:?}"));
    }
    Ok(value / scale)
}

pub fn parse_state(s: &str) -> Result<bool, String> {
    match s.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(format!("state must be 0 or 1, got {other:?}")),
    }
}
