//! Numeric parsing and formatting shared by flags, config files and output.

/// Shortest decimal that parses back to the same `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Parses a real number, accepting a trailing `pi` multiplier:
/// `0.25pi`, `pi`, `-2pi`, `1.5e-3`.
pub fn parse_real(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let lower = t.to_ascii_lowercase();
    let value = if let Some(prefix) = lower.strip_suffix("pi") {
        let prefix = prefix.trim().trim_end_matches('*').trim();
        let k = match prefix {
            "" | "+" => 1.0,
            "-" => -1.0,
            p => p
                .parse::<f64>()
                .map_err(|_| format!("`{text}` is not a number"))?,
        };
        k * std::f64::consts::PI
    } else {
        lower
            .parse::<f64>()
            .map_err(|_| format!("`{text}` is not a number"))?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{text}` is not finite"))
    }
}
