use std::io::Write;

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Serialize)]
pub struct Record<'a, I: Serialize, R: Serialize> {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub inputs: &'a I,
    pub results: R,
    pub timings_ms: f64,
}

pub fn print_json<I: Serialize, R: Serialize>(command: &'static str, inputs: &I, results: R, timings_ms: f64) {
    let rec = Record { schema_version: SCHEMA_VERSION, command, inputs, results, timings_ms };
    let text = serde_json::to_string_pretty(&rec).expect("records serialize");
    // A closed pipe (e.g. `| head`) is not an error for us.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

/// `x` rounded to `digits` significant digits.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits.max(1) - 1, x);
    let exp = x.abs().log10().floor();
    if (-5.0..16.0).contains(&exp) {
        sci.parse::<f64>().map(|v| v.to_string()).unwrap_or(sci)
    } else {
        sci
    }
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn opt_num(v: Option<f64>, digits: usize) -> String {
    v.map(|x| sig(x, digits)).unwrap_or_default()
}

pub fn write_csv(header: &[&str], rows: &[Vec<String>]) -> Result<(), String> {
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    let result = std::iter::once(header.iter().map(|h| h.to_string()).collect::<Vec<_>>())
        .chain(rows.iter().cloned())
        .try_for_each(|r| w.write_record(&r))
        .and_then(|_| w.flush().map_err(csv::Error::from));
    match result {
        Err(e) if !matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe) => {
            Err(e.to_string())
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::sig;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(305.82623744231, 6), "305.826");
        assert_eq!(sig(0.000123456789, 3), "0.000123");
        assert_eq!(sig(2.0, 6), "2");
        assert_eq!(sig(1.23456e300, 4), "1.235e300");
        assert_eq!(sig(0.0, 6), "0");
    }
}
