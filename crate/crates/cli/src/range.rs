//! `start:stop:step` ranges, inclusive of `stop`.

pub fn parse_u32(spec: &str) -> Result<Vec<u32>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.trim().parse::<u32>().map_err(|e| format!("bad integer '{s}' in range '{spec}': {e}"));
    let (start, stop, step) = match parts.as_slice() {
        [a] => (num(a)?, num(a)?, 1),
        [a, b] => (num(a)?, num(b)?, 1),
        [a, b, s] => (num(a)?, num(b)?, num(s)?),
        _ => return Err(format!("range '{spec}' must look like start:stop[:step]")),
    };
    if step == 0 {
        return Err(format!("range '{spec}' has a zero step"));
    }
    let out: Vec<u32> = (start..=stop).step_by(step as usize).collect();
    if out.is_empty() {
        return Err(format!("range '{spec}' is empty"));
    }
    Ok(out)
}

pub fn parse_f64(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("bad number '{s}' in range '{spec}': {e}"));
    let (start, stop, step) = match parts.as_slice() {
        [a] => {
            let v = num(a)?;
            return Ok(vec![v]);
        }
        [a, b, s] => (num(a)?, num(b)?, num(s)?),
        _ => return Err(format!("range '{spec}' must look like value or start:stop:step")),
    };
    if !(step > 0.0) || !step.is_finite() || !start.is_finite() || !stop.is_finite() {
        return Err(format!("range '{spec}' needs finite bounds and a positive step"));
    }
    if stop < start {
        return Err(format!("range '{spec}' is empty"));
    }
    let m = ((stop - start) / step + 1e-9).floor() as usize;
    // Snap to 12 significant digits so 0.1:0.9:0.1 yields 0.3, not 0.30000000000000004.
    Ok((0..=m)
        .map(|i| {
            let v = start + i as f64 * step;
            format!("{v:.11e}").parse().unwrap_or(v)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_ranges() {
        assert_eq!(parse_u32("2:50:2").unwrap().len(), 25);
        assert_eq!(parse_u32("3:5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_u32("7").unwrap(), vec![7]);
        assert!(parse_u32("5:3").is_err());
        assert!(parse_u32("1:5:0").is_err());
        assert!(parse_u32("a:b").is_err());
    }

    #[test]
    fn float_ranges() {
        let v = parse_f64("0.1:0.9:0.1").unwrap();
        assert_eq!(v.len(), 9);
        assert_eq!(v[2], 0.3);
        assert_eq!(v[8], 0.9);
        assert_eq!(parse_f64("-0.5").unwrap(), vec![-0.5]);
        assert!(parse_f64("0.9:0.1:0.1").is_err());
        assert!(parse_f64("0.1:0.9:-0.1").is_err());
        assert!(parse_f64("0.1:0.9").is_err());
    }
}
