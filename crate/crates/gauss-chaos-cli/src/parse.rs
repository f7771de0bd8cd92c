//! Small flag-value parsers: counts in scientific notation, sweep
//! grids, comma lists.

use crate::error::{msg, Result};

/// Sample counts accept plain integers and scientific notation (1e6).
pub fn count(s: &str) -> Result<usize> {
    if let Ok(n) = s.parse::<usize>() {
        if n == 0 {
            return Err(msg("count must be at least 1"));
        }
        return Ok(n);
    }
    let x: f64 = s
        .parse()
        .map_err(|_| msg(format!("invalid count \"{s}\"")))?;
    let r = x.round();
    if !x.is_finite() || r < 1.0 || r > 1e15 || (x - r).abs() > r * 1e-12 {
        return Err(msg(format!(
            "invalid count \"{s}\": need a positive integer"
        )));
    }
    Ok(r as usize)
}

/// `start:step:stop`, inclusive of `stop` up to a relative 1e-9 slack.
pub fn grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, step, stop] = parts.as_slice() else {
        return Err(msg(format!("invalid grid \"{s}\": want start:step:stop")));
    };
    let (start, step, stop): (f64, f64, f64) = match (start.parse(), step.parse(), stop.parse()) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        _ => return Err(msg(format!("invalid grid \"{s}\": non-numeric part"))),
    };
    if !step.is_finite() || step <= 0.0 || !start.is_finite() || !stop.is_finite() {
        return Err(msg(format!("invalid grid \"{s}\": need step > 0")));
    }
    let span = (stop - start) / step;
    if span < -1e-9 {
        return Err(msg(format!("invalid grid \"{s}\": stop before start")));
    }
    let len = (span + 1e-9).floor() as usize + 1;
    if len > 1_000_000 {
        return Err(msg(format!("grid \"{s}\" has {len} points, cap is 1e6")));
    }
    // Points come from index arithmetic, not cumulative addition, so the
    // grid is bitwise reproducible.
    Ok((0..len).map(|i| start + i as f64 * step).collect())
}

pub fn usize_list(s: &str, what: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| msg(format!("invalid {what} \"{s}\": bad entry \"{p}\"")))
        })
        .collect()
}

pub fn string_list(s: &str) -> Vec<String> {
    s.split(',').map(|p| p.trim().to_string()).collect()
}
