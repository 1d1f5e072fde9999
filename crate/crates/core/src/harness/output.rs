use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::dynamics::TimeSeries;
use crate::error::Result;

const SIG_DIGITS: usize = 12;

/// Formats `v` with `sig` significant digits, like C's `%.{sig}g`.
pub fn format_sig(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `tau,<channel>...` with one row per sample.
pub fn write_csv(path: &Path, series: &TimeSeries) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let channels: Vec<(&str, &[f64])> = series.channels().collect();
    write!(w, "tau")?;
    for (name, _) in &channels {
        write!(w, ",{name}")?;
    }
    writeln!(w)?;
    for (i, tau) in series.taus().iter().enumerate() {
        write!(w, "{}", format_sig(*tau, SIG_DIGITS))?;
        for (_, values) in &channels {
            write!(w, ",{}", format_sig(values[i], SIG_DIGITS))?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}
