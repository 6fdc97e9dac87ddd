use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::harness::ConvergenceReport;

pub const HEADER: &str = "scheme,level,h,rmse,wall_time_s";

/// Plain decimal with 17 significant digits; exact zero is written as `0`.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // log10 can land one below the true exponent right at a power of ten
    let digits = s.chars().filter(char::is_ascii_digit).skip_while(|&c| c == '0').count();
    if digits > 17 && decimals > 0 {
        let decimals = decimals - 1;
        return format!("{x:.decimals$}");
    }
    s
}

/// One row per `(scheme, level)` then one `RATE` row per scheme. LF endings.
pub fn render_csv(report: &ConvergenceReport) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for row in &report.rows {
        let wall = row.wall_time.map(format_sig17).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.scheme,
            row.level,
            format_sig17(row.h),
            format_sig17(row.rmse),
            wall
        );
    }
    for (scheme, fit) in &report.fits {
        match fit {
            Some(f) => {
                let _ = writeln!(out, "{scheme},RATE,,{},{}", format_sig17(f.rate), format_sig17(f.residual));
            }
            None => {
                let _ = writeln!(out, "{scheme},RATE,,,");
            }
        }
    }
    out
}

pub fn emit_csv(report: &ConvergenceReport, path: &Path) -> Result<()> {
    std::fs::write(path, render_csv(report))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_sig17(0.0), "0");
        assert_eq!(format_sig17(0.00390625), "0.0039062500000000000");
        assert_eq!(format_sig17(1.0), "1.0000000000000000");
        assert_eq!(format_sig17(1000.0), "1000.0000000000000");
        assert_eq!(format_sig17(0.1), "0.10000000000000001");
        assert_eq!(format_sig17(-2.5), "-2.5000000000000000");
        assert_eq!(format_sig17(123456789012345678.0), "123456789012345680");
        for x in [0.0017, 1.0 / 3.0, 6.02e-9, 0.9282] {
            assert_eq!(format_sig17(x).parse::<f64>().unwrap(), x);
        }
    }
}
