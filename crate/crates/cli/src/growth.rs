use std::fmt::Write as _;
use std::path::Path;

use pencil_resolvent::resolvent::LaurentExpansion;
use pencil_resolvent::Error;

use crate::error::{io_error, CliError};

pub const HEADER: &str = "j,norm_fro,root_rate";

/// One row per stored coefficient: j, |R_j|_F and |R_j|^(1/|j|) (NaN at
/// j = 0), 17 significant digits, LF line endings.
pub fn growth_csv(exp: &LaurentExpansion) -> Result<String, CliError> {
    if exp.is_empty() {
        return Err(Error::EmptyExpansion.into());
    }
    let mut out = String::from(HEADER);
    out.push('\n');
    for (j, rj) in exp.iter() {
        let norm = rj.norm();
        let root = if j == 0 { f64::NAN } else { norm.powf(1.0 / j.unsigned_abs() as f64) };
        let _ = writeln!(out, "{j},{norm:.16e},{root:.16e}");
    }
    Ok(out)
}

pub fn emit_growth_csv(exp: &LaurentExpansion, path: &Path) -> Result<(), CliError> {
    let text = growth_csv(exp)?;
    std::fs::write(path, text).map_err(io_error(path))
}
