use spin_coulomb::radial_spectra::{kcr_table, z_bound, KCR_TABLE_Z};

use crate::args::{parse_f64_list, parse_int_list, KcrArgs, ZmaxArgs};
use crate::table::{Cell, Table};
use crate::{CliError, Report};

fn check_alpha(alpha: f64) -> Result<(), CliError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("alpha = {alpha} must lie in (0, 1)")))
    }
}

pub fn kcr(a: &KcrArgs) -> Result<Report, CliError> {
    check_alpha(a.alpha)?;
    let upper = (2.0 / a.alpha).floor() as i64;
    let zs: Vec<u32> = match &a.z {
        Some(s) => {
            let v = parse_int_list(s, "Z")?;
            if let Some(bad) = v.iter().find(|&&z| z < 1 || z >= upper) {
                return Err(CliError::Config(format!("Z = {bad} outside [1, {upper})")));
            }
            v.into_iter().map(|z| z as u32).collect()
        }
        None => KCR_TABLE_Z.to_vec(),
    };
    let mut t = Table::new("kcr-table", &["Z[1]", "k_cr[1]", "Z_bound_check[1]", "status"]);
    t.note("k_cr = 2/(Z alpha) - 1 - Z alpha; Z_bound_check inverts it through Z_max(x = k_cr)");
    for (z, res) in kcr_table(&zs, a.alpha) {
        match res {
            Ok(k) => t.push(vec![Cell::Int(z as i64), Cell::Num(k), Cell::Num(z_bound(k, a.alpha)), Cell::text("ok")]),
            Err(e) => t.push(vec![Cell::Int(z as i64), Cell::Empty, Cell::Empty, Cell::text(format!("no critical coupling: {e}"))]),
        }
    }
    t.summarize("rows", zs.len() as i64);
    Ok(Report { table: t, failure: None })
}

pub fn zmax(a: &ZmaxArgs) -> Result<Report, CliError> {
    check_alpha(a.alpha)?;
    let xs = parse_f64_list(&a.x, "x")?;
    let mut t = Table::new("zmax", &["x[1]", "Z_max[1]", "Z_max_integer[1]"]);
    t.note("x = ek/c; Z_max = (sqrt((x+1)^2 + 8) - (x+1)) / (2 alpha)");
    for x in xs {
        let z = z_bound(x, a.alpha);
        let zi = z.ceil() as i64 - 1;
        t.push(vec![Cell::Num(x), Cell::Num(z), Cell::Int(zi.max(0))]);
    }
    Ok(Report { table: t, failure: None })
}
