//! Plain-text LP export in the CPLEX LP file format.

use std::fmt::Write;

use super::model::LpModel;

/// 17 significant digits, enough to round-trip any `f64`.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn term(out: &mut String, coef: f64, name: &str) {
    let sign = if coef < 0.0 { '-' } else { '+' };
    let _ = write!(out, " {sign} {} {name}", num(coef.abs()));
}

/// Renders the split model: variables `xp_i_j`, `xm_i_j` for the positive
/// and negative parts of `H[i,j]`, all bounded below by zero.
pub fn export_lp(model: &LpModel) -> String {
    let names: Vec<(String, String)> = model
        .var_map
        .iter()
        .map(|&(i, j)| (format!("xp_{i}_{j}"), format!("xm_{i}_{j}")))
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ {} model: m={} n={} r={} vars={} rows={}",
        model.kind.name(),
        model.m,
        model.n,
        model.r,
        2 * model.num_vars(),
        model.num_rows()
    );
    out.push_str("Minimize\n obj:");
    for ((p, m), &w) in names.iter().zip(&model.objective) {
        term(&mut out, w, p);
        term(&mut out, w, m);
    }
    out.push_str("\nSubject To\n");
    for (i, &rhs) in model.eq_rhs.iter().enumerate() {
        let _ = write!(out, " c{i}:");
        for ((p, m), &coef) in names.iter().zip(model.eq_matrix.row(i)) {
            if coef != 0.0 {
                term(&mut out, coef, p);
                term(&mut out, -coef, m);
            }
        }
        let _ = writeln!(out, " = {}", num(rhs));
    }
    out.push_str("Bounds\n");
    for (p, m) in &names {
        let _ = writeln!(out, " {p} >= 0\n {m} >= 0");
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{DenseMatrix, ToleranceConfig};
    use crate::lp::build_p1;

    #[test]
    fn identity_export_shape() {
        let model = build_p1(&DenseMatrix::identity(1), &ToleranceConfig::default()).unwrap();
        let text = export_lp(&model);
        assert!(text.contains("Minimize\n obj: + 1.0000000000000000e0 xp_0_0 + 1.0000000000000000e0 xm_0_0"));
        assert!(text.contains(" c0: + 1.0000000000000000e0 xp_0_0 - 1.0000000000000000e0 xm_0_0 = 1.0000000000000000e0"));
        assert!(text.trim_end().ends_with("End"));
    }
}
