use statrs::function::gamma::gamma_ur;

use crate::data::ContingencyTable;
use crate::error::{arg, Result};

/// Outcome of a (conditional) chi-square independence test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSqResult {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
}

/// Upper tail of the chi-square distribution, `1 - P(dof/2, x/2)`.
pub fn chi_sq_pvalue(x: f64, dof: u64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return arg(format!("chi-square statistic must be non-negative, got {x}"));
    }
    if dof == 0 {
        return arg("chi-square degrees of freedom must be at least 1");
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(gamma_ur(dof as f64 / 2.0, x / 2.0).clamp(0.0, 1.0))
}

/// Pearson chi-square test of independence, summed over strata.
///
/// Within each stratum, rows and columns with zero marginal are dropped from
/// the degrees of freedom. Cells with zero expected count contribute nothing.
/// When no stratum has positive degrees of freedom the statistic is 0 and the
/// p-value 1.
pub fn chi_sq_test(table: &ContingencyTable) -> ChiSqResult {
    let (r, c, _) = table.dims();
    let mut statistic = 0.0;
    let mut dof = 0u64;
    let mut terms = Vec::with_capacity(r * c);
    for s in table.strata() {
        let total = s.total();
        if total == 0 {
            continue;
        }
        let rows: Vec<u64> = (0..r).map(|i| s.counts[i * c..(i + 1) * c].iter().sum()).collect();
        let cols: Vec<u64> = (0..c).map(|j| (0..r).map(|i| s.counts[i * c + j]).sum()).collect();
        let r_eff = rows.iter().filter(|&&x| x > 0).count() as u64;
        let c_eff = cols.iter().filter(|&&x| x > 0).count() as u64;
        dof += (r_eff - 1) * (c_eff - 1);
        terms.clear();
        for i in 0..r {
            for j in 0..c {
                let expected = rows[i] as f64 * cols[j] as f64 / total as f64;
                if expected > 0.0 {
                    let d = s.counts[i * c + j] as f64 - expected;
                    terms.push(d * d / expected);
                }
            }
        }
        // order-free summation keeps the statistic identical when the two
        // tested variables are swapped
        terms.sort_by(f64::total_cmp);
        statistic += terms.iter().sum::<f64>();
    }
    if dof == 0 {
        return ChiSqResult { statistic: 0.0, dof: 0, p_value: 1.0 };
    }
    let p_value = chi_sq_pvalue(statistic, dof).unwrap_or(1.0);
    ChiSqResult { statistic, dof, p_value }
}
