//! Gomory mixed-integer cuts read off an optimal basis.

use super::simplex::basis_inverse;
use super::{LinearProgram, LpSolution, LpStatus, Row, VarStatus, INT_TOL};

const MIN_FRAC: f64 = 0.005;
const COEF_TOL: f64 = 1e-9;
const MAX_CUTS: usize = 50;

fn is_integer(v: f64) -> bool {
    (v - v.round()).abs() <= INT_TOL
}

/// GMI cuts violated by `solution`, assuming every structural variable is
/// integer. Slacks of rows with integral data count as integer as well.
/// Returns nothing unless the solution is optimal with a fractional point.
pub fn gomory_cuts(lp: &LinearProgram, solution: &LpSolution) -> Vec<Row> {
    if solution.status != LpStatus::Optimal || solution.is_integral() {
        return Vec::new();
    }
    let Some((head, binv)) = basis_inverse(lp, &solution.basis) else {
        return Vec::new();
    };
    let n = lp.num_vars();
    let m = lp.num_rows();
    let status = &solution.basis.status;
    let x = &solution.values;
    let slack_value = |i: usize| lp.rows[i].rhs - lp.rows[i].activity(x);
    let slack_integral: Vec<bool> = lp
        .rows
        .iter()
        .map(|r| is_integer(r.rhs) && r.coeffs.iter().all(|&(_, a)| is_integer(a)))
        .collect();
    let (lower, upper): (Vec<f64>, Vec<f64>) = (0..n).map(|j| lp.bounds(j)).unzip();
    let bounds_integral = |j: usize| is_integer(lower[j]) && is_integer(upper[j]);

    let mut columns = vec![Vec::new(); n];
    for (i, row) in lp.rows.iter().enumerate() {
        for &(j, a) in &row.coeffs {
            columns[j].push((i, a));
        }
    }

    let mut cuts: Vec<(f64, Row)> = Vec::new();
    for (r, &basic) in head.iter().enumerate() {
        let value = if basic < n { x[basic] } else { slack_value(basic - n) };
        let integral_var = basic < n || slack_integral[basic - n];
        let f0 = value - value.floor();
        if !integral_var || f0 < MIN_FRAC || f0 > 1.0 - MIN_FRAC {
            continue;
        }
        let rho = &binv[r * m..(r + 1) * m];

        // cut in the shifted nonbasics t_j >= 0: sum pi_j t_j >= 1
        let mut structural = vec![0.0; n];
        let mut slack = vec![0.0; m];
        let mut constant = 1.0;
        let mut usable = true;
        for j in 0..n + m {
            let st = status[j];
            if st == VarStatus::Basic {
                continue;
            }
            let alpha = if j < n {
                columns[j].iter().map(|&(i, a)| a * rho[i]).sum::<f64>()
            } else {
                rho[j - n]
            };
            if alpha.abs() < COEF_TOL {
                continue;
            }
            let at_upper = st == VarStatus::AtUpper;
            let abar = if at_upper { -alpha } else { alpha };
            let integer_col = if j < n { bounds_integral(j) } else { slack_integral[j - n] };
            if j < n && lower[j] == upper[j] {
                // fixed columns contribute a constant only
                continue;
            }
            let pi = if integer_col {
                let fj = abar - abar.floor();
                (fj / f0).min((1.0 - fj) / (1.0 - f0))
            } else if abar > 0.0 {
                abar / f0
            } else {
                -abar / (1.0 - f0)
            };
            if !pi.is_finite() {
                usable = false;
                break;
            }
            if pi.abs() < COEF_TOL {
                continue;
            }
            // back to original variables: t = x - lo or t = hi - x (slacks sit at 0)
            if j < n {
                if at_upper {
                    structural[j] -= pi;
                    constant -= pi * upper[j];
                } else {
                    structural[j] += pi;
                    constant += pi * lower[j];
                }
            } else {
                slack[j - n] += pi;
            }
        }
        if !usable {
            continue;
        }
        // s_i = b_i - a_i x
        for (i, &p) in slack.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            constant -= p * lp.rows[i].rhs;
            for &(j, a) in &lp.rows[i].coeffs {
                structural[j] -= p * a;
            }
        }
        // sum structural x >= constant  ->  -structural x <= -constant
        let coeffs: Vec<(usize, f64)> = structural
            .iter()
            .enumerate()
            .filter(|(_, a)| a.abs() > COEF_TOL)
            .map(|(j, &a)| (j, -a))
            .collect();
        if coeffs.is_empty() {
            continue;
        }
        let row = Row::new(coeffs, -constant);
        let violation = row.violation(x);
        if violation > 1e-6 {
            cuts.push((violation, row));
        }
    }
    cuts.sort_by(|a, b| b.0.total_cmp(&a.0));
    cuts.truncate(MAX_CUTS);
    cuts.into_iter().map(|(_, r)| r).collect()
}
