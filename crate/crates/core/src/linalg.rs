//! Dense linear algebra over `Q_p` with valuation-pivoted elimination.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padics::PadicNumber;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    pub valuation: i64,
}

/// Gauss-Jordan elimination choosing, at each step, the remaining entry of least
/// valuation. Entries indistinguishable from zero are never pivots.
pub fn eliminate(matrix: &[Vec<PadicNumber>]) -> Result<Vec<Pivot>> {
    let mut m = matrix.to_vec();
    let mut extra: Vec<Vec<PadicNumber>> = vec![Vec::new(); m.len()];
    pivot_loop(&mut m, &mut extra, usize::MAX)
}

fn pivot_loop(
    m: &mut [Vec<PadicNumber>],
    extra: &mut [Vec<PadicNumber>],
    max_steps: usize,
) -> Result<Vec<Pivot>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut used_rows = vec![false; rows];
    let mut used_cols = vec![false; cols];
    let mut pivots = Vec::new();
    while pivots.len() < max_steps {
        let mut best: Option<(usize, usize, i64)> = None;
        for (r, row) in m.iter().enumerate().filter(|(r, _)| !used_rows[*r]) {
            for (c, x) in row.iter().enumerate().filter(|(c, _)| !used_cols[*c]) {
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(_, _, v)| x.valuation() < v) {
                    best = Some((r, c, x.valuation()));
                }
            }
        }
        let Some((pr, pc, v)) = best else { break };
        used_rows[pr] = true;
        used_cols[pc] = true;
        pivots.push(Pivot {
            row: pr,
            col: pc,
            valuation: v,
        });
        let pivot_row = m[pr].clone();
        let pivot_extra = extra[pr].clone();
        for r in 0..rows {
            if r == pr || m[r][pc].is_exact_zero() {
                continue;
            }
            let f = m[r][pc].checked_div(&pivot_row[pc])?;
            for c in 0..cols {
                if !pivot_row[c].is_exact_zero() {
                    m[r][c] = &m[r][c] - &(&f * &pivot_row[c]);
                }
            }
            m[r][pc] = PadicNumber::zero(f.prime());
            for (x, y) in extra[r].iter_mut().zip(&pivot_extra) {
                *x = &*x - &(&f * y);
            }
        }
    }
    Ok(pivots)
}

/// Least-valuation solution of the overdetermined system `M x = b` on a maximal
/// set of pivot rows, together with the residual `M x - b` on every row.
pub fn solve(
    matrix: &[Vec<PadicNumber>],
    rhs: &[PadicNumber],
) -> Result<(Vec<PadicNumber>, Vec<PadicNumber>)> {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut m = matrix.to_vec();
    let mut extra: Vec<Vec<PadicNumber>> = rhs.iter().map(|b| vec![b.clone()]).collect();
    let pivots = pivot_loop(&mut m, &mut extra, cols)?;
    if pivots.len() < cols {
        return Err(Error::PrecisionExhausted(format!(
            "system has rank {} < {cols} unknowns",
            pivots.len()
        )));
    }
    let p = rhs[0].prime();
    let mut x = vec![PadicNumber::zero(p); cols];
    for pv in &pivots {
        x[pv.col] = extra[pv.row][0].checked_div(&m[pv.row][pv.col])?;
    }
    let residual = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| row.iter().zip(&x).fold(-b, |acc, (a, xi)| &acc + &(a * xi)))
        .collect();
    Ok((x, residual))
}

/// A non-zero vector `k` with `M k = 0`, from the first non-pivot column; `None` at full column rank.
pub fn kernel_vector(matrix: &[Vec<PadicNumber>]) -> Result<Option<Vec<PadicNumber>>> {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut m = matrix.to_vec();
    let mut extra: Vec<Vec<PadicNumber>> = vec![Vec::new(); m.len()];
    let pivots = pivot_loop(&mut m, &mut extra, usize::MAX)?;
    let Some(free) = (0..cols).find(|c| pivots.iter().all(|pv| pv.col != *c)) else {
        return Ok(None);
    };
    let p = matrix[0][0].prime();
    let prec = matrix
        .iter()
        .flatten()
        .map(PadicNumber::abs_prec)
        .min()
        .unwrap_or(1);
    let mut k = vec![PadicNumber::zero(p); cols];
    k[free] = PadicNumber::one(p, prec);
    for pv in &pivots {
        k[pv.col] = -&m[pv.row][free].checked_div(&m[pv.row][pv.col])?;
    }
    Ok(Some(k))
}
