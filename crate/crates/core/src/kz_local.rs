//! Local horizontal sections of the KZ connection `dG = (A dz/z + B dz/(z-1)) G`.
//!
//! On the residue disk of 0 the canonical solution has logarithmic
//! asymptotics `G(z) ~ exp(log(z) A)`; its coefficients are polynomials in the
//! formal symbol `l = log(z)` over `Q_p[[z]]`, so one series serves every branch.
//! On a good residue disk the solution is a plain power series in `t = z - w`
//! normalized to the identity at the centre.

use crate::error::{Error, ForbiddenDisk, Result};
use crate::ncseries::GroupElement;
use crate::padics::{ilog, Branch, PadicNumber};
use crate::words::{Letter, Word};

/// Canonical solution on the disk of 0: `g_w = sum_{j,k} c[w][j][k] l^j z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries {
    p: u64,
    level: usize,
    order: usize,
    prec: i64,
    coeffs: Vec<Vec<Vec<PadicNumber>>>,
}

/// Solution `T` of `dT = Omega T` with `T(centre) = 1`, per word a series in `z - centre`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportSeries {
    centre: PadicNumber,
    level: usize,
    order: usize,
    prec: i64,
    coeffs: Vec<Vec<PadicNumber>>,
}

/// Smallest `K` with `k - n log_p(k) >= prec` for every `k > K`, so the
/// dropped tail is negligible on `|z| <= 1/p` once denominators are accounted for.
pub fn default_order(p: u64, level: usize, prec: i64) -> usize {
    let lp = (p as f64).ln();
    let n = level as f64;
    let mut k = level.max(1);
    loop {
        let kf = k as f64 + 1.0;
        if kf > n / lp && kf - n * kf.ln() / lp >= prec as f64 {
            return k;
        }
        k += 1;
    }
}

/// Extra digits carried so that division by integers up to `order` does not eat into `prec`.
fn working_precision(p: u64, level: usize, order: usize, prec: i64) -> i64 {
    prec + level as i64 * (ilog(p, order.max(1) as u64) + 1) + 2
}

fn check_params(p: u64, level: usize, order: usize, prec: i64) -> Result<()> {
    if p < 2 || level == 0 || order == 0 || prec <= 0 {
        return Err(Error::Invalid(format!(
            "need p >= 2 and positive n, K, N (got p={p}, n={level}, K={order}, N={prec})"
        )));
    }
    Ok(())
}

/// Builds the canonical disk-of-0 solution up to word length `level` and `z`-order `order`.
pub fn solve_local_kz(p: u64, level: usize, order: usize, prec: i64) -> Result<LogSeries> {
    check_params(p, level, order, prec)?;
    let wp = working_precision(p, level, order, prec);
    let count = Word::count_up_to(level);
    let mut coeffs: Vec<Vec<Vec<PadicNumber>>> = Vec::with_capacity(count);
    let mut one = vec![vec![PadicNumber::zero(p); order + 1]];
    one[0][0] = PadicNumber::one(p, wp);
    coeffs.push(one);

    for idx in 1..count {
        let word = Word::from_index(idx);
        let rest = word.suffix_from(1);
        let inner = &coeffs[rest.index()];
        let jmax = rest.len();
        // source[j][m]: coefficient of l^j z^m dz/z
        let source: Vec<Vec<PadicNumber>> = match word.first() {
            Some(Letter::A) => inner.clone(),
            _ => inner
                .iter()
                .map(|row| {
                    let mut out = vec![PadicNumber::zero(p); order + 1];
                    let mut acc = PadicNumber::zero(p);
                    for m in 1..=order {
                        acc = &acc + &row[m - 1];
                        out[m] = -&acc;
                    }
                    out
                })
                .collect(),
        };
        let mut out = vec![vec![PadicNumber::zero(p); order + 1]; word.len() + 1];
        for (j, row) in source.iter().enumerate().take(jmax + 1) {
            if !row[0].is_exact_zero() {
                out[j + 1][0] = &out[j + 1][0] + &row[0].div_int(j as i64 + 1)?;
            }
            for (m, s) in row.iter().enumerate().skip(1) {
                if s.is_exact_zero() {
                    continue;
                }
                // l^j z^m dz/z integrates to sum_i (-1)^i j!/(j-i)! l^(j-i) z^m / m^(i+1)
                let mut t = s.div_int(m as i64)?;
                for i in 0..=j {
                    out[j - i][m] = &out[j - i][m] + &t;
                    if i < j {
                        t = t.mul_int(-((j - i) as i64)).div_int(m as i64)?;
                    }
                }
            }
        }
        coeffs.push(out);
    }
    Ok(LogSeries {
        p,
        level,
        order,
        prec,
        coeffs,
    })
}

impl LogSeries {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Coefficient of `l^j z^k` in `g_w`.
    pub fn coeff(&self, w: &Word, j: usize, k: usize) -> Result<&PadicNumber> {
        if w.len() > self.level {
            return Err(Error::WordTooLong {
                len: w.len(),
                level: self.level,
            });
        }
        let rows = &self.coeffs[w.index()];
        if j >= rows.len() || k > self.order {
            return Err(Error::Invalid(format!("no term l^{j} z^{k} in g_{w}")));
        }
        Ok(&rows[j][k])
    }

    /// Substitutes `l = log_a(z)` and sums, for `0 < |z| < 1`.
    pub fn eval(&self, z: &PadicNumber, branch: &Branch) -> Result<GroupElement> {
        if z.prime() != self.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: z.prime(),
            });
        }
        if z.is_zero() {
            return Err(Error::Invalid("the tangential base point 0 itself".into()));
        }
        if z.valuation() < 1 {
            return Err(Error::Invalid(format!(
                "{z} is not in the punctured disk of 0"
            )));
        }
        let ell = z.log(branch)?;
        let mut zpow = Vec::with_capacity(self.order + 1);
        zpow.push(PadicNumber::one(self.p, z.abs_prec().max(self.prec)));
        for k in 1..=self.order {
            zpow.push(&zpow[k - 1] * z);
        }
        let mut lpow = vec![PadicNumber::one(self.p, ell.abs_prec().max(self.prec))];
        for j in 1..=self.level {
            lpow.push(&lpow[j - 1] * &ell);
        }
        let values = self
            .coeffs
            .iter()
            .map(|rows| {
                rows.iter()
                    .enumerate()
                    .fold(PadicNumber::zero(self.p), |acc, (j, row)| {
                        let s = row
                            .iter()
                            .zip(&zpow)
                            .filter(|(c, _)| !c.is_exact_zero())
                            .fold(PadicNumber::zero(self.p), |a, (c, zk)| &a + &(c * zk));
                        &acc + &(&s * &lpow[j])
                    })
                    .cap(self.prec)
            })
            .collect();
        GroupElement::from_dense(self.p, self.level, self.prec, values)
    }
}

/// Substitution of `log_a(z)` into the disk-of-0 solution.
pub fn eval_logseries(g: &LogSeries, z: &PadicNumber, branch: &Branch) -> Result<GroupElement> {
    g.eval(z, branch)
}

/// Parallel transport series around a centre in a good residue disk.
pub fn transport(
    centre: &PadicNumber,
    level: usize,
    order: usize,
    prec: i64,
) -> Result<TransportSeries> {
    let p = centre.prime();
    check_params(p, level, order, prec)?;
    if centre.valuation() > 0 {
        return Err(Error::Forbidden(ForbiddenDisk::Zero));
    }
    if centre.valuation() < 0 {
        return Err(Error::Forbidden(ForbiddenDisk::Infinity));
    }
    let wp = working_precision(p, level, order, prec);
    let one = PadicNumber::one(p, wp);
    let centre = centre.cap(wp);
    let cm1 = &centre - &one;
    if cm1.valuation() > 0 {
        return Err(Error::Forbidden(ForbiddenDisk::One));
    }
    // 1/(c + t) = sum (-1)^k t^k / c^(k+1)
    let geometric = |c: &PadicNumber| -> Result<Vec<PadicNumber>> {
        let inv = c.inverse()?;
        let step = -&inv;
        let mut out = Vec::with_capacity(order + 1);
        let mut t = inv;
        for _ in 0..=order {
            let next = &t * &step;
            out.push(t);
            t = next;
        }
        Ok(out)
    };
    let fa = geometric(&centre)?;
    let fb = geometric(&cm1)?;

    let count = Word::count_up_to(level);
    let mut coeffs: Vec<Vec<PadicNumber>> = Vec::with_capacity(count);
    let mut unit = vec![PadicNumber::zero(p); order + 1];
    unit[0] = one;
    coeffs.push(unit);
    for idx in 1..count {
        let word = Word::from_index(idx);
        let inner = &coeffs[word.suffix_from(1).index()];
        let f = match word.first() {
            Some(Letter::A) => &fa,
            _ => &fb,
        };
        let mut out = vec![PadicNumber::zero(p); order + 1];
        for m in 0..order {
            let mut s = PadicNumber::zero(p);
            for (i, c) in inner.iter().enumerate().take(m + 1) {
                if !c.is_exact_zero() {
                    s = &s + &(c * &f[m - i]);
                }
            }
            out[m + 1] = s.div_int(m as i64 + 1)?;
        }
        coeffs.push(out);
    }
    Ok(TransportSeries {
        centre,
        level,
        order,
        prec,
        coeffs,
    })
}

impl TransportSeries {
    pub fn centre(&self) -> &PadicNumber {
        &self.centre
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `t^k` in the entry for `w`.
    pub fn coeff(&self, w: &Word, k: usize) -> Result<&PadicNumber> {
        if w.len() > self.level {
            return Err(Error::WordTooLong {
                len: w.len(),
                level: self.level,
            });
        }
        self.coeffs[w.index()]
            .get(k)
            .ok_or_else(|| Error::Invalid(format!("no term t^{k}")))
    }

    /// Value at a point of the centre's residue disk.
    pub fn eval(&self, z: &PadicNumber) -> Result<GroupElement> {
        let p = self.centre.prime();
        let t = z - &self.centre;
        if t.valuation() < 1 {
            return Err(Error::Invalid(format!(
                "{z} is not in the residue disk of {}",
                self.centre
            )));
        }
        let values = self
            .coeffs
            .iter()
            .map(|c| {
                c.iter()
                    .rev()
                    .fold(PadicNumber::zero(p), |acc, x| &(&acc * &t) + x)
                    .cap(self.prec)
            })
            .collect();
        GroupElement::from_dense(p, self.level, self.prec, values)
    }
}
