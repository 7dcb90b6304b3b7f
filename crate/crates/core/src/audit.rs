//! Dimension bookkeeping for the Chabauty-Kim method over `Z[1/S]`, rank
//! certificates for the Albanese coordinates, and per-disk zero counts.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius::AlbaneseMap;
use crate::linalg::{eliminate, kernel_vector, Pivot};
use crate::padics::{vp_int, PadicNumber, EXACT};
use crate::words::{witt_rank, Word};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    /// `R + r_3 + r_5 + ...` over odd indices `3 <= m <= n`.
    #[default]
    Odd,
    /// The odd sum plus a final even-index term `r_(2 floor(n/2))`.
    Literal,
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn validate_primes(s: &[u64]) -> Result<()> {
    match s.iter().find(|&&q| !is_prime(q)) {
        Some(q) => Err(Error::Invalid(format!("{q} is not prime"))),
        None => Ok(()),
    }
}

/// `dim [pi_DR]_n = r_1 + ... + r_n`.
pub fn dim_dr(n: u32) -> u64 {
    (1..=n).map(witt_rank).sum()
}

/// Upper bound for the Selmer-side dimension at level `n`, with `R = 2|S|`.
pub fn soule_bound(s: &[u64], n: u32) -> u64 {
    soule_bound_with(s, n, BoundMode::Odd)
}

pub fn soule_bound_with(s: &[u64], n: u32, mode: BoundMode) -> u64 {
    let distinct: BTreeSet<_> = s.iter().collect();
    let odd: u64 = (3..=n).step_by(2).map(witt_rank).sum();
    let even = match mode {
        BoundMode::Literal if n >= 2 => witt_rank(2 * (n / 2)),
        _ => 0,
    };
    2 * distinct.len() as u64 + odd + even
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRow {
    pub n: u32,
    pub r_n: u64,
    pub dim: u64,
    pub bound: u64,
}

/// Least `n >= from` with `bound(n) < dim(n)`.
fn first_level(s: &[u64], mode: BoundMode, from: u32) -> (u32, u64, u64) {
    (from..)
        .map(|n| (n, dim_dr(n), soule_bound_with(s, n, mode)))
        .find(|&(_, d, b)| b < d)
        .expect("dim grows faster than the bound")
}

pub fn minimal_level(s: &[u64]) -> (u32, u64, u64) {
    first_level(s, BoundMode::Odd, 1)
}

pub fn minimal_level_with(s: &[u64], mode: BoundMode) -> (u32, u64, u64) {
    first_level(s, mode, 1)
}

/// Least prime `p` outside `S` with `(p - 1)/2 >= n + 1`.
pub fn admissible_prime(s: &[u64], n: u32) -> u64 {
    let need = 2 * (n as u64 + 1) + 1;
    (need..)
        .find(|&p| is_prime(p) && !s.contains(&p))
        .expect("infinitely many primes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub s: Vec<u64>,
    pub mode: BoundMode,
    pub table: Vec<LevelRow>,
    pub n_star: u32,
    pub p_star: u64,
    /// `dim - bound` at `n_star`.
    pub margin: u64,
    /// First level `>= 2` with the strict inequality, when `n_star = 1`.
    pub first_nonabelian: Option<(u32, u64)>,
    pub caveat: Option<String>,
}

pub fn audit(s: &[u64], mode: BoundMode) -> Result<AuditReport> {
    validate_primes(s)?;
    let s: Vec<u64> = s
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let (n_star, dim, bound) = minimal_level_with(&s, mode);
    let p_star = admissible_prime(&s, n_star);
    let first_nonabelian = (n_star == 1).then(|| {
        let (n, _, _) = first_level(&s, mode, 2);
        (n, admissible_prime(&s, n))
    });
    let last = first_nonabelian.map_or(n_star, |(n, _)| n).max(n_star);
    let table = (1..=last)
        .map(|n| LevelRow {
            n,
            r_n: witt_rank(n),
            dim: dim_dr(n),
            bound: soule_bound_with(&s, n, mode),
        })
        .collect();
    let caveat = (n_star == 1)
        .then(|| "n* = 1 is the abelian level; the inequality there is degenerate".to_string());
    Ok(AuditReport {
        s,
        mode,
        table,
        n_star,
        p_star,
        margin: dim - bound,
        first_nonabelian,
        caveat,
    })
}

impl AuditReport {
    /// Plain-text table.
    pub fn render(&self) -> String {
        let set = if self.s.is_empty() {
            "{}".to_string()
        } else {
            format!(
                "{{{}}}",
                self.s
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        };
        let mut out = format!("S = {set}, R = {}\n", 2 * self.s.len());
        out.push_str("  n   r_n   dim   bound\n");
        for row in &self.table {
            let mark = if row.bound < row.dim { "  <" } else { "" };
            out.push_str(&format!(
                "{:>3} {:>5} {:>5} {:>7}{mark}\n",
                row.n, row.r_n, row.dim, row.bound
            ));
        }
        out.push_str(&format!("n*={}, p*={}\n", self.n_star, self.p_star));
        if let Some((n, p)) = self.first_nonabelian {
            out.push_str(&format!("first level >= 2: n={n}, p={p}\n"));
        }
        if let Some(c) = &self.caveat {
            out.push_str(&format!("note: {c}\n"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub level: usize,
    pub points: Vec<PadicNumber>,
    pub columns: usize,
    pub rank: usize,
    pub full_rank: bool,
    pub pivots: Vec<Pivot>,
}

/// The matrix `alpha_w(UAlb(z_i))` over words of length at most `level`.
pub fn evaluation_matrix(
    map: &AlbaneseMap,
    points: &[PadicNumber],
    level: usize,
) -> Result<Vec<Vec<PadicNumber>>> {
    if level > map.gauge().level() {
        return Err(Error::WordTooLong {
            len: level,
            level: map.gauge().level(),
        });
    }
    let cols = Word::count_up_to(level);
    points
        .iter()
        .map(|z| Ok(map.value(z)?.coefficients()[..cols].to_vec()))
        .collect()
}

/// Rank of the evaluation matrix. Pivots of valuation `>= tol` are not trusted.
pub fn independence_rank(
    map: &AlbaneseMap,
    points: &[PadicNumber],
    level: usize,
    tol: i64,
) -> Result<IndependenceReport> {
    let m = evaluation_matrix(map, points, level)?;
    let pivots = eliminate(&m)?;
    if let Some(pv) = pivots.iter().find(|pv| pv.valuation >= tol) {
        return Err(Error::PrecisionExhausted(format!(
            "pivot at row {} has valuation {} >= {tol}",
            pv.row, pv.valuation
        )));
    }
    let columns = Word::count_up_to(level);
    Ok(IndependenceReport {
        level,
        points: points.to_vec(),
        columns,
        rank: pivots.len(),
        full_rank: pivots.len() == columns,
        pivots,
    })
}

/// Random points of the supported domain: the punctured disk of 0 and every good disk,
/// each with `prec` digits of relative precision.
pub fn sample_points(p: u64, count: usize, seed: u64, prec: i64) -> Vec<PadicNumber> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let residues: Vec<u64> = std::iter::once(0).chain(2..p).collect();
    (0..count)
        .map(|i| {
            let r = residues[i % residues.len()];
            let lift = rng.gen_range(1..1_000_000i64);
            let z = if r == 0 {
                lift * p as i64
            } else {
                r as i64 + p as i64 * lift
            };
            // exact integers: keep `prec` digits of the unit part
            PadicNumber::from_int(p, z, prec + vp_int(p, z))
        })
        .collect()
}

/// Strassman bound: the largest index whose coefficient has minimal valuation.
///
/// Coefficients of valuation `>= tol` count as zero. The series must visibly
/// converge: past the dominant index the trailing quarter must be strictly smaller.
pub fn strassman_count(coeffs: &[PadicNumber], tol: i64) -> Result<usize> {
    let v: Vec<i64> = coeffs
        .iter()
        .map(|c| {
            if c.valuation() >= tol {
                EXACT
            } else {
                c.valuation()
            }
        })
        .collect();
    let min = *v.iter().min().ok_or(Error::NoConvergence)?;
    if min == EXACT {
        return Err(Error::Invalid(
            "series vanishes identically to tolerance".into(),
        ));
    }
    let k = v.iter().rposition(|&x| x == min).expect("minimum attained");
    if v.len() == 1 || (k + 1 < v.len() && v[k + 1..].iter().all(|&x| x == EXACT)) {
        return Ok(k);
    }
    let tail = (v.len() / 4).max(1);
    if k >= v.len() - tail || v[v.len() - tail..].iter().min().copied().unwrap_or(EXACT) <= min {
        return Err(Error::NoConvergence);
    }
    Ok(k)
}

fn is_s_unit(x: &BigRational, s: &[u64]) -> bool {
    if x.is_zero() {
        return false;
    }
    let strip = |n: &BigInt| {
        let mut n = n.abs();
        for &q in s {
            let q = BigInt::from(q);
            while n.is_multiple_of(&q) {
                n /= &q;
            }
        }
        n.is_one()
    };
    strip(x.numer()) && strip(x.denom())
}

/// Solutions of the unit equation: `z` and `z - 1` both `S`-units, by exhaustive
/// search over `z = +-prod q^e` with `|e| <= max_exp`. Sorted.
pub fn s_integral_points(s: &[u64], max_exp: u32) -> Result<Vec<BigRational>> {
    validate_primes(s)?;
    let s: Vec<u64> = s
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut units = vec![BigRational::one()];
    for &q in &s {
        let qr = BigRational::from_integer(BigInt::from(q));
        let mut next = Vec::new();
        for u in &units {
            for e in -(max_exp as i32)..=max_exp as i32 {
                next.push(u * qr.pow(e));
            }
        }
        units = next;
    }
    let one = BigRational::one();
    let mut out: BTreeSet<BigRational> = BTreeSet::new();
    for u in units {
        for z in [u.clone(), -u] {
            if z != one && is_s_unit(&(&z - &one), &s) {
                out.insert(z);
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskCount {
    pub residue: u64,
    pub points_in_disk: usize,
    pub zeros: Option<usize>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FinitenessReport {
    pub audit: AuditReport,
    pub p: u64,
    pub level: usize,
    pub points: Vec<String>,
    /// Points outside the good disks, which the evaluation cannot reach.
    pub skipped: Vec<String>,
    pub rank: usize,
    pub columns: usize,
    /// Coefficients of a functional vanishing at every point, by word.
    pub kappa: Option<Vec<(String, PadicNumber)>>,
    pub disks: Vec<DiskCount>,
    pub vacuous: bool,
}

fn to_padic(p: u64, x: &BigRational, prec: i64) -> Result<PadicNumber> {
    PadicNumber::from_rational(p, x.numer(), x.denom(), prec)
}

/// End-to-end finiteness demonstration over `Z[1/S]` at level `level`.
pub fn finiteness_demo(
    s: &[u64],
    map: &AlbaneseMap,
    level: usize,
    max_exp: u32,
) -> Result<FinitenessReport> {
    let p = map.gauge().prime();
    if s.contains(&p) {
        return Err(Error::Invalid(format!("p = {p} must not lie in S")));
    }
    let report = audit(s, BoundMode::Odd)?;
    let prec = map.gauge().prec();
    let sols = s_integral_points(s, max_exp)?;
    let mut points = Vec::new();
    let mut names = Vec::new();
    let mut skipped = Vec::new();
    for x in &sols {
        let z = to_padic(p, x, prec)?;
        let good = z.valuation() == 0 && z.residue_mod_p().is_some_and(|r| r >= 2);
        if good {
            points.push(z);
            names.push(x.to_string());
        } else {
            skipped.push(x.to_string());
        }
    }
    let columns = Word::count_up_to(level);
    if points.is_empty() {
        return Ok(FinitenessReport {
            audit: report,
            p,
            level,
            points: names,
            skipped,
            rank: 0,
            columns,
            kappa: None,
            disks: Vec::new(),
            vacuous: true,
        });
    }
    let m = evaluation_matrix(map, &points, level)?;
    let rank = eliminate(&m)?.len();
    let kappa = kernel_vector(&m)?;
    let mut disks = Vec::new();
    if let Some(k) = &kappa {
        let tol = prec - 2;
        for r in 2..p {
            let series = map.functional_series(r, k)?;
            // rescale t = p s onto the closed unit disk
            let scaled: Vec<PadicNumber> = series
                .iter()
                .enumerate()
                .map(|(i, c)| c.shift(i as i64))
                .collect();
            let in_disk = points
                .iter()
                .filter(|z| z.residue_mod_p() == Some(r))
                .count();
            let (zeros, error) = match strassman_count(&scaled, tol) {
                Ok(c) => (Some(c), None),
                Err(e) => (None, Some(e.to_string())),
            };
            disks.push(DiskCount {
                residue: r,
                points_in_disk: in_disk,
                zeros,
                error,
            });
        }
    }
    Ok(FinitenessReport {
        audit: report,
        p,
        level,
        points: names,
        skipped,
        rank,
        columns,
        kappa: kappa.map(|k| {
            k.into_iter()
                .enumerate()
                .map(|(i, c)| (Word::from_index(i).to_string(), c))
                .collect()
        }),
        disks,
        vacuous: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{compute_gauge, default_gauge_order};
    use crate::padics::Branch;
    use std::sync::OnceLock;

    const P: u64 = 7;
    const N: i64 = 20;

    fn map2() -> &'static AlbaneseMap {
        static M: OnceLock<AlbaneseMap> = OnceLock::new();
        M.get_or_init(|| {
            let g = compute_gauge(P, 2, default_gauge_order(P), N).unwrap();
            AlbaneseMap::new(g, Branch::standard(P)).unwrap()
        })
    }

    fn q(x: i64) -> PadicNumber {
        PadicNumber::from_int(P, x, N)
    }

    #[test]
    fn bound_examples() {
        assert_eq!(soule_bound(&[], 4), 2);
        assert_eq!(soule_bound(&[], 2), 0);
        assert_eq!(soule_bound(&[2, 3, 5], 5), 14);
        assert_eq!(soule_bound_with(&[], 4, BoundMode::Literal), 2 + 3);
        assert_eq!(soule_bound_with(&[], 1, BoundMode::Literal), 0);
    }

    #[test]
    fn table_deltas() {
        for n in 2..=12 {
            assert_eq!(dim_dr(n) - dim_dr(n - 1), witt_rank(n));
            let delta = soule_bound(&[2, 3], n) - soule_bound(&[2, 3], n - 1);
            let expected = if n % 2 == 1 && n >= 3 {
                witt_rank(n)
            } else {
                0
            };
            assert_eq!(delta, expected);
        }
    }

    #[test]
    fn minimal_levels() {
        assert_eq!(minimal_level(&[]), (1, 2, 0));
        assert_eq!(admissible_prime(&[], 1), 5);
        assert_eq!(minimal_level(&[2]), (2, 3, 2));
        assert_eq!(admissible_prime(&[2], 2), 7);
        assert_eq!(minimal_level(&[2, 3, 5]), (6, 23, 14));
        assert_eq!(admissible_prime(&[2, 3, 5], 6), 17);
        assert_eq!(admissible_prime(&[17], 6), 19);
    }

    #[test]
    fn minimality_recheck() {
        for s in [
            vec![],
            vec![2],
            vec![2, 3],
            vec![2, 3, 5],
            vec![2, 3, 5, 7, 11],
        ] {
            let (n, d, b) = minimal_level(&s);
            assert!(b < d);
            for m in 1..n {
                assert!(soule_bound(&s, m) >= dim_dr(m));
            }
        }
    }

    #[test]
    fn audit_report_for_empty_set() {
        let r = audit(&[], BoundMode::Odd).unwrap();
        assert_eq!((r.n_star, r.p_star), (1, 5));
        assert!(r.caveat.is_some());
        assert_eq!(r.first_nonabelian, Some((2, 7)));
        let r = audit(&[2, 3, 5], BoundMode::Odd).unwrap();
        assert!(r.render().contains("n*=6, p*=17"));
        assert!(audit(&[4], BoundMode::Odd).is_err());
    }

    #[test]
    fn strassman_examples() {
        // log(1 + p s): coefficients (-1)^(k+1) p^k / k
        let log: Vec<PadicNumber> = std::iter::once(PadicNumber::zero(P))
            .chain((1..60).map(|k| {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                PadicNumber::from_int(P, sign, N)
                    .shift(k)
                    .div_int(k)
                    .unwrap()
            }))
            .collect();
        assert_eq!(strassman_count(&log, N).unwrap(), 1);
        assert_eq!(strassman_count(&[q(1)], N).unwrap(), 0);
        assert_eq!(strassman_count(&[q(1), q(0), q(0)], N).unwrap(), 0);
        let flat = vec![q(1); 20];
        assert!(matches!(
            strassman_count(&flat, N),
            Err(Error::NoConvergence)
        ));
    }

    #[test]
    fn strassman_unit_invariance() {
        let coeffs: Vec<PadicNumber> = (0..40).map(|k| q(3 + k).shift(k / 3)).collect();
        let c = strassman_count(&coeffs, N).unwrap();
        let scaled: Vec<PadicNumber> = coeffs.iter().map(|x| x * &q(5)).collect();
        assert_eq!(strassman_count(&scaled, N).unwrap(), c);
    }

    #[test]
    fn unit_equation_search() {
        let two = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(
            s_integral_points(&[2], 6).unwrap(),
            vec![two(-1, 1), two(1, 2), two(2, 1)]
        );
        assert!(s_integral_points(&[], 12).unwrap().is_empty());
        let pts = s_integral_points(&[2, 3], 6).unwrap();
        assert!(pts.contains(&two(9, 8)) && pts.contains(&two(4, 3)) && pts.contains(&two(-3, 1)));
        for z in &pts {
            assert!(is_s_unit(z, &[2, 3]) && is_s_unit(&(z - BigRational::one()), &[2, 3]));
        }
    }

    #[test]
    fn independence_examples() {
        let map = map2();
        let r = independence_rank(map, &[q(3), q(5), q(14)], 1, N - 2).unwrap();
        assert_eq!((r.rank, r.full_rank), (3, true));
        let r = independence_rank(map, &[q(3), q(3), q(5)], 1, N - 2).unwrap();
        assert_eq!(r.rank, 2);
        let pts = sample_points(P, 8, 1, N);
        let r = independence_rank(map, &pts, 2, N - 2).unwrap();
        assert_eq!((r.rank, r.columns), (7, 7));
    }

    #[test]
    fn rank_is_monotone() {
        let map = map2();
        let pts = sample_points(P, 9, 5, N);
        let mut last = 0;
        for k in 1..=pts.len() {
            let r = independence_rank(map, &pts[..k], 2, N - 2).unwrap().rank;
            assert!(r >= last);
            last = r;
        }
    }

    #[test]
    fn demo_for_two() {
        let d = finiteness_demo(&[2], map2(), 2, 12).unwrap();
        assert_eq!(d.points, vec!["-1", "1/2", "2"]);
        assert_eq!(d.rank, 3);
        assert!(d.kappa.is_some());
        assert_eq!(d.disks.len(), 5);
        for disk in &d.disks {
            let zeros = disk.zeros.expect("finite count");
            assert!(zeros >= disk.points_in_disk);
        }
        let empty = finiteness_demo(&[], map2(), 2, 12).unwrap();
        assert!(empty.vacuous && empty.points.is_empty());
    }
}
