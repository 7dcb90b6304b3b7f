//! Acceptance suite at p = 7, N = 20: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_integer::Integer;

use padic_albanese::audit::{
    admissible_prime, finiteness_demo, independence_rank, minimal_level, sample_points, soule_bound,
};
use padic_albanese::frobenius::{
    compute_gauge_adaptive, fixed_point_solve, frobenius_residual, AlbaneseMap, FrobeniusGauge,
};
use padic_albanese::padics::{vp_int, Branch, PadicNumber, EXACT};
use padic_albanese::words::{lyndon_words, witt_rank, Word};
use padic_albanese::Result;

const P: u64 = 7;
const N: i64 = 20;

fn q(x: i64) -> PadicNumber {
    PadicNumber::from_int(P, x, N)
}

/// An integer with `N` digits of relative precision.
fn exact(z: i64) -> PadicNumber {
    PadicNumber::from_int(P, z, N + vp_int(P, z))
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

struct Ctx {
    gauge2: FrobeniusGauge,
    gauge4: FrobeniusGauge,
    map2: AlbaneseMap,
    map4: AlbaneseMap,
}

impl Ctx {
    fn new() -> Result<Self> {
        let gauge2 = compute_gauge_adaptive(P, 2, N)?;
        let gauge4 = compute_gauge_adaptive(P, 4, N)?;
        let map2 = AlbaneseMap::new(gauge2.clone(), Branch::standard(P))?;
        let map4 = AlbaneseMap::new(gauge4.clone(), Branch::standard(P))?;
        Ok(Ctx {
            gauge2,
            gauge4,
            map2,
            map4,
        })
    }
}

/// Outcome of one criterion: pass flag and a short measurement.
type Outcome = Result<(bool, String)>;

type Check = Box<dyn Fn(&Ctx) -> Outcome>;

fn abelian_layer(ctx: &Ctx) -> Outcome {
    let br = Branch::standard(P);
    let mut worst = EXACT;
    for z in sample_points(P, 20, 1, N) {
        let g = ctx.map4.value(&z)?;
        let la = z.log(&br)?;
        let lb = (&q(1) - &z).log(&br)?;
        worst = worst
            .min(g.alpha(&w("A"))?.agreement(&la))
            .min(g.alpha(&w("B"))?.agreement(&lb));
    }
    Ok((
        worst >= N - 2,
        format!("worst agreement {worst} (need {})", N - 2),
    ))
}

fn dilogarithm(ctx: &Ctx) -> Outcome {
    let mut worst = EXACT;
    for z in [7, 14, 21] {
        let z = PadicNumber::from_int(P, z, N + 10);
        // direct partial sum, far past the point where z^k/k^2 drops below p^N
        let mut sum = PadicNumber::zero(P);
        let mut zk = PadicNumber::one(P, N + 10);
        for k in 1..=60i64 {
            zk = &zk * &z;
            sum = &sum + &zk.div_int(k * k)?;
        }
        let g = ctx.map2.value(&z.cap(N))?;
        worst = worst.min(g.alpha(&w("AB"))?.agreement(&-sum));
    }
    Ok((
        worst >= N - 3,
        format!("worst agreement {worst} (need {})", N - 3),
    ))
}

fn group_likeness(ctx: &Ctx) -> Outcome {
    let mut worst = EXACT;
    for z in sample_points(P, 20, 3, N) {
        worst = worst.min(ctx.map4.value(&z)?.is_grouplike(N - 2).worst_valuation);
    }
    Ok((
        worst >= N - 2,
        format!("worst shuffle defect {worst} (need {})", N - 2),
    ))
}

fn gauge_obstructions(ctx: &Ctx) -> Outcome {
    let worst = ctx.gauge4.worst_obstruction();
    Ok((
        worst >= N - 4,
        format!(
            "K = {}, worst obstruction {worst} over {} words (need {})",
            ctx.gauge4.order(),
            ctx.gauge4.obstructions().len(),
            N - 4
        ),
    ))
}

fn frobenius_invariance(ctx: &Ctx) -> Outcome {
    let zero_disk = (1..=10).map(|t| exact(7 * (13 * t + 1)));
    let generic = sample_points(P, 12, 5, N)
        .into_iter()
        .filter(|z| z.valuation() == 0)
        .take(10);
    let mut worst = EXACT;
    let mut count = 0;
    for z in zero_disk.chain(generic) {
        let g = ctx.map4.value(&z)?;
        let gp = ctx.map4.value(&z.pow(P))?;
        worst = worst.min(frobenius_residual(&z, ctx.map4.gauge(), &g, &gp)?);
        count += 1;
    }
    Ok((
        worst >= N - 4 && count == 20,
        format!("{count} points, worst residual {worst} (need {})", N - 4),
    ))
}

fn teichmuller_fixed_point(ctx: &Ctx) -> Outcome {
    let omega = PadicNumber::from_int(P, 2, N + 10).teichmuller()?;
    let g = fixed_point_solve(&ctx.gauge2, &omega)?;
    let gb = g.alpha(&w("B"))?;
    let oracle = (&PadicNumber::one(P, N + 10) - &omega).log(&Branch::standard(P))?;
    let mod49: Option<num_bigint::BigInt> = gb
        .to_bigint()
        .map(|x: num_bigint::BigInt| x.mod_floor(&49.into()));
    let agree = gb.agreement(&oracle);
    Ok((
        agree >= gb.abs_prec() && mod49 == Some(28.into()),
        format!(
            "agreement {agree} of {} digits, residue mod 49 = {}",
            gb.abs_prec(),
            mod49.map_or_else(|| "?".to_string(), |x: num_bigint::BigInt| x.to_string())
        ),
    ))
}

fn audit_table() -> Outcome {
    let start = Instant::now();
    let ranks: Vec<u64> = (1..=6).map(witt_rank).collect();
    let brute: Vec<u64> = (1..=6).map(|n| lyndon_words(n).len() as u64).collect();
    let levels: Vec<(u32, u64)> = [&[][..], &[2], &[2, 3, 5]]
        .iter()
        .map(|s| {
            let n = minimal_level(s).0;
            (n, admissible_prime(s, n))
        })
        .collect();
    let mut deltas_ok = true;
    for s in [&[][..], &[2], &[2, 3, 5]] {
        for n in 2..=8u32 {
            let delta = soule_bound(s, n) - soule_bound(s, n - 1);
            let expected = if n % 2 == 1 { witt_rank(n) } else { 0 };
            deltas_ok &= delta == expected;
        }
    }
    let elapsed = start.elapsed();
    let ok = ranks == [2, 1, 2, 3, 6, 9]
        && brute == ranks
        && levels == [(1, 5), (2, 7), (6, 17)]
        && deltas_ok
        && elapsed < Duration::from_secs(1);
    Ok((
        ok,
        format!("r = {ranks:?}, levels {levels:?}, deltas ok {deltas_ok}, {elapsed:.2?}"),
    ))
}

fn independence(ctx: &Ctx) -> Outcome {
    let pts = sample_points(P, 10, 0, N);
    let disks: BTreeSet<u64> = pts.iter().filter_map(|z| z.residue_mod_p()).collect();
    let r = independence_rank(&ctx.map2, &pts, 2, N - 2)?;
    let worst = r.pivots.iter().map(|p| p.valuation).max().unwrap_or(EXACT);
    let least = r.pivots.iter().map(|p| p.valuation).min().unwrap_or(EXACT);
    Ok((
        r.full_rank && disks.len() >= 4 && least >= -3,
        format!(
            "rank {}/{} over {} disks, pivot valuations {least}..{worst}",
            r.rank,
            r.columns,
            disks.len()
        ),
    ))
}

fn branch_invariance(ctx: &Ctx) -> Outcome {
    let map_b = AlbaneseMap::new(ctx.gauge2.clone(), Branch::new(q(1)))?;
    let mut worst = EXACT;
    for z in sample_points(P, 12, 9, N)
        .into_iter()
        .filter(|z| z.valuation() == 0)
        .take(10)
    {
        worst = worst.min(ctx.map2.value(&z)?.agreement(&map_b.value(&z)?)?);
    }
    let mut zero_disk = EXACT;
    for z in [7, 98, 21, 343 * 3] {
        let z = exact(z);
        let d = ctx.map2.value(&z)?.mul(&map_b.value(&z)?.inverse()?)?;
        let expected = q(-z.valuation());
        zero_disk = zero_disk.min(d.alpha(&w("A"))?.agreement(&expected));
    }
    Ok((
        worst >= N - 3 && zero_disk >= N,
        format!(
            "generic agreement {worst} (need {}), disk-of-0 alpha_A agreement {zero_disk}",
            N - 3
        ),
    ))
}

fn finiteness(ctx: &Ctx) -> Outcome {
    let start = Instant::now();
    let d = finiteness_demo(&[2], &ctx.map2, 2, 12)?;
    let points: BTreeSet<&str> = d.points.iter().map(String::as_str).collect();
    let expected: BTreeSet<&str> = ["2", "-1", "1/2"].into();
    let counts: Vec<Option<usize>> = d.disks.iter().map(|c| c.zeros).collect();
    let finite = d.disks.len() == (P - 2) as usize && counts.iter().all(Option::is_some);
    // the counts must also bound the known points in each disk
    let bounds = d
        .disks
        .iter()
        .all(|c| c.zeros.is_some_and(|z| z >= c.points_in_disk));
    let elapsed = start.elapsed();
    Ok((
        points == expected
            && d.kappa.is_some()
            && finite
            && bounds
            && elapsed < Duration::from_secs(300),
        format!(
            "points {:?}, kappa found {}, zeros per disk {counts:?}, {elapsed:.2?}",
            d.points,
            d.kappa.is_some()
        ),
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ctx = match Ctx::new() {
        Ok(c) => Some(c),
        Err(e) => {
            println!("setup failed: {e}");
            None
        }
    };
    println!("setup {:.2?}", start.elapsed());
    let criteria: Vec<(&str, Check)> = vec![
        (
            "abelian layer equals Iwasawa logarithms",
            Box::new(abelian_layer),
        ),
        ("dilogarithm on the disk of 0", Box::new(dilogarithm)),
        ("group-likeness at level 4", Box::new(group_likeness)),
        (
            "gauge obstructions vanish at level 4",
            Box::new(gauge_obstructions),
        ),
        (
            "Frobenius invariance residual",
            Box::new(frobenius_invariance),
        ),
        ("Teichmuller fixed point", Box::new(teichmuller_fixed_point)),
        ("dimension audit table", Box::new(|_| audit_table())),
        ("independence certificate at n = 2", Box::new(independence)),
        ("branch invariance", Box::new(branch_invariance)),
        ("finiteness demo for S = {2}", Box::new(finiteness)),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = match &ctx {
            Some(ctx) => f(ctx).unwrap_or_else(|e| (false, format!("error: {e}"))),
            None => (false, "no context".into()),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.2?}]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed()
        );
    }
    println!(
        "{}/{} criteria passed in {:.2?}",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
