//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::audit::{
    audit, finiteness_demo, independence_rank, sample_points, strassman_count, BoundMode,
};
use crate::error::{Error, Result};
use crate::frobenius::{cached_gauge, frobenius_residual, AlbaneseMap, FrobeniusGauge};
use crate::padics::{parse_rational, Branch, PadicNumber, EXACT};
use crate::words::Word;

#[derive(Parser, Debug)]
#[command(
    name = "albanese",
    version,
    about = "p-adic unipotent Albanese map of P^1 - {0, 1, oo}"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Directory for cached gauges.
    #[arg(
        long,
        global = true,
        env = "ALBANESE_CACHE_DIR",
        default_value = ".albanese-cache"
    )]
    pub cache_dir: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension table, minimal level and admissible prime for Z[1/S].
    Audit {
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',')]
        s: Vec<u64>,
        /// Add the even-index term r_(2 floor(n/2)) to the bound.
        #[arg(long)]
        literal_bound: bool,
    },
    /// Compute (or load) the Frobenius gauge and report its obstructions.
    Gauge(Pipeline),
    /// Evaluate the unipotent Albanese map at points.
    Albanese {
        #[command(flatten)]
        pipeline: Pipeline,
        /// Comma-separated rationals.
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<String>,
    },
    /// Frobenius invariance residual G(z) - H(z) phi(G(z^p)) at points.
    Residual {
        #[command(flatten)]
        pipeline: Pipeline,
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<String>,
    },
    /// Rank of the matrix of Albanese coordinates at a point set.
    Independence {
        #[command(flatten)]
        pipeline: Pipeline,
        #[command(flatten)]
        points: PointSet,
    },
    /// Strassman zero counts of sum_w kappa_w alpha_w on every good residue disk.
    Zeros {
        #[command(flatten)]
        pipeline: Pipeline,
        /// Functional as word=value pairs, e.g. "A=1,AB=-2,=3" (empty word for the constant).
        #[arg(long, value_delimiter = ',', required = true)]
        kappa: Vec<String>,
    },
    /// Finiteness demonstration for Z[1/S].
    Demo {
        #[command(flatten)]
        pipeline: Pipeline,
        #[arg(long, value_delimiter = ',')]
        s: Vec<u64>,
        /// Exponent box for the unit-equation search.
        #[arg(long, default_value_t = 12)]
        max_exp: u32,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Pipeline {
    #[arg(long, default_value_t = 7)]
    pub p: u64,
    /// Truncation level (word length).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Absolute precision N.
    #[arg(long, default_value_t = 20)]
    pub prec: i64,
    /// Mittag-Leffler order K of the gauge; adaptive when omitted.
    #[arg(long)]
    pub order: Option<usize>,
    /// Branch of the Iwasawa logarithm: the value of log(p).
    #[arg(long, default_value = "0")]
    pub branch: String,
}

#[derive(Args, Debug, Clone)]
pub struct PointSet {
    /// Comma-separated rationals.
    #[arg(long, value_delimiter = ',')]
    pub points: Vec<String>,
    /// Number of random points when --points is absent.
    #[arg(long, default_value_t = 10)]
    pub sample: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Parses and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, table: impl FnOnce() -> String) -> Result<()> {
    let text = if cli.json {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        s
    } else {
        table()
    };
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn check_pipeline(pl: &Pipeline) -> Result<()> {
    if pl.p < 3
        || !(2..pl.p)
            .take_while(|d| d * d <= pl.p)
            .all(|d| !pl.p.is_multiple_of(d))
    {
        return Err(Error::Invalid(format!("p = {} must be an odd prime", pl.p)));
    }
    if pl.n == 0 || pl.prec <= 0 {
        return Err(Error::Invalid("n and prec must be positive".into()));
    }
    if (pl.p - 1) / 2 < pl.n as u64 + 1 {
        eprintln!(
            "warning: (p-1)/2 = {} < n+1 = {}; outside the comparison range",
            (pl.p - 1) / 2,
            pl.n + 1
        );
    }
    Ok(())
}

fn load_gauge(cli: &Cli, pl: &Pipeline) -> Result<FrobeniusGauge> {
    check_pipeline(pl)?;
    Ok(cached_gauge(&cli.cache_dir, pl.p, pl.n, pl.order, pl.prec)?.0)
}

fn engine(cli: &Cli, pl: &Pipeline) -> Result<AlbaneseMap> {
    let g = load_gauge(cli, pl)?;
    let a = parse_rational(pl.p, &pl.branch, pl.prec)?;
    AlbaneseMap::new(g, Branch::new(a))
}

/// Evaluates `f` on every item across the available cores, preserving order.
fn fan_out<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Result<R> + Sync) -> Result<Vec<R>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| scope.spawn(|| c.iter().map(&f).collect::<Result<Vec<R>>>()))
            .collect();
        let mut out = Vec::with_capacity(items.len());
        for h in handles {
            out.extend(h.join().expect("worker panicked")?);
        }
        Ok(out)
    })
}

fn parse_points(pl: &Pipeline, raw: &[String]) -> Result<Vec<PadicNumber>> {
    raw.iter()
        .map(|s| parse_rational(pl.p, s, pl.prec))
        .collect()
}

fn fmt_val(v: i64) -> String {
    if v == EXACT {
        "exact".into()
    } else {
        v.to_string()
    }
}

#[derive(Serialize)]
struct GaugeSummary<'a> {
    p: u64,
    n: usize,
    #[serde(rename = "K")]
    order: usize,
    #[serde(rename = "N")]
    prec: i64,
    error_floor: Option<i64>,
    worst_obstruction: Option<i64>,
    obstructions: &'a [crate::frobenius::ObstructionRecord],
    twist: &'a [crate::frobenius::TwistTerm],
    cache_file: String,
}

#[derive(Serialize)]
struct ResidualRow {
    z: String,
    residual: Option<i64>,
}

#[derive(Serialize)]
struct ZerosReport {
    p: u64,
    level: usize,
    disks: Vec<ZeroCount>,
}

#[derive(Serialize)]
struct ZeroCount {
    residue: u64,
    zeros: Option<usize>,
    error: Option<String>,
}

fn opt(v: i64) -> Option<i64> {
    (v != EXACT).then_some(v)
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Audit { s, literal_bound } => {
            let mode = if *literal_bound {
                BoundMode::Literal
            } else {
                BoundMode::Odd
            };
            let r = audit(s, mode)?;
            emit(cli, &r, || r.render())
        }
        Command::Gauge(pl) => {
            check_pipeline(pl)?;
            let (g, path) = cached_gauge(&cli.cache_dir, pl.p, pl.n, pl.order, pl.prec)?;
            let summary = GaugeSummary {
                p: g.prime(),
                n: g.level(),
                order: g.order(),
                prec: g.prec(),
                error_floor: opt(g.error_floor()),
                worst_obstruction: opt(g.worst_obstruction()),
                obstructions: g.obstructions(),
                twist: g.twist(),
                cache_file: path.display().to_string(),
            };
            emit(cli, &summary, || {
                let mut t = format!(
                    "p={} n={} K={} N={} error floor {} cache {}\nword      dz/z  dz/(z-1)\n",
                    g.prime(),
                    g.level(),
                    g.order(),
                    g.prec(),
                    fmt_val(g.error_floor()),
                    summary.cache_file
                );
                for o in g.obstructions() {
                    t.push_str(&format!(
                        "{:<8} {:>5} {:>9}\n",
                        o.word,
                        o.dz_over_z.map_or("exact".into(), |v| v.to_string()),
                        o.dz_over_z_minus_1
                            .map_or("exact".into(), |v| v.to_string())
                    ));
                }
                for tw in g.twist() {
                    t.push_str(&format!("twist [{}] = {}\n", tw.lyndon_word, tw.coeff));
                }
                t
            })
        }
        Command::Albanese { pipeline, z } => {
            let map = engine(cli, pipeline)?;
            let values = fan_out(&parse_points(pipeline, z)?, |x| map.albanese(x))?;
            emit(cli, &values, || {
                let mut t = String::new();
                for (raw, v) in z.iter().zip(&values) {
                    t.push_str(&format!(
                        "z = {raw}  (residual {}, shuffle {})\n",
                        v.diagnostics
                            .frobenius_residual
                            .map_or("exact".into(), |x| x.to_string()),
                        v.diagnostics
                            .shuffle_violation
                            .map_or("exact".into(), |x| x.to_string())
                    ));
                    for (i, c) in v.value.coefficients().iter().enumerate() {
                        let w = Word::from_index(i);
                        let name = if w.is_empty() {
                            "1".to_string()
                        } else {
                            w.to_string()
                        };
                        t.push_str(&format!("  {name:<6} {c}\n"));
                    }
                }
                t
            })
        }
        Command::Residual { pipeline, z } => {
            let map = engine(cli, pipeline)?;
            let rows = fan_out(z, |raw| {
                let x = parse_rational(pipeline.p, raw, pipeline.prec)?;
                let g = map.value(&x)?;
                let gp = map.value(&x.pow(pipeline.p))?;
                let r = frobenius_residual(&x, map.gauge(), &g, &gp)?;
                Ok(ResidualRow {
                    z: raw.clone(),
                    residual: opt(r),
                })
            })?;
            emit(cli, &rows, || {
                rows.iter()
                    .map(|r| {
                        format!(
                            "{:<12} {}\n",
                            r.z,
                            r.residual.map_or("exact".into(), |v| v.to_string())
                        )
                    })
                    .collect()
            })
        }
        Command::Independence { pipeline, points } => {
            let map = engine(cli, pipeline)?;
            let pts = if points.points.is_empty() {
                sample_points(pipeline.p, points.sample, points.seed, pipeline.prec)
            } else {
                parse_points(pipeline, &points.points)?
            };
            let r = independence_rank(&map, &pts, pipeline.n, pipeline.prec - 2)?;
            emit(cli, &r, || {
                format!(
                    "{} points, {} columns, rank {}{}\npivot valuations: {:?}\n",
                    r.points.len(),
                    r.columns,
                    r.rank,
                    if r.full_rank { " (full)" } else { "" },
                    r.pivots.iter().map(|p| p.valuation).collect::<Vec<_>>()
                )
            })
        }
        Command::Zeros { pipeline, kappa } => {
            let map = engine(cli, pipeline)?;
            let mut k = vec![PadicNumber::zero(pipeline.p); Word::count_up_to(pipeline.n)];
            for item in kappa {
                let (w, c) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Invalid(format!("expected word=value, got '{item}'")))?;
                let w: Word = w.trim().parse()?;
                if w.len() > pipeline.n {
                    return Err(Error::WordTooLong {
                        len: w.len(),
                        level: pipeline.n,
                    });
                }
                k[w.index()] = parse_rational(pipeline.p, c, pipeline.prec)?;
            }
            let mut disks = Vec::new();
            for r in 2..pipeline.p {
                let series = map.functional_series(r, &k)?;
                let scaled: Vec<PadicNumber> = series
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.shift(i as i64))
                    .collect();
                let (zeros, error) = match strassman_count(&scaled, pipeline.prec - 2) {
                    Ok(c) => (Some(c), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                disks.push(ZeroCount {
                    residue: r,
                    zeros,
                    error,
                });
            }
            let report = ZerosReport {
                p: pipeline.p,
                level: pipeline.n,
                disks,
            };
            emit(cli, &report, || {
                report
                    .disks
                    .iter()
                    .map(|d| match (d.zeros, &d.error) {
                        (Some(c), _) => format!("disk {}: {} zeros\n", d.residue, c),
                        (None, Some(e)) => format!("disk {}: {e}\n", d.residue),
                        _ => String::new(),
                    })
                    .collect()
            })
        }
        Command::Demo {
            pipeline,
            s,
            max_exp,
        } => {
            if s.contains(&pipeline.p) {
                return Err(Error::Invalid(format!("p = {} lies in S", pipeline.p)));
            }
            let map = engine(cli, pipeline)?;
            let d = finiteness_demo(s, &map, pipeline.n, *max_exp)?;
            emit(cli, &d, || {
                let mut t = d.audit.render();
                if d.vacuous {
                    t.push_str("no S-integral points: finiteness is vacuous\n");
                    return t;
                }
                t.push_str(&format!("points: {}\n", d.points.join(", ")));
                if !d.skipped.is_empty() {
                    t.push_str(&format!(
                        "outside the good disks: {}\n",
                        d.skipped.join(", ")
                    ));
                }
                t.push_str(&format!("rank {} of {} columns\n", d.rank, d.columns));
                if let Some(k) = &d.kappa {
                    t.push_str("kappa:\n");
                    for (w, c) in k.iter().filter(|(_, c)| !c.is_zero()) {
                        let name = if w.is_empty() { "1" } else { w };
                        t.push_str(&format!("  {name:<6} {c}\n"));
                    }
                }
                for disk in &d.disks {
                    match (disk.zeros, &disk.error) {
                        (Some(c), _) => t.push_str(&format!(
                            "disk {}: {} zeros ({} known points)\n",
                            disk.residue, c, disk.points_in_disk
                        )),
                        (None, Some(e)) => t.push_str(&format!("disk {}: {e}\n", disk.residue)),
                        _ => {}
                    }
                }
                t
            })
        }
    }
}
