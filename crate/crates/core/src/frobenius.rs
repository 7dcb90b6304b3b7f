//! Frobenius structure for the lift `z -> z^p` and the unipotent Albanese map.
//!
//! The gauge `H` is the overconvergent series with `G(z) = H(z) tau(G(z^p))`,
//! where `tau` divides degree-`m` coefficients by `p^m`. It satisfies
//! `dH = Omega H - H Omega^phi` with `Omega^phi = A dz/z + B z^(p-1) dz/(z^p - 1)`,
//! which is solved word by word in the Mittag-Leffler ring. On a Teichmüller
//! point `w` the same relation with `z = w` pins down `G(w)`; parallel transport
//! carries it across the residue disk.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, ForbiddenDisk, Result};
use crate::kz_local::{default_order, solve_local_kz, transport, LogSeries, TransportSeries};
use crate::linalg::solve;
use crate::ncseries::{GroupElement, LieElement};
use crate::overconvergent::{MLForm, MLFunction, SpecialForm};
use crate::padics::{ilog, Branch, PadicNumber, EXACT};
use crate::words::{lyndon_words, Letter, Word};

/// Bumped whenever the cache layout or the numerics behind it change.
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Obstruction valuations met while integrating one word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionRecord {
    pub word: String,
    /// `None` when the obstruction is exactly zero.
    pub dz_over_z: Option<i64>,
    pub dz_over_z_minus_1: Option<i64>,
}

impl ObstructionRecord {
    pub fn worst(&self) -> i64 {
        self.dz_over_z
            .unwrap_or(EXACT)
            .min(self.dz_over_z_minus_1.unwrap_or(EXACT))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusGauge {
    p: u64,
    level: usize,
    order: usize,
    prec: i64,
    working_prec: i64,
    /// `h_w` in word-index order; index 0 is the constant 1.
    entries: Vec<MLFunction>,
    obstructions: Vec<ObstructionRecord>,
    twist: Vec<TwistTerm>,
    /// `beta = Psi^(-1) B Psi`; the fibre Frobenius sends `B` to `beta / p`.
    b_image: GroupElement,
    error_floor: i64,
}

/// One coordinate of `log Psi` in the Lyndon bracket basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistTerm {
    pub lyndon_word: String,
    pub coeff: PadicNumber,
}

#[derive(Serialize, Deserialize)]
struct GaugeFile {
    format_version: u32,
    p: u64,
    n: usize,
    #[serde(rename = "K")]
    order: usize,
    #[serde(rename = "N")]
    prec: i64,
    working_precision: i64,
    error_floor: Option<i64>,
    obstructions: Vec<ObstructionRecord>,
    twist: Vec<TwistTerm>,
    b_image: GroupElement,
    entries: Vec<GaugeEntry>,
}

#[derive(Serialize, Deserialize)]
struct GaugeEntry {
    word: String,
    h: MLFunction,
}

fn opt(v: i64) -> Option<i64> {
    (v != EXACT).then_some(v)
}

/// Default obstruction tolerance for absolute precision `prec`.
pub fn default_tolerance(prec: i64) -> i64 {
    prec - 4
}

/// Default Mittag-Leffler order for the gauge.
pub fn default_gauge_order(p: u64) -> usize {
    32 * p as usize
}

/// Solves the gauge equation to word length `level` with tails of order `order`.
pub fn compute_gauge(p: u64, level: usize, order: usize, prec: i64) -> Result<FrobeniusGauge> {
    compute_gauge_with_tolerance(p, level, order, prec, default_tolerance(prec))
}

/// Integrand of `dh_w` before the twist correction: the `dz/z` residue at 0 and the `dz` part.
struct Integrand {
    residue_at_zero: PadicNumber,
    dz: MLFunction,
}

fn integrand(
    word: &Word,
    entries: &[MLFunction],
    b_image: &GroupElement,
    u: &MLFunction,
    frob: &MLFunction,
    wp: i64,
) -> Result<Integrand> {
    let p = u.prime();
    let order = u.order();
    let rest = word.suffix_from(1);
    let init = word.prefix(word.len() - 1);
    let mut c0 = PadicNumber::zero(p);
    let mut over_z = MLFunction::zero(p, order);
    let mut dz = MLFunction::zero(p, order);
    // Omega H
    match word.first() {
        Some(Letter::A) if rest.is_empty() => c0 = &c0 + &PadicNumber::one(p, wp),
        Some(Letter::A) => over_z = over_z.add(&entries[rest.index()])?,
        _ => dz = dz.add(&entries[rest.index()].mul(u)?)?,
    }
    // H Omega^phi, A-part
    if word.last() == Some(Letter::A) {
        if init.is_empty() {
            c0 = &c0 - &PadicNumber::one(p, wp);
        } else {
            over_z = over_z.sub(&entries[init.index()])?;
        }
    }
    // H Omega^phi, B-part: sum over w = xy of h_x beta_y, times the Frobenius form
    let mut twisted = MLFunction::zero(p, order);
    for cut in 0..word.len() {
        let beta = b_image.coeff_at(word.suffix_from(cut).index());
        if beta.is_zero() {
            continue;
        }
        twisted = twisted.add(&entries[word.prefix(cut).index()].scale(beta))?;
    }
    if twisted.min_valuation() < EXACT {
        dz = dz.sub(&twisted.mul(frob)?)?;
    }
    let residue_at_zero = &c0 + &over_z.value_at_zero();
    let mut shifted = over_z.poly().to_vec();
    shifted[0] = &shifted[0] - &over_z.value_at_zero();
    let regular = MLFunction::from_parts(
        p,
        shifted,
        over_z.principal().to_vec(),
        over_z.error_floor(),
    )?;
    dz = dz.add(&regular.divide_by_z(i64::MIN)?)?;
    Ok(Integrand {
        residue_at_zero,
        dz,
    })
}

/// Computes the gauge, fitting the twist `Psi` one degree at a time.
///
/// At degree `d` the `dz/(z-1)` residues of all `2^d` words must be matched by
/// `[B, psi_(d-1)]` with `psi_(d-1)` in the degree `d-1` part of the free Lie
/// algebra (`r_(d-1)` unknowns); whatever is left is reported as the obstruction.
pub fn compute_gauge_with_tolerance(
    p: u64,
    level: usize,
    order: usize,
    prec: i64,
    tol: i64,
) -> Result<FrobeniusGauge> {
    solve_gauge(p, level, order, prec, tol, true)
}

fn solve_gauge(
    p: u64,
    level: usize,
    order: usize,
    prec: i64,
    tol: i64,
    fit_twist: bool,
) -> Result<FrobeniusGauge> {
    if p < 3 || level == 0 || order == 0 || prec <= 0 {
        return Err(Error::Invalid(format!(
            "gauge needs an odd prime and positive n, K, N (got p={p}, n={level}, K={order}, N={prec})"
        )));
    }
    let wp = prec + level as i64 * (ilog(p, 2 * order as u64) + 2) + 4;
    let u = MLFunction::special(SpecialForm::InvZMinus1, p, order, wp);
    let frob = MLFunction::special(SpecialForm::FrobBForm, p, order, wp);
    let count = Word::count_up_to(level);
    let mut entries = Vec::with_capacity(count);
    entries.push(MLFunction::constant(PadicNumber::one(p, wp), order));
    let mut obstructions = Vec::with_capacity(count - 1);
    let b = GroupElement::letter(p, level, wp, Letter::B, PadicNumber::one(p, wp));
    let mut psi = LieElement::zero(p, level, wp);
    let mut b_image = b.clone();
    let mut twist = Vec::new();

    for d in 1..=level {
        let words: Vec<Word> = Word::all_of_length(d).collect();
        let mut parts = words
            .iter()
            .map(|w| integrand(w, &entries, &b_image, &u, &frob, wp))
            .collect::<Result<Vec<_>>>()?;
        let basis: Vec<(Word, GroupElement)> = lyndon_words(d - 1)
            .into_iter()
            .filter(|l| l.len() > 1 || l.first() == Some(Letter::A))
            .map(|l| {
                let x = LieElement::lyndon_bracket(&l, p, level, wp)?.into_series();
                Ok((l, b.bracket(&x)?))
            })
            .collect::<Result<Vec<_>>>()?;
        if fit_twist && !basis.is_empty() {
            let matrix: Vec<Vec<PadicNumber>> = words
                .iter()
                .map(|w| {
                    basis
                        .iter()
                        .map(|(_, c)| c.coeff_at(w.index()).clone())
                        .collect()
                })
                .collect();
            let rhs: Vec<PadicNumber> = parts
                .iter()
                .map(|x| x.dz.principal_coeff(1).clone())
                .collect();
            let (coords, _) = solve(&matrix, &rhs)?;
            let mut correction = GroupElement::zero(p, level, wp);
            for ((l, image), c) in basis.iter().zip(&coords) {
                correction = correction.add(&image.scale(c))?;
                let lie = LieElement::lyndon_bracket(l, p, level, wp)?.into_series();
                psi = LieElement::new(psi.as_series().add(&lie.scale(c))?)?;
                twist.push(TwistTerm {
                    lyndon_word: l.to_string(),
                    coeff: c.cap(prec),
                });
            }
            for (w, part) in words.iter().zip(parts.iter_mut()) {
                let delta = correction.coeff_at(w.index());
                if !delta.is_zero() {
                    part.dz = part.dz.sub(&frob.scale(delta))?;
                }
            }
        }
        for (w, part) in words.iter().zip(parts) {
            let (h, obs) = MLForm::new(part.dz).integrate()?;
            let record = ObstructionRecord {
                word: w.to_string(),
                dz_over_z: opt(part.residue_at_zero.valuation()),
                dz_over_z_minus_1: opt(obs.dz_over_z_minus_1.valuation()),
            };
            if let Some(v) = record.dz_over_z.filter(|&v| v < tol) {
                return Err(Error::Obstruction {
                    word: record.word,
                    form: "dz/z",
                    valuation: v,
                    tolerance: tol,
                });
            }
            if let Some(v) = record.dz_over_z_minus_1.filter(|&v| v < tol) {
                return Err(Error::Obstruction {
                    word: record.word,
                    form: "dz/(z-1)",
                    valuation: v,
                    tolerance: tol,
                });
            }
            obstructions.push(record);
            entries.push(h);
        }
        let g = psi.exp()?;
        b_image = g.inverse()?.mul(&b)?.mul(&g)?;
    }
    let error_floor = entries[1..]
        .iter()
        .map(MLFunction::error_floor)
        .min()
        .unwrap_or(EXACT)
        .min(wp);
    Ok(FrobeniusGauge {
        p,
        level,
        order,
        prec,
        working_prec: wp,
        entries,
        obstructions,
        twist,
        b_image,
        error_floor,
    })
}

/// Doubles the order from `32p` until the error floor reaches `prec`.
pub fn compute_gauge_adaptive(p: u64, level: usize, prec: i64) -> Result<FrobeniusGauge> {
    let mut order = default_gauge_order(p);
    for _ in 0..4 {
        let g = compute_gauge(p, level, order, prec)?;
        if g.error_floor >= prec {
            return Ok(g);
        }
        order *= 2;
    }
    Err(Error::PrecisionExhausted(format!(
        "gauge error floor stays below {prec} up to order {}",
        order / 2
    )))
}

impl FrobeniusGauge {
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

    pub fn error_floor(&self) -> i64 {
        self.error_floor
    }

    pub fn obstructions(&self) -> &[ObstructionRecord] {
        &self.obstructions
    }

    /// Coordinates of `log Psi`; all zero means the fibre Frobenius is plain letter scaling.
    pub fn twist(&self) -> &[TwistTerm] {
        &self.twist
    }

    pub fn b_image(&self) -> &GroupElement {
        &self.b_image
    }

    /// The fibre Frobenius `A -> A/p`, `B -> beta/p` applied to a series of the same level.
    pub fn fibre_frobenius(&self, x: &GroupElement) -> Result<GroupElement> {
        let prec = x.prec();
        let a = GroupElement::letter(
            self.p,
            self.level,
            prec,
            Letter::A,
            PadicNumber::one(self.p, prec).shift(-1),
        );
        let b = GroupElement::from_dense(
            self.p,
            self.level,
            prec,
            self.b_image
                .coefficients()
                .iter()
                .map(|c| c.shift(-1))
                .collect(),
        )?;
        x.substitute(&a, &b)
    }

    /// Smallest obstruction valuation over all words.
    pub fn worst_obstruction(&self) -> i64 {
        self.obstructions
            .iter()
            .map(ObstructionRecord::worst)
            .min()
            .unwrap_or(EXACT)
    }

    pub fn entry(&self, w: &Word) -> Result<&MLFunction> {
        if w.len() > self.level {
            return Err(Error::WordTooLong {
                len: w.len(),
                level: self.level,
            });
        }
        Ok(&self.entries[w.index()])
    }

    /// `H(z)` for `|z| <= 1` outside the disk of 1.
    pub fn eval(&self, z: &PadicNumber) -> Result<GroupElement> {
        let values = self
            .entries
            .iter()
            .map(|h| h.eval(z).map(|v| v.cap(self.working_prec)))
            .collect::<Result<Vec<_>>>()?;
        GroupElement::from_dense(self.p, self.level, self.working_prec, values)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = GaugeFile {
            format_version: CACHE_FORMAT_VERSION,
            p: self.p,
            n: self.level,
            order: self.order,
            prec: self.prec,
            working_precision: self.working_prec,
            error_floor: opt(self.error_floor),
            obstructions: self.obstructions.clone(),
            twist: self.twist.clone(),
            b_image: self.b_image.clone(),
            entries: self
                .entries
                .iter()
                .enumerate()
                .map(|(i, h)| GaugeEntry {
                    word: Word::from_index(i).to_string(),
                    h: h.clone(),
                })
                .collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: GaugeFile = serde_json::from_str(s)?;
        if file.format_version != CACHE_FORMAT_VERSION {
            return Err(Error::Invalid(format!(
                "gauge format version {} (expected {CACHE_FORMAT_VERSION})",
                file.format_version
            )));
        }
        if file.entries.len() != Word::count_up_to(file.n) {
            return Err(Error::Invalid(
                "gauge file has the wrong number of entries".into(),
            ));
        }
        Ok(FrobeniusGauge {
            p: file.p,
            level: file.n,
            order: file.order,
            prec: file.prec,
            working_prec: file.working_precision,
            entries: file
                .entries
                .into_iter()
                .map(|e| e.h.with_prime(file.p))
                .collect(),
            obstructions: file.obstructions,
            twist: file.twist,
            b_image: GroupElement::from_dense(
                file.p,
                file.n,
                file.working_precision,
                file.b_image.coefficients().to_vec(),
            )?,
            error_floor: file.error_floor.unwrap_or(EXACT),
        })
    }
}

pub fn cache_file_name(p: u64, level: usize, order: usize, prec: i64) -> String {
    format!("gauge-p{p}-n{level}-K{order}-N{prec}-v{CACHE_FORMAT_VERSION}.json")
}

/// Loads the gauge from `dir` or computes and stores it. Returns the gauge and its cache path.
pub fn cached_gauge(
    dir: &Path,
    p: u64,
    level: usize,
    order: Option<usize>,
    prec: i64,
) -> Result<(FrobeniusGauge, PathBuf)> {
    let k = order.unwrap_or_else(|| default_gauge_order(p));
    let path = dir.join(cache_file_name(p, level, k, prec));
    if let Ok(s) = fs::read_to_string(&path) {
        if let Ok(g) = FrobeniusGauge::from_json(&s) {
            return Ok((g, path));
        }
    }
    let g = match order {
        Some(k) => compute_gauge(p, level, k, prec)?,
        None => compute_gauge_adaptive(p, level, prec)?,
    };
    let path = dir.join(cache_file_name(p, level, g.order, prec));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::io::Write::write_all(&mut tmp, g.to_json()?.as_bytes())?;
    tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
    Ok((g, path))
}

/// The unique `G` with `G = H(w) phi(G)` at a Teichmüller point `w`, where
/// `phi` is the fibre Frobenius.
///
/// Solved degree by degree: with `Y = phi(G_(<m))`, a word of length `m` has
/// `G_w (1 - p^(-m)) = h_w + sum_(w = xy, x, y non-empty) h_x Y_y + Y_w`.
pub fn fixed_point_solve(h: &FrobeniusGauge, omega: &PadicNumber) -> Result<GroupElement> {
    let p = h.p;
    if omega.valuation() != 0 {
        return Err(Error::NotTeichmuller(format!("{omega} is not a unit")));
    }
    if omega.agreement(&omega.pow(p)) < omega.abs_prec().min(h.prec) {
        return Err(Error::NotTeichmuller(format!(
            "{omega} is not fixed by z -> z^p"
        )));
    }
    let hw = h.eval(omega)?;
    let wp = hw.prec();
    let mut g = GroupElement::one(p, h.level, wp);
    for m in 1..=h.level {
        let y = h.fibre_frobenius(&g)?;
        let pm = PadicNumber::one(p, wp).shift(m as i64);
        let denom = &pm - &PadicNumber::one(p, wp);
        for word in Word::all_of_length(m) {
            let mut s = hw.coeff_at(word.index()) + y.coeff_at(word.index());
            for cut in 1..m {
                let hx = hw.coeff_at(word.prefix(cut).index());
                if !hx.is_exact_zero() {
                    s = &s + &(hx * y.coeff_at(word.suffix_from(cut).index()));
                }
            }
            g.set(&word, (&s * &pm).checked_div(&denom)?)?;
        }
    }
    let coeffs = g.coefficients().iter().map(|c| c.cap(h.prec)).collect();
    GroupElement::from_dense(p, h.level, h.prec, coeffs)
}

/// Worst valuation of `G(z) - H(z) phi(G(z^p))`.
pub fn frobenius_residual(
    z: &PadicNumber,
    h: &FrobeniusGauge,
    g_of_z: &GroupElement,
    g_of_zp: &GroupElement,
) -> Result<i64> {
    let rhs = h.eval(z)?.mul(&h.fibre_frobenius(g_of_zp)?)?;
    g_of_z.agreement(&rhs)
}

/// `G_y G_x^(-1)`: the Albanese value of `y` with base point `x`.
pub fn change_basepoint(g_y: &GroupElement, g_x: &GroupElement) -> Result<GroupElement> {
    g_y.mul(&g_x.inverse()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiskKind {
    Zero,
    Generic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub disk: DiskKind,
    /// Teichmüller centre of the disk (generic disks only).
    pub centre: Option<PadicNumber>,
    /// Worst shuffle-relation defect.
    pub shuffle_violation: Option<i64>,
    pub frobenius_residual: Option<i64>,
    pub error_floor: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlbaneseValue {
    pub z: PadicNumber,
    pub level: usize,
    pub value: GroupElement,
    pub diagnostics: Diagnostics,
}

struct DiskData {
    centre: PadicNumber,
    fixed: GroupElement,
    transport: TransportSeries,
}

/// Albanese evaluation engine: one gauge, one branch, all residue disks prepared.
pub struct AlbaneseMap {
    gauge: FrobeniusGauge,
    branch: Branch,
    zero_disk: LogSeries,
    disks: HashMap<u64, DiskData>,
}

impl AlbaneseMap {
    pub fn new(gauge: FrobeniusGauge, branch: Branch) -> Result<Self> {
        let p = gauge.p;
        let n = gauge.level;
        let prec = gauge.prec;
        let order = default_order(p, n, prec);
        let zero_disk = solve_local_kz(p, n, order, prec)?;
        let mut disks = HashMap::new();
        for r in 2..p {
            let centre = PadicNumber::from_int(p, r as i64, gauge.working_prec).teichmuller()?;
            let fixed = fixed_point_solve(&gauge, &centre)?;
            let transport = transport(&centre, n, order, prec)?;
            disks.insert(
                r,
                DiskData {
                    centre,
                    fixed,
                    transport,
                },
            );
        }
        Ok(AlbaneseMap {
            gauge,
            branch,
            zero_disk,
            disks,
        })
    }

    pub fn gauge(&self) -> &FrobeniusGauge {
        &self.gauge
    }

    pub fn branch(&self) -> &Branch {
        &self.branch
    }

    pub fn zero_disk(&self) -> &LogSeries {
        &self.zero_disk
    }

    /// Teichmüller centres of the good residue disks, by residue.
    pub fn centres(&self) -> Vec<PadicNumber> {
        let mut keys: Vec<_> = self.disks.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter()
            .map(|r| self.disks[&r].centre.clone())
            .collect()
    }

    pub fn fixed_point(&self, residue: u64) -> Option<&GroupElement> {
        self.disks.get(&residue).map(|d| &d.fixed)
    }

    /// Taylor coefficients in `t = z - w` of `sum_w kappa_w alpha_w(UAlb(z))` on the disk
    /// with residue `residue`; `kappa` is indexed by word index.
    pub fn functional_series(
        &self,
        residue: u64,
        kappa: &[PadicNumber],
    ) -> Result<Vec<PadicNumber>> {
        let d = self
            .disks
            .get(&residue)
            .ok_or_else(|| Error::Invalid(format!("no good residue disk {residue}")))?;
        let p = self.gauge.p;
        let order = d.transport.order();
        let mut out = vec![PadicNumber::zero(p); order + 1];
        for (idx, k) in kappa.iter().enumerate() {
            if k.is_zero() {
                continue;
            }
            let w = Word::from_index(idx);
            for cut in 0..=w.len() {
                let gy = d.fixed.coeff_at(w.suffix_from(cut).index());
                if gy.is_zero() {
                    continue;
                }
                let f = k * gy;
                let x = w.prefix(cut);
                for (t, c) in out.iter_mut().enumerate() {
                    let tx = d.transport.coeff(&x, t)?;
                    if !tx.is_exact_zero() {
                        *c = &*c + &(&f * tx);
                    }
                }
            }
        }
        Ok(out)
    }

    fn classify(&self, z: &PadicNumber) -> Result<Option<&DiskData>> {
        if z.prime() != self.gauge.p {
            return Err(Error::PrimeMismatch {
                left: self.gauge.p,
                right: z.prime(),
            });
        }
        if z.valuation() < 0 {
            return Err(Error::Forbidden(ForbiddenDisk::Infinity));
        }
        if z.valuation() > 0 {
            return Ok(None);
        }
        match z.residue_mod_p() {
            Some(1) => Err(Error::Forbidden(ForbiddenDisk::One)),
            Some(r) => Ok(Some(&self.disks[&r])),
            None => Err(Error::Invalid(format!("{z} has no residue"))),
        }
    }

    /// `UAlb_n(z)` without diagnostics.
    pub fn value(&self, z: &PadicNumber) -> Result<GroupElement> {
        match self.classify(z)? {
            None => self.zero_disk.eval(z, &self.branch),
            Some(d) => d.transport.eval(z)?.mul(&d.fixed),
        }
    }

    pub fn albanese(&self, z: &PadicNumber) -> Result<AlbaneseValue> {
        let disk = self.classify(z)?;
        let value = self.value(z)?;
        let zp = z.pow(self.gauge.p);
        let value_p = self.value(&zp)?;
        let residual = frobenius_residual(z, &self.gauge, &value, &value_p)?;
        let report = value.is_grouplike(self.gauge.prec);
        Ok(AlbaneseValue {
            z: z.clone(),
            level: self.gauge.level,
            diagnostics: Diagnostics {
                disk: if disk.is_some() {
                    DiskKind::Generic
                } else {
                    DiskKind::Zero
                },
                centre: disk.map(|d| d.centre.cap(self.gauge.prec)),
                shuffle_violation: opt(report.worst_valuation),
                frobenius_residual: opt(residual),
                error_floor: opt(self.gauge.error_floor),
            },
            value,
        })
    }
}

/// One-shot Albanese evaluation; prefer [`AlbaneseMap`] for many points.
pub fn albanese(z: &PadicNumber, h: &FrobeniusGauge, branch: &Branch) -> Result<AlbaneseValue> {
    AlbaneseMap::new(h.clone(), branch.clone())?.albanese(z)
}
