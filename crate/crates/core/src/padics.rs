//! Capped absolute precision arithmetic in `Q_p`.
//!
//! A non-zero [`PadicNumber`] is `p^v * u + O(p^N)` with `u` a unit known
//! modulo `p^(N - v)`. Zero is either the exact zero or `O(p^N)`, a value
//! known to vanish modulo `p^N` and nothing more.
//!
//! Precision propagates by the usual ultrametric rules:
//! ```text
//! (p^a u + O(p^M)) + (p^b w + O(p^N)) = ... + O(p^min(M, N))
//! (p^a u + O(p^M)) * (p^b w + O(p^N)) = p^(a+b) u w + O(p^(a+b+min(M-a, N-b)))
//! ```

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Valuation and precision marker of the exact zero.
pub const EXACT: i64 = i64::MAX;

/// Precision used when a value has to be materialized from the exact zero.
pub const DEFAULT_PRECISION: i64 = 20;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    p: u64,
    val: i64,
    unit: BigUint,
    prec: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Branch of the Iwasawa logarithm: the value assigned to `log(p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub a: PadicNumber,
}

impl Branch {
    pub fn new(a: PadicNumber) -> Self {
        Branch { a }
    }

    /// The branch with `log(p) = 0`.
    pub fn standard(p: u64) -> Self {
        Branch {
            a: PadicNumber::zero(p),
        }
    }
}

pub(crate) fn pow_p(p: u64, e: i64) -> BigUint {
    debug_assert!(e >= 0);
    BigUint::from(p).pow(e as u32)
}

/// p-adic valuation of a non-zero integer together with its prime-to-p part.
pub(crate) fn split_valuation(p: u64, x: &BigInt) -> (i64, BigInt) {
    debug_assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = x.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

fn inv_mod(a: &BigUint, m: &BigUint) -> BigUint {
    let a = BigInt::from_biguint(Sign::Plus, a.clone());
    let m = BigInt::from_biguint(Sign::Plus, m.clone());
    let g = a.extended_gcd(&m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(&m).to_biguint().expect("non-negative")
}

fn residue(x: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from_biguint(Sign::Plus, m.clone());
    x.mod_floor(&m).to_biguint().expect("non-negative")
}

impl PadicNumber {
    /// The exact zero.
    pub fn zero(p: u64) -> Self {
        PadicNumber {
            p,
            val: EXACT,
            unit: BigUint::zero(),
            prec: EXACT,
        }
    }

    /// `O(p^prec)`.
    pub fn zero_mod(p: u64, prec: i64) -> Self {
        PadicNumber {
            p,
            val: prec,
            unit: BigUint::zero(),
            prec,
        }
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::from_parts(p, 0, BigUint::one(), prec)
    }

    /// Builds `p^val * n + O(p^prec)`, normalizing `n` to a unit.
    pub fn from_parts(p: u64, val: i64, n: BigUint, prec: i64) -> Self {
        if prec == EXACT {
            assert!(n.is_zero(), "only zero can be exact");
            return Self::zero(p);
        }
        if val >= prec {
            return Self::zero_mod(p, prec);
        }
        let mut n = n % pow_p(p, prec - val);
        if n.is_zero() {
            return Self::zero_mod(p, prec);
        }
        let pb = BigUint::from(p);
        let mut val = val;
        loop {
            let (q, r) = n.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            n = q;
            val += 1;
        }
        PadicNumber {
            p,
            val,
            unit: n,
            prec,
        }
    }

    pub fn from_bigint(p: u64, x: &BigInt, prec: i64) -> Self {
        if x.is_zero() {
            return Self::zero(p);
        }
        let (v, m) = split_valuation(p, x);
        if v >= prec {
            return Self::zero_mod(p, prec);
        }
        let unit = residue(&m, &pow_p(p, prec - v));
        Self::from_parts(p, v, unit, prec)
    }

    pub fn from_int(p: u64, x: i64, prec: i64) -> Self {
        Self::from_bigint(p, &BigInt::from(x), prec)
    }

    /// The rational `num / den` to absolute precision `prec`.
    pub fn from_rational(p: u64, num: &BigInt, den: &BigInt, prec: i64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero(p));
        }
        let (vn, mn) = split_valuation(p, num);
        let (vd, md) = split_valuation(p, den);
        let v = vn - vd;
        if v >= prec {
            return Ok(Self::zero_mod(p, prec));
        }
        let modulus = pow_p(p, prec - v);
        let un = residue(&mn, &modulus);
        let ud = residue(&md, &modulus);
        let unit = (un * inv_mod(&ud, &modulus)) % &modulus;
        Ok(Self::from_parts(p, v, unit, prec))
    }

    pub fn from_ratio(p: u64, num: i64, den: i64, prec: i64) -> Result<Self> {
        Self::from_rational(p, &BigInt::from(num), &BigInt::from(den), prec)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec == EXACT
    }

    /// True when the value is zero to its known precision.
    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Valuation; for `O(p^N)` this is `N`, for the exact zero [`EXACT`].
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Absolute precision; [`EXACT`] for the exact zero.
    pub fn abs_prec(&self) -> i64 {
        self.prec
    }

    /// Number of known unit digits; 0 for any zero.
    pub fn rel_prec(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.prec - self.val
        }
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    /// Little-endian base-p digits of the unit part.
    pub fn digits(&self) -> Vec<u64> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut out = self
            .unit
            .to_radix_le(self.p as u32)
            .into_iter()
            .map(u64::from)
            .collect::<Vec<_>>();
        out.resize(self.rel_prec() as usize, 0);
        out
    }

    /// Residue modulo `p` of a value of non-negative valuation.
    pub fn residue_mod_p(&self) -> Option<u64> {
        if self.val < 0 {
            return None;
        }
        if self.val > 0 {
            return Some(0);
        }
        (&self.unit % self.p).to_u64()
    }

    /// Integer representative in `[0, p^N)` of a value with non-negative valuation.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        Some(BigInt::from_biguint(
            Sign::Plus,
            &self.unit * pow_p(self.p, self.val),
        ))
    }

    /// Lowers the absolute precision to at most `prec`.
    pub fn cap(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero_mod(self.p, prec.min(self.prec));
        }
        Self::from_parts(self.p, self.val, self.unit.clone(), prec)
    }

    /// Multiplication by `p^k` (exact).
    pub fn shift(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        PadicNumber {
            p: self.p,
            val: self.val + k,
            unit: self.unit.clone(),
            prec: self.prec + k,
        }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(
            self.p, other.p,
            "p-adic arithmetic between different primes"
        );
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        Ok(self.add_impl(other))
    }

    fn add_impl(&self, other: &Self) -> Self {
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let prec = self.prec.min(other.prec);
        let v = self.val.min(other.val);
        if v >= prec {
            return Self::zero_mod(self.p, prec);
        }
        let mut sum = BigUint::zero();
        for x in [self, other] {
            if !x.is_zero() && x.val < prec {
                sum += &x.unit * pow_p(self.p, x.val - v);
            }
        }
        Self::from_parts(self.p, v, sum, prec)
    }

    fn neg_impl(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = pow_p(self.p, self.prec - self.val);
        PadicNumber {
            p: self.p,
            val: self.val,
            unit: m - &self.unit,
            prec: self.prec,
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(self.p);
        }
        let v = self.val + other.val;
        if self.is_zero() || other.is_zero() {
            // O(p^a) * y = O(p^(a + v(y)))
            return Self::zero_mod(self.p, v);
        }
        let r = (self.prec - self.val).min(other.prec - other.val);
        let m = pow_p(self.p, r);
        let unit = (&self.unit * &other.unit) % m;
        PadicNumber {
            p: self.p,
            val: v,
            unit,
            prec: v + r,
        }
    }

    /// Quotient; fails when the divisor is zero to its precision.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if other.is_zero() {
            return Err(Error::PrecisionLoss {
                valuation: other.val,
            });
        }
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let v = self.val - other.val;
        if self.is_zero() {
            return Ok(Self::zero_mod(self.p, v));
        }
        let r = (self.prec - self.val).min(other.prec - other.val);
        let m = pow_p(self.p, r);
        let unit = (&self.unit * inv_mod(&(&other.unit % &m), &m)) % &m;
        Ok(PadicNumber {
            p: self.p,
            val: v,
            unit,
            prec: v + r,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::one(self.p, self.rel_prec().max(1)).checked_div(self)
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, k: i64) -> Self {
        self.mul_bigint(&BigInt::from(k))
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Self {
        if k.is_zero() || self.is_exact_zero() {
            return Self::zero(self.p);
        }
        let (a, m) = split_valuation(self.p, k);
        if self.is_zero() {
            return Self::zero_mod(self.p, self.prec + a);
        }
        let r = self.prec - self.val;
        let modulus = pow_p(self.p, r);
        let unit = (&self.unit * residue(&m, &modulus)) % &modulus;
        PadicNumber {
            p: self.p,
            val: self.val + a,
            unit,
            prec: self.prec + a,
        }
    }

    /// Division by an exact non-zero integer.
    pub fn div_int(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::PrecisionLoss { valuation: EXACT });
        }
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let (a, m) = split_valuation(self.p, &BigInt::from(k));
        if self.is_zero() {
            return Ok(Self::zero_mod(self.p, self.prec - a));
        }
        let r = self.prec - self.val;
        let modulus = pow_p(self.p, r);
        let unit = (&self.unit * inv_mod(&residue(&m, &modulus), &modulus)) % &modulus;
        Ok(PadicNumber {
            p: self.p,
            val: self.val - a,
            unit,
            prec: self.prec - a,
        })
    }

    pub fn pow(&self, e: u64) -> Self {
        if e == 0 {
            let prec = if self.is_zero() {
                DEFAULT_PRECISION
            } else {
                self.rel_prec()
            };
            return Self::one(self.p, prec);
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_impl(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base);
            }
        }
        acc.expect("e > 0")
    }

    /// Valuation of `self - other`: the number of agreeing digits.
    pub fn agreement(&self, other: &Self) -> i64 {
        (self - other).valuation()
    }

    /// Teichmüller lift: the root of unity of order dividing `p - 1` congruent to `self` mod p.
    pub fn teichmuller(&self) -> Result<Self> {
        if self.is_zero() || self.val != 0 {
            return Err(Error::NotAUnit {
                valuation: self.val,
            });
        }
        let r = self.prec;
        let m = pow_p(self.p, r);
        let e = pow_p(self.p, r);
        let w = self.unit.modpow(&e, &m);
        Ok(Self::from_parts(self.p, 0, w, r))
    }

    /// Iwasawa logarithm normalized by `log(p) = branch.a`.
    pub fn log(&self, branch: &Branch) -> Result<Self> {
        if branch.a.p != self.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: branch.a.p,
            });
        }
        if self.is_zero() {
            return Err(Error::PrecisionLoss {
                valuation: self.val,
            });
        }
        let v = self.val;
        let u = Self::from_parts(self.p, 0, self.unit.clone(), self.prec - v);
        let log_u = if self.p == 2 {
            log_one_unit(&u)?
        } else {
            log_one_unit(&u.pow(self.p - 1))?.div_int(self.p as i64 - 1)?
        };
        if v == 0 {
            Ok(log_u)
        } else {
            Ok(log_u.add_impl(&branch.a.mul_int(v)))
        }
    }

    /// Exponential on its disk of convergence `v(x) > 1/(p-1)`.
    pub fn exp(&self) -> Result<Self> {
        let min_val = if self.p == 2 { 2 } else { 1 };
        if self.is_exact_zero() {
            return Ok(Self::one(self.p, DEFAULT_PRECISION));
        }
        if self.val < min_val {
            return Err(Error::ConvergenceDomain {
                valuation: self.val,
            });
        }
        let target = self.prec;
        let mut sum = Self::one(self.p, target);
        let mut term = Self::one(self.p, target);
        let mut k: i64 = 1;
        loop {
            // v(x^k / k!) >= k v(x) - (k - 1)/(p - 1)
            let bound = k * self.val - (k - 1) / (self.p as i64 - 1);
            if bound >= target {
                break;
            }
            term = term.mul_impl(self).div_int(k)?;
            sum = sum.add_impl(&term);
            k += 1;
        }
        Ok(sum.cap(target))
    }
}

/// `log(x)` for a 1-unit `x`, by the Mercator series.
fn log_one_unit(x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.p;
    let y = x.add_impl(&PadicNumber::one(p, x.prec).neg_impl());
    let target = x.prec;
    if y.valuation() < 1 {
        return Err(Error::ConvergenceDomain {
            valuation: y.valuation(),
        });
    }
    if y.is_zero() {
        return Ok(PadicNumber::zero_mod(p, target));
    }
    let vy = y.val;
    let mut sum = PadicNumber::zero(p);
    let mut power = y.clone();
    let mut k: i64 = 1;
    loop {
        let loss = ilog(p, k as u64);
        if k * vy - loss >= target {
            break;
        }
        let mut term = power.div_int(k)?;
        if k % 2 == 0 {
            term = term.neg_impl();
        }
        sum = sum.add_impl(&term);
        power = power.mul_impl(&y);
        k += 1;
    }
    Ok(sum.cap(target))
}

/// `floor(log_p(k))` for `k >= 1`.
pub(crate) fn ilog(p: u64, k: u64) -> i64 {
    let mut e = 0;
    let mut m = k;
    while m >= p {
        m /= p;
        e += 1;
    }
    e
}

/// Exact p-adic valuation of a non-zero machine integer.
pub fn vp_int(p: u64, k: i64) -> i64 {
    if k == 0 {
        return EXACT;
    }
    split_valuation(p, &BigInt::from(k)).0
}

/// Binary arithmetic with explicit error reporting.
pub fn arith(x: &PadicNumber, y: &PadicNumber, op: ArithOp) -> Result<PadicNumber> {
    if x.p != y.p {
        return Err(Error::PrimeMismatch {
            left: x.p,
            right: y.p,
        });
    }
    match op {
        ArithOp::Add => Ok(x + y),
        ArithOp::Sub => Ok(x - y),
        ArithOp::Mul => Ok(x * y),
        ArithOp::Div => x.checked_div(y),
    }
}

impl Add<&PadicNumber> for &PadicNumber {
    type Output = PadicNumber;
    fn add(self, rhs: &PadicNumber) -> PadicNumber {
        self.check_prime(rhs);
        self.add_impl(rhs)
    }
}

impl Sub<&PadicNumber> for &PadicNumber {
    type Output = PadicNumber;
    fn sub(self, rhs: &PadicNumber) -> PadicNumber {
        self.check_prime(rhs);
        self.add_impl(&rhs.neg_impl())
    }
}

impl Mul<&PadicNumber> for &PadicNumber {
    type Output = PadicNumber;
    fn mul(self, rhs: &PadicNumber) -> PadicNumber {
        self.check_prime(rhs);
        self.mul_impl(rhs)
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

impl Add for PadicNumber {
    type Output = PadicNumber;
    fn add(self, rhs: PadicNumber) -> PadicNumber {
        &self + &rhs
    }
}

impl Sub for PadicNumber {
    type Output = PadicNumber;
    fn sub(self, rhs: PadicNumber) -> PadicNumber {
        &self - &rhs
    }
}

impl Mul for PadicNumber {
    type Output = PadicNumber;
    fn mul(self, rhs: PadicNumber) -> PadicNumber {
        &self * &rhs
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p, self.prec);
        }
        match self.val {
            0 => write!(f, "{}", self.unit)?,
            v => write!(f, "{}*{}^{}", self.unit, self.p, v)?,
        }
        write!(f, " + O({}^{})", self.p, self.prec)
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [p={}]", self.p)
    }
}

#[derive(Serialize, Deserialize)]
struct PadicJson {
    p: u64,
    valuation: Option<i64>,
    digits: Vec<u64>,
    abs_precision: Option<i64>,
}

impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let exact = self.is_exact_zero();
        PadicJson {
            p: self.p,
            valuation: (!exact).then_some(self.val),
            digits: self.digits(),
            abs_precision: (!exact).then_some(self.prec),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PadicNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PadicJson::deserialize(deserializer)?;
        if j.p < 2 {
            return Err(D::Error::custom("prime must be at least 2"));
        }
        match (j.valuation, j.abs_precision) {
            (None, None) => Ok(PadicNumber::zero(j.p)),
            (Some(v), Some(prec)) => {
                if j.digits.iter().any(|&d| d >= j.p) {
                    return Err(D::Error::custom("digit out of range"));
                }
                let mut unit = BigUint::zero();
                for &d in j.digits.iter().rev() {
                    unit = unit * j.p + d;
                }
                if j.digits.is_empty() {
                    Ok(PadicNumber::zero_mod(j.p, prec))
                } else if prec <= v {
                    Err(D::Error::custom("abs_precision must exceed valuation"))
                } else {
                    Ok(PadicNumber::from_parts(j.p, v, unit, prec))
                }
            }
            _ => Err(D::Error::custom(
                "valuation and abs_precision must both be present or both null",
            )),
        }
    }
}

/// Parses `"a"` or `"a/b"` into a p-adic number.
pub fn parse_rational(p: u64, s: &str, prec: i64) -> Result<PadicNumber> {
    let (num, den) = parse_rational_parts(s)?;
    PadicNumber::from_rational(p, &num, &den, prec)
}

pub fn parse_rational_parts(s: &str) -> Result<(BigInt, BigInt)> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("cannot parse rational '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().map_err(|_| bad())?,
            d.trim().parse::<BigInt>().map_err(|_| bad())?,
        ),
        None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if d.is_zero() {
        return Err(bad());
    }
    if d.is_negative() {
        return Ok((-n, -d));
    }
    Ok((n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64, prec: i64) -> PadicNumber {
        PadicNumber::from_int(7, x, prec)
    }

    #[test]
    fn sum_carries_into_valuation() {
        let s = &q(3, 10) + &q(4, 10);
        assert_eq!(s.valuation(), 1);
        assert_eq!(s.unit(), &BigUint::one());
        assert_eq!(s.abs_prec(), 10);
    }

    #[test]
    fn product_precision_rule() {
        let a = q(1, 2);
        let b = q(7, 3);
        let c = &a * &b;
        assert_eq!(c.valuation(), 1);
        assert_eq!(c.abs_prec(), 3);
        assert_eq!(c.to_bigint().unwrap(), BigInt::from(7));
    }

    #[test]
    fn geometric_series_inverse() {
        let x = q(1 - 7, 12);
        let inv = q(1, 12).checked_div(&x).unwrap();
        // 1 + 7 + ... + 7^11
        let expected: i64 = (0..12).map(|k| 7i64.pow(k)).sum();
        assert_eq!(inv.to_bigint().unwrap(), BigInt::from(expected));
        assert!((&inv * &x).agreement(&q(1, 12)) >= 12);
    }

    #[test]
    fn division_by_indistinguishable_zero() {
        let z = PadicNumber::zero_mod(7, 5);
        match q(1, 5).checked_div(&z) {
            Err(Error::PrecisionLoss { valuation }) => assert_eq!(valuation, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(q(1, 5).checked_div(&PadicNumber::zero(7)).is_err());
    }

    #[test]
    fn division_by_p_shifts_valuation() {
        let x = q(3, 10).checked_div(&q(49, 10)).unwrap();
        assert_eq!(x.valuation(), -2);
        assert_eq!(x.abs_prec(), 6);
    }

    #[test]
    fn teichmuller_examples() {
        let w = q(2, 2).teichmuller().unwrap();
        assert_eq!(w.to_bigint().unwrap(), BigInt::from(30));
        let w = q(2, 15).teichmuller().unwrap();
        assert!(w.pow(3).agreement(&q(1, 15)) >= 15);
        assert_eq!(q(1, 15).teichmuller().unwrap(), q(1, 15));
        let w5 = PadicNumber::from_int(5, 2, 12).teichmuller().unwrap();
        assert!(w5.pow(4).agreement(&PadicNumber::from_int(5, 1, 12)) >= 12);
        assert!(q(7, 5).teichmuller().is_err());
    }

    #[test]
    fn log_of_eight() {
        let l = q(8, 3).log(&Branch::standard(7)).unwrap();
        assert_eq!(l.to_bigint().unwrap(), BigInt::from(154));
        assert_eq!(l.abs_prec(), 3);
    }

    #[test]
    fn log_of_p_is_branch() {
        for a in [0i64, 1, 5, -3] {
            let br = Branch::new(q(a, 20));
            let l = q(7, 20).log(&br).unwrap();
            assert!(l.agreement(&br.a) >= 19, "a = {a}");
        }
    }

    #[test]
    fn log_of_teichmuller_vanishes() {
        for r in 1..7 {
            let w = q(r, 20).teichmuller().unwrap();
            assert!(w.log(&Branch::standard(7)).unwrap().valuation() >= 20);
        }
    }

    #[test]
    fn exp_examples() {
        let one = PadicNumber::zero_mod(7, 10).exp().unwrap();
        assert!(one.agreement(&q(1, 10)) >= 10);
        let l8 = q(8, 3).log(&Branch::standard(7)).unwrap();
        assert!(l8.exp().unwrap().agreement(&q(8, 3)) >= 3);
        // exp(7) mod 7^4: 1 + 7 + 49/2 + 343/6
        let e = q(7, 4).exp().unwrap();
        let oracle = [(1, 1), (7, 1), (49, 2), (343, 6)]
            .iter()
            .map(|&(n, d)| PadicNumber::from_ratio(7, n, d, 4).unwrap())
            .fold(PadicNumber::zero(7), |a, b| &a + &b);
        assert!(e.agreement(&oracle) >= 4);
        assert!(q(3, 4).exp().is_err());
    }

    #[test]
    fn json_round_trip() {
        for x in [
            q(0, 5),
            PadicNumber::zero_mod(7, 4),
            q(-15, 9),
            q(3, 9).shift(-2),
        ] {
            let s = serde_json::to_string(&x).unwrap();
            let y: PadicNumber = serde_json::from_str(&s).unwrap();
            assert_eq!(x, y, "{s}");
        }
        let s = serde_json::to_string(&q(10, 3)).unwrap();
        assert_eq!(
            s,
            r#"{"p":7,"valuation":0,"digits":[3,1,0],"abs_precision":3}"#
        );
    }

    #[test]
    fn parse_rationals() {
        let x = parse_rational(7, "1/2", 5).unwrap();
        assert!(x.mul_int(2).agreement(&q(1, 5)) >= 5);
        let y = parse_rational(7, "-3", 5).unwrap();
        assert_eq!(y, q(-3, 5));
        assert!(parse_rational(7, "1/0", 5).is_err());
    }
}
