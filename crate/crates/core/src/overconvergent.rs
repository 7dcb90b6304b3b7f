//! Overconvergent functions on the closed unit disk minus the residue disk of 1,
//! in Mittag-Leffler form
//!
//! ```text
//! f(z) = sum_{k=0}^{K} a_k z^k + sum_{k=1}^{K} b_k (z - 1)^(-k)
//! ```
//!
//! Both tails have coefficient valuations tending to infinity, so `f` converges
//! on a strict neighbourhood of `{|z| <= 1, |z - 1| >= 1}`. The sup norm over
//! that region is the minimum coefficient valuation, which is what the error
//! floor `e` is measured against: the truncated representation is trusted
//! modulo `p^e` on the evaluation domain.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, ForbiddenDisk, Result};
use crate::padics::{ilog, PadicNumber, EXACT};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MLFunction {
    #[serde(skip)]
    p: u64,
    /// `a_k` for `0 <= k <= K`.
    poly: Vec<PadicNumber>,
    /// `b_k` for `1 <= k <= K`, stored at index `k - 1`.
    principal: Vec<PadicNumber>,
    #[serde(rename = "K")]
    order: usize,
    #[serde(with = "floor_serde")]
    error_floor: i64,
}

mod floor_serde {
    use super::EXACT;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &i64, s: S) -> Result<S::Ok, S::Error> {
        if *v == EXACT {
            s.serialize_none()
        } else {
            s.serialize_some(v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i64, D::Error> {
        Ok(Option::<i64>::deserialize(d)?.unwrap_or(EXACT))
    }
}

/// The 1-form `c0 dz/z + c1 dz/(z-1) + h dz`.
#[derive(Clone, Debug, PartialEq)]
pub struct MLForm {
    pub h: MLFunction,
    pub c0: PadicNumber,
    pub c1: PadicNumber,
}

/// Cohomology classes left over by [`MLForm::integrate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Obstructions {
    /// Coefficient of `dz/z`.
    pub dz_over_z: PadicNumber,
    /// Coefficient of `dz/(z-1)`.
    pub dz_over_z_minus_1: PadicNumber,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialForm {
    /// `1/(z - 1)`.
    InvZMinus1,
    /// `z^(p-1)/(z^p - 1)`, the Frobenius pullback of the `B`-part of the KZ form divided by `p`.
    FrobBForm,
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a + b
    }
}

/// In-place Taylor shift `P(x) -> P(x + s)` for `s = +-1`, by repeated synthetic division.
fn taylor_shift(c: &mut [PadicNumber], s: i64) {
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            if c[j + 1].is_exact_zero() {
                continue;
            }
            let t = if s == 1 {
                &c[j] + &c[j + 1]
            } else {
                &c[j] - &c[j + 1]
            };
            c[j] = t;
        }
    }
}

impl MLFunction {
    pub fn zero(p: u64, order: usize) -> Self {
        MLFunction {
            p,
            poly: vec![PadicNumber::zero(p); order + 1],
            principal: vec![PadicNumber::zero(p); order],
            order,
            error_floor: EXACT,
        }
    }

    pub fn constant(c: PadicNumber, order: usize) -> Self {
        let mut f = Self::zero(c.prime(), order);
        f.poly[0] = c;
        f
    }

    pub fn from_parts(
        p: u64,
        poly: Vec<PadicNumber>,
        principal: Vec<PadicNumber>,
        error_floor: i64,
    ) -> Result<Self> {
        let order = principal.len();
        if poly.len() != order + 1 {
            return Err(Error::ParameterMismatch(format!(
                "polynomial tail has {} coefficients, principal tail {}",
                poly.len(),
                order
            )));
        }
        Ok(MLFunction {
            p,
            poly,
            principal,
            order,
            error_floor,
        })
    }

    /// Restores the prime after deserialization (it is not stored per function).
    pub(crate) fn with_prime(mut self, p: u64) -> Self {
        self.p = p;
        self
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn error_floor(&self) -> i64 {
        self.error_floor
    }

    pub fn poly(&self) -> &[PadicNumber] {
        &self.poly
    }

    pub fn principal(&self) -> &[PadicNumber] {
        &self.principal
    }

    /// Coefficient of `(z - 1)^(-k)`, `k >= 1`.
    pub fn principal_coeff(&self, k: usize) -> &PadicNumber {
        &self.principal[k - 1]
    }

    /// Minimum coefficient valuation: the sup norm on the evaluation domain.
    pub fn min_valuation(&self) -> i64 {
        self.poly
            .iter()
            .chain(&self.principal)
            .map(PadicNumber::valuation)
            .min()
            .unwrap_or(EXACT)
    }

    /// Smallest valuation among the last `count` coefficients of each tail.
    pub fn tail_valuation(&self, count: usize) -> i64 {
        let c = count.min(self.order);
        self.poly[self.poly.len() - c..]
            .iter()
            .chain(&self.principal[self.order - c..])
            .map(PadicNumber::valuation)
            .min()
            .unwrap_or(EXACT)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.order != other.order {
            return Err(Error::ParameterMismatch(format!(
                "truncation orders {} and {}",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(MLFunction {
            p: self.p,
            poly: self
                .poly
                .iter()
                .zip(&other.poly)
                .map(|(a, b)| a + b)
                .collect(),
            principal: self
                .principal
                .iter()
                .zip(&other.principal)
                .map(|(a, b)| a + b)
                .collect(),
            order: self.order,
            error_floor: self.error_floor.min(other.error_floor),
        })
    }

    pub fn neg(&self) -> Self {
        MLFunction {
            p: self.p,
            poly: self.poly.iter().map(|a| -a).collect(),
            principal: self.principal.iter().map(|a| -a).collect(),
            order: self.order,
            error_floor: self.error_floor,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        MLFunction {
            p: self.p,
            poly: self.poly.iter().map(|a| a * c).collect(),
            principal: self.principal.iter().map(|a| a * c).collect(),
            order: self.order,
            error_floor: sat_add(self.error_floor, c.valuation()),
        }
    }

    /// Product, re-split into polynomial and principal parts.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let k = self.order;
        let p = self.p;
        let mut poly = vec![PadicNumber::zero(p); k + 1];
        let mut principal = vec![PadicNumber::zero(p); k];
        let mut dropped = EXACT;

        // polynomial * polynomial
        let (trunc, d) = convolve(&self.poly, &other.poly, 0);
        dropped = dropped.min(d);
        for (i, c) in trunc.into_iter().enumerate() {
            poly[i] = &poly[i] + &c;
        }
        // principal * principal: u^i u^j = u^(i+j)
        let (trunc, d) = convolve(&self.principal, &other.principal, 1);
        dropped = dropped.min(d);
        for (i, c) in trunc.into_iter().enumerate().skip(1) {
            principal[i - 1] = &principal[i - 1] + &c;
        }
        // mixed terms
        for (pp, qq) in [(self, other), (other, self)] {
            let (mp, mq) = mixed_product(&pp.poly, &qq.principal);
            for (i, c) in mp.into_iter().enumerate() {
                poly[i] = &poly[i] + &c;
            }
            for (i, c) in mq.into_iter().enumerate() {
                principal[i] = &principal[i] + &c;
            }
        }

        let vf = self.min_valuation();
        let vg = other.min_valuation();
        let floor = dropped
            .min(sat_add(self.error_floor, vg))
            .min(sat_add(other.error_floor, vf))
            .min(sat_add(self.error_floor, other.error_floor));
        Ok(MLFunction {
            p,
            poly,
            principal,
            order: k,
            error_floor: floor,
        })
    }

    /// Multiplication by `1/(z - 1)`.
    pub fn mul_inv_z_minus_1(&self) -> Result<Self> {
        self.mul(&Self::special(
            SpecialForm::InvZMinus1,
            self.p,
            self.order,
            EXACT,
        ))
    }

    /// Evaluation at a point with `|z| <= 1` and `|z - 1| = 1`.
    pub fn eval(&self, z: &PadicNumber) -> Result<PadicNumber> {
        if z.prime() != self.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: z.prime(),
            });
        }
        if z.valuation() < 0 {
            return Err(Error::Forbidden(ForbiddenDisk::Infinity));
        }
        let prec = z.abs_prec().min(self.precision_hint());
        let zm1 = z - &PadicNumber::one(self.p, prec);
        if zm1.valuation() > 0 {
            return Err(Error::Forbidden(ForbiddenDisk::One));
        }
        let u = zm1.inverse()?;
        let horner = |coeffs: &[PadicNumber], x: &PadicNumber| {
            coeffs
                .iter()
                .rev()
                .fold(PadicNumber::zero(self.p), |acc, c| &(&acc * x) + c)
        };
        let pol = horner(&self.poly, z);
        let pri = &horner(&self.principal, &u) * &u;
        Ok((&pol + &pri).cap(self.error_floor))
    }

    fn precision_hint(&self) -> i64 {
        self.poly
            .iter()
            .chain(&self.principal)
            .map(PadicNumber::abs_prec)
            .min()
            .unwrap_or(EXACT)
            .max(1)
    }

    /// Value at `z = 0`: `a_0 + sum_k b_k (-1)^k`.
    pub fn value_at_zero(&self) -> PadicNumber {
        self.principal
            .iter()
            .enumerate()
            .fold(self.poly[0].clone(), |acc, (i, b)| {
                if i % 2 == 0 {
                    &acc - b
                } else {
                    &acc + b
                }
            })
    }

    /// Mittag-Leffler form of `1/(z-1)` or of `z^(p-1)/(z^p - 1)`.
    ///
    /// For the latter, partial fractions over the p-th roots of unity give
    /// `(1/p) sum_zeta 1/(z - zeta)`; re-expanding each term in `1/(z-1)` yields
    /// integer coefficients `b_k = sum_{i = 0 mod p, i < k} C(k-1, i) (-1)^(k-1-i)`
    /// with `v(b_k) >= ceil((k-1)/(p-1)) - 1`.
    pub fn special(kind: SpecialForm, p: u64, order: usize, prec: i64) -> Self {
        let mut f = Self::zero(p, order);
        match kind {
            SpecialForm::InvZMinus1 => {
                if order >= 1 {
                    f.principal[0] = if prec == EXACT {
                        PadicNumber::one(p, 1 << 20)
                    } else {
                        PadicNumber::one(p, prec)
                    };
                }
            }
            SpecialForm::FrobBForm => {
                let mut row = vec![BigInt::one()];
                for k in 1..=order {
                    // row holds C(k-1, .)
                    let mut b = BigInt::zero();
                    for (i, c) in row.iter().enumerate().step_by(p as usize) {
                        if (k - 1 - i) % 2 == 0 {
                            b += c;
                        } else {
                            b -= c;
                        }
                    }
                    f.principal[k - 1] = PadicNumber::from_bigint(p, &b, prec);
                    let mut next = vec![BigInt::one(); row.len() + 1];
                    for i in 1..row.len() {
                        next[i] = &row[i - 1] + &row[i];
                    }
                    row = next;
                }
                f.error_floor = (((order as i64) + p as i64 - 2) / (p as i64 - 1) - 1).min(prec);
            }
        }
        f
    }

    /// `f / z`, valid when `f(0) = 0` to valuation `tol`.
    ///
    /// Uses `u^j / z = sum_{i=1}^{j} (-1)^(j-i) u^i + (-1)^j / z` with `u = 1/(z-1)`;
    /// the net `1/z` coefficient is `f(0)` and is dropped after the check.
    pub fn divide_by_z(&self, tol: i64) -> Result<Self> {
        let f0 = self.value_at_zero();
        if f0.valuation() < tol {
            return Err(Error::NonzeroAtOrigin {
                valuation: f0.valuation(),
            });
        }
        let k = self.order;
        let mut poly = vec![PadicNumber::zero(self.p); k + 1];
        poly[..k].clone_from_slice(&self.poly[1..]);
        let mut principal = vec![PadicNumber::zero(self.p); k];
        if k > 0 {
            principal[k - 1] = self.principal[k - 1].clone();
            for i in (0..k - 1).rev() {
                principal[i] = &self.principal[i] - &principal[i + 1];
            }
        }
        Ok(MLFunction {
            p: self.p,
            poly,
            principal,
            order: k,
            error_floor: self.error_floor,
        })
    }
}

impl MLForm {
    pub fn new(h: MLFunction) -> Self {
        let p = h.p;
        MLForm {
            h,
            c0: PadicNumber::zero(p),
            c1: PadicNumber::zero(p),
        }
    }

    /// Antiderivative normalized to vanish at 0, plus the `dz/z` and `dz/(z-1)` classes.
    ///
    /// `dF = form - c0' dz/z - c1' dz/(z-1)`.
    pub fn integrate(&self) -> Result<(MLFunction, Obstructions)> {
        let h = &self.h;
        let p = h.p;
        let k = h.order;
        let mut poly = vec![PadicNumber::zero(p); k + 1];
        let mut floor = h.error_floor;
        for i in 0..k {
            poly[i + 1] = h.poly[i].div_int(i as i64 + 1)?;
        }
        if k > 0 && !h.poly[k].is_exact_zero() {
            let lost = h.poly[k].div_int(k as i64 + 1)?;
            floor = floor.min(lost.valuation());
        }
        let mut principal = vec![PadicNumber::zero(p); k];
        for j in 2..=k {
            principal[j - 2] = h.principal[j - 1].div_int(1 - j as i64)?;
        }
        if floor != EXACT {
            floor -= ilog(p, 2 * k as u64 + 1);
        }
        let c1 = match k {
            0 => self.c1.clone(),
            _ => &self.c1 + &h.principal[0],
        };
        let mut f = MLFunction {
            p,
            poly,
            principal,
            order: k,
            error_floor: floor,
        };
        let v0 = f.value_at_zero();
        f.poly[0] = -&v0;
        Ok((
            f,
            Obstructions {
                dz_over_z: self.c0.clone(),
                dz_over_z_minus_1: c1,
            },
        ))
    }
}

/// Truncated convolution of two coefficient vectors whose entries sit at degrees
/// `offset, offset+1, ...`; returns coefficients by total degree (up to the same
/// top degree) and the minimum valuation among dropped products.
fn convolve(a: &[PadicNumber], b: &[PadicNumber], offset: usize) -> (Vec<PadicNumber>, i64) {
    let p = a.first().or(b.first()).map_or(2, PadicNumber::prime);
    let top = a.len() + offset - 1;
    let mut out = vec![PadicNumber::zero(p); top + 1];
    let vb: Vec<i64> = b.iter().map(PadicNumber::valuation).collect();
    // suffix minima of vb
    let mut suffix = vec![EXACT; vb.len() + 1];
    for j in (0..vb.len()).rev() {
        suffix[j] = suffix[j + 1].min(vb[j]);
    }
    let mut dropped = EXACT;
    for (i, x) in a.iter().enumerate() {
        if x.is_exact_zero() {
            continue;
        }
        let di = i + offset;
        for (j, y) in b.iter().enumerate() {
            let d = di + j + offset;
            if d > top {
                dropped = dropped.min(sat_add(x.valuation(), suffix[j]));
                break;
            }
            if y.is_exact_zero() {
                continue;
            }
            out[d] = &out[d] + &(x * y);
        }
    }
    (out, dropped)
}

/// `P(z) * Q(u)` with `u = 1/(z-1)`, split into a polynomial in `z` and a principal part.
fn mixed_product(
    poly: &[PadicNumber],
    principal: &[PadicNumber],
) -> (Vec<PadicNumber>, Vec<PadicNumber>) {
    let p = poly[0].prime();
    let k = principal.len();
    let mut out_poly = vec![PadicNumber::zero(p); k + 1];
    let mut out_pri = vec![PadicNumber::zero(p); k];
    if poly.iter().all(PadicNumber::is_exact_zero)
        || principal.iter().all(PadicNumber::is_exact_zero)
    {
        return (out_poly, out_pri);
    }
    // P in powers of t = z - 1
    let mut c = poly.to_vec();
    taylor_shift(&mut c, 1);
    // t^m u^j = t^(m-j) or u^(j-m)
    let mut t_poly = vec![PadicNumber::zero(p); k + 1];
    for (m, cm) in c.iter().enumerate() {
        if cm.is_exact_zero() {
            continue;
        }
        for (jj, q) in principal.iter().enumerate() {
            if q.is_exact_zero() {
                continue;
            }
            let j = jj + 1;
            let prod = cm * q;
            if m >= j {
                t_poly[m - j] = &t_poly[m - j] + &prod;
            } else {
                out_pri[j - m - 1] = &out_pri[j - m - 1] + &prod;
            }
        }
    }
    // back to powers of z
    taylor_shift(&mut t_poly, -1);
    out_poly.clone_from_slice(&t_poly);
    (out_poly, out_pri)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P: u64 = 7;
    const N: i64 = 20;

    fn q(x: i64) -> PadicNumber {
        PadicNumber::from_int(P, x, N)
    }

    fn ml(poly: &[i64], principal: &[i64], order: usize) -> MLFunction {
        let mut f = MLFunction::zero(P, order);
        for (i, &c) in poly.iter().enumerate() {
            f.poly[i] = q(c);
        }
        for (i, &c) in principal.iter().enumerate() {
            f.principal[i] = q(c);
        }
        f
    }

    fn random_ml(rng: &mut ChaCha8Rng, order: usize) -> MLFunction {
        let mut f = MLFunction::zero(P, order);
        for i in 0..4 {
            f.poly[i] = q(rng.gen_range(-50..50));
            f.principal[i] = q(rng.gen_range(-50..50));
        }
        f
    }

    fn random_good_point(rng: &mut ChaCha8Rng) -> PadicNumber {
        loop {
            let z = rng.gen_range(-100_000i64..100_000);
            if z.rem_euclid(7) != 1 {
                return q(z);
            }
        }
    }

    #[test]
    fn z_times_inverse() {
        let z = ml(&[0, 1], &[], 8);
        let u = ml(&[], &[1], 8);
        let prod = z.mul(&u).unwrap();
        assert_eq!(prod, ml(&[1], &[1], 8));
        let uu = u.mul(&u).unwrap();
        assert_eq!(uu, ml(&[], &[0, 1], 8));
    }

    #[test]
    fn mul_matches_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let f = random_ml(&mut rng, 12);
            let g = random_ml(&mut rng, 12);
            let h = random_ml(&mut rng, 12);
            let fg = f.mul(&g).unwrap();
            assert_eq!(fg, g.mul(&f).unwrap());
            let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
            let rhs = fg.add(&f.mul(&h).unwrap()).unwrap();
            assert!(lhs.sub(&rhs).unwrap().min_valuation() >= N);
            let z = random_good_point(&mut rng);
            let direct = &f.eval(&z).unwrap() * &g.eval(&z).unwrap();
            assert!(fg.eval(&z).unwrap().agreement(&direct) >= N - 1);
        }
    }

    #[test]
    fn mixed_product_unique_split() {
        // z^3 (z-1)^-2 = z + 2 + 3/(z-1) + 1/(z-1)^2
        let f = ml(&[0, 0, 0, 1], &[], 6).mul(&ml(&[], &[0, 1], 6)).unwrap();
        assert_eq!(f, ml(&[2, 1], &[3, 1], 6));
        let resplit = f.add(&MLFunction::zero(P, 6)).unwrap();
        assert_eq!(resplit, f);
    }

    #[test]
    fn eval_examples() {
        let u = ml(&[], &[1], 4);
        assert!(u.eval(&q(0)).unwrap().agreement(&q(-1)) >= N);
        assert!(matches!(
            u.eval(&q(8)),
            Err(Error::Forbidden(ForbiddenDisk::One))
        ));
        let inf = PadicNumber::from_ratio(P, 1, 7, N).unwrap();
        assert!(matches!(
            u.eval(&inf),
            Err(Error::Forbidden(ForbiddenDisk::Infinity))
        ));
    }

    #[test]
    fn frob_form_residue_and_value_at_zero() {
        let order = 32 * P as usize;
        let f = MLFunction::special(SpecialForm::FrobBForm, P, order, N);
        assert_eq!(f.principal_coeff(1), &q(1));
        assert!(f.value_at_zero().valuation() >= f.error_floor());
        for k in 1..=order {
            let bound = (k as i64 - 1 + P as i64 - 2) / (P as i64 - 1) - 1;
            assert!(f.principal_coeff(k).valuation() >= bound.min(N), "k = {k}");
        }
    }

    #[test]
    fn frob_form_matches_rational_function() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let order = 32 * P as usize;
        let f = MLFunction::special(SpecialForm::FrobBForm, P, order, N + 5);
        for _ in 0..10 {
            let z = loop {
                let z = random_good_point(&mut rng);
                if z.valuation() == 0 {
                    break z;
                }
            };
            let one = PadicNumber::one(P, N + 5);
            let oracle = z.pow(P - 1).checked_div(&(&z.pow(P) - &one)).unwrap();
            assert!(f.eval(&z).unwrap().agreement(&oracle) >= N, "{z}");
        }
    }

    #[test]
    fn integrate_examples() {
        let (f, obs) = MLForm::new(ml(&[0, 0, 1], &[], 6)).integrate().unwrap();
        assert_eq!(f.poly()[3], PadicNumber::from_ratio(P, 1, 3, N).unwrap());
        assert!(obs.dz_over_z.is_exact_zero() && obs.dz_over_z_minus_1.is_exact_zero());

        let (f, obs) = MLForm::new(ml(&[], &[0, 1], 6)).integrate().unwrap();
        // -(z-1)^-1 - 1
        assert_eq!(f.poly()[0], q(-1));
        assert_eq!(f.principal_coeff(1), &q(-1));
        assert!(obs.dz_over_z_minus_1.is_exact_zero());
        assert!(f.value_at_zero().valuation() >= N);
    }

    #[test]
    fn degree_one_gauge_integral() {
        let order = 32 * P as usize;
        let u = MLFunction::special(SpecialForm::InvZMinus1, P, order, N);
        let frob = MLFunction::special(SpecialForm::FrobBForm, P, order, N);
        let (h, obs) = MLForm::new(u.sub(&frob).unwrap()).integrate().unwrap();
        assert!(obs.dz_over_z_minus_1.valuation() >= N);
        // dividing by k - 1 costs up to log_p(K) digits
        assert!(h.value_at_zero().valuation() >= N - 3);
    }

    #[test]
    fn derivative_of_primitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_ml(&mut rng, 10);
        let (prim, obs) = MLForm::new(f.clone()).integrate().unwrap();
        // differentiate coefficientwise
        let mut d = MLFunction::zero(P, 10);
        for k in 1..=10 {
            d.poly[k - 1] = prim.poly()[k].mul_int(k as i64);
        }
        for k in 1..10 {
            d.principal[k] = prim.principal_coeff(k).mul_int(-(k as i64));
        }
        d.principal[0] = obs.dz_over_z_minus_1.clone();
        assert!(d.sub(&f).unwrap().min_valuation() >= N - 1);
    }

    #[test]
    fn divide_by_z_examples() {
        let z2 = ml(&[0, 0, 1], &[], 6);
        assert_eq!(z2.divide_by_z(N).unwrap(), ml(&[0, 1], &[], 6));
        let f = ml(&[1], &[1], 6);
        assert_eq!(f.divide_by_z(N).unwrap(), ml(&[], &[1], 6));
        let g = ml(&[1], &[], 6);
        assert!(matches!(
            g.divide_by_z(N),
            Err(Error::NonzeroAtOrigin { .. })
        ));
    }

    #[test]
    fn divide_by_z_matches_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let mut f = random_ml(&mut rng, 10);
            let v0 = f.value_at_zero();
            f.poly[0] = &f.poly[0] - &v0;
            let g = f.divide_by_z(N).unwrap();
            let z = loop {
                let z = random_good_point(&mut rng);
                if z.valuation() == 0 {
                    break z;
                }
            };
            assert!((&g.eval(&z).unwrap() * &z).agreement(&f.eval(&z).unwrap()) >= N - 1);
        }
    }

    #[test]
    fn json_round_trip() {
        let f = MLFunction::special(SpecialForm::FrobBForm, P, 10, N);
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"poly\"") && s.contains("\"principal\"") && s.contains("\"K\":10"));
        let back: MLFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back.with_prime(P), f);
    }
}
