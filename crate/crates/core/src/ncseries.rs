//! Truncated noncommutative power series in `A`, `B` over `Q_p`.
//!
//! `GroupElement` stores one coefficient per word of length at most the
//! truncation level, densely, in word-index order. Degree truncation plays
//! the role of the weight filtration. Group-like elements (coefficients
//! satisfying the shuffle relations) are the points of the truncated
//! prounipotent group; the coefficient of a word `w` is the coordinate
//! `alpha_w`.

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::padics::{PadicNumber, EXACT};
use crate::words::{index_of, shuffle, split_index, standard_factorization, Letter, Word};

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    p: u64,
    level: usize,
    prec: i64,
    coeffs: Vec<PadicNumber>,
}

/// A series with vanishing constant term; group-likes are exponentials of primitive ones.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement(GroupElement);

/// Outcome of a shuffle-relation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupLikeReport {
    pub is_grouplike: bool,
    /// Smallest valuation among all relation defects (the constant-term defect included).
    pub worst_valuation: i64,
    /// The word pair realizing the worst defect; `None` means the constant term.
    pub worst_pair: Option<(String, String)>,
}

impl GroupElement {
    pub fn zero(p: u64, level: usize, prec: i64) -> Self {
        GroupElement {
            p,
            level,
            prec,
            coeffs: vec![PadicNumber::zero(p); Word::count_up_to(level)],
        }
    }

    pub fn one(p: u64, level: usize, prec: i64) -> Self {
        let mut x = Self::zero(p, level, prec);
        x.coeffs[0] = PadicNumber::one(p, prec);
        x
    }

    /// `c * X` for a single letter.
    pub fn letter(p: u64, level: usize, prec: i64, letter: Letter, c: PadicNumber) -> Self {
        let mut x = Self::zero(p, level, prec);
        if level >= 1 {
            x.coeffs[Word::new(vec![letter]).index()] = c;
        }
        x
    }

    /// Builds a series from `(word, coefficient)` pairs; missing words are zero.
    pub fn from_terms<I>(p: u64, level: usize, prec: i64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, PadicNumber)>,
    {
        let mut x = Self::zero(p, level, prec);
        for (w, c) in terms {
            x.set(&w, c)?;
        }
        Ok(x)
    }

    /// Series from the full dense coefficient vector in word-index order.
    pub fn from_dense(p: u64, level: usize, prec: i64, coeffs: Vec<PadicNumber>) -> Result<Self> {
        if coeffs.len() != Word::count_up_to(level) {
            return Err(Error::ParameterMismatch(format!(
                "{} coefficients for level {level}",
                coeffs.len()
            )));
        }
        Ok(GroupElement {
            p,
            level,
            prec,
            coeffs,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Working precision used for constants created from this series.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coefficients(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, w: &Word) -> Result<&PadicNumber> {
        if w.len() > self.level {
            return Err(Error::WordTooLong {
                len: w.len(),
                level: self.level,
            });
        }
        Ok(&self.coeffs[w.index()])
    }

    pub fn coeff_at(&self, index: usize) -> &PadicNumber {
        &self.coeffs[index]
    }

    pub fn set(&mut self, w: &Word, c: PadicNumber) -> Result<()> {
        if w.len() > self.level {
            return Err(Error::WordTooLong {
                len: w.len(),
                level: self.level,
            });
        }
        if c.prime() != self.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: c.prime(),
            });
        }
        self.coeffs[w.index()] = c;
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.level != other.level {
            return Err(Error::ParameterMismatch(format!(
                "levels {} and {}",
                self.level, other.level
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&PadicNumber, &PadicNumber) -> PadicNumber,
    ) -> Self {
        GroupElement {
            p: self.p,
            level: self.level,
            prec: self.prec.min(other.prec),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        self.map(|x| x * c)
    }

    fn map(&self, f: impl Fn(&PadicNumber) -> PadicNumber) -> Self {
        GroupElement {
            p: self.p,
            level: self.level,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Concatenation product truncated at the level: `(xy)_w = sum_{w = uv} x_u y_v`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for idx in 0..self.coeffs.len() {
            let (len, bits) = split_index(idx);
            let mut acc = PadicNumber::zero(self.p);
            for i in 0..=len {
                let u = index_of(i, bits >> (len - i));
                let v = index_of(len - i, bits & ((1usize << (len - i)) - 1));
                let (x, y) = (&self.coeffs[u], &other.coeffs[v]);
                if x.is_exact_zero() || y.is_exact_zero() {
                    continue;
                }
                acc = &acc + &(x * y);
            }
            out.push(acc);
        }
        Ok(GroupElement {
            p: self.p,
            level: self.level,
            prec: self.prec.min(other.prec),
            coeffs: out,
        })
    }

    /// Inverse by geometric series on the nilpotent part.
    pub fn inverse(&self) -> Result<Self> {
        let c = &self.coeffs[0];
        if c.is_zero() {
            return Err(Error::ConstantTerm(
                "constant term is not invertible".into(),
            ));
        }
        let normalized = self.map(|x| x.checked_div(c).expect("non-zero divisor"));
        let mut y = normalized;
        y.coeffs[0] = PadicNumber::zero(self.p);
        let minus_y = y.map(|x| -x);
        let mut sum = Self::one(self.p, self.level, self.prec);
        let mut term = Self::one(self.p, self.level, self.prec);
        for _ in 0..self.level {
            term = term.mul(&minus_y)?;
            sum = sum.add(&term)?;
        }
        let inv_c = c.inverse()?;
        Ok(sum.scale(&inv_c))
    }

    /// Letter scaling `A -> cA, B -> cB`: the coefficient of `w` picks up `c^|w|`.
    pub fn scale_letters(&self, c: &PadicNumber) -> Self {
        let mut powers = vec![PadicNumber::one(self.p, self.prec)];
        for m in 1..=self.level {
            let next = &powers[m - 1] * c;
            powers.push(next);
        }
        let mut out = self.clone();
        for (idx, x) in out.coeffs.iter_mut().enumerate() {
            let (len, _) = split_index(idx);
            if len > 0 {
                *x = &*x * &powers[len];
            }
        }
        out
    }

    /// Letter scaling by `p^k`, exact.
    pub fn scale_letters_by_p_power(&self, k: i64) -> Self {
        let mut out = self.clone();
        for (idx, x) in out.coeffs.iter_mut().enumerate() {
            let (len, _) = split_index(idx);
            *x = x.shift(k * len as i64);
        }
        out
    }

    /// The coordinate `alpha_w`.
    pub fn alpha(&self, w: &Word) -> Result<PadicNumber> {
        self.coeff(w).cloned()
    }

    /// Right translation `x * g`; `alpha_w(xg) = sum_{w = w'w''} alpha_{w'}(x) alpha_{w''}(g)`.
    pub fn right_translate(&self, g: &Self) -> Result<Self> {
        self.mul(g)
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<LieElement> {
        let one = PadicNumber::one(self.p, self.prec);
        let defect = &self.coeffs[0] - &one;
        if defect.valuation() < self.prec.min(self.coeffs[0].abs_prec()) {
            return Err(Error::ConstantTerm(format!(
                "log needs constant term 1, defect valuation {}",
                defect.valuation()
            )));
        }
        let mut y = self.clone();
        y.coeffs[0] = PadicNumber::zero(self.p);
        let mut sum = Self::zero(self.p, self.level, self.prec);
        let mut power = y.clone();
        for k in 1..=self.level {
            let mut term = power.map(|x| x.div_int(k as i64).expect("k > 0"));
            if k % 2 == 0 {
                term = term.map(|x| -x);
            }
            sum = sum.add(&term)?;
            power = power.mul(&y)?;
        }
        Ok(LieElement(sum))
    }

    /// Commutator `xy - yx`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Image under the continuous algebra endomorphism with `A -> a`, `B -> b`.
    /// Both images must have vanishing constant term.
    pub fn substitute(&self, a: &Self, b: &Self) -> Result<Self> {
        self.check_compatible(a)?;
        self.check_compatible(b)?;
        if !a.coeffs[0].is_zero() || !b.coeffs[0].is_zero() {
            return Err(Error::ConstantTerm(
                "letter images need zero constant term".into(),
            ));
        }
        let mut images: Vec<Self> = Vec::with_capacity(self.coeffs.len());
        images.push(Self::one(self.p, self.level, self.prec));
        let mut out = self.map(|_| PadicNumber::zero(self.p));
        out.coeffs[0] = self.coeffs[0].clone();
        for idx in 1..self.coeffs.len() {
            let w = Word::from_index(idx);
            let head = match w.first() {
                Some(Letter::A) => a,
                _ => b,
            };
            let img = head.mul(&images[w.suffix_from(1).index()])?;
            let c = &self.coeffs[idx];
            if !c.is_exact_zero() {
                out = out.add(&img.scale(c))?;
            }
            images.push(img);
        }
        Ok(out)
    }

    /// Smallest valuation among all coefficients.
    pub fn min_valuation(&self) -> i64 {
        self.coeffs
            .iter()
            .map(PadicNumber::valuation)
            .min()
            .unwrap_or(EXACT)
    }

    /// Smallest absolute precision among all coefficients.
    pub fn min_abs_prec(&self) -> i64 {
        self.coeffs
            .iter()
            .map(PadicNumber::abs_prec)
            .min()
            .unwrap_or(EXACT)
    }

    /// Valuation of the worst coefficient of `self - other`.
    pub fn agreement(&self, other: &Self) -> Result<i64> {
        Ok(self.sub(other)?.min_valuation())
    }

    /// Checks every shuffle relation `x_u x_v = sum_{w in u ш v} x_w` with `|u| + |v| <= level`.
    pub fn is_grouplike(&self, tol: i64) -> GroupLikeReport {
        let one = PadicNumber::one(self.p, self.prec);
        let mut worst = (&self.coeffs[0] - &one).valuation();
        let mut worst_pair = None;
        for iu in 1..self.coeffs.len() {
            let u = Word::from_index(iu);
            if u.len() * 2 > self.level {
                break;
            }
            for v in Word::all_up_to(self.level - u.len()).skip(iu) {
                let lhs = &self.coeffs[iu] * &self.coeffs[v.index()];
                let rhs = shuffle(&u, &v)
                    .into_iter()
                    .fold(PadicNumber::zero(self.p), |acc, (w, m)| {
                        &acc + &self.coeffs[w.index()].mul_int(m as i64)
                    });
                let d = (&lhs - &rhs).valuation();
                if d < worst {
                    worst = d;
                    worst_pair = Some((u.to_string(), v.to_string()));
                }
            }
        }
        GroupLikeReport {
            is_grouplike: worst >= tol,
            worst_valuation: worst,
            worst_pair,
        }
    }
}

impl LieElement {
    /// The standard bracketing of a Lyndon word, e.g. `AAB -> [A, [A, B]]`.
    pub fn lyndon_bracket(w: &Word, p: u64, level: usize, prec: i64) -> Result<Self> {
        if w.len() > level {
            return Err(Error::WordTooLong {
                len: w.len(),
                level,
            });
        }
        if w.len() == 1 {
            let one = PadicNumber::one(p, prec);
            return Ok(LieElement(GroupElement::from_terms(
                p,
                level,
                prec,
                [(w.clone(), one)],
            )?));
        }
        let (u, v) = standard_factorization(w)
            .ok_or_else(|| Error::Invalid(format!("{w} is not a Lyndon word")))?;
        let x = Self::lyndon_bracket(&u, p, level, prec)?;
        let y = Self::lyndon_bracket(&v, p, level, prec)?;
        Ok(LieElement(x.0.bracket(&y.0)?))
    }

    pub fn new(x: GroupElement) -> Result<Self> {
        if x.coeffs[0].valuation() < x.prec {
            return Err(Error::ConstantTerm(
                "Lie elements have vanishing constant term".into(),
            ));
        }
        let mut x = x;
        x.coeffs[0] = PadicNumber::zero(x.p);
        Ok(LieElement(x))
    }

    pub fn zero(p: u64, level: usize, prec: i64) -> Self {
        LieElement(GroupElement::zero(p, level, prec))
    }

    pub fn as_series(&self) -> &GroupElement {
        &self.0
    }

    pub fn into_series(self) -> GroupElement {
        self.0
    }

    /// Exponential series, truncated at the level.
    pub fn exp(&self) -> Result<GroupElement> {
        let x = &self.0;
        let mut sum = GroupElement::one(x.p, x.level, x.prec);
        let mut term = GroupElement::one(x.p, x.level, x.prec);
        for k in 1..=x.level {
            term = term.mul(x)?.map(|c| c.div_int(k as i64).expect("k > 0"));
            sum = sum.add(&term)?;
        }
        Ok(sum)
    }

    /// Primitivity: `sum_{w in u ш v} x_w = 0` for all non-empty `u`, `v`.
    pub fn is_primitive(&self, tol: i64) -> GroupLikeReport {
        let x = &self.0;
        let mut worst = x.coeffs[0].valuation();
        let mut worst_pair = None;
        for iu in 1..x.coeffs.len() {
            let u = Word::from_index(iu);
            if u.len() * 2 > x.level {
                break;
            }
            for v in Word::all_up_to(x.level - u.len()).skip(iu) {
                let s = shuffle(&u, &v)
                    .into_iter()
                    .fold(PadicNumber::zero(x.p), |acc, (w, m)| {
                        &acc + &x.coeffs[w.index()].mul_int(m as i64)
                    });
                if s.valuation() < worst {
                    worst = s.valuation();
                    worst_pair = Some((u.to_string(), v.to_string()));
                }
            }
        }
        GroupLikeReport {
            is_grouplike: worst >= tol,
            worst_valuation: worst,
            worst_pair,
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Coeffs<'a>(&'a [PadicNumber]);
        impl Serialize for Coeffs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (i, c) in self.0.iter().enumerate() {
                    m.serialize_entry(&Word::from_index(i).to_string(), c)?;
                }
                m.end()
            }
        }
        let mut m = serializer.serialize_map(Some(3))?;
        m.serialize_entry("p", &self.p)?;
        m.serialize_entry("level", &self.level)?;
        m.serialize_entry("coefficients", &Coeffs(&self.coeffs))?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            p: u64,
            level: usize,
            coefficients: BTreeMap<String, PadicNumber>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let prec = raw
            .coefficients
            .values()
            .map(PadicNumber::abs_prec)
            .min()
            .unwrap_or(EXACT);
        let mut x = GroupElement::zero(raw.p, raw.level, prec);
        for (k, c) in raw.coefficients {
            let w: Word = k.parse().map_err(D::Error::custom)?;
            x.set(&w, c).map_err(D::Error::custom)?;
        }
        Ok(x)
    }
}
