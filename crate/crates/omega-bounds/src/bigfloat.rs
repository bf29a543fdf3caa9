//! Fixed-point arbitrary-precision reals with a tracked absolute error bound.
//!
//! A [`BigReal`] stores `mant * 10^-scale` (a `BigInt` mantissa at a fixed
//! decimal scale) together with a conservative upper bound on the absolute
//! error versus the quantity it represents. Every operation truncates the
//! mantissa back to the working scale (at most one ulp of rounding) and
//! propagates the bound, so a result always brackets the true value by
//! `value ± err`. Bounds live in [`Mag`], a tiny decimal-float magnitude type
//! whose arithmetic only ever rounds *up*.
//!
//! Design rule: mantissa truncation is toward zero and contributes one ulp;
//! every `Mag` combination is inflated by a fixed relative factor, so f64
//! rounding inside the bound arithmetic can never under-report an error.

use num::bigint::{BigInt, Sign};
use num::{One, Signed, Zero};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Mutex;

const LOG2_10: f64 = 3.321928094887362;
/// Relative inflation applied to every bound combination.
const INFLATE: f64 = 1.0 + 1e-9;

/// Non-negative magnitude `m * 10^e`, used exclusively for error bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mag {
    m: f64,
    e: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0.0, e: 0 };

    pub fn new(m: f64, e: i64) -> Mag {
        assert!(m >= 0.0 && m.is_finite(), "magnitude must be finite and non-negative");
        Mag { m, e }.norm()
    }

    fn norm(mut self) -> Mag {
        if self.m == 0.0 {
            return Mag::ZERO;
        }
        // renormalize m into [1, 10)
        let shift = self.m.log10().floor();
        if shift != 0.0 {
            self.m /= 10f64.powf(shift);
            self.e += shift as i64;
        }
        // guard against boundary rounding
        if self.m >= 10.0 {
            self.m /= 10.0;
            self.e += 1;
        }
        if self.m < 1.0 {
            self.m *= 10.0;
            self.e -= 1;
        }
        self
    }

    pub fn from_f64(v: f64) -> Mag {
        Mag::new(v.abs() * INFLATE, 0)
    }

    /// 10^-scale, slightly inflated: the bound for one truncation.
    pub fn ulp(scale: u32) -> Mag {
        Mag { m: 1.0 + 1e-9, e: -(scale as i64) }
    }

    pub fn from_log10(l: f64) -> Mag {
        let e = l.floor();
        Mag::new(10f64.powf(l - e) * INFLATE, e as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    pub fn add(self, other: Mag) -> Mag {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= other.e { (self, other) } else { (other, self) };
        let d = hi.e - lo.e;
        if d > 40 {
            return Mag::new(hi.m * INFLATE, hi.e);
        }
        Mag::new((hi.m + lo.m / 10f64.powi(d as i32)) * INFLATE, hi.e)
    }

    pub fn mul(self, other: Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        Mag::new(self.m * other.m * INFLATE, self.e + other.e)
    }

    pub fn mul_f64(self, k: f64) -> Mag {
        assert!(k >= 0.0);
        if self.is_zero() || k == 0.0 {
            return Mag::ZERO;
        }
        Mag::new(self.m * k * INFLATE, self.e)
    }

    /// Divide by a positive magnitude (used with *lower* bounds of divisors).
    pub fn div(self, other: Mag) -> Mag {
        assert!(!other.is_zero(), "division of a bound by zero magnitude");
        if self.is_zero() {
            return Mag::ZERO;
        }
        Mag::new(self.m / other.m * INFLATE, self.e - other.e)
    }

    pub fn shift10(self, k: i64) -> Mag {
        if self.is_zero() {
            return self;
        }
        Mag { m: self.m, e: self.e + k }
    }

    pub fn sqrt(self) -> Mag {
        if self.is_zero() {
            return self;
        }
        Mag::from_log10(self.log10() / 2.0 + 1e-12)
    }

    pub fn log10(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.m.log10() + self.e as f64
    }

    pub fn le(self, other: Mag) -> bool {
        if self.is_zero() {
            return true;
        }
        if other.is_zero() {
            return false;
        }
        (self.e, self.m) <= (other.e, other.m)
    }

    pub fn lt(self, other: Mag) -> bool {
        self.le(other) && self != other
    }

    pub fn to_f64_saturating(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.e > 300 {
            return f64::INFINITY;
        }
        if self.e < -300 {
            // round tiny bounds up to a representable floor
            return 1e-300;
        }
        self.m * 10f64.powi(self.e as i32)
    }

    /// Scientific-notation decimal string, e.g. `"1.300e-52"`.
    pub fn to_sci_string(self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        format!("{:.3}e{}", self.m, self.e)
    }
}

thread_local! {
    static POW10: RefCell<HashMap<u32, BigInt>> = RefCell::new(HashMap::new());
}

fn with_pow10<R>(k: u32, f: impl FnOnce(&BigInt) -> R) -> R {
    POW10.with(|cache| {
        let mut cache = cache.borrow_mut();
        let p = cache.entry(k).or_insert_with(|| BigInt::from(10u32).pow(k));
        f(p)
    })
}

/// Arbitrary-precision real: `mant * 10^-scale`, with `err` a rigorous upper
/// bound on the absolute difference from the represented quantity.
#[derive(Debug, Clone)]
pub struct BigReal {
    mant: BigInt,
    scale: u32,
    err: Mag,
}

impl BigReal {
    pub fn zero(scale: u32) -> Self {
        BigReal { mant: BigInt::zero(), scale, err: Mag::ZERO }
    }

    pub fn one(scale: u32) -> Self {
        BigReal::from_i64(1, scale)
    }

    pub fn from_i64(v: i64, scale: u32) -> Self {
        let mant = with_pow10(scale, |p| BigInt::from(v) * p);
        BigReal { mant, scale, err: Mag::ZERO }
    }

    pub fn from_u64(v: u64, scale: u32) -> Self {
        let mant = with_pow10(scale, |p| BigInt::from(v) * p);
        BigReal { mant, scale, err: Mag::ZERO }
    }

    pub fn from_u128(v: u128, scale: u32) -> Self {
        let mant = with_pow10(scale, |p| BigInt::from(v) * p);
        BigReal { mant, scale, err: Mag::ZERO }
    }

    pub fn from_bigint(v: BigInt, scale: u32) -> Self {
        let mant = with_pow10(scale, |p| v * p);
        BigReal { mant, scale, err: Mag::ZERO }
    }

    /// num/den at the working scale; at most one ulp of error.
    pub fn from_ratio(num: &BigInt, den: &BigInt, scale: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mant = with_pow10(scale, |p| num * p) / den;
        BigReal { mant, scale, err: Mag::ulp(scale) }
    }

    /// Parse an exact decimal literal like `"-0.577215"`. Exact when the
    /// literal fits the scale, one ulp otherwise.
    pub fn from_decimal_str(s: &str, scale: u32) -> Option<Self> {
        let (sign, rest) = match s.strip_prefix('-') {
            Some(r) => (-1i64, r),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let v: BigInt = digits.parse().ok()?;
        let fd = frac_part.len() as u32;
        let mut out = if fd <= scale {
            let mant = with_pow10(scale - fd, |p| &v * p);
            BigReal { mant, scale, err: Mag::ZERO }
        } else {
            let mant = with_pow10(fd - scale, |p| &v / p);
            BigReal { mant, scale, err: Mag::ulp(scale) }
        };
        if sign < 0 {
            out.mant = -out.mant;
        }
        Some(out)
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Decimal digits of working precision (the fixed-point scale).
    pub fn working_digits(&self) -> u32 {
        self.scale
    }

    pub fn err(&self) -> Mag {
        self.err
    }

    pub fn error_bound_string(&self) -> String {
        self.err.to_sci_string()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Widen the stored error bound (used when a caller folds in an analytic
    /// remainder, e.g. a series tail).
    pub fn add_err(mut self, extra: Mag) -> Self {
        self.err = self.err.add(extra);
        self
    }

    /// Upper bound on |value|.
    pub fn abs_mag_upper(&self) -> Mag {
        mag_of_scaled(&self.mant, self.scale).add(self.err)
    }

    /// Lower bound on |value| (zero when the interval may cross zero).
    pub fn abs_mag_lower(&self) -> Mag {
        let v = mag_of_scaled(&self.mant, self.scale);
        if v.is_zero() {
            return Mag::ZERO;
        }
        // deflate the central magnitude, then subtract err in log space
        let lo = v.log10() - 1e-9;
        let e = self.err;
        if e.is_zero() {
            return Mag::from_log10(lo - 1e-12);
        }
        let el = e.log10();
        if el >= lo - 1e-9 {
            return Mag::ZERO;
        }
        // value_lo >= 10^lo * (1 - 10^(el - lo))
        let f = 1.0 - 10f64.powf(el - lo);
        Mag::from_log10(lo + f.log10() - 1e-12)
    }

    /// True when value − err is strictly positive.
    pub fn is_definitely_positive(&self) -> bool {
        self.mant.sign() == Sign::Plus && !self.abs_mag_lower().is_zero()
    }

    pub fn is_definitely_negative(&self) -> bool {
        self.neg().is_definitely_positive()
    }

    /// `Some(true)` when self < other for every pair of values in the two
    /// intervals; `None` when the intervals overlap.
    pub fn definitely_lt(&self, other: &BigReal) -> Option<bool> {
        let d = other.sub(self);
        if d.is_definitely_positive() {
            return Some(true);
        }
        if d.is_definitely_negative() {
            return Some(false);
        }
        None
    }

    fn aligned(&self, scale: u32) -> BigReal {
        assert!(scale >= self.scale, "aligned() only raises the scale");
        if scale == self.scale {
            return self.clone();
        }
        let mant = with_pow10(scale - self.scale, |p| &self.mant * p);
        BigReal { mant, scale, err: self.err }
    }

    /// Move to a coarser scale, rounding half away from zero; a no-op when
    /// the requested scale is not coarser.
    pub fn round_to(&self, scale: u32) -> BigReal {
        if scale >= self.scale {
            return self.aligned(scale);
        }
        let drop = self.scale - scale;
        let mant = with_pow10(drop, |p| round_div(&self.mant, p));
        BigReal { mant, scale, err: self.err.add(Mag::ulp(scale)) }
    }

    pub fn neg(&self) -> BigReal {
        BigReal { mant: -&self.mant, scale: self.scale, err: self.err }
    }

    pub fn abs(&self) -> BigReal {
        BigReal { mant: self.mant.abs(), scale: self.scale, err: self.err }
    }

    pub fn add(&self, other: &BigReal) -> BigReal {
        let s = self.scale.max(other.scale);
        let a = self.aligned(s);
        let b = other.aligned(s);
        BigReal { mant: a.mant + b.mant, scale: s, err: a.err.add(b.err) }
    }

    pub fn sub(&self, other: &BigReal) -> BigReal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BigReal) -> BigReal {
        let s = self.scale.max(other.scale);
        let a = self.aligned(s);
        let b = other.aligned(s);
        let mant = with_pow10(s, |p| (&a.mant * &b.mant) / p);
        let err = a
            .abs_mag_upper()
            .mul(b.err)
            .add(b.abs_mag_upper().mul(a.err))
            .add(a.err.mul(b.err))
            .add(Mag::ulp(s));
        BigReal { mant, scale: s, err }
    }

    /// Multiply by an exact machine integer.
    pub fn mul_i64(&self, k: i64) -> BigReal {
        BigReal {
            mant: &self.mant * k,
            scale: self.scale,
            err: self.err.mul_f64(k.unsigned_abs() as f64),
        }
    }

    /// Divide by an exact positive machine integer (one ulp of truncation).
    pub fn div_u64(&self, k: u64) -> BigReal {
        assert!(k > 0);
        BigReal {
            mant: &self.mant / BigInt::from(k),
            scale: self.scale,
            err: self.err.mul_f64(1.0 / k as f64).add(Mag::ulp(self.scale)),
        }
    }

    pub fn div(&self, other: &BigReal) -> BigReal {
        let s = self.scale.max(other.scale);
        let a = self.aligned(s);
        let b = other.aligned(s);
        let b_lo = b.abs_mag_lower();
        assert!(!b_lo.is_zero(), "divisor interval touches zero");
        let mant = with_pow10(s, |p| (&a.mant * p) / &b.mant);
        let err = a
            .err
            .div(b_lo)
            .add(a.abs_mag_upper().mul(b.err).div(b_lo.mul(b_lo)))
            .add(Mag::ulp(s));
        BigReal { mant, scale: s, err }
    }

    pub fn recip(&self) -> BigReal {
        BigReal::one(self.scale).div(self)
    }

    /// Multiply by 10^k exactly (k ≥ 0).
    pub fn mul_pow10(&self, k: u32) -> BigReal {
        let mant = with_pow10(k, |p| &self.mant * p);
        BigReal { mant, scale: self.scale, err: self.err.shift10(i64::from(k)) }
    }

    /// Multiply by 2^k (exact for k ≥ 0, one ulp for k < 0).
    pub fn mul_pow2(&self, k: i64) -> BigReal {
        let pw = Mag::from_log10(k as f64 * std::f64::consts::LOG10_2);
        if k >= 0 {
            BigReal { mant: &self.mant << (k as usize), scale: self.scale, err: self.err.mul(pw) }
        } else {
            BigReal {
                mant: &self.mant >> ((-k) as usize),
                scale: self.scale,
                err: self.err.mul(pw).add(Mag::ulp(self.scale)),
            }
        }
    }

    pub fn pow_u32(&self, mut e: u32) -> BigReal {
        let mut base = self.clone();
        let mut acc = BigReal::one(self.scale);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// √x for x ≥ 0.
    pub fn sqrt(&self) -> BigReal {
        assert!(!self.mant.is_negative(), "sqrt of negative value");
        let scaled = with_pow10(self.scale, |p| &self.mant * p);
        let mant = scaled.sqrt();
        let lo = self.abs_mag_lower();
        let err = if lo.is_zero() {
            self.err.sqrt().add(Mag::ulp(self.scale))
        } else {
            self.err.div(lo.sqrt().mul_f64(2.0)).add(Mag::ulp(self.scale))
        };
        BigReal { mant, scale: self.scale, err }
    }

    /// Truncate toward zero to a BigInt.
    pub fn trunc_bigint(&self) -> BigInt {
        with_pow10(self.scale, |p| &self.mant / p)
    }

    /// Floor to a BigInt.
    pub fn floor_bigint(&self) -> BigInt {
        with_pow10(self.scale, |p| {
            let q = &self.mant / p;
            if self.mant.is_negative() && &q * p != self.mant {
                q - 1
            } else {
                q
            }
        })
    }

    /// Approximate f64 value (magnitude-robust; huge values go to ±inf).
    pub fn to_f64_approx(&self) -> f64 {
        let sign = match self.mant.sign() {
            Sign::Minus => -1.0,
            Sign::NoSign => return 0.0,
            Sign::Plus => 1.0,
        };
        let a = self.mant.magnitude();
        let bits = a.bits();
        let shift = bits.saturating_sub(53);
        let top: f64 = (a >> shift).to_string().parse().unwrap_or(f64::INFINITY);
        let log2v = top.log2() + shift as f64 - self.scale as f64 * LOG2_10;
        if log2v > 1023.0 {
            return sign * f64::INFINITY;
        }
        if log2v < -1000.0 {
            return 0.0;
        }
        sign * log2v.exp2()
    }

    /// Fixed-point decimal string rounded (half away from zero) to
    /// `frac_digits` digits after the point.
    pub fn to_decimal_string(&self, frac_digits: u32) -> String {
        let r = self.round_to(frac_digits.min(self.scale));
        let frac_digits = r.scale;
        let ten = with_pow10(frac_digits, |p| p.clone());
        let neg = r.mant.is_negative();
        let a = r.mant.abs();
        let int = &a / &ten;
        let frac = &a % &ten;
        let mut s = String::new();
        if neg && !a.is_zero() {
            s.push('-');
        }
        s.push_str(&int.to_string());
        if frac_digits > 0 {
            s.push('.');
            let f = frac.to_string();
            for _ in f.len()..frac_digits as usize {
                s.push('0');
            }
            s.push_str(&f);
        }
        s
    }

    // ------------------------------------------------------------------
    // transcendental functions
    // ------------------------------------------------------------------

    /// e^x. The argument is reduced by the cached ln 2 and the remainder
    /// summed by Taylor series with an explicit geometric tail bound.
    pub fn exp(&self) -> BigReal {
        let s = self.scale;
        let xf = self.to_f64_approx();
        assert!(xf.is_finite() && xf.abs() < 1.0e7, "exp argument out of supported range");
        let k = (xf / std::f64::consts::LN_2).round() as i64;
        let w = s + 20;
        let r = self.aligned(w).sub(&ln2(w).mul_i64(k));
        let mut term = BigReal::one(w);
        let mut sum = BigReal::one(w);
        let mut i = 1u64;
        loop {
            term = term.mul(&r).div_u64(i);
            sum = sum.add(&term);
            let tmag = term.abs_mag_upper();
            if tmag.le(Mag::ulp(w).mul_f64(4.0)) || i > 400 {
                // |r| <= 0.5 + slack, so the rest is dominated by 2 * |term|
                sum = sum.add_err(tmag.mul_f64(2.0));
                break;
            }
            i += 1;
        }
        sum.mul_pow2(k).round_to(s)
    }

    /// Natural logarithm of a definitely-positive value, via
    /// ln x = 2 atanh((m−1)/(m+1)) + k ln 2 with m = x / 2^k near 1.
    pub fn ln(&self) -> BigReal {
        let s = self.scale;
        assert!(
            self.mant.sign() == Sign::Plus && !self.abs_mag_lower().is_zero(),
            "ln of a non-positive or zero-straddling value"
        );
        let w = s + 20;
        let x = self.aligned(w);
        let bits = x.mant.magnitude().bits() as f64;
        let k = (bits - 0.5 - w as f64 * LOG2_10).round() as i64;
        let m = x.mul_pow2(-k);
        let one = BigReal::one(w);
        let u = m.sub(&one).div(&m.add(&one));
        let u2 = u.mul(&u);
        let mut term = u.clone();
        let mut sum = u;
        let mut i = 1u64;
        loop {
            term = term.mul(&u2);
            let contrib = term.div_u64(2 * i + 1);
            sum = sum.add(&contrib);
            let tmag = contrib.abs_mag_upper();
            if tmag.le(Mag::ulp(w).mul_f64(4.0)) || i > 4000 {
                // |u| <= 0.2, so the remaining tail is below 2 * |contrib|
                sum = sum.add_err(tmag.mul_f64(2.0));
                break;
            }
            i += 1;
        }
        sum.mul_i64(2).add(&ln2(w).mul_i64(k)).round_to(s)
    }

    /// x^y = exp(y ln x) for definitely-positive x.
    pub fn pow(&self, y: &BigReal) -> BigReal {
        self.ln().mul(y).exp()
    }
}

fn round_div(a: &BigInt, d: &BigInt) -> BigInt {
    // round half away from zero
    let (q, r) = num::Integer::div_rem(a, d);
    if (&r * 2i32).abs() >= d.abs() {
        if a.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Upper-bound magnitude of an integer, robust past the f64 range.
pub fn mag_of_bigint(v: &BigInt) -> Mag {
    mag_of_scaled(v, 0)
}

/// Upper-bound magnitude of `mant * 10^-scale`.
fn mag_of_scaled(mant: &BigInt, scale: u32) -> Mag {
    if mant.is_zero() {
        return Mag::ZERO;
    }
    let a = mant.magnitude();
    let bits = a.bits();
    let shift = bits.saturating_sub(53);
    let top: f64 = (a >> shift).to_string().parse().unwrap_or(f64::INFINITY);
    let log10v = (top.log2() + shift as f64) / LOG2_10 - scale as f64;
    Mag::from_log10(log10v + 1e-11)
}

static LN2_CACHE: Mutex<Option<(u32, BigReal)>> = Mutex::new(None);

/// ln 2 = 2 atanh(1/3), cached at the largest scale requested so far.
pub fn ln2(scale: u32) -> BigReal {
    {
        let guard = LN2_CACHE.lock().unwrap();
        if let Some((s, v)) = guard.as_ref() {
            if *s >= scale {
                return v.round_to(scale);
            }
        }
    }
    let w = scale + 16;
    let third = BigReal::from_ratio(&BigInt::one(), &BigInt::from(3), w);
    let u2 = third.mul(&third);
    let mut term = third.clone();
    let mut sum = third;
    let mut i = 1u64;
    loop {
        term = term.mul(&u2);
        let contrib = term.div_u64(2 * i + 1);
        sum = sum.add(&contrib);
        if contrib.abs_mag_upper().le(Mag::ulp(w).mul_f64(4.0)) {
            sum = sum.add_err(contrib.abs_mag_upper());
            break;
        }
        i += 1;
    }
    let v = sum.mul_i64(2).round_to(scale + 8);
    let mut guard = LN2_CACHE.lock().unwrap();
    *guard = Some((scale + 8, v.clone()));
    v.round_to(scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference literals, used as test vectors only
    const LN2_60: &str = "0.693147180559945309417232121458176568075500134360255254120680";
    const SQRT2_50: &str = "1.41421356237309504880168872420969807856967187537694";

    fn assert_close_to_literal(v: &BigReal, lit: &str, digits: u32) {
        let want = BigReal::from_decimal_str(lit, v.scale()).unwrap();
        let diff = v.sub(&want).abs();
        let bound = Mag::new(2.0, -(digits as i64));
        assert!(
            diff.abs_mag_upper().le(bound),
            "value {} differs from {} by {} (allowed {})",
            v.to_decimal_string(digits),
            lit,
            diff.abs_mag_upper().to_sci_string(),
            bound.to_sci_string()
        );
    }

    #[test]
    fn mag_ordering_and_arithmetic() {
        let a = Mag::new(5.0, -10);
        let b = Mag::new(2.0, -9);
        assert!(a.lt(b));
        assert!(a.add(a).le(Mag::new(1.1, -9)));
        assert!(Mag::new(1.0, -9).le(a.add(a)));
        let p = a.mul(b);
        assert!(Mag::new(9.9, -19).le(p) && p.le(Mag::new(1.01, -18)));
        assert!(Mag::ZERO.le(a));
        assert!(!a.le(Mag::ZERO));
        assert_eq!(Mag::new(3.0, 2).shift10(-4), Mag::new(3.0, -2));
    }

    #[test]
    fn exact_construction_and_strings() {
        let x = BigReal::from_decimal_str("-12.345", 6).unwrap();
        assert_eq!(x.to_decimal_string(6), "-12.345000");
        assert_eq!(x.to_decimal_string(2), "-12.35"); // half away from zero
        assert_eq!(x.to_decimal_string(0), "-12");
        let y = BigReal::from_i64(7, 4);
        assert_eq!(y.to_decimal_string(4), "7.0000");
    }

    #[test]
    fn rounding_half_away() {
        let x = BigReal::from_decimal_str("0.25", 4).unwrap();
        assert_eq!(x.to_decimal_string(1), "0.3");
        let y = BigReal::from_decimal_str("-0.25", 4).unwrap();
        assert_eq!(y.to_decimal_string(1), "-0.3");
        let z = BigReal::from_decimal_str("0.24999", 5).unwrap();
        assert_eq!(z.to_decimal_string(1), "0.2");
    }

    #[test]
    fn arithmetic_brackets_reference() {
        let s = 30;
        let a = BigReal::from_decimal_str("3.25", s).unwrap();
        let b = BigReal::from_decimal_str("1.125", s).unwrap();
        let cases = [
            (a.add(&b), "4.375"),
            (a.sub(&b), "2.125"),
            (a.mul(&b), "3.65625"),
            (a.div(&b), "2.888888888888888888888888888888888888"),
        ];
        for (got, want) in cases {
            let w = BigReal::from_decimal_str(want, s).unwrap();
            let d = got.sub(&w).abs();
            assert!(d.abs_mag_upper().le(Mag::new(1.0, -25)));
        }
    }

    #[test]
    fn division_error_bound_is_honest() {
        let s = 40;
        let third = BigReal::one(s).div(&BigReal::from_i64(3, s));
        let back = third.mul(&BigReal::from_i64(3, s));
        let diff = back.sub(&BigReal::one(s)).abs();
        assert!(diff.abs_mag_upper().le(Mag::new(1.0, -37)));
        assert!(!back.err().is_zero());
    }

    #[test]
    fn ln2_reference_value() {
        let v = ln2(60);
        assert_close_to_literal(&v, LN2_60, 58);
        assert_eq!(
            v.to_decimal_string(50),
            "0.69314718055994530941723212145817656807550013436026"
        );
    }

    #[test]
    fn sqrt_reference_value() {
        let two = BigReal::from_i64(2, 55);
        let r = two.sqrt();
        assert_close_to_literal(&r, SQRT2_50, 50);
        let sq = r.mul(&r);
        let d = sq.sub(&BigReal::from_i64(2, 55)).abs();
        assert!(d.abs_mag_upper().le(Mag::new(1.0, -50)));
    }

    #[test]
    fn exp_ln_roundtrip() {
        for lit in ["0.5", "1.0", "2.75", "10.0", "0.001"] {
            let x = BigReal::from_decimal_str(lit, 45).unwrap();
            let y = x.exp().ln();
            let d = y.sub(&x).abs();
            assert!(
                d.abs_mag_upper().le(Mag::new(1.0, -40)),
                "roundtrip failed for {lit}: err {}",
                d.abs_mag_upper().to_sci_string()
            );
        }
    }

    #[test]
    fn exp_matches_f64_at_moderate_args() {
        for v in [-30.0f64, -1.0, 0.0, 0.5, 3.0, 20.0] {
            let x = BigReal::from_decimal_str(&format!("{v:.4}"), 40).unwrap();
            let got = x.exp().to_f64_approx();
            assert!(
                (got - v.exp()).abs() <= v.exp() * 1e-9,
                "exp({v}) = {got}, f64 says {}",
                v.exp()
            );
        }
    }

    #[test]
    fn exp_huge_argument() {
        // e^14167 has 6153 digits before the point; the scale stays fixed.
        let x = BigReal::from_i64(14_167, 40);
        let e = x.exp();
        let int = e.trunc_bigint().to_string();
        assert_eq!(int.len(), 6153);
        assert!(int.starts_with("4466"));
        let back = e.ln();
        let d = back.sub(&x).abs();
        assert!(d.abs_mag_upper().le(Mag::new(1.0, -30)));
    }

    #[test]
    fn exp_underflow_to_interval_zero() {
        let x = BigReal::from_i64(-7083, 30);
        let e = x.exp();
        // the value is ~1e-3076: representable only as 0 plus ulp-level error
        assert!(e.trunc_bigint().is_zero());
        assert!(e.abs_mag_upper().le(Mag::new(1.0, -25)));
    }

    #[test]
    fn ln_of_integers_vs_f64() {
        for n in [2u64, 3, 7, 10, 1_000_000, 1_400_387_903_260] {
            let x = BigReal::from_u64(n, 40);
            let l = x.ln().to_f64_approx();
            let want = (n as f64).ln();
            assert!((l - want).abs() < 1e-10 * want.max(1.0), "ln({n})");
        }
    }

    #[test]
    fn definite_comparisons() {
        let a = BigReal::from_decimal_str("1.0000001", 30).unwrap();
        let b = BigReal::one(30);
        assert_eq!(b.definitely_lt(&a), Some(true));
        assert_eq!(a.definitely_lt(&b), Some(false));
        let fuzzy = BigReal::one(30).add_err(Mag::new(1.0, 0));
        assert_eq!(fuzzy.definitely_lt(&b), None);
    }

    #[test]
    fn floor_and_trunc() {
        let x = BigReal::from_decimal_str("-2.5", 10).unwrap();
        assert_eq!(x.trunc_bigint(), BigInt::from(-2));
        assert_eq!(x.floor_bigint(), BigInt::from(-3));
        let y = BigReal::from_decimal_str("2.5", 10).unwrap();
        assert_eq!(y.floor_bigint(), BigInt::from(2));
    }

    #[test]
    fn pow_u32_and_pow_real() {
        let x = BigReal::from_decimal_str("1.5", 40).unwrap();
        let p = x.pow_u32(10);
        assert!((p.to_f64_approx() - 1.5f64.powi(10)).abs() < 1e-9);
        let two_thirds = BigReal::from_i64(2, 40).div(&BigReal::from_i64(3, 40));
        let q = BigReal::from_u64(1_000_000, 40).pow(&two_thirds);
        assert!((q.to_f64_approx() - 1e6f64.powf(2.0 / 3.0)).abs() < 1e-4);
    }
}
