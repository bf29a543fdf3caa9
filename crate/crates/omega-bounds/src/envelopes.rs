//! Explicit remainder envelopes and auxiliary functions.
//!
//! Double-precision (or any [`Real`]) evaluation of the remainder terms
//! R(x) = x·e^(−√(ln x)/3) and R̂(x) = √x·ln x, their tail integrals, the
//! full envelopes E_ω/E_Ω and the RH variants Ê_ω/Ê_Ω, the crossing function
//! h(z), κ(x), and the intermediate envelopes h₁–h₃ the full forms are
//! assembled from. BigReal twins cover the checks that sit too close to a
//! crossing for f64 (the bracket of h near z ≈ 119.025, and Ê_ω at
//! x₀ = 1400387903260 where the margin is ~1e−13 relative).
//!
//! All formulas are plain closed forms; tests re-derive each one
//! independently and compare against quadrature where an integral is
//! involved.

use crate::bigfloat::BigReal;
use crate::float::{factorial, Real};
use crate::{Error, Result};

fn guard<F: Real>(cond: bool, arg: &'static str, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain(arg, msg.to_string()))
    }
}

/// R(x) = x·e^(−√(ln x)/3) for x > 1.2.
pub fn remainder_r<F: Real>(x: F) -> Result<F> {
    guard::<F>(x > F::of(1.2), "x", "remainder R needs x > 1.2")?;
    Ok(x * (-x.ln().sqrt() / F::of(3.0)).exp())
}

/// R̂(x) = √x·ln x for x ≥ 2.
pub fn remainder_rhat<F: Real>(x: F) -> Result<F> {
    guard::<F>(x >= F::of(2.0), "x", "remainder R-hat needs x >= 2")?;
    Ok(x.sqrt() * x.ln())
}

/// ∫_y^∞ R(t)/t² dt = e^(−√(ln y)/3)·(6√(ln y) + 18) for y > 1.2.
pub fn tail_integral_r<F: Real>(y: F) -> Result<F> {
    guard::<F>(y > F::of(1.2), "y", "tail integral needs y > 1.2")?;
    let s = y.ln().sqrt();
    Ok((-s / F::of(3.0)).exp() * (F::of(6.0) * s + F::of(18.0)))
}

/// ∫_y^∞ R̂(t)/t² dt = (2·ln y + 4)/√y for y ≥ 2.
pub fn tail_integral_rhat<F: Real>(y: F) -> Result<F> {
    guard::<F>(y >= F::of(2.0), "y", "tail integral needs y >= 2")?;
    Ok((F::of(2.0) * y.ln() + F::of(4.0)) / y.sqrt())
}

/// The antiderivative of lnⁿt/t²: −(1/t)·Σ_{j=0}^{n} P(n,j)·ln^{n−j} t with
/// P(n,j) = C(n,j)·j!, i.e. P(n,j) = n!/(n−j)!.
pub fn antideriv_logpow<F: Real>(n: u32, t: F) -> Result<F> {
    guard::<F>(t > F::zero(), "t", "antiderivative needs t > 0")?;
    let ln_t = t.ln();
    let mut coeff = F::one(); // P(n, j) = n!/(n-j)!
    let mut sum = F::zero();
    for j in 0..=n {
        sum = sum + coeff * ln_t.powi((n - j) as i32);
        coeff = coeff * F::from_u32(n - j).unwrap_or_else(F::one);
    }
    Ok(-sum / t)
}

/// E_ω(x, m) = 2^(m+1)·m!·x/ln^(m+1)x + (2^(m+1)+1)·e·m!·√x/ln x
///           + x·e^(−(√2/6)√(ln x))·(ln x/2 + 3√2·√(ln x) + 21) + √x,
/// for x ≥ e, m ≥ 1.
pub fn e_omega<F: Real>(x: F, m: u32) -> Result<F> {
    guard::<F>(x >= F::e(), "x", "envelope needs x >= e")?;
    guard::<F>(m >= 1, "m", "envelope needs m >= 1")?;
    let l = x.ln();
    let mfact: F = factorial(m);
    let two_pow = F::of(2.0).powi(m as i32 + 1);
    let sqrt2 = F::of(2.0).sqrt();
    let sl = l.sqrt();
    let t1 = two_pow * mfact * x / l.powi(m as i32 + 1);
    let t2 = (two_pow + F::one()) * F::e() * mfact * x.sqrt() / l;
    let t3 = x * (-(sqrt2 / F::of(6.0)) * sl).exp()
        * (l / F::of(2.0) + F::of(3.0) * sqrt2 * sl + F::of(21.0));
    Ok(t1 + t2 + t3 + x.sqrt())
}

/// E_Ω(x, m) = E_ω(x, m) + 33√x/ln x.
pub fn e_big_omega<F: Real>(x: F, m: u32) -> Result<F> {
    Ok(e_omega(x, m)? + F::of(33.0) * x.sqrt() / x.ln())
}

/// Ê_ω(x, m) = (3/2)^(m+1)·m!·x/ln^(m+1)x + 4x^(2/3)·ln x + 9x^(2/3)
///           + ((3/2)^(m+1)+1)·e·m!·x^(2/3)/ln x + 15√x·ln x.
pub fn ehat_omega<F: Real>(x: F, m: u32) -> Result<F> {
    guard::<F>(x >= F::e(), "x", "envelope needs x >= e")?;
    guard::<F>(m >= 1, "m", "envelope needs m >= 1")?;
    let l = x.ln();
    let mfact: F = factorial(m);
    let tp = F::of(1.5).powi(m as i32 + 1);
    let x23 = x.powf(F::of(2.0) / F::of(3.0));
    let t1 = tp * mfact * x / l.powi(m as i32 + 1);
    let t2 = F::of(4.0) * x23 * l;
    let t3 = F::of(9.0) * x23;
    let t4 = (tp + F::one()) * F::e() * mfact * x23 / l;
    let t5 = F::of(15.0) * x.sqrt() * l;
    Ok(t1 + t2 + t3 + t4 + t5)
}

/// Ê_Ω(x, m) = Ê_ω(x, m) + 33√x/ln x.
pub fn ehat_big_omega<F: Real>(x: F, m: u32) -> Result<F> {
    Ok(ehat_omega(x, m)? + F::of(33.0) * x.sqrt() / x.ln())
}

/// h(z) = z⁴·e^(−(√2/6)z)·(z²/2 + 3√2·z + 21) + z²·e^(−z²/2)·(z² + 5e),
/// the crossing function with h(√(ln x)) = (ln²x/x)·(E_ω(x,1) − 4x/ln²x).
pub fn h_corollary<F: Real>(z: F) -> Result<F> {
    guard::<F>(z > F::zero(), "z", "h is evaluated for z > 0")?;
    let sqrt2 = F::of(2.0).sqrt();
    let t1 = z.powi(4)
        * (-(sqrt2 / F::of(6.0)) * z).exp()
        * (z * z / F::of(2.0) + F::of(3.0) * sqrt2 * z + F::of(21.0));
    let t2 = z * z * (-(z * z) / F::of(2.0)).exp() * (z * z + F::of(5.0) * F::e());
    Ok(t1 + t2)
}

/// κ(x) = 25·√⌊x⌋/ln⌊x⌋ for x ≥ 2.
pub fn kappa<F: Real>(x: F) -> Result<F> {
    guard::<F>(x >= F::of(2.0), "x", "kappa needs x >= 2")?;
    let fl = x.floor();
    Ok(F::of(25.0) * fl.sqrt() / fl.ln())
}

/// Parameters for the intermediate envelopes h₁–h₃.
#[derive(Debug, Clone, Copy)]
pub struct EnvelopeParams<F: Real = f64> {
    pub x: F,
    pub m: u32,
    pub delta: F,
    pub big_delta: F,
    pub conditional: bool,
}

impl<F: Real> EnvelopeParams<F> {
    /// Unconditional defaults: δ = Δ = 1/2 (so y = √x).
    pub fn unconditional(x: F, m: u32) -> Self {
        EnvelopeParams { x, m, delta: F::of(0.5), big_delta: F::of(0.5), conditional: false }
    }

    /// RH defaults: δ = Δ = 2/3 (so y = x^(2/3)).
    pub fn rh(x: F, m: u32) -> Self {
        let tt = F::of(2.0) / F::of(3.0);
        EnvelopeParams { x, m, delta: tt, big_delta: tt, conditional: true }
    }
}

/// The intermediate envelopes (h₁, h₂, h₃) at (x, y):
///
/// unconditional —
///   h₁ = x·e^(−√(ln y)/3)·(6√(ln y) + 19) + y,
///   h₂ = m!/δ^(m+1)·x/ln^(m+1)x + (1 + 1/δ^(m+1))·e·m!·x^Δ/ln x
///      + x·e^(−√(ln y)/3)·(1 + ln(x/y)),
///   h₃ = h₁ + h₂ + x·e^(−√(ln y)/3);
///
/// conditional (RH) —
///   ĥ₁ = x·(3 ln y + 4)/√y + y,
///   ĥ₂ = m!/δ^(m+1)·x/ln^(m+1)x + (1 + 1/δ^(m+1))·e·m!·x^Δ/ln x
///      + 2x·(ln y + 2)/√y + 15√x·ln x,
///   ĥ₃ = ĥ₁ + ĥ₂ + x·ln y/√y.
///
/// Specializing y = √x (δ = Δ = 1/2) makes h₃ equal E_ω(x, m); y = x^(2/3)
/// (δ = Δ = 2/3) makes ĥ₃ equal Ê_ω(x, m).
pub fn h_envelopes<F: Real>(params: &EnvelopeParams<F>, y: F) -> Result<(F, F, F)> {
    let x = params.x;
    let m = params.m;
    guard::<F>(x >= F::e(), "x", "h envelopes need x >= e")?;
    guard::<F>(m >= 1, "m", "h envelopes need m >= 1")?;
    let x_delta_lo = x.powf(params.delta);
    let x_delta_hi = x.powf(params.big_delta);
    guard::<F>(
        F::of(1.2) < x_delta_lo && x_delta_lo <= y && y <= x_delta_hi && x_delta_hi < x,
        "y",
        "need 1.2 < x^delta <= y <= x^Delta < x",
    )?;
    let l = x.ln();
    let ly = y.ln();
    let mfact: F = factorial(m);
    let inv_delta_pow = params.delta.powi(-(m as i32 + 1));
    let shared = mfact * inv_delta_pow * x / l.powi(m as i32 + 1)
        + (F::one() + inv_delta_pow) * F::e() * mfact * x.powf(params.big_delta) / l;
    if params.conditional {
        let h1 = x * (F::of(3.0) * ly + F::of(4.0)) / y.sqrt() + y;
        let h2 = shared
            + F::of(2.0) * x * (ly + F::of(2.0)) / y.sqrt()
            + F::of(15.0) * x.sqrt() * l;
        let h3 = h1 + h2 + x * ly / y.sqrt();
        Ok((h1, h2, h3))
    } else {
        let decay = (-ly.sqrt() / F::of(3.0)).exp();
        let h1 = x * decay * (F::of(6.0) * ly.sqrt() + F::of(19.0)) + y;
        let h2 = shared + x * decay * (F::one() + (x / y).ln());
        let h3 = h1 + h2 + x * decay;
        Ok((h1, h2, h3))
    }
}

// ---------------------------------------------------------------------
// BigReal twins for near-crossing checks
// ---------------------------------------------------------------------

/// h(z) in BigReal arithmetic.
pub fn h_corollary_big(z: &BigReal) -> BigReal {
    let w = z.scale();
    let two = BigReal::from_i64(2, w);
    let sqrt2 = two.sqrt();
    let e = BigReal::one(w).exp();
    let z2 = z.mul(z);
    let z4 = z2.mul(&z2);
    let t1 = z4.mul(&sqrt2.mul(z).div_u64(6).neg().exp()).mul(
        &z2.div_u64(2).add(&sqrt2.mul_i64(3).mul(z)).add(&BigReal::from_i64(21, w)),
    );
    let t2 = z2
        .mul(&z2.div_u64(2).neg().exp())
        .mul(&z2.add(&e.mul_i64(5)));
    t1.add(&t2)
}

/// Ê_ω(x, m) in BigReal arithmetic (x^(2/3) via exp((2/3)·ln x)).
pub fn ehat_omega_big(x: &BigReal, m: u32) -> BigReal {
    let w = x.scale();
    let l = x.ln();
    let mut mfact = 1u64;
    for i in 2..=u64::from(m) {
        mfact *= i;
    }
    let three_half = BigReal::from_ratio(
        &num::BigInt::from(3u32.pow(m + 1)),
        &num::BigInt::from(2u32.pow(m + 1)),
        w,
    );
    let e = BigReal::one(w).exp();
    let x23 = l.mul_i64(2).div_u64(3).exp();
    let t1 = three_half.mul(x).mul_i64(mfact as i64).div(&l.pow_u32(m + 1));
    let t2 = x23.mul(&l).mul_i64(4);
    let t3 = x23.mul_i64(9);
    let t4 = three_half.add(&BigReal::one(w)).mul(&e).mul_i64(mfact as i64).mul(&x23).div(&l);
    let t5 = x.sqrt().mul(&l).mul_i64(15);
    t1.add(&t2).add(&t3).add(&t4).add(&t5)
}

/// E_ω(x, m) in BigReal arithmetic, parameterized by L = ln x (so that the
/// astronomically large arguments of the sharpness analysis stay exact:
/// x = e^L is carried as a mantissa of ~L/ln 10 digits).
pub fn e_omega_big_at_log(l: &BigReal, m: u32) -> BigReal {
    let w = l.scale();
    let x = l.exp();
    let sqrt_x = l.div_u64(2).exp();
    let sqrt_l = l.sqrt();
    let sqrt2 = BigReal::from_i64(2, w).sqrt();
    let e = BigReal::one(w).exp();
    let mut mfact = 1u64;
    for i in 2..=u64::from(m) {
        mfact *= i;
    }
    let two_pow = 1i64 << (m + 1);
    let t1 = x.mul_i64(two_pow * mfact as i64).div(&l.pow_u32(m + 1));
    let t2 = e.mul_i64((two_pow + 1) * mfact as i64).mul(&sqrt_x).div(l);
    let decay = sqrt2.mul(&sqrt_l).div_u64(6).neg().exp();
    let poly = l.div_u64(2).add(&sqrt2.mul_i64(3).mul(&sqrt_l)).add(&BigReal::from_i64(21, w));
    let t3 = x.mul(&decay).mul(&poly);
    t1.add(&t2).add(&t3).add(&sqrt_x)
}
