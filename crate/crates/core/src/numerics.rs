//! Precision policy, error-carrying arithmetic, q-bracket evaluation, and
//! certified truncation-tail bounds.
//!
//! Every numeric result in this crate is a [`QReal`]: a high-precision value
//! together with a nonnegative absolute error bound. Arithmetic propagates
//! bounds conservatively. Bound arithmetic runs at a fixed small precision
//! ([`BOUND_PREC`] bits); each operation's rounding contribution is covered by
//! an ulp term that overstates the true rounding error by at least a factor
//! of four, which dominates the sub-ulp drift 64-bit bound arithmetic can
//! itself accumulate. Tail certificates additionally inflate every
//! intermediate upward explicitly, so they remain true upper bounds.

use alloc::string::{String, ToString};
use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{Error, Result};

/// Precision of bound arithmetic in bits.
pub const BOUND_PREC: usize = 64;

const VALUE_RM: RoundingMode = RoundingMode::ToEven;
const BOUND_RM: RoundingMode = RoundingMode::Up;

/// Hard cap on adaptive series summation.
pub const TERM_CAP: u64 = 1_000_000;

/// Working precision and requested absolute accuracy for series evaluation.
#[derive(Debug, Clone)]
pub struct Precision {
    mantissa_bits: usize,
    target_tol: BigFloat,
}

impl Precision {
    /// Default working precision: 256 mantissa bits, tolerance 1e-40.
    pub const DEFAULT_BITS: usize = 256;

    /// Builds a precision policy.
    ///
    /// Requires `mantissa_bits >= 64` and `target_tol >= 2^(16 - mantissa_bits)`
    /// so that sixteen guard bits remain between the tolerance and the
    /// working precision.
    pub fn new(mantissa_bits: usize, target_tol: f64) -> Result<Self> {
        if mantissa_bits < 64 {
            return Err(Error::Precision(String::from("mantissa_bits must be >= 64")));
        }
        if !(target_tol > 0.0) {
            return Err(Error::Precision(String::from("target_tol must be positive")));
        }
        let tol = BigFloat::from_f64(target_tol, BOUND_PREC);
        let floor = pow2(16 - mantissa_bits as i64);
        if matches!(tol.cmp(&floor), Some(c) if c < 0) {
            return Err(Error::Precision(String::from(
                "target_tol leaves no guard digits at this mantissa size",
            )));
        }
        Ok(Precision { mantissa_bits, target_tol: tol })
    }

    /// Working precision in bits.
    pub fn bits(&self) -> usize {
        self.mantissa_bits
    }

    /// Requested absolute accuracy of series values.
    pub fn target_tol(&self) -> &BigFloat {
        &self.target_tol
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::new(Self::DEFAULT_BITS, 1e-40).expect("default precision is valid")
    }
}

/// The deformation parameter, restricted to 0 < q < 1 strictly.
#[derive(Debug, Clone)]
pub struct QParam {
    q: BigFloat,
    one_minus_q: BigFloat,
}

impl QParam {
    /// Validates 0 < q < 1 and precomputes 1 - q exactly.
    pub fn new(q: BigFloat) -> Result<Self> {
        if q.is_nan() || q.is_inf() {
            return Err(Error::Domain(String::from("q must be finite")));
        }
        let zero = BigFloat::from_i8(0, BOUND_PREC);
        let one = BigFloat::from_i8(1, BOUND_PREC);
        let gt0 = matches!(q.cmp(&zero), Some(c) if c > 0);
        let lt1 = matches!(q.cmp(&one), Some(c) if c < 0);
        if !(gt0 && lt1) {
            return Err(Error::Domain(String::from("q must satisfy 0 < q < 1 strictly")));
        }
        // 1 - q is representable in (bits of q) + small slack, so this sub is exact.
        let p = q.mantissa_max_bit_len().unwrap_or(BOUND_PREC) + BOUND_PREC;
        let one_p = BigFloat::from_i8(1, p);
        let one_minus_q = one_p.sub(&q, p, VALUE_RM);
        Ok(QParam { q, one_minus_q })
    }

    /// Convenience constructor from a dyadic `f64`.
    pub fn from_f64(q: f64) -> Result<Self> {
        QParam::new(BigFloat::from_f64(q, BOUND_PREC))
    }

    /// The parameter value.
    pub fn q(&self) -> &BigFloat {
        &self.q
    }

    /// Exact 1 - q.
    pub fn one_minus_q(&self) -> &BigFloat {
        &self.one_minus_q
    }
}

/// A high-precision real paired with a nonnegative absolute error bound.
#[derive(Debug, Clone)]
pub struct QReal {
    value: BigFloat,
    bound: BigFloat,
}

/// 2^e as a `BigFloat`.
pub(crate) fn pow2(e: i64) -> BigFloat {
    let mut x = BigFloat::from_word(1, BOUND_PREC);
    // from_word(1) is 0.5 * 2^1; shift the exponent by e.
    x.set_exponent((1 + e) as astro_float::Exponent);
    x
}

/// Nudges a nonnegative bound upward by ~2^-56 relative, covering any
/// downward drift of nearest-mode 64-bit arithmetic.
pub(crate) fn up1(x: &BigFloat) -> BigFloat {
    if x.is_zero() {
        return x.clone();
    }
    let e = x.exponent().unwrap_or(0) as i64;
    x.add(&pow2(e - 56), BOUND_PREC, BOUND_RM)
}

/// Nudges a positive quantity downward by ~2^-56 relative (for denominators
/// that must be under-approximated).
pub(crate) fn dn1(x: &BigFloat) -> BigFloat {
    if x.is_zero() {
        return x.clone();
    }
    let e = x.exponent().unwrap_or(0) as i64;
    x.sub(&pow2(e - 56), BOUND_PREC, RoundingMode::Down)
}

/// |v| * 2^(2 - wp): at least four times the rounding error of one
/// correctly-rounded operation at wp bits.
fn ulp4(v: &BigFloat, wp: usize) -> BigFloat {
    if v.is_zero() {
        return BigFloat::from_i8(0, BOUND_PREC);
    }
    let e = v.exponent().unwrap_or(0) as i64;
    pow2(e + 2 - wp as i64)
}

fn badd(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, BOUND_PREC, BOUND_RM)
}

fn bmul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, BOUND_PREC, BOUND_RM)
}

pub(crate) fn bf_is_neg(x: &BigFloat) -> bool {
    x.is_negative() && !x.is_zero()
}

/// a < b, treating incomparable (NaN) as false.
pub(crate) fn bf_lt(a: &BigFloat, b: &BigFloat) -> bool {
    matches!(a.cmp(b), Some(c) if c < 0)
}

/// a <= b, treating incomparable (NaN) as false.
pub(crate) fn bf_le(a: &BigFloat, b: &BigFloat) -> bool {
    matches!(a.cmp(b), Some(c) if c <= 0)
}

fn finite(v: BigFloat, what: &str) -> Result<BigFloat> {
    if v.is_nan() || v.is_inf() {
        Err(Error::Numeric(what.to_string()))
    } else {
        Ok(v)
    }
}

impl QReal {
    /// Wraps a value known exactly (zero error bound).
    pub fn exact(value: BigFloat) -> Self {
        QReal { value, bound: BigFloat::from_i8(0, BOUND_PREC) }
    }

    /// Wraps a value with an explicit absolute error bound.
    pub fn with_bound(value: BigFloat, bound: BigFloat) -> Self {
        debug_assert!(!bf_is_neg(&bound));
        QReal { value, bound }
    }

    /// Exact zero.
    pub fn zero() -> Self {
        QReal::exact(BigFloat::from_i8(0, BOUND_PREC))
    }

    /// Exact one.
    pub fn one() -> Self {
        QReal::exact(BigFloat::from_i8(1, BOUND_PREC))
    }

    /// Exact integer.
    pub fn from_u64(v: u64, prec: &Precision) -> Self {
        QReal::exact(BigFloat::from_u64(v, prec.bits()))
    }

    /// Exact signed integer.
    pub fn from_i64(v: i64, prec: &Precision) -> Self {
        QReal::exact(BigFloat::from_i64(v, prec.bits()))
    }

    /// Exact dyadic from `f64`.
    pub fn from_f64(v: f64, prec: &Precision) -> Self {
        QReal::exact(BigFloat::from_f64(v, prec.bits()))
    }

    /// The central value.
    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    /// The absolute error bound.
    pub fn bound(&self) -> &BigFloat {
        &self.bound
    }

    /// Upper bound on |true value|: |value| + bound, rounded up.
    pub fn upper_abs(&self) -> BigFloat {
        up1(&badd(&self.value.abs(), &self.bound))
    }

    /// True if the interval [value-bound, value+bound] excludes zero.
    pub fn excludes_zero(&self) -> bool {
        let two_bound = badd(&self.bound, &self.bound);
        bf_lt(&two_bound, &self.value.abs())
    }

    /// Sum with conservative bound propagation.
    pub fn add(&self, rhs: &QReal, prec: &Precision) -> QReal {
        let wp = prec.bits();
        let v = self.value.add(&rhs.value, wp, VALUE_RM);
        let b = badd(&badd(&self.bound, &rhs.bound), &ulp4(&v, wp));
        QReal { value: v, bound: b }
    }

    /// Difference with conservative bound propagation.
    pub fn sub(&self, rhs: &QReal, prec: &Precision) -> QReal {
        let wp = prec.bits();
        let v = self.value.sub(&rhs.value, wp, VALUE_RM);
        let b = badd(&badd(&self.bound, &rhs.bound), &ulp4(&v, wp));
        QReal { value: v, bound: b }
    }

    /// Product; bound covers |a|eb + |b|ea + ea*eb plus rounding.
    pub fn mul(&self, rhs: &QReal, prec: &Precision) -> QReal {
        let wp = prec.bits();
        let v = self.value.mul(&rhs.value, wp, VALUE_RM);
        let mut b = bmul(&self.value.abs(), &rhs.bound);
        b = badd(&b, &bmul(&rhs.value.abs(), &self.bound));
        b = badd(&b, &bmul(&self.bound, &rhs.bound));
        b = badd(&b, &ulp4(&v, wp));
        QReal { value: v, bound: b }
    }

    /// Quotient. Rejects denominators whose interval reaches zero.
    pub fn div(&self, rhs: &QReal, prec: &Precision) -> Result<QReal> {
        if !rhs.excludes_zero() {
            return Err(Error::Domain(String::from(
                "division by a value whose error interval contains zero",
            )));
        }
        let wp = prec.bits();
        let v = finite(self.value.div(&rhs.value, wp, VALUE_RM), "division overflow")?;
        // |a/b - (a+ea)/(b+eb)| <= (ea + |a/b| eb) / (|b| - eb)
        let den = dn1(&rhs.value.abs().sub(&rhs.bound, BOUND_PREC, RoundingMode::Down));
        let num = badd(&self.bound, &bmul(&v.abs(), &rhs.bound));
        let mut b = up1(&num.div(&den, BOUND_PREC, BOUND_RM));
        b = badd(&b, &ulp4(&v, wp));
        Ok(QReal { value: v, bound: b })
    }

    /// Negation (bound unchanged).
    pub fn neg(&self) -> QReal {
        QReal { value: self.value.neg(), bound: self.bound.clone() }
    }

    /// Absolute value of the central value (bound unchanged).
    pub fn abs(&self) -> QReal {
        QReal { value: self.value.abs(), bound: self.bound.clone() }
    }

    /// Integer power by binary powering; bounds propagate through each multiply.
    pub fn powi(&self, n: u64, prec: &Precision) -> QReal {
        if n == 0 {
            return QReal::one();
        }
        let mut result: Option<QReal> = None;
        let mut base = self.clone();
        let mut k = n;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base, prec),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base, prec);
        }
        result.expect("n > 0")
    }

    /// e^self. Requires the input bound to be small (< 1/8).
    pub fn exp(&self, prec: &Precision) -> Result<QReal> {
        let wp = prec.bits();
        if !bf_lt(&self.bound, &pow2(-3)) {
            return Err(Error::Numeric(String::from("input bound too large for exp")));
        }
        let mut cc = consts()?;
        let v = finite(self.value.exp(wp, VALUE_RM, &mut cc), "exp")?;
        // |e^(x+d) - e^x| <= e^x (e^d - 1) <= 2 e^x d for d < 1/8.
        let prop = bmul(&v.abs(), &badd(&self.bound, &self.bound));
        let b = badd(&prop, &badd(&ulp4(&v, wp), &ulp4(&v, wp)));
        Ok(QReal { value: v, bound: b })
    }

    /// Natural logarithm. Requires the interval to stay strictly positive.
    pub fn ln(&self, prec: &Precision) -> Result<QReal> {
        let wp = prec.bits();
        let two_bound = badd(&self.bound, &self.bound);
        if bf_is_neg(&self.value) || self.value.is_zero() || !bf_lt(&two_bound, &self.value) {
            return Err(Error::Domain(String::from("ln requires a strictly positive interval")));
        }
        let mut cc = consts()?;
        let v = finite(self.value.ln(wp, VALUE_RM, &mut cc), "ln")?;
        // |ln(x+d) - ln(x)| <= d / (x - d)
        let den = dn1(&self.value.sub(&self.bound, BOUND_PREC, RoundingMode::Down));
        let prop = up1(&self.bound.div(&den, BOUND_PREC, BOUND_RM));
        let b = badd(&prop, &badd(&ulp4(&v, wp), &ulp4(&v, wp)));
        Ok(QReal { value: v, bound: b })
    }

    /// self^b for exact real exponent b, via exp(b ln self). Requires a
    /// strictly positive base interval.
    pub fn pow_real(&self, b: &BigFloat, prec: &Precision) -> Result<QReal> {
        let l = self.ln(prec)?;
        l.mul(&QReal::exact(b.clone()), prec).exp(prec)
    }
}

/// A fresh constants cache (pi, e, ln 2) for transcendental calls.
pub(crate) fn consts() -> Result<Consts> {
    Consts::new().map_err(|_| Error::Numeric(String::from("constants cache allocation failed")))
}

/// The q-bracket [b] = (1 - q^b)/(1 - q) for arbitrary real b.
///
/// For a positive integer m this equals 1 + q + ... + q^(m-1); non-integer
/// exponents go through exp(b ln q).
pub fn q_bracket(b: &BigFloat, q: &QParam, prec: &Precision) -> Result<QReal> {
    let qb = q_pow(b, q, prec)?;
    bracket_from_qpow(&qb, q, prec)
}

/// q-bracket of a nonnegative integer.
pub fn q_bracket_u64(m: u64, q: &QParam, prec: &Precision) -> Result<QReal> {
    let qm = QReal::exact(q.q().clone()).powi(m, prec);
    bracket_from_qpow(&qm, q, prec)
}

/// (1 - t)/(1 - q) for t = q^b already computed.
pub(crate) fn bracket_from_qpow(qb: &QReal, q: &QParam, prec: &Precision) -> Result<QReal> {
    let one = QReal::one();
    let num = one.sub(qb, prec);
    num.div(&QReal::exact(q.one_minus_q().clone()), prec)
}

/// q^b with certified bound, taking the integer fast path when possible.
pub fn q_pow(b: &BigFloat, q: &QParam, prec: &Precision) -> Result<QReal> {
    if b.is_zero() {
        return Ok(QReal::one());
    }
    if b.is_int() && !bf_is_neg(b) {
        if let Some(m) = bf_to_u64(b) {
            return Ok(QReal::exact(q.q().clone()).powi(m, prec));
        }
    }
    QReal::exact(q.q().clone()).pow_real(b, prec)
}

/// Extracts a u64 from an integer-valued BigFloat, if it fits.
pub(crate) fn bf_to_u64(x: &BigFloat) -> Option<u64> {
    if !x.is_int() || bf_is_neg(x) {
        return None;
    }
    if x.is_zero() {
        return Some(0);
    }
    let e = x.exponent()? as i64;
    if e > 63 {
        return None;
    }
    // Walk down from the value by subtracting powers of two.
    let mut rem = x.clone();
    let mut out: u64 = 0;
    for bit in (0..=e.max(0)).rev() {
        let p = pow2(bit);
        if bf_le(&p, &rem) {
            out |= 1u64 << bit;
            rem = rem.sub(&p, BOUND_PREC + 64, VALUE_RM);
        }
    }
    if rem.is_zero() {
        Some(out)
    } else {
        None
    }
}

/// Upper bound on the tail of a series whose term magnitudes beyond the
/// truncation point decrease at least geometrically with the given ratio:
/// first_neglected / (1 - ratio).
pub fn geometric_tail_bound(first_neglected: &QReal, ratio: &BigFloat) -> Result<QReal> {
    let first_up = first_neglected.upper_abs();
    let b = geometric_tail_upper(&first_up, ratio)?;
    Ok(QReal::exact(b))
}

/// Raw-BigFloat variant of [`geometric_tail_bound`]; `first_up` must already
/// be an upper bound on the first neglected term's magnitude.
pub(crate) fn geometric_tail_upper(first_up: &BigFloat, ratio: &BigFloat) -> Result<BigFloat> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    if bf_is_neg(ratio) || !bf_lt(ratio, &one) {
        return Err(Error::TailBound(String::from("geometric ratio must satisfy 0 <= r < 1")));
    }
    if bf_is_neg(first_up) {
        return Err(Error::TailBound(String::from("first neglected term bound must be >= 0")));
    }
    let den = dn1(&one.sub(ratio, BOUND_PREC, RoundingMode::Down));
    if !bf_lt(&BigFloat::from_i8(0, BOUND_PREC), &den) {
        return Err(Error::TailBound(String::from("geometric ratio too close to 1")));
    }
    Ok(up1(&first_up.div(&den, BOUND_PREC, BOUND_RM)))
}

/// y^e, rounded so the result is an upper bound (y >= 0).
pub(crate) fn bf_pow_upper(y: &BigFloat, e: u64) -> BigFloat {
    if e == 0 {
        return BigFloat::from_i8(1, BOUND_PREC);
    }
    let mut result: Option<BigFloat> = None;
    let mut base = up1(&y.abs());
    let mut k = e;
    loop {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => up1(&bmul(&r, &base)),
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = up1(&bmul(&base, &base));
    }
    result.expect("e > 0")
}

/// Upper bound on `sum_{m > m_cut} m^n y^m` for 0 <= y < 1.
///
/// Uses the geometric bound at m = m_cut + 1 with ratio
/// `((m_cut+2)/(m_cut+1))^n * y`; fails if that ratio cannot be certified
/// below 1 (the term sequence must already be decreasing past the cut).
pub fn poly_geometric_tail_bound(m_cut: u64, n: u32, y: &BigFloat) -> Result<QReal> {
    Ok(QReal::exact(poly_tail_upper(m_cut, n, y)?))
}

/// Raw-BigFloat variant of [`poly_geometric_tail_bound`].
pub(crate) fn poly_tail_upper(m_cut: u64, n: u32, y: &BigFloat) -> Result<BigFloat> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    if bf_is_neg(y) || !bf_lt(y, &one) {
        return Err(Error::TailBound(String::from("weight must satisfy 0 <= y < 1")));
    }
    if y.is_zero() {
        return Ok(BigFloat::from_i8(0, BOUND_PREC));
    }
    // Supremum of the term ratio beyond the cut.
    let m1 = BigFloat::from_u64(m_cut + 1, BOUND_PREC);
    let m2 = BigFloat::from_u64(m_cut + 2, BOUND_PREC);
    let growth = up1(&m2.div(&m1, BOUND_PREC, BOUND_RM));
    let ratio = up1(&bmul(&bf_pow_upper(&growth, n as u64), y));
    if !bf_lt(&ratio, &one) {
        return Err(Error::TailBound(String::from(
            "terms not certifiably decreasing past the truncation point",
        )));
    }
    // First neglected term: (m_cut+1)^n y^(m_cut+1).
    let first = up1(&bmul(&bf_pow_upper(&m1, n as u64), &bf_pow_upper(y, m_cut + 1)));
    geometric_tail_upper(&first, &ratio)
}

/// Exact conversion of a finite `BigFloat` (a dyadic rational) to a rational.
pub fn bigfloat_to_rational(x: &BigFloat) -> Result<num_rational::BigRational> {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    if x.is_nan() || x.is_inf() {
        return Err(Error::Numeric(String::from("cannot convert non-finite value")));
    }
    if x.is_zero() {
        return Ok(num_rational::BigRational::zero());
    }
    let (words, _n, sign, e, _inexact) =
        x.as_raw_parts().ok_or_else(|| Error::Numeric(String::from("missing raw parts")))?;
    // value = (int(words) / 2^(64*len)) * 2^e
    let mut int = BigInt::zero();
    for w in words.iter().rev() {
        int = (int << 64) + BigInt::from(*w);
    }
    if sign == astro_float::Sign::Neg {
        int = -int;
    }
    let shift = e as i64 - 64 * words.len() as i64;
    let num;
    let den;
    if shift >= 0 {
        num = int << (shift as usize);
        den = BigInt::one();
    } else {
        num = int;
        den = BigInt::one() << ((-shift) as usize);
    }
    Ok(num_rational::BigRational::new(num, den))
}

/// Exact conversion of a big integer to a `BigFloat`.
pub(crate) fn bigint_to_bigfloat(i: &num_bigint::BigInt) -> BigFloat {
    let (sign, digits) = i.to_u64_digits();
    if digits.is_empty() {
        return BigFloat::from_i8(0, BOUND_PREC);
    }
    let p = 64 * digits.len() + 64;
    let scale = {
        let mut s = BigFloat::from_word(1, p);
        s.set_exponent(65); // 2^64
        s
    };
    let mut acc = BigFloat::from_i8(0, p);
    for d in digits.iter().rev() {
        acc = acc.mul(&scale, p, VALUE_RM);
        acc = acc.add(&BigFloat::from_u64(*d, p), p, VALUE_RM);
    }
    if sign == num_bigint::Sign::Minus {
        acc = acc.neg();
    }
    acc
}

/// Rational to value-with-bound at working precision (one rounding).
pub fn rational_to_qreal(r: &num_rational::BigRational, prec: &Precision) -> Result<QReal> {
    let num = QReal::exact(bigint_to_bigfloat(r.numer()));
    let den = QReal::exact(bigint_to_bigfloat(r.denom()));
    num.div(&den, prec)
}

/// Upper bound on |r| as a small BigFloat.
pub(crate) fn rational_abs_upper(r: &num_rational::BigRational) -> BigFloat {
    use num_traits::Signed;
    let num = bigint_to_bigfloat(&r.numer().abs());
    let den = bigint_to_bigfloat(&r.denom().abs());
    up1(&num.div(&den, BOUND_PREC, BOUND_RM))
}

/// Parses a decimal literal at the given precision.
pub fn parse_decimal(s: &str, bits: usize) -> Result<BigFloat> {
    let mut cc = consts()?;
    let v = BigFloat::parse(s, Radix::Dec, bits, VALUE_RM, &mut cc);
    if v.is_nan() {
        return Err(Error::Parse(alloc::format!("not a decimal number: `{s}`")));
    }
    Ok(v)
}

/// Renders a value in decimal at full working precision.
pub fn format_decimal(x: &BigFloat) -> String {
    match consts() {
        Ok(mut cc) => x
            .format(Radix::Dec, VALUE_RM, &mut cc)
            .unwrap_or_else(|_| alloc::format!("{x:?}")),
        Err(_) => alloc::format!("{x:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prec() -> Precision {
        Precision::default()
    }

    fn assert_close(x: &QReal, expected: f64, tol: f64) {
        let e = BigFloat::from_f64(expected, 256);
        let diff = x.value().sub(&e, 256, RoundingMode::ToEven).abs();
        let t = BigFloat::from_f64(tol, 64);
        assert!(bf_le(&diff, &t), "value {:?} not within {} of {}", x.value(), tol, expected);
    }

    #[test]
    fn precision_invariants() {
        assert!(Precision::new(32, 1e-5).is_err());
        assert!(Precision::new(64, 0.0).is_err());
        assert!(Precision::new(64, 1e-30).is_err()); // below 2^-48
        assert!(Precision::new(64, 1e-10).is_ok());
        assert!(Precision::new(256, 1e-40).is_ok());
    }

    #[test]
    fn qparam_rejects_out_of_range() {
        assert!(QParam::from_f64(0.0).is_err());
        assert!(QParam::from_f64(1.0).is_err());
        assert!(QParam::from_f64(-0.5).is_err());
        assert!(QParam::from_f64(1.5).is_err());
        assert!(QParam::from_f64(0.5).is_ok());
    }

    #[test]
    fn q_bracket_trivial_values() {
        let p = prec();
        let q = QParam::from_f64(0.37).unwrap();
        let b1 = q_bracket(&BigFloat::from_f64(1.0, 64), &q, &p).unwrap();
        assert_close(&b1, 1.0, 1e-70);
        let b0 = q_bracket(&BigFloat::from_f64(0.0, 64), &q, &p).unwrap();
        assert!(b0.value().is_zero());
        let q2 = QParam::from_f64(0.5).unwrap();
        let b3 = q_bracket(&BigFloat::from_f64(3.0, 64), &q2, &p).unwrap();
        assert_close(&b3, 1.75, 1e-70);
        // integer and exp/ln paths agree
        let b3b = QReal::exact(q2.q().clone())
            .pow_real(&BigFloat::from_f64(3.0, 64), &p)
            .unwrap();
        let diff = b3b.value().sub(&q2.q().powi(3, 256, RoundingMode::ToEven), 256, RoundingMode::ToEven);
        assert!(bf_le(&diff.abs(), &BigFloat::from_f64(1e-70, 64)));
    }

    #[test]
    fn q_bracket_monotone_and_bounded() {
        let p = prec();
        for qv in [0.3, 0.5, 0.9] {
            let q = QParam::from_f64(qv).unwrap();
            let cap = QReal::one()
                .div(&QReal::exact(q.one_minus_q().clone()), &p)
                .unwrap();
            let mut prev = QReal::zero();
            for m in 1..=20u64 {
                let b = q_bracket_u64(m, &q, &p).unwrap();
                assert!(bf_lt(prev.value(), b.value()), "bracket not increasing at m={m}");
                assert!(bf_lt(b.value(), cap.value()), "bracket above 1/(1-q) at m={m}");
                prev = b;
            }
        }
    }

    #[test]
    fn q_bracket_classical_limit() {
        let p = prec();
        for m in 1..=10u64 {
            let mut prev_err: Option<BigFloat> = None;
            for qv in [0.9, 0.99, 0.999] {
                let q = QParam::from_f64(qv).unwrap();
                let b = q_bracket_u64(m, &q, &p).unwrap();
                let err = b
                    .value()
                    .sub(&BigFloat::from_u64(m, 256), 256, RoundingMode::ToEven)
                    .abs();
                // |[m]_q - m| = sum_{j<m} (1 - q^j) <= m(m-1)(1-q)/2
                let cap = BigFloat::from_f64((m * (m - 1)) as f64 / 2.0 * (1.0 - qv) * (1.0 + 1e-12), 64);
                assert!(bf_le(&err, &cap), "classical limit bound fails at m={m}, q={qv}");
                if let Some(pe) = prev_err {
                    assert!(bf_le(&err, &pe), "error not decreasing toward q=1 at m={m}");
                }
                prev_err = Some(err);
            }
        }
    }

    #[test]
    fn geometric_tail_examples() {
        let zero = QReal::zero();
        let b = geometric_tail_bound(&zero, &BigFloat::from_f64(0.5, 64)).unwrap();
        assert!(b.value().is_zero());
        let one = QReal::one();
        let b = geometric_tail_bound(&one, &BigFloat::from_f64(0.0, 64)).unwrap();
        assert_close(&b, 1.0, 1e-15);
        let small = QReal::exact(BigFloat::from_f64(0.01, 64));
        let b = geometric_tail_bound(&small, &BigFloat::from_f64(0.9, 64)).unwrap();
        // 0.01/0.1 = 0.1, allow the deliberate upward slack
        assert!(bf_le(&BigFloat::from_f64(0.1, 64), b.value()));
        assert!(bf_le(b.value(), &BigFloat::from_f64(0.1000001, 64)));
        assert!(geometric_tail_bound(&one, &BigFloat::from_f64(1.0, 64)).is_err());
    }

    #[test]
    fn geometric_tail_soundness_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = prec();
        for _ in 0..100 {
            let a0: f64 = rng.gen_range(1e-6..10.0);
            let r: f64 = rng.gen_range(0.0..0.99);
            let m: u64 = rng.gen_range(0..40);
            // true tail of sum_{i>m} a0 r^i = a0 r^(m+1)/(1-r)
            let first = QReal::from_f64(a0, &p).mul(&QReal::from_f64(r, &p).powi(m + 1, &p), &p);
            let bound = geometric_tail_bound(&first, &BigFloat::from_f64(r, 64)).unwrap();
            // brute force to saturation
            let mut tail = QReal::zero();
            let mut term = first.clone();
            let rq = QReal::from_f64(r, &p);
            for _ in 0..4000 {
                tail = tail.add(&term, &p);
                term = term.mul(&rq, &p);
                if bf_lt(&term.upper_abs(), &pow2(-360)) {
                    break;
                }
            }
            assert!(
                bf_le(tail.value(), bound.value()),
                "true tail exceeds bound for a0={a0}, r={r}, m={m}"
            );
        }
    }

    #[test]
    fn poly_tail_examples() {
        // (10, 0, 0.5) -> 2^-10
        let b = poly_geometric_tail_bound(10, 0, &BigFloat::from_f64(0.5, 64)).unwrap();
        assert!(bf_le(&pow2(-10), b.value()));
        assert!(bf_le(b.value(), &BigFloat::from_f64(0.000977, 64)));
        // y = 0 -> 0
        let b = poly_geometric_tail_bound(5, 3, &BigFloat::from_f64(0.0, 64)).unwrap();
        assert!(b.value().is_zero());
        // (50, 1, 0.5) vs brute force sum_{m>=51} m 0.5^m = 0.5^51 * 104
        let b = poly_geometric_tail_bound(50, 1, &BigFloat::from_f64(0.5, 64)).unwrap();
        let p = prec();
        let mut tail = QReal::zero();
        for m in 51..400u64 {
            let t = QReal::from_u64(m, &p).mul(&QReal::from_f64(0.5, &p).powi(m, &p), &p);
            tail = tail.add(&t, &p);
        }
        assert!(bf_le(tail.value(), b.value()), "poly tail bound below true tail");
        // overestimate stays modest
        let ratio = b.value().div(tail.value(), 64, RoundingMode::ToEven);
        assert!(bf_le(&ratio, &BigFloat::from_f64(1.1, 64)));
        // rejects uncertifiable cut: terms still growing
        assert!(poly_geometric_tail_bound(1, 40, &BigFloat::from_f64(0.9, 64)).is_err());
    }

    #[test]
    fn qreal_bound_soundness_randomized() {
        // At 64-bit working precision rounding is visible; bounds must cover it.
        let lo = Precision::new(64, 1e-9).unwrap();
        let hi = Precision::new(512, 1e-100).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a: f64 = rng.gen_range(-100.0..100.0);
            let b: f64 = rng.gen_range(0.001..100.0);
            let xa = QReal::from_f64(a, &lo);
            let xb = QReal::from_f64(b, &lo);
            let mut v = xa.mul(&xb, &lo).add(&xa, &lo);
            v = v.div(&xb, &lo).unwrap();
            let ya = QReal::from_f64(a, &hi);
            let yb = QReal::from_f64(b, &hi);
            let mut w = ya.mul(&yb, &hi).add(&ya, &hi);
            w = w.div(&yb, &hi).unwrap();
            let diff = v.value().sub(w.value(), 512, RoundingMode::ToEven).abs();
            assert!(
                bf_le(&diff, v.bound()),
                "bound too small: a={a} b={b} diff={diff:?} bound={:?}",
                v.bound()
            );
        }
    }

    #[test]
    fn exp_ln_roundtrip_within_bounds() {
        let lo = Precision::new(64, 1e-9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let x: f64 = rng.gen_range(0.01..20.0);
            let q = QReal::from_f64(x, &lo);
            let y = q.ln(&lo).unwrap().exp(&lo).unwrap();
            let diff = y.value().sub(q.value(), 256, RoundingMode::ToEven).abs();
            assert!(bf_le(&diff, y.bound()), "roundtrip outside bound at x={x}");
        }
    }

    #[test]
    fn bf_to_u64_roundtrip() {
        for v in [0u64, 1, 2, 3, 63, 64, 1000, 123_456_789] {
            let x = BigFloat::from_u64(v, 128);
            assert_eq!(bf_to_u64(&x), Some(v));
        }
        assert_eq!(bf_to_u64(&BigFloat::from_f64(1.5, 64)), None);
        assert_eq!(bf_to_u64(&BigFloat::from_f64(-2.0, 64)), None);
    }
}
