//! Evaluators for the q-series family: partial sums, q-polylogarithms, the
//! q-logarithm, shifted H-sums, q-harmonic numbers, and the general nested
//! q-Euler sum with a product of inner partial sums.
//!
//! Adaptive evaluators sum until the certified tail bound drops below the
//! target tolerance, with a hard cap of [`TERM_CAP`] terms; hitting the cap
//! is an error, never a silent partial answer.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::numerics::{
    bf_is_neg, bf_le, bf_lt, bracket_from_qpow, geometric_tail_upper, poly_tail_upper, q_pow,
    Precision, QParam, QReal, BOUND_PREC, TERM_CAP,
};

/// Full description of one nested q-Euler sum: inner exponents and weights,
/// outer exponent and weight, and the deformation parameter.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    inner_k: Vec<u32>,
    inner_x: Vec<BigFloat>,
    outer_k: u32,
    outer_x: BigFloat,
    q: QParam,
}

impl SeriesSpec {
    /// Validates the spec: matching lengths, positive exponents,
    /// |inner weights| <= 1, |outer weight| < 1 strictly.
    pub fn new(
        inner_k: Vec<u32>,
        inner_x: Vec<BigFloat>,
        outer_k: u32,
        outer_x: BigFloat,
        q: QParam,
    ) -> Result<Self> {
        if inner_k.len() != inner_x.len() {
            return Err(Error::Domain(String::from(
                "inner exponent and weight lists must have equal length",
            )));
        }
        if outer_k == 0 || inner_k.iter().any(|&k| k == 0) {
            return Err(Error::Domain(String::from("exponents must be positive integers")));
        }
        let one = BigFloat::from_i8(1, BOUND_PREC);
        for x in &inner_x {
            if !bf_le(&x.abs(), &one) {
                return Err(Error::Domain(String::from("inner weights must satisfy |x_i| <= 1")));
            }
        }
        if !bf_lt(&outer_x.abs(), &one) {
            return Err(Error::Domain(String::from("outer weight must satisfy |x| < 1 strictly")));
        }
        Ok(SeriesSpec { inner_k, inner_x, outer_k, outer_x, q })
    }

    /// Inner exponents k_1..k_n.
    pub fn inner_k(&self) -> &[u32] {
        &self.inner_k
    }

    /// Inner weights x_1..x_n.
    pub fn inner_x(&self) -> &[BigFloat] {
        &self.inner_x
    }

    /// Outer exponent.
    pub fn outer_k(&self) -> u32 {
        self.outer_k
    }

    /// Outer weight.
    pub fn outer_x(&self) -> &BigFloat {
        &self.outer_x
    }

    /// Deformation parameter.
    pub fn q(&self) -> &QParam {
        &self.q
    }

    /// Depth (number of inner factors).
    pub fn depth(&self) -> usize {
        self.inner_k.len()
    }
}

/// Parameters of the shifted sum `sum_{m>=1} x^(m+a) / [m+a]^k`.
#[derive(Debug, Clone)]
pub struct HSpec {
    /// Exponent k >= 1.
    pub k: u32,
    /// Weight, |x| < 1; x > 0 required for non-integer a.
    pub x: BigFloat,
    /// Shift, excluded from {-1, -2, ...}.
    pub a: BigFloat,
    /// Deformation parameter.
    pub q: QParam,
}

impl HSpec {
    /// Validates the parameter set.
    pub fn new(k: u32, x: BigFloat, a: BigFloat, q: QParam) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain(String::from("exponent k must be >= 1")));
        }
        let one = BigFloat::from_i8(1, BOUND_PREC);
        if !bf_lt(&x.abs(), &one) {
            return Err(Error::Domain(String::from("weight must satisfy |x| < 1")));
        }
        if a.is_int() && bf_is_neg(&a) {
            return Err(Error::Domain(String::from("shift a must avoid {-1, -2, ...}")));
        }
        if !a.is_int() && !bf_lt(&BigFloat::from_i8(0, BOUND_PREC), &x) {
            return Err(Error::Domain(String::from("non-integer shift requires x > 0")));
        }
        Ok(HSpec { k, x, a, q })
    }
}

/// Finite partial sum `sum_{j=1..m} x^j / [j]^k`. Defined for |x| <= 1.
pub fn zeta_partial(m: u64, k: u32, x: &BigFloat, q: &QParam, prec: &Precision) -> Result<QReal> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    if !bf_le(&x.abs(), &one) {
        return Err(Error::Domain(String::from("zeta_partial requires |x| <= 1")));
    }
    let mut sum = QReal::zero();
    let mut x_pow = QReal::one();
    let mut q_pow = QReal::one();
    let xq = QReal::exact(x.clone());
    let qq = QReal::exact(q.q().clone());
    for _ in 0..m {
        x_pow = x_pow.mul(&xq, prec);
        q_pow = q_pow.mul(&qq, prec);
        let bracket = bracket_from_qpow(&q_pow, q, prec)?;
        let term = x_pow.div(&bracket.powi(k as u64, prec), prec)?;
        sum = sum.add(&term, prec);
    }
    Ok(sum)
}

/// The q-polylogarithm `Li_k[x] = sum_{m>=1} x^m / [m]^k`, |x| < 1.
pub fn q_polylog(k: u32, x: &BigFloat, q: &QParam, prec: &Precision) -> Result<QReal> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    if !bf_lt(&x.abs(), &one) {
        return Err(Error::Domain(String::from("q_polylog requires |x| < 1 strictly")));
    }
    if k == 0 {
        return Err(Error::Domain(String::from("q_polylog requires k >= 1")));
    }
    if x.is_zero() {
        return Ok(QReal::zero());
    }
    let x_abs = x.abs();
    let mut sum = QReal::zero();
    let mut x_pow = QReal::one();
    let mut q_pow = QReal::one();
    let xq = QReal::exact(x.clone());
    let qq = QReal::exact(q.q().clone());
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        x_pow = x_pow.mul(&xq, prec);
        q_pow = q_pow.mul(&qq, prec);
        let bracket = bracket_from_qpow(&q_pow, q, prec)?;
        let term = x_pow.div(&bracket.powi(k as u64, prec), prec)?;
        sum = sum.add(&term, prec);
        // |t_{m+1}| <= |t_m| * |x| since brackets increase with m.
        let first_neglected =
            term.upper_abs().mul(&x_abs, BOUND_PREC, astro_float::RoundingMode::Up);
        let tail = geometric_tail_upper(&first_neglected, &x_abs)?;
        if bf_le(&tail, prec.target_tol()) {
            return Ok(QReal::with_bound(
                sum.value().clone(),
                sum.bound().add(&tail, BOUND_PREC, astro_float::RoundingMode::Up),
            ));
        }
    }
}

/// The q-logarithm `ln[1-x] = -Li_1[x]`.
pub fn q_log(x: &BigFloat, q: &QParam, prec: &Precision) -> Result<QReal> {
    Ok(q_polylog(1, x, q, prec)?.neg())
}

/// The shifted sum `H_k[x,a] = sum_{m>=1} x^(m+a) / [m+a]^k`.
pub fn h_function(spec: &HSpec, prec: &Precision) -> Result<QReal> {
    if spec.x.is_zero() {
        return Ok(QReal::zero());
    }
    let q = &spec.q;
    let x_abs = spec.x.abs();
    // x^a and q^a prefactors; integer shifts keep negative weights exact.
    let (x_shift, q_shift) = if spec.a.is_int() {
        let m = crate::numerics::bf_to_u64(&spec.a)
            .ok_or_else(|| Error::Domain(String::from("integer shift out of range")))?;
        (QReal::exact(spec.x.clone()).powi(m, prec), QReal::exact(q.q().clone()).powi(m, prec))
    } else {
        (QReal::exact(spec.x.clone()).pow_real(&spec.a, prec)?, q_pow(&spec.a, q, prec)?)
    };
    // Terms decrease geometrically once m+a >= 1; force that many terms first.
    let min_terms = min_terms_for_shift(&spec.a);
    let mut sum = QReal::zero();
    let mut x_pow = QReal::one();
    let mut q_pow_m = QReal::one();
    let xq = QReal::exact(spec.x.clone());
    let qq = QReal::exact(q.q().clone());
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        x_pow = x_pow.mul(&xq, prec);
        q_pow_m = q_pow_m.mul(&qq, prec);
        let q_full = q_pow_m.mul(&q_shift, prec);
        let bracket = bracket_from_qpow(&q_full, q, prec)?;
        let term =
            x_shift.mul(&x_pow, prec).div(&bracket.powi(spec.k as u64, prec), prec)?;
        sum = sum.add(&term, prec);
        if m < min_terms {
            continue;
        }
        let first_neglected =
            term.upper_abs().mul(&x_abs, BOUND_PREC, astro_float::RoundingMode::Up);
        let tail = geometric_tail_upper(&first_neglected, &x_abs)?;
        if bf_le(&tail, prec.target_tol()) {
            return Ok(QReal::with_bound(
                sum.value().clone(),
                sum.bound().add(&tail, BOUND_PREC, astro_float::RoundingMode::Up),
            ));
        }
    }
}

fn min_terms_for_shift(a: &BigFloat) -> u64 {
    if !bf_is_neg(a) {
        return 1;
    }
    // Brackets increase once m + a >= 1.
    let mut m = 2u64;
    let one = BigFloat::from_i8(1, BOUND_PREC);
    loop {
        let shifted =
            BigFloat::from_u64(m, BOUND_PREC).add(a, BOUND_PREC, astro_float::RoundingMode::ToEven);
        if bf_le(&one, &shifted) || m > 1 << 20 {
            return m;
        }
        m += 1;
    }
}

/// q-analogue of the generalized harmonic number: `[H_m^(k)] = zeta_m[k, q]`.
pub fn q_harmonic(m: u64, k: u32, q: &QParam, prec: &Precision) -> Result<QReal> {
    let x = q.q().clone();
    zeta_partial(m, k, &x, q, prec)
}

pub(crate) enum StopRule {
    /// Adaptive: stop when the certified tail is below the target tolerance.
    Tolerance,
    /// Fixed number of terms (for consistency checks).
    FixedTerms(u64),
}

/// Truncates the nested sum after exactly `terms` outer terms, returning the
/// partial sum (with its rounding bound) and the certified tail bound at the
/// truncation point. Fails when the tail is not certifiable there.
pub fn s_sum_fixed_terms(
    spec: &SeriesSpec,
    prec: &Precision,
    terms: u64,
) -> Result<(QReal, BigFloat)> {
    if spec.depth() == 0 {
        return Err(Error::Domain(String::from("fixed-term truncation requires depth >= 1")));
    }
    let p = s_sum_partial(spec, prec, StopRule::FixedTerms(terms))?;
    Ok((p.sum, p.tail))
}

pub(crate) struct PartialSum {
    /// Accumulated sum with rounding bound (no tail).
    pub sum: QReal,
    /// Certified bound on the dropped tail.
    pub tail: BigFloat,
    /// Terms consumed.
    #[allow(dead_code)]
    pub terms: u64,
}

/// The nested q-Euler sum
/// `sum_{m>=1} zeta_m[k_1,x_1] ... zeta_m[k_n,x_n] x^m / [m]^k`.
///
/// Depth 0 reduces to `Li_k[x]`.
pub fn s_sum(spec: &SeriesSpec, prec: &Precision) -> Result<QReal> {
    if spec.depth() == 0 {
        return q_polylog(spec.outer_k, &spec.outer_x, spec.q(), prec);
    }
    let p = s_sum_partial(spec, prec, StopRule::Tolerance)?;
    Ok(QReal::with_bound(
        p.sum.value().clone(),
        p.sum.bound().add(&p.tail, BOUND_PREC, astro_float::RoundingMode::Up),
    ))
}

pub(crate) fn s_sum_partial(
    spec: &SeriesSpec,
    prec: &Precision,
    stop: StopRule,
) -> Result<PartialSum> {
    let n = spec.depth();
    let q = spec.q();
    let x_abs = spec.outer_x.abs();
    let mut sum = QReal::zero();
    let mut outer_pow = QReal::one();
    let mut q_pow = QReal::one();
    let mut inner_pows = vec![QReal::one(); n];
    let mut inner_sums = vec![QReal::zero(); n];
    let outer_x = QReal::exact(spec.outer_x.clone());
    let qq = QReal::exact(q.q().clone());
    let inner_x: Vec<QReal> = spec.inner_x.iter().map(|x| QReal::exact(x.clone())).collect();
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        q_pow = q_pow.mul(&qq, prec);
        outer_pow = outer_pow.mul(&outer_x, prec);
        let bracket = bracket_from_qpow(&q_pow, q, prec)?;
        let mut product = QReal::one();
        for i in 0..n {
            inner_pows[i] = inner_pows[i].mul(&inner_x[i], prec);
            let t = inner_pows[i].div(&bracket.powi(spec.inner_k[i] as u64, prec), prec)?;
            inner_sums[i] = inner_sums[i].add(&t, prec);
            product = product.mul(&inner_sums[i], prec);
        }
        let term = product
            .mul(&outer_pow, prec)
            .div(&bracket.powi(spec.outer_k as u64, prec), prec)?;
        sum = sum.add(&term, prec);
        match stop {
            StopRule::FixedTerms(target) => {
                if m == target {
                    // |zeta_m[k_i, x_i]| <= m, so terms are <= m^n |x|^m.
                    let tail = poly_tail_upper(m, n as u32, &x_abs)?;
                    return Ok(PartialSum { sum, tail, terms: m });
                }
            }
            StopRule::Tolerance => {
                if let Ok(tail) = poly_tail_upper(m, n as u32, &x_abs) {
                    if bf_le(&tail, prec.target_tol()) {
                        return Ok(PartialSum { sum, tail, terms: m });
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::parse_decimal;
    use astro_float::RoundingMode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prec() -> Precision {
        Precision::default()
    }

    fn qp(v: f64) -> QParam {
        QParam::from_f64(v).unwrap()
    }

    fn bf(v: f64) -> BigFloat {
        BigFloat::from_f64(v, 256)
    }

    fn assert_within(x: &QReal, expected: &BigFloat, extra_tol: f64) {
        let diff = x.value().sub(expected, 320, RoundingMode::ToEven).abs();
        let allowed = x.bound().add(&bf(extra_tol), BOUND_PREC, RoundingMode::Up);
        assert!(
            bf_le(&diff, &allowed),
            "difference {diff:?} exceeds bound {:?} + {extra_tol}",
            x.bound()
        );
    }

    /// Independent brute-force q-polylog: fixed 600 terms at 512 bits,
    /// no shared code with the adaptive evaluator.
    fn brute_polylog(k: u32, x: &BigFloat, qv: &BigFloat) -> BigFloat {
        let p = 512;
        let rm = RoundingMode::ToEven;
        let one = BigFloat::from_i8(1, p);
        let omq = one.sub(qv, p, rm);
        let mut sum = BigFloat::from_i8(0, p);
        let mut xp = one.clone();
        let mut qpw = one.clone();
        for _ in 0..600 {
            xp = xp.mul(x, p, rm);
            qpw = qpw.mul(qv, p, rm);
            let br = one.sub(&qpw, p, rm).div(&omq, p, rm);
            sum = sum.add(&xp.div(&br.powi(k as usize, p, rm), p, rm), p, rm);
        }
        sum
    }

    #[test]
    fn zeta_partial_examples() {
        let p = prec();
        let q = qp(0.5);
        let z0 = zeta_partial(0, 3, &bf(0.7), &q, &p).unwrap();
        assert!(z0.value().is_zero());
        let z1 = zeta_partial(1, 5, &bf(0.7), &q, &p).unwrap();
        assert_within(&z1, &bf(0.7), 1e-70);
        // m=2, k=2, x=1: 1 + 1/(3/2)^2 = 13/9
        let z2 = zeta_partial(2, 2, &bf(1.0), &q, &p).unwrap();
        let expected =
            BigFloat::from_u64(13, 256).div(&BigFloat::from_u64(9, 256), 256, RoundingMode::ToEven);
        assert_within(&z2, &expected, 1e-70);
    }

    #[test]
    fn q_polylog_oracle_values() {
        let p = prec();
        // frozen brute-force value (dyadic inputs)
        let li2 = q_polylog(2, &bf(0.5), &qp(0.5), &p).unwrap();
        let frozen =
            parse_decimal("0.6860084721898720901200537228730680410778572453299098295", 256)
                .unwrap();
        assert_within(&li2, &frozen, 1e-50);
        // and against the run-time independent oracle
        assert_within(&li2, &brute_polylog(2, &bf(0.5), &bf(0.5)), 1e-80);
        let li3 = q_polylog(3, &bf(0.5), &qp(0.5), &p).unwrap();
        let frozen3 =
            parse_decimal("0.615207441728149717157083744603564114216814863408220956", 256)
                .unwrap();
        assert_within(&li3, &frozen3, 1e-50);
    }

    #[test]
    fn q_polylog_domain_and_zero() {
        let p = prec();
        assert!(q_polylog(2, &bf(1.0), &qp(0.5), &p).is_err());
        assert!(q_polylog(2, &bf(-1.2), &qp(0.5), &p).is_err());
        let z = q_polylog(4, &bf(0.0), &qp(0.5), &p).unwrap();
        assert!(z.value().is_zero());
    }

    #[test]
    fn q_log_duality_and_oracle() {
        let p = prec();
        for (xv, qv) in [(0.5, 0.5), (-0.3, 0.7), (0.8, 0.3), (0.25, 0.9)] {
            let q = qp(qv);
            let li1 = q_polylog(1, &bf(xv), &q, &p).unwrap();
            let lg = q_log(&bf(xv), &q, &p).unwrap();
            let s = li1.add(&lg, &p);
            assert!(bf_le(&s.value().abs(), s.bound()), "duality violated at x={xv}, q={qv}");
        }
        // x = q^2 at q = 11/16, frozen oracle
        let q = qp(0.6875);
        let x = q.q().mul(q.q(), 256, RoundingMode::ToEven);
        let lg = q_log(&x, &q, &p).unwrap();
        let frozen =
            parse_decimal("-0.6899267422536947841156811678446502810480013423033844793", 256)
                .unwrap();
        assert_within(&lg, &frozen, 1e-50);
    }

    #[test]
    fn h_function_reduces_to_polylog_at_zero_shift() {
        let p = prec();
        for (k, xv, qv) in [(1u32, 0.5, 0.5), (2, -0.4, 0.7), (3, 0.7, 0.3)] {
            let q = qp(qv);
            let h = h_function(&HSpec::new(k, bf(xv), bf(0.0), q.clone()).unwrap(), &p).unwrap();
            let li = q_polylog(k, &bf(xv), &q, &p).unwrap();
            let d = h.sub(&li, &p);
            assert!(bf_le(&d.value().abs(), d.bound()), "H[.,0] != Li at k={k}, x={xv}");
        }
    }

    #[test]
    fn h_function_oracle_and_shift_identity() {
        let p = prec();
        // frozen oracle: k=1, x=1/2, a=1/2, q=1/2
        let h = h_function(&HSpec::new(1, bf(0.5), bf(0.5), qp(0.5)).unwrap(), &p).unwrap();
        let frozen =
            parse_decimal("0.474854571073407483543023308433197466020736509169997163", 256)
                .unwrap();
        assert_within(&h, &frozen, 1e-50);
        // integer shift: sum_{m>=1} x^{m+1}/[m+1]^2 = Li_2[x] - x
        let q = qp(0.5);
        let h1 = h_function(&HSpec::new(2, bf(0.25), bf(1.0), q.clone()).unwrap(), &p).unwrap();
        let li = q_polylog(2, &bf(0.25), &q, &p).unwrap();
        let expected = li.sub(&QReal::from_f64(0.25, &p), &p);
        let d = h1.sub(&expected, &p);
        assert!(bf_le(&d.value().abs(), d.bound()));
    }

    #[test]
    fn h_function_domain_checks() {
        let q = qp(0.5);
        assert!(HSpec::new(1, bf(0.5), bf(-1.0), q.clone()).is_err());
        assert!(HSpec::new(1, bf(0.5), bf(-2.0), q.clone()).is_err());
        assert!(HSpec::new(1, bf(-0.5), bf(0.5), q.clone()).is_err());
        assert!(HSpec::new(1, bf(0.0), bf(0.5), q.clone()).is_err());
        assert!(HSpec::new(1, bf(1.2), bf(0.0), q.clone()).is_err());
        assert!(HSpec::new(1, bf(0.5), bf(-0.5), q).is_ok());
    }

    #[test]
    fn q_harmonic_examples() {
        let p = prec();
        let q = qp(0.5);
        assert!(q_harmonic(0, 3, &q, &p).unwrap().value().is_zero());
        let h1 = q_harmonic(1, 7, &q, &p).unwrap();
        assert_within(&h1, &bf(0.5), 1e-70);
        // m=3, k=1, q=1/2: 1/2 + 1/6 + 1/14 = 31/42
        let h3 = q_harmonic(3, 1, &q, &p).unwrap();
        let expected = BigFloat::from_u64(31, 256)
            .div(&BigFloat::from_u64(42, 256), 256, RoundingMode::ToEven);
        assert_within(&h3, &expected, 1e-70);
    }

    #[test]
    fn s_sum_depth_zero_is_polylog() {
        let p = prec();
        let q = qp(0.5);
        let spec = SeriesSpec::new(vec![], vec![], 3, bf(0.5), q.clone()).unwrap();
        let s = s_sum(&spec, &p).unwrap();
        let li = q_polylog(3, &bf(0.5), &q, &p).unwrap();
        let d = s.sub(&li, &p);
        assert!(bf_le(&d.value().abs(), d.bound()));
    }

    #[test]
    fn s_sum_oracle_value() {
        let p = prec();
        // frozen double-loop oracle: k=(1,1), x=(1,1), outer (2; 5/16), q=1/2
        let spec =
            SeriesSpec::new(vec![1, 1], vec![bf(1.0), bf(1.0)], 2, bf(0.3125), qp(0.5)).unwrap();
        let s = s_sum(&spec, &p).unwrap();
        let frozen =
            parse_decimal("0.5180690041595946198041116344498272771680139881272507915", 256)
                .unwrap();
        assert_within(&s, &frozen, 1e-50);
    }

    #[test]
    fn s_sum_first_paper_example() {
        let p = prec();
        for qv in [0.3, 0.5, 0.7] {
            let q = qp(qv);
            let spec =
                SeriesSpec::new(vec![1], vec![bf(1.0)], 2, q.q().clone(), q.clone()).unwrap();
            let lhs = s_sum(&spec, &p).unwrap();
            let q2 = q.q().mul(q.q(), 256, RoundingMode::ToEven);
            let rhs = q_polylog(3, q.q(), &q, &p)
                .unwrap()
                .add(&q_polylog(3, &q2, &q, &p).unwrap(), &p);
            let d = lhs.sub(&rhs, &p);
            assert!(
                bf_le(&d.value().abs(), d.bound()),
                "linear-sum reduction fails at q={qv}: residual {:?} bound {:?}",
                d.value(),
                d.bound()
            );
        }
    }

    #[test]
    fn s_sum_monotone_in_outer_weight() {
        let p = prec();
        let q = qp(0.5);
        let mut prev: Option<QReal> = None;
        for xv in [0.2, 0.4, 0.6] {
            let spec = SeriesSpec::new(vec![1], vec![bf(0.5)], 2, bf(xv), q.clone()).unwrap();
            let s = s_sum(&spec, &p).unwrap();
            if let Some(pv) = prev {
                assert!(bf_lt(pv.value(), s.value()), "not increasing at x={xv}");
            }
            prev = Some(s);
        }
    }

    #[test]
    fn s_sum_rejects_bad_weights() {
        let q = qp(0.5);
        assert!(SeriesSpec::new(vec![1], vec![bf(1.5)], 2, bf(0.5), q.clone()).is_err());
        assert!(SeriesSpec::new(vec![1], vec![bf(0.5)], 2, bf(1.0), q.clone()).is_err());
        assert!(SeriesSpec::new(vec![1, 2], vec![bf(0.5)], 2, bf(0.5), q.clone()).is_err());
        assert!(SeriesSpec::new(vec![0], vec![bf(0.5)], 2, bf(0.5), q).is_err());
    }

    #[test]
    fn s_sum_partial_consistency_randomized() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut checked = 0;
        while checked < 100 {
            let n = rng.gen_range(1..=3usize);
            let inner_k: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
            let inner_x: Vec<BigFloat> =
                (0..n).map(|_| bf((rng.gen_range(-10..=10) as f64) / 10.0)).collect();
            let outer_k = rng.gen_range(1..=4);
            let outer_x = bf((rng.gen_range(-8..=8) as f64) / 10.0);
            let qv = (rng.gen_range(1..=9) as f64) / 10.0;
            if outer_x.is_zero() {
                continue;
            }
            let spec = SeriesSpec::new(inner_k, inner_x, outer_k, outer_x, qp(qv)).unwrap();
            let m = rng.gen_range(40..=100u64);
            let at_m = match s_sum_partial(&spec, &p, StopRule::FixedTerms(m)) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let at_2m = s_sum_partial(&spec, &p, StopRule::FixedTerms(2 * m)).unwrap();
            let diff = at_m.sum.value().sub(at_2m.sum.value(), 320, RoundingMode::ToEven).abs();
            let allowed = at_m
                .tail
                .add(at_m.sum.bound(), BOUND_PREC, RoundingMode::Up)
                .add(at_2m.sum.bound(), BOUND_PREC, RoundingMode::Up);
            assert!(
                bf_le(&diff, &allowed),
                "partial sums at M and 2M differ by more than the reported bound"
            );
            checked += 1;
        }
    }
}
