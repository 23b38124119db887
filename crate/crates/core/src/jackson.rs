//! Jackson q-integral and q-derivative operators, the closed-form reduction
//! of `int_0^x H_k[t,a] t^(m+b-1) d_q t`, and an exact rational-arithmetic
//! polynomial mode used to check the q-calculus rules as identities rather
//! than approximations.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use astro_float::BigFloat;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{
    bf_is_neg, bf_le, bf_lt, bf_to_u64, q_bracket, q_pow, up1, Precision, QParam, QReal,
    BOUND_PREC,
};
use crate::qseries::{h_function, HSpec};

type EvalFn = dyn Fn(&BigFloat, &Precision) -> Result<QReal> + Send + Sync;

/// An evaluable map `t -> QReal` over a recorded interval of definition.
///
/// Evaluation must be thread-safe; the optional orbit bound is a caller
/// certificate for `sup |f|` over the geometric orbits used by the
/// q-integral. Without it the integral probes the first 16 orbit points and
/// doubles the observed maximum.
pub struct QFunction {
    lower: BigFloat,
    upper: BigFloat,
    orbit_bound: Option<BigFloat>,
    eval: Box<EvalFn>,
}

impl QFunction {
    /// Wraps a closure with its interval of definition.
    pub fn new<F>(lower: BigFloat, upper: BigFloat, eval: F) -> QFunction
    where
        F: Fn(&BigFloat, &Precision) -> Result<QReal> + Send + Sync + 'static,
    {
        QFunction { lower, upper, orbit_bound: None, eval: Box::new(eval) }
    }

    /// Attaches a certified bound on |f| over the integration orbits.
    pub fn with_orbit_bound(mut self, bound: BigFloat) -> QFunction {
        self.orbit_bound = Some(bound);
        self
    }

    /// Evaluates at a point, enforcing the domain record.
    pub fn eval(&self, t: &BigFloat, prec: &Precision) -> Result<QReal> {
        if !(bf_le(&self.lower, t) && bf_le(t, &self.upper)) {
            return Err(Error::Domain(String::from("evaluation point outside domain record")));
        }
        (self.eval)(t, prec)
    }

    /// Domain record.
    pub fn domain(&self) -> (&BigFloat, &BigFloat) {
        (&self.lower, &self.upper)
    }
}

/// Jackson q-integral
/// `int_a^x f(t) d_q t = (1-q) sum_{i>=0} q^i [x f(q^i x) - a f(q^i a)]`.
///
/// Truncation stops once the certified remaining mass `q^(i+1)(|x|+|a|) Mf`
/// falls below the target tolerance, where Mf bounds |f| on the orbit tails.
pub fn q_integral(
    f: &QFunction,
    a: &BigFloat,
    x: &BigFloat,
    q: &QParam,
    prec: &Precision,
) -> Result<QReal> {
    let (lo, hi) = f.domain();
    for p in [a, x] {
        if !(bf_le(lo, p) && bf_le(p, hi)) {
            return Err(Error::Domain(String::from("integration endpoint outside domain")));
        }
    }
    let use_a = !a.is_zero();
    let mf = match &f.orbit_bound {
        Some(b) => b.clone(),
        None => probe_orbit_bound(f, a, x, q, prec)?,
    };
    let reach = up1(&x.abs().add(&a.abs(), BOUND_PREC, astro_float::RoundingMode::Up));
    let xq = QReal::exact(x.clone());
    let aq = QReal::exact(a.clone());
    let qq = QReal::exact(q.q().clone());
    let mut q_pow = QReal::one();
    let mut sum = QReal::zero();
    let mut i: u64 = 0;
    loop {
        let tx = q_pow.value().mul(x, prec.bits(), astro_float::RoundingMode::ToEven);
        let mut step = xq.mul(&f.eval(&tx, prec)?, prec);
        if use_a {
            let ta = q_pow.value().mul(a, prec.bits(), astro_float::RoundingMode::ToEven);
            step = step.sub(&aq.mul(&f.eval(&ta, prec)?, prec), prec);
        }
        sum = sum.add(&q_pow.mul(&step, prec), prec);
        // remaining mass after this index, before the (1-q) prefactor is
        // applied: sum_{j>i} q^j (|x|+|a|) Mf * (1-q) = q^(i+1)(|x|+|a|) Mf
        let qnext = q_pow.mul(&qq, prec);
        let tail = up1(&qnext.upper_abs().mul(
            &reach.mul(&mf, BOUND_PREC, astro_float::RoundingMode::Up),
            BOUND_PREC,
            astro_float::RoundingMode::Up,
        ));
        if bf_le(&tail, prec.target_tol()) {
            let total = sum.mul(&QReal::exact(q.one_minus_q().clone()), prec);
            return Ok(QReal::with_bound(
                total.value().clone(),
                total.bound().add(&tail, BOUND_PREC, astro_float::RoundingMode::Up),
            ));
        }
        q_pow = qnext;
        i += 1;
        if i > 1_000_000 {
            return Err(Error::TruncationCap { terms: 1_000_000 });
        }
    }
}

/// Probes |f| at the first 16 orbit points of both endpoints and doubles
/// the maximum. A heuristic certificate for integrands bounded near zero;
/// callers holding a real bound should attach it instead.
fn probe_orbit_bound(
    f: &QFunction,
    a: &BigFloat,
    x: &BigFloat,
    q: &QParam,
    prec: &Precision,
) -> Result<BigFloat> {
    let mut max = BigFloat::from_i8(0, BOUND_PREC);
    let mut scale = BigFloat::from_i8(1, prec.bits());
    for _ in 0..16 {
        for endpoint in [x, a] {
            if endpoint.is_zero() {
                continue;
            }
            let t = scale.mul(endpoint, prec.bits(), astro_float::RoundingMode::ToEven);
            let v = f.eval(&t, prec)?.upper_abs();
            if bf_lt(&max, &v) {
                max = v;
            }
        }
        scale = scale.mul(q.q(), prec.bits(), astro_float::RoundingMode::ToEven);
    }
    if max.is_zero() {
        return Err(Error::TailBound(String::from(
            "orbit probe saw only zeros; supply an explicit orbit bound",
        )));
    }
    Ok(max.add(&max, BOUND_PREC, astro_float::RoundingMode::Up))
}

/// Jackson q-derivative `D_q f(x) = (f(qx) - f(x)) / (qx - x)`, x != 0.
pub fn q_derivative(f: &QFunction, x: &BigFloat, q: &QParam, prec: &Precision) -> Result<QReal> {
    if x.is_zero() {
        return Err(Error::Domain(String::from("q-derivative undefined at x = 0")));
    }
    let qx = q.q().mul(x, prec.bits(), astro_float::RoundingMode::ToEven);
    let num = f.eval(&qx, prec)?.sub(&f.eval(x, prec)?, prec);
    // qx - x = -(1-q) x exactly
    let den = QReal::exact(q.one_minus_q().clone()).mul(&QReal::exact(x.clone()), prec).neg();
    num.div(&den, prec)
}

/// Closed-form value of `int_0^x H_k[t,a] t^(m+b-1) d_q t`: a signed
/// combination of H-products plus a finite shifted sum.
pub fn lemma21_rhs(
    m: u32,
    k: u32,
    a: &BigFloat,
    b: &BigFloat,
    x: &BigFloat,
    q: &QParam,
    prec: &Precision,
) -> Result<QReal> {
    if m == 0 || k == 0 {
        return Err(Error::Domain(String::from("m and k must be positive")));
    }
    for (name, v) in [("a", a), ("b", b)] {
        if v.is_int() && bf_is_neg(v) {
            return Err(Error::Domain(alloc::format!("{name} must avoid negative integers")));
        }
    }
    let ab = a.add(b, prec.bits(), astro_float::RoundingMode::ToEven);
    if ab.is_int() && bf_is_neg(&ab) {
        return Err(Error::Domain(String::from("a+b must avoid negative integers")));
    }
    let one = BigFloat::from_i8(1, BOUND_PREC);
    if !bf_lt(&x.abs(), &one) {
        return Err(Error::Domain(String::from("|x| < 1 required")));
    }
    if x.is_zero() {
        return Ok(QReal::zero());
    }
    let ints = a.is_int() && b.is_int();
    if bf_is_neg(x) && !ints {
        return Err(Error::Domain(String::from("negative x requires integer shifts")));
    }
    let mb = BigFloat::from_u64(m as u64, prec.bits()).add(b, prec.bits(), astro_float::RoundingMode::ToEven);
    let x_mb = real_power(x, &mb, prec)?;
    let q_mb = q_pow(&mb, q, prec)?;
    let bracket_mb = q_bracket(&mb, q, prec)?;
    let h = |kk: u32, xx: &BigFloat, aa: &BigFloat| -> Result<QReal> {
        h_function(&HSpec::new(kk, xx.clone(), aa.clone(), q.clone())?, prec)
    };
    let mut total = QReal::zero();
    // sum_{j=1}^{k-1} (-1)^(j-1) q^((m+b)(j-1)) x^(m+b) / [m+b]^j * H_{k+1-j}[x,a]
    let mut q_mb_pow = QReal::one(); // q^((m+b)(j-1))
    let mut inv_br = QReal::one();
    for j in 1..k {
        inv_br = inv_br.div(&bracket_mb, prec)?;
        let mut term = q_mb_pow.mul(&x_mb, prec).mul(&inv_br, prec);
        term = term.mul(&h(k + 1 - j, x, a)?, prec);
        total = add_signed(total, term, j % 2 == 1, prec);
        q_mb_pow = q_mb_pow.mul(&q_mb, prec);
    }
    // (-1)^(k-1) q^((m+b)(k-1)) / [m+b]^k (x^(m+b) H_1[x,a] - q^(m+b) H_1[x,a+b])
    let br_k = bracket_mb.powi(k as u64, prec);
    let mut mid = x_mb.mul(&h(1, x, a)?, prec);
    mid = mid.sub(&q_mb.mul(&h(1, x, &ab)?, prec), prec);
    mid = q_mb_pow.mul(&mid, prec).div(&br_k, prec)?;
    total = add_signed(total, mid, k % 2 == 1, prec);
    // (-1)^(k-1) q^((m+b)k) / [m+b]^k * sum_{j=1}^m x^(j+a+b) / [j+a+b]
    let q_mbk = q_mb_pow.mul(&q_mb, prec); // q^((m+b)k)
    let mut inner = QReal::zero();
    let x_ab = real_power(x, &ab, prec)?;
    let q_ab = q_pow(&ab, q, prec)?;
    let mut x_pow = QReal::one();
    let mut q_pw = QReal::one();
    let xq = QReal::exact(x.clone());
    let qq = QReal::exact(q.q().clone());
    for _ in 1..=m {
        x_pow = x_pow.mul(&xq, prec);
        q_pw = q_pw.mul(&qq, prec);
        let br = crate::numerics::bracket_from_qpow(&q_pw.mul(&q_ab, prec), q, prec)?;
        inner = inner.add(&x_pow.mul(&x_ab, prec).div(&br, prec)?, prec);
    }
    let last = q_mbk.mul(&inner, prec).div(&br_k, prec)?;
    total = add_signed(total, last, k % 2 == 1, prec);
    Ok(total)
}

fn add_signed(acc: QReal, term: QReal, positive: bool, prec: &Precision) -> QReal {
    if positive {
        acc.add(&term, prec)
    } else {
        acc.sub(&term, prec)
    }
}

/// x^e for real e: integer exponents keep negative bases exact, otherwise
/// exp(e ln x) with x > 0.
pub(crate) fn real_power(x: &BigFloat, e: &BigFloat, prec: &Precision) -> Result<QReal> {
    if e.is_int() {
        if let Some(n) = bf_to_u64(e) {
            return Ok(QReal::exact(x.clone()).powi(n, prec));
        }
    }
    QReal::exact(x.clone()).pow_real(e, prec)
}

/// q-bracket of an integer as an exact rational: 1 + q + ... + q^(i-1).
pub fn q_bracket_rational(i: u32, q: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut p = BigRational::one();
    for _ in 0..i {
        acc += &p;
        p *= q;
    }
    acc
}

/// A polynomial with exact rational coefficients, used to state the
/// q-calculus rules as exact identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    /// From coefficients, lowest degree first; trailing zeros trimmed.
    pub fn new(mut coeffs: Vec<BigRational>) -> QPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> QPoly {
        QPoly { coeffs: Vec::new() }
    }

    /// The monomial t^n.
    pub fn monomial(n: usize) -> QPoly {
        let mut coeffs = alloc::vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        QPoly { coeffs }
    }

    /// Coefficients, lowest degree first.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Evaluation at a rational point.
    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Sum.
    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = alloc::vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        QPoly::new(out)
    }

    /// Product.
    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return QPoly::zero();
        }
        let mut out = alloc::vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// f(c t).
    pub fn scale_arg(&self, c: &BigRational) -> QPoly {
        let mut p = BigRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for coeff in &self.coeffs {
            out.push(coeff * &p);
            p *= c;
        }
        QPoly::new(out)
    }

    /// Exact q-derivative: `D_q(t^i) = [i]_q t^(i-1)` termwise.
    pub fn q_derivative(&self, q: &BigRational) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * q_bracket_rational(i as u32, q));
        }
        QPoly::new(out)
    }

    /// Exact Jackson q-integral over [a, x]:
    /// `int t^i d_q t = (x^(i+1) - a^(i+1)) / [i+1]_q`.
    pub fn q_integral(&self, a: &BigRational, x: &BigRational, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        let mut xp = x.clone();
        let mut ap = a.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            xp = if i == 0 { x.clone() } else { xp * x };
            ap = if i == 0 { a.clone() } else { ap * a };
            acc += c * (&xp - &ap) / q_bracket_rational(i as u32 + 1, q);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use astro_float::RoundingMode;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::vec;

    fn prec() -> Precision {
        Precision::default()
    }

    fn qp(v: f64) -> QParam {
        QParam::from_f64(v).unwrap()
    }

    fn bf(v: f64) -> BigFloat {
        BigFloat::from_f64(v, 256)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn assert_zero_within(d: &QReal, what: &str) {
        assert!(
            bf_le(&d.value().abs(), d.bound()),
            "{what}: residual {:?} exceeds bound {:?}",
            d.value(),
            d.bound()
        );
    }

    fn monomial_fn(e: u64) -> QFunction {
        QFunction::new(bf(-1.0), bf(1.0), move |t, p| {
            Ok(QReal::exact(t.clone()).powi(e, p))
        })
    }

    #[test]
    fn q_integral_of_constant_is_x() {
        let p = prec();
        let q = qp(0.5);
        let f = QFunction::new(bf(-1.0), bf(1.0), |_, _| Ok(QReal::one()));
        let v = q_integral(&f, &bf(0.0), &bf(0.625), &q, &p).unwrap();
        let d = v.sub(&QReal::from_f64(0.625, &p), &p);
        assert_zero_within(&d, "integral of 1");
    }

    #[test]
    fn q_integral_of_monomial() {
        let p = prec();
        for qv in [0.3, 0.7] {
            let q = qp(qv);
            for m in 1..=5u64 {
                let f = monomial_fn(m - 1);
                let v = q_integral(&f, &bf(0.0), &bf(0.5), &q, &p).unwrap();
                let expected = QReal::from_f64(0.5, &p)
                    .powi(m, &p)
                    .div(&crate::numerics::q_bracket_u64(m, &q, &p).unwrap(), &p)
                    .unwrap();
                let d = v.sub(&expected, &p);
                assert_zero_within(&d, "x^m/[m]");
            }
        }
    }

    #[test]
    fn q_integral_respects_lower_endpoint() {
        let p = prec();
        let q = qp(0.5);
        // int_a^x 1 d_q t = x - a
        let f = QFunction::new(bf(-1.0), bf(1.0), |_, _| Ok(QReal::one()));
        let v = q_integral(&f, &bf(0.25), &bf(0.75), &q, &p).unwrap();
        let d = v.sub(&QReal::from_f64(0.5, &p), &p);
        assert_zero_within(&d, "int_a^x 1");
    }

    #[test]
    fn q_derivative_of_monomials() {
        let p = prec();
        let q = qp(0.5);
        for m in 1..=8u64 {
            let f = monomial_fn(m);
            let x = bf(0.375);
            let v = q_derivative(&f, &x, &q, &p).unwrap();
            let expected = crate::numerics::q_bracket_u64(m, &q, &p)
                .unwrap()
                .mul(&QReal::exact(x.clone()).powi(m - 1, &p), &p);
            let d = v.sub(&expected, &p);
            assert_zero_within(&d, "D_q t^m");
        }
        // constants differentiate to zero
        let c = QFunction::new(bf(-1.0), bf(1.0), |_, _| Ok(QReal::from_f64(4.25, &prec())));
        let v = q_derivative(&c, &bf(0.5), &q, &p).unwrap();
        assert!(bf_le(&v.value().abs(), v.bound()));
        // x = 0 rejected
        assert!(q_derivative(&monomial_fn(2), &bf(0.0), &q, &p).is_err());
    }

    #[test]
    fn q_derivative_of_h_lowers_weight() {
        // D_q(H_k[x,a]) = H_{k-1}[x,a] / x
        let p = prec();
        let q = qp(0.5);
        let (k, a, x) = (2u32, bf(0.5), bf(0.4));
        let qc = q.clone();
        let ac = a.clone();
        let f = QFunction::new(bf(0.0), bf(1.0), move |t, pr| {
            h_function(&HSpec::new(k, t.clone(), ac.clone(), qc.clone())?, pr)
        });
        let lhs = q_derivative(&f, &x, &q, &p).unwrap();
        let rhs = h_function(&HSpec::new(k - 1, x.clone(), a, q.clone()).unwrap(), &p)
            .unwrap()
            .div(&QReal::exact(x), &p)
            .unwrap();
        let d = lhs.sub(&rhs, &p);
        assert_zero_within(&d, "D_q H_k");
    }

    #[test]
    fn lemma21_two_route_checks() {
        let p = prec();
        let q = qp(0.5);
        let cases: [(u32, u32, f64, f64, f64); 3] = [
            (1, 1, 0.0, 0.0, 0.5),
            (2, 2, 0.5, 0.25, 0.3125),
            (3, 1, 0.25, 0.5, 0.5),
        ];
        for (m, k, av, bv, xv) in cases {
            let (a, b, x) = (bf(av), bf(bv), bf(xv));
            let qc = q.clone();
            let ac = a.clone();
            let exp = BigFloat::from_u64(m as u64 - 1, 256).add(&b, 256, RoundingMode::ToEven);
            let f = QFunction::new(bf(0.0), bf(1.0), move |t, pr| {
                let h = h_function(&HSpec::new(k, t.clone(), ac.clone(), qc.clone())?, pr)?;
                Ok(h.mul(&real_power(t, &exp, pr)?, pr))
            });
            let direct = q_integral(&f, &bf(0.0), &x, &q, &p).unwrap();
            let closed = lemma21_rhs(m, k, &a, &b, &x, &q, &p).unwrap();
            let d = direct.sub(&closed, &p);
            assert_zero_within(&d, "lemma reduction");
        }
        // x = 0 is identically zero
        let z = lemma21_rhs(2, 2, &bf(0.5), &bf(0.25), &bf(0.0), &q, &p).unwrap();
        assert!(z.value().is_zero());
        // negative x requires integer shifts
        assert!(lemma21_rhs(1, 1, &bf(0.5), &bf(0.0), &bf(-0.5), &q, &p).is_err());
        assert!(lemma21_rhs(1, 1, &bf(0.0), &bf(0.0), &bf(-0.5), &q, &p).is_ok());
    }

    fn random_rat(rng: &mut ChaCha8Rng) -> BigRational {
        rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))
    }

    fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> QPoly {
        let deg = rng.gen_range(0..=max_deg);
        QPoly::new((0..=deg).map(|_| random_rat(rng)).collect())
    }

    fn random_q(rng: &mut ChaCha8Rng) -> BigRational {
        let d = rng.gen_range(2..=9);
        let n = rng.gen_range(1..d);
        rat(n, d)
    }

    #[test]
    fn rational_mode_monomial_rule_exact() {
        // D_q(t^m) = [m]_q t^(m-1) as exact polynomials, m = 1..8
        let q = rat(1, 2);
        for m in 1..=8usize {
            let d = QPoly::monomial(m).q_derivative(&q);
            let mut expected = QPoly::monomial(m - 1);
            expected = expected.mul(&QPoly::new(vec![q_bracket_rational(m as u32, &q)]));
            assert_eq!(d, expected, "monomial rule fails at m={m}");
        }
    }

    #[test]
    fn rational_mode_fundamental_pair_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        for _ in 0..20 {
            let f = random_poly(&mut rng, 8);
            let q = random_q(&mut rng);
            let a = random_rat(&mut rng);
            let x = random_rat(&mut rng);
            // int_a^x D_q f = f(x) - f(a)
            let lhs = f.q_derivative(&q).q_integral(&a, &x, &q);
            let rhs = f.eval(&x) - f.eval(&a);
            assert_eq!(lhs, rhs, "fundamental pair (integral of derivative) fails");
            // D_q of the antiderivative returns f: check via the
            // antiderivative polynomial built from the integral rule.
            let anti = QPoly::new(
                core::iter::once(BigRational::zero())
                    .chain(
                        f.coeffs()
                            .iter()
                            .enumerate()
                            .map(|(i, c)| c / q_bracket_rational(i as u32 + 1, &q)),
                    )
                    .collect(),
            );
            assert_eq!(anti.q_derivative(&q), f, "derivative of antiderivative fails");
        }
    }

    #[test]
    fn rational_mode_integration_by_parts_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..20 {
            let f = random_poly(&mut rng, 5);
            let g = random_poly(&mut rng, 5);
            let q = random_q(&mut rng);
            let a = random_rat(&mut rng);
            let x = random_rat(&mut rng);
            // int_a^x f D_q(g) = [f g]_a^x - int_a^x g(qt) D_q(f)
            let lhs = f.mul(&g.q_derivative(&q)).q_integral(&a, &x, &q);
            let boundary = f.eval(&x) * g.eval(&x) - f.eval(&a) * g.eval(&a);
            let rhs = boundary - g.scale_arg(&q).mul(&f.q_derivative(&q)).q_integral(&a, &x, &q);
            assert_eq!(lhs, rhs, "integration by parts fails");
        }
    }

    #[test]
    fn product_rule_exact_both_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..10 {
            let f = random_poly(&mut rng, 4);
            let g = random_poly(&mut rng, 4);
            let q = random_q(&mut rng);
            let d1 = f.mul(&g).q_derivative(&q);
            let d2 = g.scale_arg(&q).mul(&f.q_derivative(&q)).add(&f.mul(&g.q_derivative(&q)));
            let d3 = f.scale_arg(&q).mul(&g.q_derivative(&q)).add(&g.mul(&f.q_derivative(&q)));
            assert_eq!(d1, d2, "product rule (first form) fails");
            assert_eq!(d1, d3, "product rule (second form) fails");
        }
    }
}
