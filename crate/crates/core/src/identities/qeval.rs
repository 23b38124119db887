//! Specialized series evaluators used by the q-identity entries: shifted
//! nested sums, two-bracket sums, cross-difference sums with cancelling
//! divergences, and linearly weighted polylog-type sums.

use alloc::string::String;
use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::numerics::{
    bf_is_neg, bf_le, bracket_from_qpow, geometric_tail_upper, poly_tail_upper, q_pow, up1,
    Precision, QParam, QReal, BOUND_PREC, TERM_CAP,
};
use crate::qseries::q_polylog;

const UPB: astro_float::RoundingMode = astro_float::RoundingMode::Up;

fn min_terms_for_shift(shift: &BigFloat) -> u64 {
    if !bf_is_neg(shift) {
        return 1;
    }
    let one = BigFloat::from_i8(1, BOUND_PREC);
    let mut m = 2u64;
    loop {
        let s = BigFloat::from_u64(m, BOUND_PREC).add(shift, BOUND_PREC, astro_float::RoundingMode::ToEven);
        if bf_le(&one, &s) || m > 1 << 20 {
            return m;
        }
        m += 1;
    }
}

/// `sum_{m>=1} w^(m+beta) / [m+beta]^K * sum_{j=1}^m x^(j+gamma) / [j+gamma]`
/// for 0 < w < 1. The inner partial sums converge absolutely (|x| < 1), so
/// the outer tail is geometric with ratio w.
#[allow(clippy::too_many_arguments)]
pub fn shifted_nested_sum(
    w: &QReal,
    beta: &BigFloat,
    big_k: u32,
    x: &BigFloat,
    gamma: &BigFloat,
    q: &QParam,
    prec: &Precision,
) -> Result<QReal> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    let w_up = w.upper_abs();
    if !crate::numerics::bf_lt(&w_up, &one) {
        return Err(Error::Domain(String::from("outer weight must stay below 1")));
    }
    if !crate::numerics::bf_lt(&x.abs(), &one) {
        return Err(Error::Domain(String::from("inner weight must satisfy |x| < 1")));
    }
    // Prefactors for the shifted powers.
    let w_beta = w.pow_real(beta, prec)?;
    let q_beta = q_pow(beta, q, prec)?;
    let x_gamma = crate::jackson::real_power(x, gamma, prec)?;
    let q_gamma = q_pow(gamma, q, prec)?;
    let min_terms = min_terms_for_shift(beta).max(min_terms_for_shift(gamma));
    let x_abs = x.abs();
    let mut sum = QReal::zero();
    let mut w_pow = QReal::one();
    let mut x_pow = QReal::one();
    let mut q_pow_m = QReal::one();
    let mut inner = QReal::zero();
    let mut inner_abs = BigFloat::from_i8(0, BOUND_PREC); // running sum of |inner terms|
    let xq = QReal::exact(x.clone());
    let qq = QReal::exact(q.q().clone());
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        q_pow_m = q_pow_m.mul(&qq, prec);
        x_pow = x_pow.mul(&xq, prec);
        w_pow = w_pow.mul(w, prec);
        // inner term x^(j+gamma)/[j+gamma] at j = m
        let bracket_g = bracket_from_qpow(&q_pow_m.mul(&q_gamma, prec), q, prec)?;
        let it = x_gamma.mul(&x_pow, prec).div(&bracket_g, prec)?;
        inner = inner.add(&it, prec);
        let last_inner_term = it.upper_abs();
        inner_abs = up1(&inner_abs.add(&last_inner_term, BOUND_PREC, UPB));
        // outer factor w^(m+beta)/[m+beta]^K
        let bracket_b = bracket_from_qpow(&q_pow_m.mul(&q_beta, prec), q, prec)?;
        let outer = w_beta.mul(&w_pow, prec).div(&bracket_b.powi(big_k as u64, prec), prec)?;
        sum = sum.add(&outer.mul(&inner, prec), prec);
        if m < min_terms {
            continue;
        }
        // |inner_j| for j > m stays below inner_abs plus the inner geometric tail.
        let inner_cap = match geometric_tail_upper(&last_inner_term, &x_abs) {
            Ok(t) => up1(&inner_abs.add(&t, BOUND_PREC, UPB)),
            Err(_) => continue,
        };
        let first = up1(&outer.upper_abs().mul(&w_up, BOUND_PREC, UPB).mul(&inner_cap, BOUND_PREC, UPB));
        let tail = geometric_tail_upper(&first, &w_up)?;
        if bf_le(&tail, prec.target_tol()) {
            return Ok(QReal::with_bound(
                sum.value().clone(),
                sum.bound().add(&tail, BOUND_PREC, UPB),
            ));
        }
    }
}

/// `sum_{m>=1} w^(m+beta) / ([m+beta] [m+delta])` for 0 < w < 1.
pub fn shifted_two_bracket_sum(
    w: &QReal,
    beta: &BigFloat,
    delta: &BigFloat,
    q: &QParam,
    prec: &Precision,
) -> Result<QReal> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    let w_up = w.upper_abs();
    if !crate::numerics::bf_lt(&w_up, &one) {
        return Err(Error::Domain(String::from("weight must stay below 1")));
    }
    let w_beta = w.pow_real(beta, prec)?;
    let q_beta = q_pow(beta, q, prec)?;
    let q_delta = q_pow(delta, q, prec)?;
    let min_terms = min_terms_for_shift(beta).max(min_terms_for_shift(delta));
    let mut sum = QReal::zero();
    let mut w_pow = QReal::one();
    let mut q_pow_m = QReal::one();
    let qq = QReal::exact(q.q().clone());
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        q_pow_m = q_pow_m.mul(&qq, prec);
        w_pow = w_pow.mul(w, prec);
        let b1 = bracket_from_qpow(&q_pow_m.mul(&q_beta, prec), q, prec)?;
        let b2 = bracket_from_qpow(&q_pow_m.mul(&q_delta, prec), q, prec)?;
        let term = w_beta.mul(&w_pow, prec).div(&b1.mul(&b2, prec), prec)?;
        sum = sum.add(&term, prec);
        if m < min_terms {
            continue;
        }
        let first = up1(&term.upper_abs().mul(&w_up, BOUND_PREC, UPB));
        let tail = geometric_tail_upper(&first, &w_up)?;
        if bf_le(&tail, prec.target_tol()) {
            return Ok(QReal::with_bound(
                sum.value().clone(),
                sum.bound().add(&tail, BOUND_PREC, UPB),
            ));
        }
    }
}

/// The convergent combination
/// `sum_m (Li_l[ys] zeta_m[k, yh] - Li_k[yh] zeta_m[l, ys]) / [m]`
/// whose numerator decays like max(yh, ys)^m by cancellation.
pub fn cross_difference_sum(
    k: u32,
    yh: &QReal,
    l: u32,
    ys: &QReal,
    q: &QParam,
    prec: &Precision,
) -> Result<QReal> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    let yh_up = yh.upper_abs();
    let ys_up = ys.upper_abs();
    for y in [&yh_up, &ys_up] {
        if !crate::numerics::bf_lt(y, &one) {
            return Err(Error::Domain(String::from("weights must stay below 1")));
        }
    }
    let li_k = q_polylog_q(k, yh, q, prec)?;
    let li_l = q_polylog_q(l, ys, q, prec)?;
    // A = Li_l / (1 - yh), B = Li_k / (1 - ys): coefficients of the term bound
    // A yh^(m+1) + B ys^(m+1).
    let a_coef = up1(&li_l.upper_abs().div(
        &crate::numerics::dn1(&one.sub(&yh_up, BOUND_PREC, astro_float::RoundingMode::Down)),
        BOUND_PREC,
        UPB,
    ));
    let b_coef = up1(&li_k.upper_abs().div(
        &crate::numerics::dn1(&one.sub(&ys_up, BOUND_PREC, astro_float::RoundingMode::Down)),
        BOUND_PREC,
        UPB,
    ));
    let rho = if bf_le(&yh_up, &ys_up) { ys_up.clone() } else { yh_up.clone() };
    let mut zeta_k = QReal::zero();
    let mut zeta_l = QReal::zero();
    let mut yh_pow = QReal::one();
    let mut ys_pow = QReal::one();
    let mut yh_env = BigFloat::from_i8(1, BOUND_PREC);
    let mut ys_env = BigFloat::from_i8(1, BOUND_PREC);
    let mut q_pow_m = QReal::one();
    let qq = QReal::exact(q.q().clone());
    let mut sum = QReal::zero();
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        q_pow_m = q_pow_m.mul(&qq, prec);
        let bracket = bracket_from_qpow(&q_pow_m, q, prec)?;
        yh_pow = yh_pow.mul(yh, prec);
        ys_pow = ys_pow.mul(ys, prec);
        zeta_k = zeta_k.add(&yh_pow.div(&bracket.powi(k as u64, prec), prec)?, prec);
        zeta_l = zeta_l.add(&ys_pow.div(&bracket.powi(l as u64, prec), prec)?, prec);
        let numer = li_l.mul(&zeta_k, prec).sub(&li_k.mul(&zeta_l, prec), prec);
        sum = sum.add(&numer.div(&bracket, prec)?, prec);
        // envelopes yh^(m+1), ys^(m+1)
        yh_env = up1(&yh_env.mul(&yh_up, BOUND_PREC, UPB));
        ys_env = up1(&ys_env.mul(&ys_up, BOUND_PREC, UPB));
        let g = up1(&a_coef
            .mul(&up1(&yh_env.mul(&yh_up, BOUND_PREC, UPB)), BOUND_PREC, UPB)
            .add(&b_coef.mul(&up1(&ys_env.mul(&ys_up, BOUND_PREC, UPB)), BOUND_PREC, UPB), BOUND_PREC, UPB));
        let tail = geometric_tail_upper(&g, &rho)?;
        if bf_le(&tail, prec.target_tol()) {
            return Ok(QReal::with_bound(
                sum.value().clone(),
                sum.bound().add(&tail, BOUND_PREC, UPB),
            ));
        }
    }
}

/// `sum_m m y^m / [m]^k`: the derivative-style sum entering the corrected
/// boundary term of the x -> 1 limit.
pub fn m_weighted_polylog(k: u32, y: &QReal, q: &QParam, prec: &Precision) -> Result<QReal> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    let y_up = y.upper_abs();
    if !crate::numerics::bf_lt(&y_up, &one) {
        return Err(Error::Domain(String::from("weight must stay below 1")));
    }
    let mut sum = QReal::zero();
    let mut y_pow = QReal::one();
    let mut q_pow_m = QReal::one();
    let qq = QReal::exact(q.q().clone());
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        q_pow_m = q_pow_m.mul(&qq, prec);
        y_pow = y_pow.mul(y, prec);
        let bracket = bracket_from_qpow(&q_pow_m, q, prec)?;
        let term = QReal::from_u64(m, prec)
            .mul(&y_pow, prec)
            .div(&bracket.powi(k as u64, prec), prec)?;
        sum = sum.add(&term, prec);
        if let Ok(tail) = poly_tail_upper(m, 1, &y_up) {
            if bf_le(&tail, prec.target_tol()) {
                return Ok(QReal::with_bound(
                    sum.value().clone(),
                    sum.bound().add(&tail, BOUND_PREC, UPB),
                ));
            }
        }
    }
}

/// `sum_m (Li_k[x] zeta_m[l,y] - Li_l[y] zeta_m[k,x]) z^m / [m]`.
#[allow(clippy::too_many_arguments)]
pub fn weighted_cross_sum(
    k: u32,
    x: &BigFloat,
    l: u32,
    y: &BigFloat,
    z: &BigFloat,
    q: &QParam,
    prec: &Precision,
) -> Result<QReal> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    for v in [x, y, z] {
        if !crate::numerics::bf_lt(&v.abs(), &one) {
            return Err(Error::Domain(String::from("all weights must satisfy |.| < 1")));
        }
    }
    let li_k = q_polylog(k, x, q, prec)?;
    let li_l = q_polylog(l, y, q, prec)?;
    // |numerator| <= Li_k[|x|] Li_l-abs + ... bounded by C; terms <= C |z|^m
    let zk_abs = q_polylog(k, &x.abs(), q, prec)?.upper_abs();
    let zl_abs = q_polylog(l, &y.abs(), q, prec)?.upper_abs();
    let c = up1(&li_k
        .upper_abs()
        .mul(&zl_abs, BOUND_PREC, UPB)
        .add(&li_l.upper_abs().mul(&zk_abs, BOUND_PREC, UPB), BOUND_PREC, UPB));
    let z_abs = z.abs();
    let mut zeta_k = QReal::zero();
    let mut zeta_l = QReal::zero();
    let mut x_pow = QReal::one();
    let mut y_pow = QReal::one();
    let mut z_pow = QReal::one();
    let mut z_env = BigFloat::from_i8(1, BOUND_PREC);
    let mut q_pow_m = QReal::one();
    let qq = QReal::exact(q.q().clone());
    let (xq, yq, zq) =
        (QReal::exact(x.clone()), QReal::exact(y.clone()), QReal::exact(z.clone()));
    let mut sum = QReal::zero();
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        q_pow_m = q_pow_m.mul(&qq, prec);
        let bracket = bracket_from_qpow(&q_pow_m, q, prec)?;
        x_pow = x_pow.mul(&xq, prec);
        y_pow = y_pow.mul(&yq, prec);
        z_pow = z_pow.mul(&zq, prec);
        zeta_k = zeta_k.add(&x_pow.div(&bracket.powi(k as u64, prec), prec)?, prec);
        zeta_l = zeta_l.add(&y_pow.div(&bracket.powi(l as u64, prec), prec)?, prec);
        let numer = li_k.mul(&zeta_l, prec).sub(&li_l.mul(&zeta_k, prec), prec);
        sum = sum.add(&numer.mul(&z_pow, prec).div(&bracket, prec)?, prec);
        z_env = up1(&z_env.mul(&z_abs, BOUND_PREC, UPB));
        let first = up1(&c.mul(&up1(&z_env.mul(&z_abs, BOUND_PREC, UPB)), BOUND_PREC, UPB));
        let tail = geometric_tail_upper(&first, &z_abs)?;
        if bf_le(&tail, prec.target_tol()) {
            return Ok(QReal::with_bound(
                sum.value().clone(),
                sum.bound().add(&tail, BOUND_PREC, UPB),
            ));
        }
    }
}

/// `sum_m x^m/[m]^(k1) sum_{j<=m} z^j/[j]^(k2) zeta_j[1, y]`:
/// a triply nested sum with |T_m| <= m^2, so a poly-geometric tail applies.
#[allow(clippy::too_many_arguments)]
pub fn triple_nested_sum(
    k1: u32,
    x: &BigFloat,
    k2: u32,
    z: &BigFloat,
    y: &BigFloat,
    q: &QParam,
    prec: &Precision,
) -> Result<QReal> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    for v in [x, y, z] {
        if !crate::numerics::bf_le(&v.abs(), &one) {
            return Err(Error::Domain(String::from("weights must satisfy |.| <= 1")));
        }
    }
    if !crate::numerics::bf_lt(&x.abs(), &one) {
        return Err(Error::Domain(String::from("the outer weight must satisfy |x| < 1")));
    }
    let x_abs = x.abs();
    let mut zeta1 = QReal::zero();
    let mut t_inner = QReal::zero();
    let mut x_pow = QReal::one();
    let mut y_pow = QReal::one();
    let mut z_pow = QReal::one();
    let mut q_pow_m = QReal::one();
    let qq = QReal::exact(q.q().clone());
    let (xq, yq, zq) =
        (QReal::exact(x.clone()), QReal::exact(y.clone()), QReal::exact(z.clone()));
    let mut sum = QReal::zero();
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        q_pow_m = q_pow_m.mul(&qq, prec);
        let bracket = bracket_from_qpow(&q_pow_m, q, prec)?;
        x_pow = x_pow.mul(&xq, prec);
        y_pow = y_pow.mul(&yq, prec);
        z_pow = z_pow.mul(&zq, prec);
        zeta1 = zeta1.add(&y_pow.div(&bracket, prec)?, prec);
        t_inner = t_inner.add(
            &z_pow.div(&bracket.powi(k2 as u64, prec), prec)?.mul(&zeta1, prec),
            prec,
        );
        sum = sum.add(&x_pow.div(&bracket.powi(k1 as u64, prec), prec)?.mul(&t_inner, prec), prec);
        if let Ok(tail) = poly_tail_upper(m, 2, &x_abs) {
            if bf_le(&tail, prec.target_tol()) {
                return Ok(QReal::with_bound(
                    sum.value().clone(),
                    sum.bound().add(&tail, BOUND_PREC, UPB),
                ));
            }
        }
    }
}

/// `sum_m zeta_m[k, w] q^m / ([m][m+i])` with |zeta_m| <= m.
pub fn harmonic_bracket_sum(
    k: u32,
    w: &QReal,
    i: u32,
    q: &QParam,
    prec: &Precision,
) -> Result<QReal> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    if !bf_le(&w.value().abs(), &one) || !bf_le(w.bound(), &crate::numerics::pow2(-40)) {
        return Err(Error::Domain(String::from("inner weight must satisfy |w| <= 1")));
    }
    let q_i = QReal::exact(q.q().clone()).powi(i as u64, prec);
    let mut zeta = QReal::zero();
    let mut w_pow = QReal::one();
    let mut q_pow_m = QReal::one();
    let qq = QReal::exact(q.q().clone());
    let mut sum = QReal::zero();
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        q_pow_m = q_pow_m.mul(&qq, prec);
        let bracket = bracket_from_qpow(&q_pow_m, q, prec)?;
        let bracket_i = bracket_from_qpow(&q_pow_m.mul(&q_i, prec), q, prec)?;
        w_pow = w_pow.mul(w, prec);
        zeta = zeta.add(&w_pow.div(&bracket.powi(k as u64, prec), prec)?, prec);
        let term = zeta.mul(&q_pow_m, prec).div(&bracket.mul(&bracket_i, prec), prec)?;
        sum = sum.add(&term, prec);
        if let Ok(tail) = poly_tail_upper(m, 1, q.q()) {
            if bf_le(&tail, prec.target_tol()) {
                return Ok(QReal::with_bound(
                    sum.value().clone(),
                    sum.bound().add(&tail, BOUND_PREC, UPB),
                ));
            }
        }
    }
}

/// `sum_m q^(km) / ([m]^k [m+j])`, geometric with ratio q^k.
pub fn power_bracket_sum(k: u32, j: u32, q: &QParam, prec: &Precision) -> Result<QReal> {
    let q_j = QReal::exact(q.q().clone()).powi(j as u64, prec);
    let qk = QReal::exact(q.q().clone()).powi(k as u64, prec);
    let qk_up = qk.upper_abs();
    let mut qk_pow = QReal::one();
    let mut q_pow_m = QReal::one();
    let qq = QReal::exact(q.q().clone());
    let mut sum = QReal::zero();
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        q_pow_m = q_pow_m.mul(&qq, prec);
        qk_pow = qk_pow.mul(&qk, prec);
        let bracket = bracket_from_qpow(&q_pow_m, q, prec)?;
        let bracket_j = bracket_from_qpow(&q_pow_m.mul(&q_j, prec), q, prec)?;
        let term = qk_pow.div(&bracket.powi(k as u64, prec).mul(&bracket_j, prec), prec)?;
        sum = sum.add(&term, prec);
        let first = up1(&term.upper_abs().mul(&qk_up, BOUND_PREC, UPB));
        let tail = geometric_tail_upper(&first, &qk_up)?;
        if bf_le(&tail, prec.target_tol()) {
            return Ok(QReal::with_bound(
                sum.value().clone(),
                sum.bound().add(&tail, BOUND_PREC, UPB),
            ));
        }
    }
}

/// q-polylog taking an inexact (QReal) weight: evaluated at the central
/// value with the weight's own bound folded in through a derivative bound.
pub fn q_polylog_q(k: u32, x: &QReal, q: &QParam, prec: &Precision) -> Result<QReal> {
    let base = q_polylog(k, x.value(), q, prec)?;
    if x.bound().is_zero() {
        return Ok(base);
    }
    // |d/dx Li_k[x]| <= sum m |x|^(m-1) <= 1/(1-|x|)^2 for |x| < 1
    let one = BigFloat::from_i8(1, BOUND_PREC);
    let gap = crate::numerics::dn1(&one.sub(&x.upper_abs(), BOUND_PREC, astro_float::RoundingMode::Down));
    if !crate::numerics::bf_lt(&BigFloat::from_i8(0, BOUND_PREC), &gap) {
        return Err(Error::Domain(String::from("weight too close to 1")));
    }
    let deriv = up1(&one.div(&gap.mul(&gap, BOUND_PREC, astro_float::RoundingMode::Down), BOUND_PREC, UPB));
    let extra = up1(&deriv.mul(x.bound(), BOUND_PREC, UPB));
    Ok(QReal::with_bound(
        base.value().clone(),
        base.bound().add(&extra, BOUND_PREC, UPB),
    ))
}

/// Crude upper bound on the sensitivity of any of the registry's series to a
/// weight perturbation: covers `sum m^(depth+1) rho^(m-1)` with margin.
pub fn sensitivity_upper(depth: u32, rho_up: &BigFloat) -> Result<BigFloat> {
    let one = BigFloat::from_i8(1, BOUND_PREC);
    if !crate::numerics::bf_lt(rho_up, &one) {
        return Err(Error::TailBound(String::from("sensitivity bound needs rho < 1")));
    }
    let gap = crate::numerics::dn1(&one.sub(rho_up, BOUND_PREC, astro_float::RoundingMode::Down));
    let mut fact: u64 = 1;
    for i in 2..=(depth as u64 + 2) {
        fact *= i;
    }
    let mut denom = BigFloat::from_i8(1, BOUND_PREC);
    for _ in 0..(depth + 3) {
        denom = denom.mul(&gap, BOUND_PREC, astro_float::RoundingMode::Down);
    }
    Ok(up1(&BigFloat::from_u64(fact, BOUND_PREC).div(&denom, BOUND_PREC, UPB)))
}

/// Adds `weight.bound * sensitivity` to a series bound, accounting for the
/// series having been evaluated at the weight's central value.
pub fn fold_weight(result: QReal, weight: &QReal, depth: u32, rho_up: &BigFloat) -> Result<QReal> {
    if weight.bound().is_zero() {
        return Ok(result);
    }
    let s = sensitivity_upper(depth, rho_up)?;
    let extra = up1(&weight.bound().mul(&s, BOUND_PREC, UPB));
    Ok(QReal::with_bound(
        result.value().clone(),
        result.bound().add(&extra, BOUND_PREC, UPB),
    ))
}

/// Depth-1 nested sum with possibly inexact weights.
pub fn s_depth1(
    k1: u32,
    x1: &QReal,
    ko: u32,
    xo: &QReal,
    q: &QParam,
    prec: &Precision,
) -> Result<QReal> {
    let spec = crate::qseries::SeriesSpec::new(
        alloc::vec![k1],
        alloc::vec![x1.value().clone()],
        ko,
        xo.value().clone(),
        q.clone(),
    )?;
    let rho = xo.upper_abs();
    let mut out = crate::qseries::s_sum(&spec, prec)?;
    out = fold_weight(out, x1, 1, &rho)?;
    fold_weight(out, xo, 1, &rho)
}

/// Depth-2 nested sum with possibly inexact weights.
#[allow(clippy::too_many_arguments)]
pub fn s_depth2(
    k1: u32,
    x1: &QReal,
    k2: u32,
    x2: &QReal,
    ko: u32,
    xo: &QReal,
    q: &QParam,
    prec: &Precision,
) -> Result<QReal> {
    let spec = crate::qseries::SeriesSpec::new(
        alloc::vec![k1, k2],
        alloc::vec![x1.value().clone(), x2.value().clone()],
        ko,
        xo.value().clone(),
        q.clone(),
    )?;
    let rho = xo.upper_abs();
    let mut out = crate::qseries::s_sum(&spec, prec)?;
    out = fold_weight(out, x1, 2, &rho)?;
    out = fold_weight(out, x2, 2, &rho)?;
    fold_weight(out, xo, 2, &rho)
}

/// q-logarithm `ln[1-x]` at a possibly inexact weight.
pub fn lnq_w(x: &QReal, q: &QParam, prec: &Precision) -> Result<QReal> {
    Ok(q_polylog_q(1, x, q, prec)?.neg())
}

/// Shifted H-sum at a possibly inexact weight.
pub fn h_w(k: u32, x: &QReal, a: &BigFloat, q: &QParam, prec: &Precision) -> Result<QReal> {
    let spec = crate::qseries::HSpec::new(k, x.value().clone(), a.clone(), q.clone())?;
    let base = crate::qseries::h_function(&spec, prec)?;
    fold_weight(base, x, 1, &x.upper_abs())
}
