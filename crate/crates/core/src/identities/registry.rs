//! Construction of the identity catalog. Ids are stable tokens used by the
//! command line and the test suites; descriptions name each statement by
//! content. Default grids document the parameter sets every entry is
//! expected to pass with slack 10 at default precision.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use astro_float::BigFloat;

use super::classical_eval::{acc_signed, es, scaled};
use super::qeval;
use super::{
    binding, get_int, get_q, get_real, get_u32, Binding, EvalCtx, IdentityEntry, Mode, ParamKind,
    ParamSpec, ParamValue,
};
use crate::error::{Error, Result};
use crate::numerics::{bf_is_neg, bf_lt, q_pow, Precision, QParam, QReal, BOUND_PREC};
use crate::qseries::{q_harmonic, q_polylog, s_sum, SeriesSpec};

fn p_int(name: &'static str, domain: &'static str) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Int, domain }
}

fn p_real(name: &'static str, domain: &'static str) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Real, domain }
}

fn pi(v: i64) -> ParamValue {
    ParamValue::Int(v)
}

fn pr(v: f64) -> ParamValue {
    ParamValue::Real(BigFloat::from_f64(v, BOUND_PREC))
}

#[allow(clippy::too_many_arguments)]
fn entry<D, L, R>(
    id: &'static str,
    description: &'static str,
    mode: Mode,
    params: Vec<ParamSpec>,
    domain: D,
    lhs: L,
    rhs: R,
    default_grid: Vec<Binding>,
) -> IdentityEntry
where
    D: Fn(&Binding) -> Result<()> + Send + Sync + 'static,
    L: Fn(&Binding, &EvalCtx<'_>) -> Result<QReal> + Send + Sync + 'static,
    R: Fn(&Binding, &EvalCtx<'_>) -> Result<QReal> + Send + Sync + 'static,
{
    IdentityEntry {
        id,
        description,
        mode,
        params,
        domain: Box::new(domain),
        lhs: Box::new(lhs),
        rhs: Box::new(rhs),
        default_grid,
    }
}

fn oob(param: &str, constraint: &str) -> Error {
    Error::OutOfDomain { param: String::from(param), constraint: String::from(constraint) }
}

fn check_q(b: &Binding) -> Result<()> {
    let q = get_real(b, "q")?;
    let zero = BigFloat::from_i8(0, BOUND_PREC);
    let one = BigFloat::from_i8(1, BOUND_PREC);
    if bf_lt(&zero, &q) && bf_lt(&q, &one) {
        Ok(())
    } else {
        Err(oob("q", "0 < q < 1"))
    }
}

fn check_pos_int(b: &Binding, name: &str) -> Result<i64> {
    let v = get_int(b, name)?;
    if v >= 1 {
        Ok(v)
    } else {
        Err(oob(name, ">= 1"))
    }
}

fn check_abs_lt1(b: &Binding, name: &str) -> Result<BigFloat> {
    let v = get_real(b, name)?;
    if bf_lt(&v.abs(), &BigFloat::from_i8(1, BOUND_PREC)) {
        Ok(v)
    } else {
        Err(oob(name, "|value| < 1"))
    }
}

fn check_shift(b: &Binding, name: &str) -> Result<BigFloat> {
    let v = get_real(b, name)?;
    if v.is_int() && bf_is_neg(&v) {
        Err(oob(name, "not a negative integer"))
    } else {
        Ok(v)
    }
}

/// exp helper: q^e as a tracked value.
fn qe(q: &QParam, e: &BigFloat, prec: &Precision) -> Result<QReal> {
    q_pow(e, q, prec)
}

/// q^n for small nonnegative integers.
fn qn(q: &QParam, n: u32, prec: &Precision) -> QReal {
    QReal::exact(q.q().clone()).powi(n as u64, prec)
}

fn li_exact(k: u32, x: &BigFloat, q: &QParam, prec: &Precision) -> Result<QReal> {
    q_polylog(k, x, q, prec)
}

/// Builds the full identity catalog.
pub fn registry() -> Vec<IdentityEntry> {
    let mut entries = Vec::new();
    section1_examples(&mut entries);
    q_integral_family(&mut entries);
    q_series_lemmas(&mut entries);
    product_family(&mut entries);
    classical_family(&mut entries);
    entries
}

fn q_grid() -> Vec<f64> {
    vec![0.3, 0.7]
}

fn section1_examples(entries: &mut Vec<IdentityEntry>) {
    let grid: Vec<Binding> =
        [0.1, 0.3, 0.5, 0.7, 0.9].iter().map(|&q| binding(&[("q", pr(q))])).collect();
    entries.push(entry(
        "sec1-ex1",
        "linear nested q-sum of weight 3 as a sum of two q-trilogarithms",
        Mode::NumericQ,
        vec![p_real("q", "0 < q < 1")],
        check_q,
        |b, ctx| {
            let q = get_q(b)?;
            let spec = SeriesSpec::new(
                vec![1],
                vec![BigFloat::from_i8(1, BOUND_PREC)],
                2,
                q.q().clone(),
                q.clone(),
            )?;
            s_sum(&spec, &ctx.prec)
        },
        |b, ctx| {
            let q = get_q(b)?;
            let p = &ctx.prec;
            let li3_q = li_exact(3, q.q(), &q, p)?;
            let q2 = qn(&q, 2, p);
            let li3_q2 = qeval::q_polylog_q(3, &q2, &q, p)?;
            Ok(li3_q.add(&li3_q2, p))
        },
        grid.clone(),
    ));
    entries.push(entry(
        "sec1-ex2",
        "linear nested q-sum of weight 4 reduced to q-polylogarithms",
        Mode::NumericQ,
        vec![p_real("q", "0 < q < 1")],
        check_q,
        |b, ctx| {
            let q = get_q(b)?;
            let spec = SeriesSpec::new(
                vec![1],
                vec![BigFloat::from_i8(1, BOUND_PREC)],
                3,
                q.q().clone(),
                q.clone(),
            )?;
            s_sum(&spec, &ctx.prec)
        },
        |b, ctx| {
            let q = get_q(b)?;
            let p = &ctx.prec;
            let q2 = qn(&q, 2, p);
            let li4_q2 = qeval::q_polylog_q(4, &q2, &q, p)?;
            let li4_q = li_exact(4, q.q(), &q, p)?;
            let li2_q = li_exact(2, q.q(), &q, p)?;
            let half = QReal::exact(crate::numerics::pow2(-1));
            let three_half = QReal::from_u64(3, p).mul(&half, p);
            let mut out = three_half.mul(&li4_q2, p).add(&li4_q, p);
            out = out.sub(&half.mul(&li2_q.mul(&li2_q, p), p), p);
            Ok(out)
        },
        grid.clone(),
    ));
    entries.push(entry(
        "sec1-ex3",
        "quadratic nested q-sum of weight 4 reduced to q-polylogarithms",
        Mode::NumericQ,
        vec![p_real("q", "0 < q < 1")],
        check_q,
        |b, ctx| {
            let q = get_q(b)?;
            let one = BigFloat::from_i8(1, BOUND_PREC);
            let spec =
                SeriesSpec::new(vec![1, 1], vec![one.clone(), one], 2, q.q().clone(), q.clone())?;
            s_sum(&spec, &ctx.prec)
        },
        |b, ctx| {
            let q = get_q(b)?;
            let p = &ctx.prec;
            let q2 = qn(&q, 2, p);
            let li4_q2 = qeval::q_polylog_q(4, &q2, &q, p)?;
            let li4_q = li_exact(4, q.q(), &q, p)?;
            let li2_q = li_exact(2, q.q(), &q, p)?;
            let li3_q2 = qeval::q_polylog_q(3, &q2, &q, p)?;
            let li3_q = li_exact(3, q.q(), &q, p)?;
            let half = QReal::exact(crate::numerics::pow2(-1));
            let seven_half = QReal::from_u64(7, p).mul(&half, p);
            let mut out = seven_half.mul(&li4_q2, p);
            out = out.add(&QReal::from_u64(2, p).mul(&li4_q, p), p);
            out = out.sub(&half.mul(&li2_q.mul(&li2_q, p), p), p);
            let one_minus_q = QReal::exact(q.one_minus_q().clone());
            out = out.sub(&one_minus_q.mul(&li3_q2.add(&li3_q, p), p), p);
            Ok(out)
        },
        grid,
    ));
}

/// Shared domain predicate for the Jackson-integral family: shifts avoid
/// negative integers, |x| < 1, and negative x requires integer shifts.
fn hurwitz_domain(b: &Binding) -> Result<()> {
    check_q(b)?;
    let a = check_shift(b, "a")?;
    let bb = check_shift(b, "b")?;
    let ab = a.add(&bb, BOUND_PREC, astro_float::RoundingMode::ToEven);
    if ab.is_int() && bf_is_neg(&ab) {
        return Err(oob("a+b", "not a negative integer"));
    }
    if b.contains_key("x") {
        let x = check_abs_lt1(b, "x")?;
        if bf_is_neg(&x) && !(a.is_int() && bb.is_int()) {
            return Err(oob("x", "negative x requires integer shifts"));
        }
    }
    Ok(())
}

fn q_integral_family(entries: &mut Vec<IdentityEntry>) {
    // symmetric double-sum reflection with shifted H products
    let mut grid = Vec::new();
    for k in 1..=3i64 {
        for l in 1..=3i64 {
            for &a in &[0.0, 0.5, 0.25] {
                for &bb in &[0.0, 0.5, 0.25] {
                    for &x in &[-0.3, 0.3, 0.6] {
                        if x < 0.0 && (a != 0.0 || bb != 0.0) {
                            continue;
                        }
                        for &q in &q_grid() {
                            grid.push(binding(&[
                                ("k", pi(k)),
                                ("l", pi(l)),
                                ("a", pr(a)),
                                ("b", pr(bb)),
                                ("x", pr(x)),
                                ("q", pr(q)),
                            ]));
                        }
                    }
                }
            }
        }
    }
    entries.push(entry(
        "thm1.1",
        "reflection identity for shifted double q-sums against products of shifted H-sums",
        Mode::NumericQ,
        vec![
            p_int("k", ">= 1"),
            p_int("l", ">= 1"),
            p_real("a", "not a negative integer"),
            p_real("b", "not a negative integer"),
            p_real("x", "|x| < 1; x > 0 unless a, b are integers"),
            p_real("q", "0 < q < 1"),
        ],
        |b| {
            check_pos_int(b, "k")?;
            check_pos_int(b, "l")?;
            hurwitz_domain(b)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let a = get_real(b, "a")?;
            let bb = get_real(b, "b")?;
            let x = get_real(b, "x")?;
            let ab = a.add(&bb, p.bits(), astro_float::RoundingMode::ToEven);
            let wk = qn(&q, k, p);
            let wl = qn(&q, l, p);
            let t1 = qeval::shifted_nested_sum(&wk, &bb, k + l, &x, &ab, &q, p)?;
            let t2 = qeval::shifted_nested_sum(&wl, &a, k + l, &x, &ab, &q, p)?;
            let s1 = if k % 2 == 1 { t1 } else { t1.neg() };
            let s2 = if l % 2 == 1 { t2 } else { t2.neg() };
            Ok(s1.sub(&s2, p))
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let a = get_real(b, "a")?;
            let bb = get_real(b, "b")?;
            let x = get_real(b, "x")?;
            let ab = a.add(&bb, p.bits(), astro_float::RoundingMode::ToEven);
            let xq = QReal::exact(x.clone());
            let mut total = QReal::zero();
            for j in 1..l {
                let w = qn(&q, j - 1, p).mul(&xq, p);
                let t = qeval::h_w(k + j, &w, &a, &q, p)?.mul(&qeval::h_w(l + 1 - j, &xq, &bb, &q, p)?, p);
                total = if j % 2 == 1 { total.add(&t, p) } else { total.sub(&t, p) };
            }
            for j in 1..k {
                let w = qn(&q, j - 1, p).mul(&xq, p);
                let t = qeval::h_w(l + j, &w, &bb, &q, p)?.mul(&qeval::h_w(k + 1 - j, &xq, &a, &q, p)?, p);
                total = if j % 2 == 1 { total.sub(&t, p) } else { total.add(&t, p) };
            }
            let h1xb = qeval::h_w(1, &xq, &bb, &q, p)?;
            let h1xa = qeval::h_w(1, &xq, &a, &q, p)?;
            let h1xab = qeval::h_w(1, &xq, &ab, &q, p)?;
            let wl1x = qn(&q, l - 1, p).mul(&xq, p);
            let wk1x = qn(&q, k - 1, p).mul(&xq, p);
            let ql = qn(&q, l, p);
            let qk = qn(&q, k, p);
            let block_l = h1xb
                .mul(&qeval::h_w(k + l, &wl1x, &a, &q, p)?, p)
                .sub(&h1xab.mul(&qeval::h_w(k + l, &ql, &a, &q, p)?, p), p);
            total = if l % 2 == 1 { total.add(&block_l, p) } else { total.sub(&block_l, p) };
            let block_k = h1xa
                .mul(&qeval::h_w(k + l, &wk1x, &bb, &q, p)?, p)
                .sub(&h1xab.mul(&qeval::h_w(k + l, &qk, &bb, &q, p)?, p), p);
            total = if k % 2 == 1 { total.sub(&block_k, p) } else { total.add(&block_k, p) };
            Ok(total)
        },
        grid,
    ));

    // the x = q, k = l = 1 specialization written through two-bracket sums
    let mut grid = Vec::new();
    for (a, bb) in [(0.0, 0.5), (0.25, 0.5), (0.0, 0.25), (0.5, 0.25)] {
        for &q in &q_grid() {
            grid.push(binding(&[("a", pr(a)), ("b", pr(bb)), ("q", pr(q))]));
        }
    }
    entries.push(entry(
        "thm1.1-special",
        "weight-3 specialization of the reflection identity at x = q",
        Mode::NumericQ,
        vec![
            p_real("a", "not a negative integer"),
            p_real("b", "not a negative integer"),
            p_real("q", "0 < q < 1"),
        ],
        hurwitz_domain,
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let a = get_real(b, "a")?;
            let bb = get_real(b, "b")?;
            let ab = a.add(&bb, p.bits(), astro_float::RoundingMode::ToEven);
            let w = QReal::exact(q.q().clone());
            let t1 = qeval::shifted_nested_sum(&w, &bb, 2, q.q(), &ab, &q, p)?;
            let t2 = qeval::shifted_nested_sum(&w, &a, 2, q.q(), &ab, &q, p)?;
            Ok(t1.sub(&t2, p))
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let a = get_real(b, "a")?;
            let bb = get_real(b, "b")?;
            let ab = a.add(&bb, p.bits(), astro_float::RoundingMode::ToEven);
            let w = QReal::exact(q.q().clone());
            let xq = QReal::exact(q.q().clone());
            let br_a = crate::numerics::q_bracket(&a, &q, p)?;
            let br_b = crate::numerics::q_bracket(&bb, &q, p)?;
            let h2a = qeval::h_w(2, &xq, &a, &q, p)?;
            let h2b = qeval::h_w(2, &xq, &bb, &q, p)?;
            let s_b = qeval::shifted_two_bracket_sum(&w, &bb, &ab, &q, p)?;
            let s_a = qeval::shifted_two_bracket_sum(&w, &a, &ab, &q, p)?;
            let left = br_a.mul(&h2a, p).mul(&s_b, p);
            let right = br_b.mul(&h2b, p).mul(&s_a, p);
            Ok(left.sub(&right, p))
        },
        grid,
    ));

    // closed form of the Jackson integral of H_k[t,a] t^(m+b-1)
    let mut grid = Vec::new();
    for m in 1..=2i64 {
        for k in 1..=3i64 {
            for (a, bb) in [(0.0, 0.0), (0.5, 0.25), (0.25, 0.5)] {
                for &x in &[-0.3, 0.3, 0.6] {
                    if x < 0.0 && (a != 0.0 || bb != 0.0) {
                        continue;
                    }
                    for &q in &q_grid() {
                        grid.push(binding(&[
                            ("m", pi(m)),
                            ("k", pi(k)),
                            ("a", pr(a)),
                            ("b", pr(bb)),
                            ("x", pr(x)),
                            ("q", pr(q)),
                        ]));
                    }
                }
            }
        }
    }
    entries.push(entry(
        "lemma2.1",
        "Jackson integral of a shifted H-sum against a shifted monomial, in closed form",
        Mode::NumericQ,
        vec![
            p_int("m", ">= 1"),
            p_int("k", ">= 1"),
            p_real("a", "not a negative integer"),
            p_real("b", "not a negative integer"),
            p_real("x", "|x| < 1; x > 0 unless a, b are integers"),
            p_real("q", "0 < q < 1"),
        ],
        |b| {
            check_pos_int(b, "m")?;
            check_pos_int(b, "k")?;
            hurwitz_domain(b)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (m, k) = (get_u32(b, "m")?, get_u32(b, "k")?);
            let a = get_real(b, "a")?;
            let bb = get_real(b, "b")?;
            let x = get_real(b, "x")?;
            if x.is_zero() {
                return Ok(QReal::zero());
            }
            let exp = BigFloat::from_u64(m as u64 - 1, p.bits())
                .add(&bb, p.bits(), astro_float::RoundingMode::ToEven);
            let qc = q.clone();
            let f = crate::jackson::QFunction::new(
                BigFloat::from_i8(-1, BOUND_PREC),
                BigFloat::from_i8(1, BOUND_PREC),
                move |t, pr| {
                    let h = crate::qseries::h_function(
                        &crate::qseries::HSpec::new(k, t.clone(), a.clone(), qc.clone())?,
                        pr,
                    )?;
                    Ok(h.mul(&crate::jackson::real_power(t, &exp, pr)?, pr))
                },
            );
            crate::jackson::q_integral(&f, &BigFloat::from_i8(0, BOUND_PREC), &x, &q, p)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (m, k) = (get_u32(b, "m")?, get_u32(b, "k")?);
            let a = get_real(b, "a")?;
            let bb = get_real(b, "b")?;
            let x = get_real(b, "x")?;
            crate::jackson::lemma21_rhs(m, k, &a, &bb, &x, &q, p)
        },
        grid,
    ));
}

/// Sign helper: true when (-1)^(j-1) is +1.
fn plus(j: u32) -> bool {
    j % 2 == 1
}

fn add_signed(acc: QReal, t: QReal, positive: bool, p: &Precision) -> QReal {
    if positive {
        acc.add(&t, p)
    } else {
        acc.sub(&t, p)
    }
}

/// Common RHS part of the x -> 1 reflection displays: the j >= 2 sums and
/// the two q-logarithm blocks.
fn x1_common_rhs(
    k: u32,
    l: u32,
    qh: &QReal,
    qs: &QReal,
    q: &QParam,
    p: &Precision,
) -> Result<QReal> {
    let mut total = QReal::zero();
    for j in 2..l {
        let t = qeval::q_polylog_q(l + 1 - j, qs, q, p)?
            .mul(&qeval::s_depth1(k, qh, j, &qn(q, j - 1, p), q, p)?, p);
        total = add_signed(total, t, plus(j), p);
    }
    for j in 2..k {
        let t = qeval::q_polylog_q(k + 1 - j, qh, q, p)?
            .mul(&qeval::s_depth1(l, qs, j, &qn(q, j - 1, p), q, p)?, p);
        total = add_signed(total, t, !plus(j), p);
    }
    Ok(total)
}

fn q_series_lemmas(entries: &mut Vec<IdentityEntry>) {
    // reflection identity for depth-2 nested sums with power weights
    let mut grid = Vec::new();
    for k in 1..=3i64 {
        for l in 1..=3i64 {
            for &s in &[0.0, 0.5] {
                if s >= l as f64 {
                    continue;
                }
                for &h in &[0.0, 0.5] {
                    if h >= k as f64 {
                        continue;
                    }
                    for &x in &[-0.3, 0.3, 0.6] {
                        for &q in &q_grid() {
                            grid.push(binding(&[
                                ("k", pi(k)),
                                ("l", pi(l)),
                                ("s", pr(s)),
                                ("h", pr(h)),
                                ("x", pr(x)),
                                ("q", pr(q)),
                            ]));
                        }
                    }
                }
            }
        }
    }
    entries.push(entry(
        "thm1.2",
        "reflection identity for depth-2 nested q-sums with q-power weights",
        Mode::NumericQ,
        vec![
            p_int("k", ">= 1, k > h"),
            p_int("l", ">= 1, l > s"),
            p_real("s", "0 <= s < l"),
            p_real("h", "0 <= h < k"),
            p_real("x", "|x| < 1"),
            p_real("q", "0 < q < 1"),
        ],
        |b| {
            let k = check_pos_int(b, "k")?;
            let l = check_pos_int(b, "l")?;
            check_q(b)?;
            check_abs_lt1(b, "x")?;
            let s = get_real(b, "s")?;
            let h = get_real(b, "h")?;
            let zero = BigFloat::from_i8(0, BOUND_PREC);
            if bf_is_neg(&s) || !bf_lt(&s, &BigFloat::from_i64(l, BOUND_PREC)) {
                return Err(oob("s", "0 <= s < l"));
            }
            if bf_is_neg(&h) || !bf_lt(&h, &BigFloat::from_i64(k, BOUND_PREC)) {
                return Err(oob("h", "0 <= h < k"));
            }
            let _ = zero;
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let (s, h) = (get_real(b, "s")?, get_real(b, "h")?);
            let x = QReal::exact(get_real(b, "x")?);
            let qs = qe(&q, &s, p)?;
            let qh = qe(&q, &h, p)?;
            let k_minus_h =
                BigFloat::from_u64(k as u64, p.bits()).sub(&h, p.bits(), astro_float::RoundingMode::ToEven);
            let l_minus_s =
                BigFloat::from_u64(l as u64, p.bits()).sub(&s, p.bits(), astro_float::RoundingMode::ToEven);
            let w_k = qe(&q, &k_minus_h, p)?;
            let w_l = qe(&q, &l_minus_s, p)?;
            let t1 = qeval::s_depth2(l, &qs, 1, &qh.mul(&x, p), k, &w_k, &q, p)?;
            let t2 = qeval::s_depth2(k, &qh, 1, &qs.mul(&x, p), l, &w_l, &q, p)?;
            Ok(add_signed(
                if plus(k) { t1 } else { t1.neg() },
                t2,
                !plus(l),
                p,
            ))
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let (s, h) = (get_real(b, "s")?, get_real(b, "h")?);
            let x = QReal::exact(get_real(b, "x")?);
            let qs = qe(&q, &s, p)?;
            let qh = qe(&q, &h, p)?;
            let qs_x = qs.mul(&x, p);
            let qh_x = qh.mul(&x, p);
            let k_minus_h =
                BigFloat::from_u64(k as u64, p.bits()).sub(&h, p.bits(), astro_float::RoundingMode::ToEven);
            let l_minus_s =
                BigFloat::from_u64(l as u64, p.bits()).sub(&s, p.bits(), astro_float::RoundingMode::ToEven);
            let w_k = qe(&q, &k_minus_h, p)?;
            let w_l = qe(&q, &l_minus_s, p)?;
            let mut total = QReal::zero();
            for j in 1..l {
                let t = qeval::q_polylog_q(l + 1 - j, &qs_x, &q, p)?.mul(
                    &qeval::s_depth1(k, &qh, j, &qn(&q, j - 1, p).mul(&x, p), &q, p)?,
                    p,
                );
                total = add_signed(total, t, plus(j), p);
            }
            for j in 1..k {
                let t = qeval::q_polylog_q(k + 1 - j, &qh_x, &q, p)?.mul(
                    &qeval::s_depth1(l, &qs, j, &qn(&q, j - 1, p).mul(&x, p), &q, p)?,
                    p,
                );
                total = add_signed(total, t, !plus(j), p);
            }
            let block_l = qeval::s_depth1(k, &qh, l, &w_l, &q, p)?.sub(
                &qeval::s_depth1(k, &qh, l, &qn(&q, l - 1, p).mul(&x, p), &q, p)?,
                p,
            );
            let t = qeval::lnq_w(&qs_x, &q, p)?.mul(&block_l, p);
            total = add_signed(total, t, plus(l), p);
            let block_k = qeval::s_depth1(l, &qs, k, &w_k, &q, p)?.sub(
                &qeval::s_depth1(l, &qs, k, &qn(&q, k - 1, p).mul(&x, p), &q, p)?,
                p,
            );
            let t = qeval::lnq_w(&qh_x, &q, p)?.mul(&block_k, p);
            total = add_signed(total, t, !plus(k), p);
            Ok(total)
        },
        grid,
    ));

    // the x -> 1 limit, including the boundary cross term the termwise
    // limit misses (see the q-Euler reflection analysis in the tests)
    let x1_domain = |b: &Binding| -> Result<()> {
        let k = check_pos_int(b, "k")?;
        let l = check_pos_int(b, "l")?;
        if k < 2 {
            return Err(oob("k", ">= 2 (the display needs q^(k-1) < 1)"));
        }
        if l < 2 {
            return Err(oob("l", ">= 2 (the display needs q^(l-1) < 1)"));
        }
        check_q(b)?;
        let s = get_real(b, "s")?;
        let h = get_real(b, "h")?;
        let zero = BigFloat::from_i8(0, BOUND_PREC);
        if !bf_lt(&zero, &s) || !bf_lt(&s, &BigFloat::from_i64(l, BOUND_PREC)) {
            return Err(oob("s", "0 < s < l"));
        }
        if !bf_lt(&zero, &h) || !bf_lt(&h, &BigFloat::from_i64(k, BOUND_PREC)) {
            return Err(oob("h", "0 < h < k"));
        }
        Ok(())
    };
    let x1_lhs = |b: &Binding, ctx: &EvalCtx<'_>| -> Result<QReal> {
        let p = &ctx.prec;
        let q = get_q(b)?;
        let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
        let (s, h) = (get_real(b, "s")?, get_real(b, "h")?);
        let qs = qe(&q, &s, p)?;
        let qh = qe(&q, &h, p)?;
        let k_minus_h =
            BigFloat::from_u64(k as u64, p.bits()).sub(&h, p.bits(), astro_float::RoundingMode::ToEven);
        let l_minus_s =
            BigFloat::from_u64(l as u64, p.bits()).sub(&s, p.bits(), astro_float::RoundingMode::ToEven);
        let w_k = qe(&q, &k_minus_h, p)?;
        let w_l = qe(&q, &l_minus_s, p)?;
        let t1 = qeval::s_depth2(l, &qs, 1, &qh, k, &w_k, &q, p)?;
        let t2 = qeval::s_depth2(k, &qh, 1, &qs, l, &w_l, &q, p)?;
        Ok(add_signed(if plus(k) { t1 } else { t1.neg() }, t2, !plus(l), p))
    };
    entries.push(entry(
        "thm1.2-x1",
        "x -> 1 limit of the depth-2 reflection identity, with the boundary cross term",
        Mode::NumericQ,
        vec![
            p_int("k", ">= 2"),
            p_int("l", ">= 2"),
            p_real("s", "0 < s < l"),
            p_real("h", "0 < h < k"),
            p_real("q", "0 < q < 1"),
        ],
        x1_domain,
        x1_lhs,
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let (s, h) = (get_real(b, "s")?, get_real(b, "h")?);
            let qs = qe(&q, &s, p)?;
            let qh = qe(&q, &h, p)?;
            let k_minus_h =
                BigFloat::from_u64(k as u64, p.bits()).sub(&h, p.bits(), astro_float::RoundingMode::ToEven);
            let l_minus_s =
                BigFloat::from_u64(l as u64, p.bits()).sub(&s, p.bits(), astro_float::RoundingMode::ToEven);
            let w_k = qe(&q, &k_minus_h, p)?;
            let w_l = qe(&q, &l_minus_s, p)?;
            let mut total = x1_common_rhs(k, l, &qh, &qs, &q, p)?;
            let block_l = qeval::s_depth1(k, &qh, l, &w_l, &q, p)?
                .sub(&qeval::s_depth1(k, &qh, l, &qn(&q, l - 1, p), &q, p)?, p);
            total = add_signed(total, qeval::lnq_w(&qs, &q, p)?.mul(&block_l, p), plus(l), p);
            let block_k = qeval::s_depth1(l, &qs, k, &w_k, &q, p)?
                .sub(&qeval::s_depth1(l, &qs, k, &qn(&q, k - 1, p), &q, p)?, p);
            total = add_signed(total, qeval::lnq_w(&qh, &q, p)?.mul(&block_k, p), !plus(k), p);
            total = total.add(&qeval::cross_difference_sum(k, &qh, l, &qs, &q, p)?, p);
            total = total.add(&abel_cross_term(k, &qh, l, &qs, &q, p)?, p);
            Ok(total)
        },
        x1_grid(),
    ));

    // corollary form: the cross-difference sum replaced through the product
    // identity at unit outer weight
    entries.push(entry(
        "cor-mul-li-zeta",
        "x -> 1 reflection identity with the tail sum expressed through unit-weight nested sums",
        Mode::NumericQ,
        vec![
            p_int("k", "> max(h, 1)"),
            p_int("l", "> max(s, 1)"),
            p_real("s", "0 < s < l"),
            p_real("h", "0 < h < k"),
            p_real("q", "0 < q < 1"),
        ],
        x1_domain,
        x1_lhs,
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let (s, h) = (get_real(b, "s")?, get_real(b, "h")?);
            let qs = qe(&q, &s, p)?;
            let qh = qe(&q, &h, p)?;
            let k_minus_h =
                BigFloat::from_u64(k as u64, p.bits()).sub(&h, p.bits(), astro_float::RoundingMode::ToEven);
            let l_minus_s =
                BigFloat::from_u64(l as u64, p.bits()).sub(&s, p.bits(), astro_float::RoundingMode::ToEven);
            let w_k = qe(&q, &k_minus_h, p)?;
            let w_l = qe(&q, &l_minus_s, p)?;
            let mut total = x1_common_rhs(k, l, &qh, &qs, &q, p)?;
            let block_l = qeval::s_depth1(k, &qh, l, &w_l, &q, p)?
                .sub(&qeval::s_depth1(k, &qh, l, &qn(&q, l - 1, p), &q, p)?, p);
            total = add_signed(total, qeval::lnq_w(&qs, &q, p)?.mul(&block_l, p), plus(l), p);
            let block_k = qeval::s_depth1(l, &qs, k, &w_k, &q, p)?
                .sub(&qeval::s_depth1(l, &qs, k, &qn(&q, k - 1, p), &q, p)?, p);
            total = add_signed(total, qeval::lnq_w(&qh, &q, p)?.mul(&block_k, p), !plus(k), p);
            let li_k = qeval::q_polylog_q(k, &qh, &q, p)?;
            let li_l = qeval::q_polylog_q(l, &qs, &q, p)?;
            let one = QReal::one();
            total = total.add(&li_k.mul(&qeval::s_depth1(1, &one, l, &qs, &q, p)?, p), p);
            total = total.sub(&li_l.mul(&qeval::s_depth1(1, &one, k, &qh, &q, p)?, p), p);
            total = total.add(&li_l.mul(&qeval::q_polylog_q(k + 1, &qh, &q, p)?, p), p);
            total = total.sub(&li_k.mul(&qeval::q_polylog_q(l + 1, &qs, &q, p)?, p), p);
            total = total.add(&abel_cross_term(k, &qh, l, &qs, &q, p)?, p);
            Ok(total)
        },
        cor_mlz_grid(),
    ));

    // finite-weight three-parameter cross identity
    let mut grid = Vec::new();
    for k in 1..=3i64 {
        for l in 1..=3i64 {
            for (x, y, z) in [(0.5, -0.3, 0.6), (0.3, 0.6, -0.5), (0.6, 0.6, 0.6)] {
                for &q in &q_grid() {
                    grid.push(binding(&[
                        ("k", pi(k)),
                        ("l", pi(l)),
                        ("x", pr(x)),
                        ("y", pr(y)),
                        ("z", pr(z)),
                        ("q", pr(q)),
                    ]));
                }
            }
        }
    }
    entries.push(entry(
        "thm-mul-li-zeta",
        "weighted cross-difference sum of partial q-polylogarithms in closed form",
        Mode::NumericQ,
        vec![
            p_int("k", ">= 1"),
            p_int("l", ">= 1"),
            p_real("x", "|x| < 1"),
            p_real("y", "|y| < 1"),
            p_real("z", "|z| < 1"),
            p_real("q", "0 < q < 1"),
        ],
        |b| {
            check_pos_int(b, "k")?;
            check_pos_int(b, "l")?;
            check_q(b)?;
            for n in ["x", "y", "z"] {
                check_abs_lt1(b, n)?;
            }
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let (x, y, z) = (get_real(b, "x")?, get_real(b, "y")?, get_real(b, "z")?);
            qeval::weighted_cross_sum(k, &x, l, &y, &z, &q, p)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let (x, y, z) = (
                QReal::exact(get_real(b, "x")?),
                QReal::exact(get_real(b, "y")?),
                QReal::exact(get_real(b, "z")?),
            );
            let li_k = qeval::q_polylog_q(k, &x, &q, p)?;
            let li_l = qeval::q_polylog_q(l, &y, &q, p)?;
            let mut total = li_l.mul(&qeval::s_depth1(1, &z, k, &x, &q, p)?, p);
            total = total.sub(&li_k.mul(&qeval::s_depth1(1, &z, l, &y, &q, p)?, p), p);
            total = total.add(&li_k.mul(&qeval::q_polylog_q(l + 1, &z.mul(&y, p), &q, p)?, p), p);
            total = total.sub(&li_l.mul(&qeval::q_polylog_q(k + 1, &z.mul(&x, p), &q, p)?, p), p);
            Ok(total)
        },
        grid,
    ));

    // partial-fraction style sums with q-harmonic closures
    let mut grid = Vec::new();
    for k in 1..=3i64 {
        for i in [1i64, 2, 3, 5] {
            for &q in &q_grid() {
                grid.push(binding(&[("k", pi(k)), ("i", pi(i)), ("q", pr(q))]));
            }
        }
    }
    entries.push(entry(
        "eq-sum-zeta",
        "bracket-shifted partial-sum series reduced to q-polylogarithms and q-harmonic numbers",
        Mode::NumericQ,
        vec![p_int("k", ">= 1"), p_int("i", ">= 1"), p_real("q", "0 < q < 1")],
        |b| {
            check_pos_int(b, "k")?;
            check_pos_int(b, "i")?;
            check_q(b)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, i) = (get_u32(b, "k")?, get_u32(b, "i")?);
            qeval::harmonic_bracket_sum(k, &qn(&q, k - 1, p), i, &q, p)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, i) = (get_u32(b, "k")?, get_u32(b, "i")?);
            let mut total = qeval::q_polylog_q(k + 1, &qn(&q, k, p), &q, p)?;
            // (-1)^(k-1) sum_{j=1}^{i-1} [H_j] q^j / [j]^k
            let mut mid = QReal::zero();
            for j in 1..i {
                let hj = q_harmonic(j as u64, 1, &q, p)?;
                let br = crate::numerics::q_bracket_u64(j as u64, &q, p)?;
                let t = hj.mul(&qn(&q, j, p), p).div(&br.powi(k as u64, p), p)?;
                mid = mid.add(&t, p);
            }
            total = add_signed(total, mid, plus(k), p);
            for j in 1..k {
                let t = qeval::q_polylog_q(k + 1 - j, &qn(&q, k - j, p), &q, p)?
                    .mul(&q_harmonic(i as u64 - 1, j, &q, p)?, p);
                total = add_signed(total, t, plus(j), p);
            }
            total.div(&crate::numerics::q_bracket_u64(i as u64, &q, p)?, p)
        },
        grid,
    ));

    let mut grid = Vec::new();
    for k in 1..=3i64 {
        for j in [1i64, 2, 3, 5] {
            for &q in &q_grid() {
                grid.push(binding(&[("k", pi(k)), ("j", pi(j)), ("q", pr(q))]));
            }
        }
    }
    entries.push(entry(
        "eq-double-sum",
        "geometric bracket series in partial fractions of q-polylogarithms",
        Mode::NumericQ,
        vec![p_int("k", ">= 1"), p_int("j", ">= 1"), p_real("q", "0 < q < 1")],
        |b| {
            check_pos_int(b, "k")?;
            check_pos_int(b, "j")?;
            check_q(b)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, j) = (get_u32(b, "k")?, get_u32(b, "j")?);
            qeval::power_bracket_sum(k, j, &q, p)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, j) = (get_u32(b, "k")?, get_u32(b, "j")?);
            let br_j = crate::numerics::q_bracket_u64(j as u64, &q, p)?;
            let mut total = QReal::zero();
            let mut inv_br = QReal::one();
            for pp in 1..k {
                inv_br = inv_br.div(&br_j, p)?;
                let t = inv_br.mul(&qeval::q_polylog_q(k - pp + 1, &qn(&q, k - pp, p), &q, p)?, p);
                total = add_signed(total, t, plus(pp), p);
            }
            let hj = q_harmonic(j as u64, 1, &q, p)?;
            let t = hj.div(&br_j.powi(k as u64, p), p)?;
            Ok(add_signed(total, t, plus(k), p))
        },
        grid,
    ));
}

fn x1_grid() -> Vec<Binding> {
    let mut grid = Vec::new();
    for k in 2..=3i64 {
        for l in 2..=3i64 {
            for &s in &[0.5, 1.5] {
                for &h in &[0.5, 1.5] {
                    for &q in &q_grid() {
                        grid.push(binding(&[
                            ("k", pi(k)),
                            ("l", pi(l)),
                            ("s", pr(s)),
                            ("h", pr(h)),
                            ("q", pr(q)),
                        ]));
                    }
                }
            }
        }
    }
    grid
}

fn cor_mlz_grid() -> Vec<Binding> {
    let mut grid = Vec::new();
    for k in 2..=3i64 {
        for l in 2..=3i64 {
            for (s, h) in [(0.5, 0.5), (1.5, 1.5), (0.5, 1.5)] {
                for &q in &q_grid() {
                    grid.push(binding(&[
                        ("k", pi(k)),
                        ("l", pi(l)),
                        ("s", pr(s)),
                        ("h", pr(h)),
                        ("q", pr(q)),
                    ]));
                }
            }
        }
    }
    grid
}

/// The boundary cross term of the x -> 1 limit:
/// `(1-q) ( Li_l[q^s] sum m q^(hm)/[m]^k - Li_k[q^h] sum m q^(sm)/[m]^l )`.
fn abel_cross_term(
    k: u32,
    qh: &QReal,
    l: u32,
    qs: &QReal,
    q: &QParam,
    p: &Precision,
) -> Result<QReal> {
    let li_l = qeval::q_polylog_q(l, qs, q, p)?;
    let li_k = qeval::q_polylog_q(k, qh, q, p)?;
    let wk = qeval::m_weighted_polylog(k, qh, q, p)?;
    let wl = qeval::m_weighted_polylog(l, qs, q, p)?;
    let inner = li_l.mul(&wk, p).sub(&li_k.mul(&wl, p), p);
    Ok(QReal::exact(q.one_minus_q().clone()).mul(&inner, p))
}

fn product_family(entries: &mut Vec<IdentityEntry>) {
    // symmetric depth-1 product decomposition
    let mut grid = Vec::new();
    for k1 in 1..=3i64 {
        for k2 in 1..=3i64 {
            for &x in &[-0.3, 0.3, 0.6] {
                for &y in &[-0.3, 0.3, 0.6] {
                    for &q in &q_grid() {
                        grid.push(binding(&[
                            ("k1", pi(k1)),
                            ("k2", pi(k2)),
                            ("x", pr(x)),
                            ("y", pr(y)),
                            ("q", pr(q)),
                        ]));
                    }
                }
            }
        }
    }
    entries.push(entry(
        "eq-li-li-2",
        "product of two q-polylogarithms as a symmetric pair of depth-1 nested sums",
        Mode::NumericQ,
        vec![
            p_int("k1", ">= 1"),
            p_int("k2", ">= 1"),
            p_real("x", "|x| < 1"),
            p_real("y", "|y| < 1"),
            p_real("q", "0 < q < 1"),
        ],
        |b| {
            check_pos_int(b, "k1")?;
            check_pos_int(b, "k2")?;
            check_q(b)?;
            check_abs_lt1(b, "x")?;
            check_abs_lt1(b, "y")?;
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k1, k2) = (get_u32(b, "k1")?, get_u32(b, "k2")?);
            let x = QReal::exact(get_real(b, "x")?);
            let y = QReal::exact(get_real(b, "y")?);
            let t1 = qeval::s_depth1(k1, &x, k2, &y, &q, p)?;
            let t2 = qeval::s_depth1(k2, &y, k1, &x, &q, p)?;
            Ok(t1.add(&t2, p))
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k1, k2) = (get_u32(b, "k1")?, get_u32(b, "k2")?);
            let x = QReal::exact(get_real(b, "x")?);
            let y = QReal::exact(get_real(b, "y")?);
            let prod = qeval::q_polylog_q(k1, &x, &q, p)?
                .mul(&qeval::q_polylog_q(k2, &y, &q, p)?, p);
            Ok(prod.add(&qeval::q_polylog_q(k1 + k2, &x.mul(&y, p), &q, p)?, p))
        },
        grid,
    ));

    // triple product decomposition
    let mut grid = Vec::new();
    for k1 in 1..=3i64 {
        for k2 in 1..=3i64 {
            for k3 in 1..=3i64 {
                for (x, y, z) in [(-0.3, 0.6, 0.3), (0.6, 0.6, 0.6), (0.3, -0.3, 0.6)] {
                    for &q in &q_grid() {
                        grid.push(binding(&[
                            ("k1", pi(k1)),
                            ("k2", pi(k2)),
                            ("k3", pi(k3)),
                            ("x", pr(x)),
                            ("y", pr(y)),
                            ("z", pr(z)),
                            ("q", pr(q)),
                        ]));
                    }
                }
            }
        }
    }
    entries.push(entry(
        "eq-li-li-3",
        "triple product of q-polylogarithms through depth-2 and depth-1 nested sums",
        Mode::NumericQ,
        vec![
            p_int("k1", ">= 1"),
            p_int("k2", ">= 1"),
            p_int("k3", ">= 1"),
            p_real("x", "|x| < 1"),
            p_real("y", "|y| < 1"),
            p_real("z", "|z| < 1"),
            p_real("q", "0 < q < 1"),
        ],
        |b| {
            for n in ["k1", "k2", "k3"] {
                check_pos_int(b, n)?;
            }
            check_q(b)?;
            for n in ["x", "y", "z"] {
                check_abs_lt1(b, n)?;
            }
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k1, k2, k3) = (get_u32(b, "k1")?, get_u32(b, "k2")?, get_u32(b, "k3")?);
            let x = QReal::exact(get_real(b, "x")?);
            let y = QReal::exact(get_real(b, "y")?);
            let z = QReal::exact(get_real(b, "z")?);
            let mut total = qeval::s_depth2(k1, &x, k2, &y, k3, &z, &q, p)?;
            total = total.add(&qeval::s_depth2(k1, &x, k3, &z, k2, &y, &q, p)?, p);
            total = total.add(&qeval::s_depth2(k2, &y, k3, &z, k1, &x, &q, p)?, p);
            Ok(total)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k1, k2, k3) = (get_u32(b, "k1")?, get_u32(b, "k2")?, get_u32(b, "k3")?);
            let x = QReal::exact(get_real(b, "x")?);
            let y = QReal::exact(get_real(b, "y")?);
            let z = QReal::exact(get_real(b, "z")?);
            let mut total = qeval::s_depth1(k1, &x, k2 + k3, &y.mul(&z, p), &q, p)?;
            total = total.add(&qeval::s_depth1(k2, &y, k1 + k3, &x.mul(&z, p), &q, p)?, p);
            total = total.add(&qeval::s_depth1(k3, &z, k1 + k2, &x.mul(&y, p), &q, p)?, p);
            let lhs_prod = qeval::q_polylog_q(k1, &x, &q, p)?
                .mul(&qeval::q_polylog_q(k2, &y, &q, p)?, p)
                .mul(&qeval::q_polylog_q(k3, &z, &q, p)?, p);
            total = total.add(&lhs_prod, p);
            let xyz = x.mul(&y, p).mul(&z, p);
            total = total.sub(&qeval::q_polylog_q(k1 + k2 + k3, &xyz, &q, p)?, p);
            Ok(total)
        },
        grid,
    ));

    // triply nested transfer identity
    let mut grid = Vec::new();
    for k1 in 1..=3i64 {
        for k2 in 1..=3i64 {
            for (x, y, z) in [(0.5, 0.3, 0.6), (-0.3, 0.6, 0.5), (0.6, -0.5, 0.3)] {
                for &q in &q_grid() {
                    grid.push(binding(&[
                        ("k1", pi(k1)),
                        ("k2", pi(k2)),
                        ("x", pr(x)),
                        ("y", pr(y)),
                        ("z", pr(z)),
                        ("q", pr(q)),
                    ]));
                }
            }
        }
    }
    entries.push(entry(
        "eq-li-s",
        "transfer identity between a triply nested sum and unit-depth nested sums",
        Mode::NumericQ,
        vec![
            p_int("k1", ">= 1"),
            p_int("k2", ">= 1"),
            p_real("x", "|x| < 1"),
            p_real("y", "|y| < 1"),
            p_real("z", "|z| < 1"),
            p_real("q", "0 < q < 1"),
        ],
        |b| {
            check_pos_int(b, "k1")?;
            check_pos_int(b, "k2")?;
            check_q(b)?;
            for n in ["x", "y", "z"] {
                check_abs_lt1(b, n)?;
            }
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k1, k2) = (get_u32(b, "k1")?, get_u32(b, "k2")?);
            let (x, y, z) = (get_real(b, "x")?, get_real(b, "y")?, get_real(b, "z")?);
            let nested = qeval::triple_nested_sum(k1, &x, k2, &z, &y, &q, p)?;
            let s = qeval::s_depth2(
                k1,
                &QReal::exact(x),
                1,
                &QReal::exact(y),
                k2,
                &QReal::exact(z),
                &q,
                p,
            )?;
            Ok(nested.add(&s, p))
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k1, k2) = (get_u32(b, "k1")?, get_u32(b, "k2")?);
            let x = QReal::exact(get_real(b, "x")?);
            let y = QReal::exact(get_real(b, "y")?);
            let z = QReal::exact(get_real(b, "z")?);
            let mut total = qeval::q_polylog_q(k1, &x, &q, p)?
                .mul(&qeval::s_depth1(1, &y, k2, &z, &q, p)?, p);
            total = total.add(&qeval::s_depth1(1, &y, k1 + k2, &x.mul(&z, p), &q, p)?, p);
            Ok(total)
        },
        grid,
    ));

    // all-q-power reflection with harmonic inner weights
    let mut grid = Vec::new();
    for k in 1..=3i64 {
        for l in 1..=3i64 {
            for &q in &q_grid() {
                grid.push(binding(&[("k", pi(k)), ("l", pi(l)), ("q", pr(q))]));
            }
        }
    }
    entries.push(entry(
        "thm1.3",
        "reflection identity for depth-2 nested q-sums at pure q-power weights",
        Mode::NumericQ,
        vec![p_int("k", ">= 1"), p_int("l", ">= 1"), p_real("q", "0 < q < 1")],
        |b| {
            check_pos_int(b, "k")?;
            check_pos_int(b, "l")?;
            check_q(b)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let qq = QReal::exact(q.q().clone());
            let t1 = qeval::s_depth2(l + 1, &qn(&q, l, p), 1, &qq, k, &qq, &q, p)?;
            let t2 = qeval::s_depth2(k, &qn(&q, k - 1, p), 1, &qq, l + 1, &qq, &q, p)?;
            Ok(add_signed(if plus(k) { t1 } else { t1.neg() }, t2, plus(l), p))
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let qq = QReal::exact(q.q().clone());
            let li_l1 = qeval::q_polylog_q(l + 1, &qn(&q, l, p), &q, p)?;
            let li_k1 = qeval::q_polylog_q(k + 1, &qn(&q, k, p), &q, p)?;
            let mut total = li_l1.mul(&li_k1, p);
            for j in 1..k {
                let t = qeval::q_polylog_q(k + 1 - j, &qn(&q, k - j, p), &q, p)?
                    .mul(&qeval::s_depth1(j, &qq, l + 1, &qn(&q, l, p), &q, p)?, p);
                total = add_signed(total, t, plus(j), p);
            }
            let t = li_l1.mul(&qeval::s_depth1(1, &qq, k, &qq, &q, p)?, p);
            total = add_signed(total, t, plus(k), p);
            for j in 1..k {
                let t = qeval::q_polylog_q(k + 1 - j, &qn(&q, k - j, p), &q, p)?
                    .mul(&qeval::q_polylog_q(l + j + 1, &qn(&q, l + 1, p), &q, p)?, p);
                total = add_signed(total, t, !plus(j), p);
            }
            for j in 1..l {
                let t = qeval::q_polylog_q(l + 1 - j, &qn(&q, l - j, p), &q, p)?
                    .mul(&qeval::s_depth1(k, &qn(&q, k - 1, p), j + 1, &qq, &q, p)?, p);
                total = add_signed(total, t, !plus(j), p);
            }
            Ok(total)
        },
        grid,
    ));

    // signed subsequence expansion of a polylog product, numerically
    let mut grid = Vec::new();
    for (ks, xs) in [
        (vec![1i64, 1], vec![0.5, -0.3]),
        (vec![2, 3], vec![0.6, 0.3]),
        (vec![1, 2, 1], vec![0.5, 0.3, -0.4]),
        (vec![2, 1, 3], vec![0.3, 0.6, 0.5]),
    ] {
        for &q in &q_grid() {
            let mut pairs: Vec<(&str, ParamValue)> =
                vec![("n", pi(ks.len() as i64)), ("q", pr(q))];
            let names_k = ["k1", "k2", "k3", "k4"];
            let names_x = ["x1", "x2", "x3", "x4"];
            for (i, &kv) in ks.iter().enumerate() {
                pairs.push((names_k[i], pi(kv)));
                pairs.push((names_x[i], pr(xs[i])));
            }
            grid.push(binding(&pairs));
        }
    }
    entries.push(entry(
        "thm1.4",
        "product of q-polylogarithms as a signed sum of nested sums over proper subsequences",
        Mode::NumericQ,
        vec![
            p_int("n", "1 <= n <= 4"),
            p_int("k1", ">= 1"),
            p_real("x1", "|x| < 1"),
            p_int("k2", "optional, >= 1"),
            p_real("x2", "optional, |x| < 1"),
            p_int("k3", "optional, >= 1"),
            p_real("x3", "optional, |x| < 1"),
            p_int("k4", "optional, >= 1"),
            p_real("x4", "optional, |x| < 1"),
            p_real("q", "0 < q < 1"),
        ],
        |b| {
            let n = check_pos_int(b, "n")?;
            if n > 4 {
                return Err(oob("n", "<= 4"));
            }
            check_q(b)?;
            let names_k = ["k1", "k2", "k3", "k4"];
            let names_x = ["x1", "x2", "x3", "x4"];
            for i in 0..n as usize {
                check_pos_int(b, names_k[i])?;
                check_abs_lt1(b, names_x[i])?;
            }
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (ks, xs) = thm14_args(b)?;
            let mut prod = QReal::one();
            for (k, x) in ks.iter().zip(&xs) {
                prod = prod.mul(&li_exact(*k, x, &q, p)?, p);
            }
            Ok(prod)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let q = get_q(b)?;
            let (ks, xs) = thm14_args(b)?;
            let n = ks.len();
            let mut total = QReal::zero();
            for mask in 0..((1u32 << n) - 1) {
                let mut kept_k = Vec::new();
                let mut kept_x = Vec::new();
                let mut out_k: u32 = 0;
                let mut out_x = QReal::one();
                for i in 0..n {
                    if mask & (1 << i) != 0 {
                        kept_k.push(ks[i]);
                        kept_x.push(xs[i].clone());
                    } else {
                        out_k += ks[i];
                        out_x = out_x.mul(&QReal::exact(xs[i].clone()), p);
                    }
                }
                let spec = SeriesSpec::new(kept_k, kept_x, out_k, out_x.value().clone(), q.clone())?;
                let v = s_sum(&spec, p)?;
                let positive = (n - mask.count_ones() as usize) % 2 == 1;
                total = add_signed(total, v, positive, p);
            }
            Ok(total)
        },
        grid,
    ));
}

fn thm14_args(b: &Binding) -> Result<(Vec<u32>, Vec<BigFloat>)> {
    let n = get_u32(b, "n")? as usize;
    let names_k = ["k1", "k2", "k3", "k4"];
    let names_x = ["x1", "x2", "x3", "x4"];
    let mut ks = Vec::with_capacity(n);
    let mut xs = Vec::with_capacity(n);
    for i in 0..n {
        ks.push(get_u32(b, names_k[i])?);
        xs.push(get_real(b, names_x[i])?);
    }
    Ok((ks, xs))
}

fn classical_family(entries: &mut Vec<IdentityEntry>) {
    // classical reflection for quadratic sums
    let mut grid = Vec::new();
    for k in 2..=3i64 {
        for l in 2..=3i64 {
            grid.push(binding(&[("k", pi(k)), ("l", pi(l))]));
        }
    }
    entries.push(entry(
        "cor4.1",
        "classical reflection between the quadratic sums S(1,l;k) and S(1,k;l)",
        Mode::Classical,
        vec![p_int("k", "> 1"), p_int("l", "> 1")],
        |b| {
            if check_pos_int(b, "k")? < 2 {
                return Err(oob("k", "> 1"));
            }
            if check_pos_int(b, "l")? < 2 {
                return Err(oob("l", "> 1"));
            }
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let t1 = es(&[1, l as i64], k, false, c, p)?;
            let t2 = es(&[1, k as i64], l, false, c, p)?;
            Ok(add_signed(if plus(k) { t1 } else { t1.neg() }, t2, !plus(l), p))
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let mut total = QReal::zero();
            for j in 2..l {
                let t = c.zeta(l + 1 - j)?.mul(&es(&[k as i64], j, false, c, p)?, p);
                total = acc_signed(total, t, j, p);
            }
            for j in 2..k {
                let t = c.zeta(k + 1 - j)?.mul(&es(&[l as i64], j, false, c, p)?, p);
                total = acc_signed(total, t.neg(), j, p);
            }
            total = total.add(&c.zeta(k)?.mul(&es(&[1], l, false, c, p)?, p), p);
            total = total.sub(&c.zeta(l)?.mul(&es(&[1], k, false, c, p)?, p), p);
            total = total.add(&c.zeta(l)?.mul(c.zeta(k + 1)?, p), p);
            total = total.sub(&c.zeta(k)?.mul(c.zeta(l + 1)?, p), p);
            Ok(total)
        },
        grid,
    ));

    let mut grid = Vec::new();
    for k in 2..=3i64 {
        for l in 2..=3i64 {
            grid.push(binding(&[("k", pi(k)), ("l", pi(l))]));
        }
    }
    entries.push(entry(
        "cor4.2",
        "classical reflection for S(1,k;l+1) and S(1,l+1;k)",
        Mode::Classical,
        vec![p_int("k", "> 1"), p_int("l", ">= 1")],
        |b| {
            if check_pos_int(b, "k")? < 2 {
                return Err(oob("k", "> 1"));
            }
            check_pos_int(b, "l")?;
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let t1 = es(&[1, k as i64], l + 1, false, c, p)?;
            let t2 = es(&[1, l as i64 + 1], k, false, c, p)?;
            Ok(add_signed(if plus(l) { t1 } else { t1.neg() }, t2, plus(k), p))
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let (k, l) = (get_u32(b, "k")?, get_u32(b, "l")?);
            let mut total = c.zeta(k + 1)?.mul(c.zeta(l + 1)?, p);
            for j in 1..k {
                let t = c.zeta(k + 1 - j)?.mul(&es(&[j as i64], l + 1, false, c, p)?, p);
                total = acc_signed(total, t, j, p);
            }
            let t = c.zeta(l + 1)?.mul(&es(&[1], k, false, c, p)?, p);
            total = add_signed(total, t, plus(k), p);
            for j in 1..k {
                let t = c.zeta(k + 1 - j)?.mul(c.zeta(l + j + 1)?, p);
                total = acc_signed(total, t.neg(), j, p);
            }
            for j in 1..l {
                let t = c.zeta(l + 1 - j)?.mul(&es(&[k as i64], j + 1, false, c, p)?, p);
                total = acc_signed(total, t.neg(), j, p);
            }
            Ok(total)
        },
        grid,
    ));

    // alternating-inner reflection, odd gap
    let grid: Vec<Binding> = [(2i64, 0i64), (3, 0)]
        .iter()
        .map(|&(l, k)| binding(&[("l", pi(l)), ("k", pi(k))]))
        .collect();
    entries.push(entry(
        "cor4.3",
        "reflection for quadratic sums with one alternating-harmonic factor, odd exponent gap",
        Mode::Classical,
        vec![p_int("l", ">= 2"), p_int("k", ">= 0")],
        |b| {
            if check_pos_int(b, "l")? < 2 {
                return Err(oob("l", ">= 2"));
            }
            if get_int(b, "k")? < 0 {
                return Err(oob("k", ">= 0"));
            }
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let (l, k) = (get_u32(b, "l")?, get_u32(b, "k")?);
            let hi = (l + 2 * k + 1) as i64;
            let t = es(&[-1, hi], l, false, c, p)?.add(&es(&[-1, l as i64], hi as u32, false, c, p)?, p);
            Ok(if l % 2 == 0 { t } else { t.neg() })
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let (l, k) = (get_u32(b, "l")?, get_u32(b, "k")?);
            let hi = l + 2 * k + 1;
            let mut total = QReal::zero();
            for j in 1..=(hi - 1) {
                let t = c.alt_zeta(hi + 1 - j)?.mul(&es(&[l as i64], j, true, c, p)?, p);
                total = acc_signed(total, t, j, p);
            }
            for j in 1..l {
                let t = c.alt_zeta(l + 1 - j)?.mul(&es(&[hi as i64], j, true, c, p)?, p);
                total = acc_signed(total, t.neg(), j, p);
            }
            let plain = es(&[hi as i64], l, false, c, p)?.add(&es(&[l as i64], hi, false, c, p)?, p);
            let alt = es(&[hi as i64], l, true, c, p)?.add(&es(&[l as i64], hi, true, c, p)?, p);
            let ln_block = c.ln2().mul(&plain.add(&alt, p), p);
            total = add_signed(total, ln_block, l % 2 == 0, p);
            Ok(total)
        },
        grid,
    ));

    // alternating-inner reflection, even gap
    let grid: Vec<Binding> = [(2i64, 0i64), (3, 0), (2, 1)]
        .iter()
        .map(|&(l, k)| binding(&[("l", pi(l)), ("k", pi(k))]))
        .collect();
    entries.push(entry(
        "cor4.4",
        "reflection for quadratic sums with one alternating-harmonic factor, even exponent gap",
        Mode::Classical,
        vec![p_int("l", ">= 2"), p_int("k", ">= 0")],
        |b| {
            if check_pos_int(b, "l")? < 2 {
                return Err(oob("l", ">= 2"));
            }
            if get_int(b, "k")? < 0 {
                return Err(oob("k", ">= 0"));
            }
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let (l, k) = (get_u32(b, "l")?, get_u32(b, "k")?);
            let hi = (l + 2 * k) as i64;
            let t = es(&[-1, hi], l, false, c, p)?.sub(&es(&[-1, l as i64], hi as u32, false, c, p)?, p);
            Ok(if l % 2 == 0 { t } else { t.neg() })
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let (l, k) = (get_u32(b, "l")?, get_u32(b, "k")?);
            let hi = l + 2 * k;
            let mut total = QReal::zero();
            for j in 1..=(hi - 1) {
                let t = c.alt_zeta(hi + 1 - j)?.mul(&es(&[l as i64], j, true, c, p)?, p);
                total = acc_signed(total, t, j, p);
            }
            for j in 1..l {
                let t = c.alt_zeta(l + 1 - j)?.mul(&es(&[hi as i64], j, true, c, p)?, p);
                total = acc_signed(total, t.neg(), j, p);
            }
            let plain = es(&[hi as i64], l, false, c, p)?.sub(&es(&[l as i64], hi, false, c, p)?, p);
            let alt = es(&[hi as i64], l, true, c, p)?.sub(&es(&[l as i64], hi, true, c, p)?, p);
            let ln_block = c.ln2().mul(&plain.add(&alt, p), p);
            total = add_signed(total, ln_block, l % 2 == 0, p);
            Ok(total)
        },
        grid,
    ));

    // the symmetric three-sum form
    let grid: Vec<Binding> = [(2i64, 0i64), (3, 0)]
        .iter()
        .map(|&(l, k)| binding(&[("l", pi(l)), ("k", pi(k))]))
        .collect();
    entries.push(entry(
        "cor4.5",
        "three quadratic sums with alternating factors reduced to linear sums and constants",
        Mode::Classical,
        vec![p_int("l", ">= 2"), p_int("k", ">= 0")],
        |b| {
            if check_pos_int(b, "l")? < 2 {
                return Err(oob("l", ">= 2"));
            }
            if get_int(b, "k")? < 0 {
                return Err(oob("k", ">= 0"));
            }
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let (l, k) = (get_u32(b, "l")?, get_u32(b, "k")?);
            let hi = (l + 2 * k + 1) as i64;
            let mut total = es(&[-1, hi], l, false, c, p)?;
            total = total.add(&es(&[-1, l as i64], hi as u32, false, c, p)?, p);
            total = total.add(&es(&[l as i64, hi], 1, true, c, p)?, p);
            Ok(total)
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let (l, k) = (get_u32(b, "l")?, get_u32(b, "k")?);
            let hi = l + 2 * k + 1;
            let mut total = es(&[l as i64], hi + 1, true, c, p)?;
            total = total.add(&es(&[-1], 2 * l + 2 * k + 1, false, c, p)?, p);
            total = total.add(&es(&[hi as i64], l + 1, true, c, p)?, p);
            total = total.add(&c.ln2().mul(&c.zeta(hi)?.mul(c.zeta(l)?, p), p), p);
            total = total.sub(c.alt_zeta(2 * l + 2 * k + 2)?, p);
            Ok(total)
        },
        grid,
    ));

    // the five polynomial displays in zeta values
    let mut grid = Vec::new();
    for d in 1..=5i64 {
        grid.push(binding(&[("l", pi(2)), ("display", pi(d))]));
    }
    entries.push(entry(
        "zeta-poly-l",
        "polynomial relations between powers of zeta values and uniform-weight nested sums",
        Mode::Classical,
        vec![p_int("l", "> 1"), p_int("display", "1..=5")],
        |b| {
            if check_pos_int(b, "l")? < 2 {
                return Err(oob("l", "> 1"));
            }
            let d = check_pos_int(b, "display")?;
            if d > 5 {
                return Err(oob("display", "1..=5"));
            }
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let l = get_u32(b, "l")?;
            let d = get_u32(b, "display")?;
            Ok(match d {
                1 => c.zeta(l)?.powi(4, p),
                2 => c.zeta(2 * l)?.mul(&c.zeta(l)?.powi(2, p), p),
                3 => c.zeta(3 * l)?.mul(&c.zeta(l)?.powi(2, p), p),
                4 => c.zeta(l)?.powi(5, p),
                _ => c.zeta(2 * l)?.mul(&c.zeta(l)?.powi(3, p), p),
            })
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let l = get_u32(b, "l")? as i64;
            let d = get_u32(b, "display")?;
            let lu = l as u32;
            Ok(match d {
                1 => {
                    let mut t = scaled(&es(&[l, l, l], lu, false, c, p)?, 4, p);
                    t = t.sub(&scaled(&es(&[l, l], 2 * lu, false, c, p)?, 6, p), p);
                    t = t.add(&scaled(&es(&[l], 3 * lu, false, c, p)?, 4, p), p);
                    t.sub(c.zeta(4 * lu)?, p)
                }
                2 => {
                    let mut t = scaled(&es(&[l, 2 * l], lu, false, c, p)?, 2, p);
                    t = t.add(&es(&[l, l], 2 * lu, false, c, p)?, p);
                    t = t.sub(&es(&[2 * l], 2 * lu, false, c, p)?, p);
                    t = t.sub(&scaled(&es(&[l], 3 * lu, false, c, p)?, 2, p), p);
                    t.add(c.zeta(4 * lu)?, p)
                }
                3 => {
                    let mut t = scaled(&es(&[l, 3 * l], lu, false, c, p)?, 2, p);
                    t = t.add(&es(&[l, l], 3 * lu, false, c, p)?, p);
                    t = t.sub(&es(&[3 * l], 2 * lu, false, c, p)?, p);
                    t = t.sub(&scaled(&es(&[l], 4 * lu, false, c, p)?, 2, p), p);
                    t.add(c.zeta(5 * lu)?, p)
                }
                4 => {
                    let mut t = scaled(&es(&[l, l, l, l], lu, false, c, p)?, 5, p);
                    t = t.sub(&scaled(&es(&[l, l, l], 2 * lu, false, c, p)?, 10, p), p);
                    t = t.add(&scaled(&es(&[l, l], 3 * lu, false, c, p)?, 10, p), p);
                    t = t.sub(&scaled(&es(&[l], 4 * lu, false, c, p)?, 5, p), p);
                    t.add(c.zeta(5 * lu)?, p)
                }
                _ => {
                    let mut t = es(&[l, l, l], 2 * lu, false, c, p)?;
                    t = t.add(&scaled(&es(&[l, l, 2 * l], lu, false, c, p)?, 3, p), p);
                    t = t.sub(&scaled(&es(&[l, l], 3 * lu, false, c, p)?, 3, p), p);
                    t = t.sub(&scaled(&es(&[l, 2 * l], 2 * lu, false, c, p)?, 3, p), p);
                    t = t.add(&scaled(&es(&[l], 4 * lu, false, c, p)?, 3, p), p);
                    t = t.add(&es(&[2 * l], 3 * lu, false, c, p)?, p);
                    t.sub(c.zeta(5 * lu)?, p)
                }
            })
        },
        grid,
    ));

    // explicit closed form for the alternating quadratic sum of weight 6
    entries.push(entry(
        "ex-s231bar",
        "alternating quadratic sum S(2,3;1 alt) as zeta values, log 2, Li_4(1/2), and linear sums",
        Mode::Classical,
        vec![],
        |_| Ok(()),
        |_, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            es(&[2, 3], 1, true, c, p)
        },
        |_, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let ln2 = c.ln2();
            let mut t = rat_mul(c.zeta(6)?, -161, 64, p);
            t = t.add(&rat_mul(&c.zeta(5)?.mul(ln2, p), 31, 16, p), p);
            t = t.add(&rat_mul(&c.zeta(3)?.powi(2, p), 9, 32, p), p);
            t = t.add(&rat_mul(&c.zeta(2)?.mul(c.zeta(3)?, p).mul(ln2, p), 3, 8, p), p);
            t = t.add(&scaled(&c.zeta(2)?.mul(c.li4_half(), p), 2, p), p);
            t = t.sub(&rat_mul(&c.zeta(4)?.mul(&ln2.powi(2, p), p), 5, 4, p), p);
            t = t.add(&rat_mul(&c.zeta(2)?.mul(&ln2.powi(4, p), p), 1, 12, p), p);
            t = t.add(&es(&[2], 4, true, c, p)?, p);
            t = t.sub(&es(&[-3], 3, false, c, p)?, p);
            Ok(t)
        },
        vec![binding(&[])],
    ));

    // explicit closed form with both inner factors alternating
    entries.push(entry(
        "ex-s2bar3bar1bar",
        "alternating quadratic sum with two alternating-harmonic factors in closed form",
        Mode::Classical,
        vec![],
        |_| Ok(()),
        |_, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            es(&[-2, -3], 1, true, c, p)
        },
        |_, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let ln2 = c.ln2();
            let mut t = rat_mul(c.zeta(6)?, 163, 128, p);
            t = t.sub(&rat_mul(&c.zeta(5)?.mul(ln2, p), 31, 16, p), p);
            t = t.add(&rat_mul(&c.zeta(3)?.powi(2, p), 3, 16, p), p);
            t = t.sub(&rat_mul(&c.zeta(2)?.mul(c.zeta(3)?, p).mul(ln2, p), 3, 4, p), p);
            t = t.sub(&c.zeta(2)?.mul(c.li4_half(), p), p);
            t = t.add(&rat_mul(&c.zeta(4)?.mul(&ln2.powi(2, p), p), 5, 8, p), p);
            t = t.sub(&rat_mul(&c.zeta(2)?.mul(&ln2.powi(4, p), p), 1, 24, p), p);
            t = t.add(&es(&[-2], 4, false, c, p)?, p);
            t = t.add(&es(&[-3], 3, false, c, p)?, p);
            Ok(t)
        },
        vec![binding(&[])],
    ));

    // the linear-sum closed form
    let grid: Vec<Binding> = (2..=6i64).map(|k| binding(&[("k", pi(k))])).collect();
    entries.push(entry(
        "euler-linear",
        "linear Euler sums S(1;k) in closed form from zeta values",
        Mode::Classical,
        vec![p_int("k", ">= 2")],
        |b| {
            if check_pos_int(b, "k")? < 2 {
                return Err(oob("k", ">= 2"));
            }
            Ok(())
        },
        |b, ctx| {
            let p = &ctx.prec;
            let c = ctx.consts()?;
            let k = get_u32(b, "k")?;
            es(&[1], k, false, c, p)
        },
        |b, ctx| {
            let k = get_u32(b, "k")?;
            crate::classical::euler_linear_closed(k, &ctx.prec)
        },
        grid,
    ));
}

/// Multiplies by the exact rational n/d.
fn rat_mul(v: &QReal, n: i64, d: u64, p: &Precision) -> QReal {
    let num = v.mul(&QReal::from_i64(n, p), p);
    num.div(&QReal::from_u64(d, p), p).expect("nonzero denominator")
}
