//! Thin composition layer for classical-mode identity entries.

use crate::classical::{euler_sum, Constants, EulerSumSpec};
use crate::error::Result;
use crate::numerics::{Precision, QReal};

/// Euler sum S(inner; k), optionally with the alternating outer factor.
pub fn es(
    inner: &[i64],
    outer_k: u32,
    alternating_outer: bool,
    consts: &Constants,
    prec: &Precision,
) -> Result<QReal> {
    let inner32: Vec<i32> = inner.iter().map(|&v| v as i32).collect();
    euler_sum(&EulerSumSpec::new(inner32, outer_k, alternating_outer)?, consts, prec)
}

/// Signed accumulation helper: acc + (-1)^(j-1) term.
pub fn acc_signed(acc: QReal, term: QReal, j: u32, prec: &Precision) -> QReal {
    if j % 2 == 1 {
        acc.add(&term, prec)
    } else {
        acc.sub(&term, prec)
    }
}

/// Scales by a small signed integer.
pub fn scaled(v: &QReal, c: i64, prec: &Precision) -> QReal {
    v.mul(&QReal::from_i64(c, prec), prec)
}

use alloc::vec::Vec;
