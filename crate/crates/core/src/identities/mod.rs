//! Registry of verifiable identities: each entry carries its parameter
//! schema, a domain predicate, left- and right-hand evaluators, and a
//! documented default grid. Verification evaluates both sides at a binding
//! and passes when the residual stays within `slack` times the combined
//! certified bound.

mod classical_eval;
mod qeval;
mod registry;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use astro_float::BigFloat;
use core::fmt;

use crate::classical::Constants;
use crate::error::{Error, Result};
use crate::numerics::{bf_le, format_decimal, Precision, QParam, QReal, BOUND_PREC};

pub use registry::registry;

/// A parameter value inside a binding.
#[derive(Debug, Clone)]
pub enum ParamValue {
    /// Integer-valued parameter.
    Int(i64),
    /// Real-valued parameter (exact dyadic as given).
    Real(BigFloat),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Real(r) => f.write_str(&format_decimal(r)),
        }
    }
}

/// Named parameter assignment for one verification point.
pub type Binding = BTreeMap<String, ParamValue>;

/// Builds a binding from (name, value) pairs.
pub fn binding(pairs: &[(&str, ParamValue)]) -> Binding {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Integer parameter accessor.
pub fn get_int(b: &Binding, name: &str) -> Result<i64> {
    match b.get(name) {
        Some(ParamValue::Int(i)) => Ok(*i),
        Some(ParamValue::Real(_)) => Err(Error::OutOfDomain {
            param: name.to_string(),
            constraint: String::from("an integer"),
        }),
        None => Err(Error::OutOfDomain {
            param: name.to_string(),
            constraint: String::from("present in the binding"),
        }),
    }
}

/// Real parameter accessor (integers widen).
pub fn get_real(b: &Binding, name: &str) -> Result<BigFloat> {
    match b.get(name) {
        Some(ParamValue::Real(r)) => Ok(r.clone()),
        Some(ParamValue::Int(i)) => Ok(BigFloat::from_i64(*i, BOUND_PREC)),
        None => Err(Error::OutOfDomain {
            param: name.to_string(),
            constraint: String::from("present in the binding"),
        }),
    }
}

/// The deformation parameter from a binding.
pub fn get_q(b: &Binding) -> Result<QParam> {
    QParam::new(get_real(b, "q")?)
}

/// Positive small integer accessor.
pub fn get_u32(b: &Binding, name: &str) -> Result<u32> {
    let v = get_int(b, name)?;
    u32::try_from(v).map_err(|_| Error::OutOfDomain {
        param: name.to_string(),
        constraint: String::from("a nonnegative 32-bit integer"),
    })
}

/// Evaluation context shared by entry evaluators.
pub struct EvalCtx<'a> {
    /// Working precision for every series evaluation.
    pub prec: Precision,
    /// Classical constants table; only classical-mode entries need it.
    pub consts: Option<&'a Constants>,
}

impl<'a> EvalCtx<'a> {
    /// Context for numeric-q entries.
    pub fn new(prec: Precision) -> EvalCtx<'a> {
        EvalCtx { prec, consts: None }
    }

    /// Context with a constants table attached.
    pub fn with_consts(prec: Precision, consts: &'a Constants) -> EvalCtx<'a> {
        EvalCtx { prec, consts: Some(consts) }
    }

    /// The constants table, required by classical entries.
    pub fn consts(&self) -> Result<&'a Constants> {
        self.consts.ok_or_else(|| {
            Error::Domain(String::from("classical entries need a constants table in the context"))
        })
    }
}

/// Whether an identity evaluates q-series or classical limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Identities in the deformation parameter q.
    NumericQ,
    /// q -> 1 limits over classical constants and Euler sums.
    Classical,
}

/// Parameter kinds for the schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// Integer parameter.
    Int,
    /// Real parameter.
    Real,
}

/// One declared parameter of an identity.
#[derive(Debug, Clone)]
pub struct ParamSpec {
    /// Parameter name as used in bindings.
    pub name: &'static str,
    /// Integer or real.
    pub kind: ParamKind,
    /// Human-readable domain note.
    pub domain: &'static str,
}

type EvalFn = Box<dyn Fn(&Binding, &EvalCtx<'_>) -> Result<QReal> + Send + Sync>;
type DomainFn = Box<dyn Fn(&Binding) -> Result<()> + Send + Sync>;

/// A registered identity.
pub struct IdentityEntry {
    /// Short stable id, e.g. `thm1.3`.
    pub id: &'static str,
    /// What the identity relates, named by content.
    pub description: &'static str,
    /// Evaluation mode.
    pub mode: Mode,
    /// Parameter schema.
    pub params: Vec<ParamSpec>,
    domain: DomainFn,
    lhs: EvalFn,
    rhs: EvalFn,
    /// Documented default verification grid.
    pub default_grid: Vec<Binding>,
}

impl IdentityEntry {
    /// Checks a binding against the entry's domain.
    pub fn check_domain(&self, b: &Binding) -> Result<()> {
        (self.domain)(b)
    }

    /// Evaluates the left-hand side.
    pub fn eval_lhs(&self, b: &Binding, ctx: &EvalCtx<'_>) -> Result<QReal> {
        (self.lhs)(b, ctx)
    }

    /// Evaluates the right-hand side.
    pub fn eval_rhs(&self, b: &Binding, ctx: &EvalCtx<'_>) -> Result<QReal> {
        (self.rhs)(b, ctx)
    }
}

/// Outcome of verifying one identity at one binding.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    /// Identity id.
    pub identity: String,
    /// The parameter binding.
    pub params: Binding,
    /// Left-hand value with bound.
    pub lhs: QReal,
    /// Right-hand value with bound.
    pub rhs: QReal,
    /// |lhs - rhs| central residual.
    pub residual: BigFloat,
    /// Sum of both certified bounds.
    pub combined_bound: BigFloat,
    /// Pass multiplier applied to the combined bound.
    pub slack: f64,
    /// residual <= slack * combined_bound.
    pub pass: bool,
}

/// Renders a binding as `k=2;l=3;q=0.5` in key order.
pub fn binding_text(b: &Binding) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, (k, v)) in b.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        let _ = write!(out, "{k}={v}");
    }
    out
}

/// Looks up an entry by id.
pub fn find_entry<'a>(entries: &'a [IdentityEntry], id: &str) -> Result<&'a IdentityEntry> {
    entries
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Verifies one identity at one binding.
pub fn verify(
    entry: &IdentityEntry,
    b: &Binding,
    ctx: &EvalCtx<'_>,
    slack: f64,
) -> Result<VerifyReport> {
    entry.check_domain(b)?;
    let lhs = entry.eval_lhs(b, ctx)?;
    let rhs = entry.eval_rhs(b, ctx)?;
    let residual = lhs
        .value()
        .sub(rhs.value(), ctx.prec.bits(), astro_float::RoundingMode::ToEven)
        .abs();
    let combined_bound =
        lhs.bound().add(rhs.bound(), BOUND_PREC, astro_float::RoundingMode::Up);
    let allowed =
        combined_bound.mul(&BigFloat::from_f64(slack, BOUND_PREC), BOUND_PREC, astro_float::RoundingMode::Up);
    let pass = bf_le(&residual, &allowed);
    Ok(VerifyReport {
        identity: entry.id.to_string(),
        params: b.clone(),
        lhs,
        rhs,
        residual,
        combined_bound,
        slack,
        pass,
    })
}

/// Summary of a sweep: totals and the worst point.
#[derive(Debug, Clone)]
pub struct SweepSummary {
    /// Points verified.
    pub total: usize,
    /// Points that passed.
    pub passed: usize,
    /// Largest residual seen.
    pub max_residual: BigFloat,
    /// Binding of the largest residual, if any point ran.
    pub worst: Option<Binding>,
}

/// Verifies an identity over a grid, in grid order.
pub fn sweep(
    entry: &IdentityEntry,
    grid: &[Binding],
    ctx: &EvalCtx<'_>,
    slack: f64,
) -> Result<(Vec<VerifyReport>, SweepSummary)> {
    let mut reports = Vec::with_capacity(grid.len());
    for b in grid {
        reports.push(verify(entry, b, ctx, slack)?);
    }
    Ok(summarize(reports))
}

/// Builds the summary from finished reports.
pub fn summarize(reports: Vec<VerifyReport>) -> (Vec<VerifyReport>, SweepSummary) {
    let mut max_residual = BigFloat::from_i8(0, BOUND_PREC);
    let mut worst = None;
    let mut passed = 0;
    for r in &reports {
        if r.pass {
            passed += 1;
        }
        if crate::numerics::bf_lt(&max_residual, &r.residual) {
            max_residual = r.residual.clone();
            worst = Some(r.params.clone());
        }
    }
    let summary = SweepSummary { total: reports.len(), passed, max_residual, worst };
    (reports, summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bf_lt;
    use std::string::ToString;
    use std::vec::Vec;

    fn ctx_q() -> EvalCtx<'static> {
        EvalCtx::new(Precision::default())
    }

    #[test]
    fn registry_contains_required_entries() {
        let reg = registry();
        assert!(reg.len() >= 22, "registry holds {} entries", reg.len());
        for id in [
            "thm1.1",
            "thm1.1-special",
            "lemma2.1",
            "thm1.2",
            "thm1.2-x1",
            "thm-mul-li-zeta",
            "cor-mul-li-zeta",
            "eq-sum-zeta",
            "eq-double-sum",
            "eq-li-li-2",
            "eq-li-li-3",
            "eq-li-s",
            "thm1.3",
            "thm1.4",
            "cor4.1",
            "cor4.2",
            "cor4.3",
            "cor4.4",
            "cor4.5",
            "zeta-poly-l",
            "ex-s231bar",
            "ex-s2bar3bar1bar",
            "euler-linear",
        ] {
            assert!(find_entry(&reg, id).is_ok(), "missing entry {id}");
        }
        assert!(find_entry(&reg, "no-such-id").is_err());
        // ids are unique
        let mut ids: Vec<&str> = reg.iter().map(|e| e.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), reg.len());
    }

    #[test]
    fn every_entry_has_a_grid_and_evaluates_finitely_q_side() {
        let reg = registry();
        let ctx = ctx_q();
        for e in reg.iter().filter(|e| e.mode == Mode::NumericQ) {
            assert!(!e.default_grid.is_empty(), "{} has an empty default grid", e.id);
            let b = &e.default_grid[0];
            e.check_domain(b).unwrap_or_else(|err| panic!("{}: domain rejects grid[0]: {err}", e.id));
            let lhs = e.eval_lhs(b, &ctx).unwrap_or_else(|err| panic!("{} lhs: {err}", e.id));
            let rhs = e.eval_rhs(b, &ctx).unwrap_or_else(|err| panic!("{} rhs: {err}", e.id));
            assert!(!lhs.value().is_nan() && !lhs.value().is_inf(), "{} lhs not finite", e.id);
            assert!(!rhs.value().is_nan() && !rhs.value().is_inf(), "{} rhs not finite", e.id);
        }
    }

    #[test]
    fn verify_passes_on_cheap_entries() {
        let reg = registry();
        let ctx = ctx_q();
        for (id, idx) in
            [("sec1-ex1", 2usize), ("eq-li-li-2", 0), ("eq-double-sum", 0), ("thm1.3", 0), ("lemma2.1", 0)]
        {
            let e = find_entry(&reg, id).unwrap();
            let b = &e.default_grid[idx];
            let r = verify(e, b, &ctx, 10.0).unwrap();
            assert!(
                r.pass,
                "{id} fails at {}: residual {:?} vs bound {:?}",
                binding_text(b),
                r.residual,
                r.combined_bound
            );
            // residual far below bound would also catch an empty test
            assert!(bf_lt(&r.residual, &BigFloat::from_f64(1e-20, 64)));
        }
    }

    #[test]
    fn verify_rejects_out_of_domain() {
        let reg = registry();
        let ctx = ctx_q();
        let e = find_entry(&reg, "thm1.2").unwrap();
        let mut b = e.default_grid[0].clone();
        b.insert("s".to_string(), ParamValue::Real(BigFloat::from_f64(5.0, 64)));
        match verify(e, &b, &ctx, 10.0) {
            Err(Error::OutOfDomain { param, .. }) => assert_eq!(param, "s"),
            other => panic!("expected out-of-domain, got {other:?}"),
        }
        // x1 display requires k, l >= 2 and s, h > 0
        let e = find_entry(&reg, "thm1.2-x1").unwrap();
        let mut b = e.default_grid[0].clone();
        b.insert("k".to_string(), ParamValue::Int(1));
        assert!(verify(e, &b, &ctx, 10.0).is_err());
        let mut b = e.default_grid[0].clone();
        b.insert("h".to_string(), ParamValue::Real(BigFloat::from_f64(0.0, 64)));
        assert!(verify(e, &b, &ctx, 10.0).is_err());
    }

    #[test]
    fn sweep_reports_and_summary() {
        let reg = registry();
        let ctx = ctx_q();
        let e = find_entry(&reg, "eq-double-sum").unwrap();
        let grid = &e.default_grid[..4];
        let (reports, summary) = sweep(e, grid, &ctx, 10.0).unwrap();
        assert_eq!(reports.len(), 4);
        assert_eq!(summary.total, 4);
        assert_eq!(summary.passed, 4);
        assert!(summary.worst.is_some());
        // empty grid -> vacuous summary
        let (reports, summary) = sweep(e, &[], &ctx, 10.0).unwrap();
        assert!(reports.is_empty());
        assert_eq!(summary.total, 0);
        assert!(summary.worst.is_none());
    }

    #[test]
    fn binding_text_is_deterministic() {
        let b = binding(&[("k", ParamValue::Int(2)), ("q", ParamValue::Real(BigFloat::from_f64(0.5, 64)))]);
        assert_eq!(binding_text(&b), "k=2;q=5.e-1");
    }
}
