//! The word algebra over letters (k; x): noncommutative words, rational
//! formal sums, the recursive stuffle product, the evaluation map sending a
//! word to its non-strict nested sum, and the signed subsequence expansion of
//! an n-fold stuffle product.
//!
//! Coefficients are exact rationals so that algebraic identities can be
//! checked as exact coefficient-wise equalities. Weights come in two modes:
//! concrete rationals in (-1, 1), or formal monomials in named variables used
//! to track weight bookkeeping symbolically. The two modes never mix inside
//! one expression.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{
    bf_le, bigfloat_to_rational, bracket_from_qpow, poly_tail_upper, rational_abs_upper,
    rational_to_qreal, Precision, QParam, QReal, BOUND_PREC, TERM_CAP,
};
use crate::qseries::{s_sum, SeriesSpec};

/// A formal monomial: multiset of symbolic variable names.
pub type Monomial = BTreeMap<String, u32>;

/// Letter weight: a concrete rational strictly inside (-1, 1), or a formal
/// monomial of symbolic variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Weight {
    /// Numeric weight, |x| < 1.
    Concrete(BigRational),
    /// Product of symbolic variables.
    Symbolic(Monomial),
}

impl Weight {
    /// A single symbolic variable.
    pub fn var(name: &str) -> Weight {
        let mut m = Monomial::new();
        m.insert(name.to_string(), 1);
        Weight::Symbolic(m)
    }

    /// A concrete weight from an exact dyadic.
    pub fn from_f64(x: f64) -> Result<Weight> {
        let r = BigRational::from_float(x)
            .ok_or_else(|| Error::Domain(String::from("weight must be finite")))?;
        Ok(Weight::Concrete(r))
    }

    /// True for symbolic mode.
    pub fn is_symbolic(&self) -> bool {
        matches!(self, Weight::Symbolic(_))
    }

    /// Weight product: rational multiplication or multiset union.
    pub fn mul(&self, other: &Weight) -> Result<Weight> {
        match (self, other) {
            (Weight::Concrete(a), Weight::Concrete(b)) => Ok(Weight::Concrete(a * b)),
            (Weight::Symbolic(a), Weight::Symbolic(b)) => {
                let mut m = a.clone();
                for (v, e) in b {
                    *m.entry(v.clone()).or_insert(0) += e;
                }
                Ok(Weight::Symbolic(m))
            }
            _ => Err(Error::MixedWeightMode),
        }
    }

    /// The concrete rational, if in numeric mode.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Weight::Concrete(r) => Some(r),
            Weight::Symbolic(_) => None,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Concrete(r) => write!(f, "{r}"),
            Weight::Symbolic(m) => {
                if m.is_empty() {
                    return write!(f, "1");
                }
                for (v, e) in m {
                    if *e == 1 {
                        write!(f, "{v}")?;
                    } else {
                        write!(f, "{v}^{e}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// One letter of the alphabet: exponent k >= 1 and a weight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Letter {
    k: u32,
    weight: Weight,
}

impl Letter {
    /// Builds a letter, validating k >= 1 and |x| < 1 for concrete weights.
    pub fn new(k: u32, weight: Weight) -> Result<Letter> {
        if k == 0 {
            return Err(Error::Domain(String::from("letter exponent must be >= 1")));
        }
        if let Weight::Concrete(r) = &weight {
            if r.abs() >= BigRational::one() {
                return Err(Error::Domain(String::from(
                    "concrete letter weight must satisfy |x| < 1",
                )));
            }
        }
        Ok(Letter { k, weight })
    }

    /// Concrete-weight convenience constructor.
    pub fn concrete(k: u32, x: BigRational) -> Result<Letter> {
        Letter::new(k, Weight::Concrete(x))
    }

    /// Symbolic-weight convenience constructor.
    pub fn symbolic(k: u32, var: &str) -> Result<Letter> {
        Letter::new(k, Weight::var(var))
    }

    /// The exponent.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// The weight.
    pub fn weight(&self) -> &Weight {
        &self.weight
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{}]", self.k, self.weight)
    }
}

/// The merge rule: (k; x) o (l; y) = (k + l; x y).
pub fn circ(a: &Letter, b: &Letter) -> Result<Letter> {
    Letter::new(a.k + b.k, a.weight.mul(&b.weight)?)
}

/// An ordered product of letters; the empty word is the algebra unit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    /// The empty word.
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// A word from its letters.
    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    /// Single-letter word.
    pub fn from_letter(letter: Letter) -> Word {
        Word(alloc::vec![letter])
    }

    /// The letters, outermost first.
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for the empty word.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// New word with `letter` prepended.
    pub fn prepend(&self, letter: Letter) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend(self.0.iter().cloned());
        Word(v)
    }
}

impl Ord for Word {
    /// Length-lexicographic: shorter words first, then letter-wise order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A finite rational linear combination of words. Zero coefficients are
/// never stored; equality is coefficient-wise; iteration order is the
/// canonical word order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalSum {
    terms: BTreeMap<Word, BigRational>,
}

impl FormalSum {
    /// The zero element.
    pub fn zero() -> FormalSum {
        FormalSum::default()
    }

    /// The unit: the empty word with coefficient 1.
    pub fn one() -> FormalSum {
        FormalSum::from_word(Word::empty())
    }

    /// A single word with coefficient 1.
    pub fn from_word(w: Word) -> FormalSum {
        let mut s = FormalSum::zero();
        s.add_term(w, BigRational::one());
        s
    }

    /// True if no terms are present.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True if no terms are present.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    /// Adds `coeff * word`, dropping the entry if it cancels.
    pub fn add_term(&mut self, word: Word, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Sum of two formal sums.
    pub fn add(&self, other: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    /// Difference of two formal sums.
    pub fn sub(&self, other: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &BigRational) -> FormalSum {
        if c.is_zero() {
            return FormalSum::zero();
        }
        let mut out = FormalSum::zero();
        for (w, k) in &self.terms {
            out.add_term(w.clone(), k * c);
        }
        out
    }

    /// Left-concatenates a letter onto every word.
    pub fn prepend_letter(&self, letter: &Letter) -> FormalSum {
        let mut out = FormalSum::zero();
        for (w, c) in &self.terms {
            out.add_term(w.prepend(letter.clone()), c.clone());
        }
        out
    }

    /// Canonical text rendering: terms in canonical order, unit coefficients
    /// omitted, e.g. `[2;a][3;b] + [3;b][2;a] - [5;ab]`.
    pub fn canonical_text(&self) -> String {
        use core::fmt::Write;
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push_str("- ");
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if !mag.is_one() {
                let _ = write!(out, "{mag} ");
            }
            let _ = write!(out, "{w}");
        }
        out
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

/// Stuffle product of two formal sums (bilinear extension).
pub fn stuffle(u: &FormalSum, v: &FormalSum) -> Result<FormalSum> {
    let mut out = FormalSum::zero();
    for (wu, cu) in u.iter() {
        for (wv, cv) in v.iter() {
            let prod = stuffle_words(wu.letters(), wv.letters())?;
            out = out.add(&prod.scale(&(cu * cv)));
        }
    }
    Ok(out)
}

/// Stuffle product of two words by the recursion
/// `au * bv = a(u * bv) + b(au * v) - (a o b)(u * v)`.
pub fn stuffle_words(u: &[Letter], v: &[Letter]) -> Result<FormalSum> {
    if u.is_empty() {
        return Ok(FormalSum::from_word(Word::from_letters(v.to_vec())));
    }
    if v.is_empty() {
        return Ok(FormalSum::from_word(Word::from_letters(u.to_vec())));
    }
    let (a, u_rest) = u.split_first().expect("nonempty");
    let (b, v_rest) = v.split_first().expect("nonempty");
    let t1 = stuffle_words(u_rest, v)?.prepend_letter(a);
    let t2 = stuffle_words(u, v_rest)?.prepend_letter(b);
    let t3 = stuffle_words(u_rest, v_rest)?.prepend_letter(&circ(a, b)?);
    Ok(t1.add(&t2).sub(&t3))
}

/// n-fold stuffle product of single letters.
pub fn stuffle_fold(letters: &[Letter]) -> Result<FormalSum> {
    let mut acc = FormalSum::one();
    for l in letters {
        acc = stuffle(&acc, &FormalSum::from_word(Word::from_letter(l.clone())))?;
    }
    Ok(acc)
}

/// Expands `w_1 * ... * w_n` as the signed sum over proper subsequences:
/// for each proper subsequence the letters left out merge into a single
/// leading letter carrying the leftover exponent and weight, and the kept
/// letters contribute their own (recursively expanded) stuffle product.
pub fn subsequence_expansion(letters: &[Letter]) -> Result<FormalSum> {
    let n = letters.len();
    if n == 0 {
        return Err(Error::Domain(String::from("subsequence expansion requires n >= 1")));
    }
    if n > 20 {
        return Err(Error::Domain(String::from("subsequence expansion limited to n <= 20")));
    }
    let mut out = FormalSum::zero();
    // Masks select the kept subsequence; the full mask is excluded.
    for mask in 0..((1u32 << n) - 1) {
        let mut kept: Vec<Letter> = Vec::new();
        let mut merged: Option<Letter> = None;
        for (i, letter) in letters.iter().enumerate() {
            if mask & (1 << i) != 0 {
                kept.push(letter.clone());
            } else {
                merged = Some(match merged {
                    None => letter.clone(),
                    Some(m) => circ(&m, letter)?,
                });
            }
        }
        let lead = merged.expect("proper subsequence leaves at least one letter out");
        let inner = stuffle_fold(&kept)?;
        let sign = if (n - kept.len()) % 2 == 1 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        out = out.add(&inner.prepend_letter(&lead).scale(&sign));
    }
    Ok(out)
}

/// Evaluates a single word under the non-strict nested sum
/// `sum_{m_1 >= ... >= m_n >= 1} prod x_j^(m_j) / [m_j]^(k_j)`.
pub fn li_star_word(word: &Word, q: &QParam, prec: &Precision) -> Result<QReal> {
    let n = word.len();
    if n == 0 {
        return Ok(QReal::one());
    }
    let mut weights = Vec::with_capacity(n);
    for l in word.letters() {
        let r = l.weight().as_rational().ok_or(Error::SymbolicEvaluation)?;
        weights.push(rational_to_qreal(r, prec)?);
    }
    let x1_abs = rational_abs_upper(
        word.letters()[0].weight().as_rational().expect("checked concrete"),
    );
    // Nested partial sums: level[j] = sum over t >= m_j >= ... >= m_n >= 1,
    // updated top-down so level j sees level j+1 at the same t.
    let mut levels = alloc::vec![QReal::zero(); n];
    let mut pows = alloc::vec![QReal::one(); n];
    let qq = QReal::exact(q.q().clone());
    let mut q_pow = QReal::one();
    let mut t: u64 = 0;
    loop {
        t += 1;
        if t > TERM_CAP {
            return Err(Error::TruncationCap { terms: TERM_CAP });
        }
        q_pow = q_pow.mul(&qq, prec);
        let bracket = bracket_from_qpow(&q_pow, q, prec)?;
        for j in (0..n).rev() {
            pows[j] = pows[j].mul(&weights[j], prec);
            let term = pows[j].div(&bracket.powi(word.letters()[j].k() as u64, prec), prec)?;
            let deeper = if j + 1 < n { levels[j + 1].clone() } else { QReal::one() };
            levels[j] = levels[j].add(&term.mul(&deeper, prec), prec);
        }
        // |inner block| <= t^(n-1), so the outer tail is sum t^(n-1) |x_1|^t.
        if let Ok(tail) = poly_tail_upper(t, (n - 1) as u32, &x1_abs) {
            if bf_le(&tail, prec.target_tol()) {
                return Ok(QReal::with_bound(
                    levels[0].value().clone(),
                    levels[0].bound().add(&tail, BOUND_PREC, astro_float::RoundingMode::Up),
                ));
            }
        }
    }
}

/// Evaluates a formal sum under the nested-sum map (rational-linear).
pub fn li_star(sum: &FormalSum, q: &QParam, prec: &Precision) -> Result<QReal> {
    let mut acc = QReal::zero();
    for (w, c) in sum.iter() {
        let wv = li_star_word(w, q, prec)?;
        let cv = rational_to_qreal(c, prec)?;
        acc = acc.add(&cv.mul(&wv, prec), prec);
    }
    Ok(acc)
}

/// Rewrites a nested q-Euler sum as the evaluation of `w (w_1 * ... * w_n)`
/// in the word algebra, returning the expanded formal sum and its value.
///
/// Requires depth >= 1 and all weights strictly inside (-1, 1); inner
/// weights of magnitude exactly 1 are outside the alphabet and are served by
/// the direct series evaluator instead.
pub fn s_as_li_star(spec: &SeriesSpec, prec: &Precision) -> Result<(FormalSum, QReal)> {
    if spec.depth() == 0 {
        return Err(Error::Domain(String::from("s_as_li_star requires depth >= 1")));
    }
    let mut letters = Vec::with_capacity(spec.depth());
    for (k, x) in spec.inner_k().iter().zip(spec.inner_x()) {
        letters.push(Letter::concrete(*k, bigfloat_to_rational(x)?)?);
    }
    let outer = Letter::concrete(spec.outer_k(), bigfloat_to_rational(spec.outer_x())?)?;
    let product = stuffle_fold(&letters)?;
    let expression = product.prepend_letter(&outer);
    let value = li_star(&expression, spec.q(), prec)?;
    Ok((expression, value))
}

/// Numeric check target for the stuffle rewrite: the direct series value.
pub fn s_as_li_star_direct(spec: &SeriesSpec, prec: &Precision) -> Result<QReal> {
    s_sum(spec, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::parse_decimal;
    use astro_float::RoundingMode;
    use rand::{Rng, SeedableRng};
    use astro_float::BigFloat;
    use num_bigint::BigInt;
    use rand_chacha::ChaCha8Rng;
    use std::{format, vec, vec::Vec};

    fn prec() -> Precision {
        Precision::default()
    }

    fn qp(v: f64) -> QParam {
        QParam::from_f64(v).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sym(k: u32, v: &str) -> Letter {
        Letter::symbolic(k, v).unwrap()
    }

    /// Independent expansion of the stuffle product: enumerate all
    /// interleavings of the two words where any step may merge the two
    /// current heads, each merge contributing a factor of -1.
    fn stuffle_oracle(u: &[Letter], v: &[Letter]) -> FormalSum {
        fn go(
            u: &[Letter],
            v: &[Letter],
            acc: &mut Vec<Letter>,
            sign: i64,
            out: &mut FormalSum,
        ) {
            if u.is_empty() && v.is_empty() {
                out.add_term(Word::from_letters(acc.clone()), BigRational::from(BigInt::from(sign)));
                return;
            }
            if !u.is_empty() {
                acc.push(u[0].clone());
                go(&u[1..], v, acc, sign, out);
                acc.pop();
            }
            if !v.is_empty() {
                acc.push(v[0].clone());
                go(u, &v[1..], acc, sign, out);
                acc.pop();
            }
            if !u.is_empty() && !v.is_empty() {
                acc.push(circ(&u[0], &v[0]).unwrap());
                go(&u[1..], &v[1..], acc, -sign, out);
                acc.pop();
            }
        }
        let mut out = FormalSum::zero();
        go(u, v, &mut Vec::new(), 1, &mut out);
        out
    }

    fn random_word(rng: &mut ChaCha8Rng, max_len: usize, vars: &[&str]) -> Word {
        let len = rng.gen_range(0..=max_len);
        let letters = (0..len)
            .map(|_| sym(rng.gen_range(1..=4), vars[rng.gen_range(0..vars.len())]))
            .collect();
        Word::from_letters(letters)
    }

    #[test]
    fn circ_examples() {
        let c = circ(&sym(2, "x"), &sym(3, "y")).unwrap();
        assert_eq!(c.k(), 5);
        assert_eq!(format!("{c}"), "[5;xy]");
        let a = Letter::concrete(1, rat(1, 2)).unwrap();
        let c2 = circ(&a, &a).unwrap();
        assert_eq!(c2.k(), 2);
        assert_eq!(c2.weight().as_rational().unwrap(), &rat(1, 4));
        // unit weight on one side
        let u = Letter::concrete(3, rat(1, 1) - rat(1, 1)).unwrap(); // weight 0
        assert_eq!(circ(&a, &u).unwrap().weight().as_rational().unwrap(), &rat(0, 1));
        // mixed modes rejected
        assert!(circ(&a, &sym(2, "x")).is_err());
    }

    #[test]
    fn letter_validation() {
        assert!(Letter::concrete(0, rat(1, 2)).is_err());
        assert!(Letter::concrete(2, rat(1, 1)).is_err());
        assert!(Letter::concrete(2, rat(-3, 2)).is_err());
        assert!(Letter::concrete(2, rat(-1, 2)).is_ok());
    }

    #[test]
    fn stuffle_unit_and_base_case() {
        let w = FormalSum::from_word(Word::from_letters(vec![sym(2, "a"), sym(1, "b")]));
        let one = FormalSum::one();
        assert_eq!(stuffle(&one, &w).unwrap(), w);
        assert_eq!(stuffle(&w, &one).unwrap(), w);
        // [k;x] * [l;y] = [k;x][l;y] + [l;y][k;x] - [k+l;xy]
        let a = FormalSum::from_word(Word::from_letter(sym(2, "a")));
        let b = FormalSum::from_word(Word::from_letter(sym(3, "b")));
        let p = stuffle(&a, &b).unwrap();
        assert_eq!(p.canonical_text(), "- [5;ab] + [2;a][3;b] + [3;b][2;a]");
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn stuffle_matches_independent_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let vars = ["a", "b", "c"];
        for _ in 0..60 {
            let u = random_word(&mut rng, 3, &vars);
            let v = random_word(&mut rng, 2, &vars);
            let fast = stuffle_words(u.letters(), v.letters()).unwrap();
            let slow = stuffle_oracle(u.letters(), v.letters());
            assert_eq!(fast, slow, "stuffle mismatch for {u} and {v}");
        }
    }

    #[test]
    fn stuffle_commutative_and_associative_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let vars = ["a", "b", "c", "d"];
        for _ in 0..40 {
            let u = FormalSum::from_word(random_word(&mut rng, 3, &vars));
            let v = FormalSum::from_word(random_word(&mut rng, 3, &vars));
            assert_eq!(stuffle(&u, &v).unwrap(), stuffle(&v, &u).unwrap());
        }
        for _ in 0..20 {
            let u = FormalSum::from_word(random_word(&mut rng, 2, &vars));
            let v = FormalSum::from_word(random_word(&mut rng, 2, &vars));
            let w = FormalSum::from_word(random_word(&mut rng, 2, &vars));
            let l = stuffle(&stuffle(&u, &v).unwrap(), &w).unwrap();
            let r = stuffle(&u, &stuffle(&v, &w).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn subsequence_expansion_small_cases() {
        // n = 1: the only proper subsequence is empty
        let l = sym(3, "a");
        let e = subsequence_expansion(core::slice::from_ref(&l)).unwrap();
        assert_eq!(e, FormalSum::from_word(Word::from_letter(l.clone())));
        // n = 2 agrees with the direct product
        let a = sym(1, "a");
        let b = sym(2, "b");
        let direct = stuffle_fold(&[a.clone(), b.clone()]).unwrap();
        let expanded = subsequence_expansion(&[a, b]).unwrap();
        assert_eq!(expanded, direct);
    }

    #[test]
    fn subsequence_expansion_matches_fold_n_3_4() {
        let letters =
            [sym(1, "a"), sym(2, "b"), sym(1, "c"), sym(3, "d")];
        for n in 3..=4 {
            let ls = &letters[..n];
            let direct = stuffle_fold(ls).unwrap();
            let expanded = subsequence_expansion(ls).unwrap();
            assert_eq!(expanded, direct, "expansion mismatch at n={n}");
        }
    }

    #[test]
    fn formal_sum_bookkeeping() {
        let mut s = FormalSum::zero();
        let w = Word::from_letter(sym(1, "a"));
        s.add_term(w.clone(), rat(1, 2));
        s.add_term(w.clone(), rat(-1, 2));
        assert!(s.is_zero());
        s.add_term(w.clone(), rat(2, 3));
        assert_eq!(s.len(), 1);
        assert_eq!(s.canonical_text(), "2/3 [1;a]");
        assert_eq!(FormalSum::one().canonical_text(), "1");
        assert_eq!(FormalSum::zero().canonical_text(), "0");
    }

    #[test]
    fn bigfloat_rational_roundtrip() {
        for v in [0.75, -0.3125, 1.0, -2.5, 0.0, 1234.5678e-3] {
            let bf = BigFloat::from_f64(v, 192);
            let r = bigfloat_to_rational(&bf).unwrap();
            let back = rational_to_qreal(&r, &prec()).unwrap();
            let diff = back.value().sub(&BigFloat::from_f64(v, 256), 256, RoundingMode::ToEven);
            assert!(bf_le(&diff.abs(), &BigFloat::from_f64(1e-70, 64)), "roundtrip failed for {v}");
        }
    }

    #[test]
    fn li_star_base_cases() {
        let p = prec();
        let q = qp(0.5);
        // empty word evaluates to 1
        let one = li_star(&FormalSum::one(), &q, &p).unwrap();
        let d = one.sub(&QReal::one(), &p);
        assert!(bf_le(&d.value().abs(), d.bound()));
        // single letter is the q-polylog
        let w = Word::from_letter(Letter::concrete(2, rat(1, 2)).unwrap());
        let v = li_star_word(&w, &q, &p).unwrap();
        let li = crate::qseries::q_polylog(2, &BigFloat::from_f64(0.5, 256), &q, &p).unwrap();
        let d = v.sub(&li, &p);
        assert!(bf_le(&d.value().abs(), d.bound()));
    }

    #[test]
    fn li_star_two_letter_oracle() {
        let p = prec();
        // frozen non-strict double sum: [2;1/2][1;1/2], q = 1/2
        let w = Word::from_letters(vec![
            Letter::concrete(2, rat(1, 2)).unwrap(),
            Letter::concrete(1, rat(1, 2)).unwrap(),
        ]);
        let v = li_star_word(&w, &qp(0.5), &p).unwrap();
        let frozen =
            parse_decimal("0.3808384390651313310249514229627004158972219198925277618", 256)
                .unwrap();
        let diff = v.value().sub(&frozen, 320, RoundingMode::ToEven).abs();
        let allowed = v.bound().add(&BigFloat::from_f64(1e-50, 64), BOUND_PREC, RoundingMode::Up);
        assert!(bf_le(&diff, &allowed));
    }

    #[test]
    fn li_star_rejects_symbolic() {
        let p = prec();
        let w = Word::from_letter(sym(2, "a"));
        assert!(matches!(
            li_star_word(&w, &qp(0.5), &p),
            Err(Error::SymbolicEvaluation)
        ));
    }

    #[test]
    fn li_star_homomorphism_samples() {
        let p = prec();
        let q = qp(0.5);
        let cases: [(Vec<(u32, BigRational)>, Vec<(u32, BigRational)>); 3] = [
            (vec![(1, rat(1, 2))], vec![(2, rat(1, 4))]),
            (vec![(2, rat(-1, 2))], vec![(1, rat(1, 2)), (1, rat(1, 4))]),
            (vec![(1, rat(3, 8)), (2, rat(1, 2))], vec![(3, rat(-1, 4))]),
        ];
        for (lu, lv) in cases {
            let u = FormalSum::from_word(Word::from_letters(
                lu.into_iter().map(|(k, x)| Letter::concrete(k, x).unwrap()).collect(),
            ));
            let v = FormalSum::from_word(Word::from_letters(
                lv.into_iter().map(|(k, x)| Letter::concrete(k, x).unwrap()).collect(),
            ));
            let lhs = li_star(&stuffle(&u, &v).unwrap(), &q, &p).unwrap();
            let rhs = li_star(&u, &q, &p).unwrap().mul(&li_star(&v, &q, &p).unwrap(), &p);
            let d = lhs.sub(&rhs, &p);
            assert!(
                bf_le(&d.value().abs(), d.bound()),
                "homomorphism violated: residual {:?} bound {:?}",
                d.value(),
                d.bound()
            );
        }
    }

    #[test]
    fn s_as_li_star_matches_direct_sum() {
        let p = prec();
        let q = qp(0.5);
        let bf = |v: f64| BigFloat::from_f64(v, 256);
        let cases: [(Vec<u32>, Vec<f64>, u32, f64); 3] = [
            (vec![1], vec![0.5], 2, 0.5),
            (vec![1, 1], vec![0.5, 0.5], 2, 0.5),
            (vec![2, 1], vec![-0.25, 0.5], 1, 0.375),
        ];
        for (ik, ix, k, x) in cases {
            let spec = SeriesSpec::new(
                ik.clone(),
                ix.iter().map(|v| bf(*v)).collect(),
                k,
                bf(x),
                q.clone(),
            )
            .unwrap();
            let (_, via_words) = s_as_li_star(&spec, &p).unwrap();
            let direct = s_sum(&spec, &p).unwrap();
            let d = via_words.sub(&direct, &p);
            assert!(
                bf_le(&d.value().abs(), d.bound()),
                "rewrite mismatch for {ik:?}/{ix:?}: residual {:?} bound {:?}",
                d.value(),
                d.bound()
            );
        }
    }

    #[test]
    fn s_as_li_star_single_letter_is_definitional() {
        let p = prec();
        let q = qp(0.5);
        let bf = |v: f64| BigFloat::from_f64(v, 256);
        let spec = SeriesSpec::new(vec![2], vec![bf(0.5)], 3, bf(0.25), q.clone()).unwrap();
        let (expr, v) = s_as_li_star(&spec, &p).unwrap();
        // depth 1 requires no stuffle: the expression is the two-letter word
        assert_eq!(expr.len(), 1);
        let (w, c) = expr.iter().next().unwrap();
        assert_eq!(w.len(), 2);
        assert!(c.is_one());
        let direct = li_star_word(w, &q, &p).unwrap();
        let d = v.sub(&direct, &p);
        assert!(bf_le(&d.value().abs(), d.bound()));
    }

    #[test]
    fn s_as_li_star_rejects_unit_inner_weight() {
        let q = qp(0.5);
        let bf = |v: f64| BigFloat::from_f64(v, 256);
        let spec = SeriesSpec::new(vec![1], vec![bf(1.0)], 2, bf(0.5), q).unwrap();
        assert!(s_as_li_star(&spec, &prec()).is_err());
    }
}
