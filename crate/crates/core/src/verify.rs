//! Cross-checks between formulas, enumeration and bijections.
//!
//! Every check produces a [`VerificationReport`]; failures are recorded and
//! the run continues. Report lists are sorted by check name and parameters,
//! so the output does not depend on how many workers ran the checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::arrangements::{DominoArrangement, Parity, SignClass, SquareArrangement};
use crate::bijections::{
    board_to_domino, conjugate, domino_to_board, domino_to_square, enumerate_boards, epsilon_minus, epsilon_plus,
    square_to_domino, ConjugationOutcome,
};
use crate::enumeration::{ClassFilter, Enumerator, Family, StratumKey, StratumKind};
use crate::error::Result;
use crate::formulas::{
    binom, companion_identity, eval_s, eval_t, eval_u, eval_v, eval_w, gf_coefficients, moriarty,
    oddness_and_divisibility, pow2, recurrence_residual,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

/// The fixed table of claims a report can refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    FiveSums,
    DominoCount,
    BoardBijection,
    NonWhiteStrata,
    LastDecoratedStrata,
    LastBlackStrata,
    DominoSquareBijection,
    Conjugation,
    EvenWeightCount,
    Moriarty,
    Companion,
    Recurrence,
    GeneratingFunction,
    Oddness,
    Divisibility,
}

impl Claim {
    pub const ALL: [Claim; 15] = [
        Claim::FiveSums,
        Claim::DominoCount,
        Claim::BoardBijection,
        Claim::NonWhiteStrata,
        Claim::LastDecoratedStrata,
        Claim::LastBlackStrata,
        Claim::DominoSquareBijection,
        Claim::Conjugation,
        Claim::EvenWeightCount,
        Claim::Moriarty,
        Claim::Companion,
        Claim::Recurrence,
        Claim::GeneratingFunction,
        Claim::Oddness,
        Claim::Divisibility,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Claim::FiveSums => "S(m,r) = T(m-1-r,r) = U(m-1-r,r) = V(m-1-r,r) = W(m-1-r,r)",
            Claim::DominoCount => "|D+(m,r)| = S(m,r)",
            Claim::BoardBijection => "marked colored boards <-> D+(m,r)",
            Claim::NonWhiteStrata => "|B+(n,r)| = T(n,r), stratified by non-white cell count",
            Claim::LastDecoratedStrata => "|B+(n,r)| = U(n,r), stratified by last decorated cell",
            Claim::LastBlackStrata => "|B+(n,r)| = V(n,r), stratified by last black cell",
            Claim::DominoSquareBijection => "D+(m,r) <-> B+(m-1-r,r)",
            Claim::Conjugation => "|B+odd(n,r)| = |B-even(n,r)| + (-1)^(r+1) via conjugation",
            Claim::EvenWeightCount => "T(n,r) = W(n,r) = |Beven(n,r)| + (-1)^(r+1)",
            Claim::Moriarty => "sum C(m,2i) C(i,r) = 2^(m-1-2r) C(m-r,r) m/(m-r)",
            Claim::Companion => "sum C(n,j) C(j,r) = 2^(n-r) C(n,r)",
            Claim::Recurrence => "T(2n,n) satisfies the three-term recurrence",
            Claim::GeneratingFunction => "sum_m S(m,r) x^m = x^(2r+2) / ((1-x)(1-2x)^(r+1))",
            Claim::Oddness => "S(m,r) is odd",
            Claim::Divisibility => "2^(m-1-2r) divides S(m,r) + (-1)^r",
        }
    }
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// A compared value: one integer or a list. Integers serialize as decimal
/// strings so they survive JSON readers with 64-bit number limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    Int(BigInt),
    List(Vec<BigInt>),
    None,
}

impl Quantity {
    fn int(v: impl Into<BigInt>) -> Self {
        Quantity::Int(v.into())
    }

    fn list<T: Into<BigInt>>(v: impl IntoIterator<Item = T>) -> Self {
        Quantity::List(v.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Int(v) => write!(f, "{v}"),
            Quantity::List(vs) => {
                f.write_str("[")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
            Quantity::None => f.write_str("-"),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Quantity::Int(v) => s.serialize_str(&v.to_string()),
            Quantity::List(vs) => {
                let mut seq = s.serialize_seq(Some(vs.len()))?;
                for v in vs {
                    seq.serialize_element(&v.to_string())?;
                }
                seq.end()
            }
            Quantity::None => s.serialize_none(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub params: BTreeMap<String, i64>,
    pub status: Status,
    pub lhs: Quantity,
    pub rhs: Quantity,
    #[serde(rename = "paper_ref")]
    pub claim: Claim,
    pub detail: Option<String>,
}

impl VerificationReport {
    fn new(check_name: &str, params: &[(&str, usize)], claim: Claim) -> Self {
        VerificationReport {
            check_name: check_name.to_owned(),
            params: params.iter().map(|&(k, v)| (k.to_owned(), v as i64)).collect(),
            status: Status::Pass,
            lhs: Quantity::None,
            rhs: Quantity::None,
            claim,
            detail: None,
        }
    }

    fn values(mut self, lhs: Quantity, rhs: Quantity) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self
    }

    /// Pass iff the two sides are equal.
    fn compare(self, lhs: Quantity, rhs: Quantity) -> Self {
        let equal = lhs == rhs;
        let r = self.values(lhs, rhs);
        if equal {
            r
        } else {
            let detail = format!("lhs {} != rhs {}", r.lhs, r.rhs);
            r.fail(detail)
        }
    }

    fn fail(mut self, detail: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.detail = Some(detail.into());
        self
    }

    fn skip(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.detail = Some(note.into());
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        if self.detail.is_none() {
            self.detail = Some(note.into());
        }
        self
    }

    fn or_error(self, result: Result<Self>) -> Self {
        result.unwrap_or_else(|e| {
            let r = self;
            r.fail(format!("error: {e}"))
        })
    }

    pub fn param(&self, name: &str) -> Option<i64> {
        self.params.get(name).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn to_plain(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let mut line =
            format!("{} {} {} lhs={} rhs={}", self.status, self.check_name, params.join(" "), self.lhs, self.rhs);
        if let Some(d) = &self.detail {
            line.push_str(" -- ");
            line.push_str(d);
        }
        line
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut s = Summary::default();
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }

    pub fn all_passed(&self) -> bool {
        self.fail == 0
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "summary: pass={} fail={} skipped={}", self.pass, self.fail, self.skipped)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuxLimits {
    pub moriarty_m: usize,
    pub companion_n: usize,
    pub recurrence_n: usize,
    pub gf_r: usize,
    pub gf_m: usize,
    pub parity_m: usize,
}

impl Default for AuxLimits {
    fn default() -> Self {
        AuxLimits { moriarty_m: 30, companion_n: 30, recurrence_n: 12, gf_r: 8, gf_m: 40, parity_m: 60 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub m_max: usize,
    pub enum_limit: usize,
    pub n_max: usize,
    pub bijection_m: usize,
    pub aux: AuxLimits,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { m_max: 200, enum_limit: 16, n_max: 14, bijection_m: 16, aux: AuxLimits::default() }
    }
}

/// Runs checks, optionally spread over a worker pool.
#[derive(Clone, Copy, Debug)]
pub struct Verifier {
    jobs: usize,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier { jobs: std::thread::available_parallelism().map_or(1, |n| n.get()) }
    }
}

fn signed_unit(r: usize) -> BigInt {
    if r.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_jobs(jobs: usize) -> Self {
        Verifier { jobs: jobs.max(1) }
    }

    fn run<T, F>(&self, tasks: Vec<T>, check: F) -> Vec<VerificationReport>
    where
        T: Send + Sync,
        F: Fn(&T) -> Vec<VerificationReport> + Sync + Send,
    {
        let mut out: Vec<VerificationReport> = if self.jobs <= 1 {
            tasks.iter().flat_map(&check).collect()
        } else {
            match rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build() {
                Ok(pool) => pool.install(|| tasks.par_iter().flat_map_iter(&check).collect()),
                Err(_) => tasks.iter().flat_map(&check).collect(),
            }
        };
        sort_reports(&mut out);
        out
    }

    /// Five-way formula agreement for `2 <= m <= m_max`, plus enumeration
    /// counts of both plus classes for `m <= enum_limit`.
    pub fn theorem(&self, m_max: usize, enum_limit: usize) -> Vec<VerificationReport> {
        let enumerator = Enumerator::new().with_limits(enum_limit.max(1), enum_limit.max(1));
        let tasks: Vec<(usize, usize)> = (2..=m_max).flat_map(|m| (0..=(m - 2) / 2).map(move |r| (m, r))).collect();
        self.run(tasks, |&(m, r)| {
            let n = m - 1 - r;
            let params = [("m", m), ("r", r)];
            let s = eval_s(m, r);
            let mut out = Vec::with_capacity(2);
            let base = VerificationReport::new("theorem.formulas", &params, Claim::FiveSums);
            let formulas =
                (|| -> Result<Vec<BigUint>> { Ok(vec![eval_t(n, r)?, eval_u(n, r)?, eval_v(n, r)?, eval_w(n, r)?]) })();
            out.push(match formulas {
                Ok(values) => {
                    let r = base.values(Quantity::int(s.clone()), Quantity::list(values.clone()));
                    match values.iter().zip(["T", "U", "V", "W"]).find(|(v, _)| **v != s) {
                        Some((_, name)) => r.fail(format!("{name} disagrees with S")),
                        None => r,
                    }
                }
                Err(e) => base.fail(format!("error: {e}")),
            });
            if m <= enum_limit {
                let base = VerificationReport::new("theorem.enumeration", &params, Claim::DominoCount);
                let plus = ClassFilter::sign(SignClass::Plus);
                let counts = (|| -> Result<Vec<BigUint>> {
                    Ok(vec![
                        enumerator.count(Family::Domino, m, r, &plus)?,
                        enumerator.count(Family::Square, n, r, &plus)?,
                    ])
                })();
                out.push(match counts {
                    Ok(counts) => {
                        let ok = counts.iter().all(|c| *c == s);
                        let r = base.values(Quantity::int(s.clone()), Quantity::list(counts));
                        if ok {
                            r
                        } else {
                            r.fail("enumerated plus-class sizes [|D+(m,r)|, |B+(m-1-r,r)|] differ from S")
                        }
                    }
                    Err(e) => base.fail(format!("error: {e}")),
                });
            }
            out
        })
    }

    /// Conjugation: cardinality identity plus involution, parity flip, sign
    /// flip and the unique exception, for all `n <= n_max`.
    pub fn lemma(&self, n_max: usize) -> Vec<VerificationReport> {
        let enumerator = Enumerator::new().with_limits(n_max.max(1), n_max.max(1));
        let tasks: Vec<(usize, usize)> = (1..=n_max).flat_map(|n| (0..n).map(move |r| (n, r))).collect();
        self.run(tasks, |&(n, r)| {
            let params = [("n", n), ("r", r)];
            let card = VerificationReport::new("lemma.cardinality", &params, Claim::Conjugation);
            let card = card.clone().or_error((|| {
                let plus_odd = enumerator.count(
                    Family::Square,
                    n,
                    r,
                    &ClassFilter::sign(SignClass::Plus).with_parity(Parity::Odd),
                )?;
                let minus_even = enumerator.count(
                    Family::Square,
                    n,
                    r,
                    &ClassFilter::sign(SignClass::Minus).with_parity(Parity::Even),
                )?;
                Ok(card.compare(Quantity::int(plus_odd), Quantity::int(BigInt::from(minus_even) - signed_unit(r))))
            })());
            let inv = VerificationReport::new("lemma.involution", &params, Claim::Conjugation);
            let inv = inv.clone().or_error(check_involution(&enumerator, n, r).map(|c| c.into_report(inv)));
            vec![card, inv]
        })
    }

    /// Stratum counts against the individual summands of T, U, V and W.
    pub fn strata(&self, n_max: usize) -> Vec<VerificationReport> {
        let enumerator = Enumerator::new().with_limits(n_max.max(1), n_max.max(1));
        let tasks: Vec<(usize, usize)> = (1..=n_max).flat_map(|n| (0..n).map(move |r| (n, r))).collect();
        self.run(tasks, |&(n, r)| {
            let params = [("n", n), ("r", r)];
            let (ni, ri) = (n as i64, r as i64);
            let mut out = Vec::with_capacity(5);

            let t = VerificationReport::new("strata.T", &params, Claim::NonWhiteStrata);
            out.push(t.clone().or_error(stratum_report(
                &enumerator,
                t,
                (n, r),
                StratumKind::NonWhite,
                (1..=n).map(|j| (StratumKey::NonWhiteCount(j), binom(ni, j as i64) * binom(j as i64 - 1, ri))),
            )));

            let u = VerificationReport::new("strata.U", &params, Claim::LastDecoratedStrata);
            out.push(u.clone().or_error(stratum_report(
                &enumerator,
                u,
                (n, r),
                StratumKind::LastDecorated,
                (1..=n).map(|j| {
                    let term = if j > r { binom(j as i64 - 1, ri) * pow2(j - 1 - r) } else { BigUint::zero() };
                    (StratumKey::LastDecoratedAt(j), term)
                }),
            )));

            let v = VerificationReport::new("strata.V", &params, Claim::LastBlackStrata);
            out.push(if r == 0 {
                v.skip("no last black cell when r = 0; V(n,0) is taken as 2^n - 1")
            } else {
                v.clone().or_error(stratum_report(
                    &enumerator,
                    v,
                    (n, r),
                    StratumKind::LastBlack,
                    (1..=n - r).map(|j| {
                        let term = binom((n - 1 - j) as i64, ri - 1) * pow2(n - r - j) * (pow2(j) - 1u32);
                        (StratumKey::LastBlackAt(j), term)
                    }),
                ))
            });

            let w = VerificationReport::new("strata.W", &params, Claim::EvenWeightCount);
            out.push(w.clone().or_error((|| {
                let strata = enumerator.stratify(n, r, StratumKind::Weight)?;
                let ks = 0..=r / 2;
                let lhs: Vec<BigUint> = ks
                    .clone()
                    .map(|k| strata.get(&StratumKey::WeightEquals(2 * k)).cloned().unwrap_or_default())
                    .collect();
                let rhs: Vec<BigUint> =
                    ks.map(|k| binom(ni - 2 - 2 * k as i64, ri - 2 * k as i64) * pow2(n - r)).collect();
                Ok(w.compare(Quantity::list(lhs), Quantity::list(rhs)))
            })()));

            let even = VerificationReport::new("strata.even-weight", &params, Claim::EvenWeightCount);
            out.push(even.clone().or_error((|| {
                let even_count =
                    enumerator.count(Family::Square, n, r, &ClassFilter::any().with_parity(Parity::Even))?;
                Ok(even.compare(Quantity::int(eval_t(n, r)?), Quantity::int(BigInt::from(even_count) - signed_unit(r))))
            })()));
            out
        })
    }

    /// Round trips and image-set equality for the board map and the
    /// domino/square map, for all `m <= m_max`.
    pub fn bijections(&self, m_max: usize) -> Vec<VerificationReport> {
        let enumerator = Enumerator::new().with_limits(m_max.max(1), m_max.max(1));
        let tasks: Vec<(usize, usize)> = (1..=m_max).flat_map(|m| (0..=(m - 1) / 2).map(move |r| (m, r))).collect();
        self.run(tasks, |&(m, r)| {
            let params = [("m", m), ("r", r)];
            let mut out = Vec::with_capacity(2);
            let b = VerificationReport::new("bijection.boards", &params, Claim::BoardBijection);
            out.push(b.clone().or_error(check_board_bijection(&enumerator, b, m, r)));
            if 2 * r + 2 <= m {
                let d = VerificationReport::new("bijection.domino-square", &params, Claim::DominoSquareBijection);
                out.push(d.clone().or_error(check_domino_square_bijection(&enumerator, d, m, r)));
            }
            out
        })
    }

    pub fn auxiliary(&self, limits: &AuxLimits) -> Vec<VerificationReport> {
        #[derive(Clone, Copy)]
        enum Task {
            Moriarty(usize, usize),
            Companion(usize, usize),
            Recurrence(usize),
            Series(usize),
            Parity(usize, usize),
        }
        let mut tasks = Vec::new();
        for m in 1..=limits.moriarty_m {
            for r in (0..=m / 2).filter(|&r| r < m) {
                tasks.push(Task::Moriarty(m, r));
            }
        }
        for n in 0..=limits.companion_n {
            for r in 0..=n {
                tasks.push(Task::Companion(n, r));
            }
        }
        tasks.extend((1..=limits.recurrence_n).map(Task::Recurrence));
        tasks.extend((0..=limits.gf_r).filter(|r| 2 * r + 2 <= limits.gf_m).map(Task::Series));
        for m in 2..=limits.parity_m {
            for r in 0..=(m - 2) / 2 {
                tasks.push(Task::Parity(m, r));
            }
        }
        let gf_m = limits.gf_m;
        self.run(tasks, move |&task| match task {
            Task::Moriarty(m, r) => {
                let rep = VerificationReport::new("aux.moriarty", &[("m", m), ("r", r)], Claim::Moriarty);
                vec![rep
                    .clone()
                    .or_error(moriarty(m, r).map(|(l, rh)| rep.compare(Quantity::int(l), Quantity::int(rh))))]
            }
            Task::Companion(n, r) => {
                let rep = VerificationReport::new("aux.companion", &[("n", n), ("r", r)], Claim::Companion);
                vec![rep
                    .clone()
                    .or_error(companion_identity(n, r).map(|(l, rh)| rep.compare(Quantity::int(l), Quantity::int(rh))))]
            }
            Task::Recurrence(n) => {
                let rep = VerificationReport::new("aux.recurrence", &[("n", n)], Claim::Recurrence);
                vec![rep
                    .clone()
                    .or_error(recurrence_residual(n).map(|res| rep.compare(Quantity::Int(res), Quantity::int(0))))]
            }
            Task::Series(r) => {
                let rep = VerificationReport::new(
                    "aux.generating-function",
                    &[("m_max", gf_m), ("r", r)],
                    Claim::GeneratingFunction,
                );
                vec![rep.clone().or_error(gf_coefficients(r, gf_m).map(|coeffs| {
                    let sums: Vec<BigUint> = (0..=gf_m).map(|m| eval_s(m, r)).collect();
                    rep.compare(Quantity::list(coeffs), Quantity::list(sums))
                }))]
            }
            Task::Parity(m, r) => {
                let params = [("m", m), ("r", r)];
                let s = eval_s(m, r);
                let odd = VerificationReport::new("aux.oddness", &params, Claim::Oddness);
                let odd = odd.compare(Quantity::int(&s % 2u32), Quantity::int(1));
                let div = VerificationReport::new("aux.divisibility", &params, Claim::Divisibility);
                let shifted = BigInt::from(s) + signed_unit(r);
                let modulus = BigInt::from(pow2(m - 1 - 2 * r));
                let residue = ((&shifted % &modulus) + &modulus) % &modulus;
                let div = div.compare(Quantity::Int(residue), Quantity::int(0));
                let div = match oddness_and_divisibility(m, r) {
                    Ok(p)
                        if p.is_odd == (odd.status == Status::Pass)
                            && p.divisibility_ok == (div.status == Status::Pass) =>
                    {
                        div
                    }
                    Ok(_) => div.fail("oddness_and_divisibility disagrees with direct check"),
                    Err(e) => div.fail(format!("error: {e}")),
                };
                vec![odd, div]
            }
        })
    }

    pub fn all(&self, limits: &Limits) -> Vec<VerificationReport> {
        let mut out = self.theorem(limits.m_max, limits.enum_limit);
        out.extend(self.bijections(limits.bijection_m));
        out.extend(self.lemma(limits.n_max));
        out.extend(self.strata(limits.n_max));
        out.extend(self.auxiliary(&limits.aux));
        sort_reports(&mut out);
        out
    }
}

pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| a.check_name.cmp(&b.check_name).then_with(|| a.params.cmp(&b.params)));
}

pub fn verify_theorem(m_max: usize, enum_limit: usize) -> Vec<VerificationReport> {
    Verifier::default().theorem(m_max, enum_limit)
}

pub fn verify_lemma(n_max: usize) -> Vec<VerificationReport> {
    Verifier::default().lemma(n_max)
}

pub fn verify_strata(n_max: usize) -> Vec<VerificationReport> {
    Verifier::default().strata(n_max)
}

pub fn verify_bijections(m_max: usize) -> Vec<VerificationReport> {
    Verifier::default().bijections(m_max)
}

pub fn verify_auxiliary(limits: &AuxLimits) -> Vec<VerificationReport> {
    Verifier::default().auxiliary(limits)
}

fn stratum_report(
    enumerator: &Enumerator,
    report: VerificationReport,
    (n, r): (usize, usize),
    kind: StratumKind,
    expected: impl Iterator<Item = (StratumKey, BigUint)>,
) -> Result<VerificationReport> {
    let strata = enumerator.stratify(n, r, kind)?;
    let expected: Vec<(StratumKey, BigUint)> = expected.collect();
    let keys: BTreeSet<StratumKey> = expected.iter().map(|(k, _)| *k).collect();
    let lhs: Vec<BigUint> = expected.iter().map(|(k, _)| strata.get(k).cloned().unwrap_or_default()).collect();
    let rhs: Vec<BigUint> = expected.into_iter().map(|(_, v)| v).collect();
    let report = report.compare(Quantity::list(lhs), Quantity::list(rhs));
    match strata.keys().find(|k| !keys.contains(k)) {
        Some(stray) if report.status == Status::Pass => Ok(report.fail(format!("unexpected stratum {stray:?}"))),
        _ => Ok(report),
    }
}

struct InvolutionCheck {
    domain: usize,
    paired: usize,
    exceptions: Vec<String>,
    failure: Option<String>,
}

impl InvolutionCheck {
    fn into_report(self, report: VerificationReport) -> VerificationReport {
        let report = report
            .values(Quantity::int(self.domain as u64), Quantity::int((self.paired + self.exceptions.len()) as u64));
        if let Some(f) = self.failure {
            return report.fail(f);
        }
        if self.exceptions.len() != 1 {
            return report.fail(format!("expected one exceptional arrangement, found {:?}", self.exceptions));
        }
        if self.domain != self.paired + 1 {
            return report.fail("not every domain element was paired or exceptional");
        }
        report.note(format!("exception {}", self.exceptions[0]))
    }
}

fn check_involution(enumerator: &Enumerator, n: usize, r: usize) -> Result<InvolutionCheck> {
    let expected_exception = if r % 2 == 1 { epsilon_plus(n, r)? } else { epsilon_minus(n, r)? };
    let mut check = InvolutionCheck { domain: 0, paired: 0, exceptions: Vec::new(), failure: None };
    let mut first_error: Option<crate::Error> = None;
    enumerator.for_each_square(n, r, |cells| {
        if check.failure.is_some() || first_error.is_some() {
            return;
        }
        let arr = SquareArrangement::new(cells.to_vec()).expect("enumerated arrangement is valid");
        let outcome = match conjugate(&arr) {
            Ok(o) => o,
            Err(e) => {
                first_error = Some(e);
                return;
            }
        };
        match outcome {
            ConjugationOutcome::OutsideDomain => {}
            ConjugationOutcome::Exceptional(_) => {
                check.domain += 1;
                if arr != expected_exception {
                    check.failure = Some(format!("{arr} reported exceptional, expected {expected_exception}"));
                }
                check.exceptions.push(arr.encode());
            }
            ConjugationOutcome::Conjugate(image) => {
                check.domain += 1;
                let preserved = image.len() == n && image.blacks() == r;
                let parity = image.weight().parity() != arr.weight().parity();
                let sign = image.sign_class() != arr.sign_class();
                let back = conjugate(&image);
                if !preserved || !parity || !sign {
                    check.failure = Some(format!("{arr} -> {image} breaks n/r preservation or parity/sign flip"));
                } else if back != Ok(ConjugationOutcome::Conjugate(arr.clone())) {
                    check.failure = Some(format!("{arr} -> {image} -> {back:?} is not an involution"));
                } else {
                    check.paired += 1;
                }
            }
        }
    })?;
    match first_error {
        Some(e) => Err(e),
        None => Ok(check),
    }
}

fn check_board_bijection(
    enumerator: &Enumerator,
    report: VerificationReport,
    m: usize,
    r: usize,
) -> Result<VerificationReport> {
    let boards = enumerate_boards(m, r);
    let targets = enumerator.domino(m, r, &ClassFilter::sign(SignClass::Plus))?;
    let mut images = Vec::with_capacity(boards.len());
    for board in &boards {
        let image = board_to_domino(board)?;
        if domino_to_board(&image)? != *board {
            return Ok(report.fail(format!("board {} does not round-trip", board.to_json())));
        }
        images.push(image);
    }
    for target in &targets {
        if board_to_domino(&domino_to_board(target)?)? != *target {
            return Ok(report.fail(format!("{target} does not round-trip")));
        }
    }
    Ok(image_set_report(report, images, &targets))
}

fn check_domino_square_bijection(
    enumerator: &Enumerator,
    report: VerificationReport,
    m: usize,
    r: usize,
) -> Result<VerificationReport> {
    let plus = ClassFilter::sign(SignClass::Plus);
    let sources = enumerator.domino(m, r, &plus)?;
    let targets = enumerator.square(m - 1 - r, r, &plus)?;
    let mut images = Vec::with_capacity(sources.len());
    for source in &sources {
        let image = domino_to_square(source)?;
        if square_to_domino(&image)? != *source {
            return Ok(report.fail(format!("{source} does not round-trip")));
        }
        images.push(image);
    }
    for target in &targets {
        let back: DominoArrangement = square_to_domino(target)?;
        if domino_to_square(&back)? != *target {
            return Ok(report.fail(format!("{target} does not round-trip")));
        }
    }
    Ok(image_set_report(report, images, &targets))
}

/// Injective and onto: the sorted images have no repeats and equal the
/// enumerated target set.
fn image_set_report<T: Ord + fmt::Display>(
    report: VerificationReport,
    mut images: Vec<T>,
    targets: &[T],
) -> VerificationReport {
    let sources = images.len();
    images.sort();
    let report = report.values(Quantity::int(sources as u64), Quantity::int(targets.len() as u64));
    if let Some(w) = images.windows(2).find(|w| w[0] == w[1]) {
        return report.fail(format!("two sources map to {}", w[0]));
    }
    if images != targets {
        let missing = targets.iter().find(|t| images.binary_search(t).is_err());
        return match missing {
            Some(t) => report.fail(format!("{t} is not hit")),
            None => report.fail("image set differs from target set"),
        };
    }
    report
}
