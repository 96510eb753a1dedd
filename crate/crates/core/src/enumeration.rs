//! Exhaustive generation of both arrangement families.
//!
//! This is the brute-force side of every check: arrangements are built cell
//! by cell (tile by tile for dominoes), pruning only on the black/domino
//! budget, and classified afterwards. No counting shortcuts live here.
//!
//! Output is always in canonical (lexicographic encoding) order. With more
//! than one job the prefix space is split across a rayon pool and the
//! per-prefix results are concatenated in prefix order, which reproduces the
//! sequential order exactly.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::arrangements::{
    domino_sign, square_sign, square_weight, DominoArrangement, Parity, SignClass, SquareArrangement, SquareKind,
    TileKind,
};
use crate::error::{Error, Result};
use crate::BigCount;

pub const DEFAULT_MAX_DOMINO_CELLS: usize = 24;
pub const DEFAULT_MAX_SQUARE_CELLS: usize = 16;
/// Overrides both size guards when set to a positive integer.
pub const MAX_CELLS_ENV: &str = "LASTSQ_MAX_CELLS";

const PREFIX_DEPTH: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Dominoes plus black/white squares, first cell black.
    Domino,
    /// White/black/decorated squares, last cell not black.
    Square,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D" | "d" | "domino" => Ok(Family::Domino),
            "B" | "b" | "square" => Ok(Family::Square),
            other => Err(Error::range(format!("unknown family {other:?} (expected D or B)"))),
        }
    }
}

/// Optional restrictions on sign class and weight. Weight constraints only
/// apply to square arrangements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassFilter {
    pub sign: Option<SignClass>,
    pub weight_parity: Option<Parity>,
    pub exact_weight: Option<usize>,
}

impl ClassFilter {
    pub fn any() -> Self {
        Self::default()
    }

    pub fn sign(sign: SignClass) -> Self {
        ClassFilter { sign: Some(sign), ..Self::default() }
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.weight_parity = Some(parity);
        self
    }

    pub fn with_weight(mut self, weight: usize) -> Self {
        self.exact_weight = Some(weight);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let (Some(k), Some(p)) = (self.exact_weight, self.weight_parity) {
            if Parity::of(k) != p {
                return Err(Error::InconsistentFilter(format!("weight {k} does not have {p:?} parity")));
            }
        }
        Ok(())
    }

    fn constrains_weight(&self) -> bool {
        self.weight_parity.is_some() || self.exact_weight.is_some()
    }

    fn accepts_squares(&self, cells: &[SquareKind]) -> bool {
        if let Some(s) = self.sign {
            if square_sign(cells) != s {
                return false;
            }
        }
        if self.constrains_weight() {
            let w = square_weight(cells);
            if self.weight_parity.is_some_and(|p| w.parity() != p) {
                return false;
            }
            if self.exact_weight.is_some_and(|k| w.value() != k) {
                return false;
            }
        }
        true
    }

    fn accepts_tiles(&self, tiles: &[TileKind]) -> bool {
        self.sign.is_none_or(|s| domino_sign(tiles) == s)
    }
}

/// Classifying statistic on square arrangements, one per counting argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StratumKey {
    /// Plus class, last decorated cell at position `j`.
    LastDecoratedAt(usize),
    /// Plus class, last black cell at position `n - j` (`j = n` when there is none).
    LastBlackAt(usize),
    /// Whole family, weight equal to the value.
    WeightEquals(usize),
    /// Plus class, `j` non-white cells.
    NonWhiteCount(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StratumKind {
    LastDecorated,
    LastBlack,
    Weight,
    NonWhite,
}

impl StratumKind {
    fn key(self, cells: &[SquareKind]) -> Option<StratumKey> {
        let n = cells.len();
        if self != StratumKind::Weight && square_sign(cells) != SignClass::Plus {
            return None;
        }
        Some(match self {
            StratumKind::LastDecorated => {
                let p = cells.iter().rposition(|&c| c == SquareKind::Decorated)?;
                StratumKey::LastDecoratedAt(p + 1)
            }
            StratumKind::LastBlack => {
                let p = cells.iter().rposition(|&c| c == SquareKind::Black).map_or(0, |p| p + 1);
                StratumKey::LastBlackAt(n - p)
            }
            StratumKind::Weight => StratumKey::WeightEquals(square_weight(cells).value()),
            StratumKind::NonWhite => {
                StratumKey::NonWhiteCount(cells.iter().filter(|&&c| c != SquareKind::White).count())
            }
        })
    }
}

/// Enumeration settings: size guards and worker count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Enumerator {
    max_domino_cells: usize,
    max_square_cells: usize,
    jobs: usize,
}

impl Default for Enumerator {
    fn default() -> Self {
        let override_cells =
            std::env::var(MAX_CELLS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&v| v > 0);
        Enumerator {
            max_domino_cells: override_cells.unwrap_or(DEFAULT_MAX_DOMINO_CELLS),
            max_square_cells: override_cells.unwrap_or(DEFAULT_MAX_SQUARE_CELLS),
            jobs: 1,
        }
    }
}

impl Enumerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_limits(mut self, max_domino_cells: usize, max_square_cells: usize) -> Self {
        self.max_domino_cells = max_domino_cells;
        self.max_square_cells = max_square_cells;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    fn check_domino(&self, m: usize, r: usize) -> Result<()> {
        if m == 0 || 2 * r + 1 > m {
            return Err(Error::range(format!("domino family needs m >= 1 and 2r <= m-1, got m={m}, r={r}")));
        }
        if m > self.max_domino_cells {
            return Err(Error::SizeLimitExceeded { size: m, limit: self.max_domino_cells });
        }
        Ok(())
    }

    fn check_square(&self, n: usize, r: usize) -> Result<()> {
        if n == 0 || r >= n {
            return Err(Error::range(format!("square family needs n >= 1 and r <= n-1, got n={n}, r={r}")));
        }
        if n > self.max_square_cells {
            return Err(Error::SizeLimitExceeded { size: n, limit: self.max_square_cells });
        }
        Ok(())
    }

    /// Members of `D_{m,r}` passing `filter`, in canonical order.
    pub fn domino(&self, m: usize, r: usize, filter: &ClassFilter) -> Result<Vec<DominoArrangement>> {
        self.domino_filter(filter)?;
        self.check_domino(m, r)?;
        let chunks = self.split(domino_prefixes(m, r, self.prefix_depth()), |prefix| {
            let mut out = Vec::new();
            walk_dominoes(&mut prefix.to_vec(), m, r, &mut |tiles| {
                if filter.accepts_tiles(tiles) {
                    out.push(DominoArrangement::new(tiles.to_vec()).expect("walker keeps first tile black"));
                }
            });
            out
        });
        Ok(chunks.into_iter().flatten().collect())
    }

    /// Members of `B_{n,r}` passing `filter`, in canonical order.
    pub fn square(&self, n: usize, r: usize, filter: &ClassFilter) -> Result<Vec<SquareArrangement>> {
        filter.validate()?;
        self.check_square(n, r)?;
        let chunks = self.split(square_prefixes(n, r, self.prefix_depth()), |prefix| {
            let mut out = Vec::new();
            walk_squares(&mut prefix.to_vec(), n, r, &mut |cells| {
                if filter.accepts_squares(cells) {
                    out.push(SquareArrangement::new(cells.to_vec()).expect("walker keeps last cell non-black"));
                }
            });
            out
        });
        Ok(chunks.into_iter().flatten().collect())
    }

    pub fn count(&self, family: Family, size: usize, r: usize, filter: &ClassFilter) -> Result<BigCount> {
        let total: u64 = match family {
            Family::Domino => {
                self.domino_filter(filter)?;
                self.check_domino(size, r)?;
                self.split(domino_prefixes(size, r, self.prefix_depth()), |prefix| {
                    let mut c = 0u64;
                    walk_dominoes(&mut prefix.to_vec(), size, r, &mut |tiles| {
                        c += u64::from(filter.accepts_tiles(tiles));
                    });
                    c
                })
                .into_iter()
                .sum()
            }
            Family::Square => {
                filter.validate()?;
                self.check_square(size, r)?;
                self.split(square_prefixes(size, r, self.prefix_depth()), |prefix| {
                    let mut c = 0u64;
                    walk_squares(&mut prefix.to_vec(), size, r, &mut |cells| {
                        c += u64::from(filter.accepts_squares(cells));
                    });
                    c
                })
                .into_iter()
                .sum()
            }
        };
        Ok(BigUint::from(total))
    }

    /// Counts the scoped part of `B_{n,r}` by the statistic `kind`. Every
    /// kind except [`StratumKind::Weight`] is scoped to the plus class.
    pub fn stratify(&self, n: usize, r: usize, kind: StratumKind) -> Result<BTreeMap<StratumKey, BigCount>> {
        self.check_square(n, r)?;
        let partials = self.split(square_prefixes(n, r, self.prefix_depth()), |prefix| {
            let mut counts: BTreeMap<StratumKey, u64> = BTreeMap::new();
            walk_squares(&mut prefix.to_vec(), n, r, &mut |cells| {
                if let Some(key) = kind.key(cells) {
                    *counts.entry(key).or_default() += 1;
                }
            });
            counts
        });
        let mut merged: BTreeMap<StratumKey, u64> = BTreeMap::new();
        for part in partials {
            for (k, v) in part {
                *merged.entry(k).or_default() += v;
            }
        }
        Ok(merged.into_iter().map(|(k, v)| (k, BigUint::from(v))).collect())
    }

    /// Sequential visit of every member of `B_{n,r}` in canonical order.
    pub fn for_each_square(&self, n: usize, r: usize, mut visit: impl FnMut(&[SquareKind])) -> Result<()> {
        self.check_square(n, r)?;
        walk_squares(&mut Vec::with_capacity(n), n, r, &mut visit);
        Ok(())
    }

    /// Sequential visit of every member of `D_{m,r}` in canonical order.
    pub fn for_each_domino(&self, m: usize, r: usize, mut visit: impl FnMut(&[TileKind])) -> Result<()> {
        self.check_domino(m, r)?;
        walk_dominoes(&mut vec![TileKind::BlackSquare], m, r, &mut visit);
        Ok(())
    }

    fn domino_filter(&self, filter: &ClassFilter) -> Result<()> {
        if filter.constrains_weight() {
            return Err(Error::InconsistentFilter("weight filters apply only to square arrangements".into()));
        }
        Ok(())
    }

    fn prefix_depth(&self) -> usize {
        if self.jobs > 1 {
            PREFIX_DEPTH
        } else {
            0
        }
    }

    fn split<P, T, F>(&self, prefixes: Vec<Vec<P>>, work: F) -> Vec<T>
    where
        P: Sync,
        T: Send,
        F: Fn(&[P]) -> T + Sync,
    {
        if self.jobs <= 1 || prefixes.len() <= 1 {
            return prefixes.iter().map(|p| work(p)).collect();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build() {
            Ok(pool) => pool.install(|| prefixes.par_iter().map(|p| work(p)).collect()),
            Err(_) => prefixes.iter().map(|p| work(p)).collect(),
        }
    }
}

pub fn enumerate_d(m: usize, r: usize, filter: &ClassFilter) -> Result<Vec<DominoArrangement>> {
    Enumerator::default().domino(m, r, filter)
}

pub fn enumerate_b(n: usize, r: usize, filter: &ClassFilter) -> Result<Vec<SquareArrangement>> {
    Enumerator::default().square(n, r, filter)
}

pub fn count(family: Family, size: usize, r: usize, filter: &ClassFilter) -> Result<BigCount> {
    Enumerator::default().count(family, size, r, filter)
}

pub fn stratify(n: usize, r: usize, kind: StratumKind) -> Result<BTreeMap<StratumKey, BigCount>> {
    Enumerator::default().stratify(n, r, kind)
}

/// Can `blacks` black cells still fit in `cells` remaining cells, given the
/// final cell may not be black?
fn squares_feasible(blacks: usize, cells: usize) -> bool {
    if cells == 0 {
        blacks == 0
    } else {
        blacks < cells
    }
}

fn walk_squares(buf: &mut Vec<SquareKind>, n: usize, r: usize, visit: &mut impl FnMut(&[SquareKind])) {
    let placed = buf.iter().filter(|&&c| c == SquareKind::Black).count();
    walk_squares_inner(buf, n, r - placed, n, visit);
}

fn walk_squares_inner(
    buf: &mut Vec<SquareKind>,
    n: usize,
    blacks_left: usize,
    stop_at: usize,
    visit: &mut impl FnMut(&[SquareKind]),
) {
    if buf.len() == stop_at {
        visit(buf);
        return;
    }
    let remaining = n - buf.len();
    for kind in SquareKind::ALL {
        let left = if kind == SquareKind::Black {
            if blacks_left == 0 {
                continue;
            }
            blacks_left - 1
        } else {
            blacks_left
        };
        if !squares_feasible(left, remaining - 1) || (kind == SquareKind::Black && remaining == 1) {
            continue;
        }
        buf.push(kind);
        walk_squares_inner(buf, n, left, stop_at, visit);
        buf.pop();
    }
}

fn square_prefixes(n: usize, r: usize, depth: usize) -> Vec<Vec<SquareKind>> {
    let mut out = Vec::new();
    walk_squares_inner(&mut Vec::new(), n, r, depth.min(n), &mut |p| out.push(p.to_vec()));
    out
}

fn walk_dominoes(buf: &mut Vec<TileKind>, m: usize, r: usize, visit: &mut impl FnMut(&[TileKind])) {
    let used: usize = buf.iter().map(|t| t.width()).sum();
    let placed = buf.iter().filter(|&&t| t == TileKind::Domino).count();
    walk_dominoes_inner(buf, m - used, r - placed, usize::MAX, visit);
}

fn walk_dominoes_inner(
    buf: &mut Vec<TileKind>,
    cells_left: usize,
    dominoes_left: usize,
    stop_at: usize,
    visit: &mut impl FnMut(&[TileKind]),
) {
    if cells_left == 0 || buf.len() == stop_at {
        visit(buf);
        return;
    }
    for tile in TileKind::ALL {
        let width = tile.width();
        if width > cells_left {
            continue;
        }
        let left = if tile == TileKind::Domino {
            if dominoes_left == 0 {
                continue;
            }
            dominoes_left - 1
        } else {
            dominoes_left
        };
        if 2 * left > cells_left - width {
            continue;
        }
        buf.push(tile);
        walk_dominoes_inner(buf, cells_left - width, left, stop_at, visit);
        buf.pop();
    }
}

fn domino_prefixes(m: usize, r: usize, depth: usize) -> Vec<Vec<TileKind>> {
    let mut out = Vec::new();
    walk_dominoes_inner(&mut vec![TileKind::BlackSquare], m - 1, r, depth.max(1), &mut |p| out.push(p.to_vec()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::binom;

    fn encodings<T: ToString>(v: &[T]) -> Vec<String> {
        v.iter().map(|a| a.to_string()).collect()
    }

    fn big(v: u64) -> BigCount {
        BigUint::from(v)
    }

    #[test]
    fn domino_examples() {
        assert_eq!(encodings(&enumerate_d(2, 0, &ClassFilter::any()).unwrap()), ["bb", "bw"]);
        let plus = ClassFilter::sign(SignClass::Plus);
        assert_eq!(encodings(&enumerate_d(4, 1, &plus).unwrap()), ["bdw"]);
        assert_eq!(enumerate_d(6, 1, &plus).unwrap().len(), 17);
        assert_eq!(enumerate_d(1, 0, &ClassFilter::any()).unwrap().len(), 1);
    }

    #[test]
    fn square_examples() {
        assert_eq!(enumerate_b(2, 0, &ClassFilter::any()).unwrap().len(), 4);
        let plus = ClassFilter::sign(SignClass::Plus);
        assert_eq!(encodings(&enumerate_b(2, 0, &plus).unwrap()), ["tt", "tw", "wt"]);
        assert_eq!(enumerate_b(4, 1, &plus).unwrap().len(), 17);
    }

    #[test]
    fn count_examples() {
        let f = ClassFilter::sign(SignClass::Plus).with_parity(Parity::Odd);
        assert_eq!(count(Family::Square, 2, 1, &f).unwrap(), big(1));
        let f = ClassFilter::sign(SignClass::Minus).with_parity(Parity::Even);
        assert_eq!(count(Family::Square, 2, 1, &f).unwrap(), big(0));
        for m in 1..=12u32 {
            assert_eq!(count(Family::Domino, m as usize, 0, &ClassFilter::any()).unwrap(), big(1 << (m - 1)));
        }
    }

    #[test]
    fn stratify_examples() {
        let u = stratify(4, 1, StratumKind::LastDecorated).unwrap();
        let expect: BTreeMap<_, _> =
            [(2, 1), (3, 4), (4, 12)].into_iter().map(|(j, c)| (StratumKey::LastDecoratedAt(j), big(c))).collect();
        assert_eq!(u, expect);

        let v = stratify(4, 1, StratumKind::LastBlack).unwrap();
        let expect: BTreeMap<_, _> =
            [(1, 4), (2, 6), (3, 7)].into_iter().map(|(j, c)| (StratumKey::LastBlackAt(j), big(c))).collect();
        assert_eq!(v, expect);

        let w = stratify(4, 2, StratumKind::Weight).unwrap();
        assert_eq!(w[&StratumKey::WeightEquals(0)], big(4));
        assert_eq!(w[&StratumKey::WeightEquals(2)], big(4));
        let total: BigCount = w.values().sum();
        assert_eq!(total, count(Family::Square, 4, 2, &ClassFilter::any()).unwrap());
    }

    #[test]
    fn guards_and_preconditions() {
        let e = Enumerator::new().with_limits(24, 16);
        assert!(matches!(e.square(17, 1, &ClassFilter::any()), Err(Error::SizeLimitExceeded { size: 17, limit: 16 })));
        assert!(matches!(e.count(Family::Domino, 25, 0, &ClassFilter::any()), Err(Error::SizeLimitExceeded { .. })));
        assert!(matches!(e.square(3, 3, &ClassFilter::any()), Err(Error::Range(_))));
        assert!(matches!(e.domino(4, 2, &ClassFilter::any()), Err(Error::Range(_))));
        assert!(matches!(e.domino(0, 0, &ClassFilter::any()), Err(Error::Range(_))));
        let bad = ClassFilter::any().with_parity(Parity::Odd).with_weight(2);
        assert!(matches!(e.square(4, 2, &bad), Err(Error::InconsistentFilter(_))));
        let weighted = ClassFilter::any().with_weight(0);
        assert!(matches!(e.domino(4, 1, &weighted), Err(Error::InconsistentFilter(_))));
    }

    #[test]
    fn totals_match_free_placement_counts() {
        // |B_{n,r}| = C(n-1,r) 2^{n-r}; |D_{m,r}| = C(m-1-r,r) 2^{m-1-2r}.
        for n in 1..=10usize {
            for r in 0..n {
                let got = count(Family::Square, n, r, &ClassFilter::any()).unwrap();
                let want = binom((n - 1) as i64, r as i64) << (n - r);
                assert_eq!(got, want, "B n={n} r={r}");
            }
        }
        for m in 1..=14usize {
            for r in 0..=(m - 1) / 2 {
                let got = count(Family::Domino, m, r, &ClassFilter::any()).unwrap();
                let want = binom((m - 1 - r) as i64, r as i64) << (m - 1 - 2 * r);
                assert_eq!(got, want, "D m={m} r={r}");
            }
        }
    }

    #[test]
    fn canonical_order_and_no_duplicates() {
        for n in 1..=8 {
            for r in 0..n {
                let enc = encodings(&enumerate_b(n, r, &ClassFilter::any()).unwrap());
                assert!(enc.windows(2).all(|w| w[0] < w[1]), "n={n} r={r}");
            }
        }
        for m in 1..=10 {
            for r in 0..=(m - 1) / 2 {
                let enc = encodings(&enumerate_d(m, r, &ClassFilter::any()).unwrap());
                assert!(enc.windows(2).all(|w| w[0] < w[1]), "m={m} r={r}");
            }
        }
    }

    #[test]
    fn sign_classes_partition_both_families() {
        let plus = ClassFilter::sign(SignClass::Plus);
        let minus = ClassFilter::sign(SignClass::Minus);
        for n in 1..=9 {
            for r in 0..n {
                let all = count(Family::Square, n, r, &ClassFilter::any()).unwrap();
                let split = count(Family::Square, n, r, &plus).unwrap() + count(Family::Square, n, r, &minus).unwrap();
                assert_eq!(all, split);
            }
        }
        for m in 1..=12 {
            for r in 0..=(m - 1) / 2 {
                let all = count(Family::Domino, m, r, &ClassFilter::any()).unwrap();
                let split = count(Family::Domino, m, r, &plus).unwrap() + count(Family::Domino, m, r, &minus).unwrap();
                assert_eq!(all, split);
            }
        }
    }

    #[test]
    fn strata_partition_their_scope() {
        let plus = ClassFilter::sign(SignClass::Plus);
        for n in 1..=9 {
            for r in 0..n {
                let plus_total = count(Family::Square, n, r, &plus).unwrap();
                for kind in [StratumKind::LastDecorated, StratumKind::LastBlack, StratumKind::NonWhite] {
                    let s: BigCount = stratify(n, r, kind).unwrap().values().sum();
                    assert_eq!(s, plus_total, "{kind:?} n={n} r={r}");
                }
                let all = count(Family::Square, n, r, &ClassFilter::any()).unwrap();
                let w: BigCount = stratify(n, r, StratumKind::Weight).unwrap().values().sum();
                assert_eq!(w, all);
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let seq = Enumerator::new();
        let par = Enumerator::new().with_jobs(4);
        let plus = ClassFilter::sign(SignClass::Plus);
        for n in [1, 2, 5, 9, 11] {
            for r in [0, n / 3, n - 1] {
                assert_eq!(seq.square(n, r, &plus).unwrap(), par.square(n, r, &plus).unwrap());
                assert_eq!(
                    seq.stratify(n, r, StratumKind::LastBlack).unwrap(),
                    par.stratify(n, r, StratumKind::LastBlack).unwrap()
                );
            }
        }
        for m in [1, 2, 7, 13] {
            for r in [0, (m - 1) / 2] {
                assert_eq!(seq.domino(m, r, &plus).unwrap(), par.domino(m, r, &plus).unwrap());
                assert_eq!(
                    seq.count(Family::Domino, m, r, &plus).unwrap(),
                    par.count(Family::Domino, m, r, &plus).unwrap()
                );
            }
        }
    }

    #[test]
    fn encoding_round_trips_exhaustively() {
        for n in 1..=12 {
            for r in 0..n {
                Enumerator::new()
                    .for_each_square(n, r, |cells| {
                        let a = SquareArrangement::new(cells.to_vec()).unwrap();
                        assert_eq!(SquareArrangement::decode(&a.encode()).unwrap(), a);
                    })
                    .unwrap();
            }
        }
        for m in 1..=12 {
            for r in 0..=(m - 1) / 2 {
                Enumerator::new()
                    .for_each_domino(m, r, |tiles| {
                        let a = DominoArrangement::new(tiles.to_vec()).unwrap();
                        assert_eq!(DominoArrangement::decode(&a.encode()).unwrap(), a);
                    })
                    .unwrap();
            }
        }
    }
}
