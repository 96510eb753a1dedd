//! The two tiling families.
//!
//! A [`DominoArrangement`] covers a `1 x m` board with black squares, white
//! squares and dominoes (white half on the left, black half on the right),
//! and always starts with a black square. A [`SquareArrangement`] covers a
//! `1 x n` board with white, black and decorated squares and never ends
//! with a black square.
//!
//! Both families have a canonical one-character-per-tile text encoding. The
//! derived `Ord` of every type here agrees with the byte order of that
//! encoding, so sorting values and sorting their encodings give the same
//! sequence.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A tile of a domino arrangement. Variant order matches the encoding
/// characters `b < d < w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TileKind {
    BlackSquare,
    Domino,
    WhiteSquare,
}

impl TileKind {
    pub const ALL: [TileKind; 3] = [TileKind::BlackSquare, TileKind::Domino, TileKind::WhiteSquare];

    /// Number of board cells covered by the tile.
    pub fn width(self) -> usize {
        match self {
            TileKind::Domino => 2,
            TileKind::BlackSquare | TileKind::WhiteSquare => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            TileKind::BlackSquare => 'b',
            TileKind::Domino => 'd',
            TileKind::WhiteSquare => 'w',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'b' => Some(TileKind::BlackSquare),
            'd' => Some(TileKind::Domino),
            'w' => Some(TileKind::WhiteSquare),
            _ => None,
        }
    }
}

/// A cell of a square arrangement. Variant order matches the encoding
/// characters `b < t < w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareKind {
    Black,
    Decorated,
    White,
}

impl SquareKind {
    pub const ALL: [SquareKind; 3] = [SquareKind::Black, SquareKind::Decorated, SquareKind::White];

    pub fn symbol(self) -> char {
        match self {
            SquareKind::Black => 'b',
            SquareKind::Decorated => 't',
            SquareKind::White => 'w',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'b' => Some(SquareKind::Black),
            't' => Some(SquareKind::Decorated),
            'w' => Some(SquareKind::White),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    Plus,
    Minus,
}

impl SignClass {
    pub fn flipped(self) -> Self {
        match self {
            SignClass::Plus => SignClass::Minus,
            SignClass::Minus => SignClass::Plus,
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignClass::Plus => "plus",
            SignClass::Minus => "minus",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: usize) -> Self {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Length of the run of black squares ending at the second-to-last cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub usize);

impl Weight {
    pub fn value(self) -> usize {
        self.0
    }

    pub fn parity(self) -> Parity {
        Parity::of(self.0)
    }
}

fn parse_symbols<T>(text: &str, from_symbol: impl Fn(char) -> Option<T>) -> Result<Vec<T>> {
    text.char_indices()
        .map(|(offset, c)| {
            from_symbol(c).ok_or_else(|| Error::Parse { offset, message: format!("unexpected character {c:?}") })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DominoArrangement {
    tiles: Vec<TileKind>,
}

impl DominoArrangement {
    /// Checks the family invariants: non-empty, first tile a black square.
    pub fn new(tiles: Vec<TileKind>) -> Result<Self> {
        match tiles.first() {
            None => Err(Error::EmptyBoard),
            Some(TileKind::BlackSquare) => Ok(DominoArrangement { tiles }),
            Some(_) => Err(Error::FirstCellNotBlack),
        }
    }

    pub fn tiles(&self) -> &[TileKind] {
        &self.tiles
    }

    /// Board length `m`.
    pub fn cells(&self) -> usize {
        self.tiles.iter().map(|t| t.width()).sum()
    }

    /// Number of dominoes `r`.
    pub fn dominoes(&self) -> usize {
        self.tiles.iter().filter(|&&t| t == TileKind::Domino).count()
    }

    pub fn sign_class(&self) -> SignClass {
        domino_sign(&self.tiles)
    }

    pub fn encode(&self) -> String {
        self.tiles.iter().map(|t| t.symbol()).collect()
    }

    pub fn decode(text: &str) -> Result<Self> {
        Self::new(parse_symbols(text, TileKind::from_symbol)?)
    }

    /// One-line diagram: `[#]` black, `[ ]` white, `[ |#]` domino.
    pub fn render_ascii(&self) -> String {
        self.tiles
            .iter()
            .map(|t| match t {
                TileKind::BlackSquare => "[#]",
                TileKind::WhiteSquare => "[ ]",
                TileKind::Domino => "[ |#]",
            })
            .collect()
    }
}

impl fmt::Display for DominoArrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl FromStr for DominoArrangement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::decode(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareArrangement {
    cells: Vec<SquareKind>,
}

impl SquareArrangement {
    /// Checks the family invariants: non-empty, last cell not black.
    pub fn new(cells: Vec<SquareKind>) -> Result<Self> {
        match cells.last() {
            None => Err(Error::EmptyBoard),
            Some(SquareKind::Black) => Err(Error::LastCellBlack),
            Some(_) => Ok(SquareArrangement { cells }),
        }
    }

    pub fn cells(&self) -> &[SquareKind] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<SquareKind> {
        self.cells
    }

    /// Board length `n`.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of black cells `r`.
    pub fn blacks(&self) -> usize {
        self.cells.iter().filter(|&&c| c == SquareKind::Black).count()
    }

    pub fn weight(&self) -> Weight {
        square_weight(&self.cells)
    }

    pub fn sign_class(&self) -> SignClass {
        square_sign(&self.cells)
    }

    pub fn encode(&self) -> String {
        self.cells.iter().map(|c| c.symbol()).collect()
    }

    pub fn decode(text: &str) -> Result<Self> {
        Self::new(parse_symbols(text, SquareKind::from_symbol)?)
    }

    /// One-line diagram: `[#]` black, `[ ]` white, `[^]` decorated.
    pub fn render_ascii(&self) -> String {
        self.cells
            .iter()
            .map(|c| match c {
                SquareKind::Black => "[#]",
                SquareKind::White => "[ ]",
                SquareKind::Decorated => "[^]",
            })
            .collect()
    }
}

impl fmt::Display for SquareArrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl FromStr for SquareArrangement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::decode(s)
    }
}

pub fn validate_domino(tiles: Vec<TileKind>) -> Result<DominoArrangement> {
    DominoArrangement::new(tiles)
}

pub fn validate_square(cells: Vec<SquareKind>) -> Result<SquareArrangement> {
    SquareArrangement::new(cells)
}

// Slice-level classifiers, shared with the enumerators so they can classify
// a scratch buffer without building an arrangement first.

pub(crate) fn square_weight(cells: &[SquareKind]) -> Weight {
    let n = cells.len();
    if n < 2 {
        return Weight(0);
    }
    Weight(cells[..n - 1].iter().rev().take_while(|&&c| c == SquareKind::Black).count())
}

pub(crate) fn square_sign(cells: &[SquareKind]) -> SignClass {
    let suffix = match cells.iter().rposition(|&c| c == SquareKind::Black) {
        Some(p) => &cells[p + 1..],
        None => cells,
    };
    if suffix.contains(&SquareKind::Decorated) {
        SignClass::Plus
    } else {
        SignClass::Minus
    }
}

pub(crate) fn domino_sign(tiles: &[TileKind]) -> SignClass {
    let suffix = match tiles.iter().rposition(|&t| t == TileKind::Domino) {
        Some(p) => &tiles[p + 1..],
        None => tiles,
    };
    if suffix.contains(&TileKind::WhiteSquare) {
        SignClass::Plus
    } else {
        SignClass::Minus
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sq(s: &str) -> SquareArrangement {
        s.parse().unwrap()
    }

    fn dom(s: &str) -> DominoArrangement {
        s.parse().unwrap()
    }

    #[test]
    fn validate_domino_examples() {
        use TileKind::*;
        let a = validate_domino(vec![BlackSquare, Domino, WhiteSquare]).unwrap();
        assert_eq!((a.cells(), a.dominoes()), (4, 1));
        let b = validate_domino(vec![BlackSquare, WhiteSquare]).unwrap();
        assert_eq!((b.cells(), b.dominoes()), (2, 0));
        assert_eq!(validate_domino(vec![WhiteSquare, BlackSquare]), Err(Error::FirstCellNotBlack));
        assert_eq!(validate_domino(vec![]), Err(Error::EmptyBoard));
        assert_eq!(validate_domino(vec![Domino]), Err(Error::FirstCellNotBlack));
    }

    #[test]
    fn validate_square_examples() {
        use SquareKind::*;
        let a = validate_square(vec![Black, Decorated]).unwrap();
        assert_eq!((a.len(), a.blacks()), (2, 1));
        let b = validate_square(vec![White, White]).unwrap();
        assert_eq!((b.len(), b.blacks()), (2, 0));
        assert_eq!(validate_square(vec![White, Black]), Err(Error::LastCellBlack));
        assert_eq!(validate_square(vec![]), Err(Error::EmptyBoard));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(sq("wbbw").weight(), Weight(2));
        assert_eq!(sq("tw").weight(), Weight(0));
        assert_eq!(sq("bt").weight(), Weight(1));
        assert_eq!(sq("t").weight(), Weight(0));
        assert_eq!(sq("bwbbt").weight(), Weight(2));
    }

    #[test]
    fn square_sign_examples() {
        assert_eq!(sq("bt").sign_class(), SignClass::Plus);
        assert_eq!(sq("wbbw").sign_class(), SignClass::Minus);
        assert_eq!(sq("ww").sign_class(), SignClass::Minus);
        assert_eq!(sq("tw").sign_class(), SignClass::Plus);
        assert_eq!(sq("tbw").sign_class(), SignClass::Minus);
    }

    #[test]
    fn domino_sign_examples() {
        assert_eq!(dom("bdw").sign_class(), SignClass::Plus);
        assert_eq!(dom("bb").sign_class(), SignClass::Minus);
        assert_eq!(dom("bw").sign_class(), SignClass::Plus);
        assert_eq!(dom("bwdb").sign_class(), SignClass::Minus);
    }

    #[test]
    fn encodings() {
        use TileKind::*;
        assert_eq!(DominoArrangement::new(vec![BlackSquare, Domino, WhiteSquare]).unwrap().encode(), "bdw");
        assert_eq!(sq("bt").cells(), &[SquareKind::Black, SquareKind::Decorated]);
        assert_eq!(
            SquareArrangement::decode("x"),
            Err(Error::Parse { offset: 0, message: "unexpected character 'x'".into() })
        );
        match DominoArrangement::decode("bdwq") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(SquareArrangement::decode(""), Err(Error::EmptyBoard));
    }

    #[test]
    fn rendering() {
        assert_eq!(dom("bdw").render_ascii(), "[#][ |#][ ]");
        assert_eq!(sq("bt").render_ascii(), "[#][^]");
    }

    fn square_strategy() -> impl Strategy<Value = SquareArrangement> {
        (
            prop::collection::vec(prop::sample::select(SquareKind::ALL.to_vec()), 0..14),
            prop::sample::select(vec![SquareKind::White, SquareKind::Decorated]),
        )
            .prop_map(|(mut cells, last)| {
                cells.push(last);
                SquareArrangement::new(cells).unwrap()
            })
    }

    proptest! {
        #[test]
        fn weight_bounded_by_black_count(arr in square_strategy()) {
            let k = arr.weight().value();
            prop_assert!(k <= arr.blacks());
            if k == arr.blacks() && k > 0 {
                let n = arr.len();
                let blacks: Vec<usize> = arr.cells().iter().enumerate()
                    .filter(|(_, &c)| c == SquareKind::Black).map(|(i, _)| i).collect();
                prop_assert_eq!(blacks, ((n - 1 - k)..(n - 1)).collect::<Vec<_>>());
            }
        }

        #[test]
        fn sign_ignores_prefix_up_to_last_black(arr in square_strategy(), pick in any::<prop::sample::Index>(), kind in prop::sample::select(vec![SquareKind::White, SquareKind::Decorated])) {
            if let Some(p) = arr.cells().iter().rposition(|&c| c == SquareKind::Black) {
                let i = pick.index(p + 1);
                if i < p {
                    let mut cells = arr.cells().to_vec();
                    if cells[i] != SquareKind::Black {
                        cells[i] = kind;
                        let mutated = SquareArrangement::new(cells).unwrap();
                        prop_assert_eq!(mutated.sign_class(), arr.sign_class());
                    }
                }
            }
        }

        #[test]
        fn square_encoding_round_trips(arr in square_strategy()) {
            prop_assert_eq!(SquareArrangement::decode(&arr.encode()).unwrap(), arr);
        }
    }
}
