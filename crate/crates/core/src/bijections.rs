//! The three constructions relating the families.
//!
//! * marked colored boards  <->  plus-class domino arrangements,
//! * plus-class domino arrangements `D+_{m,r}`  <->  plus-class square
//!   arrangements `B+_{m-1-r,r}`,
//! * conjugation, a partial involution on `B+odd_{n,r} u B-even_{n,r}`
//!   that leaves out exactly one exceptional arrangement.
//!
//! All maps check their own postconditions and return
//! [`Error::InternalInvariantViolation`] instead of producing an arrangement
//! outside the advertised target set.

use serde::{Deserialize, Serialize};

use crate::arrangements::{DominoArrangement, Parity, SignClass, SquareArrangement, SquareKind, TileKind};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    White,
}

impl Color {
    fn flipped(self) -> Self {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// A board of length `m` with `2i` chosen cells and a set of marked
/// white-to-black boundaries.
///
/// Cells are 1-based. Mark slot `t` is the boundary just after the chosen
/// cell `c_{2t}`; only slots `1..=i-1` may be marked.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarkedColoredBoard {
    pub m: usize,
    pub chosen: Vec<usize>,
    pub marks: Vec<usize>,
}

impl MarkedColoredBoard {
    pub fn new(m: usize, chosen: Vec<usize>, marks: Vec<usize>) -> Result<Self> {
        let board = MarkedColoredBoard { m, chosen, marks };
        board.validate()?;
        Ok(board)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidBoard(msg));
        if self.chosen.len() < 2 || !self.chosen.len().is_multiple_of(2) {
            return bad(format!("need an even number (>= 2) of chosen cells, got {}", self.chosen.len()));
        }
        if !self.chosen.windows(2).all(|w| w[0] < w[1]) {
            return bad("chosen cells must be strictly increasing".into());
        }
        if self.chosen[0] < 1 || *self.chosen.last().unwrap() > self.m {
            return bad(format!("chosen cells must lie in 1..={}", self.m));
        }
        let i = self.chosen.len() / 2;
        if !self.marks.windows(2).all(|w| w[0] < w[1]) {
            return bad("marks must be strictly increasing".into());
        }
        if self.marks.iter().any(|&t| t < 1 || t >= i) {
            return bad(format!("mark slots must lie in 1..={}", i - 1));
        }
        Ok(())
    }

    /// Half the number of chosen cells.
    pub fn half_chosen(&self) -> usize {
        self.chosen.len() / 2
    }

    /// Number of marks, i.e. the domino count of the image.
    pub fn marked(&self) -> usize {
        self.marks.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("board serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let board: MarkedColoredBoard = serde_json::from_str(text)
            .map_err(|e| Error::Parse { offset: byte_offset(text, e.line(), e.column()), message: e.to_string() })?;
        board.validate()?;
        Ok(board)
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    start + column.saturating_sub(1)
}

/// Colors cell 1 black and flips after every chosen cell.
pub fn coloring_of(board: &MarkedColoredBoard) -> Vec<Color> {
    let mut colors = Vec::with_capacity(board.m);
    let mut current = Color::Black;
    let mut next = board.chosen.iter().peekable();
    for cell in 1..=board.m {
        colors.push(current);
        if next.peek() == Some(&&cell) {
            next.next();
            current = current.flipped();
        }
    }
    colors
}

/// Places a domino across every marked white-to-black boundary.
pub fn board_to_domino(board: &MarkedColoredBoard) -> Result<DominoArrangement> {
    board.validate()?;
    let colors = coloring_of(board);
    // 0-based index of each domino's left cell.
    let starts: Vec<usize> = board.marks.iter().map(|&t| board.chosen[2 * t - 1] - 1).collect();
    let mut tiles = Vec::with_capacity(board.m);
    let mut cell = 0;
    let mut next = starts.iter().peekable();
    while cell < board.m {
        if next.peek() == Some(&&cell) {
            next.next();
            if colors.get(cell) != Some(&Color::White) || colors.get(cell + 1) != Some(&Color::Black) {
                return Err(Error::internal(format!("mark at cell {} is not a white-to-black change", cell + 1)));
            }
            tiles.push(TileKind::Domino);
            cell += 2;
        } else {
            tiles.push(match colors[cell] {
                Color::Black => TileKind::BlackSquare,
                Color::White => TileKind::WhiteSquare,
            });
            cell += 1;
        }
    }
    let arr = DominoArrangement::new(tiles)?;
    if arr.sign_class() != SignClass::Plus {
        return Err(Error::internal(format!("board image {arr} is not in the plus class")));
    }
    Ok(arr)
}

/// Cell colors of a domino arrangement, each domino read as white then black,
/// together with the 0-based left cell of every domino.
fn expand(arr: &DominoArrangement) -> (Vec<Color>, Vec<usize>) {
    let mut colors = Vec::with_capacity(arr.cells());
    let mut domino_starts = Vec::new();
    for &t in arr.tiles() {
        match t {
            TileKind::BlackSquare => colors.push(Color::Black),
            TileKind::WhiteSquare => colors.push(Color::White),
            TileKind::Domino => {
                domino_starts.push(colors.len());
                colors.extend([Color::White, Color::Black]);
            }
        }
    }
    (colors, domino_starts)
}

/// Inverse of [`board_to_domino`].
pub fn domino_to_board(arr: &DominoArrangement) -> Result<MarkedColoredBoard> {
    if arr.sign_class() != SignClass::Plus {
        return Err(Error::NotPlusClass);
    }
    let (colors, starts) = expand(arr);
    let m = colors.len();
    let mut chosen: Vec<usize> = (1..m).filter(|&c| colors[c - 1] != colors[c]).collect();
    if chosen.len() % 2 == 1 {
        chosen.push(m);
    }
    let marks = starts
        .iter()
        .map(|&s| {
            let cell = s + 1;
            match chosen.iter().position(|&c| c == cell) {
                Some(p) if p % 2 == 1 => Ok(p.div_ceil(2)),
                _ => Err(Error::internal(format!("domino at cell {cell} does not sit on a white-to-black change"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    MarkedColoredBoard::new(m, chosen, marks).map_err(|e| Error::internal(e.to_string()))
}

/// Maps `D+_{m,r}` onto `B+_{m-1-r,r}`.
///
/// Each maximal monochromatic interval has its first cell marked; unmarked
/// squares turn white, marked squares become decorated, and dominoes keep
/// only their black half. The first cell of the board is dropped.
pub fn domino_to_square(arr: &DominoArrangement) -> Result<SquareArrangement> {
    if arr.sign_class() != SignClass::Plus {
        return Err(Error::NotPlusClass);
    }
    let (colors, starts) = expand(arr);
    let mut cells = Vec::with_capacity(colors.len());
    let mut next = starts.iter().peekable();
    let mut c = 1;
    while c < colors.len() {
        if next.peek() == Some(&&c) {
            next.next();
            cells.push(SquareKind::Black);
            c += 2;
            continue;
        }
        let starts_interval = colors[c] != colors[c - 1];
        cells.push(if starts_interval { SquareKind::Decorated } else { SquareKind::White });
        c += 1;
    }
    let out = SquareArrangement::new(cells).map_err(|e| Error::internal(format!("image of {arr}: {e}")))?;
    if out.sign_class() != SignClass::Plus || out.len() + 1 + out.blacks() != arr.cells() {
        return Err(Error::internal(format!("image {out} of {arr} is not in the expected plus class")));
    }
    Ok(out)
}

/// Inverse of [`domino_to_square`].
///
/// Black cells become dominoes and a black square is prepended; the other
/// squares are colored left to right, switching color at every decorated
/// cell. A domino ends in black, so the running color is black after it.
pub fn square_to_domino(arr: &SquareArrangement) -> Result<DominoArrangement> {
    if arr.sign_class() != SignClass::Plus {
        return Err(Error::NotPlusClass);
    }
    let mut tiles = Vec::with_capacity(arr.len() + 1);
    tiles.push(TileKind::BlackSquare);
    let mut current = Color::Black;
    for &cell in arr.cells() {
        match cell {
            SquareKind::Black => {
                tiles.push(TileKind::Domino);
                current = Color::Black;
            }
            SquareKind::Decorated | SquareKind::White => {
                if cell == SquareKind::Decorated {
                    current = current.flipped();
                }
                tiles.push(match current {
                    Color::Black => TileKind::BlackSquare,
                    Color::White => TileKind::WhiteSquare,
                });
            }
        }
    }
    let out = DominoArrangement::new(tiles)?;
    if out.sign_class() != SignClass::Plus {
        return Err(Error::internal(format!("image {out} of {arr} is not in the plus class")));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugationOutcome {
    Conjugate(SquareArrangement),
    /// The input is the unique arrangement without a conjugate.
    Exceptional(Exception),
    OutsideDomain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exception {
    EpsilonPlus,
    EpsilonMinus,
}

impl Exception {
    pub fn label(self) -> &'static str {
        match self {
            Exception::EpsilonPlus => "epsilon+",
            Exception::EpsilonMinus => "epsilon-",
        }
    }
}

/// Is `arr` in `B+odd u B-even`?
pub fn in_conjugation_domain(arr: &SquareArrangement) -> bool {
    matches!(
        (arr.sign_class(), arr.weight().parity()),
        (SignClass::Plus, Parity::Odd) | (SignClass::Minus, Parity::Even)
    )
}

/// The weight-parity and sign flipping involution on `B+odd u B-even`.
///
/// With `k` the weight, the pivot `B` is the first cell of the black run
/// ending at the second-to-last cell (the last cell when `k = 0`), and `A`
/// is the nearest non-white cell strictly left of `B`. A decorated `A`
/// becomes black while `B` becomes white; a black `A` becomes decorated
/// while the (white) cell just before `B` becomes black. Either way the
/// last cell toggles between white and decorated.
pub fn conjugate(arr: &SquareArrangement) -> Result<ConjugationOutcome> {
    if !in_conjugation_domain(arr) {
        return Ok(ConjugationOutcome::OutsideDomain);
    }
    let n = arr.len();
    let r = arr.blacks();
    let k = arr.weight().value();
    // 0-based pivot.
    let b = if k >= 1 { n - 1 - k } else { n - 1 };
    let mut cells = arr.cells().to_vec();
    let Some(a) = cells[..b].iter().rposition(|&c| c != SquareKind::White) else {
        let (expected, exception) = if r % 2 == 1 {
            (epsilon_plus(n, r)?, Exception::EpsilonPlus)
        } else {
            (epsilon_minus(n, r)?, Exception::EpsilonMinus)
        };
        if *arr != expected {
            return Err(Error::internal(format!("{arr} has no conjugate but is not {}", exception.label())));
        }
        return Ok(ConjugationOutcome::Exceptional(exception));
    };
    match cells[a] {
        SquareKind::Decorated => {
            cells[a] = SquareKind::Black;
            cells[b] = SquareKind::White;
        }
        SquareKind::Black => {
            if cells[b - 1] != SquareKind::White {
                return Err(Error::internal(format!("cell before the pivot of {arr} is not white")));
            }
            cells[a] = SquareKind::Decorated;
            cells[b - 1] = SquareKind::Black;
        }
        SquareKind::White => unreachable!("A is non-white"),
    }
    cells[n - 1] = match cells[n - 1] {
        SquareKind::White => SquareKind::Decorated,
        SquareKind::Decorated => SquareKind::White,
        SquareKind::Black => return Err(Error::internal(format!("conjugate of {arr} ends in black"))),
    };
    let out = SquareArrangement::new(cells).map_err(|e| Error::internal(e.to_string()))?;
    let flipped = out.len() == n
        && out.blacks() == r
        && out.weight().parity() != arr.weight().parity()
        && out.sign_class() == arr.sign_class().flipped();
    if !flipped {
        return Err(Error::internal(format!("conjugate {out} of {arr} does not flip parity and sign")));
    }
    Ok(ConjugationOutcome::Conjugate(out))
}

fn epsilon(n: usize, r: usize, last: SquareKind) -> SquareArrangement {
    let mut cells = vec![SquareKind::White; n - 1 - r];
    cells.extend(std::iter::repeat_n(SquareKind::Black, r));
    cells.push(last);
    SquareArrangement::new(cells).expect("last cell is not black")
}

fn check_epsilon(n: usize, r: usize) -> Result<()> {
    if n < 1 || r > n - 1 {
        return Err(Error::range(format!("need 0 <= r <= n-1, got n={n}, r={r}")));
    }
    Ok(())
}

/// White cells, then a run of `r` blacks, then a decorated last cell (`r` odd).
pub fn epsilon_plus(n: usize, r: usize) -> Result<SquareArrangement> {
    check_epsilon(n, r)?;
    if r.is_multiple_of(2) {
        return Err(Error::ParityMismatch(format!("epsilon+ needs odd r, got {r}")));
    }
    Ok(epsilon(n, r, SquareKind::Decorated))
}

/// White cells, then a run of `r` blacks, then a white last cell (`r` even).
pub fn epsilon_minus(n: usize, r: usize) -> Result<SquareArrangement> {
    check_epsilon(n, r)?;
    if r % 2 == 1 {
        return Err(Error::ParityMismatch(format!("epsilon- needs even r, got {r}")));
    }
    Ok(epsilon(n, r, SquareKind::White))
}

/// All marked colored boards of length `m` with `r` marks, ordered by
/// chosen set then marks.
pub fn enumerate_boards(m: usize, r: usize) -> Vec<MarkedColoredBoard> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    choose_cells(1, m, &mut chosen, &mut |chosen| {
        if chosen.len() < 2 || chosen.len() % 2 == 1 {
            return;
        }
        let i = chosen.len() / 2;
        let mut marks = Vec::new();
        choose_slots(1, i - 1, r, &mut marks, &mut |marks| {
            out.push(MarkedColoredBoard { m, chosen: chosen.to_vec(), marks: marks.to_vec() });
        });
    });
    out
}

fn choose_cells(from: usize, m: usize, acc: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    visit(acc);
    for c in from..=m {
        acc.push(c);
        choose_cells(c + 1, m, acc, visit);
        acc.pop();
    }
}

fn choose_slots(from: usize, last: usize, want: usize, acc: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if acc.len() == want {
        visit(acc);
        return;
    }
    for t in from..=last {
        if last + 1 - t < want - acc.len() {
            break;
        }
        acc.push(t);
        choose_slots(t + 1, last, want, acc, visit);
        acc.pop();
    }
}
