//! Published table values, `(n, column, numerator, denominator)`; entries not
//! listed are zero.

pub type Entry = (usize, usize, i64, i64);

/// Linear-(i) peak law `P(n, k)`, `n = 1..=7`.
pub const LINEAR_PEAKS: &[Entry] = &[
    (1, 0, 1, 1),
    (2, 0, 1, 1),
    (3, 0, 2, 3),
    (3, 1, 1, 3),
    (4, 0, 1, 3),
    (4, 1, 2, 3),
    (5, 0, 2, 15),
    (5, 1, 11, 15),
    (5, 2, 2, 15),
    (6, 0, 2, 45),
    (6, 1, 26, 45),
    (6, 2, 17, 45),
    (7, 0, 4, 315),
    (7, 1, 38, 105),
    (7, 2, 4, 7),
    (7, 3, 17, 315),
];

/// Linear-(i) rounds `Pi(n, j)`, `n = 0..=7`, `j = 0..=3`.
pub const LINEAR_PHASES: &[Entry] = &[
    (0, 0, 1, 1),
    (1, 0, 1, 1),
    (2, 1, 1, 1),
    (3, 1, 1, 1),
    (4, 1, 1, 1),
    (5, 1, 13, 15),
    (5, 2, 2, 15),
    (6, 1, 28, 45),
    (6, 2, 17, 45),
    (7, 1, 118, 315),
    (7, 2, 197, 315),
];

/// Linear-(i) rounds when an empty round costs one more, `n = 0..=5`, `j = 0..=3`.
pub const LINEAR_PHASES_ALTCOST: &[Entry] = &[
    (0, 1, 1, 1),
    (1, 0, 1, 1),
    (2, 2, 1, 1),
    (3, 1, 1, 3),
    (3, 2, 2, 3),
    (4, 1, 2, 3),
    (4, 2, 1, 3),
    (5, 1, 11, 15),
    (5, 2, 2, 15),
    (5, 3, 2, 15),
];

/// Circular peak law, `n = 1..=7`, `k = 0..=4`.
pub const CIRCULAR_PEAKS: &[Entry] = &[
    (1, 1, 1, 1),
    (2, 1, 1, 1),
    (3, 1, 1, 1),
    (4, 1, 2, 3),
    (4, 2, 1, 3),
    (5, 1, 1, 3),
    (5, 2, 2, 3),
    (6, 1, 2, 15),
    (6, 2, 11, 15),
    (6, 3, 2, 15),
    (7, 1, 2, 45),
    (7, 2, 26, 45),
    (7, 3, 17, 45),
];

/// Circular rounds, `n = 0..=7`, `j = 0..=3`.
pub const CIRCULAR_PHASES: &[Entry] = &[
    (0, 0, 1, 1),
    (1, 0, 1, 1),
    (2, 1, 1, 1),
    (3, 1, 1, 1),
    (4, 1, 2, 3),
    (4, 2, 1, 3),
    (5, 1, 1, 3),
    (5, 2, 2, 3),
    (6, 1, 2, 15),
    (6, 2, 13, 15),
    (7, 1, 2, 45),
    (7, 2, 43, 45),
];

/// A published table: rows `row_lo..=row_hi`, columns `0..=col_hi`.
pub struct Fixture {
    pub name: &'static str,
    pub entries: &'static [Entry],
    pub row_lo: usize,
    pub row_hi: usize,
    pub col_hi: usize,
}

impl Fixture {
    pub fn expected(&self, n: usize, col: usize) -> (i64, i64) {
        self.entries
            .iter()
            .find(|e| e.0 == n && e.1 == col)
            .map_or((0, 1), |e| (e.2, e.3))
    }
}

pub const TABLE_LINEAR_PEAKS: Fixture =
    Fixture { name: "linear peak law", entries: LINEAR_PEAKS, row_lo: 1, row_hi: 7, col_hi: 4 };
pub const TABLE_LINEAR_PHASES: Fixture =
    Fixture { name: "linear rounds", entries: LINEAR_PHASES, row_lo: 0, row_hi: 7, col_hi: 3 };
pub const TABLE_LINEAR_ALTCOST: Fixture = Fixture {
    name: "linear rounds, costly empty round",
    entries: LINEAR_PHASES_ALTCOST,
    row_lo: 0,
    row_hi: 5,
    col_hi: 3,
};
pub const TABLE_CIRCULAR_PEAKS: Fixture =
    Fixture { name: "circular peak law", entries: CIRCULAR_PEAKS, row_lo: 1, row_hi: 7, col_hi: 4 };
pub const TABLE_CIRCULAR_PHASES: Fixture =
    Fixture { name: "circular rounds", entries: CIRCULAR_PHASES, row_lo: 0, row_hi: 7, col_hi: 3 };
