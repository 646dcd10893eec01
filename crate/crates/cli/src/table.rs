//! The printed resistance-energy table for `K_{p1} ∘_k K_{p2}`, kept verbatim,
//! including rows that the eigensolve does not reproduce.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    pub row: usize,
    pub p1: usize,
    pub p2: usize,
    pub k: usize,
    /// Value as printed, two decimals at most.
    pub re: f64,
}

const fn e(row: usize, p1: usize, p2: usize, k: usize, re: f64) -> TableEntry {
    TableEntry { row, p1, p2, k, re }
}

pub const RE_TABLE: [TableEntry; 46] = [
    e(1, 3, 2, 1, 6.21),
    e(2, 4, 2, 1, 6.92),
    e(3, 5, 2, 1, 7.79),
    e(4, 6, 2, 1, 7.91),
    e(5, 2, 3, 1, 6.23),
    e(6, 3, 3, 1, 7.29),
    e(7, 4, 3, 1, 7.91),
    e(8, 5, 3, 1, 8.37),
    e(9, 6, 3, 1, 8.76),
    e(10, 2, 4, 1, 6.92),
    e(11, 3, 4, 1, 7.9),
    e(12, 4, 4, 1, 8.44),
    e(13, 5, 4, 1, 8.82),
    e(14, 6, 4, 1, 9.14),
    e(15, 5, 5, 1, 9.13),
    e(16, 6, 5, 1, 9.4),
    e(17, 7, 5, 1, 9.6),
    e(18, 2, 2, 2, 4.0),
    e(19, 3, 2, 2, 4.36),
    e(20, 4, 2, 2, 4.45),
    e(21, 5, 2, 2, 4.48),
    e(22, 6, 2, 2, 4.48),
    e(23, 2, 3, 2, 4.4),
    e(24, 3, 3, 2, 4.92),
    e(25, 4, 3, 2, 5.63),
    e(26, 5, 3, 2, 5.42),
    e(27, 6, 3, 2, 5.59),
    e(28, 2, 4, 2, 4.56),
    e(29, 3, 4, 2, 5.23),
    e(30, 4, 4, 2, 5.64),
    e(31, 5, 4, 2, 5.92),
    e(32, 6, 4, 2, 6.17),
    e(33, 5, 5, 2, 6.27),
    e(34, 6, 5, 2, 6.52),
    e(35, 7, 5, 2, 6.73),
    e(36, 4, 3, 3, 8.14),
    e(37, 5, 3, 3, 8.18),
    e(38, 6, 3, 3, 8.19),
    e(39, 4, 4, 3, 8.25),
    e(40, 5, 4, 3, 8.3),
    e(41, 6, 4, 3, 8.43),
    e(42, 5, 5, 3, 8.36),
    e(43, 6, 5, 3, 8.39),
    e(44, 7, 5, 3, 8.41),
    e(45, 6, 5, 4, 2.92),
    e(46, 7, 5, 4, 2.77),
];
