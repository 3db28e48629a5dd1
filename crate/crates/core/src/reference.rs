//! Published reference values: the line-union tables for `q = 2, 3, 4`
//! and the exact non-blocking densities derived from them.

use crate::rational::ExactRational;

/// `(k, points, frequency)` rows for `PG(2, 2)`.
pub const LINE_UNION_Q2: &[(u32, u32, u64)] = &[
    (1, 3, 7),
    (2, 5, 21),
    (3, 6, 28),
    (3, 7, 7),
    (4, 6, 7),
    (4, 7, 28),
    (5, 7, 21),
    (6, 7, 7),
    (7, 7, 1),
];

pub const LINE_UNION_Q3: &[(u32, u32, u64)] = &[
    (1, 4, 13),
    (2, 7, 78),
    (3, 9, 234),
    (3, 10, 52),
    (4, 10, 234),
    (4, 11, 468),
    (4, 13, 13),
    (5, 11, 468),
    (5, 12, 702),
    (5, 13, 117),
    (6, 11, 78),
    (6, 12, 936),
    (6, 13, 702),
    (7, 12, 468),
    (7, 13, 1248),
    (8, 12, 117),
    (8, 13, 1170),
    (9, 12, 13),
    (9, 13, 702),
    (10, 13, 286),
    (11, 13, 78),
    (12, 13, 13),
    (13, 13, 1),
];

pub const LINE_UNION_Q4: &[(u32, u32, u64)] = &[
    (1, 5, 21),
    (2, 9, 210),
    (3, 12, 1120),
    (3, 13, 210),
    (4, 14, 2520),
    (4, 15, 3360),
    (4, 17, 105),
    (5, 15, 1008),
    (5, 16, 10080),
    (5, 17, 7560),
    (5, 18, 1680),
    (5, 21, 21),
    (6, 15, 168),
    (6, 17, 18480),
    (6, 18, 22680),
    (6, 19, 12600),
    (6, 21, 336),
    (7, 17, 2520),
    (7, 18, 31920),
    (7, 19, 55440),
    (7, 20, 23520),
    (7, 21, 2880),
    (8, 18, 10290),
    (8, 19, 73080),
    (8, 20, 93240),
    (8, 21, 26880),
    (9, 18, 1120),
    (9, 19, 42840),
    (9, 20, 151200),
    (9, 21, 98770),
    (10, 19, 13860),
    (10, 20, 140448),
    (10, 21, 198408),
    (11, 19, 2520),
    (11, 20, 86688),
    (11, 21, 263508),
    (12, 19, 210),
    (12, 20, 37800),
    (12, 21, 255920),
    (13, 20, 11760),
    (13, 21, 191730),
    (14, 20, 2520),
    (14, 21, 113760),
    (15, 20, 336),
    (15, 21, 53928),
    (16, 20, 21),
    (16, 21, 20328),
    (17, 21, 5985),
    (18, 21, 1330),
    (19, 21, 210),
    (20, 21, 21),
    (21, 21, 1),
];

pub fn line_union_rows(q: u32) -> Option<&'static [(u32, u32, u64)]> {
    match q {
        2 => Some(LINE_UNION_Q2),
        3 => Some(LINE_UNION_Q3),
        4 => Some(LINE_UNION_Q4),
        _ => None,
    }
}

/// Published `nb(q)` as `(numerator, denominator)`.
pub fn nb_published(q: u32) -> Option<(u64, u64)> {
    match q {
        2 => Some((1, 2)),
        3 => Some((1336688, 1594323)),
        4 => Some((2112952233969, 2199023255552)),
        _ => None,
    }
}

pub fn nb_published_rational(q: u32) -> Option<ExactRational> {
    nb_published(q).map(|(n, d)| ExactRational::new(n, d))
}

/// Published proportion of blocking conics over `F_2`.
pub const CONIC_BLOCKING_Q2_PUBLISHED: (u64, u64) = (11, 32);

/// Published smallest nontrivial blocking set sizes, with the number of
/// such sets where it is known (the Baer subplanes at `q = 4`).
pub fn min_nontrivial_published(q: u32) -> Option<(u32, Option<u64>)> {
    match q {
        3 => Some((6, None)),
        4 => Some((7, Some(360))),
        _ => None,
    }
}
