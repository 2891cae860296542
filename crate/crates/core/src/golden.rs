//! Published Betti tables of small Segre embeddings, in the layout produced
//! by [`BettiTable::to_m2`](crate::koszul::BettiTable::to_m2).

pub const SEG_11: &str = r"       0 1
total: 1 1
    0: 1 .
    1: . 1
";

pub const SEG_111: &str = r"       0 1  2 3 4
total: 1 9 16 9 1
    0: 1 .  . . .
    1: . 9 16 9 .
    2: . .  . . 1
";

pub const SEG_211: &str = r"       0  1  2   3  4  5  6 7
total: 1 24 84 126 94 46 21 4
    0: 1  .  .   .  .  .  . .
    1: . 24 84 126 84 10  . .
    2: .  .  .   . 10 36 21 4
";

pub const SEG_1111: &str = r"       0  1   2   3    4    5    6    7   8   9 10 11
total: 1 55 320 891 1436 1375 1375 1436 891 320 55  1
    0: 1  .   .   .    .    .    .    .   .   .  .  .
    1: . 55 320 891 1408 1183  192   28   .   .  .  .
    2: .  .   .   .   28  192 1183 1408 891 320 55  .
    3: .  .   .   .    .    .    .    .   .   .  .  1
";

pub const SEG_221: &str = r"       0  1   2    3    4    5    6    7    8    9  10 11 12
total: 1 63 394 1179 2087 2692 3726 4383 3275 1530 407 45  2
    0: 1  .   .    .    .    .    .    .    .    .   .  .  .
    1: . 63 394 1179 1980 1702  396   63    8    .   .  .  .
    2: .  .   .    .  107  990 3330 4320 3267 1530 407 36  .
    3: .  .   .    .    .    .    .    .    .    .   .  9  2
";

/// `(dimension vector, table)`, cheapest first.
pub const TABLES: [(&str, &str); 5] = [
    ("1,1", SEG_11),
    ("1,1,1", SEG_111),
    ("2,1,1", SEG_211),
    ("1,1,1,1", SEG_1111),
    ("2,2,1", SEG_221),
];
