//! Small groups built from closed formulas, independent of the presentation
//! machinery, for unit tests.

use crate::table::GroupTable;

/// Dihedral group of order `2n`; element `s^f r^k` has index `k + n·f`.
pub fn dihedral(n: usize) -> GroupTable {
    let idx = |f: usize, k: usize| k + n * f;
    let mut raw = vec![vec![0; 2 * n]; 2 * n];
    for f in 0..2 {
        for k in 0..n {
            for g in 0..2 {
                for l in 0..n {
                    // r^k s = s r^-k
                    let k2 = if g == 1 { (n - k) % n } else { k };
                    raw[idx(f, k)][idx(g, l)] = idx((f + g) % 2, (k2 + l) % n);
                }
            }
        }
    }
    let labels = (0..2 * n)
        .map(|x| {
            let (f, k) = (x / n, x % n);
            let s = if f == 1 { "s" } else { "" };
            match (s, k) {
                ("", 0) => "1".to_string(),
                (s, 0) => s.to_string(),
                (s, 1) => format!("{s}r"),
                (s, k) => format!("{s}r^{k}"),
            }
        })
        .collect();
    GroupTable::validate(raw, Some(labels)).unwrap()
}

/// Quaternion group: units 1, i, j, k at 0..4, their negatives at 4..8.
pub fn quaternion() -> GroupTable {
    // unit product table: (sign, unit)
    const T: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mut raw = vec![vec![0; 8]; 8];
    for x in 0..8 {
        for y in 0..8 {
            let (s, u) = T[x % 4][y % 4];
            raw[x][y] = u + 4 * ((s + x / 4 + y / 4) % 2);
        }
    }
    let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"].map(String::from).to_vec();
    GroupTable::validate(raw, Some(labels)).unwrap()
}
