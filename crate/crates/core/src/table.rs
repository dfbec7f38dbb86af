//! Finite groups as explicit multiplication tables.
//!
//! Elements are dense indices `0..order` and the identity is always index 0.
//! Everything above this module speaks only in indices.
//!
//! The commutator convention is fixed here, once: `[x, y] = x⁻¹ y⁻¹ x y`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exec::Execution;

/// Index of a group element inside its [`GroupTable`].
pub type Element = usize;

/// Largest table accepted from an external source. Associativity of such
/// tables is checked exhaustively, which is cubic in the order.
pub const MAX_CHECKED_ORDER: usize = 256;

/// Largest table the crate will build at all (via presentation conversion).
pub const MAX_ORDER: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) = {value} is out of range for order {order}")]
    OutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("declared order {declared} does not match table size {actual}")]
    OrderMismatch { declared: usize, actual: usize },
    #[error("{count} labels given for a table of order {order}")]
    LabelCount { count: usize, order: usize },
    #[error("{kind} {index} is not a permutation of the elements")]
    NotAPermutationRow { kind: &'static str, index: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    MissingInverse(usize),
    #[error("not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("order {order} exceeds the limit of {limit} for this operation")]
    TooLarge { order: usize, limit: usize },
}

/// On-disk Cayley table: `{"order": n, "labels": [...], "table": [[...], ...]}`.
///
/// The identity may sit at any index; it is moved to index 0 on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyFile {
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub table: Vec<Vec<usize>>,
}

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    labels: Option<Vec<String>>,
}

impl GroupTable {
    /// Validates a raw table and returns a group with the identity at index 0.
    ///
    /// Checks, in order: shape, range, that every row and column is a
    /// permutation, existence of a two-sided identity, inverses, and full
    /// associativity. The first offending element or triple is reported.
    pub fn validate(
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<GroupTable, TableError> {
        Self::validate_with(table, labels, Execution::default())
    }

    pub fn validate_with(
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
        exec: Execution,
    ) -> Result<GroupTable, TableError> {
        let n = table.len();
        if n == 0 {
            return Err(TableError::Empty);
        }
        if n > MAX_CHECKED_ORDER {
            return Err(TableError::TooLarge { order: n, limit: MAX_CHECKED_ORDER });
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(TableError::LabelCount { count: l.len(), order: n });
            }
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(TableError::NotSquare { row: r, len: row.len(), expected: n });
            }
            if let Some((c, &v)) = row.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(TableError::OutOfRange { row: r, col: c, value: v, order: n });
            }
        }
        fn is_perm(n: usize, mut values: impl Iterator<Item = usize>) -> bool {
            let mut seen = vec![false; n];
            values.all(|v| !std::mem::replace(&mut seen[v], true))
        }
        for r in 0..n {
            if !is_perm(n, table[r].iter().copied()) {
                return Err(TableError::NotAPermutationRow { kind: "row", index: r });
            }
        }
        for c in 0..n {
            if !is_perm(n, (0..n).map(|r| table[r][c])) {
                return Err(TableError::NotAPermutationRow { kind: "column", index: c });
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(TableError::NoIdentity)?;
        for x in 0..n {
            let right = (0..n).find(|&y| table[x][y] == e).expect("rows are permutations");
            if table[right][x] != e {
                return Err(TableError::MissingInverse(x));
            }
        }
        if let Some((x, y, z)) = exec.find_first(n, |x| {
            for y in 0..n {
                let xy = table[x][y];
                for z in 0..n {
                    if table[xy][z] != table[x][table[y][z]] {
                        return Some((x, y, z));
                    }
                }
            }
            None
        }) {
            return Err(TableError::NotAssociative { x, y, z });
        }

        // Swap the identity into slot 0.
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mul = vec![0u16; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[relabel(x) * n + relabel(y)] = relabel(table[x][y]) as u16;
            }
        }
        let labels = labels.map(|mut l| {
            l.swap(0, e);
            l
        });
        Ok(Self::from_mul(n, mul, labels))
    }

    /// Builds a table whose group axioms are guaranteed by the caller
    /// (identity at 0, rows permutations, associative).
    pub(crate) fn from_trusted(order: usize, mul: Vec<u16>, labels: Option<Vec<String>>) -> GroupTable {
        debug_assert_eq!(mul.len(), order * order);
        debug_assert!((0..order).all(|x| mul[x] as usize == x && mul[x * order] as usize == x));
        Self::from_mul(order, mul, labels)
    }

    fn from_mul(order: usize, mul: Vec<u16>, labels: Option<Vec<String>>) -> GroupTable {
        let mut inv = vec![0u16; order];
        for x in 0..order {
            let row = &mul[x * order..(x + 1) * order];
            inv[x] = row.iter().position(|&v| v == 0).expect("every element has an inverse") as u16;
        }
        GroupTable { order, mul, inv, labels }
    }

    /// Loads a [`CayleyFile`], validating the table.
    pub fn from_cayley_file(file: CayleyFile) -> Result<GroupTable, TableError> {
        if file.order != file.table.len() {
            return Err(TableError::OrderMismatch { declared: file.order, actual: file.table.len() });
        }
        Self::validate(file.table, file.labels)
    }

    pub fn to_cayley_file(&self) -> CayleyFile {
        CayleyFile {
            order: self.order,
            labels: self.labels.clone(),
            table: (0..self.order)
                .map(|x| (0..self.order).map(|y| self.mul(x, y)).collect())
                .collect(),
        }
    }

    /// The cyclic group of order `n`, element `k` standing for the generator to the `k`.
    pub fn cyclic(n: usize) -> GroupTable {
        assert!(n > 0 && n <= MAX_ORDER, "cyclic order out of range");
        let mul = (0..n * n).map(|i| ((i / n + i % n) % n) as u16).collect();
        let labels = (0..n).map(|k| if k == 0 { "1".to_string() } else { format!("g^{k}") }).collect();
        Self::from_trusted(n, mul, Some(labels))
    }

    /// Direct product; the pair `(x, y)` gets index `x + |self|·y`.
    pub fn direct_product(&self, other: &GroupTable) -> GroupTable {
        let (n1, n2) = (self.order, other.order);
        let n = n1 * n2;
        assert!(n <= MAX_ORDER, "direct product too large");
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let x = self.mul(a % n1, b % n1);
                let y = other.mul(a / n1, b / n1);
                mul[a * n + b] = (x + n1 * y) as u16;
            }
        }
        let labels = (0..n)
            .map(|k| format!("({},{})", self.label(k % n1), other.label(k / n1)))
            .collect();
        Self::from_trusted(n, mul, Some(labels))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Element {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        self.mul[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: Element) -> Element {
        self.inv[x] as usize
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Human-readable name of `x`, falling back to its index.
    pub fn label(&self, x: Element) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn find_label(&self, name: &str) -> Option<Element> {
        self.labels.as_ref()?.iter().position(|l| l == name)
    }

    /// Stable content hash of the multiplication table (hex, 16 chars).
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.order as u64).to_le_bytes());
        for v in &self.mul {
            h.update(v.to_le_bytes());
        }
        h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Smallest `k ≥ 1` with `x^k = 1`.
    pub fn element_order(&self, x: Element) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// `x^k` by binary exponentiation; negative `k` raises the inverse.
    pub fn power(&self, x: Element, k: i64) -> Element {
        let mut base = if k < 0 { self.inv(x) } else { x };
        let mut e = k.unsigned_abs();
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(&self, x: Element, y: Element) -> Element {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(self.inv(yx), xy)
    }

    /// `g⁻¹ x g`.
    pub fn conjugate(&self, x: Element, g: Element) -> Element {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn commutes(&self, x: Element, y: Element) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|x| (x + 1..self.order).all(|y| self.commutes(x, y)))
    }

    /// Least subgroup containing `gens`, by closure under right multiplication.
    pub fn generated_subgroup(&self, gens: &[Element]) -> Subgroup {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(w) = queue.pop_front() {
            for &g in gens {
                let wg = self.mul(w, g);
                if !mask[wg] {
                    mask[wg] = true;
                    queue.push_back(wg);
                }
            }
        }
        Subgroup::from_mask(mask)
    }

    /// `{g : gx = xg for all x in s}`.
    pub fn centralizer(&self, s: &[Element]) -> Subgroup {
        let mask = self.elements().map(|g| s.iter().all(|&x| self.commutes(g, x))).collect();
        Subgroup::from_mask(mask)
    }

    /// The whole group as a subgroup.
    pub fn whole(&self) -> Subgroup {
        Subgroup::from_mask(vec![true; self.order])
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        Subgroup::from_mask(mask)
    }

    /// Induced multiplication table on `s`, with the embedding back into `self`.
    ///
    /// Members keep their relative index order, so the identity stays at 0.
    pub fn subgroup_as_group(&self, s: &Subgroup) -> InducedGroup {
        assert_eq!(s.parent_order(), self.order, "subgroup of a different group");
        let map: Vec<Element> = s.members().to_vec();
        let mut back = vec![None; self.order];
        for (i, &x) in map.iter().enumerate() {
            back[x] = Some(i);
        }
        let m = map.len();
        let mut mul = vec![0u16; m * m];
        for i in 0..m {
            for j in 0..m {
                let prod = self.mul(map[i], map[j]);
                mul[i * m + j] = back[prod].expect("subgroup is closed") as u16;
            }
        }
        let labels = self.labels.as_ref().map(|l| map.iter().map(|&x| l[x].clone()).collect());
        InducedGroup {
            table: GroupTable::from_trusted(m, mul, labels),
            embedding: Embedding { map, back },
        }
    }

    /// Whether `s` is closed under products and inverses (and holds the identity).
    pub fn is_subgroup(&self, s: &Subgroup) -> bool {
        s.contains(0)
            && s.members().iter().all(|&x| {
                s.contains(self.inv(x)) && s.members().iter().all(|&y| s.contains(self.mul(x, y)))
            })
    }

    /// Whether `s` is normal in this group.
    pub fn is_normal(&self, s: &Subgroup) -> bool {
        s.members()
            .iter()
            .all(|&x| self.elements().all(|g| s.contains(self.conjugate(x, g))))
    }

    /// The product set `AB = {ab}`; a subgroup when `[A, B] = 1`.
    pub fn product_set(&self, a: &Subgroup, b: &Subgroup) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        for &x in a.members() {
            for &y in b.members() {
                mask[self.mul(x, y)] = true;
            }
        }
        mask
    }
}

/// A subgroup, stored as a membership mask plus its sorted member list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    mask: Vec<bool>,
    members: Vec<Element>,
}

impl Subgroup {
    /// Wraps a membership mask. Closure is the caller's responsibility;
    /// see [`GroupTable::is_subgroup`].
    pub fn from_mask(mask: Vec<bool>) -> Subgroup {
        let members = mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect();
        Subgroup { mask, members }
    }

    pub fn from_members(parent_order: usize, members: &[Element]) -> Subgroup {
        let mut mask = vec![false; parent_order];
        for &x in members {
            mask[x] = true;
        }
        Self::from_mask(mask)
    }

    #[inline]
    pub fn contains(&self, x: Element) -> bool {
        self.mask[x]
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn parent_order(&self) -> usize {
        self.mask.len()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_mask(self.mask.iter().zip(&other.mask).map(|(&a, &b)| a && b).collect())
    }
}

impl Serialize for Subgroup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}

/// Injective homomorphism from an induced subgroup table into its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    map: Vec<Element>,
    back: Vec<Option<Element>>,
}

impl Embedding {
    /// Parent index of the induced element `x`.
    pub fn apply(&self, x: Element) -> Element {
        self.map[x]
    }

    /// Induced index of the parent element `y`, if it lies in the image.
    pub fn preimage(&self, y: Element) -> Option<Element> {
        self.back[y]
    }

    pub fn image(&self) -> &[Element] {
        &self.map
    }
}

/// A subgroup materialized as a standalone group.
#[derive(Debug, Clone)]
pub struct InducedGroup {
    pub table: GroupTable,
    pub embedding: Embedding,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dihedral, quaternion};

    #[test]
    fn z2_validates() {
        let g = GroupTable::validate(vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn identity_is_renumbered_to_zero() {
        // Z/3 with the identity stored at index 2.
        let raw = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let labels = vec!["g".into(), "g2".into(), "e".into()];
        let g = GroupTable::validate(raw, Some(labels)).unwrap();
        assert_eq!(g.label(0), "e");
        assert!(g.elements().all(|x| g.mul(0, x) == x && g.mul(x, 0) == x));
        assert_eq!(g.element_order(g.find_label("g").unwrap()), 3);
    }

    #[test]
    fn d8_table_is_valid() {
        let d8 = dihedral(4);
        let raw = d8.to_cayley_file();
        let again = GroupTable::from_cayley_file(raw).unwrap();
        assert_eq!(again, d8);
    }

    #[test]
    fn loop_is_not_associative() {
        // Latin square with identity and inverses, but not a group.
        let raw = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match GroupTable::validate(raw, None) {
            Err(TableError::NotAssociative { x, y, z }) => {
                assert_eq!((x, y, z), (1, 1, 2));
            }
            other => panic!("expected NotAssociative, got {other:?}"),
        }
    }

    #[test]
    fn corrupted_entries_are_rejected() {
        let mut raw = dihedral(4).to_cayley_file().table;
        raw[1][2] = raw[1][3];
        assert!(matches!(
            GroupTable::validate(raw, None),
            Err(TableError::NotAPermutationRow { kind: "row", index: 1 })
        ));
        assert!(matches!(
            GroupTable::validate(vec![vec![0, 2], vec![1, 0]], None),
            Err(TableError::OutOfRange { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            GroupTable::validate(vec![vec![0, 1], vec![1]], None),
            Err(TableError::NotSquare { row: 1, .. })
        ));
        // Latin square without identity: x*y = -x-y mod 3.
        let raw = (0..3).map(|x| (0..3).map(|y| (6 - x - y) % 3).collect()).collect();
        assert_eq!(GroupTable::validate(raw, None), Err(TableError::NoIdentity));
    }

    #[test]
    fn order_and_power() {
        let d8 = dihedral(4);
        let r = d8.find_label("r").unwrap();
        let r3 = d8.find_label("r^3").unwrap();
        assert_eq!(d8.element_order(0), 1);
        assert_eq!(d8.element_order(r), 4);
        assert_eq!(d8.power(r, -1), r3);
        assert_eq!(d8.power(r, 0), 0);
        assert_eq!(d8.power(r, 4), 0);
        assert_eq!(d8.power(r, 4001), r);
        let q8 = quaternion();
        assert_eq!(q8.element_order(q8.find_label("-1").unwrap()), 2);
    }

    #[test]
    fn commutator_convention() {
        let d8 = dihedral(4);
        let (r, s) = (d8.find_label("r").unwrap(), d8.find_label("s").unwrap());
        assert_eq!(d8.commutator(r, r), 0);
        assert_eq!(d8.label(d8.commutator(r, s)), "r^2");
        let q8 = quaternion();
        let (i, j) = (q8.find_label("i").unwrap(), q8.find_label("j").unwrap());
        assert_eq!(q8.label(q8.commutator(i, j)), "-1");
        // [x,y] = x^-1 y^-1 x y, spelled out.
        for x in q8.elements() {
            for y in q8.elements() {
                let expect = q8.mul(q8.mul(q8.inv(x), q8.inv(y)), q8.mul(x, y));
                assert_eq!(q8.commutator(x, y), expect);
            }
        }
    }

    #[test]
    fn closure_and_centralizers() {
        let d8 = dihedral(4);
        let r = d8.find_label("r").unwrap();
        assert!(d8.generated_subgroup(&[]).is_trivial());
        let rot = d8.generated_subgroup(&[r]);
        let names: Vec<_> = rot.members().iter().map(|&x| d8.label(x)).collect();
        assert_eq!(names, ["1", "r", "r^2", "r^3"]);
        assert_eq!(d8.centralizer(&[r]), rot);
        assert_eq!(d8.centralizer(&[0]), d8.whole());

        let q8 = quaternion();
        let (i, j) = (q8.find_label("i").unwrap(), q8.find_label("j").unwrap());
        assert_eq!(q8.generated_subgroup(&[i, j]).len(), 8);
        let c = q8.centralizer(&[i, j]);
        let mut names: Vec<_> = c.members().iter().map(|&x| q8.label(x)).collect();
        names.sort();
        assert_eq!(names, ["-1", "1"]);
    }

    #[test]
    fn induced_groups() {
        let d8 = dihedral(4);
        let whole = d8.subgroup_as_group(&d8.whole());
        assert_eq!(whole.table, d8);
        assert!(d8.elements().all(|x| whole.embedding.apply(x) == x));

        let r = d8.find_label("r").unwrap();
        let rot = d8.subgroup_as_group(&d8.generated_subgroup(&[r]));
        assert_eq!(rot.table.order(), 4);
        assert!(rot.table.is_abelian());
        assert!(rot.table.elements().any(|x| rot.table.element_order(x) == 4));

        let r2 = d8.find_label("r^2").unwrap();
        let z2 = d8.subgroup_as_group(&Subgroup::from_members(8, &[0, r2]));
        assert_eq!(z2.table.order(), 2);
        assert_eq!(z2.embedding.apply(1), r2);
        assert_eq!(z2.embedding.preimage(r), None);
    }

    #[test]
    fn direct_product_and_cyclic() {
        let z4 = GroupTable::cyclic(4);
        let z2 = GroupTable::cyclic(2);
        let p = z4.direct_product(&z2);
        assert_eq!(p.order(), 8);
        assert!(p.is_abelian());
        assert_eq!(p.elements().map(|x| p.element_order(x)).max(), Some(4));
        let q = GroupTable::validate(p.to_cayley_file().table, None).unwrap();
        assert_eq!(q.to_cayley_file().table, p.to_cayley_file().table);
    }

    #[test]
    fn fingerprint_tracks_content() {
        assert_eq!(dihedral(4).fingerprint(), dihedral(4).fingerprint());
        assert_ne!(dihedral(4).fingerprint(), quaternion().fingerprint());
        assert_eq!(dihedral(4).fingerprint().len(), 16);
    }

    #[test]
    fn external_tables_are_capped() {
        let big = GroupTable::cyclic(300).to_cayley_file();
        assert!(matches!(
            GroupTable::from_cayley_file(big),
            Err(TableError::TooLarge { order: 300, .. })
        ));
    }
}
