//! Consistency checking and conversion to Cayley tables.
//!
//! Element index of a normal form is mixed radix with the first generator
//! least significant: `index(e) = e_1 + o_1·(e_2 + o_2·(…))`.

use std::collections::VecDeque;

use super::{ExponentVector, PcError, PcPresentation};
use crate::exec::Execution;
use crate::table::{GroupTable, MAX_CHECKED_ORDER, MAX_ORDER};

/// How associativity of the collected multiplication was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssociativityCheck {
    /// All `|G|³` triples.
    AllTriples,
    /// `(xy)g = x(yg)` for all `x, y` and every generator `g`, plus the
    /// fact that the generators reach every element.
    GeneratorTriples,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub order: usize,
    pub associativity: AssociativityCheck,
}

impl PcPresentation {
    /// Element index of a normal-form vector.
    pub fn index_of(&self, u: &ExponentVector) -> usize {
        let mut idx = 0usize;
        for (e, o) in u.exponents().iter().zip(&self.relative_orders).rev() {
            idx = idx * *o as usize + *e as usize;
        }
        idx
    }

    /// Normal-form vector of an element index.
    pub fn vector_of(&self, mut idx: usize) -> ExponentVector {
        let e = self
            .relative_orders
            .iter()
            .map(|&o| {
                let d = (idx % o as usize) as u64;
                idx /= o as usize;
                d
            })
            .collect();
        ExponentVector::new(e)
    }

    fn bounded_order(&self) -> Result<usize, PcError> {
        let n = self.order();
        if n > MAX_ORDER as u128 {
            return Err(PcError::TooLarge { order: n, limit: MAX_ORDER });
        }
        Ok(n as usize)
    }

    fn raw_table(&self, exec: Execution) -> Result<(usize, Vec<u16>), PcError> {
        let n = self.bounded_order()?;
        let vectors: Vec<ExponentVector> = (0..n).map(|i| self.vector_of(i)).collect();
        let rows = exec.map_range(n, |x| {
            vectors.iter().map(|v| self.index_of(&self.collect_product(&vectors[x], v)) as u16).collect::<Vec<_>>()
        });
        Ok((n, rows.concat()))
    }

    /// Verifies that collection defines a group satisfying every relation.
    ///
    /// Up to order 256 associativity is checked on all triples; up to 4096 on
    /// triples whose last entry is a generator, which suffices once the
    /// generators are shown to reach every element.
    pub fn check_consistency(&self) -> Result<ConsistencyReport, PcError> {
        self.check_consistency_with(Execution::default())
    }

    pub fn check_consistency_with(&self, exec: Execution) -> Result<ConsistencyReport, PcError> {
        let (n, mul) = self.raw_table(exec)?;
        self.verify_table(n, &mul, exec)
    }

    fn verify_table(&self, n: usize, mul: &[u16], exec: Execution) -> Result<ConsistencyReport, PcError> {
        let t = |x: usize, y: usize| mul[x * n + y] as usize;
        let show = |x: usize| self.format(&self.vector_of(x));
        let fail = |witness: String| Err(PcError::Inconsistent { witness });

        if let Some(x) = exec.find_first(n, |x| {
            let mut seen = vec![false; n];
            (0..n).any(|y| std::mem::replace(&mut seen[t(x, y)], true)).then_some(x)
        }) {
            return fail(format!("left multiplication by {} is not injective", show(x)));
        }
        if let Some(y) = exec.find_first(n, |y| {
            let mut seen = vec![false; n];
            (0..n).any(|x| std::mem::replace(&mut seen[t(x, y)], true)).then_some(y)
        }) {
            return fail(format!("right multiplication by {} is not injective", show(y)));
        }

        let gens: Vec<usize> = (0..self.rank()).map(|i| self.index_of(&self.generator(i))).collect();
        let associativity = if n <= MAX_CHECKED_ORDER {
            if let Some((x, y, z)) = exec.find_first(n, |x| {
                (0..n).find_map(|y| (0..n).find(|&z| t(t(x, y), z) != t(x, t(y, z))).map(|z| (x, y, z)))
            }) {
                return fail(format!("({}*{})*{} != {}*({}*{})", show(x), show(y), show(z), show(x), show(y), show(z)));
            }
            AssociativityCheck::AllTriples
        } else {
            let mut reached = vec![false; n];
            reached[0] = true;
            let mut queue = VecDeque::from([0]);
            let mut count = 1;
            while let Some(w) = queue.pop_front() {
                for &g in &gens {
                    let wg = t(w, g);
                    if !reached[wg] {
                        reached[wg] = true;
                        count += 1;
                        queue.push_back(wg);
                    }
                }
            }
            if count != n {
                return fail(format!("generators reach only {count} of {n} normal forms"));
            }
            if let Some((x, y, g)) = exec.find_first(n, |x| {
                (0..n).find_map(|y| gens.iter().find(|&&g| t(t(x, y), g) != t(x, t(y, g))).map(|&g| (x, y, g)))
            }) {
                return fail(format!("({}*{})*{} != {}*({}*{})", show(x), show(y), show(g), show(x), show(y), show(g)));
            }
            AssociativityCheck::GeneratorTriples
        };

        for (i, &g) in gens.iter().enumerate() {
            let mut acc = 0;
            for _ in 0..self.relative_orders[i] {
                acc = t(acc, g);
            }
            if acc != self.index_of(&self.power_relations[i]) {
                return fail(format!(
                    "{}^{} evaluates to {}, relation says {}",
                    self.generators[i],
                    self.relative_orders[i],
                    show(acc),
                    self.format(&self.power_relations[i])
                ));
            }
        }
        let inv = |x: usize| (0..n).find(|&y| t(x, y) == 0).expect("rows are permutations");
        for j in 0..self.rank() {
            for i in 0..j {
                let (gj, gi) = (gens[j], gens[i]);
                let c = t(t(inv(gj), inv(gi)), t(gj, gi));
                if c != self.index_of(&self.commutators[j][i]) {
                    return fail(format!(
                        "[{},{}] evaluates to {}, relation says {}",
                        self.generators[j],
                        self.generators[i],
                        show(c),
                        self.format(&self.commutators[j][i])
                    ));
                }
            }
        }
        for z in (0..self.rank()).filter(|&z| self.central[z]) {
            if let Some(&g) = gens.iter().find(|&&g| t(gens[z], g) != t(g, gens[z])) {
                return fail(format!("central {} does not commute with {}", self.generators[z], show(g)));
            }
        }
        Ok(ConsistencyReport { order: n, associativity })
    }

    /// Cayley table of the presented group, with the normal form of each index.
    ///
    /// Consistency is always re-verified first.
    pub fn to_cayley(&self) -> Result<(GroupTable, Vec<ExponentVector>), PcError> {
        self.to_cayley_with(Execution::default())
    }

    pub fn to_cayley_with(&self, exec: Execution) -> Result<(GroupTable, Vec<ExponentVector>), PcError> {
        let (n, mul) = self.raw_table(exec)?;
        self.verify_table(n, &mul, exec)?;
        let vectors: Vec<ExponentVector> = (0..n).map(|i| self.vector_of(i)).collect();
        let labels = vectors.iter().map(|v| self.format(v)).collect();
        Ok((GroupTable::from_trusted(n, mul, Some(labels)), vectors))
    }
}
