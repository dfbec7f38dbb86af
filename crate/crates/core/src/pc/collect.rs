//! Closed-form collection for class-2 presentations.
//!
//! Because every commutator is central, for arbitrary integer exponent
//! vectors `x`, `y`
//!
//! ```text
//! (∏ g_i^{x_i}) (∏ g_i^{y_i}) = ∏ g_i^{x_i + y_i} · ∏_{a>b} [g_a, g_b]^{x_a y_b}
//! (∏ g_i^{x_i})^k            = ∏ g_i^{k x_i}     · ∏_{a>b} [g_a, g_b]^{x_a x_b k(k-1)/2}
//! ```
//!
//! Central factors may be accumulated anywhere in the vector. Reducing an
//! out-of-range exponent at position `i` multiplies the tail by a power of
//! the power relation `w_i`, which only involves later generators, so a
//! single left-to-right sweep terminates.
//!
//! Exponents are carried as `i128`. Any exponent may be reduced modulo the
//! group order, and `k(k-1)/2` is formed exactly before reduction.

use super::{ExponentVector, PcPresentation};

type Raw = Vec<i128>;

impl PcPresentation {
    /// Normal form of `u·v`.
    pub fn collect_product(&self, u: &ExponentVector, v: &ExponentVector) -> ExponentVector {
        debug_assert!(self.is_normal(u) && self.is_normal(v));
        self.normalize(self.raw_product(&to_raw(u), &to_raw(v)))
    }

    /// Normal form of `u^k`; negative `k` gives powers of the inverse.
    pub fn collect_power(&self, u: &ExponentVector, k: i64) -> ExponentVector {
        debug_assert!(self.is_normal(u));
        self.normalize(self.raw_power(&to_raw(u), k as i128))
    }

    pub fn inverse(&self, u: &ExponentVector) -> ExponentVector {
        self.collect_power(u, -1)
    }

    /// `[u, v] = u⁻¹ v⁻¹ u v`.
    pub fn commutator(&self, u: &ExponentVector, v: &ExponentVector) -> ExponentVector {
        let uv = self.collect_product(u, v);
        let vu = self.collect_product(v, u);
        self.collect_product(&self.inverse(&vu), &uv)
    }

    fn modulus(&self) -> i128 {
        self.order() as i128
    }

    /// Adds `coeff · c` into `out`, where `c` is a central word.
    fn add_central(&self, out: &mut [i128], c: &ExponentVector, coeff: i128) {
        let n = self.modulus();
        for k in c.support() {
            out[k] = (out[k] + coeff * c.0[k] as i128).rem_euclid(n);
        }
    }

    fn raw_product(&self, x: &[i128], y: &[i128]) -> Raw {
        let n = self.modulus();
        let mut out: Raw = x.iter().zip(y).map(|(&a, &b)| (a + b).rem_euclid(n)).collect();
        for a in 1..x.len() {
            let xa = x[a].rem_euclid(n);
            if xa == 0 || self.central[a] {
                continue;
            }
            for b in 0..a {
                let yb = y[b].rem_euclid(n);
                let c = &self.commutators[a][b];
                if yb != 0 && !c.is_identity() {
                    self.add_central(&mut out, c, (xa * yb).rem_euclid(n));
                }
            }
        }
        out
    }

    fn raw_power(&self, x: &[i128], k: i128) -> Raw {
        let n = self.modulus();
        let km = k.rem_euclid(n);
        let binom = (k * (k - 1) / 2).rem_euclid(n);
        let mut out: Raw = x.iter().map(|&e| (e.rem_euclid(n) * km).rem_euclid(n)).collect();
        if binom == 0 {
            return out;
        }
        for a in 1..x.len() {
            let xa = x[a].rem_euclid(n);
            if xa == 0 || self.central[a] {
                continue;
            }
            for b in 0..a {
                let xb = x[b].rem_euclid(n);
                let c = &self.commutators[a][b];
                if xb != 0 && !c.is_identity() {
                    let coeff = ((xa * xb).rem_euclid(n) * binom).rem_euclid(n);
                    self.add_central(&mut out, c, coeff);
                }
            }
        }
        out
    }

    fn normalize(&self, mut raw: Raw) -> ExponentVector {
        let n = self.modulus();
        let m = raw.len();
        for i in 0..m {
            let o = self.relative_orders[i] as i128;
            let e = raw[i].rem_euclid(n);
            let (q, r) = (e / o, e % o);
            raw[i] = r;
            let w = &self.power_relations[i];
            if q == 0 || w.is_identity() {
                continue;
            }
            // g_i^e · tail = g_i^r · w^q · tail
            let wq = to_raw(&self.normalize(self.raw_power(&to_raw(w), q)));
            let mut tail = raw.clone();
            tail[..=i].iter_mut().for_each(|t| *t = 0);
            let merged = self.raw_product(&wq, &tail);
            raw[i + 1..].copy_from_slice(&merged[i + 1..]);
        }
        ExponentVector(raw.into_iter().map(|e| e as u64).collect())
    }
}

fn to_raw(u: &ExponentVector) -> Raw {
    u.0.iter().map(|&e| e as i128).collect()
}
