//! Polycyclic presentations of class at most 2.
//!
//! A presentation lists generators `g_1, …, g_m` with relative orders `o_i`
//! (powers of `p`), power relations `g_i^{o_i} = w_i` and commutator
//! relations `[g_j, g_i] = c_{ji}` for `j > i`. Commutator values may only
//! involve generators declared central, so every commutator is central and
//! the group has class at most 2.
//!
//! Elements are exponent vectors `(e_1, …, e_m)` standing for
//! `g_1^{e_1} ⋯ g_m^{e_m}` with `0 ≤ e_i < o_i`.

mod collect;
mod convert;
mod parse;

use std::fmt;

use thiserror::Error;

pub use convert::{AssociativityCheck, ConsistencyReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unknown generator `{name}` at line {line}, column {col}")]
    UnknownGenerator { name: String, line: usize, col: usize },
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("relation for {0} given twice")]
    DuplicateRelation(String),
    #[error("missing `p=<prime>` statement")]
    MissingPrime,
    #[error("no generators declared")]
    NoGenerators,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("relative order {order} of `{generator}` is not a positive power of {prime}")]
    BadRelativeOrder { generator: String, order: u64, prime: u64 },
    #[error("commutator [{left},{right}] = {value} involves non-central generator `{offender}`")]
    NonCentralCommutator { left: String, right: String, value: String, offender: String },
    #[error("generator `{central}` is declared central but [{left},{right}] is nontrivial")]
    CentralConflict { central: String, left: String, right: String },
    #[error("bad power relation for `{generator}`: {reason}")]
    BadPowerRelation { generator: String, reason: String },
    #[error("bad commutator relation [{left},{right}]: {reason}")]
    BadCommutatorRelation { left: String, right: String, reason: String },
    #[error("inconsistent presentation: {witness}")]
    Inconsistent { witness: String },
    #[error("group order {order} exceeds the limit of {limit}")]
    TooLarge { order: u128, limit: usize },
}

/// Normal-form exponents of an element, one per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<u64>);

impl ExponentVector {
    pub fn new(exponents: Vec<u64>) -> Self {
        ExponentVector(exponents)
    }

    pub fn zero(len: usize) -> Self {
        ExponentVector(vec![0; len])
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices of generators with a nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, _)| i)
    }
}

/// A validated class-≤2 polycyclic presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcPresentation {
    prime: u64,
    generators: Vec<String>,
    relative_orders: Vec<u64>,
    power_relations: Vec<ExponentVector>,
    /// `commutators[j][i]` is `[g_j, g_i]` for `i < j`.
    commutators: Vec<Vec<ExponentVector>>,
    central: Vec<bool>,
}

/// Raw presentation data, checked by [`PcPresentation::new`].
#[derive(Debug, Clone, Default)]
pub struct PresentationData {
    pub prime: u64,
    pub generators: Vec<(String, u64)>,
    /// `(i, w)`: `g_i^{o_i} = w`. Missing entries default to the identity.
    pub power_relations: Vec<(usize, ExponentVector)>,
    /// `(j, i, c)` with `j > i`: `[g_j, g_i] = c`. Missing entries default to the identity.
    pub commutator_relations: Vec<(usize, usize, ExponentVector)>,
    pub central: Vec<usize>,
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    if n < p {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

impl PcPresentation {
    /// Checks structural validity: prime, relative orders, normal-form words,
    /// pc support conditions and the class-2 (central commutator) condition.
    ///
    /// Consistency of the relations is a separate, exhaustive check; see
    /// [`PcPresentation::check_consistency`].
    pub fn new(data: PresentationData) -> Result<PcPresentation, PcError> {
        let PresentationData { prime, generators, power_relations, commutator_relations, central } = data;
        if !is_prime(prime) {
            return Err(PcError::NotPrime(prime));
        }
        if generators.is_empty() {
            return Err(PcError::NoGenerators);
        }
        let m = generators.len();
        let names: Vec<String> = generators.iter().map(|(n, _)| n.clone()).collect();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(PcError::DuplicateGenerator(name.clone()));
            }
        }
        let relative_orders: Vec<u64> = generators.iter().map(|&(_, o)| o).collect();
        for (name, &o) in names.iter().zip(&relative_orders) {
            if !is_power_of(o, prime) {
                return Err(PcError::BadRelativeOrder { generator: name.clone(), order: o, prime });
            }
        }
        let in_range = |w: &ExponentVector| {
            w.len() == m && w.exponents().iter().zip(&relative_orders).all(|(&e, &o)| e < o)
        };
        let mut is_central = vec![false; m];
        for &c in &central {
            is_central[c] = true;
        }

        let mut powers: Vec<Option<ExponentVector>> = vec![None; m];
        for (i, w) in power_relations {
            let generator = names[i].clone();
            if powers[i].is_some() {
                return Err(PcError::DuplicateRelation(format!("{generator}^{}", relative_orders[i])));
            }
            if !in_range(&w) {
                return Err(PcError::BadPowerRelation { generator, reason: "word not in normal form".into() });
            }
            if let Some(k) = w.support().find(|&k| k <= i) {
                return Err(PcError::BadPowerRelation {
                    generator,
                    reason: format!("`{}` does not come after it", names[k]),
                });
            }
            if is_central[i] {
                if let Some(k) = w.support().find(|&k| !is_central[k]) {
                    return Err(PcError::BadPowerRelation {
                        generator,
                        reason: format!("central generator powers into non-central `{}`", names[k]),
                    });
                }
            }
            powers[i] = Some(w);
        }

        let mut comms: Vec<Vec<Option<ExponentVector>>> = (0..m).map(|j| vec![None; j]).collect();
        for (j, i, c) in commutator_relations {
            let (left, right) = (names[j].clone(), names[i].clone());
            if j <= i {
                return Err(PcError::BadCommutatorRelation {
                    left,
                    right,
                    reason: "write commutators as [later, earlier]".into(),
                });
            }
            if comms[j][i].is_some() {
                return Err(PcError::DuplicateRelation(format!("[{left},{right}]")));
            }
            if !in_range(&c) {
                return Err(PcError::BadCommutatorRelation { left, right, reason: "word not in normal form".into() });
            }
            if let Some(k) = c.support().find(|&k| !is_central[k]) {
                return Err(PcError::NonCentralCommutator {
                    value: format_word(&names, &c),
                    offender: names[k].clone(),
                    left,
                    right,
                });
            }
            if let Some(k) = c.support().find(|&k| k <= j) {
                return Err(PcError::BadCommutatorRelation {
                    reason: format!("`{}` does not come after both generators", names[k]),
                    left,
                    right,
                });
            }
            if !c.is_identity() {
                if let Some(z) = [j, i].into_iter().find(|&z| is_central[z]) {
                    return Err(PcError::CentralConflict { central: names[z].clone(), left, right });
                }
            }
            comms[j][i] = Some(c);
        }

        Ok(PcPresentation {
            prime,
            power_relations: powers.into_iter().map(|w| w.unwrap_or_else(|| ExponentVector::zero(m))).collect(),
            commutators: comms
                .into_iter()
                .map(|row| row.into_iter().map(|c| c.unwrap_or_else(|| ExponentVector::zero(m))).collect())
                .collect(),
            central: is_central,
            generators: names,
            relative_orders,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn relative_orders(&self) -> &[u64] {
        &self.relative_orders
    }

    /// `g_i^{o_i}` as a normal-form word.
    pub fn power_relation(&self, i: usize) -> &ExponentVector {
        &self.power_relations[i]
    }

    /// `[g_j, g_i]` for `j > i`.
    pub fn commutator_relation(&self, j: usize, i: usize) -> &ExponentVector {
        assert!(j > i, "commutator relations are stored as [later, earlier]");
        &self.commutators[j][i]
    }

    pub fn is_central(&self, i: usize) -> bool {
        self.central[i]
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Product of the relative orders, the group order of a consistent presentation.
    pub fn order(&self) -> u128 {
        self.relative_orders.iter().map(|&o| o as u128).product()
    }

    pub fn identity(&self) -> ExponentVector {
        ExponentVector::zero(self.rank())
    }

    pub fn generator(&self, i: usize) -> ExponentVector {
        let mut e = vec![0; self.rank()];
        e[i] = 1;
        ExponentVector(e)
    }

    /// Whether `u` is a normal-form vector for this presentation.
    pub fn is_normal(&self, u: &ExponentVector) -> bool {
        u.len() == self.rank() && u.0.iter().zip(&self.relative_orders).all(|(&e, &o)| e < o)
    }

    /// Renders `u` as a word such as `a^2*b*z^3`, or `1` for the identity.
    pub fn format(&self, u: &ExponentVector) -> String {
        format_word(&self.generators, u)
    }
}

pub(crate) fn format_word(names: &[String], u: &ExponentVector) -> String {
    let parts: Vec<String> = u
        .support()
        .map(|i| match u.0[i] {
            1 => names[i].clone(),
            e => format!("{}^{e}", names[i]),
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
