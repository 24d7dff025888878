use alloc::collections::btree_map::{self, BTreeMap};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::Scalar;

/// Finitely supported vector over an ordered key set.
///
/// Zero coefficients are never stored, so two vectors are equal exactly when
/// they agree as linear combinations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVector<K: Ord = usize> {
    entries: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for SparseVector<K> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> SparseVector<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(key: K) -> Self {
        let mut v = Self::new();
        v.entries.insert(key, Scalar::one());
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (K, Scalar)>>(pairs: I) -> Self {
        let mut v = Self::new();
        for (k, c) in pairs {
            v.add_term(k, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &K) -> Option<&Scalar> {
        self.entries.get(key)
    }

    /// Coefficient at `key`, zero when absent.
    pub fn coeff(&self, key: &K) -> Scalar {
        self.entries.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Scalar> {
        self.entries.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Scalar> {
        self.entries.keys()
    }

    pub fn leading(&self) -> Option<(&K, &Scalar)> {
        self.entries.iter().next()
    }

    pub fn set(&mut self, key: K, value: Scalar) {
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn add_term(&mut self, key: K, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: &Scalar, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (k, v) in other.iter() {
            self.add_term(k.clone(), &(c * v));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        Self {
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), -v.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(&Scalar::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(&-Scalar::one(), other);
        out
    }

    pub fn dot(&self, other: &Self) -> Scalar {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .iter()
            .filter_map(|(k, v)| large.get(k).map(|w| v * w))
            .fold(Scalar::zero(), |acc, x| acc + x)
    }

    /// Relabels keys; colliding images are summed.
    pub fn map_keys<L: Ord + Clone, F: FnMut(&K) -> L>(&self, mut f: F) -> SparseVector<L> {
        let mut out = SparseVector::new();
        for (k, v) in self.iter() {
            out.add_term(f(k), v);
        }
        out
    }

    /// Drops every key rejected by `keep`.
    pub fn filtered<F: FnMut(&K) -> bool>(&self, mut keep: F) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn into_pairs(self) -> Vec<(K, Scalar)> {
        self.entries.into_iter().collect()
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for SparseVector<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(k, v)| (k, DisplayScalar(v))))
            .finish()
    }
}

struct DisplayScalar<'a>(&'a Scalar);

impl fmt::Debug for DisplayScalar<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for SparseVector<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        Self::from_pairs(iter)
    }
}

impl<'a, K: Ord> IntoIterator for &'a SparseVector<K> {
    type Item = (&'a K, &'a Scalar);
    type IntoIter = btree_map::Iter<'a, K, Scalar>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}
