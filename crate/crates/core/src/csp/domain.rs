//! Finite variable domains stored as offset bitsets.

use alloc::vec;
use alloc::vec::Vec;

use crate::calculus::RelSet;

/// The sort of a variable. Relation-sorted variables carry the size of the
/// owning calculus so posts can reject cross-calculus constraints.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sort {
    Bool,
    Int,
    /// Relation over a calculus with `universe` basic relations.
    Rel { universe: u8 },
}

/// A finite set of integer values: a bitset offset by the smallest value of
/// the initial domain. Relation domains use the relation index as the value,
/// Booleans use 0 and 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Domain {
    sort: Sort,
    lo: i64,
    words: Vec<u64>,
    size: u32,
}

impl Domain {
    pub fn bools() -> Domain {
        Domain {
            sort: Sort::Bool,
            lo: 0,
            words: vec![0b11],
            size: 2,
        }
    }

    pub fn bool_fixed(value: bool) -> Domain {
        Domain {
            sort: Sort::Bool,
            lo: 0,
            words: vec![if value { 0b10 } else { 0b01 }],
            size: 1,
        }
    }

    pub fn relations(set: RelSet, universe: usize) -> Domain {
        debug_assert!(universe <= 64);
        debug_assert!(set.is_subset(RelSet::full(universe)));
        Domain {
            sort: Sort::Rel {
                universe: universe as u8,
            },
            lo: 0,
            words: vec![set.0],
            size: set.len(),
        }
    }

    pub fn int_range(lo: i64, hi: i64) -> Domain {
        debug_assert!(lo <= hi);
        let n = (hi - lo + 1) as usize;
        let mut words = vec![u64::MAX; n / 64];
        let rem = n % 64;
        if rem != 0 {
            words.push((1u64 << rem) - 1);
        }
        Domain {
            sort: Sort::Int,
            lo,
            words,
            size: n as u32,
        }
    }

    pub fn int_set(values: &[i64]) -> Option<Domain> {
        let lo = *values.iter().min()?;
        let hi = *values.iter().max()?;
        let mut d = Domain::int_range(lo, hi);
        for v in lo..=hi {
            if !values.contains(&v) {
                d.clear(v);
            }
        }
        Some(d)
    }

    pub fn sort(&self) -> Sort {
        self.sort
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    fn bit(&self, v: i64) -> Option<(usize, u64)> {
        if v < self.lo {
            return None;
        }
        let off = (v - self.lo) as usize;
        let w = off / 64;
        if w >= self.words.len() {
            return None;
        }
        Some((w, 1u64 << (off % 64)))
    }

    pub fn contains(&self, v: i64) -> bool {
        match self.bit(v) {
            Some((w, mask)) => self.words[w] & mask != 0,
            None => false,
        }
    }

    /// Remove `v`; returns true if it was present.
    pub(crate) fn clear(&mut self, v: i64) -> bool {
        match self.bit(v) {
            Some((w, mask)) if self.words[w] & mask != 0 => {
                self.words[w] &= !mask;
                self.size -= 1;
                true
            }
            _ => false,
        }
    }

    /// Re-insert `v` (used when unwinding the trail).
    pub(crate) fn restore(&mut self, v: i64) {
        let (w, mask) = self.bit(v).expect("restored value within initial range");
        debug_assert_eq!(self.words[w] & mask, 0);
        self.words[w] |= mask;
        self.size += 1;
    }

    pub fn min(&self) -> Option<i64> {
        for (w, word) in self.words.iter().enumerate() {
            if *word != 0 {
                return Some(self.lo + (w * 64 + word.trailing_zeros() as usize) as i64);
            }
        }
        None
    }

    pub fn max(&self) -> Option<i64> {
        for (w, word) in self.words.iter().enumerate().rev() {
            if *word != 0 {
                return Some(self.lo + (w * 64 + 63 - word.leading_zeros() as usize) as i64);
            }
        }
        None
    }

    pub fn fixed_value(&self) -> Option<i64> {
        if self.size == 1 {
            self.min()
        } else {
            None
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.words.iter().enumerate().flat_map(move |(wi, word)| {
            let mut bits = *word;
            let base = self.lo + (wi * 64) as i64;
            core::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let i = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some(base + i as i64)
                }
            })
        })
    }

    /// Current values of a relation-sorted domain as a relation set.
    pub fn rel_set(&self) -> RelSet {
        debug_assert!(matches!(self.sort, Sort::Rel { .. }));
        RelSet(self.words[0])
    }

    /// Current values of a Boolean or relation domain as a raw mask.
    pub(crate) fn word(&self) -> u64 {
        debug_assert_eq!(self.words.len(), 1);
        self.words[0]
    }
}
