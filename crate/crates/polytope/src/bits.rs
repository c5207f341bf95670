//! Compact bitsets used for facet/vertex incidence data.
//!
//! Incidence sets are small (bounded by the vertex limit) but the operations
//! on them sit in the inner loops of hull construction and face enumeration,
//! so they are stored as packed words.

/// Fixed-capacity bitset.  Two bitsets interoperate only if created with the
/// same capacity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn new(nbits: usize) -> Bits {
        Bits {
            words: vec![0; nbits.div_ceil(64).max(1)],
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.words.len(), other.words.len());
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.words.len(), other.words.len());
        self.words.iter().zip(&other.words).any(|(&a, &b)| a & b != 0)
    }

    pub fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.words.len(), other.words.len());
        Bits {
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| a & b).collect(),
        }
    }

    pub fn or(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.words.len(), other.words.len());
        Bits {
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| a | b).collect(),
        }
    }

    pub fn or_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.words.len(), other.words.len());
        for (a, &b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Indices of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + b)
            })
        })
    }
}
