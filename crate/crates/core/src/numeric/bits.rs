//! Fixed-width bit vectors over Z/2. Used for edge sets, spin-disagreement
//! sets, matchings and homology class coordinates.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    blocks: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut b = Bits::new(len);
        for &i in idx {
            b.set(i, true);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        if v {
            self.blocks[i / 64] |= 1 << (i % 64);
        } else {
            self.blocks[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.blocks[i / 64] ^= 1 << (i % 64);
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    pub fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn or(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// Parity of |self AND other|; the workhorse of the intersection form.
    pub fn parity_and(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .fold(0u32, |p, (a, b)| p ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn disjoint(&self, other: &Bits) -> bool {
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Hex bitmask (bit i = element i), fixed width so output is stable.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut s = String::with_capacity(digits);
        for pos in (0..digits).rev() {
            let mut nib = 0u8;
            for b in 0..4 {
                let i = pos * 4 + b;
                if i < self.len && self.get(i) {
                    nib |= 1 << b;
                }
            }
            s.push(char::from_digit(nib as u32, 16).unwrap());
        }
        s
    }

    pub fn from_hex(len: usize, hex: &str) -> Option<Self> {
        let mut b = Bits::new(len);
        for (pos, c) in hex.chars().rev().enumerate() {
            let nib = c.to_digit(16)? as usize;
            for k in 0..4 {
                if nib >> k & 1 == 1 {
                    let i = pos * 4 + k;
                    if i >= len {
                        return None;
                    }
                    b.set(i, true);
                }
            }
        }
        Some(b)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits[{}]{{{:?}}}", self.len, self.indices())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = Bits::from_indices(70, &[0, 3, 65]);
        let b = Bits::from_indices(70, &[3, 64, 65]);
        assert_eq!(a.xor(&b).indices(), vec![0, 64]);
        assert_eq!(a.and(&b).indices(), vec![3, 65]);
        assert!(a.parity_and(&b) == false); // |{3,65}| = 2
        assert!(a.parity_and(&Bits::from_indices(70, &[0])));
        assert_eq!(a.count(), 3);
    }

    #[test]
    fn hex_round_trip() {
        let a = Bits::from_indices(9, &[0, 4, 8]);
        assert_eq!(a.to_hex(), "111");
        assert_eq!(Bits::from_hex(9, "111").unwrap(), a);
        let e = Bits::new(5);
        assert_eq!(e.to_hex(), "00");
    }
}
