//! F₂-vectors over a fixed ordered basis, and linear maps between them.
//!
//! Group elements, characters and sign characters all use [`Bits`]; the
//! pairing of a character `χ` with an element `x` is `(−1)^{Σ χ_i x_i}`.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mu4::Sign;

pub const MAX_RANK: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: u8,
    mask: u64,
}

impl Bits {
    pub fn zero(len: usize) -> Bits {
        assert!(len <= MAX_RANK, "F2 rank {len} exceeds {MAX_RANK}");
        Bits {
            len: len as u8,
            mask: 0,
        }
    }

    pub fn from_mask(len: usize, mask: u64) -> Bits {
        let mut b = Bits::zero(len);
        b.mask = mask & full_mask(len);
        b
    }

    pub fn unit(len: usize, i: usize) -> Bits {
        let mut b = Bits::zero(len);
        b.set(i, true);
        b
    }

    pub fn from_bools(bits: &[bool]) -> Bits {
        let mut b = Bits::zero(bits.len());
        for (i, &v) in bits.iter().enumerate() {
            b.set(i, v);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len());
        self.mask >> i & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len());
        if v {
            self.mask |= 1 << i;
        } else {
            self.mask &= !(1 << i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    pub fn weight(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn add(&self, other: &Bits) -> Bits {
        assert_eq!(self.len, other.len, "F2 vectors of different length");
        Bits {
            len: self.len,
            mask: self.mask ^ other.mask,
        }
    }

    pub fn dot(&self, other: &Bits) -> bool {
        assert_eq!(self.len, other.len, "F2 vectors of different length");
        (self.mask & other.mask).count_ones() % 2 == 1
    }

    /// Value of this vector, read as a character, on the element `x`.
    pub fn pair(&self, x: &Bits) -> Sign {
        Sign::from_parity(self.dot(x))
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.get(i))
    }

    /// All `2^len` vectors in increasing mask order.
    pub fn all(len: usize) -> impl Iterator<Item = Bits> {
        assert!(len < MAX_RANK, "refusing to enumerate 2^{len} vectors");
        (0..1u64 << len).map(move |m| Bits::from_mask(len, m))
    }
}

fn full_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

impl FromStr for Bits {
    type Err = Error;
    fn from_str(s: &str) -> Result<Bits> {
        if s.len() > MAX_RANK {
            return Err(Error::Schema(format!("bit string longer than {MAX_RANK}")));
        }
        let mut b = Bits::zero(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => b.set(i, true),
                _ => return Err(Error::Schema(format!("invalid bit string `{s}`"))),
            }
        }
        Ok(b)
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Bits, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// A linear map `F₂^domain → F₂^codomain`, stored by the images of the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Map {
    pub domain: usize,
    pub codomain: usize,
    pub columns: Vec<Bits>,
}

impl F2Map {
    pub fn new(codomain: usize, columns: Vec<Bits>) -> F2Map {
        assert!(columns.iter().all(|c| c.len() == codomain));
        F2Map {
            domain: columns.len(),
            codomain,
            columns,
        }
    }

    pub fn apply(&self, x: &Bits) -> Bits {
        assert_eq!(x.len(), self.domain);
        x.ones()
            .fold(Bits::zero(self.codomain), |acc, i| acc.add(&self.columns[i]))
    }

    /// Pullback of a character on the codomain to the domain.
    pub fn pullback(&self, chi: &Bits) -> Bits {
        assert_eq!(chi.len(), self.codomain);
        let mut out = Bits::zero(self.domain);
        for (i, c) in self.columns.iter().enumerate() {
            out.set(i, chi.dot(c));
        }
        out
    }

    /// Direct sum of codomains: `x ↦ (f₁x, …, f_kx)`.
    pub fn stack(maps: &[&F2Map]) -> F2Map {
        let domain = maps.first().map_or(0, |m| m.domain);
        assert!(maps.iter().all(|m| m.domain == domain));
        let codomain: usize = maps.iter().map(|m| m.codomain).sum();
        let columns = (0..domain)
            .map(|i| {
                let mut out = Bits::zero(codomain);
                let mut off = 0;
                for m in maps {
                    for j in m.columns[i].ones() {
                        out.set(off + j, true);
                    }
                    off += m.codomain;
                }
                out
            })
            .collect();
        F2Map::new(codomain, columns)
    }

    pub fn rank(&self) -> usize {
        echelon(self.columns.iter().map(|c| c.mask()).collect()).len()
    }

    /// A nonzero vector of the kernel, if there is one.
    pub fn kernel_witness(&self) -> Option<Bits> {
        // Track combinations alongside the reduction.
        let mut rows: Vec<(u64, u64)> = Vec::new();
        for (i, c) in self.columns.iter().enumerate() {
            let mut v = c.mask();
            let mut combo = 1u64 << i;
            for &(r, rc) in &rows {
                let pivot = 63 - r.leading_zeros();
                if v >> pivot & 1 == 1 {
                    v ^= r;
                    combo ^= rc;
                }
            }
            if v == 0 {
                return Some(Bits::from_mask(self.domain, combo));
            }
            rows.push((v, combo));
            rows.sort_by_key(|r| std::cmp::Reverse(r.0));
        }
        None
    }

    /// A basis vector of the codomain outside the image, if the map is not onto.
    pub fn cokernel_witness(&self) -> Option<Bits> {
        let basis = echelon(self.columns.iter().map(|c| c.mask()).collect());
        (0..self.codomain).find_map(|j| {
            let e = Bits::unit(self.codomain, j);
            (!in_span(&basis, e.mask())).then_some(e)
        })
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.domain
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.codomain
    }

    /// Whether `y` lies in the image.
    pub fn image_contains(&self, y: &Bits) -> bool {
        let basis = echelon(self.columns.iter().map(|c| c.mask()).collect());
        in_span(&basis, y.mask())
    }
}

fn echelon(vectors: Vec<u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            let pivot = 63 - b.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

fn in_span(basis: &[u64], mut v: u64) -> bool {
    for &b in basis {
        let pivot = 63 - b.leading_zeros();
        if v >> pivot & 1 == 1 {
            v ^= b;
        }
    }
    v == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        let b: Bits = "0110".parse().unwrap();
        assert_eq!(b.to_string(), "0110");
        assert!(b.get(1) && b.get(2) && !b.get(0));
        assert!("01a".parse::<Bits>().is_err());
    }

    #[test]
    fn pairing() {
        let chi: Bits = "11".parse().unwrap();
        assert_eq!(chi.pair(&"10".parse().unwrap()), Sign::Minus);
        assert_eq!(chi.pair(&"11".parse().unwrap()), Sign::Plus);
    }

    #[test]
    fn rank_and_witnesses() {
        let m = F2Map::new(
            2,
            vec!["10".parse().unwrap(), "01".parse().unwrap(), "11".parse().unwrap()],
        );
        assert_eq!(m.rank(), 2);
        assert!(m.is_surjective());
        assert!(!m.is_injective());
        let k = m.kernel_witness().unwrap();
        assert!(m.apply(&k).is_zero() && !k.is_zero());

        let n = F2Map::new(2, vec!["11".parse().unwrap()]);
        assert!(n.is_injective());
        let w = n.cokernel_witness().unwrap();
        assert!(!n.image_contains(&w));
    }

    #[test]
    fn pullback_is_transpose() {
        let m = F2Map::new(2, vec!["11".parse().unwrap(), "01".parse().unwrap()]);
        let chi: Bits = "10".parse().unwrap();
        for x in Bits::all(2) {
            assert_eq!(chi.dot(&m.apply(&x)), m.pullback(&chi).dot(&x));
        }
    }
}
