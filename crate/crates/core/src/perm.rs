//! Permutations of `{0, 1, 2, 3}`.
//!
//! Each of the 24 elements of S4 is stored as its index in the
//! lexicographic ordering of image tuples, so that composition and
//! inversion are single table lookups.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

const fn build_images() -> [[u8; 4]; 24] {
    let mut out = [[0u8; 4]; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && a != c && b != c {
                    let d = 6 - a - b - c;
                    out[n] = [a as u8, b as u8, c as u8, d as u8];
                    n += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

const IMAGES: [[u8; 4]; 24] = build_images();

const fn index_of(img: [u8; 4]) -> u8 {
    let mut i = 0;
    while i < 24 {
        let p = IMAGES[i];
        if p[0] == img[0] && p[1] == img[1] && p[2] == img[2] && p[3] == img[3] {
            return i as u8;
        }
        i += 1;
    }
    panic!("not a permutation");
}

const fn build_compose() -> [[u8; 24]; 24] {
    let mut out = [[0u8; 24]; 24];
    let mut i = 0;
    while i < 24 {
        let mut j = 0;
        while j < 24 {
            // (i ∘ j)(x) = i(j(x))
            let p = IMAGES[i];
            let q = IMAGES[j];
            let img = [p[q[0] as usize], p[q[1] as usize], p[q[2] as usize], p[q[3] as usize]];
            out[i][j] = index_of(img);
            j += 1;
        }
        i += 1;
    }
    out
}

const fn build_inverse() -> [u8; 24] {
    let mut out = [0u8; 24];
    let mut i = 0;
    while i < 24 {
        let p = IMAGES[i];
        let mut inv = [0u8; 4];
        let mut x = 0;
        while x < 4 {
            inv[p[x] as usize] = x as u8;
            x += 1;
        }
        out[i] = index_of(inv);
        i += 1;
    }
    out
}

const fn build_sign() -> [i8; 24] {
    let mut out = [0i8; 24];
    let mut i = 0;
    while i < 24 {
        let p = IMAGES[i];
        let mut inversions = 0;
        let mut a = 0;
        while a < 4 {
            let mut b = a + 1;
            while b < 4 {
                if p[a] > p[b] {
                    inversions += 1;
                }
                b += 1;
            }
            a += 1;
        }
        out[i] = if inversions % 2 == 0 { 1 } else { -1 };
        i += 1;
    }
    out
}

static COMPOSE: [[u8; 24]; 24] = build_compose();
static INVERSE: [u8; 24] = build_inverse();
static SIGN: [i8; 24] = build_sign();

/// A permutation of the four vertices of a tetrahedron.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4(u8);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4(0);

    /// All 24 permutations in lexicographic order of their images.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..24u8).map(Perm4)
    }

    /// Builds the permutation sending `i` to `images[i]`. Returns `None`
    /// unless `images` is a bijection of `{0,1,2,3}`.
    pub fn from_images(images: [u8; 4]) -> Option<Perm4> {
        IMAGES.iter().position(|p| *p == images).map(|i| Perm4(i as u8))
    }

    pub fn from_index(index: usize) -> Perm4 {
        assert!(index < 24, "permutation index out of range");
        Perm4(index as u8)
    }

    /// Transposition of `a` and `b` (identity when `a == b`).
    pub fn swap(a: usize, b: usize) -> Perm4 {
        let mut img = [0, 1, 2, 3];
        img.swap(a, b);
        Perm4::from_images(img).unwrap()
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn images(self) -> [u8; 4] {
        IMAGES[self.0 as usize]
    }

    #[inline]
    pub fn apply(self, x: usize) -> usize {
        IMAGES[self.0 as usize][x] as usize
    }

    /// `self ∘ other`: apply `other` first.
    #[inline]
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4(COMPOSE[self.0 as usize][other.0 as usize])
    }

    #[inline]
    pub fn inverse(self) -> Perm4 {
        Perm4(INVERSE[self.0 as usize])
    }

    pub fn sign(self) -> i8 {
        SIGN[self.0 as usize]
    }

    pub fn is_odd(self) -> bool {
        self.sign() < 0
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.images();
        write!(f, "{a}{b}{c}{d}")
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

impl FromStr for Perm4 {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return Err(ParseError::new(format!("permutation `{s}` must have 4 digits")));
        }
        let mut img = [0u8; 4];
        for (slot, b) in img.iter_mut().zip(bytes) {
            if !(b'0'..=b'3').contains(b) {
                return Err(ParseError::new(format!("permutation `{s}` has a digit outside 0..3")));
            }
            *slot = b - b'0';
        }
        Perm4::from_images(img)
            .ok_or_else(|| ParseError::new(format!("`{s}` is not a permutation")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_first() {
        assert_eq!(Perm4::IDENTITY.images(), [0, 1, 2, 3]);
        assert_eq!(Perm4::all().count(), 24);
    }

    #[test]
    fn composition_matches_images() {
        for p in Perm4::all() {
            for q in Perm4::all() {
                let pq = p.compose(q);
                for x in 0..4 {
                    assert_eq!(pq.apply(x), p.apply(q.apply(x)));
                }
            }
        }
    }

    #[test]
    fn inverse_and_associativity() {
        for p in Perm4::all() {
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
            assert_eq!(p.inverse().compose(p), Perm4::IDENTITY);
            for q in Perm4::all() {
                for r in Perm4::all() {
                    assert_eq!(p.compose(q).compose(r), p.compose(q.compose(r)));
                }
            }
        }
    }

    #[test]
    fn signs() {
        assert_eq!(Perm4::IDENTITY.sign(), 1);
        assert_eq!(Perm4::swap(0, 3).sign(), -1);
        assert_eq!(Perm4::all().filter(|p| p.is_odd()).count(), 12);
        for p in Perm4::all() {
            for q in Perm4::all() {
                assert_eq!(p.compose(q).sign(), p.sign() * q.sign());
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for p in Perm4::all() {
            assert_eq!(p.to_string().parse::<Perm4>().unwrap(), p);
        }
        assert!("0012".parse::<Perm4>().is_err());
        assert!("012".parse::<Perm4>().is_err());
        assert!("0124".parse::<Perm4>().is_err());
    }
}
