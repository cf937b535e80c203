//! Cantor pairing on `u64` and on arbitrary-precision naturals.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `(x+y)(x+y+1)/2 + y`, or `None` when the code does not fit in a `u64`.
pub fn checked_pair(x: u64, y: u64) -> Option<u64> {
    let d = (x as u128) + (y as u128);
    let z = d.checked_mul(d + 1)? / 2 + y as u128;
    u64::try_from(z).ok()
}

/// Cantor pairing. Panics if the code overflows `u64`.
pub fn pair(x: u64, y: u64) -> u64 {
    checked_pair(x, y).unwrap_or_else(|| panic!("pair({x}, {y}) overflows u64"))
}

/// Inverse of [`pair`].
pub fn unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    let mut w = (8 * z + 1).isqrt();
    w = (w - 1) / 2;
    let t = w * (w + 1) / 2;
    let y = z - t;
    ((w - y) as u64, y as u64)
}

pub fn left(z: u64) -> u64 {
    unpair(z).0
}

pub fn right(z: u64) -> u64 {
    unpair(z).1
}

pub fn pair_big(x: &BigUint, y: &BigUint) -> BigUint {
    let d = x + y;
    let t = (&d * (&d + BigUint::one())) >> 1u32;
    t + y
}

pub fn unpair_big(z: &BigUint) -> (BigUint, BigUint) {
    if z.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    let s = ((z << 3u32) + BigUint::one()).sqrt();
    let w = (s - BigUint::one()) >> 1u32;
    let t = (&w * (&w + BigUint::one())) >> 1u32;
    let y = z - t;
    let x = &w - &y;
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_codes() {
        assert_eq!(pair(0, 0), 0);
        assert_eq!(pair(1, 2), 8);
        assert_eq!(unpair(8), (1, 2));
        assert_eq!(left(8), 1);
        assert_eq!(right(8), 2);
    }

    fn pair_by_search(z: u64) -> (u64, u64) {
        for d in 0.. {
            for y in 0..=d {
                if checked_pair(d - y, y) == Some(z) {
                    return (d - y, y);
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn roundtrip_below_256() {
        for x in 0..256 {
            for y in 0..256 {
                let z = pair(x, y);
                assert_eq!(unpair(z), (x, y));
            }
        }
        for z in 0..500 {
            assert_eq!(unpair(z), pair_by_search(z));
        }
    }

    #[test]
    fn bijective_on_prefix() {
        let mut seen = vec![false; 2080];
        for x in 0..64 {
            for y in 0..64 - x {
                let z = pair(x, y) as usize;
                assert!(!seen[z]);
                seen[z] = true;
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn overflow_detected() {
        assert!(checked_pair(u64::MAX, 1).is_none());
        let big = (1u64 << 31) - 1;
        assert!(checked_pair(big, big).is_some());
    }

    proptest! {
        #[test]
        fn unpair_inverts_pair(x in 0u64..(1 << 31), y in 0u64..(1 << 31)) {
            prop_assert_eq!(unpair(pair(x, y)), (x, y));
        }

        #[test]
        fn pair_inverts_unpair(z in any::<u64>()) {
            let (x, y) = unpair(z);
            prop_assert_eq!(checked_pair(x, y), Some(z));
        }

        #[test]
        fn big_agrees_with_small(x in 0u64..(1 << 31), y in 0u64..(1 << 31)) {
            let z = pair_big(&BigUint::from(x), &BigUint::from(y));
            prop_assert_eq!(z.clone(), BigUint::from(pair(x, y)));
            prop_assert_eq!(unpair_big(&z), (BigUint::from(x), BigUint::from(y)));
        }
    }
}
