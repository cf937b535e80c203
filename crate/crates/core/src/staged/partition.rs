/// Membership in `A^{i,side}`: cut ℕ into consecutive blocks of length
/// `2^i`; side 0 takes the even-numbered blocks. Equivalently, bit `i` of `x`
/// equals `side`.
pub fn partition_block(i: u32, side: u8, x: u128) -> bool {
    debug_assert!(side <= 1);
    i < 128 && ((x >> i) & 1) as u8 == side || i >= 128 && side == 0
}

/// Low-bit pattern of the cell `⋂_{q<len} A^{2q,l_q} ∩ A^{2q+1,r_q}` and the
/// number of fixed bits.
pub fn cell_pattern(sides: &[(u8, u8)]) -> (u128, u32) {
    let mut pat = 0u128;
    for (q, &(l, r)) in sides.iter().enumerate() {
        pat |= (l as u128) << (2 * q);
        pat |= (r as u128) << (2 * q + 1);
    }
    (pat, 2 * sides.len() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let a00: Vec<u128> = (0..8).filter(|&x| partition_block(0, 0, x)).collect();
        assert_eq!(a00, vec![0, 2, 4, 6]);
        assert!(partition_block(0, 0, 4));
        for (x, side) in [(0, 0), (1, 0), (2, 1), (3, 1), (4, 0), (5, 0)] {
            assert!(partition_block(1, side, x));
        }
        assert!((0..8).any(|x| partition_block(0, 0, x) && partition_block(1, 1, x)));
    }

    proptest! {
        #[test]
        fn sides_partition(i in 0u32..40, x in any::<u64>()) {
            let x = x as u128;
            prop_assert_ne!(partition_block(i, 0, x), partition_block(i, 1, x));
        }

        #[test]
        fn every_cell_is_nonempty_in_each_period(sides in proptest::collection::vec((0u8..2, 0u8..2), 0..6), shift in 0u128..1000) {
            let (pat, bits) = cell_pattern(&sides);
            let period = 1u128 << bits;
            let base = shift * period;
            let hits: Vec<u128> = (base..base + period)
                .filter(|&x| sides.iter().enumerate().all(|(q, &(l, r))| {
                    partition_block(2 * q as u32, l, x) && partition_block(2 * q as u32 + 1, r, x)
                }))
                .collect();
            prop_assert_eq!(hits, vec![base + pat]);
        }
    }
}
