//! Packed bit rows used for adjacency and vertex sets.

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[inline]
pub(crate) fn test(bits: &[u64], i: usize) -> bool {
    bits[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
}

#[inline]
pub(crate) fn set(bits: &mut [u64], i: usize) {
    bits[i / WORD_BITS] |= 1 << (i % WORD_BITS);
}

#[inline]
pub(crate) fn clear(bits: &mut [u64], i: usize) {
    bits[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
}

#[inline]
pub(crate) fn count(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub(crate) fn is_empty(bits: &[u64]) -> bool {
    bits.iter().all(|&w| w == 0)
}

#[inline]
pub(crate) fn and_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= *s;
    }
}

/// Clears every bit with index `<= v`.
#[inline]
pub(crate) fn clear_through(bits: &mut [u64], v: usize) {
    let w = v / WORD_BITS;
    for word in &mut bits[..w] {
        *word = 0;
    }
    let keep = v % WORD_BITS + 1;
    bits[w] &= if keep == WORD_BITS { 0 } else { !0u64 << keep };
}

/// Smallest set bit with index `>= from`.
#[inline]
pub(crate) fn next_one(bits: &[u64], from: usize) -> Option<usize> {
    let mut wi = from / WORD_BITS;
    if wi >= bits.len() {
        return None;
    }
    let mut w = bits[wi] & (!0u64 << (from % WORD_BITS));
    loop {
        if w != 0 {
            return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
        }
        wi += 1;
        if wi == bits.len() {
            return None;
        }
        w = bits[wi];
    }
}

/// Iterates over the indices of set bits in ascending order.
pub(crate) fn ones(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(wi, &w)| {
        let mut word = w;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let tz = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(wi * WORD_BITS + tz)
        })
    })
}
