//! Plain bitvector with constant-time rank and select.
//!
//! Positions are 1-based to match state numbering: `rank1(i)` counts ones in
//! `1..=i` and `select1(k)` is the position of the `k`-th one.
//!
//! Rank uses one cumulative count per 64-bit word. Select keeps the positions
//! of all ones, which costs a word per one; the directories are rebuilt on
//! load and never serialized.

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RankSelectBits {
    len: usize,
    words: Vec<u64>,
    // ones strictly before word w
    word_ranks: Vec<u32>,
    ones: Vec<u32>,
}

impl RankSelectBits {
    /// Builds from 1-based bits: `bits[0]` is ignored.
    pub fn from_one_based(bits: &[bool]) -> Self {
        Self::from_bits(bits.iter().skip(1).copied())
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0u64);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (len % 64);
            }
            len += 1;
        }
        Self::from_words(len, words)
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(len.div_ceil(64), 0);
        if len % 64 != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        let mut word_ranks = Vec::with_capacity(words.len() + 1);
        let mut ones = Vec::new();
        let mut acc = 0u32;
        for (w, &word) in words.iter().enumerate() {
            word_ranks.push(acc);
            acc += word.count_ones();
            let mut rest = word;
            while rest != 0 {
                let bit = rest.trailing_zeros() as usize;
                ones.push((w * 64 + bit + 1) as u32);
                rest &= rest - 1;
            }
        }
        word_ranks.push(acc);
        RankSelectBits {
            len,
            words,
            word_ranks,
            ones,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones.len()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Bit at 1-based position `i`.
    pub fn access(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.len);
        let p = i - 1;
        self.words[p / 64] >> (p % 64) & 1 == 1
    }

    /// Number of ones in positions `1..=i`; `rank1(0) == 0`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let w = i / 64;
        let r = i % 64;
        let mut count = self.word_ranks[w] as usize;
        if r != 0 {
            count += (self.words[w] & ((1u64 << r) - 1)).count_ones() as usize;
        }
        count
    }

    /// Position of the `k`-th one, `1 <= k <= count_ones()`.
    #[inline]
    pub fn select1(&self, k: usize) -> usize {
        self.ones[k - 1] as usize
    }
}
