/// Fixed-length bitset used for adjacency rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> BitRow {
        BitRow { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn ones(len: usize) -> BitRow {
        let mut r = BitRow { words: vec![u64::MAX; len.div_ceil(64)], len };
        r.clear_tail();
        r
    }

    fn clear_tail(&mut self) {
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// `|self ∧ other|` without materializing the intersection.
    #[inline]
    pub fn and_count(&self, other: &BitRow) -> u32 {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum()
    }

    /// `out = a ∧ b`, returning the population count.
    #[inline]
    pub fn and_into(a: &BitRow, b: &BitRow, out: &mut BitRow) -> u32 {
        let mut c = 0;
        for ((o, x), y) in out.words.iter_mut().zip(&a.words).zip(&b.words) {
            *o = x & y;
            c += o.count_ones();
        }
        c
    }

    pub fn and(&self, other: &BitRow) -> BitRow {
        let mut out = BitRow::zeros(self.len);
        BitRow::and_into(self, other, &mut out);
        out
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = BitRow::zeros(130);
        let mut b = BitRow::zeros(130);
        for i in [0, 5, 64, 100, 129] {
            a.set(i);
        }
        for i in [5, 64, 128, 129] {
            b.set(i);
        }
        assert_eq!(a.count(), 5);
        assert_eq!(a.and_count(&b), 3);
        assert_eq!(a.and(&b).iter_ones().collect::<Vec<_>>(), vec![5, 64, 129]);
        assert!(a.get(100) && !a.get(101) && !a.get(500));
        assert_eq!(BitRow::ones(130).count(), 130);
        assert_eq!(BitRow::ones(128).count(), 128);
    }
}
