use num_bigint::BigInt;
use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact partition numbers `p(0), …, p(max_a)`.
#[derive(Debug, Clone)]
pub struct PartitionTable {
    counts: Vec<BigUint>,
}

impl PartitionTable {
    /// Fills the table with Euler's pentagonal-number recurrence
    /// `p(a) = Σ_{k≥1} (−1)^{k+1} [p(a − k(3k−1)/2) + p(a − k(3k+1)/2)]`.
    pub fn new(max_a: usize) -> PartitionTable {
        let mut p: Vec<BigInt> = Vec::with_capacity(max_a + 1);
        p.push(BigInt::from(1));
        for a in 1..=max_a {
            let mut total = BigInt::zero();
            for k in 1.. {
                let g1 = k * (3 * k - 1) / 2;
                if g1 > a {
                    break;
                }
                let mut term = p[a - g1].clone();
                let g2 = k * (3 * k + 1) / 2;
                if g2 <= a {
                    term += &p[a - g2];
                }
                if k % 2 == 1 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            debug_assert!(!total.is_negative());
            p.push(total);
        }
        PartitionTable {
            counts: p
                .into_iter()
                .map(|v| v.to_biguint().expect("partition numbers are non-negative"))
                .collect(),
        }
    }

    pub fn max_a(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn get(&self, a: usize) -> &BigUint {
        &self.counts[a]
    }

    /// `p(a)` as a float; `inf` beyond the double range.
    pub fn get_f64(&self, a: usize) -> f64 {
        self.counts[a].to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }
}

pub fn partition_count(a: usize) -> BigUint {
    PartitionTable::new(a).counts.swap_remove(a)
}

/// Hardy–Ramanujan leading asymptotic `exp(π√(2a/3)) / (4√3 a)`.
pub fn hardy_ramanujan(a: usize) -> f64 {
    let a = a as f64;
    (std::f64::consts::PI * (2.0 * a / 3.0).sqrt()).exp() / (4.0 * 3f64.sqrt() * a)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Partitions of `a` into parts no larger than `max_part`.
    fn brute(a: usize, max_part: usize) -> u64 {
        if a == 0 {
            return 1;
        }
        (1..=max_part.min(a)).map(|part| brute(a - part, part)).sum()
    }

    #[test]
    fn small_values() {
        assert_eq!(partition_count(0), BigUint::from(1u32));
        assert_eq!(partition_count(1), BigUint::from(1u32));
        assert_eq!(partition_count(10), BigUint::from(42u32));
    }

    #[test]
    fn matches_brute_force() {
        let table = PartitionTable::new(30);
        for a in 0..=30 {
            assert_eq!(*table.get(a), BigUint::from(brute(a, a)), "a = {a}");
        }
    }

    #[test]
    fn large_values_exact() {
        assert_eq!(partition_count(100).to_string(), "190569292");
        assert_eq!(partition_count(1000).to_string(), "24061467864032622473692149727991");
    }

    #[test]
    fn hardy_ramanujan_ratio() {
        let ratio = hardy_ramanujan(100) / PartitionTable::new(100).get_f64(100);
        assert!((0.95..=1.10).contains(&ratio), "ratio {ratio}");
    }
}
