//! Set partitions of `{0, .., k-1}`, the refinement order, and the signed
//! chain counts `c_{L', L}` of the partition lattice.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{input, Error, Result};

/// Largest ground set the enumerations accept (Bell(8) = 4140).
pub const MAX_PARTITION_SIZE: usize = 8;

/// A partition in restricted-growth form: `labels[i]` is the class of `i`,
/// and the first occurrence of class `c` comes after that of `c - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    labels: Vec<u8>,
}

impl SetPartition {
    /// Canonicalizes arbitrary class labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = HashMap::new();
        let canon = labels
            .iter()
            .map(|l| {
                let next = map.len() as u8;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self { labels: canon }
    }

    /// Builds a partition from explicit blocks covering `0..k` exactly once.
    pub fn from_blocks(k: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; k];
        for (b, block) in blocks.iter().enumerate() {
            for &i in block {
                if i >= k || labels[i] != usize::MAX {
                    return input(format!("blocks do not partition 0..{k}"));
                }
                labels[i] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return input(format!("blocks do not cover 0..{k}"));
        }
        Ok(Self::from_labels(&labels))
    }

    /// All singletons.
    pub fn finest(k: usize) -> Self {
        Self {
            labels: (0..k as u8).collect(),
        }
    }

    /// One block.
    pub fn coarsest(k: usize) -> Self {
        Self { labels: vec![0; k] }
    }

    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn n_blocks(&self) -> usize {
        self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_blocks()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(i);
        }
        out
    }

    /// `self <= other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        if self.labels.len() != other.labels.len() {
            return false;
        }
        // class of self -> class of other must be a function
        let mut image = [u8::MAX; 256];
        for (a, b) in self.labels.iter().zip(&other.labels) {
            let slot = &mut image[*a as usize];
            if *slot == u8::MAX {
                *slot = *b;
            } else if *slot != *b {
                return false;
            }
        }
        true
    }

    /// The partition of the blocks of `finer` induced by `self`, as a
    /// partition of `0..finer.n_blocks()`. Requires `finer <= self`.
    pub fn quotient(&self, finer: &SetPartition) -> Option<SetPartition> {
        if !finer.refines(self) {
            return None;
        }
        let mut labels = vec![0usize; finer.n_blocks()];
        for (a, b) in finer.labels.iter().zip(&self.labels) {
            labels[*a as usize] = *b as usize;
        }
        Some(Self::from_labels(&labels))
    }
}

impl std::fmt::Display for SetPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let items: Vec<String> = b.iter().map(|i| i.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        write!(f, "{}", blocks.join(""))
    }
}

fn check_size(k: usize) -> Result<()> {
    if k > MAX_PARTITION_SIZE {
        return Err(Error::Cap {
            what: "partition ground set",
            value: k,
            cap: MAX_PARTITION_SIZE,
        });
    }
    Ok(())
}

/// Every partition of `0..k`, in lexicographic restricted-growth order.
pub fn enumerate_partitions(k: usize) -> Result<Vec<SetPartition>> {
    check_size(k)?;
    let mut out = Vec::new();
    let mut labels = vec![0u8; k];
    fn rec(i: usize, max: u8, labels: &mut Vec<u8>, out: &mut Vec<SetPartition>) {
        if i == labels.len() {
            out.push(SetPartition {
                labels: labels.clone(),
            });
            return;
        }
        let top = if i == 0 { 0 } else { max + 1 };
        for l in 0..=top {
            labels[i] = l;
            rec(i + 1, max.max(l), labels, out);
        }
    }
    rec(0, 0, &mut labels, &mut out);
    Ok(out)
}

/// `c(finest_m, X)` for every `X` of the lattice on `m` points, keyed by `X`.
fn bottom_coefficients(m: usize) -> Result<&'static HashMap<SetPartition, i64>> {
    check_size(m)?;
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static HashMap<SetPartition, i64>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&m) {
        return Ok(t);
    }
    let mut all = enumerate_partitions(m)?;
    // fewer blocks = coarser; process finer partitions first
    all.sort_by_key(|p| std::cmp::Reverse(p.n_blocks()));
    let mut table: HashMap<SetPartition, i64> = HashMap::with_capacity(all.len());
    for (idx, x) in all.iter().enumerate() {
        let c = if idx == 0 {
            1
        } else {
            -all[..idx]
                .iter()
                .filter(|y| y.n_blocks() > x.n_blocks() && y.refines(x))
                .map(|y| table[y])
                .sum::<i64>()
        };
        table.insert(x.clone(), c);
    }
    let leaked: &'static HashMap<SetPartition, i64> = Box::leak(Box::new(table));
    cache.lock().unwrap().insert(m, leaked);
    Ok(leaked)
}

/// Signed chain count `c_{lower, upper}`: `1` on the diagonal, and otherwise
/// `-sum c_{lower, L1}` over `lower <= L1 < upper`. Zero when `lower` does
/// not refine `upper`. The interval above `lower` is a copy of the lattice
/// on `|lower|` points, so the recursion is run there once and cached.
pub fn chain_coefficient(lower: &SetPartition, upper: &SetPartition) -> Result<i64> {
    check_size(lower.ground_size())?;
    let Some(q) = upper.quotient(lower) else {
        return Ok(0);
    };
    Ok(bottom_coefficients(lower.n_blocks())?[&q])
}

/// `sum_{L'' <= L' <= L} c_{L', L} = 0` for every strict pair `L'' < L` on
/// `k` points.
pub fn verify_chain_sums(k: usize) -> Result<bool> {
    let all = enumerate_partitions(k)?;
    for upper in &all {
        for lowest in &all {
            if lowest == upper || !lowest.refines(upper) {
                continue;
            }
            let mut sum = 0i64;
            for mid in &all {
                if lowest.refines(mid) && mid.refines(upper) {
                    sum += chain_coefficient(mid, upper)?;
                }
            }
            if sum != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell(k: usize) -> usize {
        // Bell triangle
        let mut row = vec![1usize];
        for _ in 0..k {
            let mut next = vec![*row.last().unwrap()];
            for x in &row {
                let v = next.last().unwrap() + x;
                next.push(v);
            }
            row = next;
        }
        row[0]
    }

    fn factorial(n: usize) -> i64 {
        (1..=n as i64).product()
    }

    /// Signed count of strict chains `lower = L0 < L1 < .. < Lj = upper`,
    /// each contributing `(-1)^j`, by depth-first enumeration.
    fn brute_chains(lower: &SetPartition, upper: &SetPartition, all: &[SetPartition]) -> i64 {
        if lower == upper {
            return 1;
        }
        let mut total = 0;
        for mid in all {
            if mid != lower && lower.refines(mid) && mid.refines(upper) {
                total -= brute_chains(mid, upper, all);
            }
        }
        total
    }

    #[test]
    fn counts_match_bell_numbers() {
        for k in 0..=8 {
            assert_eq!(enumerate_partitions(k).unwrap().len(), bell(k), "k={k}");
        }
        assert!(enumerate_partitions(9).is_err());
    }

    #[test]
    fn finest_to_coarsest_three_points() {
        let c = chain_coefficient(&SetPartition::finest(3), &SetPartition::coarsest(3)).unwrap();
        assert_eq!(c, 2);
    }

    #[test]
    fn finest_to_coarsest_is_signed_factorial() {
        for k in 1..=8 {
            let c =
                chain_coefficient(&SetPartition::finest(k), &SetPartition::coarsest(k)).unwrap();
            let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
            assert_eq!(c, sign * factorial(k - 1), "k={k}");
        }
    }

    #[test]
    fn recursion_matches_chain_enumeration() {
        for k in 1..=5 {
            let all = enumerate_partitions(k).unwrap();
            for a in &all {
                for b in &all {
                    let want = if a.refines(b) { brute_chains(a, b, &all) } else { 0 };
                    assert_eq!(chain_coefficient(a, b).unwrap(), want, "{a} -> {b}");
                }
            }
        }
    }

    #[test]
    fn interval_product_formula() {
        // c_{L', L} = prod over blocks B of L of (-1)^{n_B - 1} (n_B - 1)!,
        // n_B = number of L'-blocks inside B
        let all = enumerate_partitions(6).unwrap();
        for a in all.iter().step_by(7) {
            for b in &all {
                if !a.refines(b) {
                    continue;
                }
                let mut want = 1i64;
                for block in b.blocks() {
                    let mut inner: Vec<u8> = block.iter().map(|&i| a.labels()[i]).collect();
                    inner.sort();
                    inner.dedup();
                    let n = inner.len();
                    want *= if (n - 1).is_multiple_of(2) { 1 } else { -1 } * factorial(n - 1);
                }
                assert_eq!(chain_coefficient(a, b).unwrap(), want);
            }
        }
    }

    #[test]
    fn chain_sums_vanish_up_to_six() {
        for k in 1..=6 {
            assert!(verify_chain_sums(k).unwrap(), "k={k}");
        }
    }

    #[test]
    fn refinement_and_blocks() {
        let p = SetPartition::from_blocks(4, &[vec![0, 2], vec![1], vec![3]]).unwrap();
        let q = SetPartition::from_blocks(4, &[vec![0, 2, 3], vec![1]]).unwrap();
        assert!(p.refines(&q));
        assert!(!q.refines(&p));
        assert_eq!(p.to_string(), "{0,2}{1}{3}");
        assert_eq!(q.quotient(&p).unwrap().labels(), &[0, 1, 0]);
        assert!(SetPartition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(SetPartition::from_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }
}
