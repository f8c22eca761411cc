//! Exact expectations of edge-indicator monomials under the matching-union
//! distribution, and a sampling cross-check.
//!
//! A monomial is a product of indicators `x_{u,v,j}` ("sample positions `u`
//! and `v` are matched in matching `j`"). Its vertices split into connected
//! components `C_1..C_k`; component `i` has `v_i` vertices and `d_ij` edges
//! from matching `j`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use super::partition::{chain_coefficient, enumerate_partitions, SetPartition, MAX_PARTITION_SIZE};
use super::rational::BivariateRational;
use crate::error::{input, precondition, Error, Result};
use crate::instances::{select_vertices, sample_matching_union, PmlParams};

/// Product of distinct indicators `x_{u,v,j}`, stored with `u < v`.
/// Indicators are idempotent, so repeated terms collapse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial {
    terms: Vec<(u32, u32, u32)>,
}

impl Monomial {
    pub fn new(terms: &[(u32, u32, u32)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(u, v, j) in terms {
            if u == v {
                return input(format!("x_{{{u},{v},{j}}} is a self-loop"));
            }
            set.insert((u.min(v), u.max(v), j));
        }
        Ok(Self {
            terms: set.into_iter().collect(),
        })
    }

    /// Parses `u-v@j` terms separated by commas or whitespace, e.g.
    /// `"0-1@0, 1-2@1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let bad = || Error::Parse(format!("bad monomial term `{tok}`, expected u-v@j"));
            let (edge, j) = tok.split_once('@').ok_or_else(bad)?;
            let (u, v) = edge.split_once('-').ok_or_else(bad)?;
            let p = |x: &str| x.trim().parse::<u32>().map_err(|_| bad());
            terms.push((p(u)?, p(v)?, p(j)?));
        }
        Self::new(&terms)
    }

    pub fn terms(&self) -> &[(u32, u32, u32)] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.len()
    }

    pub fn vertices(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.terms.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        set.into_iter().collect()
    }

    /// A vertex with two different partners in one matching makes the
    /// monomial identically zero.
    pub fn is_feasible(&self) -> bool {
        let mut seen = HashMap::new();
        for &(u, v, j) in &self.terms {
            for (a, b) in [(u, v), (v, u)] {
                if let Some(prev) = seen.insert((a, j), b) {
                    if prev != b {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn profile(&self) -> ComponentProfile {
        ComponentProfile::of(self)
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(u, v, j)| format!("{u}-{v}@{j}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Components ordered by smallest vertex; matching indices compressed to
/// the ones that occur.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentProfile {
    pub components: Vec<Vec<u32>>,
    /// `v_i`
    pub sizes: Vec<usize>,
    /// `d[i][j]` for the `j`-th matching index in `matchings`
    pub d: Vec<Vec<usize>>,
    pub matchings: Vec<u32>,
}

impl ComponentProfile {
    fn of(mono: &Monomial) -> Self {
        let verts = mono.vertices();
        let index: HashMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(u, v, _) in &mono.terms {
            let (a, b) = (find(&mut parent, index[&u]), find(&mut parent, index[&v]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comp_of_root = BTreeMap::new();
        let mut components: Vec<Vec<u32>> = Vec::new();
        for (i, &v) in verts.iter().enumerate() {
            let r = find(&mut parent, i);
            let next = components.len();
            let c = *comp_of_root.entry(r).or_insert(next);
            if c == components.len() {
                components.push(Vec::new());
            }
            components[c].push(v);
        }
        let matchings: Vec<u32> = mono
            .terms
            .iter()
            .map(|t| t.2)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut d = vec![vec![0usize; matchings.len()]; components.len()];
        for &(u, _, j) in &mono.terms {
            let c = comp_of_root[&find(&mut parent, index[&u])];
            let jj = matchings.binary_search(&j).unwrap();
            d[c][jj] += 1;
        }
        let sizes = components.iter().map(Vec::len).collect();
        Self {
            components,
            sizes,
            d,
            matchings,
        }
    }

    /// Builds a profile straight from `(v_i, d_ij)` data.
    pub fn from_counts(sizes: Vec<usize>, d: Vec<Vec<usize>>) -> Result<Self> {
        if sizes.len() != d.len() {
            return input("one row of d per component is required");
        }
        let width = d.first().map_or(0, Vec::len);
        if d.iter().any(|r| r.len() != width) {
            return input("d must be rectangular");
        }
        Ok(Self {
            components: Vec::new(),
            sizes,
            d,
            matchings: (0..width as u32).collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn total_vertices(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn total_edges(&self) -> usize {
        self.d.iter().flatten().sum()
    }

    /// `s_{S,j} = sum_{i in S} d_ij` for every block `S` of `part` and
    /// matching `j`.
    pub fn block_sums(&self, part: &SetPartition) -> Vec<usize> {
        let mut out = Vec::new();
        for block in part.blocks() {
            for j in 0..self.matchings.len() {
                out.push(block.iter().map(|&i| self.d[i][j]).sum());
            }
        }
        out
    }

    /// `K(L)`: odd multipliers `1, 3, .., 2s-1` for every block sum `s`,
    /// as a multiset `odd -> multiplicity`.
    pub fn odd_multiset(&self, part: &SetPartition) -> BTreeMap<u32, u32> {
        let mut k = BTreeMap::new();
        for s in self.block_sums(part) {
            for t in 1..=s as u32 {
                *k.entry(2 * t - 1).or_insert(0) += 1;
            }
        }
        k
    }

    fn check_partition(&self, part: &SetPartition) -> Result<()> {
        if part.ground_size() != self.k() {
            return input(format!(
                "partition of {} points given for {} components",
                part.ground_size(),
                self.k()
            ));
        }
        Ok(())
    }
}

/// `R_d = prod_{j'=1..d} l / (M - (2j'-1) l)`.
pub fn r_factor(d: usize) -> BivariateRational {
    let mut den = BTreeMap::new();
    for t in 1..=d as u32 {
        den.insert(2 * t - 1, 1);
    }
    BivariateRational::reciprocal_of(&den).mul_l_pow(d as u32)
}

/// `f_L = prod_{S in L} prod_j R_{s_{S,j}}`.
pub fn f_l(profile: &ComponentProfile, part: &SetPartition) -> Result<BivariateRational> {
    profile.check_partition(part)?;
    Ok(BivariateRational::reciprocal_of(&profile.odd_multiset(part)).mul_l_pow(profile.total_edges() as u32))
}

/// `f_L` with every `R_d` replaced by `R'_d = R_d / l^d`, i.e. `1 / K(L)`.
pub fn f_l_reduced(profile: &ComponentProfile, part: &SetPartition) -> Result<BivariateRational> {
    profile.check_partition(part)?;
    Ok(BivariateRational::reciprocal_of(&profile.odd_multiset(part)))
}

/// `f'_L = sum_{L' <= L} c_{L', L} f_{L'}`.
pub fn f_prime_l(profile: &ComponentProfile, part: &SetPartition) -> Result<BivariateRational> {
    moebius_sum(profile, part, f_l)
}

/// `f'_L` in the `R'` normalization.
pub fn f_prime_l_reduced(profile: &ComponentProfile, part: &SetPartition) -> Result<BivariateRational> {
    moebius_sum(profile, part, f_l_reduced)
}

fn moebius_sum(
    profile: &ComponentProfile,
    part: &SetPartition,
    f: fn(&ComponentProfile, &SetPartition) -> Result<BivariateRational>,
) -> Result<BivariateRational> {
    profile.check_partition(part)?;
    let mut acc = BivariateRational::zero();
    for lower in enumerate_partitions(profile.k())? {
        let c = chain_coefficient(&lower, part)?;
        if c != 0 {
            acc = acc.add(&f(profile, &lower)?.scale(&BigRational::from_integer(c.into())));
        }
    }
    Ok(acc)
}

/// `w_m(l) = sum_{X} c_{0, X} l^{|X|}` over the lattice on `m` points, as
/// coefficients indexed by the power of `l`.
fn block_weight(m: usize) -> Result<&'static [i64]> {
    static CACHE: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    if m > MAX_PARTITION_SIZE {
        return Err(Error::Cap {
            what: "components",
            value: m,
            cap: MAX_PARTITION_SIZE,
        });
    }
    let table = CACHE.get_or_init(|| {
        (0..=MAX_PARTITION_SIZE)
            .map(|m| {
                let mut w = vec![0i64; m + 1];
                let bottom = SetPartition::finest(m);
                for x in enumerate_partitions(m).expect("within cap") {
                    w[x.n_blocks()] += chain_coefficient(&bottom, &x).expect("within cap");
                }
                w
            })
            .collect()
    });
    Ok(&table[m])
}

fn check_components(profile: &ComponentProfile) -> Result<()> {
    if profile.k() > MAX_PARTITION_SIZE {
        return Err(Error::Cap {
            what: "components",
            value: profile.k(),
            cap: MAX_PARTITION_SIZE,
        });
    }
    Ok(())
}

/// `E[P] = sum_L l^{-sum v + |L|} f'_L`, evaluated as written.
pub fn expectation_by_definition(profile: &ComponentProfile) -> Result<BivariateRational> {
    check_components(profile)?;
    let mut acc = BivariateRational::zero();
    for part in enumerate_partitions(profile.k())? {
        acc = acc.add(&f_prime_l(profile, &part)?.mul_l_pow(part.n_blocks() as u32));
    }
    divide_out_l(acc, profile.total_vertices())
}

/// Same value, with the order of summation swapped:
/// `E[P] = l^{-sum v} sum_{L'} f_{L'} w_{|L'|}(l)`. Terms sharing the
/// multiset `K(L')` are merged before any rational arithmetic.
pub fn expectation_of_profile(profile: &ComponentProfile) -> Result<BivariateRational> {
    check_components(profile)?;
    let mut grouped: BTreeMap<BTreeMap<u32, u32>, Vec<BigInt>> = BTreeMap::new();
    for part in enumerate_partitions(profile.k())? {
        let w = block_weight(part.n_blocks())?;
        let slot = grouped
            .entry(profile.odd_multiset(&part))
            .or_insert_with(|| vec![BigInt::zero(); profile.k() + 1]);
        for (e, c) in w.iter().enumerate() {
            slot[e] += *c;
        }
    }
    let mut acc = BivariateRational::zero();
    for (den, weight) in grouped {
        let base = BivariateRational::reciprocal_of(&den);
        for (e, c) in weight.into_iter().enumerate() {
            if !c.is_zero() {
                let term = base.scale(&BigRational::from_integer(c)).mul_l_pow(e as u32);
                acc = acc.add(&term);
            }
        }
    }
    divide_out_l(acc.mul_l_pow(profile.total_edges() as u32), profile.total_vertices())
}

fn divide_out_l(acc: BivariateRational, sum_v: usize) -> Result<BivariateRational> {
    if acc.is_zero() {
        return Ok(acc);
    }
    acc.div_l_pow(sum_v as u32).ok_or_else(|| {
        Error::Precondition(format!("numerator is not divisible by l^{sum_v}"))
    })
}

/// Exact `E[P]` as a rational function of `(M, l)`; zero for infeasible
/// monomials. Valid whenever the block size `M/l` is at least the number
/// of vertices of `P`.
pub fn exact_expectation(mono: &Monomial) -> Result<BivariateRational> {
    if !mono.is_feasible() {
        return Ok(BivariateRational::zero());
    }
    expectation_of_profile(&mono.profile())
}

#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub samples: u64,
    pub hits: u64,
    pub mean: f64,
    pub std_error: f64,
}

impl McEstimate {
    /// Whether `target` is within `sigmas` standard errors. The standard
    /// error is floored at the one implied by `target` itself so that a
    /// run with no hits is still judged.
    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        let n = self.samples as f64;
        let se = self.std_error.max((target * (1.0 - target) / n).sqrt());
        (self.mean - target).abs() <= sigmas * se
    }
}

/// Monte Carlo estimate of `E[P]` on the host `P_{M,l}`: positions
/// `0..V-1` of the monomial are relabelled in increasing order and mapped
/// to the first `V` sampled vertices. Needs `V <= M/l`, so the selection
/// never fails.
pub fn monte_carlo_expectation(
    mono: &Monomial,
    m: usize,
    l: usize,
    samples: u64,
    rng: &mut impl Rng,
) -> Result<McEstimate> {
    let verts = mono.vertices();
    let profile = mono.profile();
    let n = verts.len().max(1);
    let params = PmlParams::new(n, m, l, profile.matchings.len().max(1))?;
    if n > params.block_size() {
        return precondition(format!(
            "monomial has {n} vertices but blocks only hold {}",
            params.block_size()
        ));
    }
    let pos: HashMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let terms: Vec<(usize, usize, usize)> = mono
        .terms
        .iter()
        .map(|&(u, v, j)| (pos[&u], pos[&v], profile.matchings.binary_search(&j).unwrap()))
        .collect();
    let mut hits = 0u64;
    for _ in 0..samples {
        let host = sample_matching_union(&params, rng)?;
        let sel = select_vertices(&params, rng)?;
        debug_assert!(!sel.failed);
        if terms
            .iter()
            .all(|&(a, b, j)| host.partner[j][sel.chosen[a] as usize] == sel.chosen[b])
        {
            hits += 1;
        }
    }
    let mean = hits as f64 / samples.max(1) as f64;
    let std_error = (mean * (1.0 - mean) / samples.max(1) as f64).sqrt();
    Ok(McEstimate {
        samples,
        hits,
        mean,
        std_error,
    })
}

/// Value of `E[P]` at integer `(M, l)` as `f64`.
pub fn expectation_value(e: &BivariateRational, m: usize, l: usize) -> Result<f64> {
    let v = e.eval_int(m as i64, l as i64)?;
    Ok(v.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn mono(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    /// Independent oracle: sum over the exact grouping of components into
    /// blocks, `l^{-sum v} sum_L (l)_{|L|} f_L` with the falling factorial
    /// evaluated numerically.
    fn by_block_assignment(p: &ComponentProfile, m: i64, l: i64) -> BigRational {
        let mut total = BigRational::zero();
        for part in enumerate_partitions(p.k()).unwrap() {
            let mut falling = BigRational::from_integer(1.into());
            for t in 0..part.n_blocks() as i64 {
                falling *= BigRational::from_integer((l - t).into());
            }
            total += falling * f_l(p, &part).unwrap().eval_int(m, l).unwrap();
        }
        total / num_traits::pow(BigRational::from_integer(l.into()), p.total_vertices())
    }

    #[test]
    fn r_two_at_ten_one() {
        assert_eq!(r_factor(2).eval_int(10, 1).unwrap(), q(1, 63));
    }

    #[test]
    fn single_edge() {
        let e = exact_expectation(&mono("0-1@0")).unwrap();
        assert_eq!(e.eval_int(10, 2).unwrap(), q(1, 8));
        assert_eq!(e.eval_int(10, 1).unwrap(), q(1, 9));
    }

    #[test]
    fn path_of_two_matchings() {
        let e = exact_expectation(&mono("0-1@0,1-2@1")).unwrap();
        assert_eq!(e.eval_int(10, 2).unwrap(), q(1, 64));
    }

    #[test]
    fn two_disjoint_same_matching_edges() {
        // same block with prob 1/l: 1/((M-l)(M-3l)); otherwise 1/(M-l)^2
        let e = exact_expectation(&mono("0-1@0,2-3@0")).unwrap();
        assert_eq!(e.eval_int(10, 1).unwrap(), q(1, 63));
        // l = 2, B = 6: each pair lands in one block w.p. 1/2, then the two
        // pairs share a block w.p. 1/2
        let want = q(1, 4) * (q(1, 2) * q(1, 5 * 3) + q(1, 2) * q(1, 25));
        assert_eq!(e.eval_int(12, 2).unwrap(), want);
    }

    #[test]
    fn infeasible_is_zero() {
        let m = mono("0-1@0,0-2@0");
        assert!(!m.is_feasible());
        assert!(exact_expectation(&m).unwrap().is_zero());
    }

    #[test]
    fn profile_of_path_and_edge() {
        let p = mono("0-1@3, 1-2@5, 7-8@3").profile();
        assert_eq!(p.components, vec![vec![0, 1, 2], vec![7, 8]]);
        assert_eq!(p.sizes, vec![3, 2]);
        assert_eq!(p.matchings, vec![3, 5]);
        assert_eq!(p.d, vec![vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn definition_and_swapped_sum_agree() {
        for s in [
            "0-1@0",
            "0-1@0,2-3@0",
            "0-1@0,2-3@1,4-5@0",
            "0-1@0,1-2@1,2-3@0,4-5@1",
            "0-1@0,2-3@0,4-5@0,6-7@1",
        ] {
            let p = mono(s).profile();
            let a = expectation_by_definition(&p).unwrap();
            let b = expectation_of_profile(&p).unwrap();
            assert!(a.equals(&b), "{s}: {a} vs {b}");
        }
    }

    #[test]
    fn matches_block_assignment_oracle() {
        for s in [
            "0-1@0,2-3@0,4-5@0",
            "0-1@0,1-2@1,3-4@0",
            "0-1@0,0-1@1,2-3@1,4-5@2",
            "0-1@0,1-2@1,0-2@2,3-4@2",
        ] {
            let p = mono(s).profile();
            let e = expectation_of_profile(&p).unwrap();
            for (m, l) in [(24, 2), (30, 3), (40, 4), (12, 1)] {
                assert_eq!(e.eval_int(m, l).unwrap(), by_block_assignment(&p, m, l), "{s} at ({m},{l})");
            }
        }
    }

    #[test]
    fn weights_are_falling_factorials() {
        for m in 0..=6 {
            let w = block_weight(m).unwrap();
            for l in 0..10i64 {
                let value: i64 = w.iter().enumerate().map(|(e, c)| c * l.pow(e as u32)).sum();
                let falling: i64 = (0..m as i64).map(|t| l - t).product();
                assert_eq!(value, falling, "m={m} l={l}");
            }
        }
    }

    #[test]
    fn monte_carlo_single_edge() {
        let mut rng = substream(11, 0);
        let est = monte_carlo_expectation(&mono("0-1@0"), 12, 2, 200_000, &mut rng).unwrap();
        assert!(est.within(0.1, 4.0), "{est:?}");
    }

    #[test]
    fn monte_carlo_rejects_oversized_monomials() {
        let mut rng = substream(1, 0);
        assert!(monte_carlo_expectation(&mono("0-1@0,2-3@1,4-5@0"), 8, 2, 10, &mut rng).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(Monomial::parse("0-1").is_err());
        assert!(Monomial::parse("a-1@0").is_err());
        assert!(Monomial::parse("1-1@0").is_err());
        assert_eq!(mono("1-0@2, 0-1@2").terms(), &[(0, 1, 2)]);
    }
}
