//! Permutations on `[0, N)`, Young subgroups, double cosets and the
//! symmetrization re-randomizer.
//!
//! Permutations are stored as dual explicit tables so forward and backward
//! application both cost O(1); the attack simulator queries both directions
//! at unit cost and the oracle model must not favor either.
//!
//! All values are immutable after construction. Samplers take an explicit
//! seeded RNG; parallel experiments must use disjoint streams.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `N` for which brute-force enumeration of `S_N` is allowed by
/// default (`8! = 40320` permutations). Beyond this, coset statistics fall
/// back to Monte Carlo sampling.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// Largest subgroup order the element enumerator will materialize.
const SUBGROUP_ELEMENT_CAP: u64 = 4_000_000;

/// An explicit bijection on `[0, N)` with O(1) application in both
/// directions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    forward: Vec<usize>,
    backward: Vec<usize>,
}

impl Permutation {
    /// The identity permutation on `[0, n)`.
    pub fn identity(n: usize) -> Self {
        let table: Vec<usize> = (0..n).collect();
        Permutation {
            forward: table.clone(),
            backward: table,
        }
    }

    /// Builds a permutation from its image table, verifying bijectivity.
    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut backward = vec![usize::MAX; n];
        for (i, &img) in forward.iter().enumerate() {
            if img >= n {
                return Err(Error::Config(format!(
                    "image {img} out of range for permutation of size {n}"
                )));
            }
            if backward[img] != usize::MAX {
                return Err(Error::Config(format!(
                    "image {img} appears twice; table is not a bijection"
                )));
            }
            backward[img] = i;
        }
        Ok(Permutation { forward, backward })
    }

    /// Uniform sample from `S_n`, deterministic given the RNG state.
    pub fn sample_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut forward: Vec<usize> = (0..n).collect();
        // Fisher-Yates, high to low.
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            forward.swap(i, j);
        }
        Self::from_tables_unchecked(forward)
    }

    fn from_tables_unchecked(forward: Vec<usize>) -> Self {
        let mut backward = vec![0usize; forward.len()];
        for (i, &img) in forward.iter().enumerate() {
            backward[img] = i;
        }
        Permutation { forward, backward }
    }

    pub fn size(&self) -> usize {
        self.forward.len()
    }

    /// Forward application `i -> p(i)`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.forward[i]
    }

    /// Backward application `i -> p^{-1}(i)`.
    #[inline]
    pub fn apply_inverse(&self, i: usize) -> usize {
        self.backward[i]
    }

    pub fn forward_table(&self) -> &[usize] {
        &self.forward
    }

    /// The inverse permutation (swaps the two tables).
    pub fn inverse(&self) -> Self {
        Permutation {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// Composition `self ∘ other`: the result applies `other` first, so
    /// `result.apply(i) == self.apply(other.apply(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.size() != other.size() {
            return Err(Error::Config(format!(
                "cannot compose permutations of sizes {} and {}",
                self.size(),
                other.size()
            )));
        }
        let forward: Vec<usize> = (0..self.size())
            .map(|i| self.forward[other.forward[i]])
            .collect();
        Ok(Self::from_tables_unchecked(forward))
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// All permutations of `[0, n)` in lexicographic order of their image
    /// tables.
    pub fn all(n: usize) -> Permutations {
        Permutations {
            current: Some((0..n).collect()),
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({:?})", self.forward)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, img) in self.forward.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{img}")?;
        }
        write!(f, "]")
    }
}

// Wire format is the bare forward table: `[1, 0, 2]`.
impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.forward.len()))?;
        for img in &self.forward {
            seq.serialize_element(img)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct TableVisitor;
        impl<'de> Visitor<'de> for TableVisitor {
            type Value = Vec<usize>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a permutation image table")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut table = Vec::new();
                while let Some(v) = seq.next_element()? {
                    table.push(v);
                }
                Ok(table)
            }
        }
        let table = deserializer.deserialize_seq(TableVisitor)?;
        Permutation::from_forward(table).map_err(serde::de::Error::custom)
    }
}

/// Iterator over all of `S_n` in lexicographic order.
pub struct Permutations {
    current: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let table = self.current.take()?;
        let result = Permutation::from_tables_unchecked(table.clone());
        self.current = next_lexicographic(table);
        Some(result)
    }
}

fn next_lexicographic(mut table: Vec<usize>) -> Option<Vec<usize>> {
    let n = table.len();
    if n < 2 {
        return None;
    }
    let mut i = n - 1;
    while i > 0 && table[i - 1] >= table[i] {
        i -= 1;
    }
    if i == 0 {
        return None;
    }
    let mut j = n - 1;
    while table[j] <= table[i - 1] {
        j -= 1;
    }
    table.swap(i - 1, j);
    table[i..].reverse();
    Some(table)
}

/// A nonempty subset of `[0, N)` with O(1) membership tests.
#[derive(Clone, PartialEq, Eq)]
pub struct Subset {
    ambient: usize,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subset {
    pub fn new(ambient: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::Config("subset must be nonempty".into()));
        }
        if let Some(&last) = members.last() {
            if last >= ambient {
                return Err(Error::Config(format!(
                    "subset element {last} out of range for ambient size {ambient}"
                )));
            }
        }
        let mut mask = vec![false; ambient];
        for &m in &members {
            mask[m] = true;
        }
        Ok(Subset {
            ambient,
            members,
            mask,
        })
    }

    pub fn ambient_size(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Indices of `[0, N)` not in the subset, ascending.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.ambient).filter(|&i| !self.mask[i]).collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset({:?} of [0,{}))", self.members, self.ambient)
    }
}

/// How a subset pair was constructed; the bit-structured kinds unlock the
/// shift sampler and the Grover search layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairKind {
    /// Arbitrary subsets.
    General,
    /// `N = 2^{2n}`, both subsets are the strings ending in `0^n`.
    ZeroPair { half_bits: u32 },
    /// `N = 2^{r+c}`, inputs ending in `0^c`, images beginning in `0^r`.
    Sponge { rate: u32, capacity: u32 },
}

/// A pair `(X1, X2)` of subsets of `[0, N)`. A pair `(i, p(i))` with
/// `i ∈ X1` and `p(i) ∈ X2` is called an X-pair of `p`.
#[derive(Clone, Debug)]
pub struct SubsetPair {
    size: usize,
    x1: Subset,
    x2: Subset,
    kind: PairKind,
}

impl SubsetPair {
    pub fn new(
        size: usize,
        x1: impl IntoIterator<Item = usize>,
        x2: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        Ok(SubsetPair {
            size,
            x1: Subset::new(size, x1)?,
            x2: Subset::new(size, x2)?,
            kind: PairKind::General,
        })
    }

    /// The zero-pair instance on `N = 2^{2n}`: both subsets consist of the
    /// indices whose low `n` bits are zero, so `|Z| = 2^n`.
    pub fn zero_pair(half_bits: u32) -> Result<Self> {
        if half_bits == 0 {
            return Err(Error::Config("zero-pair spec needs n >= 1".into()));
        }
        if 2 * half_bits > 26 {
            return Err(Error::Resource(format!(
                "zero-pair spec on 2n = {} bits is beyond the explicit-table budget",
                2 * half_bits
            )));
        }
        let n_total = 1usize << (2 * half_bits);
        let step = 1usize << half_bits;
        let z: Vec<usize> = (0..n_total).step_by(step).collect();
        Ok(SubsetPair {
            size: n_total,
            x1: Subset::new(n_total, z.clone())?,
            x2: Subset::new(n_total, z)?,
            kind: PairKind::ZeroPair { half_bits },
        })
    }

    /// The sponge instance on `N = 2^{r+c}`: inputs ending in `0^c`
    /// (`|X1| = 2^r`) and images beginning in `0^r` (`|X2| = 2^c`), so
    /// `|X1| * |X2| = N`.
    pub fn sponge(rate: u32, capacity: u32) -> Result<Self> {
        if rate == 0 || capacity == 0 {
            return Err(Error::Config("sponge spec needs r >= 1 and c >= 1".into()));
        }
        if rate + capacity > 26 {
            return Err(Error::Resource(format!(
                "sponge spec on n = {} bits is beyond the explicit-table budget",
                rate + capacity
            )));
        }
        let n_total = 1usize << (rate + capacity);
        let x1: Vec<usize> = (0..n_total).step_by(1 << capacity).collect();
        let x2: Vec<usize> = (0..(1usize << capacity)).collect();
        Ok(SubsetPair {
            size: n_total,
            x1: Subset::new(n_total, x1)?,
            x2: Subset::new(n_total, x2)?,
            kind: PairKind::Sponge { rate, capacity },
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn x1(&self) -> &Subset {
        &self.x1
    }

    pub fn x2(&self) -> &Subset {
        &self.x2
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    /// `(rate, capacity)` when this pair is a sponge spec.
    pub fn sponge_params(&self) -> Option<(u32, u32)> {
        match self.kind {
            PairKind::Sponge { rate, capacity } => Some((rate, capacity)),
            _ => None,
        }
    }

    fn check_size(&self, p: &Permutation) -> Result<()> {
        if p.size() != self.size {
            return Err(Error::Config(format!(
                "permutation size {} does not match subset-pair size {}",
                p.size(),
                self.size
            )));
        }
        Ok(())
    }

    /// All X-pairs of `p`, ascending in the first coordinate.
    pub fn x_pairs(&self, p: &Permutation) -> Result<Vec<(usize, usize)>> {
        self.check_size(p)?;
        Ok(self
            .x1
            .members()
            .iter()
            .filter_map(|&i| {
                let j = p.apply(i);
                self.x2.contains(j).then_some((i, j))
            })
            .collect())
    }

    /// Number of X-pairs of `p`.
    pub fn count_pairs(&self, p: &Permutation) -> usize {
        self.x1
            .members()
            .iter()
            .filter(|&&i| self.x2.contains(p.apply(i)))
            .count()
    }

    /// Largest possible X-pair count.
    pub fn max_pairs(&self) -> usize {
        self.x1.len().min(self.x2.len())
    }

    /// Smallest possible X-pair count (pigeonhole).
    pub fn min_pairs(&self) -> usize {
        (self.x1.len() + self.x2.len()).saturating_sub(self.size)
    }

    /// A fixed, deterministic permutation with exactly `kappa` X-pairs:
    /// the canonical double-coset representative used by the Monte Carlo
    /// coset sampler.
    pub fn representative(&self, kappa: usize) -> Result<Permutation> {
        if kappa < self.min_pairs() || kappa > self.max_pairs() {
            return Err(Error::Domain(format!(
                "no permutation has {kappa} X-pairs; achievable range is [{}, {}]",
                self.min_pairs(),
                self.max_pairs()
            )));
        }
        let n = self.size;
        let mut forward = vec![usize::MAX; n];
        let mut used = vec![false; n];
        // kappa members of X1 land in X2,
        for k in 0..kappa {
            let src = self.x1.members()[k];
            let dst = self.x2.members()[k];
            forward[src] = dst;
            used[dst] = true;
        }
        // the rest of X1 lands outside X2 (nothing out there is used yet),
        let outside: Vec<usize> = (0..n).filter(|&j| !self.x2.contains(j)).collect();
        let mut outside = outside.into_iter();
        for &src in &self.x1.members()[kappa..] {
            let dst = outside.next().expect("kappa >= min_pairs guarantees room");
            forward[src] = dst;
            used[dst] = true;
        }
        // and everything else fills in ascending order.
        let mut free = (0..n).filter(|&j| !used[j]);
        for src in 0..n {
            if forward[src] == usize::MAX {
                forward[src] = free.next().expect("counts match");
            }
        }
        Permutation::from_forward(forward)
    }
}

/// A Young subgroup of `S_N`, given by a partition of `[0, N)` into blocks;
/// the group is the direct product of the full symmetric groups on the
/// blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YoungSubgroup {
    size: usize,
    blocks: Vec<Vec<usize>>,
}

impl YoungSubgroup {
    /// Builds the subgroup from a partition; blocks must be disjoint,
    /// nonempty and cover `[0, N)`.
    pub fn new(size: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; size];
        let mut sorted_blocks = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::Config("partition blocks must be nonempty".into()));
            }
            let mut block = block;
            block.sort_unstable();
            for &i in &block {
                if i >= size {
                    return Err(Error::Config(format!(
                        "block element {i} out of range for size {size}"
                    )));
                }
                if seen[i] {
                    return Err(Error::Config(format!(
                        "element {i} appears in two blocks; not a partition"
                    )));
                }
                seen[i] = true;
            }
            sorted_blocks.push(block);
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Config(
                "partition blocks do not cover [0, N)".into(),
            ));
        }
        Ok(YoungSubgroup {
            size,
            blocks: sorted_blocks,
        })
    }

    /// The setwise stabilizer of a subset: blocks are the subset and its
    /// complement (one block if the subset is everything).
    pub fn stabilizer(subset: &Subset) -> Self {
        let mut blocks = vec![subset.members().to_vec()];
        let complement = subset.complement();
        if !complement.is_empty() {
            blocks.push(complement);
        }
        YoungSubgroup {
            size: subset.ambient_size(),
            blocks,
        }
    }

    /// The trivial subgroup (all singleton blocks).
    pub fn singletons(size: usize) -> Self {
        YoungSubgroup {
            size,
            blocks: (0..size).map(|i| vec![i]).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_two_block(&self) -> bool {
        self.blocks.len() == 2
    }

    /// Group order: the product of the block-size factorials.
    pub fn order(&self) -> BigUint {
        let mut order = BigUint::one();
        for block in &self.blocks {
            for k in 2..=block.len() {
                order *= BigUint::from(k);
            }
        }
        order
    }

    /// Membership test: `p` must map every block onto itself.
    pub fn contains(&self, p: &Permutation) -> bool {
        if p.size() != self.size {
            return false;
        }
        self.blocks.iter().all(|block| {
            let in_block = |i: usize| block.binary_search(&i).is_ok();
            block.iter().all(|&i| in_block(p.apply(i)))
        })
    }

    /// Uniform sample: an independent Fisher-Yates shuffle inside each
    /// block, which is exact because the group is a direct product of full
    /// symmetric groups on the blocks.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut forward: Vec<usize> = (0..self.size).collect();
        for block in &self.blocks {
            let mut images = block.clone();
            for i in (1..images.len()).rev() {
                let j = rng.gen_range(0..=i);
                images.swap(i, j);
            }
            for (pos, &img) in block.iter().zip(images.iter()) {
                forward[*pos] = img;
            }
        }
        Permutation::from_forward(forward).expect("block shuffles preserve bijectivity")
    }

    /// Materializes every element of the subgroup.
    pub fn elements(&self) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > BigUint::from(SUBGROUP_ELEMENT_CAP) {
            return Err(Error::Resource(format!(
                "subgroup of order {order} exceeds the element-enumeration cap"
            )));
        }
        let per_block: Vec<Vec<Vec<usize>>> = self
            .blocks
            .iter()
            .map(|block| arrangements(block))
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; per_block.len()];
        loop {
            let mut forward: Vec<usize> = (0..self.size).collect();
            for (b, block) in self.blocks.iter().enumerate() {
                for (pos, &img) in block.iter().zip(per_block[b][choice[b]].iter()) {
                    forward[*pos] = img;
                }
            }
            out.push(Permutation::from_tables_unchecked(forward));
            // mixed-radix increment over per-block arrangement indices
            let mut b = 0;
            loop {
                if b == per_block.len() {
                    return Ok(out);
                }
                choice[b] += 1;
                if choice[b] < per_block[b].len() {
                    break;
                }
                choice[b] = 0;
                b += 1;
            }
        }
    }
}

fn arrangements(block: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = block.to_vec();
    loop {
        out.push(current.clone());
        match next_lexicographic(current) {
            Some(next) => current = next,
            None => return out,
        }
    }
}

// Wire format is the bare block list: `[[0, 1], [2, 3]]`.
impl Serialize for YoungSubgroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for YoungSubgroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let blocks: Vec<Vec<usize>> = Vec::deserialize(deserializer)?;
        let size = blocks.iter().map(|b| b.len()).sum();
        YoungSubgroup::new(size, blocks).map_err(serde::de::Error::custom)
    }
}

/// Result of re-randomizing a permutation inside its double coset:
/// `phi_sym = omega ∘ phi ∘ sigma`.
#[derive(Clone, Debug)]
pub struct Symmetrization {
    pub phi_sym: Permutation,
    pub sigma: Permutation,
    pub omega: Permutation,
}

/// Re-randomizes `phi` into a uniform element of its double coset.
///
/// Convention: the right factor `sigma` is drawn from the subgroup fixing
/// `X1` and the left factor `omega` from the subgroup fixing `X2`. Under
/// this assignment `phi_sym(x)` lands in `X2` exactly when the pulled-back
/// image under `phi` does, so the X-pair count is preserved even for
/// asymmetric pairs.
pub fn symmetrize<R: Rng + ?Sized>(
    phi: &Permutation,
    fixes_x1: &YoungSubgroup,
    fixes_x2: &YoungSubgroup,
    rng: &mut R,
) -> Result<Symmetrization> {
    if fixes_x1.size() != phi.size() || fixes_x2.size() != phi.size() {
        return Err(Error::Config(format!(
            "subgroup sizes ({}, {}) do not match permutation size {}",
            fixes_x1.size(),
            fixes_x2.size(),
            phi.size()
        )));
    }
    if !fixes_x1.is_two_block() || !fixes_x2.is_two_block() {
        return Err(Error::Config(
            "symmetrization requires two-block Young subgroups (subset and complement)".into(),
        ));
    }
    let sigma = fixes_x1.sample_uniform(rng);
    let omega = fixes_x2.sample_uniform(rng);
    let phi_sym = omega.compose(phi)?.compose(&sigma)?;
    Ok(Symmetrization {
        phi_sym,
        sigma,
        omega,
    })
}

/// [`symmetrize`] with the stabilizers built from the subset pair itself.
pub fn symmetrize_pair<R: Rng + ?Sized>(
    phi: &Permutation,
    pair: &SubsetPair,
    rng: &mut R,
) -> Result<Symmetrization> {
    let g1 = YoungSubgroup::stabilizer(pair.x1());
    let g2 = YoungSubgroup::stabilizer(pair.x2());
    symmetrize(phi, &g1, &g2, rng)
}

/// Uniform sample from the set of permutations with exactly `kappa`
/// X-pairs, via symmetrization of the canonical representative.
pub fn sample_coset_uniform<R: Rng + ?Sized>(
    pair: &SubsetPair,
    kappa: usize,
    rng: &mut R,
) -> Result<Permutation> {
    let rep = pair.representative(kappa)?;
    Ok(symmetrize_pair(&rep, pair, rng)?.phi_sym)
}

/// Maps an X-pair `(x, y)` of `omega ∘ phi ∘ sigma` back to the X-pair
/// `(sigma(x), omega^{-1}(y))` of `phi`. The caller is responsible for the
/// pair being valid.
pub fn pull_back_solution(
    x: usize,
    y: usize,
    sigma: &Permutation,
    omega: &Permutation,
) -> (usize, usize) {
    (sigma.apply(x), omega.apply_inverse(y))
}

/// All permutations of `S_N` with exactly `kappa` X-pairs, by brute force.
pub fn enumerate_coset(pair: &SubsetPair, kappa: usize) -> Result<Vec<Permutation>> {
    enumerate_coset_capped(pair, kappa, DEFAULT_ENUMERATION_CAP)
}

/// [`enumerate_coset`] with an explicit size cap.
pub fn enumerate_coset_capped(
    pair: &SubsetPair,
    kappa: usize,
    cap: usize,
) -> Result<Vec<Permutation>> {
    if pair.size() > cap {
        return Err(Error::Resource(format!(
            "N = {} exceeds the enumeration cap {cap}",
            pair.size()
        )));
    }
    if kappa > pair.max_pairs() {
        return Err(Error::Domain(format!(
            "kappa = {kappa} exceeds min(|X1|, |X2|) = {}",
            pair.max_pairs()
        )));
    }
    Ok(Permutation::all(pair.size())
        .filter(|p| pair.count_pairs(p) == kappa)
        .collect())
}

/// The double-coset profile of `p` under `(H, K)`: entry `(i, j)` counts
/// `|A_i ∩ p(B_j)|` for the blocks `A_i` of `H` and `B_j` of `K`. Two
/// permutations lie in the same `(H, K)` double coset iff their profiles
/// agree.
pub fn coset_profile(p: &Permutation, h: &YoungSubgroup, k: &YoungSubgroup) -> Vec<Vec<usize>> {
    h.blocks()
        .iter()
        .map(|a| {
            k.blocks()
                .iter()
                .map(|b| {
                    b.iter()
                        .filter(|&&x| a.binary_search(&p.apply(x)).is_ok())
                        .count()
                })
                .collect()
        })
        .collect()
}

/// Counts the factorizations `g = h · x · k` with `h ∈ H`, `k ∈ K`, by
/// brute force over `H × K`. Errors if `g` is not in the `(H, K)` double
/// coset of `x`.
pub fn count_factorizations(
    g: &Permutation,
    x: &Permutation,
    h: &YoungSubgroup,
    k: &YoungSubgroup,
) -> Result<u64> {
    if g.size() != x.size() || h.size() != g.size() || k.size() != g.size() {
        return Err(Error::Config(
            "factorization count needs equal sizes for g, x, H, K".into(),
        ));
    }
    if coset_profile(g, h, k) != coset_profile(x, h, k) {
        return Err(Error::Domain(
            "g is not in the (H, K) double coset of x".into(),
        ));
    }
    let h_elems = h.elements()?;
    let k_elems = k.elements()?;
    let mut count = 0u64;
    // g == h∘x∘k  <=>  h^{-1}∘g == x∘k; precompute the right side per k.
    for ke in &k_elems {
        let xk = x.compose(ke)?;
        for he in &h_elems {
            if (0..g.size()).all(|i| he.apply(xk.apply(i)) == g.apply(i)) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `|x^{-1} H x ∩ K|`, computed directly; the independent route against
/// which factorization counts are checked.
pub fn conjugate_intersection_size(
    x: &Permutation,
    h: &YoungSubgroup,
    k: &YoungSubgroup,
) -> Result<u64> {
    let x_inv = x.inverse();
    let mut count = 0u64;
    for he in h.elements()? {
        let conj = x_inv.compose(&he)?.compose(x)?;
        if k.contains(&conj) {
            count += 1;
        }
    }
    Ok(count)
}
