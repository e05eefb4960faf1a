//! Block data of a non-critical semistable module: eigenvalues, weights, `S0` and `I0`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, Scalar};
use crate::weyl;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub alpha: Scalar,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemistableShape {
    prime: u64,
    blocks: Vec<Block>,
    weights: Vec<i64>,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl SemistableShape {
    pub fn new(prime: u64, blocks: Vec<Block>, weights: Vec<i64>) -> Result<Self> {
        let sh = SemistableShape { prime, blocks, weights };
        sh.validate()?;
        Ok(sh)
    }

    /// Shape with given lengths and weights `n-1, ..., 0`. Consecutive blocks get unrelated
    /// eigenvalues, except across the boundaries in `links` where `alpha_{r+1} = alpha_r p^{l_r}`.
    pub fn with_links(prime: u64, lengths: &[usize], links: &BTreeSet<usize>) -> Result<Self> {
        let p = q(prime as i64);
        let base = q(prime as i64 * 100 + 7);
        let mut alpha = q(1);
        let mut blocks = Vec::new();
        for (r, &l) in lengths.iter().enumerate() {
            blocks.push(Block { alpha: alpha.clone(), length: l });
            alpha = if links.contains(&(r + 1)) { &alpha * pow(&p, l) } else { &alpha * &base };
        }
        let n: usize = lengths.iter().sum();
        SemistableShape::new(prime, blocks, (0..n as i64).rev().collect())
    }

    pub fn with_lengths(prime: u64, lengths: &[usize]) -> Result<Self> {
        SemistableShape::with_links(prime, lengths, &BTreeSet::new())
    }

    fn validate(&self) -> Result<()> {
        if !is_prime(self.prime) {
            return Err(Error::InvalidShape(format!("{} is not prime", self.prime)));
        }
        if self.blocks.is_empty() {
            return Err(Error::InvalidShape("no blocks".into()));
        }
        if self.blocks.iter().any(|b| b.length == 0) {
            return Err(Error::InvalidShape("block of length 0".into()));
        }
        if self.blocks.iter().any(|b| b.alpha.is_zero()) {
            return Err(Error::InvalidShape("alpha must be nonzero".into()));
        }
        let n = self.n();
        if self.weights.len() != n {
            return Err(Error::InvalidShape(format!("expected {n} weights, got {}", self.weights.len())));
        }
        if self.weights.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidShape("weights must be strictly decreasing".into()));
        }
        let phi = self.phi();
        for i in 0..n {
            for j in i + 1..n {
                if phi[i] == phi[j] {
                    return Err(Error::InvalidShape(format!("eigenvalues {} and {} coincide", i + 1, j + 1)));
                }
            }
        }
        let p = self.p();
        for (i, bi) in self.blocks.iter().enumerate() {
            let end = &bi.alpha * pow(&p, bi.length);
            for (j, bj) in self.blocks.iter().enumerate() {
                if bj.alpha == end && j != i + 1 {
                    return Err(Error::InvalidShape(format!(
                        "ordering: alpha_{} = alpha_{} p^l_{} forces block {} to follow block {}",
                        j + 1,
                        i + 1,
                        i + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn p(&self) -> Scalar {
        Scalar::from_integer(BigInt::from(self.prime))
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.length).sum()
    }

    pub fn s(&self) -> usize {
        self.blocks.len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.length).collect()
    }

    /// `t_r = l_1 + ... + l_r`, with `t_0 = 0`.
    pub fn t(&self, r: usize) -> usize {
        self.blocks[..r].iter().map(|b| b.length).sum()
    }

    /// 0-based block of a 0-based index.
    pub fn block_of(&self, i: usize) -> usize {
        let mut t = 0;
        for (r, b) in self.blocks.iter().enumerate() {
            t += b.length;
            if i < t {
                return r;
            }
        }
        panic!("index {i} out of range");
    }

    pub fn phi(&self) -> Vec<Scalar> {
        let p = self.p();
        let mut out = Vec::with_capacity(self.n());
        for b in &self.blocks {
            let mut x = b.alpha.clone();
            for _ in 0..b.length {
                out.push(x.clone());
                x = &x * &p;
            }
        }
        out
    }

    pub fn s0(&self) -> BTreeSet<usize> {
        weyl::set_of_blocks(&self.lengths())
    }

    pub fn i0(&self) -> BTreeSet<usize> {
        let phi = self.phi();
        let p = self.p();
        (1..self.n()).filter(|&i| phi[i] == &phi[i - 1] * &p).collect()
    }

    pub fn is_generic(&self) -> bool {
        self.s0() == self.i0()
    }

    pub fn is_crystalline(&self) -> bool {
        self.blocks.iter().all(|b| b.length == 1)
    }

    /// Subquotient on the 0-based index range `[a, b)`; cut blocks keep their eigenvalues.
    pub fn interval(&self, a: usize, b: usize) -> SemistableShape {
        assert!(a < b && b <= self.n());
        let p = self.p();
        let mut blocks = Vec::new();
        let mut t = 0;
        for blk in &self.blocks {
            let lo = t.max(a);
            let hi = (t + blk.length).min(b);
            if lo < hi {
                blocks.push(Block { alpha: &blk.alpha * pow(&p, lo - t), length: hi - lo });
            }
            t += blk.length;
        }
        SemistableShape { prime: self.prime, blocks, weights: self.weights[a..b].to_vec() }
    }

    /// Window of blocks `r..=q` (1-based).
    pub fn principal_window(&self, r: usize, q: usize) -> SemistableShape {
        assert!(1 <= r && r <= q && q <= self.s());
        self.interval(self.t(r - 1), self.t(q))
    }

    /// Dual: reversed blocks with inverse eigenvalues, weights `h'_i = -h_{n+1-i}`.
    pub fn dual(&self) -> SemistableShape {
        let p = self.p();
        let blocks = self
            .blocks
            .iter()
            .rev()
            .map(|b| Block { alpha: (&b.alpha * pow(&p, b.length - 1)).recip(), length: b.length })
            .collect();
        let weights = self.weights.iter().rev().map(|h| -h).collect();
        SemistableShape { prime: self.prime, blocks, weights }
    }
}

fn pow(x: &Scalar, k: usize) -> Scalar {
    let mut r = Scalar::one();
    for _ in 0..k {
        r = &r * x;
    }
    r
}

/// Every composition of `n` (block length tuple), in lexicographic order.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
