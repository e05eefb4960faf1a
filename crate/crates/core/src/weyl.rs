//! Permutations of `{1..n}` and coset combinatorics of the symmetric group.
//!
//! Convention: `matrix(u)` has a 1 at `(u(j), j)`, and `u·v = u ∘ v`. A refinement `u`
//! puts the eigenvector `e_{u(i)}` at step `i` of the flag.

use std::collections::BTreeSet;
use std::fmt;

use crate::linalg::{Field, Matrix};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<usize>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_line())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.one_line().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { img: (0..n).collect() }
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(v: &[usize]) -> Option<Perm> {
        let n = v.len();
        let mut seen = vec![false; n];
        for &x in v {
            if x == 0 || x > n || seen[x - 1] {
                return None;
            }
            seen[x - 1] = true;
        }
        Some(Perm { img: v.iter().map(|x| x - 1).collect() })
    }

    /// From 0-based images.
    pub fn from_images(img: Vec<usize>) -> Perm {
        let p = Perm { img };
        debug_assert!(Perm::from_one_line(&p.one_line()).is_some());
        p
    }

    /// Adjacent transposition `s_i`, `1 <= i < n`.
    pub fn s(n: usize, i: usize) -> Perm {
        let mut img: Vec<usize> = (0..n).collect();
        img.swap(i - 1, i);
        Perm { img }
    }

    pub fn n(&self) -> usize {
        self.img.len()
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.img.iter().map(|x| x + 1).collect()
    }

    /// 0-based image.
    pub fn at(&self, i: usize) -> usize {
        self.img[i]
    }

    /// 1-based image.
    pub fn apply(&self, i: usize) -> usize {
        self.img[i - 1] + 1
    }

    pub fn images(&self) -> &[usize] {
        &self.img
    }

    pub fn compose(&self, v: &Perm) -> Perm {
        Perm { img: v.img.iter().map(|&j| self.img[j]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.img.iter().enumerate() {
            inv[j] = i;
        }
        Perm { img: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn length(&self) -> usize {
        let n = self.n();
        let mut c = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.img[i] > self.img[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn matrix<T: Field>(&self) -> Matrix<T> {
        let n = self.n();
        Matrix::from_fn(n, n, |i, j| if self.img[j] == i { T::one() } else { T::zero() })
    }

    /// `matrix(self)^{-1} · m`, i.e. row `i` of the result is row `u(i)` of `m`.
    pub fn inv_times<T: Field>(&self, m: &Matrix<T>) -> Matrix<T> {
        Matrix::from_fn(m.rows(), m.cols(), |i, j| m.get(self.img[i], j).clone())
    }

    /// `matrix(self) · m · matrix(self)^{-1}`.
    pub fn conjugate<T: Field>(&self, m: &Matrix<T>) -> Matrix<T> {
        let inv = self.inverse();
        Matrix::from_fn(m.rows(), m.cols(), |i, j| m.get(inv.img[i], inv.img[j]).clone())
    }

    /// All permutations of size `n` in lexicographic one-line order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm { img: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

/// Block lengths of the partition of `{1..n}` cut at the complement of `set`.
pub fn blocks_of(n: usize, set: &BTreeSet<usize>) -> Vec<usize> {
    let mut lens = Vec::new();
    let mut cur = 1;
    for i in 1..n {
        if set.contains(&i) {
            cur += 1;
        } else {
            lens.push(cur);
            cur = 1;
        }
    }
    if n > 0 {
        lens.push(cur);
    }
    lens
}

/// Subset of `Δ = {1..n-1}` whose blocks have the given lengths.
pub fn set_of_blocks(lengths: &[usize]) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut t = 0;
    for &l in lengths {
        for i in 1..l {
            out.insert(t + i);
        }
        t += l;
    }
    out
}

/// 0-based block label of every 0-based index.
pub fn block_labels(lengths: &[usize]) -> Vec<usize> {
    lengths.iter().enumerate().flat_map(|(r, &l)| std::iter::repeat_n(r, l)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRepSet {
    pub n: usize,
    pub s0: BTreeSet<usize>,
    pub reps: Vec<Perm>,
}

/// Minimal-length representatives: `u` with `u^{-1}` increasing on each `S0`-block.
pub fn enumerate_min_coset_reps(n: usize, s0: &BTreeSet<usize>) -> CosetRepSet {
    let lengths = blocks_of(n, s0);
    let starts: Vec<usize> = lengths.iter().scan(0, |t, &l| {
        let s = *t;
        *t += l;
        Some(s)
    }).collect();
    let mut reps = Vec::new();
    let mut word = Vec::with_capacity(n);
    let mut left = lengths.clone();
    fill_words(&mut word, &mut left, n, &mut |w: &[usize]| {
        let mut next = starts.clone();
        let img = w
            .iter()
            .map(|&b| {
                let x = next[b];
                next[b] += 1;
                x
            })
            .collect();
        reps.push(Perm { img });
    });
    CosetRepSet { n, s0: s0.clone(), reps }
}

fn fill_words(word: &mut Vec<usize>, left: &mut [usize], n: usize, emit: &mut dyn FnMut(&[usize])) {
    if word.len() == n {
        emit(word);
        return;
    }
    for b in 0..left.len() {
        if left[b] > 0 {
            left[b] -= 1;
            word.push(b);
            fill_words(word, left, n, emit);
            word.pop();
            left[b] += 1;
        }
    }
}

/// Brute-force version of [`enumerate_min_coset_reps`]: filter all of `S_n`.
pub fn min_coset_reps_brute(n: usize, s0: &BTreeSet<usize>) -> Vec<Perm> {
    let lengths = blocks_of(n, s0);
    let labels = block_labels(&lengths);
    Perm::all(n)
        .into_iter()
        .filter(|u| {
            let inv = u.inverse();
            (0..n.saturating_sub(1)).all(|i| labels[i] != labels[i + 1] || inv.img[i] < inv.img[i + 1])
        })
        .collect()
}

pub fn multinomial_count(lengths: &[usize]) -> u128 {
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    let n: usize = lengths.iter().sum();
    lengths.iter().fold(fact(n), |acc, &l| acc / fact(l))
}

/// `S0(u)`: positions `i` whose eigenvectors `e_{u(i)}, e_{u(i+1)}` are linked by the monodromy.
pub fn s0_of(u: &Perm, s0: &BTreeSet<usize>) -> BTreeSet<usize> {
    (1..u.n())
        .filter(|&i| {
            let a = u.apply(i);
            s0.contains(&a) && u.apply(i + 1) == a + 1
        })
        .collect()
}

/// `R^+_u`: position pairs `i < j` carrying consecutive eigenvalues `φ_k, φ_{k+1} = pφ_k`, `k ∈ I0`.
pub fn r_plus(u: &Perm, i0: &BTreeSet<usize>) -> BTreeSet<(usize, usize)> {
    let n = u.n();
    let mut out = BTreeSet::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let a = u.apply(i);
            if u.apply(j) == a + 1 && i0.contains(&a) {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Embedding `W_s -> W_n^{S0}`: block `r` is moved to slot `w(r)` keeping its internal order.
pub fn j_s0(w: &Perm, lengths: &[usize]) -> Perm {
    let s = lengths.len();
    assert_eq!(w.n(), s);
    let winv = w.inverse();
    // start position of each slot
    let mut slot_start = vec![0; s];
    let mut t = 0;
    for slot in 0..s {
        slot_start[slot] = t;
        t += lengths[winv.at(slot)];
    }
    let n = t;
    let mut uinv = vec![0; n];
    let mut idx = 0;
    for r in 0..s {
        for l in 0..lengths[r] {
            uinv[idx] = slot_start[w.at(r)] + l;
            idx += 1;
        }
    }
    Perm { img: uinv }.inverse()
}

pub fn longest(n: usize) -> Perm {
    Perm { img: (0..n).rev().collect() }
}

/// Longest element of the Levi `W_I`: reverses each `I`-block.
pub fn longest_levi(n: usize, i: &BTreeSet<usize>) -> Perm {
    let mut img = Vec::with_capacity(n);
    let mut t = 0;
    for l in blocks_of(n, i) {
        img.extend((t..t + l).rev());
        t += l;
    }
    Perm { img }
}

/// `w0^{(S0)} = j_{S0}(w_{0,s})`.
pub fn w0_s0(lengths: &[usize]) -> Perm {
    j_s0(&longest(lengths.len()), lengths)
}

pub fn right_descents(u: &Perm) -> BTreeSet<usize> {
    (1..u.n()).filter(|&i| u.apply(i) > u.apply(i + 1)).collect()
}
