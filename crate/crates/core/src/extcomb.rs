//! Interval-partition bases of the higher Ext spaces `E_{I1,I2}`, cup products, the `E^∞`
//! lines and the L-invariant hyperplanes with their root coordinates.
//!
//! Simple roots are `1..=d`. Sets `I2 ⊆ I1 ⊆ J` are `BTreeSet<usize>`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Scalar;

pub type RootSet = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviStructure {
    d: usize,
    j: RootSet,
    /// Weight tuple, carried along but not used.
    pub a: Vec<i64>,
}

impl LeviStructure {
    pub fn new(d: usize, j: RootSet, a: Vec<i64>) -> Result<Self> {
        if j.iter().any(|&x| x == 0 || x > d) {
            return Err(Error::InvalidParameter(format!("J must lie in 1..={d}")));
        }
        Ok(LeviStructure { d, j, a })
    }

    /// `J = Δ = {1, ..., d}`.
    pub fn full(d: usize) -> Self {
        LeviStructure { d, j: (1..=d).collect(), a: vec![0; d + 1] }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn j(&self) -> &RootSet {
        &self.j
    }

    /// Connected components `Δ_{J,j}` of `J`, in increasing order.
    pub fn components(&self) -> Vec<RootSet> {
        runs(&self.j)
    }

    /// Sizes `n_j` of the `GL` factors of the Levi, one per component.
    pub fn gl_sizes(&self) -> Vec<usize> {
        self.components().iter().map(|c| c.len() + 1).collect()
    }

    /// Positive roots of the Levi, as inclusive intervals `(i, k)` of simple roots.
    pub fn positive_roots(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for c in self.components() {
            let v: Vec<usize> = c.into_iter().collect();
            for x in 0..v.len() {
                for y in x..v.len() {
                    out.push((v[x], v[y]));
                }
            }
        }
        out
    }
}

/// Maximal runs of consecutive integers.
fn runs(s: &RootSet) -> Vec<RootSet> {
    let mut out: Vec<RootSet> = Vec::new();
    let mut prev: Option<usize> = None;
    for &x in s {
        match (prev, out.last_mut()) {
            (Some(p), Some(last)) if p + 1 == x => {
                last.insert(x);
            }
            _ => out.push([x].into_iter().collect()),
        }
        prev = Some(x);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Log,
    Val,
    X,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Log => "log",
            Label::Val => "val",
            Label::X => "x",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Part {
    pub start: usize,
    pub end: usize,
    pub label: Label,
}

/// Basis element: a labeled partition of `I1 \ I2` into intervals, parts sorted by start.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExtElement {
    pub parts: Vec<Part>,
}

impl ExtElement {
    pub fn support(&self) -> RootSet {
        self.parts.iter().flat_map(|p| p.start..=p.end).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `[start, end, label]` triples.
    pub fn to_triples(&self) -> Vec<(usize, usize, &'static str)> {
        self.parts.iter().map(|p| (p.start, p.end, p.label.as_str())).collect()
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .parts
            .iter()
            .map(|p| if p.start == p.end { format!("{}:{}", p.start, p.label.as_str()) } else { format!("{}-{}:x", p.start, p.end) })
            .collect();
        write!(f, "[{}]", s.join(" "))
    }
}

fn check_nested(i1: &RootSet, i2: &RootSet, st: &LeviStructure) -> Result<RootSet> {
    if !i2.is_subset(i1) || !i1.is_subset(&st.j) {
        return Err(Error::InvalidParameter("need I2 ⊆ I1 ⊆ J".into()));
    }
    Ok(i1.difference(i2).copied().collect())
}

/// Labeled interval partitions of one run `lo..=hi`, lexicographic.
fn run_partitions(lo: usize, hi: usize) -> Vec<Vec<Part>> {
    if lo > hi {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for end in lo..=hi {
        let heads: Vec<Part> = if end == lo {
            vec![Part { start: lo, end, label: Label::Log }, Part { start: lo, end, label: Label::Val }]
        } else {
            vec![Part { start: lo, end, label: Label::X }]
        };
        for h in heads {
            for rest in run_partitions(end + 1, hi) {
                let mut v = vec![h];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out
}

fn partitions_of(set: &RootSet) -> Vec<ExtElement> {
    let mut acc: Vec<Vec<Part>> = vec![vec![]];
    for r in runs(set) {
        let lo = *r.first().unwrap();
        let hi = *r.last().unwrap();
        let parts = run_partitions(lo, hi);
        acc = acc
            .iter()
            .flat_map(|a| {
                parts.iter().map(move |p| {
                    let mut v = a.clone();
                    v.extend(p.iter().copied());
                    v
                })
            })
            .collect();
    }
    acc.into_iter().map(|parts| ExtElement { parts }).collect()
}

pub fn basis(i1: &RootSet, i2: &RootSet, st: &LeviStructure) -> Result<Vec<ExtElement>> {
    Ok(partitions_of(&check_nested(i1, i2, st)?))
}

pub fn dim_ext(i1: &RootSet, i2: &RootSet, st: &LeviStructure) -> Result<u128> {
    Ok(runs(&check_nested(i1, i2, st)?).iter().map(|r| f(r.len())).product())
}

/// `f(0) = 1`, `f(k) = 2 f(k-1) + Σ_{m≥2} f(k-m)`.
pub fn f(k: usize) -> u128 {
    let mut v = vec![1u128];
    for i in 1..=k {
        let mut x = 2 * v[i - 1];
        for m in 2..=i {
            x += v[i - m];
        }
        v.push(x);
    }
    v[k]
}

/// Cup product of elements with disjoint supports. Panics on overlapping supports.
pub fn cup(x: &ExtElement, y: &ExtElement) -> ExtElement {
    assert!(x.support().is_disjoint(&y.support()), "cup of overlapping supports");
    let mut parts: Vec<Part> = x.parts.iter().chain(y.parts.iter()).copied().collect();
    parts.sort();
    ExtElement { parts }
}

pub fn e_infty(i1: &RootSet, i2: &RootSet) -> ExtElement {
    let parts = i1.difference(i2).map(|&i| Part { start: i, end: i, label: Label::Val }).collect();
    ExtElement { parts }
}

/// `E^∞` built by cupping singleton val lines in the given order of removal.
pub fn e_infty_chain(order: &[usize]) -> ExtElement {
    order.iter().fold(ExtElement::default(), |acc, &i| cup(&acc, &e_infty(&[i].into_iter().collect(), &RootSet::new())))
}

/// The generator `x_α` of `E_{I_α,∅}` for the root `(i, k)`: log for simple roots.
pub fn x_alpha(root: (usize, usize)) -> ExtElement {
    let label = if root.0 == root.1 { Label::Log } else { Label::X };
    ExtElement { parts: vec![Part { start: root.0, end: root.1, label }] }
}

fn root_set(root: (usize, usize)) -> RootSet {
    (root.0..=root.1).collect()
}

/// Linear functional on the basis of `E_{J,∅}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    pub coeffs: BTreeMap<ExtElement, Scalar>,
}

impl Hyperplane {
    pub fn eval(&self, x: &ExtElement) -> Scalar {
        self.coeffs.get(x).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }
}

/// Multiplicative value of an element: val ↦ 1, log at `i` ↦ `L_(i,i)`, interval part ↦ `L_α`.
pub fn multiplicative_value(x: &ExtElement, ls: &BTreeMap<(usize, usize), Scalar>) -> Result<Scalar> {
    let mut v = Scalar::one();
    for p in &x.parts {
        match p.label {
            Label::Val => {}
            _ => {
                let c = ls.get(&(p.start, p.end)).ok_or_else(|| {
                    Error::InvalidParameter(format!("no coordinate for root ({}, {})", p.start, p.end))
                })?;
                v = &v * c;
            }
        }
    }
    Ok(v)
}

pub fn hyperplane_from_ls(ls: &BTreeMap<(usize, usize), Scalar>, st: &LeviStructure) -> Result<Hyperplane> {
    let roots = st.positive_roots();
    if ls.len() != roots.len() || roots.iter().any(|r| !ls.contains_key(r)) {
        return Err(Error::InvalidParameter("coordinates must be indexed by the positive roots of J".into()));
    }
    let mut coeffs = BTreeMap::new();
    for b in basis(&st.j, &RootSet::new(), st)? {
        let v = multiplicative_value(&b, ls)?;
        coeffs.insert(b, v);
    }
    Ok(Hyperplane { coeffs })
}

pub fn ls_from_hyperplane(h: &Hyperplane, st: &LeviStructure) -> Result<BTreeMap<(usize, usize), Scalar>> {
    let mut out = BTreeMap::new();
    for root in st.positive_roots() {
        let ia = root_set(root);
        let rest = e_infty(&st.j, &ia);
        let num = h.eval(&cup(&x_alpha(root), &rest));
        let den = h.eval(&cup(&e_infty(&ia, &RootSet::new()), &rest));
        if den.is_zero() {
            return Err(Error::TransversalityViolated(format!("({}, {})", root.0, root.1)));
        }
        out.insert(root, num / den);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimReport {
    pub dim: u128,
    pub e_less_dim: u128,
    pub codim: u128,
    pub t: usize,
    pub agree: bool,
}

/// Codimension of the span of cup images through strict intermediates, against `t`.
pub fn codim_e_less(i1: &RootSet, i2: &RootSet, st: &LeviStructure) -> Result<CodimReport> {
    let diff = check_nested(i1, i2, st)?;
    if diff.len() < 2 {
        return Err(Error::InvalidParameter("need |I1 \\ I2| > 1".into()));
    }
    let all = basis(i1, i2, st)?;
    let elems: Vec<usize> = diff.iter().copied().collect();
    let mut image: BTreeSet<ExtElement> = BTreeSet::new();
    for mask in 1..(1u64 << elems.len()) - 1 {
        let lower: RootSet = elems.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &x)| x).collect();
        let mid: RootSet = i2.union(&lower).copied().collect();
        for x in basis(i1, &mid, st)? {
            for y in basis(&mid, i2, st)? {
                image.insert(cup(&x, &y));
            }
        }
    }
    let dim = all.len() as u128;
    let e_less_dim = image.len() as u128;
    let t = st
        .components()
        .iter()
        .filter(|c| {
            let part: RootSet = c.intersection(&diff).copied().collect();
            runs(&part).len() == 1
        })
        .count();
    let codim = dim - e_less_dim;
    Ok(CodimReport { dim, e_less_dim, codim, t, agree: codim == t as u128 })
}
