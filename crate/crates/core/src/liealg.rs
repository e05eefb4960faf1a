//! Subspaces of the `n x n` matrix space, kept in reduced echelon form.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hodge::HodgeParameter;
use crate::linalg::{Field, Matrix, Scalar};
use crate::weyl::{self, Perm};

#[derive(Clone, Debug, PartialEq)]
pub struct MatSubspace {
    n: usize,
    /// Rows are the canonical basis, each a flattened `n x n` matrix.
    basis: Matrix<Scalar>,
}

impl MatSubspace {
    pub fn from_vectors(n: usize, vecs: Vec<Vec<Scalar>>) -> MatSubspace {
        let rows = vecs.len();
        let data: Vec<Scalar> = vecs.into_iter().flatten().collect();
        let m = Matrix::new(rows, n * n, data);
        let (r, piv) = m.rref();
        MatSubspace { n, basis: r.block(0, piv.len(), 0, n * n) }
    }

    pub fn from_matrices(n: usize, mats: &[Matrix<Scalar>]) -> MatSubspace {
        MatSubspace::from_vectors(n, mats.iter().map(|m| m.entries().to_vec()).collect())
    }

    /// Span of the elementary matrices `E_ij` with `keep(i, j)`.
    pub fn coordinate(n: usize, keep: impl Fn(usize, usize) -> bool) -> MatSubspace {
        let mut vecs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if keep(i, j) {
                    let mut v = vec![Scalar::zero(); n * n];
                    v[i * n + j] = Scalar::one();
                    vecs.push(v);
                }
            }
        }
        MatSubspace::from_vectors(n, vecs)
    }

    pub fn zero(n: usize) -> MatSubspace {
        MatSubspace::from_vectors(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.block(i, i + 1, 0, self.n * self.n).entries().to_vec()).collect()
    }

    pub fn matrices(&self) -> Vec<Matrix<Scalar>> {
        self.vectors().into_iter().map(|v| Matrix::new(self.n, self.n, v)).collect()
    }

    pub fn join(&self, o: &MatSubspace) -> MatSubspace {
        assert_eq!(self.n, o.n);
        let mut v = self.vectors();
        v.extend(o.vectors());
        MatSubspace::from_vectors(self.n, v)
    }

    /// Annihilator under the standard pairing.
    pub fn perp(&self) -> MatSubspace {
        if self.dim() == 0 {
            return gl(self.n);
        }
        MatSubspace::from_vectors(self.n, self.basis.nullspace())
    }

    pub fn meet(&self, o: &MatSubspace) -> MatSubspace {
        assert_eq!(self.n, o.n);
        if let Some(support) = o.coordinate_support() {
            return self.meet_coordinate(&support);
        }
        if let Some(support) = self.coordinate_support() {
            return o.meet_coordinate(&support);
        }
        let (k1, k2) = (self.dim(), o.dim());
        let nn = self.n * self.n;
        let stacked = Matrix::from_fn(nn, k1 + k2, |c, r| {
            if r < k1 {
                self.basis.get(r, c).clone()
            } else {
                o.basis.get(r - k1, c).negated()
            }
        });
        let vecs = stacked.nullspace().into_iter().map(|x| combine(&self.basis, &x[..k1])).collect();
        MatSubspace::from_vectors(self.n, vecs)
    }

    /// Coordinates spanning the subspace, if it is spanned by elementary matrices.
    fn coordinate_support(&self) -> Option<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for r in 0..self.dim() {
            let mut nz = (0..self.n * self.n).filter(|&c| !self.basis.get(r, c).is_zero());
            let c = nz.next()?;
            if nz.next().is_some() {
                return None;
            }
            out.insert(c);
        }
        Some(out)
    }

    fn meet_coordinate(&self, support: &BTreeSet<usize>) -> MatSubspace {
        let k = self.dim();
        let outside: Vec<usize> = (0..self.n * self.n).filter(|c| !support.contains(c)).collect();
        if outside.is_empty() || k == 0 {
            return self.clone();
        }
        let a = Matrix::from_fn(outside.len(), k, |i, r| self.basis.get(r, outside[i]).clone());
        let vecs = a.nullspace().into_iter().map(|x| combine(&self.basis, &x)).collect();
        MatSubspace::from_vectors(self.n, vecs)
    }

    pub fn contains(&self, x: &Matrix<Scalar>) -> bool {
        self.join(&MatSubspace::from_matrices(self.n, std::slice::from_ref(x))).dim() == self.dim()
    }

    pub fn contains_space(&self, o: &MatSubspace) -> bool {
        self.join(o).dim() == self.dim()
    }

    pub fn equals(&self, o: &MatSubspace) -> bool {
        self == o
    }

    /// `{g X g^{-1} : X ∈ V}`.
    pub fn ad(&self, g: &Matrix<Scalar>) -> Result<MatSubspace> {
        let ginv = g.invert()?;
        let mats: Vec<Matrix<Scalar>> = self.matrices().iter().map(|x| g.mul(x).mul(&ginv)).collect();
        Ok(MatSubspace::from_matrices(self.n, &mats))
    }

    /// `Ad_u` for a permutation, by relabelling coordinates.
    pub fn ad_perm(&self, u: &Perm) -> MatSubspace {
        let mats: Vec<Matrix<Scalar>> = self.matrices().iter().map(|x| u.conjugate(x)).collect();
        MatSubspace::from_matrices(self.n, &mats)
    }
}

fn combine(basis: &Matrix<Scalar>, x: &[Scalar]) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); basis.cols()];
    for (r, c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (j, slot) in v.iter_mut().enumerate() {
            *slot = slot.plus(&c.times(basis.get(r, j)));
        }
    }
    v
}

pub struct StdSubalgebras {
    pub borel: MatSubspace,
    pub parabolic: MatSubspace,
    pub levi: MatSubspace,
    pub nilradical: MatSubspace,
    pub center_levi: MatSubspace,
    pub tau: MatSubspace,
}

pub fn gl(n: usize) -> MatSubspace {
    MatSubspace::coordinate(n, |_, _| true)
}

pub fn borel(n: usize) -> MatSubspace {
    MatSubspace::coordinate(n, |i, j| i <= j)
}

pub fn std_subalgebras(n: usize, i: &BTreeSet<usize>) -> StdSubalgebras {
    let lab = weyl::block_labels(&weyl::blocks_of(n, i));
    let parabolic = MatSubspace::coordinate(n, |a, b| lab[a] <= lab[b]);
    let levi = MatSubspace::coordinate(n, |a, b| lab[a] == lab[b]);
    let nilradical = MatSubspace::coordinate(n, |a, b| lab[a] < lab[b]);
    let nblocks = lab.last().map_or(0, |x| x + 1);
    let center_levi = MatSubspace::from_vectors(
        n,
        (0..nblocks)
            .map(|blk| {
                let mut v = vec![Scalar::zero(); n * n];
                for a in (0..n).filter(|&a| lab[a] == blk) {
                    v[a * n + a] = Scalar::one();
                }
                v
            })
            .collect(),
    );
    let tau = center_levi.join(&nilradical);
    StdSubalgebras { borel: borel(n), parabolic, levi, nilradical, center_levi, tau }
}

/// `𝔩_{{i}}`: the diagonal plus the `GL_2` at `(i, i+1)`.
pub fn levi_simple(n: usize, i: usize) -> MatSubspace {
    MatSubspace::coordinate(n, |a, b| a == b || (a.min(b) + 1 == i && a.max(b) == i))
}

/// `𝔭_u = 𝔟 + Σ_{i ∈ S0(u)} 𝔩_i`.
pub fn p_u(n: usize, s0u: &BTreeSet<usize>) -> MatSubspace {
    s0u.iter().fold(borel(n), |acc, &i| acc.join(&levi_simple(n, i)))
}

fn stabilizer(p: &HodgeParameter) -> Result<MatSubspace> {
    borel(p.n()).ad(&p.flag())
}

/// `Σ_u piece(u) ∩ target` and the sum of the summand dimensions. With `saturate`, stops once
/// the sum fills `target`, and the summand dimensions are then partial.
fn sum_over_reps(
    p: &HodgeParameter,
    target: &MatSubspace,
    saturate: bool,
    piece: impl Fn(&Perm, &BTreeSet<usize>) -> MatSubspace,
) -> (MatSubspace, usize) {
    let n = p.n();
    let s0 = p.shape().s0();
    let mut total = MatSubspace::zero(n);
    let mut dims = 0;
    for u in p.reps() {
        if saturate && total.dim() == target.dim() {
            break;
        }
        let s0u = weyl::s0_of(&u, &s0);
        let part = piece(&u, &s0u).ad_perm(&u).meet(target);
        dims += part.dim();
        total = total.join(&part);
    }
    (total, dims)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FernReport {
    pub target_dim: usize,
    pub fern_dim: usize,
    pub fern_equal: bool,
    pub borel_sum_dim: usize,
    pub borel_expected: usize,
}

impl FernReport {
    pub fn borel_ok(&self) -> bool {
        self.borel_sum_dim == self.borel_expected
    }
}

pub fn fern_report(p: &HodgeParameter) -> Result<FernReport> {
    let n = p.n();
    let target = stabilizer(p)?;
    let (fern, _) = sum_over_reps(p, &target, true, |_, s0u| std_subalgebras(n, s0u).parabolic);
    let (bsum, _) = sum_over_reps(p, &target, true, |_, _| borel(n));
    Ok(FernReport {
        target_dim: target.dim(),
        fern_dim: fern.dim(),
        fern_equal: fern.equals(&target),
        borel_sum_dim: bsum.dim(),
        borel_expected: n * (n + 1) / 2,
    })
}

/// Checks both the parabolic fern identity and the full-dimension claim for the Borel sum.
pub fn fern_check(p: &HodgeParameter) -> Result<FernReport> {
    let r = fern_report(p)?;
    if !r.fern_equal {
        return Err(Error::IdentityViolated(format!(
            "parabolic sum has dim {} but Ad_g(b) has dim {}",
            r.fern_dim, r.target_dim
        )));
    }
    if !r.borel_ok() {
        return Err(Error::IdentityViolated(format!(
            "Borel sum has dim {}, expected {}",
            r.borel_sum_dim, r.borel_expected
        )));
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomChain {
    pub flat: usize,
    pub sharp: usize,
    pub diamond: usize,
    pub fil: usize,
    /// `Σ_{u, i ∈ S0(u)} Ad_u(𝔩_i) ∩ Ad_g(𝔟)`, compared against the diamond space.
    pub delta: usize,
    pub delta_equals_diamond: bool,
}

pub fn hom_fil_chain(p: &HodgeParameter) -> Result<HomChain> {
    let n = p.n();
    let fil = stabilizer(p)?;
    let (flat, _) = sum_over_reps(p, &fil, true, |_, s0u| std_subalgebras(n, s0u).tau);
    let (sharp, _) = sum_over_reps(p, &fil, true, |_, _| borel(n));
    let (diamond, _) = sum_over_reps(p, &fil, true, |_, s0u| p_u(n, s0u));
    let (delta, _) = sum_over_reps(p, &fil, true, |_, s0u| {
        s0u.iter().fold(MatSubspace::zero(n), |acc, &i| acc.join(&levi_simple(n, i)))
    });
    if !(sharp.contains_space(&flat) && diamond.contains_space(&sharp) && fil.contains_space(&diamond)) {
        return Err(Error::IdentityViolated("Hom chain is not an inclusion chain".into()));
    }
    Ok(HomChain {
        flat: flat.dim(),
        sharp: sharp.dim(),
        diamond: diamond.dim(),
        fil: fil.dim(),
        delta: delta.dim(),
        delta_equals_diamond: delta.equals(&diamond),
    })
}

/// `Σ_u dim(Ad_u(τ_{S0(u)}) ∩ Ad_g(𝔟)) - dim Σ_u (...)`.
pub fn kernel_g_circ(p: &HodgeParameter) -> Result<usize> {
    let n = p.n();
    let fil = stabilizer(p)?;
    let (sum, dims) = sum_over_reps(p, &fil, false, |_, s0u| std_subalgebras(n, s0u).tau);
    Ok(dims - sum.dim())
}

/// `𝔩_{S0(u)} ∩ Ad_{u^{-1} g}(𝔟)` for every refinement `u`.
pub fn levi_data(p: &HodgeParameter) -> Result<Vec<(Perm, MatSubspace)>> {
    let n = p.n();
    let s0 = p.shape().s0();
    let g = p.flag();
    let mut out = Vec::new();
    for u in p.reps() {
        let s0u = weyl::s0_of(&u, &s0);
        let conj = borel(n).ad(&u.inv_times(&g))?;
        out.push((u.clone(), std_subalgebras(n, &s0u).levi.meet(&conj)));
    }
    Ok(out)
}
