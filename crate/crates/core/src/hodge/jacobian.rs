use super::param::{p_cr_matrix, p_ref_blocks, torus_normalize, u0, HodgeParameter};
use crate::error::Result;
use crate::linalg::{modp, DualScalar, Field, Fp, Matrix, Scalar};
use crate::weyl::{self, Perm};

/// Kernel dimension of the differential of `(p_ref, p_cr)` at `P` over all strictly-upper
/// coordinate directions. Expected to be `s - 1`, the tangent of the block-torus orbit.
///
/// With `M = Nu w0 B`, a variation `dM` gives `Nu^{-1} dNu = strict upper part of
/// Nu^{-1} dM B^{-1} w0`, so one factorization per refinement gives every column.
pub fn jacobian_kernel_dim(p: &HodgeParameter) -> Result<usize> {
    kernel_dim(p, true)
}

fn kernel_dim(p: &HodgeParameter, certify: bool) -> Result<usize> {
    let p = p.normalize()?;
    let n = p.n();
    let sh = p.shape();
    let coords = strict_upper(n);
    let l = p.matrix();
    let g = l.rev_cols();

    let tau: Vec<Vec<Scalar>> = (0..sh.s())
        .map(|r| {
            coords
                .iter()
                .map(|&(i, j)| {
                    let (bi, bj) = (sh.block_of(i), sh.block_of(j));
                    let w = (bi == r) as i64 - (bj == r) as i64;
                    l.get(i, j) * Scalar::from_integer(w.into())
                })
                .collect()
        })
        .collect();
    let tau_rank = Matrix::from_rows(tau.clone()).rank();

    let lens = sh.lengths();
    let (nu, dnu) = nu_variation(&u0(&lens), &g, &coords)?;
    let s = sh.s();
    let dual = |k: usize| {
        Matrix::from_fn(s, s, |a, b| DualScalar::new(nu.get(n - s + a, n - s + b).clone(), dnu(k, n - s + a, n - s + b)))
    };
    let cr: Vec<Matrix<DualScalar>> = (0..coords.len()).map(|k| torus_normalize(&dual(k))).collect::<Result<_>>()?;
    let cr_rows: Vec<Vec<Scalar>> =
        (0..s).flat_map(|a| (a + 1..s).map(move |b| (a, b))).map(|(a, b)| cr.iter().map(|m| m.get(a, b).deriv.clone()).collect()).collect();

    if certify {
        if let Some(k) = certify_mod_p(&p, &g, &coords, &tau, tau_rank, &cr_rows) {
            return Ok(k);
        }
    }

    let mut ech = Echelon::new();
    let mut tau_in_kernel = true;
    let mut pending: Vec<Vec<Scalar>> = Vec::new();
    let mut feed = |row: Vec<Scalar>, ech: &mut Echelon<Scalar>, tau_ok: &mut bool| {
        if *tau_ok && tau.iter().any(|t| !dot(t, &row).is_zero()) {
            *tau_ok = false;
        }
        if ech.rank + tau_rank < coords.len() || !*tau_ok {
            ech.push(row);
        } else {
            pending.push(row);
        }
    };
    for row in cr_rows {
        feed(row, &mut ech, &mut tau_in_kernel);
    }
    for u in refining_reps(&p) {
        let (_, dnu) = nu_variation(&u, &g, &coords)?;
        for (a, b) in block_pairs(&p, &u) {
            let row = (0..coords.len()).map(|c| dnu(c, a, b)).collect();
            feed(row, &mut ech, &mut tau_in_kernel);
        }
    }
    if !tau_in_kernel {
        for row in std::mem::take(&mut pending) {
            ech.push(row);
        }
    }
    Ok(coords.len() - ech.rank)
}

/// Mod-`P` rank of the Jacobian. A rank of `#coords - rank(τ)` bounds the exact kernel
/// from above by `rank(τ)`; the torus directions bound it from below. `None` when the
/// reduction degenerates or the bound is not reached.
fn certify_mod_p(
    p: &HodgeParameter,
    g: &Matrix<Scalar>,
    coords: &[(usize, usize)],
    tau: &[Vec<Scalar>],
    tau_rank: usize,
    cr_rows: &[Vec<Scalar>],
) -> Option<usize> {
    let reduce = |v: &[Scalar]| v.iter().map(Fp::try_from_scalar).collect::<Option<Vec<Fp>>>();
    let tau_p: Vec<Vec<Fp>> = tau.iter().map(|t| reduce(t)).collect::<Option<_>>()?;
    let gp = modp::reduce_matrix(g)?;
    let mut ech = Echelon::new();
    let push = |row: Vec<Fp>, ech: &mut Echelon<Fp>| -> bool {
        if tau_p.iter().any(|t| !dot(t, &row).is_zero()) {
            return false;
        }
        ech.push(row);
        true
    };
    for row in cr_rows {
        if !push(reduce(row)?, &mut ech) {
            return None;
        }
    }
    for u in refining_reps(p) {
        let (_, dnu) = nu_variation(&u, &gp, coords).ok()?;
        for (a, b) in block_pairs(p, &u) {
            if !push((0..coords.len()).map(|c| dnu(c, a, b)).collect(), &mut ech) {
                return None;
            }
        }
    }
    (ech.rank + tau_rank == coords.len()).then_some(tau_rank)
}

/// Representatives whose `S0(u)` has a block of size at least two.
fn refining_reps(p: &HodgeParameter) -> Vec<Perm> {
    let s0 = p.shape().s0();
    p.reps().into_iter().filter(|u| weyl::blocks_of(p.n(), &weyl::s0_of(u, &s0)).iter().any(|&k| k > 1)).collect()
}

/// Strictly-upper positions inside the diagonal blocks of `S0(u)`.
fn block_pairs(p: &HodgeParameter, u: &Perm) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut t = 0;
    for k in weyl::blocks_of(p.n(), &weyl::s0_of(u, &p.shape().s0())) {
        for a in t..t + k {
            for b in a + 1..t + k {
                out.push((a, b));
            }
        }
        t += k;
    }
    out
}

fn strict_upper(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc.plus(&x.times(y)))
}

/// `Nu` of `u^{-1} g` and `(k, a, b) ↦ dNu[a][b]` along the `k`-th coordinate of `L`.
#[allow(clippy::type_complexity)]
fn nu_variation<'a, T: Field>(
    u: &Perm,
    g: &Matrix<T>,
    coords: &'a [(usize, usize)],
) -> Result<(Matrix<T>, impl Fn(usize, usize, usize) -> T + 'a)> {
    let n = g.rows();
    let f = u.inv_times(g).bruhat_w0_factor()?;
    let ninv = f.nu.invert_unit_upper();
    let bw = f.b.invert()?.rev_cols();
    let uinv = u.inverse();
    let nu = f.nu.clone();
    let nu2 = f.nu;
    let d = move |k: usize, a: usize, b: usize| {
        let (i, j) = coords[k];
        let col = uinv.at(i);
        let c = bw.get(n - 1 - j, b);
        if c.is_zero() {
            return T::zero();
        }
        let mut acc = T::zero();
        for m in a..b {
            acc = acc.plus(&nu2.get(a, m).times(ninv.get(m, col)));
        }
        acc.times(c)
    };
    Ok((nu, d))
}

struct Echelon<T> {
    rows: Vec<(usize, Vec<T>)>,
    rank: usize,
}

impl<T: Field> Echelon<T> {
    fn new() -> Self {
        Echelon { rows: Vec::new(), rank: 0 }
    }

    fn push(&mut self, mut v: Vec<T>) {
        for (piv, r) in &self.rows {
            if !v[*piv].is_zero() {
                let f = v[*piv].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    *x = x.minus(&f.times(y));
                }
            }
        }
        if let Some(piv) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[piv].inverse().expect("nonzero pivot");
            for x in v.iter_mut() {
                *x = x.times(&inv);
            }
            for (_, r) in self.rows.iter_mut() {
                if !r[piv].is_zero() {
                    let f = r[piv].clone();
                    for (x, y) in r.iter_mut().zip(&v) {
                        *x = x.minus(&f.times(y));
                    }
                }
            }
            self.rows.push((piv, v));
            self.rank += 1;
        }
    }
}

/// Same quantity by forward-mode dual numbers, one coordinate direction at a time.
pub fn jacobian_kernel_dim_dual(p: &HodgeParameter) -> Result<usize> {
    let p = p.normalize()?;
    let n = p.n();
    let s0 = p.shape().s0();
    let lengths = p.shape().lengths();
    let reps = p.reps();
    let coords = strict_upper(n);
    let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(coords.len());
    for &(ci, cj) in &coords {
        let l = Matrix::from_fn(n, n, |i, j| {
            let v = p.matrix().get(i, j).clone();
            if (i, j) == (ci, cj) {
                DualScalar::variable(v)
            } else {
                DualScalar::constant(v)
            }
        });
        let mut col = Vec::new();
        for u in &reps {
            for blk in p_ref_blocks(&s0, &l, u)? {
                push_strict_upper(&blk, &mut col);
            }
        }
        push_strict_upper(&p_cr_matrix(&lengths, &l)?, &mut col);
        columns.push(col);
    }
    let rows = columns.first().map_or(0, |c| c.len());
    let jac = Matrix::from_fn(rows, coords.len(), |i, j| columns[j][i].clone());
    Ok(coords.len() - jac.rank())
}

fn push_strict_upper(m: &Matrix<DualScalar>, out: &mut Vec<Scalar>) {
    for i in 0..m.rows() {
        for j in i + 1..m.cols() {
            out.push(m.get(i, j).deriv.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::shape::{compositions, SemistableShape};

    #[test]
    fn fast_matches_dual_numbers() {
        for n in 1..=4 {
            for lengths in compositions(n) {
                let sh = SemistableShape::with_lengths(7, &lengths).unwrap();
                for trial in 0..2 {
                    let p = rng::random_param(&mut rng::trial_rng(11, trial), &sh, 9).unwrap();
                    let fast = jacobian_kernel_dim(&p).unwrap();
                    assert_eq!(fast, jacobian_kernel_dim_dual(&p).unwrap(), "{lengths:?}");
                    assert_eq!(fast, kernel_dim(&p, false).unwrap(), "{lengths:?}");
                    assert_eq!(fast, lengths.len() - 1, "{lengths:?}");
                }
            }
        }
    }
}
