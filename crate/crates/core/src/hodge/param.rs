use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg::{modp, Field, Matrix, Scalar};
use crate::shape::SemistableShape;
use crate::weyl::{self, Perm};

/// Unit upper-triangular parameter matrix `L` of a shape. The Hodge flag is `g = L·w0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeParameter {
    shape: SemistableShape,
    l: Matrix<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonCritical {
    Ok,
    FailureAt(Perm, usize),
}

impl NonCritical {
    pub fn is_ok(&self) -> bool {
        matches!(self, NonCritical::Ok)
    }
}

/// Parameters of the Steinberg pieces of the `S0(u)`-filtration attached to `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeviClass {
    pub u: Perm,
    pub blocks: Vec<Matrix<Scalar>>,
}

/// Torus-normalized crystalline parameter (superdiagonal all 1).
#[derive(Clone, Debug, PartialEq)]
pub struct CrystClass {
    pub c: Matrix<Scalar>,
}

impl HodgeParameter {
    pub fn new(shape: SemistableShape, l: Matrix<Scalar>) -> Result<Self> {
        if l.rows() != shape.n() || !l.is_unit_upper() {
            return Err(Error::InvalidParameter(format!(
                "expected a unit upper-triangular {0}x{0} matrix",
                shape.n()
            )));
        }
        Ok(HodgeParameter { shape, l })
    }

    pub fn shape(&self) -> &SemistableShape {
        &self.shape
    }

    pub fn matrix(&self) -> &Matrix<Scalar> {
        &self.l
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn flag(&self) -> Matrix<Scalar> {
        self.l.rev_cols()
    }

    pub fn reps(&self) -> Vec<Perm> {
        weyl::enumerate_min_coset_reps(self.n(), &self.shape.s0()).reps
    }

    pub fn check_non_critical(&self) -> NonCritical {
        let g = self.flag();
        let gp = modp::reduce_matrix(&g);
        for u in self.reps() {
            if let Some(gp) = &gp {
                if u.inv_times(gp).big_cell_failure_fast().is_none() {
                    continue;
                }
            }
            if let Some(k) = u.inv_times(&g).big_cell_failure_fast() {
                return NonCritical::FailureAt(u, k);
            }
        }
        NonCritical::Ok
    }

    /// Scale `L_ij` by `z_{blk(i)} / z_{blk(j)}`.
    pub fn z_action(&self, z: &[Scalar]) -> Result<HodgeParameter> {
        if z.len() != self.shape.s() || z.iter().any(|x| x.is_zero()) {
            return Err(Error::InvalidParameter("z needs one nonzero scalar per block".into()));
        }
        let sh = &self.shape;
        let l = Matrix::from_fn(self.n(), self.n(), |i, j| {
            self.l.get(i, j) * &z[sh.block_of(i)] / &z[sh.block_of(j)]
        });
        HodgeParameter::new(self.shape.clone(), l)
    }

    /// The representative with `L_{t_l, t_l+1} = 1` for `1 <= l <= s-1`.
    pub fn normalize(&self) -> Result<HodgeParameter> {
        let s = self.shape.s();
        let mut z = vec![Scalar::one(); s];
        for l in 1..s {
            let t = self.shape.t(l);
            let e = self.l.get(t - 1, t);
            if e.is_zero() {
                return Err(Error::BoundaryEntryZero(l));
            }
            z[l] = &z[l - 1] * e;
        }
        self.z_action(&z)
    }

    pub fn is_normalized(&self) -> bool {
        (1..self.shape.s()).all(|l| {
            let t = self.shape.t(l);
            *self.l.get(t - 1, t) == Scalar::one()
        })
    }

    pub fn equivalent(&self, o: &HodgeParameter) -> Result<bool> {
        if self.shape != o.shape {
            return Ok(false);
        }
        Ok(self.normalize()?.l == o.normalize()?.l)
    }

    pub fn p_ref_u(&self, u: &Perm) -> Result<LeviClass> {
        let blocks = p_ref_blocks(&self.shape.s0(), &self.l, u)?;
        Ok(LeviClass { u: u.clone(), blocks })
    }

    pub fn p_cr(&self) -> Result<CrystClass> {
        Ok(CrystClass { c: p_cr_matrix(&self.shape.lengths(), &self.l)? })
    }

    pub fn dual(&self) -> HodgeParameter {
        let linv = self.l.invert_unit_upper();
        let d = linv.transpose().rev_rows().rev_cols();
        HodgeParameter { shape: self.shape.dual(), l: d }
    }

    /// Subquotient on the 1-based index interval `[a, b]`.
    pub fn interval(&self, a: usize, b: usize) -> HodgeParameter {
        HodgeParameter { shape: self.shape.interval(a - 1, b), l: self.l.block(a - 1, b, a - 1, b) }
    }

    /// Subquotient `E_r^q` on blocks `r..=q`.
    pub fn principal_window(&self, r: usize, q: usize) -> HodgeParameter {
        self.interval(self.shape.t(r - 1) + 1, self.shape.t(q))
    }

    /// Sub-side datum `E_r^{[q,t]}`: the leading `l_r` block of the unit-upper factor of the
    /// minor rows `[1, m]`, columns `[t+1, t+m]` of the window `E_r^q`, `m = l_r + ... + l_{q-1}`.
    pub fn cst_window_parameter(&self, r: usize, q: usize, t: usize) -> Result<Matrix<Scalar>> {
        let (u, lr) = self.window_minor_factor(r, q, t)?;
        Ok(u.block(0, lr, 0, lr))
    }

    /// Quotient-side datum `E_q^{[r,t']}`, read from the dual window.
    pub fn cst_window_parameter_dual(&self, r: usize, q: usize, tp: usize) -> Result<Matrix<Scalar>> {
        let lr = self.shape.blocks()[r - 1].length;
        let win = self.principal_window(r, q).dual();
        win.cst_window_parameter(1, q - r + 1, lr - tp + 1)
    }

    /// `ι^{r,q}` for `q >= r+2`: the parameter of `E_r^{r+1}` and the induced parameter, i.e. the
    /// leading `l_r + l_{r+1}` block of the unit-upper factor of the `t = l_q` minor.
    pub fn iota(&self, r: usize, q: usize) -> Result<(Matrix<Scalar>, Matrix<Scalar>)> {
        assert!(q >= r + 2 && q <= self.shape.s());
        let first = self.principal_window(r, r + 1).l;
        let lq = self.shape.blocks()[q - 1].length;
        let (u, _) = self.window_minor_factor(r, q, lq)?;
        let k = first.rows();
        Ok((first, u.block(0, k, 0, k)))
    }

    fn window_minor_factor(&self, r: usize, q: usize, t: usize) -> Result<(Matrix<Scalar>, usize)> {
        let sh = &self.shape;
        assert!(1 <= r && r < q && q <= sh.s());
        assert!(1 <= t && t <= sh.blocks()[q - 1].length);
        let base = sh.t(r - 1);
        let m = sh.t(q - 1) - base;
        let minor = self.l.block(base, base + m, base + t, base + t + m);
        let f = minor.uld_factor()?;
        Ok((f.u, sh.blocks()[r - 1].length))
    }
}

/// Diagonal `S0(u)`-blocks of `Nu` where `u^{-1} L w0 = Nu w0 B`.
pub fn p_ref_blocks<T: Field>(s0: &BTreeSet<usize>, l: &Matrix<T>, u: &Perm) -> Result<Vec<Matrix<T>>> {
    let n = l.rows();
    let nu = u.inv_times(&l.rev_cols()).bruhat_w0_factor()?.nu;
    let lens = weyl::blocks_of(n, &weyl::s0_of(u, s0));
    let mut out = Vec::with_capacity(lens.len());
    let mut t = 0;
    for k in lens {
        out.push(nu.block(t, t + k, t, t + k));
        t += k;
    }
    Ok(out)
}

/// `u0`: positions `n-s+1..n` carry the block ends `t_1..t_s`, the rest increasing.
pub fn u0(lengths: &[usize]) -> Perm {
    let n: usize = lengths.iter().sum();
    let ends: Vec<usize> = lengths.iter().scan(0, |t, &l| {
        *t += l;
        Some(*t - 1)
    }).collect();
    let mut img: Vec<usize> = (0..n).filter(|i| !ends.contains(i)).collect();
    img.extend(ends);
    Perm::from_images(img)
}

pub fn torus_normalize<T: Field>(c: &Matrix<T>) -> Result<Matrix<T>> {
    let s = c.rows();
    let mut d = vec![T::one(); s];
    for i in (0..s.saturating_sub(1)).rev() {
        let e = c.get(i, i + 1);
        let inv = e.inverse().ok_or(Error::BoundaryEntryZero(i + 1))?;
        d[i] = d[i + 1].times(&inv);
    }
    let dinv: Vec<T> = d.iter().map(|x| x.inverse().expect("unit")).collect();
    Ok(Matrix::from_fn(s, s, |i, j| c.get(i, j).times(&d[i]).times(&dinv[j])))
}

/// Trailing `s x s` block of `Nu` for `u0^{-1} L w0 = Nu w0 B`, torus-normalized.
pub fn p_cr_matrix<T: Field>(lengths: &[usize], l: &Matrix<T>) -> Result<Matrix<T>> {
    let n = l.rows();
    let s = lengths.len();
    let u = u0(lengths);
    let nu = u.inv_times(&l.rev_cols()).bruhat_w0_factor()?.nu;
    torus_normalize(&nu.block(n - s, n, n - s, n))
}
