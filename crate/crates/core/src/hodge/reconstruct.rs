//! Inverse of the forward maps: recover the normalized parameter from window bundles.

use std::collections::BTreeMap;

use super::forward::{forward, ExtendedBundle, ForwardBundle, Side};
use super::param::{CrystClass, HodgeParameter};
use crate::error::{Error, Result};
use crate::linalg::{q, Field, Matrix, Scalar};
use crate::shape::SemistableShape;

type Probe<'a> = dyn Fn(&Scalar) -> Result<Matrix<Scalar>> + 'a;

/// `(parameter of E_r^{r+1}, induced parameter)`.
pub type IotaDatum = (Matrix<Scalar>, Matrix<Scalar>);

/// How the corner entry of a window with three or more blocks was pinned down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PinBranch {
    Iota,
    SubWindow,
    QuotWindow,
    Cryst,
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub param: HodgeParameter,
    pub pins: BTreeMap<(usize, usize), PinBranch>,
}

pub fn reconstruct(ext: &ExtendedBundle) -> Result<HodgeParameter> {
    Ok(reconstruct_traced(ext)?.param)
}

pub fn reconstruct_traced(ext: &ExtendedBundle) -> Result<Reconstruction> {
    let n = ext.shape.n();
    let mut solver = Solver { ext, memo: BTreeMap::new(), pins: BTreeMap::new() };
    let l = solver.solve(1, n)?;
    let param = HodgeParameter::new(ext.shape.clone(), l)?;
    let again = super::forward::forward_extended(&param)?;
    if let Some(k) = ext.windows.keys().chain(again.windows.keys()).find(|k| ext.windows.get(k) != again.windows.get(k)) {
        return Err(Error::DataInconsistent(format!("window [{},{}] disagrees with the reconstruction", k.0, k.1)));
    }
    Ok(Reconstruction { param, pins: solver.pins })
}

struct Solver<'a> {
    ext: &'a ExtendedBundle,
    memo: BTreeMap<(usize, usize), Matrix<Scalar>>,
    pins: BTreeMap<(usize, usize), PinBranch>,
}

impl Solver<'_> {
    fn solve(&mut self, a: usize, b: usize) -> Result<Matrix<Scalar>> {
        if let Some(m) = self.memo.get(&(a, b)) {
            return Ok(m.clone());
        }
        let bundle = self
            .ext
            .windows
            .get(&(a, b))
            .ok_or_else(|| Error::DataInconsistent(format!("missing bundle for window [{a},{b}]")))?;
        let sh = bundle.shape.clone();
        let m = match sh.s() {
            1 => steinberg_block(bundle)?,
            2 => two_block(bundle)?,
            _ => {
                let m1 = self.solve(a, b - 1)?;
                let m2 = self.solve(a + 1, b)?;
                let (m, branch) = pin_corner(bundle, &m1, &m2)?;
                self.pins.insert((a, b), branch);
                m
            }
        };
        let p = HodgeParameter::new(sh, m.clone())?;
        if forward(&p)? != *bundle {
            return Err(Error::DataInconsistent(format!("window [{a},{b}] does not reproduce its bundle")));
        }
        self.memo.insert((a, b), m.clone());
        Ok(m)
    }
}

fn steinberg_block(bundle: &ForwardBundle) -> Result<Matrix<Scalar>> {
    let id = bundle
        .levi
        .iter()
        .find(|lc| lc.u.is_identity())
        .ok_or_else(|| Error::DataInconsistent("no identity refinement".into()))?;
    match id.blocks.as_slice() {
        [blk] if blk.is_unit_upper() && blk.rows() == bundle.shape.n() => Ok(blk.clone()),
        _ => Err(Error::DataInconsistent("malformed Steinberg block".into())),
    }
}

fn get_cst(bundle: &ForwardBundle, key: (usize, usize, usize, Side)) -> Result<&Matrix<Scalar>> {
    bundle
        .cst
        .get(&key)
        .ok_or_else(|| Error::DataInconsistent(format!("missing window datum {key:?}")))
}

/// Two blocks `[[A, X], [0, B]]`: the sub-side data give the columns of `X` up to scalars
/// `c_t`, the quotient-side data give the rows of `A^{-1} X B^{-1}` up to scalars `d_t'`.
fn two_block(bundle: &ForwardBundle) -> Result<Matrix<Scalar>> {
    let sh = &bundle.shape;
    let (l1, l2) = (sh.blocks()[0].length, sh.blocks()[1].length);
    let id = bundle
        .levi
        .iter()
        .find(|lc| lc.u.is_identity())
        .ok_or_else(|| Error::DataInconsistent("no identity refinement".into()))?;
    if id.blocks.len() != 2 {
        return Err(Error::DataInconsistent("identity refinement must have two blocks".into()));
    }
    let (a, bm) = (&id.blocks[0], &id.blocks[1]);
    let mut v = Matrix::<Scalar>::zeros(l1, l2);
    for t in 1..=l2 {
        let u = get_cst(bundle, (1, 2, t, Side::Sub))?;
        for i in 0..l1 {
            v.set(i, t - 1, u.get(i, l1 - 1).clone());
        }
    }
    let mut w = Matrix::<Scalar>::zeros(l1, l2);
    for tp in 1..=l1 {
        let u = get_cst(bundle, (1, 2, tp, Side::Quot))?;
        for k in 0..l2 {
            w.set(tp - 1, k, u.get(l2 - 1 - k, l2 - 1).clone());
        }
    }
    let pm = a.invert_unit_upper().mul(&v);
    let binv = bm.invert_unit_upper();
    let unknowns = l1 + l2;
    let mut h = Matrix::<Scalar>::zeros(l1 * l2, unknowns);
    for i in 0..l1 {
        for j in 0..l2 {
            let row = i * l2 + j;
            for t in 0..l2 {
                h.set(row, t, pm.get(i, t).times(binv.get(t, j)));
            }
            h.set(row, l2 + i, w.get(i, j).negated());
        }
    }
    let ns = h.nullspace();
    if ns.len() != 1 {
        return Err(Error::DataInconsistent(format!(
            "two-block system has a {}-dimensional solution space",
            ns.len()
        )));
    }
    let z = &ns[0];
    let c0 = z[0].inverse().ok_or_else(|| Error::DataInconsistent("boundary scalar vanishes".into()))?;
    let c: Vec<Scalar> = z[..l2].iter().map(|x| x.times(&c0)).collect();
    let n = l1 + l2;
    let mut l = Matrix::<Scalar>::identity(n);
    for i in 0..l1 {
        for j in i + 1..l1 {
            l.set(i, j, a.get(i, j).clone());
        }
        for (t, ct) in c.iter().enumerate().take(l2) {
            l.set(i, l1 + t, v.get(i, t).times(ct));
        }
    }
    for i in 0..l2 {
        for j in i + 1..l2 {
            l.set(l1 + i, l1 + j, bm.get(i, j).clone());
        }
    }
    Ok(l)
}

fn merged(m1: &Matrix<Scalar>, m2: &Matrix<Scalar>, x: &Scalar) -> Matrix<Scalar> {
    let n = m1.rows() + 1;
    Matrix::from_fn(n, n, |i, j| {
        if i >= j {
            if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        } else if i == 0 && j == n - 1 {
            x.clone()
        } else if j < n - 1 {
            m1.get(i, j).clone()
        } else {
            m2.get(i - 1, j - 1).clone()
        }
    })
}

fn pin_corner(bundle: &ForwardBundle, m1: &Matrix<Scalar>, m2: &Matrix<Scalar>) -> Result<(Matrix<Scalar>, PinBranch)> {
    let n = m1.rows() + 1;
    if m1.block(1, n - 1, 1, n - 1) != m2.block(0, n - 2, 0, n - 2) {
        return Err(Error::DataInconsistent("overlapping windows disagree".into()));
    }
    let sh = bundle.shape.clone();
    let s = sh.s();
    let (l1, ls) = (sh.blocks()[0].length, sh.blocks()[s - 1].length);
    let make = |x: &Scalar| HodgeParameter::new(sh.clone(), merged(m1, m2, x));
    let mut branches: Vec<PinBranch> = Vec::new();
    if sh.is_crystalline() {
        branches.push(PinBranch::Iota);
    }
    if l1 > 1 {
        branches.push(PinBranch::SubWindow);
    }
    if ls > 1 {
        branches.push(PinBranch::QuotWindow);
    }
    branches.push(PinBranch::Cryst);
    let mut saw_candidate = false;
    for br in branches {
        let (target, f): (Matrix<Scalar>, Box<Probe>) = match br {
            PinBranch::Iota => {
                let t = bundle.iota.get(&(1, s)).ok_or_else(|| Error::DataInconsistent("missing iota".into()))?;
                (t.1.clone(), Box::new(|x: &Scalar| Ok(make(x)?.iota(1, s)?.1)))
            }
            PinBranch::SubWindow => (
                get_cst(bundle, (1, s, ls, Side::Sub))?.clone(),
                Box::new(|x: &Scalar| make(x)?.cst_window_parameter(1, s, ls)),
            ),
            PinBranch::QuotWindow => (
                get_cst(bundle, (1, s, 1, Side::Quot))?.clone(),
                Box::new(|x: &Scalar| make(x)?.cst_window_parameter_dual(1, s, 1)),
            ),
            PinBranch::Cryst => (bundle.cryst.c.clone(), Box::new(|x: &Scalar| Ok(make(x)?.p_cr()?.c))),
        };
        let cands = pin_candidates(&*f, &target);
        saw_candidate |= !cands.is_empty();
        if let Some(x) = cands.into_iter().next() {
            return Ok((merged(m1, m2, &x), br));
        }
    }
    if saw_candidate {
        Err(Error::DataInconsistent("no candidate corner entry reproduces the data".into()))
    } else {
        Err(Error::UnsupportedShape(format!("no datum of shape {:?} depends on the corner entry", sh.lengths())))
    }
}

/// Values `x` with `f(x) = target`, found by fitting each varying entry of `f` as a Möbius
/// function of `x` through three samples and checking the solution on the whole datum.
pub fn pin_candidates(f: &dyn Fn(&Scalar) -> Result<Matrix<Scalar>>, target: &Matrix<Scalar>) -> Vec<Scalar> {
    let mut samples: Vec<(Scalar, Matrix<Scalar>)> = Vec::new();
    for k in 0..16i64 {
        let x = q(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        if let Ok(y) = f(&x) {
            if y.rows() == target.rows() && y.cols() == target.cols() {
                samples.push((x, y));
            }
        }
        if samples.len() == 3 {
            break;
        }
    }
    if samples.len() < 3 {
        return Vec::new();
    }
    let mut out: Vec<Scalar> = Vec::new();
    for i in 0..target.rows() {
        for j in 0..target.cols() {
            let ys: Vec<&Scalar> = samples.iter().map(|(_, y)| y.get(i, j)).collect();
            if ys.iter().all(|y| *y == ys[0]) {
                continue;
            }
            let Some(x) = solve_mobius(&samples.iter().map(|(x, _)| x.clone()).collect::<Vec<_>>(), &ys, target.get(i, j)) else {
                continue;
            };
            if out.contains(&x) {
                continue;
            }
            if matches!(f(&x), Ok(ref y) if y == target) {
                out.push(x);
            }
        }
    }
    out
}

/// Fit `y = (αx+β)/(γx+δ)` through three points and solve `y(x) = target`.
fn solve_mobius(xs: &[Scalar], ys: &[&Scalar], target: &Scalar) -> Option<Scalar> {
    let m = Matrix::from_fn(3, 4, |r, c| match c {
        0 => xs[r].clone(),
        1 => Scalar::one(),
        2 => (&xs[r] * ys[r]).negated(),
        _ => ys[r].negated(),
    });
    let ns = m.nullspace();
    if ns.len() != 1 {
        return None;
    }
    let (al, be, ga, de) = (&ns[0][0], &ns[0][1], &ns[0][2], &ns[0][3]);
    let den = al - target * ga;
    if den.is_zero() {
        return None;
    }
    Some((target * de - be) / den)
}

/// Crystalline classes from their `ι`-data `{ι^{r,q} : q >= r+2}`.
pub fn reconstruct_crystalline(
    iota: &BTreeMap<(usize, usize), IotaDatum>,
    shape: &SemistableShape,
) -> Result<CrystClass> {
    if !shape.is_crystalline() {
        return Err(Error::UnsupportedShape("crystalline reconstruction needs all block lengths 1".into()));
    }
    let s = shape.s();
    let mut memo: BTreeMap<(usize, usize), Matrix<Scalar>> = BTreeMap::new();
    for width in 1..=s {
        for a in 1..=s + 1 - width {
            let b = a + width - 1;
            let m = if width <= 2 {
                Matrix::from_fn(width, width, |i, j| if j >= i { Scalar::one() } else { Scalar::zero() })
            } else {
                let m1 = &memo[&(a, b - 1)];
                let m2 = &memo[&(a + 1, b)];
                let target = &iota
                    .get(&(a, b))
                    .ok_or_else(|| Error::DataInconsistent(format!("missing iota ({a},{b})")))?
                    .1;
                let sub = shape.interval(a - 1, b);
                let f = |x: &Scalar| HodgeParameter::new(sub.clone(), merged(m1, m2, x))?.iota(1, width).map(|p| p.1);
                let x = pin_candidates(&f, target)
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::DataInconsistent(format!("iota ({a},{b}) cannot be matched")))?;
                merged(m1, m2, &x)
            };
            memo.insert((a, b), m);
        }
    }
    let c = memo.remove(&(1, s)).expect("full window");
    let p = HodgeParameter::new(shape.clone(), c.clone())?;
    for (&(r, qq), datum) in iota {
        if p.iota(r, qq)? != *datum {
            return Err(Error::DataInconsistent(format!("iota ({r},{qq}) not reproduced")));
        }
    }
    Ok(CrystClass { c })
}
