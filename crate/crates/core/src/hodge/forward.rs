use std::collections::BTreeMap;

use super::param::{CrystClass, HodgeParameter, LeviClass};
use crate::error::Result;
use crate::linalg::{Matrix, Scalar};
use crate::shape::SemistableShape;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Sub,
    Quot,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Sub => "sub",
            Side::Quot => "quot",
        }
    }

    pub fn parse(s: &str) -> Option<Side> {
        match s {
            "sub" => Some(Side::Sub),
            "quot" => Some(Side::Quot),
            _ => None,
        }
    }
}

/// Every image of a parameter class: Levi parameters per refinement, the crystalline class,
/// window data on both sides and `ι`-data.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardBundle {
    pub shape: SemistableShape,
    pub levi: Vec<LeviClass>,
    pub cryst: CrystClass,
    pub cst: BTreeMap<(usize, usize, usize, Side), Matrix<Scalar>>,
    pub iota: BTreeMap<(usize, usize), (Matrix<Scalar>, Matrix<Scalar>)>,
}

impl ForwardBundle {
    pub fn levi_at(&self, u: &crate::weyl::Perm) -> Option<&LeviClass> {
        self.levi.iter().find(|lc| &lc.u == u)
    }
}

/// Bundles for every 1-based index interval `[a, b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedBundle {
    pub shape: SemistableShape,
    pub windows: BTreeMap<(usize, usize), ForwardBundle>,
}

pub fn forward(p: &HodgeParameter) -> Result<ForwardBundle> {
    let p = p.normalize()?;
    let sh = p.shape().clone();
    let s = sh.s();
    let levi = p.reps().iter().map(|u| p.p_ref_u(u)).collect::<Result<Vec<_>>>()?;
    let cryst = p.p_cr()?;
    let mut cst = BTreeMap::new();
    let mut iota = BTreeMap::new();
    for r in 1..=s {
        for q in r + 1..=s {
            for t in 1..=sh.blocks()[q - 1].length {
                cst.insert((r, q, t, Side::Sub), p.cst_window_parameter(r, q, t)?);
            }
            for tp in 1..=sh.blocks()[r - 1].length {
                cst.insert((r, q, tp, Side::Quot), p.cst_window_parameter_dual(r, q, tp)?);
            }
            if q >= r + 2 {
                iota.insert((r, q), p.iota(r, q)?);
            }
        }
    }
    Ok(ForwardBundle { shape: sh, levi, cryst, cst, iota })
}

pub fn forward_extended(p: &HodgeParameter) -> Result<ExtendedBundle> {
    let p = p.normalize()?;
    let n = p.n();
    let mut windows = BTreeMap::new();
    for a in 1..=n {
        for b in a..=n {
            windows.insert((a, b), forward(&p.interval(a, b))?);
        }
    }
    Ok(ExtendedBundle { shape: p.shape().clone(), windows })
}
