//! Closed-form dimensions of deformation and extension spaces.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::liealg;
use crate::rng;
use crate::shape::SemistableShape;
use crate::weyl::{self, Perm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimEntry {
    pub value: i64,
    pub provenance: &'static str,
}

/// Named dimensions, each with the formula it was computed from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimReport {
    pub entries: BTreeMap<&'static str, DimEntry>,
}

impl DimReport {
    fn put(&mut self, name: &'static str, value: i64, provenance: &'static str) {
        self.entries.insert(name, DimEntry { value, provenance });
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.entries.get(name).map(|e| e.value)
    }
}

pub fn deformation_dims(shape: &SemistableShape, u: &Perm) -> DimReport {
    let n = shape.n() as i64;
    let s = shape.s() as i64;
    let s0 = shape.s0();
    let i0 = shape.i0();
    let extra = i0.difference(&s0).count() as i64;
    let rp = weyl::r_plus(u, &i0).len() as i64;
    let mut r = DimReport::default();
    r.put("ext1_u", 1 + n * (n + 1) / 2, "1 + n(n+1)/2");
    r.put("hom_1", 2 * n - i0.len() as i64, "2n - |I0|");
    r.put("hom_u", 2 * n - rp, "2n - |R+_u|");
    r.put("ext1_g", 1 + n * (n - 1) / 2 + extra, "1 + n(n-1)/2 + |I0 \\ S0|");
    r.put("ext1_0", 1 + n * (n - 1) / 2 + extra - s, "ext1_g - s");
    r.put("im_nu", n * (n + 1) / 2 - extra, "n(n+1)/2 - |I0 \\ S0|");
    r.put("hom_g_prime", s + 1, "s + 1");
    r.put("hom_sm_1", s, "s");
    r
}

pub fn rep_side_dims(shape: &SemistableShape) -> Result<DimReport> {
    let n = shape.n() as i64;
    if n < 2 {
        return Err(Error::InvalidShape("representation-side counts need n >= 2".into()));
    }
    let mut r = DimReport::default();
    r.put("lalg_ext", n + 1, "n + 1");
    r.put("sharp_u_ext", 2 * n, "2n");
    r.put("sharp_ext", n + 1 + (1i64 << n) - 2, "n + 1 + 2^n - 2");
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub r_plus_id: usize,
    pub i0: usize,
    pub r_plus_w0: usize,
    pub s0: usize,
    pub reps: usize,
    pub multinomial: u128,
    /// `(im_nu + |I0 \ S0|, dim Σ_u Ad_u(𝔟) ∩ Ad_g(𝔟))` per trial.
    pub borel_sums: Vec<(usize, usize)>,
    /// `(min, max)` of `|R+_u|` over the coset representatives.
    pub r_plus_range: (usize, usize),
    pub violations: Vec<String>,
}

pub fn cross_check(shape: &SemistableShape, trials: u64, seed: u64) -> Result<CrossCheck> {
    let n = shape.n();
    let s0 = shape.s0();
    let i0 = shape.i0();
    let lengths = shape.lengths();
    let reps = weyl::enumerate_min_coset_reps(n, &s0).reps;
    let r_plus_id = weyl::r_plus(&Perm::identity(n), &i0).len();
    let r_plus_w0 = weyl::r_plus(&weyl::w0_s0(&lengths), &i0).len();
    let multinomial = weyl::multinomial_count(&lengths);
    let sizes: Vec<usize> = reps.iter().map(|u| weyl::r_plus(u, &i0).len()).collect();
    let r_plus_range = (*sizes.iter().min().unwrap(), *sizes.iter().max().unwrap());
    let mut violations = Vec::new();
    if r_plus_id != i0.len() {
        violations.push(format!("|R+_id| = {r_plus_id} but |I0| = {}", i0.len()));
    }
    if r_plus_w0 != s0.len() {
        violations.push(format!("|R+_w0(S0)| = {r_plus_w0} but |S0| = {}", s0.len()));
    }
    if reps.len() as u128 != multinomial {
        violations.push(format!("{} coset representatives, multinomial {multinomial}", reps.len()));
    }
    let im_nu = deformation_dims(shape, &Perm::identity(n)).get("im_nu").unwrap() as usize;
    let extra = i0.difference(&s0).count();
    let mut borel_sums = Vec::new();
    for trial in 0..trials {
        let mut r = rng::trial_rng(seed, trial);
        let p = rng::random_param(&mut r, shape, rng::DEFAULT_BOX)?;
        let rep = liealg::fern_report(&p)?;
        let lhs = im_nu + extra;
        if lhs != rep.borel_sum_dim {
            violations.push(format!(
                "trial {trial}: im_nu + |I0\\S0| = {lhs} but the Borel sum has dim {}",
                rep.borel_sum_dim
            ));
        }
        borel_sums.push((lhs, rep.borel_sum_dim));
    }
    Ok(CrossCheck {
        r_plus_id,
        i0: i0.len(),
        r_plus_w0,
        s0: s0.len(),
        reps: reps.len(),
        multinomial,
        borel_sums,
        r_plus_range,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use crate::shape::Block;

    #[test]
    fn gl3_generic_values() {
        let sh = SemistableShape::new(2, vec![Block { alpha: q(1), length: 2 }, Block { alpha: q(3), length: 1 }], vec![2, 1, 0]).unwrap();
        let r = deformation_dims(&sh, &Perm::identity(3));
        assert_eq!(r.get("ext1_u"), Some(7));
        assert_eq!(r.get("hom_1"), Some(5));
        assert_eq!(r.get("hom_u"), Some(5));
        assert_eq!(r.get("ext1_g"), Some(4));
        assert_eq!(r.get("ext1_0"), Some(2));
        assert_eq!(r.get("im_nu"), Some(6));
        assert_eq!(r.get("hom_g_prime"), Some(3));
        assert_eq!(r.get("hom_sm_1"), Some(2));
    }

    #[test]
    fn steinberg_two() {
        let sh = SemistableShape::with_lengths(5, &[2]).unwrap();
        let r = deformation_dims(&sh, &Perm::identity(2));
        assert_eq!(r.get("ext1_u"), Some(4));
        assert_eq!(r.get("hom_1"), Some(3));
        assert_eq!(r.get("ext1_g"), Some(2));
        assert_eq!(r.get("ext1_0"), Some(1));
        assert_eq!(r.get("im_nu"), Some(3));
    }

    #[test]
    fn rep_side_values() {
        let r2 = rep_side_dims(&SemistableShape::with_lengths(3, &[1, 1]).unwrap()).unwrap();
        assert_eq!((r2.get("lalg_ext"), r2.get("sharp_u_ext"), r2.get("sharp_ext")), (Some(3), Some(4), Some(5)));
        let r3 = rep_side_dims(&SemistableShape::with_lengths(3, &[2, 1]).unwrap()).unwrap();
        assert_eq!((r3.get("lalg_ext"), r3.get("sharp_u_ext"), r3.get("sharp_ext")), (Some(4), Some(6), Some(10)));
        assert!(rep_side_dims(&SemistableShape::with_lengths(3, &[1]).unwrap()).is_err());
    }

    #[test]
    fn hom_at_block_reversal() {
        let sh = SemistableShape::with_lengths(3, &[2, 1, 2]).unwrap();
        let w = weyl::w0_s0(&sh.lengths());
        let r = deformation_dims(&sh, &w);
        assert_eq!(r.get("hom_u"), Some(2 * 5 - 2));
    }
}
