//! Deterministic seeded sampling of shapes and non-critical parameters.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hodge::HodgeParameter;
use crate::linalg::{q, Matrix, Scalar};
use crate::shape::SemistableShape;

pub const DEFAULT_BOX: i64 = 9;

/// Generator for trial `trial` under a root seed; each trial is its own ChaCha stream, so
/// results do not depend on the order trials are run in.
pub fn trial_rng(root: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root);
    rng.set_stream(trial);
    rng
}

/// Rejection-sample a non-critical parameter with nonzero strictly-upper entries drawn
/// from `[-bound, bound]`, returned normalized.
pub fn random_param(rng: &mut impl Rng, shape: &SemistableShape, bound: i64) -> Result<HodgeParameter> {
    let n = shape.n();
    for _ in 0..10_000 {
        let l = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                q(1)
            } else if j > i {
                random_nonzero(rng, bound)
            } else {
                q(0)
            }
        });
        let p = HodgeParameter::new(shape.clone(), l)?;
        if !p.check_non_critical().is_ok() {
            continue;
        }
        if let Ok(p) = p.normalize() {
            return Ok(p);
        }
    }
    Err(Error::InvalidParameter("no non-critical parameter found in 10000 draws".into()))
}

fn random_nonzero(rng: &mut impl Rng, bound: i64) -> Scalar {
    let mut x = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        x = -x;
    }
    q(x)
}

/// Random block scalars for the torus action.
pub fn random_torus(rng: &mut impl Rng, s: usize, bound: i64) -> Vec<Scalar> {
    (0..s).map(|_| random_nonzero(rng, bound)).collect()
}

/// A random shape with the given lengths; each boundary is linked (non-generic) with
/// probability `link_prob`.
pub fn random_shape(rng: &mut impl Rng, prime: u64, lengths: &[usize], link_prob: f64) -> Result<SemistableShape> {
    let links: BTreeSet<usize> = (1..lengths.len()).filter(|_| rng.gen_bool(link_prob)).collect();
    SemistableShape::with_links(prime, lengths, &links)
}
