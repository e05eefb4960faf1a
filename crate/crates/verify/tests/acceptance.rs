//! Acceptance suite. Runs every criterion in sequence and prints one PASS/FAIL line each.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use stparam::dims::{deformation_dims, rep_side_dims};
use stparam::extcomb::{self, ExtElement, LeviStructure, RootSet};
use stparam::hodge::{forward_extended, jacobian_kernel_dim, jacobian_kernel_dim_dual, reconstruct_traced, PinBranch};
use stparam::liealg::{self, MatSubspace};
use stparam::linalg::{q, Scalar};
use stparam::shape::compositions;
use stparam::{rng, weyl, HodgeParameter, Matrix, Perm, SemistableShape};

type Outcome = Result<String, String>;

const PRIME: u64 = 5;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<f64, String> {
    let t = start.elapsed();
    ensure(t < budget, || format!("took {:.1}s, budget {}s", t.as_secs_f64(), budget.as_secs()))?;
    Ok(t.as_secs_f64())
}

fn sample(seed: u64, stream: u64, sh: &SemistableShape) -> HodgeParameter {
    rng::random_param(&mut rng::trial_rng(seed, stream), sh, rng::DEFAULT_BOX).expect("non-critical sample")
}

fn random_shape(seed: u64, stream: u64, lengths: &[usize]) -> SemistableShape {
    rng::random_shape(&mut rng::trial_rng(seed ^ 0x5eed, stream), PRIME, lengths, 0.5).unwrap()
}

/// Forward to every window, reconstruct, compare; returns the pin branches used.
fn round_trip(p: &HodgeParameter) -> Result<BTreeMap<(usize, usize), PinBranch>, String> {
    let ext = forward_extended(p).map_err(|e| format!("forward: {e}"))?;
    let rec = reconstruct_traced(&ext).map_err(|e| format!("{:?} {:?}: {e}", p.shape().lengths(), p.matrix()))?;
    ensure(rec.param.equivalent(p).unwrap(), || format!("mismatch on {:?}", p.matrix()))?;
    Ok(rec.pins)
}

fn c1_two_blocks() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for l1 in 1..=4 {
        for l2 in 1..=4 {
            for trial in 0..50 {
                let stream = (l1 * 10 + l2) << 16 | trial;
                let sh = random_shape(1, stream as u64, &[l1, l2]);
                round_trip(&sample(1, stream as u64, &sh))?;
                count += 1;
            }
        }
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("{count} parameters over l1, l2 <= 4 in {t:.1}s"))
}

fn c2_crystalline() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for s in 1..=6 {
        for trial in 0..50u64 {
            let stream = (s as u64) << 16 | trial;
            let sh = random_shape(2, stream, &vec![1; s]);
            round_trip(&sample(2, stream, &sh))?;
            count += 1;
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("{count} crystalline parameters, s <= 6, in {t:.1}s"))
}

fn c3_general() -> Outcome {
    let mut branches: BTreeMap<PinBranch, usize> = BTreeMap::new();
    let mut gap_windows = 0;
    let mut unsupported = 0;
    let mut count = 0;
    for (idx, lengths) in (1..=6).flat_map(compositions).enumerate() {
        for trial in 0..10u64 {
            let stream = (idx as u64) << 16 | trial;
            let sh = random_shape(3, stream, &lengths);
            let p = sample(3, stream, &sh);
            let ext = forward_extended(&p).map_err(|e| e.to_string())?;
            match reconstruct_traced(&ext) {
                Ok(rec) => {
                    ensure(rec.param.equivalent(&p).unwrap(), || format!("mismatch on {lengths:?} {:?}", p.matrix()))?;
                    for (&(a, b), &br) in &rec.pins {
                        *branches.entry(br).or_default() += 1;
                        let w = p.shape().interval(a - 1, b);
                        let wl = w.lengths();
                        if wl[0] == 1 && wl[wl.len() - 1] == 1 && !w.is_crystalline() {
                            gap_windows += 1;
                        }
                    }
                }
                Err(stparam::Error::UnsupportedShape(_)) => unsupported += 1,
                Err(e) => return Err(format!("{lengths:?}: {e}")),
            }
            count += 1;
        }
    }
    let b: Vec<String> = branches.iter().map(|(k, v)| format!("{k:?}={v}")).collect();
    Ok(format!(
        "{count} parameters, n <= 6; pins {}; windows in the l1 = 1 gap {gap_windows}; UnsupportedShape {unsupported}",
        b.join(" ")
    ))
}

fn c4_jacobian() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for (idx, lengths) in (1..=6).flat_map(compositions).enumerate() {
        let sh = SemistableShape::with_lengths(PRIME, &lengths).unwrap();
        for trial in 0..100u64 {
            let p = sample(4, (idx as u64) << 16 | trial, &sh);
            let k = jacobian_kernel_dim(&p).map_err(|e| e.to_string())?;
            ensure(k == lengths.len() - 1, || format!("{lengths:?}: kernel {k} on {:?}", p.matrix()))?;
            if trial < 2 && sh.n() <= 4 {
                let d = jacobian_kernel_dim_dual(&p).map_err(|e| e.to_string())?;
                ensure(d == k, || format!("{lengths:?}: dual-number kernel {d}, analytic {k}"))?;
            }
            count += 1;
        }
    }
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("kernel dim s-1 on {count} parameters, all shapes n <= 6, in {t:.1}s"))
}

struct FernSweep {
    fern_failures: Vec<String>,
    borel: BTreeMap<(usize, Vec<usize>), BTreeSet<usize>>,
    chain_failures: Vec<String>,
    runs: usize,
}

fn fern_sweep() -> FernSweep {
    let mut out = FernSweep { fern_failures: vec![], borel: BTreeMap::new(), chain_failures: vec![], runs: 0 };
    for (idx, lengths) in (1..=5).flat_map(compositions).enumerate() {
        let sh = SemistableShape::with_lengths(PRIME, &lengths).unwrap();
        for trial in 0..20u64 {
            let p = sample(5, (idx as u64) << 16 | trial, &sh);
            let r = liealg::fern_report(&p).unwrap();
            if !r.fern_equal {
                out.fern_failures.push(format!("{lengths:?} {:?}", p.matrix()));
            }
            out.borel.entry((sh.n(), lengths.clone())).or_default().insert(r.borel_sum_dim);
            match liealg::hom_fil_chain(&p) {
                Ok(h) if h.flat <= h.sharp && h.sharp <= h.diamond && h.diamond <= h.fil => {}
                Ok(h) => out.chain_failures.push(format!("{lengths:?}: {h:?}")),
                Err(e) => out.chain_failures.push(format!("{lengths:?}: {e}")),
            }
            out.runs += 1;
        }
    }
    out
}

fn c5_fern(sw: &FernSweep) -> Outcome {
    ensure(sw.fern_failures.is_empty(), || format!("{} failures, first {}", sw.fern_failures.len(), sw.fern_failures[0]))?;
    Ok(format!("parabolic sum equals Ad_g(b) on {} parameters, every S0, n <= 5", sw.runs))
}

/// `A ∩ B` as `(A^⊥ + B^⊥)^⊥`.
fn meet_by_perp(a: &MatSubspace, b: &MatSubspace) -> MatSubspace {
    a.perp().join(&b.perp()).perp()
}

fn c6_dimensions(sw: &FernSweep) -> Outcome {
    ensure(sw.chain_failures.is_empty(), || format!("Hom chain: {}", sw.chain_failures[0]))?;
    // independent recomputation of the Borel sum for n <= 3
    for lengths in (2..=3).flat_map(compositions) {
        let sh = SemistableShape::with_lengths(PRIME, &lengths).unwrap();
        let p = sample(6, lengths.len() as u64, &sh);
        let n = sh.n();
        let target = liealg::borel(n).ad(&p.flag()).unwrap();
        let sum = p
            .reps()
            .iter()
            .fold(MatSubspace::zero(n), |acc, u| acc.join(&meet_by_perp(&liealg::borel(n).ad_perm(u), &target)));
        let fast = liealg::fern_report(&p).unwrap().borel_sum_dim;
        ensure(sum.dim() == fast, || format!("{lengths:?}: Borel sum {} by annihilators, {fast} by the sweep", sum.dim()))?;
    }
    let mut bad = Vec::new();
    for ((n, lengths), dims) in &sw.borel {
        let want = n * (n + 1) / 2;
        if dims.iter().any(|&d| d != want) {
            bad.push(format!("{lengths:?}: {dims:?} vs {want}"));
        }
    }
    ensure(bad.is_empty(), || format!("Hom chain ok; Borel sum is not n(n+1)/2 on {} of {} shapes, e.g. {}", bad.len(), sw.borel.len(), bad[0]))?;
    Ok("Borel sum has dim n(n+1)/2; Hom chain weakly increasing".into())
}

fn c7_formulas() -> Outcome {
    let mut shapes = 0;
    let mut reps_seen = 0;
    for lengths in (1..=6).flat_map(compositions) {
        let s = lengths.len();
        for mask in 0..1u64 << (s - 1) {
            let links: BTreeSet<usize> = (1..s).filter(|&b| mask >> (b - 1) & 1 == 1).collect();
            let sh = SemistableShape::with_links(PRIME, &lengths, &links).unwrap();
            let (n, s0, i0) = (sh.n() as i64, sh.s0(), sh.i0());
            let extra = i0.difference(&s0).count() as i64;
            ensure(weyl::r_plus(&Perm::identity(sh.n()), &i0).len() == i0.len(), || format!("|R+_id| on {lengths:?} {links:?}"))?;
            ensure(weyl::r_plus(&weyl::w0_s0(&lengths), &i0).len() == s0.len(), || format!("|R+_w0| on {lengths:?} {links:?}"))?;
            let strict_upper = (0..n).map(|i| n - 1 - i).sum::<i64>();
            for u in weyl::enumerate_min_coset_reps(sh.n(), &s0).reps {
                let d = deformation_dims(&sh, &u);
                let checks = [
                    ("ext1_u", d.get("ext1_u"), 1 + liealg::borel(sh.n()).dim() as i64),
                    ("ext1_g", d.get("ext1_g"), 1 + strict_upper + extra),
                    ("ext1_0", d.get("ext1_0"), 1 + strict_upper + extra - s as i64),
                    ("hom_u", d.get("hom_u"), 2 * n - weyl::r_plus(&u, &i0).len() as i64),
                ];
                for (name, got, want) in checks {
                    ensure(got == Some(want), || format!("{name} on {lengths:?} {links:?} at {u}: {got:?} vs {want}"))?;
                }
                reps_seen += 1;
            }
            if n >= 2 {
                let r = rep_side_dims(&sh).unwrap();
                let proper = (1..(1u64 << n) - 1).count() as i64;
                ensure(r.get("lalg_ext") == Some(n + 1), || "lalg_ext".into())?;
                ensure(r.get("sharp_u_ext") == Some(2 * n), || "sharp_u_ext".into())?;
                ensure(r.get("sharp_ext") == Some(n + 1 + proper), || "sharp_ext".into())?;
            }
            shapes += 1;
        }
    }
    Ok(format!("{shapes} shapes, {reps_seen} refinements, n <= 6"))
}

fn c8_weyl() -> Outcome {
    let mut cases = 0;
    for lengths in (1..=7).flat_map(compositions) {
        let n = lengths.iter().sum();
        let s0 = weyl::set_of_blocks(&lengths);
        let fast = weyl::enumerate_min_coset_reps(n, &s0).reps;
        let brute = weyl::min_coset_reps_brute(n, &s0);
        let fact = |k: usize| (1..=k as u128).product::<u128>();
        let closed = fact(n) / lengths.iter().map(|&l| fact(l)).product::<u128>();
        let a: BTreeSet<Vec<usize>> = fast.iter().map(|u| u.one_line()).collect();
        let b: BTreeSet<Vec<usize>> = brute.iter().map(|u| u.one_line()).collect();
        ensure(a == b && fast.len() as u128 == closed, || format!("{lengths:?}: {} fast, {} brute, {closed} closed", fast.len(), brute.len()))?;
        cases += 1;
    }
    let w3: Vec<Perm> = weyl::enumerate_min_coset_reps(3, &[1].into_iter().collect()).reps;
    let s1 = Perm::s(3, 1);
    let s2 = Perm::s(3, 2);
    let want = [Perm::identity(3), s2.clone(), s2.compose(&s1)];
    let got: BTreeSet<Vec<usize>> = w3.iter().map(|u| u.one_line()).collect();
    ensure(got == want.iter().map(|u| u.one_line()).collect(), || format!("W_3^{{1}} = {w3:?}"))?;
    Ok(format!("{cases} choices of S0 with n <= 7; W_3^{{1}} = {{1, s2, s2 s1}}"))
}

fn labeled_compositions(k: usize) -> u128 {
    // singletons carry two labels, longer intervals one
    let mut c = vec![1u128; k + 1];
    for i in 1..=k {
        c[i] = 2 * c[i - 1] + (2..=i).map(|m| c[i - m]).sum::<u128>();
    }
    let mut brute = 0u128;
    for cuts in 0..1u64 << k.saturating_sub(1) {
        let mut len = 0;
        let mut w = 1u128;
        for pos in 0..k {
            len += 1;
            if pos + 1 == k || cuts >> pos & 1 == 1 {
                w *= if len == 1 { 2 } else { 1 };
                len = 0;
            }
        }
        brute += w;
    }
    assert_eq!(c[k], brute);
    brute
}

fn subsets(of: &RootSet) -> Vec<RootSet> {
    let v: Vec<usize> = of.iter().copied().collect();
    (0..1u64 << v.len()).map(|m| v.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).map(|(_, &x)| x).collect()).collect()
}

fn run_lengths(s: &RootSet) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut prev: Option<usize> = None;
    for &x in s {
        match prev {
            Some(p) if p + 1 == x => *out.last_mut().unwrap() += 1,
            _ => out.push(1),
        }
        prev = Some(x);
    }
    out
}

fn c9_extcomb() -> Outcome {
    let f: Vec<u128> = (1..=5).map(labeled_compositions).collect();
    ensure(f == [2, 5, 13, 34, 89], || format!("brute {f:?}"))?;
    for k in 1..=5 {
        let st = LeviStructure::full(k);
        let b = extcomb::basis(&(1..=k).collect(), &RootSet::new(), &st).unwrap();
        ensure(b.len() as u128 == f[k - 1] && extcomb::f(k) == f[k - 1], || format!("f({k})"))?;
    }
    let mut mult = 0;
    for j in subsets(&(1..=5).collect()) {
        let st = LeviStructure::new(5, j.clone(), vec![0; 6]).unwrap();
        for i1 in subsets(&j) {
            for i2 in subsets(&i1) {
                let diff: RootSet = i1.difference(&i2).copied().collect();
                let want: u128 = run_lengths(&diff).into_iter().map(labeled_compositions).product();
                let got = extcomb::basis(&i1, &i2, &st).unwrap().len() as u128;
                ensure(got == want && extcomb::dim_ext(&i1, &i2, &st).unwrap() == want, || format!("{j:?} {i1:?} {i2:?}"))?;
                mult += 1;
            }
        }
    }
    let mut cups = 0;
    for j in subsets(&(1..=4).collect()) {
        let st = LeviStructure::new(4, j.clone(), vec![0; 5]).unwrap();
        for i1 in subsets(&j) {
            for i2 in subsets(&i1) {
                for i3 in subsets(&i2) {
                    let target: BTreeSet<ExtElement> = extcomb::basis(&i1, &i3, &st).unwrap().into_iter().collect();
                    let xs = extcomb::basis(&i1, &i2, &st).unwrap();
                    let ys = extcomb::basis(&i2, &i3, &st).unwrap();
                    let mut image = BTreeSet::new();
                    for x in &xs {
                        for y in &ys {
                            let c = extcomb::cup(x, y);
                            ensure(target.contains(&c), || format!("{x} ∪ {y} outside the basis"))?;
                            image.insert(c);
                        }
                    }
                    ensure(image.len() == xs.len() * ys.len(), || format!("cup not injective on {i1:?} {i2:?} {i3:?}"))?;
                    cups += 1;
                }
            }
        }
    }
    for trial in 0..100u64 {
        let d = 1 + (trial % 5) as usize;
        let mask = (trial / 5) % ((1 << d) - 1) + 1;
        let j: RootSet = (1..=d).filter(|&x| mask >> (x - 1) & 1 == 1).collect();
        let st = LeviStructure::new(d, j, vec![0; d + 1]).unwrap();
        let roots = st.positive_roots();
        let vals = rng::random_torus(&mut rng::trial_rng(9, trial), roots.len(), 50);
        let ls: BTreeMap<(usize, usize), Scalar> = roots.into_iter().zip(vals).collect();
        let h = extcomb::hyperplane_from_ls(&ls, &st).map_err(|e| e.to_string())?;
        let back = extcomb::ls_from_hyperplane(&h, &st).map_err(|e| e.to_string())?;
        ensure(back == ls, || format!("trial {trial}: {ls:?} came back as {back:?}"))?;
    }
    Ok(format!("f(1..5) = 2,5,13,34,89; {mult} products; {cups} cup triples; 100 coordinate round trips"))
}

fn c10_gl3() -> Outcome {
    let (l01, l02) = (q(7) / q(3), q(-5));
    let sh = SemistableShape::with_lengths(PRIME, &[2, 1]).unwrap();
    let l = Matrix::from_rows(vec![vec![q(1), l01.clone(), l02.clone()], vec![q(0), q(1), q(1)], vec![q(0), q(0), q(1)]]);
    let p = HodgeParameter::new(sh, l).unwrap();
    ensure(p.check_non_critical().is_ok() && p.is_normalized(), || "sample is critical".into())?;
    let steinberg = |x: &Scalar| Matrix::from_rows(vec![vec![q(1), x.clone()], vec![q(0), q(1)]]);
    let at_id = p.p_ref_u(&Perm::identity(3)).unwrap();
    ensure(at_id.blocks[0] == steinberg(&l01), || format!("D1 block {:?}", at_id.blocks[0]))?;
    let c1 = Perm::s(3, 2).compose(&Perm::s(3, 1));
    let at_c1 = p.p_ref_u(&c1).unwrap();
    ensure(at_c1.blocks[1] == steinberg(&l02), || format!("C1 block {:?}", at_c1.blocks[1]))?;
    let rec = reconstruct_traced(&forward_extended(&p).unwrap()).unwrap();
    ensure(rec.param == p, || "D1 and C1 do not determine the parameter".into())?;
    Ok("D1 block carries L01, C1 block at s2 s1 carries L02, together they fix the parameter".into())
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut run = |name: &'static str, f: &dyn Fn() -> Outcome| {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        println!("{} {name}: {}", if r.is_ok() { "PASS" } else { "FAIL" }, r.as_ref().unwrap_or_else(|e| e));
        results.push((name, r));
    };
    run("1 two-block round trip", &c1_two_blocks);
    run("2 crystalline round trip", &c2_crystalline);
    run("3 general round trip", &c3_general);
    run("4 infinitesimal injectivity", &c4_jacobian);
    let sweep = fern_sweep();
    run("5 infinite fern", &|| c5_fern(&sweep));
    run("6 dimension identities", &|| c6_dimensions(&sweep));
    run("7 formula answer key", &c7_formulas);
    run("8 Weyl combinatorics", &c8_weyl);
    run("9 Ext combinatorics", &c9_extcomb);
    run("10 GL3 anchor", &c10_gl3);
    let failed = results.iter().filter(|(_, r)| r.is_err()).count();
    println!("\nacceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
