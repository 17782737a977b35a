//! The property suite behind `twistorctl selftest` and the acceptance tests.
//!
//! Every check draws its inputs from fixed seeds, so a run is reproducible.
//! [`Scale::full`] is the acceptance scale; [`Scale::quick`] keeps the same
//! checks and thresholds with fewer samples.

use std::time::Instant;

use nalgebra::{Complex, DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;
use twistor_core::charts::{generic_point, symplectic_fixture_curvature, ChartMetric, Fixture, SymplecticPointFixture};
use twistor_core::curvature::{
    build_e_of_r, decompose_pseudo, endomorphism_of, reflect_orientation, ricci, sd_asd_split, CurvatureSpace,
    CurvatureTensor,
};
use twistor_core::linalg::{seeded_rng, uniform_matrix, uniform_vector};
use twistor_core::spaces::{conjugate_j, random_group_element, standard_j0, BilinearStructure, FiberSampler};
use twistor_core::twistor::{
    four_i_component, integrability_verdict, j_action_spectrum, nijenhuis_span, omega1, omega2, projector_pj, psi_j,
    r_of_s, random_anti_invariant, rho_from_ricci, ricci_type_vertical_image, spectrum_distance,
    two_form_nondegenerate, type11_check, vertical_nijenhuis, SamplingConfig, Sign,
};
use twistor_core::{Error, Result, Tolerances};

use crate::report::Real;

/// Sample counts of a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scale {
    /// `(S, j)` pairs for each of the two Weyl identities.
    pub weyl_pairs: usize,
    /// Group elements for projector equivariance.
    pub group_elements: usize,
    /// Complex structures per kind and dimension for the spectrum.
    pub spectrum_samples: usize,
    /// Largest dimension in the spectrum check.
    pub spectrum_max_dim: usize,
    /// Fibre samples for fixture verdicts.
    pub fiber_samples: usize,
    /// Random tensors for the obstruction and `J-` checks.
    pub tensors: usize,
}

impl Scale {
    pub fn full() -> Self {
        Self {
            weyl_pairs: 200,
            group_elements: 50,
            spectrum_samples: 50,
            spectrum_max_dim: 8,
            fiber_samples: 64,
            tensors: 100,
        }
    }

    pub fn quick() -> Self {
        Self {
            weyl_pairs: 24,
            group_elements: 5,
            spectrum_samples: 3,
            spectrum_max_dim: 6,
            fiber_samples: 12,
            tensors: 12,
        }
    }
}

/// Perturbation applied to the constant `8(n+1)` of the first check when the
/// mutation hook is active. A correct suite must then fail.
pub const MUTATION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Measured quantities against their limits.
    pub detail: String,
    pub seconds: Real,
}

type Check = fn(&Scale, bool) -> Result<(bool, String)>;

const CHECKS: [(u32, &str, Check, Option<f64>); 12] = [
    (1, "pseudo_weyl_omega2_identity", weyl_identity, Some(30.0)),
    (2, "symplectic_weyl_omega2_identity", symplectic_weyl_identity, Some(30.0)),
    (3, "anti_invariant_projector", projector_properties, None),
    (4, "j_action_spectrum", spectrum, None),
    (5, "round_sphere_fd", round_sphere, Some(10.0)),
    (6, "product_spheres_fd", product_spheres, None),
    (7, "fubini_study_orientation", fubini_study, None),
    (8, "symplectic_type11", symplectic_type11, None),
    (9, "obstruction_biconditional", obstruction_biconditional, None),
    (10, "jminus_horizontal_containment", jminus_containment, None),
    (11, "dual_path_equality", dual_paths, None),
    (12, "determinism", determinism, None),
];

/// Names of all checks in order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.1).collect()
}

/// Runs check `id` (1-based). `mutate` activates the mutation hook.
pub fn run_check(id: u32, scale: &Scale, mutate: bool) -> Outcome {
    let (id, name, check, time_limit) = CHECKS[(id - 1) as usize];
    let start = Instant::now();
    let result = check(scale, mutate);
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = time_limit {
        detail.push_str(&format!("; runtime {seconds:.2} s (limit {limit} s)"));
        passed &= seconds <= limit;
    }
    Outcome { id, name, passed, detail, seconds: Real(seconds) }
}

/// Runs every check in order.
pub fn run_all(scale: &Scale, mutate: bool) -> Vec<Outcome> {
    (1..=CHECKS.len() as u32).map(|id| run_check(id, scale, mutate)).collect()
}

fn seed(a: u64, b: usize) -> u64 {
    a.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ b as u64
}

fn pseudo(p: usize, q: usize) -> BilinearStructure {
    BilinearStructure::pseudo(p, q, false).expect("valid signature")
}

fn sampling(fiber_samples: usize, seed: u64) -> SamplingConfig {
    SamplingConfig { fiber_samples, seed, ..SamplingConfig::default() }
}

/// `|Omega_2(psi_j(S)) + 8(n+1) S(., j.)|` over signatures (4,0), (2,2),
/// (6,0), (4,2), (8,0), (4,4).
fn weyl_identity(scale: &Scale, mutate: bool) -> Result<(bool, String)> {
    let structures = [(2, 0), (1, 1), (3, 0), (2, 1), (4, 0), (2, 2)];
    let per = scale.weyl_pairs.div_ceil(structures.len());
    let factor = if mutate { 1.0 + MUTATION } else { 1.0 };
    let mut worst = 0.0_f64;
    for (k, &(p, q)) in structures.iter().enumerate() {
        let base = pseudo(p, q);
        let n = base.n() as f64;
        let sampler = FiberSampler::new(&base, seed(1, k));
        let residuals = (0..per)
            .into_par_iter()
            .map(|i| {
                let j = sampler.sample(i);
                let s = random_anti_invariant(&j, seed(11, k * 1000 + i));
                let o2 = omega2(&psi_j(&s, &j)?, &j)?;
                Ok((o2 + &s * j.matrix() * (8.0 * (n + 1.0) * factor)).amax())
            })
            .collect::<Result<Vec<f64>>>()?;
        worst = residuals.into_iter().fold(worst, f64::max);
    }
    let count = per * structures.len();
    Ok((worst <= 1e-9, format!("{count} pairs, max residual {worst:.3e} (limit 1e-9)")))
}

/// `|Omega_2(R(S, j)) + 8(n-1) S(., j.)|` for `n = 2, 3, 4`.
fn symplectic_weyl_identity(scale: &Scale, _mutate: bool) -> Result<(bool, String)> {
    let ns = [2, 3, 4];
    let per = scale.weyl_pairs.div_ceil(ns.len());
    let mut worst = 0.0_f64;
    for (k, &n) in ns.iter().enumerate() {
        let base = BilinearStructure::symplectic(n)?;
        let sampler = FiberSampler::new(&base, seed(2, k));
        let residuals = (0..per)
            .into_par_iter()
            .map(|i| {
                let j = sampler.sample(i);
                let s = random_anti_invariant(&j, seed(22, k * 1000 + i));
                let o2 = omega2(&r_of_s(&s, &j)?, &j)?;
                Ok((o2 + &s * j.matrix() * (8.0 * (n as f64 - 1.0))).amax())
            })
            .collect::<Result<Vec<f64>>>()?;
        worst = residuals.into_iter().fold(worst, f64::max);
    }
    let count = per * ns.len();
    Ok((worst <= 1e-9, format!("{count} pairs, max residual {worst:.3e} (limit 1e-9)")))
}

/// Idempotence and Ricci-flat image of `P_j` at the standard and at a
/// sampled complex structure; equivariance `P_{hj}(hR) = h P_j(R)` at the
/// standard one. Composing a sampled `j` with a further group element
/// inflates tensor entries to `1e3` and beyond, where an absolute `1e-8` is
/// below the rounding floor, so equivariance is measured from `j0`.
fn projector_properties(scale: &Scale, _mutate: bool) -> Result<(bool, String)> {
    let structures = [
        pseudo(2, 0),
        pseudo(1, 1),
        pseudo(2, 1),
        BilinearStructure::symplectic(2)?,
        BilinearStructure::symplectic(3)?,
    ];
    let tol = Tolerances::default();
    let (mut idem, mut flat, mut equi) = (0.0_f64, 0.0_f64, 0.0_f64);
    for (k, base) in structures.iter().enumerate() {
        let r = CurvatureSpace::new(base)?.random(seed(3, k));
        let j0 = standard_j0(base);
        for j in [j0.clone(), FiberSampler::new(base, seed(33, k)).sample(1)] {
            let p = projector_pj(&r, &j)?;
            idem = idem.max((projector_pj(&p, &j)?.tensor() - p.tensor()).max_abs());
            flat = flat.max(ricci(&p).amax());
        }
        let p = projector_pj(&r, &j0)?;
        let diffs = (0..scale.group_elements)
            .into_par_iter()
            .map(|g| {
                let h = random_group_element(base, seed(333, k * 1000 + g));
                let hj = conjugate_j(&h, &j0, &tol)?;
                let lhs = projector_pj(&r.act(&h)?, &hj)?;
                Ok((lhs.tensor() - p.act(&h)?.tensor()).max_abs())
            })
            .collect::<Result<Vec<f64>>>()?;
        equi = diffs.into_iter().fold(equi, f64::max);
    }
    let passed = idem <= 1e-9 && flat <= 1e-10 && equi <= 1e-8;
    Ok((
        passed,
        format!(
            "idempotence {idem:.3e} (limit 1e-9), Ricci of image {flat:.3e} (limit 1e-10), equivariance over {} group elements {equi:.3e} (limit 1e-8)",
            scale.group_elements
        ),
    ))
}

/// Eigenvalues of the `j`-action on curvature tensors lie in
/// `{0, +-2i, +-4i}`.
fn spectrum(scale: &Scale, _mutate: bool) -> Result<(bool, String)> {
    let mut worst = 0.0_f64;
    let mut cases = Vec::new();
    for d in (4..=scale.spectrum_max_dim).step_by(2) {
        let n = d / 2;
        let pseudo_options = [pseudo(n, 0), pseudo(n - 1, 1)];
        let groups: [(&str, Vec<BilinearStructure>); 2] =
            [("pseudo", pseudo_options.to_vec()), ("symplectic", vec![BilinearStructure::symplectic(n)?])];
        for (label, bases) in groups {
            let spaces = bases.iter().map(CurvatureSpace::new).collect::<Result<Vec<_>>>()?;
            let samplers: Vec<FiberSampler> =
                bases.iter().enumerate().map(|(k, b)| FiberSampler::new(b, seed(4, d * 10 + k))).collect();
            let distances = (0..scale.spectrum_samples)
                .into_par_iter()
                .map(|i| {
                    let k = i % spaces.len();
                    Ok(spectrum_distance(&j_action_spectrum(&spaces[k], &samplers[k].sample(i))?))
                })
                .collect::<Result<Vec<f64>>>()?;
            let local = distances.into_iter().fold(0.0, f64::max);
            cases.push(format!("{label} {d}: {local:.1e}"));
            worst = worst.max(local);
        }
    }
    Ok((
        worst <= 1e-8,
        format!(
            "{} structures per kind and dimension, max distance {worst:.3e} (limit 1e-8) [{}]",
            scale.spectrum_samples,
            cases.join(", ")
        ),
    ))
}

fn fd_curvature(fixture: Fixture, oriented: bool, point_seed: u64) -> Result<CurvatureTensor> {
    let chart = ChartMetric::new(fixture, 4)?;
    chart.curvature_at(&generic_point(4, point_seed), oriented, &Tolerances::default())
}

/// Unit 4-sphere through finite differences.
fn round_sphere(scale: &Scale, _mutate: bool) -> Result<(bool, String)> {
    let r = fd_curvature(Fixture::Sphere { radius: 1.0 }, true, 5)?;
    let tol = Tolerances::default();
    let dec = decompose_pseudo(&r)?;
    let scal_err = (dec.scal - 12.0).abs();
    let (e, c) = (dec.e_part.norm(), dec.c_part.norm());
    let sampler = FiberSampler::new(r.base(), seed(5, 0));
    let mut omega_err = 0.0_f64;
    let mut type11 = 0.0_f64;
    let mut nondegenerate = true;
    for j in sampler.samples(scale.fiber_samples) {
        let expected = r.base().g() * j.matrix() * 2.0;
        omega_err = omega_err.max((omega1(&r, &j)? - expected).amax());
        type11 = type11.max(type11_check(&r, &j)?);
        nondegenerate &= two_form_nondegenerate(&r, &j, &tol)?.nondegenerate;
    }
    let plus = integrability_verdict(&r, Sign::Plus, &sampling(scale.fiber_samples, 5))?;
    let mut min_rank = usize::MAX;
    for (i, j) in sampler.samples(8).into_iter().enumerate() {
        min_rank = min_rank.min(nijenhuis_span(&r, &j, Sign::Minus, 24, seed(55, i), &tol)?.rank);
    }
    let passed = scal_err <= 1e-5
        && e <= 1e-6
        && c <= 1e-6
        && omega_err <= 1e-5
        && nondegenerate
        && type11 <= 1e-6
        && plus.closed_form == Some(true)
        && plus.sampled
        && min_rank == 6;
    Ok((
        passed,
        format!(
            "|scal-12| {scal_err:.1e}, |E| {e:.1e}, |C| {c:.1e}, |Omega1-2g(.,j.)| {omega_err:.1e}, nondegenerate {nondegenerate}, \
             type11 {type11:.1e}, J+ closed {:?} sampled {}, J- span {min_rank}",
            plus.closed_form, plus.sampled
        ),
    ))
}

/// `S^2 x S^2`: Einstein, Weyl non-zero, `J+` not integrable.
fn product_spheres(scale: &Scale, _mutate: bool) -> Result<(bool, String)> {
    let r = fd_curvature(Fixture::ProductSpheres { r1: 1.0, r2: 1.0 }, false, 6)?;
    let dec = decompose_pseudo(&r)?;
    let (e, c, norm) = (dec.e_part.norm(), dec.c_part.norm(), r.norm());
    let plus = integrability_verdict(&r, Sign::Plus, &sampling(scale.fiber_samples, 6))?;
    let passed =
        e <= 1e-5 && c > 0.1 * norm && plus.closed_form == Some(false) && !plus.sampled && plus.worst_residual > 1e-3;
    Ok((
        passed,
        format!(
            "|E| {e:.1e}, |C|/|R| {:.3}, J+ closed {:?} sampled {}, max 4i norm {:.3e}",
            c / norm,
            plus.closed_form,
            plus.sampled,
            plus.worst_residual
        ),
    ))
}

/// Fubini-Study: self-dual Weyl tensor; `J+` integrable for the complex
/// orientation only.
fn fubini_study(scale: &Scale, _mutate: bool) -> Result<(bool, String)> {
    let r = fd_curvature(Fixture::FubiniStudyCp2 { scale: 1.0 }, true, 7)?;
    let c = decompose_pseudo(&r)?.c_part;
    let (_, minus) = sd_asd_split(&c, 1e-8)?;
    let ratio = minus.norm() / c.norm();
    let cfg = sampling(scale.fiber_samples, 7);
    let standard = integrability_verdict(&r, Sign::Plus, &cfg)?;
    let flipped = integrability_verdict(&reflect_orientation(&r)?, Sign::Plus, &cfg)?;
    let passed = ratio <= 1e-5
        && standard.closed_form == Some(true)
        && standard.sampled
        && flipped.closed_form == Some(false)
        && !flipped.sampled;
    Ok((
        passed,
        format!(
            "|C-|/|C| {ratio:.1e}, standard orientation J+ closed {:?} sampled {}, flipped closed {:?} sampled {} (max 4i norm {:.3e})",
            standard.closed_form, standard.sampled, flipped.closed_form, flipped.sampled, flipped.worst_residual
        ),
    ))
}

fn random_symmetric(d: usize, seed: u64) -> DMatrix<f64> {
    let m = uniform_matrix(&mut seeded_rng(seed), d, d);
    (&m + m.transpose()) * 0.5
}

/// Type (1,1) for Ricci type and its failure for Weyl admixtures.
fn symplectic_type11(scale: &Scale, _mutate: bool) -> Result<(bool, String)> {
    let mut ricci_worst = 0.0_f64;
    let mut mixed_min = f64::INFINITY;
    let mut fixtures = 0;
    for n in [2, 3] {
        for k in 0..3 {
            let r = random_symmetric(2 * n, seed(8, n * 10 + k));
            let pure = SymplecticPointFixture::new(n, r.clone())?;
            let mixed = SymplecticPointFixture::new(n, r)?.with_random_seeds(1 + k % 2, 1.0, seed(88, n * 10 + k));
            let sampler = FiberSampler::new(&pure.base, seed(888, n * 10 + k));
            let (e, m) = (symplectic_fixture_curvature(&pure)?, symplectic_fixture_curvature(&mixed)?);
            let mut mixed_worst = 0.0_f64;
            for j in sampler.samples(scale.fiber_samples) {
                ricci_worst = ricci_worst.max(type11_check(&e, &j)?);
                mixed_worst = mixed_worst.max(type11_check(&m, &j)?);
            }
            mixed_min = mixed_min.min(mixed_worst);
            fixtures += 1;
        }
    }
    let passed = ricci_worst <= 1e-9 && mixed_min > 1e-3;
    Ok((
        passed,
        format!(
            "{fixtures} fixtures x {} structures: Ricci type max residual {ricci_worst:.1e} (limit 1e-9), \
             mixtures smallest max residual {mixed_min:.3e} (must exceed 1e-3)",
            scale.fiber_samples
        ),
    ))
}

/// `max |4i part| <= 1e-8` exactly when `|C| <= 1e-8`, over random and
/// conformally flat tensors of signatures (6,0), (4,2), (8,0), (6,2).
fn obstruction_biconditional(scale: &Scale, _mutate: bool) -> Result<(bool, String)> {
    let bases = [pseudo(3, 0), pseudo(2, 1), pseudo(4, 0), pseudo(3, 1)];
    let spaces = bases.iter().map(CurvatureSpace::new).collect::<Result<Vec<_>>>()?;
    let rows = (0..scale.tensors)
        .into_par_iter()
        .map(|t| {
            let space = &spaces[t % bases.len()];
            let generic = space.random(seed(9, t));
            let c = decompose_pseudo(&generic)?.c_part;
            let r = if t % 2 == 0 { generic } else { generic.combine(1.0, &c, -1.0) };
            let c_norm = decompose_pseudo(&r)?.c_part.norm();
            let sampler = FiberSampler::new(space.base(), seed(99, t));
            let mut four = 0.0_f64;
            for j in sampler.samples(8) {
                four = four.max(four_i_component(&r, &j)?.1);
            }
            Ok((four, c_norm))
        })
        .collect::<Result<Vec<_>>>()?;
    let disagreements = rows.iter().filter(|(four, c)| (*four <= 1e-8) != (*c <= 1e-8)).count();
    let flat = rows.iter().filter(|(_, c)| *c <= 1e-8).count();
    let flat_max = rows.iter().filter(|(_, c)| *c <= 1e-8).map(|r| r.0).fold(0.0, f64::max);
    let generic_min = rows.iter().filter(|(_, c)| *c > 1e-8).map(|r| r.0).fold(f64::INFINITY, f64::min);
    let passed = disagreements == 0 && flat > 0 && flat < rows.len();
    Ok((
        passed,
        format!(
            "{} tensors ({flat} conformally flat), {disagreements} disagreements; max 4i norm when C = 0: {flat_max:.1e}, \
             min when C != 0: {generic_min:.3e}",
            rows.len()
        ),
    ))
}

/// The span of `N^{J-}` contains the horizontal space for every fixture and
/// for random tensors of both kinds.
fn jminus_containment(scale: &Scale, _mutate: bool) -> Result<(bool, String)> {
    let tol = Tolerances::default();
    let mut tensors: Vec<(String, CurvatureTensor)> = Vec::new();
    let fixtures = [
        Fixture::Flat,
        Fixture::Sphere { radius: 1.0 },
        Fixture::Hyperbolic { radius: 1.0 },
        Fixture::ProductSpheres { r1: 1.0, r2: 1.0 },
        Fixture::FubiniStudyCp2 { scale: 1.0 },
        Fixture::PseudoSphere22 { radius: 1.0 },
    ];
    for (k, f) in fixtures.into_iter().enumerate() {
        tensors.push((String::from(f.name()), fd_curvature(f, false, 10 + k as u64)?));
    }
    let r = random_symmetric(4, seed(10, 0));
    tensors.push((
        String::from("symplectic_ricci_type"),
        symplectic_fixture_curvature(&SymplecticPointFixture::new(2, r.clone())?)?,
    ));
    let mixed = SymplecticPointFixture::new(2, r)?.with_random_seeds(2, 1.0, seed(10, 1));
    tensors.push((String::from("symplectic_mixed"), symplectic_fixture_curvature(&mixed)?));
    let bases = [
        pseudo(2, 0),
        pseudo(1, 1),
        pseudo(3, 0),
        pseudo(2, 1),
        BilinearStructure::symplectic(2)?,
        BilinearStructure::symplectic(3)?,
    ];
    let spaces = bases.iter().map(CurvatureSpace::new).collect::<Result<Vec<_>>>()?;
    for t in 0..scale.tensors {
        tensors.push((format!("random {t}"), spaces[t % spaces.len()].random(seed(100, t))));
    }
    let results = tensors
        .par_iter()
        .enumerate()
        .map(|(t, (label, r))| {
            let sampler = FiberSampler::new(r.base(), seed(101, t));
            let tangent = r.dim() + twistor_core::spaces::vertical_dimension(r.base());
            let mut ok = true;
            for (i, j) in sampler.samples(3).into_iter().enumerate() {
                ok &= nijenhuis_span(r, &j, Sign::Minus, 2 * tangent, seed(1010, t * 10 + i), &tol)?
                    .contains_horizontal();
            }
            Ok((label.clone(), ok))
        })
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.0.as_str()).collect();
    Ok((
        failures.is_empty(),
        format!("{} tensors ({} fixtures), failures: {:?}", results.len(), fixtures.len() + 2, failures),
    ))
}

/// `(Id - ij) R((Id + ij)X, (Id + ij)Y) (Id + ij)` in complex arithmetic.
fn complex_four_i(r: &CurvatureTensor, j: &DMatrix<f64>, x: &DVector<f64>, y: &DVector<f64>) -> DMatrix<Complex<f64>> {
    let e = |a: &DVector<f64>, b: &DVector<f64>| endomorphism_of(r, a, b);
    let (jx, jy) = (j * x, j * y);
    // Complex-bilinear extension at (x + i jx, y + i jy).
    let re = e(x, y) - e(&jx, &jy);
    let im = e(x, &jy) + e(&jx, y);
    let rc = DMatrix::from_fn(j.nrows(), j.ncols(), |a, b| Complex::new(re[(a, b)], im[(a, b)]));
    let d = j.nrows();
    let id = DMatrix::<Complex<f64>>::identity(d, d);
    let ij = j.map(|v| Complex::new(0.0, v));
    (&id - &ij) * rc * (&id + &ij)
}

/// Real-polynomial `4i` projector against complex arithmetic, and the
/// closed-form vertical Nijenhuis image for Ricci type against the direct
/// formula.
fn dual_paths(_scale: &Scale, _mutate: bool) -> Result<(bool, String)> {
    let bases = [
        pseudo(2, 0),
        pseudo(1, 1),
        pseudo(2, 1),
        BilinearStructure::symplectic(2)?,
        BilinearStructure::symplectic(3)?,
    ];
    let mut rng = seeded_rng(seed(11, 0));
    let mut four_worst = 0.0_f64;
    for (k, base) in bases.iter().enumerate() {
        let r = CurvatureSpace::new(base)?.random(seed(11, k + 1));
        for j in FiberSampler::new(base, seed(111, k)).samples(4) {
            let p4 = four_i_component(&r, &j)?.0;
            for _ in 0..4 {
                let x = uniform_vector(&mut rng, base.dim());
                let y = uniform_vector(&mut rng, base.dim());
                // Each (Id +- ij) is twice a projector, so T is 16 times the
                // 4i part; the -4i part is its conjugate.
                let t = complex_four_i(&r, j.matrix(), &x, &y);
                let real = t.map(|z| z.re / 8.0);
                four_worst = four_worst.max((endomorphism_of(&p4, &x, &y) - real).amax());
            }
        }
    }
    let mut image_worst = 0.0_f64;
    for n in [2, 3] {
        let base = BilinearStructure::symplectic(n)?;
        let e = build_e_of_r(&random_symmetric(2 * n, seed(12, n)), &base)?;
        let rho = rho_from_ricci(&ricci(&e), base.g())?;
        for j in FiberSampler::new(&base, seed(121, n)).samples(4) {
            let x = uniform_vector(&mut rng, 2 * n);
            let y = uniform_vector(&mut rng, 2 * n);
            let closed = ricci_type_vertical_image(&rho, &j, &x, &y)?;
            let direct = vertical_nijenhuis(&e, &j, Sign::Minus, &x, &y)?;
            image_worst = image_worst.max((closed - direct).amax());
        }
    }
    let passed = four_worst <= 1e-9 && image_worst <= 1e-9;
    Ok((
        passed,
        format!("4i projector vs complex evaluation {four_worst:.3e}, Ricci-type Nijenhuis image {image_worst:.3e} (limits 1e-9)"),
    ))
}

/// Verdicts and spans recomputed on a fresh thread pool must match bit for
/// bit. The command-line report comparison lives in the acceptance tests.
fn determinism(scale: &Scale, _mutate: bool) -> Result<(bool, String)> {
    let base = pseudo(2, 1);
    let r = CurvatureSpace::new(&base)?.random(seed(12, 0));
    let cfg = sampling(scale.fiber_samples.min(16), 12);
    let run = |threads: usize| -> Result<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Degenerate(format!("thread pool: {e}")))?;
        pool.install(|| {
            let plus = integrability_verdict(&r, Sign::Plus, &cfg)?;
            let minus = integrability_verdict(&r, Sign::Minus, &cfg)?;
            Ok(format!(
                "{:?}|{:?}|{:e}|{:e}",
                plus.closed_form, minus.closed_form, plus.worst_residual, minus.worst_residual
            ))
        })
    };
    let runs = [run(1)?, run(4)?, run(1)?, run(4)?];
    let identical = runs.windows(2).all(|w| w[0] == w[1]);
    Ok((identical, format!("{} runs over 1 and 4 threads identical: {identical}", runs.len())))
}
