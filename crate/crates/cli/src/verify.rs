use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toyqft::{
    ac_operator, annihilator, anticommutator, commutator, creator, free_field, Complex64,
    FieldSpec, FockSpace, OperatorMatrix, Result,
};

use crate::report::{IdentityCheck, VerifyReport};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_SEED: u64 = 0x746f_7971;

/// Largest deviation of `m` from `expected` over the columns `cols` selects.
fn column_defect(
    m: &OperatorMatrix,
    expected: impl Fn(usize, usize) -> Complex64,
    cols: impl Fn(usize) -> bool,
) -> f64 {
    let n = m.dim();
    let mut worst = 0.0f64;
    for col in (0..n).filter(|&c| cols(c)) {
        for row in 0..n {
            worst = worst.max((m.get(row, col) - expected(row, col)).norm());
        }
    }
    worst
}

struct Checks {
    tol: f64,
    out: Vec<IdentityCheck>,
}

impl Checks {
    fn push(&mut self, identity: &str, violations: impl IntoIterator<Item = f64>) {
        let mut any = false;
        let mut worst = 0.0f64;
        for v in violations {
            any = true;
            worst = worst.max(v);
        }
        if any {
            self.out.push(IdentityCheck {
                identity: identity.to_string(),
                max_violation: worst,
                passed: worst <= self.tol,
            });
        }
    }
}

/// Checks the ladder algebra of `space`: (anti)commutation relations below
/// the cutoff, the diagonal boundary rules, exact adjointness, and two
/// identities on operators with random coefficients drawn from `seed`.
pub fn verify_algebra(space: &FockSpace, tol: f64, seed: u64) -> Result<VerifyReport> {
    let n = space.modes().len();
    let s = space.cutoff();
    let a: Vec<OperatorMatrix> = (0..n)
        .map(|j| annihilator(space, j))
        .collect::<Result<_>>()?;
    let ad: Vec<OperatorMatrix> = (0..n).map(|j| creator(space, j)).collect::<Result<_>>()?;
    let total = |col: usize| space.basis()[col].total();
    let below = |col: usize| total(col) < s;
    let on_boundary = |col: usize| total(col) == s;
    let delta = |row: usize, col: usize, on: bool| {
        if on && row == col {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let zero = |_: usize, _: usize| Complex64::new(0.0, 0.0);

    let modes = space.modes();
    let same_fermions = |j: usize, k: usize| {
        modes[j].is_fermion() && modes[k].is_fermion() && modes[j].species == modes[k].species
    };
    let bosons = |j: usize, k: usize| !modes[j].is_fermion() && !modes[k].is_fermion();
    let cross = |j: usize, k: usize| j != k && !same_fermions(j, k) && !bosons(j, k);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..n).map(move |k| (j, k))).collect();

    let mut checks = Checks {
        tol,
        out: Vec::new(),
    };
    let fermion_pairs: Vec<_> = pairs
        .iter()
        .copied()
        .filter(|&(j, k)| same_fermions(j, k))
        .collect();
    let boson_pairs: Vec<_> = pairs
        .iter()
        .copied()
        .filter(|&(j, k)| bosons(j, k))
        .collect();
    let cross_pairs: Vec<_> = pairs
        .iter()
        .copied()
        .filter(|&(j, k)| cross(j, k))
        .collect();

    let mut v = Vec::new();
    for &(j, k) in &fermion_pairs {
        v.push(anticommutator(&a[j], &a[k])?.max_abs());
    }
    checks.push("CAR {a_j, a_k} = 0", v);
    let mut v = Vec::new();
    for &(j, k) in &fermion_pairs {
        v.push(anticommutator(&ad[j], &ad[k])?.max_abs());
    }
    checks.push("CAR {a_j*, a_k*} = 0", v);
    let mut v = Vec::new();
    for &(j, k) in &fermion_pairs {
        let m = anticommutator(&a[j], &ad[k])?;
        v.push(column_defect(&m, |r, c| delta(r, c, j == k), below));
    }
    checks.push("CAR {a_j, a_k*} = delta_jk below the cutoff", v);
    let mut v = Vec::new();
    for j in (0..n).filter(|&j| modes[j].is_fermion()) {
        let m = anticommutator(&a[j], &ad[j])?;
        let n_j = |c: usize| f64::from(space.basis()[c].count(j));
        v.push(column_defect(
            &m,
            |r, c| delta(r, c, true) * n_j(c),
            on_boundary,
        ));
    }
    checks.push("fermion boundary rule {a_j, a_j*} psi = N_j psi", v);

    let mut v = Vec::new();
    for &(j, k) in &boson_pairs {
        v.push(commutator(&a[j], &a[k])?.max_abs());
        v.push(commutator(&ad[j], &ad[k])?.max_abs());
    }
    checks.push("CCR [a_j, a_k] = [a_j*, a_k*] = 0", v);
    let mut v = Vec::new();
    for &(j, k) in &boson_pairs {
        let m = commutator(&a[j], &ad[k])?;
        v.push(column_defect(&m, |r, c| delta(r, c, j == k), below));
    }
    checks.push("CCR [a_j, a_k*] = delta_jk below the cutoff", v);
    let mut v = Vec::new();
    for j in (0..n).filter(|&j| !modes[j].is_fermion()) {
        let m = commutator(&a[j], &ad[j])?;
        let n_j = |c: usize| f64::from(space.basis()[c].count(j));
        v.push(column_defect(
            &m,
            |r, c| delta(r, c, true) * -n_j(c),
            on_boundary,
        ));
    }
    checks.push("boson boundary rule [a_j, a_j*] psi = -N_j psi", v);

    let mut v = Vec::new();
    for &(j, k) in &cross_pairs {
        v.push(commutator(&a[j], &a[k])?.max_abs());
        v.push(column_defect(&commutator(&a[j], &ad[k])?, zero, below));
    }
    checks.push("distinct species commute below the cutoff", v);

    let mut v = Vec::new();
    for j in 0..n {
        v.push(ad[j].max_abs_diff(&a[j].adjoint())?);
    }
    checks.push("a_j* = adjoint(a_j)", v);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let coeffs: Vec<Complex64> = (0..n).map(|_| draw()).collect();
    let mut v = Vec::new();
    for j in (0..n).filter(|&j| modes[j].is_fermion()) {
        let eta = ac_operator(space, j, coeffs[j])?;
        let sq = eta.compose(&eta)?;
        let w = coeffs[j].norm_sqr();
        v.push(column_defect(&sq, |r, c| delta(r, c, true) * w, below));
    }
    checks.push("random fermion eta_j^2 = |alpha_j|^2 below the cutoff", v);
    let phi = free_field(space, &FieldSpec::new(coeffs.iter().copied().enumerate()))?;
    checks.push("random free field is Hermitian", [phi.hermiticity_defect()]);

    let passed = checks.out.iter().all(|c| c.passed);
    Ok(VerifyReport {
        kind: "verify_algebra",
        dimension: space.dimension(),
        seed,
        tolerance: tol,
        passed,
        checks: checks.out,
    })
}
