#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toyqft::spectral::{eigh, SpectralDecomposition, DEFAULT_GROUP_TOL};
use toyqft::{grouped_roster, Complex64, FockSpace, OperatorMatrix, Statistics};

/// Seeds for the coefficient draws every spectral claim is checked against.
pub const SEEDS: [u64; 3] = [0x5eed_0001, 0x5eed_0002, 0x5eed_0003];

pub const SPECTRUM_REL_TOL: f64 = 1e-8;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `count` complex coefficients with moduli in [0.3, 1.5] whose moduli are
/// pairwise at least 0.1 apart, so no accidental degeneracies appear.
pub fn generic_coefficients(seed: u64, count: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Complex64> = Vec::with_capacity(count);
    while out.len() < count {
        let z = c(rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2));
        let m = z.norm();
        if !(0.3..=1.5).contains(&m) {
            continue;
        }
        if out.iter().any(|w| (w.norm() - m).abs() < 0.1) {
            continue;
        }
        out.push(z);
    }
    out
}

pub fn space(groups: &[(Statistics, usize, &str)], cutoff: usize) -> FockSpace {
    FockSpace::build(grouped_roster(groups), cutoff).expect("valid roster")
}

pub fn fermions(n: usize, s: usize) -> FockSpace {
    space(&[(Statistics::Fermion, n, "p")], s)
}

pub fn bosons(n: usize, s: usize) -> FockSpace {
    space(&[(Statistics::Boson, n, "q")], s)
}

pub fn decompose(m: &OperatorMatrix) -> SpectralDecomposition {
    eigh(m, DEFAULT_GROUP_TOL).expect("Hermitian operator")
}

/// Compares grouped eigenvalues against `(value, multiplicity)` claims.
/// Values must agree within `rel_tol * max(|claimed|, largest |claimed|)`;
/// multiplicities must agree exactly.
pub fn compare_spectrum(
    decomp: &SpectralDecomposition,
    claimed: &[(f64, usize)],
    rel_tol: f64,
) -> Result<(), String> {
    let mut want: Vec<(f64, usize)> = claimed.to_vec();
    want.sort_by(|a, b| a.0.total_cmp(&b.0));
    let scale = want
        .iter()
        .map(|w| w.0.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    // Claims that coincide numerically describe one eigenspace.
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for (v, m) in want {
        match merged.last_mut() {
            Some(last) if (last.0 - v).abs() <= rel_tol * scale => last.1 += m,
            _ => merged.push((v, m)),
        }
    }
    let got: Vec<(f64, usize)> = decomp
        .groups()
        .iter()
        .map(|g| (g.value, g.multiplicity))
        .collect();
    let render = |xs: &[(f64, usize)]| {
        xs.iter()
            .map(|(v, m)| format!("{v:.10}x{m}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    if got.len() != merged.len() {
        return Err(format!(
            "expected {} distinct eigenvalues [{}], found {} [{}]",
            merged.len(),
            render(&merged),
            got.len(),
            render(&got)
        ));
    }
    for ((gv, gm), (wv, wm)) in got.iter().zip(&merged) {
        let tol = rel_tol * wv.abs().max(scale);
        if (gv - wv).abs() > tol || gm != wm {
            return Err(format!(
                "expected [{}], found [{}]",
                render(&merged),
                render(&got)
            ));
        }
    }
    Ok(())
}

/// `||M v - lambda v||_2 / (||M||_2 ||v||_2)` with `||M||_2` taken from the
/// spectrum of the Hermitian `M`.
pub fn relative_residual(m: &OperatorMatrix, v: &[Complex64], lambda: f64) -> f64 {
    let mv = m.apply(v);
    let r: f64 = mv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - b * lambda).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mn = decompose(m).spectral_radius();
    r / (mn * vn)
}

/// Rayleigh quotient `v* M v / v* v` (real part).
pub fn rayleigh(m: &OperatorMatrix, v: &[Complex64]) -> f64 {
    let mv = m.apply(v);
    let num: Complex64 = v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    num.re / den
}

/// Embeds `(raw mode sequence, coefficient)` pairs as a vector of `space`.
pub fn vector_from_kets(space: &FockSpace, kets: &[(&[usize], Complex64)]) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); space.dimension()];
    for (raw, coeff) in kets {
        let (i, sign) = space
            .locate(raw)
            .expect("known modes")
            .expect("non-vanishing ket");
        v[i] += coeff * f64::from(sign);
    }
    v
}

/// Collects sub-check outcomes for one criterion and prints one summary line.
pub struct Criterion {
    name: &'static str,
    failures: Vec<String>,
    checks: usize,
}

impl Criterion {
    pub fn new(name: &'static str) -> Self {
        Self {
            name,
            failures: Vec::new(),
            checks: 0,
        }
    }

    pub fn check(&mut self, label: impl AsRef<str>, outcome: Result<(), String>) {
        self.checks += 1;
        match outcome {
            Ok(()) => println!("    ok   {}", label.as_ref()),
            Err(e) => {
                println!("    FAIL {}: {e}", label.as_ref());
                self.failures.push(format!("{}: {e}", label.as_ref()));
            }
        }
    }

    pub fn check_bound(&mut self, label: impl AsRef<str>, value: f64, bound: f64) {
        let outcome = if value <= bound {
            Ok(())
        } else {
            Err(format!("{value:.3e} exceeds {bound:.1e}"))
        };
        self.check(label, outcome);
    }

    pub fn finish(self) {
        let status = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "[{status}] {} ({} checks, {} failed)",
            self.name,
            self.checks,
            self.failures.len()
        );
        assert!(
            self.failures.is_empty(),
            "{} failed:\n{}",
            self.name,
            self.failures.join("\n")
        );
    }
}
