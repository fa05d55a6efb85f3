//! Acceptance criteria. Each test prints its sub-checks and one
//! `[PASS]`/`[FAIL]` summary line; run with `--nocapture` to see them.

mod common;

use std::time::Instant;

use common::*;
use toyqft::scatter::{hamiltonian_density, ScatterScenario};
use toyqft::spacetime::{
    hyperboloid, phase, space_volume, EnergyMomentum, LatticePoint, QuarterTurn,
};
use toyqft::spectral::reconstruct;
use toyqft::{
    ac_operator, annihilator, anticommutator, classify_eigenvectors, commutator, creator,
    free_field, interaction_field, self_interaction, Complex64, FieldSpec, FockSpace,
    OperatorMatrix, Parity, Statistics,
};

const ALGEBRA_TOL: f64 = 1e-12;

fn field(space: &FockSpace, modes: &[usize], coeffs: &[Complex64]) -> OperatorMatrix {
    let spec = FieldSpec::new(modes.iter().copied().zip(coeffs.iter().copied()));
    free_field(space, &spec).unwrap()
}

fn spectrum_check(m: &OperatorMatrix, claimed: &[(f64, usize)]) -> Result<(), String> {
    compare_spectrum(&decompose(m), claimed, SPECTRUM_REL_TOL)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn criterion_01_dimensions() {
    let mut cr = Criterion::new("criterion 1: dimensions");
    for s in 0..=6 {
        let d = fermions(s, s).dimension();
        let out = if d == 1 << s {
            Ok(())
        } else {
            Err(format!("got {d}"))
        };
        cr.check(format!("dim K^{s} = 2^{s}"), out);
    }
    let j23 = bosons(2, 3).dimension();
    cr.check(
        "dim J^(2,3) = 10",
        if j23 == 10 {
            Ok(())
        } else {
            Err(format!("got {j23}"))
        },
    );
    let l = space(
        &[(Statistics::Fermion, 2, "p"), (Statistics::Boson, 2, "q")],
        2,
    )
    .dimension();
    cr.check(
        "dim L^(2,2,2) = 13",
        if l == 13 {
            Ok(())
        } else {
            Err(format!("got {l}"))
        },
    );
    // Stars and bars: sum_k C(n + k - 1, k) for k <= s.
    for n in 1..=4 {
        for s in 0..=4 {
            let want: usize = (0..=s).map(|k| binomial(n + k - 1, k)).sum();
            let got = bosons(n, s).dimension();
            cr.check(
                format!("dim J^({n},{s}) = {want}"),
                if got == want {
                    Ok(())
                } else {
                    Err(format!("got {got}"))
                },
            );
        }
    }
    cr.finish();
}

#[test]
fn criterion_02_algebra() {
    let mut cr = Criterion::new("criterion 2: algebra identities");

    for s in 1..=6 {
        let sp = fermions(s, s);
        let id = OperatorMatrix::identity(&sp);
        let zero = OperatorMatrix::zeros(&sp);
        let a: Vec<_> = (0..s).map(|j| annihilator(&sp, j).unwrap()).collect();
        let ad: Vec<_> = (0..s).map(|j| creator(&sp, j).unwrap()).collect();
        let mut worst = 0.0f64;
        for j in 0..s {
            for k in 0..s {
                let target = if j == k { &id } else { &zero };
                let ac = anticommutator(&a[j], &ad[k]).unwrap();
                worst = worst.max(ac.max_abs_diff(target).unwrap());
                worst = worst.max(anticommutator(&a[j], &a[k]).unwrap().max_abs());
                worst = worst.max(anticommutator(&ad[j], &ad[k]).unwrap().max_abs());
            }
        }
        cr.check_bound(format!("CAR on K^{s}"), worst, ALGEBRA_TOL);
    }

    for n in 1..=4 {
        for s in 1..=6 {
            let sp = bosons(n, s);
            if sp.dimension() > 64 {
                continue;
            }
            let a: Vec<_> = (0..n).map(|j| annihilator(&sp, j).unwrap()).collect();
            let ad: Vec<_> = (0..n).map(|j| creator(&sp, j).unwrap()).collect();
            let mut worst = 0.0f64;
            for (col, state) in sp.basis().iter().enumerate() {
                let boundary = state.total() == s;
                let mut e = vec![c(0.0, 0.0); sp.dimension()];
                e[col] = c(1.0, 0.0);
                for j in 0..n {
                    for k in 0..n {
                        let aa = commutator(&a[j], &a[k]).unwrap().apply(&e);
                        worst = worst.max(aa.iter().map(|z| z.norm()).fold(0.0, f64::max));
                        let got = commutator(&a[j], &ad[k]).unwrap().apply(&e);
                        let want: Vec<Complex64> = if !boundary {
                            e.iter()
                                .map(|z| if j == k { *z } else { c(0.0, 0.0) })
                                .collect()
                        } else if j == k {
                            e.iter().map(|z| z * -f64::from(state.count(j))).collect()
                        } else {
                            continue;
                        };
                        let d = got
                            .iter()
                            .zip(&want)
                            .map(|(x, y)| (x - y).norm())
                            .fold(0.0, f64::max);
                        worst = worst.max(d);
                    }
                }
            }
            cr.check_bound(
                format!("CCR and boundary rule on J^({n},{s})"),
                worst,
                ALGEBRA_TOL,
            );
        }
    }

    let mixed = space(
        &[(Statistics::Fermion, 2, "p"), (Statistics::Boson, 2, "q")],
        3,
    );
    let spaces = [
        fermions(3, 3),
        fermions(4, 2),
        bosons(2, 3),
        bosons(3, 4),
        mixed,
    ];
    for sp in &spaces {
        let mut exact = true;
        for j in 0..sp.modes().len() {
            let a = annihilator(sp, j).unwrap().adjoint();
            let ad = creator(sp, j).unwrap();
            for r in 0..sp.dimension() {
                for col in 0..sp.dimension() {
                    exact &= a.get(r, col) == ad.get(r, col);
                }
            }
        }
        cr.check(
            format!(
                "creator == adjoint(annihilator) exactly, dim {}",
                sp.dimension()
            ),
            if exact {
                Ok(())
            } else {
                Err("entries differ".into())
            },
        );
    }
    cr.finish();
}

#[test]
fn criterion_03_single_ac_operator() {
    let mut cr = Criterion::new("criterion 3: eta(p1) on K^s");
    for &seed in &SEEDS {
        let alpha = generic_coefficients(seed, 1)[0];
        let w = alpha.norm();
        for s in 1..=5 {
            let sp = fermions(s, s);
            let eta = ac_operator(&sp, 0, alpha).unwrap();
            let half = 1usize << (s - 1);
            cr.check(
                format!("seed {seed:#x} s={s}: spectrum +-|a| x{half}"),
                spectrum_check(&eta, &[(-w, half), (w, half)]),
            );
            let sq = eta.compose(&eta).unwrap();
            cr.check_bound(
                format!("seed {seed:#x} s={s}: eta^2 = |a|^2 I"),
                sq.distance_from_scalar(c(w * w, 0.0)),
                ALGEBRA_TOL,
            );
            let mut worst = 0.0f64;
            for state in sp.basis().iter().filter(|st| st.count(0) == 0) {
                let rest = state.expanded();
                let mut with_p1 = vec![0usize];
                with_p1.extend(&rest);
                for sign in [1.0, -1.0] {
                    let v = vector_from_kets(
                        &sp,
                        &[(&rest, c(w, 0.0)), (&with_p1, alpha.conj() * sign)],
                    );
                    worst = worst.max(relative_residual(&eta, &v, sign * w));
                }
            }
            cr.check_bound(
                format!("seed {seed:#x} s={s}: eigenvector forms"),
                worst,
                1e-10,
            );
        }
    }
    cr.finish();
}

#[test]
fn criterion_04_k2_field() {
    let mut cr = Criterion::new("criterion 4: K^2 field");
    let sp = fermions(2, 2);
    for &seed in &SEEDS {
        let co = generic_coefficients(seed, 2);
        let w = (co[0].norm_sqr() + co[1].norm_sqr()).sqrt();
        let phi = field(&sp, &[0, 1], &co);
        cr.check(
            format!("seed {seed:#x}: +-sqrt(|a|^2+|b|^2) x2"),
            spectrum_check(&phi, &[(-w, 2), (w, 2)]),
        );
    }
    cr.finish();
}

#[test]
fn criterion_05_k3_fields() {
    let mut cr = Criterion::new("criterion 5: K^3 fields");
    let sp = fermions(3, 3);
    for &seed in &SEEDS {
        let co = generic_coefficients(seed, 3);
        let (a, b, g) = (co[0].norm(), co[1].norm(), co[2].norm());

        let two = field(&sp, &[0, 1], &co[..2]);
        let w = (a * a + b * b).sqrt();
        cr.check(
            format!("seed {seed:#x}: two-term field"),
            spectrum_check(
                &two,
                &[
                    (-w, 2),
                    (w, 2),
                    (a + b, 1),
                    (-(a + b), 1),
                    ((a - b).abs(), 1),
                    (-(a - b).abs(), 1),
                ],
            ),
        );

        let three = field(&sp, &[0, 1, 2], &co);
        let w2 = a * a + b * b + g * g;
        let cross = 2.0 * (b * b * (a * a + g * g)).sqrt();
        let hi = (w2 + cross).sqrt();
        let lo = (w2 - cross).sqrt();
        cr.check(
            format!("seed {seed:#x}: three-term field"),
            spectrum_check(
                &three,
                &[
                    (-w2.sqrt(), 2),
                    (w2.sqrt(), 2),
                    (hi, 1),
                    (-hi, 1),
                    (lo, 1),
                    (-lo, 1),
                ],
            ),
        );
    }
    cr.finish();
}

#[test]
fn criterion_06_boson_fields() {
    let mut cr = Criterion::new("criterion 6: J^(2,2) and J^(2,3) fields");
    let j22 = bosons(2, 2);
    let j23 = bosons(2, 3);
    for &seed in &SEEDS {
        let co = generic_coefficients(seed, 2);
        let w = (co[0].norm_sqr() + co[1].norm_sqr()).sqrt();
        let r3 = 3f64.sqrt() * w;
        cr.check(
            format!("seed {seed:#x}: J^(2,2)"),
            spectrum_check(
                &field(&j22, &[0, 1], &co),
                &[(0.0, 2), (w, 1), (-w, 1), (r3, 1), (-r3, 1)],
            ),
        );
        let up = (3.0 + 6f64.sqrt()).sqrt() * w;
        let dn = (3.0 - 6f64.sqrt()).sqrt() * w;
        cr.check(
            format!("seed {seed:#x}: J^(2,3)"),
            spectrum_check(
                &field(&j23, &[0, 1], &co),
                &[
                    (0.0, 2),
                    (w, 1),
                    (-w, 1),
                    (r3, 1),
                    (-r3, 1),
                    (up, 1),
                    (-up, 1),
                    (dn, 1),
                    (-dn, 1),
                ],
            ),
        );
    }
    cr.finish();
}

#[test]
fn criterion_07_mixed_fields() {
    let mut cr = Criterion::new("criterion 7: L^(2,2,2) fields");
    let sp = space(
        &[(Statistics::Fermion, 2, "p"), (Statistics::Boson, 2, "q")],
        2,
    );
    for &seed in &SEEDS {
        let co = generic_coefficients(seed, 4);
        let w1 = (co[0].norm_sqr() + co[1].norm_sqr()).sqrt();
        let w2 = (co[2].norm_sqr() + co[3].norm_sqr()).sqrt();
        let phi = field(&sp, &[0, 1], &co[..2]);
        let psi = field(&sp, &[2, 3], &co[2..]);
        cr.check(
            format!("seed {seed:#x}: phi"),
            spectrum_check(&phi, &[(0.0, 5), (w1, 4), (-w1, 4)]),
        );
        let r3 = 3f64.sqrt() * w2;
        cr.check(
            format!("seed {seed:#x}: psi"),
            spectrum_check(&psi, &[(0.0, 5), (w2, 3), (-w2, 3), (r3, 1), (-r3, 1)]),
        );
    }
    cr.finish();
}

#[test]
fn criterion_08_interactions() {
    let mut cr = Criterion::new("criterion 8: interaction fields");
    let k2 = fermions(2, 2);
    let k3 = fermions(3, 3);
    let l222 = space(
        &[(Statistics::Fermion, 2, "p"), (Statistics::Boson, 2, "q")],
        2,
    );
    let j112 = space(
        &[(Statistics::Boson, 1, "p"), (Statistics::Boson, 1, "q")],
        2,
    );
    let j212 = space(
        &[(Statistics::Boson, 2, "p"), (Statistics::Boson, 1, "q")],
        2,
    );
    let k224 = space(
        &[(Statistics::Fermion, 2, "p"), (Statistics::Fermion, 2, "q")],
        4,
    );
    let k336 = space(
        &[(Statistics::Fermion, 3, "p"), (Statistics::Fermion, 3, "q")],
        6,
    );

    for &seed in &SEEDS {
        let co = generic_coefficients(seed, 6);
        let (a, b) = (co[0].norm(), co[1].norm());

        let sq = self_interaction(&field(&k2, &[0, 1], &co[..2]));
        cr.check_bound(
            format!("seed {seed:#x}: phi^2 on K^2 = (|a|^2+|b|^2) I"),
            sq.distance_from_scalar(c(a * a + b * b, 0.0)),
            ALGEBRA_TOL,
        );

        let sq3 = self_interaction(&field(&k3, &[0, 1], &co[..2]));
        cr.check(
            format!("seed {seed:#x}: phi^2 on K^3"),
            spectrum_check(
                &sq3,
                &[
                    (a * a + b * b, 4),
                    ((a - b).powi(2), 2),
                    ((a + b).powi(2), 2),
                ],
            ),
        );

        let w1 = (co[0].norm_sqr() + co[1].norm_sqr()).sqrt();
        let w2 = (co[2].norm_sqr() + co[3].norm_sqr()).sqrt();
        let ww = w1 * w2;
        let tau = interaction_field(
            &field(&l222, &[0, 1], &co[..2]),
            &field(&l222, &[2, 3], &co[2..4]),
        )
        .unwrap();
        let r32 = 1.5f64.sqrt() * ww;
        cr.check(
            format!("seed {seed:#x}: tau on L^(2,2,2)"),
            spectrum_check(
                &tau,
                &[
                    (0.0, 5),
                    (ww, 1),
                    (-ww, 1),
                    (0.5 * ww, 2),
                    (-0.5 * ww, 2),
                    (r32, 1),
                    (-r32, 1),
                ],
            ),
        );

        let ab = a * b;
        let tau = interaction_field(
            &field(&j112, &[0], &co[..1]),
            &field(&j112, &[1], &co[1..2]),
        )
        .unwrap();
        let r2 = 2f64.sqrt() * ab;
        cr.check(
            format!("seed {seed:#x}: tau on J^(1,1,2)"),
            spectrum_check(&tau, &[(0.0, 2), (ab, 1), (-ab, 1), (r2, 1), (-r2, 1)]),
        );

        // p2 is a spectator: the interaction couples p1 and q1 only.
        let tau = interaction_field(
            &field(&j212, &[0], &co[..1]),
            &field(&j212, &[2], &co[1..2]),
        )
        .unwrap();
        cr.check(
            format!("seed {seed:#x}: tau on J^(2,1,2)"),
            spectrum_check(
                &tau,
                &[
                    (0.0, 4),
                    (ab, 1),
                    (-ab, 1),
                    (0.5 * ab, 1),
                    (-0.5 * ab, 1),
                    (r2, 1),
                    (-r2, 1),
                ],
            ),
        );

        let tau = interaction_field(
            &field(&k224, &[0, 1], &co[..2]),
            &field(&k224, &[2, 3], &co[2..4]),
        )
        .unwrap();
        cr.check(
            format!("seed {seed:#x}: tau on K^(2,2,4)"),
            spectrum_check(&tau, &[(ww, 8), (-ww, 8)]),
        );

        let start = Instant::now();
        let phi = field(&k336, &[0, 1, 2], &co[..3]);
        let psi = field(&k336, &[3, 4, 5], &co[3..6]);
        let tau = interaction_field(&phi, &psi).unwrap();
        let d = decompose(&tau);
        let elapsed = start.elapsed();
        let v1: f64 = co[..3].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v2: f64 = co[3..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cr.check(
            format!("seed {seed:#x}: tau on K^(3,3,6)"),
            compare_spectrum(&d, &[(v1 * v2, 32), (-v1 * v2, 32)], SPECTRUM_REL_TOL),
        );
        cr.check(
            format!(
                "seed {seed:#x}: K^(3,3,6) in {:.3} s",
                elapsed.as_secs_f64()
            ),
            if elapsed.as_secs_f64() < 5.0 {
                Ok(())
            } else {
                Err("slower than 5 s".into())
            },
        );
    }
    cr.finish();
}

#[test]
fn criterion_09_form_classification() {
    let mut cr = Criterion::new("criterion 9: J^(1,1,2) eigenvector forms");
    let sp = space(
        &[(Statistics::Boson, 1, "p"), (Statistics::Boson, 1, "q")],
        2,
    );
    for &seed in &SEEDS {
        let co = generic_coefficients(seed, 2);
        let ab = co[0].norm() * co[1].norm();
        let tau =
            interaction_field(&field(&sp, &[0], &co[..1]), &field(&sp, &[1], &co[1..2])).unwrap();
        let forms = classify_eigenvectors(&sp, &decompose(&tau), 0, 1, 1e-9).unwrap();
        let mut types: Vec<usize> = forms.iter().map(|(_, f)| f.type_t).collect();
        types.sort_unstable();
        cr.check(
            format!("seed {seed:#x}: types"),
            if types == [2, 2, 2, 2, 4, 4] {
                Ok(())
            } else {
                Err(format!("got {types:?}"))
            },
        );
        let mut bad = Vec::new();
        for (value, f) in &forms {
            let odd_value = (value.abs() - ab).abs() <= 1e-8 * ab;
            if odd_value != (f.parity == Parity::Odd) {
                bad.push(format!("{value:.6}: {:?}", f.parity));
            }
            if !odd_value && f.parity != Parity::Even {
                bad.push(format!("{value:.6}: not even"));
            }
        }
        cr.check(
            format!("seed {seed:#x}: odd exactly for +-|a||b|"),
            if bad.is_empty() {
                Ok(())
            } else {
                Err(bad.join("; "))
            },
        );
    }
    cr.finish();
}

#[test]
fn criterion_10_spacetime() {
    let mut cr = Criterion::new("criterion 10: spacetime lattice");

    let brute = |m: i64, r: i64| {
        let mut pts = Vec::new();
        for p0 in 0..=r {
            for x in -r..=r {
                for y in -r..=r {
                    for z in -r..=r {
                        if p0 * p0 - x * x - y * y - z * z == m * m {
                            pts.push([p0, x, y, z]);
                        }
                    }
                }
            }
        }
        pts
    };
    let h: Vec<[i64; 4]> = hyperboloid(1, 2)
        .iter()
        .map(EnergyMomentum::as_array)
        .collect();
    let want = brute(1, 2);
    cr.check(
        "hyperboloid(1,2) has 9 points matching brute force",
        if h.len() == 9 && h == want {
            Ok(())
        } else {
            Err(format!("got {h:?}"))
        },
    );

    for (x0, want) in [(0u32, 1usize), (1, 7), (2, 33)] {
        let r = i64::from(x0);
        let mut count = 0;
        for x in -r..=r {
            for y in -r..=r {
                for z in -r..=r {
                    if x * x + y * y + z * z <= r * r {
                        count += 1;
                    }
                }
            }
        }
        let got = space_volume(x0);
        cr.check(
            format!("space_volume({x0}) = {want}"),
            if got == want && got == count {
                Ok(())
            } else {
                Err(format!("got {got}, brute force {count}"))
            },
        );
    }

    let mut bad = Vec::new();
    for m in 0..=3u32 {
        for p in hyperboloid(m, 4) {
            for t in 0..=5u32 {
                for xs in [[0, 0, 0], [1, -2, 3], [-4, 5, 0], [7, 7, -7]] {
                    let x = LatticePoint::new(t, xs);
                    let a = p.as_array();
                    let e = a[0] * i64::from(t) - a[1] * xs[0] - a[2] * xs[1] - a[3] * xs[2];
                    let ph = phase(&p, &x);
                    let want = match e.rem_euclid(4) {
                        0 => c(1.0, 0.0),
                        1 => c(0.0, 1.0),
                        2 => c(-1.0, 0.0),
                        _ => c(0.0, -1.0),
                    };
                    if ph.to_complex() != want || ph != QuarterTurn::from_exponent(e) {
                        bad.push(format!("p={a:?} x=({t},{xs:?})"));
                    }
                }
            }
            if p.mass_sq() != i64::from(m * m) {
                bad.push(format!("Einstein relation fails at {:?}", p.as_array()));
            }
        }
    }
    cr.check(
        "phase exact on all residues; Einstein relation on every point",
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad.join("; "))
        },
    );
    cr.finish();
}

#[test]
fn criterion_11_scattering() {
    let mut cr = Criterion::new("criterion 11: toy scattering");
    for stat in [Statistics::Boson, Statistics::Fermion] {
        for r in [1u32, 2] {
            for s in [2usize, 3] {
                for x0 in [0u32, 1] {
                    let scen = ScatterScenario {
                        mass1: 1,
                        mass2: 1,
                        r,
                        cutoff_s: s,
                        x0,
                        statistics1: stat,
                        statistics2: stat,
                        coupling: 1.0,
                    };
                    let tag = format!("{stat:?} r={r} s={s} x0={x0}");
                    let run = scen.run().unwrap();
                    let h = &run.hamiltonian;
                    let scale = h.max_abs().max(1.0);
                    cr.check_bound(
                        format!("{tag}: H Hermitian"),
                        h.hermiticity_defect() / scale,
                        1e-12,
                    );
                    let sd = run.scattering.adjoint().compose(&run.scattering).unwrap();
                    cr.check_bound(
                        format!("{tag}: |S*S - I|"),
                        sd.distance_from_scalar(c(1.0, 0.0)),
                        1e-9,
                    );
                    // Column j of S holds the amplitudes <out|S|j>.
                    let dim = run.space.dimension();
                    let mut worst = 0.0f64;
                    for j in 0..dim {
                        let total: f64 =
                            run.scattering.column(j).iter().map(|z| z.norm_sqr()).sum();
                        worst = worst.max((total - 1.0).abs());
                    }
                    cr.check_bound(format!("{tag}: probability rows sum to 1"), worst, 1e-9);
                    let rec = reconstruct(&run.decomposition);
                    let err =
                        rec.try_sub(h).unwrap().frobenius_norm() / h.frobenius_norm().max(1.0);
                    cr.check_bound(format!("{tag}: reconstruction"), err, 1e-9);
                }
            }
        }
    }

    let scen = ScatterScenario {
        mass1: 1,
        mass2: 1,
        r: 1,
        cutoff_s: 2,
        x0: 0,
        statistics1: Statistics::Boson,
        statistics2: Statistics::Boson,
        coupling: 1.0,
    };
    let sp = scen.space().unwrap();
    for x in [
        LatticePoint::new(0, [0, 0, 0]),
        LatticePoint::new(3, [1, -1, 2]),
    ] {
        let tau = hamiltonian_density(&sp, &x, 1, 1, 1).unwrap();
        let r2 = 2f64.sqrt();
        cr.check(
            format!("boson r=1 s=2 density at {:?}", x.as_array()),
            spectrum_check(&tau, &[(0.0, 2), (1.0, 1), (-1.0, 1), (r2, 1), (-r2, 1)]),
        );
    }
    cr.finish();
}
