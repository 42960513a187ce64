//! Oracle tests for the solid-of-revolution module: circle harmonics,
//! classical and axis-weighted ball families, the spectral operator, the
//! reproducing kernels, the quadratic bijection, distance, localized
//! kernels, and the angular derivative operators.
//!
//! Wherever a value has an independent derivation, the oracle is computed by
//! a different route than the library uses: Jacobi series in double-double
//! arithmetic, product quadrature built from one-dimensional rules on a
//! different coordinate split, hand-expanded operator images, closed-form
//! constants, and finite differences.

mod common;

use common::{jacobi_series, XorShift};
use std::f64::consts::{PI, SQRT_2, TAU};
use symdom::curved2d::{self, CurvedWeightParams};
use symdom::error::Error;
use symdom::jet::Jet3;
use symdom::orthopoly::{gauss_jacobi_rule, gen_gegenbauer_rule, pochhammer};
use symdom::quad::{ball3_rule, disk_rule, upper_ball3_rule};
use symdom::revolution::{
    angular_ops_apply, ball3_basis_norms, ball3_diffop_apply, ball3_eigenvalue, ball3_indices,
    ball3_kernel_eval, ball3_parity_kernel_eval, ball3_weight, ball3_weighted_eval,
    ball3_weighted_jet, ball_classical_eval, circle_harmonic_eval, default_cutoff,
    dim_circle_harmonics, localized_kernel_eval, reflect_t, rev_basis_eval, rev_basis_norms,
    rev_contains, rev_diffop_apply, rev_diffop_display_apply, rev_distance, rev_eigenvalue,
    rev_indices, rev_kernel_eval, rev_psi, rev_psi_inv, rev_quadrature, rev_weight,
    validate_cutoff, AngularOp, BallWeightParams, RevBasisIndex, RevDomainParams, REV_T_MIN,
};
use symdom::scalar::Scalar;

/// Random point of the solid with planar radius below `0.97`, height kept
/// `margin`-fractions away from both arcs, and `t` at least `t_floor`.
fn sample_rev_point(
    rng: &mut XorShift,
    dp: &RevDomainParams,
    t_floor: f64,
    margin: f64,
) -> [f64; 3] {
    loop {
        let r = rng.range(0.0, 0.97);
        let th = rng.range(0.0, TAU);
        let lo = (dp.a * (1.0 - r * r) + dp.c * r * r).sqrt();
        let hi = (dp.b * (1.0 - r * r) + dp.c * r * r).sqrt();
        let t = rng.range(lo + margin * (hi - lo), hi - margin * (hi - lo));
        if t < t_floor {
            continue;
        }
        let p = [r * th.cos(), r * th.sin(), t];
        if rev_contains(dp, p) {
            return p;
        }
    }
}

/// Same, additionally requiring the transported height `frakt >= tau_floor`
/// (needed by the operator routes, whose pullback differentiates a square
/// root that degenerates on the lower arc).
fn sample_rev_point_tau(
    rng: &mut XorShift,
    dp: &RevDomainParams,
    t_floor: f64,
    tau_floor: f64,
) -> [f64; 3] {
    loop {
        let p = sample_rev_point(rng, dp, t_floor, 0.03);
        let y = rev_psi(dp, p).unwrap();
        if y[2] >= tau_floor {
            return p;
        }
    }
}

/// A family member as a callable on the solid (its ball form composed with
/// the bijection), in jet coordinates so operators can differentiate it.
fn rev_member_fn(
    dp: RevDomainParams,
    bw: BallWeightParams,
    idx: RevBasisIndex,
) -> impl Fn([Jet3; 3]) -> Jet3 {
    move |y: [Jet3; 3]| {
        let rho = y[0] * y[0] + y[1] * y[1];
        let arg = (y[2] * y[2] - Jet3::cst(dp.a) - rho.scale(dp.c - dp.a))
            .scale(1.0 / (dp.b - dp.a));
        ball3_weighted_jet(&bw, &idx, [y[0], y[1], arg.sqrt()]).unwrap()
    }
}

#[test]
fn circle_harmonics_match_trigonometric_forms() {
    let mut rng = XorShift::new(0x9e11);
    // Degree 0 is the constant 1; k >= 1 are sqrt(2) r^k cos/sin(k theta).
    for _ in 0..50 {
        let th = rng.range(0.0, TAU);
        let r = rng.range(0.1, 1.3);
        let x = [r * th.cos(), r * th.sin()];
        assert_eq!(circle_harmonic_eval(0, 1, x).unwrap(), 1.0);
        for k in 1..=6usize {
            let rk = r.powi(k as i32);
            let c = circle_harmonic_eval(k, 1, x).unwrap();
            let s = circle_harmonic_eval(k, 2, x).unwrap();
            assert!(
                (c - SQRT_2 * rk * (k as f64 * th).cos()).abs() < 1e-12,
                "cos harmonic k={k}"
            );
            assert!(
                (s - SQRT_2 * rk * (k as f64 * th).sin()).abs() < 1e-12,
                "sin harmonic k={k}"
            );
        }
    }
    assert!((circle_harmonic_eval(2, 1, [1.0, 0.0]).unwrap() - SQRT_2).abs() < 1e-15);

    // Circle-average orthonormality via a trapezoid rule (exact for
    // trigonometric polynomials of this degree).
    let mm = 256usize;
    let mut fams: Vec<(usize, usize)> = vec![(0, 1)];
    for k in 1..=6 {
        fams.push((k, 1));
        fams.push((k, 2));
    }
    for (i, &(k1, l1)) in fams.iter().enumerate() {
        for &(k2, l2) in &fams[i..] {
            let mut acc = 0.0;
            for q in 0..mm {
                let th = TAU * q as f64 / mm as f64;
                let x = [th.cos(), th.sin()];
                acc += circle_harmonic_eval(k1, l1, x).unwrap()
                    * circle_harmonic_eval(k2, l2, x).unwrap();
            }
            acc /= mm as f64;
            let expect = if (k1, l1) == (k2, l2) { 1.0 } else { 0.0 };
            assert!(
                (acc - expect).abs() < 1e-13,
                "average of Y({k1},{l1})*Y({k2},{l2}) = {acc}"
            );
        }
    }

    // Dimension law and index validation.
    for k in 0..=10 {
        let expect = if k == 0 { 1 } else { 2 };
        assert_eq!(dim_circle_harmonics(k), expect);
    }
    assert!(matches!(
        circle_harmonic_eval(0, 2, [0.1, 0.2]),
        Err(Error::IndexOutOfRange(_))
    ));
    assert!(matches!(
        circle_harmonic_eval(4, 0, [0.1, 0.2]),
        Err(Error::IndexOutOfRange(_))
    ));
}

#[test]
fn classical_disk_family_matches_jacobi_series_and_is_orthogonal() {
    let mut rng = XorShift::new(0x5eed);
    // Values against the double-double Jacobi series oracle.
    for _ in 0..40 {
        let r = rng.range(0.0, 0.999);
        let th = rng.range(0.0, TAU);
        let x = [r * th.cos(), r * th.sin()];
        assert_eq!(ball_classical_eval(0.3, 0, 0, 1, x).unwrap(), 1.0);
        let v = ball_classical_eval(0.0, 2, 1, 1, x).unwrap();
        assert!((v - (2.0 * r * r - 1.0)).abs() < 1e-13, "P1(2r^2-1) value");
        for &(gamma, n, m, l) in
            &[(0.0, 5, 2, 1), (0.7, 4, 1, 2), (1.5, 6, 3, 1), (0.25, 3, 0, 2)]
        {
            let k = n - 2 * m;
            let oracle = jacobi_series(m, gamma, k as f64, 2.0 * r * r - 1.0)
                * circle_harmonic_eval(k, l, x).unwrap();
            let got = ball_classical_eval(gamma, n, m, l, x).unwrap();
            assert!(
                (got - oracle).abs() < 1e-11 * oracle.abs().max(1.0),
                "member ({gamma},{n},{m},{l}): {got} vs {oracle}"
            );
        }
    }

    // Gram identity on the disk under (1-|x|^2)^gamma for n <= 8.
    for &gamma in &[0.0, 0.7] {
        let rule = disk_rule([0.0, 0.0, gamma], 18).unwrap();
        let inv_mass = 1.0 / rule.mass();
        let mut members = Vec::new();
        for n in 0..=8usize {
            for m in 0..=n / 2 {
                for l in 1..=dim_circle_harmonics(n - 2 * m) {
                    members.push((n, m, l));
                }
            }
        }
        let nm = members.len();
        let mut gram = vec![vec![0.0f64; nm]; nm];
        let mut vals = vec![0.0f64; nm];
        for (node, &w) in rule.nodes.iter().zip(&rule.weights) {
            for (i, &(n, m, l)) in members.iter().enumerate() {
                vals[i] = ball_classical_eval(gamma, n, m, l, *node).unwrap();
            }
            for i in 0..nm {
                for j in i..nm {
                    gram[i][j] += w * vals[i] * vals[j];
                }
            }
        }
        for i in 0..nm {
            let di = (inv_mass * gram[i][i]).sqrt();
            assert!(di > 0.0);
            for j in i + 1..nm {
                let dj = (inv_mass * gram[j][j]).sqrt();
                let off = inv_mass * gram[i][j] / (di * dj);
                assert!(
                    off.abs() < 1e-9,
                    "gamma={gamma}: members {:?} and {:?} overlap {off}",
                    members[i],
                    members[j]
                );
            }
        }
    }

    // Index and domain errors.
    assert!(matches!(
        ball_classical_eval(0.0, 3, 2, 1, [0.0, 0.0]),
        Err(Error::IndexOutOfRange(_))
    ));
    assert!(matches!(
        ball_classical_eval(0.0, 2, 1, 1, [1.2, 0.0]),
        Err(Error::DomainViolation(_))
    ));
    assert!(matches!(
        ball_classical_eval(-1.5, 2, 1, 1, [0.1, 0.0]),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn ball_family_parity_and_independent_product_gram() {
    let mut rng = XorShift::new(0xba11);
    let bw0 = BallWeightParams::new(0.6, 0.4).unwrap();

    // Degree 0 is the constant; full parity (-1)^n; axis parity (-1)^(n-k).
    for _ in 0..30 {
        let y = [rng.range(-0.5, 0.5), rng.range(-0.5, 0.5), rng.range(-0.7, 0.7)];
        let idx0 = RevBasisIndex::new(0, 0, 0, 1).unwrap();
        assert_eq!(ball3_weighted_eval(&bw0, &idx0, y).unwrap(), 1.0);
        for n in 0..=6usize {
            for idx in ball3_indices(n) {
                let v = ball3_weighted_eval(&bw0, &idx, y).unwrap();
                let vneg = ball3_weighted_eval(&bw0, &idx, [-y[0], -y[1], -y[2]]).unwrap();
                let vt = ball3_weighted_eval(&bw0, &idx, reflect_t(y)).unwrap();
                let sn = if n % 2 == 0 { 1.0 } else { -1.0 };
                let sk = if (n - idx.k) % 2 == 0 { 1.0 } else { -1.0 };
                let scale = v.abs().max(1e-3);
                assert!((vneg - sn * v).abs() < 1e-12 * scale, "full parity {idx:?}");
                assert!((vt - sk * v).abs() < 1e-12 * scale, "axis parity {idx:?}");
            }
        }
    }

    // Independent product-rule Gram: substitute x = sqrt(1-t^2) u, which
    // splits the ball integral into a generalized Gegenbauer rule in t
    // (weight |t|^(2 beta) (1-t^2)^(gamma+1)) and a disk rule in u (weight
    // (1-|u|^2)^gamma). Closed-form masses pin the normalization.
    for &(beta, gamma, mass_closed) in &[
        (0.0, 0.0, 4.0 * PI / 3.0),
        (1.0, 0.5, PI * PI / 24.0),
    ] {
        let bw = BallWeightParams::new(beta, gamma).unwrap();
        let rt = gen_gegenbauer_rule(10, gamma + 1.5, beta).unwrap();
        let ru = disk_rule([0.0, 0.0, gamma], 18).unwrap();
        let tmass: f64 = rt.weights.iter().sum();
        let umass: f64 = ru.weights.iter().sum();
        let mass = tmass * umass;
        assert!(
            (mass - mass_closed).abs() < 1e-12 * mass_closed,
            "product mass {mass} vs closed form {mass_closed}"
        );
        let lib_mass = ball3_rule(beta, gamma, 16).unwrap().mass();
        assert!((lib_mass - mass_closed).abs() < 1e-12 * mass_closed);
        let upper = upper_ball3_rule(beta, gamma, 16).unwrap().mass();
        assert!((upper - 0.5 * mass_closed).abs() < 1e-12 * mass_closed);

        let mut members = Vec::new();
        for n in 0..=8usize {
            members.extend(ball3_indices(n));
        }
        let nm = members.len();
        assert_eq!(nm, 165); // sum of (n+1)(n+2)/2 for n <= 8
        let mut gram = vec![vec![0.0f64; nm]; nm];
        let mut vals = vec![0.0f64; nm];
        for (&t, &wt) in rt.nodes.iter().zip(&rt.weights) {
            let s = (1.0 - t * t).max(0.0).sqrt();
            for (unode, &wu) in ru.nodes.iter().zip(&ru.weights) {
                let y = [s * unode[0], s * unode[1], t];
                let w = wt * wu;
                for (i, idx) in members.iter().enumerate() {
                    vals[i] = ball3_weighted_eval(&bw, idx, y).unwrap();
                }
                for i in 0..nm {
                    for j in i..nm {
                        gram[i][j] += w * vals[i] * vals[j];
                    }
                }
            }
        }
        let norms = ball3_basis_norms(&bw, 8).unwrap();
        let flat_norms: Vec<f64> = norms.iter().flatten().map(|(_, v)| *v).collect();
        for i in 0..nm {
            let di = (gram[i][i] / mass).sqrt();
            assert!(
                (di - flat_norms[i]).abs() < 1e-10 * di,
                "norm of {:?}: product rule {di} vs library {}",
                members[i],
                flat_norms[i]
            );
            for j in i + 1..nm {
                let dj = (gram[j][j] / mass).sqrt();
                let off = gram[i][j] / mass / (di * dj);
                assert!(
                    off.abs() < 1e-9,
                    "(beta,gamma)=({beta},{gamma}): {:?} vs {:?} overlap {off}",
                    members[i],
                    members[j]
                );
            }
        }
    }

    // Weight density edge semantics.
    let bwpos = BallWeightParams::new(0.5, 1.0).unwrap();
    assert_eq!(ball3_weight(&bwpos, [0.6, 0.0, 0.8]).unwrap(), 0.0);
    assert_eq!(ball3_weight(&bwpos, [0.3, 0.0, 0.0]).unwrap(), 0.0);
    let bwneg = BallWeightParams::new(0.0, -0.5).unwrap();
    assert!(matches!(
        ball3_weight(&bwneg, [0.6, 0.0, 0.8]),
        Err(Error::SingularEvaluation(_))
    ));
    assert!(matches!(
        ball3_weight(&bwpos, [1.0, 0.4, 0.0]),
        Err(Error::DomainViolation(_))
    ));
}

#[test]
fn ball_operator_eigenfunctions_and_hand_expansions() {
    let mut rng = XorShift::new(0xd1ff);
    let one = |_y: [Jet3; 3]| Jet3::cst(1.0);
    let bw = BallWeightParams::new(0.8, 0.3).unwrap();
    assert_eq!(
        ball3_diffop_apply(&bw, &one, [0.2, 0.1, 0.4], true).unwrap(),
        0.0
    );

    // Hand-expanded images: f = y3^2 (even) and f = y3^3 (odd, exercising
    // the reflected difference quotient).
    let fsq = |y: [Jet3; 3]| y[2] * y[2];
    let fcube = |y: [Jet3; 3]| y[2] * y[2] * y[2];
    for _ in 0..25 {
        let y = [rng.range(-0.4, 0.4), rng.range(-0.4, 0.4), rng.range(0.05, 0.7)];
        for &beta in &[0.0, 0.8] {
            let bwb = BallWeightParams::new(beta, 0.3).unwrap();
            let got = ball3_diffop_apply(&bwb, &fsq, y, true).unwrap();
            let expect =
                2.0 + 4.0 * beta - (4.0 * beta + 4.0 * bwb.gamma + 10.0) * y[2] * y[2];
            assert!((got - expect).abs() < 1e-11, "square: {got} vs {expect}");
            let got3 = ball3_diffop_apply(&bwb, &fcube, y, false).unwrap();
            let expect3 = (6.0 + 4.0 * beta) * y[2]
                - (6.0 * beta + 6.0 * bwb.gamma + 18.0) * y[2] * y[2] * y[2];
            assert!((got3 - expect3).abs() < 1e-10, "cube: {got3} vs {expect3}");
        }
    }

    // Members are eigenfunctions with eigenvalue -n(n + 2 beta + 2 gamma + 3).
    for &(beta, gamma) in &[(0.0, 0.0), (0.75, 0.25)] {
        let bwb = BallWeightParams::new(beta, gamma).unwrap();
        for n in 0..=5usize {
            let lam = ball3_eigenvalue(&bwb, n);
            assert_eq!(lam, -(n as f64) * (n as f64 + 2.0 * beta + 2.0 * gamma + 3.0));
            for idx in ball3_indices(n) {
                for _ in 0..4 {
                    let y = [
                        rng.range(-0.5, 0.5),
                        rng.range(-0.5, 0.5),
                        rng.range(0.06, 0.6),
                    ];
                    let member = move |yy: [Jet3; 3]| ball3_weighted_jet(&bwb, &idx, yy).unwrap();
                    let q = ball3_weighted_eval(&bwb, &idx, y).unwrap();
                    let even = idx.even_class();
                    let got = ball3_diffop_apply(&bwb, &member, y, even).unwrap();
                    assert!(
                        (got - lam * q).abs() < 1e-8 * (lam * q).abs().max(1.0),
                        "eigen ({beta},{gamma}) {idx:?}: {got} vs {}",
                        lam * q
                    );
                }
            }
        }
    }

    // Reflected quotient needs to stay off the equatorial plane.
    let bwodd = BallWeightParams::new(0.5, 0.0).unwrap();
    assert!(matches!(
        ball3_diffop_apply(&bwodd, &fcube, [0.1, 0.1, 1e-4], false),
        Err(Error::SingularEvaluation(_))
    ));
}

#[test]
fn ball_kernel_matches_basis_sum_and_reproduces() {
    let mut rng = XorShift::new(0x6e3a);
    for &(beta, gamma) in &[(0.0, 0.0), (0.5, 1.0), (0.0, -0.5)] {
        let bw = BallWeightParams::new(beta, gamma).unwrap();
        let norms = ball3_basis_norms(&bw, 4).unwrap();
        for _ in 0..6 {
            let mut pt = || loop {
                let y = [
                    rng.range(-0.7, 0.7),
                    rng.range(-0.7, 0.7),
                    rng.range(-0.7, 0.7),
                ];
                if y[0] * y[0] + y[1] * y[1] + y[2] * y[2] < 0.98 {
                    return y;
                }
            };
            let y1 = pt();
            let y2 = pt();
            assert!(
                (ball3_kernel_eval(&bw, 0, y1, y2).unwrap() - 1.0).abs() < 1e-13,
                "degree-0 kernel"
            );
            for n in 0..=4usize {
                let k = ball3_kernel_eval(&bw, n, y1, y2).unwrap();
                let krev = ball3_kernel_eval(&bw, n, y2, y1).unwrap();
                assert!((k - krev).abs() < 1e-12 * k.abs().max(1.0), "symmetry");
                let mut sum = 0.0;
                for (idx, nrm) in &norms[n] {
                    sum += ball3_weighted_eval(&bw, idx, y1).unwrap()
                        * ball3_weighted_eval(&bw, idx, y2).unwrap()
                        / (nrm * nrm);
                }
                assert!(
                    (k - sum).abs() < 1e-8 * sum.abs().max(1.0),
                    "(beta,gamma)=({beta},{gamma}) n={n}: kernel {k} vs basis sum {sum}"
                );
            }
        }
    }

    // Reproducing property on the degree space, via the library ball rule.
    let bw = BallWeightParams::new(0.5, 0.5).unwrap();
    let rule = ball3_rule(bw.beta, bw.gamma, 14).unwrap();
    let inv_mass = 1.0 / rule.mass();
    for &(n, k, j, l) in &[(2usize, 0usize, 0usize, 1usize), (3, 3, 1, 1), (4, 2, 1, 1)] {
        let idx = RevBasisIndex::new(n, k, j, l).unwrap();
        let y0 = [0.25, -0.3, 0.4];
        let mut acc = 0.0;
        for (node, &w) in rule.nodes.iter().zip(&rule.weights) {
            acc += w
                * ball3_kernel_eval(&bw, n, y0, *node).unwrap()
                * ball3_weighted_eval(&bw, &idx, *node).unwrap();
        }
        let expect = ball3_weighted_eval(&bw, &idx, y0).unwrap();
        assert!(
            (inv_mass * acc - expect).abs() < 1e-8 * expect.abs().max(1.0),
            "reproduction of {idx:?}: {} vs {expect}",
            inv_mass * acc
        );
    }
}

#[test]
fn bijection_round_trips_and_transported_mass() {
    let mut rng = XorShift::new(0xab1e);
    let shapes = [
        RevDomainParams::new(0.0, 1.0, 1.0).unwrap(),
        RevDomainParams::new(0.25, 1.0, 2.0).unwrap(),
        RevDomainParams::new(0.0, 1.0, 0.5).unwrap(),
    ];

    // Cone closed form.
    let cone = shapes[0];
    for _ in 0..50 {
        let p = sample_rev_point(&mut rng, &cone, 0.0, 0.01);
        let y = rev_psi(&cone, p).unwrap();
        let rho = p[0] * p[0] + p[1] * p[1];
        assert!((y[2] - (p[2] * p[2] - rho).max(0.0).sqrt()).abs() < 1e-13);
        assert_eq!(y[0], p[0]);
        assert_eq!(y[1], p[1]);
    }

    // Round trips both ways, staying inside the respective domains.
    for dp in &shapes {
        for _ in 0..3000 {
            // Ball side first.
            let r = rng.range(0.0, 0.995);
            let th = rng.range(0.0, TAU);
            let v = rng.range(0.01, (1.0 - r * r).max(0.0).sqrt().min(0.97));
            let y = [r * th.cos(), r * th.sin(), v];
            if y[0] * y[0] + y[1] * y[1] + y[2] * y[2] > 0.999 {
                continue;
            }
            let p = rev_psi_inv(dp, y).unwrap();
            assert!(rev_contains(dp, p), "image in the solid for {dp:?}");
            let back = rev_psi(dp, p).unwrap();
            for i in 0..3 {
                assert!(
                    (back[i] - y[i]).abs() <= 1e-13,
                    "ball round trip {dp:?}: {y:?} -> {p:?} -> {back:?}"
                );
            }

            // Solid side.
            let p2 = sample_rev_point(&mut rng, dp, 0.0, 0.01);
            let y2 = rev_psi(dp, p2).unwrap();
            if y2[2] < 0.01 {
                continue;
            }
            assert!(y2[0] * y2[0] + y2[1] * y2[1] + y2[2] * y2[2] <= 1.0 + 1e-12);
            let back2 = rev_psi_inv(dp, y2).unwrap();
            for i in 0..3 {
                assert!(
                    (back2[i] - p2[i]).abs() <= 1e-13,
                    "solid round trip {dp:?}: {p2:?} -> {y2:?} -> {back2:?}"
                );
            }
        }
    }

    // Transported mass against the planar machinery: rotating the planar
    // cross-section weight with an extra |u| factor (cylindrical Jacobian)
    // gives the solid mass as pi times the planar integral.
    for dp in &shapes {
        for &(beta, gamma) in &[(0.0, 0.0), (1.0, 0.5), (0.5, 1.0)] {
            let bw = BallWeightParams::new(beta, gamma).unwrap();
            let solid = rev_quadrature(dp, &bw, 14).unwrap().mass();
            let wp = CurvedWeightParams::new([0.5, beta, gamma]).unwrap();
            let planar = curved2d::lambda_quadrature(&dp.planar(), &wp, 14)
                .unwrap()
                .mass();
            assert!(
                (solid - PI * planar).abs() < 1e-9 * solid.abs(),
                "mass {dp:?} ({beta},{gamma}): solid {solid} vs pi * planar {}",
                PI * planar
            );
        }
    }

    // Fully direct iterated Gauss-Legendre oracle for polynomial weights,
    // and an integral identity for a smooth axisymmetric integrand.
    let gl = gauss_jacobi_rule(60, 0.0, 0.0).unwrap();
    let gl_int = |lo: f64, hi: f64, f: &dyn Fn(f64) -> f64| -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        gl.nodes
            .iter()
            .zip(&gl.weights)
            .map(|(&x, &w)| w * half * f(mid + half * x))
            .sum()
    };
    for dp in &[shapes[0], shapes[1]] {
        let (a, b, c) = (dp.a, dp.b, dp.c);
        for &(beta, gamma) in &[(0.5, 1.0), (1.5, 1.0)] {
            let bw = BallWeightParams::new(beta, gamma).unwrap();
            let wfun = |r: f64, t: f64| rev_weight(dp, &bw, [r, 0.0, t]).unwrap();
            let direct = TAU
                * gl_int(0.0, 1.0, &|r| {
                    let lo = (a * (1.0 - r * r) + c * r * r).sqrt();
                    let hi = (b * (1.0 - r * r) + c * r * r).sqrt();
                    r * gl_int(lo, hi, &|t| wfun(r, t))
                });
            let solid = rev_quadrature(dp, &bw, 14).unwrap().mass();
            assert!(
                (direct - solid).abs() < 1e-9 * solid.abs(),
                "direct mass {dp:?} ({beta},{gamma}): {direct} vs {solid}"
            );

            // Smooth integrand, both routes.
            let f = |r2: f64, t: f64| (r2).exp() * (t * t).cos();
            let direct_f = TAU
                * gl_int(0.0, 1.0, &|r| {
                    let lo = (a * (1.0 - r * r) + c * r * r).sqrt();
                    let hi = (b * (1.0 - r * r) + c * r * r).sqrt();
                    r * gl_int(lo, hi, &|t| f(r * r, t) * wfun(r, t))
                });
            let rule = rev_quadrature(dp, &bw, 40).unwrap();
            let pulled = rule.integrate(|x1, x2, t| f(x1 * x1 + x2 * x2, t));
            assert!(
                (direct_f - pulled).abs() < 1e-9 * direct_f.abs().max(1.0),
                "integrand {dp:?} ({beta},{gamma}): {direct_f} vs {pulled}"
            );
        }
    }

    // The weight density itself transports exactly.
    for dp in &shapes {
        let bw = BallWeightParams::new(0.75, 0.6).unwrap();
        for _ in 0..40 {
            let p = sample_rev_point(&mut rng, dp, 0.02, 0.02);
            let y = rev_psi(dp, p).unwrap();
            let w_lambda = rev_weight(dp, &bw, p).unwrap();
            let w_ball = ball3_weight(&bw, y).unwrap();
            // d t = (b - a) v dv / t, so the solid density carries the
            // reciprocal factor t / ((b - a) v).
            let jac = p[2] / ((dp.b - dp.a) * y[2]);
            assert!(
                (w_lambda - w_ball * jac).abs() < 1e-11 * w_ball.max(1e-6),
                "density transport at {p:?}"
            );
        }
    }
}

#[test]
fn solid_family_gram_and_triangle_route() {
    let shapes = [
        RevDomainParams::new(0.0, 1.0, 1.0).unwrap(),
        RevDomainParams::new(0.25, 1.0, 2.0).unwrap(),
    ];
    // Orthonormality on the solid through the honest pullback route.
    for dp in &shapes {
        for &(beta, gamma) in &[(0.0, 0.0), (1.0, 1.0)] {
            let bw = BallWeightParams::new(beta, gamma).unwrap();
            let rule = rev_quadrature(dp, &bw, 18).unwrap();
            let inv_mass = 1.0 / rule.weights.iter().sum::<f64>();
            let mut members = Vec::new();
            for n in 0..=8usize {
                members.extend(rev_indices(n));
            }
            let nm = members.len();
            let norms = rev_basis_norms(dp, &bw, 8).unwrap();
            let flat: Vec<f64> = norms.iter().flatten().map(|(_, v)| *v).collect();
            let mut gram = vec![vec![0.0f64; nm]; nm];
            let mut vals = vec![0.0f64; nm];
            for (node, &w) in rule.nodes.iter().zip(&rule.weights) {
                for (i, idx) in members.iter().enumerate() {
                    vals[i] = rev_basis_eval(dp, &bw, idx, *node).unwrap();
                }
                for i in 0..nm {
                    for j in i..nm {
                        gram[i][j] += w * vals[i] * vals[j];
                    }
                }
            }
            for i in 0..nm {
                let di = (inv_mass * gram[i][i]).sqrt();
                assert!(
                    (di - flat[i]).abs() < 1e-9 * di.max(1e-9),
                    "norm mismatch for {:?}",
                    members[i]
                );
                for j in i + 1..nm {
                    let dj = (inv_mass * gram[j][j]).sqrt();
                    let off = inv_mass * gram[i][j] / (di * dj);
                    assert!(
                        off.abs() < 1e-9,
                        "{dp:?} ({beta},{gamma}): {:?} vs {:?} overlap {off}",
                        members[i],
                        members[j]
                    );
                }
            }
        }
    }

    // Degree 0 is the constant; even-class dimension law.
    let mut rng = XorShift::new(0x50f1);
    let bw = BallWeightParams::new(0.0, 0.0).unwrap();
    let idx0 = RevBasisIndex::new(0, 0, 0, 1).unwrap();
    let p = sample_rev_point(&mut rng, &shapes[0], 0.0, 0.05);
    assert_eq!(rev_basis_eval(&shapes[0], &bw, &idx0, p).unwrap(), 1.0);
    for n in 0..=8usize {
        let by_formula: usize = (0..=n / 2).map(|m| n - 2 * m + 1).sum();
        assert_eq!(rev_indices(n).len(), by_formula, "even-class count at n={n}");
    }
    assert_eq!(rev_indices(2).len(), 4);

    // Triangle-polynomial route: the same member factors through a triangle
    // basis member in (|x|^2, frakt^2) and a circle harmonic, up to the
    // even-degree Gegenbauer-to-Jacobi constant.
    use symdom::triangle::{triangle_basis_eval, TriangleWeightParams};
    let (beta, gamma) = (0.5, 0.25);
    let bwt = BallWeightParams::new(beta, gamma).unwrap();
    for dp in &shapes {
        for n in 0..=6usize {
            for idx in rev_indices(n) {
                let mprime = (n - idx.k) / 2;
                let m = idx.j + mprime;
                let kh = idx.harmonic_degree();
                let lam = idx.k as f64 + gamma + 1.5;
                let cnk = pochhammer(lam + beta, mprime) / pochhammer(beta + 0.5, mprime);
                let tri =
                    TriangleWeightParams::new([kh as f64, beta - 0.5, gamma]).unwrap();
                for _ in 0..4 {
                    let pt = sample_rev_point(&mut rng, dp, 0.05, 0.03);
                    let y = rev_psi(dp, pt).unwrap();
                    let rho = pt[0] * pt[0] + pt[1] * pt[1];
                    let z = y[2] * y[2];
                    let troute = cnk
                        * triangle_basis_eval(&tri, idx.j, m, [rho, z]).unwrap()
                        * circle_harmonic_eval(kh, idx.l, [pt[0], pt[1]]).unwrap();
                    let direct = rev_basis_eval(dp, &bwt, &idx, pt).unwrap();
                    assert!(
                        (direct - troute).abs() < 1e-10 * direct.abs().max(1.0),
                        "{dp:?} {idx:?}: direct {direct} vs triangle route {troute}"
                    );
                }
            }
        }
    }
}

#[test]
fn solid_operator_eigen_and_display_routes() {
    let mut rng = XorShift::new(0x0935);
    let shapes = [
        RevDomainParams::new(0.0, 1.0, 1.0).unwrap(),
        RevDomainParams::new(0.25, 1.0, 2.0).unwrap(),
        RevDomainParams::new(0.0, 1.0, 0.5).unwrap(),
    ];
    let one = |_y: [Jet3; 3]| Jet3::cst(1.0);
    let bw00 = BallWeightParams::new(0.0, 0.0).unwrap();
    assert_eq!(
        rev_diffop_apply(&shapes[0], &bw00, &one, [0.1, 0.05, 0.6]).unwrap(),
        0.0
    );

    // Spec arithmetic: degree 2 at beta = gamma = 0 has eigenvalue -10.
    assert_eq!(rev_eigenvalue(&bw00, 2), -10.0);
    for idx in rev_indices(2) {
        let member = rev_member_fn(shapes[0], bw00, idx);
        for _ in 0..5 {
            let p = sample_rev_point_tau(&mut rng, &shapes[0], 0.08, 0.07);
            let q = rev_basis_eval(&shapes[0], &bw00, &idx, p).unwrap();
            let got = rev_diffop_apply(&shapes[0], &bw00, &member, p).unwrap();
            assert!(
                (got + 10.0 * q).abs() < 1e-8 * (10.0 * q).abs().max(1.0),
                "cone degree-2 member {idx:?}: {got} vs {}",
                -10.0 * q
            );
        }
    }

    // Eigenvalue law across shapes and weights, n <= 6.
    for dp in &shapes {
        for &(beta, gamma) in &[(0.0, 0.0), (0.5, 0.0), (1.0, 1.0)] {
            let bw = BallWeightParams::new(beta, gamma).unwrap();
            for n in 0..=6usize {
                let lam = rev_eigenvalue(&bw, n);
                for idx in rev_indices(n) {
                    let member = rev_member_fn(*dp, bw, idx);
                    for _ in 0..3 {
                        let p = sample_rev_point_tau(&mut rng, dp, 0.08, 0.07);
                        let q = rev_basis_eval(dp, &bw, &idx, p).unwrap();
                        let got = rev_diffop_apply(dp, &bw, &member, p).unwrap();
                        assert!(
                            (got - lam * q).abs() < 1e-7 * (lam * q).abs().max(1.0),
                            "{dp:?} ({beta},{gamma}) {idx:?} at {p:?}: {got} vs {}",
                            lam * q
                        );
                    }
                }
            }
        }
    }

    // The expanded coefficient display agrees with the pullback on generic
    // smooth callables.
    let smooth = |y: [Jet3; 3]| {
        y[0].scale(0.5).exp() * (y[2] * y[2]).scale(1.0 / 3.0).cos()
            + (y[0] * y[1] * y[2]).scale(0.25)
            + (y[2] * y[2]).scale(0.4)
    };
    for dp in &shapes {
        for &(beta, gamma) in &[(0.0, 0.0), (1.0, 0.5)] {
            let bw = BallWeightParams::new(beta, gamma).unwrap();
            for _ in 0..6 {
                let p = sample_rev_point_tau(&mut rng, dp, 0.1, 0.08);
                let disp = rev_diffop_display_apply(dp, &bw, &smooth, p).unwrap();
                let pull = rev_diffop_apply(dp, &bw, &smooth, p).unwrap();
                assert!(
                    (disp - pull).abs() < 1e-9 * disp.abs().max(1.0),
                    "{dp:?} ({beta},{gamma}) at {p:?}: display {disp} vs pullback {pull}"
                );
            }
        }
    }

    // Hand-coded cone operator (the worked special case): on (0, 1, 1) the
    // coefficients collapse to (1-t^2) d_tt + 2(1/t - t) d_t <x, grad_x>
    // - (2b+2g+3)(<x,grad> + t d_t) - t d_t + (2 beta + 2)/t d_t.
    let cone = shapes[0];
    for &(beta, gamma) in &[(0.0, 0.0), (0.75, 0.5)] {
        let bw = BallWeightParams::new(beta, gamma).unwrap();
        for _ in 0..8 {
            let p = sample_rev_point_tau(&mut rng, &cone, 0.1, 0.08);
            let jet = smooth([Jet3::var(0, p[0]), Jet3::var(1, p[1]), Jet3::var(2, p[2])]);
            let (g, h) = (jet.grad, jet.hess);
            let t = p[2];
            let s = p[0] * g[0] + p[1] * g[1];
            let xhx = p[0] * p[0] * h[0] + 2.0 * p[0] * p[1] * h[1] + p[1] * p[1] * h[3];
            let tcross = p[0] * h[2] + p[1] * h[4];
            let hand = h[0] + h[3] - xhx - s
                + (1.0 - t * t) * h[5]
                + 2.0 * (1.0 / t - t) * tcross
                - (2.0 * beta + 2.0 * gamma + 3.0) * (s + t * g[2])
                - t * g[2]
                + (2.0 * beta + 2.0) / t * g[2];
            let got = rev_diffop_apply(&cone, &bw, &smooth, p).unwrap();
            assert!(
                (got - hand).abs() < 1e-7 * hand.abs().max(1.0),
                "cone display ({beta},{gamma}) at {p:?}: {got} vs {hand}"
            );
        }
    }

    // On the reference shape the solid operator is the ball operator.
    let half_ball = RevDomainParams::new(0.0, 1.0, 0.0).unwrap();
    let bwr = BallWeightParams::new(0.6, 0.4).unwrap();
    for _ in 0..10 {
        let p = sample_rev_point_tau(&mut rng, &half_ball, 0.1, 0.1);
        let a = rev_diffop_apply(&half_ball, &bwr, &smooth, p).unwrap();
        let b = ball3_diffop_apply(&bwr, &smooth, p, true).unwrap();
        assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
    }

    // Guards.
    assert!(matches!(
        rev_diffop_apply(&cone, &bw00, &one, [0.01, 0.0, 0.02]),
        Err(Error::SingularEvaluation(_))
    ));
    assert!(matches!(
        rev_diffop_apply(&cone, &bw00, &one, [0.9, 0.0, 0.3]),
        Err(Error::DomainViolation(_))
    ));
}

#[test]
fn solid_kernel_triple_equivalence_and_reproduction() {
    let mut rng = XorShift::new(0x7e19);
    let shapes = [
        RevDomainParams::new(0.0, 1.0, 1.0).unwrap(),
        RevDomainParams::new(0.25, 1.0, 2.0).unwrap(),
        RevDomainParams::new(0.0, 1.0, 0.5).unwrap(),
    ];
    for dp in &shapes {
        for &gamma in &[0.0, 1.0] {
            let bw = BallWeightParams::new(0.0, gamma).unwrap();
            let norms = rev_basis_norms(dp, &bw, 5).unwrap();
            for _ in 0..6 {
                let p1 = sample_rev_point(&mut rng, dp, 0.0, 0.02);
                let p2 = sample_rev_point(&mut rng, dp, 0.0, 0.02);
                assert!(
                    (rev_kernel_eval(dp, gamma, 0, p1, p2).unwrap() - 1.0).abs() < 1e-13
                );
                for n in 0..=5usize {
                    let closed = rev_kernel_eval(dp, gamma, n, p1, p2).unwrap();
                    let swapped = rev_kernel_eval(dp, gamma, n, p2, p1).unwrap();
                    assert!(
                        (closed - swapped).abs() < 1e-12 * closed.abs().max(1.0),
                        "symmetry"
                    );
                    let y1 = rev_psi(dp, p1).unwrap();
                    let y2 = rev_psi(dp, p2).unwrap();
                    let averaged = ball3_parity_kernel_eval(&bw, n, y1, y2).unwrap();
                    assert!(
                        (closed - averaged).abs() < 1e-9 * closed.abs().max(1.0),
                        "{dp:?} gamma={gamma} n={n}: closed {closed} vs averaged ball {averaged}"
                    );
                    let mut sum = 0.0;
                    for (idx, nrm) in &norms[n] {
                        sum += rev_basis_eval(dp, &bw, idx, p1).unwrap()
                            * rev_basis_eval(dp, &bw, idx, p2).unwrap()
                            / (nrm * nrm);
                    }
                    assert!(
                        (closed - sum).abs() < 1e-8 * sum.abs().max(1.0),
                        "{dp:?} gamma={gamma} n={n}: closed {closed} vs basis sum {sum}"
                    );
                }
            }
        }
    }

    // Reproducing property on the solid for even-class members.
    let cone = shapes[0];
    for &gamma in &[0.0, 1.0] {
        let bw = BallWeightParams::new(0.0, gamma).unwrap();
        let rule = rev_quadrature(&cone, &bw, 16).unwrap();
        let inv_mass = 1.0 / rule.weights.iter().sum::<f64>();
        for &(n, k, j, l) in &[(2usize, 2usize, 0usize, 2usize), (3, 1, 0, 1), (4, 2, 1, 1)] {
            let idx = RevBasisIndex::new(n, k, j, l).unwrap();
            let p0 = sample_rev_point(&mut rng, &cone, 0.05, 0.05);
            let mut acc = 0.0;
            for (node, &w) in rule.nodes.iter().zip(&rule.weights) {
                acc += w
                    * rev_kernel_eval(&cone, gamma, n, p0, *node).unwrap()
                    * rev_basis_eval(&cone, &bw, &idx, *node).unwrap();
            }
            let expect = rev_basis_eval(&cone, &bw, &idx, p0).unwrap();
            assert!(
                (inv_mass * acc - expect).abs() < 1e-8 * expect.abs().max(1.0),
                "reproduction gamma={gamma} {idx:?}: {} vs {expect}",
                inv_mass * acc
            );
        }
    }
}

#[test]
fn distance_axioms_and_cone_formula() {
    let mut rng = XorShift::new(0xd157);
    let shapes = [
        RevDomainParams::new(0.0, 1.0, 1.0).unwrap(),
        RevDomainParams::new(0.25, 1.0, 2.0).unwrap(),
    ];
    for dp in &shapes {
        for _ in 0..500 {
            let p1 = sample_rev_point(&mut rng, dp, 0.0, 0.01);
            let p2 = sample_rev_point(&mut rng, dp, 0.0, 0.01);
            let p3 = sample_rev_point(&mut rng, dp, 0.0, 0.01);
            let d11 = rev_distance(dp, p1, p1).unwrap();
            // acos(1 - eps) at machine epsilon is about 2e-8.
            assert!(d11 >= 0.0 && d11 < 5e-8, "self distance {d11}");
            let d12 = rev_distance(dp, p1, p2).unwrap();
            let d21 = rev_distance(dp, p2, p1).unwrap();
            assert!((d12 - d21).abs() < 1e-14, "symmetry");
            assert!((0.0..=PI).contains(&d12), "range");
            let d13 = rev_distance(dp, p1, p3).unwrap();
            let d23 = rev_distance(dp, p2, p3).unwrap();
            assert!(
                d13 <= d12 + d23 + 1e-10,
                "triangle inequality: {d13} vs {d12} + {d23}"
            );
        }
    }

    // Cone direct formula with frakt = sqrt(t^2 - |x|^2) and the flat-top
    // boundary factor sqrt(1 - t^2).
    let cone = shapes[0];
    for _ in 0..100 {
        let p1 = sample_rev_point(&mut rng, &cone, 0.0, 0.01);
        let p2 = sample_rev_point(&mut rng, &cone, 0.0, 0.01);
        let rho1 = p1[0] * p1[0] + p1[1] * p1[1];
        let rho2 = p2[0] * p2[0] + p2[1] * p2[1];
        let arg = p1[0] * p2[0]
            + p1[1] * p2[1]
            + (p1[2] * p1[2] - rho1).max(0.0).sqrt() * (p2[2] * p2[2] - rho2).max(0.0).sqrt()
            + (1.0 - p1[2] * p1[2]).max(0.0).sqrt() * (1.0 - p2[2] * p2[2]).max(0.0).sqrt();
        let direct = arg.clamp(-1.0, 1.0).acos();
        let got = rev_distance(&cone, p1, p2).unwrap();
        assert!((got - direct).abs() < 1e-12, "cone formula: {got} vs {direct}");
    }

    assert!(matches!(
        rev_distance(&cone, [0.9, 0.0, 0.2], [0.0, 0.0, 0.5]),
        Err(Error::DomainViolation(_))
    ));
}

#[test]
fn localized_kernel_window_and_decay() {
    let mut rng = XorShift::new(0x10ca);
    let cone = RevDomainParams::new(0.0, 1.0, 1.0).unwrap();
    let p = sample_rev_point(&mut rng, &cone, 0.1, 0.1);
    let q = sample_rev_point(&mut rng, &cone, 0.1, 0.1);

    // Degree 0 collapses to the constant kernel.
    assert!(
        (localized_kernel_eval(&cone, 0.0, 0, p, q, &default_cutoff).unwrap() - 1.0).abs()
            < 1e-13
    );

    // On the diagonal the window dominates the plain partial sum.
    let mut partial = 0.0;
    for k in 0..=12usize {
        partial += rev_kernel_eval(&cone, 0.0, k, p, p).unwrap();
    }
    let loc = localized_kernel_eval(&cone, 0.0, 12, p, p, &default_cutoff).unwrap();
    assert!(loc >= partial - 1e-10, "diagonal: {loc} vs partial sum {partial}");
    assert!(loc > 0.0);

    // Decay profile at n = 16: compare near-diagonal and far bins.
    let n = 16usize;
    let p1 = [0.12, 0.08, 0.55];
    assert!(rev_contains(&cone, p1));
    let mut near_max = 0.0f64;
    let mut far_max = 0.0f64;
    for _ in 0..900 {
        let p2 = sample_rev_point(&mut rng, &cone, 0.0, 0.005);
        let d = rev_distance(&cone, p1, p2).unwrap();
        let v = localized_kernel_eval(&cone, 0.0, n, p1, p2, &default_cutoff)
            .unwrap()
            .abs();
        if d < 0.1 {
            near_max = near_max.max(v);
        } else if (0.9..1.0).contains(&d) {
            far_max = far_max.max(v);
        }
    }
    let diag = localized_kernel_eval(&cone, 0.0, n, p1, p1, &default_cutoff).unwrap();
    near_max = near_max.max(diag.abs());
    assert!(far_max > 0.0, "far bin was never hit");
    assert!(
        near_max >= 100.0 * far_max,
        "decay: near {near_max} vs far {far_max}"
    );

    // Window contract: a plateau violation and a support violation are
    // rejected; a different admissible window is accepted.
    let bad_plateau = |t: f64| if t < 0.5 { 1.0 } else { 0.0 };
    assert!(matches!(
        localized_kernel_eval(&cone, 0.0, 4, p, q, &bad_plateau),
        Err(Error::InvalidCutoff(_))
    ));
    let bad_support = |_t: f64| 1.0;
    assert!(matches!(
        validate_cutoff(&bad_support),
        Err(Error::InvalidCutoff(_))
    ));
    let cosine_taper = |t: f64| {
        if t <= 1.0 {
            1.0
        } else if t >= 2.0 {
            0.0
        } else {
            let s = 0.5 * PI * (t - 1.0);
            s.cos() * s.cos()
        }
    };
    assert!(validate_cutoff(&cosine_taper).is_ok());
    let with_taper = localized_kernel_eval(&cone, 0.0, 8, p, q, &cosine_taper).unwrap();
    assert!(with_taper.is_finite());
}

#[test]
fn angular_operators_identities_and_multiplier() {
    let mut rng = XorShift::new(0xa29);
    let smooth = |y: [Jet3; 3]| {
        y[0].exp() * (y[2] * y[2]).scale(0.5).cos() + y[1] * y[1] * y[2] + y[0] * y[1]
    };
    for &c in &[0.5, 1.0, 2.0] {
        let dp = RevDomainParams::new(0.0, 1.0, c).unwrap();
        for _ in 0..30 {
            let p = sample_rev_point(&mut rng, &dp, 0.1, 0.05);

            // The rotation derivative annihilates planar-radial functions.
            let radial = |y: [Jet3; 3]| (y[0] * y[0] + y[1] * y[1]) * y[2] + y[2].exp();
            let d12r = angular_ops_apply(&dp, AngularOp::D12, &radial, p).unwrap();
            assert!(d12r.abs() < 1e-13, "rotation on radial: {d12r}");

            // x1 FrakD2 - x2 FrakD1 equals the plain rotation derivative.
            let d12 = angular_ops_apply(&dp, AngularOp::D12, &smooth, p).unwrap();
            let f1 = angular_ops_apply(&dp, AngularOp::FrakD1, &smooth, p).unwrap();
            let f2 = angular_ops_apply(&dp, AngularOp::FrakD2, &smooth, p).unwrap();
            let composed = p[0] * f2 - p[1] * f1;
            assert!(
                (composed - d12).abs() < 1e-12 * d12.abs().max(1.0),
                "skewed-frame rotation identity: {composed} vs {d12}"
            );

            // Mixed derivative: definition vs its expanded closed form
            // -(frakt/t)(t d_i - (1-c) x_i d_t).
            let jet = smooth([Jet3::var(0, p[0]), Jet3::var(1, p[1]), Jet3::var(2, p[2])]);
            let rho = p[0] * p[0] + p[1] * p[1];
            let frakt = (p[2] * p[2] - c * rho).max(0.0).sqrt();
            for (which, i) in [(AngularOp::FrakD13, 0usize), (AngularOp::FrakD23, 1usize)] {
                let got = angular_ops_apply(&dp, which, &smooth, p).unwrap();
                let closed = -(frakt / p[2])
                    * (p[2] * jet.grad[i] - (1.0 - c) * p[i] * jet.grad[2]);
                assert!(
                    (got - closed).abs() < 1e-10 * got.abs().max(1.0),
                    "mixed derivative {which:?}: {got} vs closed form {closed}"
                );
            }

            // FrakD3 on t^2 gives 2 frakt.
            let tsq = |y: [Jet3; 3]| y[2] * y[2];
            let d3 = angular_ops_apply(&dp, AngularOp::FrakD3, &tsq, p).unwrap();
            assert!((d3 - 2.0 * frakt).abs() < 1e-13 * frakt.max(1.0));

            // The multiplier is the pullback of the ball boundary factor.
            let y = rev_psi(&dp, p).unwrap();
            let phi_ball = (1.0 - y[0] * y[0] - y[1] * y[1] - y[2] * y[2]).max(0.0).sqrt();
            let fval = jet.f;
            let got_phi = angular_ops_apply(&dp, AngularOp::PhiC, &smooth, p).unwrap();
            assert!(
                (got_phi - phi_ball * fval).abs() < 1e-12 * got_phi.abs().max(1e-3),
                "multiplier: {got_phi} vs {}",
                phi_ball * fval
            );
            if c == 1.0 {
                let direct = (1.0 - p[2] * p[2]).max(0.0).sqrt() * fval;
                assert!((got_phi - direct).abs() < 1e-12 * direct.abs().max(1e-3));
            }

            // Forward-mode derivatives agree with central differences.
            let h = 1e-6;
            let val = |pp: [f64; 3]| {
                smooth([Jet3::cst(pp[0]), Jet3::cst(pp[1]), Jet3::cst(pp[2])]).f
            };
            let fd_x = (val([p[0] + h, p[1], p[2]]) - val([p[0] - h, p[1], p[2]])) / (2.0 * h);
            let fd_t = (val([p[0], p[1], p[2] + h]) - val([p[0], p[1], p[2] - h])) / (2.0 * h);
            let frak1_fd = fd_x + c * p[0] / p[2] * fd_t;
            assert!(
                (f1 - frak1_fd).abs() < 1e-5 * f1.abs().max(1.0),
                "jet vs finite difference: {f1} vs {frak1_fd}"
            );
        }
    }

    // Shape and height guards.
    let off_family = RevDomainParams::new(0.25, 1.0, 2.0).unwrap();
    assert!(matches!(
        angular_ops_apply(&off_family, AngularOp::D12, &smooth, [0.1, 0.0, 0.6]),
        Err(Error::InvalidParameter(_))
    ));
    let cone = RevDomainParams::new(0.0, 1.0, 1.0).unwrap();
    let low = [0.005, 0.0, 0.02];
    assert!(rev_contains(&cone, low));
    assert!(matches!(
        angular_ops_apply(&cone, AngularOp::FrakD1, &smooth, low),
        Err(Error::SingularEvaluation(_))
    ));
    assert!(angular_ops_apply(&cone, AngularOp::D12, &smooth, low).is_ok());
    assert!(angular_ops_apply(&cone, AngularOp::PhiC, &smooth, low).is_ok());
    assert!(REV_T_MIN > 0.0);
}
