//! Values checked against oracles that share no code with the engine:
//! a brute-force construction of the form basis, sphere moments from the
//! Gamma function and by Monte Carlo, and hand-computed space-form values.

use hodge_wres::curvature::{constant_curvature, sample_curvature, CurvatureJson, CurvaturePoint, OneFormJet};
use hodge_wres::exterior::{algebra, ExtEndo};
use hodge_wres::functionals::{einstein_functional, metric_functional, DiracContext};
use hodge_wres::residue::{sphere_moment, ResidueDensity};
use hodge_wres::scalar::{int, Qi};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// `dx^p ∧ dx^J`: the sign counts the indices of `J` that `dx^p` passes.
fn wedge_oracle(n: usize, p: usize) -> Vec<(u16, u16, i128)> {
    let mut out = Vec::new();
    for j in 0u16..(1 << n) {
        if j & (1 << p) != 0 {
            continue;
        }
        let passed = (0..p).filter(|&k| j & (1 << k) != 0).count();
        out.push((j | (1 << p), j, if passed % 2 == 0 { 1 } else { -1 }));
    }
    out
}

#[test]
fn raising_operators_match_brute_force_wedge() {
    for n in [2usize, 4, 6] {
        let alg = algebra(n).unwrap();
        let pos = |bits: u16| alg.basis().iter().position(|m| m.bits() == bits).unwrap();
        for p in 0..n {
            let expected = ExtEndo::from_triplets(
                n,
                wedge_oracle(n, p).into_iter().map(|(row, col, s)| (pos(row), pos(col), Qi::from_int(s))),
            );
            assert_eq!(alg.lambda_plus(p), &expected, "n={n} p={p}");
            assert_eq!(alg.lambda_minus(p), &expected.transpose(), "n={n} p={p}");
        }
    }
}

/// `Γ(k/2)` for positive integers `k`.
fn gamma_half(k: u32) -> f64 {
    let (mut g, mut x) = if k.is_multiple_of(2) { (1.0, 1.0) } else { (std::f64::consts::PI.sqrt(), 0.5) };
    while x < k as f64 / 2.0 - 1e-9 {
        g *= x;
        x += 1.0;
    }
    g
}

/// `∫_{S^{n-1}} x^e / |S^{n-1}| = Π Γ((e_i+1)/2) / π^{n/2} · Γ(n/2) / Γ((|e|+n)/2)`.
fn moment_by_gamma(e: &[u32]) -> f64 {
    if e.iter().any(|k| k % 2 == 1) {
        return 0.0;
    }
    let n = e.len() as u32;
    let total: u32 = e.iter().sum();
    let prod: f64 = e.iter().map(|&k| gamma_half(k + 1)).product();
    prod / std::f64::consts::PI.powf(n as f64 / 2.0) * gamma_half(n) / gamma_half(total + n)
}

fn to_f64(q: &hodge_wres::scalar::Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

#[test]
fn sphere_moments_match_gamma_function_formula() {
    for n in [2usize, 4, 6] {
        let mut count = 0;
        for code in 0..7u32.pow(n as u32) {
            let e: Vec<u32> = (0..n).map(|i| (code / 7u32.pow(i as u32)) % 7).collect();
            if e.iter().sum::<u32>() > 8 {
                continue;
            }
            let exact = to_f64(&sphere_moment(&e));
            let oracle = moment_by_gamma(&e);
            assert!((exact - oracle).abs() < 1e-12, "n={n} e={e:?}: {exact} vs {oracle}");
            count += 1;
        }
        assert!(count > 10);
    }
}

#[test]
fn sphere_moments_match_monte_carlo() {
    let n = 4;
    let samples = 200_000;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let points: Vec<Vec<f64>> = (0..samples)
        .map(|_| {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / r).collect()
        })
        .collect();
    for e in [[2u32, 0, 0, 0], [2, 2, 0, 0], [4, 0, 0, 0], [2, 2, 2, 0], [4, 2, 0, 0], [1, 1, 0, 0]] {
        let mean = points.iter().map(|x| x.iter().zip(e).map(|(v, k)| v.powi(k as i32)).product::<f64>()).sum::<f64>()
            / samples as f64;
        let exact = to_f64(&sphere_moment(&e));
        // |x^e| ≤ 1, so five standard errors is below 0.012
        assert!((mean - exact).abs() < 0.012, "e={e:?}: {mean} vs {exact}");
    }
}

#[test]
fn space_form_values() {
    // R_abcd = 2(δ_ac δ_bd - δ_ad δ_bc): Ric = 2(n-1)δ, R = 2n(n-1), G = (n-1)(2-n)δ
    for n in [4usize, 6] {
        let c = constant_curvature(n).unwrap();
        assert_eq!(c.scalar(), int(2 * n as i128 * (n as i128 - 1)));
        let ctx = DiracContext::new(c, None).unwrap();
        let e1 = OneFormJet::basis(n, 0);
        let r = einstein_functional(&ctx, &e1.value, &e1).unwrap();
        let g11 = (n as i128 - 1) * (2 - n as i128);
        let expected = ResidueDensity::real(n, int(1 << n) * int(g11) / int(6));
        assert_eq!(r.lhs.unwrap(), expected, "n={n}");
        let m = metric_functional(&ctx, &e1, &e1).unwrap();
        assert_eq!(m.lhs.unwrap(), ResidueDensity::real(n, int(1 << n)));
    }
}

#[test]
fn curvature_files_round_trip_and_reject_bad_tensors() {
    let c = sample_curvature(4, 21, 2).unwrap();
    let text = serde_json::to_string(&c.to_json()).unwrap();
    let back: CurvatureJson = serde_json::from_str(&text).unwrap();
    assert_eq!(CurvaturePoint::from_json(&back).unwrap(), c);

    let mut broken = c.to_json();
    broken.riemann[0][1][2][3] = "7/2".into();
    assert!(CurvaturePoint::from_json(&broken).is_err());
    let mut short = c.to_json();
    short.riemann.pop();
    assert!(CurvaturePoint::from_json(&short).is_err());
}
