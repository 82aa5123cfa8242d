use delay_logistic_core::delay_map::{fixed_point, next_value};
use delay_logistic_core::discretization::{forward_step, ratio_step, scheme_stability};
use delay_logistic_core::jury::reduce_row;
use delay_logistic_core::*;
use proptest::prelude::*;

fn poly(c: Vec<f64>) -> Polynomial {
    Polynomial::new(c).unwrap()
}

fn nontrivial_poly(tau: usize, r: f64) -> Polynomial {
    char_poly(
        &DelayParams::new(r, 1.0, tau).unwrap(),
        FixedPoint::NonTrivial,
    )
}

fn coeffs_strategy() -> impl Strategy<Value = Vec<f64>> {
    (1usize..=8).prop_flat_map(|deg| {
        (
            prop_oneof![-2.0..-0.05f64, 0.05..2.0f64],
            prop::collection::vec(-2.0..2.0f64, deg),
        )
            .prop_map(|(lead, rest)| {
                let mut c = vec![lead];
                c.extend(rest);
                c
            })
    })
}

proptest! {
    #[test]
    fn roots_have_small_residual(c in coeffs_strategy()) {
        // Leading coefficient is kept away from zero by the strategy only
        // loosely (|a_0| >= 0.05), so roots up to ~80 in modulus occur.
        let p = poly(c);
        let rs = p.roots().unwrap();
        prop_assert_eq!(rs.roots.len(), p.degree());
        for z in &rs.roots {
            // Backward-error form: |P(z)| against Σ|a_i||z|^(m-i), which is
            // what rounding in Horner's rule can reach for large |z|.
            let scale = p.coeffs().iter().fold(0.0, |acc, c| acc * z.norm() + c.abs());
            prop_assert!(p.eval(*z).norm() <= 1e-9 * scale.max(1.0), "{} at {}", p, z);
        }
    }

    #[test]
    fn normalize_preserves_spectral_radius(c in coeffs_strategy()) {
        let p = poly(c);
        let a = p.spectral_radius().unwrap();
        let b = p.normalize_leading().unwrap().spectral_radius().unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn jury_matches_oracle(c in coeffs_strategy().prop_filter("degree >= 2", |c| c.len() >= 3)) {
        let p = poly(c).normalize_leading().unwrap();
        let rho = p.spectral_radius().unwrap();
        prop_assume!((rho - 1.0).abs() > 1e-6);
        let v = jury_verdict(&p);
        let want = if rho < 1.0 { StabilityStatus::Stable } else { StabilityStatus::Unstable };
        prop_assert_eq!(v.status, want, "{} rho={}", p, rho);
    }

    #[test]
    fn table_rows_are_recomputable(c in coeffs_strategy().prop_filter("degree >= 2", |c| c.len() >= 3)) {
        let p = poly(c).normalize_leading().unwrap();
        if let Ok(t) = JuryTable::build(&p) {
            for j in 0..t.rows.len() - 1 {
                let prev = &t.rows[j];
                let m = prev.len() - 1;
                prop_assert_eq!(t.rows[j + 1].len(), prev.len() - 1);
                for k in 0..m {
                    let det = prev[m] * prev[k + 1] - prev[m - 1 - k] * prev[0];
                    prop_assert_eq!(t.rows[j + 1][k].to_bits(), det.to_bits());
                }
            }
            prop_assert_eq!(t.rows.last().unwrap().len(), 3);
        }
    }

    #[test]
    fn fixed_points_are_invariant(r in -3.0..3.0f64, k in 0.1..1e4f64, tau in 0usize..=20) {
        let p = DelayParams::new(r, k, tau).unwrap();
        let (x1, x2) = fixed_points(&p);
        prop_assert_eq!(step(&p, &x1), x1);
        prop_assert_eq!(step(&p, &x2), x2);
    }

    #[test]
    fn step_shifts_history(r in -3.0..3.0f64, hist in prop::collection::vec(-5.0..5.0f64, 1..12)) {
        let p = DelayParams::new(r, 2.0, hist.len() - 1).unwrap();
        let s = StateVector::new(&p, hist.clone()).unwrap();
        let n = step(&p, &s);
        prop_assert_eq!(&n.as_slice()[..hist.len() - 1], &hist[1..]);
        prop_assert_eq!(n.newest(), next_value(&p, hist[0], hist[hist.len() - 1]));
    }

    #[test]
    fn trivial_char_poly_radius(r in -3.0..3.0f64, tau in 0usize..=10) {
        let p = char_poly(&DelayParams::new(r, 1.0, tau).unwrap(), FixedPoint::Trivial);
        let rho = p.spectral_radius().unwrap();
        prop_assert!((rho - (1.0 + r).abs()).abs() <= 1e-9);
    }

    #[test]
    fn schemes_fix_zero_and_capacity(r in 0.001..50.0f64, k in 0.1..1e4f64, h in 0.01..5.0f64) {
        let f = SchemeParams::new(r, k, h, Scheme::Forward).unwrap();
        let q = SchemeParams::new(r, k, h, Scheme::Ratio).unwrap();
        prop_assert_eq!(forward_step(&f, 0.0).unwrap(), 0.0);
        prop_assert!((forward_step(&f, k).unwrap() - k).abs() <= 1e-12 * k);
        prop_assert_eq!(ratio_step(&q, 0.0).unwrap(), 0.0);
        prop_assert!((ratio_step(&q, k).unwrap() - k).abs() <= 1e-12 * k);
    }

    #[test]
    fn forward_scheme_is_zero_delay_map(r in -2.0..4.0f64, k in 0.1..100.0f64, x in -10.0..200.0f64) {
        let f = SchemeParams::new(r, k, 1.0, Scheme::Forward).unwrap();
        let d = DelayParams::new(r, k, 0).unwrap();
        let next = step(&d, &StateVector::constant(&d, x));
        prop_assert_eq!(forward_step(&f, x).unwrap().to_bits(), next.newest().to_bits());
    }
}

/// Central finite differences of `step` at a state.
fn fd_jacobian(p: &DelayParams, at: &StateVector) -> Vec<Vec<f64>> {
    let n = p.dim();
    let h = 1e-6 * p.capacity();
    let mut j = vec![vec![0.0; n]; n];
    for col in 0..n {
        let mut plus = at.as_slice().to_vec();
        let mut minus = at.as_slice().to_vec();
        plus[col] += h;
        minus[col] -= h;
        let fp = step(p, &StateVector::new(p, plus).unwrap());
        let fm = step(p, &StateVector::new(p, minus).unwrap());
        for (row, (a, b)) in j.iter_mut().zip(fp.as_slice().iter().zip(fm.as_slice())) {
            row[col] = (a - b) / (2.0 * h);
        }
    }
    j
}

#[test]
fn jacobian_matches_finite_differences() {
    let mut seed = 0x2545F4914F6CDD1Du64;
    let mut uniform = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..100 {
        let r = -2.0 + 4.0 * uniform();
        let k = 0.5 + 3000.0 * uniform();
        let tau = (uniform() * 13.0) as usize;
        let p = DelayParams::new(r, k, tau).unwrap();
        for point in [FixedPoint::Trivial, FixedPoint::NonTrivial] {
            let analytic = jacobian(&p, point);
            let numeric = fd_jacobian(&p, &fixed_point(&p, point));
            for (i, row) in numeric.iter().enumerate() {
                for (c, &want) in row.iter().enumerate() {
                    let got = analytic.get(i, c);
                    let scale = want.abs().max(1.0);
                    assert!(
                        (got - want).abs() <= 1e-6 * scale,
                        "r={r} K={k} tau={tau} {point:?} ({i},{c}): {got} vs {want}"
                    );
                }
            }
        }
    }
}

#[test]
fn jacobian_example_nontrivial_tau2() {
    let p = DelayParams::new(0.5, 1.0, 2).unwrap();
    let numeric = fd_jacobian(&p, &fixed_point(&p, FixedPoint::NonTrivial));
    let want = [-0.5, 0.0, 1.0];
    for c in 0..3 {
        assert!((numeric[2][c] - want[c]).abs() < 1e-6);
        assert_eq!(jacobian(&p, FixedPoint::NonTrivial).get(2, c), want[c]);
    }
}

// Polynomials in ascending order for the cofactor oracle.
fn pmul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn padd(a: &[f64], b: &[f64], sign: f64) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += sign * y;
    }
    out
}

fn cofactor_det(m: &[Vec<Vec<f64>>]) -> Vec<f64> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = vec![0.0];
    for col in 0..n {
        if m[0][col].iter().all(|&c| c == 0.0) {
            continue;
        }
        let minor: Vec<Vec<Vec<f64>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != col)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = pmul(&m[0][col], &cofactor_det(&minor));
        acc = padd(&acc, &term, if col % 2 == 0 { 1.0 } else { -1.0 });
    }
    acc
}

fn sorted(mut z: Vec<Complex>) -> Vec<Complex> {
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    z
}

#[test]
fn char_poly_matches_cofactor_expansion() {
    for tau in 0..=5 {
        for r in [0.05, 0.3, 0.77, 1.4] {
            let p = DelayParams::new(r, 3.0, tau).unwrap();
            let j = jacobian(&p, FixedPoint::NonTrivial);
            let n = j.dim();
            let m: Vec<Vec<Vec<f64>>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|c| {
                            let diag = if i == c { 1.0 } else { 0.0 };
                            vec![-j.get(i, c), diag]
                        })
                        .collect()
                })
                .collect();
            let mut det = cofactor_det(&m);
            while det.len() > n + 1 {
                det.pop();
            }
            det.reverse();
            let oracle = sorted(poly(det).roots().unwrap().roots);
            let closed = sorted(char_poly(&p, FixedPoint::NonTrivial).roots().unwrap().roots);
            assert_eq!(oracle.len(), closed.len());
            // Greedy nearest matching.
            let mut used = vec![false; closed.len()];
            for z in &oracle {
                let (idx, d) = closed
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !used[*i])
                    .map(|(i, w)| (i, (*z - *w).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap();
                used[idx] = true;
                assert!(d <= 1e-8, "tau {tau} r {r}: {d}");
            }
        }
    }
}

// For small r a real root sits just below 1 and moves inward as r grows,
// so ρ(r) first falls, then rises. It is unimodal on (0, 2], continuous, and
// increasing from f(τ) on; that gives a single crossing of |λ| = 1.
#[test]
fn spectral_radius_is_unimodal_and_increasing_past_boundary() {
    for tau in 0..=10 {
        let f = critical_r(tau, 1e-10).unwrap().r_critical;
        let grid: Vec<(f64, f64)> = (1..=400)
            .map(|i| {
                let r = 2.0 * i as f64 / 400.0;
                (r, nontrivial_poly(tau, r).spectral_radius().unwrap())
            })
            .collect();
        let mut rising = false;
        for w in grid.windows(2) {
            let ((_, a), (r, b)) = (w[0], w[1]);
            assert!((b - a).abs() < 0.1, "tau {tau} r {r}: jump {a} -> {b}");
            if b > a + 1e-9 {
                rising = true;
            }
            if rising || r > f {
                assert!(b >= a - 1e-9, "tau {tau} r {r}: {b} < {a}");
            }
        }
    }
}

#[test]
fn spectral_radius_dips_for_small_r() {
    // τ = 0: ρ = |1 - r|.
    let rho = |r: f64| nontrivial_poly(0, r).spectral_radius().unwrap();
    assert!((rho(0.5) - 0.5).abs() < 1e-15);
    assert!(rho(0.5) < rho(0.1));
    // τ = 1: real roots (1 ± √(1-4r))/2 for r < 1/4, modulus √r above.
    let rho = |r: f64| nontrivial_poly(1, r).spectral_radius().unwrap();
    assert!((rho(0.09) - 0.9).abs() < 1e-12);
    assert!((rho(0.64) - 0.8).abs() < 1e-12);
}

#[test]
fn sparse_induction_holds_on_grid() {
    for tau in 2..=10 {
        let f = critical_r(tau, 1e-10).unwrap().r_critical;
        for i in 1..=20 {
            let r = f * i as f64 / 21.0;
            let rep = verify_sparse_induction(tau, r).unwrap();
            assert!(rep.sparse_pattern_holds, "tau {tau} r {r}");
            assert!(rep.recurrences_hold, "tau {tau} r {r}");
            assert!(rep.max_discrepancy <= 1e-9);
            assert_eq!(rep.rows_checked, tau - 1);
        }
    }
}

#[test]
fn reduction_of_sparse_row_stays_sparse() {
    let row = [0.3, 0.0, 0.0, -0.8, 0.6];
    let next = reduce_row(&row);
    assert_eq!(
        next,
        vec![0.8 * 0.3, 0.0, 0.6 * -0.8, 0.6 * 0.6 - 0.3 * 0.3]
    );
}

// f(τ) frozen from an independent numpy.roots bisection (200 halvings).
const NUMPY_BOUNDARY: [f64; 18] = [
    1.9999999999999998,
    0.9999999999999996,
    0.6180339887498955,
    0.44504186791262823,
    0.3472963553338598,
    0.28462967654657095,
    0.24107336051064812,
    0.2090569265353071,
    0.18453671892660375,
    0.16515869094466495,
    0.14946018717284856,
    0.13648482672934265,
    0.1255810390586243,
    0.11628965782095384,
    0.10827781717083197,
    0.10129833767742535,
    0.09516383164748454,
    0.08972966070103076,
];

#[test]
fn boundary_matches_independent_values() {
    let table = boundary_table(17, 1e-10).unwrap();
    assert!(table.monotone_decreasing);
    for (pt, want) in table.points.iter().zip(NUMPY_BOUNDARY) {
        assert!((pt.r_critical - want).abs() < 1e-8, "tau {}", pt.tau);
        // 2 cos(τπ/(2τ+1)) agrees with the numeric boundary.
        let closed = 2.0 * (pt.tau as f64 * std::f64::consts::PI / (2 * pt.tau + 1) as f64).cos();
        assert!((pt.r_critical - closed).abs() < 1e-8, "tau {}", pt.tau);
    }
}

#[test]
fn jury_and_oracle_boundaries_agree() {
    let tol = 1e-10;
    for tau in 0..=12 {
        let a = sweep::critical_r_with(tau, tol, Method::Jury).unwrap();
        let b = sweep::critical_r_with(tau, tol, Method::Oracle).unwrap();
        assert!(
            (a.r_critical - b.r_critical).abs() <= 100.0 * tol,
            "tau {tau}"
        );
        assert_eq!(b.method, Method::Oracle);
    }
}

#[test]
fn long_delays_fall_back_cleanly() {
    // Reduced rows leave double range past τ ≈ 16; the verdict must still be
    // right (via the oracle) rather than silently wrong.
    for tau in [18, 20, 25, 30] {
        let f = critical_r(tau, 1e-10).unwrap().r_critical;
        let closed = 2.0 * (tau as f64 * std::f64::consts::PI / (2 * tau + 1) as f64).cos();
        assert!((f - closed).abs() < 1e-8, "tau {tau}: {f} vs {closed}");
    }
}

#[test]
fn boundary_is_sharp() {
    for tau in 0..=10 {
        let f = critical_r(tau, 1e-10).unwrap().r_critical;
        for m in [Method::Jury, Method::Oracle] {
            assert!(is_stable_nontrivial(tau, f - 1e-6, m).unwrap().is_stable());
            assert_eq!(
                is_stable_nontrivial(tau, f + 1e-6, m).unwrap().status,
                StabilityStatus::Unstable
            );
        }
    }
}

#[test]
fn strictly_decreasing_to_fifteen() {
    let t = boundary_table(15, 1e-10).unwrap();
    assert!(t.min_decrease().unwrap() > 1e-4);
}

#[test]
fn forward_scheme_flips_at_two_over_h() {
    for h in [0.1, 0.5, 1.0, 2.0] {
        let at = |r: f64| {
            let p = SchemeParams::new(r, 1.0, h, Scheme::Forward).unwrap();
            scheme_stability(&p).nontrivial.verdict.status
        };
        assert_eq!(at(2.0 / h - 1e-6), StabilityStatus::Stable);
        assert_eq!(at(2.0 / h + 1e-6), StabilityStatus::Unstable);
    }
}

#[test]
fn ratio_scheme_stable_on_log_grid() {
    for i in 0..=60 {
        let r = 10f64.powf(-3.0 + i as f64 * 0.1);
        let p = SchemeParams::new(r, 1.0, 1.0, Scheme::Ratio).unwrap();
        let s = scheme_stability(&p);
        assert!(s.nontrivial.verdict.is_stable(), "r = {r}");
        assert_eq!(s.trivial.verdict.status, StabilityStatus::Unstable);
    }
}

#[test]
fn blowfly_run_oscillates() {
    let p = DelayParams::new(0.106, 2800.0, 17).unwrap();
    let t = simulate(&p, &StateVector::constant(&p, 1400.0), 2000).unwrap();
    assert!(t.is_complete());
    let tail: Vec<f64> = t.values().rev().take(500).collect();
    let mean = tail.iter().sum::<f64>() / 500.0;
    let sd = (tail.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 500.0).sqrt();
    assert!(sd > 0.01 * 2800.0);
    assert!(t.values().all(|x| x.is_finite() && x > 0.0));
}
