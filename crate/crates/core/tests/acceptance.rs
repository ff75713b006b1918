//! Acceptance suite: each criterion runs at its tolerance and time budget and
//! prints one PASS/FAIL line. The binary exits non-zero if any criterion fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use acx_core::chern::{chern_lambda2, chern_tensor, s6_c3_vanishing, BundleSymbol, Generator, Monomial};
use acx_core::cxlinalg::{graph_of, CMatrix, CSubspace, LinMap};
use acx_core::embed::{anti_holomorphic_part, d_pi, df, f_s6, transversality_rank, verify_4theta, Drop, DEFAULT_H};
use acx_core::flags::{
    encode_std, fixes_standard_flag, gl_act, stabilizer_check, standard_flag, transitivity_witness, FlagChart,
};
use acx_core::octonion::{Octonion, S6Point};
use acx_core::oracle::{fd_bracket, quotient_in_chart};
use acx_core::sample::{
    complex_gaussian, random_cmatrix, random_coords, random_cvector, random_flag, random_gro_subspace, random_s6,
    random_s6_tangent, random_stabilizer, random_zpoint, seeded, SampleRng,
};
use acx_core::zspace::{
    base_block, dim_n, distribution_frame, fiber_block, fiber_decode, fiber_translate, theta_eval, theta_kernel_dim,
    theta_rank, torsion_at, torsion_central, BracketOracle, Chart, PointCoords, TangentVec,
};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

const NK: [(usize, usize); 4] = [(1, 1), (1, 2), (2, 3), (3, 4)];

fn c1_dims() -> Outcome {
    let n = dim_n(3, 4).map_err(err)?;
    check(n == 46, || format!("N(3,4) = {n}"))?;
    Ok(format!("N(3,4) = {n}"))
}

fn c2_closed_form_vs_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, k) in NK {
        let chart = Arc::new(Chart::standard(n, k).map_err(err)?);
        let frame = distribution_frame(&chart, &chart.center).map_err(err)?;
        let oracle = BracketOracle::new(chart.clone()).map_err(err)?;
        for a in &frame {
            for b in &frame {
                let t = torsion_central(a, b).map_err(err)?;
                let o = oracle.eval(a, b).map_err(err)?;
                worst = worst.max((t.coeffs - o.coeffs).norm());
            }
        }
    }
    check(worst < 1e-12, || format!("max residual {worst:e}"))?;
    Ok(format!("max residual {worst:e}"))
}

fn distribution_pair(rng: &mut SampleRng, chart: &Arc<Chart>, w: &acx_core::ZPoint) -> Result<(TangentVec, TangentVec), String> {
    let frame = distribution_frame(chart, w).map_err(err)?;
    let mut combo = || frame.iter().fold(TangentVec::zero(chart.clone()), |acc, f| acc.add(&f.scale(complex_gaussian(rng))));
    Ok((combo(), combo()))
}

fn c3_transport() -> Outcome {
    let mut rng = seeded(3);
    let (n, k) = (3, 4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let chart = Arc::new(Chart::centered_at(&random_zpoint(&mut rng, n, k)).map_err(err)?);
        let w = chart
            .point(&PointCoords { x: random_cvector(&mut rng, 2 * k), z: random_coords(&mut rng, n, k, 0.3) })
            .map_err(err)?;
        let (zeta, eta) = distribution_pair(&mut rng, &chart, &w)?;
        let fd = fd_bracket(&chart, &w, &zeta, &eta, 1e-6).map_err(err)?;
        let t = quotient_in_chart(&chart, &w, &torsion_at(&w, &zeta, &eta).map_err(err)?).map_err(err)?;
        worst = worst.max((&fd - &t).norm() / t.norm());
    }
    check(worst < 1e-6, || format!("max relative error {worst:e}"))?;
    Ok(format!("max relative error {worst:e}"))
}

fn c4_group() -> Outcome {
    let mut rng = seeded(4);
    let (n, k) = (3, 4);
    let mut agree = 0;
    let mut stabilizers = 0;
    for class in 0..3 {
        for _ in 0..100 {
            let b = match class {
                0 => random_stabilizer(&mut rng, n, k),
                1 => random_cmatrix(&mut rng, 2 * k, 2 * k),
                _ => {
                    let mut b = random_stabilizer(&mut rng, n, k);
                    let (i, j) = (rng.random_range(0..2 * k), rng.random_range(0..2 * k));
                    b[(i, j)] += complex_gaussian(&mut rng);
                    b
                }
            };
            let pattern = stabilizer_check(&b, n, k).map_err(err)?;
            let fixed = fixes_standard_flag(&b, n, k).map_err(err)?;
            check(pattern == fixed, || format!("class {class}: pattern {pattern} vs fixed point {fixed}"))?;
            check(class != 0 || pattern, || "stabilizer sample rejected".into())?;
            agree += 1;
            stabilizers += pattern as usize;
        }
    }
    let mut worst: f64 = 0.0;
    let f0 = standard_flag(n, k).map_err(err)?;
    for _ in 0..100 {
        let f = random_flag(&mut rng, n, k);
        let b = transitivity_witness(&f).map_err(err)?;
        worst = worst.max(gl_act(&b, &f0).map_err(err)?.distance(&f).map_err(err)?);
    }
    check(worst < 1e-9, || format!("witness projector error {worst:e}"))?;
    Ok(format!("{agree}/300 agree ({stabilizers} in stabilizer), witness error {worst:e}"))
}

fn c5_theta() -> Outcome {
    let mut rng = seeded(5);
    let mut worst: f64 = 0.0;
    for (n, k) in [(2, 3), (3, 4)] {
        let big_n = dim_n(n, k).map_err(err)?;
        let rank = n * n * (n - 1) / 2;
        for _ in 0..20 {
            let chart = Arc::new(Chart::centered_at(&random_zpoint(&mut rng, n, k)).map_err(err)?);
            let v = random_gro_subspace(&mut rng, &chart, 1.0);
            let m = chart.fiber_dim();
            let (f, g) = (random_cmatrix(&mut rng, m, n), random_cmatrix(&mut rng, m, n));
            let alpha = complex_gaussian(&mut rng);
            let lhs = theta_eval(&chart, &v, &(&f * alpha + &g)).map_err(err)?;
            let rhs = theta_eval(&chart, &v, &f).map_err(err)? * alpha + theta_eval(&chart, &v, &g).map_err(err)?;
            worst = worst.max((&lhs - &rhs).norm() / lhs.norm().max(1.0));
            let r = theta_rank(&chart, &v).map_err(err)?;
            let kd = theta_kernel_dim(&chart, &v).map_err(err)?;
            check(r == rank, || format!("({n},{k}) rank {r}, expected {rank}"))?;
            let expected = n * (big_n - 2 * k) - rank;
            check(kd == expected, || format!("({n},{k}) kernel {kd}, expected {expected}"))?;
        }
    }
    check(worst < 1e-10, || format!("linearity residual {worst:e}"))?;
    Ok(format!("ranks 2 and 9, kernels 42 and 105, linearity residual {worst:e}"))
}

fn c6_fiber() -> Outcome {
    let mut rng = seeded(6);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let (n, k) = NK[trial % NK.len()];
        let big_n = dim_n(n, k).map_err(err)?;
        let w = fiber_block(n, k);
        let s = CSubspace::coordinate(big_n, n..2 * n);
        let t = base_block(n, k);
        let map = |m: CMatrix| LinMap::new(s.clone(), w.clone(), m).map_err(err);
        let g = map(random_cmatrix(&mut rng, w.dim(), n))?;
        let gg = graph_of(&g, &t, &w).map_err(err)?;
        let f1 = map(random_cmatrix(&mut rng, w.dim(), n))?;
        let f2 = map(random_cmatrix(&mut rng, w.dim(), n))?;
        let decode = |x: &CSubspace| fiber_decode(x, &s, &w).map(|l| l.matrix).map_err(err);
        // identity
        worst = worst.max((decode(&fiber_translate(&map(CMatrix::zeros(w.dim(), n))?, &gg).map_err(err)?)? - &g.matrix).norm());
        // compatibility
        let two = fiber_translate(&f1, &fiber_translate(&f2, &gg).map_err(err)?).map_err(err)?;
        worst = worst.max((decode(&two)? - (&f1.matrix + &f2.matrix + &g.matrix)).norm());
        // free and transitive: the unique f carrying Γ(g) to Γ(h) is h − g
        let h = map(random_cmatrix(&mut rng, w.dim(), n))?;
        let target = graph_of(&h, &t, &w).map_err(err)?;
        let moved = fiber_translate(&map(&h.matrix - &g.matrix)?, &gg).map_err(err)?;
        worst = worst.max((decode(&moved)? - decode(&target)?).norm());
        let off = fiber_translate(&f1, &gg).map_err(err)?;
        check((decode(&off)? - decode(&gg)?).norm() > 1e-3, || "nonzero translation fixed a point".into())?;
    }
    check(worst < 1e-10, || format!("max residual {worst:e}"))?;
    Ok(format!("100 fibers, max residual {worst:e}"))
}

fn s6_sample(rng: &mut SampleRng) -> Result<(S6Point, Octonion, Octonion), String> {
    let u0 = random_s6(rng);
    let u = S6Point::from_coeffs(u0).map_err(err)?;
    Ok((u, Octonion(random_s6_tangent(rng, &u0)), Octonion(random_s6_tangent(rng, &u0))))
}

fn c7_embedding() -> Outcome {
    let mut rng = seeded(7);
    let mut worst_dpi: f64 = 0.0;
    for _ in 0..50 {
        let (u, zeta, _) = s6_sample(&mut rng)?;
        let f = f_s6(&u).map_err(err)?;
        check(f.involution().approx_eq(&f, 1e-9).map_err(err)?, || "F(u) is not a real point".into())?;
        let d = df(&u, DEFAULT_H, false).map_err(err)?;
        let r = transversality_rank(&d, Drop::None);
        check(r == 92, || format!("transversality rank {r}"))?;
        let a = d.dbar(&zeta).map_err(err)?;
        worst_dpi = worst_dpi.max((d_pi(&a) - anti_holomorphic_part(&u, &zeta).map_err(err)?).norm());
    }
    check(worst_dpi < 1e-6, || format!("dπ identity residual {worst_dpi:e}"))?;
    Ok(format!("50 real points, rank 92 x50, dπ residual {worst_dpi:e}"))
}

fn c8_four_theta() -> Outcome {
    let mut rng = seeded(8);
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    let ladder = [1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3];
    for i in 0..20 {
        let (u, zeta, eta) = s6_sample(&mut rng)?;
        worst = worst.max(verify_4theta(&u, &zeta, &eta, 1e-5).map_err(err)?.residual);
        if i < 3 {
            let r: Vec<f64> = ladder
                .iter()
                .map(|&h| verify_4theta(&u, &zeta, &eta, h).map(|x| x.residual).map_err(err))
                .collect::<Result<_, _>>()?;
            ratios.extend(r.windows(2).map(|p| p[0] / p[1]));
        }
    }
    check(worst < 1e-4, || format!("max residual {worst:e}"))?;
    let (lo, hi) = ratios.iter().fold((f64::MAX, f64::MIN), |(a, b), &r| (a.min(r), b.max(r)));
    check(lo > 3.5 && hi < 4.5, || format!("halving ratios in [{lo:.3}, {hi:.3}]"))?;
    Ok(format!("max residual {worst:e} at h=1e-5, halving ratios in [{lo:.3}, {hi:.3}]"))
}

fn c9_chern() -> Outcome {
    let d = 3;
    let e = BundleSymbol::symbolic("E", 3, d);
    let l = chern_lambda2(&e).map_err(err)?;
    check(l.c(3) == e.c(3).neg().add(&e.c(1).mul(&e.c(2))), || format!("c3(Λ²E) = {}", l.c(3)))?;
    let mut pairs = 0;
    for m in 1..=4 {
        for n in 1..=4 {
            let e = BundleSymbol::symbolic("E", m, d);
            let v = BundleSymbol::symbolic("V", n, d);
            let p = chern_tensor(&e, &v).map_err(err)?;
            for k in 1..=d as usize {
                let rest = p.c(k).sub(&e.c(k).scale(n as i128)).sub(&v.c(k).scale(m as i128));
                for name in ["E", "V"] {
                    let top = Monomial::of(Generator::new(format!("c{k}({name})"), k as u32));
                    check(rest.coefficient(&top) == 0, || format!("m={m} n={n} k={k}: P = {rest}"))?;
                }
                if k == 1 {
                    check(rest.is_zero(), || format!("m={m} n={n}: c1 remainder {rest}"))?;
                }
            }
            pairs += 1;
        }
    }
    let s6 = s6_c3_vanishing();
    check(s6.is_zero(), || format!("c3 = {s6}"))?;
    Ok(format!("c3(Λ²E) = c1c2 - c3 exact, tensor structure on {pairs} rank pairs, S⁶ c3 = {s6}"))
}

fn c10_roundtrip() -> Outcome {
    let mut rng = seeded(10);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let (n, k) = NK[i % NK.len()];
        let center = random_flag(&mut rng, n, k);
        let chart = FlagChart::centered_at(&center).map_err(err)?;
        let z = random_coords(&mut rng, n, k, 0.5);
        let back = chart.encode(&chart.decode(&z).map_err(err)?).map_err(err)?;
        worst = worst.max(back.max_abs_diff(&z));
        let origin = chart.encode(&center).map_err(err)?;
        worst = worst.max(origin.norm());
    }
    for (n, k) in NK {
        worst = worst.max(encode_std(&standard_flag(n, k).map_err(err)?).map_err(err)?.norm());
    }
    check(worst < 1e-10, || format!("max error {worst:e}"))?;
    Ok(format!("200 coordinates, max error {worst:e}, centers encode to 0"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 dimension formula", Duration::from_millis(100), c1_dims),
        ("2 closed-form torsion vs bracket oracle", Duration::from_secs(1), c2_closed_form_vs_oracle),
        ("3 torsion transport vs finite differences", Duration::from_secs(10), c3_transport),
        ("4 stabilizer and transitivity", Duration::from_secs(5), c4_group),
        ("5 Θ linearity, rank and kernel", Duration::from_secs(10), c5_theta),
        ("6 affine fiber action", Duration::from_secs(2), c6_fiber),
        ("7 S⁶ embedding", Duration::from_secs(30), c7_embedding),
        ("8 N = 4θ", Duration::from_secs(60), c8_four_theta),
        ("9 Chern classes", Duration::from_secs(1), c9_chern),
        ("10 chart round trip", Duration::from_secs(2), c10_roundtrip),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; over budget {budget:?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name:<44} {:>9.1?}  {detail}", elapsed),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<44} {:>9.1?}  {detail}", elapsed)
            }
        }
    }
    println!("{} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
