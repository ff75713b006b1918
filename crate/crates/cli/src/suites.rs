//! One function per suite. Each returns its cases in a fixed order; the
//! caller marks them against the tolerance.

use std::collections::BTreeMap;
use std::sync::Arc;

use acx_core::chern::{
    chern_lambda2, chern_tensor, parse_bundle_decl, parse_expr, parse_poly, s6_c3_vanishing, BundleSymbol, GenTable,
    Generator, GradedPoly, Monomial,
};
use acx_core::cxlinalg::{graph_of, CSubspace, LinMap};
use acx_core::embed::{anti_holomorphic_part, d_pi, df, f_s6, transversality_rank, verify_4theta, Drop};
use acx_core::flags::{fixes_standard_flag, gl_act, stabilizer_check, standard_flag, transitivity_witness, ChartCoords, FlagChart};
use acx_core::octonion::{associator, j_o, nijenhuis, Octonion, S6Point};
use acx_core::oracle::{fd_bracket, fd_nijenhuis, quotient_in_chart};
use acx_core::sample::{
    complex_gaussian, random_cmatrix, random_coords, random_cvector, random_flag, random_gro_subspace, random_s6,
    random_s6_tangent, random_stabilizer, random_zpoint, seeded, SampleRng,
};
use acx_core::zspace::{
    base_block, dim_n, distribution_frame, fiber_block, fiber_decode, fiber_translate, theta_eval, theta_kernel_dim,
    theta_rank, torsion_at, torsion_central, BracketOracle, Chart, PointCoords, TangentVec,
};
use acx_core::{AcxError, Result};
use serde_json::{json, Value};

use crate::report::Case;

pub const NK: [(usize, usize); 4] = [(1, 1), (1, 2), (2, 3), (3, 4)];

fn pairs(n: Option<usize>, k: Option<usize>) -> Result<Vec<(usize, usize)>> {
    match (n, k) {
        (Some(n), Some(k)) => {
            dim_n(n, k)?;
            Ok(vec![(n, k)])
        }
        (None, None) => Ok(NK.to_vec()),
        _ => Err(AcxError::InvalidDims("give both --n and --k or neither".into())),
    }
}

pub fn dims(n: Option<usize>, k: Option<usize>) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for (n, k) in pairs(n, k)? {
        let inputs = format!("n={n},k={k}");
        let formula = dim_n(n, k)?;
        // base directions plus flag coordinates
        let counted = 2 * k + ChartCoords::len(n, k);
        cases.push(Case::new(
            format!("N({n},{k})"),
            &inputs,
            json!(counted),
            json!(formula),
            formula.abs_diff(counted) as f64,
        ));
        if (n, k) == (3, 4) {
            cases.push(Case::new("N(3,4)-published", &inputs, json!(46), json!(formula), formula.abs_diff(46) as f64));
        }
    }
    Ok(cases)
}

pub fn chart_roundtrip(seed: u64, n: Option<usize>, k: Option<usize>, samples: usize) -> Result<Vec<Case>> {
    let nk = pairs(n, k)?;
    let mut rng = seeded(seed);
    let mut cases = Vec::new();
    for i in 0..samples {
        let (n, k) = nk[i % nk.len()];
        let center = random_flag(&mut rng, n, k);
        let chart = FlagChart::centered_at(&center)?;
        let z = random_coords(&mut rng, n, k, 0.5);
        let back = chart.encode(&chart.decode(&z)?)?;
        let err = back.max_abs_diff(&z);
        let origin = chart.encode(&center)?.norm();
        cases.push(Case::new(
            format!("roundtrip-{i:03}-n{n}k{k}"),
            &format!("{:?}", z.flatten()),
            json!({"roundtrip_error": 0.0, "center_coords": 0.0}),
            json!({"roundtrip_error": err, "center_coords": origin}),
            err.max(origin),
        ));
    }
    Ok(cases)
}

fn frame_pair(rng: &mut SampleRng, chart: &Arc<Chart>, w: &acx_core::ZPoint) -> Result<(TangentVec, TangentVec)> {
    let frame = distribution_frame(chart, w)?;
    let mut combo = || frame.iter().fold(TangentVec::zero(chart.clone()), |acc, f| acc.add(&f.scale(complex_gaussian(rng))));
    Ok((combo(), combo()))
}

pub fn torsion_oracle(seed: u64, n: usize, k: usize, samples: usize, h: f64) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for (n, k) in NK {
        let chart = Arc::new(Chart::standard(n, k)?);
        let frame = distribution_frame(&chart, &chart.center)?;
        let oracle = BracketOracle::new(chart.clone())?;
        let mut worst: f64 = 0.0;
        for a in &frame {
            for b in &frame {
                worst = worst.max((torsion_central(a, b)?.coeffs - oracle.eval(a, b)?.coeffs).norm());
            }
        }
        cases.push(Case::new(
            format!("central-n{n}k{k}"),
            &format!("standard chart n={n},k={k}"),
            json!(0.0),
            json!(worst),
            worst,
        ));
    }
    let mut rng = seeded(seed);
    for i in 0..samples {
        let chart = Arc::new(Chart::centered_at(&random_zpoint(&mut rng, n, k))?);
        let pc = PointCoords { x: random_cvector(&mut rng, 2 * k), z: random_coords(&mut rng, n, k, 0.3) };
        let inputs = format!("{:?}|{:?}", pc.x.as_slice(), pc.z.flatten());
        let w = chart.point(&pc)?;
        let (zeta, eta) = frame_pair(&mut rng, &chart, &w)?;
        let fd = fd_bracket(&chart, &w, &zeta, &eta, h)?;
        let t = quotient_in_chart(&chart, &w, &torsion_at(&w, &zeta, &eta)?)?;
        let rel = (&fd - &t).norm() / t.norm().max(f64::MIN_POSITIVE);
        cases.push(Case::new(
            format!("transport-{i:03}"),
            &inputs,
            json!({"fd_norm": fd.norm()}),
            json!({"torsion_norm": t.norm()}),
            rel,
        ));
    }
    Ok(cases)
}

pub fn group_action(seed: u64, n: usize, k: usize, samples: usize) -> Result<Vec<Case>> {
    dim_n(n, k)?;
    let mut rng = seeded(seed);
    let mut cases = Vec::new();
    for (class, name) in ["stabilizer", "generic", "perturbed"].iter().enumerate() {
        let mut disagree = 0usize;
        let mut members = 0usize;
        let mut inputs = String::new();
        for i in 0..samples {
            let b = match class {
                0 => random_stabilizer(&mut rng, n, k),
                1 => random_cmatrix(&mut rng, 2 * k, 2 * k),
                _ => {
                    let mut b = random_stabilizer(&mut rng, n, k);
                    let d = 2 * k;
                    b[((i * 5) % d, (i * 3 + 1) % d)] += complex_gaussian(&mut rng);
                    b
                }
            };
            inputs.push_str(&format!("{:?};", b.trace()));
            let pattern = stabilizer_check(&b, n, k)?;
            disagree += (pattern != fixes_standard_flag(&b, n, k)?) as usize;
            members += pattern as usize;
        }
        let stab_rejected = if class == 0 { samples - members } else { 0 };
        cases.push(Case::new(
            format!("stabilizer-{name}"),
            &inputs,
            json!({"disagreements": 0}),
            json!({"disagreements": disagree, "in_stabilizer": members}),
            (disagree + stab_rejected) as f64,
        ));
    }
    let f0 = standard_flag(n, k)?;
    for i in 0..samples {
        let f = random_flag(&mut rng, n, k);
        let b = transitivity_witness(&f)?;
        let err = gl_act(&b, &f0)?.distance(&f)?;
        cases.push(Case::new(
            format!("witness-{i:03}"),
            &format!("{:?}", f.sigp.basis().as_slice()),
            json!(0.0),
            json!(err),
            err,
        ));
    }
    Ok(cases)
}

pub fn theta_rank_suite(seed: u64, n: Option<usize>, k: Option<usize>, samples: usize) -> Result<Vec<Case>> {
    let nk = match (n, k) {
        (None, None) => vec![(2, 3), (3, 4)],
        _ => pairs(n, k)?,
    };
    let mut rng = seeded(seed);
    let mut cases = Vec::new();
    for (n, k) in nk {
        let big_n = dim_n(n, k)?;
        let rank = n * n * n.saturating_sub(1) / 2;
        let kernel = n * (big_n - 2 * k) - rank;
        for i in 0..samples {
            let chart = Arc::new(Chart::centered_at(&random_zpoint(&mut rng, n, k))?);
            let v = random_gro_subspace(&mut rng, &chart, 1.0);
            let m = chart.fiber_dim();
            let (f, g) = (random_cmatrix(&mut rng, m, n), random_cmatrix(&mut rng, m, n));
            let alpha = complex_gaussian(&mut rng);
            let lhs = theta_eval(&chart, &v, &(&f * alpha + &g))?;
            let rhs = theta_eval(&chart, &v, &f)? * alpha + theta_eval(&chart, &v, &g)?;
            let lin = (&lhs - &rhs).norm() / lhs.norm().max(1.0);
            let r = theta_rank(&chart, &v)?;
            let kd = theta_kernel_dim(&chart, &v)?;
            cases.push(Case::new(
                format!("theta-n{n}k{k}-{i:03}"),
                &format!("{:?}", v.basis().as_slice()),
                json!({"rank": rank, "kernel_dim": kernel, "linearity": 0.0}),
                json!({"rank": r, "kernel_dim": kd, "linearity": lin}),
                lin.max(r.abs_diff(rank) as f64).max(kd.abs_diff(kernel) as f64),
            ));
        }
    }
    Ok(cases)
}

pub fn affine_fiber(seed: u64, samples: usize) -> Result<Vec<Case>> {
    let mut rng = seeded(seed);
    let mut cases = Vec::new();
    for i in 0..samples {
        let (n, k) = NK[i % NK.len()];
        let big_n = dim_n(n, k)?;
        let w = fiber_block(n, k);
        let s = CSubspace::coordinate(big_n, n..2 * n);
        let t = base_block(n, k);
        let map = |m| LinMap::new(s.clone(), w.clone(), m);
        let mats: Vec<_> = (0..4).map(|_| random_cmatrix(&mut rng, w.dim(), n)).collect();
        let g = map(mats[0].clone())?;
        let (f1, f2, h) = (map(mats[1].clone())?, map(mats[2].clone())?, map(mats[3].clone())?);
        let gg = graph_of(&g, &t, &w)?;
        let decode = |x: &CSubspace| fiber_decode(x, &s, &w).map(|l| l.matrix);
        let zero = map(mats[0].scale(0.0))?;
        let identity = (decode(&fiber_translate(&zero, &gg)?)? - &g.matrix).norm();
        let two = fiber_translate(&f1, &fiber_translate(&f2, &gg)?)?;
        let compat = (decode(&two)? - (&f1.matrix + &f2.matrix + &g.matrix)).norm();
        let target = graph_of(&h, &t, &w)?;
        let moved = fiber_translate(&map(&h.matrix - &g.matrix)?, &gg)?;
        let transitive = (decode(&moved)? - decode(&target)?).norm();
        // freeness: a nonzero translation moves the point by its own size
        let shift = (decode(&fiber_translate(&f1, &gg)?)? - &g.matrix - &f1.matrix).norm();
        let residual = identity.max(compat).max(transitive).max(shift);
        cases.push(Case::new(
            format!("fiber-{i:03}-n{n}k{k}"),
            &format!("{:?}", mats.iter().map(|m| m.as_slice().to_vec()).collect::<Vec<_>>()),
            json!({"identity": 0.0, "compatibility": 0.0, "transitivity": 0.0, "freeness": 0.0}),
            json!({"identity": identity, "compatibility": compat, "transitivity": transitive, "freeness": shift}),
            residual,
        ));
    }
    Ok(cases)
}

fn s6_sample(rng: &mut SampleRng) -> Result<(S6Point, Octonion, Octonion, String)> {
    let c = random_s6(rng);
    let u = S6Point::from_coeffs(c)?;
    let (z, e) = (random_s6_tangent(rng, &c), random_s6_tangent(rng, &c));
    Ok((u, Octonion(z), Octonion(e), format!("{c:?}|{z:?}|{e:?}")))
}

pub fn nijenhuis_suite(seed: u64, samples: usize, h: f64) -> Result<Vec<Case>> {
    let mut rng = seeded(seed);
    let mut cases = Vec::new();
    for i in 0..samples {
        let (u, z, e, inputs) = s6_sample(&mut rng)?;
        let n = nijenhuis(&u, &z, &e)?;
        let scale = n.norm().max(f64::MIN_POSITIVE);
        let fd = fd_nijenhuis(&u, &z, &e, h)?;
        let assoc = associator(&z, &e, u.u()).scale(-2.0);
        let anti = n + nijenhuis(&u, &e, &z)?;
        // N(Jζ, η) = −J N(ζ, η)
        let jz = j_o(&u, &z)?;
        let twist = nijenhuis(&u, &jz, &e)? + n * *u.u();
        let r = [(fd - n).norm(), (assoc - n).norm(), anti.norm(), twist.norm()].map(|x| x / scale);
        cases.push(Case::new(
            format!("nijenhuis-{i:03}"),
            &inputs,
            json!({"vector_field_fd": 0.0, "minus_two_associator": 0.0, "antisymmetry": 0.0, "anti_linearity": 0.0}),
            json!({"vector_field_fd": r[0], "minus_two_associator": r[1], "antisymmetry": r[2], "anti_linearity": r[3]}),
            r.into_iter().fold(0.0, f64::max),
        ));
    }
    Ok(cases)
}

pub fn embed_s6(seed: u64, samples: usize, h: f64) -> Result<Vec<Case>> {
    let mut rng = seeded(seed);
    let mut cases = Vec::new();
    for i in 0..samples {
        let (u, z, _, inputs) = s6_sample(&mut rng)?;
        let f = f_s6(&u)?;
        let real = f.flag.distance(&f.involution().flag)?;
        let d = df(&u, h, false)?;
        let rank = transversality_rank(&d, Drop::None);
        let dpi = (d_pi(&d.dbar(&z)?) - anti_holomorphic_part(&u, &z)?).norm();
        cases.push(Case::new(
            format!("embed-{i:03}"),
            &inputs,
            json!({"real_point": 0.0, "transversality_rank": 92, "dpi_identity": 0.0}),
            json!({"real_point": real, "transversality_rank": rank, "dpi_identity": dpi}),
            real.max(dpi).max(rank.abs_diff(92) as f64),
        ));
    }
    Ok(cases)
}

pub fn verify_4theta_suite(seed: u64, samples: usize, h: f64) -> Result<Vec<Case>> {
    let mut rng = seeded(seed);
    let mut cases = Vec::new();
    for i in 0..samples {
        let (u, z, e, inputs) = s6_sample(&mut rng)?;
        let r = verify_4theta(&u, &z, &e, h)?;
        cases.push(Case::new(
            format!("four-theta-{i:03}"),
            &inputs,
            json!(r.lhs.0),
            json!(r.rhs.0),
            r.residual,
        ));
    }
    Ok(cases)
}

/// Terms where the polynomials differ.
fn poly_distance(a: &GradedPoly, b: &GradedPoly) -> f64 {
    a.sub(b).terms().len() as f64
}

fn poly_case(id: String, inputs: &str, expected: &GradedPoly, observed: &GradedPoly) -> Case {
    Case::new(id, inputs, json!(expected.to_string()), json!(observed.to_string()), poly_distance(expected, observed))
}

/// Built-in Chern identities.
pub fn chern_builtin() -> Result<Vec<Case>> {
    let d = 3;
    let mut cases = Vec::new();
    let e = BundleSymbol::symbolic("E", 3, d);
    let expected = e.c(3).neg().add(&e.c(1).mul(&e.c(2)));
    cases.push(poly_case("lambda2-rank3-c3".into(), "E:rank=3", &expected, &chern_lambda2(&e)?.c(3)));
    let l = BundleSymbol::symbolic("E", 2, d);
    cases.push(poly_case("lambda2-rank2-c1".into(), "E:rank=2", &l.c(1), &chern_lambda2(&l)?.c(1)));
    for m in 1..=4 {
        for n in 1..=4 {
            let e = BundleSymbol::symbolic("E", m, d);
            let v = BundleSymbol::symbolic("V", n, d);
            let p = chern_tensor(&e, &v)?;
            let inputs = format!("E:rank={m},V:rank={n}");
            let c1 = e.c(1).scale(n as i128).add(&v.c(1).scale(m as i128));
            cases.push(poly_case(format!("tensor-c1-m{m}n{n}"), &inputs, &c1, &p.c(1)));
            for k in 2..=d as usize {
                let rest = p.c(k).sub(&e.c(k).scale(n as i128)).sub(&v.c(k).scale(m as i128));
                let top: Vec<i128> = ["E", "V"]
                    .iter()
                    .map(|b| rest.coefficient(&Monomial::of(Generator::new(format!("c{k}({b})"), k as u32))))
                    .collect();
                let bad = top.iter().filter(|&&c| c != 0).count();
                cases.push(Case::new(
                    format!("tensor-top-free-m{m}n{n}k{k}"),
                    &inputs,
                    json!([0, 0]),
                    json!(top),
                    bad as f64,
                ));
            }
        }
    }
    cases.push(poly_case("s6-c3".into(), "T:rank=3,c=[0,0,t]", &GradedPoly::zero(d), &s6_c3_vanishing()));
    Ok(cases)
}

/// Chern classes of `expr` over the declared bundles, checked against
/// `k=POLY` expectations where given.
pub fn chern_expr(expr: &str, bundles: &[String], dim: u32, expect: &[String]) -> Result<Vec<Case>> {
    let mut table = GenTable::default();
    let mut env = BTreeMap::new();
    for decl in bundles {
        let (name, b) = parse_bundle_decl(decl, dim, &mut table)?;
        env.insert(name, b);
    }
    let parsed = parse_expr(expr)?;
    let result = parsed.eval(&env)?;
    let mut expectations = BTreeMap::new();
    for x in expect {
        let (k, p) = x.split_once('=').ok_or_else(|| AcxError::Parse(format!("expected k=POLY, got `{x}`")))?;
        let k: usize = k.trim().parse().map_err(|_| AcxError::Parse(format!("bad class index in `{x}`")))?;
        if k == 0 || k > dim as usize {
            return Err(AcxError::Parse(format!("class index {k} outside 1..={dim}")));
        }
        expectations.insert(k, parse_poly(p, &table, dim)?);
    }
    let inputs = format!("{expr}|{}|{dim}", bundles.join(";"));
    let mut cases = Vec::new();
    for k in 1..=dim as usize {
        let observed = result.c(k);
        let case = match expectations.get(&k) {
            Some(exp) => poly_case(format!("c{k}"), &inputs, exp, &observed),
            None => Case::new(format!("c{k}"), &inputs, Value::Null, json!(observed.to_string()), 0.0),
        };
        cases.push(case);
    }
    Ok(cases)
}
