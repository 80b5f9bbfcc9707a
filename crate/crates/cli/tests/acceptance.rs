//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use unfold_core::bform::{
    admissible_residues, epsilon_profile, planar_integral, IntegralParams, DEFAULT_TOL,
};
use unfold_core::certify::{full_rank_certified, has_unstable_pair, triples, Filters};
use unfold_core::digraph::{
    contract_loop, embedded_loops, is_strongly_connected, loop_space_dim,
    random_strongly_connected, DEFAULT_LOOP_CAP,
};
use unfold_core::hodge::{stratum, EigenProfile};
use unfold_core::report::{StatsReport, EXPECTED_FRACTION_49, EXPECTED_TOTAL_49};
use unfold_core::{make_certificate, AngleSystem, GcdPolicy, Verdict};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!("{what} took {elapsed:.2?}, limit {limit:?}")
    })
}

fn tri(q1: i64, q2: i64, q3: i64) -> AngleSystem {
    AngleSystem::triangle(q1, q2, q3, GcdPolicy::Strict).unwrap()
}

fn dense_table() -> Check {
    let golden = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/dense_table_k25.txt"),
    )
    .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_unfold"))
        .args(["table", "--k-max", "25"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || {
        format!("exit status {}", out.status)
    })?;
    let table = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    ensure(table == golden, || {
        format!("table differs from the golden file:\n{table}")
    })?;
    let counts: Vec<usize> = table.lines().map(|l| l.matches('(').count()).collect();
    ensure(counts == [3, 3, 1, 10, 19, 5, 32, 29], || {
        format!("per-k counts {counts:?}")
    })?;
    within(elapsed, Duration::from_secs(1), "table")?;
    Ok(format!(
        "102 triples, per-k counts {counts:?}, {elapsed:.2?}"
    ))
}

fn statistic() -> Check {
    let start = Instant::now();
    let report = StatsReport::compute(49).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let all = &report.all_triples;
    let prim = &report.primitive_only;
    let summary = format!(
        "all triples: total {} dense {} ({:.4}); gcd 1 only: total {} dense {} ({:.4}); {elapsed:.2?}",
        all.total,
        all.dense,
        all.dense_fraction(),
        prim.total,
        prim.dense,
        prim.dense_fraction()
    );
    ensure(all.total == EXPECTED_TOTAL_49, || {
        format!("count mismatch, flagged for review: {summary}")
    })?;
    ensure(all.dense_fraction() >= EXPECTED_FRACTION_49, || {
        format!("fraction too low: {summary}")
    })?;
    within(elapsed, Duration::from_secs(5), "stats")?;
    Ok(summary)
}

fn spot_certificates() -> Check {
    for (q, k) in [((1, 2, 8), 11), ((4, 5, 6), 15)] {
        let c = make_certificate(&tri(q.0, q.1, q.2)).map_err(|e| e.to_string())?;
        ensure(c.full_rank_certified && c.sys.k() == k, || {
            format!("{q:?} not certified")
        })?;
        ensure(c.verdict == Verdict::DenseInStratumComponent, || {
            format!("{q:?}: {}", c.verdict)
        })?;
    }
    let c = make_certificate(&tri(1, 2, 4)).map_err(|e| e.to_string())?;
    ensure(!c.full_rank_certified && c.rank_lower_bound == 1, || {
        format!(
            "(1,2,4): full rank {} bound {}",
            c.full_rank_certified, c.rank_lower_bound
        )
    })?;
    let s = tri(1, 2, 10);
    let c = make_certificate(&s).map_err(|e| e.to_string())?;
    ensure(has_unstable_pair(&s) && c.rank_lower_bound >= 2, || {
        format!("(1,2,10): rank bound {}", c.rank_lower_bound)
    })?;
    Ok("(1,2,8) and (4,5,6) certified; (1,2,4) bound 1; (1,2,10) bound 2".into())
}

fn genus_consistency() -> Check {
    let start = Instant::now();
    let filters = Filters {
        odd_k: false,
        distinct_q: false,
        gcd_one: true,
    };
    let all: Vec<[u64; 3]> = triples(200, filters).collect();
    let bad: Vec<String> = all
        .par_iter()
        .filter_map(|&q| {
            let k = q.iter().sum::<u64>();
            let sys =
                AngleSystem::triangle(q[0] as i64, q[1] as i64, q[2] as i64, GcdPolicy::Strict)
                    .ok()?;
            let eigen = EigenProfile::of(&sys).genus();
            let gcds: u64 = q.iter().map(|x| x.gcd(&k)).sum();
            let rh = 1 + (k - gcds) / 2;
            let orders = stratum(&sys).ok()?.total_order();
            (eigen != rh || orders + 2 != 2 * eigen)
                .then(|| format!("{q:?}: eigen {eigen} rh {rh} orders {orders}"))
        })
        .collect();
    let elapsed = start.elapsed();
    ensure(bad.is_empty(), || bad[..bad.len().min(5)].join("; "))?;
    within(elapsed, Duration::from_secs(10), "genus sweep")?;
    Ok(format!(
        "{} triples with k <= 200, {elapsed:.2?}",
        all.len()
    ))
}

fn loop_space_suite() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let graphs: Vec<_> = (0..200)
        .map(|_| random_strongly_connected(&mut rng, 8, 14))
        .collect();
    let results: Vec<Result<usize, String>> = graphs
        .par_iter()
        .map(|g| {
            let err = |e: unfold_core::Error| format!("{g}: {e}");
            ensure(is_strongly_connected(g), || {
                format!("{g} not strongly connected")
            })?;
            let dim = loop_space_dim(g).map_err(err)?;
            ensure(dim as i64 == g.cycle_rank(), || {
                format!("{g}: dim {dim} vs {}", g.cycle_rank())
            })?;
            let loops = embedded_loops(g, DEFAULT_LOOP_CAP).map_err(err)?;
            for l in &loops {
                let h = contract_loop(g, l).map_err(err)?;
                ensure(is_strongly_connected(&h), || {
                    format!("{g}: contraction disconnects")
                })?;
                let d = loop_space_dim(&h).map_err(err)?;
                ensure(d + 1 == dim, || {
                    format!("{g}: contraction gives {d}, expected {}", dim - 1)
                })?;
            }
            Ok(loops.len())
        })
        .collect();
    let elapsed = start.elapsed();
    let contractions: usize = results
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .sum();
    within(elapsed, Duration::from_secs(10), "digraph suite")?;
    Ok(format!(
        "200 graphs, {contractions} contractions, {elapsed:.2?}"
    ))
}

fn epsilon_observations() -> Check {
    let mut pairs = 0;
    for q in triples(60, Filters::NONE) {
        let sys = AngleSystem::triangle(q[0] as i64, q[1] as i64, q[2] as i64, GcdPolicy::Keep)
            .map_err(|e| e.to_string())?;
        let k = sys.k() as i64;
        for a in admissible_residues(&sys) {
            let p = epsilon_profile(&sys, a as i64).map_err(|e| e.to_string())?;
            ensure(p.eps.iter().all(|e| (-1..=1).contains(e)), || {
                format!("{sys} a={a}: {:?}", p.eps)
            })?;
            for (e, &qi) in p.eps.iter().zip(sys.q()) {
                ensure(*e != -1 || 2 * qi as i64 >= k, || {
                    format!("{sys} a={a}: -1 at acute angle")
                })?;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} admissible (triple, a) pairs with k <= 60"))
}

fn integral_numerics() -> Check {
    let start = Instant::now();
    let mut grid = Vec::new();
    for den in [5i64, 7, 9, 11] {
        for n1 in 1..=(den - 1) / 2 {
            for n2 in n1..=(den - 1) / 2 {
                for (e1, e2) in [(0u8, 0u8), (1, 0), (0, 1)] {
                    grid.push((Ratio::new(n1, den), Ratio::new(n2, den), e1, e2));
                }
            }
        }
    }
    let third = Ratio::new(1, 3);
    grid.push((third, third, 0, 0));
    grid.push((third, third, 1, 0));
    grid.push((third, third, 0, 1));
    let failures: Vec<String> = grid
        .par_iter()
        .filter_map(|&(a1, a2, e1, e2)| {
            let res =
                IntegralParams::new(a1, a2, e1, e2).and_then(|p| planar_integral(&p, DEFAULT_TOL));
            match res {
                Ok(r) if r.is_nonvanishing() && r.value.im.abs() <= r.error_estimate => None,
                Ok(r) => Some(format!(
                    "{a1} {a2} ({e1},{e2}): {} err {:e}",
                    r.value, r.error_estimate
                )),
                Err(e) => Some(format!("{a1} {a2} ({e1},{e2}): {e}")),
            }
        })
        .collect();
    let elapsed = start.elapsed();
    ensure(failures.is_empty(), || failures.join("; "))?;
    within(elapsed, Duration::from_secs(60), "quadrature grid")?;
    Ok(format!(
        "{} parameter sets at tol {DEFAULT_TOL:e}, {elapsed:.2?}",
        grid.len()
    ))
}

fn pi_over_three() -> Check {
    let mut n = 0;
    for q in triples(30, Filters::NONE) {
        let sys = AngleSystem::triangle(q[0] as i64, q[1] as i64, q[2] as i64, GcdPolicy::Keep)
            .map_err(|e| e.to_string())?;
        let reduced = sys.reduced();
        if reduced.k() == 3 {
            ensure(
                full_rank_certified(&reduced).map_err(|e| e.to_string())?,
                || format!("{sys} not certified"),
            )?;
            n += 1;
        }
    }
    ensure(
        full_rank_certified(&tri(1, 1, 1)).map_err(|e| e.to_string())?,
        || "(1,1,1) not certified".into(),
    )?;
    Ok(format!(
        "(1,1,1;3) certified; {n} scaled copies with k <= 30 agree"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 dense-orbit table for k <= 25", dense_table),
        ("2 dense fraction for k < 50", statistic),
        ("3 spot certificates", spot_certificates),
        ("4 genus consistency", genus_consistency),
        ("5 loop-space identity", loop_space_suite),
        ("6 epsilon observations", epsilon_observations),
        ("7 planar integral nonvanishing", integral_numerics),
        ("8 pi/3 triangles", pi_over_three),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
