//! End-to-end acceptance checks. Run with
//! `cargo test -p rulers-core --release --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.
//!
//! Every numeric comparison below is an exact integer or rational equality; the only
//! tolerances are the wall-clock limits pinned in the constants.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rulers_core::arrangements::{arrangement_for, b2g_subspaces, bh_hyperplanes, golomb_hyperplanes, LinearForm};
use rulers_core::ehrhart::{
    closed_ehrhart, factorial, fit_constituent, fit_open, intersection_census_2d, open_ehrhart, period_bound,
    reciprocity_check, IntersectionPoset, Quasipolynomial,
};
use rulers_core::linalg::{q, Q};
use rulers_core::orientation::{
    all_vectors, climb, climb_inequality_check, counterexample_m5, exhaustive_disjoint_triples, injectivity_check,
    min_consecutive_decomposition, MultiVec, M5_LIMITS,
};
use rulers_core::regions::{enumerate_regions, region_count, RegionLimits};
use rulers_core::rulers::{count_family_bruteforce, FamilySpec};
use rulers_core::sweep::WorkBudget;

const C1_TIME_LIMIT: Duration = Duration::from_secs(1);
const C2_TIME_LIMIT: Duration = Duration::from_secs(60);
const C5_TIME_LIMIT: Duration = Duration::from_secs(600);
const C7_TIME_LIMIT: Duration = Duration::from_secs(60);

/// Enough for the direct counts at `t = 10080` (about 5·10^7 points times 20 forms).
const LARGE_BUDGET: WorkBudget = WorkBudget(5_000_000_000);

const PERIOD_B3: u64 = 2520;
const RANDOM_TRIPLES: usize = 10_000;
const RANDOM_SEED: u64 = 0x5eed_2520;

/// The twenty reference hyperplanes for `B_3`-sets with four markings, as `lhs = rhs`.
const REFERENCE_TABLE: [([i64; 3], [i64; 3]); 20] = [
    ([1, 0, 0], [0, 1, 0]),
    ([2, 0, 0], [0, 1, 0]),
    ([1, 0, 0], [0, 2, 0]),
    ([1, 0, 0], [0, 0, 1]),
    ([2, 0, 0], [0, 0, 1]),
    ([1, 0, 0], [0, 0, 2]),
    ([0, 1, 0], [0, 0, 1]),
    ([0, 2, 0], [0, 0, 1]),
    ([0, 1, 0], [0, 0, 2]),
    ([1, 0, 0], [0, 1, 1]),
    ([2, 0, 0], [0, 1, 1]),
    ([1, 0, 0], [0, 2, 1]),
    ([1, 0, 0], [0, 1, 2]),
    ([1, 0, 0], [0, 2, 2]),
    ([1, 1, 0], [0, 0, 1]),
    ([2, 1, 0], [0, 0, 1]),
    ([1, 2, 0], [0, 0, 1]),
    ([2, 2, 0], [0, 0, 1]),
    ([1, 1, 0], [0, 0, 2]),
    ([1, 0, 1], [0, 1, 0]),
];

const SEVEN_CHECKS: [([&str; 2], [&str; 2]); 7] = [
    (["34", "23"], ["4", "2"]),
    (["34", "45"], ["3", "5"]),
    (["23", "12"], ["3", "1"]),
    (["123", "345"], ["12", "45"]),
    (["123", "234"], ["1", "4"]),
    (["345", "234"], ["5", "2"]),
    (["2345", "1234"], ["5", "1"]),
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, format!("took {took:?}, limit {limit:?}"))
}

fn frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn fmt_coeffs(c: &[Q]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Direct open counts for `bh(3,3)` at the first four multiples of the period, shared by
/// criteria 3, 4 and 11.
fn b3_open_counts() -> &'static [(i64, BigInt); 4] {
    static CELL: OnceLock<[(i64, BigInt); 4]> = OnceLock::new();
    CELL.get_or_init(|| {
        let a = bh_hyperplanes(3, 3);
        [1, 2, 3, 4].map(|k| {
            let t = k * PERIOD_B3;
            (t as i64, BigInt::from(open_ehrhart(&a, t, LARGE_BUDGET).unwrap()))
        })
    })
}

/// Constituents fitted in criteria 3 and 6, collected for criterion 11.
fn fitted() -> &'static std::sync::Mutex<Vec<(String, usize, Quasipolynomial)>> {
    static CELL: OnceLock<std::sync::Mutex<Vec<(String, usize, Quasipolynomial)>>> = OnceLock::new();
    CELL.get_or_init(Default::default)
}

fn c1_arrangement_parity() -> Outcome {
    let start = Instant::now();
    let a = bh_hyperplanes(3, 3);
    within(C1_TIME_LIMIT, start)?;
    let got: BTreeSet<LinearForm> = a.hyperplanes().unwrap().into_iter().collect();
    let want: BTreeSet<LinearForm> = REFERENCE_TABLE
        .iter()
        .map(|(l, r)| {
            let c: Vec<i64> = l.iter().zip(r).map(|(x, y)| x - y).collect();
            LinearForm::new(&c).unwrap()
        })
        .collect();
    ensure(want.len() == 20, "reference table has duplicates")?;
    ensure(a.len() == 20, format!("{} hyperplanes", a.len()))?;
    ensure(got == want, "hyperplane set differs from the reference table")?;
    Ok("20 hyperplanes, equal to the reference table".into())
}

fn c2_region_census() -> Outcome {
    let start = Instant::now();
    let a = bh_hyperplanes(3, 3);
    let regions = enumerate_regions(&a, RegionLimits::DEFAULT).map_err(|e| e.to_string())?;
    let census = intersection_census_2d(&a).map_err(|e| e.to_string())?;
    within(C2_TIME_LIMIT, start)?;
    ensure(regions.len() == 80, format!("{} regions", regions.len()))?;
    ensure(census == (37, 12), format!("census {census:?}"))?;
    Ok("80 regions, 37 interior and 12 boundary intersection points".into())
}

fn c3_quasipolynomial() -> Outcome {
    let counts = b3_open_counts();
    let c = fit_constituent(&counts[..3], 2).map_err(|e| e.to_string())?;
    let want = vec![frac(1, 2), frac(-55, 6), q(80)];
    ensure(c == want, format!("fitted ({})", fmt_coeffs(&c)))?;
    let predicted = rulers_core::ehrhart::eval_poly(&c, counts[3].0);
    ensure(
        predicted == Q::from_integer(counts[3].1.clone()),
        format!("prediction {predicted} vs direct count {}", counts[3].1),
    )?;
    ensure(counts[3].1 == BigInt::from(50_710_880u64), format!("direct count {}", counts[3].1))?;
    let mut qp = Quasipolynomial::new(2, PERIOD_B3);
    qp.constituents.insert(0, c);
    fitted().lock().unwrap().push(("bh(3,3) residue 0".into(), 3, qp));
    Ok(format!("(1/2, -55/6, 80); t = 10080 predicted and counted {}", counts[3].1))
}

fn c4_constant_term() -> Outcome {
    let a = bh_hyperplanes(3, 3);
    let p = IntersectionPoset::build(&a).map_err(|e| e.to_string())?;
    let regions = region_count(&a, RegionLimits::DEFAULT).map_err(|e| e.to_string())?;
    let samples = [0u64, 1, 2, 3]
        .map(|k| {
            let t = k * PERIOD_B3;
            closed_ehrhart(&a, &p, t, LARGE_BUDGET).map(|n| (t as i64, BigInt::from(n)))
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let closed = fit_constituent(&samples, 2).map_err(|e| e.to_string())?;
    let open = fit_constituent(&b3_open_counts()[..3], 2).map_err(|e| e.to_string())?;
    // (−1)^{m−1} with m = 3
    let signed_open_constant = open[2].clone();
    ensure(regions == 80, format!("{regions} regions"))?;
    ensure(closed[2] == q(80), format!("closed constant term {}", closed[2]))?;
    ensure(signed_open_constant == q(80), format!("open constant term {signed_open_constant}"))?;
    ensure(
        closed[0] == frac(1, 2),
        format!("closed leading coefficient {}", closed[0]),
    )?;
    Ok("closed constant term 80 = region count = signed open constant term".into())
}

fn c5_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(FamilySpec, u64)> = Vec::new();
    for m in 1..=4 {
        cases.push((FamilySpec::golomb(m), 40));
        for h in [2, 3] {
            cases.push((FamilySpec::bh(m, h), 40));
        }
        for g in [1, 2] {
            cases.push((FamilySpec::b2g(m, g), 40));
            cases.push((FamilySpec::b2_minus_g(m, g), 40));
        }
    }
    cases.push((FamilySpec::golomb(5), 30));
    let mut checked = 0;
    for (fam, t_max) in &cases {
        let a = arrangement_for(fam).map_err(|e| format!("{fam}: {e}"))?;
        for t in 0..=*t_max {
            let geo = open_ehrhart(&a, t, WorkBudget::DEFAULT).map_err(|e| format!("{fam} t={t}: {e}"))?;
            let brute = count_family_bruteforce(fam, t, WorkBudget::DEFAULT).map_err(|e| format!("{fam} t={t}: {e}"))?;
            ensure(geo == brute, format!("{fam} t={t}: lattice {geo} vs oracle {brute}"))?;
            checked += 1;
        }
    }
    within(C5_TIME_LIMIT, start)?;
    Ok(format!("{} families, {checked} (family, t) pairs agree", cases.len()))
}

fn c6_reciprocity() -> Outcome {
    let instances = [
        ("golomb(2)", golomb_hyperplanes(2)),
        ("golomb(3)", golomb_hyperplanes(3)),
        ("b2g(4,2)", b2g_subspaces(4, 2).map_err(|e| e.to_string())?),
    ];
    let ts: Vec<u64> = (1..=20).collect();
    let mut summary = Vec::new();
    for (name, a) in &instances {
        let p = IntersectionPoset::build(a).map_err(|e| e.to_string())?;
        let period = period_bound(&p).map_err(|e| e.to_string())?;
        let residues: Vec<u64> = (0..period).collect();
        let qp = fit_open(a, period, &residues, WorkBudget::DEFAULT).map_err(|e| format!("{name}: {e}"))?;
        let rep = reciprocity_check(a, &p, &qp, &ts, WorkBudget::DEFAULT).map_err(|e| e.to_string())?;
        ensure(rep.passed(), format!("{name}: fails at t = {:?}", rep.first_failure))?;
        summary.push(format!("{name} (period {period})"));
        fitted().lock().unwrap().push((name.to_string(), a.m, qp));
    }
    Ok(format!("t = 1..20 for {}", summary.join(", ")))
}

fn c7_climb_lemma() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for m in 1..=4 {
        for a in all_vectors(m, 3) {
            let (k, w) = min_consecutive_decomposition(&a).map_err(|e| e.to_string())?;
            ensure(k as i64 == climb(&a.0), format!("{:?}: minimum {k}, climb {}", a.0, climb(&a.0)))?;
            let mut sum = vec![0; m];
            for iv in &w {
                for p in iv.start..=iv.end {
                    sum[p - 1] += 1;
                }
            }
            ensure(sum == a.0 && w.len() == k, format!("{:?}: bad witness", a.0))?;
            n += 1;
        }
    }
    within(C7_TIME_LIMIT, start)?;
    Ok(format!("{n} vectors"))
}

fn random_disjoint_triple(rng: &mut ChaCha8Rng) -> [MultiVec; 3] {
    let m = rng.gen_range(3..=8);
    let mut a = vec![0; m];
    let mut b = vec![0; m];
    let mut c = vec![0; m];
    for j in 0..m {
        match rng.gen_range(0..3) {
            0 => a[j] = rng.gen_range(1..=5),
            1 => b[j] = rng.gen_range(1..=5),
            _ => {}
        }
        c[j] = rng.gen_range(0..=5);
    }
    [MultiVec(a), MultiVec(b), MultiVec(c)]
}

fn c8_climb_inequality() -> Outcome {
    let exhaustive = climb_inequality_check(exhaustive_disjoint_triples(3, 2));
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let random = climb_inequality_check((0..RANDOM_TRIPLES).map(|_| random_disjoint_triple(&mut rng)));
    ensure(random.samples == RANDOM_TRIPLES, format!("{} random samples", random.samples))?;
    ensure(exhaustive.holds(), format!("exhaustive violations {:?}", exhaustive.violations.first()))?;
    ensure(random.holds(), format!("random violations {:?}", random.violations.first()))?;
    Ok(format!(
        "0 violations in {} exhaustive and {} random triples",
        exhaustive.samples, random.samples
    ))
}

fn c9_injection() -> Outcome {
    let r = injectivity_check(&FamilySpec::bh(3, 3), RegionLimits::DEFAULT).map_err(|e| e.to_string())?;
    ensure(r.regions == 80, format!("{} regions", r.regions))?;
    ensure(r.passed(), format!("{r:?}"))?;
    Ok("80 regions give 80 distinct coherent acyclic orientations".into())
}

fn c10_counterexample() -> Outcome {
    let r = counterexample_m5(M5_LIMITS).map_err(|e| e.to_string())?;
    let got: BTreeSet<([String; 2], [String; 2])> = r
        .same_size_checks
        .iter()
        .map(|c| (c.pair.clone(), c.reduced.clone()))
        .collect();
    let want: BTreeSet<([String; 2], [String; 2])> = SEVEN_CHECKS
        .iter()
        .map(|(p, r)| (p.map(String::from), r.map(String::from)))
        .collect();
    ensure(got == want, format!("same-size checks {got:?}"))?;
    ensure(r.same_size_checks.iter().all(|c| c.holds), "a same-size check fails")?;
    ensure(r.coherent, "not coherent")?;
    ensure(r.acyclic, "not acyclic")?;
    ensure(r.certificate.sum == vec![0; 5], "certificate does not sum to zero")?;
    ensure(r.certificate.lp_infeasible, "LP finds the system feasible")?;
    ensure(!r.preimage_found, "a region maps to the orientation")?;
    Ok(format!("coherent, acyclic, infeasible; no preimage among {} regions", r.regions_checked))
}

fn c11_leading_terms() -> Outcome {
    // Cubic refit of the residue-0 constituent: the top coefficient must vanish.
    let cubic = fit_constituent(b3_open_counts(), 3).map_err(|e| e.to_string())?;
    ensure(cubic[0] == q(0), format!("cubic coefficient {}", cubic[0]))?;
    ensure(cubic[1] == frac(1, 2), format!("quadratic coefficient {}", cubic[1]))?;
    let list = fitted().lock().unwrap();
    ensure(list.len() == 4, format!("{} fitted quasipolynomials available", list.len()))?;
    let mut constituents = 0;
    for (name, m, qp) in list.iter() {
        let lead = Q::new(1.into(), factorial(m - 1));
        ensure(qp.degree == m - 1, format!("{name}: degree {}", qp.degree))?;
        for (r, c) in &qp.constituents {
            ensure(
                c.len() == *m && c[0] == lead,
                format!("{name} residue {r}: ({})", fmt_coeffs(c)),
            )?;
            constituents += 1;
        }
        ensure(qp.has_simplex_leading_term(*m), name.clone())?;
    }
    Ok(format!("{constituents} constituents with degree m-1 and leading 1/(m-1)!; cubic term 0"))
}

#[test]
fn acceptance_suite() {
    let criteria: [Criterion; 11] = [
        ("arrangement parity", c1_arrangement_parity),
        ("region census", c2_region_census),
        ("residue-0 quasipolynomial", c3_quasipolynomial),
        ("constant term equals region count", c4_constant_term),
        ("oracle equivalence", c5_oracle_equivalence),
        ("reciprocity", c6_reciprocity),
        ("climb lemma", c7_climb_lemma),
        ("climb inequality", c8_climb_inequality),
        ("injection", c9_injection),
        ("m = 5 counterexample", c10_counterexample),
        ("leading terms", c11_leading_terms),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
