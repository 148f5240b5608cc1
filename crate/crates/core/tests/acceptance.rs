//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use lefschetz_core::inverse::{annihilator, derivative_span_check, vertex_space};
use lefschetz_core::lefschetz::{
    claim_va1_check, injectivity_lemma_check, lemma52_check, lemma61_check, lemma63_check, locus_scan,
    pair_image_dim, wlp_check, z_of_q, KernelPair, LocusDegree, ScanMode, Verdict,
};
use lefschetz_core::poly::binomial;
use lefschetz_core::rng::stream;
use lefschetz_core::strata::{pencil_profile, pencil_profile_enumerate, random_pencil, stratum_sample};
use lefschetz_core::{
    generate, koszul_hf, verify, Algebra, ElementClass, Field, Monomial, Poly, Side, VerifyConfig, F4099,
    F65521,
};
use num_traits::{One, Zero};

type F = F65521;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn random(m: usize, d: usize, seed: u64) -> Algebra<F> {
    Algebra::new(generate::<F>(m, d, seed, false).expect("instance").0)
}

fn monomial(m: usize, d: usize) -> Algebra<F> {
    Algebra::new(generate::<F>(m, d, 0, true).expect("instance").0)
}

fn secs(t: Duration) -> String {
    format!("{:.2} s", t.as_secs_f64())
}

/// The (m, d) grid of criterion 2, each with the monomial and 3 random instances.
fn koszul_instances() -> &'static Vec<Algebra<F>> {
    static CELL: OnceLock<Vec<Algebra<F>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for (m, d) in [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3)] {
            out.push(monomial(m, d));
            for seed in 0..3 {
                out.push(random(m, d, seed));
            }
        }
        out
    })
}

struct Harvest {
    algebra: Algebra<F>,
    pairs: Vec<KernelPair<F>>,
    hits: Vec<Vec<F>>,
}

/// Line-mode scans of the critical locus on 5 random m = 4, d = 2 instances.
fn harvests() -> &'static Vec<Harvest> {
    static CELL: OnceLock<Vec<Harvest>> = OnceLock::new();
    CELL.get_or_init(|| {
        (0..5u64)
            .map(|i| {
                let seed = 500 + i;
                let algebra = random(4, 2, seed);
                let scan = locus_scan(&algebra, ScanMode::Line, LocusDegree::Critical, 20, seed, 5000)
                    .expect("locus scan");
                Harvest {
                    pairs: scan.pairs.clone(),
                    hits: scan.hits.iter().map(|h| h.z.clone()).collect(),
                    algebra,
                }
            })
            .collect()
    })
}

fn coordinate_quadrics(a: &Algebra<F>) -> Vec<ElementClass<F>> {
    let n = a.nvars();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut e = vec![0u32; n];
            e[i] = 1;
            e[j] = 1;
            let q = Poly::monomial(Monomial::new(e), F::one(), Side::Operator);
            out.push(a.class_of(&q).expect("class"));
        }
    }
    out
}

fn c1_hilbert() -> Outcome {
    let mut slowest = Duration::ZERO;
    for seed in 0..20 {
        let t = Instant::now();
        let a = random(4, 2, seed);
        let hf = a.hilbert_table();
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        if hf[..6] != [1, 5, 10, 10, 5, 1] || hf[6..].iter().any(|&h| h != 0) {
            return outcome(false, format!("seed {seed}: HF = {hf:?}"));
        }
        if dt >= Duration::from_secs(1) {
            return outcome(false, format!("seed {seed} took {}", secs(dt)));
        }
    }
    outcome(true, format!("20 instances, HF = 1,5,10,10,5,1, slowest {}", secs(slowest)))
}

fn c2_koszul() -> Outcome {
    let t = Instant::now();
    let all = koszul_instances();
    for a in all {
        for k in 0..=a.socle_degree() + 1 {
            if a.hf(k) as u64 != koszul_hf(a.m(), a.d(), k) {
                return outcome(false, format!("m = {}, d = {}, k = {k}: HF {}", a.m(), a.d(), a.hf(k)));
            }
        }
    }
    let dt = t.elapsed();
    outcome(dt < Duration::from_secs(30), format!("{} instances agree, {}", all.len(), secs(dt)))
}

fn c3_wlp() -> Outcome {
    let t = Instant::now();
    let mut first_full = 0;
    for seed in 0..100 {
        let a = random(4, 2, seed);
        let w = wlp_check(&a, 8, seed).expect("wlp");
        if w.report.verdict != Verdict::Pass {
            return outcome(false, format!("seed {seed}: verdict {:?}", w.report.verdict));
        }
        let rec = w.report.record(2, 1).expect("k = 2");
        if rec.best_rank != 10 {
            return outcome(false, format!("seed {seed}: best rank {} at k = 2", rec.best_rank));
        }
        if rec.first_rank == 10 {
            first_full += 1;
        }
    }
    let dt = t.elapsed();
    outcome(
        first_full >= 95 && dt < Duration::from_secs(120),
        format!("100/100 pass within 8 trials, first L has rank 10 in {first_full}/100, {}", secs(dt)),
    )
}

fn c4_injectivity() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for (m, d) in [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)] {
        for seed in 0..10 {
            let a = random(m, d, seed);
            let rec = injectivity_lemma_check(&a, 1, seed).expect("injectivity");
            if rec.first_rank != a.hf(d - 1) {
                return outcome(
                    false,
                    format!("m = {m}, d = {d}, seed {seed}: rank {} of {}", rec.first_rank, a.hf(d - 1)),
                );
            }
            count += 1;
        }
    }
    let dt = t.elapsed();
    outcome(dt < Duration::from_secs(60), format!("{count} instances injective on the first z, {}", secs(dt)))
}

fn c5_annihilator() -> Outcome {
    for a in koszul_instances() {
        let (m, d) = (a.m(), a.d());
        let want = binomial(m + d, d) as usize - m - 1;
        let got = annihilator(a, d).expect("annihilator").dim();
        if got != want {
            return outcome(false, format!("m = {m}, d = {d}: dim {got}, expected {want}"));
        }
    }
    outcome(true, format!("{} instances, dim = C(m+d,d) - m - 1", koszul_instances().len()))
}

fn c6_duality() -> Outcome {
    for a in koszul_instances() {
        for k in 0..=a.socle_degree() {
            let p = a.duality_pairing(k).expect("pairing");
            if p.rows() != p.cols() || p.rank() != p.rows() {
                return outcome(false, format!("m = {}, d = {}, k = {k}: singular", a.m(), a.d()));
            }
        }
    }
    let mut forms = 0;
    for m in [2, 4] {
        let a = random(m, 2, 1);
        let mut rng = stream(1, "acceptance.symmetry", m as u64);
        for _ in 0..20 {
            let l = a.random_linear(&mut rng);
            if !a.symmetry_check(&l).expect("symmetry") {
                return outcome(false, format!("m = {m}: asymmetric form for L = {l}"));
            }
            forms += 1;
        }
    }
    outcome(true, format!("all pairings nonsingular, {forms} symmetric forms"))
}

fn c7_derivatives() -> Outcome {
    let mut algebras: Vec<Algebra<F>> = (1..=4).map(|m| monomial(m, 2)).collect();
    algebras.extend((0..3).map(|seed| random(3, 2, seed)));
    for a in &algebras {
        for k in 0..=a.socle_degree() {
            if !derivative_span_check(a, k).expect("derivative span") {
                return outcome(false, format!("m = {}, k = {k}", a.m()));
            }
        }
    }
    outcome(true, format!("{} instances, every degree", algebras.len()))
}

fn c8_lemma61() -> Outcome {
    let a = monomial(4, 2);
    for q in coordinate_quadrics(&a) {
        let rec = lemma61_check(&a, &q).expect("lemma 6.1");
        if rec.coker_dim != 2 || rec.z_dim != 2 || !rec.holds {
            return outcome(false, format!("monomial pair: coker {}, Z(Q) {}", rec.coker_dim, rec.z_dim));
        }
    }
    let mut harvested = 0;
    for h in harvests() {
        for pair in &h.pairs {
            let rec = lemma61_check(&h.algebra, &pair.q).expect("lemma 6.1");
            if !rec.holds {
                return outcome(false, format!("harvested pair: coker {}, Z(Q) {}", rec.coker_dim, rec.z_dim));
            }
            harvested += 1;
        }
    }
    outcome(
        harvested > 0,
        format!("10 monomial pairs with coker = Z(Q) = 2, {harvested} harvested pairs on 5 instances"),
    )
}

fn c9_lemma63() -> Outcome {
    let mut checked = 0;
    let mut max_dim = 0;
    for h in harvests() {
        let rec = lemma63_check(&h.algebra, &h.pairs).expect("lemma 6.3");
        if !rec.holds {
            return outcome(false, format!("{} violations, max dim {:?}", rec.violations, rec.max_dim));
        }
        checked += rec.checked;
        max_dim = max_dim.max(rec.max_dim.unwrap_or(0));
    }
    outcome(checked > 0, format!("{checked} harvested pairs, max dim Z(Q) = {max_dim}"))
}

fn c10_lemma52() -> Outcome {
    let mut total = 0;
    let mut min_image = usize::MAX;
    let mut max_cap = 0;
    let mono = monomial(4, 2);
    type Run<'a> = (&'a Algebra<F>, &'a [Vec<F>], u64);
    let mut runs: Vec<Run> = vec![(&mono, &[], 0)];
    for (i, h) in harvests().iter().enumerate() {
        runs.push((&h.algebra, &h.hits, 500 + i as u64));
    }
    for (a, structured, seed) in runs {
        let rec = lemma52_check(a, 1000, seed, structured).expect("lemma 5.2");
        if !rec.holds || rec.bound != 7 {
            return outcome(
                false,
                format!("{} image and {} intersection violations", rec.image_violations, rec.intersection_violations),
            );
        }
        total += rec.pairs;
        min_image = min_image.min(rec.min_image_dim);
        max_cap = max_cap.max(rec.max_intersection_dim);
    }
    let x0 = Poly::var(5, 0, Side::Operator);
    let x1 = Poly::var(5, 1, Side::Operator);
    let coordinate = pair_image_dim(&mono, &x0, &x1).expect("pair image");
    outcome(
        coordinate == 7,
        format!("{total} pairs on 6 instances, image dim >= {min_image}, intersection <= {max_cap}, coordinate pair {coordinate}"),
    )
}

fn c11_claim() -> Outcome {
    let mut count = 0;
    for m in [3, 4] {
        for t in 0..25u64 {
            let a = random(m, 2, t);
            let mut rng = stream(t, "acceptance.claim", m as u64);
            let p: Vec<F> = loop {
                let p: Vec<F> = (0..a.nvars()).map(|_| F::sample(&mut rng)).collect();
                if p.iter().any(|c| !c.is_zero()) {
                    break p;
                }
            };
            let rec = claim_va1_check(&a, &p).expect("claim");
            if !rec.holds {
                return outcome(false, format!("m = {m}, seed {t}: span {} of {}", rec.span_dim, rec.hf2));
            }
            count += 1;
        }
    }
    outcome(true, format!("{count} (instance, point) pairs"))
}

fn c12_strata() -> Outcome {
    let mut slowest = Duration::ZERO;
    let mut pencils = 0;
    let mut max_degenerate = 0;
    for seed in 0..5u64 {
        let t = Instant::now();
        let a = random(4, 2, seed);
        let hist = stratum_sample(&a, 200, seed).expect("strata");
        if hist.anomaly {
            return outcome(false, format!("seed {seed}: full-rank fraction {}", hist.full_rank_fraction));
        }
        let mut rng = stream(seed, "acceptance.pencil", 0);
        for _ in 0..8 {
            let (q1, q2) = random_pencil(&a, &mut rng).expect("pencil");
            let prof = pencil_profile(&a, &q1, &q2, 5000).expect("pencil profile");
            let low = prof.degenerate_points.iter().filter(|p| p.rank < a.m()).count();
            if prof.identically_singular || prof.degenerate_points.len() > a.m() + 1 || low > 0 {
                return outcome(
                    false,
                    format!("seed {seed}: {} degenerate, {low} of rank <= m - 1", prof.degenerate_points.len()),
                );
            }
            max_degenerate = max_degenerate.max(prof.degenerate_points.len());
            pencils += 1;
        }
        slowest = slowest.max(t.elapsed());
    }
    if slowest >= Duration::from_secs(60) {
        return outcome(false, format!("slowest instance {}", secs(slowest)));
    }
    // Root-finding and full enumeration must see the same members at p = 4099.
    let small = Algebra::new(generate::<F4099>(4, 2, 7, false).expect("instance").0);
    let mut rng = stream(7, "acceptance.pencil", 1);
    for _ in 0..3 {
        let (q1, q2) = random_pencil(&small, &mut rng).expect("pencil");
        let roots = pencil_profile(&small, &q1, &q2, 0).expect("roots");
        let full = pencil_profile_enumerate(&small, &q1, &q2).expect("enumeration");
        if roots.degenerate_points != full.degenerate_points {
            return outcome(false, "root-finding and enumeration disagree at p = 4099");
        }
    }
    outcome(
        true,
        format!("5 instances anomaly-free, {pencils} pencils, at most {max_degenerate} degenerate members, slowest {}", secs(slowest)),
    )
}

fn c13_vertices() -> Outcome {
    let mono = monomial(4, 2);
    let mut cases: Vec<(&Algebra<F>, ElementClass<F>)> =
        coordinate_quadrics(&mono).into_iter().map(|q| (&mono, q)).collect();
    for h in harvests() {
        cases.extend(h.pairs.iter().map(|p| (&h.algebra, p.q.clone())));
    }
    for (a, q) in &cases {
        let z = z_of_q(a, q).expect("Z(Q)");
        let v = vertex_space(a, &a.lift(q).expect("lift")).expect("vertices").space;
        if z.dim() != v.dim() || !z.contains_subspace(&v).expect("containment") {
            return outcome(false, format!("dim Z(Q) {} against vertex space {}", z.dim(), v.dim()));
        }
    }
    outcome(true, format!("{} forms Q", cases.len()))
}

fn c14_determinism() -> Outcome {
    let inst = generate::<F>(4, 2, 3, false).expect("instance").0;
    let cfg = VerifyConfig {
        seed: 42,
        ..VerifyConfig::default()
    };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("pool")
            .install(|| verify(&inst, &cfg).to_json())
    };
    let one = run(1);
    let four = run(4);
    let again = run(4);
    let checks = serde_json::from_str::<serde_json::Value>(&one).expect("json")["checks"]
        .as_array()
        .map_or(0, Vec::len);
    outcome(
        one == four && four == again && checks > 0,
        format!("{} byte report with {checks} checks, identical across 1 and 4 threads", one.len()),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("Hilbert function", c1_hilbert),
        ("Koszul agreement", c2_koszul),
        ("WLP for m = 4, d = 2", c3_wlp),
        ("injectivity in degree d - 1", c4_injectivity),
        ("annihilator dimension", c5_annihilator),
        ("Gorenstein duality", c6_duality),
        ("inverse-system generation", c7_derivatives),
        ("cokernel equals Z(Q)", c8_lemma61),
        ("dim Z(Q) <= 2", c9_lemma63),
        ("pair image bound", c10_lemma52),
        ("A_2 = V A_1", c11_claim),
        ("quadric strata", c12_strata),
        ("Z(Q) equals vertex space", c13_vertices),
        ("determinism", c14_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}  {title}: {}", i + 1, result.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
