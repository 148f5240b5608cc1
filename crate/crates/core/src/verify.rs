//! The verification orchestrator: runs suites of checks against one instance
//! and assembles a [`Report`].
//!
//! Checks run in a fixed registry order and draw randomness only from
//! [`crate::rng::stream`], so the report (without timings) depends on nothing
//! but the instance and the configuration.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde_json::{json, Value};

use crate::algebra::{koszul_hf, Algebra, ElementClass, Regularity};
use crate::error::{Error, Result};
use crate::field::{Field, FieldKind};
use crate::inverse;
use crate::instance::Instance;
use crate::lefschetz::{self, KernelPair, LocusDegree, LocusScan, ScanMode};
use crate::poly::{binomial, Poly, Side};
use crate::report::{CheckRecord, Report, Skipped, Status};
use crate::rng::stream;
use crate::strata;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Hilbert,
    Duality,
    Wlp,
    Slp,
    Injectivity,
    Inverse,
    Strata,
    Locus,
    Lemmas,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Hilbert,
        Suite::Duality,
        Suite::Wlp,
        Suite::Slp,
        Suite::Injectivity,
        Suite::Inverse,
        Suite::Strata,
        Suite::Locus,
        Suite::Lemmas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hilbert => "hilbert",
            Suite::Duality => "duality",
            Suite::Wlp => "wlp",
            Suite::Slp => "slp",
            Suite::Injectivity => "injectivity",
            Suite::Inverse => "inverse",
            Suite::Strata => "strata",
            Suite::Locus => "locus",
            Suite::Lemmas => "lemmas",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub suites: Vec<Suite>,
    pub seed: u64,
    /// Random forms per genericity check.
    pub trials: usize,
    pub strata_samples: usize,
    pub pencils: usize,
    pub locus_lines: usize,
    pub locus_planes: usize,
    /// Random `(z, w)` pairs for Lemma 5.2.
    pub pair_samples: usize,
    /// Largest `p + 1` for which singular lines and pencils are enumerated.
    pub enumeration_budget: u64,
    /// Reduction prime for rank-one scans of rational instances.
    pub scan_prime: u64,
    pub scan_budget: u64,
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suites: Suite::ALL.to_vec(),
            seed: 0,
            trials: 8,
            strata_samples: 200,
            pencils: 8,
            locus_lines: 20,
            locus_planes: 1,
            pair_samples: 1000,
            enumeration_budget: 5000,
            scan_prime: 3,
            scan_budget: 1 << 16,
            timings: false,
        }
    }
}

struct Outcome {
    status: Status,
    summary: String,
    data: Value,
}

fn outcome(status: Status, summary: impl Into<String>, data: Value) -> Result<Outcome> {
    Ok(Outcome {
        status,
        summary: summary.into(),
        data,
    })
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

struct Runner {
    timings: bool,
    checks: Vec<CheckRecord>,
    skipped: Vec<Skipped>,
}

impl Runner {
    fn run(&mut self, name: &str, params: Value, f: impl FnOnce() -> Result<Outcome>) {
        let start = Instant::now();
        let result = f();
        let elapsed = self.timings.then(|| start.elapsed().as_millis() as u64);
        match result {
            Ok(o) => self.checks.push(CheckRecord {
                name: name.into(),
                params,
                status: o.status,
                summary: o.summary,
                data: o.data,
                elapsed_ms: elapsed,
            }),
            Err(Error::Unsupported(reason)) => self.skip(name, reason),
            Err(e) => self.checks.push(CheckRecord {
                name: name.into(),
                params,
                status: Status::Fail,
                summary: e.to_string(),
                data: json!({ "error": e.to_string() }),
                elapsed_ms: elapsed,
            }),
        }
    }

    fn skip(&mut self, name: &str, reason: impl Into<String>) {
        self.skipped.push(Skipped {
            check: name.into(),
            reason: reason.into(),
        });
    }
}

fn class_text<T: Field>(a: &Algebra<T>, c: &ElementClass<T>) -> String {
    a.lift(c).map(|p| p.to_string()).unwrap_or_default()
}

fn linear_text<T: Field>(z: &[T]) -> String {
    Poly::linear(z, Side::Operator).to_string()
}

fn random_nonzero_class<T: Field>(a: &Algebra<T>, k: usize, seed: u64, name: &str, t: u64) -> Result<ElementClass<T>> {
    let mut rng = stream(seed, name, t);
    loop {
        let c = a.random_class(k, &mut rng)?;
        if !c.is_zero() {
            return Ok(c);
        }
    }
}

fn random_point<T: Field>(n: usize, seed: u64, name: &str, t: u64) -> Vec<T> {
    let mut rng = stream(seed, name, t);
    loop {
        let p: Vec<T> = (0..n).map(|_| T::sample(&mut rng)).collect();
        if p.iter().any(|c| !c.is_zero()) {
            return p;
        }
    }
}

fn factorial<T: Field>(n: usize) -> T {
    (1..=n as i64).fold(T::one(), |acc, i| acc * T::from_i64(i))
}

/// Runs the configured suites. A presentation that is not a complete
/// intersection fails the regularity gate and every other check is skipped.
pub fn verify<T: Field>(instance: &Instance<T>, cfg: &VerifyConfig) -> Report {
    let a = Algebra::new(instance.clone());
    let mut r = Runner {
        timings: cfg.timings,
        checks: Vec::new(),
        skipped: Vec::new(),
    };
    let seed = cfg.seed;
    let wants = |s: Suite| cfg.suites.contains(&s);
    let (m, d) = (a.m(), a.d());
    let socle = a.socle_degree();
    let hf: Vec<usize> = a.hilbert_table();
    let koszul: Vec<u64> = (0..=socle + 1).map(|k| koszul_hf(m, d, k)).collect();

    r.run("is_regular_sequence", json!({}), || {
        let summary = match a.regularity() {
            Regularity::Regular => "Hilbert function matches the Koszul prediction".to_string(),
            Regularity::NotRegular { witness_degree } => {
                format!("Hilbert function leaves the Koszul prediction in degree {witness_degree}")
            }
        };
        outcome(
            pass_if(a.is_regular()),
            summary,
            json!({ "regularity": a.regularity(), "hilbert": hf, "koszul": koszul }),
        )
    });
    if !a.is_regular() {
        for s in Suite::ALL.into_iter().filter(|&s| wants(s)) {
            r.skip(s.name(), "presentation is not a complete intersection");
        }
        return finish(instance, cfg, r);
    }

    if wants(Suite::Hilbert) {
        r.run("hilbert_function", json!({}), || {
            let matches = hf.iter().zip(&koszul).all(|(&h, &k)| h as u64 == k);
            let symmetric = (0..=socle).all(|k| hf[k] == hf[socle - k]);
            let text: Vec<String> = hf[..=socle].iter().map(|h| h.to_string()).collect();
            outcome(
                pass_if(matches && symmetric && hf[socle] == 1),
                format!("HF = {}", text.join(",")),
                json!({
                    "hilbert": hf,
                    "koszul": koszul,
                    "socle_degree": socle,
                    "critical_degree": a.critical_degree(),
                    "symmetric": symmetric,
                }),
            )
        });
    }

    if wants(Suite::Duality) {
        r.run("duality_pairing", json!({}), || {
            let ranks = (0..=socle)
                .map(|k| a.duality_pairing(k).map(|p| p.rank()))
                .collect::<Result<Vec<_>>>()?;
            let ok = ranks.iter().enumerate().all(|(k, &rk)| rk == hf[k]);
            outcome(
                pass_if(ok),
                if ok { "A_k × A_(M-k) → A_M is perfect for every k" } else { "singular pairing" },
                json!({ "ranks": ranks }),
            )
        });
        r.run("symmetry", json!({ "trials": cfg.trials }), || {
            let results = (0..cfg.trials)
                .map(|t| {
                    let l = Poly::linear(&random_point::<T>(a.nvars(), seed, "symmetry", t as u64), Side::Operator);
                    a.symmetry_check(&l)
                })
                .collect::<Result<Vec<_>>>()?;
            let symmetric = results.iter().filter(|&&b| b).count();
            outcome(
                pass_if(symmetric == results.len()),
                format!("{symmetric}/{} forms ⟨a, L b⟩ symmetric", results.len()),
                json!({ "symmetric": symmetric, "trials": results.len() }),
            )
        });
    }

    if wants(Suite::Wlp) {
        r.run("wlp", json!({ "trials": cfg.trials }), || {
            let w = lefschetz::wlp_check(&a, cfg.trials, seed)?;
            let mut status = Status::from(w.report.verdict);
            if w.monotonicity_violations > 0 || !w.critical_shortcut_consistent {
                status = Status::Fail;
            }
            let ranks: Vec<String> = w
                .report
                .degrees
                .iter()
                .map(|d| format!("{}/{}", d.best_rank, d.target_rank))
                .collect();
            outcome(status, format!("ranks {}", ranks.join(" ")), serde_json::to_value(&w).expect("serializes"))
        });
    }

    if wants(Suite::Slp) {
        r.run("slp", json!({ "trials": cfg.trials }), || {
            let s = lefschetz::slp_check(&a, cfg.trials, seed)?;
            let met = s.degrees.iter().filter(|d| d.best_rank == d.target_rank).count();
            outcome(
                s.verdict.into(),
                format!("{met}/{} maps L^j: A_k → A_(k+j) of maximal rank", s.degrees.len()),
                serde_json::to_value(&s).expect("serializes"),
            )
        });
    }

    if wants(Suite::Injectivity) {
        r.run("injectivity_lemma", json!({ "trials": cfg.trials }), || {
            let rec = lefschetz::injectivity_lemma_check(&a, cfg.trials, seed)?;
            outcome(
                rec.verdict.into(),
                format!("μ_z: A_{} → A_{} rank {}/{}", rec.k, rec.k + 1, rec.best_rank, rec.source_dim),
                serde_json::to_value(&rec).expect("serializes"),
            )
        });
    }

    if wants(Suite::Inverse) {
        inverse_suite(&a, cfg, &mut r);
    }
    if wants(Suite::Strata) {
        strata_suite(&a, cfg, &mut r);
    }

    let needs_harvest = wants(Suite::Locus) || wants(Suite::Lemmas);
    let harvest: Option<LocusScan<T>> = if needs_harvest && T::characteristic() != 0 {
        lefschetz::locus_scan(
            &a,
            ScanMode::Line,
            LocusDegree::Critical,
            cfg.locus_lines,
            seed,
            cfg.enumeration_budget,
        )
        .ok()
    } else {
        None
    };
    if wants(Suite::Locus) {
        locus_suite(&a, cfg, harvest.as_ref(), &mut r);
    }
    if wants(Suite::Lemmas) {
        lemma_suite(&a, cfg, harvest.as_ref(), &mut r);
    }
    finish(instance, cfg, r)
}

fn finish<T: Field>(instance: &Instance<T>, cfg: &VerifyConfig, r: Runner) -> Report {
    Report {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        instance_digest: instance.digest(),
        field: instance.field().to_string(),
        m: instance.m(),
        d: instance.d(),
        seed: cfg.seed,
        checks: r.checks,
        skipped: r.skipped,
    }
}

fn inverse_suite<T: Field>(a: &Algebra<T>, cfg: &VerifyConfig, r: &mut Runner) {
    let (m, d, socle) = (a.m(), a.d(), a.socle_degree());
    let seed = cfg.seed;
    r.run("inverse_system", json!({}), || {
        let dims = (0..=socle)
            .map(|k| inverse::annihilator(a, k).map(|s| s.dim()))
            .collect::<Result<Vec<_>>>()?;
        let matches_hf = dims.iter().enumerate().all(|(k, &v)| v == a.hf(k));
        let expected = binomial(m + d, d) as usize - m - 1;
        let ok = matches_hf && dims[d] == expected;
        outcome(
            pass_if(ok),
            format!("dim I⁻¹_{d} = {} (expected {expected})", dims[d]),
            json!({ "dims": dims, "expected_degree_d": expected }),
        )
    });
    r.run("dual_socle_generator", json!({}), || {
        let g = inverse::dual_socle_generator(a)?.g;
        let text = g.to_string();
        let summary = if g.num_terms() <= 8 {
            format!("g = {text}")
        } else {
            format!("g has {} terms in degree {}", g.num_terms(), g.degree())
        };
        outcome(Status::Pass, summary, json!({ "g": text }))
    });
    r.run("derivative_span", json!({}), || {
        let results = (0..=socle)
            .map(|k| inverse::derivative_span_check(a, k))
            .collect::<Result<Vec<_>>>()?;
        let ok = results.iter().all(|&b| b);
        outcome(
            pass_if(ok),
            if ok { "I⁻¹ is spanned by derivatives of g in every degree" } else { "derivative span differs" },
            json!({ "per_degree": results }),
        )
    });
    r.run("evaluation_identity", json!({ "trials": cfg.trials }), || {
        let n = a.nvars();
        let fact = factorial::<T>(d);
        let mut failures = 0;
        for t in 0..cfg.trials {
            let p = random_point::<T>(n, seed, "evaluation", t as u64);
            let pd = Poly::linear(&p, Side::Target).power(d)?;
            for f in a.instance().generators() {
                if f.pairing(&pd)? != fact.clone() * f.evaluate(&p)? {
                    failures += 1;
                }
            }
        }
        outcome(
            pass_if(failures == 0),
            format!("⟨f_i, p^d⟩ = d!·f_i(p) at {} points", cfg.trials),
            json!({ "points": cfg.trials, "failures": failures }),
        )
    });
    r.run("vertex_duality", json!({ "trials": cfg.trials }), || {
        let s = a.critical_degree();
        let mut rows = Vec::new();
        let mut mismatches = 0;
        for t in 0..cfg.trials {
            let q = random_nonzero_class(a, s, seed, "vertex", t as u64)?;
            let z = lefschetz::z_of_q(a, &q)?;
            let v = inverse::vertex_space(a, &a.lift(&q)?)?;
            let equal = z == v.space;
            mismatches += usize::from(!equal);
            rows.push(json!({ "z_dim": z.dim(), "equal": equal }));
        }
        outcome(
            pass_if(mismatches == 0),
            format!("Z(Q) = vertex space for {}/{} random Q", cfg.trials - mismatches, cfg.trials),
            json!({ "samples": rows }),
        )
    });
}

fn strata_suite<T: Field>(a: &Algebra<T>, cfg: &VerifyConfig, r: &mut Runner) {
    let seed = cfg.seed;
    let names = ["stratum_sample", "pencil_profile", "veronese_scan"];
    if a.d() != 2 {
        for n in names {
            r.skip(n, "quadric strata need d = 2");
        }
        return;
    }
    let n = a.nvars();
    r.run("stratum_sample", json!({ "samples": cfg.strata_samples }), || {
        let h = strata::stratum_sample(a, cfg.strata_samples, seed)?;
        let status = if h.anomaly { Status::Inconclusive } else { Status::Pass };
        outcome(
            status,
            format!("{} of {} samples of full rank {n}", h.counts[n - 1], h.samples),
            serde_json::to_value(&h).expect("serializes"),
        )
    });
    r.run("pencil_profile", json!({ "pencils": cfg.pencils }), || {
        let p = T::characteristic();
        if p == 0 {
            return Err(Error::Unsupported("pencil scans need a prime field".into()));
        }
        let mut rows = Vec::new();
        let mut status = Status::Pass;
        for i in 0..cfg.pencils {
            let mut rng = stream(seed, "pencil", i as u64);
            let (q1, q2) = strata::random_pencil(a, &mut rng)?;
            let prof = strata::pencil_profile(a, &q1, &q2, cfg.enumeration_budget)?;
            let agrees = if p < cfg.enumeration_budget {
                Some(strata::pencil_profile_enumerate(a, &q1, &q2)? == prof)
            } else {
                None
            };
            let count = prof.degenerate_points.len();
            let min_rank = prof.min_rank();
            if prof.identically_singular {
                status = Status::Degenerate;
            } else if count > n || agrees == Some(false) {
                status = Status::Fail;
            } else if min_rank.is_some_and(|r| r + 2 <= n) && status == Status::Pass {
                status = Status::Inconclusive;
            }
            let points: Vec<Value> = prof
                .degenerate_points
                .iter()
                .map(|pt| json!({ "lambda": pt.lambda.to_string(), "mu": pt.mu.to_string(), "rank": pt.rank }))
                .collect();
            rows.push(json!({
                "q1": q1.to_string(),
                "q2": q2.to_string(),
                "degenerate": points,
                "identically_singular": prof.identically_singular,
                "enumeration_agrees": agrees,
            }));
        }
        outcome(
            status,
            format!("{} pencils, at most {n} singular members each", cfg.pencils),
            json!({ "pencils": rows }),
        )
    });
    r.run("veronese_scan", json!({ "budget": cfg.scan_budget }), || {
        let scan = match T::spec().kind {
            FieldKind::Rational => strata::veronese_scan_mod(a, cfg.scan_prime, cfg.scan_budget, seed)?,
            FieldKind::Prime => strata::veronese_scan::<T, T>(a, cfg.scan_budget, seed)?,
        };
        outcome(
            Status::Pass,
            format!(
                "{} rank-one members in {} points over F_{}{}",
                scan.hits.len(),
                scan.points_scanned,
                scan.q,
                if scan.exhaustive { " (exhaustive)" } else { " (sampled)" }
            ),
            serde_json::to_value(&scan).expect("serializes"),
        )
    });
}

fn pair_json<T: Field>(a: &Algebra<T>, p: &KernelPair<T>) -> Value {
    json!({
        "z": class_text(a, &p.z),
        "q": class_text(a, &p.q),
        "dim_qz": p.dim_qz,
        "dim_zq": p.dim_zq,
    })
}

fn locus_suite<T: Field>(a: &Algebra<T>, cfg: &VerifyConfig, harvest: Option<&LocusScan<T>>, r: &mut Runner) {
    let seed = cfg.seed;
    r.run("locus_scan", json!({ "lines": cfg.locus_lines, "degree": "critical" }), || {
        let scan = match harvest {
            Some(s) => s,
            None => {
                // Surfaces the precise reason (rational backend, shape).
                lefschetz::locus_scan(a, ScanMode::Line, LocusDegree::Critical, 0, seed, 0)?;
                return Err(Error::Unsupported("locus scan unavailable".into()));
            }
        };
        let within = scan.hit_bound.is_none_or(|b| scan.max_hits_per_line <= b);
        let hits: Vec<Value> = scan
            .hits
            .iter()
            .map(|h| json!({ "line": h.line, "z": linear_text(&h.z), "kernel_dim": h.kernel.dim() }))
            .collect();
        outcome(
            pass_if(within),
            format!(
                "{} hits on {} lines (max {} per line{})",
                scan.hits.len(),
                scan.lines_scanned,
                scan.max_hits_per_line,
                scan.hit_bound.map(|b| format!(", bound {b}")).unwrap_or_default()
            ),
            json!({
                "k": scan.k,
                "points_scanned": scan.points_scanned,
                "hit_bound": scan.hit_bound,
                "max_hits_per_line": scan.max_hits_per_line,
                "singular_lines": scan.singular_lines,
                "hits": hits,
            }),
        )
    });
    r.run("locus_injectivity", json!({ "planes": cfg.locus_planes, "degree": "injectivity" }), || {
        let scan = lefschetz::locus_scan(
            a,
            ScanMode::Plane,
            LocusDegree::Injectivity,
            cfg.locus_planes,
            seed,
            cfg.enumeration_budget,
        )?;
        // A locus of dimension ≤ 1 misses a general plane only when m ≥ 4.
        let status = if a.m() >= 4 && !scan.hits.is_empty() {
            Status::Inconclusive
        } else {
            Status::Pass
        };
        let hits: Vec<Value> = scan
            .hits
            .iter()
            .map(|h| json!({ "z": linear_text(&h.z), "kernel_dim": h.kernel.dim() }))
            .collect();
        outcome(
            status,
            format!("{} hits among {} points", scan.hits.len(), scan.points_scanned),
            json!({ "k": scan.k, "points_scanned": scan.points_scanned, "hits": hits }),
        )
    });
    r.run("kernel_pairs", json!({ "lines": cfg.locus_lines }), || {
        let scan = harvest.ok_or_else(|| Error::Unsupported("no harvest on this backend".into()))?;
        let mut bad = 0;
        let mut rows = Vec::new();
        for p in &scan.pairs {
            let product_zero = a.multiply(&p.z, &p.q)?.is_zero();
            let vertex = inverse::vertex_space(a, &a.lift(&p.q)?)?;
            let equal = lefschetz::z_of_q(a, &p.q)? == vertex.space;
            bad += usize::from(!(product_zero && equal));
            let mut row = pair_json(a, p);
            row["vertex_equal"] = json!(equal);
            rows.push(row);
        }
        let status = if scan.pairs.is_empty() {
            Status::Degenerate
        } else {
            pass_if(bad == 0)
        };
        outcome(
            status,
            format!("{} pairs with zQ = 0 and Z(Q) = vertex space", scan.pairs.len() - bad),
            json!({ "pairs": rows }),
        )
    });
}

fn lemma_suite<T: Field>(a: &Algebra<T>, cfg: &VerifyConfig, harvest: Option<&LocusScan<T>>, r: &mut Runner) {
    let seed = cfg.seed;
    let s = a.critical_degree();
    let pairs: &[KernelPair<T>] = harvest.map(|h| h.pairs.as_slice()).unwrap_or(&[]);
    let prime = T::characteristic() != 0;

    r.run("lemma61", json!({ "trials": cfg.trials, "harvested": pairs.len() }), || {
        let mut qs: Vec<ElementClass<T>> = pairs.iter().map(|p| p.q.clone()).collect();
        for t in 0..cfg.trials {
            qs.push(random_nonzero_class(a, s, seed, "lemma61", t as u64)?);
        }
        let recs = qs
            .iter()
            .map(|q| lefschetz::lemma61_check(a, q))
            .collect::<Result<Vec<_>>>()?;
        let held = recs.iter().filter(|r| r.holds).count();
        outcome(
            pass_if(held == recs.len()),
            format!("dim coker μ_Q = dim Z(Q) for {held}/{} classes", recs.len()),
            json!({ "records": recs }),
        )
    });
    r.run("lemma63", json!({ "harvested": pairs.len() }), || {
        if !prime {
            return Err(Error::Unsupported("harvesting needs a prime field".into()));
        }
        let rec = lefschetz::lemma63_check(a, pairs)?;
        let status = if rec.vacuous { Status::Degenerate } else { pass_if(rec.holds) };
        outcome(
            status,
            match rec.max_dim {
                Some(dim) => format!("max dim Z(Q) = {dim} over {} pairs", rec.checked),
                None => "no harvested pairs".into(),
            },
            serde_json::to_value(&rec).expect("serializes"),
        )
    });
    r.run("lemma64_partial", json!({ "harvested": pairs.len() }), || {
        if !prime {
            return Err(Error::Unsupported("harvesting needs a prime field".into()));
        }
        let recs = pairs
            .iter()
            .map(|p| lefschetz::lemma64_partial_check(a, p))
            .collect::<Result<Vec<_>>>()?;
        let held = recs.iter().filter(|r| r.inclusion_holds).count();
        let squares = recs.iter().filter(|r| r.q_squared_zero).count();
        let status = if recs.is_empty() { Status::Degenerate } else { pass_if(held == recs.len()) };
        outcome(
            status,
            format!("Z(Q)·A_(s-1) ⊆ ker μ_Q for {held}/{} pairs; Q² = 0 for {squares}", recs.len()),
            json!({ "records": recs }),
        )
    });
    r.run("lemma52", json!({ "pair_samples": cfg.pair_samples }), || {
        let mut structured: Vec<Vec<T>> = Vec::new();
        if let Some(h) = harvest {
            for hit in &h.hits {
                if !structured.contains(&hit.z) {
                    structured.push(hit.z.clone());
                }
            }
        }
        let rec = lefschetz::lemma52_check(a, cfg.pair_samples, seed, &structured)?;
        outcome(
            pass_if(rec.holds),
            format!(
                "{} pairs: image dim ≥ {} (min {}), ⟨z,w⟩U* ∩ I_2 dim ≤ {}",
                rec.pairs, rec.bound, rec.min_image_dim, rec.max_intersection_dim
            ),
            serde_json::to_value(&rec).expect("serializes"),
        )
    });
    r.run("claim_va1", json!({ "trials": cfg.trials }), || {
        let recs = (0..cfg.trials)
            .map(|t| lefschetz::claim_va1_check(a, &random_point::<T>(a.nvars(), seed, "claim_va1", t as u64)))
            .collect::<Result<Vec<_>>>()?;
        let held = recs.iter().filter(|r| r.holds).count();
        outcome(
            pass_if(held == recs.len()),
            format!("A_2 = V·A_1 at {held}/{} points", recs.len()),
            json!({ "records": recs }),
        )
    });
    r.run("pair_product_probe", json!({ "harvested": pairs.len() }), || {
        if !prime {
            return Err(Error::Unsupported("harvesting needs a prime field".into()));
        }
        let mut seen: Vec<&ElementClass<T>> = Vec::new();
        let mut rows = Vec::new();
        for p in pairs {
            if seen.contains(&&p.z) {
                continue;
            }
            seen.push(&p.z);
            let rec = lefschetz::pair_product_probe(a, &p.z)?;
            rows.push(json!({ "z": class_text(a, &p.z), "probe": rec }));
        }
        let status = if rows.is_empty() { Status::Degenerate } else { Status::Pass };
        outcome(status, format!("QQ' products reported for {} forms z", rows.len()), json!({ "probes": rows }))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_rational::BigRational;

    type F = Fp<65521>;

    #[test]
    fn monomial_m4_full_suite() {
        let inst = Instance::<F>::monomial(4, 2).unwrap();
        let cfg = VerifyConfig {
            pair_samples: 100,
            locus_lines: 4,
            ..VerifyConfig::default()
        };
        let report = verify(&inst, &cfg);
        assert!(!report.has_fail(), "{}", report.render_table());
        for name in ["wlp", "slp", "duality_pairing", "symmetry", "lemma61", "lemma52", "claim_va1"] {
            assert_eq!(report.check(name).unwrap().status, Status::Pass, "{name}");
        }
        assert_eq!(
            report.check("dual_socle_generator").unwrap().data["g"],
            "u0*u1*u2*u3*u4"
        );
    }

    #[test]
    fn non_regular_skips_everything() {
        let n = 5;
        let x = |i| Poly::<F>::var(n, i, Side::Operator);
        let mut gens: Vec<Poly<F>> = (0..4).map(|i| x(i).power(2).unwrap()).collect();
        gens.push(x(0).multiply(&x(4)).unwrap());
        let inst = Instance::new(4, 2, gens).unwrap();
        let report = verify(&inst, &VerifyConfig::default());
        assert!(report.has_fail());
        assert_eq!(report.checks.len(), 1);
        assert_eq!(report.skipped.len(), Suite::ALL.len());
    }

    #[test]
    fn rational_backend_skips_scans() {
        let inst = Instance::<BigRational>::monomial(2, 2).unwrap();
        let cfg = VerifyConfig {
            pair_samples: 20,
            ..VerifyConfig::default()
        };
        let report = verify(&inst, &cfg);
        assert!(!report.has_fail(), "{}", report.render_table());
        let skipped: Vec<&str> = report.skipped.iter().map(|s| s.check.as_str()).collect();
        assert!(skipped.contains(&"locus_scan"));
        assert!(skipped.contains(&"pencil_profile"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
