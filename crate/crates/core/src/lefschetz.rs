//! Maximal-rank checks for multiplication maps and the kernel-pair analysis.
//!
//! A property of a *general* linear form is tested by drawing `L` from seeded
//! streams: trial `t` of a check always uses the same `L`, across every
//! degree, so per-`L` statements (monotonicity) can be checked as well.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Algebra, ElementClass};
use crate::error::{Error, Result};
use crate::field::{Field, FieldKind};
use crate::matrix::Matrix;
use crate::poly::{Poly, Side};
use crate::rng::stream;
use crate::strata;
use crate::subspace::Subspace;
use crate::univariate::UniPoly;

/// Grid points allowed for a rank-deficiency certificate.
pub const CERTIFICATE_BUDGET: u64 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Pass;
        for v in verdicts {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Inconclusive => out = Verdict::Inconclusive,
                Verdict::Pass => {}
            }
        }
        out
    }
}

/// Outcome for multiplication by `L^j` from `A_k` to `A_{k+j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRecord {
    pub k: usize,
    pub j: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub target_rank: usize,
    /// Rank for the first sampled form.
    pub first_rank: usize,
    pub best_rank: usize,
    pub trials_used: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzReport {
    pub seed: u64,
    pub trials: usize,
    pub degrees: Vec<DegreeRecord>,
    pub verdict: Verdict,
}

impl LefschetzReport {
    pub fn record(&self, k: usize, j: usize) -> Option<&DegreeRecord> {
        self.degrees.iter().find(|r| r.k == k && r.j == j)
    }
}

/// Weak Lefschetz report plus the per-`L` consequences of maximal rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WlpReport {
    #[serde(flatten)]
    pub report: LefschetzReport,
    pub critical_degree: usize,
    /// The first form is injective in the critical degree.
    pub first_injective_at_critical: bool,
    /// Injective at `s` implies maximal rank everywhere, for the first form.
    pub critical_shortcut_consistent: bool,
    /// Degrees where injectivity (surjectivity) of the first form does not
    /// propagate downward (upward).
    pub monotonicity_violations: usize,
}

fn linear_map<T: Field>(vars: &[Matrix<T>], a: &[T]) -> Matrix<T> {
    let first = &vars[0];
    let mut acc = Matrix::zeros(first.rows(), first.cols());
    for (m, c) in vars.iter().zip(a) {
        if !c.is_zero() {
            acc = acc.add_scaled(c, m).expect("variable maps share a shape");
        }
    }
    acc
}

/// Matrix of `L^j: A_k → A_{k+j}` for `L = Σ a_i x_i`.
fn power_map<T: Field>(vars: &[Vec<Matrix<T>>], a: &[T], k: usize, j: usize) -> Matrix<T> {
    let mut acc = linear_map(&vars[k], a);
    for step in 1..j {
        acc = linear_map(&vars[k + step], a).mul(&acc).expect("composable maps");
    }
    acc
}

fn sample_form<T: Field>(n: usize, seed: u64, name: &str, t: u64) -> Vec<T> {
    let mut rng = stream(seed, name, t);
    loop {
        let a: Vec<T> = (0..n).map(|_| T::sample(&mut rng)).collect();
        if a.iter().any(|c| !c.is_zero()) {
            return a;
        }
    }
}

/// Decides whether every `L` in the grid `{0..=degree}^n` gives rank below
/// `target`. A nonzero minor is a polynomial of degree `≤ degree` in the
/// coefficients of `L`, so it cannot vanish on the whole grid; `Some(true)`
/// therefore certifies failure for every `L`. `None` when over budget.
pub fn grid_certificate<T, F>(n: usize, degree: usize, budget: u64, rank_below: F) -> Option<bool>
where
    T: Field,
    F: Fn(&[T]) -> bool + Sync,
{
    let side = degree as u64 + 1;
    let total = (side as u128).checked_pow(n as u32)?;
    if total > budget as u128 {
        return None;
    }
    let all_below = (0..total as u64).into_par_iter().all(|mut idx| {
        let mut a = vec![T::zero(); n];
        for slot in a.iter_mut().rev() {
            *slot = T::from_i64((idx % side) as i64);
            idx /= side;
        }
        rank_below(&a)
    });
    Some(all_below)
}

/// Shared engine: ranks of `L^j: A_k → A_{k+j}` over the listed `(k, j)`.
fn maximal_rank<T: Field>(
    a: &Algebra<T>,
    entries: &[(usize, usize)],
    trials: usize,
    seed: u64,
    name: &str,
) -> Result<LefschetzReport> {
    let n = a.nvars();
    let top = entries.iter().map(|&(k, j)| k + j).max().unwrap_or(0);
    let vars = (0..top)
        .map(|k| a.variable_maps(k))
        .collect::<Result<Vec<_>>>()?;
    let trials = trials.max(1);
    let mut state: Vec<(usize, usize, usize)> = Vec::new(); // first, best, used
    let targets: Vec<usize> = entries
        .iter()
        .map(|&(k, j)| a.hf(k).min(a.hf(k + j)))
        .collect();
    for t in 0..trials {
        let pending: Vec<usize> = if t == 0 {
            (0..entries.len()).collect()
        } else {
            (0..entries.len())
                .filter(|&i| state[i].1 < targets[i])
                .collect()
        };
        if pending.is_empty() {
            break;
        }
        let l: Vec<T> = sample_form(n, seed, name, t as u64);
        let ranks: Vec<usize> = pending
            .par_iter()
            .map(|&i| {
                let (k, j) = entries[i];
                power_map(&vars, &l, k, j).rank()
            })
            .collect();
        if t == 0 {
            state = ranks.iter().map(|&r| (r, r, 1)).collect();
        } else {
            for (&i, r) in pending.iter().zip(ranks) {
                let s = &mut state[i];
                s.1 = s.1.max(r);
                s.2 = t + 1;
            }
        }
    }
    let rational = T::spec().kind == FieldKind::Rational;
    let degrees = entries
        .iter()
        .zip(&targets)
        .zip(&state)
        .map(|((&(k, j), &target), &(first, best, used))| {
            let mut certificate = None;
            let verdict = if best == target {
                Verdict::Pass
            } else if rational {
                let cert = grid_certificate::<T, _>(n, j * target, CERTIFICATE_BUDGET, |l| {
                    power_map(&vars, l, k, j).rank() < target
                });
                match cert {
                    Some(true) => {
                        certificate = Some(format!(
                            "rank < {target} on the grid {{0..{}}}^{n}; a nonzero minor of degree {} cannot vanish there",
                            j * target,
                            j * target
                        ));
                        Verdict::Fail
                    }
                    Some(false) => {
                        certificate = Some("grid point reaches the target rank".into());
                        Verdict::Pass
                    }
                    None => Verdict::Inconclusive,
                }
            } else {
                Verdict::Inconclusive
            };
            let best = if verdict == Verdict::Pass { target } else { best };
            DegreeRecord {
                k,
                j,
                source_dim: a.hf(k),
                target_dim: a.hf(k + j),
                target_rank: target,
                first_rank: first,
                best_rank: best,
                trials_used: used,
                verdict,
                certificate,
            }
        })
        .collect::<Vec<_>>();
    let verdict = Verdict::combine(degrees.iter().map(|r| r.verdict));
    Ok(LefschetzReport {
        seed,
        trials,
        degrees,
        verdict,
    })
}

/// Weak Lefschetz check over every `k ∈ [0, M-1]`.
pub fn wlp_check<T: Field>(a: &Algebra<T>, trials: usize, seed: u64) -> Result<WlpReport> {
    a.require_regular("WLP check")?;
    let socle = a.socle_degree();
    let entries: Vec<(usize, usize)> = (0..socle).map(|k| (k, 1)).collect();
    let report = maximal_rank(a, &entries, trials, seed, "wlp")?;
    let s = a.critical_degree();
    let first = |k: usize| &report.degrees[k];
    let injective = |k: usize| first(k).first_rank == first(k).source_dim;
    let surjective = |k: usize| first(k).first_rank == first(k).target_dim;
    let mut violations = 0;
    for k in 0..socle {
        if injective(k) && (0..k).any(|j| !injective(j)) {
            violations += 1;
        }
        if surjective(k) && (k + 1..socle).any(|j| !surjective(j)) {
            violations += 1;
        }
    }
    let inj_s = socle > 0 && injective(s);
    let all_max = report.degrees.iter().all(|r| r.first_rank == r.target_rank);
    Ok(WlpReport {
        critical_degree: s,
        first_injective_at_critical: inj_s,
        critical_shortcut_consistent: !inj_s || all_max,
        monotonicity_violations: violations,
        report,
    })
}

/// Strong Lefschetz check over all `(k, j)` with `j ≥ 1`, `k + j ≤ M`.
pub fn slp_check<T: Field>(a: &Algebra<T>, trials: usize, seed: u64) -> Result<LefschetzReport> {
    a.require_regular("SLP check")?;
    let socle = a.socle_degree();
    let entries: Vec<(usize, usize)> = (0..socle)
        .flat_map(|k| (1..=socle - k).map(move |j| (k, j)))
        .collect();
    maximal_rank(a, &entries, trials, seed, "slp")
}

/// Injectivity of `μ_z: A_{d-1} → A_d` for a general linear `z`.
pub fn injectivity_lemma_check<T: Field>(a: &Algebra<T>, trials: usize, seed: u64) -> Result<DegreeRecord> {
    a.require_regular("injectivity check")?;
    let report = maximal_rank(a, &[(a.d() - 1, 1)], trials, seed, "injectivity")?;
    Ok(report.degrees.into_iter().next().expect("one entry"))
}

fn require_degree<T: Field>(e: &ElementClass<T>, degree: usize, what: &str) -> Result<()> {
    if e.degree != degree {
        return Err(Error::Degree(format!(
            "{what} needs a class of degree {degree}, got {}",
            e.degree
        )));
    }
    Ok(())
}

/// `𝒬(z) = {Q ∈ A_s : zQ = 0}`.
pub fn q_of_z<T: Field>(a: &Algebra<T>, z: &ElementClass<T>) -> Result<Subspace<T>> {
    a.require_regular("Q(z)")?;
    require_degree(z, 1, "Q(z)")?;
    Ok(a.mult_map_class(z, a.critical_degree())?.kernel_basis())
}

/// `𝒵(Q) = {z ∈ A_1 : zQ = 0}`, in coordinates on `x_0, …, x_m`.
pub fn z_of_q<T: Field>(a: &Algebra<T>, q: &ElementClass<T>) -> Result<Subspace<T>> {
    a.require_regular("Z(Q)")?;
    Ok(a.mult_map_class(q, 1)?.kernel_basis())
}

/// A point `([z], [Q])` of the incidence `zQ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelPair<T> {
    pub z: ElementClass<T>,
    pub q: ElementClass<T>,
    /// `dim 𝒬(z)`, i.e. `ε + 1`.
    pub dim_qz: usize,
    /// `dim 𝒵(Q)`, i.e. `δ + 1`.
    pub dim_zq: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Line,
    Plane,
}

/// Degree of the multiplication map being scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LocusDegree {
    /// `A_s → A_{s+1}`.
    Critical,
    /// `A_{d-1} → A_d`.
    Injectivity,
}

/// A linear form whose multiplication map has a kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusHit<T> {
    /// Index of the scanned line (plane mode: plane index times `p + 1`
    /// plus the line index inside the plane).
    pub line: usize,
    /// Normalized so the first nonzero coordinate is 1.
    pub z: Vec<T>,
    pub kernel: Subspace<T>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineScan<T> {
    pub hits: Vec<LocusHit<T>>,
    /// The determinant vanishes along the whole line.
    pub singular: bool,
    /// Every point was examined (singular lines within budget).
    pub enumerated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusScan<T> {
    pub mode: ScanMode,
    pub degree: LocusDegree,
    pub k: usize,
    pub samples: usize,
    pub lines_scanned: u64,
    pub points_scanned: u64,
    pub hits: Vec<LocusHit<T>>,
    pub pairs: Vec<KernelPair<T>>,
    /// Largest hit count on a line whose determinant is not identically 0.
    pub max_hits_per_line: usize,
    /// Determinant degree bound on hits per line (square maps only).
    pub hit_bound: Option<usize>,
    pub singular_lines: usize,
}

fn normalize<T: Field>(v: &[T]) -> Vec<T> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            v.iter().map(|c| c.clone() * inv.clone()).collect()
        }
        None => v.to_vec(),
    }
}

fn axpy<T: Field>(t: &T, x: &[T], y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(a, b)| t.clone() * a.clone() + b.clone()).collect()
}

/// Scans the line through `[z1]` and `[z2]` for forms whose map
/// `A_k → A_{k+1}` (variable maps `vars`) has a kernel. Points are
/// `t·z1 + z2` for `t ∈ F_p` and `z1` itself; candidates are the roots of
/// `det(R·Φ)`, where `R` compresses a non-square `Φ`, and each candidate is
/// confirmed by a kernel computation. `skip_origin` drops `z2`.
pub fn scan_line<T: Field>(
    vars: &[Matrix<T>],
    z1: &[T],
    z2: &[T],
    projection: Option<&Matrix<T>>,
    skip_origin: bool,
    enumeration_budget: u64,
) -> Result<LineScan<T>> {
    let p = T::characteristic();
    if p == 0 {
        return Err(Error::Unsupported("locus scans need a prime field".into()));
    }
    let phi = |v: &[T]| linear_map(vars, v);
    let square = |m: Matrix<T>| match projection {
        Some(r) => r.mul(&m).expect("projection matches the target"),
        None => m,
    };
    let n = vars[0].cols();
    if p <= n as u64 + 1 {
        return Err(Error::Field(format!("p = {p} is too small to interpolate a degree {n} determinant")));
    }
    let nodes: Vec<T> = (0..=n as i64).map(T::from_i64).collect();
    let values = nodes
        .iter()
        .map(|t| square(phi(&axpy(t, z1, z2))).det())
        .collect::<Result<Vec<_>>>()?;
    let det = UniPoly::interpolate(&nodes, &values)?;

    let (candidates, singular, enumerated): (Vec<Option<T>>, bool, bool) = if det.is_zero() {
        if p + 1 > enumeration_budget {
            return Ok(LineScan {
                hits: Vec::new(),
                singular: true,
                enumerated: false,
            });
        }
        let mut all: Vec<Option<T>> = (0..p as i64).map(|t| Some(T::from_i64(t))).collect();
        all.push(None);
        (all, true, true)
    } else {
        let mut c: Vec<Option<T>> = det.roots()?.into_iter().map(Some).collect();
        c.push(None);
        (c, false, false)
    };
    let hits = candidates
        .par_iter()
        .filter(|t| !(skip_origin && t.as_ref().is_some_and(T::is_zero)))
        .filter_map(|t| {
            let z = match t {
                Some(t) => axpy(t, z1, z2),
                None => z1.to_vec(),
            };
            let kernel = phi(&z).kernel_basis();
            (kernel.dim() > 0).then(|| LocusHit {
                line: 0,
                z: normalize(&z),
                kernel,
            })
        })
        .collect();
    Ok(LineScan {
        hits,
        singular,
        enumerated,
    })
}

fn independent_vectors<T: Field, R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Vec<Vec<T>> {
    loop {
        let vs: Vec<Vec<T>> = (0..count)
            .map(|_| (0..n).map(|_| T::sample(rng)).collect())
            .collect();
        if Matrix::from_rows(n, vs.clone()).expect("width n").rank() == count {
            return vs;
        }
    }
}

fn random_matrix<T: Field, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix<T> {
    let data = (0..rows * cols).map(|_| T::sample(rng)).collect();
    Matrix::new(rows, cols, data).expect("sized data")
}

/// Harvests forms `z` with `ker μ_z ≠ 0` from random lines (or all lines
/// through a point of random planes) and attaches their kernel pairs.
pub fn locus_scan<T: Field>(
    a: &Algebra<T>,
    mode: ScanMode,
    degree: LocusDegree,
    samples: usize,
    seed: u64,
    enumeration_budget: u64,
) -> Result<LocusScan<T>> {
    let p = T::characteristic();
    if p == 0 {
        return Err(Error::Unsupported("locus scans need a prime field".into()));
    }
    a.require_regular("locus scan")?;
    let k = match degree {
        LocusDegree::Critical => a.critical_degree(),
        LocusDegree::Injectivity => a.d() - 1,
    };
    let (src, dst) = (a.hf(k), a.hf(k + 1));
    if src > dst {
        return Err(Error::Unsupported(format!(
            "A_{k} → A_{} is never injective ({src} > {dst})",
            k + 1
        )));
    }
    let n = a.nvars();
    let vars = a.variable_maps(k)?;
    let mut scans: Vec<(usize, LineScan<T>)> = Vec::new();
    let lines_scanned;
    let points_scanned;
    match mode {
        ScanMode::Line => {
            let out = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream(seed, "locus.line", i as u64);
                    let zs = independent_vectors::<T, _>(n, 2, &mut rng);
                    let proj = (dst > src).then(|| random_matrix(src, dst, &mut rng));
                    scan_line(&vars, &zs[0], &zs[1], proj.as_ref(), false, enumeration_budget)
                        .map(|s| (i, s))
                })
                .collect::<Result<Vec<_>>>()?;
            scans.extend(out);
            lines_scanned = samples as u64;
            points_scanned = samples as u64 * (p + 1);
        }
        ScanMode::Plane => {
            for i in 0..samples {
                let mut rng = stream(seed, "locus.plane", i as u64);
                let zs = independent_vectors::<T, _>(n, 3, &mut rng);
                let proj = (dst > src).then(|| random_matrix(src, dst, &mut rng));
                let out = (0..=p)
                    .into_par_iter()
                    .map(|c| {
                        let dir = if c < p {
                            axpy(&T::from_i64(c as i64), &zs[2], &zs[0])
                        } else {
                            zs[2].clone()
                        };
                        let line = i * (p as usize + 1) + c as usize;
                        scan_line(&vars, &dir, &zs[1], proj.as_ref(), c > 0, enumeration_budget)
                            .map(|s| (line, s))
                    })
                    .collect::<Result<Vec<_>>>()?;
                scans.extend(out);
            }
            lines_scanned = samples as u64 * (p + 1);
            points_scanned = samples as u64 * (p * p + p + 1);
        }
    }

    let mut hits = Vec::new();
    let mut max_hits_per_line = 0;
    let mut singular_lines = 0;
    for (line, scan) in scans {
        if scan.singular {
            singular_lines += 1;
        } else {
            max_hits_per_line = max_hits_per_line.max(scan.hits.len());
        }
        hits.extend(scan.hits.into_iter().map(|mut h| {
            h.line = line;
            h
        }));
    }
    let pairs = hits
        .par_iter()
        .map(|h| {
            let z = a.class_of(&Poly::linear(&h.z, Side::Operator))?;
            h.kernel
                .basis_vectors()
                .into_iter()
                .map(|v| {
                    let q = ElementClass { degree: k, coords: v };
                    let dim_zq = z_of_q(a, &q)?.dim();
                    Ok(KernelPair {
                        z: z.clone(),
                        q,
                        dim_qz: h.kernel.dim(),
                        dim_zq,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(LocusScan {
        mode,
        degree,
        k,
        samples,
        lines_scanned,
        points_scanned,
        hits,
        pairs,
        max_hits_per_line,
        hit_bound: (src == dst).then_some(src),
        singular_lines,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma61Record {
    /// Source degree of `μ_Q: A_k → A_{M-1}`.
    pub k: usize,
    pub rank: usize,
    pub coker_dim: usize,
    pub z_dim: usize,
    pub holds: bool,
}

/// `dim coker(μ_Q: A_k → A_{M-1}) = dim 𝒵(Q)` with `k = M - deg Q - 1`.
pub fn lemma61_check<T: Field>(a: &Algebra<T>, q: &ElementClass<T>) -> Result<Lemma61Record> {
    a.require_regular("Lemma 6.1 check")?;
    if q.is_zero() {
        return Err(Error::Malformed("Q must be a nonzero class".into()));
    }
    let socle = a.socle_degree();
    if q.degree + 1 > socle {
        return Err(Error::Degree(format!("deg Q = {} leaves no source degree", q.degree)));
    }
    let k = socle - q.degree - 1;
    let rank = a.mult_map_class(q, k)?.rank();
    let coker_dim = a.hf(socle - 1) - rank;
    let z_dim = z_of_q(a, q)?.dim();
    Ok(Lemma61Record {
        k,
        rank,
        coker_dim,
        z_dim,
        holds: coker_dim == z_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma63Record {
    pub checked: usize,
    pub max_dim: Option<usize>,
    pub violations: usize,
    /// No nonzero pair was supplied.
    pub vacuous: bool,
    pub holds: bool,
}

/// `dim 𝒵(Q) ≤ 2` for every nonzero harvested `Q` (m = 4, d = 2).
pub fn lemma63_check<T: Field>(a: &Algebra<T>, pairs: &[KernelPair<T>]) -> Result<Lemma63Record> {
    if (a.m(), a.d()) != (4, 2) {
        return Err(Error::Unsupported(format!(
            "Lemma 6.3 concerns m = 4, d = 2, got m = {}, d = {}",
            a.m(),
            a.d()
        )));
    }
    let dims = pairs
        .iter()
        .filter(|p| !p.q.is_zero())
        .map(|p| z_of_q(a, &p.q).map(|s| s.dim()))
        .collect::<Result<Vec<_>>>()?;
    let violations = dims.iter().filter(|&&d| d > 2).count();
    Ok(Lemma63Record {
        checked: dims.len(),
        max_dim: dims.iter().copied().max(),
        violations,
        vacuous: dims.is_empty(),
        holds: violations == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma64Record {
    pub z_dim: usize,
    /// `dim 𝒵(Q)·A_{s-1}` inside `A_s`.
    pub product_dim: usize,
    pub inclusion_holds: bool,
    /// Reported only; not implied by the pair.
    pub q_squared_zero: bool,
}

/// `𝒵(Q)·A_{s-1} ⊆ ker(μ_Q: A_s → A_{2s})`.
pub fn lemma64_partial_check<T: Field>(a: &Algebra<T>, pair: &KernelPair<T>) -> Result<Lemma64Record> {
    a.require_regular("Lemma 6.4 check")?;
    let q = &pair.q;
    let s = q.degree;
    if s == 0 {
        return Err(Error::Degree("Q must have positive degree".into()));
    }
    let n = a.nvars();
    let zq = z_of_q(a, q)?;
    let mut vectors = Vec::new();
    for z in zq.basis_vectors() {
        let map = a.mult_map(&Poly::linear(&z, Side::Operator), s - 1)?;
        for c in 0..map.cols() {
            vectors.push(map.column(c));
        }
    }
    let product = Subspace::from_vectors(a.hf(s), vectors)?;
    let mu_q = a.mult_map_class(q, s)?;
    let inclusion_holds = product
        .basis_vectors()
        .iter()
        .all(|v| mu_q.mul_vec(v).map(|w| w.iter().all(T::is_zero)).unwrap_or(false));
    let _ = n;
    Ok(Lemma64Record {
        z_dim: zq.dim(),
        product_dim: product.dim(),
        inclusion_holds,
        q_squared_zero: a.multiply(q, q)?.is_zero(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma52Record {
    pub pairs: usize,
    pub coordinate_pairs: usize,
    pub structured_pairs: usize,
    pub random_pairs: usize,
    /// `2m - 1`.
    pub bound: usize,
    pub min_image_dim: usize,
    pub max_image_dim: usize,
    pub equality_pairs: usize,
    pub max_intersection_dim: usize,
    pub image_violations: usize,
    pub intersection_violations: usize,
    pub holds: bool,
}

/// `dim ⟨z,w⟩A_1` in `A_2`.
pub fn pair_image_dim<T: Field>(a: &Algebra<T>, z: &Poly<T>, w: &Poly<T>) -> Result<usize> {
    let mut vectors = Vec::new();
    for l in [z, w] {
        let map = a.mult_map(l, 1)?;
        vectors.extend((0..map.cols()).map(|c| map.column(c)));
    }
    Ok(Subspace::from_vectors(a.hf(2), vectors)?.dim())
}

/// Lemma 5.2(1) and the `≤ 2` incidence bound over coordinate pairs, pairs
/// built from `structured` forms, and `samples` random pairs (d = 2).
pub fn lemma52_check<T: Field>(
    a: &Algebra<T>,
    samples: usize,
    seed: u64,
    structured: &[Vec<T>],
) -> Result<Lemma52Record> {
    a.require_regular("Lemma 5.2 check")?;
    if a.d() != 2 {
        return Err(Error::Unsupported("Lemma 5.2 concerns quadrics".into()));
    }
    let n = a.nvars();
    let unit = |i: usize| {
        let mut v = vec![T::zero(); n];
        v[i] = T::one();
        v
    };
    let independent = |z: &[T], w: &[T]| {
        Matrix::from_rows(n, vec![z.to_vec(), w.to_vec()])
            .map(|m| m.rank() == 2)
            .unwrap_or(false)
    };
    let mut pairs: Vec<(Vec<T>, Vec<T>)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((unit(i), unit(j)));
        }
    }
    let coordinate_pairs = pairs.len();
    for (i, z) in structured.iter().enumerate() {
        let partners = (0..n).map(unit).chain(structured[i + 1..].iter().cloned());
        for w in partners {
            if independent(z, &w) {
                pairs.push((z.clone(), w));
            }
        }
    }
    let structured_pairs = pairs.len() - coordinate_pairs;
    for t in 0..samples {
        let mut rng = stream(seed, "lemma52", t as u64);
        let zs = independent_vectors::<T, _>(n, 2, &mut rng);
        pairs.push((zs[0].clone(), zs[1].clone()));
    }
    let dims = pairs
        .par_iter()
        .map(|(z, w)| {
            let z = Poly::linear(z, Side::Operator);
            let w = Poly::linear(w, Side::Operator);
            Ok((pair_image_dim(a, &z, &w)?, strata::upsilon_probe(a, &z, &w)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let bound = 2 * a.m() - 1;
    let image_violations = dims.iter().filter(|d| d.0 < bound).count();
    let intersection_violations = dims.iter().filter(|d| d.1 > 2).count();
    Ok(Lemma52Record {
        pairs: pairs.len(),
        coordinate_pairs,
        structured_pairs,
        random_pairs: samples,
        bound,
        min_image_dim: dims.iter().map(|d| d.0).min().unwrap_or(0),
        max_image_dim: dims.iter().map(|d| d.0).max().unwrap_or(0),
        equality_pairs: dims.iter().filter(|d| d.0 == bound).count(),
        max_intersection_dim: dims.iter().map(|d| d.1).max().unwrap_or(0),
        image_violations,
        intersection_violations,
        holds: image_violations == 0 && intersection_violations == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimVa1Record {
    pub v_dim: usize,
    pub span_dim: usize,
    pub hf2: usize,
    pub holds: bool,
}

/// `A_2 = V·A_1` for `V` the linear forms vanishing at `p` (d = 2).
pub fn claim_va1_check<T: Field>(a: &Algebra<T>, p: &[T]) -> Result<ClaimVa1Record> {
    a.require_regular("A_2 = V A_1 check")?;
    if a.d() != 2 {
        return Err(Error::Unsupported("the claim concerns quadrics".into()));
    }
    let n = a.nvars();
    if p.len() != n {
        return Err(Error::Malformed(format!("point with {} coordinates for {n} variables", p.len())));
    }
    if p.iter().all(T::is_zero) {
        return Err(Error::Malformed("the zero vector is not a point".into()));
    }
    let v = Matrix::from_rows(n, vec![p.to_vec()])?.kernel_basis();
    let mut vectors = Vec::new();
    for l in v.basis_vectors() {
        let map = a.mult_map(&Poly::linear(&l, Side::Operator), 1)?;
        vectors.extend((0..map.cols()).map(|c| map.column(c)));
    }
    let hf2 = a.hf(2);
    let span_dim = Subspace::from_vectors(hf2, vectors)?.dim();
    Ok(ClaimVa1Record {
        v_dim: v.dim(),
        span_dim,
        hf2,
        holds: span_dim == hf2,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairProduct {
    pub i: usize,
    pub j: usize,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairProductRecord {
    pub kernel_dim: usize,
    pub products: Vec<PairProduct>,
}

/// Whether `QQ' = 0` in `A_{2s}` for basis elements `Q, Q'` of `𝒬(z)`.
/// Exploratory; nothing is asserted.
pub fn pair_product_probe<T: Field>(a: &Algebra<T>, z: &ElementClass<T>) -> Result<PairProductRecord> {
    let kernel = q_of_z(a, z)?;
    let s = a.critical_degree();
    let basis: Vec<ElementClass<T>> = kernel
        .basis_vectors()
        .into_iter()
        .map(|coords| ElementClass { degree: s, coords })
        .collect();
    let mut products = Vec::new();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            products.push(PairProduct {
                i,
                j,
                zero: a.multiply(&basis[i], &basis[j])?.is_zero(),
            });
        }
    }
    Ok(PairProductRecord {
        kernel_dim: kernel.dim(),
        products,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::instance::Instance;
    use crate::poly::Monomial;
    use num_rational::BigRational;
    use num_traits::Zero;

    type F = Fp<65521>;
    type Q = BigRational;

    fn monomial<T: Field>(m: usize, d: usize) -> Algebra<T> {
        Algebra::new(Instance::monomial(m, d).unwrap())
    }

    fn class_of_monomial<T: Field>(a: &Algebra<T>, exps: &[u32]) -> ElementClass<T> {
        a.class_of(&Poly::monomial(Monomial::new(exps.to_vec()), T::one(), Side::Operator))
            .unwrap()
    }

    #[test]
    fn wlp_monomial_quadrics() {
        let a = monomial::<F>(4, 2);
        let r = wlp_check(&a, 8, 1).unwrap();
        assert_eq!(r.report.verdict, Verdict::Pass);
        assert_eq!(r.report.degrees.len(), 5);
        assert_eq!(r.monotonicity_violations, 0);
        assert!(r.critical_shortcut_consistent);
    }

    #[test]
    fn slp_power_example() {
        // L^5 with L = Σx_i is 5!·x0x1x2x3x4 ≠ 0 in A_5.
        let a = monomial::<Q>(4, 2);
        let l = Poly::linear(&vec![Q::from_i64(1); 5], Side::Operator);
        let l5 = l.power(5).unwrap();
        assert_eq!(a.mult_map(&l5, 0).unwrap().rank(), 1);
        let r = slp_check(&monomial::<F>(2, 2), 8, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.degrees.len(), 6);
        let w = wlp_check(&monomial::<F>(2, 2), 8, 3).unwrap();
        for d in &w.report.degrees {
            assert_eq!(r.record(d.k, 1).unwrap().first_rank, d.first_rank);
        }
    }

    #[test]
    fn injectivity_lemma_m4() {
        let a = monomial::<F>(4, 2);
        let r = injectivity_lemma_check(&a, 8, 0).unwrap();
        assert_eq!(r.best_rank, 5);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn certificate_detects_zero_family() {
        let zero = |_: &[Q]| true;
        assert_eq!(grid_certificate::<Q, _>(3, 2, 100, zero), Some(true));
        assert_eq!(grid_certificate::<Q, _>(3, 9, 100, zero), None);
        // rank of the 1×1 map [a0 - a1] is below 1 only on the diagonal.
        let diag = |a: &[Q]| a[0] == a[1];
        assert_eq!(grid_certificate::<Q, _>(2, 1, 100, diag), Some(false));
    }

    #[test]
    fn kernel_spaces_monomial() {
        let a = monomial::<F>(4, 2);
        let x0 = class_of_monomial(&a, &[1, 0, 0, 0, 0]);
        assert_eq!(q_of_z(&a, &x0).unwrap().dim(), 4);
        let x0x1 = class_of_monomial(&a, &[1, 1, 0, 0, 0]);
        let zq = z_of_q(&a, &x0x1).unwrap();
        assert_eq!(zq.dim(), 2);
        let expect = Subspace::from_vectors(
            5,
            vec![
                vec![F::from_i64(1), F::zero(), F::zero(), F::zero(), F::zero()],
                vec![F::zero(), F::from_i64(1), F::zero(), F::zero(), F::zero()],
            ],
        )
        .unwrap();
        assert_eq!(zq, expect);
        let q = a.lift(&x0x1).unwrap();
        assert_eq!(crate::inverse::vertex_space(&a, &q).unwrap().space, zq);

        let sum = a
            .class_of(&Poly::linear(&[F::from_i64(1), F::from_i64(1), F::zero(), F::zero(), F::zero()], Side::Operator))
            .unwrap();
        let qz = q_of_z(&a, &sum).unwrap();
        assert!(qz.contains(&x0x1.coords).unwrap());
    }

    #[test]
    fn lemma61_monomial_pairs() {
        let a = monomial::<F>(4, 2);
        for i in 0..5 {
            for j in i + 1..5 {
                let mut e = [0u32; 5];
                e[i] = 1;
                e[j] = 1;
                let rec = lemma61_check(&a, &class_of_monomial(&a, &e)).unwrap();
                assert_eq!((rec.rank, rec.coker_dim, rec.z_dim), (3, 2, 2));
                assert!(rec.holds);
            }
        }
        let zero = ElementClass { degree: 2, coords: vec![F::zero(); 10] };
        assert!(lemma61_check(&a, &zero).is_err());
    }

    #[test]
    fn lemma64_and_products_monomial() {
        let a = monomial::<F>(4, 2);
        let z = class_of_monomial(&a, &[1, 0, 0, 0, 0]);
        let q = class_of_monomial(&a, &[1, 1, 0, 0, 0]);
        let pair = KernelPair { z: z.clone(), q, dim_qz: 4, dim_zq: 2 };
        let rec = lemma64_partial_check(&a, &pair).unwrap();
        assert_eq!(rec.product_dim, 7);
        assert!(rec.inclusion_holds);
        assert!(rec.q_squared_zero);
        let probe = pair_product_probe(&a, &z).unwrap();
        assert_eq!(probe.kernel_dim, 4);
        assert!(probe.products.iter().all(|p| p.zero));
        let lemma63 = lemma63_check(&a, &[pair]).unwrap();
        assert_eq!(lemma63.max_dim, Some(2));
        assert!(lemma63_check(&a, &[]).unwrap().vacuous);
    }

    #[test]
    fn lemma52_monomial() {
        let a = monomial::<F>(4, 2);
        let rec = lemma52_check(&a, 50, 9, &[]).unwrap();
        assert_eq!(rec.coordinate_pairs, 10);
        assert_eq!(rec.min_image_dim, 7);
        assert_eq!(rec.max_image_dim, 9);
        assert!(rec.holds);
    }

    #[test]
    fn claim_va1_monomial() {
        let a = monomial::<F>(4, 2);
        let p = [F::from_i64(1), F::zero(), F::zero(), F::zero(), F::zero()];
        let rec = claim_va1_check(&a, &p).unwrap();
        assert_eq!((rec.v_dim, rec.span_dim), (4, 10));
        assert!(claim_va1_check(&a, &[F::zero(); 5]).is_err());
    }

    #[test]
    fn line_through_coordinate_points() {
        type G = Fp<101>;
        let a = monomial::<G>(4, 2);
        let vars = a.variable_maps(2).unwrap();
        let e = |i: usize| (0..5).map(|j| G::from_i64((i == j) as i64)).collect::<Vec<_>>();
        let scan = scan_line(&vars, &e(0), &e(1), None, false, 1000).unwrap();
        assert!(scan.singular && scan.enumerated);
        assert_eq!(scan.hits.len(), 102);
        let x0x1 = class_of_monomial(&a, &[1, 1, 0, 0, 0]);
        assert!(scan.hits.iter().all(|h| h.kernel.contains(&x0x1.coords).unwrap()));
        assert!(locus_scan(&monomial::<Q>(4, 2), ScanMode::Line, LocusDegree::Critical, 1, 0, 10).is_err());
    }
}
