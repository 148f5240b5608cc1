//! Quadric-specific probes: Gram matrices, rank strata of `P(I_2)`, pencil
//! rank profiles, the `⟨z,w⟩U* ∩ I_2` incidence count, and rank-one scans.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{Field, Fp};
use crate::matrix::Matrix;
use crate::poly::{MonomialBasis, Poly, Side};
use crate::rng::stream;
use crate::subspace::Subspace;
use crate::univariate::UniPoly;

/// Quadratic form with its symmetric Gram matrix, `Q(x) = xᵀ G x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm<T> {
    pub q: Poly<T>,
    pub g: Matrix<T>,
}

impl<T: Field> GramForm<T> {
    pub fn rank(&self) -> usize {
        self.g.rank()
    }

    pub fn evaluate(&self, x: &[T]) -> Result<T> {
        let gx = self.g.mul_vec(x)?;
        Ok(crate::matrix::dot(x, &gx))
    }
}

pub fn gram<T: Field>(q: &Poly<T>) -> Result<GramForm<T>> {
    if q.degree() != 2 {
        return Err(Error::Degree(format!("Gram matrix of a degree {} form", q.degree())));
    }
    let half = T::from_i64(2)
        .inv()
        .ok_or_else(|| Error::Field("characteristic 2 has no Gram matrices".into()))?;
    let n = q.nvars();
    let mut g = Matrix::zeros(n, n);
    for (mono, c) in q.terms() {
        let idx: Vec<usize> = mono
            .exps()
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            g[(i, i)] = c.clone();
        } else {
            let v = c.clone() * half.clone();
            g[(i, j)] = v.clone();
            g[(j, i)] = v;
        }
    }
    Ok(GramForm { q: q.clone(), g })
}

fn require_quadrics<T: Field>(a: &Algebra<T>) -> Result<()> {
    if a.d() != 2 {
        return Err(Error::Unsupported(format!(
            "quadric probes need d = 2, got d = {}",
            a.d()
        )));
    }
    Ok(())
}

fn require_prime<T: Field>(what: &str) -> Result<u64> {
    match T::characteristic() {
        0 => Err(Error::Unsupported(format!("{what} needs a prime field"))),
        p => Ok(p),
    }
}

/// Histogram of Gram ranks of random elements of `I_2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumHistogram {
    /// `counts[r - 1]` is the number of samples of rank `r`.
    pub counts: Vec<usize>,
    pub samples: usize,
    pub rejected: usize,
    pub full_rank_fraction: f64,
    pub threshold: f64,
    pub anomaly: bool,
}

pub fn stratum_sample<T: Field>(a: &Algebra<T>, samples: usize, seed: u64) -> Result<StratumHistogram> {
    require_quadrics(a)?;
    let n = a.nvars();
    let gens = a.instance().generators();
    let mut counts = vec![0usize; n];
    let mut rejected = 0;
    for i in 0..samples {
        let mut rng = stream(seed, "strata.sample", i as u64);
        let form = loop {
            let coeffs: Vec<T> = gens.iter().map(|_| T::sample(&mut rng)).collect();
            if coeffs.iter().all(T::is_zero) {
                rejected += 1;
                continue;
            }
            let mut f = Poly::zero(n, 2, Side::Operator);
            for (c, g) in coeffs.iter().zip(gens) {
                f = f.add(&g.scale(c))?;
            }
            break f;
        };
        let r = gram(&form)?.rank();
        counts[r - 1] += 1;
    }
    let full = counts[n - 1];
    let fraction = if samples == 0 {
        1.0
    } else {
        full as f64 / samples as f64
    };
    let threshold =
        (1.0 - (samples as f64 * n as f64) / T::sample_space_size() as f64).max(0.0);
    Ok(StratumHistogram {
        counts,
        samples,
        rejected,
        full_rank_fraction: fraction,
        threshold,
        anomaly: fraction < threshold,
    })
}

/// A point `[λ : μ]` of a pencil `λ Q1 + μ Q2` with its Gram rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilPoint<T> {
    pub lambda: T,
    pub mu: T,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilProfile<T> {
    /// Members of rank below `m + 1`, in scan order (`[t : 1]` by `t`,
    /// then `[1 : 0]`).
    pub degenerate_points: Vec<PencilPoint<T>>,
    pub full_rank_points: u64,
    /// The Gram determinant vanishes on the whole pencil.
    pub identically_singular: bool,
}

impl<T: Field> PencilProfile<T> {
    pub fn min_rank(&self) -> Option<usize> {
        self.degenerate_points.iter().map(|p| p.rank).min()
    }
}

fn pencil_member<T: Field>(q1: &Matrix<T>, q2: &Matrix<T>, lambda: &T, mu: &T) -> Matrix<T> {
    Matrix::zeros(q2.rows(), q2.cols())
        .add_scaled(mu, q2)
        .and_then(|m| m.add_scaled(lambda, q1))
        .expect("Gram matrices of equal size")
}

fn check_pencil<T: Field>(a: &Algebra<T>, q1: &Poly<T>, q2: &Poly<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    require_quadrics(a)?;
    let basis = a.monomials(2)?;
    let i2 = a.ideal(2)?;
    let v1 = q1.to_dense(basis)?;
    let v2 = q2.to_dense(basis)?;
    if !i2.contains(&v1)? || !i2.contains(&v2)? {
        return Err(Error::Malformed("pencil generators must lie in I_2".into()));
    }
    if Subspace::from_vectors(basis.len(), vec![v1, v2])?.dim() != 2 {
        return Err(Error::Malformed("pencil generators are dependent".into()));
    }
    Ok((gram(q1)?.g, gram(q2)?.g))
}

/// Ranks along the pencil `λ Q1 + μ Q2`, locating singular members as the
/// roots of the degree `m + 1` binary determinant.
pub fn pencil_profile<T: Field>(
    a: &Algebra<T>,
    q1: &Poly<T>,
    q2: &Poly<T>,
    enumeration_budget: u64,
) -> Result<PencilProfile<T>> {
    let p = require_prime::<T>("pencil profile")?;
    let (g1, g2) = check_pencil(a, q1, q2)?;
    let n = a.nvars();
    let nodes: Vec<T> = (0..=n as i64).map(T::from_i64).collect();
    let values = nodes
        .iter()
        .map(|t| pencil_member(&g1, &g2, t, &T::one()).det())
        .collect::<Result<Vec<_>>>()?;
    let det = UniPoly::interpolate(&nodes, &values)?;
    if det.is_zero() {
        if p + 1 > enumeration_budget {
            return Ok(PencilProfile {
                degenerate_points: Vec::new(),
                full_rank_points: 0,
                identically_singular: true,
            });
        }
        let mut prof = pencil_profile_enumerate(a, q1, q2)?;
        prof.identically_singular = true;
        return Ok(prof);
    }
    let mut degenerate_points = Vec::new();
    for t in det.roots()? {
        let rank = pencil_member(&g1, &g2, &t, &T::one()).rank();
        degenerate_points.push(PencilPoint {
            lambda: t,
            mu: T::one(),
            rank,
        });
    }
    let rank_inf = g1.rank();
    if rank_inf < n {
        degenerate_points.push(PencilPoint {
            lambda: T::one(),
            mu: T::zero(),
            rank: rank_inf,
        });
    }
    Ok(PencilProfile {
        full_rank_points: p + 1 - degenerate_points.len() as u64,
        degenerate_points,
        identically_singular: false,
    })
}

/// Same profile by computing the rank at all `p + 1` points.
pub fn pencil_profile_enumerate<T: Field>(
    a: &Algebra<T>,
    q1: &Poly<T>,
    q2: &Poly<T>,
) -> Result<PencilProfile<T>> {
    let p = require_prime::<T>("pencil profile")?;
    let (g1, g2) = check_pencil(a, q1, q2)?;
    let n = a.nvars();
    let mut points: Vec<(T, T)> = (0..p as i64).map(|t| (T::from_i64(t), T::one())).collect();
    points.push((T::one(), T::zero()));
    let ranks: Vec<usize> = points
        .par_iter()
        .map(|(l, m)| pencil_member(&g1, &g2, l, m).rank())
        .collect();
    let mut degenerate_points = Vec::new();
    let mut full = 0;
    for ((lambda, mu), rank) in points.into_iter().zip(ranks) {
        if rank < n {
            degenerate_points.push(PencilPoint { lambda, mu, rank });
        } else {
            full += 1;
        }
    }
    let identically_singular = full == 0;
    Ok(PencilProfile {
        degenerate_points,
        full_rank_points: full,
        identically_singular,
    })
}

/// Random pencil inside `I_2`.
pub fn random_pencil<T: Field, R: Rng + ?Sized>(a: &Algebra<T>, rng: &mut R) -> Result<(Poly<T>, Poly<T>)> {
    require_quadrics(a)?;
    let gens = a.instance().generators();
    let n = a.nvars();
    let combo = |rng: &mut R| -> Result<Poly<T>> {
        let mut f = Poly::zero(n, 2, Side::Operator);
        for g in gens {
            f = f.add(&g.scale(&T::sample(rng)))?;
        }
        Ok(f)
    };
    let basis = a.monomials(2)?;
    loop {
        let q1 = combo(rng)?;
        let q2 = combo(rng)?;
        let span = Subspace::from_vectors(basis.len(), vec![q1.to_dense(basis)?, q2.to_dense(basis)?])?;
        if span.dim() == 2 {
            return Ok((q1, q2));
        }
    }
}

/// The degree-2 piece of the ideal `(z, w)`, i.e. `⟨z, w⟩ U*`, inside `S^2`.
pub fn pair_quadrics<T: Field>(basis: &MonomialBasis, z: &Poly<T>, w: &Poly<T>) -> Result<Subspace<T>> {
    let n = basis.nvars();
    let mut vectors = Vec::with_capacity(2 * n);
    for l in [z, w] {
        for i in 0..n {
            vectors.push(l.multiply(&Poly::var(n, i, Side::Operator))?.to_dense(basis)?);
        }
    }
    Subspace::from_vectors(basis.len(), vectors)
}

/// `dim(⟨z, w⟩ U* ∩ I_2)`; at most 2 for a complete intersection.
pub fn upsilon_probe<T: Field>(a: &Algebra<T>, z: &Poly<T>, w: &Poly<T>) -> Result<usize> {
    require_quadrics(a)?;
    if z.degree() != 1 || w.degree() != 1 {
        return Err(Error::Degree("probe needs two linear forms".into()));
    }
    let basis = a.monomials(2)?;
    let lin = a.monomials(1)?;
    if Subspace::from_vectors(lin.len(), vec![z.to_dense(lin)?, w.to_dense(lin)?])?.dim() != 2 {
        return Err(Error::Malformed("z and w must be independent".into()));
    }
    let pair = pair_quadrics(basis, z, w)?;
    Ok(pair.intersection(a.ideal(2)?)?.dim())
}

/// Rank-one members found in `P(I_2)` after reduction to `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VeroneseScan {
    pub q: u64,
    pub exhaustive: bool,
    pub points_scanned: u64,
    /// The rank-one quadrics, in canonical text form.
    pub hits: Vec<String>,
}

/// Scans `P(I_2)` over the scan field `G` for rank-one quadrics: all points
/// when they fit in `budget`, otherwise `budget` seeded samples.
pub fn veronese_scan<T: Field, G: Field>(a: &Algebra<T>, budget: u64, seed: u64) -> Result<VeroneseScan> {
    require_quadrics(a)?;
    let q = require_prime::<G>("rank-one scan")?;
    if q == 2 {
        return Err(Error::Field("rank-one scan needs an odd prime".into()));
    }
    let n = a.nvars();
    let basis = MonomialBasis::new(n, 2);
    let reduced = a.instance().reduce_generators::<G>()?;
    let rows = reduced
        .iter()
        .map(|g| g.to_dense(&basis))
        .collect::<Result<Vec<_>>>()?;
    let span = Subspace::from_vectors(basis.len(), rows)?;
    let gens: Vec<Poly<G>> = span
        .basis_vectors()
        .iter()
        .map(|v| Poly::from_dense(&basis, v, Side::Operator))
        .collect::<Result<_>>()?;
    let r = gens.len();
    let total = (q as u128).pow(r as u32);
    let combine = |coeffs: &[G]| -> Poly<G> {
        let mut f = Poly::zero(n, 2, Side::Operator);
        for (c, g) in coeffs.iter().zip(&gens) {
            f = f.add(&g.scale(c)).expect("same shape");
        }
        f
    };
    let is_rank_one = |f: &Poly<G>| gram(f).map(|g| g.rank() == 1).unwrap_or(false);

    if total <= budget as u128 {
        let decode = |mut idx: u64| {
            let mut c = vec![0u64; r];
            for slot in c.iter_mut().rev() {
                *slot = idx % q;
                idx /= q;
            }
            c
        };
        let mut hits: Vec<String> = (1..total as u64)
            .into_par_iter()
            .filter_map(|idx| {
                let c = decode(idx);
                if c.iter().find(|&&v| v != 0) != Some(&1) {
                    return None;
                }
                let coeffs: Vec<G> = c.iter().map(|&v| G::from_i64(v as i64)).collect();
                let f = combine(&coeffs);
                is_rank_one(&f).then(|| f.to_string())
            })
            .collect();
        hits.sort();
        let scanned = (total as u64 - 1) / (q - 1);
        return Ok(VeroneseScan {
            q,
            exhaustive: true,
            points_scanned: scanned,
            hits,
        });
    }
    let mut hits: Vec<String> = (0..budget)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = stream(seed, "strata.veronese", i);
            let coeffs: Vec<G> = (0..r).map(|_| G::sample(&mut rng)).collect();
            if coeffs.iter().all(G::is_zero) {
                return None;
            }
            let f = combine(&coeffs);
            is_rank_one(&f).then(|| f.scale(&f.lead_coeff().cloned().unwrap_or_else(G::one).inv().unwrap_or_else(G::one)).to_string())
        })
        .collect();
    hits.sort();
    hits.dedup();
    Ok(VeroneseScan {
        q,
        exhaustive: false,
        points_scanned: budget,
        hits,
    })
}

/// Odd primes accepted as rank-one scan fields.
pub const SCAN_PRIMES: &[u64] = &[3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

/// [`veronese_scan`] with the scan prime chosen at run time.
pub fn veronese_scan_mod<T: Field>(a: &Algebra<T>, q: u64, budget: u64, seed: u64) -> Result<VeroneseScan> {
    macro_rules! dispatch {
        ($($p:literal),*) => {
            match q {
                $($p => veronese_scan::<T, Fp<$p>>(a, budget, seed),)*
                _ => Err(Error::Field(format!(
                    "scan prime {q} not in the supported set {SCAN_PRIMES:?}"
                ))),
            }
        };
    }
    dispatch!(3, 5, 7, 11, 13, 17, 19, 23, 29, 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;
    use num_rational::BigRational;

    type F = Fp<65521>;
    type Q = BigRational;

    fn x<T: Field>(n: usize, i: usize) -> Poly<T> {
        Poly::var(n, i, Side::Operator)
    }

    #[test]
    fn gram_ranks() {
        let x0x1 = x::<Q>(3, 0).multiply(&x(3, 1)).unwrap();
        assert_eq!(gram(&x0x1).unwrap().rank(), 2);
        let diag = (0..3)
            .map(|i| x::<Q>(3, i).power(2).unwrap())
            .reduce(|a, b| a.add(&b).unwrap())
            .unwrap();
        assert_eq!(gram(&diag).unwrap().rank(), 3);
        let sq = x::<Q>(3, 0).add(&x(3, 1)).unwrap().power(2).unwrap();
        let g = gram(&sq).unwrap();
        assert_eq!(g.rank(), 1);
        assert!(g.g == g.g.transpose());
        assert!(gram(&x::<Q>(3, 0)).is_err());
    }

    #[test]
    fn monomial_pencil_and_histogram() {
        let a = Algebra::new(Instance::<Fp<101>>::monomial(4, 2).unwrap());
        let q1 = x(5, 0).power(2).unwrap();
        let q2 = x(5, 1).power(2).unwrap();
        let prof = pencil_profile(&a, &q1, &q2, 1 << 20).unwrap();
        // λx0² + μx1² has rank 2 except at the two coordinate points.
        assert!(prof.identically_singular);
        let ranks: Vec<usize> = prof.degenerate_points.iter().map(|p| p.rank).collect();
        assert_eq!(ranks.iter().filter(|&&r| r == 1).count(), 2);
        assert!(ranks.iter().all(|&r| r <= 2));

        let h = stratum_sample(&a, 50, 4).unwrap();
        assert_eq!(h.counts.iter().sum::<usize>(), 50);
    }

    #[test]
    fn pencil_rejects_bad_input() {
        let a = Algebra::new(Instance::<F>::monomial(4, 2).unwrap());
        let q1 = x(5, 0).power(2).unwrap();
        let off = x(5, 0).multiply(&x(5, 1)).unwrap();
        assert!(pencil_profile(&a, &q1, &off, 10).is_err());
        assert!(pencil_profile(&a, &q1, &q1.scale(&F::new(2)), 10).is_err());
        let aq = Algebra::new(Instance::<Q>::monomial(4, 2).unwrap());
        let q1 = x(5, 0).power(2).unwrap();
        let q2 = x(5, 1).power(2).unwrap();
        assert!(matches!(pencil_profile(&aq, &q1, &q2, 10), Err(Error::Unsupported(_))));
    }

    #[test]
    fn upsilon_on_coordinate_pair() {
        let a = Algebra::new(Instance::<F>::monomial(4, 2).unwrap());
        assert_eq!(upsilon_probe(&a, &x(5, 0), &x(5, 1)).unwrap(), 2);
        assert!(upsilon_probe(&a, &x(5, 0), &x(5, 0)).is_err());
    }

    #[test]
    fn veronese_scan_monomial() {
        let a = Algebra::new(Instance::<F>::monomial(4, 2).unwrap());
        let scan = veronese_scan_mod(&a, 3, 1 << 20, 0).unwrap();
        assert!(scan.exhaustive);
        assert_eq!(scan.points_scanned, 121);
        assert_eq!(scan.hits, vec!["x0^2", "x1^2", "x2^2", "x3^2", "x4^2"]);
        assert!(veronese_scan_mod(&a, 4, 10, 0).is_err());
    }
}
