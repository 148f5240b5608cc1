//! Macaulay inverse systems.
//!
//! `I^{-1}_k` is the annihilator of `I_k` inside `S^k U` under the
//! differentiation pairing. For a complete intersection it is generated by
//! a single form `g` of degree `M`, and `I^{-1}_{M-k}` is spanned by the
//! order-`k` partial derivatives of `g`.

use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::instance::Instance;
use crate::matrix::Matrix;
use crate::poly::{MonomialBasis, Poly, Side};
use crate::subspace::Subspace;

/// `I^{-1}_k` in graded-lex coordinates on `S^k U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseSystemSlice<T> {
    pub degree: usize,
    pub basis: Subspace<T>,
}

impl<T: Field> InverseSystemSlice<T> {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

/// Generator of `I^{-1}` in degree `M`, normalized to leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSocleGenerator<T> {
    pub g: Poly<T>,
}

/// Result of the cone-vertex computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSpace<T> {
    pub space: Subspace<T>,
    /// `Q` lies in `I`, so `Q(g) = 0` and every point is a vertex.
    pub degenerate: bool,
}

fn factorial_weight(exps: &[u32]) -> u64 {
    exps.iter()
        .map(|&e| (1..=e as u64).product::<u64>())
        .product()
}

pub fn annihilator<T: Field>(a: &Algebra<T>, k: usize) -> Result<InverseSystemSlice<T>> {
    let socle = a.socle_degree();
    if k > socle {
        return Err(Error::Degree(format!("k = {k} exceeds the socle degree {socle}")));
    }
    let basis = a.monomials(k)?;
    let ideal = a.ideal(k)?;
    let weights: Vec<T> = basis
        .monomials()
        .iter()
        .map(|m| T::from_i64(factorial_weight(m.exps()) as i64))
        .collect();
    let rows = ideal
        .basis_vectors()
        .into_iter()
        .map(|r| r.into_iter().zip(&weights).map(|(c, w)| c * w.clone()).collect())
        .collect();
    let gram = Matrix::from_rows(basis.len(), rows)?;
    Ok(InverseSystemSlice {
        degree: k,
        basis: gram.kernel_basis(),
    })
}

pub fn dual_socle_generator<T: Field>(a: &Algebra<T>) -> Result<DualSocleGenerator<T>> {
    a.require_regular("dual socle generator")?;
    let socle = a.socle_degree();
    let slice = annihilator(a, socle)?;
    if slice.dim() != 1 {
        return Err(Error::Unsupported(format!(
            "I^-1 in degree {socle} has dimension {}",
            slice.dim()
        )));
    }
    // Reduced echelon: the first nonzero coordinate is already 1.
    let v = slice.basis.basis().row(0).to_vec();
    let g = Poly::from_dense(a.monomials(socle)?, &v, Side::Target)?;
    Ok(DualSocleGenerator { g })
}

/// Span of all order-`k` partials of `g` as a subspace of `S^{M-k} U`.
pub fn derivative_span<T: Field>(a: &Algebra<T>, k: usize) -> Result<Subspace<T>> {
    let socle = a.socle_degree();
    if k > socle {
        return Err(Error::Degree(format!("k = {k} exceeds the socle degree {socle}")));
    }
    let g = dual_socle_generator(a)?.g;
    let target = a.monomials(socle - k)?;
    let ops = MonomialBasis::new(a.nvars(), k);
    let vectors = ops
        .monomials()
        .iter()
        .map(|mono| {
            Poly::monomial(mono.clone(), T::one(), Side::Operator)
                .differentiate(&g)?
                .to_dense(target)
        })
        .collect::<Result<Vec<_>>>()?;
    Subspace::from_vectors(target.len(), vectors)
}

pub fn derivative_span_check<T: Field>(a: &Algebra<T>, k: usize) -> Result<bool> {
    let span = derivative_span(a, k)?;
    let slice = annihilator(a, a.socle_degree() - k)?;
    Ok(span == slice.basis)
}

/// `Q(g)`; zero exactly when `Q ∈ I`.
pub fn apply_to_socle<T: Field>(a: &Algebra<T>, q: &Poly<T>) -> Result<Poly<T>> {
    let g = dual_socle_generator(a)?.g;
    q.differentiate(&g)
}

/// Linear forms `z` with `∂_z Q(g) = 0`: the vertex space of the cone
/// `V(Q(g))`.
pub fn vertex_space<T: Field>(a: &Algebra<T>, q: &Poly<T>) -> Result<VertexSpace<T>> {
    let n = a.nvars();
    let h = apply_to_socle(a, q)?;
    if h.is_zero() {
        return Ok(VertexSpace {
            space: Subspace::full(n),
            degenerate: true,
        });
    }
    let target = MonomialBasis::new(n, h.degree() - 1);
    let columns = (0..n)
        .map(|i| Poly::var(n, i, Side::Operator).differentiate(&h)?.to_dense(&target))
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_columns(target.len(), columns)?;
    Ok(VertexSpace {
        space: m.kernel_basis(),
        degenerate: false,
    })
}

/// Whether `p^d` lies in `I^{-1}_d`, i.e. `⟨f_i, p^d⟩ = 0` for every
/// generator. Equivalent to `p` being a common zero.
pub fn veronese_certificate<T: Field>(instance: &Instance<T>, p: &[T]) -> Result<bool> {
    if p.len() != instance.nvars() {
        return Err(Error::Malformed(format!(
            "point with {} coordinates for {} variables",
            p.len(),
            instance.nvars()
        )));
    }
    if p.iter().all(T::is_zero) {
        return Err(Error::Malformed("the zero vector is not a point".into()));
    }
    let pd = Poly::linear(p, Side::Target).power(instance.d())?;
    for f in instance.generators() {
        if !f.pairing(&pd)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive search for a common zero in `P^m(F_q)` after reducing the
/// coefficients mod `q`. Points are normalized (first nonzero coordinate 1)
/// and the lexicographically smallest hit is returned. Finding nothing does
/// not prove regularity.
pub fn common_zero_scan<T: Field>(
    instance: &Instance<T>,
    q: u64,
    budget: u64,
) -> Result<Option<Vec<u64>>> {
    if !crate::field::is_prime(q) {
        return Err(Error::Field(format!("scan modulus {q} is not prime")));
    }
    let n = instance.nvars();
    let total = (q as u128).pow(n as u32);
    if total > budget as u128 {
        return Err(Error::Unsupported(format!(
            "{q}^{n} points exceed the scan budget {budget}"
        )));
    }
    let gens: Vec<Vec<(Vec<u32>, u64)>> = instance
        .generators()
        .iter()
        .map(|g| {
            g.terms()
                .map(|(mono, c)| {
                    let r = c.reduce_mod(q).ok_or_else(|| {
                        Error::Unsupported(format!("coefficient {c} has no reduction mod {q}"))
                    })?;
                    Ok((mono.exps().to_vec(), r))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let decode = |mut idx: u64| {
        let mut pt = vec![0u64; n];
        for slot in pt.iter_mut().rev() {
            *slot = idx % q;
            idx /= q;
        }
        pt
    };
    let eval = |terms: &[(Vec<u32>, u64)], pt: &[u64]| {
        terms.iter().fold(0u64, |acc, (exps, c)| {
            let mut t = *c;
            for (&e, &x) in exps.iter().zip(pt) {
                for _ in 0..e {
                    t = t * x % q;
                }
            }
            (acc + t) % q
        })
    };
    let hit = (1..total as u64).into_par_iter().find_first(|&idx| {
        let pt = decode(idx);
        let lead = pt.iter().find(|&&v| v != 0).copied();
        lead == Some(1) && gens.iter().all(|g| eval(g, &pt) == 0)
    });
    Ok(hit.map(decode))
}
