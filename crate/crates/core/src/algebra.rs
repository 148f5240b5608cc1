//! The graded artinian quotient `A = S/I`, built one degree at a time.
//!
//! Each graded piece stores the echelon basis of `I_k` inside `S^k`; the
//! standard monomials (non-pivot columns) give the basis of `A_k`, and
//! reducing a coefficient vector against the echelon basis yields its normal
//! form.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::instance::Instance;
use crate::matrix::Matrix;
use crate::poly::{binomial, Monomial, MonomialBasis, Poly, Side};
use crate::subspace::Subspace;

/// Coefficient of `t^k` in `((1 - t^d)/(1 - t))^(m+1)`, the Hilbert function
/// predicted by the Koszul resolution.
pub fn koszul_hf(m: usize, d: usize, k: usize) -> u64 {
    let n = m + 1;
    let mut acc: i128 = 0;
    for j in 0..=n {
        if j * d > k {
            break;
        }
        let term = binomial(n, j) as i128 * binomial(m + k - j * d, m) as i128;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc as u64
}

/// Outcome of the regular-sequence test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Regularity {
    Regular,
    /// First degree where the Hilbert function leaves the Koszul prediction.
    NotRegular { witness_degree: usize },
}

impl Regularity {
    pub fn is_regular(self) -> bool {
        matches!(self, Regularity::Regular)
    }
}

/// Element of `A_k` in coordinates on the standard monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementClass<T> {
    pub degree: usize,
    pub coords: Vec<T>,
}

impl<T: Field> ElementClass<T> {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(T::is_zero)
    }
}

#[derive(Clone, Debug)]
struct GradedPiece<T> {
    basis: MonomialBasis,
    ideal: Subspace<T>,
    standard: Vec<usize>,
}

impl<T: Field> GradedPiece<T> {
    fn build(instance: &Instance<T>, k: usize) -> Self {
        let n = instance.nvars();
        let d = instance.d();
        let basis = MonomialBasis::new(n, k);
        let ideal = if k < d {
            Subspace::zero(basis.len())
        } else {
            let shifts = MonomialBasis::new(n, k - d);
            let mut rows = Vec::with_capacity(shifts.len() * instance.generators().len());
            for g in instance.generators() {
                for mu in shifts.monomials() {
                    let mut v = vec![T::zero(); basis.len()];
                    for (mono, c) in g.terms() {
                        let idx = basis.index_of(&mono.mul(mu)).expect("degree k monomial");
                        v[idx] = c.clone();
                    }
                    rows.push(v);
                }
            }
            Subspace::from_vectors(basis.len(), rows).expect("rows have basis length")
        };
        let mut is_pivot = vec![false; basis.len()];
        for &p in ideal.pivots() {
            is_pivot[p] = true;
        }
        let standard = (0..basis.len()).filter(|&i| !is_pivot[i]).collect();
        GradedPiece {
            basis,
            ideal,
            standard,
        }
    }

    fn normal_form(&self, v: &[T]) -> Vec<T> {
        let reduced = self.ideal.reduce(v).expect("vector in S^k");
        self.standard.iter().map(|&i| reduced[i].clone()).collect()
    }
}

/// Graded quotient of the polynomial ring by a presentation.
#[derive(Clone, Debug)]
pub struct Algebra<T> {
    instance: Instance<T>,
    pieces: Vec<GradedPiece<T>>,
    regularity: Regularity,
}

impl<T: Field> Algebra<T> {
    /// Builds `A_k` for every `k ≤ M + 1`.
    pub fn new(instance: Instance<T>) -> Self {
        let up_to = instance.socle_degree() + 1;
        Self::build(instance, up_to).expect("default range is valid")
    }

    /// Builds `A_k` for every `k ≤ up_to`; `up_to` must reach `M + 1` so the
    /// regularity verdict is decidable.
    pub fn build(instance: Instance<T>, up_to: usize) -> Result<Self> {
        let socle = instance.socle_degree();
        if up_to < socle + 1 {
            return Err(Error::Degree(format!(
                "need degrees through {} to decide regularity, got {up_to}",
                socle + 1
            )));
        }
        let pieces: Vec<GradedPiece<T>> = (0..=up_to)
            .into_par_iter()
            .map(|k| GradedPiece::build(&instance, k))
            .collect();
        let (m, d) = (instance.m(), instance.d());
        let witness = (0..=socle + 1).find(|&k| pieces[k].standard.len() as u64 != koszul_hf(m, d, k));
        let regularity = match witness {
            None => Regularity::Regular,
            Some(k) => Regularity::NotRegular { witness_degree: k },
        };
        Ok(Algebra {
            instance,
            pieces,
            regularity,
        })
    }

    pub fn instance(&self) -> &Instance<T> {
        &self.instance
    }

    pub fn m(&self) -> usize {
        self.instance.m()
    }

    pub fn d(&self) -> usize {
        self.instance.d()
    }

    pub fn nvars(&self) -> usize {
        self.instance.nvars()
    }

    /// Socle degree `M`.
    pub fn socle_degree(&self) -> usize {
        self.instance.socle_degree()
    }

    /// Critical degree `s`.
    pub fn critical_degree(&self) -> usize {
        self.instance.critical_degree()
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn is_regular(&self) -> bool {
        self.regularity.is_regular()
    }

    pub(crate) fn require_regular(&self, what: &str) -> Result<()> {
        if self.is_regular() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{what} needs a complete intersection")))
        }
    }

    fn piece(&self, k: usize) -> Result<&GradedPiece<T>> {
        self.pieces.get(k).ok_or_else(|| {
            Error::Degree(format!(
                "degree {k} beyond the materialized range 0..={}",
                self.max_degree()
            ))
        })
    }

    /// `HF(A, k)`; zero beyond the materialized range once regular.
    pub fn hf(&self, k: usize) -> usize {
        match self.pieces.get(k) {
            Some(p) => p.standard.len(),
            None if self.is_regular() => 0,
            None => panic!("HF({k}) not materialized for a non-regular algebra"),
        }
    }

    pub fn hilbert_table(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.standard.len()).collect()
    }

    /// `I_k` as a subspace of `S^k` in graded-lex coordinates.
    pub fn ideal(&self, k: usize) -> Result<&Subspace<T>> {
        Ok(&self.piece(k)?.ideal)
    }

    pub fn monomials(&self, k: usize) -> Result<&MonomialBasis> {
        Ok(&self.piece(k)?.basis)
    }

    pub fn standard_monomials(&self, k: usize) -> Result<Vec<Monomial>> {
        let p = self.piece(k)?;
        Ok(p.standard.iter().map(|&i| p.basis.get(i).clone()).collect())
    }

    /// Matrix sending `S^k` coordinates to `A_k` coordinates.
    pub fn projector(&self, k: usize) -> Result<Matrix<T>> {
        let p = self.piece(k)?;
        let n = p.basis.len();
        let columns = (0..n)
            .map(|i| {
                let mut e = vec![T::zero(); n];
                e[i] = T::one();
                p.normal_form(&e)
            })
            .collect();
        Matrix::from_columns(p.standard.len(), columns)
    }

    pub fn normal_form(&self, k: usize, v: &[T]) -> Result<Vec<T>> {
        let p = self.piece(k)?;
        if v.len() != p.basis.len() {
            return Err(Error::AmbientMismatch {
                left: p.basis.len(),
                right: v.len(),
            });
        }
        Ok(p.normal_form(v))
    }

    fn check_operator(&self, f: &Poly<T>) -> Result<()> {
        if f.side() != Side::Operator || f.nvars() != self.nvars() {
            return Err(Error::Malformed(format!(
                "expected an operator form in {} variables",
                self.nvars()
            )));
        }
        Ok(())
    }

    pub fn class_of(&self, f: &Poly<T>) -> Result<ElementClass<T>> {
        self.check_operator(f)?;
        let k = f.degree();
        let v = f.to_dense(self.monomials(k)?)?;
        Ok(ElementClass {
            degree: k,
            coords: self.normal_form(k, &v)?,
        })
    }

    /// Representative supported on standard monomials.
    pub fn lift(&self, e: &ElementClass<T>) -> Result<Poly<T>> {
        let p = self.piece(e.degree)?;
        if e.coords.len() != p.standard.len() {
            return Err(Error::Malformed(format!(
                "{} coordinates for A_{} of dimension {}",
                e.coords.len(),
                e.degree,
                p.standard.len()
            )));
        }
        Poly::new(
            self.nvars(),
            e.degree,
            Side::Operator,
            p.standard
                .iter()
                .zip(&e.coords)
                .map(|(&i, c)| (p.basis.get(i).clone(), c.clone())),
        )
    }

    pub fn multiply(&self, a: &ElementClass<T>, b: &ElementClass<T>) -> Result<ElementClass<T>> {
        let prod = self.lift(a)?.multiply(&self.lift(b)?)?;
        self.class_of(&prod)
    }

    pub fn random_class<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<ElementClass<T>> {
        let n = self.piece(k)?.standard.len();
        Ok(ElementClass {
            degree: k,
            coords: (0..n).map(|_| T::sample(rng)).collect(),
        })
    }

    /// Linear form with random coefficients; never zero.
    pub fn random_linear<R: Rng + ?Sized>(&self, rng: &mut R) -> Poly<T> {
        loop {
            let coeffs: Vec<T> = (0..self.nvars()).map(|_| T::sample(rng)).collect();
            let l = Poly::linear(&coeffs, Side::Operator);
            if !l.is_zero() {
                return l;
            }
        }
    }

    /// Matrix of multiplication by `f` from `A_k` to `A_{k+deg f}`. Column `c`
    /// is the normal form of `f` times the `c`-th standard monomial.
    pub fn mult_map(&self, f: &Poly<T>, k: usize) -> Result<Matrix<T>> {
        self.check_operator(f)?;
        let target = k + f.degree();
        let src = self.piece(k)?;
        let dst = self.piece(target)?;
        let columns = src
            .standard
            .iter()
            .map(|&i| {
                let mu = src.basis.get(i);
                let mut v = vec![T::zero(); dst.basis.len()];
                for (mono, c) in f.terms() {
                    let idx = dst.basis.index_of(&mono.mul(mu)).expect("product degree");
                    v[idx] += c.clone();
                }
                dst.normal_form(&v)
            })
            .collect();
        Matrix::from_columns(dst.standard.len(), columns)
    }

    /// Multiplication by a class.
    pub fn mult_map_class(&self, e: &ElementClass<T>, k: usize) -> Result<Matrix<T>> {
        self.mult_map(&self.lift(e)?, k)
    }

    /// The maps `A_k → A_{k+1}` for each variable; multiplication by
    /// `Σ a_i x_i` is `Σ a_i` times these.
    pub fn variable_maps(&self, k: usize) -> Result<Vec<Matrix<T>>> {
        (0..self.nvars())
            .map(|i| self.mult_map(&Poly::var(self.nvars(), i, Side::Operator), k))
            .collect()
    }

    /// Coordinate of a degree-`M` class on the single standard monomial.
    fn socle_coordinate(&self, v: &[T]) -> T {
        v.first().cloned().unwrap_or_else(T::zero)
    }

    /// Pairing `A_k × A_{M-k} → A_M ≅ field` on standard monomials.
    pub fn duality_pairing(&self, k: usize) -> Result<Matrix<T>> {
        self.require_regular("duality pairing")?;
        let socle = self.socle_degree();
        if k > socle {
            return Err(Error::Degree(format!("k = {k} exceeds the socle degree {socle}")));
        }
        let left = self.piece(k)?;
        let right = self.piece(socle - k)?;
        let top = self.piece(socle)?;
        let mut out = Matrix::zeros(left.standard.len(), right.standard.len());
        for (i, &a) in left.standard.iter().enumerate() {
            for (j, &b) in right.standard.iter().enumerate() {
                let mono = left.basis.get(a).mul(right.basis.get(b));
                let mut v = vec![T::zero(); top.basis.len()];
                v[top.basis.index_of(&mono).expect("degree M")] = T::one();
                out[(i, j)] = self.socle_coordinate(&top.normal_form(&v));
            }
        }
        Ok(out)
    }

    /// Bilinear form `(a, b) ↦ ⟨a, L b⟩` on `A_s`, i.e. the pairing matrix
    /// composed with multiplication by `L`. Needs `M = 2s + 1`.
    pub fn symmetric_form(&self, l: &Poly<T>) -> Result<Matrix<T>> {
        self.require_regular("symmetry check")?;
        if l.degree() != 1 {
            return Err(Error::Degree("symmetry check needs a linear form".into()));
        }
        let socle = self.socle_degree();
        if socle.is_multiple_of(2) {
            return Err(Error::Unsupported(format!(
                "socle degree {socle} is even; A_s and A_(s+1) are not dual"
            )));
        }
        let s = self.critical_degree();
        let phi = self.mult_map(l, s)?;
        self.duality_pairing(s)?.mul(&phi)
    }

    pub fn symmetry_check(&self, l: &Poly<T>) -> Result<bool> {
        let b = self.symmetric_form(l)?;
        Ok(b == b.transpose())
    }
}

/// Regular-sequence decision from the Hilbert function.
pub fn is_regular_sequence<T: Field>(instance: &Instance<T>) -> Regularity {
    Algebra::new(instance.clone()).regularity()
}

/// Samples presentations until one is a complete intersection. Returns the
/// algebra and the number of attempts.
pub fn generate_regular<T: Field, R: Rng + ?Sized>(
    m: usize,
    d: usize,
    rng: &mut R,
    max_attempts: usize,
) -> Result<(Algebra<T>, usize)> {
    T::spec().validate_for((m + 1) * (d.max(2) - 1))?;
    for attempt in 1..=max_attempts {
        let inst = match Instance::<T>::random(m, d, rng) {
            Ok(inst) => inst,
            Err(Error::Presentation(_)) => continue,
            Err(e) => return Err(e),
        };
        let a = Algebra::new(inst);
        if a.is_regular() {
            return Ok((a, attempt));
        }
    }
    Err(Error::Presentation(format!(
        "no complete intersection found in {max_attempts} attempts"
    )))
}
