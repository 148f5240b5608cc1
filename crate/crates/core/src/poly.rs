//! Homogeneous polynomials in `m + 1` variables.
//!
//! Polynomials come in two flavours distinguished by [`Side`]: operators in
//! the variables `x_i` (elements of the symmetric algebra on `U*`) and
//! targets in the dual variables `u_i` (elements of the symmetric algebra on
//! `U`). Operators act on targets by differentiation, `x_i` acting as
//! `∂/∂u_i`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

/// Exponent vector. Within one degree, [`Ord`] is graded-lex with
/// `x0 > x1 > … > xm`, listed from the largest monomial: `x0^2 < x0*x1 < x1^2`
/// in the ordering means `x0^2` comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of one degree in graded-lex order, with reverse lookup.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    nvars: usize,
    degree: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: usize) -> Self {
        let monomials = monomial_basis(nvars, degree);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            nvars,
            degree,
            monomials,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Monomials of `degree` in `nvars` variables, graded-lex order.
pub fn monomial_basis(nvars: usize, degree: usize) -> Vec<Monomial> {
    fn fill(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Monomial>) {
        if left == 1 {
            prefix.push(remaining);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(prefix, left - 1, remaining - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return out;
    }
    fill(&mut Vec::with_capacity(nvars), nvars, degree as u32, &mut out);
    out
}

/// `C(n, k)` as an integer.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Operator polynomials live in `x`, target polynomials in `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Operator,
    Target,
}

impl Side {
    fn var_char(self) -> char {
        match self {
            Side::Operator => 'x',
            Side::Target => 'u',
        }
    }
}

/// Homogeneous polynomial with an explicit degree tag (also when zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    nvars: usize,
    degree: usize,
    side: Side,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Field> Poly<T> {
    pub fn zero(nvars: usize, degree: usize, side: Side) -> Self {
        Poly {
            nvars,
            degree,
            side,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T, side: Side) -> Self {
        let mut p = Self::zero(nvars, 0, side);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize, side: Side) -> Self {
        let mut p = Self::zero(nvars, 1, side);
        p.add_term(Monomial::var(nvars, i), T::one());
        p
    }

    pub fn monomial(m: Monomial, c: T, side: Side) -> Self {
        let mut p = Self::zero(m.nvars(), m.degree(), side);
        p.add_term(m, c);
        p
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear(coeffs: &[T], side: Side) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, 1, side);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    /// Builds a homogeneous polynomial of the given degree; repeated
    /// monomials are summed.
    pub fn new(
        nvars: usize,
        degree: usize,
        side: Side,
        terms: impl IntoIterator<Item = (Monomial, T)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars, degree, side);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::Malformed(format!(
                    "monomial with {} exponents in {nvars} variables",
                    m.nvars()
                )));
            }
            if m.degree() != degree {
                return Err(Error::Degree(format!(
                    "term of degree {} in a form of degree {degree}",
                    m.degree()
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    /// Leading (graded-lex largest) coefficient.
    pub fn lead_coeff(&self) -> Option<&T> {
        self.terms.values().next()
    }

    /// Dense coordinates in `basis`.
    pub fn to_dense(&self, basis: &MonomialBasis) -> Result<Vec<T>> {
        if basis.degree() != self.degree || basis.nvars() != self.nvars {
            return Err(Error::Degree(format!(
                "polynomial of degree {} against a basis of degree {}",
                self.degree,
                basis.degree()
            )));
        }
        let mut v = vec![T::zero(); basis.len()];
        for (m, c) in &self.terms {
            let i = basis.index_of(m).expect("monomial in basis");
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_dense(basis: &MonomialBasis, v: &[T], side: Side) -> Result<Self> {
        if v.len() != basis.len() {
            return Err(Error::Malformed(format!(
                "{} coordinates for a basis of size {}",
                v.len(),
                basis.len()
            )));
        }
        let mut p = Self::zero(basis.nvars(), basis.degree(), side);
        for (m, c) in basis.monomials().iter().zip(v) {
            p.add_term(m.clone(), c.clone());
        }
        Ok(p)
    }

    fn check_compatible(&self, other: &Poly<T>) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Malformed(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.side != other.side {
            return Err(Error::Malformed("mixing operator and target sides".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly<T>) -> Result<Poly<T>> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "adding forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly<T>) -> Result<Poly<T>> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Poly<T> {
        let mut out = Self::zero(self.nvars, self.degree, self.side);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn multiply(&self, other: &Poly<T>) -> Result<Poly<T>> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.nvars, self.degree + other.degree, self.side);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// `L^j` for a linear form `L`, by multinomial expansion.
    pub fn power(&self, j: usize) -> Result<Poly<T>> {
        if self.degree != 1 {
            return Err(Error::Degree(format!(
                "power expects a linear form, got degree {}",
                self.degree
            )));
        }
        let coeffs: Vec<T> = (0..self.nvars)
            .map(|i| self.coeff(&Monomial::var(self.nvars, i)))
            .collect();
        let mut out = Self::zero(self.nvars, j, self.side);
        for m in monomial_basis(self.nvars, j) {
            let mut c = T::from_i64(multinomial(m.exps()) as i64);
            for (e, a) in m.exps().iter().zip(&coeffs) {
                for _ in 0..*e {
                    c *= a.clone();
                }
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    /// Action of an operator polynomial on a target polynomial by
    /// differentiation: `x^α(u^β) = Π β_i!/(β_i-α_i)! · u^(β-α)`.
    pub fn differentiate(&self, target: &Poly<T>) -> Result<Poly<T>> {
        if self.side != Side::Operator || target.side != Side::Target {
            return Err(Error::Malformed(
                "differentiation needs an operator acting on a target".into(),
            ));
        }
        if self.nvars != target.nvars {
            return Err(Error::Malformed(format!(
                "{} vs {} variables",
                self.nvars, target.nvars
            )));
        }
        if target.degree < self.degree {
            return Err(Error::Degree(format!(
                "operator of degree {} on a target of degree {}",
                self.degree, target.degree
            )));
        }
        let ch = T::characteristic();
        if ch != 0 && ch <= target.degree as u64 {
            return Err(Error::Field(format!(
                "characteristic {ch} does not exceed degree {}",
                target.degree
            )));
        }
        let mut out = Self::zero(self.nvars, target.degree - self.degree, Side::Target);
        for (alpha, ca) in &self.terms {
            for (beta, cb) in &target.terms {
                if !alpha.divides(beta) {
                    continue;
                }
                let mut factor: u64 = 1;
                let mut rest = Vec::with_capacity(self.nvars);
                for (&a, &b) in alpha.exps().iter().zip(beta.exps()) {
                    for t in 0..a {
                        factor *= (b - t) as u64;
                    }
                    rest.push(b - a);
                }
                let c = ca.clone() * cb.clone() * T::from_i64(factor as i64);
                out.add_term(Monomial::new(rest), c);
            }
        }
        Ok(out)
    }

    /// Apolarity pairing of an operator and a target of equal degree.
    pub fn pairing(&self, target: &Poly<T>) -> Result<T> {
        if self.degree != target.degree {
            return Err(Error::Degree(format!(
                "pairing degrees {} and {}",
                self.degree, target.degree
            )));
        }
        let d = self.differentiate(target)?;
        Ok(d.coeff(&Monomial::one(self.nvars)))
    }

    pub fn evaluate(&self, point: &[T]) -> Result<T> {
        if point.len() != self.nvars {
            return Err(Error::Malformed(format!(
                "point with {} coordinates for {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, x) in m.exps().iter().zip(point) {
                for _ in 0..*e {
                    t *= x.clone();
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Same coefficients with the other variable alphabet.
    pub fn with_side(&self, side: Side) -> Poly<T> {
        Poly {
            side,
            ..self.clone()
        }
    }

    /// Parses the canonical text form (`2*x0^2 + x0*x1 - 1/2*x1^2`).
    pub fn parse(text: &str, nvars: usize, degree: usize, side: Side) -> Result<Poly<T>> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Malformed("empty polynomial".into()));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && !current.is_empty() {
                pieces.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && current.is_empty() {
                if i != 0 && !pieces.is_empty() {
                    return Err(Error::Malformed(format!("stray sign in `{text}`")));
                }
                negative ^= ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(Error::Malformed(format!("dangling sign in `{text}`")));
        }
        pieces.push((negative, current));

        let mut out = Self::zero(nvars, degree, side);
        let var = side.var_char();
        for (neg, term) in pieces {
            let mut coef = T::one();
            let mut exps = vec![0u32; nvars];
            for factor in term.split('*') {
                if let Some(rest) = factor.strip_prefix(var) {
                    let (idx, e) = match rest.split_once('^') {
                        Some((i, e)) => (i, e),
                        None => (rest, "1"),
                    };
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| Error::Malformed(format!("bad variable `{factor}`")))?;
                    let e: u32 = e
                        .parse()
                        .map_err(|_| Error::Malformed(format!("bad exponent `{factor}`")))?;
                    if idx >= nvars {
                        return Err(Error::Malformed(format!(
                            "variable {var}{idx} out of range for {nvars} variables"
                        )));
                    }
                    exps[idx] += e;
                } else {
                    coef *= T::parse_coef(factor)?;
                }
            }
            if neg {
                coef = -coef;
            }
            let m = Monomial::new(exps);
            if m.degree() != degree {
                if coef.is_zero() && m.degree() == 0 {
                    continue;
                }
                return Err(Error::Degree(format!(
                    "term `{term}` has degree {}, expected {degree}",
                    m.degree()
                )));
            }
            out.add_term(m, coef);
        }
        Ok(out)
    }
}

fn multinomial(exps: &[u32]) -> u64 {
    let mut total = 0usize;
    let mut acc = 1u64;
    for &e in exps {
        total += e as usize;
        acc *= binomial(total, e as usize);
    }
    acc
}

impl<T: Field> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let var = self.side.var_char();
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (n, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !magnitude.is_one() || m.degree() == 0 {
                factors.push(magnitude.to_string());
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("{var}{i}")),
                    _ => factors.push(format!("{var}{i}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
