//! Presentation data for a complete intersection and its file format.

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::matrix::Matrix;
use crate::poly::{monomial_basis, Monomial, MonomialBasis, Poly, Side};

/// `m + 1` forms of degree `d` in `m + 1` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance<T> {
    m: usize,
    d: usize,
    generators: Vec<Poly<T>>,
}

impl<T: Field> Instance<T> {
    pub fn new(m: usize, d: usize, generators: Vec<Poly<T>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Presentation("need at least two variables (m >= 1)".into()));
        }
        if d < 2 {
            return Err(Error::Presentation(format!("degree must be at least 2, got {d}")));
        }
        T::spec().validate_for((m + 1) * (d - 1))?;
        if generators.len() != m + 1 {
            return Err(Error::Presentation(format!(
                "expected {} generators, got {}",
                m + 1,
                generators.len()
            )));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.nvars() != m + 1 || g.degree() != d || g.side() != Side::Operator {
                return Err(Error::Presentation(format!(
                    "generator {i} is not an operator form of degree {d} in {} variables",
                    m + 1
                )));
            }
        }
        let basis = MonomialBasis::new(m + 1, d);
        let rows = generators
            .iter()
            .map(|g| g.to_dense(&basis))
            .collect::<Result<Vec<_>>>()?;
        let rank = Matrix::from_rows(basis.len(), rows)?.rank();
        if rank != m + 1 {
            return Err(Error::Presentation(format!(
                "generators span only {rank} dimensions, expected {}",
                m + 1
            )));
        }
        Ok(Instance { m, d, generators })
    }

    /// `(x_0^d, …, x_m^d)`.
    pub fn monomial(m: usize, d: usize) -> Result<Self> {
        let gens = (0..=m)
            .map(|i| {
                let mut e = vec![0; m + 1];
                e[i] = d as u32;
                Poly::monomial(Monomial::new(e), T::one(), Side::Operator)
            })
            .collect();
        Self::new(m, d, gens)
    }

    /// Generators with independently sampled coefficients. May fail
    /// validation (dependent generators); callers resample.
    pub fn random<R: Rng + ?Sized>(m: usize, d: usize, rng: &mut R) -> Result<Self> {
        let basis = monomial_basis(m + 1, d);
        let gens = (0..=m)
            .map(|_| {
                Poly::new(
                    m + 1,
                    d,
                    Side::Operator,
                    basis.iter().map(|mono| (mono.clone(), T::sample(rng))),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, d, gens)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn nvars(&self) -> usize {
        self.m + 1
    }

    /// Socle degree `(m + 1)(d - 1)`.
    pub fn socle_degree(&self) -> usize {
        (self.m + 1) * (self.d - 1)
    }

    /// Critical degree `⌈M/2⌉ - 1`.
    pub fn critical_degree(&self) -> usize {
        self.socle_degree().div_ceil(2) - 1
    }

    pub fn generators(&self) -> &[Poly<T>] {
        &self.generators
    }

    pub fn field(&self) -> FieldSpec {
        T::spec()
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            m: self.m,
            d: self.d,
            field: T::spec(),
            generators: self
                .generators
                .iter()
                .map(|g| {
                    g.terms()
                        .map(|(mono, c)| TermRecord {
                            exps: mono.exps().to_vec(),
                            coef: c.to_string(),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        self.to_file().digest()
    }

    /// Reduces every coefficient modulo the characteristic of `G`. The
    /// result is a bare generator list: the reduction may be dependent or
    /// fail to be a complete intersection.
    pub fn reduce_generators<G: Field>(&self) -> Result<Vec<Poly<G>>> {
        let q = G::characteristic();
        if q == 0 {
            return Err(Error::Unsupported("reduction needs a prime target field".into()));
        }
        self.generators
            .iter()
            .map(|g| {
                let terms = g
                    .terms()
                    .map(|(mono, c)| {
                        let r = c.reduce_mod(q).ok_or_else(|| {
                            Error::Unsupported(format!("coefficient {c} has no reduction mod {q}"))
                        })?;
                        Ok((mono.clone(), G::from_i64(r as i64)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Poly::new(self.m + 1, self.d, Side::Operator, terms)
            })
            .collect()
    }
}

/// One term of a generator in the instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exps: Vec<u32>,
    pub coef: String,
}

/// On-disk instance layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub m: usize,
    pub d: usize,
    pub field: FieldSpec,
    pub generators: Vec<Vec<TermRecord>>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("instance file: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn digest(&self) -> String {
        let bytes = Sha256::digest(self.to_json().as_bytes());
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Interprets the file over `T`; the declared field must match.
    pub fn to_instance<T: Field>(&self) -> Result<Instance<T>> {
        if self.field != T::spec() {
            return Err(Error::Field(format!(
                "file declares {}, requested {}",
                self.field,
                T::spec()
            )));
        }
        let nvars = self.m + 1;
        let gens = self
            .generators
            .iter()
            .map(|terms| {
                let parsed = terms
                    .iter()
                    .map(|t| Ok((Monomial::new(t.exps.clone()), T::parse_coef(&t.coef)?)))
                    .collect::<Result<Vec<_>>>()?;
                Poly::new(nvars, self.d, Side::Operator, parsed)
            })
            .collect::<Result<Vec<_>>>()?;
        Instance::new(self.m, self.d, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type F = Fp<65521>;

    #[test]
    fn monomial_instance_shape() {
        let inst = Instance::<F>::monomial(4, 2).unwrap();
        assert_eq!(inst.socle_degree(), 5);
        assert_eq!(inst.critical_degree(), 2);
        assert_eq!(inst.generators()[3].to_string(), "x3^2");
        let inst = Instance::<F>::monomial(2, 3).unwrap();
        assert_eq!(inst.socle_degree(), 6);
        assert_eq!(inst.critical_degree(), 2);
    }

    #[test]
    fn rejects_bad_presentations() {
        let x0sq = Poly::<F>::var(2, 0, Side::Operator).power(2).unwrap();
        let x1sq = Poly::<F>::var(2, 1, Side::Operator).power(2).unwrap();
        assert!(matches!(
            Instance::new(1, 2, vec![x0sq.clone(), x0sq.scale(&F::new(3))]),
            Err(Error::Presentation(_))
        ));
        assert!(Instance::new(1, 2, vec![x0sq.clone()]).is_err());
        assert!(Instance::new(1, 2, vec![x0sq.clone(), x1sq.clone()]).is_ok());
        assert!(Instance::<Fp<5>>::monomial(4, 2).is_err());
        assert!(Instance::<F>::monomial(2, 1).is_err());
    }

    #[test]
    fn file_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = Instance::<BigRational>::random(3, 2, &mut rng).unwrap();
        let json = inst.to_json();
        let back = InstanceFile::from_json(&json).unwrap();
        let inst2 = back.to_instance::<BigRational>().unwrap();
        assert_eq!(inst, inst2);
        assert_eq!(inst2.to_json(), json);
        assert!(back.to_instance::<F>().is_err());
    }

    #[test]
    fn reduction_mod_small_prime() {
        let inst = Instance::<F>::monomial(4, 2).unwrap();
        let red = inst.reduce_generators::<Fp<5>>().unwrap();
        assert_eq!(red[0].to_string(), "x0^2");
        assert!(inst.reduce_generators::<BigRational>().is_err());
    }
}
