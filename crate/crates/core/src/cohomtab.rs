//! Exact integer polynomials and the mod-p cohomology tables of the complete
//! unordered flag manifold of `ℂᵖ`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finitely supported `Σ cₖ tᵏ` with integer coefficients; zero
/// coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPolynomial {
    coeffs: BTreeMap<u32, i64>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(degree: u32, coeff: i64) -> Self {
        Self::from_terms([(degree, coeff)])
    }

    /// Sums the given terms; repeated degrees accumulate.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (d, c) in terms {
            *coeffs.entry(d).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        IntPolynomial { coeffs }
    }

    pub fn coeff(&self, degree: u32) -> i64 {
        self.coeffs.get(&degree).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, i64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn lowest_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn eval(&self, t: i64) -> i128 {
        self.coeffs
            .iter()
            .map(|(&d, &c)| c as i128 * (t as i128).pow(d))
            .sum()
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::from_terms(self.coeffs.iter().chain(&rhs.coeffs).map(|(&d, &c)| (d, c)))
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::from_terms(
            self.coeffs
                .iter()
                .flat_map(|(&a, &x)| rhs.coeffs.iter().map(move |(&b, &y)| (a + b, x * y))),
        )
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&d, &c)) in self.coeffs.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match (d, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{d}")?,
                _ => write!(f, "{a}t^{d}")?,
            }
        }
        Ok(())
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    let prime = p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k));
    if !prime || p == 2 {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// `t^{2p−3}(1+t)∏_{i=1}^{p−2}(1+t^{2i−1})`: graded dimensions of the shifted
/// module `Σ^{2p−3}(Λ(β) ⊗ Λ(x₁,…,x_{p−2}))`, `|xᵢ| = 2i − 1`.
pub fn a0_lambda_table(p: u64) -> Result<IntPolynomial> {
    check_odd_prime(p)?;
    let p = p as u32;
    let one = IntPolynomial::one();
    let mut acc = &IntPolynomial::monomial(2 * p - 3, 1) * &(&one + &IntPolynomial::monomial(1, 1));
    for i in 1..=p - 2 {
        acc = &acc * &(&one + &IntPolynomial::monomial(2 * i - 1, 1));
    }
    Ok(acc)
}

/// Mod-p Poincaré polynomial `1 + t^{2p−3}(1+t)∏_{i=1}^{p−2}(1+t^{2i−1})`.
pub fn poincare_poly(p: u64) -> Result<IntPolynomial> {
    Ok(&IntPolynomial::one() + &a0_lambda_table(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_one_plus_t() {
        let a = IntPolynomial::from_terms([(0, 1), (1, 1)]);
        assert_eq!(&a * &a, IntPolynomial::from_terms([(0, 1), (1, 2), (2, 1)]));
        assert!((&a * &IntPolynomial::zero()).is_zero());
    }

    #[test]
    fn p3() {
        let p = poincare_poly(3).unwrap();
        assert_eq!(p, IntPolynomial::from_terms([(0, 1), (3, 1), (4, 2), (5, 1)]));
        assert_eq!(p.to_string(), "1 + t^3 + 2t^4 + t^5");
        let a = a0_lambda_table(3).unwrap();
        assert_eq!(a.coeffs().iter().map(|(&d, &c)| (d, c)).collect::<Vec<_>>(), vec![(3, 1), (4, 2), (5, 1)]);
    }

    #[test]
    fn p5_coefficient() {
        let p = poincare_poly(5).unwrap();
        assert_eq!(p.coeff(8), 2);
        assert_eq!(p.coeff(0), 1);
        assert_eq!(p.lowest_degree(), Some(0));
    }

    #[test]
    fn rejects_non_odd_primes() {
        for p in [0, 1, 2, 4, 9, 15] {
            assert_eq!(poincare_poly(p), Err(Error::NotOddPrime(p)));
        }
        assert!(a0_lambda_table(13).is_ok());
    }

    #[test]
    fn json_is_degree_map() {
        let s = serde_json::to_string(&poincare_poly(3).unwrap()).unwrap();
        assert_eq!(s, r#"{"0":1,"3":1,"4":2,"5":1}"#);
        let display = IntPolynomial::from_terms([(0, -2), (1, 1), (2, -3)]).to_string();
        assert_eq!(display, "-2 + t - 3t^2");
    }
}
