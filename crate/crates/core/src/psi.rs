//! Polynomials with exact rational coefficients in formal ψ-classes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// The class ψ_h at half-edge `half_edge`, anchored at `vertex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PsiSymbol {
    pub half_edge: usize,
    pub vertex: usize,
}

impl PsiSymbol {
    pub fn new(half_edge: usize, vertex: usize) -> Self {
        PsiSymbol { half_edge, vertex }
    }
}

/// Sorted multiset of symbols.
pub type Monomial = Vec<PsiSymbol>;

/// Sparse polynomial; never stores a zero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TermRepr>", into = "Vec<TermRepr>")]
pub struct PsiExpression {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl PsiExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(Vec::new(), c);
        e
    }

    pub fn symbol(s: PsiSymbol) -> Self {
        let mut e = Self::zero();
        e.add_term(vec![s], BigRational::one());
        e
    }

    /// `c * (ψ_a + ψ_b)`.
    pub fn linear_pair(a: PsiSymbol, b: PsiSymbol, c: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(vec![a], c.clone());
        e.add_term(vec![b], c);
        e
    }

    fn add_term(&mut self, mut m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        m.sort_unstable();
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, m: &[PsiSymbol]) -> BigRational {
        let mut key = m.to_vec();
        key.sort_unstable();
        self.terms.get(&key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    /// True when every monomial has the same degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Vec::len);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Replaces every occurrence of `s` by `by`.
    pub fn substitute(&self, s: PsiSymbol, by: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let k = m.iter().filter(|&&x| x == s).count() as u32;
            let rest: Monomial = m.iter().copied().filter(|&x| x != s).collect();
            let mut base = Self::zero();
            base.add_term(rest, c.clone());
            out = out.add(&base.mul(&by.pow(k)));
        }
        out
    }

    /// Every denominator is a power of two.
    pub fn dyadic(&self) -> bool {
        self.terms.values().all(|c| {
            let d = c.denom();
            let one = BigInt::one();
            (d & (d - &one)).is_zero()
        })
    }

    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let coeff = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
            };
            if m.is_empty() {
                out.push_str(&coeff);
                continue;
            }
            if !a.is_one() {
                out.push_str(&coeff);
            }
            for (s, k) in powers(m) {
                if k == 1 {
                    out.push_str(&format!("\\psi_{{{}}}", s.half_edge));
                } else {
                    out.push_str(&format!("\\psi_{{{}}}^{{{k}}}", s.half_edge));
                }
            }
        }
        out
    }
}

fn powers(m: &[PsiSymbol]) -> Vec<(PsiSymbol, usize)> {
    let mut out: Vec<(PsiSymbol, usize)> = Vec::new();
    for &s in m {
        match out.last_mut() {
            Some((t, k)) if *t == s => *k += 1,
            _ => out.push((s, 1)),
        }
    }
    out
}

impl fmt::Display for PsiExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let a = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let body: Vec<String> = powers(m)
                .into_iter()
                .map(|(s, k)| {
                    if k == 1 {
                        format!("psi_{}", s.half_edge)
                    } else {
                        format!("psi_{}^{k}", s.half_edge)
                    }
                })
                .collect();
            if m.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", body.join("*"))?;
            } else {
                write!(f, "{a}*{}", body.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    coefficient: String,
    monomial: Vec<PsiSymbol>,
}

impl From<PsiExpression> for Vec<TermRepr> {
    fn from(e: PsiExpression) -> Self {
        e.terms
            .into_iter()
            .map(|(m, c)| TermRepr {
                coefficient: c.to_string(),
                monomial: m,
            })
            .collect()
    }
}

impl TryFrom<Vec<TermRepr>> for PsiExpression {
    type Error = String;

    fn try_from(v: Vec<TermRepr>) -> Result<Self, String> {
        let mut e = PsiExpression::zero();
        for t in v {
            let c = BigRational::from_str(&t.coefficient)
                .map_err(|err| format!("bad coefficient {:?}: {err}", t.coefficient))?;
            e.add_term(t.monomial, c);
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(h: usize) -> PsiExpression {
        PsiExpression::symbol(PsiSymbol::new(h, 0))
    }

    #[test]
    fn cancellation() {
        let e = s(1).add(&s(2).scale(&rational(-1, 2)));
        assert!(e.add(&e.neg()).is_zero());
        assert_eq!(e.add(&e.neg()).degree(), None);
    }

    #[test]
    fn difference_of_squares() {
        let lhs = s(1).add(&s(2)).mul(&s(1).sub(&s(2)));
        let rhs = s(1).mul(&s(1)).sub(&s(2).mul(&s(2)));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "psi_1^2 - psi_2^2");
    }

    #[test]
    fn substitution() {
        let e = s(1).mul(&s(1)).add(&s(3));
        let out = e.substitute(PsiSymbol::new(1, 0), &s(2).scale(&rational(1, 2)));
        assert_eq!(out.coefficient(&[PsiSymbol::new(2, 0), PsiSymbol::new(2, 0)]), rational(1, 4));
        assert_eq!(out.coefficient(&[PsiSymbol::new(3, 0)]), rational(1, 1));
    }

    #[test]
    fn json_round_trip_and_latex() {
        let e = PsiExpression::linear_pair(PsiSymbol::new(0, 0), PsiSymbol::new(1, 1), rational(-1, 2));
        let back: PsiExpression = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
        assert_eq!(e.to_latex(), "-\\frac{1}{2}\\psi_{0} - \\frac{1}{2}\\psi_{1}");
        assert!(e.dyadic());
    }
}
