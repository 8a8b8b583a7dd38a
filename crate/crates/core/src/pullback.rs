//! Normal bundles of gluing maps and pullbacks of boundary classes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prym::{validate_prym_in, PrymStructure};
use crate::psi::{rational, PsiExpression, PsiSymbol};
use crate::specialize::{enumerate_generic_pairs, EdgeColor, GenericPair};
use crate::strata::{nodes, Node};

fn symbol(p: &PrymStructure, h: usize) -> PsiSymbol {
    PsiSymbol::new(h, p.target().anchor(h))
}

/// `-(psi_h + psi_hb)` for a plain node, `-1/2 (psi_h + psi_hb)` at the
/// stable-side halves of an exceptional chain.
fn node_class(p: &PrymStructure, n: &Node) -> PsiExpression {
    let c = if n.exceptional {
        rational(-1, 2)
    } else {
        rational(-1, 1)
    };
    PsiExpression::linear_pair(symbol(p, n.halves.0), symbol(p, n.halves.1), c)
}

fn checked(p: &PrymStructure) -> Result<()> {
    let report = validate_prym_in(&p.morphism, p.variant);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidPrym(report))
    }
}

fn shared(pair: &GenericPair) -> impl Iterator<Item = Node> + '_ {
    nodes(&pair.structure)
        .into_iter()
        .filter(|n| pair.colors[n.edges[0]] == EdgeColor::Both)
}

/// Product of `-(psi_h + psi_hb)` over shared plain nodes.
pub fn q1(pair: &GenericPair) -> PsiExpression {
    shared(pair)
        .filter(|n| !n.exceptional)
        .fold(PsiExpression::one(), |acc, n| acc.mul(&node_class(&pair.structure, &n)))
}

/// Product of `-1/2 (psi_h + psi_hb)` over shared exceptional chains.
pub fn q2(pair: &GenericPair) -> PsiExpression {
    shared(pair)
        .filter(|n| n.exceptional)
        .fold(PsiExpression::one(), |acc, n| acc.mul(&node_class(&pair.structure, &n)))
}

/// First Chern class of the normal bundle of the gluing map.
pub fn normal_bundle_c1(p: &PrymStructure) -> Result<PsiExpression> {
    checked(p)?;
    Ok(nodes(p)
        .iter()
        .fold(PsiExpression::zero(), |acc, n| acc.add(&node_class(p, n))))
}

/// Top Chern class of the normal bundle: the product of the node classes.
pub fn normal_bundle_top(p: &PrymStructure) -> Result<PsiExpression> {
    checked(p)?;
    Ok(nodes(p)
        .iter()
        .fold(PsiExpression::one(), |acc, n| acc.mul(&node_class(p, n))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackTerm {
    pub pair: GenericPair,
    pub expression: PsiExpression,
    pub psi_degree: usize,
    /// `codim(phi) - codim(phi1)`.
    pub relative_codimension: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackResult {
    pub terms: Vec<PullbackTerm>,
}

impl PullbackResult {
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| format!("\\chi_{{\\phi_{{{}}},*}}\\left({}\\right)", i + 1, t.expression.to_latex()))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Pullback of the class of the second stratum along the gluing map of the
/// first, one term per generic pair.
pub fn pullback_boundary_class(phi1: &PrymStructure, phi2: &PrymStructure) -> Result<PullbackResult> {
    checked(phi1)?;
    checked(phi2)?;
    let base = phi1.codimension();
    let pairs = enumerate_generic_pairs(phi1, phi2)?;
    let terms = pairs
        .into_par_iter()
        .map(|pair| {
            let expression = q1(&pair).mul(&q2(&pair));
            PullbackTerm {
                psi_degree: shared(&pair).count(),
                relative_codimension: pair.codimension - base,
                expression,
                pair,
            }
        })
        .collect();
    Ok(PullbackResult { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::{build_gluing, enumerate_strata, GluingParams};

    #[test]
    fn separating_node() {
        let s = build_gluing(1, &GluingParams { g: 2, i: 1, ..Default::default() }).unwrap();
        let c1 = normal_bundle_c1(&s).unwrap();
        assert_eq!(c1.terms().len(), 2);
        assert!(c1.terms().values().all(|c| *c == rational(-1, 1)));
    }

    #[test]
    fn exceptional_chain_halves() {
        let p = GluingParams { g: 2, i: 1, r1: 1, r2: 1, ..Default::default() };
        let s = build_gluing(2, &p).unwrap();
        let c1 = normal_bundle_c1(&s).unwrap();
        assert_eq!(c1.terms().len(), 2);
        assert!(c1.terms().values().all(|c| *c == rational(-1, 2)));
        for m in c1.terms().keys() {
            assert!(!s.target().is_strictly_semistable(m[0].vertex));
        }
    }

    #[test]
    fn smooth_pullback_is_identity() {
        let strata = enumerate_strata(2, 0, 1).unwrap();
        let r = pullback_boundary_class(&strata[0].structure, &strata[3].structure).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert_eq!(r.terms[0].expression, PsiExpression::one());
        assert_eq!(r.terms[0].relative_codimension, 1);
    }

    #[test]
    fn self_intersection_degree() {
        let strata = enumerate_strata(2, 0, 1).unwrap();
        for d in &strata[1..] {
            let r = pullback_boundary_class(&d.structure, &d.structure).unwrap();
            let selfs: Vec<_> = r.terms.iter().filter(|t| t.relative_codimension == 0).collect();
            assert_eq!(selfs.len(), 1);
            assert_eq!(selfs[0].expression, normal_bundle_c1(&selfs[0].pair.structure).unwrap());
            for t in &r.terms {
                assert_eq!(t.psi_degree + t.relative_codimension, 1);
            }
        }
    }
}
