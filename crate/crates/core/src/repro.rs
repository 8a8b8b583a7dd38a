//! Reproduction checks for the published values, one line each.

use crate::graph::GraphBuilder;
use crate::harmonic::validate_harmonic;
use crate::modforms::{cusp_dim, cusp_dim_gamma12, first_nonzero_cusp_weight, CurveData};
use crate::prym::{classify, validate_prym, PrymStructure, VertexClass};
use crate::psi::{rational, PsiExpression};
use crate::pullback::{normal_bundle_c1, pullback_boundary_class};
use crate::specialize::specializations;
use crate::strata::{build_gluing, build_elliptic_pair_gluing, nontaut_bound, stratum_factors, FactorKind, GluingParams};
use crate::Result;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{tag} {}", self.name)
        } else {
            format!("{tag} {} ({})", self.name, self.detail)
        }
    }
}

fn gp(g: u32) -> GluingParams {
    GluingParams {
        g,
        ..Default::default()
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(got: T, want: T) -> (bool, String) {
    (got == want, format!("got {got:?}, expected {want:?}"))
}

type Body = fn() -> Result<(bool, String)>;

fn checks() -> Vec<(&'static str, Body)> {
    vec![
        ("valence of the loop vertex with m legs and 2r ramification legs", || {
            let s = build_gluing(4, &GluingParams { g: 3, m: 2, r: 1, ..Default::default() })?;
            Ok(eq(s.target().valence(0)?, 2 + 2 + 2))
        }),
        ("genus of a genus g-1 vertex with a loop is g", || {
            let mut b = GraphBuilder::new();
            let v = b.vertex(3);
            b.edge(v, v);
            Ok(eq(b.build().graph_genus()?, 4))
        }),
        ("loop clutching cover has degree 2", || {
            Ok(eq(build_gluing(5, &gp(3))?.morphism.degree()?, 2))
        }),
        ("chain cover has degree 2 with a degree-2 edge", || {
            let s = build_gluing(2, &GluingParams { g: 2, i: 1, r1: 1, r2: 1, ..Default::default() })?;
            let has_two = s.morphism.local_degrees.contains(&2);
            let (ok, d) = eq(s.morphism.degree()?, 2);
            Ok((ok && has_two, d))
        }),
        ("loop clutching cover is étale", || {
            Ok(eq(build_gluing(5, &gp(3))?.morphism.is_etale(), true))
        }),
        ("chain cover is not étale", || {
            let s = build_gluing(2, &GluingParams { g: 2, i: 1, r1: 1, r2: 1, ..Default::default() })?;
            Ok(eq(s.morphism.is_etale(), false))
        }),
        ("separating gluing i=1 g=2 validates", || {
            let s = build_gluing(1, &GluingParams { g: 2, i: 1, ..Default::default() })?;
            let ok = validate_prym(&s.morphism).is_valid() && validate_harmonic(&s.morphism, 2).is_valid();
            Ok((ok && s.source().edge_count() == 2, String::new()))
        }),
        ("chain gluing classes: exceptional middle, ramified ends", || {
            let s = build_gluing(2, &GluingParams { g: 2, i: 1, r1: 1, r2: 1, ..Default::default() })?;
            let c = classify(&s.morphism)?;
            let classes: Vec<VertexClass> = (0..3).map(|v| c.class_of(v)).collect();
            let want = vec![VertexClass::Ramified, VertexClass::Ramified, VertexClass::Exceptional];
            let edges_ok = c.vertices[..2].iter().all(|d| d.exceptional_edges == 1);
            let (ok, d) = eq(classes, want);
            Ok((ok && edges_ok, d))
        }),
        ("trivial-cover gluing classes: genus-i trivial, other nontrivial", || {
            let s = build_gluing(3, &GluingParams { g: 3, i: 1, m: 1, ..Default::default() })?;
            let c = classify(&s.morphism)?;
            Ok(eq((c.class_of(0), c.class_of(1)), (VertexClass::Nontrivial, VertexClass::Trivial)))
        }),
        ("specializations over a trivial vertex replace both preimages alike", || {
            let s = build_gluing(3, &GluingParams { g: 3, i: 2, m: 0, ..Default::default() })?;
            let ok = specializations(&s, 1)?.iter().all(|p| trivial_sheets_match(p));
            Ok((ok, String::new()))
        }),
        ("loop clutching factor is M_{g-1,m+2}, codimension 1", || {
            let s = build_gluing(5, &GluingParams { g: 3, m: 2, ..Default::default() })?;
            let d = stratum_factors(&s)?;
            let f = &d.factors[0];
            Ok(eq(
                (d.factors.len(), f.kind, f.genus, f.n, f.dimension, d.codimension),
                (1, FactorKind::Curve, 2, 4, 3 * 3 - 4 + 2, 1),
            ))
        }),
        ("loop clutching g=3: two genus-2 cover vertices, two edges", || {
            let s = build_gluing(5, &gp(3))?;
            let src = s.source();
            Ok(eq((src.genera().to_vec(), src.edge_count()), (vec![2, 2], 2)))
        }),
        ("loop-through-exceptional gluing g=2: validates, source genus 3", || {
            let s = build_gluing(6, &gp(2))?;
            Ok(eq(s.source().graph_genus()?, 3))
        }),
        ("trivial-cover gluing i=1 g=3: doubled genus-1 vertex", || {
            let s = build_gluing(3, &GluingParams { g: 3, i: 1, m: 1, ..Default::default() })?;
            Ok(eq(s.morphism.preimages(1).len(), 2))
        }),
        ("two elliptic vertices with 12 legs: ambient genus 2", || {
            let s = build_elliptic_pair_gluing(2, 6)?;
            Ok(eq((s.ambient_genus(), s.target().leg_count()), (2, 12)))
        }),
        ("m_2(2) = 12", || Ok(eq(nontaut_bound(2)?, 12))),
        ("m_2(6) = 4", || Ok(eq(nontaut_bound(6)?, 4))),
        ("plain node class -(psi + psi)", || {
            let s = build_gluing(1, &GluingParams { g: 2, i: 1, ..Default::default() })?;
            let c1 = normal_bundle_c1(&s)?;
            Ok((c1.terms().len() == 2 && c1.terms().values().all(|c| *c == rational(-1, 1)), c1.to_string()))
        }),
        ("exceptional node class -1/2 (psi + psi)", || {
            let s = build_gluing(2, &GluingParams { g: 2, i: 1, r1: 1, r2: 1, ..Default::default() })?;
            let c1 = normal_bundle_c1(&s)?;
            Ok((c1.terms().len() == 2 && c1.terms().values().all(|c| *c == rational(-1, 2)), c1.to_string()))
        }),
        ("self-pullback of the chain stratum carries -1/2 (psi + psi)", || {
            let s = build_gluing(2, &GluingParams { g: 2, i: 1, r1: 1, r2: 1, ..Default::default() })?;
            let r = pullback_boundary_class(&s, &s)?;
            let t = r.terms.iter().find(|t| t.relative_codimension == 0);
            let ok = t.is_some_and(|t| {
                let c1: PsiExpression = normal_bundle_c1(&t.pair.structure).unwrap_or_default();
                t.expression == c1 && t.expression.terms().values().all(|c| *c == rational(-1, 2))
            });
            Ok((ok, String::new()))
        }),
        ("dim S_8(Gamma_1(2)) = 1", || Ok(eq(cusp_dim(&CurveData::GAMMA1_2, 8)?, 1))),
        ("dim S_6(Gamma_1(2)) = 0", || Ok(eq(cusp_dim(&CurveData::GAMMA1_2, 6)?, 0))),
        ("dim S_12(Gamma_1(2)) = 2", || Ok(eq(cusp_dim(&CurveData::GAMMA1_2, 12)?, 2))),
        ("closed form k=8 gives 1", || Ok(eq(cusp_dim_gamma12(8)?, 1))),
        ("closed form k=4 gives 0", || Ok(eq(cusp_dim_gamma12(4)?, 0))),
        ("first cusp form of Gamma_1(2) in weight 8", || {
            Ok(eq(first_nonzero_cusp_weight(&CurveData::GAMMA1_2)?, 8))
        }),
    ]
}

/// Over every trivial target vertex the two preimages carry equal genus
/// and valence.
fn trivial_sheets_match(p: &PrymStructure) -> bool {
    let src = p.source();
    p.classification.trivial.iter().all(|&v| {
        let pre = p.morphism.preimages(v);
        pre.len() == 2
            && src.genus_of(pre[0]) == src.genus_of(pre[1])
            && src.half_edges_at(pre[0]).len() == src.half_edges_at(pre[1]).len()
    })
}

/// Runs every check; errors count as failures.
pub fn run() -> Vec<Check> {
    checks()
        .into_iter()
        .map(|(name, body)| match body() {
            Ok((passed, detail)) => Check {
                name,
                passed,
                detail: if passed { String::new() } else { detail },
            },
            Err(e) => Check {
                name,
                passed: false,
                detail: e.to_string(),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_pass() {
        for c in super::run() {
            assert!(c.passed, "{}", c.line());
        }
    }
}
