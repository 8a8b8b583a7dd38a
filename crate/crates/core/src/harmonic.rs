//! Finite harmonic morphisms between weighted graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_ram_label, validate_structure, WeightedGraph};
use crate::report::{IssueKind, ValidationReport};

/// A map of weighted graphs `source -> target` with a local degree on every
/// source half-edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicMorphism {
    pub source: WeightedGraph,
    pub target: WeightedGraph,
    pub vertex_map: Vec<usize>,
    pub half_edge_map: Vec<usize>,
    pub local_degrees: Vec<u32>,
}

/// Whether target legs labeled `ram:` are ramification points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Unramified,
    Ramified,
}

impl Variant {
    /// Ramified iff the graph carries at least one `ram:` leg.
    pub fn detect(g: &WeightedGraph) -> Variant {
        if g.legs().values().any(|l| is_ram_label(l)) {
            Variant::Ramified
        } else {
            Variant::Unramified
        }
    }

    pub fn is_ramified_leg(self, label: &str) -> bool {
        self == Variant::Ramified && is_ram_label(label)
    }
}

impl HarmonicMorphism {
    /// The identity of `g`, all local degrees 1.
    pub fn identity(g: &WeightedGraph) -> Self {
        HarmonicMorphism {
            source: g.clone(),
            target: g.clone(),
            vertex_map: (0..g.vertex_count()).collect(),
            half_edge_map: (0..g.half_edge_count()).collect(),
            local_degrees: vec![1; g.half_edge_count()],
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("morphism serialization cannot fail")
    }

    /// Source vertices over `v`, ascending.
    pub fn preimages(&self, v: usize) -> Vec<usize> {
        (0..self.vertex_map.len())
            .filter(|&w| self.vertex_map[w] == v)
            .collect()
    }

    /// Source half-edges over the target half-edge `h`, ascending.
    pub fn lifts(&self, h: usize) -> Vec<usize> {
        (0..self.half_edge_map.len())
            .filter(|&k| self.half_edge_map[k] == h)
            .collect()
    }

    pub fn is_etale(&self) -> bool {
        self.local_degrees.iter().all(|&n| n == 1)
    }

    /// The degree: common value of the edge sums and leg preimage counts.
    pub fn degree(&self) -> Result<u32> {
        let report = structural_checks(self);
        if !report.is_valid() {
            return Err(Error::InvalidMorphism(report));
        }
        let variant = Variant::detect(&self.target);
        let mut seen: Option<(String, u32)> = None;
        let mut record = |what: String, value: u32| -> Result<()> {
            match &seen {
                None => {
                    seen = Some((what, value));
                    Ok(())
                }
                Some((first, d)) if *d != value => {
                    let mut r = ValidationReport::new();
                    r.push(
                        IssueKind::EdgeDegree,
                        format!("{what} has degree {value} but {first} has degree {d}"),
                    );
                    Err(Error::InvalidMorphism(r))
                }
                Some(_) => Ok(()),
            }
        };
        for (h, hb) in self.target.edges() {
            let sum = self
                .lifts(h)
                .into_iter()
                .map(|k| self.local_degrees[k])
                .sum();
            record(format!("edge {h}-{hb}"), sum)?;
        }
        for (&l, label) in self.target.legs() {
            let pre = self.lifts(l);
            let value = if variant.is_ramified_leg(label) && pre.len() == 1 {
                self.local_degrees[pre[0]]
            } else {
                pre.len() as u32
            };
            record(format!("leg {label:?}"), value)?;
        }
        if let Some((_, d)) = seen {
            return Ok(d);
        }
        // no edges or legs: the target is a single vertex
        let g = self.target.genus_of(0) as i64;
        let lhs: i64 = self
            .source
            .genera()
            .iter()
            .map(|&h| 2 * h as i64 - 2)
            .sum();
        if g != 1 && lhs % (2 * g - 2) == 0 && lhs / (2 * g - 2) > 0 {
            return Ok((lhs / (2 * g - 2)) as u32);
        }
        let mut r = ValidationReport::new();
        r.push(IssueKind::EdgeDegree, "degree undetermined");
        Err(Error::InvalidMorphism(r))
    }

    /// Applies relabelings (`perm[old] = new`) to target and source.
    pub fn relabel(
        &self,
        target_vertices: &[usize],
        target_half_edges: &[usize],
        source_vertices: &[usize],
        source_half_edges: &[usize],
    ) -> HarmonicMorphism {
        let target = self.target.relabel(target_vertices, target_half_edges);
        let source = self.source.relabel(source_vertices, source_half_edges);
        let mut vertex_map = vec![0; self.vertex_map.len()];
        for (v, &t) in self.vertex_map.iter().enumerate() {
            vertex_map[source_vertices[v]] = target_vertices[t];
        }
        let mut half_edge_map = vec![0; self.half_edge_map.len()];
        let mut local_degrees = vec![0; self.local_degrees.len()];
        for (h, &t) in self.half_edge_map.iter().enumerate() {
            half_edge_map[source_half_edges[h]] = target_half_edges[t];
            local_degrees[source_half_edges[h]] = self.local_degrees[h];
        }
        HarmonicMorphism {
            source,
            target,
            vertex_map,
            half_edge_map,
            local_degrees,
        }
    }
}

/// Shape, range, surjectivity and commuting-square checks. Everything else
/// assumes these pass.
pub(crate) fn structural_checks(phi: &HarmonicMorphism) -> ValidationReport {
    let mut r = ValidationReport::new();
    r.extend(validate_structure(&phi.source).prefixed("source"));
    r.extend(validate_structure(&phi.target).prefixed("target"));
    if phi.target.vertex_count() == 0 {
        r.push(IssueKind::NoVertices, "target: graph has no vertices");
    }
    if !r.is_valid() {
        return r;
    }
    let (src, tgt) = (&phi.source, &phi.target);
    let nh = src.half_edge_count();
    if phi.vertex_map.len() != src.vertex_count() {
        r.push(
            IssueKind::MapLength,
            format!(
                "vertex_map has {} entries for {} source vertices",
                phi.vertex_map.len(),
                src.vertex_count()
            ),
        );
    }
    for (name, len) in [
        ("half_edge_map", phi.half_edge_map.len()),
        ("local_degrees", phi.local_degrees.len()),
    ] {
        if len != nh {
            r.push(
                IssueKind::MapLength,
                format!("{name} has {len} entries for {nh} source half-edges"),
            );
        }
    }
    if !r.is_valid() {
        return r;
    }
    for (v, &t) in phi.vertex_map.iter().enumerate() {
        if t >= tgt.vertex_count() {
            r.push(
                IssueKind::MapOutOfRange,
                format!("source vertex {v} maps to missing target vertex {t}"),
            );
        }
    }
    for (h, &t) in phi.half_edge_map.iter().enumerate() {
        if t >= tgt.half_edge_count() {
            r.push(
                IssueKind::MapOutOfRange,
                format!("source half-edge {h} maps to missing target half-edge {t}"),
            );
        }
    }
    if !r.is_valid() {
        return r;
    }
    let mut hit = vec![false; tgt.vertex_count()];
    for &t in &phi.vertex_map {
        hit[t] = true;
    }
    if let Some(v) = hit.iter().position(|&x| !x) {
        r.push(
            IssueKind::VertexMapNotSurjective,
            format!("target vertex {v} has no preimage"),
        );
    }
    let mut hit = vec![false; tgt.half_edge_count()];
    for &t in &phi.half_edge_map {
        hit[t] = true;
    }
    if let Some(h) = hit.iter().position(|&x| !x) {
        r.push(
            IssueKind::HalfEdgeMapNotSurjective,
            format!("target half-edge {h} has no preimage"),
        );
    }
    for h in 0..nh {
        let t = phi.half_edge_map[h];
        if phi.half_edge_map[src.partner(h)] != tgt.partner(t) {
            r.push(
                IssueKind::InvolutionNotCommuting,
                format!("half-edge map does not commute with the involutions at source half-edge {h}"),
            );
        }
        if tgt.anchor(t) != phi.vertex_map[src.anchor(h)] {
            r.push(
                IssueKind::AnchorNotCommuting,
                format!("half-edge map does not commute with the anchors at source half-edge {h}"),
            );
        }
        let n = phi.local_degrees[h];
        if n == 0 {
            r.push(
                IssueKind::LocalDegreeInvalid,
                format!("local degree at source half-edge {h} is 0"),
            );
        } else if n != phi.local_degrees[src.partner(h)] {
            r.push(
                IssueKind::LocalDegreeInvalid,
                format!(
                    "local degrees differ on the two halves of the edge at source half-edge {h}"
                ),
            );
        }
        if !src.is_leg(h) && tgt.is_leg(t) {
            r.push(
                IssueKind::EdgeOntoLeg,
                format!("source half-edge {h} belongs to an edge but maps to a leg"),
            );
        }
    }
    r
}

/// Conditions i-v with `ram:` legs interpreted per the target's labels.
pub fn validate_harmonic(phi: &HarmonicMorphism, degree: u32) -> ValidationReport {
    validate_harmonic_in(phi, degree, Variant::detect(&phi.target))
}

/// Conditions i-v, plus per-vertex balance and Riemann-Hurwitz.
pub fn validate_harmonic_in(phi: &HarmonicMorphism, d: u32, variant: Variant) -> ValidationReport {
    let mut r = structural_checks(phi);
    if !r.is_valid() {
        return r;
    }
    let (src, tgt) = (&phi.source, &phi.target);
    let n = &phi.local_degrees;
    let d64 = d as i64;

    // iii
    for (h, hb) in tgt.edges() {
        let sum: u32 = phi.lifts(h).into_iter().map(|k| n[k]).sum();
        if sum != d {
            r.push(
                IssueKind::EdgeDegree,
                format!("edge {h}-{hb}: local degrees sum to {sum}, expected {d}"),
            );
        }
    }
    // iv
    for (&l, label) in tgt.legs() {
        let pre = phi.lifts(l);
        if variant.is_ramified_leg(label) {
            if pre.len() != 1 || n[pre[0]] != d {
                r.push(
                    IssueKind::LegPreimages,
                    format!("ramification leg {label:?} needs one preimage of local degree {d}"),
                );
            }
        } else if pre.len() != d as usize || pre.iter().any(|&k| n[k] != 1) {
            r.push(
                IssueKind::LegPreimages,
                format!(
                    "leg {label:?} has {} preimages, expected {d} of local degree 1",
                    pre.len()
                ),
            );
        }
    }
    // v
    let ramification = |w: usize| -> i64 {
        src.half_edges_at(w)
            .into_iter()
            .map(|k| n[k] as i64 - 1)
            .sum()
    };
    for v in 0..tgt.vertex_count() {
        let pre = phi.preimages(v);
        let lhs: i64 = pre
            .iter()
            .map(|&w| 2 * src.genus_of(w) as i64 - 2)
            .sum();
        let rhs = d64 * (2 * tgt.genus_of(v) as i64 - 2)
            + pre.iter().map(|&w| ramification(w)).sum::<i64>();
        if lhs != rhs {
            r.push(
                IssueKind::RiemannHurwitz,
                format!("condition v fails at target vertex {v}: {lhs} != {rhs}"),
            );
        }
    }
    // local balance and local Riemann-Hurwitz
    for w in 0..src.vertex_count() {
        let v = phi.vertex_map[w];
        let at_v = tgt.half_edges_at(v);
        let local = if at_v.is_empty() {
            let count = phi.preimages(v).len() as i64;
            if d64 % count != 0 {
                r.push(
                    IssueKind::LocalBalance,
                    format!("degree {d} does not split over the {count} preimages of vertex {v}"),
                );
                continue;
            }
            d64 / count
        } else {
            let at_w = src.half_edges_at(w);
            let sums: Vec<i64> = at_v
                .iter()
                .map(|&h| {
                    at_w.iter()
                        .filter(|&&k| phi.half_edge_map[k] == h)
                        .map(|&k| n[k] as i64)
                        .sum()
                })
                .collect();
            if sums[0] == 0 || sums.iter().any(|&s| s != sums[0]) {
                r.push(
                    IssueKind::LocalBalance,
                    format!("source vertex {w} is not balanced over vertex {v}: {sums:?}"),
                );
                continue;
            }
            sums[0]
        };
        let lhs = 2 * src.genus_of(w) as i64 - 2;
        let rhs = local * (2 * tgt.genus_of(v) as i64 - 2) + ramification(w);
        if lhs != rhs {
            r.push(
                IssueKind::LocalRiemannHurwitz,
                format!("Riemann-Hurwitz fails at source vertex {w}: {lhs} != {rhs}"),
            );
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    /// Target: genus g-1 with a loop and m legs; source: two copies joined
    /// crosswise by two edges.
    fn clutching(g: u32, m: usize) -> HarmonicMorphism {
        let mut t = GraphBuilder::new();
        let v = t.vertex(g - 1);
        let (h, hb) = t.edge(v, v);
        let mut legs = Vec::new();
        for j in 0..m {
            legs.push(t.leg(v, &format!("x{}", j + 1)));
        }
        let mut s = GraphBuilder::new();
        let a = s.vertex(g - 1);
        let b = s.vertex(g - 1);
        let mut hm = Vec::new();
        s.edge(a, b);
        hm.extend([h, hb]);
        s.edge(b, a);
        hm.extend([h, hb]);
        for (j, &l) in legs.iter().enumerate() {
            s.leg(a, &format!("x{}+", j + 1));
            s.leg(b, &format!("x{}-", j + 1));
            hm.extend([l, l]);
        }
        let source = s.build();
        let nh = source.half_edge_count();
        HarmonicMorphism {
            source,
            target: t.build(),
            vertex_map: vec![0, 0],
            half_edge_map: hm,
            local_degrees: vec![1; nh],
        }
    }

    #[test]
    fn clutching_has_degree_two_and_is_etale() {
        let phi = clutching(3, 2);
        assert_eq!(phi.degree().unwrap(), 2);
        assert!(phi.is_etale());
        assert!(validate_harmonic(&phi, 2).is_valid(), "{}", validate_harmonic(&phi, 2));
        assert_eq!(phi.source.graph_genus().unwrap(), 5);
    }

    #[test]
    fn raising_a_source_genus_breaks_condition_v() {
        let mut phi = clutching(3, 0);
        let genera: Vec<u32> = vec![3, 2];
        phi.source = WeightedGraph::from_parts(
            genera,
            phi.source.anchors().to_vec(),
            phi.source.involution().to_vec(),
            phi.source.legs().clone(),
        );
        let r = validate_harmonic(&phi, 2);
        assert!(r.has(IssueKind::RiemannHurwitz));
    }

    #[test]
    fn identity_is_degree_one() {
        let mut b = GraphBuilder::new();
        let u = b.vertex(1);
        let v = b.vertex(0);
        b.edge(u, v);
        b.edge(v, v);
        b.leg(v, "x1");
        let id = HarmonicMorphism::identity(&b.build());
        assert_eq!(id.degree().unwrap(), 1);
        assert!(validate_harmonic(&id, 1).is_valid());
        assert!(id.is_etale());
    }

    #[test]
    fn json_round_trip() {
        let phi = clutching(2, 1);
        let back = HarmonicMorphism::from_json(&phi.to_json()).unwrap();
        assert_eq!(back, phi);
    }
}
