//! Specializations of Prym structures and generic pairs over two strata.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphism_canon::canonical_morphism;
use crate::prym::PrymStructure;
use crate::strata::{catalogue, node_flags, nodes, Ambient};

/// All specializations of `phi` with at most `max_extra` more nodes,
/// `phi` included, in canonical labeling, sorted by (codimension, code).
pub fn specializations(phi: &PrymStructure, max_extra: usize) -> Result<Vec<PrymStructure>> {
    let ambient = Ambient::of(phi);
    let code = canonical_morphism(&phi.morphism, None, false).code;
    let top = phi.codimension() + max_extra;
    let cat = catalogue(&ambient, top)?;
    Ok(cat
        .iter()
        .filter(|e| e.codimension >= phi.codimension() && e.codimension <= top)
        .filter(|e| e.contractions().contains_key(&code))
        .map(|e| e.structure.clone())
        .collect())
}

/// Which of the two strata an edge of a generic structure comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeColor {
    /// Survives in the first stratum only.
    First,
    /// Survives in the second stratum only.
    Second,
    /// Shared: survives in both.
    Both,
}

impl EdgeColor {
    fn digit(self) -> u8 {
        match self {
            EdgeColor::First => 1,
            EdgeColor::Second => 2,
            EdgeColor::Both => 3,
        }
    }

    fn from_digit(d: u8) -> Self {
        match d {
            1 => EdgeColor::First,
            2 => EdgeColor::Second,
            _ => EdgeColor::Both,
        }
    }
}

/// A generic `(phi1, phi2)`-structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericPair {
    pub structure: PrymStructure,
    /// One color per target edge, in `target.edges()` order.
    pub colors: Vec<EdgeColor>,
    /// Target edges contracted to reach the first stratum.
    pub first_contraction: Vec<bool>,
    /// Target edges contracted to reach the second stratum.
    pub second_contraction: Vec<bool>,
    pub codimension: usize,
    /// Order of the automorphism group of the structure, coloring ignored.
    pub automorphisms: u64,
    pub multiplicity: u64,
}

impl GenericPair {
    pub fn shared_edges(&self) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&e| self.colors[e] == EdgeColor::Both)
            .collect()
    }
}

/// All generic `(phi1, phi2)`-structures up to isomorphism, sorted by
/// (codimension, colored code).
pub fn enumerate_generic_pairs(phi1: &PrymStructure, phi2: &PrymStructure) -> Result<Vec<GenericPair>> {
    let ambient = Ambient::of(phi1);
    let other = Ambient::of(phi2);
    if ambient != other {
        return Err(Error::AmbientMismatch(format!(
            "genus {} {:?} ({:?}) vs genus {} {:?} ({:?})",
            ambient.genus, ambient.labels, ambient.variant, other.genus, other.labels, other.variant
        )));
    }
    let c1 = canonical_morphism(&phi1.morphism, None, false).code;
    let c2 = canonical_morphism(&phi2.morphism, None, false).code;
    let (k1, k2) = (phi1.codimension(), phi2.codimension());
    let top = (k1 + k2).min(ambient.dimension().max(0) as usize);
    let cat = catalogue(&ambient, top)?;
    let mut found: BTreeMap<(usize, Vec<u8>), GenericPair> = BTreeMap::new();
    for entry in cat.iter() {
        if entry.codimension < k1.max(k2) || entry.codimension > k1 + k2 {
            continue;
        }
        let map = entry.contractions();
        let (Some(m1), Some(m2)) = (map.get(&c1), map.get(&c2)) else {
            continue;
        };
        let ns = nodes(&entry.structure);
        let ne = entry.structure.target().edge_count();
        for &a in m1 {
            for &b in m2 {
                if a & b != 0 {
                    continue;
                }
                let first = node_flags(&ns, ne, a);
                let second = node_flags(&ns, ne, b);
                let digits: Vec<u8> = (0..ne)
                    .map(|e| match (first[e], second[e]) {
                        (false, false) => EdgeColor::Both,
                        (false, true) => EdgeColor::First,
                        _ => EdgeColor::Second,
                    }.digit())
                    .collect();
                let c = canonical_morphism(&entry.structure.morphism, Some(&digits), false);
                if found.contains_key(&(entry.codimension, c.code.clone())) {
                    continue;
                }
                let colors: Vec<EdgeColor> = c.colors.iter().map(|&d| EdgeColor::from_digit(d)).collect();
                let structure = PrymStructure::new_unchecked(c.morphism, entry.structure.variant);
                let first_contraction = colors.iter().map(|&x| x == EdgeColor::Second).collect();
                let second_contraction = colors.iter().map(|&x| x == EdgeColor::First).collect();
                found.insert(
                    (entry.codimension, c.code),
                    GenericPair {
                        structure,
                        colors,
                        first_contraction,
                        second_contraction,
                        codimension: entry.codimension,
                        automorphisms: entry.automorphisms,
                        multiplicity: 1,
                    },
                );
            }
        }
    }
    Ok(found.into_values().collect())
}
