//! Enumeration of fibered weak del Pezzo configurations up to isomorphism
//! and of those whose tangent sheaf is destabilized by the fibration.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::foliation::{self, SlopeReport};
use crate::fsing::{format_ade_multiset, AdeType};
use crate::surface::{hirzebruch, Center, FiberTree, SurfaceConfig, SurfaceError};

pub const MAX_BLOWUPS: usize = 7;

/// Singularity types expected on the anticanonical models of the
/// singular unstable classes.
pub const EXPECTED_TYPES: [&str; 6] = ["2A1", "4A1", "6A1", "A1+A2", "2A1+A3", "3A1+D4"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("max blowups {0} exceeds {MAX_BLOWUPS} (K² would reach 0)")]
    TooManyBlowups(usize),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

fn encode_subtree(tree: &FiberTree, v: usize, parent: Option<usize>) -> (i64, u32, String) {
    let c = &tree.components[v];
    let mut children: Vec<(i64, u32, String)> = tree
        .neighbours(v)
        .into_iter()
        .filter(|&w| Some(w) != parent)
        .map(|w| encode_subtree(tree, w, Some(v)))
        .collect();
    children.sort();
    let inner: Vec<&str> = children.iter().map(|c| c.2.as_str()).collect();
    (
        c.self_int,
        c.multiplicity,
        format!("[{}:{};{}]", c.self_int, c.multiplicity, inner.join("")),
    )
}

/// Rooted-tree encoding of one fiber, rooted at the component meeting the section.
pub fn encode_fiber(tree: &FiberTree) -> String {
    let root = tree.section_component().unwrap_or(0);
    encode_subtree(tree, root, None).2
}

/// Isomorphism key of a configuration. Contracting every fiber onto its
/// component meeting the section leaves a Hirzebruch surface `F_p` with
/// `p = −S²`, so configurations related by elementary transformations share
/// the prefix `F{p}`; the fibers follow as a sorted multiset of encodings.
pub fn canonical_encoding(config: &SurfaceConfig) -> String {
    let mut fibers: Vec<String> = config.fibers().iter().map(encode_fiber).collect();
    fibers.sort();
    let mut key = format!("F{}", -config.section_self_int());
    for f in fibers {
        key.push('|');
        key.push_str(&f);
    }
    key
}

/// Base index `p` of the key prefix.
pub fn effective_base(config: &SurfaceConfig) -> i64 {
    -config.section_self_int()
}

/// Names the configuration `F_n` or `X_{n,k}` when it is one of them.
pub fn known_name(key: &str) -> Option<String> {
    for n in 0..=2 {
        for k in 0..=3 {
            let x = SurfaceConfig::x_nk(n, k).expect("valid");
            if canonical_encoding(&x) == key {
                return Some(if k == 0 {
                    format!("F{n}")
                } else {
                    format!("X_{{{n},{k}}}")
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub canonical_key: String,
    pub name: Option<String>,
    pub base_n: i64,
    pub m: usize,
    pub blowup_profile: Vec<String>,
    pub slope: SlopeReport,
    pub singularities: Vec<AdeType>,
    pub singularity_label: String,
    pub known_family: bool,
    /// A blowup sequence producing the class.
    pub witness: SurfaceWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceWitness {
    pub base: String,
    pub steps: Vec<Center>,
}

impl ClassificationReport {
    pub fn from_config(config: &SurfaceConfig) -> Result<Self, ClassifyError> {
        let key = canonical_encoding(config);
        let singularities = config.anticanonical_model()?;
        let name = known_name(&key);
        let mut blowup_profile: Vec<String> = config.fibers().iter().map(encode_fiber).collect();
        blowup_profile.sort();
        Ok(ClassificationReport {
            base_n: effective_base(config),
            m: config.m(),
            blowup_profile,
            slope: foliation::slope_report(config),
            singularity_label: format_ade_multiset(&singularities),
            singularities,
            known_family: name.is_some(),
            name,
            canonical_key: key,
            witness: SurfaceWitness {
                base: format!("F{}", config.n()),
                steps: config.history().to_vec(),
            },
        })
    }

    pub fn config(&self) -> SurfaceConfig {
        let n = self.witness.base[1..]
            .parse()
            .expect("base written by from_config");
        hirzebruch(n)
            .and_then(|b| b.blowup_all(&self.witness.steps))
            .expect("witness replays")
    }
}

/// Model checks run on every configuration the search visits.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Distinct (up to isomorphism) weak del Pezzo configurations visited.
    pub configs_visited: usize,
    /// Parent–child blowup steps checked.
    pub steps_checked: usize,
    pub semistability_violations: usize,
    pub adjunction_violations: usize,
    pub n_recursion_violations: usize,
    pub invariant_violations: usize,
    pub minus_two_center_violations: usize,
}

impl SearchStats {
    fn merge(&mut self, o: &SearchStats) {
        self.configs_visited += o.configs_visited;
        self.steps_checked += o.steps_checked;
        self.semistability_violations += o.semistability_violations;
        self.adjunction_violations += o.adjunction_violations;
        self.n_recursion_violations += o.n_recursion_violations;
        self.invariant_violations += o.invariant_violations;
        self.minus_two_center_violations += o.minus_two_center_violations;
    }

    pub fn clean(&self) -> bool {
        self.semistability_violations == 0
            && self.adjunction_violations == 0
            && self.n_recursion_violations == 0
            && self.invariant_violations == 0
            && self.minus_two_center_violations == 0
    }
}

/// Order in which candidate centers are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CenterOrder {
    #[default]
    Natural,
    Reversed,
}

struct BaseSearch {
    max_m: usize,
    order: CenterOrder,
    seen: HashSet<String>,
    unstable: BTreeMap<String, SurfaceConfig>,
    stats: SearchStats,
}

impl BaseSearch {
    fn visit(&mut self, config: &SurfaceConfig, n_inv: i64) {
        self.stats.configs_visited += 1;
        let slope = foliation::slope_report(config);
        if slope.mu_f > slope.mu_t {
            self.stats.semistability_violations += 1;
        }
        if foliation::check_foliation_adjunction(config).is_err() {
            self.stats.adjunction_violations += 1;
        }
        if config.check_invariants().is_err() || !foliation::kf_negative_curves_invariant(config) {
            self.stats.invariant_violations += 1;
        }
        if slope.destabilizes {
            let key = canonical_encoding(config);
            self.unstable.entry(key).or_insert_with(|| config.clone());
        }
        if config.m() >= self.max_m {
            return;
        }
        let mut centers = config.candidate_centers();
        if self.order == CenterOrder::Reversed {
            centers.reverse();
        }
        for center in centers {
            if !config.weak_dp_admissible(center) {
                continue;
            }
            let Ok(child) = config.blowup(center) else {
                continue;
            };
            if !self.seen.insert(canonical_encoding(&child)) {
                continue;
            }
            self.stats.steps_checked += 1;
            let child_n = foliation::n_invariant(&child);
            if child_n - n_inv != foliation::n_step(center) {
                self.stats.n_recursion_violations += 1;
            }
            let minus_two = config.negative_curves().minus_two;
            let on_minus_two = match center {
                Center::GenericOnComponent { fiber, component } => {
                    minus_two.contains(&crate::surface::CurveRef::Component { fiber, component })
                }
                Center::AtNode {
                    fiber,
                    node: (a, b),
                } => [a, b].iter().any(|&c| {
                    minus_two.contains(&crate::surface::CurveRef::Component {
                        fiber,
                        component: c,
                    })
                }),
                Center::OnSection { .. } => minus_two.contains(&crate::surface::CurveRef::Section),
                Center::GenericNewFiber => false,
            };
            if on_minus_two {
                self.stats.minus_two_center_violations += 1;
            }
            self.visit(&child, child_n);
        }
    }
}

fn search_base(
    n: i64,
    max_m: usize,
    order: CenterOrder,
) -> (BTreeMap<String, SurfaceConfig>, SearchStats) {
    let base = hirzebruch(n).expect("n in 0..=2");
    let mut s = BaseSearch {
        max_m,
        order,
        seen: HashSet::from([canonical_encoding(&base)]),
        unstable: BTreeMap::new(),
        stats: SearchStats::default(),
    };
    let n0 = foliation::n_invariant(&base);
    s.visit(&base, n0);
    (s.unstable, s.stats)
}

/// Preference between two witnesses of one class: fewer steps, smaller
/// base, then the step sequence.
fn witness_order(c: &SurfaceConfig) -> (usize, u32, Vec<Center>) {
    (c.m(), c.n(), c.history().to_vec())
}

/// Depth-first search over `F_0, F_1, F_2` and admissible blowup sequences
/// of length at most `max_m`, deduplicated by [`canonical_encoding`]; the
/// bases run in parallel and their results are merged afterwards.
pub fn enumerate_unstable_with_stats(
    max_m: usize,
    order: CenterOrder,
) -> Result<(Vec<ClassificationReport>, SearchStats), ClassifyError> {
    if max_m > MAX_BLOWUPS {
        return Err(ClassifyError::TooManyBlowups(max_m));
    }
    let per_base: Vec<(BTreeMap<String, SurfaceConfig>, SearchStats)> = (0..=2i64)
        .into_par_iter()
        .map(|n| search_base(n, max_m, order))
        .collect();
    let mut merged: BTreeMap<String, SurfaceConfig> = BTreeMap::new();
    let mut stats = SearchStats::default();
    for (found, st) in per_base {
        stats.merge(&st);
        for (key, cfg) in found {
            match merged.get(&key) {
                Some(old) if witness_order(old) <= witness_order(&cfg) => {}
                _ => {
                    merged.insert(key, cfg);
                }
            }
        }
    }
    let reports = merged
        .values()
        .map(ClassificationReport::from_config)
        .collect::<Result<Vec<_>, _>>()?;
    Ok((reports, stats))
}

pub fn enumerate_unstable(max_m: usize) -> Result<Vec<ClassificationReport>, ClassifyError> {
    enumerate_unstable_with_stats(max_m, CenterOrder::Natural).map(|(r, _)| r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub label: String,
    pub types: Vec<AdeType>,
    /// Names (or keys) of the classes with this singularity type.
    pub witnesses: Vec<String>,
    /// Whether the type is in [`EXPECTED_TYPES`].
    pub expected: bool,
}

/// Deduplicated ADE multisets of the singular classes, sorted by label.
pub fn singularity_census(reports: &[ClassificationReport]) -> Vec<CensusEntry> {
    let mut by_label: BTreeMap<String, CensusEntry> = BTreeMap::new();
    for r in reports {
        if r.singularities.is_empty() {
            continue;
        }
        let witness = r.name.clone().unwrap_or_else(|| r.canonical_key.clone());
        let entry = by_label
            .entry(r.singularity_label.clone())
            .or_insert_with(|| CensusEntry {
                label: r.singularity_label.clone(),
                types: r.singularities.clone(),
                witnesses: Vec::new(),
                expected: EXPECTED_TYPES.contains(&r.singularity_label.as_str()),
            });
        entry.witnesses.push(witness);
    }
    by_label.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fiber_order_does_not_matter() {
        let a = SurfaceConfig::x_nk(0, 2).unwrap();
        let b = hirzebruch(0)
            .unwrap()
            .blowup_all(&[
                Center::GenericNewFiber,
                Center::GenericNewFiber,
                Center::AtNode {
                    fiber: 1,
                    node: (0, 1),
                },
                Center::AtNode {
                    fiber: 0,
                    node: (0, 1),
                },
            ])
            .unwrap();
        assert_eq!(canonical_encoding(&a), canonical_encoding(&b));
        assert_ne!(
            canonical_encoding(&SurfaceConfig::x_nk(1, 1).unwrap()),
            canonical_encoding(&SurfaceConfig::x_nk(2, 1).unwrap())
        );
    }

    #[test]
    fn elementary_transformation_identifies_bases() {
        let a = hirzebruch(1)
            .unwrap()
            .blowup_all(&[
                Center::OnSection { fiber: None },
                Center::AtNode {
                    fiber: 0,
                    node: (0, 1),
                },
            ])
            .unwrap();
        assert_eq!(
            known_name(&canonical_encoding(&a)).as_deref(),
            Some("X_{2,1}")
        );
    }

    #[test]
    fn too_many_blowups() {
        assert_eq!(enumerate_unstable(8), Err(ClassifyError::TooManyBlowups(8)));
    }

    #[test]
    fn small_search() {
        let r = enumerate_unstable(2).unwrap();
        let mut names: Vec<String> = r.iter().map(|x| x.name.clone().unwrap()).collect();
        names.sort();
        assert_eq!(names, ["F0", "F1", "F2", "X_{0,1}", "X_{1,1}", "X_{2,1}"]);
    }
}
