//! Bounded searches over blowup sequences of a toric surface with a
//! dicritical rank-one foliation.
//!
//! A state records the curves created so far (self-intersection and whether
//! the curve is a leaf transform) and the foliation singularities among
//! them, which are the transversal intersection points of two invariant
//! curves. Allowed centers:
//!
//! * a singular point `C ∩ C'` with neither curve a (−2)-curve (`N` grows by 1);
//! * while smooth centers remain in the budget `α`: a general point of a
//!   new leaf, or a general point of an existing curve that is not a
//!   (−2)-curve (`N` drops by 1).
//!
//! The first center is a smooth point on a new leaf. Torus-fixed points of
//! the starting surface are never centers: they are either the dicritical
//! point or lie on (−2)-curves of the minimal resolution.

use std::fmt::Write;

use num::rational::Ratio;
use serde::Serialize;

use super::foliation::{analyze_toric_foliation, leaf_square_options};
use super::{CaseId, ToricError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Curve {
    pub name: String,
    pub self_int: i64,
    pub is_leaf_transform: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationState {
    pub curves: Vec<Curve>,
    /// Foliation singularities as pairs of curve indices.
    pub nodes: Vec<(usize, usize)>,
    pub ell: usize,
    pub alpha_used: usize,
    pub n_inv: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    Node(usize),
    NewLeaf(i64),
    OnCurve(usize),
}

impl EliminationState {
    fn start(n0: i64) -> Self {
        EliminationState {
            curves: Vec::new(),
            nodes: Vec::new(),
            ell: 0,
            alpha_used: 0,
            n_inv: n0,
        }
    }

    fn usable(&self, c: usize) -> bool {
        self.curves[c].self_int != -2
    }

    fn moves(&self, alpha: usize, leaf_squares: &[i64]) -> Vec<Move> {
        let mut out = Vec::new();
        if self.ell > 0 {
            for (k, &(a, b)) in self.nodes.iter().enumerate() {
                if self.usable(a) && self.usable(b) {
                    out.push(Move::Node(k));
                }
            }
        }
        if self.alpha_used < alpha {
            for &l in leaf_squares {
                if l != -2 {
                    out.push(Move::NewLeaf(l));
                }
            }
            if self.ell > 0 {
                for c in 0..self.curves.len() {
                    if self.usable(c) {
                        out.push(Move::OnCurve(c));
                    }
                }
            }
        }
        out
    }

    fn apply(&self, mv: Move) -> (EliminationState, String) {
        let mut s = self.clone();
        s.ell += 1;
        let e = s.curves.len();
        let e_name = format!("E{}", s.ell);
        let desc = match mv {
            Move::Node(k) => {
                let (a, b) = s.nodes.remove(k);
                s.curves[a].self_int -= 1;
                s.curves[b].self_int -= 1;
                s.nodes.push((a, e));
                s.nodes.push((b, e));
                s.n_inv += 1;
                format!(
                    "singular point {}∩{}",
                    self.curves[a].name, self.curves[b].name
                )
            }
            Move::NewLeaf(l) => {
                let leaf = s.curves.len();
                let name = format!(
                    "L{}",
                    s.curves.iter().filter(|c| c.is_leaf_transform).count()
                );
                s.curves.push(Curve {
                    name: name.clone(),
                    self_int: l - 1,
                    is_leaf_transform: true,
                });
                s.nodes.push((leaf, leaf + 1));
                s.alpha_used += 1;
                s.n_inv -= 1;
                format!("smooth point on a new leaf {name} ({name}² = {l})")
            }
            Move::OnCurve(c) => {
                s.curves[c].self_int -= 1;
                s.nodes.push((c, e));
                s.alpha_used += 1;
                s.n_inv -= 1;
                format!("smooth point on {}", self.curves[c].name)
            }
        };
        s.curves.push(Curve {
            name: e_name,
            self_int: -1,
            is_leaf_transform: false,
        });
        (s, desc)
    }

    pub fn describe(&self) -> String {
        let curves: Vec<String> = self
            .curves
            .iter()
            .map(|c| format!("{}({})", c.name, c.self_int))
            .collect();
        format!(
            "ell={} alpha={} N={} curves=[{}]",
            self.ell,
            self.alpha_used,
            self.n_inv,
            curves.join(" ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub description: String,
    pub alpha: usize,
    pub first_leaf_self_int: i64,
    /// For `alpha ≥ 2`: whether the later smooth centers start new leaves.
    pub later_smooth_on_new_leaf: Option<bool>,
    pub max_ell: usize,
    pub required_min: i64,
    pub states_explored: usize,
    /// A sequence of centers reaching `max_ell`.
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaRange {
    pub min: i64,
    /// `α < (N₀ + K²)/2`.
    #[serde(serialize_with = "crate::linalg::serialize_ratio")]
    pub bound: Ratio<i64>,
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationReport {
    pub case: String,
    pub n0: i64,
    pub k_squared: i64,
    pub alpha_range: AlphaRange,
    pub branches: Vec<Branch>,
    pub verdict: String,
    #[serde(skip)]
    pub trace: Vec<String>,
}

impl EliminationReport {
    pub fn infeasible(&self) -> bool {
        self.verdict == "infeasible"
    }
}

struct Search<'a> {
    alpha: usize,
    leaf_squares: &'a [i64],
    max_depth: usize,
    trace: &'a mut Vec<String>,
    results: Vec<BranchResult>,
}

/// (first leaf², later smooth centers on new leaves?)
type BranchKey = (i64, Option<bool>);
/// Branch key, max ℓ, witness, states explored.
type BranchResult = (BranchKey, usize, Vec<String>, usize);

impl Search<'_> {
    fn record(&mut self, key: BranchKey, ell: usize, path: &[String]) {
        match self.results.iter_mut().find(|r| r.0 == key) {
            Some(r) => {
                r.3 += 1;
                if ell > r.1 {
                    r.1 = ell;
                    r.2 = path.to_vec();
                }
            }
            None => self.results.push((key, ell, path.to_vec(), 1)),
        }
    }

    fn dfs(&mut self, s: &EliminationState, key: BranchKey, path: &mut Vec<String>) {
        let indent = "  ".repeat(s.ell);
        self.trace.push(format!("{indent}{}", s.describe()));
        if s.alpha_used == self.alpha {
            self.record(key, s.ell, path);
        }
        if s.ell >= self.max_depth {
            return;
        }
        let moves = s.moves(self.alpha, self.leaf_squares);
        if moves.is_empty() {
            self.trace.push(format!("{indent}  (no admissible center)"));
        }
        for mv in moves {
            let mut k = key;
            match mv {
                Move::NewLeaf(l) if s.ell == 0 => k.0 = l,
                Move::NewLeaf(_) if s.alpha_used >= 1 => {
                    if k.1.is_some_and(|x| !x) {
                        continue;
                    }
                    k.1 = Some(true);
                }
                Move::OnCurve(_) => {
                    if k.1.is_some_and(|x| x) {
                        continue;
                    }
                    k.1 = Some(false);
                }
                _ => {}
            }
            let (next, desc) = s.apply(mv);
            let mut line = String::new();
            let _ = write!(line, "{indent}q{} = {desc}", s.ell);
            self.trace.push(line);
            path.push(desc);
            self.dfs(&next, k, path);
            path.pop();
        }
    }
}

/// Runs the α-bound and the bounded searches for one case.
pub fn eliminate(case: CaseId) -> EliminationReport {
    let fan = case.fan();
    let v = case.foliation_index();
    let foliation = analyze_toric_foliation(&fan, v).expect("case ray index is valid");
    let leaf_squares = leaf_square_options(&fan, v).expect("case ray index is valid");
    let n0 = foliation.n0;
    let k2 = foliation.k_squared;
    let bound = Ratio::new(n0 + k2, 2);
    let values: Vec<usize> = (1..k2)
        .filter(|&a| Ratio::from_integer(a) < bound)
        .map(|a| a as usize)
        .collect();
    let mut trace = vec![format!(
        "case {case}: N0 = {n0}, K^2 = {k2}, 1 <= alpha < {bound}, leaf self-intersections {leaf_squares:?}"
    )];
    if values.is_empty() {
        trace.push("no admissible alpha".to_string());
    }
    let mut branches = Vec::new();
    for &alpha in &values {
        let required_min = 2 * alpha as i64 - n0;
        trace.push(format!(
            "alpha = {alpha}: need {required_min} <= ell < {k2}"
        ));
        let mut search = Search {
            alpha,
            leaf_squares: &leaf_squares,
            max_depth: (k2 - 1) as usize,
            trace: &mut trace,
            results: Vec::new(),
        };
        let mut path = Vec::new();
        search.dfs(&EliminationState::start(n0), (0, None), &mut path);
        let mut results = std::mem::take(&mut search.results);
        results.sort_by_key(|r| (std::cmp::Reverse(r.0 .0), r.0 .1.map(|x| !x)));
        for ((l, later), max_ell, witness, states) in results {
            let mut description = format!("alpha={alpha}, first leaf L0^2={l}");
            match later {
                Some(true) => description.push_str(", later smooth centers on new leaves"),
                Some(false) => description.push_str(", later smooth centers on existing curves"),
                None => {}
            }
            branches.push(Branch {
                description,
                alpha,
                first_leaf_self_int: l,
                later_smooth_on_new_leaf: later,
                max_ell,
                required_min,
                states_explored: states,
                witness,
            });
        }
    }
    let infeasible = branches.iter().all(|b| (b.max_ell as i64) < b.required_min);
    EliminationReport {
        case: case.name().to_string(),
        n0,
        k_squared: k2,
        alpha_range: AlphaRange {
            min: 1,
            bound,
            values,
        },
        branches,
        verdict: if infeasible { "infeasible" } else { "feasible" }.to_string(),
        trace,
    }
}

/// [`eliminate`] keyed by the case name (`"6d"`, `"8c"`, `"9"`).
pub fn eliminate_case(case_id: &str) -> Result<EliminationReport, ToricError> {
    Ok(eliminate(CaseId::parse(case_id)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn branch(r: &EliminationReport, alpha: usize, l: i64, later: Option<bool>) -> &Branch {
        r.branches
            .iter()
            .find(|b| {
                b.alpha == alpha
                    && b.first_leaf_self_int == l
                    && b.later_smooth_on_new_leaf == later
            })
            .unwrap_or_else(|| panic!("no branch {alpha} {l} {later:?} in {:#?}", r.branches))
    }

    #[test]
    fn case_6d_has_no_alpha() {
        let r = eliminate_case("6d").unwrap();
        assert!(r.alpha_range.values.is_empty());
        assert_eq!(r.alpha_range.bound, Ratio::from_integer(1));
        assert!(r.infeasible());
    }

    #[test]
    fn case_8c() {
        let r = eliminate_case("8c").unwrap();
        assert_eq!(r.alpha_range.values, vec![1]);
        assert_eq!(branch(&r, 1, 2, None).max_ell, 4);
        assert_eq!(branch(&r, 1, 0, None).max_ell, 2);
        assert!(r.branches.iter().all(|b| b.required_min == 6));
        assert!(r.infeasible());
    }

    #[test]
    fn case_9() {
        let r = eliminate_case("9").unwrap();
        assert_eq!(r.alpha_range.values, vec![1, 2]);
        assert_eq!(branch(&r, 1, 1, None).max_ell, 3);
        assert_eq!(branch(&r, 2, 1, Some(true)).max_ell, 6);
        assert!(branch(&r, 2, 1, Some(false)).max_ell < 7);
        assert!(r.infeasible());
    }

    #[test]
    fn unknown_case() {
        assert_eq!(
            eliminate_case("7a").unwrap_err(),
            ToricError::UnknownCase("7a".into())
        );
    }
}
