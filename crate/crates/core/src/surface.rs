//! Fibered weak del Pezzo surfaces as blowup towers over `F_0`, `F_1`, `F_2`.
//!
//! Each singular fiber is a tree of smooth rational curves with
//! multiplicities. Blowup centers are generic on the locus they name, so the
//! only curves of negative self-intersection are fiber components and the
//! tracked section.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dot;
use crate::fsing::{self, AdeType, FsingError, WeightedGraph};
use crate::lattice::{DivisorClass, LatticeForm};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("Hirzebruch index {0} not in {{0, 1, 2}}")]
    BadBase(i64),
    #[error("unknown base {0:?}; expected F0, F1 or F2")]
    UnknownBase(String),
    #[error("structural error: {0}")]
    Structure(String),
    #[error("step {step}: {msg}")]
    Step { step: usize, msg: String },
    #[error("config JSON error at line {line}, column {column}: {msg}")]
    Schema {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("anticanonical model: {0}")]
    Classification(#[from] FsingError),
}

/// Where the next point is blown up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "CenterJson")]
pub enum Center {
    /// A general point of a fiber that is still smooth.
    GenericNewFiber,
    /// A general point of an existing fiber component.
    GenericOnComponent { fiber: usize, component: usize },
    /// The intersection point of two components of one fiber.
    AtNode { fiber: usize, node: (usize, usize) },
    /// The point where the section meets a fiber (`None`: a smooth fiber).
    OnSection {
        #[serde(default)]
        fiber: Option<usize>,
    },
}

/// Wire form of [`Center`]; lets unknown and misplaced fields be rejected.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CenterJson {
    kind: String,
    #[serde(default)]
    fiber: Option<usize>,
    #[serde(default)]
    component: Option<usize>,
    #[serde(default)]
    node: Option<(usize, usize)>,
}

impl TryFrom<CenterJson> for Center {
    type Error = String;

    fn try_from(c: CenterJson) -> Result<Self, String> {
        let kind = c.kind.as_str();
        let extra = |field: &str| format!("`{field}` is not a field of `{kind}`");
        let missing = |field: &str| format!("`{kind}` needs `{field}`");
        match kind {
            "generic_new_fiber" => {
                if c.fiber.is_some() {
                    return Err(extra("fiber"));
                }
                if c.component.is_some() {
                    return Err(extra("component"));
                }
                if c.node.is_some() {
                    return Err(extra("node"));
                }
                Ok(Center::GenericNewFiber)
            }
            "generic_on_component" => {
                if c.node.is_some() {
                    return Err(extra("node"));
                }
                Ok(Center::GenericOnComponent {
                    fiber: c.fiber.ok_or_else(|| missing("fiber"))?,
                    component: c.component.ok_or_else(|| missing("component"))?,
                })
            }
            "at_node" => {
                if c.component.is_some() {
                    return Err(extra("component"));
                }
                Ok(Center::AtNode {
                    fiber: c.fiber.ok_or_else(|| missing("fiber"))?,
                    node: c.node.ok_or_else(|| missing("node"))?,
                })
            }
            "on_section" => {
                if c.component.is_some() {
                    return Err(extra("component"));
                }
                if c.node.is_some() {
                    return Err(extra("node"));
                }
                Ok(Center::OnSection { fiber: c.fiber })
            }
            other => Err(format!(
                "unknown kind `{other}`, expected one of `generic_new_fiber`, `generic_on_component`, `at_node`, `on_section`"
            )),
        }
    }
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::GenericNewFiber => write!(f, "general point of a new fiber"),
            Center::GenericOnComponent { fiber, component } => {
                write!(f, "general point of f{fiber}c{component}")
            }
            Center::AtNode { fiber, node } => {
                write!(f, "node f{fiber}c{}-f{fiber}c{}", node.0, node.1)
            }
            Center::OnSection { fiber: Some(i) } => write!(f, "section point on fiber {i}"),
            Center::OnSection { fiber: None } => write!(f, "section point on a new fiber"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberComponent {
    pub id: usize,
    pub self_int: i64,
    pub multiplicity: u32,
    pub cls: DivisorClass,
    pub meets_section: bool,
}

/// A reducible fiber: components (indexed by creation order, 0 being the
/// strict transform of the original fiber) and the nodes between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberTree {
    pub components: Vec<FiberComponent>,
    pub nodes: Vec<(usize, usize)>,
}

impl FiberTree {
    pub fn has_node(&self, a: usize, b: usize) -> bool {
        self.nodes
            .iter()
            .any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    /// Number of nodes on component `c`.
    pub fn node_count(&self, c: usize) -> usize {
        self.nodes
            .iter()
            .filter(|&&(a, b)| a == c || b == c)
            .count()
    }

    pub fn neighbours(&self, c: usize) -> Vec<usize> {
        self.nodes
            .iter()
            .filter_map(|&(a, b)| {
                if a == c {
                    Some(b)
                } else if b == c {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// The unique component meeting the section.
    pub fn section_component(&self) -> Option<usize> {
        self.components.iter().position(|c| c.meets_section)
    }
}

/// A curve of the configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "curve", rename_all = "snake_case")]
pub enum CurveRef {
    Section,
    Component { fiber: usize, component: usize },
}

impl fmt::Display for CurveRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveRef::Section => write!(f, "S"),
            CurveRef::Component { fiber, component } => write!(f, "f{fiber}c{component}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct NegativeCurves {
    pub minus_one: Vec<CurveRef>,
    pub minus_two: Vec<CurveRef>,
}

/// The JSON form of a configuration: a base and a list of steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigJson {
    pub base: String,
    #[serde(default)]
    pub steps: Vec<Center>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceConfig {
    n: u32,
    fibers: Vec<FiberTree>,
    section_cls: DivisorClass,
    history: Vec<Center>,
    form: LatticeForm,
}

/// `F_n` with its negative (or, for `n = 0`, one chosen) section.
pub fn hirzebruch(n: i64) -> Result<SurfaceConfig, SurfaceError> {
    if !(0..=2).contains(&n) {
        return Err(SurfaceError::BadBase(n));
    }
    let form = LatticeForm::new(n as u32, 0);
    Ok(SurfaceConfig {
        n: n as u32,
        fibers: Vec::new(),
        section_cls: form.section(),
        history: Vec::new(),
        form,
    })
}

impl SurfaceConfig {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.form.m()
    }

    pub fn form(&self) -> LatticeForm {
        self.form
    }

    pub fn fibers(&self) -> &[FiberTree] {
        &self.fibers
    }

    pub fn section_cls(&self) -> &DivisorClass {
        &self.section_cls
    }

    pub fn section_self_int(&self) -> i64 {
        self.section_cls.self_intersection()
    }

    pub fn history(&self) -> &[Center] {
        &self.history
    }

    pub fn canonical_class(&self) -> DivisorClass {
        self.form.canonical_class()
    }

    /// `K² = 8 − m`.
    pub fn k_squared(&self) -> i64 {
        8 - self.m() as i64
    }

    pub fn curve_class(&self, c: CurveRef) -> Option<&DivisorClass> {
        match c {
            CurveRef::Section => Some(&self.section_cls),
            CurveRef::Component { fiber, component } => self
                .fibers
                .get(fiber)
                .and_then(|t| t.components.get(component))
                .map(|c| &c.cls),
        }
    }

    pub fn curve_self_int(&self, c: CurveRef) -> Option<i64> {
        match c {
            CurveRef::Section => Some(self.section_self_int()),
            CurveRef::Component { fiber, component } => self
                .fibers
                .get(fiber)
                .and_then(|t| t.components.get(component))
                .map(|c| c.self_int),
        }
    }

    /// Blows up one point; the input is left untouched.
    pub fn blowup(&self, center: Center) -> Result<SurfaceConfig, SurfaceError> {
        let form = self.form.extended();
        let e = form.exceptional(form.m());
        let mut fibers: Vec<FiberTree> = self
            .fibers
            .iter()
            .map(|t| FiberTree {
                components: t
                    .components
                    .iter()
                    .map(|c| FiberComponent {
                        cls: c.cls.pullback(1),
                        ..c.clone()
                    })
                    .collect(),
                nodes: t.nodes.clone(),
            })
            .collect();
        let mut section_cls = self.section_cls.pullback(1);
        let fiber_cls = form.fiber();

        let new_component = |id: usize, multiplicity: u32, meets_section: bool| FiberComponent {
            id,
            self_int: -1,
            multiplicity,
            cls: e.clone(),
            meets_section,
        };
        let lower = |c: &mut FiberComponent| {
            c.cls = &c.cls - &e;
            c.self_int -= 1;
        };
        let fiber_mut = |fibers: &mut Vec<FiberTree>, i: usize| -> Result<usize, SurfaceError> {
            if i < fibers.len() {
                Ok(i)
            } else {
                Err(SurfaceError::Structure(format!(
                    "fiber {i} does not exist ({} singular fibers)",
                    fibers.len()
                )))
            }
        };

        match center {
            Center::GenericNewFiber | Center::OnSection { fiber: None } => {
                let on_section = center != Center::GenericNewFiber;
                let strict = FiberComponent {
                    id: 0,
                    self_int: -1,
                    multiplicity: 1,
                    cls: &fiber_cls - &e,
                    meets_section: !on_section,
                };
                fibers.push(FiberTree {
                    components: vec![strict, new_component(1, 1, on_section)],
                    nodes: vec![(0, 1)],
                });
                if on_section {
                    section_cls = &section_cls - &e;
                }
            }
            Center::GenericOnComponent { fiber, component } => {
                let i = fiber_mut(&mut fibers, fiber)?;
                let tree = &mut fibers[i];
                let Some(c) = tree.components.get_mut(component) else {
                    return Err(SurfaceError::Structure(format!(
                        "fiber {fiber} has no component {component}"
                    )));
                };
                lower(c);
                let mult = c.multiplicity;
                let id = tree.components.len();
                tree.components.push(new_component(id, mult, false));
                tree.nodes.push((component, id));
            }
            Center::AtNode {
                fiber,
                node: (a, b),
            } => {
                let i = fiber_mut(&mut fibers, fiber)?;
                let tree = &mut fibers[i];
                let pos = tree
                    .nodes
                    .iter()
                    .position(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
                    .ok_or_else(|| {
                        SurfaceError::Structure(format!("fiber {fiber} has no node ({a}, {b})"))
                    })?;
                tree.nodes.remove(pos);
                lower(&mut tree.components[a]);
                lower(&mut tree.components[b]);
                let mult = tree.components[a].multiplicity + tree.components[b].multiplicity;
                let id = tree.components.len();
                tree.components.push(new_component(id, mult, false));
                tree.nodes.push((a, id));
                tree.nodes.push((b, id));
            }
            Center::OnSection { fiber: Some(fiber) } => {
                let i = fiber_mut(&mut fibers, fiber)?;
                let tree = &mut fibers[i];
                let c = tree.section_component().ok_or_else(|| {
                    SurfaceError::Structure(format!("fiber {fiber} does not meet the section"))
                })?;
                let comp = &mut tree.components[c];
                lower(comp);
                comp.meets_section = false;
                let mult = comp.multiplicity;
                let id = tree.components.len();
                tree.components.push(new_component(id, mult, true));
                tree.nodes.push((c, id));
                section_cls = &section_cls - &e;
            }
        }

        let mut history = self.history.clone();
        history.push(center);
        Ok(SurfaceConfig {
            n: self.n,
            fibers,
            section_cls,
            history,
            form,
        })
    }

    /// Applies `steps` in order, reporting the first failing step.
    pub fn blowup_all(&self, steps: &[Center]) -> Result<SurfaceConfig, SurfaceError> {
        let mut cur = self.clone();
        for (i, &c) in steps.iter().enumerate() {
            cur = cur.blowup(c).map_err(|e| SurfaceError::Step {
                step: i,
                msg: e.to_string(),
            })?;
        }
        Ok(cur)
    }

    /// Adds a new fiber modified by a 2-blowup.
    pub fn two_blowup(&self) -> Result<SurfaceConfig, SurfaceError> {
        let fiber = self.fibers.len();
        self.blowup(Center::GenericNewFiber)?
            .blowup(Center::AtNode {
                fiber,
                node: (0, 1),
            })
    }

    /// `X_{n,k}`: `k` 2-blowups on distinct fibers of `F_n`.
    pub fn x_nk(n: i64, k: usize) -> Result<SurfaceConfig, SurfaceError> {
        let mut cfg = hirzebruch(n)?;
        for _ in 0..k {
            cfg = cfg.two_blowup()?;
        }
        Ok(cfg)
    }

    pub fn negative_curves(&self) -> NegativeCurves {
        let mut out = NegativeCurves::default();
        let mut push = |c: CurveRef, self_int: i64| match self_int {
            -1 => out.minus_one.push(c),
            -2 => out.minus_two.push(c),
            _ => {}
        };
        push(CurveRef::Section, self.section_self_int());
        for (fiber, tree) in self.fibers.iter().enumerate() {
            for comp in &tree.components {
                push(
                    CurveRef::Component {
                        fiber,
                        component: comp.id,
                    },
                    comp.self_int,
                );
            }
        }
        out
    }

    /// Curves the center lies on.
    fn curves_through(&self, center: Center) -> Option<Vec<CurveRef>> {
        let comp = |fiber: usize, component: usize| CurveRef::Component { fiber, component };
        match center {
            Center::GenericNewFiber => Some(vec![]),
            Center::OnSection { fiber: None } => Some(vec![CurveRef::Section]),
            Center::GenericOnComponent { fiber, component } => {
                let tree = self.fibers.get(fiber)?;
                (component < tree.components.len()).then(|| vec![comp(fiber, component)])
            }
            Center::AtNode {
                fiber,
                node: (a, b),
            } => {
                let tree = self.fibers.get(fiber)?;
                tree.has_node(a, b)
                    .then(|| vec![comp(fiber, a), comp(fiber, b)])
            }
            Center::OnSection { fiber: Some(fiber) } => {
                let c = self.fibers.get(fiber)?.section_component()?;
                Some(vec![CurveRef::Section, comp(fiber, c)])
            }
        }
    }

    /// Whether blowing up `center` keeps the surface weak del Pezzo:
    /// `K² > 1` and the point is on no (−2)-curve. Dangling references are
    /// reported as inadmissible.
    pub fn weak_dp_admissible(&self, center: Center) -> bool {
        if self.k_squared() <= 1 {
            return false;
        }
        match self.curves_through(center) {
            Some(curves) => curves.iter().all(|&c| self.curve_self_int(c) != Some(-2)),
            None => false,
        }
    }

    /// Replays the history from the base, checking admissibility at each step.
    pub fn is_weak_del_pezzo(&self) -> bool {
        let Ok(mut cur) = hirzebruch(self.n as i64) else {
            return false;
        };
        for &c in &self.history {
            if !cur.weak_dp_admissible(c) {
                return false;
            }
            match cur.blowup(c) {
                Ok(next) => cur = next,
                Err(_) => return false,
            }
        }
        cur.k_squared() >= 1
    }

    /// All centers the model can name on this configuration, in a fixed order.
    pub fn candidate_centers(&self) -> Vec<Center> {
        let mut out = vec![Center::GenericNewFiber, Center::OnSection { fiber: None }];
        for (fiber, tree) in self.fibers.iter().enumerate() {
            for c in &tree.components {
                out.push(Center::GenericOnComponent {
                    fiber,
                    component: c.id,
                });
            }
            for &node in &tree.nodes {
                out.push(Center::AtNode { fiber, node });
            }
            out.push(Center::OnSection { fiber: Some(fiber) });
        }
        out
    }

    /// Dual graph of the (−2)-curves, with edge multiplicities taken from
    /// the intersection form.
    pub fn minus_two_graph(&self) -> (Vec<CurveRef>, WeightedGraph) {
        let curves = self.negative_curves().minus_two;
        let mut edges = Vec::new();
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                let (a, b) = (
                    self.curve_class(curves[i]).unwrap(),
                    self.curve_class(curves[j]).unwrap(),
                );
                let k = a.intersect(b).unwrap_or(0);
                for _ in 0..k.max(0) {
                    edges.push((i, j));
                }
            }
        }
        let weights = vec![-2; curves.len()];
        (curves, WeightedGraph { weights, edges })
    }

    /// ADE types of the singularities of the anticanonical model, sorted.
    pub fn anticanonical_model(&self) -> Result<Vec<AdeType>, SurfaceError> {
        let (_, graph) = self.minus_two_graph();
        let mut out = Vec::new();
        for (_, comp) in graph.components() {
            out.push(fsing::ade_classify(&comp)?);
        }
        out.sort();
        Ok(out)
    }

    fn curve_label(&self, c: CurveRef) -> String {
        let mult = match c {
            CurveRef::Section => 1,
            CurveRef::Component { fiber, component } => {
                self.fibers[fiber].components[component].multiplicity
            }
        };
        format!("{c} ({}, {mult})", self.curve_self_int(c).unwrap_or(0))
    }

    /// DOT for one fiber tree.
    pub fn fiber_dot(&self, fiber: usize) -> Option<String> {
        let tree = self.fibers.get(fiber)?;
        let id = |c: usize| CurveRef::Component {
            fiber,
            component: c,
        };
        let nodes: Vec<(String, String)> = tree
            .components
            .iter()
            .map(|c| (id(c.id).to_string(), self.curve_label(id(c.id))))
            .collect();
        let edges: Vec<(String, String)> = tree
            .nodes
            .iter()
            .map(|&(a, b)| (id(a).to_string(), id(b).to_string()))
            .collect();
        Some(dot::write_graph(&format!("fiber{fiber}"), &nodes, &edges))
    }

    /// DOT for the (−2)-curve dual graph.
    pub fn minus_two_dot(&self, name: &str) -> String {
        let (curves, graph) = self.minus_two_graph();
        let nodes: Vec<(String, String)> = curves
            .iter()
            .map(|&c| (c.to_string(), self.curve_label(c)))
            .collect();
        let edges: Vec<(String, String)> = graph
            .edges
            .iter()
            .map(|&(a, b)| (curves[a].to_string(), curves[b].to_string()))
            .collect();
        dot::write_graph(name, &nodes, &edges)
    }

    pub fn to_config_json(&self) -> ConfigJson {
        ConfigJson {
            base: format!("F{}", self.n),
            steps: self.history.clone(),
        }
    }

    pub fn from_config_json(cfg: &ConfigJson) -> Result<SurfaceConfig, SurfaceError> {
        let n = match cfg.base.as_str() {
            "F0" => 0,
            "F1" => 1,
            "F2" => 2,
            other => return Err(SurfaceError::UnknownBase(other.to_string())),
        };
        hirzebruch(n)?.blowup_all(&cfg.steps)
    }

    /// Parses and replays a JSON config.
    pub fn from_json_str(src: &str) -> Result<SurfaceConfig, SurfaceError> {
        let cfg: ConfigJson = serde_json::from_str(src).map_err(|e| {
            let text = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            SurfaceError::Schema {
                line: e.line(),
                column: e.column(),
                msg: text.strip_suffix(&suffix).unwrap_or(&text).to_string(),
            }
        })?;
        Self::from_config_json(&cfg)
    }

    /// Checks the structural invariants of every fiber and the section;
    /// returns a description of the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        let k = self.canonical_class();
        let f = self.form.fiber();
        let s = &self.section_cls;
        if s.intersect(&f) != Ok(1) {
            return Err("section does not meet the fiber once".into());
        }
        let mut total = 0;
        for (i, tree) in self.fibers.iter().enumerate() {
            let n = tree.components.len();
            total += n - 1;
            if tree.nodes.len() + 1 != n {
                return Err(format!(
                    "fiber {i}: {} nodes for {n} components",
                    tree.nodes.len()
                ));
            }
            // connected + n-1 edges = tree
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for w in tree.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            if seen.iter().any(|x| !x) {
                return Err(format!("fiber {i}: dual graph is not connected"));
            }
            let mut sum = DivisorClass::zero(self.form);
            for c in &tree.components {
                if c.cls.self_intersection() != c.self_int {
                    return Err(format!("f{i}c{}: stored self-intersection is stale", c.id));
                }
                if k.intersect(&c.cls) != Ok(-2 - c.self_int) {
                    return Err(format!("f{i}c{}: adjunction fails", c.id));
                }
                if c.cls.intersect(&f) != Ok(0) {
                    return Err(format!("f{i}c{}: not vertical", c.id));
                }
                sum = &sum + &(c.multiplicity as i64 * &c.cls);
            }
            if sum != f {
                return Err(format!("fiber {i}: components sum to {sum}, not f"));
            }
            let meeting: Vec<&FiberComponent> =
                tree.components.iter().filter(|c| c.meets_section).collect();
            if meeting.len() != 1 || meeting[0].multiplicity != 1 {
                return Err(format!(
                    "fiber {i}: section must meet one reduced component"
                ));
            }
            for c in &tree.components {
                let want = i64::from(c.meets_section);
                if s.intersect(&c.cls) != Ok(want) {
                    return Err(format!("f{i}c{}: section intersection is not {want}", c.id));
                }
            }
            for &(a, b) in &tree.nodes {
                if tree.components[a].cls.intersect(&tree.components[b].cls) != Ok(1) {
                    return Err(format!(
                        "fiber {i}: node ({a}, {b}) is not a transversal point"
                    ));
                }
            }
        }
        if total != self.m() {
            return Err(format!("{total} fiber blowups but m = {}", self.m()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AdeType::*;

    fn comp(fiber: usize, component: usize) -> CurveRef {
        CurveRef::Component { fiber, component }
    }

    #[test]
    fn hirzebruch_bases() {
        let f2 = hirzebruch(2).unwrap();
        assert_eq!(f2.section_self_int(), -2);
        assert_eq!(f2.negative_curves().minus_two, vec![CurveRef::Section]);
        assert_eq!(f2.form().rank(), 2);
        assert_eq!(
            hirzebruch(0).unwrap().negative_curves(),
            NegativeCurves::default()
        );
        assert_eq!(hirzebruch(3), Err(SurfaceError::BadBase(3)));
        assert_eq!(hirzebruch(-1), Err(SurfaceError::BadBase(-1)));
    }

    #[test]
    fn two_blowup_fiber_shape() {
        let x = SurfaceConfig::x_nk(1, 1).unwrap();
        let t = &x.fibers()[0];
        let shape: Vec<(i64, u32)> = t
            .components
            .iter()
            .map(|c| (c.self_int, c.multiplicity))
            .collect();
        assert_eq!(shape, vec![(-2, 1), (-2, 1), (-1, 2)]);
        assert!(t.has_node(0, 2) && t.has_node(1, 2) && !t.has_node(0, 1));
        x.check_invariants().unwrap();
    }

    #[test]
    fn negative_curves_of_x21_and_x01() {
        let x21 = SurfaceConfig::x_nk(2, 1).unwrap();
        assert_eq!(
            x21.negative_curves().minus_two,
            vec![CurveRef::Section, comp(0, 0), comp(0, 1)]
        );
        let x01 = SurfaceConfig::x_nk(0, 1).unwrap();
        let neg = x01.negative_curves();
        assert_eq!(neg.minus_two, vec![comp(0, 0), comp(0, 1)]);
        assert_eq!(neg.minus_one, vec![comp(0, 2)]);
    }

    #[test]
    fn admissibility() {
        let f1 = hirzebruch(1).unwrap();
        assert!(f1.weak_dp_admissible(Center::GenericNewFiber));
        let f2 = hirzebruch(2).unwrap();
        assert!(!f2.weak_dp_admissible(Center::OnSection { fiber: None }));
        let x = SurfaceConfig::x_nk(0, 1).unwrap();
        assert!(!x.weak_dp_admissible(Center::GenericOnComponent {
            fiber: 0,
            component: 0
        }));
        assert!(!x.weak_dp_admissible(Center::AtNode {
            fiber: 0,
            node: (0, 2)
        }));
        assert!(x.weak_dp_admissible(Center::GenericOnComponent {
            fiber: 0,
            component: 2
        }));
        assert!(!x.weak_dp_admissible(Center::GenericOnComponent {
            fiber: 7,
            component: 0
        }));
        let mut deg1 = hirzebruch(0).unwrap();
        for _ in 0..7 {
            deg1 = deg1.blowup(Center::GenericNewFiber).unwrap();
        }
        assert_eq!(deg1.k_squared(), 1);
        assert!(!deg1.weak_dp_admissible(Center::GenericNewFiber));
    }

    #[test]
    fn anticanonical_models() {
        let cases = [
            (2, 1, vec![A(1), A(2)]),
            (2, 2, vec![A(1), A(1), A(3)]),
            (2, 3, vec![A(1), A(1), A(1), D(4)]),
            (0, 3, vec![A(1); 6]),
            (1, 2, vec![A(1); 4]),
        ];
        for (n, k, want) in cases {
            let x = SurfaceConfig::x_nk(n, k).unwrap();
            assert_eq!(x.anticanonical_model().unwrap(), want, "X_{{{n},{k}}}");
        }
        assert!(hirzebruch(0)
            .unwrap()
            .anticanonical_model()
            .unwrap()
            .is_empty());
    }

    #[test]
    fn on_section_moves_the_section() {
        let x = hirzebruch(1)
            .unwrap()
            .blowup(Center::OnSection { fiber: None })
            .unwrap();
        assert_eq!(x.section_self_int(), -2);
        assert_eq!(x.fibers()[0].section_component(), Some(1));
        x.check_invariants().unwrap();
        let y = x.blowup(Center::OnSection { fiber: Some(0) }).unwrap();
        assert_eq!(y.section_self_int(), -3);
        assert_eq!(y.fibers()[0].section_component(), Some(2));
        y.check_invariants().unwrap();
    }

    #[test]
    fn dangling_references() {
        let f0 = hirzebruch(0).unwrap();
        assert!(matches!(
            f0.blowup(Center::AtNode {
                fiber: 0,
                node: (0, 1)
            }),
            Err(SurfaceError::Structure(_))
        ));
        let x = SurfaceConfig::x_nk(0, 1).unwrap();
        assert!(x
            .blowup(Center::AtNode {
                fiber: 0,
                node: (0, 1)
            })
            .is_err());
        assert!(x
            .blowup(Center::GenericOnComponent {
                fiber: 0,
                component: 9
            })
            .is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let src = r#"{"base": "F2", "steps": [
            {"kind": "generic_new_fiber"},
            {"kind": "at_node", "fiber": 0, "node": [0, 1]}
        ]}"#;
        let x = SurfaceConfig::from_json_str(src).unwrap();
        assert_eq!(x, SurfaceConfig::x_nk(2, 1).unwrap());
        let back = serde_json::to_string(&x.to_config_json()).unwrap();
        assert_eq!(SurfaceConfig::from_json_str(&back).unwrap(), x);
    }

    #[test]
    fn config_json_errors() {
        let bad_kind = "{\"base\": \"F1\",\n \"steps\": [{\"kind\": \"sideways\"}]}";
        match SurfaceConfig::from_json_str(bad_kind) {
            Err(SurfaceError::Schema { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            SurfaceConfig::from_json_str(r#"{"base": "F5", "steps": []}"#),
            Err(SurfaceError::UnknownBase(_))
        ));
        assert!(matches!(
            SurfaceConfig::from_json_str(r#"{"base": "F0", "steps": [], "extra": 1}"#),
            Err(SurfaceError::Schema { .. })
        ));
        assert!(matches!(
            SurfaceConfig::from_json_str(
                r#"{"base": "F0", "steps": [{"kind": "at_node", "fiber": 0, "node": [0, 1]}]}"#
            ),
            Err(SurfaceError::Step { step: 0, .. })
        ));
    }

    #[test]
    fn step_fields_are_checked() {
        let schema_msg = |src: &str| match SurfaceConfig::from_json_str(src) {
            Err(SurfaceError::Schema { msg, .. }) => msg,
            other => panic!("{other:?}"),
        };
        let m =
            schema_msg(r#"{"base": "F1", "steps": [{"kind": "generic_new_fiber", "bogus": 1}]}"#);
        assert!(m.contains("bogus"), "{m}");
        let m =
            schema_msg(r#"{"base": "F1", "steps": [{"kind": "generic_new_fiber", "fiber": 0}]}"#);
        assert!(m.contains("`fiber`"), "{m}");
        let m = schema_msg(r#"{"base": "F1", "steps": [{"kind": "at_node", "fiber": 0}]}"#);
        assert!(m.contains("needs `node`"), "{m}");
        assert!(!m.contains(" at line "), "{m}");
        let ok = r#"{"base": "F1", "steps": [{"kind": "on_section"}, {"kind": "on_section", "fiber": 0}]}"#;
        assert_eq!(SurfaceConfig::from_json_str(ok).unwrap().m(), 2);
    }

    #[test]
    fn dot_labels() {
        let x = SurfaceConfig::x_nk(2, 1).unwrap();
        let d = x.fiber_dot(0).unwrap();
        assert!(d.starts_with("graph fiber0 {"));
        assert!(d.contains("f0c2 [label=\"f0c2 (-1, 2)\"];"));
        let m = x.minus_two_dot("minus_two");
        assert!(m.contains("S [label=\"S (-2, 1)\"];"));
        assert!(m.contains("S -- f0c0;"));
    }
}
