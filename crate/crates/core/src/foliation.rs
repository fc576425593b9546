//! The foliation induced by the ruling: its canonical class, singular points,
//! slope against `−K` and the invariant `N = 2 K_F·K − K²`.

use num::rational::Ratio;
use serde::Serialize;

use crate::lattice::DivisorClass;
use crate::linalg::serialize_ratio;
use crate::surface::{Center, SurfaceConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoliationState {
    pub kf: DivisorClass,
    /// `(fiber, (component, component))` for every fiber node.
    pub sing_nodes: Vec<(usize, (usize, usize))>,
    /// `kf·f = −2`.
    pub consistent: bool,
}

/// Replays the blowup history: `K_F = −2s − nf` on the base, then `+e_i`
/// for every center that is a smooth point of the foliation. Blowing up a
/// node (a reduced singularity) pulls `K_F` back unchanged.
pub fn foliation_state(config: &SurfaceConfig) -> FoliationState {
    let form = config.form();
    let mut kf = (-2 * &form.section())
        .checked_sub(&(config.n() as i64 * &form.fiber()))
        .expect("same form");
    for (i, step) in config.history().iter().enumerate() {
        if !matches!(step, Center::AtNode { .. }) {
            kf = &kf + &form.exceptional(i + 1);
        }
    }
    let sing_nodes = config
        .fibers()
        .iter()
        .enumerate()
        .flat_map(|(i, t)| t.nodes.iter().map(move |&nd| (i, nd)))
        .collect();
    let consistent = kf.intersect(&form.fiber()) == Ok(-2);
    FoliationState {
        kf,
        sing_nodes,
        consistent,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlopeReport {
    /// `(−K_F)·(−K)`, the slope of the rank-one foliation.
    #[serde(serialize_with = "serialize_ratio")]
    pub mu_f: Ratio<i64>,
    /// `K²/2`, the slope of the tangent sheaf.
    #[serde(serialize_with = "serialize_ratio")]
    pub mu_t: Ratio<i64>,
    pub n_inv: i64,
    /// `mu_f ≥ mu_t`: the tangent sheaf is not slope stable.
    pub destabilizes: bool,
}

pub fn slope_report(config: &SurfaceConfig) -> SlopeReport {
    let kf = foliation_state(config).kf;
    let k = config.canonical_class();
    let kf_k = kf.intersect(&k).expect("same form");
    let k2 = k.self_intersection();
    let mu_f = Ratio::from_integer(kf_k);
    let mu_t = Ratio::new(k2, 2);
    SlopeReport {
        mu_f,
        mu_t,
        n_inv: 2 * kf_k - k2,
        destabilizes: mu_f >= mu_t,
    }
}

/// `N = 2 K_F·K − K²`.
pub fn n_invariant(config: &SurfaceConfig) -> i64 {
    slope_report(config).n_inv
}

/// Predicted change of `N` when blowing up `center`.
pub fn n_step(center: Center) -> i64 {
    match center {
        Center::AtNode { .. } => 1,
        _ => -1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionViolation {
    pub fiber: usize,
    pub component: usize,
    pub kf_dot: i64,
    pub nodes: usize,
}

/// `K_F·C = −2 + #(nodes on C)` for every fiber component `C`.
pub fn check_foliation_adjunction(config: &SurfaceConfig) -> Result<(), AdjunctionViolation> {
    let kf = foliation_state(config).kf;
    for (fiber, tree) in config.fibers().iter().enumerate() {
        for c in &tree.components {
            let kf_dot = kf.intersect(&c.cls).expect("same form");
            let nodes = tree.node_count(c.id);
            if kf_dot != -2 + nodes as i64 {
                return Err(AdjunctionViolation {
                    fiber,
                    component: c.id,
                    kf_dot,
                    nodes,
                });
            }
        }
    }
    Ok(())
}

/// Every tracked curve with `K_F·C < 0` is foliation invariant. Fiber
/// components are invariant, so only the section needs checking.
pub fn kf_negative_curves_invariant(config: &SurfaceConfig) -> bool {
    let kf = foliation_state(config).kf;
    kf.intersect(config.section_cls()).expect("same form") >= 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::hirzebruch;

    #[test]
    fn base_state() {
        for n in 0..=2 {
            let f = hirzebruch(n).unwrap();
            let st = foliation_state(&f);
            assert_eq!(st.kf, DivisorClass::from_parts(n as u32, -2, -n, &[]));
            assert!(st.sing_nodes.is_empty());
            assert!(st.consistent);
            let r = slope_report(&f);
            assert_eq!((r.mu_f, r.mu_t, r.n_inv), (4.into(), 4.into(), 0));
            assert!(r.destabilizes);
        }
    }

    #[test]
    fn x_n1_state_and_slopes() {
        for n in 0..=2 {
            let x = SurfaceConfig::x_nk(n, 1).unwrap();
            let st = foliation_state(&x);
            assert_eq!(st.kf, DivisorClass::from_parts(n as u32, -2, -n, &[1, 0]));
            assert_eq!(st.sing_nodes.len(), 2);
            let r = slope_report(&x);
            assert_eq!((r.mu_f, r.mu_t), (3.into(), 3.into()));
            let x3 = SurfaceConfig::x_nk(n, 3).unwrap();
            let r3 = slope_report(&x3);
            assert_eq!((r3.mu_f, r3.mu_t, r3.n_inv), (1.into(), 1.into(), 0));
        }
    }

    #[test]
    fn adjunction_on_two_blowup_fiber() {
        let x = SurfaceConfig::x_nk(1, 1).unwrap();
        check_foliation_adjunction(&x).unwrap();
        let kf = foliation_state(&x).kf;
        let t = &x.fibers()[0];
        // F'' is component 0, E'' is component 2
        assert_eq!(kf.intersect(&t.components[0].cls), Ok(-1));
        assert_eq!(t.node_count(0), 1);
        assert_eq!(kf.intersect(&t.components[2].cls), Ok(0));
        assert_eq!(t.node_count(2), 2);
        assert!(kf_negative_curves_invariant(&x));
    }

    #[test]
    fn n_changes_by_one() {
        let f = hirzebruch(0).unwrap();
        let a = f.blowup(Center::GenericNewFiber).unwrap();
        assert_eq!(n_invariant(&a), -1);
        let b = a
            .blowup(Center::AtNode {
                fiber: 0,
                node: (0, 1),
            })
            .unwrap();
        assert_eq!(n_invariant(&b), 0);
    }

    #[test]
    fn slope_json_is_exact() {
        let x = SurfaceConfig::x_nk(0, 1)
            .unwrap()
            .blowup(Center::GenericNewFiber)
            .unwrap();
        let v = serde_json::to_value(slope_report(&x)).unwrap();
        assert_eq!(v["mu_t"], serde_json::json!({"num": 5, "den": 2}));
        assert_eq!(v["mu_f"], serde_json::json!({"num": 2, "den": 1}));
        assert_eq!(v["destabilizes"], serde_json::json!(false));
    }
}
