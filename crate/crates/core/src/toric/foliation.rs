//! Rank-one toric foliations `F_V` with `V` the line through a ray.

use serde::Serialize;

use super::fan::{det, Fan2D, Ray};
use super::ToricError;

fn on_line(r: Ray, v: Ray) -> bool {
    det(r, v) == 0
}

fn neg(r: Ray) -> Ray {
    [-r[0], -r[1]]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToricFoliationReport {
    pub v: Ray,
    /// Rays of the fan lying in `V`; `K_F = −Σ D_ρ` over them.
    pub kf_rays: Vec<usize>,
    /// The smooth refinement the intersection numbers are computed on.
    pub refinement: Fan2D,
    /// Coefficients of `K_F` on the refinement's invariant divisors.
    pub kf_on_refinement: Vec<i64>,
    pub kf_dot_k: i64,
    pub k_squared: i64,
    /// `2 K_F·K − K²`.
    pub n0: i64,
    /// 2-cones (as ray index pairs) with no ray in `V`: the singular fixed points.
    pub singular_orbits: Vec<(usize, usize)>,
    /// Those singular cones whose interior meets `V`.
    pub dicritical_cones: Vec<(usize, usize)>,
    /// Class of the closure of a general leaf on the refinement.
    pub leaf_on_refinement: Vec<i64>,
    pub leaf_self_int: i64,
}

/// `u` with `u·v = 0`, primitive.
fn annihilator(v: Ray) -> Ray {
    [-v[1], v[0]]
}

/// Closure of a general leaf: the positive part of `div(χ^u)`, `u ⊥ v`.
pub fn general_leaf_class(fan: &Fan2D, v: Ray) -> Vec<i64> {
    let u = annihilator(v);
    fan.rays()
        .iter()
        .map(|r| (u[0] * r[0] + u[1] * r[1]).max(0))
        .collect()
}

/// Analyzes `F_V` for `V` the line through ray `v`.
pub fn analyze_toric_foliation(fan: &Fan2D, v: usize) -> Result<ToricFoliationReport, ToricError> {
    if v >= fan.len() {
        return Err(ToricError::BadRayIndex(v));
    }
    let vr = fan.ray(v);
    let kf_rays: Vec<usize> = (0..fan.len())
        .filter(|&i| on_line(fan.ray(i), vr))
        .collect();

    let refinement = if fan.is_smooth() {
        fan.clone()
    } else {
        fan.minimal_resolution()
    };
    let kf: Vec<i64> = refinement
        .rays()
        .iter()
        .map(|&r| if on_line(r, vr) { -1 } else { 0 })
        .collect();
    let k: Vec<i64> = vec![-1; refinement.len()];
    let kf_dot_k = refinement.intersect(&kf, &k).expect("refinement is smooth");
    let k_squared = refinement.intersect(&k, &k).expect("refinement is smooth");

    let mut singular_orbits = Vec::new();
    let mut dicritical_cones = Vec::new();
    for i in 0..fan.len() {
        let j = (i + 1) % fan.len();
        let (a, b) = (fan.ray(i), fan.ray(j));
        if on_line(a, vr) || on_line(b, vr) {
            continue;
        }
        singular_orbits.push((i, j));
        let inside = |w: Ray| det(a, w) > 0 && det(w, b) > 0;
        if inside(vr) || inside(neg(vr)) {
            dicritical_cones.push((i, j));
        }
    }

    let leaf = general_leaf_class(&refinement, vr);
    let leaf_self_int = refinement
        .intersect(&leaf, &leaf)
        .expect("refinement is smooth");
    Ok(ToricFoliationReport {
        v: vr,
        kf_rays,
        refinement,
        kf_on_refinement: kf,
        kf_dot_k,
        k_squared,
        n0: 2 * kf_dot_k - k_squared,
        singular_orbits,
        dicritical_cones,
        leaf_on_refinement: leaf,
        leaf_self_int,
    })
}

/// Self-intersections a leaf through a smooth foliation point can have on
/// the smooth refinement: invariant divisors `D_ρ` (`ρ ⊄ V`) that are not
/// (−2)-curves, and the general leaf.
pub fn leaf_square_options(fan: &Fan2D, v: usize) -> Result<Vec<i64>, ToricError> {
    let report = analyze_toric_foliation(fan, v)?;
    let refinement = &report.refinement;
    let squares = refinement.self_intersections().expect("smooth");
    let mut out: Vec<i64> = refinement
        .rays()
        .iter()
        .zip(&squares)
        .filter(|(r, &sq)| !on_line(**r, report.v) && sq != -2)
        .map(|(_, &sq)| sq)
        .collect();
    out.push(report.leaf_self_int);
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Certificate that a general leaf has a given self-intersection: star
/// subdivisions at the dicritical point until `V` contains two opposite rays
/// (so the foliation is a fibration and the leaf transform is a fiber).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafCertificate {
    pub start: Fan2D,
    pub inserted: Vec<Ray>,
    pub end: Fan2D,
    pub is_fibration: bool,
    /// Self-intersection of the leaf transform on `end`.
    pub fiber_self_int: i64,
    /// `fiber_self_int + #blowups`: every blowup is at a point of the leaf.
    pub leaf_self_int: i64,
    /// Cross-check computed directly on `start`.
    pub direct_leaf_self_int: i64,
}

pub fn certify_leaf_square(fan: &Fan2D, v: Ray) -> Result<LeafCertificate, ToricError> {
    if !fan.is_smooth() {
        return Err(ToricError::Incomplete(
            "certificate needs a smooth fan".into(),
        ));
    }
    let start = fan.clone();
    let mut cur = fan.clone();
    let mut inserted = Vec::new();
    let target = if fan.index_of(v).is_some() { neg(v) } else { v };
    while cur.index_of(target).is_none() {
        let i = cur
            .cone_containing(target)
            .ok_or(ToricError::OnExistingRay(target))?;
        let (a, b) = (cur.ray(i), cur.ray(i + 1));
        let r = [a[0] + b[0], a[1] + b[1]];
        cur = cur.star_subdivide(r)?;
        inserted.push(r);
    }
    let leaf = general_leaf_class(&cur, v);
    let fiber_self_int = cur.intersect(&leaf, &leaf).expect("smooth");
    let direct = general_leaf_class(&start, v);
    let direct_leaf_self_int = start.intersect(&direct, &direct).expect("smooth");
    let is_fibration = cur.index_of(v).is_some() && cur.index_of(neg(v)).is_some();
    Ok(LeafCertificate {
        leaf_self_int: fiber_self_int + inserted.len() as i64,
        start,
        inserted,
        end: cur,
        is_fibration,
        fiber_self_int,
        direct_leaf_self_int,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::fan::fan_from_rays;
    use crate::toric::CaseId;

    #[test]
    fn case_reports() {
        let expect = [(CaseId::C6d, -4), (CaseId::C8c, -4), (CaseId::C9, -3)];
        for (case, n0) in expect {
            let fan = case.fan();
            let r = analyze_toric_foliation(&fan, case.foliation_index()).unwrap();
            assert_eq!(r.n0, n0, "{case}");
            assert_eq!(r.kf_rays, vec![case.foliation_index()]);
            assert_eq!(r.dicritical_cones.len(), 1);
            assert_eq!(r.singular_orbits, r.dicritical_cones);
        }
    }

    #[test]
    fn leaf_options() {
        let c8 = CaseId::C8c;
        assert_eq!(
            leaf_square_options(&c8.fan(), c8.foliation_index()).unwrap(),
            vec![0, 2]
        );
        let c9 = CaseId::C9;
        assert_eq!(
            leaf_square_options(&c9.fan(), c9.foliation_index()).unwrap(),
            vec![1]
        );
    }

    #[test]
    fn fibration_on_resolved_quadric_cone() {
        let sigma0 = fan_from_rays(&[[1, 0], [0, -1], [-2, 1], [-1, 0]]).unwrap();
        let r = analyze_toric_foliation(&sigma0, 0).unwrap();
        assert_eq!(r.n0, 0);
        assert_eq!(r.kf_rays.len(), 2);
        assert!(r.dicritical_cones.is_empty());
    }

    #[test]
    fn bad_index() {
        let f = CaseId::C9.fan();
        assert_eq!(
            analyze_toric_foliation(&f, 5),
            Err(ToricError::BadRayIndex(5))
        );
    }
}
