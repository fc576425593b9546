//! Reflexive polygons and the Gorenstein toric del Pezzo surfaces they span.

use std::collections::BTreeMap;

use num::integer::gcd;
use num::rational::Ratio;
use serde::Serialize;

use super::fan::{det, ext_gcd, fan_from_rays, Fan2D, Ray};
use crate::fsing::AdeType;

/// Row-style Hermite normal form of the 2×k matrix with columns `cols`,
/// i.e. the canonical representative of `{g·M : g ∈ GL(2, Z)}`.
pub fn hnf(cols: &[Ray]) -> Vec<Ray> {
    let mut m: Vec<Ray> = cols.to_vec();
    let apply = |m: &mut Vec<Ray>, g: [[i64; 2]; 2]| {
        for c in m.iter_mut() {
            *c = [
                g[0][0] * c[0] + g[0][1] * c[1],
                g[1][0] * c[0] + g[1][1] * c[1],
            ];
        }
    };
    let Some(j) = m.iter().position(|c| *c != [0, 0]) else {
        return m;
    };
    let [a, b] = m[j];
    let (g, x, y) = ext_gcd(a, b);
    apply(&mut m, [[x, y], [-b / g, a / g]]);
    let Some(j2) = m.iter().position(|c| c[1] != 0) else {
        return m;
    };
    if m[j2][1] < 0 {
        apply(&mut m, [[1, 0], [0, -1]]);
    }
    let q = m[j2][0].div_euclid(m[j2][1]);
    apply(&mut m, [[1, -q], [0, 1]]);
    m
}

/// Canonical form of a fan up to `GL(2, Z)` and relabeling: the
/// lexicographically least Hermite normal form over all cyclic starting
/// points and both orientations of the ray sequence.
pub fn normal_form(fan: &Fan2D) -> Vec<Ray> {
    let k = fan.len();
    let mut best: Option<Vec<Ray>> = None;
    for start in 0..k {
        for dir in [1usize, k - 1] {
            let seq: Vec<Ray> = (0..k).map(|i| fan.ray(start + i * dir)).collect();
            let h = hnf(&seq);
            if best.as_ref().is_none_or(|b| h < *b) {
                best = Some(h);
            }
        }
    }
    best.unwrap_or_default()
}

/// Whether two fans define isomorphic toric surfaces.
pub fn isomorphic(a: &Fan2D, b: &Fan2D) -> bool {
    a.len() == b.len() && normal_form(a) == normal_form(b)
}

fn in_cyclic_angle_order(verts: &[Ray]) -> bool {
    let k = verts.len();
    (0..k).all(|i| det(verts[i], verts[(i + 1) % k]) > 0) && {
        // winding number one: exactly one descent in angular order
        let descents = (0..k)
            .filter(|&i| {
                super::fan::angle_cmp(verts[i], verts[(i + 1) % k]) != std::cmp::Ordering::Less
            })
            .count();
        descents == 1
    }
}

fn edge_ok(p: Ray, q: Ray) -> bool {
    let d = det(p, q);
    d > 0 && d == gcd(q[0] - p[0], q[1] - p[1])
}

fn turn(a: Ray, b: Ray, c: Ray) -> i64 {
    det([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]])
}

/// Vertex sequences (counterclockwise, starting at the lexicographically
/// least vertex) of all reflexive polygons with vertices in `[-bound, bound]²`.
pub fn reflexive_polygons_in_box(bound: i64) -> Vec<Vec<Ray>> {
    let pts: Vec<Ray> = (-bound..=bound)
        .flat_map(|x| (-bound..=bound).map(move |y| [x, y]))
        .filter(|&p| p != [0, 0] && gcd(p[0], p[1]) == 1)
        .collect();
    let mut out = Vec::new();
    for &v0 in &pts {
        let mut path = vec![v0];
        extend(&pts, &mut path, &mut out);
    }
    out
}

fn extend(pts: &[Ray], path: &mut Vec<Ray>, out: &mut Vec<Vec<Ray>>) {
    const MAX_VERTICES: usize = 8;
    let v0 = path[0];
    let last = *path.last().unwrap();
    if path.len() >= 3 && edge_ok(last, v0) {
        let k = path.len();
        let closes = turn(path[k - 2], last, v0) > 0 && turn(last, v0, path[1]) > 0;
        if closes && in_cyclic_angle_order(path) {
            out.push(path.clone());
        }
    }
    if path.len() == MAX_VERTICES {
        return;
    }
    for &p in pts {
        if p <= v0 || !edge_ok(last, p) {
            continue;
        }
        if path.len() >= 2 && turn(path[path.len() - 2], last, p) <= 0 {
            continue;
        }
        // stepping past v0 would wind around the origin a second time
        if path.len() >= 2 && det(last, v0) > 0 && det(v0, p) > 0 {
            continue;
        }
        path.push(p);
        extend(pts, path, out);
        path.pop();
    }
}

/// One isomorphism class of Gorenstein toric del Pezzo surfaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GorensteinDp {
    pub normal_form: Vec<Ray>,
    pub fan: Fan2D,
    pub picard_rank: usize,
    #[serde(serialize_with = "crate::linalg::serialize_ratio")]
    pub k_squared: Ratio<i64>,
    /// One `A_{d-1}` per cone of determinant `d > 1`.
    pub singularities: Vec<AdeType>,
}

impl GorensteinDp {
    pub fn from_fan(fan: Fan2D) -> Self {
        let mut singularities: Vec<AdeType> = fan
            .singular_cones()
            .iter()
            .map(|c| AdeType::A(c.det as usize - 1))
            .collect();
        singularities.sort();
        GorensteinDp {
            normal_form: normal_form(&fan),
            picard_rank: fan.len() - 2,
            k_squared: fan.k_squared(),
            singularities,
            fan,
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.singularities.is_empty()
    }
}

/// The Gorenstein toric del Pezzo surfaces up to isomorphism, sorted by
/// `(K², normal form)`.
pub fn gorenstein_catalog() -> Vec<GorensteinDp> {
    let mut classes: BTreeMap<Vec<Ray>, Fan2D> = BTreeMap::new();
    for verts in reflexive_polygons_in_box(3) {
        let fan = fan_from_rays(&verts).expect("reflexive polygons span complete fans");
        classes.entry(normal_form(&fan)).or_insert(fan);
    }
    let mut out: Vec<GorensteinDp> = classes
        .into_keys()
        .map(|nf| GorensteinDp::from_fan(fan_from_rays(&nf).expect("normal form is a fan")))
        .collect();
    out.sort_by(|a, b| {
        a.k_squared
            .cmp(&b.k_squared)
            .then_with(|| a.normal_form.cmp(&b.normal_form))
    });
    out
}

/// The fans of [`gorenstein_catalog`].
pub fn enumerate_gorenstein_dp() -> Vec<Fan2D> {
    gorenstein_catalog().into_iter().map(|g| g.fan).collect()
}

/// Picard rank one (three rays) and at most two singular points.
pub fn rank_one_few_singularities(catalog: &[GorensteinDp]) -> Vec<GorensteinDp> {
    catalog
        .iter()
        .filter(|g| g.picard_rank == 1 && g.singularities.len() <= 2)
        .cloned()
        .collect()
}
