//! Complete fans in `Z²`.

use std::cmp::Ordering;
use std::fmt;

use num::integer::gcd;
use num::rational::Ratio;
use num::{BigRational, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::ToricError;
use crate::linalg::{self, rat};

pub type Ray = [i64; 2];

pub fn det(a: Ray, b: Ray) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn is_primitive(r: Ray) -> bool {
    gcd(r[0], r[1]) == 1
}

/// 0 for angles in `[0, π)`, 1 for `[π, 2π)`.
fn half(r: Ray) -> u8 {
    if r[1] > 0 || (r[1] == 0 && r[0] > 0) {
        0
    } else {
        1
    }
}

/// Exact angular order starting from the positive x-axis.
pub fn angle_cmp(a: Ray, b: Ray) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&det(a, b)))
}

/// Per-cone data of the cone spanned by rays `i` and `i+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConeData {
    pub index: usize,
    pub rays: (Ray, Ray),
    pub det: i64,
    pub smooth: bool,
    pub gorenstein: bool,
}

/// A complete fan, rays stored counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Fan2D {
    rays: Vec<Ray>,
}

impl<'de> Deserialize<'de> for Fan2D {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            rays: Vec<Ray>,
        }
        let raw = Raw::deserialize(d)?;
        fan_from_rays(&raw.rays).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Fan2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .rays
            .iter()
            .map(|r| format!("({},{})", r[0], r[1]))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Builds a complete fan. Rays may come in any order; they are sorted
/// counterclockwise starting at the first ray given.
pub fn fan_from_rays(rays: &[Ray]) -> Result<Fan2D, ToricError> {
    for &r in rays {
        if r == [0, 0] {
            return Err(ToricError::ZeroRay);
        }
        if !is_primitive(r) {
            return Err(ToricError::NotPrimitive(r));
        }
    }
    if rays.len() < 3 {
        return Err(ToricError::Incomplete(format!(
            "{} rays cannot cover the plane",
            rays.len()
        )));
    }
    let first = rays[0];
    let mut sorted = rays.to_vec();
    // angle measured from the first ray
    let key = |r: &Ray| -> (u8, Ray) {
        let rel = [
            first[0] * r[0] + first[1] * r[1],
            first[0] * r[1] - first[1] * r[0],
        ];
        (half(rel), rel)
    };
    sorted.sort_by(|a, b| {
        let (ha, ra) = key(a);
        let (hb, rb) = key(b);
        ha.cmp(&hb).then_with(|| 0.cmp(&det(ra, rb)))
    });
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(ToricError::DuplicateRay(w[0]));
        }
    }
    let k = sorted.len();
    for i in 0..k {
        let (a, b) = (sorted[i], sorted[(i + 1) % k]);
        if det(a, b) <= 0 {
            return Err(ToricError::Incomplete(format!(
                "no strictly convex cone between ({},{}) and ({},{})",
                a[0], a[1], b[0], b[1]
            )));
        }
    }
    Ok(Fan2D { rays: sorted })
}

impl Fan2D {
    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn ray(&self, i: usize) -> Ray {
        self.rays[i % self.rays.len()]
    }

    pub fn index_of(&self, r: Ray) -> Option<usize> {
        self.rays.iter().position(|&x| x == r)
    }

    /// Index of the 2-cone `(i, i+1)` whose interior contains `r`.
    pub fn cone_containing(&self, r: Ray) -> Option<usize> {
        (0..self.len()).find(|&i| det(self.ray(i), r) > 0 && det(r, self.ray(i + 1)) > 0)
    }

    pub fn cone(&self, i: usize) -> ConeData {
        let (a, b) = (self.ray(i), self.ray(i + 1));
        let d = det(a, b);
        ConeData {
            index: i,
            rays: (a, b),
            det: d,
            smooth: d == 1,
            gorenstein: (b[1] - a[1]) % d == 0 && (a[0] - b[0]) % d == 0,
        }
    }

    pub fn cones(&self) -> Vec<ConeData> {
        (0..self.len()).map(|i| self.cone(i)).collect()
    }

    pub fn is_smooth(&self) -> bool {
        self.cones().iter().all(|c| c.smooth)
    }

    pub fn is_gorenstein(&self) -> bool {
        self.cones().iter().all(|c| c.gorenstein)
    }

    pub fn singular_cones(&self) -> Vec<ConeData> {
        self.cones().into_iter().filter(|c| !c.smooth).collect()
    }

    /// `D_i²` on a smooth fan, from `u_{i-1} + u_{i+1} = −D_i² u_i`.
    pub fn self_intersections(&self) -> Option<Vec<i64>> {
        if !self.is_smooth() {
            return None;
        }
        let k = self.len();
        Some(
            (0..k)
                .map(|i| -det(self.ray(i + k - 1), self.ray(i + 1)))
                .collect(),
        )
    }

    /// Intersection matrix of the torus-invariant divisors of a smooth fan.
    pub fn intersection_matrix(&self) -> Option<Vec<Vec<i64>>> {
        let d = self.self_intersections()?;
        let k = self.len();
        let mut m = vec![vec![0i64; k]; k];
        for i in 0..k {
            m[i][i] = d[i];
            let j = (i + 1) % k;
            m[i][j] += 1;
            m[j][i] += 1;
        }
        Some(m)
    }

    /// Intersection number of two combinations of invariant divisors on a smooth fan.
    pub fn intersect(&self, a: &[i64], b: &[i64]) -> Option<i64> {
        let m = self.intersection_matrix()?;
        Some(
            (0..self.len())
                .map(|i| (0..self.len()).map(|j| a[i] * m[i][j] * b[j]).sum::<i64>())
                .sum(),
        )
    }

    /// Rays inserted by the minimal resolution of cone `(a, b)`, in order from `a`.
    fn resolve_cone(a: Ray, b: Ray) -> Vec<Ray> {
        let mut out = Vec::new();
        let mut u = a;
        loop {
            let d = det(u, b);
            if d <= 1 {
                return out;
            }
            // p with det(u, p) = 1, then b = c·u + d·p
            let (g, x, y) = ext_gcd(u[0], u[1]);
            debug_assert_eq!(g, 1);
            let p = [-y, x];
            let c = det(b, p);
            let k = c.div_euclid(d) + 1;
            let r = [k * u[0] + p[0], k * u[1] + p[1]];
            debug_assert_eq!(det(u, r), 1);
            out.push(r);
            u = r;
        }
    }

    /// The minimal resolution: every singular cone is subdivided along the
    /// boundary of the convex hull of its nonzero lattice points.
    pub fn minimal_resolution(&self) -> Fan2D {
        let mut rays = Vec::new();
        for i in 0..self.len() {
            let (a, b) = (self.ray(i), self.ray(i + 1));
            rays.push(a);
            rays.extend(Self::resolve_cone(a, b));
        }
        Fan2D { rays }
    }

    /// `K²`, computed on the minimal resolution: `π*K` is `−Σ D` plus a
    /// combination of exceptional divisors orthogonal to every exceptional
    /// divisor, and `K² = (π*K)²`.
    pub fn k_squared(&self) -> Ratio<i64> {
        let res = self.minimal_resolution();
        let m = res.intersection_matrix().expect("resolution is smooth");
        let k = res.len();
        let exc: Vec<usize> = (0..k)
            .filter(|&j| self.index_of(res.ray(j)).is_none())
            .collect();
        let mut coef: Vec<BigRational> = vec![rat(-1); k];
        if !exc.is_empty() {
            // (Σ_j coef_j D_j)·D_e = 0 for exceptional e
            let sub: Vec<Vec<BigRational>> = exc
                .iter()
                .map(|&e| exc.iter().map(|&f| rat(m[e][f])).collect())
                .collect();
            let rhs: Vec<BigRational> = exc
                .iter()
                .map(|&e| {
                    let s: i64 = (0..k).filter(|j| !exc.contains(j)).map(|j| m[e][j]).sum();
                    rat(s)
                })
                .collect();
            let sol = linalg::solve(&sub, &rhs).expect("exceptional locus is negative definite");
            for (idx, &e) in exc.iter().enumerate() {
                coef[e] = sol[idx].clone();
            }
        }
        let mut total = rat(0);
        for i in 0..k {
            for j in 0..k {
                total += &coef[i] * &coef[j] * rat(m[i][j]);
            }
        }
        Ratio::new(
            total.numer().to_i64().expect("small"),
            total.denom().to_i64().expect("small"),
        )
    }

    /// Inserts `new_ray` into the cone whose interior contains it.
    pub fn star_subdivide(&self, new_ray: Ray) -> Result<Fan2D, ToricError> {
        if new_ray == [0, 0] {
            return Err(ToricError::ZeroRay);
        }
        if !is_primitive(new_ray) {
            return Err(ToricError::NotPrimitive(new_ray));
        }
        if self
            .rays
            .iter()
            .any(|&r| det(r, new_ray) == 0 && r[0] * new_ray[0] + r[1] * new_ray[1] > 0)
        {
            return Err(ToricError::OnExistingRay(new_ray));
        }
        let i = self
            .cone_containing(new_ray)
            .ok_or(ToricError::OnExistingRay(new_ray))?;
        let mut rays = self.rays.clone();
        rays.insert(i + 1, new_ray);
        Ok(Fan2D { rays })
    }

    /// Removes ray `index`; fails when the neighbours do not span a strictly convex cone.
    pub fn contract(&self, index: usize) -> Result<Fan2D, ToricError> {
        let k = self.len();
        if index >= k {
            return Err(ToricError::Incomplete(format!("no ray {index}")));
        }
        if k <= 3 || det(self.ray(index + k - 1), self.ray(index + 1)) <= 0 {
            return Err(ToricError::Incomplete(format!(
                "ray {index} cannot be removed"
            )));
        }
        let mut rays = self.rays.clone();
        rays.remove(index);
        Ok(Fan2D { rays })
    }

    /// Applies `g` (a 2×2 integer matrix of determinant ±1) to every ray.
    pub fn transform(&self, g: [[i64; 2]; 2]) -> Result<Fan2D, ToricError> {
        let d = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if d.abs() != 1 {
            return Err(ToricError::NotUnimodular(d));
        }
        let rays: Vec<Ray> = self
            .rays
            .iter()
            .map(|r| {
                [
                    g[0][0] * r[0] + g[0][1] * r[1],
                    g[1][0] * r[0] + g[1][1] * r[1],
                ]
            })
            .collect();
        fan_from_rays(&rays)
    }
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorting_and_completeness() {
        let f = fan_from_rays(&[[0, -1], [1, 0], [-1, 1]]).unwrap();
        assert_eq!(f.rays(), &[[0, -1], [1, 0], [-1, 1]]);
        let g = fan_from_rays(&[[1, 0], [-1, 1], [0, -1]]).unwrap();
        assert_eq!(g.rays(), &[[1, 0], [-1, 1], [0, -1]]);
        assert!(matches!(
            fan_from_rays(&[[1, 0], [0, -1], [2, -1]]),
            Err(ToricError::Incomplete(_))
        ));
        assert_eq!(
            fan_from_rays(&[[2, 0], [0, 1], [-1, -1]]),
            Err(ToricError::NotPrimitive([2, 0]))
        );
        assert!(fan_from_rays(&[[1, 0], [-1, 0]]).is_err());
    }

    #[test]
    fn p2_is_smooth_with_k2_nine() {
        let f = fan_from_rays(&[[1, 0], [0, -1], [-1, 1]]).unwrap();
        assert!(f.is_smooth());
        assert_eq!(f.self_intersections().unwrap(), vec![1, 1, 1]);
        assert_eq!(f.k_squared(), Ratio::from_integer(9));
    }

    #[test]
    fn case_6d_data() {
        let f = fan_from_rays(&[[1, 0], [0, -1], [-3, 2]]).unwrap();
        assert!(f.is_gorenstein());
        let mut dets: Vec<i64> = f.cones().iter().map(|c| c.det).collect();
        dets.sort();
        assert_eq!(dets, vec![1, 2, 3]);
        assert_eq!(f.k_squared(), Ratio::from_integer(6));
        assert_eq!(f.minimal_resolution().len(), 6);
    }

    #[test]
    fn quadric_cone_resolution() {
        let f = fan_from_rays(&[[1, 0], [0, -1], [-2, 1]]).unwrap();
        let res = f.minimal_resolution();
        assert_eq!(res.rays(), &[[1, 0], [-2, 1], [-1, 0], [0, -1]]);
        assert_eq!(res.self_intersections().unwrap(), vec![2, 0, -2, 0]);
        assert_eq!(f.k_squared(), Ratio::from_integer(8));
    }

    #[test]
    fn non_gorenstein_k2_is_rational() {
        // weighted projective plane P(1,1,3)
        let f = fan_from_rays(&[[1, 0], [0, 1], [-1, -3]]).unwrap();
        assert!(!f.is_gorenstein());
        let k2 = f.k_squared();
        assert_eq!(k2, Ratio::new(25, 3));
    }

    #[test]
    fn subdivide_and_contract() {
        let f = fan_from_rays(&[[1, 0], [0, 1], [-1, -1]]).unwrap();
        let g = f.star_subdivide([1, 1]).unwrap();
        assert!(g.is_smooth());
        let i = g.index_of([1, 1]).unwrap();
        assert_eq!(g.self_intersections().unwrap()[i], -1);
        assert_eq!(g.contract(i).unwrap(), f);
        assert_eq!(
            f.star_subdivide([2, 0]),
            Err(ToricError::NotPrimitive([2, 0]))
        );
        assert_eq!(
            f.star_subdivide([1, 0]),
            Err(ToricError::OnExistingRay([1, 0]))
        );
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(3, 5), (-4, 6), (0, -7), (12, 0), (-3, -2)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, gcd(a, b));
        }
    }

    #[test]
    fn json_shape() {
        let f = fan_from_rays(&[[1, 0], [0, -1], [-1, 1]]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"rays":[[1,0],[-1,1],[0,-1]]}"#);
        let back: Fan2D = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
