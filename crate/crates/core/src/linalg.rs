//! Small exact linear algebra over `Q`.

#![allow(clippy::needless_range_loop)]

use num::rational::Ratio;
use num::{BigInt, BigRational, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Serializes `Ratio<i64>` as `{"num": .., "den": ..}`; use with `serialize_with`.
pub fn serialize_ratio<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
    RatioJson::from(*r).serialize(s)
}

/// JSON shape of an exact rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioJson {
    pub num: i64,
    pub den: i64,
}

impl From<Ratio<i64>> for RatioJson {
    fn from(r: Ratio<i64>) -> Self {
        RatioJson {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl Serialize for RatioJson {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}

/// Counts of positive, negative and zero entries in a diagonalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Inertia of a symmetric matrix via congruence diagonalization (Sylvester).
pub fn inertia(matrix: &[Vec<BigRational>]) -> Inertia {
    let n = matrix.len();
    let mut a: Vec<Vec<BigRational>> = matrix.to_vec();
    let mut out = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // a_kk = 0 = a_jj but a_kj != 0: replace e_k by e_k + e_j.
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                // Row k is entirely zero.
                out.zero += 1;
                k += 1;
                continue;
            }
        }
        let pivot = a[k][k].clone();
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            // Schur complement; row k is untouched until the loop ends.
            let factor = &a[r][k] / &pivot;
            for c in k + 1..n {
                let v = &factor * &a[k][c];
                a[r][c] -= v;
            }
            a[r][k] = BigRational::zero();
        }
        for c in k + 1..n {
            a[k][c] = BigRational::zero();
        }
        if pivot.is_positive() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
        k += 1;
    }
    out
}

pub fn is_negative_definite(matrix: &[Vec<BigRational>]) -> bool {
    let i = inertia(matrix);
    i.negative == matrix.len()
}

/// Solves `A x = b` for square nonsingular `A`; `None` when singular.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &pivot;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..=n {
                let v = &factor * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn mat_vec(a: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(BigRational::zero(), |acc, (p, q)| acc + p * q)
        })
        .collect()
}
