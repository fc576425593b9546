//! Picard lattice of a blowup tower over a Hirzebruch surface.
//!
//! Classes are written in the basis `{s, f, e_1, .., e_m}` where `s` is the
//! tracked section, `f` the fiber and `e_i` the *total transforms* of the
//! exceptional curves. In that basis the intersection form is diagonal apart
//! from the `s·f` block, whatever the infinitely-near structure of the centers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Inertia};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("form mismatch: {left} vs {right}")]
    FormMismatch {
        left: LatticeForm,
        right: LatticeForm,
    },
    #[error("coefficient vector has length {got}, form {form} needs {expected}")]
    BadLength {
        form: LatticeForm,
        got: usize,
        expected: usize,
    },
}

/// Intersection form on `Pic(F_n)` blown up `m` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeForm {
    n: u32,
    m: usize,
}

impl fmt::Display for LatticeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pic(F_{} + {} pts)", self.n, self.m)
    }
}

impl LatticeForm {
    pub fn new(n: u32, m: usize) -> Self {
        LatticeForm { n, m }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of exceptional basis vectors.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.m + 2
    }

    /// The form after one more blowup.
    pub fn extended(&self) -> Self {
        LatticeForm {
            n: self.n,
            m: self.m + 1,
        }
    }

    pub fn section(&self) -> DivisorClass {
        let mut c = DivisorClass::zero(*self);
        c.coeffs[0] = 1;
        c
    }

    pub fn fiber(&self) -> DivisorClass {
        let mut c = DivisorClass::zero(*self);
        c.coeffs[1] = 1;
        c
    }

    /// Total transform of the `i`-th exceptional curve, 1-based.
    pub fn exceptional(&self, i: usize) -> DivisorClass {
        assert!(i >= 1 && i <= self.m, "exceptional index {i} out of range");
        let mut c = DivisorClass::zero(*self);
        c.coeffs[i + 1] = 1;
        c
    }

    /// `K = -2s - (n+2)f + Σ e_i`.
    pub fn canonical_class(&self) -> DivisorClass {
        let mut c = DivisorClass::zero(*self);
        c.coeffs[0] = -2;
        c.coeffs[1] = -(self.n as i64 + 2);
        for x in &mut c.coeffs[2..] {
            *x = 1;
        }
        c
    }

    pub fn gram_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut g = vec![vec![0i64; r]; r];
        g[0][0] = -(self.n as i64);
        g[0][1] = 1;
        g[1][0] = 1;
        for (i, row) in g.iter_mut().enumerate().skip(2) {
            row[i] = -1;
        }
        g
    }

    /// Inertia of the Gram matrix, computed by congruence diagonalization over `Q`.
    pub fn signature(&self) -> Inertia {
        let g: Vec<Vec<BigRational>> = self
            .gram_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(linalg::rat).collect())
            .collect();
        linalg::inertia(&g)
    }

    fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let n = self.n as i64;
        let mut acc = -n * a[0] * b[0] + a[0] * b[1] + a[1] * b[0];
        for (x, y) in a[2..].iter().zip(&b[2..]) {
            acc -= x * y;
        }
        acc
    }
}

/// Integer divisor class `s·coef_s + f·coef_f + Σ e_i·coef_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    form: LatticeForm,
    coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn zero(form: LatticeForm) -> Self {
        DivisorClass {
            form,
            coeffs: vec![0; form.rank()],
        }
    }

    pub fn from_coeffs(form: LatticeForm, coeffs: Vec<i64>) -> Result<Self, LatticeError> {
        if coeffs.len() != form.rank() {
            return Err(LatticeError::BadLength {
                form,
                got: coeffs.len(),
                expected: form.rank(),
            });
        }
        Ok(DivisorClass { form, coeffs })
    }

    /// Builds `a·s + b·f + Σ e_i·exc[i]`; the form is sized by `exc`.
    pub fn from_parts(n: u32, s: i64, f: i64, exc: &[i64]) -> Self {
        let mut coeffs = Vec::with_capacity(exc.len() + 2);
        coeffs.push(s);
        coeffs.push(f);
        coeffs.extend_from_slice(exc);
        DivisorClass {
            form: LatticeForm::new(n, exc.len()),
            coeffs,
        }
    }

    pub fn form(&self) -> LatticeForm {
        self.form
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn s(&self) -> i64 {
        self.coeffs[0]
    }

    pub fn f(&self) -> i64 {
        self.coeffs[1]
    }

    pub fn exceptional_coeffs(&self) -> &[i64] {
        &self.coeffs[2..]
    }

    pub fn intersect(&self, other: &DivisorClass) -> Result<i64, LatticeError> {
        if self.form != other.form {
            return Err(LatticeError::FormMismatch {
                left: self.form,
                right: other.form,
            });
        }
        Ok(self.form.pair(&self.coeffs, &other.coeffs))
    }

    pub fn self_intersection(&self) -> i64 {
        self.form.pair(&self.coeffs, &self.coeffs)
    }

    /// Pullback to the form with `extra` more exceptional vectors.
    pub fn pullback(&self, extra: usize) -> DivisorClass {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(std::iter::repeat_n(0, extra));
        DivisorClass {
            form: LatticeForm::new(self.form.n, self.form.m + extra),
            coeffs,
        }
    }

    /// Lifts the class into `target`, which must have the same `n` and at least as many points.
    pub fn lift_to(&self, target: LatticeForm) -> Result<DivisorClass, LatticeError> {
        if target.n != self.form.n || target.m < self.form.m {
            return Err(LatticeError::FormMismatch {
                left: self.form,
                right: target,
            });
        }
        Ok(self.pullback(target.m - self.form.m))
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &DivisorClass,
        op: impl Fn(i64, i64) -> i64,
    ) -> Result<DivisorClass, LatticeError> {
        if self.form != other.form {
            return Err(LatticeError::FormMismatch {
                left: self.form,
                right: other.form,
            });
        }
        Ok(DivisorClass {
            form: self.form,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }

    pub fn to_json(&self) -> ClassJson {
        ClassJson {
            s: self.coeffs[0],
            f: self.coeffs[1],
            e: self.coeffs[2..].to_vec(),
        }
    }
}

/// Free function form of [`DivisorClass::intersect`].
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<i64, LatticeError> {
    a.intersect(b)
}

pub fn canonical_class(form: LatticeForm) -> DivisorClass {
    form.canonical_class()
}

// Operator impls panic on mismatched forms; use the checked_* methods when
// the forms are not known to agree.
impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_add(rhs)
            .expect("adding classes on different forms")
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_sub(rhs)
            .expect("subtracting classes on different forms")
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            form: self.form,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            form: rhs.form,
            coeffs: rhs.coeffs.iter().map(|x| self * x).collect(),
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        let mut push = |c: i64, name: String| {
            if c == 0 {
                return;
            }
            let mag = c.abs();
            let body = if mag == 1 {
                name
            } else {
                format!("{mag}{name}")
            };
            terms.push((c < 0, body));
        };
        push(self.coeffs[0], "s".into());
        push(self.coeffs[1], "f".into());
        for (i, &c) in self.coeffs[2..].iter().enumerate() {
            push(c, format!("e{}", i + 1));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (neg, body)) in terms.into_iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Wire format `{"s": int, "f": int, "e": [int, ...]}`. The Hirzebruch index is
/// not part of the payload, so decoding needs it from context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassJson {
    pub s: i64,
    pub f: i64,
    pub e: Vec<i64>,
}

impl ClassJson {
    pub fn into_class(self, n: u32) -> DivisorClass {
        DivisorClass::from_parts(n, self.s, self.f, &self.e)
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}
