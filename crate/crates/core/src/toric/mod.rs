//! Toric surfaces: fans, the Gorenstein toric del Pezzo surfaces, rank-one
//! toric foliations and the bounded blowup searches over three of them.

use thiserror::Error;

pub mod elimination;
pub mod enumerate;
pub mod fan;
pub mod foliation;

pub use elimination::{eliminate_case, EliminationReport};
pub use enumerate::{enumerate_gorenstein_dp, normal_form};
pub use fan::{fan_from_rays, Fan2D, Ray};
pub use foliation::{analyze_toric_foliation, ToricFoliationReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToricError {
    #[error("zero vector is not a ray")]
    ZeroRay,
    #[error("ray ({}, {}) is not primitive", .0[0], .0[1])]
    NotPrimitive(Ray),
    #[error("ray ({}, {}) appears twice", .0[0], .0[1])]
    DuplicateRay(Ray),
    #[error("fan is not complete: {0}")]
    Incomplete(String),
    #[error("ray ({}, {}) lies on an existing ray", .0[0], .0[1])]
    OnExistingRay(Ray),
    #[error("matrix has determinant {0}, not ±1")]
    NotUnimodular(i64),
    #[error("ray index {0} out of range")]
    BadRayIndex(usize),
    #[error("unknown case {0:?}; expected 6d, 8c or 9")]
    UnknownCase(String),
}

/// The three Picard-rank-one Gorenstein toric del Pezzo surfaces with at
/// most two singular points, with the ray spanning the foliation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    C6d,
    C8c,
    C9,
}

impl CaseId {
    pub const ALL: [CaseId; 3] = [CaseId::C6d, CaseId::C8c, CaseId::C9];

    pub fn parse(s: &str) -> Result<CaseId, ToricError> {
        match s {
            "6d" => Ok(CaseId::C6d),
            "8c" => Ok(CaseId::C8c),
            "9" => Ok(CaseId::C9),
            other => Err(ToricError::UnknownCase(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseId::C6d => "6d",
            CaseId::C8c => "8c",
            CaseId::C9 => "9",
        }
    }

    /// Rays `v1, v2, v3` in the order of the case table.
    pub fn rays(self) -> [Ray; 3] {
        match self {
            CaseId::C6d => [[1, 0], [0, -1], [-3, 2]],
            // v3 = (-2, 1): the other sign does not give a complete fan
            CaseId::C8c => [[1, 0], [0, -1], [-2, 1]],
            CaseId::C9 => [[1, 0], [0, -1], [-1, 1]],
        }
    }

    /// The ray spanning the foliation's line `V`.
    pub fn foliation_ray(self) -> Ray {
        match self {
            CaseId::C6d | CaseId::C8c => self.rays()[2],
            CaseId::C9 => self.rays()[0],
        }
    }

    pub fn fan(self) -> Fan2D {
        fan_from_rays(&self.rays()).expect("case fans are complete")
    }

    /// Index of `foliation_ray` in `fan()`.
    pub fn foliation_index(self) -> usize {
        self.fan()
            .index_of(self.foliation_ray())
            .expect("foliation ray is a ray of the fan")
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
