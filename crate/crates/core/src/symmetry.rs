//! Basis-vector fields of the zone-center irreducible representations of
//! Pmm2 on the general Wyckoff orbit 4i, and the displacement field used to
//! lay out the symmetric sector.
//!
//! Only one-dimensional irreps at k = (0,0,0) exist here, so a field on the
//! orbit is a plain linear combination of 16 table rows (12 polar-vector
//! rows and 4 scalar rows). The rows are stored as integers; every
//! operation is generic over [`Exact`] so the representation law can be
//! checked with `i64` or rationals without tolerances.

use std::fmt;

use thiserror::Error;

use crate::num::Exact;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("fractional coordinate {name} = {value} is outside [0, 1)")]
    CoordinateOutOfRange { name: &'static str, value: String },
    #[error("vertical coefficient c1 must be non-negative (z points up), got {0}")]
    NegativeVertical(String),
    #[error("unknown irrep `{0}` (expected 1..4 or tau1..tau4)")]
    UnknownIrrep(String),
    #[error("unknown version `{0}` (expected vectorI, vectorII, vectorIII or scalar)")]
    UnknownVersion(String),
    #[error("unknown group element `{0}` (expected E, C2z, Mx or My)")]
    UnknownElement(String),
    #[error("unknown coefficient `{0}` (expected A1..A4, B1..B4, C1..C4 or P1..P4)")]
    UnknownCoefficient(String),
}

pub type Vec3<T> = [T; 3];

/// The four orbit positions of site 4i for a representative `(x, y, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPositions4i<T> {
    pub x: T,
    pub y: T,
    pub positions: [Vec3<T>; 4],
}

/// Builds the orbit in table order: `(x,y,0), (1-x,1-y,0), (1-x,y,0), (x,1-y,0)`.
pub fn orbit_positions<T: Exact + PartialOrd + fmt::Display>(x: T, y: T) -> Result<OrbitPositions4i<T>, SymmetryError> {
    for (name, value) in [("x", x), ("y", y)] {
        if !(value >= T::zero() && value < T::one()) {
            return Err(SymmetryError::CoordinateOutOfRange {
                name,
                value: value.to_string(),
            });
        }
    }
    let one = T::one();
    let z = T::zero();
    Ok(OrbitPositions4i {
        x,
        y,
        positions: [[x, y, z], [one - x, one - y, z], [one - x, y, z], [x, one - y, z]],
    })
}

/// Point action of Pmm2 on the orbit: identity, the 2-fold axis along z and
/// the two mirrors `x -> 1-x` and `y -> 1-y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    E,
    C2z,
    Mx,
    My,
}

impl GroupElement {
    pub const ALL: [GroupElement; 4] = [Self::E, Self::C2z, Self::Mx, Self::My];

    pub fn label(self) -> &'static str {
        match self {
            Self::E => "E",
            Self::C2z => "C2z",
            Self::Mx => "Mx",
            Self::My => "My",
        }
    }

    /// Orbit index (0-based) that index `i` is sent to.
    pub fn permutation(self) -> [usize; 4] {
        match self {
            Self::E => [0, 1, 2, 3],
            Self::C2z => [1, 0, 3, 2],
            Self::Mx => [2, 3, 0, 1],
            Self::My => [3, 2, 1, 0],
        }
    }

    /// Sign applied to each polar-vector component. A mirror flips only the
    /// component normal to its plane.
    pub fn vector_signs(self) -> [i8; 3] {
        match self {
            Self::E => [1, 1, 1],
            Self::C2z => [-1, -1, 1],
            Self::Mx => [-1, 1, 1],
            Self::My => [1, -1, 1],
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: GroupElement) -> GroupElement {
        let p = self.permutation();
        let q = other.permutation();
        let composed = [p[q[0]], p[q[1]], p[q[2]], p[q[3]]];
        Self::ALL
            .into_iter()
            .find(|g| g.permutation() == composed)
            .expect("the four elements are closed under composition")
    }

    pub fn inverse(self) -> GroupElement {
        // every element is an involution
        self
    }

    /// Action on a fractional position.
    pub fn act_on_position<T: Exact>(self, p: Vec3<T>) -> Vec3<T> {
        let one = T::one();
        match self {
            Self::E => p,
            Self::C2z => [one - p[0], one - p[1], p[2]],
            Self::Mx => [one - p[0], p[1], p[2]],
            Self::My => [p[0], one - p[1], p[2]],
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for GroupElement {
    type Err = SymmetryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "e" => Ok(Self::E),
            "c2z" | "c2" => Ok(Self::C2z),
            "mx" => Ok(Self::Mx),
            "my" => Ok(Self::My),
            _ => Err(SymmetryError::UnknownElement(s.to_owned())),
        }
    }
}

/// The four one-dimensional irreps τ1..τ4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Irrep {
    Tau1,
    Tau2,
    Tau3,
    Tau4,
}

impl Irrep {
    pub const ALL: [Irrep; 4] = [Self::Tau1, Self::Tau2, Self::Tau3, Self::Tau4];

    /// 1-based index ν.
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(index: usize) -> Option<Irrep> {
        Self::ALL.get(index.checked_sub(1)?).copied()
    }

    /// Subgroup left invariant by a field of this irrep.
    pub fn destination_group(self) -> &'static str {
        match self {
            Self::Tau1 => "Pmm2",
            Self::Tau2 => "P112",
            Self::Tau3 => "Pm11",
            Self::Tau4 => "P1m1",
        }
    }

    /// Stored character table.
    pub fn character(self, g: GroupElement) -> i8 {
        use GroupElement::*;
        match (self, g) {
            (_, E) | (Self::Tau1, _) => 1,
            (Self::Tau2, C2z) => 1,
            (Self::Tau2, _) => -1,
            (Self::Tau3, Mx) => 1,
            (Self::Tau3, _) => -1,
            (Self::Tau4, My) => 1,
            (Self::Tau4, _) => -1,
        }
    }

    pub fn characters(self) -> [(GroupElement, i8); 4] {
        GroupElement::ALL.map(|g| (g, self.character(g)))
    }
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tau{}", self.index())
    }
}

impl std::str::FromStr for Irrep {
    type Err = SymmetryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let digits = lower.trim_start_matches("tau").trim_start_matches('t');
        digits
            .parse::<usize>()
            .ok()
            .and_then(Irrep::from_index)
            .ok_or_else(|| SymmetryError::UnknownIrrep(s.to_owned()))
    }
}

/// Row of the basis table within one irrep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Version {
    VectorI,
    VectorII,
    VectorIII,
    Scalar,
}

impl Version {
    pub const ALL: [Version; 4] = [Self::VectorI, Self::VectorII, Self::VectorIII, Self::Scalar];
    pub const VECTORS: [Version; 3] = [Self::VectorI, Self::VectorII, Self::VectorIII];

    /// Letter of the free parameter (A, B, C, P).
    pub fn parameter_letter(self) -> char {
        match self {
            Self::VectorI => 'A',
            Self::VectorII => 'B',
            Self::VectorIII => 'C',
            Self::Scalar => 'P',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::VectorI => "vectorI",
            Self::VectorII => "vectorII",
            Self::VectorIII => "vectorIII",
            Self::Scalar => "scalar",
        }
    }
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Version {
    type Err = SymmetryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vectori" | "i" | "a" => Ok(Self::VectorI),
            "vectorii" | "ii" | "b" => Ok(Self::VectorII),
            "vectoriii" | "iii" | "c" => Ok(Self::VectorIII),
            "scalar" | "p" => Ok(Self::Scalar),
            _ => Err(SymmetryError::UnknownVersion(s.to_owned())),
        }
    }
}

type VectorRow = [[i8; 3]; 4];

const X: [i8; 3] = [1, 0, 0];
const NX: [i8; 3] = [-1, 0, 0];
const Y: [i8; 3] = [0, 1, 0];
const NY: [i8; 3] = [0, -1, 0];
const Z: [i8; 3] = [0, 0, 1];
const NZ: [i8; 3] = [0, 0, -1];

/// Polar-vector rows, indexed `[irrep][version]`.
const VECTOR_ROWS: [[VectorRow; 3]; 4] = [
    // τ1 -> Pmm2
    [[X, NX, NX, X], [Y, NY, Y, NY], [Z, Z, Z, Z]],
    // τ2 -> P112
    [[X, NX, X, NX], [Y, NY, NY, Y], [Z, Z, NZ, NZ]],
    // τ3 -> Pm11
    [[X, X, NX, NX], [Y, Y, Y, Y], [Z, NZ, Z, NZ]],
    // τ4 -> P1m1
    [[X, X, X, X], [Y, Y, NY, NY], [Z, NZ, NZ, Z]],
];

/// Scalar rows P1..P4.
const SCALAR_ROWS: [[i8; 4]; 4] = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]];

/// Table entry for a vector row as raw integers.
pub fn vector_row(irrep: Irrep, version: Version) -> Option<VectorRow> {
    let v = Version::VECTORS.iter().position(|&w| w == version)?;
    Some(VECTOR_ROWS[irrep as usize][v])
}

pub fn scalar_row(irrep: Irrep) -> [i8; 4] {
    SCALAR_ROWS[irrep as usize]
}

/// A function on the four orbit positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldOn4i<T> {
    Vector([Vec3<T>; 4]),
    Scalar([T; 4]),
}

impl<T: Exact> FieldOn4i<T> {
    pub fn zero_vector() -> Self {
        Self::Vector([[T::zero(); 3]; 4])
    }

    pub fn is_vector(&self) -> bool {
        matches!(self, Self::Vector(_))
    }

    pub fn vectors(&self) -> Option<&[Vec3<T>; 4]> {
        match self {
            Self::Vector(v) => Some(v),
            Self::Scalar(_) => None,
        }
    }

    pub fn scale(&self, s: T) -> Self {
        match self {
            Self::Vector(v) => Self::Vector(v.map(|p| p.map(|c| c * s))),
            Self::Scalar(v) => Self::Scalar(v.map(|c| c * s)),
        }
    }

    /// Sum-over-positions inner product. Mixed kinds give `None`.
    pub fn inner(&self, other: &Self) -> Option<T> {
        match (self, other) {
            (Self::Vector(a), Self::Vector(b)) => Some(
                a.iter()
                    .zip(b)
                    .flat_map(|(p, q)| p.iter().zip(q).map(|(&u, &v)| u * v))
                    .fold(T::zero(), |acc, t| acc + t),
            ),
            (Self::Scalar(a), Self::Scalar(b)) => Some(a.iter().zip(b).fold(T::zero(), |acc, (&u, &v)| acc + u * v)),
            _ => None,
        }
    }

    /// Maps the scalar type, e.g. integers to floats.
    pub fn map<U: Exact>(&self, f: impl Fn(T) -> U) -> FieldOn4i<U> {
        match self {
            Self::Vector(v) => FieldOn4i::Vector(v.map(|p| p.map(&f))),
            Self::Scalar(v) => FieldOn4i::Scalar(v.map(&f)),
        }
    }
}

/// One basis row as a field.
pub fn basis_vector<T: Exact>(irrep: Irrep, version: Version) -> FieldOn4i<T> {
    match vector_row(irrep, version) {
        Some(row) => FieldOn4i::Vector(row.map(|p| p.map(T::from_sign))),
        None => FieldOn4i::Scalar(scalar_row(irrep).map(T::from_sign)),
    }
}

/// Free parameters A_ν, B_ν, C_ν, P_ν for ν = 1..4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet<T> {
    values: [[T; 4]; 4],
}

impl<T: Exact> Default for CoefficientSet<T> {
    fn default() -> Self {
        Self {
            values: [[T::zero(); 4]; 4],
        }
    }
}

impl<T: Exact> CoefficientSet<T> {
    pub fn get(&self, irrep: Irrep, version: Version) -> T {
        self.values[irrep as usize][version as usize]
    }

    pub fn set(&mut self, irrep: Irrep, version: Version, value: T) -> &mut Self {
        self.values[irrep as usize][version as usize] = value;
        self
    }

    pub fn with(mut self, irrep: Irrep, version: Version, value: T) -> Self {
        self.set(irrep, version, value);
        self
    }

    /// `(irrep, version, value)` for all 16 parameters in table order.
    pub fn iter(&self) -> impl Iterator<Item = (Irrep, Version, T)> + '_ {
        Irrep::ALL
            .into_iter()
            .flat_map(move |i| Version::ALL.into_iter().map(move |v| (i, v, self.get(i, v))))
    }
}

/// Parses a parameter name such as `A4` or `p1`.
pub fn parse_parameter_name(name: &str) -> Result<(Irrep, Version), SymmetryError> {
    let err = || SymmetryError::UnknownCoefficient(name.to_owned());
    let mut chars = name.chars();
    let letter = chars.next().ok_or_else(err)?.to_ascii_uppercase();
    let version = Version::ALL
        .into_iter()
        .find(|v| v.parameter_letter() == letter)
        .ok_or_else(err)?;
    let irrep = chars
        .as_str()
        .parse::<usize>()
        .ok()
        .and_then(Irrep::from_index)
        .ok_or_else(err)?;
    Ok((irrep, version))
}

/// Σ coefficient × row over the 12 polar-vector rows.
pub fn compose_field<T: Exact>(coeffs: &CoefficientSet<T>) -> FieldOn4i<T> {
    let mut out = [[T::zero(); 3]; 4];
    for irrep in Irrep::ALL {
        for version in Version::VECTORS {
            let c = coeffs.get(irrep, version);
            if c == T::zero() {
                continue;
            }
            let row = vector_row(irrep, version).expect("vector version");
            for (slot, entry) in out.iter_mut().zip(row) {
                for (o, s) in slot.iter_mut().zip(entry) {
                    *o = *o + c * T::from_sign(s);
                }
            }
        }
    }
    FieldOn4i::Vector(out)
}

/// Σ coefficient × row over the 4 scalar rows.
pub fn compose_scalar_field<T: Exact>(coeffs: &CoefficientSet<T>) -> FieldOn4i<T> {
    let mut out = [T::zero(); 4];
    for irrep in Irrep::ALL {
        let c = coeffs.get(irrep, Version::Scalar);
        for (o, s) in out.iter_mut().zip(scalar_row(irrep)) {
            *o = *o + c * T::from_sign(s);
        }
    }
    FieldOn4i::Scalar(out)
}

/// Inverse of [`compose_field`] / [`compose_scalar_field`]. The rows of each
/// kind are mutually orthogonal with squared norm 4, so each coefficient is
/// an inner product divided by 4. Use a field type (floats, rationals) when
/// the input is not a combination with integer coefficients.
pub fn project_field<T: Exact>(field: &FieldOn4i<T>) -> CoefficientSet<T> {
    let mut out = CoefficientSet::default();
    let versions: &[Version] = if field.is_vector() {
        &Version::VECTORS
    } else {
        &[Version::Scalar]
    };
    for irrep in Irrep::ALL {
        for &version in versions {
            let row = basis_vector::<T>(irrep, version);
            let dot = field.inner(&row).expect("same kind");
            out.set(irrep, version, dot / T::four());
        }
    }
    out
}

/// `(g·S)(g·r_i) = R(g) S(r_i)`: the value at index `g(i)` is the
/// sign-transformed value from index `i`. Scalars are only permuted.
pub fn apply_group_element<T: Exact>(g: GroupElement, field: &FieldOn4i<T>) -> FieldOn4i<T> {
    let perm = g.permutation();
    match field {
        FieldOn4i::Vector(values) => {
            let signs = g.vector_signs().map(T::from_sign);
            let mut out = [[T::zero(); 3]; 4];
            for (i, v) in values.iter().enumerate() {
                out[perm[i]] = [v[0] * signs[0], v[1] * signs[1], v[2] * signs[2]];
            }
            FieldOn4i::Vector(out)
        }
        FieldOn4i::Scalar(values) => {
            let mut out = [T::zero(); 4];
            for (i, &v) in values.iter().enumerate() {
                out[perm[i]] = v;
            }
            FieldOn4i::Scalar(out)
        }
    }
}

/// Characters read off the scalar row: χ(g) is the entry at the index that
/// `g` sends position 1 to.
pub fn characters_from_table(irrep: Irrep) -> [(GroupElement, i8); 4] {
    let row = scalar_row(irrep);
    GroupElement::ALL.map(|g| (g, row[g.permutation()[0]]))
}

/// Elements leaving `field` unchanged.
pub fn stabilizer<T: Exact>(field: &FieldOn4i<T>) -> Vec<GroupElement> {
    GroupElement::ALL
        .into_iter()
        .filter(|&g| apply_group_element(g, field) == *field)
        .collect()
}

/// Space-group symbol of a stabilizer subgroup.
pub fn subgroup_symbol(elements: &[GroupElement]) -> &'static str {
    use GroupElement::*;
    let has = |g| elements.contains(&g);
    match (has(C2z), has(Mx), has(My)) {
        (true, true, true) => "Pmm2",
        (true, false, false) => "P112",
        (false, true, false) => "Pm11",
        (false, false, true) => "P1m1",
        _ => "P1",
    }
}

/// In-plane τ4 displacement (parameters A4, B4) lifted by the τ1 vertical
/// component C1. With generic in-plane parameters only `{E, My}` survives.
pub fn sam_displacement_field<T: Exact + PartialOrd + fmt::Display>(
    a4: T,
    b4: T,
    c1: T,
) -> Result<FieldOn4i<T>, SymmetryError> {
    if c1 < T::zero() {
        return Err(SymmetryError::NegativeVertical(c1.to_string()));
    }
    let coeffs = CoefficientSet::default()
        .with(Irrep::Tau4, Version::VectorI, a4)
        .with(Irrep::Tau4, Version::VectorII, b4)
        .with(Irrep::Tau1, Version::VectorIII, c1);
    Ok(compose_field(&coeffs))
}

/// Orbit index (0-based) of the image of a fractional point `(u, v)` of the
/// cell, taking the asymmetric unit `[0, 1/2) × [0, 1/2)` as position 1.
pub fn orbit_index_of(u: f64, v: f64) -> usize {
    match (u < 0.5, v < 0.5) {
        (true, true) => 0,
        (false, false) => 1,
        (false, true) => 2,
        (true, false) => 3,
    }
}

/// Vector value of `field` at the orbit position containing `(u, v)`.
pub fn sample_vector<T: Exact>(field: &FieldOn4i<T>, u: f64, v: f64) -> Option<Vec3<T>> {
    field.vectors().map(|vals| vals[orbit_index_of(u, v)])
}
