//! Stabilizer-code construction, validation, and composition.
//!
//! A [`CodeInstance`] is a concrete generator list plus metadata. Base
//! codes come from [`build_base_code`]; larger instances are tensor
//! products of two bases. Validation never panics on bad input: it returns
//! a [`ValidationReport`] listing every violated invariant.

mod distance;
mod families;
mod manifest;
mod named;

pub use distance::{brute_force_distance, Distance};
pub use manifest::{
    build_default_manifest, load_suite, suite_stats, BaseCodeSpec, LoadedSuite, SuiteManifest,
    SuiteStats,
};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RotatedSurface,
    ColorHex,
    ColorSqoct,
    Iceberg,
    Hypercube,
    Bb,
    Named,
    TensorProduct,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Family::RotatedSurface => "rotated_surface",
            Family::ColorHex => "color_hex",
            Family::ColorSqoct => "color_sqoct",
            Family::Iceberg => "iceberg",
            Family::Hypercube => "hypercube",
            Family::Bb => "bb",
            Family::Named => "named",
            Family::TensorProduct => "tensor_product",
        };
        f.write_str(name)
    }
}

/// Construction parameters for one base code, e.g. `{"d": 3}` or
/// `{"name": "steane_7"}`. Kept ordered so manifests serialize stably.
pub type Params = BTreeMap<String, serde_json::Value>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeInstance {
    pub id: String,
    pub family: Family,
    pub num_qubits: u32,
    /// Stabilizer generators; the count is the instance's score weight.
    pub generators: Vec<PauliString>,
    pub num_logical: u32,
    pub distance: u32,
    /// Component ids for tensor products.
    pub parents: Option<(String, String)>,
}

impl CodeInstance {
    pub fn generator_count(&self) -> u32 {
        self.generators.len() as u32
    }
}

#[derive(Serialize, Deserialize)]
struct CodeInstanceRepr {
    id: String,
    family: Family,
    num_qubits: u32,
    num_logical: u32,
    distance: u32,
    generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    parents: Option<(String, String)>,
}

impl Serialize for CodeInstance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CodeInstanceRepr {
            id: self.id.clone(),
            family: self.family,
            num_qubits: self.num_qubits,
            num_logical: self.num_logical,
            distance: self.distance,
            generators: self.generators.iter().map(|g| g.emit_sparse()).collect(),
            parents: self.parents.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CodeInstance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = CodeInstanceRepr::deserialize(deserializer)?;
        let generators = repr
            .generators
            .iter()
            .map(|text| PauliString::parse(text, repr.num_qubits))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(CodeInstance {
            id: repr.id,
            family: repr.family,
            num_qubits: repr.num_qubits,
            generators,
            num_logical: repr.num_logical,
            distance: repr.distance,
            parents: repr.parents,
        })
    }
}

/// Every invariant violation found in a code instance. `valid` is the
/// conjunction; the individual fields say what went wrong where.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub id: String,
    pub generator_count: u32,
    /// Index pairs of anticommuting generators.
    pub commutation_failures: Vec<(usize, usize)>,
    /// Indices of generators with an imaginary phase.
    pub non_hermitian: Vec<usize>,
    /// Indices of generators whose length differs from num_qubits.
    pub length_mismatches: Vec<usize>,
    /// Symplectic GF(2) rank of the generator set.
    pub rank: u32,
    pub independent: bool,
    /// Some signed product of generators equals minus identity.
    pub minus_identity_in_group: bool,
    /// Declared num_logical equals n minus generator count.
    pub logical_count_consistent: bool,
    pub valid: bool,
}

fn symplectic_key(p: &PauliString) -> BitVec {
    let n = p.num_qubits() as usize;
    let mut key = BitVec::zeros(2 * n);
    for i in p.x_bits().iter_ones() {
        key.set(i, true);
    }
    for i in p.z_bits().iter_ones() {
        key.set(n + i, true);
    }
    key
}

/// Check every CodeInstance invariant, reporting all failures at once.
pub fn validate_code(code: &CodeInstance) -> ValidationReport {
    let gens = &code.generators;
    let mut commutation_failures = Vec::new();
    let mut non_hermitian = Vec::new();
    let mut length_mismatches = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.num_qubits() != code.num_qubits {
            length_mismatches.push(i);
        }
        if !g.is_hermitian() {
            non_hermitian.push(i);
        }
    }
    if length_mismatches.is_empty() {
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if !gens[i].commutes_unchecked(&gens[j]) {
                    commutation_failures.push((i, j));
                }
            }
        }
    }

    // sign-tracking elimination: a dependent row reduces to bare identity
    // (redundant generator) or to -identity (forbidden group element)
    let mut rank = 0u32;
    let mut minus_identity_in_group = false;
    if length_mismatches.is_empty() {
        let mut basis: Vec<(usize, PauliString)> = Vec::new();
        for g in gens {
            let mut row = g.clone();
            for (pivot, b) in &basis {
                let n = row.num_qubits() as usize;
                let hit = if *pivot < n {
                    row.x_bits().get(*pivot)
                } else {
                    row.z_bits().get(*pivot - n)
                };
                if hit {
                    row.mul_assign_unchecked(b);
                }
            }
            let key = symplectic_key(&row);
            match key.first_one() {
                Some(pivot) => {
                    rank += 1;
                    basis.push((pivot, row));
                }
                None => {
                    if row.phase() == 2 {
                        minus_identity_in_group = true;
                    }
                }
            }
        }
    }
    let independent = rank as usize == gens.len() && length_mismatches.is_empty();
    let logical_count_consistent =
        code.num_qubits >= code.generator_count()
            && code.num_qubits - code.generator_count() == code.num_logical;
    let valid = commutation_failures.is_empty()
        && non_hermitian.is_empty()
        && length_mismatches.is_empty()
        && independent
        && !minus_identity_in_group
        && logical_count_consistent;
    ValidationReport {
        id: code.id.clone(),
        generator_count: code.generator_count(),
        commutation_failures,
        non_hermitian,
        length_mismatches,
        rank,
        independent,
        minus_identity_in_group,
        logical_count_consistent,
        valid,
    }
}

/// Disjoint-support composition of two codes. `b`'s qubits are appended
/// after `a`'s; both generator lists are identity-extended to the joint
/// register. Distance is the minimum of the parts. An empty code is the
/// unit of the construction.
pub fn tensor_product(a: &CodeInstance, b: &CodeInstance) -> CodeInstance {
    if b.num_qubits == 0 && b.generators.is_empty() {
        return a.clone();
    }
    if a.num_qubits == 0 && a.generators.is_empty() {
        return b.clone();
    }
    let n = a.num_qubits + b.num_qubits;
    let mut generators = Vec::with_capacity(a.generators.len() + b.generators.len());
    for g in &a.generators {
        generators.push(g.resized(n));
    }
    for g in &b.generators {
        generators.push(g.shifted(a.num_qubits, n));
    }
    CodeInstance {
        id: format!("{}__{}", a.id, b.id),
        family: Family::TensorProduct,
        num_qubits: n,
        generators,
        num_logical: a.num_logical + b.num_logical,
        distance: a.distance.min(b.distance),
        parents: Some((a.id.clone(), b.id.clone())),
    }
}

pub(crate) fn int_param(params: &Params, key: &str) -> Result<u64> {
    params
        .get(key)
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::UnsupportedParams(format!("missing integer parameter {key:?}")))
}

pub(crate) fn str_param<'p>(params: &'p Params, key: &str) -> Result<&'p str> {
    params
        .get(key)
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::UnsupportedParams(format!("missing string parameter {key:?}")))
}

/// Construct one base code from its family and parameters.
pub fn build_base_code(family: Family, params: &Params) -> Result<CodeInstance> {
    match family {
        Family::RotatedSurface => families::rotated_surface(int_param(params, "d")? as u32),
        Family::ColorHex => families::color_hex(int_param(params, "d")? as u32),
        Family::ColorSqoct => families::color_sqoct(int_param(params, "d")? as u32),
        Family::Iceberg => families::iceberg(int_param(params, "m")? as u32),
        Family::Hypercube => families::hypercube(int_param(params, "level")? as u32),
        Family::Bb => families::bb(int_param(params, "n")? as u32),
        Family::Named => named::named_code(str_param(params, "name")?),
        Family::TensorProduct => Err(Error::UnsupportedParams(
            "tensor products are built from parents, not parameters".into(),
        )),
    }
}

/// Helper shared by the family constructors: assemble an instance from
/// X-type and Z-type support masks (CSS form) and fill in the counts.
pub(crate) fn css_instance(
    id: &str,
    family: Family,
    num_qubits: u32,
    x_rows: &[BitVec],
    z_rows: &[BitVec],
    distance: u32,
) -> CodeInstance {
    let mut generators = Vec::with_capacity(x_rows.len() + z_rows.len());
    for row in x_rows {
        generators.push(PauliString::from_parts(
            row.resized(num_qubits as usize),
            BitVec::zeros(num_qubits as usize),
            0,
        ));
    }
    for row in z_rows {
        generators.push(PauliString::from_parts(
            BitVec::zeros(num_qubits as usize),
            row.resized(num_qubits as usize),
            0,
        ));
    }
    let count = generators.len() as u32;
    CodeInstance {
        id: id.to_string(),
        family,
        num_qubits,
        generators,
        num_logical: num_qubits - count,
        distance,
        parents: None,
    }
}
