//! Suite manifest: which base codes to build, which pairs to compose, and
//! the declared generator total the loaded suite is compared against.

use super::{build_base_code, tensor_product, validate_code, CodeInstance, Family, Params};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCodeSpec {
    pub family: Family,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteManifest {
    pub base_codes: Vec<BaseCodeSpec>,
    pub product_pairs: Vec<(String, String)>,
    pub declared_total_generators: u64,
}

#[derive(Debug, Clone)]
pub struct LoadedSuite {
    /// Base codes first (manifest order), then products (pair order).
    pub instances: Vec<CodeInstance>,
    pub base_count: usize,
    pub total_generators: u64,
    pub declared_total_generators: u64,
}

impl LoadedSuite {
    pub fn declared_matches(&self) -> bool {
        self.total_generators == self.declared_total_generators
    }

    pub fn instance(&self, id: &str) -> Option<&CodeInstance> {
        self.instances.iter().find(|c| c.id == id)
    }
}

fn spec(family: Family, key: &str, value: serde_json::Value) -> BaseCodeSpec {
    let mut params = Params::new();
    params.insert(key.to_string(), value);
    BaseCodeSpec { family, params }
}

/// The shipped suite: 24 base codes and 168 products. Pairs are chosen by
/// a deterministic, seedless rule: rank all 276 unordered base pairs by
/// combined generator count (descending), break ties by the id pair in
/// ascending lexicographic order, and keep the first 168.
pub fn build_default_manifest() -> SuiteManifest {
    let mut base_codes = Vec::new();
    for d in [3u32, 5, 7] {
        base_codes.push(spec(Family::RotatedSurface, "d", serde_json::json!(d)));
    }
    for d in [3u32, 5, 7] {
        base_codes.push(spec(Family::ColorHex, "d", serde_json::json!(d)));
    }
    for d in [3u32, 5, 7] {
        base_codes.push(spec(Family::ColorSqoct, "d", serde_json::json!(d)));
    }
    for m in [2u32, 3, 4] {
        base_codes.push(spec(Family::Iceberg, "m", serde_json::json!(m)));
    }
    for level in [1u32, 2] {
        base_codes.push(spec(Family::Hypercube, "level", serde_json::json!(level)));
    }
    for n in [72u32, 90] {
        base_codes.push(spec(Family::Bb, "n", serde_json::json!(n)));
    }
    for name in super::named::NAMED_IDS {
        base_codes.push(spec(Family::Named, "name", serde_json::json!(name)));
    }

    let bases: Vec<CodeInstance> = base_codes
        .iter()
        .map(|s| build_base_code(s.family, &s.params).expect("default base code"))
        .collect();
    let mut ranked: Vec<(u32, String, String)> = Vec::new();
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            let (a, b) = if bases[i].id < bases[j].id {
                (&bases[i], &bases[j])
            } else {
                (&bases[j], &bases[i])
            };
            ranked.push((
                a.generator_count() + b.generator_count(),
                a.id.clone(),
                b.id.clone(),
            ));
        }
    }
    ranked.sort_by(|l, r| r.0.cmp(&l.0).then_with(|| (&l.1, &l.2).cmp(&(&r.1, &r.2))));
    let product_pairs = ranked
        .into_iter()
        .take(168)
        .map(|(_, a, b)| (a, b))
        .collect();

    SuiteManifest {
        base_codes,
        product_pairs,
        declared_total_generators: 16_340,
    }
}

/// Build and validate every instance in the manifest. The computed
/// generator total may differ from the declared one; that is reported,
/// not rejected. Unresolvable pair ids and duplicate ids are errors, as
/// is any instance failing validation.
pub fn load_suite(manifest: &SuiteManifest) -> Result<LoadedSuite> {
    let mut instances: Vec<CodeInstance> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for spec in &manifest.base_codes {
        let code = build_base_code(spec.family, &spec.params)?;
        if index.insert(code.id.clone(), instances.len()).is_some() {
            return Err(Error::DuplicateCodeId(code.id));
        }
        instances.push(code);
    }
    let base_count = instances.len();
    for (id_a, id_b) in &manifest.product_pairs {
        let a = *index
            .get(id_a)
            .ok_or_else(|| Error::UnknownCodeId(id_a.clone()))?;
        let b = *index
            .get(id_b)
            .ok_or_else(|| Error::UnknownCodeId(id_b.clone()))?;
        let product = tensor_product(&instances[a], &instances[b]);
        if index.insert(product.id.clone(), instances.len()).is_some() {
            return Err(Error::DuplicateCodeId(product.id));
        }
        instances.push(product);
    }

    let failures: Vec<(String, String)> = instances
        .par_iter()
        .filter_map(|code| {
            let report = validate_code(code);
            if report.valid {
                None
            } else {
                Some((code.id.clone(), format!("{report:?}")))
            }
        })
        .collect();
    if let Some((id, reason)) = failures.into_iter().next() {
        return Err(Error::MalformedCode { id, reason });
    }

    let total_generators = instances
        .iter()
        .map(|c| c.generator_count() as u64)
        .sum();
    Ok(LoadedSuite {
        instances,
        base_count,
        total_generators,
        declared_total_generators: manifest.declared_total_generators,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteStats {
    pub total_codes: usize,
    pub base_codes: usize,
    pub product_codes: usize,
    pub total_generators: u64,
    pub declared_total_generators: u64,
    pub declared_matches: bool,
    pub base_generator_range: (u32, u32),
    pub product_generator_range: (u32, u32),
    pub overall_generator_range: (u32, u32),
    pub family_counts: BTreeMap<String, usize>,
}

pub fn suite_stats(suite: &LoadedSuite) -> SuiteStats {
    fn range(counts: impl Iterator<Item = u32>) -> (u32, u32) {
        counts.fold((u32::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)))
    }
    let base = &suite.instances[..suite.base_count];
    let products = &suite.instances[suite.base_count..];
    let mut family_counts = BTreeMap::new();
    for code in &suite.instances {
        *family_counts.entry(code.family.to_string()).or_insert(0) += 1;
    }
    SuiteStats {
        total_codes: suite.instances.len(),
        base_codes: base.len(),
        product_codes: products.len(),
        total_generators: suite.total_generators,
        declared_total_generators: suite.declared_total_generators,
        declared_matches: suite.declared_matches(),
        base_generator_range: range(base.iter().map(|c| c.generator_count())),
        product_generator_range: range(products.iter().map(|c| c.generator_count())),
        overall_generator_range: range(suite.instances.iter().map(|c| c.generator_count())),
        family_counts,
    }
}
