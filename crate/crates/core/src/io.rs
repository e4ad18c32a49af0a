//! JSON file formats. Complex numbers are `[re, im]`, matrices row-major,
//! indices 0-based.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Character, CyclicAction, FiniteGroup};
use crate::linalg::{from_nested, tidy, to_nested};
use crate::rep::{MatrixRep, NumConfig};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PermutationFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterFile {
    pub order: u32,
    pub exponents: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionFile {
    pub order: u32,
    pub auts: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorImage {
    pub element: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepFile {
    pub group: String,
    pub dim: usize,
    pub generators: Vec<GeneratorImage>,
}

/// Parses with serde_json and prefixes errors with `origin:line:col`.
pub fn parse<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}:{}:{}: {e}", e.line(), e.column())))
}

/// Either a full table or permutation generators, told apart by the
/// presence of `"table"`.
pub fn load_group(text: &str, origin: &str, cap: usize) -> Result<FiniteGroup> {
    let value: serde_json::Value = parse(text, origin)?;
    let is_table = value.get("table").is_some();
    if is_table {
        let f: TableFile = parse(text, origin)?;
        let n = f.table.len();
        let labels = f.labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        FiniteGroup::from_table(f.name, labels, &f.table, f.identity, cap)
    } else if value.get("generators").is_some() {
        let f: PermutationFile = parse(text, origin)?;
        FiniteGroup::from_permutations(f.name, f.degree, &f.generators, f.order, cap)
    } else {
        Err(Error::Parse(format!("{origin}: expected a \"table\" or \"generators\" field")))
    }
}

pub fn group_file(g: &FiniteGroup) -> TableFile {
    TableFile {
        name: g.name().to_string(),
        labels: Some(g.labels().to_vec()),
        identity: Some(g.identity()),
        table: g.rows(),
    }
}

pub fn load_character(text: &str, origin: &str, group: &FiniteGroup) -> Result<Character> {
    let f: CharacterFile = parse(text, origin)?;
    Character::new(group, f.order, &f.exponents)
}

pub fn character_file(chi: &Character) -> CharacterFile {
    CharacterFile { order: chi.order(), exponents: chi.exponents().iter().map(|&e| e as i64).collect() }
}

/// Structural parse only; validate with [`crate::group::validate_action`].
pub fn load_action(text: &str, origin: &str) -> Result<CyclicAction> {
    let f: ActionFile = parse(text, origin)?;
    Ok(CyclicAction::new(f.order, f.auts))
}

pub fn action_file(act: &CyclicAction) -> ActionFile {
    ActionFile { order: act.order(), auts: act.auts().to_vec() }
}

/// Generator images are expanded, verified and unitarized on load.
pub fn load_rep(text: &str, origin: &str, group: Arc<FiniteGroup>, cfg: &NumConfig) -> Result<MatrixRep> {
    let f: RepFile = parse(text, origin)?;
    let mut gens = Vec::with_capacity(f.generators.len());
    for g in &f.generators {
        let m = from_nested(&g.matrix)?;
        if m.nrows() != f.dim || m.ncols() != f.dim {
            return Err(Error::Dimension(format!("{origin}: image of {} is not {}×{}", g.element, f.dim, f.dim)));
        }
        gens.push((g.element, m));
    }
    if gens.is_empty() && group.order() > 1 {
        return Err(Error::NotGenerating { reached: 1, order: group.order() });
    }
    if gens.is_empty() {
        return Ok(MatrixRep::trivial(group, f.dim));
    }
    MatrixRep::from_generators(group, &gens, cfg)
}

pub fn rep_file(rep: &MatrixRep) -> RepFile {
    RepFile {
        group: rep.group().name().to_string(),
        dim: rep.dim(),
        generators: rep
            .generator_images()
            .into_iter()
            .map(|(element, m)| GeneratorImage { element, matrix: to_nested(&tidy(&m, 1e-12)) })
            .collect(),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn c4_table_file() {
        let text = r#"{"name": "C4", "labels": ["e","g","g2","g3"], "identity": 0,
            "table": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]}"#;
        let g = load_group(text, "c4.json", 96).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.mul(1, 3), 0);
    }

    #[test]
    fn s3_permutation_file() {
        let text = r#"{"name": "S3", "degree": 3, "generators": [[1,0,2],[1,2,0]]}"#;
        assert_eq!(load_group(text, "s3.json", 96).unwrap().order(), 6);
    }

    #[test]
    fn latin_error_and_locations() {
        let text = r#"{"name": "bad", "table": [[0,0,1,2],[1,2,3,0],[2,3,0,1],[3,0,1,2]]}"#;
        let err = load_group(text, "bad.json", 96).unwrap_err();
        assert!(err.to_string().contains("not a Latin square"), "{err}");

        let err = load_group("{\n  \"name\": 3,\n  \"table\": []\n}", "x.json", 96).unwrap_err();
        assert!(err.to_string().starts_with("parse error: x.json:2:"), "{err}");
        let err = load_group("{", "y.json", 96).unwrap_err();
        assert!(err.to_string().contains("y.json:1:1"), "{err}");
    }

    #[test]
    fn round_trips() {
        let f = zoo::fixture("C").unwrap();
        let g = f.group.clone();
        let text = to_json(&group_file(&g));
        assert_eq!(load_group(&text, "g", 96).unwrap(), *g);
        let chi = f.character.unwrap();
        assert_eq!(load_character(&to_json(&character_file(&chi)), "c", &g).unwrap(), chi);
        let act = f.action.unwrap();
        assert_eq!(load_action(&to_json(&action_file(&act)), "a").unwrap(), act);
        for (_, rep) in &f.kernel_reps {
            let back = load_rep(&to_json(&rep_file(rep)), "r", rep.group().clone(), &NumConfig::default()).unwrap();
            assert!(back.max_diff(rep) < 1e-12);
        }
    }
}
