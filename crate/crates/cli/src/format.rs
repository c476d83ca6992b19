//! JSON formats for groups, instances and corpus entries.

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use indexp::arith::{CycNumber, FieldSpec};
use indexp::char::FIrreducibleSpec;
use indexp::classifier::SchurData;
use indexp::group::{FiniteGroup, IndexPContext, Subgroup};
use indexp::oracle::Setting;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    /// Generators as 1-based image lists.
    Perm { degree: usize, generators: Vec<Vec<usize>> },
    /// Multiplication table on labels `0..n`.
    Cayley { table: Vec<Vec<usize>> },
}

/// An element given as a permutation (perm groups) or a table label
/// (cayley groups).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Label(usize),
    Perm(Vec<usize>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        Ok(match self {
            GroupSpec::Perm { degree, generators } => FiniteGroup::from_perm_generators(*degree, generators)?,
            GroupSpec::Cayley { table } => FiniteGroup::from_cayley_table(table)?,
        })
    }

    /// Index of an element in the built group.
    pub fn resolve(&self, g: &FiniteGroup, e: &ElementRef) -> Result<usize> {
        match (self, e) {
            (GroupSpec::Perm { degree, .. }, ElementRef::Perm(images)) => {
                if images.len() != *degree {
                    bail!("permutation {images:?} does not have degree {degree}");
                }
                g.find_permutation(images).ok_or_else(|| anyhow!("permutation {images:?} is not in the group"))
            }
            (GroupSpec::Cayley { table }, ElementRef::Label(a)) => {
                // the builder swaps the identity's label with 0
                let e = (0..table.len()).find(|&e| table[e].iter().enumerate().all(|(i, &v)| v == i)).unwrap_or(0);
                let a = if *a == e {
                    0
                } else if *a == 0 {
                    e
                } else {
                    *a
                };
                Ok(g.check_element(a)?)
            }
            _ => bail!("element reference {e:?} does not match the group type"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaSelector {
    /// index into the canonical table of H
    pub index: usize,
    /// values on the classes of H, as printed in table output
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchurSpec {
    #[serde(default)]
    pub eta: Option<u64>,
    /// `[G-character index, Schur index]` pairs
    #[serde(default)]
    pub constituents: Vec<(usize, u64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub group: GroupSpec,
    pub subgroup: Vec<ElementRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<ElementRef>,
    pub field: u64,
    pub eta: EtaSelector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schur: Option<SchurSpec>,
}

/// A parsed instance.
pub struct Instance {
    pub setting: Setting,
    pub field: FieldSpec,
    pub eta: FIrreducibleSpec,
    pub schur: SchurData,
}

impl InstanceFile {
    pub fn load(&self) -> Result<Instance> {
        let g = Arc::new(self.group.build()?);
        let gens = self.subgroup.iter().map(|e| self.group.resolve(&g, e)).collect::<Result<Vec<_>>>()?;
        let h = Subgroup::generated(&g, &gens)?;
        let x = self.x.as_ref().map(|e| self.group.resolve(&g, e)).transpose()?;
        let ctx = IndexPContext::new(h, x)?;
        let setting = Setting::new(ctx)?;
        if self.field == 0 {
            bail!("field conductor must be positive");
        }
        let field = FieldSpec::new(self.field);
        let i = self.eta.index;
        if i >= setting.h_table.len() {
            bail!("eta index {i} out of range: H has {} irreducible characters", setting.h_table.len());
        }
        if let Some(fp) = &self.eta.fingerprint {
            let actual: Vec<String> = setting.h_table.character(i).values().iter().map(CycNumber::to_string).collect();
            if *fp != actual {
                bail!("eta fingerprint {fp:?} does not match character {i} with values {actual:?}");
            }
        }
        let schur = self.schur.clone().unwrap_or_default();
        let eta = setting.eta_spec(i, field, schur.eta)?;
        Ok(Instance { setting, field, eta, schur: SchurData { eta: schur.eta, constituents: schur.constituents } })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub case: u8,
    /// `null` when not applicable (cases 1 and 2)
    #[serde(default)]
    pub lambda: Option<CycNumber>,
    #[serde(default)]
    pub mu: Option<CycNumber>,
    pub count: usize,
    /// constituent orbits (G-table indices) with complex multiplicities
    pub constituents: Vec<ExpectedConstituent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedConstituent {
    pub orbit: Vec<usize>,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub instance: InstanceFile,
    pub expected: Expected,
    /// where the expected values are derived by hand
    pub provenance: String,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// All `*.json` entries directly inside `dir`, sorted by file name.
pub fn read_corpus(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .with_context(|| format!("reading corpus directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("corpus directory {} has no entries", dir.display());
    }
    paths.iter().map(|p| read_json(p)).collect()
}
