//! Serde shapes of the manifest file. Every integer is a decimal string.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An integer written as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Dec<T>(pub T);

impl<T: Display> Serialize for Dec<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de, T: FromStr> Deserialize<'de> for Dec<T>
where
    T::Err: Display,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map(Dec).map_err(|e| D::Error::custom(format!("{s:?} is not a decimal integer here: {e}")))
    }
}

/// Rows of decimal strings. `[]` is the zero matrix of whatever shape the
/// context requires.
pub type MatrixDef = Vec<Vec<Dec<BigInt>>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawManifest {
    pub version: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub group: BTreeMap<String, GroupDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub family: BTreeMap<String, FamilyDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub category: BTreeMap<String, CategoryDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub module: BTreeMap<String, ModuleDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complex: BTreeMap<String, ComplexDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub icw: BTreeMap<String, IcwDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gcw: BTreeMap<String, GcwDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bifunctor: BTreeMap<String, BifunctorDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub instance: BTreeMap<String, InstanceDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sequences: BTreeMap<String, SeqSpecDef>,
}

pub const SECTIONS: [&str; 11] =
    ["version", "group", "family", "category", "module", "complex", "icw", "gcw", "bifunctor", "instance", "sequences"];

impl RawManifest {
    pub fn empty() -> Self {
        RawManifest {
            version: super::MANIFEST_VERSION.to_string(),
            group: BTreeMap::new(),
            family: BTreeMap::new(),
            category: BTreeMap::new(),
            module: BTreeMap::new(),
            complex: BTreeMap::new(),
            icw: BTreeMap::new(),
            gcw: BTreeMap::new(),
            bifunctor: BTreeMap::new(),
            instance: BTreeMap::new(),
            sequences: BTreeMap::new(),
        }
    }
}

/// Canonical form `Z^rank ⊕ Z/t_1 ⊕ …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbGroupDef {
    pub rank: Dec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub torsion: Vec<Dec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDef {
    Trivial,
    Cyclic { order: Dec<usize> },
    Symmetric { degree: Dec<usize> },
    Dihedral { degree: Dec<usize> },
    Product { factors: Vec<String> },
    Permutations { degree: Dec<usize>, generators: Vec<Vec<Dec<usize>>> },
    /// `table[a][b] = a·b`; element 0 is the identity.
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        table: Vec<Vec<Dec<usize>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

/// Subgroups are written as lists of element labels that generate them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyDef {
    All { group: String },
    Trivial { group: String },
    Closure { group: String, seeds: Vec<Vec<String>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDef {
    pub label: String,
    pub dom: String,
    pub cod: String,
}

/// `after ∘ before = result`, by morphism label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionDef {
    pub after: String,
    pub before: String,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CategoryDef {
    /// `N` or `RF` truncated to objects `0..=truncation`.
    Standard { shape: String, truncation: Dec<usize> },
    /// A group as a one-object category.
    Group { group: String },
    Orbit { family: String },
    Opposite { of: String },
    Explicit {
        name: String,
        objects: Vec<String>,
        morphisms: Vec<MorphismDef>,
        /// Identity morphism label per object.
        identities: Vec<String>,
        /// Every composable pair of non-identity morphisms.
        composition: Vec<CompositionDef>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceDef {
    Covariant,
    Contravariant,
}

/// Values are canonical groups per object (in object order); the action of a
/// morphism is a matrix on canonical generators. Identities may be omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleDef {
    Explicit { category: String, variance: VarianceDef, values: Vec<AbGroupDef>, action: BTreeMap<String, MatrixDef> },
    /// Free on generators sitting at the listed objects.
    Free { category: String, variance: VarianceDef, generators: Vec<String> },
    Constant { category: String, variance: VarianceDef, group: AbGroupDef },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ComplexDef {
    /// `differentials[k]` maps degree `lo + k + 1` to `lo + k`, one matrix per
    /// object label; absent objects get zero.
    Explicit {
        category: String,
        variance: VarianceDef,
        lo: Dec<i64>,
        modules: Vec<ModuleDef>,
        differentials: Vec<BTreeMap<String, MatrixDef>>,
    },
    Cellular { icw: String },
    FixedPoints { gcw: String, orbit: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceDef {
    pub morphism: String,
    pub face: Dec<usize>,
    pub coeff: Dec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDef {
    pub label: String,
    pub object: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<FaceDef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IcwDef {
    Classifying { shape: String, truncation: Dec<usize> },
    /// `cells[n]` lists the `n`-cells.
    Explicit {
        category: String,
        cells: Vec<Vec<CellDef>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        valid_degree: Option<Dec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GFaceDef {
    pub face: Dec<usize>,
    pub element: String,
    pub coeff: Dec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GCellDef {
    pub label: String,
    /// Element labels generating the isotropy group.
    pub isotropy: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<GFaceDef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GcwDef {
    /// One of the shipped small examples, e.g. `z2_reflection_sphere`.
    Builtin { name: String },
    Point { group: String },
    FreeOrbit { group: String },
    Explicit { group: String, cells: Vec<Vec<GCellDef>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeDef {
    Components,
    Nerve,
}

/// One degree of an explicit bifunctor: `values[i][j]`, the index action per
/// index morphism label (one matrix per coefficient object) and the
/// coefficient action per coefficient morphism label (one matrix per index
/// object).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiDegreeDef {
    pub values: Vec<Vec<AbGroupDef>>,
    pub index_action: BTreeMap<String, Vec<MatrixDef>>,
    pub coeff_action: BTreeMap<String, Vec<MatrixDef>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BifunctorDef {
    Transport {
        index: String,
        orbit: String,
        recipe: RecipeDef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        top: Option<Dec<usize>>,
    },
    CosetPermutation { index: String, orbit: String },
    Constant { index: String, coeff: String, group: AbGroupDef, degree: Dec<i64> },
    ConstantInIndex { index: String, complex: String },
    Shift { of: String, by: Dec<i64> },
    Pad { of: String, to: Dec<i64> },
    /// `differentials[k][i][j]` maps degree `lo + k + 1` to `lo + k`.
    Explicit { index: String, coeff: String, lo: Dec<i64>, degrees: Vec<BiDegreeDef>, differentials: Vec<Vec<Vec<MatrixDef>>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceDef {
    Gcw(String),
    Chains(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDef {
    /// The contravariant complex `D` over the index category.
    pub index_complex: String,
    pub orbit: String,
    pub source: SourceDef,
    pub coefficients: String,
    pub d: Dec<usize>,
    pub n: Dec<i64>,
    pub big_n: Dec<i64>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_exact_through: Option<Dec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SeqTailDef {
    BoundedBy(Dec<i64>),
    StrictlyIncreasingUnbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDef {
    pub prefix: Vec<Dec<i64>>,
    pub tail: SeqTailDef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileTailDef {
    BoundedBelow(Dec<i64>),
    ConstantBelow { from: Dec<i64>, group: AbGroupDef },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDef {
    /// Degree (decimal string) to group.
    pub values: BTreeMap<String, AbGroupDef>,
    pub tail: ProfileTailDef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqSpecDef {
    pub m: SequenceDef,
    pub n: SequenceDef,
    pub profile: ProfileDef,
    pub p: Dec<i64>,
}
