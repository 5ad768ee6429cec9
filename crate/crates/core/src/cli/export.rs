//! Writing engine objects back in manifest form. Parsing the output of any
//! function here yields an equal object.

use std::collections::BTreeMap;

use super::format::*;
use crate::catmod::{CatModule, Variance};
use crate::cellspaces::{CatCWComplex, GCWComplex};
use crate::chainplex::{BiFunctorComplex, CatChainComplex};
use crate::error::{Error, Result};
use crate::exact_abelian::{FpAbGroup, IntMatrix};
use crate::fincat::{FinCategory, FinGroup, SubgroupFamily};
use crate::verify::{GradedSeqSpec, ProfileTail, SeqTail, Sequence};

pub fn ab_group_def(g: &FpAbGroup) -> AbGroupDef {
    AbGroupDef { rank: Dec(g.rank()), torsion: g.torsion().iter().cloned().map(Dec).collect() }
}

pub fn matrix_def(m: &IntMatrix) -> MatrixDef {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    m.to_rows().into_iter().map(|r| r.into_iter().map(Dec).collect()).collect()
}

fn variance_def(v: Variance) -> VarianceDef {
    match v {
        Variance::Covariant => VarianceDef::Covariant,
        Variance::Contravariant => VarianceDef::Contravariant,
    }
}

pub fn group_def(g: &FinGroup) -> GroupDef {
    GroupDef::Table {
        name: Some(g.name().to_string()),
        table: g.table().into_iter().map(|r| r.into_iter().map(Dec).collect()).collect(),
        labels: Some(g.labels().to_vec()),
    }
}

/// Each member is written with all of its elements as seeds.
pub fn family_def(group: &str, f: &SubgroupFamily) -> FamilyDef {
    let seeds = f.members.iter().map(|h| h.elements().iter().map(|&x| f.group.label(x).to_string()).collect()).collect();
    FamilyDef::Closure { group: group.to_string(), seeds }
}

fn check_labels(c: &FinCategory) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for f in 0..c.num_morphisms() {
        if !seen.insert(c.morphism_label(f)) {
            return Err(Error::Manifest(format!("{} has duplicate morphism label {:?}", c.name(), c.morphism_label(f))));
        }
    }
    Ok(())
}

pub fn category_def(c: &FinCategory) -> Result<CategoryDef> {
    check_labels(c)?;
    let label = |f: usize| c.morphism_label(f).to_string();
    let objects = c.object_labels().to_vec();
    let morphisms = (0..c.num_morphisms())
        .map(|f| MorphismDef { label: label(f), dom: objects[c.dom(f)].clone(), cod: objects[c.cod(f)].clone() })
        .collect();
    let mut composition = Vec::new();
    for g in 0..c.num_morphisms() {
        for f in 0..c.num_morphisms() {
            if c.is_identity(g) || c.is_identity(f) {
                continue;
            }
            if let Some(h) = c.try_compose(g, f) {
                composition.push(CompositionDef { after: label(g), before: label(f), result: label(h) });
            }
        }
    }
    Ok(CategoryDef::Explicit {
        name: c.name().to_string(),
        identities: (0..c.num_objects()).map(|o| label(c.identity(o))).collect(),
        objects,
        morphisms,
        composition,
    })
}

/// Free modules keep their generators; everything else is written out.
pub fn module_def(category: &str, m: &CatModule) -> ModuleDef {
    let base = &m.base;
    if let Some(marker) = &m.marker {
        return ModuleDef::Free {
            category: category.to_string(),
            variance: variance_def(m.variance),
            generators: marker.generators.iter().map(|&o| base.object_label(o).to_string()).collect(),
        };
    }
    let action = (0..base.num_morphisms())
        .filter(|&f| !base.is_identity(f))
        .map(|f| (base.morphism_label(f).to_string(), matrix_def(m.action[f].matrix())))
        .collect();
    ModuleDef::Explicit {
        category: category.to_string(),
        variance: variance_def(m.variance),
        values: m.values.iter().map(ab_group_def).collect(),
        action,
    }
}

pub fn complex_def(category: &str, c: &CatChainComplex) -> ComplexDef {
    let differentials = c
        .differentials
        .iter()
        .map(|d| {
            d.components
                .iter()
                .enumerate()
                .filter(|(_, h)| !h.is_zero())
                .map(|(o, h)| (c.base.object_label(o).to_string(), matrix_def(h.matrix())))
                .collect::<BTreeMap<_, _>>()
        })
        .collect();
    ComplexDef::Explicit {
        category: category.to_string(),
        variance: variance_def(c.variance),
        lo: Dec(c.lo),
        modules: c.modules.iter().map(|m| module_def(category, m)).collect(),
        differentials,
    }
}

pub fn icw_def(category: &str, x: &CatCWComplex) -> IcwDef {
    let cells = x
        .cells
        .iter()
        .enumerate()
        .map(|(n, row)| {
            row.iter()
                .enumerate()
                .map(|(i, &o)| CellDef {
                    label: x.labels[n][i].clone(),
                    object: x.base.object_label(o).to_string(),
                    boundary: x.boundaries[n][i]
                        .iter()
                        .map(|t| FaceDef { morphism: x.base.morphism_label(t.morphism).to_string(), face: Dec(t.face), coeff: Dec(t.coeff) })
                        .collect(),
                })
                .collect()
        })
        .collect();
    IcwDef::Explicit { category: category.to_string(), cells, valid_degree: x.valid_degree.map(Dec) }
}

pub fn gcw_def(group: &str, x: &GCWComplex) -> GcwDef {
    let g = &x.group;
    let cells = x
        .cells
        .iter()
        .enumerate()
        .map(|(n, row)| {
            row.iter()
                .enumerate()
                .map(|(i, h)| GCellDef {
                    label: x.labels[n][i].clone(),
                    isotropy: h.elements().iter().map(|&e| g.label(e).to_string()).collect(),
                    boundary: x.boundaries[n][i]
                        .iter()
                        .map(|t| GFaceDef { face: Dec(t.face), element: g.label(t.element).to_string(), coeff: Dec(t.coeff) })
                        .collect(),
                })
                .collect()
        })
        .collect();
    GcwDef::Explicit { group: group.to_string(), cells }
}

pub fn bifunctor_def(index: &str, coeff: &str, e: &BiFunctorComplex) -> BifunctorDef {
    let (ic, cc) = (&e.index, &e.coeff);
    let degrees = e
        .degrees
        .iter()
        .map(|b| BiDegreeDef {
            values: b.values.iter().map(|r| r.iter().map(ab_group_def).collect()).collect(),
            index_action: (0..ic.num_morphisms())
                .filter(|&a| !ic.is_identity(a))
                .map(|a| (ic.morphism_label(a).to_string(), b.index_action[a].iter().map(|h| matrix_def(h.matrix())).collect()))
                .collect(),
            coeff_action: (0..cc.num_morphisms())
                .filter(|&f| !cc.is_identity(f))
                .map(|f| (cc.morphism_label(f).to_string(), b.coeff_action.iter().map(|row| matrix_def(row[f].matrix())).collect()))
                .collect(),
        })
        .collect();
    let differentials =
        e.differentials.iter().map(|k| k.iter().map(|row| row.iter().map(|h| matrix_def(h.matrix())).collect()).collect()).collect();
    BifunctorDef::Explicit { index: index.to_string(), coeff: coeff.to_string(), lo: Dec(e.lo), degrees, differentials }
}

fn sequence_def(s: &Sequence) -> SequenceDef {
    SequenceDef {
        prefix: s.prefix.iter().copied().map(Dec).collect(),
        tail: match s.tail {
            SeqTail::BoundedBy(b) => SeqTailDef::BoundedBy(Dec(b)),
            SeqTail::StrictlyIncreasingUnbounded => SeqTailDef::StrictlyIncreasingUnbounded,
        },
    }
}

pub fn seq_spec_def(s: &GradedSeqSpec) -> SeqSpecDef {
    SeqSpecDef {
        m: sequence_def(&s.m),
        n: sequence_def(&s.n),
        profile: ProfileDef {
            values: s.profile.values.iter().map(|(q, g)| (q.to_string(), ab_group_def(g))).collect(),
            tail: match &s.profile.tail {
                ProfileTail::BoundedBelow(b) => ProfileTailDef::BoundedBelow(Dec(*b)),
                ProfileTail::ConstantBelow { from, group } => ProfileTailDef::ConstantBelow { from: Dec(*from), group: ab_group_def(group) },
            },
        },
        p: Dec(s.p),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_manifest_text(raw: &RawManifest) -> String {
    let mut s = serde_json::to_string_pretty(raw).expect("manifest values always serialize");
    s.push('\n');
    s
}
