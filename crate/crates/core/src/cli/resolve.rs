//! Turning a parsed manifest into engine objects. Every object is validated
//! by its own module; errors are prefixed with the section, name and field.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use super::format::*;
use crate::catmod::{free_module, validate_module, CatModule, ModuleMap, Variance};
use crate::cellspaces::{
    cellular_chain_complex, classifying_model, fixed_point_chains, gcw_free_orbit, gcw_point, s3_reflection_circle, z2_antipodal_circle,
    z2_antipodal_sphere, z2_reflection_circle, z2_reflection_sphere, CatCWComplex, CellFace, GBoundaryTerm, GCWComplex,
};
use crate::chainplex::{BiFunctorComplex, BiModule, CatChainComplex};
use crate::error::{Error, Result};
use crate::exact_abelian::{AbHom, FpAbGroup, IntMatrix};
use crate::fincat::{
    family_closure, orbit_category, standard_category, CategoryData, FinCategory, FinGroup, OrbitCategory, StandardKind, Subgroup,
    SubgroupFamily,
};
use crate::verify::{
    constant_bifunctor, coset_permutation_bifunctor, pad_bifunctor, shift_bifunctor, transport_bifunctor, FgMode, GradedSeqSpec, Profile,
    ProfileTail, SeqTail, Sequence, TheoremInstance, TheoremSource, TransportRecipe,
};

/// Names of the shipped `G`-CW examples accepted by `{"kind": "builtin"}`.
pub const BUILTIN_GCW: [&str; 5] =
    ["z2_reflection_circle", "z2_antipodal_circle", "z2_antipodal_sphere", "z2_reflection_sphere", "s3_reflection_circle"];

#[derive(Clone, Debug)]
pub struct CategoryEntry {
    pub cat: Arc<FinCategory>,
    /// Set for categories declared with `{"kind": "orbit"}`.
    pub orbit: Option<OrbitCategory>,
}

/// A fully resolved manifest. Maps are keyed by the names used in the file.
#[derive(Clone, Debug)]
pub struct Manifest {
    pub raw: RawManifest,
    pub groups: BTreeMap<String, Arc<FinGroup>>,
    pub families: BTreeMap<String, SubgroupFamily>,
    pub categories: BTreeMap<String, CategoryEntry>,
    pub modules: BTreeMap<String, CatModule>,
    pub complexes: BTreeMap<String, CatChainComplex>,
    pub icws: BTreeMap<String, CatCWComplex>,
    pub gcws: BTreeMap<String, GCWComplex>,
    pub bifunctors: BTreeMap<String, BiFunctorComplex>,
    pub instances: BTreeMap<String, TheoremInstance>,
    pub sequences: BTreeMap<String, GradedSeqSpec>,
}

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Manifest(format!("{path}: {msg}"))
}

fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| err(path, e))
}

pub fn parse_manifest(text: &str) -> Result<Manifest> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Manifest(format!("syntax error at line {}, column {}: {e}", e.line(), e.column())))?;
    let obj = value.as_object().ok_or_else(|| Error::Manifest("the manifest must be a JSON object of sections".into()))?;
    if let Some(k) = obj.keys().find(|k| !SECTIONS.contains(&k.as_str())) {
        return Err(Error::Manifest(format!("unknown section `{k}` (expected one of {})", SECTIONS.join(", "))));
    }
    let raw: RawManifest = serde_json::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
    resolve(raw)
}

pub fn resolve(raw: RawManifest) -> Result<Manifest> {
    if raw.version != super::MANIFEST_VERSION {
        return Err(err("version", format!("unsupported manifest version {:?} (expected {:?})", raw.version, super::MANIFEST_VERSION)));
    }
    let mut r = Resolver {
        raw: &raw,
        visiting: HashSet::new(),
        m: Manifest {
            raw: raw.clone(),
            groups: BTreeMap::new(),
            families: BTreeMap::new(),
            categories: BTreeMap::new(),
            modules: BTreeMap::new(),
            complexes: BTreeMap::new(),
            icws: BTreeMap::new(),
            gcws: BTreeMap::new(),
            bifunctors: BTreeMap::new(),
            instances: BTreeMap::new(),
            sequences: BTreeMap::new(),
        },
    };
    for name in raw.group.keys() {
        r.group(name, "group")?;
    }
    for name in raw.family.keys() {
        r.family(name, "family")?;
    }
    for name in raw.category.keys() {
        r.category(name, "category")?;
    }
    for (name, def) in &raw.module {
        let m = r.module(&format!("module.{name}"), def)?;
        r.m.modules.insert(name.clone(), m);
    }
    for name in raw.icw.keys() {
        r.icw(name, "icw")?;
    }
    for name in raw.gcw.keys() {
        r.gcw(name, "gcw")?;
    }
    for name in raw.complex.keys() {
        r.complex(name, "complex")?;
    }
    for name in raw.bifunctor.keys() {
        r.bifunctor(name, "bifunctor")?;
    }
    for (name, def) in &raw.instance {
        let inst = r.instance(&format!("instance.{name}"), def)?;
        r.m.instances.insert(name.clone(), inst);
    }
    for (name, def) in &raw.sequences {
        let path = format!("sequences.{name}");
        let s = seq_spec(&path, def)?;
        at(&path, s.validate())?;
        r.m.sequences.insert(name.clone(), s);
    }
    Ok(r.m)
}

pub fn ab_group(path: &str, def: &AbGroupDef) -> Result<FpAbGroup> {
    at(path, FpAbGroup::new(def.rank.0, def.torsion.iter().map(|t| t.0.clone()).collect()))
}

/// `[]` stands for the zero matrix of the requested shape.
pub fn matrix(path: &str, def: &MatrixDef, rows: usize, cols: usize) -> Result<IntMatrix> {
    if def.is_empty() {
        return Ok(IntMatrix::zeros(rows, cols));
    }
    if def.len() != rows || def.iter().any(|r| r.len() != cols) {
        return Err(err(path, format!("expected a {rows}x{cols} matrix")));
    }
    let big: Vec<Vec<_>> = def.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
    at(path, IntMatrix::from_big_rows(&big, cols))
}

fn variance(v: VarianceDef) -> Variance {
    match v {
        VarianceDef::Covariant => Variance::Covariant,
        VarianceDef::Contravariant => Variance::Contravariant,
    }
}

fn standard_kind(path: &str, shape: &str) -> Result<StandardKind> {
    at(path, shape.parse())
}

fn object(path: &str, cat: &FinCategory, label: &str) -> Result<usize> {
    cat.find_object(label).ok_or_else(|| err(path, format!("unknown object {label:?} in {}", cat.name())))
}

fn morphism(path: &str, cat: &FinCategory, label: &str) -> Result<usize> {
    cat.find_morphism(label).ok_or_else(|| err(path, format!("unknown morphism {label:?} in {}", cat.name())))
}

fn element(path: &str, g: &FinGroup, label: &str) -> Result<usize> {
    g.find(label).ok_or_else(|| err(path, format!("unknown element {label:?} of {}", g.name())))
}

fn generated(path: &str, g: &FinGroup, labels: &[String]) -> Result<Subgroup> {
    let gens = labels.iter().map(|l| element(path, g, l)).collect::<Result<Vec<_>>>()?;
    Ok(g.generate(&gens))
}

fn unique_labels<'a>(path: &str, what: &str, labels: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(err(path, format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(())
}

/// Checks that `keys` only names morphisms of `cat`.
fn known_morphisms<'a>(path: &str, cat: &FinCategory, keys: impl Iterator<Item = &'a String>) -> Result<()> {
    for k in keys {
        morphism(path, cat, k)?;
    }
    Ok(())
}

struct Resolver<'a> {
    raw: &'a RawManifest,
    visiting: HashSet<String>,
    m: Manifest,
}

impl Resolver<'_> {
    fn enter(&mut self, key: String) -> Result<()> {
        if !self.visiting.insert(key.clone()) {
            return Err(Error::Manifest(format!("{key}: circular reference")));
        }
        Ok(())
    }

    fn group(&mut self, name: &str, from: &str) -> Result<Arc<FinGroup>> {
        if let Some(g) = self.m.groups.get(name) {
            return Ok(g.clone());
        }
        let def = self.raw.group.get(name).ok_or_else(|| err(from, format!("dangling reference to group {name:?}")))?;
        let path = format!("group.{name}");
        self.enter(path.clone())?;
        let g = match def {
            GroupDef::Trivial => FinGroup::trivial(),
            GroupDef::Cyclic { order } => {
                if order.0 == 0 {
                    return Err(err(&path, "order must be positive"));
                }
                at(&path, check_order(FinGroup::cyclic(order.0)))?
            }
            GroupDef::Symmetric { degree } => {
                if degree.0 == 0 || degree.0 > 5 {
                    return Err(err(&path, "symmetric groups are supported for degrees 1..=5"));
                }
                at(&path, check_order(FinGroup::symmetric(degree.0)))?
            }
            GroupDef::Dihedral { degree } => {
                if degree.0 < 2 {
                    return Err(err(&path, "dihedral groups need degree at least 2"));
                }
                at(&path, check_order(FinGroup::dihedral(degree.0)))?
            }
            GroupDef::Product { factors } => {
                if factors.is_empty() {
                    return Err(err(&path, "a product needs at least one factor"));
                }
                let mut acc = (*self.group(&factors[0], &path)?).clone();
                for f in &factors[1..] {
                    let next = self.group(f, &path)?;
                    acc = FinGroup::product(&acc, &next);
                }
                at(&path, check_order(acc))?
            }
            GroupDef::Permutations { degree, generators } => {
                let gens: Vec<Vec<usize>> = generators.iter().map(|p| p.iter().map(|x| x.0).collect()).collect();
                at(&path, FinGroup::from_permutations(name, degree.0, &gens).and_then(check_order))?
            }
            GroupDef::Table { name: label, table, labels } => {
                let t: Vec<Vec<usize>> = table.iter().map(|r| r.iter().map(|x| x.0).collect()).collect();
                at(&path, FinGroup::from_table(label.as_deref().unwrap_or(name), t, labels.clone()).and_then(check_order))?
            }
        };
        let g = Arc::new(g);
        self.m.groups.insert(name.to_string(), g.clone());
        Ok(g)
    }

    fn family(&mut self, name: &str, from: &str) -> Result<SubgroupFamily> {
        if let Some(f) = self.m.families.get(name) {
            return Ok(f.clone());
        }
        let def = self.raw.family.get(name).ok_or_else(|| err(from, format!("dangling reference to family {name:?}")))?;
        let path = format!("family.{name}");
        let f = match def {
            FamilyDef::All { group } => at(&path, SubgroupFamily::all(&self.group(group, &path)?))?,
            FamilyDef::Trivial { group } => SubgroupFamily::trivial(&self.group(group, &path)?),
            FamilyDef::Closure { group, seeds } => {
                let g = self.group(group, &path)?;
                let seeds = seeds.iter().map(|s| generated(&path, &g, s)).collect::<Result<Vec<_>>>()?;
                at(&path, family_closure(&g, &seeds))?
            }
        };
        self.m.families.insert(name.to_string(), f.clone());
        Ok(f)
    }

    fn category(&mut self, name: &str, from: &str) -> Result<CategoryEntry> {
        if let Some(c) = self.m.categories.get(name) {
            return Ok(c.clone());
        }
        let def = self.raw.category.get(name).ok_or_else(|| err(from, format!("dangling reference to category {name:?}")))?;
        let path = format!("category.{name}");
        self.enter(path.clone())?;
        let entry = match def {
            CategoryDef::Standard { shape, truncation } => {
                let kind = standard_kind(&path, shape)?;
                CategoryEntry { cat: Arc::new(standard_category(kind, truncation.0)), orbit: None }
            }
            CategoryDef::Group { group } => CategoryEntry { cat: Arc::new(self.group(group, &path)?.as_category()), orbit: None },
            CategoryDef::Orbit { family } => {
                let f = self.family(family, &path)?;
                let or = at(&path, orbit_category(&f))?;
                CategoryEntry { cat: or.cat.clone(), orbit: Some(or) }
            }
            CategoryDef::Opposite { of } => CategoryEntry { cat: Arc::new(self.category(of, &path)?.cat.opposite()), orbit: None },
            CategoryDef::Explicit { name: label, objects, morphisms, identities, composition } => {
                CategoryEntry { cat: Arc::new(explicit_category(&path, label, objects, morphisms, identities, composition)?), orbit: None }
            }
        };
        let c = &entry.cat;
        unique_labels(&path, "object", c.object_labels().iter().map(String::as_str))?;
        unique_labels(&path, "morphism", (0..c.num_morphisms()).map(|f| c.morphism_label(f)))?;
        self.m.categories.insert(name.to_string(), entry.clone());
        Ok(entry)
    }

    fn module(&mut self, path: &str, def: &ModuleDef) -> Result<CatModule> {
        let (cat_name, v) = match def {
            ModuleDef::Explicit { category, variance: v, .. }
            | ModuleDef::Free { category, variance: v, .. }
            | ModuleDef::Constant { category, variance: v, .. } => (category, variance(*v)),
        };
        let base = self.category(cat_name, path)?.cat;
        let m = match def {
            ModuleDef::Explicit { values, action, .. } => {
                if values.len() != base.num_objects() {
                    return Err(err(path, format!("{} values for {} objects", values.len(), base.num_objects())));
                }
                let values =
                    values.iter().enumerate().map(|(i, g)| ab_group(&format!("{path}.values[{i}]"), g)).collect::<Result<Vec<_>>>()?;
                known_morphisms(path, &base, action.keys())?;
                let matrices = (0..base.num_morphisms())
                    .map(|f| {
                        let (s, t) = v.ends(&base, f);
                        let label = base.morphism_label(f);
                        match action.get(label) {
                            Some(a) => matrix(&format!("{path}.action.{label}"), a, values[t].ngens(), values[s].ngens()),
                            None if base.is_identity(f) => Ok(IntMatrix::identity(values[s].ngens())),
                            None => Err(err(path, format!("missing action of morphism {label:?}"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                at(path, CatModule::from_matrices(base.clone(), v, values, matrices))?
            }
            ModuleDef::Free { generators, .. } => {
                let gens = generators.iter().map(|o| object(path, &base, o)).collect::<Result<Vec<_>>>()?;
                free_module(&base, v, &gens)
            }
            ModuleDef::Constant { group, .. } => CatModule::constant(base.clone(), v, &ab_group(&format!("{path}.group"), group)?),
        };
        at(path, validate_module(&m))?;
        Ok(m)
    }

    fn icw(&mut self, name: &str, from: &str) -> Result<CatCWComplex> {
        if let Some(x) = self.m.icws.get(name) {
            return Ok(x.clone());
        }
        let def = self.raw.icw.get(name).ok_or_else(|| err(from, format!("dangling reference to icw {name:?}")))?;
        let path = format!("icw.{name}");
        let x = match def {
            IcwDef::Classifying { shape, truncation } => at(&path, classifying_model(standard_kind(&path, shape)?, truncation.0))?,
            IcwDef::Explicit { category, cells, valid_degree } => {
                let base = self.category(category, &path)?.cat;
                let mut objs = Vec::new();
                let mut labels = Vec::new();
                let mut boundaries = Vec::new();
                for (n, row) in cells.iter().enumerate() {
                    let p = format!("{path}.cells[{n}]");
                    objs.push(row.iter().map(|c| object(&p, &base, &c.object)).collect::<Result<Vec<_>>>()?);
                    labels.push(row.iter().map(|c| c.label.clone()).collect());
                    boundaries.push(
                        row.iter()
                            .map(|c| {
                                c.boundary
                                    .iter()
                                    .map(|t| Ok(CellFace { morphism: morphism(&p, &base, &t.morphism)?, face: t.face.0, coeff: t.coeff.0 }))
                                    .collect::<Result<Vec<_>>>()
                            })
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                let mut x = at(&path, CatCWComplex::new(base, objs, labels, boundaries))?;
                x.valid_degree = valid_degree.as_ref().map(|d| d.0);
                x
            }
        };
        self.m.icws.insert(name.to_string(), x.clone());
        Ok(x)
    }

    fn gcw(&mut self, name: &str, from: &str) -> Result<GCWComplex> {
        if let Some(x) = self.m.gcws.get(name) {
            return Ok(x.clone());
        }
        let def = self.raw.gcw.get(name).ok_or_else(|| err(from, format!("dangling reference to gcw {name:?}")))?;
        let path = format!("gcw.{name}");
        let x = match def {
            GcwDef::Builtin { name: b } => match b.as_str() {
                "z2_reflection_circle" => z2_reflection_circle(),
                "z2_antipodal_circle" => z2_antipodal_circle(),
                "z2_antipodal_sphere" => z2_antipodal_sphere(),
                "z2_reflection_sphere" => z2_reflection_sphere(),
                "s3_reflection_circle" => s3_reflection_circle(),
                other => return Err(err(&path, format!("unknown builtin {other:?} (expected one of {})", BUILTIN_GCW.join(", ")))),
            },
            GcwDef::Point { group } => gcw_point(&self.group(group, &path)?),
            GcwDef::FreeOrbit { group } => gcw_free_orbit(&self.group(group, &path)?),
            GcwDef::Explicit { group, cells } => {
                let g = self.group(group, &path)?;
                let mut iso = Vec::new();
                let mut labels = Vec::new();
                let mut boundaries = Vec::new();
                for (n, row) in cells.iter().enumerate() {
                    let p = format!("{path}.cells[{n}]");
                    iso.push(row.iter().map(|c| generated(&p, &g, &c.isotropy)).collect::<Result<Vec<_>>>()?);
                    labels.push(row.iter().map(|c| c.label.clone()).collect());
                    boundaries.push(
                        row.iter()
                            .map(|c| {
                                c.boundary
                                    .iter()
                                    .map(|t| Ok(GBoundaryTerm { face: t.face.0, element: element(&p, &g, &t.element)?, coeff: t.coeff.0 }))
                                    .collect::<Result<Vec<_>>>()
                            })
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                at(&path, GCWComplex::new(g, iso, labels, boundaries))?
            }
        };
        self.m.gcws.insert(name.to_string(), x.clone());
        Ok(x)
    }

    fn orbit(&mut self, name: &str, from: &str) -> Result<OrbitCategory> {
        self.category(name, from)?.orbit.ok_or_else(|| err(from, format!("category {name:?} is not an orbit category")))
    }

    fn complex(&mut self, name: &str, from: &str) -> Result<CatChainComplex> {
        if let Some(c) = self.m.complexes.get(name) {
            return Ok(c.clone());
        }
        let def = self.raw.complex.get(name).ok_or_else(|| err(from, format!("dangling reference to complex {name:?}")))?;
        let path = format!("complex.{name}");
        let c = match def {
            ComplexDef::Explicit { category, variance: v, lo, modules, differentials } => {
                let base = self.category(category, &path)?.cat;
                let v = variance(*v);
                let modules = modules
                    .iter()
                    .enumerate()
                    .map(|(k, m)| {
                        let p = format!("{path}.modules[{k}]");
                        let m = self.module(&p, m)?;
                        if m.base != base || m.variance != v {
                            return Err(err(&p, "module lives on a different category or has the wrong variance"));
                        }
                        Ok(m)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if differentials.len() + 1 != modules.len().max(1) {
                    return Err(err(&path, format!("{} modules need {} differentials", modules.len(), modules.len().saturating_sub(1))));
                }
                let diffs = differentials
                    .iter()
                    .enumerate()
                    .map(|(k, per_object)| {
                        let p = format!("{path}.differentials[{k}]");
                        for key in per_object.keys() {
                            object(&p, &base, key)?;
                        }
                        let components = (0..base.num_objects())
                            .map(|c| {
                                let (src, tgt) = (&modules[k + 1].values[c], &modules[k].values[c]);
                                let label = base.object_label(c);
                                let mat = match per_object.get(label) {
                                    Some(d) => matrix(&format!("{p}.{label}"), d, tgt.ngens(), src.ngens())?,
                                    None => IntMatrix::zeros(tgt.ngens(), src.ngens()),
                                };
                                at(&p, AbHom::new(src.clone(), tgt.clone(), mat))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(ModuleMap { components })
                    })
                    .collect::<Result<Vec<_>>>()?;
                at(&path, CatChainComplex::new(base, v, lo.0, modules, diffs))?
            }
            ComplexDef::Cellular { icw } => {
                let x = self.icw(icw, &path)?;
                at(&path, cellular_chain_complex(&x))?
            }
            ComplexDef::FixedPoints { gcw, orbit } => {
                let x = self.gcw(gcw, &path)?;
                let or = self.orbit(orbit, &path)?;
                at(&path, fixed_point_chains(&x, &or))?
            }
        };
        at(&path, c.validate())?;
        self.m.complexes.insert(name.to_string(), c.clone());
        Ok(c)
    }

    fn bifunctor(&mut self, name: &str, from: &str) -> Result<BiFunctorComplex> {
        if let Some(e) = self.m.bifunctors.get(name) {
            return Ok(e.clone());
        }
        let def = self.raw.bifunctor.get(name).ok_or_else(|| err(from, format!("dangling reference to bifunctor {name:?}")))?;
        let path = format!("bifunctor.{name}");
        self.enter(path.clone())?;
        let e = match def {
            BifunctorDef::Transport { index, orbit, recipe, top } => {
                let index = self.category(index, &path)?.cat;
                let or = self.orbit(orbit, &path)?;
                let recipe = match (recipe, top) {
                    (RecipeDef::Components, None) => TransportRecipe::Components,
                    (RecipeDef::Nerve, Some(t)) => TransportRecipe::Nerve { top: t.0 },
                    (RecipeDef::Components, Some(_)) => return Err(err(&path, "`top` only applies to the nerve recipe")),
                    (RecipeDef::Nerve, None) => return Err(err(&path, "the nerve recipe needs `top`")),
                };
                at(&path, transport_bifunctor(&index, &or, recipe))?
            }
            BifunctorDef::CosetPermutation { index, orbit } => {
                let index = self.category(index, &path)?.cat;
                let or = self.orbit(orbit, &path)?;
                at(&path, coset_permutation_bifunctor(&index, &or))?
            }
            BifunctorDef::Constant { index, coeff, group, degree } => {
                let index = self.category(index, &path)?.cat;
                let coeff = self.category(coeff, &path)?.cat;
                at(&path, constant_bifunctor(&index, &coeff, &ab_group(&format!("{path}.group"), group)?, degree.0))?
            }
            BifunctorDef::ConstantInIndex { index, complex } => {
                let index = self.category(index, &path)?.cat;
                let n = self.complex(complex, &path)?;
                at(&path, BiFunctorComplex::constant_in_index(index, &n))?
            }
            BifunctorDef::Shift { of, by } => shift_bifunctor(&self.bifunctor(of, &path)?, by.0),
            BifunctorDef::Pad { of, to } => at(&path, pad_bifunctor(&self.bifunctor(of, &path)?, to.0))?,
            BifunctorDef::Explicit { index, coeff, lo, degrees, differentials } => {
                let index = self.category(index, &path)?.cat;
                let coeff = self.category(coeff, &path)?.cat;
                explicit_bifunctor(&path, index, coeff, lo.0, degrees, differentials)?
            }
        };
        at(&path, e.validate())?;
        self.m.bifunctors.insert(name.to_string(), e.clone());
        Ok(e)
    }

    fn instance(&mut self, path: &str, def: &InstanceDef) -> Result<TheoremInstance> {
        let d_complex = self.complex(&def.index_complex, path)?;
        let or = self.orbit(&def.orbit, path)?;
        let source = match &def.source {
            SourceDef::Gcw(x) => TheoremSource::Space(self.gcw(x, path)?),
            SourceDef::Chains(c) => TheoremSource::Chains(self.complex(c, path)?),
        };
        let e = self.bifunctor(&def.coefficients, path)?;
        let mode: FgMode = at(path, def.mode.parse())?;
        let mut inst = at(path, TheoremInstance::new(d_complex, or, source, e, def.d.0, def.n.0, def.big_n.0, mode))?;
        inst.e_exact_through = def.e_exact_through.as_ref().map(|x| x.0);
        Ok(inst)
    }
}

fn check_order(g: FinGroup) -> Result<FinGroup> {
    if g.order() > crate::fincat::MAX_GROUP_ORDER {
        return Err(Error::GroupTooLarge { order: g.order(), bound: crate::fincat::MAX_GROUP_ORDER });
    }
    Ok(g)
}

fn explicit_category(
    path: &str,
    name: &str,
    objects: &[String],
    morphisms: &[MorphismDef],
    identities: &[String],
    composition: &[CompositionDef],
) -> Result<FinCategory> {
    let obj = |l: &str| objects.iter().position(|o| o == l).ok_or_else(|| err(path, format!("unknown object {l:?}")));
    let mor = |l: &str| morphisms.iter().position(|m| m.label == l).ok_or_else(|| err(path, format!("unknown morphism {l:?}")));
    unique_labels(path, "morphism", morphisms.iter().map(|m| m.label.as_str()))?;
    let mors = morphisms.iter().map(|m| Ok((obj(&m.dom)?, obj(&m.cod)?, m.label.clone()))).collect::<Result<Vec<_>>>()?;
    if identities.len() != objects.len() {
        return Err(err(path, "one identity per object"));
    }
    let ids = identities.iter().map(|l| mor(l)).collect::<Result<Vec<_>>>()?;
    let n = mors.len();
    let mut table = vec![vec![None; n]; n];
    let is_id = |f: usize| ids.contains(&f);
    for g in 0..n {
        for f in 0..n {
            if mors[f].1 == mors[g].0 {
                if is_id(g) {
                    table[g][f] = Some(f);
                } else if is_id(f) {
                    table[g][f] = Some(g);
                }
            }
        }
    }
    for c in composition {
        let (g, f, h) = (mor(&c.after)?, mor(&c.before)?, mor(&c.result)?);
        if table[g][f].is_some_and(|x| x != h) {
            return Err(err(path, format!("conflicting composite for {} ∘ {}", c.after, c.before)));
        }
        table[g][f] = Some(h);
    }
    for g in 0..n {
        for f in 0..n {
            if mors[f].1 == mors[g].0 && table[g][f].is_none() {
                return Err(err(path, format!("missing composite {} ∘ {}", mors[g].2, mors[f].2)));
            }
        }
    }
    let data = CategoryData { name: name.to_string(), objects: objects.to_vec(), morphisms: mors, identities: ids, composition: table };
    at(path, FinCategory::from_data(data))
}

fn explicit_bifunctor(
    path: &str,
    index: Arc<FinCategory>,
    coeff: Arc<FinCategory>,
    lo: i64,
    degrees: &[BiDegreeDef],
    differentials: &[Vec<Vec<MatrixDef>>],
) -> Result<BiFunctorComplex> {
    let (ni, nj) = (index.num_objects(), coeff.num_objects());
    let mut mods = Vec::new();
    for (k, d) in degrees.iter().enumerate() {
        let p = format!("{path}.degrees[{k}]");
        if d.values.len() != ni || d.values.iter().any(|r| r.len() != nj) {
            return Err(err(&p, format!("values must be a {ni}x{nj} table")));
        }
        let values = d
            .values
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, g)| ab_group(&format!("{p}.values[{i}][{j}]"), g)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        known_morphisms(&p, &index, d.index_action.keys())?;
        known_morphisms(&p, &coeff, d.coeff_action.keys())?;
        let leg = |label: &str, given: Option<&Vec<MatrixDef>>, is_id: bool, count: usize, ends: &dyn Fn(usize) -> (FpAbGroup, FpAbGroup)| {
            let p = format!("{p}.{label}");
            if let Some(ms) = given {
                if ms.len() != count {
                    return Err(err(&p, format!("expected {count} matrices")));
                }
            } else if !is_id {
                return Err(err(&p, "missing action"));
            }
            (0..count)
                .map(|x| {
                    let (s, t) = ends(x);
                    let m = match given {
                        Some(ms) => matrix(&p, &ms[x], t.ngens(), s.ngens())?,
                        None => IntMatrix::identity(s.ngens()),
                    };
                    at(&p, AbHom::new(s, t, m))
                })
                .collect::<Result<Vec<_>>>()
        };
        let index_action = (0..index.num_morphisms())
            .map(|a| {
                let label = index.morphism_label(a);
                let (i0, i1) = (index.dom(a), index.cod(a));
                leg(&format!("index_action.{label}"), d.index_action.get(label), index.is_identity(a), nj, &|j| {
                    (values[i1][j].clone(), values[i0][j].clone())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let coeff_by_beta = (0..coeff.num_morphisms())
            .map(|b| {
                let label = coeff.morphism_label(b);
                let (j0, j1) = (coeff.dom(b), coeff.cod(b));
                leg(&format!("coeff_action.{label}"), d.coeff_action.get(label), coeff.is_identity(b), ni, &|i| {
                    (values[i][j0].clone(), values[i][j1].clone())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let coeff_action = (0..ni).map(|i| coeff_by_beta.iter().map(|row| row[i].clone()).collect()).collect();
        mods.push(BiModule { values, index_action, coeff_action });
    }
    if differentials.len() + 1 != mods.len().max(1) {
        return Err(err(path, format!("{} degrees need {} differentials", mods.len(), mods.len().saturating_sub(1))));
    }
    let diffs = differentials
        .iter()
        .enumerate()
        .map(|(k, table)| {
            let p = format!("{path}.differentials[{k}]");
            if table.len() != ni || table.iter().any(|r| r.len() != nj) {
                return Err(err(&p, format!("expected a {ni}x{nj} table of matrices")));
            }
            (0..ni)
                .map(|i| {
                    (0..nj)
                        .map(|j| {
                            let (s, t) = (&mods[k + 1].values[i][j], &mods[k].values[i][j]);
                            at(&p, AbHom::new(s.clone(), t.clone(), matrix(&p, &table[i][j], t.ngens(), s.ngens())?))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    at(path, BiFunctorComplex::new(index, coeff, lo, mods, diffs))
}

fn sequence(def: &SequenceDef) -> Sequence {
    Sequence {
        prefix: def.prefix.iter().map(|x| x.0).collect(),
        tail: match &def.tail {
            SeqTailDef::BoundedBy(b) => SeqTail::BoundedBy(b.0),
            SeqTailDef::StrictlyIncreasingUnbounded => SeqTail::StrictlyIncreasingUnbounded,
        },
    }
}

pub fn seq_spec(path: &str, def: &SeqSpecDef) -> Result<GradedSeqSpec> {
    let mut values = BTreeMap::new();
    for (q, g) in &def.profile.values {
        let p = format!("{path}.profile.values.{q}");
        let q: i64 = q.parse().map_err(|_| err(&p, "degrees must be decimal integers"))?;
        values.insert(q, ab_group(&p, g)?);
    }
    let tail = match &def.profile.tail {
        ProfileTailDef::BoundedBelow(b) => ProfileTail::BoundedBelow(b.0),
        ProfileTailDef::ConstantBelow { from, group } => {
            ProfileTail::ConstantBelow { from: from.0, group: ab_group(&format!("{path}.profile.tail"), group)? }
        }
    };
    Ok(GradedSeqSpec {
        m: sequence(&def.m),
        n: sequence(&def.n),
        profile: Profile { values, tail },
        p: def.p.0,
    })
}
