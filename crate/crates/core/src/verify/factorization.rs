use std::collections::{BTreeMap, HashMap};

use crate::chainplex::{induced_map_on_homology, BiFunctorComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exact_abelian::AbHom;
use crate::fincat::{sub_category_and_projection, OrbitCategory};

/// Two orbit-category morphisms with one image in `Sub(G, F)` that act
/// differently on `H_q(E(i, -))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationViolation {
    pub degree: i64,
    pub index_object: String,
    pub first: String,
    pub second: String,
}

#[derive(Clone, Debug)]
pub struct FactorizationReport {
    /// Number of morphism pairs compared, summed over degrees and index objects.
    pub pairs_checked: usize,
    pub violations: Vec<FactorizationViolation>,
}

impl FactorizationReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `H_q(E(i, -))` sends morphisms with equal image under
/// `pr : Or(G, F) -> Sub(G, F)` to equal maps.
pub fn sub_factorization_check(or: &OrbitCategory, e: &BiFunctorComplex) -> Result<FactorizationReport> {
    if e.coeff != or.cat {
        return Err(Error::BaseMismatch("E is not defined on this orbit category".into()));
    }
    let (_, pr) = sub_category_and_projection(or)?;
    let cat = &or.cat;
    // Morphisms sharing a pr-image, grouped.
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for f in 0..cat.num_morphisms() {
        classes.entry(pr.on_morphisms[f]).or_default().push(f);
    }
    let classes: Vec<Vec<usize>> = classes.into_values().filter(|c| c.len() > 1).collect();
    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    for i in 0..e.index.num_objects() {
        let leg = e.coeff_leg(i);
        let evals: Vec<_> = (0..cat.num_objects()).map(|j| leg.evaluate(j)).collect();
        for q in leg.degrees() {
            let mut cache: HashMap<usize, AbHom> = HashMap::new();
            let mut on_homology = |f: usize| -> Result<AbHom> {
                if let Some(h) = cache.get(&f) {
                    return Ok(h.clone());
                }
                let components = leg.degrees().map(|k| (k, leg.module(k).expect("in range").action[f].clone())).collect();
                let (s, t) = (cat.dom(f), cat.cod(f));
                let h = induced_map_on_homology(&evals[s], &evals[t], &ChainMap { components }, q)?;
                cache.insert(f, h.clone());
                Ok(h)
            };
            for class in &classes {
                let first = on_homology(class[0])?;
                for &f in &class[1..] {
                    pairs_checked += 1;
                    if !first.add(&on_homology(f)?.negate())?.is_zero() {
                        violations.push(FactorizationViolation {
                            degree: q,
                            index_object: e.index.object_label(i).to_string(),
                            first: cat.morphism_label(class[0]).to_string(),
                            second: cat.morphism_label(f).to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(FactorizationReport { pairs_checked, violations })
}
