use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

const UNDEF: u32 = u32::MAX;

/// Raw category data, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryData {
    pub name: String,
    pub objects: Vec<String>,
    /// `(domain, codomain, label)` per morphism.
    pub morphisms: Vec<(usize, usize, String)>,
    pub identities: Vec<usize>,
    /// `composition[g][f] = Some(g ∘ f)` exactly when `cod f = dom g`.
    pub composition: Vec<Vec<Option<usize>>>,
}

/// Outcome of [`validate_category`]: the first failing axiom with the
/// offending morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryVerdict {
    pub valid: bool,
    pub witness: Option<String>,
}

/// Checks domains, identities, composability, unit laws and associativity.
pub fn validate_category(data: &CategoryData) -> CategoryVerdict {
    match check(data) {
        Ok(()) => CategoryVerdict { valid: true, witness: None },
        Err(w) => CategoryVerdict { valid: false, witness: Some(w) },
    }
}

fn check(d: &CategoryData) -> std::result::Result<(), String> {
    let n = d.objects.len();
    let m = d.morphisms.len();
    for (i, (a, b, l)) in d.morphisms.iter().enumerate() {
        if *a >= n || *b >= n {
            return Err(format!("morphism {i} ({l}) has an endpoint outside the object list"));
        }
    }
    if d.identities.len() != n {
        return Err(format!("{} identities for {} objects", d.identities.len(), n));
    }
    for (o, &id) in d.identities.iter().enumerate() {
        if id >= m || d.morphisms[id].0 != o || d.morphisms[id].1 != o {
            return Err(format!("identity of object {o} is not an endomorphism of it"));
        }
    }
    if d.composition.len() != m || d.composition.iter().any(|r| r.len() != m) {
        return Err(format!("composition table is not {m}x{m}"));
    }
    for g in 0..m {
        for f in 0..m {
            let composable = d.morphisms[f].1 == d.morphisms[g].0;
            match (composable, d.composition[g][f]) {
                (true, None) => return Err(format!("composite of ({g}, {f}) missing")),
                (false, Some(_)) => return Err(format!("composite of non-composable pair ({g}, {f}) defined")),
                (true, Some(h)) => {
                    if h >= m || d.morphisms[h].0 != d.morphisms[f].0 || d.morphisms[h].1 != d.morphisms[g].1 {
                        return Err(format!("composite of ({g}, {f}) has wrong endpoints"));
                    }
                }
                (false, None) => {}
            }
        }
    }
    for f in 0..m {
        let (a, b, _) = d.morphisms[f];
        if d.composition[d.identities[b]][f] != Some(f) || d.composition[f][d.identities[a]] != Some(f) {
            return Err(format!("unit law fails for morphism {f}"));
        }
    }
    for h in 0..m {
        for g in 0..m {
            let Some(hg) = d.composition[h][g] else { continue };
            for f in 0..m {
                let Some(gf) = d.composition[g][f] else { continue };
                if d.composition[hg][f] != d.composition[h][gf] {
                    return Err(format!("associativity fails on the triple ({h}, {g}, {f})"));
                }
            }
        }
    }
    Ok(())
}

/// A validated finite category with indexed hom-sets.
#[derive(Clone)]
pub struct FinCategory {
    name: String,
    objects: Vec<String>,
    dom: Vec<usize>,
    cod: Vec<usize>,
    labels: Vec<String>,
    identities: Vec<usize>,
    comp: Vec<u32>,
    hom: Vec<Vec<usize>>,
    pos: Vec<usize>,
}

impl PartialEq for FinCategory {
    fn eq(&self, o: &Self) -> bool {
        self.objects.len() == o.objects.len()
            && self.dom == o.dom
            && self.cod == o.cod
            && self.identities == o.identities
            && self.comp == o.comp
    }
}

impl Eq for FinCategory {}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinCategory({}: {} objects, {} morphisms)", self.name, self.objects.len(), self.dom.len())
    }
}

impl FinCategory {
    pub fn from_data(data: CategoryData) -> Result<Self> {
        let v = validate_category(&data);
        if let Some(w) = v.witness {
            return Err(Error::Category(format!("{}: {w}", data.name)));
        }
        Ok(Self::build_unchecked(data))
    }

    pub(crate) fn build_unchecked(data: CategoryData) -> Self {
        let n = data.objects.len();
        let m = data.morphisms.len();
        let mut comp = vec![UNDEF; m * m];
        for g in 0..m {
            for f in 0..m {
                if let Some(h) = data.composition[g][f] {
                    comp[g * m + f] = h as u32;
                }
            }
        }
        let mut hom = vec![Vec::new(); n * n];
        let mut pos = vec![0; m];
        for (i, (a, b, _)) in data.morphisms.iter().enumerate() {
            pos[i] = hom[a * n + b].len();
            hom[a * n + b].push(i);
        }
        FinCategory {
            name: data.name,
            objects: data.objects,
            dom: data.morphisms.iter().map(|x| x.0).collect(),
            cod: data.morphisms.iter().map(|x| x.1).collect(),
            labels: data.morphisms.into_iter().map(|x| x.2).collect(),
            identities: data.identities,
            comp,
            hom,
            pos,
        }
    }

    /// Builds a category from morphism endpoints and a composition rule.
    pub fn from_rule(
        name: &str,
        objects: Vec<String>,
        morphisms: Vec<(usize, usize, String)>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let m = morphisms.len();
        let mut composition = vec![vec![None; m]; m];
        for g in 0..m {
            for f in 0..m {
                if morphisms[f].1 == morphisms[g].0 {
                    composition[g][f] = Some(compose(g, f));
                }
            }
        }
        Self::from_data(CategoryData { name: name.to_string(), objects, morphisms, identities, composition })
    }

    pub fn to_data(&self) -> CategoryData {
        let m = self.dom.len();
        let composition = (0..m)
            .map(|g| (0..m).map(|f| self.try_compose(g, f)).collect())
            .collect();
        CategoryData {
            name: self.name.clone(),
            objects: self.objects.clone(),
            morphisms: (0..m).map(|i| (self.dom[i], self.cod[i], self.labels[i].clone())).collect(),
            identities: self.identities.clone(),
            composition,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.dom.len()
    }

    pub fn object_label(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn object_labels(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_label(&self, f: usize) -> &str {
        &self.labels[f]
    }

    pub fn find_object(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    pub fn find_morphism(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|o| o == label)
    }

    #[inline]
    pub fn dom(&self, f: usize) -> usize {
        self.dom[f]
    }

    #[inline]
    pub fn cod(&self, f: usize) -> usize {
        self.cod[f]
    }

    #[inline]
    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.dom[f]] == f
    }

    /// `g ∘ f`; panics if not composable.
    #[inline]
    pub fn compose(&self, g: usize, f: usize) -> usize {
        let h = self.comp[g * self.dom.len() + f];
        assert!(h != UNDEF, "morphisms {g} and {f} are not composable");
        h as usize
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        let h = self.comp[g * self.dom.len() + f];
        (h != UNDEF).then_some(h as usize)
    }

    /// Morphisms `a -> b` in a fixed order.
    #[inline]
    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.hom[a * self.objects.len() + b]
    }

    /// Position of `f` within its hom-set.
    #[inline]
    pub fn position(&self, f: usize) -> usize {
        self.pos[f]
    }

    /// Full subcategory on the listed objects, with its inclusion functor.
    pub fn full_subcategory(self: &Arc<Self>, objects: &[usize]) -> Result<(Arc<FinCategory>, CatFunctor)> {
        let mut new_of = vec![usize::MAX; self.num_objects()];
        for (i, &o) in objects.iter().enumerate() {
            new_of[o] = i;
        }
        let mut mors = Vec::new();
        let mut old_mor = Vec::new();
        let mut new_mor = vec![usize::MAX; self.num_morphisms()];
        for f in 0..self.num_morphisms() {
            let (a, b) = (new_of[self.dom[f]], new_of[self.cod[f]]);
            if a != usize::MAX && b != usize::MAX {
                new_mor[f] = mors.len();
                mors.push((a, b, self.labels[f].clone()));
                old_mor.push(f);
            }
        }
        let ids = objects.iter().map(|&o| new_mor[self.identities[o]]).collect();
        let sub = FinCategory::from_rule(
            &format!("{}|full", self.name),
            objects.iter().map(|&o| self.objects[o].clone()).collect(),
            mors,
            ids,
            |g, f| new_mor[self.compose(old_mor[g], old_mor[f])],
        )?;
        let sub = Arc::new(sub);
        let functor = CatFunctor::new(sub.clone(), self.clone(), objects.to_vec(), old_mor)?;
        Ok((sub, functor))
    }

    /// Opposite category; morphism indices are preserved.
    pub fn opposite(&self) -> FinCategory {
        let mut d = self.to_data();
        d.name = format!("{}^op", self.name);
        for m in d.morphisms.iter_mut() {
            std::mem::swap(&mut m.0, &mut m.1);
        }
        let n = d.morphisms.len();
        let mut comp = vec![vec![None; n]; n];
        for g in 0..n {
            for f in 0..n {
                comp[g][f] = self.try_compose(f, g);
            }
        }
        d.composition = comp;
        Self::build_unchecked(d)
    }
}

/// A functor between finite categories, given on objects and morphisms.
#[derive(Clone, Debug)]
pub struct CatFunctor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub on_objects: Vec<usize>,
    pub on_morphisms: Vec<usize>,
}

impl CatFunctor {
    /// Validates endpoints, identities and composition.
    pub fn new(source: Arc<FinCategory>, target: Arc<FinCategory>, on_objects: Vec<usize>, on_morphisms: Vec<usize>) -> Result<Self> {
        if on_objects.len() != source.num_objects() || on_morphisms.len() != source.num_morphisms() {
            return Err(Error::Category("functor data has the wrong length".into()));
        }
        for f in 0..source.num_morphisms() {
            let g = on_morphisms[f];
            if g >= target.num_morphisms()
                || target.dom(g) != on_objects[source.dom(f)]
                || target.cod(g) != on_objects[source.cod(f)]
            {
                return Err(Error::Category(format!("functor sends morphism {f} to one with wrong endpoints")));
            }
        }
        for o in 0..source.num_objects() {
            if on_morphisms[source.identity(o)] != target.identity(on_objects[o]) {
                return Err(Error::Category(format!("functor does not preserve the identity of object {o}")));
            }
        }
        for g in 0..source.num_morphisms() {
            for f in 0..source.num_morphisms() {
                if let Some(h) = source.try_compose(g, f) {
                    if on_morphisms[h] != target.compose(on_morphisms[g], on_morphisms[f]) {
                        return Err(Error::Category(format!("functor breaks composition on ({g}, {f})")));
                    }
                }
            }
        }
        Ok(CatFunctor { source, target, on_objects, on_morphisms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> CategoryData {
        CategoryData {
            name: "arrow".into(),
            objects: vec!["a".into(), "b".into()],
            morphisms: vec![(0, 0, "1a".into()), (1, 1, "1b".into()), (0, 1, "f".into())],
            identities: vec![0, 1],
            composition: vec![
                vec![Some(0), None, None],
                vec![None, Some(1), Some(2)],
                vec![Some(2), None, None],
            ],
        }
    }

    #[test]
    fn arrow_is_valid() {
        assert!(validate_category(&arrow()).valid);
        let c = FinCategory::from_data(arrow()).unwrap();
        assert_eq!(c.hom(0, 1), &[2]);
        assert!(c.hom(1, 0).is_empty());
        assert_eq!(c.opposite().hom(1, 0), &[2]);
    }

    #[test]
    fn broken_composite_has_witness() {
        let mut d = arrow();
        d.composition[2][0] = Some(1);
        let v = validate_category(&d);
        assert!(!v.valid);
        assert!(v.witness.unwrap().contains("(2, 0)"));
    }
}
