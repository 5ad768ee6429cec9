use std::collections::HashMap;
use std::sync::Arc;

use super::category::{CatFunctor, FinCategory};
use super::group::{FinGroup, GSetAction, Subgroup, SubgroupFamily};
use crate::error::{Error, Result};

/// The orbit category `Or(G, F)`. Objects are the members of the family;
/// the morphism `G/H -> G/K` with coset `aK` sends `gH` to `gaK` and exists
/// iff `a^{-1} H a ⊆ K`.
#[derive(Clone, Debug)]
pub struct OrbitCategory {
    pub group: Arc<FinGroup>,
    pub family: SubgroupFamily,
    pub cat: Arc<FinCategory>,
    /// Canonical coset representative `a` of each morphism.
    pub coset_rep: Vec<usize>,
    index: HashMap<(usize, usize, usize), usize>,
}

impl OrbitCategory {
    /// The morphism `G/H_from -> G/H_to` given by `a H_to`, if it exists.
    pub fn morphism(&self, from: usize, to: usize, a: usize) -> Option<usize> {
        let rep = self.family.members[to].coset_rep(&self.group, a);
        self.index.get(&(from, to, rep)).copied()
    }

    /// Action on points: the image of the coset `g H_from` as a coset representative of `H_to`.
    pub fn apply(&self, f: usize, g: usize) -> usize {
        let to = self.cat.cod(f);
        self.family.members[to].coset_rep(&self.group, self.group.mul(g, self.coset_rep[f]))
    }
}

pub fn orbit_category(family: &SubgroupFamily) -> Result<OrbitCategory> {
    let g = &family.group;
    let members = &family.members;
    let objects: Vec<String> = (0..members.len()).map(|i| format!("G/H{i}")).collect();
    let mut morphisms = Vec::new();
    let mut coset_rep = Vec::new();
    let mut index = HashMap::new();
    let mut identities = vec![usize::MAX; members.len()];
    for (i, h) in members.iter().enumerate() {
        for (j, k) in members.iter().enumerate() {
            let mut reps: Vec<usize> = (0..g.order())
                .filter(|&a| h.elements().iter().all(|&x| k.contains(g.conj(g.inv(a), x))))
                .map(|a| k.coset_rep(g, a))
                .collect();
            reps.sort_unstable();
            reps.dedup();
            for a in reps {
                if i == j && a == 0 {
                    identities[i] = morphisms.len();
                }
                index.insert((i, j, a), morphisms.len());
                morphisms.push((i, j, format!("G/H{i}->G/H{j}:{}", g.label(a))));
                coset_rep.push(a);
            }
        }
    }
    let compose = |gm: usize, fm: usize| {
        let (from, to) = (morphisms[fm].0, morphisms[gm].1);
        let a = g.mul(coset_rep[fm], coset_rep[gm]);
        index[&(from, to, members[to].coset_rep(g, a))]
    };
    let cat = FinCategory::from_rule(&format!("Or({})", g.name()), objects, morphisms.clone(), identities, compose)?;
    Ok(OrbitCategory { group: g.clone(), family: family.clone(), cat: Arc::new(cat), coset_rep, index })
}

/// The subgroup category `Sub(G, F)`: morphisms `H -> K` are classes of
/// conjugation maps `c(g)` with `g H g^{-1} ⊆ K`, modulo `Inn(K)`.
/// Classes are the double cosets `K g Z_G(H)`.
#[derive(Clone, Debug)]
pub struct SubCategory {
    pub group: Arc<FinGroup>,
    pub family: SubgroupFamily,
    pub cat: Arc<FinCategory>,
    /// Minimal representative `g` of each morphism's double coset.
    pub conj_rep: Vec<usize>,
    index: HashMap<(usize, usize, usize), usize>,
    centralizers: Vec<Subgroup>,
}

impl SubCategory {
    fn canonical(&self, from: usize, to: usize, g: usize) -> usize {
        double_coset_min(&self.group, &self.family.members[to], g, &self.centralizers[from])
    }

    /// The morphism represented by `c(g) : H_from -> H_to`, if it exists.
    pub fn morphism(&self, from: usize, to: usize, g: usize) -> Option<usize> {
        self.index.get(&(from, to, self.canonical(from, to, g))).copied()
    }

    /// The group `aut(H) = N_G H / (H · Z_G H)`, as sorted representatives of its cosets.
    pub fn automorphism_representatives(&self, obj: usize) -> Vec<usize> {
        self.cat.hom(obj, obj).iter().map(|&f| self.conj_rep[f]).collect()
    }
}

fn double_coset_min(g: &FinGroup, k: &Subgroup, x: usize, z: &Subgroup) -> usize {
    let mut best = usize::MAX;
    for &a in k.elements() {
        let ax = g.mul(a, x);
        for &c in z.elements() {
            best = best.min(g.mul(ax, c));
        }
    }
    best
}

pub fn sub_category_and_projection(or: &OrbitCategory) -> Result<(SubCategory, CatFunctor)> {
    let g = &or.group;
    let members = &or.family.members;
    let centralizers: Vec<Subgroup> = members.iter().map(|h| g.centralizer(h)).collect();
    let mut morphisms = Vec::new();
    let mut conj_rep = Vec::new();
    let mut index = HashMap::new();
    let mut identities = vec![usize::MAX; members.len()];
    for (i, h) in members.iter().enumerate() {
        for (j, k) in members.iter().enumerate() {
            let mut reps: Vec<usize> = (0..g.order())
                .filter(|&x| h.elements().iter().all(|&y| k.contains(g.conj(x, y))))
                .map(|x| double_coset_min(g, k, x, &centralizers[i]))
                .collect();
            reps.sort_unstable();
            reps.dedup();
            for x in reps {
                if i == j && x == 0 {
                    identities[i] = morphisms.len();
                }
                index.insert((i, j, x), morphisms.len());
                morphisms.push((i, j, format!("H{i}->H{j}:c({})", g.label(x))));
                conj_rep.push(x);
            }
        }
    }
    let compose = |gm: usize, fm: usize| {
        let (from, to) = (morphisms[fm].0, morphisms[gm].1);
        let x = g.mul(conj_rep[gm], conj_rep[fm]);
        index[&(from, to, double_coset_min(g, &members[to], x, &centralizers[from]))]
    };
    let objects: Vec<String> = (0..members.len()).map(|i| format!("H{i}")).collect();
    let cat = FinCategory::from_rule(&format!("Sub({})", g.name()), objects, morphisms.clone(), identities, compose)?;
    let sub = SubCategory { group: g.clone(), family: or.family.clone(), cat: Arc::new(cat), conj_rep, index, centralizers };
    // pr sends the G-map with coset aK to c(a^{-1}).
    let on_morphisms = (0..or.cat.num_morphisms())
        .map(|f| {
            let (from, to) = (or.cat.dom(f), or.cat.cod(f));
            sub.morphism(from, to, g.inv(or.coset_rep[f]))
                .ok_or_else(|| Error::Category(format!("projection undefined on morphism {f}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let pr = CatFunctor::new(or.cat.clone(), sub.cat.clone(), (0..members.len()).collect(), on_morphisms)?;
    Ok((sub, pr))
}

/// The transport groupoid of a G-set: objects are points, morphisms
/// `(s, g) : s -> g·s`.
#[derive(Clone, Debug)]
pub struct TransportGroupoid {
    pub action: GSetAction,
    pub cat: Arc<FinCategory>,
}

impl TransportGroupoid {
    /// Morphism index of `(s, g)`.
    pub fn morphism(&self, s: usize, g: usize) -> usize {
        s * self.action.group.order() + g
    }

    /// `(source point, group element)` of a morphism.
    pub fn decode(&self, f: usize) -> (usize, usize) {
        let n = self.action.group.order();
        (f / n, f % n)
    }

    /// Connected components, as lists of points.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.action.orbits()
    }

    /// Functor induced by a G-map `S -> T` given on points.
    pub fn functor_to(&self, other: &TransportGroupoid, map: &[usize]) -> Result<CatFunctor> {
        let on_morphisms = (0..self.cat.num_morphisms())
            .map(|f| {
                let (s, g) = self.decode(f);
                other.morphism(map[s], g)
            })
            .collect();
        CatFunctor::new(self.cat.clone(), other.cat.clone(), map.to_vec(), on_morphisms)
    }
}

pub fn transport_groupoid(action: &GSetAction) -> Result<TransportGroupoid> {
    let g = &action.group;
    let n = g.order();
    let objects = (0..action.size).map(|s| format!("p{s}")).collect();
    let mut morphisms = Vec::new();
    for s in 0..action.size {
        for x in 0..n {
            morphisms.push((s, action.act(x, s), format!("p{s}:{}", g.label(x))));
        }
    }
    let identities = (0..action.size).map(|s| s * n).collect();
    let cat = FinCategory::from_rule(
        &format!("G^{}({} points)", g.name(), action.size),
        objects,
        morphisms,
        identities,
        |gm, fm| {
            let (s, x) = (fm / n, fm % n);
            let y = gm % n;
            s * n + g.mul(y, x)
        },
    )?;
    Ok(TransportGroupoid { action: action.clone(), cat: Arc::new(cat) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<FinGroup> {
        Arc::new(FinGroup::cyclic(2))
    }

    #[test]
    fn orbit_category_of_z2() {
        let g = z2();
        let f = SubgroupFamily::all(&g).unwrap();
        let or = orbit_category(&f).unwrap();
        // members: trivial subgroup (0) then G (1)
        assert_eq!(or.cat.hom(0, 0).len(), 2);
        assert_eq!(or.cat.hom(0, 1).len(), 1);
        assert!(or.cat.hom(1, 0).is_empty());
        assert_eq!(or.cat.hom(1, 1).len(), 1);
    }

    #[test]
    fn sub_of_s3_automorphisms() {
        let g = Arc::new(FinGroup::symmetric(3));
        let f = SubgroupFamily::all(&g).unwrap();
        let or = orbit_category(&f).unwrap();
        let (sub, pr) = sub_category_and_projection(&or).unwrap();
        let t = g.generate(&[g.find("(1 2)").unwrap()]);
        let i = f.index_of(&t).unwrap();
        assert_eq!(sub.cat.hom(i, i).len(), 1);
        // A_3 has aut = N/(H Z) = S_3 / A_3
        let a3 = g.generate(&[g.find("(1 2 3)").unwrap()]);
        let j = f.index_of(&a3).unwrap();
        assert_eq!(sub.cat.hom(j, j).len(), 2);
        // Fibres of pr are orbits of the centralizer acting by a -> z a.
        for fm in 0..or.cat.num_morphisms() {
            let (h, k) = (or.cat.dom(fm), or.cat.cod(fm));
            let mut orbit: Vec<usize> = g
                .centralizer(&f.members[h])
                .elements()
                .iter()
                .map(|&z| or.morphism(h, k, g.mul(z, or.coset_rep[fm])).unwrap())
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            let mut fibre: Vec<usize> =
                or.cat.hom(h, k).iter().copied().filter(|&x| pr.on_morphisms[x] == pr.on_morphisms[fm]).collect();
            fibre.sort_unstable();
            assert_eq!(orbit, fibre);
        }
    }

    #[test]
    fn transport_groupoid_of_free_orbit() {
        let g = z2();
        let (s, _) = GSetAction::cosets(&g, &g.trivial_subgroup());
        let t = transport_groupoid(&s).unwrap();
        assert_eq!(t.cat.num_objects(), 2);
        assert_eq!(t.cat.num_morphisms(), 4);
        assert_eq!(t.components().len(), 1);
    }
}
