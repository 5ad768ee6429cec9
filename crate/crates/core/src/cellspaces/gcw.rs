use std::sync::Arc;

use num_bigint::BigInt;

use crate::catmod::{free_module, yoneda_map, CatModule, ModuleMap, Variance};
use crate::chainplex::{tensor_total, CatChainComplex, PlainChainComplex};
use crate::error::{Error, Result};
use crate::exact_abelian::{AbHom, FpAbGroup, IntMatrix};
use crate::fincat::{family_closure, FinCategory, FinGroup, OrbitCategory, Subgroup, SubgroupFamily};

/// `coeff · g·e_face` in the boundary of an orbit cell `G/H`: the `G`-map
/// `G/H -> G/K` sending `aH` to `agK`, which needs `g^{-1} H g ⊆ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GBoundaryTerm {
    pub face: usize,
    pub element: usize,
    pub coeff: i64,
}

/// A finite `G`-CW complex as equivariant cellular data.
#[derive(Clone, Debug)]
pub struct GCWComplex {
    pub group: Arc<FinGroup>,
    /// `cells[n][i]` is the isotropy of the `i`-th orbit of `n`-cells.
    pub cells: Vec<Vec<Subgroup>>,
    pub labels: Vec<Vec<String>>,
    pub boundaries: Vec<Vec<Vec<GBoundaryTerm>>>,
    /// Per dimension: `(orbit, coset representative)` of each cell of the
    /// underlying complex.
    points: Vec<Vec<(usize, usize)>>,
}

impl GCWComplex {
    pub fn new(
        group: Arc<FinGroup>,
        cells: Vec<Vec<Subgroup>>,
        labels: Vec<Vec<String>>,
        boundaries: Vec<Vec<Vec<GBoundaryTerm>>>,
    ) -> Result<Self> {
        let n = cells.len();
        if boundaries.len() != n || labels.len() != n {
            return Err(Error::Cells("cells, labels and boundaries disagree on the dimension".into()));
        }
        let g = &group;
        for d in 0..n {
            if boundaries[d].len() != cells[d].len() || labels[d].len() != cells[d].len() {
                return Err(Error::Cells(format!("dimension {d}: one boundary and one label per orbit")));
            }
            for (i, (h, terms)) in cells[d].iter().zip(&boundaries[d]).enumerate() {
                if d == 0 && !terms.is_empty() {
                    return Err(Error::Cells("0-cells have no boundary".into()));
                }
                for t in terms {
                    if t.face >= cells[d - 1].len() || t.element >= g.order() {
                        return Err(Error::Cells(format!("boundary of {} names an unknown face or element", labels[d][i])));
                    }
                    let k = &cells[d - 1][t.face];
                    if !h.elements().iter().all(|&x| k.contains(g.conj(g.inv(t.element), x))) {
                        return Err(Error::Cells(format!(
                            "boundary of {} uses {} which is not a G-map onto {}",
                            labels[d][i],
                            g.label(t.element),
                            labels[d - 1][t.face]
                        )));
                    }
                }
            }
        }
        let points = cells
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .flat_map(|(i, h)| coset_reps(g, h).into_iter().map(move |a| (i, a)))
                    .collect()
            })
            .collect();
        let x = GCWComplex { group, cells, labels, boundaries, points };
        for d in 2..n {
            let prod = x.underlying_boundary(d - 1).mul(&x.underlying_boundary(d))?;
            if !prod.is_zero() {
                return Err(Error::Cells(format!("d∘d is nonzero out of dimension {d}")));
            }
        }
        Ok(x)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().rposition(|c| !c.is_empty())
    }

    /// All isotropy groups that occur.
    pub fn isotropy(&self) -> Vec<Subgroup> {
        let mut v: Vec<Subgroup> = self.cells.iter().flatten().cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    /// Smallest family containing every isotropy group.
    pub fn isotropy_family(&self) -> Result<SubgroupFamily> {
        family_closure(&self.group, &self.isotropy())
    }

    /// Number of cells of the underlying complex in each dimension.
    pub fn underlying_counts(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.len()).collect()
    }

    fn point_index(&self, d: usize, orbit: usize, a: usize) -> usize {
        let rep = self.cells[d][orbit].coset_rep(&self.group, a);
        self.points[d].iter().position(|&p| p == (orbit, rep)).expect("coset representative is a point")
    }

    /// Integer boundary matrix `C_d -> C_{d-1}` of the underlying complex.
    pub fn underlying_boundary(&self, d: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.points[d - 1].len(), self.points[d].len());
        for (col, &(i, a)) in self.points[d].iter().enumerate() {
            for t in &self.boundaries[d][i] {
                let row = self.point_index(d - 1, t.face, self.group.mul(a, t.element));
                m.add_to(row, col, &BigInt::from(t.coeff));
            }
        }
        m
    }

    fn act_on_points(&self, d: usize, g: usize) -> Vec<usize> {
        self.points[d].iter().map(|&(i, a)| self.point_index(d, i, self.group.mul(g, a))).collect()
    }

    /// Underlying cells of dimension `d` fixed by `h`.
    fn fixed_points(&self, d: usize, h: &Subgroup) -> Vec<usize> {
        let acts: Vec<Vec<usize>> = h.elements().iter().map(|&x| self.act_on_points(d, x)).collect();
        (0..self.points[d].len()).filter(|&p| acts.iter().all(|a| a[p] == p)).collect()
    }
}

fn coset_reps(g: &FinGroup, h: &Subgroup) -> Vec<usize> {
    let mut reps: Vec<usize> = (0..g.order()).map(|a| h.coset_rep(g, a)).collect();
    reps.sort_unstable();
    reps.dedup();
    reps
}

/// The cellular chains of `X` as a complex of left `Z[G]`-modules over the
/// one-object category `base` of `G`.
pub fn underlying_chains(x: &GCWComplex, base: &Arc<FinCategory>) -> Result<CatChainComplex> {
    if base.num_objects() != 1 || base.num_morphisms() != x.group.order() {
        return Err(Error::BaseMismatch("underlying chains need the one-object category of the group".into()));
    }
    let dims = x.cells.len();
    let mut modules = Vec::with_capacity(dims);
    for d in 0..dims {
        let n = x.points[d].len();
        let v = FpAbGroup::free(n);
        let action = (0..x.group.order())
            .map(|g| {
                let perm = x.act_on_points(d, g);
                let mut m = IntMatrix::zeros(n, n);
                for (s, &t) in perm.iter().enumerate() {
                    m.set(t, s, BigInt::from(1));
                }
                AbHom::new(v.clone(), v.clone(), m)
            })
            .collect::<Result<Vec<_>>>()?;
        modules.push(CatModule { base: base.clone(), variance: Variance::Covariant, values: vec![v], action, marker: None });
    }
    let differentials = (1..dims)
        .map(|d| {
            let m = x.underlying_boundary(d);
            Ok(ModuleMap { components: vec![AbHom::new(modules[d].values[0].clone(), modules[d - 1].values[0].clone(), m)?] })
        })
        .collect::<Result<Vec<_>>>()?;
    CatChainComplex::new(base.clone(), Variance::Covariant, 0, modules, differentials)
}

/// The contravariant `Or(G, F)`-chain complex `G/K ↦ C_*(X^K)`, free on the
/// orbit cells.
pub fn fixed_point_chains(x: &GCWComplex, or: &OrbitCategory) -> Result<CatChainComplex> {
    if *or.group != *x.group {
        return Err(Error::BaseMismatch("orbit category of a different group".into()));
    }
    let v = Variance::Contravariant;
    let objects: Vec<Vec<usize>> = x
        .cells
        .iter()
        .zip(&x.labels)
        .map(|(row, labels)| {
            row.iter()
                .zip(labels)
                .map(|(h, l)| {
                    or.family.index_of(h).ok_or_else(|| Error::Isotropy(format!("isotropy {} of {l} is outside the family", h.describe(&x.group))))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let modules: Vec<CatModule> = objects.iter().map(|o| free_module(&or.cat, v, o)).collect();
    if modules.is_empty() {
        return Ok(CatChainComplex { base: or.cat.clone(), variance: v, lo: 0, modules, differentials: Vec::new() });
    }
    let mut diffs = Vec::new();
    for d in 1..modules.len() {
        let marker = modules[d - 1].marker.as_ref().expect("free module");
        let images: Vec<Vec<BigInt>> = objects[d]
            .iter()
            .zip(&x.boundaries[d])
            .map(|(&obj, terms)| {
                let mut img = vec![BigInt::from(0); modules[d - 1].values[obj].ngens()];
                for t in terms {
                    let target = objects[d - 1][t.face];
                    let f = or.morphism(obj, target, t.element).expect("checked at construction");
                    img[marker.index(&or.cat, v, obj, t.face, f)] += t.coeff;
                }
                img
            })
            .collect();
        diffs.push(yoneda_map(&modules[d], &modules[d - 1], &images)?);
    }
    CatChainComplex::new(or.cat.clone(), v, 0, modules, diffs)
}

/// Bredon homology `H_p(C^{Or}_*(X) ⊗_{Or} M)`.
pub fn bredon_homology(x: &GCWComplex, or: &OrbitCategory, m: &CatModule, p: i64) -> Result<FpAbGroup> {
    Ok(bredon_chains(x, or, m)?.homology(p)?.bare())
}

pub fn bredon_chains(x: &GCWComplex, or: &OrbitCategory, m: &CatModule) -> Result<PlainChainComplex> {
    if m.base != or.cat || m.variance != Variance::Covariant {
        return Err(Error::BaseMismatch("Bredon coefficients must be covariant over the orbit category".into()));
    }
    let c = fixed_point_chains(x, or)?;
    Ok(tensor_total(&c, &CatChainComplex::concentrated(0, m.clone()))?.complex)
}

/// Cellular chains of `Z_G(H) \ X^H`.
pub fn centralizer_quotient_chains(x: &GCWComplex, h: &Subgroup) -> Result<PlainChainComplex> {
    if !x.isotropy_family()?.contains(h) {
        return Err(Error::Isotropy(format!("{} is not in the isotropy family", h.describe(&x.group))));
    }
    let z = x.group.centralizer(h);
    let dims = x.cells.len();
    // orbit id of each fixed cell, and a representative of each orbit
    let mut orbit_of = Vec::with_capacity(dims);
    let mut reps = Vec::with_capacity(dims);
    for d in 0..dims {
        let fixed = x.fixed_points(d, h);
        let acts: Vec<Vec<usize>> = z.elements().iter().map(|&g| x.act_on_points(d, g)).collect();
        let mut id = vec![usize::MAX; x.points[d].len()];
        let mut r = Vec::new();
        for &p in &fixed {
            if id[p] != usize::MAX {
                continue;
            }
            for a in &acts {
                id[a[p]] = r.len();
            }
            r.push(p);
        }
        orbit_of.push(id);
        reps.push(r);
    }
    let groups: Vec<FpAbGroup> = reps.iter().map(|r| FpAbGroup::free(r.len())).collect();
    let mut diffs = Vec::new();
    for d in 1..dims {
        let full = x.underlying_boundary(d);
        let mut m = IntMatrix::zeros(reps[d - 1].len(), reps[d].len());
        for (col, &p) in reps[d].iter().enumerate() {
            for row in 0..full.rows() {
                let v = full.get(row, p);
                if v.sign() != num_bigint::Sign::NoSign {
                    let o = orbit_of[d - 1][row];
                    if o == usize::MAX {
                        return Err(Error::Cells("boundary of a fixed cell leaves the fixed set".into()));
                    }
                    m.add_to(o, col, v);
                }
            }
        }
        diffs.push(AbHom::new(groups[d].clone(), groups[d - 1].clone(), m)?);
    }
    if groups.is_empty() {
        return Ok(PlainChainComplex::zero());
    }
    PlainChainComplex::new(0, groups, diffs)
}

/// A point with trivial action.
pub fn gcw_point(g: &Arc<FinGroup>) -> GCWComplex {
    GCWComplex::new(g.clone(), vec![vec![g.whole()]], vec![vec!["pt".into()]], vec![vec![Vec::new()]]).expect("a point")
}

/// The free orbit `G/1` as a discrete set.
pub fn gcw_free_orbit(g: &Arc<FinGroup>) -> GCWComplex {
    GCWComplex::new(g.clone(), vec![vec![g.trivial_subgroup()]], vec![vec!["G".into()]], vec![vec![Vec::new()]]).expect("an orbit")
}

fn term(face: usize, element: usize, coeff: i64) -> GBoundaryTerm {
    GBoundaryTerm { face, element, coeff }
}

/// `Z/2` acting on the circle by a reflection: two fixed vertices, one free
/// orbit of edges.
pub fn z2_reflection_circle() -> GCWComplex {
    let g = Arc::new(FinGroup::cyclic(2));
    GCWComplex::new(
        g.clone(),
        vec![vec![g.whole(), g.whole()], vec![g.trivial_subgroup()]],
        vec![vec!["v0".into(), "v1".into()], vec!["e".into()]],
        vec![vec![Vec::new(), Vec::new()], vec![vec![term(1, 0, 1), term(0, 0, -1)]]],
    )
    .expect("reflection circle")
}

/// `Z/2` acting freely on the circle by the antipodal map.
pub fn z2_antipodal_circle() -> GCWComplex {
    let g = Arc::new(FinGroup::cyclic(2));
    GCWComplex::new(
        g.clone(),
        vec![vec![g.trivial_subgroup()], vec![g.trivial_subgroup()]],
        vec![vec!["v".into()], vec!["e".into()]],
        vec![vec![Vec::new()], vec![vec![term(0, 1, 1), term(0, 0, -1)]]],
    )
    .expect("antipodal circle")
}

/// `Z/2` acting freely on the 2-sphere by the antipodal map.
pub fn z2_antipodal_sphere() -> GCWComplex {
    let g = Arc::new(FinGroup::cyclic(2));
    let free = g.trivial_subgroup();
    GCWComplex::new(
        g.clone(),
        vec![vec![free.clone()], vec![free.clone()], vec![free]],
        vec![vec!["v".into()], vec!["e".into()], vec!["D".into()]],
        vec![vec![Vec::new()], vec![vec![term(0, 1, 1), term(0, 0, -1)]], vec![vec![term(0, 0, 1), term(0, 1, 1)]]],
    )
    .expect("antipodal sphere")
}

/// `Z/2` acting on the 2-sphere by reflection in the equatorial plane.
pub fn z2_reflection_sphere() -> GCWComplex {
    let g = Arc::new(FinGroup::cyclic(2));
    GCWComplex::new(
        g.clone(),
        vec![vec![g.whole()], vec![g.whole()], vec![g.trivial_subgroup()]],
        vec![vec!["v".into()], vec!["a".into()], vec!["D".into()]],
        vec![vec![Vec::new()], vec![Vec::new()], vec![vec![term(0, 0, 1)]]],
    )
    .expect("reflection sphere")
}

/// `S_3` acting on the boundary of a triangle: vertices, edge midpoints and a
/// free orbit of half-edges.
pub fn s3_reflection_circle() -> GCWComplex {
    let g = Arc::new(FinGroup::symmetric(3));
    // Vertex 1 is fixed by (2 3); the midpoint of edge {1, 2} by (1 2).
    let s23 = g.find("(2 3)").expect("transposition");
    let s12 = g.find("(1 2)").expect("transposition");
    GCWComplex::new(
        g.clone(),
        vec![vec![g.generate(&[s23]), g.generate(&[s12])], vec![g.trivial_subgroup()]],
        vec![vec!["vertex".into(), "midpoint".into()], vec!["half-edge".into()]],
        vec![vec![Vec::new(), Vec::new()], vec![vec![term(1, 0, 1), term(0, 0, -1)]]],
    )
    .expect("triangle boundary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::orbit_category;

    fn or_all(g: &Arc<FinGroup>) -> OrbitCategory {
        orbit_category(&SubgroupFamily::all(g).unwrap()).unwrap()
    }

    #[test]
    fn reflection_circle_fixed_points() {
        let x = z2_reflection_circle();
        let or = or_all(&x.group);
        let c = fixed_point_chains(&x, &or).unwrap();
        assert!(c.is_free());
        let whole = or.family.index_of(&x.group.whole()).unwrap();
        let triv = or.family.index_of(&x.group.trivial_subgroup()).unwrap();
        let at_g = c.evaluate(whole);
        assert_eq!((at_g.group(0).rank(), at_g.group(1).rank()), (2, 0));
        let at_1 = c.evaluate(triv);
        assert_eq!(at_1.homology(1).unwrap(), FpAbGroup::free(1));
        assert_eq!(at_1.homology(0).unwrap(), FpAbGroup::free(1));
    }

    #[test]
    fn bredon_homology_of_the_reflection_circle() {
        let x = z2_reflection_circle();
        let or = or_all(&x.group);
        let z = CatModule::constant(or.cat.clone(), Variance::Covariant, &FpAbGroup::free(1));
        assert_eq!(bredon_homology(&x, &or, &z, 0).unwrap(), FpAbGroup::free(1));
        assert!(bredon_homology(&x, &or, &z, 1).unwrap().is_trivial());
    }

    #[test]
    fn centralizer_quotients() {
        let x = z2_reflection_circle();
        let g = x.group.clone();
        let q = centralizer_quotient_chains(&x, &g.whole()).unwrap();
        assert_eq!(q.group(0).rank(), 2);
        assert_eq!(q.group(1).rank(), 0);
        let f = gcw_free_orbit(&g);
        let q = centralizer_quotient_chains(&f, &g.trivial_subgroup()).unwrap();
        assert_eq!(q.group(0).rank(), 1);
        assert!(centralizer_quotient_chains(&f, &g.whole()).is_err());
    }

    #[test]
    fn spheres_have_the_right_homology() {
        let base = Arc::new(FinGroup::cyclic(2).as_category());
        for x in [z2_reflection_sphere(), z2_antipodal_sphere()] {
            let c = underlying_chains(&x, &base).unwrap().evaluate(0);
            assert_eq!(c.homology(0).unwrap(), FpAbGroup::free(1));
            assert!(c.homology(1).unwrap().is_trivial());
            assert_eq!(c.homology(2).unwrap(), FpAbGroup::free(1));
        }
        let s3 = s3_reflection_circle();
        assert_eq!(s3.underlying_counts(), vec![6, 6]);
        let base = Arc::new(s3.group.as_category());
        let c = underlying_chains(&s3, &base).unwrap().evaluate(0);
        assert_eq!(c.homology(1).unwrap(), FpAbGroup::free(1));
    }

    #[test]
    fn non_equivariant_boundary_rejected() {
        let g = Arc::new(FinGroup::cyclic(2));
        // A fixed edge cannot have a free vertex in its boundary.
        let r = GCWComplex::new(
            g.clone(),
            vec![vec![g.trivial_subgroup()], vec![g.whole()]],
            vec![vec!["v".into()], vec!["e".into()]],
            vec![vec![Vec::new()], vec![vec![term(0, 0, 1)]]],
        );
        assert!(matches!(r, Err(Error::Cells(_))));
    }
}
