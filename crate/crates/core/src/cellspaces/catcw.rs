use std::sync::Arc;

use num_bigint::BigInt;

use crate::catmod::{free_module, yoneda_map, CatModule, Variance};
use crate::chainplex::CatChainComplex;
use crate::error::{Error, Result};
use crate::exact_abelian::FpAbGroup;
use crate::fincat::{rf_morphism, standard_category, FinCategory, StandardKind};

/// One term `coeff · (face ∘ morphism)` in the boundary of a cell; the
/// morphism runs from the cell's object to the face's object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFace {
    pub morphism: usize,
    pub face: usize,
    pub coeff: i64,
}

/// A contravariant CW complex over a finite category, kept at the chain
/// level: each `n`-cell is a free cell `mor(?, c)` with a boundary in the
/// `(n-1)`-cells.
#[derive(Clone, Debug)]
pub struct CatCWComplex {
    pub base: Arc<FinCategory>,
    /// `cells[n][i]` is the object of the `i`-th `n`-cell.
    pub cells: Vec<Vec<usize>>,
    pub labels: Vec<Vec<String>>,
    /// `boundaries[n][i]`; empty for 0-cells.
    pub boundaries: Vec<Vec<Vec<CellFace>>>,
    /// Highest degree in which evaluations are unaffected by truncation.
    pub valid_degree: Option<usize>,
}

impl CatCWComplex {
    pub fn new(
        base: Arc<FinCategory>,
        cells: Vec<Vec<usize>>,
        labels: Vec<Vec<String>>,
        boundaries: Vec<Vec<Vec<CellFace>>>,
    ) -> Result<Self> {
        let x = CatCWComplex { base, cells, labels, boundaries, valid_degree: None };
        x.validate()?;
        Ok(x)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().rposition(|c| !c.is_empty())
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.len()).collect()
    }

    fn validate(&self) -> Result<()> {
        let n = self.cells.len();
        if self.boundaries.len() != n || self.labels.len() != n {
            return Err(Error::Cells("cells, labels and boundaries disagree on the dimension".into()));
        }
        for d in 0..n {
            if self.boundaries[d].len() != self.cells[d].len() || self.labels[d].len() != self.cells[d].len() {
                return Err(Error::Cells(format!("dimension {d}: one boundary and one label per cell")));
            }
            for (i, (&obj, faces)) in self.cells[d].iter().zip(&self.boundaries[d]).enumerate() {
                if obj >= self.base.num_objects() {
                    return Err(Error::Cells(format!("cell {} sits at an unknown object", self.labels[d][i])));
                }
                if d == 0 && !faces.is_empty() {
                    return Err(Error::Cells("0-cells have no boundary".into()));
                }
                for t in faces {
                    let ok = t.face < self.cells[d - 1].len()
                        && t.morphism < self.base.num_morphisms()
                        && self.base.dom(t.morphism) == obj
                        && self.base.cod(t.morphism) == self.cells[d - 1][t.face];
                    if !ok {
                        return Err(Error::Cells(format!("boundary of {} has a term with mismatched ends", self.labels[d][i])));
                    }
                }
            }
        }
        cellular_chain_complex(self).map(|_| ())
    }

    /// The complex with one top-dimensional or otherwise unused cell removed.
    pub fn remove_cell(&self, dim: usize, index: usize) -> Result<Self> {
        if dim >= self.cells.len() || index >= self.cells[dim].len() {
            return Err(Error::Cells(format!("no cell {index} in dimension {dim}")));
        }
        if dim + 1 < self.cells.len() && self.boundaries[dim + 1].iter().flatten().any(|t| t.face == index) {
            return Err(Error::Cells(format!("{} is a face of a higher cell", self.labels[dim][index])));
        }
        let mut x = self.clone();
        x.cells[dim].remove(index);
        x.labels[dim].remove(index);
        x.boundaries[dim].remove(index);
        if dim + 1 < x.cells.len() {
            for t in x.boundaries[dim + 1].iter_mut().flatten() {
                if t.face > index {
                    t.face -= 1;
                }
            }
        }
        Ok(x)
    }
}

/// Free contravariant chain complex of a [`CatCWComplex`].
pub fn cellular_chain_complex(x: &CatCWComplex) -> Result<CatChainComplex> {
    let v = Variance::Contravariant;
    let modules: Vec<CatModule> = x.cells.iter().map(|c| free_module(&x.base, v, c)).collect();
    if modules.is_empty() {
        return Ok(CatChainComplex { base: x.base.clone(), variance: v, lo: 0, modules, differentials: Vec::new() });
    }
    let mut diffs = Vec::new();
    for d in 1..modules.len() {
        let (src, tgt) = (&modules[d], &modules[d - 1]);
        let marker = tgt.marker.as_ref().expect("free module");
        let images: Vec<Vec<BigInt>> = x.cells[d]
            .iter()
            .zip(&x.boundaries[d])
            .map(|(&obj, faces)| {
                let mut img = vec![BigInt::from(0); tgt.values[obj].ngens()];
                for t in faces {
                    img[marker.index(&x.base, v, obj, t.face, t.morphism)] += t.coeff;
                }
                img
            })
            .collect();
        diffs.push(yoneda_map(src, tgt, &images)?);
    }
    CatChainComplex::new(x.base.clone(), v, 0, modules, diffs).map_err(|e| Error::Cells(format!("boundary inconsistency: {e}")))
}

/// Truncated models of the contravariant classifying spaces of `N` and `RF`
/// over the objects `0..=k`.
pub fn classifying_model(kind: StandardKind, k: usize) -> Result<CatCWComplex> {
    if k < 1 {
        return Err(Error::Truncation("classifying models need K >= 1".into()));
    }
    let base = Arc::new(standard_category(kind, k));
    let id = |n: usize| base.identity(n);
    let face = |morphism, face, coeff| CellFace { morphism, face, coeff };
    let mut x = match kind {
        StandardKind::N => {
            let step = |n: usize| base.hom(n, n + 1)[0];
            let ones: Vec<Vec<CellFace>> = (0..k).map(|n| vec![face(step(n), n + 1, 1), face(id(n), n, -1)]).collect();
            CatCWComplex {
                base: base.clone(),
                cells: vec![(0..=k).collect(), (0..k).collect()],
                labels: vec![(0..=k).map(|n| format!("v({n})")).collect(), (0..k).map(|n| format!("e({n})")).collect()],
                boundaries: vec![vec![Vec::new(); k + 1], ones],
                valid_degree: None,
            }
        }
        StandardKind::RF => {
            let h = |n: usize| rf_morphism(&base, n, n + 1, 1);
            let v = |n: usize| rf_morphism(&base, n, n + 1, 0);
            // 1-cells: horizontal ones at 0..k, then vertical ones at k..2k.
            let mut ones = Vec::new();
            for n in 0..k {
                ones.push(vec![face(h(n), n + 1, 1), face(id(n), n, -1)]);
            }
            for n in 0..k {
                ones.push(vec![face(v(n), n + 1, 1), face(id(n), n, -1)]);
            }
            let twos: Vec<Vec<CellFace>> = (0..k.saturating_sub(1))
                .map(|n| vec![face(id(n), n, 1), face(h(n), k + n + 1, 1), face(v(n), n + 1, -1), face(id(n), k + n, -1)])
                .collect();
            let mut labels = vec![(0..=k).map(|n| format!("Q0({n})")).collect::<Vec<_>>()];
            labels.push((0..k).map(|n| format!("Q1h({n})")).chain((0..k).map(|n| format!("Q1v({n})"))).collect());
            labels.push((0..k.saturating_sub(1)).map(|n| format!("Q2({n})")).collect());
            CatCWComplex {
                base: base.clone(),
                cells: vec![(0..=k).collect(), (0..k).chain(0..k).collect(), (0..k.saturating_sub(1)).collect()],
                labels,
                boundaries: vec![vec![Vec::new(); k + 1], ones, twos],
                valid_degree: None,
            }
        }
    };
    x.validate()?;
    let dim = x.cells.len() - 1;
    x.valid_degree = k.checked_sub(dim);
    Ok(x)
}

/// Homology of the evaluation at one object.
#[derive(Clone, Debug)]
pub struct ObjectContractibility {
    pub object: String,
    /// `H_0 ..= H_r`
    pub homology: Vec<FpAbGroup>,
    pub passes: bool,
    /// Lowest degree with unexpected homology.
    pub failing_degree: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ContractibilityReport {
    pub degree_bound: usize,
    pub objects: Vec<ObjectContractibility>,
    pub passes: bool,
}

impl ContractibilityReport {
    /// First failing object and degree.
    pub fn witness(&self) -> Option<(&str, usize)> {
        self.objects.iter().find_map(|o| o.failing_degree.map(|d| (o.object.as_str(), d)))
    }
}

/// Checks `H_0 = Z` and `H_p = 0` for `1 <= p <= r` at every object.
pub fn contractibility_check(x: &CatCWComplex, r: usize) -> Result<ContractibilityReport> {
    if let Some(v) = x.valid_degree {
        if r > v {
            return Err(Error::Truncation(format!("degree bound {r} exceeds the truncation-valid range 0..={v}")));
        }
    }
    let cx = cellular_chain_complex(x)?;
    let mut objects = Vec::new();
    for c in 0..x.base.num_objects() {
        let ev = cx.evaluate(c);
        let mut homology = Vec::new();
        let mut failing_degree = None;
        for p in 0..=r {
            let h = ev.homology(p as i64)?;
            let expected = if p == 0 { FpAbGroup::free(1) } else { FpAbGroup::trivial() };
            if h.bare() != expected && failing_degree.is_none() {
                failing_degree = Some(p);
            }
            homology.push(h.bare());
        }
        objects.push(ObjectContractibility { object: x.base.object_label(c).to_string(), homology, passes: failing_degree.is_none(), failing_degree });
    }
    let passes = objects.iter().all(|o| o.passes);
    Ok(ContractibilityReport { degree_bound: r, objects, passes })
}
