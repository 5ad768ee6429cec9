use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::module::{CatModule, ModuleMap, Variance};
use crate::error::{Error, Result};
use crate::exact_abelian::{hom_element_to_map, hom_group, kernel_basis, subquotient, AbHom, FpAbGroup, IntMatrix};

/// Ambient layout `⊕_c Z^{k_M(c)} ⊗ Z^{k_N(c)}` used by tensor products
/// over a category. Entry `(c, i, j)` sits at `offsets[c] + i * right[c] + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorLayout {
    pub offsets: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub dim: usize,
}

impl TensorLayout {
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(left.len());
        let mut dim = 0;
        for (a, b) in left.iter().zip(&right) {
            offsets.push(dim);
            dim += a * b;
        }
        TensorLayout { offsets, left, right, dim }
    }

    #[inline]
    pub fn index(&self, c: usize, i: usize, j: usize) -> usize {
        self.offsets[c] + i * self.right[c] + j
    }
}

fn check_pair(m: &CatModule, n: &CatModule) -> Result<()> {
    if m.base != n.base {
        return Err(Error::BaseMismatch(format!("tensor over {} and {}", m.base.name(), n.base.name())));
    }
    if m.variance != Variance::Contravariant || n.variance != Variance::Covariant {
        return Err(Error::BaseMismatch("tensor over a category needs a contravariant left and a covariant right factor".into()));
    }
    Ok(())
}

/// Layout and relation columns of `M ⊗_C N`.
pub fn tensor_relations(m: &CatModule, n: &CatModule) -> Result<(TensorLayout, IntMatrix)> {
    check_pair(m, n)?;
    let base = &m.base;
    let nobj = base.num_objects();
    let layout = TensorLayout::new(
        (0..nobj).map(|c| m.values[c].ngens()).collect(),
        (0..nobj).map(|c| n.values[c].ngens()).collect(),
    );
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..nobj {
        let (a, b) = (&m.values[c], &n.values[c]);
        for i in 0..a.ngens() {
            for j in 0..b.ngens() {
                let o = a.generator_order(i).gcd(&b.generator_order(j));
                if !o.is_zero() {
                    let mut v = vec![BigInt::zero(); layout.dim];
                    v[layout.index(c, i, j)] = o;
                    cols.push(v);
                }
            }
        }
    }
    for phi in 0..base.num_morphisms() {
        if base.is_identity(phi) {
            continue;
        }
        let (c, d) = (base.dom(phi), base.cod(phi));
        // M(phi) : M(d) -> M(c), N(phi) : N(c) -> N(d)
        let mp = m.action[phi].matrix();
        let np = n.action[phi].matrix();
        for i in 0..layout.left[d] {
            for j in 0..layout.right[c] {
                let mut v = vec![BigInt::zero(); layout.dim];
                for r in 0..layout.left[c] {
                    let x = mp.get(r, i);
                    if !x.is_zero() {
                        v[layout.index(c, r, j)] += x;
                    }
                }
                for s in 0..layout.right[d] {
                    let y = np.get(s, j);
                    if !y.is_zero() {
                        v[layout.index(d, i, s)] -= y;
                    }
                }
                if v.iter().any(|x| !x.is_zero()) {
                    cols.push(v);
                }
            }
        }
    }
    let rels = IntMatrix::from_columns(layout.dim, &cols);
    Ok((layout, rels))
}

/// `M ⊗_C N` as a coequalizer, with a witness into the tensor layout.
pub fn tensor_over_cat(m: &CatModule, n: &CatModule) -> Result<FpAbGroup> {
    let (layout, rels) = tensor_relations(m, n)?;
    subquotient(layout.dim, None, &rels)
}

/// Ambient matrix of `f ⊗ g` between two tensor layouts, from objectwise
/// matrices on canonical coordinates.
pub fn tensor_map_ambient(src: &TensorLayout, tgt: &TensorLayout, f: &[&IntMatrix], g: &[&IntMatrix]) -> IntMatrix {
    let mut out = IntMatrix::zeros(tgt.dim, src.dim);
    for c in 0..src.left.len() {
        let (fc, gc) = (f[c], g[c]);
        for i in 0..src.left[c] {
            for j in 0..src.right[c] {
                let col = src.index(c, i, j);
                for i2 in 0..tgt.left[c] {
                    let a = fc.get(i2, i);
                    if a.is_zero() {
                        continue;
                    }
                    for j2 in 0..tgt.right[c] {
                        let b = gc.get(j2, j);
                        if !b.is_zero() {
                            out.add_to(tgt.index(c, i2, j2), col, &(a * b));
                        }
                    }
                }
            }
        }
    }
    out
}

/// The homomorphism `f ⊗ g : M ⊗ N -> M' ⊗ N'` between tensor groups built
/// by [`tensor_over_cat`].
pub fn tensor_map(
    src: &FpAbGroup,
    tgt: &FpAbGroup,
    (m, n): (&CatModule, &CatModule),
    (m2, n2): (&CatModule, &CatModule),
    f: &ModuleMap,
    g: &ModuleMap,
) -> Result<AbHom> {
    let nobj = m.base.num_objects();
    let ls = TensorLayout::new((0..nobj).map(|c| m.values[c].ngens()).collect(), (0..nobj).map(|c| n.values[c].ngens()).collect());
    let lt =
        TensorLayout::new((0..nobj).map(|c| m2.values[c].ngens()).collect(), (0..nobj).map(|c| n2.values[c].ngens()).collect());
    let fm: Vec<&IntMatrix> = f.components.iter().map(|h| h.matrix()).collect();
    let gm: Vec<&IntMatrix> = g.components.iter().map(|h| h.matrix()).collect();
    AbHom::from_ambient(src, tgt, &tensor_map_ambient(&ls, &lt, &fm, &gm))
}

/// Ambient layout `⊕_c Z^{k_N(c) × k_M(c)}` of `hom_C(M, N)`; entry `(c, i, j)`
/// (row `i`, column `j`) sits at `offsets[c] + j * rows[c] + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomLayout {
    pub offsets: Vec<usize>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub dim: usize,
}

impl HomLayout {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len());
        let mut dim = 0;
        for (a, b) in rows.iter().zip(&cols) {
            offsets.push(dim);
            dim += a * b;
        }
        HomLayout { offsets, rows, cols, dim }
    }

    pub fn of(m: &CatModule, n: &CatModule) -> Self {
        let nobj = m.values.len();
        HomLayout::new((0..nobj).map(|c| n.values[c].ngens()).collect(), (0..nobj).map(|c| m.values[c].ngens()).collect())
    }

    #[inline]
    pub fn index(&self, c: usize, i: usize, j: usize) -> usize {
        self.offsets[c] + j * self.rows[c] + i
    }
}

/// Generators and relations of `hom_C(M, N)` inside its layout.
pub fn hom_presentation(m: &CatModule, n: &CatModule) -> Result<(HomLayout, IntMatrix, IntMatrix)> {
    if m.base != n.base || m.variance != n.variance {
        return Err(Error::BaseMismatch("hom over a category needs modules of the same base and variance".into()));
    }
    let base = &m.base;
    let nobj = base.num_objects();
    let layout = HomLayout::of(m, n);
    // Entrywise generator lattice of ⊕_c Hom(M(c), N(c)).
    let mut g0: Vec<Vec<BigInt>> = Vec::new();
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..nobj {
        let (a, b) = (&m.values[c], &n.values[c]);
        let kbt = b.torsion().len();
        for j in 0..a.ngens() {
            let aj = a.generator_order(j);
            for i in 0..b.ngens() {
                let g = if aj.is_zero() {
                    BigInt::one()
                } else if i < kbt {
                    let t = &b.torsion()[i];
                    t / t.gcd(&aj)
                } else {
                    BigInt::zero()
                };
                let pos = layout.index(c, i, j);
                if !g.is_zero() {
                    let mut v = vec![BigInt::zero(); layout.dim];
                    v[pos] = g;
                    g0.push(v);
                }
                if i < kbt {
                    let mut v = vec![BigInt::zero(); layout.dim];
                    v[pos] = b.torsion()[i].clone();
                    rels.push(v);
                }
            }
        }
    }
    let g0 = IntMatrix::from_columns(layout.dim, &g0);
    let rels = IntMatrix::from_columns(layout.dim, &rels);
    // Naturality: N(phi) eta_s - eta_t M(phi) must vanish modulo the relations of N(t).
    let mut crow = 0usize;
    let mut blocks: Vec<(usize, usize, usize)> = Vec::new();
    for phi in 0..base.num_morphisms() {
        if base.is_identity(phi) {
            continue;
        }
        let (s, t) = m.variance.ends(base, phi);
        blocks.push((phi, crow, t));
        crow += n.values[t].ngens() * m.values[s].ngens();
    }
    if crow == 0 || g0.cols() == 0 {
        return Ok((layout, g0, rels));
    }
    let mut phi_mat = IntMatrix::zeros(crow, layout.dim);
    let mut r_cols: Vec<Vec<BigInt>> = Vec::new();
    for &(phi, row0, t) in &blocks {
        let s = m.variance.ends(base, phi).0;
        let np = n.action[phi].matrix();
        let mp = m.action[phi].matrix();
        let (kns, knt, kms, kmt) = (n.values[s].ngens(), n.values[t].ngens(), m.values[s].ngens(), m.values[t].ngens());
        for j in 0..kms {
            for i in 0..knt {
                let row = row0 + j * knt + i;
                for a in 0..kns {
                    let x = np.get(i, a);
                    if !x.is_zero() {
                        phi_mat.add_to(row, layout.index(s, a, j), x);
                    }
                }
                for b in 0..kmt {
                    let y = mp.get(b, j);
                    if !y.is_zero() {
                        phi_mat.add_to(row, layout.index(t, i, b), &-y);
                    }
                }
            }
            for (i, tor) in n.values[t].torsion().iter().enumerate() {
                let mut v = vec![BigInt::zero(); crow];
                v[row0 + j * knt + i] = tor.clone();
                r_cols.push(v);
            }
        }
    }
    let p = phi_mat.mul(&g0)?;
    let stacked = p.hstack(&IntMatrix::from_columns(crow, &r_cols))?;
    let ker = kernel_basis(&stacked);
    let idx: Vec<usize> = (0..g0.cols()).collect();
    let gens = g0.mul(&ker.select_rows(&idx))?;
    Ok((layout, gens, rels))
}

/// `hom_C(M, N)` as an equalizer, with a witness into the hom layout.
pub fn hom_over_cat(m: &CatModule, n: &CatModule) -> Result<FpAbGroup> {
    let (layout, gens, rels) = hom_presentation(m, n)?;
    subquotient(layout.dim, Some(&gens), &rels)
}

/// Reads an element of a group built by [`hom_over_cat`] as a module map.
pub fn hom_element_to_module_map(h: &FpAbGroup, m: &CatModule, n: &CatModule, x: &[BigInt]) -> Result<ModuleMap> {
    let layout = HomLayout::of(m, n);
    let amb = h.lift(x)?;
    let mut components = Vec::with_capacity(m.values.len());
    for c in 0..m.values.len() {
        let mut mat = IntMatrix::zeros(layout.rows[c], layout.cols[c]);
        for j in 0..layout.cols[c] {
            for i in 0..layout.rows[c] {
                mat.set(i, j, amb[layout.index(c, i, j)].clone());
            }
        }
        components.push(AbHom::new(m.values[c].clone(), n.values[c].clone(), mat)?);
    }
    Ok(ModuleMap { components })
}

/// Ambient vector of a module map in the hom layout.
pub fn module_map_to_ambient(layout: &HomLayout, f: &ModuleMap) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); layout.dim];
    for (c, h) in f.components.iter().enumerate() {
        for j in 0..layout.cols[c] {
            for i in 0..layout.rows[c] {
                v[layout.index(c, i, j)] = h.matrix().get(i, j).clone();
            }
        }
    }
    v
}

/// Ambient matrix of `eta ↦ beta ∘ eta ∘ alpha` between hom layouts, from
/// objectwise matrices `alpha_c : k_{M'}(c) -> k_M(c)` and `beta_c`.
pub fn hom_map_ambient(src: &HomLayout, tgt: &HomLayout, alpha: &[&IntMatrix], beta: &[&IntMatrix]) -> IntMatrix {
    let mut out = IntMatrix::zeros(tgt.dim, src.dim);
    for c in 0..src.rows.len() {
        let (a, b) = (alpha[c], beta[c]);
        // (b eta a)[i2, j2] = sum b[i2, i] eta[i, j] a[j, j2]
        for j in 0..src.cols[c] {
            for i in 0..src.rows[c] {
                let col = src.index(c, i, j);
                for j2 in 0..tgt.cols[c] {
                    let y = a.get(j, j2);
                    if y.is_zero() {
                        continue;
                    }
                    for i2 in 0..tgt.rows[c] {
                        let x = b.get(i2, i);
                        if !x.is_zero() {
                            out.add_to(tgt.index(c, i2, j2), col, &(x * y));
                        }
                    }
                }
            }
        }
    }
    out
}

/// The module `c ↦ Hom(X(c), A)` of opposite variance.
pub fn hom_to_group(x: &CatModule, a: &FpAbGroup) -> Result<CatModule> {
    let base = &x.base;
    let values = x.values.iter().map(|v| hom_group(v, a)).collect::<Result<Vec<_>>>()?;
    let variance = x.variance.opposite();
    let mut action = Vec::with_capacity(base.num_morphisms());
    for phi in 0..base.num_morphisms() {
        // X(phi) : X(s) -> X(t); the new action goes Hom(X(t), A) -> Hom(X(s), A).
        let (s, t) = x.variance.ends(base, phi);
        let (src, tgt) = (&values[t], &values[s]);
        let mut m = IntMatrix::zeros(tgt.ngens(), src.ngens());
        for k in 0..src.ngens() {
            let mut e = vec![BigInt::zero(); src.ngens()];
            e[k] = BigInt::one();
            let eta = hom_element_to_map(src, &x.values[t], a, &e)?;
            let pulled = eta.compose(&x.action[phi])?;
            let ka = a.ngens();
            let mut amb = vec![BigInt::zero(); tgt.ambient_dim()];
            for j in 0..x.values[s].ngens() {
                for i in 0..ka {
                    amb[j * ka + i] = pulled.matrix().get(i, j).clone();
                }
            }
            for (r, v) in tgt.to_canonical(&amb)?.into_iter().enumerate() {
                m.set(r, k, v);
            }
        }
        action.push(AbHom::new(src.clone(), tgt.clone(), m)?);
    }
    Ok(CatModule { base: base.clone(), variance, values, action, marker: None })
}
