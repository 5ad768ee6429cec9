use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::smith::smith_normal_form;
use crate::error::{Error, Result};

/// Records how the canonical generators of a group sit inside the ambient
/// lattice `Z^n` it was computed from.
///
/// An element of the generator lattice `L ⊆ Z^n` has lattice coordinates
/// `c_i = (coord_rows · y)_i / coord_div_i`; the canonical coordinates are
/// then `change · c`, with torsion entries reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisWitness {
    pub ambient: usize,
    coord_rows: IntMatrix,
    coord_div: Vec<BigInt>,
    // rows annihilating the generator lattice; nonzero output means "outside"
    complement: IntMatrix,
    change: IntMatrix,
    generators: IntMatrix,
}

impl BasisWitness {
    /// Ambient vectors of the canonical generators, as columns.
    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }
}

/// Finitely generated abelian group in canonical form
/// `Z/t_1 ⊕ ... ⊕ Z/t_k ⊕ Z^r` with `1 < t_1 | t_2 | ... | t_k`.
///
/// Canonical coordinates list the torsion generators first, then the free
/// ones. Equality compares only the isomorphism type; the witness is
/// bookkeeping for maps.
#[derive(Clone)]
pub struct FpAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
    witness: Option<Arc<BasisWitness>>,
}

impl PartialEq for FpAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.torsion == other.torsion
    }
}

impl Eq for FpAbGroup {}

impl fmt::Debug for FpAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FpAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

impl FpAbGroup {
    /// Builds a group from canonical invariants, checking the divisor chain.
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for (i, t) in torsion.iter().enumerate() {
            if t <= &BigInt::one() {
                return Err(Error::InvalidGroup(format!("torsion coefficient {t} at position {i} must exceed 1")));
            }
            if i > 0 && !(t % &torsion[i - 1]).is_zero() {
                return Err(Error::InvalidGroup(format!(
                    "torsion list breaks the divisibility chain at position {i}: {} does not divide {t}",
                    torsion[i - 1]
                )));
            }
        }
        Ok(FpAbGroup { rank, torsion, witness: None })
    }

    pub fn trivial() -> Self {
        FpAbGroup { rank: 0, torsion: vec![], witness: None }
    }

    pub fn free(rank: usize) -> Self {
        FpAbGroup { rank, torsion: vec![], witness: None }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = ±1` the trivial group.
    pub fn cyclic(n: i64) -> Self {
        Self::from_orders(&[BigInt::from(n)])
    }

    /// Direct sum of cyclic groups of the given orders (0 meaning infinite),
    /// brought to canonical form.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let rels = IntMatrix::diagonal(orders);
        let mut g = subquotient(n, None, &rels).expect("diagonal relations always present a group");
        g.witness = None;
        g
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of canonical generators.
    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.rank
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.rank > 0 {
            None
        } else {
            Some(self.torsion.iter().fold(BigInt::one(), |a, t| a * t))
        }
    }

    /// Least common multiple of the torsion coefficients (1 if none).
    pub fn exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn witness(&self) -> Option<&BasisWitness> {
        self.witness.as_deref()
    }

    /// Same isomorphism type, no witness.
    pub fn bare(&self) -> Self {
        FpAbGroup { rank: self.rank, torsion: self.torsion.clone(), witness: None }
    }

    /// Order of canonical generator `k` (0 for free generators).
    pub fn generator_order(&self, k: usize) -> BigInt {
        if k < self.torsion.len() {
            self.torsion[k].clone()
        } else {
            BigInt::zero()
        }
    }

    /// Reduces canonical coordinates in place.
    pub fn reduce(&self, x: &mut [BigInt]) {
        for (k, t) in self.torsion.iter().enumerate() {
            x[k] = x[k].mod_floor(t);
        }
    }

    pub fn reduced(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut v = x.to_vec();
        self.reduce(&mut v);
        v
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.reduced(x).iter().all(|v| v.is_zero())
    }

    /// Order of an element given in canonical coordinates; `None` if infinite.
    pub fn element_order(&self, x: &[BigInt]) -> Option<BigInt> {
        let x = self.reduced(x);
        if x[self.torsion.len()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut ord = BigInt::one();
        for (k, t) in self.torsion.iter().enumerate() {
            let o = t / t.gcd(&x[k]);
            ord = ord.lcm(&o);
        }
        Some(ord)
    }

    /// Relation columns `t_k e_k` for the torsion generators.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.ngens();
        let mut m = IntMatrix::zeros(n, self.torsion.len());
        for (k, t) in self.torsion.iter().enumerate() {
            m.set(k, k, t.clone());
        }
        m
    }

    /// Dimension of the ambient lattice coordinates refer to.
    pub fn ambient_dim(&self) -> usize {
        self.witness.as_ref().map_or(self.ngens(), |w| w.ambient)
    }

    /// Canonical coordinates of an ambient vector lying in the generator lattice.
    pub fn to_canonical(&self, y: &[BigInt]) -> Result<Vec<BigInt>> {
        let Some(w) = &self.witness else {
            if y.len() != self.ngens() {
                return Err(Error::Dimension(format!("vector of length {} for a group with {} generators", y.len(), self.ngens())));
            }
            return Ok(self.reduced(y));
        };
        if y.len() != w.ambient {
            return Err(Error::Dimension(format!("ambient vector of length {} for ambient dimension {}", y.len(), w.ambient)));
        }
        if w.complement.rows() > 0 && w.complement.mul_vec(y)?.iter().any(|v| !v.is_zero()) {
            return Err(Error::NotInLattice("vector leaves the saturation of the generator lattice".into()));
        }
        let raw = w.coord_rows.mul_vec(y)?;
        let mut c = Vec::with_capacity(raw.len());
        for (i, (v, d)) in raw.into_iter().zip(&w.coord_div).enumerate() {
            let (q, r) = v.div_rem(d);
            if !r.is_zero() {
                return Err(Error::NotInLattice(format!("coordinate {i} is not divisible by {d}")));
            }
            c.push(q);
        }
        let mut x = w.change.mul_vec(&c)?;
        self.reduce(&mut x);
        Ok(x)
    }

    /// Ambient representative of an element in canonical coordinates.
    pub fn lift(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        match &self.witness {
            None => Ok(x.to_vec()),
            Some(w) => w.generators.mul_vec(x),
        }
    }

    /// Ambient vectors of the canonical generators, as columns.
    pub fn generator_matrix(&self) -> IntMatrix {
        match &self.witness {
            None => IntMatrix::identity(self.ngens()),
            Some(w) => w.generators.clone(),
        }
    }

    /// Canonical images of the columns of an ambient matrix.
    pub fn to_canonical_columns(&self, m: &IntMatrix) -> Result<IntMatrix> {
        let mut out = IntMatrix::zeros(self.ngens(), m.cols());
        for j in 0..m.cols() {
            let c = self.to_canonical(&m.column(j))?;
            for (i, v) in c.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Direct sum with a witness into the concatenated canonical coordinates
    /// of the summands.
    pub fn direct_sum(groups: &[FpAbGroup]) -> FpAbGroup {
        let n: usize = groups.iter().map(|g| g.ngens()).sum();
        let blocks: Vec<IntMatrix> = groups.iter().map(|g| g.relation_matrix()).collect();
        let rels = IntMatrix::block_diag(&blocks);
        subquotient(n, None, &rels).expect("block diagonal relations are valid")
    }

    pub fn cyclic_big(n: &BigInt) -> Self {
        Self::from_orders(std::slice::from_ref(n))
    }

    /// Random-access description used in reports: `"Z^r ⊕ Z/t1 ⊕ ..."`.
    pub fn describe(&self) -> String {
        self.to_string()
    }

    pub(crate) fn with_witness(rank: usize, torsion: Vec<BigInt>, witness: BasisWitness) -> Self {
        FpAbGroup { rank, torsion, witness: Some(Arc::new(witness)) }
    }
}

/// The group `span(gens) / span(rels)` inside `Z^ambient`.
///
/// `gens = None` means the whole lattice. The relations must lie in the span
/// of the generators.
pub fn subquotient(ambient: usize, gens: Option<&IntMatrix>, rels: &IntMatrix) -> Result<FpAbGroup> {
    if rels.rows() != ambient || gens.is_some_and(|g| g.rows() != ambient) {
        return Err(Error::Dimension("generator or relation matrix does not match the ambient dimension".into()));
    }
    // Lattice basis B (columns) and coordinate functional with divisors.
    let (basis, coord_rows, coord_div, complement) = match gens {
        None => (
            IntMatrix::identity(ambient),
            IntMatrix::identity(ambient),
            vec![BigInt::one(); ambient],
            IntMatrix::zeros(0, ambient),
        ),
        Some(g) => {
            let snf = smith_normal_form(g);
            let r = snf.rank();
            let idx: Vec<usize> = (0..r).collect();
            let mut basis = snf.u_inv.select_cols(&idx);
            for j in 0..r {
                for i in 0..ambient {
                    let v = basis.get(i, j) * &snf.divisors[j];
                    basis.set(i, j, v);
                }
            }
            let rest: Vec<usize> = (r..ambient).collect();
            (basis, snf.u.select_rows(&idx), snf.divisors.clone(), snf.u.select_rows(&rest))
        }
    };
    let r = basis.cols();
    // Relations in lattice coordinates.
    let mut rc = IntMatrix::zeros(r, rels.cols());
    for j in 0..rels.cols() {
        let col = rels.column(j);
        let raw = coord_rows.mul_vec(&col)?;
        for i in 0..r {
            let (q, rem) = raw[i].div_rem(&coord_div[i]);
            if !rem.is_zero() {
                return Err(Error::NotInLattice(format!("relation {j} is outside the generator lattice")));
            }
            rc.set(i, j, q);
        }
        if complement.rows() > 0 && complement.mul_vec(&col)?.iter().any(|v| !v.is_zero()) {
            return Err(Error::NotInLattice(format!("relation {j} is outside the generator lattice")));
        }
    }
    let snf = smith_normal_form(&rc);
    let mut torsion_idx = Vec::new();
    let mut torsion = Vec::new();
    for (i, d) in snf.divisors.iter().enumerate() {
        if !d.is_one() {
            torsion_idx.push(i);
            torsion.push(d.abs());
        }
    }
    let free_idx: Vec<usize> = (snf.rank()..r).collect();
    let mut keep = torsion_idx.clone();
    keep.extend(free_idx.iter().copied());
    let change = snf.u.select_rows(&keep);
    let generators = basis.mul(&snf.u_inv.select_cols(&keep))?;
    let witness = BasisWitness { ambient, coord_rows, coord_div, complement, change, generators };
    Ok(FpAbGroup::with_witness(free_idx.len(), torsion, witness))
}

/// Cokernel of `A : Z^cols -> Z^rows`.
pub fn cokernel_presentation(a: &IntMatrix) -> FpAbGroup {
    subquotient(a.rows(), None, a).expect("cokernel of any matrix is defined")
}

/// Rank, exponent and almost-triviality of a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupInvariants {
    pub rank: usize,
    pub exponent: BigInt,
    pub is_almost_trivial: bool,
}

pub fn group_invariants(g: &FpAbGroup) -> GroupInvariants {
    GroupInvariants { rank: g.rank(), exponent: g.exponent(), is_almost_trivial: g.rank() == 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_abelian::matrix::big_vec;

    #[test]
    fn diag_two_three_is_cyclic_six() {
        let g = cokernel_presentation(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(g, FpAbGroup::new(0, big_vec(&[6])).unwrap());
        assert_eq!(g.to_string(), "Z/6");
        // The canonical generator maps back to an element of order 6.
        let gen = g.lift(&big_vec(&[1])).unwrap();
        let back = g.to_canonical(&gen).unwrap();
        assert_eq!(back, big_vec(&[1]));
        let e1 = g.to_canonical(&big_vec(&[1, 0])).unwrap();
        assert_eq!(g.element_order(&e1), Some(BigInt::from(2)));
    }

    #[test]
    fn invalid_chain_rejected() {
        assert!(FpAbGroup::new(0, big_vec(&[4, 6])).is_err());
        assert!(FpAbGroup::new(0, big_vec(&[1])).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(FpAbGroup::trivial().to_string(), "0");
        assert_eq!(FpAbGroup::new(2, big_vec(&[2, 4])).unwrap().to_string(), "Z^2 ⊕ Z/2 ⊕ Z/4");
    }

    #[test]
    fn subquotient_of_sublattice() {
        // span{(2,0),(0,2)} / span{(4,0)}  ≅ Z/2 ⊕ Z
        let gens = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let rels = IntMatrix::from_rows(&[vec![4], vec![0]]);
        let g = subquotient(2, Some(&gens), &rels).unwrap();
        assert_eq!(g, FpAbGroup::new(1, big_vec(&[2])).unwrap());
        assert!(g.to_canonical(&big_vec(&[1, 0])).is_err());
        let x = g.to_canonical(&big_vec(&[2, 0])).unwrap();
        assert_eq!(g.element_order(&x), Some(BigInt::from(2)));
        let bad = IntMatrix::from_rows(&[vec![1], vec![0]]);
        assert!(subquotient(2, Some(&gens), &bad).is_err());
    }

    #[test]
    fn direct_sum_canonicalises() {
        let s = FpAbGroup::direct_sum(&[FpAbGroup::cyclic(2), FpAbGroup::cyclic(3), FpAbGroup::free(1)]);
        assert_eq!(s, FpAbGroup::new(1, big_vec(&[6])).unwrap());
        let x = s.to_canonical(&big_vec(&[1, 1, 0])).unwrap();
        assert_eq!(s.element_order(&x), Some(BigInt::from(6)));
    }
}
