use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::group::{subquotient, FpAbGroup};
use super::matrix::IntMatrix;
use super::smith::{kernel_basis, solve_integer};
use crate::error::{Error, Result};

/// Homomorphism between canonical groups, stored as the matrix of images of
/// canonical generators (columns) in canonical target coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct AbHom {
    source: FpAbGroup,
    target: FpAbGroup,
    matrix: IntMatrix,
}

impl fmt::Debug for AbHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbHom({} -> {}, {:?})", self.source, self.target, self.matrix)
    }
}

impl AbHom {
    /// Validates and normalises a matrix on canonical coordinates.
    pub fn new(source: FpAbGroup, target: FpAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::Dimension(format!(
                "matrix {}x{} for a map {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source,
                target
            )));
        }
        let mut m = matrix;
        for i in 0..target.torsion().len() {
            let t = &target.torsion()[i];
            for j in 0..m.cols() {
                let v = m.get(i, j).mod_floor(t);
                m.set(i, j, v);
            }
        }
        let kt = target.torsion().len();
        for (j, a) in source.torsion().iter().enumerate() {
            for i in 0..target.ngens() {
                let x = m.get(i, j);
                let ok = if i < kt { (a * x).mod_floor(&target.torsion()[i]).is_zero() } else { x.is_zero() };
                if !ok {
                    return Err(Error::InvalidHom(format!(
                        "generator {j} of order {a} is sent to an element whose coordinate {i} is not killed by {a}"
                    )));
                }
            }
        }
        Ok(AbHom { source, target, matrix: m })
    }

    pub fn zero(source: &FpAbGroup, target: &FpAbGroup) -> Self {
        AbHom { source: source.clone(), target: target.clone(), matrix: IntMatrix::zeros(target.ngens(), source.ngens()) }
    }

    pub fn identity(g: &FpAbGroup) -> Self {
        AbHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.ngens()) }
    }

    /// Multiplication by an integer.
    pub fn scalar(g: &FpAbGroup, k: &BigInt) -> Self {
        let mut m = IntMatrix::identity(g.ngens());
        for i in 0..g.ngens() {
            m.set(i, i, k.clone());
        }
        AbHom::new(g.clone(), g.clone(), m).expect("scalar maps are homomorphisms")
    }

    /// Map induced by an ambient integer matrix between the ambient lattices
    /// of two groups carrying witnesses.
    pub fn from_ambient(source: &FpAbGroup, target: &FpAbGroup, ambient: &IntMatrix) -> Result<Self> {
        if ambient.cols() != source.ambient_dim() || ambient.rows() != target.ambient_dim() {
            return Err(Error::Dimension(format!(
                "ambient matrix {}x{} against ambient dimensions {} -> {}",
                ambient.rows(),
                ambient.cols(),
                source.ambient_dim(),
                target.ambient_dim()
            )));
        }
        let images = ambient.mul(&source.generator_matrix())?;
        let m = target.to_canonical_columns(&images)?;
        AbHom::new(source.clone(), target.clone(), m)
    }

    pub fn source(&self) -> &FpAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FpAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let y = self.matrix.mul_vec(x)?;
        Ok(self.target.reduced(&y))
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &AbHom) -> Result<AbHom> {
        if other.target != self.source || other.target.ngens() != self.source.ngens() {
            return Err(Error::Dimension(format!("cannot compose {} -> {} after {} -> {}", self.source, self.target, other.source, other.target)));
        }
        let m = self.matrix.mul(&other.matrix)?;
        AbHom::new(other.source.clone(), self.target.clone(), m)
    }

    pub fn add(&self, other: &AbHom) -> Result<AbHom> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Dimension("sum of maps with different domains".into()));
        }
        let m = IntMatrix::from_flat(
            self.matrix.rows(),
            self.matrix.cols(),
            self.matrix.data().iter().zip(other.matrix.data()).map(|(a, b)| a + b).collect(),
        )?;
        AbHom::new(self.source.clone(), self.target.clone(), m)
    }

    pub fn negate(&self) -> AbHom {
        let m = IntMatrix::from_flat(self.matrix.rows(), self.matrix.cols(), self.matrix.data().iter().map(|a| -a).collect())
            .expect("shape preserved");
        AbHom::new(self.source.clone(), self.target.clone(), m).expect("negation preserves validity")
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `[M | R_target]`: images together with the target relations.
    fn image_lattice(&self) -> IntMatrix {
        self.matrix.hstack(&self.target.relation_matrix()).expect("row counts agree")
    }

    /// Kernel, with a witness into canonical source coordinates.
    pub fn kernel(&self) -> Result<FpAbGroup> {
        let k = kernel_basis(&self.image_lattice());
        let n = self.source.ngens();
        let idx: Vec<usize> = (0..n).collect();
        let gens = k.select_rows(&idx);
        subquotient(n, Some(&gens), &self.source.relation_matrix())
    }

    /// Cokernel, with a witness from canonical target coordinates.
    pub fn cokernel(&self) -> Result<FpAbGroup> {
        subquotient(self.target.ngens(), None, &self.image_lattice())
    }

    /// Image, with a witness into canonical target coordinates.
    pub fn image(&self) -> Result<FpAbGroup> {
        subquotient(self.target.ngens(), Some(&self.image_lattice()), &self.target.relation_matrix())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.is_trivial())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.is_trivial())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }
}

/// Kernel, cokernel and image of a homomorphism.
#[derive(Clone, Debug)]
pub struct KernelCokernel {
    pub kernel: FpAbGroup,
    pub cokernel: FpAbGroup,
    pub image: FpAbGroup,
}

pub fn hom_kernel_cokernel(f: &AbHom) -> Result<KernelCokernel> {
    Ok(KernelCokernel { kernel: f.kernel()?, cokernel: f.cokernel()?, image: f.image()? })
}

/// Verdict of the almost-isomorphism test. Exponents are reported only when
/// the corresponding group is finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostIsoVerdict {
    pub is_almost_iso: bool,
    pub is_iso: bool,
    pub kernel: FpAbGroup,
    pub cokernel: FpAbGroup,
    pub kernel_exponent: Option<BigInt>,
    pub cokernel_exponent: Option<BigInt>,
}

/// For finitely generated groups, almost trivial is the same as rank zero.
pub fn is_almost_isomorphism(f: &AbHom) -> Result<AlmostIsoVerdict> {
    let kernel = f.kernel()?.bare();
    let cokernel = f.cokernel()?.bare();
    let ke = kernel.is_finite().then(|| kernel.exponent());
    let ce = cokernel.is_finite().then(|| cokernel.exponent());
    Ok(AlmostIsoVerdict {
        is_almost_iso: ke.is_some() && ce.is_some(),
        is_iso: kernel.is_trivial() && cokernel.is_trivial(),
        kernel,
        cokernel,
        kernel_exponent: ke,
        cokernel_exponent: ce,
    })
}

/// Result of an image-membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `f(preimage) = y`
    Member { preimage: Vec<BigInt> },
    /// The class of `y` in the cokernel is nonzero; canonical cokernel coordinates given.
    NotMember { residue: Vec<BigInt> },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

pub fn solve_image_membership(f: &AbHom, y: &[BigInt]) -> Result<Membership> {
    if y.len() != f.target.ngens() {
        return Err(Error::Dimension(format!("element of length {} in a group with {} generators", y.len(), f.target.ngens())));
    }
    match solve_integer(&f.image_lattice(), y) {
        Some(sol) => {
            let x = f.source.reduced(&sol[..f.source.ngens()]);
            Ok(Membership::Member { preimage: x })
        }
        None => {
            let c = f.cokernel()?;
            Ok(Membership::NotMember { residue: c.to_canonical(y)? })
        }
    }
}

/// `Hom(A, B)` with a witness into the ambient `Z^{k_B × k_A}` of
/// matrices, stored column-major: entry `(i, j)` sits at `j * k_B + i`.
pub fn hom_group(a: &FpAbGroup, b: &FpAbGroup) -> Result<FpAbGroup> {
    let (ka, kb) = (a.ngens(), b.ngens());
    let n = ka * kb;
    let kbt = b.torsion().len();
    let mut gens = IntMatrix::zeros(n, n);
    let mut rels = IntMatrix::zeros(n, ka * kbt);
    for j in 0..ka {
        let aj = a.generator_order(j);
        for i in 0..kb {
            let pos = j * kb + i;
            // Smallest multiple allowed in coordinate i of the image of generator j.
            let g = if aj.is_zero() {
                BigInt::one()
            } else if i < kbt {
                let t = &b.torsion()[i];
                t / t.gcd(&aj)
            } else {
                BigInt::zero()
            };
            gens.set(pos, pos, g);
            if i < kbt {
                rels.set(pos, j * kbt + i, b.torsion()[i].clone());
            }
        }
    }
    subquotient(n, Some(&gens), &rels)
}

/// Reads a `Hom(A, B)` element back as a homomorphism.
pub fn hom_element_to_map(h: &FpAbGroup, a: &FpAbGroup, b: &FpAbGroup, x: &[BigInt]) -> Result<AbHom> {
    let amb = h.lift(x)?;
    let (ka, kb) = (a.ngens(), b.ngens());
    let mut m = IntMatrix::zeros(kb, ka);
    for j in 0..ka {
        for i in 0..kb {
            m.set(i, j, amb[j * kb + i].clone());
        }
    }
    AbHom::new(a.clone(), b.clone(), m)
}

/// `A ⊗ B` with a witness into `Z^{k_A k_B}`, generator `e_i ⊗ f_j` at `i * k_B + j`.
pub fn tensor_group(a: &FpAbGroup, b: &FpAbGroup) -> Result<FpAbGroup> {
    let (ka, kb) = (a.ngens(), b.ngens());
    let n = ka * kb;
    let mut cols = Vec::new();
    for i in 0..ka {
        for j in 0..kb {
            let o = a.generator_order(i).gcd(&b.generator_order(j));
            if !o.is_zero() {
                let mut c = vec![BigInt::zero(); n];
                c[i * kb + j] = o;
                cols.push(c);
            }
        }
    }
    subquotient(n, None, &IntMatrix::from_columns(n, &cols))
}

/// `ker(d_out) / im(d_in)` on a group `c`, with a witness into canonical
/// coordinates of `c`. A missing map stands for zero.
pub fn homology_group(c: &FpAbGroup, d_in: Option<&AbHom>, d_out: Option<&AbHom>) -> Result<FpAbGroup> {
    let n = c.ngens();
    if d_in.is_some_and(|d| d.target != *c || d.target.ngens() != n) || d_out.is_some_and(|d| d.source != *c || d.source.ngens() != n) {
        return Err(Error::Dimension("homology: maps do not meet at the given group".into()));
    }
    let gens = match d_out {
        Some(d) => {
            let idx: Vec<usize> = (0..n).collect();
            kernel_basis(&d.image_lattice()).select_rows(&idx)
        }
        None => IntMatrix::identity(n),
    };
    let rels = match d_in {
        Some(d) => d.image_lattice(),
        None => c.relation_matrix(),
    };
    subquotient(n, Some(&gens), &rels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_abelian::matrix::big_vec;

    fn z(n: i64) -> FpAbGroup {
        FpAbGroup::cyclic(n)
    }

    #[test]
    fn hom_and_tensor_of_cyclics() {
        assert_eq!(hom_group(&z(4), &z(6)).unwrap(), z(2));
        assert_eq!(tensor_group(&z(4), &z(6)).unwrap(), z(2));
        assert_eq!(hom_group(&z(0), &z(6)).unwrap(), z(6));
        assert_eq!(hom_group(&z(6), &z(0)).unwrap(), FpAbGroup::trivial());
        assert_eq!(tensor_group(&z(0), &z(0)).unwrap(), z(0));
    }

    #[test]
    fn times_two_on_z4() {
        let g = z(4);
        let f = AbHom::scalar(&g, &BigInt::from(2));
        let kc = hom_kernel_cokernel(&f).unwrap();
        assert_eq!(kc.kernel, z(2));
        assert_eq!(kc.cokernel, z(2));
        assert_eq!(kc.image, z(2));
    }

    #[test]
    fn almost_iso_example() {
        // Z/4 ⊕ Z -> Z, generator of Z sent to 6, torsion to 0.
        let src = FpAbGroup::new(1, big_vec(&[4])).unwrap();
        let f = AbHom::new(src, z(0), IntMatrix::from_rows(&[vec![0, 6]])).unwrap();
        let v = is_almost_isomorphism(&f).unwrap();
        assert!(v.is_almost_iso && !v.is_iso);
        assert_eq!(v.kernel_exponent, Some(BigInt::from(4)));
        assert_eq!(v.cokernel_exponent, Some(BigInt::from(6)));
    }

    #[test]
    fn membership_times_two_on_z() {
        let f = AbHom::scalar(&z(0), &BigInt::from(2));
        assert!(!solve_image_membership(&f, &big_vec(&[3])).unwrap().is_member());
        assert_eq!(
            solve_image_membership(&f, &big_vec(&[4])).unwrap(),
            Membership::Member { preimage: big_vec(&[2]) }
        );
    }

    #[test]
    fn invalid_hom_rejected() {
        // Z/2 -> Z sending the generator to 1 is not a homomorphism.
        assert!(AbHom::new(z(2), z(0), IntMatrix::from_rows(&[vec![1]])).is_err());
        // Z/4 -> Z/6 sending 1 to 1 is not one either.
        assert!(AbHom::new(z(4), z(6), IntMatrix::from_rows(&[vec![1]])).is_err());
        assert!(AbHom::new(z(4), z(6), IntMatrix::from_rows(&[vec![3]])).is_ok());
    }

    #[test]
    fn homology_of_z_times_two() {
        // Z --2--> Z --0--> Z: homology in the middle is Z/2.
        let two = AbHom::scalar(&z(0), &BigInt::from(2));
        let zero = AbHom::zero(&z(0), &z(0));
        assert_eq!(homology_group(&z(0), Some(&two), Some(&zero)).unwrap(), z(2));
        assert_eq!(homology_group(&z(0), None, Some(&two)).unwrap(), FpAbGroup::trivial());
        assert_eq!(homology_group(&z(4), None, None).unwrap(), z(4));
    }

    #[test]
    fn hom_elements_are_maps() {
        let (a, b) = (z(4), z(6));
        let h = hom_group(&a, &b).unwrap();
        let f = hom_element_to_map(&h, &a, &b, &big_vec(&[1])).unwrap();
        assert_eq!(f.matrix().get(0, 0), &BigInt::from(3));
    }
}
