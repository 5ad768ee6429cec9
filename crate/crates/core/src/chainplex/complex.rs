use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact_abelian::{homology_group, AbHom, FpAbGroup, IntMatrix};

/// A bounded chain complex of finitely generated abelian groups in degrees
/// `lo ..= lo + groups.len() - 1`. `differentials[k]` maps degree `lo + k + 1`
/// to degree `lo + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlainChainComplex {
    lo: i64,
    groups: Vec<FpAbGroup>,
    differentials: Vec<AbHom>,
}

impl PlainChainComplex {
    pub fn new(lo: i64, groups: Vec<FpAbGroup>, differentials: Vec<AbHom>) -> Result<Self> {
        if differentials.len() + 1 != groups.len().max(1) {
            return Err(Error::ChainComplex(format!(
                "{} groups need {} differentials, got {}",
                groups.len(),
                groups.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.source() != &groups[k + 1] || d.target() != &groups[k] {
                return Err(Error::ChainComplex(format!("differential out of degree {} has the wrong endpoints", lo + k as i64 + 1)));
            }
        }
        for k in 1..differentials.len() {
            if !differentials[k - 1].compose(&differentials[k])?.is_zero() {
                return Err(Error::ChainComplex(format!("d∘d is nonzero out of degree {}", lo + k as i64 + 1)));
            }
        }
        Ok(PlainChainComplex { lo, groups, differentials })
    }

    pub fn zero() -> Self {
        PlainChainComplex { lo: 0, groups: Vec::new(), differentials: Vec::new() }
    }

    /// A single group in one degree.
    pub fn concentrated(degree: i64, group: FpAbGroup) -> Self {
        PlainChainComplex { lo: degree, groups: vec![group], differentials: Vec::new() }
    }

    /// Lowest stored degree.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored degree; below `lo` for the empty complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.groups.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn groups(&self) -> &[FpAbGroup] {
        &self.groups
    }

    /// The group in degree `p`, trivial outside the range.
    pub fn group(&self, p: i64) -> FpAbGroup {
        self.group_ref(p).cloned().unwrap_or_else(FpAbGroup::trivial)
    }

    pub fn group_ref(&self, p: i64) -> Option<&FpAbGroup> {
        if p < self.lo || p > self.hi() {
            None
        } else {
            Some(&self.groups[(p - self.lo) as usize])
        }
    }

    /// `d_p : C_p -> C_{p-1}` when both ends are stored.
    pub fn differential(&self, p: i64) -> Option<&AbHom> {
        if p <= self.lo || p > self.hi() {
            None
        } else {
            Some(&self.differentials[(p - self.lo - 1) as usize])
        }
    }

    /// `H_p` with a witness into canonical coordinates of `C_p`.
    pub fn homology(&self, p: i64) -> Result<FpAbGroup> {
        match self.group_ref(p) {
            None => Ok(FpAbGroup::trivial()),
            Some(c) => homology_group(c, self.differential(p + 1), self.differential(p)),
        }
    }

    /// `Σ (-1)^p rank C_p`
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|p| sign(p) * self.group(p).rank() as i64).sum()
    }

    /// `Σ (-1)^p rank H_p`
    pub fn homology_euler_characteristic(&self) -> Result<i64> {
        let mut e = 0;
        for p in self.degrees() {
            e += sign(p) * self.homology(p)?.rank() as i64;
        }
        Ok(e)
    }

    /// Rebuilds with canonical groups stripped of witnesses.
    pub fn bare(&self) -> Self {
        let groups: Vec<FpAbGroup> = self.groups.iter().map(|g| g.bare()).collect();
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| AbHom::new(groups[k + 1].clone(), groups[k].clone(), d.matrix().clone()).expect("same matrix"))
            .collect();
        PlainChainComplex { lo: self.lo, groups, differentials }
    }
}

#[inline]
pub(crate) fn sign(p: i64) -> i64 {
    if p.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[inline]
pub(crate) fn sign_big(p: i64) -> BigInt {
    BigInt::from(sign(p))
}

/// A degreewise map of complexes; missing degrees are zero maps.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    pub components: BTreeMap<i64, AbHom>,
}

impl ChainMap {
    pub fn identity(c: &PlainChainComplex) -> Self {
        ChainMap { components: c.degrees().map(|p| (p, AbHom::identity(&c.group(p)))).collect() }
    }

    pub fn scalar(c: &PlainChainComplex, k: &BigInt) -> Self {
        ChainMap { components: c.degrees().map(|p| (p, AbHom::scalar(&c.group(p), k))).collect() }
    }

    /// Component in degree `p`, zero if absent.
    pub fn component(&self, s: &PlainChainComplex, t: &PlainChainComplex, p: i64) -> AbHom {
        match self.components.get(&p) {
            Some(h) => h.clone(),
            None => AbHom::zero(&s.group(p), &t.group(p)),
        }
    }
}

/// Checks shapes and `d ∘ f = f ∘ d` in every degree.
pub fn check_chain_map(s: &PlainChainComplex, t: &PlainChainComplex, f: &ChainMap) -> Result<()> {
    for (&p, h) in &f.components {
        if h.source() != &s.group(p) || h.target() != &t.group(p) {
            return Err(Error::ChainComplex(format!("chain map component in degree {p} has the wrong endpoints")));
        }
    }
    let lo = s.lo().min(t.lo());
    let hi = s.hi().max(t.hi());
    for p in lo + 1..=hi {
        let fp = f.component(s, t, p);
        let fq = f.component(s, t, p - 1);
        let left = match t.differential(p) {
            Some(d) => d.compose(&fp)?,
            None => AbHom::zero(&s.group(p), &t.group(p - 1)),
        };
        let right = match s.differential(p) {
            Some(d) => fq.compose(d)?,
            None => AbHom::zero(&s.group(p), &t.group(p - 1)),
        };
        if left.matrix() != right.matrix() {
            return Err(Error::ChainComplex(format!("not a chain map: squares fail out of degree {p}")));
        }
    }
    Ok(())
}

/// `H_p(f)` between canonical homology groups.
pub fn induced_map_on_homology(s: &PlainChainComplex, t: &PlainChainComplex, f: &ChainMap, p: i64) -> Result<AbHom> {
    check_chain_map(s, t, f)?;
    induced_map_unchecked(s, t, f, p)
}

pub(crate) fn induced_map_unchecked(s: &PlainChainComplex, t: &PlainChainComplex, f: &ChainMap, p: i64) -> Result<AbHom> {
    let hs = s.homology(p)?;
    let ht = t.homology(p)?;
    let amb = match f.components.get(&p) {
        Some(h) => h.matrix().clone(),
        None => IntMatrix::zeros(t.group(p).ngens(), s.group(p).ngens()),
    };
    AbHom::from_ambient(&hs, &ht, &amb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FpAbGroup {
        FpAbGroup::free(1)
    }

    fn times(k: i64) -> AbHom {
        AbHom::scalar(&z(), &BigInt::from(k))
    }

    #[test]
    fn zero_and_doubling_differentials() {
        let c = PlainChainComplex::new(0, vec![z(), z()], vec![times(0)]).unwrap();
        assert_eq!(c.homology(0).unwrap(), z());
        assert_eq!(c.homology(1).unwrap(), z());
        assert_eq!(c.homology(5).unwrap(), FpAbGroup::trivial());
        let c = PlainChainComplex::new(0, vec![z(), z()], vec![times(2)]).unwrap();
        assert_eq!(c.homology(0).unwrap(), FpAbGroup::cyclic(2));
        assert!(c.homology(1).unwrap().is_trivial());
        assert_eq!(c.euler_characteristic(), c.homology_euler_characteristic().unwrap());
    }

    #[test]
    fn nonzero_square_rejected() {
        assert!(PlainChainComplex::new(0, vec![z(), z(), z()], vec![times(1), times(1)]).is_err());
    }

    #[test]
    fn doubling_endomorphism_on_homology() {
        let c = PlainChainComplex::new(0, vec![z(), z()], vec![times(0)]).unwrap();
        let f = ChainMap::scalar(&c, &BigInt::from(2));
        for p in 0..=1 {
            let h = induced_map_on_homology(&c, &c, &f, p).unwrap();
            assert_eq!(h.matrix(), &IntMatrix::from_rows(&[vec![2]]));
        }
        let id = induced_map_on_homology(&c, &c, &ChainMap::identity(&c), 0).unwrap();
        assert!(id.is_isomorphism().unwrap());
    }

    #[test]
    fn null_homotopic_map_vanishes() {
        // Z --1--> Z is contractible; multiplication by 3 is null-homotopic.
        let c = PlainChainComplex::new(0, vec![z(), z()], vec![times(1)]).unwrap();
        let f = ChainMap::scalar(&c, &BigInt::from(3));
        for p in 0..=1 {
            assert!(induced_map_on_homology(&c, &c, &f, p).unwrap().is_zero());
        }
    }

    #[test]
    fn non_chain_map_rejected() {
        let c = PlainChainComplex::new(0, vec![z(), z()], vec![times(2)]).unwrap();
        let mut comps = BTreeMap::new();
        comps.insert(1, times(1));
        assert!(induced_map_on_homology(&c, &c, &ChainMap { components: comps }, 0).is_err());
    }
}
