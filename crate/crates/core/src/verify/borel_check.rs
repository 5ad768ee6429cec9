use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::cellspaces::{borel_and_quotient, GCWComplex};
use crate::error::{Error, Result};
use crate::exact_abelian::{is_almost_isomorphism, FpAbGroup};

#[derive(Clone, Debug)]
pub struct BorelDegree {
    pub p: i64,
    pub borel: FpAbGroup,
    pub quotient: FpAbGroup,
    pub kernel: FpAbGroup,
    pub cokernel: FpAbGroup,
    pub annihilator: BigInt,
    /// `d(p)` kills both kernel and cokernel.
    pub annihilated: bool,
}

#[derive(Clone, Debug)]
pub struct BorelCheckReport {
    pub bar_degree: usize,
    pub valid_up_to: i64,
    pub degrees: Vec<BorelDegree>,
}

impl BorelCheckReport {
    pub fn passes(&self) -> bool {
        self.degrees.iter().all(|d| d.annihilated)
    }
}

/// `|G|^{dim X + 1}`.
pub fn default_annihilator(x: &GCWComplex) -> BigInt {
    let dim = x.dimension().unwrap_or(0) as u32;
    num_traits::pow(BigInt::from(x.group.order()), dim as usize + 1)
}

fn kills(d: &BigInt, g: &FpAbGroup) -> bool {
    g.is_finite() && d.is_multiple_of(&g.exponent())
}

/// Compares `H_p(EG ×_G X) -> H_p(G \ X)` in the valid range of the bar
/// truncation `k`; `annihilators[p]` overrides the default `d(p)`.
pub fn borel_vs_quotient_check(x: &GCWComplex, k: usize, annihilators: &[BigInt]) -> Result<BorelCheckReport> {
    if let Some(bad) = annihilators.iter().find(|d| d.is_zero()) {
        return Err(Error::Unbounded(format!("annihilator {bad} must be nonzero")));
    }
    let bq = borel_and_quotient(x, k)?;
    let fallback = default_annihilator(x);
    let mut degrees = Vec::new();
    for p in 0..=bq.valid_up_to {
        let h = bq.projection_on_homology(p)?;
        let v = is_almost_isomorphism(&h)?;
        let annihilator = annihilators.get(p as usize).cloned().unwrap_or_else(|| fallback.clone());
        let annihilated = kills(&annihilator, &v.kernel) && kills(&annihilator, &v.cokernel);
        degrees.push(BorelDegree {
            p,
            borel: h.source().bare(),
            quotient: h.target().bare(),
            kernel: v.kernel,
            cokernel: v.cokernel,
            annihilator,
            annihilated,
        });
    }
    Ok(BorelCheckReport { bar_degree: k, valid_up_to: bq.valid_up_to, degrees })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cellspaces::{gcw_point, z2_antipodal_circle};
    use crate::fincat::FinGroup;

    #[test]
    fn point_under_z2() {
        let x = gcw_point(&Arc::new(FinGroup::cyclic(2)));
        let r = borel_vs_quotient_check(&x, 6, &vec![BigInt::from(2); 6]).unwrap();
        assert!(r.passes());
        for d in &r.degrees {
            let expect = if d.p % 2 == 1 { FpAbGroup::cyclic(2) } else { FpAbGroup::trivial() };
            assert_eq!(d.kernel, expect);
            assert!(d.cokernel.is_trivial());
        }
    }

    #[test]
    fn free_action_and_trivial_group() {
        let r = borel_vs_quotient_check(&z2_antipodal_circle(), 4, &[]).unwrap();
        assert!(r.degrees.iter().all(|d| d.kernel.is_trivial() && d.cokernel.is_trivial()));
        let x = gcw_point(&Arc::new(FinGroup::trivial()));
        let r = borel_vs_quotient_check(&x, 3, &[]).unwrap();
        assert!(r.degrees.iter().all(|d| d.kernel.is_trivial() && d.cokernel.is_trivial()));
        assert!(borel_vs_quotient_check(&z2_antipodal_circle(), 1, &[]).is_err());
    }

    #[test]
    fn too_small_annihilator_fails() {
        let x = gcw_point(&Arc::new(FinGroup::cyclic(2)));
        let r = borel_vs_quotient_check(&x, 3, &vec![BigInt::from(1); 3]).unwrap();
        assert!(!r.passes());
    }
}
