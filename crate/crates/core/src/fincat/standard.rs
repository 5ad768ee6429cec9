use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::category::FinCategory;
use crate::error::{Error, Result};

/// The two index categories, truncated to objects `0..=K`.
///
/// `N`: one morphism `m -> n` whenever `m <= n`.
/// `RF`: morphisms `m -> n` are pairs `(i, j)` with `i + j = n - m`,
/// composed by adding pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardKind {
    N,
    RF,
}

impl fmt::Display for StandardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardKind::N => write!(f, "N"),
            StandardKind::RF => write!(f, "RF"),
        }
    }
}

impl FromStr for StandardKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" | "n" => Ok(StandardKind::N),
            "RF" | "rf" => Ok(StandardKind::RF),
            other => Err(Error::Category(format!("unknown standard category {other:?} (expected N or RF)"))),
        }
    }
}

pub fn standard_category(kind: StandardKind, k: usize) -> FinCategory {
    let objects: Vec<String> = (0..=k).map(|i| i.to_string()).collect();
    let mut morphisms = Vec::new();
    // (m, n, i) -> index, with j = n - m - i
    let mut index = HashMap::new();
    let mut data = Vec::new();
    for m in 0..=k {
        for n in m..=k {
            let splits = match kind {
                StandardKind::N => 1,
                StandardKind::RF => n - m + 1,
            };
            for i in 0..splits {
                index.insert((m, n, i), morphisms.len());
                let label = match kind {
                    StandardKind::N => format!("{m}<={n}"),
                    StandardKind::RF => format!("{m}->{n}:({i},{})", n - m - i),
                };
                morphisms.push((m, n, label));
                data.push((m, n, i));
            }
        }
    }
    let identities = (0..=k).map(|m| index[&(m, m, 0)]).collect();
    FinCategory::from_rule(&format!("{kind}_{k}"), objects, morphisms, identities, |g, f| {
        let (m, _, i1) = data[f];
        let (_, n, i2) = data[g];
        let i = match kind {
            StandardKind::N => 0,
            StandardKind::RF => i1 + i2,
        };
        index[&(m, n, i)]
    })
    .expect("standard categories satisfy the axioms")
}

/// Index of the `RF` morphism `m -> n` with split `(i, n - m - i)`.
pub fn rf_morphism(cat: &FinCategory, m: usize, n: usize, i: usize) -> usize {
    cat.hom(m, n)[i]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn morphism_counts() {
        assert_eq!(standard_category(StandardKind::N, 2).num_morphisms(), 6);
        let rf = standard_category(StandardKind::RF, 2);
        assert_eq!(rf.hom(0, 2).len(), 3);
        assert_eq!(rf.num_morphisms(), 3 + 2 * 2 + 3);
        // (1,0) then (0,1) equals (0,1) then (1,0)
        let (a, b) = (rf_morphism(&rf, 0, 1, 1), rf_morphism(&rf, 1, 2, 0));
        let (c, d) = (rf_morphism(&rf, 0, 1, 0), rf_morphism(&rf, 1, 2, 1));
        assert_eq!(rf.compose(b, a), rf.compose(d, c));
    }
}
