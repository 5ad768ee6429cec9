//! Finite shadows of the failure of `⊕_i ∏_j -> ∏_j ⊕_i` to be surjective.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_abelian::{solve_image_membership, AbHom, FpAbGroup, IntMatrix};

/// Behaviour of a sequence beyond its listed prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeqTail {
    /// Every term is at most the bound.
    BoundedBy(i64),
    StrictlyIncreasingUnbounded,
}

/// A nondecreasing integer sequence given by a prefix and a tail tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    pub prefix: Vec<i64>,
    pub tail: SeqTail,
}

impl Sequence {
    fn validate(&self, name: &str) -> Result<()> {
        let Some(&last) = self.prefix.last() else {
            return Err(Error::Sequence(format!("{name}: empty prefix")));
        };
        if self.prefix.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Sequence(format!("{name}: prefix is not nondecreasing")));
        }
        match self.tail {
            SeqTail::BoundedBy(b) if last > b => Err(Error::Sequence(format!("{name}: prefix exceeds the bound {b}"))),
            SeqTail::StrictlyIncreasingUnbounded if self.prefix.windows(2).any(|w| w[0] == w[1]) => {
                Err(Error::Sequence(format!("{name}: strictly increasing tail after a repeated prefix value")))
            }
            _ => Ok(()),
        }
    }

    fn last(&self) -> i64 {
        *self.prefix.last().expect("validated")
    }

    /// The term at `i`, continuing a bounded tail by its last value and a
    /// divergent one in steps of one.
    pub fn term(&self, i: usize) -> i64 {
        if i < self.prefix.len() {
            return self.prefix[i];
        }
        match self.tail {
            SeqTail::BoundedBy(_) => self.last(),
            SeqTail::StrictlyIncreasingUnbounded => self.last() + (i - self.prefix.len() + 1) as i64,
        }
    }
}

/// Behaviour of the graded profile below its listed degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileTail {
    /// `π_q = 0` for `q < N`.
    BoundedBelow(i64),
    /// `π_q = A` for every `q < from`.
    ConstantBelow { from: i64, group: FpAbGroup },
}

/// `q ↦ π_q`; unlisted degrees at or above the tail threshold are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub values: BTreeMap<i64, FpAbGroup>,
    pub tail: ProfileTail,
}

impl Profile {
    fn threshold(&self) -> i64 {
        match &self.tail {
            ProfileTail::BoundedBelow(n) => *n,
            ProfileTail::ConstantBelow { from, .. } => *from,
        }
    }

    fn validate(&self) -> Result<()> {
        let t = self.threshold();
        if let Some((q, _)) = self.values.iter().find(|(q, g)| **q < t && !g.is_trivial()) {
            return Err(Error::Sequence(format!("profile lists a nonzero value in degree {q}, below the tail threshold {t}")));
        }
        Ok(())
    }

    pub fn at(&self, q: i64) -> FpAbGroup {
        match &self.tail {
            ProfileTail::ConstantBelow { from, group } if q < *from => group.bare(),
            _ => self.values.get(&q).map(|g| g.bare()).unwrap_or_else(FpAbGroup::trivial),
        }
    }

    fn nonzero(&self, q: i64) -> bool {
        !self.at(q).is_trivial()
    }

    /// True when `π` vanishes in all sufficiently negative degrees.
    fn eventually_zero_below(&self) -> bool {
        match &self.tail {
            ProfileTail::BoundedBelow(_) => true,
            ProfileTail::ConstantBelow { group, .. } => group.is_trivial(),
        }
    }

    fn top_nonzero(&self) -> Option<i64> {
        self.values.iter().filter(|(_, g)| !g.is_trivial()).map(|(q, _)| *q).max()
    }
}

/// Sequences `m`, `n`, profile `π` and degree `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeqSpec {
    pub m: Sequence,
    pub n: Sequence,
    pub profile: Profile,
    pub p: i64,
}

impl GradedSeqSpec {
    pub fn validate(&self) -> Result<()> {
        self.m.validate("m")?;
        self.n.validate("n")?;
        if self.m.prefix[0] < 0 {
            return Err(Error::Sequence("m starts below zero".into()));
        }
        self.profile.validate()
    }

    /// `π_{n_j - m_i + p}`.
    pub fn slot(&self, i: usize, j: usize) -> FpAbGroup {
        self.profile.at(self.n.term(j) - self.m.term(i) + self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surjectivity {
    Surjective,
    NotSurjective,
    Undetermined,
}

impl fmt::Display for Surjectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surjectivity::Surjective => write!(f, "surjective"),
            Surjectivity::NotSurjective => write!(f, "not surjective"),
            Surjectivity::Undetermined => write!(f, "undetermined by the tail tags"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SymbolicVerdict {
    pub verdict: Surjectivity,
    pub reason: String,
}

/// Evaluates "there is `i_0` with `π_{n_j - m_i + p} = 0` for all `i >= i_0`
/// and all `j`" from the prefixes and tail tags.
pub fn symbolic_surjectivity(spec: &GradedSeqSpec) -> Result<SymbolicVerdict> {
    spec.validate()?;
    let pi = &spec.profile;
    let v = |verdict, reason: &str| Ok(SymbolicVerdict { verdict, reason: reason.to_string() });
    match spec.m.tail {
        SeqTail::StrictlyIncreasingUnbounded => {
            if !pi.eventually_zero_below() {
                return v(Surjectivity::NotSurjective, "m diverges and π is nonzero in all low degrees, so every row meets it");
            }
            match spec.n.tail {
                SeqTail::BoundedBy(_) => v(Surjectivity::Surjective, "m diverges, n is bounded and π is bounded below"),
                SeqTail::StrictlyIncreasingUnbounded if pi.top_nonzero().is_none() => v(Surjectivity::Surjective, "π vanishes"),
                SeqTail::StrictlyIncreasingUnbounded => v(Surjectivity::Undetermined, "both m and n diverge; the gaps of n decide"),
            }
        }
        SeqTail::BoundedBy(bound) => {
            let mut seen = Vec::new();
            for limit in spec.m.last()..=bound {
                seen.push(bounded_m_verdict(spec, limit));
            }
            let first = seen[0];
            if seen.iter().all(|s| *s == first) {
                let reason = match first {
                    Surjectivity::Surjective => "m is eventually constant and no column of the stable row meets a nonzero degree",
                    Surjectivity::NotSurjective => "m is eventually constant and its stable row meets a nonzero degree in every later row",
                    Surjectivity::Undetermined => "m is eventually constant but the tail of n is not pinned down",
                };
                v(first, reason)
            } else {
                v(Surjectivity::Undetermined, "the eventual value of m is not pinned down and the candidates disagree")
            }
        }
    }
}

/// Verdict when `m` is eventually equal to `limit`.
fn bounded_m_verdict(spec: &GradedSeqSpec, limit: i64) -> Surjectivity {
    let pi = &spec.profile;
    let s = spec.p - limit;
    if spec.n.prefix.iter().any(|&nj| pi.nonzero(nj + s)) {
        return Surjectivity::NotSurjective;
    }
    let last = spec.n.last();
    match spec.n.tail {
        SeqTail::BoundedBy(b) => {
            if (last..=b).all(|x| !pi.nonzero(x + s)) {
                Surjectivity::Surjective
            } else {
                Surjectivity::Undetermined
            }
        }
        SeqTail::StrictlyIncreasingUnbounded => {
            let from = last + 1 + s;
            let above_clear = pi.top_nonzero().is_none_or(|t| t < from);
            let below_clear = pi.eventually_zero_below() || pi.threshold() <= from;
            if above_clear && below_clear {
                Surjectivity::Surjective
            } else {
                Surjectivity::Undetermined
            }
        }
    }
}

/// The interchange map on the window `i < rows`, `j < cols`.
#[derive(Clone, Debug)]
pub struct TruncatedInterchange {
    pub rows: usize,
    pub cols: usize,
    pub source: FpAbGroup,
    pub target: FpAbGroup,
    pub injective: bool,
    pub isomorphism: bool,
    /// Rows `i` with some nonzero slot.
    pub support_rows: Vec<usize>,
}

impl TruncatedInterchange {
    pub fn last_row_clear(&self) -> bool {
        !self.support_rows.contains(&(self.rows - 1))
    }
}

/// Ambient permutation between a row-major and a column-major arrangement
/// of the same summands.
fn interchange_map(slots: &[Vec<FpAbGroup>]) -> Result<AbHom> {
    let rows = slots.len();
    let cols = slots[0].len();
    let mut src_off = vec![vec![0usize; cols]; rows];
    let mut off = 0;
    for (i, row) in slots.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            src_off[i][j] = off;
            off += g.ngens();
        }
    }
    let dim = off;
    let mut tgt_off = vec![vec![0usize; cols]; rows];
    let mut tgt_groups = Vec::new();
    off = 0;
    for j in 0..cols {
        for i in 0..rows {
            tgt_off[i][j] = off;
            off += slots[i][j].ngens();
            tgt_groups.push(slots[i][j].clone());
        }
    }
    let src_groups: Vec<FpAbGroup> = slots.iter().flatten().cloned().collect();
    let source = FpAbGroup::direct_sum(&src_groups);
    let target = FpAbGroup::direct_sum(&tgt_groups);
    let mut m = IntMatrix::zeros(dim, dim);
    for i in 0..rows {
        for j in 0..cols {
            for k in 0..slots[i][j].ngens() {
                m.set(tgt_off[i][j] + k, src_off[i][j] + k, BigInt::one());
            }
        }
    }
    AbHom::from_ambient(&source, &target, &m)
}

pub fn truncated_interchange(spec: &GradedSeqSpec, rows: usize, cols: usize) -> Result<TruncatedInterchange> {
    if rows == 0 || cols == 0 {
        return Err(Error::Sequence("windows need at least one row and one column".into()));
    }
    let slots: Vec<Vec<FpAbGroup>> = (0..rows).map(|i| (0..cols).map(|j| spec.slot(i, j)).collect()).collect();
    let support_rows = (0..rows).filter(|&i| slots[i].iter().any(|g| !g.is_trivial())).collect();
    let f = interchange_map(&slots)?;
    Ok(TruncatedInterchange {
        rows,
        cols,
        source: f.source().bare(),
        target: f.target().bare(),
        injective: f.is_injective()?,
        isomorphism: f.is_isomorphism()?,
        support_rows,
    })
}

#[derive(Clone, Debug)]
pub struct InterchangeReport {
    pub symbolic: SymbolicVerdict,
    /// Every window `1..=rows × 1..=cols`.
    pub windows: Vec<TruncatedInterchange>,
    pub all_injective: bool,
    /// The largest window agrees with the symbolic verdict: a surjective
    /// verdict leaves the last row empty, a non-surjective one does not.
    pub agrees: bool,
}

pub fn interchange_criterion(spec: &GradedSeqSpec, rows: usize, cols: usize) -> Result<InterchangeReport> {
    let symbolic = symbolic_surjectivity(spec)?;
    let mut windows = Vec::new();
    for r in 1..=rows {
        for c in 1..=cols {
            windows.push(truncated_interchange(spec, r, c)?);
        }
    }
    let all_injective = windows.iter().all(|w| w.injective);
    let largest = windows.last().expect("at least one window");
    let agrees = match symbolic.verdict {
        Surjectivity::Surjective => largest.last_row_clear(),
        Surjectivity::NotSurjective => !largest.last_row_clear(),
        Surjectivity::Undetermined => true,
    };
    Ok(InterchangeReport { symbolic, windows, all_injective, agrees })
}

/// Divergent `m_i = i`, `n` bounded by 1, `π = Z` in degrees 0 and 1 and
/// zero below.
pub fn divergent_m_spec() -> GradedSeqSpec {
    GradedSeqSpec {
        m: Sequence { prefix: vec![0, 1, 2], tail: SeqTail::StrictlyIncreasingUnbounded },
        n: Sequence { prefix: vec![0, 1], tail: SeqTail::BoundedBy(1) },
        profile: Profile { values: [(0, FpAbGroup::free(1)), (1, FpAbGroup::free(1))].into_iter().collect(), tail: ProfileTail::BoundedBelow(0) },
        p: 0,
    }
}

/// `m_i = 0`, `n_j = 0`, `π_0 = Z`: every slot is nonzero.
pub fn constant_m_spec() -> GradedSeqSpec {
    GradedSeqSpec {
        m: Sequence { prefix: vec![0], tail: SeqTail::BoundedBy(0) },
        n: Sequence { prefix: vec![0], tail: SeqTail::BoundedBy(0) },
        profile: Profile { values: [(0, FpAbGroup::free(1))].into_iter().collect(), tail: ProfileTail::BoundedBelow(0) },
        p: 0,
    }
}

/// Divergent `m` and bounded `n`, but `π_q = Z/2` for all `q < 0`.
pub fn unbounded_below_spec() -> GradedSeqSpec {
    GradedSeqSpec {
        m: Sequence { prefix: vec![0, 1], tail: SeqTail::StrictlyIncreasingUnbounded },
        n: Sequence { prefix: vec![0], tail: SeqTail::BoundedBy(0) },
        profile: Profile { values: BTreeMap::new(), tail: ProfileTail::ConstantBelow { from: 0, group: FpAbGroup::cyclic(2) } },
        p: 0,
    }
}

/// Result of the `Tor_1` interchange probe at truncation `(M, N)`.
#[derive(Clone, Debug)]
pub struct TorProbeReport {
    pub prime: u32,
    pub m_max: usize,
    pub n_max: usize,
    /// `S(M, N) -> T(M, N)` is an isomorphism.
    pub finite_map_iso: bool,
    pub delta_order: BigInt,
    /// `δ_N` lies in the image of the block `m <= M`.
    pub delta_in_block: bool,
    /// Largest order reached in the `n = N` factor by the block `m <= M`.
    pub max_order_at_top: BigInt,
}

pub const TOR_PROBE_BOUND: usize = 16;

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Materializes `S(M, N) = ⊕_m ∏_n Z/p^{min(m,n)}` and `T(M, N) = ∏_n ⊕_m`
/// for `2 <= m <= M`, `2 <= n <= N`, and the diagonal `δ_N` in the `m = n` slots.
pub fn tor_interchange_probe(p: u32, m_max: usize, n_max: usize) -> Result<TorProbeReport> {
    if !is_prime(p) || p > 97 {
        return Err(Error::Unbounded(format!("{p} is not a prime up to 97")));
    }
    if !(2..=TOR_PROBE_BOUND).contains(&m_max) || !(2..=TOR_PROBE_BOUND).contains(&n_max) {
        return Err(Error::Unbounded(format!("M and N must lie in 2..={TOR_PROBE_BOUND}")));
    }
    let pb = BigInt::from(p);
    let cyc = |k: usize| FpAbGroup::cyclic_big(&num_traits::pow(pb.clone(), k));
    let slots = |mm: usize| -> Vec<Vec<FpAbGroup>> { (2..=mm).map(|m| (2..=n_max).map(|n| cyc(m.min(n))).collect()).collect() };

    let finite = interchange_map(&slots(m_max))?;
    let finite_map_iso = finite.is_isomorphism()?;

    // T with every slot up to max(M, N), laid out n-major with one generator per slot.
    let full_m = m_max.max(n_max);
    let rows = full_m - 1;
    let cols = n_max - 1;
    let full = slots(full_m);
    let t_groups: Vec<FpAbGroup> = (0..cols).flat_map(|j| full.iter().map(move |row| row[j].clone())).collect();
    let t = FpAbGroup::direct_sum(&t_groups);
    let t_index = |i: usize, j: usize| j * rows + i;
    let mut delta = vec![BigInt::zero(); rows * cols];
    for n in 2..=n_max {
        delta[t_index(n - 2, n - 2)] = BigInt::one();
    }
    let delta_c = t.to_canonical(&delta)?;
    let delta_order = t.element_order(&delta_c).ok_or_else(|| Error::Unbounded("δ has infinite order".into()))?;

    // The block m <= M, row-major, included into T.
    let b_groups: Vec<FpAbGroup> = full[..m_max - 1].iter().flatten().cloned().collect();
    let b = FpAbGroup::direct_sum(&b_groups);
    let mut incl = IntMatrix::zeros(rows * cols, (m_max - 1) * cols);
    for i in 0..m_max - 1 {
        for j in 0..cols {
            incl.set(t_index(i, j), i * cols + j, BigInt::one());
        }
    }
    let inclusion = AbHom::from_ambient(&b, &t, &incl)?;
    let delta_in_block = solve_image_membership(&inclusion, &delta_c)?.is_member();

    // Projection of the block onto the n = N factor.
    let top_groups: Vec<FpAbGroup> = full.iter().map(|row| row[cols - 1].clone()).collect();
    let top = FpAbGroup::direct_sum(&top_groups);
    let mut proj = IntMatrix::zeros(rows, (m_max - 1) * cols);
    for i in 0..m_max - 1 {
        proj.set(i, i * cols + cols - 1, BigInt::one());
    }
    let max_order_at_top = AbHom::from_ambient(&b, &top, &proj)?.image()?.exponent();

    Ok(TorProbeReport { prime: p, m_max, n_max, finite_map_iso, delta_order, delta_in_block, max_order_at_top })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_specs() {
        assert_eq!(symbolic_surjectivity(&divergent_m_spec()).unwrap().verdict, Surjectivity::Surjective);
        assert_eq!(symbolic_surjectivity(&constant_m_spec()).unwrap().verdict, Surjectivity::NotSurjective);
        assert_eq!(symbolic_surjectivity(&unbounded_below_spec()).unwrap().verdict, Surjectivity::NotSurjective);
        for spec in [divergent_m_spec(), constant_m_spec(), unbounded_below_spec()] {
            let r = interchange_criterion(&spec, 4, 4).unwrap();
            assert!(r.all_injective);
            assert!(r.agrees);
        }
    }

    #[test]
    fn inconsistent_tags_are_rejected() {
        let mut s = divergent_m_spec();
        s.n.prefix = vec![0, 3];
        assert!(matches!(symbolic_surjectivity(&s), Err(Error::Sequence(_))));
        let mut s = divergent_m_spec();
        s.profile.values.insert(-2, FpAbGroup::free(1));
        assert!(symbolic_surjectivity(&s).is_err());
        let mut s = divergent_m_spec();
        s.m.prefix = vec![1, 1];
        assert!(symbolic_surjectivity(&s).is_err());
    }

    #[test]
    fn tor_probe_examples() {
        let r = tor_interchange_probe(2, 3, 3).unwrap();
        assert!(r.finite_map_iso);
        assert_eq!(r.delta_order, BigInt::from(8));
        assert!(r.delta_in_block);
        let r = tor_interchange_probe(2, 2, 5).unwrap();
        assert_eq!(r.delta_order, BigInt::from(32));
        assert!(!r.delta_in_block);
        assert_eq!(r.max_order_at_top, BigInt::from(4));
        let r = tor_interchange_probe(3, 2, 2).unwrap();
        assert_eq!(r.delta_order, BigInt::from(9));
        assert!(tor_interchange_probe(4, 2, 2).is_err());
        assert!(tor_interchange_probe(2, 1, 2).is_err());
    }
}
