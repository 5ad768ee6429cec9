use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::category::FinCategory;
use crate::error::{Error, Result};

/// Largest group order accepted by [`group_analysis`].
pub const MAX_GROUP_ORDER: usize = 48;

/// Finite group given by its multiplication table. Element 0 is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FinGroup {
    name: String,
    n: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Vec<String>,
}

impl fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinGroup({}, order {})", self.name, self.n)
    }
}

impl FinGroup {
    /// Validates a multiplication table `table[a][b] = a·b`.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("multiplication table is not square with entries in range".into()));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("associativity fails on ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| table[a][b] == e)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        // Relabel so the identity is element 0.
        let perm: Vec<usize> = std::iter::once(e).chain((0..n).filter(|&x| x != e)).collect();
        let mut pos = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            pos[p] = i;
        }
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[pos[a] * n + pos[b]] = pos[table[a][b]];
            }
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("g{i}")).collect());
        if labels.len() != n {
            return Err(Error::InvalidGroup("label count differs from group order".into()));
        }
        let labels = perm.iter().map(|&p| labels[p].clone()).collect();
        let inv = perm.iter().map(|&p| pos[inv[p]]).collect();
        Ok(FinGroup { name: name.to_string(), n, mul, inv, labels })
    }

    /// Group generated by permutations of `0..degree`. The product `στ`
    /// applies `τ` first.
    pub fn from_permutations(name: &str, degree: usize, gens: &[Vec<usize>]) -> Result<Self> {
        for g in gens {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidGroup(format!("{g:?} is not a permutation of {degree} points")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let p: Vec<usize> = (0..degree).map(|x| g[elems[i][x]]).collect();
                if !index.contains_key(&p) {
                    if elems.len() >= 100_000 {
                        return Err(Error::GroupTooLarge { order: elems.len(), bound: 100_000 });
                    }
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let p: Vec<usize> = (0..degree).map(|x| elems[a][elems[b][x]]).collect();
                table[a][b] = index[&p];
            }
        }
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        Self::from_table(name, table, Some(labels))
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_table(&format!("Z/{n}"), table, Some(labels)).expect("cyclic table is a group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn symmetric(k: usize) -> Self {
        let mut gens = Vec::new();
        if k >= 2 {
            let mut t: Vec<usize> = (0..k).collect();
            t.swap(0, 1);
            gens.push(t);
            let c: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
            gens.push(c);
        }
        Self::from_permutations(&format!("S_{k}"), k, &gens).expect("symmetric group generators are permutations")
    }

    pub fn dihedral(k: usize) -> Self {
        let r: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        let s: Vec<usize> = (0..k).map(|i| (k - i) % k).collect();
        Self::from_permutations(&format!("D_{k}"), k, &[r, s]).expect("dihedral generators are permutations")
    }

    pub fn product(a: &FinGroup, b: &FinGroup) -> Self {
        let (na, nb) = (a.n, b.n);
        let n = na * nb;
        let mut table = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                table[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
            }
        }
        let labels = (0..n).map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb])).collect();
        Self::from_table(&format!("{}x{}", a.name, b.name), table, Some(labels)).expect("product of groups")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// `g h g^{-1}`
    #[inline]
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup { elements: set.into_iter().collect() }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: (0..self.n).collect() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![0] }
    }

    /// `g H g^{-1}`
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        let mut e: Vec<usize> = h.elements.iter().map(|&x| self.conj(g, x)).collect();
        e.sort_unstable();
        Subgroup { elements: e }
    }

    pub fn centralizer(&self, h: &Subgroup) -> Subgroup {
        let e = (0..self.n).filter(|&g| h.elements.iter().all(|&x| self.mul(g, x) == self.mul(x, g))).collect();
        Subgroup { elements: e }
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let e = (0..self.n).filter(|&g| self.conjugate(h, g) == *h).collect();
        Subgroup { elements: e }
    }

    /// The one-object category with morphisms the group elements.
    pub fn as_category(&self) -> FinCategory {
        let morphisms = (0..self.n).map(|g| (0, 0, self.labels[g].clone())).collect();
        FinCategory::from_rule(&format!("B{}", self.name), vec!["*".into()], morphisms, vec![0], |g, f| self.mul(g, f))
            .expect("a group is a one-object category")
    }

    /// A subgroup as a group in its own right, with the embedding of its elements.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (FinGroup, Vec<usize>) {
        let idx: HashMap<usize, usize> = h.elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table = h
            .elements
            .iter()
            .map(|&a| h.elements.iter().map(|&b| idx[&self.mul(a, b)]).collect())
            .collect();
        let labels = h.elements.iter().map(|&x| self.labels[x].clone()).collect();
        let g = FinGroup::from_table(&format!("{}<{}", self.name, h.order()), table, Some(labels))
            .expect("subgroup closed under multiplication");
        (g, h.elements.clone())
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            continue;
        }
        out.push('(');
        let mut x = s;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(x + 1).to_string());
            first = false;
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// A subgroup as the sorted list of its elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    /// Builds a subgroup from an element list, checking closure.
    pub fn from_elements(g: &FinGroup, elements: &[usize]) -> Result<Self> {
        let mut e = elements.to_vec();
        e.sort_unstable();
        e.dedup();
        if e.first() != Some(&0) {
            return Err(Error::InvalidGroup("subgroup must contain the identity".into()));
        }
        for &a in &e {
            for &b in &e {
                if e.binary_search(&g.mul(a, b)).is_err() {
                    return Err(Error::InvalidGroup(format!("element list not closed: {a}·{b}")));
                }
            }
        }
        Ok(Subgroup { elements: e })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn describe(&self, g: &FinGroup) -> String {
        let l: Vec<&str> = self.elements.iter().map(|&x| g.label(x)).collect();
        format!("{{{}}}", l.join(","))
    }

    /// Canonical representative (minimal element) of the left coset `aH`.
    pub fn coset_rep(&self, g: &FinGroup, a: usize) -> usize {
        self.elements.iter().map(|&h| g.mul(a, h)).min().expect("nonempty subgroup")
    }
}

/// Subgroups, conjugacy classes, centralizers and normalizers.
#[derive(Clone, Debug)]
pub struct GroupAnalysis {
    /// All subgroups, ordered by size and then lexicographically.
    pub subgroups: Vec<Subgroup>,
    /// Conjugacy class index of each subgroup.
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub centralizers: Vec<Subgroup>,
    pub normalizers: Vec<Subgroup>,
}

impl GroupAnalysis {
    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.subgroups.binary_search_by(|s| (s.order(), s).cmp(&(h.order(), h))).ok()
    }
}

pub fn group_analysis(g: &FinGroup) -> Result<GroupAnalysis> {
    if g.order() > MAX_GROUP_ORDER {
        return Err(Error::GroupTooLarge { order: g.order(), bound: MAX_GROUP_ORDER });
    }
    // Every subgroup is a join of cyclic subgroups, so close the cyclic ones under joins.
    let mut set: BTreeSet<Subgroup> = (0..g.order()).map(|x| g.generate(&[x])).collect();
    loop {
        let list: Vec<Subgroup> = set.iter().cloned().collect();
        let mut grew = false;
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                if list[i].is_subset_of(&list[j]) || list[j].is_subset_of(&list[i]) {
                    continue;
                }
                let mut gens = list[i].elements.clone();
                gens.extend_from_slice(&list[j].elements);
                if set.insert(g.generate(&gens)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut subgroups: Vec<Subgroup> = set.into_iter().collect();
    subgroups.sort_by(|a, b| (a.order(), a).cmp(&(b.order(), b)));
    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let lookup: HashMap<Subgroup, usize> = subgroups.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    for i in 0..subgroups.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut members = BTreeSet::new();
        for x in 0..g.order() {
            let j = lookup[&g.conjugate(&subgroups[i], x)];
            class_of[j] = c;
            members.insert(j);
        }
        classes.push(members.into_iter().collect());
    }
    let centralizers = subgroups.iter().map(|h| g.centralizer(h)).collect();
    let normalizers = subgroups.iter().map(|h| g.normalizer(h)).collect();
    Ok(GroupAnalysis { subgroups, class_of, classes, centralizers, normalizers })
}

/// A family of subgroups closed under conjugation and passage to subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupFamily {
    pub group: Arc<FinGroup>,
    pub members: Vec<Subgroup>,
}

impl SubgroupFamily {
    pub fn all(g: &Arc<FinGroup>) -> Result<Self> {
        let a = group_analysis(g)?;
        Ok(SubgroupFamily { group: g.clone(), members: a.subgroups })
    }

    pub fn trivial(g: &Arc<FinGroup>) -> Self {
        SubgroupFamily { group: g.clone(), members: vec![g.trivial_subgroup()] }
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.members.iter().position(|m| m == h)
    }

    pub fn contains(&self, h: &Subgroup) -> bool {
        self.index_of(h).is_some()
    }
}

/// Smallest family containing the seeds.
pub fn family_closure(g: &Arc<FinGroup>, seeds: &[Subgroup]) -> Result<SubgroupFamily> {
    let a = group_analysis(g)?;
    let members = a
        .subgroups
        .into_iter()
        .filter(|h| seeds.iter().any(|s| (0..g.order()).any(|x| h.is_subset_of(&g.conjugate(s, x)))))
        .collect();
    Ok(SubgroupFamily { group: g.clone(), members })
}

/// A left action of a finite group on `0..size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSetAction {
    pub group: Arc<FinGroup>,
    pub size: usize,
    /// `act[g * size + s] = g·s`
    act: Vec<usize>,
}

impl GSetAction {
    pub fn new(group: Arc<FinGroup>, size: usize, act: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if act.len() != n * size || act.iter().any(|&x| x >= size) {
            return Err(Error::InvalidGroup("action table has the wrong shape".into()));
        }
        for s in 0..size {
            if act[s] != s {
                return Err(Error::InvalidGroup(format!("identity moves point {s}")));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for s in 0..size {
                    if act[group.mul(g, h) * size + s] != act[g * size + act[h * size + s]] {
                        return Err(Error::InvalidGroup(format!("action is not compatible with multiplication at ({g}, {h}, {s})")));
                    }
                }
            }
        }
        Ok(GSetAction { group, size, act })
    }

    /// The coset space `G/H`; point `i` is the coset of the `i`-th smallest representative.
    pub fn cosets(group: &Arc<FinGroup>, h: &Subgroup) -> (Self, Vec<usize>) {
        let mut reps: Vec<usize> = (0..group.order()).map(|a| h.coset_rep(group, a)).collect();
        reps.sort_unstable();
        reps.dedup();
        let size = reps.len();
        let mut act = vec![0; group.order() * size];
        for g in 0..group.order() {
            for (i, &a) in reps.iter().enumerate() {
                let r = h.coset_rep(group, group.mul(g, a));
                act[g * size + i] = reps.binary_search(&r).expect("coset representatives are closed");
            }
        }
        (GSetAction { group: group.clone(), size, act }, reps)
    }

    #[inline]
    pub fn act(&self, g: usize, s: usize) -> usize {
        self.act[g * self.size + s]
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for s in 0..self.size {
            if seen[s] {
                continue;
            }
            let mut orb: Vec<usize> = (0..self.group.order()).map(|g| self.act(g, s)).collect();
            orb.sort_unstable();
            orb.dedup();
            for &x in &orb {
                seen[x] = true;
            }
            out.push(orb);
        }
        out
    }

    pub fn stabilizer(&self, s: usize) -> Subgroup {
        Subgroup { elements: (0..self.group.order()).filter(|&g| self.act(g, s) == s).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_subgroup_lattice() {
        let g = FinGroup::symmetric(3);
        assert_eq!(g.order(), 6);
        let a = group_analysis(&g).unwrap();
        assert_eq!(a.subgroups.len(), 6);
        assert_eq!(a.classes.len(), 4);
        let t = g.generate(&[g.find("(1 2)").unwrap()]);
        let i = a.index_of(&t).unwrap();
        assert_eq!(a.centralizers[i], t);
        assert_eq!(a.normalizers[i], t);
    }

    #[test]
    fn subgroup_counts_of_small_groups() {
        for (g, n) in [
            (FinGroup::cyclic(12), 6),
            (FinGroup::product(&FinGroup::cyclic(2), &FinGroup::cyclic(2)), 5),
            (FinGroup::dihedral(4), 10),
            (FinGroup::symmetric(4), 30),
        ] {
            assert_eq!(group_analysis(&g).unwrap().subgroups.len(), n, "{}", g.name());
        }
    }

    #[test]
    fn oversize_group_refused() {
        let g = FinGroup::cyclic(MAX_GROUP_ORDER + 1);
        assert!(matches!(group_analysis(&g), Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn closure_of_a_transposition() {
        let g = Arc::new(FinGroup::symmetric(3));
        let t = g.generate(&[g.find("(1 2)").unwrap()]);
        let f = family_closure(&g, &[t]).unwrap();
        // trivial subgroup plus the three conjugate transposition subgroups
        assert_eq!(f.members.len(), 4);
    }

    #[test]
    fn coset_action() {
        let g = Arc::new(FinGroup::symmetric(3));
        let t = g.generate(&[g.find("(1 2)").unwrap()]);
        let (s, _) = GSetAction::cosets(&g, &t);
        assert_eq!(s.size, 3);
        assert_eq!(s.orbits().len(), 1);
        assert_eq!(s.stabilizer(0).order(), 2);
    }
}
