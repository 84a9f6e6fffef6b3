//! Finite groups given by an explicit Cayley table.
//!
//! Matrix groups are converted to this form once; all cohomology code works
//! on element indices so that quotients and subgroups can be handled
//! uniformly.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::GroupError;

/// A finite group on the index set `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    identity: usize,
    generators: Vec<usize>,
}

/// A subgroup realized as a group in its own right, together with the
/// inclusion into the parent's index set.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: Group,
    /// `embedding[i]` is the parent index of element `i`.
    pub embedding: Vec<usize>,
}

/// A quotient `G/N` with the projection `G -> G/N` on indices.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: Group,
    pub projection: Vec<usize>,
}

impl Group {
    /// Builds a group from a multiplication table (`mul[a * n + b] = a*b`).
    ///
    /// Identity, inverses and associativity are checked; `generators` are
    /// pruned to an irredundant generating set and must generate everything.
    pub fn from_table(order: usize, mul: Vec<usize>, generators: &[usize]) -> Result<Self, GroupError> {
        if order == 0 || mul.len() != order * order || order > u16::MAX as usize {
            return Err(GroupError::InvalidTable("table has the wrong shape".into()));
        }
        if mul.iter().any(|&x| x >= order) {
            return Err(GroupError::InvalidTable("entry out of range".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| mul[e * order + a] == a && mul[a * order + e] == a))
            .ok_or_else(|| GroupError::InvalidTable("no identity".into()))?;
        let mut inv = vec![0u16; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| mul[a * order + b] == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("element {a} has no inverse")))?;
            inv[a] = b as u16;
        }
        for a in 0..order {
            for b in 0..order {
                let ab = mul[a * order + b];
                for c in 0..order {
                    if mul[ab * order + c] != mul[a * order + mul[b * order + c]] {
                        return Err(GroupError::InvalidTable("not associative".into()));
                    }
                }
            }
        }
        let table: Vec<u16> = mul.into_iter().map(|x| x as u16).collect();
        Self::from_trusted_table(order, table, inv, identity, generators)
    }

    /// Table already known to be a group (e.g. computed from matrices).
    pub(crate) fn from_trusted_table(
        order: usize,
        mul: Vec<u16>,
        inv: Vec<u16>,
        identity: usize,
        generators: &[usize],
    ) -> Result<Self, GroupError> {
        let mut g = Self { order, mul, inv, identity, generators: Vec::new() };
        let gens = g.irredundant_generators(generators);
        if g.closure(&gens).len() != order {
            return Err(GroupError::NotGenerating);
        }
        g.generators = gens;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut queue = VecDeque::from([self.identity]);
        seen[self.identity] = true;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    /// Greedy pruning: keep a generator only if it is not already generated.
    pub fn irredundant_generators(&self, gens: &[usize]) -> Vec<usize> {
        let mut kept = Vec::new();
        let mut current = vec![self.identity];
        for &g in gens {
            if current.binary_search(&g).is_err() {
                kept.push(g);
                current = self.closure(&kept);
            }
        }
        kept
    }

    pub fn cyclic_subgroup(&self, a: usize) -> Vec<usize> {
        self.closure(&[a])
    }

    /// Distinct cyclic subgroups, each with one generator, ordered by
    /// (order, element list).
    pub fn cyclic_subgroups(&self) -> Vec<(usize, Vec<usize>)> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut out = Vec::new();
        for a in 0..self.order {
            let c = self.cyclic_subgroup(a);
            if seen.insert(c.clone()) {
                out.push((a, c));
            }
        }
        out.sort_by(|x, y| (x.1.len(), &x.1).cmp(&(y.1.len(), &y.1)));
        out
    }

    pub fn is_subgroup(&self, members: &[usize]) -> bool {
        let set: HashSet<usize> = members.iter().copied().collect();
        set.contains(&self.identity)
            && members.iter().all(|&a| {
                set.contains(&self.inv(a)) && members.iter().all(|&b| set.contains(&self.mul(a, b)))
            })
    }

    pub fn is_normal(&self, members: &[usize]) -> bool {
        let set: HashSet<usize> = members.iter().copied().collect();
        self.is_subgroup(members)
            && self
                .generators
                .iter()
                .all(|&g| members.iter().all(|&n| set.contains(&self.mul(self.mul(g, n), self.inv(g)))))
    }

    /// The subgroup on `members` (any order, must be closed).
    pub fn subgroup(&self, members: &[usize]) -> Result<Subgroup, GroupError> {
        let mut emb = members.to_vec();
        emb.sort_unstable();
        emb.dedup();
        if !self.is_subgroup(&emb) {
            return Err(GroupError::NotSubgroup);
        }
        let n = emb.len();
        let mut local = vec![usize::MAX; self.order];
        for (i, &g) in emb.iter().enumerate() {
            local[g] = i;
        }
        let mut mul = Vec::with_capacity(n * n);
        for &a in &emb {
            for &b in &emb {
                mul.push(local[self.mul(a, b)] as u16);
            }
        }
        let inv = emb.iter().map(|&a| local[self.inv(a)] as u16).collect();
        let identity = local[self.identity];
        let all: Vec<usize> = (0..n).collect();
        let group = Self::from_trusted_table(n, mul, inv, identity, &all)?;
        Ok(Subgroup { group, embedding: emb })
    }

    /// `G/N` for a normal subgroup `N`.
    pub fn quotient(&self, normal: &[usize]) -> Result<Quotient, GroupError> {
        if !self.is_normal(normal) {
            return Err(GroupError::NotNormal);
        }
        let mut coset = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if coset[g] == usize::MAX {
                let id = reps.len();
                reps.push(g);
                for &n in normal {
                    coset[self.mul(g, n)] = id;
                }
            }
        }
        let k = reps.len();
        let mut mul = Vec::with_capacity(k * k);
        for &a in &reps {
            for &b in &reps {
                mul.push(coset[self.mul(a, b)] as u16);
            }
        }
        let inv = reps.iter().map(|&a| coset[self.inv(a)] as u16).collect();
        let gens: Vec<usize> = self.generators.iter().map(|&g| coset[g]).collect();
        let group = Self::from_trusted_table(k, mul, inv, coset[self.identity], &gens)?;
        Ok(Quotient { group, projection: coset })
    }

    /// Every subgroup, as sorted index lists ordered by (order, elements).
    ///
    /// Each subgroup is the join of its cyclic subgroups, so closing the set
    /// of cyclic subgroups under "join with one more cyclic subgroup" reaches
    /// all of them.
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let cyclic = self.cyclic_subgroups();
        let mut known: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let mut frontier: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (g, c) in &cyclic {
            let gens = if *g == self.identity { vec![] } else { vec![*g] };
            if known.insert(c.clone(), gens.clone()).is_none() {
                frontier.push((c.clone(), gens));
            }
        }
        while let Some((h, gens)) = frontier.pop() {
            for (g, c) in &cyclic {
                if h.binary_search(g).is_ok() || c.len() == 1 {
                    continue;
                }
                let mut new_gens = gens.clone();
                new_gens.push(*g);
                let j = self.closure(&new_gens);
                if !known.contains_key(&j) {
                    known.insert(j.clone(), new_gens.clone());
                    frontier.push((j, new_gens));
                }
            }
        }
        let mut out: Vec<Vec<usize>> = known.into_keys().collect();
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }
}
