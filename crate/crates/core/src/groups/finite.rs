//! Cayley tables and subgroup enumeration for the built-in finite groups.

use std::collections::HashSet;

use crate::exec::Exec;
use crate::measure::MeasurableSet;

/// Multiplication table with elements numbered `0..order`; `mul(a, b)` is
/// the composition `a·b` (apply `b` first for permutations).
#[derive(Debug, Clone)]
pub struct CayleyTable {
    order: usize,
    table: Vec<u16>,
    inverse: Vec<u16>,
    identity: usize,
}

impl CayleyTable {
    pub(crate) fn build<M>(order: usize, identity: usize, mul: M) -> CayleyTable
    where
        M: Fn(usize, usize) -> usize,
    {
        assert!(order <= u16::MAX as usize);
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b) as u16);
            }
        }
        let mut inverse = vec![0u16; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            let b = row.iter().position(|&c| c as usize == identity).expect("group has inverses");
            inverse[a] = b as u16;
        }
        CayleyTable {
            order,
            table,
            inverse,
            identity,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// Whether `elements` is closed under composition and inverses.
    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        if elements.is_empty() {
            return false;
        }
        let mut member = vec![false; self.order];
        for &e in elements {
            member[e] = true;
        }
        elements.iter().all(|&a| {
            member[self.inv(a)] && elements.iter().all(|&b| member[self.mul(a, b)])
        })
    }

    /// Smallest subgroup containing `generators`.
    pub fn closure(&self, generators: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut elems = vec![self.identity];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in generators {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }
}

/// A subgroup embedded in its parent group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    /// Sorted element indices in the parent group.
    pub elements: Vec<usize>,
    /// A generating set (element indices in the parent group).
    pub generators: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn as_set(&self) -> MeasurableSet {
        MeasurableSet::atoms(self.elements.iter().copied())
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }
}

struct Candidate {
    bits: Vec<u64>,
    elements: Vec<usize>,
    generators: Vec<usize>,
}

fn bitset(order: usize, elements: &[usize]) -> Vec<u64> {
    let mut bits = vec![0u64; order.div_ceil(64)];
    for &e in elements {
        bits[e / 64] |= 1 << (e % 64);
    }
    bits
}

#[inline]
fn has(bits: &[u64], e: usize) -> bool {
    bits[e / 64] >> (e % 64) & 1 == 1
}

/// `⟨H, g⟩` built as a union of right cosets `H·t`.
fn join(t: &CayleyTable, h: &Candidate, g: usize) -> Candidate {
    let mut bits = h.bits.clone();
    let mut elements = h.elements.clone();
    let mut generators = h.generators.clone();
    generators.push(g);
    let mut reps = vec![t.identity()];
    let mut i = 0;
    while i < reps.len() {
        for &s in &generators {
            let r = t.mul(reps[i], s);
            if !has(&bits, r) {
                for &x in &h.elements {
                    let y = t.mul(x, r);
                    bits[y / 64] |= 1 << (y % 64);
                    elements.push(y);
                }
                reps.push(r);
            }
        }
        i += 1;
    }
    elements.sort_unstable();
    Candidate {
        bits,
        elements,
        generators,
    }
}

/// Every subgroup of the group, sorted by order then by element list.
///
/// Starting from the trivial subgroup, each known subgroup is joined with one
/// generator of every cyclic subgroup it does not contain. Every subgroup is
/// reached because it is generated by its cyclic subgroups.
pub fn enumerate_subgroups(t: &CayleyTable, exec: Exec) -> Vec<Subgroup> {
    let n = t.order();
    let trivial = Candidate {
        bits: bitset(n, &[t.identity()]),
        elements: vec![t.identity()],
        generators: Vec::new(),
    };

    let mut cyclic_gens = Vec::new();
    let mut cyclic_seen = HashSet::new();
    for g in 0..n {
        let c = t.closure(&[g]);
        if cyclic_seen.insert(bitset(n, &c)) {
            cyclic_gens.push(g);
        }
    }

    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(trivial.bits.clone());
    let mut found = vec![trivial];
    let mut next = 0;
    while next < found.len() {
        let h = &found[next];
        let candidates: Vec<usize> = cyclic_gens
            .iter()
            .copied()
            .filter(|&g| !has(&h.bits, g))
            .collect();
        let joined = exec.map(&candidates, |&g| join(t, h, g));
        for k in joined {
            if seen.insert(k.bits.clone()) {
                found.push(k);
            }
        }
        next += 1;
    }

    let mut out: Vec<Subgroup> = found
        .into_iter()
        .map(|c| Subgroup {
            elements: c.elements,
            generators: c.generators,
        })
        .collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    out
}

/// Lexicographic rank of a permutation of `0..n`.
pub(crate) fn perm_rank(p: &[u8]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

pub(crate) fn perm_unrank(n: usize, mut rank: usize) -> Vec<u8> {
    let mut pool: Vec<u8> = (0..n as u8).collect();
    let mut fact: Vec<usize> = vec![1; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i;
    }
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let k = rank / fact[i];
        rank %= fact[i];
        out.push(pool.remove(k));
    }
    out
}

pub(crate) fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> CayleyTable {
        CayleyTable::build(n, 0, |a, b| (a + b) % n)
    }

    #[test]
    fn perm_rank_roundtrip() {
        for n in 1..=5 {
            for r in 0..factorial(n) {
                assert_eq!(perm_rank(&perm_unrank(n, r)), r);
            }
        }
        assert_eq!(perm_unrank(3, 0), vec![0, 1, 2]);
        assert_eq!(perm_unrank(3, 5), vec![2, 1, 0]);
    }

    #[test]
    fn cyclic_subgroups_match_divisors() {
        let subs = enumerate_subgroups(&cyclic(6), Exec::Sequential);
        let orders: Vec<usize> = subs.iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        assert_eq!(enumerate_subgroups(&cyclic(1), Exec::Sequential).len(), 1);
    }

    /// Brute force over all subsets: the subsets closed under the group law.
    fn brute_force_orders(t: &CayleyTable) -> Vec<usize> {
        let n = t.order();
        assert!(n <= 16);
        let mut orders = Vec::new();
        for mask in 1u32..(1 << n) {
            let elems: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if t.is_subgroup(&elems) {
                orders.push(elems.len());
            }
        }
        orders.sort_unstable();
        orders
    }

    #[test]
    fn enumeration_matches_brute_force_for_small_cyclic_groups() {
        for n in 1..=12 {
            let t = cyclic(n);
            let got: Vec<usize> = enumerate_subgroups(&t, Exec::Sequential)
                .iter()
                .map(Subgroup::order)
                .collect();
            assert_eq!(got, brute_force_orders(&t), "Z{n}");
        }
    }

    #[test]
    fn closure_of_generator() {
        assert_eq!(cyclic(12).closure(&[8]), vec![0, 4, 8]);
    }
}
