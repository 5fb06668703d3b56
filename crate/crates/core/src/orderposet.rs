//! Finite posets of subgroups and reduced Euler characteristics of their order
//! complexes.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matgroup::{ElementSet, SubgroupLattice};

/// A finite strict partial order on `vertices`.
#[derive(Clone, Debug)]
pub struct FinitePoset<V> {
    vertices: Vec<V>,
    less_than: BTreeSet<(usize, usize)>,
    above: Vec<Vec<usize>>,
}

impl<V> FinitePoset<V> {
    /// Builds a poset from a relation, checking irreflexivity and transitivity.
    pub fn new(vertices: Vec<V>, less_than: BTreeSet<(usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        let mut above = vec![Vec::new(); n];
        for &(a, b) in &less_than {
            if a >= n || b >= n {
                return Err(Error::NotStrictOrder(format!("pair ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::NotStrictOrder(format!("reflexive pair at {a}")));
            }
            above[a].push(b);
        }
        for &(a, b) in &less_than {
            for &c in &above[b] {
                if !less_than.contains(&(a, c)) {
                    return Err(Error::NotStrictOrder(format!(
                        "missing ({a}, {c}) implied by ({a}, {b}) and ({b}, {c})"
                    )));
                }
            }
        }
        Ok(FinitePoset {
            vertices,
            less_than,
            above,
        })
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn less_than(&self) -> &BTreeSet<(usize, usize)> {
        &self.less_than
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.less_than.contains(&(a, b))
    }

    /// Number of chains `v0 < ... < vt`, indexed by `t`.
    pub fn chain_counts(&self) -> Vec<u64> {
        // counts[v][t]: chains of length t starting at v
        let order = self.topological_from_top();
        let mut counts: Vec<Vec<u64>> = vec![Vec::new(); self.len()];
        for &v in &order {
            let mut c = vec![1u64];
            for &w in &self.above[v] {
                for (t, &x) in counts[w].iter().enumerate() {
                    if c.len() <= t + 1 {
                        c.resize(t + 2, 0);
                    }
                    c[t + 1] += x;
                }
            }
            counts[v] = c;
        }
        let mut total: Vec<u64> = Vec::new();
        for c in counts {
            if total.len() < c.len() {
                total.resize(c.len(), 0);
            }
            for (t, x) in c.into_iter().enumerate() {
                total[t] += x;
            }
        }
        total
    }

    /// Vertices ordered so that everything above `v` comes before `v`.
    fn topological_from_top(&self) -> Vec<usize> {
        // In a strict order, the number of elements above strictly decreases
        // along the order.
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&v| self.above[v].len());
        order
    }

    /// Reduced Euler characteristic of the order complex: `-1 + Σ_t (-1)^t c_t`
    /// where `c_t` counts the chains with `t + 1` elements. Empty poset gives `-1`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        // g(v) = Σ over chains starting at v of (-1)^length
        let mut g = vec![0i64; self.len()];
        for v in self.topological_from_top() {
            g[v] = 1 - self.above[v].iter().map(|&w| g[w]).sum::<i64>();
        }
        -1 + g.iter().sum::<i64>()
    }

    /// Whether every pair of vertices has a common upper bound in the poset.
    pub fn is_directed(&self) -> bool {
        let n = self.len();
        let le = |a: usize, b: usize| a == b || self.lt(a, b);
        (0..n).all(|a| (a + 1..n).all(|b| (0..n).any(|c| le(a, c) && le(b, c))))
    }
}

/// The branch poset `{S : H < S < F, rank C_A(S) ≥ 1}` ordered by inclusion.
///
/// `fixed_rank(i)` gives the fixed-lattice rank of subgroup `i` of the
/// lattice.
pub fn build_branch_poset(
    h: &ElementSet,
    f: &ElementSet,
    lattice: &SubgroupLattice,
    fixed_rank: impl Fn(usize) -> usize,
) -> Result<FinitePoset<ElementSet>> {
    if !h.is_subset(f) || h == f {
        return Err(Error::NotProperSubgroup);
    }
    let (hl, fl) = (h.len(), f.len());
    let vertices: Vec<ElementSet> = lattice
        .subgroups()
        .iter()
        .enumerate()
        .filter(|(_, s)| {
            let o = s.len();
            o > hl && o < fl && fl % o == 0 && o % hl == 0 && h.is_subset(s) && s.is_subset(f)
        })
        .filter(|(i, _)| fixed_rank(*i) >= 1)
        .map(|(_, s)| s.clone())
        .collect();
    let mut less_than = BTreeSet::new();
    for (i, a) in vertices.iter().enumerate() {
        for (j, b) in vertices.iter().enumerate() {
            if a.len() < b.len() && a.is_subset(b) {
                less_than.insert((i, j));
            }
        }
    }
    FinitePoset::new(vertices, less_than)
}
