use std::collections::HashMap;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A finite group materialized as a full multiplication table.
///
/// Elements are dense 0-based indices with the identity at index 0.
/// The table makes every inner loop of the brute-force oracles branch-free.
#[derive(Debug, Clone)]
pub struct GroupTable {
    order: usize,
    /// Flattened m×m table; entry `mult[a*m + b]` is the index of a·b.
    mult: Vec<u32>,
    inv: Vec<u32>,
    /// Human-readable element labels, when the construction provides them.
    pub element_labels: Option<Vec<String>>,
    /// The permutation realizing each element, when built from generators.
    pub perms: Option<Vec<Permutation>>,
    pub name: String,
}

impl GroupTable {
    /// Build from a raw multiplication table, verifying the group axioms.
    ///
    /// Identity must sit at index 0. Associativity is checked exhaustively
    /// for m ≤ 512 and on 4096 sampled triples above that.
    pub fn from_mult_table(mult: Vec<Vec<usize>>, name: &str) -> Result<GroupTable> {
        let m = mult.len();
        if m == 0 || mult.iter().any(|row| row.len() != m) {
            return Err(Error::FormatError("multiplication table is not square".into()));
        }
        let mut flat = Vec::with_capacity(m * m);
        for row in &mult {
            for &e in row {
                if e >= m {
                    return Err(Error::FormatError("table entry out of range".into()));
                }
                flat.push(e as u32);
            }
        }
        let mut inv = vec![u32::MAX; m];
        for x in 0..m {
            if flat[x] as usize != x || flat[x * m] as usize != x {
                return Err(Error::FormatError("index 0 is not an identity".into()));
            }
            for y in 0..m {
                if flat[x * m + y] == 0 {
                    inv[x] = y as u32;
                }
            }
        }
        if inv.iter().any(|&y| y == u32::MAX) {
            return Err(Error::FormatError("an element has no inverse".into()));
        }
        let g = GroupTable {
            order: m,
            mult: flat,
            inv,
            element_labels: None,
            perms: None,
            name: name.to_string(),
        };
        g.check_associativity()?;
        Ok(g)
    }

    /// Build the table for a closed element list of permutations.
    fn from_perms(perms: Vec<Permutation>, name: &str) -> GroupTable {
        let m = perms.len();
        let index: HashMap<&[usize], u32> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.images(), i as u32))
            .collect();
        let mut mult = Vec::with_capacity(m * m);
        for a in &perms {
            for b in &perms {
                mult.push(index[a.compose(b).images()]);
            }
        }
        let mut inv = vec![0u32; m];
        for (i, p) in perms.iter().enumerate() {
            inv[i] = index[p.inverse().images()];
        }
        let labels = perms.iter().map(|p| p.cycle_string()).collect();
        GroupTable {
            order: m,
            mult,
            inv,
            element_labels: Some(labels),
            perms: Some(perms),
            name: name.to_string(),
        }
    }

    fn check_associativity(&self) -> Result<()> {
        let m = self.order;
        let ok = |x: usize, y: usize, z: usize| {
            self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z))
        };
        if m <= 512 {
            for x in 0..m {
                for y in 0..m {
                    for z in 0..m {
                        if !ok(x, y, z) {
                            return Err(Error::FormatError(format!(
                                "table is not associative at ({x},{y},{z})"
                            )));
                        }
                    }
                }
            }
        } else {
            // deterministic sampled triples
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..4096 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let x = (state >> 33) as usize % m;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let y = (state >> 33) as usize % m;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let z = (state >> 33) as usize % m;
                if !ok(x, y, z) {
                    return Err(Error::FormatError(format!(
                        "table is not associative at ({x},{y},{z})"
                    )));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// The commutator [x,y] = x⁻¹y⁻¹xy.
    #[inline]
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    /// Direct product; element (a1,a2) gets index a1·|G2| + a2.
    pub fn direct_product(&self, other: &GroupTable, cfg: &RunConfig) -> Result<GroupTable> {
        let m1 = self.order;
        let m2 = other.order;
        let m = m1.checked_mul(m2).unwrap_or(usize::MAX);
        if m > cfg.order_cap {
            return Err(Error::OrderCapExceeded { cap: cfg.order_cap });
        }
        let mut mult = vec![0u32; m * m];
        for a1 in 0..m1 {
            for a2 in 0..m2 {
                let a = a1 * m2 + a2;
                for b1 in 0..m1 {
                    for b2 in 0..m2 {
                        let b = b1 * m2 + b2;
                        mult[a * m + b] = (self.mul(a1, b1) * m2 + other.mul(a2, b2)) as u32;
                    }
                }
            }
        }
        let mut inv = vec![0u32; m];
        for a1 in 0..m1 {
            for a2 in 0..m2 {
                inv[a1 * m2 + a2] = (self.inv(a1) * m2 + other.inv(a2)) as u32;
            }
        }
        let labels = match (&self.element_labels, &other.element_labels) {
            (Some(l1), Some(l2)) => {
                let mut labels = Vec::with_capacity(m);
                for a in l1 {
                    for b in l2 {
                        labels.push(format!("({a}, {b})"));
                    }
                }
                Some(labels)
            }
            _ => None,
        };
        Ok(GroupTable {
            order: m,
            mult,
            inv,
            element_labels: labels,
            perms: None,
            name: format!("{} x {}", self.name, other.name),
        })
    }
}

/// Closure of permutation generators, breadth-first from the identity.
///
/// Element order is deterministic: BFS layer by layer, generators applied
/// in the given order, so identical generator lists produce identical tables.
pub fn generate_group(generators: &[Permutation], name: &str, cfg: &RunConfig) -> Result<GroupTable> {
    if generators.is_empty() {
        return Err(Error::EmptyGeneratorList);
    }
    let degree = generators[0].degree();
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch(degree, g.degree()));
        }
    }
    let mut elems = vec![Permutation::identity(degree)];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(elems[0].images().to_vec(), 0);
    let mut head = 0;
    while head < elems.len() {
        for g in generators {
            let next = elems[head].compose(g);
            if !index.contains_key(next.images()) {
                if elems.len() >= cfg.order_cap {
                    return Err(Error::OrderCapExceeded { cap: cfg.order_cap });
                }
                index.insert(next.images().to_vec(), elems.len());
                elems.push(next);
            }
        }
        head += 1;
    }
    Ok(GroupTable::from_perms(elems, name))
}

/// Conjugacy class partition of a group.
#[derive(Debug, Clone)]
pub struct ClassData {
    pub class_count: usize,
    /// Class index of each element; class 0 is the class of the identity.
    pub class_of: Vec<usize>,
    /// Minimal element index in each class.
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
    /// Class of the representatives' inverses; an involution.
    pub inverse_class: Vec<usize>,
}

/// Partition elements into conjugation orbits.
///
/// Classes are numbered in order of their minimal element, which puts the
/// identity's class at 0 and makes representatives deterministic.
pub fn conjugacy_classes(g: &GroupTable) -> ClassData {
    let m = g.order();
    let mut class_of = vec![usize::MAX; m];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for e in 0..m {
        if class_of[e] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(e);
        let mut size = 0;
        for t in 0..m {
            let conj = g.mul(g.mul(t, e), g.inv(t));
            if class_of[conj] == usize::MAX {
                class_of[conj] = c;
                size += 1;
            }
        }
        sizes.push(size);
    }
    let inverse_class = reps.iter().map(|&r| class_of[g.inv(r)]).collect();
    ClassData {
        class_count: reps.len(),
        class_of,
        reps,
        sizes,
        inverse_class,
    }
}
