use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of {0, ..., d-1} in image form: `images[i]` is where i goes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Build from an image table, checking it is a bijection.
    pub fn new(images: Vec<usize>) -> Result<Permutation> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            if i >= d || seen[i] {
                return Err(Error::FormatError(format!(
                    "image table {images:?} is not a permutation of 0..{d}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Permutation {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Build from disjoint (or not) cycles on `degree` points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Permutation> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (pos, &a) in cycle.iter().enumerate() {
                let b = cycle[(pos + 1) % cycle.len()];
                if a >= degree || b >= degree {
                    return Err(Error::FormatError(format!(
                        "cycle point out of range for degree {degree}"
                    )));
                }
                images[a] = b;
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Composition (self ∘ other): apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &j)| i == j).count()
    }

    /// Cycle notation, e.g. "(0 1 2)(3 4)"; identity prints as "()".
    pub fn cycle_string(&self) -> String {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = String::new();
        for start in 0..d {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut p = start;
            loop {
                seen[p] = true;
                if p != start {
                    out.push(' ');
                }
                out.push_str(&p.to_string());
                p = self.images[p];
                if p == start {
                    break;
                }
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_factor_first() {
        let s = Permutation::new(vec![1, 0, 2]).unwrap(); // (0 1)
        let c = Permutation::new(vec![1, 2, 0]).unwrap(); // (0 1 2)
        // (s ∘ c)(0) = s(1) = 0
        assert_eq!(s.compose(&c).apply(0), 0);
        assert_eq!(c.compose(&s).apply(0), 2);
    }

    #[test]
    fn inverse_roundtrip() {
        let c = Permutation::new(vec![2, 0, 3, 1, 4]).unwrap();
        assert!(c.compose(&c.inverse()).is_identity());
        assert!(c.inverse().compose(&c).is_identity());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3]).is_err());
    }

    #[test]
    fn cycle_string_matches() {
        let p = Permutation::from_cycles(5, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
        assert_eq!(p.cycle_string(), "(0 1 2)(3 4)");
        assert_eq!(Permutation::identity(3).cycle_string(), "()");
    }
}
