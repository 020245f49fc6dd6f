//! Finite permutations of {0, …, d−1} in one-line notation.

use crate::error::{Error, Result};

/// A permutation stored as its image vector: `self.0[i]` is the image of `i`.
///
/// Acting on coordinate vectors it permutes positions, `(w·v)[w(i)] = v[i]`,
/// so `w·e_i = e_{w(i)}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(d: usize) -> Self {
        Perm((0..d as u32).collect())
    }

    /// Build from 0-indexed images, validating bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &im in &images {
            let im = im as usize;
            if im >= d || seen[im] {
                return Err(Error::BadPerm(format!("{images:?}")));
            }
            seen[im] = true;
        }
        Ok(Perm(images))
    }

    /// Build from 1-indexed one-line notation (external encoding).
    pub fn from_one_line_1indexed(line: &[u32]) -> Result<Self> {
        if line.iter().any(|&x| x == 0) {
            return Err(Error::BadPerm(format!("{line:?} (1-indexed)")));
        }
        Perm::from_images(line.iter().map(|&x| x - 1).collect())
    }

    pub fn one_line_1indexed(&self) -> Vec<u32> {
        self.0.iter().map(|&x| x + 1).collect()
    }

    /// Transposition (i j), 0-indexed.
    pub fn transposition(d: usize, i: usize, j: usize) -> Self {
        let mut v: Vec<u32> = (0..d as u32).collect();
        v.swap(i, j);
        Perm(v)
    }

    /// The cycle a₁ → a₂ → ⋯ → a_k → a₁ (0-indexed entries).
    pub fn from_cycle(d: usize, cycle: &[usize]) -> Self {
        let mut v: Vec<u32> = (0..d as u32).collect();
        for t in 0..cycle.len() {
            v[cycle[t]] = cycle[(t + 1) % cycle.len()] as u32;
        }
        Perm(v)
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.d(), other.d());
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0u32; self.d()];
        for (i, &im) in self.0.iter().enumerate() {
            v[im as usize] = i as u32;
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    /// Coordinate action: `(w·v)[w(i)] = v[i]`.
    pub fn act<T: Clone>(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(self.d(), v.len());
        let mut out: Vec<T> = v.to_vec();
        for (i, x) in v.iter().enumerate() {
            out[self.0[i] as usize] = x.clone();
        }
        out
    }

    /// Cycle decomposition, fixed points omitted; each cycle starts at its
    /// smallest element, cycles sorted by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.d();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.apply(start);
            while j != start {
                seen[j] = true;
                cyc.push(j);
                j = self.apply(j);
            }
            out.push(cyc);
        }
        out
    }
}

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (k, x) in self.one_line_1indexed().iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let a = Perm::from_cycle(4, &[0, 1, 2]);
        let b = Perm::transposition(4, 2, 3);
        let ab = a.compose(&b);
        for i in 0..4 {
            assert_eq!(ab.apply(i), a.apply(b.apply(i)));
        }
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn action_on_basis() {
        // w·e_i = e_{w(i)}
        let w = Perm::from_cycle(3, &[2, 1, 0]);
        let e0 = [1i64, 0, 0];
        let im = w.act(&e0);
        let mut expect = [0i64; 3];
        expect[w.apply(0)] = 1;
        assert_eq!(im, expect);
    }

    #[test]
    fn one_line_round_trip() {
        let w = Perm::from_cycle(5, &[4, 3, 2, 1, 0]);
        let line = w.one_line_1indexed();
        assert_eq!(Perm::from_one_line_1indexed(&line).unwrap(), w);
        assert!(Perm::from_one_line_1indexed(&[1, 1, 2]).is_err());
        assert!(Perm::from_one_line_1indexed(&[0, 1]).is_err());
    }
}
