//! Integer partitions, the labels of nilpotent `GL_n`-orbits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing list of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts into decreasing order; rejects zero parts.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Domain("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    /// `(1, 1, …, 1)` with `n` parts.
    pub fn trivial(n: usize) -> Self {
        Partition(vec![1; n])
    }

    /// The one-part partition `(n)`.
    pub fn regular(n: usize) -> Self {
        if n == 0 {
            Partition(vec![])
        } else {
            Partition(vec![n])
        }
    }

    /// Parse `"3,2,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn largest(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Self {
        let m = self.largest();
        Partition(
            (1..=m)
                .map(|i| self.0.iter().filter(|&&p| p >= i).count())
                .collect(),
        )
    }

    /// `Σ (λ'_i)²`, the dimension of the centralizer in `gl_n` of a
    /// nilpotent with this partition.
    pub fn centralizer_dim(&self) -> usize {
        self.conjugate().0.iter().map(|c| c * c).sum()
    }

    /// Single Jordan block: the distinguished class in `gl_n`.
    pub fn is_distinguished(&self) -> bool {
        self.0.len() <= 1
    }

    /// Recover the partition from the nullities `dim ker X^i`, `i = 0, 1, …`.
    ///
    /// `λ'_i = nullity(X^i) − nullity(X^{i−1})`.
    pub fn from_kernel_dims(nullities: &[usize]) -> Result<Self> {
        let conj: Vec<usize> = nullities
            .windows(2)
            .map(|w| w[1].saturating_sub(w[0]))
            .take_while(|&d| d > 0)
            .collect();
        if conj.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Inconsistency(format!(
                "kernel dimensions {nullities:?} do not come from a nilpotent"
            )));
        }
        Ok(Partition(conj).conjugate())
    }

    /// All partitions of `n` in reverse lexicographic order, `(n)` first.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for k in (1..=n.min(max)).rev() {
                prefix.push(k);
                rec(n - k, k, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Parts with their multiplicities, largest part first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.0
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts_match_partition_numbers() {
        let counts: Vec<usize> = (1..=8).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(Partition::all(3)[0], Partition::regular(3));
    }

    #[test]
    fn conjugate_examples() {
        let p = Partition::new(vec![3, 2]).unwrap();
        assert_eq!(p.conjugate().parts(), &[2, 2, 1]);
        assert_eq!(Partition::new(vec![2, 1]).unwrap().centralizer_dim(), 5);
        assert_eq!(Partition::regular(4).centralizer_dim(), 4);
        assert_eq!(Partition::trivial(3).centralizer_dim(), 9);
    }

    #[test]
    fn parse_and_sort() {
        assert_eq!(Partition::parse("2,3").unwrap().parts(), &[3, 2]);
        assert!(Partition::parse("2,0").is_err());
        assert!(Partition::parse("a").is_err());
    }

    #[test]
    fn from_kernel_dims_recovers() {
        // (3,2): nullities 0,2,4,5
        let p = Partition::from_kernel_dims(&[0, 2, 4, 5, 5]).unwrap();
        assert_eq!(p.parts(), &[3, 2]);
    }

    proptest! {
        #[test]
        fn conjugation_is_involutive(parts in proptest::collection::vec(1usize..7, 0..7)) {
            let p = Partition::new(parts).unwrap();
            prop_assert_eq!(p.conjugate().conjugate(), p.clone());
            prop_assert_eq!(p.conjugate().n(), p.n());
        }
    }
}
