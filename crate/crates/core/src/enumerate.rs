//! Brute-force enumeration over small finite fields: invertible matrices,
//! linear combinations of a basis, and subspaces of `F_p^n`.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{Field, Fp, Prime};

/// Default cap on the number of candidates a brute-force search may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Number of candidates `p^k`, or a resource error if it exceeds `budget`.
pub fn candidate_count(p: Prime, k: usize, budget: u64) -> Result<u64> {
    match checked_pow(p.get() as u64, k) {
        Some(c) if c <= budget => Ok(c),
        _ => Err(Error::Resource(format!(
            "{}^{k} candidates exceed the budget of {budget}",
            p.get()
        ))),
    }
}

/// Decode `index` into `k` base-`p` digits, most significant first.
fn digits(p: Prime, k: usize, mut index: u64) -> Vec<Fp> {
    let base = p.get() as u64;
    let mut out = vec![Fp::new(0, p); k];
    for slot in out.iter_mut().rev() {
        *slot = Fp::new((index % base) as i64, p);
        index /= base;
    }
    out
}

/// Deterministic enumeration of `GL_n(F_p)` filtered by a predicate.
///
/// Matrices are visited in lexicographic order of their row-major entries.
/// The iterator can be restarted by calling [`GroupEnumerator::iter`] again,
/// and split across workers with [`GroupEnumerator::shard`].
#[derive(Clone, Debug)]
pub struct GroupEnumerator {
    n: usize,
    p: Prime,
    total: u64,
}

impl GroupEnumerator {
    /// Fails before any iteration if `p^{n²}` exceeds `budget`.
    pub fn new(n: usize, p: Prime, budget: u64) -> Result<Self> {
        let total = candidate_count(p, n * n, budget)?;
        Ok(GroupEnumerator { n, p, total })
    }

    pub fn candidates(&self) -> u64 {
        self.total
    }

    pub fn iter<'a, F>(&'a self, predicate: F) -> impl Iterator<Item = Mat<Fp>> + 'a
    where
        F: Fn(&Mat<Fp>) -> bool + 'a,
    {
        self.range(0, self.total, predicate)
    }

    /// The `k`-th of `of` contiguous shards of the candidate range. Shards
    /// concatenated in order reproduce [`GroupEnumerator::iter`].
    pub fn shard<'a, F>(&'a self, k: u64, of: u64, predicate: F) -> impl Iterator<Item = Mat<Fp>> + 'a
    where
        F: Fn(&Mat<Fp>) -> bool + 'a,
    {
        let lo = self.total * k / of;
        let hi = self.total * (k + 1) / of;
        self.range(lo, hi, predicate)
    }

    fn range<'a, F>(&'a self, lo: u64, hi: u64, predicate: F) -> impl Iterator<Item = Mat<Fp>> + 'a
    where
        F: Fn(&Mat<Fp>) -> bool + 'a,
    {
        let (n, p) = (self.n, self.p);
        (lo..hi).filter_map(move |i| {
            let m = Mat::from_vector(&p, n, n, &digits(p, n * n, i));
            (!m.det().is_zero() && predicate(&m)).then_some(m)
        })
    }
}

/// Convenience wrapper: `enumerate_group(n, p, pred)` with the default budget.
pub fn enumerate_group<F>(n: usize, p: Prime, budget: u64, predicate: F) -> Result<Vec<Mat<Fp>>>
where
    F: Fn(&Mat<Fp>) -> bool,
{
    let e = GroupEnumerator::new(n, p, budget)?;
    Ok(e.iter(predicate).collect())
}

/// All `F_p`-linear combinations of `basis`, in lexicographic coefficient order.
pub fn linear_combinations(
    p: Prime,
    basis: &[Mat<Fp>],
    budget: u64,
) -> Result<impl Iterator<Item = Mat<Fp>> + '_> {
    let total = candidate_count(p, basis.len(), budget)?;
    Ok((0..total).map(move |i| {
        let coeffs = digits(p, basis.len(), i);
        let (r, c) = basis
            .first()
            .map_or((0, 0), |b| (b.rows(), b.cols()));
        let mut acc = Mat::zeros(&p, r, c);
        for (a, b) in coeffs.iter().zip(basis) {
            if !a.is_zero() {
                acc = &acc + &b.scale(a);
            }
        }
        acc
    }))
}

/// Gaussian binomial `[n choose k]_q`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (q as u128).pow((n - i) as u32) - 1;
        den *= (q as u128).pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

/// Every `k`-dimensional subspace of `F_p^n`, each given once by its
/// reduced row echelon basis (rows of a `k × n` matrix).
pub fn subspaces_of_dim(n: usize, k: usize, p: Prime, budget: u64) -> Result<Vec<Mat<Fp>>> {
    let count = gaussian_binomial(n, k, p.get() as u64);
    if count > budget {
        return Err(Error::Resource(format!(
            "{count} subspaces of dimension {k} exceed the budget of {budget}"
        )));
    }
    let mut out = Vec::new();
    // choose pivot columns, then fill the free entries to the right of each pivot
    for pivots in combinations(n, k) {
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (row, &pc) in pivots.iter().enumerate() {
            for col in pc + 1..n {
                if !pivots.contains(&col) {
                    free.push((row, col));
                }
            }
        }
        let total = candidate_count(p, free.len(), budget)?;
        for i in 0..total {
            let vals = digits(p, free.len(), i);
            let mut m = Mat::zeros(&p, k, n);
            for (row, &pc) in pivots.iter().enumerate() {
                m[(row, pc)] = Fp::new(1, p);
            }
            for (&(r, c), v) in free.iter().zip(&vals) {
                m[(r, c)] = *v;
            }
            out.push(m);
        }
    }
    debug_assert_eq!(out.len() as u64, count);
    Ok(out)
}

/// All subspaces of `F_p^n`, by increasing dimension.
pub fn all_subspaces(n: usize, p: Prime, budget: u64) -> Result<Vec<Mat<Fp>>> {
    let total: u64 = (0..=n).map(|k| gaussian_binomial(n, k, p.get() as u64)).sum();
    if total > budget {
        return Err(Error::Resource(format!(
            "{total} subspaces of F_{p}^{n} exceed the budget of {budget}"
        )));
    }
    let mut out = Vec::new();
    for k in 0..=n {
        out.extend(subspaces_of_dim(n, k, p, budget)?);
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u32) -> Prime {
        Prime::new(q).unwrap()
    }

    /// `|GL_n(F_q)| = Π (q^n − q^i)`.
    fn gl_order(n: u32, q: u64) -> u64 {
        (0..n).map(|i| q.pow(n) - q.pow(i)).product()
    }

    #[test]
    fn gl1_f3() {
        let all = enumerate_group(1, p(3), DEFAULT_BUDGET, |_| true).unwrap();
        let vals: Vec<u32> = all.iter().map(|m| m[(0, 0)].residue()).collect();
        assert_eq!(vals, vec![1, 2]);
    }

    #[test]
    fn group_orders() {
        assert_eq!(gl_order(2, 2), 6);
        assert_eq!(enumerate_group(2, p(2), DEFAULT_BUDGET, |_| true).unwrap().len(), 6);
        assert_eq!(
            enumerate_group(2, p(3), DEFAULT_BUDGET, |_| true).unwrap().len() as u64,
            gl_order(2, 3)
        );
        assert_eq!(
            enumerate_group(3, p(2), DEFAULT_BUDGET, |_| true).unwrap().len() as u64,
            gl_order(3, 2)
        );
    }

    #[test]
    fn centralizer_of_e12_over_f2() {
        let e12 = Mat::<Fp>::unit(&p(2), 2, 0, 1);
        let c = enumerate_group(2, p(2), DEFAULT_BUDGET, |g| g.commutes_with(&e12)).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c[0].is_identity() || c[1].is_identity());
        assert!(c.contains(&(&Mat::identity(&p(2), 2) + &e12)));
    }

    #[test]
    fn budget_is_checked_up_front() {
        assert!(matches!(
            GroupEnumerator::new(4, p(3), DEFAULT_BUDGET),
            Err(Error::Resource(_))
        ));
        assert!(GroupEnumerator::new(4, p(3), 1 << 26).is_ok());
    }

    #[test]
    fn shards_reassemble() {
        let e = GroupEnumerator::new(2, p(3), DEFAULT_BUDGET).unwrap();
        let whole: Vec<_> = e.iter(|_| true).collect();
        let parts: Vec<_> = (0..4).flat_map(|k| e.shard(k, 4, |_| true).collect::<Vec<_>>()).collect();
        assert_eq!(whole, parts);
    }

    #[test]
    fn subspace_counts() {
        for (n, q) in [(3, 2), (4, 2), (3, 3), (4, 3)] {
            let all = all_subspaces(n, p(q), DEFAULT_BUDGET).unwrap();
            let expect: u64 = (0..=n).map(|k| gaussian_binomial(n, k, q as u64)).sum();
            assert_eq!(all.len() as u64, expect);
        }
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
    }
}
