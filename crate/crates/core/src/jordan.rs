//! Jordan normal form of nilpotent matrices.

use crate::error::{Error, Result};
use crate::matrix::{Mat, Span};
use crate::partition::Partition;
use crate::scalar::Field;

/// A nilpotent matrix together with a Jordan basis.
///
/// `basis⁻¹ · source · basis` is block diagonal with blocks `J_d` (ones on
/// the superdiagonal), block sizes given by `partition` in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentJordanData<T: Field> {
    pub partition: Partition,
    pub basis: Mat<T>,
    pub basis_inv: Mat<T>,
    pub source: Mat<T>,
}

/// Nilpotent Jordan block `J_d`.
pub fn jordan_block<T: Field>(domain: &T::Domain, d: usize) -> Mat<T> {
    let mut j = Mat::zeros(domain, d, d);
    for i in 0..d.saturating_sub(1) {
        j[(i, i + 1)] = T::one(domain);
    }
    j
}

/// Block-diagonal nilpotent with Jordan blocks of the given sizes.
pub fn jordan_form<T: Field>(domain: &T::Domain, partition: &Partition) -> Mat<T> {
    let blocks: Vec<Mat<T>> = partition
        .parts()
        .iter()
        .map(|&d| jordan_block(domain, d))
        .collect();
    Mat::direct_sum(domain, &blocks)
}

/// `[dim ker X^0, dim ker X^1, …]` up to the first power that vanishes.
///
/// Fails if `X` is not nilpotent, naming the power at which the rank
/// sequence stalls above zero.
pub fn kernel_dims<T: Field>(x: &Mat<T>) -> Result<Vec<usize>> {
    if !x.is_square() {
        return Err(Error::Domain(format!(
            "nilpotent input must be square, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let n = x.rows();
    let mut dims = vec![0];
    let mut power = Mat::identity(x.domain(), n);
    let mut prev_rank = n;
    for k in 1..=n.max(1) {
        power = &power * x;
        let r = power.rank();
        dims.push(n - r);
        if r == 0 {
            return Ok(dims);
        }
        if r == prev_rank {
            return Err(Error::Precondition(format!(
                "matrix is not nilpotent: rank(X^{k}) = rank(X^{}) = {r} > 0",
                k - 1
            )));
        }
        prev_rank = r;
    }
    if n == 0 {
        return Ok(dims);
    }
    Err(Error::Precondition(format!(
        "matrix is not nilpotent: X^{n} has rank {prev_rank}"
    )))
}

/// Partition of a nilpotent matrix from the ranks of its powers.
pub fn nilpotent_partition<T: Field>(x: &Mat<T>) -> Result<Partition> {
    Partition::from_kernel_dims(&kernel_dims(x)?)
}

fn apply<T: Field>(x: &Mat<T>, v: &[T]) -> Vec<T> {
    (x * &Mat::column(x.domain(), v)).col(0)
}

/// Jordan basis of a nilpotent matrix.
///
/// Chains are ordered longest first; chains of equal length are ordered by
/// the position of their top vector in the row-reduced kernel basis of
/// `X^d`. Within a chain the columns are `X^{d−1}v, …, Xv, v`.
pub fn nilpotent_jordan<T: Field>(x: &Mat<T>) -> Result<NilpotentJordanData<T>> {
    let dims = kernel_dims(x)?;
    let partition = Partition::from_kernel_dims(&dims)?;
    let n = x.rows();
    let domain = x.domain().clone();
    let height = dims.len() - 1;

    // kernels[i] = basis of ker X^i
    let mut kernels: Vec<Vec<Vec<T>>> = Vec::with_capacity(height + 1);
    let mut power = Mat::identity(&domain, n);
    kernels.push(Vec::new());
    for _ in 1..=height {
        power = &power * x;
        kernels.push(power.kernel_vectors());
    }

    // seeds[(d, v)]: top vectors of chains of length d
    let mut seeds: Vec<(usize, Vec<T>)> = Vec::new();
    for d in (1..=height).rev() {
        let mut span = Span::new(&domain, n);
        for v in &kernels[d - 1] {
            span.insert(v);
        }
        for (e, s) in &seeds {
            let mut w = s.clone();
            for _ in 0..(e - d) {
                w = apply(x, &w);
            }
            span.insert(&w);
        }
        for v in &kernels[d] {
            if span.insert(v) {
                seeds.push((d, v.clone()));
            }
        }
    }

    let mut columns: Vec<Vec<T>> = Vec::with_capacity(n);
    for (d, v) in &seeds {
        let mut chain = vec![v.clone()];
        for _ in 1..*d {
            let next = apply(x, chain.last().unwrap());
            chain.push(next);
        }
        chain.reverse();
        columns.extend(chain);
    }
    let chain_sizes: Vec<usize> = seeds.iter().map(|(d, _)| *d).collect();
    if chain_sizes != partition.parts() || columns.len() != n {
        return Err(Error::Inconsistency(format!(
            "chain sizes {chain_sizes:?} disagree with rank partition {partition}"
        )));
    }
    let basis = Mat::from_columns(&domain, n, &columns);
    let basis_inv = basis
        .inverse()
        .ok_or_else(|| Error::Inconsistency("Jordan chains are dependent".into()))?;
    let data = NilpotentJordanData {
        partition,
        basis,
        basis_inv,
        source: x.clone(),
    };
    debug_assert!(data.check());
    Ok(data)
}

impl<T: Field> NilpotentJordanData<T> {
    /// `basis⁻¹ · source · basis` equals the Jordan form exactly.
    pub fn check(&self) -> bool {
        let conj = &(&self.basis_inv * &self.source) * &self.basis;
        conj == jordan_form(self.source.domain(), &self.partition)
    }

    /// Ranges of basis indices belonging to each chain, in basis order.
    pub fn chain_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.partition
            .parts()
            .iter()
            .map(|&d| {
                let r = start..start + d;
                start += d;
                r
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Prime, Rational};

    fn p(q: u32) -> Prime {
        Prime::new(q).unwrap()
    }

    #[test]
    fn zero_matrix_is_all_ones() {
        let z = Mat::<Fp>::zeros(&p(5), 3, 3);
        let j = nilpotent_jordan(&z).unwrap();
        assert_eq!(j.partition.parts(), &[1, 1, 1]);
        assert!(j.basis.is_identity());
    }

    #[test]
    fn e12_is_regular_in_gl2() {
        let x = Mat::<Rational>::unit(&(), 2, 0, 1);
        let j = nilpotent_jordan(&x).unwrap();
        assert_eq!(j.partition.parts(), &[2]);
        assert!(j.check());
    }

    #[test]
    fn three_two_from_units() {
        // E12 + E34 + E45 in gl_5 (1-based)
        let d = p(3);
        let x = &(&Mat::<Fp>::unit(&d, 5, 0, 1) + &Mat::unit(&d, 5, 2, 3)) + &Mat::unit(&d, 5, 3, 4);
        let j = nilpotent_jordan(&x).unwrap();
        assert_eq!(j.partition.parts(), &[3, 2]);
        assert!(j.check());
    }

    #[test]
    fn non_nilpotent_rejected() {
        let x = Mat::<Fp>::from_ints(&p(5), 2, 2, &[1, 1, 0, 0]);
        let err = nilpotent_jordan(&x).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("X^2")), "{err}");
        let id = Mat::<Rational>::identity(&(), 2);
        assert!(nilpotent_jordan(&id).is_err());
    }

    #[test]
    fn scattered_nilpotent() {
        // a nilpotent that is not already in Jordan form
        let d = p(7);
        let j = jordan_form::<Fp>(&d, &Partition::new(vec![3, 1]).unwrap());
        let g = Mat::<Fp>::from_ints(&d, 4, 4, &[1, 2, 0, 1, 0, 1, 3, 0, 2, 0, 1, 1, 0, 0, 0, 1]);
        let gi = g.inverse().unwrap();
        let x = j.conjugate_by(&g, &gi);
        let data = nilpotent_jordan(&x).unwrap();
        assert_eq!(data.partition.parts(), &[3, 1]);
        assert!(data.check());
    }
}
