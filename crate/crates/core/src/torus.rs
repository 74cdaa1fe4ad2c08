//! Cocharacters of `GL_n`, the weight grading they induce on `gl_n`, and the
//! parabolic subgroup `P(γ)` with its Levi factor and unipotent radical.
//!
//! A cocharacter is recorded by a basis `B` and integer weights `w`, so that
//! `γ(t) = B · diag(t^{w_1}, …, t^{w_n}) · B⁻¹`. In the `γ`-basis the matrix
//! unit `E_{rc}` has weight `w_r − w_c` under `Ad γ(t)`; every construction
//! below works entrywise in that basis, so limits `t → 0` are read off from
//! weight signs and never evaluated.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::{same_span, span_dim, Mat};
use crate::partition::Partition;
use crate::scalar::{Field, Fp, Prime};

#[derive(Clone, Debug)]
pub struct Cocharacter<T: Field> {
    basis: Mat<T>,
    basis_inv: Mat<T>,
    weights: Vec<i64>,
}

/// Equal iff the two cocharacters induce the same weight decomposition of
/// the underlying space, regardless of the bases used to record them.
impl<T: Field> PartialEq for Cocharacter<T> {
    fn eq(&self, other: &Self) -> bool {
        self.same_grading(other)
    }
}

impl<T: Field> Cocharacter<T> {
    pub fn new(basis: Mat<T>, weights: Vec<i64>) -> Result<Self> {
        if !basis.is_square() || basis.rows() != weights.len() {
            return Err(Error::Domain(format!(
                "cocharacter basis is {}x{} but {} weights given",
                basis.rows(),
                basis.cols(),
                weights.len()
            )));
        }
        let basis_inv = basis
            .inverse()
            .ok_or_else(|| Error::Domain("cocharacter basis is singular".into()))?;
        Ok(Cocharacter {
            basis,
            basis_inv,
            weights,
        })
    }

    /// Diagonal cocharacter in the standard basis.
    pub fn standard(domain: &T::Domain, weights: Vec<i64>) -> Self {
        let n = weights.len();
        Cocharacter {
            basis: Mat::identity(domain, n),
            basis_inv: Mat::identity(domain, n),
            weights,
        }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }
    pub fn basis(&self) -> &Mat<T> {
        &self.basis
    }
    pub fn basis_inv(&self) -> &Mat<T> {
        &self.basis_inv
    }
    pub fn domain(&self) -> &T::Domain {
        self.basis.domain()
    }

    /// `γ(t)` for a nonzero scalar `t`.
    pub fn eval(&self, t: &T) -> Mat<T> {
        let inv = t.inverse().expect("cocharacter evaluated at 0");
        let diag: Vec<T> = self
            .weights
            .iter()
            .map(|&w| {
                if w >= 0 {
                    t.pow(w as u64)
                } else {
                    inv.pow((-w) as u64)
                }
            })
            .collect();
        let d = Mat::diagonal(self.domain(), &diag);
        &(&self.basis * &d) * &self.basis_inv
    }

    /// `dγ(1) = B · diag(w) · B⁻¹`.
    pub fn differential(&self) -> Mat<T> {
        let dom = self.domain().clone();
        let diag: Vec<T> = self.weights.iter().map(|&w| T::from_i64(&dom, w)).collect();
        let d = Mat::diagonal(&dom, &diag);
        &(&self.basis * &d) * &self.basis_inv
    }

    /// `M` expressed in the `γ`-basis: `B⁻¹ M B`.
    pub fn to_basis(&self, m: &Mat<T>) -> Mat<T> {
        &(&self.basis_inv * m) * &self.basis
    }

    pub fn from_basis(&self, m: &Mat<T>) -> Mat<T> {
        &(&self.basis * m) * &self.basis_inv
    }

    fn check_shape(&self, m: &Mat<T>) -> Result<()> {
        if m.rows() != self.n() || m.cols() != self.n() {
            return Err(Error::Domain(format!(
                "expected a {n}x{n} matrix, got {}x{}",
                m.rows(),
                m.cols(),
                n = self.n()
            )));
        }
        if m.domain() != self.domain() {
            return Err(Error::Domain("matrix and cocharacter lie over different fields".into()));
        }
        Ok(())
    }

    /// Nonzero graded components of `M`; they sum to `M`.
    pub fn graded_decompose(&self, m: &Mat<T>) -> Result<BTreeMap<i64, Mat<T>>> {
        self.check_shape(m)?;
        let local = self.to_basis(m);
        let n = self.n();
        let mut pieces: BTreeMap<i64, Mat<T>> = BTreeMap::new();
        for r in 0..n {
            for c in 0..n {
                if local[(r, c)].is_zero() {
                    continue;
                }
                let w = self.weights[r] - self.weights[c];
                let piece = pieces
                    .entry(w)
                    .or_insert_with(|| Mat::zeros(self.domain(), n, n));
                piece[(r, c)] = local[(r, c)].clone();
            }
        }
        Ok(pieces
            .into_iter()
            .map(|(w, p)| (w, self.from_basis(&p)))
            .collect())
    }

    /// Sum of the components of `M` whose weight satisfies `keep`.
    pub fn filtered_component(&self, m: &Mat<T>, keep: impl Fn(i64) -> bool) -> Mat<T> {
        let mut local = self.to_basis(m);
        let n = self.n();
        for r in 0..n {
            for c in 0..n {
                if !keep(self.weights[r] - self.weights[c]) {
                    local[(r, c)] = local.zero_scalar();
                }
            }
        }
        self.from_basis(&local)
    }

    pub fn component(&self, m: &Mat<T>, weight: i64) -> Mat<T> {
        self.filtered_component(m, |w| w == weight)
    }

    /// Weights of `M`'s nonzero components.
    pub fn support(&self, m: &Mat<T>) -> Vec<i64> {
        let local = self.to_basis(m);
        let n = self.n();
        let mut out: Vec<i64> = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|&(r, c)| !local[(r, c)].is_zero())
            .map(|(r, c)| self.weights[r] - self.weights[c])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Basis of `g(γ; i)`: the matrices `B E_{rc} B⁻¹` with `w_r − w_c = i`.
    pub fn graded_piece_basis(&self, weight: i64) -> Vec<Mat<T>> {
        self.piece_basis_where(|w| w == weight)
    }

    pub fn piece_basis_where(&self, keep: impl Fn(i64) -> bool) -> Vec<Mat<T>> {
        let n = self.n();
        let mut out = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if keep(self.weights[r] - self.weights[c]) {
                    out.push(self.from_basis(&Mat::unit(self.domain(), n, r, c)));
                }
            }
        }
        out
    }

    /// `i ↦ dim g(γ; i)` over all nonzero pieces.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut dims = BTreeMap::new();
        for &a in &self.weights {
            for &b in &self.weights {
                *dims.entry(a - b).or_insert(0) += 1;
            }
        }
        dims
    }

    pub fn max_ad_weight(&self) -> i64 {
        self.graded_dims().keys().copied().max().unwrap_or(0)
    }

    /// Basis columns of weight `w`.
    pub fn weight_space(&self, w: i64) -> Vec<Vec<T>> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == w)
            .map(|(i, _)| self.basis.col(i))
            .collect()
    }

    pub fn distinct_weights(&self) -> Vec<i64> {
        let mut w = self.weights.clone();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w.dedup();
        w
    }

    /// `g·γ·g⁻¹`, recorded with basis `g·B`.
    pub fn conjugate(&self, g: &Mat<T>) -> Result<Self> {
        Cocharacter::new(g * &self.basis, self.weights.clone())
    }

    pub fn same_grading(&self, other: &Self) -> bool {
        if self.n() != other.n() || self.domain() != other.domain() {
            return false;
        }
        let mut ws = self.distinct_weights();
        ws.extend(other.distinct_weights());
        ws.sort_unstable();
        ws.dedup();
        ws.iter().all(|&w| {
            same_span(
                self.domain(),
                self.n(),
                &self.weight_space(w),
                &other.weight_space(w),
            )
        })
    }

    /// Whether the images of the two cocharacters commute, i.e. every weight
    /// space of `self` splits along the weight spaces of `other`.
    pub fn commutes_with(&self, other: &Self) -> bool {
        let n = self.n();
        let dom = self.domain();
        self.distinct_weights().into_iter().all(|a| {
            let va = self.weight_space(a);
            let total: usize = other
                .distinct_weights()
                .into_iter()
                .map(|b| {
                    let vb = other.weight_space(b);
                    let both: Vec<Vec<T>> = va.iter().chain(vb.iter()).cloned().collect();
                    va.len() + vb.len() - span_dim(dom, n, &both)
                })
                .sum();
            total == va.len()
        })
    }

    pub fn parabolic(&self) -> ParabolicData<T> {
        ParabolicData {
            gamma: self.clone(),
        }
    }

    /// `lim_{t→0} γ(t) g γ(t)⁻¹`: the weight-0 component of `g ∈ P(γ)`.
    pub fn levi_limit(&self, g: &Mat<T>) -> Result<Mat<T>> {
        self.check_shape(g)?;
        if !self.parabolic().contains(g) {
            return Err(Error::Precondition(
                "element is not in the parabolic P(γ): it has negative-weight components".into(),
            ));
        }
        Ok(self.component(g, 0))
    }

    pub fn distinguished_check(&self, ambient: &AmbientGroup) -> DistinguishedReport {
        let n = self.n();
        let dims = self.graded_dims();
        let levi_dim = dims.get(&0).copied().unwrap_or(0);
        let positive = self.piece_basis_where(|w| w > 0);
        let brackets: Vec<Vec<T>> = positive
            .iter()
            .enumerate()
            .flat_map(|(i, a)| positive[i + 1..].iter().map(move |b| a.bracket(b).to_vector()))
            .collect();
        let derived = span_dim(self.domain(), n * n, &brackets);
        let (dim_p_mod_u, dim_z) = match ambient.kind {
            AmbientKind::General => (levi_dim, 1),
            AmbientKind::Special => (levi_dim - 1, 0),
        };
        let dim_u_mod_commutator = positive.len() - derived;
        DistinguishedReport {
            dim_p_mod_u,
            dim_u_mod_commutator,
            dim_z,
            is_distinguished: dim_p_mod_u == dim_u_mod_commutator + dim_z,
        }
    }
}

/// Membership tests for `P(γ)`, its Levi factor `Z(γ)` and radical `U(γ)`.
#[derive(Clone, Debug)]
pub struct ParabolicData<T: Field> {
    gamma: Cocharacter<T>,
}

impl<T: Field> ParabolicData<T> {
    pub fn cocharacter(&self) -> &Cocharacter<T> {
        &self.gamma
    }

    fn entries_where(&self, g: &Mat<T>, bad: impl Fn(i64, usize, usize, &T) -> bool) -> bool {
        let local = self.gamma.to_basis(g);
        let w = &self.gamma.weights;
        let n = w.len();
        !(0..n).any(|r| (0..n).any(|c| bad(w[r] - w[c], r, c, &local[(r, c)])))
    }

    /// All negative-weight components vanish and `g` is invertible.
    pub fn contains(&self, g: &Mat<T>) -> bool {
        g.is_invertible() && self.lie_contains(g)
    }

    /// `M ∈ Lie(P) = ⊕_{i≥0} g(γ; i)`.
    pub fn lie_contains(&self, m: &Mat<T>) -> bool {
        self.entries_where(m, |w, _, _, x| w < 0 && !x.is_zero())
    }

    /// `g ∈ Z(γ)`: only weight 0, invertible.
    pub fn in_levi(&self, g: &Mat<T>) -> bool {
        g.is_invertible() && self.entries_where(g, |w, _, _, x| w != 0 && !x.is_zero())
    }

    /// `g ∈ U(γ)`: no negative weights and weight-0 component equal to 1.
    pub fn in_radical(&self, g: &Mat<T>) -> bool {
        self.entries_where(g, |w, r, c, x| {
            (w < 0 && !x.is_zero()) || (w == 0 && *x != if r == c { T::one(&x.domain()) } else { T::zero(&x.domain()) })
        })
    }

    /// Basis of `Lie(P) = Σ_{i≥0} g(γ; i)`.
    pub fn lie_basis(&self) -> Vec<Mat<T>> {
        self.gamma.piece_basis_where(|w| w >= 0)
    }

    /// Basis of `Lie(U) = Σ_{i>0} g(γ; i)`.
    pub fn radical_lie_basis(&self) -> Vec<Mat<T>> {
        self.gamma.piece_basis_where(|w| w > 0)
    }

    /// Factor `g = l·u` with `l ∈ Z(γ)`, `u ∈ U(γ)`.
    pub fn levi_decomposition(&self, g: &Mat<T>) -> Result<(Mat<T>, Mat<T>)> {
        let l = self.gamma.levi_limit(g)?;
        let l_inv = l
            .inverse()
            .ok_or_else(|| Error::Inconsistency("Levi component is singular".into()))?;
        let u = &l_inv * g;
        Ok((l, u))
    }

    /// Sizes of the diagonal blocks of the Levi factor, in decreasing
    /// weight order.
    pub fn block_type(&self) -> Vec<usize> {
        self.gamma
            .distinct_weights()
            .iter()
            .map(|&w| self.gamma.weights.iter().filter(|&&x| x == w).count())
            .collect()
    }

    pub fn is_borel(&self) -> bool {
        self.block_type().iter().all(|&b| b == 1)
    }

    pub fn is_whole_group(&self) -> bool {
        self.block_type().len() <= 1
    }

    /// `Lie(P)` as a subspace of `gl_n` (row-major vectors).
    pub fn same_lie_algebra(&self, other: &ParabolicData<T>) -> bool {
        let a: Vec<Vec<T>> = self.lie_basis().iter().map(Mat::to_vector).collect();
        let b: Vec<Vec<T>> = other.lie_basis().iter().map(Mat::to_vector).collect();
        let n = self.gamma.n();
        same_span(self.gamma.domain(), n * n, &a, &b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmbientKind {
    General,
    Special,
}

/// `GL_n` or `SL_n`; `SL_n` requires `p ∤ n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmbientGroup {
    pub kind: AmbientKind,
    pub n: usize,
}

impl AmbientGroup {
    pub fn general(n: usize) -> Self {
        AmbientGroup {
            kind: AmbientKind::General,
            n,
        }
    }

    pub fn special(n: usize, characteristic: u32) -> Result<Self> {
        if characteristic != 0 && n % characteristic as usize == 0 {
            return Err(Error::Domain(format!(
                "SL_{n} in characteristic {characteristic} is not strongly standard (p divides n)"
            )));
        }
        Ok(AmbientGroup {
            kind: AmbientKind::Special,
            n,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DistinguishedReport {
    pub dim_p_mod_u: usize,
    pub dim_u_mod_commutator: usize,
    pub dim_z: usize,
    pub is_distinguished: bool,
}

/// Compares `C(T)` and `C(Lie T)` for the connected center `T` of the
/// standard block-diagonal Levi with the given block sizes, over `F_p`.
///
/// Both centralizers are unit groups of matrix algebras, so they agree iff
/// the algebras agree: the block-diagonal pattern on one side and the
/// commutant of the block idempotents on the other.
pub fn torus_lie_centralizer_check(blocks: &Partition, p: Prime) -> bool {
    let n = blocks.n();
    let mut block_of = Vec::with_capacity(n);
    for (b, &size) in blocks.parts().iter().enumerate() {
        block_of.extend(std::iter::repeat(b).take(size));
    }
    // C_G(T): entry (r,c) allowed iff the character e_{B(r)} − e_{B(c)} is trivial
    let group_side: Vec<Vec<Fp>> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| block_of[r] == block_of[c])
        .map(|(r, c)| Mat::<Fp>::unit(&p, n, r, c).to_vector())
        .collect();
    // C_G(Lie T): kernel of M ↦ ([E_B, M])_B over the block idempotents E_B
    let idempotents: Vec<Mat<Fp>> = (0..blocks.len())
        .map(|b| {
            let diag: Vec<Fp> = block_of
                .iter()
                .map(|&x| Fp::new((x == b) as i64, p))
                .collect();
            Mat::diagonal(&p, &diag)
        })
        .collect();
    let stacked = crate::matrix::matrix_of_linear_map(&p, n * n, n * n * idempotents.len(), |v| {
        let m = Mat::from_vector(&p, n, n, v);
        idempotents
            .iter()
            .flat_map(|e| e.bracket(&m).to_vector())
            .collect()
    });
    let lie_side = stacked.kernel_vectors();
    same_span(&p, n * n, &group_side, &lie_side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn f(q: u32) -> Prime {
        Prime::new(q).unwrap()
    }

    #[test]
    fn sl2_weights_on_e12() {
        let g = Cocharacter::<Rational>::standard(&(), vec![1, -1]);
        let e12 = Mat::unit(&(), 2, 0, 1);
        let parts = g.graded_decompose(&e12).unwrap();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![2]);
        let id = Mat::identity(&(), 2);
        assert_eq!(g.graded_decompose(&id).unwrap().keys().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn weight_two_mass() {
        let p = f(5);
        let g = Cocharacter::<Fp>::standard(&p, vec![2, 0, -2]);
        let x = &Mat::unit(&p, 3, 0, 1) + &Mat::unit(&p, 3, 1, 2);
        let parts = g.graded_decompose(&x).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[&2], x);
    }

    #[test]
    fn size_mismatch_is_domain_error() {
        let g = Cocharacter::<Rational>::standard(&(), vec![1, -1]);
        assert!(matches!(
            g.graded_decompose(&Mat::identity(&(), 3)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn parabolic_shapes() {
        let p = f(7);
        let b = Cocharacter::<Fp>::standard(&p, vec![1, 0]).parabolic();
        assert!(b.contains(&Mat::from_ints(&p, 2, 2, &[1, 3, 0, 2])));
        assert!(!b.contains(&Mat::from_ints(&p, 2, 2, &[1, 0, 1, 1])));
        let whole = Cocharacter::<Fp>::standard(&p, vec![0, 0]).parabolic();
        assert!(whole.contains(&Mat::from_ints(&p, 2, 2, &[0, 1, 1, 0])));
        assert!(whole.in_radical(&Mat::identity(&p, 2)));
        assert!(!whole.in_radical(&Mat::from_ints(&p, 2, 2, &[1, 1, 0, 1])));
        let q = Cocharacter::<Fp>::standard(&p, vec![1, 1, -1]).parabolic();
        assert_eq!(q.block_type(), vec![2, 1]);
        assert!(q.contains(&Mat::from_ints(&p, 3, 3, &[1, 2, 3, 4, 5, 6, 0, 0, 1])));
        assert!(!q.contains(&Mat::from_ints(&p, 3, 3, &[1, 0, 0, 0, 1, 0, 0, 1, 1])));
    }

    #[test]
    fn levi_limit_examples() {
        let p = f(7);
        let g = Cocharacter::<Fp>::standard(&p, vec![1, 0]);
        let x = Mat::from_ints(&p, 2, 2, &[3, 4, 0, 5]);
        assert_eq!(g.levi_limit(&x).unwrap(), Mat::from_ints(&p, 2, 2, &[3, 0, 0, 5]));
        let u = Mat::from_ints(&p, 2, 2, &[1, 5, 0, 1]);
        assert!(g.levi_limit(&u).unwrap().is_identity());
        let triv = Cocharacter::<Fp>::standard(&p, vec![0, 0]);
        let any = Mat::from_ints(&p, 2, 2, &[0, 1, 1, 0]);
        assert_eq!(triv.levi_limit(&any).unwrap(), any);
        let lower = Mat::from_ints(&p, 2, 2, &[1, 0, 1, 1]);
        assert!(matches!(g.levi_limit(&lower), Err(Error::Precondition(_))));
    }

    #[test]
    fn distinguished_examples() {
        let q = ();
        let gl3 = AmbientGroup::general(3);
        let borel = Cocharacter::<Rational>::standard(&q, vec![2, 1, 0]).distinguished_check(&gl3);
        assert_eq!((borel.dim_p_mod_u, borel.dim_u_mod_commutator, borel.dim_z), (3, 2, 1));
        assert!(borel.is_distinguished);
        let two_two = Cocharacter::<Rational>::standard(&q, vec![1, 1, -1, -1])
            .distinguished_check(&AmbientGroup::general(4));
        assert_eq!((two_two.dim_p_mod_u, two_two.dim_u_mod_commutator, two_two.dim_z), (8, 4, 1));
        assert!(!two_two.is_distinguished);
        let trivial = Cocharacter::<Rational>::standard(&q, vec![0, 0, 0]).distinguished_check(&gl3);
        assert!(!trivial.is_distinguished);
        let one = Cocharacter::<Rational>::standard(&q, vec![0]).distinguished_check(&AmbientGroup::general(1));
        assert!(one.is_distinguished);
        let sl3 = AmbientGroup::special(3, 2).unwrap();
        assert!(Cocharacter::<Rational>::standard(&q, vec![2, 0, -2]).distinguished_check(&sl3).is_distinguished);
        assert!(AmbientGroup::special(3, 3).is_err());
    }

    #[test]
    fn torus_centralizers_agree() {
        assert!(torus_lie_centralizer_check(&Partition::new(vec![2, 1]).unwrap(), f(2)));
        assert!(torus_lie_centralizer_check(&Partition::regular(4), f(3)));
        assert!(torus_lie_centralizer_check(&Partition::trivial(3), f(3)));
        for n in 1..=5 {
            for lam in Partition::all(n) {
                for q in [2, 3, 5] {
                    assert!(torus_lie_centralizer_check(&lam, f(q)), "{lam} p={q}");
                }
            }
        }
    }

    #[test]
    fn equality_ignores_basis() {
        let p = f(5);
        let a = Cocharacter::<Fp>::standard(&p, vec![1, 1, 0]);
        // swap the first two basis vectors and mix them: same grading
        let b = Cocharacter::new(Mat::from_ints(&p, 3, 3, &[1, 1, 0, 1, 2, 0, 0, 0, 1]), vec![1, 1, 0]).unwrap();
        assert_eq!(a, b);
        let c = Cocharacter::<Fp>::standard(&p, vec![1, 0, 1]);
        assert_ne!(a, c);
        assert!(a.commutes_with(&c));
        let d = Cocharacter::new(Mat::<Fp>::from_ints(&p, 3, 3, &[1, 0, 0, 1, 1, 0, 0, 0, 1]), vec![1, 0, 0]).unwrap();
        assert!(!d.commutes_with(&Cocharacter::standard(&p, vec![0, 1, 0])));
    }
}
