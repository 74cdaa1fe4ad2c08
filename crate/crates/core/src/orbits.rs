//! Nilpotent orbits of `GL_n`: representatives, associated cocharacters,
//! centralizer dimensions, the order formula and the `2p − 2` weight bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jordan::{jordan_form, nilpotent_jordan, nilpotent_partition, NilpotentJordanData};
use crate::matrix::{ad_matrix, span_dim, Mat};
use crate::partition::Partition;
use crate::scalar::{Field, Fp, Prime};
use crate::torus::{Cocharacter, ParabolicData};

/// Block-diagonal nilpotent with Jordan blocks `λ`; entries in `{0, 1}`, so
/// it is rational over every prime field and over `Q`.
pub fn rep_from_partition<T: Field>(partition: &Partition, domain: &T::Domain) -> Mat<T> {
    jordan_form(domain, partition)
}

/// Weights `d−1, d−3, …, 1−d` for each block `d`, in block order.
pub fn block_weights(partition: &Partition) -> Vec<i64> {
    partition
        .parts()
        .iter()
        .flat_map(|&d| (0..d).map(move |k| d as i64 - 1 - 2 * k as i64))
        .collect()
}

#[derive(Clone, Debug)]
pub struct AssociatedCocharacterData<T: Field> {
    pub x: Mat<T>,
    pub psi: Cocharacter<T>,
    /// Rank of a maximal torus of `C_G(X) ∩ C_G(Ψ)`: one per Jordan block.
    pub levi_torus_rank: usize,
    pub jordan: NilpotentJordanData<T>,
}

/// The cocharacter associated with a nilpotent `X`, built from a Jordan
/// basis of `X` with `sl_2`-string weights on each block.
pub fn associated_cocharacter<T: Field>(x: &Mat<T>) -> Result<AssociatedCocharacterData<T>> {
    let jordan = nilpotent_jordan(x)?;
    let psi = Cocharacter::new(jordan.basis.clone(), block_weights(&jordan.partition))?;
    let support = psi.support(x);
    if !(support.is_empty() || support == [2]) {
        return Err(Error::Inconsistency(format!(
            "X has weights {support:?} under its associated cocharacter"
        )));
    }
    Ok(AssociatedCocharacterData {
        x: x.clone(),
        levi_torus_rank: jordan.partition.len(),
        psi,
        jordan,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralizerReport {
    /// `dim c_g(X) = n² − rank(ad X)`.
    pub dim_c: usize,
    /// Every element of `c_g(X)` has only non-negative `Ψ`-weights.
    pub contained_in_p_psi: bool,
    /// `Σ (λ'_i)²`.
    pub formula_dim: usize,
}

pub fn centralizer_report<T: Field>(x: &Mat<T>) -> Result<CentralizerReport> {
    let assoc = associated_cocharacter(x)?;
    let n = x.rows();
    let kernel = ad_matrix(x).kernel_vectors();
    let parabolic = assoc.psi.parabolic();
    let contained = kernel
        .iter()
        .all(|v| parabolic.lie_contains(&Mat::from_vector(x.domain(), n, n, v)));
    Ok(CentralizerReport {
        dim_c: kernel.len(),
        contained_in_p_psi: contained,
        formula_dim: assoc.jordan.partition.centralizer_dim(),
    })
}

/// Nilpotence class of the Lie algebra spanned by `basis`: the number of
/// nonzero terms of its lower central series.
pub fn nilpotence_class<T: Field>(domain: &T::Domain, n: usize, basis: &[Mat<T>]) -> usize {
    if basis.is_empty() {
        return 0;
    }
    let mut class = 1;
    let mut term: Vec<Mat<T>> = basis.to_vec();
    loop {
        let brackets: Vec<Mat<T>> = basis
            .iter()
            .flat_map(|a| term.iter().map(move |b| a.bracket(b)))
            .filter(|m| !m.is_zero())
            .collect();
        let vectors: Vec<Vec<T>> = brackets.iter().map(Mat::to_vector).collect();
        if span_dim(domain, n * n, &vectors) == 0 {
            return class;
        }
        // keep a basis of the next term
        let m = Mat::from_columns(domain, n * n, &vectors);
        let (_, pivots) = m.rref();
        term = pivots.iter().map(|&j| brackets[j].clone()).collect();
        class += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RichardsonInfo {
    pub partition: Partition,
    /// `Y^p = 0` for the Richardson element `Y`.
    pub y_p_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderFormulaReport {
    pub partition: Partition,
    pub p: u32,
    /// Order of `u = 1 + X`, computed by repeated `p`-th powers.
    pub unip_order: u64,
    /// `u^p = 1`.
    pub order_p: bool,
    pub x_p_zero: bool,
    pub max_weight: i64,
    /// `g(Ψ; i) = 0` for all `i ≥ 2p`.
    pub weights_below_2p: bool,
    /// Nilpotence class of the radical of the instability parabolic.
    pub radical_class: usize,
    pub class_below_p: bool,
    pub distinguished: bool,
    /// For distinguished `λ`: whether the four conditions agree.
    pub conditions_agree: Option<bool>,
    pub instability_block_type: Vec<usize>,
    pub richardson: RichardsonInfo,
}

pub fn order_formula_report(partition: &Partition, p: Prime) -> Result<OrderFormulaReport> {
    let n = partition.n();
    let x: Mat<Fp> = rep_from_partition(partition, &p);
    let id = Mat::identity(&p, n);
    let u = &id + &x;
    let mut order: u64 = 1;
    let mut power = u.clone();
    while !power.is_identity() {
        power = power.pow(p.get());
        order *= p.get() as u64;
    }
    let order_p = u.pow(p.get()).is_identity();
    let x_p_zero = x.pow(p.get()).is_zero();
    let assoc = associated_cocharacter(&x)?;
    let max_weight = assoc.psi.max_ad_weight();
    let weights_below_2p = max_weight < 2 * p.get() as i64;
    let parabolic = assoc.psi.parabolic();
    let radical_class = nilpotence_class(&p, n, &parabolic.radical_lie_basis());
    let class_below_p = radical_class < p.get() as usize;
    let distinguished = partition.is_distinguished();
    let flags = [order_p, x_p_zero, weights_below_2p, class_below_p];
    let conditions_agree = distinguished.then(|| flags.iter().all(|&f| f == flags[0]));
    let y = richardson_element(&parabolic, 0)?;
    let richardson = RichardsonInfo {
        partition: nilpotent_partition(&y)?,
        y_p_zero: y.pow(p.get()).is_zero(),
    };
    Ok(OrderFormulaReport {
        partition: partition.clone(),
        p: p.get(),
        unip_order: order,
        order_p,
        x_p_zero,
        max_weight,
        weights_below_2p,
        radical_class,
        class_below_p,
        distinguished,
        conditions_agree,
        instability_block_type: parabolic.block_type(),
        richardson,
    })
}

/// Every nonzero `g(Ψ; i)` has `|i| ≤ 2p − 2`, for `Ψ` associated with the
/// representative of `λ`. Requires `λ₁ ≤ p`.
pub fn weight_bound_check(partition: &Partition, p: Prime) -> Result<bool> {
    if partition.largest() > p.get() as usize {
        return Err(Error::Precondition(format!(
            "largest part {} exceeds p = {p}: X^[p] != 0 and no bound is claimed",
            partition.largest()
        )));
    }
    let x: Mat<Fp> = rep_from_partition(partition, &p);
    let assoc = associated_cocharacter(&x)?;
    let bound = 2 * p.get() as i64 - 2;
    Ok(assoc.psi.graded_dims().keys().all(|&i| i.abs() <= bound))
}

/// Whether `ψ` is associated with `Y`: `Y ∈ g(ψ;2)` and
/// `ad(Y): g(ψ;0) → g(ψ;2)` is surjective.
pub fn is_associated<T: Field>(psi: &Cocharacter<T>, y: &Mat<T>) -> bool {
    if y.rows() != psi.n() || !y.is_nilpotent() {
        return false;
    }
    let support = psi.support(y);
    if !(support.is_empty() || support == [2]) {
        return false;
    }
    let target_dim = psi.graded_dims().get(&2).copied().unwrap_or(0);
    let images: Vec<Vec<T>> = psi
        .graded_piece_basis(0)
        .iter()
        .map(|m| y.bracket(m).to_vector())
        .collect();
    let n = psi.n();
    span_dim(psi.domain(), n * n, &images) == target_dim
}

/// `P(Ψ)` for the cocharacter associated with `X`.
pub fn instability_parabolic<T: Field>(x: &Mat<T>) -> Result<ParabolicData<T>> {
    Ok(associated_cocharacter(x)?.psi.parabolic())
}

/// An element of `Lie(U)` whose centralizer in `gl_n` has the dimension of
/// the Levi factor, i.e. a representative of the dense orbit.
///
/// The first candidate links consecutive weight levels by identity-like maps;
/// if that is not dense a seeded random search over `Lie(U)` follows.
pub fn richardson_element(parabolic: &ParabolicData<Fp>, seed: u64) -> Result<Mat<Fp>> {
    let gamma = parabolic.cocharacter();
    let n = gamma.n();
    let p = *gamma.domain();
    let levi_dim = gamma.graded_dims().get(&0).copied().unwrap_or(0);
    let is_dense = |y: &Mat<Fp>| ad_matrix(y).nullity() == levi_dim;

    let levels: Vec<Vec<usize>> = gamma
        .distinct_weights()
        .iter()
        .map(|&w| (0..n).filter(|&i| gamma.weights()[i] == w).collect())
        .collect();
    let mut local = Mat::<Fp>::zeros(&p, n, n);
    for pair in levels.windows(2) {
        for (&r, &c) in pair[0].iter().zip(&pair[1]) {
            local[(r, c)] = Fp::new(1, p);
        }
    }
    let candidate = gamma.from_basis(&local);
    if is_dense(&candidate) {
        return Ok(candidate);
    }
    let basis = parabolic.radical_lie_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let mut y = Mat::zeros(&p, n, n);
        for b in &basis {
            let c = Fp::new(rng.gen_range(0..p.get()) as i64, p);
            y = &y + &b.scale(&c);
        }
        if is_dense(&y) {
            return Ok(y);
        }
    }
    Err(Error::Inconsistency(
        "no Richardson element found in the unipotent radical".into(),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRow {
    pub partition: Partition,
    pub dim_c: usize,
    pub psi_weights: Vec<i64>,
    pub max_weight: i64,
    pub unip_order: u64,
    pub x_p_zero: bool,
    pub radical_class: usize,
    pub distinguished: bool,
    pub instability_block_type: Vec<usize>,
}

/// One row per partition of `n`, over `F_p`.
pub fn orbit_table(n: usize, p: Prime) -> Result<Vec<OrbitRow>> {
    if n > 12 {
        return Err(Error::Precondition(format!("orbit table limited to n <= 12, got {n}")));
    }
    Partition::all(n)
        .into_iter()
        .map(|lam| {
            let x: Mat<Fp> = rep_from_partition(&lam, &p);
            let c = centralizer_report(&x)?;
            let o = order_formula_report(&lam, p)?;
            Ok(OrbitRow {
                dim_c: c.dim_c,
                psi_weights: block_weights(&lam),
                max_weight: o.max_weight,
                unip_order: o.unip_order,
                x_p_zero: o.x_p_zero,
                radical_class: o.radical_class,
                distinguished: lam.is_distinguished(),
                instability_block_type: o.instability_block_type,
                partition: lam,
            })
        })
        .collect()
}
