//! `SL_2` elements, symmetric-power representations, and optimal
//! `SL_2`-homomorphisms into `GL_n`: construction, verification, conjugacy,
//! centralizers, Levi containment, deformation and complete reducibility.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::enumerate::{all_subspaces, enumerate_group, linear_combinations};
use crate::error::{Error, Result};
use crate::jordan::nilpotent_jordan;
use crate::matrix::{ad_matrix, Mat, Span};
use crate::orbits::{associated_cocharacter, is_associated};
use crate::partition::Partition;
use crate::scalar::{Field, Fp, Prime};
use crate::springer::{eps_exp, AdditiveHom};
use crate::torus::Cocharacter;

/// A 2×2 matrix of determinant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sl2Element<T: Field>(Mat<T>);

impl<T: Field> Sl2Element<T> {
    pub fn new(m: Mat<T>) -> Result<Self> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::Domain("SL_2 elements are 2x2".into()));
        }
        if !m.det().is_one() {
            return Err(Error::Invariant(format!("determinant {} != 1", m.det())));
        }
        Ok(Sl2Element(m))
    }

    fn from_entries(d: &T::Domain, a: T, b: T, c: T, e: T) -> Self {
        Sl2Element(Mat::from_rows(d, vec![vec![a, b], vec![c, e]]).expect("2x2"))
    }

    /// `x₁(t) = [[1, t], [0, 1]]`.
    pub fn x1(d: &T::Domain, t: T) -> Self {
        Self::from_entries(d, T::one(d), t, T::zero(d), T::one(d))
    }

    /// `y₁(t) = [[1, 0], [t, 1]]`.
    pub fn y1(d: &T::Domain, t: T) -> Self {
        Self::from_entries(d, T::one(d), T::zero(d), t, T::one(d))
    }

    /// `diag(t, t⁻¹)`.
    pub fn torus(d: &T::Domain, t: T) -> Result<Self> {
        let inv = t
            .inverse()
            .ok_or_else(|| Error::Domain("torus(0) is not invertible".into()))?;
        Ok(Self::from_entries(d, t, T::zero(d), T::zero(d), inv))
    }

    pub fn identity(d: &T::Domain) -> Self {
        Sl2Element(Mat::identity(d, 2))
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.0
    }

    pub fn domain(&self) -> &T::Domain {
        self.0.domain()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Sl2Element(&self.0 * &other.0)
    }

    /// A word `x₁(a)·y₁(b)·torus(c)·x₁(e)` with letters drawn from
    /// [`sample_scalars`].
    pub fn random_word(d: &T::Domain, rng: &mut ChaCha8Rng) -> Self {
        let s = sample_scalars::<T>(d);
        let nonzero: Vec<T> = s.iter().filter(|t| !t.is_zero()).cloned().collect();
        let pick = |rng: &mut ChaCha8Rng, v: &[T]| v[rng.gen_range(0..v.len())].clone();
        let a = pick(rng, &s);
        let b = pick(rng, &s);
        let c = pick(rng, &nonzero);
        let e = pick(rng, &s);
        Self::x1(d, a)
            .mul(&Self::y1(d, b))
            .mul(&Self::torus(d, c).expect("nonzero"))
            .mul(&Self::x1(d, e))
    }
}

impl Sl2Element<Fp> {
    /// Uniform element of `SL_2(F_p)`.
    pub fn random(p: Prime, rng: &mut ChaCha8Rng) -> Self {
        loop {
            let mut e = [Fp::new(0, p); 4];
            for x in &mut e {
                *x = Fp::new(rng.gen_range(0..p.get() as i64), p);
            }
            let det = e[0] * e[3] - e[1] * e[2];
            if let Some(inv) = det.inverse() {
                return Self::from_entries(&p, e[0] * inv, e[1] * inv, e[2], e[3]);
            }
        }
    }
}

/// Every element of `F_p`; over `Q` the fixed set `{0, 1, −1, 2, 1/2, 3}`.
pub fn sample_scalars<T: Field>(d: &T::Domain) -> Vec<T> {
    let p = T::characteristic(d);
    if p > 0 {
        (0..p as i64).map(|i| T::from_i64(d, i)).collect()
    } else {
        let half = T::from_i64(d, 2).inverse().expect("char 0");
        vec![
            T::zero(d),
            T::one(d),
            T::from_i64(d, -1),
            T::from_i64(d, 2),
            half,
            T::from_i64(d, 3),
        ]
    }
}

/// A generator of `F_p^*`, or `2` over `Q`.
pub fn torus_generator<T: Field>(d: &T::Domain) -> T {
    let p = T::characteristic(d) as i64;
    if p == 0 {
        return T::from_i64(d, 2);
    }
    (1..p)
        .map(|i| T::from_i64(d, i))
        .find(|t| (1..p - 1).all(|k| !t.pow(k as u64).is_one()))
        .expect("F_p^* is cyclic")
}

fn random_scalar<T: Field>(d: &T::Domain, rng: &mut ChaCha8Rng) -> T {
    let p = T::characteristic(d) as i64;
    if p > 0 {
        T::from_i64(d, rng.gen_range(0..p))
    } else {
        T::from_i64(d, rng.gen_range(-4..=4))
    }
}

fn inv_factorial<T: Field>(d: &T::Domain, k: usize) -> Option<T> {
    (1..=k as i64)
        .fold(T::one(d), |acc, j| acc * T::from_i64(d, j))
        .inverse()
}

/// `g` acting on degree-`m` forms in the monomial basis `x^{m−i} y^i`,
/// where `g·x = ax + cy` and `g·y = bx + dy`.
pub fn sym_power_monomial<T: Field>(m: usize, g: &Sl2Element<T>) -> Mat<T> {
    let d = g.domain().clone();
    let e = g.matrix();
    let (a, b, c, dd) = (e[(0, 0)].clone(), e[(0, 1)].clone(), e[(1, 0)].clone(), e[(1, 1)].clone());
    let mut out = Mat::zeros(&d, m + 1, m + 1);
    for i in 0..=m {
        // (a + c·y)^{m−i} (b + d·y)^i as a polynomial in y
        let mut poly = vec![T::one(&d)];
        for _ in 0..m - i {
            poly = linear_times(&poly, &a, &c);
        }
        for _ in 0..i {
            poly = linear_times(&poly, &b, &dd);
        }
        for (k, coef) in poly.into_iter().enumerate() {
            out[(k, i)] = coef;
        }
    }
    out
}

fn linear_times<T: Field>(poly: &[T], c0: &T, c1: &T) -> Vec<T> {
    let d = c0.domain();
    let mut out = vec![T::zero(&d); poly.len() + 1];
    for (k, x) in poly.iter().enumerate() {
        out[k] = out[k].clone() + x.clone() * c0.clone();
        out[k + 1] = out[k + 1].clone() + x.clone() * c1.clone();
    }
    out
}

fn check_degree<T: Field>(d: &T::Domain, m: usize) -> Result<()> {
    let p = T::characteristic(d) as usize;
    if p > 0 && m >= p {
        return Err(Error::Precondition(format!(
            "symmetric power of degree {m} needs m < p = {p}"
        )));
    }
    Ok(())
}

/// `g` on degree-`m` forms in the divided-power basis `x^{m−i} y^i / i!`,
/// in which `x₁(t)` acts as `exp(t·J_{m+1})`.
pub fn sym_power_rep<T: Field>(m: usize, g: &Sl2Element<T>) -> Result<Mat<T>> {
    let d = g.domain().clone();
    check_degree::<T>(&d, m)?;
    let mono = sym_power_monomial(m, g);
    let mut out = Mat::zeros(&d, m + 1, m + 1);
    for k in 0..=m {
        let kf = inv_factorial::<T>(&d, k).expect("k < p").inverse().expect("nonzero");
        for i in 0..=m {
            let scale = kf.clone() * inv_factorial::<T>(&d, i).expect("i < p");
            out[(k, i)] = mono[(k, i)].clone() * scale;
        }
    }
    Ok(out)
}

/// Images of `X₁`, `H₁`, `Y₁` on `Sym^m` in the divided-power basis.
pub fn sym_power_differentials<T: Field>(d: &T::Domain, m: usize) -> Sl2Triple<T> {
    let n = m + 1;
    let mut x = Mat::zeros(d, n, n);
    let mut h = Mat::zeros(d, n, n);
    let mut y = Mat::zeros(d, n, n);
    for i in 0..n {
        h[(i, i)] = T::from_i64(d, m as i64 - 2 * i as i64);
        if i + 1 < n {
            x[(i, i + 1)] = T::one(d);
            y[(i + 1, i)] = T::from_i64(d, ((m - i) * (i + 1)) as i64);
        }
    }
    Sl2Triple { x, h, y }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple<T: Field> {
    pub x: Mat<T>,
    pub h: Mat<T>,
    pub y: Mat<T>,
}

impl<T: Field> Sl2Triple<T> {
    /// `[X,Y] = H`, `[H,X] = 2X`, `[H,Y] = −2Y`.
    pub fn relations_hold(&self) -> bool {
        let two = self.x.scalar(2);
        self.x.bracket(&self.y) == self.h
            && self.h.bracket(&self.x) == self.x.scale(&two)
            && self.h.bracket(&self.y) == self.y.scale(&-two)
    }
}

/// Common interface of homomorphisms `SL_2 → GL_n`.
pub trait Sl2Action<T: Field> {
    fn domain(&self) -> &T::Domain;
    fn n(&self) -> usize;
    fn eval(&self, g: &Sl2Element<T>) -> Mat<T>;
    fn d_hom(&self) -> Sl2Triple<T>;
    /// The restriction to the diagonal torus.
    fn torus_cocharacter(&self) -> Cocharacter<T>;
    /// The nilpotent element the homomorphism is claimed to be optimal for.
    fn target(&self) -> &Mat<T>;
}

pub fn eval_hom<T: Field>(phi: &impl Sl2Action<T>, g: &Sl2Element<T>) -> Mat<T> {
    phi.eval(g)
}

pub fn d_hom<T: Field>(phi: &impl Sl2Action<T>) -> Sl2Triple<T> {
    phi.d_hom()
}

/// `g ↦ B·(⊕ Sym^{mᵢ}(g))·B⁻¹` with a claimed target nilpotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Hom<T: Field> {
    degrees: Vec<usize>,
    basis: Mat<T>,
    basis_inv: Mat<T>,
    target: Mat<T>,
}

impl<T: Field> Sl2Hom<T> {
    pub fn from_blocks(degrees: Vec<usize>, basis: Mat<T>, target: Mat<T>) -> Result<Self> {
        let n: usize = degrees.iter().map(|m| m + 1).sum();
        if basis.rows() != n || basis.cols() != n || target.rows() != n || target.cols() != n {
            return Err(Error::Domain(format!(
                "blocks of total size {n} do not match a {}x{} basis",
                basis.rows(),
                basis.cols()
            )));
        }
        for &m in &degrees {
            check_degree::<T>(basis.domain(), m)?;
        }
        let basis_inv = basis
            .inverse()
            .ok_or_else(|| Error::Domain("block basis is singular".into()))?;
        Ok(Sl2Hom {
            degrees,
            basis,
            basis_inv,
            target,
        })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn basis(&self) -> &Mat<T> {
        &self.basis
    }

    /// `u·φ·u⁻¹`, with target `uXu⁻¹`.
    pub fn conjugate(&self, u: &Mat<T>) -> Result<Self> {
        let u_inv = u
            .inverse()
            .ok_or_else(|| Error::Domain("conjugating matrix is singular".into()))?;
        Self::from_blocks(
            self.degrees.clone(),
            u * &self.basis,
            self.target.conjugate_by(u, &u_inv),
        )
    }

    /// Coordinate ranges of the blocks in the block basis.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.degrees
            .iter()
            .map(|&m| {
                let r = start..start + m + 1;
                start += m + 1;
                r
            })
            .collect()
    }

    fn from_block(&self, m: &Mat<T>) -> Mat<T> {
        &(&self.basis * m) * &self.basis_inv
    }
}

impl<T: Field> Sl2Action<T> for Sl2Hom<T> {
    fn domain(&self) -> &T::Domain {
        self.basis.domain()
    }

    fn n(&self) -> usize {
        self.basis.rows()
    }

    fn eval(&self, g: &Sl2Element<T>) -> Mat<T> {
        let blocks: Vec<Mat<T>> = self
            .degrees
            .iter()
            .map(|&m| sym_power_rep(m, g).expect("degrees checked"))
            .collect();
        self.from_block(&Mat::direct_sum(self.domain(), &blocks))
    }

    fn d_hom(&self) -> Sl2Triple<T> {
        let d = self.domain();
        let triples: Vec<Sl2Triple<T>> = self
            .degrees
            .iter()
            .map(|&m| sym_power_differentials(d, m))
            .collect();
        let sum = |f: fn(&Sl2Triple<T>) -> &Mat<T>| {
            let blocks: Vec<Mat<T>> = triples.iter().map(|t| f(t).clone()).collect();
            self.from_block(&Mat::direct_sum(d, &blocks))
        };
        Sl2Triple {
            x: sum(|t| &t.x),
            h: sum(|t| &t.h),
            y: sum(|t| &t.y),
        }
    }

    fn torus_cocharacter(&self) -> Cocharacter<T> {
        let weights = self
            .degrees
            .iter()
            .flat_map(|&m| (0..=m).map(move |i| m as i64 - 2 * i as i64))
            .collect();
        Cocharacter::new(self.basis.clone(), weights).expect("basis invertible")
    }

    fn target(&self) -> &Mat<T> {
        &self.target
    }
}

/// A homomorphism built by [`build_optimal`]; its optimality was verified
/// at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalSl2Hom<T: Field> {
    hom: Sl2Hom<T>,
    partition: Partition,
}

impl<T: Field> OptimalSl2Hom<T> {
    pub fn hom(&self) -> &Sl2Hom<T> {
        &self.hom
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn x(&self) -> &Mat<T> {
        &self.hom.target
    }

    pub fn psi(&self) -> Cocharacter<T> {
        self.hom.torus_cocharacter()
    }

    /// `u·φ·u⁻¹` for `u` centralizing `X`, re-verified.
    pub fn twist(&self, u: &Mat<T>) -> Result<Self> {
        if !u.commutes_with(self.x()) {
            return Err(Error::Precondition("twist must centralize X".into()));
        }
        let hom = self.hom.conjugate(u)?;
        verify_construction(&hom)?;
        Ok(OptimalSl2Hom {
            hom,
            partition: self.partition.clone(),
        })
    }
}

impl<T: Field> Sl2Action<T> for OptimalSl2Hom<T> {
    fn domain(&self) -> &T::Domain {
        self.hom.domain()
    }
    fn n(&self) -> usize {
        self.hom.n()
    }
    fn eval(&self, g: &Sl2Element<T>) -> Mat<T> {
        self.hom.eval(g)
    }
    fn d_hom(&self) -> Sl2Triple<T> {
        self.hom.d_hom()
    }
    fn torus_cocharacter(&self) -> Cocharacter<T> {
        self.hom.torus_cocharacter()
    }
    fn target(&self) -> &Mat<T> {
        self.hom.target()
    }
}

/// Whether `φ(g)φ(h) = φ(gh)` on `samples` seeded word pairs.
pub fn multiplicative_on_samples<T: Field>(phi: &impl Sl2Action<T>, samples: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = phi.domain().clone();
    (0..samples).all(|_| {
        let g = Sl2Element::random_word(&d, &mut rng);
        let h = Sl2Element::random_word(&d, &mut rng);
        &phi.eval(&g) * &phi.eval(&h) == phi.eval(&g.mul(&h))
    })
}

fn eps_compatible<T: Field>(phi: &impl Sl2Action<T>) -> bool {
    let d = phi.domain().clone();
    let x = phi.target();
    sample_scalars::<T>(&d).into_iter().all(|t| {
        eps_exp(&x.scale(&t)).is_ok_and(|e| e == phi.eval(&Sl2Element::x1(&d, t.clone())))
    })
}

fn verify_construction<T: Field>(hom: &Sl2Hom<T>) -> Result<()> {
    let report = verify_optimal(hom);
    if !report.all() {
        return Err(Error::Invariant(format!("constructed homomorphism fails verification: {report:?}")));
    }
    if !multiplicative_on_samples(hom, 4, 0) {
        return Err(Error::Invariant("constructed map is not multiplicative".into()));
    }
    Ok(())
}

/// The optimal homomorphism for a nilpotent `X` with `X^p = 0`.
pub fn build_optimal<T: Field>(x: &Mat<T>) -> Result<OptimalSl2Hom<T>> {
    let p = x.characteristic();
    if p > 0 && x.is_square() && !x.pow(p).is_zero() {
        return Err(Error::Precondition(format!(
            "X^{p} != 0: a Jordan block exceeds p, so the unipotent x1(1) image would not have order p"
        )));
    }
    let jordan = nilpotent_jordan(x)?;
    let degrees = jordan.partition.parts().iter().map(|d| d - 1).collect();
    let hom = Sl2Hom::from_blocks(degrees, jordan.basis.clone(), x.clone())?;
    let psi = associated_cocharacter(x)?.psi;
    if !hom.torus_cocharacter().same_grading(&psi) {
        return Err(Error::Invariant("torus restriction differs from the associated cocharacter".into()));
    }
    verify_construction(&hom)?;
    Ok(OptimalSl2Hom {
        hom,
        partition: jordan.partition,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalityReport {
    pub differential_matches: bool,
    pub associated: bool,
    pub weights_bounded: bool,
    pub max_ad_weight: i64,
    pub eps_compatible: bool,
}

impl OptimalityReport {
    pub fn all(&self) -> bool {
        self.differential_matches && self.associated && self.weights_bounded && self.eps_compatible
    }
}

pub fn verify_optimal<T: Field>(phi: &impl Sl2Action<T>) -> OptimalityReport {
    let x = phi.target();
    let psi = phi.torus_cocharacter();
    let p = x.characteristic() as i64;
    let max_ad_weight = psi.max_ad_weight();
    OptimalityReport {
        differential_matches: phi.d_hom().x == *x,
        associated: is_associated(&psi, x),
        weights_bounded: p == 0 || max_ad_weight <= 2 * p - 2,
        max_ad_weight,
        eps_compatible: eps_compatible(phi),
    }
}

fn same_target<T: Field>(a: &OptimalSl2Hom<T>, b: &OptimalSl2Hom<T>) -> Result<()> {
    if a.x() != b.x() {
        return Err(Error::Precondition("the homomorphisms are optimal for different X".into()));
    }
    Ok(())
}

/// Basis of `Lie(R) = c(X) ∩ g(Ψ; >0)`, where `R` is the unipotent radical
/// of `C_G(X)` relative to `Ψ`.
pub fn centralizer_radical_basis<T: Field>(x: &Mat<T>, psi: &Cocharacter<T>) -> Vec<Mat<T>> {
    let n = x.rows();
    let d = x.domain().clone();
    let positive = psi.piece_basis_where(|w| w > 0);
    if positive.is_empty() {
        return Vec::new();
    }
    let images: Vec<Vec<T>> = positive.iter().map(|m| x.bracket(m).to_vector()).collect();
    let system = Mat::from_columns(&d, n * n, &images);
    system
        .kernel_vectors()
        .into_iter()
        .map(|c| {
            c.iter()
                .zip(&positive)
                .filter(|(a, _)| !a.is_zero())
                .fold(Mat::zeros(&d, n, n), |acc, (a, m)| &acc + &m.scale(a))
        })
        .collect()
}

/// A seeded random element `1 + r` of the radical `R`.
pub fn random_radical_element<T: Field>(phi: &OptimalSl2Hom<T>, rng: &mut ChaCha8Rng) -> Mat<T> {
    let d = phi.domain().clone();
    let n = phi.n();
    centralizer_radical_basis(phi.x(), &phi.psi())
        .iter()
        .fold(Mat::identity(&d, n), |acc, m| &acc + &m.scale(&random_scalar(&d, rng)))
}

fn conjugates<T: Field>(x: &Mat<T>, phi1: &OptimalSl2Hom<T>, phi2: &OptimalSl2Hom<T>) -> bool {
    let Some(x_inv) = x.inverse() else {
        return false;
    };
    let d = phi1.domain().clone();
    let gens = [
        Sl2Element::x1(&d, T::one(&d)),
        Sl2Element::y1(&d, T::one(&d)),
        Sl2Element::torus(&d, torus_generator(&d)).expect("nonzero"),
    ];
    gens.iter()
        .all(|g| phi1.eval(g).conjugate_by(x, &x_inv) == phi2.eval(g))
        && phi1
            .psi()
            .conjugate(x)
            .is_ok_and(|c| c.same_grading(&phi2.psi()))
}

/// The unique `x` in the unipotent radical of `C_G(X)` with `x·φ₁·x⁻¹ = φ₂`.
///
/// Solves the linear transporter system, picks an invertible solution `M`
/// and removes its weight-0 part `c` on the right: `x = M·c⁻¹`.
pub fn conjugate_optimal<T: Field>(
    phi1: &OptimalSl2Hom<T>,
    phi2: &OptimalSl2Hom<T>,
    seed: u64,
) -> Result<Mat<T>> {
    same_target(phi1, phi2)?;
    let n = phi1.n();
    let d = phi1.domain().clone();
    let x = phi1.x();
    let psi1 = phi1.psi();
    let psi2 = phi2.psi();

    let mut rows: Vec<Vec<T>> = (0..n * n).map(|i| ad_matrix(x).row(i).to_vec()).collect();
    let (b1, w1) = (psi1.basis(), psi1.weights());
    let (b2inv, w2) = (psi2.basis_inv(), psi2.weights());
    for c in 0..n {
        for r in 0..n {
            if w2[r] == w1[c] {
                continue;
            }
            // (B₂⁻¹ M B₁)_{r,c} = Σ B₂⁻¹[r,i] M[i,j] B₁[j,c] = 0
            let mut row = vec![T::zero(&d); n * n];
            for i in 0..n {
                for j in 0..n {
                    row[i * n + j] = b2inv[(r, i)].clone() * b1[(j, c)].clone();
                }
            }
            rows.push(row);
        }
    }
    let kernel: Vec<Mat<T>> = Mat::from_rows(&d, rows)?
        .kernel_vectors()
        .into_iter()
        .map(|v| Mat::from_vector(&d, n, n, &v))
        .collect();

    let mut candidates: Vec<Mat<T>> = Vec::new();
    candidates.push(kernel.iter().fold(Mat::zeros(&d, n, n), |a, m| &a + m));
    candidates.extend(kernel.iter().cloned());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let transporter = candidates
        .into_iter()
        .chain((0..2000).map(|_| {
            kernel
                .iter()
                .fold(Mat::zeros(&d, n, n), |a, m| &a + &m.scale(&random_scalar(&d, &mut rng)))
        }))
        .find(Mat::is_invertible)
        .ok_or_else(|| Error::Inconsistency("no invertible transporter found".into()))?;

    let levi = psi1.levi_limit(&transporter)?;
    let levi_inv = levi
        .inverse()
        .ok_or_else(|| Error::Inconsistency("Levi part of the transporter is singular".into()))?;
    let conj = &transporter * &levi_inv;

    let parabolic = psi1.parabolic();
    let ok = conj.commutes_with(x)
        && conj.is_unipotent()
        && parabolic.in_radical(&conj)
        && conjugates(&conj, phi1, phi2);
    if !ok {
        return Err(Error::Inconsistency(
            "stripped transporter does not conjugate the homomorphisms inside the radical".into(),
        ));
    }
    Ok(conj)
}

/// Number of `x ∈ R` with `x·φ₁·x⁻¹ = φ₂`, by enumerating `R = 1 + Lie(R)`.
pub fn conjugator_count(phi1: &OptimalSl2Hom<Fp>, phi2: &OptimalSl2Hom<Fp>, budget: u64) -> Result<usize> {
    same_target(phi1, phi2)?;
    let p = *phi1.domain();
    let n = phi1.n();
    let basis = centralizer_radical_basis(phi1.x(), &phi1.psi());
    let one = Mat::identity(&p, n);
    if basis.is_empty() {
        return Ok(usize::from(conjugates(&one, phi1, phi2)));
    }
    let count = linear_combinations(p, &basis, budget)?
        .filter(|r| conjugates(&(&one + r), phi1, phi2))
        .count();
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpCentralizerReport {
    pub lie_equal: bool,
    /// `None` when the group comparison was skipped (over `Q`, `n > 4`,
    /// or over budget).
    pub group_equal: Option<bool>,
}

impl ExpCentralizerReport {
    pub fn holds(&self) -> bool {
        self.lie_equal && self.group_equal != Some(false)
    }
}

/// `c(X) = ker(Ad ε(tX) − 1)` for all nonzero sample `t`.
pub fn exp_centralizer_lie_check<T: Field>(x: &Mat<T>) -> Result<bool> {
    let d = x.domain().clone();
    let n = x.rows();
    let cx = ad_matrix(x).kernel_vectors();
    for t in sample_scalars::<T>(&d).into_iter().filter(|t| !t.is_zero()) {
        let u = eps_exp(&x.scale(&t))?;
        let cu = ad_matrix(&u).kernel_vectors();
        if !crate::matrix::same_span(&d, n * n, &cx, &cu) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn exp_centralizer_check(x: &Mat<Fp>, budget: u64) -> Result<ExpCentralizerReport> {
    let lie_equal = exp_centralizer_lie_check(x)?;
    let p = *x.domain();
    let n = x.rows();
    let group_equal = if n <= 4 {
        let basis_of = |m: &Mat<Fp>| -> Vec<Mat<Fp>> {
            ad_matrix(m)
                .kernel_vectors()
                .into_iter()
                .map(|v| Mat::from_vector(&p, n, n, &v))
                .collect()
        };
        let cx = basis_of(x);
        let mut result = Some(true);
        for t in p.elements().filter(|t| !t.is_zero()) {
            let u = eps_exp(&x.scale(&t))?;
            let cu = basis_of(&u);
            let forward = match linear_combinations(p, &cx, budget) {
                Ok(mut it) => it.all(|g| !g.is_invertible() || g.commutes_with(&u)),
                Err(_) => {
                    result = None;
                    break;
                }
            };
            let backward = match linear_combinations(p, &cu, budget) {
                Ok(mut it) => it.all(|g| !g.is_invertible() || g.commutes_with(x)),
                Err(_) => {
                    result = None;
                    break;
                }
            };
            if !(forward && backward) {
                result = Some(false);
                break;
            }
        }
        result
    } else {
        None
    };
    Ok(ExpCentralizerReport {
        lie_equal,
        group_equal,
    })
}

/// Whether the generator images commute with the block-scalar torus of the
/// centralizer Levi and have determinant 1 on each of its isotypic blocks.
pub fn levi_containment_check<T: Field>(phi: &Sl2Hom<T>) -> bool {
    let d = phi.domain().clone();
    let ranges = phi.block_ranges();
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (m, r) in phi.degrees.iter().zip(ranges) {
        match groups.iter_mut().find(|(k, _)| k == m) {
            Some((_, idx)) => idx.extend(r),
            None => groups.push((*m, r.collect())),
        }
    }
    let group_of = |i: usize| groups.iter().position(|(_, idx)| idx.contains(&i)).expect("covered");
    let gens = [
        Sl2Element::x1(&d, T::one(&d)),
        Sl2Element::y1(&d, T::one(&d)),
        Sl2Element::torus(&d, torus_generator(&d)).expect("nonzero"),
    ];
    gens.iter().all(|g| {
        let local = &(&phi.basis_inv * &phi.eval(g)) * &phi.basis;
        let n = local.rows();
        let block_diagonal = (0..n).all(|r| (0..n).all(|c| group_of(r) == group_of(c) || local[(r, c)].is_zero()));
        block_diagonal
            && groups
                .iter()
                .all(|(_, idx)| local.submatrix(idx, idx).det().is_one())
    })
}

/// `g ↦ lim_{t→0} γ(t)·φ(g)·γ(t)⁻¹`.
#[derive(Clone, Debug)]
pub struct DeformedHom<T: Field> {
    inner: Sl2Hom<T>,
    gamma: Cocharacter<T>,
    target: Mat<T>,
}

impl<T: Field> DeformedHom<T> {
    pub fn inner(&self) -> &Sl2Hom<T> {
        &self.inner
    }
    pub fn gamma(&self) -> &Cocharacter<T> {
        &self.gamma
    }
}

impl<T: Field> Sl2Action<T> for DeformedHom<T> {
    fn domain(&self) -> &T::Domain {
        self.inner.domain()
    }
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn eval(&self, g: &Sl2Element<T>) -> Mat<T> {
        self.gamma.component(&self.inner.eval(g), 0)
    }
    fn d_hom(&self) -> Sl2Triple<T> {
        let t = self.inner.d_hom();
        Sl2Triple {
            x: self.gamma.component(&t.x, 0),
            h: self.gamma.component(&t.h, 0),
            y: self.gamma.component(&t.y, 0),
        }
    }
    fn torus_cocharacter(&self) -> Cocharacter<T> {
        self.inner.torus_cocharacter()
    }
    fn target(&self) -> &Mat<T> {
        &self.target
    }
}

/// Deforms `φ` into the Levi of `P(γ)`; the result is verified optimal for
/// the weight-0 part `X₀` of `X`.
pub fn deform_to_levi<T: Field>(phi: &Sl2Hom<T>, gamma: &Cocharacter<T>) -> Result<DeformedHom<T>> {
    let d = phi.domain().clone();
    if gamma.n() != phi.n() {
        return Err(Error::Domain("cocharacter and homomorphism have different sizes".into()));
    }
    let parabolic = gamma.parabolic();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut probes: Vec<Sl2Element<T>> = Vec::new();
    for t in sample_scalars::<T>(&d) {
        probes.push(Sl2Element::x1(&d, t.clone()));
        probes.push(Sl2Element::y1(&d, t.clone()));
        if !t.is_zero() {
            probes.push(Sl2Element::torus(&d, t)?);
        }
    }
    probes.extend((0..8).map(|_| Sl2Element::random_word(&d, &mut rng)));
    if !probes.iter().all(|g| parabolic.contains(&phi.eval(g))) {
        return Err(Error::Precondition("image of φ is not contained in P(γ)".into()));
    }
    if !gamma.commutes_with(&phi.torus_cocharacter()) {
        return Err(Error::Precondition("γ does not centralize the torus image of φ".into()));
    }
    let deformed = DeformedHom {
        target: gamma.component(phi.target(), 0),
        inner: phi.clone(),
        gamma: gamma.clone(),
    };
    if !multiplicative_on_samples(&deformed, 8, 1) {
        return Err(Error::Inconsistency("deformed map is not multiplicative".into()));
    }
    let report = verify_optimal(&deformed);
    if !report.all() {
        return Err(Error::Inconsistency(format!("deformation is not optimal for X0: {report:?}")));
    }
    Ok(deformed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomCentralizerReport {
    /// Size of the centralizer of the image.
    pub image_centralizer: usize,
    /// Size of `C_G(X) ∩ C_G(Ψ)`.
    pub c_psi: usize,
    pub equal: bool,
}

/// Compares the centralizer of `φ(SL_2)` with `C_G(X) ∩ C_G(Ψ)` inside
/// `GL_n(F_p)` by enumeration.
pub fn hom_centralizer_check(phi: &OptimalSl2Hom<Fp>, budget: u64) -> Result<HomCentralizerReport> {
    let p = *phi.domain();
    let gens: Vec<Mat<Fp>> = [
        Sl2Element::x1(&p, Fp::new(1, p)),
        Sl2Element::y1(&p, Fp::new(1, p)),
        Sl2Element::torus(&p, p.primitive_root())?,
    ]
    .iter()
    .map(|g| phi.eval(g))
    .collect();
    let x = phi.x().clone();
    let levi = phi.psi().parabolic();
    let in_image_centralizer = |g: &Mat<Fp>| gens.iter().all(|h| g.commutes_with(h));
    let in_c_psi = |g: &Mat<Fp>| g.commutes_with(&x) && levi.in_levi(g);
    let both = enumerate_group(phi.n(), p, budget, |g| in_image_centralizer(g) || in_c_psi(g))?;
    let a = both.iter().filter(|g| in_image_centralizer(g)).count();
    let b = both.iter().filter(|g| in_c_psi(g)).count();
    let equal = both.iter().all(|g| in_image_centralizer(g) && in_c_psi(g));
    Ok(HomCentralizerReport {
        image_centralizer: a,
        c_psi: b,
        equal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcrReport {
    pub semisimple: bool,
    pub invariant_subspaces: usize,
    /// Rows spanning an invariant subspace without invariant complement.
    pub offending_subspace: Option<Vec<Vec<u32>>>,
}

fn rows_of(m: &Mat<Fp>) -> Vec<Vec<Fp>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn is_invariant(w: &Mat<Fp>, gens: &[Mat<Fp>]) -> bool {
    let p = *w.domain();
    let mut span = Span::new(&p, w.cols());
    for r in rows_of(w) {
        span.insert(&r);
    }
    gens.iter().all(|g| {
        rows_of(w).iter().all(|v| {
            let image = g * &Mat::column(&p, v);
            span.contains(image.entries())
        })
    })
}

/// Whether `F_p^n` is a semisimple module for the group generated by `gens`,
/// by exhaustive search for invariant complements.
pub fn gcr_check(gens: &[Mat<Fp>], n: usize, p: Prime, budget: u64) -> Result<GcrReport> {
    if gens.iter().any(|g| g.rows() != n || g.cols() != n || *g.domain() != p) {
        return Err(Error::Domain(format!("generators must be {n}x{n} over F_{p}")));
    }
    let invariant: Vec<Mat<Fp>> = all_subspaces(n, p, budget)?
        .into_iter()
        .filter(|w| is_invariant(w, gens))
        .collect();
    let offending = invariant.iter().find(|w| {
        let k = w.rows();
        !invariant.iter().any(|c| {
            c.rows() + k == n && {
                let mut all = rows_of(w);
                all.extend(rows_of(c));
                crate::matrix::span_dim(&p, n, &all) == n
            }
        })
    });
    Ok(GcrReport {
        semisimple: offending.is_none(),
        invariant_subspaces: invariant.len(),
        offending_subspace: offending.map(|w| {
            rows_of(w)
                .into_iter()
                .map(|r| r.into_iter().map(Fp::residue).collect())
                .collect()
        }),
    })
}

/// Images of `x₁(1)`, `y₁(1)` and `torus(c)` for a generator `c` of `F_p^*`.
pub fn generator_images(phi: &impl Sl2Action<Fp>) -> Vec<Mat<Fp>> {
    let p = *phi.domain();
    [
        Sl2Element::x1(&p, Fp::new(1, p)),
        Sl2Element::y1(&p, Fp::new(1, p)),
        Sl2Element::torus(&p, p.primitive_root()).expect("nonzero"),
    ]
    .iter()
    .map(|g| phi.eval(g))
    .collect()
}

/// Torus equivariance `Ψ(t)·h(s)·Ψ(t)⁻¹ = h(t²s)` as an identity of
/// algebraic maps: the `i`-th coefficient has `Ψ`-weight `2pⁱ`.
pub fn additive_hom_equivariant(h: &AdditiveHom, psi: &Cocharacter<Fp>) -> bool {
    let p = h.prime().get() as i64;
    h.coeffs().iter().enumerate().all(|(i, c)| {
        let support = psi.support(c);
        support.is_empty() || support == [2 * p.pow(i as u32)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::jordan_block;
    use crate::orbits::rep_from_partition;
    use crate::scalar::Rational;

    fn f(q: u32) -> Prime {
        Prime::new(q).unwrap()
    }

    fn part(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    #[test]
    fn sym_power_examples() {
        let p = f(5);
        let g = Sl2Element::<Fp>::random(p, &mut ChaCha8Rng::seed_from_u64(3));
        assert!(sym_power_rep(0, &g).unwrap().is_identity());
        assert_eq!(sym_power_rep(1, &g).unwrap(), *g.matrix());

        let q = ();
        let t = Rational::from_i64(&q, 3);
        let mono = sym_power_monomial(2, &Sl2Element::x1(&q, t.clone()));
        let t2 = t.clone() * t.clone();
        let expect = Mat::from_rows(
            &q,
            vec![
                vec![Rational::from_i64(&q, 1), t.clone(), t2.clone()],
                vec![Rational::from_i64(&q, 0), Rational::from_i64(&q, 1), t.clone() * Rational::from_i64(&q, 2)],
                vec![Rational::from_i64(&q, 0), Rational::from_i64(&q, 0), Rational::from_i64(&q, 1)],
            ],
        )
        .unwrap();
        assert_eq!(mono, expect);
        let divided = sym_power_rep(2, &Sl2Element::x1(&q, t.clone())).unwrap();
        assert_eq!(divided, eps_exp(&jordan_block::<Rational>(&q, 3).scale(&t)).unwrap());

        assert!(matches!(sym_power_rep(3, &Sl2Element::<Fp>::identity(&f(3))), Err(Error::Precondition(_))));
    }

    #[test]
    fn sym_power_is_multiplicative() {
        let p = f(7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in 0..7 {
            for _ in 0..10 {
                let g = Sl2Element::<Fp>::random(p, &mut rng);
                let h = Sl2Element::<Fp>::random(p, &mut rng);
                assert_eq!(
                    &sym_power_rep(m, &g).unwrap() * &sym_power_rep(m, &h).unwrap(),
                    sym_power_rep(m, &g.mul(&h)).unwrap()
                );
            }
        }
    }

    #[test]
    fn differentials_form_triples() {
        for m in 0..6 {
            assert!(sym_power_differentials::<Rational>(&(), m).relations_hold());
        }
        let t = sym_power_differentials::<Rational>(&(), 2);
        assert_eq!(t.y[(1, 0)], Rational::from_i64(&(), 2));
        assert_eq!(t.y[(2, 1)], Rational::from_i64(&(), 2));
    }

    #[test]
    fn build_examples() {
        let p = f(3);
        let e12 = Mat::<Fp>::unit(&p, 2, 0, 1);
        let phi = build_optimal(&e12).unwrap();
        let g = Sl2Element::<Fp>::random(p, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(phi.eval(&g), *g.matrix());
        let t = Fp::new(2, p);
        assert_eq!(
            phi.eval(&Sl2Element::torus(&p, t).unwrap()),
            Mat::diagonal(&p, &[t, t.inverse().unwrap()])
        );

        let j3 = jordan_block::<Fp>(&p, 3);
        let phi = build_optimal(&j3).unwrap();
        let four = Fp::new(2, p) * Fp::new(2, p);
        let tor = phi.eval(&Sl2Element::torus(&p, Fp::new(2, p)).unwrap());
        let inv4 = four.inverse().unwrap();
        assert_eq!(tor, Mat::diagonal(&p, &[four, Fp::new(1, p), inv4]));

        let p2 = f(2);
        let x = rep_from_partition::<Fp>(&part("2,1"), &p2);
        let phi = build_optimal(&x).unwrap();
        assert_eq!(phi.hom().degrees(), &[1, 0]);

        assert!(matches!(build_optimal(&jordan_block::<Fp>(&p2, 3)), Err(Error::Precondition(_))));
    }

    #[test]
    fn d_hom_relations() {
        for (s, q) in [("3", 3), ("3,2", 5), ("2,2,1", 2), ("4,1", 5)] {
            let p = f(q);
            let phi = build_optimal(&rep_from_partition::<Fp>(&part(s), &p)).unwrap();
            let t = phi.d_hom();
            assert!(t.relations_hold(), "{s} at p = {q}");
            assert_eq!(t.x, *phi.x());
        }
    }

    #[test]
    fn homomorphism_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2u32, 3, 5] {
            let p = f(q);
            for n in 1..=5 {
                for lam in Partition::all(n).into_iter().filter(|l| l.largest() <= q as usize) {
                    let phi = build_optimal(&rep_from_partition::<Fp>(&lam, &p)).unwrap();
                    for _ in 0..100 {
                        let g = Sl2Element::<Fp>::random(p, &mut rng);
                        let h = Sl2Element::<Fp>::random(p, &mut rng);
                        assert_eq!(&phi.eval(&g) * &phi.eval(&h), phi.eval(&g.mul(&h)));
                    }
                    assert!(verify_optimal(&phi).all());
                }
            }
        }
    }

    #[test]
    fn verify_rejects_hand_built() {
        let p = f(5);
        let bad = Sl2Hom::from_blocks(vec![1, 0], Mat::identity(&p, 3), jordan_block::<Fp>(&p, 3)).unwrap();
        let r = verify_optimal(&bad);
        assert!(!r.associated);
        assert!(!r.all());

        let zero = build_optimal(&Mat::<Fp>::zeros(&p, 3, 3)).unwrap();
        assert!(verify_optimal(&zero).all());
        assert!(zero.eval(&Sl2Element::random(p, &mut ChaCha8Rng::seed_from_u64(0))).is_identity());
    }

    #[test]
    fn conjugacy_examples() {
        let p = f(3);
        let x = rep_from_partition::<Fp>(&part("2,1"), &p);
        let phi = build_optimal(&x).unwrap();
        assert!(conjugate_optimal(&phi, &phi, 0).unwrap().is_identity());

        let u = &Mat::identity(&p, 3) + &Mat::unit(&p, 3, 0, 2);
        let phi2 = phi.twist(&u).unwrap();
        assert_eq!(conjugate_optimal(&phi, &phi2, 0).unwrap(), u);

        let p2 = f(2);
        let x = rep_from_partition::<Fp>(&part("2,1"), &p2);
        let phi = build_optimal(&x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = random_radical_element(&phi, &mut rng);
        let phi2 = phi.twist(&u).unwrap();
        assert_eq!(conjugator_count(&phi, &phi2, 1 << 20).unwrap(), 1);
        assert_eq!(conjugate_optimal(&phi, &phi2, 1).unwrap(), u);
    }

    #[test]
    fn conjugacy_over_q() {
        let x = rep_from_partition::<Rational>(&part("3,1"), &());
        let phi = build_optimal(&x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_radical_element(&phi, &mut rng);
        let phi2 = phi.twist(&u).unwrap();
        assert_eq!(conjugate_optimal(&phi, &phi2, 0).unwrap(), u);
    }

    #[test]
    fn exp_centralizer_examples() {
        let p = f(3);
        let r = exp_centralizer_check(&Mat::unit(&p, 2, 0, 1), 1 << 20).unwrap();
        assert_eq!(r, ExpCentralizerReport { lie_equal: true, group_equal: Some(true) });
        assert!(exp_centralizer_check(&Mat::zeros(&p, 3, 3), 1 << 20).unwrap().holds());
        let p2 = f(2);
        let x = rep_from_partition::<Fp>(&part("2,2"), &p2);
        let r = exp_centralizer_check(&x, 1 << 20).unwrap();
        assert!(r.holds());
        assert_eq!(r.group_equal, Some(true));
    }

    #[test]
    fn levi_containment_examples() {
        for (s, q) in [("4", 5), ("2,1", 3), ("2,2", 3), ("3,3,1", 3)] {
            let p = f(q);
            let phi = build_optimal(&rep_from_partition::<Fp>(&part(s), &p)).unwrap();
            assert!(levi_containment_check(phi.hom()), "{s}");
        }
    }

    #[test]
    fn deformation_examples() {
        let p = f(5);
        let x = rep_from_partition::<Fp>(&part("3,1"), &p);
        let phi = build_optimal(&x).unwrap();
        let trivial = Cocharacter::standard(&p, vec![0; 4]);
        let d = deform_to_levi(phi.hom(), &trivial).unwrap();
        let g = Sl2Element::<Fp>::random(p, &mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(d.eval(&g), phi.eval(&g));

        // GL2 block inside GL3 with γ = (1,1,0): already in the Levi
        let x = rep_from_partition::<Fp>(&part("2,1"), &p);
        let phi = build_optimal(&x).unwrap();
        let gamma = Cocharacter::standard(&p, vec![1, 1, 0]);
        let d = deform_to_levi(phi.hom(), &gamma).unwrap();
        assert_eq!(d.eval(&g), phi.eval(&g));

        // natural ⊕ natural with γ graded along (e1, e2, e3 + e1, e4)
        let x = rep_from_partition::<Fp>(&part("2,2"), &p);
        let phi = build_optimal(&x).unwrap();
        let c = &Mat::identity(&p, 4) + &Mat::unit(&p, 4, 0, 2);
        let gamma = Cocharacter::new(c, vec![1, 1, 0, 0]).unwrap();
        let d = deform_to_levi(phi.hom(), &gamma).unwrap();
        let x0 = &(&Mat::unit(&p, 4, 0, 1) + &Mat::unit(&p, 4, 2, 3)) + &Mat::unit(&p, 4, 0, 3);
        assert_eq!(*d.target(), x0);
        assert_ne!(d.eval(&Sl2Element::y1(&p, Fp::new(1, p))), phi.eval(&Sl2Element::y1(&p, Fp::new(1, p))));

        // the irreducible image for (3) lies in no proper parabolic
        let x = jordan_block::<Fp>(&p, 3);
        let phi = build_optimal(&x).unwrap();
        let gamma = Cocharacter::standard(&p, vec![1, 1, -1]);
        assert!(matches!(deform_to_levi(phi.hom(), &gamma), Err(Error::Precondition(_))));
    }

    #[test]
    fn hom_centralizer_examples() {
        let p = f(3);
        let phi = build_optimal(&Mat::unit(&p, 2, 0, 1)).unwrap();
        let r = hom_centralizer_check(&phi, 1 << 24).unwrap();
        assert_eq!((r.image_centralizer, r.c_psi, r.equal), (2, 2, true));

        let p2 = f(2);
        let phi = build_optimal(&Mat::<Fp>::zeros(&p2, 2, 2)).unwrap();
        let r = hom_centralizer_check(&phi, 1 << 24).unwrap();
        assert_eq!((r.image_centralizer, r.equal), (6, true));

        let phi = build_optimal(&rep_from_partition::<Fp>(&part("2,1"), &p)).unwrap();
        assert!(hom_centralizer_check(&phi, 1 << 24).unwrap().equal);

        let phi = build_optimal(&rep_from_partition::<Fp>(&part("2,2"), &p)).unwrap();
        assert!(matches!(hom_centralizer_check(&phi, 1 << 24), Err(Error::Resource(_))));
    }

    #[test]
    fn gcr_examples() {
        let p = f(2);
        let phi = build_optimal(&rep_from_partition::<Fp>(&part("2,1"), &p)).unwrap();
        let r = gcr_check(&generator_images(&phi), 3, p, 1 << 20).unwrap();
        assert!(r.semisimple);

        let u = &Mat::identity(&p, 3) + &jordan_block::<Fp>(&p, 3);
        let r = gcr_check(&[u], 3, p, 1 << 20).unwrap();
        assert!(!r.semisimple);
        assert_eq!(r.offending_subspace, Some(vec![vec![1, 0, 0]]));

        let r = gcr_check(&[], 3, p, 1 << 20).unwrap();
        assert!(r.semisimple);
    }

    #[test]
    fn additive_equivariance_forces_single_coefficient() {
        for q in [2u32, 3] {
            let p = f(q);
            for n in 1..=3 {
                for lam in Partition::all(n).into_iter().filter(|l| l.largest() <= q as usize) {
                    let x = rep_from_partition::<Fp>(&lam, &p);
                    let psi = associated_cocharacter(&x).unwrap().psi;
                    let units: Vec<Mat<Fp>> = (0..n * n).map(|k| Mat::unit(&p, n, k / n, k % n)).collect();
                    let all = crate::enumerate::linear_combinations(p, &units, 1 << 20).unwrap();
                    for x1 in all {
                        let Ok(h) = AdditiveHom::new(p, n, vec![x.clone(), x1.clone()]) else {
                            continue;
                        };
                        if additive_hom_equivariant(&h, &psi) {
                            assert!(x1.is_zero(), "{lam} p = {q}: {x1:?}");
                        }
                    }
                }
            }
        }
    }
}
