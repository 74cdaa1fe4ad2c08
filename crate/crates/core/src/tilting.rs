//! Characters and unipotent fixed-point dimensions of the `SL_2`-modules
//! `L(d)`, `W(d)`, `T(m)` in characteristic `p`, and the tilting
//! decomposition of modules whose weights lie in `[−(2p−2), 2p−2]`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ad_matrix, Mat};
use crate::orbits::{block_weights, rep_from_partition};
use crate::partition::Partition;
use crate::scalar::{Fp, Prime};
use crate::springer::eps_exp;

/// Weight multiplicities, symmetric under `w ↦ −w`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CharacterVector(BTreeMap<i64, u64>);

impl CharacterVector {
    pub fn new(map: BTreeMap<i64, u64>) -> Result<Self> {
        let map: BTreeMap<i64, u64> = map.into_iter().filter(|&(_, m)| m > 0).collect();
        if let Some((w, m)) = map.iter().find(|(w, m)| map.get(&-**w) != Some(m)) {
            return Err(Error::Invariant(format!(
                "character is not symmetric: m({w}) = {m}, m({}) = {}",
                -w,
                map.get(&-w).copied().unwrap_or(0)
            )));
        }
        Ok(CharacterVector(map))
    }

    pub fn from_weights(weights: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for w in weights {
            *map.entry(w).or_insert(0) += 1;
        }
        Self::new(map)
    }

    pub fn multiplicity(&self, w: i64) -> u64 {
        self.0.get(&w).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.0.iter().map(|(&w, &m)| (w, m))
    }

    fn add_scaled(&mut self, other: &CharacterVector, k: u64) {
        for (w, m) in other.iter() {
            *self.0.entry(w).or_insert(0) += k * m;
        }
    }

    /// Subtracts `k·other`; `None` if a multiplicity would go negative.
    fn checked_sub(&self, other: &CharacterVector, k: u64) -> Option<CharacterVector> {
        let mut out = self.0.clone();
        for (w, m) in other.iter() {
            let e = out.entry(w).or_insert(0);
            *e = e.checked_sub(k * m)?;
        }
        out.retain(|_, m| *m > 0);
        Some(CharacterVector(out))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleKind {
    Simple,
    Weyl,
    Tilting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Characteristic {
    P,
    Zero,
}

fn weyl_char(m: i64) -> CharacterVector {
    CharacterVector((0..=m).map(|i| (m - 2 * i, 1)).collect())
}

fn check_range(kind: ModuleKind, m: i64, p: Prime) -> Result<()> {
    let p = p.get() as i64;
    let ok = match kind {
        ModuleKind::Simple => (0..p).contains(&m),
        ModuleKind::Weyl => m >= 0,
        ModuleKind::Tilting => (p - 1..=2 * p - 2).contains(&m),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{kind:?}({m}) is outside the supported range for p = {p}")))
    }
}

pub fn char_of(kind: ModuleKind, m: i64, p: Prime) -> Result<CharacterVector> {
    check_range(kind, m, p)?;
    let pp = p.get() as i64;
    Ok(match kind {
        ModuleKind::Simple | ModuleKind::Weyl => weyl_char(m),
        ModuleKind::Tilting if m == pp - 1 => weyl_char(m),
        ModuleKind::Tilting => {
            let mut c = weyl_char(m);
            c.add_scaled(&weyl_char(2 * pp - 2 - m), 1);
            c
        }
    })
}

/// `u = x₁(1)` acting on `W(m)` in the monomial basis: entry `(k, i)` is `C(i, k)`.
fn weyl_unipotent(m: usize, p: Prime) -> Mat<Fp> {
    let mut u = Mat::zeros(&p, m + 1, m + 1);
    for i in 0..=m {
        for k in 0..=i {
            u[(k, i)] = Fp::new(binomial_mod(i, k, p), p);
        }
    }
    u
}

/// `C(n, k) mod p` by Lucas' theorem.
fn binomial_mod(mut n: usize, mut k: usize, p: Prime) -> i64 {
    let q = p.get() as usize;
    let mut acc = 1i64;
    while n > 0 || k > 0 {
        let (a, b) = (n % q, k % q);
        if b > a {
            return 0;
        }
        let mut c = 1i64;
        for j in 0..b {
            c = c * (a - j) as i64 / (j + 1) as i64;
        }
        acc = acc * (c % q as i64) % q as i64;
        n /= q;
        k /= q;
    }
    acc
}

/// Dimension of the fixed points of `x₁(1)`.
pub fn fixdim_of(kind: ModuleKind, m: i64, p: Prime, characteristic: Characteristic) -> Result<usize> {
    check_range(kind, m, p)?;
    let pp = p.get() as i64;
    let two_weyl = kind == ModuleKind::Tilting && m >= pp;
    Ok(match characteristic {
        Characteristic::Zero => 1 + usize::from(two_weyl),
        Characteristic::P => match kind {
            ModuleKind::Simple => 1,
            ModuleKind::Tilting if two_weyl => 2,
            ModuleKind::Tilting => 1,
            ModuleKind::Weyl => {
                let u = weyl_unipotent(m as usize, p);
                (&u - &Mat::identity(&p, m as usize + 1)).nullity()
            }
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleDescriptor {
    pub character: CharacterVector,
    pub fix_p: usize,
    pub fix_0: usize,
    /// Whether self-duality is known (e.g. from a trace form) rather than
    /// only suggested by the symmetric character.
    pub self_dual_known: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TiltingDecomposition {
    /// `d ↦ r(d)`, the multiplicity of `T(2p−2−d)` for `0 ≤ d < p−1`.
    pub r: BTreeMap<i64, u64>,
    /// `d ↦ v(d)`, the multiplicity of `L(d)` for `0 ≤ d ≤ p−1`.
    pub v: BTreeMap<i64, u64>,
}

impl TiltingDecomposition {
    /// `Σ 2·r(d) + Σ v(d)`.
    pub fn fixed_point_count(&self) -> u64 {
        2 * self.r.values().sum::<u64>() + self.v.values().sum::<u64>()
    }

    pub fn character(&self, p: Prime) -> CharacterVector {
        let pp = p.get() as i64;
        let mut c = CharacterVector::default();
        for (&d, &k) in &self.r {
            c.add_scaled(&char_of(ModuleKind::Tilting, 2 * pp - 2 - d, p).expect("in range"), k);
        }
        for (&d, &k) in &self.v {
            c.add_scaled(&char_of(ModuleKind::Simple, d, p).expect("in range"), k);
        }
        c
    }

    /// Summands as `(label, multiplicity)`, tilting first, highest weight first.
    pub fn summands(&self, p: Prime) -> Vec<(String, u64)> {
        let pp = p.get() as i64;
        let tilting = self.r.iter().map(|(&d, &k)| (format!("T({})", 2 * pp - 2 - d), k));
        let simple = self.v.iter().rev().map(|(&d, &k)| (format!("L({d})"), k));
        tilting.chain(simple).collect()
    }
}

impl std::fmt::Display for TiltingDecomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // p is not stored, so labels use the d-indices
        let parts: Vec<String> = self
            .r
            .iter()
            .map(|(d, k)| format!("r({d})={k}"))
            .chain(self.v.iter().map(|(d, k)| format!("v({d})={k}")))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

pub fn tilting_decompose(desc: &ModuleDescriptor, p: Prime) -> Result<TiltingDecomposition> {
    let pp = p.get() as i64;
    if let Some(w) = desc.character.max_weight() {
        if w > 2 * pp - 2 {
            return Err(Error::Precondition(format!(
                "weight {w} exceeds 2p-2 = {}",
                2 * pp - 2
            )));
        }
    }
    CharacterVector::new(desc.character.0.clone())?;

    let not_tilting = || Error::Inconsistency("not a non-negative tilting combination".into());
    let mut rest = desc.character.clone();
    let mut out = TiltingDecomposition::default();
    for w in (pp..=2 * pp - 2).rev() {
        let k = rest.multiplicity(w);
        if k > 0 {
            rest = rest
                .checked_sub(&char_of(ModuleKind::Tilting, w, p)?, k)
                .ok_or_else(not_tilting)?;
            out.r.insert(2 * pp - 2 - w, k);
        }
    }
    for w in (0..pp).rev() {
        let k = rest.multiplicity(w);
        if k > 0 {
            rest = rest
                .checked_sub(&char_of(ModuleKind::Simple, w, p)?, k)
                .ok_or_else(not_tilting)?;
            out.v.insert(w, k);
        }
    }
    if !rest.is_empty() {
        return Err(not_tilting());
    }
    let count = out.fixed_point_count();
    if count != desc.fix_p as u64 || count != desc.fix_0 as u64 {
        return Err(Error::Inconsistency(format!(
            "fixed-point count mismatch: module not tilting (summands give {count}, fix_p = {}, fix_0 = {})",
            desc.fix_p, desc.fix_0
        )));
    }
    Ok(out)
}

/// Adjoint module `gl_n` under the optimal `SL_2` for the nilpotent class `λ`.
pub fn adjoint_descriptor(partition: &Partition, p: Prime) -> Result<ModuleDescriptor> {
    if partition.largest() > p.get() as usize {
        return Err(Error::Precondition(format!(
            "partition {partition} has a part larger than p = {p}"
        )));
    }
    let w = block_weights(partition);
    let character = CharacterVector::from_weights(w.iter().flat_map(|a| w.iter().map(move |b| a - b)))?;
    let x = rep_from_partition::<Fp>(partition, &p);
    let u = eps_exp(&x)?;
    let fix_p = ad_matrix(&u).nullity();
    Ok(ModuleDescriptor {
        character,
        fix_p,
        fix_0: partition.centralizer_dim(),
        self_dual_known: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TiltReport {
    pub partition: Partition,
    pub p: u32,
    pub character: CharacterVector,
    pub decomposition: Option<TiltingDecomposition>,
    pub summands: Vec<(String, u64)>,
    pub fix_p: usize,
    pub fix_0: usize,
    pub certified: bool,
    pub self_dual_known: bool,
    pub error: Option<String>,
}

pub fn tilt_report(partition: &Partition, p: Prime) -> Result<TiltReport> {
    let desc = adjoint_descriptor(partition, p)?;
    let result = tilting_decompose(&desc, p);
    let (decomposition, error) = match result {
        Ok(d) => (Some(d), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let certified = decomposition
        .as_ref()
        .is_some_and(|d| d.character(p) == desc.character);
    Ok(TiltReport {
        partition: partition.clone(),
        p: p.get(),
        summands: decomposition.as_ref().map(|d| d.summands(p)).unwrap_or_default(),
        character: desc.character,
        decomposition,
        fix_p: desc.fix_p,
        fix_0: desc.fix_0,
        certified,
        self_dual_known: desc.self_dual_known,
        error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Prime {
        Prime::new(q).unwrap()
    }

    fn ch(pairs: &[(i64, u64)]) -> CharacterVector {
        CharacterVector::new(pairs.iter().copied().collect()).unwrap()
    }

    #[test]
    fn characters() {
        assert_eq!(char_of(ModuleKind::Weyl, 2, f(5)).unwrap(), ch(&[(2, 1), (0, 1), (-2, 1)]));
        assert_eq!(
            char_of(ModuleKind::Tilting, 2, f(2)).unwrap(),
            ch(&[(2, 1), (0, 2), (-2, 1)])
        );
        assert_eq!(
            char_of(ModuleKind::Tilting, 4, f(3)).unwrap(),
            ch(&[(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)])
        );
        assert_eq!(
            char_of(ModuleKind::Tilting, 2, f(3)).unwrap(),
            char_of(ModuleKind::Weyl, 2, f(3)).unwrap()
        );
        assert!(char_of(ModuleKind::Simple, 3, f(3)).is_err());
        assert!(char_of(ModuleKind::Tilting, 5, f(3)).is_err());
        assert!(CharacterVector::from_weights([2, 0]).is_err());
    }

    #[test]
    fn fixed_point_dims() {
        for q in [2, 3, 5, 7] {
            assert_eq!(fixdim_of(ModuleKind::Simple, 1, f(q), Characteristic::P).unwrap(), 1);
        }
        assert_eq!(fixdim_of(ModuleKind::Tilting, 2, f(2), Characteristic::P).unwrap(), 2);
        assert_eq!(fixdim_of(ModuleKind::Tilting, 2, f(2), Characteristic::Zero).unwrap(), 2);
        assert_eq!(fixdim_of(ModuleKind::Weyl, 4, f(5), Characteristic::Zero).unwrap(), 1);
        // W(2) over F_2: x ↦ x, xy ↦ x² + xy, y² ↦ y²: fixed space {x², y²}
        assert_eq!(fixdim_of(ModuleKind::Weyl, 2, f(2), Characteristic::P).unwrap(), 2);
        assert_eq!(fixdim_of(ModuleKind::Weyl, 2, f(3), Characteristic::P).unwrap(), 1);
    }

    #[test]
    fn lucas_binomials() {
        assert_eq!(binomial_mod(4, 2, f(2)), 0);
        assert_eq!(binomial_mod(5, 2, f(3)), 1);
        assert_eq!(binomial_mod(6, 3, f(7)), 20 % 7);
    }

    #[test]
    fn golden_decompositions() {
        let gl2 = adjoint_descriptor(&Partition::regular(2), f(2)).unwrap();
        assert_eq!(gl2.character, ch(&[(2, 1), (0, 2), (-2, 1)]));
        assert_eq!((gl2.fix_p, gl2.fix_0), (2, 2));
        let d = tilting_decompose(&gl2, f(2)).unwrap();
        assert_eq!(d.summands(f(2)), vec![("T(2)".to_string(), 1)]);

        let gl3 = adjoint_descriptor(&Partition::regular(3), f(3)).unwrap();
        assert_eq!(gl3.fix_p, 3);
        let d = tilting_decompose(&gl3, f(3)).unwrap();
        assert_eq!(
            d.summands(f(3)),
            vec![("T(4)".to_string(), 1), ("L(2)".to_string(), 1)]
        );

        let empty = ModuleDescriptor {
            character: CharacterVector::default(),
            fix_p: 0,
            fix_0: 0,
            self_dual_known: false,
        };
        assert_eq!(tilting_decompose(&empty, f(5)).unwrap(), TiltingDecomposition::default());
    }

    #[test]
    fn descriptor_examples() {
        let d = adjoint_descriptor(&Partition::regular(2), f(3)).unwrap();
        assert_eq!(d.character, ch(&[(2, 1), (0, 2), (-2, 1)]));
        assert_eq!((d.fix_p, d.fix_0), (2, 2));

        let d = adjoint_descriptor(&Partition::trivial(3), f(2)).unwrap();
        assert_eq!(d.character, ch(&[(0, 9)]));
        assert_eq!((d.fix_p, d.fix_0), (9, 9));

        let d = adjoint_descriptor(&Partition::parse("2,1").unwrap(), f(2)).unwrap();
        assert_eq!(d.character, ch(&[(2, 1), (1, 2), (0, 3), (-1, 2), (-2, 1)]));
        assert_eq!((d.fix_p, d.fix_0), (5, 5));

        assert!(adjoint_descriptor(&Partition::regular(3), f(2)).is_err());
    }

    #[test]
    fn failures_are_reported() {
        let bad_fix = ModuleDescriptor {
            character: ch(&[(2, 1), (0, 2), (-2, 1)]),
            fix_p: 1,
            fix_0: 2,
            self_dual_known: false,
        };
        let err = tilting_decompose(&bad_fix, f(2)).unwrap_err();
        assert!(err.to_string().contains("module not tilting"));
        // a lone weight-2 string at p = 2 needs T(2), which also carries weight 0 twice
        let negative = ModuleDescriptor {
            character: ch(&[(2, 1), (0, 1), (-2, 1)]),
            fix_p: 1,
            fix_0: 1,
            self_dual_known: false,
        };
        let err = tilting_decompose(&negative, f(2)).unwrap_err();
        assert!(err.to_string().contains("non-negative tilting combination"));
    }
}
