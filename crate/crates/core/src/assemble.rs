//! Assembly of the equivariant Euler class of `E̲Γ` and its specializations.
//!
//! For every maximal finite class `F` with trivial fixed lattice the class
//! contributes
//!
//! ```text
//! [Γ/F] + Σ_{H < F, rank C_A(H) ≥ 1} |H|/|F| · e(B_H^F) · [Γ/H]
//! ```
//!
//! where `e(B_H^F)` is the reduced Euler characteristic of the branch poset.
//! Grouping the subgroups `H` by `F`-conjugacy turns the weight into
//! `1/|N_F(H):H|`. Both groupings are computed and must agree.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::classify::{Classification, GammaClass};
use crate::error::{Error, Result};
use crate::matgroup::ElementSet;
use crate::orderposet::build_branch_poset;

/// Formal rational combination of orbit types `[Γ/H]`, keyed by class id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BurnsideElement {
    coefficients: BTreeMap<usize, BigRational>,
}

impl BurnsideElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(class: usize) -> Self {
        let mut b = Self::zero();
        b.add_term(class, BigRational::one());
        b
    }

    pub fn add_term(&mut self, class: usize, coefficient: BigRational) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.coefficients.entry(class).or_insert_with(BigRational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.coefficients.remove(&class);
        }
    }

    pub fn add(&mut self, other: &BurnsideElement) {
        for (&c, q) in &other.coefficients {
            self.add_term(c, q.clone());
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> BurnsideElement {
        let mut out = BurnsideElement::zero();
        for (&c, q) in &self.coefficients {
            out.add_term(c, q * factor);
        }
        out
    }

    pub fn coefficient(&self, class: usize) -> BigRational {
        self.coefficients
            .get(&class)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Nonzero terms in increasing class order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coefficients.iter().map(|(&c, q)| (c, q))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.values().all(BigRational::is_integer)
    }

    /// `Σ coefficient(H) · weight(H)`.
    pub fn evaluate(&self, weight: impl Fn(usize) -> BigRational) -> BigRational {
        self.coefficients
            .iter()
            .map(|(&c, q)| q * weight(c))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Ring maps out of the Burnside group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Specialization {
    /// `[Γ/H] ↦ 1/|H|`
    Orbifold,
    /// `[Γ/H] ↦ 1`, the Euler characteristic of the quotient space.
    Quotient,
    /// `[Γ/H] ↦` number of conjugacy classes of `H`.
    String,
}

impl Specialization {
    pub const ALL: [Specialization; 3] = [
        Specialization::Orbifold,
        Specialization::Quotient,
        Specialization::String,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Specialization::Orbifold => "orbifold",
            Specialization::Quotient => "quotient",
            Specialization::String => "string",
        }
    }
}

impl fmt::Display for Specialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Specialization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "orbifold" => Ok(Specialization::Orbifold),
            "quotient" => Ok(Specialization::Quotient),
            "string" => Ok(Specialization::String),
            other => Err(format!("unknown specialization '{other}'")),
        }
    }
}

/// Weight of a single orbit type under a specialization.
pub fn specialization_weight(
    classification: &Classification,
    class: &GammaClass,
    map: Specialization,
) -> BigRational {
    match map {
        Specialization::Orbifold => BigRational::new(BigInt::one(), BigInt::from(class.order)),
        Specialization::Quotient => BigRational::one(),
        Specialization::String => BigRational::from_integer(BigInt::from(
            classification
                .lattice()
                .class(class.point_class)
                .element_class_count,
        )),
    }
}

pub fn specialize(
    chi: &BurnsideElement,
    classification: &Classification,
    map: Specialization,
) -> BigRational {
    chi.evaluate(|c| specialization_weight(classification, classification.class(c), map))
}

/// One `F`-conjugacy class of subgroups `H < F` with nontrivial fixed lattice.
#[derive(Clone, Debug)]
pub struct BranchTerm {
    /// Point subgroup (a representative of its `F`-class).
    pub lower: ElementSet,
    /// `Γ`-class of the subgroup of the complement lying over `lower`.
    pub lower_class: usize,
    pub reduced_euler: i64,
    /// `1/|N_F(H):H|`
    pub weight: BigRational,
    /// Size of the `F`-conjugacy class of `lower`.
    pub conjugates: usize,
}

/// Contribution of one class of `Ω`.
#[derive(Clone, Debug)]
pub struct OmegaBlock {
    pub omega_class: usize,
    pub terms: Vec<BranchTerm>,
}

impl OmegaBlock {
    pub fn element(&self) -> BurnsideElement {
        let mut b = BurnsideElement::basis(self.omega_class);
        for t in &self.terms {
            b.add_term(
                t.lower_class,
                &t.weight * BigRational::from_integer(BigInt::from(t.reduced_euler)),
            );
        }
        b
    }
}

/// Reduced Euler characteristic of the branch poset between point subgroups
/// `h < f`.
pub fn branch_reduced_euler(
    classification: &Classification,
    h: &ElementSet,
    f: &ElementSet,
) -> Result<i64> {
    let poset = build_branch_poset(h, f, classification.lattice(), |i| {
        classification.subgroup_fixed_rank(i)
    })?;
    Ok(poset.reduced_euler_characteristic())
}

/// Lattice indices of the proper subgroups of `f` with positive fixed rank.
fn lower_subgroups(classification: &Classification, f: &ElementSet) -> Vec<usize> {
    classification
        .lattice()
        .subgroups()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.len() < f.len() && s.is_subset(f))
        .filter(|(i, _)| classification.subgroup_fixed_rank(*i) >= 1)
        .map(|(i, _)| i)
        .collect()
}

/// Per-`Ω`-class blocks with subgroups grouped up to conjugacy in `F`.
pub fn omega_blocks(classification: &Classification) -> Result<Vec<OmegaBlock>> {
    let group = classification.group();
    let subgroups = classification.lattice().subgroups();
    let mut blocks = Vec::new();
    for omega in classification.omega_classes() {
        let f = classification.point_subgroup(omega);
        let mut assigned = vec![false; subgroups.len()];
        let mut terms = Vec::new();
        for i in lower_subgroups(classification, f) {
            if assigned[i] {
                continue;
            }
            let h = &subgroups[i];
            let mut conjugates = 0;
            let mut normalizer_order = 0;
            for x in f.iter() {
                let c = group.conj_set(x, h);
                if c == *h {
                    normalizer_order += 1;
                }
                let ci = classification
                    .lattice()
                    .index_of(&c)
                    .expect("conjugate of a subgroup is a subgroup");
                if !assigned[ci] {
                    assigned[ci] = true;
                    conjugates += 1;
                }
            }
            let reduced_euler = branch_reduced_euler(classification, h, f)?;
            let lower_class = classification.locate(&omega.representative.restrict(h))?;
            terms.push(BranchTerm {
                lower: h.clone(),
                lower_class,
                reduced_euler,
                weight: BigRational::new(
                    BigInt::from(h.len()),
                    BigInt::from(normalizer_order),
                ),
                conjugates,
            });
        }
        blocks.push(OmegaBlock {
            omega_class: omega.class_id,
            terms,
        });
    }
    Ok(blocks)
}

/// Sum over `Ω` of `[Γ/F] + Σ_{H up to F-conjugacy} 1/|N_F(H):H| e(B_H^F) [Γ/H]`.
pub fn toroidal_euler_class(classification: &Classification) -> Result<BurnsideElement> {
    let mut chi = BurnsideElement::zero();
    for block in omega_blocks(classification)? {
        chi.add(&block.element());
    }
    Ok(chi)
}

/// Sum over `Ω` of `[Γ/F] + Σ_{every H < F} |H|/|F| e(B_H^F) [Γ/H]`.
pub fn all_subgroups_euler_class(classification: &Classification) -> Result<BurnsideElement> {
    let subgroups = classification.lattice().subgroups();
    let mut chi = BurnsideElement::zero();
    for omega in classification.omega_classes() {
        let f = classification.point_subgroup(omega);
        chi.add_term(omega.class_id, BigRational::one());
        for i in lower_subgroups(classification, f) {
            let h = &subgroups[i];
            let e = branch_reduced_euler(classification, h, f)?;
            let class = classification.locate(&omega.representative.restrict(h))?;
            chi.add_term(
                class,
                BigRational::new(BigInt::from(h.len() as i64 * e), BigInt::from(f.len())),
            );
        }
    }
    Ok(chi)
}

#[derive(Clone, Debug)]
pub struct EulerClassReport {
    pub chi: BurnsideElement,
    pub blocks: Vec<OmegaBlock>,
}

/// The equivariant Euler class, cross-checked between both groupings and
/// required to be integral.
pub fn equivariant_euler_class(classification: &Classification) -> Result<EulerClassReport> {
    let blocks = omega_blocks(classification)?;
    let mut chi = BurnsideElement::zero();
    for block in &blocks {
        chi.add(&block.element());
    }
    let other = all_subgroups_euler_class(classification)?;
    if chi != other {
        return Err(Error::PathMismatch(format!(
            "per-class {:?} vs all-subgroups {:?}",
            chi, other
        )));
    }
    if let Some((class, q)) = chi.terms().find(|(_, q)| !q.is_integer()) {
        return Err(Error::NonIntegralCoefficient {
            class: classification.class(class).label.clone(),
            coefficient: q.to_string(),
        });
    }
    Ok(EulerClassReport { chi, blocks })
}
