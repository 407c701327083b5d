//! Ground sets, subsets as bitmasks, and dense exact rank vectors.
//!
//! A rank vector stores one value per subset of its ground set, indexed by
//! the subset's bitmask (bit `i` set means element `i` is a member). Subsets
//! are always visited in ascending mask order, which makes every scan that
//! reports an argmin deterministic.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use crate::error::{input, Error, Result};
use crate::rational::{self, Rational, Scaled};

/// Largest supported ground set.
pub const MAX_ELEMENTS: usize = 24;

/// A subset of the ground set, as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn singleton(i: usize) -> Self {
        SubsetMask(1 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elems: I) -> Self {
        SubsetMask(elems.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn difference(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    /// Element indices in ascending order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All submasks of `self`, ascending.
    pub fn submasks(self) -> impl Iterator<Item = SubsetMask> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            // (cur - full) & full steps to the next submask in ascending order
            let step = cur.wrapping_sub(full) & full;
            next = if cur == full { None } else { Some(step) };
            Some(SubsetMask(cur))
        })
    }
}

impl fmt::LowerHex for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

/// An indexed ground set of `n` elements with optional display labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::Size(format!(
                "ground set of {n} elements exceeds the limit of {MAX_ELEMENTS}"
            )));
        }
        Ok(GroundSet { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut g = GroundSet::new(labels.len())?;
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return input(format!("duplicate label {l:?}"));
            }
        }
        g.labels = Some(labels);
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("x{}", i + 1),
        }
    }

    /// Index of the element with the given label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// Mask of the labelled elements; panics on an unknown label, so only
    /// meant for fixed constructions.
    pub fn mask_of(&self, labels: &[&str]) -> SubsetMask {
        SubsetMask::from_elements(labels.iter().map(|l| {
            self.index_of(l)
                .unwrap_or_else(|| panic!("unknown label {l}"))
        }))
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask(((1u64 << self.n) - 1) as u32)
    }

    pub fn subset_count(&self) -> usize {
        1 << self.n
    }

    pub fn check(&self, a: SubsetMask) -> Result<()> {
        if a.is_subset_of(self.full()) {
            Ok(())
        } else {
            input(format!("mask {a:#x} out of range for {} elements", self.n))
        }
    }

    /// Renders a subset as concatenated labels, e.g. `W1W2`.
    pub fn describe(&self, a: SubsetMask) -> String {
        if a.is_empty() {
            return "∅".into();
        }
        a.elements().map(|i| self.label(i)).collect()
    }
}

/// Exact rank value for every subset of a ground set.
#[derive(Clone, Debug)]
pub struct RankVector {
    ground: GroundSet,
    values: Vec<Rational>,
    scaled: OnceLock<Option<Scaled>>,
}

impl PartialEq for RankVector {
    fn eq(&self, other: &Self) -> bool {
        self.ground.len() == other.ground.len() && self.values == other.values
    }
}

impl Eq for RankVector {}

impl RankVector {
    pub fn new(ground: GroundSet, values: Vec<Rational>) -> Result<Self> {
        if values.len() != ground.subset_count() {
            return input(format!(
                "rank vector for {} elements needs {} values, got {}",
                ground.len(),
                ground.subset_count(),
                values.len()
            ));
        }
        Ok(RankVector {
            ground,
            values,
            scaled: OnceLock::new(),
        })
    }

    pub fn zeros(ground: GroundSet) -> Self {
        let values = vec![Rational::zero(); ground.subset_count()];
        RankVector::new(ground, values).expect("length matches")
    }

    /// Builds a rank vector from a function of the subset mask.
    pub fn from_fn(ground: GroundSet, f: impl FnMut(SubsetMask) -> Rational) -> Self {
        let values = (0..ground.subset_count() as u32)
            .map(SubsetMask)
            .map(f)
            .collect();
        RankVector::new(ground, values).expect("length matches")
    }

    pub fn from_integers(ground: GroundSet, values: &[i64]) -> Result<Self> {
        RankVector::new(ground, values.iter().map(|&v| rational::int(v)).collect())
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn with_ground(mut self, ground: GroundSet) -> Result<Self> {
        if ground.len() != self.ground.len() {
            return input("relabelling must keep the element count");
        }
        self.ground = ground;
        Ok(self)
    }

    /// Scaled-integer view used by the scans, or `None` when the
    /// denominators are too large for machine integers.
    pub fn scaled(&self) -> Option<&Scaled> {
        self.scaled
            .get_or_init(|| Scaled::from_rationals(&self.values))
            .as_ref()
    }

    /// Stored value for `a`.
    pub fn rank(&self, a: SubsetMask) -> Result<&Rational> {
        self.ground.check(a)?;
        Ok(&self.values[a.0 as usize])
    }

    /// Unchecked lookup for masks already known to be in range.
    #[inline]
    pub fn at(&self, a: SubsetMask) -> &Rational {
        &self.values[a.0 as usize]
    }

    pub fn full_rank(&self) -> &Rational {
        self.at(self.ground.full())
    }

    /// `H(A | C) = h(AC) - h(C)`.
    pub fn cond_entropy(&self, a: SubsetMask, c: SubsetMask) -> Result<Rational> {
        self.ground.check(a)?;
        self.ground.check(c)?;
        Ok(self.at(a.union(c)) - self.at(c))
    }

    /// `I(A;B | C) = h(AC) + h(BC) - h(C) - h(ABC)`.
    pub fn mutual_info(&self, a: SubsetMask, b: SubsetMask, c: SubsetMask) -> Result<Rational> {
        for m in [a, b, c] {
            self.ground.check(m)?;
        }
        let ac = self.at(a.union(c));
        let bc = self.at(b.union(c));
        let abc = self.at(a.union(b).union(c));
        Ok(ac + bc - self.at(c) - abc)
    }

    /// Multiplies every entry by `c >= 0`.
    pub fn scale(&self, c: &Rational) -> Result<RankVector> {
        if c.is_negative() {
            return input("scale factor must be nonnegative");
        }
        let values = self.values.iter().map(|v| v * c).collect();
        RankVector::new(self.ground.clone(), values)
    }

    /// Rank function induced on `k = subsets.len()` new elements, where new
    /// element `i` stands for the subset `subsets[i]` of this ground set.
    pub fn induce(&self, subsets: &[SubsetMask]) -> Result<RankVector> {
        let ground = GroundSet::new(subsets.len())?;
        for &s in subsets {
            self.ground.check(s)?;
        }
        // union of the chosen subsets, built from the mask minus its lowest bit
        let mut unions = vec![SubsetMask::EMPTY; ground.subset_count()];
        for alpha in 1..unions.len() {
            let low = alpha.trailing_zeros() as usize;
            unions[alpha] = unions[alpha & (alpha - 1)].union(subsets[low]);
        }
        Ok(RankVector::from_fn(ground, |a| {
            self.at(unions[a.0 as usize]).clone()
        }))
    }

    /// Restriction to the elements of `a`, in ascending index order, keeping
    /// their labels.
    pub fn restrict(&self, a: SubsetMask) -> Result<RankVector> {
        let elems: Vec<usize> = a.elements().collect();
        let singles: Vec<SubsetMask> = elems.iter().map(|&i| SubsetMask::singleton(i)).collect();
        let h = self.induce(&singles)?;
        match self.ground.labels() {
            Some(l) => h.with_ground(GroundSet::with_labels(
                elems.iter().map(|&i| l[i].clone()).collect(),
            )?),
            None => Ok(h),
        }
    }

    /// All masks in ascending order.
    pub fn masks(&self) -> impl Iterator<Item = SubsetMask> {
        (0..self.ground.subset_count() as u32).map(SubsetMask)
    }
}
