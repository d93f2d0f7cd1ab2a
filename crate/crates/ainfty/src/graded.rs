//! Z-graded vector spaces with a filtration by positive weights, sparse
//! elements over them, and the Koszul sign rule.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// One basis vector: a name, a cohomological degree, and a filtration weight.
///
/// The filtration `F^k A` is the span of the basis vectors of weight >= k,
/// so `F^1 A = A` and weights are always >= 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BasisVector {
    name: String,
    degree: i64,
    weight: u32,
}

impl BasisVector {
    pub fn new(name: impl Into<String>, degree: i64, weight: u32) -> BasisVector {
        BasisVector {
            name: name.into(),
            degree,
            weight,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }
}

/// A finite-basis graded vector space over a fixed field.
#[derive(Clone, Debug)]
pub struct GradedSpace {
    field: FieldSpec,
    basis: Vec<BasisVector>,
    index: BTreeMap<String, u32>,
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.basis == other.basis
    }
}

impl Eq for GradedSpace {}

impl GradedSpace {
    pub fn new(field: FieldSpec, basis: Vec<BasisVector>) -> Result<Arc<GradedSpace>> {
        let mut index = BTreeMap::new();
        for (i, v) in basis.iter().enumerate() {
            if v.name.is_empty() || v.name.contains(char::is_whitespace) || v.name == "->" {
                return Err(Error::BadBasisName(v.name.clone()));
            }
            if v.weight == 0 {
                return Err(Error::ZeroWeight(v.name.clone()));
            }
            if index.insert(v.name.clone(), i as u32).is_some() {
                return Err(Error::DuplicateBasisName(v.name.clone()));
            }
        }
        Ok(Arc::new(GradedSpace {
            field,
            basis,
            index,
        }))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn vector(&self, i: u32) -> &BasisVector {
        &self.basis[i as usize]
    }

    pub fn index_of(&self, name: &str) -> Result<u32> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    pub fn degree(&self, i: u32) -> i64 {
        self.basis[i as usize].degree
    }

    pub fn weight(&self, i: u32) -> u32 {
        self.basis[i as usize].weight
    }

    /// Indices of all basis vectors of the given degree.
    pub fn indices_of_degree(&self, degree: i64) -> Vec<u32> {
        (0..self.dim() as u32)
            .filter(|&i| self.degree(i) == degree)
            .collect()
    }
}

/// Spaces agree when they are the same allocation or structurally equal.
pub(crate) fn same_space(a: &Arc<GradedSpace>, b: &Arc<GradedSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A filtration weight: finite, or infinite for the zero element.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Weight {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(w) => write!(f, "{}", w),
            Weight::Infinite => write!(f, "inf"),
        }
    }
}

/// A sparse linear combination of basis vectors.
///
/// Zero coefficients are never stored, so equality is coefficient-wise
/// equality of the canonical form.
#[derive(Clone, Debug)]
pub struct Element {
    space: Arc<GradedSpace>,
    terms: BTreeMap<u32, Scalar>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.terms == other.terms
    }
}

impl Eq for Element {}

impl Element {
    pub fn zero(space: &Arc<GradedSpace>) -> Element {
        Element {
            space: Arc::clone(space),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(space: &Arc<GradedSpace>, i: u32) -> Element {
        let mut terms = BTreeMap::new();
        terms.insert(i, space.field().one());
        Element {
            space: Arc::clone(space),
            terms,
        }
    }

    pub fn basis_named(space: &Arc<GradedSpace>, name: &str) -> Result<Element> {
        Ok(Element::basis(space, space.index_of(name)?))
    }

    pub fn from_terms(
        space: &Arc<GradedSpace>,
        terms: impl IntoIterator<Item = (u32, Scalar)>,
    ) -> Element {
        let mut out = Element::zero(space);
        for (i, c) in terms {
            out.add_term(i, &c);
        }
        out
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn coeff(&self, i: u32) -> Scalar {
        self.terms
            .get(&i)
            .cloned()
            .unwrap_or_else(|| self.space.field().zero())
    }

    pub(crate) fn add_term(&mut self, i: u32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        assert!(
            same_space(&self.space, &other.space),
            "elements over different graded spaces"
        );
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c);
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        Element {
            space: Arc::clone(&self.space),
            terms: self.terms.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(&self.space);
        }
        Element {
            space: Arc::clone(&self.space),
            terms: self.terms.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    /// The common degree of all terms, if the element is homogeneous and
    /// nonzero.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut deg = None;
        for (i, _) in self.terms() {
            let d = self.space.degree(i);
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Split into homogeneous pieces, keyed by degree.
    pub fn by_degree(&self) -> BTreeMap<i64, Element> {
        let mut out: BTreeMap<i64, Element> = BTreeMap::new();
        for (i, c) in self.terms() {
            out.entry(self.space.degree(i))
                .or_insert_with(|| Element::zero(&self.space))
                .add_term(i, c);
        }
        out
    }

    /// Largest k with x in F^k: the minimum basis weight over the support,
    /// infinite for zero.
    pub fn filtration_weight(&self) -> Weight {
        self.terms()
            .map(|(i, _)| Weight::Finite(self.space.weight(i)))
            .min()
            .unwrap_or(Weight::Infinite)
    }

    /// Extends a basis-indexed map linearly: sums `coeff * f(i)` over terms.
    pub fn apply_basis_map<F>(&self, target: &Arc<GradedSpace>, mut f: F) -> Element
    where
        F: FnMut(u32) -> Element,
    {
        let mut out = Element::zero(target);
        for (i, c) in self.terms() {
            out = out.add(&f(i).scale(c));
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.terms() {
            let name = self.space.vector(i).name();
            if first {
                first = false;
                if c.is_one() {
                    write!(f, "{}", name)?;
                } else {
                    write!(f, "{}*{}", c, name)?;
                }
            } else if c.is_one() {
                write!(f, " + {}", name)?;
            } else if crate::field::rational_is_negative(c) {
                let pos = -c;
                if pos.is_one() {
                    write!(f, " - {}", name)?;
                } else {
                    write!(f, " - {}*{}", pos, name)?;
                }
            } else {
                write!(f, " + {}*{}", c, name)?;
            }
        }
        Ok(())
    }
}

/// Koszul sign of the permutation that reorders homogeneous items.
///
/// `perm[i]` is the original position of the item that ends up in slot `i`;
/// `degrees[j]` is the degree of the item originally in slot `j`. Every
/// transposition of adjacent items of degrees `d`, `e` contributes
/// `(-1)^(d*e)`; the result does not depend on the decomposition.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<i64> {
    if perm.len() != degrees.len() {
        return Err(Error::PermutationLength {
            perm: perm.len(),
            degrees: degrees.len(),
        });
    }
    let k = perm.len();
    let mut seen = vec![false; k];
    for &p in perm {
        if p >= k || seen[p] {
            return Err(Error::NotPermutation(k));
        }
        seen[p] = true;
    }
    let mut odd_crossings = 0usize;
    for i in 0..k {
        for j in (i + 1)..k {
            if perm[i] > perm[j] && degrees[perm[i]] % 2 != 0 && degrees[perm[j]] % 2 != 0 {
                odd_crossings += 1;
            }
        }
    }
    Ok(if odd_crossings % 2 == 0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> Arc<GradedSpace> {
        GradedSpace::new(
            FieldSpec::RATIONALS,
            vec![
                BasisVector::new("u", 0, 1),
                BasisVector::new("v", 1, 2),
                BasisVector::new("w", -1, 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn construction_checks() {
        let f = FieldSpec::RATIONALS;
        assert!(GradedSpace::new(
            f,
            vec![BasisVector::new("a", 0, 1), BasisVector::new("a", 1, 1)]
        )
        .is_err());
        assert!(GradedSpace::new(f, vec![BasisVector::new("a", 0, 0)]).is_err());
        assert!(GradedSpace::new(f, vec![BasisVector::new("a b", 0, 1)]).is_err());
        assert!(GradedSpace::new(f, vec![BasisVector::new("", 0, 1)]).is_err());
    }

    #[test]
    fn canonical_sparse_form() {
        let s = space();
        let u = Element::basis_named(&s, "u").unwrap();
        let sum = u.add(&u.neg());
        assert!(sum.is_zero());
        assert_eq!(sum, Element::zero(&s));
    }

    #[test]
    fn degrees_and_weights() {
        let s = space();
        let u = Element::basis_named(&s, "u").unwrap();
        let v = Element::basis_named(&s, "v").unwrap();
        assert_eq!(u.homogeneous_degree(), Some(0));
        assert_eq!(u.add(&v).homogeneous_degree(), None);
        assert_eq!(u.add(&v).filtration_weight(), Weight::Finite(1));
        assert_eq!(v.filtration_weight(), Weight::Finite(2));
        assert_eq!(Element::zero(&s).filtration_weight(), Weight::Infinite);
    }

    #[test]
    fn weight_laws() {
        let s = space();
        let u = Element::basis_named(&s, "u").unwrap();
        let v = Element::basis_named(&s, "v").unwrap();
        let c = FieldSpec::RATIONALS.from_i64(7);
        assert!(u.add(&v).filtration_weight() >= u.filtration_weight().min(v.filtration_weight()));
        assert_eq!(v.scale(&c).filtration_weight(), v.filtration_weight());
    }

    #[test]
    fn koszul_sign_basics() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), -1);
        assert_eq!(koszul_sign(&[1, 0], &[0, 5]).unwrap(), 1);
        // A 3-cycle on three odd generators: two adjacent swaps.
        assert_eq!(koszul_sign(&[2, 0, 1], &[1, 1, 1]).unwrap(), 1);
        assert!(koszul_sign(&[0, 0], &[1, 1]).is_err());
        assert!(koszul_sign(&[0], &[1, 1]).is_err());
    }

    #[test]
    fn koszul_sign_is_multiplicative() {
        // Compose sigma after tau and compare sign(sigma tau) with the
        // product of stepwise signs, exhaustively for k <= 4.
        fn permutations(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for rest in permutations(k - 1) {
                for pos in 0..=rest.len() {
                    let mut p = rest.clone();
                    p.insert(pos, k - 1);
                    out.push(p);
                }
            }
            out
        }
        for k in 0..=4 {
            let degrees: Vec<i64> = (0..k as i64).map(|d| d % 3 - 1).collect();
            for sigma in permutations(k) {
                for tau in permutations(k) {
                    // tau first, then sigma on the already-permuted list.
                    let composed: Vec<usize> = sigma.iter().map(|&i| tau[i]).collect();
                    let tau_degrees: Vec<i64> = (0..k).map(|i| degrees[tau[i]]).collect();
                    let s1 = koszul_sign(&tau, &degrees).unwrap();
                    let s2 = koszul_sign(&sigma, &tau_degrees).unwrap();
                    let s12 = koszul_sign(&composed, &degrees).unwrap();
                    assert_eq!(s12, s1 * s2, "sigma={:?} tau={:?}", sigma, tau);
                }
            }
        }
    }
}
